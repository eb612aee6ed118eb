//! Tagged arcs of a once-punctured polygon with boundary vertices `0..m` in
//! counterclockwise order.
//!
//! A chord `(from, to)` runs from `from` to `to` with the puncture on its left,
//! so it cuts off the boundary segments `from, from + 1, ..., to - 1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ArcModel, FiniteArcModel, ModelError};
use crate::surface::MarkedSurface;
use crate::triangulation::fixtures::{bd, mp};
use crate::triangulation::{
    IdealTriangulation, MarkedPoint, Side, Tag, TaggedTriangulation, Triangle,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PuncturedArc {
    Chord { from: usize, to: usize },
    Radius { vertex: usize, tag: Tag },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PuncturedModel {
    m: usize,
}

impl PuncturedModel {
    pub fn new(m: usize) -> Result<Self, ModelError> {
        if m == 0 || m > 128 {
            return Err(ModelError::UnsupportedSurface(format!("punctured {m}-gon")));
        }
        Ok(PuncturedModel { m })
    }

    pub fn vertices(&self) -> usize {
        self.m
    }

    fn span(&self, from: usize, to: usize) -> usize {
        (to + self.m - from) % self.m
    }

    /// Bit mask of the boundary segments cut off by a chord.
    fn segments(&self, from: usize, to: usize) -> u128 {
        (0..self.span(from, to)).fold(0u128, |acc, k| acc | 1 << ((from + k) % self.m))
    }

    /// Whether `v` lies strictly between `from` and `to` going counterclockwise.
    fn strictly_inside(&self, from: usize, to: usize, v: usize) -> bool {
        let d = self.span(from, v);
        d > 0 && d < self.span(from, to)
    }
}

impl ArcModel for PuncturedModel {
    type Arc = PuncturedArc;

    fn surface(&self) -> MarkedSurface {
        MarkedSurface::punctured_polygon(self.m).expect("m >= 1")
    }

    fn is_valid(&self, a: &PuncturedArc) -> bool {
        match *a {
            PuncturedArc::Chord { from, to } => {
                from < self.m && to < self.m && (2..self.m).contains(&self.span(from, to))
            }
            PuncturedArc::Radius { vertex, .. } => vertex < self.m,
        }
    }

    fn compatible(&self, a: &PuncturedArc, b: &PuncturedArc) -> bool {
        use PuncturedArc::*;
        match (*a, *b) {
            (Radius { vertex: v, tag: s }, Radius { vertex: w, tag: t }) => s == t || v == w,
            (Chord { from, to }, Radius { vertex, .. })
            | (Radius { vertex, .. }, Chord { from, to }) => {
                !self.strictly_inside(from, to, vertex)
            }
            (Chord { from: f1, to: t1 }, Chord { from: f2, to: t2 }) => {
                let (s1, s2) = (self.segments(f1, t1), self.segments(f2, t2));
                let common = s1 & s2;
                common == 0 || common == s1 || common == s2
            }
        }
    }

    fn rotate(&self, a: &PuncturedArc) -> PuncturedArc {
        match *a {
            PuncturedArc::Chord { from, to } => PuncturedArc::Chord {
                from: (from + 1) % self.m,
                to: (to + 1) % self.m,
            },
            PuncturedArc::Radius { vertex, tag } => PuncturedArc::Radius {
                vertex: (vertex + 1) % self.m,
                tag: tag.toggled(),
            },
        }
    }

    fn flip_candidates(&self, _arcs: &[PuncturedArc]) -> Vec<PuncturedArc> {
        self.enumerate_arcs()
    }

    /// Nested chords from vertex 0 plus plain radii at `0` and `m - 1`.
    fn initial(&self) -> Vec<PuncturedArc> {
        let m = self.m;
        let mut arcs: Vec<PuncturedArc> = (2..m)
            .map(|to| PuncturedArc::Chord { from: 0, to })
            .collect();
        arcs.push(PuncturedArc::Radius {
            vertex: 0,
            tag: Tag::Plain,
        });
        if m > 1 {
            arcs.push(PuncturedArc::Radius {
                vertex: m - 1,
                tag: Tag::Plain,
            });
        }
        arcs
    }

    fn realize(&self, arcs: &[PuncturedArc]) -> Result<TaggedTriangulation, ModelError> {
        let m = self.m;
        let bad = |msg: String| ModelError::NotTriangulation(msg);
        let puncture = MarkedPoint::Puncture(0);
        let mut radii: Vec<(usize, usize, Tag)> = Vec::new();
        // (start, length) -> slot, length in 2..=m; length m is a loop.
        let mut chords: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (slot, a) in arcs.iter().enumerate() {
            match *a {
                PuncturedArc::Radius { vertex, tag } => radii.push((slot, vertex, tag)),
                PuncturedArc::Chord { from, to } => {
                    chords.insert((from, self.span(from, to)), slot);
                }
            }
        }
        if m == 1 {
            let &[(slot, _, tag)] = radii.as_slice() else {
                return Err(bad("once-punctured monogon needs one radius".into()));
            };
            let tri = Triangle::new(
                [bd(0, 0), Side::Arc(slot), Side::Arc(slot)],
                [mp(0, 0), mp(0, 0), puncture],
            );
            let ideal = IdealTriangulation::new(self.surface(), vec![tri])?;
            return Ok(TaggedTriangulation::new(ideal, vec![tag])?);
        }
        // A plain/notched pair at one vertex becomes a radius and its loop.
        let mut pair = None;
        for &(s1, v1, t1) in &radii {
            for &(s2, v2, t2) in &radii {
                if v1 == v2 && t1 == Tag::Plain && t2 == Tag::Notched {
                    pair = Some((s1, s2, v1));
                }
            }
        }
        let sign = match pair {
            Some(_) => Tag::Plain,
            None => radii
                .first()
                .map(|r| r.2)
                .ok_or_else(|| bad("no radius".into()))?,
        };
        let mut radius_at: BTreeMap<usize, usize> = BTreeMap::new();
        for &(slot, v, _) in &radii {
            if pair.is_some_and(|(_, loop_slot, _)| loop_slot == slot) {
                continue;
            }
            radius_at.insert(v, slot);
        }
        if let Some((_, loop_slot, k)) = pair {
            chords.insert((k, m), loop_slot);
        }
        let side = |start: usize, len: usize| -> Result<Side, ModelError> {
            if len == 1 {
                Ok(bd(0, start % m))
            } else {
                chords
                    .get(&(start % m, len))
                    .map(|&s| Side::Arc(s))
                    .ok_or_else(|| bad(format!("no chord from {start} of length {len}")))
            }
        };
        let mut triangles = Vec::new();
        for (&(x, len), &slot) in &chords {
            let y = (1..len)
                .find(|&d| {
                    (d == 1 || chords.contains_key(&(x, d)))
                        && (len - d == 1 || chords.contains_key(&((x + d) % m, len - d)))
                })
                .ok_or_else(|| bad(format!("chord from {x} of length {len} bounds no triangle")))?;
            triangles.push(Triangle::new(
                [side(x, y)?, side(x + y, len - y)?, Side::Arc(slot)],
                [mp(0, x), mp(0, (x + y) % m), mp(0, (x + len) % m)],
            ));
        }
        if let Some((radius, loop_slot, k)) = pair {
            triangles.push(Triangle::new(
                [Side::Arc(loop_slot), Side::Arc(radius), Side::Arc(radius)],
                [mp(0, k), mp(0, k), puncture],
            ));
        } else {
            // Walk the cycle of maximal chords and uncovered segments.
            let covered = |v: usize| {
                chords
                    .keys()
                    .any(|&(f, len)| len < m && self.strictly_inside(f, (f + len) % m, v))
            };
            let start = (0..m)
                .find(|&v| !covered(v))
                .ok_or_else(|| bad("no outer vertex".into()))?;
            let mut v = start;
            loop {
                let longest = chords
                    .keys()
                    .filter(|&&(f, _)| f == v)
                    .map(|&(_, len)| len)
                    .max()
                    .unwrap_or(1);
                let w = (v + longest) % m;
                let (rv, rw) = match (radius_at.get(&v), radius_at.get(&w)) {
                    (Some(&a), Some(&b)) => (a, b),
                    _ => return Err(bad(format!("missing radius at {v} or {w}"))),
                };
                triangles.push(Triangle::new(
                    [side(v, longest)?, Side::Arc(rw), Side::Arc(rv)],
                    [mp(0, v), mp(0, w), puncture],
                ));
                v = w;
                if v == start {
                    break;
                }
            }
        }
        let ideal = IdealTriangulation::new(self.surface(), triangles)?;
        Ok(TaggedTriangulation::new(ideal, vec![sign])?)
    }
}

impl FiniteArcModel for PuncturedModel {
    fn enumerate_arcs(&self) -> Vec<PuncturedArc> {
        let mut out = Vec::new();
        for from in 0..self.m {
            for to in 0..self.m {
                let c = PuncturedArc::Chord { from, to };
                if self.is_valid(&c) {
                    out.push(c);
                }
            }
        }
        for vertex in 0..self.m {
            for tag in [Tag::Plain, Tag::Notched] {
                out.push(PuncturedArc::Radius { vertex, tag });
            }
        }
        out
    }
}
