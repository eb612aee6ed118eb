//! Arcs of an annulus with `m1` outer and `m2` inner marked points, computed in
//! the universal cover.
//!
//! The cover is the strip `R x [0, 1]`. Outer point `o` (any integer lift)
//! sits on the bottom line at `x = o / m1`, inner point `u` on the top line at
//! `x = -u / m2`, so both indices increase along the boundary orientation.
//! The deck transformation sends `(o, u)` to `(o + m1, u - m2)`.
//!
//! Arcs lift to chords of the strip. Going around the strip counterclockwise
//! (bottom line left to right, then top line right to left) orders boundary
//! points as `(0, o * m2)` and `(1, u * m1)` lexicographically; two arcs cross
//! iff some lifts have strictly interleaved endpoints.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ArcModel, ModelError};
use crate::surface::MarkedSurface;
use crate::triangulation::fixtures::{bd, mp};
use crate::triangulation::{IdealTriangulation, Side, TaggedTriangulation, Triangle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnnulusArc {
    /// Lifts to the chord from outer lift `outer` to inner lift
    /// `inner + winding * m2`; winding 0 with both indices 0 is the straight
    /// bridge.
    Bridge {
        outer: usize,
        inner: usize,
        winding: i64,
    },
    /// Arc with both ends on `component` cutting off the `span` boundary
    /// segments starting at `start`.
    Peripheral {
        component: usize,
        start: usize,
        span: usize,
    },
}

/// A point of the strip boundary: `(line, position)`, line 0 at the bottom.
type Point = (u8, i64);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnulusModel {
    m1: usize,
    m2: usize,
}

impl AnnulusModel {
    pub fn new(m1: usize, m2: usize) -> Result<Self, ModelError> {
        if m1 == 0 || m2 == 0 {
            return Err(ModelError::UnsupportedSurface(format!(
                "annulus ({m1},{m2})"
            )));
        }
        Ok(AnnulusModel { m1, m2 })
    }

    fn period(&self) -> i64 {
        (self.m1 * self.m2) as i64
    }

    fn outer_point(&self, o: i64) -> Point {
        (0, o * self.m2 as i64)
    }

    fn inner_point(&self, u: i64) -> Point {
        (1, u * self.m1 as i64)
    }

    fn translate(&self, p: Point, k: i64) -> Point {
        match p.0 {
            0 => (0, p.1 + k * self.period()),
            _ => (1, p.1 - k * self.period()),
        }
    }

    /// Endpoints of the standard lift, in strip order.
    fn lift(&self, a: &AnnulusArc) -> (Point, Point) {
        match *a {
            AnnulusArc::Bridge {
                outer,
                inner,
                winding,
            } => (
                self.outer_point(outer as i64),
                self.inner_point(inner as i64 + winding * self.m2 as i64),
            ),
            AnnulusArc::Peripheral {
                component: 0,
                start,
                span,
            } => (
                self.outer_point(start as i64),
                self.outer_point((start + span) as i64),
            ),
            AnnulusArc::Peripheral { start, span, .. } => (
                self.inner_point(start as i64),
                self.inner_point((start + span) as i64),
            ),
        }
    }

    /// Normal form of the arc with a lift between two strip points; `None`
    /// for boundary segments and degenerate chords.
    fn arc_of(&self, p: Point, q: Point) -> Option<AnnulusArc> {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        let (m1, m2) = (self.m1 as i64, self.m2 as i64);
        match (p.0, q.0) {
            (0, 0) => {
                let (o1, o2) = (p.1 / m2, q.1 / m2);
                let span = (o2 - o1) as usize;
                (2..=self.m1)
                    .contains(&span)
                    .then_some(AnnulusArc::Peripheral {
                        component: 0,
                        start: o1.rem_euclid(m1) as usize,
                        span,
                    })
            }
            (1, 1) => {
                let (u1, u2) = (p.1 / m1, q.1 / m1);
                let span = (u2 - u1) as usize;
                (2..=self.m2)
                    .contains(&span)
                    .then_some(AnnulusArc::Peripheral {
                        component: 1,
                        start: u1.rem_euclid(m2) as usize,
                        span,
                    })
            }
            _ => {
                let (o, u) = (p.1 / m2, q.1 / m1);
                let k = o.div_euclid(m1);
                let (o, u) = (o - k * m1, u + k * m2);
                Some(AnnulusArc::Bridge {
                    outer: o as usize,
                    inner: u.rem_euclid(m2) as usize,
                    winding: u.div_euclid(m2),
                })
            }
        }
    }

    fn extent(&self, a: &AnnulusArc) -> (i64, i64) {
        // x-coordinates scaled by m1 * m2: bottom at position, top at -position.
        let x = |p: Point| if p.0 == 0 { p.1 } else { -p.1 };
        let (p, q) = self.lift(a);
        (x(p).min(x(q)), x(p).max(x(q)))
    }

    /// Deck powers `k` for which a translate of `b` may meet the lift of `a`.
    fn deck_range(&self, a: &AnnulusArc, b: &AnnulusArc) -> std::ops::RangeInclusive<i64> {
        let (a0, a1) = self.extent(a);
        let (b0, b1) = self.extent(b);
        let p = self.period();
        ((a0 - b1).div_euclid(p) - 1)..=((a1 - b0).div_euclid(p) + 1)
    }

    fn segment_side(&self, p: Point, q: Point) -> Option<Side> {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        let (m1, m2) = (self.m1 as i64, self.m2 as i64);
        match (p.0, q.0) {
            (0, 0) if q.1 - p.1 == m2 => Some(bd(0, (p.1 / m2).rem_euclid(m1) as usize)),
            (1, 1) if q.1 - p.1 == m1 => Some(bd(1, (p.1 / m1).rem_euclid(m2) as usize)),
            _ => None,
        }
    }

    fn marked_point(&self, p: Point) -> crate::triangulation::MarkedPoint {
        match p.0 {
            0 => mp(
                0,
                (p.1 / self.m2 as i64).rem_euclid(self.m1 as i64) as usize,
            ),
            _ => mp(
                1,
                (p.1 / self.m1 as i64).rem_euclid(self.m2 as i64) as usize,
            ),
        }
    }

    /// Boundary rotation of one component by one step.
    pub fn rotate_component(&self, a: &AnnulusArc, component: usize) -> AnnulusArc {
        let (p, q) = self.lift(a);
        let shift = |pt: Point| match (pt.0, component) {
            (0, 0) => self.outer_point(pt.1 / self.m2 as i64 + 1),
            (1, 1) => self.inner_point(pt.1 / self.m1 as i64 + 1),
            _ => pt,
        };
        self.arc_of(shift(p), shift(q))
            .expect("rotation maps arcs to arcs")
    }

    /// All peripheral arcs and all bridges with `|winding| <= window`.
    pub fn enumerate_arcs(&self, window: i64) -> Vec<AnnulusArc> {
        let mut out = self.peripheral_arcs();
        for outer in 0..self.m1 {
            for inner in 0..self.m2 {
                for winding in -window..=window {
                    out.push(AnnulusArc::Bridge {
                        outer,
                        inner,
                        winding,
                    });
                }
            }
        }
        out
    }

    fn peripheral_arcs(&self) -> Vec<AnnulusArc> {
        let mut out = Vec::new();
        for (component, m) in [(0, self.m1), (1, self.m2)] {
            for start in 0..m {
                for span in 2..=m {
                    out.push(AnnulusArc::Peripheral {
                        component,
                        start,
                        span,
                    });
                }
            }
        }
        out
    }
}

impl ArcModel for AnnulusModel {
    type Arc = AnnulusArc;

    fn surface(&self) -> MarkedSurface {
        MarkedSurface::annulus(self.m1, self.m2).expect("nonempty boundaries")
    }

    fn is_valid(&self, a: &AnnulusArc) -> bool {
        match *a {
            AnnulusArc::Bridge { outer, inner, .. } => outer < self.m1 && inner < self.m2,
            AnnulusArc::Peripheral {
                component,
                start,
                span,
            } => {
                let m = [self.m1, self.m2].get(component).copied().unwrap_or(0);
                start < m && (2..=m).contains(&span)
            }
        }
    }

    fn compatible(&self, a: &AnnulusArc, b: &AnnulusArc) -> bool {
        let (p1, q1) = self.lift(a);
        let (p2, q2) = self.lift(b);
        for k in self.deck_range(a, b) {
            let (mut r, mut s) = (self.translate(p2, k), self.translate(q2, k));
            if r > s {
                std::mem::swap(&mut r, &mut s);
            }
            let cross = (p1 < r && r < q1 && q1 < s) || (r < p1 && p1 < s && s < q1);
            if cross {
                return false;
            }
        }
        true
    }

    fn rotate(&self, a: &AnnulusArc) -> AnnulusArc {
        self.rotate_component(&self.rotate_component(a, 0), 1)
    }

    fn flip_candidates(&self, arcs: &[AnnulusArc]) -> Vec<AnnulusArc> {
        let windings: Vec<i64> = arcs
            .iter()
            .filter_map(|a| match a {
                AnnulusArc::Bridge { winding, .. } => Some(*winding),
                AnnulusArc::Peripheral { .. } => None,
            })
            .collect();
        let lo = windings.iter().min().copied().unwrap_or(0) - 2;
        let hi = windings.iter().max().copied().unwrap_or(0) + 2;
        let mut out = self.peripheral_arcs();
        for outer in 0..self.m1 {
            for inner in 0..self.m2 {
                for winding in lo..=hi {
                    out.push(AnnulusArc::Bridge {
                        outer,
                        inner,
                        winding,
                    });
                }
            }
        }
        out
    }

    /// Bridges `0 -> 0, 1 -> 0, ..., m1 -> 0` then `m1 -> -1, ..., m1 -> -(m2 - 1)`
    /// as lifts.
    fn initial(&self) -> Vec<AnnulusArc> {
        let m1 = self.m1 as i64;
        let mut lifts: Vec<(i64, i64)> = (0..=m1).map(|o| (o, 0)).collect();
        lifts.extend((1..self.m2 as i64).map(|j| (m1, -j)));
        lifts
            .into_iter()
            .map(|(o, u)| {
                self.arc_of(self.outer_point(o), self.inner_point(u))
                    .expect("bridge")
            })
            .collect()
    }

    fn realize(&self, arcs: &[AnnulusArc]) -> Result<TaggedTriangulation, ModelError> {
        let p = self.period();
        // Lifts of arcs meeting a window of a few periods, and their labels.
        let mut edges: BTreeMap<(Point, Point), Side> = BTreeMap::new();
        let reach = arcs
            .iter()
            .map(|a| {
                let (x0, x1) = self.extent(a);
                x1 - x0
            })
            .max()
            .unwrap_or(0)
            / p
            + 3;
        for (slot, a) in arcs.iter().enumerate() {
            let (u, v) = self.lift(a);
            for k in -reach..=reach {
                let (r, s) = (self.translate(u, k), self.translate(v, k));
                edges.insert((r.min(s), r.max(s)), Side::Arc(slot));
            }
        }
        let (m1, m2) = (self.m1 as i64, self.m2 as i64);
        for o in -reach * m1..=reach * m1 {
            let (a, b) = (self.outer_point(o), self.outer_point(o + 1));
            edges.insert((a, b), self.segment_side(a, b).unwrap());
        }
        for u in -reach * m2..=reach * m2 {
            let (a, b) = (self.inner_point(u), self.inner_point(u + 1));
            edges.insert((a, b), self.segment_side(a, b).unwrap());
        }
        let mut by_start: BTreeMap<Point, Vec<Point>> = BTreeMap::new();
        for &(a, b) in edges.keys() {
            by_start.entry(a).or_default().push(b);
        }
        let in_domain = |pt: Point| (0..p).contains(&pt.1);
        let mut triangles = Vec::new();
        for (&a, ends) in &by_start {
            if !in_domain(a) {
                continue;
            }
            for &b in ends {
                for &c in by_start.get(&b).map(|v| v.as_slice()).unwrap_or(&[]) {
                    if let Some(&ca) = edges.get(&(a, c)) {
                        let sides = [edges[&(a, b)], edges[&(b, c)], ca];
                        let corners = [
                            self.marked_point(a),
                            self.marked_point(b),
                            self.marked_point(c),
                        ];
                        triangles.push(Triangle::new(sides, corners));
                    }
                }
            }
        }
        let ideal = IdealTriangulation::new(self.surface(), triangles)?;
        Ok(TaggedTriangulation::plain(ideal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{rotates_distinct, ModelTriangulation};

    #[test]
    fn kronecker_bridges() {
        let model = AnnulusModel::new(1, 1).unwrap();
        let b = |w| AnnulusArc::Bridge {
            outer: 0,
            inner: 0,
            winding: w,
        };
        assert!(model.compatible(&b(0), &b(1)));
        assert!(!model.compatible(&b(0), &b(2)));
        assert_eq!(model.rotate(&b(0)), b(2));
        assert!(rotates_distinct(&model, &b(0), 50));
    }

    #[test]
    fn dehn_twist_shifts_winding() {
        let model = AnnulusModel::new(3, 2).unwrap();
        let a = AnnulusArc::Bridge {
            outer: 1,
            inner: 0,
            winding: 0,
        };
        let mut outer = a;
        for _ in 0..3 {
            outer = model.rotate_component(&outer, 0);
        }
        let mut inner = a;
        for _ in 0..2 {
            inner = model.rotate_component(&inner, 1);
        }
        let shifted = AnnulusArc::Bridge {
            outer: 1,
            inner: 0,
            winding: 1,
        };
        assert_eq!(outer, shifted);
        assert_eq!(inner, shifted);
    }

    #[test]
    fn initial_triangulations_realize() {
        for (m1, m2) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)] {
            let t = ModelTriangulation::initial(AnnulusModel::new(m1, m2).unwrap());
            let r = t.realize().unwrap();
            r.validate().unwrap();
            for slot in 0..t.rank() {
                let f = t.flip(slot).unwrap();
                f.realize().unwrap().validate().unwrap();
                assert_eq!(f.flip(slot).unwrap(), t);
            }
        }
    }
}
