//! Diagonals of a convex polygon with vertices `0..m` in counterclockwise order.

use serde::{Deserialize, Serialize};

use super::{ArcModel, FiniteArcModel, ModelError};
use crate::surface::MarkedSurface;
use crate::triangulation::fixtures::{bd, mp};
use crate::triangulation::{IdealTriangulation, Side, TaggedTriangulation, Triangle};

/// A diagonal `{i, j}` stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolygonArc {
    pub i: usize,
    pub j: usize,
}

impl PolygonArc {
    pub fn new(a: usize, b: usize) -> Self {
        PolygonArc {
            i: a.min(b),
            j: a.max(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolygonModel {
    m: usize,
}

impl PolygonModel {
    pub fn new(m: usize) -> Result<Self, ModelError> {
        if m < 4 {
            return Err(ModelError::UnsupportedSurface(format!("{m}-gon")));
        }
        Ok(PolygonModel { m })
    }

    pub fn vertices(&self) -> usize {
        self.m
    }

    /// Triangles `(a, b, c)`, `a < b < c`, whose sides are all diagonals of
    /// the triangulation or polygon sides.
    pub fn triangles(&self, arcs: &[PolygonArc]) -> Vec<[usize; 3]> {
        let m = self.m;
        let edge = |a: usize, b: usize| {
            b == a + 1 || (a == 0 && b == m - 1) || arcs.contains(&PolygonArc::new(a, b))
        };
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if !edge(a, b) {
                    continue;
                }
                for c in b + 1..m {
                    if edge(b, c) && edge(a, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }
}

impl ArcModel for PolygonModel {
    type Arc = PolygonArc;

    fn surface(&self) -> MarkedSurface {
        MarkedSurface::polygon(self.m).expect("m >= 4")
    }

    fn is_valid(&self, a: &PolygonArc) -> bool {
        a.i < a.j && a.j < self.m && a.j - a.i >= 2 && !(a.i == 0 && a.j == self.m - 1)
    }

    fn compatible(&self, a: &PolygonArc, b: &PolygonArc) -> bool {
        let cross = (a.i < b.i && b.i < a.j && a.j < b.j) || (b.i < a.i && a.i < b.j && b.j < a.j);
        !cross
    }

    fn rotate(&self, a: &PolygonArc) -> PolygonArc {
        PolygonArc::new((a.i + 1) % self.m, (a.j + 1) % self.m)
    }

    fn flip_candidates(&self, _arcs: &[PolygonArc]) -> Vec<PolygonArc> {
        self.enumerate_arcs()
    }

    /// Fan at vertex 0.
    fn initial(&self) -> Vec<PolygonArc> {
        (2..self.m - 1).map(|j| PolygonArc::new(0, j)).collect()
    }

    fn realize(&self, arcs: &[PolygonArc]) -> Result<TaggedTriangulation, ModelError> {
        let m = self.m;
        let side = |a: usize, b: usize| -> Result<Side, ModelError> {
            if b == a + 1 {
                Ok(bd(0, a))
            } else if a == m - 1 && b == 0 {
                Ok(bd(0, m - 1))
            } else {
                arcs.iter()
                    .position(|x| *x == PolygonArc::new(a, b))
                    .map(Side::Arc)
                    .ok_or_else(|| ModelError::NotTriangulation(format!("missing side {a}-{b}")))
            }
        };
        let triangles = self
            .triangles(arcs)
            .into_iter()
            .map(|[a, b, c]| {
                Ok(Triangle::new(
                    [side(a, b)?, side(b, c)?, side(c, a)?],
                    [mp(0, a), mp(0, b), mp(0, c)],
                ))
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        let ideal = IdealTriangulation::new(self.surface(), triangles)?;
        Ok(TaggedTriangulation::plain(ideal))
    }
}

impl FiniteArcModel for PolygonModel {
    fn enumerate_arcs(&self) -> Vec<PolygonArc> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in i + 2..self.m {
                let a = PolygonArc { i, j };
                if self.is_valid(&a) {
                    out.push(a);
                }
            }
        }
        out
    }
}
