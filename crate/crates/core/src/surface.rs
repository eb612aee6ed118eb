//! Marked surfaces: genus, boundary components with their marked points, and
//! punctures.
//!
//! Boundary components are ordered. Marked points on component `c` are numbered
//! `0..m_c` following the boundary orientation that keeps the surface on the
//! left, so "next marked point" always means index `+1 (mod m_c)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("surface has empty boundary")]
    EmptyBoundary,
    #[error("boundary component {0} has no marked point")]
    UnmarkedBoundary(usize),
    #[error("rank {0} is not positive")]
    NonPositiveRank(i64),
    #[error("cannot parse surface `{0}`: expected `g,b:[m1,...],p`")]
    Parse(String),
}

/// A marked surface `(g, (m_1, ..., m_b), p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarkedSurface {
    pub genus: usize,
    pub boundaries: Vec<usize>,
    pub punctures: usize,
}

/// Cluster type of the surface, as far as finite type goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClusterType {
    A(usize),
    D(usize),
    Other,
}

impl fmt::Display for ClusterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterType::A(n) => write!(f, "A{n}"),
            ClusterType::D(n) => write!(f, "D{n}"),
            ClusterType::Other => write!(f, "other"),
        }
    }
}

impl MarkedSurface {
    /// Builds and validates a surface.
    pub fn new(
        genus: usize,
        boundaries: Vec<usize>,
        punctures: usize,
    ) -> Result<Self, SurfaceError> {
        let s = Self::new_unchecked(genus, boundaries, punctures);
        s.validate()?;
        Ok(s)
    }

    pub fn new_unchecked(genus: usize, boundaries: Vec<usize>, punctures: usize) -> Self {
        MarkedSurface {
            genus,
            boundaries,
            punctures,
        }
    }

    /// Regular `m`-gon.
    pub fn polygon(m: usize) -> Result<Self, SurfaceError> {
        Self::new(0, vec![m], 0)
    }

    /// Once-punctured `m`-gon.
    pub fn punctured_polygon(m: usize) -> Result<Self, SurfaceError> {
        Self::new(0, vec![m], 1)
    }

    /// Annulus with `outer` and `inner` marked points.
    pub fn annulus(outer: usize, inner: usize) -> Result<Self, SurfaceError> {
        Self::new(0, vec![outer, inner], 0)
    }

    pub fn num_boundaries(&self) -> usize {
        self.boundaries.len()
    }

    pub fn num_marked(&self) -> usize {
        self.boundaries.iter().sum()
    }

    /// `6g + 3p + 3b + m - 6`, possibly non-positive for invalid surfaces.
    pub fn signed_rank(&self) -> i64 {
        6 * self.genus as i64
            + 3 * self.punctures as i64
            + 3 * self.num_boundaries() as i64
            + self.num_marked() as i64
            - 6
    }

    /// Number of arcs in any (tagged) triangulation.
    pub fn rank(&self) -> usize {
        self.signed_rank().max(0) as usize
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        if self.boundaries.is_empty() {
            return Err(SurfaceError::EmptyBoundary);
        }
        if let Some(c) = self.boundaries.iter().position(|&m| m == 0) {
            return Err(SurfaceError::UnmarkedBoundary(c));
        }
        let n = self.signed_rank();
        if n < 1 {
            return Err(SurfaceError::NonPositiveRank(n));
        }
        Ok(())
    }

    pub fn classify_type(&self) -> ClusterType {
        if self.genus != 0 || self.boundaries.len() != 1 {
            return ClusterType::Other;
        }
        let m = self.boundaries[0];
        match self.punctures {
            0 if m >= 4 => ClusterType::A(m - 3),
            1 => ClusterType::D(m),
            _ => ClusterType::Other,
        }
    }

    pub fn is_annulus(&self) -> bool {
        self.genus == 0 && self.boundaries.len() == 2 && self.punctures == 0
    }

    /// Euler characteristic of the surface with boundary, `2 - 2g - b`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.num_boundaries() as i64
    }
}

impl fmt::Display for MarkedSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms: Vec<String> = self.boundaries.iter().map(|m| m.to_string()).collect();
        write!(
            f,
            "{},{}:[{}],{}",
            self.genus,
            self.boundaries.len(),
            ms.join(","),
            self.punctures
        )
    }
}

/// Parses `g,b:[m1,...,mb],p`. The result is validated.
impl FromStr for MarkedSurface {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SurfaceError::Parse(s.to_string());
        let s_trim: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, rest) = s_trim.split_once(":[").ok_or_else(bad)?;
        let (list, tail) = rest.split_once(']').ok_or_else(bad)?;
        let (g, b) = head.split_once(',').ok_or_else(bad)?;
        let p = tail.strip_prefix(',').ok_or_else(bad)?;
        let genus: usize = g.parse().map_err(|_| bad())?;
        let b: usize = b.parse().map_err(|_| bad())?;
        let punctures: usize = p.parse().map_err(|_| bad())?;
        let boundaries: Vec<usize> = if list.is_empty() {
            Vec::new()
        } else {
            list.split(',')
                .map(|x| x.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?
        };
        if boundaries.len() != b {
            return Err(bad());
        }
        MarkedSurface::new(genus, boundaries, punctures)
    }
}
