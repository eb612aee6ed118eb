//! The group generated by boundary rotations and tag switches.
//!
//! Rotations act on marked points only and fix every puncture, so the
//! semidirect product collapses to a direct product: an element is a rotation
//! amount per boundary component and a tag switch per puncture.

use std::fmt;

use thiserror::Error;

use crate::surface::MarkedSurface;
use crate::triangulation::{MarkedPoint, Side, Tag, TaggedEnd, TaggedTriangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McgError {
    #[error("elements belong to different surfaces")]
    SurfaceMismatch,
    #[error("boundary component {0} does not exist")]
    NoComponent(usize),
    #[error("puncture {0} does not exist")]
    NoPuncture(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MappingClassElement {
    surface: MarkedSurface,
    /// Rotation amount per component, reduced mod `m_c`.
    rotations: Vec<usize>,
    /// `Notched` where the tag switch is applied.
    switches: Vec<Tag>,
}

impl MappingClassElement {
    pub fn identity(surface: &MarkedSurface) -> Self {
        MappingClassElement {
            surface: surface.clone(),
            rotations: vec![0; surface.num_boundaries()],
            switches: vec![Tag::Plain; surface.punctures],
        }
    }

    /// Rotation of component `c` by `k` steps along its orientation.
    pub fn boundary_rotation(surface: &MarkedSurface, c: usize, k: i64) -> Result<Self, McgError> {
        let m = *surface.boundaries.get(c).ok_or(McgError::NoComponent(c))?;
        let mut g = Self::identity(surface);
        g.rotations[c] = k.rem_euclid(m as i64) as usize;
        Ok(g)
    }

    pub fn tag_switch(surface: &MarkedSurface, p: usize) -> Result<Self, McgError> {
        if p >= surface.punctures {
            return Err(McgError::NoPuncture(p));
        }
        let mut g = Self::identity(surface);
        g.switches[p] = Tag::Notched;
        Ok(g)
    }

    /// Every boundary rotated by one step and every tag switched.
    pub fn tagged_rotation(surface: &MarkedSurface) -> Self {
        MappingClassElement {
            surface: surface.clone(),
            rotations: surface.boundaries.iter().map(|&m| 1 % m).collect(),
            switches: vec![Tag::Notched; surface.punctures],
        }
    }

    pub fn surface(&self) -> &MarkedSurface {
        &self.surface
    }

    pub fn rotations(&self) -> &[usize] {
        &self.rotations
    }

    pub fn switches(&self) -> &[Tag] {
        &self.switches
    }

    pub fn compose(&self, other: &Self) -> Result<Self, McgError> {
        if self.surface != other.surface {
            return Err(McgError::SurfaceMismatch);
        }
        Ok(MappingClassElement {
            surface: self.surface.clone(),
            rotations: self
                .rotations
                .iter()
                .zip(&other.rotations)
                .zip(&self.surface.boundaries)
                .map(|((a, b), m)| (a + b) % m)
                .collect(),
            switches: self
                .switches
                .iter()
                .zip(&other.switches)
                .map(|(a, b)| a.times(*b))
                .collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        MappingClassElement {
            surface: self.surface.clone(),
            rotations: self
                .rotations
                .iter()
                .zip(&self.surface.boundaries)
                .map(|(r, m)| (m - r) % m)
                .collect(),
            switches: self.switches.clone(),
        }
    }

    pub fn power(&self, k: u64) -> Self {
        let mut out = Self::identity(&self.surface);
        for _ in 0..k {
            out = out.compose(self).expect("same surface");
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rotations.iter().all(|&r| r == 0) && self.switches.iter().all(|&s| s == Tag::Plain)
    }

    /// Order of the element in the group of rotations and switches. This is
    /// the order as a combinatorial symmetry; on arcs the order can be smaller.
    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let mut l = 1u64;
        for (&r, &m) in self.rotations.iter().zip(&self.surface.boundaries) {
            let m = m as u64;
            let o = m / gcd(m, r as u64);
            l = l / gcd(l, o) * o;
        }
        if self.switches.contains(&Tag::Notched) {
            l = l / gcd(l, 2) * 2;
        }
        l
    }

    pub fn act_on_point(&self, p: MarkedPoint) -> MarkedPoint {
        match p {
            MarkedPoint::Boundary { component, index } => MarkedPoint::Boundary {
                component,
                index: (index + self.rotations[component]) % self.surface.boundaries[component],
            },
            MarkedPoint::Puncture(_) => p,
        }
    }

    pub fn act_on_side(&self, s: Side) -> Side {
        match s {
            Side::Boundary { component, index } => Side::Boundary {
                component,
                index: (index + self.rotations[component]) % self.surface.boundaries[component],
            },
            Side::Arc(_) => s,
        }
    }

    pub fn act_on_end(&self, e: TaggedEnd) -> TaggedEnd {
        match e.point {
            MarkedPoint::Puncture(p) => TaggedEnd {
                point: e.point,
                tag: e.tag.times(self.switches[p]),
            },
            MarkedPoint::Boundary { .. } => TaggedEnd {
                point: self.act_on_point(e.point),
                tag: e.tag,
            },
        }
    }

    /// Image of a tagged triangulation. Arc labels are carried along.
    pub fn act_on_triangulation(
        &self,
        t: &TaggedTriangulation,
    ) -> Result<TaggedTriangulation, McgError> {
        if *t.surface() != self.surface {
            return Err(McgError::SurfaceMismatch);
        }
        let ideal = t
            .ideal()
            .map_points(|p| self.act_on_point(p), |s| self.act_on_side(s));
        let signs = t
            .signs()
            .iter()
            .zip(&self.switches)
            .map(|(a, b)| a.times(*b))
            .collect();
        Ok(TaggedTriangulation::from_parts_unchecked(ideal, signs))
    }
}

impl fmt::Display for MappingClassElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rot: Vec<String> = self.rotations.iter().map(|r| r.to_string()).collect();
        let sw: Vec<&str> = self
            .switches
            .iter()
            .map(|s| if *s == Tag::Notched { "1" } else { "0" })
            .collect();
        write!(f, "rot[{}] switch[{}]", rot.join(","), sw.join(","))
    }
}

/// Tagged rotation of a triangulation.
pub fn rotate(t: &TaggedTriangulation) -> TaggedTriangulation {
    MappingClassElement::tagged_rotation(t.surface())
        .act_on_triangulation(t)
        .expect("same surface")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::fixtures;

    #[test]
    fn group_laws() {
        let s = MarkedSurface::new(0, vec![3, 2], 2).unwrap();
        let r = MappingClassElement::tagged_rotation(&s);
        assert_eq!(r.order(), 6);
        assert!(r.power(6).is_identity());
        assert!(r.compose(&r.inverse()).unwrap().is_identity());
        let a = MappingClassElement::boundary_rotation(&s, 0, 2).unwrap();
        let b = MappingClassElement::tag_switch(&s, 1).unwrap();
        assert_eq!(a.compose(&b).unwrap(), b.compose(&a).unwrap());
        assert_eq!(
            MappingClassElement::tag_switch(&s, 2),
            Err(McgError::NoPuncture(2))
        );
    }

    #[test]
    fn rotation_preserves_matrix_and_validity() {
        for t in [
            fixtures::polygon_fan(7),
            fixtures::punctured_digon_self_folded(),
            fixtures::kronecker_annulus(),
        ] {
            let r = rotate(&t);
            r.validate().unwrap();
            assert_eq!(r.b_matrix::<i32>(), t.b_matrix::<i32>());
        }
    }

    #[test]
    fn polygon_rotation_order() {
        let t = fixtures::polygon_fan(6);
        let mut r = t.clone();
        for k in 1..=6 {
            r = rotate(&r);
            assert_eq!(r.labeled_form() == t.labeled_form(), k == 6);
        }
    }
}
