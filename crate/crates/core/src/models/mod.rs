//! Geometric arc models in which arc identity is decidable: the polygon, the
//! once-punctured polygon and the annulus.
//!
//! A model triangulation is a list of arcs indexed by slot; slot `i` is arc
//! label `i` of the combinatorial realization.

pub mod annulus;
pub mod polygon;
pub mod punctured;

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::ExchangeMatrix;
use crate::mcg::MappingClassElement;
use crate::scalar::Scalar;
use crate::surface::{ClusterType, MarkedSurface};
use crate::triangulation::{TaggedTriangulation, TriangulationError};

pub use annulus::{AnnulusArc, AnnulusModel};
pub use polygon::{PolygonArc, PolygonModel};
pub use punctured::{PuncturedArc, PuncturedModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("surface {0} has no arc model")]
    UnsupportedSurface(String),
    #[error("arc is not part of the triangulation: {0}")]
    UnknownArc(String),
    #[error("not a triangulation: {0}")]
    NotTriangulation(String),
    #[error("flip at slot {slot} has {count} candidate arcs")]
    FlipNotUnique { slot: usize, count: usize },
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// An explicit arc model.
pub trait ArcModel: Clone + Debug {
    type Arc: Clone + Ord + Hash + Debug + Serialize + DeserializeOwned;

    fn surface(&self) -> MarkedSurface;

    fn rank(&self) -> usize {
        self.surface().rank()
    }

    fn is_valid(&self, a: &Self::Arc) -> bool;

    /// Whether two arcs have non-crossing representatives. Every arc is
    /// compatible with itself.
    fn compatible(&self, a: &Self::Arc, b: &Self::Arc) -> bool;

    /// Tagged rotation.
    fn rotate(&self, a: &Self::Arc) -> Self::Arc;

    /// A finite set containing every arc that can appear after one flip of the
    /// given triangulation.
    fn flip_candidates(&self, arcs: &[Self::Arc]) -> Vec<Self::Arc>;

    /// A fixed starting triangulation.
    fn initial(&self) -> Vec<Self::Arc>;

    /// Combinatorial realization with arc `i` labeled `i`.
    fn realize(&self, arcs: &[Self::Arc]) -> Result<TaggedTriangulation, ModelError>;
}

/// Models with finitely many arcs.
pub trait FiniteArcModel: ArcModel {
    fn enumerate_arcs(&self) -> Vec<Self::Arc>;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelTriangulation<M: ArcModel> {
    model: M,
    arcs: Vec<M::Arc>,
}

impl<M: ArcModel> ModelTriangulation<M> {
    pub fn new(model: M, arcs: Vec<M::Arc>) -> Result<Self, ModelError> {
        let n = model.rank();
        if arcs.len() != n {
            return Err(ModelError::NotTriangulation(format!(
                "{} arcs given, rank is {n}",
                arcs.len()
            )));
        }
        for a in &arcs {
            if !model.is_valid(a) {
                return Err(ModelError::InvalidArc(format!("{a:?}")));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if arcs[i] == arcs[j] {
                    return Err(ModelError::NotTriangulation(format!(
                        "arc {:?} repeated",
                        arcs[i]
                    )));
                }
                if !model.compatible(&arcs[i], &arcs[j]) {
                    return Err(ModelError::NotTriangulation(format!(
                        "{:?} crosses {:?}",
                        arcs[i], arcs[j]
                    )));
                }
            }
        }
        Ok(ModelTriangulation { model, arcs })
    }

    pub fn initial(model: M) -> Self {
        let arcs = model.initial();
        Self::new(model, arcs).expect("initial triangulation is valid")
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn arcs(&self) -> &[M::Arc] {
        &self.arcs
    }

    pub fn rank(&self) -> usize {
        self.arcs.len()
    }

    pub fn slot_of(&self, arc: &M::Arc) -> Option<usize> {
        self.arcs.iter().position(|a| a == arc)
    }

    /// Unordered arc set.
    pub fn arc_set(&self) -> BTreeSet<M::Arc> {
        self.arcs.iter().cloned().collect()
    }

    /// Replaces the arc in `slot` by the unique other completion.
    pub fn flip(&self, slot: usize) -> Result<Self, ModelError> {
        let old = self
            .arcs
            .get(slot)
            .ok_or_else(|| ModelError::UnknownArc(format!("slot {slot}")))?;
        let others: Vec<&M::Arc> = self
            .arcs
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != slot)
            .map(|(_, a)| a)
            .collect();
        let mut found: Vec<M::Arc> = self
            .model
            .flip_candidates(&self.arcs)
            .into_iter()
            .filter(|c| c != old && !others.contains(&c))
            .filter(|c| others.iter().all(|o| self.model.compatible(c, o)))
            .collect();
        found.sort();
        found.dedup();
        if found.len() != 1 {
            return Err(ModelError::FlipNotUnique {
                slot,
                count: found.len(),
            });
        }
        let mut arcs = self.arcs.clone();
        arcs[slot] = found.pop().unwrap();
        Ok(ModelTriangulation {
            model: self.model.clone(),
            arcs,
        })
    }

    pub fn flip_arc(&self, arc: &M::Arc) -> Result<Self, ModelError> {
        let slot = self
            .slot_of(arc)
            .ok_or_else(|| ModelError::UnknownArc(format!("{arc:?}")))?;
        self.flip(slot)
    }

    /// Tagged rotation applied to every arc, slots kept.
    pub fn rotated(&self) -> Self {
        ModelTriangulation {
            model: self.model.clone(),
            arcs: self.arcs.iter().map(|a| self.model.rotate(a)).collect(),
        }
    }

    pub fn realize(&self) -> Result<TaggedTriangulation, ModelError> {
        self.model.realize(&self.arcs)
    }

    pub fn b_matrix<T: Scalar>(&self) -> Result<ExchangeMatrix<T>, ModelError> {
        Ok(self.realize()?.b_matrix())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationOrder {
    Finite(u64),
    /// Certified by `distinct` pairwise different rotates of one arc.
    Infinite {
        distinct: usize,
    },
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Order of the tagged rotation as a permutation of all arcs. In the square
/// this is 2, half the order on marked points.
pub fn finite_rotation_order<M: FiniteArcModel>(model: &M) -> u64 {
    let mut order = 1u64;
    for a in model.enumerate_arcs() {
        let mut len = 1u64;
        let mut cur = model.rotate(&a);
        while cur != a {
            cur = model.rotate(&cur);
            len += 1;
        }
        order = lcm(order, len);
    }
    order
}

/// Order of the tagged rotation acting on arcs, marked points and tags
/// together.
pub fn surface_rotation_order<M: FiniteArcModel>(model: &M) -> u64 {
    let on_points = MappingClassElement::tagged_rotation(&model.surface()).order();
    lcm(finite_rotation_order(model), on_points)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit<A> {
    /// `arc, rot(arc), ..., rot^{k-1}(arc)`.
    pub arcs: Vec<A>,
    /// Smallest `z >= 1` among the computed rotates with `rot^z(arc) = arc`.
    pub period: Option<usize>,
}

pub fn orbit<M: ArcModel>(model: &M, arc: &M::Arc, k: usize) -> Orbit<M::Arc> {
    let mut arcs = Vec::with_capacity(k);
    let mut cur = arc.clone();
    let mut period = None;
    for z in 0..k {
        if z > 0 && period.is_none() && cur == *arc {
            period = Some(z);
        }
        arcs.push(cur.clone());
        cur = model.rotate(&cur);
    }
    if period.is_none() && k > 0 && cur == *arc {
        period = Some(k);
    }
    Orbit { arcs, period }
}

/// Whether the first `k` rotates of `arc` are pairwise distinct.
pub fn rotates_distinct<M: ArcModel>(model: &M, arc: &M::Arc, k: usize) -> bool {
    let o = orbit(model, arc, k);
    let set: BTreeSet<&M::Arc> = o.arcs.iter().collect();
    set.len() == o.arcs.len()
}

/// The arc model matching a surface, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Polygon(PolygonModel),
    Punctured(PuncturedModel),
    Annulus(AnnulusModel),
}

impl Model {
    pub fn for_surface(s: &MarkedSurface) -> Result<Model, ModelError> {
        match s.classify_type() {
            ClusterType::A(_) => return Ok(Model::Polygon(PolygonModel::new(s.boundaries[0])?)),
            ClusterType::D(_) => {
                return Ok(Model::Punctured(PuncturedModel::new(s.boundaries[0])?))
            }
            ClusterType::Other => {}
        }
        if s.is_annulus() {
            return Ok(Model::Annulus(AnnulusModel::new(
                s.boundaries[0],
                s.boundaries[1],
            )?));
        }
        Err(ModelError::UnsupportedSurface(s.to_string()))
    }

    pub fn rotation_order(&self) -> RotationOrder {
        match self {
            Model::Polygon(m) => RotationOrder::Finite(surface_rotation_order(m)),
            Model::Punctured(m) => RotationOrder::Finite(surface_rotation_order(m)),
            Model::Annulus(m) => {
                let witness = m.initial()[0];
                let k = 50;
                assert!(rotates_distinct(m, &witness, k), "annulus rotates repeat");
                RotationOrder::Infinite { distinct: k }
            }
        }
    }
}
