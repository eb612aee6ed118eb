//! Ideal and tagged triangulations as labeled combinatorial maps.
//!
//! A triangulation is a list of triangles. Each triangle stores its three sides
//! in counterclockwise order together with the marked point at the start of each
//! side, so side `i` runs from `corners[i]` to `corners[(i + 1) % 3]` with the
//! triangle on its left. Every arc label occurs on exactly two triangle sides,
//! traversed in opposite directions; every boundary segment occurs once.
//!
//! A self-folded triangle carries its radius twice. The corner between the two
//! copies is the enclosed puncture and the third side is the enclosing loop
//! (a boundary segment only on the once-punctured monogon).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::matrix::{ExchangeMatrix, Quiver};
use crate::scalar::Scalar;
use crate::surface::MarkedSurface;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("unknown arc {0}")]
    UnknownArc(usize),
    #[error("arc {0} is the radius of a self-folded triangle")]
    NotFlippable(usize),
    #[error("surface mismatch")]
    SurfaceMismatch,
    #[error("invalid triangulation: {0}")]
    Invalid(String),
    #[error("malformed triangulation json: {0}")]
    Json(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, TriangulationError> {
    Err(TriangulationError::Invalid(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MarkedPoint {
    Boundary { component: usize, index: usize },
    Puncture(usize),
}

impl MarkedPoint {
    pub fn is_puncture(&self) -> bool {
        matches!(self, MarkedPoint::Puncture(_))
    }

    pub fn code(&self) -> String {
        match self {
            MarkedPoint::Boundary { component, index } => format!("m{component}.{index}"),
            MarkedPoint::Puncture(p) => format!("p{p}"),
        }
    }

    pub fn parse_code(s: &str) -> Option<Self> {
        if let Some(rest) = s.strip_prefix('m') {
            let (c, i) = rest.split_once('.')?;
            Some(MarkedPoint::Boundary {
                component: c.parse().ok()?,
                index: i.parse().ok()?,
            })
        } else {
            s.strip_prefix('p')?.parse().ok().map(MarkedPoint::Puncture)
        }
    }
}

impl fmt::Display for MarkedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

/// A triangle side: an arc label or the boundary segment starting at marked
/// point `index` of `component`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Arc(usize),
    Boundary { component: usize, index: usize },
}

impl Side {
    pub fn arc(&self) -> Option<usize> {
        match self {
            Side::Arc(a) => Some(*a),
            Side::Boundary { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangle {
    pub sides: [Side; 3],
    pub corners: [MarkedPoint; 3],
}

impl Triangle {
    pub fn new(sides: [Side; 3], corners: [MarkedPoint; 3]) -> Self {
        Triangle { sides, corners }
    }

    /// Same triangle with side `i` moved to position 0.
    pub fn rotated(&self, i: usize) -> Triangle {
        Triangle {
            sides: [
                self.sides[i],
                self.sides[(i + 1) % 3],
                self.sides[(i + 2) % 3],
            ],
            corners: [
                self.corners[i],
                self.corners[(i + 1) % 3],
                self.corners[(i + 2) % 3],
            ],
        }
    }

    /// Position `i` such that sides `i` and `i + 1` carry the same arc.
    fn fold_position(&self) -> Option<usize> {
        (0..3).find(|&i| {
            let (a, b) = (self.sides[i], self.sides[(i + 1) % 3]);
            a == b && a.arc().is_some()
        })
    }

    pub fn is_self_folded(&self) -> bool {
        self.fold_position().is_some()
    }

    pub fn has_boundary_side(&self) -> bool {
        self.sides
            .iter()
            .any(|s| matches!(s, Side::Boundary { .. }))
    }
}

/// A self-folded triangle, read off the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fold {
    pub triangle: usize,
    pub radius: usize,
    pub puncture: usize,
    /// Enclosing side; `Side::Boundary` only on the once-punctured monogon.
    pub loop_side: Side,
    /// Marked point the radius and loop are based at.
    pub base: MarkedPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealTriangulation {
    surface: MarkedSurface,
    triangles: Vec<Triangle>,
    /// `(triangle, radius)` for every self-folded triangle.
    fold_marks: Vec<(usize, usize)>,
}

fn fold_marks_of(triangles: &[Triangle]) -> Vec<(usize, usize)> {
    triangles
        .iter()
        .enumerate()
        .filter_map(|(t, tri)| {
            tri.fold_position()
                .map(|i| (t, tri.sides[i].arc().unwrap()))
        })
        .collect()
}

impl IdealTriangulation {
    /// Builds and validates.
    pub fn new(
        surface: MarkedSurface,
        triangles: Vec<Triangle>,
    ) -> Result<Self, TriangulationError> {
        let fold_marks = fold_marks_of(&triangles);
        let t = IdealTriangulation {
            surface,
            triangles,
            fold_marks,
        };
        t.validate()?;
        Ok(t)
    }

    /// Builds with explicit fold marks, checking them against the map.
    pub fn with_folds(
        surface: MarkedSurface,
        triangles: Vec<Triangle>,
        folds: Vec<(usize, usize)>,
    ) -> Result<Self, TriangulationError> {
        let t = IdealTriangulation {
            surface,
            triangles,
            fold_marks: folds,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn surface(&self) -> &MarkedSurface {
        &self.surface
    }

    pub fn rank(&self) -> usize {
        self.surface.rank()
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn fold_marks(&self) -> &[(usize, usize)] {
        &self.fold_marks
    }

    /// Both `(triangle, side position)` occurrences of an arc.
    pub fn occurrences(&self, arc: usize) -> Result<[(usize, usize); 2], TriangulationError> {
        let mut found = Vec::with_capacity(2);
        for (t, tri) in self.triangles.iter().enumerate() {
            for (i, s) in tri.sides.iter().enumerate() {
                if *s == Side::Arc(arc) {
                    found.push((t, i));
                }
            }
        }
        match found.as_slice() {
            [a, b] => Ok([*a, *b]),
            _ => Err(TriangulationError::UnknownArc(arc)),
        }
    }

    /// Ordered endpoints of the arc as traversed in its first occurrence.
    pub fn arc_endpoints(
        &self,
        arc: usize,
    ) -> Result<(MarkedPoint, MarkedPoint), TriangulationError> {
        let [(t, i), _] = self.occurrences(arc)?;
        let tri = &self.triangles[t];
        Ok((tri.corners[i], tri.corners[(i + 1) % 3]))
    }

    pub fn folds(&self) -> Vec<Fold> {
        self.fold_marks
            .iter()
            .map(|&(t, radius)| {
                let tri = &self.triangles[t];
                let i = tri
                    .fold_position()
                    .expect("fold mark on a self-folded triangle");
                let puncture = match tri.corners[(i + 1) % 3] {
                    MarkedPoint::Puncture(p) => p,
                    MarkedPoint::Boundary { .. } => unreachable!("validated fold"),
                };
                Fold {
                    triangle: t,
                    radius,
                    puncture,
                    loop_side: tri.sides[(i + 2) % 3],
                    base: tri.corners[i],
                }
            })
            .collect()
    }

    pub fn fold_with_radius(&self, arc: usize) -> Option<Fold> {
        self.folds().into_iter().find(|f| f.radius == arc)
    }

    pub fn fold_with_loop(&self, arc: usize) -> Option<Fold> {
        self.folds()
            .into_iter()
            .find(|f| f.loop_side == Side::Arc(arc))
    }

    /// Whether an ideal flip is defined at `arc`.
    pub fn is_flippable(&self, arc: usize) -> bool {
        matches!(self.occurrences(arc), Ok([(a, _), (b, _)]) if a != b)
    }

    /// Replaces `arc` by the other diagonal of the quadrilateral formed by its
    /// two triangles. The label is kept.
    pub fn flip(&self, arc: usize) -> Result<Self, TriangulationError> {
        let [(t1, i1), (t2, i2)] = self.occurrences(arc)?;
        if t1 == t2 {
            return Err(TriangulationError::NotFlippable(arc));
        }
        let first = self.triangles[t1].rotated(i1);
        let second = self.triangles[t2].rotated(i2);
        // first: e (p -> q), a (q -> r), b (r -> p)
        // second: e (q -> p), c (p -> s), d (s -> q)
        let [e, a, b] = first.sides;
        let [p, q, r] = first.corners;
        let [_, c, d] = second.sides;
        let s = second.corners[2];
        debug_assert_eq!(second.corners[0], q);
        debug_assert_eq!(second.corners[1], p);
        let mut triangles = self.triangles.clone();
        triangles[t1] = Triangle::new([b, c, e], [r, p, s]);
        triangles[t2] = Triangle::new([d, a, e], [s, q, r]);
        let fold_marks = fold_marks_of(&triangles);
        Ok(IdealTriangulation {
            surface: self.surface.clone(),
            triangles,
            fold_marks,
        })
    }

    /// Renames arc `i` to `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let triangles: Vec<Triangle> = self
            .triangles
            .iter()
            .map(|tri| {
                let mut t = tri.clone();
                for s in t.sides.iter_mut() {
                    if let Side::Arc(a) = s {
                        *a = perm[*a];
                    }
                }
                t
            })
            .collect();
        let fold_marks = fold_marks_of(&triangles);
        IdealTriangulation {
            surface: self.surface.clone(),
            triangles,
            fold_marks,
        }
    }

    /// Exchanges two arc labels.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut perm: Vec<usize> = (0..self.rank()).collect();
        perm.swap(a, b);
        self.relabeled(&perm)
    }

    /// Applies a renaming of marked points and boundary segments (used by
    /// boundary rotations).
    pub fn map_points(
        &self,
        point: impl Fn(MarkedPoint) -> MarkedPoint,
        side: impl Fn(Side) -> Side,
    ) -> Self {
        let triangles: Vec<Triangle> = self
            .triangles
            .iter()
            .map(|tri| Triangle {
                sides: tri.sides.map(&side),
                corners: tri.corners.map(&point),
            })
            .collect();
        IdealTriangulation {
            surface: self.surface.clone(),
            triangles,
            fold_marks: self.fold_marks.clone(),
        }
    }

    /// Maps each arc to the arc whose row it shares in the signed adjacency
    /// matrix: a radius goes to its enclosing loop, or to `None` when the loop
    /// is a boundary segment.
    fn adjacency_representative(&self) -> Vec<Option<usize>> {
        let mut pi: Vec<Option<usize>> = (0..self.rank()).map(Some).collect();
        for f in self.folds() {
            pi[f.radius] = f.loop_side.arc();
        }
        pi
    }

    /// Signed adjacency matrix.
    pub fn b_matrix<T: Scalar>(&self) -> ExchangeMatrix<T> {
        let n = self.rank();
        let mut raw = ExchangeMatrix::<T>::zero(n);
        for tri in self.triangles.iter().filter(|t| !t.is_self_folded()) {
            for i in 0..3 {
                if let (Side::Arc(a), Side::Arc(b)) = (tri.sides[i], tri.sides[(i + 1) % 3]) {
                    raw.add(a, b, T::one());
                    raw.add(b, a, -T::one());
                }
            }
        }
        let pi = self.adjacency_representative();
        let mut out = ExchangeMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (pi[i], pi[j]) {
                    out.set(i, j, raw.get(a, b).clone());
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), TriangulationError> {
        let s = &self.surface;
        s.validate()
            .map_err(|e| TriangulationError::Invalid(format!("surface: {e}")))?;
        let n = s.rank();
        let m = s.num_marked();
        if self.triangles.len() * 3 != 2 * n + m {
            return invalid(format!(
                "{} triangles cannot hold {n} arcs and {m} boundary segments",
                self.triangles.len()
            ));
        }
        let point_ok = |p: &MarkedPoint| match *p {
            MarkedPoint::Boundary { component, index } => {
                component < s.boundaries.len() && index < s.boundaries[component]
            }
            MarkedPoint::Puncture(q) => q < s.punctures,
        };
        let mut arc_uses: Vec<Vec<(MarkedPoint, MarkedPoint)>> = vec![Vec::new(); n];
        let mut boundary_uses: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                let (from, to) = (tri.corners[i], tri.corners[(i + 1) % 3]);
                if !point_ok(&from) {
                    return invalid(format!("triangle {t} has unknown corner {from}"));
                }
                match tri.sides[i] {
                    Side::Arc(a) => {
                        if a >= n {
                            return invalid(format!("arc label {a} out of range"));
                        }
                        arc_uses[a].push((from, to));
                    }
                    Side::Boundary { component, index } => {
                        let expected_from = MarkedPoint::Boundary { component, index };
                        if !point_ok(&expected_from) {
                            return invalid(format!(
                                "unknown boundary segment {component}.{index}"
                            ));
                        }
                        let next = (index + 1) % s.boundaries[component];
                        let expected_to = MarkedPoint::Boundary {
                            component,
                            index: next,
                        };
                        if from != expected_from || to != expected_to {
                            return invalid(format!(
                                "boundary segment {component}.{index} has wrong endpoints"
                            ));
                        }
                        *boundary_uses.entry((component, index)).or_default() += 1;
                    }
                }
            }
        }
        for (a, uses) in arc_uses.iter().enumerate() {
            match uses.as_slice() {
                [(u0, v0), (u1, v1)] if u0 == v1 && v0 == u1 => {}
                [_, _] => return invalid(format!("arc {a} occurrences are not opposite")),
                _ => return invalid(format!("arc {a} occurs {} times", uses.len())),
            }
        }
        if boundary_uses.len() != m || boundary_uses.values().any(|&c| c != 1) {
            return invalid("every boundary segment must occur exactly once");
        }
        let computed = fold_marks_of(&self.triangles);
        let mut declared = self.fold_marks.clone();
        declared.sort_unstable();
        if declared != computed {
            return invalid("fold marks do not match self-folded triangles");
        }
        // Corner fans: every marked point must be a single connected fan.
        let corners = self.corner_components();
        let mut seen: BTreeMap<MarkedPoint, usize> = BTreeMap::new();
        for (point, _) in &corners {
            *seen.entry(*point).or_default() += 1;
        }
        let expected_points = m + s.punctures;
        if seen.len() != expected_points {
            return invalid(format!(
                "{} marked points appear, expected {expected_points}",
                seen.len()
            ));
        }
        if let Some((p, _)) = seen.iter().find(|(_, &c)| c != 1) {
            return invalid(format!("corners at {p} do not form a single fan"));
        }
        for f in self.folds() {
            let tri = &self.triangles[f.triangle];
            let i = tri.fold_position().unwrap();
            let mid = tri.corners[(i + 1) % 3];
            if !mid.is_puncture() {
                return invalid(format!(
                    "self-folded triangle {} encloses no puncture",
                    f.triangle
                ));
            }
            let degree = self
                .triangles
                .iter()
                .flat_map(|t| t.corners.iter())
                .filter(|&&c| c == mid)
                .count();
            if degree != 1 {
                return invalid(format!(
                    "self-folded triangle {} encloses {mid} which has other arcs",
                    f.triangle
                ));
            }
        }
        let v = (m + s.punctures) as i64;
        let e = (n + m) as i64;
        let f = self.triangles.len() as i64;
        if v - e + f != s.euler_characteristic() {
            return invalid("Euler characteristic does not match the surface");
        }
        Ok(())
    }

    /// Connected components of corners glued across arcs, tagged by marked point.
    fn corner_components(&self) -> Vec<(MarkedPoint, usize)> {
        let nt = self.triangles.len();
        let mut parent: Vec<usize> = (0..3 * nt).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let mut occ: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for (i, s) in tri.sides.iter().enumerate() {
                if let Side::Arc(a) = s {
                    occ.entry(*a).or_default().push((t, i));
                }
            }
        }
        for uses in occ.values() {
            if let [(t0, i0), (t1, i1)] = uses.as_slice() {
                // Start corner of one copy meets the end corner of the other.
                let a = 3 * t0 + i0;
                let b = 3 * t1 + (i1 + 1) % 3;
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
                let a = 3 * t1 + i1;
                let b = 3 * t0 + (i0 + 1) % 3;
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut comps: BTreeMap<(MarkedPoint, usize), ()> = BTreeMap::new();
        let mut clash = false;
        let mut root_point: BTreeMap<usize, MarkedPoint> = BTreeMap::new();
        for t in 0..nt {
            for i in 0..3 {
                let r = find(&mut parent, 3 * t + i);
                let p = self.triangles[t].corners[i];
                if let Some(q) = root_point.insert(r, p) {
                    clash |= q != p;
                }
                comps.insert((p, r), ());
            }
        }
        if clash {
            // A fan mixing two marked points: report as duplicated fans.
            let mut v: Vec<(MarkedPoint, usize)> = comps.into_keys().collect();
            if let Some(first) = v.first().copied() {
                v.push(first);
            }
            return v;
        }
        comps.into_keys().collect()
    }
}

/// Tag of an arc end at a puncture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Plain,
    Notched,
}

impl Tag {
    pub fn toggled(self) -> Tag {
        match self {
            Tag::Plain => Tag::Notched,
            Tag::Notched => Tag::Plain,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Tag::Plain => 1,
            Tag::Notched => -1,
        }
    }

    pub fn from_sign(s: i64) -> Option<Tag> {
        match s {
            1 => Some(Tag::Plain),
            -1 => Some(Tag::Notched),
            _ => None,
        }
    }

    /// Product of signs.
    pub fn times(self, other: Tag) -> Tag {
        if self == other {
            Tag::Plain
        } else {
            Tag::Notched
        }
    }
}

/// A tagged arc end: a marked point, with a tag when it is a puncture.
/// Sorted triangles and signs, see [`TaggedTriangulation::labeled_form`].
pub type LabeledForm = (Vec<([Side; 3], [MarkedPoint; 3])>, Vec<Tag>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaggedEnd {
    pub point: MarkedPoint,
    pub tag: Tag,
}

/// A tagged triangulation stored as an ideal pattern plus one sign per
/// puncture: the tagged arcs are those of the ideal pattern with every
/// self-folded loop replaced by its radius notched at the enclosed puncture,
/// after which all tags at puncture `P` are multiplied by `signs[P]`.
///
/// At a puncture enclosed by a self-folded triangle the two digon arcs carry
/// opposite tags; flipping the sign there while exchanging the radius and loop
/// labels describes the same tagged triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaggedTriangulation {
    ideal: IdealTriangulation,
    signs: Vec<Tag>,
}

impl TaggedTriangulation {
    pub fn new(ideal: IdealTriangulation, signs: Vec<Tag>) -> Result<Self, TriangulationError> {
        if signs.len() != ideal.surface.punctures {
            return invalid("one sign per puncture required");
        }
        Ok(TaggedTriangulation { ideal, signs })
    }

    pub fn plain(ideal: IdealTriangulation) -> Self {
        let p = ideal.surface.punctures;
        TaggedTriangulation {
            ideal,
            signs: vec![Tag::Plain; p],
        }
    }

    pub fn ideal(&self) -> &IdealTriangulation {
        &self.ideal
    }

    pub fn signs(&self) -> &[Tag] {
        &self.signs
    }

    pub fn surface(&self) -> &MarkedSurface {
        &self.ideal.surface
    }

    pub fn rank(&self) -> usize {
        self.ideal.rank()
    }

    pub fn validate(&self) -> Result<(), TriangulationError> {
        self.ideal.validate()?;
        if self.signs.len() != self.ideal.surface.punctures {
            return invalid("one sign per puncture required");
        }
        // Tag compatibility: at each puncture, ends agree except on a digon pair.
        let mut at: BTreeMap<usize, Vec<(usize, Tag)>> = BTreeMap::new();
        for a in 0..self.rank() {
            for end in self.tagged_ends(a)? {
                if let MarkedPoint::Puncture(p) = end.point {
                    at.entry(p).or_default().push((a, end.tag));
                } else if end.tag != Tag::Plain {
                    return invalid(format!("arc {a} is tagged at a boundary point"));
                }
            }
        }
        for (p, ends) in at {
            let notched = ends.iter().filter(|e| e.1 == Tag::Notched).count();
            if notched != 0 && notched != ends.len() {
                let pair = ends.len() == 2 && self.ideal.folds().iter().any(|f| f.puncture == p);
                if !pair {
                    return invalid(format!("mixed tags at puncture {p}"));
                }
            }
        }
        Ok(())
    }

    /// Tagged ends of arc `label` (two ends, ordered as in the ideal map).
    pub fn tagged_ends(&self, label: usize) -> Result<[TaggedEnd; 2], TriangulationError> {
        let tag_at = |p: MarkedPoint| match p {
            MarkedPoint::Puncture(q) => self.signs[q],
            MarkedPoint::Boundary { .. } => Tag::Plain,
        };
        if let Some(f) = self.ideal.fold_with_loop(label) {
            let base = f.base;
            let tag = self.signs[f.puncture].toggled();
            return Ok([
                TaggedEnd {
                    point: base,
                    tag: tag_at(base),
                },
                TaggedEnd {
                    point: MarkedPoint::Puncture(f.puncture),
                    tag,
                },
            ]);
        }
        let (u, v) = self.ideal.arc_endpoints(label)?;
        Ok([
            TaggedEnd {
                point: u,
                tag: tag_at(u),
            },
            TaggedEnd {
                point: v,
                tag: tag_at(v),
            },
        ])
    }

    /// Tagged flip. Every arc is flippable.
    pub fn flip(&self, label: usize) -> Result<Self, TriangulationError> {
        if label >= self.rank() {
            return Err(TriangulationError::UnknownArc(label));
        }
        if let Some(f) = self.ideal.fold_with_radius(label) {
            let mut signs = self.signs.clone();
            signs[f.puncture] = signs[f.puncture].toggled();
            return match f.loop_side {
                // Once-punctured monogon: the flip only changes the tag.
                Side::Boundary { .. } => Ok(TaggedTriangulation {
                    ideal: self.ideal.clone(),
                    signs,
                }),
                Side::Arc(l) => {
                    let ideal = self.ideal.swapped(label, l).flip(label)?;
                    Ok(TaggedTriangulation { ideal, signs })
                }
            };
        }
        Ok(TaggedTriangulation {
            ideal: self.ideal.flip(label)?,
            signs: self.signs.clone(),
        })
    }

    /// Same tagged triangulation with plain signs at every puncture enclosed by
    /// a self-folded triangle with an arc loop.
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        for f in self.ideal.folds() {
            if let (Side::Arc(l), Tag::Notched) = (f.loop_side, out.signs[f.puncture]) {
                out.ideal = out.ideal.swapped(f.radius, l);
                out.signs[f.puncture] = Tag::Plain;
            }
        }
        out
    }

    pub fn b_matrix<T: Scalar>(&self) -> ExchangeMatrix<T> {
        self.ideal.b_matrix()
    }

    /// Order-independent form of the labeled map: each triangle rotated to its
    /// smallest side first, triangles sorted, signs normalized. Two values are
    /// equal iff they describe the same labeled tagged triangulation map.
    pub fn labeled_form(&self) -> LabeledForm {
        let t = self.normalized();
        let mut tris: Vec<([Side; 3], [MarkedPoint; 3])> = t
            .ideal
            .triangles
            .iter()
            .map(|tri| {
                (0..3)
                    .map(|i| {
                        let r = tri.rotated(i);
                        (r.sides, r.corners)
                    })
                    .min()
                    .unwrap()
            })
            .collect();
        tris.sort();
        (tris, t.signs)
    }

    pub fn quiver(&self) -> Quiver {
        Quiver::from_matrix(&self.b_matrix::<i64>())
            .expect("triangulation matrices are skew-symmetric")
    }

    pub fn relabeled(&self, perm: &[usize]) -> Self {
        TaggedTriangulation {
            ideal: self.ideal.relabeled(perm),
            signs: self.signs.clone(),
        }
    }

    pub(crate) fn from_parts_unchecked(ideal: IdealTriangulation, signs: Vec<Tag>) -> Self {
        TaggedTriangulation { ideal, signs }
    }

    pub fn to_json(&self) -> Value {
        let side = |s: &Side| match s {
            Side::Arc(a) => json!(a + 1),
            Side::Boundary { component, index } => json!(format!("b{component}.{index}")),
        };
        let triangles: Vec<Value> = self
            .ideal
            .triangles
            .iter()
            .map(|t| Value::Array(t.sides.iter().map(side).collect()))
            .collect();
        let corners: Vec<Value> = self
            .ideal
            .triangles
            .iter()
            .map(|t| Value::Array(t.corners.iter().map(|c| json!(c.code())).collect()))
            .collect();
        let folds: Vec<Value> = self
            .ideal
            .fold_marks
            .iter()
            .map(|(t, r)| json!([t, r + 1]))
            .collect();
        let signs: serde_json::Map<String, Value> = self
            .signs
            .iter()
            .enumerate()
            .map(|(p, t)| (p.to_string(), json!(t.sign())))
            .collect();
        json!({
            "surface": self.ideal.surface,
            "triangles": triangles,
            "corners": corners,
            "folds": folds,
            "signs": signs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, TriangulationError> {
        let bad = |m: &str| TriangulationError::Json(m.to_string());
        let surface: MarkedSurface = serde_json::from_value(v["surface"].clone())
            .map_err(|e| TriangulationError::Json(format!("surface: {e}")))?;
        let tris = v["triangles"].as_array().ok_or_else(|| bad("triangles"))?;
        let corners = v["corners"].as_array().ok_or_else(|| bad("corners"))?;
        if tris.len() != corners.len() {
            return Err(bad("triangles and corners differ in length"));
        }
        let parse_side = |x: &Value| -> Result<Side, TriangulationError> {
            if let Some(a) = x.as_u64() {
                if a == 0 {
                    return Err(bad("arc labels start at 1"));
                }
                return Ok(Side::Arc(a as usize - 1));
            }
            let s = x.as_str().ok_or_else(|| bad("side"))?;
            let (c, i) = s
                .strip_prefix('b')
                .and_then(|r| r.split_once('.'))
                .ok_or_else(|| bad("boundary side"))?;
            Ok(Side::Boundary {
                component: c.parse().map_err(|_| bad("boundary side"))?,
                index: i.parse().map_err(|_| bad("boundary side"))?,
            })
        };
        let mut triangles = Vec::with_capacity(tris.len());
        for (t, c) in tris.iter().zip(corners) {
            let t = t
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| bad("triangle"))?;
            let c = c
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| bad("corner triple"))?;
            let mut sides = [Side::Arc(0); 3];
            let mut pts = [MarkedPoint::Puncture(0); 3];
            for i in 0..3 {
                sides[i] = parse_side(&t[i])?;
                pts[i] = c[i]
                    .as_str()
                    .and_then(MarkedPoint::parse_code)
                    .ok_or_else(|| bad("corner"))?;
            }
            triangles.push(Triangle::new(sides, pts));
        }
        let mut folds = Vec::new();
        if let Some(fs) = v.get("folds").and_then(|f| f.as_array()) {
            for f in fs {
                let pair = f
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad("fold"))?;
                let t = pair[0].as_u64().ok_or_else(|| bad("fold"))? as usize;
                let r = pair[1]
                    .as_u64()
                    .filter(|&r| r > 0)
                    .ok_or_else(|| bad("fold"))? as usize;
                folds.push((t, r - 1));
            }
        }
        let mut signs = vec![Tag::Plain; surface.punctures];
        if let Some(map) = v.get("signs").and_then(|s| s.as_object()) {
            for (k, val) in map {
                let p: usize = k.parse().map_err(|_| bad("sign key"))?;
                let tag = val
                    .as_i64()
                    .and_then(Tag::from_sign)
                    .ok_or_else(|| bad("sign value"))?;
                *signs.get_mut(p).ok_or_else(|| bad("sign puncture"))? = tag;
            }
        }
        let ideal = IdealTriangulation::with_folds(surface, triangles, folds)?;
        let t = TaggedTriangulation::new(ideal, signs)?;
        t.validate()?;
        Ok(t)
    }
}

/// Small hand-built triangulations used across tests and proof replays.
pub mod fixtures {
    use super::*;

    pub fn bd(component: usize, index: usize) -> Side {
        Side::Boundary { component, index }
    }

    pub fn mp(component: usize, index: usize) -> MarkedPoint {
        MarkedPoint::Boundary { component, index }
    }

    /// Fan triangulation of the `m`-gon from vertex 0; arc `k` joins 0 and `k + 2`.
    pub fn polygon_fan(m: usize) -> TaggedTriangulation {
        let surface = MarkedSurface::polygon(m).expect("m >= 4");
        let diag = |j: usize| {
            if j == 1 {
                bd(0, 0)
            } else if j == m - 1 {
                bd(0, m - 1)
            } else {
                Side::Arc(j - 2)
            }
        };
        let triangles = (1..m - 1)
            .map(|j| {
                Triangle::new(
                    [diag(j), bd(0, j), diag(j + 1)],
                    [mp(0, 0), mp(0, j), mp(0, j + 1)],
                )
            })
            .collect();
        TaggedTriangulation::plain(
            IdealTriangulation::new(surface, triangles).expect("fan is valid"),
        )
    }

    /// Annulus with one marked point on each boundary, two bridging arcs.
    pub fn kronecker_annulus() -> TaggedTriangulation {
        let surface = MarkedSurface::annulus(1, 1).unwrap();
        let (o, i) = (mp(0, 0), mp(1, 0));
        let triangles = vec![
            Triangle::new([bd(0, 0), Side::Arc(0), Side::Arc(1)], [o, o, i]),
            Triangle::new([bd(1, 0), Side::Arc(0), Side::Arc(1)], [i, i, o]),
        ];
        TaggedTriangulation::plain(IdealTriangulation::new(surface, triangles).unwrap())
    }

    /// Once-punctured digon: radius 0 from boundary point 0, loop 1 around it.
    pub fn punctured_digon_self_folded() -> TaggedTriangulation {
        let surface = MarkedSurface::punctured_polygon(2).unwrap();
        let p = MarkedPoint::Puncture(0);
        let triangles = vec![
            Triangle::new(
                [bd(0, 0), bd(0, 1), Side::Arc(1)],
                [mp(0, 0), mp(0, 1), mp(0, 0)],
            ),
            Triangle::new(
                [Side::Arc(1), Side::Arc(0), Side::Arc(0)],
                [mp(0, 0), mp(0, 0), p],
            ),
        ];
        TaggedTriangulation::plain(IdealTriangulation::new(surface, triangles).unwrap())
    }

    /// Once-punctured digon triangulated by the two radii.
    pub fn punctured_digon_radii() -> TaggedTriangulation {
        let surface = MarkedSurface::punctured_polygon(2).unwrap();
        let p = MarkedPoint::Puncture(0);
        let triangles = vec![
            Triangle::new(
                [bd(0, 0), Side::Arc(1), Side::Arc(0)],
                [mp(0, 0), mp(0, 1), p],
            ),
            Triangle::new(
                [bd(0, 1), Side::Arc(0), Side::Arc(1)],
                [mp(0, 1), mp(0, 0), p],
            ),
        ];
        TaggedTriangulation::plain(IdealTriangulation::new(surface, triangles).unwrap())
    }
}
