//! Breadth-first exploration of exchange graphs, canonical keys and export.
//!
//! In the arc models a vertex key is the sorted arc list, so the graph is the
//! exact exchange graph. For general surfaces the key identifies tagged
//! triangulations that agree as combinatorial maps with the same marked-point
//! names after relabeling arcs; two non-isotopic triangulations can share a
//! key, so the general-surface graph is a quotient of the exchange graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::models::{ArcModel, ModelTriangulation};
use crate::triangulation::{MarkedPoint, Side, Tag, TaggedTriangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplorerError {
    #[error("flip failed: {0}")]
    Flip(String),
    #[error("malformed graph json: {0}")]
    Json(String),
}

/// A vertex type of an exchange graph.
pub trait FlipNode: Sized {
    fn key(&self) -> String;
    fn rank(&self) -> usize;
    fn flip_slot(&self, slot: usize) -> Result<Self, ExplorerError>;
}

impl<M: ArcModel> FlipNode for ModelTriangulation<M> {
    fn key(&self) -> String {
        let arcs: Vec<M::Arc> = self.arc_set().into_iter().collect();
        serde_json::to_string(&arcs).expect("arcs serialize")
    }

    fn rank(&self) -> usize {
        ModelTriangulation::rank(self)
    }

    fn flip_slot(&self, slot: usize) -> Result<Self, ExplorerError> {
        self.flip(slot)
            .map_err(|e| ExplorerError::Flip(e.to_string()))
    }
}

impl FlipNode for TaggedTriangulation {
    fn key(&self) -> String {
        canonical_key(self)
    }

    fn rank(&self) -> usize {
        TaggedTriangulation::rank(self)
    }

    fn flip_slot(&self, slot: usize) -> Result<Self, ExplorerError> {
        self.flip(slot)
            .map_err(|e| ExplorerError::Flip(e.to_string()))
    }
}

/// Canonical key of a tagged triangulation up to arc relabeling: the least
/// breadth-first encoding of the map over all rooted starting sides.
pub fn canonical_key(t: &TaggedTriangulation) -> String {
    let t = t.normalized();
    let tris = t.ideal().triangles();
    let mut occ: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (ti, tri) in tris.iter().enumerate() {
        for (i, s) in tri.sides.iter().enumerate() {
            if let Side::Arc(a) = s {
                occ.entry(*a).or_default().push((ti, i));
            }
        }
    }
    let point_code = |p: MarkedPoint, out: &mut Vec<u64>| match p {
        MarkedPoint::Boundary { component, index } => {
            out.extend([0, component as u64, index as u64])
        }
        MarkedPoint::Puncture(q) => {
            let s = if t.signs()[q] == Tag::Plain { 0 } else { 1 };
            out.extend([1, q as u64, s]);
        }
    };
    let mut best: Option<Vec<u64>> = None;
    for t0 in 0..tris.len() {
        for r0 in 0..3 {
            let mut code = Vec::with_capacity(tris.len() * 12);
            let mut order: BTreeMap<usize, usize> = BTreeMap::new();
            let mut queue = VecDeque::from([(t0, r0)]);
            let mut placed = BTreeSet::from([t0]);
            while let Some((ti, r)) = queue.pop_front() {
                let tri = tris[ti].rotated(r);
                for i in 0..3 {
                    point_code(tri.corners[i], &mut code);
                    match tri.sides[i] {
                        Side::Boundary { component, index } => {
                            code.extend([3, component as u64, index as u64])
                        }
                        Side::Arc(a) => {
                            let next = order.len();
                            let label = *order.entry(a).or_insert(next);
                            code.extend([2, label as u64]);
                            let pos = (r + i) % 3;
                            let other = occ[&a].iter().find(|&&o| o != (ti, pos)).copied();
                            if let Some((tj, j)) = other {
                                if placed.insert(tj) {
                                    queue.push_back((tj, j));
                                }
                            }
                        }
                    }
                }
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    let code = best.unwrap_or_default();
    let mut s = format!("{}|", t.surface());
    for (i, x) in code.iter().enumerate() {
        if i > 0 {
            s.push('.');
        }
        write!(s, "{x}").unwrap();
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeGraph {
    pub rank: usize,
    /// Vertex keys in discovery order; vertex 0 is the root.
    pub vertices: Vec<String>,
    /// Directed flips `(from, slot, to)` between recorded vertices.
    pub edges: Vec<(usize, usize, usize)>,
    /// Number of distinct neighbors of each expanded vertex.
    pub degrees: Vec<Option<usize>>,
    /// True when every vertex was expanded and no neighbor was dropped.
    pub complete: bool,
}

impl ExchangeGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Undirected edges `(a, b, slot)` with `a < b`, first slot seen.
    pub fn undirected_edges(&self) -> Vec<(usize, usize, usize)> {
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(a, s, b) in &self.edges {
            seen.entry((a.min(b), a.max(b))).or_insert(s);
        }
        seen.into_iter().map(|((a, b), s)| (a, b, s)).collect()
    }

    /// Every expanded vertex has exactly `rank` distinct neighbors.
    pub fn is_regular(&self) -> bool {
        self.degrees.iter().flatten().all(|&d| d == self.rank)
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.vertices.iter().position(|k| k == key)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph exchange {\n");
        for (i, k) in self.vertices.iter().enumerate() {
            writeln!(s, "  {i} [label=\"{}\"];", k.replace('"', "\\\"")).unwrap();
        }
        for (a, b, slot) in self.undirected_edges() {
            writeln!(s, "  {a} -- {b} [label=\"{}\"];", slot + 1).unwrap();
        }
        s.push_str("}\n");
        s
    }

    /// Slots are written 1-based.
    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "rank": self.rank,
            "complete": self.complete,
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|&(a, s, b)| json!([a, s + 1, b])).collect::<Vec<_>>(),
            "degrees": self.degrees,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ExplorerError> {
        let bad = |m: &str| ExplorerError::Json(m.to_string());
        let edges = v["edges"]
            .as_array()
            .ok_or_else(|| bad("edges"))?
            .iter()
            .map(|e| {
                let e = e
                    .as_array()
                    .filter(|e| e.len() == 3)
                    .ok_or_else(|| bad("edge"))?;
                let n = |i: usize| {
                    e[i].as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| bad("edge entry"))
                };
                let slot = n(1)?.checked_sub(1).ok_or_else(|| bad("slot"))?;
                Ok((n(0)?, slot, n(2)?))
            })
            .collect::<Result<Vec<_>, ExplorerError>>()?;
        Ok(ExchangeGraph {
            rank: v["rank"].as_u64().ok_or_else(|| bad("rank"))? as usize,
            vertices: serde_json::from_value(v["vertices"].clone())
                .map_err(|e| bad(&e.to_string()))?,
            edges,
            degrees: serde_json::from_value(v["degrees"].clone())
                .map_err(|e| bad(&e.to_string()))?,
            complete: v["complete"].as_bool().ok_or_else(|| bad("complete"))?,
        })
    }
}

/// Explored graph together with one representative per vertex.
#[derive(Debug, Clone)]
pub struct Exploration<N> {
    pub graph: ExchangeGraph,
    pub nodes: Vec<N>,
}

/// Breadth-first closure under flips, stopping at `max_vertices`.
pub fn bfs_exchange_graph<N: FlipNode + Clone>(
    start: N,
    max_vertices: usize,
) -> Result<Exploration<N>, ExplorerError> {
    let rank = start.rank();
    let mut graph = ExchangeGraph {
        rank,
        vertices: Vec::new(),
        edges: Vec::new(),
        degrees: Vec::new(),
        complete: false,
    };
    let mut nodes = Vec::new();
    if max_vertices == 0 {
        return Ok(Exploration { graph, nodes });
    }
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let root_key = start.key();
    index.insert(root_key.clone(), 0);
    graph.vertices.push(root_key);
    graph.degrees.push(None);
    nodes.push(start);
    let mut dropped = false;
    let mut next = 0;
    while next < nodes.len() {
        let v = next;
        next += 1;
        let mut neighbors = BTreeSet::new();
        for slot in 0..rank {
            let w = nodes[v].flip_slot(slot)?;
            let key = w.key();
            neighbors.insert(key.clone());
            let target = match index.get(&key) {
                Some(&i) => Some(i),
                None if nodes.len() < max_vertices => {
                    let i = nodes.len();
                    index.insert(key.clone(), i);
                    graph.vertices.push(key);
                    graph.degrees.push(None);
                    nodes.push(w);
                    Some(i)
                }
                None => {
                    dropped = true;
                    None
                }
            };
            if let Some(i) = target {
                graph.edges.push((v, slot, i));
            }
        }
        neighbors.remove(&graph.vertices[v]);
        graph.degrees[v] = Some(neighbors.len());
    }
    graph.complete = !dropped;
    Ok(Exploration { graph, nodes })
}

/// Checks that `rotate` maps the vertex set of a complete graph onto itself
/// and preserves adjacency.
pub fn is_automorphism<N: FlipNode>(ex: &Exploration<N>, rotate: impl Fn(&N) -> N) -> bool {
    let g = &ex.graph;
    let image: Option<Vec<usize>> = ex
        .nodes
        .iter()
        .map(|n| g.index_of(&rotate(n).key()))
        .collect();
    let Some(image) = image else {
        return false;
    };
    let distinct: BTreeSet<usize> = image.iter().copied().collect();
    if distinct.len() != image.len() {
        return false;
    }
    let adjacent: BTreeSet<(usize, usize)> = g
        .undirected_edges()
        .iter()
        .map(|&(a, b, _)| (a, b))
        .collect();
    adjacent
        .iter()
        .all(|&(a, b)| adjacent.contains(&(image[a].min(image[b]), image[a].max(image[b]))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::rotate;
    use crate::models::{AnnulusModel, PolygonModel};
    use crate::triangulation::fixtures;

    #[test]
    fn pentagon_graph() {
        let t = ModelTriangulation::initial(PolygonModel::new(5).unwrap());
        let ex = bfs_exchange_graph(t, 100).unwrap();
        assert_eq!(ex.graph.vertex_count(), 5);
        assert_eq!(ex.graph.undirected_edges().len(), 5);
        assert!(ex.graph.complete);
        assert!(ex.graph.is_regular());
        assert!(is_automorphism(&ex, |t| t.rotated()));
    }

    #[test]
    fn kronecker_line_is_truncated() {
        let t = ModelTriangulation::initial(AnnulusModel::new(1, 1).unwrap());
        let ex = bfs_exchange_graph(t, 20).unwrap();
        assert_eq!(ex.graph.vertex_count(), 20);
        assert!(!ex.graph.complete);
        assert!(ex.graph.is_regular());
    }

    #[test]
    fn empty_bound_exports_header() {
        let t = ModelTriangulation::initial(PolygonModel::new(5).unwrap());
        let ex = bfs_exchange_graph(t, 0).unwrap();
        assert_eq!(ex.graph.to_dot(), "graph exchange {\n}\n");
    }

    #[test]
    fn json_roundtrip() {
        let t = ModelTriangulation::initial(PolygonModel::new(6).unwrap());
        let g = bfs_exchange_graph(t, 100).unwrap().graph;
        assert_eq!(ExchangeGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn canonical_key_ignores_labels_and_triangle_order() {
        let t = fixtures::polygon_fan(7);
        let perm = [3, 1, 0, 2];
        assert_eq!(canonical_key(&t), canonical_key(&t.relabeled(&perm)));
        assert_eq!(
            canonical_key(&t),
            canonical_key(&t.flip(2).unwrap().flip(2).unwrap())
        );
        assert_ne!(canonical_key(&t), canonical_key(&t.flip(2).unwrap()));
        assert_ne!(canonical_key(&t), canonical_key(&rotate(&t)));
    }

    #[test]
    fn general_surface_graph_matches_model_count() {
        // Marked-point names pin polygon diagonals, so the quotient is exact here.
        let ex = bfs_exchange_graph(fixtures::polygon_fan(6), 100).unwrap();
        assert_eq!(ex.graph.vertex_count(), 14);
        assert!(ex.graph.is_regular());
    }
}
