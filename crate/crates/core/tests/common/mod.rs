//! Independent oracles for the integration tests. Nothing here calls the
//! library's compatibility rules.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Diagonals `(a, b)`, `a < b`, of a convex `m`-gon.
pub fn polygon_diagonals(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 2..m {
            if !(a == 0 && b == m - 1) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Two chords of a circle cross iff their endpoints alternate around it.
pub fn diagonals_cross((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    let inside = |x: usize| a < x && x < b;
    let shared = a == c || a == d || b == c || b == d;
    !shared && inside(c) != inside(d)
}

/// Tagged arcs of a once-punctured `m`-gon as curves in the universal cover
/// of the punctured disc: the upper half plane with marked points at the
/// integers and the puncture at infinity. A chord is a half circle over
/// `[x, x + d]`, a radius is the vertical ray at `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverArc {
    HalfCircle { x: i64, d: i64 },
    Ray { v: i64, notched: bool },
}

pub fn cover_arcs(m: usize) -> Vec<CoverArc> {
    let m = m as i64;
    let mut out = Vec::new();
    for x in 0..m {
        for d in 2..m {
            out.push(CoverArc::HalfCircle { x, d });
        }
        out.push(CoverArc::Ray {
            v: x,
            notched: false,
        });
        out.push(CoverArc::Ray {
            v: x,
            notched: true,
        });
    }
    out
}

/// Compatibility tested on lifts: translates by multiples of `m`.
pub fn cover_compatible(m: usize, a: CoverArc, b: CoverArc) -> bool {
    let m = m as i64;
    let translates = -3..=3;
    match (a, b) {
        (CoverArc::Ray { v, notched: s }, CoverArc::Ray { v: w, notched: t }) => s == t || v == w,
        (CoverArc::HalfCircle { x, d }, CoverArc::Ray { v, .. })
        | (CoverArc::Ray { v, .. }, CoverArc::HalfCircle { x, d }) => translates
            .clone()
            .all(|k| !(x < v + k * m && v + k * m < x + d)),
        (CoverArc::HalfCircle { x, d }, CoverArc::HalfCircle { x: y, d: e }) => {
            translates.clone().all(|k| {
                let (c, f) = (y + k * m, y + e + k * m);
                let strictly = |p: i64| x < p && p < x + d;
                let on_end = |p: i64| p == x || p == x + d;
                // Interleaving endpoints cross; shared endpoints do not.
                on_end(c) || on_end(f) || strictly(c) == strictly(f)
            })
        }
    }
}

/// All maximal cliques of a compatibility graph (Bron–Kerbosch with pivot).
pub fn maximal_compatible_sets(
    n: usize,
    compatible: impl Fn(usize, usize) -> bool,
) -> Vec<BTreeSet<usize>> {
    let adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && compatible(i, j)).collect())
        .collect();
    let mut out = Vec::new();
    fn go(
        r: &mut Vec<usize>,
        mut p: BTreeSet<usize>,
        mut x: BTreeSet<usize>,
        adj: &[BTreeSet<usize>],
        out: &mut Vec<BTreeSet<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            out.push(r.iter().copied().collect());
            return;
        }
        let pivot = *p
            .union(&x)
            .max_by_key(|&&u| adj[u].intersection(&p).count())
            .unwrap();
        let candidates: Vec<usize> = p.difference(&adj[pivot]).copied().collect();
        for v in candidates {
            r.push(v);
            go(
                r,
                p.intersection(&adj[v]).copied().collect(),
                x.intersection(&adj[v]).copied().collect(),
                adj,
                out,
            );
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    go(
        &mut Vec::new(),
        (0..n).collect(),
        BTreeSet::new(),
        &adj,
        &mut out,
    );
    out
}

/// Number of triangulations of a convex `m`-gon from the oracle.
pub fn polygon_triangulation_count(m: usize) -> (usize, BTreeSet<usize>) {
    let d = polygon_diagonals(m);
    let sets = maximal_compatible_sets(d.len(), |i, j| !diagonals_cross(d[i], d[j]));
    (sets.len(), sets.iter().map(|s| s.len()).collect())
}

/// Number of tagged triangulations of a once-punctured `m`-gon, `m >= 2`.
pub fn punctured_triangulation_count(m: usize) -> (usize, BTreeSet<usize>) {
    let arcs = cover_arcs(m);
    let sets = maximal_compatible_sets(arcs.len(), |i, j| cover_compatible(m, arcs[i], arcs[j]));
    (sets.len(), sets.iter().map(|s| s.len()).collect())
}
