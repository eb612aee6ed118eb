//! Framed mutation and maximal green sequences.
//!
//! A framed seed is an exchange matrix `B` with a C-matrix whose columns are
//! the c-vectors. A column is green when it is nonnegative and red when it is
//! nonpositive; by sign-coherence every column is one or the other, which is
//! checked after each step rather than assumed.

use serde::Serialize;
use thiserror::Error;

use crate::matrix::{ExchangeMatrix, MatrixError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("c-vector {0} is not sign-coherent")]
    NotSignCoherent(usize),
    #[error("c-vector {0} is red")]
    NotGreen(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FramedSeed<T> {
    pub b: ExchangeMatrix<T>,
    pub c: ExchangeMatrix<T>,
}

impl<T: Scalar> std::fmt::Debug for FramedSeed<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FramedSeed")
            .field("b", &self.b)
            .field("c", &self.c)
            .finish()
    }
}

impl<T: Scalar> FramedSeed<T> {
    /// Initial framed seed: `C = I`.
    pub fn new(b: ExchangeMatrix<T>) -> Result<Self, MutationError> {
        b.check_skew_symmetric()?;
        let n = b.rank();
        Ok(FramedSeed {
            b,
            c: ExchangeMatrix::identity(n),
        })
    }

    pub fn rank(&self) -> usize {
        self.b.rank()
    }

    /// `c'_{ik} = -c_{ik}`,
    /// `c'_{ij} = c_{ij} + [c_{ik}]_+ [b_{kj}]_+ - [-c_{ik}]_+ [-b_{kj}]_+` for `j != k`.
    pub fn mutate(&self, k: usize) -> Result<Self, MutationError> {
        let b = self.b.mutate(k)?;
        let n = self.rank();
        let mut c = self.c.clone();
        for i in 0..n {
            let cik = self.c.get(i, k).clone();
            for j in 0..n {
                let v = if j == k {
                    -cik.clone()
                } else {
                    let bkj = self.b.get(k, j).clone();
                    self.c.get(i, j).clone() + cik.positive_part() * bkj.positive_part()
                        - (-cik.clone()).positive_part() * (-bkj).positive_part()
                };
                c.set(i, j, v);
            }
        }
        let out = FramedSeed { b, c };
        if let Some(j) = out.first_incoherent() {
            return Err(MutationError::NotSignCoherent(j));
        }
        Ok(out)
    }

    fn first_incoherent(&self) -> Option<usize> {
        (0..self.rank()).find(|&j| {
            let col = self.c.column(j);
            col.iter().any(|x| x.is_positive()) && col.iter().any(|x| x.is_negative())
        })
    }

    pub fn is_green(&self, k: usize) -> bool {
        let col = self.c.column(k);
        col.iter().all(|x| !x.is_negative()) && col.iter().any(|x| x.is_positive())
    }

    pub fn green_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&k| self.is_green(k)).collect()
    }

    pub fn is_all_red(&self) -> bool {
        self.green_indices().is_empty()
    }

    /// If `C = -P` for a permutation matrix, returns `sigma` with column `k`
    /// equal to `-e_{sigma(k)}`.
    pub fn red_permutation(&self) -> Option<Vec<usize>> {
        let n = self.rank();
        let mut sigma = Vec::with_capacity(n);
        let mut used = vec![false; n];
        for k in 0..n {
            let col = self.c.column(k);
            let mut hit = None;
            for (i, x) in col.iter().enumerate() {
                if *x == -T::one() && hit.is_none() {
                    hit = Some(i);
                } else if !x.is_zero() {
                    return None;
                }
            }
            let i = hit?;
            if used[i] {
                return None;
            }
            used[i] = true;
            sigma.push(i);
        }
        Some(sigma)
    }

    /// Applies a green sequence, failing on the first red step.
    pub fn apply_green_sequence(&self, seq: &[usize]) -> Result<Self, MutationError> {
        let mut s = self.clone();
        for &k in seq {
            if !s.is_green(k) {
                return Err(MutationError::NotGreen(k));
            }
            s = s.mutate(k)?;
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreenSearchOptions {
    pub max_length: usize,
    /// Stop after this many sequences.
    pub max_sequences: Option<usize>,
}

impl GreenSearchOptions {
    pub fn bounded(max_length: usize) -> Self {
        GreenSearchOptions {
            max_length,
            max_sequences: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalGreenSequence {
    pub mutations: Vec<usize>,
    /// `sigma` with final C-matrix `-P_sigma`.
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreenSearchResult {
    /// In lexicographic order of mutation sequences.
    pub sequences: Vec<MaximalGreenSequence>,
    /// Branches cut by the length bound.
    pub truncated_branches: u64,
    /// True if the search stopped because of `max_sequences`.
    pub stopped_early: bool,
    pub nodes: u64,
}

impl GreenSearchResult {
    /// True when every maximal green sequence up to the bound was found and no
    /// branch was cut.
    pub fn is_exhaustive(&self) -> bool {
        self.truncated_branches == 0 && !self.stopped_early
    }
}

/// Depth-first search over green mutations in increasing index order.
pub fn find_maximal_green_sequences<T: Scalar>(
    b: &ExchangeMatrix<T>,
    opts: GreenSearchOptions,
) -> Result<GreenSearchResult, MutationError> {
    let mut res = GreenSearchResult {
        sequences: Vec::new(),
        truncated_branches: 0,
        stopped_early: false,
        nodes: 0,
    };
    let seed = FramedSeed::new(b.clone())?;
    let mut path = Vec::new();
    dfs(&seed, &mut path, &opts, &mut res)?;
    Ok(res)
}

fn dfs<T: Scalar>(
    seed: &FramedSeed<T>,
    path: &mut Vec<usize>,
    opts: &GreenSearchOptions,
    res: &mut GreenSearchResult,
) -> Result<(), MutationError> {
    if res.stopped_early {
        return Ok(());
    }
    res.nodes += 1;
    let green = seed.green_indices();
    if green.is_empty() {
        // Sign-coherence makes the all-red C-matrix minus a permutation.
        let permutation = seed
            .red_permutation()
            .expect("all-red C-matrix of a sign-coherent seed is a negative permutation");
        res.sequences.push(MaximalGreenSequence {
            mutations: path.clone(),
            permutation,
        });
        if opts.max_sequences.is_some_and(|m| res.sequences.len() >= m) {
            res.stopped_early = true;
        }
        return Ok(());
    }
    if path.len() >= opts.max_length {
        res.truncated_branches += 1;
        return Ok(());
    }
    for k in green {
        let next = seed.mutate(k)?;
        path.push(k);
        dfs(&next, path, opts, res)?;
        path.pop();
        if res.stopped_early {
            break;
        }
    }
    Ok(())
}

/// Shortest maximal green sequence by iterative deepening, if one exists
/// within `max_length`.
pub fn shortest_maximal_green_sequence<T: Scalar>(
    b: &ExchangeMatrix<T>,
    max_length: usize,
) -> Result<Option<MaximalGreenSequence>, MutationError> {
    for len in 0..=max_length {
        let r = find_maximal_green_sequences(
            b,
            GreenSearchOptions {
                max_length: len,
                max_sequences: Some(1),
            },
        )?;
        if let Some(s) = r.sequences.into_iter().next() {
            return Ok(Some(s));
        }
        if r.truncated_branches == 0 {
            return Ok(None);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type B = ExchangeMatrix<i32>;

    #[test]
    fn a2_has_two_maximal_green_sequences() {
        // Green mutation at a sink first gives the short sequence.
        let b = B::from_arrows(2, &[(0, 1)]).unwrap();
        let r = find_maximal_green_sequences(&b, GreenSearchOptions::bounded(10)).unwrap();
        let seqs: Vec<Vec<usize>> = r.sequences.iter().map(|s| s.mutations.clone()).collect();
        assert_eq!(seqs, vec![vec![0, 1, 0], vec![1, 0]]);
        assert!(r.is_exhaustive());
    }

    #[test]
    fn kronecker_search_is_truncated() {
        let b = B::skew_from_rows(vec![vec![0, 2], vec![-2, 0]]).unwrap();
        let r = find_maximal_green_sequences(&b, GreenSearchOptions::bounded(8)).unwrap();
        assert_eq!(r.sequences.len(), 1);
        assert_eq!(r.sequences[0].mutations, vec![1, 0]);
        assert!(r.truncated_branches > 0);
    }

    #[test]
    fn red_step_rejected() {
        let b = B::from_arrows(2, &[(0, 1)]).unwrap();
        let s = FramedSeed::new(b).unwrap();
        assert_eq!(
            s.apply_green_sequence(&[0, 0]),
            Err(MutationError::NotGreen(0))
        );
    }

    #[test]
    fn shortest_for_a3_is_three() {
        let b = B::from_arrows(3, &[(0, 1), (1, 2)]).unwrap();
        let s = shortest_maximal_green_sequence(&b, 10).unwrap().unwrap();
        assert_eq!(s.mutations.len(), 3);
    }

    fn skew(n: usize, max: i32) -> impl Strategy<Value = B> {
        proptest::collection::vec(-max..=max, n * (n - 1) / 2).prop_map(move |v| {
            let mut m = B::zero(n);
            let mut it = v.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let x = it.next().unwrap();
                    m.set(i, j, x);
                    m.set(j, i, -x);
                }
            }
            m
        })
    }

    proptest! {
        #[test]
        fn matrix_mutation_is_involution(b in skew(5, 3), k in 0usize..5) {
            let m = b.mutate(k).unwrap();
            prop_assert!(m.is_skew_symmetric());
            prop_assert_eq!(m.mutate(k).unwrap(), b);
        }

        #[test]
        fn framed_mutation_is_involution(b in skew(4, 2), seq in proptest::collection::vec(0usize..4, 0..6)) {
            let mut s = FramedSeed::new(b).unwrap();
            for k in seq {
                s = s.mutate(k).unwrap();
                let back = s.mutate(k).unwrap();
                prop_assert!(s.b.is_skew_symmetric());
                prop_assert_eq!(back.mutate(k).unwrap(), s.clone());
            }
        }

        #[test]
        fn bigint_agrees_with_i64(b in skew(4, 3), seq in proptest::collection::vec(0usize..4, 0..12)) {
            let mut small = b.convert::<i64>().unwrap();
            let mut big = b.convert::<BigInt>().unwrap();
            for k in seq {
                if big.max_abs_entry() > BigInt::from(1u64 << 30) {
                    break;
                }
                small = small.mutate(k).unwrap();
                big = big.mutate(k).unwrap();
                prop_assert_eq!(big.convert::<i64>().unwrap(), small.clone());
            }
        }
    }

    #[test]
    fn wild_quiver_entries_outgrow_i32() {
        // Markov-type growth: alternate mutations on a 3-cycle with weights 3.
        let b = ExchangeMatrix::<BigInt>::skew_from_rows(vec![
            vec![0.into(), 3.into(), (-3).into()],
            vec![(-3).into(), 0.into(), 4.into()],
            vec![3.into(), (-4).into(), 0.into()],
        ])
        .unwrap();
        let mut m = b;
        let mut step = 0;
        while m.max_abs_entry() <= BigInt::from(i32::MAX) {
            m = m.mutate(step % 3).unwrap();
            assert!(m.is_skew_symmetric());
            step += 1;
            assert!(step < 40, "entries stopped growing");
        }
        let big = m.max_abs_entry();
        assert!(big > BigInt::from(i32::MAX));
        assert!(m.convert::<i32>().is_none());
    }
}
