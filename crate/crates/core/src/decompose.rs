//! Splitting permutation representations into irreducible invariant
//! subspaces with random elements of the commutant.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::spectral::hermitian_eigen;

/// A group acting on `{0, .., n-1}`, given by generator permutations.
#[derive(Debug, Clone)]
pub struct PermAction {
    n: usize,
    generators: Vec<Vec<usize>>,
}

impl PermAction {
    pub fn new(n: usize, generators: Vec<Vec<usize>>) -> Self {
        debug_assert!(generators.iter().all(|g| g.len() == n));
        PermAction { n, generators }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Orbital index of every pair `(i, j)`, row-major, with the number of
    /// orbitals.
    pub fn orbitals(&self) -> (Vec<u32>, usize) {
        let n = self.n;
        let mut label = vec![u32::MAX; n * n];
        let mut count = 0u32;
        for start in 0..n * n {
            if label[start] != u32::MAX {
                continue;
            }
            label[start] = count;
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                let (i, j) = (p / n, p % n);
                for g in &self.generators {
                    let q = g[i] * n + g[j];
                    if label[q] == u32::MAX {
                        label[q] = count;
                        queue.push_back(q);
                    }
                }
            }
            count += 1;
        }
        (label, count as usize)
    }
}

/// Group average `|G|^{-1} sum_g rho(g) R rho(g)^{-1}`: for a permutation
/// action this is the mean of `R` over each orbital.
fn average(r: &ComplexMatrix, orbitals: &[u32], count: usize) -> ComplexMatrix {
    let mut sums = vec![C64::new(0.0, 0.0); count];
    let mut sizes = vec![0usize; count];
    for (z, &o) in r.as_slice().iter().zip(orbitals) {
        sums[o as usize] += z;
        sizes[o as usize] += 1;
    }
    let n = r.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let o = orbitals[i * n + j] as usize;
        sums[o] / sizes[o] as f64
    })
}

fn random_hermitian(k: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let x = ComplexMatrix::from_fn(k, k, |_, _| C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0));
    (&x + &x.adjoint()).scale(C64::new(0.5, 0.0))
}

/// An invariant subspace given by an orthonormal basis (the columns of
/// `basis`).
#[derive(Debug, Clone)]
pub struct InvariantBlock {
    pub basis: ComplexMatrix,
}

impl InvariantBlock {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * &self.basis.adjoint()
    }

    /// `tr(rho(g)|_W) = sum_i sum_k conj(Q[perm i, k]) Q[i, k]` for the
    /// permutation `perm` of `g`.
    pub fn character(&self, perm: &[usize]) -> C64 {
        let q = &self.basis;
        let mut acc = C64::new(0.0, 0.0);
        for (i, &pi) in perm.iter().enumerate() {
            let (row_i, row_pi) = (q.row(i), q.row(pi));
            for k in 0..q.cols() {
                acc += row_pi[k].conj() * row_i[k];
            }
        }
        acc
    }

    /// `Q^* A Q`, the compression of `A` to the block.
    pub fn restrict(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(&self.basis.adjoint() * a) * &self.basis
    }
}

enum Split {
    Scalar,
    Parts(Vec<ComplexMatrix>),
}

const MAX_REDRAWS: usize = 8;

/// One random commutant draw restricted to the subspace spanned by `q`.
fn split_once(q: &ComplexMatrix, orbitals: &[u32], count: usize, rng: &mut ChaCha8Rng) -> Result<Option<Split>> {
    let k = q.cols();
    let rw = random_hermitian(k, rng);
    let r = &(q * &rw) * &q.adjoint();
    let h = average(&r, orbitals, count);
    let hw = &(&q.adjoint() * &h) * q;
    let (values, vectors) = hermitian_eigen(&hw)?;
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    let spread = values[k - 1] - values[0];
    if spread <= 1e-9 * scale {
        return Ok(Some(Split::Scalar));
    }
    let mut parts = Vec::new();
    let mut current = vec![0];
    for i in 1..k {
        let gap = values[i] - values[i - 1];
        if gap > 1e-10 * scale && gap <= 1e-7 * scale {
            // Neither clearly degenerate nor clearly split: draw again.
            return Ok(None);
        }
        if gap > 1e-7 * scale {
            parts.push(std::mem::take(&mut current));
        }
        current.push(i);
    }
    parts.push(current);
    Ok(Some(Split::Parts(parts.iter().map(|cols| q * &vectors.select_columns(cols)).collect())))
}

/// Decompose the subspace spanned by the columns of `start` (the whole
/// space when `None`) into irreducible invariant subspaces.
///
/// A subspace is accepted as irreducible once two independent commutant
/// draws both act on it as scalars.
pub fn decompose_invariants(
    action: &PermAction,
    start: Option<&ComplexMatrix>,
    seed: u64,
) -> Result<Vec<InvariantBlock>> {
    let n = action.dim();
    let (orbitals, count) = action.orbitals();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = start.cloned().unwrap_or_else(|| ComplexMatrix::identity(n));
    if initial.rows() != n {
        return Err(Error::Dimension(format!("start basis has {} rows, action has {n}", initial.rows())));
    }
    let mut stack = vec![initial];
    let mut blocks = Vec::new();
    while let Some(q) = stack.pop() {
        if q.cols() == 0 {
            continue;
        }
        if q.cols() == 1 {
            blocks.push(InvariantBlock { basis: q });
            continue;
        }
        let mut scalar_draws = 0;
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > MAX_REDRAWS {
                return Err(Error::Convergence {
                    method: "decompose_invariants".into(),
                    detail: format!("ambiguous eigenvalue gaps on a {}-dimensional block", q.cols()),
                });
            }
            match split_once(&q, &orbitals, count, &mut rng)? {
                None => continue,
                Some(Split::Scalar) => {
                    scalar_draws += 1;
                    if scalar_draws == 2 {
                        blocks.push(InvariantBlock { basis: q });
                        break;
                    }
                }
                Some(Split::Parts(parts)) => {
                    stack.extend(parts.into_iter().rev());
                    break;
                }
            }
        }
    }
    // Deterministic order: by dimension, then by the position of the
    // largest-weight basis row.
    blocks.sort_by_key(|b| {
        let p = b.projector();
        let lead = (0..n).max_by(|&i, &j| p[(i, i)].re.total_cmp(&p[(j, j)].re)).unwrap_or(0);
        (b.dim(), lead)
    });
    Ok(blocks)
}

/// Group ids for character vectors: equal ids iff the characters agree
/// within `tol` in every entry. Ids are assigned in order of first
/// appearance.
pub fn group_by_character(characters: &[Vec<C64>], tol: f64) -> Vec<usize> {
    let mut reps: Vec<&Vec<C64>> = Vec::new();
    characters
        .iter()
        .map(|chi| {
            if let Some(i) =
                reps.iter().position(|r| r.len() == chi.len() && r.iter().zip(chi).all(|(a, b)| (a - b).norm() <= tol))
            {
                i
            } else {
                reps.push(chi);
                reps.len() - 1
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_regular_splits_into_lines() {
        let n = 6;
        let shift: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let blocks = decompose_invariants(&PermAction::new(n, vec![shift]), None, 3).unwrap();
        assert_eq!(blocks.len(), n);
        assert!(blocks.iter().all(|b| b.dim() == 1));
    }

    #[test]
    fn symmetric_group_on_three_points() {
        // S_3 acting on 3 points: trivial + standard.
        let gens = vec![vec![1, 0, 2], vec![1, 2, 0]];
        let blocks = decompose_invariants(&PermAction::new(3, gens), None, 11).unwrap();
        let dims: Vec<usize> = blocks.iter().map(|b| b.dim()).collect();
        assert_eq!(dims, vec![1, 2]);
    }
}
