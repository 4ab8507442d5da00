//! The permutation representation of `SL_2(Z/cZ)` on `P^1(Z/cZ)`, its level
//! projections and Fourier coefficients of group functions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{self, Modulus};
use crate::decompose::{self, InvariantBlock, PermAction};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::sl2::{self, enumerate_gamma, p1_size, ProjectiveLine, Sl2};
use crate::spectral;
use crate::verdict::Verdict;

/// `rho_c(g) 1_u = 1_{g u}` on `C[P^1(Z/cZ)]`.
#[derive(Debug, Clone)]
pub struct PermRep {
    line: ProjectiveLine,
}

impl PermRep {
    pub fn new(c: u64) -> Result<Self> {
        Ok(PermRep { line: ProjectiveLine::new(c)? })
    }

    pub fn line(&self) -> &ProjectiveLine {
        &self.line
    }

    pub fn modulus(&self) -> &Modulus {
        self.line.modulus()
    }

    pub fn c(&self) -> u64 {
        self.line.c()
    }

    pub fn dim(&self) -> usize {
        self.line.len()
    }

    fn check(&self, g: &Sl2) -> Result<()> {
        if g.modulus != self.c() {
            return Err(Error::ModulusMismatch(g.modulus, self.c()));
        }
        Ok(())
    }

    pub fn rho_perm(&self, g: &Sl2) -> Result<Vec<usize>> {
        self.check(g)?;
        Ok(self.line.permutation(g))
    }

    pub fn rho_matrix(&self, g: &Sl2) -> Result<ComplexMatrix> {
        Ok(ComplexMatrix::permutation(&self.rho_perm(g)?))
    }

    /// `chi_c(g)`, the number of fixed points of `g` on `P^1(Z/cZ)`.
    pub fn char_value(&self, g: &Sl2) -> Result<usize> {
        self.check(g)?;
        Ok((0..self.dim()).filter(|&u| self.line.act(g, u) == u).count())
    }

    /// Action of the generators `T`, `S` as point permutations.
    pub fn action(&self) -> PermAction {
        let c = self.c();
        PermAction::new(self.dim(), vec![self.line.permutation(&Sl2::t_pow(1, c)), self.line.permutation(&Sl2::s(c))])
    }

    /// Projection `P_c(d)` onto the `Gamma_c(d)`-invariant vectors, from the
    /// closed form: entries [`level_weight`] on pairs of points with equal
    /// reduction modulo `d`, zero elsewhere.
    pub fn projection_level(&self, d: u64) -> Result<ComplexMatrix> {
        let red = self.line.reductions(d)?;
        let w = level_weight(self.c(), d)?;
        let n = self.dim();
        Ok(ComplexMatrix::from_fn(n, n, |u, v| if red[u] == red[v] { C64::new(w, 0.0) } else { ZERO }))
    }

    /// `P_c(d)` as the group average `|Gamma|^{-1} sum_{n in Gamma_c(d)} rho(n)`.
    pub fn projection_level_by_averaging(&self, d: u64) -> Result<ComplexMatrix> {
        let c = self.c();
        if d == 0 || !c.is_multiple_of(d) {
            return Err(Error::NotDivisor { d, c });
        }
        let n = self.dim();
        let mut counts = vec![0u64; n * n];
        let mut total = 0u64;
        for g in enumerate_gamma(c, d)? {
            for u in 0..n {
                counts[self.line.act(&g, u) * n + u] += 1;
            }
            total += 1;
        }
        let inv = 1.0 / total as f64;
        Ok(ComplexMatrix::from_fn(n, n, |i, j| C64::new(counts[i * n + j] as f64 * inv, 0.0)))
    }

    /// Sifted projection `P_c^o = sum_{d | c} mu(c/d) P_c(d)` onto the
    /// primitive part. For `c = 1` this is the identity on the single point.
    pub fn projection_sifted(&self) -> Result<ComplexMatrix> {
        let c = self.c();
        let n = self.dim();
        let mut acc = ComplexMatrix::zeros(n, n);
        for d in self.modulus().divisors() {
            let mu = arith::mobius(c / d)?;
            if mu != 0 {
                acc = &acc + &self.projection_level(d)?.scale(C64::new(mu as f64, 0.0));
            }
        }
        Ok(acc)
    }

    /// `P_c^o` assembled as the tensor product over `p^k || c` of
    /// `I - P_{p^k}(p^{k-1})`, transported through the CRT bijection
    /// `P^1(Z/cZ) = prod P^1(Z/p^kZ)`.
    pub fn projection_sifted_tensor(&self) -> Result<ComplexMatrix> {
        let n = self.dim();
        let mut acc = ComplexMatrix::from_fn(n, n, |_, _| ONE);
        for q in self.modulus().prime_powers() {
            let local = PermRep::new(q)?;
            let p = self.modulus().factors.iter().find(|&&(p, k)| p.pow(k) == q).unwrap().0;
            let local_proj = &ComplexMatrix::identity(local.dim()) - &local.projection_level(q / p)?;
            let idx: Vec<usize> = (0..n)
                .map(|u| {
                    let pt = self.line.point(u);
                    local.line.index_of(pt.x % q, pt.y % q)
                })
                .collect::<Result<_>>()?;
            for u in 0..n {
                for v in 0..n {
                    acc[(u, v)] *= local_proj[(idx[u], idx[v])];
                }
            }
        }
        Ok(acc)
    }

    /// `F^(rho_c) = sum_g F(g) rho_c(g)`.
    pub fn fourier_coeff(&self, f: &GroupFunction) -> Result<ComplexMatrix> {
        if f.modulus() != self.c() {
            return Err(Error::ModulusMismatch(f.modulus(), self.c()));
        }
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (g, &w) in f.iter() {
            for u in 0..n {
                m[(self.line.act(g, u), u)] += w;
            }
        }
        Ok(m)
    }

    /// `F^(rho_c) P_c^o`, whose norms are those of `F^(rho_c^o)`.
    pub fn fourier_coeff_sifted(&self, f: &GroupFunction) -> Result<ComplexMatrix> {
        Ok(&self.fourier_coeff(f)? * &self.projection_sifted()?)
    }

    /// Decompose `rho_c` (or `rho_c^o` when `sifted`) into irreducible
    /// invariant subspaces and describe them.
    pub fn decompose(&self, sifted: bool, seed: u64) -> Result<RepDecomposition> {
        let start = if sifted { Some(spectral::projection_range(&self.projection_sifted()?)?) } else { None };
        let blocks = decompose::decompose_invariants(&self.action(), start.as_ref(), seed)?;
        let classes = sl2::conjugacy_classes(self.c())?;
        let class_perms: Vec<Vec<usize>> = classes.iter().map(|cl| self.line.permutation(&cl.representative)).collect();
        let characters: Vec<Vec<C64>> =
            blocks.iter().map(|b| class_perms.iter().map(|p| b.character(p)).collect()).collect();
        let groups = decompose::group_by_character(&characters, 1e-6);

        let c = self.c();
        let mut kernels = Vec::new();
        for p in self.modulus().primes() {
            let perms: Vec<Vec<usize>> = enumerate_gamma(c, c / p)?.map(|g| self.line.permutation(&g)).collect();
            kernels.push(perms);
        }
        let subspaces = blocks
            .iter()
            .zip(&characters)
            .zip(&groups)
            .map(|((b, chi), &group)| {
                let dim = b.dim();
                let acts_nontrivially =
                    |perms: &Vec<Vec<usize>>| perms.iter().any(|p| (b.character(p).re - dim as f64).abs() > 1e-6);
                let primitive = if kernels.is_empty() { None } else { Some(kernels.iter().all(acts_nontrivially)) };
                Subspace {
                    dim,
                    character: chi.iter().map(|z| [z.re, z.im]).collect(),
                    multiplicity_group: group,
                    primitive,
                }
            })
            .collect();
        Ok(RepDecomposition {
            report: SubspaceReport {
                c,
                sifted,
                dim: start.as_ref().map_or(self.dim(), |q| q.cols()),
                class_sizes: classes.iter().map(|cl| cl.size).collect(),
                subspaces,
            },
            blocks,
        })
    }
}

/// Common value of the nonzero entries of `P_c(d)`: the inverse size of a
/// `Gamma_c(d)`-orbit, `|P^1(Z/dZ)| / |P^1(Z/cZ)|`.
///
/// Equals `d^2 phi(c) / (c^2 phi(d))` times `prod (1 - p^-2)^-1` over the
/// primes `p | c` with `p` not dividing `d`; the product is empty when the
/// two moduli have the same prime support.
pub fn level_weight(c: u64, d: u64) -> Result<f64> {
    if d == 0 || !c.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, c });
    }
    Ok(p1_size(&Modulus::new(d)?) as f64 / p1_size(&Modulus::new(c)?) as f64)
}

/// `d^2 phi(c) / (c^2 phi(d))`, which agrees with [`level_weight`] when every
/// prime of `c` divides `d`.
pub fn level_weight_same_support(c: u64, d: u64) -> Result<f64> {
    if d == 0 || !c.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, c });
    }
    Ok((d * d) as f64 * arith::euler_phi(c)? as f64 / ((c * c) as f64 * arith::euler_phi(d)? as f64))
}

/// `|P^1(Z/p^kZ)| - |P^1(Z/p^{k-1}Z)|` multiplied over `p^k || c`.
pub fn sifted_dimension(modulus: &Modulus) -> Result<u64> {
    let mut dim = 1;
    for &(p, k) in &modulus.factors {
        dim *= p1_size(&Modulus::new(p.pow(k))?) - p1_size(&Modulus::new(p.pow(k - 1))?);
    }
    Ok(dim)
}

#[derive(Debug, Clone, Serialize)]
pub struct Subspace {
    pub dim: usize,
    /// Character values `[re, im]` on the conjugacy-class representatives.
    pub character: Vec<[f64; 2]>,
    /// Blocks with equal characters share a group id.
    pub multiplicity_group: usize,
    /// Whether every `Gamma_c(c/p)` acts nontrivially; `None` for `c = 1`.
    pub primitive: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubspaceReport {
    pub c: u64,
    pub sifted: bool,
    pub dim: usize,
    pub class_sizes: Vec<u64>,
    pub subspaces: Vec<Subspace>,
}

impl SubspaceReport {
    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.subspaces.iter().map(|s| s.dim).collect();
        d.sort_unstable();
        d
    }
}

#[derive(Debug, Clone)]
pub struct RepDecomposition {
    pub report: SubspaceReport,
    pub blocks: Vec<InvariantBlock>,
}

/// A finitely supported function on `SL_2(Z/cZ)`; repeated additions at the
/// same element accumulate.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    modulus: u64,
    values: BTreeMap<Sl2, C64>,
}

impl GroupFunction {
    pub fn new(modulus: u64) -> Self {
        GroupFunction { modulus, values: BTreeMap::new() }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn add(&mut self, g: Sl2, w: C64) -> Result<()> {
        if g.modulus != self.modulus {
            return Err(Error::ModulusMismatch(g.modulus, self.modulus));
        }
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::NonFinite("group function weight".into()));
        }
        *self.values.entry(g).or_insert(ZERO) += w;
        Ok(())
    }

    pub fn get(&self, g: &Sl2) -> C64 {
        self.values.get(g).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sl2, &C64)> {
        self.values.iter()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// `sum_g |F(g)|`, which bounds every operator norm of `F^`.
    pub fn l1_norm(&self) -> f64 {
        self.values.values().map(|w| w.norm()).sum()
    }
}

impl GroupFunction {
    /// `support` random elements with complex weights in the unit square.
    pub fn random<R: rand::Rng + ?Sized>(modulus: u64, support: usize, rng: &mut R) -> Result<Self> {
        Modulus::new(modulus)?;
        let mut f = GroupFunction::new(modulus);
        for _ in 0..support {
            let g = sl2::random_element(modulus, rng);
            f.add(g, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))?;
        }
        Ok(f)
    }
}

/// `(1/|G|) sum_g |chi(g)|^2` from `(value, class size)` pairs; passes when
/// the mean is within `1e-6` of a positive integer.
pub fn multiplicity_identity_check(values: &[(C64, u64)], order: u64) -> Result<Verdict> {
    let covered: u64 = values.iter().map(|&(_, s)| s).sum();
    if order == 0 || covered != order {
        return Err(Error::Usage(format!("class sizes sum to {covered}, group order is {order}")));
    }
    let mean = values.iter().map(|&(v, s)| v.norm_sqr() * s as f64).sum::<f64>() / order as f64;
    let nearest = mean.round().max(1.0);
    Ok(Verdict::close("sum_square_character", mean, nearest, 1e-6))
}

/// `||A||_{S^q}^q` against the sum of `||Q^* A Q||_{S^q}^q` over blocks
/// whose ranges decompose the space, to `1e-6` relative.
pub fn blockwise_schatten_check(a: &ComplexMatrix, blocks: &[InvariantBlock], q: f64) -> Result<Verdict> {
    let covered: usize = blocks.iter().map(|b| b.dim()).sum();
    if !a.is_square() || covered != a.rows() {
        return Err(Error::Dimension(format!("blocks cover {covered} of {}", a.rows())));
    }
    let whole = spectral::schatten_power(a, q)?;
    let parts = blocks
        .iter()
        .map(|b| spectral::schatten_power(&b.restrict(a), q))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .sum::<f64>();
    Ok(Verdict::close(format!("schatten_blocks[q={q}]"), parts, whole, 1e-6 * whole.max(1e-300)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters_examples() {
        let rep = PermRep::new(9).unwrap();
        assert_eq!(rep.char_value(&Sl2::t_pow(3, 9)).unwrap(), 3);
        assert_eq!(rep.char_value(&Sl2::identity(9)).unwrap(), 12);
        let rep5 = PermRep::new(5).unwrap();
        assert_eq!(rep5.char_value(&Sl2::s(5)).unwrap(), 2);
    }

    #[test]
    fn projection_trace_and_c1() {
        let rep = PermRep::new(12).unwrap();
        let p = rep.projection_level(4).unwrap();
        assert!((p.trace().re - 6.0).abs() < 1e-12);
        let p = rep.projection_level(3).unwrap();
        assert!((p.trace().re - 4.0).abs() < 1e-12);
        let one = PermRep::new(1).unwrap();
        assert_eq!(one.projection_sifted().unwrap(), ComplexMatrix::identity(1));
    }

    #[test]
    fn sifted_dims() {
        assert_eq!(sifted_dimension(&Modulus::new(9).unwrap()).unwrap(), 8);
        assert_eq!(sifted_dimension(&Modulus::new(12).unwrap()).unwrap(), 9);
        assert_eq!(sifted_dimension(&Modulus::new(1).unwrap()).unwrap(), 1);
    }

    #[test]
    fn group_function_accumulates() {
        let mut f = GroupFunction::new(5);
        f.add(Sl2::s(5), ONE).unwrap();
        f.add(Sl2::s(5), ONE).unwrap();
        assert_eq!(f.support_len(), 1);
        assert_eq!(f.get(&Sl2::s(5)), C64::new(2.0, 0.0));
        assert!(f.add(Sl2::s(7), ONE).is_err());
    }
}
