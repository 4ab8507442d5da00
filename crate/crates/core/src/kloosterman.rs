//! Kloosterman sums `S(m, n; c)` and the classical identities and bounds
//! they satisfy.

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{self, gcd, gcd3, mod_inverse, mul_mod, rem, Modulus};
use crate::error::{Error, Result};
use crate::verdict::Verdict;

/// `e(num / den) = exp(2 pi i num / den)`, with the phase reduced exactly
/// to `[0, 1)` before evaluation.
pub fn e_frac(num: i64, den: u64) -> Complex64 {
    let r = rem(num, den);
    Complex64::from_polar(1.0, std::f64::consts::TAU * (r as f64 / den as f64))
}

/// `e(t)` for real `t`, reduced to `[0, 1)` first.
pub fn e(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * t.rem_euclid(1.0))
}

/// Roots of unity and unit inverses for one modulus, so that many sums
/// modulo the same `c` share the setup cost.
#[derive(Debug, Clone)]
pub struct KloostermanTable {
    c: u64,
    roots: Vec<Complex64>,
    /// `(x, x^{-1})` for every unit `x`.
    units: Vec<(u64, u64)>,
}

impl KloostermanTable {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 || c > arith::MAX_MODULUS {
            return Err(Error::InvalidModulus(c));
        }
        let roots = (0..c).map(|k| e_frac(k as i64, c)).collect();
        let units = arith::units(c).into_iter().map(|x| (x, mod_inverse(x as i64, c).expect("unit"))).collect();
        Ok(KloostermanTable { c, roots, units })
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    pub fn sum(&self, m: i64, n: i64) -> Complex64 {
        let c = self.c;
        let (m, n) = (rem(m, c), rem(n, c));
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, xi) in &self.units {
            let k = (mul_mod(m, x, c) + mul_mod(n, xi, c)) % c;
            acc += self.roots[k as usize];
        }
        acc
    }
}

/// `S(m, n; c)`.
pub fn kloosterman_sum(m: i64, n: i64, c: u64) -> Result<Complex64> {
    Ok(KloostermanTable::new(c)?.sum(m, n))
}

/// `gcd(|m|, |n|, c)`, with `gcd(0, 0, c) = c`.
pub fn gcd_mnc(m: i64, n: i64, c: u64) -> u64 {
    gcd3(m.unsigned_abs(), n.unsigned_abs(), c)
}

/// Weil bound `|S(m, n; c)| <= tau(c) sqrt(gcd(m, n, c) c)`.
pub fn check_weil(m: i64, n: i64, c: u64) -> Result<Verdict> {
    let modulus = Modulus::new(c)?;
    let s = kloosterman_sum(m, n, c)?;
    let bound = modulus.tau() as f64 * ((gcd_mnc(m, n, c) * c) as f64).sqrt();
    Ok(Verdict::le("weil", s.norm(), bound * (1.0 + 1e-12)))
}

/// Ramanujan-sum bound `|S(0, n; c)| <= gcd(n, c)`.
pub fn check_ramanujan(n: i64, c: u64) -> Result<Verdict> {
    let s = kloosterman_sum(0, n, c)?;
    let bound = gcd(n.unsigned_abs(), c) as f64;
    Ok(Verdict::le("ramanujan", s.norm(), bound + 1e-9))
}

/// Twisted multiplicativity
/// `S(m, n; c1 c2) = S(m conj(c2)^2, n; c1) S(m conj(c1)^2, n; c2)` for coprime
/// `c1, c2`, where `conj(x)` is the inverse modulo the other factor.
pub fn check_multiplicativity(m: i64, n: i64, c1: u64, c2: u64) -> Result<Verdict> {
    if gcd(c1, c2) != 1 {
        return Err(Error::NotCoprime(c1, c2));
    }
    let lhs = kloosterman_sum(m, n, c1 * c2)?;
    let c2_inv = mod_inverse(c2 as i64, c1)?;
    let c1_inv = mod_inverse(c1 as i64, c2)?;
    let m1 = mul_mod(rem(m, c1), mul_mod(c2_inv, c2_inv, c1), c1);
    let m2 = mul_mod(rem(m, c2), mul_mod(c1_inv, c1_inv, c2), c2);
    let rhs = kloosterman_sum(m1 as i64, n, c1)? * kloosterman_sum(m2 as i64, n, c2)?;
    let diff = (lhs - rhs).norm();
    Ok(Verdict::residual("multiplicativity", diff, 1e-8))
}

/// `S(g m, g n; g c) = phi(g c) / phi(c) S(m, n; c)`.
pub fn check_scaling(g: u64, m: i64, n: i64, c: u64) -> Result<Verdict> {
    if g == 0 {
        return Err(Error::Usage("scaling factor must be positive".into()));
    }
    let gc = g.checked_mul(c).ok_or(Error::InvalidModulus(u64::MAX))?;
    let lhs = kloosterman_sum(g as i64 * m, g as i64 * n, gc)?;
    let ratio = arith::euler_phi(gc)? as f64 / arith::euler_phi(c)? as f64;
    let rhs = kloosterman_sum(m, n, c)? * ratio;
    Ok(Verdict::residual("scaling", (lhs - rhs).norm(), 1e-8))
}

/// Result of running every identity on one `(m, n, c)`.
#[derive(Debug, Clone, Serialize)]
pub struct KloostermanReport {
    pub m: i64,
    pub n: i64,
    pub c: u64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub verdicts: Vec<Verdict>,
}

impl KloostermanReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Evaluate `S(m, n; c)` and every applicable identity: reality, symmetry,
/// periodicity, Weil, Ramanujan, multiplicativity over the first coprime
/// split of `c`, and scaling by 2.
pub fn full_report(m: i64, n: i64, c: u64) -> Result<KloostermanReport> {
    let modulus = Modulus::new(c)?;
    let table = KloostermanTable::new(c)?;
    let s = table.sum(m, n);
    let mut verdicts = vec![
        Verdict::residual("reality", s.im.abs(), 1e-9),
        Verdict::residual("symmetry", (s - table.sum(n, m)).norm(), 1e-9),
        Verdict::residual("periodicity", (s - table.sum(m + c as i64, n - c as i64)).norm(), 1e-9),
        check_weil(m, n, c)?,
        check_ramanujan(n, c)?,
    ];
    if modulus.factors.len() > 1 {
        let (p, k) = modulus.factors[0];
        let c1 = p.pow(k);
        verdicts.push(check_multiplicativity(m, n, c1, c / c1)?);
    }
    verdicts.push(check_scaling(2, m, n, c)?);
    Ok(KloostermanReport { m, n, c, re: s.re, im: s.im, abs: s.norm(), verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(z: Complex64, re: f64) -> bool {
        (z.re - re).abs() < 1e-12 && z.im.abs() < 1e-12
    }

    #[test]
    fn small_values() {
        assert!(close(kloosterman_sum(1, 1, 1).unwrap(), 1.0));
        assert!(close(kloosterman_sum(1, 1, 2).unwrap(), 1.0));
        assert!(close(kloosterman_sum(1, 1, 3).unwrap(), -1.0));
        assert!(close(kloosterman_sum(0, 0, 7).unwrap(), 6.0));
        assert!(close(kloosterman_sum(0, 1, 12).unwrap(), 0.0));
        assert!(close(kloosterman_sum(2, 2, 6).unwrap(), -1.0));
    }

    #[test]
    fn rejects_bad_modulus() {
        assert_eq!(kloosterman_sum(1, 1, 0), Err(Error::InvalidModulus(0)));
    }

    #[test]
    fn multiplicativity_needs_coprime() {
        assert_eq!(check_multiplicativity(1, 1, 4, 6).unwrap_err(), Error::NotCoprime(4, 6));
    }

    #[test]
    fn phase_reduction() {
        let a = e_frac(5, 3);
        let b = e_frac(-1, 3);
        assert!((a - b).norm() < 1e-15);
        assert!((e(2.25) - Complex64::i()).norm() < 1e-15);
    }
}
