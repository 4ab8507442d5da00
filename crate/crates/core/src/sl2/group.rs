use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::arith::{self, ext_gcd, gcd3, mod_inverse, mul_mod, rem, Modulus};
use crate::error::{budget, Error, Result};

/// Largest group (or subgroup) this crate will enumerate.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// An element `[[a, b], [c, d]]` of `SL_2(Z/cZ)`, entries stored as least
/// residues.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Sl2 {
    /// `[a, b, c, d]`, row-major.
    pub entries: [u64; 4],
    pub modulus: u64,
}

impl fmt::Debug for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]] mod {}", self.modulus)
    }
}

fn check_modulus(c: u64) -> Result<()> {
    if c == 0 || c > arith::MAX_MODULUS {
        return Err(Error::InvalidModulus(c));
    }
    Ok(())
}

impl Sl2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        let g = Sl2 { entries: [a, b, c, d].map(|x| rem(x, modulus)), modulus };
        if g.det() != 1 % modulus {
            return Err(Error::NotSpecialLinear(modulus));
        }
        Ok(g)
    }

    pub(crate) fn from_residues(entries: [u64; 4], modulus: u64) -> Self {
        debug_assert!(entries.iter().all(|&x| x < modulus));
        Sl2 { entries, modulus }
    }

    pub fn identity(modulus: u64) -> Self {
        Self::scalar(1, modulus)
    }

    /// `gamma * I`; only in the group when `gamma^2 = 1`.
    pub fn scalar(gamma: u64, modulus: u64) -> Self {
        let g = gamma % modulus;
        Sl2 { entries: [g, 0, 0, g], modulus }
    }

    /// `T^k = [[1, k], [0, 1]]`.
    pub fn t_pow(k: i64, modulus: u64) -> Self {
        Sl2 { entries: [1 % modulus, rem(k, modulus), 0, 1 % modulus], modulus }
    }

    /// `S = [[0, -1], [1, 0]]`.
    pub fn s(modulus: u64) -> Self {
        Sl2 { entries: [0, rem(-1, modulus), 1 % modulus, 0], modulus }
    }

    fn det(&self) -> u64 {
        let [a, b, c, d] = self.entries;
        let n = self.modulus;
        (mul_mod(a, d, n) + n - mul_mod(b, c, n)) % n
    }

    pub fn mul(&self, other: &Sl2) -> Sl2 {
        debug_assert_eq!(self.modulus, other.modulus);
        let n = self.modulus;
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = other.entries;
        let dot = |x: u64, y: u64, z: u64, w: u64| (mul_mod(x, y, n) + mul_mod(z, w, n)) % n;
        Sl2 { entries: [dot(a, e, b, g), dot(a, f, b, h), dot(c, e, d, g), dot(c, f, d, h)], modulus: n }
    }

    pub fn try_mul(&self, other: &Sl2) -> Result<Sl2> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(self.mul(other))
    }

    pub fn inverse(&self) -> Sl2 {
        let n = self.modulus;
        let [a, b, c, d] = self.entries;
        Sl2 { entries: [d, (n - b) % n, (n - c) % n, a], modulus: n }
    }

    pub fn pow(&self, mut k: u64) -> Sl2 {
        let mut base = *self;
        let mut acc = Sl2::identity(self.modulus);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn scale(&self, gamma: u64) -> Sl2 {
        let n = self.modulus;
        Sl2 { entries: self.entries.map(|x| mul_mod(x, gamma % n, n)), modulus: n }
    }

    /// Image under `SL_2(Z/cZ) -> SL_2(Z/dZ)`.
    pub fn reduce(&self, d: u64) -> Result<Sl2> {
        if d == 0 || !self.modulus.is_multiple_of(d) {
            return Err(Error::NotDivisor { d, c: self.modulus });
        }
        Ok(Sl2 { entries: self.entries.map(|x| x % d), modulus: d })
    }

    /// Whether `self = I (mod d)`.
    pub fn is_identity_mod(&self, d: u64) -> bool {
        let [a, b, c, dd] = self.entries;
        (a % d, b % d, c % d, dd % d) == (1 % d, 0, 0, 1 % d)
    }

    /// Canonical representative of the class `{gamma g}` in
    /// `PSL_2(Z/cZ)`: the lexicographically least entry vector among the
    /// scalings by `roots` (the square roots of unity modulo `c`).
    pub fn psl_key(&self, roots: &[u64]) -> [u64; 4] {
        roots.iter().map(|&g| self.scale(g).entries).min().unwrap_or(self.entries)
    }

    /// Whether `self = gamma I` for some `gamma^2 = 1`.
    pub fn is_psl_identity(&self) -> bool {
        let [a, b, c, d] = self.entries;
        b == 0 && c == 0 && a == d && mul_mod(a, a, self.modulus) == 1 % self.modulus
    }

    pub fn trace(&self) -> u64 {
        (self.entries[0] + self.entries[3]) % self.modulus
    }
}

/// Equality in `PSL_2(Z/cZ)`, i.e. modulo scalars `gamma I` with `gamma^2 = 1`.
pub fn psl_equal(g: &Sl2, h: &Sl2) -> bool {
    g.modulus == h.modulus && g.mul(&h.inverse()).is_psl_identity()
}

/// The word `T^{a1 h1} S T^{a2 h2} S ...`: odd positions use `a1`, even
/// positions `a2`.
pub fn word(h: &[i64], a1: i64, a2: i64, modulus: u64) -> Result<Sl2> {
    check_modulus(modulus)?;
    let s = Sl2::s(modulus);
    let mut acc = Sl2::identity(modulus);
    for (i, &hi) in h.iter().enumerate() {
        let a = if i % 2 == 0 { a1 } else { a2 };
        let k = rem(a, modulus) as i128 * hi as i128;
        let k = k.rem_euclid(modulus as i128) as i64;
        acc = acc.mul(&Sl2::t_pow(k, modulus)).mul(&s);
    }
    Ok(acc)
}

/// `|SL_2(Z/cZ)| = c^3 prod_{p | c} (1 - p^-2)`.
pub fn group_order(modulus: &Modulus) -> u128 {
    let c = modulus.value as u128;
    let mut order = c * c * c;
    for p in modulus.primes() {
        let p = p as u128;
        order = order / (p * p) * (p * p - 1);
    }
    order
}

/// `|Gamma_c(d)| = |SL_2(Z/cZ)| / |SL_2(Z/dZ)|`. This is `(c/d)^3` exactly
/// when every prime dividing `c` divides `d`; otherwise each prime of `c`
/// missing from `d` contributes a factor `1 - p^-2`.
pub fn gamma_order(c: u64, d: u64) -> Result<u128> {
    if d == 0 || !c.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, c });
    }
    Ok(group_order(&Modulus::new(c)?) / group_order(&Modulus::new(d)?))
}

/// A solution `(b, d)` of `a d - c b = 1 (mod n)` for a primitive column.
fn complete_column(a: u64, c: u64, n: u64) -> (u64, u64) {
    let (g, s, t) = ext_gcd(a as i64, c as i64);
    let ginv = mod_inverse(g, n).expect("primitive column");
    let d0 = mul_mod(rem(s, n), ginv, n);
    let b0 = mul_mod(rem(-t, n), ginv, n);
    (b0, d0)
}

fn primitive_columns(n: u64, filter: impl Fn(u64, u64) -> bool) -> Vec<(u64, u64)> {
    let mut cols = Vec::new();
    for a in 0..n {
        for c in 0..n {
            if gcd3(a, c, n) == 1 && filter(a, c) {
                cols.push((a, c));
            }
        }
    }
    cols
}

/// Every element of `SL_2(Z/cZ)`, lazily. Each primitive first column
/// `(a, c)` has exactly `c` completions `(b0 + t a, d0 + t c)`.
pub fn enumerate_group(modulus: u64) -> Result<impl Iterator<Item = Sl2>> {
    let m = Modulus::new(modulus)?;
    budget("SL_2 enumeration", group_order(&m), ENUMERATION_BUDGET)?;
    let n = modulus;
    let cols = primitive_columns(n, |_, _| true);
    Ok(cols.into_iter().flat_map(move |(a, c)| {
        let (b0, d0) = complete_column(a, c, n);
        (0..n).map(move |t| {
            let b = (b0 + mul_mod(t, a, n)) % n;
            let d = (d0 + mul_mod(t, c, n)) % n;
            Sl2::from_residues([a, b, c, d], n)
        })
    }))
}

/// Every element of the principal congruence subgroup
/// `Gamma_c(d) = ker(SL_2(Z/cZ) -> SL_2(Z/dZ))`.
pub fn enumerate_gamma(modulus: u64, d: u64) -> Result<impl Iterator<Item = Sl2>> {
    check_modulus(modulus)?;
    budget("Gamma_c(d) enumeration", gamma_order(modulus, d)?, ENUMERATION_BUDGET)?;
    let n = modulus;
    let cols = primitive_columns(n, |a, c| a % d == 1 % d && c % d == 0);
    Ok(cols.into_iter().flat_map(move |(a, c)| {
        let (b0, d0) = complete_column(a, c, n);
        // a = 1 (mod d), so b0 + t a = 0 (mod d) pins t modulo d.
        let t0 = rem(-(b0 as i64), d);
        (0..n / d).map(move |s| {
            let t = t0 + s * d;
            let b = (b0 + mul_mod(t, a, n)) % n;
            let dd = (d0 + mul_mod(t, c, n)) % n;
            Sl2::from_residues([a, b, c, dd], n)
        })
    }))
}

/// A uniformly random element of `SL_2(Z/cZ)`.
pub fn random_element<R: Rng + ?Sized>(modulus: u64, rng: &mut R) -> Sl2 {
    let n = modulus;
    loop {
        let a = rng.gen_range(0..n);
        let c = rng.gen_range(0..n);
        if gcd3(a, c, n) != 1 {
            continue;
        }
        let (b0, d0) = complete_column(a, c, n);
        let t = rng.gen_range(0..n);
        let b = (b0 + mul_mod(t, a, n)) % n;
        let d = (d0 + mul_mod(t, c, n)) % n;
        return Sl2::from_residues([a, b, c, d], n);
    }
}

/// Largest group whose conjugacy classes are computed.
pub const CLASS_BUDGET: u128 = 2_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct ConjClass {
    pub representative: Sl2,
    pub size: u64,
}

/// Conjugacy classes of `SL_2(Z/cZ)`, found as orbits under conjugation by
/// the generators `T` and `S`. Representatives are the first class members
/// in enumeration order.
pub fn conjugacy_classes(modulus: u64) -> Result<Vec<ConjClass>> {
    let m = Modulus::new(modulus)?;
    budget("conjugacy classes", group_order(&m), CLASS_BUDGET)?;
    let elements: Vec<Sl2> = enumerate_group(modulus)?.collect();
    let index: HashMap<Sl2, usize> = elements.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let gens = [Sl2::t_pow(1, modulus), Sl2::s(modulus)];
    let gens_inv = gens.map(|g| g.inverse());
    let mut seen = vec![false; elements.len()];
    let mut classes = Vec::new();
    for start in 0..elements.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(i) = stack.pop() {
            size += 1;
            for (g, gi) in gens.iter().zip(&gens_inv) {
                let j = index[&g.mul(&elements[i]).mul(gi)];
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        classes.push(ConjClass { representative: elements[start], size });
    }
    Ok(classes)
}
