//! Elementary number theory on moduli up to 2^31.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 1 << 31;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    gcd(gcd(a, b), c)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Least non-negative residue of `x` modulo `c`.
#[inline]
pub fn rem(x: i64, c: u64) -> u64 {
    (x as i128).rem_euclid(c as i128) as u64
}

/// `(a * b) mod c` without overflow for residues below 2^32.
#[inline]
pub fn mul_mod(a: u64, b: u64, c: u64) -> u64 {
    ((a as u128 * b as u128) % c as u128) as u64
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

/// Inverse of `x` modulo `c`, as a residue in `[0, c)`.
pub fn mod_inverse(x: i64, c: u64) -> Result<u64> {
    if c == 0 {
        return Err(Error::InvalidModulus(0));
    }
    let r = rem(x, c);
    let (g, s, _) = ext_gcd(r as i64, c as i64);
    if g != 1 {
        return Err(Error::NotInvertible { x, modulus: c, gcd: g as u64 });
    }
    Ok(rem(s, c))
}

/// All solutions `x` in `[0, c)` of `a x = b (mod c)`.
pub fn solve_linear(a: u64, b: u64, c: u64) -> Vec<u64> {
    let a = a % c;
    let b = b % c;
    let g = gcd(a, c);
    if !b.is_multiple_of(g) {
        return Vec::new();
    }
    let c_red = c / g;
    // a/g is a unit modulo c/g; c_red == 1 means every residue solves.
    let x0 = if c_red == 1 {
        0
    } else {
        let inv = mod_inverse((a / g) as i64, c_red).expect("reduced coefficient is a unit");
        mul_mod(b / g, inv, c_red)
    };
    (0..g).map(|k| x0 + k * c_red).collect()
}

/// A modulus together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Modulus {
    pub value: u64,
    /// `(p, k)` pairs with `p` increasing.
    pub factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(c: u64) -> Result<Self> {
        factorize(c)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Prime powers `p^k || c`.
    pub fn prime_powers(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, k)| p.pow(k)).collect()
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn phi(&self) -> u64 {
        self.factors.iter().map(|&(p, k)| (p - 1) * p.pow(k - 1)).product()
    }

    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, k)| k as u64 + 1).product()
    }

    /// Divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, k) in &self.factors {
            let len = out.len();
            let mut pk = 1;
            for _ in 0..k {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn valuation(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, k)| k)
    }
}

/// Factor `c` by trial division. Requires `1 <= c <= 2^31`.
pub fn factorize(c: u64) -> Result<Modulus> {
    if c == 0 || c > MAX_MODULUS {
        return Err(Error::InvalidModulus(c));
    }
    let mut n = c;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            factors.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    Ok(Modulus { value: c, factors })
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.phi())
}

pub fn tau(n: u64) -> Result<u64> {
    Ok(factorize(n)?.tau())
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

pub fn mobius(n: u64) -> Result<i64> {
    let m = factorize(n)?;
    if m.factors.iter().any(|&(_, k)| k > 1) {
        Ok(0)
    } else if m.factors.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Largest divisor of `a` coprime to `b`.
pub fn coprime_part(mut a: u64, b: u64) -> u64 {
    loop {
        let g = gcd(a, b);
        if g == 1 {
            return a;
        }
        a /= g;
    }
}

/// Largest `f` with `f^2 | n`.
pub fn square_root_part(n: u64) -> Result<u64> {
    Ok(factorize(n)?.factors.iter().map(|&(p, k)| p.pow(k / 2)).product())
}

/// Residues `g` modulo `c` with `g^2 = 1`, in increasing order.
pub fn square_roots_of_unity(c: u64) -> Vec<u64> {
    if c == 1 {
        return vec![0];
    }
    (1..c).filter(|&g| mul_mod(g, g, c) == 1).collect()
}

/// Units modulo `c` in increasing order (`{0}` when `c = 1`).
pub fn units(c: u64) -> Vec<u64> {
    if c == 1 {
        return vec![0];
    }
    (1..c).filter(|&x| gcd(x, c) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_examples() {
        assert_eq!(factorize(45).unwrap().factors, vec![(3, 2), (5, 1)]);
        assert_eq!(factorize(1).unwrap().factors, vec![]);
        assert_eq!(factorize(2147483647).unwrap().factors, vec![(2147483647, 1)]);
        assert!(factorize(0).is_err());
        assert!(factorize(MAX_MODULUS + 1).is_err());
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(euler_phi(45).unwrap(), 24);
        assert_eq!(tau(45).unwrap(), 6);
        assert_eq!(mobius(45).unwrap(), 0);
        assert_eq!(mobius(30).unwrap(), -1);
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(coprime_part(72, 6), 1);
        assert_eq!(coprime_part(45, 3), 5);
        assert_eq!(square_root_part(27).unwrap(), 3);
        assert_eq!(square_roots_of_unity(8), vec![1, 3, 5, 7]);
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(7, 45).unwrap(), 13);
        assert_eq!(mod_inverse(-2, 45).unwrap(), 22);
        assert!(matches!(mod_inverse(6, 45), Err(Error::NotInvertible { gcd: 3, .. })));
        assert_eq!(mod_inverse(0, 1).unwrap(), 0);
    }

    #[test]
    fn linear_congruences() {
        assert_eq!(solve_linear(6, 3, 9), vec![2, 5, 8]);
        assert!(solve_linear(6, 4, 9).is_empty());
        assert_eq!(solve_linear(0, 0, 3), vec![0, 1, 2]);
    }
}
