use std::collections::VecDeque;

use serde::Serialize;

use super::group::{enumerate_gamma, Sl2};
use crate::arith::{self, gcd, gcd3, mod_inverse, mul_mod, rem, Modulus};
use crate::error::{budget, Error, Result};

/// Largest modulus for which a dense point index is built.
pub const MAX_LINE_MODULUS: u64 = 4096;

/// A point `[x : y]` of `P^1(Z/cZ)` in canonical form: `y` is the divisor
/// `gcd(y, c)` of `c` (so the point at infinity has `y = c`) and `x` is the
/// least residue in its orbit under the units fixing `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjPoint {
    pub x: u64,
    pub y: u64,
}

/// Canonical form of `[x : y]` modulo `c`.
pub fn p1_canonicalize(x: i64, y: i64, c: u64) -> Result<ProjPoint> {
    if c == 0 || c > arith::MAX_MODULUS {
        return Err(Error::InvalidModulus(c));
    }
    let (xr, yr) = (rem(x, c), rem(y, c));
    if gcd3(xr, yr, c) != 1 {
        return Err(Error::NotProjectivePoint { x: xr, y: yr, modulus: c });
    }
    let f = gcd(yr, c);
    let cf = c / f;
    // y / f is a unit modulo c / f; lift its inverse to a unit modulo c.
    let alpha0 = mod_inverse((yr / f) as i64, cf).expect("coprime cofactor");
    let alpha = (0..f).map(|k| alpha0 + k * cf).find(|&a| gcd(a, c) == 1).expect("unit lift exists");
    let x1 = mul_mod(alpha, xr, c);
    // Residual stabilizer of y: units congruent to 1 modulo c / f.
    let x = (0..f)
        .map(|k| (1 + k * cf) % c.max(1))
        .filter(|&b| gcd(b, c) == 1)
        .map(|b| mul_mod(b, x1, c))
        .min()
        .unwrap_or(0);
    Ok(ProjPoint { x, y: f })
}

/// `|P^1(Z/cZ)| = c prod_{p | c} (1 + 1/p)`.
pub fn p1_size(modulus: &Modulus) -> u64 {
    let mut size = modulus.value;
    for p in modulus.primes() {
        size = size / p * (p + 1);
    }
    size
}

/// Canonical image of `u` under `P^1(Z/cZ) -> P^1(Z/dZ)`.
pub fn p1_reduce(u: ProjPoint, d: u64) -> Result<ProjPoint> {
    p1_canonicalize((u.x % d) as i64, (u.y % d) as i64, d)
}

/// The projective line modulo `c` with a dense index of its points.
///
/// The affine points `[x : 1]` come first, at index `x`; the rest follow
/// ordered by `(y, x)`.
#[derive(Debug, Clone)]
pub struct ProjectiveLine {
    modulus: Modulus,
    points: Vec<ProjPoint>,
    /// `index[x * c + y]` for every primitive pair, `u32::MAX` otherwise.
    index: Vec<u32>,
}

impl ProjectiveLine {
    pub fn new(c: u64) -> Result<Self> {
        let modulus = Modulus::new(c)?;
        budget("projective line index", c as u128, MAX_LINE_MODULUS as u128)?;
        let mut points: Vec<ProjPoint> = (0..c).map(|x| ProjPoint { x, y: 1 % c.max(2) }).collect();
        if c == 1 {
            points = vec![ProjPoint { x: 0, y: 1 }];
        }
        let mut rest = Vec::new();
        for f in modulus.divisors() {
            if f == 1 {
                continue;
            }
            for x in 0..c {
                if gcd(x, f) != 1 {
                    continue;
                }
                let p = p1_canonicalize(x as i64, f as i64, c)?;
                if p.x == x && p.y == f {
                    rest.push(p);
                }
            }
        }
        rest.sort_by_key(|p| (p.y, p.x));
        points.extend(rest);
        debug_assert_eq!(points.len() as u64, p1_size(&modulus));

        let units = arith::units(c);
        let mut index = vec![u32::MAX; (c * c) as usize];
        for (i, p) in points.iter().enumerate() {
            for &a in &units {
                let x = mul_mod(a, p.x, c);
                let y = mul_mod(a, p.y % c, c);
                index[(x * c + y) as usize] = i as u32;
            }
        }
        Ok(ProjectiveLine { modulus, points, index })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn c(&self) -> u64 {
        self.modulus.value
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> ProjPoint {
        self.points[i]
    }

    /// Index of the point `[x : y]` (any representative).
    pub fn index_of(&self, x: u64, y: u64) -> Result<usize> {
        let c = self.c();
        let (x, y) = (x % c, y % c);
        match self.index[(x * c + y) as usize] {
            u32::MAX => Err(Error::NotProjectivePoint { x, y, modulus: c }),
            i => Ok(i as usize),
        }
    }

    /// Index of the affine point `[x : 1]`.
    pub fn embed(&self, x: i64) -> usize {
        rem(x, self.c()) as usize
    }

    /// Index of `g [x : y] = [a x + b y : c x + d y]`.
    pub fn act(&self, g: &Sl2, i: usize) -> usize {
        let n = self.c();
        let p = self.points[i];
        let [a, b, c, d] = g.entries;
        let y = p.y % n;
        let x1 = (mul_mod(a, p.x, n) + mul_mod(b, y, n)) % n;
        let y1 = (mul_mod(c, p.x, n) + mul_mod(d, y, n)) % n;
        self.index[(x1 * n + y1) as usize] as usize
    }

    /// The permutation `u -> g u` of point indices.
    pub fn permutation(&self, g: &Sl2) -> Vec<usize> {
        (0..self.len()).map(|i| self.act(g, i)).collect()
    }

    /// Orbits of `Gamma_c(d)`, each sorted, ordered by least member.
    pub fn gamma_orbits(&self, d: u64) -> Result<Vec<Vec<usize>>> {
        let gamma: Vec<Sl2> = enumerate_gamma(self.c(), d)?.collect();
        let mut seen = vec![false; self.len()];
        let mut orbits = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                orbit.push(u);
                for g in &gamma {
                    let v = self.act(g, u);
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        Ok(orbits)
    }

    /// For each point, the canonical form of its reduction modulo `d`.
    pub fn reductions(&self, d: u64) -> Result<Vec<ProjPoint>> {
        if d == 0 || !self.c().is_multiple_of(d) {
            return Err(Error::NotDivisor { d, c: self.c() });
        }
        self.points.iter().map(|&p| p1_reduce(p, d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        assert_eq!(p1_canonicalize(3, 4, 6).unwrap(), ProjPoint { x: 3, y: 2 });
        assert_eq!(p1_canonicalize(2, 4, 6).unwrap_err(), Error::NotProjectivePoint { x: 2, y: 4, modulus: 6 });
        assert_eq!(p1_canonicalize(5, 0, 7).unwrap(), ProjPoint { x: 1, y: 7 });
        assert_eq!(p1_canonicalize(0, 0, 1).unwrap(), ProjPoint { x: 0, y: 1 });
    }

    #[test]
    fn sizes() {
        for (c, n) in [(1, 1), (4, 6), (6, 12), (9, 12), (12, 24), (45, 72)] {
            let line = ProjectiveLine::new(c).unwrap();
            assert_eq!(line.len() as u64, n);
            assert_eq!(p1_size(line.modulus()), n);
        }
    }

    #[test]
    fn affine_embedding() {
        let line = ProjectiveLine::new(12).unwrap();
        for x in 0..12 {
            assert_eq!(line.point(x as usize), ProjPoint { x, y: 1 });
        }
        let t = Sl2::t_pow(1, 12);
        let s = Sl2::s(12);
        assert_eq!(line.act(&t, 5), 6);
        // S [y : 1] = [-1 : y] = [-conj(y) : 1] for units y.
        assert_eq!(line.act(&s, 5), line.embed(-5));
    }
}
