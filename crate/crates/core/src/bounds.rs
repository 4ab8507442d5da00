//! Explicit evaluation of the bilinear-form bounds, the factorization
//! choices feeding them, and the divisor-scan checks behind them.

use serde::Serialize;

use crate::arith::{self, Modulus};
use crate::error::{Error, Result};
use crate::verdict::Verdict;

/// Largest `f` with `f^2 | c d`.
pub fn f_max(c: u64, d: u64) -> Result<u64> {
    let (mc, md) = (Modulus::new(c)?, Modulus::new(d)?);
    let mut primes: Vec<u64> = mc.primes().chain(md.primes()).collect();
    primes.sort_unstable();
    primes.dedup();
    Ok(primes.into_iter().map(|p| p.pow((mc.valuation(p) + md.valuation(p)) / 2)).product())
}

/// `c = d d' e` with `d' | d` and `gcd(d, e) = 1`; `f` is maximal with
/// `f^2 | c d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Factorization3 {
    pub c: u64,
    pub d: u64,
    pub d_prime: u64,
    pub e: u64,
    pub f: u64,
}

impl Factorization3 {
    pub fn new(c: u64, d: u64, d_prime: u64, e: u64) -> Result<Self> {
        if d == 0 || d_prime == 0 || e == 0 {
            return Err(Error::Usage("factors must be positive".into()));
        }
        if d as u128 * d_prime as u128 * e as u128 != c as u128 {
            return Err(Error::Usage(format!("{d} * {d_prime} * {e} != {c}")));
        }
        if !d.is_multiple_of(d_prime) {
            return Err(Error::Usage(format!("d' = {d_prime} does not divide d = {d}")));
        }
        if arith::gcd(d, e) != 1 {
            return Err(Error::Usage(format!("gcd(d, e) = gcd({d}, {e}) != 1")));
        }
        Ok(Factorization3 { c, d, d_prime, e, f: f_max(c, d)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorCase {
    /// `c = 1`.
    Trivial,
    /// A prime `p >= c^{1 - delta}` divides `c`; no useful factorization.
    NearPrime,
    /// `p^k >= c^{1 - delta}` with `k >= 2`.
    PrimePower,
    /// Every prime power below `c^{1/2}`: greedy balancing.
    Greedy,
    /// Largest prime power in `[c^{1/2}, c^{3/4})`.
    MediumPrimePower,
    /// Largest prime power in `[c^{3/4}, c^{1 - delta})`.
    LargePrimePower,
}

#[derive(Debug, Clone, Serialize)]
pub struct GreedyResult {
    pub c: u64,
    pub delta: f64,
    pub case: FactorCase,
    pub factorization: Option<Factorization3>,
    /// Prime powers in processing order (greedy case only).
    pub order: Vec<u64>,
    /// Largest `max(d, e) / min(d, e)` seen while balancing.
    pub max_imbalance: Option<f64>,
}

/// Choose `c = d d' e` following the case analysis for general moduli.
/// Prime powers are processed in decreasing order in the greedy case.
pub fn greedy_factorization(c: u64, delta: f64) -> Result<GreedyResult> {
    if !(0.0..=1.0 / 24.0).contains(&delta) {
        return Err(Error::Usage(format!("delta must lie in [0, 1/24], got {delta}")));
    }
    let m = Modulus::new(c)?;
    let mut result =
        GreedyResult { c, delta, case: FactorCase::Trivial, factorization: None, order: vec![], max_imbalance: None };
    if c == 1 {
        result.factorization = Some(Factorization3::new(1, 1, 1, 1)?);
        return Ok(result);
    }
    let cf = c as f64;
    let &(p, k) = m.factors.iter().max_by_key(|&&(p, k)| p.pow(k)).expect("c > 1 has a prime factor");
    let pk = p.pow(k);
    let rest = c / pk;
    let pkf = pk as f64;
    // Small relative slack so that exact powers such as c = p^k land in the
    // intended branch despite rounding in c^x.
    let at_least = |x: f64, exp: f64| x >= cf.powf(exp) * (1.0 - 1e-12);

    if at_least(pkf, 1.0 - delta) {
        if k == 1 {
            result.case = FactorCase::NearPrime;
        } else {
            result.case = FactorCase::PrimePower;
            result.factorization = Some(Factorization3::new(c, p.pow(k.div_ceil(2)) * rest, p.pow(k / 2), 1)?);
        }
        return Ok(result);
    }
    if !at_least(pkf, 0.5) {
        result.case = FactorCase::Greedy;
        let mut order = m.prime_powers();
        order.sort_unstable_by(|a, b| b.cmp(a));
        let (mut d, mut e) = (1u64, 1u64);
        let mut imbalance: f64 = 1.0;
        for &q in &order {
            if d <= e {
                d *= q;
            } else {
                e *= q;
            }
            imbalance = imbalance.max(d.max(e) as f64 / d.min(e) as f64);
        }
        if d < e {
            std::mem::swap(&mut d, &mut e);
        }
        if !(at_least(d as f64, 0.5) && d as f64 <= cf.powf(0.75) * (1.0 + 1e-12)) {
            return Err(Error::Internal(format!("greedy d = {d} outside [c^1/2, c^3/4] for c = {c}")));
        }
        if imbalance > cf.sqrt() * (1.0 + 1e-12) {
            return Err(Error::Internal(format!("greedy imbalance {imbalance} exceeds c^1/2 for c = {c}")));
        }
        result.order = order;
        result.max_imbalance = Some(imbalance);
        result.factorization = Some(Factorization3::new(c, d, 1, e)?);
        return Ok(result);
    }
    result.case = if pkf < cf.powf(0.75) { FactorCase::MediumPrimePower } else { FactorCase::LargePrimePower };
    result.factorization = Some(Factorization3::new(c, pk, 1, rest)?);
    Ok(result)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundTerm {
    pub name: String,
    pub value: f64,
    /// `log_c(value)`.
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Combine {
    /// `prefactor * min(terms)`.
    Min,
    /// `prefactor * (sum terms)^power`.
    SumPower(f64),
}

/// A bound `prefactor * combine(terms)` with `c^{o(1)}` factors omitted.
#[derive(Debug, Clone, Serialize)]
pub struct BoundProfile {
    pub tag: String,
    pub c: u64,
    pub prefactor: f64,
    pub combine: Combine,
    pub terms: Vec<BoundTerm>,
    pub value: f64,
    pub exponent: f64,
    /// The value with the sum replaced by its largest term.
    pub max_term_value: f64,
    /// Set for bounds quoted from outside this crate.
    pub external: bool,
}

fn log_c(c: u64, x: f64) -> f64 {
    if c <= 1 {
        0.0
    } else {
        x.ln() / (c as f64).ln()
    }
}

impl BoundProfile {
    fn build(tag: &str, c: u64, prefactor: f64, combine: Combine, terms: &[(&str, f64)]) -> Result<Self> {
        if terms.iter().any(|(_, v)| !(v.is_finite() && *v > 0.0)) || !(prefactor.is_finite() && prefactor > 0.0) {
            return Err(Error::NonFinite(format!("bound profile {tag}")));
        }
        let max = terms.iter().map(|t| t.1).fold(0.0, f64::max);
        let (value, max_term_value) = match combine {
            Combine::Min => (prefactor * terms.iter().map(|t| t.1).fold(f64::INFINITY, f64::min), prefactor * max),
            Combine::SumPower(p) => {
                (prefactor * terms.iter().map(|t| t.1).sum::<f64>().powf(p), prefactor * max.powf(p))
            }
        };
        Ok(BoundProfile {
            tag: tag.to_string(),
            c,
            prefactor,
            combine,
            terms: terms
                .iter()
                .map(|&(name, value)| BoundTerm { name: name.to_string(), value, exponent: log_c(c, value) })
                .collect(),
            value,
            exponent: log_c(c, value),
            max_term_value,
            external: false,
        })
    }

    /// `log_c(reference / value)`.
    pub fn saving_over(&self, reference: f64) -> f64 {
        log_c(self.c, reference / self.value)
    }

    /// Every term and the total are positive, finite, and carry exponents
    /// consistent with their values.
    pub fn check_invariants(&self) -> Verdict {
        let mut worst: f64 = 0.0;
        let mut finite = self.value.is_finite() && self.value > 0.0;
        for t in &self.terms {
            finite &= t.value.is_finite() && t.value > 0.0;
            if self.c > 1 {
                worst = worst.max(((self.c as f64).powf(t.exponent) - t.value).abs() / t.value);
            }
        }
        Verdict::residual(format!("profile_invariants[{}]", self.tag), if finite { worst } else { f64::INFINITY }, 1e-9)
    }
}

fn check_lengths(c: u64, m: u64, n: u64) -> Result<()> {
    if m == 0 || n == 0 || m > c || n > c {
        return Err(Error::Usage(format!("need 1 <= M, N <= c; got M={m}, N={n}, c={c}")));
    }
    Ok(())
}

/// `min(c, sqrt(M N c))`.
pub fn eval_bound_trivial(c: u64, m: u64, n: u64) -> Result<BoundProfile> {
    check_lengths(c, m, n)?;
    let (cf, mf, nf) = (c as f64, m as f64, n as f64);
    BoundProfile::build("trivial", c, 1.0, Combine::Min, &[("fourier", cf), ("weil", (mf * nf * cf).sqrt())])
}

#[derive(Debug, Clone, Serialize)]
pub struct CompositeBound {
    pub factorization: Factorization3,
    /// `c (d M^3 N / c^3 + f M^2 / c^2 + f / d^2)^{1/6}`.
    pub c_form: BoundProfile,
    /// `sqrt(M N c) (d / N^2 + f c / (M N^3) + f c^3 / (d^2 M^3 N^3))^{1/6}`.
    pub sqrt_form: BoundProfile,
    pub agreement: Verdict,
}

/// The composite-modulus bound in both displayed forms. `M` and `N` are
/// swapped if needed so that `N <= M`.
pub fn eval_bound_composite(fact: &Factorization3, m: u64, n: u64) -> Result<CompositeBound> {
    let c = fact.c;
    check_lengths(c, m, n)?;
    let (m, n) = (m.max(n) as f64, m.min(n) as f64);
    let (cf, d, f) = (c as f64, fact.d as f64, fact.f as f64);
    let c_form = BoundProfile::build(
        "composite",
        c,
        cf,
        Combine::SumPower(1.0 / 6.0),
        &[
            ("d M^3 N / c^3", d * m.powi(3) * n / cf.powi(3)),
            ("f M^2 / c^2", f * m * m / (cf * cf)),
            ("f / d^2", f / (d * d)),
        ],
    )?;
    let sqrt_form = BoundProfile::build(
        "composite-sqrt",
        c,
        (m * n * cf).sqrt(),
        Combine::SumPower(1.0 / 6.0),
        &[
            ("d / N^2", d / (n * n)),
            ("f c / (M N^3)", f * cf / (m * n.powi(3))),
            ("f c^3 / (d^2 M^3 N^3)", f * cf.powi(3) / (d * d * m.powi(3) * n.powi(3))),
        ],
    )?;
    let agreement =
        Verdict::residual("composite_forms_agree", (c_form.value - sqrt_form.value).abs() / c_form.value, 1e-9);
    Ok(CompositeBound { factorization: *fact, c_form, sqrt_form, agreement })
}

/// The two general-moduli bounds: the first for arbitrary coefficients,
/// the second for `|alpha_m| <= 1` (normalized by `sqrt(M) ||beta||`).
pub fn eval_bound_general(c: u64, m: u64, n: u64, delta: f64) -> Result<[BoundProfile; 2]> {
    check_lengths(c, m, n)?;
    if !(0.0..=1.0 / 24.0).contains(&delta) {
        return Err(Error::Usage(format!("delta must lie in [0, 1/24], got {delta}")));
    }
    let (cf, mf, nf) = (c as f64, m as f64, n as f64);
    let (mt, nt) = (mf.max(nf), mf.min(nf));
    let pre = (mf * nf * cf).sqrt();
    let kms = cf.powf((11.0 + 53.0 * delta) / 64.0) / (mf * nf).powf(3.0 / 16.0);
    let last = cf.powf(11.0 / 24.0) / (mf * nf).sqrt();
    let first = BoundProfile::build(
        "general-1",
        c,
        pre,
        Combine::SumPower(1.0),
        &[
            ("kms", kms),
            ("c^((1-delta)/6) / N~^(1/3)", cf.powf((1.0 - delta) / 6.0) / nt.powf(1.0 / 3.0)),
            (
                "c^((4-delta)/12) / (M~^(1/6) N~^(1/2))",
                cf.powf((4.0 - delta) / 12.0) / (mt.powf(1.0 / 6.0) * nt.sqrt()),
            ),
            ("c^(11/24) / (MN)^(1/2)", last),
        ],
    )?;
    let second = BoundProfile::build(
        "general-2",
        c,
        pre,
        Combine::SumPower(1.0),
        &[
            ("kms", kms),
            ("c^((1-delta)/4) / N~^(1/2)", cf.powf((1.0 - delta) / 4.0) / nt.sqrt()),
            ("c^(-3/16)", cf.powf(-3.0 / 16.0)),
            ("c^(1/8) / N~^(1/3)", cf.powf(1.0 / 8.0) / nt.powf(1.0 / 3.0)),
            ("c^(11/24) / (MN)^(1/2)", last),
        ],
    )?;
    Ok([first, second])
}

/// External bound for prime moduli, evaluated for comparison only; it is
/// not verified here.
pub fn eval_bound_kms(p: u64, m: u64, n: u64) -> Result<BoundProfile> {
    check_lengths(p, m, n)?;
    let (pf, mf, nf) = (p as f64, m.max(n) as f64, m.min(n) as f64);
    let mut b = BoundProfile::build(
        "kms (external bound, not verified by this crate)",
        p,
        (mf * nf * pf).sqrt(),
        Combine::SumPower(1.0),
        &[("N^(-1/2)", nf.powf(-0.5)), ("(MN)^(-3/16) p^(11/64)", (mf * nf).powf(-3.0 / 16.0) * pf.powf(11.0 / 64.0))],
    )?;
    b.external = true;
    Ok(b)
}

/// External bound for moduli with an odd divisor `d`, normalized by
/// `sqrt(M) ||beta||`; evaluated for comparison only.
pub fn eval_bound_bm(c: u64, d: u64, m: u64, n: u64) -> Result<BoundProfile> {
    check_lengths(c, m, n)?;
    if d == 0 || !c.is_multiple_of(d) || d.is_multiple_of(2) {
        return Err(Error::Usage(format!("need an odd divisor d of c; got d={d}, c={c}")));
    }
    let (cf, df, mf, nf) = (c as f64, d as f64, m as f64, n as f64);
    let mut b = BoundProfile::build(
        "bm (external bound, not verified by this crate)",
        c,
        (mf * nf * cf).sqrt(),
        Combine::SumPower(1.0),
        &[
            ("c^(1/2) / (d^(1/2) M^(1/2))", (cf / (df * mf)).sqrt()),
            ("d^(-1/4)", df.powf(-0.25)),
            ("d^(1/4) / N^(1/2)", df.powf(0.25) / nf.sqrt()),
        ],
    )?;
    b.external = true;
    Ok(b)
}

/// For every `d | c` and `0 <= k <= kmax`, the maximum of `f~ / d~^k` over
/// `d | d~ | c` (with `f~` maximal, `f~^2 | c d~`) is `f / d^k` for `k >= 1`
/// and `c` for `k = 0`. Compared exactly in integers.
pub fn max_claim_check(c: u64, kmax: u32) -> Result<Verdict> {
    let divisors = arith::divisors(c)?;
    let mut failures = Vec::new();
    for &d in &divisors {
        let f = f_max(c, d)? as u128;
        for k in 0..=kmax {
            let mut best = (f_max(c, d)? as u128, (d as u128).pow(k));
            for &dt in divisors.iter().filter(|&&x| x % d == 0) {
                let cand = (f_max(c, dt)? as u128, (dt as u128).pow(k));
                if cand.0 * best.1 > best.0 * cand.1 {
                    best = cand;
                }
            }
            let expected = if k == 0 { (c as u128, 1) } else { (f, (d as u128).pow(k)) };
            if best.0 * expected.1 != expected.0 * best.1 {
                failures.push(format!("c={c} d={d} k={k}"));
            }
        }
    }
    Ok(Verdict::residual(format!("max_claim[c={c}]"), failures.len() as f64, 0.0).with_detail(failures.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_max_examples() {
        assert_eq!(f_max(25, 5).unwrap(), 5);
        assert_eq!(f_max(12, 3).unwrap(), 6);
        assert_eq!(f_max(360, 360).unwrap(), 360);
    }

    #[test]
    fn greedy_examples() {
        let r = greedy_factorization(49, 0.01).unwrap();
        let f = r.factorization.unwrap();
        assert_eq!((f.d, f.d_prime, f.e), (7, 7, 1));
        let r = greedy_factorization(1155, 0.01).unwrap();
        assert_eq!(r.case, FactorCase::Greedy);
        let f = r.factorization.unwrap();
        assert_eq!((f.d, f.d_prime, f.e), (35, 1, 33));
        assert_eq!(r.order, vec![11, 7, 5, 3]);
        assert_eq!(greedy_factorization(101, 0.01).unwrap().case, FactorCase::NearPrime);
    }

    #[test]
    fn p_squared_saving() {
        let f = Factorization3::new(121, 11, 11, 1).unwrap();
        let b = eval_bound_composite(&f, 11, 11).unwrap();
        assert!(b.agreement.passed);
        let t = eval_bound_trivial(121, 11, 11).unwrap();
        let saving = log_c(121, t.value / b.c_form.max_term_value);
        assert!((saving - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_saturates() {
        assert_eq!(eval_bound_trivial(30, 30, 30).unwrap().value, 30.0);
    }
}
