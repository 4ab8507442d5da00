//! End-to-end experiments: exact norms of Kloosterman matrices against the
//! bound profiles, and the trilinear sum over moduli in a dyadic range.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Modulus};
use crate::bounds::{self, Factorization3};
use crate::bridge::{build_k_interval, Interval};
use crate::error::{Error, Result};
use crate::kloosterman::{e, gcd_mnc, KloostermanTable};
use crate::matrix::C64;
use crate::sl2::p1_size;
use crate::spectral::operator_norm;
use crate::verdict::Verdict;

/// Default `delta` for choosing factorizations in the norm sweep.
pub const DEFAULT_DELTA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormCase {
    pub c: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(default = "one")]
    pub a: i64,
}

fn one() -> i64 {
    1
}

/// One CSV row of the norm sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRow {
    pub c: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub a: i64,
    pub norm_exact: f64,
    pub trivial_min: f64,
    pub composite_bound: Option<f64>,
    pub saving_exponent: f64,
    pub d: Option<u64>,
    pub dp: Option<u64>,
    pub e: Option<u64>,
    pub f: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormSweep {
    pub rows: Vec<NormRow>,
    pub verdicts: Vec<Verdict>,
}

impl NormSweep {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    /// Rows as CSV with a header line.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Usage(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Usage(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Usage(e.to_string()))
    }
}

/// Largest `|P^1(Z/cZ)|` accepted by the sweep.
pub const SWEEP_LINE_BUDGET: u64 = 2500;

fn norm_row(case: &NormCase, delta: f64) -> Result<(NormRow, Vec<Verdict>)> {
    let NormCase { c, m, n, a } = *case;
    let modulus = Modulus::new(c)?;
    if p1_size(&modulus) > SWEEP_LINE_BUDGET {
        return Err(Error::Budget {
            what: "|P^1| in norm sweep".into(),
            needed: p1_size(&modulus) as u128,
            limit: SWEEP_LINE_BUDGET as u128,
        });
    }
    let k = build_k_interval(c, a, Interval::new(0, m), Interval::new(0, n))?;
    let norm = operator_norm(&k)?;
    let trivial = bounds::eval_bound_trivial(c, m, n)?;
    let greedy = bounds::greedy_factorization(c, delta)?;
    let composite = match greedy.factorization {
        Some(fact) if c > 1 => Some((fact, bounds::eval_bound_composite(&fact, m, n)?)),
        _ => None,
    };
    let tau = modulus.tau() as f64;
    let verdicts = vec![
        Verdict::le(format!("norm_below_frobenius[c={c}]"), norm, k.frobenius_norm() * (1.0 + 1e-12)),
        Verdict::le(format!("norm_below_trivial[c={c}]"), norm, 4.0 * tau * trivial.value),
    ];
    let row = NormRow {
        c,
        m,
        n,
        a,
        norm_exact: norm,
        trivial_min: trivial.value,
        composite_bound: composite.as_ref().map(|(_, b)| b.c_form.value),
        saving_exponent: (trivial.value / norm).ln() / (c as f64).ln(),
        d: composite.as_ref().map(|(f, _)| f.d),
        dp: composite.as_ref().map(|(f, _)| f.d_prime),
        e: composite.as_ref().map(|(f, _)| f.e),
        f: composite.as_ref().map(|(f, _)| f.f),
    };
    Ok((row, verdicts))
}

/// Exact `||K||` for each case, next to the trivial and composite bounds.
/// Asserts `||K|| <= ||K||_{S^2}` and `||K|| <= 4 tau(c) min(c, sqrt(MNc))`.
/// Rows keep the order of `cases`.
pub fn experiment_norm_sweep(cases: &[NormCase], delta: f64) -> Result<NormSweep> {
    for case in cases {
        if case.m == 0 || case.n == 0 || case.m > case.c || case.n > case.c {
            return Err(Error::Usage(format!("need 1 <= M, N <= c in {case:?}")));
        }
    }
    let results: Vec<(NormRow, Vec<Verdict>)> =
        cases.par_iter().map(|case| norm_row(case, delta)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    for (row, v) in results {
        rows.push(row);
        verdicts.extend(v);
    }
    Ok(NormSweep { rows, verdicts })
}

/// Positive savings on every row, non-decreasing in the order given.
pub fn saving_trend(rows: &[NormRow]) -> Vec<Verdict> {
    let mut out: Vec<Verdict> =
        rows.iter().map(|r| Verdict::le(format!("saving_positive[c={}]", r.c), 0.0, r.saving_exponent)).collect();
    for w in rows.windows(2) {
        out.push(Verdict::le(
            format!("saving_non_decreasing[{} -> {}]", w[0].c, w[1].c),
            w[0].saving_exponent,
            w[1].saving_exponent,
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AvgModulusCase {
    pub q: u64,
    pub d: u64,
    pub dp: u64,
    pub e: u64,
    #[serde(rename = "C")]
    pub big_c: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvgModulusReport {
    pub q: u64,
    pub d: u64,
    pub dp: u64,
    pub e: u64,
    #[serde(rename = "C")]
    pub big_c: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub moduli: usize,
    pub lhs: f64,
    pub envelope_first: f64,
    pub envelope_second: f64,
    pub envelope: f64,
    pub ratio: f64,
    pub passed: bool,
}

/// Largest `C` accepted by the averaged-moduli experiment.
pub const AVG_MAX_C: u64 = 400;

/// `sum_{C < c <= 2C, q | c} |sum_{m in I, n in J, (m,n,q)=1} alpha_m(c) beta_n(c) S(m, n; c)|`
/// for `I = [1, M]`, `J = [1, N]`, random unit-modulus `alpha`, `beta` and
/// `alpha_m(c) = alpha_m e(theta_{m,c})` (likewise for `beta`). The envelope
/// is `||alpha|| ||beta|| C^2 / q * T * min(B1, B2)^{1/6}` with
/// `T = max tau(c)^2` over the moduli summed; the gate is `lhs <= 10^3 envelope`.
/// `coefficient_scale = 0` zeroes the coefficients.
pub fn experiment_avg_modulus(case: &AvgModulusCase, seed: u64, coefficient_scale: f64) -> Result<AvgModulusReport> {
    let AvgModulusCase { q, d, dp, e: ee, big_c, m, n } = *case;
    let fact = Factorization3::new(q, d, dp, ee)?;
    if big_c == 0 || big_c > AVG_MAX_C {
        return Err(Error::Usage(format!("need 1 <= C <= {AVG_MAX_C}, got {big_c}")));
    }
    if n == 0 || n > m || m > big_c {
        return Err(Error::Usage(format!("need 1 <= N <= M <= C; got M={m}, N={n}, C={big_c}")));
    }
    let side = 4.0 * (big_c as f64).sqrt();
    if m as f64 > side {
        return Err(Error::Usage(format!("interval lengths must be at most 4 sqrt(C) = {side:.1}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha: Vec<C64> = (0..m).map(|_| e(rng.gen::<f64>()) * coefficient_scale).collect();
    let beta: Vec<C64> = (0..n).map(|_| e(rng.gen::<f64>()) * coefficient_scale).collect();
    let moduli: Vec<u64> = (big_c + 1..=2 * big_c).filter(|c| c % q == 0).collect();
    let phases: Vec<(Vec<C64>, Vec<C64>)> = moduli
        .iter()
        .map(|_| {
            let a: Vec<C64> = (0..m).map(|_| e(rng.gen::<f64>())).collect();
            let b: Vec<C64> = (0..n).map(|_| e(rng.gen::<f64>())).collect();
            (a, b)
        })
        .collect();
    let terms: Vec<f64> = moduli
        .par_iter()
        .zip(&phases)
        .map(|(&c, (pa, pb))| -> Result<f64> {
            let table = KloostermanTable::new(c)?;
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..m as usize {
                for j in 0..n as usize {
                    let (mm, nn) = (i as i64 + 1, j as i64 + 1);
                    if gcd_mnc(mm, nn, q) != 1 {
                        continue;
                    }
                    acc += alpha[i] * pa[i] * beta[j] * pb[j] * table.sum(mm, nn);
                }
            }
            Ok(acc.norm())
        })
        .collect::<Result<_>>()?;
    let lhs: f64 = terms.iter().sum();

    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let t = moduli
        .iter()
        .map(|&c| arith::tau(c).map(|x| (x * x) as f64))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(1.0, f64::max);
    let (cf, qf, df, ff, mf, nf) = (big_c as f64, q as f64, d as f64, fact.f as f64, m as f64, n as f64);
    let b1 = df * mf.powi(3) * nf / cf.powi(3) + ff * mf * mf / (cf * cf) + ff / (df * df);
    let b2 = df * mf.powi(3) * nf / (qf * cf * cf) + ff * mf * mf / (qf * cf) + ff * qf / (df * df * cf);
    let pre = norm(&alpha) * norm(&beta) * cf * cf / qf * t;
    let (envelope_first, envelope_second) = (pre * b1.powf(1.0 / 6.0), pre * b2.powf(1.0 / 6.0));
    let envelope = envelope_first.min(envelope_second);
    let ratio = if envelope > 0.0 { lhs / envelope } else { 0.0 };
    Ok(AvgModulusReport {
        q,
        d,
        dp,
        e: ee,
        big_c,
        m,
        n,
        moduli: moduli.len(),
        lhs,
        envelope_first,
        envelope_second,
        envelope,
        ratio,
        passed: lhs <= 1e3 * envelope,
    })
}

/// CSV for a list of averaged-moduli reports.
pub fn avg_modulus_csv(reports: &[AvgModulusReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(r).map_err(|e| Error::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Usage(e.to_string()))
}
