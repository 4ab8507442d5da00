//! From Kloosterman matrices to Fourier coefficients of functions on
//! `SL_2(Z/cZ)`: the closed-form conjugation by the DFT, the norm bound
//! `||K|| <= c ||F^(rho_c^o)||`, and its smoothed interval variant.

mod window;

pub use window::{integrate, SmoothWindow};

use rand::Rng;
use serde::Serialize;

pub use crate::rep::GroupFunction;

use crate::arith::{self, gcd, mod_inverse, rem, Modulus};
use crate::error::{Error, Result};
use crate::kloosterman::{e_frac, gcd_mnc, KloostermanTable};
use crate::matrix::{ComplexMatrix, C64, ZERO};
use crate::rep::{level_weight_same_support, PermRep};
use crate::sl2::Sl2;
use crate::spectral::{dft_conjugate, operator_norm};
use crate::verdict::Verdict;

/// Largest number of window frequencies `H` accepted on either side.
pub const MAX_WINDOW_FREQUENCIES: f64 = 1e4;

/// The integers `offset + 1, ..., offset + len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub offset: i64,
    pub len: u64,
}

impl Interval {
    /// `[len] + offset`.
    pub fn new(offset: i64, len: u64) -> Self {
        Interval { offset, len }
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        let start = self.offset + 1;
        (0..self.len as i64).map(move |i| start + i)
    }
}

/// `psi^(h) = sum_m psi(m) e(-h m / c)` over `Z/cZ`.
pub fn psi_hat(psi: &[C64]) -> Vec<C64> {
    let c = psi.len() as u64;
    (0..c).map(|h| psi.iter().enumerate().map(|(m, &p)| p * e_frac(-((h * m as u64 % c) as i64), c)).sum()).collect()
}

fn check_psi(c: u64, psi1: &[C64], psi2: &[C64]) -> Result<()> {
    if psi1.len() as u64 != c || psi2.len() as u64 != c {
        return Err(Error::Dimension(format!(
            "psi vectors of length {} and {} for modulus {c}",
            psi1.len(),
            psi2.len()
        )));
    }
    if psi1.iter().chain(psi2).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("psi".into()));
    }
    Ok(())
}

/// `K[m, n] = psi1(m) psi2(n) 1_{(m,n,c)=1} S(m, n; c)` for `m, n in Z/cZ`.
pub fn build_k_psi(c: u64, psi1: &[C64], psi2: &[C64]) -> Result<ComplexMatrix> {
    check_psi(c, psi1, psi2)?;
    let table = KloostermanTable::new(c)?;
    let n = c as usize;
    Ok(ComplexMatrix::from_fn(n, n, |m, k| {
        if gcd_mnc(m as i64, k as i64, c) != 1 {
            ZERO
        } else {
            psi1[m] * psi2[k] * table.sum(m as i64, k as i64)
        }
    }))
}

/// `K[m, n] = 1_{(m,n,c)=1} S(a m, n; c)` for `m in I`, `n in J`.
pub fn build_k_interval(c: u64, a: i64, i: Interval, j: Interval) -> Result<ComplexMatrix> {
    mod_inverse(a, c)?;
    let table = KloostermanTable::new(c)?;
    let rows: Vec<i64> = i.iter().collect();
    let cols: Vec<i64> = j.iter().collect();
    Ok(ComplexMatrix::from_fn(rows.len(), cols.len(), |r, s| {
        let (m, n) = (rows[r], cols[s]);
        if gcd_mnc(m, n, c) != 1 {
            ZERO
        } else {
            table.sum(a * m, n)
        }
    }))
}

/// `F = c^-2 sum_{h1, h2} psi1^(h1) psi2^(h2) 1_{T^h1 S T^h2}`.
pub fn build_f_psi(c: u64, psi1: &[C64], psi2: &[C64]) -> Result<GroupFunction> {
    check_psi(c, psi1, psi2)?;
    let (h1, h2) = (psi_hat(psi1), psi_hat(psi2));
    let s = Sl2::s(c);
    let scale = 1.0 / (c * c) as f64;
    let mut f = GroupFunction::new(c);
    for (x, &a) in h1.iter().enumerate() {
        if a == ZERO {
            continue;
        }
        let left = Sl2::t_pow(x as i64, c).mul(&s);
        for (y, &b) in h2.iter().enumerate() {
            if b == ZERO {
                continue;
            }
            f.add(left.mul(&Sl2::t_pow(y as i64, c)), a * b * scale)?;
        }
    }
    Ok(f)
}

/// `sum_{d | c} mu(c/d) d^2 phi(c) / (c^2 phi(d)) 1[u ~ v mod d]`, the
/// matrix produced by the Kloosterman-side computation. It equals the
/// sifted projection `P_c^o` when every prime of `c` appears squared; for
/// primes `p || c` its local factor is `P_p^o + p^-2 P_p(1)` instead.
pub fn kloosterman_sifting_matrix(rep: &PermRep) -> Result<ComplexMatrix> {
    let c = rep.c();
    let n = rep.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    for d in rep.modulus().divisors() {
        let mu = arith::mobius(c / d)?;
        if mu == 0 {
            continue;
        }
        let w = mu as f64 * level_weight_same_support(c, d)?;
        let red = rep.line().reductions(d)?;
        for u in 0..n {
            for v in 0..n {
                if red[u] == red[v] {
                    acc[(u, v)] += w;
                }
            }
        }
    }
    Ok(acc)
}

/// Right-hand side of the conjugation identity:
/// `(U^* K U)[u, v] = c^-1 sum_{h1,h2} psi1^(h1) psi2^(h2)
///   sum_{d | c} mu(c/d) d^2 phi(c)/(c^2 phi(d)) 1[(u-h1)(v+h2) = -1 mod d]`.
pub fn kl_unitary_closed_form(c: u64, psi1: &[C64], psi2: &[C64]) -> Result<ComplexMatrix> {
    check_psi(c, psi1, psi2)?;
    let modulus = Modulus::new(c)?;
    let (hat1, hat2) = (psi_hat(psi1), psi_hat(psi2));
    let n = c as usize;
    let mut out = ComplexMatrix::zeros(n, n);
    for d in modulus.divisors() {
        let mu = arith::mobius(c / d)?;
        if mu == 0 {
            continue;
        }
        let w = mu as f64 * level_weight_same_support(c, d)? / c as f64;
        // Class sums of psi^ modulo d.
        let mut a = vec![ZERO; d as usize];
        let mut b = vec![ZERO; d as usize];
        for h in 0..n {
            a[h % d as usize] += hat1[h];
            b[h % d as usize] += hat2[h];
        }
        // -x^{-1} mod d for each unit x.
        let neg_inv: Vec<Option<u64>> = (0..d)
            .map(|x| if gcd(x, d) == 1 { Some(rem(-(mod_inverse(x as i64, d).unwrap() as i64), d)) } else { None })
            .collect();
        for u in 0..c {
            for v in 0..c {
                let mut acc = ZERO;
                for r1 in 0..d {
                    let x = rem(u as i64 - r1 as i64, d);
                    if let Some(y) = neg_inv[x as usize] {
                        let r2 = rem(y as i64 - v as i64, d);
                        acc += a[r1 as usize] * b[r2 as usize];
                    }
                }
                out[(u as usize, v as usize)] += acc * w;
            }
        }
    }
    Ok(out)
}

/// Entrywise check of the conjugation identity, to `1e-8` relative to the
/// largest entry.
pub fn verify_identity_kl_unitary(c: u64, psi1: &[C64], psi2: &[C64]) -> Result<Verdict> {
    let lhs = dft_conjugate(&build_k_psi(c, psi1, psi2)?)?;
    let rhs = kl_unitary_closed_form(c, psi1, psi2)?;
    let scale = lhs.max_abs().max(1.0);
    Ok(Verdict::residual("kl_unitary_identity", lhs.max_abs_diff(&rhs) / scale, 1e-8))
}

#[derive(Debug, Clone, Serialize)]
pub struct BridgeReport {
    pub c: u64,
    /// `||K||`.
    pub kloosterman_norm: f64,
    /// `c ||F^(rho_c) P_c^o||`.
    pub sifted_bound: f64,
    /// `c ||F^(rho_c) Q||` with `Q` the Kloosterman-side sifting matrix.
    pub kloosterman_side_bound: f64,
    /// `max |(U^*KU)[u,v] - c (F^(rho_c) Q)[[u:1],[v:1]]|`, relative.
    pub embedding_residual: f64,
    pub verdicts: Vec<Verdict>,
}

impl BridgeReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Check `||K|| <= c ||F^(rho_c^o)||` (with slack factor `1 + 1e-8`) and the
/// exact embedding of `U^* K U` into `c F^(rho_c) Q`.
pub fn verify_bridge(c: u64, psi1: &[C64], psi2: &[C64]) -> Result<BridgeReport> {
    let rep = PermRep::new(c)?;
    verify_bridge_with(&rep, psi1, psi2)
}

pub fn verify_bridge_with(rep: &PermRep, psi1: &[C64], psi2: &[C64]) -> Result<BridgeReport> {
    let c = rep.c();
    let k = build_k_psi(c, psi1, psi2)?;
    let f = build_f_psi(c, psi1, psi2)?;
    let fhat = rep.fourier_coeff(&f)?;
    let sifted = &fhat * &rep.projection_sifted()?;
    let kside = &fhat * &kloosterman_sifting_matrix(rep)?;

    let conj = dft_conjugate(&k)?;
    let n = c as usize;
    let mut residual: f64 = 0.0;
    for u in 0..n {
        for v in 0..n {
            let target = kside[(rep.line().embed(u as i64), rep.line().embed(v as i64))] * c as f64;
            residual = residual.max((conj[(u, v)] - target).norm());
        }
    }
    let residual = residual / conj.max_abs().max(1.0);

    let knorm = operator_norm(&k)?;
    let sifted_bound = c as f64 * operator_norm(&sifted)?;
    let kside_bound = c as f64 * operator_norm(&kside)?;
    let verdicts = vec![
        Verdict::le("bridge_inequality", knorm, sifted_bound * (1.0 + 1e-8) + 1e-9),
        Verdict::le("kloosterman_side_inequality", knorm, kside_bound * (1.0 + 1e-8) + 1e-9),
        Verdict::residual("embedding_identity", residual, 1e-8),
    ];
    Ok(BridgeReport {
        c,
        kloosterman_norm: knorm,
        sifted_bound,
        kloosterman_side_bound: kside_bound,
        embedding_residual: residual,
        verdicts,
    })
}

/// Random `psi` with independent entries uniform in the unit square.
pub fn random_psi<R: Rng + ?Sized>(c: u64, rng: &mut R) -> Vec<C64> {
    (0..c).map(|_| C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)).collect()
}

/// `psi(m) = sum_{m' : a (m' + r) = m mod c} Phi(m' / len)`.
pub fn psi_from_window(c: u64, a: i64, offset: i64, len: u64, window: &SmoothWindow) -> Result<Vec<C64>> {
    if len == 0 {
        return Err(Error::Usage("window length must be positive".into()));
    }
    let mut psi = vec![ZERO; c as usize];
    let (lo, hi) = window.support();
    let l = len as f64;
    let start = (lo * l).floor() as i64;
    let end = (hi * l).ceil() as i64;
    for mp in start..=end {
        let v = window.phi(mp as f64 / l);
        if v != 0.0 {
            let idx = rem((a as i128 * (mp + offset) as i128).rem_euclid(c as i128) as i64, c);
            psi[idx as usize] += v;
        }
    }
    Ok(psi)
}

/// Parameters of the interval variant: modulus, twist `a`, the intervals
/// `I = [M] + r`, `J = [N] + s` and `eps > 0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntervalSetup {
    pub c: u64,
    pub a: i64,
    pub i: Interval,
    pub j: Interval,
    pub eps: f64,
}

impl IntervalSetup {
    fn validate(&self) -> Result<()> {
        if self.c < 2 {
            return Err(Error::Usage("interval variant needs c >= 2".into()));
        }
        mod_inverse(self.a, self.c)?;
        let (m, n) = (self.i.len, self.j.len);
        if m == 0 || n == 0 || m > self.c || n > self.c {
            return Err(Error::Usage(format!("need 1 <= M, N <= c; got M = {m}, N = {n}")));
        }
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(Error::Usage("eps must be positive".into()));
        }
        Ok(())
    }

    /// `(H1, H2) = (c^{1+eps} / M, c^{1+eps} / N)`.
    pub fn frequencies(&self) -> (f64, f64) {
        let ce = (self.c as f64).powf(1.0 + self.eps);
        (ce / self.i.len as f64, ce / self.j.len as f64)
    }
}

/// The truncated window function together with a bound on what was cut.
#[derive(Debug, Clone)]
pub struct WindowFunction {
    pub f: GroupFunction,
    pub h1: f64,
    pub h2: f64,
    /// Upper bound for `sum |weights|` of the terms of `F^psi` outside the
    /// box `|h1| <= H1, |h2| <= H2`.
    pub tail_mass: f64,
}

/// `F^H = (H1 H2)^-1 sum_{|h1| <= H1, |h2| <= H2} alpha_h1 beta_h2
/// 1_{T^{conj(a) h1} S T^{h2}}`, with
/// `alpha_h = Phi^(h M / c) e(-r h / c)` and `beta_h = Phi^(h N / c) e(-s h / c)`.
pub fn build_f_window(setup: &IntervalSetup, window: &SmoothWindow) -> Result<WindowFunction> {
    setup.validate()?;
    let (h1, h2) = setup.frequencies();
    if h1 > MAX_WINDOW_FREQUENCIES || h2 > MAX_WINDOW_FREQUENCIES {
        return Err(Error::Budget {
            what: "window frequencies".into(),
            needed: h1.max(h2) as u128,
            limit: MAX_WINDOW_FREQUENCIES as u128,
        });
    }
    let c = setup.c;
    let (m, n) = (setup.i.len as f64, setup.j.len as f64);
    let a_inv = mod_inverse(setup.a, c)? as i64;
    let (r, s) = (setup.i.offset, setup.j.offset);
    let (k1, k2) = (h1.floor() as i64, h2.floor() as i64);

    let alpha: Vec<C64> =
        (-k1..=k1).map(|h| Ok(window.hat_phi(h as f64 * m / c as f64)? * e_frac(-r * h, c))).collect::<Result<_>>()?;
    let beta: Vec<C64> =
        (-k2..=k2).map(|h| Ok(window.hat_phi(h as f64 * n / c as f64)? * e_frac(-s * h, c))).collect::<Result<_>>()?;

    let sl = Sl2::s(c);
    let scale = 1.0 / (h1 * h2);
    let mut f = GroupFunction::new(c);
    for (i, &al) in alpha.iter().enumerate() {
        let x = (i as i64 - k1) * a_inv;
        let left = Sl2::t_pow(rem(x, c) as i64, c).mul(&sl);
        for (j, &be) in beta.iter().enumerate() {
            let y = j as i64 - k2;
            f.add(left.mul(&Sl2::t_pow(y, c)), al * be * scale)?;
        }
    }

    let (in1, tail1) = window.split_sums(c as f64 / m, h1)?;
    let (in2, tail2) = window.split_sums(c as f64 / n, h2)?;
    let tail_mass = m * n / (c * c) as f64 * ((in1 + tail1) * (in2 + tail2) - in1 * in2);
    Ok(WindowFunction { f, h1, h2, tail_mass })
}

/// `(MN/c^2) sum_{|h1|, |h2| <= K} alpha_h1 beta_h2 1_{T^{conj(a) h1} S T^{h2}}`
/// with a plain cut-off `K`; tends to `F^psi` as `K` grows.
pub fn f_psi_from_frequencies(setup: &IntervalSetup, window: &SmoothWindow, cutoff: i64) -> Result<GroupFunction> {
    setup.validate()?;
    let c = setup.c;
    let (m, n) = (setup.i.len as f64, setup.j.len as f64);
    let a_inv = mod_inverse(setup.a, c)? as i64;
    let sl = Sl2::s(c);
    let scale = m * n / (c * c) as f64;
    let beta: Vec<C64> = (-cutoff..=cutoff)
        .map(|h| Ok(window.hat_phi(h as f64 * n / c as f64)? * e_frac(-setup.j.offset * h, c)))
        .collect::<Result<_>>()?;
    let mut f = GroupFunction::new(c);
    for h in -cutoff..=cutoff {
        let al = window.hat_phi(h as f64 * m / c as f64)? * e_frac(-setup.i.offset * h, c);
        let left = Sl2::t_pow(rem(h * a_inv, c) as i64, c).mul(&sl);
        for (j, &be) in beta.iter().enumerate() {
            let y = j as i64 - cutoff;
            f.add(left.mul(&Sl2::t_pow(y, c)), al * be * scale)?;
        }
    }
    Ok(f)
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalBridgeReport {
    pub setup: IntervalSetup,
    pub window: SmoothWindow,
    pub h1: f64,
    pub h2: f64,
    /// `||K_interval||`.
    pub interval_norm: f64,
    /// `||K^psi||` for the smoothed coefficients.
    pub smoothed_norm: f64,
    /// `c ||F^psi(rho_c^o)||`.
    pub smoothed_bound: f64,
    /// `c^{1+2 eps} ||F^H(rho_c^o)||`.
    pub window_bound: f64,
    /// `c * tail_mass + 1e-3`.
    pub slack: f64,
    pub verdicts: Vec<Verdict>,
}

impl IntervalBridgeReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Check `||K_interval|| <= c^{1+2 eps} ||F^H(rho_c^o)|| + slack`, where the
/// slack is `c` times the measured mass of the frequencies cut off by the
/// window box, plus `1e-3`.
pub fn verify_bridge_intervals(setup: &IntervalSetup, window: &SmoothWindow) -> Result<IntervalBridgeReport> {
    setup.validate()?;
    let c = setup.c;
    let rep = PermRep::new(c)?;
    let p0 = rep.projection_sifted()?;
    let k = build_k_interval(c, setup.a, setup.i, setup.j)?;
    let interval_norm = operator_norm(&k)?;

    let psi1 = psi_from_window(c, setup.a, setup.i.offset, setup.i.len, window)?;
    let psi2 = psi_from_window(c, 1, setup.j.offset, setup.j.len, window)?;
    let smoothed_norm = operator_norm(&build_k_psi(c, &psi1, &psi2)?)?;
    let fpsi = build_f_psi(c, &psi1, &psi2)?;
    let smoothed_bound = c as f64 * operator_norm(&(&rep.fourier_coeff(&fpsi)? * &p0))?;

    let wf = build_f_window(setup, window)?;
    let cf = c as f64;
    let window_bound = cf.powf(1.0 + 2.0 * setup.eps) * operator_norm(&(&rep.fourier_coeff(&wf.f)? * &p0))?;
    let slack = cf * wf.tail_mass + 1e-3;

    let verdicts = vec![
        Verdict::le("interval_bound", interval_norm, window_bound + slack),
        Verdict::le("smoothing_dominates", interval_norm, smoothed_norm * (1.0 + 1e-8) + 1e-9),
        Verdict::le("window_truncation", smoothed_bound, window_bound + slack),
    ];
    Ok(IntervalBridgeReport {
        setup: *setup,
        window: *window,
        h1: wf.h1,
        h2: wf.h2,
        interval_norm,
        smoothed_norm,
        smoothed_bound,
        window_bound,
        slack,
        verdicts,
    })
}
