use serde::Serialize;

use crate::error::{Error, Result};
use crate::kloosterman::e;
use crate::matrix::C64;

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_64, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15(f: &impl Fn(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let center = f(mid);
    let mut kronrod = center * WGK[7];
    let mut gauss = center * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += pair * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

/// Adaptive Gauss-Kronrod quadrature of a complex integrand to absolute
/// tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> C64, a: f64, b: f64, tol: f64) -> Result<C64> {
    fn rec(f: &impl Fn(f64) -> C64, a: f64, b: f64, tol: f64, depth: u32) -> Result<C64> {
        let (val, err) = gk15(f, a, b);
        if err <= tol || (b - a) < 1e-12 {
            return Ok(val);
        }
        if depth == 0 {
            return Err(Error::Convergence {
                method: "integrate".into(),
                detail: format!("error {err:e} on [{a}, {b}]"),
            });
        }
        let mid = 0.5 * (a + b);
        Ok(rec(f, a, mid, 0.5 * tol, depth - 1)? + rec(f, mid, b, 0.5 * tol, depth - 1)?)
    }
    rec(&f, a, b, tol, 40)
}

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `x <= 0`, 1 for `x >= 1`.
fn step(x: f64) -> f64 {
    let (u, v) = (bump(x), bump(1.0 - x));
    u / (u + v)
}

/// A smooth window `Phi` supported in `[-ramp, 1 + ramp]` with
/// `Phi = height` on `[0, 1]`, built from `exp(-1/t)` transitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothWindow {
    ramp: f64,
    height: f64,
}

impl SmoothWindow {
    /// Requires `0 < ramp <= 1` and `height >= 1`, so that the window is
    /// supported in `[-1, 2]` and dominates the indicator of `[0, 1]`.
    pub fn new(ramp: f64, height: f64) -> Result<Self> {
        if !(ramp > 0.0 && ramp <= 1.0) || !(height >= 1.0) || !height.is_finite() {
            return Err(Error::Usage(format!("window needs 0 < ramp <= 1, height >= 1; got {ramp}, {height}")));
        }
        Ok(SmoothWindow { ramp, height })
    }

    /// The window with full-width ramps and height 1.
    pub fn standard() -> Self {
        SmoothWindow { ramp: 1.0, height: 1.0 }
    }

    /// Narrower ramps and a raised plateau.
    pub fn narrow() -> Self {
        SmoothWindow { ramp: 0.5, height: 1.25 }
    }

    pub fn ramp(&self) -> f64 {
        self.ramp
    }

    pub fn support(&self) -> (f64, f64) {
        (-self.ramp, 1.0 + self.ramp)
    }

    pub fn phi(&self, t: f64) -> f64 {
        let w = self.ramp;
        self.height * step((t + w) / w) * step((1.0 + w - t) / w)
    }

    /// `Phi^(xi) = int Phi(t) e(-t xi) dt`.
    pub fn hat_phi(&self, xi: f64) -> Result<C64> {
        if !xi.is_finite() {
            return Err(Error::NonFinite("hat_phi argument".into()));
        }
        // Plateau in closed form, ramps by quadrature.
        let plateau = if xi.abs() < 1e-6 {
            let z = C64::new(0.0, -std::f64::consts::TAU * xi);
            C64::new(1.0, 0.0) + z / 2.0 + z * z / 6.0 + z * z * z / 24.0
        } else {
            (C64::new(1.0, 0.0) - e(-xi)) / C64::new(0.0, std::f64::consts::TAU * xi)
        };
        let g = |t: f64| e(-t * xi) * self.phi(t);
        let (lo, hi) = self.support();
        let left = integrate(g, lo, 0.0, 1e-14)?;
        let right = integrate(g, 1.0, hi, 1e-14)?;
        Ok(plateau * self.height + left + right)
    }

    /// Fourier transform of `t -> Phi(A t) e(B t)` by direct quadrature;
    /// equals `A^{-1} Phi^((xi - B)/A)`.
    pub fn hat_scaled_direct(&self, a: f64, b: f64, xi: f64) -> Result<C64> {
        if !(a > 0.0) {
            return Err(Error::Usage("scale must be positive".into()));
        }
        let (lo, hi) = self.support();
        integrate(|t| self.phi(a * t) * e(b * t - t * xi), lo / a, hi / a, 1e-13)
    }

    /// `sum_{|h| <= H} |Phi^(h / x)|` and an upper bound for
    /// `sum_{|h| > H} |Phi^(h / x)|`, for integer cut-off `H = floor(bound)`.
    ///
    /// Terms are summed explicitly out to `|h / x| = 40 / ramp`; beyond that
    /// the decay envelope `|Phi^(xi)| <= C4 |xi|^-4` is used, with `C4`
    /// measured on the last stretch and doubled.
    pub fn split_sums(&self, x: f64, bound: f64) -> Result<(f64, f64)> {
        if !(x > 0.0) || !(bound >= 0.0) {
            return Err(Error::Usage("split_sums needs x > 0, bound >= 0".into()));
        }
        let hmax = bound.floor() as i64;
        let xi_cut = 40.0 / self.ramp;
        let hcut = ((xi_cut * x).ceil() as i64).max(hmax + 1);
        let mut inner = 0.0;
        let mut tail = 0.0;
        let mut c4: f64 = 0.0;
        for h in 0..=hcut {
            let xi = h as f64 / x;
            let v = self.hat_phi(xi)?.norm();
            let mult = if h == 0 { 1.0 } else { 2.0 };
            if h <= hmax {
                inner += mult * v;
            } else {
                tail += mult * v;
            }
            if xi >= 0.5 * xi_cut {
                c4 = c4.max(v * xi.powi(4));
            }
        }
        let hc = hcut as f64;
        tail += 2.0 * (2.0 * c4) * x.powi(4) / (3.0 * hc.powi(3));
        Ok((inner, tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_shape() {
        for w in [SmoothWindow::standard(), SmoothWindow::narrow()] {
            let (lo, hi) = w.support();
            assert!(lo >= -1.0 && hi <= 2.0);
            for i in 0..=100 {
                assert!(w.phi(i as f64 / 100.0) >= 1.0);
            }
            assert_eq!(w.phi(lo - 1e-9), 0.0);
            assert_eq!(w.phi(hi + 1e-9), 0.0);
        }
        assert!(SmoothWindow::new(1.5, 1.0).is_err());
        assert!(SmoothWindow::new(0.5, 0.9).is_err());
    }

    #[test]
    fn hat_at_zero_is_mass() {
        let w = SmoothWindow::standard();
        let mass = integrate(|t| C64::new(w.phi(t), 0.0), -1.0, 2.0, 1e-14).unwrap();
        assert!((w.hat_phi(0.0).unwrap() - mass).norm() < 1e-12);
        // Symmetric about 1/2, so Phi^(xi) e(xi/2) is real.
        let z = w.hat_phi(0.7).unwrap() * e(0.35);
        assert!(z.im.abs() < 1e-12);
    }

    #[test]
    fn quadrature_polynomial() {
        let v = integrate(|t| C64::new(t * t, 0.0), 0.0, 3.0, 1e-14).unwrap();
        assert!((v.re - 9.0).abs() < 1e-13);
    }
}
