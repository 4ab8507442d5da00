use serde::Serialize;

/// Outcome of a numerical check: the two sides of an (in)equality and
/// whether the check held at its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub detail: String,
}

impl Verdict {
    /// `lhs <= rhs`, with NaN on either side counting as failure.
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Verdict {
            name: name.into(),
            passed: lhs.is_finite() && rhs.is_finite() && lhs <= rhs,
            lhs,
            rhs,
            detail: String::new(),
        }
    }

    /// `|lhs - rhs| <= tol`.
    pub fn close(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let diff = (lhs - rhs).abs();
        Verdict {
            name: name.into(),
            passed: diff.is_finite() && diff <= tol,
            lhs,
            rhs,
            detail: format!("|diff| = {diff:e}, tol = {tol:e}"),
        }
    }

    /// A residual that must not exceed `tol`.
    pub fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Verdict {
            name: name.into(),
            passed: residual.is_finite() && residual <= tol,
            lhs: residual,
            rhs: tol,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// Combine several verdicts; passes when all of them pass. The
    /// reported sides are those of the worst (largest lhs - rhs) member.
    pub fn all(name: impl Into<String>, parts: &[Verdict]) -> Self {
        let failed: Vec<&str> = parts.iter().filter(|v| !v.passed).map(|v| v.name.as_str()).collect();
        let worst = parts.iter().max_by(|a, b| (a.lhs - a.rhs).total_cmp(&(b.lhs - b.rhs)));
        let (lhs, rhs) = worst.map(|v| (v.lhs, v.rhs)).unwrap_or((0.0, 0.0));
        Verdict {
            name: name.into(),
            passed: failed.is_empty(),
            lhs,
            rhs,
            detail: if failed.is_empty() {
                format!("{} checks", parts.len())
            } else {
                format!("failed: {}", failed.join(", "))
            },
        }
    }
}
