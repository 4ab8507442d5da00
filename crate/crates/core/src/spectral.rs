//! Jacobi eigen- and singular-value solvers, Schatten norms and the
//! discrete Fourier transform on `Z/cZ`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kloosterman::e_frac;
use crate::matrix::{ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 100;

/// 2x2 unitary `[[u00, u01], [u10, u11]]` that diagonalizes the Hermitian
/// block `[[a, z], [conj(z), b]]`.
fn jacobi_rotation(a: f64, b: f64, z: C64) -> [C64; 4] {
    let r = z.norm();
    let phase = z / r;
    let tau = (b - a) / (2.0 * r);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let pc = phase.conj();
    [C64::new(c, 0.0), C64::new(s, 0.0), -pc * s, pc * c]
}

fn check_square_finite(m: &ComplexMatrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("{what} needs a square matrix")));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite(what.to_string()));
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.
/// Returns eigenvalues in increasing order and the unitary whose columns
/// are the matching eigenvectors.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_square_finite(h, "hermitian_eigen")?;
    let n = h.rows();
    let scale = h.frobenius_norm();
    if h.hermitian_defect() > 1e-10 * scale.max(1.0) {
        return Err(Error::Usage("hermitian_eigen: matrix is not Hermitian".into()));
    }
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n);
    let target = 1e-15 * scale.max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let z = a[(p, q)];
                if z.norm() <= 1e-300 {
                    continue;
                }
                let [u00, u01, u10, u11] = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, z);
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * u00 + y * u10;
                    a[(k, q)] = x * u01 + y * u11;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = u00.conj() * x + u10.conj() * y;
                    a[(q, k)] = u01.conj() * x + u11.conj() * y;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * u00 + y * u10;
                    v[(k, q)] = x * u01 + y * u11;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Convergence {
            method: "hermitian_eigen".into(),
            detail: format!("{MAX_SWEEPS} sweeps on a {n}x{n} matrix"),
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    Ok((values, v.select_columns(&order)))
}

/// Singular values in decreasing order, by one-sided Jacobi rotations
/// (Jacobi on the Gram matrix `A^* A`, applied implicitly to the columns).
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("singular_values".into()));
    }
    let a = if m.rows() < m.cols() { m.adjoint() } else { m.clone() };
    let (rows, n) = (a.rows(), a.cols());
    // Columns stored contiguously.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let rel_tol = f64::EPSILON * (rows.max(1) as f64);
    // Columns this small move no singular value at double precision.
    let negligible = (1e-15 * a.frobenius_norm()).powi(2);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                if gamma.norm() <= rel_tol * (alpha * beta).sqrt()
                    || alpha.min(beta) <= negligible
                    || gamma.norm() <= 1e-300
                {
                    continue;
                }
                rotated = true;
                let [u00, u01, u10, u11] = jacobi_rotation(alpha, beta, gamma);
                let (left, right) = cols.split_at_mut(j);
                let (ci, cj) = (&mut left[i], &mut right[0]);
                for k in 0..rows {
                    let (x, y) = (ci[k], cj[k]);
                    ci[k] = x * u00 + y * u10;
                    cj[k] = x * u01 + y * u11;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            method: "singular_values".into(),
            detail: format!("{MAX_SWEEPS} sweeps on a {rows}x{n} matrix"),
        });
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// `sum_i sigma_i^q`.
pub fn schatten_power(m: &ComplexMatrix, q: f64) -> Result<f64> {
    if !(q >= 1.0) || q.is_infinite() {
        return Err(Error::Usage(format!("Schatten power needs finite q >= 1, got {q}")));
    }
    Ok(singular_values(m)?.iter().map(|s| s.powf(q)).sum())
}

/// `||M||_{S^q}`; `q = f64::INFINITY` gives the operator norm.
pub fn schatten_norm(m: &ComplexMatrix, q: f64) -> Result<f64> {
    if q.is_infinite() && q > 0.0 {
        return operator_norm(m);
    }
    Ok(schatten_power(m, q)?.powf(1.0 / q))
}

/// Operator norm estimate by power iteration on `M^* M`. Always a lower
/// bound up to rounding; converges to the true norm for generic starts.
pub fn power_iteration_norm(m: &ComplexMatrix, max_iters: usize, seed: u64) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::NonFinite("power_iteration_norm".into()));
    }
    let n = m.cols();
    if n == 0 || m.rows() == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = ComplexMatrix::from_fn(n, 1, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let adj = m.adjoint();
    let mut estimate = 0.0;
    for _ in 0..max_iters {
        let norm = x.frobenius_norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        x = x.scale(C64::new(1.0 / norm, 0.0));
        let y = m * &x;
        let next = y.frobenius_norm();
        x = &adj * &y;
        if (next - estimate).abs() <= 1e-15 * next {
            return Ok(next);
        }
        estimate = next;
    }
    Ok(estimate)
}

/// Unitary DFT on `Z/cZ`: `U[u, v] = c^{-1/2} e(u v / c)`.
pub fn dft_matrix(c: u64) -> Result<ComplexMatrix> {
    if c == 0 {
        return Err(Error::InvalidModulus(0));
    }
    let s = 1.0 / (c as f64).sqrt();
    Ok(ComplexMatrix::from_fn(c as usize, c as usize, |u, v| e_frac((u as u64 * v as u64 % c) as i64, c) * s))
}

/// `U^* K U` for a `c x c` matrix `K`.
pub fn dft_conjugate(k: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !k.is_square() {
        return Err(Error::Dimension("dft_conjugate needs a square matrix".into()));
    }
    let u = dft_matrix(k.rows() as u64)?;
    Ok(&(&u.adjoint() * k) * &u)
}

/// Orthonormal basis (as columns) of the range of an orthogonal projection.
pub fn projection_range(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eigen(p)?;
    let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0.5).collect();
    Ok(vectors.select_columns(&keep))
}
