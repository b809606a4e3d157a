//! Eigenvalues of dense real symmetric matrices stored row-major.

use super::SpectralError;

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI_TOLERANCE: f64 = 1e-9;
const JACOBI_MAX_SWEEPS: usize = 100;
const QL_MAX_ITERATIONS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenMethod {
    /// Cyclic Jacobi rotations.
    Jacobi,
    /// Householder reduction to tridiagonal form, then implicit QL.
    TridiagonalQl,
    /// Jacobi up to [`JACOBI_AUTO_LIMIT`] rows, tridiagonal QL above.
    Auto,
}

pub const JACOBI_AUTO_LIMIT: usize = 64;

/// Eigenvalues in ascending order. `a` is consumed as workspace.
pub fn symmetric_eigenvalues(a: Vec<f64>, n: usize, method: EigenMethod) -> Result<Vec<f64>, SpectralError> {
    assert_eq!(a.len(), n * n, "matrix must be n × n");
    let mut vals = match method {
        EigenMethod::Jacobi => jacobi(a, n)?,
        EigenMethod::TridiagonalQl => tridiagonal_ql(a, n)?,
        EigenMethod::Auto if n <= JACOBI_AUTO_LIMIT => jacobi(a, n)?,
        EigenMethod::Auto => tridiagonal_ql(a, n)?,
    };
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

fn off_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..i {
            s += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    s.sqrt()
}

fn jacobi(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>, SpectralError> {
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a, n) < JACOBI_TOLERANCE {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(SpectralError::NoConvergence("Jacobi sweeps"))
}

/// Diagonal and subdiagonal (`e[i]` couples rows `i − 1` and `i`; `e[0] = 0`).
fn householder_tridiagonal(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut p = vec![0.0; n];
    // Only the lower triangle is read and written.
    for i in (1..n).rev() {
        let l = i - 1;
        let row = i * n;
        let norm2: f64 = a[row..row + i].iter().map(|x| x * x).sum();
        if l == 0 || norm2 == 0.0 {
            e[i] = a[row + l];
            d[i] = a[row + i];
            continue;
        }
        let f = a[row + l];
        let alpha = if f >= 0.0 { -norm2.sqrt() } else { norm2.sqrt() };
        e[i] = alpha;
        u[..i].copy_from_slice(&a[row..row + i]);
        u[l] = f - alpha;
        let h = norm2 - f * alpha; // ‖u‖² / 2
        // p = A u / h over the leading i × i block.
        p[..i].iter_mut().for_each(|x| *x = 0.0);
        for j in 0..i {
            let rj = &a[j * n..j * n + j];
            let mut acc = a[j * n + j] * u[j];
            let uj = u[j];
            for k in 0..j {
                acc += rj[k] * u[k];
                p[k] += rj[k] * uj;
            }
            p[j] += acc;
        }
        for x in p[..i].iter_mut() {
            *x /= h;
        }
        let k_coef: f64 = u[..i].iter().zip(&p[..i]).map(|(a, b)| a * b).sum::<f64>() / (2.0 * h);
        for j in 0..i {
            p[j] -= k_coef * u[j];
        }
        for j in 0..i {
            let (pj, uj) = (p[j], u[j]);
            let rj = &mut a[j * n..j * n + j + 1];
            for k in 0..=j {
                rj[k] -= pj * u[k] + uj * p[k];
            }
        }
        d[i] = a[row + i];
    }
    d[0] = a[0];
    (d, e)
}

fn tridiagonal_ql(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>, SpectralError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = householder_tridiagonal(&mut a, n);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    // Deflation is judged against the norm of the whole matrix: clusters of
    // zero eigenvalues leave nothing local to be relative to.
    let scale = d.iter().zip(&e).map(|(x, y)| x.abs() + y.abs()).fold(0.0, f64::max);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd.max(scale) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITERATIONS {
                return Err(SpectralError::NoConvergence("implicit QL"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}
