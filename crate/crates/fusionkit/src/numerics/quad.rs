//! Gauss-Jacobi quadrature on `[0,1]` for weights t^a (1-t)^b, a,b > -1,
//! by Golub-Welsch on the symmetric Jacobi recurrence matrix.

use crate::error::{Error, Result};
use crate::numerics::gamma::cgamma;
use num_complex::Complex64;

/// Nodes and weights such that `sum_i w_i p(t_i) = int_0^1 t^a (1-t)^b p(t) dt`
/// exactly for polynomials p of degree <= 2n-1.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("quadrature order must be positive".into()));
    }
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::InvalidArgument(format!(
            "weight exponents must exceed -1, got a={a}, b={b}"
        )));
    }
    // Standard Jacobi weight (1-x)^alpha (1+x)^beta on [-1,1]; the map
    // t = (1+x)/2 sends it to t^beta (1-t)^alpha, so alpha=b, beta=a.
    let (alpha, beta) = (b, a);
    let mut diag = vec![0.0f64; n];
    let mut off = vec![0.0f64; n]; // off[k] couples k-1 and k
    let ab = alpha + beta;
    diag[0] = (beta - alpha) / (ab + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let denom = (2.0 * kf + ab) * (2.0 * kf + ab + 2.0);
        diag[k] = (beta * beta - alpha * alpha) / denom;
        let bk = if k == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                / ((2.0 * kf + ab).powi(2) * (2.0 * kf + ab + 1.0) * (2.0 * kf + ab - 1.0))
        };
        off[k] = bk.sqrt();
    }
    // total mass on [-1,1]: 2^(ab+1) B(alpha+1, beta+1)
    let mu0 = 2.0f64.powf(ab + 1.0) * beta_fn(alpha + 1.0, beta + 1.0);

    let mut first = vec![0.0f64; n];
    first[0] = 1.0;
    symmetric_tridiagonal_eigen(&mut diag, &mut off, &mut first)?;

    // map x in [-1,1] to t in [0,1]; dt = dx/2 and the weight picks up 2^-ab
    let scale = 2.0f64.powf(-(ab + 1.0));
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        nodes.push((1.0 + diag[i]) / 2.0);
        weights.push(mu0 * first[i] * first[i] * scale);
    }
    Ok((nodes, weights))
}

fn beta_fn(x: f64, y: f64) -> f64 {
    let g = |v: f64| cgamma(Complex64::new(v, 0.0)).re;
    g(x) * g(y) / g(x + y)
}

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix,
/// accumulating only the first row of the eigenvector matrix (Golub-Welsch).
/// `d` holds the diagonal (overwritten with eigenvalues, ascending),
/// `e[1..]` the subdiagonal, `z` the vector to rotate.
fn symmetric_tridiagonal_eigen(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    // shift e down so e[i] couples d[i], d[i+1]
    for i in 0..n - 1 {
        e[i] = e[i + 1];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Numerical("tridiagonal QL failed to converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let bb = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
                // rotate the tracked vector
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if r == 0.0 && m > l + 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // ascending order
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let ds: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let zs: Vec<f64> = idx.iter().map(|&i| z[i]).collect();
    d.copy_from_slice(&ds);
    z.copy_from_slice(&zs);
    Ok(())
}
