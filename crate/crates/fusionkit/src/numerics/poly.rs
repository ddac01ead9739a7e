//! Polynomial root finding by the Aberth-Ehrlich simultaneous iteration.

use crate::error::{Error, Result};
use crate::numerics::linalg::eval_poly_and_derivative;
use num_complex::Complex64;

/// Residual gate: every returned root r satisfies
/// `|p(r)| <= POLY_ROOT_RTOL * sum_k |c_k| max(1,|r|)^k`.
pub const POLY_ROOT_RTOL: f64 = 1e-10;

const MAX_DEGREE: usize = 64;
const MAX_ITERS: usize = 400;

/// Ascending coefficients of the monic polynomial with the given roots.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut q = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (k, &c) in p.iter().enumerate() {
            q[k + 1] += c;
            q[k] -= r * c;
        }
        p = q;
    }
    p
}

/// Roots of `c[0] + c[1] t + ... + c[d] t^d` (leading coefficient nonzero,
/// degree <= 64). Multiple roots come back as a cluster whose members pass
/// the residual gate individually.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if coeffs.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient vector".into()));
    }
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    if d > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!("degree {d} exceeds {MAX_DEGREE}")));
    }
    let lead = coeffs[d];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidArgument("leading coefficient must be nonzero".into()));
    }

    // Cauchy-style inclusion radius for the initial circle.
    let radius = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.35) / d as f64 + 0.4;
            Complex64::from_polar(radius * (0.6 + 0.4 * (k as f64 / d as f64)), theta)
        })
        .collect();

    for _ in 0..MAX_ITERS {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let z = roots[i];
            let (p, dp) = eval_poly_and_derivative(coeffs, z);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() > 0.0 {
                p / dp
            } else {
                // stationary point: jitter off it
                Complex64::new(1e-8 * (1.0 + z.norm()), 1e-8)
            };
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &rj) in roots.iter().enumerate() {
                if j != i {
                    let diff = z - rj;
                    if diff.norm() > 1e-30 {
                        s += 1.0 / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() > 1e-30 { w / denom } else { w };
            roots[i] = z - step;
            max_step = max_step.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }

    for &r in &roots {
        let (p, _) = eval_poly_and_derivative(coeffs, r);
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * r.norm().max(1.0).powi(k as i32))
            .sum();
        if p.norm() > POLY_ROOT_RTOL * scale {
            return Err(Error::Numerical(format!(
                "root residual {:.3e} exceeds {:.3e} at {r}",
                p.norm(),
                POLY_ROOT_RTOL * scale
            )));
        }
    }
    Ok(roots)
}
