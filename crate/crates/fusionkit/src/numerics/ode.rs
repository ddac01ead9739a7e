//! Adaptive Dormand-Prince 5(4) integration of complex ODE systems along
//! polyline contours in the complex plane.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Default relative tolerance for contour integration.
pub const ODE_RTOL_DEFAULT: f64 = 1e-10;

/// Smallest admissible step in segment parameter units; below this the
/// integration reports a conditioning failure instead of stalling.
const MIN_STEP: f64 = 1e-13;

const MAX_STEPS_PER_SEGMENT: usize = 200_000;

// Dormand-Prince RK5(4)7M tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `y' = f(z, y)` along the polyline through `path`, starting from
/// `y0` at `path[0]`, returning y at the final waypoint. The rhs must be
/// holomorphic in a neighbourhood of the contour.
pub fn integrate_ode<F>(
    mut f: F,
    y0: &[Complex64],
    path: &[Complex64],
    rtol: f64,
) -> Result<Vec<Complex64>>
where
    F: FnMut(Complex64, &[Complex64]) -> Vec<Complex64>,
{
    if path.len() < 2 {
        return Err(Error::InvalidArgument("contour needs at least two waypoints".into()));
    }
    if rtol.is_nan() || rtol <= 0.0 {
        return Err(Error::InvalidArgument(format!("rtol must be positive, got {rtol}")));
    }
    let dim = y0.len();
    let atol = rtol * 1e-2 * y0.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-30);
    let mut y = y0.to_vec();

    for seg in path.windows(2) {
        let (za, zb) = (seg[0], seg[1]);
        let dz = zb - za;
        if dz.norm() == 0.0 {
            continue;
        }
        // parametrize z = za + s*dz, s in [0,1]; dy/ds = dz * f(z, y)
        let mut s = 0.0f64;
        let mut h = 0.01f64;
        let mut steps = 0usize;
        let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); dim]; 7];
        while s < 1.0 {
            steps += 1;
            if steps > MAX_STEPS_PER_SEGMENT {
                return Err(Error::Numerical(format!(
                    "step count exceeded on segment {za} -> {zb}"
                )));
            }
            let h_eff = h.min(1.0 - s);
            let scaled = |v: &[Complex64]| -> Vec<Complex64> {
                v.iter().map(|x| x * dz).collect()
            };
            k[0] = scaled(&f(za + s * dz, &y));
            for stage in 0..6 {
                let mut yt = y.clone();
                for (j, kj) in k.iter().enumerate().take(stage + 1) {
                    let a = A[stage][j];
                    if a != 0.0 {
                        for (t, kv) in yt.iter_mut().zip(kj) {
                            *t += h_eff * a * kv;
                        }
                    }
                }
                k[stage + 1] = scaled(&f(za + (s + C[stage] * h_eff) * dz, &yt));
            }
            let mut y5 = y.clone();
            let mut y4 = y.clone();
            for (j, kj) in k.iter().enumerate() {
                for i in 0..dim {
                    if B5[j] != 0.0 {
                        y5[i] += h_eff * B5[j] * kj[i];
                    }
                    if B4[j] != 0.0 {
                        y4[i] += h_eff * B4[j] * kj[i];
                    }
                }
            }
            // normalized error estimate; non-finite values reject the step
            let mut err = 0.0f64;
            for i in 0..dim {
                let sc = atol + rtol * y5[i].norm().max(y[i].norm());
                err = err.max((y5[i] - y4[i]).norm() / sc);
            }
            if !err.is_finite() {
                err = f64::INFINITY;
            }
            if err <= 1.0 {
                s += h_eff;
                y = y5;
                if s >= 1.0 {
                    break;
                }
            }
            let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
            h = h_eff * factor.clamp(0.2, 5.0);
            if h < MIN_STEP {
                return Err(Error::Numerical(format!(
                    "step size underflow at z = {} on segment {za} -> {zb}",
                    za + s * dz
                )));
            }
        }
    }
    Ok(y)
}
