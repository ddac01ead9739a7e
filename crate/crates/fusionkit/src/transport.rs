//! Transport coefficients for the regular-singular system
//! `f'(z) = (A/z + B/(1-z)) f(z)` with `B = -alpha I + beta Q`, where
//! `Q x = phi(x) v` is the rank-one idempotent fixed by `phi(v) = 1`.
//!
//! The module provides Frobenius solutions at both singular points,
//! a closed Gamma-product connection formula between them, numerical
//! continuation along the negative real axis as an independent check,
//! the characteristic function of the rank-one perturbation, a rational
//! canonical form adapted to `phi`, an iterated Euler integral for the
//! projected solution, and seeded random problem generation.

use crate::error::{Error, Result};
use crate::numerics::gamma::{cgamma, recip_gamma};
use crate::numerics::linalg::CMat;
use crate::numerics::ode::{integrate_ode, ODE_RTOL_DEFAULT};
use crate::numerics::poly::poly_from_roots;
use crate::numerics::quad::gauss_jacobi;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Relative tail bound for truncating Frobenius series at their
/// evaluation radius.
pub const SERIES_TOL: f64 = 1e-12;
/// Hard cap on Frobenius coefficients; hitting it clears `converged`.
pub const SERIES_MAX_TERMS: usize = 4096;
/// Seed point `-TRANSPORT_SEED_RADIUS` where continuation starts.
pub const TRANSPORT_SEED_RADIUS: f64 = 0.1;
/// Far point `-TRANSPORT_FAR_RADIUS` where continuation is matched
/// against the series at infinity.
pub const TRANSPORT_FAR_RADIUS: f64 = 100.0;
/// Margins below this make [`TransportProblem::validate`] report failure.
pub const GENERAL_POSITION_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Companion realization returned by [`rational_canonical`]: the
/// change-of-basis matrix followed by the coefficient vectors `a`, `b`,
/// `c` of the characteristic data (see that function for the layout).
pub type CompanionForm = (CMat, Vec<Complex64>, Vec<Complex64>, Vec<Complex64>);

/// Logarithm with argument in `(0, 2 pi)`: the branch cut lies along the
/// nonnegative real axis, which the continuation path never touches.
pub fn log_positive_cut(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::Domain(format!(
            "logarithm branch cut: {z} lies on the nonnegative real axis"
        )));
    }
    let mut arg = z.im.atan2(z.re);
    if arg <= 0.0 {
        arg += 2.0 * PI;
    }
    Ok(Complex64::new(z.norm().ln(), arg))
}

/// `z^e` on the branch with `arg z` in `(0, 2 pi)`.
pub fn pow_positive_cut(z: Complex64, e: Complex64) -> Result<Complex64> {
    Ok((e * log_positive_cut(z)?).exp())
}

/// The ODE data: matrix `A`, vector `v`, functional `phi` (acting as
/// `x -> sum_c phi_c x_c`, no conjugation), and scalars `alpha`, `beta`
/// determining `B = -alpha I + beta Q`, `Q x = phi(x) v`.
#[derive(Clone, Debug)]
pub struct TransportProblem {
    pub a: CMat,
    pub v: Vec<Complex64>,
    pub phi: Vec<Complex64>,
    pub alpha: Complex64,
    pub beta: Complex64,
}

/// Structured general-position diagnostics; [`TransportProblem::validate`]
/// never fails, it reports. Margins that could not be computed (for
/// example because the spectrum did not resolve) are NaN with an issue
/// recorded.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub ok: bool,
    pub issues: Vec<String>,
    /// `|phi(v) - 1|`.
    pub phi_v_error: f64,
    /// Minimal pairwise gap among the eigenvalues at 0.
    pub eigen_gap_in: f64,
    /// Minimal pairwise gap among the eigenvalues at infinity.
    pub eigen_gap_out: f64,
    /// Minimal distance of intra-spectrum differences from nonzero integers.
    pub integer_margin: f64,
    /// Minimal `|phi(xi)|` over unit-norm eigenvectors at 0 and infinity.
    pub functional_margin: f64,
    /// Minimal coefficient modulus of `v` expanded in the eigenbasis at 0.
    pub expansion_margin: f64,
}

/// Spectral data of a problem in general position: eigenvalues of `A`
/// (`lambda`, governing behaviour at 0) and of `A - B` (`mu`, governing
/// behaviour at infinity), each sorted by descending real then imaginary
/// part, with eigenvectors rescaled so that `phi` takes value 1 on them.
#[derive(Clone, Debug)]
pub struct Spectral {
    pub lambda: Vec<Complex64>,
    pub xi: Vec<Vec<Complex64>>,
    pub mu: Vec<Complex64>,
    pub zeta: Vec<Vec<Complex64>>,
}

impl TransportProblem {
    pub fn new(
        a: CMat,
        v: Vec<Complex64>,
        phi: Vec<Complex64>,
        alpha: Complex64,
        beta: Complex64,
    ) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        let d = a.nrows();
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if v.len() != d || phi.len() != d {
            return Err(Error::RankMismatch { expected: d, found: v.len().max(phi.len()) });
        }
        let pv: Complex64 = phi.iter().zip(&v).map(|(p, x)| p * x).sum();
        if (pv - ONE).norm() > 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "phi(v) = {pv} must equal 1 (idempotent normalization)"
            )));
        }
        Ok(TransportProblem { a, v, phi, alpha, beta })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn apply_phi(&self, x: &[Complex64]) -> Complex64 {
        self.phi.iter().zip(x).map(|(p, c)| p * c).sum()
    }

    /// `B x = -alpha x + beta phi(x) v`.
    pub fn apply_b(&self, x: &[Complex64]) -> Vec<Complex64> {
        let s = self.beta * self.apply_phi(x);
        x.iter().zip(&self.v).map(|(xi, vi)| -self.alpha * xi + s * vi).collect()
    }

    pub fn b_matrix(&self) -> CMat {
        let d = self.dim();
        CMat::from_fn(d, d, |r, c| {
            let diag = if r == c { -self.alpha } else { ZERO };
            diag + self.beta * self.v[r] * self.phi[c]
        })
    }

    pub fn a_minus_b(&self) -> CMat {
        self.a.sub(&self.b_matrix())
    }

    /// Right-hand side `(A/z + B/(1-z)) y`.
    pub fn field(&self, z: Complex64, y: &[Complex64]) -> Vec<Complex64> {
        let ay = self.a.matvec(y);
        let by = self.apply_b(y);
        let iz = ONE / z;
        let iw = ONE / (ONE - z);
        ay.iter().zip(&by).map(|(a, b)| iz * a + iw * b).collect()
    }

    /// Eigen-data at both singular points, `phi`-normalized.
    pub fn spectral(&self) -> Result<Spectral> {
        let (lambda, xi) = sorted_eigen(&self.a)?;
        let (mu, zeta) = sorted_eigen(&self.a_minus_b())?;
        let xi = phi_normalize(self, xi)?;
        let zeta = phi_normalize(self, zeta)?;
        Ok(Spectral { lambda, xi, mu, zeta })
    }

    /// General-position diagnostics with explicit margins.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let pv: Complex64 = self.apply_phi(&self.v);
        let phi_v_error = (pv - ONE).norm();
        if phi_v_error > GENERAL_POSITION_TOL {
            issues.push(format!("phi(v) deviates from 1 by {phi_v_error:.3e}"));
        }

        let mut eigen_gap_in = f64::NAN;
        let mut eigen_gap_out = f64::NAN;
        let mut integer_margin = f64::NAN;
        let mut functional_margin = f64::NAN;
        let mut expansion_margin = f64::NAN;

        let eig_in = sorted_eigen(&self.a);
        let eig_out = sorted_eigen(&self.a_minus_b());
        match (&eig_in, &eig_out) {
            (Ok((lambda, xi)), Ok((mu, zeta))) => {
                eigen_gap_in = min_pairwise_gap(lambda);
                eigen_gap_out = min_pairwise_gap(mu);
                if eigen_gap_in < GENERAL_POSITION_TOL {
                    issues.push(format!("eigenvalues at 0 nearly collide (gap {eigen_gap_in:.3e})"));
                }
                if eigen_gap_out < GENERAL_POSITION_TOL {
                    issues.push(format!(
                        "eigenvalues at infinity nearly collide (gap {eigen_gap_out:.3e})"
                    ));
                }
                integer_margin =
                    min_nonzero_integer_margin(lambda).min(min_nonzero_integer_margin(mu));
                if integer_margin < GENERAL_POSITION_TOL {
                    issues.push(format!(
                        "intra-spectrum difference within {integer_margin:.3e} of a nonzero integer"
                    ));
                }
                functional_margin = f64::INFINITY;
                for basis in [xi, zeta] {
                    for w in basis {
                        let scale = w.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
                        let m = (self.apply_phi(w)).norm() / scale;
                        functional_margin = functional_margin.min(m);
                    }
                }
                if functional_margin < GENERAL_POSITION_TOL {
                    issues.push(format!(
                        "phi nearly vanishes on an eigenvector (margin {functional_margin:.3e})"
                    ));
                }
                // coefficients of v in the eigenbasis at 0 (cyclicity of v)
                let d = self.dim();
                let m = CMat::from_fn(d, d, |r, c| xi[c][r]);
                match m.lu().and_then(|lu| lu.solve(&self.v)) {
                    Ok(delta) => {
                        expansion_margin =
                            delta.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
                        if expansion_margin < GENERAL_POSITION_TOL {
                            issues.push(format!(
                                "v nearly drops an eigen-component (margin {expansion_margin:.3e})"
                            ));
                        }
                    }
                    Err(e) => issues.push(format!("could not expand v in the eigenbasis: {e}")),
                }
            }
            _ => {
                if let Err(e) = &eig_in {
                    issues.push(format!("spectrum at 0 did not resolve: {e}"));
                }
                if let Err(e) = &eig_out {
                    issues.push(format!("spectrum at infinity did not resolve: {e}"));
                }
            }
        }

        ValidationReport {
            ok: issues.is_empty(),
            issues,
            phi_v_error,
            eigen_gap_in,
            eigen_gap_out,
            integer_margin,
            functional_margin,
            expansion_margin,
        }
    }
}

fn sorted_eigen(m: &CMat) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
    let (values, vectors) = m.eigen()?;
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| {
        values[j]
            .re
            .partial_cmp(&values[i].re)
            .unwrap()
            .then(values[j].im.partial_cmp(&values[i].im).unwrap())
    });
    Ok((
        idx.iter().map(|&i| values[i]).collect(),
        idx.iter().map(|&i| vectors[i].clone()).collect(),
    ))
}

fn phi_normalize(p: &TransportProblem, basis: Vec<Vec<Complex64>>) -> Result<Vec<Vec<Complex64>>> {
    basis
        .into_iter()
        .map(|w| {
            let c = p.apply_phi(&w);
            let scale = w.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
            if c.norm() < 1e-12 * scale {
                return Err(Error::Domain(
                    "phi vanishes on an eigenvector; problem not in general position".into(),
                ));
            }
            Ok(w.iter().map(|x| x / c).collect())
        })
        .collect()
}

fn min_pairwise_gap(vals: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            gap = gap.min((vals[i] - vals[j]).norm());
        }
    }
    gap
}

/// Distance of every pairwise difference from the nearest nonzero integer.
fn min_nonzero_integer_margin(vals: &[Complex64]) -> f64 {
    let mut margin = f64::INFINITY;
    for i in 0..vals.len() {
        for j in 0..vals.len() {
            if i == j {
                continue;
            }
            let d = vals[i] - vals[j];
            let r = d.re.round();
            let candidates = if r == 0.0 { vec![1.0, -1.0] } else { vec![r] };
            for m in candidates {
                margin = margin.min((d - Complex64::new(m, 0.0)).norm());
            }
        }
    }
    margin
}

/// One Frobenius solution: `branch(z) * sum_n c_n w^n` with
/// `branch(z) = exp(e * Log z)` on the `(0, 2 pi)` branch, where `w = z`
/// at the origin and `w = 1/z` at infinity.
#[derive(Clone, Debug)]
pub struct FrobeniusSeries {
    exponent: Complex64,
    at_infinity: bool,
    coeffs: Vec<Vec<Complex64>>,
    converged: bool,
}

impl FrobeniusSeries {
    pub fn exponent(&self) -> Complex64 {
        self.exponent
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn is_at_infinity(&self) -> bool {
        self.at_infinity
    }

    /// Evaluate off the nonnegative real axis.
    pub fn eval(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let branch = pow_positive_cut(z, self.exponent)?;
        let w = if self.at_infinity { ONE / z } else { z };
        let d = self.coeffs[0].len();
        let mut acc = vec![ZERO; d];
        for c_n in self.coeffs.iter().rev() {
            for k in 0..d {
                acc[k] = acc[k] * w + c_n[k];
            }
        }
        Ok(acc.into_iter().map(|x| branch * x).collect())
    }
}

/// Shared Frobenius recurrence: coefficients of the solution
/// `w^e sum c_n w^n` of `g' = (M/w + B/(1-w)) g` with `c_0` the given
/// eigenvector, truncated once three consecutive terms fall below
/// [`SERIES_TOL`] relative to the accumulated majorant at `radius`.
fn frobenius_coeffs(
    p: &TransportProblem,
    m: &CMat,
    e: Complex64,
    c0: Vec<Complex64>,
    radius: f64,
) -> Result<(Vec<Vec<Complex64>>, bool)> {
    if radius.is_nan() || radius <= 0.0 || radius >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "series radius must lie in (0, 1), got {radius}"
        )));
    }
    let d = c0.len();
    let mut coeffs = vec![c0.clone()];
    let mut running = c0; // sum of previous coefficients
    let mut majorant = norm_inf_vec(&coeffs[0]);
    let mut quiet = 0usize;
    let mut converged = false;
    for n in 1..=SERIES_MAX_TERMS {
        let rhs = p.apply_b(&running);
        let shifted = m.scale(-ONE).add_scalar_diag(Complex64::new(n as f64, 0.0) + e);
        let c_n = shifted.lu()?.solve(&rhs)?;
        for k in 0..d {
            running[k] += c_n[k];
        }
        let term = norm_inf_vec(&c_n) * radius.powi(n as i32);
        majorant += term;
        coeffs.push(c_n);
        if term <= SERIES_TOL * majorant.max(1e-300) {
            quiet += 1;
            if quiet >= 3 {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok((coeffs, converged))
}

fn norm_inf_vec(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Frobenius solution `f_i(z) = z^{lambda_i} (xi_i + O(z))` at the origin,
/// truncated for evaluation at `|z| <= radius < 1`.
pub fn series_at_zero(
    p: &TransportProblem,
    s: &Spectral,
    i: usize,
    radius: f64,
) -> Result<FrobeniusSeries> {
    let (coeffs, converged) = frobenius_coeffs(p, &p.a, s.lambda[i], s.xi[i].clone(), radius)?;
    Ok(FrobeniusSeries { exponent: s.lambda[i], at_infinity: false, coeffs, converged })
}

/// Frobenius solution `h_j(z) = z^{mu_j} (zeta_j + O(1/z))` at infinity.
/// In `w = 1/z` the system keeps its shape with matrix `B - A` at the
/// origin, whose eigenvalues are `-mu_j` with the same eigenvectors.
/// `radius` bounds `|1/z|` at evaluation; the branch is taken in `z`, so
/// on the negative axis `h_j(-x) = e^{i pi mu_j} x^{mu_j} (zeta_j + O(1/x))`.
pub fn series_at_infinity(
    p: &TransportProblem,
    s: &Spectral,
    j: usize,
    radius: f64,
) -> Result<FrobeniusSeries> {
    let m = p.b_matrix().sub(&p.a);
    let (coeffs, converged) = frobenius_coeffs(p, &m, -s.mu[j], s.zeta[j].clone(), radius)?;
    Ok(FrobeniusSeries { exponent: s.mu[j], at_infinity: true, coeffs, converged })
}

/// Characteristic function of the rank-one perturbation `A -> A - beta Q`:
/// resolvent form `1 + beta phi((tI - A)^{-1} v)` and eigenvalue-product
/// form `prod_j (t - (mu_j - alpha)) / prod_i (t - lambda_i)`. The two
/// agree identically; both are returned so independence can be checked.
pub fn chi_p(p: &TransportProblem, s: &Spectral, t: Complex64) -> Result<(Complex64, Complex64)> {
    let resolvent = chi_resolvent(p, t)?;
    let mut product = ONE;
    for j in 0..p.dim() {
        product *= t - (s.mu[j] - p.alpha);
    }
    for i in 0..p.dim() {
        product /= t - s.lambda[i];
    }
    Ok((resolvent, product))
}

/// Resolvent form `1 + beta phi((tI - A)^{-1} v)` alone; `t` must avoid
/// the spectrum of `A`.
pub fn chi_resolvent(p: &TransportProblem, t: Complex64) -> Result<Complex64> {
    let shifted = p.a.scale(-ONE).add_scalar_diag(t);
    let x = shifted.lu()?.solve(&p.v)?;
    Ok(ONE + p.beta * p.apply_phi(&x))
}

/// Scalar coefficients `a_{i,n}` of the projected solution in the pure
/// rank-one case (`alpha = 0`):
/// `phi(f_i(z)) = z^{lambda_i} (1 - z) sum_n a_{i,n} z^n` with
/// `a_{i,0} = 1` and `a_{i,n} = chi(lambda_i + n) a_{i,n-1}`.
pub fn projected_series(
    p: &TransportProblem,
    s: &Spectral,
    i: usize,
    terms: usize,
) -> Result<Vec<Complex64>> {
    if p.alpha.norm() > 1e-14 {
        return Err(Error::Domain(
            "projected series requires alpha = 0; gauge by (1-z)^{-alpha} first".into(),
        ));
    }
    let mut out = Vec::with_capacity(terms);
    let mut a = ONE;
    out.push(a);
    for n in 1..terms {
        a *= chi_resolvent(p, s.lambda[i] + Complex64::new(n as f64, 0.0))?;
        out.push(a);
    }
    Ok(out)
}

/// Closed-form transport matrix: row `i` lists the coefficients of the
/// solution `f_i` at 0 over the solutions `h_j` at infinity,
///
/// `c_ij = e^{i pi (lambda_i - mu_j)}
///         prod_{k != i} Gamma(lambda_i - lambda_k + 1)
///         prod_{l != j} Gamma(mu_j - mu_l)
///       / [prod_{l != j} Gamma(lambda_i - mu_l + alpha + 1)
///          prod_{k != i} Gamma(mu_j - lambda_k - alpha)]`.
///
/// Denominators are applied through the reciprocal Gamma with pole
/// snapping, so entries sitting on a denominator pole are exactly zero.
pub fn transport_formula(p: &TransportProblem, s: &Spectral) -> CMat {
    let d = p.dim();
    CMat::from_fn(d, d, |i, j| {
        let mut c = (Complex64::i() * PI * (s.lambda[i] - s.mu[j])).exp();
        for k in 0..d {
            if k != i {
                c *= cgamma(s.lambda[i] - s.lambda[k] + ONE);
                c *= recip_gamma(s.mu[j] - s.lambda[k] - p.alpha);
            }
        }
        for l in 0..d {
            if l != j {
                c *= cgamma(s.mu[j] - s.mu[l]);
                c *= recip_gamma(s.lambda[i] - s.mu[l] + p.alpha + ONE);
            }
        }
        c
    })
}

fn env_rtol() -> f64 {
    std::env::var("FUSIONKIT_RTOL").ok().and_then(|s| s.parse().ok()).unwrap_or(ODE_RTOL_DEFAULT)
}

/// Transport matrix by numerical continuation: seed each `f_i` from its
/// series at `-0.1`, integrate along the negative real axis to `-100`,
/// and resolve against the basis `h_j(-100)` from the series at infinity.
/// Honors the `FUSIONKIT_RTOL` environment variable for the integrator
/// tolerance.
pub fn transport_numeric(p: &TransportProblem) -> Result<CMat> {
    transport_numeric_with(p, env_rtol())
}

/// [`transport_numeric`] with an explicit integrator tolerance.
pub fn transport_numeric_with(p: &TransportProblem, rtol: f64) -> Result<CMat> {
    let s = p.spectral()?;
    let d = p.dim();
    let z0 = Complex64::new(-TRANSPORT_SEED_RADIUS, 0.0);
    let z1 = Complex64::new(-TRANSPORT_FAR_RADIUS, 0.0);

    let mut h = CMat::zeros(d, d);
    for j in 0..d {
        let series = series_at_infinity(p, &s, j, 1.0 / TRANSPORT_FAR_RADIUS)?;
        if !series.converged() {
            return Err(Error::Numerical(format!(
                "series at infinity for column {j} did not converge"
            )));
        }
        let col = series.eval(z1)?;
        for r in 0..d {
            h[(r, j)] = col[r];
        }
    }
    let h_lu = h.lu()?;

    let mut c = CMat::zeros(d, d);
    for i in 0..d {
        let series = series_at_zero(p, &s, i, TRANSPORT_SEED_RADIUS)?;
        if !series.converged() {
            return Err(Error::Numerical(format!("series at 0 for row {i} did not converge")));
        }
        let y0 = series.eval(z0)?;
        let y1 = integrate_ode(|z, y| p.field(z, y), &y0, &[z0, z1], rtol)?;
        let row = h_lu.solve(&y1)?;
        for j in 0..d {
            c[(i, j)] = row[j];
        }
    }
    Ok(c)
}

/// Rational canonical form adapted to `phi` for the pure rank-one case
/// (`alpha = 0`). Returns `(T, a, b, c)` where the columns of `T` are
/// `w, Aw, ..., A^{d-1}w` with `phi(A^j w) = delta_{j,d-1}`, so that
/// `T^{-1} A T` is the companion matrix (subdiagonal ones, last column
/// `a`) of `t^d - sum_i a_i t^{i-1} = det(tI - A)`, and likewise `c` for
/// `A - B`. The difference `b = a - c` carries the rank-one part:
/// `b_d = beta`, and general position of the pair is equivalent to `b`
/// not vanishing at any eigenvalue of `A`.
pub fn rational_canonical(p: &TransportProblem) -> Result<CompanionForm> {
    if p.alpha.norm() > 1e-14 {
        return Err(Error::Domain(
            "rational canonical form requires alpha = 0; gauge by (1-z)^{-alpha} first".into(),
        ));
    }
    let d = p.dim();
    // rows phi^T A^j
    let mut rows = Vec::with_capacity(d);
    let mut row = p.phi.clone();
    for _ in 0..d {
        rows.push(row.clone());
        let mut next = vec![ZERO; d];
        for (r, &x) in row.iter().enumerate() {
            for (c, slot) in next.iter_mut().enumerate() {
                *slot += x * p.a[(r, c)];
            }
        }
        row = next;
    }
    let m = CMat::from_rows(rows)?;
    let mut e_last = vec![ZERO; d];
    e_last[d - 1] = ONE;
    let w = m.lu()?.solve(&e_last)?;

    let mut t = CMat::zeros(d, d);
    let mut col = w;
    for k in 0..d {
        for r in 0..d {
            t[(r, k)] = col[r];
        }
        col = p.a.matvec(&col);
    }

    let a = charpoly_tail(&p.a);
    let c = charpoly_tail(&p.a_minus_b());
    let b: Vec<Complex64> = a.iter().zip(&c).map(|(x, y)| x - y).collect();
    Ok((t, a, b, c))
}

/// Coefficients `a_1..a_d` of `det(tI - M) = t^d - sum_i a_i t^{i-1}`.
fn charpoly_tail(m: &CMat) -> Vec<Complex64> {
    let p = m.charpoly();
    p[..p.len() - 1].iter().map(|c| -c).collect()
}

/// Companion-form realization of given spectra for the problem family:
/// `A` is the bottom-row companion matrix of `prod_i (t - lambda_i)`,
/// `v` the last basis vector, and `phi` read off from the coefficient
/// difference with `prod_j (t - (mu_j - alpha))`; `beta` is forced by the
/// trace identity `sum lambda - sum mu = beta - d alpha`. The resulting
/// problem has the prescribed eigenvalues at 0 and infinity.
pub fn companion_problem(
    lambda: &[Complex64],
    mu: &[Complex64],
    alpha: Complex64,
) -> Result<TransportProblem> {
    let d = lambda.len();
    if d == 0 || mu.len() != d {
        return Err(Error::RankMismatch { expected: d.max(1), found: mu.len() });
    }
    let sum_l: Complex64 = lambda.iter().sum();
    let sum_m: Complex64 = mu.iter().sum();
    let beta = sum_l - sum_m + Complex64::new(d as f64, 0.0) * alpha;
    if beta.norm() < 1e-12 {
        return Err(Error::Domain(
            "trace identity forces beta = 0; the rank-one part would vanish".into(),
        ));
    }
    // t^d - sum a_i t^{i-1} = prod (t - lambda_i)
    let pa = poly_from_roots(lambda);
    let shifted: Vec<Complex64> = mu.iter().map(|&m| m - alpha).collect();
    let pc = poly_from_roots(&shifted);
    let a_tail: Vec<Complex64> = pa[..d].iter().map(|c| -c).collect();
    let c_tail: Vec<Complex64> = pc[..d].iter().map(|c| -c).collect();

    let mut phi: Vec<Complex64> = a_tail.iter().zip(&c_tail).map(|(x, y)| (x - y) / beta).collect();
    phi[d - 1] = ONE; // exact by the trace identity

    let a = CMat::from_fn(d, d, |r, c| {
        if r + 1 < d {
            if c == r + 1 {
                ONE
            } else {
                ZERO
            }
        } else {
            a_tail[c]
        }
    });
    let mut v = vec![ZERO; d];
    v[d - 1] = ONE;
    TransportProblem::new(a, v, phi, alpha, beta)
}

/// Conjugate a problem by an invertible matrix:
/// `(A, v, phi) -> (S A S^{-1}, S v, phi S^{-1})`. Transport matrices are
/// invariant under this change of basis.
pub fn conjugate_problem(p: &TransportProblem, s: &CMat) -> Result<TransportProblem> {
    let d = p.dim();
    if s.nrows() != d || s.ncols() != d {
        return Err(Error::RankMismatch { expected: d, found: s.nrows() });
    }
    let s_inv = s.inverse()?;
    let a = s.matmul(&p.a).matmul(&s_inv);
    let v = s.matvec(&p.v);
    let mut phi = vec![ZERO; d];
    for c in 0..d {
        for r in 0..d {
            phi[c] += p.phi[r] * s_inv[(r, c)];
        }
    }
    TransportProblem::new(a, v, phi, p.alpha, p.beta)
}

/// Iterated Euler integral for the projected top solution of the pure
/// rank-one family with real strictly decreasing exponents:
///
/// `phi(f_1(z)) = (1 - z) z^{lambda_1} K
///    int ... int (1 - z t_2...t_d)^{mu_1 - lambda_1 - 1}
///    prod_{j>=2} t_j^{lambda_1 - mu_j} (1 - t_j)^{mu_j - lambda_j - 1} dt_j`
///
/// with `K = prod_{j>=2} Gamma(lambda_1 - lambda_j + 1) /
/// [Gamma(lambda_1 - mu_j + 1) Gamma(mu_j - lambda_j)]`, valid for
/// `lambda_1 < mu_j < lambda_1 + 1` and `mu_j > lambda_j`. The integral
/// is evaluated by tensored Gauss quadrature with the singular factors
/// absorbed into the weight; `quad_n` is the number of nodes per axis.
pub fn euler_projected(
    lambda: &[f64],
    mu: &[f64],
    z: Complex64,
    quad_n: usize,
) -> Result<Complex64> {
    let d = lambda.len();
    if d == 0 || mu.len() != d {
        return Err(Error::RankMismatch { expected: d.max(1), found: mu.len() });
    }
    for w in lambda.windows(2) {
        if w[0] <= w[1] {
            return Err(Error::Domain("exponents at 0 must be strictly decreasing".into()));
        }
    }
    for w in mu.windows(2) {
        if w[0] <= w[1] {
            return Err(Error::Domain("exponents at infinity must be strictly decreasing".into()));
        }
    }
    for j in 1..d {
        if !(mu[j] > lambda[0] && mu[j] < lambda[0] + 1.0) {
            return Err(Error::Domain(format!(
                "mu[{j}] = {} must lie in (lambda_1, lambda_1 + 1) = ({}, {})",
                mu[j],
                lambda[0],
                lambda[0] + 1.0
            )));
        }
        if mu[j] <= lambda[j] {
            return Err(Error::Domain(format!(
                "mu[{j}] = {} must exceed lambda[{j}] = {}",
                mu[j], lambda[j]
            )));
        }
    }
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::Domain("evaluation point must avoid the nonnegative real axis".into()));
    }
    let l1 = Complex64::new(lambda[0], 0.0);
    let branch = pow_positive_cut(z, l1)?;
    let outer_pow = Complex64::new(mu[0] - lambda[0] - 1.0, 0.0);
    if d == 1 {
        // no integrals: phi(f_1) = z^lambda (1 - z)^{mu - lambda}
        return Ok(branch * (ONE - z).powc(Complex64::new(mu[0] - lambda[0], 0.0)));
    }

    let mut rules = Vec::with_capacity(d - 1);
    let mut k = ONE;
    for j in 1..d {
        let aj = lambda[0] - mu[j];
        let bj = mu[j] - lambda[j] - 1.0;
        rules.push(gauss_jacobi(quad_n, aj, bj)?);
        k *= cgamma(Complex64::new(lambda[0] - lambda[j] + 1.0, 0.0))
            * recip_gamma(Complex64::new(lambda[0] - mu[j] + 1.0, 0.0))
            * recip_gamma(Complex64::new(mu[j] - lambda[j], 0.0));
    }

    // tensored quadrature over the (d-1)-cube
    let mut index = vec![0usize; d - 1];
    let mut total = ZERO;
    loop {
        let mut weight = 1.0f64;
        let mut t_prod = 1.0f64;
        for (axis, &i) in index.iter().enumerate() {
            let (nodes, weights) = &rules[axis];
            weight *= weights[i];
            t_prod *= nodes[i];
        }
        total += Complex64::new(weight, 0.0) * (ONE - z * t_prod).powc(outer_pow);
        // odometer increment
        let mut axis = 0;
        loop {
            index[axis] += 1;
            if index[axis] < quad_n {
                break;
            }
            index[axis] = 0;
            axis += 1;
            if axis == d - 1 {
                return Ok((ONE - z) * branch * k * total);
            }
        }
    }
}

/// Seeded random problem in general position: eigenvalues drawn in a box
/// with pairwise and integer-offset separation at least 0.05, `alpha`
/// zero half the time, `beta` forced by the trace identity, realized in
/// companion form and conjugated by a random well-conditioned basis
/// change. The result always passes [`TransportProblem::validate`].
pub fn random_problem(dim: usize, seed: u64) -> Result<TransportProblem> {
    if dim == 0 || dim > 8 {
        return Err(Error::InvalidArgument(format!("dimension {dim} out of range 1..=8")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const SEP: f64 = 0.05;
    for _attempt in 0..500 {
        let alpha = if rng.gen_bool(0.5) {
            ZERO
        } else {
            Complex64::new(rng.gen_range(-0.25..0.25), rng.gen_range(-0.15..0.15))
        };
        let lambda = match draw_spectrum(&mut rng, dim, &[], alpha, SEP) {
            Some(l) => l,
            None => continue,
        };
        let mu = match draw_spectrum(&mut rng, dim, &lambda, alpha, SEP) {
            Some(m) => m,
            None => continue,
        };
        let sum_l: Complex64 = lambda.iter().sum();
        let sum_m: Complex64 = mu.iter().sum();
        let beta = sum_l - sum_m + Complex64::new(dim as f64, 0.0) * alpha;
        if beta.norm() < SEP {
            continue;
        }
        let base = match companion_problem(&lambda, &mu, alpha) {
            Ok(p) => p,
            Err(_) => continue,
        };
        // random well-conditioned change of basis
        let s = loop {
            let cand = CMat::from_fn(dim, dim, |r, c| {
                let diag = if r == c { ONE } else { ZERO };
                diag + Complex64::new(
                    0.3 * rng.gen_range(-1.0..1.0),
                    0.3 * rng.gen_range(-1.0..1.0),
                )
            });
            if cand.cond_inf().map(|k| k < 50.0).unwrap_or(false) {
                break cand;
            }
        };
        let problem = match conjugate_problem(&base, &s) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if problem.validate().ok {
            return Ok(problem);
        }
    }
    Err(Error::Internal(format!(
        "no valid random problem of dimension {dim} found for seed {seed}"
    )))
}

/// Draw one spectrum with pairwise separation, distance from nonzero
/// integer offsets of its own members, and (for the second spectrum)
/// distance of `x - other + alpha` from {-1, 0, 1} so that no transport
/// entry degenerates.
fn draw_spectrum(
    rng: &mut ChaCha8Rng,
    dim: usize,
    other: &[Complex64],
    alpha: Complex64,
    sep: f64,
) -> Option<Vec<Complex64>> {
    let mut out: Vec<Complex64> = Vec::with_capacity(dim);
    'outer: for _ in 0..200 {
        if out.len() == dim {
            break;
        }
        let cand = Complex64::new(rng.gen_range(-0.45..0.45), rng.gen_range(-0.3..0.3));
        for &prev in &out {
            let d = cand - prev;
            if d.norm() < sep
                || (d - ONE).norm() < sep
                || (d + ONE).norm() < sep
            {
                continue 'outer;
            }
        }
        for &o in other {
            let d = o - cand + alpha; // lambda - mu + alpha
            for m in [-1.0, 0.0, 1.0] {
                if (d - Complex64::new(m, 0.0)).norm() < sep {
                    continue 'outer;
                }
            }
        }
        out.push(cand);
    }
    if out.len() == dim {
        Some(out)
    } else {
        None
    }
}
