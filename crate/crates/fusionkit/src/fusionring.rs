//! The level-restricted fusion ring: affine-Weyl folding of classical
//! tensor products, and an independent numeric route through character
//! evaluation at the distinguished diagonal points.

use crate::error::{Error, Result};
use crate::numerics::linalg::CMat;
use crate::repcore::{LevelContext, Signature};
use crate::symchar::{eval_character, tensor_decompose, TensorDecomposition};
use num_complex::Complex64;
use num_rational::Ratio;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Residual gate for the rounded integer solution in [`fuse_numeric`]:
/// the rounded multiplicities must reproduce the character product to
/// this absolute tolerance at every evaluation point.
pub const FUSE_NUMERIC_RESIDUAL_TOL: f64 = 1e-6;

/// Fold `h + delta` into the dominant alcove of width `kappa` under the
/// affine Weyl action. Returns `None` when the shifted point lies on a
/// wall (the term is annihilated), otherwise the sign of the folding
/// element and the normalized folded signature.
///
/// Sorting into descending order contributes the permutation parity; the
/// extremal translation `x_1 -= kappa, x_N += kappa` is applied without
/// the accompanying swap, which re-sorting absorbs with the correct sign.
pub fn weyl_fold(h: &Signature, ctx: &LevelContext) -> Result<Option<(i64, Signature)>> {
    ctx.check_rank(h)?;
    let n = ctx.n();
    let kappa = ctx.kappa();
    let delta = ctx.weyl_vector();
    let mut x: Vec<i64> = h.entries().iter().zip(&delta).map(|(a, b)| a + b).collect();
    let mut sign = 1i64;
    loop {
        // descending sort, parity via inversion count
        let mut inversions = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if x[i] < x[j] {
                    inversions += 1;
                }
            }
        }
        x.sort_unstable_by(|a, b| b.cmp(a));
        if inversions % 2 == 1 {
            sign = -sign;
        }
        if x.windows(2).any(|w| w[0] == w[1]) {
            return Ok(None); // fixed by a finite reflection
        }
        let width = x[0] - x[n - 1];
        if width == kappa {
            return Ok(None); // fixed by the affine reflection
        }
        if width < kappa {
            break;
        }
        x[0] -= kappa;
        x[n - 1] += kappa;
    }
    let folded: Vec<i64> = x.iter().zip(&delta).map(|(a, b)| a - b).collect();
    Ok(Some((sign, Signature::new(folded)?.normalize())))
}

/// Level-restricted fusion product of two permissible signatures, computed
/// by folding the classical tensor decomposition. Output keys are
/// normalized permissible signatures with positive multiplicities.
pub fn fuse(f: &Signature, g: &Signature, ctx: &LevelContext) -> Result<TensorDecomposition> {
    ctx.assert_permissible(f)?;
    ctx.assert_permissible(g)?;
    let classical = tensor_decompose(f, g)?;
    let mut acc: BTreeMap<Signature, i64> = BTreeMap::new();
    for (h, &m) in classical.terms() {
        if let Some((sign, target)) = weyl_fold(h, ctx)? {
            *acc.entry(target).or_insert(0) += sign * m;
        }
    }
    let mut out: BTreeMap<Signature, i64> = BTreeMap::new();
    for (h, m) in acc {
        if m < 0 {
            return Err(Error::Internal(format!(
                "negative fused multiplicity {m} at {h} for {f} x {g}"
            )));
        }
        if m > 0 {
            debug_assert!(ctx.is_permissible(&h).unwrap_or(false));
            out.insert(h, m);
        }
    }
    TensorDecomposition::from_terms(out)
}

/// The distinguished diagonal evaluation points, one per permissible
/// signature in [`LevelContext::enumerate_permissible`] order. Point `h`
/// has entries `exp(2 pi i (N(h_k + N - k) - S) / (N kappa))` with
/// `S = sum_j (h_j + N - j)`; the angles are exact rationals, the entries
/// pairwise distinct, and the product of entries is 1.
pub fn verlinde_points(ctx: &LevelContext) -> Vec<Vec<Complex64>> {
    let n = ctx.n() as i64;
    let kappa = ctx.kappa();
    ctx.enumerate_permissible()
        .iter()
        .map(|h| {
            let s: i64 = h.entries().iter().enumerate().map(|(k, &hk)| hk + n - 1 - k as i64).sum();
            (0..n)
                .map(|k| {
                    let hk = h.entries()[k as usize];
                    let angle = Ratio::new(n * (hk + n - 1 - k) - s, n * kappa);
                    let t = 2.0 * PI * (*angle.numer() as f64) / (*angle.denom() as f64);
                    Complex64::new(t.cos(), t.sin())
                })
                .collect()
        })
        .collect()
}

/// Character values of `f` at every distinguished point, in
/// [`LevelContext::enumerate_permissible`] order.
pub fn theta(f: &Signature, ctx: &LevelContext) -> Result<Vec<Complex64>> {
    ctx.check_rank(f)?;
    verlinde_points(ctx).iter().map(|z| eval_character(f, z)).collect()
}

/// Fusion product computed numerically: solve the square linear system
/// expressing the pointwise character product in the character basis at
/// the distinguished points, round to integers, and gate on the residual
/// of the rounded solution ([`FUSE_NUMERIC_RESIDUAL_TOL`]).
pub fn fuse_numeric(f: &Signature, g: &Signature, ctx: &LevelContext) -> Result<TensorDecomposition> {
    fuse_numeric_with_residual(f, g, ctx).map(|(dec, _)| dec)
}

/// Same as [`fuse_numeric`], also returning the max rounding residual of
/// the integer solution over the evaluation points (always below
/// [`FUSE_NUMERIC_RESIDUAL_TOL`] on success).
pub fn fuse_numeric_with_residual(
    f: &Signature,
    g: &Signature,
    ctx: &LevelContext,
) -> Result<(TensorDecomposition, f64)> {
    ctx.assert_permissible(f)?;
    ctx.assert_permissible(g)?;
    let sigs = ctx.enumerate_permissible();
    let points = verlinde_points(ctx);
    let s = sigs.len();
    let mut mat = CMat::zeros(s, s);
    for (t, z) in points.iter().enumerate() {
        for (j, h) in sigs.iter().enumerate() {
            mat[(t, j)] = eval_character(h, z)?;
        }
    }
    let rhs: Vec<Complex64> = points
        .iter()
        .map(|z| Ok(eval_character(f, z)? * eval_character(g, z)?))
        .collect::<Result<_>>()?;
    let lu = mat.lu()?;
    let c = lu.solve(&rhs)?;
    let rounded: Vec<i64> = c.iter().map(|v| v.re.round() as i64).collect();
    // residual of the rounded integer solution
    let mut residual = 0.0f64;
    for t in 0..s {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..s {
            acc += Complex64::new(rounded[j] as f64, 0.0) * mat[(t, j)];
        }
        residual = residual.max((acc - rhs[t]).norm());
    }
    if residual > FUSE_NUMERIC_RESIDUAL_TOL {
        let cond = mat.cond_inf().unwrap_or(f64::INFINITY);
        return Err(Error::Numerical(format!(
            "rounded fusion coefficients leave residual {residual:.3e} > {FUSE_NUMERIC_RESIDUAL_TOL:.1e} \
             for {f} x {g} (point-matrix condition ~ {cond:.3e})"
        )));
    }
    let mut out: BTreeMap<Signature, i64> = BTreeMap::new();
    for (j, h) in sigs.iter().enumerate() {
        match rounded[j] {
            0 => {}
            m if m > 0 => {
                out.insert(h.clone(), m);
            }
            m => {
                return Err(Error::Numerical(format!(
                    "numeric fusion produced negative multiplicity {m} at {h} for {f} x {g}"
                )));
            }
        }
    }
    Ok((TensorDecomposition::from_terms(out)?, residual))
}

/// Full fusion table over unordered pairs of permissible signatures,
/// keyed `(f, g)` with `f <= g` in signature order.
pub fn fusion_table(
    ctx: &LevelContext,
) -> Result<BTreeMap<(Signature, Signature), TensorDecomposition>> {
    let sigs = ctx.enumerate_permissible();
    let mut out = BTreeMap::new();
    for (i, f) in sigs.iter().enumerate() {
        for g in &sigs[i..] {
            out.insert((f.clone(), g.clone()), fuse(f, g, ctx)?);
        }
    }
    Ok(out)
}

/// Maximum character modulus over all distinguished points for a
/// signature of width exactly `level + 1` (the generators of the kernel
/// of the evaluation map). Such characters vanish identically on the
/// points; the returned value is the numerical witness.
pub fn kernel_residual(f: &Signature, ctx: &LevelContext) -> Result<f64> {
    ctx.check_rank(f)?;
    if f.width() != ctx.level() + 1 {
        return Err(Error::InvalidArgument(format!(
            "kernel witness needs width level+1 = {}, got width {} for {f}",
            ctx.level() + 1,
            f.width()
        )));
    }
    let vals = theta(f, ctx)?;
    Ok(vals.iter().map(|v| v.norm()).fold(0.0, f64::max))
}
