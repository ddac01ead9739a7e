//! Braiding coefficients of the level-restricted theory: exchange of a
//! vector (or dual-vector) insertion across a channel decomposition is
//! governed by transport matrices of the rank-one family with exactly
//! rational exponents built from Casimir values. Four cases occur:
//!
//! * `A` — vector against dual vector around a middle signature `g`:
//!   in-channels remove one box from `g` (with wraparound), out-channels
//!   add one;
//! * `B` — vector against vector between a bottom `f` and a top `h` two
//!   boxes above, with two intermediate channels;
//! * `C` — the one-dimensional (abelian) vector–dual configuration on two
//!   distinct upper covers of `f`;
//! * `D` — the one-dimensional vector–vector configuration, both boxes in
//!   the same row or the same column.
//!
//! All exponents are exact `Ratio<i64>` values; Gamma-function arguments
//! that land on poles do so exactly, making forbidden-channel matrix
//! entries bit-exact zeros.

use crate::error::{Error, Result};
use crate::numerics::gamma::{cgamma, recip_gamma};
use crate::numerics::linalg::CMat;
use crate::repcore::{add_boxes, casimir_delta, lower_covers_su, LevelContext, Signature};
use crate::transport::{companion_problem, transport_numeric_with, TransportProblem};
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Signed;
use std::collections::BTreeSet;
use std::f64::consts::PI;

/// Entries on permissible-by-permissible channel pairs must exceed this
/// modulus; the vanishing sweep reports any that do not.
pub const PERMISSIBLE_CHANNEL_MIN_MODULUS: f64 = 1e-10;

const ONE_C: Complex64 = Complex64::new(1.0, 0.0);

/// The four channel configurations. Signatures are stored shifted so the
/// bottom signature of each configuration is normalized; all derived
/// quantities are shift-invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BraidCase {
    /// Vector against dual vector around the middle signature `g`.
    A { g: Signature },
    /// Vector against vector from `f` up to `h`, `|h| = |f| + 2`, with
    /// exactly two intermediate channels.
    B { f: Signature, h: Signature },
    /// Abelian vector–dual data: `f` with two distinct upper covers.
    C { f: Signature, g: Signature, g1: Signature },
    /// Abelian vector–vector data: `f` up to `h` with exactly one
    /// intermediate (same-row or same-column box pair).
    D { f: Signature, h: Signature },
}

/// A braiding configuration at a fixed rank and level.
#[derive(Clone, Debug)]
pub struct BraidContext {
    pub level: LevelContext,
    pub case: BraidCase,
}

/// Exact exchange data: channel lists with permissibility flags, the
/// exponents at 0 (`lambdas`, one per in-channel) and at infinity
/// (`mus`, one per out-channel), the scalars of the rank-one family, and
/// the anomaly exponent for every channel pair.
#[derive(Clone, Debug)]
pub struct KzParameters {
    pub channels_in: Vec<Signature>,
    pub channels_out: Vec<Signature>,
    pub in_permissible: Vec<bool>,
    pub out_permissible: Vec<bool>,
    pub lambdas: Vec<Ratio<i64>>,
    pub mus: Vec<Ratio<i64>>,
    pub alpha: Ratio<i64>,
    pub beta: Ratio<i64>,
    pub anomalies: Vec<Vec<Ratio<i64>>>,
}

/// Braiding matrix over channel pairs. For rows whose in-channel is
/// permissible, an entry is exactly zero precisely when the out-channel
/// is non-permissible; rows attached to non-permissible in-channels
/// carry nonzero entries and are excluded from that dichotomy.
#[derive(Clone, Debug)]
pub struct BraidCoefficients {
    pub channels_in: Vec<Signature>,
    pub channels_out: Vec<Signature>,
    pub in_permissible: Vec<bool>,
    pub out_permissible: Vec<bool>,
    pub matrix: CMat,
    pub anomalies: Vec<Vec<Ratio<i64>>>,
}

/// Outcome of the exhaustive vanishing sweep at one rank and level.
#[derive(Clone, Debug)]
pub struct VanishingReport {
    pub contexts_checked: usize,
    pub entries_checked: usize,
    pub zero_entries: usize,
    pub counterexamples: Vec<String>,
}

impl BraidContext {
    pub fn new(level: LevelContext, case: BraidCase) -> Result<Self> {
        let case = match case {
            BraidCase::A { g } => {
                level.assert_permissible(&g)?;
                BraidCase::A { g: g.normalize() }
            }
            BraidCase::B { f, h } => {
                let (f, h) = shift_pair(&level, &f, &h, 2)?;
                let inter = intermediates(&f, &h)?;
                match inter.len() {
                    2 => BraidCase::B { f, h },
                    1 => {
                        return Err(Error::InvalidArgument(
                            "single intermediate channel: use case D".into(),
                        ))
                    }
                    k => {
                        return Err(Error::InvalidArgument(format!(
                            "expected 2 intermediate channels, found {k}"
                        )))
                    }
                }
            }
            BraidCase::C { f, g, g1 } => {
                level.check_rank(&g)?;
                level.check_rank(&g1)?;
                if g == g1 {
                    return Err(Error::InvalidArgument(
                        "the two upper covers must be distinct".into(),
                    ));
                }
                let shift = f.entries()[f.rank() - 1];
                let f0 = f.normalize();
                let g0 = g.shifted(-shift);
                let g10 = g1.shifted(-shift);
                for (name, s) in [("first cover", &g0), ("second cover", &g10)] {
                    if !add_boxes(&f0, 1)?.contains(s) {
                        return Err(Error::InvalidArgument(format!(
                            "{name} {s} is not an upper cover of {f0}"
                        )));
                    }
                }
                let h = join_covers(&f0, &g0, &g10)?;
                for s in [&f0, &g0, &g10, &h] {
                    level.assert_permissible(s)?;
                }
                BraidCase::C { f: f0, g: g0, g1: g10 }
            }
            BraidCase::D { f, h } => {
                let (f, h) = shift_pair(&level, &f, &h, 2)?;
                let inter = intermediates(&f, &h)?;
                if inter.len() != 1 {
                    return Err(Error::InvalidArgument(format!(
                        "expected a single intermediate channel, found {}",
                        inter.len()
                    )));
                }
                BraidCase::D { f, h }
            }
        };
        Ok(BraidContext { level, case })
    }
}

/// Normalize `f`, apply the same shift to `h`, and require both
/// permissible with `|h| - |f|` equal to `boxes`.
fn shift_pair(
    level: &LevelContext,
    f: &Signature,
    h: &Signature,
    boxes: i64,
) -> Result<(Signature, Signature)> {
    level.check_rank(f)?;
    level.check_rank(h)?;
    let shift = f.entries()[f.rank() - 1];
    let f0 = f.normalize();
    let h0 = h.shifted(-shift);
    if h0.entries().iter().any(|&x| x < 0) || h0.size() - f0.size() != boxes {
        return Err(Error::InvalidArgument(format!(
            "top signature must sit {boxes} boxes above the bottom one"
        )));
    }
    level.assert_permissible(&f0)?;
    level.assert_permissible(&h0)?;
    Ok((f0, h0))
}

/// Channels strictly between `f` and `h` (one box added, one below `h`).
fn intermediates(f: &Signature, h: &Signature) -> Result<Vec<Signature>> {
    Ok(add_boxes(f, 1)?.into_iter().filter(|g| g.le_componentwise(h)).collect())
}

/// The union of two distinct upper covers of `f`: add both boxes.
fn join_covers(f: &Signature, g: &Signature, g1: &Signature) -> Result<Signature> {
    let entries: Vec<i64> = f
        .entries()
        .iter()
        .zip(g.entries().iter().zip(g1.entries()))
        .map(|(&fe, (&ge, &g1e))| fe + (ge - fe) + (g1e - fe))
        .collect();
    Signature::new(entries)
}

/// Casimir value of the vector representation (one box) at rank `n`:
/// `n - 1/n`; the dual vector has the same value.
fn delta_box(n: usize) -> Ratio<i64> {
    let n = n as i64;
    Ratio::new(n * n - 1, n)
}

/// The same-row / same-column exponents `nu_+ = (n-1)/(n kappa)` and
/// `nu_- = (-n-1)/(n kappa)` of the abelian vector–vector exchange.
pub fn nu_exponents(level: &LevelContext) -> (Ratio<i64>, Ratio<i64>) {
    let n = level.n() as i64;
    let kappa = level.kappa();
    (Ratio::new(n - 1, n * kappa), Ratio::new(-n - 1, n * kappa))
}

/// Exact exchange parameters for a braiding configuration.
pub fn kz_parameters(bc: &BraidContext) -> Result<KzParameters> {
    let level = &bc.level;
    let n = level.n() as i64;
    let kappa = level.kappa();
    let half = Ratio::new(1, 2 * kappa);
    let dbox = delta_box(level.n());

    let (channels_in, channels_out, lambdas, mus, alpha, beta, anomalies) = match &bc.case {
        BraidCase::A { g } => {
            let dg = casimir_delta(g);
            let channels_in = lower_covers_su(g)?;
            let channels_out = add_boxes(g, 1)?;
            let lambdas: Vec<Ratio<i64>> =
                channels_in.iter().map(|f| (casimir_delta(f) - dbox - dg) * half).collect();
            let mus: Vec<Ratio<i64>> =
                channels_out.iter().map(|h| (dg - casimir_delta(h) - dbox) * half).collect();
            let alpha = Ratio::new(1, n * kappa);
            let beta = Ratio::new(n, kappa);
            let anomalies: Vec<Vec<Ratio<i64>>> = channels_in
                .iter()
                .map(|f| {
                    let df = casimir_delta(f);
                    channels_out
                        .iter()
                        .map(|h| (dg + dg - df - casimir_delta(h)) * half)
                        .collect()
                })
                .collect();
            (channels_in, channels_out, lambdas, mus, alpha, beta, anomalies)
        }
        BraidCase::B { f, h } => {
            let df = casimir_delta(f);
            let dh = casimir_delta(h);
            let inter = intermediates(f, h)?;
            let lambdas: Vec<Ratio<i64>> =
                inter.iter().map(|g| (casimir_delta(g) - df - dbox) * half).collect();
            let mus: Vec<Ratio<i64>> =
                inter.iter().map(|g| (dh - casimir_delta(g) - dbox) * half).collect();
            let alpha = Ratio::new(n - 1, n * kappa);
            let beta = Ratio::new(2, kappa);
            let anomalies: Vec<Vec<Ratio<i64>>> = inter
                .iter()
                .map(|g| {
                    let dg = casimir_delta(g);
                    inter.iter().map(|g1| (dh + df - dg - casimir_delta(g1)) * half).collect()
                })
                .collect();
            (inter.clone(), inter, lambdas, mus, alpha, beta, anomalies)
        }
        BraidCase::C { f, g, g1 } => {
            let h = join_covers(f, g, g1)?;
            let df = casimir_delta(f);
            let dg = casimir_delta(g);
            let dg1 = casimir_delta(g1);
            let dh = casimir_delta(&h);
            let lambda = (df - dbox - dg1) * half;
            let mu = (dg - dbox - dh) * half;
            let alpha = Ratio::new(1, n * kappa);
            // one-dimensional channel space: the rank-one strength is
            // whatever the trace identity leaves, here always zero
            let beta = lambda - mu + alpha;
            let anomalies = vec![vec![(dg + dg1 - df - dh) * half]];
            (vec![g.clone()], vec![g1.clone()], vec![lambda], vec![mu], alpha, beta, anomalies)
        }
        BraidCase::D { f, h } => {
            let inter = intermediates(f, h)?;
            let g = inter[0].clone();
            let df = casimir_delta(f);
            let dg = casimir_delta(&g);
            let dh = casimir_delta(h);
            let lambda = (dg - df - dbox) * half;
            let mu = (dh - dg - dbox) * half;
            let alpha = Ratio::new(n - 1, n * kappa);
            let beta = lambda - mu + alpha;
            let anomalies = vec![vec![(df + dh - dg - dg) * half]];
            (vec![g.clone()], vec![g], vec![lambda], vec![mu], alpha, beta, anomalies)
        }
    };

    let in_permissible =
        channels_in.iter().map(|s| level.is_permissible(s)).collect::<Result<Vec<bool>>>()?;
    let out_permissible =
        channels_out.iter().map(|s| level.is_permissible(s)).collect::<Result<Vec<bool>>>()?;
    Ok(KzParameters {
        channels_in,
        channels_out,
        in_permissible,
        out_permissible,
        lambdas,
        mus,
        alpha,
        beta,
        anomalies,
    })
}

fn ratio_to_c(r: Ratio<i64>) -> Complex64 {
    Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0)
}

/// Braiding matrix from the closed transport formula evaluated on exact
/// rational arguments. Denominator Gamma factors go through the
/// reciprocal with pole snapping, so a forbidden channel produces a
/// bit-exact zero entry.
pub fn braid_matrix(bc: &BraidContext) -> Result<BraidCoefficients> {
    let p = kz_parameters(bc)?;
    let d = p.lambdas.len();
    debug_assert_eq!(d, p.mus.len());
    let one = Ratio::new(1, 1);
    let mut matrix = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut c = (Complex64::i() * PI * ratio_to_c(p.lambdas[i] - p.mus[j])).exp();
            for k in 0..d {
                if k != i {
                    c *= cgamma(ratio_to_c(p.lambdas[i] - p.lambdas[k] + one));
                    c *= recip_gamma(ratio_to_c(p.mus[j] - p.lambdas[k] - p.alpha));
                }
            }
            for l in 0..d {
                if l != j {
                    c *= cgamma(ratio_to_c(p.mus[j] - p.mus[l]));
                    c *= recip_gamma(ratio_to_c(p.lambdas[i] - p.mus[l] + p.alpha + one));
                }
            }
            matrix[(i, j)] = c;
        }
    }
    Ok(BraidCoefficients {
        channels_in: p.channels_in,
        channels_out: p.channels_out,
        in_permissible: p.in_permissible,
        out_permissible: p.out_permissible,
        matrix,
        anomalies: p.anomalies,
    })
}

/// The single coefficient of a one-dimensional configuration. Case `D`
/// returns the exchange constant `e^{i pi nu}` with `nu = nu_+` when both
/// boxes land in the same row and `nu = nu_-` in the same column; case
/// `C` returns the scalar transport phase `e^{i pi (lambda - mu)}`. Both
/// have modulus one. The scalar transport machinery, which continues
/// through the lower half-plane, realizes the case-`D` constant as its
/// complex conjugate; [`braid_matrix`] reflects that orientation.
pub fn abelian_coefficients(bc: &BraidContext) -> Result<Complex64> {
    match &bc.case {
        BraidCase::C { .. } => {
            let p = kz_parameters(bc)?;
            let t = ratio_to_c(p.lambdas[0] - p.mus[0]);
            Ok((Complex64::i() * PI * t).exp())
        }
        BraidCase::D { f, h } => {
            let same_row = h
                .entries()
                .iter()
                .zip(f.entries())
                .any(|(&he, &fe)| he == fe + 2);
            let (nu_plus, nu_minus) = nu_exponents(&bc.level);
            let nu = if same_row { nu_plus } else { nu_minus };
            let p = kz_parameters(bc)?;
            debug_assert_eq!(p.anomalies[0][0], nu);
            Ok((Complex64::i() * PI * ratio_to_c(nu)).exp())
        }
        _ => Err(Error::InvalidArgument(
            "abelian coefficients exist only for the one-dimensional cases C and D".into(),
        )),
    }
}

/// Numerical cross-check of [`braid_matrix`]: realize the exponents as a
/// companion-form problem (the transport matrix depends on the spectra
/// only), continue numerically, and return the matrix permuted into
/// channel order.
pub fn braid_numeric(p: &KzParameters, rtol: f64) -> Result<CMat> {
    let d = p.lambdas.len();
    let lambda: Vec<Complex64> = p.lambdas.iter().map(|&r| ratio_to_c(r)).collect();
    let mu: Vec<Complex64> = p.mus.iter().map(|&r| ratio_to_c(r)).collect();
    let alpha = ratio_to_c(p.alpha);
    let problem = if d == 1 {
        let beta = lambda[0] - mu[0] + alpha;
        TransportProblem::new(
            CMat::from_fn(1, 1, |_, _| lambda[0]),
            vec![ONE_C],
            vec![ONE_C],
            alpha,
            beta,
        )?
    } else {
        companion_problem(&lambda, &mu, alpha)?
    };
    let s = problem.spectral()?;
    let raw = transport_numeric_with(&problem, rtol)?;
    let row_perm = match_indices(&lambda, &s.lambda)?;
    let col_perm = match_indices(&mu, &s.mu)?;
    Ok(CMat::from_fn(d, d, |i, j| raw[(row_perm[i], col_perm[j])]))
}

/// For each target value, the index of the closest source value;
/// must be a bijection.
fn match_indices(targets: &[Complex64], source: &[Complex64]) -> Result<Vec<usize>> {
    let mut used = vec![false; source.len()];
    let mut out = Vec::with_capacity(targets.len());
    for &t in targets {
        let (best, _) = source
            .iter()
            .enumerate()
            .map(|(k, &s)| (k, (s - t).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .ok_or_else(|| Error::Internal("empty spectrum".into()))?;
        if used[best] {
            return Err(Error::Numerical(
                "could not align computed spectrum with exact exponents".into(),
            ));
        }
        used[best] = true;
        out.push(best);
    }
    Ok(out)
}

/// Exhaustive vanishing sweep: every case-`A` configuration around a
/// permissible middle signature and every case-`B` configuration over a
/// permissible bottom/top pair. For each row with a permissible
/// in-channel the entry must be exactly zero precisely when the
/// out-channel is non-permissible, and permissible pairs must stay above
/// [`PERMISSIBLE_CHANNEL_MIN_MODULUS`] in modulus.
pub fn vanishing_report(level: &LevelContext) -> Result<VanishingReport> {
    let mut report = VanishingReport {
        contexts_checked: 0,
        entries_checked: 0,
        zero_entries: 0,
        counterexamples: Vec::new(),
    };
    let sigs = level.enumerate_permissible();

    let audit = |label: String, co: &BraidCoefficients, report: &mut VanishingReport| {
        report.contexts_checked += 1;
        for i in 0..co.channels_in.len() {
            if !co.in_permissible[i] {
                continue;
            }
            for j in 0..co.channels_out.len() {
                report.entries_checked += 1;
                let c = co.matrix[(i, j)];
                let exactly_zero = c.re == 0.0 && c.im == 0.0;
                if exactly_zero {
                    report.zero_entries += 1;
                }
                let want_zero = !co.out_permissible[j];
                if exactly_zero != want_zero {
                    report.counterexamples.push(format!(
                        "{label}: entry {} -> {} is {} but the out-channel is {}",
                        co.channels_in[i],
                        co.channels_out[j],
                        if exactly_zero { "zero" } else { "nonzero" },
                        if want_zero { "non-permissible" } else { "permissible" },
                    ));
                } else if !want_zero && c.norm() <= PERMISSIBLE_CHANNEL_MIN_MODULUS {
                    report.counterexamples.push(format!(
                        "{label}: permissible entry {} -> {} has modulus {:.3e}",
                        co.channels_in[i],
                        co.channels_out[j],
                        c.norm()
                    ));
                }
            }
        }
    };

    for g in &sigs {
        let bc = BraidContext::new(*level, BraidCase::A { g: g.clone() })?;
        let co = braid_matrix(&bc)?;
        audit(format!("around {g}"), &co, &mut report);
    }

    for f in &sigs {
        let mut tops: BTreeSet<Signature> = BTreeSet::new();
        for g in add_boxes(f, 1)? {
            for h in add_boxes(&g, 1)? {
                tops.insert(h);
            }
        }
        for h in tops {
            if !level.is_permissible(&h)? {
                continue;
            }
            if intermediates(f, &h)?.len() != 2 {
                continue;
            }
            let bc =
                BraidContext::new(*level, BraidCase::B { f: f.clone(), h: h.clone() })?;
            let co = braid_matrix(&bc)?;
            audit(format!("{f} up to {h}"), &co, &mut report);
        }
    }
    Ok(report)
}

/// All pairwise exponent differences of a configuration lie strictly
/// between 0 and 1 in absolute value; the largest possible value is
/// `1 - 1/kappa`.
pub fn exponent_separations(p: &KzParameters) -> Vec<Ratio<i64>> {
    let mut out = Vec::new();
    for list in [&p.lambdas, &p.mus] {
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                out.push((list[i] - list[j]).abs());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn sig(v: &[i64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    fn ctx(n: usize, level: i64) -> LevelContext {
        LevelContext::new(n, level).unwrap()
    }

    fn r(num: i64, den: i64) -> Ratio<i64> {
        Ratio::new(num, den)
    }

    #[test]
    fn case_a_frozen_parameters() {
        let bc = BraidContext::new(ctx(2, 2), BraidCase::A { g: sig(&[1, 0]) }).unwrap();
        let p = kz_parameters(&bc).unwrap();
        assert_eq!(p.channels_in, vec![sig(&[0, 0]), sig(&[2, 0])]);
        assert_eq!(p.channels_out, vec![sig(&[1, 1]), sig(&[2, 0])]);
        assert_eq!(p.lambdas, vec![r(-3, 8), r(1, 8)]);
        assert_eq!(p.mus, vec![r(0, 1), r(-1, 2)]);
        assert_eq!(p.alpha, r(1, 8));
        assert_eq!(p.beta, r(1, 2));
        assert!(p.in_permissible.iter().all(|&b| b));
        assert!(p.out_permissible.iter().all(|&b| b));
    }

    #[test]
    fn trace_identity_is_exact() {
        let cases = [
            BraidContext::new(ctx(2, 2), BraidCase::A { g: sig(&[1, 0]) }).unwrap(),
            BraidContext::new(ctx(3, 2), BraidCase::A { g: sig(&[2, 1, 0]) }).unwrap(),
            BraidContext::new(ctx(2, 2), BraidCase::B { f: sig(&[1, 0]), h: sig(&[2, 1]) })
                .unwrap(),
            BraidContext::new(ctx(3, 2), BraidCase::B { f: sig(&[1, 0, 0]), h: sig(&[2, 1, 0]) })
                .unwrap(),
        ];
        for bc in cases {
            let p = kz_parameters(&bc).unwrap();
            let d = p.lambdas.len() as i64;
            let sum_l: Ratio<i64> = p.lambdas.iter().sum();
            let sum_m: Ratio<i64> = p.mus.iter().sum();
            assert_eq!(sum_l - sum_m, p.beta - Ratio::from_integer(d) * p.alpha);
        }
    }

    #[test]
    fn exponent_separation_window() {
        for (n, level) in [(2usize, 2i64), (3, 2), (4, 2)] {
            let lc = ctx(n, level);
            let kappa = lc.kappa();
            for g in lc.enumerate_permissible() {
                let bc = BraidContext::new(lc, BraidCase::A { g }).unwrap();
                let p = kz_parameters(&bc).unwrap();
                for s in exponent_separations(&p) {
                    assert!(s > Ratio::zero(), "coincident exponents");
                    assert!(s <= r(kappa - 1, kappa), "separation {s} exceeds 1 - 1/kappa");
                }
            }
        }
    }

    #[test]
    fn case_b_forbidden_channel_is_bit_exact_zero() {
        let bc =
            BraidContext::new(ctx(2, 1), BraidCase::B { f: sig(&[1, 0]), h: sig(&[2, 1]) })
                .unwrap();
        let co = braid_matrix(&bc).unwrap();
        assert_eq!(co.channels_in, vec![sig(&[1, 1]), sig(&[2, 0])]);
        assert_eq!(co.in_permissible, vec![true, false]);
        let i_ok = 0; // (1,1) is permissible
        let j_bad = 1; // (2,0) exceeds the level
        let z = co.matrix[(i_ok, j_bad)];
        assert!(z.re == 0.0 && z.im == 0.0, "forbidden entry must be exactly zero, got {z}");
        assert!(co.matrix[(i_ok, 0)].norm() > 1e-10);
        // the non-permissible in-row is outside the dichotomy and nonzero
        assert!(co.matrix[(1, 0)].norm() > 1e-10);
        assert!(co.matrix[(1, 1)].norm() > 1e-10);
    }

    #[test]
    fn case_a_all_channels_open() {
        let bc = BraidContext::new(ctx(2, 2), BraidCase::A { g: sig(&[1, 0]) }).unwrap();
        let co = braid_matrix(&bc).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(co.matrix[(i, j)].norm() > 1e-10, "entry ({i},{j}) degenerates");
            }
        }
    }

    #[test]
    fn nu_constants() {
        let (p, m) = nu_exponents(&ctx(2, 1));
        assert_eq!(p, r(1, 6));
        assert_eq!(m, r(-1, 2));
        let (p, m) = nu_exponents(&ctx(3, 1));
        assert_eq!(p, r(1, 6));
        assert_eq!(m, r(-1, 3));
    }

    #[test]
    fn abelian_same_column_example() {
        // two boxes in one column at rank 2, level 1: e^{-i pi / 2} = -i
        let bc =
            BraidContext::new(ctx(2, 1), BraidCase::D { f: sig(&[0, 0]), h: sig(&[1, 1]) })
                .unwrap();
        let delta = abelian_coefficients(&bc).unwrap();
        assert!((delta - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((delta.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn abelian_same_row_example() {
        // two boxes in one row at rank 2, level 2: e^{i pi nu_+}, nu_+ = 1/8
        let bc =
            BraidContext::new(ctx(2, 2), BraidCase::D { f: sig(&[0, 0]), h: sig(&[2, 0]) })
                .unwrap();
        let delta = abelian_coefficients(&bc).unwrap();
        let want = (Complex64::i() * PI / 8.0).exp();
        assert!((delta - want).norm() < 1e-14);
    }

    #[test]
    fn abelian_transport_orientation_is_conjugate() {
        // the 1x1 transport coefficient equals the conjugate of the
        // exchange constant (real exponents)
        for (lc, f, h) in [
            (ctx(2, 1), sig(&[0, 0]), sig(&[1, 1])),
            (ctx(2, 2), sig(&[0, 0]), sig(&[2, 0])),
            (ctx(3, 2), sig(&[1, 1, 0]), sig(&[2, 2, 0])),
        ] {
            let bc = BraidContext::new(lc, BraidCase::D { f, h }).unwrap();
            let delta = abelian_coefficients(&bc).unwrap();
            let co = braid_matrix(&bc).unwrap();
            assert!((co.matrix[(0, 0)] - delta.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn case_c_constant_phase() {
        let lc = ctx(3, 2);
        let bc = BraidContext::new(
            lc,
            BraidCase::C { f: sig(&[1, 1, 0]), g: sig(&[2, 1, 0]), g1: sig(&[1, 1, 1]) },
        )
        .unwrap();
        let p = kz_parameters(&bc).unwrap();
        // the trace identity forces a vanishing rank-one strength, and the
        // anomaly collapses to the constant 1/(n kappa)
        assert_eq!(p.beta, Ratio::zero());
        assert_eq!(p.anomalies[0][0], r(1, 15));
        let eps = abelian_coefficients(&bc).unwrap();
        let want = (-Complex64::i() * PI / 15.0).exp();
        assert!((eps - want).norm() < 1e-14);
    }

    #[test]
    fn numeric_continuation_confirms_case_a_and_b() {
        let cases = [
            BraidContext::new(ctx(2, 2), BraidCase::A { g: sig(&[1, 0]) }).unwrap(),
            BraidContext::new(ctx(2, 2), BraidCase::B { f: sig(&[1, 0]), h: sig(&[2, 1]) })
                .unwrap(),
        ];
        for bc in cases {
            let co = braid_matrix(&bc).unwrap();
            let p = kz_parameters(&bc).unwrap();
            let numeric = braid_numeric(&p, 1e-11).unwrap();
            for i in 0..p.lambdas.len() {
                for j in 0..p.mus.len() {
                    assert!(
                        (co.matrix[(i, j)] - numeric[(i, j)]).norm()
                            < 1e-6 * (1.0 + co.matrix[(i, j)].norm()),
                        "formula/continuation mismatch at ({i},{j}): {} vs {}",
                        co.matrix[(i, j)],
                        numeric[(i, j)]
                    );
                }
            }
        }
    }

    #[test]
    fn vanishing_sweep_is_clean_at_small_levels() {
        for (n, level) in [(2usize, 1i64), (3, 1)] {
            let report = vanishing_report(&ctx(n, level)).unwrap();
            assert!(
                report.counterexamples.is_empty(),
                "rank {n} level {level}: {:?}",
                report.counterexamples
            );
            assert!(report.entries_checked > 0);
        }
    }

    #[test]
    fn context_validation_rejects_malformed_data() {
        // non-permissible middle signature
        assert!(BraidContext::new(ctx(2, 1), BraidCase::A { g: sig(&[2, 0]) }).is_err());
        // case B with a single intermediate redirects to case D
        assert!(matches!(
            BraidContext::new(ctx(2, 2), BraidCase::B { f: sig(&[0, 0]), h: sig(&[1, 1]) }),
            Err(Error::InvalidArgument(_))
        ));
        // case D with two intermediates is rejected
        assert!(BraidContext::new(ctx(2, 2), BraidCase::D { f: sig(&[1, 0]), h: sig(&[2, 1]) })
            .is_err());
        // wrong box count
        assert!(BraidContext::new(ctx(2, 2), BraidCase::B { f: sig(&[0, 0]), h: sig(&[1, 0]) })
            .is_err());
        // abelian coefficient demands an abelian case
        let bc = BraidContext::new(ctx(2, 2), BraidCase::A { g: sig(&[1, 0]) }).unwrap();
        assert!(abelian_coefficients(&bc).is_err());
    }

    #[test]
    fn shifted_inputs_give_the_same_parameters() {
        let a = BraidContext::new(ctx(2, 2), BraidCase::A { g: sig(&[1, 0]) }).unwrap();
        let b = BraidContext::new(ctx(2, 2), BraidCase::A { g: sig(&[4, 3]) }).unwrap();
        let pa = kz_parameters(&a).unwrap();
        let pb = kz_parameters(&b).unwrap();
        assert_eq!(pa.lambdas, pb.lambdas);
        assert_eq!(pa.mus, pb.mus);
        let c = BraidContext::new(ctx(2, 2), BraidCase::D { f: sig(&[3, 3]), h: sig(&[5, 3]) })
            .unwrap();
        let d = BraidContext::new(ctx(2, 2), BraidCase::D { f: sig(&[0, 0]), h: sig(&[2, 0]) })
            .unwrap();
        assert_eq!(
            abelian_coefficients(&c).unwrap(),
            abelian_coefficients(&d).unwrap()
        );
    }
}
