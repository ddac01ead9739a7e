//! Symmetric characters of SU(N): Weyl quotient-of-determinants evaluation,
//! elementary symmetric polynomials, the one-box/k-box branching (Pieri)
//! step, dual Jacobi-Trudi expansion, and classical tensor product
//! decomposition built from those two pieces.

use crate::error::{Error, Result};
use crate::numerics::linalg::CMat;
use crate::repcore::{add_boxes, Signature};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Formal multiplicity combination of signatures. Keys may be unnormalized
/// mid-computation; public constructors require positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorDecomposition {
    terms: BTreeMap<Signature, i64>,
}

impl TensorDecomposition {
    pub fn single(f: Signature) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(f, 1);
        TensorDecomposition { terms }
    }

    pub fn from_terms(terms: BTreeMap<Signature, i64>) -> Result<Self> {
        if terms.values().any(|&m| m <= 0) {
            return Err(Error::InvalidArgument("multiplicities must be positive".into()));
        }
        Ok(TensorDecomposition { terms })
    }

    pub fn terms(&self) -> &BTreeMap<Signature, i64> {
        &self.terms
    }

    pub fn multiplicity(&self, h: &Signature) -> i64 {
        // keys are stored normalized by tensor_decompose; accept raw queries
        *self.terms.get(h).or_else(|| self.terms.get(&h.normalize())).unwrap_or(&0)
    }

    pub fn total_multiplicity(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// One Pieri step: replace every `(f, m)` by `sum_{g in add_boxes(f, k)} (g, m)`.
pub fn pieri(dec: &TensorDecomposition, k: usize) -> Result<TensorDecomposition> {
    let mut out: BTreeMap<Signature, i64> = BTreeMap::new();
    for (f, &m) in dec.terms() {
        for g in add_boxes(f, k)? {
            *out.entry(g).or_insert(0) += m;
        }
    }
    Ok(TensorDecomposition { terms: out })
}

fn pieri_raw(terms: &BTreeMap<Signature, i64>, k: usize) -> Result<BTreeMap<Signature, i64>> {
    let mut out: BTreeMap<Signature, i64> = BTreeMap::new();
    for (f, &m) in terms {
        for g in add_boxes(f, k)? {
            *out.entry(g).or_insert(0) += m;
        }
    }
    Ok(out)
}

/// Character value `X_f(z) = det(z_j^(f_i + N - i)) / det(z_j^(N - i))`,
/// both determinants via LU. Entries of `z` must be pairwise distinct, and
/// nonzero when `f` has negative parts.
pub fn eval_character(f: &Signature, z: &[Complex64]) -> Result<Complex64> {
    let n = f.rank();
    if z.len() != n {
        return Err(Error::RankMismatch { expected: n, found: z.len() });
    }
    for i in 0..n {
        for j in i + 1..n {
            if z[i] == z[j] {
                return Err(Error::Domain(format!(
                    "repeated evaluation point z[{i}] = z[{j}] = {}",
                    z[i]
                )));
            }
        }
    }
    let min_exp = f.entries()[n - 1]; // smallest exponent is f_N + 0
    if min_exp < 0 && z.iter().any(|&zj| zj == Complex64::new(0.0, 0.0)) {
        return Err(Error::Domain("zero evaluation point with negative exponent".into()));
    }
    let num = CMat::from_fn(n, n, |i, j| {
        let e = f.entries()[i] + (n - 1 - i) as i64;
        cpowi(z[j], e)
    });
    let den = CMat::from_fn(n, n, |i, j| cpowi(z[j], (n - 1 - i) as i64));
    let d = den.det()?;
    if d == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("singular Weyl denominator".into()));
    }
    Ok(num.det()? / d)
}

fn cpowi(z: Complex64, e: i64) -> Complex64 {
    if e >= 0 {
        z.powu(e as u32)
    } else {
        Complex64::new(1.0, 0.0) / z.powu((-e) as u32)
    }
}

/// Elementary symmetric polynomial `e_k(z)`, 0 <= k <= len(z), by the
/// product recurrence for prod_j (1 + z_j t).
pub fn eval_elementary(k: usize, z: &[Complex64]) -> Result<Complex64> {
    let n = z.len();
    if k > n {
        return Err(Error::InvalidArgument(format!("e_{k} of {n} variables is out of range")));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (m, &zj) in z.iter().enumerate() {
        for i in (1..=m + 1).rev() {
            let lower = coeffs[i - 1];
            coeffs[i] += zj * lower;
        }
    }
    Ok(coeffs[k])
}

/// Weyl dimension `prod_{i<j} (f_i - f_j + j - i) / (j - i)`, exact.
pub fn dimension(f: &Signature) -> i64 {
    let n = f.rank();
    let e = f.entries();
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..n {
        for j in i + 1..n {
            num *= (e[i] - e[j]) as i128 + (j - i) as i128;
            den *= (j - i) as i128;
            let g = gcd128(num.abs(), den.abs());
            if g > 1 {
                num /= g;
                den /= g;
            }
        }
    }
    debug_assert_eq!(den, 1);
    (num / den) as i64
}

fn gcd128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd128(b, a % b)
    }
}

/// Integer polynomial in the elementary symmetric polynomials e_1..e_N.
/// Each term is (exponent vector over e_1..e_N, coefficient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryPolynomial {
    n: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl ElementaryPolynomial {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, i64> {
        &self.terms
    }

    /// Evaluate at concrete variable values via `eval_elementary`.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        let mut e_vals = Vec::with_capacity(self.n);
        for k in 1..=self.n {
            e_vals.push(eval_elementary(k, z)?);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (exps, &c) in &self.terms {
            let mut t = Complex64::new(c as f64, 0.0);
            for (k, &p) in exps.iter().enumerate() {
                for _ in 0..p {
                    t *= e_vals[k];
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

/// Dual Jacobi-Trudi expansion: the character of a normalized `f` as an
/// integer polynomial in e_1..e_N, via det(e_{f'_i - i + j}) over the
/// conjugate partition f'. Exact polynomial identity in the z variables
/// (e_N is kept as a variable, not set to 1).
pub fn jacobi_trudi_expand(f: &Signature) -> Result<ElementaryPolynomial> {
    if !f.is_normalized() {
        return Err(Error::InvalidArgument(format!(
            "jacobi_trudi_expand needs a normalized signature, got {f}"
        )));
    }
    if f.entries().iter().any(|&x| x < 0) {
        return Err(Error::InvalidArgument("normalized signature must be nonnegative".into()));
    }
    let n = f.rank();
    let m = f.entries()[0] as usize; // number of columns
    let mut terms: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    if m == 0 {
        terms.insert(vec![0; n], 1);
        return Ok(ElementaryPolynomial { n, terms });
    }
    // conjugate partition: f'_j = #{i : f_i >= j}, 1-based j
    let conj: Vec<i64> =
        (1..=m as i64).map(|j| f.entries().iter().filter(|&&fi| fi >= j).count() as i64).collect();

    // expand det over permutations of {0..m-1}
    let mut perm: Vec<usize> = (0..m).collect();
    let mut used = vec![false; m];
    #[allow(clippy::too_many_arguments)] // plain recursion state, local helper
    fn rec(
        row: usize,
        m: usize,
        n: usize,
        conj: &[i64],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sign: i64,
        terms: &mut BTreeMap<Vec<u32>, i64>,
    ) {
        if row == m {
            let mut exp = vec![0u32; n];
            for (i, &c) in perm.iter().enumerate() {
                let k = conj[i] - i as i64 + c as i64; // e-index of entry (i, sigma(i))
                match k {
                    0 => {}
                    x if x > 0 && x <= n as i64 => exp[(x - 1) as usize] += 1,
                    _ => return, // e_k = 0 kills the term
                }
            }
            let entry = terms.entry(exp).or_insert(0);
            *entry += sign;
            return;
        }
        for c in 0..m {
            if used[c] {
                continue;
            }
            // column swap parity relative to identity
            let inversions =
                perm[..row].iter().filter(|&&p| p > c).count() as i64;
            let k = conj[row] - row as i64 + c as i64;
            if k < 0 || k > n as i64 {
                continue; // entry is 0
            }
            used[c] = true;
            perm[row] = c;
            let s = if inversions % 2 == 0 { sign } else { -sign };
            rec(row + 1, m, n, conj, perm, used, s, terms);
            used[c] = false;
        }
    }
    rec(0, m, n, &conj, &mut perm, &mut used, 1, &mut terms);
    terms.retain(|_, &mut c| c != 0);
    Ok(ElementaryPolynomial { n, terms })
}

/// Classical tensor product decomposition `V_f (x) V_g = sum N_{fg}^h V_h`,
/// computed by expanding g in elementary polynomials (dual Jacobi-Trudi)
/// and applying signed iterated Pieri steps to f. Returned keys are
/// normalized; multiplicities are positive. A negative accumulated
/// multiplicity indicates an internal inconsistency and errors.
pub fn tensor_decompose(f: &Signature, g: &Signature) -> Result<TensorDecomposition> {
    if f.rank() != g.rank() {
        return Err(Error::RankMismatch { expected: f.rank(), found: g.rank() });
    }
    let f0 = f.normalize();
    let g0 = g.normalize();
    let ep = jacobi_trudi_expand(&g0)?;
    let mut acc: BTreeMap<Signature, i64> = BTreeMap::new();
    let seed: BTreeMap<Signature, i64> = [(f0, 1i64)].into_iter().collect();
    for (exps, &coeff) in ep.terms() {
        let mut d = seed.clone();
        for (idx, &p) in exps.iter().enumerate() {
            for _ in 0..p {
                d = pieri_raw(&d, idx + 1)?;
            }
        }
        for (h, m) in d {
            *acc.entry(h).or_insert(0) += coeff * m;
        }
    }
    let mut out: BTreeMap<Signature, i64> = BTreeMap::new();
    for (h, m) in acc {
        if m < 0 {
            return Err(Error::Internal(format!(
                "negative multiplicity {m} at {h} in tensor decomposition"
            )));
        }
        if m > 0 {
            *out.entry(h.normalize()).or_insert(0) += m;
        }
    }
    Ok(TensorDecomposition { terms: out })
}
