//! Small dense complex matrices: LU with partial pivoting (determinants,
//! solves, inverses) and an eigensolver for dimensions up to 16 via the
//! characteristic polynomial plus inverse iteration.

use crate::error::{Error, Result};
use crate::numerics::poly::poly_roots;
use num_complex::Complex64;
use std::ops::{Index, IndexMut};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidArgument("matrix must be nonempty".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(CMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// self + s*I
    pub fn add_scalar_diag(&self, s: Complex64) -> CMat {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] += s;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Max row sum of absolute values (operator infinity norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Rank-one outer product `v phi^T`.
    pub fn outer(v: &[Complex64], phi: &[Complex64]) -> CMat {
        CMat::from_fn(v.len(), phi.len(), |i, j| v[i] * phi[j])
    }

    pub fn lu(&self) -> Result<Lu> {
        Lu::decompose(self)
    }

    pub fn det(&self) -> Result<Complex64> {
        Ok(self.lu()?.det())
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        self.lu()?.solve(b)
    }

    pub fn inverse(&self) -> Result<CMat> {
        let lu = self.lu()?;
        let n = self.rows;
        let mut inv = CMat::zeros(n, n);
        for j in 0..n {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            let col = lu.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    /// Infinity-norm condition estimate `|A|_inf * |A^-1|_inf`.
    pub fn cond_inf(&self) -> Result<f64> {
        Ok(self.norm_inf() * self.inverse()?.norm_inf())
    }

    /// Coefficients of det(tI - A), ascending: `c[0] + c[1] t + ... + t^n`.
    /// Faddeev-LeVerrier; adequate for the small dimensions used here.
    pub fn charpoly(&self) -> Vec<Complex64> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = ONE;
        let mut m = CMat::identity(n);
        for k in 1..=n {
            m = self.matmul(&m);
            let c = -m.trace() / k as f64;
            coeffs[n - k] = c;
            m = m.add_scalar_diag(c);
        }
        coeffs
    }

    /// Eigenvalues via characteristic polynomial roots, Newton-polished.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        let coeffs = self.charpoly();
        let mut roots = poly_roots(&coeffs)?;
        for r in roots.iter_mut() {
            for _ in 0..2 {
                let (p, dp) = eval_poly_and_derivative(&coeffs, *r);
                if dp.norm() > 0.0 {
                    let step = p / dp;
                    if step.norm() < 0.5 * (1.0 + r.norm()) {
                        *r -= step;
                    }
                }
            }
        }
        Ok(roots)
    }

    /// Full eigendecomposition for matrices with well-separated spectra.
    /// Errors with `DegenerateSpectrum` when the minimal eigenvalue gap is
    /// below `1e-8 * |M|_inf`, and `Numerical` when an eigenpair residual
    /// exceeds `1e-8 * |M|_inf`.
    pub fn eigen(&self) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
        assert!(self.is_square());
        let n = self.rows;
        if n > 16 {
            return Err(Error::InvalidArgument(format!("eigen supports dim <= 16, got {n}")));
        }
        let scale = self.norm_inf().max(1e-300);
        let values = self.eigenvalues()?;
        let mut min_gap = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                min_gap = min_gap.min((values[i] - values[j]).norm());
            }
        }
        if n > 1 && min_gap < 1e-8 * scale {
            return Err(Error::DegenerateSpectrum { gap: min_gap, threshold: 1e-8 * scale });
        }
        let mut vectors = Vec::with_capacity(n);
        for &lambda in &values {
            let v = self.inverse_iteration(lambda, scale)?;
            let resid = {
                let av = self.matvec(&v);
                av.iter().zip(&v).map(|(a, b)| (a - lambda * b).norm()).fold(0.0, f64::max)
            };
            if resid > 1e-8 * scale {
                // A residual this bad on a tight root cluster is the
                // signature of a genuinely repeated eigenvalue that the
                // characteristic polynomial cannot resolve in f64.
                if min_gap < 1e-4 * scale {
                    return Err(Error::DegenerateSpectrum {
                        gap: min_gap,
                        threshold: 1e-4 * scale,
                    });
                }
                return Err(Error::Numerical(format!(
                    "eigenvector residual {resid:.3e} exceeds {:.3e} at eigenvalue {lambda}",
                    1e-8 * scale
                )));
            }
            vectors.push(v);
        }
        Ok((values, vectors))
    }

    fn inverse_iteration(&self, lambda: Complex64, scale: f64) -> Result<Vec<Complex64>> {
        let n = self.rows;
        // Shift slightly off the eigenvalue so the LU stays regular.
        let eps = 1e-12 * scale;
        let shifted = self.add_scalar_diag(-(lambda + Complex64::new(eps, eps)));
        let lu = shifted.lu_with_pivot_floor(1e-300)?;
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0 + 0.01 * i as f64, 0.3 - 0.02 * i as f64))
            .collect();
        normalize(&mut v);
        let mut best = v.clone();
        let mut best_resid = f64::INFINITY;
        for _ in 0..8 {
            let mut w = lu.solve(&v)?;
            normalize(&mut w);
            let av = self.matvec(&w);
            let resid =
                av.iter().zip(&w).map(|(a, b)| (a - lambda * b).norm()).fold(0.0, f64::max);
            if resid < best_resid {
                best_resid = resid;
                best = w.clone();
            }
            if resid <= 1e-13 * scale {
                break;
            }
            v = w;
        }
        Ok(best)
    }

    /// LU that never errors on exact singularity: zero pivots are replaced by
    /// `floor` so inverse iteration can proceed.
    fn lu_with_pivot_floor(&self, floor: f64) -> Result<Lu> {
        let mut lu = Lu::decompose_raw(self);
        for i in 0..self.rows {
            if lu.lu[(i, i)].norm() < floor {
                lu.lu[(i, i)] = Complex64::new(floor, 0.0);
            }
        }
        Ok(lu)
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting.
pub struct Lu {
    lu: CMat,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    fn decompose_raw(a: &CMat) -> Lu {
        assert!(a.is_square());
        let n = a.nrows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let mut p = k;
            let mut pmax = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > pmax {
                    pmax = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let piv = lu[(k, k)];
            if piv == ZERO {
                continue;
            }
            for i in k + 1..n {
                let m = lu[(i, k)] / piv;
                lu[(i, k)] = m;
                for j in k + 1..n {
                    let s = m * lu[(k, j)];
                    lu[(i, j)] -= s;
                }
            }
        }
        Lu { lu, perm, swaps }
    }

    pub fn decompose(a: &CMat) -> Result<Lu> {
        let lu = Lu::decompose_raw(a);
        Ok(lu)
    }

    pub fn det(&self) -> Complex64 {
        let n = self.lu.nrows();
        let mut d = if self.swaps.is_multiple_of(2) { ONE } else { -ONE };
        for i in 0..n {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.lu.nrows();
        assert_eq!(b.len(), n);
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let s = self.lu[(i, j)] * y[j];
                y[i] -= s;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let s = self.lu[(i, j)] * y[j];
                y[i] -= s;
            }
            let piv = self.lu[(i, i)];
            if piv == ZERO {
                return Err(Error::Numerical("singular matrix in LU solve".into()));
            }
            y[i] /= piv;
        }
        Ok(y)
    }
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Evaluate `p` (ascending coefficients) and its derivative at `z`.
pub fn eval_poly_and_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}
