//! Signatures (highest weights) of SU(N) and their level-quantised combinatorics.
//!
//! A signature is a weakly decreasing integer vector `f1 >= f2 >= ... >= fN`.
//! Two signatures differing by a constant vector label the same projective
//! representation; [`Signature::normalize`] picks the representative with
//! `fN = 0`. At level `l` a signature is permissible when `f1 - fN <= l`.

use crate::error::{Error, Result};
use num_rational::Ratio;
use std::fmt;
use std::str::FromStr;

/// Weakly decreasing integer vector. Construction validates monotonicity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Signature(Vec<i64>);

impl Signature {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("signature must be nonempty".into()));
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSignature(entries));
        }
        Ok(Signature(entries))
    }

    /// Trusted constructor for vectors already known to be weakly decreasing.
    pub(crate) fn new_unchecked(entries: Vec<i64>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0] >= w[1]));
        Signature(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Rank N (vector length).
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Number of boxes `|f|` (entry sum).
    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_normalized(&self) -> bool {
        *self.0.last().unwrap() == 0
    }

    /// Representative with last entry 0 (subtract `fN` from every entry).
    pub fn normalize(&self) -> Signature {
        let last = *self.0.last().unwrap();
        Signature(self.0.iter().map(|x| x - last).collect())
    }

    /// Shift every entry by a constant; labels the same projective class.
    pub fn shifted(&self, a: i64) -> Signature {
        Signature(self.0.iter().map(|x| x + a).collect())
    }

    /// Dual representation: negate, reverse, normalize.
    pub fn conjugate(&self) -> Signature {
        let mut v: Vec<i64> = self.0.iter().map(|x| -x).collect();
        v.reverse();
        Signature(v).normalize()
    }

    /// Width `f1 - fN`; permissibility at level `l` is `width <= l`.
    pub fn width(&self) -> i64 {
        self.0[0] - self.0[self.0.len() - 1]
    }

    /// Componentwise `<=` (reachability by adding boxes).
    pub fn le_componentwise(&self, other: &Signature) -> bool {
        self.rank() == other.rank() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad signature component {p:?}")))
            })
            .collect::<Result<Vec<i64>>>()?;
        Signature::new(entries)
    }
}

/// Rank and level of the quantisation: N >= 2, level >= 1, kappa = N + level.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct LevelContext {
    n: usize,
    level: i64,
}

impl LevelContext {
    pub fn new(n: usize, level: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("rank N must be >= 2, got {n}")));
        }
        if level < 1 {
            return Err(Error::InvalidArgument(format!("level must be >= 1, got {level}")));
        }
        Ok(LevelContext { n, level })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    /// The folding modulus `kappa = N + level`.
    pub fn kappa(&self) -> i64 {
        self.n as i64 + self.level
    }

    /// Weyl vector `(N-1, N-2, ..., 1, 0)`.
    pub fn weyl_vector(&self) -> Vec<i64> {
        (0..self.n).map(|i| (self.n - 1 - i) as i64).collect()
    }

    pub fn check_rank(&self, f: &Signature) -> Result<()> {
        if f.rank() != self.n {
            return Err(Error::RankMismatch { expected: self.n, found: f.rank() });
        }
        Ok(())
    }

    pub fn is_permissible(&self, f: &Signature) -> Result<bool> {
        self.check_rank(f)?;
        Ok(f.width() <= self.level)
    }

    pub fn assert_permissible(&self, f: &Signature) -> Result<()> {
        if self.is_permissible(f)? {
            Ok(())
        } else {
            Err(Error::NotPermissible { sig: f.entries().to_vec(), level: self.level })
        }
    }

    /// All normalized permissible signatures, ascending lexicographic order.
    /// There are exactly `C(N + level - 1, N - 1)` of them.
    pub fn enumerate_permissible(&self) -> Vec<Signature> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.n];
        // cur[n-1] stays 0; fill positions n-2 down to 0, each >= the one after it
        fn fill(pos: isize, cur: &mut Vec<i64>, level: i64, out: &mut Vec<Signature>) {
            if pos < 0 {
                out.push(Signature::new_unchecked(cur.clone()));
                return;
            }
            let p = pos as usize;
            let lo = cur[p + 1];
            for v in lo..=level {
                cur[p] = v;
                fill(pos - 1, cur, level, out);
            }
        }
        fill(self.n as isize - 2, &mut cur, self.level, &mut out);
        out.sort();
        out
    }
}

/// All signatures obtained from `f` by adding `k` boxes, no two in the same
/// row. Within a run of equal entries the boxes must go to the topmost rows,
/// so results are produced without duplicates.
pub fn add_boxes(f: &Signature, k: usize) -> Result<Vec<Signature>> {
    let n = f.rank();
    if k > n {
        return Err(Error::InvalidArgument(format!("cannot add {k} boxes across {n} rows")));
    }
    // maximal blocks of equal entries: (start, len)
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let e = f.entries();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && e[j] == e[i] {
            j += 1;
        }
        blocks.push((i, j - i));
        i = j;
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; blocks.len()];
    fn rec(
        b: usize,
        remaining: usize,
        blocks: &[(usize, usize)],
        choice: &mut Vec<usize>,
        e: &[i64],
        out: &mut Vec<Signature>,
    ) {
        if b == blocks.len() {
            if remaining == 0 {
                let mut g = e.to_vec();
                for (bi, &(start, _)) in blocks.iter().enumerate() {
                    for r in 0..choice[bi] {
                        g[start + r] += 1;
                    }
                }
                out.push(Signature::new_unchecked(g));
            }
            return;
        }
        let cap = blocks[b].1.min(remaining);
        for c in 0..=cap {
            choice[b] = c;
            rec(b + 1, remaining - c, blocks, choice, e, out);
        }
        choice[b] = 0;
    }
    rec(0, k, &blocks, &mut choice, e, &mut out);
    out.sort();
    Ok(out)
}

/// `g` covers `f`: g is f with exactly one box added (same rank, raw entries).
pub fn covers(f: &Signature, g: &Signature) -> bool {
    if f.rank() != g.rank() {
        return false;
    }
    let mut ones = 0;
    for (a, b) in f.entries().iter().zip(g.entries()) {
        match b - a {
            0 => {}
            1 => ones += 1,
            _ => return false,
        }
    }
    ones == 1
}

/// Lower covers in the SU(N) sense: remove one box from a normalized `g`,
/// where removing from the last row wraps around to `(g1+1, ..., g_{N-1}+1, 0)`.
/// Always returns as many signatures as `add_boxes(g, 1)` does.
pub fn lower_covers_su(g: &Signature) -> Result<Vec<Signature>> {
    if !g.is_normalized() {
        return Err(Error::InvalidArgument(format!("lower_covers_su needs a normalized signature, got {g}")));
    }
    let n = g.rank();
    let e = g.entries();
    let mut out = Vec::new();
    for row in 0..n - 1 {
        if e[row] > e[row + 1] {
            let mut v = e.to_vec();
            v[row] -= 1;
            out.push(Signature::new_unchecked(v));
        }
    }
    // row N: remove a box modulo the determinant class
    let mut v: Vec<i64> = e.iter().map(|x| x + 1).collect();
    v[n - 1] = 0;
    out.push(Signature::new_unchecked(v));
    out.sort();
    Ok(out)
}

/// Casimir constant `Delta_f = sum_i [f_i^2 + f_i (N - 2i + 1)] - (sum f)^2 / N`
/// as an exact rational. Invariant under constant shifts of `f`.
pub fn casimir_delta(f: &Signature) -> Ratio<i64> {
    let n = f.rank() as i64;
    let mut s = 0i64;
    let mut total = 0i64;
    for (idx, &fi) in f.entries().iter().enumerate() {
        let i = idx as i64 + 1;
        s += fi * fi + fi * (n - 2 * i + 1);
        total += fi;
    }
    Ratio::new(s, 1) - Ratio::new(total * total, n)
}

/// All strictly increasing chains `f = f_0 < f_1 < ... < f_k = g` in the
/// one-box cover order. With `permissible_only`, every chain element
/// (endpoints included) must be permissible in `ctx`. Unreachable `g` gives
/// an empty list.
pub fn paths(
    f: &Signature,
    g: &Signature,
    ctx: &LevelContext,
    permissible_only: bool,
) -> Result<Vec<Vec<Signature>>> {
    ctx.check_rank(f)?;
    ctx.check_rank(g)?;
    let k = g.size() - f.size();
    if k < 0 || !f.le_componentwise(g) {
        return Ok(Vec::new());
    }
    if permissible_only && (!ctx.is_permissible(f)? || !ctx.is_permissible(g)?) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut chain = vec![f.clone()];
    fn rec(
        cur: &Signature,
        g: &Signature,
        ctx: &LevelContext,
        permissible_only: bool,
        chain: &mut Vec<Signature>,
        out: &mut Vec<Vec<Signature>>,
    ) {
        if cur == g {
            out.push(chain.clone());
            return;
        }
        for next in add_boxes(cur, 1).expect("k=1 always valid") {
            if !next.le_componentwise(g) {
                continue;
            }
            if permissible_only && next.width() > ctx.level() {
                continue;
            }
            chain.push(next.clone());
            rec(&next, g, ctx, permissible_only, chain, out);
            chain.pop();
        }
    }
    rec(f, g, ctx, permissible_only, &mut chain, &mut out);
    Ok(out)
}
