//! Independent oracles used only by integration tests.
//!
//! The tensor-product oracle models characters as exact integer Laurent
//! polynomials built from semistandard tableaux and decomposes a product
//! by repeatedly peeling the lexicographically dominant term — a
//! different algorithm from the library's determinant/Pieri route. The
//! rank-2 fusion oracle is the closed-form selection rule.

use fusionkit::Signature;
use std::collections::BTreeMap;

/// Exact polynomial in `n` variables: exponent vector -> coefficient.
pub type Poly = BTreeMap<Vec<i64>, i64>;

/// Character of a partition-shaped signature as the generating function
/// of semistandard tableaux (rows weakly increasing, columns strictly
/// increasing, entries in 1..=n).
pub fn tableau_character(shape: &Signature) -> Poly {
    let n = shape.rank();
    assert!(
        shape.entries().iter().all(|&x| x >= 0),
        "oracle takes partition-shaped signatures"
    );
    let rows: Vec<usize> = shape.entries().iter().map(|&x| x as usize).collect();
    let mut cells: Vec<Vec<usize>> = rows.iter().map(|&r| vec![0usize; r]).collect();
    let mut out: Poly = BTreeMap::new();
    fill_tableau(&mut cells, &rows, n, 0, 0, &mut out);
    out
}

fn fill_tableau(
    cells: &mut Vec<Vec<usize>>,
    rows: &[usize],
    n: usize,
    i: usize,
    j: usize,
    out: &mut Poly,
) {
    if i == rows.len() {
        let mut weight = vec![0i64; n];
        for row in cells.iter() {
            for &v in row {
                weight[v - 1] += 1;
            }
        }
        *out.entry(weight).or_insert(0) += 1;
        return;
    }
    if j == rows[i] {
        return fill_tableau(cells, rows, n, i + 1, 0, out);
    }
    let left = if j > 0 { cells[i][j - 1] } else { 1 };
    let above = if i > 0 { cells[i - 1][j] + 1 } else { 1 };
    for v in left.max(above)..=n {
        cells[i][j] = v;
        fill_tableau(cells, rows, n, i, j + 1, out);
    }
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out: Poly = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Decompose the product of two partition-shaped characters by peeling
/// dominant terms. The lexicographically largest exponent vector of a
/// symmetric polynomial is weakly decreasing, and for a single character
/// it is the shape itself with coefficient 1, so each peel removes one
/// irreducible constituent exactly. Keys are normalized.
pub fn tableau_tensor_decompose(f: &Signature, g: &Signature) -> BTreeMap<Signature, i64> {
    let mut rest = poly_mul(&tableau_character(f), &tableau_character(g));
    let mut out = BTreeMap::new();
    while let Some((exp, &m)) = rest.iter().next_back() {
        let exp = exp.clone();
        assert!(m > 0, "peeling produced a non-positive multiplicity {m} at {exp:?}");
        assert!(
            exp.windows(2).all(|w| w[0] >= w[1]),
            "dominant exponent {exp:?} is not a partition"
        );
        let shape = Signature::new(exp).expect("weakly decreasing by the assert above");
        for (e, c) in tableau_character(&shape) {
            let entry = rest.entry(e).or_insert(0);
            *entry -= m * c;
        }
        rest.retain(|_, c| *c != 0);
        let prev = out.insert(shape.normalize(), m);
        assert!(prev.is_none(), "equal-size constituents normalize distinctly");
    }
    out
}

/// Closed-form rank-2 fusion rule at a given level. Labels are the first
/// entry of normalized signatures: the product of labels `a` and `b`
/// contains `c` exactly once when `|a-b| <= c <= min(a+b, 2*level-a-b)`
/// with `c` of the same parity as `a+b`, and never otherwise.
pub fn rank2_fusion_rule(a: i64, b: i64, c: i64, level: i64) -> i64 {
    let lo = (a - b).abs();
    let hi = (a + b).min(2 * level - a - b);
    if c >= lo && c <= hi && (c - lo) % 2 == 0 {
        1
    } else {
        0
    }
}

/// All partition-shaped signatures of the given rank with at most
/// `max_size` boxes, in lexicographic order.
pub fn partitions_up_to(rank: usize, max_size: i64) -> Vec<Signature> {
    let mut out = Vec::new();
    let mut current = vec![0i64; rank];
    collect_partitions(&mut current, 0, max_size, max_size, &mut out);
    out.sort();
    out
}

fn collect_partitions(
    current: &mut Vec<i64>,
    pos: usize,
    cap: i64,
    remaining: i64,
    out: &mut Vec<Signature>,
) {
    if pos == current.len() {
        out.push(Signature::new(current.clone()).expect("constructed weakly decreasing"));
        return;
    }
    for v in 0..=cap.min(remaining) {
        current[pos] = v;
        collect_partitions(current, pos + 1, v, remaining - v, out);
    }
}
