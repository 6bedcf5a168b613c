//! Integer row lattices: Hermite normal form, coset reduction and Smith
//! invariant factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Row Hermite normal form of the Z-span of `rows`.
///
/// The result is the unique echelon basis with positive pivots and every
/// entry above a pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        loop {
            let piv = (r..a.len()).filter(|&i| !a[i][c].is_zero()).min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(piv) = piv else { break };
            a.swap(r, piv);
            let mut clean = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pivot_row = a[r].clone();
                sub_scaled(&mut a[i], &pivot_row, &q);
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = a[r].clone();
        for i in 0..r {
            let q = a[i][c].div_floor(&pivot_row[c]);
            if !q.is_zero() {
                sub_scaled(&mut a[i], &pivot_row, &q);
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

fn sub_scaled(row: &mut [BigInt], other: &[BigInt], q: &BigInt) {
    for (x, y) in row.iter_mut().zip(other) {
        *x -= q * y;
    }
}

/// Column index of each row's pivot.
pub fn pivots(hnf: &[Vec<BigInt>]) -> Vec<usize> {
    hnf.iter().map(|row| row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero")).collect()
}

/// Canonical representative of `v + L` where `L` is spanned by the HNF rows.
///
/// Each pivot coordinate is brought into `[0, pivot)` by subtracting an
/// integer multiple of its row, so two vectors reduce to the same remainder
/// exactly when their difference lies in `L`.
pub fn reduce_mod_rows(hnf: &[Vec<BigInt>], v: &[BigRational]) -> Vec<BigRational> {
    let mut out = v.to_vec();
    for (row, c) in hnf.iter().zip(pivots(hnf)) {
        let p = BigRational::from_integer(row[c].clone());
        let k = (&out[c] / &p).floor();
        if k.is_zero() {
            continue;
        }
        for (x, y) in out.iter_mut().zip(row) {
            *x -= &k * BigRational::from_integer(y.clone());
        }
    }
    out
}

/// Nonzero invariant factors `d_1 | d_2 | …` of an integer matrix.
pub fn smith_invariants(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_entry(&a, t, t..m, t..n) else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let pivot_row = a[t].clone();
                sub_scaled(&mut a[i], &pivot_row, &q);
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                // Move the smallest leftover of row t / column t into the pivot.
                let (pi, pj) = min_entry_cross(&a, t, m, n);
                a.swap(t, pi);
                swap_cols(&mut a, t, pj);
                continue;
            }
            let p = a[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    let src = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&src) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_entry(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_entry_cross(a: &[Vec<BigInt>], t: usize, m: usize, n: usize) -> (usize, usize) {
    let mut best = (t, t);
    let better = |i: usize, j: usize, best: (usize, usize)| {
        !a[i][j].is_zero() && (a[best.0][best.1].is_zero() || a[i][j].abs() < a[best.0][best.1].abs())
    };
    for i in t..m {
        if better(i, t, best) {
            best = (i, t);
        }
    }
    for j in t..n {
        if better(t, j, best) {
            best = (t, j);
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}
