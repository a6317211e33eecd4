//! Row Hermite normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-style HNF of the lattice spanned by `rows`.
///
/// Returned rows are the nonzero ones, ordered by pivot column; pivots are
/// positive and entries above a pivot lie in `[0, pivot)`. Two generating
/// families span the same lattice iff their HNFs are equal.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(width) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let mut r = 0;
    for c in 0..width {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(best) = best else { break };
            a.swap(r, best);
            let mut done = true;
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                sub_multiple(&mut a, i, r, &q);
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
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
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            sub_multiple(&mut a, i, r, &q);
        }
        r += 1;
    }
    a.truncate(r);
    a
}

fn sub_multiple(a: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = a[source].clone();
    for (x, s) in a[target].iter_mut().zip(&src) {
        *x -= q * s;
    }
}

/// Pivot column of each HNF row.
pub fn pivots(h: &[Vec<BigInt>]) -> Vec<usize> {
    h.iter()
        .map(|row| {
            row.iter()
                .position(|x| !x.is_zero())
                .expect("HNF rows are nonzero")
        })
        .collect()
}

/// Whether `x` lies in the lattice with HNF basis `h`.
pub fn contains(h: &[Vec<BigInt>], x: &[BigInt]) -> bool {
    let mut x = x.to_vec();
    for (row, p) in h.iter().zip(pivots(h)) {
        let (q, rem) = x[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return false;
        }
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi -= &q * ri;
        }
    }
    x.iter().all(Zero::is_zero)
}
