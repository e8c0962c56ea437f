//! Hermite reduction of generator lists, lattice bases and integer kernels.

use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use super::matrix::{content, Integer, IntegerMatrix};

/// Row-style Hermite reduction of `rows` in place.
///
/// On return the first `rank` rows are the Hermite normal form of the lattice
/// spanned by the input (pivot columns strictly increasing, positive pivots,
/// entries above a pivot reduced into `[0, pivot)`), and the remaining rows are
/// zero. If `track` is given, the same unimodular row operations are applied to
/// it, so `track · input = output` holds when `track` starts as the identity.
pub(crate) fn hermite_rows(rows: &mut [Vec<Integer>], mut track: Option<&mut [Vec<Integer>]>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut p = 0;
    for c in 0..ncols {
        if p == rows.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c among rows p..
            let mut best: Option<usize> = None;
            for r in p..rows.len() {
                let x = &rows[r][c];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if rows[b][c].abs() <= x.abs() => {}
                    _ => best = Some(r),
                }
            }
            let Some(b) = best else { break };
            rows.swap(p, b);
            if let Some(t) = track.as_deref_mut() {
                t.swap(p, b);
            }
            let mut clean = true;
            for r in p + 1..rows.len() {
                if rows[r][c].is_zero() {
                    continue;
                }
                let q = rows[r][c].div_floor(&rows[p][c]);
                sub_multiple(rows, r, p, &q, c);
                if let Some(t) = track.as_deref_mut() {
                    sub_multiple(t, r, p, &q, 0);
                }
                if !rows[r][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if p < rows.len() && !rows[p][c].is_zero() {
            if rows[p][c].is_negative() {
                negate(&mut rows[p]);
                if let Some(t) = track.as_deref_mut() {
                    negate(&mut t[p]);
                }
            }
            for r in 0..p {
                if rows[r][c].is_zero() {
                    continue;
                }
                let q = rows[r][c].div_floor(&rows[p][c]);
                if q.is_zero() {
                    continue;
                }
                sub_multiple(rows, r, p, &q, c);
                if let Some(t) = track.as_deref_mut() {
                    sub_multiple(t, r, p, &q, 0);
                }
            }
            p += 1;
        }
    }
    p
}

/// `rows[target] -= q * rows[source]`, touching columns from `from` on.
fn sub_multiple(rows: &mut [Vec<Integer>], target: usize, source: usize, q: &Integer, from: usize) {
    debug_assert_ne!(target, source);
    let (src, dst) = if source < target {
        let (a, b) = rows.split_at_mut(target);
        (&a[source], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(source);
        (&b[0], &mut a[target])
    };
    for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

fn negate(row: &mut [Integer]) {
    for x in row.iter_mut() {
        *x = -&*x;
    }
}

/// Canonical basis of the lattice spanned by the columns of `generators`.
///
/// The result has full column rank and is in column Hermite form: the
/// transpose of the row Hermite normal form. Two generator sets span the same
/// lattice exactly when their outputs agree.
pub fn lattice_basis(generators: &IntegerMatrix) -> IntegerMatrix {
    let mut rows = generators.transpose().to_rows();
    let rank = hermite_rows(&mut rows, None);
    rows.truncate(rank);
    IntegerMatrix::from_columns(&rows, generators.rows())
}

/// Saturated basis of the integer kernel `{x : A x = 0}`, as columns in column Hermite form.
pub fn kernel_basis(a: &IntegerMatrix) -> IntegerMatrix {
    let n = a.cols();
    let mut rows = a.transpose().to_rows();
    let mut track = IntegerMatrix::identity(n).to_rows();
    let rank = hermite_rows(&mut rows, Some(&mut track));
    let mut kernel: Vec<Vec<Integer>> = track.split_off(rank);
    let k = hermite_rows(&mut kernel, None);
    debug_assert_eq!(k, n - rank);
    debug_assert!(kernel.iter().all(|v| content(v) == Integer::from(1)));
    IntegerMatrix::from_columns(&kernel, n)
}

/// Reduces `x` modulo the lattice spanned by the columns of `basis` (in column
/// Hermite form) to its centered representative: at every pivot row the
/// coordinate lands in `(-p/2, p/2]`.
pub(crate) fn reduce_centered(x: &mut [Integer], basis: &IntegerMatrix) {
    for j in 0..basis.cols() {
        let Some(pr) = (0..basis.rows()).find(|&i| !basis.get(i, j).is_zero()) else {
            continue;
        };
        let p = basis.get(pr, j);
        // q = round-half-down(x / p) so that x - q p lies in (-p/2, p/2]
        let twice: Integer = &x[pr] * 2 + p;
        let q = (twice - Integer::from(1)).div_floor(&(p * 2));
        if q.is_zero() {
            continue;
        }
        for (i, xi) in x.iter_mut().enumerate().skip(pr) {
            let b = basis.get(i, j);
            if !b.is_zero() {
                *xi -= &q * b;
            }
        }
    }
}
