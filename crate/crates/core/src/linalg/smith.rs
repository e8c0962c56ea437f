//! Smith normal form and the integer linear-system solver built on it.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::hermite::{kernel_basis, reduce_centered};
use super::matrix::{Integer, IntegerMatrix};
use crate::error::{Error, Result};

/// `s = u · a · v` with `s` diagonal, nonnegative, `s[i][i] | s[i+1][i+1]`,
/// and `u`, `v` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, including trailing zeros, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<Integer> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Vec<Vec<Integer>>,
    u: Vec<Vec<Integer>>,
    // v is kept transposed so column operations become row operations
    vt: Vec<Vec<Integer>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        self.vt.swap(i, j);
    }

    /// row[target] -= q * row[source]
    fn row_sub(&mut self, target: usize, source: usize, q: &Integer) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[source].clone();
            for (d, s) in m[target].iter_mut().zip(&src) {
                if !s.is_zero() {
                    *d -= q * s;
                }
            }
        }
    }

    /// col[target] -= q * col[source]
    fn col_sub(&mut self, target: usize, source: usize, q: &Integer) {
        for row in &mut self.a {
            let s = row[source].clone();
            if !s.is_zero() {
                row[target] -= q * s;
            }
        }
        let src = self.vt[source].clone();
        for (d, s) in self.vt[target].iter_mut().zip(&src) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
    }
}

/// Smith normal form with deterministic pivoting: at every step the pivot is
/// the entry of smallest nonzero absolute value in the active block, ties
/// going to the lowest row and then the lowest column.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.to_rows(),
        u: IntegerMatrix::identity(m).to_rows(),
        vt: IntegerMatrix::identity(n).to_rows(),
    };
    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &w.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    match pivot {
                        Some((pi, pj)) if w.a[pi][pj].abs() <= x.abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            if pi != t {
                w.swap_rows(pi, t);
            }
            if pj != t {
                w.swap_cols(pj, t);
            }
            let mut clean = true;
            for i in t + 1..m {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.row_sub(i, t, &q);
                clean &= w.a[i][t].is_zero();
            }
            for j in t + 1..n {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.col_sub(j, t, &q);
                clean &= w.a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let d = w.a[t][t].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.a[i][j].is_multiple_of(&d)));
            match offender {
                Some(i) => {
                    // row_t += row_i
                    w.row_sub(t, i, &-Integer::one());
                }
                None => break,
            }
        }
        if t < m && t < n && w.a[t][t].is_negative() {
            for m_ in [&mut w.a, &mut w.u] {
                for x in m_[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
    let s = IntegerMatrix::from_rows(w.a, n).expect("shape");
    let u = IntegerMatrix::from_rows(w.u, m).expect("shape");
    let v = IntegerMatrix::from_rows(w.vt, n).expect("shape").transpose();
    SmithForm { s, u, v }
}

/// True iff `a` is square with determinant ±1.
pub fn is_unimodular(a: &IntegerMatrix) -> Result<bool> {
    Ok(a.determinant()?.abs().is_one())
}

/// Why an inhomogeneous system `A x = b` has no integer solution, phrased in
/// the Smith coordinates `S y = U b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveObstruction {
    /// `d_index` does not divide the transformed right-hand side `value`.
    NotDivisible {
        index: usize,
        #[serde(with = "crate::serde_int::integer")]
        divisor: Integer,
        #[serde(with = "crate::serde_int::integer")]
        value: Integer,
    },
    /// The transformed right-hand side is nonzero beyond the rank: no rational solution.
    Inconsistent {
        index: usize,
        #[serde(with = "crate::serde_int::integer")]
        value: Integer,
    },
}

impl std::fmt::Display for SolveObstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveObstruction::NotDivisible { index, divisor, value } => write!(
                f,
                "elementary divisor d_{index} = {divisor} does not divide transformed right-hand side {value}"
            ),
            SolveObstruction::Inconsistent { index, value } => write!(
                f,
                "transformed right-hand side entry {index} = {value} lies beyond the rank (no rational solution)"
            ),
        }
    }
}

/// A particular solution together with a basis (columns) of the integer kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub x0: Vec<Integer>,
    pub kernel: IntegerMatrix,
}

/// Decides `A x = b` over the integers, reporting the obstruction on failure.
///
/// The particular solution is reduced to the centered representative modulo
/// the kernel lattice, so the output does not depend on the elimination path.
pub fn solve_linear_integer_detailed(
    a: &IntegerMatrix,
    b: &[Integer],
) -> Result<std::result::Result<IntegerSolution, SolveObstruction>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b)?;
    let diag = snf.diagonal();
    let rank = snf.rank();
    let mut y = vec![Integer::zero(); a.cols()];
    for i in 0..rank {
        let (q, r) = c[i].div_rem(&diag[i]);
        if !r.is_zero() {
            return Ok(Err(SolveObstruction::NotDivisible {
                index: i,
                divisor: diag[i].clone(),
                value: c[i].clone(),
            }));
        }
        y[i] = q;
    }
    if let Some(i) = (rank..c.len()).find(|&i| !c[i].is_zero()) {
        return Ok(Err(SolveObstruction::Inconsistent {
            index: i,
            value: c[i].clone(),
        }));
    }
    let mut x0 = snf.v.mul_vec(&y)?;
    let kernel = kernel_basis(a);
    reduce_centered(&mut x0, &kernel);
    Ok(Ok(IntegerSolution { x0, kernel }))
}

/// Integer solution of `A x = b`, or `None` when none exists.
pub fn solve_linear_integer(a: &IntegerMatrix, b: &[Integer]) -> Result<Option<IntegerSolution>> {
    Ok(solve_linear_integer_detailed(a, b)?.ok())
}

/// Integer `L` with `L · a = I`, which exists iff `a` has full column rank and
/// saturated column span.
pub fn left_inverse(a: &IntegerMatrix) -> Option<IntegerMatrix> {
    let n = a.cols();
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    if diag.len() < n || !diag.iter().all(One::is_one) {
        return None;
    }
    let top: Vec<usize> = (0..n).collect();
    Some(&snf.v * &snf.u.select_rows(&top))
}

/// Inverse of a unimodular matrix; `None` if `a` is not square or not unimodular.
pub fn unimodular_inverse(a: &IntegerMatrix) -> Option<IntegerMatrix> {
    if !a.is_square() {
        return None;
    }
    let snf = smith_normal_form(a);
    if !snf.diagonal().iter().all(One::is_one) {
        return None;
    }
    Some(&snf.v * &snf.u)
}

/// Solves `K Y = B` for `Y`, where `K` has full column rank; errors if some
/// column of `B` is not an integer combination of the columns of `K`.
pub fn solve_columns(k: &IntegerMatrix, b: &IntegerMatrix) -> Result<IntegerMatrix> {
    if k.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows, targets {}",
            k.rows(),
            b.rows()
        )));
    }
    let mut cols = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        let sol = solve_linear_integer(k, &b.column(j))?
            .ok_or_else(|| Error::Internal(format!("column {j} outside the lattice")))?;
        cols.push(sol.x0);
    }
    Ok(IntegerMatrix::from_columns(&cols, k.cols()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ivec;

    fn check(a: &IntegerMatrix) -> SmithForm {
        let f = smith_normal_form(a);
        assert_eq!(&(&f.u * a) * &f.v, f.s);
        assert!(is_unimodular(&f.u).unwrap());
        assert!(is_unimodular(&f.v).unwrap());
        f
    }

    #[test]
    fn smith_examples() {
        let f = check(&IntegerMatrix::identity(3));
        assert_eq!(f.s, IntegerMatrix::identity(3));
        let f = check(&IntegerMatrix::from_i64_rows(&[[2, 4], [6, 8]]));
        assert_eq!(f.s, IntegerMatrix::from_i64_rows(&[[2, 0], [0, 4]]));
        let f = check(&IntegerMatrix::from_i64_rows(&[[0]]));
        assert_eq!(f.s, IntegerMatrix::from_i64_rows(&[[0]]));
    }

    #[test]
    fn smith_rectangular_and_empty() {
        let f = check(&IntegerMatrix::from_i64_rows(&[[2, 3, 5]]));
        assert_eq!(f.diagonal(), ivec(&[1]));
        let f = check(&IntegerMatrix::from_i64_rows(&[[6], [4]]));
        assert_eq!(f.diagonal(), ivec(&[2]));
        let f = check(&IntegerMatrix::zeros(0, 3));
        assert!(f.diagonal().is_empty());
    }

    #[test]
    fn solve_examples() {
        let id = IntegerMatrix::identity(2);
        let s = solve_linear_integer(&id, &ivec(&[7, -2])).unwrap().unwrap();
        assert_eq!(s.x0, ivec(&[7, -2]));
        assert_eq!(s.kernel.cols(), 0);

        let two = IntegerMatrix::from_i64_rows(&[[2]]);
        assert!(solve_linear_integer(&two, &ivec(&[3])).unwrap().is_none());
        let obstruction = solve_linear_integer_detailed(&two, &ivec(&[3])).unwrap().unwrap_err();
        assert!(matches!(obstruction, SolveObstruction::NotDivisible { .. }));

        let a = IntegerMatrix::from_i64_rows(&[[2, 3]]);
        let s = solve_linear_integer(&a, &ivec(&[1])).unwrap().unwrap();
        assert_eq!(s.x0, ivec(&[-1, 1]));
        assert_eq!(s.kernel, IntegerMatrix::from_i64_rows(&[[3], [-2]]));
    }

    #[test]
    fn solve_rejects_bad_dimensions_and_inconsistency() {
        let a = IntegerMatrix::from_i64_rows(&[[1, 1], [1, 1]]);
        assert!(solve_linear_integer(&a, &ivec(&[1])).is_err());
        let r = solve_linear_integer_detailed(&a, &ivec(&[1, 2])).unwrap();
        assert!(matches!(r, Err(SolveObstruction::Inconsistent { .. })));
    }

    #[test]
    fn unimodularity() {
        assert!(is_unimodular(&IntegerMatrix::identity(4)).unwrap());
        assert!(!is_unimodular(&IntegerMatrix::from_i64_rows(&[[2, 0], [0, 1]])).unwrap());
        assert!(is_unimodular(&IntegerMatrix::from_i64_rows(&[[1, 2]])).is_err());
    }

    #[test]
    fn inverses() {
        let a = IntegerMatrix::from_i64_rows(&[[2, 1], [1, 1]]);
        let inv = unimodular_inverse(&a).unwrap();
        assert!((&a * &inv).is_identity());
        let k = IntegerMatrix::from_i64_rows(&[[1], [2], [3]]);
        let l = left_inverse(&k).unwrap();
        assert!((&l * &k).is_identity());
        assert!(left_inverse(&IntegerMatrix::from_i64_rows(&[[2], [4]])).is_none());
    }
}
