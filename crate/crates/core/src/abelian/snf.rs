//! Smith normal form over the integers.
//!
//! For an `m x n` integer matrix `a` we compute unimodular `u` (m x m) and
//! `v` (n x n) with `u * a * v = d`, where `d` is diagonal, nonnegative and
//! each diagonal entry divides the next. The inverse of `v` is tracked
//! alongside since change-of-basis for subgroup presentations needs it.
//!
//! Pivots are chosen as the entry of smallest nonzero absolute value in the
//! remaining block, first in row-major order on ties, so the transforms are
//! reproducible.



use super::matrix::IntMatrix;
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub d: IntMatrix<T>,
    pub u: IntMatrix<T>,
    pub v: IntMatrix<T>,
    pub v_inv: IntMatrix<T>,
}

impl<T: Scalar> SmithForm<T> {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    /// Diagonal of `d`, padded to `cols` with zeros for the free part.
    pub fn invariant_factors(&self) -> Vec<T> {
        self.d.diagonal()
    }
}

pub fn smith_normal_form<T: Scalar>(a: &IntMatrix<T>) -> SmithForm<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, t) else {
                return SmithForm { d, u, v, v_inv };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                // inverse of (col j += q col t) is (row t -= q row j)
                v_inv.add_row_multiple(t, j, &-q.clone());
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            let bad_row = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot))
            });
            match bad_row {
                Some(i) => {
                    let one = T::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { d, u, v, v_inv }
}

fn smallest_nonzero<T: Scalar>(d: &IntMatrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), T)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| x < *b) {
                best = Some(((i, j), x));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Generators of the integer kernel `{ x : a x = 0 }`.
pub fn integer_kernel<T: Scalar>(a: &IntMatrix<T>) -> Vec<Vec<T>> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    (rank..a.cols()).map(|j| snf.v.column(j)).collect()
}

/// Some integer solution of `a x = b`, or `None` if there is none.
pub fn solve_integer<T: Scalar>(snf: &SmithForm<T>, b: &[T]) -> Option<Vec<T>> {
    let (m, n) = (snf.d.rows(), snf.d.cols());
    let ub = snf.u.mul_vec(b);
    let mut y = vec![T::zero(); n];
    for i in 0..m {
        let di = if i < n { snf.d[(i, i)].clone() } else { T::zero() };
        if di.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn mat(rows: &[&[i64]]) -> IntMatrix<i64> {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn check(a: &IntMatrix<i64>) -> SmithForm<i64> {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d, "u a v != d for {a:?}");
        assert!(s.d.is_diagonal());
        let diag = s.d.diagonal();
        for w in diag.windows(2) {
            assert!(w[0] >= 0 && (w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0)));
        }
        assert_eq!(s.u.determinant().unwrap().abs(), 1);
        assert_eq!(s.v.determinant().unwrap().abs(), 1);
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(a.cols()));
        s
    }

    #[test]
    fn already_diagonal() {
        let a = mat(&[&[2, 0], &[0, 4]]);
        let s = check(&a);
        assert_eq!(s.d, a);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn zero_one_by_one() {
        let a = mat(&[&[0]]);
        let s = check(&a);
        assert_eq!(s.d, a);
        assert_eq!(s.u, IntMatrix::identity(1));
        assert_eq!(s.v, IntMatrix::identity(1));
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&mat(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.d, mat(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(2, 3) is not in Smith form; the answer is diag(1, 6)
        let s = check(&mat(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.d.diagonal(), vec![1, 6]);
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let s = check(&mat(&[&[1, 2, 3], &[2, 4, 6]]));
        assert_eq!(s.d.diagonal(), vec![1, 0]);
        assert_eq!(s.rank(), 1);
        let s = check(&mat(&[&[4], &[6], &[10]]));
        assert_eq!(s.d.diagonal(), vec![2]);
    }

    #[test]
    fn kernel_and_solve() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = integer_kernel(&a);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(a.mul_vec(k).iter().all(|&x| x == 0));
        }
        let s = smith_normal_form(&a);
        let x = solve_integer(&s, &[5, 10]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![5, 10]);
        assert!(solve_integer(&s, &[5, 11]).is_none());
    }

    #[test]
    fn bigint_agrees_with_i64() {
        let small = mat(&[&[12, -18, 6], &[4, 10, -2], &[0, 8, 14]]);
        let big = IntMatrix::from_fn(3, 3, |i, j| BigInt::from(small[(i, j)]));
        let s_small = smith_normal_form(&small);
        let s_big = smith_normal_form(&big);
        let d_small: Vec<BigInt> = s_small.d.diagonal().into_iter().map(BigInt::from).collect();
        assert_eq!(d_small, s_big.d.diagonal());
    }
}
