//! Exact Gaussian elimination over a field, used for symbol-space ranks,
//! delta-cohomology dimensions, degree-bounded syzygy oracles and
//! annihilator searches.

use num_rational::BigRational;
use num_traits::Zero;

use crate::scalars::RationalFunction;

/// Minimal field interface for exact elimination.
pub trait Field: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division by a nonzero element.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Field for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for RationalFunction {
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RationalFunction::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RationalFunction::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFunction::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        RationalFunction::div(self, o).expect("division by zero")
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
}

/// In-place reduced row echelon form; returns the pivot columns in order.
pub fn rref<T: Field>(mat: &mut [Vec<T>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return vec![];
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = {
            let piv = mat[r][c].clone();
            move |x: &T| x.div(&piv)
        };
        for x in mat[r].iter_mut() {
            *x = inv(x);
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let t = f.mul(&mat[r][j]);
                    mat[i][j] = mat[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Field>(mat: &[Vec<T>]) -> usize {
    let mut m: Vec<Vec<T>> = mat.to_vec();
    rref(&mut m).len()
}

/// Basis of the right null space {v : A v = 0}. `zero`/`one` supply field
/// constants (field elements may carry context).
pub fn kernel_basis<T: Field>(mat: &[Vec<T>], zero: &T, one: &T) -> Vec<Vec<T>> {
    if mat.is_empty() {
        return vec![];
    }
    let cols = mat[0].len();
    let mut m: Vec<Vec<T>> = mat.to_vec();
    let pivots = rref(&mut m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![zero.clone(); cols];
        v[fc] = one.clone();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = m[ri][fc].neg();
        }
        basis.push(v);
    }
    basis
}

/// Dimension of the null space of A (cols - rank).
pub fn nullity<T: Field>(mat: &[Vec<T>], cols: usize) -> usize {
    if mat.is_empty() {
        return cols;
    }
    cols - rank(mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rank_and_kernel() {
        let m = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        assert_eq!(rank(&m), 2);
        let ker = kernel_basis(&m, &q(0), &q(1));
        assert_eq!(ker.len(), 1);
        for row in &m {
            let dot = row
                .iter()
                .zip(ker[0].iter())
                .fold(q(0), |acc, (a, b)| acc.add(&a.mul(b)));
            assert!(Field::is_zero(&dot));
        }
    }

    #[test]
    fn full_rank_empty_kernel() {
        let m = vec![vec![q(1), q(0)], vec![q(3), q(5)]];
        assert_eq!(rank(&m), 2);
        assert!(kernel_basis(&m, &q(0), &q(1)).is_empty());
    }
}
