//! Small dense linear algebra: LU with partial pivoting.
//!
//! All systems in this crate are tiny (at most a few thousand unknowns
//! for the finite-difference oracle, 32x32 for the per-mode radial
//! solves), so a plain dense factorization is the right tool.

use crate::scalar::{Scalar, C};
use ndarray::{Array1, Array2};

/// LU factorization of a square real matrix with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: Array2<T>,
    piv: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    /// Factorize `a`. Panics on a numerically singular matrix, which
    /// indicates a bug in the basis construction rather than bad input.
    pub fn new(a: Array2<T>) -> Self {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU needs a square matrix");
        let mut lu = a;
        let mut piv = Vec::with_capacity(n);
        for k in 0..n {
            let mut p = k;
            let mut best = lu[[k, k]].abs();
            for i in k + 1..n {
                let v = lu[[i, k]].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            assert!(best > T::zero(), "singular matrix in LU at column {k}");
            piv.push(p);
            if p != k {
                for j in 0..n {
                    let t = lu[[k, j]];
                    lu[[k, j]] = lu[[p, j]];
                    lu[[p, j]] = t;
                }
            }
            let d = lu[[k, k]];
            for i in k + 1..n {
                let m = lu[[i, k]] / d;
                lu[[i, k]] = m;
                for j in k + 1..n {
                    let t = lu[[k, j]];
                    lu[[i, j]] = lu[[i, j]] - m * t;
                }
            }
        }
        Self { lu, piv }
    }

    pub fn n(&self) -> usize {
        self.lu.nrows()
    }

    /// Solve `A x = b` in place.
    pub fn solve_real(&self, b: &mut Array1<T>) {
        let n = self.n();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
        }
        for k in 0..n {
            for i in k + 1..n {
                let t = b[k];
                b[i] = b[i] - self.lu[[i, k]] * t;
            }
        }
        for k in (0..n).rev() {
            b[k] = b[k] / self.lu[[k, k]];
            let t = b[k];
            for i in 0..k {
                b[i] = b[i] - self.lu[[i, k]] * t;
            }
        }
    }

    /// Solve with a complex right-hand side (real matrix, so the real
    /// and imaginary parts decouple).
    pub fn solve_complex(&self, b: &mut Array1<C<T>>) {
        let n = self.n();
        let mut re = Array1::from_iter(b.iter().map(|z| z.re));
        let mut im = Array1::from_iter(b.iter().map(|z| z.im));
        self.solve_real(&mut re);
        self.solve_real(&mut im);
        for i in 0..n {
            b[i] = C::new(re[i], im[i]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn lu_solves_small_system() {
        let a = array![[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]];
        let lu = Lu::new(a.clone());
        let x_true = array![1.0f64, -2.0, 0.5];
        let mut b = a.dot(&x_true);
        lu.solve_real(&mut b);
        for i in 0..3 {
            assert!((b[i] - x_true[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn lu_pivots() {
        let a = array![[0.0, 1.0], [1.0, 0.0]];
        let lu = Lu::new(a);
        let mut b = array![3.0, 7.0];
        lu.solve_real(&mut b);
        assert_eq!(b, array![7.0, 3.0]);
    }
}
