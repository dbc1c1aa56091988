//! Collocation grid and radial basis for scalar fields on the unit disk.
//!
//! Discretization: Fourier modes `|n| <= N` in theta, and for each mode a
//! radial basis `rho^sigma(n) T_m(2 rho^2 - 1)` collocated at Gauss-type
//! nodes `rho_j = cos(pi j / (2 M))`, which cluster at `rho = 1` and avoid
//! the pole. The exponent `sigma(n) = |n|` for `|n| <= 2` and is capped at
//! the parity-matching value 1 or 2 beyond that, which keeps the collocation
//! matrices well conditioned while still spanning every smooth mode-n
//! profile (the gap `|n| - sigma` is even, so `rho^{|n|} q(rho^2)` stays in
//! the span).

use crate::linalg::Lu;
use crate::scalar::{Scalar, C};
use ndarray::{Array1, Array2};
use std::sync::Arc;

/// Chebyshev values `(T_m(t), T_m'(t), T_m''(t))` for `m = 0..m_max`.
fn chebyshev_table<T: Scalar>(t: T, m_max: usize) -> Vec<(T, T, T)> {
    let mut out = Vec::with_capacity(m_max + 1);
    let (mut tp, mut dp, mut sp) = (T::one(), T::zero(), T::zero()); // T_0
    out.push((tp, dp, sp));
    if m_max == 0 {
        return out;
    }
    let (mut tc, mut dc, mut sc) = (t, T::one(), T::zero()); // T_1
    out.push((tc, dc, sc));
    let two = T::of(2.0);
    for _ in 2..=m_max {
        let tn = two * t * tc - tp;
        let dn = two * tc + two * t * dc - dp;
        let sn = T::of(4.0) * dc + two * t * sc - sp;
        tp = tc;
        dp = dc;
        sp = sc;
        tc = tn;
        dc = dn;
        sc = sn;
        out.push((tc, dc, sc));
    }
    out
}

/// Shared discretization data: nodes, basis matrices, factorizations.
#[derive(Debug)]
pub struct DiskGrid<T> {
    /// Maximum Fourier mode N.
    pub n_theta: usize,
    /// Radial resolution M (basis functions per mode).
    pub n_rho: usize,
    /// Number of theta collocation nodes, `2 N + 1`.
    pub n_nodes_theta: usize,
    /// Radial nodes, descending from `rho_0 = 1`.
    pub rho: Vec<T>,
    /// Theta nodes `2 pi k / K`.
    pub theta: Vec<T>,
    /// Basis value matrix per sigma: `V[sigma][[j, m]] = rho_j^sigma T_m(t_j)`.
    value: [Array2<T>; 3],
    /// First radial derivative of the basis at the nodes.
    d1: [Array2<T>; 3],
    /// Second radial derivative of the basis at the nodes.
    d2: [Array2<T>; 3],
    /// Factorizations of the value matrices (nodal -> modal transform).
    value_lu: [Lu<T>; 3],
    /// Dirichlet Laplacian factorization per mode `n = 0..=N`.
    lap_lu: Vec<Lu<T>>,
}

/// Parity-capped pole exponent for mode `n`.
pub fn sigma_of(n: usize) -> usize {
    if n <= 2 {
        n
    } else if n % 2 == 1 {
        1
    } else {
        2
    }
}

impl<T: Scalar> DiskGrid<T> {
    pub fn new(n_theta: usize, n_rho: usize) -> Arc<Self> {
        assert!(n_theta >= 4 && n_rho >= 4);
        let m = n_rho;
        let k = 2 * n_theta + 1;
        let rho: Vec<T> = (0..m)
            .map(|j| (T::PI() * T::of_usize(j) / T::of_usize(2 * m)).cos())
            .collect();
        let theta: Vec<T> = (0..k)
            .map(|i| T::of(2.0) * T::PI() * T::of_usize(i) / T::of_usize(k))
            .collect();

        let mut value: Vec<Array2<T>> = Vec::new();
        let mut d1: Vec<Array2<T>> = Vec::new();
        let mut d2: Vec<Array2<T>> = Vec::new();
        for sigma in 0..3usize {
            let mut v = Array2::zeros((m, m));
            let mut dv = Array2::zeros((m, m));
            let mut ddv = Array2::zeros((m, m));
            let s = T::of_usize(sigma);
            for (j, &r) in rho.iter().enumerate() {
                let t = T::of(2.0) * r * r - T::one();
                let cheb = chebyshev_table(t, m - 1);
                let rs = r.powi(sigma as i32);
                // sigma (sigma - 1) rho^{sigma-2}; zero for sigma < 2 so the
                // negative power never materializes.
                let rs2 = if sigma >= 2 {
                    s * (s - T::one()) * r.powi(sigma as i32 - 2)
                } else {
                    T::zero()
                };
                let rs1 = if sigma >= 1 {
                    s * r.powi(sigma as i32 - 1)
                } else {
                    T::zero()
                };
                for (mm, &(tv, td, ts)) in cheb.iter().enumerate() {
                    v[[j, mm]] = rs * tv;
                    dv[[j, mm]] = rs1 * tv + T::of(4.0) * r.powi(sigma as i32 + 1) * td;
                    ddv[[j, mm]] = rs2 * tv
                        + (T::of(8.0) * s + T::of(4.0)) * rs * td
                        + T::of(16.0) * r.powi(sigma as i32 + 2) * ts;
                }
            }
            value.push(v);
            d1.push(dv);
            d2.push(ddv);
        }
        let value: [Array2<T>; 3] = [value[0].clone(), value[1].clone(), value[2].clone()];
        let d1: [Array2<T>; 3] = [d1[0].clone(), d1[1].clone(), d1[2].clone()];
        let d2: [Array2<T>; 3] = [d2[0].clone(), d2[1].clone(), d2[2].clone()];
        let value_lu = [
            Lu::new(value[0].clone()),
            Lu::new(value[1].clone()),
            Lu::new(value[2].clone()),
        ];

        // Per-mode disk Laplacian with a Dirichlet row at rho_0 = 1:
        //   row 0:       u(1) = g
        //   rows j >= 1: u'' + u'/rho - n^2 u / rho^2 = f(rho_j)
        let mut lap_lu = Vec::with_capacity(n_theta + 1);
        for n in 0..=n_theta {
            let sigma = sigma_of(n);
            let nn = T::of_usize(n * n);
            let mut a = Array2::zeros((m, m));
            for mm in 0..m {
                a[[0, mm]] = value[sigma][[0, mm]];
            }
            for j in 1..m {
                let r = rho[j];
                for mm in 0..m {
                    a[[j, mm]] = d2[sigma][[j, mm]] + d1[sigma][[j, mm]] / r
                        - nn * value[sigma][[j, mm]] / (r * r);
                }
            }
            lap_lu.push(Lu::new(a));
        }

        Arc::new(Self {
            n_theta,
            n_rho,
            n_nodes_theta: k,
            rho,
            theta,
            value,
            d1,
            d2,
            value_lu,
            lap_lu,
        })
    }

    pub fn value_matrix(&self, sigma: usize) -> &Array2<T> {
        &self.value[sigma]
    }

    pub fn d1_matrix(&self, sigma: usize) -> &Array2<T> {
        &self.d1[sigma]
    }

    pub fn d2_matrix(&self, sigma: usize) -> &Array2<T> {
        &self.d2[sigma]
    }

    /// Modal radial coefficients from nodal samples of one theta mode.
    pub fn radial_to_modal(&self, sigma: usize, nodal: &Array1<C<T>>) -> Array1<C<T>> {
        let mut b = nodal.clone();
        self.value_lu[sigma].solve_complex(&mut b);
        b
    }

    /// Solve the mode-n Dirichlet Laplacian problem: interior rows carry the
    /// right-hand side at `rho_j` (j >= 1), row zero the boundary value.
    pub fn lap_solve(&self, n: usize, rhs: &Array1<C<T>>, boundary: C<T>) -> Array1<C<T>> {
        let mut b = rhs.clone();
        b[0] = boundary;
        self.lap_lu[n].solve_complex(&mut b);
        b
    }

    /// Evaluate a modal radial profile (or its rho-derivatives) at any rho.
    pub fn eval_radial(&self, sigma: usize, coeffs: &Array1<C<T>>, r: T, deriv: usize) -> C<T> {
        let t = T::of(2.0) * r * r - T::one();
        let cheb = chebyshev_table(t, self.n_rho - 1);
        let s = T::of_usize(sigma);
        let mut acc = C::new(T::zero(), T::zero());
        for (mm, &(tv, td, ts)) in cheb.iter().enumerate() {
            let b = match deriv {
                0 => r.powi(sigma as i32) * tv,
                1 => {
                    let lead = if sigma >= 1 {
                        s * r.powi(sigma as i32 - 1) * tv
                    } else {
                        T::zero()
                    };
                    lead + T::of(4.0) * r.powi(sigma as i32 + 1) * td
                }
                2 => {
                    let lead = if sigma >= 2 {
                        s * (s - T::one()) * r.powi(sigma as i32 - 2) * tv
                    } else {
                        T::zero()
                    };
                    lead + (T::of(8.0) * s + T::of(4.0)) * r.powi(sigma as i32) * td
                        + T::of(16.0) * r.powi(sigma as i32 + 2) * ts
                }
                _ => panic!("deriv order {deriv} not supported"),
            };
            acc = acc + coeffs[mm] * b;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_cluster_at_one_and_avoid_pole() {
        let g = DiskGrid::<f64>::new(8, 16);
        assert!((g.rho[0] - 1.0).abs() < 1e-15);
        assert!(g.rho[15] > 0.0);
        assert!(g.rho.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn chebyshev_derivatives() {
        // T_3(t) = 4t^3 - 3t, T_3' = 12t^2 - 3, T_3'' = 24t.
        let t = 0.3f64;
        let c = chebyshev_table(t, 3);
        assert!((c[3].0 - (4.0 * t.powi(3) - 3.0 * t)).abs() < 1e-14);
        assert!((c[3].1 - (12.0 * t * t - 3.0)).abs() < 1e-14);
        assert!((c[3].2 - 24.0 * t).abs() < 1e-14);
    }

    #[test]
    fn lap_solve_mode_two_polynomial() {
        // u = rho^4 - rho^2: u'' + u'/rho - 4u/rho^2
        //   = (12 rho^2 - 2) + (4 rho^2 - 2) - (4 rho^2 - 4) = 12 rho^2.
        let g = DiskGrid::<f64>::new(8, 16);
        let m = g.n_rho;
        let mut rhs = Array1::from_elem(m, C::<f64>::new(0.0, 0.0));
        for j in 1..m {
            rhs[j] = C::new(12.0 * g.rho[j] * g.rho[j], 0.0);
        }
        let a = g.lap_solve(2, &rhs, C::new(0.0, 0.0));
        for &r in &[0.2, 0.55, 0.9] {
            let u = g.eval_radial(2, &a, r, 0);
            let expect = r.powi(4) - r * r;
            assert!((u.re - expect).abs() < 1e-12, "u({r}) = {} vs {expect}", u.re);
            assert!(u.im.abs() < 1e-13);
        }
    }

    #[test]
    fn radial_round_trip() {
        let g = DiskGrid::<f64>::new(8, 16);
        // Sample rho^3 (sigma = 1 mode shape with an extra rho^2 factor).
        let nodal = Array1::from_iter(g.rho.iter().map(|&r| C::new(r.powi(3), 0.0)));
        let a = g.radial_to_modal(1, &nodal);
        for &r in &[0.15, 0.6, 1.0] {
            let v = g.eval_radial(1, &a, r, 0);
            assert!((v.re - r.powi(3)).abs() < 1e-13);
        }
        let d = g.eval_radial(1, &a, 0.6, 1);
        assert!((d.re - 3.0 * 0.36).abs() < 1e-12);
        let dd = g.eval_radial(1, &a, 0.6, 2);
        assert!((dd.re - 6.0 * 0.6).abs() < 1e-11);
    }
}
