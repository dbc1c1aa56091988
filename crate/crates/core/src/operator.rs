//! Pulled-back elliptic operator on the unit disk and its linear solver.
//!
//! For `phibar(rho, theta) = phi((1 + eps B(theta)) rho, theta)` the
//! physical Laplacian becomes, with `s = 1 + eps B`,
//!
//! ```text
//! Lap phi = (1 + (s'/s)^2)/s^2        phibar_rr
//!         + (1 - s''/s + 2(s'/s)^2)/(s^2 rho)  phibar_r
//!         - 2 (s'/s)/(s^2 rho)        phibar_rt
//!         + 1/(s^2 rho^2)             phibar_tt
//! ```
//!
//! and the toroidal drift `-(eps/(R + eps x)) d_x` picks up the same
//! chain rule. The full linear operator optionally adds a nodal
//! multiplicative potential (the Newton linearization of the
//! semilinear term).
//!
//! Linear systems are solved by Richardson iteration preconditioned
//! with the exact per-mode disk Laplacian, which is factorized once on
//! the grid. The perturbation away from the plain Laplacian is of size
//! `O(eps + |eps B|)`, so a handful of sweeps reach round-off.

use crate::error::{GsError, Result};
use crate::field::DiskField;
use crate::fourier::FourierSeries;
use crate::grid::DiskGrid;
use crate::map::DomainMap;
use crate::scalar::{cis, Scalar, C};
use ndarray::{Array1, Array2};
use std::sync::Arc;

/// Linear elliptic operator `Lap_mapped - drift - potential` on the disk.
pub struct MappedOperator<T> {
    pub grid: Arc<DiskGrid<T>>,
    map: DomainMap<T>,
    /// Metric coefficient arrays over nodes `[j, k]`.
    c_rr: Array2<T>,
    c_r: Array2<T>,
    c_rt: Array2<T>,
    c_tt: Array2<T>,
    /// Drift coefficients multiplying `phibar_r` and `phibar_t`; zero
    /// when the drift is disabled.
    d_r: Array2<T>,
    d_t: Array2<T>,
    /// Optional nodal potential `V`, applied as `- V phibar`.
    potential: Option<Array2<T>>,
}

/// Options for the preconditioned Richardson solve.
#[derive(Debug, Clone, Copy)]
pub struct LinearOptions<T> {
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Scalar> Default for LinearOptions<T> {
    fn default() -> Self {
        Self { tol: T::of(1e-13), max_iter: 400 }
    }
}

impl<T: Scalar> MappedOperator<T> {
    /// Build the operator. `drift = Some((eps, big_r))` enables the
    /// `-(eps/(R + eps x)) d_x` term; `x = s rho cos theta`.
    pub fn new(
        grid: Arc<DiskGrid<T>>,
        map: DomainMap<T>,
        drift: Option<(T, T)>,
        potential: Option<Array2<T>>,
    ) -> Self {
        let m = grid.n_rho;
        let k_len = grid.n_nodes_theta;
        let mut c_rr = Array2::zeros((m, k_len));
        let mut c_r = Array2::zeros((m, k_len));
        let mut c_rt = Array2::zeros((m, k_len));
        let mut c_tt = Array2::zeros((m, k_len));
        let mut d_r = Array2::zeros((m, k_len));
        let mut d_t = Array2::zeros((m, k_len));
        for k in 0..k_len {
            let th = grid.theta[k];
            let s = map.scale(th);
            let s1 = map.scale_d1(th);
            let s2 = map.scale_d2(th);
            let q = s1 / s;
            let s_sq = s * s;
            for j in 0..m {
                let rho = grid.rho[j];
                c_rr[[j, k]] = (T::one() + q * q) / s_sq;
                c_r[[j, k]] = (T::one() - s2 / s + T::of(2.0) * q * q) / (s_sq * rho);
                c_rt[[j, k]] = -T::of(2.0) * q / (s_sq * rho);
                c_tt[[j, k]] = T::one() / (s_sq * rho * rho);
                if let Some((eps, big_r)) = drift {
                    let x = s * rho * th.cos();
                    let pref = eps / (big_r + eps * x);
                    // d_x phi = (cos/s + sin s'/s^2) phibar_r - sin/(s rho) phibar_t
                    d_r[[j, k]] = -pref * (th.cos() / s + th.sin() * s1 / s_sq);
                    d_t[[j, k]] = pref * th.sin() / (s * rho);
                }
            }
        }
        Self { grid, map, c_rr, c_r, c_rt, c_tt, d_r, d_t, potential }
    }

    pub fn map(&self) -> &DomainMap<T> {
        &self.map
    }

    /// Nodal action of the operator on a field (all node rows).
    pub fn apply(&self, phi: &DiskField<T>) -> Array2<T> {
        let d = phi.nodal_derivs();
        let m = self.grid.n_rho;
        let k_len = self.grid.n_nodes_theta;
        let mut out = Array2::zeros((m, k_len));
        for j in 0..m {
            for k in 0..k_len {
                let mut acc = self.c_rr[[j, k]] * d.drr[[j, k]]
                    + self.c_r[[j, k]] * d.dr[[j, k]]
                    + self.c_rt[[j, k]] * d.drth[[j, k]]
                    + self.c_tt[[j, k]] * d.dthth[[j, k]]
                    + self.d_r[[j, k]] * d.dr[[j, k]]
                    + self.d_t[[j, k]] * d.dth[[j, k]];
                if let Some(v) = &self.potential {
                    acc = acc - v[[j, k]] * d.v[[j, k]];
                }
                out[[j, k]] = acc;
            }
        }
        out
    }

    /// Disk-Laplacian preconditioner: solve `Lap0 u = rhs` (interior
    /// rows) with Dirichlet trace `boundary`.
    fn precondition(&self, rhs: &Array2<T>, boundary: &FourierSeries<T>) -> DiskField<T> {
        let grid = &self.grid;
        let m = grid.n_rho;
        let k_len = grid.n_nodes_theta;
        let mut field = DiskField::zero(grid.clone());
        for n in 0..=grid.n_theta {
            let mut hat = Array1::from_elem(m, C::new(T::zero(), T::zero()));
            for j in 1..m {
                let mut acc = C::new(T::zero(), T::zero());
                for k in 0..k_len {
                    acc = acc + cis(-T::of_usize(n) * grid.theta[k]) * rhs[[j, k]];
                }
                hat[j] = acc / T::of_usize(k_len);
            }
            let coeffs = grid.lap_solve(n, &hat, boundary.coeff(n as i64));
            field.set_mode(n, &coeffs);
        }
        field
    }

    fn interior_sup(&self, r: &Array2<T>) -> T {
        let mut sup = T::zero();
        for j in 1..self.grid.n_rho {
            for k in 0..self.grid.n_nodes_theta {
                sup = sup.max(r[[j, k]].abs());
            }
        }
        sup
    }

    /// Solve `A u = rhs` with Dirichlet trace `boundary` by
    /// preconditioned Richardson iteration.
    pub fn solve_linear(
        &self,
        rhs: &Array2<T>,
        boundary: &FourierSeries<T>,
        opts: LinearOptions<T>,
    ) -> Result<DiskField<T>> {
        let scale = T::one()
            .max(self.interior_sup(rhs))
            .max(boundary.sup_norm());
        let tol = opts.tol * scale;
        let mut u = self.precondition(rhs, boundary);
        let zero_trace = FourierSeries::zero(self.grid.n_theta);
        let mut last = T::infinity();
        let mut stagnant = 0usize;
        for it in 0..opts.max_iter {
            let au = self.apply(&u);
            let res = rhs - &au;
            let sup = self.interior_sup(&res);
            if sup <= tol {
                return Ok(u);
            }
            if sup >= last {
                stagnant += 1;
                if stagnant >= 4 {
                    return Err(GsError::NewtonDiverged {
                        iterations: it,
                        residual: sup.as_f64(),
                    });
                }
            } else {
                stagnant = 0;
            }
            last = sup;
            let corr = self.precondition(&res, &zero_trace);
            u = u.add(&corr);
        }
        Err(GsError::NewtonDiverged {
            iterations: opts.max_iter,
            residual: last.as_f64(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DiskGrid;

    #[test]
    fn identity_map_laplacian_of_quadratic() {
        // phi = rho^2 - 1 has Laplacian 4 everywhere.
        let grid = DiskGrid::<f64>::new(8, 16);
        let mut nodal = Array2::zeros((grid.n_rho, grid.n_nodes_theta));
        for j in 0..grid.n_rho {
            for k in 0..grid.n_nodes_theta {
                nodal[[j, k]] = grid.rho[j] * grid.rho[j] - 1.0;
            }
        }
        let phi = DiskField::from_nodal(grid.clone(), &nodal);
        let op = MappedOperator::new(grid, DomainMap::identity(8), None, None);
        let a = op.apply(&phi);
        for v in a.iter() {
            assert!((v - 4.0).abs() < 1e-10, "Laplacian value {v}");
        }
    }

    #[test]
    fn solve_linear_poisson_constant_rhs() {
        // Lap u = 4, u(1) = 0 has solution rho^2 - 1.
        let grid = DiskGrid::<f64>::new(8, 16);
        let rhs = Array2::from_elem((grid.n_rho, grid.n_nodes_theta), 4.0);
        let op = MappedOperator::new(grid.clone(), DomainMap::identity(8), None, None);
        let u = op
            .solve_linear(&rhs, &FourierSeries::zero(8), LinearOptions::default())
            .unwrap();
        for &(r, th) in &[(0.3, 1.0), (0.8, 2.5)] {
            assert!((u.eval(r, th) - (r * r - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn mapped_solve_agrees_with_scaled_disk() {
        // Harmonic extension of cos theta on a disk of radius 1 + eps*beta
        // pulled back to the unit disk: rho cos theta / (1 + eps beta) * (1 + eps beta) ...
        // The pullback of v(r') = r' cos theta / (1+eps beta) with boundary trace
        // v = cos theta at r' = 1 + eps beta is v(s rho) = rho cos theta.
        let grid = DiskGrid::<f64>::new(8, 16);
        let beta = FourierSeries::constant(0.5, 8);
        let map = DomainMap::new(&beta, 0.2).unwrap();
        let op = MappedOperator::new(grid.clone(), map, None, None);
        let rhs = Array2::zeros((grid.n_rho, grid.n_nodes_theta));
        let f = FourierSeries::cosine(1, 1.0, 8);
        let u = op.solve_linear(&rhs, &f, LinearOptions::default()).unwrap();
        // Pullback solution is rho cos theta exactly (boundary rho = 1).
        for &(r, th) in &[(0.4, 0.7), (0.9, 3.0)] {
            assert!((u.eval(r, th) - r * (th as f64).cos()).abs() < 1e-12);
        }
    }
}
