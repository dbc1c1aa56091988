//! Scalar fields on the unit disk in Fourier x radial-collocation form.

use crate::fourier::FourierSeries;
use crate::grid::{sigma_of, DiskGrid};
use crate::scalar::{cis, Scalar, C};
use ndarray::{Array1, Array2};
use std::sync::Arc;

/// Real scalar field on the closed unit disk.
///
/// `modal[[n, m]]` is the m-th radial coefficient of the mode `e^{i n theta}`
/// for `n >= 0`; negative modes are the conjugates. The radial basis for
/// mode n is `rho^{sigma(n)} T_m(2 rho^2 - 1)` on the grid's nodes.
#[derive(Debug, Clone)]
pub struct DiskField<T> {
    grid: Arc<DiskGrid<T>>,
    modal: Array2<C<T>>,
}

/// Nodal samples of a field and its polar derivatives, laid out `[j, k]`
/// over (rho_j, theta_k).
#[derive(Debug, Clone)]
pub struct NodalDerivs<T> {
    pub v: Array2<T>,
    pub dr: Array2<T>,
    pub drr: Array2<T>,
    pub dth: Array2<T>,
    pub drth: Array2<T>,
    pub dthth: Array2<T>,
}

/// Value and polar derivatives of a field at a single point.
#[derive(Debug, Clone, Copy)]
pub struct PointDerivs<T> {
    pub v: T,
    pub dr: T,
    pub drr: T,
    pub dth: T,
    pub drth: T,
    pub dthth: T,
}

impl<T: Scalar> DiskField<T> {
    pub fn zero(grid: Arc<DiskGrid<T>>) -> Self {
        let modal = Array2::from_elem(
            (grid.n_theta + 1, grid.n_rho),
            C::new(T::zero(), T::zero()),
        );
        Self { grid, modal }
    }

    pub fn grid(&self) -> &Arc<DiskGrid<T>> {
        &self.grid
    }

    pub fn modal(&self) -> &Array2<C<T>> {
        &self.modal
    }

    /// Radial modal coefficients of mode `n >= 0`.
    pub fn mode(&self, n: usize) -> Array1<C<T>> {
        self.modal.row(n).to_owned()
    }

    /// Build from nodal samples `values[[j, k]]`.
    pub fn from_nodal(grid: Arc<DiskGrid<T>>, values: &Array2<T>) -> Self {
        let m = grid.n_rho;
        let k_len = grid.n_nodes_theta;
        assert_eq!(values.dim(), (m, k_len));
        let mut modal = Array2::from_elem((grid.n_theta + 1, m), C::new(T::zero(), T::zero()));
        for n in 0..=grid.n_theta {
            let mut profile = Array1::from_elem(m, C::new(T::zero(), T::zero()));
            for j in 0..m {
                let mut acc = C::new(T::zero(), T::zero());
                for k in 0..k_len {
                    acc = acc + cis(-T::of_usize(n) * grid.theta[k]) * values[[j, k]];
                }
                profile[j] = acc / T::of_usize(k_len);
            }
            let coeffs = grid.radial_to_modal(sigma_of(n), &profile);
            for mm in 0..m {
                modal[[n, mm]] = coeffs[mm];
            }
        }
        Self { grid, modal }
    }

    /// Build from per-mode nodal radial profiles (complex, modes `n >= 0`).
    pub fn from_mode_profiles(
        grid: Arc<DiskGrid<T>>,
        profiles: &[(usize, Array1<C<T>>)],
    ) -> Self {
        let mut field = Self::zero(grid.clone());
        for (n, profile) in profiles {
            let coeffs = grid.radial_to_modal(sigma_of(*n), profile);
            for mm in 0..grid.n_rho {
                field.modal[[*n, mm]] = field.modal[[*n, mm]] + coeffs[mm];
            }
        }
        field
    }

    /// Set the modal coefficients of one mode directly.
    pub fn set_mode(&mut self, n: usize, coeffs: &Array1<C<T>>) {
        for mm in 0..self.grid.n_rho {
            self.modal[[n, mm]] = coeffs[mm];
        }
    }

    fn synthesize(&self, radial: impl Fn(usize, usize) -> Array1<C<T>>, n_factor: usize) -> Array2<T> {
        // n_factor encodes the theta-derivative order applied as (i n)^order.
        let m = self.grid.n_rho;
        let k_len = self.grid.n_nodes_theta;
        let mut out = Array2::zeros((m, k_len));
        for n in 0..=self.grid.n_theta {
            let prof = radial(n, sigma_of(n));
            let inf = match n_factor {
                0 => C::new(T::one(), T::zero()),
                1 => C::new(T::zero(), T::of_usize(n)),
                2 => C::new(-T::of_usize(n * n), T::zero()),
                _ => unreachable!(),
            };
            for k in 0..k_len {
                let e = cis(T::of_usize(n) * self.grid.theta[k]) * inf;
                for j in 0..m {
                    let term = prof[j] * e;
                    out[[j, k]] = out[[j, k]]
                        + if n == 0 { term.re } else { T::of(2.0) * term.re };
                }
            }
        }
        out
    }

    fn apply_radial(&self, n: usize, mat: &Array2<T>) -> Array1<C<T>> {
        let m = self.grid.n_rho;
        let mut out = Array1::from_elem(m, C::new(T::zero(), T::zero()));
        for j in 0..m {
            let mut acc = C::new(T::zero(), T::zero());
            for mm in 0..m {
                acc = acc + self.modal[[n, mm]] * mat[[j, mm]];
            }
            out[j] = acc;
        }
        out
    }

    /// Nodal values `[j, k]`.
    pub fn nodal(&self) -> Array2<T> {
        self.synthesize(|n, s| self.apply_radial(n, self.grid.value_matrix(s)), 0)
    }

    /// Nodal values and all first/second polar derivatives.
    pub fn nodal_derivs(&self) -> NodalDerivs<T> {
        let v = self.synthesize(|n, s| self.apply_radial(n, self.grid.value_matrix(s)), 0);
        let dr = self.synthesize(|n, s| self.apply_radial(n, self.grid.d1_matrix(s)), 0);
        let drr = self.synthesize(|n, s| self.apply_radial(n, self.grid.d2_matrix(s)), 0);
        let dth = self.synthesize(|n, s| self.apply_radial(n, self.grid.value_matrix(s)), 1);
        let drth = self.synthesize(|n, s| self.apply_radial(n, self.grid.d1_matrix(s)), 1);
        let dthth = self.synthesize(|n, s| self.apply_radial(n, self.grid.value_matrix(s)), 2);
        NodalDerivs { v, dr, drr, dth, drth, dthth }
    }

    /// Boundary trace at `rho = 1` as a Fourier series.
    pub fn trace(&self) -> FourierSeries<T> {
        let coeffs = (0..=self.grid.n_theta)
            .map(|n| {
                let mut acc = C::new(T::zero(), T::zero());
                for mm in 0..self.grid.n_rho {
                    acc = acc + self.modal[[n, mm]] * self.grid.value_matrix(sigma_of(n))[[0, mm]];
                }
                acc
            })
            .collect();
        FourierSeries::from_coeffs(coeffs)
    }

    /// Radial derivative trace at `rho = 1`.
    pub fn trace_dr(&self) -> FourierSeries<T> {
        let coeffs = (0..=self.grid.n_theta)
            .map(|n| {
                let mut acc = C::new(T::zero(), T::zero());
                for mm in 0..self.grid.n_rho {
                    acc = acc + self.modal[[n, mm]] * self.grid.d1_matrix(sigma_of(n))[[0, mm]];
                }
                acc
            })
            .collect();
        FourierSeries::from_coeffs(coeffs)
    }

    /// Value and polar derivatives at an arbitrary point of the closed disk.
    pub fn eval_all(&self, r: T, theta: T) -> PointDerivs<T> {
        let mut out = PointDerivs {
            v: T::zero(),
            dr: T::zero(),
            drr: T::zero(),
            dth: T::zero(),
            drth: T::zero(),
            dthth: T::zero(),
        };
        for n in 0..=self.grid.n_theta {
            let s = sigma_of(n);
            let coeffs = self.mode(n);
            let v = self.grid.eval_radial(s, &coeffs, r, 0);
            let d1 = self.grid.eval_radial(s, &coeffs, r, 1);
            let d2 = self.grid.eval_radial(s, &coeffs, r, 2);
            let e = cis(T::of_usize(n) * theta);
            let w = if n == 0 { T::one() } else { T::of(2.0) };
            let i_n = C::new(T::zero(), T::of_usize(n));
            out.v = out.v + w * (v * e).re;
            out.dr = out.dr + w * (d1 * e).re;
            out.drr = out.drr + w * (d2 * e).re;
            out.dth = out.dth + w * (v * i_n * e).re;
            out.drth = out.drth + w * (d1 * i_n * e).re;
            out.dthth = out.dthth - w * T::of_usize(n * n) * (v * e).re;
        }
        out
    }

    pub fn eval(&self, r: T, theta: T) -> T {
        let mut acc = T::zero();
        for n in 0..=self.grid.n_theta {
            let coeffs = self.mode(n);
            let v = self.grid.eval_radial(sigma_of(n), &coeffs, r, 0);
            let e = cis(T::of_usize(n) * theta);
            let w = if n == 0 { T::one() } else { T::of(2.0) };
            acc = acc + w * (v * e).re;
        }
        acc
    }

    /// d/dx in Cartesian coordinates of the disk plane, computed modally:
    /// `d_x = e^{i theta}(d_rho + i d_theta / rho)/2 + e^{-i theta}(d_rho - i d_theta / rho)/2`.
    pub fn d_x(&self) -> Self {
        let m = self.grid.n_rho;
        let n_max = self.grid.n_theta;
        // p_plus[n] = u_n' - n u_n / rho feeds mode n + 1;
        // p_minus[n] = u_n' + n u_n / rho feeds mode n - 1.
        let mut plus: Vec<Array1<C<T>>> = Vec::with_capacity(n_max + 1);
        let mut minus: Vec<Array1<C<T>>> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let s = sigma_of(n);
            let v = self.apply_radial(n, self.grid.value_matrix(s));
            let d = self.apply_radial(n, self.grid.d1_matrix(s));
            let mut p = Array1::from_elem(m, C::new(T::zero(), T::zero()));
            let mut q = Array1::from_elem(m, C::new(T::zero(), T::zero()));
            for j in 0..m {
                let ratio = v[j] * (T::of_usize(n) / self.grid.rho[j]);
                p[j] = d[j] - ratio;
                q[j] = d[j] + ratio;
            }
            plus.push(p);
            minus.push(q);
        }
        let mut profiles: Vec<(usize, Array1<C<T>>)> = Vec::new();
        // Mode 0 receives Re(p_minus[1]).
        let mut zero = Array1::from_elem(m, C::new(T::zero(), T::zero()));
        if n_max >= 1 {
            for j in 0..m {
                zero[j] = C::new(minus[1][j].re, T::zero());
            }
        }
        profiles.push((0, zero));
        for mode in 1..=n_max {
            let mut prof = Array1::from_elem(m, C::new(T::zero(), T::zero()));
            for j in 0..m {
                let mut acc = plus[mode - 1][j] * T::of(0.5);
                if mode + 1 <= n_max {
                    acc = acc + minus[mode + 1][j] * T::of(0.5);
                }
                prof[j] = acc;
            }
            profiles.push((mode, prof));
        }
        Self::from_mode_profiles(self.grid.clone(), &profiles)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            grid: self.grid.clone(),
            modal: &self.modal + &other.modal,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            grid: self.grid.clone(),
            modal: &self.modal - &other.modal,
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            grid: self.grid.clone(),
            modal: self.modal.mapv(|z| z * s),
        }
    }

    /// Sup norm over the collocation nodes.
    pub fn sup_norm(&self) -> T {
        self.nodal()
            .iter()
            .map(|v| v.abs())
            .fold(T::zero(), T::max)
    }
}
