//! Exact finite-Fourier disk operators: Poisson extension, the
//! Dirichlet-Neumann map, the shift operators `T` and `T'`, and the
//! projection onto the constraint space `X` of even series orthogonal
//! to `cos theta`.

use crate::error::Result;
use crate::field::DiskField;
use crate::fourier::FourierSeries;
use crate::grid::DiskGrid;
use crate::map::DomainMap;
use crate::operator::{LinearOptions, MappedOperator};
use crate::scalar::{Scalar, C};
use ndarray::{Array1, Array2};
use std::sync::Arc;

/// Harmonic extension on the unit disk: `P0 f = sum f_n rho^{|n|} e^{i n theta}`.
pub fn poisson_disk<T: Scalar>(grid: Arc<DiskGrid<T>>, f: &FourierSeries<T>) -> DiskField<T> {
    let m = grid.n_rho;
    let mut profiles = Vec::new();
    for n in 0..=grid.n_theta.min(f.n_max()) {
        let c = f.coeff(n as i64);
        let mut prof = Array1::from_elem(m, C::new(T::zero(), T::zero()));
        for j in 0..m {
            prof[j] = c * grid.rho[j].powi(n as i32);
        }
        profiles.push((n, prof));
    }
    DiskField::from_mode_profiles(grid, &profiles)
}

/// Pullback to the unit disk of the harmonic function on the domain
/// `{ rho < 1 + eps B(theta) }` with boundary trace `f`.
pub fn poisson_domain<T: Scalar>(
    grid: Arc<DiskGrid<T>>,
    f: &FourierSeries<T>,
    shape: &FourierSeries<T>,
    eps: T,
) -> Result<DiskField<T>> {
    let map = DomainMap::new(shape, eps)?;
    let op = MappedOperator::new(grid.clone(), map, None, None);
    let rhs = Array2::zeros((grid.n_rho, grid.n_nodes_theta));
    op.solve_linear(&rhs, f, LinearOptions::default())
}

/// Dirichlet-Neumann map of the disk: `Lam0 f = sum f_n |n| e^{i n theta}`.
pub fn dn_map_disk<T: Scalar>(f: &FourierSeries<T>) -> FourierSeries<T> {
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| *c * T::of_usize(n))
        .collect();
    FourierSeries::from_coeffs(coeffs)
}

/// `T f = sum_{n != 0} f_n (rho^{|n|-1} - rho^{|n|+1}) e^{i [n - sgn n] theta}`.
///
/// In the half-spectrum representation mode `m >= 1` of the output
/// carries `f_{m+1}`; mode 0 carries `f_1 + conj(f_1) = 2 Re f_1`.
pub fn op_t<T: Scalar>(grid: Arc<DiskGrid<T>>, f: &FourierSeries<T>) -> DiskField<T> {
    let m_rho = grid.n_rho;
    let mut profiles = Vec::new();
    for m in 0..grid.n_theta {
        let src = f.coeff((m + 1) as i64);
        let c = if m == 0 {
            C::new(T::of(2.0) * src.re, T::zero())
        } else {
            src
        };
        let mut prof = Array1::from_elem(m_rho, C::new(T::zero(), T::zero()));
        for j in 0..m_rho {
            let rho = grid.rho[j];
            prof[j] = c * (rho.powi(m as i32) - rho.powi(m as i32 + 2));
        }
        profiles.push((m, prof));
    }
    DiskField::from_mode_profiles(grid, &profiles)
}

/// Boundary counterpart `T' f = (1/2) sum_{n != 0} f_n e^{i [n - sgn n] theta}`.
pub fn op_tprime<T: Scalar>(f: &FourierSeries<T>) -> FourierSeries<T> {
    if f.n_max() == 0 {
        return FourierSeries::zero(0);
    }
    let half = T::of(0.5);
    let coeffs = (0..f.n_max())
        .map(|m| {
            let src = f.coeff((m + 1) as i64);
            if m == 0 {
                C::new(src.re, T::zero())
            } else {
                src * half
            }
        })
        .collect();
    FourierSeries::from_coeffs(coeffs)
}

/// Orthogonal projection onto `X = { f even, <f, cos theta> = 0 }`:
/// even-symmetrize (real parts of coefficients) and drop mode 1.
pub fn project_x<T: Scalar>(f: &FourierSeries<T>) -> FourierSeries<T> {
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            if n == 1 {
                C::new(T::zero(), T::zero())
            } else {
                C::new(c.re, T::zero())
            }
        })
        .collect();
    FourierSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid() -> Arc<DiskGrid<f64>> {
        DiskGrid::new(10, 16)
    }

    #[test]
    fn poisson_disk_examples() {
        let g = grid();
        // cos theta -> rho cos theta
        let f = FourierSeries::cosine(1, 1.0, 10);
        let u = poisson_disk(g.clone(), &f);
        assert!((u.eval(0.6, 0.9) - 0.6 * 0.9f64.cos()).abs() < 1e-13);
        // cos^3 theta -> (1/4) rho^3 cos 3theta + (3/4) rho cos theta
        let c1 = FourierSeries::cosine(1, 1.0, 10);
        let f3 = c1.multiply(&c1).multiply(&c1);
        let u3 = poisson_disk(g.clone(), &f3);
        for &(r, th) in &[(0.5f64, 0.3f64), (0.9, 2.2)] {
            let expect = 0.25 * r.powi(3) * (3.0 * th as f64).cos() + 0.75 * r * (th as f64).cos();
            assert!((u3.eval(r, th) - expect).abs() < 1e-13);
        }
        // constants are harmonic
        let uc = poisson_disk(g, &FourierSeries::constant(1.0, 10));
        assert!((uc.eval(0.2, 1.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn poisson_domain_reduces_to_disk_at_zero_eps() {
        let g = grid();
        let f = FourierSeries::cosine(2, 0.7, 10).add(&FourierSeries::constant(0.2, 10));
        let b = FourierSeries::cosine(2, 0.4, 10);
        let u = poisson_domain(g.clone(), &f, &b, 0.0).unwrap();
        let u0 = poisson_disk(g, &f);
        assert!(u.sub(&u0).sup_norm() < 1e-12);
    }

    #[test]
    fn poisson_domain_scaled_disk() {
        // B constant beta: harmonic extension of cos theta on the disk of
        // radius 1 + eps beta is r' cos theta / (1 + eps beta); its pullback
        // to the unit disk is rho cos theta.
        let g = grid();
        let b = FourierSeries::constant(0.8, 10);
        let u = poisson_domain(g, &FourierSeries::cosine(1, 1.0, 10), &b, 0.1).unwrap();
        for &(r, th) in &[(0.3, 0.5), (0.9, 4.0)] {
            assert!((u.eval(r, th) - r * (th as f64).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn poisson_domain_constant_trace() {
        let g = grid();
        let b = FourierSeries::cosine(3, 0.5, 10);
        let u = poisson_domain(g, &FourierSeries::constant(1.0, 10), &b, 0.05).unwrap();
        for &(r, th) in &[(0.1, 0.0), (0.7, 2.0), (1.0, 5.0)] {
            assert!((u.eval(r, th) - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn dn_map_examples() {
        let f = FourierSeries::<f64>::cosine(2, 1.0, 6);
        let l = dn_map_disk(&f);
        assert!((l.eval(0.4) - 2.0 * (0.8f64).cos()).abs() < 1e-14);
        let c = dn_map_disk(&FourierSeries::constant(3.0, 6));
        assert!(c.sup_norm() < 1e-14);
        let c1 = dn_map_disk(&FourierSeries::cosine(1, 1.0, 6));
        assert!((c1.eval(1.3) - (1.3f64).cos()).abs() < 1e-14);
    }

    #[test]
    fn op_t_examples() {
        let g = grid();
        let t2 = op_t(g.clone(), &FourierSeries::cosine(2, 1.0, 10));
        for &(r, th) in &[(0.4f64, 0.6f64), (0.85, 3.1)] {
            let expect = (r - r.powi(3)) * (th as f64).cos();
            assert!((t2.eval(r, th) - expect).abs() < 1e-13);
        }
        let tc = op_t(g.clone(), &FourierSeries::constant(2.0, 10));
        assert!(tc.sup_norm() < 1e-13);
        let t3 = op_t(g, &FourierSeries::cosine(3, 1.0, 10));
        for &(r, th) in &[(0.5f64, 1.0f64), (0.95, 2.0)] {
            let expect = (r.powi(2) - r.powi(4)) * (2.0 * th as f64).cos();
            assert!((t3.eval(r, th) - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn op_t_boundary_trace_vanishes() {
        let g = grid();
        let f = FourierSeries::cosine(2, 1.0, 10).add(&FourierSeries::cosine(4, -0.3, 10));
        let t = op_t(g, &f);
        assert!(t.trace().sup_norm() < 1e-12);
    }

    #[test]
    fn op_tprime_examples() {
        let t2 = op_tprime(&FourierSeries::<f64>::cosine(2, 1.0, 8));
        assert!((t2.eval(0.7) - 0.5 * (0.7f64).cos()).abs() < 1e-14);
        let tc = op_tprime(&FourierSeries::<f64>::constant(5.0, 8));
        assert!(tc.sup_norm() < 1e-14);
        let t3 = op_tprime(&FourierSeries::<f64>::cosine(3, 1.0, 8));
        assert!((t3.eval(1.1) - 0.5 * (2.2f64).cos()).abs() < 1e-14);
    }

    #[test]
    fn project_x_examples() {
        let z = project_x(&FourierSeries::<f64>::cosine(1, 1.0, 4));
        assert!(z.sup_norm() < 1e-14);
        let z2 = project_x(&FourierSeries::<f64>::sine(2, 1.0, 4));
        assert!(z2.sup_norm() < 1e-14);
        let f = FourierSeries::constant(3.0, 4)
            .add(&FourierSeries::cosine(2, 1.0, 4))
            .add(&FourierSeries::cosine(1, 5.0, 4));
        let p = project_x(&f);
        let expect = FourierSeries::constant(3.0, 4).add(&FourierSeries::cosine(2, 1.0, 4));
        assert!(p.sub(&expect).sup_norm() < 1e-14);
        assert!(p.is_in_x());
    }

    #[test]
    fn project_x_idempotent_coefficients() {
        let f = FourierSeries::cosine(1, 2.0, 6)
            .add(&FourierSeries::sine(3, 1.0, 6))
            .add(&FourierSeries::cosine(4, 0.5, 6));
        let p1 = project_x(&f);
        let p2 = project_x(&p1);
        for n in 0..=6 {
            assert_eq!(p1.coeff(n), p2.coeff(n));
        }
    }

    #[test]
    fn dn_map_self_adjoint() {
        let f = FourierSeries::<f64>::cosine(2, 1.0, 6).add(&FourierSeries::sine(3, 0.4, 6));
        let g = FourierSeries::cosine(3, 0.7, 6).add(&FourierSeries::constant(1.1, 6));
        let lhs = dn_map_disk(&f).inner(&g);
        let rhs = f.inner(&dn_map_disk(&g));
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn poisson_trace_round_trip() {
        let g = grid();
        let f = FourierSeries::cosine(3, 0.6, 10).add(&FourierSeries::sine(2, -0.2, 10));
        let u = poisson_disk(g, &f);
        let tr = u.trace();
        assert!(tr.sub(&f).sup_norm() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        /// The field Phi2 = -(A0/2R) sum Bdot_n rho^{|n|+1} e^{i[n - sgn n]theta}
        /// satisfies Lap Phi2 = (1/R) d_x (-2 A0 P0 Bdot) for even Bdot.
        #[test]
        fn laplacian_identity_for_t(
            b0 in -1.0f64..1.0,
            b2 in -1.0f64..1.0,
            b3 in -1.0f64..1.0,
            b5 in -1.0f64..1.0,
        ) {
            let g = DiskGrid::<f64>::new(10, 20);
            let (a0, big_r) = (1.25, 2.0);
            let bdot = FourierSeries::cosine(0, b0, 8)
                .add(&FourierSeries::cosine(2, b2, 8))
                .add(&FourierSeries::cosine(3, b3, 8))
                .add(&FourierSeries::cosine(5, b5, 8));
            // Phi2 built mode by mode: output mode m receives Bdot_{m+1}
            // (doubled at m = 0) with radial profile rho^{m+2}.
            let mut profiles = Vec::new();
            for m in 0..g.n_theta {
                let src = bdot.coeff((m + 1) as i64);
                let c = if m == 0 { C::new(2.0 * src.re, 0.0) } else { src };
                let scaled = c * (-a0 / (2.0 * big_r));
                let mut prof = Array1::from_elem(g.n_rho, C::new(0.0, 0.0));
                for j in 0..g.n_rho {
                    prof[j] = scaled * g.rho[j].powi(m as i32 + 2);
                }
                profiles.push((m, prof));
            }
            let phi2 = DiskField::from_mode_profiles(g.clone(), &profiles);
            let lap = MappedOperator::new(g.clone(), DomainMap::identity(8), None, None)
                .apply(&phi2);
            let phi0 = poisson_disk(g.clone(), &bdot.scale(-2.0 * a0));
            let rhs = phi0.d_x().scale(1.0 / big_r).nodal();
            let err = (&lap - &rhs)
                .iter()
                .map(|e| e.abs())
                .fold(0.0, f64::max);
            prop_assert!(err < 1e-9, "identity residual {err}");
        }
    }
}
