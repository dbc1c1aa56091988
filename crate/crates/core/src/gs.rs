//! Newton solver for the rescaled semilinear Dirichlet problem
//!
//! ```text
//! Lap phi - (eps/(R + eps x)) d_x phi = a R^2 + b + 2 a R eps x + Rem(x, phi),
//! phi = 0 on the boundary,
//! ```
//!
//! pulled back to the unit disk through [`DomainMap`], together with
//! the shape derivative of the solution and the squared boundary
//! gradient.
//!
//! The remainder for the generic family is
//! `Rem = eps^2 a x^2 + (R + eps x)^2 H1'(eps^2 phi) - (1/2) Ftilde1'(eps^2 phi)`;
//! the degenerate family replaces the last term by the exact swirl
//! contribution `-(eps F_R + Ftilde(eps^2 phi)) Ftilde'(eps^2 phi)`
//! (and has `b = 0`).

use crate::constants::ProblemConstants;
use crate::error::{GsError, Result};
use crate::field::DiskField;
use crate::fourier::FourierSeries;
use crate::grid::DiskGrid;
use crate::map::DomainMap;
use crate::operator::{LinearOptions, MappedOperator};
use crate::profile::{Family, ProfileFunctions};
use crate::scalar::{Scalar, C};
use ndarray::{Array1, Array2};
use std::sync::Arc;

/// Newton options; the linear sub-solves use [`LinearOptions`].
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions<T> {
    pub tol_newton: T,
    pub max_iter: usize,
    pub linear: LinearOptions<T>,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tol_newton: T::of(1e-11),
            max_iter: 25,
            linear: LinearOptions::default(),
        }
    }
}

/// Converged Dirichlet solve with its diagnostics.
#[derive(Debug, Clone)]
pub struct DirichletSolution<T> {
    pub phi: DiskField<T>,
    pub map: DomainMap<T>,
    pub iterations: usize,
    pub residual: T,
    /// Sup norms of the Newton increments, in order.
    pub increments: Vec<T>,
}

/// The radial leading-order solution `phi0 = A0 (rho^2 - 1)`.
pub fn phi0_field<T: Scalar>(grid: Arc<DiskGrid<T>>, a0: T) -> DiskField<T> {
    let m = grid.n_rho;
    let mut prof = Array1::from_elem(m, C::new(T::zero(), T::zero()));
    for j in 0..m {
        prof[j] = C::new(a0 * (grid.rho[j] * grid.rho[j] - T::one()), T::zero());
    }
    DiskField::from_mode_profiles(grid, &[(0, prof)])
}

/// Rescaled horizontal coordinate `x = s(theta) rho cos theta` at the nodes.
fn x_nodal<T: Scalar>(grid: &DiskGrid<T>, map: &DomainMap<T>) -> Array2<T> {
    let mut x = Array2::zeros((grid.n_rho, grid.n_nodes_theta));
    for k in 0..grid.n_nodes_theta {
        let s = map.scale(grid.theta[k]);
        let c = grid.theta[k].cos();
        for j in 0..grid.n_rho {
            x[[j, k]] = s * grid.rho[j] * c;
        }
    }
    x
}

/// Full right-hand side `a R^2 + b + 2 a R eps x + Rem(x, phi)` at the nodes.
fn rhs_nodal<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &ProfileFunctions<T>,
    x: &Array2<T>,
    phi: &Array2<T>,
) -> Array2<T> {
    let eps = consts.eps;
    let big_r = consts.big_r;
    let a = consts.a;
    let base = a * big_r * big_r + consts.b;
    let mut out = Array2::zeros(x.dim());
    for (i, slot) in out.iter_mut().enumerate() {
        let xi = x.as_slice().unwrap()[i];
        let psi = eps * eps * phi.as_slice().unwrap()[i];
        let r = big_r + eps * xi;
        let swirl = match consts.family {
            Family::Generic => -profile.ftilde1_d1(psi) / T::of(2.0),
            Family::Degenerate => {
                -(eps * consts.f_r + profile.ftilde.eval(psi)) * profile.ftilde.d1(psi)
            }
        };
        *slot = base
            + T::of(2.0) * a * big_r * eps * xi
            + eps * eps * a * xi * xi
            + r * r * profile.h1_d1(psi)
            + swirl;
    }
    out
}

/// Derivative of the right-hand side with respect to `phi` at the nodes
/// (the potential of the Newton linearization).
fn potential_nodal<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &ProfileFunctions<T>,
    x: &Array2<T>,
    phi: &Array2<T>,
) -> Array2<T> {
    let eps = consts.eps;
    let eps2 = eps * eps;
    let big_r = consts.big_r;
    let mut out = Array2::zeros(x.dim());
    for (i, slot) in out.iter_mut().enumerate() {
        let xi = x.as_slice().unwrap()[i];
        let psi = eps2 * phi.as_slice().unwrap()[i];
        let r = big_r + eps * xi;
        let swirl = match consts.family {
            Family::Generic => -profile.ftilde1_d2(psi) / T::of(2.0),
            Family::Degenerate => {
                let fd = profile.ftilde.d1(psi);
                -(fd * fd + (eps * consts.f_r + profile.ftilde.eval(psi)) * profile.ftilde.d2(psi))
            }
        };
        *slot = eps2 * (r * r * profile.h1_d2(psi) + swirl);
    }
    out
}

fn interior_sup<T: Scalar>(grid: &DiskGrid<T>, a: &Array2<T>) -> T {
    let mut sup = T::zero();
    for j in 1..grid.n_rho {
        for k in 0..grid.n_nodes_theta {
            sup = sup.max(a[[j, k]].abs());
        }
    }
    sup
}

/// Solve the Dirichlet problem on the domain `{rho < 1 + eps B}` for a
/// given map (used directly by callers that vary the map).
pub fn solve_on_map<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &ProfileFunctions<T>,
    map: DomainMap<T>,
    grid: Arc<DiskGrid<T>>,
    opts: &SolverOptions<T>,
) -> Result<DirichletSolution<T>> {
    let drift = Some((consts.eps, consts.big_r));
    let op_plain = MappedOperator::new(grid.clone(), map.clone(), drift, None);
    let x = x_nodal(&grid, &map);
    let zero_trace = FourierSeries::zero(grid.n_theta);
    let mut phi = phi0_field(grid.clone(), consts.a0);
    let mut increments = Vec::new();
    for it in 0..opts.max_iter {
        let phi_nodal = phi.nodal();
        let res = &op_plain.apply(&phi) - &rhs_nodal(consts, profile, &x, &phi_nodal);
        let sup = interior_sup(&grid, &res);
        if sup <= opts.tol_newton {
            return Ok(DirichletSolution {
                phi,
                map,
                iterations: it,
                residual: sup,
                increments,
            });
        }
        let v = potential_nodal(consts, profile, &x, &phi_nodal);
        let op_lin = MappedOperator::new(grid.clone(), map.clone(), drift, Some(v));
        let delta = op_lin.solve_linear(&res.mapv(|r| -r), &zero_trace, opts.linear)?;
        increments.push(delta.sup_norm());
        phi = phi.add(&delta);
    }
    let phi_nodal = phi.nodal();
    let res = &op_plain.apply(&phi) - &rhs_nodal(consts, profile, &x, &phi_nodal);
    Err(GsError::NewtonDiverged {
        iterations: opts.max_iter,
        residual: interior_sup(&grid, &res).as_f64(),
    })
}

/// Solve the Dirichlet problem for the boundary shape `B`.
pub fn solve_dirichlet<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &ProfileFunctions<T>,
    b: &FourierSeries<T>,
    grid: Arc<DiskGrid<T>>,
    opts: &SolverOptions<T>,
) -> Result<DirichletSolution<T>> {
    let map = DomainMap::new(b, consts.eps)?;
    solve_on_map(consts, profile, map, grid, opts)
}

/// Nodal residual of the equation for an arbitrary field.
pub fn residual_nodal<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &ProfileFunctions<T>,
    b: &FourierSeries<T>,
    phi: &DiskField<T>,
) -> Result<Array2<T>> {
    let grid = phi.grid().clone();
    let map = DomainMap::new(b, consts.eps)?;
    let op = MappedOperator::new(grid.clone(), map.clone(), Some((consts.eps, consts.big_r)), None);
    let x = x_nodal(&grid, &map);
    Ok(&op.apply(phi) - &rhs_nodal(consts, profile, &x, &phi.nodal()))
}

/// Residual as a disk field (interior nodes are the meaningful ones).
pub fn residual_gs<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &ProfileFunctions<T>,
    b: &FourierSeries<T>,
    phi: &DiskField<T>,
) -> Result<DiskField<T>> {
    let nodal = residual_nodal(consts, profile, b, phi)?;
    Ok(DiskField::from_nodal(phi.grid().clone(), &nodal))
}

/// Linearized response of the Dirichlet solution at `B = 0` to the
/// boundary perturbation `Bdot`, at a fixed physical point.
///
/// Solves the linearized equation with boundary data
/// `Phi(1, theta) = -eps d_rho phi(1, theta) Bdot(theta)`.
pub fn shape_derivative<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &ProfileFunctions<T>,
    bdot: &FourierSeries<T>,
    grid: Arc<DiskGrid<T>>,
    opts: &SolverOptions<T>,
) -> Result<DiskField<T>> {
    let base = solve_on_map(
        consts,
        profile,
        DomainMap::identity(grid.n_theta),
        grid.clone(),
        opts,
    )?;
    let boundary = base
        .phi
        .trace_dr()
        .multiply(bdot)
        .scale(-consts.eps);
    let x = x_nodal(&grid, &base.map);
    let v = potential_nodal(consts, profile, &x, &base.phi.nodal());
    let op = MappedOperator::new(
        grid.clone(),
        base.map,
        Some((consts.eps, consts.big_r)),
        Some(v),
    );
    let rhs = Array2::zeros((grid.n_rho, grid.n_nodes_theta));
    op.solve_linear(&rhs, &boundary, opts.linear)
}

/// `theta -> |grad phi|^2` on the physical boundary, via the exact
/// chain rule through the domain map.
pub fn boundary_gradient<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &ProfileFunctions<T>,
    b: &FourierSeries<T>,
    grid: Arc<DiskGrid<T>>,
    opts: &SolverOptions<T>,
) -> Result<FourierSeries<T>> {
    let sol = solve_dirichlet(consts, profile, b, grid.clone(), opts)?;
    Ok(boundary_gradient_of(&sol.phi, &sol.map, grid.n_theta))
}

/// Boundary gradient of an already-computed pullback solution.
pub fn boundary_gradient_of<T: Scalar>(
    phi: &DiskField<T>,
    map: &DomainMap<T>,
    n_max: usize,
) -> FourierSeries<T> {
    // At rho = 1 with rho_phys = s: phi_rho' = phibar_rho / s,
    // phi_theta|phys = phibar_theta - (s'/s) phibar_rho, and
    // |grad phi|^2 = phi_rho'^2 + phi_theta|phys^2 / s^2.
    let dr = phi.trace_dr();
    let dth = phi.trace().derivative();
    let k = 4 * (n_max + 1);
    let two_pi = T::PI() * T::of(2.0);
    let vals: Vec<T> = (0..k)
        .map(|i| {
            let th = two_pi * T::of_usize(i) / T::of_usize(k);
            let s = map.scale(th);
            let q = map.scale_d1(th) / s;
            let a = dr.eval(th);
            let t = dth.eval(th) - q * a;
            (a * a + t * t) / (s * s)
        })
        .collect();
    FourierSeries::from_values(&vals, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::make_constants;
    use crate::profile::ProfileFn;

    fn fixture_a(eps: f64) -> (ProblemConstants<f64>, ProfileFunctions<f64>) {
        let p = ProfileFunctions::new(
            ProfileFn::linear(1.0),
            ProfileFn::linear(-2.0),
            Family::Generic,
        )
        .unwrap();
        let c = make_constants(&p, 2.0, eps).unwrap();
        (c, p)
    }

    fn grid() -> Arc<DiskGrid<f64>> {
        DiskGrid::new(12, 20)
    }

    #[test]
    fn zero_eps_recovers_phi0() {
        let (c, p) = fixture_a(0.0);
        let g = grid();
        let sol = solve_dirichlet(&c, &p, &FourierSeries::zero(12), g.clone(), &SolverOptions::default())
            .unwrap();
        let phi0 = phi0_field(g, c.a0);
        assert!(sol.phi.sub(&phi0).sup_norm() < 1e-12);
    }

    #[test]
    fn first_order_expansion_fitted_order() {
        // sup |phi - phi0 - eps A1 (rho^3 - rho) cos theta| = O(eps^2).
        let g = grid();
        let epses = [0.04, 0.02, 0.01];
        let mut errs = Vec::new();
        for &eps in &epses {
            let (c, p) = fixture_a(eps);
            let sol =
                solve_dirichlet(&c, &p, &FourierSeries::zero(12), g.clone(), &SolverOptions::default())
                    .unwrap();
            let mut sup: f64 = 0.0;
            for j in 0..g.n_rho {
                for k in 0..g.n_nodes_theta {
                    let (r, th) = (g.rho[j], g.theta[k]);
                    let first = c.a0 * (r * r - 1.0) + eps * c.a1 * (r.powi(3) - r) * th.cos();
                    sup = sup.max((sol.phi.eval(r, th) - first).abs());
                }
            }
            errs.push(sup);
        }
        let order = (errs[1] / errs[0]).ln() / (0.5f64).ln();
        let order2 = (errs[2] / errs[1]).ln() / (0.5f64).ln();
        assert!(order > 1.8 && order < 2.2, "order {order}");
        assert!(order2 > 1.8 && order2 < 2.2, "order {order2}");
    }

    #[test]
    fn interior_negativity_with_shape() {
        let (c, p) = fixture_a(0.01);
        let g = grid();
        let b = FourierSeries::cosine(2, 0.3, 12);
        let sol = solve_dirichlet(&c, &p, &b, g.clone(), &SolverOptions::default()).unwrap();
        let nodal = sol.phi.nodal();
        for j in 1..g.n_rho {
            for k in 0..g.n_nodes_theta {
                assert!(nodal[[j, k]] < 0.0, "phi >= 0 at interior node");
            }
        }
    }

    #[test]
    fn residual_examples() {
        let (c, p) = fixture_a(0.0);
        let g = grid();
        let b = FourierSeries::zero(12);
        let phi0 = phi0_field(g.clone(), c.a0);
        let r0 = residual_nodal(&c, &p, &b, &phi0).unwrap();
        assert!(interior_sup(&g, &r0) < 1e-12);
        // Adding 0.1 (rho^2 - 1) adds Laplacian 0.4 to the residual.
        let bump = phi0_field(g.clone(), 0.1);
        let r1 = residual_nodal(&c, &p, &b, &phi0.add(&bump)).unwrap();
        for j in 1..g.n_rho {
            for k in 0..g.n_nodes_theta {
                assert!((r1[[j, k]] - 0.4).abs() < 1e-11);
            }
        }
        // Residual of a converged solve is at tolerance.
        let (c, p) = fixture_a(0.01);
        let sol = solve_dirichlet(&c, &p, &b, g.clone(), &SolverOptions::default()).unwrap();
        let r = residual_nodal(&c, &p, &b, &sol.phi).unwrap();
        assert!(interior_sup(&g, &r) <= 1e-10);
    }

    #[test]
    fn evenness_for_even_shape() {
        let (c, p) = fixture_a(0.02);
        let g = grid();
        let b = FourierSeries::cosine(2, 0.3, 12).add(&FourierSeries::cosine(3, 0.1, 12));
        let sol = solve_dirichlet(&c, &p, &b, g, &SolverOptions::default()).unwrap();
        for &(r, th) in &[(0.3, 0.7), (0.8, 2.1), (0.95, 2.9)] {
            let d = (sol.phi.eval(r, th) - sol.phi.eval(r, -th)).abs();
            assert!(d < 1e-11, "evenness violated by {d}");
        }
    }

    #[test]
    fn shape_derivative_zero_and_oracle() {
        let (c, p) = fixture_a(0.02);
        let g = grid();
        let opts = SolverOptions::default();
        let z = shape_derivative(&c, &p, &FourierSeries::zero(12), g.clone(), &opts).unwrap();
        assert!(z.sup_norm() < 1e-12);

        // Finite-difference oracle at fixed physical points.
        let bdot = FourierSeries::cosine(2, 1.0, 12);
        let phi_dot = shape_derivative(&c, &p, &bdot, g.clone(), &opts).unwrap();
        let t = 1e-4;
        let sp = solve_dirichlet(&c, &p, &bdot.scale(t), g.clone(), &opts).unwrap();
        let sm = solve_dirichlet(&c, &p, &bdot.scale(-t), g.clone(), &opts).unwrap();
        for &(r, th) in &[(0.2, 0.4), (0.6, 1.5), (0.9, 3.0)] {
            let vp = sp.phi.eval(r / sp.map.scale(th), th);
            let vm = sm.phi.eval(r / sm.map.scale(th), th);
            let fd = (vp - vm) / (2.0 * t);
            assert!(
                (phi_dot.eval(r, th) - fd).abs() <= 1e-6,
                "fd mismatch at ({r},{th}): {} vs {}",
                phi_dot.eval(r, th),
                fd
            );
        }
    }

    #[test]
    fn shape_derivative_leading_order() {
        // Phi = -2 eps A0 P0 Bdot + O(eps^2).
        let g = grid();
        let bdot = FourierSeries::cosine(2, 1.0, 12);
        let epses = [0.04, 0.02, 0.01];
        let mut errs = Vec::new();
        for &eps in &epses {
            let (c, p) = fixture_a(eps);
            let phi_dot = shape_derivative(&c, &p, &bdot, g.clone(), &SolverOptions::default()).unwrap();
            let lead = crate::spectral::poisson_disk(g.clone(), &bdot).scale(-2.0 * eps * c.a0);
            errs.push(phi_dot.sub(&lead).sup_norm());
        }
        let order = (errs[2] / errs[0]).ln() / (0.25f64).ln();
        assert!(order > 1.8, "leading-order remainder order {order}");
    }

    #[test]
    fn newton_quadratic_tail() {
        // Use a strongly nonlinear profile so Newton takes several steps.
        let p = ProfileFunctions::new(
            ProfileFn::poly(vec![0.0, 1.0, 40.0, 30.0]),
            ProfileFn::poly(vec![0.0, -2.0, 25.0]),
            Family::Generic,
        )
        .unwrap();
        let c = make_constants(&p, 2.0, 0.04).unwrap();
        let g = grid();
        let sol = solve_dirichlet(&c, &p, &FourierSeries::zero(12), g, &SolverOptions::default())
            .unwrap();
        let inc = &sol.increments;
        assert!(inc.len() >= 2, "expected a multi-step Newton run");
        for w in inc.windows(2) {
            if w[0] < 1e-4 && w[1] > 1e-15 {
                assert!(
                    w[1] <= w[0].powf(1.5),
                    "tail not quadratic: {} after {}",
                    w[1],
                    w[0]
                );
            }
        }
    }

    #[test]
    fn boundary_gradient_values() {
        let g = grid();
        let (c, p) = fixture_a(0.0);
        let bg = boundary_gradient(&c, &p, &FourierSeries::zero(12), g.clone(), &SolverOptions::default())
            .unwrap();
        // 4 A0^2 = 6.25 for this profile.
        assert!((bg.eval(1.0) - 6.25).abs() < 1e-11);
        let (c, p) = fixture_a(0.01);
        let bg = boundary_gradient(&c, &p, &FourierSeries::zero(12), g, &SolverOptions::default())
            .unwrap();
        let expect = |th: f64| 6.25 + 8.0 * 0.01 * c.a0 * c.a1 * th.cos();
        for &th in &[0.0, 1.2, 2.8] {
            assert!((bg.eval(th) - expect(th)).abs() < 5.0 * 0.01f64.powi(2));
        }
    }
}
