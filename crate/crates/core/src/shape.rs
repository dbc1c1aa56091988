//! The overdetermined layer: the compatibility constant `c_{eps,B}`,
//! the Neumann functional `F`, the normalized functional `G`, the
//! explicit linearization `D_B G(0,0)` with its closed-form inverse on
//! the constraint space `X`, and the quasi-Newton iteration solving
//! `G(eps, B) = 0`.
//!
//! The iteration keeps the frozen derivative `D_B G(0,0)`; the
//! underlying implicit-function argument is a contraction with exactly
//! this operator, so re-linearizing buys nothing at small `eps`.

use crate::constants::ProblemConstants;
use crate::error::{GsError, Result};
use crate::fourier::FourierSeries;
use crate::grid::DiskGrid;
use crate::gs::{boundary_gradient_of, solve_dirichlet, DirichletSolution, SolverOptions};
use crate::map::DomainMap;
use crate::scalar::{Scalar, C};
use crate::spectral::project_x;
use std::sync::Arc;

/// Options of the outer shape iteration.
#[derive(Debug, Clone, Copy)]
pub struct ShapeOptions<T> {
    pub tol_shape: T,
    pub max_iter: usize,
    /// Divergence guard on the sup norm of `B`.
    pub b_guard: T,
    /// Largest eps the perturbative iteration is trusted for.
    pub eps_max: T,
    /// Emit per-iteration CSV diagnostics through the logger.
    pub verbose: bool,
}

impl<T: Scalar> Default for ShapeOptions<T> {
    fn default() -> Self {
        Self {
            tol_shape: T::of(1e-9),
            max_iter: 40,
            b_guard: T::of(0.5),
            eps_max: T::of(0.05),
            verbose: false,
        }
    }
}

/// Converged (or final) state of the shape iteration.
#[derive(Debug, Clone)]
pub struct ShapeState<T> {
    /// Boundary shape, X-flagged (even, no `cos theta`).
    pub b: FourierSeries<T>,
    /// The compatibility constant `c_{eps,B}` at the final iterate.
    pub c_eps_b: T,
    /// Final residual series `project_X(G(eps, B))`.
    pub g_residual: FourierSeries<T>,
    pub iter: usize,
    pub converged: bool,
    /// The Dirichlet solve at the final shape, kept for assembly.
    pub solution: DirichletSolution<T>,
}

/// The series `theta -> R + eps (1 + eps B(theta)) cos theta` (the
/// cylindrical radius of the boundary curve).
fn boundary_radius<T: Scalar>(
    consts: &ProblemConstants<T>,
    map: &DomainMap<T>,
    n_max: usize,
) -> FourierSeries<T> {
    let k = 4 * (n_max + 1);
    let two_pi = T::PI() * T::of(2.0);
    let vals: Vec<T> = (0..k)
        .map(|i| {
            let th = two_pi * T::of_usize(i) / T::of_usize(k);
            consts.big_r + consts.eps * map.scale(th) * th.cos()
        })
        .collect();
    FourierSeries::from_values(&vals, n_max)
}

/// `int_0^{2 pi} f(theta) cos theta dtheta` by the uniform trapezoid
/// rule, which is exact for trigonometric polynomials at this sampling.
fn integrate_against_cos<T: Scalar>(f: &FourierSeries<T>) -> T {
    let k = 4 * (f.n_max() + 2);
    let two_pi = T::PI() * T::of(2.0);
    let h = two_pi / T::of_usize(k);
    (0..k)
        .map(|i| {
            let th = two_pi * T::of_usize(i) / T::of_usize(k);
            f.eval(th) * th.cos() * h
        })
        .sum()
}

/// Numerator and denominator integrals of `c_{eps,B}` for a converged
/// solve.
pub fn neumann_parts<T: Scalar>(
    consts: &ProblemConstants<T>,
    sol: &DirichletSolution<T>,
) -> (T, T) {
    let n_max = sol.phi.grid().n_theta;
    let grad_sq = boundary_gradient_of(&sol.phi, &sol.map, n_max);
    let w = boundary_radius(consts, &sol.map, n_max);
    let c1 = integrate_against_cos(&grad_sq);
    let c2 = integrate_against_cos(&w.multiply(&w));
    (c1, c2)
}

/// The compatibility constant for an already-computed solve. At
/// `eps = 0` the continuity value `4 A0 A1 / R` is returned.
pub fn neumann_constant_of<T: Scalar>(
    consts: &ProblemConstants<T>,
    sol: &DirichletSolution<T>,
) -> Result<T> {
    if consts.eps == T::zero() {
        return Ok(T::of(4.0) * consts.a0 * consts.a1 / consts.big_r);
    }
    let (c1, c2) = neumann_parts(consts, sol);
    if c2.abs() < T::of(10.0) * T::epsilon() * c1.abs() {
        return Err(GsError::DegenerateDenominator {
            c1: c1.as_f64(),
            c2: c2.as_f64(),
        });
    }
    Ok(c1 / c2)
}

/// Solve-and-evaluate form of [`neumann_constant_of`].
pub fn neumann_constant<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &crate::profile::ProfileFunctions<T>,
    b: &FourierSeries<T>,
    grid: Arc<DiskGrid<T>>,
    opts: &SolverOptions<T>,
) -> Result<T> {
    if consts.eps == T::zero() {
        return Ok(T::of(4.0) * consts.a0 * consts.a1 / consts.big_r);
    }
    let sol = solve_dirichlet(consts, profile, b, grid, opts)?;
    neumann_constant_of(consts, &sol)
}

/// The Neumann functional
/// `F(eps,B)(theta) = |grad phi|^2(boundary) - c_{eps,B} w(theta)^2`
/// for an already-computed solve, together with the constant.
pub fn functional_f_of<T: Scalar>(
    consts: &ProblemConstants<T>,
    sol: &DirichletSolution<T>,
) -> Result<(FourierSeries<T>, T)> {
    let n_max = sol.phi.grid().n_theta;
    let grad_sq = boundary_gradient_of(&sol.phi, &sol.map, n_max);
    let c = if consts.eps == T::zero() {
        T::of(4.0) * consts.a0 * consts.a1 / consts.big_r
    } else {
        neumann_constant_of(consts, sol)?
    };
    let w = boundary_radius(consts, &sol.map, n_max);
    Ok((grad_sq.sub(&w.multiply(&w).scale(c)), c))
}

/// Solve-and-evaluate form of [`functional_f_of`].
pub fn functional_f<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &crate::profile::ProfileFunctions<T>,
    b: &FourierSeries<T>,
    grid: Arc<DiskGrid<T>>,
    opts: &SolverOptions<T>,
) -> Result<FourierSeries<T>> {
    let sol = solve_dirichlet(consts, profile, b, grid, opts)?;
    Ok(functional_f_of(consts, &sol)?.0)
}

/// The normalized functional `G(eps, B) = (F(eps, B) - kappa)/eps`.
/// At `eps = 0` the continuity value `0` is returned (only meaningful
/// at `B = 0`).
pub fn functional_g<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &crate::profile::ProfileFunctions<T>,
    b: &FourierSeries<T>,
    grid: Arc<DiskGrid<T>>,
    opts: &SolverOptions<T>,
) -> Result<FourierSeries<T>> {
    if consts.eps == T::zero() {
        return Ok(FourierSeries::zero(grid.n_theta));
    }
    let f = functional_f(consts, profile, b, grid.clone(), opts)?;
    Ok(f.sub(&FourierSeries::constant(consts.kappa, f.n_max()))
        .scale(T::one() / consts.eps))
}

/// The explicit linearization
/// `D_B G(0,0) Bdot = 8 A0^2 [(1 - A1 R / A0) Bdot_0 + (1/2) Bdot_2
///  - 2 sum_{n >= 2} (n - 1) Bdot_n cos n theta]`
/// acting on `X` (coefficients here are half-spectrum: `Bdot_n` is the
/// stored coefficient of `e^{i n theta}`).
pub fn linearized_dg0<T: Scalar>(
    consts: &ProblemConstants<T>,
    bdot: &FourierSeries<T>,
) -> Result<FourierSeries<T>> {
    check_invertible(consts)?;
    let a0 = consts.a0;
    let pref = T::of(8.0) * a0 * a0;
    let ratio = T::one() - consts.a1 * consts.big_r / a0;
    let n_max = bdot.n_max();
    let mut coeffs = vec![C::new(T::zero(), T::zero()); n_max + 1];
    let b0 = bdot.coeff(0).re;
    let b2 = bdot.coeff(2).re;
    coeffs[0] = C::new(pref * (ratio * b0 + b2 / T::of(2.0)), T::zero());
    for (n, slot) in coeffs.iter_mut().enumerate().skip(2) {
        let amp = -pref * T::of_usize(n - 1) * bdot.coeff(n as i64).re;
        *slot = C::new(amp, T::zero());
    }
    Ok(FourierSeries::from_coeffs(coeffs))
}

/// Exact inverse of [`linearized_dg0`] on `X`: mode-wise division for
/// `n >= 2` and the triangular 0/2 coupling solved in closed form.
pub fn dg0_inverse<T: Scalar>(
    consts: &ProblemConstants<T>,
    g: &FourierSeries<T>,
) -> Result<FourierSeries<T>> {
    check_invertible(consts)?;
    let a0 = consts.a0;
    let pref = T::of(8.0) * a0 * a0;
    let ratio = T::one() - consts.a1 * consts.big_r / a0;
    let n_max = g.n_max();
    let mut coeffs = vec![C::new(T::zero(), T::zero()); n_max + 1];
    for (n, slot) in coeffs.iter_mut().enumerate().skip(2) {
        *slot = C::new(-g.coeff(n as i64).re / (pref * T::of_usize(n - 1)), T::zero());
    }
    let b2 = if n_max >= 2 { coeffs[2].re } else { T::zero() };
    coeffs[0] = C::new((g.coeff(0).re / pref - b2 / T::of(2.0)) / ratio, T::zero());
    Ok(FourierSeries::from_coeffs(coeffs))
}

fn check_invertible<T: Scalar>(consts: &ProblemConstants<T>) -> Result<()> {
    // 1 - A1 R / A0 = kappa / (4 A0^2) vanishes exactly when
    // a R^2 - 3 b = 0.
    let margin = consts.a * consts.big_r * consts.big_r - T::of(3.0) * consts.b;
    if margin.abs() <= T::of(1e3) * T::epsilon() * (T::one() + consts.a.abs()) {
        return Err(GsError::NotInvertible);
    }
    Ok(())
}

/// Quasi-Newton iteration for the shape `B` with `G(eps, B) = 0`.
pub fn solve_shape<T: Scalar>(
    consts: &ProblemConstants<T>,
    profile: &crate::profile::ProfileFunctions<T>,
    grid: Arc<DiskGrid<T>>,
    solver_opts: &SolverOptions<T>,
    opts: &ShapeOptions<T>,
) -> Result<ShapeState<T>> {
    if consts.eps > opts.eps_max {
        return Err(GsError::ShapeDiverged {
            iterations: 0,
            reason: format!(
                "eps = {} above trusted maximum {}",
                consts.eps.as_f64(),
                opts.eps_max.as_f64()
            ),
        });
    }
    let kappa = FourierSeries::constant(consts.kappa, grid.n_theta);
    let mut b = FourierSeries::zero(grid.n_theta);
    if opts.verbose {
        log::info!("iter,residual,b_norm,c_eps_b");
    }
    for it in 0..opts.max_iter {
        let sol = solve_dirichlet(consts, profile, &b, grid.clone(), solver_opts)?;
        let (f, c) = functional_f_of(consts, &sol)?;
        let g = f.sub(&kappa).scale(T::one() / consts.eps);
        let gp = project_x(&g);
        let res = gp.sup_norm();
        if opts.verbose {
            log::info!(
                "{},{:e},{:e},{:.17e}",
                it,
                res.as_f64(),
                b.sup_norm().as_f64(),
                c.as_f64()
            );
        }
        if res <= opts.tol_shape {
            return Ok(ShapeState {
                b,
                c_eps_b: c,
                g_residual: gp,
                iter: it,
                converged: true,
                solution: sol,
            });
        }
        let corr = dg0_inverse(consts, &gp)?;
        b = project_x(&b.sub(&corr));
        if b.sup_norm() > opts.b_guard {
            return Err(GsError::ShapeDiverged {
                iterations: it + 1,
                reason: format!("|B| = {} exceeded guard", b.sup_norm().as_f64()),
            });
        }
    }
    Err(GsError::ShapeDiverged {
        iterations: opts.max_iter,
        reason: "residual did not reach tolerance".into(),
    })
}
