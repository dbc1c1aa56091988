//! Order-fitting validation harness: epsilon-sweeps that check every
//! asymptotic expansion the construction rests on, with a machine- and
//! human-readable scorecard.
//!
//! Orders are fitted by least squares on log-log data, never assumed:
//! the asymptotic constants are unknown, so the pass criterion is a
//! slope band (expected order minus 0.3) plus monotone decrease of the
//! errors.

use crate::constants::{make_constants, ProblemConstants};
use crate::error::Result;
use crate::euler::SolutionBundle;
use crate::fourier::FourierSeries;
use crate::grid::DiskGrid;
use crate::gs::{shape_derivative, solve_dirichlet, SolverOptions};
use crate::profile::ProfileFunctions;
use crate::scalar::Scalar;
use crate::shape::{
    functional_f, neumann_parts, solve_shape, ShapeOptions,
};
use crate::spectral::{dn_map_disk, op_t, op_tprime, poisson_disk};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// The checked asymptotic claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClaimId {
    /// `phi_eps = A0 (rho^2-1) + eps A1 (rho^3-rho) cos theta + O(eps^2)`.
    Cl1,
    /// Shape derivative `Phi_eps` second-order interior expansion.
    Cl2,
    /// Boundary trace `d_rho Phi_eps|_1` second-order expansion.
    Cl3,
    /// `F(eps, 0) = kappa + O(eps^2)`.
    Cl4,
    /// Boundary defect `sup |(1+eps B)^2 - 1| / eps = O(eps)`.
    Cl5,
    /// `c = 4 A0 A1 eps^2 / R + O(eps^3)`.
    Cl6,
    /// `psi = A0 [(r-R)^2 + z^2 - eps^2] + O(eps^3)`.
    Cl7,
    /// `C1 = 8 pi eps A0 A1 + O(eps^2)`, `C2 = 2 pi eps R + O(eps^2)`.
    Cl8,
}

pub const ALL_CLAIMS: [ClaimId; 8] = [
    ClaimId::Cl1,
    ClaimId::Cl2,
    ClaimId::Cl3,
    ClaimId::Cl4,
    ClaimId::Cl5,
    ClaimId::Cl6,
    ClaimId::Cl7,
    ClaimId::Cl8,
];

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CL{}", *self as usize + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A solver error occurred for some epsilon; never counts as pass.
    Inconclusive,
}

/// Result of one epsilon-sweep for one claim. Data is reported in
/// `f64` regardless of the working precision.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub claim: ClaimId,
    pub eps: Vec<f64>,
    pub errors: Vec<f64>,
    /// Fitted log-log slope of `errors` against `eps`.
    pub slope: f64,
    pub expected: f64,
    /// Tolerance band on the slope: pass needs `slope >= expected - band`.
    pub band: f64,
    pub verdict: Verdict,
    /// Error message of the first failing solve, if any.
    pub note: Option<String>,
}

/// Least-squares slope of `ln err` against `ln eps`.
fn fit_slope(eps: &[f64], errors: &[f64]) -> f64 {
    let n = eps.len() as f64;
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.max(1e-300).ln()).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    num / den
}

fn expected_order(claim: ClaimId) -> f64 {
    match claim {
        ClaimId::Cl1 | ClaimId::Cl4 => 2.0,
        ClaimId::Cl2 | ClaimId::Cl3 | ClaimId::Cl6 | ClaimId::Cl7 => 3.0,
        ClaimId::Cl5 | ClaimId::Cl8 => 1.0,
    }
}

/// The deterministic probe shape used by the shape-derivative claims.
fn probe_bdot<T: Scalar>(n_max: usize) -> FourierSeries<T> {
    FourierSeries::cosine(2, T::one(), n_max)
        .add(&FourierSeries::cosine(3, T::of(0.5), n_max))
}

fn claim_error<T: Scalar>(
    claim: ClaimId,
    consts: &ProblemConstants<T>,
    profile: &ProfileFunctions<T>,
    grid: &Arc<DiskGrid<T>>,
    solver_opts: &SolverOptions<T>,
    shape_opts: &ShapeOptions<T>,
) -> Result<T> {
    let eps = consts.eps;
    let n_max = grid.n_theta;
    let b0 = FourierSeries::zero(n_max);
    match claim {
        ClaimId::Cl1 => {
            let sol = solve_dirichlet(consts, profile, &b0, grid.clone(), solver_opts)?;
            let mut sup = T::zero();
            for j in 0..grid.n_rho {
                for k in 0..grid.n_nodes_theta {
                    let (r, th) = (grid.rho[j], grid.theta[k]);
                    let model = consts.a0 * (r * r - T::one())
                        + eps * consts.a1 * (r * r * r - r) * th.cos();
                    sup = sup.max((sol.phi.eval(r, th) - model).abs());
                }
            }
            Ok(sup)
        }
        ClaimId::Cl2 => {
            let bdot = probe_bdot(n_max);
            let phi_dot = shape_derivative(consts, profile, &bdot, grid.clone(), solver_opts)?;
            let cos1 = FourierSeries::cosine(1, T::one(), n_max);
            let first = poisson_disk(grid.clone(), &bdot).scale(-T::of(2.0) * eps * consts.a0);
            let second = op_t(grid.clone(), &bdot)
                .scale(consts.a0 / (T::of(2.0) * consts.big_r))
                .add(
                    &poisson_disk(grid.clone(), &cos1.multiply(&bdot))
                        .scale(-T::of(2.0) * consts.a1),
                )
                .scale(eps * eps);
            Ok(phi_dot.sub(&first).sub(&second).sup_norm())
        }
        ClaimId::Cl3 => {
            let bdot = probe_bdot(n_max);
            let phi_dot = shape_derivative(consts, profile, &bdot, grid.clone(), solver_opts)?;
            let cos1 = FourierSeries::cosine(1, T::one(), n_max);
            let first = dn_map_disk(&bdot).scale(-T::of(2.0) * eps * consts.a0);
            let second = op_tprime(&bdot)
                .scale(consts.a0 / consts.big_r)
                .add(&dn_map_disk(&cos1.multiply(&bdot)).scale(consts.a1))
                .scale(-T::of(2.0) * eps * eps);
            Ok(phi_dot.trace_dr().sub(&first).sub(&second).sup_norm())
        }
        ClaimId::Cl4 => {
            let f = functional_f(consts, profile, &b0, grid.clone(), solver_opts)?;
            Ok(f
                .sub(&FourierSeries::constant(consts.kappa, f.n_max()))
                .sup_norm())
        }
        ClaimId::Cl5 => {
            let state = solve_shape(consts, profile, grid.clone(), solver_opts, shape_opts)?;
            let k = 256;
            let two_pi = T::PI() * T::of(2.0);
            let mut sup = T::zero();
            for i in 0..k {
                let th = two_pi * T::of_usize(i) / T::of_usize(k);
                let s = T::one() + eps * state.b.eval(th);
                sup = sup.max((s * s - T::one()).abs());
            }
            Ok(sup / eps)
        }
        ClaimId::Cl6 => {
            let state = solve_shape(consts, profile, grid.clone(), solver_opts, shape_opts)?;
            let model = T::of(4.0) * consts.a0 * consts.a1 * eps * eps / consts.big_r;
            Ok((eps * eps * state.c_eps_b - model).abs())
        }
        ClaimId::Cl7 => {
            let state = solve_shape(consts, profile, grid.clone(), solver_opts, shape_opts)?;
            let bundle = SolutionBundle::new(state, *consts, profile.clone())?;
            let n = 24;
            let mut sup = T::zero();
            for i in 0..n {
                for j in 0..n {
                    let x = T::of(-0.95) + T::of(1.9) * T::of_usize(i) / T::of_usize(n - 1);
                    let y = T::of(-0.95) + T::of(1.9) * T::of_usize(j) / T::of_usize(n - 1);
                    let r = consts.big_r + eps * x;
                    let z = eps * y;
                    let st = bundle.eval(r, z)?;
                    if !st.inside {
                        continue;
                    }
                    let model =
                        consts.a0 * ((r - consts.big_r) * (r - consts.big_r) + z * z - eps * eps);
                    sup = sup.max((st.psi - model).abs());
                }
            }
            Ok(sup)
        }
        ClaimId::Cl8 => {
            let state = solve_shape(consts, profile, grid.clone(), solver_opts, shape_opts)?;
            let (c1, c2) = neumann_parts(consts, &state.solution);
            let pi = T::PI();
            let c1_model = T::of(8.0) * pi * eps * consts.a0 * consts.a1;
            let c2_model = T::of(2.0) * pi * eps * consts.big_r;
            let e1 = (c1 / c1_model - T::one()).abs();
            let e2 = (c2 / c2_model - T::one()).abs();
            Ok(e1.max(e2))
        }
    }
}

/// Run one claim's epsilon-sweep. `eps_list` must hold at least three
/// values spanning a factor of four (enforced here; user input is
/// validated upstream).
pub fn run_claim<T: Scalar>(
    claim: ClaimId,
    profile: &ProfileFunctions<T>,
    big_r: T,
    eps_list: &[T],
    grid: &Arc<DiskGrid<T>>,
    solver_opts: &SolverOptions<T>,
    shape_opts: &ShapeOptions<T>,
) -> SweepReport {
    let mut eps: Vec<f64> = eps_list.iter().map(|e| e.as_f64()).collect();
    eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert!(eps.len() >= 3, "need >= 3 epsilons");
    assert!(
        eps[0] / eps[eps.len() - 1] >= 4.0,
        "epsilon list must span a factor >= 4"
    );
    let expected = expected_order(claim);
    let band = 0.3;
    let mut errors = Vec::with_capacity(eps.len());
    let mut note = None;
    for &e in &eps {
        let consts = match make_constants(profile, big_r, T::of(e)) {
            Ok(c) => c,
            Err(err) => {
                note = Some(err.to_string());
                break;
            }
        };
        match claim_error(claim, &consts, profile, grid, solver_opts, shape_opts) {
            Ok(v) => errors.push(v.as_f64()),
            Err(err) => {
                note = Some(err.to_string());
                break;
            }
        }
    }
    if note.is_some() {
        return SweepReport {
            claim,
            eps,
            errors,
            slope: f64::NAN,
            expected,
            band,
            verdict: Verdict::Inconclusive,
            note,
        };
    }
    let slope = fit_slope(&eps, &errors);
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let verdict = if slope >= expected - band && monotone {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    SweepReport {
        claim,
        eps,
        errors,
        slope,
        expected,
        band,
        verdict,
        note: None,
    }
}

/// Run every claim (concurrently) and return the reports ordered by
/// claim id.
pub fn run_all_claims<T: Scalar>(
    profile: &ProfileFunctions<T>,
    big_r: T,
    eps_list: &[T],
    grid: &Arc<DiskGrid<T>>,
    solver_opts: &SolverOptions<T>,
    shape_opts: &ShapeOptions<T>,
) -> Vec<SweepReport> {
    let mut reports: Vec<SweepReport> = ALL_CLAIMS
        .par_iter()
        .map(|&claim| {
            run_claim(
                claim, profile, big_r, eps_list, grid, solver_opts, shape_opts,
            )
        })
        .collect();
    reports.sort_by_key(|r| r.claim);
    reports
}

/// Aggregated scorecard over a batch of sweep reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scorecard {
    pub reports: Vec<SweepReport>,
    pub all_pass: bool,
}

/// Merge reports (sorted by claim id) into a scorecard.
pub fn scorecard(mut reports: Vec<SweepReport>) -> Scorecard {
    assert!(!reports.is_empty(), "need at least one report");
    reports.sort_by_key(|r| r.claim);
    let all_pass = reports.iter().all(|r| r.verdict == Verdict::Pass);
    Scorecard { reports, all_pass }
}

impl Scorecard {
    /// Claims that did not pass.
    pub fn failing(&self) -> Vec<ClaimId> {
        self.reports
            .iter()
            .filter(|r| r.verdict != Verdict::Pass)
            .map(|r| r.claim)
            .collect()
    }

    /// Fixed-width human-readable table.
    pub fn table(&self) -> String {
        let mut out = String::from(
            "claim  slope    expected  smallest-eps error  verdict\n",
        );
        for r in &self.reports {
            let last = r.errors.last().copied().unwrap_or(f64::NAN);
            let verdict = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Inconclusive => "INCONCLUSIVE",
            };
            out.push_str(&format!(
                "{:<6} {:>7.3}  {:>8.1}  {:>18.3e}  {}\n",
                r.claim.to_string(),
                r.slope,
                r.expected,
                last,
                verdict
            ));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.all_pass { "all pass" } else { "NOT PASSING" }
        ));
        out
    }
}
