//! JSON run configuration: profile specs, geometry, resolutions and
//! tolerances, with command-line overrides applied on top.

use gsod_core::constants::make_constants;
use gsod_core::profile::{Family, ProfileFn, ProfileFunctions};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// One scalar profile: a named built-in with its parameter, or an
/// explicit polynomial coefficient list in psi.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProfileSpec {
    #[serde(rename = "linear_H")]
    LinearH(f64),
    #[serde(rename = "linear_Ftilde")]
    LinearFtilde(f64),
    #[serde(rename = "quadratic_Ftilde")]
    QuadraticFtilde(f64),
    #[serde(rename = "poly")]
    Poly(Vec<f64>),
}

impl ProfileSpec {
    pub fn build(&self) -> ProfileFn<f64> {
        match self {
            ProfileSpec::LinearH(s) | ProfileSpec::LinearFtilde(s) => ProfileFn::linear(*s),
            ProfileSpec::QuadraticFtilde(c) => ProfileFn::quadratic(*c),
            ProfileSpec::Poly(coeffs) => ProfileFn::poly(coeffs.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub family: Family,
    pub h: ProfileSpec,
    pub ftilde: ProfileSpec,
}

fn default_resolution() -> usize {
    32
}
fn default_tol_newton() -> f64 {
    1e-11
}
fn default_tol_shape() -> f64 {
    1e-9
}
fn default_grid_n() -> usize {
    128
}
fn default_margin() -> f64 {
    0.25
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(default = "default_grid_n")]
    pub n_r: usize,
    #[serde(default = "default_grid_n")]
    pub n_z: usize,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n_r: default_grid_n(),
            n_z: default_grid_n(),
            margin: default_margin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub profile: ProfileConfig,
    #[serde(rename = "R")]
    pub big_r: f64,
    /// Single epsilon (solve/export).
    #[serde(default)]
    pub eps: Option<f64>,
    /// Epsilon sweep list (validate/sweep); defaults to the fast list.
    #[serde(default)]
    pub eps_list: Option<Vec<f64>>,
    /// Major radii for `sweep` (defaults to just `R`).
    #[serde(default)]
    pub r_list: Option<Vec<f64>>,
    #[serde(default = "default_resolution")]
    pub n_theta: usize,
    #[serde(default = "default_resolution")]
    pub n_rho: usize,
    #[serde(default = "default_tol_newton")]
    pub tol_newton: f64,
    #[serde(default = "default_tol_shape")]
    pub tol_shape: f64,
    #[serde(default)]
    pub grid: GridConfig,
    /// Side resolution of the optional VTK export (omitted: no VTK).
    #[serde(default)]
    pub vtk: Option<usize>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

pub const EPS_MAX: f64 = 0.05;
pub const EPS_FAST: [f64; 3] = [0.04, 0.02, 0.01];
pub const EPS_THOROUGH: [f64; 5] = [0.04, 0.02, 0.01, 0.005, 0.0025];

impl RunConfig {
    /// Build the validated profile pair.
    pub fn profile_functions(&self) -> Result<ProfileFunctions<f64>, String> {
        ProfileFunctions::new(
            self.profile.h.build(),
            self.profile.ftilde.build(),
            self.profile.family,
        )
        .map_err(|e| e.to_string())
    }

    /// Full validation: profile signs, admissible R, positive
    /// tolerances, epsilons within range.
    pub fn validate(&self) -> Result<(), String> {
        let profile = self.profile_functions()?;
        make_constants(&profile, self.big_r, self.eps.unwrap_or(0.0))
            .map_err(|e| e.to_string())?;
        if !(self.tol_newton > 0.0) || !(self.tol_shape > 0.0) {
            return Err("tolerances must be strictly positive".into());
        }
        for &e in self
            .eps
            .iter()
            .chain(self.eps_list.iter().flatten())
        {
            if !(e > 0.0) || e > EPS_MAX {
                return Err(format!("eps = {e} outside (0, {EPS_MAX}]"));
            }
        }
        if self.n_theta < 4 || self.n_rho < 8 {
            return Err("resolutions too small (need n_theta >= 4, n_rho >= 8)".into());
        }
        Ok(())
    }

    /// The epsilon list for sweeps, honoring `--thorough`.
    pub fn sweep_eps(&self, thorough: bool) -> Vec<f64> {
        match &self.eps_list {
            Some(list) => list.clone(),
            None if thorough => EPS_THOROUGH.to_vec(),
            None => EPS_FAST.to_vec(),
        }
    }
}
