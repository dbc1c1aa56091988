//! Derived problem constants for a profile pair and major radius.

use crate::error::{GsError, Result};
use crate::profile::{Family, ProfileFunctions};
use crate::scalar::Scalar;

/// All closed-form constants of the expansion around the radial
/// solution, for a fixed `(profile, R, eps)`.
#[derive(Debug, Clone, Copy)]
pub struct ProblemConstants<T> {
    pub big_r: T,
    pub eps: T,
    /// `a = H'(0)`.
    pub a: T,
    /// `b = -Ftilde'(0)/2`; zero for the degenerate family.
    pub b: T,
    /// `A0 = (a R^2 + b)/4`.
    pub a0: T,
    /// `A1 = (5 a R^2 + b)/(16 R)`.
    pub a1: T,
    /// `kappa = 4 A0 (A0 - A1 R) = (a R^2 + b)(3 b - a R^2)/16`.
    pub kappa: T,
    /// Swirl constant: `-kappa` (generic) or `R^2 H'(0)/4` (degenerate).
    pub f_r: T,
    pub family: Family,
}

/// Compute the derived constants, rejecting inadmissible radii.
///
/// The generic family needs `a R^2 - 3 b > 0` (equivalently
/// `kappa < 0`) for the shape linearization to be invertible.
pub fn make_constants<T: Scalar>(
    profile: &ProfileFunctions<T>,
    big_r: T,
    eps: T,
) -> Result<ProblemConstants<T>> {
    assert!(big_r > T::zero(), "major radius must be positive");
    let a = profile.a();
    let b = profile.b();
    let r_sq = big_r * big_r;
    let margin = a * r_sq - T::of(3.0) * b;
    if profile.family == Family::Generic && margin <= T::zero() {
        return Err(GsError::InadmissibleR {
            margin: margin.as_f64(),
        });
    }
    let a0 = (a * r_sq + b) / T::of(4.0);
    let a1 = (T::of(5.0) * a * r_sq + b) / (T::of(16.0) * big_r);
    let kappa = T::of(4.0) * a0 * (a0 - a1 * big_r);
    let f_r = match profile.family {
        Family::Generic => -kappa,
        Family::Degenerate => r_sq * a / T::of(4.0),
    };
    Ok(ProblemConstants {
        big_r,
        eps,
        a,
        b,
        a0,
        a1,
        kappa,
        f_r,
        family: profile.family,
    })
}

impl<T: Scalar> ProblemConstants<T> {
    /// Same constants at a different `eps` (used by sweeps).
    pub fn with_eps(mut self, eps: T) -> Self {
        self.eps = eps;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileFn;

    fn fixture_a() -> ProfileFunctions<f64> {
        ProfileFunctions::new(
            ProfileFn::linear(1.0),
            ProfileFn::linear(-2.0),
            Family::Generic,
        )
        .unwrap()
    }

    #[test]
    fn fixture_a_values() {
        let c = make_constants(&fixture_a(), 2.0, 0.01).unwrap();
        assert_eq!(c.a, 1.0);
        assert_eq!(c.b, 1.0);
        assert_eq!(c.a0, 1.25);
        assert_eq!(c.a1, 0.65625);
        assert!((c.kappa + 0.3125).abs() < 1e-14);
        assert!((c.f_r - 0.3125).abs() < 1e-14);
    }

    #[test]
    fn kappa_closed_form_identity() {
        for &(r, slope_h, slope_f) in &[(2.0f64, 1.0, -2.0), (3.5, 0.7, -0.4), (5.0, 0.2, -1.0)] {
            let p = ProfileFunctions::new(
                ProfileFn::linear(slope_h),
                ProfileFn::linear(slope_f),
                Family::Generic,
            )
            .unwrap();
            let c = make_constants(&p, r, 0.01).unwrap();
            let closed = (c.a * r * r + c.b) * (3.0 * c.b - c.a * r * r) / 16.0;
            assert!((c.kappa - closed).abs() < 1e-12 * closed.abs().max(1.0));
            assert!(c.kappa < 0.0);
        }
    }

    #[test]
    fn threshold_radius_rejected() {
        let err = make_constants(&fixture_a(), 3.0f64.sqrt(), 0.01).unwrap_err();
        assert!(matches!(err, GsError::InadmissibleR { .. }));
        // Just above the threshold is fine.
        make_constants(&fixture_a(), 3.0f64.sqrt() + 1e-6, 0.01).unwrap();
    }

    #[test]
    fn fixture_b_degenerate() {
        let p = ProfileFunctions::new(
            ProfileFn::linear(1.0f64),
            ProfileFn::quadratic(1.0),
            Family::Degenerate,
        )
        .unwrap();
        let c = make_constants(&p, 1.0, 0.01).unwrap();
        assert_eq!(c.b, 0.0);
        assert!((c.kappa + 1.0 / 16.0).abs() < 1e-15);
        assert!((c.f_r - 0.25).abs() < 1e-15);
        // Degenerate identity kappa = -a^2 R^4 / 16.
        assert!((c.kappa + c.a * c.a / 16.0).abs() < 1e-15);
    }
}
