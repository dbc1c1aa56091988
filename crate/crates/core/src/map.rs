//! Diffeomorphism between the unit disk and the perturbed domain
//! `Omega = { rho < 1 + eps B(theta) }`, in polar coordinates
//! `(rho, theta) -> ((1 + eps B(theta)) rho, theta)`.

use crate::error::{GsError, Result};
use crate::fourier::FourierSeries;
use crate::scalar::Scalar;

/// Boundary scaling `s(theta) = 1 + eps B(theta)` with its first two
/// theta-derivatives. Built once per solve; depends on `eps` and `B`
/// only through their product.
#[derive(Debug, Clone)]
pub struct DomainMap<T> {
    scale: FourierSeries<T>,
    scale_d1: FourierSeries<T>,
    scale_d2: FourierSeries<T>,
    min_scale: T,
}

impl<T: Scalar> DomainMap<T> {
    /// Requires `1 + eps B >= 1/2` everywhere; anything below that is
    /// treated as a degenerate map.
    pub fn new(b: &FourierSeries<T>, eps: T) -> Result<Self> {
        let scale = b.scale(eps).add(&FourierSeries::constant(T::one(), b.n_max()));
        let min_scale = scale.min_value();
        if min_scale < T::of(0.5) {
            return Err(GsError::MapDegenerate {
                min_scale: min_scale.as_f64(),
            });
        }
        let scale_d1 = scale.derivative();
        let scale_d2 = scale_d1.derivative();
        Ok(Self { scale, scale_d1, scale_d2, min_scale })
    }

    pub fn identity(n_max: usize) -> Self {
        let scale = FourierSeries::constant(T::one(), n_max);
        Self {
            scale_d1: scale.derivative(),
            scale_d2: scale.derivative(),
            scale,
            min_scale: T::one(),
        }
    }

    pub fn scale(&self, theta: T) -> T {
        self.scale.eval(theta)
    }

    pub fn scale_d1(&self, theta: T) -> T {
        self.scale_d1.eval(theta)
    }

    pub fn scale_d2(&self, theta: T) -> T {
        self.scale_d2.eval(theta)
    }

    pub fn min_scale(&self) -> T {
        self.min_scale
    }

    /// Unit disk point to physical polar point.
    pub fn forward(&self, rho: T, theta: T) -> (T, T) {
        (self.scale(theta) * rho, theta)
    }

    /// Physical polar point to unit disk point.
    pub fn inverse(&self, rho_phys: T, theta: T) -> (T, T) {
        (rho_phys / self.scale(theta), theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_dependence() {
        let b = FourierSeries::<f64>::cosine(2, 0.3, 8);
        let b2 = b.scale(2.0);
        let m1 = DomainMap::new(&b, 0.04).unwrap();
        let m2 = DomainMap::new(&b2, 0.02).unwrap();
        for i in 0..17 {
            let th = 2.0 * std::f64::consts::PI * i as f64 / 17.0;
            assert!((m1.scale(th) - m2.scale(th)).abs() < 1e-15);
            assert!((m1.scale_d1(th) - m2.scale_d1(th)).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_map_rejected() {
        let b = FourierSeries::<f64>::cosine(1, 1.0, 4);
        let err = DomainMap::new(&b, 0.6).unwrap_err();
        assert!(matches!(err, GsError::MapDegenerate { .. }));
    }

    #[test]
    fn forward_inverse_round_trip() {
        let b = FourierSeries::<f64>::cosine(2, 0.3, 8);
        let m = DomainMap::new(&b, 0.05).unwrap();
        let (rp, th) = m.forward(0.7, 1.2);
        let (r, _) = m.inverse(rp, th);
        assert!((r - 0.7).abs() < 1e-15);
    }
}
