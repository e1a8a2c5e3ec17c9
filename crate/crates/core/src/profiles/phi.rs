use std::fmt;
use std::sync::Arc;

use crate::error::ProfileError;

type F = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Young-type function `Φ` generating a product-measure profile, with its
/// derivative and inverse.
#[derive(Clone)]
pub struct PhiSpec {
    name: String,
    phi: F,
    dphi: F,
    inv: F,
}

impl fmt::Debug for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhiSpec({})", self.name)
    }
}

impl PhiSpec {
    /// Validates `Φ(0) = 0`, strict increase, convexity and concavity of
    /// `√Φ` on a geometric sample of `(0, 50]`.
    pub fn new(name: impl Into<String>, phi: F, dphi: F, inv: F) -> Result<Self, ProfileError> {
        if phi(0.0).abs() > 1e-12 {
            return Err(ProfileError::BadPhi { property: "Phi(0) = 0", witness: 0.0 });
        }
        let xs: Vec<f64> = (0..400).map(|i| 1e-6 * (5e7f64).powf(i as f64 / 399.0)).collect();
        for w in xs.windows(3) {
            let (a, b, c) = (w[0], w[1], w[2]);
            let (fa, fb, fc) = (phi(a), phi(b), phi(c));
            if !(fb > fa) {
                return Err(ProfileError::BadPhi { property: "strict increase", witness: b });
            }
            let chord = fa + (fc - fa) * (b - a) / (c - a);
            let tol = 1e-10 * fc.abs().max(1e-300);
            if fb > chord + tol {
                return Err(ProfileError::BadPhi { property: "convexity", witness: b });
            }
            let (ra, rb, rc) = (fa.sqrt(), fb.sqrt(), fc.sqrt());
            let rchord = ra + (rc - ra) * (b - a) / (c - a);
            if rb < rchord - 1e-10 * rc.max(1e-300) {
                return Err(ProfileError::BadPhi { property: "concavity of sqrt(Phi)", witness: b });
            }
        }
        Ok(PhiSpec { name: name.into(), phi, dphi, inv })
    }

    /// `Φ(t) = t^p`, `1 <= p <= 2`; `p = 2` is the Gaussian case.
    pub fn power(p: f64) -> Result<Self, ProfileError> {
        if !(1.0..=2.0).contains(&p) {
            return Err(ProfileError::BadPhi { property: "exponent in [1, 2]", witness: p });
        }
        Self::new(
            format!("t^{p}"),
            Arc::new(move |t: f64| t.powf(p)),
            Arc::new(move |t: f64| p * t.powf(p - 1.0)),
            Arc::new(move |y: f64| y.powf(1.0 / p)),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn phi(&self, t: f64) -> f64 {
        (self.phi)(t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        (self.dphi)(t)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        (self.inv)(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_family_validates() {
        assert!(PhiSpec::power(2.0).is_ok());
        assert!(PhiSpec::power(1.0).is_ok());
        assert!(PhiSpec::power(3.0).is_err());
    }

    #[test]
    fn cube_fails_sqrt_concavity() {
        let e = PhiSpec::new(
            "t^3",
            Arc::new(|t: f64| t.powi(3)),
            Arc::new(|t: f64| 3.0 * t * t),
            Arc::new(|y: f64| y.cbrt()),
        )
        .unwrap_err();
        assert!(matches!(e, ProfileError::BadPhi { property: "concavity of sqrt(Phi)", .. }));
    }

    #[test]
    fn concave_phi_fails_convexity() {
        let e = PhiSpec::new(
            "sqrt",
            Arc::new(|t: f64| t.sqrt()),
            Arc::new(|t: f64| 0.5 / t.sqrt()),
            Arc::new(|y: f64| y * y),
        )
        .unwrap_err();
        assert!(matches!(e, ProfileError::BadPhi { property: "convexity", .. }));
    }
}
