use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::AxisBox;
use crate::profile::Profile;
use crate::quadrature::QuadratureOptions;

/// Continuous compactly supported test function on ℝ^d, a separable product
/// of one non-negative profile per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    profile: Profile,
    support_radius: f64,
    center: Vec<f64>,
}

impl TestFunction {
    pub fn new(profile: Profile, dim: usize, support_radius: f64) -> Result<Self> {
        match profile {
            Profile::Tent | Profile::PolynomialBump | Profile::TruncatedGaussian { .. } => {}
            other => {
                return Err(invalid(format!(
                    "{} is not an admissible test function kind",
                    other.name()
                )))
            }
        }
        profile.validate(support_radius)?;
        if dim == 0 {
            return Err(invalid("test function dimension must be positive"));
        }
        Ok(Self {
            profile,
            support_radius,
            center: vec![0.0; dim],
        })
    }

    pub fn tent(dim: usize, radius: f64) -> Result<Self> {
        Self::new(Profile::Tent, dim, radius)
    }

    pub fn centered_at(mut self, center: Vec<f64>) -> Result<Self> {
        if center.len() != self.center.len() {
            return Err(Error::DimensionMismatch {
                expected: self.center.len(),
                got: center.len(),
            });
        }
        self.center = center;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn support_box(&self) -> AxisBox {
        let r = self.support_radius;
        AxisBox::new(
            self.center.iter().map(|c| c - r).collect(),
            self.center.iter().map(|c| c + r).collect(),
        )
        .expect("radius is positive")
    }

    pub fn sup_norm(&self) -> f64 {
        1.0
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.center)
            .map(|(xi, ci)| self.profile.value(self.support_radius, xi - ci))
            .product()
    }

    /// `f̌(k) = ∫ f(x) e^{2πi k·x} dx`.
    pub fn check_transform(&self, k: &[f64]) -> Result<Complex64> {
        if k.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: k.len(),
            });
        }
        let opts = QuadratureOptions::default();
        let mut acc = Complex64::new(1.0, 0.0);
        let mut phase = 0.0;
        for (kj, cj) in k.iter().zip(&self.center) {
            acc *= self.profile.transform(self.support_radius, *kj, opts)?;
            phase += kj * cj;
        }
        if phase != 0.0 {
            acc *= Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase);
        }
        Ok(acc)
    }

    /// `f̂(k) = ∫ f(x) e^{-2πi k·x} dx`.
    pub fn hat(&self, k: &[f64]) -> Result<Complex64> {
        let neg: Vec<f64> = k.iter().map(|v| -v).collect();
        self.check_transform(&neg)
    }

    /// `|f̌(k)|²`; the profiles are real, so the per-axis moduli are taken directly.
    pub fn check_transform_sq(&self, k: &[f64]) -> Result<f64> {
        Ok(self.check_transform(k)?.norm_sqr())
    }

    /// `(f * f̃)(x) = ∫ f(t) f(t - x) dt`, supported in `[-2r, 2r]^d`.
    pub fn autocorrelation(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let opts = QuadratureOptions::with_tol(1e-13);
        x.iter().try_fold(1.0, |acc, xi| {
            Ok(acc * self.profile.autocorrelation(self.support_radius, *xi, opts)?)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_discontinuous_kinds() {
        assert!(TestFunction::new(Profile::Indicator, 1, 1.0).is_err());
    }

    #[test]
    fn tent_half_autocorrelation_at_zero() {
        // ∫ f² for a tent of radius 1/2 is 1/3
        let f = TestFunction::tent(1, 0.5).unwrap();
        assert!((f.autocorrelation(&[0.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.autocorrelation(&[1.0]).unwrap(), 0.0);
    }

    #[test]
    fn hat_and_check_are_reflections() {
        let f = TestFunction::tent(1, 1.0)
            .unwrap()
            .centered_at(vec![0.3])
            .unwrap();
        let a = f.hat(&[0.7]).unwrap();
        let b = f.check_transform(&[-0.7]).unwrap();
        assert_eq!(a, b);
        assert!((a - f.check_transform(&[0.7]).unwrap().conj()).norm() < 1e-15);
    }

    #[test]
    fn bump_autocorrelation_by_quadrature() {
        let f = TestFunction::new(Profile::PolynomialBump, 1, 1.0).unwrap();
        // ∫ (1-t²)^4 dt on [-1,1] = 256/315
        assert!((f.autocorrelation(&[0.0]).unwrap() - 256.0 / 315.0).abs() < 1e-12);
    }
}
