use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::AxisBox;
use crate::profile::Profile;
use crate::quadrature::QuadratureOptions;

/// Weight function `h` on internal space ℝ^m: a separable product of one
/// profile per coordinate, translated to `center` and multiplied by `scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowFunction {
    profile: Profile,
    support_radius: f64,
    center: Vec<f64>,
    scale: Complex64,
}

impl WindowFunction {
    pub fn new(profile: Profile, dim: usize, support_radius: f64) -> Result<Self> {
        profile.validate(support_radius)?;
        Ok(Self {
            profile,
            support_radius,
            center: vec![0.0; dim],
            scale: Complex64::new(1.0, 0.0),
        })
    }

    pub fn tent(dim: usize, radius: f64) -> Result<Self> {
        Self::new(Profile::Tent, dim, radius)
    }

    pub fn indicator(dim: usize, radius: f64) -> Result<Self> {
        Self::new(Profile::Indicator, dim, radius)
    }

    /// The constant window on ℝ^0; turns a plain lattice into `δ_L`.
    pub fn point_mass() -> Self {
        Self {
            profile: Profile::Indicator,
            support_radius: 1.0,
            center: Vec::new(),
            scale: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_scale(mut self, scale: Complex64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_center(mut self, center: Vec<f64>) -> Result<Self> {
        if center.len() != self.center.len() {
            return Err(Error::DimensionMismatch {
                expected: self.center.len(),
                got: center.len(),
            });
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(invalid("window center must be finite"));
        }
        self.center = center;
        Ok(self)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn is_continuous(&self) -> bool {
        self.dim() == 0 || self.profile.is_continuous()
    }

    /// Real-valued and symmetric under `t ↦ -t`.
    pub fn is_real_even(&self) -> bool {
        self.scale.im == 0.0 && self.center.iter().all(|c| *c == 0.0) && self.profile.is_even()
    }

    pub fn is_zero(&self) -> bool {
        self.scale == Complex64::new(0.0, 0.0)
    }

    /// `‖h‖_∞`.
    pub fn sup_norm(&self) -> f64 {
        self.scale.norm() * self.profile.sup_norm(self.support_radius).powi(self.dim() as i32)
    }

    /// `‖h‖_1`.
    pub fn l1_norm(&self) -> f64 {
        self.scale.norm() * self.profile.l1_norm(self.support_radius).powi(self.dim() as i32)
    }

    /// Closed support box `center ± r` per coordinate.
    pub fn support_box(&self) -> AxisBox {
        let r = self.support_radius;
        AxisBox::new(
            self.center.iter().map(|c| c - r).collect(),
            self.center.iter().map(|c| c + r).collect(),
        )
        .expect("radius is positive")
    }

    /// `h(t)`; zero outside the support box.
    pub fn evaluate(&self, t: &[f64]) -> Result<Complex64> {
        if t.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: t.len(),
            });
        }
        Ok(self.scale * self.unit_value(t))
    }

    /// `h(t) / scale`, without dimension checks.
    pub(crate) fn unit_value(&self, t: &[f64]) -> f64 {
        t.iter()
            .zip(&self.center)
            .map(|(x, c)| self.profile.value(self.support_radius, x - c))
            .product()
    }

    /// `ȟ(k)/scale`, using closed forms when `closed` and the profile has one.
    pub(crate) fn unit_transform(
        &self,
        k: &[f64],
        closed: bool,
        opts: QuadratureOptions,
    ) -> Result<Complex64> {
        if k.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: k.len(),
            });
        }
        let per_axis = QuadratureOptions {
            tol: opts.tol / self.dim().max(1) as f64,
            ..opts
        };
        let mut acc = Complex64::new(1.0, 0.0);
        let mut phase = 0.0;
        for (kj, cj) in k.iter().zip(&self.center) {
            let r = self.support_radius;
            let factor = if closed {
                self.profile.transform(r, *kj, per_axis)?
            } else {
                self.profile.transform_quadrature(r, *kj, per_axis)?
            };
            acc *= factor;
            phase += kj * cj;
        }
        if phase != 0.0 {
            acc *= Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase);
        }
        Ok(acc)
    }

    /// Half-width of the internal frequency box outside which `|ȟ| < threshold`.
    ///
    /// For a product `Π f(k_i)` with `f ≤ A`, a coordinate with `f(k_i) < threshold / A^{m-1}`
    /// forces the product below `threshold`.
    pub fn decay_radius(&self, threshold: f64) -> f64 {
        let m = self.dim();
        if m == 0 {
            return 0.0;
        }
        let scale = self.scale.norm();
        if scale == 0.0 {
            return 0.0;
        }
        let a = self.profile.l1_norm(self.support_radius);
        let per_axis = threshold / scale / a.powi(m as i32 - 1);
        self.profile.decay_radius(self.support_radius, per_axis)
    }
}
