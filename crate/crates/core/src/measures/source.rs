//! Generators `scale ↦ DiracComb`: the finite views of an infinite formal sum.

use num_complex::Complex64;

use crate::cps::{CutProjectScheme, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::AxisBox;
use crate::measures::comb::{DiracComb, Provenance};
use crate::window::WindowFunction;

/// Produces the truncation of a formal sum at a given scale. For the
/// built-in sources, scale `s` means the region `[-s, s)^d`.
pub trait CombSource: Sync {
    fn dim(&self) -> usize;
    fn comb_at(&self, scale: f64) -> Result<DiracComb>;
}

impl<T: CombSource + ?Sized> CombSource for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn comb_at(&self, scale: f64) -> Result<DiracComb> {
        (**self).comb_at(scale)
    }
}

/// The weighted model-set comb `ω_h = Σ_{(x, x⋆) ∈ L} h(x⋆) δ_x`.
#[derive(Debug, Clone)]
pub struct ModelSetComb {
    pub scheme: CutProjectScheme,
    pub window: WindowFunction,
    pub cell_budget: u64,
}

impl ModelSetComb {
    pub fn new(scheme: CutProjectScheme, window: WindowFunction) -> Result<Self> {
        if window.dim() != scheme.internal_dim() {
            return Err(Error::DimensionMismatch {
                expected: scheme.internal_dim(),
                got: window.dim(),
            });
        }
        Ok(Self {
            scheme,
            window,
            cell_budget: DEFAULT_CELL_BUDGET,
        })
    }

    /// `ω_h` restricted to the half-open `bounds`.
    pub fn comb_in(&self, bounds: &AxisBox) -> Result<DiracComb> {
        let pts = self
            .scheme
            .enumerate(bounds, &self.window.support_box(), self.cell_budget)?;
        let scale = self.window.scale();
        let (points, weights): (Vec<Vec<f64>>, Vec<Complex64>) = pts
            .into_iter()
            .map(|p| {
                let w = scale * self.window.unit_value(&p.internal);
                (p.physical, w)
            })
            .filter(|(_, w)| *w != Complex64::new(0.0, 0.0))
            .unzip();
        Ok(DiracComb::new(points, weights, bounds.clone())?.with_provenance(Provenance {
            kind: "model_set".into(),
            scheme_label: self.scheme.label().map(str::to_owned),
            window_kind: Some(self.window.profile().name().to_owned()),
            density: Some(self.scheme.density()),
        }))
    }
}

impl CombSource for ModelSetComb {
    fn dim(&self) -> usize {
        self.scheme.physical_dim()
    }

    fn comb_at(&self, scale: f64) -> Result<DiracComb> {
        self.comb_in(&AxisBox::centered(self.dim(), scale))
    }
}

/// A fixed comb, treated as a formal sum vanishing outside its region.
impl CombSource for DiracComb {
    fn dim(&self) -> usize {
        DiracComb::dim(self)
    }

    fn comb_at(&self, scale: f64) -> Result<DiracComb> {
        let bounds = AxisBox::centered(DiracComb::dim(self), scale);
        let restricted = self.restrict(&bounds)?;
        let mut region_fixed = restricted.clone();
        if restricted.region() != &bounds {
            region_fixed = DiracComb::new(
                restricted.points().to_vec(),
                restricted.weights().to_vec(),
                bounds,
            )?;
            if let Some(p) = restricted.provenance() {
                region_fixed = region_fixed.with_provenance(p.clone());
            }
        }
        Ok(region_fixed)
    }
}

/// Wraps a closure `scale ↦ DiracComb`.
pub struct FnSource<F> {
    dim: usize,
    f: F,
}

impl<F> FnSource<F>
where
    F: Fn(f64) -> Result<DiracComb> + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> CombSource for FnSource<F>
where
    F: Fn(f64) -> Result<DiracComb> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn comb_at(&self, scale: f64) -> Result<DiracComb> {
        (self.f)(scale)
    }
}

/// A source plus a fixed perturbation comb added at every scale.
pub struct Perturbed<'a, S: CombSource> {
    pub base: S,
    pub perturbation: &'a DiracComb,
}

impl<S: CombSource> CombSource for Perturbed<'_, S> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn comb_at(&self, scale: f64) -> Result<DiracComb> {
        let base = self.base.comb_at(scale)?;
        let extra = self.perturbation.restrict(base.region())?;
        let sum = base.superpose(&extra)?;
        sum.restrict(base.region())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_lattice_source() {
        let src = ModelSetComb::new(
            CutProjectScheme::integer_lattice(1),
            WindowFunction::point_mass(),
        )
        .unwrap();
        let comb = src.comb_at(5.0).unwrap();
        assert_eq!(comb.len(), 10);
        assert_eq!(comb.points()[0], vec![-5.0]);
        assert!(comb.weights().iter().all(|w| *w == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn fixed_comb_restricts_by_scale() {
        let comb = DiracComb::unit_atoms_1d(
            &[-3.0, 0.2, 0.9, 7.0],
            AxisBox::new(vec![-10.0], vec![10.0]).unwrap(),
        )
        .unwrap();
        let c = comb.comb_at(1.0).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.region(), &AxisBox::centered(1, 1.0));
    }

    #[test]
    fn fibonacci_weights_follow_window() {
        let src = ModelSetComb::new(
            CutProjectScheme::fibonacci(),
            WindowFunction::tent(1, 1.0).unwrap(),
        )
        .unwrap();
        let comb = src.comb_at(10.0).unwrap();
        let pts = crate::cps::enumerate_points(
            &src.scheme,
            &AxisBox::centered(1, 10.0),
            &src.window,
        )
        .unwrap();
        for p in pts {
            let h = 1.0 - p.internal[0].abs();
            if h == 0.0 {
                continue;
            }
            let pos = comb
                .points()
                .iter()
                .position(|q| q[0] == p.physical[0])
                .unwrap();
            assert_eq!(comb.weights()[pos].re, h);
        }
    }
}
