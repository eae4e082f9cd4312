//! Means `M(μ) = lim μ(A_n)/vol(A_n)` over centred boxes `A_n = [-s_n, s_n)^d`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::AxisBox;
use crate::measures::comb::DiracComb;
use crate::measures::source::CombSource;

/// A limit estimated from a sequence of scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    /// `|last - previous|` over the scale sequence.
    pub error: f64,
    pub scales: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl Estimate {
    pub(crate) fn from_sequence(scales: &[f64], values: Vec<Complex64>) -> Self {
        let n = values.len();
        let value = values[n - 1];
        let error = if n >= 2 {
            (values[n - 1] - values[n - 2]).norm()
        } else {
            f64::INFINITY
        };
        Self {
            value,
            error,
            scales: scales.to_vec(),
            values,
        }
    }

    /// Richardson extrapolation assuming an `O(1/s)` leading error.
    pub fn extrapolated(&self) -> Complex64 {
        let n = self.values.len();
        if n < 2 {
            return self.value;
        }
        let (s0, s1) = (self.scales[n - 2], self.scales[n - 1]);
        let (v0, v1) = (self.values[n - 2], self.values[n - 1]);
        (v1 * s1 - v0 * s0) / (s1 - s0)
    }
}

/// Averaging weights over `[-s, s)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Uniform box average.
    #[default]
    Box,
    /// Triangular (Fejér) weights `Π (1 - |x_i|/s)`.
    Cesaro,
}

/// `(1/vol) Σ_{x ∈ bounds} w_x e^{-2πi χ·x}` with optional triangular taper.
pub(crate) fn twisted_average(
    comb: &DiracComb,
    chi: &[f64],
    bounds: &AxisBox,
    averaging: Averaging,
) -> Complex64 {
    let dim = bounds.dim();
    let center: Vec<f64> = (0..dim)
        .map(|i| 0.5 * (bounds.lower()[i] + bounds.upper()[i]))
        .collect();
    let half: Vec<f64> = (0..dim)
        .map(|i| 0.5 * (bounds.upper()[i] - bounds.lower()[i]))
        .collect();
    let twisted = chi.iter().any(|c| *c != 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in comb.iter() {
        if !bounds.contains(x) {
            continue;
        }
        let taper = match averaging {
            Averaging::Box => 1.0,
            Averaging::Cesaro => x
                .iter()
                .zip(&center)
                .zip(&half)
                .map(|((xi, ci), hi)| 1.0 - (xi - ci).abs() / hi)
                .product(),
        };
        let term = if twisted {
            let phase: f64 = x.iter().zip(chi).map(|(a, b)| a * b).sum();
            w * Complex64::from_polar(1.0, -2.0 * PI * phase)
        } else {
            w
        };
        acc += term * taper;
    }
    let norm: f64 = match averaging {
        Averaging::Box => bounds.volume(),
        // ∫_{-h}^{h} (1 - |t|/h) dt = h
        Averaging::Cesaro => half.iter().product(),
    };
    if norm == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        acc / norm
    }
}

pub(crate) fn validate_scales(scales: &[f64], minimum: usize) -> Result<()> {
    if scales.len() < minimum {
        return Err(invalid(format!("at least {minimum} scales are required")));
    }
    if scales.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(invalid("scales must be positive and finite"));
    }
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("scales must be strictly increasing"));
    }
    Ok(())
}

/// `μ([-s, s)^d) / (2s)^d` at each scale; the estimate is the value at the
/// largest scale.
pub fn mean<S: CombSource + ?Sized>(source: &S, scales: &[f64]) -> Result<Estimate> {
    validate_scales(scales, 3)?;
    let zero = vec![0.0; source.dim()];
    let values = scales
        .iter()
        .map(|&s| {
            let comb = source.comb_at(s)?;
            Ok(twisted_average(
                &comb,
                &zero,
                &AxisBox::centered(source.dim(), s),
                Averaging::Box,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Estimate::from_sequence(scales, values))
}

/// Offsets used to spot-check that box averages do not depend on where the
/// box sits: fractional parts of multiples of the golden ratio.
fn spot_offsets(count: usize, dim: usize) -> Vec<Vec<f64>> {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    (1..=count)
        .map(|k| {
            (0..dim)
                .map(|i| ((k * (i + 1)) as f64 * phi).fract() - 0.5)
                .collect()
        })
        .collect()
}

/// Largest deviation between the centred mean over `[-s/2, s/2)^d` and the
/// means over five translates of that box, using the comb at scale `s`.
pub fn mean_uniformity_spread<S: CombSource + ?Sized>(source: &S, scale: f64) -> Result<f64> {
    let comb = source.comb_at(scale)?;
    let dim = source.dim();
    let zero = vec![0.0; dim];
    let inner = 0.5 * scale;
    let base = twisted_average(&comb, &zero, &AxisBox::centered(dim, inner), Averaging::Box);
    let mut spread: f64 = 0.0;
    for off in spot_offsets(5, dim) {
        let shift: Vec<f64> = off.iter().map(|o| o * inner).collect();
        let bounds = AxisBox::new(
            shift.iter().map(|s| s - inner).collect(),
            shift.iter().map(|s| s + inner).collect(),
        )?;
        let v = twisted_average(&comb, &zero, &bounds, Averaging::Box);
        spread = spread.max((v - base).norm());
    }
    Ok(spread)
}
