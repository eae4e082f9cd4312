//! Brute-force truncated transforms of finite combs.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::measures::comb::DiracComb;
use crate::measures::mean::{twisted_average, Averaging};

/// `(1/vol(region)) Σ_x w_x e^{-2πi f·x}` for each frequency.
///
/// Atoms are summed sequentially in the comb's lexicographic order, so the
/// result does not depend on how frequencies are split across threads.
pub fn truncated_transform_oracle(comb: &DiracComb, frequencies: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    if let Some(bad) = frequencies.iter().find(|f| f.len() != comb.dim()) {
        return Err(Error::DimensionMismatch {
            expected: comb.dim(),
            got: bad.len(),
        });
    }
    let region = comb.region().clone();
    Ok(crate::par::map(frequencies, |f| {
        twisted_average(comb, f, &region, Averaging::Box)
    }))
}

/// Approximate oracle on the regular grid `f_j = j·Δf`, `|f_j| ≤ f_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedSpectrum {
    pub frequencies: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `Δf`, at most `1/(4·edge)`.
    pub frequency_pitch: f64,
    pub spatial_pitch: f64,
    pub approximate: bool,
}

/// Linear (cloud-in-cell) binning of a 1-D comb followed by a zero-padded FFT.
///
/// Bins have pitch `1/(32·f_max)`; the transform is padded to at least four
/// times the region edge, and the binning kernel is divided out.
pub fn binned_spectrum(comb: &DiracComb, max_frequency: f64) -> Result<BinnedSpectrum> {
    if comb.dim() != 1 {
        return Err(invalid("binned spectra are one-dimensional"));
    }
    if !(max_frequency > 0.0 && max_frequency.is_finite()) {
        return Err(invalid("max frequency must be positive"));
    }
    let (a, b) = (comb.region().lower()[0], comb.region().upper()[0]);
    let edge = b - a;
    if !(edge > 0.0) {
        return Err(invalid("region must have positive length"));
    }
    let h = 1.0 / (32.0 * max_frequency);
    let n = ((4.0 * edge / h).ceil() as usize + 2).next_power_of_two();
    let mut grid = vec![Complex64::new(0.0, 0.0); n];
    for (x, w) in comb.iter() {
        let pos = (x[0] - a) / h;
        let j = pos.floor();
        let frac = pos - j;
        let j = j as usize;
        grid[j % n] += w * (1.0 - frac);
        grid[(j + 1) % n] += w * frac;
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut grid);
    let df = 1.0 / (n as f64 * h);
    let jmax = (max_frequency / df).floor() as i64;
    let vol = edge;
    let mut frequencies = Vec::with_capacity((2 * jmax + 1) as usize);
    let mut values = Vec::with_capacity(frequencies.capacity());
    for j in -jmax..=jmax {
        let f = j as f64 * df;
        let raw = grid[j.rem_euclid(n as i64) as usize];
        let s = crate::profile::sinc(PI * f * h);
        let shift = Complex64::from_polar(1.0, -2.0 * PI * f * a);
        frequencies.push(f);
        values.push(raw * shift / (s * s * vol));
    }
    Ok(BinnedSpectrum {
        frequencies,
        values,
        frequency_pitch: df,
        spatial_pitch: h,
        approximate: true,
    })
}
