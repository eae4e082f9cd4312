//! Averaging estimator `c_χ ≈ (1/vol A) Σ_{x∈A} w_x e^{-2πiχ·x}`.

use crate::error::{Error, Result};
use crate::fourier::{FourierBohrSeries, FrequencyAtom, Generation};
use crate::geometry::AxisBox;
use crate::measures::mean::{twisted_average, validate_scales, Averaging, Estimate};
use crate::measures::source::CombSource;

/// `c_χ` from the truncations of `source` at the given doubling scales.
pub fn fourier_bohr_averaged<S: CombSource + ?Sized>(
    source: &S,
    chi: &[f64],
    scales: &[f64],
    averaging: Averaging,
) -> Result<Estimate> {
    let mut out = fourier_bohr_averaged_many(source, &[chi.to_vec()], scales, averaging)?;
    Ok(out.remove(0))
}

/// Same as [`fourier_bohr_averaged`] for many frequencies, building each
/// truncation once.
pub fn fourier_bohr_averaged_many<S: CombSource + ?Sized>(
    source: &S,
    chis: &[Vec<f64>],
    scales: &[f64],
    averaging: Averaging,
) -> Result<Vec<Estimate>> {
    validate_scales(scales, 3)?;
    let dim = source.dim();
    if let Some(bad) = chis.iter().find(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let mut per_scale = Vec::with_capacity(scales.len());
    for &s in scales {
        let comb = source.comb_at(s)?;
        let bounds = comb.region().clone();
        per_scale.push(crate::par::map(chis, |chi| {
            twisted_average(&comb, chi, &bounds, averaging)
        }));
    }
    Ok((0..chis.len())
        .map(|j| {
            let values = per_scale.iter().map(|row| row[j]).collect();
            Estimate::from_sequence(scales, values)
        })
        .collect())
}

/// A series of averaged coefficients at the candidate frequencies that fall
/// inside `freq_region`.
pub fn averaged_series<S: CombSource + ?Sized>(
    source: &S,
    candidates: &[Vec<f64>],
    scales: &[f64],
    averaging: Averaging,
    freq_region: &AxisBox,
) -> Result<FourierBohrSeries> {
    let chis: Vec<Vec<f64>> = candidates
        .iter()
        .filter(|c| freq_region.contains(c))
        .cloned()
        .collect();
    let estimates = fourier_bohr_averaged_many(source, &chis, scales, averaging)?;
    let max_error = estimates.iter().fold(0.0f64, |m, e| m.max(e.error));
    let entries = chis
        .into_iter()
        .zip(estimates)
        .map(|(frequency, e)| FrequencyAtom {
            frequency,
            coefficient: e.value,
        })
        .collect();
    FourierBohrSeries::new(
        entries,
        Generation::Averaged {
            scales: scales.to_vec(),
            averaging,
            max_error,
        },
        freq_region.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::CutProjectScheme;
    use crate::measures::source::ModelSetComb;
    use crate::window::WindowFunction;

    fn integers() -> ModelSetComb {
        ModelSetComb::new(CutProjectScheme::integer_lattice(1), WindowFunction::point_mass()).unwrap()
    }

    /// `(1/2s) Σ_{n=-s}^{s-1} (-1)^n`, summed pairwise.
    fn alternating_oracle(s: i64) -> f64 {
        let mut acc = 0.0;
        for n in -s..s {
            acc += if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        }
        acc / (2 * s) as f64
    }

    #[test]
    fn integer_density_and_half_frequency() {
        let src = integers();
        let scales = [100.0, 200.0, 400.0];
        let at0 = fourier_bohr_averaged(&src, &[0.0], &scales, Averaging::Box).unwrap();
        assert!((at0.value.re - 1.0).abs() < 1e-12);
        let half = fourier_bohr_averaged(&src, &[0.5], &scales, Averaging::Box).unwrap();
        assert!((half.value.re - alternating_oracle(400)).abs() < 1e-12);
        assert!(half.value.norm() <= 10.0 / 400.0);
    }

    #[test]
    fn non_integer_frequencies_decay_like_inverse_scale() {
        let src = integers();
        for &chi in &[0.5, 0.25, 0.5f64.sqrt()] {
            for &s in &[100.0, 1000.0] {
                let e = fourier_bohr_averaged(&src, &[chi], &[s / 4.0, s / 2.0, s], Averaging::Box).unwrap();
                assert!(e.value.norm() <= 10.0 / s, "chi={chi} s={s}: {}", e.value);
            }
        }
    }

    #[test]
    fn cesaro_agrees_with_box_in_the_limit() {
        let src = ModelSetComb::new(CutProjectScheme::fibonacci(), WindowFunction::tent(1, 1.0).unwrap()).unwrap();
        let scales = [250.0, 500.0, 1000.0];
        let b = fourier_bohr_averaged(&src, &[0.0], &scales, Averaging::Box).unwrap();
        let c = fourier_bohr_averaged(&src, &[0.0], &scales, Averaging::Cesaro).unwrap();
        assert!((b.value - c.value).norm() < 5e-3);
        assert!(c.error <= b.error.max(1e-3));
    }

    #[test]
    fn too_few_scales_rejected() {
        assert!(fourier_bohr_averaged(&integers(), &[0.0], &[1.0, 2.0], Averaging::Box).is_err());
    }
}
