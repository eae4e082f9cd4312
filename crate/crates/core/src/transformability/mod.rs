//! Decision procedures for Fourier transformability of weighted model-set
//! combs, with the evidence each verdict rests on.

mod admissibility;
mod identities;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cps::CutProjectScheme;
use crate::error::{invalid, Error, Result};
use crate::fourier::closed::closed_coefficients;
use crate::fourier::diagnostics::l1_integrability_profile_with;
use crate::fourier::{fourier_bohr_closed_with, truncated_transform_oracle, ClosedOptions};
use crate::geometry::AxisBox;
use crate::measures::mean::validate_scales;
use crate::measures::source::{CombSource, ModelSetComb};
use crate::quadrature::QuadratureOptions;
use crate::verdict::{classify_increments, IncrementThresholds, Status, Verdict};
use crate::window::WindowFunction;

pub use admissibility::{is_fourier_transform_of_measure, weak_admissibility_rd, MeasureTransformOutcome};
pub use identities::{
    double_transform_check, fb_invariance_under_compact_perturbation, pairing_identity_check,
    positive_definite_check, DoubleTransformOptions, PairingResidual,
};

/// Internal cutoffs `R` for the `L¹` profile and the series window sums: four doublings up to `10³`.
pub const DEFAULT_RADII: [f64; 5] = [62.5, 125.0, 250.0, 500.0, 1000.0];

pub const CHECK_L1: &str = "l1_integrability";
pub const CHECK_SERIES_TB: &str = "fourier_bohr_translation_bounded";
pub const CHECK_CROSS: &str = "closed_vs_oracle";

/// What a report is about.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subject {
    pub kind: String,
    pub scheme_label: Option<String>,
    pub window_kind: Option<String>,
    pub density: Option<f64>,
    pub warnings: Vec<String>,
}

impl Subject {
    pub fn model_set(scheme: &CutProjectScheme, window: &WindowFunction) -> Self {
        let mut warnings = Vec::new();
        if !window.is_continuous() {
            warnings.push(format!(
                "{} window is discontinuous: diagnostic mode, the comb is not strongly almost periodic",
                window.profile().name()
            ));
        }
        Self {
            kind: "model_set".into(),
            scheme_label: scheme.label().map(str::to_owned),
            window_kind: Some(window.profile().name().to_owned()),
            density: Some(scheme.density()),
            warnings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformabilityReport {
    pub subject: Subject,
    pub checks: Vec<NamedCheck>,
    pub overall: Verdict,
    pub cross_validation: Vec<Residual>,
    /// Set when the `L¹` check and the series check reach opposite decisive verdicts.
    pub consistency_alarm: bool,
}

impl TransformabilityReport {
    pub fn check(&self, name: &str) -> Option<&Verdict> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.verdict)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SapOptions {
    pub radii: Vec<f64>,
    /// Number of largest closed coefficients compared with the oracle.
    pub top_n: usize,
    /// Allowed closed-vs-oracle residual per unit of `|scale|` of the window.
    pub cross_tolerance: f64,
    pub coeff_floor: Option<f64>,
    pub quadrature: QuadratureOptions,
    /// Allows discontinuous windows; the report carries a warning.
    pub diagnostic: bool,
}

impl Default for SapOptions {
    fn default() -> Self {
        Self {
            radii: DEFAULT_RADII.to_vec(),
            top_n: 20,
            cross_tolerance: 2e-2,
            coeff_floor: None,
            quadrature: QuadratureOptions::default(),
            diagnostic: false,
        }
    }
}

impl SapOptions {
    /// Closed-series options with the internal cutoff capped at the largest
    /// radius, so discontinuous windows stay enumerable.
    pub(crate) fn closed(&self, scheme: &CutProjectScheme, window: &WindowFunction) -> ClosedOptions {
        let floor = self
            .coeff_floor
            .unwrap_or_else(|| crate::fourier::default_coeff_floor(scheme, window));
        let r_max = self.radii.last().copied().unwrap_or(f64::INFINITY);
        let cutoff = if floor > 0.0 && !window.is_zero() {
            window.decay_radius(floor / scheme.density()).min(r_max)
        } else {
            r_max
        };
        ClosedOptions {
            coeff_floor: self.coeff_floor,
            internal_cutoff: cutoff.is_finite().then_some(cutoff),
            quadrature: self.quadrature,
            ..ClosedOptions::default()
        }
    }
}

/// Window sums of `|c_χ|` over unit frequency cubes as the internal cutoff
/// `R` of the closed series grows.
///
/// A cube holds about `dens(L⁰)` dual points per unit of internal volume, so
/// its sum tracks `∫_{|k|≤R} |ȟ|`: bounded in `R` exactly when the series is
/// translation bounded.
pub fn series_translation_profile(
    scheme: &CutProjectScheme,
    window: &WindowFunction,
    freq_region: &AxisBox,
    radii: &[f64],
    quadrature: QuadratureOptions,
) -> Result<Verdict> {
    validate_scales(radii, 3)?;
    let d = scheme.physical_dim();
    if freq_region.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: freq_region.dim(),
        });
    }
    let r_max = *radii.last().expect("validated");
    let points = if window.is_zero() {
        Vec::new()
    } else {
        closed_coefficients(
            scheme,
            window,
            freq_region,
            r_max,
            &ClosedOptions {
                quadrature,
                ..ClosedOptions::default()
            },
        )?
    };
    let ranges: Vec<(i64, i64)> = (0..d)
        .map(|i| {
            (
                freq_region.lower()[i].ceil() as i64,
                (freq_region.upper()[i] - 1.0).floor() as i64,
            )
        })
        .collect();
    let whole_region = ranges.iter().any(|(a, b)| a > b);
    let mut cubes: BTreeMap<Vec<i64>, Vec<f64>> = BTreeMap::new();
    for (p, c) in &points {
        let key: Vec<i64> = if whole_region {
            Vec::new()
        } else {
            let key: Vec<i64> = p.physical.iter().map(|x| x.floor() as i64).collect();
            if key.iter().zip(&ranges).any(|(k, (a, b))| k < a || k > b) {
                continue;
            }
            key
        };
        let star = p.internal.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let sums = cubes.entry(key).or_insert_with(|| vec![0.0; radii.len()]);
        for (j, r) in radii.iter().enumerate() {
            if star <= *r {
                sums[j] += c.norm();
            }
        }
    }
    let maxima: Vec<f64> = (0..radii.len())
        .map(|j| cubes.values().fold(0.0f64, |m, s| m.max(s[j])))
        .collect();
    let c = classify_increments(&maxima, IncrementThresholds::default());
    Ok(Verdict::new(c.status, quadrature.tol)
        .with_evidence("radii", radii.to_vec())
        .with_evidence("max_cube_sums", maxima)
        .with_evidence("increments", c.increments)
        .with_evidence("increment_ratios", c.ratios)
        .with_evidence("cubes", vec![cubes.len() as f64]))
}

/// Compares the largest closed coefficients with the brute-force oracle on
/// the comb truncated at `scale`.
fn cross_validate(
    scheme: &CutProjectScheme,
    window: &WindowFunction,
    freq_region: &AxisBox,
    scale: f64,
    options: &SapOptions,
) -> Result<(Verdict, f64)> {
    let series = fourier_bohr_closed_with(scheme, window, freq_region, &options.closed(scheme, window))?;
    let top = series.largest(options.top_n);
    let freqs: Vec<Vec<f64>> = top.iter().map(|a| a.frequency.clone()).collect();
    let comb = ModelSetComb::new(scheme.clone(), window.clone())?.comb_at(scale)?;
    let oracle = truncated_transform_oracle(&comb, &freqs)?;
    let closed: Vec<Complex64> = top.iter().map(|a| a.coefficient).collect();
    let residuals: Vec<f64> = closed.iter().zip(&oracle).map(|(a, b)| (a - b).norm()).collect();
    let worst = residuals.iter().fold(0.0f64, |m, r| m.max(*r));
    let tol = options.cross_tolerance * window.scale().norm();
    let status = if worst <= tol { Status::Holds } else { Status::Fails };
    let v = Verdict::new(status, tol)
        .with_evidence("frequencies", freqs.concat())
        .with_evidence("closed_modulus", closed.iter().map(|c| c.norm()).collect())
        .with_evidence("oracle_modulus", oracle.iter().map(|c| c.norm()).collect())
        .with_evidence("residuals", residuals)
        .with_evidence("scale", vec![scale]);
    Ok((v, worst))
}

/// Runs the `L¹` check on `ȟ`, the translation-boundedness check on the
/// closed series, and the closed-versus-oracle cross-validation.
pub fn sap_transformable(
    scheme: &CutProjectScheme,
    window: &WindowFunction,
    freq_region: &AxisBox,
    scales: &[f64],
    options: &SapOptions,
) -> Result<TransformabilityReport> {
    if window.dim() != scheme.internal_dim() {
        return Err(Error::DimensionMismatch {
            expected: scheme.internal_dim(),
            got: window.dim(),
        });
    }
    if !window.is_continuous() && !options.diagnostic {
        return Err(invalid(format!(
            "{} window is discontinuous; verdicts need a continuous window (use diagnostic mode)",
            window.profile().name()
        )));
    }
    validate_scales(scales, 1)?;
    let subject = Subject::model_set(scheme, window);
    if scales.len() < 3 {
        return Ok(TransformabilityReport {
            subject,
            checks: Vec::new(),
            overall: Verdict::inconclusive("at least 3 doubling scales are required"),
            cross_validation: Vec::new(),
            consistency_alarm: false,
        });
    }

    let l1 = l1_integrability_profile_with(window, 1.0 / scheme.density(), &options.radii, options.quadrature)?;
    let tb = series_translation_profile(scheme, window, freq_region, &options.radii, options.quadrature)?;
    let (cross, worst) = cross_validate(scheme, window, freq_region, *scales.last().expect("validated"), options)?;

    let alarm = l1.status.is_decisive() && tb.status.is_decisive() && l1.status != tb.status;
    let statuses = [l1.status, tb.status, cross.status];
    let overall_status = if statuses.contains(&Status::Fails) {
        Status::Fails
    } else if statuses.iter().all(|s| *s == Status::Holds) {
        Status::Holds
    } else {
        Status::Inconclusive
    };
    let cross_tol = cross.tolerance_used;
    let mut overall = Verdict::new(overall_status, cross_tol);
    if alarm {
        overall = overall.with_note("consistency alarm: L1 integrability and series translation boundedness disagree");
    }
    for w in &subject.warnings {
        overall = overall.with_note(w.clone());
    }
    Ok(TransformabilityReport {
        subject,
        checks: vec![
            NamedCheck {
                name: CHECK_L1.into(),
                verdict: l1,
            },
            NamedCheck {
                name: CHECK_SERIES_TB.into(),
                verdict: tb,
            },
            NamedCheck {
                name: CHECK_CROSS.into(),
                verdict: cross,
            },
        ],
        overall,
        cross_validation: vec![Residual {
            name: CHECK_CROSS.into(),
            value: worst,
            tolerance: cross_tol,
        }],
        consistency_alarm: alarm,
    })
}
