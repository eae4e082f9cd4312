//! `F(ω_h) = dens(L)·ω_ȟ` on the dual scheme.

use num_complex::Complex64;

use crate::cps::{CutProjectScheme, LatticePoint, DEFAULT_CELL_BUDGET};
use crate::error::{invalid, Error, Result};
use crate::fourier::{FourierBohrSeries, FrequencyAtom, Generation};
use crate::geometry::AxisBox;
use crate::quadrature::QuadratureOptions;
use crate::window::WindowFunction;

/// `1e-8 · dens(L) · ‖h‖_∞`.
pub fn default_coeff_floor(scheme: &CutProjectScheme, window: &WindowFunction) -> f64 {
    1e-8 * scheme.density() * window.sup_norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedOptions {
    /// Coefficients with `|c_χ|` below this are dropped. `None` uses [`default_coeff_floor`].
    pub coeff_floor: Option<f64>,
    /// Internal half-width for the dual enumeration. `None` derives it from the
    /// decay envelope of `ȟ` and the floor.
    pub internal_cutoff: Option<f64>,
    pub quadrature: QuadratureOptions,
    pub cell_budget: u64,
}

impl Default for ClosedOptions {
    fn default() -> Self {
        Self {
            coeff_floor: None,
            internal_cutoff: None,
            quadrature: QuadratureOptions::default(),
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }
}

/// Closed-formula series with an explicit coefficient floor.
pub fn fourier_bohr_closed(
    scheme: &CutProjectScheme,
    window: &WindowFunction,
    freq_region: &AxisBox,
    coeff_floor: f64,
) -> Result<FourierBohrSeries> {
    fourier_bohr_closed_with(
        scheme,
        window,
        freq_region,
        &ClosedOptions {
            coeff_floor: Some(coeff_floor),
            ..ClosedOptions::default()
        },
    )
}

pub fn fourier_bohr_closed_with(
    scheme: &CutProjectScheme,
    window: &WindowFunction,
    freq_region: &AxisBox,
    options: &ClosedOptions,
) -> Result<FourierBohrSeries> {
    let (d, m) = (scheme.physical_dim(), scheme.internal_dim());
    if window.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: window.dim(),
        });
    }
    if freq_region.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: freq_region.dim(),
        });
    }
    let density = scheme.density();
    let floor = options.coeff_floor.unwrap_or_else(|| default_coeff_floor(scheme, window));
    if !(floor >= 0.0 && floor.is_finite()) {
        return Err(invalid("coefficient floor must be finite and non-negative"));
    }
    let mut warnings = Vec::new();
    if !window.is_continuous() {
        warnings.push(format!(
            "{} window is discontinuous; the series is not translation bounded",
            window.profile().name()
        ));
    }
    let cutoff = match options.internal_cutoff {
        _ if window.is_zero() => 0.0,
        Some(c) if c >= 0.0 => c,
        Some(_) => return Err(invalid("internal cutoff must be non-negative")),
        None if floor > 0.0 => window.decay_radius(floor / density),
        None => return Err(invalid("a zero coefficient floor needs an explicit internal cutoff")),
    };
    let generation = Generation::ClosedFormula {
        scheme_label: scheme.label().map(str::to_owned),
        density,
        window_kind: window.profile().name().to_owned(),
        coeff_floor: floor,
        internal_cutoff: cutoff,
        warnings,
    };

    if window.is_zero() {
        return Ok(FourierBohrSeries::empty(freq_region.clone(), generation));
    }
    let points = closed_coefficients(scheme, window, freq_region, cutoff, options)?;
    let mut entries = Vec::with_capacity(points.len());
    let (mut dropped, mut dropped_mass) = (0usize, 0.0);
    for (p, c) in points {
        if c.norm() < floor {
            dropped += 1;
            dropped_mass += c.norm();
        } else {
            entries.push(FrequencyAtom {
                frequency: p.physical,
                coefficient: c,
            });
        }
    }
    Ok(FourierBohrSeries::new(entries, generation, freq_region.clone())?.with_dropped(dropped, dropped_mass))
}

/// Dual lattice points with `χ ∈ freq_region`, `|χ⋆|_∞ ≤ cutoff`, paired
/// with `c_χ = dens(L)·ȟ(χ⋆)`; no floor applied.
pub(crate) fn closed_coefficients(
    scheme: &CutProjectScheme,
    window: &WindowFunction,
    freq_region: &AxisBox,
    cutoff: f64,
    options: &ClosedOptions,
) -> Result<Vec<(LatticePoint, Complex64)>> {
    let density = scheme.density();
    let dual = scheme.dual()?;
    let internal_box = AxisBox::centered(window.dim(), cutoff);
    let points = dual.enumerate(freq_region, &internal_box, options.cell_budget)?;
    let unit = crate::par::map(&points, |p| {
        window
            .unit_transform(&p.internal, true, options.quadrature)
            .map(|t| density * t)
    });
    let scale = window.scale();
    points
        .into_iter()
        .zip(unit)
        // scale applied last so that rescaling the window rescales every
        // coefficient by exactly the same complex factor
        .map(|(p, u)| Ok((p, scale * u?)))
        .collect()
}
