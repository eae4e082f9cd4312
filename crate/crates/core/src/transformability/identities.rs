use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cps::CutProjectScheme;
use crate::error::{invalid, Error, Result};
use crate::fourier::{fourier_bohr_averaged_many, fourier_bohr_closed_with, ClosedOptions};
use crate::geometry::AxisBox;
use crate::measures::comb::{lex_cmp, DiracComb};
use crate::measures::mean::{validate_scales, Averaging};
use crate::measures::source::{CombSource, Perturbed};
use crate::profile::Profile;
use crate::test_function::TestFunction;
use crate::transformability::{sap_transformable, SapOptions};
use crate::verdict::{Status, Verdict};
use crate::window::WindowFunction;

/// `∫_{|k|>R} e(k)^q dk` and `∫_ℝ e(k)^q dk` for the envelope
/// `e(k) = min(A, C/|k|^p)` of a profile; `q ∈ {1, 2}`.
fn envelope_integrals(profile: &Profile, r: f64, big_r: f64, q: i32) -> (f64, f64) {
    let a = profile.l1_norm(r);
    let bound = profile
        .decay_bounds(r)
        .into_iter()
        .max_by(|x, y| x.power.partial_cmp(&y.power).unwrap_or(Ordering::Equal))
        .expect("every profile has a decay bound");
    let (c, p) = (bound.coef, bound.power);
    let qp = q as f64 * p;
    if qp <= 1.0 {
        return (f64::INFINITY, f64::INFINITY);
    }
    let k0 = (c / a).powf(1.0 / p);
    let tail_from = |x: f64| 2.0 * c.powi(q) / ((qp - 1.0) * x.powf(qp - 1.0));
    let total = 2.0 * a.powi(q) * k0 + tail_from(k0);
    let tail = if big_r >= k0 {
        tail_from(big_r)
    } else {
        total - 2.0 * a.powi(q) * big_r
    };
    (tail, total)
}

/// Bound on the integral of a separable envelope product over the
/// complement of `[-R, R]^d`.
fn product_tail(profile: &Profile, r: f64, dim: usize, big_r: f64, q: i32) -> f64 {
    if dim == 0 {
        return 0.0;
    }
    let (tail, total) = envelope_integrals(profile, r, big_r, q);
    dim as f64 * tail * total.powi(dim as i32 - 1)
}

/// Both sides of `⟨μ, f∗f̃⟩ = ⟨μ̂, |f̌|²⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingResidual {
    pub scale: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    /// Bound on the right-hand mass left out by using finitely many atoms.
    pub tail_bound: f64,
    pub atoms_used: usize,
}

impl PairingResidual {
    /// `max(1e-2, tail_bound)`.
    pub fn tolerance(&self) -> f64 {
        1e-2f64.max(self.tail_bound)
    }
}

/// Evaluates both sides of the pairing identity.
///
/// The left side sums `w_x (f∗f̃)(x)` over the truncation of `μ` at `scale`;
/// the right side sums `c_χ |f̌(χ)|²` over the `n_atoms` atoms of `mu_hat`
/// nearest the origin. The tail bound covers the unused atoms of `mu_hat`
/// and, through the decay envelope of `f̌`, frequencies beyond its region.
pub fn pairing_identity_check<M: CombSource + ?Sized>(
    mu: &M,
    mu_hat: &DiracComb,
    f: &TestFunction,
    scale: f64,
    n_atoms: usize,
) -> Result<PairingResidual> {
    let dim = mu.dim();
    if f.dim() != dim || mu_hat.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: if f.dim() != dim { f.dim() } else { mu_hat.dim() },
        });
    }
    let comb = mu.comb_at(scale)?;
    let reach = 2.0 * f.support_radius();
    let support = AxisBox::new(vec![-reach; dim], vec![reach; dim])?;
    if !comb.region().covers(&support) {
        return Err(Error::SupportExceedsRegion);
    }
    let mut lhs = Complex64::new(0.0, 0.0);
    for (x, w) in comb.iter() {
        if support.contains_closed(x) {
            lhs += w * f.autocorrelation(x)?;
        }
    }

    let mut order: Vec<usize> = (0..mu_hat.len()).collect();
    let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    order.sort_by(|&i, &j| {
        let (a, b) = (&mu_hat.points()[i], &mu_hat.points()[j]);
        norm(a)
            .partial_cmp(&norm(b))
            .unwrap_or(Ordering::Equal)
            .then_with(|| lex_cmp(a, b))
    });
    let used = n_atoms.min(order.len());
    let mut rhs = Complex64::new(0.0, 0.0);
    for &i in &order[..used] {
        rhs += mu_hat.weights()[i] * f.check_transform_sq(&mu_hat.points()[i])?;
    }
    let (profile, r) = (f.profile(), f.support_radius());
    let envelope_sq = |k: &[f64]| -> f64 { k.iter().map(|ki| profile.envelope(r, *ki).powi(2)).product() };
    let mut tail_bound: f64 = order[used..]
        .iter()
        .map(|&i| mu_hat.weights()[i].norm() * envelope_sq(&mu_hat.points()[i]))
        .sum();
    // frequencies outside the region of mu_hat: its atom density and largest
    // coefficient stand in for the unseen atoms
    let region = mu_hat.region();
    if !mu_hat.is_empty() {
        let atom_density = mu_hat.len() as f64 / region.volume();
        let c_max = mu_hat.weights().iter().fold(0.0f64, |m, w| m.max(w.norm()));
        let big_r = (0..dim)
            .map(|i| region.lower()[i].abs().min(region.upper()[i].abs()))
            .fold(f64::INFINITY, f64::min);
        tail_bound += c_max * atom_density * product_tail(profile, r, dim, big_r, 2);
    }
    Ok(PairingResidual {
        scale,
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        tail_bound,
        atoms_used: used,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubleTransformOptions {
    /// Coefficient floor relative to `dens(L)·‖h‖_∞` for the forward series.
    pub relative_floor: f64,
    /// Largest acceptable tolerance; above it the verdict is Inconclusive.
    pub tolerance_cap: f64,
}

impl Default for DoubleTransformOptions {
    fn default() -> Self {
        Self {
            relative_floor: 1e-4,
            tolerance_cap: 5e-2,
        }
    }
}

/// Transforms the closed series back to physical space by averaging at the
/// atoms of `ω_h` inside `points_region`, and compares with the reflected
/// weights `h(-x⋆)`.
///
/// `freq_scales` are the frequency-space averaging scales; the series is
/// generated once on `[-S, S)^d` for the largest `S`.
pub fn double_transform_check(
    scheme: &CutProjectScheme,
    window: &WindowFunction,
    points_region: &AxisBox,
    freq_scales: &[f64],
    options: &DoubleTransformOptions,
) -> Result<Verdict> {
    validate_scales(freq_scales, 3)?;
    let (d, m) = (scheme.physical_dim(), scheme.internal_dim());
    if window.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: window.dim(),
        });
    }
    let s_max = *freq_scales.last().expect("validated");
    let floor = options.relative_floor * scheme.density() * window.sup_norm();
    let series = fourier_bohr_closed_with(
        scheme,
        window,
        &AxisBox::centered(d, s_max),
        &ClosedOptions {
            coeff_floor: Some(floor),
            ..ClosedOptions::default()
        },
    )?;
    let cutoff = match series.generation() {
        crate::fourier::Generation::ClosedFormula { internal_cutoff, .. } => *internal_cutoff,
        _ => unreachable!("closed series"),
    };
    let series_comb = series.to_comb()?;

    let atoms = scheme.enumerate(points_region, &window.support_box(), crate::cps::DEFAULT_CELL_BUDGET)?;
    let xs: Vec<Vec<f64>> = atoms.iter().map(|p| p.physical.clone()).collect();
    let expected: Vec<Complex64> = atoms
        .iter()
        .map(|p| window.evaluate(&p.internal.iter().map(|v| -v).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let recovered = fourier_bohr_averaged_many(&series_comb, &xs, freq_scales, Averaging::Box)?;

    let deviations: Vec<f64> = recovered
        .iter()
        .zip(&expected)
        .map(|(r, e)| (r.value - e).norm())
        .collect();
    let worst = deviations.iter().fold(0.0f64, |a, b| a.max(*b));
    let estimator = recovered.iter().fold(0.0f64, |a, r| a.max(r.error));
    let truncation = if window.is_zero() {
        0.0
    } else {
        window.scale().norm() * product_tail(window.profile(), window.support_radius(), m, cutoff, 1)
            + series.dropped_mass() / AxisBox::centered(d, s_max).volume()
    };
    let tol = 1e-3f64.max(truncation + 3.0 * estimator);
    let status = if tol > options.tolerance_cap {
        Status::Inconclusive
    } else if worst <= tol {
        Status::Holds
    } else {
        Status::Fails
    };
    Ok(Verdict::new(status, tol)
        .with_evidence("points", xs.concat())
        .with_evidence("recovered_re", recovered.iter().map(|r| r.value.re).collect())
        .with_evidence("recovered_im", recovered.iter().map(|r| r.value.im).collect())
        .with_evidence("expected_re", expected.iter().map(|e| e.re).collect())
        .with_evidence("deviations", deviations)
        .with_evidence("truncation_bound", vec![truncation])
        .with_evidence("estimator_error", vec![estimator]))
}

/// Positivity of the closed series on top of [`sap_transformable`].
///
/// Coefficients must satisfy `Re c ≥ -tol` and `|Im c| ≤ tol` with
/// `tol = 1e-9·dens(L)·‖h‖_∞`.
pub fn positive_definite_check(
    scheme: &CutProjectScheme,
    window: &WindowFunction,
    freq_region: &AxisBox,
    scales: &[f64],
    options: &SapOptions,
) -> Result<Verdict> {
    let report = sap_transformable(scheme, window, freq_region, scales, options)?;
    let series = fourier_bohr_closed_with(scheme, window, freq_region, &options.closed(scheme, window))?;
    let tol = 1e-9 * scheme.density() * window.sup_norm();
    let min_re = series
        .entries()
        .iter()
        .fold(f64::INFINITY, |m, e| m.min(e.coefficient.re));
    let max_im = series
        .entries()
        .iter()
        .fold(0.0f64, |m, e| m.max(e.coefficient.im.abs()));
    let coefficients_ok = series.is_empty() || (min_re >= -tol && max_im <= tol);
    let status = if !coefficients_ok {
        Status::Fails
    } else {
        report.overall.status
    };
    let mut v = Verdict::new(status, tol)
        .with_evidence("min_real_part", vec![if series.is_empty() { 0.0 } else { min_re }])
        .with_evidence("max_abs_imaginary_part", vec![max_im])
        .with_evidence("coefficients", vec![series.len() as f64]);
    if !coefficients_ok {
        v = v.with_note("a closed coefficient is negative or complex");
    }
    if report.overall.status != Status::Holds {
        v = v.with_note(format!("transformability check is {:?}", report.overall.status));
    }
    Ok(v)
}

/// Averaged coefficients of `source + perturbation` minus those of `source`.
///
/// At each scale the shift must not exceed `‖perturbation on A_s‖₁ / vol(A_s)`
/// and the `1/s`-extrapolated shift must vanish within `max(1e-3, combined
/// estimator error)`.
pub fn fb_invariance_under_compact_perturbation<S: CombSource + ?Sized>(
    source: &S,
    perturbation: &DiracComb,
    chis: &[Vec<f64>],
    scales: &[f64],
) -> Result<Verdict> {
    if perturbation.dim() != source.dim() {
        return Err(invalid("perturbation dimension differs from the comb"));
    }
    let perturbed = Perturbed {
        base: source,
        perturbation,
    };
    let base = fourier_bohr_averaged_many(source, chis, scales, Averaging::Box)?;
    let moved = fourier_bohr_averaged_many(&perturbed, chis, scales, Averaging::Box)?;
    let bounds: Vec<f64> = scales
        .iter()
        .map(|&s| {
            let region = AxisBox::centered(source.dim(), s);
            let mass: f64 = perturbation
                .iter()
                .filter(|(x, _)| region.contains(x))
                .map(|(_, w)| w.norm())
                .sum();
            mass / region.volume()
        })
        .collect();
    let mut worst_ratio: f64 = 0.0;
    let mut shifts = Vec::new();
    let mut limits = Vec::new();
    let mut ok = true;
    let n = scales.len();
    for (b, p) in base.iter().zip(&moved) {
        for j in 0..n {
            let shift = (p.values[j] - b.values[j]).norm();
            // summation-order rounding of the two independent averages
            let slack = 1e-12 * (1.0 + p.values[j].norm() + b.values[j].norm());
            if shift > bounds[j] + slack {
                ok = false;
            }
            if bounds[j] > 0.0 {
                worst_ratio = worst_ratio.max(shift / bounds[j]);
            } else if shift > slack {
                worst_ratio = f64::INFINITY;
            }
            shifts.push(shift);
        }
        let limit = (p.extrapolated() - b.extrapolated()).norm();
        if limit > 1e-3f64.max(p.error + b.error) {
            ok = false;
        }
        limits.push(limit);
    }
    let status = if ok { Status::Holds } else { Status::Fails };
    Ok(Verdict::new(status, 1e-3)
        .with_evidence("scales", scales.to_vec())
        .with_evidence("shift_bounds", bounds)
        .with_evidence("shifts", shifts)
        .with_evidence("extrapolated_shifts", limits)
        .with_evidence("worst_shift_to_bound", vec![worst_ratio]))
}
