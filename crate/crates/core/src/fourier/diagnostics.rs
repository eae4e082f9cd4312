//! Growth diagnostics: `ȟ ∈ L¹` and `Σ |c_χ|²|ĝ(χ)|² < ∞`.

use crate::error::{invalid, Result};
use crate::fourier::FourierBohrSeries;
use crate::quadrature::QuadratureOptions;
use crate::test_function::TestFunction;
use crate::verdict::{classify_increments, IncrementThresholds, Status, Verdict};
use crate::window::WindowFunction;

/// Integration cells per unit of `1/r` on the k-axis: pitch `1/(16 r)`.
pub const L1_GRID_CELLS_PER_RADIUS: f64 = 16.0;

const GL5_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn gl5<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<f64> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = 0.0;
    for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
        acc += w * f(c + h * x)?;
    }
    Ok(acc * h)
}

fn check_geometric(radii: &[f64]) -> Result<()> {
    if radii.len() < 4 {
        return Err(invalid("at least 4 radii are required"));
    }
    if radii[0] <= 0.0 || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("radii must be positive and strictly increasing"));
    }
    let q = radii[1] / radii[0];
    if radii.windows(2).any(|w| ((w[1] / w[0]) / q - 1.0).abs() > 1e-9) {
        return Err(invalid("radii must form a geometric sequence"));
    }
    Ok(())
}

/// `∫_{-R}^{R} |p̌(k)| dk` for each radius, by Gauss–Legendre cells of pitch `1/(16r)`.
fn axis_l1_partials(window: &WindowFunction, radii: &[f64], opts: QuadratureOptions) -> Result<Vec<f64>> {
    let (profile, r) = (window.profile(), window.support_radius());
    let f = |k: f64| profile.transform(r, k, opts).map(|v| v.norm());
    let pitch = 1.0 / (L1_GRID_CELLS_PER_RADIUS * r);
    let r_max = *radii.last().expect("non-empty");
    let cells = (r_max / pitch).ceil() as usize;
    let mut knots: Vec<f64> = (0..cells).map(|i| i as f64 * pitch).collect();
    knots.extend_from_slice(radii);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let spans: Vec<(f64, f64)> = knots.windows(2).map(|w| (w[0], w[1])).collect();
    let pieces = crate::par::map(&spans, |&(a, b)| gl5(&f, a, b));
    let mut out = Vec::with_capacity(radii.len());
    let mut acc = 0.0;
    let mut next = 0;
    for ((_, b), piece) in spans.iter().zip(pieces) {
        acc += piece?;
        while next < radii.len() && radii[next] <= *b {
            out.push(2.0 * acc);
            next += 1;
        }
    }
    Ok(out)
}

/// Classifies `S(R) = ∫_{[-R,R]^m} |ȟ(k)| dk` over the given radii.
///
/// Holds when the increments shrink geometrically, Fails when they stay
/// roughly constant (logarithmic divergence). `dual_density_hint` is
/// recorded as evidence: `dens(L)·dens(L⁰)·S(R)` predicts the mass of the
/// closed series in a unit frequency cube.
pub fn l1_integrability_profile(
    window: &WindowFunction,
    dual_density_hint: f64,
    radii: &[f64],
) -> Result<Verdict> {
    l1_integrability_profile_with(window, dual_density_hint, radii, QuadratureOptions::default())
}

pub fn l1_integrability_profile_with(
    window: &WindowFunction,
    dual_density_hint: f64,
    radii: &[f64],
    opts: QuadratureOptions,
) -> Result<Verdict> {
    check_geometric(radii)?;
    let m = window.dim();
    let scale = window.scale().norm();
    let sums: Vec<f64> = if m == 0 || scale == 0.0 {
        vec![scale; radii.len()]
    } else {
        axis_l1_partials(window, radii, opts)?
            .into_iter()
            .map(|a| scale * a.powi(m as i32))
            .collect()
    };
    let c = classify_increments(&sums, IncrementThresholds::default());
    let mut v = Verdict::new(c.status, opts.tol)
        .with_evidence("radii", radii.to_vec())
        .with_evidence("l1_partial_integrals", sums)
        .with_evidence("increments", c.increments)
        .with_evidence("increment_ratios", c.ratios)
        .with_evidence("dual_density", vec![dual_density_hint]);
    if !window.is_continuous() {
        v = v.with_note(format!("{} window is discontinuous", window.profile().name()));
    }
    Ok(v)
}

/// Partial sums of `|c_χ|²|ĝ(χ)|²` over cubes `c ± R` with `R = R_max/16, …, R_max`
/// about the centre of the series region.
pub fn summability_check(series: &FourierBohrSeries, g: &TestFunction) -> Result<Verdict> {
    if g.dim() != series.dim() {
        return Err(crate::error::Error::DimensionMismatch {
            expected: series.dim(),
            got: g.dim(),
        });
    }
    let region = series.freq_region();
    let dim = series.dim();
    let center: Vec<f64> = (0..dim)
        .map(|i| 0.5 * (region.lower()[i] + region.upper()[i]))
        .collect();
    let r_max = region.inner_half_width();
    let radii: Vec<f64> = (0..5).rev().map(|j| r_max / f64::from(1 << j)).collect();
    let terms: Vec<(f64, f64)> = series
        .entries()
        .iter()
        .map(|e| {
            let dist = e
                .frequency
                .iter()
                .zip(&center)
                .fold(0.0f64, |m, (x, c)| m.max((x - c).abs()));
            let gh = g.hat(&e.frequency)?;
            Ok((dist, e.coefficient.norm_sqr() * gh.norm_sqr()))
        })
        .collect::<Result<_>>()?;
    let sums: Vec<f64> = radii
        .iter()
        .map(|r| terms.iter().filter(|(d, _)| d <= r).map(|(_, t)| t).sum())
        .collect();
    let (status, ratios) = if series.is_empty() {
        (Status::Holds, Vec::new())
    } else {
        let c = classify_increments(&sums, IncrementThresholds::default());
        (c.status, c.ratios)
    };
    Ok(Verdict::new(status, 0.0)
        .with_evidence("radii", radii)
        .with_evidence("partial_sums", sums)
        .with_evidence("increment_ratios", ratios))
}
