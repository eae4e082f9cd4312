//! Sliding-window estimates of `‖μ‖_K = sup_x |μ|(x + K)` for cubes `K`.
//!
//! Cubes of edge `e` are placed at offsets on the grid `(e/2)·ℤ^d`. Each
//! cube is the union of `2^d` half-open cells of edge `e/2`, so all cube
//! sums come from one pass that bins `|w_x|` into cells. An arbitrary
//! translate of a cube of edge `e` is covered by at most `2^d` grid cubes,
//! which bounds how far the scanned maximum can undershoot the true sup.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::AxisBox;
use crate::measures::comb::DiracComb;
use crate::measures::source::CombSource;
use crate::verdict::{Status, Verdict};

/// Relative tolerance for calling two window sums equal.
pub const STABILITY_REL_TOL: f64 = 1e-9;
/// Ratio per doubling above which a window sum counts as growing.
pub const GROWTH_FACTOR_TOL: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileHint {
    Stable,
    Growing,
    Insufficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSumProfile {
    pub window_edge: f64,
    /// `(scale, max window sum over [-s, s]^d)`.
    pub max_sums: Vec<(f64, f64)>,
    pub verdict_hint: ProfileHint,
}

type CellIndex = Vec<i64>;

fn cell_of(x: &[f64], pitch: f64) -> CellIndex {
    x.iter().map(|v| (v / pitch).floor() as i64).collect()
}

/// `|w|` summed per cell of edge `pitch`.
fn cell_sums(comb: &DiracComb, pitch: f64) -> BTreeMap<CellIndex, f64> {
    let mut cells = BTreeMap::new();
    for (p, w) in comb.iter() {
        *cells.entry(cell_of(p, pitch)).or_insert(0.0) += w.norm();
    }
    cells
}

/// Sums over cubes made of `2^d` cells, keyed by the lowest cell index.
fn cube_sums(cells: &BTreeMap<CellIndex, f64>, dim: usize) -> BTreeMap<CellIndex, f64> {
    let mut cubes = BTreeMap::new();
    for (idx, v) in cells {
        for corner in 0..(1usize << dim) {
            let key: CellIndex = idx
                .iter()
                .enumerate()
                .map(|(i, c)| c - ((corner >> i) & 1) as i64)
                .collect();
            *cubes.entry(key).or_insert(0.0) += v;
        }
    }
    cubes
}

/// Integer range of cube indices `j` with `[j·p, j·p + 2p) ⊂ [lo, hi)` on one axis.
fn cube_index_range(lo: f64, hi: f64, pitch: f64) -> (i64, i64) {
    let first = (lo / pitch).ceil() as i64;
    let last = ((hi - 2.0 * pitch) / pitch).floor() as i64;
    (first, last)
}

fn cubes_inside(bounds: &AxisBox, pitch: f64) -> Vec<(i64, i64)> {
    (0..bounds.dim())
        .map(|i| cube_index_range(bounds.lower()[i], bounds.upper()[i], pitch))
        .collect()
}

fn in_ranges(idx: &[i64], ranges: &[(i64, i64)]) -> bool {
    idx.iter().zip(ranges).all(|(v, (a, b))| a <= v && v <= b)
}

fn scan_bounds(comb: &DiracComb, scale: f64) -> Option<AxisBox> {
    AxisBox::centered(comb.dim(), scale).intersect(comb.region())
}

fn max_window_sum(comb: &DiracComb, window_edge: f64, scale: f64) -> f64 {
    let pitch = 0.5 * window_edge;
    let Some(bounds) = scan_bounds(comb, scale) else {
        return 0.0;
    };
    let ranges = cubes_inside(&bounds, pitch);
    let cubes = cube_sums(&cell_sums(comb, pitch), comb.dim());
    cubes
        .iter()
        .filter(|(k, _)| in_ranges(k, &ranges))
        .fold(0.0, |m, (_, v)| m.max(*v))
}

fn hint_from_maxima(maxima: &[f64]) -> ProfileHint {
    let n = maxima.len();
    if n < 2 {
        return ProfileHint::Insufficient;
    }
    let (prev, last) = (maxima[n - 2], maxima[n - 1]);
    if (last - prev).abs() <= STABILITY_REL_TOL * last.abs().max(prev.abs()) {
        return ProfileHint::Stable;
    }
    let growing = |a: f64, b: f64| a > 0.0 && b >= GROWTH_FACTOR_TOL * a;
    let last_two_grow = if n >= 3 {
        growing(maxima[n - 3], prev) && growing(prev, last)
    } else {
        growing(prev, last)
    };
    if last_two_grow {
        ProfileHint::Growing
    } else {
        ProfileHint::Insufficient
    }
}

/// Maximum of `Σ_{x ∈ cube} |w_x|` over grid cubes of edge `window_edge`
/// inside `[-s, s]^d`, for each requested scale.
pub fn translation_bound_profile(
    comb: &DiracComb,
    window_edge: f64,
    scales: &[f64],
) -> Result<WindowSumProfile> {
    if !(window_edge > 0.0 && window_edge.is_finite()) {
        return Err(invalid("window edge must be positive"));
    }
    if let Some(&largest) = scales.iter().max_by(|a, b| a.total_cmp(b)) {
        let needed = AxisBox::centered(comb.dim(), largest);
        if !comb.region().covers(&needed) {
            return Err(Error::RegionTooSmall(format!(
                "comb region does not cover [-{largest}, {largest}]^{}",
                comb.dim()
            )));
        }
    }
    let max_sums: Vec<(f64, f64)> = scales
        .iter()
        .map(|&s| (s, max_window_sum(comb, window_edge, s)))
        .collect();
    let maxima: Vec<f64> = max_sums.iter().map(|(_, m)| *m).collect();
    Ok(WindowSumProfile {
        window_edge,
        verdict_hint: hint_from_maxima(&maxima),
        max_sums,
    })
}

fn check_scales(scales: &[f64]) -> Result<()> {
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("scales must be strictly increasing"));
    }
    if scales.iter().any(|s| !(*s > 0.0)) {
        return Err(invalid("scales must be positive"));
    }
    Ok(())
}

/// Decides whether a formal sum is a measure from truncations at growing
/// scales: every window `t + K` (with `K` one cube of edge `window_edge`,
/// `t` on the scan grid inside the smallest scale) must have a sum that
/// stops changing. A window whose sum keeps growing by at least
/// [`GROWTH_FACTOR_TOL`] per doubling marks a non-summable accumulation.
pub fn is_formal_sum_measure<S: CombSource + ?Sized>(
    source: &S,
    window_edge: f64,
    scales: &[f64],
) -> Result<Verdict> {
    if !(window_edge > 0.0 && window_edge.is_finite()) {
        return Err(invalid("window edge must be positive"));
    }
    check_scales(scales)?;
    if scales.len() < 3 {
        return Ok(Verdict::inconclusive(
            "at least three doubling scales are needed",
        ));
    }
    let pitch = 0.5 * window_edge;
    let combs: Vec<DiracComb> = scales
        .iter()
        .map(|&s| source.comb_at(s))
        .collect::<Result<_>>()?;

    let Some(fixed_bounds) = scan_bounds(&combs[0], scales[0]) else {
        return Ok(Verdict::inconclusive("smallest scale has an empty scan region"));
    };
    let fixed_ranges = cubes_inside(&fixed_bounds, pitch);
    let per_scale: Vec<BTreeMap<CellIndex, f64>> = combs
        .iter()
        .map(|c| {
            cube_sums(&cell_sums(c, pitch), c.dim())
                .into_iter()
                .filter(|(k, _)| in_ranges(k, &fixed_ranges))
                .collect()
        })
        .collect();

    // every window with mass at some scale
    let mut keys: Vec<&CellIndex> = per_scale.iter().flat_map(|m| m.keys()).collect();
    keys.sort();
    keys.dedup();

    let n = scales.len();
    let series = |k: &CellIndex| -> Vec<f64> {
        per_scale
            .iter()
            .map(|m| m.get(k).copied().unwrap_or(0.0))
            .collect()
    };
    let mut all_stable = true;
    let mut worst_growing: Option<(Vec<f64>, &CellIndex)> = None;
    let mut worst_overall: Option<(Vec<f64>, &CellIndex)> = None;
    for k in &keys {
        let s = series(k);
        let (a, b, c) = (s[n - 3], s[n - 2], s[n - 1]);
        let stable = (c - b).abs() <= STABILITY_REL_TOL * c.abs().max(b.abs());
        let grows = a > 0.0 && b >= GROWTH_FACTOR_TOL * a && c >= GROWTH_FACTOR_TOL * b;
        all_stable &= stable;
        if grows && worst_growing.as_ref().is_none_or(|(w, _)| c > w[n - 1]) {
            worst_growing = Some((s.clone(), k));
        }
        if worst_overall.as_ref().is_none_or(|(w, _)| c > w[n - 1]) {
            worst_overall = Some((s, k));
        }
    }

    let maxima: Vec<f64> = combs
        .iter()
        .zip(scales)
        .map(|(c, &s)| max_window_sum(c, window_edge, s))
        .collect();

    let (status, worst) = match (worst_growing, all_stable) {
        (Some(w), _) => (Status::Fails, Some(w)),
        (None, true) => (Status::Holds, worst_overall),
        (None, false) => (Status::Inconclusive, worst_overall),
    };
    let mut verdict = Verdict::new(status, STABILITY_REL_TOL)
        .with_evidence("scales", scales.to_vec())
        .with_evidence("max_window_sums", maxima)
        .with_evidence("growth_factor_tol", vec![GROWTH_FACTOR_TOL]);
    if let Some((sums, idx)) = worst {
        verdict = verdict
            .with_evidence("worst_window_sums", sums)
            .with_evidence(
                "worst_window_lower_corner",
                idx.iter().map(|j| *j as f64 * pitch).collect(),
            );
    } else {
        verdict = verdict.with_evidence("worst_window_sums", vec![0.0; n]);
    }
    Ok(verdict)
}

/// Translation boundedness on ℝ^d from truncations at growing scales: the
/// formal sum must be a measure and the maximal window sum must not grow.
pub fn translation_bounded<S: CombSource + ?Sized>(
    source: &S,
    window_edge: f64,
    scales: &[f64],
) -> Result<Verdict> {
    let formal = is_formal_sum_measure(source, window_edge, scales)?;
    if scales.len() < 3 {
        return Ok(formal);
    }
    let maxima = formal
        .evidence("max_window_sums")
        .map(<[f64]>::to_vec)
        .unwrap_or_default();
    let hint = hint_from_maxima(&maxima);
    let n = maxima.len();
    let last_ratio = if maxima[n - 2] > 0.0 {
        maxima[n - 1] / maxima[n - 2]
    } else if maxima[n - 1] > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    // an unsettled maximum still counts as bounded when its last doubling
    // stayed within half the growth tolerance
    let bounded_margin = 1.0 + 0.5 * (GROWTH_FACTOR_TOL - 1.0);
    let status = match (formal.status, hint) {
        (Status::Fails, _) | (_, ProfileHint::Growing) => Status::Fails,
        (Status::Holds, ProfileHint::Stable) => Status::Holds,
        (Status::Holds, ProfileHint::Insufficient) if last_ratio <= bounded_margin => Status::Holds,
        _ => Status::Inconclusive,
    };
    let mut verdict = formal;
    verdict.status = status;
    verdict.notes.push(format!("max window sum hint: {hint:?}"));
    Ok(verdict.with_evidence("last_max_ratio", vec![last_ratio]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::source::FnSource;
    use num_complex::Complex64;

    fn integers(lo: i64, hi: i64) -> DiracComb {
        let xs: Vec<f64> = (lo..hi).map(|i| i as f64).collect();
        DiracComb::unit_atoms_1d(&xs, AxisBox::new(vec![lo as f64], vec![hi as f64]).unwrap())
            .unwrap()
    }

    fn harmonic(n: usize) -> DiracComb {
        let xs: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
        DiracComb::unit_atoms_1d(&xs, AxisBox::new(vec![-1.0], vec![1.5]).unwrap()).unwrap()
    }

    #[test]
    fn integer_comb_window_sum_is_one() {
        let comb = integers(-100, 100);
        let p = translation_bound_profile(&comb, 1.0, &[10.0, 20.0, 40.0, 80.0]).unwrap();
        assert!(p.max_sums.iter().all(|(_, m)| *m == 1.0));
        assert_eq!(p.verdict_hint, ProfileHint::Stable);
    }

    #[test]
    fn harmonic_atoms_grow() {
        // [0, 0.5) holds 1/n for n = 3..N
        let mut maxima = Vec::new();
        for n in [100, 200, 400] {
            let comb = harmonic(n);
            let p = translation_bound_profile(&comb, 0.5, &[1.0]).unwrap();
            assert_eq!(p.max_sums[0].1, (n - 2) as f64);
            maxima.push(p.max_sums[0].1);
        }
        assert_eq!(hint_from_maxima(&maxima), ProfileHint::Growing);
    }

    #[test]
    fn empty_comb_is_stable_zero() {
        let comb = DiracComb::empty(AxisBox::centered(1, 10.0));
        let p = translation_bound_profile(&comb, 1.0, &[2.0, 4.0, 8.0]).unwrap();
        assert!(p.max_sums.iter().all(|(_, m)| *m == 0.0));
        assert_eq!(p.verdict_hint, ProfileHint::Stable);
    }

    #[test]
    fn region_must_cover_scale() {
        let comb = integers(-5, 5);
        assert!(matches!(
            translation_bound_profile(&comb, 1.0, &[10.0]),
            Err(Error::RegionTooSmall(_))
        ));
    }

    #[test]
    fn two_dimensional_lattice() {
        let mut pts = Vec::new();
        for i in -8..8 {
            for j in -8..8 {
                pts.push(vec![i as f64, j as f64]);
            }
        }
        let n = pts.len();
        let comb = DiracComb::new(pts, vec![Complex64::new(1.0, 0.0); n], AxisBox::centered(2, 8.0))
            .unwrap();
        let p = translation_bound_profile(&comb, 1.0, &[4.0, 8.0]).unwrap();
        assert!(p.max_sums.iter().all(|(_, m)| *m == 1.0));
        let p = translation_bound_profile(&comb, 2.0, &[8.0]).unwrap();
        assert_eq!(p.max_sums[0].1, 4.0);
    }

    #[test]
    fn finite_comb_is_a_measure() {
        let comb = DiracComb::new(
            vec![vec![0.1], vec![0.7], vec![3.0]],
            vec![
                Complex64::new(2.0, 1.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 4.0),
            ],
            AxisBox::centered(1, 100.0),
        )
        .unwrap();
        let v = is_formal_sum_measure(&comb, 1.0, &[10.0, 20.0, 40.0]).unwrap();
        assert_eq!(v.status, Status::Holds);
    }

    #[test]
    fn harmonic_generator_fails() {
        let src = FnSource::new(1, |n: f64| Ok(harmonic(n as usize)));
        let v = is_formal_sum_measure(&src, 0.5, &[250.0, 500.0, 1000.0]).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert_eq!(v.evidence("worst_window_sums").unwrap(), &[248.0, 498.0, 998.0]);
        assert_eq!(v.evidence("worst_window_lower_corner").unwrap(), &[0.0]);
    }

    #[test]
    fn too_few_scales_is_inconclusive() {
        let comb = integers(-50, 50);
        let v = is_formal_sum_measure(&comb, 1.0, &[10.0, 20.0]).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
    }
}
