//! Fourier–Bohr series of weighted combs.
//!
//! Characters are `e^{2πik·x}`. Window transforms use the check convention
//! `ȟ(k) = ∫ h(t) e^{2πik·t} dt`, coefficients are means of character-twisted
//! combs `c_χ = M(e^{-2πiχ·x} μ)`.

pub mod averaged;
pub mod closed;
pub mod diagnostics;
pub mod oracle;

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::AxisBox;
use crate::measures::comb::{lex_cmp, DiracComb, Provenance};
use crate::measures::mean::Averaging;
use crate::quadrature::QuadratureOptions;
use crate::window::WindowFunction;

pub use averaged::{averaged_series, fourier_bohr_averaged, fourier_bohr_averaged_many};
pub use closed::{default_coeff_floor, fourier_bohr_closed, fourier_bohr_closed_with, ClosedOptions};
pub use diagnostics::{l1_integrability_profile, summability_check, L1_GRID_CELLS_PER_RADIUS};
pub use oracle::{binned_spectrum, truncated_transform_oracle, BinnedSpectrum};

/// Frequencies closer than this (max-norm) are one atom.
pub const FREQUENCY_MERGE_TOLERANCE: f64 = 1e-9;

/// `ȟ(k)` by adaptive quadrature to absolute tolerance `quad_tol`.
pub fn window_transform(window: &WindowFunction, k: &[f64], quad_tol: f64) -> Result<Complex64> {
    if !(quad_tol > 0.0) {
        return Err(invalid("quad_tol must be positive"));
    }
    let opts = QuadratureOptions::with_tol(quad_tol / window.scale().norm().max(1.0));
    Ok(window.scale() * window.unit_transform(k, false, opts)?)
}

/// One Bragg peak.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyAtom {
    pub frequency: Vec<f64>,
    pub coefficient: Complex64,
}

/// How a series was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Generation {
    ClosedFormula {
        scheme_label: Option<String>,
        density: f64,
        window_kind: String,
        coeff_floor: f64,
        internal_cutoff: f64,
        warnings: Vec<String>,
    },
    Averaged {
        scales: Vec<f64>,
        averaging: Averaging,
        max_error: f64,
    },
    Given,
}

/// `Σ c_χ δ_χ` restricted to `freq_region`, sorted lexicographically by frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierBohrSeries {
    dim: usize,
    entries: Vec<FrequencyAtom>,
    generation: Generation,
    freq_region: AxisBox,
    dropped_count: usize,
    dropped_mass: f64,
}

impl FourierBohrSeries {
    /// Sorts the entries and merges frequencies within [`FREQUENCY_MERGE_TOLERANCE`].
    pub fn new(entries: Vec<FrequencyAtom>, generation: Generation, freq_region: AxisBox) -> Result<Self> {
        let dim = freq_region.dim();
        for e in &entries {
            if e.frequency.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: e.frequency.len(),
                });
            }
            if e.frequency.iter().any(|x| !x.is_finite()) || !e.coefficient.is_finite() {
                return Err(invalid("series entries must be finite"));
            }
        }
        let mut entries = entries;
        entries.sort_by(|a, b| lex_cmp(&a.frequency, &b.frequency));
        let mut merged: Vec<FrequencyAtom> = Vec::with_capacity(entries.len());
        let mut absorbed = vec![false; entries.len()];
        for i in 0..entries.len() {
            if absorbed[i] {
                continue;
            }
            let mut atom = entries[i].clone();
            for j in i + 1..entries.len() {
                if dim > 0 && entries[j].frequency[0] - atom.frequency[0] > FREQUENCY_MERGE_TOLERANCE {
                    break;
                }
                if !absorbed[j] && max_distance(&atom.frequency, &entries[j].frequency) <= FREQUENCY_MERGE_TOLERANCE {
                    atom.coefficient += entries[j].coefficient;
                    absorbed[j] = true;
                }
            }
            merged.push(atom);
        }
        Ok(Self {
            dim,
            entries: merged,
            generation,
            freq_region,
            dropped_count: 0,
            dropped_mass: 0.0,
        })
    }

    pub fn empty(freq_region: AxisBox, generation: Generation) -> Self {
        Self {
            dim: freq_region.dim(),
            entries: Vec::new(),
            generation,
            freq_region,
            dropped_count: 0,
            dropped_mass: 0.0,
        }
    }

    pub(crate) fn with_dropped(mut self, count: usize, mass: f64) -> Self {
        self.dropped_count = count;
        self.dropped_mass = mass;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[FrequencyAtom] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn generation(&self) -> &Generation {
        &self.generation
    }

    pub fn freq_region(&self) -> &AxisBox {
        &self.freq_region
    }

    /// Number of coefficients below the floor that were discarded.
    pub fn dropped_count(&self) -> usize {
        self.dropped_count
    }

    /// `Σ |c_χ|` over the discarded coefficients.
    pub fn dropped_mass(&self) -> f64 {
        self.dropped_mass
    }

    /// The entry nearest to `chi` in max-norm.
    pub fn nearest(&self, chi: &[f64]) -> Option<&FrequencyAtom> {
        self.entries.iter().min_by(|a, b| {
            max_distance(&a.frequency, chi)
                .partial_cmp(&max_distance(&b.frequency, chi))
                .unwrap_or(Ordering::Equal)
        })
    }

    /// `c_χ` if `chi` is an atom (within the merge tolerance).
    pub fn coefficient(&self, chi: &[f64]) -> Option<Complex64> {
        let (&c0, tol) = (chi.first()?, FREQUENCY_MERGE_TOLERANCE);
        // entries are sorted lexicographically, so candidates share a narrow band of first coordinates
        let start = self.entries.partition_point(|a| a.frequency[0] < c0 - tol);
        self.entries[start..]
            .iter()
            .take_while(|a| a.frequency[0] <= c0 + tol)
            .find(|a| max_distance(&a.frequency, chi) <= tol)
            .map(|a| a.coefficient)
    }

    /// The `n` entries of largest modulus; ties broken by frequency order.
    pub fn largest(&self, n: usize) -> Vec<&FrequencyAtom> {
        let mut refs: Vec<&FrequencyAtom> = self.entries.iter().collect();
        refs.sort_by(|a, b| {
            b.coefficient
                .norm()
                .partial_cmp(&a.coefficient.norm())
                .unwrap_or(Ordering::Equal)
                .then_with(|| lex_cmp(&a.frequency, &b.frequency))
        });
        refs.truncate(n);
        refs
    }

    /// The series as a comb on frequency space.
    pub fn to_comb(&self) -> Result<DiracComb> {
        let points = self.entries.iter().map(|e| e.frequency.clone()).collect();
        let weights = self.entries.iter().map(|e| e.coefficient).collect();
        Ok(DiracComb::new(points, weights, self.freq_region.clone())?.with_provenance(Provenance {
            kind: "fourier_bohr_series".into(),
            ..Provenance::raw()
        }))
    }

    /// `χ ↦ -χ`.
    pub fn reflected(&self) -> Self {
        let dim = self.dim;
        let lower: Vec<f64> = self.freq_region.upper().iter().map(|u| -u).collect();
        let upper: Vec<f64> = self
            .freq_region
            .lower()
            .iter()
            .map(|l| (-l).next_up())
            .collect();
        let region = AxisBox::new(lower, upper).unwrap_or_else(|_| AxisBox::centered(dim, 0.0));
        let entries = self
            .entries
            .iter()
            .map(|e| FrequencyAtom {
                frequency: e.frequency.iter().map(|x| -x).collect(),
                coefficient: e.coefficient,
            })
            .collect();
        let mut out = Self::new(entries, self.generation.clone(), region).expect("reflection preserves validity");
        out.dropped_count = self.dropped_count;
        out.dropped_mass = self.dropped_mass;
        out
    }
}

pub(crate) fn max_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
