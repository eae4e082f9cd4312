use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::AxisBox;
use crate::test_function::TestFunction;

/// Coordinates closer than this (on every axis) are merged into one atom.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Where a comb came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// `model_set`, `series`, `raw`, …
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
}

impl Provenance {
    pub fn raw() -> Self {
        Self {
            kind: "raw".into(),
            scheme_label: None,
            window_kind: None,
            density: None,
        }
    }
}

/// Finite Dirac comb `Σ w_x δ_x`: the truncation of a formal sum to `region`.
///
/// Atoms are kept in lexicographic order of their coordinates, which fixes
/// the summation order of every reduction over the comb.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracComb {
    dim: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<Complex64>,
    region: AxisBox,
    provenance: Option<Provenance>,
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl DiracComb {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<Complex64>, region: AxisBox) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: weights.len(),
            });
        }
        let dim = region.dim();
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if !region.contains(p) {
                return Err(Error::PointOutsideRegion { point: p.clone() });
            }
        }
        let mut atoms: Vec<(Vec<f64>, Complex64)> = points.into_iter().zip(weights).collect();
        atoms.sort_by(|a, b| lex_cmp(&a.0, &b.0));
        let mut merged_points: Vec<Vec<f64>> = Vec::with_capacity(atoms.len());
        let mut merged_weights: Vec<Complex64> = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            if let Some(last) = merged_points.last() {
                if last
                    .iter()
                    .zip(&p)
                    .all(|(a, b)| (a - b).abs() <= MERGE_TOLERANCE)
                {
                    *merged_weights.last_mut().unwrap() += w;
                    continue;
                }
            }
            merged_points.push(p);
            merged_weights.push(w);
        }
        Ok(Self {
            dim,
            points: merged_points,
            weights: merged_weights,
            region,
            provenance: None,
        })
    }

    pub fn empty(region: AxisBox) -> Self {
        Self {
            dim: region.dim(),
            points: Vec::new(),
            weights: Vec::new(),
            region,
            provenance: None,
        }
    }

    /// Unit-weight atoms at the given positions on the line.
    pub fn unit_atoms_1d(xs: &[f64], region: AxisBox) -> Result<Self> {
        Self::new(
            xs.iter().map(|x| vec![*x]).collect(),
            vec![Complex64::new(1.0, 0.0); xs.len()],
            region,
        )
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn region(&self) -> &AxisBox {
        &self.region
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], Complex64)> + '_ {
        self.points
            .iter()
            .map(Vec::as_slice)
            .zip(self.weights.iter().copied())
    }

    /// `|μ| = Σ |w_x| δ_x`.
    pub fn variation(&self) -> DiracComb {
        DiracComb {
            weights: self
                .weights
                .iter()
                .map(|w| Complex64::new(w.norm(), 0.0))
                .collect(),
            ..self.clone()
        }
    }

    /// `Σ |w_x|`.
    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|w| w.norm()).sum()
    }

    pub fn scaled(&self, c: Complex64) -> DiracComb {
        DiracComb {
            weights: self.weights.iter().map(|w| c * w).collect(),
            ..self.clone()
        }
    }

    /// `μ†`: atoms reflected through the origin.
    pub fn reflected(&self) -> DiracComb {
        let region = AxisBox::new(
            self.region.upper().iter().map(|u| -u).collect(),
            self.region.lower().iter().map(|l| -l).collect(),
        )
        .expect("reflected bounds stay ordered");
        // the reflected half-open box is (−upper, −lower]; widen by one ulp so
        // every reflected atom is a member
        let region = AxisBox::new(
            region.lower().to_vec(),
            region.upper().iter().map(|u| u.next_up()).collect(),
        )
        .expect("ordered");
        let mut out = DiracComb::new(
            self.points
                .iter()
                .map(|p| p.iter().map(|v| -v).collect())
                .collect(),
            self.weights.clone(),
            region,
        )
        .expect("reflection preserves validity");
        out.provenance = self.provenance.clone();
        out
    }

    /// Sum of two combs over the bounding hull of their regions.
    pub fn superpose(&self, other: &DiracComb) -> Result<DiracComb> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let lower = self
            .region
            .lower()
            .iter()
            .zip(other.region.lower())
            .map(|(a, b)| a.min(*b))
            .collect();
        let upper = self
            .region
            .upper()
            .iter()
            .zip(other.region.upper())
            .map(|(a, b)| a.max(*b))
            .collect();
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().copied());
        let mut out = DiracComb::new(points, weights, AxisBox::new(lower, upper)?)?;
        out.provenance = self.provenance.clone();
        Ok(out)
    }

    /// Atoms inside `bounds` (half-open); the new region is the intersection.
    pub fn restrict(&self, bounds: &AxisBox) -> Result<DiracComb> {
        if bounds.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: bounds.dim(),
            });
        }
        let region = self
            .region
            .intersect(bounds)
            .unwrap_or_else(|| AxisBox::new(bounds.lower().to_vec(), bounds.lower().to_vec()).unwrap());
        let (points, weights): (Vec<Vec<f64>>, Vec<Complex64>) = self
            .iter()
            .filter(|(p, _)| region.contains(p))
            .map(|(p, w)| (p.to_vec(), w))
            .unzip();
        Ok(DiracComb {
            dim: self.dim,
            points,
            weights,
            region,
            provenance: self.provenance.clone(),
        })
    }

    /// Same atoms viewed inside a larger region.
    pub fn with_region(&self, region: AxisBox) -> Result<DiracComb> {
        if !region.covers(&self.region) {
            return Err(Error::RegionTooSmall(
                "new region must contain the old one".into(),
            ));
        }
        Ok(DiracComb {
            region,
            ..self.clone()
        })
    }

    /// `Σ w_x f(x)` for an arbitrary function, in atom order.
    pub fn pair_with<F>(&self, f: F) -> Complex64
    where
        F: Fn(&[f64]) -> Complex64,
    {
        self.iter()
            .fold(Complex64::new(0.0, 0.0), |acc, (p, w)| acc + w * f(p))
    }
}

/// `⟨μ, f⟩ = Σ w_x f(x)`; the support of `f` must lie in the comb region.
pub fn pair_against_test_function(comb: &DiracComb, f: &TestFunction) -> Result<Complex64> {
    if f.dim() != comb.dim() {
        return Err(Error::DimensionMismatch {
            expected: comb.dim(),
            got: f.dim(),
        });
    }
    let support = f.support_box();
    let inside = (0..comb.dim()).all(|i| {
        comb.region().lower()[i] <= support.lower()[i] && support.upper()[i] < comb.region().upper()[i]
    });
    if !inside {
        return Err(Error::SupportExceedsRegion);
    }
    Ok(comb.pair_with(|x| Complex64::new(f.value(x), 0.0)))
}

/// `variation(μ)`.
pub fn variation(comb: &DiracComb) -> DiracComb {
    comb.variation()
}
