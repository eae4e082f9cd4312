use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Axis-aligned box `[lower, upper)` in ℝ^n.
///
/// Membership is half-open by default so that translated boxes tile space
/// without double counting. [`AxisBox::contains_closed`] is used for window
/// supports, which are closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl AxisBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(invalid(format!(
                "box bounds have different dimensions ({} vs {})",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !l.is_finite() || !u.is_finite() {
                return Err(invalid(format!("box bound {i} is not finite")));
            }
            if l > u {
                return Err(invalid(format!("box lower[{i}] = {l} exceeds upper[{i}] = {u}")));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[-s, s)^dim`.
    pub fn centered(dim: usize, half_width: f64) -> Self {
        Self {
            lower: vec![-half_width; dim],
            upper: vec![half_width; dim],
        }
    }

    /// The same interval `[a, b)` along every axis.
    pub fn cube(dim: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a; dim], vec![b; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .product()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(l, u)| l >= u)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v < *u)
    }

    pub fn contains_closed(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    /// True when `other` lies inside `self` (closed comparison on both ends).
    pub fn covers(&self, other: &AxisBox) -> bool {
        self.dim() == other.dim()
            && (0..self.dim())
                .all(|i| self.lower[i] <= other.lower[i] && other.upper[i] <= self.upper[i])
    }

    pub fn intersect(&self, other: &AxisBox) -> Option<AxisBox> {
        if self.dim() != other.dim() {
            return None;
        }
        let lower: Vec<f64> = (0..self.dim())
            .map(|i| self.lower[i].max(other.lower[i]))
            .collect();
        let upper: Vec<f64> = (0..self.dim())
            .map(|i| self.upper[i].min(other.upper[i]))
            .collect();
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return None;
        }
        Some(AxisBox { lower, upper })
    }

    /// Largest `s` with `[-s, s]^dim` inside the box (negative if the origin is outside).
    pub fn inner_half_width(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| (-l).min(*u))
            .fold(f64::INFINITY, f64::min)
    }
}
