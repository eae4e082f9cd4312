use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl Status {
    pub fn is_decisive(self) -> bool {
        self != Status::Inconclusive
    }
}

/// A labelled numeric record backing a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub label: String,
    pub values: Vec<f64>,
}

/// Three-valued outcome of a numeric check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Vec<Evidence>,
    pub tolerance_used: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(status: Status, tolerance_used: f64) -> Self {
        Self {
            status,
            evidence: Vec::new(),
            tolerance_used,
            notes: Vec::new(),
        }
    }

    pub fn inconclusive(reason: impl Into<String>) -> Self {
        Self::new(Status::Inconclusive, 0.0).with_note(reason)
    }

    pub fn with_evidence(mut self, label: impl Into<String>, values: Vec<f64>) -> Self {
        self.evidence.push(Evidence {
            label: label.into(),
            values,
        });
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn evidence(&self, label: &str) -> Option<&[f64]> {
        self.evidence
            .iter()
            .find(|e| e.label == label)
            .map(|e| e.values.as_slice())
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }
}

/// Thresholds for classifying the growth of a partial-sum sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementThresholds {
    /// Every increment ratio at or below this means geometric decay (convergent).
    pub convergent_ratio: f64,
    /// Every increment ratio at or above this means non-decaying increments (divergent).
    pub divergent_ratio: f64,
}

impl Default for IncrementThresholds {
    fn default() -> Self {
        Self {
            convergent_ratio: 0.7,
            divergent_ratio: 0.9,
        }
    }
}

/// Outcome of [`classify_increments`].
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementClassification {
    pub status: Status,
    pub increments: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Classifies partial sums `S_0 ≤ S_1 ≤ …` taken over geometrically growing
/// regions by the ratios of successive increments.
///
/// Increments below `1e-12·max|S|` count as zero: a run of zero increments
/// means the sums have converged.
pub fn classify_increments(sums: &[f64], thresholds: IncrementThresholds) -> IncrementClassification {
    let increments: Vec<f64> = sums.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = sums.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let floor = 1e-12 * scale;
    let cleaned: Vec<f64> = increments
        .iter()
        .map(|i| if i.abs() <= floor { 0.0 } else { *i })
        .collect();
    let ratios: Vec<f64> = cleaned
        .windows(2)
        .map(|w| {
            if w[0] == 0.0 {
                if w[1] == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                w[1] / w[0]
            }
        })
        .collect();
    let status = if ratios.is_empty() {
        Status::Inconclusive
    } else if cleaned.iter().any(|i| *i < 0.0) {
        // partial sums of non-negative terms never decrease
        Status::Inconclusive
    } else if ratios.iter().all(|r| *r <= thresholds.convergent_ratio) {
        Status::Holds
    } else if ratios
        .iter()
        .all(|r| r.is_finite() && *r >= thresholds.divergent_ratio)
    {
        Status::Fails
    } else {
        Status::Inconclusive
    };
    IncrementClassification {
        status,
        increments,
        ratios,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail_holds() {
        // S(R) = 1 - 1/R
        let sums: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0].iter().map(|r| 1.0 - 1.0 / r).collect();
        let c = classify_increments(&sums, IncrementThresholds::default());
        assert_eq!(c.status, Status::Holds);
        assert!(c.ratios.iter().all(|r| (r - 0.5).abs() < 1e-12));
    }

    #[test]
    fn logarithmic_growth_fails() {
        let sums: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0].iter().map(|r: &f64| r.ln()).collect();
        assert_eq!(
            classify_increments(&sums, IncrementThresholds::default()).status,
            Status::Fails
        );
    }

    #[test]
    fn converged_sums_hold_and_short_input_is_inconclusive() {
        assert_eq!(
            classify_increments(&[2.0, 2.0, 2.0], IncrementThresholds::default()).status,
            Status::Holds
        );
        assert_eq!(
            classify_increments(&[1.0, 2.0], IncrementThresholds::default()).status,
            Status::Inconclusive
        );
    }

    #[test]
    fn mixed_pattern_is_inconclusive() {
        let sums = [0.0, 1.0, 1.8, 2.2, 3.0];
        assert_eq!(
            classify_increments(&sums, IncrementThresholds::default()).status,
            Status::Inconclusive
        );
    }
}
