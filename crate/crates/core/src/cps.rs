//! Cut-and-project schemes `(ℝ^d, ℝ^m, L)` and lattice-point enumeration.

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::geometry::AxisBox;
use crate::window::WindowFunction;

/// Default cap on integer cells visited by [`CutProjectScheme::enumerate`].
pub const DEFAULT_CELL_BUDGET: u64 = 200_000_000;

/// Enumeration also refuses boxes expected to hold more than
/// `cell_budget / POINTS_BUDGET_DIVISOR` points.
pub const POINTS_BUDGET_DIVISOR: u64 = 40;

fn internal_box_volume(b: &AxisBox) -> f64 {
    b.lower()
        .iter()
        .zip(b.upper())
        .map(|(l, u)| (u - l).max(0.0))
        .product()
}

/// A lattice `L = B·ℤ^{d+m}` in `ℝ^d × ℝ^m`.
///
/// Columns of `basis` generate the lattice; the first `d` rows are the
/// physical coordinates and the remaining `m` rows the internal (star)
/// coordinates.
#[derive(Debug, Clone)]
pub struct CutProjectScheme {
    d: usize,
    m: usize,
    basis: DMatrix<f64>,
    inverse: DMatrix<f64>,
    density: f64,
    label: Option<String>,
    assumptions: Vec<String>,
}

/// A lattice point split into its physical part `x` and internal part `x⋆`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint {
    pub index: Vec<i64>,
    pub physical: Vec<f64>,
    pub internal: Vec<f64>,
}

impl CutProjectScheme {
    /// Builds a scheme from a row-major `(d+m)×(d+m)` basis matrix.
    pub fn new(d: usize, m: usize, basis_row_major: &[f64]) -> Result<Self> {
        if d == 0 {
            return Err(invalid("physical dimension must be positive"));
        }
        let n = d + m;
        if basis_row_major.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: basis_row_major.len(),
            });
        }
        if basis_row_major.iter().any(|v| !v.is_finite()) {
            return Err(invalid("basis contains non-finite entries"));
        }
        Self::from_matrix(d, m, DMatrix::from_row_slice(n, n, basis_row_major))
    }

    pub fn from_matrix(d: usize, m: usize, basis: DMatrix<f64>) -> Result<Self> {
        let n = d + m;
        if basis.nrows() != n || basis.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: basis.nrows(),
            });
        }
        let det = basis.determinant();
        let max_col = basis
            .column_iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
        let threshold = 1e-12 * max_col.powi(n as i32);
        if !(det.abs() >= threshold) || det == 0.0 {
            return Err(Error::SingularBasis {
                det: det.abs(),
                threshold,
            });
        }
        let inverse = basis.clone().try_inverse().ok_or(Error::SingularBasis {
            det: det.abs(),
            threshold,
        })?;
        Ok(Self {
            d,
            m,
            basis,
            inverse,
            density: 1.0 / det.abs(),
            label: None,
            assumptions: Vec::new(),
        })
    }

    /// The Fibonacci scheme: generators `(1, 1)` and `(τ, 1-τ)`.
    pub fn fibonacci() -> Self {
        let tau = 0.5 * (1.0 + 5f64.sqrt());
        Self::new(1, 1, &[1.0, tau, 1.0, 1.0 - tau])
            .expect("fibonacci basis is invertible")
            .with_label("fibonacci")
    }

    /// `ℤ^d` with trivial internal space.
    pub fn integer_lattice(d: usize) -> Self {
        Self::from_matrix(d, 0, DMatrix::identity(d, d))
            .expect("identity is invertible")
            .with_label("integer_lattice")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_assumptions(mut self, assumptions: Vec<String>) -> Self {
        self.assumptions = assumptions;
        self
    }

    pub fn physical_dim(&self) -> usize {
        self.d
    }

    pub fn internal_dim(&self) -> usize {
        self.m
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn assumptions(&self) -> &[String] {
        &self.assumptions
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_row_major(&self) -> Vec<f64> {
        let n = self.d + self.m;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.basis[(i, j)])
            .collect()
    }

    /// `dens(L) = 1/|det B|`.
    pub fn density(&self) -> f64 {
        self.density
    }

    /// Same scheme with every basis vector multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let mut s = Self::from_matrix(self.d, self.m, &self.basis * c)?;
        s.label = self.label.clone();
        s.assumptions = self.assumptions.clone();
        Ok(s)
    }

    /// The dual scheme with lattice `L⁰ = B^{-T}·ℤ^{d+m}`.
    pub fn dual(&self) -> Result<Self> {
        let mut s = Self::from_matrix(self.d, self.m, self.inverse.transpose())?;
        s.label = self.label.as_ref().map(|l| format!("{l}_dual"));
        s.assumptions = self.assumptions.clone();
        Ok(s)
    }

    pub fn point(&self, index: &[i64]) -> LatticePoint {
        let n = self.d + self.m;
        let mut y = vec![0.0; n];
        for (r, yr) in y.iter_mut().enumerate() {
            *yr = index
                .iter()
                .enumerate()
                .map(|(c, &k)| self.basis[(r, c)] * k as f64)
                .sum();
        }
        let internal = y.split_off(self.d);
        LatticePoint {
            index: index.to_vec(),
            physical: y,
            internal,
        }
    }

    /// Lattice points with physical part in `physical_box` (half-open) and
    /// internal part in the closed `internal_box`, in lexicographic order of
    /// their integer coordinates.
    pub fn enumerate(
        &self,
        physical_box: &AxisBox,
        internal_box: &AxisBox,
        cell_budget: u64,
    ) -> Result<Vec<LatticePoint>> {
        let n = self.d + self.m;
        if physical_box.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: physical_box.dim(),
            });
        }
        if internal_box.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: internal_box.dim(),
            });
        }
        if physical_box.is_empty() {
            return Ok(Vec::new());
        }
        let lo: Vec<f64> = physical_box
            .lower()
            .iter()
            .chain(internal_box.lower())
            .copied()
            .collect();
        let hi: Vec<f64> = physical_box
            .upper()
            .iter()
            .chain(internal_box.upper())
            .copied()
            .collect();

        // bounding box of B^{-1}·(box) by interval arithmetic on inverse rows
        let mut ranges = Vec::with_capacity(n);
        for i in 0..n {
            let (mut a, mut b) = (0.0, 0.0);
            for j in 0..n {
                let c = self.inverse[(i, j)];
                let (p, q) = (c * lo[j], c * hi[j]);
                a += p.min(q);
                b += p.max(q);
            }
            let first = (a.floor() as i64) - 1;
            let last = (b.ceil() as i64) + 1;
            ranges.push((first, last));
        }
        let outer_cells: u128 = ranges[..n - 1]
            .iter()
            .map(|(a, b)| (b - a + 1) as u128)
            .product();
        if outer_cells > cell_budget as u128 {
            return Err(Error::EnumerationBudgetExceeded {
                cells: outer_cells,
                budget: cell_budget,
            });
        }

        // the output itself must fit in memory
        let expected_points = self.density * physical_box.volume() * internal_box_volume(internal_box);
        let point_budget = cell_budget / POINTS_BUDGET_DIVISOR;
        if expected_points > point_budget as f64 {
            return Err(Error::EnumerationBudgetExceeded {
                cells: expected_points as u128,
                budget: point_budget,
            });
        }

        let first_axis: Vec<i64> = (ranges[0].0..=ranges[0].1).collect();
        let chunks = crate::par::map(&first_axis, |&n0| {
            self.scan_slice(n0, &ranges, &lo, &hi, physical_box, internal_box)
        });
        Ok(chunks.into_iter().flatten().collect())
    }

    /// All points whose first integer coordinate is `n0`. The last coordinate
    /// is solved exactly from the row constraints rather than scanned.
    fn scan_slice(
        &self,
        n0: i64,
        ranges: &[(i64, i64)],
        lo: &[f64],
        hi: &[f64],
        physical_box: &AxisBox,
        internal_box: &AxisBox,
    ) -> Vec<LatticePoint> {
        let n = self.d + self.m;
        let mut out = Vec::new();
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        idx[0] = n0;
        if n == 1 {
            self.push_if_inside(&[n0], physical_box, internal_box, &mut out);
            return out;
        }
        let last = n - 1;
        loop {
            // feasible interval for the last coordinate
            let (mut a, mut b) = (ranges[last].0 as f64, ranges[last].1 as f64);
            let mut feasible = true;
            for r in 0..n {
                let partial: f64 = (0..last).map(|c| self.basis[(r, c)] * idx[c] as f64).sum();
                let coef = self.basis[(r, last)];
                if coef.abs() < 1e-300 {
                    if partial < lo[r] - 1e-9 * (1.0 + lo[r].abs())
                        || partial > hi[r] + 1e-9 * (1.0 + hi[r].abs())
                    {
                        feasible = false;
                        break;
                    }
                    continue;
                }
                let (p, q) = ((lo[r] - partial) / coef, (hi[r] - partial) / coef);
                a = a.max(p.min(q));
                b = b.min(p.max(q));
            }
            if feasible && a <= b + 2.0 {
                let start = (a.floor() as i64 - 1).max(ranges[last].0);
                let stop = (b.ceil() as i64 + 1).min(ranges[last].1);
                for k in start..=stop {
                    idx[last] = k;
                    self.push_if_inside(&idx, physical_box, internal_box, &mut out);
                }
            }
            // odometer over coordinates 1..last
            let mut c = last - 1;
            loop {
                if c == 0 {
                    return out;
                }
                idx[c] += 1;
                if idx[c] <= ranges[c].1 {
                    break;
                }
                idx[c] = ranges[c].0;
                c -= 1;
            }
        }
    }

    fn push_if_inside(
        &self,
        index: &[i64],
        physical_box: &AxisBox,
        internal_box: &AxisBox,
        out: &mut Vec<LatticePoint>,
    ) {
        let p = self.point(index);
        if physical_box.contains(&p.physical) && internal_box.contains_closed(&p.internal) {
            out.push(p);
        }
    }
}

/// Lattice points `(x, x⋆)` with `x` in the half-open `physical_box` and
/// `x⋆` in the window's closed support box.
pub fn enumerate_points(
    scheme: &CutProjectScheme,
    physical_box: &AxisBox,
    window: &WindowFunction,
) -> Result<Vec<LatticePoint>> {
    if window.dim() != scheme.internal_dim() {
        return Err(Error::DimensionMismatch {
            expected: scheme.internal_dim(),
            got: window.dim(),
        });
    }
    scheme.enumerate(physical_box, &window.support_box(), DEFAULT_CELL_BUDGET)
}
