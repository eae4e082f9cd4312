//! Text formats: scheme and window specs, comb and coefficient tables, reports.
//!
//! Everything here maps between strings and library types; writing files
//! (atomically) is left to the caller. Reals are printed as `{:.16e}`, which
//! round-trips every `f64` and never depends on the locale.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cps::CutProjectScheme;
use crate::error::{Error, Result};
use crate::fourier::FourierBohrSeries;
use crate::geometry::AxisBox;
use crate::measures::comb::{DiracComb, Provenance};
use crate::profile::Profile;
use crate::transformability::TransformabilityReport;
use crate::window::WindowFunction;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Locale-independent decimal formatting used in every table.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses a real with a decimal point; rejects commas, blanks and non-finite input.
pub fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    let v: f64 = t.parse().map_err(|_| parse_err(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(format!("not a finite number: {s:?}")));
    }
    Ok(v)
}

/// Comma-separated reals, e.g. `250,500,1000`.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Err(parse_err("empty list"));
    }
    s.split(',').map(parse_real).collect()
}

/// A box from `a,b` (a cube in `dim` dimensions) or `a1,b1,…,ad,bd`.
pub fn parse_box(s: &str, dim: usize) -> Result<AxisBox> {
    let v = parse_list(s)?;
    let (lower, upper): (Vec<f64>, Vec<f64>) = match v.len() {
        2 => (vec![v[0]; dim], vec![v[1]; dim]),
        n if n == 2 * dim => v.chunks(2).map(|p| (p[0], p[1])).unzip(),
        n => {
            return Err(parse_err(format!(
                "box needs 2 or {} numbers, got {n}",
                2 * dim
            )))
        }
    };
    AxisBox::new(lower, upper).map_err(|e| parse_err(e.to_string()))
}

/// On-disk scheme description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeFile {
    pub d: usize,
    pub m: usize,
    /// Row-major `(d+m)²` entries; columns generate the lattice.
    pub basis: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Denseness and injectivity of the projections are assumed, not certified.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
}

impl SchemeFile {
    pub fn from_scheme(s: &CutProjectScheme) -> Self {
        Self {
            d: s.physical_dim(),
            m: s.internal_dim(),
            basis: s.basis_row_major(),
            label: s.label().map(str::to_owned),
            assumptions: s.assumptions().to_vec(),
        }
    }

    pub fn to_scheme(&self) -> Result<CutProjectScheme> {
        let n = self.d + self.m;
        if self.d == 0 {
            return Err(parse_err("physical dimension d must be at least 1"));
        }
        if self.basis.len() != n * n {
            return Err(parse_err(format!(
                "basis needs {} entries for d={}, m={}, got {}",
                n * n,
                self.d,
                self.m,
                self.basis.len()
            )));
        }
        let mut s = CutProjectScheme::new(self.d, self.m, &self.basis)?;
        if let Some(l) = &self.label {
            s = s.with_label(l.clone());
        }
        Ok(s.with_assumptions(self.assumptions.clone()))
    }
}

pub fn parse_scheme(text: &str) -> Result<CutProjectScheme> {
    let file: SchemeFile = serde_json::from_str(text).map_err(|e| parse_err(format!("scheme: {e}")))?;
    file.to_scheme()
}

pub fn scheme_to_json(s: &CutProjectScheme) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SchemeFile::from_scheme(s))? + "\n")
}

/// Built-in schemes addressable by name: `fibonacci`, `integers`, `integers:d`.
pub fn builtin_scheme(name: &str) -> Option<CutProjectScheme> {
    match name.split_once(':') {
        None if name == "fibonacci" => Some(CutProjectScheme::fibonacci()),
        None if name == "integers" => Some(CutProjectScheme::integer_lattice(1)),
        Some(("integers", d)) => d
            .parse::<usize>()
            .ok()
            .filter(|d| (1..=4).contains(d))
            .map(CutProjectScheme::integer_lattice),
        _ => None,
    }
}

/// On-disk window description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub kind: String,
    pub support_radius: f64,
    /// `[sigma]` for `truncated_gaussian`, the samples for `sampled_table`.
    #[serde(default)]
    pub parameters: Vec<f64>,
    #[serde(default = "one")]
    pub scale_re: f64,
    #[serde(default)]
    pub scale_im: f64,
    /// Translation of the window in internal space; zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
}

fn one() -> f64 {
    1.0
}

impl WindowSpec {
    fn profile(&self) -> Result<Profile> {
        let no_params = |p: Profile| {
            if self.parameters.is_empty() {
                Ok(p)
            } else {
                Err(parse_err(format!("window kind {} takes no parameters", self.kind)))
            }
        };
        match self.kind.as_str() {
            "tent" => no_params(Profile::Tent),
            "polynomial_bump" | "bump" => no_params(Profile::PolynomialBump),
            "indicator" => no_params(Profile::Indicator),
            "tent_autocorrelation" | "autocorrelation" => no_params(Profile::TentAutocorrelation),
            "truncated_gaussian" | "gaussian" => match self.parameters.as_slice() {
                [sigma] => Ok(Profile::TruncatedGaussian { sigma: *sigma }),
                _ => Err(parse_err("truncated_gaussian takes exactly one parameter (sigma)")),
            },
            "sampled_table" => Ok(Profile::SampledTable {
                values: self.parameters.clone(),
            }),
            other => Err(parse_err(format!("unknown window kind {other:?}"))),
        }
    }

    /// The window on internal space of dimension `m`.
    pub fn to_window(&self, m: usize) -> Result<WindowFunction> {
        let mut w = WindowFunction::new(self.profile()?, m, self.support_radius)?
            .with_scale(Complex64::new(self.scale_re, self.scale_im));
        if let Some(c) = &self.center {
            w = w.with_center(c.clone())?;
        }
        Ok(w)
    }

    pub fn from_window(w: &WindowFunction) -> Self {
        let parameters = match w.profile() {
            Profile::TruncatedGaussian { sigma } => vec![*sigma],
            Profile::SampledTable { values } => values.clone(),
            _ => Vec::new(),
        };
        Self {
            kind: w.profile().name().to_owned(),
            support_radius: w.support_radius(),
            parameters,
            scale_re: w.scale().re,
            scale_im: w.scale().im,
            center: w.center().iter().any(|c| *c != 0.0).then(|| w.center().to_vec()),
        }
    }
}

/// Parses a window from JSON or from the inline form `kind:radius[:param…]`,
/// e.g. `tent:0.5` or `gaussian:0.5:0.2`.
pub fn parse_window_spec(text: &str) -> Result<WindowSpec> {
    let t = text.trim();
    if t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| parse_err(format!("window: {e}")));
    }
    let mut parts = t.split(':');
    let kind = parts.next().filter(|k| !k.is_empty()).ok_or_else(|| parse_err("empty window spec"))?;
    let radius = match parts.next() {
        Some(r) => parse_real(r)?,
        None => 1.0,
    };
    let parameters = parts.map(parse_real).collect::<Result<Vec<_>>>()?;
    Ok(WindowSpec {
        kind: kind.to_owned(),
        support_radius: radius,
        parameters,
        scale_re: 1.0,
        scale_im: 0.0,
        center: None,
    })
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| parse_err(e.to_string()))
}

fn csv_io(e: csv::Error) -> Error {
    parse_err(e.to_string())
}

/// Header `x_1,…,x_d,w_re,w_im`, one atom per row, lexicographic order.
pub fn comb_to_csv(comb: &DiracComb) -> Result<String> {
    let mut w = csv_writer();
    let mut header: Vec<String> = (1..=comb.dim()).map(|i| format!("x_{i}")).collect();
    header.extend(["w_re".into(), "w_im".into()]);
    w.write_record(&header).map_err(csv_io)?;
    for (x, wt) in comb.iter() {
        let row: Vec<String> = x.iter().copied().chain([wt.re, wt.im]).map(fmt_real).collect();
        w.write_record(&row).map_err(csv_io)?;
    }
    csv_finish(w)
}

/// Reads a comb table; the region must be supplied separately (see [`CombMeta`]).
pub fn comb_from_csv(text: &str, region: AxisBox) -> Result<DiracComb> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_io)?.clone();
    let cols = header.len();
    if cols < 3 || &header[cols - 2] != "w_re" || &header[cols - 1] != "w_im" {
        return Err(parse_err("comb table header must be x_1,…,x_d,w_re,w_im"));
    }
    let d = cols - 2;
    if d != region.dim() {
        return Err(Error::DimensionMismatch {
            expected: region.dim(),
            got: d,
        });
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_io)?;
        let v = rec.iter().map(parse_real).collect::<Result<Vec<_>>>()?;
        points.push(v[..d].to_vec());
        weights.push(Complex64::new(v[d], v[d + 1]));
    }
    DiracComb::new(points, weights, region)
}

/// Sidecar describing a comb table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombMeta {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub atoms: usize,
    /// `dens(L)·vol(W)·vol(region)`, when the comb comes from a scheme.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_atoms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl CombMeta {
    pub fn region(&self) -> Result<AxisBox> {
        AxisBox::new(self.lower.clone(), self.upper.clone())
    }
}

/// One row of a coefficient table.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRow {
    pub frequency: Vec<f64>,
    pub value: Complex64,
    /// `closed`, `averaged`, `oracle`, `binned`, …
    pub source: String,
}

impl CoefficientRow {
    pub fn closed_rows(series: &FourierBohrSeries) -> Vec<Self> {
        series
            .entries()
            .iter()
            .map(|a| Self {
                frequency: a.frequency.clone(),
                value: a.coefficient,
                source: "closed".into(),
            })
            .collect()
    }
}

/// Header `chi_1,…,chi_d,c_re,c_im,source`.
pub fn coefficients_to_csv(dim: usize, rows: &[CoefficientRow]) -> Result<String> {
    let mut w = csv_writer();
    let mut header: Vec<String> = (1..=dim).map(|i| format!("chi_{i}")).collect();
    header.extend(["c_re".into(), "c_im".into(), "source".into()]);
    w.write_record(&header).map_err(csv_io)?;
    for row in rows {
        if row.frequency.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: row.frequency.len(),
            });
        }
        let mut rec: Vec<String> = row
            .frequency
            .iter()
            .copied()
            .chain([row.value.re, row.value.im])
            .map(fmt_real)
            .collect();
        rec.push(row.source.clone());
        w.write_record(&rec).map_err(csv_io)?;
    }
    csv_finish(w)
}

pub fn coefficients_from_csv(text: &str) -> Result<Vec<CoefficientRow>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let cols = r.headers().map_err(csv_io)?.len();
    if cols < 4 {
        return Err(parse_err("coefficient table needs chi_1,…,chi_d,c_re,c_im,source"));
    }
    let d = cols - 3;
    r.records()
        .map(|rec| {
            let rec = rec.map_err(csv_io)?;
            let v = (0..d + 2).map(|i| parse_real(&rec[i])).collect::<Result<Vec<_>>>()?;
            Ok(CoefficientRow {
                frequency: v[..d].to_vec(),
                value: Complex64::new(v[d], v[d + 1]),
                source: rec[d + 2].to_owned(),
            })
        })
        .collect()
}

pub fn report_to_json(report: &TransformabilityReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

pub fn report_from_json(text: &str) -> Result<TransformabilityReport> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("report: {e}")))
}
