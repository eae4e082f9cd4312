//! Browser front end for `bragg`. Every export takes the scheme and window as
//! text, the same forms the CLI accepts, and hands back SVG or JSON.

use bragg::fourier::{fourier_bohr_closed_with, ClosedOptions};
use bragg::measures::ModelSetComb;
use bragg::{io, sap_transformable, AxisBox, CutProjectScheme, SapOptions, WindowFunction};
use wasm_bindgen::prelude::*;

const VERDICT_SCALES: [f64; 3] = [250.0, 500.0, 1000.0];

fn scheme_from(text: &str) -> Result<CutProjectScheme, String> {
    let text = text.trim();
    if text.starts_with('{') {
        io::parse_scheme(text).map_err(|e| e.to_string())
    } else {
        io::builtin_scheme(text).ok_or_else(|| format!("unknown scheme {text:?}"))
    }
}

fn inputs(scheme: &str, window: &str) -> Result<(CutProjectScheme, WindowFunction), String> {
    let scheme = scheme_from(scheme)?;
    let window = io::parse_window_spec(window)
        .and_then(|w| w.to_window(scheme.internal_dim()))
        .map_err(|e| e.to_string())?;
    Ok((scheme, window))
}

fn one_dimensional(scheme: &CutProjectScheme) -> Result<(), String> {
    match scheme.physical_dim() {
        1 => Ok(()),
        d => Err(format!("plots need a 1-dimensional physical space, got {d}")),
    }
}

/// Stem chart of the weighted comb on `[lo, hi)`.
pub fn comb_svg(scheme: &str, window: &str, lo: f64, hi: f64) -> Result<String, String> {
    let (scheme, window) = inputs(scheme, window)?;
    one_dimensional(&scheme)?;
    let bounds = AxisBox::new(vec![lo], vec![hi]).map_err(|e| e.to_string())?;
    let comb = ModelSetComb::new(scheme, window)
        .and_then(|s| s.comb_in(&bounds))
        .map_err(|e| e.to_string())?;
    let stems: Vec<(f64, f64)> = comb.iter().map(|(x, w)| (x[0], w.re)).collect();
    Ok(bragg::svg::stem_chart(&stems, &format!("{} atoms on [{lo}, {hi})", comb.len())))
}

/// Stem chart of `|c_χ|` for every closed-form coefficient with `|χ| <= fmax`.
pub fn spectrum_svg(scheme: &str, window: &str, fmax: f64) -> Result<String, String> {
    let (scheme, window) = inputs(scheme, window)?;
    one_dimensional(&scheme)?;
    let series = fourier_bohr_closed_with(&scheme, &window, &AxisBox::centered(1, fmax), &ClosedOptions::default())
        .map_err(|e| e.to_string())?;
    let stems: Vec<(f64, f64)> = series
        .entries()
        .iter()
        .map(|a| (a.frequency[0], a.coefficient.norm()))
        .collect();
    Ok(bragg::svg::stem_chart(&stems, &format!("{} coefficients", series.len())))
}

/// Full transformability report as JSON. Discontinuous windows run in diagnostic mode.
pub fn verdict_report(scheme: &str, window: &str, fmax: f64) -> Result<String, String> {
    let (scheme, window) = inputs(scheme, window)?;
    let region = AxisBox::centered(scheme.physical_dim(), fmax);
    let options = SapOptions {
        diagnostic: !window.is_continuous(),
        ..SapOptions::default()
    };
    let report = sap_transformable(&scheme, &window, &region, &VERDICT_SCALES, &options).map_err(|e| e.to_string())?;
    io::report_to_json(&report).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = combSvg)]
pub fn comb_svg_js(scheme: &str, window: &str, lo: f64, hi: f64) -> Result<String, JsError> {
    js(comb_svg(scheme, window, lo, hi))
}

#[wasm_bindgen(js_name = spectrumSvg)]
pub fn spectrum_svg_js(scheme: &str, window: &str, fmax: f64) -> Result<String, JsError> {
    js(spectrum_svg(scheme, window, fmax))
}

#[wasm_bindgen(js_name = verdictReport)]
pub fn verdict_report_js(scheme: &str, window: &str, fmax: f64) -> Result<String, JsError> {
    js(verdict_report(scheme, window, fmax))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_comb_has_one_stem_per_integer() {
        let svg = comb_svg("integers", "tent:1", 0.0, 10.0).unwrap();
        assert!(svg.contains("10 atoms"));
    }

    #[test]
    fn spectrum_rejects_planar_schemes() {
        assert!(spectrum_svg("integers:2", "tent:1", 2.0).is_err());
        assert!(spectrum_svg("fibonacci", "tent:1", 2.0).unwrap().starts_with("<svg"));
    }

    #[test]
    fn bad_inputs_come_back_as_messages() {
        assert!(comb_svg("penrose", "tent:1", 0.0, 1.0).unwrap_err().contains("penrose"));
        assert!(comb_svg("fibonacci", "hexagon:1", 0.0, 1.0).is_err());
        assert!(comb_svg("fibonacci", "tent:1", 1.0, 0.0).is_err());
    }

    #[test]
    fn fibonacci_tent_report_holds() {
        let json = verdict_report("fibonacci", "tent:1", 2.0).unwrap();
        let report = io::report_from_json(&json).unwrap();
        assert_eq!(report.overall.status, bragg::Status::Holds);
    }
}
