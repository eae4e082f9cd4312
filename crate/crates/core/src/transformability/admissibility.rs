use crate::error::Result;
use crate::measures::comb::DiracComb;
use crate::measures::mean::validate_scales;
use crate::measures::source::CombSource;
use crate::measures::window_sums::{is_formal_sum_measure, translation_bounded};
use crate::profile::Profile;
use crate::test_function::TestFunction;
use crate::transformability::identities::{pairing_identity_check, PairingResidual};
use crate::verdict::{Status, Verdict};

/// Test functions for the spot checks, all supported in `[-1/2, 1/2]^d`.
fn spot_functions(dim: usize) -> Result<Vec<(&'static str, TestFunction)>> {
    Ok(vec![
        ("tent", TestFunction::new(Profile::Tent, dim, 0.5)?),
        ("bump", TestFunction::new(Profile::PolynomialBump, dim, 0.5)?),
        ("gaussian", TestFunction::new(Profile::TruncatedGaussian { sigma: 0.2 }, dim, 0.5)?),
    ])
}

/// Weak admissibility on `ℝ^d` through its equivalence with translation
/// boundedness.
///
/// Corroborating evidence: partial sums of `∫|f̂|² d|μ|` over the truncations,
/// for three test functions.
pub fn weak_admissibility_rd<S: CombSource + ?Sized>(
    source: &S,
    window_edge: f64,
    scales: &[f64],
) -> Result<Verdict> {
    let mut v = translation_bounded(source, window_edge, scales)?
        .with_note("weak admissibility via translation boundedness");
    if scales.len() < 3 {
        return Ok(v);
    }
    let combs = scales.iter().map(|&s| source.comb_at(s)).collect::<Result<Vec<_>>>()?;
    for (name, f) in spot_functions(source.dim())? {
        let sums = combs
            .iter()
            .map(|comb| {
                comb.iter().try_fold(0.0, |acc, (x, w)| {
                    Ok::<_, crate::error::Error>(acc + w.norm() * f.hat(x)?.norm_sqr())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        v = v.with_evidence(format!("spot_check_{name}"), sums);
    }
    Ok(v)
}

/// Outcome of [`is_fourier_transform_of_measure`].
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureTransformOutcome {
    pub verdict: Verdict,
    /// `ν = (series)†` at the largest scale, when the verdict holds.
    pub preimage: Option<DiracComb>,
    pub pairings: Vec<PairingResidual>,
}

/// The series is a measure and `μ` is weakly admissible, so `ν = F(μ)†`
/// exists with `ν̂ = μ`; the pairing identity is then verified for three
/// test functions.
pub fn is_fourier_transform_of_measure<S, M>(
    series: &S,
    mu: &M,
    scales: &[f64],
) -> Result<MeasureTransformOutcome>
where
    S: CombSource + ?Sized,
    M: CombSource + ?Sized,
{
    validate_scales(scales, 1)?;
    let as_measure = is_formal_sum_measure(series, 1.0_f64.min(scales[0]), scales)?;
    let admissible = weak_admissibility_rd(mu, 1.0_f64.min(scales[0]), scales)?;
    let status = match (as_measure.status, admissible.status) {
        (Status::Holds, Status::Holds) => Status::Holds,
        (Status::Fails, _) | (_, Status::Fails) => Status::Fails,
        _ => Status::Inconclusive,
    };
    let mut verdict = Verdict::new(status, 0.0)
        .with_evidence(
            "series_is_measure",
            vec![status_code(as_measure.status)],
        )
        .with_evidence("mu_weakly_admissible", vec![status_code(admissible.status)]);
    for (label, values) in as_measure.evidence.iter().map(|e| (format!("series_{}", e.label), e.values.clone())) {
        verdict = verdict.with_evidence(label, values);
    }
    if status != Status::Holds {
        return Ok(MeasureTransformOutcome {
            verdict,
            preimage: None,
            pairings: Vec::new(),
        });
    }
    let s_max = *scales.last().expect("validated");
    let hat = series.comb_at(s_max)?;
    let preimage = hat.reflected();
    let mut pairings = Vec::new();
    for (_, f) in spot_functions(mu.dim())? {
        pairings.push(pairing_identity_check(mu, &hat, &f, s_max, hat.len())?);
    }
    let worst = pairings.iter().fold(0.0f64, |m, p| m.max(p.residual - p.tolerance()));
    verdict = verdict.with_evidence(
        "pairing_residuals",
        pairings.iter().map(|p| p.residual).collect(),
    );
    if worst > 0.0 {
        verdict.status = Status::Inconclusive;
        verdict = verdict.with_note("pairing identity not confirmed at this truncation");
    }
    Ok(MeasureTransformOutcome {
        verdict,
        preimage: Some(preimage),
        pairings,
    })
}

fn status_code(s: Status) -> f64 {
    match s {
        Status::Holds => 1.0,
        Status::Fails => -1.0,
        Status::Inconclusive => 0.0,
    }
}
