//! One-dimensional compactly supported profiles on `[-r, r]`.
//!
//! Windows on internal space and test functions on physical space are
//! separable products of a single profile, so everything here is scalar.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadrature::{integrate, integrate_oscillatory, QuadratureOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `1 - |t|/r`.
    Tent,
    /// `(1 - (t/r)^2)^2`.
    PolynomialBump,
    /// Gaussian shifted down to vanish at `±r` and renormalised to peak 1.
    TruncatedGaussian { sigma: f64 },
    /// Characteristic function of `[-r, r]` (discontinuous).
    Indicator,
    /// Piecewise-linear interpolation of equispaced samples on `[-r, r]`.
    SampledTable { values: Vec<f64> },
    /// Autocorrelation `g * g̃` of a tent `g` of radius `r/2`.
    TentAutocorrelation,
}

/// Power-law bound `coef / |k|^power` on the modulus of the transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayBound {
    pub coef: f64,
    pub power: f64,
}

pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `∫_{-1}^{1} (1-u²)² cos(a u) du`.
fn bump_cosine_integral(a: f64) -> f64 {
    if a.abs() < 1.0 {
        // Σ (-1)^n a^{2n}/(2n)! · 16/((2n+1)(2n+3)(2n+5))
        let a2 = a * a;
        let mut term_pow = 1.0;
        let mut fact = 1.0;
        let mut sum = 0.0;
        for n in 0..12 {
            let nn = n as f64;
            if n > 0 {
                fact *= (2.0 * nn - 1.0) * (2.0 * nn);
                term_pow *= -a2;
            }
            sum += term_pow / fact * 16.0 / ((2.0 * nn + 1.0) * (2.0 * nn + 3.0) * (2.0 * nn + 5.0));
        }
        sum
    } else {
        let (s, c) = a.sin_cos();
        16.0 * (3.0 * s - 3.0 * a * c - a * a * s) / a.powi(5)
    }
}

/// `∫_0^Δ (1 - s/Δ) e^{iωs} ds`, the transform of a right half-hat.
fn half_hat(omega: f64, delta: f64) -> Complex64 {
    let x = Complex64::new(0.0, omega * delta);
    if x.norm() < 0.5 {
        // Δ Σ x^n/(n+2)!
        let mut term = Complex64::new(0.5, 0.0);
        let mut sum = term;
        for n in 1..16 {
            term = term * x / (n as f64 + 2.0);
            sum += term;
        }
        sum * delta
    } else {
        (x.exp() - 1.0 - x) / (x * x) * delta
    }
}

/// Faddeeva `w(z)` for `Im z > 0` and `|z|` large, by the Laplace continued
/// fraction (modified Lentz). `None` when it has not converged.
fn faddeeva_far(z: Complex64) -> Option<Complex64> {
    const TINY: f64 = 1e-300;
    let guard = |v: Complex64| if v.norm() < TINY { Complex64::new(TINY, 0.0) } else { v };
    let mut f = guard(z);
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..2000 {
        let a = -0.5 * n as f64;
        d = guard(z + a * d).inv();
        c = guard(z + a / c);
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Some(Complex64::new(0.0, 1.0 / PI.sqrt()) / f);
        }
    }
    None
}

/// Transform of the truncated Gaussian for large `|k|`, from
/// `∫_{-r}^{r} e^{-at²} e^{iωt} dt = √(π/a)[e^{-ω²/4a} - Re(e^{-ar²-iωr} w(iz))]`
/// with `iz = -ω/(2√a) + i√a r`.
fn gaussian_transform_far(r: f64, sigma: f64, k: f64) -> Option<f64> {
    let a = 0.5 / (sigma * sigma);
    let sa = a.sqrt();
    let omega = 2.0 * PI * k.abs();
    let iz = Complex64::new(-omega / (2.0 * sa), sa * r);
    if iz.norm() < 8.0 {
        return None;
    }
    let w = faddeeva_far(iz)?;
    let floor = (-a * r * r).exp();
    let edge = Complex64::from_polar(floor, -omega * r) * w;
    let full = (PI / a).sqrt() * ((-omega * omega / (4.0 * a)).exp() - edge.re);
    Some((full - floor * 2.0 * r * sinc(omega * r)) / (1.0 - floor))
}

fn tent_autocorrelation_shape(u: f64) -> f64 {
    let u = u.abs();
    if u <= 1.0 {
        2.0 / 3.0 - u * u + 0.5 * u * u * u
    } else if u <= 2.0 {
        let v = 2.0 - u;
        v * v * v / 6.0
    } else {
        0.0
    }
}

impl Profile {
    pub fn validate(&self, radius: f64) -> Result<()> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(format!("support radius must be positive, got {radius}")));
        }
        match self {
            Profile::TruncatedGaussian { sigma } if !(*sigma > 0.0 && sigma.is_finite()) => {
                Err(invalid(format!("gaussian sigma must be positive, got {sigma}")))
            }
            Profile::SampledTable { values } if values.len() < 2 => {
                Err(invalid("sampled table needs at least two values"))
            }
            Profile::SampledTable { values } if values.iter().any(|v| !v.is_finite()) => {
                Err(invalid("sampled table contains non-finite values"))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Tent => "tent",
            Profile::PolynomialBump => "polynomial_bump",
            Profile::TruncatedGaussian { .. } => "truncated_gaussian",
            Profile::Indicator => "indicator",
            Profile::SampledTable { .. } => "sampled_table",
            Profile::TentAutocorrelation => "tent_autocorrelation",
        }
    }

    pub fn is_continuous(&self) -> bool {
        match self {
            Profile::Indicator => false,
            Profile::SampledTable { values } => {
                values[0] == 0.0 && values[values.len() - 1] == 0.0
            }
            _ => true,
        }
    }

    /// Even profiles satisfy `p(t) = p(-t)` exactly.
    pub fn is_even(&self) -> bool {
        match self {
            Profile::SampledTable { values } => values.iter().eq(values.iter().rev()),
            _ => true,
        }
    }

    /// Value at offset `t` from the centre. Support is the closed interval `[-r, r]`.
    pub fn value(&self, r: f64, t: f64) -> f64 {
        let a = t.abs();
        if a > r {
            return 0.0;
        }
        match self {
            Profile::Tent => 1.0 - a / r,
            Profile::PolynomialBump => {
                let u = a / r;
                let w = 1.0 - u * u;
                w * w
            }
            Profile::TruncatedGaussian { sigma } => {
                let s2 = 2.0 * sigma * sigma;
                let floor = (-r * r / s2).exp();
                ((-t * t / s2).exp() - floor) / (1.0 - floor)
            }
            Profile::Indicator => 1.0,
            Profile::SampledTable { values } => {
                let n = values.len();
                let delta = 2.0 * r / (n - 1) as f64;
                let pos = (t + r) / delta;
                let j = (pos.floor() as usize).min(n - 2);
                let frac = pos - j as f64;
                values[j] * (1.0 - frac) + values[j + 1] * frac
            }
            Profile::TentAutocorrelation => {
                let half = 0.5 * r;
                half * tent_autocorrelation_shape(a / half)
            }
        }
    }

    /// Points in `[-r, r]` where the profile fails to be smooth, including the ends.
    pub fn breakpoints(&self, r: f64) -> Vec<f64> {
        match self {
            Profile::Tent => vec![-r, 0.0, r],
            Profile::TentAutocorrelation => vec![-r, -0.5 * r, 0.0, 0.5 * r, r],
            Profile::SampledTable { values } => {
                let n = values.len();
                let delta = 2.0 * r / (n - 1) as f64;
                (0..n)
                    .map(|j| if j + 1 == n { r } else { -r + delta * j as f64 })
                    .collect()
            }
            _ => vec![-r, r],
        }
    }

    pub fn sup_norm(&self, r: f64) -> f64 {
        match self {
            Profile::SampledTable { values } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
            Profile::TentAutocorrelation => r / 3.0,
            _ => 1.0,
        }
    }

    /// `∫ |p|`.
    pub fn l1_norm(&self, r: f64) -> f64 {
        match self {
            Profile::Tent => r,
            Profile::PolynomialBump => 16.0 * r / 15.0,
            Profile::Indicator => 2.0 * r,
            // (∫ tent)^2 with tent radius r/2
            Profile::TentAutocorrelation => 0.25 * r * r,
            Profile::TruncatedGaussian { .. } => {
                integrate(|t| self.value(r, t), &self.breakpoints(r), QuadratureOptions::default())
                    .unwrap_or(2.0 * r)
            }
            Profile::SampledTable { values } => {
                // exact for piecewise-linear |.| only when no sign change; bound otherwise
                let n = values.len();
                let delta = 2.0 * r / (n - 1) as f64;
                values
                    .windows(2)
                    .map(|w| {
                        let (a, b) = (w[0], w[1]);
                        if a * b >= 0.0 {
                            0.5 * delta * (a.abs() + b.abs())
                        } else {
                            0.5 * delta * (a * a + b * b) / (a.abs() + b.abs())
                        }
                    })
                    .sum()
            }
        }
    }

    /// Closed-form `∫ p(t) e^{2πikt} dt`, when one is available.
    pub fn transform_closed(&self, r: f64, k: f64) -> Option<Complex64> {
        let real = |v: f64| Some(Complex64::new(v, 0.0));
        match self {
            Profile::Tent => {
                let s = sinc(PI * r * k);
                real(r * s * s)
            }
            Profile::PolynomialBump => real(r * bump_cosine_integral(2.0 * PI * k * r)),
            Profile::Indicator => real(2.0 * r * sinc(2.0 * PI * r * k)),
            Profile::TentAutocorrelation => {
                let half = 0.5 * r;
                let s = sinc(PI * half * k);
                let s2 = s * s;
                real(half * half * s2 * s2)
            }
            Profile::SampledTable { values } => {
                let n = values.len();
                let delta = 2.0 * r / (n - 1) as f64;
                let omega = 2.0 * PI * k;
                let right = half_hat(omega, delta);
                let left = half_hat(-omega, delta);
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, v) in values.iter().enumerate() {
                    if *v == 0.0 {
                        continue;
                    }
                    let tj = -r + delta * j as f64;
                    let mut hat = Complex64::new(0.0, 0.0);
                    if j > 0 {
                        hat += left;
                    }
                    if j + 1 < n {
                        hat += right;
                    }
                    acc += Complex64::from_polar(*v, omega * tj) * hat;
                }
                Some(acc)
            }
            Profile::TruncatedGaussian { sigma } => gaussian_transform_far(r, *sigma, k).map(Complex64::from),
        }
    }

    /// `∫ p(t) e^{2πikt} dt` by adaptive quadrature.
    pub fn transform_quadrature(&self, r: f64, k: f64, opts: QuadratureOptions) -> Result<Complex64> {
        integrate_oscillatory(|t| self.value(r, t), &self.breakpoints(r), k, opts).map(|q| q.value)
    }

    /// Closed form where available, quadrature otherwise.
    pub fn transform(&self, r: f64, k: f64, opts: QuadratureOptions) -> Result<Complex64> {
        match self.transform_closed(r, k) {
            Some(v) => Ok(v),
            None => self.transform_quadrature(r, k, opts),
        }
    }

    /// Power-law envelopes valid for all `k ≠ 0`; `|p̌(k)| ≤ min(‖p‖₁, min_j coef_j/|k|^power_j)`.
    pub fn decay_bounds(&self, r: f64) -> Vec<DecayBound> {
        let pi2 = PI * PI;
        match self {
            // |p̌| ≤ V(p')/(4π²k²)
            Profile::Tent => vec![DecayBound {
                coef: 1.0 / (pi2 * r),
                power: 2.0,
            }],
            Profile::PolynomialBump => {
                let v1 = 32.0 / (3.0 * 3f64.sqrt() * r);
                let v2 = 40.0 / (r * r);
                vec![
                    DecayBound {
                        coef: v1 / (4.0 * pi2),
                        power: 2.0,
                    },
                    DecayBound {
                        coef: v2 / (8.0 * pi2 * PI),
                        power: 3.0,
                    },
                ]
            }
            Profile::TruncatedGaussian { sigma } => {
                let s2 = sigma * sigma;
                let floor = (-r * r / (2.0 * s2)).exp();
                let max_slope = if r >= *sigma {
                    (-0.5f64).exp() / sigma
                } else {
                    r / s2 * floor
                } / (1.0 - floor);
                vec![DecayBound {
                    coef: 4.0 * max_slope / (4.0 * pi2),
                    power: 2.0,
                }]
            }
            Profile::Indicator => vec![DecayBound {
                coef: 1.0 / PI,
                power: 1.0,
            }],
            Profile::TentAutocorrelation => {
                let half = 0.5 * r;
                vec![DecayBound {
                    coef: 1.0 / (pi2 * pi2 * half * half),
                    power: 4.0,
                }]
            }
            Profile::SampledTable { values } => {
                let n = values.len();
                let delta = 2.0 * r / (n - 1) as f64;
                let mut slopes = vec![0.0];
                slopes.extend(values.windows(2).map(|w| (w[1] - w[0]) / delta));
                slopes.push(0.0);
                if self.is_continuous() {
                    let variation: f64 = slopes.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
                    vec![DecayBound {
                        coef: variation / (4.0 * pi2),
                        power: 2.0,
                    }]
                } else {
                    let tv: f64 = values[0].abs()
                        + values[n - 1].abs()
                        + values.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
                    vec![DecayBound {
                        coef: tv / (2.0 * PI),
                        power: 1.0,
                    }]
                }
            }
        }
    }

    /// Upper bound on `|p̌(k)|`.
    pub fn envelope(&self, r: f64, k: f64) -> f64 {
        let a = k.abs();
        self.decay_bounds(r)
            .iter()
            .map(|b| b.coef / a.powf(b.power))
            .fold(self.l1_norm(r), f64::min)
    }

    /// Radius beyond which the envelope stays below `threshold`.
    pub fn decay_radius(&self, r: f64, threshold: f64) -> f64 {
        if threshold <= 0.0 {
            return f64::INFINITY;
        }
        if self.l1_norm(r) < threshold {
            return 0.0;
        }
        self.decay_bounds(r)
            .iter()
            .map(|b| (b.coef / threshold).powf(1.0 / b.power))
            .fold(f64::INFINITY, f64::min)
    }

    /// Autocorrelation `(p * p̃)(x) = ∫ p(t) p(t - x) dt`.
    pub fn autocorrelation(&self, r: f64, x: f64, opts: QuadratureOptions) -> Result<f64> {
        if x.abs() >= 2.0 * r {
            return Ok(0.0);
        }
        if let Profile::Tent = self {
            return Ok(r * tent_autocorrelation_shape(x / r));
        }
        let lo = (-r).max(x - r);
        let hi = r.min(x + r);
        let mut pts: Vec<f64> = self
            .breakpoints(r)
            .into_iter()
            .chain(self.breakpoints(r).into_iter().map(|b| b + x))
            .filter(|b| *b >= lo && *b <= hi)
            .collect();
        pts.push(lo);
        pts.push(hi);
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup();
        integrate(|t| self.value(r, t) * self.value(r, t - x), &pts, opts)
    }
}
