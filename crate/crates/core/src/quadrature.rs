//! Numerical engines: semi-infinite imaginary-frequency integration and
//! Matsubara summation with controlled truncation.
//!
//! Integration uses adaptive 7-15 Gauss–Kronrod on a progressively doubled
//! sequence of finite segments; error estimates come from nested-rule
//! differences only, so identical inputs give bit-identical outputs. The
//! kernels of interest all decay like e^{−ξρ/c}, and callers pre-scale with
//! x = ξρ/c so the integrand is O(1) before refinement.
//!
//! The Matsubara sum implements the primed convention
//!
//! (ħ/2π) ∫₀^∞ dξ → k_B T Σ'_{n≥0},   ξ_n = 2πn k_B T / ħ,
//!
//! with the n = 0 term halved. At low temperature the spacing ξ₁ becomes
//! tiny relative to the kernel decay scale, so the sum is closed with an
//! Euler–Maclaurin integral tail instead of brute-force term counts.

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, K_B};
use crate::error::{CoreError, Result};

// 15-point Kronrod abscissae on [-1, 1] (positive half; node 7 is 0).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

// Kronrod weights matching XGK.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// 7-point Gauss weights (for nodes XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Change of variable applied before adaptive refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transform {
    /// Integrate the raw integrand over doubling segments [0,1], [1,2],
    /// [2,4], ... until the tail is negligible.
    None,
    /// Map x = −ln t onto t ∈ (0, 1]: ∫₀^∞ f(x) dx = ∫₀^1 f(−ln t)/t dt.
    /// Suits integrands with at least exponential decay.
    ExpSubstitution,
}

/// Tolerances and caps for semi-infinite integration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Relative tolerance, in (0, 1e-2].
    pub rel_tol: f64,
    /// Results smaller in magnitude than this count as converged zeros.
    pub abs_floor: f64,
    /// Budget of integrand evaluations, >= 64.
    pub max_evals: usize,
    pub transform: Transform,
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_floor: f64, max_evals: usize, transform: Transform) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-2) {
            return Err(CoreError::domain(format!(
                "rel_tol must be in (0, 1e-2], got {rel_tol:e}"
            )));
        }
        if max_evals < 64 {
            return Err(CoreError::domain("max_evals must be >= 64".to_string()));
        }
        Ok(QuadratureSpec {
            rel_tol,
            abs_floor,
            max_evals,
            transform,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_floor: 0.0,
            max_evals: 200_000,
            transform: Transform::None,
        }
    }
}

/// A value with its nested-rule error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evals: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let f_mid = f(mid);
    let mut kronrod = WGK[7] * f_mid;
    let mut gauss = WG[3] * f_mid;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive Gauss–Kronrod on a finite interval.
fn integrate_interval<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
    evals: &mut usize,
    max_evals: usize,
) -> Result<Integral> {
    // (a, b, value, err), worst interval refined first via simple stack;
    // traversal order is fixed so results are bit-reproducible.
    let (v0, e0) = gk15(f, a, b);
    *evals += 15;
    let mut stack = vec![(a, b, v0, e0)];
    let mut done_value = 0.0;
    let mut done_error = 0.0;
    while let Some((lo, hi, v, e)) = stack.pop() {
        let pending: f64 = stack.iter().map(|s| s.2).sum();
        let total_scale = (done_value + pending + v).abs().max(abs_floor);
        if e <= rel_tol * total_scale.max(f64::MIN_POSITIVE) || (hi - lo) < 1e-15 * (b - a) {
            done_value += v;
            done_error += e;
            continue;
        }
        if *evals + 30 > max_evals {
            let best = done_value + pending + v;
            let err = done_error + e + stack.iter().map(|s| s.3).sum::<f64>();
            return Err(CoreError::Convergence {
                best,
                error: err,
                evals: *evals,
            });
        }
        let mid = 0.5 * (lo + hi);
        let (vl, el) = gk15(f, lo, mid);
        let (vr, er) = gk15(f, mid, hi);
        *evals += 30;
        // refine the worse child first (pushed last)
        if el > er {
            stack.push((mid, hi, vr, er));
            stack.push((lo, mid, vl, el));
        } else {
            stack.push((lo, mid, vl, el));
            stack.push((mid, hi, vr, er));
        }
    }
    Ok(Integral {
        value: done_value,
        error_estimate: done_error,
        evals: *evals,
    })
}

/// Integrate f over (0, ∞). The integrand must be continuous, absolutely
/// integrable and decay at least exponentially.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<Integral> {
    match spec.transform {
        Transform::ExpSubstitution => {
            let g = |t: f64| {
                if t <= 0.0 {
                    0.0
                } else {
                    f(-t.ln()) / t
                }
            };
            let mut evals = 0;
            integrate_interval(&g, 0.0, 1.0, spec.rel_tol, spec.abs_floor, &mut evals, spec.max_evals)
        }
        Transform::None => {
            let mut evals = 0;
            let mut total = 0.0;
            let mut err = 0.0;
            let mut a = 0.0;
            let mut b = 1.0;
            let mut negligible_segments = 0;
            for _ in 0..64 {
                let seg = integrate_interval(&f, a, b, spec.rel_tol, spec.abs_floor, &mut evals, spec.max_evals)?;
                total += seg.value;
                err += seg.error_estimate;
                let scale = total.abs().max(spec.abs_floor).max(f64::MIN_POSITIVE);
                if seg.value.abs() < spec.rel_tol * scale {
                    negligible_segments += 1;
                    if negligible_segments >= 2 {
                        return Ok(Integral {
                            value: total,
                            error_estimate: err,
                            evals,
                        });
                    }
                } else {
                    negligible_segments = 0;
                }
                a = b;
                b *= 2.0;
            }
            Err(CoreError::Convergence {
                best: total,
                error: err,
                evals,
            })
        }
    }
}

/// Integrate f over (a, ∞) by shifting the origin.
pub fn integrate_from<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadratureSpec) -> Result<Integral> {
    integrate_semi_infinite(move |u| f(a + u), spec)
}

/// How the truncated Matsubara tail is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailMode {
    /// Plain truncation at n_max.
    None,
    /// Geometric extrapolation from the last two retained terms.
    GeometricExtrapolation,
    /// Euler–Maclaurin closure: the remainder is integrated over ξ with the
    /// semi-infinite engine. Requires a term smooth in ξ; this is the only
    /// mode that stays accurate when the kernel decay spans many more than
    /// n_max spacings (e.g. T → 0 limits).
    Integral,
}

/// Discrete imaginary-frequency grid ξ_n = 2πn k_B T / ħ.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MatsubaraGrid {
    /// Temperature, K.
    pub temperature: f64,
    /// Truncation index.
    pub n_max: usize,
    pub tail_mode: TailMode,
    /// Post-hoc truncation check: the last retained term must be smaller
    /// than rel_tol times the partial sum (or a tail closure is applied).
    pub rel_tol: f64,
}

impl MatsubaraGrid {
    pub fn new(temperature: f64, n_max: usize, tail_mode: TailMode, rel_tol: f64) -> Result<Self> {
        if temperature <= 0.0 {
            return Err(CoreError::domain("temperature must be > 0".to_string()));
        }
        if n_max == 0 {
            return Err(CoreError::domain("n_max must be >= 1".to_string()));
        }
        Ok(MatsubaraGrid {
            temperature,
            n_max,
            tail_mode,
            rel_tol,
        })
    }

    /// Default truncation for kernels decaying as e^{−ξ_n ρ/c}:
    /// n_max = ceil(50 c/(ξ₁ ρ)), capped at 10^6, with an integral tail
    /// closure picking up whatever the cap cuts off.
    pub fn for_separation(temperature: f64, rho: f64, light_speed: f64) -> Result<Self> {
        let xi_1 = 2.0 * std::f64::consts::PI * K_B * temperature / HBAR;
        let n = (50.0 * light_speed / (xi_1 * rho)).ceil();
        let n_max = if n.is_finite() && n >= 1.0 {
            (n as usize).clamp(64, 1_000_000)
        } else {
            1_000_000
        };
        MatsubaraGrid::new(temperature, n_max, TailMode::Integral, 1e-10)
    }

    /// Matsubara spacing ξ₁ = 2π k_B T / ħ, rad/s.
    pub fn xi_1(&self) -> f64 {
        2.0 * std::f64::consts::PI * K_B * self.temperature / HBAR
    }

    /// ξ_n = n ξ₁.
    pub fn xi_n(&self, n: usize) -> f64 {
        n as f64 * self.xi_1()
    }
}

/// Result of a truncated Matsubara sum.
#[derive(Debug, Clone, Copy)]
pub struct MatsubaraSum {
    /// (1/2) term(0) + Σ_{n≥1} term(n) (+ tail closure).
    pub value: f64,
    /// Terms actually summed (highest n).
    pub n_used: usize,
    /// Tail contribution added beyond n_used.
    pub tail: f64,
    /// Whether the truncation criterion was met before n_max.
    pub converged: bool,
}

/// Primed Matsubara sum of a discrete term: value = term(0, 0)/2 +
/// Σ_{n≥1} term(n, ξ_n).
///
/// Truncates when the last three terms each fall below rel_tol times the
/// partial sum. Non-decaying terms (|term(n_max)| > |term(n_max/2)|) are a
/// divergence error. `TailMode::Integral` is not available here since a
/// discrete term has no smooth extension; see
/// [`matsubara_sum_integral_tail`].
pub fn matsubara_sum<F: Fn(usize, f64) -> f64>(term: F, grid: &MatsubaraGrid) -> Result<MatsubaraSum> {
    if grid.tail_mode == TailMode::Integral {
        return Err(CoreError::Usage(
            "integral tail closure needs a continuous term; use matsubara_sum_integral_tail".to_string(),
        ));
    }
    let xi_1 = grid.xi_1();
    let mut sum = 0.5 * term(0, 0.0);
    let mut below = 0;
    let mut n_used = 0;
    let mut last = f64::NAN;
    let mut prev = f64::NAN;
    let mut term_at_half = f64::NAN;
    let half = (grid.n_max / 2).max(1);
    for n in 1..=grid.n_max {
        let t = term(n, n as f64 * xi_1);
        if n == half {
            term_at_half = t;
        }
        sum += t;
        prev = last;
        last = t;
        n_used = n;
        if t.abs() <= grid.rel_tol * sum.abs().max(f64::MIN_POSITIVE) {
            below += 1;
            if below >= 3 {
                return Ok(MatsubaraSum {
                    value: sum,
                    n_used,
                    tail: 0.0,
                    converged: true,
                });
            }
        } else {
            below = 0;
        }
    }
    if last.abs() > term_at_half.abs() && n_used >= 4 {
        return Err(CoreError::Divergence {
            n_max: n_used,
            n_half: half,
        });
    }
    let tail = match grid.tail_mode {
        TailMode::GeometricExtrapolation => {
            let r = if prev != 0.0 { last / prev } else { 0.0 };
            if r > 0.0 && r < 1.0 {
                last * r / (1.0 - r)
            } else {
                0.0
            }
        }
        _ => 0.0,
    };
    Ok(MatsubaraSum {
        value: sum + tail,
        n_used,
        tail,
        converged: false,
    })
}

/// Primed Matsubara sum of a term that is a smooth function of ξ > 0, with
/// the n = 0 value supplied separately (static responses follow a different
/// formula than the ξ → 0 limit of the dynamic one).
///
/// value = n0_term/2 + Σ_{n=1}^{N} g(ξ_n) + (1/ξ₁) ∫_{(N+1/2)ξ₁}^∞ g(ξ) dξ,
///
/// the midpoint Euler–Maclaurin closure of the remainder.
pub fn matsubara_sum_integral_tail<G: Fn(f64) -> f64>(
    n0_term: f64,
    g: G,
    grid: &MatsubaraGrid,
    spec: &QuadratureSpec,
) -> Result<MatsubaraSum> {
    let xi_1 = grid.xi_1();
    let mut sum = 0.5 * n0_term;
    let mut n_used = 0;
    let mut below = 0;
    for n in 1..=grid.n_max {
        let t = g(n as f64 * xi_1);
        sum += t;
        n_used = n;
        if t.abs() <= grid.rel_tol * sum.abs().max(f64::MIN_POSITIVE) {
            below += 1;
            if below >= 3 {
                break;
            }
        } else {
            below = 0;
        }
    }
    let a = (n_used as f64 + 0.5) * xi_1;
    let tail_spec = QuadratureSpec {
        // the tail only needs to be resolved relative to the full sum
        abs_floor: spec.abs_floor.max(grid.rel_tol * sum.abs()),
        ..*spec
    };
    // (1/xi_1) ∫_a^∞ g dξ, integrated in units of the Matsubara spacing so
    // the segment-doubling engine sees an O(1)-scale variable
    let tail = integrate_semi_infinite(|u| g(a + u * xi_1), &tail_spec)?.value;
    Ok(MatsubaraSum {
        value: sum + tail,
        n_used,
        tail,
        converged: below >= 3,
    })
}
