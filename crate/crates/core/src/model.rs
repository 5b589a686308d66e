//! Problem constants and the geometry of the detection problem.
//!
//! A Poisson stream is observed at a known rate `mu` until an unobservable
//! disorder time, when the rate switches to `mu - 1` or `mu + 1`.  The
//! disorder time is exponential with hazard `lambda` (plus an atom `pi` at
//! zero), delay costs `c` per unit time, and `m` is the prior mean of the
//! rate change.  Everything downstream works with the sufficient statistic
//! `(φ₀, φ₁)`, a pair of conditional odds ratios living in the nonnegative
//! quadrant:
//!
//!   φ₀ ∝ P{rate decreased, disorder happened | observations} / P{no disorder}
//!   φ₁ ∝ P{rate increased, disorder happened | observations} / P{no disorder}
//!
//! This module validates the constants once and precomputes every quantity
//! the solver, boundary and simulator modules read:
//!
//! - `g_zero = (λ/c)√2`, the running-cost zero level; the triangle
//!   `{φ₀ + φ₁ < g_zero}` is never worth stopping in,
//! - `xi_star`, a threshold with `{φ₀ + φ₁ < ξ*}` provably containing the
//!   continuation region, which bounds the computational domain,
//! - the line `ℓ: (λ+1)x + (λ-1)y + λ√2 = 0` where the drift of `φ₀ + φ₁`
//!   vanishes (only meets the quadrant when `λ < 1`),
//! - `φ_d = λ(1+m)/((1-λ)√2)`, the mean-reversion level of the second
//!   coordinate when `λ < 1`,
//! - the rate regime: `λ ≥ [1 - (1+m)c/2]⁺` is "large" (both coordinates
//!   drift upward between events), anything smaller is "small".

use serde::{Deserialize, Serialize};

pub(crate) const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Raw problem constants. Validated by [`Model::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Disorder hazard rate, `> 0`.
    pub lambda: f64,
    /// Pre-disorder Poisson rate, `> 1`.
    pub mu: f64,
    /// Delay cost per unit time, `> 0`.
    pub c: f64,
    /// Prior mean of the rate change, in `(-1, 1)`.
    pub m: f64,
    /// Prior mass of an immediate disorder, in `[0, 1)`.
    pub pi: f64,
}

/// Violations raised by [`Model::new`] and the model-level operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("LAMBDA_NOT_POSITIVE: lambda must be > 0 (got {0})")]
    LambdaNotPositive(f64),
    #[error("MU_NOT_GT_ONE: mu must be > 1 (got {0})")]
    MuNotGtOne(f64),
    #[error("C_NOT_POSITIVE: c must be > 0 (got {0})")]
    CNotPositive(f64),
    #[error("M_OUT_OF_RANGE: m must lie in (-1, 1) (got {0})")]
    MOutOfRange(f64),
    #[error("PI_OUT_OF_RANGE: pi must lie in [0, 1) (got {0})")]
    PiOutOfRange(f64),
    #[error("LAMBDA_EQ_ONE: the mean level is undefined at lambda = 1")]
    LambdaEqOne,
    #[error("NEGATIVE_COORDINATE: the line does not meet the antidiagonal inside the quadrant (x = {x})")]
    NegativeCoordinate { x: f64 },
    #[error("V_OUT_OF_RANGE: value {v} outside [{lo}, 0]")]
    VOutOfRange { v: f64, lo: f64 },
}

/// Drift regime of the sufficient statistic between events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `λ ≥ [1 - (1+m)c/2]⁺`: both coordinates increase between events.
    LargeLambda,
    /// `0 < λ < 1 - (1+m)c/2`: the second coordinate reverts to `φ_d`.
    SmallLambda,
}

/// A state of the sufficient statistic in the nonnegative quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TildePoint {
    pub phi0: f64,
    pub phi1: f64,
}

impl TildePoint {
    pub fn new(phi0: f64, phi1: f64) -> Self {
        Self { phi0, phi1 }
    }

    pub const ORIGIN: TildePoint = TildePoint { phi0: 0.0, phi1: 0.0 };

    pub fn sum(&self) -> f64 {
        self.phi0 + self.phi1
    }

    pub fn in_quadrant(&self) -> bool {
        self.phi0 >= 0.0 && self.phi1 >= 0.0
    }
}

/// The line `ℓ: (λ+1)x + (λ-1)y + λ√2 = 0` written as `y = slope·x + intercept`.
/// Only meaningful (and only stored) when `λ < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineEll {
    pub slope: f64,
    pub intercept: f64,
}

/// Constants derived once at validation; operations read, never recompute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// Mean-reversion level of the second coordinate; undefined when `λ ≥ 1`.
    pub phi_d: Option<f64>,
    /// `(λ/c)√2`, the zero level of the running cost.
    pub g_zero: f64,
    /// Bound on the stopping support: continuation ⊆ `{φ₀ + φ₁ < ξ*}`.
    pub xi_star: f64,
    /// The zero-drift line of `φ₀ + φ₁`; `None` when `λ ≥ 1`.
    pub line: Option<LineEll>,
    pub regime: Regime,
}

/// Validated parameters plus eagerly derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model {
    params: ModelParams,
    derived: DerivedConstants,
}

fn classify_regime(p: &ModelParams) -> Regime {
    let threshold = (1.0 - (1.0 + p.m) * p.c / 2.0).max(0.0);
    if p.lambda >= threshold {
        Regime::LargeLambda
    } else {
        Regime::SmallLambda
    }
}

fn mean_level(p: &ModelParams) -> Result<f64, ModelError> {
    if p.lambda == 1.0 {
        return Err(ModelError::LambdaEqOne);
    }
    Ok(p.lambda * (1.0 + p.m) / ((1.0 - p.lambda) * SQRT_2))
}

/// Intersection of `ℓ` with the antidiagonal `x + y = K`.
fn antidiagonal_corner_raw(p: &ModelParams, k: f64) -> Result<TildePoint, ModelError> {
    debug_assert!(k > 0.0 && p.lambda < 1.0);
    let x = ((1.0 - p.lambda) * k - p.lambda * SQRT_2) / 2.0;
    if x < 0.0 {
        return Err(ModelError::NegativeCoordinate { x });
    }
    Ok(TildePoint::new(x, k - x))
}

/// Smallest `ξ*` with continuation ⊆ `{φ₀ + φ₁ < ξ*}` available in closed form.
///
/// When `λ ≥ 1`, or when `ℓ` misses the triangle `{x + y < (λ+μ)√2/c}`, the
/// threshold is `(λ+μ)√2/c` itself.  Otherwise the corner where `ℓ` meets
/// that antidiagonal is flowed backward until it hits the y-axis, and `ξ*`
/// is the height of the landing point.
fn compute_xi_star(p: &ModelParams) -> f64 {
    let d1 = (p.lambda + p.mu) * SQRT_2 / p.c;
    if p.lambda >= 1.0 || p.lambda / (1.0 - p.lambda) >= (p.lambda + p.mu) / p.c {
        return d1;
    }
    // ℓ meets the antidiagonal inside the quadrant (the branch condition
    // guarantees a positive x), so the corner exists.
    let corner = antidiagonal_corner_raw(p, d1).expect("corner inside quadrant");
    // Backward time until the x-coordinate reaches zero:
    // x(-t, φ₀) = -a + e^{-(λ+1)t}(φ₀ + a) with a = λ(1-m)/(√2(λ+1)).
    let a = p.lambda * (1.0 - p.m) / (SQRT_2 * (p.lambda + 1.0));
    let t_star = ((corner.phi0 + a) / a).ln() / (p.lambda + 1.0);
    // Height of the backward flow there (λ < 1 branch):
    // y(-t, φ₁) = φ_d + e^{(1-λ)t}(φ₁ - φ_d).
    let phi_d = p.lambda * (1.0 + p.m) / ((1.0 - p.lambda) * SQRT_2);
    phi_d + ((1.0 - p.lambda) * t_star).exp() * (corner.phi1 - phi_d)
}

impl Model {
    /// Validates the raw constants and derives everything else.
    pub fn new(params: ModelParams) -> Result<Self, ModelError> {
        if !(params.lambda > 0.0) {
            return Err(ModelError::LambdaNotPositive(params.lambda));
        }
        if !(params.mu > 1.0) {
            return Err(ModelError::MuNotGtOne(params.mu));
        }
        if !(params.c > 0.0) {
            return Err(ModelError::CNotPositive(params.c));
        }
        if !(params.m > -1.0 && params.m < 1.0) {
            return Err(ModelError::MOutOfRange(params.m));
        }
        if !(params.pi >= 0.0 && params.pi < 1.0) {
            return Err(ModelError::PiOutOfRange(params.pi));
        }
        let line = (params.lambda < 1.0).then(|| LineEll {
            slope: (1.0 + params.lambda) / (1.0 - params.lambda),
            intercept: params.lambda * SQRT_2 / (1.0 - params.lambda),
        });
        let derived = DerivedConstants {
            phi_d: mean_level(&params).ok(),
            g_zero: params.lambda / params.c * SQRT_2,
            xi_star: compute_xi_star(&params),
            line,
            regime: classify_regime(&params),
        };
        Ok(Self { params, derived })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    pub fn mu(&self) -> f64 {
        self.params.mu
    }

    pub fn c(&self) -> f64 {
        self.params.c
    }

    pub fn m(&self) -> f64 {
        self.params.m
    }

    pub fn pi(&self) -> f64 {
        self.params.pi
    }

    pub fn regime(&self) -> Regime {
        self.derived.regime
    }

    pub fn g_zero(&self) -> f64 {
        self.derived.g_zero
    }

    pub fn xi_star(&self) -> f64 {
        self.derived.xi_star
    }

    pub fn line(&self) -> Option<LineEll> {
        self.derived.line
    }

    /// Lower bound of the value function, `-√2/c`.
    pub fn value_floor(&self) -> f64 {
        -SQRT_2 / self.params.c
    }

    /// Mean-reversion level `φ_d = λ(1+m)/((1-λ)√2)`; errors at the `λ = 1` pole.
    pub fn phi_d(&self) -> Result<f64, ModelError> {
        self.derived.phi_d.ok_or(ModelError::LambdaEqOne)
    }

    /// Running cost `g(φ₀, φ₁) = φ₀ + φ₁ - (λ/c)√2`.
    pub fn running_cost(&self, point: TildePoint) -> f64 {
        point.sum() - self.derived.g_zero
    }

    /// Intersection of `ℓ` with `x + y = K`; requires `λ < 1` and `K > 0`.
    pub fn antidiagonal_corner(&self, k: f64) -> Result<TildePoint, ModelError> {
        debug_assert!(self.params.lambda < 1.0, "line ℓ only exists for λ < 1");
        antidiagonal_corner_raw(&self.params, k)
    }

    /// Initial statistic `((1-m)π/(√2(1-π)), (1+m)π/(√2(1-π)))`.
    pub fn initial_tilde(&self) -> TildePoint {
        let odds = self.params.pi / (1.0 - self.params.pi);
        TildePoint::new(
            (1.0 - self.params.m) * odds / SQRT_2,
            (1.0 + self.params.m) * odds / SQRT_2,
        )
    }

    /// Minimum Bayes risk `U(π) = 1 - π + c(1-π)/√2 · v` for the value `v`
    /// of the stopping problem at the initial statistic.
    pub fn min_bayes_risk(&self, v_at_initial: f64) -> Result<f64, ModelError> {
        let lo = self.value_floor();
        let slack = 1e-9;
        if !(v_at_initial >= lo - slack && v_at_initial <= slack) {
            return Err(ModelError::VOutOfRange { v: v_at_initial, lo });
        }
        let v = v_at_initial.clamp(lo, 0.0);
        let pi = self.params.pi;
        let risk = 1.0 - pi + self.params.c * (1.0 - pi) / SQRT_2 * v;
        Ok(risk.clamp(0.0, 1.0))
    }
}
