//! Conditional-odds filtering of the disorder from event times.
//!
//! For a post-disorder rate supported on finitely many atoms, the weighted
//! odds-ratio processes
//!
//!   Φ⁽ᵏ⁾_t = E[(Λ-μ)ᵏ 1{θ ≤ t} | observations] / P{θ > t | observations}
//!
//! close into a finite-dimensional system: with `p(v) = Π(v - λᵢ + μ) =
//! vᵏ + Σ cᵢ vⁱ`, the top moment satisfies `Φ⁽ᵏ⁾ = -Σ cᵢ Φ⁽ⁱ⁾` along every
//! path.  Between events the vector follows the linear-affine ODE
//!
//!   dΦ⁽ⁱ⁾/dt = λ(m⁽ⁱ⁾ + Φ⁽ⁱ⁾) - Φ⁽ⁱ⁺¹⁾,
//!
//! and at each event it jumps by `Φ⁽ⁱ⁾ += Φ⁽ⁱ⁺¹⁾/μ`.
//!
//! Two independent routes are implemented:
//!
//! - the recursive filter ([`propagate`] / [`on_jump`]): an adaptive
//!   Dormand-Prince 5(4) stepper at relative tolerance 1e-10, with the
//!   two-atom `{μ-1, μ+1}` case short-circuited to the exact closed-form
//!   flow in the rotated coordinates,
//! - the direct filter ([`direct_filter`]): the integral representation
//!   evaluated exactly — between events the integrand is a finite sum of
//!   exponentials with closed-form antiderivatives.
//!
//! The direct route never touches the stepper and serves as the oracle for
//! the recursive one.

use serde::{Deserialize, Serialize};

use crate::flow::flow_raw;
use crate::model::{Model, TildePoint, SQRT_2};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FilterError {
    #[error("EMPTY_PRIOR: at least one atom is required")]
    EmptyPrior,
    #[error("ATOM_NOT_POSITIVE: atom {0} must be > 0")]
    AtomNotPositive(f64),
    #[error("ATOMS_NOT_DISTINCT: atoms {0} and {1} coincide")]
    AtomsNotDistinct(f64, f64),
    #[error("WEIGHTS_INVALID: weights must be nonnegative and sum to 1 (sum = {0})")]
    WeightsInvalid(f64),
    #[error("STEP_REJECTED: adaptive stepper could not meet tolerance (h = {h})")]
    StepRejected { h: f64 },
    #[error("NEGATIVE_ODDS: tilde coordinate {0} below -1e-9 signals filter divergence")]
    NegativeOdds(f64),
    #[error("WRONG_DIMENSION: operation requires a two-atom state (k = {0})")]
    WrongDimension(usize),
}

/// A finitely supported prior for the post-disorder rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomPrior {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl AtomPrior {
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self, FilterError> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(FilterError::EmptyPrior);
        }
        for &a in &atoms {
            if !(a > 0.0) {
                return Err(FilterError::AtomNotPositive(a));
            }
        }
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                if atoms[i] == atoms[j] {
                    return Err(FilterError::AtomsNotDistinct(atoms[i], atoms[j]));
                }
            }
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| w < 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(FilterError::WeightsInvalid(sum));
        }
        Ok(Self { atoms, weights })
    }

    /// The two-point prior on `{μ-1, μ+1}` with mean rate change `m`.
    pub fn bernoulli(mu: f64, m: f64) -> Self {
        Self {
            atoms: vec![mu - 1.0, mu + 1.0],
            weights: vec![(1.0 - m) / 2.0, (1.0 + m) / 2.0],
        }
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of atoms, i.e. the filter dimension.
    pub fn k(&self) -> usize {
        self.atoms.len()
    }

    /// True when the prior is exactly the `{μ-1, μ+1}` pair, which unlocks
    /// the closed-form propagation path.
    pub fn is_unit_bernoulli(&self, mu: f64) -> bool {
        self.atoms.len() == 2
            && (self.atoms[0] - (mu - 1.0)).abs() < 1e-12
            && (self.atoms[1] - (mu + 1.0)).abs() < 1e-12
    }
}

/// Coefficients `c₀..c_{k-1}` of the monic closure polynomial
/// `p(v) = Π(v - λᵢ + μ) = vᵏ + Σ cᵢ vⁱ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureCoeffs {
    coeffs: Vec<f64>,
}

impl ClosureCoeffs {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// The closed top moment `Φ⁽ᵏ⁾ = -Σ cᵢ Φ⁽ⁱ⁾`.
    pub fn top(&self, phis: &[f64]) -> f64 {
        -self
            .coeffs
            .iter()
            .zip(phis)
            .map(|(c, p)| c * p)
            .sum::<f64>()
    }
}

/// Moments `m⁽ᵏ⁾ = Σⱼ wⱼ (λⱼ - μ)ᵏ` for `k = 0..=k_max`.
pub fn moments(prior: &AtomPrior, mu: f64, k_max: usize) -> Vec<f64> {
    (0..=k_max)
        .map(|k| {
            prior
                .atoms
                .iter()
                .zip(&prior.weights)
                .map(|(&a, &w)| w * (a - mu).powi(k as i32))
                .sum()
        })
        .collect()
}

/// Expands `Π(v - (λᵢ - μ))` into monomial coefficients.
pub fn closure_coeffs(prior: &AtomPrior, mu: f64) -> ClosureCoeffs {
    let mut coeffs = vec![1.0];
    for &atom in &prior.atoms {
        let root = atom - mu;
        let mut next = vec![0.0; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= root * c;
        }
        coeffs = next;
    }
    coeffs.pop(); // drop the leading 1 of the monic polynomial
    ClosureCoeffs { coeffs }
}

/// The filter state: odds vector, clock and event count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterState {
    pub phis: Vec<f64>,
    pub t: f64,
    pub n_events: u64,
}

/// Initial state `Φ₀⁽ⁱ⁾ = π/(1-π) · m⁽ⁱ⁾`.
pub fn init_state(model: &Model, prior: &AtomPrior) -> FilterState {
    let odds = model.pi() / (1.0 - model.pi());
    let ms = moments(prior, model.mu(), prior.k().saturating_sub(1));
    FilterState {
        phis: ms.iter().map(|m| odds * m).collect(),
        t: 0.0,
        n_events: 0,
    }
}

fn derivative(phis: &[f64], lambda: f64, ms: &[f64], closure: &ClosureCoeffs, out: &mut [f64]) {
    let k = phis.len();
    for i in 0..k {
        let next = if i + 1 < k {
            phis[i + 1]
        } else {
            closure.top(phis)
        };
        out[i] = lambda * (ms[i] + phis[i]) - next;
    }
}

/// Advances the state by `dt` between events.
///
/// The two-atom `{μ-1, μ+1}` prior propagates through the exact rotated
/// flow; anything else runs the embedded Dormand-Prince 5(4) pair with
/// relative tolerance 1e-10.
pub fn propagate(
    state: &FilterState,
    dt: f64,
    model: &Model,
    prior: &AtomPrior,
) -> Result<FilterState, FilterError> {
    debug_assert!(dt >= 0.0);
    if dt == 0.0 {
        return Ok(state.clone());
    }
    if prior.is_unit_bernoulli(model.mu()) {
        let (p0, p1) = (state.phis[0], state.phis[1]);
        let x = (p0 - p1) / SQRT_2;
        let y = (p0 + p1) / SQRT_2;
        let (x1, y1) = flow_raw(model.lambda(), model.m(), dt, x, y);
        return Ok(FilterState {
            phis: vec![(x1 + y1) / SQRT_2, (y1 - x1) / SQRT_2],
            t: state.t + dt,
            n_events: state.n_events,
        });
    }
    let ms = moments(prior, model.mu(), prior.k().saturating_sub(1));
    let closure = closure_coeffs(prior, model.mu());
    let phis = rk45(&state.phis, dt, model.lambda(), &ms, &closure)?;
    Ok(FilterState {
        phis,
        t: state.t + dt,
        n_events: state.n_events,
    })
}

/// Dormand-Prince 5(4) with step rejection, rtol 1e-10 / atol 1e-12.
fn rk45(
    y0: &[f64],
    dt: f64,
    lambda: f64,
    ms: &[f64],
    closure: &ClosureCoeffs,
) -> Result<Vec<f64>, FilterError> {
    const RTOL: f64 = 1e-10;
    const ATOL: f64 = 1e-12;
    // Butcher tableau of the Dormand-Prince pair.
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut h = dt;
    let mut k = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];

    while t < dt {
        h = h.min(dt - t);
        if h < 1e-14 * dt.max(1.0) {
            return Err(FilterError::StepRejected { h });
        }
        derivative(&y, lambda, ms, closure, &mut k[0]);
        for s in 0..6 {
            for i in 0..dim {
                let mut acc = y[i];
                for (j, row) in A[s].iter().enumerate().take(s + 1) {
                    acc += h * row * k[j][i];
                }
                stage[i] = acc;
            }
            derivative(&stage, lambda, ms, closure, &mut k[s + 1]);
        }
        let mut err: f64 = 0.0;
        let mut y5 = vec![0.0; dim];
        for i in 0..dim {
            let mut v5 = y[i];
            let mut v4 = y[i];
            for s in 0..7 {
                v5 += h * B5[s] * k[s][i];
                v4 += h * B4[s] * k[s][i];
            }
            y5[i] = v5;
            let scale = ATOL + RTOL * y[i].abs().max(v5.abs());
            err = err.max((v5 - v4).abs() / scale);
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            h *= (0.9 * err.max(1e-10).powf(-0.2)).clamp(1.0, 5.0);
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 0.9);
        }
    }
    Ok(y)
}

/// Applies the event update `Φ⁽ⁱ⁾ += Φ⁽ⁱ⁺¹⁾/μ`, closing the top index.
pub fn on_jump(state: &FilterState, model: &Model, prior: &AtomPrior) -> FilterState {
    let closure = closure_coeffs(prior, model.mu());
    let k = state.phis.len();
    let mut phis = state.phis.clone();
    for i in 0..k {
        let next = if i + 1 < k {
            state.phis[i + 1]
        } else {
            closure.top(&state.phis)
        };
        phis[i] += next / model.mu();
    }
    FilterState {
        phis,
        t: state.t,
        n_events: state.n_events + 1,
    }
}

/// Runs the recursive filter through a whole event record up to time `t`.
pub fn filter_at(
    model: &Model,
    prior: &AtomPrior,
    t: f64,
    event_times: &[f64],
) -> Result<FilterState, FilterError> {
    let mut state = init_state(model, prior);
    for &s in event_times.iter().take_while(|&&s| s <= t) {
        state = propagate(&state, s - state.t, model, prior)?;
        state = on_jump(&state, model, prior);
    }
    propagate(&state, t - state.t, model, prior)
}

/// Direct evaluation of the odds vector from the event record.
///
/// Uses the integral representation
///
///   Φ⁽ᵏ⁾_t = π e^{λt}/(1-π) F⁽ᵏ⁾(t, N_t)
///          + λ ∫₀ᵗ e^{λ(t-s)} F⁽ᵏ⁾(t-s, N_t - N_s) ds,
///
/// where `F⁽ᵏ⁾(t, x) = Σⱼ wⱼ (λⱼ/μ)^x (λⱼ-μ)ᵏ e^{-(λⱼ-μ)t}`.  On each
/// inter-event interval `N_t - N_s` is constant, so the integrand is a sum
/// of pure exponentials in `s` and integrates exactly.
pub fn direct_filter(
    t: f64,
    event_times: &[f64],
    model: &Model,
    prior: &AtomPrior,
    k_max: usize,
) -> Vec<f64> {
    debug_assert!(event_times.windows(2).all(|w| w[0] <= w[1]));
    let mu = model.mu();
    let lambda = model.lambda();
    let events: Vec<f64> = event_times.iter().copied().filter(|&s| s <= t).collect();
    let n = events.len();

    let f_term = |tau: f64, count: i32, k: usize| -> f64 {
        prior
            .atoms
            .iter()
            .zip(&prior.weights)
            .map(|(&a, &w)| {
                w * (a / mu).powi(count) * (a - mu).powi(k as i32) * (-(a - mu) * tau).exp()
            })
            .sum()
    };

    (0..=k_max)
        .map(|k| {
            let odds = model.pi() / (1.0 - model.pi());
            let mut phi = odds * (lambda * t).exp() * f_term(t, n as i32, k);
            // piecewise-exact integral over the inter-event intervals
            for seg in 0..=n {
                let s_lo = if seg == 0 { 0.0 } else { events[seg - 1] };
                let s_hi = if seg == n { t } else { events[seg] };
                if s_hi <= s_lo {
                    continue;
                }
                let count = (n - seg) as i32;
                for (&a, &w) in prior.atoms.iter().zip(&prior.weights) {
                    let kappa = lambda - (a - mu);
                    let coeff = w * (a / mu).powi(count) * (a - mu).powi(k as i32);
                    let integral = if kappa.abs() < 1e-14 {
                        s_hi - s_lo
                    } else {
                        ((kappa * (t - s_lo)).exp() - (kappa * (t - s_hi)).exp()) / kappa
                    };
                    phi += lambda * coeff * integral;
                }
            }
            phi
        })
        .collect()
}

/// Rotates a two-atom state into the autonomous coordinates
/// `((Φ⁽⁰⁾-Φ⁽¹⁾)/√2, (Φ⁽⁰⁾+Φ⁽¹⁾)/√2)`.
///
/// `Φ⁽¹⁾` may be negative; the rotated pair must not be (beyond -1e-9,
/// which signals divergence).  Tiny negative round-off is clamped to zero.
pub fn tilde_transform(state: &FilterState) -> Result<TildePoint, FilterError> {
    if state.phis.len() != 2 {
        return Err(FilterError::WrongDimension(state.phis.len()));
    }
    let x = (state.phis[0] - state.phis[1]) / SQRT_2;
    let y = (state.phis[0] + state.phis[1]) / SQRT_2;
    for v in [x, y] {
        if v < -1e-9 {
            return Err(FilterError::NegativeOdds(v));
        }
    }
    Ok(TildePoint::new(x.max(0.0), y.max(0.0)))
}

/// Posterior disorder probability `Π = Φ⁽⁰⁾/(1 + Φ⁽⁰⁾)`.
pub fn posterior(state: &FilterState) -> f64 {
    state.phis[0] / (1.0 + state.phis[0])
}
