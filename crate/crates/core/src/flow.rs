//! Deterministic inter-jump dynamics of the sufficient statistic.
//!
//! Between observation events the pair `(φ₀, φ₁)` follows a decoupled pair
//! of affine ODEs with closed-form solutions
//!
//!   x(t, φ₀) = -a + e^{(λ+1)t} (φ₀ + a),            a = λ(1-m)/(√2(λ+1)),
//!   y(t, φ₁) = -b + e^{(λ-1)t} (φ₁ + b),  λ ≠ 1,    b = λ(1+m)/(√2(λ-1)),
//!   y(t, φ₁) = φ₁ + (1+m)/√2 · t,         λ = 1,
//!
//! valid for all real `t` (negative `t` runs the flow backward).  At each
//! observation event the state jumps through the linear map
//! `S(φ₀, φ₁) = ((1 - 1/μ)φ₀, (1 + 1/μ)φ₁)`.
//!
//! Everything here is evaluated in closed form; no ODE stepping.  The two
//! exit times the solver needs are
//!
//! - `r̄`: first forward time with `x + y ≥ ξ*` (always finite, found by
//!   exponential bracketing plus bisection — the sum dips at most once
//!   before increasing, so the first upcrossing is the only one),
//! - `r̂`: first backward time either coordinate leaves the quadrant,
//!   available in closed form per coordinate.

use crate::model::{Model, ModelError, TildePoint, SQRT_2};

/// Absolute time tolerance for bracketing/bisection searches.
pub const TOL_T: f64 = 1e-10;

/// A forward/backward time that may be infinite.
///
/// Infinity is a semantic outcome (the infimum of an empty set), kept as a
/// dedicated variant rather than a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    Finite(f64),
    Infinite,
}

impl Horizon {
    pub fn finite(self) -> Option<f64> {
        match self {
            Horizon::Finite(t) => Some(t),
            Horizon::Infinite => None,
        }
    }
}

/// The characteristic times of the flow started at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowTimes {
    /// Exit time from `{x + y < ξ*}` (finite).
    pub r_bar: f64,
    /// Backward exit time from the quadrant.
    pub r_hat: Horizon,
    /// Forward meeting time with the line `ℓ`, when the flow still has to
    /// cross it (the sum decreases until then, increases after).
    pub t_ell: Option<f64>,
}

/// Closed-form flow depending only on `(λ, m)`; shared with the model
/// module where `ξ*` is derived.
pub(crate) fn flow_raw(lambda: f64, m: f64, t: f64, x0: f64, y0: f64) -> (f64, f64) {
    let a = lambda * (1.0 - m) / (SQRT_2 * (lambda + 1.0));
    let x = -a + ((lambda + 1.0) * t).exp() * (x0 + a);
    let y = if lambda == 1.0 {
        y0 + (1.0 + m) / SQRT_2 * t
    } else {
        let b = lambda * (1.0 + m) / (SQRT_2 * (lambda - 1.0));
        -b + ((lambda - 1.0) * t).exp() * (y0 + b)
    };
    (x, y)
}

/// Flow for a signed time; the result may leave the quadrant for `t < 0`.
pub fn flow(model: &Model, t: f64, point: TildePoint) -> (f64, f64) {
    flow_raw(model.lambda(), model.m(), t, point.phi0, point.phi1)
}

/// Forward flow as a quadrant point (forward flows never leave the quadrant).
pub fn flow_point(model: &Model, t: f64, point: TildePoint) -> TildePoint {
    debug_assert!(t >= 0.0);
    let (x, y) = flow(model, t, point);
    TildePoint::new(x, y)
}

/// Jump map `S(φ₀, φ₁) = ((1 - 1/μ)φ₀, (1 + 1/μ)φ₁)` applied at each event.
pub fn jump_map(model: &Model, point: TildePoint) -> TildePoint {
    TildePoint::new(
        (1.0 - 1.0 / model.mu()) * point.phi0,
        (1.0 + 1.0 / model.mu()) * point.phi1,
    )
}

pub fn jump_map_inverse(model: &Model, point: TildePoint) -> TildePoint {
    TildePoint::new(
        point.phi0 / (1.0 - 1.0 / model.mu()),
        point.phi1 / (1.0 + 1.0 / model.mu()),
    )
}

/// `n`-fold jump map, `n` signed: `((1 - 1/μ)ⁿ x, (1 + 1/μ)ⁿ y)`.
pub fn s_power(model: &Model, point: (f64, f64), n: i32) -> (f64, f64) {
    (
        (1.0 - 1.0 / model.mu()).powi(n) * point.0,
        (1.0 + 1.0 / model.mu()).powi(n) * point.1,
    )
}

/// Drift of the sum, `d(x+y)/dt = (λ+1)x + (λ-1)y + λ√2`; vanishes on `ℓ`.
pub fn sum_derivative(model: &Model, x: f64, y: f64) -> f64 {
    let lambda = model.lambda();
    (lambda + 1.0) * x + (lambda - 1.0) * y + lambda * SQRT_2
}

/// First `t ≥ 0` with `x(t) + y(t) ≥ ξ*`; `0` if already outside.
pub fn exit_time_d(model: &Model, point: TildePoint) -> f64 {
    exit_time_sum_level(model, point, model.xi_star())
}

/// First `t ≥ 0` with `x(t) + y(t) ≥ level`.
///
/// The sum decreases at most once before increasing without bound, so the
/// first upcrossing of any level above the current sum is unique; an
/// exponentially grown bracket followed by bisection is safe.
pub fn exit_time_sum_level(model: &Model, point: TildePoint, level: f64) -> f64 {
    if point.sum() >= level {
        return 0.0;
    }
    let h = |t: f64| {
        let (x, y) = flow(model, t, point);
        x + y - level
    };
    let mut hi = 1.0 / (model.lambda() + 1.0);
    while h(hi) < 0.0 {
        hi *= 2.0;
        assert!(hi < 1e9, "sum level {level} unreachable from {point:?}");
    }
    let mut lo = 0.0;
    while hi - lo > TOL_T {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// First `t ≥ 0` with the backward flow `(x(-t), y(-t))` outside the quadrant.
///
/// Both coordinates exit monotonically backward (when they exit at all), so
/// each side has a closed-form hitting time of zero:
///
/// - x side: `x(-t, φ₀) = -a + e^{-(λ+1)t}(φ₀ + a)` hits zero at
///   `ln((φ₀+a)/a)/(λ+1)`, and is already exiting when `φ₀ = 0`;
/// - y side: depends on the sign of `λ - 1` and, for `λ < 1`, on whether
///   `φ₁` starts below the mean level `φ_d` (above it the backward flow
///   grows and never exits).
pub fn backward_exit_time(model: &Model, point: TildePoint) -> Horizon {
    let lambda = model.lambda();
    let m = model.m();

    let t_x = if point.phi0 == 0.0 {
        Some(0.0)
    } else {
        let a = lambda * (1.0 - m) / (SQRT_2 * (lambda + 1.0));
        Some(((point.phi0 + a) / a).ln() / (lambda + 1.0))
    };

    let t_y = if lambda > 1.0 {
        let b = lambda * (1.0 + m) / (SQRT_2 * (lambda - 1.0));
        Some(((point.phi1 + b) / b).ln() / (lambda - 1.0))
    } else if lambda == 1.0 {
        Some(point.phi1 * SQRT_2 / (1.0 + m))
    } else {
        let phi_d = lambda * (1.0 + m) / ((1.0 - lambda) * SQRT_2);
        (point.phi1 < phi_d).then(|| (phi_d / (phi_d - point.phi1)).ln() / (1.0 - lambda))
    };

    match (t_x, t_y) {
        (Some(a), Some(b)) => Horizon::Finite(a.min(b)),
        (Some(a), None) => Horizon::Finite(a),
        (None, Some(b)) => Horizon::Finite(b),
        (None, None) => Horizon::Infinite,
    }
}

/// Slope `dy/dx` of the flow trajectory through a quadrant point.
///
/// Equals `-1` exactly on `ℓ` and `0` on the mean level `y = φ_d`.
pub fn flow_slope(model: &Model, point: TildePoint) -> f64 {
    let lambda = model.lambda();
    let m = model.m();
    let num = (lambda - 1.0) * point.phi1 + lambda * (1.0 + m) / SQRT_2;
    let den = (lambda + 1.0) * point.phi0 + lambda * (1.0 - m) / SQRT_2;
    num / den
}

/// All characteristic times at once.
pub fn flow_times(model: &Model, point: TildePoint) -> FlowTimes {
    FlowTimes {
        r_bar: exit_time_d(model, point),
        r_hat: backward_exit_time(model, point),
        t_ell: time_to_line(model, point),
    }
}

/// Forward meeting time with `ℓ`, i.e. the unique zero of the sum drift,
/// when the drift starts negative.  `None` when the sum is already
/// nondecreasing (at or below `ℓ`, or `λ ≥ 1`).
pub fn time_to_line(model: &Model, point: TildePoint) -> Option<f64> {
    if sum_derivative(model, point.phi0, point.phi1) >= 0.0 {
        return None;
    }
    let d = |t: f64| {
        let (x, y) = flow(model, t, point);
        sum_derivative(model, x, y)
    };
    // The drift is increasing along trajectories that start above ℓ, so the
    // zero is unique and bracketable.
    let mut hi = 1.0 / (model.lambda() + 1.0);
    while d(hi) < 0.0 {
        hi *= 2.0;
        assert!(hi < 1e9, "drift never turns positive from {point:?}");
    }
    let mut lo = 0.0;
    while hi - lo > TOL_T {
        let mid = 0.5 * (lo + hi);
        if d(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

/// Closed-form `∫₀^dt (x(s) + y(s)) ds` along the flow from `point`.
pub fn integral_of_sum(model: &Model, point: TildePoint, dt: f64) -> f64 {
    let lambda = model.lambda();
    let m = model.m();
    let a = lambda * (1.0 - m) / (SQRT_2 * (lambda + 1.0));
    let ix = -a * dt + (point.phi0 + a) * (((lambda + 1.0) * dt).exp() - 1.0) / (lambda + 1.0);
    let iy = if lambda == 1.0 {
        point.phi1 * dt + (1.0 + m) / SQRT_2 * dt * dt / 2.0
    } else {
        let b = lambda * (1.0 + m) / (SQRT_2 * (lambda - 1.0));
        -b * dt + (point.phi1 + b) * (((lambda - 1.0) * dt).exp() - 1.0) / (lambda - 1.0)
    };
    ix + iy
}

/// Error surface for flow-level operations (none today; jump maps and flows
/// are total on the quadrant).
pub type FlowError = ModelError;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::presets;

    #[test]
    fn flow_at_zero_is_identity() {
        let m = presets::small_rate();
        let p = TildePoint::new(0.3, 0.7);
        let (x, y) = flow(&m, 0.0, p);
        assert_eq!((x, y), (0.3, 0.7));
    }

    #[test]
    fn flow_large_rate_closed_form() {
        // λ = 1: a = 1/(2√2), y moves linearly at rate (1+m)/√2.
        let m = presets::large_rate();
        let (x, y) = flow(&m, 0.5, TildePoint::ORIGIN);
        let a = 1.0 / (2.0 * SQRT_2);
        assert!((x - (-a + 1.0f64.exp() * a)).abs() < 1e-12);
        assert!((x - 0.607514).abs() < 1e-6);
        assert!((y - 0.353553).abs() < 1e-6);
    }

    #[test]
    fn mean_level_is_invariant_for_small_rate() {
        let m = presets::small_rate();
        let phi_d = m.phi_d().unwrap();
        for t in [0.1, 1.0, 5.0, -2.0] {
            let (_, y) = flow(&m, t, TildePoint::new(0.4, phi_d));
            assert!((y - phi_d).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn jump_map_and_inverse() {
        let m = presets::large_rate(); // μ = 2
        assert_eq!(jump_map(&m, TildePoint::ORIGIN), TildePoint::ORIGIN);
        let p = jump_map(&m, TildePoint::new(1.0, 1.0));
        assert_eq!(p, TildePoint::new(0.5, 1.5));

        let m15 = presets::small_rate(); // μ = 1.5
        let q = jump_map_inverse(&m15, jump_map(&m15, TildePoint::new(0.3, 0.7)));
        assert!((q.phi0 - 0.3).abs() < 1e-15);
        assert!((q.phi1 - 0.7).abs() < 1e-15);
    }

    #[test]
    fn s_power_examples() {
        let m = presets::large_rate();
        assert_eq!(s_power(&m, (0.4, 0.9), 0), (0.4, 0.9));
        let p = s_power(&m, (1.0, 1.0), 2);
        assert!((p.0 - 0.25).abs() < 1e-15);
        assert!((p.1 - 2.25).abs() < 1e-15);
        let q = s_power(&m, (0.5, 1.5), -1);
        assert!((q.0 - 1.0).abs() < 1e-15);
        assert!((q.1 - 1.0).abs() < 1e-15);
    }

    /// Independent fine-grid scan oracle for the first sum-level upcrossing.
    fn exit_scan_oracle(m: &Model, p: TildePoint, level: f64) -> f64 {
        let mut t = 0.0;
        let dt = 1e-4;
        loop {
            let (x, y) = flow(m, t, p);
            if x + y >= level {
                // refine by a finer local scan
                let mut lo = (t - dt).max(0.0);
                let fine = 1e-9;
                while lo < t {
                    let (x, y) = flow(m, lo, p);
                    if x + y >= level {
                        break;
                    }
                    lo += fine;
                }
                return lo;
            }
            t += dt;
            assert!(t < 1e4);
        }
    }

    #[test]
    fn exit_time_outside_is_zero() {
        let m = presets::large_rate();
        assert_eq!(exit_time_d(&m, TildePoint::new(3.0, 2.0)), 0.0);
    }

    #[test]
    fn exit_time_matches_scan_oracle_large() {
        let m = presets::large_rate();
        let t = exit_time_d(&m, TildePoint::ORIGIN);
        let oracle = exit_scan_oracle(&m, TildePoint::ORIGIN, m.xi_star());
        assert!((t - oracle).abs() < 1e-6, "t={t} oracle={oracle}");
        // and the sum is at the level there
        let (x, y) = flow(&m, t, TildePoint::ORIGIN);
        assert!((x + y - m.xi_star()).abs() < 1e-7);
    }

    #[test]
    fn exit_time_from_line_point_small() {
        // On ℓ the sum has zero drift, then increases; the exit is finite.
        let m = presets::small_rate();
        let corner = m.antidiagonal_corner(m.g_zero()).unwrap();
        let level = m.g_zero() + 0.5;
        let t = exit_time_sum_level(&m, corner, level);
        let oracle = exit_scan_oracle(&m, corner, level);
        assert!(t > 0.0);
        assert!((t - oracle).abs() < 1e-6, "t={t} oracle={oracle}");
    }

    #[test]
    fn backward_exit_cases() {
        let m = presets::small_rate();

        // on the y-axis the backward x-coordinate is immediately negative
        assert_eq!(
            backward_exit_time(&m, TildePoint::new(0.0, 0.4)),
            Horizon::Finite(0.0)
        );

        // from the tangency corner the backward curve reaches the y-axis at
        // height φ̄₁ given in closed form
        let corner = m.antidiagonal_corner(m.g_zero()).unwrap();
        let r_hat = backward_exit_time(&m, corner).finite().unwrap();
        assert!(r_hat > 0.0);
        let (x, y) = flow(&m, -r_hat, corner);
        assert!(x.abs() < 1e-9);
        let lam = m.lambda();
        let phi_bar = -lam * (1.0 + m.m()) / (SQRT_2 * (lam - 1.0))
            + (corner.phi1 + lam * (1.0 + m.m()) / (SQRT_2 * (lam - 1.0)))
                * (1.0 + corner.phi0 * SQRT_2 * (lam + 1.0) / (lam * (1.0 - m.m())))
                    .powf(-(lam - 1.0) / (lam + 1.0));
        assert!((y - phi_bar).abs() < 1e-9, "y={y} phi_bar={phi_bar}");

        // starting on the mean level, only the x-coordinate can exit backward
        let phi_d = m.phi_d().unwrap();
        let p = TildePoint::new(0.2, phi_d);
        let t = backward_exit_time(&m, p).finite().unwrap();
        let (x, y) = flow(&m, -t, p);
        assert!(x.abs() < 1e-9);
        assert!((y - phi_d).abs() < 1e-12);

        // above the mean level with φ₀ = 0 removed: y never exits backward
        let q = TildePoint::new(0.2, phi_d + 0.1);
        let t_q = backward_exit_time(&m, q).finite().unwrap();
        let (x_q, _) = flow(&m, -t_q, q);
        assert!(x_q.abs() < 1e-9);
    }

    #[test]
    fn flow_slope_values() {
        let small = presets::small_rate();
        // on ℓ the slope is -1 exactly
        let corner = small.antidiagonal_corner(small.g_zero()).unwrap();
        assert!((flow_slope(&small, corner) + 1.0).abs() < 1e-12);
        // on the mean level the y-velocity vanishes
        let phi_d = small.phi_d().unwrap();
        assert!(flow_slope(&small, TildePoint::new(0.0, phi_d)).abs() < 1e-12);
        // large-rate numeric value at (1, 1)
        let large = presets::large_rate();
        let s = flow_slope(&large, TildePoint::new(1.0, 1.0));
        assert!((s - 0.261204).abs() < 1e-6);
    }

    #[test]
    fn time_to_line_splits_monotonicity() {
        let m = presets::small_rate();
        // a point above ℓ: sum decreases, then increases
        let p = TildePoint::new(0.0, 1.0);
        let t_ell = time_to_line(&m, p).unwrap();
        let sum = |t: f64| {
            let (x, y) = flow(&m, t, p);
            x + y
        };
        assert!(sum(t_ell * 0.5) < sum(0.0));
        assert!(sum(t_ell + 1.0) > sum(t_ell));
        // a point below ℓ: already increasing
        assert!(time_to_line(&m, TildePoint::new(1.0, 0.0)).is_none());
    }

    #[test]
    fn integral_of_sum_matches_quadrature() {
        let m = presets::small_rate();
        let p = TildePoint::new(0.3, 0.9);
        let dt = 0.7;
        let n = 20_000;
        let h = dt / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let t0 = i as f64 * h;
            let (x0, y0) = flow(&m, t0, p);
            let (x1, y1) = flow(&m, t0 + h, p);
            acc += 0.5 * (x0 + y0 + x1 + y1) * h;
        }
        assert!((integral_of_sum(&m, p, dt) - acc).abs() < 1e-8);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(1000))]

        /// Semigroup law: flow(t+s, p) = flow(s, flow(t, p)), both signs.
        #[test]
        fn semigroup(lambda in 0.05f64..3.0, m in -0.95f64..0.95,
                     x0 in 0.0f64..5.0, y0 in 0.0f64..5.0,
                     t in -2.0f64..2.0, s in -2.0f64..2.0) {
            let (x1, y1) = flow_raw(lambda, m, t, x0, y0);
            let (x2, y2) = flow_raw(lambda, m, s, x1, y1);
            let (x3, y3) = flow_raw(lambda, m, t + s, x0, y0);
            let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
            proptest::prop_assert!(rel(x2, x3) < 1e-10);
            proptest::prop_assert!(rel(y2, y3) < 1e-10);
        }

        /// Forward flows never leave the quadrant.
        #[test]
        fn forward_invariance(lambda in 0.05f64..3.0, m in -0.95f64..0.95,
                              x0 in 0.0f64..5.0, y0 in 0.0f64..5.0,
                              t in 0.0f64..3.0) {
            let (x, y) = flow_raw(lambda, m, t, x0, y0);
            proptest::prop_assert!(x >= -1e-12 && y >= -1e-12);
        }

        /// In the large-rate regime both coordinates are nondecreasing in t.
        #[test]
        fn large_rate_monotone(mu in 1.1f64..4.0, c in 0.1f64..3.0,
                               m in -0.95f64..0.95,
                               x0 in 0.0f64..4.0, y0 in 0.0f64..4.0,
                               t in 0.0f64..2.0, dt in 0.0f64..1.0) {
            // pick λ at the regime threshold or above
            let lambda = (1.0 - (1.0 + m) * c / 2.0).max(0.0) + 0.01;
            let model = Model::new(ModelParams { lambda, mu, c, m, pi: 0.0 }).unwrap();
            let p = TildePoint::new(x0, y0);
            let (xa, ya) = flow(&model, t, p);
            let (xb, yb) = flow(&model, t + dt, p);
            proptest::prop_assert!(xb >= xa - 1e-10);
            proptest::prop_assert!(yb >= ya - 1e-9 * ya.abs().max(1.0));
        }

        /// The sum drift changes sign at most once, minus to plus.
        #[test]
        fn sum_drift_single_sign_change(lambda in 0.05f64..3.0, m in -0.95f64..0.95,
                                        mu in 1.1f64..4.0, c in 0.1f64..3.0,
                                        x0 in 0.0f64..3.0, y0 in 0.0f64..3.0) {
            let model = Model::new(ModelParams { lambda, mu, c, m, pi: 0.0 }).unwrap();
            let p = TildePoint::new(x0, y0);
            let mut seen_positive = false;
            for i in 0..400 {
                let t = i as f64 * 0.01;
                let (x, y) = flow(&model, t, p);
                let d = sum_derivative(&model, x, y);
                if d > 1e-12 {
                    seen_positive = true;
                } else if d < -1e-12 {
                    proptest::prop_assert!(!seen_positive, "drift returned negative at t={t}");
                }
            }
        }

        /// The regime never flips large -> small as λ grows.
        #[test]
        fn regime_monotone_in_lambda(lambda in 0.05f64..2.0, bump in 0.0f64..2.0,
                                     mu in 1.1f64..4.0, c in 0.1f64..3.0,
                                     m in -0.95f64..0.95) {
            let lo = Model::new(ModelParams { lambda, mu, c, m, pi: 0.0 }).unwrap();
            let hi = Model::new(ModelParams { lambda: lambda + bump, mu, c, m, pi: 0.0 }).unwrap();
            if lo.regime() == crate::model::Regime::LargeLambda {
                proptest::prop_assert_eq!(hi.regime(), crate::model::Regime::LargeLambda);
            }
        }

        /// The corner returned for x + y = K lies on both lines.
        #[test]
        fn corner_on_both_lines(lambda in 0.05f64..0.95, mu in 1.1f64..4.0,
                                c in 0.1f64..3.0, m in -0.95f64..0.95,
                                k in 0.01f64..20.0) {
            let model = Model::new(ModelParams { lambda, mu, c, m, pi: 0.0 }).unwrap();
            if let Ok(p) = model.antidiagonal_corner(k) {
                let on_antidiag = (p.sum() - k).abs() / k.max(1.0);
                let ell = (lambda + 1.0) * p.phi0 + (lambda - 1.0) * p.phi1 + lambda * SQRT_2;
                let scale = (lambda + 1.0) * p.phi0.abs() + (1.0 - lambda) * p.phi1.abs()
                    + lambda * SQRT_2;
                proptest::prop_assert!(on_antidiag < 1e-12);
                proptest::prop_assert!(ell.abs() / scale.max(1.0) < 1e-12);
            }
        }

        /// ξ* dominates (λ+μ)√2/c for all valid parameters.
        #[test]
        fn xi_star_dominates(lambda in 0.05f64..3.0, mu in 1.1f64..4.0,
                             c in 0.1f64..3.0, m in -0.95f64..0.95) {
            let model = Model::new(ModelParams { lambda, mu, c, m, pi: 0.0 }).unwrap();
            proptest::prop_assert!(model.xi_star() >= (lambda + mu) * SQRT_2 / c - 1e-12);
        }

        /// The running cost is affine along segments.
        #[test]
        fn running_cost_affine(lambda in 0.05f64..3.0, mu in 1.1f64..4.0,
                               c in 0.1f64..3.0, m in -0.95f64..0.95,
                               x0 in 0.0f64..5.0, y0 in 0.0f64..5.0,
                               x1 in 0.0f64..5.0, y1 in 0.0f64..5.0,
                               alpha in 0.0f64..1.0) {
            let model = Model::new(ModelParams { lambda, mu, c, m, pi: 0.0 }).unwrap();
            let p = TildePoint::new(x0, y0);
            let q = TildePoint::new(x1, y1);
            let blend = TildePoint::new(
                alpha * x0 + (1.0 - alpha) * x1,
                alpha * y0 + (1.0 - alpha) * y1,
            );
            let lhs = model.running_cost(blend);
            let rhs = alpha * model.running_cost(p) + (1.0 - alpha) * model.running_cost(q);
            proptest::prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
        }
    }
}
