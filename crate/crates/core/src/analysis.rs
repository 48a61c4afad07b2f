//! Stability classification, the δ-transform and convergence orders.
//!
//! The scheme is unconditionally stable when `α = β ≠ 1` and `γ ≤ 0`. For
//! other parameters, the substitution `v(x) = δ u(x) + u(1−x)` maps the
//! problem onto one with `α₁ = β₁`, which is admissible when
//!
//! 1. `|α| < 1`, `|β| < 1`, `γ ≤ 0` (take the root `δ₁`), or
//! 2. `|α| > 1`, `|β| > 1`, `αβγ ≤ 0` (take the root `δ₂`).

use serde::{Deserialize, Serialize};

use crate::{Error, GridFunction, ProblemSpec, Result};

const POLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityCase {
    /// `α = β ≠ 1`, `γ ≤ 0`; no transform needed.
    Direct,
    /// `|α| < 1`, `|β| < 1`, `γ ≤ 0`.
    Case1,
    /// `|α| > 1`, `|β| > 1`, `αβγ ≤ 0`.
    Case2,
    NoGuarantee,
}

impl StabilityCase {
    pub fn is_guaranteed(self) -> bool {
        self != StabilityCase::NoGuarantee
    }
}

/// Parameters of the δ-transformed problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformedParams {
    pub alpha1: f64,
    pub beta1: f64,
    pub gamma1: f64,
    /// `(δ² − 1)/(δ − β)`, the factor mapping `μ` to `μ₁`.
    pub mu_factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub case: StabilityCase,
    pub delta: Option<f64>,
    pub transformed: Option<TransformedParams>,
}

impl StabilityVerdict {
    fn bare(case: StabilityCase) -> Self {
        Self {
            case,
            delta: None,
            transformed: None,
        }
    }
}

/// Which stability condition, if any, covers `(α, β, γ)`.
///
/// Boundary cases (`|α| = 1`, `|β| = 1`) fall to `NoGuarantee`.
pub fn classify_stability(alpha: f64, beta: f64, gamma: f64) -> StabilityVerdict {
    if alpha == beta {
        return if alpha != 1.0 && gamma <= 0.0 {
            StabilityVerdict::bare(StabilityCase::Direct)
        } else {
            StabilityVerdict::bare(StabilityCase::NoGuarantee)
        };
    }

    let (case, pick_second) = if alpha.abs() < 1.0 && beta.abs() < 1.0 && gamma <= 0.0 {
        (StabilityCase::Case1, false)
    } else if alpha.abs() > 1.0 && beta.abs() > 1.0 && alpha * beta * gamma <= 0.0 {
        (StabilityCase::Case2, true)
    } else {
        return StabilityVerdict::bare(StabilityCase::NoGuarantee);
    };

    let transformed = delta_roots(alpha, beta).and_then(|(d1, d2)| {
        let delta = if pick_second { d2 } else { d1 };
        transform_params(alpha, beta, gamma, delta).map(|t| (delta, t))
    });
    match transformed {
        Ok((delta, t)) => StabilityVerdict {
            case,
            delta: Some(delta),
            transformed: Some(t),
        },
        Err(_) => StabilityVerdict::bare(StabilityCase::NoGuarantee),
    }
}

/// Roots `(δ₁, δ₂)` of `δ² − 2(αβ−1)/(α−β)·δ + 1 = 0`, labelled as
/// `δ₁,₂ = (αβ − 1 ∓ sqrt((α²−1)(β²−1)))/(α − β)`.
///
/// The larger-magnitude root is computed directly and the other from
/// `δ₁δ₂ = 1`, which avoids cancellation when `|α|`, `|β|` are large.
pub fn delta_roots(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    if alpha == beta {
        return Err(Error::DegenerateParameters(alpha));
    }
    let disc = (alpha * alpha - 1.0) * (beta * beta - 1.0);
    if disc.is_nan() || disc <= 0.0 {
        return Err(Error::NoRealRoots { alpha, beta });
    }
    let diff = alpha - beta;
    let p = (alpha * beta - 1.0) / diff;
    // sqrt(p² − 1) without forming p²; p ≠ 0 whenever disc > 0
    let root = disc.sqrt() / diff.abs();
    let big = p + p.signum() * root;
    // δ₂ = p + sgn(α−β)·root
    if p.signum() == diff.signum() {
        Ok((1.0 / big, big))
    } else {
        Ok((big, 1.0 / big))
    }
}

/// `α₁, β₁, γ₁` and the `μ` factor for a given `δ`.
pub fn transform_params(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<TransformedParams> {
    let near = |pole: f64| (delta - pole).abs() < POLE_TOL * pole.abs().max(1.0);
    if near(1.0) || near(-1.0) || near(-alpha) || near(beta) {
        return Err(Error::DegenerateDelta { delta });
    }
    let d2m1 = delta * delta - 1.0;
    Ok(TransformedParams {
        alpha1: (delta * alpha + 1.0) / (delta + alpha),
        beta1: (delta * beta - 1.0) / (delta - beta),
        gamma1: gamma * d2m1 / ((delta + alpha) * (delta - beta)),
        mu_factor: d2m1 / (delta - beta),
    })
}

/// `v_i = δ y_i + y_{N−i}`.
pub fn transform_field(y: &GridFunction, delta: f64) -> GridFunction {
    let v = y.values();
    v.iter()
        .zip(v.iter().rev())
        .map(|(yi, yr)| delta * yi + yr)
        .collect::<Vec<_>>()
        .into()
}

/// Inverse of [`transform_field`]: `y_i = (δ v_i − v_{N−i})/(δ² − 1)`.
pub fn inverse_transform_field(v: &GridFunction, delta: f64) -> Result<GridFunction> {
    let d2m1 = delta * delta - 1.0;
    if d2m1 == 0.0 {
        return Err(Error::DegenerateDelta { delta });
    }
    let vals = v.values();
    Ok(vals
        .iter()
        .zip(vals.iter().rev())
        .map(|(vi, vr)| (delta * vi - vr) / d2m1)
        .collect::<Vec<_>>()
        .into())
}

/// The problem solved by `v = δu + u(1−x)`.
///
/// Requires a symmetric coefficient; `k` is shared unchanged.
pub fn transformed_problem(problem: &ProblemSpec, delta: f64) -> Result<ProblemSpec> {
    let t = transform_params(problem.alpha(), problem.beta(), problem.gamma(), delta)?;
    let f = problem.source_fn().clone();
    let mu = problem.boundary_fn().clone();
    let u0 = problem.initial_fn().clone();
    let k = problem.coefficient_fn().clone();
    let mu_factor = t.mu_factor;
    ProblemSpec::builder(problem.nu(), t.alpha1, t.beta1, t.gamma1, problem.horizon())
        .coefficient(move |x, s| k(x, s), problem.k_symmetric())
        .source(move |x, s| delta * f(x, s) + f(1.0 - x, s))
        .boundary(move |s| mu_factor * mu(s))
        .initial(move |x| delta * u0(x) + u0(1.0 - x))
        .build()
}

/// `CO_j = log(e_j/e_{j+1}) / log(h_j/h_{j+1})` for consecutive pairs.
pub fn convergence_order(errors: &[(f64, f64)]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(Error::InvalidErrorSequence(format!(
            "need at least two (h, error) pairs, got {}",
            errors.len()
        )));
    }
    if let Some((h, e)) = errors
        .iter()
        .find(|(h, e)| e.is_nan() || h.is_nan() || *e <= 0.0 || *h <= 0.0)
    {
        return Err(Error::InvalidErrorSequence(format!(
            "non-positive entry (h = {h}, error = {e})"
        )));
    }
    if errors.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(Error::InvalidErrorSequence("h must be strictly decreasing".to_string()));
    }
    Ok(errors
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_parameter_sets() {
        assert_eq!(classify_stability(3.0, 2.0, -5.0).case, StabilityCase::Case2);
        assert_eq!(classify_stability(2.0, -5.0, 10.0).case, StabilityCase::Case2);
        assert_eq!(classify_stability(0.7, 0.1, -3.0).case, StabilityCase::Case1);
        assert_eq!(classify_stability(0.1, -0.9, -7.0).case, StabilityCase::Case1);
        assert_eq!(classify_stability(100.0, -200.0, 300.0).case, StabilityCase::Case2);
        let direct = classify_stability(0.5, 0.5, 0.0);
        assert_eq!(direct.case, StabilityCase::Direct);
        assert_eq!(direct.delta, None);
    }

    #[test]
    fn outside_all_conditions() {
        for (a, b, g) in [
            (1.0, 1.0, -1.0),
            (0.5, 0.5, 1.0),
            (0.5, 2.0, -1.0),
            (1.0, 0.5, -1.0),
            (0.5, 0.2, 0.1),
            (3.0, 2.0, 1.0),
        ] {
            assert_eq!(
                classify_stability(a, b, g).case,
                StabilityCase::NoGuarantee,
                "({a}, {b}, {g})"
            );
        }
    }

    #[test]
    fn verdict_depends_on_sign_of_gamma_only() {
        let classes: [&[f64]; 3] = [&[-1e6, -1.0, -1e-12], &[0.0], &[1e-12, 1.0, 1e6]];
        for (a, b) in [(3.0, 2.0), (0.7, 0.1), (0.5, 0.5), (-3.0, 2.0)] {
            for class in classes {
                let cases: Vec<_> = class.iter().map(|&g| classify_stability(a, b, g).case).collect();
                assert!(cases.iter().all(|c| *c == cases[0]), "({a}, {b}): {cases:?}");
            }
        }
        // γ = 0 joins the nonpositive side
        assert_eq!(classify_stability(-3.0, 2.0, 0.0).case, StabilityCase::Case2);
        assert_eq!(classify_stability(-3.0, 2.0, -1.0).case, StabilityCase::NoGuarantee);
    }

    #[test]
    fn roots_for_three_two() {
        let (d1, d2) = delta_roots(3.0, 2.0).unwrap();
        // quadratic formula on δ² − 10δ + 1
        assert!((d1 - (5.0 - 24f64.sqrt())).abs() < 1e-14);
        assert!((d2 - (5.0 + 24f64.sqrt())).abs() < 1e-13);
        assert!((d1 - 0.1010205).abs() < 1e-7);
        assert!((d2 - 9.8989795).abs() < 1e-7);
    }

    #[test]
    fn roots_match_literal_formula() {
        for (a, b) in [(0.7f64, 0.1f64), (0.1, -0.9), (2.0, -5.0), (-4.0, 1.5), (0.3, 0.9)] {
            let s = ((a * a - 1.0) * (b * b - 1.0)).sqrt();
            let lit1 = (a * b - 1.0 - s) / (a - b);
            let lit2 = (a * b - 1.0 + s) / (a - b);
            let (d1, d2) = delta_roots(a, b).unwrap();
            assert!((d1 - lit1).abs() < 1e-12 * lit1.abs().max(1.0), "({a},{b})");
            assert!((d2 - lit2).abs() < 1e-12 * lit2.abs().max(1.0), "({a},{b})");
        }
    }

    #[test]
    fn root_errors() {
        assert_eq!(delta_roots(2.0, 2.0), Err(Error::DegenerateParameters(2.0)));
        assert!(matches!(delta_roots(0.5, 2.0), Err(Error::NoRealRoots { .. })));
        assert!(matches!(delta_roots(1.0, 2.0), Err(Error::NoRealRoots { .. })));
    }

    #[test]
    fn case1_example_gamma_stays_nonpositive() {
        let v = classify_stability(0.7, 0.1, -3.0);
        let (d1, _) = delta_roots(0.7, 0.1).unwrap();
        assert_eq!(v.delta, Some(d1));
        for g in [0.0, -0.1, -3.0, -1e4] {
            let t = transform_params(0.7, 0.1, g, d1).unwrap();
            assert!(t.gamma1 <= 0.0);
            assert!((t.alpha1 - t.beta1).abs() < 1e-12);
        }
    }

    #[test]
    fn transform_three_two() {
        let (_, d2) = delta_roots(3.0, 2.0).unwrap();
        let t = transform_params(3.0, 2.0, -5.0, d2).unwrap();
        assert!((t.alpha1 - 2.3798).abs() < 1e-4);
        assert!((t.beta1 - 2.3798).abs() < 1e-4);
        assert!((t.gamma1 + 4.7596).abs() < 1e-4);
        let t0 = transform_params(3.0, 2.0, 0.0, d2).unwrap();
        assert_eq!(t0.gamma1, 0.0);
    }

    #[test]
    fn transform_rejects_poles() {
        for d in [1.0, -1.0, -3.0, 2.0, 2.0 + 1e-12] {
            assert!(matches!(
                transform_params(3.0, 2.0, -5.0, d),
                Err(Error::DegenerateDelta { .. })
            ));
        }
    }

    #[test]
    fn field_transform_examples() {
        let y = GridFunction::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(transform_field(&y, 0.0).values(), &[3.0, 2.0, 1.0]);
        let sym = GridFunction::new(vec![1.0, 5.0, 2.0, 5.0, 1.0]);
        assert_eq!(transform_field(&sym, 1.0).values(), &[2.0, 10.0, 4.0, 10.0, 2.0]);

        let (_, d2) = delta_roots(3.0, 2.0).unwrap();
        let y = GridFunction::new((0..9).map(|i| (i as f64 * 0.7).sin()).collect());
        let back = inverse_transform_field(&transform_field(&y, d2), d2).unwrap();
        for (a, b) in back.iter().zip(y.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn convergence_order_examples() {
        let co = convergence_order(&[(1.0 / 160.0, 3.33916e-5), (1.0 / 320.0, 8.34728e-6)]).unwrap();
        assert!((co[0] - 2.000).abs() < 5e-4);
        assert_eq!(convergence_order(&[(0.1, 1.0), (0.05, 0.25)]).unwrap(), vec![2.0]);
        let co = convergence_order(&[
            (1.0 / 160.0, 3.01867e-2),
            (1.0 / 320.0, 7.54659e-3),
            (1.0 / 640.0, 1.88664e-3),
        ])
        .unwrap();
        assert!(co.iter().all(|c| (c - 2.0).abs() < 5e-4));
    }

    #[test]
    fn convergence_order_rejects_bad_input() {
        assert!(convergence_order(&[(0.1, 1.0)]).is_err());
        assert!(convergence_order(&[(0.1, 1.0), (0.05, 0.0)]).is_err());
        assert!(convergence_order(&[(0.1, 1.0), (0.2, 0.5)]).is_err());
        assert!(convergence_order(&[(0.1, 1.0), (0.1, 0.5)]).is_err());
    }

    proptest! {
        #[test]
        fn roots_multiply_to_one(a in -50.0..50.0f64, b in -50.0..50.0f64) {
            prop_assume!((a - b).abs() > 1e-6);
            prop_assume!((a * a - 1.0) * (b * b - 1.0) > 1e-9);
            let (d1, d2) = delta_roots(a, b).unwrap();
            prop_assert!((d1 * d2 - 1.0).abs() < 1e-10);
        }

        #[test]
        fn case1_transform_equalizes(
            a in -0.999..0.999f64,
            b in -0.999..0.999f64,
            g in -1e3..=0.0f64,
        ) {
            prop_assume!((a - b).abs() > 1e-6);
            let v = classify_stability(a, b, g);
            prop_assert_eq!(v.case, StabilityCase::Case1);
            let t = v.transformed.unwrap();
            prop_assert!((t.alpha1 - t.beta1).abs() <= 1e-12 * t.alpha1.abs().max(1.0));
            prop_assert!((t.alpha1 - 1.0).abs() >= 1e-9);
            prop_assert!(t.gamma1 <= 1e-12);
        }

        #[test]
        fn case2_transform_keeps_gamma_nonpositive(
            a in prop_oneof![-100.0..-1.001f64, 1.001..100.0f64],
            b in prop_oneof![-100.0..-1.001f64, 1.001..100.0f64],
            g in 0.0..1e3f64,
        ) {
            prop_assume!((a - b).abs() > 1e-6);
            // pick the sign of γ that satisfies αβγ ≤ 0
            let g = if a * b > 0.0 { -g } else { g };
            let v = classify_stability(a, b, g);
            prop_assert_eq!(v.case, StabilityCase::Case2);
            let t = v.transformed.unwrap();
            prop_assert!((t.alpha1 - t.beta1).abs() <= 1e-12 * t.alpha1.abs().max(1.0));
            prop_assert!(t.gamma1 <= 1e-12 * g.abs().max(1.0));
        }

        #[test]
        fn field_transform_inverts(vals in prop::collection::vec(-10.0..10.0f64, 3..30), delta in -20.0..20.0f64) {
            let d2m1 = (delta * delta - 1.0).abs();
            prop_assume!(d2m1 >= 1e-6);
            let y = GridFunction::new(vals);
            let back = inverse_transform_field(&transform_field(&y, delta), delta).unwrap();
            // rounding in v is amplified by the inverse's condition number
            let cond = (1.0 + delta.abs()).powi(2) / d2m1;
            let scale = crate::c_norm(&y).max(1.0);
            for (a, b) in back.iter().zip(y.iter()) {
                prop_assert!((a - b).abs() <= 1e-12 * cond * scale);
            }
        }
    }
}
