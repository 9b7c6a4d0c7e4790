use std::fmt;

use super::BoundSettings;
use crate::diagnostics::Moment;
use crate::nondim::DimensionlessParams;
use crate::{Error, Result};

/// Which form of a bound to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoundVariant {
    /// Keep only the leading power of `Re_ν` (assumes `Re_ν ≫ Re_β`).
    #[default]
    LeadingOrder,
    /// Keep every term of the intermediate estimates.
    Full,
}

/// Right-hand side of a time-averaged estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundValue {
    Value(f64),
    /// Known to be finite; no closed form is evaluated.
    Finite,
    /// No estimate is available.
    Open,
}

impl BoundValue {
    pub fn value(self) -> Option<f64> {
        match self {
            BoundValue::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Value(v) => write!(f, "{v:.6e}"),
            BoundValue::Finite => f.write_str("finite"),
            BoundValue::Open => f.write_str("open"),
        }
    }
}

/// Right-hand sides of the four energy-level estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyBounds {
    /// `⟨H₀⟩ ≤ 𝒜₀`
    pub h0: f64,
    /// `⟨H₁⟩ ≤ α₀𝒜₀Re_ν`
    pub h1: f64,
    /// `⟨∫|u|⁴⟩ ≤ 𝒜₀²`
    pub quartic: f64,
    /// `⟨H₁/H₀⟩ ≤ α₀Re_ν`
    pub h1_over_h0: f64,
}

pub fn bound_energy(p: &DimensionlessParams, s: &BoundSettings) -> EnergyBounds {
    let c = s.constant;
    EnergyBounds {
        h0: c * p.activity,
        h1: c * p.alpha0 * p.activity * p.re_nu,
        quartic: c * p.activity * p.activity,
        h1_over_h0: c * p.alpha0 * p.re_nu,
    }
}

/// `⟨P_{2,1}⟩`: `α₀(α₀𝒜₀Re³)^{1/2}` to leading order, otherwise
/// `α₀Re(𝒜₀(1 + α₀Re))^{1/2}`.
fn p21(p: &DimensionlessParams, v: BoundVariant) -> f64 {
    let (a, act, re) = (p.alpha0, p.activity, p.re_nu);
    match v {
        BoundVariant::LeadingOrder => a * (a * act * re.powi(3)).sqrt(),
        BoundVariant::Full => a * re * (act * (1.0 + a * re)).sqrt(),
    }
}

/// `⟨‖u‖∞²⟩` through the `m → ∞` limit of the `P_{0,m}` route.
fn p0_inf(p: &DimensionlessParams, v: BoundVariant) -> f64 {
    match v {
        BoundVariant::LeadingOrder => p.alpha0 * p.activity * p.re_nu,
        BoundVariant::Full => compose_p0_inf(p21(p, v), p.activity * p.activity),
    }
}

/// Bound on `⟨H_{n+1}/H_n⟩` used by the ladder.
pub fn ladder_ratio(p: &DimensionlessParams, v: BoundVariant) -> f64 {
    let re = p.re_nu;
    match v {
        BoundVariant::LeadingOrder => p.alpha0 * p.activity * re.powi(3),
        BoundVariant::Full => 2.0 * p.alpha0 * re + re * (p.re_beta + re) * p0_inf(p, v),
    }
}

/// One rung: `⟨P_{n+1,1}⟩ ≤ r^{1/(n+1)} ⟨P_{n,1}⟩^{n/(n+1)}`.
pub fn ladder_step(ratio: f64, p_n: f64, n: u32) -> f64 {
    let k = n as f64 + 1.0;
    ratio.powf(1.0 / k) * p_n.powf(n as f64 / k)
}

/// `⟨P_{1,m}⟩ ≤ ⟨P_{2,1}⟩^{2(m−1)/(2m−1)} ⟨H₁⟩^{1/(2m−1)}`.
pub fn compose_p1m(p21: f64, h1: f64, m: u32) -> f64 {
    let m = m as f64;
    p21.powf(2.0 * (m - 1.0) / (2.0 * m - 1.0)) * h1.powf(1.0 / (2.0 * m - 1.0))
}

/// `⟨P_{0,m}⟩ ≤ ⟨P_{2,1}⟩^{2(m−2)/(3(m−1))} ⟨∫|u|⁴⟩^{(m+1)/(3(m−1))}`.
pub fn compose_p0m(p21: f64, quartic: f64, m: u32) -> f64 {
    let m = m as f64;
    p21.powf(2.0 * (m - 2.0) / (3.0 * (m - 1.0))) * quartic.powf((m + 1.0) / (3.0 * (m - 1.0)))
}

fn compose_p0_inf(p21: f64, quartic: f64) -> f64 {
    p21.powf(2.0 / 3.0) * quartic.powf(1.0 / 3.0)
}

/// `⟨Q_{0,m}⟩ ≤ ⟨Q_{2,1}⟩^{9(m−2)/(5(2m−3))} ⟨∫|u|⁴⟩^{(m+3)/(5(2m−3))}`.
pub fn compose_q0m(q21: f64, quartic: f64, m: u32) -> f64 {
    let m = m as f64;
    let e = 9.0 * (m - 2.0) / (5.0 * (2.0 * m - 3.0));
    q21.powf(e) * quartic.powf(1.0 - e)
}

fn compose_q0_inf(q21: f64, quartic: f64) -> f64 {
    q21.powf(0.9) * quartic.powf(0.1)
}

fn pn1(n: u32, p: &DimensionlessParams, v: BoundVariant) -> f64 {
    let (a, act, re) = (p.alpha0, p.activity, p.re_nu);
    match n {
        1 => a * act * re,
        2 => p21(p, v),
        _ => match v {
            BoundVariant::LeadingOrder => {
                let nf = n as f64;
                a.powf(2.0 / nf) * (a * act * re.powi(3)).powf((nf - 1.0) / nf)
            }
            BoundVariant::Full => {
                let r = ladder_ratio(p, v);
                (2..n).fold(p21(p, v), |acc, k| ladder_step(r, acc, k))
            }
        },
    }
}

fn check_params(p: &DimensionlessParams) -> Result<()> {
    p.validate()
}

/// Right-hand side for `⟨P_{n,m}⟩` in two dimensions.
pub fn bound_p(n: u32, m: Moment, p: &DimensionlessParams, s: &BoundSettings) -> Result<f64> {
    check_params(p)?;
    let v = s.variant;
    let (a, act, re) = (p.alpha0, p.activity, p.re_nu);
    let rhs = match (n, m) {
        (_, Moment::Finite(0)) => return Err(Error::Domain("moment m must be at least 1".into())),
        (0, Moment::Finite(m)) if m <= 2 => {
            return Err(Error::Domain(format!(
                "P_{{0,m}} bound requires m > 2, got m = {m}"
            )))
        }
        (0, Moment::Finite(m)) => match v {
            BoundVariant::LeadingOrder => {
                let mf = m as f64;
                act.powf(mf / (mf - 1.0)) * (a * re).powf((mf - 2.0) / (mf - 1.0))
            }
            BoundVariant::Full => compose_p0m(p21(p, v), act * act, m),
        },
        (0, Moment::Infinite) => p0_inf(p, v),
        (_, Moment::Finite(1)) => pn1(n, p, v),
        (1, Moment::Finite(m)) => match v {
            BoundVariant::LeadingOrder => {
                let mf = m as f64;
                (a * re).powf((3.0 * mf - 2.0) / (2.0 * mf - 1.0)) * act.powf(mf / (2.0 * mf - 1.0))
            }
            BoundVariant::Full => compose_p1m(p21(p, v), a * act * re, m),
        },
        (1, Moment::Infinite) => match v {
            BoundVariant::LeadingOrder => (a * re).powf(1.5) * act.sqrt(),
            BoundVariant::Full => p21(p, v),
        },
        (n, Moment::Finite(m)) => {
            let (nf, mf) = (n as f64, m as f64);
            let den = mf * (nf + 1.0) - 1.0;
            a.powf(2.0 * mf / den) * (a * act * re.powi(3)).powf((mf * nf - 1.0) / den)
        }
        (n, Moment::Infinite) => {
            let nf = n as f64;
            a.powf(2.0 / (nf + 1.0)) * (a * act * re.powi(3)).powf(nf / (nf + 1.0))
        }
    };
    Ok(s.constant * rhs)
}

/// `⟨Q_{2,1}⟩`: `α₀Re²` to leading order, otherwise
/// `α₀Re^{4/3}(Re_β² + Re²)^{1/3}`.
fn q21(p: &DimensionlessParams, v: BoundVariant) -> f64 {
    let (a, re, rb) = (p.alpha0, p.re_nu, p.re_beta);
    match v {
        BoundVariant::LeadingOrder => a * re * re,
        BoundVariant::Full => a * re.powf(4.0 / 3.0) * (rb * rb + re * re).cbrt(),
    }
}

/// Right-hand side for `⟨Q_{n,m}⟩` in three dimensions, or a flag where
/// only finiteness is known.
pub fn bound_q(
    n: u32,
    m: Moment,
    p: &DimensionlessParams,
    s: &BoundSettings,
) -> Result<BoundValue> {
    check_params(p)?;
    let v = s.variant;
    let (a, act, re) = (p.alpha0, p.activity, p.re_nu);
    let rhs = match (n, m) {
        (_, Moment::Finite(0)) => return Err(Error::Domain("moment m must be at least 1".into())),
        (0, Moment::Finite(m)) if m <= 2 => {
            return Err(Error::Domain(format!(
                "Q_{{0,m}} bound requires m > 2, got m = {m}"
            )))
        }
        (0, Moment::Finite(m)) => match v {
            BoundVariant::LeadingOrder => {
                let mf = m as f64;
                let den = 5.0 * (2.0 * mf - 3.0);
                act.powf(2.0 * (mf + 3.0) / den) * (a * re * re).powf(9.0 * (mf - 2.0) / den)
            }
            BoundVariant::Full => compose_q0m(q21(p, v), act * act, m),
        },
        (0, Moment::Infinite) => match v {
            BoundVariant::LeadingOrder => a.powf(0.9) * act.powf(0.2) * re.powf(1.8),
            BoundVariant::Full => compose_q0_inf(q21(p, v), act * act),
        },
        (1, Moment::Finite(1)) => a * act * re,
        (1, _) => return Ok(BoundValue::Open),
        (2, Moment::Finite(1)) => q21(p, v),
        _ => return Ok(BoundValue::Finite),
    };
    Ok(BoundValue::Value(s.constant * rhs))
}

/// `H₁(0)·exp{α₀(1 + c·Re_β²Re_ν𝒜₀²)T}` for two-dimensional flows.
pub fn bound_h1_exponential(
    h1_0: f64,
    t: f64,
    p: &DimensionlessParams,
    s: &BoundSettings,
) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!(
            "time horizon must be nonnegative, got {t}"
        )));
    }
    let rate =
        p.alpha0 * (1.0 + s.constant * p.re_beta * p.re_beta * p.re_nu * p.activity * p.activity);
    Ok(h1_0 * (rate * t).exp())
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    use super::*;

    fn lead() -> BoundSettings {
        BoundSettings::default()
    }

    fn full() -> BoundSettings {
        BoundSettings {
            variant: BoundVariant::Full,
            ..Default::default()
        }
    }

    fn params() -> DimensionlessParams {
        DimensionlessParams::new(
            2.0 * std::f64::consts::PI,
            400.0 * std::f64::consts::PI,
            2.0 * std::f64::consts::PI,
        )
        .unwrap()
    }

    #[test]
    fn energy_bounds_are_consistent() {
        let p = DimensionlessParams::new(3.0, 50.0, 3.0).unwrap();
        let e = bound_energy(&p, &lead());
        assert_eq!(e.quartic, 1.0);
        assert_relative_eq!(e.h1, e.h1_over_h0 * e.h0, max_relative = 1e-15);
    }

    #[test]
    fn closed_forms_match_their_special_cases() {
        let p = params();
        let s = lead();
        let (a, act, re) = (p.alpha0, p.activity, p.re_nu);
        let p21_direct = a * (a * act * re.powi(3)).sqrt();
        assert_relative_eq!(
            bound_p(2, Moment::Finite(1), &p, &s).unwrap(),
            p21_direct,
            max_relative = 1e-12
        );
        // general n ≥ 2 form at m = 1, n = 2
        let general = a.powf(2.0 * 1.0 / 2.0) * (a * act * re.powi(3)).powf(1.0 / 2.0);
        assert_relative_eq!(general, p21_direct, max_relative = 1e-12);
        assert_relative_eq!(
            bound_p(1, Moment::Finite(1), &p, &s).unwrap(),
            a * act * re,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            bound_p(0, Moment::Infinite, &p, &s).unwrap(),
            a * act * re,
            max_relative = 1e-12
        );
        assert!(bound_p(0, Moment::Finite(2), &p, &s).is_err());
    }

    #[test]
    fn compositions_reproduce_closed_forms() {
        let p = params();
        let s = lead();
        let p21 = bound_p(2, Moment::Finite(1), &p, &s).unwrap();
        let h1 = bound_energy(&p, &s).h1;
        let quartic = bound_energy(&p, &s).quartic;
        for m in 2..12 {
            assert_relative_eq!(
                compose_p1m(p21, h1, m),
                bound_p(1, Moment::Finite(m), &p, &s).unwrap(),
                max_relative = 1e-12
            );
        }
        for m in 3..12 {
            assert_relative_eq!(
                compose_p0m(p21, quartic, m),
                bound_p(0, Moment::Finite(m), &p, &s).unwrap(),
                max_relative = 1e-12
            );
        }
        let r = ladder_ratio(&p, BoundVariant::LeadingOrder);
        let mut rung = p21;
        for n in 2..8 {
            rung = ladder_step(r, rung, n);
            assert_relative_eq!(
                rung,
                bound_p(n + 1, Moment::Finite(1), &p, &s).unwrap(),
                max_relative = 1e-12
            );
        }
        let q21 = bound_q(2, Moment::Finite(1), &p, &s)
            .unwrap()
            .value()
            .unwrap();
        for m in 3..12 {
            assert_relative_eq!(
                compose_q0m(q21, quartic, m),
                bound_q(0, Moment::Finite(m), &p, &s)
                    .unwrap()
                    .value()
                    .unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn viscous_specialization() {
        let p = DimensionlessParams::new(7.0, 1.0, 0.3).unwrap();
        let got = bound_p(2, Moment::Finite(1), &p, &full()).unwrap();
        let expected = 7.0f64.powf(1.5) * 8.0f64.sqrt() / 0.3f64.sqrt();
        assert_relative_eq!(got, expected, max_relative = 1e-12);
    }

    #[test]
    fn q_limits_and_flags() {
        let p = params();
        let s = lead();
        let (a, act, re) = (p.alpha0, p.activity, p.re_nu);
        assert_relative_eq!(
            bound_q(0, Moment::Infinite, &p, &s)
                .unwrap()
                .value()
                .unwrap(),
            a.powf(0.9) * act.powf(0.2) * re.powf(1.8),
            max_relative = 1e-12
        );
        let big = bound_q(0, Moment::Finite(1_000_000), &p, &s)
            .unwrap()
            .value()
            .unwrap();
        assert_relative_eq!(
            big,
            bound_q(0, Moment::Infinite, &p, &s)
                .unwrap()
                .value()
                .unwrap(),
            max_relative = 1e-4
        );
        assert_eq!(
            bound_q(3, Moment::Finite(1), &p, &s).unwrap(),
            BoundValue::Finite
        );
        assert_eq!(
            bound_q(2, Moment::Finite(4), &p, &s).unwrap(),
            BoundValue::Finite
        );
        assert_eq!(
            bound_q(1, Moment::Finite(2), &p, &s).unwrap(),
            BoundValue::Open
        );
        assert_relative_eq!(
            bound_q(2, Moment::Finite(1), &p, &s)
                .unwrap()
                .value()
                .unwrap(),
            a * re * re
        );
        let f9 = a * re.powf(4.0 / 3.0) * (p.re_beta.powi(2) + re * re).cbrt();
        assert_relative_eq!(
            bound_q(2, Moment::Finite(1), &p, &full())
                .unwrap()
                .value()
                .unwrap(),
            f9,
            max_relative = 1e-12
        );
        assert!(bound_q(0, Moment::Finite(2), &p, &s).is_err());
    }

    #[test]
    fn exponential_bound() {
        let p = DimensionlessParams::new(0.5, 3.0, 2.0).unwrap();
        let s = lead();
        assert_eq!(bound_h1_exponential(4.0, 0.0, &p, &s).unwrap(), 4.0);
        let rate: f64 = 0.5 * (1.0 + 4.0 * 3.0 * 0.0625);
        assert_relative_eq!(
            bound_h1_exponential(4.0, 1.0, &p, &s).unwrap(),
            4.0 * rate.exp(),
            max_relative = 1e-14
        );
        assert!(bound_h1_exponential(4.0, -1.0, &p, &s).is_err());
    }

    fn from_independent(alpha0: f64, re: f64, act: f64) -> DimensionlessParams {
        DimensionlessParams::new(alpha0, re, alpha0 / act).unwrap()
    }

    proptest! {
        #[test]
        fn leading_bounds_are_monotone(
            a in 0.1f64..50.0, re in 1.0f64..1e4, act in 0.05f64..20.0,
            bump in 1.0f64..3.0, which in 0usize..3, n in 0u32..5, m in 1u32..12, inf in proptest::bool::ANY,
        ) {
            let mm = if inf { Moment::Infinite } else { Moment::Finite(m) };
            let base = from_independent(a, re, act);
            let bumped = match which {
                0 => from_independent(a * bump, re, act),
                1 => from_independent(a, re * bump, act),
                _ => from_independent(a, re, act * bump),
            };
            let s = lead();
            if let (Ok(x), Ok(y)) = (bound_p(n, mm, &base, &s), bound_p(n, mm, &bumped, &s)) {
                prop_assert!(y >= x * (1.0 - 1e-12));
            }
            if let (Ok(BoundValue::Value(x)), Ok(BoundValue::Value(y))) = (bound_q(n, mm, &base, &s), bound_q(n, mm, &bumped, &s)) {
                prop_assert!(y >= x * (1.0 - 1e-12));
            }
        }
    }
}
