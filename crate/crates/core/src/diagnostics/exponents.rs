use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::{Error, Result};

/// Lebesgue index `m` of an `L^{2m}` norm, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Moment {
    Finite(u32),
    Infinite,
}

impl Moment {
    pub fn as_f64(self) -> f64 {
        match self {
            Moment::Finite(m) => m as f64,
            Moment::Infinite => f64::INFINITY,
        }
    }

    /// `1, 2, …, m_max` followed by `∞`.
    pub fn sweep(m_max: u32) -> Vec<Moment> {
        (1..=m_max)
            .map(Moment::Finite)
            .chain(std::iter::once(Moment::Infinite))
            .collect()
    }
}

impl fmt::Display for Moment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Moment::Finite(m) => write!(f, "{m}"),
            Moment::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Moment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Moment::Infinite),
            t => match t.parse::<u32>() {
                Ok(m) if m >= 1 => Ok(Moment::Finite(m)),
                _ => Err(Error::Config(format!(
                    "moment must be a positive integer or 'inf', got '{s}'"
                ))),
            },
        }
    }
}

/// Scaling exponent `2m / (2m(n+1) − d)`, exact; `1/(n+1)` for `m = ∞`.
pub fn alpha_exponent(n: u32, m: Moment, d: u32) -> Result<Ratio<i64>> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    match m {
        Moment::Infinite => Ok(Ratio::new(1, n as i64 + 1)),
        Moment::Finite(0) => Err(Error::Domain("moment m must be at least 1".into())),
        Moment::Finite(m) => {
            let two_m = 2 * m as i64;
            let den = two_m * (n as i64 + 1) - d as i64;
            if den <= 0 {
                return Err(Error::Domain(format!(
                    "exponent undefined for n={n}, m={m}, d={d}: 2m(n+1) - d = {den}"
                )));
            }
            Ok(Ratio::new(two_m, den))
        }
    }
}

pub(crate) fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The power `(4 − d)·α_{n,m,d}` applied to a raw norm: `2α` in two
/// dimensions, `α` in three.
pub fn weight_exponent(n: u32, m: Moment, d: u32) -> Result<Ratio<i64>> {
    if !(2..=3).contains(&d) {
        return Err(Error::Domain(format!(
            "weighted norms need d = 2 or 3, got {d}"
        )));
    }
    Ok(alpha_exponent(n, m, d)? * (4 - d as i64))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn r(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    #[test]
    fn known_values() {
        assert_eq!(alpha_exponent(1, Moment::Finite(1), 3).unwrap(), r(2, 1));
        assert_eq!(alpha_exponent(1, Moment::Finite(1), 2).unwrap(), r(1, 1));
        assert_eq!(alpha_exponent(3, Moment::Infinite, 2).unwrap(), r(1, 4));
        assert!(alpha_exponent(0, Moment::Finite(1), 2).is_err());
        assert!(alpha_exponent(0, Moment::Finite(1), 3).is_err());
        assert_eq!(alpha_exponent(0, Moment::Finite(2), 3).unwrap(), r(4, 1));
    }

    #[test]
    fn moment_parsing() {
        assert_eq!("inf".parse::<Moment>().unwrap(), Moment::Infinite);
        assert_eq!("3".parse::<Moment>().unwrap(), Moment::Finite(3));
        assert!("0".parse::<Moment>().is_err());
        assert_eq!(
            Moment::sweep(2),
            vec![Moment::Finite(1), Moment::Finite(2), Moment::Infinite]
        );
    }

    proptest! {
        #[test]
        fn two_dimensional_forms(n in 1u32..20, m in 1u32..40) {
            prop_assert_eq!(alpha_exponent(n, Moment::Finite(1), 2).unwrap(), r(1, n as i64));
            prop_assert_eq!(
                alpha_exponent(1, Moment::Finite(m), 2).unwrap(),
                r(m as i64, 2 * m as i64 - 1)
            );
        }

        #[test]
        fn approaches_the_infinite_limit(n in 0u32..10, d in 2u32..4) {
            let lim = ratio_f64(alpha_exponent(n, Moment::Infinite, d).unwrap());
            let big = ratio_f64(alpha_exponent(n, Moment::Finite(100_000), d).unwrap());
            prop_assert!((big - lim).abs() < 1e-4);
        }
    }
}
