use std::fmt;

use num_rational::Ratio;

use crate::{Error, Result};

/// A Lebesgue index `p` in `(1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpIndex {
    Finite(Ratio<i64>),
    Infinite,
}

impl LpIndex {
    pub fn int(p: i64) -> Self {
        LpIndex::Finite(Ratio::from_integer(p))
    }

    fn reciprocal(self) -> Result<Ratio<i64>> {
        match self {
            LpIndex::Infinite => Ok(Ratio::from_integer(0)),
            LpIndex::Finite(p) if p > Ratio::from_integer(1) => Ok(p.recip()),
            LpIndex::Finite(p) => Err(Error::Domain(format!(
                "Lebesgue index must exceed 1, got {p}"
            ))),
        }
    }
}

impl fmt::Display for LpIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpIndex::Finite(p) => write!(f, "{p}"),
            LpIndex::Infinite => f.write_str("inf"),
        }
    }
}

/// Interpolation exponent `a` in `‖∇ʲu‖_p ≤ c‖∇ⁿu‖_r^a ‖u‖_q^{1−a}`, from
/// `1/p = j/d + a(1/r − n/d) + (1−a)/q`; `a` must lie in `[j/n, 1)`.
pub fn gn_exponent(
    j: u32,
    n: u32,
    p: LpIndex,
    r: LpIndex,
    q: LpIndex,
    d: u32,
) -> Result<Ratio<i64>> {
    gn_exponent_with_base(j, n, 0, p, r, q, d)
}

/// As [`gn_exponent`] with the base norm taken on `k` derivatives,
/// `‖∇ᵏu‖_q`, which covers Agmon-type inequalities; the admissible range
/// becomes `[max(0, (j−k)/(n−k)), 1)`.
pub fn gn_exponent_with_base(
    j: u32,
    n: u32,
    k: u32,
    p: LpIndex,
    r: LpIndex,
    q: LpIndex,
    d: u32,
) -> Result<Ratio<i64>> {
    if j >= n || k >= n || d == 0 {
        return Err(Error::Domain(format!(
            "need j < n and k < n with d > 0, got j={j}, n={n}, k={k}, d={d}"
        )));
    }
    let dd = Ratio::from_integer(d as i64);
    let frac = |x: u32| Ratio::from_integer(x as i64) / dd;
    let (ip, ir, iq) = (p.reciprocal()?, r.reciprocal()?, q.reciprocal()?);
    let base = iq - frac(k);
    let num = ip - frac(j) - base;
    let den = ir - frac(n) - base;
    if den == Ratio::from_integer(0) {
        return Err(Error::Domain(
            "interpolation exponent is undetermined".into(),
        ));
    }
    let a = num / den;
    let lower = std::cmp::max(
        Ratio::from_integer(0),
        Ratio::new(j as i64 - k as i64, n as i64 - k as i64),
    );
    if a < lower || a >= Ratio::from_integer(1) {
        return Err(Error::Domain(format!(
            "no admissible exponent: a = {a} is outside [{lower}, 1)"
        )));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn r(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    #[test]
    fn classical_cases() {
        use LpIndex::*;
        assert_eq!(
            gn_exponent(0, 1, LpIndex::int(6), LpIndex::int(2), LpIndex::int(4), 2).unwrap(),
            r(1, 3)
        );
        for m in 3..20i64 {
            assert_eq!(
                gn_exponent(
                    0,
                    2,
                    LpIndex::int(2 * m),
                    LpIndex::int(2),
                    LpIndex::int(4),
                    2
                )
                .unwrap(),
                r(m - 2, 3 * m)
            );
            assert_eq!(
                gn_exponent(
                    0,
                    2,
                    LpIndex::int(2 * m),
                    LpIndex::int(2),
                    LpIndex::int(4),
                    3
                )
                .unwrap(),
                r(3 * (m - 2), 5 * m)
            );
        }
        for n in 2..10u32 {
            assert_eq!(
                gn_exponent_with_base(0, n, 1, Infinite, LpIndex::int(2), LpIndex::int(2), 3)
                    .unwrap(),
                r(1, 2 * (n as i64 - 1))
            );
        }
    }

    #[test]
    fn rejects_inadmissible() {
        assert!(gn_exponent(1, 1, LpIndex::int(2), LpIndex::int(2), LpIndex::int(2), 2).is_err());
        // p = 2 from q = 4 would need a < 0
        assert!(gn_exponent(0, 1, LpIndex::int(2), LpIndex::int(2), LpIndex::int(4), 2).is_err());
        assert!(gn_exponent(0, 1, LpIndex::int(1), LpIndex::int(2), LpIndex::int(4), 2).is_err());
    }

    proptest! {
        #[test]
        fn result_is_admissible_or_error(
            j in 0u32..3, dn in 1u32..4, p in 2i64..30, rr in 2i64..30, q in 2i64..30, d in 1u32..4,
            pinf in proptest::bool::ANY,
        ) {
            let n = j + dn;
            let pi = if pinf { LpIndex::Infinite } else { LpIndex::int(p) };
            if let Ok(a) = gn_exponent(j, n, pi, LpIndex::int(rr), LpIndex::int(q), d) {
                prop_assert!(a >= Ratio::new(j as i64, n as i64));
                prop_assert!(a < Ratio::from_integer(1));
            }
        }
    }
}
