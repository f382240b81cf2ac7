//! Scalar dual numbers `a = a_s + a_d ε` with `ε² = 0`.
//!
//! Dual numbers carry the lexicographic total order on `(standard, dual)`:
//! `a > b` iff `a_s > b_s`, or `a_s = b_s` and `a_d > b_d`. Both parts are
//! required to be finite; the order is meaningless once a NaN slips in.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real dual number `standard + dual·ε`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DualNumber {
    pub standard: f64,
    pub dual: f64,
}

impl DualNumber {
    pub const ZERO: DualNumber = DualNumber { standard: 0.0, dual: 0.0 };
    pub const ONE: DualNumber = DualNumber { standard: 1.0, dual: 0.0 };
    pub const EPSILON: DualNumber = DualNumber { standard: 0.0, dual: 1.0 };

    /// Builds a dual number, panicking on NaN or infinite parts.
    ///
    /// Use [`DualNumber::try_new`] for untrusted input.
    pub fn new(standard: f64, dual: f64) -> Self {
        match Self::try_new(standard, dual) {
            Ok(d) => d,
            Err(e) => panic!("DualNumber::new: {e}"),
        }
    }

    pub fn try_new(standard: f64, dual: f64) -> Result<Self> {
        if !standard.is_finite() {
            return Err(Error::NonFinite(standard));
        }
        if !dual.is_finite() {
            return Err(Error::NonFinite(dual));
        }
        Ok(DualNumber { standard, dual })
    }

    pub fn from_real(standard: f64) -> Self {
        Self::new(standard, 0.0)
    }

    /// Nonzero standard part.
    pub fn is_appreciable(&self) -> bool {
        self.standard != 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.standard.is_finite() && self.dual.is_finite()
    }

    /// Dual-number quotient `self / rhs`.
    ///
    /// With `rhs_s ≠ 0` this is the usual first-order quotient. When both
    /// standard parts vanish the quotient is `a_d / b_d + c ε` for an
    /// arbitrary `c`; this implementation fixes `c = 0`.
    pub fn checked_div(self, rhs: DualNumber) -> Result<DualNumber> {
        if rhs.standard != 0.0 {
            let q = self.standard / rhs.standard;
            Ok(DualNumber {
                standard: q,
                dual: self.dual / rhs.standard - q * (rhs.dual / rhs.standard),
            })
        } else if self.standard == 0.0 && rhs.dual != 0.0 {
            Ok(DualNumber { standard: self.dual / rhs.dual, dual: 0.0 })
        } else {
            Err(Error::DivisionUndefined)
        }
    }

    /// Lexicographic comparison on `(standard, dual)`.
    pub fn compare(&self, other: &DualNumber) -> Ordering {
        fn cmp_f64(a: f64, b: f64) -> Ordering {
            // Finite by construction; NaN would be a caller bug.
            a.partial_cmp(&b).expect("DualNumber holds NaN")
        }
        cmp_f64(self.standard, other.standard).then_with(|| cmp_f64(self.dual, other.dual))
    }

    /// Dual magnitude: `|a_s| + sgn(a_s) a_d ε` if appreciable, else `|a_d| ε`.
    pub fn magnitude(self) -> DualNumber {
        if self.standard != 0.0 {
            DualNumber {
                standard: self.standard.abs(),
                dual: self.standard.signum() * self.dual,
            }
        } else {
            DualNumber { standard: 0.0, dual: self.dual.abs() }
        }
    }

    /// `√(a_s² + a_d²)`, the F^R-norm of a dual number viewed as a 1×1 matrix.
    pub fn frn_norm(self) -> f64 {
        self.standard.hypot(self.dual)
    }

    pub fn scale(self, k: f64) -> DualNumber {
        DualNumber { standard: self.standard * k, dual: self.dual * k }
    }

    pub fn min(self, other: DualNumber) -> DualNumber {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: DualNumber) -> DualNumber {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Eq for DualNumber {}

impl PartialOrd for DualNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DualNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl From<f64> for DualNumber {
    fn from(x: f64) -> Self {
        DualNumber::from_real(x)
    }
}

impl Add for DualNumber {
    type Output = DualNumber;
    fn add(self, rhs: DualNumber) -> DualNumber {
        DualNumber {
            standard: self.standard + rhs.standard,
            dual: self.dual + rhs.dual,
        }
    }
}

impl AddAssign for DualNumber {
    fn add_assign(&mut self, rhs: DualNumber) {
        *self = *self + rhs;
    }
}

impl Sub for DualNumber {
    type Output = DualNumber;
    fn sub(self, rhs: DualNumber) -> DualNumber {
        DualNumber {
            standard: self.standard - rhs.standard,
            dual: self.dual - rhs.dual,
        }
    }
}

impl SubAssign for DualNumber {
    fn sub_assign(&mut self, rhs: DualNumber) {
        *self = *self - rhs;
    }
}

impl Neg for DualNumber {
    type Output = DualNumber;
    fn neg(self) -> DualNumber {
        DualNumber { standard: -self.standard, dual: -self.dual }
    }
}

impl Mul for DualNumber {
    type Output = DualNumber;
    fn mul(self, rhs: DualNumber) -> DualNumber {
        DualNumber {
            standard: self.standard * rhs.standard,
            dual: self.standard * rhs.dual + self.dual * rhs.standard,
        }
    }
}

impl std::iter::Sum for DualNumber {
    fn sum<I: Iterator<Item = DualNumber>>(iter: I) -> Self {
        iter.fold(DualNumber::ZERO, |acc, x| acc + x)
    }
}

/// Renders as `a+be`, honouring the formatter precision (`{:.2}` gives `3.00+1.61e`).
impl fmt::Display for DualNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.dual.is_sign_negative() { '-' } else { '+' };
        match f.precision() {
            Some(p) => write!(f, "{:.*}{}{:.*}e", p, self.standard, sign, p, self.dual.abs()),
            None => write!(f, "{}{}{}e", self.standard, sign, self.dual.abs()),
        }
    }
}

/// Parses `a+be`, `a-be`, `a+bε` or a bare real `a`.
impl FromStr for DualNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("invalid dual number '{s}'"));
        let body = if let Some(b) = t.strip_suffix('ε') {
            Some(b)
        } else {
            t.strip_suffix('e').or_else(|| t.strip_suffix('E'))
        };

        if let Some(body) = body {
            // Split at the last sign that is neither leading nor an exponent sign.
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
            if let Some(i) = split {
                let standard: f64 = body[..i].parse().map_err(|_| bad())?;
                let dual: f64 = body[i..].trim_start_matches('+').parse().map_err(|_| bad())?;
                return DualNumber::try_new(standard, dual);
            }
            // A pure infinitesimal such as "2e" or "-1.5ε".
            if let Ok(dual) = body.parse::<f64>() {
                return DualNumber::try_new(0.0, dual);
            }
            // Fall through: "1e" is not a number, but "1e5"-style reals never reach here.
        }
        let standard: f64 = t.parse().map_err(|_| bad())?;
        DualNumber::try_new(standard, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: f64, x: f64) -> DualNumber {
        DualNumber::new(s, x)
    }

    #[test]
    fn add_examples() {
        assert_eq!(d(1.0, 2.0) + d(3.0, 4.0), d(4.0, 6.0));
        assert_eq!(d(0.0, 0.0) + d(5.0, -1.0), d(5.0, -1.0));
        assert_eq!(d(2.0, 3.0) + d(-2.0, -3.0), d(0.0, 0.0));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(d(1.0, 2.0) * d(3.0, 4.0), d(3.0, 10.0));
        assert_eq!(d(0.0, 1.0) * d(0.0, 1.0), d(0.0, 0.0));
        assert_eq!(d(1.0, 0.0) * d(-7.5, 0.25), d(-7.5, 0.25));
    }

    #[test]
    fn div_examples() {
        assert_eq!(d(3.0, 10.0).checked_div(d(3.0, 4.0)).unwrap(), d(1.0, 2.0));
        assert_eq!(d(0.0, 2.0).checked_div(d(0.0, 4.0)).unwrap(), d(0.5, 0.0));
        assert_eq!(d(1.0, 0.0).checked_div(d(0.0, 5.0)), Err(Error::DivisionUndefined));
        assert_eq!(d(0.0, 1.0).checked_div(d(0.0, 0.0)), Err(Error::DivisionUndefined));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(d(1.0, -9.0).compare(&d(0.0, 100.0)), Ordering::Greater);
        assert_eq!(d(2.0, 1.0).compare(&d(2.0, 3.0)), Ordering::Less);
        assert_eq!(d(2.0, 3.0).compare(&d(2.0, 3.0)), Ordering::Equal);
        assert_eq!(d(0.0, 0.0).compare(&d(-0.0, 0.0)), Ordering::Equal);
    }

    #[test]
    fn magnitude_examples() {
        assert_eq!(d(-2.0, 3.0).magnitude(), d(2.0, -3.0));
        assert_eq!(d(0.0, -4.0).magnitude(), d(0.0, 4.0));
        assert_eq!(d(5.0, 0.0).magnitude(), d(5.0, 0.0));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(DualNumber::try_new(f64::NAN, 0.0), Err(Error::NonFinite(_))));
        assert!(matches!(DualNumber::try_new(0.0, f64::INFINITY), Err(Error::NonFinite(_))));
    }

    #[test]
    #[should_panic]
    fn new_panics_on_nan() {
        let _ = DualNumber::new(0.0, f64::NAN);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(format!("{:.2}", d(3.0, 1.612)), "3.00+1.61e");
        assert_eq!(format!("{:.2}", d(5999.84, -0.33)), "5999.84-0.33e");
        assert_eq!("3.00+1.61e".parse::<DualNumber>().unwrap(), d(3.0, 1.61));
        assert_eq!("5999.84-0.33ε".parse::<DualNumber>().unwrap(), d(5999.84, -0.33));
        assert_eq!("1e-3+2.5e-4e".parse::<DualNumber>().unwrap(), d(1e-3, 2.5e-4));
        assert_eq!("-1.5-2e".parse::<DualNumber>().unwrap(), d(-1.5, -2.0));
        assert_eq!("2.5".parse::<DualNumber>().unwrap(), d(2.5, 0.0));
        assert_eq!("1e5".parse::<DualNumber>().unwrap(), d(1e5, 0.0));
        assert_eq!("4e".parse::<DualNumber>().unwrap(), d(0.0, 4.0));
        assert!("abc".parse::<DualNumber>().is_err());
        assert!("1+xe".parse::<DualNumber>().is_err());
    }

    fn small() -> impl Strategy<Value = f64> {
        -1e3..1e3f64
    }

    fn dual() -> impl Strategy<Value = DualNumber> {
        (small(), small()).prop_map(|(s, x)| DualNumber::new(s, x))
    }

    fn close(a: DualNumber, b: DualNumber) -> bool {
        let scale = 1.0 + a.standard.abs().max(a.dual.abs());
        (a.standard - b.standard).abs() <= 1e-9 * scale && (a.dual - b.dual).abs() <= 1e-9 * scale
    }

    proptest! {
        #[test]
        fn mul_commutative(a in dual(), b in dual()) {
            prop_assert_eq!(a * b, b * a);
        }

        #[test]
        fn mul_associative(a in dual(), b in dual(), c in dual()) {
            prop_assert!(close((a * b) * c, a * (b * c)));
        }

        #[test]
        fn distributive(a in dual(), b in dual(), c in dual()) {
            prop_assert!(close(a * (b + c), a * b + a * c));
        }

        #[test]
        fn epsilon_nilpotent(x in small(), y in small()) {
            prop_assert_eq!(DualNumber::new(0.0, x) * DualNumber::new(0.0, y), DualNumber::ZERO);
        }

        #[test]
        fn div_inverts_mul(a in dual(), bs in prop_oneof![-1e3..-1e-2f64, 1e-2..1e3f64], bd in small()) {
            let b = DualNumber::new(bs, bd);
            let q = (a * b).checked_div(b).unwrap();
            let tol = 1e-9 * (1.0 + a.standard.abs() + a.dual.abs()) * (1.0 + (bd / bs).abs());
            prop_assert!((q.standard - a.standard).abs() <= tol);
            prop_assert!((q.dual - a.dual).abs() <= tol);
        }

        #[test]
        fn total_order(a in dual(), b in dual(), c in dual()) {
            // antisymmetry and totality
            prop_assert_eq!(a.compare(&b), b.compare(&a).reverse());
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
        }

        #[test]
        fn magnitude_nonnegative(a in dual()) {
            prop_assert!(a.magnitude() >= DualNumber::ZERO);
        }

        #[test]
        fn display_parse_roundtrip(a in dual()) {
            let back: DualNumber = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
