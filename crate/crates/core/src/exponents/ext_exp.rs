use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rationals used throughout the engine. `i128` leaves ample headroom
/// for the sums of reciprocals with small denominators met here.
pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// An exponent `p ∈ [1, ∞]` stored as its reciprocal `u = 1/p ∈ [0, 1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtExp {
    u: Q,
}

impl ExtExp {
    pub const INF: ExtExp = ExtExp { u: Ratio::new_raw(0, 1) };
    pub const ONE: ExtExp = ExtExp { u: Ratio::new_raw(1, 1) };
    pub const TWO: ExtExp = ExtExp { u: Ratio::new_raw(1, 2) };

    pub fn from_recip(u: Q) -> Result<Self> {
        if u < Q::zero() || u > Q::one() {
            return Err(Error::InvalidExponent(format!("reciprocal {u} outside [0,1]")));
        }
        Ok(ExtExp { u })
    }

    /// The exponent `num/den`; must be at least one.
    pub fn ratio(num: i128, den: i128) -> Result<Self> {
        if den == 0 || num == 0 {
            return Err(Error::InvalidExponent(format!("{num}/{den}")));
        }
        ExtExp::from_recip(Q::new(den, num))
    }

    pub fn int(p: i128) -> Self {
        ExtExp::ratio(p, 1).expect("integer exponent must be >= 1")
    }

    pub fn u(&self) -> Q {
        self.u
    }

    pub fn is_inf(&self) -> bool {
        self.u.is_zero()
    }

    /// `p` itself, or `None` for `p = ∞`.
    pub fn p(&self) -> Option<Q> {
        (!self.u.is_zero()).then(|| self.u.recip())
    }

    pub fn conj(self) -> Self {
        ExtExp { u: Q::one() - self.u }
    }

    pub fn to_f64(&self) -> f64 {
        match self.p() {
            None => f64::INFINITY,
            Some(p) => *p.numer() as f64 / *p.denom() as f64,
        }
    }

    pub fn recip_f64(&self) -> f64 {
        *self.u.numer() as f64 / *self.u.denom() as f64
    }

    /// Exponent order: `p ≤ q` iff `1/p ≥ 1/q`.
    pub fn le(&self, other: &ExtExp) -> bool {
        self.u >= other.u
    }

    pub fn max(self, other: ExtExp) -> ExtExp {
        if self.u <= other.u { self } else { other }
    }

    pub fn min(self, other: ExtExp) -> ExtExp {
        if self.u >= other.u { self } else { other }
    }
}

pub fn conj(p: ExtExp) -> ExtExp {
    p.conj()
}

impl fmt::Display for ExtExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.p() {
            None => f.write_str("inf"),
            Some(p) if p.is_integer() => write!(f, "{}", p.numer()),
            Some(p) => write!(f, "{}/{}", p.numer(), p.denom()),
        }
    }
}

impl fmt::Debug for ExtExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtExp({self})")
    }
}

impl FromStr for ExtExp {
    type Err = Error;

    /// Accepts `inf`, `∞`, integers, `a/b`, and finite decimals such as `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "inf" | "Inf" | "INF" | "infinity" | "∞") {
            return Ok(ExtExp::INF);
        }
        let p = parse_rational(t).ok_or_else(|| Error::InvalidExponent(format!("cannot parse {s:?}")))?;
        if !p.is_positive() {
            return Err(Error::InvalidExponent(format!("{s:?} is not positive")));
        }
        ExtExp::from_recip(p.recip()).map_err(|_| Error::InvalidExponent(format!("{s:?} is below 1")))
    }
}

fn parse_rational(t: &str) -> Option<Q> {
    if let Some((a, b)) = t.split_once('/') {
        let a: i128 = a.trim().parse().ok()?;
        let b: i128 = b.trim().parse().ok()?;
        return (b != 0).then(|| Q::new(a, b));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) || frac.len() > 18 {
            return None;
        }
        let neg = int.starts_with('-');
        let whole: i128 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let den = 10i128.pow(frac.len() as u32);
        let f: i128 = frac.parse().ok()?;
        let mag = Q::new(whole.abs() * den + f, den);
        return Some(if neg { -mag } else { mag });
    }
    t.parse::<i128>().ok().map(Q::from_integer)
}

impl From<ExtExp> for String {
    fn from(e: ExtExp) -> String {
        e.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates() {
        assert_eq!(conj(ExtExp::ONE), ExtExp::INF);
        assert_eq!(conj(ExtExp::TWO), ExtExp::TWO);
        assert_eq!(conj(ExtExp::ratio(10, 9).unwrap()), ExtExp::int(10));
        assert_eq!(conj(conj(ExtExp::ratio(7, 3).unwrap())), ExtExp::ratio(7, 3).unwrap());
    }

    #[test]
    fn parse_and_print() {
        for s in ["inf", "1", "2", "10/9", "5/3"] {
            let e: ExtExp = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert_eq!("1.5".parse::<ExtExp>().unwrap(), ExtExp::ratio(3, 2).unwrap());
        assert_eq!("∞".parse::<ExtExp>().unwrap(), ExtExp::INF);
        assert!("1/2".parse::<ExtExp>().is_err());
        assert!("0".parse::<ExtExp>().is_err());
        assert!("-3".parse::<ExtExp>().is_err());
        assert!("abc".parse::<ExtExp>().is_err());
    }

    #[test]
    fn exponent_order() {
        let two = ExtExp::TWO;
        assert!(ExtExp::ONE.le(&two) && two.le(&ExtExp::INF));
        assert_eq!(two.max(ExtExp::INF), ExtExp::INF);
        assert_eq!(two.min(ExtExp::ONE), ExtExp::ONE);
        assert_eq!(ExtExp::INF.to_f64(), f64::INFINITY);
        assert_eq!(ExtExp::ratio(3, 2).unwrap().to_f64(), 1.5);
    }
}
