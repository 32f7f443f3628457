//! Integers extended by plus infinity.
//!
//! Valuations take values in Z ∪ {∞}, with ∞ reserved for the zero
//! element. Addition saturates at infinity and the order places infinity
//! above every finite value, so `min` and `+` implement the tropical
//! semiring directly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// An integer or plus infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtInt {
    Finite(i64),
    Infinity,
}

impl ExtInt {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }

    /// The finite value, or `None` for infinity.
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(n) => Some(n),
            ExtInt::Infinity => None,
        }
    }

    /// The finite value; panics on infinity. For call sites that have
    /// already established finiteness.
    pub fn unwrap_finite(self) -> i64 {
        self.finite().expect("unexpected infinite valuation")
    }
}

impl From<i64> for ExtInt {
    fn from(n: i64) -> Self {
        ExtInt::Finite(n)
    }
}

impl Add for ExtInt {
    type Output = ExtInt;

    fn add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => ExtInt::Finite(a + b),
            _ => ExtInt::Infinity,
        }
    }
}

impl PartialOrd for ExtInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtInt {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => a.cmp(b),
            (ExtInt::Finite(_), ExtInt::Infinity) => Ordering::Less,
            (ExtInt::Infinity, ExtInt::Finite(_)) => Ordering::Greater,
            (ExtInt::Infinity, ExtInt::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Finite(n) => write!(f, "{n}"),
            ExtInt::Infinity => write!(f, "inf"),
        }
    }
}

impl serde::Serialize for ExtInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtInt::Finite(n) => s.serialize_i64(*n),
            ExtInt::Infinity => s.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::ExtInt::{Finite, Infinity};

    #[test]
    fn addition_saturates() {
        assert_eq!(Finite(2) + Finite(-5), Finite(-3));
        assert_eq!(Finite(2) + Infinity, Infinity);
        assert_eq!(Infinity + Infinity, Infinity);
    }

    #[test]
    fn order_places_infinity_on_top() {
        assert!(Finite(i64::MAX) < Infinity);
        assert!(Finite(-1) < Finite(0));
        assert_eq!(Finite(3).min(Infinity), Finite(3));
    }

    #[test]
    fn display() {
        assert_eq!(Finite(-2).to_string(), "-2");
        assert_eq!(Infinity.to_string(), "inf");
    }
}
