//! Real numbers extended by `-inf` and `+inf`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A value in `{-inf} ∪ ℝ ∪ {+inf}`. NaN is not representable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedReal(f64);

impl ExtendedReal {
    pub const NEG_INFINITY: ExtendedReal = ExtendedReal(f64::NEG_INFINITY);
    pub const POS_INFINITY: ExtendedReal = ExtendedReal(f64::INFINITY);
    pub const ZERO: ExtendedReal = ExtendedReal(0.0);

    /// Panics on NaN.
    pub fn new(v: f64) -> Self {
        assert!(!v.is_nan(), "ExtendedReal cannot hold NaN");
        ExtendedReal(v)
    }

    pub fn try_new(v: f64) -> Option<Self> {
        (!v.is_nan()).then_some(ExtendedReal(v))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_pos_inf(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `self - other`, with equal infinities giving 0.
    pub fn gap(self, other: Self) -> f64 {
        if self.0 == other.0 {
            0.0
        } else {
            self.0 - other.0
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "-inf" => Some(Self::NEG_INFINITY),
            "+inf" | "inf" => Some(Self::POS_INFINITY),
            other => other.parse::<f64>().ok().and_then(Self::try_new),
        }
    }
}

impl Eq for ExtendedReal {}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        // -0.0 and 0.0 compare equal, unlike total_cmp.
        self.0.partial_cmp(&other.0).expect("no NaN")
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        ExtendedReal::new(v)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::format_f64(self.0))
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::io::serialize_f64(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => ExtendedReal::try_new(v).ok_or_else(|| serde::de::Error::custom("NaN")),
            Repr::Text(t) => ExtendedReal::parse(&t)
                .ok_or_else(|| serde::de::Error::custom(format!("not an extended real: {t}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_gap() {
        let a = ExtendedReal::NEG_INFINITY;
        let b = ExtendedReal::new(0.5);
        let c = ExtendedReal::POS_INFINITY;
        assert!(a < b && b < c);
        assert_eq!(a.max(b), b);
        assert_eq!(c.min(b), b);
        assert_eq!(a.gap(a), 0.0);
        assert_eq!(c.gap(b), f64::INFINITY);
        assert_eq!(ExtendedReal::new(-0.0), ExtendedReal::ZERO);
    }

    #[test]
    fn text_round_trip() {
        for v in [ExtendedReal::NEG_INFINITY, ExtendedReal::POS_INFINITY, ExtendedReal::new(0.25)] {
            assert_eq!(ExtendedReal::parse(&v.to_string()), Some(v));
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(serde_json::from_str::<ExtendedReal>(&json).unwrap(), v);
        }
        assert_eq!(ExtendedReal::parse("nan"), None);
    }
}
