//! Nullity / deficiency / index bookkeeping shared by the finite-dimensional
//! and banded modules.

use serde::{Deserialize, Serialize};

/// A nonnegative count that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Card {
    Finite(usize),
    #[serde(with = "inf_marker")]
    Infinite,
}

/// A signed index that may be +inf or -inf, or undefined when both nullity
/// and deficiency are infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexValue {
    Finite(i64),
    #[serde(with = "plus_inf_marker")]
    PlusInfinity,
    #[serde(with = "minus_inf_marker")]
    MinusInfinity,
    #[serde(with = "undef_marker")]
    Undefined,
}

macro_rules! marker_mod {
    ($name:ident, $lit:literal) => {
        mod $name {
            use serde::{de, Deserialize, Deserializer, Serializer};
            pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str($lit)
            }
            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
                let v = String::deserialize(d)?;
                if v == $lit {
                    Ok(())
                } else {
                    Err(de::Error::custom(concat!("expected \"", $lit, "\"")))
                }
            }
        }
    };
}

marker_mod!(inf_marker, "inf");
marker_mod!(plus_inf_marker, "+inf");
marker_mod!(minus_inf_marker, "-inf");
marker_mod!(undef_marker, "undefined");

/// Semi-Fredholm classification of a relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FredholmClass {
    /// Fredholm: closed range, alpha and beta both finite.
    Phi,
    /// Upper semi-Fredholm only.
    PhiPlusOnly,
    /// Lower semi-Fredholm only.
    PhiMinusOnly,
    NotSemiFredholm,
}

/// The triple (alpha, beta, kappa) plus closed-range flag and semi-Fredholm
/// class at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FredholmData {
    pub alpha: Card,
    pub beta: Card,
    pub kappa: IndexValue,
    pub closed_range: bool,
    pub class: FredholmClass,
}

impl FredholmData {
    /// Finite-dimensional constructor: everything finite, range closed.
    pub fn finite(alpha: usize, beta: usize) -> Self {
        FredholmData {
            alpha: Card::Finite(alpha),
            beta: Card::Finite(beta),
            kappa: IndexValue::Finite(alpha as i64 - beta as i64),
            closed_range: true,
            class: FredholmClass::Phi,
        }
    }

    /// kappa = alpha - beta with the signed-infinity conventions.
    pub fn index_of(alpha: Card, beta: Card) -> IndexValue {
        match (alpha, beta) {
            (Card::Finite(a), Card::Finite(b)) => IndexValue::Finite(a as i64 - b as i64),
            (Card::Infinite, Card::Finite(_)) => IndexValue::PlusInfinity,
            (Card::Finite(_), Card::Infinite) => IndexValue::MinusInfinity,
            (Card::Infinite, Card::Infinite) => IndexValue::Undefined,
        }
    }

    pub fn kappa_finite(&self) -> Option<i64> {
        match self.kappa {
            IndexValue::Finite(k) => Some(k),
            _ => None,
        }
    }

    pub fn alpha_finite(&self) -> Option<usize> {
        match self.alpha {
            Card::Finite(a) => Some(a),
            Card::Infinite => None,
        }
    }

    pub fn beta_finite(&self) -> Option<usize> {
        match self.beta {
            Card::Finite(b) => Some(b),
            Card::Infinite => None,
        }
    }

    pub fn is_semi_fredholm(&self) -> bool {
        self.class != FredholmClass::NotSemiFredholm
    }

    pub fn is_fredholm(&self) -> bool {
        self.class == FredholmClass::Phi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_conventions() {
        assert_eq!(
            FredholmData::index_of(Card::Finite(3), Card::Finite(1)),
            IndexValue::Finite(2)
        );
        assert_eq!(
            FredholmData::index_of(Card::Infinite, Card::Finite(0)),
            IndexValue::PlusInfinity
        );
        assert_eq!(
            FredholmData::index_of(Card::Finite(0), Card::Infinite),
            IndexValue::MinusInfinity
        );
        assert_eq!(
            FredholmData::index_of(Card::Infinite, Card::Infinite),
            IndexValue::Undefined
        );
    }

    #[test]
    fn serde_markers() {
        let d = FredholmData {
            alpha: Card::Infinite,
            beta: Card::Finite(2),
            kappa: IndexValue::PlusInfinity,
            closed_range: false,
            class: FredholmClass::NotSemiFredholm,
        };
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"inf\"") && s.contains("\"+inf\""));
        let back: FredholmData = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
