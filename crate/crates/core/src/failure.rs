//! Failure types and compact sets of them.

use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// The closed failure type system. Declaration order is the canonical
/// ordering used everywhere failure types are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FailureType {
    FalsePositive,
    FalseNegative,
    TooHigh,
    TooLow,
    Omission,
    Commission,
    TooEarly,
    TooLate,
}

impl FailureType {
    pub const ALL: [FailureType; 8] = [
        FailureType::FalsePositive,
        FailureType::FalseNegative,
        FailureType::TooHigh,
        FailureType::TooLow,
        FailureType::Omission,
        FailureType::Commission,
        FailureType::TooEarly,
        FailureType::TooLate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FailureType::FalsePositive => "false-positive",
            FailureType::FalseNegative => "false-negative",
            FailureType::TooHigh => "too-high",
            FailureType::TooLow => "too-low",
            FailureType::Omission => "omission",
            FailureType::Commission => "commission",
            FailureType::TooEarly => "too-early",
            FailureType::TooLate => "too-late",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for FailureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown failure type `{0}`")]
pub struct UnknownFailureType(pub alloc::string::String);

impl FromStr for FailureType {
    type Err = UnknownFailureType;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FailureType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownFailureType(s.into()))
    }
}

/// A subset of the eight failure types, iterated in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FailureTypeSet(u8);

impl FailureTypeSet {
    pub const EMPTY: FailureTypeSet = FailureTypeSet(0);

    /// Failure types of Boolean connectors.
    pub const BOOLEAN: FailureTypeSet = FailureTypeSet(0b1111_0011);

    /// Failure types of Integer, Float and Time connectors.
    pub const NUMERIC: FailureTypeSet = FailureTypeSet(0b1111_1100);

    pub fn from_types<I: IntoIterator<Item = FailureType>>(types: I) -> Self {
        types.into_iter().fold(Self::EMPTY, |s, t| s.with(t))
    }

    #[must_use]
    pub fn with(self, t: FailureType) -> Self {
        FailureTypeSet(self.0 | t.bit())
    }

    pub fn contains(self, t: FailureType) -> bool {
        self.0 & t.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = FailureType> {
        FailureType::ALL
            .into_iter()
            .filter(move |t| self.contains(*t))
    }
}

impl FromIterator<FailureType> for FailureTypeSet {
    fn from_iter<I: IntoIterator<Item = FailureType>>(iter: I) -> Self {
        Self::from_types(iter)
    }
}

impl fmt::Display for FailureTypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(t.as_str())?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FailureType::*;

    #[test]
    fn names_round_trip() {
        for t in FailureType::ALL {
            assert_eq!(t.as_str().parse::<FailureType>().unwrap(), t);
        }
        assert!("false-late".parse::<FailureType>().is_err());
    }

    #[test]
    fn builtin_sets_match_connector_categories() {
        let boolean: alloc::vec::Vec<_> = FailureTypeSet::BOOLEAN.iter().collect();
        assert_eq!(
            boolean,
            [
                FalsePositive,
                FalseNegative,
                Omission,
                Commission,
                TooEarly,
                TooLate
            ]
        );
        let numeric: alloc::vec::Vec<_> = FailureTypeSet::NUMERIC.iter().collect();
        assert_eq!(
            numeric,
            [TooHigh, TooLow, Omission, Commission, TooEarly, TooLate]
        );
    }

    #[test]
    fn set_operations() {
        let s = FailureTypeSet::from_types([Omission, Commission]);
        assert_eq!(s.len(), 2);
        assert!(s.contains(Omission));
        assert!(!s.contains(TooLate));
        assert!(FailureTypeSet::EMPTY.is_empty());
        assert_eq!(alloc::format!("{s}"), "{omission, commission}");
    }
}
