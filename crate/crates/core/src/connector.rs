//! Connector types and their mapping onto failure types.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::failure::FailureTypeSet;

/// Category a connector type belongs to. Categories select the row of the
/// connector-type to failure-type mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConnectorCategory {
    Boolean,
    Numeric,
    Time,
}

impl ConnectorCategory {
    pub fn failure_types(self) -> FailureTypeSet {
        match self {
            ConnectorCategory::Boolean => FailureTypeSet::BOOLEAN,
            ConnectorCategory::Numeric | ConnectorCategory::Time => FailureTypeSet::NUMERIC,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConnectorCategory::Boolean => "boolean",
            ConnectorCategory::Numeric => "numeric",
            ConnectorCategory::Time => "time",
        }
    }
}

impl FromStr for ConnectorCategory {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "boolean" => Ok(ConnectorCategory::Boolean),
            "numeric" => Ok(ConnectorCategory::Numeric),
            "time" => Ok(ConnectorCategory::Time),
            _ => Err(()),
        }
    }
}

/// Declaration of one connector type: either a category or an explicit
/// subset of the failure types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConnectorTypeDef {
    Category(ConnectorCategory),
    Custom(FailureTypeSet),
}

impl ConnectorTypeDef {
    pub fn failure_types(self) -> FailureTypeSet {
        match self {
            ConnectorTypeDef::Category(c) => c.failure_types(),
            ConnectorTypeDef::Custom(set) => set,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown connector type `{0}`")]
pub struct UnknownConnectorType(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeclareError {
    #[error("connector type `{0}` declares an empty failure-type set")]
    Empty(String),
    #[error("connector type `{name}` is declared twice with different failure types")]
    Conflict { name: String },
}

/// Maps connector-type names onto their failure-type sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConnectorTypeTable {
    entries: BTreeMap<String, ConnectorTypeDef>,
}

impl ConnectorTypeTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table preloaded with `Boolean`, `Integer`, `Float` and `Time`.
    pub fn with_builtins() -> Self {
        let mut table = Self::new();
        for (name, cat) in [
            ("Boolean", ConnectorCategory::Boolean),
            ("Integer", ConnectorCategory::Numeric),
            ("Float", ConnectorCategory::Numeric),
            ("Time", ConnectorCategory::Time),
        ] {
            table
                .entries
                .insert(name.into(), ConnectorTypeDef::Category(cat));
        }
        table
    }

    /// Declares `name`. Redeclaring with an identical failure-type set is a
    /// no-op; anything else is a conflict.
    pub fn declare(
        &mut self,
        name: impl Into<String>,
        def: ConnectorTypeDef,
    ) -> Result<(), DeclareError> {
        let name = name.into();
        if def.failure_types().is_empty() {
            return Err(DeclareError::Empty(name));
        }
        match self.entries.get(&name) {
            Some(existing) if existing.failure_types() != def.failure_types() => {
                Err(DeclareError::Conflict { name })
            }
            Some(_) => Ok(()),
            None => {
                self.entries.insert(name, def);
                Ok(())
            }
        }
    }

    pub fn merge(&mut self, other: &ConnectorTypeTable) -> Result<(), DeclareError> {
        for (name, def) in &other.entries {
            self.declare(name.clone(), *def)?;
        }
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn get(&self, name: &str) -> Option<ConnectorTypeDef> {
        self.entries.get(name).copied()
    }

    /// The failure types a connector of type `name` can exhibit.
    pub fn map(&self, name: &str) -> Result<FailureTypeSet, UnknownConnectorType> {
        self.entries
            .get(name)
            .map(|d| d.failure_types())
            .ok_or_else(|| UnknownConnectorType(name.into()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, ConnectorTypeDef)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Free-function form of [`ConnectorTypeTable::map`].
pub fn map_connector_type(
    table: &ConnectorTypeTable,
    cty: &str,
) -> Result<FailureTypeSet, UnknownConnectorType> {
    table.map(cty)
}

impl fmt::Display for ConnectorTypeDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnectorTypeDef::Category(c) => f.write_str(c.as_str()),
            ConnectorTypeDef::Custom(set) => write!(f, "{set}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::failure::FailureType::*;

    fn vendor_table() -> ConnectorTypeTable {
        let mut t = ConnectorTypeTable::new();
        t.declare("Bl", ConnectorTypeDef::Category(ConnectorCategory::Boolean))
            .unwrap();
        t.declare("GN", ConnectorTypeDef::Category(ConnectorCategory::Numeric))
            .unwrap();
        t
    }

    #[test]
    fn boolean_connector_maps_to_boolean_row() {
        let set = map_connector_type(&vendor_table(), "Bl").unwrap();
        assert_eq!(
            set,
            FailureTypeSet::from_types([
                FalsePositive,
                FalseNegative,
                Omission,
                Commission,
                TooEarly,
                TooLate
            ])
        );
    }

    #[test]
    fn float_connector_maps_to_numeric_row() {
        let set = map_connector_type(&vendor_table(), "GN").unwrap();
        assert_eq!(
            set,
            FailureTypeSet::from_types([TooHigh, TooLow, Omission, Commission, TooEarly, TooLate])
        );
    }

    #[test]
    fn undeclared_name_is_unknown() {
        assert_eq!(
            map_connector_type(&vendor_table(), "XY"),
            Err(UnknownConnectorType("XY".into()))
        );
    }

    #[test]
    fn builtins_cover_table_rows() {
        let t = ConnectorTypeTable::with_builtins();
        assert_eq!(t.map("Boolean").unwrap(), FailureTypeSet::BOOLEAN);
        for n in ["Integer", "Float", "Time"] {
            assert_eq!(t.map(n).unwrap(), FailureTypeSet::NUMERIC);
        }
    }

    #[test]
    fn declare_rejects_conflicts_and_empty_sets() {
        let mut t = vendor_table();
        assert!(t
            .declare("Bl", ConnectorTypeDef::Custom(FailureTypeSet::BOOLEAN))
            .is_ok());
        assert!(matches!(
            t.declare("Bl", ConnectorTypeDef::Category(ConnectorCategory::Numeric)),
            Err(DeclareError::Conflict { .. })
        ));
        assert!(matches!(
            t.declare("E", ConnectorTypeDef::Custom(FailureTypeSet::EMPTY)),
            Err(DeclareError::Empty(_))
        ));
    }
}
