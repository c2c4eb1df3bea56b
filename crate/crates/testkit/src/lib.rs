//! Fixtures, reference oracles and random instances shared by the test suites.

pub mod fixture;
pub mod oracle;
pub mod random;
