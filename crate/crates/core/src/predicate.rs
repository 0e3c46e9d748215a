//! The sixteen binary boolean predicates.
//!
//! A predicate is stored as a 4-bit truth table. Bit `2·x + y` holds the
//! value at input `(x, y)`, so the rows read `(0,0), (0,1), (1,0), (1,1)`
//! from least to most significant bit. Under this encoding the table value
//! enumerates the predicates in their canonical order: `"0"` is 0, `nOr` is
//! 1, ... , `Or` is 14 and `"1"` is 15.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

const NAMES: [&str; 16] = [
    "0", "nOr", "01", "0x", "Dicut", "x0", "Cut", "nAnd", "And", "unCut", "x1", "n10", "1x", "n01",
    "Or", "1",
];

/// A boolean predicate `P: {0,1}² → {0,1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Predicate(u8);

impl Predicate {
    pub const ZERO: Predicate = Predicate(0);
    pub const NOR: Predicate = Predicate(1);
    /// Satisfied only by `(0, 1)`.
    pub const ZERO_ONE: Predicate = Predicate(2);
    /// Satisfied when the first input is 0.
    pub const ZERO_X: Predicate = Predicate(3);
    /// Satisfied only by `(1, 0)`: the edge leaves the set.
    pub const DICUT: Predicate = Predicate(4);
    /// Satisfied when the second input is 0.
    pub const X_ZERO: Predicate = Predicate(5);
    pub const CUT: Predicate = Predicate(6);
    pub const NAND: Predicate = Predicate(7);
    pub const AND: Predicate = Predicate(8);
    pub const UNCUT: Predicate = Predicate(9);
    /// Satisfied when the second input is 1.
    pub const X_ONE: Predicate = Predicate(10);
    /// Satisfied everywhere except `(1, 0)`.
    pub const N10: Predicate = Predicate(11);
    /// Satisfied when the first input is 1.
    pub const ONE_X: Predicate = Predicate(12);
    /// Satisfied everywhere except `(0, 1)`.
    pub const N01: Predicate = Predicate(13);
    pub const OR: Predicate = Predicate(14);
    pub const ONE: Predicate = Predicate(15);

    /// Builds a predicate from its values at `(0,0), (0,1), (1,0), (1,1)`.
    pub fn from_truth_table(bits: [bool; 4]) -> Self {
        let table = bits
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << i));
        Predicate(table)
    }

    pub fn from_table(table: u8) -> Option<Self> {
        (table < 16).then_some(Predicate(table))
    }

    pub fn table(self) -> u8 {
        self.0
    }

    pub fn truth_table(self) -> [bool; 4] {
        [0, 1, 2, 3].map(|i| self.0 >> i & 1 == 1)
    }

    #[inline]
    pub fn eval(self, x: bool, y: bool) -> bool {
        let idx = 2 * u8::from(x) + u8::from(y);
        self.0 >> idx & 1 == 1
    }

    pub fn name(self) -> &'static str {
        NAMES[self.0 as usize]
    }

    pub fn from_name(name: &str) -> Option<Self> {
        NAMES
            .iter()
            .position(|&n| n == name)
            .map(|i| Predicate(i as u8))
    }

    /// Number of satisfying inputs.
    pub fn popcount(self) -> u32 {
        self.0.count_ones()
    }

    /// All sixteen predicates in canonical order.
    pub fn all() -> impl Iterator<Item = Predicate> {
        (0..16).map(Predicate)
    }

    pub fn classify(self) -> SparsifiabilityClass {
        if self.popcount() == 1 {
            SparsifiabilityClass::NonSparsifiable
        } else if matches!(
            self,
            Predicate::ZERO
                | Predicate::ONE
                | Predicate::ZERO_X
                | Predicate::X_ZERO
                | Predicate::X_ONE
                | Predicate::ONE_X
        ) {
            SparsifiabilityClass::SparsifiableTrivial
        } else {
            SparsifiabilityClass::SparsifiableNontrivial
        }
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate({})", self.name())
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Predicate::from_name(s).ok_or_else(|| Error::UnknownPredicate(s.to_string()))
    }
}

impl Serialize for Predicate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Predicate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Predicate::from_name(&name)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown predicate {name}")))
    }
}

/// Where a predicate falls in the sparsification dichotomy.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum SparsifiabilityClass {
    /// Reducible to cut sparsification on the double cover.
    SparsifiableNontrivial,
    /// Depends on at most one endpoint; aggregated exactly.
    SparsifiableTrivial,
    /// Exactly one satisfying input; no subgraph sparsifier exists in general.
    NonSparsifiable,
}

impl fmt::Display for SparsifiabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SparsifiabilityClass::SparsifiableNontrivial => "SparsifiableNontrivial",
            SparsifiabilityClass::SparsifiableTrivial => "SparsifiableTrivial",
            SparsifiabilityClass::NonSparsifiable => "NonSparsifiable",
        };
        f.write_str(s)
    }
}
