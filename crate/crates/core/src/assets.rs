//! Bundled paradox files, addressable by name.
//!
//! `table-s1-*` are the reducible examples: relations and candidate
//! biseparable states exactly as printed, plus `phase-corrected` candidates
//! where the printed state does not satisfy the printed relations.

use crate::error::{Error, Result};
use crate::paradox::ParadoxSpec;
use crate::specfile::SpecFile;

const ASSETS: &[(&str, &str)] = &[
    ("paper-4q", include_str!("../assets/paper-4q.json")),
    ("mermin-3q", include_str!("../assets/mermin-3q.json")),
    ("table-s1-4q-row1", include_str!("../assets/table-s1-4q-row1.json")),
    ("table-s1-4q-row2", include_str!("../assets/table-s1-4q-row2.json")),
    ("table-s1-5q", include_str!("../assets/table-s1-5q.json")),
    ("table-s1-6q-row1", include_str!("../assets/table-s1-6q-row1.json")),
    ("table-s1-6q-row2", include_str!("../assets/table-s1-6q-row2.json")),
    ("table-s1-6q-row3", include_str!("../assets/table-s1-6q-row3.json")),
    ("table-s1-6q-row3-corrected", include_str!("../assets/table-s1-6q-row3-corrected.json")),
    ("table-s1-6q-row4", include_str!("../assets/table-s1-6q-row4.json")),
    ("table-s1-6q-row5", include_str!("../assets/table-s1-6q-row5.json")),
    ("table-s1-8q", include_str!("../assets/table-s1-8q.json")),
];

/// The reducible paradoxes as printed, in table order.
pub const TABLE_ONE: &[&str] = &[
    "table-s1-4q-row1",
    "table-s1-4q-row2",
    "table-s1-5q",
    "table-s1-6q-row1",
    "table-s1-6q-row2",
    "table-s1-6q-row3",
    "table-s1-6q-row4",
    "table-s1-6q-row5",
    "table-s1-8q",
];

/// Label carried by candidates transcribed verbatim.
pub const AS_PRINTED: &str = "as printed";

pub fn names() -> impl Iterator<Item = &'static str> {
    ASSETS.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    ASSETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<SpecFile> {
    source(name)
        .ok_or_else(|| Error::Invalid(format!("no bundled paradox named {name:?}")))?
        .parse()
}

/// The six four-qubit relations `X^I … X^VI` with GHZ₄ as common eigenstate.
pub fn paper_4q() -> ParadoxSpec {
    load("paper-4q").expect("bundled asset parses").spec
}

pub fn mermin_3q() -> ParadoxSpec {
    load("mermin-3q").expect("bundled asset parses").spec
}
