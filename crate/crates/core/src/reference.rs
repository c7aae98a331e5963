//! Tabulated values the computations are checked against.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

const REFERENCE: &str = include_str!("../data/reference.json");

#[derive(Clone, Debug, Deserialize)]
pub struct ClassRow {
    pub name: String,
    pub step: usize,
    pub csla: bool,
    pub cslat: bool,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GroupRef {
    pub order: usize,
    pub label: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SweepRow {
    pub p: usize,
    pub tally: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Reference {
    pub classes: Vec<ClassRow>,
    /// Rows of `a` (free) and `-` (dependent) per algebra.
    pub aut0_patterns: BTreeMap<String, Vec<String>>,
    /// Rows of `1`, `0` (fixed) and `s` (free) per algebra.
    pub sigma_patterns: BTreeMap<String, Vec<String>>,
    pub component_groups: BTreeMap<String, GroupRef>,
    pub isotropy_sweeps: BTreeMap<String, Vec<SweepRow>>,
    pub nilsoliton_witnesses: BTreeMap<String, Vec<String>>,
}

impl Reference {
    pub fn get() -> &'static Reference {
        static CELL: OnceLock<Reference> = OnceLock::new();
        CELL.get_or_init(|| serde_json::from_str(REFERENCE).expect("embedded reference data is valid"))
    }

    /// Names of the triangular-type algebras, in table order.
    pub fn cslat_names(&self) -> Vec<&str> {
        self.classes.iter().filter(|r| r.cslat).map(|r| r.name.as_str()).collect()
    }

    pub fn row(&self, name: &str) -> Option<&ClassRow> {
        self.classes.iter().find(|r| r.name == name)
    }
}
