//! The 34 six-dimensional nilpotent Lie algebras, with re-based variants
//! and the component-group generators of the triangular ones.

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::algebra::{Basis, LieAlgebra};
use super::tuple::parse_tuple_named;
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;

const BUILTIN: &str = include_str!("../../data/catalog.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawEntry {
    name: String,
    tuple: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    standard_tuple: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    component_generators: Vec<RatMatrix>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub tuple: String,
    pub standard_tuple: Option<String>,
    pub component_generators: Vec<RatMatrix>,
    table: LieAlgebra,
    rebased: Option<LieAlgebra>,
}

impl CatalogEntry {
    /// The algebra in the basis used by every downstream computation.
    pub fn standard(&self) -> &LieAlgebra {
        self.rebased.as_ref().unwrap_or(&self.table)
    }

    /// The algebra exactly as tabulated.
    pub fn table(&self) -> &LieAlgebra {
        &self.table
    }

    pub fn rebased(&self) -> Option<&LieAlgebra> {
        self.rebased.as_ref()
    }

    pub fn standard_tuple_str(&self) -> &str {
        self.standard_tuple.as_deref().unwrap_or(&self.tuple)
    }
}

static GLOBAL: OnceLock<Catalog> = OnceLock::new();

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Process-wide catalog: the embedded one unless [`Catalog::install`] ran first.
    pub fn builtin() -> &'static Catalog {
        GLOBAL.get_or_init(|| Catalog::from_json(BUILTIN).expect("embedded catalog is valid"))
    }

    /// Replaces the embedded catalog for the rest of the process.
    ///
    /// Fails once the catalog has been used.
    pub fn install(catalog: Catalog) -> Result<()> {
        GLOBAL
            .set(catalog)
            .map_err(|_| Error::Catalog("catalog already in use; install it before any computation".into()))
    }

    pub fn from_json(text: &str) -> Result<Catalog> {
        let raw: Vec<RawEntry> =
            serde_json::from_str(text).map_err(|e| Error::Catalog(format!("malformed catalog JSON: {e}")))?;
        let mut entries = Vec::with_capacity(raw.len());
        for r in raw {
            let table = parse_tuple_named(&r.name, Basis::Table, &r.tuple)?;
            let rebased = r
                .standard_tuple
                .as_deref()
                .map(|t| parse_tuple_named(&r.name, Basis::Standard, t))
                .transpose()?;
            let alg = rebased.as_ref().unwrap_or(&table);
            for (i, g) in r.component_generators.iter().enumerate() {
                if !alg.is_automorphism(g) {
                    return Err(Error::Catalog(format!(
                        "{}: component generator {} is not an automorphism",
                        r.name,
                        i + 1
                    )));
                }
            }
            entries.push(CatalogEntry {
                name: r.name,
                tuple: r.tuple,
                standard_tuple: r.standard_tuple,
                component_generators: r.component_generators,
                table,
                rebased,
            });
        }
        Ok(Catalog { entries })
    }

    pub fn from_path(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Catalog(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    /// Looks up `h19+`, `H19+`, `h19p` and similar spellings.
    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        let key = normalize_name(name);
        self.entries
            .iter()
            .find(|e| normalize_name(&e.name) == key)
            .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))
    }

    pub fn algebra(&self, name: &str) -> Result<&LieAlgebra> {
        self.get(name).map(CatalogEntry::standard)
    }
}

fn normalize_name(name: &str) -> String {
    let mut s: String = name
        .trim()
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !matches!(c, '_' | '^' | ' '))
        .collect();
    if let Some(stem) = s.strip_suffix('p') {
        s = format!("{stem}+");
    } else if let Some(stem) = s.strip_suffix('m') {
        s = format!("{stem}-");
    }
    if !s.starts_with('h') {
        s.insert(0, 'h');
    }
    s
}

/// Every tabulated algebra followed by the re-based variants.
pub fn catalog() -> Vec<LieAlgebra> {
    let cat = Catalog::builtin();
    let mut out: Vec<LieAlgebra> = cat.entries().iter().map(|e| e.table().clone()).collect();
    out.extend(cat.entries().iter().filter_map(|e| e.rebased().cloned()));
    out
}
