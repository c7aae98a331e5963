//! Golden suite: recomputes every tabulated result and compares it with the
//! embedded reference data.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::automorphisms::{aut0_pattern, component_group, identify_group};
use crate::curvature::{nilsoliton_check, nilsoliton_witness, Mode, Scalar, NILSOLITON_ALGEBRAS};
use crate::derivations::{classify, derivation_space};
use crate::error::Result;
use crate::exceptional::check_exceptional;
use crate::lie::{parse_tuple, Catalog};
use crate::linalg::{rat, RatMatrix};
use crate::moduli::{sigma_pattern_of, ModuliContext};
use crate::reference::Reference;
use crate::symmetry::index_of_symmetry;
use crate::symmetry::theorems::{verify_theorem, THEOREMS};

pub const SCHEMA: &str = "nilmetriq/v1";

/// Identifiers and titles of the golden sections, in run order.
pub const SECTIONS: [(u8, &str); 9] = [
    (1, "catalog integrity"),
    (2, "classification"),
    (3, "derivation dimensions"),
    (4, "automorphism and section patterns"),
    (5, "component groups"),
    (6, "isotropy sweeps"),
    (7, "exceptional isotropy"),
    (8, "index of symmetry"),
    (9, "nilsolitons"),
];

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub item: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionReport {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoldenReport {
    pub schema: &'static str,
    pub seed: u64,
    pub pass: bool,
    pub sections: Vec<SectionReport>,
}

struct Tally {
    checks: usize,
    failures: Vec<Failure>,
}

impl Tally {
    fn new() -> Self {
        Self { checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, item: impl Into<String>, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure { item: item.into(), detail: detail() });
        }
    }

    fn finish(self, id: u8) -> SectionReport {
        let title = SECTIONS.iter().find(|s| s.0 == id).map_or("", |s| s.1);
        SectionReport { id, title, pass: self.failures.is_empty(), checks: self.checks, failures: self.failures }
    }
}

fn catalog_integrity(t: &mut Tally) -> Result<()> {
    let cat = Catalog::builtin();
    let reference = Reference::get();
    for e in cat.entries() {
        let parsed = parse_tuple(&e.tuple);
        t.check(parsed.is_ok(), &e.name, || format!("{:?}", parsed.as_ref().err()));
        if let Some(s) = &e.standard_tuple {
            let p = parse_tuple(s);
            t.check(p.is_ok(), format!("{} (standard basis)", e.name), || format!("{:?}", p.as_ref().err()));
            if let (Ok(a), Ok(b)) = (e.table().nilpotency_step(), e.standard().nilpotency_step()) {
                t.check(a == b, format!("{} (standard basis)", e.name), || format!("step {b} vs {a}"));
            }
        }
        let row = reference.row(&e.name);
        let step = e.table().nilpotency_step().ok();
        t.check(row.is_some_and(|r| Some(r.step) == step), &e.name, || {
            format!("step {:?}, tabulated {:?}", step, row.map(|r| r.step))
        });
    }
    Ok(())
}

fn classification(t: &mut Tally) -> Result<()> {
    let cat = Catalog::builtin();
    let reference = Reference::get();
    let mut csla = BTreeSet::new();
    let mut not_tri = BTreeSet::new();
    for e in cat.entries() {
        let c = classify(e.standard());
        let row = reference.row(&e.name);
        t.check(row.is_some_and(|r| r.csla == c.is_csla() && r.cslat == c.is_cslat()), &e.name, || {
            format!("computed {c:?}")
        });
        if c.is_csla() {
            csla.insert(e.name.clone());
            if !c.is_cslat() {
                not_tri.insert(e.name.clone());
            }
        }
    }
    t.check(csla.len() == 23, "CSLA count", || format!("{}", csla.len()));
    let expected: BTreeSet<String> = ["h15", "h19-", "h26+"].iter().map(|s| s.to_string()).collect();
    t.check(not_tri == expected, "not triangular", || format!("{not_tri:?}"));
    Ok(())
}

fn derivation_dims(t: &mut Tally) -> Result<()> {
    let reference = Reference::get();
    for name in reference.cslat_names() {
        let alg = Catalog::builtin().algebra(name)?;
        let der = derivation_space(alg);
        let expected = reference.aut0_patterns.get(name).map(|rows| rows.iter().map(|r| r.matches('a').count()).sum::<usize>());
        t.check(Some(der.dim) == expected, name, || format!("dim Der {} vs {:?}", der.dim, expected));
        let sigma = sigma_pattern_of(&der)?;
        t.check(der.dim + sigma.len() == 21, name, || format!("{} + {} != 21", der.dim, sigma.len()));
    }
    Ok(())
}

fn patterns(t: &mut Tally) -> Result<()> {
    let reference = Reference::get();
    for name in reference.cslat_names() {
        let der = derivation_space(Catalog::builtin().algebra(name)?);
        let aut = aut0_pattern(&der)?.render();
        t.check(reference.aut0_patterns.get(name) == Some(&aut), format!("{name} Aut0"), || aut.join(" "));
        let sigma = sigma_pattern_of(&der)?.render();
        t.check(reference.sigma_patterns.get(name) == Some(&sigma), format!("{name} Sigma"), || sigma.join(" "));
    }
    Ok(())
}

fn component_groups(t: &mut Tally) -> Result<()> {
    let reference = Reference::get();
    for (name, expected) in &reference.component_groups {
        let entry = Catalog::builtin().get(name)?;
        let alg = entry.standard();
        let group = component_group(alg, &entry.component_generators)?;
        let label = identify_group(&group);
        t.check(group.order == expected.order && label == expected.label, name.as_str(), || {
            format!("closure has order {} ({label}), tabulated {} ({})", group.order, expected.order, expected.label)
        });
        let all_aut = group.elements.iter().all(|m| alg.is_automorphism(m));
        t.check(all_aut, format!("{name} elements"), || "an element is not an automorphism".into());
        if expected.label.starts_with('Z') || expected.label == "trivial" {
            let k = derivation_space(alg).diag_dim;
            t.check(group.order == 1 << k, format!("{name} order 2^k"), || format!("order {} with k = {k}", group.order));
        }
    }
    Ok(())
}

fn sweeps(t: &mut Tally, seed: u64) -> Result<()> {
    let reference = Reference::get();
    for (name, rows) in &reference.isotropy_sweeps {
        let ctx = ModuliContext::new(Catalog::builtin().get(name)?)?;
        for row in rows {
            let got = ctx.isotropy_sweep(row.p, seed)?;
            t.check(got.tally == row.tally, format!("{name} p={}", row.p), || format!("{:?}", got.tally));
            t.check(got.agreement == got.rows.len(), format!("{name} p={} agreement", row.p), || {
                format!("{} of {} subsets agreed", got.agreement, got.rows.len())
            });
        }
    }
    Ok(())
}

fn exceptional(t: &mut Tally) -> Result<()> {
    for name in ["h13", "h19+", "h26-"] {
        let c = check_exceptional(name, &rat(1, 2))?;
        t.check(c.passed() && c.outside_component_group, name, || format!("{c:?}"));
    }
    Ok(())
}

fn symmetry(t: &mut Tally, seed: u64) -> Result<()> {
    for id in THEOREMS {
        let report = verify_theorem(id, 25, seed)?;
        for b in report.branches {
            let item = format!("{id} [{}] {}", b.algebra, b.branch);
            let reason = b.counterexample.as_ref().map(|c| {
                format!("{} at {}", c.reason, serde_json::to_string(&c.point).unwrap_or_default())
            });
            t.check(b.pass, item, || reason.unwrap_or_default());
        }
    }
    Ok(())
}

fn nilsolitons(t: &mut Tally) -> Result<()> {
    for name in NILSOLITON_ALGEBRAS {
        let alg = Catalog::builtin().algebra(name)?;
        let g = nilsoliton_witness(name)?;
        let out = nilsoliton_check(alg, &g, Mode::Exact)?;
        let exact_zero = out.certificate().is_some_and(|c| c.residual == Scalar::Exact(rat(0, 1)));
        t.check(exact_zero, format!("{name} witness"), || serde_json::to_string(&out).unwrap_or_default());
        let index = index_of_symmetry(alg, &g)?.index;
        t.check(index == 1, format!("{name} witness index"), || format!("index {index}"));
        let id = nilsoliton_check(alg, &RatMatrix::identity(6), Mode::Exact)?;
        t.check(!id.is_nilsoliton(), format!("{name} identity"), || "identity metric is a nilsoliton".into());
    }
    Ok(())
}

/// Runs one section of the golden suite.
pub fn run_section(id: u8, seed: u64) -> Result<SectionReport> {
    let mut t = Tally::new();
    match id {
        1 => catalog_integrity(&mut t)?,
        2 => classification(&mut t)?,
        3 => derivation_dims(&mut t)?,
        4 => patterns(&mut t)?,
        5 => component_groups(&mut t)?,
        6 => sweeps(&mut t, seed)?,
        7 => exceptional(&mut t)?,
        8 => symmetry(&mut t, seed)?,
        9 => nilsolitons(&mut t)?,
        other => return Err(crate::Error::Unsupported(format!("no golden section {other}"))),
    }
    Ok(t.finish(id))
}

pub fn golden_suite(seed: u64) -> Result<GoldenReport> {
    let sections = SECTIONS.iter().map(|(id, _)| run_section(*id, seed)).collect::<Result<Vec<_>>>()?;
    Ok(GoldenReport { schema: SCHEMA, seed, pass: sections.iter().all(|s| s.pass), sections })
}
