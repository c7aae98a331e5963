use serde_json::{json, Value};

use nilmetriq::automorphisms::{aut0_pattern, component_group, identify_group};
use nilmetriq::curvature::{h22_family, nilsoliton_check, nilsoliton_family, nilsoliton_witness, ricci, Mode};
use nilmetriq::derivations::{classify, derivation_space};
use nilmetriq::exceptional::check_exceptional;
use nilmetriq::lie::{parse_tuple, serialize_tuple};
use nilmetriq::linalg::{format_rational, parse_rational};
use nilmetriq::moduli::{seeded_point, sigma_pattern_of, ModuliContext, SigmaPattern, SigmaPoint};
use nilmetriq::symmetry::theorems::{verify_theorem, THEOREMS};
use nilmetriq::symmetry::{h28_a_matrix, index_of_symmetry};
use nilmetriq::verify::golden_suite;
use nilmetriq::{Catalog, LieAlgebra, RatMatrix, Rational};

use crate::output::Report;
use crate::{CliError, Command, Defaults, MetricArgs, PointArgs};

type R<T> = Result<T, CliError>;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Catalog name or a literal tuple.
fn resolve(target: &str) -> R<(String, LieAlgebra)> {
    if target.trim_start().starts_with('(') {
        let alg = parse_tuple(target)?;
        Ok((serialize_tuple(&alg)?, alg))
    } else {
        let e = Catalog::builtin().get(target)?;
        Ok((e.name.clone(), e.standard().clone()))
    }
}

fn strings(m: &RatMatrix) -> Vec<Vec<String>> {
    m.to_string_rows()
}

fn vec_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn vec_label(v: &[Rational]) -> String {
    let mut terms = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if c == &Rational::from_integer(0.into()) {
            continue;
        }
        let coeff = format_rational(c);
        let t = match coeff.as_str() {
            "1" => format!("e{}", i + 1),
            "-1" => format!("-e{}", i + 1),
            _ => format!("{coeff}*e{}", i + 1),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// Builds a Σ point from `--set`, `--zero` and `--defaults`.
fn point(pattern: &SigmaPattern, args: &PointArgs, seed: u64) -> R<SigmaPoint> {
    let base = match args.defaults {
        Defaults::Generic => seeded_point(pattern, seed),
        Defaults::Trivial => SigmaPoint::trivial(pattern.clone()),
    };
    let mut assign: Vec<(String, Rational)> = Vec::new();
    for s in &args.set {
        let (name, value) = s.split_once('=').ok_or_else(|| input(format!("expected NAME=VALUE, got `{s}`")))?;
        assign.push((name.trim().to_string(), parse_rational(value.trim())?));
    }
    for z in &args.zero {
        assign.push((z.trim().to_string(), Rational::from_integer(0.into())));
    }
    let refs: Vec<(&str, Rational)> = assign.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
    Ok(base.with(&refs)?)
}

fn point_given(args: &PointArgs) -> bool {
    !args.set.is_empty() || !args.zero.is_empty() || args.defaults != Defaults::Generic
}

fn parse_sigma(text: &str, n: usize) -> R<RatMatrix> {
    let rows: Vec<&str> = text.split(';').map(str::trim).filter(|r| !r.is_empty()).collect();
    if rows.len() != n {
        return Err(input(format!("σ needs {n} rows, got {}", rows.len())));
    }
    let mut s = RatMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let vals: Vec<Rational> = row.split(',').map(|x| parse_rational(x.trim())).collect::<Result<_, _>>()?;
        if vals.len() != i + 1 && vals.len() != n {
            return Err(input(format!("row {} of σ needs {} or {n} entries", i + 1, i + 1)));
        }
        for (j, v) in vals.into_iter().enumerate() {
            if j > i && v != Rational::from_integer(0.into()) {
                return Err(input("σ must be lower triangular"));
            }
            s[(i, j)] = v;
        }
    }
    for i in 0..n {
        if s[(i, i)] <= Rational::from_integer(0.into()) {
            return Err(input("σ must have positive diagonal"));
        }
    }
    Ok(s)
}

/// Metric from `--diag`, `--sigma`, or a Σ point.
fn metric(name: &str, alg: &LieAlgebra, args: &MetricArgs, seed: u64) -> R<(RatMatrix, Option<SigmaPoint>)> {
    if let Some(d) = &args.diag {
        if point_given(&args.point) {
            return Err(input("--diag cannot be combined with Σ assignments"));
        }
        let vals: Vec<Rational> = d.iter().map(|x| parse_rational(x.trim())).collect::<Result<_, _>>()?;
        if vals.len() != alg.dim() {
            return Err(input(format!("--diag needs {} entries", alg.dim())));
        }
        if vals.iter().any(|v| v <= &Rational::from_integer(0.into())) {
            return Err(input("diagonal metric entries must be positive"));
        }
        return Ok((RatMatrix::diagonal(&vals), None));
    }
    if let Some(s) = &args.sigma {
        let s = parse_sigma(s, alg.dim())?;
        return Ok((&s.transpose() * &s, None));
    }
    let pattern = sigma_pattern_of(&derivation_space(alg))
        .map_err(|e| input(format!("{name}: {e}; pass --diag or --sigma")))?;
    let p = point(&pattern, &args.point, seed)?;
    Ok((p.metric(), Some(p)))
}

fn classify_one(name: &str, alg: &LieAlgebra) -> R<(Value, Vec<String>)> {
    let der = derivation_space(alg);
    let c = classify(alg);
    let step = alg.nilpotency_step()?;
    let v = json!({
        "name": name,
        "step": step,
        "classification": c,
        "csla": c.is_csla(),
        "cslat": c.is_cslat(),
        "der_dim": der.dim,
        "diag_dim": der.diag_dim,
    });
    let row = vec![
        name.to_string(),
        step.to_string(),
        yes(c.is_csla()),
        yes(c.is_cslat()),
        der.dim.to_string(),
        der.diag_dim.to_string(),
    ];
    Ok((v, row))
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

fn cmd_classify(target: &str) -> R<Report> {
    let header = ["name", "step", "csla", "cslat", "dim_der", "diag_dim"];
    if target == "all" {
        let mut vals = Vec::new();
        let mut rows = Vec::new();
        for e in Catalog::builtin().entries() {
            let (v, r) = classify_one(&e.name, e.standard())?;
            vals.push(v);
            rows.push(r);
        }
        let csla = vals.iter().filter(|v| v["csla"] == true).count();
        let cslat = vals.iter().filter(|v| v["cslat"] == true).count();
        let result = json!({"algebras": vals, "csla_count": csla, "cslat_count": cslat});
        return Ok(Report::new("classify", result).table(&header, rows));
    }
    let (name, alg) = resolve(target)?;
    let (v, r) = classify_one(&name, &alg)?;
    Ok(Report::new("classify", v).table(&header, vec![r]))
}

fn cmd_sigma(target: &str) -> R<Report> {
    let (name, alg) = resolve(target)?;
    let der = derivation_space(&alg);
    let pattern = sigma_pattern_of(&der)?;
    let cells = pattern.render_named();
    let fixed = match Catalog::builtin().get(&name) {
        Ok(entry) => {
            let ctx = ModuliContext::new(entry)?;
            Some(ctx.fixed_point_section()?)
        }
        Err(_) => None,
    };
    let result = json!({
        "algebra": name,
        "parameters": pattern.names,
        "nd": pattern.nd(),
        "pattern": cells,
        "fixed_by_component_group": fixed.map(|f| match f {
            Some(f) => json!(f),
            None => json!("not_monomial"),
        }),
    });
    let rows = cells.iter().enumerate().map(|(i, r)| {
        let mut row = vec![format!("{}", i + 1)];
        row.extend(r.iter().cloned());
        row
    });
    Ok(Report::new("sigma", result).table(&["row", "1", "2", "3", "4", "5", "6"], rows.collect()))
}

fn cmd_aut(target: &str) -> R<Report> {
    let (name, alg) = resolve(target)?;
    let der = derivation_space(&alg);
    let pattern = aut0_pattern(&der)?;
    let group = match Catalog::builtin().get(&name) {
        Ok(entry) if !entry.component_generators.is_empty() || der.diag_dim == 0 => {
            let g = component_group(&alg, &entry.component_generators)?;
            Some(json!({
                "order": g.order,
                "label": identify_group(&g),
                "generators": g.generators.iter().map(strings).collect::<Vec<_>>(),
            }))
        }
        _ => None,
    };
    let free: Vec<(usize, usize)> = pattern.free_positions.iter().map(|&(i, j)| (i + 1, j + 1)).collect();
    let rendered = pattern.render();
    let result = json!({
        "algebra": name,
        "der_dim": der.dim,
        "pattern": rendered,
        "free_positions": free,
        "component_group": group,
    });
    let rows = rendered.iter().enumerate().map(|(i, r)| vec![(i + 1).to_string(), r.chars().map(String::from).collect::<Vec<_>>().join(" ")]);
    Ok(Report::new("aut", result).table(&["row", "pattern"], rows.collect()))
}

fn context(name: &str) -> R<ModuliContext> {
    let entry = Catalog::builtin().get(name)?;
    Ok(ModuliContext::new(entry)?)
}

fn cmd_isotropy(name: &str, args: &PointArgs, seed: u64) -> R<Report> {
    let ctx = context(name)?;
    let p = point(&ctx.pattern, args, seed)?;
    let g = p.metric();
    let iso = ctx.isotropy(&g)?;
    let result = json!({
        "algebra": ctx.name,
        "point": p,
        "metric": strings(&g),
        "order": iso.group.order,
        "label": iso.label,
        "continuous_isotropy": iso.continuous_isotropy,
        "elements": iso.group.elements.iter().map(strings).collect::<Vec<_>>(),
    });
    let rows = vec![vec![ctx.name.clone(), iso.label.clone(), iso.group.order.to_string(), iso.continuous_isotropy.to_string()]];
    Ok(Report::new("isotropy", result).table(&["algebra", "group", "order", "continuous"], rows))
}

fn cmd_sweep(name: &str, zeros: usize, seed: u64) -> R<Report> {
    let ctx = context(name)?;
    let sweep = ctx.isotropy_sweep(zeros, seed)?;
    let rows = sweep.rows.iter().map(|r| vec![r.subset.join(" "), r.label.clone()]).collect();
    Ok(Report::new("sweep", json!(sweep)).table(&["zeroed", "group"], rows))
}

fn cmd_symmetry(target: &str, args: &PointArgs, seed: u64) -> R<Report> {
    let (name, alg) = resolve(target)?;
    let pattern = sigma_pattern_of(&derivation_space(&alg))?;
    let p = point(&pattern, args, seed)?;
    let r = index_of_symmetry(&alg, &p.metric())?;
    let a = if name == "h28" { Some(strings(&h28_a_matrix(&p)?)) } else { None };
    let labels: Vec<String> = r.basis.iter().map(|v| vec_label(v)).collect();
    let mut result = json!({
        "algebra": name,
        "point": p,
        "index": r.index,
        "basis": r.basis.iter().map(|v| vec_strings(v)).collect::<Vec<_>>(),
        "basis_labels": labels,
        "central": r.central,
        "central_intersection_dim": r.central_intersection_dim,
    });
    if let Some(a) = a {
        result["A"] = json!(a);
    }
    let rows = vec![vec![name, r.index.to_string(), labels.join(", "), r.central.to_string()]];
    Ok(Report::new("symmetry", result).table(&["algebra", "index", "basis", "central"], rows))
}

fn operator_rows(op: &nilmetriq::curvature::Operator) -> Vec<Vec<String>> {
    match op {
        nilmetriq::curvature::Operator::Exact(m) => strings(m),
        nilmetriq::curvature::Operator::Approximate(m) => {
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| format!("{:.12}", m[(i, j)])).collect()).collect()
        }
    }
}

fn cmd_ricci(target: &str, args: &MetricArgs, mode: Mode, seed: u64) -> R<Report> {
    let (name, alg) = resolve(target)?;
    let (g, p) = metric(&name, &alg, args, seed)?;
    let r = ricci(&alg, &g, mode)?;
    let mut result = json!({ "algebra": name, "metric": strings(&g), "ricci": r });
    if let Some(p) = p {
        result["point"] = json!(p);
    }
    Ok(Report::new("ricci", result).table(&["1", "2", "3", "4", "5", "6"], operator_rows(&r.operator)))
}

fn cmd_nilsoliton(target: &str, r: Option<&str>, t: Option<&str>, args: &MetricArgs, mode: Mode, seed: u64) -> R<Report> {
    let (name, alg) = resolve(target)?;
    let explicit = args.diag.is_some() || args.sigma.is_some() || point_given(&args.point);
    let (g, source) = match (r, t) {
        (Some(r), _) => (nilsoliton_family(&name, &parse_rational(r)?)?, format!("family r={r}")),
        (None, Some(t)) => {
            if name != "h22" {
                return Err(input("--t parametrizes the h22 family only"));
            }
            (h22_family(&parse_rational(t)?)?, format!("family t={t}"))
        }
        (None, None) if explicit => (metric(&name, &alg, args, seed)?.0, "given".to_string()),
        (None, None) => (nilsoliton_witness(&name)?, "witness".to_string()),
    };
    let out = nilsoliton_check(&alg, &g, mode)?;
    let index = index_of_symmetry(&alg, &g)?;
    let result = json!({
        "algebra": name,
        "metric_source": source,
        "metric": strings(&g),
        "outcome": out,
        "index_of_symmetry": index.index,
    });
    let (c, res) = match &out {
        nilmetriq::curvature::NilsolitonOutcome::Nilsoliton(cert) => (json_str(&cert.c), json_str(&cert.residual)),
        nilmetriq::curvature::NilsolitonOutcome::NotNilsoliton { residual, .. } => ("-".into(), json_str(residual)),
    };
    let rows = vec![vec![name, yes(out.is_nilsoliton()), c, res, index.index.to_string()]];
    Ok(Report::new("nilsoliton", result).table(&["algebra", "nilsoliton", "c", "residual", "index"], rows))
}

fn json_str(s: &nilmetriq::curvature::Scalar) -> String {
    match serde_json::to_value(s).expect("scalar") {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

fn cmd_verify(theorem: &str, samples: usize, seed: u64) -> R<Report> {
    let ids: Vec<&str> = if theorem == "all" { THEOREMS.to_vec() } else { vec![theorem] };
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for id in ids {
        let rep = verify_theorem(id, samples, seed)?;
        for b in &rep.branches {
            rows.push(vec![
                b.theorem.clone(),
                b.algebra.clone(),
                b.branch.clone(),
                b.samples.to_string(),
                b.controls.to_string(),
                if b.pass { "pass" } else { "FAIL" }.into(),
            ]);
        }
        reports.push(rep);
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.theorem.clone()).collect();
    let result = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
    Ok(Report::new("verify", result)
        .table(&["theorem", "algebra", "branch", "samples", "controls", "result"], rows)
        .failed_if(!failed.is_empty(), format!("failing statements: {}", failed.join(", "))))
}

fn cmd_exceptional(name: &str, r: &str) -> R<Report> {
    let c = check_exceptional(name, &parse_rational(r)?)?;
    let rows = vec![vec![
        c.algebra.clone(),
        c.r.clone(),
        c.automorphism.to_string(),
        c.isometry.to_string(),
        c.outside_component_group.to_string(),
    ]];
    let ok = c.passed();
    Ok(Report::new("exceptional", json!(c))
        .table(&["algebra", "r", "automorphism", "isometry", "outside_D"], rows)
        .failed_if(!ok, "pair is not an isometric automorphism"))
}

pub fn verify_paper(seed: u64) -> R<Report> {
    let rep = golden_suite(seed)?;
    let mut rows = Vec::new();
    for s in &rep.sections {
        rows.push(vec![s.id.to_string(), s.title.to_string(), s.checks.to_string(), if s.pass { "pass" } else { "FAIL" }.into(), String::new()]);
        for f in &s.failures {
            rows.push(vec![String::new(), format!("  {}", f.item), String::new(), "FAIL".into(), f.detail.clone()]);
        }
    }
    let failed: Vec<String> = rep.sections.iter().filter(|s| !s.pass).map(|s| s.title.to_string()).collect();
    Ok(Report::new("verify-paper", json!(rep))
        .table(&["section", "title", "checks", "result", "detail"], rows)
        .failed_if(!failed.is_empty(), format!("failing sections: {}", failed.join(", "))))
}

pub fn dispatch(cmd: &Command, seed: u64) -> R<Report> {
    match cmd {
        Command::Classify { target } => cmd_classify(target),
        Command::Sigma { algebra } => cmd_sigma(algebra),
        Command::Aut { algebra } => cmd_aut(algebra),
        Command::Isotropy { algebra, point } => cmd_isotropy(algebra, point, seed),
        Command::Sweep { algebra, zeros } => cmd_sweep(algebra, *zeros, seed),
        Command::Symmetry { algebra, point } => cmd_symmetry(algebra, point, seed),
        Command::Ricci { algebra, metric, mode } => cmd_ricci(algebra, metric, (*mode).into(), seed),
        Command::Nilsoliton { algebra, r, t, metric, mode } => {
            cmd_nilsoliton(algebra, r.as_deref(), t.as_deref(), metric, (*mode).into(), seed)
        }
        Command::Verify { theorem, samples } => cmd_verify(theorem, *samples, seed),
        Command::Exceptional { algebra, r } => cmd_exceptional(algebra, r),
    }
}
