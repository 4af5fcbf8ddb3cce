use std::fmt::Write as _;

use auerbach::classification::{
    canonical_form, classify_l3_basis, classify_l3_vector, classify_strong_vector, is_strong_auerbach, label_for,
    L3VectorType, L3Verdict, StrongVectorType, MAX_CANONICAL_DIM,
};
use auerbach::constructions::{
    block_basis, hadamard2_basis, identity_basis, jinf_basis, jp_basis, solve_rp, sylvester_double,
};
use auerbach::solver::{census, continuation_track, Census};
use auerbach::{criticality_residual, is_auerbach, AuerbachReport, BasisMatrix, PExponent};
use serde_json::{json, Map, Value};

use crate::{CliError, Command, ConstructKind, Context, MatrixDocument, Outcome, EXIT_FALSE, EXIT_OK};

/// Census dimensions accepted by `enumerate` and `continuation`.
pub const MAX_ENUMERATE_DIM: usize = 4;

pub fn dispatch(command: &Command, ctx: &mut Context<'_>) -> Result<Outcome, CliError> {
    match command {
        Command::Verify(input) => {
            let b = ctx.read_document(&input.file)?.to_basis(input.p)?;
            Ok(verify(&b, ctx))
        }
        Command::Construct { kind } => construct(kind, ctx),
        Command::Enumerate { n, p, seeds, rng } => enumerate(*n, *p, *seeds, *rng, ctx),
        Command::Classify(input) => {
            let b = ctx.read_document(&input.file)?.to_basis(input.p)?;
            classify(&b, ctx)
        }
        Command::Rp { p } => rp(*p),
        Command::Strong(input) => {
            let b = ctx.read_document(&input.file)?.to_basis(input.p)?;
            strong(&b, ctx)
        }
        Command::Continuation { p0, p1, steps, n, seeds, rng } => continuation(*p0, *p1, *steps, *n, *seeds, *rng, ctx),
    }
}

fn outcome(json: Value, code: i32) -> Outcome {
    let text = flatten_text(&json);
    Outcome { json, text, code }
}

/// `key: value` lines, nested keys joined by dots.
fn flatten_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, child, out);
                }
            }
            Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
                let cells: Vec<String> = items.iter().map(scalar_text).collect();
                let _ = writeln!(out, "{prefix}: {}", cells.join(" "));
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), child, out);
                }
            }
            _ => {
                let _ = writeln!(out, "{prefix}: {}", scalar_text(v));
            }
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn max_residual(r: &AuerbachReport) -> f64 {
    [Some(r.row_norm_residual), r.dual_norm_residual, r.biorthogonality_residual, r.gradient_residual]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max)
}

fn report_json(b: &BasisMatrix, r: &AuerbachReport, ctx: &Context<'_>) -> Value {
    let criticality = if r.singular { None } else { criticality_residual(b, &ctx.tol).ok() };
    json!({
        "auerbach": r.auerbach,
        "n": b.n(),
        "p": b.p().to_string(),
        "reason": r.failure,
        "normalized_determinant": r.normalized_determinant,
        "residuals": {
            "row_norm": r.row_norm_residual,
            "dual_norm": r.dual_norm_residual,
            "biorthogonality": r.biorthogonality_residual,
            "gradient": r.gradient_residual,
            "criticality": criticality,
        },
    })
}

fn verify(b: &BasisMatrix, ctx: &Context<'_>) -> Outcome {
    let r = is_auerbach(b, &ctx.tol);
    let code = if r.auerbach { EXIT_OK } else { EXIT_FALSE };
    outcome(report_json(b, &r, ctx), code)
}

fn construct(kind: &ConstructKind, ctx: &mut Context<'_>) -> Result<Outcome, CliError> {
    let (b, provenance) = match kind {
        ConstructKind::Identity { n, p } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            (identity_basis(*n, *p)?, format!("identity n={n}"))
        }
        ConstructKind::Hadamard2 { p } => (hadamard2_basis(*p), "hadamard2".to_string()),
        ConstructKind::Block { inputs, p } => {
            let mut parts = Vec::with_capacity(inputs.len());
            for path in inputs {
                parts.push(ctx.read_document(path)?.to_basis(*p)?);
            }
            (block_basis(&parts)?, format!("block of {} parts", parts.len()))
        }
        ConstructKind::Jp { p } => (jp_basis(*p)?, "jp".to_string()),
        ConstructKind::Jinf { t } => (jinf_basis(*t)?, format!("jinf t={t}")),
        ConstructKind::Sylvester { input, p } => {
            let b = ctx.read_document(input)?.to_basis(*p)?;
            (sylvester_double(&b, &ctx.tol)?, format!("sylvester double of n={}", b.n()))
        }
    };
    let r = is_auerbach(&b, &ctx.tol);
    let mut doc = MatrixDocument::from_basis(&b);
    doc.residual = Some(max_residual(&r));
    doc.provenance = Some(provenance);
    if b.p().is_smooth() && b.p().finite() != Some(2.0) && b.n() <= MAX_CANONICAL_DIM {
        doc.label = Some(label_for(&b, &ctx.tol)?.to_string());
    }
    let json = serde_json::to_value(&doc).expect("documents always serialize");
    let code = if r.auerbach { EXIT_OK } else { EXIT_FALSE };
    Ok(Outcome { json, text: doc.to_text(), code })
}

fn check_census_dim(n: usize) -> Result<(), CliError> {
    if n == 0 || n > MAX_ENUMERATE_DIM {
        return Err(CliError::Usage(format!("--n must be between 1 and {MAX_ENUMERATE_DIM}, got {n}")));
    }
    Ok(())
}

fn census_json(c: &Census, seeds: usize, rng: u64) -> Value {
    let classes: Vec<Value> = c
        .entries
        .iter()
        .map(|e| {
            json!({
                "label": e.class.label.map(|l| l.as_str()),
                "residual": e.residual,
                "hits": e.hits,
                "representative": e.class.representative.to_rows(),
                "solution": e.solution.to_rows(),
            })
        })
        .collect();
    json!({
        "n": c.n,
        "p": c.p.to_string(),
        "seeds": seeds,
        "rng": rng,
        "via_duality": c.via_duality,
        "attempted": c.attempted,
        "status_counts": c.status_counts,
        "class_count": c.entries.len(),
        "max_residual": c.max_residual(),
        "classes": classes,
    })
}

fn enumerate(n: usize, p: PExponent, seeds: usize, rng: u64, ctx: &Context<'_>) -> Result<Outcome, CliError> {
    check_census_dim(n)?;
    let c = census(n, p, seeds, rng, &ctx.tol)?;
    Ok(outcome(census_json(&c, seeds, rng), EXIT_OK))
}

fn l3_vector_name(t: L3VectorType) -> &'static str {
    match t {
        L3VectorType::Axis => "AXIS",
        L3VectorType::TwoPoint => "TWO_POINT",
        L3VectorType::JpType => "JP_TYPE",
        L3VectorType::None => "NONE",
    }
}

fn strong_vector_name(t: StrongVectorType) -> &'static str {
    match t {
        StrongVectorType::Axis => "AXIS",
        StrongVectorType::Pair => "PAIR",
        StrongVectorType::None => "NONE",
    }
}

fn classify(b: &BasisMatrix, ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let p = b.p();
    let mut out = Map::new();
    out.insert("n".into(), json!(b.n()));
    out.insert("p".into(), json!(p.to_string()));
    if b.n() == 3 {
        match classify_l3_basis(b, &ctx.tol)? {
            L3Verdict::OrthogonalContinuum => {
                out.insert("label".into(), Value::Null);
                out.insert("continuum".into(), json!(true));
            }
            L3Verdict::Class { label, t, via_duality } => {
                out.insert("label".into(), json!(label.as_str()));
                out.insert("t".into(), json!(t));
                out.insert("via_duality".into(), json!(via_duality));
            }
        }
    } else {
        let r = is_auerbach(b, &ctx.tol);
        if !r.auerbach {
            return Err(auerbach::AuerbachError::Precondition(format!(
                "not an Auerbach basis ({})",
                r.failure.unwrap_or("?")
            ))
            .into());
        }
        if p.finite() == Some(2.0) {
            out.insert("label".into(), Value::Null);
            out.insert("continuum".into(), json!(true));
        } else {
            out.insert("label".into(), json!(label_for(b, &ctx.tol)?.as_str()));
        }
    }
    if b.n() <= MAX_CANONICAL_DIM {
        out.insert("representative".into(), json!(canonical_form(b, &ctx.tol)?.representative.to_rows()));
    }
    if b.n() == 3 && p.is_smooth() && p.finite() != Some(2.0) {
        let kinds = b
            .rows()
            .map(|row| classify_l3_vector(row, p, &ctx.tol).map(l3_vector_name))
            .collect::<Result<Vec<_>, _>>()?;
        out.insert("row_types".into(), json!(kinds));
    }
    Ok(outcome(Value::Object(out), EXIT_OK))
}

fn rp(p: PExponent) -> Result<Outcome, CliError> {
    let root = solve_rp(p)?;
    let json = json!({
        "p": p.to_string(),
        "r": root.value,
        "residual": root.residual,
    });
    let text = format!("{}\n", fifteen_digits(root.value));
    Ok(Outcome { json, text, code: EXIT_OK })
}

/// Fixed 15 decimals with trailing zeros removed.
fn fifteen_digits(v: f64) -> String {
    let s = format!("{v:.15}");
    let s = s.trim_end_matches('0');
    s.strip_suffix('.').unwrap_or(s).to_string()
}

fn strong(b: &BasisMatrix, ctx: &Context<'_>) -> Result<Outcome, CliError> {
    let verdict = is_strong_auerbach(b, &ctx.tol)?;
    let kinds = b
        .rows()
        .map(|row| classify_strong_vector(row, b.p(), &ctx.tol).map(strong_vector_name))
        .collect::<Result<Vec<_>, _>>()?;
    let json = json!({
        "strong": verdict,
        "n": b.n(),
        "p": b.p().to_string(),
        "row_types": kinds,
    });
    Ok(outcome(json, if verdict { EXIT_OK } else { EXIT_FALSE }))
}

fn continuation(
    p0: f64,
    p1: f64,
    steps: usize,
    n: usize,
    seeds: usize,
    rng: u64,
    ctx: &Context<'_>,
) -> Result<Outcome, CliError> {
    check_census_dim(n)?;
    let start = census(n, PExponent::new(p0)?, seeds, rng, &ctx.tol)?;
    if start.via_duality {
        return Err(CliError::Usage("continuation runs on p0, p1 > 2".into()));
    }
    let bases: Vec<BasisMatrix> = start.entries.iter().map(|e| e.solution.clone()).collect();
    let trace = continuation_track(&bases, p1, steps, &ctx.tol)?;
    let paths: Vec<Value> = trace
        .paths
        .iter()
        .zip(&start.entries)
        .map(|(path, entry)| {
            let end_label = match &path.endpoint {
                Some(end) => Some(label_for(end, &ctx.tol)?.as_str()),
                None => None,
            };
            Ok(json!({
                "label": entry.class.label.map(|l| l.as_str()),
                "end_label": end_label,
                "survived": path.survived(),
                "broken_at_p": path.broken_at.map(|k| trace.p_grid[k]),
                "max_residual": path.residuals.iter().copied().fold(0.0, f64::max),
            }))
        })
        .collect::<Result<_, CliError>>()?;
    let all = trace.all_survived();
    let json = json!({
        "n": n,
        "p0": p0,
        "p1": p1,
        "steps": steps,
        "p_grid": trace.p_grid,
        "class_counts": trace.class_counts,
        "all_survived": all,
        "max_residual": trace.max_residual(),
        "paths": paths,
    });
    Ok(outcome(json, if all { EXIT_OK } else { EXIT_FALSE }))
}
