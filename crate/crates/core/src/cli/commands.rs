use std::fmt::Write as _;
use std::path::Path;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::{BandFamily, Cli, Command, CommandOutput, Env, ProbeFamily, CONVENTION_NATURALS, CONVENTION_ZERO_POWER};
use crate::bandmat::{hadamard_power, SymMatrix};
use crate::chainseq::{
    minimal_parameters, minimal_parameters_exact, wall_wetzel_report, BlockStatus, ChainReport, WallWetzelReport,
    EXACT_MAX_LEN,
};
use crate::error::{Error, Result};
use crate::exact::{self, parse_rational};
use crate::format::{fmt_list, fmt_sig};
use crate::graphs::{is_chordal, max_near_clique, NEAR_CLIQUE_EXACT_LIMIT};
use crate::io::{matrix_to_json, read_graph_file, read_matrix_file, AnyMatrix};
use crate::positivity::{classify_positivity, determinant, leading_principal_minors, PositivityClass};
use crate::preservers::{
    counterexample_epsilon, counterexample_pentadiagonal, counterexample_tridiagonal, id_blocks,
    id_numeric_probe_first_failure, id_verdict_pentadiagonal, id_verdict_tridiagonal, pentadiagonal_counterexample_det,
    tridiagonal_counterexample_det, Family, PowerSet, Probe, DEFAULT_R_GRID, DEFAULT_ZERO_TOL,
};

pub(super) fn dispatch(cli: &Cli, env: Env) -> Result<CommandOutput> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Error::InvalidTolerance(cli.tol));
    }
    match &cli.command {
        Command::CheckPositivity { file } => check_positivity(file, cli.tol, env),
        Command::Hadamard { file, r } => hadamard(file, *r, cli.tol),
        Command::Chain { sequence } => chain(sequence, env),
        Command::CriticalExponent { graph } => critical_exponent(graph),
        Command::IdCheck { file } => id_check(file, cli.tol),
        Command::Counterexample { family, r } => counterexample(*family, *r, cli.tol),
        Command::Probe {
            family,
            r,
            samples,
            seed,
            graph,
            inject,
        } => probe(*family, *r, *samples, *seed, graph.as_deref(), inject, cli.tol),
    }
}

fn output(inputs: Value, verdicts: Value, text: String) -> CommandOutput {
    CommandOutput {
        inputs,
        verdicts,
        conventions: vec![],
        text,
        primary_json: None,
        notes: String::new(),
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// One-line chain verdict; `fractions` prints exact parameters as `p/q`.
fn chain_summary(c: &ChainReport, fractions: bool) -> String {
    let params = match (&c.exact_params, fractions) {
        (Some(exact), true) => format!("({})", exact.join(", ")),
        _ => fmt_list(&c.minimal_params),
    };
    let mode = if c.exact_mode { " (exact)" } else { "" };
    match c.failure_index {
        None => format!("chain sequence m={params}{mode}"),
        Some(k) if c.boundary_indeterminate => {
            format!("boundary-indeterminate at index {k}; m={params}{mode}")
        }
        Some(k) => format!("not a chain sequence at index {k}; m={params}{mode}"),
    }
}

fn wall_wetzel_summary(ww: &WallWetzelReport) -> String {
    if let [block] = ww.blocks.as_slice() {
        if let Some(c) = &block.chain {
            return chain_summary(c, false);
        }
    }
    let parts: Vec<String> = ww
        .blocks
        .iter()
        .map(|b| {
            let rows = if b.order == 1 {
                format!("[{}]", b.start)
            } else {
                format!("[{}-{}]", b.start, b.start + b.order - 1)
            };
            let what = match (&b.status, &b.chain) {
                (_, Some(c)) => chain_summary(c, false),
                (BlockStatus::PositiveScalar, _) => "positive scalar".into(),
                (BlockStatus::NonpositiveScalar, _) => "nonpositive scalar".into(),
                _ => "nonpositive diagonal".into(),
            };
            format!("{rows} {what}")
        })
        .collect();
    format!("blocks: {}", parts.join("; "))
}

fn check_positivity(file: &Path, tol: f64, env: Env) -> Result<CommandOutput> {
    let a = read_matrix_file(file)?;
    let verdict = classify_positivity(&a, tol)?;
    let minors = leading_principal_minors(&a);
    let mut text = String::new();
    let mut verdicts = json!({ "positivity": verdict, "leading_minors": minors });

    let mut headline = verdict.class.to_string();
    if let Some(t) = a.as_band().filter(|b| b.is_tridiagonal()) {
        let exact_mode = env.exact || t.order() <= EXACT_MAX_LEN + 1;
        let ww = wall_wetzel_report(t, exact_mode)?;
        write!(headline, "; {}", wall_wetzel_summary(&ww)).unwrap();
        let disagree = !ww.boundary_indeterminate
            && ((verdict.class == PositivityClass::Pd) != ww.is_pd)
            && verdict.class != PositivityClass::PsdBoundary;
        verdicts["chain_test"] = json!(ww);
        verdicts["disagreement"] = json!(disagree);
        text.push_str(&headline);
        text.push('\n');
        if disagree {
            text.push_str("warning: chain-sequence test and eigenvalue oracle disagree\n");
        }
    } else {
        text.push_str(&headline);
        text.push('\n');
    }
    writeln!(text, "kind: {} (n = {})", a.kind(), a.order()).unwrap();
    writeln!(text, "min eigenvalue: {}", fmt_sig(verdict.min_eigenvalue)).unwrap();
    writeln!(text, "threshold: {}", fmt_sig(verdict.threshold)).unwrap();
    writeln!(text, "leading minors: {}", fmt_list(&minors)).unwrap();
    Ok(output(
        json!({ "file": path_str(file), "tol": tol, "matrix": matrix_to_json(&a) }),
        verdicts,
        text,
    ))
}

fn check_hadamard_exponent(r: f64) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::NonFiniteExponent(r));
    }
    if r < 0.0 {
        return Err(Error::NegativeExponent(r));
    }
    Ok(())
}

fn hadamard(file: &Path, r: f64, tol: f64) -> Result<CommandOutput> {
    check_hadamard_exponent(r)?;
    let a = read_matrix_file(file)?;
    let p: AnyMatrix = hadamard_power(&a, r)?;
    let verdict = classify_positivity(&p, tol)?;
    let det = determinant(&p);
    let powered = matrix_to_json(&p);
    let mut text = String::new();
    writeln!(text, "{}", verdict.class).unwrap();
    writeln!(text, "powered: {}", serde_json::to_string(&powered).expect("json")).unwrap();
    writeln!(text, "determinant: {}", fmt_sig(det)).unwrap();
    writeln!(text, "min eigenvalue: {}", fmt_sig(verdict.min_eigenvalue)).unwrap();
    let mut out = output(
        json!({ "file": path_str(file), "r": r, "tol": tol }),
        json!({ "powered": powered, "positivity": verdict, "determinant": det }),
        text,
    );
    if r == 0.0 {
        out.conventions.push(CONVENTION_ZERO_POWER.into());
    }
    Ok(out)
}

fn chain(sequence: &str, env: Env) -> Result<CommandOutput> {
    let terms: Vec<&str> = sequence.split(',').map(str::trim).collect();
    if terms.iter().any(|t| t.is_empty()) {
        return Err(Error::Parse(format!("empty term in sequence {sequence:?}")));
    }
    let exact_terms: Vec<BigRational> = terms.iter().map(|t| parse_rational(t)).collect::<Result<_>>()?;
    // Decimal literals are exact rationals too, so short sequences are
    // decided without the floating boundary band.
    let exact_mode = env.exact || terms.len() <= EXACT_MAX_LEN;
    let report = if exact_mode {
        minimal_parameters_exact(&exact_terms)
    } else {
        let floats: Vec<f64> = exact_terms.iter().map(exact::to_f64).collect();
        minimal_parameters(&floats)
    };
    let text = format!("{}\n", chain_summary(&report, true));
    Ok(output(
        json!({ "sequence": terms, "exact_mode": exact_mode }),
        json!(report),
        text,
    ))
}

fn critical_exponent(graph: &Path) -> Result<CommandOutput> {
    let g = read_graph_file(graph)?;
    let cert = is_chordal(&g);
    let inputs = json!({ "graph": path_str(graph), "vertices": g.vertex_count(), "edges": g.edge_count() });
    let dash = |vs: &[usize]| vs.iter().map(usize::to_string).collect::<Vec<_>>().join("-");
    if !cert.is_chordal {
        let witness = cert.witness_cycle.clone().unwrap_or_default();
        let text = format!("not chordal; witness {}\n", dash(&witness));
        return Ok(output(inputs, json!({ "chordality": cert }), text));
    }
    if g.vertex_count() > NEAR_CLIQUE_EXACT_LIMIT {
        return Err(Error::Domain(format!(
            "exact near-clique search is limited to {NEAR_CLIQUE_EXACT_LIMIT} vertices"
        )));
    }
    if g.vertex_count() < 3 {
        return Err(Error::OrderTooSmall {
            min: 3,
            actual: g.vertex_count(),
        });
    }
    let nc = max_near_clique(&g);
    let set = PowerSet::naturals_and_tail(nc.size as f64 - 2.0);
    let mut text = String::new();
    writeln!(text, "{set}").unwrap();
    writeln!(
        text,
        "chordal; perfect elimination ordering {}",
        dash(cert.ordering.as_deref().unwrap_or_default())
    )
    .unwrap();
    writeln!(text, "near-clique number {} (vertices {})", nc.size, dash(&nc.vertices)).unwrap();
    let mut out = output(
        inputs,
        json!({
            "chordality": cert,
            "near_clique": nc,
            "critical_exponent": { "set": set, "display": set.to_string() },
        }),
        text,
    );
    if set.naturals_visible() {
        out.conventions.push(CONVENTION_NATURALS.into());
    }
    Ok(out)
}

fn id_check(file: &Path, tol: f64) -> Result<CommandOutput> {
    let a = read_matrix_file(file)?;
    let probe = id_numeric_probe_first_failure(&a, DEFAULT_R_GRID, tol)?;
    let probe_json = match probe {
        None => json!({ "grid": DEFAULT_R_GRID, "passes": true }),
        Some((r, lam)) => json!({ "grid": DEFAULT_R_GRID, "passes": false, "failing_r": r, "min_eigenvalue": lam }),
    };
    let probe_line = match probe {
        None => "numeric probe: every power on the default grid is PSD".to_string(),
        Some((r, lam)) => format!(
            "numeric probe: power r = {} has min eigenvalue {}",
            fmt_sig(r),
            fmt_sig(lam)
        ),
    };
    let band = a.as_band();
    let verdict = match band {
        Some(t) if t.is_tridiagonal() => Some(id_verdict_tridiagonal(t, DEFAULT_ZERO_TOL)?),
        Some(p) if p.is_penta_form() => Some(id_verdict_pentadiagonal(p, DEFAULT_ZERO_TOL)?),
        _ => None,
    };
    let mut text = String::new();
    let mut verdicts = json!({ "numeric_probe": probe_json });
    match &verdict {
        Some(v) if v.is_id => {
            text.push_str("ID\n");
            if let Some(t) = band.filter(|b| b.is_tridiagonal()) {
                let blocks: Vec<Value> = id_blocks(t, DEFAULT_ZERO_TOL)?
                    .iter()
                    .map(|b| matrix_to_json(&AnyMatrix::from(b.clone())))
                    .collect();
                let orders: Vec<String> = blocks
                    .iter()
                    .map(|b| b["diag"].as_array().map_or(0, Vec::len).to_string())
                    .collect();
                writeln!(text, "blocks of order {}", orders.join(", ")).unwrap();
                verdicts["blocks"] = json!(blocks);
            }
        }
        Some(v) => writeln!(text, "not ID: {}", v.reason).unwrap(),
        None => text.push_str(if probe.is_none() {
            "no algebraic criterion for this kind; numeric probe found no obstruction\n"
        } else {
            "not ID\n"
        }),
    }
    writeln!(text, "{probe_line}").unwrap();
    if let Some(v) = &verdict {
        verdicts["characterization"] = json!(v);
    }
    Ok(output(
        json!({ "file": path_str(file), "tol": tol, "zero_tol": DEFAULT_ZERO_TOL }),
        verdicts,
        text,
    ))
}

fn counterexample(family: BandFamily, r: f64, tol: f64) -> Result<CommandOutput> {
    let (matrix, formula, det_formula, extra) = match family {
        BandFamily::Tridiagonal => {
            let eps = counterexample_epsilon(r)?;
            (
                counterexample_tridiagonal(r)?,
                "(2+eps)^r - 2",
                tridiagonal_counterexample_det(eps, r),
                json!({ "epsilon": eps }),
            )
        }
        BandFamily::Pentadiagonal => (
            counterexample_pentadiagonal(r)?,
            "2 - 3*2^r + 4^r",
            pentadiagonal_counterexample_det(r),
            json!({}),
        ),
    };
    let base = classify_positivity(&matrix, tol)?;
    let powered = matrix.hadamard_power(r)?;
    let pv = classify_positivity(&powered, tol)?;
    let det = determinant(&powered);
    let mut notes = String::new();
    if let Some(eps) = extra.get("epsilon").and_then(Value::as_f64) {
        writeln!(notes, "epsilon = {}", fmt_sig(eps)).unwrap();
    }
    writeln!(notes, "matrix: {}", base.class).unwrap();
    writeln!(notes, "det(A^r) = {formula} = {}", fmt_sig(det_formula)).unwrap();
    writeln!(notes, "computed det(A^r) = {}", fmt_sig(det)).unwrap();
    writeln!(notes, "powered: {}", pv.class).unwrap();
    let family_name = match family {
        BandFamily::Tridiagonal => "tridiagonal",
        BandFamily::Pentadiagonal => "pentadiagonal",
    };
    let matrix_json = matrix_to_json(&AnyMatrix::from(matrix));
    let mut verdicts = json!({
        "matrix": matrix_json,
        "matrix_class": base.class,
        "powered_class": pv.class,
        "det_formula": det_formula,
        "det_computed": det,
    });
    if let Some(eps) = extra.get("epsilon") {
        verdicts["epsilon"] = eps.clone();
    }
    Ok(CommandOutput {
        inputs: json!({ "family": family_name, "r": r, "tol": tol }),
        verdicts,
        conventions: vec![],
        text: String::new(),
        primary_json: Some(matrix_json),
        notes,
    })
}

fn probe(
    family: ProbeFamily,
    r: f64,
    samples: usize,
    seed: u64,
    graph: Option<&Path>,
    inject: &[std::path::PathBuf],
    tol: f64,
) -> Result<CommandOutput> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("probe exponent must be positive, got {r}")));
    }
    let fam = match (family, graph) {
        (ProbeFamily::Tridiagonal, None) => Family::Tridiagonal,
        (ProbeFamily::Pentadiagonal, None) => Family::Pentadiagonal,
        (ProbeFamily::Pattern, Some(g)) => Family::Pattern(read_graph_file(g)?),
        (ProbeFamily::Pattern, None) => return Err(Error::Domain("--family pattern requires --graph".into())),
        (_, Some(_)) => return Err(Error::Domain("--graph only applies to --family pattern".into())),
    };
    let mut p = Probe::new(fam, r).samples(samples).seed(seed).tol(tol);
    for file in inject {
        p = p.inject(read_matrix_file(file)?);
    }
    let report = p.run()?;
    let mut inputs = json!({ "family": report.family, "r": r, "samples": samples, "seed": seed, "tol": tol });
    if let Some(g) = graph {
        inputs["graph"] = json!(path_str(g));
    }
    let text = super::to_json_text(&report);
    Ok(output(inputs, json!(report), text))
}
