//! `surfcob`: decide surface cobordism questions, compute homology, and
//! normalize double-point diagrams from JSON input.
//!
//! Every run writes exactly one JSON document to standard output. Exit
//! status 0 means the run completed (whatever the verdict), 2 means the
//! input was rejected, 3 means an internal invariant failed.

mod fixtures;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use surfcob::decide::{consistency_audit, decide, random_queries, DecideError, Query};
use surfcob::diagrams::{
    normalize, normalize_with_signs, oracle_assign, DiagramError, DoublePointDiagram, SignMap, SignTable,
};
use surfcob::homology::{ChainComplex, HomologyComputation, HomologyError, Ring};
use surfcob::json::{ints_to_json, JsonInt};

use input::{decode, log, Failure, Kind};

#[derive(Parser)]
#[command(name = "surfcob", version, about = "Cobordism and concordance of surfaces in 4-manifolds")]
struct Cli {
    /// Pretty-print the output document.
    #[arg(long, global = true)]
    pretty: bool,
    /// Progress notes on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Answer a decision query.
    Decide {
        /// Query file; optional with --random.
        file: Option<PathBuf>,
        /// Keep certificates in the verdict.
        #[arg(long)]
        trace: bool,
        /// Cross-check the implications between deciders.
        #[arg(long)]
        audit: bool,
        /// Decide N seeded random instances instead of a file.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Homology of a chain complex, and optionally the class of a cycle.
    Homology { file: PathBuf },
    /// Normalize a double-point diagram to a uniform sign assignment.
    DiagramNormalize {
        file: PathBuf,
        /// Include the move trace.
        #[arg(long)]
        trace: bool,
    },
    /// Exhaustive search for a uniform sign assignment.
    DiagramOracle { file: PathBuf },
    /// Check a document against its schema and semantic constraints.
    Validate { file: PathBuf },
    /// List the bundled fixtures, or print one.
    Fixtures { name: Option<String> },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    emit(&json!({ "usage": rendered }), true);
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{rendered}");
                    emit(&Failure::invalid("usage", "", rendered.trim_end()).to_json(), false);
                    ExitCode::from(input::EXIT_INVALID)
                }
            };
        }
    };
    log::set_verbose(cli.verbose);
    match run(cli.command) {
        Ok(v) => {
            emit(&v, cli.pretty);
            ExitCode::SUCCESS
        }
        Err(f) => {
            for issue in &f.issues {
                log::warn(&format!("{} at {:?}: {}", f.kind, issue.path, issue.message));
            }
            emit(&f.to_json(), cli.pretty);
            ExitCode::from(f.code)
        }
    }
}

fn emit(v: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("serializing a JSON value");
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn run(cmd: Command) -> Result<Value, Failure> {
    match cmd {
        Command::Decide {
            file,
            trace,
            audit,
            random,
            seed,
        } => match (random, file) {
            (Some(n), _) => decide_random(n, seed, trace, audit),
            (None, Some(path)) => {
                let doc = input::load(&path)?;
                log::note(&format!("deciding {}", doc.source));
                let q: Query = decode(Kind::Query, &doc.value)?;
                verdict_json(&q, trace, audit)
            }
            (None, None) => Err(Failure::invalid("usage", "", "decide needs a query file or --random N")),
        },
        Command::Homology { file } => {
            let doc = input::load(&file)?;
            homology(decode(Kind::Homology, &doc.value)?)
        }
        Command::DiagramNormalize { file, trace } => {
            let doc = input::load(&file)?;
            diagram_normalize(decode(Kind::Diagram, &doc.value)?, trace)
        }
        Command::DiagramOracle { file } => {
            let doc = input::load(&file)?;
            diagram_oracle(decode(Kind::Diagram, &doc.value)?)
        }
        Command::Validate { file } => {
            let doc = input::load(&file)?;
            validate(&doc.value)
        }
        Command::Fixtures { name } => list_fixtures(name.as_deref()),
    }
}

fn decide_error(q: &Query, e: DecideError) -> Failure {
    if e.is_internal() {
        return Failure::internal(e);
    }
    let path = match &e {
        DecideError::UnsupportedSchema(_) => "/schema_version".to_string(),
        DecideError::InvalidAmbient(_) => "/ambient".to_string(),
        DecideError::MissingGroup(name) => format!("/ambient/groups/{name}"),
        DecideError::MissingClass { owner, field } if owner == "z" => format!("/z/{field}"),
        DecideError::MissingClass { owner, field } if owner == "query" => format!("/{field}"),
        DecideError::MissingClass { owner, field } => q
            .surfaces
            .iter()
            .position(|s| owner.strip_prefix("surface ") == Some(s.id.as_str()) || (owner == "surface" && s.id.is_empty()))
            .map(|i| format!("/surfaces/{i}/{field}"))
            .unwrap_or_default(),
        DecideError::SurfaceCount { .. } | DecideError::Surface(_) | DecideError::ImmersedInput(_) => {
            "/surfaces".to_string()
        }
        DecideError::LinkMismatch(_) => "/surfaces".to_string(),
        DecideError::MissingData(_) => "/z".to_string(),
        _ => String::new(),
    };
    Failure::invalid("validation", path, e)
}

fn verdict_json(q: &Query, trace: bool, audit: bool) -> Result<Value, Failure> {
    let mut verdict = decide(q).map_err(|e| decide_error(q, e))?;
    if !trace {
        verdict.certificate = None;
    }
    let mut v = serde_json::to_value(&verdict).context("serializing verdict")?;
    if audit {
        let report = consistency_audit(q);
        if let Some(bad) = report.violations().next() {
            return Err(Failure::internal(format!(
                "consistency audit: {} violated ({})",
                bad.implication,
                bad.detail.as_deref().unwrap_or("")
            )));
        }
        let obj = v.as_object_mut().context("verdict is an object")?;
        obj.insert("audit".into(), serde_json::to_value(&report).context("serializing audit")?);
    }
    Ok(v)
}

fn decide_random(n: usize, seed: u64, trace: bool, audit: bool) -> Result<Value, Failure> {
    log::note(&format!("deciding {n} random instances from seed {seed}"));
    let mut results = Vec::with_capacity(n);
    for q in random_queries(seed, n) {
        // Random instances are generated consistent; a rejection is a bug.
        let verdict = verdict_json(&q, trace, audit).map_err(|f| Failure {
            code: input::EXIT_INTERNAL,
            kind: "internal",
            issues: f.issues,
        })?;
        results.push(json!({
            "query": serde_json::to_value(&q).context("serializing query")?,
            "verdict": verdict,
        }));
    }
    Ok(json!({ "seed": seed, "count": n, "results": results }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HomologyRequest {
    #[allow(dead_code)]
    schema_version: String,
    complex: ChainComplex,
    degree: i64,
    #[serde(default)]
    cycle: Option<Vec<JsonInt>>,
}

fn homology_error(e: HomologyError) -> Failure {
    let path = match &e {
        HomologyError::NotACycle { .. } | HomologyError::CoordinateCount { .. } => "/cycle",
        HomologyError::UnknownChainGroup(_) => "/degree",
        _ => "/complex",
    };
    Failure::invalid("validation", path, e)
}

fn homology(req: HomologyRequest) -> Result<Value, Failure> {
    let h = HomologyComputation::new(&req.complex, req.degree).map_err(homology_error)?;
    let g = h.group();
    let mut out = Map::new();
    match req.complex.ring() {
        Ring::F2 => {
            let dim = g.f2_dim().context("homology over F2 is an F2 vector space")?;
            out.insert("f2_dim".into(), json!(dim));
        }
        Ring::Integers => {
            out.insert("free_rank".into(), json!(g.free_rank()));
            out.insert("invariant_factors".into(), json!(ints_to_json(g.invariant_factors())));
        }
    }
    if let Some(z) = &req.cycle {
        let z: Vec<_> = z.iter().map(|v| v.0.clone()).collect();
        let class = h.class_of(&z).map_err(homology_error)?;
        out.insert("class".into(), json!(ints_to_json(class.coords())));
    }
    Ok(Value::Object(out))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramRequest {
    #[allow(dead_code)]
    schema_version: String,
    diagram: DoublePointDiagram,
    #[serde(default)]
    signs: Option<SignMap>,
}

fn diagram_error(e: DiagramError) -> Failure {
    match e {
        DiagramError::Internal(_) | DiagramError::Replay { .. } => Failure::internal(e),
        DiagramError::SignTable(_) => Failure::invalid("validation", "/signs", e),
        _ => Failure::invalid("validation", "/diagram", e),
    }
}

fn diagram_normalize(req: DiagramRequest, trace: bool) -> Result<Value, Failure> {
    let result = match &req.signs {
        None => normalize(&req.diagram),
        Some(map) => {
            let eps = SignTable::from_map(&req.diagram, map).map_err(diagram_error)?;
            normalize_with_signs(&req.diagram, &eps)
        }
    };
    match result {
        Ok(out) => {
            let mut v = json!({
                "assignment": out.assignment,
                "diagram": serde_json::to_value(&out.diagram).context("serializing diagram")?,
            });
            if trace {
                v["trace"] = serde_json::to_value(&out.trace).context("serializing trace")?;
            }
            Ok(v)
        }
        Err(DiagramError::Infeasible(reason)) => Ok(json!({ "assignment": null, "infeasibility": reason.name() })),
        Err(e) => Err(diagram_error(e)),
    }
}

fn diagram_oracle(req: DiagramRequest) -> Result<Value, Failure> {
    let found = oracle_assign(&req.diagram).map_err(diagram_error)?;
    Ok(json!({ "assignment": found }))
}

fn validate(v: &Value) -> Result<Value, Failure> {
    let kind = Kind::detect(v).ok_or_else(|| {
        Failure::invalid(
            "validation",
            "",
            "cannot tell the document kind: expected a \"question\", \"complex\" or \"diagram\" key",
        )
    })?;
    match kind {
        Kind::Query => {
            let q: Query = decode(kind, v)?;
            q.validate().map_err(|e| decide_error(&q, e))?;
        }
        Kind::Homology => {
            let _: HomologyRequest = decode(kind, v)?;
        }
        Kind::Diagram => {
            let req: DiagramRequest = decode(kind, v)?;
            if let Some(map) = &req.signs {
                SignTable::from_map(&req.diagram, map).map_err(diagram_error)?;
            }
        }
    }
    Ok(json!({ "valid": true, "kind": kind, "schema": kind.schema_id() }))
}

fn list_fixtures(name: Option<&str>) -> Result<Value, Failure> {
    match name {
        None => Ok(json!({
            "fixtures": fixtures::FIXTURES
                .iter()
                .map(|f| json!({ "name": f.name, "kind": f.kind, "description": f.description }))
                .collect::<Vec<_>>()
        })),
        Some(n) => {
            let f = fixtures::find(n).ok_or_else(|| Failure::invalid("usage", "", format!("no bundled fixture {n:?}")))?;
            Ok(input::parse(format!("fixture:{}", f.name), f.text)?.value)
        }
    }
}
