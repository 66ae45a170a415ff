//! Batch front-end: parse instance files, run the decomposition pipelines,
//! emit text or JSON reports. Exit codes: 0 success, 2 parse failure,
//! 3 invariant violation, 4 unknown name, 5 internal inconsistency.

mod instance;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use derham_core::corpus::{self, CorpusInstance};
use derham_core::derham_decompose::{decompose, report_for_parts, verify_decomposition};
use derham_core::oracle::crosscheck;
use derham_core::phi_analysis::phi_check;
use derham_core::uniqueness::{compare, uniqueness_verdict};
use derham_core::{RatMatrix, Representation, Subspace};
use serde_json::{json, Value};

use instance::{export_instance, parse_instance, InstanceFile, ParseError};

#[derive(Parser)]
#[command(
    name = "derham",
    version,
    about = "Exact decomposition of pseudo-Euclidean spaces under matrix holonomy groups"
)]
struct Cli {
    /// Seed for randomized splitting searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit the machine-readable JSON report.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,

    /// Emit the human-readable report (default).
    #[arg(long, global = true)]
    text: bool,

    /// Comma-separated primes for the modular cross-check.
    #[arg(long, global = true, value_delimiter = ',')]
    oracle_primes: Option<Vec<u64>>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print signature, fixed space, moved span, and the duality check.
    Analyze { path: PathBuf },
    /// Split the space into indecomposable invariant summands.
    Decompose { path: PathBuf },
    /// Decompose, then test the uniqueness condition summand by summand.
    Phi { path: PathBuf },
    /// Compare two named decompositions from the instance file.
    Compare {
        path: PathBuf,
        decomp_a: String,
        decomp_b: String,
    },
    /// Run a built-in instance end to end and print the full story.
    Demo { name: String },
    /// Print a built-in instance as JSON, or re-export an instance file.
    Export { target: String },
}

enum CliError {
    Parse(ParseError),
    Invariant(String),
    BadReference(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::BadReference(_) => 4,
            CliError::Internal(_) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse(e) => e.to_string(),
            CliError::Invariant(m) | CliError::BadReference(m) | CliError::Internal(m) => {
                m.clone()
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze { path } => cmd_analyze(cli, path),
        Command::Decompose { path } => cmd_decompose(cli, path),
        Command::Phi { path } => cmd_phi(cli, path),
        Command::Compare { path, decomp_a, decomp_b } => {
            cmd_compare(cli, path, decomp_a, decomp_b)
        }
        Command::Demo { name } => cmd_demo(cli, name),
        Command::Export { target } => cmd_export(target),
    }
}

fn load(path: &Path) -> Result<(InstanceFile, Representation), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Parse(ParseError { path: path.display().to_string(), message: e.to_string() })
    })?;
    let file = parse_instance(&text).map_err(CliError::Parse)?;
    let rep = file.representation().map_err(|e| CliError::Invariant(e.to_string()))?;
    Ok((file, rep))
}

fn emit(cli: &Cli, instance: &str, command: &str, payload: Value, text: String) {
    if cli.json {
        print!("{}", render::pretty(&render::wrap(instance, command, payload)));
    } else {
        print!("{text}");
    }
}

fn cmd_analyze(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let (file, rep) = load(path)?;
    let signature = rep.space().signature();
    let fixed = rep.fixed_space();
    let moved = rep.moved_span();
    let isotropic = rep.space().is_totally_isotropic(&fixed);
    let duality_holds = fixed == rep.space().orth_complement(&moved);

    emit(
        cli,
        &file.name,
        "analyze",
        render::analyze_payload(&signature, &fixed, isotropic, &moved, duality_holds),
        render::analyze_text(&file.name, rep.dim(), &signature, &fixed, isotropic, &moved, duality_holds),
    );
    if !duality_holds {
        return Err(CliError::Internal(
            "duality check failed: the fixed space is not the orthogonal complement of the moved span".into(),
        ));
    }
    Ok(())
}

fn run_decomposition(
    cli: &Cli,
    rep: &Representation,
) -> Result<(derham_core::DecompositionReport, Option<derham_core::oracle::CrosscheckReport>), CliError> {
    let report = decompose(rep, cli.seed);
    let validity = verify_decomposition(rep, &report.all_parts());
    if !validity.all_passed() {
        let failed: Vec<String> = validity
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.clause, c.detail))
            .collect();
        return Err(CliError::Internal(format!(
            "decomposition failed its own re-verification: {}",
            failed.join("; ")
        )));
    }
    let oracle = cli.oracle_primes.as_ref().map(|primes| crosscheck(rep, &report, primes));
    Ok((report, oracle))
}

fn cmd_decompose(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let (file, rep) = load(path)?;
    let (report, oracle) = run_decomposition(cli, &rep)?;
    emit(
        cli,
        &file.name,
        "decompose",
        render::decompose_payload(&report, oracle.as_ref()),
        render::decompose_text(&file.name, &report, oracle.as_ref()),
    );
    if let Some(check) = &oracle {
        if check.soundness_violation {
            return Err(CliError::Internal(
                "modular cross-check found a soundness violation".into(),
            ));
        }
    }
    Ok(())
}

fn cmd_phi(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let (file, rep) = load(path)?;
    let (report, _) = run_decomposition(cli, &rep)?;
    let phi = phi_check(&rep, &report).map_err(|e| CliError::Internal(e.to_string()))?;
    emit(
        cli,
        &file.name,
        "phi",
        render::phi_payload(&phi),
        render::phi_text(&file.name, &phi),
    );
    Ok(())
}

fn named_parts(
    file: &InstanceFile,
    name: &str,
) -> Result<Vec<Subspace>, CliError> {
    let parts = file.decomposition(name).ok_or_else(|| {
        let known: Vec<&str> = file.decompositions.iter().map(|(n, _)| n.as_str()).collect();
        CliError::BadReference(format!(
            "unknown decomposition {name:?} (instance has: {})",
            if known.is_empty() { "none".to_string() } else { known.join(", ") }
        ))
    })?;
    to_subspaces(file.dimension, name, parts)
}

fn to_subspaces(dim: usize, name: &str, parts: &[RatMatrix]) -> Result<Vec<Subspace>, CliError> {
    let mut out = Vec::with_capacity(parts.len());
    for (j, m) in parts.iter().enumerate() {
        let s = Subspace::from_rows(dim, m.clone());
        if s.dim() != m.rows() {
            return Err(CliError::Invariant(format!(
                "decompositions.{name}[{j}]: basis rows are linearly dependent"
            )));
        }
        out.push(s);
    }
    Ok(out)
}

fn recheck_isometry(rep: &Representation, cmp: &derham_core::ComparisonReport) -> Result<(), CliError> {
    if let Some(map) = &cmp.isometry {
        let gram = rep.gram();
        if &(&(&map.matrix.transpose() * gram) * &map.matrix) != gram {
            return Err(CliError::Internal(
                "constructed isometry failed re-verification against the inner product".into(),
            ));
        }
    }
    Ok(())
}

fn cmd_compare(cli: &Cli, path: &Path, decomp_a: &str, decomp_b: &str) -> Result<(), CliError> {
    let (file, rep) = load(path)?;
    let parts_a = named_parts(&file, decomp_a)?;
    let parts_b = named_parts(&file, decomp_b)?;
    let report_a = report_for_parts(&rep, &parts_a, cli.seed)
        .map_err(|e| CliError::Invariant(format!("decomposition {decomp_a:?}: {e}")))?;
    let report_b = report_for_parts(&rep, &parts_b, cli.seed)
        .map_err(|e| CliError::Invariant(format!("decomposition {decomp_b:?}: {e}")))?;
    let cmp = compare(&rep, &report_a, &report_b);
    recheck_isometry(&rep, &cmp)?;
    emit(
        cli,
        &file.name,
        "compare",
        render::compare_payload(&cmp),
        render::compare_text(&file.name, decomp_a, decomp_b, &cmp),
    );
    Ok(())
}

fn instance_from_corpus(inst: &CorpusInstance) -> InstanceFile {
    InstanceFile {
        name: inst.name.clone(),
        dimension: inst.rep.dim(),
        gram: inst.rep.gram().clone(),
        generators: inst.rep.generators().to_vec(),
        decompositions: inst
            .known_decompositions
            .iter()
            .map(|(n, parts)| (n.clone(), parts.iter().map(|s| s.basis().clone()).collect()))
            .collect(),
    }
}

fn find_corpus(name: &str) -> Option<CorpusInstance> {
    corpus::all().into_iter().find(|i| i.name == name)
}

fn cmd_demo(cli: &Cli, name: &str) -> Result<(), CliError> {
    let inst = find_corpus(name).ok_or_else(|| {
        let names: Vec<String> = corpus::all().into_iter().map(|i| i.name).collect();
        CliError::BadReference(format!(
            "unknown demo {name:?} (available: {})",
            names.join(", ")
        ))
    })?;
    let rep = &inst.rep;

    let signature = rep.space().signature();
    let fixed = rep.fixed_space();
    let moved = rep.moved_span();
    let isotropic = rep.space().is_totally_isotropic(&fixed);
    let duality_holds = fixed == rep.space().orth_complement(&moved);

    let (report, oracle) = run_decomposition(cli, rep)?;
    let phi = phi_check(rep, &report).map_err(|e| CliError::Internal(e.to_string()))?;
    let verdict = uniqueness_verdict(rep, &report, &phi);

    let mut rivals_payload = Value::Null;
    let mut rivals_text = String::new();
    if inst.known_decompositions.len() >= 2 {
        let (label_a, parts_a) = &inst.known_decompositions[0];
        let (label_b, parts_b) = &inst.known_decompositions[1];
        for (label, parts) in [(label_a, parts_a), (label_b, parts_b)] {
            let validity = verify_decomposition(rep, parts);
            if !validity.all_passed() {
                return Err(CliError::Internal(format!(
                    "known decomposition {label:?} failed verification"
                )));
            }
        }
        let report_a = report_for_parts(rep, parts_a, cli.seed)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let report_b = report_for_parts(rep, parts_b, cli.seed)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let cmp = compare(rep, &report_a, &report_b);
        recheck_isometry(rep, &cmp)?;
        rivals_payload = json!({
            "names": [label_a, label_b],
            "comparison": render::compare_payload(&cmp),
        });
        rivals_text = format!(
            "\nknown rival decompositions:\n{}",
            render::compare_text(&inst.name, label_a, label_b, &cmp)
        );
    }

    let payload = json!({
        "analyze": render::analyze_payload(&signature, &fixed, isotropic, &moved, duality_holds),
        "decompose": render::decompose_payload(&report, oracle.as_ref()),
        "phi": render::phi_payload(&phi),
        "uniqueness": render::uniqueness_json(&verdict),
        "rivals": rivals_payload,
    });

    let text = format!(
        "=== {} ===\n{}\n{}\n{}{}{}",
        inst.name,
        render::analyze_text(&inst.name, rep.dim(), &signature, &fixed, isotropic, &moved, duality_holds),
        render::decompose_text(&inst.name, &report, oracle.as_ref()),
        render::phi_text(&inst.name, &phi),
        render::uniqueness_text(&verdict),
        rivals_text,
    );

    emit(cli, &inst.name, "demo", payload, text);
    if !duality_holds {
        return Err(CliError::Internal("duality check failed".into()));
    }
    Ok(())
}

fn cmd_export(target: &str) -> Result<(), CliError> {
    if let Some(inst) = find_corpus(target) {
        print!("{}", export_instance(&instance_from_corpus(&inst)));
        return Ok(());
    }
    let path = Path::new(target);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Parse(ParseError { path: target.into(), message: e.to_string() })
        })?;
        let file = parse_instance(&text).map_err(CliError::Parse)?;
        file.representation().map_err(|e| CliError::Invariant(e.to_string()))?;
        print!("{}", export_instance(&file));
        return Ok(());
    }
    Err(CliError::BadReference(format!(
        "unknown instance {target:?}: not a built-in name and not a file"
    )))
}
