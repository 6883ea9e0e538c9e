//! The subcommands, each returning text and JSON renderings plus an exit code.

use std::path::{Path, PathBuf};
use std::time::Instant;

use freeloop_core::symcomb::{check_sigma_h_relation, verify_alternating_multiset_sum, verify_stirling_alternating};
use freeloop_core::{groebner, ideal_intersect, normal_form, Completion, GroebnerBasis};
use freeloop_ss::engine::assemble_final_page;
use freeloop_ss::record::{FlagloopResult, VerifyReport};
use freeloop_ss::su4::verify_su4;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{build_ring, parse_all, read_entries};

/// What a command prints and how the process exits.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, exit: 0 }
    }
}

/// Ring and completion settings shared by the polynomial commands.
#[derive(Debug, Clone, Default)]
pub struct RingArgs {
    pub vars: Option<String>,
    pub order: Option<String>,
    pub max_pairs: Option<usize>,
}

impl RingArgs {
    fn completion(&self) -> Completion {
        Completion { bounds: Vec::new(), max_pairs: self.max_pairs }
    }
}

fn basis_report(basis: &GroebnerBasis) -> Report {
    let ring = basis.ring();
    let lines = basis.to_strings();
    Report::ok(
        lines.join("\n"),
        json!({
            "vars": ring.ctx().names(),
            "order": ring.order().describe(ring.ctx()),
            "basis": lines,
        }),
    )
}

pub fn cmd_gb(input: &Path, args: &RingArgs) -> Result<Report, CliError> {
    let texts = read_entries(input)?;
    if texts.is_empty() {
        return Err(CliError::Usage(format!("{}: no generators", input.display())));
    }
    let ring = build_ring(args.vars.as_deref(), args.order.as_deref(), &texts)?;
    let gens: Vec<_> = parse_all(&ring, &texts)?.into_iter().filter(|p| !p.is_zero()).collect();
    if gens.is_empty() {
        return Err(CliError::Usage(format!("{}: no nonzero generators", input.display())));
    }
    Ok(basis_report(&groebner(&gens, &ring, &args.completion())?))
}

pub fn cmd_intersect(a: &Path, b: &Path, args: &RingArgs) -> Result<Report, CliError> {
    let (ta, tb) = (read_entries(a)?, read_entries(b)?);
    let all: Vec<&String> = ta.iter().chain(&tb).collect();
    let ring = build_ring(args.vars.as_deref(), args.order.as_deref(), &all)?;
    let (ga, gb) = (parse_all(&ring, &ta)?, parse_all(&ring, &tb)?);
    Ok(basis_report(&ideal_intersect(&ga, &gb, &ring, &args.completion())?))
}

pub fn cmd_nf(basis_file: &Path, poly: &str, args: &RingArgs) -> Result<Report, CliError> {
    let texts = read_entries(basis_file)?;
    let mut all = texts.clone();
    all.push(poly.to_string());
    let ring = build_ring(args.vars.as_deref(), args.order.as_deref(), &all)?;
    let gens: Vec<_> = parse_all(&ring, &texts)?.into_iter().filter(|p| !p.is_zero()).collect();
    if gens.is_empty() {
        return Err(CliError::Usage(format!("{}: no nonzero generators", basis_file.display())));
    }
    let basis = groebner(&gens, &ring, &args.completion())?;
    let f = ring.parse(poly)?;
    let r = normal_form(&f, basis.generators());
    Ok(Report::ok(r.to_string(), json!({ "input": f.to_string(), "normal_form": r.to_string(), "in_ideal": r.is_zero() })))
}

#[derive(Debug, Serialize)]
struct Manifest {
    schema: u32,
    n: usize,
    cap: u32,
    threads: usize,
    result_file: String,
    cells: usize,
    torsion_orders: Vec<u64>,
    checks_clean: bool,
    assemble_ms: u128,
    serialize_ms: u128,
}

/// Runs the spectral sequence and writes `result.json` and `manifest.json`
/// into `out` when given.
pub fn cmd_flagloop(n: usize, cap: u32, out: Option<&Path>) -> Result<Report, CliError> {
    let start = Instant::now();
    let fp = assemble_final_page(n, cap)?;
    let assemble_ms = start.elapsed().as_millis();
    let start = Instant::now();
    let result = FlagloopResult::from_final(&fp);
    let text = result.to_json();
    let serialize_ms = start.elapsed().as_millis();
    let manifest = Manifest {
        schema: result.schema,
        n,
        cap,
        threads: rayon::current_num_threads(),
        result_file: "result.json".into(),
        cells: result.cells.len(),
        torsion_orders: result.torsion.order_set(),
        checks_clean: result.checks.iter().all(|c| c.ok()),
        assemble_ms,
        serialize_ms,
    };
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|source| io_err(dir, source))?;
        write(&dir.join("result.json"), &text)?;
        write(&dir.join("manifest.json"), &serde_json::to_string_pretty(&manifest).expect("manifest serializes"))?;
    }
    let last = result.pages.last().expect("at least one page");
    let mut summary = format!("rank {n}, cap {cap}: {} cells\n", result.cells.len());
    summary += &format!("final ranks by total degree: {:?}\n", last.ranks);
    summary += &format!("torsion orders: {:?}\n", manifest.torsion_orders);
    summary += &format!("page checks: {}", if manifest.checks_clean { "clean" } else { "FAILED" });
    let exit = if manifest.checks_clean { 0 } else { 1 };
    Ok(Report { text: summary, json: serde_json::to_value(&manifest).expect("manifest serializes"), exit })
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io { path: path.display().to_string(), source }
}

fn write(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| io_err(path, source))
}

fn report_value(r: &VerifyReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

pub fn cmd_verify_su4(path: &Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| io_err(path, source))?;
    let result = FlagloopResult::from_json(&text)?;
    let report = verify_su4(&result)?;
    let exit = if report.passed() { 0 } else { 1 };
    Ok(Report { text: report.to_string().trim_end().to_string(), json: report_value(&report), exit })
}

/// The combinatorial identity grids, plus `samples` seeded spot checks
/// beyond the grid.
pub fn cmd_identities(seed: u64, samples: usize) -> Result<Report, CliError> {
    let mut failures = Vec::new();
    for n in 1..=12u64 {
        for m in 1..=12u64 {
            if !verify_alternating_multiset_sum(n, m) {
                failures.push(format!("alternating multiset sum n={n} m={m}"));
            }
        }
    }
    for n in 1..=15u64 {
        if !verify_stirling_alternating(n) {
            failures.push(format!("Stirling alternating sum n={n}"));
        }
    }
    for n in 1..=6usize {
        for m in 1..=n {
            if !check_sigma_h_relation(n, m) {
                failures.push(format!("sigma/h relation n={n} m={m}"));
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut drawn = Vec::new();
    for _ in 0..samples {
        let (n, m) = (rng.random_range(1..=40u64), rng.random_range(1..=40u64));
        drawn.push((n, m));
        if !verify_alternating_multiset_sum(n, m) {
            failures.push(format!("alternating multiset sum n={n} m={m} (sampled)"));
        }
        let k = rng.random_range(1..=30u64);
        if !verify_stirling_alternating(k) {
            failures.push(format!("Stirling alternating sum n={k} (sampled)"));
        }
    }
    let text = if failures.is_empty() {
        format!("all identity grids hold; {samples} sampled cases with seed {seed} hold")
    } else {
        failures.join("\n")
    };
    let exit = if failures.is_empty() { 0 } else { 1 };
    Ok(Report { text, json: json!({ "seed": seed, "samples": drawn, "failures": failures }), exit })
}
