//! Command-line surface: verify matrices, analyze seeds, apply morphisms,
//! twist seeds, run the 2×2 classification and the roots brute force, export
//! catalog entries, and search for prescribed spectra.
//!
//! Exit codes: 0 when every requested check passed, 1 for a failed
//! verification or claim, 2 for input errors. Identical invocations produce
//! byte-identical output (fixed ordering, no timestamps).

use crate::butson::{ButsonError, ButsonMatrix};
use crate::catalog;
use crate::morphism::{self, MorphismError, MorphismSeed};
use crate::search::{self, Template};
use crate::spectra::{self, SpectrumClaim};
use clap::{Parser, Subcommand};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "butson",
    version,
    about = "Exact arithmetic for Butson Hadamard matrices and the plug-in morphisms between Butson classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a matrix file for membership in But(n, k)
    Verify {
        /// Matrix in the butson text format
        file: PathBuf,
    },
    /// Certified spectrum, Hadamard-power set, and complete domains of a seed
    Analyze {
        /// Catalog name (e.g. M8) or path to a matrix file
        seed: String,
        /// Order/denominator search bound (default 4*lcm(24, k), or BUTSON_BOUND)
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Apply the plug-in morphism of a seed to an input matrix
    Morph {
        /// Catalog name or path to the seed matrix M
        #[arg(long)]
        seed: String,
        /// Input matrix H in the butson text format
        #[arg(long)]
        input: PathBuf,
        /// Pre-scale H by zeta_k^e before the soundness check, written e/k
        #[arg(long)]
        scale: Option<String>,
        /// Write the image to this file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Scale a seed by zeta_t and report the twisted power set
    Twist {
        #[arg(long)]
        seed: String,
        /// Twist parameter, coprime to the seed's eigenvalue order
        #[arg(short, long)]
        t: u64,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Classify the finite-order members of But(2, ell)
    Classify2 {
        #[arg(long)]
        ell: u64,
        /// Worker threads for the enumeration (output is deterministic)
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write one JSON record per matrix to this file
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Roots of unity with Re(alpha) = sqrt(2)*Re(lambda), orders up to a bound
    Roots {
        #[arg(long, default_value_t = 24)]
        bound: u64,
    },
    /// List, export, or re-verify the built-in seed matrices
    Catalog {
        #[command(subcommand)]
        action: Option<CatalogAction>,
    },
    /// Search But(n, ell) for a matrix with a prescribed spectrum
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: u64,
        /// Target spectrum, written m:K:e1,e2,... meaning sqrt(m)*zeta_K^{e_i}
        #[arg(long)]
        spectrum: String,
        /// Number of fully assembled candidates to certify before giving up
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Seed for the randomized row order
        #[arg(long, default_value_t = 0)]
        rng: u64,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// One line per entry
    List,
    /// Export an entry in the butson text format
    Show { name: String },
    /// Re-derive every stored claim
    Verify,
}

/// Outcome of a subcommand: report text plus the failure class, if any.
enum Outcome {
    Pass,
    /// A requested check failed (exit 1).
    Failed,
}

#[derive(Debug)]
enum CliError {
    /// Input problems: bad files, bad flags, unknown names (exit 2).
    Input(String),
    /// A verification or claim failed (exit 1).
    Check(String),
}

impl From<ButsonError> for CliError {
    fn from(e: ButsonError) -> Self {
        match e {
            ButsonError::NotHadamard { .. } => CliError::Check(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<MorphismError> for CliError {
    fn from(e: MorphismError) -> Self {
        match e {
            MorphismError::Unsound(_)
            | MorphismError::ClaimRejected { .. }
            | MorphismError::Spectra(spectra::SpectraError::NotFiniteOrder { .. }) => {
                CliError::Check(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse(); // clap exits 2 on usage errors
    match dispatch(cli) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Failed) => 1,
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            1
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Verify { file } => cmd_verify(&file),
        Command::Analyze { seed, bound } => cmd_analyze(&seed, bound),
        Command::Morph {
            seed,
            input,
            scale,
            out,
            bound,
        } => cmd_morph(&seed, &input, scale.as_deref(), out.as_deref(), bound),
        Command::Twist { seed, t, bound } => cmd_twist(&seed, t, bound),
        Command::Classify2 {
            ell,
            jobs,
            report,
            bound,
        } => cmd_classify2(ell, jobs, report.as_deref(), bound),
        Command::Roots { bound } => cmd_roots(bound),
        Command::Catalog { action } => cmd_catalog(action),
        Command::Search {
            n,
            ell,
            spectrum,
            budget,
            rng,
        } => cmd_search(n, ell, &spectrum, budget, rng),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<ButsonMatrix, CliError> {
    Ok(ButsonMatrix::parse(&read_file(path)?)?)
}

/// Bound priority: explicit flag, then BUTSON_BOUND, then 4*lcm(24, k).
fn resolve_bound(flag: Option<u64>, root_order: u64) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("BUTSON_BOUND") {
        Ok(s) => s
            .parse::<u64>()
            .map_err(|_| CliError::Input(format!("BUTSON_BOUND is not an integer: '{s}'"))),
        Err(_) => Ok(spectra::default_bound(root_order)),
    }
}

/// A seed by catalog name or file path.
fn load_seed(name_or_path: &str, bound: Option<u64>) -> Result<(String, MorphismSeed), CliError> {
    let matrix = if let Some(entry) = catalog::get(name_or_path) {
        entry.matrix.clone()
    } else if Path::new(name_or_path).exists() {
        read_matrix(Path::new(name_or_path))?
    } else {
        return Err(CliError::Input(format!(
            "'{name_or_path}' is neither a catalog name ({}) nor a file",
            catalog::names().join(", ")
        )));
    };
    let bound = resolve_bound(bound, matrix.root_order())?;
    let seed = MorphismSeed::analyze(matrix, bound)?;
    Ok((name_or_path.to_string(), seed))
}

fn set_string(set: impl IntoIterator<Item = u64>) -> String {
    let items: Vec<String> = set.into_iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn cmd_verify(file: &Path) -> Result<Outcome, CliError> {
    let text = read_file(file)?;
    match ButsonMatrix::parse(&text) {
        Ok(h) => {
            println!("But({},{}): OK", h.order(), h.root_order());
            Ok(Outcome::Pass)
        }
        Err(ButsonError::NotHadamard { row_a, row_b }) => {
            println!("FAIL: rows {row_a} and {row_b} are not orthogonal");
            Ok(Outcome::Failed)
        }
        Err(e) => Err(e.into()),
    }
}

fn seed_summary(name: &str, seed: &MorphismSeed) -> String {
    let mut out = String::new();
    let m = seed.matrix();
    let _ = writeln!(
        out,
        "seed {name}: member of But({},{})",
        m.order(),
        m.root_order()
    );
    let _ = writeln!(out, "spectrum: {} [certified]", seed.spectrum());
    let _ = writeln!(out, "unitary order: {}", seed.period());
    let _ = writeln!(
        out,
        "hadamard powers T (mod {}): {}",
        seed.period(),
        set_string(seed.power_set().keys().copied())
    );
    let orders: Vec<String> = seed
        .power_set()
        .iter()
        .map(|(i, b)| format!("{i}:{}", b.root_order()))
        .collect();
    let _ = writeln!(
        out,
        "output root orders: {{{}}}; effective {}",
        orders.join(","),
        seed.effective_output_order()
    );
    let domains = seed.complete_domains();
    if domains.is_empty() {
        let _ = writeln!(out, "complete domains: none");
    } else {
        for (d, offsets) in &domains {
            let image = seed
                .output_order_for((0..*d).map(|j| offsets[0] + j * (seed.period() / d)))
                .expect("domain lies inside T");
            let _ = writeln!(
                out,
                "complete domains: d={d} offsets {} -> complete morphism But(n,{d}) -> But({}n,{image})",
                set_string(offsets.iter().copied()),
                seed.degree()
            );
        }
    }
    let _ = writeln!(
        out,
        "coprime probe: {}",
        morphism::coprime_conjecture_probe(seed)
    );
    out
}

fn cmd_analyze(seed_arg: &str, bound: Option<u64>) -> Result<Outcome, CliError> {
    let (name, seed) = load_seed(seed_arg, bound)?;
    print!("{}", seed_summary(&name, &seed));
    Ok(Outcome::Pass)
}

fn parse_scale(s: &str) -> Result<(u64, u64), CliError> {
    let err = || CliError::Input(format!("scale must be written e/k, got '{s}'"));
    let (e, k) = s.split_once('/').ok_or_else(err)?;
    let e: u64 = e.trim().parse().map_err(|_| err())?;
    let k: u64 = k.trim().parse().map_err(|_| err())?;
    if k == 0 {
        return Err(err());
    }
    Ok((e, k))
}

fn cmd_morph(
    seed_arg: &str,
    input: &Path,
    scale: Option<&str>,
    out: Option<&Path>,
    bound: Option<u64>,
) -> Result<Outcome, CliError> {
    let (name, seed) = load_seed(seed_arg, bound)?;
    let mut h = read_matrix(input)?;
    println!(
        "input: But({},{}) from {}",
        h.order(),
        h.root_order(),
        input.display()
    );
    if let Some(s) = scale {
        let (e, k) = parse_scale(s)?;
        h = h.scale_by_root(k, e);
        println!(
            "scaled by zeta_{k}^{e}: now But({},{}) with entries {}",
            h.order(),
            h.root_order(),
            set_string(h.entry_set())
        );
    }
    let pair = morphism::check_sound(&h, &seed, None, None)?;
    println!(
        "sound pair with seed {name}: X={} Y={}",
        set_string(pair.x().iter().copied()),
        set_string(pair.y().iter().copied())
    );
    let image = pair.apply();
    println!(
        "image: But({},{}) (degree-{} morphism), re-verified",
        image.order(),
        image.root_order(),
        seed.degree()
    );
    match out {
        Some(path) => {
            std::fs::write(path, image.serialize())
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            println!("wrote {}", path.display());
        }
        None => print!("{}", image.serialize()),
    }
    Ok(Outcome::Pass)
}

fn cmd_twist(seed_arg: &str, t: u64, bound: Option<u64>) -> Result<Outcome, CliError> {
    let (name, seed) = load_seed(seed_arg, bound)?;
    println!(
        "seed {name}: period {}, T={}",
        seed.period(),
        set_string(seed.power_set().keys().copied())
    );
    let twisted = morphism::twist(&seed, t)?;
    println!("twisted by zeta_{t}:");
    print!("{}", seed_summary(&format!("zeta_{t}*{name}"), &twisted));
    Ok(Outcome::Pass)
}

fn template_json(t: &Template) -> serde_json::Value {
    match t {
        Template::Traceless { a, b } => {
            serde_json::json!({"kind": "traceless", "a": a, "b": b})
        }
        Template::M1 { a, b } => serde_json::json!({"kind": "M1", "a": a, "b": b}),
        Template::M2 { a, b, conjugated } => {
            serde_json::json!({"kind": "M2", "a": a, "b": b, "conjugated": conjugated})
        }
        Template::None => serde_json::json!({"kind": "none"}),
    }
}

fn matrix_json(m: &ButsonMatrix) -> serde_json::Value {
    let rows: Vec<Vec<u64>> = (0..m.order())
        .map(|r| (0..m.order()).map(|c| m.at(r, c)).collect())
        .collect();
    serde_json::json!({"k": m.root_order(), "rows": rows})
}

fn cmd_classify2(
    ell: u64,
    jobs: usize,
    report: Option<&Path>,
    bound: Option<u64>,
) -> Result<Outcome, CliError> {
    if !ell.is_multiple_of(2) {
        println!("But(2,{ell}) is empty: odd root orders admit no 2x2 members");
        return Ok(Outcome::Pass);
    }
    let bound = resolve_bound(bound, ell)?;
    let c = search::classify2_bounded(ell, jobs.max(1), bound);
    println!(
        "But(2,{ell}): {} matrices enumerated (order bound {})",
        c.total, c.bound
    );
    println!(
        "finite unitary order: {}; infinite within bound: {}",
        c.records.len(),
        c.infinite.len()
    );
    let counts = c.template_counts();
    let fmt_counts: Vec<String> = counts.iter().map(|(n, c)| format!("{n} {c}")).collect();
    println!("templates: {}", fmt_counts.join(", "));
    let mut ratio_orders: BTreeMap<u64, usize> = BTreeMap::new();
    for rec in &c.records {
        *ratio_orders.entry(rec.ratio.order()).or_insert(0) += 1;
    }
    let fmt_ratios: Vec<String> = ratio_orders
        .iter()
        .map(|(k, n)| format!("order {k}: {n}"))
        .collect();
    println!("eigenvalue ratios by order: {}", fmt_ratios.join(", "));

    if let Some(path) = report {
        let mut lines = String::new();
        for rec in &c.records {
            let obj = serde_json::json!({
                "matrix": matrix_json(&rec.matrix),
                "order": rec.order,
                "ratio": rec.ratio.to_string(),
                "eigen_orders": [rec.eigen_orders.0, rec.eigen_orders.1],
                "template": template_json(&rec.template),
                "spectrum": rec.spectrum,
            });
            lines.push_str(&obj.to_string());
            lines.push('\n');
        }
        for m in &c.infinite {
            let obj = serde_json::json!({
                "matrix": matrix_json(m),
                "order": serde_json::Value::Null,
            });
            lines.push_str(&obj.to_string());
            lines.push('\n');
        }
        std::fs::write(path, lines)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        println!("wrote {} records to {}", c.total, path.display());
    }

    let violations = c.violations();
    if violations.is_empty() {
        println!("violations: none");
        Ok(Outcome::Pass)
    } else {
        for v in &violations {
            println!("VIOLATION: {v}");
        }
        Ok(Outcome::Failed)
    }
}

fn cmd_roots(bound: u64) -> Result<Outcome, CliError> {
    if bound == 0 {
        return Err(CliError::Input("bound must be positive".into()));
    }
    let classes = search::roots_brute_force(bound);
    println!("pairs [alpha, lambda] with Re(alpha) = sqrt(2)*Re(lambda), orders <= {bound}:");
    for pair in &classes {
        println!("  {pair}");
    }
    println!("{} classes up to negation and conjugation", classes.len());
    Ok(Outcome::Pass)
}

fn cmd_catalog(action: Option<CatalogAction>) -> Result<Outcome, CliError> {
    match action.unwrap_or(CatalogAction::List) {
        CatalogAction::List => {
            for entry in catalog::entries() {
                println!(
                    "{:5} But({},{})  {}",
                    entry.name,
                    entry.matrix.order(),
                    entry.matrix.root_order(),
                    entry.description
                );
            }
            Ok(Outcome::Pass)
        }
        CatalogAction::Show { name } => match catalog::get(&name) {
            Some(entry) => {
                print!("{}", entry.matrix.serialize());
                Ok(Outcome::Pass)
            }
            None => Err(CliError::Input(format!(
                "unknown catalog entry '{name}' (have: {})",
                catalog::names().join(", ")
            ))),
        },
        CatalogAction::Verify => {
            let report = catalog::verify_all();
            for entry in &report.entries {
                for r in &entry.results {
                    match &r.outcome {
                        Ok(()) => println!("{}: {}: ok", entry.name, r.claim),
                        Err(e) => println!("{}: {}: FAIL ({e})", entry.name, r.claim),
                    }
                }
            }
            if report.passed() {
                println!("catalog: all claims verified");
                Ok(Outcome::Pass)
            } else {
                println!("catalog: FAILURES PRESENT");
                Ok(Outcome::Failed)
            }
        }
    }
}

fn parse_spectrum(s: &str) -> Result<SpectrumClaim, CliError> {
    let err = || {
        CliError::Input(format!(
            "spectrum must be written m:K:e1,e2,... (e.g. 4:5:1,2,3,4), got '{s}'"
        ))
    };
    let mut parts = s.split(':');
    let m: u64 = parts
        .next()
        .ok_or_else(err)?
        .trim()
        .parse()
        .map_err(|_| err())?;
    let k: u64 = parts
        .next()
        .ok_or_else(err)?
        .trim()
        .parse()
        .map_err(|_| err())?;
    let exps_str = parts.next().ok_or_else(err)?;
    if parts.next().is_some() || k == 0 {
        return Err(err());
    }
    let mut exps = Vec::new();
    for tok in exps_str.split(',') {
        exps.push(tok.trim().parse::<u64>().map_err(|_| err())?);
    }
    Ok(SpectrumClaim::new(m, k, exps))
}

fn cmd_search(
    n: usize,
    ell: u64,
    spectrum: &str,
    budget: u64,
    rng: u64,
) -> Result<Outcome, CliError> {
    if n == 0 || n > 6 {
        return Err(CliError::Input(format!(
            "n must be between 1 and 6, got {n}"
        )));
    }
    let target = parse_spectrum(spectrum)?;
    println!("searching But({n},{ell}) for spectrum {target} (budget {budget}, rng {rng})");
    let outcome = search::spectrum_search(n, ell, &target, budget, rng);
    match outcome.matrix {
        Some(m) => {
            println!("found after certifying {} candidates:", outcome.examined);
            print!("{}", m.serialize());
            Ok(Outcome::Pass)
        }
        None => {
            println!(
                "no certified matrix (examined {} candidates)",
                outcome.examined
            );
            Ok(Outcome::Failed)
        }
    }
}
