//! `ballmap` command-line front end.
//!
//! Every subcommand reads JSON from files (or `-` for stdin) and writes a
//! JSON report to stdout or `--out`. Exit codes: 0 success, 1 property
//! failure, 2 input error, 3 numerical failure.

mod error;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ballmap::ball_map::{is_proper, lowest_terms_check, sphere_tensor, tensor_components, LOWEST_TERMS_LINES};
use ballmap::constructions::{
    construct_even_quartic, construct_invariant_map, construct_with_denominator, example_map, ConstructionResult,
};
use ballmap::normal_form::{is_normal_form, normalize, sigma_invariants, DEFAULT_NORMAL_FORM_TOL};
use ballmap::symmetry::{
    containment_audit, enumerate_members_with_target, membership_with_threshold, sigma_group_structure, CandidateFamily,
    GroupId, MEMBERSHIP_THRESHOLD,
};
use ballmap::{InvariantPolynomialSpec, PolyMap, Polynomial, RationalBallMap, UnitaryElement};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "ballmap", version, about = "Proper rational maps between balls: verification, normal forms, symmetry groups")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Seed for sphere sampling and random candidate families.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance override: normal-form checks for `verify`, membership
    /// threshold for `groups --unitary`, block grouping for `groups --structure`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Sphere samples for properness checks.
    #[arg(long, global = true, default_value_t = 500)]
    samples: usize,
    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check properness, lowest terms and normal form of a map.
    Verify {
        /// Map JSON file, or `-` for stdin.
        map: PathBuf,
    },
    /// Bring a map to normal form and report the certificate.
    Normalize {
        map: PathBuf,
        /// Also write the normalized map here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Symmetry-group membership, enumeration and containment audits.
    Groups(GroupsArgs),
    /// Build maps from the standard constructions.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        /// Also write the constructed map here.
        #[arg(long, global = true)]
        emit: Option<PathBuf>,
    },
    /// Tensor selected components by a map `h` with `||h||^2 = ||z||^(2k)`.
    Tensor {
        map: PathBuf,
        /// Comma-separated component indices.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        /// JSON array of polynomials forming `h`.
        #[arg(long = "with", conflicts_with = "power", required_unless_present = "power")]
        with: Option<PathBuf>,
        /// Use the normalized `k`-th tensor power of the identity as `h`.
        #[arg(long)]
        power: Option<usize>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["unitary", "enumerate", "audit", "structure"]))]
struct GroupsArgs {
    map: PathBuf,
    /// Group: a, gamma, g, t, h, d, sigma, or delta(a,b) with `*` wildcards.
    #[arg(long, default_value = "g")]
    group: GroupId,
    /// Test a single unitary given as JSON.
    #[arg(long)]
    unitary: Option<PathBuf>,
    /// Target unitary for A, T and H.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Filter a candidate family through the membership test.
    #[arg(long, value_enum)]
    enumerate: Option<Family>,
    /// Check the containment chain on every candidate of a family.
    #[arg(long, value_enum)]
    audit: Option<Family>,
    /// Report the block structure of the sigma group.
    #[arg(long)]
    structure: bool,
    /// Number of torus samples for `--enumerate torus`.
    #[arg(long, default_value_t = 32)]
    torus_samples: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    SignDiagonal,
    SignedPermutation,
    Torus,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Map with a prescribed denominator `1 + eps G`.
    Denom {
        /// Polynomial JSON for `G`.
        #[arg(long = "G", alias = "g")]
        g: PathBuf,
        #[arg(long)]
        d: usize,
        /// Use `1 + G(eps z)` instead of `1 + eps G`.
        #[arg(long)]
        dilate: bool,
    },
    /// Even degree-4 map with prescribed sigma invariants.
    EvenQuartic {
        #[arg(long, value_delimiter = ',', required = true)]
        sigma: Vec<f64>,
    },
    /// Polynomial map whose form symmetries are those of a list of forms.
    Invariant {
        /// JSON `{"n": int, "forms": [RealForm, ...]}`.
        #[arg(long)]
        spec: PathBuf,
    },
    /// Degree-4 map into B_7 built from the quadratic homogeneous map, with sigma invariants (sigma1, sigma2).
    Example {
        #[arg(long)]
        sigma1: f64,
        #[arg(long)]
        sigma2: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let body = json!({ "v": SCHEMA_VERSION, "error": { "code": e.code(), "message": e.to_string() } });
            eprintln!("{}", serde_json::to_string(&body).expect("error report serializes"));
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Verify { map } => verify(cfg, &read_json(map)?),
        Command::Normalize { map, emit } => {
            let out = normalize(&read_json::<RationalBallMap>(map)?)?;
            emit_map(emit.as_deref(), &out.map)?;
            write_report(cfg, &json!({ "v": SCHEMA_VERSION, "sigma": out.certificate.sigma, "certificate": out.certificate, "map": out.map }))?;
            Ok(0)
        }
        Command::Groups(args) => groups(cfg, args),
        Command::Construct { kind, emit } => {
            let result = construct(kind)?;
            emit_map(emit.as_deref(), &result.map)?;
            let mut report = serde_json::to_value(&result)?;
            report["v"] = json!(SCHEMA_VERSION);
            write_report(cfg, &report)?;
            Ok(0)
        }
        Command::Tensor { map, indices, with, power, emit } => {
            let f: RationalBallMap = read_json(map)?;
            let h = match (with, power) {
                (Some(path), _) => PolyMap::new(f.n(), read_json::<Vec<Polynomial>>(path)?)?,
                (None, Some(k)) => sphere_tensor(f.n(), *k),
                (None, None) => unreachable!("clap requires one of --with and --power"),
            };
            let t = tensor_components(&f, indices, &h)?;
            emit_map(emit.as_deref(), &t)?;
            let properness = is_proper(&t, cfg.samples, cfg.seed);
            let proper = properness.verdict;
            write_report(cfg, &json!({ "v": SCHEMA_VERSION, "proper": proper, "properness": properness, "map": t }))?;
            Ok(if proper { 0 } else { 1 })
        }
    }
}

fn verify(cfg: &RunConfig, f: &RationalBallMap) -> Result<u8, CliError> {
    let properness = is_proper(f, cfg.samples, cfg.seed);
    let lowest = lowest_terms_check(f, LOWEST_TERMS_LINES, cfg.seed);
    let nf = is_normal_form(f, cfg.tol.unwrap_or(DEFAULT_NORMAL_FORM_TOL));
    let sigma = sigma_invariants(f).ok().map(|s| s.values);
    let report = json!({
        "v": SCHEMA_VERSION,
        "proper": properness.verdict,
        "lowest_terms": lowest.verdict,
        "normal_form": nf.is_normal,
        "degree": f.degree(),
        "dims": { "n": f.n(), "N": f.target_dim() },
        "sigma": sigma,
        "details": { "properness": properness, "lowest_terms": lowest, "normal_form": nf },
    });
    write_report(cfg, &report)?;
    Ok(if properness.verdict { 0 } else { 1 })
}

fn groups(cfg: &RunConfig, args: &GroupsArgs) -> Result<u8, CliError> {
    let f: RationalBallMap = read_json(&args.map)?;
    let threshold = cfg.tol.unwrap_or(MEMBERSHIP_THRESHOLD);
    let target: Option<UnitaryElement> = args.target.as_deref().map(read_json).transpose()?;
    let family = |fam: Family| match fam {
        Family::SignDiagonal => CandidateFamily::SignDiagonal,
        Family::SignedPermutation => CandidateFamily::SignedPermutation,
        Family::Torus => CandidateFamily::DiagonalTorus { samples: args.torus_samples, seed: cfg.seed },
    };
    let report = if let Some(path) = &args.unitary {
        let u: UnitaryElement = read_json(path)?;
        let verdict = membership_with_threshold(&f, args.group, &u, target.as_ref(), threshold)?;
        json!({ "v": SCHEMA_VERSION, "group": args.group.to_string(), "verdict": verdict })
    } else if let Some(fam) = args.enumerate {
        let e = enumerate_members_with_target(&f, args.group, &family(fam), target.as_ref())?;
        json!({
            "v": SCHEMA_VERSION,
            "group": args.group.to_string(),
            "family": fam.to_possible_value().map(|p| p.get_name().to_string()),
            "count": e.members.len(),
            "closed": e.closed,
            "members": e.members,
        })
    } else if let Some(fam) = args.audit {
        let audit = containment_audit(&f, &family(fam))?;
        let clean = audit.violations.is_empty();
        write_report(cfg, &json!({ "v": SCHEMA_VERSION, "clean": clean, "audit": audit }))?;
        return Ok(if clean { 0 } else { 1 });
    } else {
        let sigma = sigma_invariants(&f)?.values;
        let tol = cfg.tol.unwrap_or(1e-9);
        let structure = sigma_group_structure(&sigma, tol);
        json!({ "v": SCHEMA_VERSION, "sigma": sigma, "structure": structure.to_string(), "blocks": structure })
    };
    write_report(cfg, &report)?;
    Ok(0)
}

fn construct(kind: &ConstructKind) -> Result<ConstructionResult, CliError> {
    Ok(match kind {
        ConstructKind::Denom { g, d, dilate } => construct_with_denominator(&read_json(g)?, *d, *dilate)?,
        ConstructKind::EvenQuartic { sigma } => construct_even_quartic(sigma)?,
        ConstructKind::Invariant { spec } => construct_invariant_map(&read_json::<InvariantPolynomialSpec>(spec)?)?,
        ConstructKind::Example { sigma1, sigma2 } => {
            let map = example_map(*sigma1, *sigma2)?;
            let properness = is_proper(&map, 500, 0);
            let lowest_terms = lowest_terms_check(&map, LOWEST_TERMS_LINES, 0);
            ConstructionResult {
                map,
                epsilon: 0.0,
                properness,
                lowest_terms,
                psd_log: Vec::new(),
                half_epsilon_admissible: true,
            }
        }
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io { path: "-".into(), source: e })?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.display().to_string(), source: e })
}

fn render<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn write_to(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

fn emit_map(path: Option<&Path>, f: &RationalBallMap) -> Result<(), CliError> {
    match path {
        Some(p) => write_to(p, &render(f)?),
        None => Ok(()),
    }
}

fn write_report(cfg: &RunConfig, report: &Value) -> Result<(), CliError> {
    let text = render(report)?;
    match &cfg.out {
        Some(p) => write_to(p, &text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })
        }
    }
}
