//! Command-line front end. All logic lives in the library; this module maps
//! subcommands onto it and fixes the exit-code contract:
//!
//! 0 ok / Exists / Found, 1 usage, 2 verification failure,
//! 3 NotExists / Exhausted, 4 OpenException / Timeout, 5 missing ingredient.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::blockgen;
use crate::catalog::{self, Catalog};
use crate::constructions::DesignLibrary;
use crate::design::{
    verify_dgdd_limited, verify_gdd_limited, verify_resolution_limited, Design, GroupType,
};
use crate::error::Error;
use crate::gddx;
use crate::oracle::{self, Verdict};
use crate::recipe;
use crate::search::{self, SearchLimits, SearchOutcome};
use crate::{algebra, Result};

#[derive(Parser)]
#[command(
    name = "gddtool",
    version,
    about = "construct, expand and verify 4-GDDs"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Develop a base-block spec (.gdd) into a full design (.gddx).
    Expand {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the pair-coverage axioms of an expanded design.
    Verify {
        file: PathBuf,
        /// List every witness instead of the first ten.
        #[arg(long)]
        full: bool,
    },
    /// Existence status of type g^u (no m) or g^u m^1.
    Status {
        g: usize,
        u: usize,
        m: Option<usize>,
        /// Upgrade an undecided verdict when the catalog holds a verified
        /// design of the exact type.
        #[arg(long)]
        use_catalog: bool,
    },
    /// Exact-cover search for a 4-GDD of the given type.
    Search {
        r#type: String,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        timeout: Option<u64>,
        /// Extended profile for long refutations (no node cap).
        #[arg(long)]
        slow: bool,
        /// Disable the first-block canonicalization.
        #[arg(long)]
        no_symmetry: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a construction recipe (.rcp).
    Construct {
        recipe: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print q - 1 mutually orthogonal Latin squares of side q.
    Mols { q: usize },
    /// Transversal design TD(k, q) as a .gddx file.
    Td {
        k: usize,
        q: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Resolvable k-GDD of type q^k as a .gddx file.
    Rgdd {
        k: usize,
        q: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Operations over the shipped catalog of base-block specs.
    Catalog {
        #[arg(value_parser = ["verify", "list", "manifest"], default_value = "verify")]
        action: String,
        /// Worker threads for the verification sweep.
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// Entry point used by the `gddtool` binary; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version output
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::MissingIngredient(..) | Error::ForbiddenCase { .. } => 5,
        Error::Verification(_)
        | Error::MalformedDesign(_)
        | Error::DuplicateBlock(_)
        | Error::CollapsedBlock(_)
        | Error::MissingHoles
        | Error::MissingResolution => 2,
        Error::Recipe { source, .. } => exit_code_for(source),
        _ => 1,
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Expand { spec, output } => cmd_expand(spec, output.as_deref(), cli.json),
        Command::Verify { file, full } => cmd_verify(file, *full, cli.json),
        Command::Status {
            g,
            u,
            m,
            use_catalog,
        } => Ok(cmd_status(*g, *u, *m, *use_catalog, cli.json)),
        Command::Search {
            r#type,
            timeout,
            slow,
            no_symmetry,
            output,
        } => cmd_search(
            r#type,
            *timeout,
            *slow,
            *no_symmetry,
            output.as_deref(),
            cli.json,
        ),
        Command::Construct { recipe, output } => cmd_construct(recipe, output.as_deref(), cli.json),
        Command::Mols { q } => cmd_mols(*q, cli.json),
        Command::Td { k, q, output } => {
            let d = algebra::transversal_design(*k, *q)?;
            emit_design(&d, output.as_deref(), cli.json)?;
            Ok(0)
        }
        Command::Rgdd { k, q, output } => {
            let d = algebra::rgdd(*k, *q)?;
            emit_design(&d, output.as_deref(), cli.json)?;
            Ok(0)
        }
        Command::Catalog { action, threads } => cmd_catalog(action, *threads, cli.json),
    }
}

fn emit_design(design: &Design, output: Option<&std::path::Path>, json: bool) -> Result<()> {
    match output {
        Some(path) => {
            gddx::write_file(path, design)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "type": design.group_type().to_string(),
                        "blocks": design.blocks().len(),
                        "output": path.display().to_string(),
                        "digest": gddx::digest(design),
                    })
                );
            } else {
                println!(
                    "{}: {} blocks -> {}",
                    design.group_type(),
                    design.blocks().len(),
                    path.display()
                );
            }
        }
        None => print!("{}", gddx::serialize(design)),
    }
    Ok(())
}

fn cmd_expand(
    spec_path: &std::path::Path,
    output: Option<&std::path::Path>,
    json: bool,
) -> Result<i32> {
    let spec = blockgen::read_spec_file(spec_path)?;
    let design = blockgen::expand(&spec)?;
    let report = verify_gdd_limited(&design, 10);
    if let Some(check) = blockgen::check_signature(&spec) {
        if !check.matches {
            eprintln!("warning: signature mismatch: {}", check.diffs.join("; "));
        }
    } else if spec.signature.is_none() {
        eprintln!("warning: {} has no signature", spec.name);
    }
    if !report.ok {
        eprintln!("{}: verification failed\n{report}", spec.name);
        return Ok(2);
    }
    emit_design(&design, output, json)?;
    Ok(0)
}

fn cmd_verify(file: &std::path::Path, full: bool, json: bool) -> Result<i32> {
    let design = gddx::read_file(file)?;
    let limit = if full { usize::MAX } else { 10 };
    let mut reports = Vec::new();
    let gdd_report = if design.holes().is_some() {
        let r = verify_dgdd_limited(&design, limit)?;
        reports.push(("dgdd", r.clone()));
        r
    } else {
        let r = verify_gdd_limited(&design, limit);
        reports.push(("gdd", r.clone()));
        r
    };
    let mut ok = gdd_report.ok;
    if design.resolution().is_some() {
        let r = verify_resolution_limited(&design, limit)?;
        ok &= r.ok;
        reports.push(("resolution", r));
    }
    if json {
        let payload: Vec<_> = reports
            .iter()
            .map(|(kind, r)| json!({ "check": kind, "report": r }))
            .collect();
        println!(
            "{}",
            json!({
                "type": design.group_type().to_string(),
                "ok": ok,
                "checks": payload,
            })
        );
    } else {
        for (kind, r) in &reports {
            println!("{kind}: {r}");
        }
    }
    Ok(if ok { 0 } else { 2 })
}

fn cmd_status(g: usize, u: usize, m: Option<usize>, use_catalog: bool, json: bool) -> i32 {
    let mut status = match m {
        None => oracle::status_gu(g, u),
        Some(m) => oracle::status_gum(g, u, m),
    };
    if use_catalog && status.verdict == Verdict::OpenException {
        let t = GroupType::uniform_plus(g, u, m.unwrap_or(0));
        if let Ok(cat) = Catalog::open_default() {
            if cat
                .find_type(&t)
                .is_some_and(|e| cat.expand(&e.name).is_ok())
            {
                status = oracle::ExistenceStatus {
                    verdict: Verdict::Exists,
                    basis: "verified design on disk in the catalog".into(),
                };
            }
        }
    }
    if json {
        let congruences = match m {
            None => json!({
                "u_ge_4": u >= 4,
                "g(u-1) mod 3": g * (u.saturating_sub(1)) % 3,
                "g^2 u(u-1) mod 12": g * g * u * (u.saturating_sub(1)) % 12,
            }),
            Some(m) => json!({
                "u_ge_4": u >= 4,
                "m_le_g(u-1)/2": 2 * m <= g * u.saturating_sub(1),
                "gu mod 3": g * u % 3,
                "g(u-1)+m mod 3": (g * (u.saturating_sub(1)) + m) % 3,
                "g^2 u(u-1)+2gum mod 12": (g * g * u * u.saturating_sub(1) + 2 * g * u * m) % 12,
            }),
        };
        println!(
            "{}",
            json!({
                "g": g, "u": u, "m": m,
                "verdict": status.verdict,
                "basis": status.basis,
                "congruences": congruences,
            })
        );
    } else {
        let t = match m {
            None => format!("{g}^{u}"),
            Some(m) => format!("{g}^{u} {m}^1"),
        };
        println!("{t}: {:?} ({})", status.verdict, status.basis);
    }
    match status.verdict {
        Verdict::Exists => 0,
        Verdict::NotExists | Verdict::NecessaryFail => 3,
        Verdict::OpenException => 4,
    }
}

fn cmd_search(
    type_text: &str,
    timeout: Option<u64>,
    slow: bool,
    no_symmetry: bool,
    output: Option<&std::path::Path>,
    json: bool,
) -> Result<i32> {
    let t = match GroupType::parse(type_text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("usage: bad type {type_text:?}: {e}");
            return Ok(1);
        }
    };
    let mut limits = if slow {
        SearchLimits::slow()
    } else {
        SearchLimits::default()
    };
    if let Some(s) = timeout {
        limits.timeout = Duration::from_secs(s);
    }
    limits.symmetry_breaking = !no_symmetry;
    let outcome = search::solve_existence(&t, &limits)?;
    let (code, verdict) = match &outcome {
        SearchOutcome::Found(_) => (0, "Found"),
        SearchOutcome::Exhausted { .. } => (3, "Exhausted"),
        SearchOutcome::Timeout { .. } => (4, "Timeout"),
    };
    if json {
        let blocks = match &outcome {
            SearchOutcome::Found(d) => Some(d.blocks().len()),
            _ => None,
        };
        println!(
            "{}",
            json!({ "type": t.to_string(), "outcome": verdict, "blocks": blocks })
        );
    } else {
        println!("{t}: {verdict}");
    }
    if let SearchOutcome::Found(d) = &outcome {
        if let Some(path) = output {
            gddx::write_file(path, d)?;
        } else if !json {
            print!("{}", gddx::serialize(d));
        }
    }
    Ok(code)
}

fn cmd_construct(
    path: &std::path::Path,
    output: Option<&std::path::Path>,
    json: bool,
) -> Result<i32> {
    let text = std::fs::read_to_string(path)?;
    let r = recipe::parse(&text)?;
    let mut lib = match Catalog::open_default() {
        Ok(cat) => DesignLibrary::with_catalog(cat),
        Err(_) => DesignLibrary::new(),
    };
    let built = recipe::run(&r, &mut lib)?;
    if json {
        println!(
            "{}",
            json!({
                "type": built.design.group_type().to_string(),
                "blocks": built.design.blocks().len(),
                "provenance": built.provenance.to_string(),
            })
        );
    } else {
        println!("{}", built.provenance);
    }
    if let Some(out) = output {
        gddx::write_file(out, &built.design)?;
    } else if !json {
        print!("{}", gddx::serialize(&built.design));
    }
    Ok(0)
}

fn cmd_mols(q: usize, json: bool) -> Result<i32> {
    let set = algebra::mols(q)?;
    if q == 2 {
        eprintln!("warning: a single square of side 2 is degenerate");
    }
    if json {
        println!(
            "{}",
            json!({ "side": q, "count": set.squares.len(), "squares": set.squares })
        );
    } else {
        for (i, sq) in set.squares.iter().enumerate() {
            println!("square {i}:");
            for row in sq {
                let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                println!("  {}", cells.join(" "));
            }
        }
    }
    Ok(0)
}

fn cmd_catalog(action: &str, threads: Option<usize>, json: bool) -> Result<i32> {
    let cat = Catalog::open_default()?;
    match action {
        "list" => {
            if json {
                let entries: Vec<_> = cat
                    .entries
                    .iter()
                    .map(|e| json!({ "name": e.name, "type": e.group_type.to_string() }))
                    .collect();
                println!("{}", json!(entries));
            } else {
                for e in &cat.entries {
                    println!("{}\t{}", e.name, e.group_type);
                }
            }
            Ok(0)
        }
        "verify" | "manifest" => {
            let summary = match threads {
                Some(n) => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build()
                        .map_err(|e| Error::Internal(e.to_string()))?;
                    pool.install(|| catalog::verify_all(&cat))
                }
                None => catalog::verify_all(&cat),
            };
            if action == "manifest" {
                if summary.failures > 0 {
                    eprintln!("refusing to render a manifest over failing entries");
                    return Ok(2);
                }
                print!("{}", catalog::render_manifest(&cat, &summary));
                return Ok(0);
            }
            if json {
                println!("{}", serde_json::to_string(&summary).unwrap());
            } else {
                for r in &summary.entries {
                    let status = if r.problems.is_empty() { "ok" } else { "FAIL" };
                    let sig = match r.signature_ok {
                        Some(true) => "sig ok",
                        Some(false) => "sig MISMATCH",
                        None => "no sig",
                    };
                    println!(
                        "{:<16} {:<12} {:>6} blocks  {status}  {sig}",
                        r.name, r.group_type, r.blocks
                    );
                    for p in &r.problems {
                        println!("    {p}");
                    }
                }
                for w in &summary.warnings {
                    println!("warning: {w}");
                }
                println!(
                    "{} entries, {} failures",
                    summary.entries.len(),
                    summary.failures
                );
            }
            Ok(if summary.failures == 0 { 0 } else { 2 })
        }
        _ => Ok(1),
    }
}
