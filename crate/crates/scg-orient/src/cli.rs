//! Command-line front end: `check`, `discover`, `enumerate`, `verify`.
//!
//! Exit codes are a stable contract: 0 success or all queried verdicts
//! positive, 1 some negative verdict or disagreement, 2 usage or parse
//! error, 3 internal inconsistency. With `--json` the machine-readable
//! document owns stdout and the human-readable report moves to stderr.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::census::census_unbounded;
use crate::discovery::{default_window, discover};
use crate::error::DiscoveryError;
use crate::format::{parse_scg, parse_template, write_pdag, SeriesNames};
use crate::identifiability::{
    cde_identifiable, s_identifiable, total_effect_identifiable, EffectReport, SIdReport,
};
use crate::pdag::RuleSet;
use crate::scg::{compatible, Scg};
use crate::template::SeriesId;
use crate::verify::{verify_all, verify_theorem, Observed, DEFAULT_VERIFY_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

/// Environment variable supplying the default worker count.
pub const WORKERS_ENV: &str = "SCG_ORIENT_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "scg-orient",
    about = "Orientability of instantaneous edges from summary causal graphs",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-pair orientability verdicts, or effect-identifiability checks.
    Check(CheckArgs),
    /// Run oracle discovery on a template and dump the resulting graph.
    Discover(DiscoverArgs),
    /// Census of all summary graphs over n series.
    Enumerate(EnumerateArgs),
    /// Brute-force verification of verdicts against discovery.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Summary graph file.
    scg: PathBuf,
    /// Restrict to one pair of series names.
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    pair: Option<Vec<String>>,
    /// Switch to an effect-identifiability criterion.
    #[arg(long, value_enum, conflicts_with = "pair")]
    effect: Option<EffectKind>,
    /// Treatment series for `--effect total`.
    #[arg(long)]
    treatment: Option<String>,
    /// Outcome series for `--effect cde`.
    #[arg(long)]
    outcome: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EffectKind {
    Total,
    Cde,
}

#[derive(Args, Debug)]
struct DiscoverArgs {
    /// Template file.
    template: PathBuf,
    /// Background summary graph; defaults to the template's own summary.
    #[arg(long)]
    scg: Option<PathBuf>,
    /// Window length; defaults to two stationary periods plus one slice.
    #[arg(long)]
    window: Option<u32>,
    /// Which orientation rules the closure applies.
    #[arg(long, value_enum, default_value_t = RulesArg::All)]
    rules: RulesArg,
    /// Re-run with a one-slice-longer window and fail on interior changes.
    #[arg(long)]
    stability: bool,
    #[arg(long)]
    json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RulesArg {
    All,
    FirstOnly,
}

impl From<RulesArg> for RuleSet {
    fn from(r: RulesArg) -> RuleSet {
        match r {
            RulesArg::All => RuleSet::All,
            RulesArg::FirstOnly => RuleSet::FirstOnly,
        }
    }
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// Number of series (2 to 5 without --force).
    n: u32,
    #[arg(long)]
    workers: Option<usize>,
    /// Allow sizes beyond the default guard.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Number of series for an exhaustive run (2 or 3 without --force).
    n: Option<u32>,
    /// Verify a single summary graph file instead.
    #[arg(long, conflicts_with = "n")]
    scg: Option<PathBuf>,
    /// Maximal lag of the compatible templates.
    #[arg(long, default_value_t = 1)]
    gamma: u32,
    /// Window length; defaults from gamma.
    #[arg(long)]
    window: Option<u32>,
    /// Cap on templates per summary graph.
    #[arg(long, default_value_t = DEFAULT_VERIFY_BUDGET)]
    budget: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    force: bool,
    #[arg(long)]
    json: bool,
}

fn worker_default(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| {
            std::env::var(WORKERS_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        })
        .max(1)
}

/// Run with explicit streams; returns the process exit code.
pub fn run<O: Write, E: Write>(args: &[String], stdout: &mut O, stderr: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; version/help requests exit 0.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(
                if e.use_stderr() {
                    &mut *stderr as &mut dyn Write
                } else {
                    &mut *stdout as &mut dyn Write
                },
                "{e}"
            );
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(a) => cmd_check(a, stdout, stderr),
        Command::Discover(a) => cmd_discover(a, stdout, stderr),
        Command::Enumerate(a) => cmd_enumerate(a, stdout, stderr),
        Command::Verify(a) => cmd_verify(a, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

struct CmdError {
    code: i32,
    message: String,
}

impl CmdError {
    fn usage(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn inconsistent(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_INCONSISTENT,
            message: message.into(),
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CmdError> {
    fs::read_to_string(path)
        .map_err(|e| CmdError::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_scg(path: &PathBuf) -> Result<(Scg, SeriesNames), CmdError> {
    let text = read_file(path)?;
    parse_scg(&text).map_err(|e| CmdError::usage(format!("{}: {e}", path.display())))
}

fn resolve_series(names: &SeriesNames, token: &str) -> Result<SeriesId, CmdError> {
    names
        .resolve(token)
        .ok_or_else(|| CmdError::usage(format!("unknown series name `{token}`")))
}

fn pair_line(names: &SeriesNames, r: &SIdReport) -> String {
    format!(
        "PAIR {} {} {} {}",
        names.name(r.pair.lo()),
        names.name(r.pair.hi()),
        r.verdict.as_str(),
        r.reason.as_str()
    )
}

fn effect_line(names: &SeriesNames, kind: EffectKind, r: &EffectReport) -> String {
    let kind = match kind {
        EffectKind::Total => "total",
        EffectKind::Cde => "cde",
    };
    if r.identifiable {
        format!("EFFECT {kind} {} Identifiable", names.name(r.target))
    } else {
        let blocked: Vec<String> = r
            .blocking
            .iter()
            .map(|p| format!("{}:{}", names.name(p.lo()), names.name(p.hi())))
            .collect();
        format!(
            "EFFECT {kind} {} NotGuaranteed {}",
            names.name(r.target),
            blocked.join(" ")
        )
    }
}

fn cmd_check<O: Write, E: Write>(
    a: CheckArgs,
    stdout: &mut O,
    stderr: &mut E,
) -> Result<i32, CmdError> {
    let (scg, names) = load_scg(&a.scg)?;
    if names.is_empty() {
        let _ = writeln!(stderr, "note: empty summary graph, nothing to check");
        if a.json {
            let _ = writeln!(stdout, "{}", json!({"pairs": [], "all_identifiable": true}));
        }
        return Ok(EXIT_OK);
    }
    let mut human = String::new();
    let mut ok = true;
    let doc;
    if let Some(kind) = a.effect {
        let report = match kind {
            EffectKind::Total => {
                let t = a.treatment.as_deref().ok_or_else(|| {
                    CmdError::usage("--effect total requires --treatment")
                })?;
                total_effect_identifiable(&scg, resolve_series(&names, t)?)
            }
            EffectKind::Cde => {
                let o = a
                    .outcome
                    .as_deref()
                    .ok_or_else(|| CmdError::usage("--effect cde requires --outcome"))?;
                cde_identifiable(&scg, resolve_series(&names, o)?)
            }
        }
        .map_err(|e| CmdError::usage(e.to_string()))?;
        ok = report.identifiable;
        human.push_str(&effect_line(&names, kind, &report));
        human.push('\n');
        doc = json!({
            "effect": if kind == EffectKind::Total { "total" } else { "cde" },
            "series": names.name(report.target),
            "identifiable": report.identifiable,
            "blocking": report.blocking.iter().map(|p| {
                json!([names.name(p.lo()), names.name(p.hi())])
            }).collect::<Vec<_>>(),
        });
    } else {
        let mut reports = Vec::new();
        if let Some(pair) = &a.pair {
            let x = resolve_series(&names, &pair[0])?;
            let y = resolve_series(&names, &pair[1])?;
            if x == y {
                return Err(CmdError::usage("pair endpoints must be distinct"));
            }
            reports.push(
                s_identifiable(&scg, x, y).map_err(|e| CmdError::usage(e.to_string()))?,
            );
        } else {
            for x in 0..scg.n_series() {
                for y in (x + 1)..scg.n_series() {
                    reports.push(
                        s_identifiable(&scg, SeriesId(x), SeriesId(y))
                            .map_err(|e| CmdError::usage(e.to_string()))?,
                    );
                }
            }
        }
        for r in &reports {
            ok &= r.verdict == crate::identifiability::Verdict::SId;
            human.push_str(&pair_line(&names, r));
            human.push('\n');
        }
        doc = json!({
            "pairs": reports.iter().map(|r| json!({
                "x": names.name(r.pair.lo()),
                "y": names.name(r.pair.hi()),
                "verdict": r.verdict.as_str(),
                "reason": r.reason.as_str(),
            })).collect::<Vec<_>>(),
            "all_identifiable": ok,
        });
    }
    if a.json {
        let _ = writeln!(stdout, "{doc}");
        let _ = write!(stderr, "{human}");
    } else {
        let _ = write!(stdout, "{human}");
    }
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_discover<O: Write, E: Write>(
    a: DiscoverArgs,
    stdout: &mut O,
    stderr: &mut E,
) -> Result<i32, CmdError> {
    let text = read_file(&a.template)?;
    let (template, names) =
        parse_template(&text).map_err(|e| CmdError::usage(format!("{}: {e}", a.template.display())))?;
    let scg = match &a.scg {
        Some(path) => {
            let (scg, scg_names) = load_scg(path)?;
            // The two files must agree on the series universe by name.
            let remapped = remap_scg(&scg, &scg_names, &names)
                .ok_or_else(|| CmdError::usage("summary graph names do not match the template"))?;
            if !compatible(&remapped, &template)
                .map_err(|e| CmdError::usage(e.to_string()))?
            {
                return Err(CmdError::usage(
                    "summary graph is not the summary of the template",
                ));
            }
            Some(remapped)
        }
        None => None,
    };
    let window = a.window.unwrap_or_else(|| default_window(template.gamma_max()));
    let rules: RuleSet = a.rules.into();
    let map_err = |e: DiscoveryError| match e {
        DiscoveryError::Inconsistent { .. } => CmdError::inconsistent(e.to_string()),
        other => CmdError::usage(other.to_string()),
    };
    let p = discover(&template, scg.as_ref(), window, rules).map_err(map_err)?;
    if a.stability {
        let q = discover(&template, scg.as_ref(), window + 1, rules).map_err(map_err)?;
        let gamma = template.gamma_max();
        if !stable_interior(&p, &q, gamma) {
            return Err(CmdError::inconsistent(format!(
                "interior orientations changed when the window grew from {window} to {}",
                window + 1
            )));
        }
        let _ = writeln!(stderr, "stability: interior unchanged at window {}", window + 1);
    }
    let dump = write_pdag(&p, &names);
    if a.json {
        let directed: Vec<_> = p
            .directed_edges()
            .iter()
            .map(|(u, v)| {
                json!([names.name(u.series), u.slice, names.name(v.series), v.slice])
            })
            .collect();
        let undirected: Vec<_> = p
            .undirected_edges()
            .iter()
            .map(|(u, v)| {
                json!([names.name(u.series), u.slice, names.name(v.series), v.slice])
            })
            .collect();
        let _ = writeln!(
            stdout,
            "{}",
            json!({"window": window, "directed": directed, "undirected": undirected})
        );
        let _ = write!(stderr, "{dump}");
    } else {
        let _ = write!(stdout, "{dump}");
    }
    Ok(EXIT_OK)
}

/// Interior equality between runs at window L and L+1: compare slices
/// `gamma..L` of both, aligned from the left.
fn stable_interior(shorter: &crate::pdag::Pdag, longer: &crate::pdag::Pdag, gamma: u32) -> bool {
    let n = shorter.n_series();
    for k in gamma..shorter.window_len() {
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let (x, y) = (
                    crate::unrolled::Vertex::new(a, k),
                    crate::unrolled::Vertex::new(b, k),
                );
                if shorter.orient_query(x, y) != longer.orient_query(x, y) {
                    return false;
                }
            }
        }
    }
    true
}

/// Translate a summary graph parsed from one name table into another.
fn remap_scg(scg: &Scg, from: &SeriesNames, to: &SeriesNames) -> Option<Scg> {
    if from.len() != to.len() {
        return None;
    }
    let mut out = Scg::new(to.len());
    for (u, name_u) in from.iter() {
        to.resolve(name_u)?;
        for (v, name_v) in from.iter() {
            if scg.edge(u, v) {
                out.add_edge(to.resolve(name_u)?, to.resolve(name_v)?).ok()?;
            }
        }
    }
    Some(out)
}

fn cmd_enumerate<O: Write, E: Write>(
    a: EnumerateArgs,
    stdout: &mut O,
    stderr: &mut E,
) -> Result<i32, CmdError> {
    let workers = worker_default(a.workers);
    let row = census_unbounded(a.n, workers, a.force)
        .map_err(|e| CmdError::usage(e.to_string()))?;
    let human = format!(
        "{:>2} {:>12} {:>16} {:>8}\n{:>2} {:>12} {:>16} {:>8.2}\n",
        "n", "scgs", "not-fully-s-id", "%", row.n, row.total_scgs, row.not_fully_sid, row.percent
    );
    if a.json {
        let _ = writeln!(stdout, "{}", serde_json::to_string(&row).unwrap());
        let _ = write!(stderr, "{human}");
    } else {
        let _ = write!(stdout, "{human}");
    }
    Ok(EXIT_OK)
}

fn cmd_verify<O: Write, E: Write>(
    a: VerifyArgs,
    stdout: &mut O,
    stderr: &mut E,
) -> Result<i32, CmdError> {
    let window = a.window.unwrap_or_else(|| default_window(a.gamma));
    if let Some(path) = &a.scg {
        let (scg, names) = load_scg(path)?;
        let report = verify_theorem(&scg, a.gamma, window, a.budget)
            .map_err(|e| CmdError::inconsistent(e.to_string()))?;
        let mut human = String::new();
        for pv in &report.pairs {
            let observed = match &pv.observed {
                Observed::OrientedInAll => "oriented-in-all".to_string(),
                Observed::UnorientedInSome { .. } => "unoriented-in-some".to_string(),
            };
            human.push_str(&format!(
                "PAIR {} {} expected={} observed={} agree={}\n",
                names.name(pv.pair.lo()),
                names.name(pv.pair.hi()),
                pv.expected.verdict.as_str(),
                observed,
                pv.agreement
            ));
        }
        human.push_str(&format!(
            "{} templates checked, {} disagreements{}\n",
            report.templates_checked,
            report.disagreements(),
            if report.complete { "" } else { " (incomplete: budget exhausted)" }
        ));
        if a.json {
            let doc = json!({
                "pairs": report.pairs.iter().map(|pv| json!({
                    "x": names.name(pv.pair.lo()),
                    "y": names.name(pv.pair.hi()),
                    "expected": pv.expected.verdict.as_str(),
                    "reason": pv.expected.reason.as_str(),
                    "observed": match &pv.observed {
                        Observed::OrientedInAll => "oriented-in-all",
                        Observed::UnorientedInSome { .. } => "unoriented-in-some",
                    },
                    "agreement": pv.agreement,
                })).collect::<Vec<_>>(),
                "templates_checked": report.templates_checked,
                "complete": report.complete,
                "disagreements": report.disagreements(),
            });
            let _ = writeln!(stdout, "{doc}");
            let _ = write!(stderr, "{human}");
        } else {
            let _ = write!(stdout, "{human}");
        }
        return Ok(if report.disagreements() == 0 {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        });
    }
    let n = a
        .n
        .ok_or_else(|| CmdError::usage("verify needs a series count or --scg FILE"))?;
    let workers = worker_default(a.workers);
    let agg = verify_all(n, a.gamma, window, a.budget, workers, a.force)
        .map_err(|e| CmdError::usage(e.to_string()))?;
    let human = format!(
        "{} SCGs, {} disagreements\nnot fully s-identifiable: {}\nincomplete: {}\n",
        agg.scgs_checked, agg.disagreements, agg.not_fully_sid, agg.incomplete
    );
    if a.json {
        let _ = writeln!(stdout, "{}", serde_json::to_string(&agg).unwrap());
        let _ = write!(stderr, "{human}");
    } else {
        let _ = write!(stdout, "{human}");
    }
    Ok(if agg.disagreements == 0 {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}
