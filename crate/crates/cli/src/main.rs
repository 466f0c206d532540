//! `parasde`: runs one experiment from a TOML config and writes a JSON report
//! plus CSV tables. Exit status 0 when every check passes, 1 when a check
//! fails or the run errors, 2 on usage and config errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::Serialize;

use parasde::experiments::*;
use parasde::report::{envelope, write_atomic, Check};
use parasde::Error;

#[derive(Parser, Debug)]
#[command(name = "parasde", version, about = "Paracontrolled SDE experiments")]
struct Cli {
    /// Experiment to run; overrides `command` in the config file.
    command: Option<String>,
    /// List the available commands and exit.
    #[arg(long)]
    list: bool,
    /// TOML config with optional `command`, `seed`, `out` and a `[params]` table.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Only the final verdict line.
    #[arg(long)]
    quiet: bool,
    /// Shorthand for `--set alpha=<A>`.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Override a parameter, `key=value` with dotted keys into `[params]`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

struct Command {
    name: &'static str,
    about: &'static str,
    run: fn(toml::Value, u64) -> Result<Finished, Failure>,
}

/// Output of a successful harness run, already rendered.
struct Finished {
    json: String,
    tables: Vec<(String, String)>,
    checks: Vec<Check>,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Param { field, msg } => Failure::Usage(format!("invalid `params.{field}`: {msg}")),
            Error::Config(m) => Failure::Usage(m),
            other => Failure::Run(other.to_string()),
        }
    }
}

fn parse<C: DeserializeOwned>(params: toml::Value) -> Result<C, Failure> {
    serde_path_to_error::deserialize(params).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." { "params".to_string() } else { format!("params.{path}") };
        let msg = e.into_inner().to_string();
        let msg = msg.lines().next().unwrap_or_default().to_string();
        Failure::Usage(format!("config error at `{at}`: {msg}"))
    })
}

#[derive(Serialize)]
struct Resolved<'a, C> {
    seed: u64,
    params: &'a C,
}

#[derive(Serialize)]
struct Verdict<'a, R> {
    pass: bool,
    checks: Vec<Check>,
    result: &'a R,
}

fn finish<C: Serialize, R: Outcome>(name: &str, seed: u64, cfg: &C, report: &R) -> Result<Finished, Failure> {
    let checks = report.checks();
    let verdict = Verdict {
        pass: checks.iter().all(|c| c.pass),
        checks: checks.clone(),
        result: report,
    };
    let json = envelope(name, &Resolved { seed, params: cfg }, &verdict)?;
    let tables = report
        .tables()
        .iter()
        .map(|t| Ok((t.name.clone(), t.to_csv()?)))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Finished { json, tables, checks })
}

macro_rules! commands {
    ($($name:literal, $about:literal, $cfg:ty, |$c:ident, $s:ident| $body:expr;)*) => {
        &[$(Command {
            name: $name,
            about: $about,
            run: |params, seed| {
                let $c: $cfg = parse(params)?;
                let $s = seed;
                let report = $body?;
                finish($name, seed, &$c, &report)
            },
        }),*]
    };
}

const COMMANDS: &[Command] = commands![
    "schauder-probe", "Semigroup and integral-operator smoothing slopes", SchauderConfig,
        |c, _s| schauder_probe(&c);
    "paraproduct-probe", "Paraproduct and resonant-product constants across grid sizes", ParaproductConfig,
        |c, s| paraproduct_probe(&c, s);
    "commutator-probe", "Commutator ratios over shrinking horizons", CommutatorConfig,
        |c, s| commutator_probe(&c, s);
    "solve-young", "Young-regime backward solve against the classical solver", YoungConfig,
        |c, _s| solve_young_probe(&c);
    "solve-rough", "Paracontrolled backward solve with residuals and refinement", RoughConfig,
        |c, _s| solve_rough_probe(&c);
    "lift-white-noise", "White-noise lift and the mean of its resonant term", LiftConfig,
        |c, s| lift_probe(&c, s);
    "chaos-oracle", "Second-chaos variance oracle against Wick sums and Monte Carlo", ChaosConfig,
        |c, s| chaos_oracle(&c, s);
    "stable-check", "Stable increments: characteristic function, self-similarity, symmetry", StableConfig,
        |c, s| stable_check(&c, s);
    "campbell-check", "Campbell moment recursion against hand tables and Monte Carlo", CampbellConfig,
        |c, s| campbell_check(&c, s);
    "simulate", "Euler paths with marginal summaries", SimulateConfig,
        |c, s| simulate(&c, s);
    "martingale-test", "Martingale problem: free, matched and corrupted cases", MartingaleConfig,
        |c, s| martingale_suite(&c, s);
    "moment-scaling", "Moments of the drift integral against the lag", MomentConfig,
        |c, s| moment_suite(&c, s);
    "brox-demo", "Quenched Brox pipeline with white-noise drift", BroxConfig,
        |c, s| brox(&c, s);
    "bony-check", "Bony decomposition reconstructs the product", BonyConfig,
        |c, s| bony_check(&c, s);
    "pde-consistency", "Young, rough and classical solvers agree on smooth data", PdeConfig,
        |c, _s| pde_consistency(&c);
    "cauchy-decay", "Differences of the white-noise lift across truncation levels", CauchyConfig,
        |c, s| cauchy_decay(&c, s);
    "lipschitz-probe", "Lipschitz dependence of the rough solve on the drift", LipschitzConfig,
        |c, _s| lipschitz_probe(&c);
];

/// Sets `root.a.b = value`, creating tables on the way.
fn set_path(root: &mut toml::Value, key: &str, value: toml::Value) -> Result<(), Failure> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Failure::Usage(format!("bad key `{key}`")));
    }
    let mut cur = root;
    for p in &parts[..parts.len() - 1] {
        let table = cur
            .as_table_mut()
            .ok_or_else(|| Failure::Usage(format!("`{key}`: `{p}` is not inside a table")))?;
        cur = table
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    cur.as_table_mut()
        .ok_or_else(|| Failure::Usage(format!("`{key}`: parent is not a table")))?
        .insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// A TOML literal when it parses as one, else a bare string.
fn literal(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

struct Plan {
    command: &'static Command,
    seed: u64,
    out: PathBuf,
    params: toml::Value,
}

fn plan(cli: &Cli) -> Result<Plan, Failure> {
    let mut file = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            text.parse::<toml::Table>()
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => toml::Table::new(),
    };
    for k in file.keys() {
        if !["command", "seed", "out", "params"].contains(&k.as_str()) {
            return Err(Failure::Usage(format!(
                "config error at `{k}`: unknown key, expected one of command, seed, out, params"
            )));
        }
    }
    let name = match (&cli.command, file.remove("command")) {
        (Some(c), _) => c.clone(),
        (None, Some(toml::Value::String(c))) => c,
        (None, Some(_)) => return Err(Failure::Usage("config error at `command`: expected a string".into())),
        (None, None) => return Err(Failure::Usage("no command given; see --list".into())),
    };
    let command = COMMANDS
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Failure::Usage(format!("unknown command `{name}`; see --list")))?;
    let seed = match (cli.seed, file.remove("seed")) {
        (Some(s), _) => s,
        (None, Some(toml::Value::Integer(s))) if s >= 0 => s as u64,
        (None, Some(_)) => return Err(Failure::Usage("config error at `seed`: expected a nonnegative integer".into())),
        (None, None) => 0,
    };
    let out = match (&cli.out, file.remove("out")) {
        (Some(o), _) => o.clone(),
        (None, Some(toml::Value::String(o))) => PathBuf::from(o),
        (None, Some(_)) => return Err(Failure::Usage("config error at `out`: expected a string".into())),
        (None, None) => PathBuf::from("out"),
    };
    let mut params = file.remove("params").unwrap_or(toml::Value::Table(Default::default()));
    if !params.is_table() {
        return Err(Failure::Usage("config error at `params`: expected a table".into()));
    }
    if let Some(a) = cli.alpha {
        set_path(&mut params, "alpha", toml::Value::Float(a))?;
    }
    for s in &cli.set {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects KEY=VALUE, got `{s}`")))?;
        set_path(&mut params, k.trim(), literal(v.trim()))?;
    }
    check_alpha(&params)?;
    Ok(Plan {
        command,
        seed,
        out,
        params,
    })
}

/// Every stability index lies in (0, 2]; rejected before any work is done.
fn check_alpha(params: &toml::Value) -> Result<(), Failure> {
    let a = match params.get("alpha") {
        Some(toml::Value::Float(a)) => *a,
        Some(toml::Value::Integer(a)) => *a as f64,
        _ => return Ok(()),
    };
    if a > 0.0 && a <= 2.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "config error at `params.alpha`: {a} outside the admissible interval (0, 2]"
        )))
    }
}

fn write(out: &Path, name: &str, done: &Finished) -> Result<Vec<PathBuf>, Failure> {
    let mut written = vec![out.join(format!("{name}.json"))];
    write_atomic(&written[0], done.json.as_bytes())?;
    for (t, csv) in &done.tables {
        let p = out.join(format!("{name}-{t}.csv"));
        write_atomic(&p, csv.as_bytes())?;
        written.push(p);
    }
    Ok(written)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if cli.list {
        let w = COMMANDS.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in COMMANDS {
            println!("{:w$}  {}", c.name, c.about);
        }
        return ExitCode::SUCCESS;
    }
    let result = plan(&cli).and_then(|p| {
        let done = (p.command.run)(p.params, p.seed)?;
        let files = write(&p.out, p.command.name, &done)?;
        Ok((p.command.name, done, files))
    });
    match result {
        Ok((name, done, files)) => {
            let pass = done.checks.iter().all(|c| c.pass);
            if !cli.quiet {
                for c in &done.checks {
                    println!(
                        "{} {} = {} ({} {})",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        c.value,
                        c.relation,
                        c.tolerance
                    );
                }
                for f in &files {
                    println!("wrote {}", f.display());
                }
            }
            let failed = done.checks.iter().filter(|c| !c.pass).count();
            println!("{name}: {} ({failed} of {} checks failed)", if pass { "PASS" } else { "FAIL" }, done.checks.len());
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
