//! Command-line surface. Every command writes one JSON report (keys sorted,
//! rationals as `a/b` strings) to stdout or `--out`.

mod commands;
pub mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::arith::{is_prime, Rational};
use crate::census::DEFAULT_BUDGET;
use crate::hilbert::Profile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Gallery(#[from] crate::gallery::GalleryError),
    #[error(transparent)]
    Census(#[from] crate::census::CensusError),
    #[error("{0}")]
    Compute(String),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "multisecant", version, about = "Hilbert schemes of line sections and finite-field line censuses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct SourceArgs {
    /// Gallery variety, see `gallery list`.
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<String>,
    /// JSON document {variables, generators | parametrization, field}.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equations of the aligned ordered Hilbert scheme in the line chart.
    OhEqs {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_name = "k1,k2,..")]
        profile: String,
        /// Use the chart of lines through the point z = b of the line.
        #[arg(long, value_name = "b")]
        star: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Cotangent-rank verdict at a point, with the Jacobian cross-check.
    SmoothAt {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_name = "k1,k2,..")]
        profile: String,
        /// Marked points as line coordinates z.
        #[arg(long, value_name = "a1,a2,..", allow_hyphen_values = true)]
        points: String,
        /// Chart coordinates u1..u_{N-1},v1..v_{N-1} of the line (default: x = 0).
        #[arg(long, value_name = "u..,v..", allow_hyphen_values = true)]
        line: Option<String>,
        #[arg(long, value_name = "b", allow_hyphen_values = true)]
        star: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Line census through general base points.
    Census {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_name = "p1,p2,..", default_value = "11,13")]
        primes: String,
        /// Restrict estimates (and sampling) to one profile.
        #[arg(long, value_name = "k1,k2,..")]
        profile: Option<String>,
        /// Base-point draws per prime.
        #[arg(long, default_value_t = 1)]
        draws: usize,
        /// Test fiber smoothness on this many sampled lines of --profile.
        #[arg(long, value_name = "m")]
        sample: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Record wall-clock time (makes reports non-reproducible).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Dimension of the union of lines meeting the variety in degree >= k.
    SecantCover {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_name = "p1,p2,..", default_value = "7,11")]
        primes: String,
        #[arg(short, long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Built-in varieties.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum GalleryAction {
    List {
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Presentation and construction log of one builtin.
    Show {
        name: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

/// Everything a report needs for replay.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub command: String,
    pub builtin: Option<String>,
    pub input: Option<String>,
    pub primes: Vec<u64>,
    pub profile: Option<Vec<usize>>,
    pub seed: u64,
    pub out: Option<String>,
    pub budget: Option<u128>,
    pub extra: Vec<(String, Value)>,
}

impl RunConfig {
    fn new(command: &str, source: &SourceArgs, common: &Common) -> Self {
        RunConfig {
            command: command.to_string(),
            builtin: source.builtin.clone(),
            input: source.input.as_ref().map(|p| p.display().to_string()),
            seed: common.seed,
            out: common.out.as_ref().map(|p| p.display().to_string()),
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "builtin": self.builtin,
            "input": self.input,
            "primes": self.primes,
            "profile": self.profile,
            "seed": self.seed,
            "out": self.out,
            "budget": self.budget.map(|b| b.to_string()),
        });
        for (k, x) in &self.extra {
            v[k] = x.clone();
        }
        v
    }
}

pub fn parse_primes(s: &str) -> Result<Vec<u64>, CliError> {
    let mut out: Vec<u64> = Vec::new();
    for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let p: u64 = t.parse().map_err(|_| CliError::Usage(format!("--primes: {t:?} is not an integer")))?;
        if !is_prime(p) {
            return Err(CliError::Usage(format!("--primes: {p} is not prime")));
        }
        if out.contains(&p) {
            return Err(CliError::Usage(format!("--primes: {p} repeated")));
        }
        out.push(p);
    }
    if out.is_empty() {
        return Err(CliError::Usage("--primes: empty list".into()));
    }
    out.sort_unstable();
    Ok(out)
}

pub fn parse_profile(s: &str) -> Result<Profile, CliError> {
    s.parse().map_err(|_| CliError::Usage(format!("--profile: {s:?} is not a list of positive integers")))
}

pub fn parse_rationals(s: &str, what: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<Rational>().map_err(|_| CliError::Usage(format!("{what}: {t:?} is not a rational number"))))
        .collect()
}

/// Report plus whether the verification it encodes succeeded.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

pub fn execute(cli: Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    match cli.command {
        Command::OhEqs { source, profile, star, common } => {
            let mut cfg = RunConfig::new("oh-eqs", &source, &common);
            let profile = parse_profile(&profile)?;
            cfg.profile = Some(profile.parts().to_vec());
            cfg.extra.push(("star".into(), json!(star)));
            let o = commands::oh_eqs(&source, &profile, star.as_deref(), &cfg)?;
            Ok((o, common.out))
        }
        Command::SmoothAt { source, profile, points, line, star, common } => {
            let mut cfg = RunConfig::new("smooth-at", &source, &common);
            let profile = parse_profile(&profile)?;
            cfg.profile = Some(profile.parts().to_vec());
            cfg.extra.push(("points".into(), json!(points)));
            cfg.extra.push(("line".into(), json!(line)));
            cfg.extra.push(("star".into(), json!(star)));
            let o = commands::smooth_at(&source, &profile, &points, line.as_deref(), star.as_deref(), &cfg)?;
            Ok((o, common.out))
        }
        Command::Census { source, primes, profile, draws, sample, budget, timing, common } => {
            let mut cfg = RunConfig::new("census", &source, &common);
            cfg.primes = parse_primes(&primes)?;
            let profile = profile.as_deref().map(parse_profile).transpose()?;
            cfg.profile = profile.as_ref().map(|p| p.parts().to_vec());
            cfg.budget = Some(budget);
            cfg.extra.push(("draws".into(), json!(draws)));
            cfg.extra.push(("sample".into(), json!(sample)));
            cfg.extra.push(("timing".into(), json!(timing)));
            if draws == 0 {
                return Err(CliError::Usage("--draws must be at least 1".into()));
            }
            if sample.is_some() && profile.is_none() {
                return Err(CliError::Usage("--sample needs --profile".into()));
            }
            let o = commands::census(&source, &cfg, profile.as_ref(), draws, sample, timing)?;
            Ok((o, common.out))
        }
        Command::SecantCover { source, primes, k, budget, timing, common } => {
            let mut cfg = RunConfig::new("secant-cover", &source, &common);
            cfg.primes = parse_primes(&primes)?;
            cfg.budget = Some(budget);
            cfg.extra.push(("k".into(), json!(k)));
            cfg.extra.push(("timing".into(), json!(timing)));
            let o = commands::secant_cover(&source, &cfg, k, timing)?;
            Ok((o, common.out))
        }
        Command::Gallery { action } => match action {
            GalleryAction::List { out } => Ok((commands::gallery_list(), out)),
            GalleryAction::Show { name, out } => Ok((commands::gallery_show(&name)?, out)),
        },
    }
}

/// Entry point for the binary: 0 on success, 1 if a verification failed,
/// 2 on errors.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli).and_then(|(o, out)| write_report(&o.report, out.as_ref()).map(|_| o.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("json values serialize");
    s.push('\n');
    s
}

fn write_report(report: &Value, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = render(report);
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(p.clone(), e)),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| CliError::Io("<stdout>".into(), e))
        }
    }
}
