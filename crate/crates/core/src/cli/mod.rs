// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! The `nic-engine` command line.
//!
//! Every command builds a [`Report`] which is written as CSV (one `#`
//! comment line with the parameters, a header, then rows) or as JSON
//! (`{"meta": …, "rows": […]}`). Settings resolve as flags, then config
//! file, then built-in defaults.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure. On
//! failure a one-line JSON error record goes to stderr.

mod commands;
pub mod config;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::closed_forms::FluxKind;
use crate::error::{Error, Result};
use crate::optimize::{PowerModel, Scheme};
use crate::params::{validate, EngineParams, ValidationMode};

pub use commands::{
    cmd_fig2, cmd_fig3, cmd_optimize, cmd_power_sweep, cmd_steady, cmd_universality,
};
pub use config::ConfigFile;
pub use report::{Cell, Format, Report};

#[derive(Debug, Parser)]
#[command(
    name = "nic-engine",
    version,
    about = "Four-level laser heat engine with noise-induced coherence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Steady state from both solvers, residuals and observables.
    Steady,
    /// Closed-form versus numerical power along a one-parameter sweep.
    PowerSweep,
    /// Maximize power under a scheme and compare with analytic optima.
    Optimize,
    /// Flux symmetry, operating point and efficiency series.
    Universality,
    /// Power against p for several couplings.
    Fig2,
    /// Efficiency at maximum power against Carnot efficiency for several p.
    Fig3,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Steady => "steady",
            Command::PowerSweep => "power-sweep",
            Command::Optimize => "optimize",
            Command::Universality => "universality",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
        }
    }

    fn default_format(self) -> Format {
        match self {
            Command::Steady | Command::Optimize | Command::Universality => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega_c: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega_h: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma_c: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma_h: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_cold: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_hot: Option<f64>,
    /// VAR:LO:HI:N, VAR one of the parameter names.
    #[arg(long, global = true)]
    pub sweep: Option<String>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// fixed_wh, fixed_wc, two_param, sum_constraint, product_constraint or over_p.
    #[arg(long, global = true)]
    pub scheme: Option<String>,
    /// full, strong_ht or low_t.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// general, high_t, strong_coupling_high_t or low_t.
    #[arg(long, global = true)]
    pub kind: Option<String>,
    /// Relative agreement required between closed-form and numerical power.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Agreement required between numerical and analytic optima.
    #[arg(long, global = true)]
    pub argmax_tol: Option<f64>,
    /// Largest antisymmetry defect counted as symmetric.
    #[arg(long, global = true)]
    pub defect_tol: Option<f64>,
    /// Agreement required for series coefficients.
    #[arg(long, global = true)]
    pub coefficient_tol: Option<f64>,
    /// Sample points of the symmetry test.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

/// Pass/fail thresholds used by the reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub argmax: f64,
    pub defect: f64,
    pub coefficient: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel: 1e-9,
            argmax: 1e-6,
            defect: 1e-12,
            coefficient: 5e-3,
        }
    }
}

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    OmegaC,
    OmegaH,
    GammaC,
    GammaH,
    Lambda,
    P,
    TCold,
    THot,
}

impl SweepVar {
    pub fn parse(s: &str) -> Option<SweepVar> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        Some(match key.as_str() {
            "omegac" => SweepVar::OmegaC,
            "omegah" => SweepVar::OmegaH,
            "gammac" => SweepVar::GammaC,
            "gammah" => SweepVar::GammaH,
            "lambda" => SweepVar::Lambda,
            "p" => SweepVar::P,
            "tc" | "tcold" => SweepVar::TCold,
            "th" | "thot" => SweepVar::THot,
            _ => return None,
        })
    }

    /// Field name in [`EngineParams`].
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::OmegaC => "omega_c",
            SweepVar::OmegaH => "omega_h",
            SweepVar::GammaC => "gamma_c",
            SweepVar::GammaH => "gamma_h",
            SweepVar::Lambda => "lambda",
            SweepVar::P => "p",
            SweepVar::TCold => "t_c",
            SweepVar::THot => "t_h",
        }
    }

    pub fn apply(self, params: &EngineParams, value: f64) -> EngineParams {
        let mut out = *params;
        *match self {
            SweepVar::OmegaC => &mut out.omega_c,
            SweepVar::OmegaH => &mut out.omega_h,
            SweepVar::GammaC => &mut out.gamma_c,
            SweepVar::GammaH => &mut out.gamma_h,
            SweepVar::Lambda => &mut out.lambda,
            SweepVar::P => &mut out.p,
            SweepVar::TCold => &mut out.t_c,
            SweepVar::THot => &mut out.t_h,
        } = value;
        out
    }
}

/// An inclusive, evenly spaced grid over one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Sweep {
    /// Parses `VAR:LO:HI:N`.
    pub fn parse(spec: &str) -> Result<Sweep> {
        let bad =
            |why: &str| Error::Config(format!("sweep {spec:?}: {why} (expected VAR:LO:HI:N)"));
        let parts: Vec<&str> = spec.split(':').collect();
        let [var, lo, hi, n] = parts.as_slice() else {
            return Err(bad("wrong number of fields"));
        };
        let var = SweepVar::parse(var).ok_or_else(|| bad("unknown parameter"))?;
        let lo: f64 = lo.trim().parse().map_err(|_| bad("LO is not a number"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad("HI is not a number"))?;
        let count: usize = n
            .trim()
            .parse()
            .map_err(|_| bad("N is not a positive integer"))?;
        if count == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(bad("need finite bounds and N >= 1"));
        }
        Ok(Sweep { var, lo, hi, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * (i as f64 / last)
                }
            })
            .collect()
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: EngineParams,
    pub sweep: Option<Sweep>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub scheme: Option<Scheme>,
    pub model: Option<PowerModel>,
    pub kind: FluxKind,
    pub tolerances: Tolerances,
    pub samples: usize,
    /// Curve labels of the figure commands: λ values for fig2, p values for fig3.
    pub curves: Vec<f64>,
}

impl RunConfig {
    /// Defaults for `command`, without flags or config file.
    pub fn defaults(command: Command) -> RunConfig {
        let (params, curves) = match command {
            Command::Fig3 => (EngineParams::emp_curve_defaults(0.0), vec![-0.9, 0.0, 0.9]),
            Command::Fig2 => (
                EngineParams::power_curve_defaults(0.1, 0.0),
                vec![0.1, 0.2, 0.3],
            ),
            _ => (EngineParams::power_curve_defaults(0.1, 0.0), Vec::new()),
        };
        RunConfig {
            command,
            params,
            sweep: None,
            output: None,
            format: command.default_format(),
            scheme: None,
            model: None,
            kind: FluxKind::HighT,
            tolerances: Tolerances::default(),
            samples: 256,
            curves,
        }
    }

    /// Layers `flags` over `file` over [`defaults`](Self::defaults).
    pub fn resolve(command: Command, flags: &Flags, file: &ConfigFile) -> Result<RunConfig> {
        let mut cfg = RunConfig::defaults(command);
        let num = |flag: Option<f64>, key: &str| -> Result<Option<f64>> {
            Ok(match flag {
                Some(v) => Some(v),
                None => file.number(key)?,
            })
        };
        let text = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.text(key));

        let p = &mut cfg.params;
        let fields: [(&mut f64, Option<f64>, &str); 8] = [
            (&mut p.omega_c, flags.omega_c, "omega-c"),
            (&mut p.omega_h, flags.omega_h, "omega-h"),
            (&mut p.gamma_c, flags.gamma_c, "gamma-c"),
            (&mut p.gamma_h, flags.gamma_h, "gamma-h"),
            (&mut p.lambda, flags.lambda, "lambda"),
            (&mut p.p, flags.p, "p"),
            (&mut p.t_c, flags.t_cold, "t-cold"),
            (&mut p.t_h, flags.t_hot, "t-hot"),
        ];
        let mut curve_override = None;
        for (slot, flag, key) in fields {
            if let Some(v) = num(flag, key)? {
                *slot = v;
                let curve_key = if command == Command::Fig2 {
                    "lambda"
                } else {
                    "p"
                };
                if key == curve_key {
                    curve_override = Some(v);
                }
            }
        }
        if matches!(command, Command::Fig2 | Command::Fig3) {
            if let Some(v) = curve_override {
                cfg.curves = vec![v];
            }
        }

        if let Some(spec) = text(&flags.sweep, "sweep") {
            if command != Command::PowerSweep {
                return Err(Error::Config(format!(
                    "--sweep is only used by power-sweep, not {}",
                    command.name()
                )));
            }
            cfg.sweep = Some(Sweep::parse(&spec)?);
        }
        cfg.output = flags
            .output
            .clone()
            .or_else(|| file.text("output").map(PathBuf::from));
        if let Some(f) = flags.format {
            cfg.format = f;
        } else if let Some(f) = file.text("format") {
            cfg.format = match f.to_ascii_lowercase().as_str() {
                "csv" => Format::Csv,
                "json" => Format::Json,
                _ => {
                    return Err(Error::Config(format!(
                        "format must be csv or json (got {f:?})"
                    )))
                }
            };
        }
        if let Some(s) = text(&flags.scheme, "scheme") {
            cfg.scheme = Some(
                Scheme::parse(&s).ok_or_else(|| Error::Config(format!("unknown scheme {s:?}")))?,
            );
        }
        if let Some(s) = text(&flags.model, "model") {
            cfg.model = Some(
                PowerModel::parse(&s)
                    .ok_or_else(|| Error::Config(format!("unknown model {s:?}")))?,
            );
        }
        if let Some(s) = text(&flags.kind, "kind") {
            cfg.kind = FluxKind::parse(&s)
                .ok_or_else(|| Error::Config(format!("unknown flux kind {s:?}")))?;
        }

        let t = &mut cfg.tolerances;
        for (slot, flag, key) in [
            (&mut t.rel, flags.rel_tol, "rel-tol"),
            (&mut t.argmax, flags.argmax_tol, "argmax-tol"),
            (&mut t.defect, flags.defect_tol, "defect-tol"),
            (&mut t.coefficient, flags.coefficient_tol, "coefficient-tol"),
        ] {
            if let Some(v) = num(flag, key)? {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::Config(format!("{key} must be positive (got {v})")));
                }
                *slot = v;
            }
        }
        if let Some(n) = flags.samples {
            cfg.samples = n;
        } else if let Some(n) = file.text("samples") {
            cfg.samples = n
                .parse()
                .map_err(|_| Error::Config(format!("samples: not an integer: {n:?}")))?;
        }
        if cfg.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }

        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        let as_config = |report: crate::params::ValidationReport| {
            Error::Config(format!("invalid parameters: {report}"))
        };
        validate(&self.params, ValidationMode::Unrestricted).map_err(as_config)?;
        if let Some(sweep) = &self.sweep {
            for bound in [sweep.lo, sweep.hi] {
                validate(
                    &sweep.var.apply(&self.params, bound),
                    ValidationMode::Unrestricted,
                )
                .map_err(|r| {
                    Error::Config(format!("sweep bound {}={bound}: {r}", sweep.var.name()))
                })?;
            }
        }
        let labels_ok = match self.command {
            Command::Fig2 => self.curves.iter().all(|&l| l >= 0.0),
            Command::Fig3 => self.curves.iter().all(|&p| (-1.0..=1.0).contains(&p)),
            _ => true,
        };
        if !labels_ok {
            return Err(Error::Config("figure curve parameter out of range".into()));
        }
        Ok(())
    }
}

/// Runs one resolved configuration.
pub fn execute(cfg: &RunConfig) -> Result<Report> {
    match cfg.command {
        Command::Steady => cmd_steady(cfg),
        Command::PowerSweep => cmd_power_sweep(cfg),
        Command::Optimize => cmd_optimize(cfg),
        Command::Universality => cmd_universality(cfg),
        Command::Fig2 => cmd_fig2(cfg),
        Command::Fig3 => cmd_fig3(cfg),
    }
}

/// Exit code for an error: 1 for configuration and I/O problems, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Io(_) => 1,
        _ => 2,
    }
}

/// One-line JSON error record.
pub fn error_record(err: &Error) -> String {
    let code = exit_code(err);
    let kind = if code == 1 { "config" } else { "numeric" };
    json!({ "error": { "code": code, "kind": kind, "message": err.to_string() } }).to_string()
}

fn run_parsed(cli: &Cli) -> Result<()> {
    let file = match &cli.flags.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let cfg = RunConfig::resolve(cli.command, &cli.flags, &file)?;
    let bytes = execute(&cfg)?.render(cfg.format)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

/// Entry point of the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            if code != 0 {
                eprintln!("{}", error_record(&Error::Config(e.kind().to_string())));
            }
            return code;
        }
    };
    match run_parsed(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_record(&e));
            exit_code(&e)
        }
    }
}
