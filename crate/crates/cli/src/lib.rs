//! `ulc-lab`: certified checks, parameter sweeps and region maps from the
//! command line.
//!
//! Exit codes: 0 certified, 1 refuted, 2 inconclusive, 64 usage error,
//! 70 internal failure, 74 unwritable output. Sweeps and maps exit 0 once
//! their report is written.

pub mod checks;
pub mod error;
pub mod params;
pub mod region;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use ulc_core::dist::build_pmf_at;
use ulc_core::ineq::{renyi_entropy, RenyiOrder, Status};
use ulc_core::{ExactRational, PrecisionPolicy};

use checks::{run_check, CheckName, Context};
use error::CliError;
use params::{FamilyKind, Params};
use region::RegionMap;
use sweep::{default_tail_eps, PGrid, SweepReport, SweepSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    /// JSON grid of verdict codes for external plotting (region-map only).
    SvgData,
}

#[derive(Debug, Parser)]
#[command(name = "ulc-lab", version, about = "Certified inequality checks for ultra log-concave distributions")]
pub struct Cli {
    /// Initial working precision in bits.
    #[arg(long, global = true, env = "ULC_LAB_BITS")]
    pub bits: Option<u32>,
    /// Largest precision tried before a verdict is left inconclusive.
    #[arg(long, global = true)]
    pub max_bits: Option<u32>,
    /// Truncation threshold for infinite-support families (default 2^-bits).
    #[arg(long, global = true)]
    pub tail_eps: Option<ExactRational>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one check at one parameter point.
    Check {
        #[arg(long, value_enum)]
        family: Option<FamilyKind>,
        #[arg(long, value_enum)]
        test: CheckName,
        #[command(flatten)]
        params: Params,
    },
    /// Run checks over a parameter grid.
    Sweep(SweepArgs),
    /// Emit a two-parameter grid of verdict codes.
    RegionMap(SweepArgs),
    /// Enclose Renyi entropies of a distribution.
    Entropy {
        #[arg(long, value_enum)]
        family: FamilyKind,
        /// Orders: positive rationals other than 1, or "inf".
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<String>,
        #[command(flatten)]
        params: Params,
    },
    /// Print a distribution as JSON.
    Pmf {
        #[arg(long, value_enum)]
        family: FamilyKind,
        #[command(flatten)]
        params: Params,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON sweep specification; flags below are ignored when given.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// "lo,hi,step".
    #[arg(long, value_delimiter = ',')]
    pub lambda_range: Option<Vec<ExactRational>>,
    /// "lo,hi,step".
    #[arg(long, value_delimiter = ',')]
    pub p_range: Option<Vec<ExactRational>>,
    /// "lo,hi".
    #[arg(long = "N-range", visible_alias = "n-range", value_delimiter = ',')]
    pub n_range: Option<Vec<u64>>,
    /// "lo,hi".
    #[arg(long, value_delimiter = ',')]
    pub m_range: Option<Vec<u64>>,
    /// Take p = k/m for k = 1 .. m-1.
    #[arg(long)]
    pub p_over_m: bool,
    #[arg(long = "check", value_enum, value_delimiter = ',')]
    pub checks: Vec<CheckName>,
    #[command(flatten)]
    pub params: Params,
}

struct Globals {
    bits: Option<u32>,
    max_bits: Option<u32>,
    tail_eps: Option<ExactRational>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

impl Globals {
    fn policy(&self, base: PrecisionPolicy) -> Result<PrecisionPolicy, CliError> {
        let initial = self.bits.unwrap_or(base.initial_bits);
        let max = self.max_bits.unwrap_or(base.max_bits.max(initial));
        Ok(PrecisionPolicy::new(initial, max, base.growth_factor)?)
    }

    fn context(&self) -> Result<Context, CliError> {
        let policy = self.policy(PrecisionPolicy::default())?;
        let tail_eps = match &self.tail_eps {
            Some(eps) if !eps.is_positive() => return Err(CliError::Usage("--tail-eps must be positive".into())),
            Some(eps) => eps.clone(),
            None => default_tail_eps(policy.initial_bits),
        };
        Ok(Context { policy, tail_eps })
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { error::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ulc-lab: {e}");
            e.exit_code()
        }
    }
}

fn exit_code(status: Status) -> i32 {
    match status {
        Status::Certified => 0,
        Status::Refuted => 1,
        Status::Inconclusive => 2,
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Output {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(body.as_bytes());
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let globals = Globals {
        bits: cli.bits,
        max_bits: cli.max_bits,
        tail_eps: cli.tail_eps,
        format: cli.format,
        out: cli.out,
    };
    match cli.command {
        Command::Check { family, test, params } => {
            let ctx = globals.context()?;
            let kind = family.unwrap_or(FamilyKind::Ula);
            let outcome = run_check(test, kind, &params, &ctx)?;
            let body = match globals.format {
                None | Some(Format::Json) => serde_json::to_string_pretty(&outcome.json).expect("json"),
                Some(f) => return Err(CliError::Usage(format!("check output supports json only, got {f:?}"))),
            };
            emit(globals.out.as_deref(), &with_newline(body))?;
            Ok(exit_code(outcome.status))
        }
        Command::Sweep(args) => {
            let spec = sweep_spec(args, &globals)?;
            let report = SweepReport::run(&spec)?;
            let format = globals
                .format
                .or_else(|| spec.output.as_ref().and_then(|o| o.format))
                .unwrap_or(Format::Csv);
            let body = match format {
                Format::Csv => report.to_csv()?,
                Format::Json => with_newline(report.to_json()),
                Format::SvgData => return Err(CliError::Usage("svg-data is a region-map format".into())),
            };
            emit(output_path(&globals, &spec).as_deref(), &body)?;
            eprintln!("{}", report.summary());
            Ok(0)
        }
        Command::RegionMap(args) => {
            let spec = sweep_spec(args, &globals)?;
            if spec.axes().len() != 2 {
                return Err(CliError::Usage(format!(
                    "a region map needs exactly two swept parameters, got {}",
                    spec.axes().len()
                )));
            }
            let report = SweepReport::run(&spec)?;
            let map = RegionMap::from_report(&report)?;
            let format = globals
                .format
                .or_else(|| spec.output.as_ref().and_then(|o| o.format))
                .unwrap_or(Format::Csv);
            let body = match format {
                Format::Csv => map.to_csv()?,
                Format::SvgData | Format::Json => with_newline(map.to_json()),
            };
            emit(output_path(&globals, &spec).as_deref(), &body)?;
            eprintln!("{}", map.summary());
            Ok(0)
        }
        Command::Entropy { family, alpha, params } => {
            let ctx = globals.context()?;
            let orders = alpha
                .iter()
                .map(|a| a.parse::<RenyiOrder>())
                .collect::<Result<Vec<_>, _>>()?;
            let spec = params.family_spec(family)?;
            let bits = ctx.policy.initial_bits;
            let pmf = build_pmf_at(&spec, bits, &ctx.tail_eps)?;
            let mut entries = Vec::new();
            for order in &orders {
                let h = renyi_entropy(&pmf, order, bits)?;
                let (lo, hi) = h.decimal_bounds();
                entries.push(serde_json::json!({ "alpha": order.to_string(), "entropy": [lo, hi] }));
            }
            let body = serde_json::json!({ "family": spec, "precision_bits": bits, "entropies": entries });
            emit(globals.out.as_deref(), &with_newline(serde_json::to_string_pretty(&body).expect("json")))?;
            Ok(0)
        }
        Command::Pmf { family, params } => {
            let ctx = globals.context()?;
            let pmf = build_pmf_at(&params.family_spec(family)?, ctx.policy.initial_bits, &ctx.tail_eps)?;
            emit(globals.out.as_deref(), &with_newline(pmf.to_json_string()?))?;
            Ok(0)
        }
    }
}

fn output_path(globals: &Globals, spec: &SweepSpec) -> Option<PathBuf> {
    globals
        .out
        .clone()
        .or_else(|| spec.output.as_ref().and_then(|o| o.path.clone()))
}

fn triple(v: Option<Vec<ExactRational>>, name: &str) -> Result<Option<[ExactRational; 3]>, CliError> {
    v.map(|v| {
        <[ExactRational; 3]>::try_from(v)
            .map_err(|_| CliError::Usage(format!("--{name} takes lo,hi,step")))
    })
    .transpose()
}

fn pair(v: Option<Vec<u64>>, name: &str) -> Result<Option<[u64; 2]>, CliError> {
    v.map(|v| <[u64; 2]>::try_from(v).map_err(|_| CliError::Usage(format!("--{name} takes lo,hi"))))
        .transpose()
}

fn sweep_spec(args: SweepArgs, globals: &Globals) -> Result<SweepSpec, CliError> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<SweepSpec>(&text)
                .map_err(|e| CliError::Usage(format!("invalid sweep spec {}: {e}", path.display())))?
        }
        None => SweepSpec {
            family: args
                .family
                .ok_or_else(|| CliError::Usage("sweep requires --family or --config".into()))?,
            params: args.params,
            lambda_range: triple(args.lambda_range, "lambda-range")?,
            p_range: triple(args.p_range, "p-range")?,
            p_grid: args.p_over_m.then_some(PGrid::KOverM),
            n_range: pair(args.n_range, "N-range")?,
            m_range: pair(args.m_range, "m-range")?,
            checks: args.checks,
            precision: PrecisionPolicy::default(),
            tail_eps: None,
            output: None,
        },
    };
    spec.precision = globals.policy(spec.precision)?;
    if globals.tail_eps.is_some() {
        spec.tail_eps = globals.tail_eps.clone();
    }
    spec.validate()?;
    Ok(spec)
}
