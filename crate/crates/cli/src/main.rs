use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use multiloop_cli::config::load_config;
use multiloop_cli::golden::GOLDEN_DIR_ENV;
use multiloop_cli::report::all_passed;
use multiloop_cli::suite::{parse_checks, parse_control, parse_range, parse_rescaling, Check};
use multiloop_cli::{emit_report, run_suite, CheckReport, Format, SuiteConfig, SuiteError};
use multiloop_core::coulomb::{bracket_x1y1, EtaleChart};
use multiloop_core::monopole::{closed_form_gl2, closed_form_gl3, truncated_hilbert, GaugeSpec};
use multiloop_core::series::{ci_diagnostic, series_equal, SeriesComparison};

/// Golden directory used when neither the flag, the environment nor a config
/// file names one and `./golden` exists.
const DEFAULT_GOLDEN_DIR: &str = "golden";

#[derive(Parser)]
#[command(name = "multiloop", version, about = "Exact checks for the multiloop quiver Coulomb branch and its Slodowy-slice model")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Truncation degree for Hilbert series.
    #[arg(long, global = true, value_name = "D")]
    truncate: Option<usize>,
    /// Write golden files from this run instead of enforcing them.
    #[arg(long, global = true)]
    bless: bool,
    /// Directory holding golden files.
    #[arg(long, global = true, value_name = "PATH", env = GOLDEN_DIR_ENV)]
    golden_dir: Option<PathBuf>,
    /// Include wall times in reports.
    #[arg(long, global = true)]
    timings: bool,
    /// Flat key = value file with suite settings; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite.
    Verify {
        /// Inclusive range such as `2..4`, or a single value.
        #[arg(long)]
        r: Option<String>,
        /// Comma-separated check names.
        #[arg(long)]
        checks: Option<String>,
        /// Gauge ranks for the Hilbert-series checks, comma separated.
        #[arg(long)]
        ranks: Option<String>,
        /// Skip the flavored checks.
        #[arg(long)]
        no_flavor: bool,
        /// Rescaling used by the matrix-form check.
        #[arg(long, value_name = "stated|derived")]
        hanany_rescaling: Option<String>,
        /// Inject a negative control into the checks it affects.
        #[arg(long, value_name = "CONTROL")]
        inject: Option<String>,
    },
    /// Monopole-formula Hilbert series.
    Hilbert {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        loops: u32,
        #[arg(long, default_value_t = 1)]
        framing: u32,
        #[arg(long, value_enum, default_value_t = HilbertFormat::Both)]
        format: HilbertFormat,
    },
    /// Slodowy-slice checks for one r.
    Slice {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        flavor: bool,
        /// Write the resulting relation polynomial to FILE.
        #[arg(long, value_name = "FILE")]
        emit_relation: Option<PathBuf>,
    },
    /// Coulomb-branch checks for one r.
    Coulomb {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        flavor: bool,
        /// Comma-separated subset of starlet,poifo,jacobi,grading,hanany,sl2,redundancy,sigma,flavor,controls.
        #[arg(long)]
        checks: Option<String>,
        /// Write a bracket to FILE; only `x1y1` is supported.
        #[arg(long, num_args = 2, value_names = ["NAME", "FILE"])]
        emit_bracket: Option<Vec<String>>,
        #[arg(long, value_name = "stated|derived")]
        hanany_rescaling: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HilbertFormat {
    Series,
    Closed,
    Both,
    Json,
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn base_config(cli: &Cli) -> Result<SuiteConfig, Failure> {
    let mut config = SuiteConfig::default();
    if let Some(path) = &cli.config {
        load_config(&mut config, path)?;
    }
    if cli.json {
        config.format = Format::Json;
    }
    if let Some(d) = cli.truncate {
        config.truncate = d;
    }
    if cli.bless {
        config.bless = true;
    }
    if cli.golden_dir.is_some() {
        config.golden_dir = cli.golden_dir.clone();
    } else if config.golden_dir.is_none() && Path::new(DEFAULT_GOLDEN_DIR).is_dir() {
        config.golden_dir = Some(PathBuf::from(DEFAULT_GOLDEN_DIR));
    }
    if cli.timings {
        config.timings = true;
    }
    Ok(config)
}

fn print_reports(reports: &[CheckReport], config: &SuiteConfig) -> Result<(), Failure> {
    let bytes = emit_report(reports, config.format, config.timings);
    print!("{}", String::from_utf8_lossy(&bytes));
    if all_passed(reports) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut config = base_config(&cli)?;
    match cli.command {
        Command::Verify { r, checks, ranks, no_flavor, hanany_rescaling, inject } => {
            if let Some(r) = r {
                (config.r_min, config.r_max) = parse_range(&r)?;
            }
            if let Some(c) = checks {
                config.checks = parse_checks(&c)?;
            }
            if let Some(k) = ranks {
                config.set("ranks", &k)?;
            }
            if no_flavor {
                config.flavored = false;
            }
            if let Some(h) = hanany_rescaling {
                config.hanany = parse_rescaling(&h)?;
            }
            if let Some(i) = inject {
                config.inject = Some(parse_control(&i)?);
            }
            let reports = run_suite(&config)?;
            print_reports(&reports, &config)
        }
        Command::Hilbert { rank, loops, framing, format } => {
            let format = if cli.json { HilbertFormat::Json } else { format };
            hilbert(rank, loops, framing, config.truncate, format)
        }
        Command::Slice { r, flavor, emit_relation } => {
            (config.r_min, config.r_max) = (r, r);
            config.flavored = flavor;
            config.checks = Check::SLICE.into_iter().collect();
            let reports = run_suite(&config)?;
            if let Some(path) = &emit_relation {
                let name = if flavor { "slice_flavor" } else { "trace" };
                let relation = reports
                    .iter()
                    .find(|rep| rep.name == name)
                    .and_then(|rep| rep.derived.get("relation"))
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| Failure::Usage(format!("no relation available at r = {r}")))?;
                write_file(path, relation)?;
            }
            print_reports(&reports, &config)
        }
        Command::Coulomb { r, flavor, checks, emit_bracket, hanany_rescaling } => {
            (config.r_min, config.r_max) = (r, r);
            config.flavored = flavor;
            config.checks = match checks {
                Some(c) => parse_checks(&c)?,
                None => Check::COULOMB.into_iter().collect(),
            };
            if let Some(bad) = config.checks.iter().find(|c| !Check::COULOMB.contains(c)) {
                return Err(Failure::Usage(format!("`{}` is not a Coulomb check", bad.name())));
            }
            if let Some(h) = hanany_rescaling {
                config.hanany = parse_rescaling(&h)?;
            }
            if let Some(args) = &emit_bracket {
                if args[0] != "x1y1" {
                    return Err(Failure::Usage(format!("unsupported bracket `{}` (only x1y1)", args[0])));
                }
                let chart = EtaleChart::new(r, false).map_err(|e| Failure::Usage(e.to_string()))?;
                let bracket = bracket_x1y1(&chart).map_err(|e| Failure::Usage(e.to_string()))?;
                write_file(&PathBuf::from(&args[1]), &bracket.to_string())?;
            }
            let reports = run_suite(&config)?;
            print_reports(&reports, &config)
        }
    }
}

fn hilbert(rank: usize, loops: u32, framing: u32, cap: usize, format: HilbertFormat) -> Result<(), Failure> {
    let spec = GaugeSpec::new(rank, loops, framing).map_err(|e| Failure::Usage(e.to_string()))?;
    let series = truncated_hilbert(&spec, cap).map_err(|e| Failure::Usage(e.to_string()))?;
    let closed = match (framing, rank) {
        (1, 2) => Some(closed_form_gl2(loops)),
        (1, 3) => Some(closed_form_gl3(loops)),
        _ => None,
    };
    let comparison = closed.as_ref().map(|cf| series_equal(&series, &cf.expand(cap)).expect("equal caps"));
    match format {
        HilbertFormat::Json => {
            let value = json!({
                "rank": rank,
                "loops": loops,
                "framing": framing,
                "truncate": cap,
                "series": series.to_json(),
                "closed_form": closed.as_ref().map(|cf| cf.to_json()),
                "closed_form_text": closed.as_ref().map(|cf| cf.to_string()),
                "comparison": comparison,
                "ci_diagnostic": closed.as_ref().map(ci_diagnostic),
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("json value"));
        }
        HilbertFormat::Series => println!("{series}"),
        HilbertFormat::Closed | HilbertFormat::Both => {
            if matches!(format, HilbertFormat::Both) {
                println!("series: {series}");
            }
            match &closed {
                Some(cf) => {
                    println!("closed form: {cf}");
                    println!("complete intersection diagnostic: {}", serde_json::to_string(&ci_diagnostic(cf)).expect("json"));
                }
                None => println!("closed form: not available for framing {framing}"),
            }
            match &comparison {
                Some(SeriesComparison::Equal) => println!("enumeration matches the closed form through degree {cap}"),
                Some(SeriesComparison::Mismatch { degree, left, right }) => {
                    println!("mismatch at degree {degree}: enumeration {left}, closed form {right}")
                }
                None => {}
            }
        }
    }
    match comparison {
        Some(SeriesComparison::Mismatch { .. }) => Err(Failure::Checks),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
