//! Command-line front end.
//!
//! Verbs: `build`, `ext`, `margolis`, `split`, `render-module`, `verify`.
//! Modules are addressed either by a construction key (`M:6`, `ambient:5`,
//! `U`, `N`, `NU`, `G:3`, `P:3`, `Mz:5:4,5`, `figure:7`, `triv:8`,
//! `free:0,3`, `dual:<key>`, `sus:<d>:<key>`, `tensor:<key>:<key>`) or by a
//! path to a module JSON file.
//!
//! Exit codes: 0 success, 1 verification failure, 2 unknown key, 3
//! parameter out of range, 4 i/o failure, 5 validation failure, 6 resource
//! budget exceeded.

use a1ext::chart::{ext_chart, ext_cochart, ChartError};
use a1ext::km2::{
    build_ambient_mk, build_g, build_joker, build_mk, build_mk_z, build_n, build_nu, figure_mk,
    BuildError, Ring, DEFAULT_DEGREE_CAP, DEFAULT_MAX_K,
};
use a1ext::margolis::{margolis_homology, split_reduced, MargolisOp};
use a1ext::module::{GradedModule, ModuleFile};
use a1ext::render::{render_chart, render_module, Format, RenderSpec};
use a1ext::resolution::{ResolutionError, DEFAULT_GENERATOR_BUDGET};
use a1ext::verify::{all_pass, run_suite, CheckLine, SUITES};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "a1ext", version, about = "Exact Ext computations over A(1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Ascii,
    Svg,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Ascii => Format::Ascii,
            FormatArg::Svg => Format::Svg,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpArg {
    Q0,
    Q1,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Build a module by key and write it as JSON.
    Build { key: String, out: PathBuf },
    /// Compute and render an Ext chart.
    Ext {
        /// Construction key or path to a module JSON file.
        module: String,
        /// Maximal filtration.
        #[arg(long = "S", default_value_t = 8)]
        max_s: u32,
        /// Maximal internal degree of the resolution.
        #[arg(long = "T", default_value_t = 48)]
        max_t: i64,
        #[arg(long, value_enum, default_value_t = FormatArg::Ascii)]
        format: FormatArg,
        /// Second-variable Ext (module in the second slot).
        #[arg(long)]
        cochart: bool,
        /// Render the coordinate axis right-to-left.
        #[arg(long)]
        rtl: bool,
        /// Suspend the module before resolving.
        #[arg(long, default_value_t = 0)]
        suspend: i64,
        #[arg(long)]
        stem_lo: Option<i64>,
        #[arg(long)]
        stem_hi: Option<i64>,
        /// Generator budget for the resolution.
        #[arg(long, default_value_t = DEFAULT_GENERATOR_BUDGET)]
        budget: usize,
    },
    /// Margolis homology of a module.
    Margolis {
        module: String,
        #[arg(long, value_enum, default_value_t = OpArg::Both)]
        operator: OpArg,
    },
    /// Split a module into reduced and free parts.
    Split {
        module: String,
        #[arg(long)]
        out_reduced: Option<PathBuf>,
        #[arg(long)]
        out_free: Option<PathBuf>,
    },
    /// Render a module cell diagram.
    RenderModule {
        module: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Ascii)]
        format: FormatArg,
        #[arg(long, default_value_t = 16)]
        cell: u32,
    },
    /// Run verification suites: all, lemma-x, partitions, mk-shapes,
    /// ext-lists, shifts, splitting.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        /// Extend the module range to k = 9 (slow).
        #[arg(long)]
        deep: bool,
        /// Degree cap for the splitting suite.
        #[arg(long, default_value_t = 40)]
        degree_cap: i64,
    },
}

#[derive(Debug)]
enum CliError {
    VerifyFailed,
    Unknown(String),
    Range(String),
    Io(String),
    Validation(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Unknown(_) => 2,
            CliError::Range(_) => 3,
            CliError::Io(_) => 4,
            CliError::Validation(_) => 5,
            CliError::Budget(_) => 6,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::VerifyFailed => "verification failed".to_string(),
            CliError::Unknown(m) => format!("unknown key: {m}"),
            CliError::Range(m) => format!("parameter out of range: {m}"),
            CliError::Io(m) => format!("i/o error: {m}"),
            CliError::Validation(m) => format!("validation failed: {m}"),
            CliError::Budget(m) => format!("budget exceeded: {m}"),
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> CliError {
        match e {
            BuildError::ParamRange { .. } | BuildError::CapExceeded { .. } => {
                CliError::Range(e.to_string())
            }
            BuildError::ClosureFailure { .. } => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ChartError> for CliError {
    fn from(e: ChartError) -> CliError {
        match e {
            ChartError::Resolution(ResolutionError::Budget { .. }) => {
                CliError::Budget(e.to_string())
            }
            ChartError::Build(b) => b.into(),
            ChartError::WindowTooSmall { .. } => CliError::Range(e.to_string()),
        }
    }
}

fn degree_cap() -> i64 {
    std::env::var("A1EXT_DEGREE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_DEGREE_CAP)
}

fn shared_ring() -> Result<Ring, CliError> {
    Ok(Ring::new(DEFAULT_MAX_K, degree_cap())?)
}

/// Parse a construction key from its `:`-separated tokens; returns the
/// module and the number of tokens consumed.
fn parse_key(ring: &Ring, tokens: &[&str]) -> Result<(GradedModule, usize), CliError> {
    let head = *tokens.first().ok_or_else(|| CliError::Unknown("empty key".into()))?;
    let number = |i: usize| -> Result<i64, CliError> {
        tokens
            .get(i)
            .ok_or_else(|| CliError::Unknown(format!("{head} needs a parameter")))?
            .parse::<i64>()
            .map_err(|_| CliError::Unknown(format!("{head}: malformed number")))
    };
    match head {
        "U" => Ok((build_joker().module, 1)),
        "N" => Ok((build_n(ring).module, 1)),
        "NU" => Ok((build_nu(ring).module, 1)),
        "M" => {
            let k = in_range_u32(number(1)?, 4, ring.max_j as i64)?;
            Ok((build_mk(ring, k, true)?.reduced().clone(), 2))
        }
        "ambient" => {
            let k = in_range_u32(number(1)?, 4, ring.max_j as i64)?;
            Ok((build_ambient_mk(ring, k, true)?.module, 2))
        }
        "G" => {
            let j = in_range_u32(number(1)?, 3, 20)?;
            Ok((build_g(j, ring.degree_cap)?.module, 2))
        }
        "P" => {
            let j = in_range_u32(number(1)?, 3, 20)?;
            Ok((build_p_checked(j, ring.degree_cap)?, 2))
        }
        "Mz" => {
            let k = in_range_u32(number(1)?, 4, ring.max_j as i64)?;
            let js: Vec<u32> = tokens
                .get(2)
                .ok_or_else(|| CliError::Unknown("Mz needs z indices".into()))?
                .split(',')
                .map(|s| {
                    s.parse::<u32>()
                        .map_err(|_| CliError::Unknown("Mz: malformed index list".into()))
                })
                .collect::<Result<_, _>>()?;
            Ok((build_mk_z(ring, k, &js, true)?.module, 3))
        }
        "figure" => {
            let k = in_range_u32(number(1)?, 4, 64)?;
            Ok((figure_mk(k)?, 2))
        }
        "triv" => Ok((GradedModule::trivial(number(1)?), 2)),
        "free" => {
            let degrees: Vec<i64> = tokens
                .get(1)
                .ok_or_else(|| CliError::Unknown("free needs degrees".into()))?
                .split(',')
                .map(|s| {
                    s.parse::<i64>()
                        .map_err(|_| CliError::Unknown("free: malformed degree list".into()))
                })
                .collect::<Result<_, _>>()?;
            Ok((GradedModule::free(&degrees), 2))
        }
        "dual" => {
            let (inner, used) = parse_key(ring, &tokens[1..])?;
            Ok((inner.dual(), used + 1))
        }
        "sus" => {
            let d = number(1)?;
            let (inner, used) = parse_key(ring, &tokens[2..])?;
            Ok((inner.suspend(d), used + 2))
        }
        "tensor" => {
            let (a, used_a) = parse_key(ring, &tokens[1..])?;
            let (b, used_b) = parse_key(ring, &tokens[1 + used_a..])?;
            Ok((a.tensor(&b), used_a + used_b + 1))
        }
        other => Err(CliError::Unknown(other.to_string())),
    }
}

fn in_range_u32(v: i64, lo: i64, hi: i64) -> Result<u32, CliError> {
    if v < lo || v > hi {
        return Err(CliError::Range(format!("{v} not in {lo}..={hi}")));
    }
    Ok(v as u32)
}

fn build_p_checked(j: u32, cap: i64) -> Result<GradedModule, CliError> {
    Ok(a1ext::km2::build_p(j, cap)?)
}

/// Load a module from a key or a JSON file path.
fn load_module(ring: &Ring, arg: &str) -> Result<GradedModule, CliError> {
    if Path::new(arg).exists() {
        let text =
            std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
        let file: ModuleFile =
            serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
        return file
            .into_module()
            .map_err(|e| CliError::Validation(e.to_string()));
    }
    let tokens: Vec<&str> = arg.split(':').collect();
    let (module, used) = parse_key(ring, &tokens)?;
    if used != tokens.len() {
        return Err(CliError::Unknown(format!(
            "trailing tokens after {} of {}",
            used,
            tokens.len()
        )));
    }
    module
        .validate()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(module)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build { key, out } => {
            let ring = shared_ring()?;
            let module = load_module(&ring, &key)?;
            let file = ModuleFile::from_module(&module);
            let mut text = serde_json::to_string_pretty(&file)
                .map_err(|e| CliError::Io(e.to_string()))?;
            text.push('\n');
            std::fs::write(&out, text)
                .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
            println!(
                "wrote {} ({} basis elements, degrees {:?}..{:?})",
                out.display(),
                module.dim(),
                module.min_degree(),
                module.max_degree()
            );
            Ok(())
        }
        Command::Ext {
            module,
            max_s,
            max_t,
            format,
            cochart,
            rtl,
            suspend,
            stem_lo,
            stem_hi,
            budget,
        } => {
            let ring = shared_ring()?;
            let m = load_module(&ring, &module)?.suspend(suspend);
            let computed = if cochart {
                ext_cochart(&m, max_s, max_t, budget)?
            } else {
                ext_chart(&m, max_s, max_t, budget)?
            };
            let stems: Vec<i64> = computed.chart.dots.iter().map(|d| d.stem).collect();
            let lo = stem_lo.unwrap_or_else(|| stems.iter().min().copied().unwrap_or(0));
            let hi = stem_hi.unwrap_or_else(|| stems.iter().max().copied().unwrap_or(0));
            let mut spec = RenderSpec::new(lo.min(hi), hi.max(lo), max_s, format.into());
            if rtl {
                spec = spec.rtl();
            }
            print!("{}", render_chart(&computed.chart, &spec));
            Ok(())
        }
        Command::Margolis { module, operator } => {
            let ring = shared_ring()?;
            let m = load_module(&ring, &module)?;
            let ops: Vec<MargolisOp> = match operator {
                OpArg::Q0 => vec![MargolisOp::Q0],
                OpArg::Q1 => vec![MargolisOp::Q1],
                OpArg::Both => vec![MargolisOp::Q0, MargolisOp::Q1],
            };
            for op in ops {
                let h = margolis_homology(&m, op);
                println!("{} homology: total dimension {}", op.name(), h.total_dim());
                for (d, v, label) in &h.representatives {
                    let _ = v;
                    println!("  degree {d}: {label}");
                }
            }
            Ok(())
        }
        Command::Split {
            module,
            out_reduced,
            out_free,
        } => {
            let ring = shared_ring()?;
            let m = load_module(&ring, &module)?;
            let s = split_reduced(&m);
            println!(
                "reduced: dim {} {:?}",
                s.reduced.dim(),
                s.reduced.dims_by_degree()
            );
            println!(
                "free: dim {} on generators in degrees {:?}",
                s.free.dim(),
                s.free_generator_degrees
            );
            for (part, path) in [(&s.reduced, out_reduced), (&s.free, out_free)] {
                if let Some(path) = path {
                    let mut text =
                        serde_json::to_string_pretty(&ModuleFile::from_module(part))
                            .map_err(|e| CliError::Io(e.to_string()))?;
                    text.push('\n');
                    std::fs::write(&path, text)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        Command::RenderModule {
            module,
            format,
            cell,
        } => {
            let ring = shared_ring()?;
            let m = load_module(&ring, &module)?;
            print!("{}", render_module(&m, format.into(), cell));
            Ok(())
        }
        Command::Verify {
            suite,
            deep,
            degree_cap,
        } => {
            let selected: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![Box::leak(suite.clone().into_boxed_str()) as &str]
            } else {
                return Err(CliError::Unknown(format!(
                    "suite {suite}; expected all or one of {SUITES:?}"
                )));
            };
            let mut failed = false;
            for name in selected {
                let lines = run_suite(name, deep, degree_cap)
                    .expect("suite names validated above");
                println!("== suite {name}");
                print_lines(&lines);
                failed |= !all_pass(&lines);
            }
            if failed {
                Err(CliError::VerifyFailed)
            } else {
                Ok(())
            }
        }
    }
}

fn print_lines(lines: &[CheckLine]) {
    for line in lines {
        if line.pass {
            println!("ok   {:<28} {}", line.name, line.claim);
        } else {
            println!(
                "FAIL {:<28} {} [{}]",
                line.name, line.claim, line.detail
            );
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
