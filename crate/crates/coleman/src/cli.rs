//! Argument parsing and dispatch. Every command writes one JSON document to
//! standard output.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use coleman_core::branching::{decompose_pair, eval_branching_vector, generator_set, MonoidPairE};
use coleman_core::families::{decompose_family, decompose_family_pair, specialize_family, FamilyCharacter, PairCoefficients};
use coleman_core::flag::{bruhat_cell, iota_hat, FlagPoint};
use coleman_core::groups::{
    box_decompose, build_distinguished_elements, iwahori_factor, level_index, random_msquare, stabilizer_dimension, GroupElement, OrbitCase,
};
use coleman_core::matrix::Matrix;
use coleman_core::padic::{AnalyticCharacter, Zpn};
use coleman_core::slopes::{borel_delta_table, is_small_slope, SlopeDatum};
use coleman_core::weights::{classify_weight, lambda_star, parameter_dictionary, star_action, KostantElement, Weight};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::SuiteConfig;
use crate::error::{AppError, AppResult};
use crate::report::{emit_report, JsonReport};
use crate::suites::{criterion, run_named, suite_rng, CRITERIA, SUITES};

#[derive(Debug, Parser)]
#[command(name = "coleman", version, about = "Exact checks for GL(2n) branching and slope data")]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Globals {
    #[arg(long, global = true)]
    p: Option<u64>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Precision: work modulo p^N.
    #[arg(long = "N", global = true)]
    prec: Option<u32>,
    #[arg(long, global = true)]
    r: Option<u32>,
    #[arg(long, global = true)]
    t: Option<u32>,
    #[arg(long, global = true)]
    m: Option<u32>,
    #[arg(long, global = true)]
    k: Option<u32>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// JSON file with any of the fields above; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weight classification, the parameter dictionary and the ⋆-action.
    Weights {
        #[command(subcommand)]
        action: WeightsCmd,
    },
    /// The small-slope criterion.
    Slopes {
        #[command(subcommand)]
        action: SlopesCmd,
    },
    /// Bruhat cells and the twisted embedding.
    Flag {
        #[command(subcommand)]
        action: FlagCmd,
    },
    /// Distinguished elements, factorizations, stabilizers and level indices.
    Groups {
        #[command(subcommand)]
        action: GroupsCmd,
    },
    /// Branching exponents and vectors.
    Branch {
        #[command(subcommand)]
        action: BranchCmd,
    },
    /// Coefficients of torus characters.
    Family {
        #[command(subcommand)]
        action: FamilyCmd,
    },
    /// Run a suite by name, `all`, or `criterion-K`, `acceptance`.
    Verify { suite: String },
}

#[derive(Debug, Args)]
struct WeightArg {
    /// A weight as JSON, or the comma-separated `tau0` row.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
}

#[derive(Debug, Subcommand)]
enum WeightsCmd {
    Classify(WeightArg),
    Dictionary(WeightArg),
    Star {
        #[command(flatten)]
        w: WeightArg,
        #[arg(long)]
        i: usize,
    },
}

#[derive(Debug, Subcommand)]
enum SlopesCmd {
    /// Verdict for a datum (default: the Borel-ordinary one).
    Check {
        #[command(flatten)]
        w: WeightArg,
        #[arg(long)]
        theta: Option<String>,
    },
    Delta(WeightArg),
}

#[derive(Debug, Subcommand)]
enum FlagCmd {
    Cell {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    IotaHat {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Debug, Subcommand)]
enum GroupsCmd {
    Distinguished,
    Factor {
        /// Rows as JSON, e.g. `[[1,9],[0,1]]`.
        #[arg(long)]
        matrix: String,
    },
    /// Box decomposition of the given element, or of a random one.
    Box {
        #[arg(long)]
        element: Option<String>,
    },
    Stab,
    Index,
}

#[derive(Debug, Args)]
struct PairArg {
    #[command(flatten)]
    w: WeightArg,
    /// `j_tau` for `tau != tau0`, comma separated.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    j: String,
}

#[derive(Debug, Subcommand)]
enum BranchCmd {
    Generators,
    Decompose(PairArg),
    Eval {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        element: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum FamilyCmd {
    /// Coefficients of the algebraic character of a weight (and `j`).
    Decompose {
        #[command(flatten)]
        pair: PairArg,
        /// Decompose the single weight instead of the pair.
        #[arg(long)]
        torus: bool,
    },
    /// Integer exponents, one per generator, read as algebraic characters.
    Specialize {
        #[arg(long, allow_hyphen_values = true)]
        exponents: String,
    },
}

/// Exit code and the text written to standard output and standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn config_from(g: &Globals) -> AppResult<SuiteConfig> {
    let mut cfg = match &g.config {
        Some(path) => SuiteConfig::from_file(path)?,
        None => SuiteConfig::default(),
    };
    macro_rules! take {
        ($($f:ident => $c:ident),*) => {$(if let Some(v) = g.$f { cfg.$c = v; })*};
    }
    take!(p => p, n => n, d => d, prec => prec, r => r, t => t, m => m, k => k, seed => seed, budget => budget, samples => samples);
    cfg.validate()?;
    Ok(cfg)
}

fn parse_ints(s: &str) -> AppResult<Vec<i64>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| AppError::Usage(format!("not an integer: {x:?}"))))
        .collect()
}

fn parse_weight(s: &str, cfg: &SuiteConfig) -> AppResult<Weight> {
    if s.trim_start().starts_with('{') {
        let w: Weight = serde_json::from_str(s)?;
        w.validate()?;
        return Ok(w);
    }
    let row = parse_ints(s)?;
    if row.is_empty() || row.len() % 2 == 1 {
        return Err(AppError::Usage("a tau0 row needs an even, positive length".into()));
    }
    Ok(Weight::from_tau0(row.len() / 2, cfg.d, 0, &row)?)
}

fn parse_pair(a: &PairArg, cfg: &SuiteConfig) -> AppResult<MonoidPairE> {
    let kappa = parse_weight(&a.w.weight, cfg)?;
    let mut j = parse_ints(&a.j)?;
    if j.is_empty() {
        j = vec![0; kappa.d - 1];
    }
    Ok(MonoidPairE::new(kappa, j)?)
}

fn parse_element(s: Option<&str>, cfg: &SuiteConfig, n: usize, d: usize) -> AppResult<GroupElement> {
    match s {
        Some(text) => Ok(serde_json::from_str(text)?),
        None => {
            let ring = Zpn::new(cfg.p, cfg.prec)?;
            Ok(random_msquare(ring, n, d, cfg.r, &mut suite_rng(cfg.seed, "element")))
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> AppResult<Value> {
    Ok(serde_json::to_value(x)?)
}

fn describe_all(list: &[AnalyticCharacter]) -> Vec<Value> {
    list.iter()
        .map(|c| json!({ "algebraic": c.as_algebraic().ok().flatten(), "character": c }))
        .collect()
}

fn run_verify(name: &str, cfg: &SuiteConfig) -> AppResult<JsonReport> {
    let params = to_value(cfg)?;
    let timed = |suite: &str, f: &dyn Fn() -> AppResult<coleman_core::report::Report>| -> AppResult<JsonReport> {
        let start = Instant::now();
        let rep = f()?;
        Ok(JsonReport::new(suite, params.clone(), cfg.seed, rep, start.elapsed().as_millis() as u64))
    };
    let criterion_part = |k: usize| timed(&format!("criterion-{k}"), &|| criterion(k, cfg.seed, cfg.budget));
    match name {
        "all" => {
            let names: Vec<String> = if cfg.suites.iter().any(|s| s == "all") {
                SUITES.iter().map(|s| s.to_string()).collect()
            } else {
                cfg.suites.clone()
            };
            let parts = names.iter().map(|s| timed(s, &|| run_named(s, cfg))).collect::<AppResult<Vec<_>>>()?;
            Ok(JsonReport::aggregate("all", params.clone(), cfg.seed, parts))
        }
        "acceptance" => {
            let parts = (1..=CRITERIA.len()).map(criterion_part).collect::<AppResult<Vec<_>>>()?;
            Ok(JsonReport::aggregate("acceptance", params.clone(), cfg.seed, parts))
        }
        _ => match name.strip_prefix("criterion-").map(str::parse::<usize>) {
            Some(Ok(k)) => criterion_part(k),
            Some(Err(_)) => Err(AppError::Usage(format!("bad criterion name {name:?}"))),
            None => timed(name, &|| run_named(name, cfg)),
        },
    }
}

/// Returns the JSON document and whether every check passed.
fn dispatch(cli: &Cli) -> AppResult<(Value, bool)> {
    let cfg = config_from(&cli.globals)?;
    let ring = || Zpn::new(cfg.p, cfg.prec);
    let out = match &cli.command {
        Command::Verify { suite } => {
            let rep = run_verify(suite, &cfg)?;
            let ok = rep.ok();
            return Ok((serde_json::from_str(&emit_report(&rep))?, ok));
        }
        Command::Weights { action } => match action {
            WeightsCmd::Classify(a) => to_value(&classify_weight(&parse_weight(&a.weight, &cfg)?))?,
            WeightsCmd::Dictionary(a) => to_value(&parameter_dictionary(&parse_weight(&a.weight, &cfg)?)?)?,
            WeightsCmd::Star { w, i } => {
                let lam = parse_weight(&w.weight, &cfg)?;
                to_value(&star_action(KostantElement::new(*i, lam.n)?, &lam)?)?
            }
        },
        Command::Slopes { action } => match action {
            SlopesCmd::Check { w, theta } => {
                let lam = parse_weight(&w.weight, &cfg)?;
                let theta = match theta {
                    Some(t) => serde_json::from_str(t)?,
                    None => SlopeDatum::from_weight(&lambda_star(&lam)),
                };
                to_value(&is_small_slope(&theta, &lam)?)?
            }
            SlopesCmd::Delta(a) => to_value(&borel_delta_table(&parse_weight(&a.weight, &cfg)?)?)?,
        },
        Command::Flag { action } => match action {
            FlagCmd::Cell { point } => {
                let x = FlagPoint::from_ints(ring()?, &parse_ints(point)?)?;
                json!({ "cell": bruhat_cell(&x) })
            }
            FlagCmd::IotaHat { point } => {
                let y = FlagPoint::from_ints(ring()?, &parse_ints(point)?)?;
                let x = iota_hat(&y)?;
                json!({ "coords": x.coords, "cell": bruhat_cell(&x) })
            }
        },
        Command::Groups { action } => match action {
            GroupsCmd::Distinguished => to_value(&build_distinguished_elements(ring()?, cfg.n, cfg.d)?)?,
            GroupsCmd::Factor { matrix } => {
                let rows: Vec<Vec<i64>> = serde_json::from_str(matrix)?;
                let m = Matrix::from_rows(ring()?, &rows)?;
                let (r, s) = iwahori_factor(&m, cfg.r)?;
                json!({ "R": r, "S": s })
            }
            GroupsCmd::Box { element } => {
                let g = parse_element(element.as_deref(), &cfg, cfg.n, cfg.d)?;
                let (h, b) = box_decompose(&g, cfg.r)?;
                json!({ "g": g, "h": h, "b": b })
            }
            GroupsCmd::Stab => json!({
                "levi": stabilizer_dimension(OrbitCase::Levi, cfg.n, cfg.d)?,
                "full": stabilizer_dimension(OrbitCase::Full, cfg.n, cfg.d)?,
            }),
            GroupsCmd::Index => to_value(&level_index(cfg.p, cfg.n, cfg.d, cfg.t, cfg.budget)?)?,
        },
        Command::Branch { action } => match action {
            BranchCmd::Generators => {
                let gens: Vec<Value> = generator_set(cfg.n, cfg.d).iter().map(|(id, g)| json!({ "id": id, "pair": g })).collect();
                Value::Array(gens)
            }
            BranchCmd::Decompose(a) => {
                let x = parse_pair(a, &cfg)?;
                json!({ "exponents": decompose_pair(&x)?, "list": decompose_pair(&x)?.to_list(x.kappa.n, x.kappa.d) })
            }
            BranchCmd::Eval { pair, element } => {
                let x = parse_pair(pair, &cfg)?;
                let g = parse_element(element.as_deref(), &cfg, x.kappa.n, x.kappa.d)?;
                json!({ "g": g, "value": eval_branching_vector(&x, &g, cfg.r)? })
            }
        },
        Command::Family { action } => match action {
            FamilyCmd::Decompose { pair, torus } => {
                let x = parse_pair(pair, &cfg)?;
                let f = FamilyCharacter::algebraic(ring()?, &x.kappa, &x.j)?;
                if *torus {
                    let c = decompose_family(&f)?;
                    json!({ "xi": c.xi.iter().map(|row| describe_all(row)).collect::<Vec<_>>() })
                } else {
                    json!({ "coefficients": describe_all(&decompose_family_pair(&f)?.to_generator_list()) })
                }
            }
            FamilyCmd::Specialize { exponents } => {
                let ring = ring()?;
                let list = parse_ints(exponents)?
                    .into_iter()
                    .map(|k| AnalyticCharacter::algebraic(ring, k))
                    .collect::<Result<Vec<_>, _>>()?;
                let c = PairCoefficients::from_generator_list(cfg.n, cfg.d, &list)?;
                let x = specialize_family(&c)?;
                json!({ "pair": x, "in_e": x.validate().is_ok() })
            }
        },
    };
    Ok((out, true))
}

/// Parses `argv` (program name first) and runs the command.
///
/// Exit codes: 0 when every check passes, 1 when a verification check fails,
/// 2 for usage errors and rejected inputs.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok((value, ok)) => Outcome {
            code: if ok { 0 } else { 1 },
            stdout: format!("{value}\n"),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("{}\n", json!({ "error": e.to_string() })),
        },
    }
}
