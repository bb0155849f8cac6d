//! `troforge`: universal enveloping TROs of Cartan factors from the command line.
//!
//! Exit status is 0 when every check passes, 1 when a mathematical verdict
//! fails, and 2 on malformed input or invalid parameters.

mod input;
mod render;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use troforge::closure::{decompose_blocks, tro_closure, word_antiautomorphism, ClosureSummary};
use troforge::envelope::{envelope, sweep, Caps, CartanSpec, EnvelopeSummary};
use troforge::grids::{
    build_hermitian_grid, build_hkn_basis, build_rank_one_grid, build_rectangular_grid, build_spin_grid,
    build_standard_spin_system, build_symplectic_grid, verify_grid, AxiomReport, Grid, GridJson,
};
use troforge::matrix::{BlockElement, BlockElementJson};
use troforge::radical::{exact_sequence_report, RadicalSummary};
use troforge::{Error, ToleranceConfig};

use input::{read_generators, read_grid, read_tro, TroInput};

const SEED_ENV: &str = "TROFORGE_SEED";

#[derive(Parser, Debug)]
#[command(name = "troforge", version, about = "Universal enveloping TROs of finite-dimensional Cartan factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Rank tolerance for span computations
    #[arg(long, global = true, default_value_t = ToleranceConfig::DEFAULT_RANK_TOL)]
    tol: f64,

    /// Relative tolerance for identity checks
    #[arg(long = "eq-tol", global = true, default_value_t = ToleranceConfig::DEFAULT_EQ_TOL)]
    eq_tol: f64,

    /// Seed for randomized steps; TROFORGE_SEED takes precedence
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[allow(clippy::upper_case_acronyms)]
enum Family {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
    #[value(name = "IV")]
    IV,
    #[value(name = "V")]
    V,
    #[value(name = "VI")]
    VI,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridKindArg {
    Spin,
    Hermitian,
    Symplectic,
    Rectangular,
    RankOne,
    /// The basis `b^{n,k}_i` of one rank-one block (export only).
    Hkn,
}

#[derive(Args, Debug, Clone, Copy)]
struct CapArgs {
    #[arg(long, default_value_t = Caps::LIMITS.max_spin_k)]
    max_spin_k: usize,
    #[arg(long, default_value_t = Caps::LIMITS.max_rank1_n)]
    max_rank1_n: usize,
    #[arg(long, default_value_t = Caps::LIMITS.max_type1_nm)]
    max_type1_nm: usize,
    #[arg(long, default_value_t = Caps::LIMITS.max_type23_n)]
    max_type23_n: usize,
}

impl CapArgs {
    fn caps(&self) -> Result<Caps, Error> {
        Caps::new(self.max_spin_k, self.max_type1_nm, self.max_type23_n, self.max_rank1_n)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the enveloping TRO of one Cartan factor
    Envelope {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Dimension of a spin factor
        #[arg(long)]
        dim: Option<usize>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Check a grid against the axioms of its family
    VerifyGrid {
        #[arg(long, value_enum)]
        kind: Option<GridKindArg>,
        /// Size; the number of spin elements for spin grids
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Verify the built-in grid of the given kind and size
        #[arg(long)]
        builtin: bool,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Ternary closure of a generator file
    Closure {
        #[arg(long)]
        file: PathBuf,
    },
    /// Every factor within the caps
    Sweep {
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Radical and exact sequence of a TRO given by a block pattern or generators
    Radical {
        #[arg(long)]
        file: PathBuf,
    },
    /// Print a built-in grid, or its generators, as JSON
    Export {
        #[arg(long, value_enum)]
        kind: GridKindArg,
        /// Grid size; for `spin` this is k, giving k + 1 elements
        #[arg(long)]
        n: usize,
        /// Column count for `rectangular`
        #[arg(long)]
        m: Option<usize>,
        /// Block index for `hkn`
        #[arg(long)]
        k: Option<usize>,
        /// Emit `{"generators": [...]}` instead of a grid
        #[arg(long)]
        generators: bool,
    },
}

/// Seed and tolerances echoed with every report.
#[derive(Debug, Clone, Copy, Serialize)]
struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    rank_tol: f64,
    eq_tol: f64,
}

#[derive(Serialize)]
struct WithSettings<T: Serialize> {
    #[serde(flatten)]
    report: T,
    #[serde(flatten)]
    settings: Settings,
}

/// Outcome of a command: what to print and whether the verdict passed.
struct Outcome {
    json: String,
    markdown: String,
    pass: bool,
}

fn outcome<T: Serialize>(report: T, settings: Settings, markdown: String, pass: bool) -> Result<Outcome, Error> {
    let json = serde_json::to_string_pretty(&WithSettings { report, settings })
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(Outcome { json, markdown, pass })
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::InvalidParameter(_)
            | Error::InvalidMatrix(_)
            | Error::ShapeMismatch(_)
            | Error::EmptyGenerators
            | Error::Reassigned(_)
            | Error::HilbertBlock { .. }
    )
}

fn settings(cli: &Cli) -> Result<Settings, Error> {
    let seed = match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::InvalidParameter(format!("{SEED_ENV}={v:?} is not an integer")))?,
        Err(_) => cli.seed,
    };
    ToleranceConfig::new(cli.tol, cli.eq_tol)?;
    Ok(Settings { seed: Some(seed), rank_tol: cli.tol, eq_tol: cli.eq_tol })
}

fn need(v: Option<usize>, flag: &str, what: &str) -> Result<usize, Error> {
    v.ok_or_else(|| Error::InvalidParameter(format!("{what} needs --{flag}")))
}

fn cartan_spec(family: Family, n: Option<usize>, m: Option<usize>, dim: Option<usize>) -> Result<CartanSpec, Error> {
    Ok(match family {
        Family::I => CartanSpec::TypeI { n: need(n, "n", "type I")?, m: need(m, "m", "type I")? },
        Family::II => CartanSpec::TypeII { n: need(n, "n", "type II")? },
        Family::III => CartanSpec::TypeIII { n: need(n, "n", "type III")? },
        Family::IV => CartanSpec::TypeIV { dim: need(dim, "dim", "type IV")? },
        Family::V => CartanSpec::TypeV,
        Family::VI => CartanSpec::TypeVI,
    })
}

fn builtin_grid(kind: GridKindArg, n: usize, m: Option<usize>) -> Result<Grid, Error> {
    match kind {
        GridKindArg::Spin => build_spin_grid(n),
        GridKindArg::Hermitian => Ok(build_hermitian_grid(n)?.with_both_orientations()),
        GridKindArg::Symplectic => Ok(build_symplectic_grid(n)?.with_both_orientations()),
        GridKindArg::Rectangular => build_rectangular_grid(n, need(m, "m", "a rectangular grid")?),
        GridKindArg::RankOne => build_rank_one_grid(n),
        GridKindArg::Hkn => Err(Error::InvalidParameter("hkn is only available for export --generators".into())),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let s = settings(cli)?;
    let seed = s.seed.unwrap_or_default();
    // Envelope reports carry their own seed.
    let bare = Settings { seed: None, ..s };
    let tol = ToleranceConfig::new(s.rank_tol, s.eq_tol)?;
    match &cli.command {
        Command::Envelope { family, n, m, dim, caps } => {
            let spec = cartan_spec(*family, *n, *m, *dim)?;
            caps.caps()?.admits(&spec)?;
            let r = envelope(spec, &tol, seed)?;
            let summary = r.summary();
            let md = render::envelope(&summary);
            outcome(summary, bare, md, r.theorem_pass)
        }
        Command::VerifyGrid { kind, n, m, builtin, file } => {
            let g = match (file, builtin) {
                (Some(path), false) => read_grid(path)?,
                (None, true) => builtin_grid(
                    kind.ok_or_else(|| Error::InvalidParameter("--builtin needs --kind".into()))?,
                    need(*n, "n", "--builtin")?,
                    *m,
                )?,
                _ => return Err(Error::InvalidParameter("give exactly one of --file or --builtin".into())),
            };
            let rep: AxiomReport = verify_grid(&g, &tol)?;
            let md = render::axioms(&rep);
            let pass = rep.passed;
            outcome(rep, s, md, pass)
        }
        Command::Closure { file } => {
            let gens = read_generators(file)?;
            let c = tro_closure(&gens, &tol)?;
            let blocks = decompose_blocks(&c, &tol, seed)?.blocks;
            let (theta_residual, universal) = match word_antiautomorphism(&c, &tol, seed) {
                Ok(t) => (t.residual, true),
                Err(Error::NotUniversal { residual }) => (residual, false),
                Err(e) => return Err(e),
            };
            let report = ClosureReport { closure: ClosureSummary::from(&c), blocks, theta_residual, universal };
            let md = render::closure(&report.closure, &report.blocks, theta_residual, universal);
            outcome(report, s, md, true)
        }
        Command::Sweep { caps } => {
            let rows: Vec<SweepRow> = sweep(&caps.caps()?, &tol, seed)
                .into_iter()
                .map(|(spec, r)| match r {
                    Ok(r) => SweepRow::Report(r.summary()),
                    Err(e) => SweepRow::Error { spec, error: e.to_string() },
                })
                .collect();
            let pass = rows.iter().all(|r| matches!(r, SweepRow::Report(x) if x.pass));
            let md = render::sweep(&rows);
            outcome(SweepReport { rows, pass }, s, md, pass)
        }
        Command::Radical { file } => {
            let t = match read_tro(file)? {
                TroInput::Pattern(p) => troforge::envelope::tro_from_pattern(&p, &tol)?,
                TroInput::Generators(g) => tro_closure(&g, &tol)?,
            };
            let rep = exact_sequence_report(&t, &tol, seed)?;
            let summary: RadicalSummary = rep.summary();
            let pass = summary.sequence.is_some_and(|q| q.exact) && summary.kernel_matches;
            let md = render::radical(&summary);
            outcome(summary, s, md, pass)
        }
        Command::Export { kind, n, m, k, generators } => {
            let json = if *kind == GridKindArg::Hkn {
                if !generators {
                    return Err(Error::InvalidParameter("hkn has no grid form; use --generators".into()));
                }
                let gens: Vec<BlockElement> = build_hkn_basis(*n, need(*k, "k", "hkn")?)?
                    .into_iter()
                    .map(BlockElement::single)
                    .collect();
                generator_json(&gens)?
            } else if *generators && *kind == GridKindArg::Spin {
                let gens: Vec<BlockElement> = build_standard_spin_system(*n)?.into_iter().map(BlockElement::single).collect();
                generator_json(&gens)?
            } else {
                let g = builtin_grid(*kind, *n, *m)?;
                if *generators {
                    let gens: Vec<BlockElement> = g.canonical_elements().into_iter().map(|(_, x)| x).collect();
                    generator_json(&gens)?
                } else {
                    serde_json::to_string_pretty(&GridJson::from(&g)).map_err(|e| Error::InvalidParameter(e.to_string()))?
                }
            };
            Ok(Outcome { markdown: format!("```json\n{json}\n```"), json, pass: true })
        }
    }
}

fn generator_json(gens: &[BlockElement]) -> Result<String, Error> {
    #[derive(Serialize)]
    struct Generators {
        generators: Vec<BlockElementJson>,
    }
    let g = Generators { generators: gens.iter().map(BlockElementJson::from).collect() };
    serde_json::to_string_pretty(&g).map_err(|e| Error::InvalidParameter(e.to_string()))
}

#[derive(Serialize)]
struct ClosureReport {
    #[serde(flatten)]
    closure: ClosureSummary,
    blocks: Vec<(usize, usize)>,
    theta_residual: f64,
    universal: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
enum SweepRow {
    Report(EnvelopeSummary),
    Error { spec: CartanSpec, error: String },
}

#[derive(Serialize)]
struct SweepReport {
    rows: Vec<SweepRow>,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => &out.json,
                Format::Markdown => &out.markdown,
            };
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_input_error(&e) { 2 } else { 1 })
        }
    }
}
