//! `gapped-persist` — validate, compute, compare, and generate exact
//! persistence data over JSON files.
//!
//! Exit codes: 0 on success, 1 when an input fails validation or an
//! operation's precondition (a machine-readable report goes to standard
//! output), 2 on parse/IO/usage errors. The process never panics on
//! malformed input, and identical inputs produce byte-identical outputs.

mod dto;
mod output;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gapped_persist_core::field::{format_rational, parse_rational};
use gapped_persist_core::{
    bottleneck_distance, build_s2_fixture, check_triangle, concatenate, fekete_limit, m_hg,
    osc_pair, verify_interleaving, Barcode, ConcatConvention, ContactEnvelope, Error as CoreError,
    Field, GappedModule, Gf2, PersistenceModule, Rational, S2FixtureSpec, Violation,
};

use dto::{
    format_extended, BarcodeDto, CtildeDto, EntryDto, EnvelopeDto, FieldCodec, GappedModuleDto,
    ModuleDto, MorphismsDto, SequenceDto,
};
use output::{
    render_error, ConcatStatsDto, EnvelopeStatsDto, FeketeDto, InterleaveDto, Output,
    PairStatsDto, StatusDto, TriangleDto, ValueDto,
};

/// A command failure with its exit class.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: the input could not be read or does not parse against the
    /// expected schema, or a flag value is malformed.
    Parse(String),
    /// Exit 1: the input parsed but failed validation, or an operation
    /// rejected it.
    Validation(String),
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> CliError {
        CliError::Parse(message.into())
    }

    pub fn validation(message: impl Into<String>) -> CliError {
        CliError::Validation(message.into())
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) => m,
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 1,
        }
    }
}

impl From<Violation> for CliError {
    fn from(v: Violation) -> CliError {
        CliError::Validation(v.0)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        match e {
            CoreError::Invalid(v) => CliError::Validation(v.0),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "gapped-persist",
    version,
    about = "Exact persistence modules over gapped index sets: barcodes, spectral invariants, \
             bottleneck distance, interleaving checks, and model fixtures",
    after_help = "Input paths accept \"-\" for standard input. All quantities are exact \
                  rational strings; see docs/ for the JSON schemas."
)]
struct Cli {
    /// Render aligned text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the result to a file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a module file against its structural invariants.
    Validate {
        /// Persistence-module or gapped-module JSON file.
        module: String,
    },
    /// Compute the barcode of a module. A gapped module is first restricted
    /// along its full grid, which must be an admissible sequence.
    Barcode {
        /// Persistence-module or gapped-module JSON file.
        module: String,
    },
    /// Compute the spectral invariant of a colimit class.
    Spectral {
        /// Persistence-module or gapped-module JSON file.
        module: String,
        /// Comma-separated class entries ("1,0,1"); "0" is the zero class.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Exact bottleneck distance between two barcodes.
    Bottleneck {
        /// Barcode JSON file.
        left: String,
        /// Barcode JSON file.
        right: String,
    },
    /// Restrict a gapped module along an admissible sequence.
    Restrict {
        /// Gapped-module JSON file.
        module: String,
        /// Sequence JSON file.
        sequence: String,
    },
    /// Dualize a persistence module (negated grid, transposed maps).
    Dual {
        /// Persistence-module JSON file.
        module: String,
    },
    /// Translate every index value by an exact rational.
    Shift {
        /// Persistence-module or gapped-module JSON file.
        module: String,
        /// Exact translation amount, e.g. "3/2" or "-1".
        #[arg(long, value_name = "P/Q", allow_hyphen_values = true)]
        by: String,
    },
    /// Verify an explicit delta-interleaving between two persistence modules
    /// over the same grid.
    InterleaveVerify {
        /// Persistence-module JSON file.
        left: String,
        /// Persistence-module JSON file.
        right: String,
        /// Morphism-pair JSON file: { delta_steps, phi, psi }.
        morphisms: String,
    },
    /// Generate a model fixture.
    Fixture {
        #[command(subcommand)]
        which: FixtureCommand,
    },
    /// Quasi-state arithmetic: envelope statistics, the product triangle
    /// inequality, and exact Fekete brackets.
    Quasistate {
        #[command(subcommand)]
        which: QuasistateCommand,
    },
}

#[derive(Subcommand)]
enum FixtureCommand {
    /// Filtered homology of the unit co-sphere bundle of the round
    /// two-sphere in one degree, as a 0-gapped module over GF2 (unit 2pi).
    S2 {
        /// Homological degree, at least 1.
        #[arg(long)]
        degree: usize,
        /// Number of full periods in the window; the grid is {m + epsilon}.
        #[arg(long = "max-m", default_value_t = 8)]
        max_m: usize,
        /// Exact grid offset from the integer spectrum, strictly in (0, 1).
        #[arg(long, default_value = "1/100")]
        epsilon: String,
        /// Unit label carried through outputs, never interpreted.
        #[arg(long, default_value = "2pi")]
        unit: String,
    },
}

#[derive(Subcommand)]
enum QuasistateCommand {
    /// Oscillation statistics of an envelope, optionally against a partner
    /// and through a concatenation.
    Envelope {
        /// Envelope JSON file.
        envelope: String,
        /// Second envelope for pair statistics (and as the concatenation
        /// partner).
        #[arg(long, value_name = "FILE")]
        pair: Option<String>,
        /// Also concatenate (with the partner, or with itself) under the
        /// given value convention.
        #[arg(long, value_enum, value_name = "CONVENTION")]
        concat: Option<ConventionArg>,
    },
    /// Check the product triangle inequality
    /// c_product <= c_theta + c_eta + 3*max(oscbar_h, oscbar_g).
    Triangle {
        #[arg(long, allow_hyphen_values = true)]
        c_theta: String,
        #[arg(long, allow_hyphen_values = true)]
        c_eta: String,
        #[arg(long, allow_hyphen_values = true)]
        c_product: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        oscbar_h: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        oscbar_g: String,
    },
    /// Verify subadditivity of a sequence and report the exact bracket
    /// around lim c_k/k.
    Fekete {
        /// JSON file { "ctilde": ["p/q", ...] }, 1-indexed.
        ctilde: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// Values pass through unchanged (time compression only).
    ValuePreserving,
    /// Values double (speed-2 reparametrization); oscillation adds.
    FlowRescaled,
}

impl ConventionArg {
    fn to_core(self) -> ConcatConvention {
        match self {
            ConventionArg::ValuePreserving => ConcatConvention::ValuePreserving,
            ConventionArg::FlowRescaled => ConcatConvention::FlowRescaled,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ConventionArg::ValuePreserving => "value-preserving",
            ConventionArg::FlowRescaled => "flow-rescaled",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(result) => {
            let text = result.render(cli.pretty);
            match write_output(&cli.out, &text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(err) => {
                    eprintln!("gapped-persist: {}", err.message());
                    ExitCode::from(err.code())
                }
            }
        }
        Err(err) => {
            print!("{}", render_error(err.kind(), err.message(), cli.pretty));
            eprintln!("gapped-persist: {} error: {}", err.kind(), err.message());
            ExitCode::from(err.code())
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::parse(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Validate { module } => cmd_validate(module),
        Command::Barcode { module } => cmd_barcode(module),
        Command::Spectral { module, class } => cmd_spectral(module, class),
        Command::Bottleneck { left, right } => cmd_bottleneck(left, right),
        Command::Restrict { module, sequence } => cmd_restrict(module, sequence),
        Command::Dual { module } => cmd_dual(module),
        Command::Shift { module, by } => cmd_shift(module, by),
        Command::InterleaveVerify {
            left,
            right,
            morphisms,
        } => cmd_interleave_verify(left, right, morphisms),
        Command::Fixture { which } => cmd_fixture(which),
        Command::Quasistate { which } => cmd_quasistate(which),
    }
}

// ---------------------------------------------------------------- loading

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| CliError::parse(format!("stdin: {e}")))?;
        Ok(buffer)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::parse(format!("{path}: {e}")))
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{path}: {e}")))
}

enum AnyModule {
    Gf2(PersistenceModule<Gf2>),
    Q(PersistenceModule<Rational>),
}

enum AnyGapped {
    Gf2(GappedModule<Gf2>),
    Q(GappedModule<Rational>),
}

enum LoadedKind {
    Module(AnyModule),
    Gapped(AnyGapped),
}

struct Loaded {
    unit: Option<String>,
    kind: LoadedKind,
}

/// Loads a module file of either kind, keying on the presence of "lambda".
fn load_module_input(path: &str) -> Result<Loaded, CliError> {
    let text = read_input(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{path}: {e}")))?;
    if value.get("lambda").is_some() {
        let dto: GappedModuleDto = serde_json::from_value(value)
            .map_err(|e| CliError::parse(format!("{path}: {e}")))?;
        let unit = dto.unit.clone();
        let kind = match dto.field.as_str() {
            "GF2" => LoadedKind::Gapped(AnyGapped::Gf2(dto.to_core::<Gf2>()?)),
            "Q" => LoadedKind::Gapped(AnyGapped::Q(dto.to_core::<Rational>()?)),
            other => return Err(unknown_field(path, other)),
        };
        Ok(Loaded { unit, kind })
    } else {
        let dto: ModuleDto = serde_json::from_value(value)
            .map_err(|e| CliError::parse(format!("{path}: {e}")))?;
        let unit = dto.unit.clone();
        let kind = match dto.field.as_str() {
            "GF2" => LoadedKind::Module(AnyModule::Gf2(dto.to_core::<Gf2>()?)),
            "Q" => LoadedKind::Module(AnyModule::Q(dto.to_core::<Rational>()?)),
            other => return Err(unknown_field(path, other)),
        };
        Ok(Loaded { unit, kind })
    }
}

fn unknown_field(path: &str, field: &str) -> CliError {
    CliError::parse(format!(
        "{path}: unknown coefficient field {field:?} (expected \"GF2\" or \"Q\")"
    ))
}

fn parse_flag_rational(text: &str, flag: &str) -> Result<Rational, CliError> {
    parse_rational(text)
        .ok_or_else(|| CliError::parse(format!("--{flag} {text:?} is not an exact rational")))
}

fn parse_class<F: FieldCodec>(text: &str, dim: usize) -> Result<Vec<F>, CliError> {
    let trimmed = text.trim();
    if trimmed == "0" {
        return Ok(vec![F::zero(); dim]);
    }
    trimmed
        .split(',')
        .map(|part| {
            F::decode(&EntryDto::Exact(part.trim().to_owned()))
                .map_err(|msg| CliError::parse(format!("--class: {msg}")))
        })
        .collect()
}

// --------------------------------------------------------------- commands

fn cmd_validate(path: &str) -> Result<Output, CliError> {
    let loaded = load_module_input(path)?;
    let (kind, points, lambda) = match &loaded.kind {
        LoadedKind::Module(AnyModule::Gf2(pm)) => {
            pm.validate()?;
            ("module", pm.points(), None)
        }
        LoadedKind::Module(AnyModule::Q(pm)) => {
            pm.validate()?;
            ("module", pm.points(), None)
        }
        LoadedKind::Gapped(AnyGapped::Gf2(gm)) => {
            gm.validate()?;
            ("gapped-module", gm.points(), Some(format_rational(&gm.lambda)))
        }
        LoadedKind::Gapped(AnyGapped::Q(gm)) => {
            gm.validate()?;
            ("gapped-module", gm.points(), Some(format_rational(&gm.lambda)))
        }
    };
    Ok(Output::Status(StatusDto {
        status: "ok".into(),
        kind: kind.into(),
        points,
        lambda,
    }))
}

fn gapped_barcode<F: Field>(gm: &GappedModule<F>) -> Result<Barcode, CliError> {
    gm.validate()?;
    Ok(gm.restrict(&gm.full_grid_sequence())?.barcode()?)
}

fn cmd_barcode(path: &str) -> Result<Output, CliError> {
    let loaded = load_module_input(path)?;
    let barcode = match &loaded.kind {
        LoadedKind::Module(AnyModule::Gf2(pm)) => pm.barcode()?,
        LoadedKind::Module(AnyModule::Q(pm)) => pm.barcode()?,
        LoadedKind::Gapped(AnyGapped::Gf2(gm)) => gapped_barcode(gm)?,
        LoadedKind::Gapped(AnyGapped::Q(gm)) => gapped_barcode(gm)?,
    };
    Ok(Output::Barcode(BarcodeDto::from_core(&barcode, loaded.unit)))
}

fn cmd_spectral(path: &str, class: &str) -> Result<Output, CliError> {
    let loaded = load_module_input(path)?;
    let value = match &loaded.kind {
        LoadedKind::Module(AnyModule::Gf2(pm)) => {
            pm.validate()?;
            pm.spectral_invariant(&parse_class::<Gf2>(class, pm.colimit_dim)?)?
        }
        LoadedKind::Module(AnyModule::Q(pm)) => {
            pm.validate()?;
            pm.spectral_invariant(&parse_class::<Rational>(class, pm.colimit_dim)?)?
        }
        LoadedKind::Gapped(AnyGapped::Gf2(gm)) => {
            gm.validate()?;
            gm.spectral_invariant(&parse_class::<Gf2>(class, gm.colimit_dim)?)?
        }
        LoadedKind::Gapped(AnyGapped::Q(gm)) => {
            gm.validate()?;
            gm.spectral_invariant(&parse_class::<Rational>(class, gm.colimit_dim)?)?
        }
    };
    Ok(Output::Spectral(ValueDto {
        unit: loaded.unit,
        value: format_extended(&value),
    }))
}

fn cmd_bottleneck(left: &str, right: &str) -> Result<Output, CliError> {
    let l: BarcodeDto = load_json(left)?;
    let r: BarcodeDto = load_json(right)?;
    let distance = bottleneck_distance(&l.to_core()?, &r.to_core()?);
    let unit = match (&l.unit, &r.unit) {
        (Some(a), Some(b)) if a == b => Some(a.clone()),
        _ => None,
    };
    Ok(Output::Bottleneck(ValueDto {
        unit,
        value: format_extended(&distance),
    }))
}

fn cmd_restrict(path: &str, sequence: &str) -> Result<Output, CliError> {
    let loaded = load_module_input(path)?;
    let seq = load_json::<SequenceDto>(sequence)?.to_core()?;
    let pm = match &loaded.kind {
        LoadedKind::Gapped(AnyGapped::Gf2(gm)) => {
            gm.validate()?;
            return Ok(Output::Module(ModuleDto::from_core(
                &gm.restrict(&seq)?,
                loaded.unit,
            )));
        }
        LoadedKind::Gapped(AnyGapped::Q(gm)) => {
            gm.validate()?;
            gm.restrict(&seq)?
        }
        LoadedKind::Module(_) => {
            return Err(CliError::parse(format!(
                "{path}: restrict expects a gapped-module file (no \"lambda\" key found)"
            )))
        }
    };
    Ok(Output::Module(ModuleDto::from_core(&pm, loaded.unit)))
}

fn cmd_dual(path: &str) -> Result<Output, CliError> {
    let loaded = load_module_input(path)?;
    match &loaded.kind {
        LoadedKind::Module(AnyModule::Gf2(pm)) => Ok(Output::Module(ModuleDto::from_core(
            &pm.dual()?,
            loaded.unit,
        ))),
        LoadedKind::Module(AnyModule::Q(pm)) => Ok(Output::Module(ModuleDto::from_core(
            &pm.dual()?,
            loaded.unit,
        ))),
        LoadedKind::Gapped(_) => Err(CliError::parse(format!(
            "{path}: dual expects a persistence-module file; restrict the gapped module along \
             a sequence first"
        ))),
    }
}

fn cmd_shift(path: &str, by: &str) -> Result<Output, CliError> {
    let amount = parse_flag_rational(by, "by")?;
    let loaded = load_module_input(path)?;
    match &loaded.kind {
        LoadedKind::Module(AnyModule::Gf2(pm)) => {
            pm.validate()?;
            Ok(Output::Module(ModuleDto::from_core(
                &pm.shift_values(&amount),
                loaded.unit,
            )))
        }
        LoadedKind::Module(AnyModule::Q(pm)) => {
            pm.validate()?;
            Ok(Output::Module(ModuleDto::from_core(
                &pm.shift_values(&amount),
                loaded.unit,
            )))
        }
        LoadedKind::Gapped(AnyGapped::Gf2(gm)) => {
            gm.validate()?;
            Ok(Output::Gapped(GappedModuleDto::from_core(
                &gm.shift_values(&amount),
                loaded.unit,
            )))
        }
        LoadedKind::Gapped(AnyGapped::Q(gm)) => {
            gm.validate()?;
            Ok(Output::Gapped(GappedModuleDto::from_core(
                &gm.shift_values(&amount),
                loaded.unit,
            )))
        }
    }
}

fn verify_pair<F: FieldCodec>(
    v: &PersistenceModule<F>,
    w: &PersistenceModule<F>,
    morphisms: &MorphismsDto,
) -> Result<usize, CliError> {
    let d = morphisms.delta_steps;
    let expected = v.points().saturating_sub(d);
    if morphisms.phi.len() != expected || morphisms.psi.len() != expected {
        return Err(CliError::validation(format!(
            "morphism family has {} phi and {} psi matrices; expected {} each",
            morphisms.phi.len(),
            morphisms.psi.len(),
            expected
        )));
    }
    let phi = morphisms
        .phi
        .iter()
        .enumerate()
        .map(|(i, m)| dto::decode_matrix(m, w.dims[i + d], v.dims[i], &format!("phi[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let psi = morphisms
        .psi
        .iter()
        .enumerate()
        .map(|(i, m)| dto::decode_matrix(m, v.dims[i + d], w.dims[i], &format!("psi[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    verify_interleaving(v, w, d, &phi, &psi)?;
    Ok(d)
}

fn cmd_interleave_verify(left: &str, right: &str, morphisms: &str) -> Result<Output, CliError> {
    let l = load_module_input(left)?;
    let r = load_module_input(right)?;
    let dto: MorphismsDto = load_json(morphisms)?;
    let delta_steps = match (&l.kind, &r.kind) {
        (LoadedKind::Module(AnyModule::Gf2(v)), LoadedKind::Module(AnyModule::Gf2(w))) => {
            verify_pair(v, w, &dto)?
        }
        (LoadedKind::Module(AnyModule::Q(v)), LoadedKind::Module(AnyModule::Q(w))) => {
            verify_pair(v, w, &dto)?
        }
        (LoadedKind::Module(_), LoadedKind::Module(_)) => {
            return Err(CliError::parse(
                "the two modules use different coefficient fields",
            ))
        }
        _ => {
            return Err(CliError::parse(
                "interleave-verify expects two persistence-module files",
            ))
        }
    };
    Ok(Output::Interleave(InterleaveDto {
        status: "ok".into(),
        delta_steps,
    }))
}

fn cmd_fixture(which: &FixtureCommand) -> Result<Output, CliError> {
    match which {
        FixtureCommand::S2 {
            degree,
            max_m,
            epsilon,
            unit,
        } => {
            let epsilon = parse_flag_rational(epsilon, "epsilon")?;
            let spec = S2FixtureSpec {
                max_degree: *degree,
                max_m: *max_m,
                epsilon,
            };
            let gm = build_s2_fixture(&spec, *degree)?;
            Ok(Output::Gapped(GappedModuleDto::from_core(
                &gm,
                Some(unit.clone()),
            )))
        }
    }
}

fn load_envelope(path: &str) -> Result<ContactEnvelope, CliError> {
    load_json::<EnvelopeDto>(path)?.to_core()
}

fn cmd_quasistate(which: &QuasistateCommand) -> Result<Output, CliError> {
    match which {
        QuasistateCommand::Envelope {
            envelope,
            pair,
            concat,
        } => {
            let h = load_envelope(envelope)?;
            let partner = pair.as_deref().map(load_envelope).transpose()?;
            let pair_stats = partner.as_ref().map(|g| PairStatsDto {
                osc_hg: format_rational(&osc_pair(&h, g)),
                osc_gh: format_rational(&osc_pair(g, &h)),
                m_hg: format_rational(&m_hg(&h, g)),
            });
            let concat_stats = concat.map(|convention| {
                let g = partner.as_ref().unwrap_or(&h);
                let joined = concatenate(&h, g, convention.to_core());
                ConcatStatsDto {
                    convention: convention.name().into(),
                    osc: format_rational(&joined.osc()),
                    oscbar: format_rational(&joined.oscbar()),
                    spectrum: joined.spectrum.iter().map(format_rational).collect(),
                }
            });
            Ok(Output::Envelope(EnvelopeStatsDto {
                osc: format_rational(&h.osc()),
                oscbar: format_rational(&h.oscbar()),
                pair: pair_stats,
                concat: concat_stats,
            }))
        }
        QuasistateCommand::Triangle {
            c_theta,
            c_eta,
            c_product,
            oscbar_h,
            oscbar_g,
        } => {
            let c_theta = parse_flag_rational(c_theta, "c-theta")?;
            let c_eta = parse_flag_rational(c_eta, "c-eta")?;
            let c_product = parse_flag_rational(c_product, "c-product")?;
            let oscbar_h = parse_flag_rational(oscbar_h, "oscbar-h")?;
            let oscbar_g = parse_flag_rational(oscbar_g, "oscbar-g")?;
            let worst = oscbar_h.clone().max(oscbar_g.clone());
            let bound = &c_theta + &c_eta + Rational::from_integer(3.into()) * worst;
            let holds = check_triangle(&c_theta, &c_eta, &c_product, &oscbar_h, &oscbar_g);
            Ok(Output::Triangle(TriangleDto {
                holds,
                bound: format_rational(&bound),
            }))
        }
        QuasistateCommand::Fekete { ctilde } => {
            let values = load_json::<CtildeDto>(ctilde)?.to_core()?;
            let bracket = fekete_limit(&values)?;
            Ok(Output::Fekete(FeketeDto {
                inf: format_rational(&bracket.inf),
                current: format_rational(&bracket.current),
            }))
        }
    }
}
