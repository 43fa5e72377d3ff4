//! JSON schemas and their conversions to and from the core types.
//!
//! All quantities are exact rational strings ("p/q", denominator omitted
//! when 1); matrix entries are 0/1 integers over GF2 and rational strings
//! over Q. Struct field order fixes the JSON key order, so serialization is
//! byte-deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use gapped_persist_core::field::{format_rational, parse_rational};
use gapped_persist_core::{
    Bar, Barcode, ContactEnvelope, Death, Extended, Field, GappedModule, GappedSequence, Gf2,
    Matrix, PersistenceModule, Rational,
};

use crate::CliError;

/// One matrix entry: a small integer (the GF2 form) or an exact rational
/// string (the Q form). Integers are accepted for Q too.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryDto {
    Bit(i64),
    Exact(String),
}

/// A coefficient field the CLI knows how to read and write.
pub trait FieldCodec: Field {
    const NAME: &'static str;
    fn decode(entry: &EntryDto) -> Result<Self, String>;
    fn encode(&self) -> EntryDto;
}

impl FieldCodec for Gf2 {
    const NAME: &'static str = "GF2";

    fn decode(entry: &EntryDto) -> Result<Self, String> {
        match entry {
            EntryDto::Bit(0) => Ok(Gf2(false)),
            EntryDto::Bit(1) => Ok(Gf2(true)),
            EntryDto::Bit(other) => Err(format!("entry {other} is not a GF2 value")),
            EntryDto::Exact(s) if s == "0" => Ok(Gf2(false)),
            EntryDto::Exact(s) if s == "1" => Ok(Gf2(true)),
            EntryDto::Exact(s) => Err(format!("entry {s:?} is not a GF2 value")),
        }
    }

    fn encode(&self) -> EntryDto {
        EntryDto::Bit(if self.0 { 1 } else { 0 })
    }
}

impl FieldCodec for Rational {
    const NAME: &'static str = "Q";

    fn decode(entry: &EntryDto) -> Result<Self, String> {
        match entry {
            EntryDto::Bit(n) => Ok(Rational::from_integer((*n).into())),
            EntryDto::Exact(s) => {
                parse_rational(s).ok_or_else(|| format!("entry {s:?} is not a rational"))
            }
        }
    }

    fn encode(&self) -> EntryDto {
        EntryDto::Exact(format_rational(self))
    }
}

fn parse_value(text: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(text)
        .ok_or_else(|| CliError::parse(format!("{what} {text:?} is not an exact rational")))
}

fn parse_values(texts: &[String], what: &str) -> Result<Vec<Rational>, CliError> {
    texts.iter().map(|t| parse_value(t, what)).collect()
}

fn format_values(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

pub(crate) fn decode_matrix<F: FieldCodec>(
    entries: &[Vec<EntryDto>],
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<Matrix<F>, CliError> {
    let decoded: Result<Vec<Vec<F>>, String> = entries
        .iter()
        .map(|row| row.iter().map(F::decode).collect())
        .collect();
    let decoded = decoded.map_err(|msg| CliError::validation(format!("{what}: {msg}")))?;
    Matrix::from_rows_with_shape(rows, cols, decoded)
        .map_err(|e| CliError::validation(format!("{what}: {e}")))
}

fn encode_matrix<F: FieldCodec>(matrix: &Matrix<F>) -> Vec<Vec<EntryDto>> {
    (0..matrix.rows())
        .map(|r| matrix.row(r).iter().map(F::encode).collect())
        .collect()
}

/// Persistence-module schema: { field, unit?, grid, dims, step_maps,
/// colimit_dim, colimit_maps }.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleDto {
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub grid: Vec<String>,
    pub dims: Vec<usize>,
    pub step_maps: Vec<Vec<Vec<EntryDto>>>,
    pub colimit_dim: usize,
    pub colimit_maps: Vec<Vec<Vec<EntryDto>>>,
}

impl ModuleDto {
    pub fn to_core<F: FieldCodec>(&self) -> Result<PersistenceModule<F>, CliError> {
        let grid = parse_values(&self.grid, "grid value")?;
        let n = grid.len();
        if self.dims.len() != n {
            return Err(CliError::validation(format!(
                "module has {} grid values but {} dimensions",
                n,
                self.dims.len()
            )));
        }
        if self.step_maps.len() + 1 != n && !(n == 0 && self.step_maps.is_empty()) {
            return Err(CliError::validation(format!(
                "module has {} grid values but {} step maps",
                n,
                self.step_maps.len()
            )));
        }
        if self.colimit_maps.len() != n {
            return Err(CliError::validation(format!(
                "module has {} grid values but {} colimit maps",
                n,
                self.colimit_maps.len()
            )));
        }
        let steps = self
            .step_maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                decode_matrix(m, self.dims[i + 1], self.dims[i], &format!("step map {i}"))
            })
            .collect::<Result<_, _>>()?;
        let colimit_maps = self
            .colimit_maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                decode_matrix(m, self.colimit_dim, self.dims[i], &format!("colimit map {i}"))
            })
            .collect::<Result<_, _>>()?;
        Ok(PersistenceModule {
            grid,
            dims: self.dims.clone(),
            steps,
            colimit_dim: self.colimit_dim,
            colimit_maps,
        })
    }

    pub fn from_core<F: FieldCodec>(pm: &PersistenceModule<F>, unit: Option<String>) -> ModuleDto {
        ModuleDto {
            field: F::NAME.into(),
            unit,
            grid: format_values(&pm.grid),
            dims: pm.dims.clone(),
            step_maps: pm.steps.iter().map(encode_matrix).collect(),
            colimit_dim: pm.colimit_dim,
            colimit_maps: pm.colimit_maps.iter().map(encode_matrix).collect(),
        }
    }
}

/// One stored structure map of a gapped module, keyed by grid values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GappedMapDto {
    pub from: String,
    pub to: String,
    pub matrix: Vec<Vec<EntryDto>>,
}

/// Gapped-module schema: the module schema with a gap, a spectrum, and maps
/// keyed by grid-value pairs instead of consecutive steps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GappedModuleDto {
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub lambda: String,
    pub spectrum: Vec<String>,
    pub grid: Vec<String>,
    pub dims: Vec<usize>,
    pub maps: Vec<GappedMapDto>,
    pub colimit_dim: usize,
    pub colimit_maps: Vec<Vec<Vec<EntryDto>>>,
}

impl GappedModuleDto {
    pub fn to_core<F: FieldCodec>(&self) -> Result<GappedModule<F>, CliError> {
        let grid = parse_values(&self.grid, "grid value")?;
        let n = grid.len();
        if self.dims.len() != n {
            return Err(CliError::validation(format!(
                "gapped module has {} grid values but {} dimensions",
                n,
                self.dims.len()
            )));
        }
        if self.colimit_maps.len() != n {
            return Err(CliError::validation(format!(
                "gapped module has {} grid values but {} colimit maps",
                n,
                self.colimit_maps.len()
            )));
        }
        let lambda = parse_value(&self.lambda, "lambda")?;
        let spectrum = parse_values(&self.spectrum, "spectrum value")?;

        let mut maps = BTreeMap::new();
        for record in &self.maps {
            let from = parse_value(&record.from, "map endpoint")?;
            let to = parse_value(&record.to, "map endpoint")?;
            let i = grid.iter().position(|v| *v == from).ok_or_else(|| {
                CliError::validation(format!(
                    "map endpoint {} is not a grid value",
                    record.from
                ))
            })?;
            let j = grid.iter().position(|v| *v == to).ok_or_else(|| {
                CliError::validation(format!("map endpoint {} is not a grid value", record.to))
            })?;
            let matrix = decode_matrix(
                &record.matrix,
                self.dims[j],
                self.dims[i],
                &format!("map {} -> {}", record.from, record.to),
            )?;
            if maps.insert((i, j), matrix).is_some() {
                return Err(CliError::validation(format!(
                    "duplicate map for the pair ({}, {})",
                    record.from, record.to
                )));
            }
        }

        let colimit_maps = self
            .colimit_maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                decode_matrix(m, self.colimit_dim, self.dims[i], &format!("colimit map {i}"))
            })
            .collect::<Result<_, _>>()?;

        Ok(GappedModule {
            lambda,
            spectrum,
            grid,
            dims: self.dims.clone(),
            maps,
            colimit_dim: self.colimit_dim,
            colimit_maps,
        })
    }

    pub fn from_core<F: FieldCodec>(gm: &GappedModule<F>, unit: Option<String>) -> GappedModuleDto {
        GappedModuleDto {
            field: F::NAME.into(),
            unit,
            lambda: format_rational(&gm.lambda),
            spectrum: format_values(&gm.spectrum),
            grid: format_values(&gm.grid),
            dims: gm.dims.clone(),
            maps: gm
                .maps
                .iter()
                .map(|(&(i, j), matrix)| GappedMapDto {
                    from: format_rational(&gm.grid[i]),
                    to: format_rational(&gm.grid[j]),
                    matrix: encode_matrix(matrix),
                })
                .collect(),
            colimit_dim: gm.colimit_dim,
            colimit_maps: gm.colimit_maps.iter().map(encode_matrix).collect(),
        }
    }
}

/// Barcode schema: { unit?, bars: [{birth, death: "p/q"|"colimit", mult}] }.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BarcodeDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub bars: Vec<BarDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BarDto {
    pub birth: String,
    pub death: String,
    pub mult: usize,
}

impl BarcodeDto {
    pub fn to_core(&self) -> Result<Barcode, CliError> {
        let bars = self
            .bars
            .iter()
            .map(|bar| {
                let birth = parse_value(&bar.birth, "bar birth")?;
                let death = if bar.death == "colimit" {
                    Death::Colimit
                } else {
                    Death::At(parse_value(&bar.death, "bar death")?)
                };
                Ok(Bar {
                    birth,
                    death,
                    mult: bar.mult,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Barcode::new(bars))
    }

    pub fn from_core(barcode: &Barcode, unit: Option<String>) -> BarcodeDto {
        BarcodeDto {
            unit,
            bars: barcode
                .bars()
                .iter()
                .map(|bar| BarDto {
                    birth: format_rational(&bar.birth),
                    death: match &bar.death {
                        Death::At(d) => format_rational(d),
                        Death::Colimit => "colimit".into(),
                    },
                    mult: bar.mult,
                })
                .collect(),
        }
    }
}

/// Sequence schema: { lambda_prime, origin_index, values }.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceDto {
    pub lambda_prime: String,
    pub origin_index: usize,
    pub values: Vec<String>,
}

impl SequenceDto {
    pub fn to_core(&self) -> Result<GappedSequence, CliError> {
        let seq = GappedSequence {
            values: parse_values(&self.values, "sequence value")?,
            origin: self.origin_index,
            lambda_prime: parse_value(&self.lambda_prime, "lambda_prime")?,
        };
        seq.validate().map_err(CliError::from)?;
        Ok(seq)
    }
}

/// Envelope schema: { breakpoints, max_env, min_env, spectrum }.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnvelopeDto {
    pub breakpoints: Vec<String>,
    pub max_env: Vec<String>,
    pub min_env: Vec<String>,
    pub spectrum: Vec<String>,
}

impl EnvelopeDto {
    pub fn to_core(&self) -> Result<ContactEnvelope, CliError> {
        let envelope = ContactEnvelope {
            breakpoints: parse_values(&self.breakpoints, "breakpoint")?,
            max_env: parse_values(&self.max_env, "max_env value")?,
            min_env: parse_values(&self.min_env, "min_env value")?,
            spectrum: parse_values(&self.spectrum, "spectrum value")?,
        };
        envelope.validate().map_err(CliError::from)?;
        Ok(envelope)
    }
}

/// Morphism-pair schema for interleaving checks:
/// { delta_steps, phi: [matrix,…], psi: [matrix,…] }.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismsDto {
    pub delta_steps: usize,
    pub phi: Vec<Vec<Vec<EntryDto>>>,
    pub psi: Vec<Vec<Vec<EntryDto>>>,
}

/// Subadditive-sequence schema: { ctilde: ["p/q", …] }, 1-indexed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CtildeDto {
    pub ctilde: Vec<String>,
}

impl CtildeDto {
    pub fn to_core(&self) -> Result<Vec<Rational>, CliError> {
        parse_values(&self.ctilde, "ctilde value")
    }
}

pub fn format_extended(value: &Extended) -> String {
    match value {
        Extended::Finite(v) => format_rational(v),
        Extended::Infinity => "+inf".into(),
    }
}
