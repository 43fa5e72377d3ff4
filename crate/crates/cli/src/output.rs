//! Result payloads and their two renderings: canonical JSON (the default,
//! byte-deterministic) and aligned text (`--pretty`).

use serde::Serialize;

use crate::dto::{BarcodeDto, GappedModuleDto, ModuleDto};

#[derive(Serialize)]
pub struct StatusDto {
    pub status: String,
    pub kind: String,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
}

#[derive(Serialize)]
pub struct ValueDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub value: String,
}

#[derive(Serialize)]
pub struct InterleaveDto {
    pub status: String,
    pub delta_steps: usize,
}

#[derive(Serialize)]
pub struct FeketeDto {
    pub inf: String,
    pub current: String,
}

#[derive(Serialize)]
pub struct TriangleDto {
    pub holds: bool,
    pub bound: String,
}

#[derive(Serialize)]
pub struct PairStatsDto {
    pub osc_hg: String,
    pub osc_gh: String,
    pub m_hg: String,
}

#[derive(Serialize)]
pub struct ConcatStatsDto {
    pub convention: String,
    pub osc: String,
    pub oscbar: String,
    pub spectrum: Vec<String>,
}

#[derive(Serialize)]
pub struct EnvelopeStatsDto {
    pub osc: String,
    pub oscbar: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairStatsDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concat: Option<ConcatStatsDto>,
}

#[derive(Serialize)]
pub struct ErrorReportDto {
    pub error: ErrorBodyDto,
}

#[derive(Serialize)]
pub struct ErrorBodyDto {
    pub kind: String,
    pub message: String,
}

pub enum Output {
    Status(StatusDto),
    Barcode(BarcodeDto),
    Spectral(ValueDto),
    Bottleneck(ValueDto),
    Module(ModuleDto),
    Gapped(GappedModuleDto),
    Interleave(InterleaveDto),
    Fekete(FeketeDto),
    Triangle(TriangleDto),
    Envelope(EnvelopeStatsDto),
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string(value).expect("output serialization is infallible");
    text.push('\n');
    text
}

/// Two-column aligned key/value block.
fn aligned(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut text = String::new();
    for (key, value) in pairs {
        text.push_str(&format!("{key:<width$}  {value}\n"));
    }
    text
}

fn pretty_barcode(dto: &BarcodeDto) -> String {
    let mut text = String::new();
    if let Some(unit) = &dto.unit {
        text.push_str(&format!("unit  {unit}\n"));
    }
    if dto.bars.is_empty() {
        text.push_str("(empty barcode)\n");
        return text;
    }
    let birth_w = dto
        .bars
        .iter()
        .map(|b| b.birth.len())
        .chain(["birth".len()])
        .max()
        .unwrap();
    let death_w = dto
        .bars
        .iter()
        .map(|b| b.death.len())
        .chain(["death".len()])
        .max()
        .unwrap();
    text.push_str(&format!("{:<birth_w$}  {:<death_w$}  mult\n", "birth", "death"));
    for bar in &dto.bars {
        text.push_str(&format!(
            "{:<birth_w$}  {:<death_w$}  {}\n",
            bar.birth, bar.death, bar.mult
        ));
    }
    text
}

fn pretty_module_summary(
    kind: &str,
    unit: &Option<String>,
    grid: &[String],
    dims: &[usize],
    colimit_dim: usize,
    extra: &[(&str, String)],
) -> String {
    let mut pairs: Vec<(&str, String)> = vec![("kind", kind.into())];
    if let Some(unit) = unit {
        pairs.push(("unit", unit.clone()));
    }
    pairs.extend(extra.iter().cloned());
    pairs.push(("points", grid.len().to_string()));
    pairs.push(("colimit_dim", colimit_dim.to_string()));
    let mut text = aligned(&pairs);
    let value_w = grid
        .iter()
        .map(String::len)
        .chain(["value".len()])
        .max()
        .unwrap_or(5);
    text.push_str(&format!("{:<value_w$}  dim\n", "value"));
    for (value, dim) in grid.iter().zip(dims) {
        text.push_str(&format!("{value:<value_w$}  {dim}\n"));
    }
    text
}

impl Output {
    pub fn render(&self, pretty: bool) -> String {
        if !pretty {
            return match self {
                Output::Status(v) => json(v),
                Output::Barcode(v) => json(v),
                Output::Spectral(v) | Output::Bottleneck(v) => json(v),
                Output::Module(v) => json(v),
                Output::Gapped(v) => json(v),
                Output::Interleave(v) => json(v),
                Output::Fekete(v) => json(v),
                Output::Triangle(v) => json(v),
                Output::Envelope(v) => json(v),
            };
        }
        match self {
            Output::Status(v) => {
                let mut pairs = vec![
                    ("status", v.status.clone()),
                    ("kind", v.kind.clone()),
                    ("points", v.points.to_string()),
                ];
                if let Some(lambda) = &v.lambda {
                    pairs.push(("lambda", lambda.clone()));
                }
                aligned(&pairs)
            }
            Output::Barcode(v) => pretty_barcode(v),
            Output::Spectral(v) => {
                let mut pairs = Vec::new();
                if let Some(unit) = &v.unit {
                    pairs.push(("unit", unit.clone()));
                }
                pairs.push(("spectral invariant", v.value.clone()));
                aligned(&pairs)
            }
            Output::Bottleneck(v) => {
                let mut pairs = Vec::new();
                if let Some(unit) = &v.unit {
                    pairs.push(("unit", unit.clone()));
                }
                pairs.push(("bottleneck distance", v.value.clone()));
                aligned(&pairs)
            }
            Output::Module(v) => {
                pretty_module_summary("module", &v.unit, &v.grid, &v.dims, v.colimit_dim, &[])
            }
            Output::Gapped(v) => pretty_module_summary(
                "gapped module",
                &v.unit,
                &v.grid,
                &v.dims,
                v.colimit_dim,
                &[
                    ("lambda", v.lambda.clone()),
                    ("spectrum", v.spectrum.join(", ")),
                    ("stored maps", v.maps.len().to_string()),
                ],
            ),
            Output::Interleave(v) => aligned(&[
                ("status", v.status.clone()),
                ("delta_steps", v.delta_steps.to_string()),
            ]),
            Output::Fekete(v) => aligned(&[
                ("inf", v.inf.clone()),
                ("current", v.current.clone()),
            ]),
            Output::Triangle(v) => aligned(&[
                ("holds", v.holds.to_string()),
                ("bound", v.bound.clone()),
            ]),
            Output::Envelope(v) => {
                let mut pairs = vec![("osc", v.osc.clone()), ("oscbar", v.oscbar.clone())];
                if let Some(pair) = &v.pair {
                    pairs.push(("osc_hg", pair.osc_hg.clone()));
                    pairs.push(("osc_gh", pair.osc_gh.clone()));
                    pairs.push(("m_hg", pair.m_hg.clone()));
                }
                if let Some(concat) = &v.concat {
                    pairs.push(("concat convention", concat.convention.clone()));
                    pairs.push(("concat osc", concat.osc.clone()));
                    pairs.push(("concat oscbar", concat.oscbar.clone()));
                    pairs.push(("concat spectrum", concat.spectrum.join(", ")));
                }
                aligned(&pairs)
            }
        }
    }
}

pub fn render_error(kind: &str, message: &str, pretty: bool) -> String {
    if pretty {
        format!("error ({kind}): {message}\n")
    } else {
        json(&ErrorReportDto {
            error: ErrorBodyDto {
                kind: kind.into(),
                message: message.into(),
            },
        })
    }
}
