//! Input file schemas and loading. Structured inputs are TOML; coefficient
//! files may also be plain numeric text (one value per line, `#` comments).

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use mapprox_core::chain::{ChainError, Observable, StationaryChain};
use mapprox_core::fracpoisson::FracError;
use mapprox_core::seq::{SeqError, SeqSource};
use mapprox_core::shift::{FourierObservable, ShiftError};

#[derive(Debug)]
pub enum CliError {
    Io { path: String, message: String },
    Parse { path: String, message: String },
    Usage(String),
    Chain(ChainError),
    Seq(SeqError),
    Frac(FracError),
    Shift(ShiftError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
            CliError::Parse { path, message } => write!(f, "{path}: {message}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Chain(e) => write!(f, "{e}"),
            CliError::Seq(e) => write!(f, "{e}"),
            CliError::Frac(e) => write!(f, "{e}"),
            CliError::Shift(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "Io",
            CliError::Parse { .. } => "Parse",
            CliError::Usage(_) => "Usage",
            CliError::Chain(e) => e.code(),
            CliError::Seq(e) => e.code(),
            CliError::Frac(e) => e.code(),
            CliError::Shift(e) => e.code(),
        }
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        CliError::Chain(e)
    }
}
impl From<SeqError> for CliError {
    fn from(e: SeqError) -> Self {
        CliError::Seq(e)
    }
}
impl From<FracError> for CliError {
    fn from(e: FracError) -> Self {
        CliError::Frac(e)
    }
}
impl From<ShiftError> for CliError {
    fn from(e: ShiftError) -> Self {
        CliError::Shift(e)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_toml<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[derive(Deserialize)]
struct ChainFile {
    n_states: usize,
    #[serde(rename = "Q")]
    q: Vec<Vec<f64>>,
    pi: Option<Vec<f64>>,
}

pub fn load_chain(path: &Path) -> Result<StationaryChain, CliError> {
    let file: ChainFile = parse_toml(path, &read(path)?)?;
    if file.q.len() != file.n_states {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            message: format!("field Q: expected {} rows, found {}", file.n_states, file.q.len()),
        });
    }
    Ok(StationaryChain::validate(&file.q, file.pi.as_deref())?)
}

#[derive(Deserialize)]
struct ObservableFile {
    values: Vec<f64>,
}

pub fn load_observable(path: &Path, chain: &StationaryChain) -> Result<Observable, CliError> {
    let file: ObservableFile = parse_toml(path, &read(path)?)?;
    Ok(Observable::new(chain, file.values)?)
}

#[derive(Deserialize)]
struct CoeffsFile {
    values: Option<Vec<f64>>,
    generator: Option<String>,
    rho: Option<f64>,
}

/// Named generator spec: `geometric:RHO`, `example5`, `custom_array`
/// (the latter only as a file with `values`).
pub fn parse_generator(spec: &str, rho_field: Option<f64>) -> Result<SeqSource, CliError> {
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (spec, None),
    };
    match name {
        "geometric" => {
            let rho = match (param, rho_field) {
                (Some(p), _) => p.parse::<f64>().map_err(|_| {
                    CliError::Usage(format!("geometric: bad rho parameter {p:?}"))
                })?,
                (None, Some(r)) => r,
                (None, None) => {
                    return Err(CliError::Usage(
                        "generator geometric needs a rho parameter (geometric:RHO)".into(),
                    ))
                }
            };
            if rho.abs() >= 1.0 {
                return Err(CliError::Usage(format!("geometric rho must satisfy |rho| < 1, got {rho}")));
            }
            Ok(SeqSource::Geometric { rho })
        }
        "example5" => Ok(SeqSource::Example5),
        "custom_array" => Err(CliError::Usage(
            "generator custom_array requires a coefficient file with a `values` field".into(),
        )),
        other => Err(CliError::Usage(format!(
            "unknown generator {other:?} (expected geometric:RHO, example5, example6, custom_array)"
        ))),
    }
}

/// Coefficient source from a file: TOML with `values` or `generator`, or
/// plain numeric lines.
pub fn load_coeff_source(path: &Path) -> Result<SeqSource, CliError> {
    let text = read(path)?;
    if let Ok(file) = toml::from_str::<CoeffsFile>(&text) {
        if let Some(values) = file.values {
            return Ok(SeqSource::Array(values));
        }
        if let Some(gen) = file.generator {
            return parse_generator(&gen, file.rho);
        }
    }
    // plain numeric lines
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match trimmed.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) => {
                return Err(CliError::Parse {
                    path: path.display().to_string(),
                    message: format!(
                        "line {}: expected a number or a TOML document with `values`/`generator`",
                        lineno + 1
                    ),
                })
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            message: "no coefficients found".into(),
        });
    }
    Ok(SeqSource::Array(values))
}

#[derive(Deserialize)]
struct ColumnsFile {
    columns: Vec<Vec<f64>>,
}

pub fn load_columns(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let file: ColumnsFile = parse_toml(path, &read(path)?)?;
    Ok(file.columns)
}

#[derive(Deserialize)]
struct FourierFile {
    terms: Vec<FourierTerm>,
    real_symmetric: Option<bool>,
}

#[derive(Deserialize)]
struct FourierTerm {
    r: i64,
    re: f64,
    im: f64,
}

pub fn load_fourier(path: &Path) -> Result<FourierObservable, CliError> {
    let file: FourierFile = parse_toml(path, &read(path)?)?;
    let mut coeffs = std::collections::BTreeMap::new();
    for t in file.terms {
        coeffs.insert(t.r, num_complex::Complex64::new(t.re, t.im));
    }
    Ok(FourierObservable::new(coeffs, file.real_symmetric.unwrap_or(false))?)
}

/// `dyadic:A:B` → `[2^A, …, 2^B]`.
pub fn parse_grid(spec: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 && parts[0] == "dyadic" {
        let a: u32 = parts[1]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad grid exponent {:?}", parts[1])))?;
        let b: u32 = parts[2]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad grid exponent {:?}", parts[2])))?;
        if a > b || b >= 48 {
            return Err(CliError::Usage(format!("grid exponents out of range: {spec}")));
        }
        return Ok(mapprox_core::slope::dyadic_grid(a, b));
    }
    Err(CliError::Usage(format!("grid spec must be dyadic:A:B, got {spec:?}")))
}
