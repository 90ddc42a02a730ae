//! Structured-text run configuration. One TOML file defines the spectrum and
//! the reproducibility seed; analysis horizons and output paths come from the
//! command line and never redefine the spectrum.
//!
//! ```toml
//! seed = 42
//!
//! [spectrum]
//! kind = "power-law"     # power-law | harmonic | box | explicit
//! c = "1"                # rational "p/q", decimal, or integer
//! p = 2
//! m = 1
//! hbar = 1
//! exactness = "exact"    # optional: exact | float64
//! zero_mode = false
//! # explicit spectra: values = ["1", "4", "9"] or values_file = "energies.txt"
//! ```

use std::path::{Path, PathBuf};

use num::rational::BigRational;
use num::traits::One;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Arithmetic};
use crate::spectra::{Spectrum, SpectrumKind};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RationalLit {
    Int(i64),
    Float(f64),
    Str(String),
}

impl RationalLit {
    fn to_rational(&self, location: &str) -> Result<BigRational> {
        match self {
            RationalLit::Int(v) => Ok(BigRational::from_integer((*v).into())),
            RationalLit::Float(v) => BigRational::from_float(*v)
                .ok_or_else(|| Error::config(location, format!("{v} is not a finite number"))),
            RationalLit::Str(s) => {
                parse_rational(s).map_err(|e| Error::config(location, e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrum {
    kind: Option<String>,
    c: Option<RationalLit>,
    p: Option<RationalLit>,
    omega0: Option<RationalLit>,
    scale: Option<RationalLit>,
    values: Option<Vec<RationalLit>>,
    values_file: Option<String>,
    m: Option<u32>,
    hbar: Option<RationalLit>,
    exactness: Option<String>,
    zero_mode: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    spectrum: Option<RawSpectrum>,
}

/// Parsed run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spectrum: Spectrum,
    pub seed: u64,
    /// SHA-256 of the configuration text, recorded in reports.
    pub config_hash: String,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::config(
                path.display().to_string(),
                format!("cannot read config: {e}"),
            )
        })?;
        let base = path.parent().map(PathBuf::from).unwrap_or_default();
        Self::from_str_with_base(&text, &base)
    }

    pub fn from_str_with_base(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::config("config", e.message().to_string()))?;
        let spectrum_raw = raw
            .spectrum
            .ok_or_else(|| Error::config("spectrum", "spectrum block required"))?;
        let spectrum = build_spectrum(spectrum_raw, base_dir)?;
        let mut hasher = Sha256::new();
        hasher.update(text.as_bytes());
        let config_hash = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        Ok(RunConfig {
            spectrum,
            seed: raw.seed.unwrap_or(0),
            config_hash,
        })
    }
}

fn required<'a>(lit: &'a Option<RationalLit>, location: &str) -> Result<&'a RationalLit> {
    lit.as_ref()
        .ok_or_else(|| Error::config(location, format!("{location} required")))
}

fn build_spectrum(raw: RawSpectrum, base_dir: &Path) -> Result<Spectrum> {
    let kind_name = raw
        .kind
        .as_deref()
        .ok_or_else(|| Error::config("spectrum.kind", "spectrum.kind required"))?;
    let m = raw.m.unwrap_or(1) as usize;
    let hbar = match &raw.hbar {
        Some(lit) => lit.to_rational("spectrum.hbar")?,
        None => BigRational::one(),
    };

    let kind = match kind_name {
        "power-law" | "powerlaw" | "power_law" => SpectrumKind::PowerLaw {
            c: required(&raw.c, "spectrum.c")?.to_rational("spectrum.c")?,
            p: required(&raw.p, "spectrum.p")?.to_rational("spectrum.p")?,
        },
        "harmonic" => SpectrumKind::Harmonic {
            omega0: required(&raw.omega0, "spectrum.omega0")?.to_rational("spectrum.omega0")?,
        },
        "box" => SpectrumKind::Box {
            scale: required(&raw.scale, "spectrum.scale")?.to_rational("spectrum.scale")?,
        },
        "explicit" => {
            let values = explicit_values(&raw, base_dir)?;
            SpectrumKind::Explicit { values }
        }
        other => {
            return Err(Error::config(
                "spectrum.kind",
                format!("unknown kind {other:?}; expected power-law, harmonic, box, or explicit"),
            ))
        }
    };

    let exactness = match raw.exactness.as_deref() {
        None => default_exactness(&kind),
        Some("exact") | Some("exact-rational") => Arithmetic::ExactRational,
        Some("float64") | Some("float") => Arithmetic::Float64,
        Some(other) => {
            return Err(Error::config(
                "spectrum.exactness",
                format!("unknown mode {other:?}; expected exact or float64"),
            ))
        }
    };

    Spectrum::new(kind, m, hbar, exactness, raw.zero_mode.unwrap_or(false))
}

fn default_exactness(kind: &SpectrumKind) -> Arithmetic {
    match kind {
        SpectrumKind::PowerLaw { p, .. } if !p.is_integer() => Arithmetic::Float64,
        _ => Arithmetic::ExactRational,
    }
}

fn explicit_values(raw: &RawSpectrum, base_dir: &Path) -> Result<Vec<BigRational>> {
    match (&raw.values, &raw.values_file) {
        (Some(_), Some(_)) => Err(Error::config(
            "spectrum.values",
            "give either values or values_file, not both",
        )),
        (Some(list), None) => list
            .iter()
            .enumerate()
            .map(|(i, lit)| lit.to_rational(&format!("spectrum.values[{i}]")))
            .collect(),
        (None, Some(file)) => {
            let path = base_dir.join(file);
            let text = std::fs::read_to_string(&path).map_err(|e| {
                Error::config(
                    "spectrum.values_file",
                    format!("cannot read {}: {e}", path.display()),
                )
            })?;
            let mut out = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                let v = parse_rational(trimmed).map_err(|e| {
                    Error::config(format!("{}:{}", path.display(), lineno + 1), e.to_string())
                })?;
                out.push(v);
            }
            Ok(out)
        }
        (None, None) => Err(Error::config(
            "spectrum.values",
            "explicit spectrum needs values or values_file",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn parse(text: &str) -> Result<RunConfig> {
        RunConfig::from_str_with_base(text, Path::new("."))
    }

    #[test]
    fn parses_power_law() {
        let cfg = parse(
            r#"
            seed = 7
            [spectrum]
            kind = "power-law"
            c = "1"
            p = 2
            m = 2
            "#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.spectrum.degeneracy(), 2);
        assert_eq!(cfg.spectrum.exactness(), Arithmetic::ExactRational);
        assert_eq!(cfg.spectrum.eigenvalue::<f64>(3).unwrap(), 9.0);
    }

    #[test]
    fn fractional_exponent_defaults_to_float() {
        let cfg = parse(
            r#"
            [spectrum]
            kind = "power-law"
            c = 1
            p = "1/2"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.spectrum.exactness(), Arithmetic::Float64);
    }

    #[test]
    fn missing_kind_is_a_located_error() {
        let err = parse("[spectrum]\nc = 1\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("spectrum.kind required"), "{msg}");
    }

    #[test]
    fn missing_block_and_unknown_fields_rejected() {
        assert!(parse("seed = 1\n").is_err());
        assert!(parse("[spectrum]\nkind = \"harmonic\"\nomega0 = 1\nbogus = 3\n").is_err());
    }

    #[test]
    fn explicit_inline_values() {
        let cfg = parse(
            r#"
            [spectrum]
            kind = "explicit"
            values = ["1", 4, 9.0]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.spectrum.level_count(), Some(3));
        assert_eq!(
            cfg.spectrum.eigenvalue::<BigRational>(2).unwrap(),
            ratio(4, 1)
        );
    }

    #[test]
    fn explicit_values_from_file() {
        let dir = std::env::temp_dir().join("chronolab-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("energies.txt"), "# levels\n1\n5/2\n\n9.5\n").unwrap();
        let cfg = RunConfig::from_str_with_base(
            r#"
            [spectrum]
            kind = "explicit"
            values_file = "energies.txt"
            "#,
            &dir,
        )
        .unwrap();
        assert_eq!(cfg.spectrum.level_count(), Some(3));
        assert_eq!(
            cfg.spectrum.eigenvalue::<BigRational>(2).unwrap(),
            ratio(5, 2)
        );
        assert_eq!(
            cfg.spectrum.eigenvalue::<BigRational>(3).unwrap(),
            ratio(19, 2)
        );
    }

    #[test]
    fn zero_mode_round_trip() {
        let cfg = parse(
            r#"
            [spectrum]
            kind = "explicit"
            values = [0, 1, 4]
            zero_mode = true
            "#,
        )
        .unwrap();
        assert!(cfg.spectrum.zero_mode());
        assert!(parse(
            r#"
            [spectrum]
            kind = "explicit"
            values = [0, 1, 4]
            "#,
        )
        .is_err());
    }

    #[test]
    fn hash_tracks_text() {
        let a = parse("[spectrum]\nkind = \"harmonic\"\nomega0 = 1\n").unwrap();
        let b = parse("[spectrum]\nkind = \"harmonic\"\nomega0 = 2\n").unwrap();
        assert_ne!(a.config_hash, b.config_hash);
    }

    #[test]
    fn float_literal_is_exact_binary_rational() {
        let cfg = parse(
            r#"
            [spectrum]
            kind = "harmonic"
            omega0 = 0.5
            "#,
        )
        .unwrap();
        assert_eq!(
            cfg.spectrum.eigenvalue::<BigRational>(1).unwrap(),
            ratio(1, 4)
        );
    }
}
