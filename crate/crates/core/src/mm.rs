//! Matrix Market coordinate export for truncations, plus the JSON sidecar
//! describing the provenance of the matrix.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::scalar::Scalar;
use crate::timeop::TruncatedOperator;

/// Scientific notation with 17 significant digits, enough to reproduce any
/// f64 exactly.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the truncation in `coordinate complex general` format: 1-based
/// indices, entries sorted by (row, column), explicit zeros omitted.
pub fn write_matrix_market<S: Scalar, W: Write>(
    t: &TruncatedOperator<S>,
    out: &mut W,
) -> Result<()> {
    let dim = t.dim();
    let mut entries: Vec<(usize, usize, f64, f64)> = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let z = t.matrix().get(i, j);
            if num::traits::Zero::is_zero(z) {
                continue;
            }
            entries.push((i + 1, j + 1, z.re.to_f64_lossy(), z.im.to_f64_lossy()));
        }
    }
    writeln!(out, "%%MatrixMarket matrix coordinate complex general")?;
    writeln!(out, "{dim} {dim} {}", entries.len())?;
    for (i, j, re, im) in entries {
        writeln!(out, "{i} {j} {} {}", fmt_g17(re), fmt_g17(im))?;
    }
    Ok(())
}

pub fn matrix_market_string<S: Scalar>(t: &TruncatedOperator<S>) -> Result<String> {
    let mut buf = Vec::new();
    write_matrix_market(t, &mut buf)?;
    Ok(String::from_utf8(buf).expect("matrix market output is ASCII"))
}

/// Provenance sidecar written next to an exported matrix.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub spectrum_id: String,
    pub n: usize,
    pub m: usize,
    pub hbar: String,
    pub arithmetic: crate::scalar::Arithmetic,
    pub frobenius_sq: f64,
    /// Exact value as a rational string, when the matrix was built exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frobenius_sq_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_applied: Option<String>,
}

pub fn sidecar<S: Scalar>(t: &TruncatedOperator<S>) -> Sidecar {
    let frob = t.frobenius_norm_sqr();
    Sidecar {
        spectrum_id: t.spectrum_id().to_string(),
        n: t.n_levels(),
        m: t.degeneracy(),
        hbar: t.hbar().to_string(),
        arithmetic: t.arithmetic(),
        frobenius_sq: frob.to_f64_lossy(),
        frobenius_sq_exact: match S::ARITHMETIC {
            crate::scalar::Arithmetic::ExactRational => Some(frob.to_string()),
            crate::scalar::Arithmetic::Float64 => None,
        },
        alpha_applied: t.alpha_applied().map(str::to_string),
    }
}
