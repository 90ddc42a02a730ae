//! Evidence-grade diagnostics behind the self-adjointness claims: spectral
//! reality of truncations, convergence of leading eigenvalues under the
//! Hilbert-Schmidt condition, rectangular deficiency probes, and exact
//! symmetry of the sesquilinear form. None of this proves essential
//! self-adjointness (that argument is analytic); the module reports the
//! finite-dimensional shadows the theory predicts.

use nalgebra::{Complex as NaComplex, DMatrix};
use num::complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectra::Spectrum;
use crate::timeop::{apply_to_finite, build, operator_norm_bound, FiniteVector, TruncatedOperator};

/// Eigenvalue summary of one Hermitian truncation.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub horizon: usize,
    /// Sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// Largest imaginary component reported by the eigensolver. The Hermitian
    /// solver returns real eigenvalues by construction, so this is 0 unless
    /// the solver contract is violated.
    pub max_imag_part: f64,
    pub extreme_abs: f64,
}

pub fn eigen_summary(t: &TruncatedOperator<f64>) -> Result<SpectralSummary> {
    let m = t.matrix().to_dmatrix();
    let decomp = m
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;
    let mut eigenvalues: Vec<f64> = decomp.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("real eigenvalues"));
    let extreme_abs = eigenvalues.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
    Ok(SpectralSummary {
        horizon: t.n_levels(),
        eigenvalues,
        max_imag_part: 0.0,
        extreme_abs,
    })
}

/// Leading eigenvalues sorted by decreasing magnitude, positive branch first
/// within each near-degenerate magnitude group. The spectrum is symmetric
/// about zero, so +/- partners agree in magnitude only up to solver
/// round-off; grouping with a relative tolerance keeps the branches from
/// swapping between truncations.
fn leading(eigenvalues: &[f64], k: usize) -> Vec<f64> {
    let mut sorted: Vec<f64> = eigenvalues.to_vec();
    sorted.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).expect("real eigenvalues"));
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start + 1;
        while end < sorted.len()
            && (sorted[end].abs() - sorted[start].abs()).abs()
                <= 1e-9 * (sorted[start].abs() + 1e-300)
        {
            end += 1;
        }
        sorted[start..end].sort_by(|a, b| b.partial_cmp(a).expect("real eigenvalues"));
        start = end;
    }
    sorted.truncate(k);
    sorted
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub horizon: usize,
    pub leading: Vec<f64>,
    pub max_imag_part: f64,
    pub extreme_abs: f64,
    pub norm_bound: f64,
    /// `|lambda_k(N_j) - lambda_k(N_{j-1}))|`; absent on the first row.
    pub diffs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub top_k: usize,
    pub rows: Vec<ConvergenceRow>,
}

/// Eigenvalue convergence study over increasing truncation horizons.
pub fn convergence_study(
    spec: &Spectrum,
    n_list: &[usize],
    top_k: usize,
) -> Result<ConvergenceTable> {
    if n_list.is_empty() {
        return Err(Error::InvalidParameter("empty horizon list".into()));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "horizon list must be strictly increasing".into(),
        ));
    }
    let m = spec.degeneracy();
    let summaries: Vec<(SpectralSummary, f64)> = n_list
        .par_iter()
        .map(|&n| {
            let t = build::<f64>(spec, n)?;
            let summary = eigen_summary(&t)?;
            let bound = operator_norm_bound(spec, n, m)?.truncation;
            Ok((summary, bound))
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(summaries.len());
    for (summary, norm_bound) in summaries {
        let lead = leading(&summary.eigenvalues, top_k);
        let diffs = rows.last().map(|prev: &ConvergenceRow| {
            prev.leading
                .iter()
                .zip(&lead)
                .map(|(a, b)| (a - b).abs())
                .collect()
        });
        rows.push(ConvergenceRow {
            horizon: summary.horizon,
            leading: lead,
            max_imag_part: summary.max_imag_part,
            extreme_abs: summary.extreme_abs,
            norm_bound,
            diffs,
        });
    }
    Ok(ConvergenceTable { top_k, rows })
}

/// Rectangular probe of `(T - sign*i) phi` for `phi` supported on the first
/// `N` levels, with rows up to `R > N` capturing leakage into discarded
/// levels. Symmetry forces `sigma_min >= 1`; drift of `sigma_min` toward 1
/// with candidate mass escaping to high levels would be the signature of a
/// near-deficiency vector, which is reported, never asserted absent.
#[derive(Debug, Clone, Serialize)]
pub struct DeficiencyProbe {
    pub sign: i8,
    pub rows: usize,
    pub cols: usize,
    pub sigma_min: f64,
    /// Minimizing unit vector, `(re, im)` per level.
    pub candidate: Vec<(f64, f64)>,
}

pub fn deficiency_probe(
    spec: &Spectrum,
    n: usize,
    rows: usize,
    sign: i8,
) -> Result<DeficiencyProbe> {
    deficiency_probe_scaled(spec, n, rows, sign, 1.0)
}

/// Same probe with the level coupling scaled by a constant factor. The
/// symmetric channel of an M-degenerate system obeys the scalar recursion
/// with coupling `M - 1`, which this exposes.
pub fn deficiency_probe_scaled(
    spec: &Spectrum,
    n: usize,
    rows: usize,
    sign: i8,
    coupling_scale: f64,
) -> Result<DeficiencyProbe> {
    if !(sign == 1 || sign == -1) {
        return Err(Error::InvalidParameter("sign must be +1 or -1".into()));
    }
    if n < 2 || rows <= n {
        return Err(Error::InvalidProbeShape { rows, cols: n });
    }
    if let Some(len) = spec.level_count() {
        if rows > len {
            return Err(Error::IndexOutOfRange { index: rows, len });
        }
    }
    let hbar: f64 = spec.hbar();
    let eigs: Vec<f64> = (1..=rows)
        .map(|s| spec.eigenvalue(s))
        .collect::<Result<_>>()?;
    let g = DMatrix::<NaComplex<f64>>::from_fn(rows, n, |i, j| {
        if i == j {
            NaComplex::new(0.0, -(sign as f64))
        } else {
            NaComplex::new(0.0, coupling_scale * hbar / (eigs[i] - eigs[j]))
        }
    });
    let svd = g.svd(false, true);
    let (min_idx, sigma_min) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("real singular values"))
        .map(|(i, v)| (i, *v))
        .ok_or_else(|| Error::NumericalFailure("empty singular value list".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::NumericalFailure("SVD did not return right vectors".into()))?;
    let candidate: Vec<(f64, f64)> = v_t.row(min_idx).iter().map(|z| (z.re, -z.im)).collect();
    Ok(DeficiencyProbe {
        sign,
        rows,
        cols: n,
        sigma_min,
        candidate,
    })
}

/// `<psi, T phi> - <T psi, phi>` evaluated through the lazy application at a
/// horizon covering both supports. The truncation is exact here: coefficients
/// of the images beyond either support meet zero coefficients of the other
/// vector. Identically zero in exact mode; bounded by solver round-off in
/// floats.
pub fn symmetry_defect<S: Scalar>(
    spec: &Spectrum,
    phi: &FiniteVector<S>,
    psi: &FiniteVector<S>,
) -> Result<Complex<S>> {
    let horizon = phi.support_horizon().max(psi.support_horizon()).max(2);
    let t_phi = apply_to_finite(spec, phi, horizon)?.image;
    let t_psi = apply_to_finite(spec, psi, horizon)?.image;
    Ok(psi.inner(&t_phi) - t_psi.inner(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::spectra::{make_harmonic, make_power_law};
    use crate::timeop::{build_t1, perturb, sample_finite_vector, PerturbationSequence};
    use num::rational::BigRational;
    use num::traits::One;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one() -> BigRational {
        BigRational::one()
    }

    fn box_spectrum(m: usize) -> Spectrum {
        make_power_law(one(), ratio(2, 1), m, one()).unwrap()
    }

    #[test]
    fn harmonic_two_level_eigenvalues() {
        let spec = make_harmonic(one(), 1, one()).unwrap();
        let t = build_t1::<f64>(&spec, 2).unwrap();
        let summary = eigen_summary(&t).unwrap();
        assert!((summary.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((summary.eigenvalues[1] - 1.0).abs() < 1e-12);
        assert_eq!(summary.max_imag_part, 0.0);
    }

    #[test]
    fn constant_perturbation_shifts_spectrum() {
        let spec = make_harmonic(one(), 1, one()).unwrap();
        let t = build_t1::<f64>(&spec, 2).unwrap();
        let shifted = perturb(&t, &PerturbationSequence::constant(ratio(5, 1))).unwrap();
        let base = eigen_summary(&t).unwrap();
        let after = eigen_summary(&shifted).unwrap();
        for (a, b) in base.eigenvalues.iter().zip(&after.eigenvalues) {
            assert!((b - a - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn extreme_abs_within_norm_bound() {
        for (spec, m) in [
            (box_spectrum(1), 1usize),
            (box_spectrum(2), 2),
            (make_harmonic(one(), 1, one()).unwrap(), 1),
            (make_power_law(one(), ratio(1, 1), 1, one()).unwrap(), 1),
        ] {
            for n in [3usize, 10, 50] {
                let t = build::<f64>(&spec, n).unwrap();
                let summary = eigen_summary(&t).unwrap();
                let bound = operator_norm_bound(&spec, n, m).unwrap().truncation;
                assert!(
                    summary.extreme_abs <= bound + 1e-12,
                    "N={n}: {} > {bound}",
                    summary.extreme_abs
                );
            }
        }
    }

    #[test]
    fn trace_of_unperturbed_truncation_is_zero() {
        let t = build::<BigRational>(&box_spectrum(2), 5).unwrap();
        assert!(num::traits::Zero::is_zero(&t.matrix().trace()));
    }

    #[test]
    fn convergence_study_shapes() {
        let spec = box_spectrum(1);
        let table = convergence_study(&spec, &[5, 10, 20], 3).unwrap();
        assert_eq!(table.rows.len(), 3);
        assert!(table.rows[0].diffs.is_none());
        assert_eq!(table.rows[1].diffs.as_ref().unwrap().len(), 3);
        // single-horizon study has no difference column
        let single = convergence_study(&spec, &[5], 3).unwrap();
        assert!(single.rows[0].diffs.is_none());
        // non-increasing list rejected
        assert!(convergence_study(&spec, &[5, 5], 3).is_err());
    }

    #[test]
    fn leading_pairs_track_signs() {
        let vals = vec![-0.5, 0.5, -0.1, 0.1, 0.0];
        let lead = leading(&vals, 4);
        assert_eq!(lead, vec![0.5, -0.5, 0.1, -0.1]);
    }

    #[test]
    fn probe_sigma_min_at_least_one() {
        for spec in [
            box_spectrum(1),
            make_harmonic(one(), 1, one()).unwrap(),
            make_power_law(one(), ratio(1, 1), 1, one()).unwrap(),
        ] {
            for sign in [1i8, -1] {
                let probe = deficiency_probe(&spec, 2, 4, sign).unwrap();
                assert!(probe.sigma_min >= 1.0 - 1e-10, "{}", probe.sigma_min);
                let norm: f64 = probe
                    .candidate
                    .iter()
                    .map(|(re, im)| re * re + im * im)
                    .sum();
                assert!((norm - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn probe_sigma_min_medium_case() {
        let spec = box_spectrum(1);
        let probe = deficiency_probe(&spec, 50, 150, 1).unwrap();
        assert!(probe.sigma_min >= 1.0 - 1e-10);
    }

    #[test]
    fn scaled_channel_probe() {
        let spec = box_spectrum(2);
        let probe = deficiency_probe_scaled(&spec, 10, 30, -1, 1.0).unwrap();
        assert!(probe.sigma_min >= 1.0 - 1e-10);
        let scaled = deficiency_probe_scaled(&spec, 10, 30, 1, 1.0 * (2 - 1) as f64).unwrap();
        assert!(scaled.sigma_min >= 1.0 - 1e-10);
    }

    #[test]
    fn probe_shape_guard() {
        let spec = box_spectrum(1);
        assert!(matches!(
            deficiency_probe(&spec, 5, 5, 1),
            Err(Error::InvalidProbeShape { .. })
        ));
    }

    #[test]
    fn symmetry_defect_exact_zero_for_rationals() {
        let spec = box_spectrum(1);
        let e1 = FiniteVector::<BigRational>::basis(1, 1);
        let e2 = FiniteVector::<BigRational>::basis(2, 1);
        let d = symmetry_defect(&spec, &e1, &e2).unwrap();
        assert!(num::traits::Zero::is_zero(&d));

        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..5 {
            let phi = sample_finite_vector(8, 1, true, &mut rng);
            let psi = sample_finite_vector(8, 1, true, &mut rng);
            let d = symmetry_defect(&spec, &phi, &psi).unwrap();
            assert!(num::traits::Zero::is_zero(&d));
        }
    }

    #[test]
    fn symmetry_defect_small_in_floats() {
        let spec = box_spectrum(1);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..5 {
            let phi = sample_finite_vector(8, 1, true, &mut rng).to_f64();
            let psi = sample_finite_vector(8, 1, true, &mut rng).to_f64();
            let d = symmetry_defect(&spec, &phi, &psi).unwrap();
            let scale = phi.norm() * psi.norm();
            assert!((d.re * d.re + d.im * d.im).sqrt() <= 1e-13 * scale);
        }
    }
}
