//! Configuration-space picture: the truncated integral kernel
//! `K_N(q,q') = sum' i hbar/(E_s - E_{s'}) phi_s(q) phi_{s'}(q')` and the
//! quadrature check that its squared L2 norm reproduces the eigenvalue
//! series, which is the Hilbert-Schmidt identity behind compactness.

use std::sync::Arc;

use nalgebra::DMatrix;
use num::complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::conditions::hilbert_schmidt_partial;
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::spectra::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasisFamily {
    BoxSine,
    Custom,
}

/// Real orthonormal family on `[0, length]`, indexed from 1. For degenerate
/// spectra the pair `(s, r)` maps to mode `M (s-1) + r`, which stays
/// orthonormal (that is all the Hilbert-Schmidt identity needs).
#[derive(Clone)]
pub struct EigenfunctionBasis {
    length: f64,
    modes: usize,
    family: BasisFamily,
    eval: Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for EigenfunctionBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EigenfunctionBasis")
            .field("length", &self.length)
            .field("modes", &self.modes)
            .field("family", &self.family)
            .finish()
    }
}

impl EigenfunctionBasis {
    /// `sqrt(2/L) sin(n pi q / L)` on `[0, L]`.
    pub fn box_sine(length: f64, modes: usize) -> Result<Self> {
        if length <= 0.0 {
            return Err(Error::InvalidParameter(
                "domain length must be positive".into(),
            ));
        }
        if modes == 0 {
            return Err(Error::InvalidParameter(
                "basis needs at least one mode".into(),
            ));
        }
        let norm = (2.0 / length).sqrt();
        let eval =
            move |n: usize, q: f64| norm * (n as f64 * std::f64::consts::PI * q / length).sin();
        Ok(EigenfunctionBasis {
            length,
            modes,
            family: BasisFamily::BoxSine,
            eval: Arc::new(eval),
        })
    }

    pub fn custom(
        length: f64,
        modes: usize,
        eval: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if length <= 0.0 || modes == 0 {
            return Err(Error::InvalidParameter(
                "bad custom basis parameters".into(),
            ));
        }
        Ok(EigenfunctionBasis {
            length,
            modes,
            family: BasisFamily::Custom,
            eval: Arc::new(eval),
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn eval(&self, mode: usize, q: f64) -> f64 {
        assert!(
            (1..=self.modes).contains(&mode),
            "mode {mode} outside 1..={}",
            self.modes
        );
        (self.eval)(mode, q)
    }

    /// Largest deviation of `integral phi_i phi_j` from `delta_ij` over
    /// `i, j <= count`, by quadrature with the given node count.
    pub fn orthonormality_defect(&self, count: usize, nodes: usize) -> Result<f64> {
        let rule = GaussLegendre::new(nodes)?;
        let (qs, ws) = rule.mapped(0.0, self.length);
        let table: Vec<Vec<f64>> = (1..=count)
            .map(|n| qs.iter().map(|&q| self.eval(n, q)).collect())
            .collect();
        let mut worst = 0.0f64;
        for i in 0..count {
            for j in 0..=i {
                let integral: f64 = (0..qs.len())
                    .map(|g| ws[g] * table[i][g] * table[j][g])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((integral - target).abs());
            }
        }
        Ok(worst)
    }
}

/// One evaluation of the truncated kernel `K_N(q, q')`.
pub fn kernel_eval(
    basis: &EigenfunctionBasis,
    spec: &Spectrum,
    n: usize,
    q: f64,
    qp: f64,
) -> Result<Complex<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "kernel truncation needs N >= 2".into(),
        ));
    }
    let m = spec.degeneracy();
    if n * m > basis.modes() {
        return Err(Error::InvalidParameter(format!(
            "basis exposes {} modes, kernel needs {}",
            basis.modes(),
            n * m
        )));
    }
    let hbar: f64 = spec.hbar();
    let eigs: Vec<f64> = (1..=n).map(|s| spec.eigenvalue(s)).collect::<Result<_>>()?;
    let left: Vec<f64> = (1..=n * m).map(|mode| basis.eval(mode, q)).collect();
    let right: Vec<f64> = (1..=n * m).map(|mode| basis.eval(mode, qp)).collect();
    let mut acc = Complex::new(0.0, 0.0);
    for s in 1..=n {
        for sp in 1..=n {
            if s == sp {
                continue;
            }
            let w = hbar / (eigs[s - 1] - eigs[sp - 1]);
            for r in 1..=m {
                for rp in 1..=m {
                    if m > 1 && r == rp {
                        continue;
                    }
                    let a = (s - 1) * m + r;
                    let b = (sp - 1) * m + rp;
                    acc += Complex::new(0.0, w * left[a - 1] * right[b - 1]);
                }
            }
        }
    }
    Ok(acc)
}

/// Result of the Hilbert-Schmidt identity check at one truncation.
#[derive(Debug, Clone, Serialize)]
pub struct KernelProbe {
    pub n: usize,
    pub nodes_per_axis: usize,
    pub grid_nodes: Vec<f64>,
    pub grid_weights: Vec<f64>,
    pub quadrature_value: f64,
    pub series_value: f64,
    pub rel_err: f64,
}

fn quadrature_of_kernel_sq(
    basis: &EigenfunctionBasis,
    spec: &Spectrum,
    n: usize,
    nodes: usize,
) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let m = spec.degeneracy();
    let dim = n * m;
    let rule = GaussLegendre::new(nodes)?;
    let (qs, ws) = rule.mapped(0.0, basis.length());
    // P[a, g] = phi_a(q_g); kernel values on the grid are P^T C P with C the
    // coefficient matrix, so |K|^2 integrates as a weighted Frobenius norm.
    let p = DMatrix::<f64>::from_fn(dim, nodes, |a, g| basis.eval(a + 1, qs[g]));
    let hbar: f64 = spec.hbar();
    let eigs: Vec<f64> = (1..=n).map(|s| spec.eigenvalue(s)).collect::<Result<_>>()?;
    // imaginary parts only: K = i * (P^T B P) with B real
    let b = DMatrix::<f64>::from_fn(dim, dim, |a, c| {
        let (s, r) = (a / m, a % m);
        let (sp, rp) = (c / m, c % m);
        if s != sp && (m == 1 || r != rp) {
            hbar / (eigs[s] - eigs[sp])
        } else {
            0.0
        }
    });
    let grid = p.transpose() * b * &p;
    let total: f64 = (0..nodes)
        .into_par_iter()
        .map(|i| {
            let mut row = 0.0;
            for j in 0..nodes {
                let k = grid[(i, j)];
                row += ws[i] * ws[j] * k * k;
            }
            row
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok((total, qs, ws))
}

/// Compares the quadrature of `integral |K_N|^2` against the truncated series
/// `factor * hbar^2 * sum'_{s,s'<=N} (E_s - E_{s'})^{-2}` with factor 1 for
/// `M = 1` and `M(M-1)` otherwise.
///
/// Requires enough nodes for the sine products (`2 N M + 4` per axis for the
/// box family) and cross-checks by doubling the node count; a drift larger
/// than `1e-12` of the series value is reported as under-resolution.
pub fn hs_identity_check(
    basis: &EigenfunctionBasis,
    spec: &Spectrum,
    n: usize,
    nodes: usize,
) -> Result<KernelProbe> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "kernel truncation needs N >= 2".into(),
        ));
    }
    let m = spec.degeneracy();
    if n * m > basis.modes() {
        return Err(Error::InvalidParameter(format!(
            "basis exposes {} modes, kernel needs {}",
            basis.modes(),
            n * m
        )));
    }
    if basis.family() == BasisFamily::BoxSine {
        let required = 2 * n * m + 4;
        if nodes < required {
            return Err(Error::QuadratureUnderResolved { nodes, required });
        }
    }

    let factor = if m == 1 { 1.0 } else { (m * (m - 1)) as f64 };
    let hbar: f64 = spec.hbar();
    let hs: f64 = hilbert_schmidt_partial(spec, n)?;
    let series_value = factor * hbar * hbar * hs;

    let (quadrature_value, qs, ws) = quadrature_of_kernel_sq(basis, spec, n, nodes)?;
    let (doubled, _, _) = quadrature_of_kernel_sq(basis, spec, n, 2 * nodes)?;
    // On a marginal grid the doubled value is essentially exact, so the
    // drift equals the quadrature error. Drift beyond the 1e-8 identity
    // tolerance means the grid cannot certify the check; resolved grids
    // saturate near 1e-15 (see tests).
    if (quadrature_value - doubled).abs() > 1e-8 * series_value.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::QuadratureUnderResolved {
            nodes,
            required: 2 * nodes,
        });
    }

    let rel_err = (quadrature_value - series_value).abs() / series_value;
    Ok(KernelProbe {
        n,
        nodes_per_axis: nodes,
        grid_nodes: qs,
        grid_weights: ws,
        quadrature_value,
        series_value,
        rel_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::spectra::make_power_law;
    use num::rational::BigRational;
    use num::traits::One;

    fn one() -> BigRational {
        BigRational::one()
    }

    fn box_spectrum(m: usize) -> Spectrum {
        make_power_law(one(), ratio(2, 1), m, one()).unwrap()
    }

    #[test]
    fn box_sine_values() {
        let basis = EigenfunctionBasis::box_sine(1.0, 8).unwrap();
        assert!((basis.eval(1, 0.5) - std::f64::consts::SQRT_2).abs() < 1e-15);
        for s in 1..=8 {
            assert_eq!(basis.eval(s, 0.0), 0.0);
        }
    }

    #[test]
    fn box_sine_orthonormal_by_quadrature() {
        let basis = EigenfunctionBasis::box_sine(1.0, 10).unwrap();
        let defect = basis.orthonormality_defect(10, 64).unwrap();
        assert!(defect < 1e-12, "defect {defect}");
    }

    #[test]
    fn kernel_vanishes_on_diagonal_and_boundary() {
        let basis = EigenfunctionBasis::box_sine(1.0, 4).unwrap();
        let spec = box_spectrum(1);
        let at_diag = kernel_eval(&basis, &spec, 2, 0.5, 0.5).unwrap();
        assert!(
            at_diag.norm() < 1e-15,
            "antisymmetric coefficients cancel at q = q'"
        );
        let at_boundary = kernel_eval(&basis, &spec, 4, 0.3, 0.0).unwrap();
        assert_eq!(at_boundary.norm(), 0.0);
    }

    #[test]
    fn kernel_is_hermitian_and_diagonal_imaginary() {
        let basis = EigenfunctionBasis::box_sine(1.0, 12).unwrap();
        for m in [1usize, 2] {
            let spec = box_spectrum(m);
            for (q, qp) in [(0.1, 0.7), (0.33, 0.41), (0.9, 0.2)] {
                let k1 = kernel_eval(&basis, &spec, 5, q, qp).unwrap();
                let k2 = kernel_eval(&basis, &spec, 5, qp, q).unwrap();
                assert!((k1 - k2.conj()).norm() < 1e-14);
                let kd = kernel_eval(&basis, &spec, 5, q, q).unwrap();
                assert!(kd.re.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn two_level_kernel_is_pure_difference_mode() {
        let basis = EigenfunctionBasis::box_sine(1.0, 2).unwrap();
        let spec = box_spectrum(1);
        let (q, qp) = (0.3, 0.8);
        let k = kernel_eval(&basis, &spec, 2, q, qp).unwrap();
        let expected = (1.0 / (1.0 - 4.0))
            * (basis.eval(1, q) * basis.eval(2, qp) - basis.eval(2, q) * basis.eval(1, qp));
        assert!(k.re.abs() < 1e-15);
        assert!((k.im - expected).abs() < 1e-14);
    }

    #[test]
    fn hs_identity_small_case() {
        let basis = EigenfunctionBasis::box_sine(1.0, 3).unwrap();
        let spec = box_spectrum(1);
        let probe = hs_identity_check(&basis, &spec, 3, 32).unwrap();
        assert!((probe.series_value - 2401.0 / 7200.0).abs() < 1e-15);
        assert!(probe.rel_err <= 1e-10, "rel_err {}", probe.rel_err);
    }

    #[test]
    fn hs_identity_degenerate_factor() {
        let basis = EigenfunctionBasis::box_sine(1.0, 6).unwrap();
        let spec = box_spectrum(2);
        let probe = hs_identity_check(&basis, &spec, 3, 32).unwrap();
        assert!((probe.series_value - 2.0 * 2401.0 / 7200.0).abs() < 1e-14);
        assert!(probe.rel_err <= 1e-10);
    }

    #[test]
    fn hbar_squared_scaling() {
        let basis = EigenfunctionBasis::box_sine(1.0, 3).unwrap();
        let spec = make_power_law(one(), ratio(2, 1), 1, ratio(2, 1)).unwrap();
        let probe = hs_identity_check(&basis, &spec, 3, 32).unwrap();
        assert!((probe.series_value - 4.0 * 2401.0 / 7200.0).abs() < 1e-14);
        assert!(probe.rel_err <= 1e-10);
    }

    #[test]
    fn under_resolved_node_count_rejected() {
        let basis = EigenfunctionBasis::box_sine(1.0, 4).unwrap();
        let spec = box_spectrum(1);
        assert!(matches!(
            hs_identity_check(&basis, &spec, 4, 4),
            Err(Error::QuadratureUnderResolved { required: 12, .. })
        ));
    }

    #[test]
    fn doubling_saturates_once_resolved() {
        let spec = box_spectrum(1);
        for n in [3usize, 5, 8] {
            let basis = EigenfunctionBasis::box_sine(1.0, n).unwrap();
            let a = hs_identity_check(&basis, &spec, n, 4 * n + 8).unwrap();
            let b = hs_identity_check(&basis, &spec, n, 2 * (4 * n + 8)).unwrap();
            assert!(
                (a.quadrature_value - b.quadrature_value).abs() <= 1e-12 * a.series_value,
                "N={n}: {} vs {}",
                a.quadrature_value,
                b.quadrature_value
            );
        }
    }

    #[test]
    fn four_n_nodes_meet_the_identity_tolerance() {
        let spec = box_spectrum(1);
        for n in 3..=10usize {
            let basis = EigenfunctionBasis::box_sine(1.0, n).unwrap();
            let probe = hs_identity_check(&basis, &spec, n, 4 * n).unwrap();
            assert!(probe.rel_err <= 1e-8, "N={n}: rel_err {}", probe.rel_err);
        }
        // N = 2 at 4N nodes genuinely misses 1e-8 (true error ~4e-6); the
        // drift heuristic reports it instead of returning a bad probe.
        let basis = EigenfunctionBasis::box_sine(1.0, 2).unwrap();
        assert!(matches!(
            hs_identity_check(&basis, &spec, 2, 8),
            Err(Error::QuadratureUnderResolved { .. })
        ));
    }
}
