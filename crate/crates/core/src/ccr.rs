//! The canonical-domain subspaces built from difference vectors
//! `|i,k> - |j,k>` and exact verification of the commutation relation on
//! them. All coefficient sums per degeneracy label vanish structurally, which
//! is what keeps the commutator image inside the original support and makes
//! exact verification on finite data possible.

use std::collections::BTreeMap;

use num::complex::Complex;
use num::rational::BigRational;
use num::traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{ratio, Scalar};
use crate::spectra::{BasisIndex, Spectrum};
use crate::timeop::FiniteVector;

/// Generator coordinates `(i, j, k)` with `1 <= j < i <= L`, `1 <= k <= M`.
pub type GeneratorKey = (usize, usize, usize);

/// Element of the canonical domain, stored as generator coefficients
/// `a_{i,j,k}` together with its cached basis expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct DcElement<S: Scalar> {
    coefficients: BTreeMap<GeneratorKey, Complex<S>>,
    horizon: usize,
    degeneracy: usize,
    expansion: FiniteVector<S>,
}

impl<S: Scalar> DcElement<S> {
    pub fn new(
        coefficients: BTreeMap<GeneratorKey, Complex<S>>,
        horizon: usize,
        degeneracy: usize,
    ) -> Result<Self> {
        if horizon < 2 {
            return Err(Error::EmptySubspace);
        }
        for &(i, j, k) in coefficients.keys() {
            if !(1 <= j && j < i && i <= horizon) {
                return Err(Error::InvalidGenerator(format!(
                    "generator ({i},{j},{k}) violates 1 <= j < i <= {horizon}"
                )));
            }
            if !(1 <= k && k <= degeneracy) {
                return Err(Error::InvalidGenerator(format!(
                    "generator ({i},{j},{k}) has label outside 1..={degeneracy}"
                )));
            }
        }
        let expansion = expand_coefficients(&coefficients, horizon, degeneracy);
        Ok(DcElement {
            coefficients,
            horizon,
            degeneracy,
            expansion,
        })
    }

    /// Single difference vector `|i,k> - |j,k>`.
    pub fn generator(
        i: usize,
        j: usize,
        k: usize,
        horizon: usize,
        degeneracy: usize,
    ) -> Result<Self> {
        let mut coefficients = BTreeMap::new();
        coefficients.insert((i, j, k), Complex::new(S::one(), S::zero()));
        DcElement::new(coefficients, horizon, degeneracy)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&GeneratorKey, &Complex<S>)> {
        self.coefficients.iter()
    }

    pub fn expansion(&self) -> &FiniteVector<S> {
        &self.expansion
    }

    pub fn to_f64(&self) -> DcElement<f64> {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(k, z)| (*k, Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())))
            .collect();
        DcElement::new(coefficients, self.horizon, self.degeneracy)
            .expect("valid coefficients stay valid under conversion")
    }
}

/// Basis expansion `phi_{s,k} = sum_{l<s} a_{s,l,k} - sum_{l>s} a_{l,s,k}`,
/// with out-of-range coefficients read as zero.
fn expand_coefficients<S: Scalar>(
    coefficients: &BTreeMap<GeneratorKey, Complex<S>>,
    _horizon: usize,
    _degeneracy: usize,
) -> FiniteVector<S> {
    let mut phi = FiniteVector::new();
    for (&(i, j, k), a) in coefficients {
        phi.add_assign_at(BasisIndex::new(i, k), a.clone());
        phi.add_assign_at(BasisIndex::new(j, k), -a.clone());
    }
    phi
}

/// All difference-vector generators for horizon `L` and degeneracy `M`:
/// `M * L * (L-1) / 2` of them.
pub fn dc_generators<S: Scalar>(l: usize, m: usize) -> Result<Vec<DcElement<S>>> {
    if l < 2 {
        return Err(Error::EmptySubspace);
    }
    if m < 1 {
        return Err(Error::InvalidParameter("degeneracy must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(m * l * (l - 1) / 2);
    for k in 1..=m {
        for j in 1..l {
            for i in (j + 1)..=l {
                out.push(DcElement::generator(i, j, k, l, m)?);
            }
        }
    }
    Ok(out)
}

/// Seeded random element of the canonical domain: rational coefficients on
/// the full `(i, j, k)` grid, optionally with imaginary parts.
pub fn sample_dc_element(
    l: usize,
    m: usize,
    complex_parts: bool,
    rng: &mut ChaCha8Rng,
) -> DcElement<BigRational> {
    let mut coefficients = BTreeMap::new();
    for k in 1..=m {
        for j in 1..l {
            for i in (j + 1)..=l {
                let num: i64 = rng.gen_range(-9..=9);
                let den: i64 = rng.gen_range(1..=6);
                let re = ratio(num, den);
                let im = if complex_parts {
                    let num: i64 = rng.gen_range(-9..=9);
                    let den: i64 = rng.gen_range(1..=6);
                    ratio(num, den)
                } else {
                    BigRational::zero()
                };
                let z = Complex::new(re, im);
                if !z.is_zero() {
                    coefficients.insert((i, j, k), z);
                }
            }
        }
    }
    DcElement::new(coefficients, l, m).expect("sampled coefficients lie on the valid grid")
}

/// Replaces `phi_{s,r}` by `sum_{r' != r} phi_{s,r'}`: the all-ones-minus-
/// identity action on the degeneracy index. Identity map for `M = 1`.
pub fn rowmix<S: Scalar>(phi: &FiniteVector<S>, m: usize) -> FiniteVector<S> {
    if m == 1 {
        return phi.clone();
    }
    let mut out = FiniteVector::new();
    let levels: std::collections::BTreeSet<usize> = phi.iter().map(|(idx, _)| idx.s).collect();
    for s in levels {
        let mut row: Vec<Complex<S>> = vec![Complex::zero(); m + 1];
        let mut total = Complex::<S>::zero();
        for (idx, z) in phi.iter() {
            if idx.s == s {
                row[idx.r] = z.clone();
                total += z.clone();
            }
        }
        for r in 1..=m {
            out.set(BasisIndex::new(s, r), total.clone() - row[r].clone());
        }
    }
    out
}

/// The commutator coefficient `((TH - HT)phi)_{s,r} =
/// -i hbar sum_{s' != s, r' != r} phi_{s',r'}`, evaluated at an arbitrary
/// index with no domain precondition. Used directly for closure checks at
/// levels beyond the support.
pub fn commutator_coefficient_at<S: Scalar>(
    spec: &Spectrum,
    phi: &FiniteVector<S>,
    at: BasisIndex,
) -> Complex<S> {
    let m = spec.degeneracy();
    let mut total = Complex::<S>::zero();
    for (idx, z) in phi.iter() {
        if idx.s == at.s {
            continue;
        }
        if m > 1 && idx.r == at.r {
            continue;
        }
        total += z.clone();
    }
    let hbar: S = spec.hbar();
    // -i * hbar * total
    Complex::new(hbar.clone() * total.im.clone(), -(hbar * total.re))
}

/// Exact mode demands literal zeros. Float mode tolerates column sums up to
/// `1e-12` of the column's L1 weight: expanding generator coefficients in
/// floats leaves rounding residue there, while genuinely out-of-domain
/// vectors (an eigenvector, say) fail by a factor near 1.
fn require_zero_column_sums<S: Scalar>(phi: &FiniteVector<S>, m: usize) -> Result<()> {
    for r in 1..=m {
        let sum = phi.column_sum(r);
        let ok = match S::ARITHMETIC {
            crate::scalar::Arithmetic::ExactRational => sum.is_zero(),
            crate::scalar::Arithmetic::Float64 => {
                let weight: f64 = phi
                    .iter()
                    .filter(|(idx, _)| idx.r == r)
                    .map(|(_, z)| crate::scalar::norm_sqr(z).to_f64_lossy().sqrt())
                    .sum();
                crate::scalar::norm_sqr(&sum).to_f64_lossy().sqrt() <= 1e-12 * weight
            }
        };
        if !ok {
            return Err(Error::NotInCommutatorDomain { label: r });
        }
    }
    Ok(())
}

/// `(TH - HT) phi` for a vector with vanishing per-label column sums. The
/// zero-sum condition is exactly what confines the image to the support of
/// `phi`; vectors failing it are rejected rather than truncated.
pub fn commutator_apply<S: Scalar>(
    spec: &Spectrum,
    phi: &FiniteVector<S>,
) -> Result<FiniteVector<S>> {
    let m = spec.degeneracy();
    require_zero_column_sums(phi, m)?;
    let mut out = FiniteVector::new();
    let levels: std::collections::BTreeSet<usize> = phi.iter().map(|(idx, _)| idx.s).collect();
    for s in levels {
        for r in 1..=m {
            out.set(
                BasisIndex::new(s, r),
                commutator_coefficient_at(spec, phi, BasisIndex::new(s, r)),
            );
        }
    }
    Ok(out)
}

/// `(T H - H T) phi` computed through explicit matrix products of a given
/// truncation, as an independent route to the lazy coefficient formula. The
/// truncation must cover the support of `phi`.
pub fn commutator_matrix_apply<S: Scalar>(
    spec: &Spectrum,
    t: &crate::timeop::TruncatedOperator<S>,
    phi: &FiniteVector<S>,
) -> Result<FiniteVector<S>> {
    let n = t.n_levels();
    let m = t.degeneracy();
    if phi.support_horizon() > n {
        return Err(Error::InvalidParameter(
            "truncation does not cover the vector's support".into(),
        ));
    }
    let h = crate::timeop::hamiltonian_matrix::<S>(spec, n)?;
    let c = t.matrix().matmul(&h).sub(&h.matmul(t.matrix()));
    let image = c.mul_vec(&phi.to_dense(n, m));
    let mut out = FiniteVector::new();
    for (flat, z) in image.into_iter().enumerate() {
        out.set(BasisIndex::from_flat(flat, m), z);
    }
    Ok(out)
}

/// Commutator diagnostics for one vector.
#[derive(Debug, Clone)]
pub struct CommutatorResidual<S: Scalar> {
    /// `(TH - HT) phi - i hbar phi`.
    pub residual: FiniteVector<S>,
    /// `(TH - HT) phi - i hbar rowmix(phi)`. Exactly zero on the canonical
    /// domain for every degeneracy; coincides with `residual` at `M = 1`.
    pub defect_vector: FiniteVector<S>,
    /// Residual is identically zero (entrywise, in the working arithmetic).
    pub exact_zero: bool,
    /// Largest residual coefficient magnitude as a float diagnostic.
    pub max_abs_coefficient: f64,
}

/// Evaluates the commutation relation on `phi`: residual against the
/// canonical `i hbar phi` law and against the degeneracy-mixed law.
pub fn ccr_residual<S: Scalar>(
    spec: &Spectrum,
    phi: &FiniteVector<S>,
) -> Result<CommutatorResidual<S>> {
    let m = spec.degeneracy();
    let commutator = commutator_apply(spec, phi)?;
    let hbar: S = spec.hbar();
    let i_hbar = Complex::new(S::zero(), hbar);
    let residual = commutator.sub(&phi.scaled(&i_hbar));
    let defect_vector = commutator.sub(&rowmix(phi, m).scaled(&i_hbar));
    let exact_zero = residual.is_empty();
    let max_abs_coefficient = residual.max_abs();
    Ok(CommutatorResidual {
        residual,
        defect_vector,
        exact_zero,
        max_abs_coefficient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{make_harmonic, make_power_law};
    use crate::timeop::{build, hamiltonian_matrix};
    use num::traits::One;
    use rand_chacha::rand_core::SeedableRng;

    fn one() -> BigRational {
        BigRational::one()
    }

    fn box_spectrum(m: usize) -> Spectrum {
        make_power_law(one(), ratio(2, 1), m, one()).unwrap()
    }

    #[test]
    fn generator_counts() {
        assert_eq!(dc_generators::<BigRational>(2, 1).unwrap().len(), 1);
        assert_eq!(dc_generators::<BigRational>(3, 1).unwrap().len(), 3);
        assert_eq!(dc_generators::<BigRational>(3, 2).unwrap().len(), 6);
        assert!(matches!(
            dc_generators::<BigRational>(1, 1),
            Err(Error::EmptySubspace)
        ));
    }

    #[test]
    fn expansion_hand_values() {
        let g = DcElement::<BigRational>::generator(2, 1, 1, 2, 1).unwrap();
        let phi = g.expansion();
        assert_eq!(phi.get(&BasisIndex::new(1, 1)).re, ratio(-1, 1));
        assert_eq!(phi.get(&BasisIndex::new(2, 1)).re, ratio(1, 1));

        let mut coeffs = BTreeMap::new();
        coeffs.insert((2, 1, 1), Complex::new(one(), BigRational::zero()));
        coeffs.insert((3, 1, 1), Complex::new(one(), BigRational::zero()));
        let d = DcElement::new(coeffs, 3, 1).unwrap();
        let phi = d.expansion();
        assert_eq!(phi.get(&BasisIndex::new(1, 1)).re, ratio(-2, 1));
        assert_eq!(phi.get(&BasisIndex::new(2, 1)).re, ratio(1, 1));
        assert_eq!(phi.get(&BasisIndex::new(3, 1)).re, ratio(1, 1));

        let zero = DcElement::<BigRational>::new(BTreeMap::new(), 4, 1).unwrap();
        assert!(zero.expansion().is_empty());
    }

    #[test]
    fn expansion_column_sums_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in 1..=3 {
            for _ in 0..10 {
                let d = sample_dc_element(6, m, true, &mut rng);
                for r in 1..=m {
                    assert!(d.expansion().column_sum(r).is_zero());
                }
            }
        }
    }

    #[test]
    fn invalid_generator_coordinates_rejected() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((1, 1, 1), Complex::new(one(), BigRational::zero()));
        assert!(matches!(
            DcElement::<BigRational>::new(coeffs, 3, 1),
            Err(Error::InvalidGenerator(_))
        ));
        let mut coeffs = BTreeMap::new();
        coeffs.insert((2, 1, 3), Complex::new(one(), BigRational::zero()));
        assert!(DcElement::<BigRational>::new(coeffs, 3, 2).is_err());
    }

    #[test]
    fn harmonic_ccr_holds_exactly() {
        let spec = make_harmonic(one(), 1, one()).unwrap();
        let phi = DcElement::<BigRational>::generator(2, 1, 1, 2, 1)
            .unwrap()
            .expansion()
            .clone();
        let res = ccr_residual(&spec, &phi).unwrap();
        assert!(res.exact_zero);
        assert!(res.defect_vector.is_empty());

        let com = commutator_apply(&spec, &phi).unwrap();
        let i_one = Complex::new(BigRational::zero(), BigRational::one());
        assert_eq!(com, phi.scaled(&i_one));
    }

    #[test]
    fn eigenvector_is_outside_commutator_domain() {
        let spec = make_harmonic(one(), 1, one()).unwrap();
        let e1 = FiniteVector::<BigRational>::basis(1, 1);
        assert!(matches!(
            commutator_apply(&spec, &e1),
            Err(Error::NotInCommutatorDomain { label: 1 })
        ));
    }

    #[test]
    fn degenerate_commutator_swaps_labels() {
        let spec = box_spectrum(2);
        let phi = FiniteVector::<BigRational>::basis(1, 1).sub(&FiniteVector::basis(2, 1));
        let com = commutator_apply(&spec, &phi).unwrap();
        let i_one = Complex::new(BigRational::zero(), BigRational::one());
        let expected = FiniteVector::<BigRational>::basis(1, 2)
            .sub(&FiniteVector::basis(2, 2))
            .scaled(&i_one);
        assert_eq!(com, expected);

        let res = ccr_residual(&spec, &phi).unwrap();
        assert!(!res.exact_zero);
        assert!(res.defect_vector.is_empty(), "defect law must hold");
    }

    #[test]
    fn m2_symmetric_vectors_satisfy_plain_ccr() {
        let spec = box_spectrum(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let base = sample_dc_element(5, 1, true, &mut rng);
            // same level profile on both labels
            let mut phi = FiniteVector::<BigRational>::new();
            for (idx, z) in base.expansion().iter() {
                phi.set(BasisIndex::new(idx.s, 1), z.clone());
                phi.set(BasisIndex::new(idx.s, 2), z.clone());
            }
            let res = ccr_residual(&spec, &phi).unwrap();
            assert!(
                res.exact_zero,
                "r-symmetric vectors satisfy the plain law at M=2"
            );
        }
    }

    #[test]
    fn closure_beyond_support() {
        let spec = box_spectrum(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = sample_dc_element(6, 3, true, &mut rng);
        let phi = d.expansion();
        for s in 7..=16 {
            for r in 1..=3 {
                let c = commutator_coefficient_at(&spec, phi, BasisIndex::new(s, r));
                assert!(c.is_zero(), "leak at ({s},{r})");
            }
        }
    }

    #[test]
    fn matrix_commutator_agrees() {
        for m in [1usize, 2, 3] {
            let spec = box_spectrum(m);
            let mut rng = ChaCha8Rng::seed_from_u64(17 + m as u64);
            let d = sample_dc_element(4, m, true, &mut rng);
            let phi = d.expansion();
            let com = commutator_apply(&spec, phi).unwrap();

            let n = 6; // strictly larger than the support
            let t = build::<BigRational>(&spec, n).unwrap();
            let h = hamiltonian_matrix::<BigRational>(&spec, n).unwrap();
            let c = t.matrix().matmul(&h).sub(&h.matmul(t.matrix()));
            let image = c.mul_vec(&phi.to_dense(n, m));
            for (flat, val) in image.iter().enumerate() {
                let idx = BasisIndex::from_flat(flat, m);
                assert_eq!(com.get(&idx), *val, "mismatch at {idx:?} (M={m})");
            }
        }
    }

    #[test]
    fn residual_is_linear() {
        let spec = make_harmonic(one(), 2, one()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = sample_dc_element(5, 2, true, &mut rng).expansion().clone();
        let b = sample_dc_element(5, 2, true, &mut rng).expansion().clone();
        let ca = Complex::new(ratio(2, 3), ratio(-1, 2));
        let cb = Complex::new(ratio(-5, 4), ratio(1, 7));
        let combined = a.scaled(&ca).add(&b.scaled(&cb));

        let ra = ccr_residual(&spec, &a).unwrap().residual;
        let rb = ccr_residual(&spec, &b).unwrap().residual;
        let rc = ccr_residual(&spec, &combined).unwrap().residual;
        assert_eq!(rc, ra.scaled(&ca).add(&rb.scaled(&cb)));
    }

    #[test]
    fn float_residual_small_for_large_horizon() {
        let spec = make_harmonic(one(), 1, one()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let d = sample_dc_element(40, 1, true, &mut rng).to_f64();
        let phi = d.expansion();
        let res = ccr_residual(&spec, phi).unwrap();
        let rel = res.residual.norm() / phi.norm();
        assert!(rel <= 1e-12, "relative residual {rel}");
    }
}
