//! Construction of the characteristic time operator: finite truncations with
//! entries `i*hbar/(E_s - E_{s'})`, the diagonal perturbation class, and lazy
//! application to finite-support vectors with a certified tail bound.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num::complex::Complex;
use num::rational::BigRational;
use num::traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conditions::{bound_constant_a, hilbert_schmidt_partial, inverse_square_tail};
use crate::error::{Error, Result};
use crate::scalar::{norm_sqr, ratio, Arithmetic, Scalar};
use crate::spectra::{BasisIndex, Spectrum};

/// Sparse vector with finitely many nonzero coefficients over the `|s,r>` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteVector<S: Scalar> {
    entries: BTreeMap<BasisIndex, Complex<S>>,
}

impl<S: Scalar> Default for FiniteVector<S> {
    fn default() -> Self {
        FiniteVector {
            entries: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> FiniteVector<S> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unit basis vector `e_{s,r}`.
    pub fn basis(s: usize, r: usize) -> Self {
        let mut v = Self::new();
        v.set(BasisIndex::new(s, r), Complex::new(S::one(), S::zero()));
        v
    }

    pub fn set(&mut self, idx: BasisIndex, value: Complex<S>) {
        if value.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
    }

    pub fn add_assign_at(&mut self, idx: BasisIndex, value: Complex<S>) {
        let current = self.get(&idx) + value;
        self.set(idx, current);
    }

    pub fn get(&self, idx: &BasisIndex) -> Complex<S> {
        self.entries.get(idx).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &Complex<S>)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest level `s` carrying a nonzero coefficient; 0 for the zero vector.
    pub fn support_horizon(&self) -> usize {
        self.entries.keys().map(|i| i.s).max().unwrap_or(0)
    }

    pub fn norm_sqr(&self) -> S {
        self.entries
            .values()
            .fold(S::zero(), |acc, z| acc + norm_sqr(z))
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().to_f64_lossy().sqrt()
    }

    /// Largest coefficient magnitude, as an f64 diagnostic.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .values()
            .map(|z| norm_sqr(z).to_f64_lossy().sqrt())
            .fold(0.0, f64::max)
    }

    /// `sum_s phi_{s,r}` for one degeneracy label.
    pub fn column_sum(&self, r: usize) -> Complex<S> {
        self.entries
            .iter()
            .filter(|(idx, _)| idx.r == r)
            .fold(Complex::zero(), |acc, (_, z)| acc + z.clone())
    }

    pub fn scaled(&self, factor: &Complex<S>) -> Self {
        let mut out = Self::new();
        for (idx, z) in &self.entries {
            out.set(*idx, z.clone() * factor.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (idx, z) in &other.entries {
            out.add_assign_at(*idx, z.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (idx, z) in &other.entries {
            out.add_assign_at(*idx, -z.clone());
        }
        out
    }

    /// `<self, other> = sum conj(self_{s,r}) * other_{s,r}`.
    pub fn inner(&self, other: &Self) -> Complex<S> {
        let mut acc = Complex::zero();
        for (idx, z) in &self.entries {
            let o = other.get(idx);
            if !o.is_zero() {
                acc += z.conj() * o;
            }
        }
        acc
    }

    /// Dense coefficient vector of length `n * m` (levels `1..=n` complete).
    pub fn to_dense(&self, n: usize, m: usize) -> Vec<Complex<S>> {
        let mut out = vec![Complex::zero(); n * m];
        for (idx, z) in &self.entries {
            assert!(idx.s <= n && idx.r <= m, "entry outside truncation window");
            out[idx.flat(m)] = z.clone();
        }
        out
    }

    pub fn map_values<T: Scalar>(&self, f: impl Fn(&Complex<S>) -> Complex<T>) -> FiniteVector<T> {
        let mut out = FiniteVector::new();
        for (idx, z) in &self.entries {
            out.set(*idx, f(z));
        }
        out
    }

    pub fn to_f64(&self) -> FiniteVector<f64> {
        self.map_values(|z| Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy()))
    }
}

/// Minimal dense complex matrix, generic over the scalar field so the same
/// code paths run in exact and float mode.
#[derive(Debug, Clone, PartialEq)]
pub struct OpMatrix<S: Scalar> {
    dim: usize,
    data: Vec<Complex<S>>,
}

impl<S: Scalar> OpMatrix<S> {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<S>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        OpMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Complex<S> {
        &self.data[i * self.dim + j]
    }

    pub fn mul_vec(&self, v: &[Complex<S>]) -> Vec<Complex<S>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = Complex::zero();
                for j in 0..self.dim {
                    let e = self.get(i, j);
                    if !e.is_zero() && !v[j].is_zero() {
                        acc += e.clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        OpMatrix::from_fn(self.dim, |i, j| {
            let mut acc = Complex::zero();
            for k in 0..self.dim {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc += a.clone() * other.get(k, j).clone();
            }
            acc
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        OpMatrix::from_fn(self.dim, |i, j| {
            self.get(i, j).clone() - other.get(i, j).clone()
        })
    }

    pub fn is_hermitian(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..=i {
                if *self.get(i, j) != self.get(j, i).conj() {
                    return false;
                }
            }
        }
        true
    }

    pub fn frobenius_norm_sqr(&self) -> S {
        self.data.iter().fold(S::zero(), |acc, z| acc + norm_sqr(z))
    }

    pub fn trace(&self) -> Complex<S> {
        (0..self.dim).fold(Complex::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn leading_block(&self, dim: usize) -> Self {
        assert!(dim <= self.dim);
        OpMatrix::from_fn(dim, |i, j| self.get(i, j).clone())
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            let z = self.get(i, j);
            Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
        })
    }
}

/// Finite truncation of the time operator on the first `N` levels (whole
/// degeneracy blocks; flat index `(s-1)*M + (r-1)`).
#[derive(Debug, Clone)]
pub struct TruncatedOperator<S: Scalar> {
    matrix: OpMatrix<S>,
    n_levels: usize,
    degeneracy: usize,
    hbar: S,
    spectrum_id: String,
    alpha_applied: Option<String>,
}

impl<S: Scalar> TruncatedOperator<S> {
    pub fn matrix(&self) -> &OpMatrix<S> {
        &self.matrix
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    pub fn dim(&self) -> usize {
        self.n_levels * self.degeneracy
    }

    pub fn hbar(&self) -> &S {
        &self.hbar
    }

    pub fn arithmetic(&self) -> Arithmetic {
        S::ARITHMETIC
    }

    pub fn spectrum_id(&self) -> &str {
        &self.spectrum_id
    }

    pub fn alpha_applied(&self) -> Option<&str> {
        self.alpha_applied.as_deref()
    }

    pub fn flat_of(&self, idx: BasisIndex) -> usize {
        idx.flat(self.degeneracy)
    }

    pub fn index_of(&self, flat: usize) -> BasisIndex {
        BasisIndex::from_flat(flat, self.degeneracy)
    }

    pub fn entry(&self, row: BasisIndex, col: BasisIndex) -> &Complex<S> {
        self.matrix.get(self.flat_of(row), self.flat_of(col))
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.is_hermitian()
    }

    pub fn frobenius_norm_sqr(&self) -> S {
        self.matrix.frobenius_norm_sqr()
    }

    pub fn to_f64(&self) -> TruncatedOperator<f64> {
        TruncatedOperator {
            matrix: OpMatrix::from_fn(self.matrix.dim(), |i, j| {
                let z = self.matrix.get(i, j);
                Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
            }),
            n_levels: self.n_levels,
            degeneracy: self.degeneracy,
            hbar: self.hbar.to_f64_lossy(),
            spectrum_id: self.spectrum_id.clone(),
            alpha_applied: self.alpha_applied.clone(),
        }
    }
}

fn check_horizon(spec: &Spectrum, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "truncation horizon must be >= 2".into(),
        ));
    }
    if let Some(len) = spec.level_count() {
        if n > len {
            return Err(Error::IndexOutOfRange { index: n, len });
        }
    }
    Ok(())
}

/// Nondegenerate builder: `T(s,s') = i hbar / (E_s - E_{s'})` off the
/// diagonal, zero on it.
pub fn build_t1<S: Scalar>(spec: &Spectrum, n: usize) -> Result<TruncatedOperator<S>> {
    if spec.degeneracy() != 1 {
        return Err(Error::WrongBuilder(
            "spectrum has degeneracy M > 1; use build_tm".into(),
        ));
    }
    check_horizon(spec, n)?;
    let hbar: S = spec.hbar();
    let eigs: Vec<S> = (1..=n).map(|s| spec.eigenvalue(s)).collect::<Result<_>>()?;
    let matrix = OpMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex::zero()
        } else {
            Complex::new(
                S::zero(),
                hbar.clone() / (eigs[i].clone() - eigs[j].clone()),
            )
        }
    });
    Ok(TruncatedOperator {
        matrix,
        n_levels: n,
        degeneracy: 1,
        hbar,
        spectrum_id: spec.id(),
        alpha_applied: None,
    })
}

/// Degenerate builder. Both exclusions are independent: the entry at
/// `((s,r),(s',r'))` is `i hbar / (E_s - E_{s'})` iff `s != s'` AND
/// `r != r'`. This is the reading consistent with the deficiency recursion
/// and with the `M(M-1)` Hilbert-Schmidt factor; it makes the M = 1 instance
/// identically zero, hence the builder split.
pub fn build_tm<S: Scalar>(spec: &Spectrum, n: usize) -> Result<TruncatedOperator<S>> {
    let m = spec.degeneracy();
    if m < 2 {
        return Err(Error::WrongBuilder(
            "spectrum is nondegenerate; use build_t1".into(),
        ));
    }
    check_horizon(spec, n)?;
    let hbar: S = spec.hbar();
    let eigs: Vec<S> = (1..=n).map(|s| spec.eigenvalue(s)).collect::<Result<_>>()?;
    let matrix = OpMatrix::from_fn(n * m, |a, b| {
        let row = BasisIndex::from_flat(a, m);
        let col = BasisIndex::from_flat(b, m);
        if row.s != col.s && row.r != col.r {
            Complex::new(
                S::zero(),
                hbar.clone() / (eigs[row.s - 1].clone() - eigs[col.s - 1].clone()),
            )
        } else {
            Complex::zero()
        }
    });
    Ok(TruncatedOperator {
        matrix,
        n_levels: n,
        degeneracy: m,
        hbar,
        spectrum_id: spec.id(),
        alpha_applied: None,
    })
}

/// Builds the truncation matching the spectrum's degeneracy.
pub fn build<S: Scalar>(spec: &Spectrum, n: usize) -> Result<TruncatedOperator<S>> {
    if spec.degeneracy() == 1 {
        build_t1(spec, n)
    } else {
        build_tm(spec, n)
    }
}

/// Diagonal Hamiltonian truncation `diag(E_s)` on the same index layout,
/// used for matrix-route commutator checks.
pub fn hamiltonian_matrix<S: Scalar>(spec: &Spectrum, n: usize) -> Result<OpMatrix<S>> {
    check_horizon(spec, n)?;
    let m = spec.degeneracy();
    let eigs: Vec<S> = (1..=n).map(|s| spec.eigenvalue(s)).collect::<Result<_>>()?;
    Ok(OpMatrix::from_fn(n * m, |i, j| {
        if i == j {
            Complex::new(eigs[i / m].clone(), S::zero())
        } else {
            Complex::zero()
        }
    }))
}

/// Bounded real diagonal sequence `alpha_{s,r}` added to the time operator.
#[derive(Debug, Clone, PartialEq)]
pub enum PerturbationKind {
    /// `alpha_{s,r} = tau`.
    Constant(BigRational),
    /// `alpha_s = amplitude * s^{-exponent}` with `2*exponent > 1`, so the
    /// sequence is square-summable by the exponent certificate.
    SquareSummable {
        amplitude: BigRational,
        exponent: BigRational,
    },
    /// Explicit values in flat-index order, zero beyond the list.
    Custom(Vec<BigRational>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSequence {
    kind: PerturbationKind,
    bound: BigRational,
}

impl PerturbationSequence {
    pub fn constant(tau: BigRational) -> Self {
        let bound = tau.abs();
        PerturbationSequence {
            kind: PerturbationKind::Constant(tau),
            bound,
        }
    }

    pub fn square_summable(amplitude: BigRational, exponent: BigRational) -> Result<Self> {
        if ratio(2, 1) * exponent.clone() <= BigRational::from_integer(1.into()) {
            return Err(Error::InvalidParameter(
                "square-summable sequence needs exponent > 1/2".into(),
            ));
        }
        let bound = amplitude.abs();
        Ok(PerturbationSequence {
            kind: PerturbationKind::SquareSummable {
                amplitude,
                exponent,
            },
            bound,
        })
    }

    pub fn custom(values: Vec<BigRational>) -> Self {
        let bound = values
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        PerturbationSequence {
            kind: PerturbationKind::Custom(values),
            bound,
        }
    }

    pub fn kind(&self) -> &PerturbationKind {
        &self.kind
    }

    /// Certified `sup |alpha_{s,r}|`.
    pub fn bound(&self) -> &BigRational {
        &self.bound
    }

    pub fn value<S: Scalar>(&self, idx: BasisIndex, degeneracy: usize) -> Result<S> {
        match &self.kind {
            PerturbationKind::Constant(tau) => Ok(S::from_rational(tau)),
            PerturbationKind::SquareSummable {
                amplitude,
                exponent,
            } => {
                let base = S::from_u64(idx.s as u64);
                let neg = -exponent.clone();
                let powed = S::try_pow(&base, &neg).ok_or_else(|| {
                    Error::ExactUnavailable(format!("s^(-{exponent}) is irrational; use float64"))
                })?;
                Ok(S::from_rational(amplitude) * powed)
            }
            PerturbationKind::Custom(values) => {
                let flat = idx.flat(degeneracy);
                Ok(values
                    .get(flat)
                    .map(S::from_rational)
                    .unwrap_or_else(S::zero))
            }
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            PerturbationKind::Constant(tau) => format!("constant:{tau}"),
            PerturbationKind::SquareSummable {
                amplitude,
                exponent,
            } => format!("square-summable:{amplitude},{exponent}"),
            PerturbationKind::Custom(values) => {
                let joined: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                format!("custom:{}", joined.join(","))
            }
        }
    }

    /// Deterministic family of rescaled copies, used to exercise the
    /// perturbation class. Scale factors are exact rationals `k/64` drawn
    /// from a seeded generator, so the family is reproducible in both
    /// arithmetic modes.
    pub fn sample_family(&self, count: usize, seed: u64) -> Vec<PerturbationSequence> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let k: i64 = rng.gen_range(-64..=64);
                let f = ratio(k, 64);
                let kind = match &self.kind {
                    PerturbationKind::Constant(tau) => {
                        PerturbationKind::Constant(tau.clone() * f.clone())
                    }
                    PerturbationKind::SquareSummable {
                        amplitude,
                        exponent,
                    } => PerturbationKind::SquareSummable {
                        amplitude: amplitude.clone() * f.clone(),
                        exponent: exponent.clone(),
                    },
                    PerturbationKind::Custom(values) => PerturbationKind::Custom(
                        values.iter().map(|v| v.clone() * f.clone()).collect(),
                    ),
                };
                let bound = self.bound.clone() * f.abs();
                PerturbationSequence { kind, bound }
            })
            .collect()
    }
}

/// `T + diag(alpha_{s,r})`. Off-diagonal entries are untouched; Hermiticity
/// is preserved because the sequence is real.
pub fn perturb<S: Scalar>(
    t: &TruncatedOperator<S>,
    alpha: &PerturbationSequence,
) -> Result<TruncatedOperator<S>> {
    let m = t.degeneracy();
    let dim = t.dim();
    let mut diag: Vec<Complex<S>> = Vec::with_capacity(dim);
    for flat in 0..dim {
        let idx = BasisIndex::from_flat(flat, m);
        let base = t.matrix.get(flat, flat).clone();
        diag.push(base + Complex::new(alpha.value::<S>(idx, m)?, S::zero()));
    }
    let matrix = OpMatrix::from_fn(dim, |i, j| {
        if i == j {
            diag[i].clone()
        } else {
            t.matrix.get(i, j).clone()
        }
    });
    Ok(TruncatedOperator {
        matrix,
        n_levels: t.n_levels,
        degeneracy: m,
        hbar: t.hbar.clone(),
        spectrum_id: t.spectrum_id.clone(),
        alpha_applied: Some(alpha.describe()),
    })
}

/// Image of a finite-support vector plus tail-norm control.
#[derive(Debug, Clone)]
pub struct AppliedImage<S: Scalar> {
    /// Exact image coefficients for levels `s <= out_horizon`.
    pub image: FiniteVector<S>,
    /// Bound on the Euclidean norm of the omitted part of the image:
    /// `hbar * A_N * sqrt(channel weight) * sqrt(tail of sum E_s^{-2})`,
    /// where the channel weight squares the coefficient-modulus sums per
    /// excluded-label channel. Exactly 0 when a finite spectrum has been
    /// applied through its last level. `None` when the inverse-square
    /// condition is not certified convergent, in which case the returned
    /// coefficients are still exact but the tail is uncontrolled.
    pub tail_norm_bound: Option<f64>,
}

/// Applies the time operator to a finite-support vector, reporting exact
/// image coefficients up to `out_horizon` and a rigorous bound on the norm
/// beyond it.
pub fn apply_to_finite<S: Scalar>(
    spec: &Spectrum,
    phi: &FiniteVector<S>,
    out_horizon: usize,
) -> Result<AppliedImage<S>> {
    let m = spec.degeneracy();
    let support = phi.support_horizon();
    if out_horizon < support {
        return Err(Error::InvalidParameter(format!(
            "out_horizon {out_horizon} is below the support horizon {support}"
        )));
    }
    if let Some(len) = spec.level_count() {
        if out_horizon > len {
            return Err(Error::IndexOutOfRange {
                index: out_horizon,
                len,
            });
        }
    }
    let hbar: S = spec.hbar();
    let mut image = FiniteVector::new();
    if phi.is_empty() {
        return Ok(AppliedImage {
            image,
            tail_norm_bound: Some(0.0),
        });
    }
    // A finite spectrum applied through its last level leaves no tail at all.
    let exhausted = spec.level_count() == Some(out_horizon);

    for s in 1..=out_horizon {
        let es: S = spec.eigenvalue(s)?;
        for r in 1..=m {
            let mut acc = Complex::<S>::zero();
            for (idx, z) in phi.iter() {
                if idx.s == s {
                    continue;
                }
                if m > 1 && idx.r == r {
                    continue;
                }
                let esp: S = spec.eigenvalue(idx.s)?;
                let w = hbar.clone() / (es.clone() - esp);
                // i * w * z
                acc += Complex::new(-w.clone() * z.im.clone(), w * z.re.clone());
            }
            image.set(BasisIndex::new(s, r), acc);
        }
    }

    let tail_norm_bound = if exhausted {
        Some(0.0)
    } else {
        inverse_square_tail(spec, out_horizon).map(|tail| {
            let a: f64 =
                bound_constant_a::<f64>(spec, support, 2 * support + 16).unwrap_or(f64::NAN);
            let phi_f = phi.to_f64();
            let mut abs_col = vec![0.0f64; m + 1];
            for (idx, z) in phi_f.iter() {
                abs_col[idx.r] += (z.re * z.re + z.im * z.im).sqrt();
            }
            let total: f64 = abs_col[1..].iter().sum();
            let channel_sq: f64 = if m == 1 {
                total * total
            } else {
                (1..=m).map(|r| (total - abs_col[r]).powi(2)).sum()
            };
            let hb = spec.hbar::<f64>();
            hb * a * (channel_sq * tail).sqrt()
        })
    };

    Ok(AppliedImage {
        image,
        tail_norm_bound,
    })
}

/// Norm bounds derived from the Hilbert-Schmidt partial sum.
#[derive(Debug, Clone, Copy)]
pub struct NormBound {
    /// `M * hbar * sqrt(partial HS sum at N)`: certified bound for the
    /// truncation's operator norm (it dominates the Frobenius norm).
    pub truncation: f64,
    /// Bound valid for every truncation, available when the Hilbert-Schmidt
    /// condition is certified convergent: tail added under the square root.
    pub all_truncations: Option<f64>,
}

pub fn operator_norm_bound(spec: &Spectrum, n: usize, m: usize) -> Result<NormBound> {
    let partial: f64 = hilbert_schmidt_partial(spec, n)?;
    let hbar: f64 = spec.hbar();
    let truncation = m as f64 * hbar * partial.sqrt();
    let all_truncations = crate::conditions::hilbert_schmidt_tail(spec, n)
        .map(|tail| m as f64 * hbar * (partial + tail).sqrt());
    Ok(NormBound {
        truncation,
        all_truncations,
    })
}

/// Seeded random vector in the span of the first `n` levels, with rational
/// coefficients. `complex_parts` adds independent rational imaginary parts.
pub fn sample_finite_vector(
    n: usize,
    m: usize,
    complex_parts: bool,
    rng: &mut ChaCha8Rng,
) -> FiniteVector<BigRational> {
    let mut v = FiniteVector::new();
    for s in 1..=n {
        for r in 1..=m {
            let num: i64 = rng.gen_range(-12..=12);
            let den: i64 = rng.gen_range(1..=8);
            let re = ratio(num, den);
            let im = if complex_parts {
                let num: i64 = rng.gen_range(-12..=12);
                let den: i64 = rng.gen_range(1..=8);
                ratio(num, den)
            } else {
                BigRational::zero()
            };
            v.set(BasisIndex::new(s, r), Complex::new(re, im));
        }
    }
    v
}
