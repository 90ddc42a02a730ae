//! Summability diagnostics for the two hypotheses the construction rests on:
//! the inverse-square sum over eigenvalues and the Hilbert-Schmidt double sum
//! over level gaps. Also computes the explicit tail constants `A_N` and `B_L`
//! and checks the tail inequalities they certify.

use num::complex::Complex;
use num::traits::Zero;
use serde::Serialize;

use crate::ccr::DcElement;
use crate::error::{Error, Result};
use crate::scalar::{abs_lower, norm_sqr, Scalar};
use crate::spectra::{Spectrum, SpectrumKind};
use crate::timeop::FiniteVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConditionKind {
    InverseSquare,
    HilbertSchmidt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converges,
    Diverges,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    ClosedFormExponent,
    IntegralTest,
    PartialSumsOnly,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartialSum {
    pub horizon: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: ConditionKind,
    pub partial_sums: Vec<PartialSum>,
    pub tail_bound: Option<f64>,
    pub verdict: Verdict,
    pub method: Method,
}

fn milestones(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = 1usize;
    while m < n {
        out.push(m);
        m = m.saturating_mul(10);
    }
    out.push(n);
    out
}

/// Partial sum of `sum_{s<=n} E_s^{-2}` in the requested arithmetic. Zero
/// eigenvalues (possible only with `zero_mode`) are skipped.
pub fn inverse_square_partial<S: Scalar>(spec: &Spectrum, n: usize) -> Result<S> {
    let mut acc = S::zero();
    for s in 1..=n {
        let e: S = spec.eigenvalue(s)?;
        if e.is_zero() {
            continue;
        }
        acc += S::one() / (e.clone() * e);
    }
    Ok(acc)
}

/// Partial sum of `sum_{s != s', both <= n} (E_s - E_{s'})^{-2}` (energy
/// units; multiply by `hbar^2` for the omega-normalized value).
pub fn hilbert_schmidt_partial<S: Scalar>(spec: &Spectrum, n: usize) -> Result<S> {
    let eigs: Vec<S> = (1..=n).map(|s| spec.eigenvalue(s)).collect::<Result<_>>()?;
    let two = S::from_u64(2);
    let mut acc = S::zero();
    for s in 1..n {
        for sp in 0..s {
            let gap = eigs[s].clone() - eigs[sp].clone();
            acc += two.clone() / (gap.clone() * gap);
        }
    }
    Ok(acc)
}

/// Rigorous upper bound on `sum_{s > n} E_s^{-2}` via the integral test, when
/// the family's growth makes one available.
pub fn inverse_square_tail(spec: &Spectrum, n: usize) -> Option<f64> {
    match spec.kind() {
        SpectrumKind::PowerLaw { c, p } => {
            let c = c.to_f64_lossy();
            let p = p.to_f64_lossy();
            if p > 0.5 {
                Some((n as f64).powf(1.0 - 2.0 * p) / (c * c * (2.0 * p - 1.0)))
            } else {
                None
            }
        }
        SpectrumKind::Box { scale } => {
            let c = scale.to_f64_lossy();
            Some(1.0 / (3.0 * c * c * (n as f64).powi(3)))
        }
        SpectrumKind::Harmonic { omega0 } => {
            let w = omega0.to_f64_lossy() * spec.hbar::<f64>();
            Some(1.0 / (w * w * (n as f64 - 0.5)))
        }
        SpectrumKind::Explicit { .. } => None,
    }
}

/// Conservative upper bound on the Hilbert-Schmidt tail (pairs with
/// `max(s,s') > n`) for families with at-least-quadratic growth. Uses
/// `E_s - E_{s'} >= c (s^2 - s'^2)` for `p >= 2` together with
/// `sum_d d^-2 <= 2` and `sum_{s>n} s^-2 <= 1/n`.
pub fn hilbert_schmidt_tail(spec: &Spectrum, n: usize) -> Option<f64> {
    let c = match spec.kind() {
        SpectrumKind::PowerLaw { c, p } if p.to_f64_lossy() >= 2.0 => c.to_f64_lossy(),
        SpectrumKind::Box { scale } => scale.to_f64_lossy(),
        _ => return None,
    };
    Some(4.0 / (c * c * n as f64))
}

/// Report on the condition `sum E_s^{-2} < infinity`.
pub fn inverse_square_sum(spec: &Spectrum, n: usize) -> Result<ConditionReport> {
    if n < 1 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    if let Some(len) = spec.level_count() {
        if n > len {
            return Err(Error::IndexOutOfRange { index: n, len });
        }
    }
    let marks = milestones(n);
    let mut partial_sums = Vec::with_capacity(marks.len());
    let mut acc = 0.0f64;
    let mut next = 0usize;
    for s in 1..=n {
        let e: f64 = spec.eigenvalue(s)?;
        if e != 0.0 {
            acc += 1.0 / (e * e);
        }
        if marks[next] == s {
            partial_sums.push(PartialSum {
                horizon: s,
                value: acc,
            });
            next += 1;
        }
    }

    let (verdict, method, tail_bound) = match spec.kind() {
        SpectrumKind::PowerLaw { p, .. } => {
            if p.to_f64_lossy() > 0.5 {
                (
                    Verdict::Converges,
                    Method::ClosedFormExponent,
                    inverse_square_tail(spec, n),
                )
            } else {
                (Verdict::Diverges, Method::ClosedFormExponent, None)
            }
        }
        SpectrumKind::Box { .. } => (
            Verdict::Converges,
            Method::ClosedFormExponent,
            inverse_square_tail(spec, n),
        ),
        SpectrumKind::Harmonic { .. } => (
            Verdict::Converges,
            Method::IntegralTest,
            inverse_square_tail(spec, n),
        ),
        SpectrumKind::Explicit { .. } => (Verdict::Unknown, Method::PartialSumsOnly, None),
    };

    Ok(ConditionReport {
        condition: ConditionKind::InverseSquare,
        partial_sums,
        tail_bound,
        verdict,
        method,
    })
}

/// Report on the compactness condition
/// `sum_{s != s'} (E_s - E_{s'})^{-2} < infinity`.
pub fn hilbert_schmidt_sum(spec: &Spectrum, n: usize) -> Result<ConditionReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "Hilbert-Schmidt horizon must be >= 2 (no off-diagonal pair exists below that)".into(),
        ));
    }
    if let Some(len) = spec.level_count() {
        if n > len {
            return Err(Error::IndexOutOfRange { index: n, len });
        }
    }
    let eigs: Vec<f64> = (1..=n).map(|s| spec.eigenvalue(s)).collect::<Result<_>>()?;
    let marks = milestones(n);
    let mut partial_sums = Vec::with_capacity(marks.len());
    let mut acc = 0.0f64;
    let mut next = 0usize;
    for s in 0..n {
        for sp in 0..s {
            let gap = eigs[s] - eigs[sp];
            acc += 2.0 / (gap * gap);
        }
        if marks[next] == s + 1 {
            partial_sums.push(PartialSum {
                horizon: s + 1,
                value: acc,
            });
            next += 1;
        }
    }

    let (verdict, method) = match spec.kind() {
        SpectrumKind::PowerLaw { p, .. } => {
            let p = p.to_f64_lossy();
            if p >= 2.0 {
                (Verdict::Converges, Method::ClosedFormExponent)
            } else if p <= 1.0 {
                // Gaps are constant (p = 1) or shrinking (p < 1): nearest
                // neighbour terms alone grow without bound.
                (Verdict::Diverges, Method::ClosedFormExponent)
            } else {
                (Verdict::Unknown, Method::PartialSumsOnly)
            }
        }
        SpectrumKind::Box { .. } => (Verdict::Converges, Method::ClosedFormExponent),
        SpectrumKind::Harmonic { .. } => (Verdict::Diverges, Method::ClosedFormExponent),
        SpectrumKind::Explicit { .. } => (Verdict::Unknown, Method::PartialSumsOnly),
    };
    let tail_bound = if verdict == Verdict::Converges {
        hilbert_schmidt_tail(spec, n)
    } else {
        None
    };

    Ok(ConditionReport {
        condition: ConditionKind::HilbertSchmidt,
        partial_sums,
        tail_bound,
        verdict,
        method,
    })
}

/// The constant `A_N = max (1 - E_{s'}/E_s)^{-1}` over `s' <= N < s`. By
/// monotonicity the maximum sits at `s' = N`, `s = N + 1`; a finite scan up to
/// `probe_horizon` must agree or the call fails hard.
pub fn bound_constant_a<S: Scalar>(spec: &Spectrum, n: usize, probe_horizon: usize) -> Result<S> {
    if n < 1 {
        return Err(Error::InvalidParameter("A_N needs N >= 1".into()));
    }
    let beyond = probe_horizon.max(n + 1);
    if let Some(len) = spec.level_count() {
        if n + 1 > len {
            return Err(Error::IndexOutOfRange { index: n + 1, len });
        }
    }
    let ratio_inv = |sp: usize, s: usize| -> Result<S> {
        let es: S = spec.eigenvalue(s)?;
        let esp: S = spec.eigenvalue(sp)?;
        Ok(S::one() / (S::one() - esp / es))
    };
    let analytic = ratio_inv(n, n + 1)?;
    let scan_top = match spec.level_count() {
        Some(len) => beyond.min(len),
        None => beyond,
    };
    let mut scanned = analytic.clone();
    for sp in 1..=n {
        for s in (n + 1)..=scan_top {
            let v = ratio_inv(sp, s)?;
            if v > scanned {
                scanned = v;
            }
        }
    }
    if exceeds(&scanned, &analytic) {
        return Err(Error::ScanDisagreement {
            analytic: analytic.to_f64_lossy(),
            scanned: scanned.to_f64_lossy(),
        });
    }
    Ok(analytic)
}

/// The constant `B_L = max (E_k - E_{s'}) (1 - E_k/E_s)^{-1} (1 - E_{s'}/E_s)^{-1}`
/// over `s' < k <= L < s`. The supremum over `s` is attained at `s = L + 1`;
/// the `(s', k)` grid is finite and searched exhaustively. A scan over
/// `s <= probe_horizon` must agree.
pub fn bound_constant_b<S: Scalar>(spec: &Spectrum, l: usize, probe_horizon: usize) -> Result<S> {
    if l < 2 {
        return Err(Error::InvalidParameter(
            "B_L needs L >= 2 (the (s', k) grid is empty below that)".into(),
        ));
    }
    if let Some(len) = spec.level_count() {
        if l + 1 > len {
            return Err(Error::IndexOutOfRange { index: l + 1, len });
        }
    }
    let cell = |sp: usize, k: usize, s: usize| -> Result<S> {
        let es: S = spec.eigenvalue(s)?;
        let ek: S = spec.eigenvalue(k)?;
        let esp: S = spec.eigenvalue(sp)?;
        let gap = ek.clone() - esp.clone();
        let fk = S::one() - ek / es.clone();
        let fsp = S::one() - esp / es;
        Ok(gap / (fk * fsp))
    };
    let mut analytic: Option<S> = None;
    for sp in 1..l {
        for k in (sp + 1)..=l {
            let v = cell(sp, k, l + 1)?;
            if analytic.as_ref().is_none_or(|best| v > *best) {
                analytic = Some(v);
            }
        }
    }
    let analytic = analytic.expect("grid nonempty for L >= 2");
    let scan_top = match spec.level_count() {
        Some(len) => probe_horizon.max(l + 1).min(len),
        None => probe_horizon.max(l + 1),
    };
    let mut scanned = analytic.clone();
    for sp in 1..l {
        for k in (sp + 1)..=l {
            for s in (l + 1)..=scan_top {
                let v = cell(sp, k, s)?;
                if v > scanned {
                    scanned = v;
                }
            }
        }
    }
    if exceeds(&scanned, &analytic) {
        return Err(Error::ScanDisagreement {
            analytic: analytic.to_f64_lossy(),
            scanned: scanned.to_f64_lossy(),
        });
    }
    Ok(analytic)
}

/// Scan strictly exceeding the analytic maximum. In float mode a relative
/// slack of a few ulps keeps round-off from tripping the hard error.
fn exceeds<S: Scalar>(scanned: &S, analytic: &S) -> bool {
    if S::ARITHMETIC == crate::scalar::Arithmetic::ExactRational {
        scanned > analytic
    } else {
        scanned.to_f64_lossy() > analytic.to_f64_lossy() * (1.0 + 1e-12)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TailTerm {
    pub s: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Per-level record of a tail inequality check. `violations` counts levels
/// where the left side exceeded the right side in the working arithmetic.
#[derive(Debug, Clone, Serialize)]
pub struct TailCheckReport {
    pub terms: Vec<TailTerm>,
    pub violations: usize,
}

/// Checks, level by level for `support < s <= s_max`, the image tail bound
///
/// `sum_r |sum_{s'<=N, r'!=r} phi_{s',r'}/(E_s - E_{s'})|^2
///     <= A_N^2 * sum_r (sum_{s'<=N, r'!=r} |phi_{s',r'}|)^2 / E_s^2`.
///
/// In exact mode the right side uses `max(|Re|,|Im|)` as a rational lower
/// bound for each modulus, so a pass certifies the true inequality a fortiori
/// (and is slack-free for vectors with real coefficients).
pub fn verify_image_tail_bound<S: Scalar>(
    spec: &Spectrum,
    phi: &FiniteVector<S>,
    probe_horizon: usize,
    s_max: usize,
) -> Result<TailCheckReport> {
    let n = phi.support_horizon();
    if n == 0 {
        return Ok(TailCheckReport {
            terms: Vec::new(),
            violations: 0,
        });
    }
    let m = spec.degeneracy();
    let a: S = bound_constant_a(spec, n, probe_horizon)?;
    let a_sq = a.clone() * a;

    // sum_r ( sum over the included labels of |phi_{s',r'}| )^2, moduli
    // replaced by exact lower bounds. The nondegenerate bound has no label
    // exclusion; the degenerate one excludes r' = r.
    let mut abs_col = vec![S::zero(); m + 1];
    for (idx, z) in phi.iter() {
        abs_col[idx.r] += abs_lower(z);
    }
    let total_abs: S = abs_col[1..].iter().cloned().fold(S::zero(), |x, y| x + y);
    let mut coeff = S::zero();
    for r in 1..=m {
        let cross = if m == 1 {
            total_abs.clone()
        } else {
            total_abs.clone() - abs_col[r].clone()
        };
        coeff += cross.clone() * cross;
    }
    let rhs_scale = a_sq * coeff;

    let mut terms = Vec::new();
    let mut violations = 0usize;
    for s in (n + 1)..=s_max {
        let es: S = spec.eigenvalue(s)?;
        let mut lhs = S::zero();
        for r in 1..=m {
            let mut inner = Complex::<S>::zero();
            for (idx, z) in phi.iter() {
                if m > 1 && idx.r == r {
                    continue;
                }
                let esp: S = spec.eigenvalue(idx.s)?;
                let denom = es.clone() - esp;
                inner += Complex::new(z.re.clone() / denom.clone(), z.im.clone() / denom);
            }
            lhs += norm_sqr(&inner);
        }
        let rhs = rhs_scale.clone() / (es.clone() * es);
        if lhs > rhs {
            violations += 1;
        }
        terms.push(TailTerm {
            s,
            lhs: lhs.to_f64_lossy(),
            rhs: rhs.to_f64_lossy(),
        });
    }
    Ok(TailCheckReport { terms, violations })
}

/// Checks, per degeneracy label and level `L < s <= s_max`, the
/// energy-weighted bound
///
/// `|sum_{s'<=L} phi_{s',rho}/(E_s - E_{s'})| <= B_L * (sum |a_{k,s',rho}|) / E_s^2`,
///
/// squared on both sides so the comparison stays in the scalar field. Moduli
/// on the right use exact lower bounds as in [`verify_image_tail_bound`].
pub fn verify_energy_weighted_bound<S: Scalar>(
    spec: &Spectrum,
    element: &DcElement<S>,
    probe_horizon: usize,
    s_max: usize,
) -> Result<TailCheckReport> {
    let l = element.horizon();
    let m = element.degeneracy();
    let b: S = bound_constant_b(spec, l, probe_horizon)?;
    let phi = element.expansion();

    let mut abs_a = vec![S::zero(); m + 1];
    for ((_, _, k), z) in element.coefficients() {
        abs_a[*k] += abs_lower(z);
    }

    let mut terms = Vec::new();
    let mut violations = 0usize;
    for s in (l + 1)..=s_max {
        let es: S = spec.eigenvalue(s)?;
        let es_sq = es.clone() * es.clone();
        for rho in 1..=m {
            let mut inner = Complex::<S>::zero();
            for (idx, z) in phi.iter() {
                if idx.r != rho {
                    continue;
                }
                let esp: S = spec.eigenvalue(idx.s)?;
                let denom = es.clone() - esp;
                inner += Complex::new(z.re.clone() / denom.clone(), z.im.clone() / denom);
            }
            let lhs_sq = norm_sqr(&inner);
            let rhs = b.clone() * abs_a[rho].clone() / es_sq.clone();
            let rhs_sq = rhs.clone() * rhs;
            if lhs_sq > rhs_sq {
                violations += 1;
            }
            terms.push(TailTerm {
                s,
                lhs: lhs_sq.to_f64_lossy(),
                rhs: rhs_sq.to_f64_lossy(),
            });
        }
    }
    Ok(TailCheckReport { terms, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::spectra::{from_list, make_harmonic, make_power_law};
    use num::rational::BigRational;
    use num::traits::One;

    fn one() -> BigRational {
        BigRational::one()
    }

    fn box_spectrum() -> Spectrum {
        make_power_law(one(), ratio(2, 1), 1, one()).unwrap()
    }

    #[test]
    fn explicit_three_term_partial_sum() {
        let spec = from_list(vec![ratio(1, 1), ratio(4, 1), ratio(9, 1)], 1, one()).unwrap();
        let report = inverse_square_sum(&spec, 3).unwrap();
        let exact: BigRational = inverse_square_partial(&spec, 3).unwrap();
        assert_eq!(exact, ratio(1393, 1296)); // 1 + 1/16 + 1/81
        let last = report.partial_sums.last().unwrap();
        assert!((last.value - 1393.0 / 1296.0).abs() < 1e-15);
        assert_eq!(report.verdict, Verdict::Unknown);
        assert_eq!(report.method, Method::PartialSumsOnly);
        assert!(report.tail_bound.is_none());
    }

    #[test]
    fn basel_sum_bracketed_by_tail_bound() {
        let spec = make_power_law(one(), ratio(1, 1), 1, one()).unwrap();
        let n = 1_000_000;
        let report = inverse_square_sum(&spec, n).unwrap();
        let partial = report.partial_sums.last().unwrap().value;
        let tail = report.tail_bound.unwrap();
        let basel = std::f64::consts::PI.powi(2) / 6.0;
        assert!(partial <= basel && basel <= partial + tail);
        assert!(tail < 1.1e-6);
        assert_eq!(report.verdict, Verdict::Converges);
    }

    #[test]
    fn harmonic_series_diverges() {
        let spec = make_power_law(one(), ratio(1, 2), 1, one()).unwrap();
        let report = inverse_square_sum(&spec, 100).unwrap();
        assert_eq!(report.verdict, Verdict::Diverges);
        assert!(report.tail_bound.is_none());
    }

    #[test]
    fn partial_sums_nondecreasing_and_bracket_shrinks() {
        let spec = box_spectrum();
        let report = inverse_square_sum(&spec, 1000).unwrap();
        let mut prev = 0.0;
        for ps in &report.partial_sums {
            assert!(ps.value >= prev);
            prev = ps.value;
        }
        // partial + tail at growing horizons is nonincreasing
        let brackets: Vec<f64> = [10usize, 100, 1000]
            .iter()
            .map(|&n| {
                let r = inverse_square_sum(&spec, n).unwrap();
                r.partial_sums.last().unwrap().value + r.tail_bound.unwrap()
            })
            .collect();
        assert!(brackets[0] >= brackets[1] && brackets[1] >= brackets[2]);
    }

    #[test]
    fn hilbert_schmidt_hand_sum() {
        let spec = box_spectrum();
        let exact: BigRational = hilbert_schmidt_partial(&spec, 3).unwrap();
        assert_eq!(exact, ratio(2401, 7200)); // 2 (1/9 + 1/64 + 1/25)
        let report = hilbert_schmidt_sum(&spec, 3).unwrap();
        assert!((report.partial_sums.last().unwrap().value - 2401.0 / 7200.0).abs() < 1e-16);
        assert_eq!(report.verdict, Verdict::Converges);
        assert!(report.tail_bound.unwrap() > 0.0);
    }

    #[test]
    fn hilbert_schmidt_linear_growth_for_constant_gaps() {
        let spec = make_power_law(one(), ratio(1, 1), 1, one()).unwrap();
        let sums: Vec<f64> = [100usize, 1000, 10000]
            .iter()
            .map(|&n| {
                hilbert_schmidt_sum(&spec, n)
                    .unwrap()
                    .partial_sums
                    .last()
                    .unwrap()
                    .value
            })
            .collect();
        assert!(sums[1] > 5.0 * sums[0]);
        assert!(sums[2] > 5.0 * sums[1]);
        let report = hilbert_schmidt_sum(&spec, 100).unwrap();
        assert_eq!(report.verdict, Verdict::Diverges);
    }

    #[test]
    fn hilbert_schmidt_needs_two_levels() {
        let spec = box_spectrum();
        assert!(hilbert_schmidt_sum(&spec, 1).is_err());
    }

    #[test]
    fn a_constant_hand_values() {
        let spec = box_spectrum();
        let a: BigRational = bound_constant_a(&spec, 2, 100).unwrap();
        assert_eq!(a, ratio(9, 5)); // (1 - 4/9)^-1
        let a1: BigRational = bound_constant_a(&spec, 1, 100).unwrap();
        assert_eq!(a1, ratio(4, 3));

        let harm = make_harmonic(one(), 1, one()).unwrap();
        let a: BigRational = bound_constant_a(&harm, 1, 100).unwrap();
        assert_eq!(a, ratio(3, 2));
    }

    #[test]
    fn a_constant_at_least_one() {
        for spec in [
            box_spectrum(),
            make_harmonic(ratio(3, 2), 1, one()).unwrap(),
            make_power_law(ratio(2, 5), ratio(3, 1), 1, one()).unwrap(),
        ] {
            for n in 1..=6 {
                let a: f64 = bound_constant_a(&spec, n, 200).unwrap();
                assert!(a >= 1.0);
            }
        }
    }

    #[test]
    fn b_constant_hand_values() {
        let spec = box_spectrum();
        let b: BigRational = bound_constant_b(&spec, 2, 100).unwrap();
        assert_eq!(b, ratio(243, 40)); // 3 * (9/5) * (9/8)

        let harm = make_harmonic(one(), 1, one()).unwrap();
        let b: BigRational = bound_constant_b(&harm, 2, 100).unwrap();
        assert_eq!(b, ratio(25, 8));

        assert!(bound_constant_b::<f64>(&spec, 1, 100).is_err());
    }

    #[test]
    fn explicit_spectrum_too_short_for_bounds() {
        let spec = from_list(vec![ratio(1, 1), ratio(4, 1), ratio(9, 1)], 1, one()).unwrap();
        assert!(matches!(
            bound_constant_a::<f64>(&spec, 3, 10),
            Err(Error::IndexOutOfRange { .. })
        ));
        // N = 2 still works: values exist beyond it.
        let a: f64 = bound_constant_a(&spec, 2, 10).unwrap();
        assert!((a - 1.8).abs() < 1e-15);
    }

    #[test]
    fn scan_catches_negative_prefix_spectra() {
        // With a negative prefix the monotonicity argument behind the
        // analytic argmax breaks; the finite scan must turn that into a hard
        // error instead of returning a wrong constant.
        let spec = from_list(
            vec![ratio(-2, 1), ratio(-1, 1), ratio(1, 1), ratio(2, 1)],
            1,
            one(),
        )
        .unwrap();
        assert!(matches!(
            bound_constant_a::<BigRational>(&spec, 1, 4),
            Err(Error::ScanDisagreement { .. })
        ));
    }

    #[test]
    fn zero_mode_skips_zero_level() {
        use crate::scalar::Arithmetic;
        use crate::spectra::SpectrumKind;
        let spec = Spectrum::new(
            SpectrumKind::Explicit {
                values: vec![ratio(0, 1), ratio(1, 1), ratio(2, 1)],
            },
            1,
            one(),
            Arithmetic::ExactRational,
            true,
        )
        .unwrap();
        let exact: BigRational = inverse_square_partial(&spec, 3).unwrap();
        assert_eq!(exact, ratio(5, 4)); // 1/1 + 1/4, zero level skipped
    }
}
