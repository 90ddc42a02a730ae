//! Hamiltonian spectral data: the eigenvalue sequence `E_s`, its degeneracy
//! `M`, and the `hbar` convention. Every operator in the crate is built from a
//! [`Spectrum`] and nothing else.

use num::rational::BigRational;
use num::traits::{Signed, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::{ratio, Arithmetic, Scalar};

/// Energy level `s >= 1` with degeneracy label `r` in `1..=M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex {
    pub s: usize,
    pub r: usize,
}

impl BasisIndex {
    pub fn new(s: usize, r: usize) -> Self {
        debug_assert!(s >= 1 && r >= 1);
        BasisIndex { s, r }
    }

    /// Flat position in an `N*M` truncation: whole levels stay contiguous.
    pub fn flat(&self, degeneracy: usize) -> usize {
        (self.s - 1) * degeneracy + (self.r - 1)
    }

    pub fn from_flat(flat: usize, degeneracy: usize) -> Self {
        BasisIndex {
            s: flat / degeneracy + 1,
            r: flat % degeneracy + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumKind {
    /// `E_s = c * s^p`, `c > 0`, `p > 0`.
    PowerLaw { c: BigRational, p: BigRational },
    /// `E_s = hbar * omega0 * (s - 1/2)`.
    Harmonic { omega0: BigRational },
    /// `E_s = scale * s^2` (particle-in-a-box scaling).
    Box { scale: BigRational },
    /// Finite list of eigenvalues, validated eagerly.
    Explicit { values: Vec<BigRational> },
}

/// Immutable spectral data; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    kind: SpectrumKind,
    degeneracy: usize,
    hbar: BigRational,
    exactness: Arithmetic,
    zero_mode: bool,
}

impl Spectrum {
    pub fn new(
        kind: SpectrumKind,
        degeneracy: usize,
        hbar: BigRational,
        exactness: Arithmetic,
        zero_mode: bool,
    ) -> Result<Self> {
        if degeneracy < 1 {
            return Err(Error::InvalidParameter("degeneracy M must be >= 1".into()));
        }
        if !hbar.is_positive() {
            return Err(Error::InvalidParameter("hbar must be positive".into()));
        }
        match &kind {
            SpectrumKind::PowerLaw { c, p } => {
                if !c.is_positive() || !p.is_positive() {
                    return Err(Error::InvalidParameter(
                        "power-law spectrum needs c > 0 and p > 0".into(),
                    ));
                }
                if exactness == Arithmetic::ExactRational && !p.is_integer() {
                    return Err(Error::ExactUnavailable(format!(
                        "power-law exponent {p} is not an integer; use float64"
                    )));
                }
            }
            SpectrumKind::Harmonic { omega0 } => {
                if !omega0.is_positive() {
                    return Err(Error::InvalidParameter("omega0 must be positive".into()));
                }
            }
            SpectrumKind::Box { scale } => {
                if !scale.is_positive() {
                    return Err(Error::InvalidParameter("box scale must be positive".into()));
                }
            }
            SpectrumKind::Explicit { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidParameter(
                        "explicit spectrum needs at least one eigenvalue".into(),
                    ));
                }
                for (i, pair) in values.windows(2).enumerate() {
                    if pair[1] <= pair[0] {
                        return Err(Error::NotStrictlyIncreasing { index: i + 2 });
                    }
                }
                if !zero_mode {
                    if let Some(i) = values.iter().position(|v| v.is_zero()) {
                        return Err(Error::ZeroEigenvalue { index: i + 1 });
                    }
                }
            }
        }
        Ok(Spectrum {
            kind,
            degeneracy,
            hbar,
            exactness,
            zero_mode,
        })
    }

    pub fn power_law(
        c: BigRational,
        p: BigRational,
        degeneracy: usize,
        hbar: BigRational,
    ) -> Result<Self> {
        let exactness = if p.is_integer() {
            Arithmetic::ExactRational
        } else {
            Arithmetic::Float64
        };
        Spectrum::new(
            SpectrumKind::PowerLaw { c, p },
            degeneracy,
            hbar,
            exactness,
            false,
        )
    }

    pub fn harmonic(omega0: BigRational, degeneracy: usize, hbar: BigRational) -> Result<Self> {
        Spectrum::new(
            SpectrumKind::Harmonic { omega0 },
            degeneracy,
            hbar,
            Arithmetic::ExactRational,
            false,
        )
    }

    pub fn box_like(scale: BigRational, degeneracy: usize, hbar: BigRational) -> Result<Self> {
        Spectrum::new(
            SpectrumKind::Box { scale },
            degeneracy,
            hbar,
            Arithmetic::ExactRational,
            false,
        )
    }

    pub fn from_list(
        values: Vec<BigRational>,
        degeneracy: usize,
        hbar: BigRational,
    ) -> Result<Self> {
        Spectrum::new(
            SpectrumKind::Explicit { values },
            degeneracy,
            hbar,
            Arithmetic::ExactRational,
            false,
        )
    }

    pub fn with_exactness(mut self, exactness: Arithmetic) -> Result<Self> {
        if exactness == Arithmetic::ExactRational {
            if let SpectrumKind::PowerLaw { p, .. } = &self.kind {
                if !p.is_integer() {
                    return Err(Error::ExactUnavailable(format!(
                        "power-law exponent {p} is not an integer; use float64"
                    )));
                }
            }
        }
        self.exactness = exactness;
        Ok(self)
    }

    pub fn with_zero_mode(mut self, zero_mode: bool) -> Result<Self> {
        self.zero_mode = zero_mode;
        // Re-validate: turning zero_mode off may invalidate an explicit list.
        Spectrum::new(
            self.kind.clone(),
            self.degeneracy,
            self.hbar.clone(),
            self.exactness,
            zero_mode,
        )
    }

    pub fn kind(&self) -> &SpectrumKind {
        &self.kind
    }

    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    pub fn exactness(&self) -> Arithmetic {
        self.exactness
    }

    pub fn zero_mode(&self) -> bool {
        self.zero_mode
    }

    pub fn hbar<S: Scalar>(&self) -> S {
        S::from_rational(&self.hbar)
    }

    pub fn hbar_rational(&self) -> &BigRational {
        &self.hbar
    }

    /// Number of levels for explicit spectra; `None` for the unbounded families.
    pub fn level_count(&self) -> Option<usize> {
        match &self.kind {
            SpectrumKind::Explicit { values } => Some(values.len()),
            _ => None,
        }
    }

    /// `E_s` in the requested arithmetic, `s >= 1`.
    pub fn eigenvalue<S: Scalar>(&self, s: usize) -> Result<S> {
        if s < 1 {
            return Err(Error::InvalidParameter("level index s starts at 1".into()));
        }
        if let Some(len) = self.level_count() {
            if s > len {
                return Err(Error::IndexOutOfRange { index: s, len });
            }
        }
        match &self.kind {
            SpectrumKind::PowerLaw { c, p } => {
                let base = S::from_u64(s as u64);
                let powed = S::try_pow(&base, p).ok_or_else(|| {
                    Error::ExactUnavailable(format!("s^{p} is irrational for s = {s}"))
                })?;
                Ok(S::from_rational(c) * powed)
            }
            SpectrumKind::Harmonic { omega0 } => {
                let half = S::from_rational(&ratio(1, 2));
                Ok(S::from_rational(&self.hbar)
                    * S::from_rational(omega0)
                    * (S::from_u64(s as u64) - half))
            }
            SpectrumKind::Box { scale } => {
                let sq = S::from_u64(s as u64) * S::from_u64(s as u64);
                Ok(S::from_rational(scale) * sq)
            }
            SpectrumKind::Explicit { values } => Ok(S::from_rational(&values[s - 1])),
        }
    }

    /// Checks the ordering and zero-mode invariants on the prefix `1..=n`.
    pub fn verify_prefix(&self, n: usize) -> Result<()> {
        let n = match self.level_count() {
            Some(len) => n.min(len),
            None => n,
        };
        let mut prev: Option<f64> = None;
        for s in 1..=n {
            let e: f64 = self.eigenvalue(s)?;
            if let Some(p) = prev {
                if e <= p {
                    return Err(Error::NotStrictlyIncreasing { index: s });
                }
            }
            if !self.zero_mode && e == 0.0 {
                return Err(Error::ZeroEigenvalue { index: s });
            }
            prev = Some(e);
        }
        Ok(())
    }

    /// Content hash of the full spectral data, used as provenance id.
    pub fn id(&self) -> String {
        let mut h = Sha256::new();
        match &self.kind {
            SpectrumKind::PowerLaw { c, p } => {
                h.update(b"power-law");
                h.update(c.to_string().as_bytes());
                h.update(b"|");
                h.update(p.to_string().as_bytes());
            }
            SpectrumKind::Harmonic { omega0 } => {
                h.update(b"harmonic");
                h.update(omega0.to_string().as_bytes());
            }
            SpectrumKind::Box { scale } => {
                h.update(b"box");
                h.update(scale.to_string().as_bytes());
            }
            SpectrumKind::Explicit { values } => {
                h.update(b"explicit");
                for v in values {
                    h.update(v.to_string().as_bytes());
                    h.update(b",");
                }
            }
        }
        h.update(format!(
            "|M={}|hbar={}|{}|zero={}",
            self.degeneracy, self.hbar, self.exactness, self.zero_mode
        ));
        let digest = h.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// `E_s = c * s^p`. Exact mode is selected automatically when `p` is an
/// integer; fractional exponents force float64.
pub fn make_power_law(
    c: BigRational,
    p: BigRational,
    degeneracy: usize,
    hbar: BigRational,
) -> Result<Spectrum> {
    Spectrum::power_law(c, p, degeneracy, hbar)
}

/// Oscillator levels `E_s = hbar * omega0 * (s - 1/2)`, ground state at `s = 1`.
pub fn make_harmonic(
    omega0: BigRational,
    degeneracy: usize,
    hbar: BigRational,
) -> Result<Spectrum> {
    Spectrum::harmonic(omega0, degeneracy, hbar)
}

/// Explicit eigenvalue list; ordering and zero checks run eagerly.
pub fn from_list(
    values: Vec<BigRational>,
    degeneracy: usize,
    hbar: BigRational,
) -> Result<Spectrum> {
    Spectrum::from_list(values, degeneracy, hbar)
}
