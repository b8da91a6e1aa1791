//! Fillings, charge vectors and 2×2 K-matrices.
//!
//! A K-matrix `[[m, l], [l, n]]` with charge vector `(t₁, t₂)` has filling
//!
//! ```text
//! ν = (n·t₁² + m·t₂² − 2·l·t₁·t₂) / (m·n − l²)
//! ```
//!
//! and `m·n − l²` counts its distinct excitations, so two matrices with the
//! same `ν` and different determinants describe different phases.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::int::{lit, sq, Int};
use crate::ntheory::gcd;

/// A positive rational `p/q`, always stored in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filling<T> {
    p: T,
    q: T,
}

impl<T: Int> Filling<T> {
    /// Builds `p/q`, reducing it. Both parts must be positive.
    pub fn new(p: T, q: T) -> Result<Self> {
        if !p.is_positive() || !q.is_positive() {
            return Err(Error::InvalidFilling {
                p: p.to_string(),
                q: q.to_string(),
            });
        }
        let g = gcd(&p, &q);
        Ok(Self { p: p / g.clone(), q: q / g })
    }

    pub fn integer(p: T) -> Result<Self> {
        Self::new(p, T::one())
    }

    /// Parses `"p/q"` or a bare integer. The flag reports whether the input
    /// was not already in lowest terms.
    pub fn parse(s: &str) -> Result<(Self, bool)> {
        let bad = || Error::ParseFilling(s.to_string());
        let num = |part: &str| T::from_str_radix(part.trim(), 10).map_err(|_| bad());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (num(p)?, num(q)?),
            None => (num(s)?, T::one()),
        };
        let was_reduced = gcd(&p, &q).is_one();
        Ok((Self::new(p, q)?, !was_reduced))
    }

    pub fn p(&self) -> &T {
        &self.p
    }

    pub fn q(&self) -> &T {
        &self.q
    }

    pub fn is_integer(&self) -> bool {
        self.q.is_one()
    }

    pub fn to_ratio(&self) -> Ratio<T> {
        Ratio::new_raw(self.p.clone(), self.q.clone())
    }

    pub fn from_ratio(r: &Ratio<T>) -> Result<Self> {
        Self::new(r.numer().clone(), r.denom().clone())
    }

    /// `ν / c` for a positive integer `c`.
    pub fn divided_by(&self, c: &T) -> Result<Self> {
        Self::new(self.p.clone(), self.q.clone() * c.clone())
    }
}

impl<T: Int> PartialOrd for Filling<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Int> Ord for Filling<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.p.clone() * other.q.clone()).cmp(&(other.p.clone() * self.q.clone()))
    }
}

impl<T: fmt::Display> fmt::Display for Filling<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Charge vector `(t₁, t₂)`: nonnegative, not both zero, not necessarily
/// coprime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChargeVector<T> {
    t1: T,
    t2: T,
}

impl<T: Int> ChargeVector<T> {
    pub fn new(t1: T, t2: T) -> Result<Self> {
        if t1.is_negative() || t2.is_negative() || (t1.is_zero() && t2.is_zero()) {
            return Err(Error::InvalidCharge {
                t1: t1.to_string(),
                t2: t2.to_string(),
            });
        }
        Ok(Self { t1, t2 })
    }

    pub fn t1(&self) -> &T {
        &self.t1
    }

    pub fn t2(&self) -> &T {
        &self.t2
    }

    /// `(t₂, t₁)`.
    pub fn swapped(&self) -> Self {
        Self {
            t1: self.t2.clone(),
            t2: self.t1.clone(),
        }
    }

    pub fn is(&self, t1: i64, t2: i64) -> bool {
        self.t1 == lit(t1) && self.t2 == lit(t2)
    }
}

impl<T: fmt::Display> fmt::Display for ChargeVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t1, self.t2)
    }
}

/// Parity of the diagonal entries; `l` plays no role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityClass {
    /// `m` and `n` both even.
    Bosonic,
    /// `m` and `n` both odd.
    Fermionic,
    Mixed,
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bosonic => "bosonic",
            Self::Fermionic => "fermionic",
            Self::Mixed => "mixed",
        })
    }
}

/// The symmetric matrix `[[m, l], [l, n]]`. Any integers may be stored;
/// [`KMatrix::is_valid_state`] says whether they form an admissible state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KMatrix<T> {
    pub m: T,
    pub n: T,
    pub l: T,
}

impl<T: Int> KMatrix<T> {
    pub fn new(m: T, n: T, l: T) -> Self {
        Self { m, n, l }
    }

    /// Signed `m·n − l²`.
    pub fn determinant(&self) -> T {
        self.m.clone() * self.n.clone() - sq(&self.l)
    }

    /// `m, n >= 1`, `l >= 0` and `m·n − l² >= 1`.
    pub fn is_valid_state(&self) -> bool {
        self.m.is_positive()
            && self.n.is_positive()
            && !self.l.is_negative()
            && self.determinant().is_positive()
    }

    /// `n·t₁² + m·t₂² − 2·l·t₁·t₂`.
    pub fn filling_numerator(&self, t: &ChargeVector<T>) -> T {
        self.n.clone() * sq(&t.t1) + self.m.clone() * sq(&t.t2)
            - lit::<T>(2) * self.l.clone() * t.t1.clone() * t.t2.clone()
    }

    pub fn filling_fraction(&self, t: &ChargeVector<T>) -> Result<Filling<T>> {
        if !self.is_valid_state() {
            return Err(Error::InvalidState(self.to_string()));
        }
        let numerator = self.filling_numerator(t);
        if !numerator.is_positive() {
            return Err(Error::NonPositiveNumerator {
                kmatrix: self.to_string(),
                numerator: numerator.to_string(),
            });
        }
        Filling::new(numerator, self.determinant())
    }

    /// `p·(m·n − l²) − q·(n·t₁² + m·t₂² − 2·l·t₁·t₂)`; zero exactly when
    /// `(self, t)` produces `nu`.
    pub fn diophantine_residual(&self, t: &ChargeVector<T>, nu: &Filling<T>) -> T {
        nu.p.clone() * self.determinant() - nu.q.clone() * self.filling_numerator(t)
    }

    pub fn parity_class(&self) -> ParityClass {
        match (self.m.is_even(), self.n.is_even()) {
            (true, true) => ParityClass::Bosonic,
            (false, false) => ParityClass::Fermionic,
            _ => ParityClass::Mixed,
        }
    }

    /// `(n, m, l)`, the partner of [`ChargeVector::swapped`].
    pub fn swapped(&self) -> Self {
        Self::new(self.n.clone(), self.m.clone(), self.l.clone())
    }

    /// Every entry multiplied by `c`.
    pub fn scaled(&self, c: &T) -> Self {
        Self::new(
            self.m.clone() * c.clone(),
            self.n.clone() * c.clone(),
            self.l.clone() * c.clone(),
        )
    }
}

impl<T: fmt::Display> fmt::Display for KMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.m, self.n, self.l)
    }
}

/// Construction family that produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `[[m, pm−q], [pm−q, p(pm−q)]]` at charge (1, 0).
    ChargeOneZero,
    /// `(m, α²n, αl)` applied to a charge-(1, 0) solution.
    ChargeOneZeroAmplified,
    /// Charge (1, 1), `−q` a square mod `p`: det `q·t²`.
    ChargeOneOneResidue,
    /// Charge (1, 1), `l₀`/`u` parametrization: det `u·q·t²`.
    ChargeOneOneNonResidue,
    /// `ν = 1` at charge (1, 1) from `(m−1)(n−1) = (l−1)²`.
    UnitFactorization,
    /// Integer filling `p >= 2`, general charge: det `(p−1)·t₁²·β²`.
    IntegerGeneral,
    /// Filling 1, general charge: det `t₁²·β²`.
    UnityGeneral,
    /// Even-entry family: integer solution at `p·α` scaled by `q·α`.
    Bosonic,
    /// Found by search rather than construction.
    Enumerated,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Self::ChargeOneZero => "t10",
            Self::ChargeOneZeroAmplified => "t10_amplified",
            Self::ChargeOneOneResidue => "t11_residue",
            Self::ChargeOneOneNonResidue => "t11_nonresidue",
            Self::UnitFactorization => "nu1_factorization",
            Self::IntegerGeneral => "integer_general",
            Self::UnityGeneral => "unity_general",
            Self::Bosonic => "bosonic",
            Self::Enumerated => "enumerated",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Intermediate values of the construction that produced a solution. Only
/// the fields used by `family` are set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstructionTrace<T> {
    pub family: Family,
    pub k: Option<T>,
    pub s: Option<T>,
    pub x: Option<T>,
    pub rho: Option<T>,
    pub a: Option<T>,
    pub b: Option<T>,
    pub t: Option<T>,
    pub u: Option<T>,
    pub l0: Option<T>,
    pub h: Option<T>,
    pub alpha: Option<T>,
    pub beta: Option<T>,
    /// Common factor applied to an integer-filling solution, if any.
    pub scale: Option<T>,
    /// Set when the charge vector was swapped to make `t₁ >= 1`.
    pub swapped: bool,
}

impl<T> ConstructionTrace<T> {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            k: None,
            s: None,
            x: None,
            rho: None,
            a: None,
            b: None,
            t: None,
            u: None,
            l0: None,
            h: None,
            alpha: None,
            beta: None,
            scale: None,
            swapped: false,
        }
    }

    /// Named fields that are set, in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, &T)> {
        [
            ("k", &self.k),
            ("s", &self.s),
            ("x", &self.x),
            ("rho", &self.rho),
            ("a", &self.a),
            ("b", &self.b),
            ("t", &self.t),
            ("u", &self.u),
            ("l0", &self.l0),
            ("h", &self.h),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("scale", &self.scale),
        ]
        .into_iter()
        .filter_map(|(name, v)| v.as_ref().map(|v| (name, v)))
        .collect()
    }
}

/// A K-matrix together with its determinant, filling and charge vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution<T> {
    pub kmatrix: KMatrix<T>,
    pub det: T,
    pub nu: Filling<T>,
    pub charge: ChargeVector<T>,
    pub trace: Option<ConstructionTrace<T>>,
}

impl<T: Int> Solution<T> {
    /// Wraps `kmatrix` after checking that it is valid and produces `nu`.
    pub fn checked(
        kmatrix: KMatrix<T>,
        nu: Filling<T>,
        charge: ChargeVector<T>,
        trace: Option<ConstructionTrace<T>>,
    ) -> Result<Self> {
        let s = Self {
            det: kmatrix.determinant(),
            kmatrix,
            nu,
            charge,
            trace,
        };
        if verify_solution(&s) {
            Ok(s)
        } else {
            Err(Error::Unverified(format!("{s} for nu={} t={}", s.nu, s.charge)))
        }
    }

    pub fn verify(&self) -> bool {
        verify_solution(self)
    }
}

/// Valid state, stored determinant correct, zero residual.
pub fn verify_solution<T: Int>(s: &Solution<T>) -> bool {
    s.kmatrix.is_valid_state()
        && s.kmatrix.determinant() == s.det
        && s.kmatrix.diophantine_residual(&s.charge, &s.nu).is_zero()
}

impl<T: fmt::Display> fmt::Display for Solution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.kmatrix.m, self.kmatrix.n, self.kmatrix.l, self.det
        )
    }
}
