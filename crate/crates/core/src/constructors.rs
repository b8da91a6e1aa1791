//! Closed-form K-matrix families.
//!
//! Each constructor returns a [`Solution`] that has already passed
//! [`verify_solution`](crate::kmatrix::verify_solution), together with a
//! [`ConstructionTrace`] recording the parameters it used. [`construct`] is
//! the general entry point: it works for every filling and charge vector and
//! can push the determinant past any threshold.

use crate::error::{param, Error, Result};
use crate::int::{lit, sq, Int};
use crate::kmatrix::{ChargeVector, ConstructionTrace, Family, Filling, KMatrix, Solution};
use crate::ntheory::{exact_sqrt, isqrt, quadratic_residue_witness, smallest_positive_root};

fn require_positive<T: Int>(name: &'static str, v: &T) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(param(name, format!("must be >= 1, got {v}")))
    }
}

fn unit_charge<T: Int>(t1: i64, t2: i64) -> ChargeVector<T> {
    ChargeVector::new(lit(t1), lit(t2)).expect("unit charge vectors are valid")
}

/// Smallest `β >= 1` with `coef·β² > min_det`.
pub fn smallest_beta<T: Int>(coef: &T, min_det: &T) -> Result<T> {
    require_positive("coefficient", coef)?;
    if min_det.is_negative() {
        return Err(param("min_det", format!("must be >= 0, got {min_det}")));
    }
    // coef·β² > C  ⇔  β² > ⌊C / coef⌋
    Ok(isqrt(&min_det.div_floor(coef))? + T::one())
}

/// Charge (1, 0): `K = [[m, pm−q], [pm−q, p(pm−q)]]`, determinant `q(pm−q)`.
pub fn construct_t10<T: Int>(nu: &Filling<T>, m: &T) -> Result<Solution<T>> {
    let (p, q) = (nu.p().clone(), nu.q().clone());
    let off = p.clone() * m.clone() - q;
    if !off.is_positive() {
        return Err(param("m", format!("need p·m − q >= 1, got {off}")));
    }
    let k = KMatrix::new(m.clone(), p * off.clone(), off);
    Solution::checked(k, nu.clone(), unit_charge(1, 0), Some(ConstructionTrace::new(Family::ChargeOneZero)))
}

/// Smallest `m` for which [`construct_t10`] has determinant above `min_det`.
pub fn smallest_t10_m<T: Int>(nu: &Filling<T>, min_det: &T) -> T {
    let (p, q) = (nu.p(), nu.q());
    // q(pm − q) > C with pm − q >= 1  ⇔  pm − q >= ⌊max(C, 0)/q⌋ + 1
    let need = min_det.clone().max(T::zero()).div_floor(q) + T::one();
    (q.clone() + need).div_ceil(p)
}

/// `(m, n, l) → (m, α²n, αl)` for a charge-(1, 0) solution.
pub fn amplify_t10<T: Int>(s: &Solution<T>, alpha: &T) -> Result<Solution<T>> {
    if !s.charge.is(1, 0) {
        return Err(Error::WrongCharge {
            expected: "(1, 0)",
            got: s.charge.to_string(),
        });
    }
    require_positive("alpha", alpha)?;
    if !s.verify() {
        return Err(Error::Unverified(s.to_string()));
    }
    let k = KMatrix::new(
        s.kmatrix.m.clone(),
        sq(alpha) * s.kmatrix.n.clone(),
        alpha.clone() * s.kmatrix.l.clone(),
    );
    let mut trace = ConstructionTrace::new(Family::ChargeOneZeroAmplified);
    trace.alpha = Some(alpha.clone());
    Solution::checked(k, s.nu.clone(), s.charge.clone(), Some(trace))
}

/// Charge (1, 1), member `t_index` of the residue or non-residue family.
///
/// When `−q` is a square mod `p` with smallest positive root `b`:
/// `a = b + p·t`, `l = (ab + q)/p`, `m = t·a + l`, `n = (b² + q)/p`,
/// determinant `q·t²`. Otherwise, with `l₀` the least value making
/// `u = p·l₀ − q >= 1`: `m = l₀ + t·u·(p·t + 2)`, `n = l₀`, `l = l₀ + t·u`,
/// determinant `u·q·t²`.
pub fn construct_t11<T: Int>(nu: &Filling<T>, t_index: &T) -> Result<Solution<T>> {
    require_positive("t_index", t_index)?;
    let (p, q) = (nu.p().clone(), nu.q().clone());
    let t = t_index.clone();
    let charge = unit_charge(1, 1);

    if quadratic_residue_witness(&-q.clone(), &p)?.is_some() {
        let b = smallest_positive_root(&-q.clone(), &p)?.expect("a residue has a positive root");
        let a = b.clone() + p.clone() * t.clone();
        let l = (a.clone() * b.clone() + q.clone()) / p.clone();
        let m = t.clone() * a.clone() + l.clone();
        let n = (sq(&b) + q) / p;
        let s = t.clone() * (a.clone() + b.clone());
        let mut trace = ConstructionTrace::new(Family::ChargeOneOneResidue);
        trace.k = Some(sq(&t));
        trace.x = Some(sq(&a) + sq(&b));
        trace.rho = Some(s.clone());
        trace.s = Some(s);
        trace.h = Some(b.clone());
        trace.a = Some(a);
        trace.b = Some(b);
        trace.t = Some(t);
        return Solution::checked(KMatrix::new(m, n, l), nu.clone(), charge, Some(trace));
    }

    let l0 = q.div_floor(&p) + T::one();
    let u = p.clone() * l0.clone() - q;
    let tu = t.clone() * u.clone();
    let m = l0.clone() + tu.clone() * (p.clone() * t.clone() + lit::<T>(2));
    let l = l0.clone() + tu;
    let mut trace = ConstructionTrace::new(Family::ChargeOneOneNonResidue);
    trace.a = Some(T::one() + p * t.clone());
    trace.b = Some(T::one());
    trace.t = Some(t);
    trace.u = Some(u);
    trace.l0 = Some(l0.clone());
    Solution::checked(KMatrix::new(m, l0, l), nu.clone(), charge, Some(trace))
}

/// Smallest `t_index` for which [`construct_t11`] has determinant above
/// `min_det`.
pub fn smallest_t11_index<T: Int>(nu: &Filling<T>, min_det: &T) -> Result<T> {
    let first = construct_t11(nu, &T::one())?;
    // det(t) = det(1)·t²
    smallest_beta(&first.det, &min_det.clone().max(T::zero()))
}

/// `ν = 1` at charge (1, 1) from a factorization `(m−1)(n−1) = (l−1)²`:
/// `(m, n, l) = (1 + d₁, 1 + d₂, 1 + √(d₁d₂))`.
pub fn construct_nu1_t11<T: Int>(d1: &T, d2: &T) -> Result<Solution<T>> {
    require_positive("d1", d1)?;
    require_positive("d2", d2)?;
    let product = d1.clone() * d2.clone();
    let r = exact_sqrt(&product).ok_or_else(|| Error::NotPerfectSquare(product.to_string()))?;
    let k = KMatrix::new(T::one() + d1.clone(), T::one() + d2.clone(), T::one() + r);
    if !k.is_valid_state() {
        return Err(Error::InvalidState(k.to_string()));
    }
    Solution::checked(
        k,
        Filling::integer(T::one())?,
        unit_charge(1, 1),
        Some(ConstructionTrace::new(Family::UnitFactorization)),
    )
}

fn require_t1<T: Int>(t: &ChargeVector<T>) -> Result<()> {
    if t.t1().is_positive() {
        Ok(())
    } else {
        Err(param("t1", "must be >= 1; swap the charge vector first"))
    }
}

/// Integer filling `p >= 2` at any charge with `t₁ >= 1`:
///
/// ```text
/// m = t₁²
/// l = (p−1)·t₁·β + t₁·t₂
/// n = (p−1)·p·β² + 2·(p−1)·t₂·β + t₂²
/// ```
///
/// with determinant `(p−1)·t₁²·β²`.
pub fn construct_integer_general<T: Int>(p: &T, t: &ChargeVector<T>, beta: &T) -> Result<Solution<T>> {
    if *p < lit(2) {
        return Err(param("p", format!("must be >= 2, got {p}")));
    }
    require_t1(t)?;
    require_positive("beta", beta)?;
    let (t1, t2) = (t.t1().clone(), t.t2().clone());
    let pm1 = p.clone() - T::one();
    let m = sq(&t1);
    let l = pm1.clone() * t1.clone() * beta.clone() + t1 * t2.clone();
    let n = pm1.clone() * p.clone() * sq(beta) + lit::<T>(2) * pm1 * t2.clone() * beta.clone() + sq(&t2);
    let mut trace = ConstructionTrace::new(Family::IntegerGeneral);
    trace.beta = Some(beta.clone());
    Solution::checked(KMatrix::new(m, n, l), Filling::integer(p.clone())?, t.clone(), Some(trace))
}

/// Filling 1 at any charge with `t₁ >= 1`:
///
/// ```text
/// m = 2·t₁²
/// l = t₁·β + 2·t₁·t₂
/// n = β² + 2·t₂·β + 2·t₂²
/// ```
///
/// with determinant `t₁²·β²`.
pub fn construct_unity_general<T: Int>(t: &ChargeVector<T>, beta: &T) -> Result<Solution<T>> {
    require_t1(t)?;
    require_positive("beta", beta)?;
    let two = lit::<T>(2);
    let (t1, t2) = (t.t1().clone(), t.t2().clone());
    let m = two.clone() * sq(&t1);
    let l = t1.clone() * beta.clone() + two.clone() * t1 * t2.clone();
    let n = sq(beta) + two.clone() * t2.clone() * beta.clone() + two * sq(&t2);
    let mut trace = ConstructionTrace::new(Family::UnityGeneral);
    trace.beta = Some(beta.clone());
    Solution::checked(KMatrix::new(m, n, l), Filling::integer(T::one())?, t.clone(), Some(trace))
}

/// Multiplies every entry by `c`, dividing the filling by `c`.
fn scale_solution<T: Int>(s: &Solution<T>, c: &T) -> Result<Solution<T>> {
    require_positive("scale", c)?;
    let mut trace = s.trace.clone();
    if let Some(tr) = trace.as_mut() {
        tr.scale = Some(tr.scale.clone().unwrap_or_else(T::one) * c.clone());
    }
    Solution::checked(s.kmatrix.scaled(c), s.nu.divided_by(c)?, s.charge.clone(), trace)
}

/// `(m, n, l) → (qm, qn, ql)` takes integer filling `p` to `p/q`.
pub fn scale_to_rational<T: Int>(s: &Solution<T>, q: &T) -> Result<Solution<T>> {
    if !s.nu.is_integer() {
        return Err(Error::NonIntegerFilling(s.nu.to_string()));
    }
    if !s.verify() {
        return Err(Error::Unverified(s.to_string()));
    }
    scale_solution(s, q)
}

/// Swaps a solution back after it was built for `t.swapped()`.
fn unswap<T: Int>(s: Solution<T>) -> Result<Solution<T>> {
    let mut trace = s.trace;
    if let Some(tr) = trace.as_mut() {
        tr.swapped = true;
    }
    Solution::checked(s.kmatrix.swapped(), s.nu, s.charge.swapped(), trace)
}

/// A verified solution for any filling and charge vector with determinant
/// strictly above `min_det`.
///
/// Works at charge `(t₁, t₂)` with `t₁ >= 1` (swapping first if needed):
/// builds the integer-filling family at `p` (or the filling-1 family when
/// `p = 1`) with the least `β` clearing the threshold after scaling by `q`,
/// then scales by `q`.
pub fn construct<T: Int>(nu: &Filling<T>, t: &ChargeVector<T>, min_det: &T) -> Result<Solution<T>> {
    if t.t1().is_zero() {
        return unswap(construct(nu, &t.swapped(), min_det)?);
    }
    let (p, q) = (nu.p(), nu.q());
    let t1_sq = sq(t.t1());
    let integral = if p.is_one() {
        let beta = smallest_beta(&(t1_sq * sq(q)), min_det)?;
        construct_unity_general(t, &beta)?
    } else {
        let coef = (p.clone() - T::one()) * t1_sq * sq(q);
        let beta = smallest_beta(&coef, min_det)?;
        construct_integer_general(p, t, &beta)?
    };
    scale_solution(&integral, q)
}

/// Charge `(t₁, 0)`: the charge-(1, 0) family built for `p/(t₁²q)` produces
/// `p/q` at `(t₁, 0)` on the same matrix.
pub fn construct_axis<T: Int>(nu: &Filling<T>, t1: &T, m: &T) -> Result<Solution<T>> {
    require_positive("t1", t1)?;
    let scaled = nu.divided_by(&sq(t1))?;
    let base = construct_t10(&scaled, m)?;
    let charge = ChargeVector::new(t1.clone(), T::zero())?;
    Solution::checked(base.kmatrix, nu.clone(), charge, base.trace)
}

/// Solution with `m`, `n` and `l` all even, determinant above `min_det`.
///
/// Builds the integer family at filling `p·α` (even `α >= 2`) and scales it by
/// `q·α`: the filling drops back to `p/q` and every entry picks up the even
/// factor. Determinant `(αq)²·(pα−1)·t₁²·β²`.
pub fn bosonic_construct<T: Int>(
    nu: &Filling<T>,
    t: &ChargeVector<T>,
    min_det: &T,
    alpha: &T,
) -> Result<Solution<T>> {
    if !(alpha.is_positive() && alpha.is_even()) {
        return Err(param("alpha", format!("must be even and >= 2, got {alpha}")));
    }
    if t.t1().is_zero() {
        return unswap(bosonic_construct(nu, &t.swapped(), min_det, alpha)?);
    }
    let (p, q) = (nu.p(), nu.q());
    let inner_p = p.clone() * alpha.clone();
    let factor = q.clone() * alpha.clone();
    let coef = sq(&factor) * (inner_p.clone() - T::one()) * sq(t.t1());
    let beta = smallest_beta(&coef, min_det)?;
    let inner = construct_integer_general(&inner_p, t, &beta)?;
    let mut out = scale_solution(&inner, &factor)?;
    if let Some(tr) = out.trace.as_mut() {
        tr.family = Family::Bosonic;
        tr.alpha = Some(alpha.clone());
    }
    Ok(out)
}

/// Result of [`fermionic_obstruction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FermionicReport {
    /// No K-matrix with both diagonal entries odd produces the filling.
    Obstructed,
    /// No parity argument applies.
    Unknown,
}

/// Parity obstruction for odd-diagonal matrices at charge (1, 0) or (0, 1).
///
/// At (1, 0) the filling is `n/(mn − l²)`, so `n·q = p·(mn − l²)`; with `p`
/// even and `q` odd this forces `n` even.
pub fn fermionic_obstruction<T: Int>(nu: &Filling<T>, t: &ChargeVector<T>) -> FermionicReport {
    let axis = t.is(1, 0) || t.is(0, 1);
    if axis && nu.p().is_even() && nu.q().is_odd() {
        FermionicReport::Obstructed
    } else {
        FermionicReport::Unknown
    }
}

/// Checks the recorded trace against the defining equations of its family.
/// Solutions without a trace pass trivially.
pub fn verify_trace<T: Int>(s: &Solution<T>) -> bool {
    let Some(tr) = &s.trace else {
        return true;
    };
    let (p, q) = (s.nu.p().clone(), s.nu.q().clone());
    let k = &s.kmatrix;
    let get = |v: &Option<T>| v.clone();
    match tr.family {
        Family::Enumerated => true,
        Family::ChargeOneZero => {
            let off = k.l.clone();
            k.n == p.clone() * off.clone()
                && off == p * k.m.clone() - q.clone()
                && s.det == q * off
        }
        Family::ChargeOneZeroAmplified => match get(&tr.alpha) {
            Some(alpha) => {
                k.l.is_multiple_of(&alpha)
                    && k.n.is_multiple_of(&sq(&alpha))
                    && s.det.is_multiple_of(&sq(&alpha))
            }
            None => false,
        },
        Family::ChargeOneOneResidue => {
            let (Some(a), Some(b), Some(t), Some(kk), Some(ss), Some(x), Some(rho)) = (
                get(&tr.a),
                get(&tr.b),
                get(&tr.t),
                get(&tr.k),
                get(&tr.s),
                get(&tr.x),
                get(&tr.rho),
            ) else {
                return false;
            };
            let lpq = k.l.clone() * p.clone() - q.clone();
            let key = -(sq(&p) * sq(&ss)) - lit::<T>(4) * sq(&lpq) + sq(&x);
            a.clone() - b.clone() == p.clone() * t.clone()
                && lpq == a.clone() * b.clone()
                && kk == sq(&t)
                && ss == t.clone() * (a.clone() + b.clone())
                && rho == ss
                && x == sq(&a) + sq(&b)
                && key.is_zero()
                && k.m == t.clone() * a + k.l.clone()
                && k.n == lit::<T>(2) * k.l.clone() + p * kk - k.m.clone()
                && s.det == q * sq(&t)
        }
        Family::ChargeOneOneNonResidue => {
            let (Some(a), Some(b), Some(t), Some(u), Some(l0)) =
                (get(&tr.a), get(&tr.b), get(&tr.t), get(&tr.u), get(&tr.l0))
            else {
                return false;
            };
            u.is_positive()
                && u == p.clone() * l0.clone() - q.clone()
                && a == T::one() + p.clone() * t.clone()
                && b.is_one()
                && k.l.clone() * p.clone() - q.clone() == u.clone() * a * b
                && k.n == l0
                && k.l == l0.clone() + t.clone() * u.clone()
                && k.m == l0 + t.clone() * u.clone() * (p * t.clone() + lit::<T>(2))
                && s.det == u * q * sq(&t)
        }
        Family::UnitFactorization => {
            let one = T::one();
            s.nu.is_integer()
                && s.nu.p().is_one()
                && (k.m.clone() - one.clone()) * (k.n.clone() - one.clone()) == sq(&(k.l.clone() - one))
        }
        Family::IntegerGeneral | Family::UnityGeneral | Family::Bosonic => {
            let Some(beta) = get(&tr.beta) else {
                return false;
            };
            let scale = get(&tr.scale).unwrap_or_else(T::one);
            if !(k.m.is_multiple_of(&scale) && k.n.is_multiple_of(&scale) && k.l.is_multiple_of(&scale)) {
                return false;
            }
            let mut inner = KMatrix::new(k.m.clone() / scale.clone(), k.n.clone() / scale.clone(), k.l.clone() / scale.clone());
            let mut charge = s.charge.clone();
            if tr.swapped {
                inner = inner.swapped();
                charge = charge.swapped();
            }
            let inner_nu = s.nu.to_ratio() * num_rational::Ratio::from_integer(scale.clone());
            if !inner_nu.is_integer() {
                return false;
            }
            let inner_p = inner_nu.to_integer();
            let rebuilt = if tr.family == Family::UnityGeneral {
                inner_p.is_one().then(|| construct_unity_general(&charge, &beta))
            } else {
                Some(construct_integer_general(&inner_p, &charge, &beta))
            };
            let alpha_ok = match tr.family {
                Family::Bosonic => get(&tr.alpha)
                    .is_some_and(|alpha| alpha.is_even() && scale == q * alpha.clone() && inner_p == p * alpha),
                _ => true,
            };
            alpha_ok && matches!(rebuilt, Some(Ok(r)) if r.kmatrix == inner)
        }
    }
}
