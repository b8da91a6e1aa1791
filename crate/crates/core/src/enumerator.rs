//! Complete searches.
//!
//! Everything here rests on one identity. Writing `X = p·m − q·t₁²`,
//! `Y = p·n − q·t₂²` and `R = p·l − q·t₁·t₂`,
//!
//! ```text
//! p · residual(m, n, l) = X·Y − R²
//! ```
//!
//! so a K-matrix produces `p/q` exactly when `X·Y = R²`. For a box search this
//! pins `l` to `(q·t₁·t₂ ± √(XY))/p`; with `l` fixed it turns the problem into
//! listing divisor pairs of `R²`.

use std::fmt;

use rayon::prelude::*;

use crate::error::Result;
use crate::int::{from_u64, inclusive, lit, sq, Int};
use crate::kmatrix::{ChargeVector, Filling, KMatrix, Solution};
use crate::ntheory::{exact_sqrt, isqrt};

/// Inclusive upper bounds for `m` and `n`; both start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchBox {
    pub m_max: u64,
    pub n_max: u64,
}

impl SearchBox {
    pub fn new(m_max: u64, n_max: u64) -> Self {
        Self { m_max, n_max }
    }

    pub fn square(max: u64) -> Self {
        Self::new(max, max)
    }
}

struct Equation<T> {
    p: T,
    qt1sq: T,
    qt2sq: T,
    qt1t2: T,
}

impl<T: Int> Equation<T> {
    fn new(nu: &Filling<T>, t: &ChargeVector<T>) -> Self {
        let (p, q) = (nu.p().clone(), nu.q().clone());
        Self {
            qt1sq: q.clone() * sq(t.t1()),
            qt2sq: q.clone() * sq(t.t2()),
            qt1t2: q.clone() * t.t1().clone() * t.t2().clone(),
            p,
        }
    }

    /// All admissible `l` for the cell `(m, n)`, ascending.
    fn l_values(&self, m: &T, n: &T) -> Vec<T> {
        let x = self.p.clone() * m.clone() - self.qt1sq.clone();
        let y = self.p.clone() * n.clone() - self.qt2sq.clone();
        let Some(root) = exact_sqrt(&(x * y)) else {
            return Vec::new();
        };
        let l_max = match isqrt(&(m.clone() * n.clone() - T::one())) {
            Ok(v) => v,
            Err(_) => return Vec::new(),
        };
        let mut out = Vec::with_capacity(2);
        for numer in [self.qt1t2.clone() - root.clone(), self.qt1t2.clone() + root.clone()] {
            if numer.is_negative() || !numer.is_multiple_of(&self.p) {
                continue;
            }
            let l = numer / self.p.clone();
            if l <= l_max && out.last() != Some(&l) {
                out.push(l);
            }
        }
        out
    }
}

fn wrap<T: Int>(k: KMatrix<T>, nu: &Filling<T>, t: &ChargeVector<T>) -> Solution<T> {
    let s = Solution {
        det: k.determinant(),
        kmatrix: k,
        nu: nu.clone(),
        charge: t.clone(),
        trace: None,
    };
    debug_assert!(s.verify(), "{s}");
    s
}

fn row<T: Int>(eq: &Equation<T>, nu: &Filling<T>, t: &ChargeVector<T>, m: u64, n_max: u64) -> Vec<Solution<T>> {
    let m = from_u64::<T>(m);
    let mut out = Vec::new();
    for n in inclusive(T::one(), from_u64(n_max)) {
        for l in eq.l_values(&m, &n) {
            out.push(wrap(KMatrix::new(m.clone(), n.clone(), l), nu, t));
        }
    }
    out
}

/// Every valid `(m, n, l)` in the box producing `nu` at charge `t`, sorted by
/// `(m, n, l)`.
pub fn enumerate<T: Int>(nu: &Filling<T>, t: &ChargeVector<T>, bounds: SearchBox) -> Vec<Solution<T>> {
    let eq = Equation::new(nu, t);
    (1..=bounds.m_max)
        .flat_map(|m| row(&eq, nu, t, m, bounds.n_max))
        .collect()
}

/// [`enumerate`] with the `m` range split across `jobs` worker threads. The
/// output is identical to the serial one.
pub fn enumerate_parallel<T: Int>(
    nu: &Filling<T>,
    t: &ChargeVector<T>,
    bounds: SearchBox,
    jobs: usize,
) -> Vec<Solution<T>> {
    if jobs <= 1 {
        return enumerate(nu, t, bounds);
    }
    let eq = Equation::new(nu, t);
    let run = || {
        let rows: Vec<Vec<Solution<T>>> = (1..=bounds.m_max)
            .into_par_iter()
            .map(|m| row(&eq, nu, t, m, bounds.n_max))
            .collect();
        rows.into_iter().flatten().collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(run),
        Err(_) => enumerate(nu, t, bounds),
    }
}

/// Every valid `(m, n, l0)` in the box producing `nu`, sorted by `(m, n)`.
///
/// At fixed `l` the residual is linear in `n`:
/// `n·(p·m − q·t₁²) = p·l² + q·m·t₂² − 2·q·l·t₁·t₂`.
pub fn enumerate_at_l<T: Int>(nu: &Filling<T>, t: &ChargeVector<T>, l0: &T, bounds: SearchBox) -> Vec<Solution<T>> {
    let eq = Equation::new(nu, t);
    let n_max = from_u64::<T>(bounds.n_max);
    let mut out = Vec::new();
    if l0.is_negative() {
        return out;
    }
    for m in inclusive(T::one(), from_u64(bounds.m_max)) {
        let x = eq.p.clone() * m.clone() - eq.qt1sq.clone();
        let rhs = eq.p.clone() * sq(l0) + m.clone() * eq.qt2sq.clone()
            - lit::<T>(2) * l0.clone() * eq.qt1t2.clone();
        let candidates: Vec<T> = if x.is_zero() {
            if rhs.is_zero() {
                inclusive(T::one(), n_max.clone()).collect()
            } else {
                Vec::new()
            }
        } else if rhs.is_multiple_of(&x) {
            let n = rhs / x;
            if n.is_positive() && n <= n_max {
                vec![n]
            } else {
                Vec::new()
            }
        } else {
            Vec::new()
        };
        for n in candidates {
            let k = KMatrix::new(m.clone(), n, l0.clone());
            if k.is_valid_state() {
                out.push(wrap(k, nu, t));
            }
        }
    }
    out
}

/// Which diagonal entry a [`FreeFamily`] holds fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedEntry {
    M,
    N,
}

/// One infinite line of solutions at fixed `l`: the named entry equals
/// `value`, the other runs over every integer `>= free_min`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeFamily<T> {
    pub fixed: FixedEntry,
    pub value: T,
    pub l0: T,
    pub free_min: T,
}

impl<T: Int> FreeFamily<T> {
    /// The `index`-th member, counting from `free_min`.
    pub fn member(&self, index: u64) -> KMatrix<T> {
        let free = self.free_min.clone() + from_u64::<T>(index);
        match self.fixed {
            FixedEntry::M => KMatrix::new(self.value.clone(), free, self.l0.clone()),
            FixedEntry::N => KMatrix::new(free, self.value.clone(), self.l0.clone()),
        }
    }
}

impl<T: fmt::Display> fmt::Display for FreeFamily<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fixed {
            FixedEntry::N => write!(f, "(m, {}, {}), m >= {}", self.value, self.l0, self.free_min),
            FixedEntry::M => write!(f, "({}, n, {}), n >= {}", self.value, self.l0, self.free_min),
        }
    }
}

/// Complete answer to the fixed-`l` problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedLOutcome<T> {
    /// Finitely many solutions, at least one.
    FiniteList(Vec<Solution<T>>),
    /// `R = 0` with a diagonal entry pinned: infinitely many solutions.
    InfiniteFamily(Vec<FreeFamily<T>>),
    Empty,
}

impl<T: Int> FixedLOutcome<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::FiniteList(_) => "finite_list",
            Self::InfiniteFamily(_) => "infinite_family",
            Self::Empty => "empty",
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Self::Empty)
    }

    pub fn solutions(&self) -> &[Solution<T>] {
        match self {
            Self::FiniteList(s) => s,
            _ => &[],
        }
    }

    /// Parametrization of the families, joined with `"; "`.
    pub fn family_description(&self) -> Option<String> {
        match self {
            Self::InfiniteFamily(fams) => Some(
                fams.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
            _ => None,
        }
    }
}

/// Prime factorization of `|n|` by trial division, `n != 0`.
fn factorize<T: Int>(n: &T) -> Vec<(T, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = lit::<T>(2);
    while sq(&d) <= n {
        let mut e = 0;
        while n.is_multiple_of(&d) {
            n = n / d.clone();
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d = if d == lit(2) { lit(3) } else { d + lit(2) };
    }
    if n > T::one() {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of `r²`, unsorted.
fn divisors_of_square<T: Int>(r: &T) -> Vec<T> {
    let mut divs = vec![T::one()];
    for (prime, e) in factorize(r) {
        let mut next = Vec::with_capacity(divs.len() * (2 * e as usize + 1));
        for d in &divs {
            let mut power = T::one();
            for _ in 0..=2 * e {
                next.push(d.clone() * power.clone());
                power = power * prime.clone();
            }
        }
        divs = next;
    }
    divs
}

/// All `(m, n)` with `l = l0` producing `nu` at charge `t`.
///
/// With `R = p·l0 − q·t₁·t₂ ≠ 0` the solutions are read off the signed
/// divisor pairs `d₁·d₂ = R²` via `m = (d₁ + q·t₁²)/p`, `n = (d₂ + q·t₂²)/p`,
/// so the list is finite and complete. When `R = 0` one of `X`, `Y` must
/// vanish, which pins one diagonal entry and frees the other.
pub fn solve_fixed_l<T: Int>(nu: &Filling<T>, t: &ChargeVector<T>, l0: &T) -> FixedLOutcome<T> {
    if l0.is_negative() {
        return FixedLOutcome::Empty;
    }
    let eq = Equation::new(nu, t);
    let r = eq.p.clone() * l0.clone() - eq.qt1t2.clone();

    if r.is_zero() {
        let free_min = |value: &T| (sq(l0).div_floor(value) + T::one()).max(T::one());
        let mut fams = Vec::new();
        // Y = 0 pins n, m is free
        if eq.qt2sq.is_multiple_of(&eq.p) {
            let n = eq.qt2sq.clone() / eq.p.clone();
            if n.is_positive() {
                fams.push(FreeFamily {
                    fixed: FixedEntry::N,
                    free_min: free_min(&n),
                    value: n,
                    l0: l0.clone(),
                });
            }
        }
        if eq.qt1sq.is_multiple_of(&eq.p) {
            let m = eq.qt1sq.clone() / eq.p.clone();
            if m.is_positive() {
                fams.push(FreeFamily {
                    fixed: FixedEntry::M,
                    free_min: free_min(&m),
                    value: m,
                    l0: l0.clone(),
                });
            }
        }
        return if fams.is_empty() {
            FixedLOutcome::Empty
        } else {
            FixedLOutcome::InfiniteFamily(fams)
        };
    }

    let r2 = sq(&r);
    let mut out = Vec::new();
    for d in divisors_of_square(&r) {
        let co = r2.clone() / d.clone();
        for (d1, d2) in [(d.clone(), co.clone()), (-d.clone(), -co)] {
            let mn = d1 + eq.qt1sq.clone();
            let nn = d2 + eq.qt2sq.clone();
            if !(mn.is_multiple_of(&eq.p) && nn.is_multiple_of(&eq.p)) {
                continue;
            }
            let k = KMatrix::new(mn / eq.p.clone(), nn / eq.p.clone(), l0.clone());
            if k.is_valid_state() {
                out.push(wrap(k, nu, t));
            }
        }
    }
    out.sort_by(|a, b| a.kmatrix.cmp(&b.kmatrix));
    out.dedup_by(|a, b| a.kmatrix == b.kmatrix);
    if out.is_empty() {
        FixedLOutcome::Empty
    } else {
        FixedLOutcome::FiniteList(out)
    }
}

/// Default side of the box scanned for [`BoundCertificate::empirical_max`].
pub const DEFAULT_BOUND_SCAN: u64 = 64;

/// Upper bound on every filling reachable with `l = l0`.
///
/// For `m·n > 2·l0²` the filling is at most `2t₁² + 2t₂²`; the remaining
/// cells `m·n <= 2·l0²` are finitely many and scanned exhaustively. The
/// certified bound is the larger of the two. `empirical_max` is the largest
/// filling actually seen (finite region plus a box scan) and is a lower
/// bound on the true supremum, nothing more.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCertificate<T> {
    pub l0: T,
    pub charge: ChargeVector<T>,
    /// `2t₁² + 2t₂²`.
    pub analytic_bound: T,
    /// Largest filling over the finite region `m·n <= 2·l0²`, if it has any
    /// valid state.
    pub finite_region_max: Option<Filling<T>>,
    pub certified_upper_bound: Filling<T>,
    pub empirical_max: Filling<T>,
    /// Side of the square box scanned beyond the finite region.
    pub scan_box: u64,
    /// `2·l0²`: the finite region is `m·n` up to this value.
    pub finite_region_limit: T,
}

impl<T: Int> BoundCertificate<T> {
    pub fn certifies_unattainable(&self, nu: &Filling<T>) -> bool {
        *nu > self.certified_upper_bound
    }
}

fn keep_max<T: Int>(slot: &mut Option<Filling<T>>, f: Filling<T>) {
    if slot.as_ref().is_none_or(|cur| f > *cur) {
        *slot = Some(f);
    }
}

pub fn max_filling_fixed_l<T: Int>(t: &ChargeVector<T>, l0: &T) -> Result<BoundCertificate<T>> {
    max_filling_fixed_l_scan(t, l0, DEFAULT_BOUND_SCAN)
}

/// [`max_filling_fixed_l`] with an explicit scan box side.
pub fn max_filling_fixed_l_scan<T: Int>(t: &ChargeVector<T>, l0: &T, scan: u64) -> Result<BoundCertificate<T>> {
    if l0.is_negative() {
        return Err(crate::error::param("l0", format!("must be >= 0, got {l0}")));
    }
    let two = lit::<T>(2);
    let analytic = two.clone() * sq(t.t1()) + two.clone() * sq(t.t2());
    let limit = two * sq(l0);
    // m = n = l0 + 1 is always valid, so make sure the box reaches it
    let scan = scan.max(l0.to_u64().map_or(u64::MAX, |v| v.saturating_add(1)));

    let mut finite_max = None;
    for m in inclusive(T::one(), limit.clone()) {
        for n in inclusive(T::one(), limit.div_floor(&m)) {
            let k = KMatrix::new(m.clone(), n, l0.clone());
            if let Ok(f) = k.filling_fraction(t) {
                keep_max(&mut finite_max, f);
            }
        }
    }

    let mut empirical = finite_max.clone();
    for m in inclusive(T::one(), from_u64(scan)) {
        for n in inclusive(T::one(), from_u64(scan)) {
            if let Ok(f) = KMatrix::new(m.clone(), n, l0.clone()).filling_fraction(t) {
                keep_max(&mut empirical, f);
            }
        }
    }

    let analytic_filling = Filling::integer(analytic.clone())?;
    let certified = match &finite_max {
        Some(f) if *f > analytic_filling => f.clone(),
        _ => analytic_filling,
    };
    Ok(BoundCertificate {
        l0: l0.clone(),
        charge: t.clone(),
        analytic_bound: analytic,
        finite_region_max: finite_max,
        certified_upper_bound: certified,
        empirical_max: empirical.expect("(l0+1, l0+1, l0) is always a valid state"),
        scan_box: scan,
        finite_region_limit: limit,
    })
}

/// Why [`union_gap_check`] declared a filling unreachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapReason {
    /// Above the certified bound of every `l` in the set; no search needed.
    ExceedsCertifiedBound,
    /// [`solve_fixed_l`] came back empty for every `l` in the set.
    NoSolutionAtAnyL,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unattainable<T> {
    pub nu: Filling<T>,
    pub reason: GapReason,
}

/// The candidates that no `l` in `l_set` can produce at charge `t`.
pub fn union_gap_check<T: Int>(
    t: &ChargeVector<T>,
    l_set: &[T],
    candidates: &[Filling<T>],
) -> Result<Vec<Unattainable<T>>> {
    let mut bound: Option<Filling<T>> = None;
    for l0 in l_set {
        keep_max(&mut bound, max_filling_fixed_l(t, l0)?.certified_upper_bound);
    }
    let mut out = Vec::new();
    for nu in candidates {
        if bound.as_ref().is_some_and(|b| nu > b) {
            out.push(Unattainable {
                nu: nu.clone(),
                reason: GapReason::ExceedsCertifiedBound,
            });
        } else if l_set.iter().all(|l0| solve_fixed_l(nu, t, l0).is_empty()) {
            out.push(Unattainable {
                nu: nu.clone(),
                reason: GapReason::NoSolutionAtAnyL,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(p: i64, q: i64) -> Filling<i64> {
        Filling::new(p, q).unwrap()
    }

    fn t(t1: i64, t2: i64) -> ChargeVector<i64> {
        ChargeVector::new(t1, t2).unwrap()
    }

    fn tuples(v: &[Solution<i64>]) -> Vec<(i64, i64, i64, i64)> {
        v.iter().map(|s| (s.kmatrix.m, s.kmatrix.n, s.kmatrix.l, s.det)).collect()
    }

    /// Triple loop straight from the residual.
    fn brute(nu: &Filling<i64>, t: &ChargeVector<i64>, b: SearchBox) -> Vec<(i64, i64, i64, i64)> {
        let (p, q) = (*nu.p(), *nu.q());
        let (t1, t2) = (*t.t1(), *t.t2());
        let mut out = Vec::new();
        for m in 1..=b.m_max as i64 {
            for n in 1..=b.n_max as i64 {
                let mut l = 0;
                while l * l < m * n {
                    let det = m * n - l * l;
                    if p * det == q * (n * t1 * t1 + m * t2 * t2 - 2 * l * t1 * t2) {
                        out.push((m, n, l, det));
                    }
                    l += 1;
                }
            }
        }
        out
    }

    #[test]
    fn factorization_identity() {
        for p in 1..6i64 {
            for q in 1..6 {
                for (t1, t2) in [(1, 1), (2, 1), (0, 3), (3, 2)] {
                    for m in -3..6i64 {
                        for n in -3..6i64 {
                            for l in -3..6i64 {
                                let lhs = p * p * (m * n - l * l) - p * q * (n * t1 * t1 + m * t2 * t2 - 2 * l * t1 * t2);
                                let rhs = (p * m - q * t1 * t1) * (p * n - q * t2 * t2) - (p * l - q * t1 * t2).pow(2);
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumerate_matches_triple_loop() {
        for (p, q) in [(2, 3), (1, 1), (3, 5), (5, 8), (7, 2), (1, 4)] {
            for (t1, t2) in [(1, 1), (1, 0), (0, 2), (2, 1), (3, 2)] {
                let b = SearchBox::new(25, 30);
                assert_eq!(tuples(&enumerate(&nu(p, q), &t(t1, t2), b)), brute(&nu(p, q), &t(t1, t2), b));
            }
        }
    }

    #[test]
    fn parallel_is_identical() {
        let b = SearchBox::new(60, 200);
        let serial = enumerate(&nu(13, 17), &t(1, 1), b);
        for jobs in [2, 3, 8] {
            assert_eq!(enumerate_parallel(&nu(13, 17), &t(1, 1), b, jobs), serial);
        }
    }

    #[test]
    fn enumerate_examples() {
        let found = tuples(&enumerate(&nu(2, 3), &t(1, 1), SearchBox::square(200)));
        for row in [(2, 6, 3, 3), (2, 14, 4, 12), (2, 62, 7, 75), (2, 86, 8, 108), (3, 15, 6, 9), (3, 39, 9, 36), (3, 123, 15, 144)] {
            assert!(found.contains(&row), "{row:?}");
        }
        let found = tuples(&enumerate(&nu(16, 17), &t(1, 1), SearchBox::new(100, 600)));
        assert!(found.contains(&(2, 272, 17, 255)) && found.contains(&(77, 587, 212, 255)));
        assert!(enumerate_at_l(&nu(9, 10), &t(1, 1), &0, SearchBox::square(50)).is_empty());
        assert!(enumerate(&nu(1, 1), &t(1, 1), SearchBox::square(10))
            .iter()
            .any(|s| s.kmatrix == KMatrix::new(2, 5, 3)));
    }

    #[test]
    fn enumerate_at_l_matches_filter() {
        for (p, q) in [(2, 3), (1, 1), (3, 5), (1, 3)] {
            for (t1, t2) in [(1, 1), (1, 0), (2, 1)] {
                let b = SearchBox::new(40, 40);
                let all = enumerate(&nu(p, q), &t(t1, t2), b);
                for l0 in 0..8 {
                    let filtered: Vec<_> = all.iter().filter(|s| s.kmatrix.l == l0).cloned().collect();
                    assert_eq!(enumerate_at_l(&nu(p, q), &t(t1, t2), &l0, b), filtered);
                }
            }
        }
    }

    #[test]
    fn fixed_l_examples() {
        for (p, q) in [(3, 4), (5, 7), (4, 5)] {
            assert!(solve_fixed_l(&nu(p, q), &t(1, 1), &1).is_empty(), "{p}/{q}");
        }
        let out = solve_fixed_l(&nu(2, 3), &t(1, 1), &3);
        assert_eq!(tuples(out.solutions()), [(2, 6, 3, 3), (6, 2, 3, 3)]);
        let b = SearchBox::square(50);
        assert_eq!(tuples(&enumerate_at_l(&nu(2, 3), &t(1, 1), &3, b)), tuples(out.solutions()));
    }

    #[test]
    fn fixed_l_degenerate_unit_filling() {
        let out = solve_fixed_l(&nu(1, 1), &t(1, 1), &1);
        assert_eq!(out.kind(), "infinite_family");
        assert_eq!(out.family_description().unwrap(), "(m, 1, 1), m >= 2; (1, n, 1), n >= 2");
        if let FixedLOutcome::InfiniteFamily(fams) = &out {
            for fam in fams {
                for i in 0..20 {
                    let k = fam.member(i);
                    assert_eq!(k.filling_fraction(&t(1, 1)).unwrap(), nu(1, 1));
                }
            }
        }
        // (1, 0) at l = 0 with ν = 1/q: m = q, n free
        let out = solve_fixed_l(&nu(1, 4), &t(1, 0), &0);
        assert_eq!(out.family_description().unwrap(), "(4, n, 0), n >= 1");
        // R = 0 without a pinned entry
        assert!(solve_fixed_l(&nu(2, 1), &t(1, 0), &0).is_empty());
    }

    #[test]
    fn fixed_l_matches_box_filter() {
        for p in 1..8i64 {
            for q in 1..8 {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                for (t1, t2) in [(1, 1), (2, 1), (1, 0), (1, 3)] {
                    for l0 in 0..6 {
                        let out = solve_fixed_l(&nu(p, q), &t(t1, t2), &l0);
                        if let FixedLOutcome::InfiniteFamily(_) = out {
                            continue;
                        }
                        let sols = out.solutions();
                        let reach = sols.iter().map(|s| s.kmatrix.m.max(s.kmatrix.n)).max().unwrap_or(1);
                        let b = SearchBox::square((reach as u64).max(60));
                        assert_eq!(enumerate_at_l(&nu(p, q), &t(t1, t2), &l0, b), sols.to_vec(), "{p}/{q} t=({t1},{t2}) l={l0}");
                    }
                }
            }
        }
    }

    #[test]
    fn divisor_listing() {
        let mut d = divisors_of_square(&12i64);
        d.sort();
        let expected: Vec<i64> = (1..=144).filter(|x| 144 % x == 0).collect();
        assert_eq!(d, expected);
        assert_eq!(divisors_of_square(&1i64), vec![1]);
        assert_eq!(factorize(&-360i64), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn bound_examples() {
        let c = max_filling_fixed_l(&t(1, 1), &0).unwrap();
        assert_eq!(c.certified_upper_bound, nu(4, 1));
        assert_eq!(c.empirical_max, nu(2, 1));
        assert!(c.finite_region_max.is_none());

        let c = max_filling_fixed_l(&t(1, 0), &0).unwrap();
        assert_eq!((c.certified_upper_bound.clone(), c.empirical_max.clone()), (nu(2, 1), nu(1, 1)));

        // finite region mn <= 8 at l = 2: (1, 5, 2) reaches 2, (1, 8, 2) gives 5/4
        assert_eq!(KMatrix::new(1, 8, 2).filling_fraction(&t(1, 1)).unwrap(), nu(5, 4));
        let c = max_filling_fixed_l(&t(1, 1), &2).unwrap();
        assert_eq!(c.finite_region_max, Some(nu(2, 1)));
        assert_eq!(c.certified_upper_bound, nu(4, 1));
    }

    #[test]
    fn bound_can_come_from_finite_region() {
        // (1, l² + 1, l) at t = (1, 0) has filling l² + 1, far above 2.
        let c = max_filling_fixed_l(&t(1, 0), &3).unwrap();
        assert_eq!(c.finite_region_max, Some(nu(10, 1)));
        assert_eq!(c.certified_upper_bound, nu(10, 1));
    }

    #[test]
    fn gap_examples() {
        let gaps = union_gap_check(&t(1, 1), &[0], &[nu(9, 10), nu(11, 12)]).unwrap();
        assert_eq!(gaps.len(), 2);
        assert!(gaps.iter().all(|g| g.reason == GapReason::NoSolutionAtAnyL));
        let gaps = union_gap_check(&t(1, 1), &[1], &[nu(3, 4)]).unwrap();
        assert_eq!(gaps, vec![Unattainable { nu: nu(3, 4), reason: GapReason::NoSolutionAtAnyL }]);
        let gaps = union_gap_check(&t(1, 1), &[0, 1, 2], &[nu(5, 1), nu(2, 3)]).unwrap();
        assert_eq!(gaps.len(), 1);
        assert_eq!(gaps[0].reason, GapReason::ExceedsCertifiedBound);
        // 5/6 = 1/2 + 1/3 is reachable at l = 0
        assert!(union_gap_check(&t(1, 1), &[0], &[nu(5, 6)]).unwrap().is_empty());
    }
}
