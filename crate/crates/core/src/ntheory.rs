//! Exact integer primitives: gcd, integer square roots, quadratic residues,
//! the Legendre symbol, Euclid's triple formula and small modular
//! obstruction scans.
//!
//! Moduli here are desk scale. Residue questions are answered by exhaustive
//! scans over `[0, modulus)` because the moduli that show up in the K-matrix
//! constructions are arbitrary positive integers, not primes.

use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};
use crate::int::{inclusive, lit, sq, Int};

/// Greatest common divisor, always nonnegative; `gcd(0, 0) = 0`.
pub fn gcd<T: Int>(a: &T, b: &T) -> T {
    a.gcd(b)
}

/// `⌊√n⌋` for `n >= 0`.
pub fn isqrt<T: Int>(n: &T) -> Result<T> {
    if n.is_negative() {
        return Err(Error::NegativeSqrt(n.to_string()));
    }
    Ok(n.sqrt())
}

/// Returns `Some(r)` with `r * r == n` when `n` is a perfect square.
pub fn exact_sqrt<T: Int>(n: &T) -> Option<T> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (sq(&r) == *n).then_some(r)
}

/// `base^exp mod modulus` by square-and-multiply, result in `[0, modulus)`.
pub fn mod_pow<T: Int>(base: &T, exp: &T, modulus: &T) -> T {
    let two = lit::<T>(2);
    let mut result = T::one().mod_floor(modulus);
    let mut b = base.mod_floor(modulus);
    let mut e = exp.clone();
    while e.is_positive() {
        if e.is_odd() {
            result = (result * b.clone()).mod_floor(modulus);
        }
        b = (b.clone() * b).mod_floor(modulus);
        e = e / two.clone();
    }
    result
}

/// Trial-division primality test.
pub fn is_prime<T: Int>(n: &T) -> bool {
    let two = lit::<T>(2);
    if *n < two {
        return false;
    }
    if n.is_even() {
        return *n == two;
    }
    let mut d = lit::<T>(3);
    while sq(&d) <= *n {
        if n.is_multiple_of(&d) {
            return false;
        }
        d = d + two.clone();
    }
    true
}

/// A square root `h` of `target` modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueWitness<T> {
    pub h: T,
    pub modulus: T,
    /// The target reduced into `[0, modulus)`.
    pub target: T,
}

fn check_modulus<T: Int>(modulus: &T, min: u32) -> Result<()> {
    if *modulus < lit::<T>(min as i64) {
        return Err(Error::ModulusTooSmall {
            min,
            got: modulus.to_string(),
        });
    }
    Ok(())
}

/// Smallest `h` in `[0, modulus)` with `h² ≡ target (mod modulus)`, found by
/// scanning every residue.
pub fn quadratic_residue_witness<T: Int>(
    target: &T,
    modulus: &T,
) -> Result<Option<ResidueWitness<T>>> {
    check_modulus(modulus, 1)?;
    let reduced = target.mod_floor(modulus);
    let found = inclusive(T::zero(), modulus.clone() - T::one())
        .find(|h| sq(h).mod_floor(modulus) == reduced);
    Ok(found.map(|h| ResidueWitness {
        h,
        modulus: modulus.clone(),
        target: reduced,
    }))
}

/// Smallest `h` in `[1, modulus]` with `h² ≡ target (mod modulus)`.
///
/// Differs from [`quadratic_residue_witness`] only when `target ≡ 0`: the
/// constructions need a strictly positive root.
pub fn smallest_positive_root<T: Int>(target: &T, modulus: &T) -> Result<Option<T>> {
    check_modulus(modulus, 1)?;
    let reduced = target.mod_floor(modulus);
    Ok(inclusive(T::one(), modulus.clone()).find(|h| sq(h).mod_floor(modulus) == reduced))
}

/// Legendre symbol `(a / p)` via Euler's criterion.
pub fn legendre_symbol<T: Int>(a: &T, p: &T) -> Result<i8> {
    if p.is_even() || !is_prime(p) {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    let r = a.mod_floor(p);
    if r.is_zero() {
        return Ok(0);
    }
    let half = (p.clone() - T::one()) / lit::<T>(2);
    let e = mod_pow(&r, &half, p);
    if e.is_one() {
        Ok(1)
    } else {
        debug_assert_eq!(e, p.clone() - T::one());
        Ok(-1)
    }
}

/// A Pythagorean triple `a² + b² = c²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PythTriple<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    /// Set when the generating parameters give a primitive triple.
    pub primitive: bool,
}

impl<T: Int> PythTriple<T> {
    pub fn holds(&self) -> bool {
        sq(&self.a) + sq(&self.b) == sq(&self.c)
    }
}

impl<T: fmt::Display> fmt::Display for PythTriple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Euclid's formula with a scale factor: `(k(m²−n²), 2kmn, k(m²+n²))`.
pub fn euclid_triple<T: Int>(m: &T, n: &T, k: &T) -> Result<PythTriple<T>> {
    if !(m > n && n.is_positive() && k.is_positive()) {
        return Err(Error::EuclidParameters {
            m: m.to_string(),
            n: n.to_string(),
            k: k.to_string(),
        });
    }
    let primitive = k.is_one() && gcd(m, n).is_one() && !(m.is_odd() && n.is_odd());
    Ok(PythTriple {
        a: k.clone() * (sq(m) - sq(n)),
        b: k.clone() * lit::<T>(2) * m.clone() * n.clone(),
        c: k.clone() * (sq(m) + sq(n)),
        primitive,
    })
}

/// The equation shapes understood by [`mod_solvable`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ObstructionEquation<T> {
    /// `c1·x² + c2 = y²`
    SquareShift { c1: T, c2: T },
    /// `c1·x² + c2 = y³`
    CubeShift { c1: T, c2: T },
    /// `c1·x² + c2·y² + c3·z² = 0`, asking for a not-all-zero residue tuple.
    Ternary { c1: T, c2: T, c3: T },
}

impl<T: Int> ObstructionEquation<T> {
    pub fn arity(&self) -> usize {
        match self {
            Self::Ternary { .. } => 3,
            _ => 2,
        }
    }

    /// Evaluates `lhs − rhs` at the given values.
    pub fn evaluate(&self, values: &[T]) -> T {
        match self {
            Self::SquareShift { c1, c2 } => c1.clone() * sq(&values[0]) + c2.clone() - sq(&values[1]),
            Self::CubeShift { c1, c2 } => {
                c1.clone() * sq(&values[0]) + c2.clone() - sq(&values[1]) * values[1].clone()
            }
            Self::Ternary { c1, c2, c3 } => {
                c1.clone() * sq(&values[0]) + c2.clone() * sq(&values[1]) + c3.clone() * sq(&values[2])
            }
        }
    }

    /// True when `values` (read modulo `modulus`) satisfy the congruence,
    /// including the not-all-zero requirement of the ternary shape.
    pub fn satisfied_mod(&self, values: &[T], modulus: &T) -> bool {
        if values.len() != self.arity() {
            return false;
        }
        if matches!(self, Self::Ternary { .. })
            && values.iter().all(|v| v.mod_floor(modulus).is_zero())
        {
            return false;
        }
        self.evaluate(values).mod_floor(modulus).is_zero()
    }
}

impl<T: Int> fmt::Display for ObstructionEquation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn term<T: Int>(f: &mut fmt::Formatter<'_>, c: &T, var: &str, first: bool) -> fmt::Result {
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag.is_one() && !var.is_empty() {
                write!(f, "{sign}{var}")
            } else {
                write!(f, "{sign}{mag}{var}")
            }
        }
        match self {
            Self::SquareShift { c1, c2 } => {
                term(f, c1, "x^2", true)?;
                term(f, c2, "", false)?;
                write!(f, "=y^2")
            }
            Self::CubeShift { c1, c2 } => {
                term(f, c1, "x^2", true)?;
                term(f, c2, "", false)?;
                write!(f, "=y^3")
            }
            Self::Ternary { c1, c2, c3 } => {
                term(f, c1, "x^2", true)?;
                term(f, c2, "y^2", false)?;
                term(f, c3, "z^2", false)?;
                write!(f, "=0")
            }
        }
    }
}

/// Parses forms such as `3x^2+2=y^2`, `7x^2 + 2 = y^3` or
/// `3x^2-7y^2-17z^2=0`. Terms may appear on either side.
impl<T: Int> FromStr for ObstructionEquation<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |why: &str| Error::ParseEquation(s.to_string(), why.to_string());
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase()
            .replace("**", "^");
        let (lhs, rhs) = cleaned.split_once('=').ok_or_else(|| fail("missing '='"))?;
        if rhs.contains('=') {
            return Err(fail("more than one '='"));
        }

        // Coefficients of x², y², z², y³ and the constant, all moved to the left.
        let mut coef: [T; 5] = std::array::from_fn(|_| T::zero());
        for (side, flip) in [(lhs, false), (rhs, true)] {
            for (negative, body) in split_terms(side).map_err(|e| fail(&e))? {
                let (slot, value) = parse_term::<T>(&body).map_err(|e| fail(&e))?;
                let value = if negative ^ flip { -value } else { value };
                coef[slot] = coef[slot].clone() + value;
            }
        }
        let [x2, y2, z2, y3, c] = coef;
        let zero = T::zero();
        if z2 == zero && y3 == zero && y2 == -T::one() {
            Ok(Self::SquareShift { c1: x2, c2: c })
        } else if z2 == zero && y3 == zero && y2.is_one() {
            Ok(Self::SquareShift { c1: -x2, c2: -c })
        } else if z2 == zero && y2 == zero && y3 == -T::one() {
            Ok(Self::CubeShift { c1: x2, c2: c })
        } else if z2 == zero && y2 == zero && y3.is_one() {
            Ok(Self::CubeShift { c1: -x2, c2: -c })
        } else if y3 == zero && c == zero && z2 != zero {
            Ok(Self::Ternary { c1: x2, c2: y2, c3: z2 })
        } else {
            Err(fail("unsupported shape; expected c1x^2+c2=y^2, c1x^2+c2=y^3 or c1x^2+c2y^2+c3z^2=0"))
        }
    }
}

fn split_terms(side: &str) -> std::result::Result<Vec<(bool, String)>, String> {
    let mut terms = Vec::new();
    let mut negative = false;
    let mut cur = String::new();
    for ch in side.chars() {
        match ch {
            '+' | '-' => {
                if !cur.is_empty() {
                    terms.push((negative, std::mem::take(&mut cur)));
                } else if !terms.is_empty() || negative {
                    return Err("dangling sign".into());
                }
                negative = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if cur.is_empty() {
        return Err("empty term".into());
    }
    terms.push((negative, cur));
    Ok(terms)
}

fn parse_term<T: Int>(body: &str) -> std::result::Result<(usize, T), String> {
    let digits_end = body.find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len());
    let (digits, rest) = body.split_at(digits_end);
    let rest = rest.trim_start_matches('*');
    let value = if digits.is_empty() {
        T::one()
    } else {
        T::from_str_radix(digits, 10).map_err(|_| format!("bad coefficient {digits:?}"))?
    };
    let slot = match rest {
        "" if !digits.is_empty() => 4,
        "x^2" => 0,
        "y^2" => 1,
        "z^2" => 2,
        "y^3" => 3,
        other => return Err(format!("unsupported term {other:?}")),
    };
    Ok((slot, value))
}

/// Outcome of an exhaustive residue scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModReport<T> {
    pub solvable: bool,
    /// Lexicographically first satisfying residue tuple.
    pub witness: Option<Vec<T>>,
    /// Number of satisfying residue tuples.
    pub count: u64,
}

/// Scans every residue tuple modulo `modulus` for a solution of `equation`.
pub fn mod_solvable<T: Int>(equation: &ObstructionEquation<T>, modulus: &T) -> Result<ModReport<T>> {
    check_modulus(modulus, 2)?;
    let top = modulus.clone() - T::one();
    let mut witness = None;
    let mut count = 0u64;
    let mut visit = |values: Vec<T>| {
        if equation.satisfied_mod(&values, modulus) {
            count += 1;
            if witness.is_none() {
                witness = Some(values);
            }
        }
    };
    for x in inclusive(T::zero(), top.clone()) {
        for y in inclusive(T::zero(), top.clone()) {
            if equation.arity() == 3 {
                for z in inclusive(T::zero(), top.clone()) {
                    visit(vec![x.clone(), y.clone(), z]);
                }
            } else {
                visit(vec![x.clone(), y]);
            }
        }
    }
    Ok(ModReport {
        solvable: count > 0,
        witness,
        count,
    })
}

/// Which half of the residue lemma produced a [`LemmaMember`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaBranch {
    /// `−q` is a square mod `p`: `p·l₀ − q = h²`, `a = h + p`, `b = h`.
    NegativeQ,
    /// Only `q` is a square mod `p`: `a = p·n − h`, `b = h`, so `p | a + b`.
    PositiveQ,
}

/// One member `(a, b, l)` of the residue lemma family:
/// `p | a² − b²` and `l·p − q = a·b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LemmaMember<T> {
    pub a: T,
    pub b: T,
    pub l: T,
    pub branch: LemmaBranch,
    /// Square root used for this member.
    pub h: T,
}

/// The `index`-th member of the residue lemma family for `(p, q)`.
///
/// Stepping rule. `NegativeQ`: `h_j = h + j·p` where `h` is the smallest
/// positive root of `−q`; then `l₀ = (h_j² + q)/p`, `a = h_j + p`, `b = h_j`,
/// `l = l₀ + h_j`. `PositiveQ`: `h` is the smallest positive root of `q`,
/// `n_j = n₀ + j` with `n₀` the least multiplier giving `a, l ≥ 1`; then
/// `a = p·n_j − h`, `b = h`, `l = (a·b + q)/p`. Both give strictly increasing
/// `l` in `index`.
pub fn qr_lemma_family<T: Int>(p: &T, q: &T, index: u64) -> Result<LemmaMember<T>> {
    if !p.is_positive() || !q.is_positive() {
        return Err(param("p, q", format!("need p, q >= 1, got p={p}, q={q}")));
    }
    if !gcd(p, q).is_one() {
        return Err(Error::NotCoprime {
            p: p.to_string(),
            q: q.to_string(),
        });
    }
    let j = T::from_u64(index).ok_or_else(|| param("index", "does not fit the integer type"))?;

    if let Some(h0) = smallest_positive_root(&-q.clone(), p)? {
        let h = h0 + j * p.clone();
        let l0 = (sq(&h) + q.clone()) / p.clone();
        let a = h.clone() + p.clone();
        let l = l0 + h.clone();
        return Ok(LemmaMember {
            a,
            b: h.clone(),
            l,
            branch: LemmaBranch::NegativeQ,
            h,
        });
    }

    if let Some(h) = smallest_positive_root(q, p)? {
        // l = n·h − (h² − q)/p
        let shift = (sq(&h) - q.clone()) / p.clone();
        // smallest n >= 1 with p·n − h >= 1 and n·h − shift >= 1
        let n_a = h.div_floor(p) + T::one();
        let n_l = (shift.clone() + T::one()).div_ceil(&h);
        let n0 = n_a.max(n_l).max(T::one());
        let n = n0 + j;
        let a = p.clone() * n.clone() - h.clone();
        let l = n * h.clone() - shift;
        return Ok(LemmaMember {
            a,
            b: h.clone(),
            l,
            branch: LemmaBranch::PositiveQ,
            h,
        });
    }

    Err(Error::NoResidueWitness {
        p: p.to_string(),
        q: q.to_string(),
    })
}
