//! Exact arithmetic in finite fields F_{p^k}.
//!
//! A [`Field`] is a cheaply clonable handle; elements are plain [`Elem`]
//! indices relative to one field. The index of an element with polynomial
//! coordinates `(c_0, ..., c_{k-1})` in the basis `1, x, ..., x^{k-1}` is
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, so the prime subfield occupies
//! indices `0..p`.
//!
//! Arithmetic is dispatched to one of several backends chosen at
//! construction: full operation tables for `q <= 256`, direct modular
//! arithmetic for larger prime fields, log/Zech tables up to `2^20`, and
//! schoolbook polynomial arithmetic beyond that. All backends agree with the
//! polynomial-basis reference implementation (checked exhaustively in tests).

mod embed;
pub(crate) mod zp;

pub use embed::Embedding;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field the toolkit will construct (audit extensions included).
pub const MAX_FIELD_SIZE: u64 = 1 << 24;
/// Largest base field accepted for varieties and value-set families.
pub const MAX_BASE_FIELD_SIZE: u64 = 1 << 16;

const SMALL_TABLE_LIMIT: u64 = 256;
const LOG_TABLE_LIMIT: u64 = 1 << 20;
const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {q} exceeds the limit {limit}")]
    TooLarge { q: u128, limit: u64 },
    #[error("invalid field `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("element index {index} does not belong to F_{q}")]
    ForeignElement { index: u32, q: u32 },
    #[error("coordinate {value} is not a residue mod {p}")]
    BadCoordinate { value: u32, p: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("cannot embed F_{from} into F_{to}: {reason}")]
    IncompatibleEmbedding { from: u32, to: u32, reason: String },
}

/// An element of some [`Field`], stored as its index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

enum Arith {
    /// Full addition/multiplication tables, indexed `a * q + b`.
    Small {
        add: Vec<u16>,
        mul: Vec<u16>,
        neg: Vec<u16>,
        inv: Vec<u16>,
    },
    /// Prime field larger than the table limit.
    Prime,
    /// Log / antilog / Zech logarithm tables relative to a primitive element.
    Log {
        exp: Vec<u32>,
        log: Vec<u32>,
        zech: Vec<u32>,
        half: u32,
    },
    /// Reference polynomial-basis arithmetic.
    Poly,
}

struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    /// `order[rank]` is the element at position `rank` in enumeration order.
    order: Vec<u32>,
    /// Inverse of `order`.
    rank: Vec<u32>,
    arith: Arith,
}

/// A concrete finite field F_{p^k} with a deterministic modulus.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.name())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        // The modulus is a function of (p, k), so these identify the field.
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Build F_{p^k}, choosing the lexicographically smallest monic irreducible
/// modulus (coefficients compared from the constant term up).
pub fn make_field(p: u64, k: u32) -> Result<Field, GfError> {
    Field::with_limit(p, k, MAX_FIELD_SIZE)
}

/// Parse a field token of the form `p` or `p^k`.
pub fn parse_field(token: &str) -> Result<Field, GfError> {
    let bad = |reason: &str| GfError::Parse {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let t = token.trim();
    let (p_str, k_str) = match t.split_once('^') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let p: u64 = p_str
        .parse()
        .map_err(|_| bad(&format!("characteristic `{p_str}` is not an integer")))?;
    let k: u32 = k_str
        .parse()
        .map_err(|_| bad(&format!("exponent `{k_str}` is not an integer")))?;
    if !is_prime(p) {
        return Err(bad(&format!("`{p_str}` is not prime")));
    }
    if k == 0 {
        return Err(bad("exponent must be at least 1"));
    }
    Field::with_limit(p, k, MAX_BASE_FIELD_SIZE).map_err(|e| bad(&e.to_string()))
}

impl Field {
    pub fn with_limit(p: u64, k: u32, limit: u64) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if k == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if q > limit as u128 {
            return Err(GfError::TooLarge { q, limit });
        }
        let p32 = p as u32;
        let q32 = q as u32;
        let modulus = if k == 1 {
            None
        } else {
            let count = (p as u64).pow(k);
            let m = (0..count)
                .map(|rank| zp::monic_from_lex_rank(rank, k as usize, p32))
                .find(|f| zp::is_irreducible(f, p32))
                .expect("irreducible polynomials exist in every degree");
            Some(m)
        };
        let order = (0..q32)
            .map(|rank| {
                // rank digits with c_0 most significant -> index digits with c_0 least.
                let mut r = rank;
                let mut digits = vec![0u32; k as usize];
                for i in (0..k as usize).rev() {
                    digits[i] = r % p32;
                    r /= p32;
                }
                digits.iter().rev().fold(0u32, |acc, &c| acc * p32 + c)
            })
            .collect::<Vec<u32>>();
        let mut rank = vec![0u32; q32 as usize];
        for (r, &i) in order.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        let mut inner = FieldInner {
            p: p32,
            k,
            q: q32,
            modulus,
            order,
            rank,
            arith: Arith::Poly,
        };
        inner.arith = build_arith(&inner);
        Ok(Field(Arc::new(inner)))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn size(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus `c_0 + c_1 x + ... + x^k`, absent for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.0.modulus.as_deref()
    }

    /// Token accepted by [`parse_field`], e.g. `3` or `2^4`.
    pub fn name(&self) -> String {
        if self.0.k == 1 {
            self.0.p.to_string()
        } else {
            format!("{}^{}", self.0.p, self.0.k)
        }
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The class of `x` in F_p[x]/(modulus). Prime fields have no adjoined
    /// generator and return zero.
    pub fn generator(&self) -> Elem {
        if self.0.k == 1 {
            Elem(0)
        } else {
            Elem(self.0.p)
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem, GfError> {
        if coeffs.len() > self.0.k as usize {
            return Err(GfError::BadCoordinate {
                value: coeffs.len() as u32,
                p: self.0.p,
            });
        }
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.0.p {
                return Err(GfError::BadCoordinate { value: c, p: self.0.p });
            }
            idx = idx * self.0.p + c;
        }
        Ok(Elem(idx))
    }

    /// Coordinates of `a` in the basis `1, x, ..., x^{k-1}`.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.0.k as usize);
        let mut idx = a.0;
        for _ in 0..self.0.k {
            v.push(idx % self.0.p);
            idx /= self.0.p;
        }
        v
    }

    /// Element from a raw index, validated against the field size.
    pub fn elem(&self, index: u32) -> Result<Elem, GfError> {
        self.check(Elem(index))
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.q
    }

    pub fn check(&self, a: Elem) -> Result<Elem, GfError> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(GfError::ForeignElement {
                index: a.0,
                q: self.0.q,
            })
        }
    }

    /// All `q` elements, ordered lexicographically on `(c_0, ..., c_{k-1})`.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.0.order.iter().map(|&i| Elem(i))
    }

    /// Element at position `rank` of [`Field::elements`].
    #[inline]
    pub fn nth_element(&self, rank: u32) -> Elem {
        Elem(self.0.order[rank as usize])
    }

    /// Position of `a` in [`Field::elements`].
    #[inline]
    pub fn rank_of(&self, a: Elem) -> u32 {
        self.0.rank[a.0 as usize]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        match &inner.arith {
            Arith::Small { add, .. } => Elem(add[(a.0 * inner.q + b.0) as usize] as u32),
            Arith::Prime => {
                let s = a.0 + b.0;
                Elem(if s >= inner.p { s - inner.p } else { s })
            }
            Arith::Log { exp, log, zech, .. } => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let (la, lb) = (log[a.0 as usize], log[b.0 as usize]);
                let qm1 = inner.q - 1;
                let diff = if lb >= la { lb - la } else { lb + qm1 - la };
                let z = zech[diff as usize];
                if z == NO_LOG {
                    Elem(0)
                } else {
                    Elem(exp[(la + z) as usize])
                }
            }
            Arith::Poly => Elem(poly_add(inner, a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 || a.0 == 0 {
            return a;
        }
        match &inner.arith {
            Arith::Small { neg, .. } => Elem(neg[a.0 as usize] as u32),
            Arith::Prime => Elem(inner.p - a.0),
            Arith::Log { exp, log, half, .. } => Elem(exp[(log[a.0 as usize] + half) as usize]),
            Arith::Poly => Elem(poly_neg(inner, a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        match &inner.arith {
            Arith::Small { mul, .. } => Elem(mul[(a.0 * inner.q + b.0) as usize] as u32),
            Arith::Prime => Elem(((a.0 as u64 * b.0 as u64) % inner.p as u64) as u32),
            Arith::Log { exp, log, .. } => {
                if a.0 == 0 || b.0 == 0 {
                    Elem(0)
                } else {
                    Elem(exp[(log[a.0 as usize] + log[b.0 as usize]) as usize])
                }
            }
            Arith::Poly => Elem(poly_mul(inner, a.0, b.0)),
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroInverse);
        }
        let inner = &*self.0;
        Ok(match &inner.arith {
            Arith::Small { inv, .. } => Elem(inv[a.0 as usize] as u32),
            Arith::Prime => Elem(zp::inv_mod(a.0, inner.p)),
            Arith::Log { exp, log, .. } => {
                let l = log[a.0 as usize];
                Elem(exp[((inner.q - 1 - l) % (inner.q - 1)) as usize])
            }
            Arith::Poly => self.pow(a, inner.q as u64 - 2),
        })
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `sum_i a_i b_i`.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        debug_assert_eq!(a.len(), b.len());
        if self.0.k == 1 {
            // Each product is below 2^32, so the sum cannot overflow before
            // 2^32 terms.
            let p = self.0.p as u64;
            let s: u64 = a.iter().zip(b).map(|(x, y)| x.0 as u64 * y.0 as u64).sum();
            return Elem((s % p) as u32);
        }
        a.iter()
            .zip(b)
            .fold(Elem(0), |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn try_add(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    pub fn try_sub(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        Ok(self.sub(self.check(a)?, self.check(b)?))
    }

    pub fn try_mul(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn try_neg(&self, a: Elem) -> Result<Elem, GfError> {
        Ok(self.neg(self.check(a)?))
    }

    /// Human-readable form: an integer for prime fields, a polynomial in `x`
    /// otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.0.k == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coef = if ci == 1 && i > 0 { String::new() } else { ci.to_string() };
            parts.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// Reference multiplication in the polynomial basis, independent of the
    /// table backends.
    pub fn reference_mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(poly_mul(&self.0, a.0, b.0))
    }

    /// Reference addition in the polynomial basis.
    pub fn reference_add(&self, a: Elem, b: Elem) -> Elem {
        Elem(poly_add(&self.0, a.0, b.0))
    }
}

fn digits(inner: &FieldInner, mut idx: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(inner.k as usize);
    for _ in 0..inner.k {
        v.push(idx % inner.p);
        idx /= inner.p;
    }
    v
}

fn undigits(inner: &FieldInner, d: &[u32]) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * inner.p + c)
}

fn poly_add(inner: &FieldInner, a: u32, b: u32) -> u32 {
    let (da, db) = (digits(inner, a), digits(inner, b));
    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % inner.p).collect();
    undigits(inner, &s)
}

fn poly_neg(inner: &FieldInner, a: u32) -> u32 {
    let s: Vec<u32> = digits(inner, a)
        .iter()
        .map(|&x| (inner.p - x) % inner.p)
        .collect();
    undigits(inner, &s)
}

fn poly_mul(inner: &FieldInner, a: u32, b: u32) -> u32 {
    if inner.k == 1 {
        return ((a as u64 * b as u64) % inner.p as u64) as u32;
    }
    let m = inner.modulus.as_ref().expect("extension field has a modulus");
    let prod = zp::mul_mod(&zp::trim(digits(inner, a)), &zp::trim(digits(inner, b)), m, inner.p);
    let mut d = prod;
    d.resize(inner.k as usize, 0);
    undigits(inner, &d)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn poly_pow(inner: &FieldInner, a: u32, mut e: u64) -> u32 {
    let mut acc = 1u32;
    let mut base = a;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul(inner, acc, base);
        }
        base = poly_mul(inner, base, base);
        e >>= 1;
    }
    acc
}

fn primitive_element(inner: &FieldInner) -> u32 {
    let qm1 = inner.q as u64 - 1;
    if qm1 == 1 {
        return 1;
    }
    let factors = prime_factors(qm1);
    (2..inner.q)
        .find(|&g| factors.iter().all(|&l| poly_pow(inner, g, qm1 / l) != 1))
        .expect("the multiplicative group is cyclic")
}

fn build_arith(inner: &FieldInner) -> Arith {
    let q = inner.q as u64;
    if q <= SMALL_TABLE_LIMIT {
        let qs = inner.q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..inner.q {
            for b in 0..inner.q {
                let i = a as usize * qs + b as usize;
                add[i] = poly_add(inner, a, b) as u16;
                mul[i] = poly_mul(inner, a, b) as u16;
            }
        }
        let neg = (0..inner.q).map(|a| poly_neg(inner, a) as u16).collect();
        let mut inv = vec![0u16; qs];
        for a in 1..inner.q {
            for b in 1..inner.q {
                if mul[a as usize * qs + b as usize] == 1 {
                    inv[a as usize] = b as u16;
                    break;
                }
            }
        }
        return Arith::Small { add, mul, neg, inv };
    }
    if inner.k == 1 {
        return Arith::Prime;
    }
    if q <= LOG_TABLE_LIMIT {
        let g = primitive_element(inner);
        let qm1 = inner.q - 1;
        let mut exp = vec![0u32; 2 * qm1 as usize];
        let mut log = vec![NO_LOG; inner.q as usize];
        let mut cur = 1u32;
        for i in 0..qm1 {
            exp[i as usize] = cur;
            exp[(i + qm1) as usize] = cur;
            log[cur as usize] = i;
            cur = poly_mul(inner, cur, g);
        }
        let zech = (0..qm1)
            .map(|n| {
                let s = poly_add(inner, 1, exp[n as usize]);
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();
        let half = if inner.p == 2 { 0 } else { qm1 / 2 };
        return Arith::Log { exp, log, zech, half };
    }
    Arith::Poly
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, k: u32) -> Field {
        make_field(p, k).unwrap()
    }

    #[test]
    fn prime_field_has_no_modulus() {
        let f5 = f(5, 1);
        assert_eq!(f5.size(), 5);
        assert!(f5.modulus().is_none());
    }

    #[test]
    fn f4_modulus_is_x2_x_1() {
        assert_eq!(f(2, 2).modulus().unwrap(), &[1, 1, 1]);
    }

    #[test]
    fn f8_modulus_is_lex_smallest_from_constant_term() {
        // (1,0,1) < (1,1,0): x^3 + x^2 + 1 precedes x^3 + x + 1.
        assert_eq!(f(2, 3).modulus().unwrap(), &[1, 0, 1, 1]);
    }

    #[test]
    fn rejects_non_prime_characteristic() {
        assert_eq!(make_field(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(make_field(5, 0).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(make_field(2, 25), Err(GfError::TooLarge { .. })));
    }

    #[test]
    fn parse_field_tokens() {
        assert_eq!(parse_field("3").unwrap().size(), 3);
        assert_eq!(parse_field("2^4").unwrap().size(), 16);
        let err = parse_field("4").unwrap_err().to_string();
        assert!(err.contains("`4`"), "{err}");
        let err = parse_field("3^x").unwrap_err().to_string();
        assert!(err.contains("`x`"), "{err}");
        assert!(parse_field("2^17").is_err());
    }

    #[test]
    fn small_examples() {
        let f5 = f(5, 1);
        assert_eq!(f5.add(Elem(3), Elem(4)), Elem(2));
        assert_eq!(f5.inv(Elem(2)).unwrap(), Elem(3));
        assert_eq!(f5.pow(Elem(2), 3), Elem(3));
        assert_eq!(f5.pow(Elem(0), 0), Elem(1));
        assert_eq!(f5.inv(Elem(0)), Err(GfError::ZeroInverse));

        let f4 = f(2, 2);
        let x = f4.generator();
        let x1 = f4.add(x, f4.one());
        assert_eq!(f4.mul(x, x1), f4.one());
        assert_eq!(f4.inv(x).unwrap(), x1);
    }

    #[test]
    fn enumeration_order_is_lexicographic_on_coordinates() {
        let f3 = f(3, 1);
        assert_eq!(f3.elements().collect::<Vec<_>>(), vec![Elem(0), Elem(1), Elem(2)]);
        let f4 = f(2, 2);
        let coords: Vec<_> = f4.elements().map(|a| f4.coeffs(a)).collect();
        assert_eq!(coords, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let f16 = f(2, 4);
        let set: std::collections::BTreeSet<_> = f16.elements().collect();
        assert_eq!(set.len(), 16);
    }

    #[test]
    fn backends_agree_with_reference() {
        // Small tables, prime, log/Zech and polynomial backends.
        let fields = [
            f(2, 3),
            f(3, 2),
            f(257, 1),
            f(3, 6),
            Field::with_limit(2, 21, MAX_FIELD_SIZE).unwrap(),
        ];
        for fld in &fields {
            let q = fld.size();
            let step = (q / 97).max(1);
            let sample: Vec<Elem> = (0..q).step_by(step as usize).map(Elem).collect();
            for &a in &sample {
                for &b in &sample {
                    assert_eq!(fld.add(a, b), fld.reference_add(a, b), "{fld:?} {a:?}+{b:?}");
                    assert_eq!(fld.mul(a, b), fld.reference_mul(a, b), "{fld:?} {a:?}*{b:?}");
                }
                assert_eq!(fld.add(a, fld.neg(a)), Elem(0));
                if !a.is_zero() {
                    assert_eq!(fld.mul(a, fld.inv(a).unwrap()), fld.one());
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (7, 1), (2, 4)] {
            let fld = f(p, k);
            let els: Vec<_> = fld.elements().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(fld.add(a, b), fld.add(b, a));
                    assert_eq!(fld.mul(a, b), fld.mul(b, a));
                    for &c in &els {
                        assert_eq!(fld.add(fld.add(a, b), c), fld.add(a, fld.add(b, c)));
                        assert_eq!(fld.mul(fld.mul(a, b), c), fld.mul(a, fld.mul(b, c)));
                        assert_eq!(
                            fld.mul(a, fld.add(b, c)),
                            fld.add(fld.mul(a, b), fld.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn product_of_units_is_minus_one_and_fermat() {
        for (p, k) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 4), (5, 2), (7, 1), (13, 1)] {
            let fld = f(p, k);
            let q = fld.size() as u64;
            let prod = fld
                .elements()
                .filter(|a| !a.is_zero())
                .fold(fld.one(), |acc, a| fld.mul(acc, a));
            assert_eq!(prod, fld.neg(fld.one()));
            for a in fld.elements() {
                assert_eq!(fld.pow(a, q), a);
                if !a.is_zero() {
                    assert_eq!(fld.pow(a, q - 1), fld.one());
                }
            }
        }
    }

    #[test]
    fn checked_ops_reject_foreign_indices() {
        let f5 = f(5, 1);
        assert!(f5.try_add(Elem(7), Elem(1)).is_err());
        assert_eq!(f5.try_mul(Elem(2), Elem(3)).unwrap(), Elem(1));
    }

    #[test]
    fn dot_matches_fold() {
        for fld in [f(7, 1), f(3, 2), f(331, 1)] {
            let a: Vec<Elem> = (0..20).map(|i| Elem(i * 5 % fld.size())).collect();
            let b: Vec<Elem> = (0..20).map(|i| Elem((i * i + 1) % fld.size())).collect();
            let expect = a
                .iter()
                .zip(&b)
                .fold(fld.zero(), |acc, (&x, &y)| fld.add(acc, fld.mul(x, y)));
            assert_eq!(fld.dot(&a, &b), expect);
        }
    }
}
