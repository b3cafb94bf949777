//! Sparse multivariate polynomials with a variable-group structure.
//!
//! Variables are numbered globally `X0, X1, ...`; the groups partition them
//! into consecutive blocks of sizes `n_1 + 1, ..., n_m + 1`. Terms live in a
//! `BTreeMap` keyed by [`Monomial`], which orders graded-lexicographically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{Elem, Embedding, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("group sizes must be positive")]
    EmptyGroup,
    #[error("polynomial parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("variable X{index} out of range (polynomial has {nvars} variables)")]
    VariableOutOfRange { index: usize, nvars: usize },
}

/// Exponent vector, one entry per variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct MultiPoly {
    field: Field,
    groups: Vec<usize>,
    terms: BTreeMap<Monomial, Elem>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.groups == other.groups && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[F_{}; {:?}]({})", self.field.name(), self.groups, self)
    }
}

impl MultiPoly {
    pub fn zero(field: &Field, groups: &[usize]) -> Result<MultiPoly, PolyError> {
        if groups.is_empty() || groups.iter().any(|&g| g == 0) {
            return Err(PolyError::EmptyGroup);
        }
        Ok(MultiPoly {
            field: field.clone(),
            groups: groups.to_vec(),
            terms: BTreeMap::new(),
        })
    }

    /// Single-group polynomial in `nvars` variables.
    pub fn homogeneous_ring(field: &Field, nvars: usize) -> MultiPoly {
        MultiPoly::zero(field, &[nvars]).expect("nvars > 0")
    }

    pub fn from_terms(
        field: &Field,
        groups: &[usize],
        terms: impl IntoIterator<Item = (Vec<u32>, Elem)>,
    ) -> Result<MultiPoly, PolyError> {
        let mut p = MultiPoly::zero(field, groups)?;
        let nvars = p.num_vars();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(PolyError::Arity {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Elem) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = f.add(*v, c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    pub fn num_vars(&self) -> usize {
        self.groups.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Elem)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Elem {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .copied()
            .unwrap_or(Elem::ZERO)
    }

    /// `None` for the zero polynomial (degree minus infinity).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn group_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.groups
            .iter()
            .map(|&g| {
                let r = start..start + g;
                start += g;
                r
            })
            .collect()
    }

    fn group_degree_of(&self, m: &Monomial) -> Vec<u32> {
        self.group_ranges()
            .into_iter()
            .map(|r| m.0[r].iter().sum())
            .collect()
    }

    /// Maximum degree in each group, `None` for the zero polynomial.
    pub fn group_degrees(&self) -> Option<Vec<u32>> {
        let mut out: Option<Vec<u32>> = None;
        for m in self.terms.keys() {
            let g = self.group_degree_of(m);
            out = Some(match out {
                None => g,
                Some(prev) => prev.iter().zip(&g).map(|(a, b)| *a.max(b)).collect(),
            });
        }
        out
    }

    /// The multidegree if every term has the same degree in each group.
    /// The zero polynomial has no multidegree.
    pub fn is_multihomogeneous(&self) -> Option<Vec<u32>> {
        let mut it = self.terms.keys();
        let first = self.group_degree_of(it.next()?);
        it.all(|m| self.group_degree_of(m) == first).then_some(first)
    }

    fn same_ring(&self, other: &MultiPoly) {
        assert!(
            self.field == other.field && self.groups == other.groups,
            "polynomials live in different rings"
        );
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.same_ring(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(*c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> MultiPoly {
        let mut out = MultiPoly {
            field: self.field.clone(),
            groups: self.groups.clone(),
            terms: BTreeMap::new(),
        };
        for (m, &v) in &self.terms {
            out.add_term(m.clone(), self.field.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.same_ring(other);
        let mut out = MultiPoly {
            field: self.field.clone(),
            groups: self.groups.clone(),
            terms: BTreeMap::new(),
        };
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let exps = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(exps), self.field.mul(ca, cb));
            }
        }
        out
    }

    /// Multiply by the variable `X_var`.
    pub fn mul_var(&self, var: usize) -> MultiPoly {
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let mut e = m.0.clone();
                e[var] += 1;
                (Monomial(e), c)
            })
            .collect();
        out
    }

    /// Formal partial derivative; `a * c` is reduced mod p, so exponents
    /// divisible by p drop out.
    pub fn partial_derivative(&self, var: usize) -> MultiPoly {
        let f = &self.field;
        let mut out = MultiPoly {
            field: f.clone(),
            groups: self.groups.clone(),
            terms: BTreeMap::new(),
        };
        for (m, &c) in &self.terms {
            let a = m.0[var];
            if a == 0 {
                continue;
            }
            let factor = f.from_int(a as i64);
            let mut e = m.0.clone();
            e[var] -= 1;
            out.add_term(Monomial(e), f.mul(c, factor));
        }
        out
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.num_vars())
            .map(|v| self.partial_derivative(v))
            .collect()
    }

    /// Evaluate at a flat coordinate vector over the polynomial's field.
    pub fn eval(&self, x: &[Elem]) -> Result<Elem, PolyError> {
        self.check_arity(x.len())?;
        Ok(self.eval_unchecked(x))
    }

    /// Evaluate at a point given as one coordinate vector per group.
    pub fn eval_groups(&self, x: &[Vec<Elem>]) -> Result<Elem, PolyError> {
        if x.len() != self.groups.len() {
            return Err(PolyError::Arity {
                expected: self.groups.len(),
                got: x.len(),
            });
        }
        for (g, xi) in self.groups.iter().zip(x) {
            if *g != xi.len() {
                return Err(PolyError::Arity {
                    expected: *g,
                    got: xi.len(),
                });
            }
        }
        let flat: Vec<Elem> = x.iter().flatten().copied().collect();
        self.eval(&flat)
    }

    fn check_arity(&self, got: usize) -> Result<(), PolyError> {
        let expected = self.num_vars();
        if got != expected {
            return Err(PolyError::Arity { expected, got });
        }
        Ok(())
    }

    pub(crate) fn eval_unchecked(&self, x: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (m, &c) in &self.terms {
            let mut t = c;
            for (&xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    t = f.mul(t, f.pow(xi, e as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// The same polynomial with coefficients pushed through `emb`.
    pub fn embed(&self, emb: &Embedding) -> MultiPoly {
        assert!(emb.source() == &self.field, "embedding source mismatch");
        MultiPoly {
            field: emb.target().clone(),
            groups: self.groups.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), emb.apply(c)))
                .collect(),
        }
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Compile for repeated evaluation.
    pub fn compile(&self) -> CompiledPoly {
        self.compile_with_stride(self.max_exponent() as usize + 1)
    }

    /// Compile against a power table of the given stride, so several
    /// polynomials can share one table. `stride` must exceed every exponent.
    pub fn compile_with_stride(&self, stride: usize) -> CompiledPoly {
        assert!(stride > self.max_exponent() as usize, "stride too small");
        let nvars = self.num_vars();
        let max_exp = stride - 1;
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let factors = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| (v * (max_exp + 1) + e as usize) as u32)
                    .collect();
                (c, factors)
            })
            .collect();
        CompiledPoly {
            field: self.field.clone(),
            nvars,
            stride: max_exp + 1,
            terms,
        }
    }

    /// Random polynomial with every monomial of the given multidegree, with
    /// coefficients drawn from a seeded ChaCha stream. Redrawn until nonzero.
    pub fn random_multihomogeneous(
        field: &Field,
        groups: &[usize],
        multidegree: &[u32],
        seed: u64,
    ) -> Result<MultiPoly, PolyError> {
        if groups.len() != multidegree.len() {
            return Err(PolyError::Arity {
                expected: groups.len(),
                got: multidegree.len(),
            });
        }
        let monos = multihomogeneous_monomials(groups, multidegree);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = field.size();
        loop {
            let terms = monos
                .iter()
                .map(|m| (m.clone(), Elem(rng.gen_range(0..q))))
                .collect::<Vec<_>>();
            let p = MultiPoly::from_terms(field, groups, terms)?;
            if !p.is_zero() {
                return Ok(p);
            }
        }
    }

    /// Parse `c*X0^a*X1^b + ...`. Every variable factor needs an explicit
    /// `^exponent`; coefficients are integers reduced into the prime field.
    pub fn parse(text: &str, field: &Field, groups: &[usize]) -> Result<MultiPoly, PolyError> {
        let mut p = MultiPoly::zero(field, groups)?;
        let nvars = p.num_vars();
        let err = |token: &str, reason: &str| PolyError::Parse {
            token: token.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err(text, "empty polynomial"));
        }
        // Split into signed terms.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(i > 0 && compact[..i].ends_with('^')) {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                } else if i > 0 {
                    return Err(err(&compact, "two signs in a row or empty term"));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err(&compact, "trailing sign"));
        }
        terms.push((neg, cur));

        let p_char = field.characteristic() as i64;
        for (neg, term) in terms {
            let mut coef: i64 = 1;
            let mut exps = vec![0u32; nvars];
            for (k, factor) in term.split('*').enumerate() {
                if factor.is_empty() {
                    return Err(err(&term, "empty factor"));
                }
                if let Some(rest) = factor.strip_prefix('X') {
                    let (idx, e) = rest
                        .split_once('^')
                        .ok_or_else(|| err(factor, "missing `^exponent`"))?;
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| err(factor, "bad variable index"))?;
                    let e: u32 = e.parse().map_err(|_| err(factor, "bad exponent"))?;
                    if idx >= nvars {
                        return Err(PolyError::VariableOutOfRange { index: idx, nvars });
                    }
                    exps[idx] += e;
                } else if k == 0 {
                    let v: i64 = factor
                        .parse()
                        .map_err(|_| err(factor, "expected an integer coefficient or X<i>^<e>"))?;
                    coef = v.rem_euclid(p_char);
                } else {
                    return Err(err(factor, "coefficient must come first"));
                }
            }
            if neg {
                coef = (-coef).rem_euclid(p_char);
            }
            p.add_term(Monomial(exps), field.from_int(coef));
        }
        Ok(p)
    }
}

impl fmt::Display for MultiPoly {
    /// Writes the parseable text form. Coefficients outside the prime field
    /// are shown as `[..]` polynomials in `x` and will not parse back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, &c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.index() < self.field.characteristic() {
                write!(f, "{}", c.index())?;
            } else {
                write!(f, "[{}]", self.field.format(c))?;
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    write!(f, "*X{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// All exponent vectors of degree `d` in `nvars` variables, in increasing
/// lexicographic order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars > 0 {
        rec(0, d, &mut cur, &mut out);
    } else if d == 0 {
        out.push(Vec::new());
    }
    out
}

fn multihomogeneous_monomials(groups: &[usize], degrees: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for (&g, &d) in groups.iter().zip(degrees) {
        let block = monomials_of_degree(g, d);
        out = out
            .iter()
            .flat_map(|prefix| {
                block.iter().map(move |b| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(b);
                    v
                })
            })
            .collect();
    }
    out
}

/// Flattened term list for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    field: Field,
    nvars: usize,
    stride: usize,
    /// Each factor indexes the power table as `var * stride + exponent`.
    terms: Vec<(Elem, Vec<u32>)>,
}

impl CompiledPoly {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Power table for `x`, reusable across several polynomials with the
    /// same stride.
    pub fn powers(&self, x: &[Elem], buf: &mut Vec<Elem>) {
        let f = &self.field;
        buf.clear();
        buf.reserve(self.nvars * self.stride);
        for &xi in x {
            let mut acc = f.one();
            for _ in 0..self.stride {
                buf.push(acc);
                acc = f.mul(acc, xi);
            }
        }
    }

    pub fn eval_powers(&self, pw: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &i in factors {
                t = f.mul(t, pw[i as usize]);
            }
            acc = f.add(acc, t);
        }
        acc
    }

    pub fn eval(&self, x: &[Elem], buf: &mut Vec<Elem>) -> Elem {
        debug_assert_eq!(x.len(), self.nvars);
        self.powers(x, buf);
        self.eval_powers(buf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn parse(s: &str, q: (u64, u32), groups: &[usize]) -> MultiPoly {
        MultiPoly::parse(s, &make_field(q.0, q.1).unwrap(), groups).unwrap()
    }

    #[test]
    fn eval_examples() {
        let conic = parse("1*X0^1*X2^1 - 1*X1^2", (3, 1), &[3]);
        assert_eq!(conic.eval(&[Elem(1); 3]).unwrap(), Elem(0));
        let fermat = parse("1*X0^3 + 1*X1^3 + 1*X2^3", (5, 1), &[3]);
        assert_eq!(fermat.eval(&[Elem(1); 3]).unwrap(), Elem(3));
        assert!(matches!(fermat.eval(&[Elem(1); 2]), Err(PolyError::Arity { .. })));
    }

    #[test]
    fn derivative_examples() {
        let sq = parse("1*X0^2", (2, 1), &[1]);
        assert!(sq.partial_derivative(0).is_zero());
        let conic = parse("1*X0^1*X2^1 - 1*X1^2", (3, 1), &[3]);
        assert_eq!(conic.partial_derivative(1), parse("1*X1^1", (3, 1), &[3]));
        let cube = parse("1*X0^3", (5, 1), &[1]);
        assert_eq!(cube.partial_derivative(0), parse("3*X0^2", (5, 1), &[1]));
    }

    #[test]
    fn gradient_of_cone_and_constant() {
        let f = parse("1*X1^2 - 1*X0^1*X2^1", (3, 1), &[3]);
        let g = f.gradient();
        assert_eq!(g[0], parse("-1*X2^1", (3, 1), &[3]));
        assert_eq!(g[1], parse("2*X1^1", (3, 1), &[3]));
        assert_eq!(g[2], parse("-1*X0^1", (3, 1), &[3]));
        let c = parse("5", (7, 1), &[2]);
        assert!(c.gradient().iter().all(MultiPoly::is_zero));
    }

    #[test]
    fn multihomogeneity_and_degrees() {
        let conic = parse("1*X0^1*X2^1 - 1*X1^2", (3, 1), &[3]);
        assert_eq!(conic.is_multihomogeneous(), Some(vec![2]));
        assert_eq!(conic.total_degree(), Some(2));
        let bi = parse("1*X0^1*X2^1", (2, 1), &[2, 2]);
        assert_eq!(bi.is_multihomogeneous(), Some(vec![1, 1]));
        let mixed = parse("1*X0^2 + 1*X0^1", (3, 1), &[1]);
        assert_eq!(mixed.is_multihomogeneous(), None);
        let zero = MultiPoly::zero(&make_field(3, 1).unwrap(), &[2]).unwrap();
        assert_eq!(zero.total_degree(), None);
        assert_eq!(zero.is_multihomogeneous(), None);
        let x03x1 = parse("1*X0^3*X1^1", (3, 1), &[2]);
        assert_eq!(x03x1.group_degrees(), Some(vec![4]));
    }

    #[test]
    fn parse_errors_cite_token() {
        let f3 = make_field(3, 1).unwrap();
        let e = MultiPoly::parse("1*X0", &f3, &[2]).unwrap_err().to_string();
        assert!(e.contains("X0"), "{e}");
        assert!(MultiPoly::parse("1*X5^1", &f3, &[2]).is_err());
        assert!(MultiPoly::parse("1*X0^1 +", &f3, &[2]).is_err());
        assert!(MultiPoly::parse("X0^1*2", &f3, &[2]).is_err());
        assert!(MultiPoly::parse("", &f3, &[2]).is_err());
    }

    #[test]
    fn display_round_trips() {
        let f = parse("2*X0^3 - 1*X1^1*X2^2 + 4", (5, 1), &[3]);
        let again = parse(&f.to_string(), (5, 1), &[3]);
        assert_eq!(f, again);
    }

    #[test]
    fn coefficients_reduce_mod_p() {
        assert_eq!(parse("7*X0^1", (5, 1), &[1]), parse("2*X0^1", (5, 1), &[1]));
        assert!(parse("5*X0^1", (5, 1), &[1]).is_zero());
    }

    #[test]
    fn euler_identity_on_fermat_and_quadric() {
        for (s, d, q) in [
            ("1*X0^3 + 1*X1^3 + 1*X2^3 + 1*X3^3", 3, (5, 1)),
            ("1*X0^1*X3^1 - 1*X1^1*X2^1", 2, (7, 1)),
            ("1*X0^2 + 2*X1^2 + 3*X2^2", 2, (3, 2)),
        ] {
            let f = parse(s, q, &[4]);
            let mut lhs = MultiPoly::zero(f.field(), &[4]).unwrap();
            for (j, g) in f.gradient().iter().enumerate() {
                lhs = lhs.add(&g.mul_var(j));
            }
            assert_eq!(lhs, f.scale(f.field().from_int(d)));
        }
    }

    #[test]
    fn random_multihomogeneous_is_seed_stable() {
        let f = make_field(5, 1).unwrap();
        let a = MultiPoly::random_multihomogeneous(&f, &[2, 3], &[2, 1], 9).unwrap();
        let b = MultiPoly::random_multihomogeneous(&f, &[2, 3], &[2, 1], 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.is_multihomogeneous(), Some(vec![2, 1]));
        let distinct: std::collections::HashSet<String> = (0..100)
            .map(|s| {
                MultiPoly::random_multihomogeneous(&f, &[2, 3], &[2, 1], s)
                    .unwrap()
                    .to_string()
            })
            .collect();
        assert!(distinct.len() >= 99, "{} distinct", distinct.len());
    }

    #[test]
    fn compiled_matches_direct() {
        let f = make_field(3, 2).unwrap();
        let p = MultiPoly::random_multihomogeneous(&f, &[3], &[3], 4).unwrap();
        let c = p.compile();
        let mut buf = Vec::new();
        for a in f.elements() {
            for b in f.elements() {
                let x = [a, b, f.one()];
                assert_eq!(c.eval(&x, &mut buf), p.eval(&x).unwrap());
            }
        }
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(1, 4), vec![vec![4]]);
        assert_eq!(multihomogeneous_monomials(&[2, 3], &[1, 2]).len(), 2 * 6);
    }
}
