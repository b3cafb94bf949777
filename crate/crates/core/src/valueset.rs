//! Value sets of univariate polynomials and their averages over families
//! `T^d + a_{d-1} T^{d-1} + ... + a_1 T` with the top `s` coefficients fixed.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::Verdict;
use crate::error::{Error, Result};
use crate::exec::{Env, CHUNK};
use crate::gf::{Elem, Field};
use crate::points::PointsError;

/// Largest number of fixed-coefficient tuples examined per cell.
pub const MAX_TUPLES: usize = 25;

/// Rational bracket around `1/e`.
pub const INV_E_LOWER: (u64, u64) = (36_787_944_117_144_232, 100_000_000_000_000_000);
pub const INV_E_UPPER: (u64, u64) = (36_787_944_117_144_233, 100_000_000_000_000_000);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    /// Low degree first; the last entry is nonzero.
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Result<UniPoly> {
        for &c in &coeffs {
            field.check(c)?;
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::invalid("leading coefficient", "the zero polynomial has no degree"));
        }
        Ok(UniPoly {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Result<UniPoly> {
        UniPoly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }
}

/// `N(f) = |{f(c) : c in F_q}|`.
pub fn value_set_size(f: &UniPoly) -> u64 {
    let mut seen = vec![false; f.field.size() as usize];
    let mut n = 0;
    for c in f.field.elements() {
        let v = f.eval(c).index() as usize;
        if !seen[v] {
            seen[v] = true;
            n += 1;
        }
    }
    n
}

/// `mu_d = sum_{r=1}^d (-1)^{r-1} / r!`.
pub fn mu(d: u32) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::invalid("degree >= 1", "mu_d needs d >= 1"));
    }
    let mut fact = BigInt::one();
    let mut sum = BigRational::zero();
    for r in 1..=d {
        fact *= r;
        let term = BigRational::new(BigInt::one(), fact.clone());
        if r % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

fn q_pow(q: u64, e: i64) -> BigRational {
    let b = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(BigInt::one(), b)
    }
}

fn signed(r: usize, v: BigRational) -> BigRational {
    if r % 2 == 1 {
        v
    } else {
        -v
    }
}

/// `sum_{r=1}^{k} (-1)^{r-1} C(q, r) q^{1-r}`; with `k = d` this is the
/// average value set of the full family `s = 0`.
pub fn cohen_partial(q: u64, k: usize) -> BigRational {
    (1..=k)
        .map(|r| {
            signed(
                r,
                BigRational::from_integer(binomial(BigInt::from(q), BigInt::from(r))) * q_pow(q, 1 - r as i64),
            )
        })
        .sum()
}

/// Monic degree-`d` polynomials with zero constant term and the top `s`
/// lower coefficients fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSetFamily {
    field: Field,
    d: usize,
    s: usize,
    /// `a_{d-1}, ..., a_{d-s}`.
    top: Vec<Elem>,
}

impl ValueSetFamily {
    pub fn new(field: &Field, d: usize, s: usize, top: Vec<Elem>) -> Result<ValueSetFamily> {
        if d < 2 || s > d - 2 {
            return Err(Error::invalid(
                "0 <= s <= d - 2",
                format!("got d = {d}, s = {s}"),
            ));
        }
        if top.len() != s {
            return Err(Error::invalid(
                "fixed coefficients",
                format!("expected {s} fixed coefficients, got {}", top.len()),
            ));
        }
        for &c in &top {
            field.check(c)?;
        }
        Ok(ValueSetFamily {
            field: field.clone(),
            d,
            s,
            top,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn top(&self) -> &[Elem] {
        &self.top
    }

    /// Number of free coefficients, `d - s - 1`.
    pub fn free(&self) -> usize {
        self.d - self.s - 1
    }

    /// `T^d + sum_{i=d-s}^{d-1} a_i T^i`.
    pub fn base(&self) -> UniPoly {
        let mut c = vec![self.field.zero(); self.d + 1];
        c[self.d] = self.field.one();
        for (k, &a) in self.top.iter().enumerate() {
            c[self.d - 1 - k] = a;
        }
        UniPoly {
            field: self.field.clone(),
            coeffs: c,
        }
    }

    /// Member number `idx`; the free coefficients `a_1, ..., a_{d-s-1}`
    /// are the base-`q` digits of `idx` in element order.
    pub fn member(&self, mut idx: u64) -> UniPoly {
        let mut p = self.base();
        let q = self.field.size() as u64;
        for i in 1..=self.free() {
            p.coeffs[i] = self.field.nth_element((idx % q) as u32);
            idx /= q;
        }
        p
    }

    fn size(&self) -> Option<u64> {
        (self.field.size() as u64).checked_pow(self.free() as u32)
    }
}

fn budget(needed: Option<u128>, budget: u64) -> Result<()> {
    match needed {
        Some(n) if n <= budget as u128 => Ok(()),
        n => Err(Error::Points(PointsError::Budget {
            needed: n.unwrap_or(u128::MAX),
            budget,
        })),
    }
}

/// Mean of `N(f)` over the family, by evaluating every member.
pub fn average_direct(fam: &ValueSetFamily, env: &Env) -> Result<BigRational> {
    let q = fam.field.size() as u128;
    budget(fam.size().map(|n| n as u128 * q), env.budget)?;
    let size = fam.size().unwrap();
    let total = env.exec.map_reduce(
        size,
        CHUNK,
        0u64,
        |range| range.map(|i| value_set_size(&fam.member(i))).sum(),
        |a, b| a + b,
    );
    Ok(BigRational::new(total.into(), size.into()))
}

/// Divided differences of `vals` at `xs`, extended by one node.
/// `row[j]` holds `f[x_j, ..., x_{k-1}]`; on return it holds
/// `f[x_j, ..., x_k]` and has one more entry.
fn extend_newton(f: &Field, xs: &[Elem], row: &mut Vec<Elem>, fx: Elem) -> Result<()> {
    let k = xs.len() - 1;
    let xk = xs[k];
    let mut next = fx;
    row.push(fx);
    for j in (0..k).rev() {
        let den = f.inv(f.sub(xk, xs[j]))?;
        let v = f.mul(f.sub(next, row[j]), den);
        row[j + 1] = next;
        next = v;
    }
    row[0] = next;
    // row now stores f[x_0..x_k] at 0 and f[x_j..x_k] at j.
    Ok(())
}

/// Whether `f` agrees on `xs` with a polynomial of degree at most
/// `deg f - s - 1`.
pub fn is_allowable(f: &UniPoly, xs: &[Elem], s: usize) -> Result<bool> {
    let fld = &f.field;
    for (i, &a) in xs.iter().enumerate() {
        fld.check(a)?;
        if xs[..i].contains(&a) {
            return Err(Error::invalid("distinct elements", format!("{} repeats", fld.format(a))));
        }
    }
    let d = f.degree();
    let Some(limit) = d.checked_sub(s + 1) else {
        return Err(Error::invalid("s <= d - 1", format!("d = {d}, s = {s}")));
    };
    // Newton coefficients c_k = f[x_0..x_k]; degree <= limit iff c_k = 0 for k > limit.
    let mut coeffs = Vec::with_capacity(xs.len());
    let mut row: Vec<Elem> = Vec::new();
    for k in 0..xs.len() {
        let mut diag = Vec::with_capacity(k + 1);
        diag.push(f.eval(xs[k]));
        for j in (0..k).rev() {
            let prev = row[j];
            let den = fld.inv(fld.sub(xs[k], xs[j]))?;
            let v = fld.mul(fld.sub(*diag.last().unwrap(), prev), den);
            diag.push(v);
        }
        // diag[t] = f[x_{k-t}..x_k]; store as row[j] = f[x_j..x_k].
        diag.reverse();
        coeffs.push(diag[0]);
        row = diag;
    }
    Ok(coeffs.iter().skip(limit + 1).all(|c| c.is_zero()))
}

/// Number of allowable `r`-subsets for the family's base polynomial.
pub fn chi(fam: &ValueSetFamily, r: usize, env: &Env) -> Result<u64> {
    let (d, s) = (fam.d, fam.s);
    if r + s < d + 1 || r > d {
        return Err(Error::invalid(
            "d - s + 1 <= r <= d",
            format!("r = {r}, d = {d}, s = {s}"),
        ));
    }
    let q = fam.field.size() as u64;
    let needed = binomial(BigInt::from(q), BigInt::from(r));
    budget(u128::try_from(needed).ok(), env.budget)?;
    if r as u64 > q {
        return Ok(0);
    }
    let f = fam.base();
    let field = &fam.field;
    let elems: Vec<Elem> = field.elements().collect();
    let vals: Vec<Elem> = elems.iter().map(|&x| f.eval(x)).collect();
    let limit = d - s - 1;

    struct Search<'a> {
        field: &'a Field,
        elems: &'a [Elem],
        vals: &'a [Elem],
        r: usize,
        limit: usize,
    }
    impl Search<'_> {
        fn dfs(&self, start: usize, xs: &mut Vec<Elem>, row: &[Elem]) -> Result<u64> {
            if xs.len() == self.r {
                return Ok(1);
            }
            let mut count = 0;
            let remaining = self.r - xs.len();
            for i in start..=self.elems.len() - remaining {
                xs.push(self.elems[i]);
                let mut next = row.to_vec();
                extend_newton(self.field, xs, &mut next, self.vals[i])?;
                // The leading Newton coefficient is fixed by the prefix.
                if xs.len() <= self.limit + 1 || next[0].is_zero() {
                    count += self.dfs(i + 1, xs, &next)?;
                }
                xs.pop();
            }
            Ok(count)
        }
    }
    let search = Search {
        field,
        elems: &elems,
        vals: &vals,
        r,
        limit,
    };
    let firsts: Vec<usize> = (0..=elems.len() - r).collect();
    let parts = env.exec.map_items(firsts, |i| {
        let mut xs = vec![elems[i]];
        search.dfs(i + 1, &mut xs, &[vals[i]])
    });
    parts.into_iter().sum()
}

/// The average value set through allowable-subset counts.
pub fn average_via_chi(fam: &ValueSetFamily, env: &Env) -> Result<BigRational> {
    let q = fam.field.size() as u64;
    let (d, s) = (fam.d, fam.s);
    let mut total = cohen_partial(q, d - s);
    let scale = q_pow(q, -((d - s - 1) as i64));
    for r in d - s + 1..=d {
        let c = BigRational::from_integer(chi(fam, r, env)?.into());
        total += signed(r, c * &scale);
    }
    Ok(total)
}

fn factorial(r: usize) -> BigInt {
    (1..=r as u64).map(BigInt::from).product()
}

/// `D(s,d,r) = sum_{j=d-r+1}^{s} (j-1)` and `delta(s,d,r) = prod j`.
pub fn chi_shape(d: usize, s: usize, r: usize) -> (BigInt, BigInt) {
    let lo = d + 1 - r;
    let range = lo..=s;
    let big_d = range.clone().map(|j| BigInt::from(j as i64 - 1)).sum();
    let delta = range.map(|j| BigInt::from(j as u64)).product();
    (big_d, delta)
}

fn chi_regime(fam: &ValueSetFamily) -> Option<String> {
    (fam.s < 1 || 2 * fam.s > fam.d).then(|| format!("needs 1 <= s <= d/2, got d = {}, s = {}", fam.d, fam.s))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiCheck {
    pub r: usize,
    pub chi: u64,
    /// `q^{d-s} / r!`.
    pub main_term: BigRational,
    pub deviation: BigRational,
    pub bound: BigRational,
    pub verdict: Verdict,
}

/// `|chi - q^{d-s}/r!| <= (15/r!) D^3 delta^2 q^{d-s-1}`, recorded as data.
pub fn chi_bound_check(fam: &ValueSetFamily, r: usize, env: &Env) -> Result<ChiCheck> {
    let c = chi(fam, r, env)?;
    let q = fam.field.size() as u64;
    let (d, s) = (fam.d, fam.s);
    let rf = factorial(r);
    let main_term = BigRational::new(BigInt::from(q).pow((d - s) as u32), rf.clone());
    let deviation = (BigRational::from_integer(c.into()) - &main_term).abs();
    let (dd, delta) = chi_shape(d, s, r);
    let bound = BigRational::new(15 * dd.pow(3) * &delta * &delta, rf) * q_pow(q, (d - s - 1) as i64);
    let verdict = match chi_regime(fam) {
        Some(why) => Verdict::NotApplicable(why),
        None if deviation <= bound => Verdict::Holds,
        None => Verdict::Violated,
    };
    Ok(ChiCheck {
        r,
        chi: c,
        main_term,
        deviation,
        bound,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EBoundCheck {
    pub average: BigRational,
    pub mu_q: BigRational,
    pub gap: BigRational,
    pub e_lower: BigRational,
    pub e_upper: BigRational,
    pub verdict: Verdict,
}

/// `E(s,d)` with `1/e` replaced by each end of its bracket.
pub fn e_interval(d: usize, s: usize, q: u64) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    for r in d - s + 1..=d {
        let (dd, delta) = chi_shape(d, s, r);
        sum += BigRational::new(dd.pow(3) * &delta * &delta, factorial(r));
    }
    let rest = BigRational::from_integer(16.into()) * sum + BigRational::new((2 * d as u64).into(), q.into());
    let half = |(n, den): (u64, u64)| BigRational::new(n.into(), (2 * den as u128).into());
    (half(INV_E_LOWER) + &rest, half(INV_E_UPPER) + rest)
}

/// Three-valued check of `|N(d,s) - mu_d q| <= E(s,d)`.
pub fn e_bound_check(fam: &ValueSetFamily, env: &Env) -> Result<EBoundCheck> {
    let average = average_direct(fam, env)?;
    let q = fam.field.size() as u64;
    let mu_q = mu(fam.d as u32)? * BigRational::from_integer(q.into());
    let gap = (&average - &mu_q).abs();
    let (e_lower, e_upper) = e_interval(fam.d, fam.s, q);
    let verdict = match chi_regime(fam) {
        Some(why) => Verdict::NotApplicable(why),
        None if gap <= e_lower => Verdict::Holds,
        None if gap > e_upper => Verdict::Violated,
        None => Verdict::Inconclusive("gap falls inside the bracket of E".into()),
    };
    Ok(EBoundCheck {
        average,
        mu_q,
        gap,
        e_lower,
        e_upper,
        verdict,
    })
}

/// Fixed-coefficient tuples for a cell: all of them when there are at
/// most [`MAX_TUPLES`], otherwise a seeded sample, in index order.
pub fn fixed_tuples(field: &Field, s: usize, seed: u64) -> Vec<Vec<Elem>> {
    let q = field.size() as u64;
    let total = q.checked_pow(s as u32).unwrap_or(u64::MAX);
    let mut idx: Vec<u64> = if total <= MAX_TUPLES as u64 {
        (0..total).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let span = total.min(usize::MAX as u64) as usize;
        sample(&mut rng, span, MAX_TUPLES).into_iter().map(|i| i as u64).collect()
    };
    idx.sort_unstable();
    idx.into_iter()
        .map(|mut i| {
            (0..s)
                .map(|_| {
                    let e = field.nth_element((i % q) as u32);
                    i /= q;
                    e
                })
                .collect()
        })
        .collect()
}
