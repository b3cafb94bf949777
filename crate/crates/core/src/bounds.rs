//! Exact evaluation of point-count bounds, existence thresholds and
//! verdicts against measured counts.
//!
//! Values of the form `a + b*sqrt(q)` are kept as [`Surd`]s and compared
//! with integers by squaring, so no verdict depends on rounding.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::points::p_r;

/// `rational + root * sqrt(q)` with integer parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub rational: BigInt,
    pub root: BigInt,
    pub q: u64,
}

impl Surd {
    pub fn int(v: impl Into<BigInt>, q: u64) -> Surd {
        Surd {
            rational: v.into(),
            root: BigInt::zero(),
            q,
        }
    }

    /// `coeff * q^{half_exp / 2}`.
    pub fn q_half_power(coeff: impl Into<BigInt>, q: u64, half_exp: u32) -> Surd {
        let coeff = coeff.into();
        let base = BigInt::from(q).pow(half_exp / 2);
        if half_exp % 2 == 0 {
            Surd::int(coeff * base, q)
        } else {
            Surd {
                rational: BigInt::zero(),
                root: coeff * base,
                q,
            }
        }
    }

    pub fn add(&self, other: &Surd) -> Surd {
        assert_eq!(self.q, other.q, "surds over different q");
        Surd {
            rational: &self.rational + &other.rational,
            root: &self.root + &other.root,
            q: self.q,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.root.is_zero()
    }

    /// `self >= m`, decided exactly.
    pub fn ge(&self, m: &BigInt) -> bool {
        let t = m - &self.rational;
        let b2q = &self.root * &self.root * BigInt::from(self.q);
        if !self.root.is_negative() {
            !t.is_positive() || &t * &t <= b2q
        } else {
            t.is_negative() && &t * &t >= b2q
        }
    }

    /// `self > m`, decided exactly.
    pub fn gt(&self, m: &BigInt) -> bool {
        self.ge(m) && !self.equals(m)
    }

    fn equals(&self, m: &BigInt) -> bool {
        if self.root.is_zero() {
            return &self.rational == m;
        }
        // b*sqrt(q) is an integer only when q is a square.
        let s = BigInt::from(self.q).sqrt();
        &s * &s == BigInt::from(self.q) && &self.rational + &self.root * s == *m
    }

    fn root_part_floor(&self) -> BigInt {
        let b2q = &self.root * &self.root * BigInt::from(self.q);
        let s = b2q.sqrt();
        if self.root.is_negative() {
            if &s * &s == b2q {
                -s
            } else {
                -s - 1
            }
        } else {
            s
        }
    }

    pub fn floor(&self) -> BigInt {
        &self.rational + self.root_part_floor()
    }

    pub fn ceil(&self) -> BigInt {
        let f = self.floor();
        if self.equals(&f) {
            f
        } else {
            f + 1
        }
    }

    /// Approximate value, for display only.
    pub fn approx(&self) -> f64 {
        self.rational.to_f64().unwrap_or(f64::INFINITY)
            + self.root.to_f64().unwrap_or(f64::INFINITY) * (self.q as f64).sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root.is_zero() {
            write!(f, "{}", self.rational)
        } else if self.rational.is_zero() {
            write!(f, "{}*sqrt({})", self.root, self.q)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rational, self.root, self.q)
        }
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn delta_of(d: &[u32]) -> BigInt {
    d.iter().map(|&x| big(x as u64)).product()
}

fn big_d_of(d: &[u32]) -> BigInt {
    d.iter().map(|&x| BigInt::from(x as i64 - 1)).sum()
}

fn arity(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::invalid(
            "multidegree arity",
            format!("{what} needs {expected} degrees, got {got}"),
        ));
    }
    Ok(())
}

/// Primitive first Betti number of a smooth complete intersection curve
/// in `P^n` with multidegree `d` (`n - 1` entries).
pub fn betti_b1(n: usize, d: &[u32]) -> Result<BigInt> {
    if n < 1 {
        return Err(Error::invalid("multidegree arity", "n must be >= 1"));
    }
    arity("b1'", n - 1, d.len())?;
    let sum: BigInt = d.iter().map(|&x| big(x as u64)).sum();
    Ok(delta_of(d) * (sum - big(n as u64) - 1) + 2)
}

/// Primitive second Betti number of a smooth complete intersection
/// surface in `P^n` (`n - 2` entries).
pub fn betti_b2(n: usize, d: &[u32]) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::invalid("multidegree arity", "n must be >= 2"));
    }
    arity("b2'", n - 2, d.len())?;
    let n1 = big(n as u64 + 1);
    let binom = &n1 * (&n1 - 1) / 2;
    let sum: BigInt = d.iter().map(|&x| big(x as u64)).sum();
    let mut pairs = BigInt::zero();
    for i in 0..d.len() {
        for j in i..d.len() {
            pairs += big(d[i] as u64 * d[j] as u64);
        }
    }
    Ok(delta_of(d) * (binom - n1 * sum + pairs) - 3)
}

/// `(n - 1) D^2 delta`, an upper bound for [`betti_b2`].
pub fn betti_b2_upper(n: usize, d: &[u32]) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::invalid("multidegree arity", "n must be >= 2"));
    }
    arity("b2' upper bound", n - 2, d.len())?;
    let dd = big_d_of(d);
    Ok(big(n as u64 - 1) * &dd * &dd * delta_of(d))
}

/// `b * q^{r/2}`.
pub fn deligne_bound(q: u64, r: u32, b: impl Into<BigInt>) -> Surd {
    Surd::q_half_power(b, q, r)
}

fn check_multi_shape(d: &[u32], n: &[usize]) -> Result<()> {
    if d.len() != n.len() || d.is_empty() {
        return Err(Error::invalid(
            "multidegree arity",
            format!("{} degrees for {} factors", d.len(), n.len()),
        ));
    }
    Ok(())
}

fn signed_subset_sum(d: &[u32], term: impl Fn(usize, bool) -> BigInt) -> BigInt {
    let m = d.len();
    let mut total = BigInt::zero();
    for mask in 1u32..(1 << m) {
        let mut t = BigInt::one();
        for i in 0..m {
            let on = mask >> i & 1 == 1;
            if on {
                t *= big(d[i] as u64);
            }
            t *= term(i, on);
        }
        if mask.count_ones() % 2 == 1 {
            total += t;
        } else {
            total -= t;
        }
    }
    total
}

/// Upper bound for the zeros in `P^{n_1} x ... x P^{n_m}` of a
/// multihomogeneous polynomial of multidegree `d`.
pub fn eta(d: &[u32], n: &[usize], q: u64) -> Result<BigInt> {
    check_multi_shape(d, n)?;
    Ok(signed_subset_sum(d, |i, on| {
        p_r(q, n[i] as i64 - on as i64)
    }))
}

/// Affine analogue of [`eta`] on `F_q^{n_1+1} x ... x F_q^{n_m+1}`.
pub fn eta_affine(d: &[u32], n: &[usize], q: u64) -> Result<BigInt> {
    check_multi_shape(d, n)?;
    Ok(signed_subset_sum(d, |i, on| {
        big(q).pow(n[i] as u32 + 1 - on as u32)
    }))
}

/// `q^{|n|} prod (q - d_i)`, a lower bound for affine non-zeros.
pub fn nonzero_lower(d: &[u32], n: &[usize], q: u64) -> BigInt {
    let total: usize = n.iter().sum();
    d.iter()
        .fold(big(q).pow(total as u32), |acc, &di| acc * (big(q) - big(di as u64)))
}

/// `delta q^{n-1} + p_{n-2}` for a degree-`delta` hypersurface in `P^n`.
pub fn serre_hypersurface(delta: u64, n: usize, q: u64) -> BigInt {
    big(delta) * big(q).pow(n as u32 - 1) + p_r(q, n as i64 - 2)
}

/// `p_n^m - (q^n - (d-1) q^{n-1})^m`.
pub fn serre_multih(d: u32, n: usize, m: u32, q: u64) -> Result<BigInt> {
    if d < 1 || n < 1 {
        return Err(Error::invalid("degree >= 1", format!("d = {d}, n = {n}")));
    }
    let qn = big(q).pow(n as u32);
    let inner = &qn - big(d as u64 - 1) * big(q).pow(n as u32 - 1);
    Ok(p_r(q, n as i64).pow(m) - inner.pow(m))
}

/// Shape data shared by the variety bounds. Degrees are nonincreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundContext {
    pub n: usize,
    pub r: usize,
    /// Declared bound on `dim Sing(V)`; `None` for smooth.
    pub s: Option<usize>,
    pub degrees: Vec<u32>,
    pub q: u64,
    /// User-supplied primitive Betti numbers `b'_k(m, d)`, keyed by `(k, m)`.
    pub betti: BTreeMap<(usize, usize), BigInt>,
}

impl BoundContext {
    pub fn new(n: usize, r: usize, s: Option<usize>, degrees: &[u32], q: u64) -> Result<Self> {
        if r >= n {
            return Err(Error::invalid("dimension", format!("need r < n, got r = {r}, n = {n}")));
        }
        if degrees.len() != n - r {
            return Err(Error::invalid(
                "codimension",
                format!("expected {} degrees, got {}", n - r, degrees.len()),
            ));
        }
        if degrees.iter().any(|&d| d == 0) {
            return Err(Error::invalid("generator degree", "degrees must be >= 1"));
        }
        if let Some(s) = s {
            if r < 2 || s > r - 2 {
                return Err(Error::invalid(
                    "singular bound",
                    format!("need 0 <= s <= r - 2, got s = {s}, r = {r}"),
                ));
            }
        }
        let mut degrees = degrees.to_vec();
        degrees.sort_by(|a, b| b.cmp(a));
        Ok(BoundContext {
            n,
            r,
            s,
            degrees,
            q,
            betti: BTreeMap::new(),
        })
    }

    pub fn with_betti(mut self, k: usize, m: usize, value: impl Into<BigInt>) -> Self {
        self.betti.insert((k, m), value.into());
        self
    }

    pub fn delta(&self) -> BigInt {
        delta_of(&self.degrees)
    }

    pub fn big_d(&self) -> BigInt {
        big_d_of(&self.degrees)
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees[0]
    }

    /// `b'_k(m, d)`: built in for `k <= 2`, otherwise injected.
    pub fn primitive_betti(&self, k: usize, m: usize) -> Option<BigInt> {
        if let Some(v) = self.betti.get(&(k, m)) {
            return Some(v.clone());
        }
        match k {
            1 => betti_b1(m, &self.degrees).ok(),
            2 => betti_b2(m, &self.degrees).ok(),
            _ => None,
        }
    }

    /// `b'_{r-s-1}(n-s-1, d)`.
    pub fn b_prime(&self, s: usize) -> Option<BigInt> {
        self.primitive_betti(self.r - s - 1, self.n - s - 1)
    }

    /// Whether `dim Sing(V) <= s` follows from the declaration.
    pub fn covers(&self, s: usize) -> bool {
        self.r >= 2 && s <= self.r - 2 && self.s.map_or(true, |t| t <= s)
    }

    fn all_nonlinear(&self) -> bool {
        self.degrees.iter().all(|&d| d >= 2)
    }
}

fn check_s(ctx: &BoundContext, s: usize) -> Result<()> {
    if ctx.r < 2 || s > ctx.r - 2 {
        return Err(Error::invalid(
            "singular bound",
            format!("need 0 <= s <= r - 2, got s = {s}, r = {}", ctx.r),
        ));
    }
    Ok(())
}

/// `B_{d,s} = D^{r-s-2} delta (((n-s)(r-s)+2) D + r-s-1) + delta + 1`.
pub fn b_ds(ctx: &BoundContext, s: usize) -> Result<BigInt> {
    check_s(ctx, s)?;
    let (n, r) = (ctx.n as u64, ctx.r as u64);
    let s = s as u64;
    let dd = ctx.big_d();
    let delta = ctx.delta();
    let inner = big((n - s) * (r - s) + 2) * &dd + big(r - s - 1);
    Ok(dd.pow((r - s - 2) as u32) * &delta * inner + delta + 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Estimate {
    pub s: usize,
    pub b_prime: BigInt,
    /// `A` (total) or `B` (smooth locus).
    pub constant: BigInt,
    pub theorem: Surd,
    pub corollary: Surd,
    /// The smaller 8(r+1) constant for the smooth codimension-2
    /// corollary, kept as an alternate.
    pub corollary_alt: Option<Surd>,
}

/// Bounds on `||V(F_q)| - p_r|` (or `||V_sm(F_q)| - p_r|` when `smooth`)
/// for `s in {r-2, r-3}`.
pub fn main_estimate(ctx: &BoundContext, s: usize, smooth: bool) -> Result<Estimate> {
    check_s(ctx, s)?;
    if s + 3 < ctx.r {
        return Err(Error::invalid(
            "s in {r-2, r-3}",
            format!("s = {s}, r = {}", ctx.r),
        ));
    }
    if !ctx.all_nonlinear() {
        return Err(Error::invalid(
            "generator degree >= 2",
            format!("degrees {:?}", ctx.degrees),
        ));
    }
    let b = ctx.b_prime(s).ok_or_else(|| {
        Error::invalid("primitive Betti number", format!("b'_{} unavailable", ctx.r - s - 1))
    })?;
    let (q, r) = (ctx.q, ctx.r as u32);
    let dd = ctx.big_d();
    let delta = ctx.delta();
    let d_pow = dd.pow(r - s as u32);
    let constant = if smooth {
        BigInt::from(2) * &b
            + 2 * (2 * &d_pow * &delta + 1) * (&delta - 1)
            + 2 * big(s as u64 + 2) * (&delta - 1) * b_ds(ctx, s)?
    } else {
        BigInt::from(2) * &b + 2 * (7 * &d_pow * &delta + 1) * (&delta - 1)
    };
    let theorem = Surd::q_half_power(b.clone(), q, r + s as u32 + 1)
        .add(&Surd::int(&constant * big(q).pow(r - 1), q));
    let d2d2 = &dd * &dd * &delta * &delta;
    let qr1 = big(q).pow(r - 1);
    let (corollary, corollary_alt) = if s + 2 == ctx.r {
        let lead = Surd::q_half_power(&delta * (&dd - 2) + 2, q, 2 * r - 1);
        let c = if smooth { 11 * big(r as u64 + 1) } else { big(14) };
        let alt = smooth.then(|| lead.add(&Surd::int(8 * big(r as u64 + 1) * &d2d2 * &qr1, q)));
        (lead.add(&Surd::int(c * &d2d2 * &qr1, q)), alt)
    } else {
        let c = if smooth { BigInt::from(34 * r as i64 - 20) } else { big(14) };
        (Surd::int(c * &dd * &d2d2 * qr1, q), None)
    };
    Ok(Estimate {
        s,
        b_prime: b,
        constant,
        theorem,
        corollary,
        corollary_alt,
    })
}

/// `9 * 2^{n-r} ((n-r) d + 3)^{n+1}` with `d = max d_i`.
pub fn gl_constant(n: usize, r: usize, d: u32) -> BigInt {
    let c = (n - r) as u64;
    9 * BigInt::from(2).pow(c as u32) * big(c * d as u64 + 3).pow(n as u32 + 1)
}

/// `b' q^{(r+s+1)/2} + C q^{(r+s)/2}`.
pub fn gl_bound(ctx: &BoundContext, s: usize) -> Result<Surd> {
    check_s(ctx, s)?;
    let b = ctx.b_prime(s).ok_or_else(|| {
        Error::invalid("primitive Betti number", format!("b'_{} unavailable", ctx.r - s - 1))
    })?;
    let e = (ctx.r + s) as u32;
    Ok(Surd::q_half_power(b, ctx.q, e + 1).add(&Surd::q_half_power(
        gl_constant(ctx.n, ctx.r, ctx.max_degree()),
        ctx.q,
        e,
    )))
}

/// `b1'(n-r+1) q^{r-1/2} + 2((n-r) d delta)^2 q^{r-1}` and whether
/// `q > 2(n-r) d delta + 1`.
pub fn cm_bound(ctx: &BoundContext) -> Result<(Surd, bool)> {
    if ctx.r < 1 {
        return Err(Error::invalid("dimension", "r must be >= 1"));
    }
    let c = big((ctx.n - ctx.r) as u64) * big(ctx.max_degree() as u64) * ctx.delta();
    let b1 = betti_b1(ctx.n - ctx.r + 1, &ctx.degrees)?;
    let r = ctx.r as u32;
    let bound = Surd::q_half_power(b1, ctx.q, 2 * r - 1)
        .add(&Surd::int(2 * &c * &c * big(ctx.q).pow(r - 1), ctx.q));
    let valid = big(ctx.q) > 2 * c + 1;
    Ok((bound, valid))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BoundClass {
    /// Fully proved; a violation is a failure.
    Hard,
    /// Recorded for comparison only.
    Soft,
}

impl fmt::Display for BoundClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundClass::Hard => "hard",
            BoundClass::Soft => "soft",
        })
    }
}

/// `q > value` guarantees the property. `value` is the largest integer
/// for which the guarantee does not apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Threshold {
    pub name: &'static str,
    pub class: BoundClass,
    pub value: Option<BigInt>,
    pub note: String,
}

impl Threshold {
    pub fn guaranteed(&self, q: u64) -> bool {
        self.value.as_ref().is_some_and(|t| big(q) > *t)
    }
}

/// Largest integer `t` with `t^e <= x` (`x >= 0`).
fn floor_root(x: &BigInt, e: u32) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    x.nth_root(e)
}

/// Existence thresholds for a smooth F_q-point (and a nonsingular
/// linear section), each evaluated where its hypotheses hold.
pub fn existence_thresholds(ctx: &BoundContext) -> Vec<Threshold> {
    let mut out = Vec::new();
    let dd = ctx.big_d();
    let delta = ctx.delta();
    let nonlinear = ctx.all_nonlinear();
    let (n, r) = (ctx.n, ctx.r);
    let na = |name, class, note: &str| Threshold {
        name,
        class,
        value: None,
        note: note.to_string(),
    };
    let Some(s) = (r >= 2).then(|| ctx.s.unwrap_or(0)) else {
        for name in ["existence", "existence-codim2", "existence-codim3", "section", "section-intro"] {
            out.push(na(name, BoundClass::Hard, "needs r >= 2"));
        }
        return out;
    };
    let d_rs = dd.pow((r - s) as u32) * &delta;
    let bds = b_ds(ctx, s).expect("s checked by the context");

    // max{B, D^{r-s} delta, b'^{2/(r-s-1)}}
    out.push(match ctx.b_prime(s) {
        Some(b) if nonlinear => {
            let e = (r - s - 1) as u32;
            let root = floor_root(&(&b * &b), e);
            let v = bds.clone().max(d_rs.clone()).max(root);
            Threshold {
                name: "existence",
                class: BoundClass::Hard,
                value: Some(v),
                note: format!("s = {s}, b' = {b}"),
            }
        }
        Some(_) => na("existence", BoundClass::Hard, "needs every d_i >= 2"),
        None => na(
            "existence",
            BoundClass::Hard,
            &format!("b'_{}({}) not available", r - s - 1, n - s - 1),
        ),
    });

    out.push(if !nonlinear {
        na("existence-codim2", BoundClass::Hard, "needs every d_i >= 2")
    } else {
        let big_case = dd >= big(5) || (dd == big(4) && n - r > 1);
        let v = if big_case {
            let b1 = &delta * (&dd - 2) + 2;
            &b1 * &b1
        } else {
            (big(2 * (n - r) as u64 + 6) * &dd + 2) * &delta + 1
        };
        Threshold {
            name: "existence-codim2",
            class: BoundClass::Hard,
            value: Some(v),
            note: if big_case { "D >= 5 or D = 4, n - r > 1" } else { "small-D branch" }.into(),
        }
    });

    out.push(if !nonlinear {
        na("existence-codim3", BoundClass::Hard, "needs every d_i >= 2")
    } else if r < 3 || !ctx.covers(r - 3) {
        na("existence-codim3", BoundClass::Hard, "needs dim Sing(V) <= r - 3")
    } else {
        Threshold {
            name: "existence-codim3",
            class: BoundClass::Hard,
            value: Some(3 * &dd * (&dd + 2) * (&dd + 2) * &delta),
            note: String::new(),
        }
    });

    out.push(if nonlinear {
        Threshold {
            name: "section",
            class: BoundClass::Hard,
            value: Some(bds.max(d_rs)),
            note: format!("nonsingular section of dimension {}", r - s - 1),
        }
    } else {
        na("section", BoundClass::Hard, "needs every d_i >= 2")
    });

    out.push(Threshold {
        name: "section-intro",
        class: BoundClass::Soft,
        value: Some(big((n as u64 + 1).pow(2)) * dd.pow((r - s - 1) as u32) * &delta),
        note: "alternate (n+1)^2 D^(r-s-1) delta threshold".into(),
    });
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    NotApplicable(String),
    Inconclusive(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::NotApplicable(_) => "not-applicable",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }

    pub fn reason(&self) -> &str {
        match self {
            Verdict::NotApplicable(r) | Verdict::Inconclusive(r) => r,
            _ => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: String,
    pub class: BoundClass,
    /// What is measured, e.g. `|N - p_r|`.
    pub quantity: String,
    pub measured: Option<BigInt>,
    /// `"<="` or `">="`.
    pub relation: &'static str,
    pub bound: Option<Surd>,
    pub verdict: Verdict,
}

impl BoundCheck {
    pub fn statement(&self) -> String {
        let lhs = match &self.measured {
            Some(m) => format!("{} = {m}", self.quantity),
            None => self.quantity.clone(),
        };
        let rhs = self.bound.as_ref().map_or("?".to_string(), |b| b.to_string());
        format!("{}: {lhs} {} {rhs} [{}]", self.name, self.relation, self.verdict.label())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Measurements {
    pub total: Option<BigInt>,
    pub smooth: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub context: BoundContext,
    pub checks: Vec<BoundCheck>,
    pub thresholds: Vec<Threshold>,
}

impl BoundReport {
    pub fn hard_violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks
            .iter()
            .filter(|c| c.class == BoundClass::Hard && c.verdict == Verdict::Violated)
    }

    pub fn any_hard_violation(&self) -> bool {
        self.hard_violations().next().is_some()
    }
}

fn upper(name: String, class: BoundClass, quantity: &str, m: Option<&BigInt>, bound: Result<Surd>) -> BoundCheck {
    let (bound, verdict) = match (bound, m) {
        (Err(e), _) => (None, Verdict::NotApplicable(e.to_string())),
        (Ok(b), None) => (Some(b), Verdict::Inconclusive("no measurement".into())),
        (Ok(b), Some(m)) => {
            let v = if b.ge(m) { Verdict::Holds } else { Verdict::Violated };
            (Some(b), v)
        }
    };
    BoundCheck {
        name,
        class,
        quantity: quantity.to_string(),
        measured: m.cloned(),
        relation: "<=",
        bound,
        verdict,
    }
}

/// Evaluate every applicable bound against the measured counts.
pub fn check(ctx: &BoundContext, m: &Measurements) -> Result<BoundReport> {
    if m.total.is_none() && m.smooth.is_none() {
        return Err(Error::invalid("measurements", "no measured counts supplied"));
    }
    let q = ctx.q;
    let pr = p_r(q, ctx.r as i64);
    let dev_total = m.total.as_ref().map(|t| (t - &pr).abs());
    let dev_smooth = m.smooth.as_ref().map(|t| (t - &pr).abs());
    let mut checks = Vec::new();

    checks.push(upper(
        "projective-upper".into(),
        BoundClass::Hard,
        "N",
        m.total.as_ref(),
        Ok(Surd::int(ctx.delta() * &pr, q)),
    ));
    let serre = if ctx.n - ctx.r == 1 {
        Ok(Surd::int(serre_hypersurface(ctx.delta().to_u64().unwrap_or(u64::MAX), ctx.n, q), q))
    } else {
        Err(Error::invalid("hypersurface", "applies to hypersurfaces only"))
    };
    checks.push(upper("serre-hypersurface".into(), BoundClass::Hard, "N", m.total.as_ref(), serre));

    if ctx.s.is_none() && ctx.all_nonlinear() {
        let b = ctx
            .primitive_betti(ctx.r, ctx.n)
            .map(|b| deligne_bound(q, ctx.r as u32, b))
            .ok_or_else(|| Error::invalid("primitive Betti number", format!("b'_{} unavailable", ctx.r)));
        checks.push(upper("deligne".into(), BoundClass::Hard, "|N - p_r|", dev_total.as_ref(), b));
    }

    for s in [ctx.r as i64 - 2, ctx.r as i64 - 3] {
        if s < 0 || !ctx.covers(s as usize) {
            continue;
        }
        let s = s as usize;
        let tag = if s + 2 == ctx.r { "codim2" } else { "codim3" };
        for (smooth, dev, q_name) in [
            (false, dev_total.as_ref(), "|N - p_r|"),
            (true, dev_smooth.as_ref(), "|N_sm - p_r|"),
        ] {
            let kind = if smooth { "smooth" } else { "total" };
            let est = main_estimate(ctx, s, smooth);
            checks.push(upper(
                format!("theorem-{kind}-s{s}"),
                BoundClass::Hard,
                q_name,
                dev,
                est.as_ref().map(|e| e.theorem.clone()).map_err(Clone::clone),
            ));
            checks.push(upper(
                format!("corollary-{tag}-{kind}"),
                BoundClass::Hard,
                q_name,
                dev,
                est.as_ref().map(|e| e.corollary.clone()).map_err(Clone::clone),
            ));
            if let Ok(Estimate {
                corollary_alt: Some(alt),
                ..
            }) = &est
            {
                checks.push(upper(
                    format!("corollary-{tag}-{kind}-intro"),
                    BoundClass::Soft,
                    q_name,
                    dev,
                    Ok(alt.clone()),
                ));
            }
        }
        checks.push(upper(
            format!("gl-s{s}"),
            BoundClass::Soft,
            "|N - p_r|",
            dev_total.as_ref(),
            gl_bound(ctx, s),
        ));
    }

    if ctx.r >= 1 && ctx.covers(ctx.r.saturating_sub(2)) {
        let cm = cm_bound(ctx).and_then(|(b, valid)| {
            if valid {
                Ok(b)
            } else {
                Err(Error::invalid("q > 2(n-r) d delta + 1", format!("q = {q}")))
            }
        });
        checks.push(upper("cm".into(), BoundClass::Soft, "|N - p_r|", dev_total.as_ref(), cm));
    }

    let thresholds = existence_thresholds(ctx);
    for t in &thresholds {
        if t.name.starts_with("section") {
            continue;
        }
        let verdict = match (&t.value, &m.smooth) {
            (None, _) => Verdict::NotApplicable(t.note.clone()),
            (Some(v), _) if big(q) <= *v => {
                Verdict::NotApplicable(format!("q = {q} <= threshold {v}"))
            }
            (Some(_), None) => Verdict::Inconclusive("no smooth count".into()),
            (Some(_), Some(n)) if n.is_positive() => Verdict::Holds,
            _ => Verdict::Violated,
        };
        checks.push(BoundCheck {
            name: t.name.to_string(),
            class: t.class,
            quantity: "N_sm".into(),
            measured: m.smooth.clone(),
            relation: ">=",
            bound: Some(Surd::int(1, q)),
            verdict,
        });
    }

    Ok(BoundReport {
        context: ctx.clone(),
        checks,
        thresholds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, r: usize, s: Option<usize>, d: &[u32], q: u64) -> BoundContext {
        BoundContext::new(n, r, s, d, q).unwrap()
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(betti_b1(2, &[3]).unwrap(), big(2));
        assert_eq!(betti_b1(2, &[2]).unwrap(), big(0));
        assert_eq!(betti_b1(3, &[2, 2]).unwrap(), big(2));
        assert_eq!(betti_b2(3, &[2]).unwrap(), big(1));
        assert_eq!(betti_b2(3, &[3]).unwrap(), big(6));
        assert!(betti_b1(3, &[2]).is_err());
    }

    #[test]
    fn surd_comparisons_are_exact() {
        // 2 sqrt 5 = 4.47...
        let b = deligne_bound(5, 1, 2);
        assert!(b.ge(&big(4)));
        assert!(!b.ge(&big(5)));
        assert_eq!(b.ceil(), big(5));
        assert_eq!(b.floor(), big(4));
        assert_eq!(deligne_bound(9, 2, 1).rational, big(9));
        assert_eq!(deligne_bound(7, 1, 0).ceil(), big(0));
        // sqrt 9 = 3 exactly.
        let s = deligne_bound(9, 1, 1);
        assert!(s.ge(&big(3)) && !s.gt(&big(3)) && s.ceil() == big(3));
        let neg = Surd {
            rational: big(10),
            root: BigInt::from(-1),
            q: 5,
        };
        assert!(neg.ge(&big(7)) && !neg.ge(&big(8)));
    }

    #[test]
    fn eta_values() {
        assert_eq!(eta(&[1, 1], &[1, 1], 2).unwrap(), big(5));
        assert_eq!(eta(&[3], &[2], 5).unwrap(), big(3 * 6));
        assert_eq!(eta_affine(&[3], &[2], 5).unwrap(), big(3 * 25));
        assert!(eta(&[1], &[1, 1], 2).is_err());
    }

    #[test]
    fn serre_values() {
        assert_eq!(serre_multih(2, 2, 1, 3).unwrap(), big(7));
        assert_eq!(serre_hypersurface(2, 2, 3), big(7));
        assert_eq!(serre_multih(1, 2, 2, 3).unwrap(), big(13 * 13 - 81));
        assert!(serre_multih(0, 2, 1, 3).is_err());
    }

    #[test]
    fn b_ds_values() {
        assert_eq!(b_ds(&ctx(3, 2, Some(0), &[3], 5), 0).unwrap(), big(55));
        assert_eq!(b_ds(&ctx(3, 2, Some(0), &[2], 5), 0).unwrap(), big(21));
        assert!(b_ds(&ctx(3, 2, Some(0), &[2], 5), 1).is_err());
    }

    #[test]
    fn cone_estimates() {
        let c = ctx(3, 2, Some(0), &[2], 3);
        let total = main_estimate(&c, 0, false).unwrap();
        assert_eq!(total.corollary, Surd::int(168, 3));
        assert!(total.theorem.ge(&big(0)));
        let smooth = main_estimate(&c, 0, true).unwrap();
        assert!(smooth.corollary.ge(&big(1)));
        assert!(main_estimate(&c, 1, false).is_err());
    }

    #[test]
    fn comparison_values() {
        assert_eq!(gl_constant(2, 1, 3), big(3888));
        let (_, valid) = cm_bound(&ctx(3, 2, Some(0), &[2], 3)).unwrap();
        assert!(!valid);
    }

    #[test]
    fn thresholds() {
        let t = existence_thresholds(&ctx(4, 3, Some(0), &[2], 5));
        let get = |n: &str| t.iter().find(|x| x.name == n).unwrap().value.clone();
        assert_eq!(get("existence-codim3"), Some(big(54)));
        let t2 = existence_thresholds(&ctx(3, 2, Some(0), &[2], 5));
        let c2 = t2.iter().find(|x| x.name == "existence-codim2").unwrap();
        assert_eq!(c2.value, Some(big((2 * 4 + 2) * 2 + 1)));
        assert!(!c2.guaranteed(21) && c2.guaranteed(22));
    }

    #[test]
    fn check_verdicts() {
        let c = ctx(3, 2, Some(0), &[2], 3);
        let rep = check(
            &c,
            &Measurements {
                total: Some(big(13)),
                smooth: Some(big(12)),
            },
        )
        .unwrap();
        assert!(!rep.any_hard_violation());
        let cor = rep.checks.iter().find(|x| x.name == "corollary-codim2-total").unwrap();
        assert_eq!(cor.verdict, Verdict::Holds);
        let cm = rep.checks.iter().find(|x| x.name == "cm").unwrap();
        assert!(matches!(cm.verdict, Verdict::NotApplicable(_)));
        assert!(check(&c, &Measurements::default()).is_err());
        let bad = check(
            &c,
            &Measurements {
                total: Some(big(13 * 3)),
                smooth: None,
            },
        )
        .unwrap();
        assert!(bad.any_hard_violation());
    }
}
