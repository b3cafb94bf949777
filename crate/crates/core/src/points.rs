//! Index-addressable enumeration of affine, projective and multiprojective
//! point sets over a finite field.
//!
//! Every space is a bijection between `0..len()` and its points, so any
//! index range can be walked independently. That is what lets the executor
//! split work into fixed chunks without changing the result.
//!
//! Projective order: points are grouped by the position of their leading
//! `1` (position 0 first); within a group the free trailing coordinates run
//! through [`Field::elements`] order like an odometer, last coordinate
//! fastest. Over F_2 with n = 1 this gives `(1:0), (1:1), (0:1)`.

use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gf::{Elem, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointsError {
    #[error("enumerating {needed} points exceeds the budget of {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
}

/// `q^r + ... + q + 1`, with `p_r = 0` for `r < 0`.
pub fn p_r(q: u64, r: i64) -> BigInt {
    if r < 0 {
        return BigInt::zero();
    }
    let q = BigInt::from(q);
    let mut acc = BigInt::zero();
    let mut pw = BigInt::one();
    for _ in 0..=r {
        acc += &pw;
        pw *= &q;
    }
    acc
}

/// `p_r` in machine integers; `None` on overflow.
pub fn p_r_u128(q: u64, r: i64) -> Option<u128> {
    if r < 0 {
        return Some(0);
    }
    let mut acc: u128 = 0;
    let mut pw: u128 = 1;
    for i in 0..=r {
        acc = acc.checked_add(pw)?;
        if i < r {
            pw = pw.checked_mul(q as u128)?;
        }
    }
    Some(acc)
}

fn check_budget(needed: Option<u128>, budget: u64) -> Result<u64, PointsError> {
    match needed {
        Some(n) if n <= budget as u128 => Ok(n as u64),
        Some(n) => Err(PointsError::Budget { needed: n, budget }),
        None => Err(PointsError::Budget {
            needed: u128::MAX,
            budget,
        }),
    }
}

/// Scale `x` so its leftmost nonzero coordinate is 1.
pub fn canonicalize(f: &Field, x: &mut [Elem]) -> Result<(), PointsError> {
    let lead = x
        .iter()
        .copied()
        .find(|c| !c.is_zero())
        .ok_or(PointsError::ZeroVector)?;
    if lead != f.one() {
        let s = f.inv(lead).expect("nonzero");
        for c in x.iter_mut() {
            *c = f.mul(*c, s);
        }
    }
    Ok(())
}

pub fn is_canonical(f: &Field, x: &[Elem]) -> bool {
    x.iter().copied().find(|c| !c.is_zero()) == Some(f.one())
}

/// A finite point set with a fixed enumeration order.
pub trait PointSpace: Sync {
    fn len(&self) -> u64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Length of the flat coordinate vector of each point.
    fn width(&self) -> usize;

    /// Call `visit(index, coords)` for every index in `range`, in order.
    fn walk<F: FnMut(u64, &[Elem])>(&self, range: Range<u64>, visit: F);

    /// Walk with early exit: stops at the first `Some`.
    fn find_in<T, F: FnMut(u64, &[Elem]) -> Option<T>>(
        &self,
        range: Range<u64>,
        mut visit: F,
    ) -> Option<T> {
        let mut out = None;
        let mut done = false;
        self.walk(range, |i, x| {
            if !done {
                if let Some(v) = visit(i, x) {
                    out = Some(v);
                    done = true;
                }
            }
        });
        out
    }

    fn point(&self, index: u64) -> Vec<Elem> {
        let mut out = Vec::new();
        self.walk(index..index + 1, |_, x| out = x.to_vec());
        out
    }

    fn collect_all(&self) -> Vec<Vec<Elem>> {
        let mut v = Vec::with_capacity(self.len() as usize);
        self.walk(0..self.len(), |_, x| v.push(x.to_vec()));
        v
    }
}

/// Mixed-radix odometer over element ranks.
struct Odometer {
    ranks: Vec<u32>,
    q: u32,
}

impl Odometer {
    fn at(width: usize, q: u32, mut index: u64) -> Odometer {
        let mut ranks = vec![0u32; width];
        for r in ranks.iter_mut().rev() {
            *r = (index % q as u64) as u32;
            index /= q as u64;
        }
        Odometer { ranks, q }
    }

    /// Advance; returns the lowest position that changed, or `None` on wrap.
    fn step(&mut self) -> Option<usize> {
        for i in (0..self.ranks.len()).rev() {
            self.ranks[i] += 1;
            if self.ranks[i] < self.q {
                return Some(i);
            }
            self.ranks[i] = 0;
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct AffineSpace {
    field: Field,
    n: usize,
    len: u64,
}

impl AffineSpace {
    pub fn new(field: &Field, n: usize, budget: u64) -> Result<AffineSpace, PointsError> {
        let needed = (field.size() as u128).checked_pow(n as u32);
        let len = check_budget(needed, budget)?;
        Ok(AffineSpace {
            field: field.clone(),
            n,
            len,
        })
    }
}

impl PointSpace for AffineSpace {
    fn len(&self) -> u64 {
        self.len
    }

    fn width(&self) -> usize {
        self.n
    }

    fn walk<F: FnMut(u64, &[Elem])>(&self, range: Range<u64>, mut visit: F) {
        let end = range.end.min(self.len);
        if range.start >= end {
            return;
        }
        let f = &self.field;
        let mut odo = Odometer::at(self.n, f.size(), range.start);
        let mut x: Vec<Elem> = odo.ranks.iter().map(|&r| f.nth_element(r)).collect();
        for idx in range.start..end {
            visit(idx, &x);
            if let Some(lo) = odo.step() {
                for i in lo..self.n {
                    x[i] = f.nth_element(odo.ranks[i]);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    field: Field,
    n: usize,
    len: u64,
    /// `offsets[j]` is the index of the first point whose leading 1 is at j.
    offsets: Vec<u64>,
}

impl ProjectiveSpace {
    pub fn new(field: &Field, n: usize, budget: u64) -> Result<ProjectiveSpace, PointsError> {
        let len = check_budget(p_r_u128(field.size() as u64, n as i64), budget)?;
        let q = field.size() as u64;
        let mut offsets = Vec::with_capacity(n + 2);
        let mut acc = 0u64;
        for j in 0..=n {
            offsets.push(acc);
            acc += q.pow((n - j) as u32);
        }
        offsets.push(acc);
        Ok(ProjectiveSpace {
            field: field.clone(),
            n,
            len,
            offsets,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Enumeration index of a canonical point.
    pub fn index_of(&self, x: &[Elem]) -> Option<u64> {
        if x.len() != self.n + 1 || !is_canonical(&self.field, x) {
            return None;
        }
        let lead = x.iter().position(|c| !c.is_zero())?;
        let q = self.field.size() as u64;
        let mut rank = 0u64;
        for &c in &x[lead + 1..] {
            rank = rank * q + self.field.rank_of(c) as u64;
        }
        Some(self.offsets[lead] + rank)
    }
}

impl PointSpace for ProjectiveSpace {
    fn len(&self) -> u64 {
        self.len
    }

    fn width(&self) -> usize {
        self.n + 1
    }

    fn walk<F: FnMut(u64, &[Elem])>(&self, range: Range<u64>, mut visit: F) {
        let end = range.end.min(self.len);
        let f = &self.field;
        let mut idx = range.start;
        while idx < end {
            let lead = self.offsets.partition_point(|&o| o <= idx) - 1;
            let stratum_end = self.offsets[lead + 1].min(end);
            let free = self.n - lead;
            let mut odo = Odometer::at(free, f.size(), idx - self.offsets[lead]);
            let mut x = vec![f.zero(); self.n + 1];
            x[lead] = f.one();
            for i in 0..free {
                x[lead + 1 + i] = f.nth_element(odo.ranks[i]);
            }
            while idx < stratum_end {
                visit(idx, &x);
                idx += 1;
                if let Some(lo) = odo.step() {
                    for i in lo..free {
                        x[lead + 1 + i] = f.nth_element(odo.ranks[i]);
                    }
                }
            }
        }
    }
}

/// Product `P^{n_1} x ... x P^{n_m}`; the last factor varies fastest and
/// points are flattened into one coordinate vector.
#[derive(Clone, Debug)]
pub struct MultiProjectiveSpace {
    factors: Vec<ProjectiveSpace>,
    len: u64,
}

impl MultiProjectiveSpace {
    pub fn new(field: &Field, dims: &[usize], budget: u64) -> Result<Self, PointsError> {
        let mut needed: Option<u128> = Some(1);
        for &n in dims {
            needed = needed
                .zip(p_r_u128(field.size() as u64, n as i64))
                .and_then(|(a, b)| a.checked_mul(b));
        }
        let len = check_budget(needed, budget)?;
        let factors = dims
            .iter()
            .map(|&n| ProjectiveSpace::new(field, n, u64::MAX))
            .collect::<Result<_, _>>()?;
        Ok(MultiProjectiveSpace { factors, len })
    }

    pub fn factors(&self) -> &[ProjectiveSpace] {
        &self.factors
    }
}

impl PointSpace for MultiProjectiveSpace {
    fn len(&self) -> u64 {
        self.len
    }

    fn width(&self) -> usize {
        self.factors.iter().map(|s| s.n + 1).sum()
    }

    fn walk<F: FnMut(u64, &[Elem])>(&self, range: Range<u64>, mut visit: F) {
        let end = range.end.min(self.len);
        if range.start >= end {
            return;
        }
        // Component indices for range.start, last factor fastest.
        let m = self.factors.len();
        let mut comp = vec![0u64; m];
        let mut rest = range.start;
        for i in (0..m).rev() {
            comp[i] = rest % self.factors[i].len;
            rest /= self.factors[i].len;
        }
        let mut x: Vec<Elem> = Vec::with_capacity(self.width());
        let starts: Vec<usize> = self
            .factors
            .iter()
            .scan(0, |s, f| {
                let v = *s;
                *s += f.n + 1;
                Some(v)
            })
            .collect();
        for (i, fac) in self.factors.iter().enumerate() {
            x.extend(fac.point(comp[i]));
            debug_assert_eq!(x.len(), starts[i] + fac.n + 1);
        }
        for idx in range.start..end {
            visit(idx, &x);
            let mut i = m;
            while i > 0 {
                i -= 1;
                comp[i] += 1;
                if comp[i] == self.factors[i].len {
                    comp[i] = 0;
                }
                let pt = self.factors[i].point(comp[i]);
                x[starts[i]..starts[i] + pt.len()].copy_from_slice(&pt);
                if comp[i] != 0 {
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use std::collections::HashSet;

    #[test]
    fn p_r_values() {
        assert_eq!(p_r(3, 2), BigInt::from(13));
        assert_eq!(p_r(7, 0), BigInt::from(1));
        assert_eq!(p_r(5, -1), BigInt::from(0));
        assert_eq!(p_r_u128(3, 2), Some(13));
    }

    #[test]
    fn projective_line_over_f2_order() {
        let f2 = make_field(2, 1).unwrap();
        let pts = ProjectiveSpace::new(&f2, 1, 100).unwrap().collect_all();
        let e = |a, b| vec![Elem(a), Elem(b)];
        assert_eq!(pts, vec![e(1, 0), e(1, 1), e(0, 1)]);
    }

    #[test]
    fn canonicalize_example() {
        let f3 = make_field(3, 1).unwrap();
        let mut x = [Elem(0), Elem(2), Elem(1)];
        canonicalize(&f3, &mut x).unwrap();
        assert_eq!(x, [Elem(0), Elem(1), Elem(2)]);
        assert_eq!(canonicalize(&f3, &mut [Elem(0); 2]), Err(PointsError::ZeroVector));
    }

    #[test]
    fn projective_counts_and_no_multiples() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = make_field(p, k).unwrap();
            for n in 0..=3 {
                let sp = ProjectiveSpace::new(&f, n, u64::MAX).unwrap();
                let pts = sp.collect_all();
                assert_eq!(pts.len() as u128, p_r_u128(f.size() as u64, n as i64).unwrap());
                let mut seen = HashSet::new();
                for (i, x) in pts.iter().enumerate() {
                    assert!(is_canonical(&f, x));
                    assert_eq!(sp.index_of(x), Some(i as u64));
                    // Canonical form of every scalar multiple lands on x itself.
                    for c in f.elements().filter(|c| !c.is_zero()) {
                        let mut y: Vec<Elem> = x.iter().map(|&a| f.mul(a, c)).collect();
                        canonicalize(&f, &mut y).unwrap();
                        assert_eq!(&y, x);
                    }
                    assert!(seen.insert(x.clone()));
                }
            }
        }
    }

    #[test]
    fn random_access_matches_walk() {
        let f = make_field(3, 2).unwrap();
        let sp = ProjectiveSpace::new(&f, 2, u64::MAX).unwrap();
        let all = sp.collect_all();
        for i in [0u64, 5, 80, 81, 82, 89, 90] {
            assert_eq!(sp.point(i), all[i as usize]);
        }
    }

    #[test]
    fn chunked_union_equals_whole() {
        let f = make_field(3, 1).unwrap();
        let sp = ProjectiveSpace::new(&f, 3, u64::MAX).unwrap();
        let whole = sp.collect_all();
        let len = sp.len();
        let w = 4;
        let mut joined = Vec::new();
        for c in 0..w {
            sp.walk(c * len / w..(c + 1) * len / w, |_, x| joined.push(x.to_vec()));
        }
        assert_eq!(joined, whole);

        let af = AffineSpace::new(&f, 3, u64::MAX).unwrap();
        let whole = af.collect_all();
        let mut joined = Vec::new();
        for c in 0..w {
            af.walk(c * 27 / w..(c + 1) * 27 / w, |_, x| joined.push(x.to_vec()));
        }
        assert_eq!(joined, whole);
    }

    #[test]
    fn affine_examples() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(AffineSpace::new(&f, 2, 100).unwrap().len(), 9);
        let a0 = AffineSpace::new(&f, 0, 100).unwrap();
        assert_eq!(a0.collect_all(), vec![Vec::<Elem>::new()]);
        assert!(matches!(
            AffineSpace::new(&f, 5, 100),
            Err(PointsError::Budget { needed: 243, .. })
        ));
    }

    #[test]
    fn multiprojective_products() {
        let f2 = make_field(2, 1).unwrap();
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(MultiProjectiveSpace::new(&f2, &[1, 1], 100).unwrap().len(), 9);
        let mp = MultiProjectiveSpace::new(&f3, &[2, 1], 1000).unwrap();
        assert_eq!(mp.len(), 52);
        let pts = mp.collect_all();
        let p2 = ProjectiveSpace::new(&f3, 2, 100).unwrap().collect_all();
        let p1 = ProjectiveSpace::new(&f3, 1, 100).unwrap().collect_all();
        let expect: Vec<Vec<Elem>> = p2
            .iter()
            .flat_map(|a| p1.iter().map(move |b| [a.clone(), b.clone()].concat()))
            .collect();
        assert_eq!(pts, expect);
        let single = MultiProjectiveSpace::new(&f3, &[2], 100).unwrap().collect_all();
        assert_eq!(single, p2);
        let mut part = Vec::new();
        mp.walk(7..30, |_, x| part.push(x.to_vec()));
        assert_eq!(part, expect[7..30].to_vec());
    }
}
