//! Zero counts of one multihomogeneous polynomial on `P^{n_1} x ... x P^{n_m}`.
//!
//! `F` is stored as a dense coefficient tensor indexed by one monomial per
//! group. Fixing a point of the outermost group contracts one axis away;
//! the last remaining group (the leaf) is handled by a single matrix of
//! monomial values, or in closed form when it enters linearly.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::{Env, CHUNK};
use crate::gf::{Elem, Field};
use crate::mpoly::{monomials_of_degree, MultiPoly};
use crate::points::{p_r, AffineSpace, MultiProjectiveSpace, PointSpace, ProjectiveSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiZeroCount {
    pub degrees: Vec<u32>,
    /// `n_i`, one less than each group size.
    pub dims: Vec<usize>,
    /// Zeros in `P^{n_1} x ... x P^{n_m}`.
    pub projective: BigInt,
    /// Zeros in `F_q^{n_1+1} x ... x F_q^{n_m+1}`.
    pub affine: BigInt,
    q: u64,
}

impl MultiZeroCount {
    /// Affine points where `F` does not vanish.
    pub fn affine_nonzeros(&self) -> BigInt {
        let width: usize = self.dims.iter().map(|n| n + 1).sum();
        BigInt::from(self.q).pow(width as u32) - &self.affine
    }
}

fn check_input(f: &MultiPoly) -> Result<Vec<u32>> {
    if f.is_zero() {
        return Err(Error::invalid("nonzero polynomial", "the zero polynomial vanishes everywhere"));
    }
    f.is_multihomogeneous().ok_or_else(|| {
        Error::invalid(
            "multihomogeneous",
            format!("{f} is not multihomogeneous for groups {:?}", f.groups()),
        )
    })
}

/// Monomial values of every point of one factor, row-major.
struct Factor {
    space: ProjectiveSpace,
    degree: u32,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    values: Vec<Elem>,
}

impl Factor {
    fn new(field: &Field, n: usize, degree: u32) -> Result<Factor> {
        let space = ProjectiveSpace::new(field, n, u64::MAX)?;
        let monomials = monomials_of_degree(n + 1, degree);
        let mut values = Vec::with_capacity(space.len() as usize * monomials.len());
        space.walk(0..space.len(), |_, x| {
            for m in &monomials {
                let v = m
                    .iter()
                    .zip(x)
                    .fold(field.one(), |acc, (&e, &xi)| field.mul(acc, field.pow(xi, e as u64)));
                values.push(v);
            }
        });
        let index = monomials.iter().cloned().zip(0..).collect();
        Ok(Factor {
            space,
            degree,
            monomials,
            index,
            values,
        })
    }

    fn width(&self) -> usize {
        self.monomials.len()
    }

    fn row(&self, idx: u64) -> &[Elem] {
        let w = self.width();
        &self.values[idx as usize * w..(idx as usize + 1) * w]
    }

    fn index_of(&self, exps: &[u32]) -> usize {
        self.index[exps]
    }

    /// Zeros on this factor of the form with coefficient vector `c`.
    fn count_leaf(&self, f: &Field, c: &[Elem]) -> u64 {
        if c.iter().all(|a| a.is_zero()) {
            return self.space.len();
        }
        if self.degree == 1 {
            // A nonzero linear form cuts out a hyperplane.
            let n = self.space.dim() as u32;
            let q = f.size() as u64;
            return (0..n).map(|i| q.pow(i)).sum();
        }
        (0..self.space.len())
            .filter(|&i| f.dot(self.row(i), c).is_zero())
            .count() as u64
    }
}

/// Contract axis 0 of `t` (length `v.len()` on that axis) against `v`.
fn contract(f: &Field, t: &[Elem], v: &[Elem], out: &mut Vec<Elem>) {
    let rest = t.len() / v.len();
    out.clear();
    out.resize(rest, f.zero());
    for (a, &va) in v.iter().enumerate() {
        if va.is_zero() {
            continue;
        }
        let slab = &t[a * rest..(a + 1) * rest];
        for (o, &s) in out.iter_mut().zip(slab) {
            if !s.is_zero() {
                *o = f.add(*o, f.mul(va, s));
            }
        }
    }
}

fn count_rec(f: &Field, factors: &[Factor], t: &[Elem]) -> u64 {
    let (head, rest) = factors.split_first().expect("at least one factor");
    if rest.is_empty() {
        return head.count_leaf(f, t);
    }
    if t.iter().all(|a| a.is_zero()) {
        return factors.iter().map(|fa| fa.space.len()).product();
    }
    let mut buf = Vec::new();
    let mut total = 0;
    for i in 0..head.space.len() {
        contract(f, t, head.row(i), &mut buf);
        total += count_rec(f, rest, &buf);
    }
    total
}

/// Exact projective and affine zero counts of `f`.
///
/// The affine count follows from the projective one: a point with some
/// group of positive degree identically zero is a zero, and each
/// projective point lifts to `(q-1)^m` affine points.
pub fn count_multihomogeneous_zeros(f: &MultiPoly, env: &Env) -> Result<MultiZeroCount> {
    let degrees = check_input(f)?;
    let field = f.field();
    let q = field.size() as u64;
    let dims: Vec<usize> = f.groups().iter().map(|g| g - 1).collect();
    MultiProjectiveSpace::new(field, &dims, env.budget)?;

    let active: Vec<usize> = (0..dims.len()).filter(|&i| degrees[i] > 0).collect();
    let free_proj: BigInt = (0..dims.len())
        .filter(|&i| degrees[i] == 0)
        .map(|i| p_r(q, dims[i] as i64))
        .product();
    let free_affine_width: usize = (0..dims.len())
        .filter(|&i| degrees[i] == 0)
        .map(|i| dims[i] + 1)
        .sum();

    let active_count: u64 = if active.is_empty() {
        0
    } else {
        // The leaf is the cheapest factor: linear if possible, otherwise the
        // one with fewest monomials.
        let mut order = active.clone();
        let leaf_pos = (0..order.len())
            .min_by_key(|&j| {
                let i = order[j];
                (degrees[i] != 1, monomials_of_degree(dims[i] + 1, degrees[i]).len())
            })
            .unwrap();
        let leaf = order.remove(leaf_pos);
        order.push(leaf);
        let factors = order
            .iter()
            .map(|&i| Factor::new(field, dims[i], degrees[i]))
            .collect::<Result<Vec<_>>>()?;
        let offsets: Vec<usize> = f
            .groups()
            .iter()
            .scan(0, |s, &g| {
                let v = *s;
                *s += g;
                Some(v)
            })
            .collect();
        let mut strides = vec![1usize; factors.len()];
        for j in (0..factors.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * factors[j + 1].width();
        }
        let size = strides[0] * factors[0].width();
        let mut tensor = vec![field.zero(); size];
        for (mono, c) in f.terms() {
            let mut idx = 0;
            for (j, &g) in order.iter().enumerate() {
                let exps = &mono.0[offsets[g]..offsets[g] + dims[g] + 1];
                idx += strides[j] * factors[j].index_of(exps);
            }
            tensor[idx] = field.add(tensor[idx], c);
        }
        if factors.len() == 1 {
            factors[0].count_leaf(field, &tensor)
        } else {
            let (head, rest) = factors.split_first().unwrap();
            env.exec.map_reduce(
                head.space.len(),
                1.max(CHUNK / 64),
                0u64,
                |range| {
                    let mut buf = Vec::new();
                    range
                        .map(|i| {
                            contract(field, &tensor, head.row(i), &mut buf);
                            count_rec(field, rest, &buf)
                        })
                        .sum()
                },
                |a, b| a + b,
            )
        }
    };

    let qb = BigInt::from(q);
    let width: usize = dims.iter().map(|n| n + 1).sum();
    let free_affine = qb.pow(free_affine_width as u32);
    let nonvanishing_groups: BigInt = active
        .iter()
        .map(|&i| qb.pow(dims[i] as u32 + 1) - 1)
        .product();
    let lifts: BigInt = (&qb - 1u32).pow(active.len() as u32);
    let n_active = BigInt::from(active_count);
    let affine = if active.is_empty() {
        BigInt::zero()
    } else {
        qb.pow(width as u32) - &free_affine * nonvanishing_groups + &free_affine * lifts * &n_active
    };
    let projective = if active.is_empty() {
        BigInt::zero()
    } else {
        n_active * if free_proj.is_zero() { BigInt::one() } else { free_proj }
    };
    Ok(MultiZeroCount {
        degrees,
        dims,
        projective,
        affine,
        q,
    })
}

/// Zeros of `f` in the full affine space, by direct enumeration.
pub fn count_affine_zeros_direct(f: &MultiPoly, env: &Env) -> Result<BigInt> {
    check_input(f)?;
    let sp = AffineSpace::new(f.field(), f.num_vars(), env.budget)?;
    let c = f.compile();
    let count = env.exec.map_reduce(
        sp.len(),
        CHUNK,
        0u64,
        |range| {
            let mut buf = Vec::new();
            let mut k = 0u64;
            sp.walk(range, |_, x| {
                if c.eval(x, &mut buf).is_zero() {
                    k += 1;
                }
            });
            k
        },
        |a, b| a + b,
    );
    Ok(BigInt::from(count))
}

/// First point of `P^{n_1} x ... x P^{n_m}` (last factor fastest) where
/// `f` does not vanish, split by group.
pub fn find_nonzero_point(f: &MultiPoly, env: &Env) -> Result<Option<Vec<Vec<Elem>>>> {
    check_input(f)?;
    let dims: Vec<usize> = f.groups().iter().map(|g| g - 1).collect();
    let sp = MultiProjectiveSpace::new(f.field(), &dims, env.budget)?;
    let c = f.compile();
    let hit = env.exec.find_first(sp.len(), CHUNK, |range| {
        let mut buf = Vec::new();
        sp.find_in(range, |_, x| (!c.eval(x, &mut buf).is_zero()).then(|| x.to_vec()))
    });
    Ok(hit.map(|x| {
        let mut out = Vec::with_capacity(dims.len());
        let mut rest = x.as_slice();
        for g in f.groups() {
            let (a, b) = rest.split_at(*g);
            out.push(a.to_vec());
            rest = b;
        }
        out
    }))
}
