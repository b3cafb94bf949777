//! Point counts and smoothness tests for declared complete intersections.
//!
//! Smoothness is only ever tested at finitely many extension levels
//! F_{q^k}, k <= K. A point flagged singular is certified singular; a
//! clean audit is evidence, not proof, of smoothness over the closure.

mod fiber;
mod multi;

pub use fiber::{
    fiber_decomposition, nonsingular_section_search, polar_minor_locus, sample_projection,
    screen_projection, singular_fiber_audit, AuditReport, FiberReport, LinearProjection,
    SampledProjection, ScreenOutcome, SectionSearch, SectionWitness, SeedOutcome,
};
pub use multi::{
    count_affine_zeros_direct, count_multihomogeneous_zeros, find_nonzero_point, MultiZeroCount,
};

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exec::{Env, CHUNK};
use crate::gf::{make_field, Elem, Embedding, Field};
use crate::linalg;
use crate::mpoly::{CompiledPoly, MultiPoly};
use crate::points::{PointSpace, ProjectiveSpace};

/// Declared upper bound on the dimension of the singular locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularBound {
    Smooth,
    AtMost(usize),
}

impl fmt::Display for SingularBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularBound::Smooth => write!(f, "smooth"),
            SingularBound::AtMost(s) => write!(f, "{s}"),
        }
    }
}

/// A complete intersection `V = {F_1 = ... = F_{n-r} = 0}` in `P^n`.
///
/// Complete-intersection-ness and the singular bound are taken on trust.
#[derive(Clone, Debug)]
pub struct VarietySpec {
    field: Field,
    n: usize,
    r: usize,
    generators: Vec<MultiPoly>,
    degrees: Vec<u32>,
    singular: SingularBound,
}

impl VarietySpec {
    pub fn new(
        field: &Field,
        n: usize,
        r: usize,
        generators: Vec<MultiPoly>,
        singular: SingularBound,
    ) -> Result<VarietySpec> {
        if r >= n {
            return Err(Error::invalid(
                "dimension",
                format!("need r < n, got r = {r}, n = {n}"),
            ));
        }
        if generators.len() != n - r {
            return Err(Error::invalid(
                "codimension",
                format!("expected n - r = {} generators, got {}", n - r, generators.len()),
            ));
        }
        let mut with_deg = Vec::with_capacity(generators.len());
        for (i, g) in generators.into_iter().enumerate() {
            if g.field() != field {
                return Err(Error::invalid(
                    "generator field",
                    format!("generator {i} is over F_{}, expected F_{}", g.field().name(), field.name()),
                ));
            }
            if g.groups() != [n + 1] {
                return Err(Error::invalid(
                    "generator variables",
                    format!("generator {i} must be in one group of {} variables", n + 1),
                ));
            }
            let d = match g.is_multihomogeneous().as_deref() {
                Some(&[d]) if d >= 1 => d,
                Some(_) => {
                    return Err(Error::invalid(
                        "generator degree",
                        format!("generator {i} is constant"),
                    ))
                }
                None if g.is_zero() => {
                    return Err(Error::invalid("nonzero generator", format!("generator {i} is zero")))
                }
                None => {
                    return Err(Error::invalid(
                        "homogeneous generator",
                        format!("generator {i} ({g}) is not homogeneous"),
                    ))
                }
            };
            with_deg.push((d, g));
        }
        // Stable sort keeps declaration order among equal degrees.
        with_deg.sort_by(|a, b| b.0.cmp(&a.0));
        if let SingularBound::AtMost(s) = singular {
            if r < 2 || s > r - 2 {
                return Err(Error::invalid(
                    "singular bound",
                    format!("need 0 <= s <= r - 2, got s = {s}, r = {r}"),
                ));
            }
        }
        let (degrees, generators) = with_deg.into_iter().unzip();
        Ok(VarietySpec {
            field: field.clone(),
            n,
            r,
            generators,
            degrees,
            singular,
        })
    }

    /// Parse generator strings and build the spec.
    pub fn parse(
        field: &Field,
        n: usize,
        r: usize,
        generators: &[&str],
        singular: SingularBound,
    ) -> Result<VarietySpec> {
        let gens = generators
            .iter()
            .map(|g| MultiPoly::parse(g, field, &[n + 1]))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        VarietySpec::new(field, n, r, gens, singular)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn codim(&self) -> usize {
        self.n - self.r
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    /// Generator degrees, nonincreasing.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn singular_bound(&self) -> SingularBound {
        self.singular
    }

    pub fn delta(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).product()
    }

    /// `D = sum (d_i - 1)`.
    pub fn big_d(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64 - 1).sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees[0]
    }

    /// Whether `dim Sing(V) <= s` is implied by the declaration and
    /// `0 <= s <= r - 2`.
    pub fn admits_s(&self, s: usize) -> bool {
        self.r >= 2
            && s <= self.r - 2
            && match self.singular {
                SingularBound::Smooth => true,
                SingularBound::AtMost(t) => t <= s,
            }
    }

    pub(crate) fn require_nonlinear(&self, what: &str) -> Result<()> {
        if self.degrees.iter().any(|&d| d < 2) {
            return Err(Error::invalid(
                "generator degree >= 2",
                format!("{what} requires every d_i >= 2, got {:?}", self.degrees),
            ));
        }
        Ok(())
    }

    pub fn level(&self, k: u32) -> Result<LevelView> {
        LevelView::new(self, k)
    }
}

/// Generators and their gradients compiled over F_{q^k}.
#[derive(Clone, Debug)]
pub struct LevelView {
    level: u32,
    base: Field,
    field: Field,
    embedding: Embedding,
    n: usize,
    stride: usize,
    gens: Vec<CompiledPoly>,
    grads: Vec<Vec<CompiledPoly>>,
}

impl LevelView {
    pub fn new(v: &VarietySpec, k: u32) -> Result<LevelView> {
        if k == 0 {
            return Err(Error::invalid("extension level", "level must be >= 1"));
        }
        let base = v.field.clone();
        let field = if k == 1 {
            base.clone()
        } else {
            make_field(base.characteristic() as u64, base.degree() * k)?
        };
        let embedding = Embedding::new(&base, &field)?;
        let stride = v.degrees[0] as usize + 1;
        let gens = v
            .generators
            .iter()
            .map(|g| g.embed(&embedding).compile_with_stride(stride))
            .collect();
        let grads = v
            .generators
            .iter()
            .map(|g| {
                g.gradient()
                    .iter()
                    .map(|d| d.embed(&embedding).compile_with_stride(stride))
                    .collect()
            })
            .collect();
        Ok(LevelView {
            level: k,
            base,
            field,
            embedding,
            n: v.n,
            stride,
            gens,
            grads,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn embed_vec(&self, v: &[Elem]) -> Vec<Elem> {
        v.iter().map(|&a| self.embedding.apply(a)).collect()
    }

    /// Fill `pw` with the power table of `x`.
    #[inline]
    pub fn powers(&self, x: &[Elem], pw: &mut Vec<Elem>) {
        let f = &self.field;
        pw.clear();
        for &xi in x {
            let mut acc = f.one();
            for _ in 0..self.stride {
                pw.push(acc);
                acc = f.mul(acc, xi);
            }
        }
    }

    /// All generators vanish; `pw` must hold the powers of the point.
    #[inline]
    pub fn vanishes(&self, pw: &[Elem]) -> bool {
        self.gens.iter().all(|g| g.eval_powers(pw).is_zero())
    }

    pub fn on_variety(&self, x: &[Elem]) -> bool {
        let mut pw = Vec::new();
        self.powers(x, &mut pw);
        self.vanishes(&pw)
    }

    /// Jacobian rows at the point whose power table is `pw`.
    pub fn jacobian_from_powers(&self, pw: &[Elem]) -> Vec<Vec<Elem>> {
        self.grads
            .iter()
            .map(|row| row.iter().map(|g| g.eval_powers(pw)).collect())
            .collect()
    }

    pub fn jacobian(&self, x: &[Elem]) -> Vec<Vec<Elem>> {
        let mut pw = Vec::new();
        self.powers(x, &mut pw);
        self.jacobian_from_powers(&pw)
    }

    /// Rank of the Jacobian stacked on `extra` rows.
    pub fn stacked_rank(&self, pw: &[Elem], extra: &[Vec<Elem>]) -> usize {
        let mut m = self.jacobian_from_powers(pw);
        m.extend(extra.iter().cloned());
        linalg::rank_in_place(&self.field, &mut m)
    }

    pub fn codim(&self) -> usize {
        self.gens.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }
}

/// Rank of the Jacobian of `V` at `x`, computed over the level field.
pub fn jacobian_rank(view: &LevelView, x: &[Elem]) -> Result<usize> {
    if x.len() != view.n + 1 {
        return Err(Error::invalid(
            "point arity",
            format!("expected {} coordinates, got {}", view.n + 1, x.len()),
        ));
    }
    for &c in x {
        view.field.check(c)?;
    }
    if x.iter().all(|c| c.is_zero()) {
        return Err(Error::Points(crate::points::PointsError::ZeroVector));
    }
    let mut pw = Vec::new();
    view.powers(x, &mut pw);
    if !view.vanishes(&pw) {
        return Err(Error::NotOnVariety);
    }
    Ok(view.stacked_rank(&pw, &[]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCounts {
    pub total: BigInt,
    pub smooth: BigInt,
    pub singular: BigInt,
}

fn space(v: &VarietySpec, env: &Env) -> Result<ProjectiveSpace> {
    Ok(ProjectiveSpace::new(&v.field, v.n, env.budget)?)
}

/// `|V(F_q)|` by exhaustive enumeration of `P^n(F_q)`.
pub fn count_points(v: &VarietySpec, env: &Env) -> Result<BigInt> {
    let sp = space(v, env)?;
    let view = v.level(1)?;
    let total = env.exec.map_reduce(
        sp.len(),
        CHUNK,
        0u64,
        |range| {
            let mut pw = Vec::new();
            let mut c = 0u64;
            sp.walk(range, |_, x| {
                view.powers(x, &mut pw);
                if view.vanishes(&pw) {
                    c += 1;
                }
            });
            c
        },
        |a, b| a + b,
    );
    Ok(BigInt::from(total))
}

/// Total, smooth and singular F_q-points.
pub fn classify_points(v: &VarietySpec, env: &Env) -> Result<PointCounts> {
    let sp = space(v, env)?;
    let view = v.level(1)?;
    let codim = v.codim();
    let (total, smooth) = env.exec.map_reduce(
        sp.len(),
        CHUNK,
        (0u64, 0u64),
        |range| {
            let mut pw = Vec::new();
            let (mut t, mut s) = (0u64, 0u64);
            sp.walk(range, |_, x| {
                view.powers(x, &mut pw);
                if view.vanishes(&pw) {
                    t += 1;
                    if view.stacked_rank(&pw, &[]) == codim {
                        s += 1;
                    }
                }
            });
            (t, s)
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    Ok(PointCounts {
        total: total.into(),
        smooth: smooth.into(),
        singular: (total - smooth).into(),
    })
}

/// `(smooth, singular)` F_q-point counts.
pub fn count_smooth_points(v: &VarietySpec, env: &Env) -> Result<(BigInt, BigInt)> {
    let c = classify_points(v, env)?;
    Ok((c.smooth, c.singular))
}

/// First smooth F_q-point in enumeration order, stopping early.
pub fn find_smooth_point(v: &VarietySpec, env: &Env) -> Result<Option<Vec<Elem>>> {
    let sp = space(v, env)?;
    let view = v.level(1)?;
    let codim = v.codim();
    Ok(env.exec.find_first(sp.len(), CHUNK, |range| {
        let mut pw = Vec::new();
        sp.find_in(range, |_, x| {
            view.powers(x, &mut pw);
            (view.vanishes(&pw) && view.stacked_rank(&pw, &[]) == codim).then(|| x.to_vec())
        })
    }))
}

/// First F_{q^k}-point of V where the Jacobian drops rank.
pub fn find_singular_point(v: &VarietySpec, k: u32, env: &Env) -> Result<Option<Vec<Elem>>> {
    let view = v.level(k)?;
    let sp = ProjectiveSpace::new(view.field(), v.n, env.budget)?;
    let codim = v.codim();
    Ok(env.exec.find_first(sp.len(), CHUNK, |range| {
        let mut pw = Vec::new();
        sp.find_in(range, |_, x| {
            view.powers(x, &mut pw);
            (view.vanishes(&pw) && view.stacked_rank(&pw, &[]) < codim).then(|| x.to_vec())
        })
    }))
}

/// All F_{q^k}-points of V, in enumeration order.
pub fn points_at_level(v: &VarietySpec, k: u32, env: &Env) -> Result<Vec<Vec<Elem>>> {
    let view = v.level(k)?;
    let sp = ProjectiveSpace::new(view.field(), v.n, env.budget)?;
    let parts = env.exec.map_chunks(sp.len(), CHUNK, |range| {
        let mut pw = Vec::new();
        let mut out = Vec::new();
        sp.walk(range, |_, x| {
            view.powers(x, &mut pw);
            if view.vanishes(&pw) {
                out.push(x.to_vec());
            }
        });
        out
    });
    Ok(parts.into_iter().flatten().collect())
}
