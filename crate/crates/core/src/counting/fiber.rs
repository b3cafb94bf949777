//! Linear projections `pi: V -> P^{s+1}`, their fibers, the polar locus,
//! and bounded-level Bertini audits.
//!
//! For `lambda` with rows `l_0, ..., l_{s+1}` and a canonical `y` with
//! leading index `j0`, the fiber closure `V_y` is cut out of `V` by the
//! `s+1` forms `l_j - y_j l_{j0}` (`j != j0`). Their common zero set is a
//! linear space of dimension `n-s-1` that contains `L = {lambda x = 0}`,
//! so every fiber is enumerated directly as a projective subspace.

use std::ops::Range;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{count_points, LevelView, VarietySpec};
use crate::error::{Error, Result};
use crate::exec::{Env, CHUNK};
use crate::gf::{Elem, Field};
use crate::linalg;
use crate::points::{p_r, p_r_u128, PointSpace, PointsError, ProjectiveSpace};

/// Attempts per seed before sampling a generic projection gives up.
pub const MAX_SAMPLE_ATTEMPTS: u32 = 200;

/// A full-rank `(s+2) x (n+1)` matrix over the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProjection {
    field: Field,
    rows: Vec<Vec<Elem>>,
}

impl LinearProjection {
    pub fn new(field: &Field, rows: Vec<Vec<Elem>>) -> Result<LinearProjection> {
        if rows.len() < 2 {
            return Err(Error::invalid(
                "projection shape",
                format!("need at least 2 rows (s + 2 with s >= 0), got {}", rows.len()),
            ));
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::invalid("projection shape", "rows have different lengths"));
        }
        for r in &rows {
            for &c in r {
                field.check(c)?;
            }
        }
        let rank = linalg::rank(field, &rows);
        if rank != rows.len() {
            return Err(Error::RankDeficient {
                rank,
                expected: rows.len(),
            });
        }
        Ok(LinearProjection {
            field: field.clone(),
            rows,
        })
    }

    pub fn from_ints(field: &Field, rows: &[Vec<i64>]) -> Result<LinearProjection> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_int(v)).collect())
            .collect();
        LinearProjection::new(field, rows)
    }

    /// The `s` with `s + 2` rows.
    pub fn s(&self) -> usize {
        self.rows.len() - 2
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn apply(&self, x: &[Elem]) -> Vec<Elem> {
        linalg::mat_vec(&self.field, &self.rows, x)
    }

    /// The `s+1` linear forms whose zero set is the span of `V_y`'s
    /// ambient fiber.
    pub fn cut_rows(&self, y: &[Elem]) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let j0 = y.iter().position(|c| !c.is_zero()).expect("y is nonzero");
        (0..self.rows.len())
            .filter(|&j| j != j0)
            .map(|j| {
                self.rows[j]
                    .iter()
                    .zip(&self.rows[j0])
                    .map(|(&a, &b)| f.sub(f.mul(y[j0], a), f.mul(y[j], b)))
                    .collect()
            })
            .collect()
    }

    /// Basis of `L = ker(lambda)`.
    pub fn center_basis(&self) -> Vec<Vec<Elem>> {
        linalg::kernel(&self.field, &self.rows, self.width())
    }

    pub fn fiber_basis(&self, y: &[Elem]) -> Vec<Vec<Elem>> {
        linalg::kernel(&self.field, &self.cut_rows(y), self.width())
    }
}

fn check_projection(v: &VarietySpec, proj: &LinearProjection) -> Result<usize> {
    if proj.field() != v.field() {
        return Err(Error::invalid("projection field", "projection is over a different field"));
    }
    if proj.width() != v.ambient_dim() + 1 {
        return Err(Error::invalid(
            "projection shape",
            format!("rows must have n + 1 = {} entries", v.ambient_dim() + 1),
        ));
    }
    let s = proj.s();
    if !v.admits_s(s) {
        return Err(Error::invalid(
            "singular bound",
            format!(
                "projection to P^{} needs 0 <= s <= r - 2 = {} and dim Sing(V) <= s (declared {})",
                s + 1,
                v.dim() as i64 - 2,
                v.singular_bound()
            ),
        ));
    }
    Ok(s)
}

/// Projective span of `basis` (vectors over `field`), walked as
/// `P^{len-1}` coefficient vectors.
struct Span<'a> {
    field: &'a Field,
    basis: &'a [Vec<Elem>],
    coeffs: ProjectiveSpace,
}

impl<'a> Span<'a> {
    fn new(field: &'a Field, basis: &'a [Vec<Elem>], budget: u64) -> Result<Option<Span<'a>>> {
        if basis.is_empty() {
            return Ok(None);
        }
        let coeffs = ProjectiveSpace::new(field, basis.len() - 1, budget)?;
        Ok(Some(Span {
            field,
            basis,
            coeffs,
        }))
    }

    fn len(&self) -> u64 {
        self.coeffs.len()
    }

    fn find<T>(&self, range: Range<u64>, mut visit: impl FnMut(&[Elem]) -> Option<T>) -> Option<T> {
        let f = self.field;
        let width = self.basis[0].len();
        let mut x = vec![f.zero(); width];
        self.coeffs.find_in(range, |_, c| {
            for (j, xj) in x.iter_mut().enumerate() {
                let mut acc = f.zero();
                for (ci, b) in c.iter().zip(self.basis) {
                    if !ci.is_zero() {
                        acc = f.add(acc, f.mul(*ci, b[j]));
                    }
                }
                *xj = acc;
            }
            visit(&x)
        })
    }

    fn walk(&self, range: Range<u64>, mut visit: impl FnMut(&[Elem])) {
        self.find::<()>(range, |x| {
            visit(x);
            None
        });
    }
}

fn budget_check(needed: Option<u128>, budget: u64) -> Result<()> {
    match needed {
        Some(n) if n <= budget as u128 => Ok(()),
        n => Err(Error::Points(PointsError::Budget {
            needed: n.unwrap_or(u128::MAX),
            budget,
        })),
    }
}

fn count_on_span(view: &LevelView, basis: &[Vec<Elem>], budget: u64) -> Result<u64> {
    let Some(span) = Span::new(view.field(), basis, budget)? else {
        return Ok(0);
    };
    let mut pw = Vec::new();
    let mut c = 0u64;
    span.walk(0..span.len(), |x| {
        view.powers(x, &mut pw);
        if view.vanishes(&pw) {
            c += 1;
        }
    });
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub s: usize,
    /// `(y, N_y)` for every `y` in `P^{s+1}(F_q)`, enumeration order.
    /// `N_y` counts all F_q-points of the fiber closure, base points included.
    pub fibers: Vec<(Vec<Elem>, u64)>,
    /// `|(V cap L)(F_q)|`.
    pub e: u64,
    /// `|V(F_q)|` from an independent full enumeration.
    pub total: BigInt,
    /// `sum_y N_y - (p_{s+1} - 1) e`.
    pub identity_lhs: BigInt,
}

impl FiberReport {
    pub fn identity_holds(&self) -> bool {
        self.identity_lhs == self.total
    }

    pub fn sum_fibers(&self) -> BigInt {
        self.fibers.iter().map(|(_, c)| BigInt::from(*c)).sum()
    }
}

/// Count each fiber closure and the base locus separately, then check
/// `sum N_y - (p_{s+1} - 1) e = |V(F_q)|` against a direct count.
pub fn fiber_decomposition(
    v: &VarietySpec,
    proj: &LinearProjection,
    env: &Env,
) -> Result<FiberReport> {
    let s = check_projection(v, proj)?;
    let q = v.field().size() as u64;
    let n = v.ambient_dim() as i64;
    budget_check(
        p_r_u128(q, s as i64 + 1).zip(p_r_u128(q, n - s as i64 - 1)).and_then(|(a, b)| a.checked_mul(b)),
        env.budget,
    )?;
    let view = v.level(1)?;
    let ys = ProjectiveSpace::new(v.field(), s + 1, env.budget)?.collect_all();
    let counts = env.exec.map_items(ys.clone(), |y| {
        count_on_span(&view, &proj.fiber_basis(&y), env.budget)
    });
    let counts = counts.into_iter().collect::<Result<Vec<u64>>>()?;
    let e = count_on_span(&view, &proj.center_basis(), env.budget)?;
    let total = count_points(v, env)?;
    let fibers: Vec<(Vec<Elem>, u64)> = ys.into_iter().zip(counts).collect();
    let sum: BigInt = fibers.iter().map(|(_, c)| BigInt::from(*c)).sum();
    let identity_lhs = sum - (p_r(q, s as i64 + 1) - 1) * BigInt::from(e);
    let report = FiberReport {
        s,
        fibers,
        e,
        total,
        identity_lhs,
    };
    if !report.identity_holds() {
        return Err(Error::invalid(
            "fiber identity",
            format!(
                "sum N_y - (p_(s+1) - 1) e = {} but |V(F_q)| = {}",
                report.identity_lhs, report.total
            ),
        ));
    }
    Ok(report)
}

/// Points of V over F_{q^k} where the Jacobian stacked on the rows of
/// `lambda` has rank below `n - r + s + 2`. On the smooth locus these are
/// the polar points; singular points of V always appear.
pub fn polar_minor_locus(
    v: &VarietySpec,
    proj: &LinearProjection,
    level: u32,
    env: &Env,
) -> Result<Vec<Vec<Elem>>> {
    v.require_nonlinear("the polar locus")?;
    if proj.width() != v.ambient_dim() + 1 || proj.field() != v.field() {
        return Err(Error::invalid("projection shape", "projection does not match the variety"));
    }
    let view = v.level(level)?;
    let rows: Vec<Vec<Elem>> = proj.rows().iter().map(|r| view.embed_vec(r)).collect();
    let full = v.codim() + proj.s() + 2;
    let sp = ProjectiveSpace::new(view.field(), v.ambient_dim(), env.budget)?;
    let parts = env.exec.map_chunks(sp.len(), CHUNK, |range| {
        let mut pw = Vec::new();
        let mut out = Vec::new();
        sp.walk(range, |_, x| {
            view.powers(x, &mut pw);
            if view.vanishes(&pw) && view.stacked_rank(&pw, &rows) < full {
                out.push(x.to_vec());
            }
        });
        out
    });
    Ok(parts.into_iter().flatten().collect())
}

/// A point of `V_y` over F_{q^k} where `V_y` is singular.
fn singular_point_in_fiber(
    view: &LevelView,
    cut: &[Vec<Elem>],
    basis: &[Vec<Elem>],
    budget: u64,
) -> Result<Option<Vec<Elem>>> {
    let cut: Vec<Vec<Elem>> = cut.iter().map(|r| view.embed_vec(r)).collect();
    let basis: Vec<Vec<Elem>> = basis.iter().map(|b| view.embed_vec(b)).collect();
    let Some(span) = Span::new(view.field(), &basis, budget)? else {
        return Ok(None);
    };
    let full = view.codim() + cut.len();
    let mut pw = Vec::new();
    Ok(span.find(0..span.len(), |x| {
        view.powers(x, &mut pw);
        (view.vanishes(&pw) && view.stacked_rank(&pw, &cut) < full).then(|| x.to_vec())
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlaggedFiber {
    pub y: Vec<Elem>,
    /// Lowest level at which a singular point was found.
    pub level: u32,
    /// The singular point, coordinates in F_{q^level}.
    pub witness: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub s: usize,
    pub max_level: u32,
    pub fibers_checked: u64,
    pub flagged: Vec<FlaggedFiber>,
}

impl AuditReport {
    /// Every flagged fiber is certified singular. Unflagged fibers were
    /// only checked at levels `1..=max_level`.
    pub const SEMANTICS: &'static str =
        "one-sided: flagged fibers are certified singular; unflagged fibers are nonsingular only up to the audited extension level";

    pub fn flagged_count(&self) -> usize {
        self.flagged.len()
    }
}

fn views(v: &VarietySpec, max_level: u32) -> Result<Vec<LevelView>> {
    if max_level == 0 {
        return Err(Error::invalid("extension level", "K must be >= 1"));
    }
    (1..=max_level).map(|k| v.level(k)).collect()
}

fn audit_budget(v: &VarietySpec, s: usize, views: &[LevelView], budget: u64) -> Result<()> {
    let q = v.field().size() as u64;
    let n = v.ambient_dim() as i64;
    let mut per_y: Option<u128> = Some(0);
    for view in views {
        let qk = view.field().size() as u64;
        per_y = per_y
            .zip(p_r_u128(qk, n - s as i64 - 1))
            .and_then(|(a, b)| a.checked_add(b));
    }
    budget_check(
        per_y.zip(p_r_u128(q, s as i64 + 1)).and_then(|(a, b)| a.checked_mul(b)),
        budget,
    )
}

/// First level in `views` with a singular point on `V_y`.
fn fiber_singularity(
    views: &[LevelView],
    proj: &LinearProjection,
    y: &[Elem],
    budget: u64,
) -> Result<Option<(u32, Vec<Elem>)>> {
    let cut = proj.cut_rows(y);
    let basis = linalg::kernel(proj.field(), &cut, proj.width());
    for view in views {
        if let Some(x) = singular_point_in_fiber(view, &cut, &basis, budget)? {
            return Ok(Some((view.level(), x)));
        }
    }
    Ok(None)
}

/// The `y in P^{s+1}(F_q)` whose fiber closure has a singular point over
/// some F_{q^k}, `k <= max_level`.
pub fn singular_fiber_audit(
    v: &VarietySpec,
    proj: &LinearProjection,
    max_level: u32,
    env: &Env,
) -> Result<AuditReport> {
    let s = check_projection(v, proj)?;
    let views = views(v, max_level)?;
    audit_budget(v, s, &views, env.budget)?;
    let ys = ProjectiveSpace::new(v.field(), s + 1, env.budget)?.collect_all();
    let checked = ys.len() as u64;
    let results = env.exec.map_items(ys, |y| {
        fiber_singularity(&views, proj, &y, env.budget).map(|hit| (y, hit))
    });
    let mut flagged = Vec::new();
    for r in results {
        if let (y, Some((level, witness))) = r? {
            flagged.push(FlaggedFiber { y, level, witness });
        }
    }
    Ok(AuditReport {
        s,
        max_level,
        fibers_checked: checked,
        flagged,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScreenOutcome {
    Passed,
    /// `L` meets the singular locus of V.
    SingularOnCenter { level: u32 },
    /// `V cap L` has a singular point.
    SingularBaseLocus { level: u32 },
    /// `V cap L` has more points than a variety of dimension `r-s-2` and
    /// degree `delta` can.
    BaseLocusTooLarge { level: u32, count: u64, bound: u128 },
}

/// Checks on the base locus `V cap L` that a generic `lambda` passes.
pub fn screen_projection(
    v: &VarietySpec,
    proj: &LinearProjection,
    max_level: u32,
    env: &Env,
) -> Result<ScreenOutcome> {
    let s = check_projection(v, proj)?;
    let basis = proj.center_basis();
    let codim = v.codim();
    let expected_dim = v.dim() as i64 - s as i64 - 2;
    for view in views(v, max_level)? {
        let rows: Vec<Vec<Elem>> = proj.rows().iter().map(|r| view.embed_vec(r)).collect();
        let emb_basis: Vec<Vec<Elem>> = basis.iter().map(|b| view.embed_vec(b)).collect();
        let Some(span) = Span::new(view.field(), &emb_basis, env.budget)? else {
            continue;
        };
        let level = view.level();
        let mut pw = Vec::new();
        let mut count = 0u64;
        let bad = span.find(0..span.len(), |x| {
            view.powers(x, &mut pw);
            if !view.vanishes(&pw) {
                return None;
            }
            count += 1;
            let jac = view.stacked_rank(&pw, &[]);
            if jac < codim {
                return Some(ScreenOutcome::SingularOnCenter { level });
            }
            if view.stacked_rank(&pw, &rows) < codim + s + 2 {
                return Some(ScreenOutcome::SingularBaseLocus { level });
            }
            None
        });
        if let Some(outcome) = bad {
            return Ok(outcome);
        }
        let bound = v.delta() as u128
            * p_r_u128(view.field().size() as u64, expected_dim).unwrap_or(u128::MAX);
        if count as u128 > bound {
            return Ok(ScreenOutcome::BaseLocusTooLarge {
                level,
                count,
                bound,
            });
        }
    }
    Ok(ScreenOutcome::Passed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledProjection {
    pub seed: u64,
    pub proj: LinearProjection,
    /// Candidates drawn, including the accepted one.
    pub attempts: u32,
    pub rank_rejections: u32,
    pub screen_rejections: u32,
}

/// Draw `lambda` uniformly among full-rank `(s+2) x (n+1)` matrices from
/// a seeded stream, redrawing until the base-locus screen passes at
/// levels `<= max_level`.
pub fn sample_projection(
    v: &VarietySpec,
    s: usize,
    seed: u64,
    max_level: u32,
    env: &Env,
) -> Result<SampledProjection> {
    if !v.admits_s(s) {
        return Err(Error::invalid(
            "singular bound",
            format!("s = {s} is not admissible for this variety (r = {}, declared {})", v.dim(), v.singular_bound()),
        ));
    }
    let f = v.field();
    let q = f.size();
    let width = v.ambient_dim() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut rank_rej, mut screen_rej) = (0, 0);
    for attempt in 1..=MAX_SAMPLE_ATTEMPTS {
        let rows: Vec<Vec<Elem>> = (0..s + 2)
            .map(|_| (0..width).map(|_| f.nth_element(rng.gen_range(0..q))).collect())
            .collect();
        let proj = match LinearProjection::new(f, rows) {
            Ok(p) => p,
            Err(Error::RankDeficient { .. }) => {
                rank_rej += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if screen_projection(v, &proj, max_level, env)? == ScreenOutcome::Passed {
            return Ok(SampledProjection {
                seed,
                proj,
                attempts: attempt,
                rank_rejections: rank_rej,
                screen_rejections: screen_rej,
            });
        }
        screen_rej += 1;
    }
    Err(Error::invalid(
        "generic projection",
        format!(
            "seed {seed}: no candidate passed after {MAX_SAMPLE_ATTEMPTS} draws ({rank_rej} rank-deficient, {screen_rej} screened out)"
        ),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionWitness {
    pub seed: u64,
    pub proj: LinearProjection,
    pub y: Vec<Elem>,
    /// `|V_y(F_q)|`.
    pub fiber_points: u64,
    /// An F_q-point of `V_y` that is a smooth point of V.
    pub smooth_point: Option<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedOutcome {
    pub seed: u64,
    /// `None` when no projection could be sampled for this seed.
    pub sample_error: Option<String>,
    pub fibers_examined: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSearch {
    pub s: usize,
    pub max_level: u32,
    pub witness: Option<SectionWitness>,
    pub outcomes: Vec<SeedOutcome>,
}

/// Look for `(lambda, y)` over F_q whose fiber has an F_q-point and no
/// singular point at levels `<= max_level`.
pub fn nonsingular_section_search(
    v: &VarietySpec,
    s: usize,
    seeds: &[u64],
    max_level: u32,
    env: &Env,
) -> Result<SectionSearch> {
    let views = views(v, max_level)?;
    audit_budget(v, s.min(v.dim().saturating_sub(2)), &views, env.budget)?;
    let base = &views[0];
    let codim = v.codim();
    let ys = ProjectiveSpace::new(v.field(), s + 1, env.budget)?;
    let mut outcomes = Vec::new();
    for &seed in seeds {
        let sampled = match sample_projection(v, s, seed, max_level, env) {
            Ok(p) => p,
            Err(e @ Error::Invalid { .. }) if e.to_string().contains("generic projection") => {
                outcomes.push(SeedOutcome {
                    seed,
                    sample_error: Some(e.to_string()),
                    fibers_examined: 0,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let proj = sampled.proj;
        let mut examined = 0u64;
        let mut found = None;
        for idx in 0..ys.len() {
            let y = ys.point(idx);
            examined += 1;
            let basis = proj.fiber_basis(&y);
            let Some(span) = Span::new(base.field(), &basis, env.budget)? else {
                continue;
            };
            let mut pw = Vec::new();
            let mut count = 0u64;
            let mut smooth = None;
            span.walk(0..span.len(), |x| {
                base.powers(x, &mut pw);
                if base.vanishes(&pw) {
                    count += 1;
                    if smooth.is_none() && base.stacked_rank(&pw, &[]) == codim {
                        smooth = Some(x.to_vec());
                    }
                }
            });
            if count == 0 {
                continue;
            }
            if fiber_singularity(&views, &proj, &y, env.budget)?.is_some() {
                continue;
            }
            found = Some(SectionWitness {
                seed,
                proj: proj.clone(),
                y,
                fiber_points: count,
                smooth_point: smooth,
            });
            break;
        }
        outcomes.push(SeedOutcome {
            seed,
            sample_error: None,
            fibers_examined: examined,
        });
        if found.is_some() {
            return Ok(SectionSearch {
                s,
                max_level,
                witness: found,
                outcomes,
            });
        }
    }
    Ok(SectionSearch {
        s,
        max_level,
        witness: None,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_smooth_points, SingularBound};
    use crate::gf::make_field;

    fn spec(q: u64, n: usize, r: usize, gens: &[&str], s: SingularBound) -> VarietySpec {
        VarietySpec::parse(&make_field(q, 1).unwrap(), n, r, gens, s).unwrap()
    }

    fn smooth_quadric(q: u64) -> VarietySpec {
        spec(q, 3, 2, &["1*X0^1*X3^1 - 1*X1^1*X2^1"], SingularBound::Smooth)
    }

    fn cone(q: u64) -> VarietySpec {
        spec(q, 3, 2, &["1*X1^2 - 1*X0^1*X2^1"], SingularBound::AtMost(0))
    }

    #[test]
    fn fiber_identity_on_smooth_quadric() {
        let v = smooth_quadric(3);
        let proj =
            LinearProjection::from_ints(v.field(), &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let rep = fiber_decomposition(&v, &proj, &Env::default()).unwrap();
        assert_eq!(rep.total, BigInt::from(16));
        assert!(rep.identity_holds());
        assert_eq!(rep.fibers.len(), 4);
    }

    #[test]
    fn empty_base_locus_sums_directly() {
        // A curve admits no projection with s >= 0.
        let v = spec(5, 2, 1, &["1*X0^2 + 1*X1^2 - 1*X2^2"], SingularBound::Smooth);
        assert!(fiber_decomposition(
            &v,
            &LinearProjection::from_ints(v.field(), &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap(),
            &Env::default()
        )
        .is_err());
        let v = cone(5);
        let proj =
            LinearProjection::from_ints(v.field(), &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        let rep = fiber_decomposition(&v, &proj, &Env::default()).unwrap();
        if rep.e == 0 {
            assert_eq!(rep.sum_fibers(), rep.total);
        }
        assert!(rep.identity_holds());
    }

    #[test]
    fn conic_rejected_for_fibers() {
        let v = spec(3, 2, 1, &["1*X0^1*X2^1 - 1*X1^2"], SingularBound::Smooth);
        let proj = LinearProjection::from_ints(v.field(), &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert!(matches!(
            fiber_decomposition(&v, &proj, &Env::default()),
            Err(Error::Invalid { .. })
        ));
    }

    #[test]
    fn rank_deficient_projection_rejected() {
        let f = make_field(3, 1).unwrap();
        assert!(matches!(
            LinearProjection::from_ints(&f, &[vec![1, 2, 0, 0], vec![2, 1, 0, 0]]),
            Err(Error::RankDeficient { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn polar_locus_contains_cone_vertex() {
        let v = cone(5);
        let env = Env::default();
        for seed in 0..5 {
            let p = sample_projection(&v, 0, seed, 1, &env).unwrap().proj;
            let pts = polar_minor_locus(&v, &p, 1, &env).unwrap();
            assert!(pts.contains(&vec![Elem(0), Elem(0), Elem(0), Elem(1)]));
        }
    }

    #[test]
    fn polar_locus_of_smooth_quadric_is_small() {
        // D = 1, delta = 2: degree bound D^{r-s} delta = 2, so at most 2 p_0.
        let env = Env::default();
        for q in [3, 5, 7] {
            let v = smooth_quadric(q);
            for seed in 0..8 {
                let p = sample_projection(&v, 0, seed, 2, &env).unwrap().proj;
                assert!(polar_minor_locus(&v, &p, 1, &env).unwrap().len() <= 2);
            }
        }
    }

    #[test]
    fn hyperplane_rejected_for_polar_locus() {
        let v = spec(3, 3, 2, &["1*X0^1"], SingularBound::Smooth);
        let proj =
            LinearProjection::from_ints(v.field(), &[vec![0, 1, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        assert!(polar_minor_locus(&v, &proj, 1, &Env::default()).is_err());
    }

    #[test]
    fn audit_flags_fiber_through_vertex() {
        let v = cone(5);
        let env = Env::default();
        for seed in 0..6 {
            let p = sample_projection(&v, 0, seed, 2, &env).unwrap().proj;
            let a1 = singular_fiber_audit(&v, &p, 1, &env).unwrap();
            let a2 = singular_fiber_audit(&v, &p, 2, &env).unwrap();
            // The fiber whose span contains the vertex is always flagged.
            let vertex_y = {
                let mut y = p.apply(&[Elem(0), Elem(0), Elem(0), Elem(1)]);
                crate::points::canonicalize(v.field(), &mut y).unwrap();
                y
            };
            assert!(a1.flagged.iter().any(|f| f.y == vertex_y));
            for f in &a1.flagged {
                assert!(a2.flagged.iter().any(|g| g.y == f.y));
            }
            // Degree bound D^{r-s} delta p_s = 2.
            assert!(a2.flagged_count() <= 2);
        }
    }

    #[test]
    fn section_search_finds_smooth_witness() {
        let v = cone(7);
        let res =
            nonsingular_section_search(&v, 0, &(0..5).collect::<Vec<_>>(), 2, &Env::default())
                .unwrap();
        let w = res.witness.expect("threshold exceeded, witness exists");
        assert!(w.fiber_points >= 1);
        let x = w.smooth_point.expect("fiber lies in the smooth locus");
        let view = v.level(1).unwrap();
        assert_eq!(crate::counting::jacobian_rank(&view, &x).unwrap(), 1);
        assert!(count_smooth_points(&v, &Env::default()).unwrap().0 >= BigInt::from(1));
    }

    #[test]
    fn sampling_is_seed_stable() {
        let v = smooth_quadric(5);
        let env = Env::default();
        let a = sample_projection(&v, 0, 42, 2, &env).unwrap();
        let b = sample_projection(&v, 0, 42, 2, &env).unwrap();
        assert_eq!(a, b);
    }
}
