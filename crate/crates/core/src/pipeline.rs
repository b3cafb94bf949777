//! Count, check and audit runs that produce report rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::bounds::{self, BoundCheck, BoundClass, BoundContext, Measurements, Verdict};
use crate::catalog::GroundTruth;
use crate::counting::{
    classify_points, count_multihomogeneous_zeros, fiber_decomposition, nonsingular_section_search,
    sample_projection, singular_fiber_audit, AuditReport, LinearProjection, SingularBound, VarietySpec,
};
use crate::error::{Error, Result};
use crate::exec::Env;
use crate::gf::{Elem, Field};
use crate::points::p_r;
use crate::report::Row;
use crate::valueset::{
    average_direct, average_via_chi, chi_bound_check, cohen_partial, e_bound_check, fixed_tuples, ValueSetFamily,
};

/// Knobs shared by every run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub seed: u64,
    /// Highest extension level `K` for singularity audits.
    pub ext_level: u32,
    /// Seeded projections per instance.
    pub projections: u64,
    /// Name of a bound check whose bound is lowered by one before its
    /// verdict. Only for exercising the failure path.
    pub fault: Option<String>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            seed: 1,
            ext_level: 2,
            projections: 10,
            fault: None,
        }
    }
}

impl Settings {
    /// `projections` consecutive seeds starting at `seed`.
    pub fn seeds(&self) -> Vec<u64> {
        (0..self.projections).map(|i| self.seed.wrapping_add(i)).collect()
    }
}

pub fn context_for(v: &VarietySpec) -> Result<BoundContext> {
    let s = match v.singular_bound() {
        SingularBound::Smooth => None,
        SingularBound::AtMost(s) => Some(s),
    };
    BoundContext::new(v.ambient_dim(), v.dim(), s, v.degrees(), v.field().size() as u64)
}

/// The `s` used for projections: the declared bound, or 0 when smooth.
pub fn projection_s(v: &VarietySpec) -> Option<usize> {
    match v.singular_bound() {
        SingularBound::AtMost(s) => Some(s),
        SingularBound::Smooth if v.dim() >= 2 => Some(0),
        SingularBound::Smooth => None,
    }
}

fn shape(v: &VarietySpec) -> String {
    format!(
        "n={} r={} s={} d={:?} q={}",
        v.ambient_dim(),
        v.dim(),
        v.singular_bound(),
        v.degrees(),
        v.field().size()
    )
}

fn ctx_shape(ctx: &BoundContext) -> String {
    let s = ctx.s.map_or("smooth".to_string(), |s| s.to_string());
    format!("n={} r={} s={} d={:?} q={}", ctx.n, ctx.r, s, ctx.degrees, ctx.q)
}

fn point(f: &Field, x: &[Elem]) -> String {
    let parts: Vec<String> = x.iter().map(|&c| f.format(c)).collect();
    format!("({})", parts.join(":"))
}

fn equal_row(row: Row, measured: &impl ToString, expected: &impl ToString) -> Row {
    let (m, e) = (measured.to_string(), expected.to_string());
    let verdict = if m == e { "holds" } else { "violated" };
    row.measured(&m).against("hard", "=", e, verdict)
}

fn check_row(instance: &str, field: &str, inputs: &str, c: &BoundCheck) -> Row {
    let mut note = c.quantity.clone();
    if !c.verdict.reason().is_empty() {
        note = format!("{note}; {}", c.verdict.reason());
    }
    if let Some(b) = &c.bound {
        if !b.is_integer() {
            note = format!("{note}; bound ~ {:.6}", b.approx());
        }
    }
    Row::new("bound", instance, field, &c.name)
        .inputs(inputs)
        .measured(c.measured.as_ref().map_or(String::new(), |m| m.to_string()))
        .against(
            &c.class.to_string(),
            c.relation,
            c.bound.as_ref().map_or(String::new(), |b| b.to_string()),
            c.verdict.label(),
        )
        .note(note)
}

/// Lower the named check's bound by one and redo its verdict.
fn inject_fault(c: &mut BoundCheck) {
    let (Some(b), Some(m)) = (c.bound.as_mut(), c.measured.as_ref()) else {
        return;
    };
    b.rational -= 1;
    let ok = match c.relation {
        ">=" => !b.gt(m),
        _ => b.ge(m),
    };
    c.verdict = if ok { Verdict::Holds } else { Verdict::Violated };
}

/// Total, smooth and singular counts, plus the fiber decomposition when a
/// projection is given.
pub fn count_rows(name: &str, v: &VarietySpec, proj: Option<&LinearProjection>, env: &Env) -> Result<Vec<Row>> {
    let fname = v.field().name();
    let inputs = shape(v);
    let c = classify_points(v, env)?;
    let mut rows = vec![
        Row::new("count", name, &fname, "total").inputs(&inputs).measured(&c.total),
        Row::new("count", name, &fname, "smooth").inputs(&inputs).measured(&c.smooth),
        Row::new("count", name, &fname, "singular").inputs(&inputs).measured(&c.singular),
    ];
    if let Some(p) = proj {
        rows.extend(fiber_rows(name, v, p, None, env)?);
    }
    Ok(rows)
}

fn fiber_rows(name: &str, v: &VarietySpec, p: &LinearProjection, seed: Option<u64>, env: &Env) -> Result<Vec<Row>> {
    let fname = v.field().name();
    let seed_tag = seed.map_or(String::new(), |s| format!(" seed={s}"));
    let inputs = format!("{}{seed_tag} lambda={}", shape(v), matrix(v.field(), p));
    let rep = fiber_decomposition(v, p, env)?;
    let mut rows = Vec::new();
    if seed.is_none() {
        for (y, n) in &rep.fibers {
            rows.push(
                Row::new("fiber", name, &fname, "fiber-points")
                    .inputs(format!("y={}", point(v.field(), y)))
                    .measured(n),
            );
        }
    }
    rows.push(
        Row::new("fiber", name, &fname, "base-locus")
            .inputs(&inputs)
            .measured(rep.e),
    );
    rows.push(
        equal_row(
            Row::new("fiber", name, &fname, "fiber-identity").inputs(&inputs),
            &rep.identity_lhs,
            &rep.total,
        )
        .note(format!("sum N_y = {}, e = {}", rep.sum_fibers(), rep.e)),
    );
    Ok(rows)
}

fn matrix(f: &Field, p: &LinearProjection) -> String {
    let rows: Vec<String> = p.rows().iter().map(|r| point(f, r).replace(':', ",")).collect();
    format!("[{}]", rows.join(";"))
}

/// Fiber identity for `settings.projections` seeded projections.
pub fn fiber_identity_rows(name: &str, v: &VarietySpec, s: usize, settings: &Settings, env: &Env) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for seed in settings.seeds() {
        let sp = sample_projection(v, s, seed, settings.ext_level, env)?;
        rows.extend(fiber_rows(name, v, &sp.proj, Some(seed), env)?);
    }
    Ok(rows)
}

/// Counts, ground truth, every applicable bound and the existence
/// thresholds for one variety.
pub fn verify_rows(
    name: &str,
    v: &VarietySpec,
    truth: Option<&GroundTruth>,
    settings: &Settings,
    env: &Env,
) -> Result<Vec<Row>> {
    let fname = v.field().name();
    let inputs = shape(v);
    let q = v.field().size() as u64;
    let c = classify_points(v, env)?;
    let mut rows = vec![
        Row::new("count", name, &fname, "total").inputs(&inputs).measured(&c.total),
        Row::new("count", name, &fname, "smooth").inputs(&inputs).measured(&c.smooth),
        Row::new("count", name, &fname, "singular").inputs(&inputs).measured(&c.singular),
    ];
    if let Some(t) = truth {
        rows.push(equal_row(Row::new("truth", name, &fname, "total").inputs(&inputs), &c.total, &t.total));
        rows.push(equal_row(
            Row::new("truth", name, &fname, "singular").inputs(&inputs),
            &c.singular,
            &t.singular,
        ));
    }

    for (i, g) in v.generators().iter().enumerate() {
        let d = v.degrees()[i];
        let gname = format!("eta-generator-{i}");
        let ginputs = format!("d=[{d}] n=[{}] q={q}", v.ambient_dim());
        if d >= q as u32 {
            rows.push(
                Row::new("eta", name, &fname, &gname)
                    .inputs(&ginputs)
                    .against("hard", "<=", "", "not-applicable")
                    .note("needs d < q"),
            );
            continue;
        }
        let z = count_multihomogeneous_zeros(g, env)?;
        for (label, measured, bound) in [
            ("", &z.projective, bounds::eta(&[d], &[v.ambient_dim()], q)?),
            ("-affine", &z.affine, bounds::eta_affine(&[d], &[v.ambient_dim()], q)?),
        ] {
            let verdict = if *measured <= bound { "holds" } else { "violated" };
            rows.push(
                Row::new("eta", name, &fname, &format!("{gname}{label}"))
                    .inputs(&ginputs)
                    .measured(measured)
                    .against("hard", "<=", &bound, verdict),
            );
        }
    }

    let ctx = context_for(v)?;
    let ctx_inputs = ctx_shape(&ctx);
    let mut report = bounds::check(
        &ctx,
        &Measurements {
            total: Some(c.total.clone()),
            smooth: Some(c.smooth.clone()),
        },
    )?;
    if let Some(f) = &settings.fault {
        report.checks.iter_mut().filter(|c| &c.name == f).for_each(inject_fault);
    }
    rows.extend(report.checks.iter().map(|c| check_row(name, &fname, &ctx_inputs, c)));
    rows.extend(threshold_rows(name, &fname, &ctx));
    Ok(rows)
}

fn threshold_rows(name: &str, fname: &str, ctx: &BoundContext) -> Vec<Row> {
    let inputs = ctx_shape(ctx);
    bounds::existence_thresholds(ctx)
        .into_iter()
        .map(|t| {
            let (value, verdict) = match &t.value {
                None => (String::new(), "not-applicable"),
                Some(v) if t.guaranteed(ctx.q) => (v.to_string(), "guaranteed"),
                Some(v) => (v.to_string(), "not-guaranteed"),
            };
            Row::new("threshold", name, fname, t.name)
                .inputs(&inputs)
                .measured(ctx.q)
                .against(&t.class.to_string(), ">", value, verdict)
                .note(t.note)
        })
        .collect()
}

/// Values of every bound and threshold for a shape, without counting.
pub fn bounds_rows(name: &str, ctx: &BoundContext) -> Vec<Row> {
    let fname = ctx.q.to_string();
    let inputs = ctx_shape(ctx);
    let value = |n: &str, v: String, class: BoundClass, note: &str| {
        Row::new("bound", name, &fname, n)
            .inputs(&inputs)
            .against(&class.to_string(), "", v, "")
            .note(note)
    };
    let na = |n: &str, e: &Error| {
        Row::new("bound", name, &fname, n)
            .inputs(&inputs)
            .against("", "", "", "not-applicable")
            .note(e.to_string())
    };
    let mut rows = vec![value(
        "projective-upper",
        (ctx.delta() * p_r(ctx.q, ctx.r as i64)).to_string(),
        BoundClass::Hard,
        "N",
    )];
    for k in 1..=2 {
        let m = ctx.n - ctx.r + k;
        if let Some(b) = ctx.primitive_betti(k, m) {
            rows.push(value(&format!("betti-b{k}-n{m}"), b.to_string(), BoundClass::Hard, ""));
        }
    }
    for s in [ctx.r as i64 - 2, ctx.r as i64 - 3] {
        if s < 0 {
            continue;
        }
        let s = s as usize;
        match bounds::b_ds(ctx, s) {
            Ok(b) => rows.push(value(&format!("b-ds-s{s}"), b.to_string(), BoundClass::Hard, "")),
            Err(e) => rows.push(na(&format!("b-ds-s{s}"), &e)),
        }
        for smooth in [false, true] {
            let kind = if smooth { "smooth" } else { "total" };
            match bounds::main_estimate(ctx, s, smooth) {
                Ok(est) => {
                    rows.push(value(
                        &format!("theorem-{kind}-s{s}"),
                        est.theorem.to_string(),
                        BoundClass::Hard,
                        &format!("b'={} constant={}", est.b_prime, est.constant),
                    ));
                    rows.push(value(
                        &format!("corollary-{kind}-s{s}"),
                        est.corollary.to_string(),
                        BoundClass::Hard,
                        "",
                    ));
                    if let Some(alt) = est.corollary_alt {
                        rows.push(value(
                            &format!("corollary-{kind}-s{s}-intro"),
                            alt.to_string(),
                            BoundClass::Soft,
                            "alternate constant",
                        ));
                    }
                }
                Err(e) => rows.push(na(&format!("theorem-{kind}-s{s}"), &e)),
            }
        }
        match bounds::gl_bound(ctx, s) {
            Ok(b) => rows.push(value(&format!("gl-s{s}"), b.to_string(), BoundClass::Soft, "")),
            Err(e) => rows.push(na(&format!("gl-s{s}"), &e)),
        }
    }
    match bounds::cm_bound(ctx) {
        Ok((b, valid)) => rows.push(value(
            "cm",
            b.to_string(),
            BoundClass::Soft,
            if valid { "valid for this q" } else { "q too small for validity" },
        )),
        Err(e) => rows.push(na("cm", &e)),
    }
    rows.extend(threshold_rows(name, &fname, ctx));
    rows
}

/// `D^{r-s} delta p_s`, the largest possible number of flagged fibers.
pub fn audit_bound(v: &VarietySpec, s: usize) -> BigInt {
    let r = v.dim();
    BigInt::from(v.big_d()).pow((r - s) as u32) * v.delta() * p_r(v.field().size() as u64, s as i64)
}

/// Audit rows for each seed plus one nonsingular-section search.
pub fn bertini_rows(name: &str, v: &VarietySpec, settings: &Settings, env: &Env) -> Result<Vec<Row>> {
    let fname = v.field().name();
    let Some(s) = projection_s(v) else {
        return Ok(vec![Row::new("audit", name, &fname, "bertini-audit")
            .inputs(shape(v))
            .against("hard", "<=", "", "not-applicable")
            .note("needs r >= 2")]);
    };
    v.require_nonlinear("the Bertini audit")?;
    let bound = audit_bound(v, s);
    let mut rows = Vec::new();
    for seed in settings.seeds() {
        let sp = sample_projection(v, s, seed, settings.ext_level, env)?;
        let rep: AuditReport = singular_fiber_audit(v, &sp.proj, settings.ext_level, env)?;
        let flagged = BigInt::from(rep.flagged_count());
        let verdict = if flagged <= bound { "holds" } else { "violated" };
        let ys: Vec<String> = rep.flagged.iter().map(|f| point(v.field(), &f.y)).collect();
        rows.push(
            Row::new("audit", name, &fname, "bertini-audit")
                .inputs(format!(
                    "{} seed={seed} K={} lambda={}",
                    shape(v),
                    settings.ext_level,
                    matrix(v.field(), &sp.proj)
                ))
                .measured(&flagged)
                .against("hard", "<=", &bound, verdict)
                .note(format!(
                    "{}; fibers={} attempts={} flagged=[{}]",
                    AuditReport::SEMANTICS,
                    rep.fibers_checked,
                    sp.attempts,
                    ys.join(" ")
                )),
        );
    }
    let ctx = context_for(v)?;
    let threshold = bounds::existence_thresholds(&ctx)
        .into_iter()
        .find(|t| t.name == "section");
    let guaranteed = threshold.as_ref().is_some_and(|t| t.guaranteed(ctx.q));
    let search = nonsingular_section_search(v, s, &settings.seeds(), settings.ext_level, env)?;
    let (measured, note) = match &search.witness {
        Some(w) => (
            "found".to_string(),
            format!(
                "seed={} y={} fiber_points={} smooth_point={}; certified up to K={} only",
                w.seed,
                point(v.field(), &w.y),
                w.fiber_points,
                w.smooth_point.as_ref().map_or("none".into(), |x| point(v.field(), x)),
                search.max_level
            ),
        ),
        None => ("exhausted".to_string(), format!("{} seeds tried", search.outcomes.len())),
    };
    let verdict = match (&search.witness, guaranteed) {
        (Some(_), _) => "holds",
        (None, true) => "violated",
        (None, false) => "not-applicable",
    };
    rows.push(
        Row::new("section", name, &fname, "nonsingular-section")
            .inputs(format!("{} K={}", shape(v), settings.ext_level))
            .measured(measured)
            .against(
                "soft",
                ">",
                threshold.and_then(|t| t.value).map_or(String::new(), |t| t.to_string()),
                verdict,
            )
            .note(note),
    );
    Ok(rows)
}

fn rational(x: &BigRational) -> String {
    x.to_string()
}

fn tuple(f: &Field, t: &[Elem]) -> String {
    let parts: Vec<String> = t.iter().map(|&c| f.format(c)).collect();
    format!("[{}]", parts.join(","))
}

/// Value-set rows for one `(d, s, q)` cell.
pub fn valueset_rows(field: &Field, d: usize, s: usize, seed: u64, env: &Env) -> Result<Vec<Row>> {
    let fname = field.name();
    let q = field.size() as u64;
    let cell = format!("vs-d{d}-s{s}");
    let mut rows = Vec::new();
    for top in fixed_tuples(field, s, seed) {
        let fam = ValueSetFamily::new(field, d, s, top.clone())?;
        let inputs = format!("d={d} s={s} q={q} top={} seed={seed}", tuple(field, &top));
        let direct = average_direct(&fam, env)?;
        if s == 0 {
            rows.push(equal_row(
                Row::new("valueset", &cell, &fname, "average-cohen").inputs(&inputs),
                &rational(&direct),
                &rational(&cohen_partial(q, d)),
            ));
            continue;
        }
        let via = average_via_chi(&fam, env)?;
        rows.push(equal_row(
            Row::new("valueset", &cell, &fname, "average-identity").inputs(&inputs),
            &rational(&direct),
            &rational(&via),
        ));
        let e = e_bound_check(&fam, env)?;
        rows.push(
            Row::new("valueset", &cell, &fname, "e-bound")
                .inputs(&inputs)
                .measured(rational(&e.gap))
                .against(
                    "soft",
                    "<=",
                    format!("[{}, {}]", rational(&e.e_lower), rational(&e.e_upper)),
                    e.verdict.label(),
                )
                .note(format!(
                    "|N(d,s) - mu_d q| with N(d,s) = {}, mu_d q = {}; gap ~ {:.6}, E ~ {:.6}{}",
                    rational(&e.average),
                    rational(&e.mu_q),
                    e.gap.to_f64().unwrap_or(f64::NAN),
                    e.e_lower.to_f64().unwrap_or(f64::NAN),
                    if e.verdict.reason().is_empty() { String::new() } else { format!("; {}", e.verdict.reason()) }
                )),
        );
        for r in d - s + 1..=d {
            let c = chi_bound_check(&fam, r, env)?;
            rows.push(
                Row::new("chi", &cell, &fname, "chi-bound")
                    .inputs(format!("{inputs} r={r}"))
                    .measured(rational(&c.deviation))
                    .against("soft", "<=", rational(&c.bound), c.verdict.label())
                    .note(format!(
                        "|chi - q^(d-s)/r!| with chi = {}, q^(d-s)/r! = {}{}",
                        c.chi,
                        rational(&c.main_term),
                        if c.verdict.reason().is_empty() { String::new() } else { format!("; {}", c.verdict.reason()) }
                    )),
            );
        }
    }
    Ok(rows)
}
