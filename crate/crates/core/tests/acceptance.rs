//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use fqpoints::bounds::{self, BoundClass, Measurements, Verdict};
use fqpoints::catalog::{self, Family, Instance};
use fqpoints::counting::{
    classify_points, count_multihomogeneous_zeros, fiber_decomposition, find_nonzero_point, find_singular_point,
    find_smooth_point, sample_projection, singular_fiber_audit, SingularBound, VarietySpec,
};
use fqpoints::exec::Env;
use fqpoints::gf::{is_prime, make_field, Field};
use fqpoints::mpoly::MultiPoly;
use fqpoints::pipeline::{self, audit_bound, context_for, Settings};
use fqpoints::points::p_r_u128;
use fqpoints::report::{Header, Report};
use fqpoints::valueset::{
    average_direct, average_via_chi, chi_bound_check, cohen_partial, e_bound_check, fixed_tuples, ValueSetFamily,
};

type Outcome = Result<String, String>;

fn field(q: u64) -> Field {
    let (p, k) = prime_power(q).expect("prime power");
    make_field(p, k).unwrap()
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|p| q % p == 0)?;
    let mut k = 0;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1 && is_prime(p)).then_some((p, k))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `(n_i, d_i)` multisets of size `m`, nondecreasing.
fn cells(m: usize) -> Vec<Vec<(usize, u32)>> {
    let kinds: Vec<(usize, u32)> = (1..=2).flat_map(|n| (1..=3).map(move |d| (n, d))).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(kinds: &[(usize, u32)], start: usize, m: usize, cur: &mut Vec<(usize, u32)>, out: &mut Vec<Vec<(usize, u32)>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..kinds.len() {
            cur.push(kinds[i]);
            rec(kinds, i, m, cur, out);
            cur.pop();
        }
    }
    rec(&kinds, 0, m, &mut cur, &mut out);
    out
}

const MULTI_QS: [u64; 5] = [4, 5, 7, 8, 9];
const POLYS_PER_CELL: u64 = 100;

fn multihomogeneous_grid(mut per_poly: impl FnMut(&MultiPoly, &[usize], &[u32], u64) -> Result<(), String>) -> Result<u64, String> {
    let mut checked = 0;
    for q in MULTI_QS {
        let f = field(q);
        for m in 1..=3 {
            for cell in cells(m) {
                let dims: Vec<usize> = cell.iter().map(|c| c.0).collect();
                let degs: Vec<u32> = cell.iter().map(|c| c.1).collect();
                let groups: Vec<usize> = dims.iter().map(|n| n + 1).collect();
                for i in 0..POLYS_PER_CELL {
                    let seed = q * 1_000_000 + (m as u64) * 100_000 + checked % 100_000 + i;
                    let g = MultiPoly::random_multihomogeneous(&f, &groups, &degs, seed).unwrap();
                    per_poly(&g, &dims, &degs, q)?;
                }
                checked += POLYS_PER_CELL;
            }
        }
    }
    Ok(checked)
}

fn criterion_1(env: &Env) -> Outcome {
    let start = Instant::now();
    let n = multihomogeneous_grid(|g, dims, degs, q| {
        let z = count_multihomogeneous_zeros(g, env).map_err(|e| e.to_string())?;
        let eta = bounds::eta(degs, dims, q).unwrap();
        let eta_a = bounds::eta_affine(degs, dims, q).unwrap();
        ensure(z.projective <= eta, || format!("N = {} > eta = {eta} for {g} over F_{q}", z.projective))?;
        ensure(z.affine <= eta_a, || format!("N_a = {} > eta^a = {eta_a} for {g} over F_{q}", z.affine))
    })?;
    let f2 = field(2);
    let tight = MultiPoly::parse("1*X0^1*X2^1", &f2, &[2, 2]).unwrap();
    let z = count_multihomogeneous_zeros(&tight, env).map_err(|e| e.to_string())?;
    ensure(z.projective == BigInt::from(5), || format!("tight case gave {}", z.projective))?;
    ensure(z.projective == bounds::eta(&[1, 1], &[1, 1], 2).unwrap(), || "tight case not equal to eta".into())?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("{n} polynomials within eta and eta^a; tight case N = 5; {:.1}s", took.as_secs_f64()))
}

fn criterion_2(env: &Env) -> Outcome {
    let n = multihomogeneous_grid(|g, dims, degs, q| {
        let pt = find_nonzero_point(g, env).map_err(|e| e.to_string())?;
        let pt = pt.ok_or_else(|| format!("no nonzero point for {g} over F_{q}"))?;
        ensure(!g.eval_groups(&pt).unwrap().is_zero(), || "witness is a zero".into())?;
        let z = count_multihomogeneous_zeros(g, env).map_err(|e| e.to_string())?;
        let lower = bounds::nonzero_lower(degs, dims, q);
        ensure(z.affine_nonzeros() >= lower, || {
            format!("{} non-zeros < {lower} for {g} over F_{q}", z.affine_nonzeros())
        })
    })?;
    Ok(format!("{n} polynomials with a nonzero witness and enough non-zeros"))
}

fn catalog_at(qs: &[u64]) -> Vec<Instance> {
    qs.iter()
        .flat_map(|&q| catalog::instances(&field(q)).unwrap())
        .collect()
}

fn criterion_3(env: &Env) -> Outcome {
    let mut checked = 0;
    for inst in catalog_at(&[3, 4, 5, 7]) {
        let v = &inst.spec;
        if v.dim() < 2 {
            continue;
        }
        for s in 0..=v.dim() - 2 {
            if !v.admits_s(s) {
                continue;
            }
            for seed in 1..=10 {
                let sp = sample_projection(v, s, seed, 2, env).map_err(|e| format!("{}: {e}", inst.name()))?;
                let rep = fiber_decomposition(v, &sp.proj, env).map_err(|e| format!("{}: {e}", inst.name()))?;
                ensure(rep.identity_holds(), || {
                    format!("{} over F_{} seed {seed}: {} != {}", inst.name(), v.field().name(), rep.identity_lhs, rep.total)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (variety, s, projection) triples satisfy the fiber identity exactly"))
}

fn bertini_targets() -> Vec<Instance> {
    let mut out = Vec::new();
    for q in [3u64, 4, 5, 7] {
        let f = field(q);
        let fams = [
            Family::QuadricCone { n: 3 },
            Family::QuadricCone { n: 4 },
            Family::Fermat { d: 3 },
            Family::Fermat { d: 4 },
            Family::TwoQuadrics,
            Family::TwoQuadricsCone { n: 4 },
        ];
        for fam in fams {
            if fam.supports(&f).is_ok() {
                out.push(fam.build(&f).unwrap());
            }
        }
    }
    out
}

fn criterion_4(env: &Env) -> Outcome {
    let mut audits = 0;
    let mut flagged_total = 0;
    for inst in bertini_targets() {
        let v = &inst.spec;
        let s = pipeline::projection_s(v).unwrap();
        let bound = audit_bound(v, s);
        for seed in 1..=20 {
            let sp = sample_projection(v, s, seed, 2, env).map_err(|e| format!("{}: {e}", inst.name()))?;
            let rep = singular_fiber_audit(v, &sp.proj, 2, env).map_err(|e| e.to_string())?;
            let flagged = BigInt::from(rep.flagged_count());
            ensure(flagged <= bound, || {
                format!("{} over F_{} seed {seed}: {flagged} flagged > {bound}", inst.name(), v.field().name())
            })?;
            audits += 1;
            flagged_total += rep.flagged_count();
        }
    }
    Ok(format!(
        "{audits} audits at K=2 within D^(r-s) delta p_s ({flagged_total} fibers flagged in total; flagged fibers are certified, unflagged ones only up to K)"
    ))
}

fn criterion_5(env: &Env) -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut instances = 0;
    for inst in catalog_at(&[3, 4, 5, 7, 9, 11, 13]) {
        let v = &inst.spec;
        let ctx = context_for(v).unwrap();
        let relevant: Vec<usize> = [v.dim() as i64 - 2, v.dim() as i64 - 3]
            .into_iter()
            .filter(|&s| s >= 0 && matches!(v.singular_bound(), SingularBound::AtMost(t) if t as i64 == s))
            .map(|s| s as usize)
            .collect();
        if relevant.is_empty() {
            continue;
        }
        let c = classify_points(v, env).map_err(|e| e.to_string())?;
        let rep = bounds::check(
            &ctx,
            &Measurements {
                total: Some(c.total),
                smooth: Some(c.smooth),
            },
        )
        .unwrap();
        for s in relevant {
            let tag = if s + 2 == v.dim() { "codim2" } else { "codim3" };
            for name in [
                format!("theorem-total-s{s}"),
                format!("theorem-smooth-s{s}"),
                format!("corollary-{tag}-total"),
                format!("corollary-{tag}-smooth"),
            ] {
                let chk = rep
                    .checks
                    .iter()
                    .find(|c| c.name == name)
                    .ok_or_else(|| format!("{}: no {name} check", inst.name()))?;
                ensure(chk.verdict == Verdict::Holds, || {
                    format!("{} over F_{}: {}", inst.name(), v.field().name(), chk.statement())
                })?;
                checked += 1;
            }
        }
        instances += 1;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(600), || format!("took {took:?}"))?;
    Ok(format!("{checked} theorem/corollary checks hold on {instances} singular instances; {:.1}s", took.as_secs_f64()))
}

fn prime_powers(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&q| prime_power(q).is_some()).collect()
}

fn criterion_6(env: &Env) -> Outcome {
    let mut checked = 0;
    for q in prime_powers(128) {
        let f = field(q);
        for inst in catalog::instances(&f).unwrap() {
            let ctx = context_for(&inst.spec).unwrap();
            let active: Vec<&'static str> = bounds::existence_thresholds(&ctx)
                .into_iter()
                .filter(|t| t.class == BoundClass::Hard && !t.name.starts_with("section") && t.guaranteed(q))
                .map(|t| t.name)
                .collect();
            if active.is_empty() {
                continue;
            }
            let v = &inst.spec;
            let small = p_r_u128(q, v.ambient_dim() as i64).is_some_and(|n| n <= 2_000_000);
            let has_smooth = if small {
                classify_points(v, env).map_err(|e| e.to_string())?.smooth >= BigInt::from(1)
            } else {
                let wide = Env {
                    budget: u64::MAX,
                    ..env.clone()
                };
                find_smooth_point(v, &wide).map_err(|e| e.to_string())?.is_some()
            };
            ensure(has_smooth, || format!("{} over F_{q}: no smooth point although {active:?} apply", inst.name()))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no instance above any threshold".into())?;
    Ok(format!("{checked} (instance, q) pairs above a threshold all have smooth points (q <= 128)"))
}

fn criterion_7(env: &Env) -> Outcome {
    let mut lines = Vec::new();
    for q in [5u64, 7] {
        let f = field(q);
        let b1 = bounds::betti_b1(2, &[3]).unwrap();
        ensure(b1 == BigInt::from(2), || format!("b1' = {b1}"))?;
        let bound = bounds::deligne_bound(q, 1, b1);
        let mut found = 0;
        let mut seed = 0;
        let mut worst = BigInt::from(0);
        while found < 50 {
            seed += 1;
            ensure(seed < 10_000, || "too few smooth cubics".into())?;
            let g = MultiPoly::random_multihomogeneous(&f, &[3], &[3], 7_000 + seed).unwrap();
            let v = VarietySpec::new(&f, 2, 1, vec![g], SingularBound::Smooth).unwrap();
            // Singular points of a plane cubic are defined over F_{q^k}, k <= 3.
            let mut singular = false;
            for k in 1..=3 {
                if find_singular_point(&v, k, env).map_err(|e| e.to_string())?.is_some() {
                    singular = true;
                    break;
                }
            }
            if singular {
                continue;
            }
            let c = classify_points(&v, env).map_err(|e| e.to_string())?;
            let dev = (c.total - BigInt::from(q + 1)).magnitude().clone().into();
            ensure(bound.ge(&dev), || format!("|N - {}| = {dev} > {bound} over F_{q}", q + 1))?;
            if dev > worst {
                worst = dev;
            }
            found += 1;
        }
        lines.push(format!("F_{q}: 50 smooth cubics, max |N - (q+1)| = {worst} <= {bound}"));
    }
    Ok(lines.join("; "))
}

const VS_QS: [u64; 5] = [5, 7, 9, 11, 13];

fn criterion_8(env: &Env) -> Outcome {
    let start = Instant::now();
    let mut tuples = 0;
    for q in VS_QS {
        let f = field(q);
        for d in 2..=6usize {
            for s in 1..=d / 2 {
                if s + 2 > d {
                    continue;
                }
                for top in fixed_tuples(&f, s, 17) {
                    let fam = ValueSetFamily::new(&f, d, s, top).unwrap();
                    let direct = average_direct(&fam, env).map_err(|e| e.to_string())?;
                    let via = average_via_chi(&fam, env).map_err(|e| e.to_string())?;
                    ensure(direct == via, || format!("d={d} s={s} q={q} {:?}: {direct} != {via}", fam.top()))?;
                    tuples += 1;
                }
            }
            let fam = ValueSetFamily::new(&f, d, 0, vec![]).unwrap();
            let direct = average_direct(&fam, env).map_err(|e| e.to_string())?;
            ensure(direct == cohen_partial(q, d), || format!("s=0 d={d} q={q}: {direct}"))?;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!("{tuples} families satisfy the identity exactly; s = 0 matches the closed form; {:.1}s", took.as_secs_f64()))
}

fn criterion_9(env: &Env) -> Outcome {
    let f5 = field(5);
    let fam = ValueSetFamily::new(&f5, 3, 1, vec![f5.zero()]).unwrap();
    let e = e_bound_check(&fam, env).map_err(|e| e.to_string())?;
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    ensure(e.gap == r(1, 15), || format!("gap {}", e.gap))?;
    ensure(e.verdict == Verdict::Holds, || format!("verdict {:?}", e.verdict))?;
    let chi = chi_bound_check(&fam, 3, env).map_err(|e| e.to_string())?;
    ensure(chi.chi == 2 && chi.deviation == r(13, 6) && chi.bound == r(0, 1), || format!("{chi:?}"))?;
    ensure(chi.verdict == Verdict::Violated, || format!("{:?}", chi.verdict))?;

    let (mut holds, mut violated, mut other) = (0, 0, 0);
    let (mut chi_ok, mut chi_bad) = (0, 0);
    for q in VS_QS {
        let f = field(q);
        for d in 3..=6usize {
            for s in 1..=d / 2 {
                for top in fixed_tuples(&f, s, 17) {
                    let fam = ValueSetFamily::new(&f, d, s, top).unwrap();
                    match e_bound_check(&fam, env).map_err(|e| e.to_string())?.verdict {
                        Verdict::Holds => holds += 1,
                        Verdict::Violated => violated += 1,
                        _ => other += 1,
                    }
                    for rr in d - s + 1..=d {
                        match chi_bound_check(&fam, rr, env).map_err(|e| e.to_string())?.verdict {
                            Verdict::Holds => chi_ok += 1,
                            _ => chi_bad += 1,
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "d=3 s=1 q=5: gap 1/15 holds; chi(3,1,3) = 2, |2 - 25/6| = 13/6 against bound 0 (soft, violated); sweep E: {holds} hold, {violated} violated, {other} other; chi bound: {chi_ok} hold, {chi_bad} violated"
    ))
}

fn determinism_report(env: &Env) -> Result<String, String> {
    let mut rep = Report::new(Header::new("acceptance", 1, env.budget, 2));
    let settings = Settings {
        projections: 3,
        ..Settings::default()
    };
    for q in [3u64, 5] {
        for inst in catalog::instances(&field(q)).unwrap() {
            rep.extend(pipeline::verify_rows(&inst.name(), &inst.spec, Some(&inst.truth), &settings, env).map_err(|e| e.to_string())?);
            if let Some(s) = pipeline::projection_s(&inst.spec) {
                rep.extend(pipeline::fiber_identity_rows(&inst.name(), &inst.spec, s, &settings, env).map_err(|e| e.to_string())?);
            }
        }
    }
    let f5 = field(5);
    let cone = Family::QuadricCone { n: 3 }.build(&f5).unwrap();
    rep.extend(pipeline::bertini_rows(&cone.name(), &cone.spec, &settings, env).map_err(|e| e.to_string())?);
    rep.extend(pipeline::valueset_rows(&field(7), 4, 2, 3, env).map_err(|e| e.to_string())?);
    rep.extend(pipeline::valueset_rows(&field(9), 5, 2, 3, env).map_err(|e| e.to_string())?);
    let mut text = rep.to_csv().map_err(|e| e.to_string())?;
    // Multihomogeneous counts, one cell per group count.
    for (q, cell) in [(5u64, vec![(2usize, 2u32)]), (7, vec![(1, 3), (2, 1)]), (4, vec![(1, 1), (2, 2), (1, 3)])] {
        let dims: Vec<usize> = cell.iter().map(|c| c.0).collect();
        let degs: Vec<u32> = cell.iter().map(|c| c.1).collect();
        let groups: Vec<usize> = dims.iter().map(|n| n + 1).collect();
        for seed in 0..5 {
            let g = MultiPoly::random_multihomogeneous(&field(q), &groups, &degs, seed).unwrap();
            let z = count_multihomogeneous_zeros(&g, env).map_err(|e| e.to_string())?;
            text.push_str(&format!("{q},{dims:?},{degs:?},{seed},{},{}\n", z.projective, z.affine));
        }
    }
    Ok(text)
}

fn criterion_10(_: &Env) -> Outcome {
    let one = determinism_report(&Env::new(1, fqpoints::exec::DEFAULT_BUDGET))?;
    let eight = determinism_report(&Env::new(8, fqpoints::exec::DEFAULT_BUDGET))?;
    ensure(one == eight, || {
        let line = one.lines().zip(eight.lines()).position(|(a, b)| a != b);
        format!("reports differ at line {line:?}")
    })?;
    Ok(format!("{} report bytes identical with 1 and 8 workers", one.len()))
}

fn main() {
    let env = Env::default();
    let criteria: [(&str, fn(&Env) -> Outcome); 10] = [
        ("multihomogeneous bound suite", criterion_1),
        ("nonvanishing witness", criterion_2),
        ("fiber identity", criterion_3),
        ("Bertini audit", criterion_4),
        ("main estimates", criterion_5),
        ("existence end-to-end", criterion_6),
        ("Deligne spot-check", criterion_7),
        ("value-set identity", criterion_8),
        ("E-bound and chi bound", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| f(&env))).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {title} [{secs:.1}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title} [{secs:.1}s]: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
