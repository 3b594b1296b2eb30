use std::collections::BTreeMap;
use std::sync::Arc;

use levyspec::construction::{
    build_y_prop1, build_y_prop3, default_prop1_schedule, minimal_l1, sample_cantor_point, verify_membership,
    CantorParams, Exponents, ForbiddenChoice, DEFAULT_N0,
};
use levyspec::diophantine::delta_estimate;
use levyspec::levy::{eval_exact, haar_coeff_closed, haar_coeff_numeric_with, haar_term, osc_holder_estimate, HaarNorm, LevyParams};
use levyspec::measure::{children, free_positions, forbidden_positions, local_dim_series, mu_cylinder, root_mass};
use levyspec::spectrum::{
    dichotomy_classify, empirical_bivariate, theoretical_bivariate, EmpiricalConfig, SpectrumQuery, SpectrumValue,
    Verdict, YDescriptor,
};
use levyspec::symbolic::{project, DigitStream, Word};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::oracle::{self, rat, Kind, Pt, Region, Val};
use crate::Criterion;

type Res = Result<String, String>;

fn e<E: std::fmt::Debug>(x: E) -> String {
    format!("{x:?}")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

pub static CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "exponent-recovery", run: c1 },
    Criterion { id: 2, name: "almost-sure-exponent", run: c2 },
    Criterion { id: 3, name: "cantor-membership", run: c3 },
    Criterion { id: 4, name: "measure-consistency", run: c4 },
    Criterion { id: 5, name: "local-dimension", run: c5 },
    Criterion { id: 6, name: "haar-closed-form", run: c6 },
    Criterion { id: 7, name: "evaluation-certificates", run: c7 },
    Criterion { id: 8, name: "holder-cross-check", run: c8 },
    Criterion { id: 9, name: "dichotomy-classifier", run: c9 },
    Criterion { id: 10, name: "spectrum-oracle", run: c10 },
    Criterion { id: 11, name: "empirical-spectrum", run: c11 },
];

fn c1() -> Res {
    let depth = 100_000;
    let mut detail = vec![];
    for (eta, exact) in [(1.5, rat(3, 2)), (2.0, rat(2, 1)), (3.0, rat(3, 1))] {
        let l1 = minimal_l1(eta).map_err(e)?;
        let y = build_y_prop3(eta, l1, 2).map_err(e)?;
        let est = delta_estimate(&y, depth).map_err(e)?;
        ensure((est.estimate - eta).abs() <= 0.05, || format!("η={eta}: estimate {}", est.estimate))?;
        let ls = oracle::floor_chain(&exact, l1, depth);
        // a lone 1 is a top-digit run of length 1; the long zero runs start at the l_i
        let long: Vec<_> = est.witnesses.iter().filter(|w| w.m > 1).collect();
        ensure(!long.is_empty(), || format!("η={eta}: no witnesses"))?;
        for w in &long {
            ensure(ls.contains(&w.n), || format!("η={eta}: witness at {} is not an l_i", w.n))?;
        }
        detail.push(format!("η={eta}: {:.4} ({} witnesses)", est.estimate, long.len()));
    }
    Ok(detail.join(", "))
}

fn c2() -> Res {
    let ests: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|s| delta_estimate(&DigitStream::seeded(2, 1000 + s).unwrap(), 100_000).unwrap().estimate)
        .collect();
    let (lo, hi) = ests.iter().fold((f64::INFINITY, 0f64), |(a, b), &x| (a.min(x), b.max(x)));
    ensure(lo >= 1.0 && hi <= 1.12, || format!("range [{lo}, {hi}]"))?;
    Ok(format!("100 streams in [{lo:.4}, {hi:.4}]"))
}

fn param_sets() -> Vec<Exponents> {
    [(2.0, 3.0, 1.0, 1.5), (1.0, 1.0, 0.5, 0.5), (2.0, 2.0, 1.5, 1.5)]
        .iter()
        .map(|&(a, b, c, d)| Exponents::new(a, b, c, d).unwrap())
        .collect()
}

fn ys(base: u32) -> Vec<(&'static str, DigitStream)> {
    let sched = default_prop1_schedule(2.0, &[8]).unwrap();
    vec![("prop1", build_y_prop1(2.0, &sched, base).unwrap()), ("random", DigitStream::seeded(base, 77).unwrap())]
}

const LEVELS3: usize = 5;

fn c3() -> Res {
    let mut points = 0;
    for ex in param_sets() {
        for (yname, y) in ys(2) {
            let p = Arc::new(CantorParams::new(ex.clone(), y.clone(), DEFAULT_N0, LEVELS3, u128::MAX / 4).map_err(e_)?);
            let res: Vec<Result<(), String>> = (0..50u64)
                .into_par_iter()
                .map(|seed| {
                    let x = sample_cantor_point(&p, seed, ForbiddenChoice::Random).map_err(e)?;
                    let rep = verify_membership(&x, &p, LEVELS3).map_err(e)?;
                    ensure(rep.pass && rep.checkpoints.len() == LEVELS3, || format!("{yname} seed {seed}: {rep:?}"))?;
                    ensure(rep.interior.iter().all(|r| r.violations == 0), || format!("{yname} seed {seed}: interior"))?;
                    // recount each checkpoint run directly
                    let lv = &p.levels;
                    let upto = (p.ns[LEVELS3] + lv[LEVELS3 - 1].m.max(lv[LEVELS3 - 1].m_prime) + 2) as usize;
                    let ok = x.with_prefix(upto, |d| {
                        y.with_prefix(upto, |t| {
                            lv.iter().all(|l| {
                                let n = l.n as usize;
                                if l.k % 2 == 0 {
                                    d[n..].iter().take_while(|&&v| v == 0).count() as u128 == l.m
                                } else {
                                    d[n..].iter().zip(&t[n..]).take_while(|(a, b)| a == b).count() as u128 == l.m_prime
                                }
                            })
                        })
                    });
                    ensure(ok, || format!("{yname} seed {seed}: recount differs"))
                })
                .collect();
            res.into_iter().collect::<Result<Vec<_>, _>>()?;
            points += 50;
        }
    }
    Ok(format!("{points} points, levels 0..{}", LEVELS3 - 1))
}

fn e_(x: levyspec::Error) -> String {
    e(x)
}

fn c4() -> Res {
    let cases = [(0usize, 2u32), (1, 2), (2, 3)];
    let sets = param_sets();
    let mut checked = 0u64;
    for (i, base) in cases {
        for (yname, y) in ys(base) {
            let p = Arc::new(CantorParams::new(sets[i].clone(), y, DEFAULT_N0, 3, u128::MAX / 4).map_err(e_)?);
            let n3 = p.ns[3] as usize;
            let samples: Vec<Vec<u8>> = (0..64u64)
                .into_par_iter()
                .map(|s| sample_cantor_point(&p, s, ForbiddenChoice::Random).unwrap().prefix(n3))
                .collect();
            ensure(mu_cylinder(&p, &Word::new(base, vec![]).unwrap()).map_err(e_)?.normalized == root_mass(), || {
                "root mass".into()
            })?;
            // mass of a level-n cylinder as a product of per-position choice counts
            let hull = oracle::column_hull(&samples);
            let (mut u, mut f) = (0u128, 0u128);
            for n in 1..=n3 {
                match hull[n - 1] {
                    c if c == base => u += 1,
                    c if c + 1 == base && base > 2 => f += 1,
                    _ => {}
                }
                let (lu, lf) = (free_positions(&p, n as u128), forbidden_positions(&p, n as u128));
                let lf = if base == 2 { 0 } else { lf };
                ensure((u, f) == (lu, lf), || format!("{yname} b={base}: level {n}: hull ({u},{f}) vs ({lu},{lf})"))?;
            }
            // exact child sums along sampled paths
            let mut levels: Vec<usize> = (0..1500.min(n3)).collect();
            for (k, lv) in p.levels.iter().enumerate() {
                let n = lv.n as usize;
                for c in [n, n + lv.lead() as usize, n + lv.lead() as usize + 3, p.ns[k + 1] as usize - 3] {
                    levels.extend(c.saturating_sub(3)..(c + 3).min(n3));
                }
            }
            levels.sort_unstable();
            levels.dedup();
            let bad: Vec<String> = levels
                .par_iter()
                .flat_map_iter(|&n| {
                    let p = &p;
                    samples[..2].iter().filter_map(move |s| {
                        let w = Word::new(base, s[..n].to_vec()).unwrap();
                        let parent = mu_cylinder(p, &w).unwrap().normalized;
                        let sum: BigRational = children(p, &w).unwrap().into_iter().map(|c| c.1).sum();
                        (sum != parent).then(|| format!("level {n}"))
                    })
                })
                .collect();
            ensure(bad.is_empty(), || format!("{yname} b={base}: child sums differ at {bad:?}"))?;
            checked += 2 * levels.len() as u64;
        }
    }
    Ok(format!("per-level masses match the digit hull up to n_3; {checked} exact child sums"))
}

/// `u` at every checkpoint by block bookkeeping: each block removes its lead, its fixed
/// separators and its `≠θ` positions from the free count.
fn bookkeeping_checkpoints(p: &CantorParams) -> Vec<u128> {
    let mut u = p.ns[0] - (2 + 2 * p.r_w0);
    let mut out = vec![];
    for (k, lv) in p.levels.iter().enumerate() {
        out.push(u);
        let fixed = if k % 2 == 0 { lv.m + 5 + 3 * lv.r } else { lv.m_prime + 6 + 3 * lv.r };
        u += p.ns[k + 1] - p.ns[k] - fixed;
    }
    out
}

fn c5() -> Res {
    let mut detail = vec![];
    for e in param_sets() {
        let p = CantorParams::new(e.clone(), DigitStream::seeded(2, 5).unwrap(), DEFAULT_N0, 14, u128::MAX / 4)
            .map_err(e_)?;
        let s = local_dim_series(&p);
        let book = bookkeeping_checkpoints(&p);
        for (c, b) in s.checkpoints.iter().zip(&book) {
            ensure(c.u_n == *b, || format!("checkpoint {}: u {} vs bookkeeping {b}", c.k, c.u_n))?;
        }
        let (ev, od) = (&s.checkpoints[12], &s.checkpoints[13]);
        ensure(ev.abs_error < 0.05 && od.abs_error < 0.05, || format!("k=6: {ev:?} {od:?}"))?;
        ensure((od.period_min - s.target_min).abs() < 0.05, || format!("k=6 period minimum {}", od.period_min))?;
        detail.push(format!(
            "({},{}): {:.4}/{:.4} vs {:.4}/{:.4}, period min {:.4}, cumulative min {:.4}",
            e.h1, e.h2, ev.ratio, od.ratio, ev.target, od.target, od.period_min, od.running_min
        ));
    }
    Ok(detail.join("; "))
}

fn c6() -> Res {
    for j in 0..=12u32 {
        for l in 0..=j {
            let want = -0.25 * 2f64.powi(l as i32 - j as i32);
            for k in [0, (1u64 << j) / 3, (1u64 << j) - 1] {
                let o = oracle::haar_l1(j, k, l).to_f64().unwrap();
                let lib = haar_term(j, k, l, HaarNorm::L1).map_err(e_)?;
                ensure((o - want).abs() <= 1e-12 && (lib - want).abs() <= 1e-12, || {
                    format!("j={j} l={l} k={k}: oracle {o}, library {lib}, expected {want}")
                })?;
            }
        }
    }
    for j in 0..=6u32 {
        for alpha in [0.5, 1.0, 1.7] {
            let c0 = haar_coeff_numeric_with(alpha, j, 0, 0..=j + 20, HaarNorm::L2).map_err(e_)?;
            for k in 1..(1u64 << j) {
                let c = haar_coeff_numeric_with(alpha, j, k, 0..=j + 20, HaarNorm::L2).map_err(e_)?;
                ensure((c - c0).abs() <= 1e-12, || format!("j={j} k={k}: {c} vs {c0}"))?;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for j in 0..=12u32 {
        let num = haar_coeff_numeric_with(0.5, j, 0, 0..=j, HaarNorm::L2).map_err(e_)?;
        let closed = haar_coeff_closed(0.5, j, j, 2).map_err(e_)?;
        worst = worst.max((num / closed * 2f64.powi(j as i32) - 1.0).abs());
    }
    ensure(worst <= 1e-12, || format!("numeric/closed deviates from 2^-j by {worst}"))?;
    Ok(format!("measured numeric/closed = 2^-j (max rel. dev. {worst:.1e})"))
}

fn c7() -> Res {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let alpha = [0.5, 1.0, 1.7][i % 3];
        let base = [2, 3][i % 2];
        let p = LevyParams::new(alpha, base).map_err(e_)?;
        let d = (rng.next_u32() % 1_000_000 + 2) as i64;
        let x = rat(rng.next_u32() as i64 % d, d);
        let ev = eval_exact(&p, &x, tol).map_err(e_)?;
        let longer = oracle::levy_partial(alpha, base, &x, ev.terms_used + 40);
        let anti = eval_exact(&p, &(BigRational::one() - &x), tol).map_err(e_)?.value;
        let per = eval_exact(&p, &(&x + BigRational::one()), tol).map_err(e_)?.value;
        let (d1, d2, d3) = ((ev.value - longer).abs(), (ev.value + anti).abs(), (ev.value - per).abs());
        ensure(d1 < tol && d2 <= 2.0 * tol && d3 <= 2.0 * tol, || format!("x={x} α={alpha} b={base}: {d1} {d2} {d3}"))?;
        worst = worst.max(d1);
    }
    Ok(format!("1000 points, max change past cutoff {worst:.2e}"))
}

fn c8() -> Res {
    // deep enough that early digit runs, which the exponent estimate also skips, drop out
    let scales: Vec<u32> = (20..=48).collect();
    let mut worst: f64 = 0.0;
    for alpha in [0.8, 1.5] {
        let p = LevyParams::new(alpha, 2).map_err(e_)?;
        let r: Vec<Result<f64, String>> = (0..20u64)
            .into_par_iter()
            .map(|s| {
                let y = DigitStream::seeded(2, 500 + s).map_err(e_)?;
                let d = delta_estimate(&y, 100_000).map_err(e_)?.estimate;
                let h = osc_holder_estimate(&p, &project(&y, 200), &scales).map_err(e_)?;
                let diff = (h - alpha / d).abs();
                ensure(diff <= 0.2, || format!("α={alpha} seed {s}: osc {h:.3} vs α/Δ {:.3}", alpha / d))?;
                Ok(diff)
            })
            .collect();
        for d in r {
            worst = worst.max(d?);
        }
    }
    Ok(format!("40 points, max |osc − α/Δ| = {worst:.3}"))
}

fn c9() -> Res {
    let y = build_y_prop3(2.0, minimal_l1(2.0).map_err(e_)?, 2).map_err(e_)?;
    let mut grid = vec![];
    for i in 1..=10 {
        for j in 1..=10 {
            let (h1, h2) = (rat(50 + 5 * i, 100), rat(j, 10));
            let sq = &h1 * &h1;
            let clear = rat(2, 100);
            let gap = |a: &BigRational, b: &BigRational| if a > b { a - b } else { b - a };
            if h2 >= &h1 - &clear || gap(&h2, &sq) < clear {
                continue;
            }
            grid.push((h1.clone(), h2.clone(), h2 > sq));
        }
    }
    let res: Vec<Result<bool, String>> = grid
        .par_iter()
        .map(|(h1, h2, inside)| {
            let q = SpectrumQuery::parse(&h1.to_string(), &h2.to_string(), "1", "1", YDescriptor::Prop3 { eta: 2.0 })
                .map_err(e_)?;
            let r = dichotomy_classify(&y, &q, 100_000).map_err(e_)?;
            let want = if *inside { Verdict::MinFormulaEvidence } else { Verdict::EmptyEvidence };
            ensure(r.verdict == want, || format!("({h1}, {h2}): {:?}", r.verdict))?;
            ensure(*inside || !r.witnesses.is_empty(), || format!("({h1}, {h2}): no witnesses"))?;
            Ok(*inside)
        })
        .collect();
    let inside = res.into_iter().collect::<Result<Vec<_>, _>>()?;
    let k = inside.iter().filter(|&&b| b).count();
    Ok(format!("{} queries: {k} min-formula, {} empty, 0 inconclusive", inside.len(), inside.len() - k))
}

fn c10() -> Res {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let alphas = [(1, 1), (1, 2), (3, 2), (2, 1)];
    let kinds = [Kind::Badic, Kind::Rational, Kind::Prop3, Kind::Prop1, Kind::Explicit, Kind::AlmostEvery];
    let mut regions: BTreeMap<Region, usize> = BTreeMap::new();
    let mut pairs: BTreeMap<(u8, Region), usize> = BTreeMap::new();
    for i in 0..200usize {
        let (a1n, a2n) = alphas[rng.next_u32() as usize % 4];
        let kind = kinds[i % 6];
        let etas = [(3, 2), (2, 1), (3, 1)];
        let (en, ed) = etas[rng.next_u32() as usize % 3];
        let (desc, delta) = match kind {
            Kind::Badic => (YDescriptor::BadicRational, None),
            Kind::Rational => (YDescriptor::Rational, Some(rat(1, 1))),
            Kind::AlmostEvery => (YDescriptor::AlmostEvery, Some(rat(1, 1))),
            Kind::Prop3 => (YDescriptor::Prop3 { eta: en as f64 / ed as f64 }, Some(rat(en, ed))),
            Kind::Prop1 => (YDescriptor::Prop1 { eta: en as f64 / ed as f64 }, Some(rat(en, ed))),
            Kind::Explicit => match rng.next_u32() % 3 {
                0 => (YDescriptor::Explicit { delta: f64::INFINITY }, None),
                1 => (YDescriptor::Explicit { delta: 1.25 }, Some(rat(5, 4))),
                _ => (YDescriptor::Explicit { delta: 2.0 }, Some(rat(2, 1))),
            },
        };
        // H = α·t/40, sometimes placed on the diagonal or on the parabola
        let t1 = (rng.next_u32() % 45) as i64;
        let t2 = match i % 8 {
            0 | 1 => t1,
            2 => -1,
            _ => (rng.next_u32() % 45) as i64,
        };
        let h1 = rat(a1n * t1, 40);
        let h2 = if t2 >= 0 { rat(a2n * t2, 40) } else { rat(a2n * t1 * t1, 1600) };
        let q = SpectrumQuery::parse(&h1.to_string(), &h2.to_string(), &a1n.to_string(), &a2n.to_string(), desc)
            .map_err(e_)?;
        let pt = Pt { h1, h2, a1: rat(a1n, 1), a2: rat(a2n, 1), kind, delta };
        let want = oracle::spectrum(&pt);
        let got = match theoretical_bivariate(&q) {
            SpectrumValue::Dim(d) => Val::Dim(d),
            SpectrumValue::Empty => Val::Empty,
            SpectrumValue::DichotomyUndetermined => Val::Undetermined,
        };
        ensure(got == want, || format!("query {i} ({:?}, H=({}, {})): {got:?} vs {want:?}", kind, pt.h1, pt.h2))?;
        let r = oracle::region(&pt);
        *regions.entry(r).or_default() += 1;
        *pairs.entry((i as u8 % 6, r)).or_default() += 1;
    }
    ensure(regions.len() == 4, || format!("regions covered: {regions:?}"))?;
    Ok(format!("200 queries agree; regions {regions:?}"))
}

fn c11() -> Res {
    let sched = default_prop1_schedule(2.0, &[8]).unwrap();
    let y = build_y_prop1(2.0, &sched, 2).map_err(e_)?;
    let mut cfg = EmpiricalConfig::new(2, 1.0, 1.0, y, YDescriptor::Prop1 { eta: 2.0 }, 11);
    cfg.depth = 1 << 14;
    cfg.cell_depth = 1 << 14;
    cfg.samples = 10_000;
    cfg.cantor = vec![(0.5, 0.5)];
    cfg.cantor_fraction = 0.5;
    let rows = empirical_bivariate(&cfg).map_err(e_)?;
    let find = |h1: f64, h2: f64| rows.iter().find(|r| r.h1_bin == h1 && r.h2_bin == h2);
    let half = find(0.5, 0.5).ok_or("no samples in the (0.5, 0.5) bin")?;
    let one = find(1.0, 1.0).ok_or("no samples in the (1, 1) bin")?;
    ensure((half.dim_est - 0.5).abs() <= 0.2 && (one.dim_est - 1.0).abs() <= 0.2, || {
        format!("(0.5,0.5): {:.3} from {}; (1,1): {:.3} from {}", half.dim_est, half.count, one.dim_est, one.count)
    })?;
    Ok(format!(
        "(0.5,0.5): {:.3} from {} points; (1,1): {:.3} from {} points",
        half.dim_est, half.count, one.dim_est, one.count
    ))
}
