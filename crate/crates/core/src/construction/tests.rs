use super::*;
use crate::symbolic::{expand_rational, run_length, RunLength};

fn exps(a1: f64, a2: f64, h1: f64, h2: f64) -> Exponents {
    Exponents::new(a1, a2, h1, h2).unwrap()
}

fn params(e: Exponents, theta: DigitStream, n0: u128, k: usize) -> Arc<CantorParams> {
    Arc::new(CantorParams::new(e, theta, n0, k, 1 << 40).unwrap())
}

#[test]
fn block_param_examples() {
    let e = Exponents::parse("2", "2.5", "1", "1").unwrap();
    assert_eq!(block_params(100, &e).unwrap(), (100, 150, 100));
    let e = exps(1.0, 1.0, 1.0, 1.0);
    assert_eq!(block_params(100, &e).unwrap(), (0, 0, 1));
    // n_0 = 50, m*_0 = 20 gives two separator pairs in W_0
    let e = Exponents::parse("1.4", "2", "1", "1").unwrap();
    let p = params(e, DigitStream::seeded(2, 1).unwrap(), 50, 2);
    assert_eq!(p.levels[0].m_star, 20);
    assert_eq!(p.r_w0, 2);
    assert!(Exponents::new(1.0, 1.0, 0.0, 0.5).is_err());
    assert!(Exponents::new(1.0, 1.0, 1.5, 0.5).is_err());
}

#[test]
fn schedule_rule() {
    let e = exps(2.0, 2.0, 1.0, 1.0);
    let ns = nk_schedule(&e, 32, 6, u128::MAX).unwrap();
    assert_eq!(ns[1], 128);
    for k in 1..ns.len() {
        assert!((k as u128) * ns[k - 1] * (k as u128 + 1) <= ns[k]);
    }
    let e = Exponents::parse("1", "1", "0.1", "0.1").unwrap();
    let ns = nk_schedule(&e, 32, 3, u128::MAX).unwrap();
    // lead 288 + margin 8 + spacing 288 dominates 4 * 32
    assert_eq!(ns[1], 32 + 288 + 8 + 288);
    let err = nk_schedule(&exps(2.0, 2.0, 1.0, 1.0), 32, 10, 1 << 20).unwrap_err();
    assert!(matches!(err, Error::Resource { level: 4, .. }), "{err:?}");
    for k in 0..6 {
        let p = params(exps(2.0, 3.0, 1.0, 1.5), DigitStream::seeded(2, 1).unwrap(), 32, 6);
        assert!(p.levels[k].r >= 1);
    }
}

fn recount(t: &WordTemplate) -> (u128, u128) {
    let (mut f, mut g) = (0, 0);
    for o in 1..=t.len {
        match t.slot(o) {
            Some(Slot::NotTheta) => g += 1,
            Some(_) => f += 1,
            None => {}
        }
    }
    (f, g)
}

#[test]
fn template_counts() {
    for (e, n0) in [
        (exps(2.0, 3.0, 1.0, 1.5), 32),
        (exps(2.0, 2.0, 1.5, 1.5), 32),
        (exps(1.0, 1.0, 0.9, 0.6), 20),
        (exps(1.0, 1.0, 1.0, 1.0), 10),
    ] {
        let p = params(e, DigitStream::seeded(2, 3).unwrap(), n0, 4);
        for (j, t) in p.templates().iter().enumerate() {
            let (fixed, forb) = recount(t);
            assert_eq!(t.counts(), (fixed, forb));
            if j >= 1 {
                let lv = &p.levels[j - 1];
                if lv.k % 2 == 0 {
                    assert_eq!(fixed + forb, lv.m + 3 * (lv.r + 1) + 2);
                } else {
                    assert_eq!(fixed + forb, lv.m_prime + 3 * lv.r + 6);
                }
            }
            for o in [1, t.len / 3, t.len / 2, t.len] {
                let sub = (1..=o).fold((0, 0), |(a, b), x| match t.slot(x) {
                    Some(Slot::NotTheta) => (a, b + 1),
                    Some(_) => (a + 1, b),
                    None => (a, b),
                });
                assert_eq!(t.counts_upto(o), sub);
            }
        }
    }
}

#[test]
fn w0_short_form() {
    // n_0 <= m*_0: only the last two digits are fixed
    let p = params(exps(1.0, 1.0, 0.25, 0.25), DigitStream::seeded(2, 3).unwrap(), 10, 2);
    assert_eq!(p.r_w0, 0);
    assert_eq!(p.template(0).counts(), (2, 0));
    assert_eq!(p.slot_at(9), Some(Slot::Zero));
    assert_eq!(p.slot_at(10), Some(Slot::One));
    assert_eq!(p.slot_at(8), None);
}

/// Longest stretch of positions in the block that some instantiation can fill with zeros.
fn structural_max_zero_run(p: &CantorParams, j: usize, theta: &[u8]) -> u128 {
    let t = p.template(j);
    let (mut best, mut cur) = (0, 0);
    for o in 1..=t.len {
        let pos = (t.start + o) as usize;
        let can_be_zero = match t.slot(o) {
            None | Some(Slot::Zero) => true,
            Some(Slot::One) => false,
            Some(Slot::ThetaCopy) => theta[pos - 1] == 0,
            Some(Slot::NotTheta) => theta[pos - 1] != 0,
        };
        cur = if can_be_zero { cur + 1 } else { 0 };
        if o > p.levels[j - 1].lead() {
            best = best.max(cur);
        }
    }
    best
}

#[test]
fn zero_runs_after_the_lead_stay_near_spacing() {
    // exhaustive over free digits on a small schedule
    let e = Exponents::parse("1.25", "1.25", "1", "1").unwrap();
    for seed in 0..4 {
        let theta = DigitStream::seeded(2, seed).unwrap();
        let p = params(e.clone(), theta.clone(), 12, 1);
        let th = theta.prefix(p.last_n() as usize + 1);
        let t = p.template(1);
        let free: Vec<u128> = (1..=t.len).filter(|&o| t.slot(o).is_none()).collect();
        assert!(free.len() <= 16, "{}", free.len());
        let base_pt: Vec<u8> = sample_cantor_point(&p, 0, ForbiddenChoice::Random)
            .unwrap()
            .prefix(p.last_n() as usize);
        let mut seen_max = 0;
        for mask in 0u32..(1 << free.len()) {
            let mut x = base_pt.clone();
            for (i, &o) in free.iter().enumerate() {
                x[(t.start + o) as usize - 1] = ((mask >> i) & 1) as u8;
            }
            let lead = p.levels[0].m as usize;
            let mut cur = 0;
            for pos in (t.start as usize + lead + 1)..=p.last_n() as usize {
                cur = if x[pos - 1] == 0 { cur + 1 } else { 0 };
                seen_max = seen_max.max(cur);
            }
        }
        let s = structural_max_zero_run(&p, 1, &th);
        assert_eq!(seen_max as u128, s);
        assert!(s <= p.levels[0].spacing + 4);
    }
}

#[test]
fn prop3_positions() {
    let y = build_y_prop3(2.0, 4, 2).unwrap();
    let d = y.prefix(70);
    let ones: Vec<usize> = (1..=70).filter(|&i| d[i - 1] == 1).collect();
    assert_eq!(ones, vec![8, 16, 32, 64]);
    assert_eq!(prop3_ones(2.0, 4, 70), vec![8, 16, 32, 64]);
    assert_eq!(minimal_l1(2.0).unwrap(), 2);
    assert_eq!(minimal_l1(1.5).unwrap(), 4);
    assert_eq!(minimal_l1(3.0).unwrap(), 1);
    let err = build_y_prop3(1.5, 3, 2).unwrap_err().to_string();
    assert!(err.contains("minimal admissible l1 is 4"), "{err}");
    assert!(build_y_prop3(1.0, 10, 2).is_err());
    // the recurrence holds exactly, including non-integer eta
    let ones = prop3_ones(1.7, 5, 1 << 30);
    let mut l = 5u64;
    for &o in &ones {
        l = (l as f64 * 1.7).floor() as u64;
        assert_eq!(o, l);
    }
    assert_eq!(run_length(&y, 8, 100).length, RunLength::Exact(7));
}

#[test]
fn prop1_schedule_stops_before_overflow() {
    for (eta, l1) in [(170.0, 2), (81.0, 8), (1e18, 3)] {
        let s = default_prop1_schedule(eta, &[l1]).unwrap();
        assert!(s.windows(2).all(|w| w[1] > w[0]) && *s.last().unwrap() < 1 << 62);
        let y = build_y_prop1(eta, &[l1], 2).unwrap();
        assert_eq!(y.prefix(64).len(), 64);
    }
}

#[test]
fn prop1_blocks() {
    let sched = default_prop1_schedule(2.0, &[8]).unwrap();
    assert_eq!(&sched[..4], &[8, 24, 96, 480]);
    let y = build_y_prop1(2.0, &[8], 2).unwrap();
    let d = y.prefix(480);
    assert_eq!(&d[..8], &[1, 0, 1, 0, 1, 0, 1, 0]);
    for w in sched[..3].windows(2) {
        let (l, next) = (w[0], w[1]);
        let z = 2 * l - l;
        assert_eq!(run_length(&y, l, 1000).length, RunLength::Exact(z));
        let filler = &d[(2 * l + 1) as usize..next as usize];
        assert!(!filler.windows(2).any(|p| p == [0, 0]), "l={l}");
        assert_eq!(d[next as usize - 1], 1);
    }
    // odd remainder: eta = 1.5 from l = 8 gives a block of 12 - 8 zeros, a one, and 11 more digits
    let y = build_y_prop1(1.5, &[8, 24], 2).unwrap();
    let d = y.prefix(24);
    assert_eq!(&d[8..], &[0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 1]);
    assert!(build_y_prop1(2.0, &[8, 12], 2).is_err());
    assert!(build_y_prop1(2.0, &[8, 16], 2).is_err());
}

#[test]
fn samples_verify() {
    for (e, theta) in [
        (exps(2.0, 3.0, 1.0, 1.5), build_y_prop1(2.0, &[8], 2).unwrap()),
        (exps(2.0, 2.0, 1.5, 1.5), DigitStream::seeded(2, 99).unwrap()),
        (exps(1.0, 1.0, 0.5, 0.5), DigitStream::seeded(3, 5).unwrap()),
    ] {
        let p = params(e, theta, 32, 3);
        for seed in 0..3 {
            let x = sample_cantor_point(&p, seed, ForbiddenChoice::Random).unwrap();
            let rep = verify_membership(&x, &p, 3).unwrap();
            assert!(rep.pass, "{rep:#?}");
        }
        let x = sample_cantor_point(&p, 0, ForbiddenChoice::Successor).unwrap();
        assert!(verify_membership(&x, &p, 3).unwrap().pass);
    }
}

#[test]
fn seeds_differ_only_on_unfixed_positions() {
    let p = params(exps(2.0, 3.0, 1.0, 1.5), DigitStream::seeded(3, 1).unwrap(), 32, 2);
    let n = p.last_n() as usize;
    let a = sample_cantor_point(&p, 1, ForbiddenChoice::Random).unwrap().prefix(n);
    let b = sample_cantor_point(&p, 2, ForbiddenChoice::Random).unwrap().prefix(n);
    let th = p.theta.prefix(n);
    for pos in 1..=n {
        match p.slot_at(pos as u128) {
            Some(Slot::NotTheta) => {
                assert_ne!(a[pos - 1], th[pos - 1]);
                assert_ne!(b[pos - 1], th[pos - 1]);
            }
            Some(_) => assert_eq!(a[pos - 1], b[pos - 1]),
            None => {}
        }
    }
    assert_ne!(a, b);
}

#[test]
fn tampered_points_fail() {
    let p = params(exps(2.0, 2.0, 1.5, 1.5), DigitStream::seeded(2, 7).unwrap(), 32, 3);
    let x = sample_cantor_point(&p, 4, ForbiddenChoice::Random).unwrap();
    let mut d = x.prefix(p.last_n() as usize + 1000);
    let k = 1;
    let mid = ((p.ns[k] + p.ns[k + 1]) / 2) as usize;
    let len = p.levels[k].m as usize + 5;
    for v in &mut d[mid..mid + len] {
        *v = 0;
    }
    let bad = DigitStream::explicit(2, d, vec![]).unwrap();
    let rep = verify_membership(&bad, &p, 3).unwrap();
    assert!(!rep.pass);
    let v = rep.interior[k].first_violation.unwrap();
    assert!(v.0 <= mid as u64 && v.2 > p.levels[k].m as u64);
    let rep = verify_membership(&p.theta, &p, 3).unwrap();
    assert!(!rep.pass);
    assert!(!rep.checkpoints[1].pass);
}

#[test]
fn conditions_on_prop1_checkpoints() {
    let y = build_y_prop1(2.0, &[8], 2).unwrap();
    let e = exps(1.0, 1.0, 0.8, 0.7);
    let sched = default_prop1_schedule(2.0, &[8]).unwrap();
    for &l in &sched[2..6] {
        let n = 2 * l;
        for which in [Which::I, Which::Ii] {
            let r = check_conditions(&y, &e, n, which, 1 << 22).unwrap();
            assert!(r.holds, "n={n} {which:?} {r:?}");
        }
    }
}

#[test]
fn conditions_fail_below_the_parabola() {
    let y = build_y_prop3(2.0, 32, 2).unwrap();
    let e = exps(1.0, 1.0, 0.8, 0.5);
    let depth = 100_000u64;
    let t = y.prefix(depth as usize);
    let mut held = 0;
    let mut seen = 0;
    condition_scan(&t, &e, Which::Ii, 300, |s| {
        seen += 1;
        if s.witness.is_none() {
            held += 1;
        }
    });
    assert!(seen > 1000);
    assert_eq!(held, 0);
    let r = check_conditions(&y, &e, 1000, Which::Ii, depth).unwrap();
    let w = r.witness.unwrap();
    assert!(w.run > w.bound);
}

#[test]
fn conditions_hold_for_random_theta() {
    let y = DigitStream::seeded(2, 42).unwrap();
    let e = exps(1.0, 1.0, 0.6, 0.5);
    for n in [500u64, 2000, 10_000, 30_000] {
        for which in [Which::I, Which::Ii] {
            assert!(check_conditions(&y, &e, n, which, 200_000).unwrap().holds);
        }
    }
}

#[test]
fn scan_matches_pointwise_check() {
    for (seed, e) in [(1, exps(1.0, 1.0, 0.8, 0.7)), (2, exps(1.0, 2.0, 0.9, 0.6))] {
        let mut t = DigitStream::seeded(2, seed).unwrap().prefix(6000);
        // plant a few long zero blocks
        for start in [700usize, 2100, 4000] {
            for v in &mut t[start..start + start / 3] {
                *v = 0;
            }
        }
        let y = DigitStream::explicit(2, t.clone(), vec![1]).unwrap();
        for which in [Which::I, Which::Ii] {
            condition_scan(&t, &e, which, 50, |s| {
                let r = check_conditions(&y, &e, s.n, which, 6000).unwrap();
                assert_eq!(r.holds, s.witness.is_none(), "n={} {which:?}", s.n);
                assert_eq!(r.window_end, s.window_end);
            });
        }
    }
}

#[test]
fn region_violation_is_reported() {
    // off the diagonal and outside the rectangle for a terminating y
    let e = exps(1.0, 1.0, 0.9, 0.6);
    let p = params(e, expand_rational(1, 4, 2).unwrap(), 32, 2);
    let err = sample_cantor_point(&p, 0, ForbiddenChoice::Random).unwrap_err();
    assert!(matches!(err, Error::Domain(_)), "{err:?}");
}

#[test]
fn tail_gap_stays_within_spacing() {
    for (a, h) in [("2", "1.5"), ("1", "0.5"), ("1", "0.8"), ("3", "1")] {
        let e = Exponents::parse(a, a, h, h).unwrap();
        let p = params(e, DigitStream::seeded(2, 3).unwrap(), 32, 4);
        for lv in &p.levels {
            let len = p.ns[lv.k + 1] - lv.n;
            let rho = (len - lv.lead() - lv.margin()) % lv.spacing;
            if lv.spacing >= 5 {
                assert!(rho + 5 <= lv.spacing, "k={} rho={rho} s={}", lv.k, lv.spacing);
            }
        }
        // on the diagonal m = m*, so the in-block bound is the spacing itself
        for seed in 0..8 {
            let x = sample_cantor_point(&p, seed, ForbiddenChoice::Random).unwrap();
            let rep = verify_membership(&x, &p, 3).unwrap();
            assert!(rep.pass, "{a} {h} seed {seed}: {:?}", rep.interior.iter().find(|r| !r.pass));
        }
    }
}
