use super::*;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn long_division(p: u64, qd: u64, b: u64, n: usize) -> Vec<u8> {
    let mut r = p;
    (0..n)
        .map(|_| {
            r *= b;
            let d = r / qd;
            r %= qd;
            d as u8
        })
        .collect()
}

#[test]
fn expand_examples() {
    let s = expand_rational(3, 8, 2).unwrap();
    assert_eq!(s.prefix(6), vec![0, 1, 1, 0, 0, 0]);
    assert!(s.is_badic_rational());
    let s = expand_rational(1, 3, 2).unwrap();
    assert_eq!(s.prefix(60), long_division(1, 3, 2, 60));
    assert!(!s.is_badic_rational());
    assert!(expand_rational(0, 1, 2).unwrap().prefix(20).iter().all(|&d| d == 0));
    assert!(matches!(expand_rational(1, 0, 2), Err(Error::Domain(_))));
    assert!(matches!(expand_rational(1, 3, 1), Err(Error::Domain(_))));
    // reduction mod 1 and sign normalisation
    assert_eq!(expand_rational(7, 3, 2).unwrap().prefix(10), long_division(1, 3, 2, 10));
    assert_eq!(expand_rational(1, -3, 2).unwrap().prefix(10), long_division(2, 3, 2, 10));
}

#[test]
fn random_access_agrees_with_sequential() {
    let s = expand_rational(5, 7 * 9 * 11, 10).unwrap();
    let seq = long_division(5, 693, 10, 300);
    for i in [1u64, 2, 17, 150, 300] {
        let fresh = expand_rational(5, 693, 10).unwrap();
        assert_eq!(fresh.digit(i), seq[i as usize - 1]);
    }
    assert_eq!(s.prefix(300), seq);
}

#[test]
fn project_examples() {
    let one = DigitStream::explicit(2, vec![1], vec![]).unwrap();
    assert_eq!(project(&one, 10), q(1, 2));
    let alt = DigitStream::explicit(2, vec![], vec![0, 1]).unwrap();
    let err = project(&alt, 40) - q(1, 3);
    assert!(err.abs() < crate::exact::pow_i(2, -40));
    assert!(project(&expand_rational(0, 1, 2).unwrap(), 5).is_zero());
}

#[test]
fn cylinders() {
    let c = cylinder_interval(&Word::parse(2, "1").unwrap());
    assert_eq!(c, (q(1, 2), q(1, 2)));
    let c = cylinder_interval(&Word::parse(2, "01").unwrap());
    assert_eq!(c, (q(1, 4), q(1, 4)));
    let c = cylinder_interval(&Word::parse(3, "21").unwrap());
    assert_eq!(c, (q(7, 9), q(1, 9)));
    assert!(Word::parse(2, "012").is_err());
}

#[test]
fn run_examples() {
    let s = DigitStream::explicit(2, vec![1, 0, 1], vec![]).unwrap();
    let r = run_length(&s, 3, 100);
    assert_eq!(r.kind, RunKind::Zeros);
    assert_eq!(r.length, RunLength::ExceedsDepth(97));
    let alt = DigitStream::explicit(2, vec![], vec![0, 1]).unwrap();
    let r = run_length(&alt, 1, 100);
    assert_eq!((r.kind, r.length), (RunKind::TopDigits, RunLength::Exact(1)));
    let s = expand_rational(1, 7, 10).unwrap(); // 142857...
    assert_eq!(run_length(&s, 0, 50).length, RunLength::Exact(0));
    assert_eq!(run_length(&s, 2, 50).length, RunLength::Exact(0));
}

#[test]
fn match_examples() {
    let s = DigitStream::seeded(3, 9).unwrap();
    let r = match_length(&s, &s, 0, 50).unwrap();
    assert_eq!(r.length, RunLength::ExceedsDepth(50));
    let e = DigitStream::explicit(2, vec![1, 0, 1], vec![]).unwrap();
    let t = DigitStream::explicit(2, vec![1, 0, 0], vec![]).unwrap();
    assert_eq!(match_length(&e, &t, 1, 40).unwrap().length, RunLength::Exact(1));
    let other = DigitStream::seeded(2, 9).unwrap();
    assert!(match_length(&s, &other, 0, 10).is_err());
}

#[test]
fn shifts() {
    let s = DigitStream::explicit(2, vec![1, 0, 1], vec![]).unwrap();
    assert_eq!(shift(&s, 1).prefix(5), vec![0, 1, 0, 0, 0]);
    assert_eq!(shift(&s, 0).prefix(5), s.prefix(5));
    let alt = DigitStream::explicit(2, vec![], vec![0, 1]).unwrap();
    assert_eq!(shift(&alt, 2).prefix(30), alt.prefix(30));
    assert_eq!(shift(&shift(&alt, 3), 4).prefix(20), shift(&alt, 7).prefix(20));
}

#[test]
fn bulk_scans_match_pointwise() {
    let s = DigitStream::seeded(2, 4).unwrap();
    let t = DigitStream::seeded(2, 5).unwrap();
    let n = 400;
    let (a, b) = (s.prefix(n), t.prefix(n));
    let mut seen = 0;
    for_each_run(&a, 2, |p, m, tr| {
        let r = run_length(&s, p, n as u64);
        assert_eq!(r.length.observed(), m);
        assert_eq!(matches!(r.length, RunLength::ExceedsDepth(_)), tr);
        seen += 1;
    });
    assert_eq!(seen, n);
    for_each_match(&a, &b, |p, m, tr| {
        let r = match_length(&s, &t, p, n as u64).unwrap();
        assert_eq!(r.length.observed(), m);
        assert_eq!(matches!(r.length, RunLength::ExceedsDepth(_)), tr);
    });
    let s3 = DigitStream::seeded(3, 1).unwrap();
    let a3 = s3.prefix(300);
    for_each_run(&a3, 3, |p, m, _| {
        assert_eq!(run_length(&s3, p, 300).length.observed(), m);
    });
}

#[test]
fn json_round_trip() {
    for s in [
        expand_rational(2, 7, 3).unwrap(),
        DigitStream::seeded(20, 77).unwrap(),
        DigitStream::explicit(5, vec![4, 3], vec![1, 2]).unwrap(),
    ] {
        let j = StreamJson::from_stream(&s, 40);
        let back = StreamJson::from_json_str(&j.to_json_string()).unwrap().to_stream().unwrap();
        assert_eq!(back.prefix(100), s.prefix(100));
    }
    let mut j = StreamJson::from_stream(&DigitStream::seeded(2, 1).unwrap(), 16);
    let flipped = if j.prefix_hex.starts_with('0') { "1" } else { "0" };
    j.prefix_hex.replace_range(0..1, flipped);
    assert!(matches!(j.to_stream(), Err(Error::Parse(_))));
    assert_eq!(decode_hex(20, "0a13").unwrap(), vec![10, 19]);
    assert!(decode_hex(20, "0a14").is_err());
    assert!(decode_hex(2, "2").is_err());
}

#[test]
fn concurrent_readers_agree() {
    let s = DigitStream::seeded(7, 3).unwrap();
    let want = DigitStream::seeded(7, 3).unwrap().prefix(50_000);
    std::thread::scope(|sc| {
        for k in 0..4 {
            let s = s.clone();
            let want = &want;
            sc.spawn(move || {
                let n = 10_000 * (k + 2);
                assert_eq!(s.prefix(n), want[..n]);
            });
        }
    });
}

/// Exact check of `b^{-(m+1)} <= ‖bⁿx‖ <= b^{-m}` using a long finite truncation.
fn sandwich(base: u32, digits: &[u8], n: usize, m: u64) {
    let x = digits_value(base, digits);
    let v = dist_to_int(&(x * crate::exact::pow_i(base, n as i64)));
    let tail = crate::exact::pow_i(base, n as i64 - digits.len() as i64);
    let lo = crate::exact::pow_i(base, -(m as i64 + 1));
    let hi = crate::exact::pow_i(base, -(m as i64));
    assert!(v.clone() + &tail >= lo && v.clone() - &tail <= hi, "n={n} m={m}");
}

proptest! {
    #[test]
    fn prefix_is_deterministic(seed in any::<u64>(), b in 2u32..40, n in 1usize..500) {
        let s = DigitStream::seeded(b, seed).unwrap();
        let a = s.prefix(n);
        prop_assert_eq!(a.len(), n);
        prop_assert_eq!(&s.prefix(n + 3)[..n], &a[..]);
        let fresh = DigitStream::seeded(b, seed).unwrap();
        prop_assert_eq!(fresh.digit(n as u64), a[n - 1]);
    }

    #[test]
    fn no_top_tail(p in 0i64..10_000, qd in 1i64..10_000, b in 2u32..17) {
        let s = expand_rational(p, qd, b).unwrap();
        let d = s.prefix(200);
        prop_assert!(d[150..].iter().any(|&x| x != (b - 1) as u8));
        let err = digits_value(b, &d) - q(p.rem_euclid(qd), qd);
        prop_assert!(err <= BigRational::zero());
        prop_assert!(-err < crate::exact::pow_i(b, -200));
    }

    #[test]
    fn run_sandwich(seed in any::<u64>(), b in 2u32..6, n in 0usize..40, bias in 0u8..3) {
        // bias the stream towards long runs
        let s = DigitStream::seeded(b, seed).unwrap();
        let mut d = s.prefix(120);
        for x in d.iter_mut().skip(n).take(bias as usize * 7) { *x = 0; }
        let st = DigitStream::explicit(b, d.clone(), vec![1]).unwrap();
        let r = run_length(&st, n as u64, 120);
        if let RunLength::Exact(m) = r.length {
            if m < 60 { sandwich(b, &d, n, m); }
        }
    }

    #[test]
    fn match_lower_bound(seed in any::<u64>(), b in 2u32..6, n in 0usize..40, shared in 0usize..30) {
        let e = DigitStream::seeded(b, seed).unwrap().prefix(120);
        let mut t = DigitStream::seeded(b, seed ^ 1).unwrap().prefix(120);
        t[n..n + shared].copy_from_slice(&e[n..n + shared]);
        let es = DigitStream::explicit(b, e.clone(), vec![]).unwrap();
        let ts = DigitStream::explicit(b, t.clone(), vec![]).unwrap();
        let m = match_length(&es, &ts, n as u64, 120).unwrap().length.observed();
        let diff = digits_value(b, &e) - digits_value(b, &t);
        let v = dist_to_int(&(diff * crate::exact::pow_i(b, n as i64)));
        // upper half of the sandwich holds without carry caveats
        prop_assert!(v <= crate::exact::pow_i(b, -(m as i64)));
        prop_assert!(v <= BigRational::one());
    }
}
