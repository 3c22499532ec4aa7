use mtv_core::numerics::{
    eval, eval_direct, eval_reg, eval_sum, eval_truncated, eval_truncated_sum, eval_with_terms,
    log2, pi, t_to_zeta, BigComplex, PrecisionContext,
};
use mtv_core::regularization::stuffle_reg;
use mtv_core::words::{frac, int, stuffle_words, Kind, Letter, LinComb, Phase, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

fn diff(a: &BigComplex, b: &BigComplex) -> f64 {
    (a - b).abs_f64()
}

fn pi_pow(ctx: &PrecisionContext, e: u32) -> BigComplex {
    BigComplex::from_real(Float::with_val(ctx.prec(), pi(ctx).pow(e)))
}

#[test]
fn classical_values() {
    let ctx = PrecisionContext::new(30);
    let z2 = eval(&Word::from_weights(&[2]), Kind::Zeta, &ctx).unwrap();
    assert!(diff(&z2.value, &pi_pow(&ctx, 2).div_u(6)) < 1e-30);
    assert!(z2.error < 1e-30);
    let t2 = eval(&Word::from_weights(&[2]), Kind::T, &ctx).unwrap();
    assert!(diff(&t2.value, &pi_pow(&ctx, 2).div_u(8)) < 1e-30);
    let z12 = eval(&Word::from_weights(&[1, 2]), Kind::Zeta, &ctx).unwrap();
    let z3 = eval(&Word::from_weights(&[3]), Kind::Zeta, &ctx).unwrap();
    assert!(diff(&z12.value, &z3.value) < 1e-30);
    // t(1bar) = -beta(1) = -pi/4
    let t1bar = eval(&Word::new(vec![Letter::alternating(1)]), Kind::T, &ctx).unwrap();
    assert!(
        diff(
            &t1bar.value,
            &pi_pow(&ctx, 1).div_u(4).scale_rational(&int(-1))
        ) < 1e-30
    );
}

#[test]
fn even_zeta_strings() {
    let ctx = PrecisionContext::new(30);
    let mut fact = Float::with_val(ctx.prec(), 1);
    for n in 1..=5u32 {
        fact *= (2 * n) * (2 * n + 1);
        let w = Word::from_weights(&vec![2; n as usize]);
        let v = eval(&w, Kind::Zeta, &ctx).unwrap();
        let expected =
            BigComplex::from_real(Float::with_val(ctx.prec(), pi(&ctx).pow(2 * n) / &fact));
        assert!(diff(&v.value, &expected) < 1e-29, "n = {}", n);
    }
}

#[test]
fn depth_one_t_at_third_matches_closed_form() {
    // sum_k e(k/3)/(2k-1) = e(1/6) artanh(e(1/6)) with artanh z = log((1+z)/(1-z))/2
    let ctx = PrecisionContext::new(30);
    let p = ctx.prec();
    let w = Word::new(vec![Letter::new(1, Phase::new(1, 3)).unwrap()]);
    let v = eval(&w, Kind::T, &ctx).unwrap();
    let z = BigComplex::root_of_unity(p, Phase::new(1, 6));
    let one = BigComplex::one(p);
    let artanh = (&(&one + &z) / &(&one - &z)).ln().div_u(2);
    assert!(diff(&v.value, &(&z * &artanh)) < 1e-29);
    let truncated = eval_truncated(&w, Kind::T, 20000, &ctx).unwrap();
    assert!(diff(&truncated, &v.value) < 1e-4);
}

fn random_word(rng: &mut ChaCha8Rng) -> Word {
    loop {
        let depth = rng.gen_range(1..=3);
        let letters: Vec<Letter> = (0..depth)
            .map(|_| {
                let phase = if rng.gen_bool(0.5) {
                    Phase::new(1, 2)
                } else {
                    Phase::new(0, 1)
                };
                Letter::new(rng.gen_range(1..=3), phase).unwrap()
            })
            .collect();
        let w = Word::new(letters);
        if w.is_admissible() && w.weight() <= 6 {
            return w;
        }
    }
}

#[test]
fn t_values_against_direct_sums_and_zeta_expansion() {
    let ctx = PrecisionContext::new(30);
    let low = PrecisionContext::new(20);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let w = random_word(&mut rng);
        let v = eval(&w, Kind::T, &ctx).unwrap();
        let d = eval_direct(&w, Kind::T, 4096, &low).unwrap();
        let gap = diff(&v.value, &d.value);
        assert!(
            gap <= v.error + d.error,
            "{}: gap {} bounds {} {}",
            w.display_with(Kind::T),
            gap,
            v.error,
            d.error
        );

        // finite identity: t_M equals the zeta_{2M} combination exactly
        let m = 50;
        let e = t_to_zeta(&w);
        let combo = eval_truncated_sum(
            &LinComb::from_terms(e.terms.iter().map(|(c, zw)| (zw.clone(), c.clone()))),
            Kind::Zeta,
            2 * m,
            &ctx,
        )
        .unwrap();
        let rhs = &BigComplex::root_of_unity(ctx.prec(), e.prefactor) * &combo;
        let lhs = eval_truncated(&w, Kind::T, m, &ctx).unwrap();
        assert!(diff(&lhs, &rhs) < 1e-35, "{}", w.display_with(Kind::T));
    }
}

#[test]
fn refinement_is_monotone() {
    let ctx = PrecisionContext::new(30);
    let words = [
        Word::from_weights(&[1, 2]),
        Word::from_weights(&[2, 1, 3]),
        Word::new(vec![Letter::plain(1), Letter::alternating(1)]),
    ];
    for w in &words {
        for kind in [Kind::Zeta, Kind::T] {
            let mut prev = eval_with_terms(w, kind, 8, &ctx).unwrap();
            for n in [16usize, 32, 64, 128] {
                let next = eval_with_terms(w, kind, n, &ctx).unwrap();
                assert!(next.error <= prev.error);
                assert!(diff(&next.value, &prev.value) <= prev.error);
                prev = next;
            }
        }
    }
}

#[test]
fn stuffle_products_hold_numerically() {
    let ctx = PrecisionContext::new(30);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pairs = vec![(Word::from_weights(&[2]), Word::from_weights(&[3, 2]))];
    for _ in 0..6 {
        pairs.push((random_word(&mut rng), random_word(&mut rng)));
    }
    for (u, v) in pairs.iter().filter(|(u, v)| u.weight() + v.weight() <= 8) {
        for kind in [Kind::Zeta, Kind::T] {
            let a = eval(u, kind, &ctx).unwrap();
            let b = eval(v, kind, &ctx).unwrap();
            let s = eval_sum(&stuffle_words(u, v), kind, &ctx).unwrap();
            assert!(diff(&(&a.value * &b.value), &s.value) < 1e-25);
        }
    }
}

#[test]
fn regularized_distribution_relation() {
    let ctx = PrecisionContext::new(25);
    let half = Phase::new(1, 2);
    let zero = Phase::new(0, 1);
    let t0 = BigComplex::zero(ctx.prec());
    let minus_log2 = BigComplex::from_real(-log2(&ctx));
    for n in [2u32, 3] {
        let mut lhs = BigComplex::zero(ctx.prec());
        for mask in 0..8u32 {
            let ph = |i: u32| if mask >> i & 1 == 1 { half } else { zero };
            let w = Word::from_pairs(&[(n, ph(0)), (1, ph(1)), (1, ph(2))]);
            lhs = &lhs
                + &eval_reg(&stuffle_reg(&w), Kind::Zeta, &t0, &ctx)
                    .unwrap()
                    .value;
        }
        let plain = stuffle_reg(&Word::from_weights(&[n, 1, 1]));
        let rhs = eval_reg(&plain, Kind::Zeta, &minus_log2, &ctx)
            .unwrap()
            .value
            .scale_rational(&frac(1, 1 << (n - 1)));
        assert!(diff(&lhs, &rhs) < 1e-20, "n = {}", n);

        // shifting the parameter symbolically agrees with substituting it
        let shifted = plain.change_parameter(&frac(-1, 3));
        let third = BigComplex::from_rational(ctx.prec(), &frac(-1, 3));
        let a = eval_reg(&shifted, Kind::Zeta, &t0, &ctx).unwrap().value;
        let b = eval_reg(&plain, Kind::Zeta, &third, &ctx).unwrap().value;
        assert!(diff(&a, &b) < 1e-22);
    }
}

#[test]
fn regularized_examples() {
    let ctx = PrecisionContext::new(30);
    let l2 = BigComplex::from_real(log2(&ctx));
    let r = eval_reg(&stuffle_reg(&Word::from_weights(&[1])), Kind::T, &l2, &ctx).unwrap();
    assert!(diff(&r.value, &l2) < 1e-30);
    let r = eval_reg(
        &stuffle_reg(&Word::from_weights(&[1, 1])),
        Kind::Zeta,
        &BigComplex::zero(ctx.prec()),
        &ctx,
    )
    .unwrap();
    assert!(
        diff(
            &r.value,
            &pi_pow(&ctx, 2).div_u(12).scale_rational(&int(-1))
        ) < 1e-30
    );
}
