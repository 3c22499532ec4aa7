use std::time::Instant;

use mtv_core::numerics::{euler_gamma, log2, pi, polygamma, BigComplex, PrecisionContext};
use mtv_core::regularization::{Factor, Relation};
use mtv_core::symmetry::*;
use mtv_core::words::{compositions, frac, Kind, Phase, Word, WordSum};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

fn ph(s: &str) -> PhaseVector {
    PhaseVector::parse(s).unwrap()
}

fn pt(ctx: &PrecisionContext, ys: &[(f64, f64)]) -> EvalPoint {
    EvalPoint::from_f64(ctx.prec(), ys)
}

#[test]
fn depth_one_bernoulli_splits_into_two_series() {
    let ctx = PrecisionContext::new(30);
    for (q, y, m) in [
        ("1/3", (0.1, 0.05), 7u64),
        ("0", (-0.2, 0.0), 12),
        ("1/2", (0.0, 0.25), 5),
    ] {
        let phi = ph(q);
        let y = pt(&ctx, &[y]);
        let b = bt_truncated(&phi, &y, m, &ctx).unwrap();
        let p = phi.phases()[0];
        let a = li_series_truncated(Kind::T, &[p], y.values(), m, &ctx).unwrap();
        let c =
            li_series_truncated(Kind::T, &[-p], &[-y.values()[0].clone()], m + 1, &ctx).unwrap();
        let rhs = &a - &(&BigComplex::root_of_unity(ctx.prec(), p) * &c);
        assert!((&b - &rhs).abs_f64() < 1e-35);
    }
}

#[test]
fn truncated_series_small_cases() {
    let ctx = PrecisionContext::new(30);
    let h = li_series_truncated(
        Kind::Zeta,
        &[Phase::from_integer(0)],
        &[BigComplex::zero(ctx.prec())],
        3,
        &ctx,
    )
    .unwrap();
    assert!((h.to_f64().0 - 11.0 / 6.0).abs() < 1e-15);
    // coefficient of y_1 y_2^0 by a symmetric difference: zeta_M(2, 1)
    let m = 10;
    let d = 1e-6;
    let zero = [Phase::from_integer(0); 2];
    let f = |a: f64| {
        li_series_truncated(
            Kind::Zeta,
            &zero,
            &[
                BigComplex::from_f64(ctx.prec(), a, 0.0),
                BigComplex::zero(ctx.prec()),
            ],
            m,
            &ctx,
        )
        .unwrap()
    };
    let diff = (f(d).to_f64().0 - f(-d).to_f64().0) / (2.0 * d);
    let direct =
        mtv_core::numerics::eval_truncated(&Word::from_weights(&[2, 1]), Kind::Zeta, m, &ctx)
            .unwrap();
    assert!((diff - direct.to_f64().0).abs() < 1e-8);
    // half the harmonic growth for the odd-denominator series
    let z = [BigComplex::zero(ctx.prec())];
    let p0 = [Phase::from_integer(0)];
    let a = li_series_truncated(Kind::T, &p0, &z, 1000, &ctx)
        .unwrap()
        .to_f64()
        .0;
    let b = li_series_truncated(Kind::T, &p0, &z, 4000, &ctx)
        .unwrap()
        .to_f64()
        .0;
    assert!((b - a - 0.5 * 4f64.ln()).abs() < 1e-6);
}

#[test]
fn bernoulli_alternating_limit() {
    let ctx = PrecisionContext::new(30);
    let y = BigComplex::zero(ctx.prec());
    let v = bt_limit(Phase::new(1, 2), &y, &ctx).unwrap();
    let expected = -pi(&ctx).to_f64() / 2.0;
    assert!(
        (v.value.to_f64().0 - expected).abs() < 1e-20,
        "{:?}",
        v.value.to_f64()
    );
    // a finite order sits O(1/M) away
    let b = bt_truncated(&ph("1/2"), &pt(&ctx, &[(0.0, 0.0)]), 1000, &ctx).unwrap();
    assert!((b.to_f64().0 - expected).abs() < 1e-3);
}

#[test]
fn truncated_identity_examples() {
    let ctx = PrecisionContext::new(30);
    let tol = 1e-24;
    let r = truncated_identity_residual(&ph("1/5"), &pt(&ctx, &[(0.13, -0.07)]), 17, &ctx).unwrap();
    assert!(r.value.abs_f64() < tol);
    let r = truncated_identity_residual(
        &ph("1/3,1/5"),
        &pt(&ctx, &[(0.1, 0.2), (-0.15, 0.05)]),
        40,
        &ctx,
    )
    .unwrap();
    assert!(r.value.abs_f64() < tol, "{}", r.value.abs_f64());
    let r = truncated_identity_residual(
        &ph("0,0,0"),
        &pt(&ctx, &[(0.1, 0.0), (0.2, 0.1), (-0.1, 0.2)]),
        25,
        &ctx,
    )
    .unwrap();
    assert!(r.value.abs_f64() < tol, "{}", r.value.abs_f64());
    let (lhs, _) = truncated_identity_sides(
        &ph("0,0,0"),
        &pt(&ctx, &[(0.1, 0.0), (0.2, 0.1), (-0.1, 0.2)]),
        25,
        &ctx,
    )
    .unwrap();
    assert!(lhs.abs_f64() > 1e-3);
}

#[test]
fn truncated_identity_random_instances() {
    let ctx = PrecisionContext::new(30);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let start = Instant::now();
    for _ in 0..50 {
        let m = rng.gen_range(1..=3);
        let phases: Vec<Phase> = (0..m)
            .map(|_| {
                let d = rng.gen_range(1..=8);
                Phase::new(rng.gen_range(0..d), d)
            })
            .collect();
        let ys: Vec<(f64, f64)> = (0..m)
            .map(|_| {
                let r = rng.gen_range(0.0..0.3);
                let a = rng.gen_range(0.0..std::f64::consts::TAU);
                (r * a.cos(), r * a.sin())
            })
            .collect();
        let big_m = rng.gen_range(0..=50);
        let phi = PhaseVector::new(phases).unwrap();
        let r = truncated_identity_residual(&phi, &pt(&ctx, &ys), big_m, &ctx).unwrap();
        assert!(
            r.value.abs_f64() < 1e-24,
            "{} {:?} M={}: {}",
            phi,
            ys,
            big_m,
            r.value.abs_f64()
        );
        assert!(r.value.abs_f64() <= r.error);
    }
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn truncated_identity_pole_is_reported() {
    let ctx = PrecisionContext::new(20);
    let e = truncated_identity_residual(&ph("1/3"), &pt(&ctx, &[(1.0, 0.0)]), 5, &ctx);
    assert!(matches!(e, Err(SymmetryError::Pole(_))));
}

#[test]
fn limit_identity_examples() {
    let ctx = PrecisionContext::new(30);
    // depth one: Li^t(phi|y) - e(phi) Li^t(-phi|-y) = B^t(phi|y)
    let y = BigComplex::from_f64(ctx.prec(), 0.1, 0.1);
    let half = Phase::new(1, 2);
    let a = li_series_limit(Kind::T, &[half], &[y.clone()], &ctx).unwrap();
    let b = li_series_limit(Kind::T, &[half], &[-y.clone()], &ctx).unwrap();
    let bt = bt_limit(half, &y, &ctx).unwrap();
    assert!((&(&a.value + &b.value) - &bt.value).abs_f64() < 1e-15);
    for (phi, ys) in [
        ("1/3,1/3", [(0.1, 0.0), (0.0, 0.2)]),
        ("1/2,1/4", [(0.05, 0.1), (-0.1, 0.0)]),
    ] {
        let r = limit_identity_residual(&ph(phi), &pt(&ctx, &ys), &ctx).unwrap();
        assert!(
            r.value.abs_f64() < 1e-8,
            "{}: {} ({})",
            phi,
            r.value.abs_f64(),
            r.error
        );
        assert!(r.error < 1e-8);
    }
    assert!(matches!(
        limit_identity_residual(&ph("0,1/3"), &pt(&ctx, &[(0.1, 0.0), (0.2, 0.0)]), &ctx),
        Err(SymmetryError::Precondition(_))
    ));
    assert!(matches!(
        limit_identity_residual(&ph("1/3,2/3"), &pt(&ctx, &[(0.1, 0.0), (0.2, 0.0)]), &ctx),
        Err(SymmetryError::Precondition(_))
    ));
}

fn log_two(ctx: &PrecisionContext) -> BigComplex {
    BigComplex::from_real(log2(ctx))
}

#[test]
fn regularized_depth_one_series() {
    let ctx = PrecisionContext::new(30);
    let p = ctx.prec();
    let zero = [Phase::from_integer(0)];
    let y = BigComplex::from_f64(p, 0.2, 0.0);
    // difference of the two t-series is (pi/2) tan(pi y/2)
    let a = reg_li_series(Kind::T, &zero, &[y.clone()], &log_two(&ctx), 40, &ctx).unwrap();
    let b = reg_li_series(Kind::T, &zero, &[-y.clone()], &log_two(&ctx), 40, &ctx).unwrap();
    let x = Float::with_val(p, pi(&ctx) * 0.1f64);
    let expected = Float::with_val(p, pi(&ctx) / 2u32) * x.tan();
    assert!(((&a.value - &b.value).to_f64().0 - expected.to_f64()).abs() < 1e-20);
    // zeta side at T = 0: sum_{n>=2} zeta(n) y^(n-1) = -gamma - psi(1 - y)
    let z = reg_li_series(
        Kind::Zeta,
        &zero,
        &[y.clone()],
        &BigComplex::zero(p),
        40,
        &ctx,
    )
    .unwrap();
    let psi = polygamma(0, &Float::with_val(p, 1 - Float::with_val(p, 0.2f64)), &ctx).unwrap();
    let closed = -(euler_gamma(&ctx) + psi);
    assert!(
        (z.value.to_f64().0 - closed.to_f64()).abs() < 1e-20,
        "{:?} {} {}",
        z.value.to_f64(),
        closed.to_f64(),
        z.error
    );
    assert!(z.error < 1e-20);
    // the y^0 coefficient of the t-series is the parameter itself
    let c = reg_li_series(
        Kind::T,
        &zero,
        &[BigComplex::zero(p)],
        &log_two(&ctx),
        10,
        &ctx,
    )
    .unwrap();
    assert!((c.value.to_f64().0 - 2f64.ln()).abs() < 1e-15);
    assert!(reg_li_series(
        Kind::T,
        &zero,
        &[BigComplex::from_f64(p, 0.3, 0.0)],
        &log_two(&ctx),
        10,
        &ctx
    )
    .is_err());
}

#[test]
fn regularized_symmetry_theorem() {
    let ctx = PrecisionContext::new(20);
    let y = pt(&ctx, &[(0.1, 0.0), (0.2, 0.0)]);
    let r = full_symmetry_residual(&ph("0,0"), &y, 24, &ctx).unwrap();
    assert!(r.value.abs_f64() < 1e-8, "{}", r.value.abs_f64());
    // without the constant the residual is (1/2)(i pi/2)^2 = -pi^2/8
    let c = symmetry_constant(&ph("0,0"), &ctx);
    let expected = -pi(&ctx).to_f64().powi(2) / 8.0;
    assert!((c.to_f64().0 - expected).abs() < 1e-15);
    let r = full_symmetry_residual(&ph("0,1/2"), &y, 24, &ctx).unwrap();
    assert!(r.value.abs_f64() < 1e-8, "{}", r.value.abs_f64());
    let r = full_symmetry_residual(&ph("0"), &pt(&ctx, &[(0.15, 0.05)]), 30, &ctx).unwrap();
    assert!(r.value.abs_f64() < 1e-8, "{}", r.value.abs_f64());
}

#[test]
fn shuffle_form_of_symmetry() {
    let ctx = PrecisionContext::new(25);
    let r = shuffle_form_residual(
        &ph("1/3,2/3"),
        &pt(&ctx, &[(0.1, 0.0), (0.2, 0.0)]),
        30,
        &ctx,
    )
    .unwrap();
    assert!(r.value.abs_f64() < 1e-12);
    let r = shuffle_form_residual(
        &ph("1/4,1/4,1/2"),
        &pt(&ctx, &[(0.1, 0.0), (0.2, 0.05), (-0.1, 0.1)]),
        24,
        &ctx,
    )
    .unwrap();
    assert!(r.value.abs_f64() < 1e-10, "{}", r.value.abs_f64());
    assert!(
        shuffle_form_residual(&ph("0,0"), &pt(&ctx, &[(0.1, 0.0), (0.2, 0.0)]), 10, &ctx).is_err()
    );
}

fn z(ws: &[u32]) -> Word {
    Word::from_weights(ws)
}

fn relation_of(terms: &[(BigRational, Vec<Factor>)]) -> Relation {
    let mut rel = Relation::new();
    for (c, fs) in terms {
        rel.push(c.clone(), fs.clone());
    }
    rel
}

fn tf(ws: &[u32]) -> Factor {
    Factor::word(Kind::T, &z(ws))
}

fn zf(ws: &[u32]) -> Factor {
    Factor::word(Kind::Zeta, &z(ws))
}

#[test]
fn relation_one_one_two() {
    let ctx = PrecisionContext::new(30);
    let rel = extract_relation(&z(&[1, 1, 2])).unwrap();
    let lin = rel.linear_part();
    assert_eq!(
        lin,
        vec![(
            Kind::T,
            WordSum::from_terms(vec![
                (z(&[1, 1, 2]), frac(1, 1)),
                (z(&[2, 1, 1]), frac(1, 1))
            ])
        )]
    );
    assert_eq!(rel.constant.0, frac(0, 1));
    let r = relation_residual(&rel, &ctx).unwrap();
    assert!(r.value.abs_f64() < 1e-25, "{}", rel.render());
    // the published form: t(1,1,2) + t(2,1,1) + t(2)t(1,1) - t(1)t(1,2) - (1/2) t(2) zeta(1,1) = 0
    let published = relation_of(&[
        (frac(1, 1), vec![tf(&[1, 1, 2])]),
        (frac(1, 1), vec![tf(&[2, 1, 1])]),
        (frac(1, 1), vec![tf(&[2]), tf(&[1, 1])]),
        (frac(-1, 1), vec![tf(&[1]), tf(&[1, 2])]),
        (frac(-1, 2), vec![tf(&[2]), zf(&[1, 1])]),
    ]);
    assert!(relation_residual(&published, &ctx).unwrap().value.abs_f64() < 1e-25);
}

#[test]
fn relation_three_three() {
    let ctx = PrecisionContext::new(30);
    let rel = extract_relation(&z(&[3, 3])).unwrap();
    let lin = rel.linear_part();
    assert_eq!(lin, vec![(Kind::T, WordSum::term(z(&[3, 3]), frac(2, 1)))]);
    assert!(
        relation_residual(&rel, &ctx).unwrap().value.abs_f64() < 1e-25,
        "{}",
        rel.render()
    );
    // 2 t(3,3) = t(3)^2 - (3/4) t(2) zeta(4)
    let published = relation_of(&[
        (frac(2, 1), vec![tf(&[3, 3])]),
        (frac(-1, 1), vec![tf(&[3]), tf(&[3])]),
        (frac(3, 4), vec![tf(&[2]), zf(&[4])]),
    ]);
    assert!(relation_residual(&published, &ctx).unwrap().value.abs_f64() < 1e-25);
}

#[test]
fn relation_one_one_keeps_constant() {
    let ctx = PrecisionContext::new(30);
    let rel = extract_relation(&z(&[1, 1])).unwrap();
    assert_eq!(rel.constant, (frac(1, 8), 2));
    assert_eq!(
        rel.linear_part(),
        vec![(Kind::T, WordSum::term(z(&[1, 1]), frac(2, 1)))]
    );
    assert!(
        relation_residual(&rel, &ctx).unwrap().value.abs_f64() < 1e-25,
        "{}",
        rel.render()
    );
    // reg(t(1,1) + t(1,1)) = reg(t(1)^2 - t(2))
    let published = relation_of(&[
        (frac(2, 1), vec![tf(&[1, 1])]),
        (frac(-1, 1), vec![tf(&[1]), tf(&[1])]),
        (frac(1, 1), vec![tf(&[2])]),
    ]);
    assert!(relation_residual(&published, &ctx).unwrap().value.abs_f64() < 1e-25);
}

#[test]
fn relations_for_all_small_compositions() {
    let ctx = PrecisionContext::new(25);
    for w in 3..=6u32 {
        for c in compositions(w) {
            let rel = extract_relation(&c).unwrap();
            let mut expected = WordSum::monomial(c.clone());
            let s = if w % 2 == 0 { frac(1, 1) } else { frac(-1, 1) };
            expected.add_term(c.reverse(), s);
            let lin = rel.linear_part();
            if expected.is_zero() {
                assert!(lin.is_empty(), "{}", c);
            } else {
                assert_eq!(lin, vec![(Kind::T, expected)], "{}", c);
            }
            let r = relation_residual(&rel, &ctx).unwrap();
            assert!(
                r.value.abs_f64() < 1e-18,
                "{}: {} in {}",
                c,
                r.value.abs_f64(),
                rel.render()
            );
        }
    }
}

#[test]
fn alternating_relations() {
    let ctx = PrecisionContext::new(25);
    let half = Phase::new(1, 2);
    let zero = Phase::from_integer(0);
    for pairs in [
        vec![(1, half), (2, zero)],
        vec![(1, zero), (1, half), (1, zero)],
        vec![(2, half), (1, half)],
        vec![(1, half), (1, half), (2, zero)],
    ] {
        let w = Word::from_pairs(&pairs);
        let rel = extract_relation(&w).unwrap();
        let r = relation_residual(&rel, &ctx).unwrap();
        assert!(r.value.abs_f64() < 1e-18, "{}: {}", w, rel.render());
    }
    assert!(extract_relation(&Word::from_pairs(&[(2, Phase::new(1, 3))])).is_err());
    assert!(extract_relation(&z(&[1, 1, 1, 1, 1, 1, 1])).is_err());
    assert!(extract_relation(&z(&[7, 6])).is_err());
}

#[test]
fn stuffle_antipode_numerically() {
    let ctx = PrecisionContext::new(25);
    for r in [frac(0, 1), frac(1, 2), frac(1, 1)] {
        for w in 1..=5u32 {
            for c in compositions(w) {
                let rel = antipode_relation(&c, &r).unwrap();
                let v = relation_residual(&rel, &ctx).unwrap();
                assert!(
                    v.value.abs_f64() < 1e-18,
                    "r = {} {}: {}",
                    r,
                    c,
                    v.value.abs_f64()
                );
            }
        }
    }
}

#[test]
fn half_interpolated_values_reduce_to_products() {
    let ctx = PrecisionContext::new(25);
    let mut checked = 0;
    for w in 1..=5u32 {
        for c in compositions(w) {
            if (c.weight() as usize + c.len()) % 2 == 0 {
                assert!(half_parity_relation(&c).is_err());
                continue;
            }
            let rel = half_parity_relation(&c).unwrap();
            assert!(
                rel.terms[1..].iter().all(|t| t.factors.len() > 1),
                "{}",
                rel.render()
            );
            let v = relation_residual(&rel, &ctx).unwrap();
            assert!(v.value.abs_f64() < 1e-18, "{}: {}", c, v.value.abs_f64());
            checked += 1;
        }
    }
    assert!(checked > 10);
}

fn with_twos(a: usize, mid: &[u32], b: usize) -> Vec<u32> {
    let mut v = vec![2; a];
    v.extend_from_slice(mid);
    v.extend(vec![2; b]);
    v
}

#[test]
fn relation_three_twos_three() {
    let ctx = PrecisionContext::new(25);
    for n in 0..=2usize {
        let mut w = vec![3];
        w.extend(vec![2; n]);
        w.push(3);
        let rel = extract_relation(&z(&w)).unwrap();
        assert!(relation_residual(&rel, &ctx).unwrap().value.abs_f64() < 1e-18);
        // 2 t(3,{2}^n,3) = sum t({2}^i,3) t({2}^(n-i),3) - 2^-(2n+3) t(2) sum zeta({2}^i,3) zeta({2}^(n-1-i),3)
        //                  - 2^-(2n+2) t(2) (3 zeta({2}^n,4) + 2 sum zeta({2}^i,3,{2}^(n-1-i),3))
        let p = |k: usize| BigRational::new(1.into(), (num_bigint::BigInt::from(1) << k).into());
        let mut terms = vec![(frac(2, 1), vec![tf(&w)])];
        for i in 0..=n {
            terms.push((
                frac(-1, 1),
                vec![tf(&with_twos(i, &[3], 0)), tf(&with_twos(n - i, &[3], 0))],
            ));
        }
        for i in 0..n {
            terms.push((
                p(2 * n + 3),
                vec![
                    tf(&[2]),
                    zf(&with_twos(i, &[3], 0)),
                    zf(&with_twos(n - 1 - i, &[3], 0)),
                ],
            ));
            terms.push((
                p(2 * n + 2) * frac(2, 1),
                vec![
                    tf(&[2]),
                    zf(&with_twos(i, &[3], n - 1 - i)
                        .into_iter()
                        .chain([3])
                        .collect::<Vec<_>>()),
                ],
            ));
        }
        terms.push((
            p(2 * n + 2) * frac(3, 1),
            vec![tf(&[2]), zf(&with_twos(n, &[4], 0))],
        ));
        let published = relation_of(&terms);
        let r = relation_residual(&published, &ctx).unwrap();
        assert!(
            r.value.abs_f64() < 1e-18,
            "n = {}: {}",
            n,
            r.value.abs_f64()
        );
    }
}
