use proptest::prelude::*;

use super::*;
use crate::liesuper::load_named;
use crate::scalars::rat;
use crate::vacalc::parse_state;

fn rank1(norm: Rational) -> Heisenberg {
    Heisenberg::new(vec!["h".into()], vec![vec![norm]])
}

fn osp12() -> (Heisenberg, ScreeningOp) {
    let l = load_named("osp12").unwrap();
    let h = Heisenberg::of_cartan(&l);
    let op = ScreeningOp::for_root(&l, &h, l.index_of("e").unwrap());
    (h, op)
}

fn vac(h: &Heisenberg) -> FockState {
    FockState::vacuum(h.rank())
}

#[test]
fn highest_weight_action() {
    let h = rank1(rat(2, 1));
    let beta = FockState::highest(vec![RatFunc::from_int(3)], false, "b");
    assert_eq!(mode_action(&h, HMode::db(0, 0), &beta), beta.scale(&RatFunc::from_int(3)));
    assert!(mode_action(&h, HMode::b(0, 0), &beta).is_zero());
    assert!(mode_action(&h, HMode::db(0, 2), &beta).is_zero());
    // [b̄(0), b̄(−1)] = (v|v)
    let one = mode_action(&h, HMode::b(0, -1), &beta);
    let two = mode_action(&h, HMode::b(0, 0), &one);
    assert_eq!(two, beta.scale(&RatFunc::from_int(2)));
    assert_eq!(one.text(&h), "b[h](-1) |b>");
}

#[test]
fn odd_modes_square_to_zero() {
    let h = rank1(rat(1, 1));
    let x = mode_action(&h, HMode::b(0, -2), &vac(&h));
    assert!(mode_action(&h, HMode::b(0, -2), &x).is_zero());
    let y = mode_action(&h, HMode::b(0, -1), &x);
    let z = mode_action(&h, HMode::b(0, -2), &mode_action(&h, HMode::b(0, -1), &vac(&h)));
    assert_eq!(y, z.scale(&-RatFunc::one()));
}

fn modes(window: i64, rank: usize) -> Vec<HMode> {
    let mut v = Vec::new();
    for i in 0..rank {
        for n in -window..=window {
            v.push(HMode::db(i, n));
            v.push(HMode::b(i, n));
        }
    }
    v
}

#[test]
fn module_axiom_exhaustive() {
    // x(y m) − (−1)^{xy} y(x m) = [x, y] m
    let h = Heisenberg::new(vec!["a".into(), "c".into()], vec![vec![rat(2, 1), rat(-1, 1)], vec![rat(-1, 1), rat(1, 2)]]);
    let base = FockState::highest(vec![RatFunc::from_int(1), RatFunc::nu()], true, "w");
    let mut states = vec![base.clone()];
    for w in [rat(1, 2), rat(1, 1), rat(3, 2), rat(2, 1)] {
        for mono in fock_basis(&h, &w) {
            states.push(base.monomial_like(mono, RatFunc::one()));
        }
    }
    let ms = modes(3, 2);
    for m in &states {
        for &x in &ms {
            for &y in &ms {
                let xy = mode_action(&h, x, &mode_action(&h, y, m));
                let yx = mode_action(&h, y, &mode_action(&h, x, m));
                let s = if x.odd() && y.odd() { RatFunc::one() } else { -RatFunc::one() };
                let mut lhs = xy.clone();
                lhs.add_scaled(&yx, &s);
                let rhs = m.scale(&RatFunc::from_rational(mode_bracket(&h, x, y)));
                assert_eq!(lhs, rhs, "{} {} on {}", x.text(&h), y.text(&h), m.text(&h));
            }
        }
    }
}

#[test]
fn modes_match_engine_products() {
    // oracle: the n-th products of the vertex algebra engine
    let h = Heisenberg::new(vec!["a".into(), "c".into()], vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(-3, 1)]]);
    let alg = h.algebra();
    let corpus = ["a", "D(c)", ":a c:", ":D(a) d(c):", ":a D(a) d(a):", "d(d(c))", ":c D(c) a:"];
    for t in corpus {
        let x = parse_state(&alg, t).unwrap();
        let f = fock_from_state(&h, &x);
        assert_eq!(state_from_fock(&h, &alg, &f).unwrap(), x, "{}", t);
        for i in 0..2 {
            let g = alg.gen(i);
            for n in 0..4usize {
                let b = fock_from_state(&h, &alg.nth_product(&g, &x, n, 1));
                assert_eq!(mode_action(&h, HMode::b(i, n as i64), &f), b, "b{}({}) {}", i, n, t);
                let db = fock_from_state(&h, &alg.nth_product(&g, &x, n, 0));
                assert_eq!(mode_action(&h, HMode::db(i, n as i64), &f), db, "Db{}({}) {}", i, n, t);
            }
        }
    }
}

#[test]
fn basis_counts() {
    let h = rank1(rat(1, 1));
    let dims: Vec<usize> = (0..=6).map(|t| fock_basis(&h, &rat(t, 2)).len()).collect();
    // generating function Π (1 + q^{n−1/2})(1 − q^n)^{-1}
    assert_eq!(dims, [1, 1, 1, 2, 3, 4, 5]);
}

#[test]
fn screening_on_vacuum_is_zero() {
    let (h, op) = osp12();
    assert!(op.apply(&h, &vac(&h)).unwrap().is_zero());
}

#[test]
fn screening_on_single_current() {
    // S b̄_h(−1)|0⟩ = (−1)^{p(α)} (1/ν)(h_α|h) |−α/ν⟩
    let (h, op) = osp12();
    let x = mode_action(&h, HMode::b(0, -1), &vac(&h));
    let out = op.apply(&h, &x).unwrap();
    // e is odd and (h_α|H) = α(H) = 1
    assert_eq!(out.text(&h), "(-1/v) |-e/v>");
    // h_α = H/2 since (H|H) = 2
    assert_eq!(op.norm, rat(1, 2));
    let g = Heisenberg::new(vec!["h".into(), "k".into()], vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]]);
    let op2 = ScreeningOp::new("a", &g, vec![rat(1, 1), rat(0, 1)], true);
    let perp = mode_action(&g, HMode::b(1, -1), &vac(&g));
    assert!(op2.apply(&g, &perp).unwrap().is_zero());
}

#[test]
fn screening_shift_and_parity() {
    // S = Y_{−1|1} carries θ, so its parity is p(s) + 1
    let (h, op) = osp12();
    for t in 0..=7 {
        let w = rat(t, 2);
        for mono in fock_basis(&h, &w) {
            let x = vac(&h).monomial_like(mono, RatFunc::one());
            let y = op.apply(&h, &x).unwrap();
            if !y.is_zero() {
                assert_eq!(y.weight().unwrap(), &w - rat(1, 2));
                assert_eq!(y.parity().unwrap(), (x.parity().unwrap() + 1 + op.odd as u8) % 2);
            }
        }
    }
}

#[test]
fn truncation_is_exact() {
    let (h, op) = osp12();
    for mono in fock_basis(&h, &rat(3, 1)) {
        let x = vac(&h).monomial_like(mono, RatFunc::one());
        let a = op.coefficient(&h, &x, -1, true, 4);
        for order in [6, 8] {
            assert_eq!(op.coefficient(&h, &x, -1, true, order), a);
        }
    }
}

#[test]
fn superfield_identities_osp12() {
    let (h, op) = osp12();
    let rep = verify_screening_identities(&op, &h, 2);
    assert!(rep.passed(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
    assert!(rep.checked > 100);
}

#[test]
fn superfield_identities_sl21() {
    let l = load_named("sl21").unwrap();
    let h = Heisenberg::of_cartan(&l);
    for u in ["E12", "E23"] {
        let op = ScreeningOp::for_root(&l, &h, l.index_of(u).unwrap());
        // both simple roots are isotropic
        assert!(op.norm.is_zero());
        let rep = verify_screening_identities(&op, &h, 1);
        assert!(rep.passed(), "{}: {:?}", u, &rep.failures[..rep.failures.len().min(5)]);
    }
}

#[test]
fn flipped_sign_is_caught() {
    let (h, mut op) = osp12();
    op.flip_b_plus = true;
    let rep = verify_screening_identities(&op, &h, 2);
    assert!(!rep.passed());
    assert!(rep.failures[0].starts_with("[Db[H]("), "{}", rep.failures[0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_screening_is_linear(a in -5i64..6, b in 1i64..4, pick in 0usize..4) {
        let (h, op) = osp12();
        let basis = fock_basis(&h, &rat(5, 2));
        let x = vac(&h).monomial_like(basis[pick % basis.len()].clone(), RatFunc::one());
        let y = vac(&h).monomial_like(basis[(pick + 1) % basis.len()].clone(), RatFunc::one());
        let c = RatFunc::from_ratio(a, b);
        let mut s = x.scale(&c);
        s.add_scaled(&y, &RatFunc::one());
        let mut want = op.apply(&h, &x).unwrap().scale(&c);
        want.add_scaled(&op.apply(&h, &y).unwrap(), &RatFunc::one());
        prop_assert_eq!(op.apply(&h, &s).unwrap(), want);
    }
}
