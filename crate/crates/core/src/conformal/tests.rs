use super::*;
use crate::brst::build_complex;
use crate::liesuper::load_named;
use crate::scalars::rat;
use crate::vacalc::{neveu_schwarz, parse_state, susy_fermion};

fn kt_check(name: &str) {
    let l = load_named(name).unwrap();
    let kappa = RatFunc::nu().pow(2);
    let alg = susy_affine(&l, &kappa, Mode::Quantum);
    let w = kac_todorov(&alg, &l, &kappa);
    assert_eq!(superconformal_charge(&alg, &w).unwrap(), kac_todorov_charge(&l).unwrap());
    for i in 0..l.dim() {
        let (d, p) = conformal_weight(&alg, &w, &alg.gen(i)).unwrap();
        assert_eq!(d, rat(1, 2), "{}", l.name_of(i));
        assert!(p, "{}", l.name_of(i));
    }
}

#[test]
fn kac_todorov_osp12() {
    kt_check("osp12");
    // sdim osp(1|2) = 1, h∨ = 3/2: c = (v²−3/2)/v² + 1/2
    let c = kac_todorov_charge(&load_named("osp12").unwrap()).unwrap();
    assert_eq!(c.to_text(), "(3*v^2-3)/(2*v^2)");
}

#[test]
fn kac_todorov_sl21() {
    kt_check("sl21");
}

#[test]
fn kac_todorov_critical() {
    let l = load_named("osp12").unwrap();
    assert!(matches!(kac_todorov_at(&l, &rat(0, 1)), Err(ConformalError::CriticalLevel)));
    let (alg, w) = kac_todorov_at(&l, &rat(2, 1)).unwrap();
    // k = 4 − 3/2 = 5/2: c = (5/2)/4 + 1/2
    assert_eq!(superconformal_charge(&alg, &w).unwrap(), RatFunc::from_ratio(9, 8));
}

fn fermions(ps: &[u8]) -> (Algebra, Vec<(State, State)>) {
    let n = ps.len();
    let up: Vec<(String, u8)> = ps.iter().enumerate().map(|(i, p)| (format!("U{}", i), 1 - p)).collect();
    let lo: Vec<(String, u8)> = ps.iter().enumerate().map(|(i, p)| (format!("L{}", i), *p)).collect();
    let id: Vec<Vec<RatFunc>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect()).collect();
    let alg = susy_fermion(up, lo, &id, Mode::Quantum).unwrap();
    let gens = (0..n).map(|i| (alg.gen(i), alg.gen(n + i))).collect();
    (alg, gens)
}

#[test]
fn fermion_vector_charges_and_weights() {
    let ps = [0u8, 1, 1];
    for m in [vec![rat(0, 1), rat(0, 1), rat(0, 1)], vec![rat(1, 2), rat(1, 3), rat(-2, 5)]] {
        let (alg, g) = fermions(&ps);
        let pairs: Vec<_> = g.iter().zip(&ps).zip(&m).map(|(((u, l), p), mv)| (u.clone(), l.clone(), *p, mv.clone())).collect();
        let tau = fermion_vector(&alg, &pairs);
        assert_eq!(superconformal_charge(&alg, &tau).unwrap(), fermion_charge(&ps, &m));
        for ((u, l), mv) in g.iter().zip(&m) {
            assert_eq!(conformal_weight(&alg, &tau, u).unwrap(), (mv.clone(), true));
            assert_eq!(conformal_weight(&alg, &tau, l).unwrap(), (rat(1, 2) - mv, true));
        }
    }
    // all m = 0: c = −3 sdim(n); here sdim = 1 − 2
    assert_eq!(fermion_charge(&ps, &[rat(0, 1), rat(0, 1), rat(0, 1)]), RatFunc::from_int(3));
}

#[test]
fn osp12_fermion_charge_at_default_m() {
    let cx = build_complex(&load_named("osp12").unwrap()).unwrap();
    let m = default_m(&cx);
    let par: Vec<u8> = (0..cx.m()).map(|a| cx.p_alpha(a)).collect();
    // m = {1, 1/2} on (E even, e odd): 12(1 − 1/2) − 3·0
    assert_eq!(fermion_charge(&par, &m), RatFunc::from_int(6));
}

fn w_check(name: &str) {
    let cx = build_complex(&load_named(name).unwrap()).unwrap();
    let m = default_m(&cx);
    let rep = w_vector(&cx, &m).unwrap();
    assert!(rep.closed);
    assert_eq!(rep.central_charge, rep.expected_charge);
    for (i, &b) in cx.low.iter().enumerate() {
        let name = &cx.blocks.alg.generators()[i].name;
        assert_eq!(rep.weight_table[name], rat(1, 2) - cx.graded.grade_of(b), "{}", name);
        // anomaly −κ(e|[f,a]) plus the supertrace of ad a on n, which only grade-0 blocks see
        let l = &cx.lie;
        let a = l.basis_elem(b);
        let mut str_n = rat(0, 1);
        for (al, &u) in cx.graded.u_plus.iter().enumerate() {
            let t = l.form(&cx.graded.u_dual[al], &l.bracket(&a, &l.basis_elem(u)));
            str_n += if l.parity(u) == 1 { -t } else { t };
        }
        let want = &-(&cx.kappa * &RatFunc::from_rational(l.form(&l.osp.e, &l.bracket(&l.osp.f, &a)))) + &RatFunc::from_rational(str_n);
        assert_eq!(rep.anomalies[name], want, "{}", name);
    }
}

#[test]
fn w_vector_osp12() {
    w_check("osp12");
    let cx = build_complex(&load_named("osp12").unwrap()).unwrap();
    let c = w_charge(&cx, &default_m(&cx)).unwrap();
    // N=1 super-Virasoro from osp(1|2) at t = k + 3/2: c = 15/2 − 6t − 3/(2t)
    let t = RatFunc::nu().pow(2);
    let want = &(&RatFunc::from_ratio(15, 2) - &(&t * &RatFunc::from_int(6))) - &(&RatFunc::from_ratio(3, 2) / &t);
    assert_eq!(c, want);
    assert_ne!(w_charge_stated(&cx, &default_m(&cx)).unwrap(), want);
}

#[test]
fn w_vector_sl21() {
    w_check("sl21");
}

#[test]
fn w_vector_needs_m_equal_j() {
    let cx = build_complex(&load_named("osp12").unwrap()).unwrap();
    let m = [rat(2, 7), rat(-1, 3)];
    assert_eq!(w_vector(&cx, &m).unwrap_err(), ConformalError::NotClosed);
    // still superconformal in the ambient algebra, with c(m)
    let alg = &cx.ambient.as_ref().unwrap().space.alg;
    let g = w_state(&cx, &m).unwrap();
    assert_eq!(superconformal_charge(alg, &g).unwrap(), w_charge(&cx, &m).unwrap());
}

#[test]
fn ns_weights() {
    let alg = neveu_schwarz(&RatFunc::nu(), Mode::Quantum);
    let g = alg.gen(0);
    assert_eq!(conformal_weight(&alg, &g, &g).unwrap(), (rat(3, 2), false));
    assert_eq!(conformal_weight(&alg, &g, &State::vacuum()).unwrap(), (rat(0, 1), true));
    let l = parse_state(&alg, "1/2 D(G)").unwrap();
    assert_eq!(conformal_weight(&alg, &g, &l).unwrap().0, rat(2, 1));
    assert_eq!(superconformal_charge(&alg, &g).unwrap(), RatFunc::nu());
    let mixed = parse_state(&alg, "G + D(G)").unwrap();
    assert_eq!(conformal_weight(&alg, &g, &mixed), Err(ConformalError::NotEigen));
}

#[test]
fn weights_are_additive() {
    let alg = neveu_schwarz(&RatFunc::nu(), Mode::Quantum);
    let g = alg.gen(0);
    let corpus = [("G", 3), ("D(G)", 4), ("d(G)", 5), (":G D(G):", 7), (":G d(G):", 8), (":D(G) d(G):", 9)];
    for (t, twice) in corpus {
        let x = parse_state(&alg, t).unwrap();
        assert_eq!(conformal_weight(&alg, &g, &x).unwrap().0, rat(twice, 2), "{}", t);
    }
}


proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]

    #[test]
    fn prop_fermion_vector_any_m(ms in proptest::collection::vec((-6i64..7, 1i64..6), 3)) {
        let ps = [1u8, 0, 1];
        let m: Vec<_> = ms.iter().map(|(a, b)| rat(*a, *b)).collect();
        let (alg, g) = fermions(&ps);
        let pairs: Vec<_> = g.iter().zip(&ps).zip(&m).map(|(((u, l), p), mv)| (u.clone(), l.clone(), *p, mv.clone())).collect();
        let tau = fermion_vector(&alg, &pairs);
        proptest::prop_assert_eq!(superconformal_charge(&alg, &tau).unwrap(), fermion_charge(&ps, &m));
    }
}
