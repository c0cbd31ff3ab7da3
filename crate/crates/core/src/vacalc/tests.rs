use std::time::Instant;

use proptest::prelude::*;

use super::*;
use crate::liesuper::load_named;
use crate::scalars::{rat, RatFunc};

fn ns(c: RatFunc) -> Algebra {
    neveu_schwarz(&c, Mode::Quantum)
}

fn heis1(mode: Mode) -> Algebra {
    neutral_fermion(mode)
}

fn st(alg: &Algebra, s: &str) -> State {
    parse_state(alg, s).unwrap()
}

#[test]
fn ns_bracket_reproduces_table() {
    let alg = ns(RatFunc::from_ratio(1, 2));
    let g = alg.gen_by_name("G").unwrap();
    let lp = alg.lambda_bracket(&g, &g);
    assert_eq!(lambda_text(&alg, &lp), "(2 d(G) + 3*l*G + x*D(G)) + (1/6)*l^2*x");
}

#[test]
fn ns_virasoro_subalgebra() {
    let c = RatFunc::nu();
    let alg = ns(c.clone());
    let l = st(&alg, "1/2 D(G)");
    let br = alg.va_bracket(&l, &l);
    let dl = alg.apply_partial(&l);
    assert_eq!(br.coeff(0), dl);
    assert_eq!(br.coeff(1), l.scale(&RatFunc::from_int(2)));
    assert!(br.coeff(2).is_zero());
    assert_eq!(br.coeff(3), State::constant(&c * &RatFunc::from_ratio(1, 12)));
    // L_(3)L = c/2
    assert_eq!(alg.nth_product(&l, &l, 3, 1), State::constant(&c * &RatFunc::from_ratio(1, 2)));
}

#[test]
fn vacuum_is_central() {
    let alg = ns(RatFunc::nu());
    for s in ["G", ":G d(G):", "D(G)"] {
        let x = st(&alg, s);
        assert!(alg.lambda_bracket(&x, &State::vacuum()).is_zero());
        assert!(alg.lambda_bracket(&State::vacuum(), &x).is_zero());
        assert_eq!(alg.normal_product(&State::vacuum(), &x), x);
    }
    assert!(alg.apply_d(&State::vacuum()).is_zero());
}

#[test]
fn skew_violation_is_rejected() {
    // an even generator with [a_Λ a] = χ: skew-symmetry demands -χ
    let gens = vec![Generator::new("a", 0, Origin::Abstract)];
    let lp = LambdaPoly::from_terms(vec![(0, true, State::vacuum())]);
    let err = free_susy_algebra(gens, vec![(0, 0, lp)], Mode::Quantum).err().unwrap();
    assert_eq!(err, VaError::SkewSymmetryViolation { x: "a".into(), y: "a".into() });
}

#[test]
fn neutral_fermion_brackets() {
    let gens = vec![Generator::new("psi", 1, Origin::Abstract)];
    let lp = LambdaPoly::from_terms(vec![(0, false, State::vacuum())]);
    assert!(free_susy_algebra(gens, vec![(0, 0, lp)], Mode::Quantum).is_err());
    let nf = neutral_fermion(Mode::Quantum);
    let psi = nf.gen(0);
    assert_eq!(lambda_text(&nf, &nf.lambda_bracket(&psi, &psi)), "x");
    assert_eq!(nf.va_bracket(&psi, &psi).coeff(0), State::vacuum());
}

#[test]
fn fermion_square_and_d_rule() {
    let alg = heis1(Mode::Quantum);
    let psi = alg.gen(0);
    assert!(alg.normal_product(&psi, &psi).is_zero());
    let x = st(&alg, ":psi D(psi):");
    let want = &st(&alg, ":D(psi) D(psi):") - &st(&alg, ":psi d(psi):");
    assert_eq!(alg.apply_d(&x), want);
    assert_eq!(state_text(&alg, &alg.apply_d(&x)), "-:psi d(psi): + :D(psi) D(psi):");
}

#[test]
fn d_squared_on_generators() {
    let alg = ns(RatFunc::nu());
    let g = alg.gen(0);
    assert_eq!(alg.apply_d(&alg.apply_d(&g)), alg.apply_partial(&g));
}

#[test]
fn affine_bracket_constants() {
    let l = load_named("osp12").unwrap();
    let kappa = RatFunc::nu().pow(2);
    let alg = susy_affine(&l, &kappa, Mode::Quantum);
    let e = alg.gen_by_name("e").unwrap();
    let f = alg.gen_by_name("f").unwrap();
    let lp = alg.lambda_bracket(&e, &f);
    // e, f odd: sign (-1)^{1*0} = +1, [e,f] = H, (e|f) = 2
    assert_eq!(lambda_text(&alg, &lp), "(H) + 2*v^2*x");
    let ee = alg.lambda_bracket(&e, &e);
    // (-1)^{1*(1+1)} = +1, [e,e] = 2E
    assert_eq!(lambda_text(&alg, &ee), "2 E");
    let hh = alg.lambda_bracket(&alg.gen_by_name("H").unwrap(), &alg.gen_by_name("H").unwrap());
    assert_eq!(lambda_text(&alg, &hh), "2*v^2*x");
}

#[test]
fn text_round_trip() {
    let alg = ns(RatFunc::nu());
    for s in [
        "G",
        "d(d(D(G)))",
        ":G D(G):",
        "2 d(G) - (1/2) :G d(G):",
        "(v^2+1) |0> + v :G D(G) d(G):",
        "-D(G)",
    ] {
        let x = st(&alg, s);
        let t = state_text(&alg, &x);
        assert_eq!(st(&alg, &t), x, "{} -> {}", s, t);
    }
    assert_eq!(state_text(&alg, &st(&alg, "2 d(G) - 1/2 :G d(G):")), "2 d(G) - (1/2) :G d(G):");
    assert!(matches!(parse_state(&alg, "G + Q"), Err(VaError::Parse { pos: 4, .. })));
    assert!(parse_state(&alg, "G G").is_err());
}

#[test]
fn nested_products_parse() {
    let alg = ns(RatFunc::nu());
    let a = st(&alg, ":G :D(G) d(G)::");
    let b = alg.product(&[st(&alg, "G"), st(&alg, "D(G)"), st(&alg, "d(G)")]);
    assert_eq!(a, b);
}

#[test]
fn axioms_neveu_schwarz() {
    let alg = ns(RatFunc::nu());
    let t = Instant::now();
    let rep = check_axioms(&alg, &SampleSpec::default());
    assert!(rep.passed(), "{:?}", rep.failures.first());
    eprintln!("NS axioms {:?} {:?} in {:?}", rep.checked, rep.elapsed, t.elapsed());
}

#[test]
fn axioms_heisenberg_classical() {
    let alg = heis1(Mode::Classical);
    let rep = check_axioms(&alg, &SampleSpec::default());
    assert!(rep.passed(), "{:?}", rep.failures.first());
}

#[test]
fn classical_bracket_is_biderivation() {
    let alg = ns(RatFunc::nu());
    let cl = neveu_schwarz(&RatFunc::nu(), Mode::Classical);
    let g = cl.gen(0);
    let b = st(&cl, "D(G)");
    let c = st(&cl, "d(G)");
    let lhs = cl.va_bracket(&g, &cl.normal_product(&b, &c));
    let mut rhs = LPoly::zero();
    for (n, s) in cl.va_bracket(&g, &b).0.iter().enumerate() {
        rhs.add_at(n, &cl.normal_product(s, &c), &RatFunc::one());
    }
    for (n, s) in cl.va_bracket(&g, &c).0.iter().enumerate() {
        rhs.add_at(n, &cl.normal_product(&b, s), &RatFunc::one());
    }
    assert_eq!(lhs, rhs.trimmed());
    // quantum bracket differs by the integral term only
    let q = alg.va_bracket(&alg.gen(0), &alg.normal_product(&st(&alg, "D(G)"), &st(&alg, "d(G)")));
    assert_ne!(q, lhs);
}

#[test]
fn classical_product_is_supercommutative() {
    let cl = heis1(Mode::Classical);
    let a = st(&cl, "psi");
    let b = st(&cl, "d(psi)");
    assert_eq!(cl.normal_product(&a, &b), cl.normal_product(&b, &a).scale(&-RatFunc::one()));
    assert!(cl.normal_product(&a, &a).is_zero());
}

#[test]
fn nth_products_match_lambda_coefficients() {
    let alg = ns(RatFunc::from_ratio(3, 1));
    let g = alg.gen(0);
    let lp = alg.lambda_bracket(&g, &g);
    // G_(2|1)G = 2! * c/3
    assert_eq!(lp.coeff(2, 1), State::constant(RatFunc::from_int(2)));
    assert_eq!(alg.nth_product(&g, &g, 2, 1), lp.coeff(2, 1));
    assert_eq!(alg.nth_product(&g, &g, 1, 0), lp.coeff(1, 0));
    let _ = rat(1, 1);
}

fn arb_state(alg: &Algebra) -> impl Strategy<Value = State> {
    let atoms = axioms::sample_atoms(alg, 2);
    let n = atoms.len();
    prop::collection::vec((prop::collection::vec(0..n, 1..=3), -3i64..=3), 1..=3).prop_map(move |terms| {
        let mut s = State::zero();
        for (idx, c) in terms {
            let mut acc = State::constant(RatFunc::from_int(c));
            for &i in idx.iter().rev() {
                acc = ALG.with(|a| a.normal_product(&State::atom(atoms[i]), &acc));
            }
            s = &s + &acc;
        }
        s
    })
}

thread_local! {
    static ALG: Algebra = neveu_schwarz(&RatFunc::nu(), Mode::Quantum);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_d_squared_is_partial(s in ALG.with(arb_state)) {
        ALG.with(|alg| {
            prop_assert_eq!(alg.apply_d(&alg.apply_d(&s)), alg.apply_partial(&s));
            Ok(())
        })?;
    }

    #[test]
    fn prop_skew_symmetry(a in ALG.with(arb_state), b in ALG.with(arb_state)) {
        ALG.with(|alg| {
            for (x, y) in [(&a, &b)] {
                // only homogeneous pieces carry a well-defined sign
                for px in [0u8, 1] {
                    for py in [0u8, 1] {
                        let xs = filter_parity(x, px);
                        let ys = filter_parity(y, py);
                        let lhs = alg.lambda_bracket(&ys, &xs);
                        let s = if px * py == 1 { -RatFunc::one() } else { RatFunc::one() };
                        let rhs = axioms::skew_image(alg, &alg.lambda_bracket(&xs, &ys)).scale(&s);
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }
            Ok(())
        })?;
    }

    #[test]
    fn prop_text_round_trip(s in ALG.with(arb_state)) {
        ALG.with(|alg| {
            let t = state_text(alg, &s);
            prop_assert_eq!(parse_state(alg, &t).unwrap(), s);
            Ok(())
        })?;
    }
}

fn filter_parity(s: &State, p: u8) -> State {
    let mut out = State::zero();
    for (m, c) in s.terms() {
        if m.parity() == p {
            out.add_term(m.clone(), c);
        }
    }
    out
}

#[test]
fn axioms_affine_osp12() {
    let l = load_named("osp12").unwrap();
    let alg = susy_affine(&l, &RatFunc::nu().pow(2), Mode::Quantum);
    let t = Instant::now();
    let rep = check_axioms(&alg, &SampleSpec::default());
    assert!(rep.passed(), "{:?}", rep.failures.first());
    eprintln!("osp12 axioms {:?} {:?} in {:?}", rep.checked, rep.elapsed, t.elapsed());
}
