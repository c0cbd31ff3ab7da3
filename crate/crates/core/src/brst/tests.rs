use proptest::prelude::*;

use super::*;
use crate::liesuper::load_named;
use crate::scalars::rat;
use crate::vacalc::{lambda_text, parse_state, state_text};

fn osp12() -> Complex {
    build_complex(&load_named("osp12").unwrap()).unwrap()
}

fn report(rep: &StructureReport) {
    for m in &rep.mismatches {
        eprintln!("{}\n  expected {}\n  computed {}", m.identity, m.expected, m.computed);
    }
}

#[test]
fn osp12_shape() {
    let cx = osp12();
    assert_eq!(cx.ambient.as_ref().unwrap().space.alg.generators().len(), 9);
    assert_eq!(cx.low.len(), 3);
    assert_eq!(cx.m(), 2);
}

#[test]
fn structure_osp12() {
    let rep = osp12().verify_structure().unwrap();
    report(&rep);
    assert!(rep.passed());
    assert_eq!(rep.checked, 29);
}

#[test]
fn structure_sl21() {
    let cx = build_complex(&load_named("sl21").unwrap()).unwrap();
    assert_eq!(cx.ambient.as_ref().unwrap().space.alg.generators().len(), 14);
    let rep = cx.verify_structure().unwrap();
    report(&rep);
    assert!(rep.passed());
}

#[test]
fn block_bracket_values() {
    let cx = osp12();
    let b = &cx.blocks.alg;
    let g = |s: &str| b.gen_by_name(s).unwrap();
    assert_eq!(lambda_text(b, &b.lambda_bracket(&g("J_H"), &g("J_H"))), "2*v^2*x");
    assert_eq!(lambda_text(b, &b.lambda_bracket(&g("Phi^e"), &g("J_f"))), "Phi^E");
    assert!(b.lambda_bracket(&g("Phi^E"), &g("Phi^e")).is_zero());
}

#[test]
fn differential_on_generators() {
    let cx = osp12();
    let b = &cx.blocks.alg;
    let d = |s: &str| state_text(b, &cx.differential(&parse_state(b, s).unwrap()));
    assert_eq!(d("J_H"), "-2 Phi^e");
    assert_eq!(d("J_f"), "2 Phi^E + 2*v^2 D(Phi^e) + :J_H Phi^e:");
    assert_eq!(d("Phi^E"), ":Phi^e Phi^e:");
    assert_eq!(d("Phi^e"), "0");
    assert!(cx.differential(&State::vacuum()).is_zero());
}

#[test]
fn blocks_in_ambient() {
    let cx = osp12();
    let amb = cx.ambient.as_ref().unwrap();
    let a = &amb.space.alg;
    let t: Vec<String> = amb.blocks.iter().map(|j| state_text(a, j)).collect();
    assert_eq!(t, ["H + 2 :Phi^E phi_E: - :Phi^e phi_e:", "f - :Phi^E phi_e:", "F"]);
    assert_eq!(state_text(a, &amb.d_f), "2 Phi^e");
}

#[test]
fn d_split_by_weight() {
    let cx = osp12();
    let b = &cx.blocks.alg;
    let jf = b.gen_by_name("J_f").unwrap();
    let w = cx.weight_of(b, &jf).unwrap();
    let st = cx.blocks.d_st.apply(b, &jf);
    let f = cx.blocks.d_f.apply(b, &jf);
    assert_eq!(cx.weight_of(b, &st).unwrap(), w);
    // the stated weights give +1 here, not +2
    assert_eq!(cx.weight_of(b, &f).unwrap(), w + 1);
    assert_eq!(cx.charge_of(b, &st).unwrap(), 1);
}

#[test]
fn gradings() {
    let cx = osp12();
    let b = &cx.blocks.alg;
    let s = |t: &str| parse_state(b, t).unwrap();
    assert_eq!(cx.charge_of(b, &s(":Phi^e J_H:")).unwrap(), 1);
    assert_eq!(cx.weight_of(b, &s("Phi^e")).unwrap(), 1);
    assert_eq!(cx.weight_of(b, &s("D(J_f)")).unwrap(), 1);
    assert_eq!(cx.weight_of(b, &s("J_F")).unwrap(), 2);
    assert_eq!(cx.weight_of(b, &s("J_f + J_H")), Err(BrstError::Inhomogeneous));
    let a = &cx.ambient.as_ref().unwrap().space.alg;
    assert_eq!(cx.charge_of(a, &parse_state(a, ":Phi^e phi_e:").unwrap()).unwrap(), 0);
}

#[test]
fn miura_projection() {
    let cx = osp12();
    let b = &cx.blocks.alg;
    let s = |t: &str| parse_state(b, t).unwrap();
    assert_eq!(cx.miura(&s("J_H")).unwrap(), s("J_H"));
    assert!(cx.miura(&s("J_f")).unwrap().is_zero());
    assert_eq!(cx.miura(&s(":J_H J_f: + D(J_H)")).unwrap(), s("D(J_H)"));
    assert!(matches!(cx.miura(&s("Phi^e")), Err(BrstError::NotInBlockSubalgebra(_))));
}

#[test]
fn building_block_cartan_correction() {
    // for h in the cartan, [u_β, h] = −β(h)u_β, so the correction is diagonal in the fermions
    let cx = osp12();
    let a = &cx.ambient.as_ref().unwrap().space.alg;
    let jh = &cx.ambient.as_ref().unwrap().blocks[cx.j_index(2).unwrap()];
    for (m, _) in jh.terms() {
        if m.len() == 2 {
            let at = m.atoms();
            let up = at[0].gen as usize - 5;
            let lo = at[1].gen as usize - 7;
            assert_eq!(up, lo, "{}", state_text(a, jh));
        }
    }
}

#[test]
fn fault_injection_breaks_square_zero() {
    let l = load_named("osp12").unwrap();
    let opts = BuildOptions { cubic_scale: rat(3, 2), with_ambient: false, ..Default::default() };
    assert!(matches!(build_complex_with(&l, &opts), Err(BrstError::DifferentialNotSquareZero { .. })));
    let opts = BuildOptions { cubic_scale: rat(3, 2), ..Default::default() };
    assert!(matches!(build_complex_with(&l, &opts), Err(BrstError::DifferentialNotSquareZero { .. })));
}

#[test]
fn ambient_differential_is_a_derivation() {
    // the derivation extension agrees with the honest (Dd)_(0) on products
    let cx = osp12();
    let amb = cx.ambient.as_ref().unwrap();
    let a = &amb.space.alg;
    let dd = a.apply_d(&(&amb.d_st + &amb.d_f));
    for t in [":H Phi^e:", ":f D(phi_E):", ":e d(Phi^E) F:", "D(:f phi_e:)"] {
        let x = parse_state(a, t).unwrap();
        let honest = a.va_bracket(&dd, &x).coeff(0);
        assert_eq!(amb.space.differential(&x), honest, "{}", t);
        // [D, d_(0|0)] = 0 as a supercommutator
        let lhs = amb.space.differential(&a.apply_d(&x));
        assert_eq!(lhs, -&a.apply_d(&amb.space.differential(&x)));
    }
}

#[test]
fn embedding_intertwines_differentials() {
    let cx = osp12();
    let b = &cx.blocks.alg;
    let amb = cx.ambient.as_ref().unwrap();
    for t in [":J_H J_f:", "D(J_F)", ":J_f Phi^e:", ":Phi^E d(J_H):"] {
        let x = parse_state(b, t).unwrap();
        let lhs = amb.space.differential(&cx.embed(&x).unwrap());
        assert_eq!(lhs, cx.embed(&cx.differential(&x)).unwrap(), "{}", t);
    }
}

#[test]
fn classical_osp12() {
    let cx = classical_complex(&load_named("osp12").unwrap()).unwrap();
    assert!(cx.ambient.is_none());
    let b = &cx.blocks.alg;
    let g = |s: &str| b.gen_by_name(s).unwrap();
    assert_eq!(lambda_text(b, &b.lambda_bracket(&g("J_H"), &g("J_H"))), "2*x");
    assert!(b.lambda_bracket(&g("Phi^E"), &g("Phi^e")).is_zero());
    assert_eq!(state_text(b, &cx.differential(&g("J_f"))), "2 Phi^E + 2 D(Phi^e) + :J_H Phi^e:");
}

#[test]
fn classical_sl21() {
    classical_complex(&load_named("sl21").unwrap()).unwrap();
}

fn square_zero_on_products(cx: &Complex, picks: &[(usize, usize, u8, u16)]) -> Result<(), TestCaseError> {
    let b = &cx.blocks.alg;
    let n = b.generators().len();
    let atom = |g: usize, d: u8, p: u16| {
        let g = g % n;
        State::atom(Atom::new(g, b.generators()[g].parity == 1, d, p))
    };
    for &(x, y, d, p) in picks {
        let s = b.normal_product(&atom(x, d % 2, p % 2), &atom(y, d / 2, 0));
        prop_assert!(cx.differential(&cx.differential(&s)).is_zero(), "{}", state_text(b, &s));
    }
    Ok(())
}

thread_local! {
    static SL21: Complex = build_complex_with(&load_named("sl21").unwrap(), &BuildOptions { with_ambient: false, ..Default::default() }).unwrap();
    static SL21_CL: Complex = classical_complex(&load_named("sl21").unwrap()).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn prop_square_zero_depth2(picks in prop::collection::vec((0usize..64, 0usize..64, 0u8..4, 0u16..2), 1..4)) {
        SL21.with(|cx| square_zero_on_products(cx, &picks))?;
        SL21_CL.with(|cx| square_zero_on_products(cx, &picks))?;
    }

    #[test]
    fn prop_differential_raises_charge(picks in prop::collection::vec((0usize..64, 0usize..64), 1..4)) {
        SL21.with(|cx| {
            let b = &cx.blocks.alg;
            let n = b.generators().len();
            for &(x, y) in &picks {
                let s = b.normal_product(&b.gen(x % n), &b.gen(y % n));
                let ds = cx.differential(&s);
                if s.is_zero() || ds.is_zero() {
                    continue;
                }
                prop_assert_eq!(cx.charge_of(b, &ds).unwrap(), cx.charge_of(b, &s).unwrap() + 1);
                let st = cx.blocks.d_st.apply(b, &s);
                if !st.is_zero() {
                    prop_assert_eq!(cx.weight_of(b, &st).unwrap(), cx.weight_of(b, &s).unwrap());
                }
            }
            Ok(())
        })?;
    }
}
