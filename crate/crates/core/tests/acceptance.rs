//! Acceptance criteria, one line each. Runs without the libtest harness so the lines are always
//! printed; exits nonzero when the set of failing criteria differs from `EXPECTED_FAILURES`.

use std::process::ExitCode;
use std::time::Instant;

use susyw::brst::{build_complex, classical_complex, Complex};
use susyw::cli;
use susyw::conformal::{
    conformal_weight, default_m, kac_todorov, kac_todorov_charge, superconformal_charge, w_charge, w_charge_stated,
    w_vector,
};
use susyw::fock::{verify_screening_identities, Heisenberg, ScreeningOp};
use susyw::liesuper::{dual_coxeter, load_named};
use susyw::scalars::{rat, RatFunc};
use susyw::vacalc::{check_axioms, neveu_schwarz, susy_affine, Algebra, Mode, SampleSpec};
use susyw::wfinder::{
    extract_generators, factorization_report, kernels_up_to, sample_points, verify_ns, FreeField, KernelResult,
};

/// Criterion 3 asks for equality with a closed form whose last term disagrees with the engine and
/// with two independent oracles; see the notes in the README.
const EXPECTED_FAILURES: [usize; 1] = [3];

#[derive(Default)]
struct Checks {
    count: usize,
    failed: Vec<String>,
}

impl Checks {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.count += 1;
        if !ok {
            self.failed.push(name.into());
        }
    }
}

fn nu2() -> RatFunc {
    RatFunc::nu().pow(2)
}

fn axioms(c: &mut Checks, label: &str, alg: &Algebra) {
    let r = check_axioms(alg, &SampleSpec { max_len: 2, max_p: 2 });
    for name in ["skew-symmetry", "Jacobi", "Wick", "D^2 = d"] {
        c.check(format!("{} {} ran", label, name), r.checked.get(name).copied().unwrap_or(0) > 0);
    }
    c.check(format!("{} axioms", label), r.passed());
}

fn c1(c: &mut Checks) {
    axioms(c, "NS", &neveu_schwarz(&RatFunc::nu(), Mode::Quantum));
    for name in ["osp12", "sl21"] {
        let l = load_named(name).unwrap();
        axioms(c, &format!("V({})", name), &susy_affine(&l, &nu2(), Mode::Quantum));
        let f = susyw::brst::build_complex_with(&l, &susyw::brst::BuildOptions { with_ambient: false, ..Default::default() })
            .unwrap()
            .fermion_algebra()
            .unwrap();
        axioms(c, &format!("F({})", name), &f);
    }
}

fn square_zero(c: &mut Checks, label: &str, cx: &Complex) {
    c.check(format!("{} d^2 on generators", label), cx.blocks.check_square_zero().is_ok());
    let bad = cli::square_zero_products(cx, 64, 2024);
    c.check(format!("{} d^2 on depth-2 products", label), bad.is_empty());
}

fn c2(c: &mut Checks) {
    for name in ["osp12", "sl21"] {
        let l = load_named(name).unwrap();
        let cx = build_complex(&l).unwrap();
        square_zero(c, &format!("{} quantum", name), &cx);
        c.check(format!("{} ambient d^2", name), cx.ambient.as_ref().unwrap().space.check_square_zero().is_ok());
        let rep = cx.verify_structure().unwrap();
        c.check(format!("{} closed forms ({} identities)", name, rep.checked), rep.passed() && rep.checked > 0);
        // central term of [J_a Λ J_b] in the ambient algebra: χ (k+h∨)(a|b)
        let amb = cx.ambient.as_ref().unwrap();
        let alg = &amb.space.alg;
        for (i, &a) in cx.low.iter().enumerate() {
            for (j, &b) in cx.low.iter().enumerate() {
                let lp = alg.lambda_bracket(&amb.blocks[i], &amb.blocks[j]);
                let want = &nu2() * &RatFunc::from_rational(l.form_basis(a, b).clone());
                c.check(format!("{} central term ({},{})", name, a, b), lp.central_coeff(0, 1) == want);
            }
        }
        let cl = classical_complex(&l).unwrap();
        square_zero(c, &format!("{} classical", name), &cl);
    }
}

fn c3(c: &mut Checks) {
    // independent closed forms at t = k + h∨: the osp(1|2) reduction gives 3/2 − 12(k+1)²/(2k+3),
    // the sl(2|1) reduction gives −3(2k+1)
    let t = nu2();
    let lit_osp12 = &RatFunc::from_ratio(3, 2) - &(&(&t - &RatFunc::from_ratio(1, 2)).pow(2) * &(&RatFunc::from_int(6) / &t));
    let lit_sl21 = &RatFunc::from_int(3) - &(&t * &RatFunc::from_int(6));
    for (name, lit) in [("osp12", lit_osp12), ("sl21", lit_sl21)] {
        let l = load_named(name).unwrap();
        let cx = build_complex(&l).unwrap();
        let m = default_m(&cx);
        let rep = match w_vector(&cx, &m) {
            Ok(r) => r,
            Err(_) => {
                c.check(format!("{} d G = 0", name), false);
                continue;
            }
        };
        c.check(format!("{} d G = 0", name), rep.closed);
        c.check(format!("{} superconformal shape", name), superconformal_charge(&cx.ambient.as_ref().unwrap().space.alg, &rep.vector).is_ok());
        c.check(format!("{} charge equals literature value", name), rep.central_charge == lit);
        c.check(format!("{} charge equals corrected closed form", name), rep.central_charge == w_charge(&cx, &m).unwrap());
        // the closed form as stated, built here from its terms
        let hv = RatFunc::from_rational(dual_coxeter(&l).unwrap());
        let k = &t - &hv;
        let sdim = RatFunc::from_int(l.sdim());
        let ck = &(&(&k * &sdim) / &t) + &(&sdim * &RatFunc::from_ratio(1, 2));
        let mut ferm = RatFunc::zero();
        let mut sdim_n = 0i64;
        for (a, mv) in m.iter().enumerate() {
            let odd = cx.p_alpha(a) == 1;
            let s = if odd { -RatFunc::one() } else { RatFunc::one() };
            ferm = &ferm + &(&s * &RatFunc::from_rational(mv * rat(12, 1)));
            sdim_n += if odd { -1 } else { 1 };
        }
        let stated = &(&(&ck + &ferm) - &RatFunc::from_int(3 * sdim_n)) - &(&t * &RatFunc::from_ratio(2, 3));
        c.check(format!("{} stated closed form is the module's", name), stated == w_charge_stated(&cx, &m).unwrap());
        c.check(format!("{} charge equals stated closed form", name), rep.central_charge == stated);
        for (i, &b) in cx.low.iter().enumerate() {
            let g = &cx.blocks.alg.generators()[i].name;
            c.check(format!("{} weight of {}", name, g), rep.weight_table[g] == rat(1, 2) - cx.graded.grade_of(b));
        }
    }
}

fn c4(c: &mut Checks) {
    // c = k sdim/(k+h∨) + sdim/2, frozen per algebra: osp(1|2) has sdim 1 and h∨ = 3/2, sl(2|1) has sdim 0
    for (name, frozen) in [("osp12", "(3*v^2-3)/(2*v^2)"), ("sl21", "0")] {
        let l = load_named(name).unwrap();
        let alg = susy_affine(&l, &nu2(), Mode::Quantum);
        let w = kac_todorov(&alg, &l, &nu2());
        let got = superconformal_charge(&alg, &w);
        c.check(format!("{} charge", name), got.as_ref().map(|x| x.to_text() == frozen).unwrap_or(false));
        c.check(format!("{} closed form", name), kac_todorov_charge(&l).unwrap().to_text() == frozen);
        for i in 0..l.dim() {
            let (d, p) = conformal_weight(&alg, &w, &alg.gen(i)).unwrap();
            c.check(format!("{} {} primary of weight 1/2", name, l.name_of(i)), p && d == rat(1, 2));
        }
    }
}

fn c5(c: &mut Checks) {
    for (name, root) in [("osp12", "e"), ("sl21", "E12")] {
        let l = load_named(name).unwrap();
        let h = Heisenberg::of_cartan(&l);
        let op = ScreeningOp::for_root(&l, &h, l.index_of(root).unwrap());
        if name == "sl21" {
            c.check("sl21 root is isotropic", op.norm == rat(0, 1));
        }
        let r = verify_screening_identities(&op, &h, 2);
        c.check(format!("{} {} identities ({})", name, root, r.checked), r.passed() && r.checked > 0);
    }
}

fn dims(res: &[KernelResult]) -> (Vec<usize>, Vec<usize>) {
    (res.iter().map(|r| r.dim_space()).collect(), res.iter().map(|r| r.dim_kernel()).collect())
}

fn c6(c: &mut Checks) {
    let ff = FreeField::new(&load_named("osp12").unwrap()).unwrap();
    let res = kernels_up_to(&ff, &rat(2, 1)).unwrap();
    let (space, ker) = dims(&res);
    c.check("weight-space dims 1,1,1,2,3", space == [1, 1, 1, 2, 3]);
    c.check("kernel dims 1,0,0,1,1", ker == [1, 0, 0, 1, 1]);
    for r in &res {
        c.check(format!("kernel at {} annihilated", r.weight()), r.verify(&ff).unwrap());
    }
    let g = &res[3].kernel[0];
    let dg = ff.alg.apply_d(g);
    let k = &res[4].kernel[0];
    let proportional = dg.terms().next().map(|(m, x)| k.scale(&(x / &k.coeff(m))) == dg).unwrap_or(false);
    c.check("weight-2 vector is D of the weight-3/2 one", proportional);
    match extract_generators(&ff, &res) {
        Ok(led) => {
            c.check("one new generator", led.entries.len() == 1 && led.entries[0].weight == rat(3, 2));
            c.check("census |ker ad f| = 1", led.census.values().sum::<usize>() == 1);
            let ns = verify_ns(&ff.alg, &led.entries[0].state);
            c.check("NS shape", ns.is_ok());
        }
        Err(_) => c.check("census", false),
    }
}

fn c7(c: &mut Checks) {
    let ff = FreeField::new(&load_named("sl21").unwrap()).unwrap();
    let res = kernels_up_to(&ff, &rat(3, 2)).unwrap();
    match extract_generators(&ff, &res) {
        Ok(led) => {
            let ws: Vec<String> = led.entries.iter().map(|e| e.weight.to_string()).collect();
            c.check("new generators at 1 and 3/2", ws == ["1", "3/2"]);
            c.check("census = 2", led.census.values().sum::<usize>() == 2);
        }
        Err(_) => c.check("census", false),
    }
    for name in ["sl21", "sl32"] {
        let r = factorization_report(&load_named(name).unwrap()).unwrap();
        for b in &r.blocks {
            c.check(format!("{} block {} kills the perpendicular basis ({} states)", name, b.roots.join(","), b.perp_states), b.perp_killed && b.perp_states > 0);
        }
    }
}

fn c8(c: &mut Checks) {
    let golden = [
        ("sl32", include_str!("golden/factorization_sl32.txt")),
        ("osp32", include_str!("golden/factorization_osp32.txt")),
        ("osp12", include_str!("golden/factorization_osp12.txt")),
        ("sl21", include_str!("golden/factorization_sl21.txt")),
    ];
    for (name, want) in golden {
        let out = cli::run(["susyw", "wfind", "factorize", name]);
        c.check(format!("{} golden", name), out.code == 0 && out.stdout == want);
    }
    let r = factorization_report(&load_named("sl32").unwrap()).unwrap();
    c.check("sl32 two osp(2|2) blocks", r.blocks.iter().map(|b| b.factor.as_str()).collect::<Vec<_>>() == ["osp(2|2)", "osp(2|2)"]);
    let r = factorization_report(&load_named("osp32").unwrap()).unwrap();
    c.check("osp32 one osp(3|2) block", r.blocks.len() == 1 && r.blocks[0].factor == "osp(3|2)");
}

fn c9(c: &mut Checks) {
    for name in ["osp12", "sl21"] {
        let ff = FreeField::new(&load_named(name).unwrap()).unwrap();
        let res = kernels_up_to(&ff, &rat(2, 1)).unwrap();
        let pts = sample_points(&res, 5, 2026);
        c.check(format!("{} five points", name), pts.len() == 5);
        for r in &res {
            for q in &pts {
                c.check(format!("{} weight {} at v={}", name, r.weight(), q), r.dim_kernel_at(q) == Ok(r.dim_kernel()));
            }
        }
    }
}

fn c10(c: &mut Checks) {
    for (name, w) in [("osp12", "2"), ("sl21", "3/2")] {
        let args = ["susyw", "--format", "records", "suite", name, "--maxweight", w];
        let a = cli::run(args);
        let b = cli::run(args);
        c.check(format!("{} suite passes", name), a.code == 0);
        c.check(format!("{} byte-identical", name), a.stdout == b.stdout && !a.stdout.is_empty());
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut Checks)); 10] = [
        ("axioms on NS, V(osp12), V(sl21), F(osp12), F(sl21)", c1),
        ("BRST square-zero and closed forms", c2),
        ("superconformal vector of the W-algebra", c3),
        ("Kac-Todorov vector", c4),
        ("screening identities", c5),
        ("kernel ledger osp(1|2)", c6),
        ("kernel ledger sl(2|1) and perpendicular Heisenberg", c7),
        ("factorization golden files", c8),
        ("genericity under specialization", c9),
        ("determinism of the suite", c10),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failing = Vec::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let mut c = Checks::default();
        f(&mut c);
        let pass = c.failed.is_empty();
        if !pass {
            failing.push(n);
        }
        let mut line = format!("criterion {:>2}: {} | {} | {} checks in {:.1}s", n, if pass { "PASS" } else { "FAIL" }, title, c.count, t.elapsed().as_secs_f64());
        if !pass {
            line.push_str(&format!(" | failed: {}", c.failed.join("; ")));
        }
        println!("{}", line);
    }
    let expected: Vec<usize> = EXPECTED_FAILURES.iter().copied().filter(|n| filter.is_empty() || filter.contains(n)).collect();
    if failing == expected {
        println!("acceptance: failing criteria {:?} are exactly the recorded ones", failing);
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {:?}, recorded {:?}", failing, expected);
        ExitCode::FAILURE
    }
}
