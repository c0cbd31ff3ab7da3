use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use super::{CliError, Report};
use crate::brst::{build_complex, build_complex_with, BrstError, BuildOptions, Complex};
use crate::conformal::{
    conformal_weight, default_m, kac_todorov, kac_todorov_charge, superconformal_charge, w_charge, w_charge_stated,
    w_state, w_vector, ConformalError,
};
use crate::liesuper::LieSuperData;
use crate::scalars::{parse_ratfunc, rat, RatFunc, Rational};
use crate::vacalc::{lambda_text, neveu_schwarz, parse_state, state_text, susy_affine, Atom, Mode, State};
use crate::wfinder::{
    build_ledger, factorization_report, kernel_at_weight, kernels_up_to, verify_ns, FreeField, GeneratorLedger,
    KernelResult,
};

pub(crate) fn kappa(mode: Mode) -> RatFunc {
    match mode {
        Mode::Quantum => RatFunc::nu().pow(2),
        Mode::Classical => RatFunc::one(),
    }
}

pub fn bracket(rep: &mut Report, a: &str, b: &str, target: &str, c: Option<&str>, mode: Mode) -> Result<(), CliError> {
    let alg = if target == "ns" {
        let c = match c {
            Some(s) => parse_ratfunc(s)?,
            None => RatFunc::nu(),
        };
        neveu_schwarz(&c, mode)
    } else {
        if c.is_some() {
            return Err(CliError::Usage("--c applies to ns only".into()));
        }
        susy_affine(&super::load(target)?, &kappa(mode), mode)
    };
    let x = parse_state(&alg, a)?;
    let y = parse_state(&alg, b)?;
    let out = lambda_text(&alg, &alg.lambda_bracket(&x, &y));
    rep.record("bracket", json!({"algebra": target, "a": a, "b": b, "bracket": out}), out.clone());
    Ok(())
}

pub(crate) fn complex(l: &LieSuperData, mode: Mode, ambient: bool) -> Result<Complex, BrstError> {
    build_complex_with(l, &BuildOptions { mode, with_ambient: ambient && mode == Mode::Quantum, ..Default::default() })
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Quantum => "quantum",
        Mode::Classical => "classical",
    }
}

pub fn brst_build(rep: &mut Report, l: &LieSuperData, mode: Mode) -> Result<(), CliError> {
    let cx = match complex(l, mode, false) {
        Ok(cx) => cx,
        Err(e @ BrstError::DifferentialNotSquareZero { .. }) => {
            rep.check("brst", "d^2 = 0 on generators", false, e.to_string());
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    let alg = &cx.blocks.alg;
    rep.record(
        "complex",
        json!({"algebra": l.name, "mode": mode_name(mode), "generators": alg.generators().len(), "kappa": cx.kappa.to_text()}),
        format!("complex {} ({}) | {} generators | k+h = {}", l.name, mode_name(mode), alg.generators().len(), cx.kappa.to_text()),
    );
    for (g, gen) in alg.generators().iter().enumerate() {
        let x = alg.gen(g);
        let charge = cx.charge_of(alg, &x)?;
        let weight = cx.weight_of(alg, &x)?;
        let d = state_text(alg, &cx.differential(&x));
        rep.record(
            "generator",
            json!({"name": gen.name, "parity": gen.parity, "charge": charge, "weight": weight, "d": d}),
            format!("{} | parity {} | charge {} | weight {} | d = {}", gen.name, gen.parity, charge, weight, d),
        );
    }
    rep.check("brst", "d^2 = 0 on generators", true, "");
    Ok(())
}

/// d² on :x y: for `count` seeded picks of block atoms x, y with D-power ≤ 1 and ∂-power ≤ 1.
pub fn square_zero_products(cx: &Complex, count: usize, seed: u64) -> Vec<String> {
    let b = &cx.blocks.alg;
    let n = b.generators().len();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let atom = |rng: &mut StdRng| {
        let g = rng.gen_range(0..n);
        State::atom(Atom::new(g, b.generators()[g].parity == 1, rng.gen_range(0..2), rng.gen_range(0..2)))
    };
    for _ in 0..count {
        let x = atom(&mut rng);
        let y = atom(&mut rng);
        let s = b.normal_product(&x, &y);
        if !cx.differential(&cx.differential(&s)).is_zero() {
            bad.push(state_text(b, &s));
        }
    }
    bad
}

/// Central terms of the classical relations: {J_a Λ J_b} has central part χ(a|b) and
/// {φ^α Λ φ^β} = 0.
fn classical_relations(cx: &Complex) -> Vec<String> {
    let b = &cx.blocks.alg;
    let l = &cx.lie;
    let nj = cx.low.len();
    let mut bad = Vec::new();
    for (i, &a) in cx.low.iter().enumerate() {
        for (j, &c) in cx.low.iter().enumerate() {
            let lp = b.lambda_bracket(&b.gen(i), &b.gen(j));
            let want = RatFunc::from_rational(l.form_basis(a, c).clone());
            if lp.central_coeff(0, 1) != want || !lp.central_coeff(0, 0).is_zero() {
                bad.push(format!("{{J_{} L J_{}}}", l.name_of(a), l.name_of(c)));
            }
        }
    }
    for x in nj..b.generators().len() {
        for y in nj..b.generators().len() {
            if !b.lambda_bracket(&b.gen(x), &b.gen(y)).is_zero() {
                bad.push(format!("{{{} L {}}}", b.generators()[x].name, b.generators()[y].name));
            }
        }
    }
    bad
}

pub(crate) const PRODUCT_SAMPLES: usize = 32;
pub(crate) const PRODUCT_SEED: u64 = 11;

/// Square-zero and structure checks; returns the complex when it could be built.
pub(crate) fn brst_checks(rep: &mut Report, l: &LieSuperData, mode: Mode) -> Result<Option<Complex>, CliError> {
    let cx = match complex(l, mode, true) {
        Ok(cx) => cx,
        Err(e @ BrstError::DifferentialNotSquareZero { .. }) => {
            rep.check("brst", "d^2 = 0 on generators", false, e.to_string());
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    let models = if cx.ambient.is_some() { "blocks and ambient" } else { "blocks" };
    rep.check("brst", "d^2 = 0 on generators", true, models);
    let bad = square_zero_products(&cx, PRODUCT_SAMPLES, PRODUCT_SEED);
    rep.check("brst", "d^2 = 0 on depth-2 products", bad.is_empty(), format!("{} sampled {}", PRODUCT_SAMPLES, bad.join("; ")).trim().to_string());
    match mode {
        Mode::Quantum => {
            let s = cx.verify_structure().expect("quantum complex has an ambient model");
            for id in &s.identities {
                let m = s.mismatches.iter().find(|m| &m.identity == id);
                let detail = m.map(|m| format!("expected {} computed {}", m.expected, m.computed)).unwrap_or_default();
                rep.check("brst", &format!("closed form {}", id), m.is_none(), detail);
            }
        }
        Mode::Classical => {
            let bad = classical_relations(&cx);
            rep.check("brst", "classical relations", bad.is_empty(), bad.join("; "));
        }
    }
    Ok(Some(cx))
}

pub fn brst_check(rep: &mut Report, l: &LieSuperData, mode: Mode) -> Result<(), CliError> {
    brst_checks(rep, l, mode).map(|_| ())
}

/// default m = j with the overrides applied by root vector name.
pub(crate) fn m_values(cx: &Complex, overrides: &[(String, Rational)]) -> Result<Vec<Rational>, CliError> {
    let mut m = default_m(cx);
    for (name, q) in overrides {
        let a = cx
            .graded
            .u_plus
            .iter()
            .position(|&u| cx.lie.name_of(u) == name)
            .ok_or_else(|| CliError::Usage(format!("'{}' is not a positive root vector", name)))?;
        m[a] = q.clone();
    }
    Ok(m)
}

pub(crate) fn w_vector_checks(rep: &mut Report, cx: &Complex, m: &[Rational]) -> Result<(), CliError> {
    let l = &cx.lie;
    let mtext: Vec<String> = cx.graded.u_plus.iter().zip(m).map(|(&u, q)| format!("{}={}", l.name_of(u), q)).collect();
    match w_vector(cx, m) {
        Ok(r) => {
            rep.check("conformal", "d G = 0", r.closed, mtext.join(","));
            let c = r.central_charge.to_text();
            rep.record(
                "central_charge",
                json!({"algebra": l.name, "vector": "G", "charge": c, "m": mtext}),
                format!("central charge {}", c),
            );
            rep.check("conformal", "central charge equals closed form", r.central_charge == r.expected_charge, r.expected_charge.to_text());
            let stated = w_charge_stated(cx, m)?;
            rep.record(
                "stated_charge",
                json!({"charge": stated.to_text(), "agrees": stated == r.central_charge}),
                format!("stated closed form {} | {}", stated.to_text(), if stated == r.central_charge { "agrees" } else { "differs" }),
            );
            for (i, &b) in cx.low.iter().enumerate() {
                let name = &cx.blocks.alg.generators()[i].name;
                let want = rat(1, 2) - cx.graded.grade_of(b);
                let got = &r.weight_table[name];
                rep.check("conformal", &format!("weight of {}", name), got == &want, got.to_string());
            }
        }
        Err(ConformalError::NotClosed) => {
            rep.check("conformal", "d G = 0", false, mtext.join(","));
            let amb = cx.ambient.as_ref().expect("ambient model");
            let g = w_state(cx, m)?;
            let c = superconformal_charge(&amb.space.alg, &g)?;
            rep.record(
                "central_charge",
                json!({"algebra": l.name, "vector": "G (ambient)", "charge": c.to_text(), "m": mtext}),
                format!("ambient central charge {}", c.to_text()),
            );
            rep.check("conformal", "ambient charge equals closed form", c == w_charge(cx, m)?, "");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

pub fn w_vector_cmd(rep: &mut Report, l: &LieSuperData, overrides: &[(String, Rational)]) -> Result<(), CliError> {
    let cx = build_complex(l)?;
    let m = m_values(&cx, overrides)?;
    w_vector_checks(rep, &cx, &m)
}

pub fn kac_todorov_cmd(rep: &mut Report, l: &LieSuperData) -> Result<(), CliError> {
    let k = kappa(Mode::Quantum);
    let alg = susy_affine(l, &k, Mode::Quantum);
    let w = kac_todorov(&alg, l, &k);
    let want = kac_todorov_charge(l)?;
    match superconformal_charge(&alg, &w) {
        Ok(c) => {
            rep.record("central_charge", json!({"algebra": l.name, "vector": "omega", "charge": c.to_text()}), format!("central charge {}", c.to_text()));
            rep.check("kac-todorov", "central charge equals k sdim/(k+h) + sdim/2", c == want, want.to_text());
        }
        Err(e) => rep.check("kac-todorov", "superconformal shape", false, e.to_string()),
    }
    for i in 0..l.dim() {
        let (d, primary) = conformal_weight(&alg, &w, &alg.gen(i))?;
        rep.check("kac-todorov", &format!("{} primary of weight 1/2", l.name_of(i)), primary && d == rat(1, 2), d.to_string());
    }
    Ok(())
}

fn dims_at(res: &KernelResult, pts: &[Rational]) -> BTreeMap<String, usize> {
    pts.iter().filter_map(|q| res.dim_kernel_at(q).ok().map(|d| (q.to_string(), d))).collect()
}

/// One record per weight, plus the verification and census checks.
pub(crate) fn kernel_report(
    rep: &mut Report,
    ff: &FreeField,
    res: &[KernelResult],
    pts: &[Rational],
) -> GeneratorLedger {
    let led = build_ledger(ff, res);
    for r in res {
        let w = r.weight();
        let new: Vec<String> = led.entries.iter().filter(|e| &e.weight == w).map(|e| ff.text(&e.state)).collect();
        let basis: Vec<String> = r.kernel.iter().map(|k| ff.text(k)).collect();
        let spec = dims_at(r, pts);
        let mut text = format!("weight {} | space {} | kernel {} | new {}", w, r.dim_space(), r.dim_kernel(), new.len());
        for (q, d) in &spec {
            let jump = if *d != r.dim_kernel() { " (jumps)" } else { "" };
            text.push_str(&format!(" | v={}: {}{}", q, d, jump));
        }
        for b in &basis {
            text.push_str(&format!("\n  kernel: {}", b));
        }
        for g in &new {
            text.push_str(&format!("\n  new: {}", g));
        }
        rep.record(
            "kernel",
            json!({
                "algebra": ff.lie.name, "weight": w.to_string(), "dim_space": r.dim_space(), "dim_kernel": r.dim_kernel(),
                "new_generators": new, "basis": basis, "operators": r.operators, "specializations": spec,
            }),
            text,
        );
        let ok = r.verify(ff).unwrap_or(false);
        rep.check("kernel", &format!("screenings vanish at weight {}", w), ok, "");
    }
    let census: Vec<String> = led.census.iter().map(|(w, n)| format!("{}:{}", w, n)).collect();
    let found: Vec<String> = led.new_counts.iter().filter(|(_, &n)| n > 0).map(|(w, n)| format!("{}:{}", w, n)).collect();
    let detail = format!("found {{{}}} census {{{}}}", found.join(", "), census.join(", "));
    rep.check("kernel", "new generators match ker(ad f) census", led.matches_census().is_ok(), detail);
    led
}

pub fn kernel(rep: &mut Report, l: &LieSuperData, w: &Rational, pts: &[Rational]) -> Result<(), CliError> {
    let ff = FreeField::new(l)?;
    let res = kernels_up_to(&ff, w)?;
    kernel_report(rep, &ff, &res, pts);
    for r in &res {
        for q in pts {
            if let Err(e) = r.dim_kernel_at(q) {
                rep.record("pole", json!({"weight": r.weight().to_string(), "at": q.to_string()}), format!("weight {}: {}", r.weight(), e));
            }
        }
    }
    Ok(())
}

/// NS fit of the weight-3/2 ledger generator, cross-checked against the BRST charge.
pub(crate) fn ns_checks(rep: &mut Report, ff: &FreeField, led: &GeneratorLedger, cx: Option<&Complex>) -> Result<(), CliError> {
    let gens: Vec<&State> = led.entries.iter().filter(|e| e.weight == rat(3, 2)).map(|e| &e.state).collect();
    if gens.len() != 1 {
        rep.check("ns", "single generator at weight 3/2", false, format!("{} found", gens.len()));
        return Ok(());
    }
    match verify_ns(&ff.alg, gens[0]) {
        Ok(ns) => {
            let c = ns.charge.to_text();
            rep.check("ns", "self-bracket has Neveu-Schwarz shape", true, format!("scale {}", ns.scale.to_text()));
            rep.record("central_charge", json!({"algebra": ff.lie.name, "vector": "G (kernel)", "charge": c}), format!("central charge {}", c));
            if let Some(cx) = cx {
                let want = w_charge(cx, &default_m(cx))?;
                rep.check("ns", "charge equals the BRST w-vector charge", ns.charge == want, want.to_text());
            }
        }
        Err(e) => rep.check("ns", "self-bracket has Neveu-Schwarz shape", false, e.to_string()),
    }
    Ok(())
}

pub fn ns_check(rep: &mut Report, l: &LieSuperData) -> Result<(), CliError> {
    let ff = FreeField::new(l)?;
    let res: Vec<KernelResult> = [rat(1, 2), rat(1, 1), rat(3, 2)]
        .iter()
        .map(|w| kernel_at_weight(&ff, w))
        .collect::<Result<_, _>>()?;
    let led = build_ledger(&ff, &res);
    let cx = build_complex(l)?;
    ns_checks(rep, &ff, &led, Some(&cx))
}

pub fn factorize(rep: &mut Report, l: &LieSuperData) -> Result<(), CliError> {
    let r = factorization_report(l)?;
    rep.record(
        "factorization",
        json!({"algebra": r.algebra, "simple_roots": r.chain}),
        format!("factorization {}\nsimple roots: {}", r.algebra, r.chain.join(" - ")),
    );
    for b in &r.blocks {
        rep.record(
            "block",
            json!({
                "roots": b.roots, "factor": format!("W({})", b.factor), "perp_rank": b.perp_rank,
                "perp_states": b.perp_states, "perp_killed": b.perp_killed,
            }),
            format!(
                "block {}: W({}) | perp rank {} | perp states {} | killed {}",
                b.roots.join(","),
                b.factor,
                b.perp_rank,
                b.perp_states,
                if b.perp_killed { "yes" } else { "no" }
            ),
        );
        rep.check("factorization", &format!("block {} kills its perpendicular Heisenberg", b.roots.join(",")), b.perp_killed, "");
    }
    Ok(())
}
