//! Exhaustive axiom checks on enumerated states.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use super::engine::{q, Algebra};
use super::lambda::LambdaPoly;
use super::state::{Atom, LPoly, Monomial, State};
use super::text::state_text;
use super::{binomial, factorial};
use crate::scalars::RatFunc;

/// Which states to enumerate: canonical monomials of length ≤ `max_len` in atoms with ∂-power ≤ `max_p`.
#[derive(Clone, Debug)]
pub struct SampleSpec {
    pub max_len: usize,
    pub max_p: u16,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { max_len: 2, max_p: 2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomFailure {
    pub axiom: &'static str,
    pub witness: String,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checked: BTreeMap<&'static str, usize>,
    pub elapsed: BTreeMap<&'static str, Duration>,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, axiom: &'static str, ok: bool, witness: impl FnOnce() -> String) {
        *self.checked.entry(axiom).or_insert(0) += 1;
        if !ok {
            self.failures.push(AxiomFailure { axiom, witness: witness() });
        }
    }
}

pub fn sample_atoms(alg: &Algebra, max_p: u16) -> Vec<Atom> {
    let mut out = Vec::new();
    for (g, gen) in alg.generators().iter().enumerate() {
        for p in 0..=max_p {
            for d in 0..2 {
                out.push(Atom::new(g, gen.parity == 1, d, p));
            }
        }
    }
    out.sort();
    out
}

pub fn sample_monomials(alg: &Algebra, spec: &SampleSpec) -> Vec<Monomial> {
    let atoms = sample_atoms(alg, spec.max_p);
    let mut out: Vec<Monomial> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..atoms.len()).map(|i| vec![i]).collect();
    for _ in 0..spec.max_len {
        let mut next = Vec::new();
        for idx in &frontier {
            out.push(Monomial(idx.iter().map(|&i| atoms[i]).collect()));
            let last = *idx.last().unwrap();
            let start = if atoms[last].odd { last + 1 } else { last };
            for j in start..atoms.len() {
                let mut v = idx.clone();
                v.push(j);
                next.push(v);
            }
        }
        frontier = next;
    }
    out
}

/// f(λ) ↦ f(-λ-∂) with ∂ acting on the coefficients.
fn substitute_neg(alg: &Algebra, f: &LPoly) -> LPoly {
    let mut out = LPoly::zero();
    for (n, s) in f.0.iter().enumerate() {
        let mut d = s.clone();
        for r in 0..=n {
            let c = q(binomial(n, r), BigInt::from(1)) * sign(n % 2 == 1);
            out.add_at(n - r, &d, &c);
            d = alg.apply_partial(&d);
        }
    }
    out.trimmed()
}

fn sign(odd: bool) -> RatFunc {
    if odd {
        -RatFunc::one()
    } else {
        RatFunc::one()
    }
}

/// [A_{-Λ-∇} B] computed from [A_Λ B].
pub fn skew_image(alg: &Algebra, lp: &LambdaPoly) -> LambdaPoly {
    let e = substitute_neg(alg, &lp.even);
    let o = substitute_neg(alg, &lp.chi);
    let mut even = e;
    even.add_scaled(&o.map(|s| alg.apply_d(s)), &-RatFunc::one());
    LambdaPoly::new(even, o.scale(&-RatFunc::one()))
}

/// Two-variable polynomial keyed by (power of λ, power of μ).
type Bi = BTreeMap<(usize, usize), State>;

fn bi_add(m: &mut Bi, k: (usize, usize), s: &State, c: &RatFunc) {
    if s.is_zero() || c.is_zero() {
        return;
    }
    let e = m.entry(k).or_default();
    e.add_scaled(s, c);
    if e.is_zero() {
        m.remove(&k);
    }
}

/// [a_λ [b_μ C]] - (-1)^{p(a)p(b)} [b_μ [a_λ C]] - [[a_λ b]_{λ+μ} C]
fn jacobi_defect(alg: &Algebra, a: &State, b: &State, c: &State) -> Bi {
    let pa = a.parity().unwrap_or(0) == 1;
    let pb = b.parity().unwrap_or(0) == 1;
    let mut m = Bi::new();
    for (j, u) in alg.va_bracket(b, c).0.iter().enumerate() {
        for (i, v) in alg.va_bracket(a, u).0.iter().enumerate() {
            bi_add(&mut m, (i, j), v, &RatFunc::one());
        }
    }
    for (i, u) in alg.va_bracket(a, c).0.iter().enumerate() {
        for (j, v) in alg.va_bracket(b, u).0.iter().enumerate() {
            bi_add(&mut m, (i, j), v, &-sign(pa && pb));
        }
    }
    for (i, w) in alg.va_bracket(a, b).0.iter().enumerate() {
        for (r, v) in alg.va_bracket(w, c).0.iter().enumerate() {
            for k in 0..=r {
                // (λ+μ)^r = Σ C(r,k) λ^k μ^{r-k}
                let cf = -q(binomial(r, k), BigInt::from(1));
                bi_add(&mut m, (i + k, r - k), v, &cf);
            }
        }
    }
    m
}

/// [a_λ :BC:] against :[a_λ B]C: + ±:B[a_λ C]: + ∫_0^λ [[a_λ B]_μ C] dμ.
fn wick_defect(alg: &Algebra, a: &State, b: &State, c: &State) -> LPoly {
    let s = sign(a.parity().unwrap_or(0) == 1 && b.parity().unwrap_or(0) == 1);
    let mut d = alg.va_bracket(a, &alg.normal_product(b, c));
    let ab = alg.va_bracket(a, b);
    for (j, w) in ab.0.iter().enumerate() {
        d.add_at(j, &alg.normal_product(w, c), &-RatFunc::one());
        if !alg.is_classical() {
            for (m, v) in alg.va_bracket(w, c).0.iter().enumerate() {
                d.add_at(j + m + 1, v, &-q(BigInt::from(1), BigInt::from(m + 1)));
            }
        }
    }
    for (j, u) in alg.va_bracket(a, c).0.iter().enumerate() {
        d.add_at(j, &alg.normal_product(b, u), &-s.clone());
    }
    d.trimmed()
}

/// X_(-n-1)Y = :(∂^n X)Y:/n!
fn neg_mode(alg: &Algebra, x: &State, n: usize, y: &State) -> State {
    let mut dx = x.clone();
    for _ in 0..n {
        dx = alg.apply_partial(&dx);
    }
    alg.normal_product(&dx, y).scale(&q(BigInt::from(1), factorial(n)))
}

fn quasi_assoc_defect(alg: &Algebra, a: &State, b: &State, c: &State) -> State {
    let s = sign(a.parity().unwrap_or(0) == 1 && b.parity().unwrap_or(0) == 1);
    let mut d = alg.normal_product(&alg.normal_product(a, b), c);
    d.add_scaled(&alg.normal_product(a, &alg.normal_product(b, c)), &-RatFunc::one());
    if alg.is_classical() {
        return d;
    }
    for (n, x) in alg.va_bracket(b, c).0.iter().enumerate() {
        let bnc = x.scale(&q(factorial(n), BigInt::from(1)));
        d.add_scaled(&neg_mode(alg, a, n + 1, &bnc), &-RatFunc::one());
    }
    for (n, x) in alg.va_bracket(a, c).0.iter().enumerate() {
        let anc = x.scale(&q(factorial(n), BigInt::from(1)));
        d.add_scaled(&neg_mode(alg, b, n + 1, &anc), &-s.clone());
    }
    d
}

fn quasi_comm_defect(alg: &Algebra, a: &State, b: &State) -> State {
    let s = sign(a.parity().unwrap_or(0) == 1 && b.parity().unwrap_or(0) == 1);
    let mut d = alg.normal_product(a, b);
    d.add_scaled(&alg.normal_product(b, a), &-s);
    if alg.is_classical() {
        return d;
    }
    // + Σ_{n≥1} (-∂)^n/n! A_(n-1)B
    for (j, x) in alg.va_bracket(a, b).0.iter().enumerate() {
        let n = j + 1;
        let mut t = x.scale(&q(factorial(j), factorial(n)));
        for _ in 0..n {
            t = alg.apply_partial(&t);
        }
        d.add_scaled(&t, &sign(n % 2 == 1));
    }
    d
}

/// D[A_λ B] - [DA_λ B] - (-1)^{p(A)}[A_λ DB]
fn d_compat_defect(alg: &Algebra, a: &State, b: &State) -> LPoly {
    let pa = a.parity().unwrap_or(0) == 1;
    let mut d = alg.va_bracket(a, b).map(|s| alg.apply_d(s));
    d.add_scaled(&alg.va_bracket(&alg.apply_d(a), b), &-RatFunc::one());
    d.add_scaled(&alg.va_bracket(a, &alg.apply_d(b)), &-sign(pa));
    d.trimmed()
}

/// Checks D² = ∂, super skew-symmetry, D-compatibility, Jacobi, Wick and quasi-(co)associativity.
///
/// Every sampled state meets every sampled atom in both slots for the two-argument axioms.
/// Jacobi and Wick take generator components {x, Dx} in the leading slot(s); products and
/// derivatives there are covered by sesquilinearity and the Wick formula.
pub fn check_axioms(alg: &Algebra, spec: &SampleSpec) -> AxiomReport {
    let mut rep = AxiomReport::default();
    let monos = sample_monomials(alg, spec);
    let states: Vec<State> = monos.iter().map(|m| State::monomial(m.clone(), RatFunc::one())).collect();
    let atoms: Vec<State> = sample_atoms(alg, spec.max_p).into_iter().map(State::atom).collect();
    let gens: Vec<State> = sample_atoms(alg, 0).into_iter().map(State::atom).collect();
    let low: Vec<State> = sample_atoms(alg, 1.min(spec.max_p)).into_iter().map(State::atom).collect();
    let txt = |s: &State| state_text(alg, s);

    let t = Instant::now();
    for s in &states {
        let dd = alg.apply_d(&alg.apply_d(s));
        rep.record("D^2 = d", dd == alg.apply_partial(s), || txt(s));
    }
    rep.elapsed.insert("D^2 = d", t.elapsed());

    let t = Instant::now();
    for a in &states {
        for b in &atoms {
            for (x, y) in [(a, b), (b, a)] {
                let px = x.parity().unwrap_or(0) == 1;
                let py = y.parity().unwrap_or(0) == 1;
                let lhs = alg.lambda_bracket(y, x);
                let rhs = skew_image(alg, &alg.lambda_bracket(x, y)).scale(&sign(px && py));
                rep.record("skew-symmetry", lhs == rhs, || format!("({}, {})", txt(x), txt(y)));
            }
        }
    }
    rep.elapsed.insert("skew-symmetry", t.elapsed());

    let t = Instant::now();
    for a in &states {
        for b in &atoms {
            for (x, y) in [(a, b), (b, a)] {
                rep.record("D-compatibility", d_compat_defect(alg, x, y).is_zero(), || {
                    format!("({}, {})", txt(x), txt(y))
                });
            }
        }
    }
    rep.elapsed.insert("D-compatibility", t.elapsed());

    let t = Instant::now();
    for a in &gens {
        for b in &gens {
            for c in &states {
                rep.record("Jacobi", jacobi_defect(alg, a, b, c).is_empty(), || {
                    format!("({}, {}, {})", txt(a), txt(b), txt(c))
                });
            }
        }
    }
    rep.elapsed.insert("Jacobi", t.elapsed());

    let t = Instant::now();
    for a in &gens {
        for b in &low {
            for c in &low {
                rep.record("Wick", wick_defect(alg, a, b, c).is_zero(), || {
                    format!("({}, {}, {})", txt(a), txt(b), txt(c))
                });
            }
        }
    }
    rep.elapsed.insert("Wick", t.elapsed());

    let t = Instant::now();
    for a in &low {
        for b in &low {
            rep.record("quasi-commutativity", quasi_comm_defect(alg, a, b).is_zero(), || {
                format!("({}, {})", txt(a), txt(b))
            });
            for c in &gens {
                rep.record("quasi-associativity", quasi_assoc_defect(alg, a, b, c).is_zero(), || {
                    format!("({}, {}, {})", txt(a), txt(b), txt(c))
                });
            }
        }
    }
    rep.elapsed.insert("quasi-associativity", t.elapsed());
    rep
}
