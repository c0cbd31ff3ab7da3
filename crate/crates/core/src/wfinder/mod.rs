//! Screening kernels in the SUSY Heisenberg algebra and the W-algebra generators they contain.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::brst::BrstError;
use crate::conformal::{superconformal_charge, ConformalError};
use crate::fock::{combo_action, fock_from_state, FockError, FockState, HMode, Heisenberg, ScreeningOp};
use crate::liesuper::{grade, ker_ad_f_census, root_combinatorics, GradedBases, LieError, LieSuperData};
use crate::scalars::{rat, Matrix, RatFunc, Rational, ScalarError};
use crate::vacalc::{state_text, Algebra, Atom, Monomial, State};

mod factor;
mod miura;

pub use factor::{factorization_report, Block, FactorizationReport};
pub use miura::{e1_residue, miura_cross_check, MiuraReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WfError {
    #[error("weight {0} is not a nonnegative half-integer")]
    BadWeight(String),
    #[error("generator {0} has nonpositive weight")]
    ZeroWeightGenerator(String),
    #[error("grade-zero part is larger than the cartan subalgebra ({0})")]
    NotCartanLevi(String),
    #[error("not a principal embedding with an all-odd simple system: {0}")]
    NotPrincipalOddSystem(String),
    #[error("new generators at weight {weight}: found {found}, ker(ad f) predicts {expected}")]
    CensusMismatch { weight: Rational, expected: usize, found: usize },
    #[error("self-bracket is not of Neveu-Schwarz shape: {0}")]
    NotNSShape(String),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Brst(#[from] BrstError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn check_weight(w: &Rational) -> Result<(), WfError> {
    let twice = w * rat(2, 1);
    if w.is_negative() || !twice.is_integer() {
        return Err(WfError::BadWeight(w.to_string()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightBasis {
    pub weight: Rational,
    pub monomials: Vec<Monomial>,
}

impl WeightBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn state(&self, coords: &[RatFunc]) -> State {
        let mut s = State::zero();
        for (m, c) in self.monomials.iter().zip(coords) {
            s.add_term(m.clone(), c);
        }
        s
    }

    pub fn coords(&self, s: &State) -> Vec<RatFunc> {
        self.monomials.iter().map(|m| s.coeff(m)).collect()
    }
}

/// Canonical monomials of weight `w` in a freely generated algebra. Each generator has the given
/// weight, D adds 1/2 and ∂ adds 1.
pub fn weight_basis(alg: &Algebra, gen_weights: &[Rational], w: &Rational) -> Result<WeightBasis, WfError> {
    check_weight(w)?;
    let half = rat(1, 2);
    let mut atoms: Vec<(Atom, Rational)> = Vec::new();
    for (g, gw) in gen_weights.iter().enumerate() {
        if !gw.is_positive() {
            return Err(WfError::ZeroWeightGenerator(alg.generators()[g].name.clone()));
        }
        let odd = alg.generators()[g].parity == 1;
        let mut p = 0u16;
        loop {
            let base = gw + Rational::from_integer(p.into());
            if base > *w {
                break;
            }
            atoms.push((Atom::new(g, odd, 0, p), base.clone()));
            if &base + &half <= *w {
                atoms.push((Atom::new(g, odd, 1, p), &base + &half));
            }
            p += 1;
        }
    }
    atoms.sort();
    let mut out = Vec::new();
    fn go(atoms: &[(Atom, Rational)], start: usize, left: &Rational, cur: &mut Vec<Atom>, out: &mut Vec<Monomial>) {
        if left.is_zero() {
            out.push(Monomial(cur.clone()));
            return;
        }
        for k in start..atoms.len() {
            let (a, aw) = &atoms[k];
            if aw > left {
                continue;
            }
            cur.push(*a);
            go(atoms, if a.odd { k + 1 } else { k }, &(left - aw), cur, out);
            cur.pop();
        }
    }
    go(&atoms, 0, w, &mut Vec::new(), &mut out);
    out.sort();
    Ok(WeightBasis { weight: w.clone(), monomials: out })
}

/// The free field side for 𝔤₀ = 𝔥: π̂ on the cartan subalgebra with one screening per simple root.
pub struct FreeField {
    pub lie: LieSuperData,
    pub graded: GradedBases,
    pub heis: Heisenberg,
    pub alg: Algebra,
    /// Basis indices of the screened root vectors, parallel to `screenings`.
    pub roots: Vec<usize>,
    pub screenings: Vec<ScreeningOp>,
}

impl FreeField {
    pub fn new(l: &LieSuperData) -> Result<Self, WfError> {
        let graded = grade(l)?;
        let extra: Vec<&str> = (0..l.dim())
            .filter(|&i| graded.grading[i].is_zero() && !l.cartan.contains(&i))
            .map(|i| l.name_of(i))
            .collect();
        if !extra.is_empty() {
            return Err(WfError::NotCartanLevi(extra.join(" ")));
        }
        let heis = Heisenberg::of_cartan(l);
        let alg = heis.algebra();
        let rc = root_combinatorics(l, &graded);
        let mut roots = Vec::new();
        let mut screenings = Vec::new();
        for &a in &rc.i0 {
            let u = graded.u_plus[a];
            if l.form(&l.osp.f, &l.basis_elem(u)).is_zero() {
                continue;
            }
            roots.push(u);
            screenings.push(ScreeningOp::for_root(l, &heis, u));
        }
        Ok(FreeField { lie: l.clone(), graded, heis, alg, roots, screenings })
    }

    pub fn gen_weights(&self) -> Vec<Rational> {
        vec![rat(1, 2); self.heis.rank()]
    }

    pub fn basis(&self, w: &Rational) -> Result<WeightBasis, WfError> {
        weight_basis(&self.alg, &self.gen_weights(), w)
    }

    pub fn to_fock(&self, s: &State) -> FockState {
        fock_from_state(&self.heis, s)
    }

    /// Images of a homogeneous state under every screening.
    pub fn screen(&self, s: &State) -> Result<Vec<FockState>, WfError> {
        let f = self.to_fock(s);
        self.screenings.iter().map(|op| Ok(op.apply(&self.heis, &f)?)).collect()
    }

    pub fn annihilated(&self, s: &State) -> Result<bool, WfError> {
        Ok(self.screen(s)?.iter().all(|x| x.is_zero()))
    }

    pub fn text(&self, s: &State) -> String {
        state_text(&self.alg, s)
    }
}

#[derive(Debug, Clone)]
pub struct KernelResult {
    pub basis: WeightBasis,
    /// Root vector names of the operators, parallel to `images`.
    pub operators: Vec<String>,
    /// Matrix of each screening: rows are target monomials, columns the basis.
    pub images: Vec<Matrix>,
    pub kernel: Vec<State>,
}

impl KernelResult {
    pub fn weight(&self) -> &Rational {
        &self.basis.weight
    }

    pub fn dim_space(&self) -> usize {
        self.basis.dim()
    }

    pub fn dim_kernel(&self) -> usize {
        self.kernel.len()
    }

    pub fn stacked(&self) -> Matrix {
        let mut m = Matrix::zeros(0, self.dim_space());
        for x in &self.images {
            m = m.vstack(x);
        }
        m
    }

    /// Re-applies every screening to every kernel vector.
    pub fn verify(&self, ff: &FreeField) -> Result<bool, WfError> {
        for k in &self.kernel {
            if !ff.annihilated(k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Kernel dimension after setting ν to `at`.
    pub fn dim_kernel_at(&self, at: &Rational) -> Result<usize, ScalarError> {
        Ok(self.dim_space() - self.stacked().evaluate(at)?.rank())
    }
}

pub fn kernel_at_weight(ff: &FreeField, w: &Rational) -> Result<KernelResult, WfError> {
    kernel_on_basis(ff, ff.basis(w)?)
}

/// Joint kernel on a given (possibly reordered) monomial basis.
pub fn kernel_on_basis(ff: &FreeField, basis: WeightBasis) -> Result<KernelResult, WfError> {
    let n = basis.dim();
    let columns: Vec<Vec<FockState>> = basis
        .monomials
        .iter()
        .map(|m| ff.screen(&State::monomial(m.clone(), RatFunc::one())))
        .collect::<Result<_, _>>()?;
    let mut images = Vec::new();
    for (k, _) in ff.screenings.iter().enumerate() {
        let targets: BTreeSet<Vec<HMode>> =
            columns.iter().flat_map(|c| c[k].terms().map(|(m, _)| m.clone())).collect();
        let rows: Vec<Vec<RatFunc>> = targets
            .iter()
            .map(|t| columns.iter().map(|c| c[k].coeff(t)).collect())
            .collect();
        images.push(if rows.is_empty() { Matrix::zeros(0, n) } else { Matrix::from_rows(rows) });
    }
    let mut stacked = Matrix::zeros(0, n);
    for x in &images {
        stacked = stacked.vstack(x);
    }
    let kernel = if stacked.rows() == 0 {
        (0..n)
            .map(|i| State::monomial(basis.monomials[i].clone(), RatFunc::one()))
            .collect()
    } else {
        stacked.kernel_basis().iter().map(|v| basis.state(v)).collect()
    };
    let operators = ff.roots.iter().map(|&u| ff.lie.name_of(u).to_string()).collect();
    Ok(KernelResult { basis, operators, images, kernel })
}

/// Kernels at Δ = 0, 1/2, …, `max`.
pub fn kernels_up_to(ff: &FreeField, max: &Rational) -> Result<Vec<KernelResult>, WfError> {
    check_weight(max)?;
    let mut out = Vec::new();
    let mut w = Rational::zero();
    while w <= *max {
        out.push(kernel_at_weight(ff, &w)?);
        w += rat(1, 2);
    }
    Ok(out)
}

/// `count` distinct rationals p/q, |p| ≤ 10⁴, q ≤ 10³, at which no entry of any matrix has a pole
/// and ν ≠ 0. Seeded, so the choice is reproducible. Special levels tend to be rationals of small
/// height (sl(2|1) at ν = ±1 gains a kernel vector at weight 2), so the range is wide.
pub fn sample_points(results: &[KernelResult], count: usize, seed: u64) -> Vec<Rational> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out: Vec<Rational> = Vec::new();
    while out.len() < count {
        let q = rat(rng.gen_range(-10_000..=10_000), rng.gen_range(1..=1000));
        if q.is_zero() || out.contains(&q) {
            continue;
        }
        if results.iter().all(|r| r.stacked().evaluate(&q).is_ok()) {
            out.push(q);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub weight: Rational,
    pub state: State,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorLedger {
    pub entries: Vec<LedgerEntry>,
    /// New generators per weight, for every weight that was scanned.
    pub new_counts: BTreeMap<Rational, usize>,
    /// ker(ad f) census restricted to the scanned weights.
    pub census: BTreeMap<Rational, usize>,
}

impl GeneratorLedger {
    pub fn matches_census(&self) -> Result<(), WfError> {
        for (w, &found) in &self.new_counts {
            let expected = self.census.get(w).copied().unwrap_or(0);
            if found != expected {
                return Err(WfError::CensusMismatch { weight: w.clone(), expected, found });
            }
        }
        Ok(())
    }
}

/// States ∂^p D^d g for ledger entries g, with their weights, up to weight `w`.
fn composites(alg: &Algebra, entries: &[LedgerEntry], w: &Rational) -> Vec<(State, Rational)> {
    let mut out = Vec::new();
    for e in entries {
        let mut base = e.state.clone();
        let mut bw = e.weight.clone();
        while bw <= *w {
            out.push((base.clone(), bw.clone()));
            let d = alg.apply_d(&base);
            let dw = &bw + rat(1, 2);
            if dw <= *w {
                out.push((d, dw));
            }
            base = alg.apply_partial(&base);
            bw += Rational::one();
        }
    }
    out
}

/// Normally ordered products of derivatives of ledger entries, of total weight `w`.
pub fn product_span(alg: &Algebra, entries: &[LedgerEntry], w: &Rational) -> Vec<State> {
    let comps = composites(alg, entries, w);
    let mut out = Vec::new();
    fn go(
        alg: &Algebra,
        comps: &[(State, Rational)],
        start: usize,
        left: &Rational,
        cur: &mut Vec<State>,
        out: &mut Vec<State>,
    ) {
        if left.is_zero() {
            if !cur.is_empty() {
                out.push(alg.product(cur));
            }
            return;
        }
        for k in start..comps.len() {
            if comps[k].1 > *left {
                continue;
            }
            cur.push(comps[k].0.clone());
            go(alg, comps, k, &(left - &comps[k].1), cur, out);
            cur.pop();
        }
    }
    go(alg, &comps, 0, w, &mut Vec::new(), &mut out);
    out
}

fn rank_of(basis: &WeightBasis, states: &[State]) -> usize {
    if states.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<RatFunc>> = states.iter().map(|s| basis.coords(s)).collect();
    Matrix::from_rows(rows).rank()
}

/// Scales so that the coefficient of the last monomial (in basis order) is 1.
fn normalize(basis: &WeightBasis, s: &State) -> State {
    let lead = basis.monomials.iter().rev().map(|m| s.coeff(m)).find(|c| !c.is_zero());
    match lead {
        Some(c) => s.scale(&(RatFunc::one() / c)),
        None => s.clone(),
    }
}

/// Builds the ledger without judging it against the census.
pub fn build_ledger(ff: &FreeField, results: &[KernelResult]) -> GeneratorLedger {
    let mut entries: Vec<LedgerEntry> = Vec::new();
    let mut new_counts = BTreeMap::new();
    let mut top = Rational::zero();
    for r in results {
        let w = r.weight().clone();
        if w > top {
            top = w.clone();
        }
        if w.is_zero() {
            new_counts.insert(w, 0);
            continue;
        }
        let mut span = product_span(&ff.alg, &entries, &w);
        let mut rank = rank_of(&r.basis, &span);
        let mut found = Vec::new();
        for k in &r.kernel {
            span.push(k.clone());
            let next = rank_of(&r.basis, &span);
            if next > rank {
                rank = next;
                found.push(normalize(&r.basis, k));
            } else {
                span.pop();
            }
        }
        new_counts.insert(w.clone(), found.len());
        entries.extend(found.into_iter().map(|state| LedgerEntry { weight: w.clone(), state }));
    }
    let census = ker_ad_f_census(&ff.lie, &ff.graded).into_iter().filter(|(w, _)| *w <= top).collect();
    GeneratorLedger { entries, new_counts, census }
}

/// Ledger of new generators per weight, checked against the ker(ad f) census.
pub fn extract_generators(ff: &FreeField, results: &[KernelResult]) -> Result<GeneratorLedger, WfError> {
    let ledger = build_ledger(ff, results);
    ledger.matches_census()?;
    Ok(ledger)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NsReport {
    /// G = input / scale satisfies the Neveu–Schwarz bracket exactly.
    pub scale: RatFunc,
    pub vector: State,
    pub charge: RatFunc,
}

impl NsReport {
    pub fn charge_at(&self, at: &Rational) -> Result<Rational, ScalarError> {
        self.charge.evaluate(at)
    }
}

/// Fits [X_Λ X] = s(2∂+3λ+χD)X + (λ²χ/3)c' and returns G = X/s with its central charge.
pub fn verify_ns(alg: &Algebra, x: &State) -> Result<NsReport, WfError> {
    let lp = alg.lambda_bracket(x, x);
    let lin = lp.term(1, 0);
    let (m, c) = x.terms().next().ok_or_else(|| WfError::NotNSShape("zero vector".into()))?;
    let three = RatFunc::from_int(3);
    let scale = &lin.coeff(m) / &(&three * c);
    if scale.is_zero() {
        return Err(WfError::NotNSShape(state_text(alg, &lin)));
    }
    let vector = x.scale(&(RatFunc::one() / scale.clone()));
    let charge = superconformal_charge(alg, &vector).map_err(|e| match e {
        ConformalError::NotSuperconformal(t) => WfError::NotNSShape(t),
        other => WfError::NotNSShape(other.to_string()),
    })?;
    Ok(NsReport { scale, vector, charge })
}

/// Modes of a vector of 𝔥 in cartan coordinates acting on the vacuum module.
pub(crate) fn perp_state(h: &Heisenberg, dirs: &[Vec<Rational>], mono: &[HMode]) -> FockState {
    let mut v = FockState::vacuum(h.rank());
    for x in mono.iter().rev() {
        v = combo_action(h, x.kind, &dirs[x.i], x.n, &v);
    }
    v
}
