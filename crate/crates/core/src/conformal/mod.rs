//! Superconformal vectors: Kac–Todorov ω on the currents, the charged-fermion τ, and the
//! W-vector G = ω + τ + ∂H̄ on the BRST complex.

#[cfg(test)]
mod tests;

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::brst::Complex;
use crate::liesuper::{dual_coxeter, Elem, LieError, LieSuperData};
use crate::scalars::{RatFunc, Rational};
use crate::vacalc::{Algebra, Atom, LambdaPoly, Mode, State, susy_affine};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConformalError {
    #[error("level is critical")]
    CriticalLevel,
    #[error("d_(0|0) does not annihilate the vector")]
    NotClosed,
    #[error("[V_Λ V] is not of superconformal shape: {0}")]
    NotSuperconformal(String),
    #[error("state is not an eigenvector of the λ-linear part")]
    NotEigen,
    #[error("the complex has no ambient model")]
    NoAmbient,
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Clone, Debug)]
pub struct SuperconformalReport {
    pub vector: State,
    pub central_charge: RatFunc,
    /// Closed-form central charge for comparison.
    pub expected_charge: RatFunc,
    /// Conformal weight of each building block, keyed by block generator name.
    pub weight_table: BTreeMap<String, Rational>,
    pub primary_flags: BTreeMap<String, bool>,
    /// λχ coefficient of [G_Λ J_a] for each block, the anomaly of non-primary blocks.
    pub anomalies: BTreeMap<String, RatFunc>,
    pub closed: bool,
}

fn sgn(odd: bool) -> RatFunc {
    if odd {
        -RatFunc::one()
    } else {
        RatFunc::one()
    }
}

fn rf(c: &Rational) -> RatFunc {
    RatFunc::from_rational(c.clone())
}

/// x̄ in an algebra whose first dim(g) generators are the currents.
pub fn current(l: &LieSuperData, x: &Elem) -> State {
    let mut s = State::zero();
    for (i, c) in x.iter().enumerate() {
        if !c.is_zero() {
            s.add_scaled(&State::atom(Atom::new(i, l.parity(i) == 0, 0, 0)), &rf(c));
        }
    }
    s
}

/// ω = (1/κ) Σ (v_i|v_j) :v̄^i Dv̄^j: + (1/3κ²) Σ (−1)^{p(v_j)} (v_i|[v_j,v_r]) :v̄^i v̄^j v̄^r:
///
/// `alg` must carry the currents of `l` as its first generators with [ā_Λ b̄] central term κχ(a|b).
pub fn kac_todorov(alg: &Algebra, l: &LieSuperData, kappa: &RatFunc) -> State {
    let n = l.dim();
    let dual = l.dual_basis();
    let bars: Vec<State> = dual.iter().map(|v| current(l, v)).collect();
    let dbars: Vec<State> = bars.iter().map(|b| alg.apply_d(b)).collect();
    let inv = RatFunc::one() / kappa.clone();
    let inv3 = &(&inv * &inv) * &RatFunc::from_ratio(1, 3);
    let mut omega = State::zero();
    for i in 0..n {
        for j in 0..n {
            let c = l.form_basis(i, j);
            if !c.is_zero() {
                omega.add_scaled(&alg.normal_product(&bars[i], &dbars[j]), &(&inv * &rf(c)));
            }
        }
    }
    for j in 0..n {
        for r in 0..n {
            let br = l.bracket_basis(j, r);
            if br.is_empty() {
                continue;
            }
            let jr = alg.normal_product(&bars[j], &bars[r]);
            for i in 0..n {
                let mut c = Rational::zero();
                for (k, v) in br {
                    c += v * l.form_basis(i, *k);
                }
                if c.is_zero() {
                    continue;
                }
                let coef = &(&inv3 * &sgn(l.parity(j) == 1)) * &rf(&c);
                omega.add_scaled(&alg.normal_product(&bars[i], &jr), &coef);
            }
        }
    }
    omega
}

/// Kac–Todorov vector on the affine algebra at the rational value ν0 of ν.
pub fn kac_todorov_at(l: &LieSuperData, nu0: &Rational) -> Result<(Algebra, State), ConformalError> {
    if nu0.is_zero() {
        return Err(ConformalError::CriticalLevel);
    }
    let kappa = rf(&(nu0 * nu0));
    let alg = susy_affine(l, &kappa, Mode::Quantum);
    let w = kac_todorov(&alg, l, &kappa);
    Ok((alg, w))
}

/// c_k = k·sdim/(k+h∨) + sdim/2 with k + h∨ = ν².
pub fn kac_todorov_charge(l: &LieSuperData) -> Result<RatFunc, ConformalError> {
    let hv = rf(&dual_coxeter(l)?);
    let kh = RatFunc::nu().pow(2);
    let k = &kh - &hv;
    let sdim = RatFunc::from_int(l.sdim());
    Ok(&(&(&k * &sdim) / &kh) + &(&sdim * &RatFunc::from_ratio(1, 2)))
}

/// τ = Σ (−1)^{p(α)} 2m_α :(∂φ_α)φ^α: − Σ (−1)^{p(α)} (1−2m_α) :φ_α ∂φ^α: + Σ :(Dφ_α)(Dφ^α):
///
/// `pairs` lists (φ^α, φ_α, p(α), m_α).
pub fn fermion_vector(alg: &Algebra, pairs: &[(State, State, u8, Rational)]) -> State {
    let mut tau = State::zero();
    for (up, lo, p, m) in pairs {
        let s = sgn(*p == 1);
        let two_m = rf(&(m * Rational::from_integer(2.into())));
        let t1 = alg.normal_product(&alg.apply_partial(lo), up);
        tau.add_scaled(&t1, &(&s * &two_m));
        let t2 = alg.normal_product(lo, &alg.apply_partial(up));
        tau.add_scaled(&t2, &-(&s * &(&RatFunc::one() - &two_m)));
        let t3 = alg.normal_product(&alg.apply_d(lo), &alg.apply_d(up));
        tau.add_scaled(&t3, &RatFunc::one());
    }
    tau
}

/// 12 Σ (−1)^{p(α)} m_α − 3 sdim(n)
pub fn fermion_charge(parities: &[u8], m: &[Rational]) -> RatFunc {
    let mut c = Rational::zero();
    let mut sdim = 0i64;
    for (p, mv) in parities.iter().zip(m) {
        if *p == 1 {
            c -= mv;
            sdim -= 1;
        } else {
            c += mv;
            sdim += 1;
        }
    }
    &rf(&(c * Rational::from_integer(12.into()))) - &RatFunc::from_int(3 * sdim)
}

/// Central charge of V if [V_Λ V] = (2∂+3λ+χD)V + (λ²χ/3)c exactly.
pub fn superconformal_charge(alg: &Algebra, v: &State) -> Result<RatFunc, ConformalError> {
    let lp = alg.lambda_bracket(v, v);
    let shape = LambdaPoly::from_terms(vec![
        (0, false, alg.apply_partial(v).scale(&RatFunc::from_int(2))),
        (1, false, v.scale(&RatFunc::from_int(3))),
        (0, true, alg.apply_d(v)),
    ]);
    let rest = lp.sub(&shape);
    let c3 = rest.central_coeff(2, 1);
    let tail = rest.sub(&LambdaPoly::from_terms(vec![(2, true, State::constant(c3.clone()))]));
    if !tail.is_zero() {
        return Err(ConformalError::NotSuperconformal(crate::vacalc::lambda_text(alg, &tail)));
    }
    Ok(&c3 * &RatFunc::from_int(3))
}

/// Conformal weight Δ of X with respect to G, read from the λ-linear part of [G_Λ X],
/// and whether X is primary (no terms of order Λ² or higher).
pub fn conformal_weight(alg: &Algebra, g: &State, x: &State) -> Result<(Rational, bool), ConformalError> {
    let lp = alg.lambda_bracket(g, x);
    let lin = lp.term(1, 0);
    let delta = if x.is_zero() || lin.is_zero() {
        Rational::zero()
    } else {
        let (m, c) = x.terms().next().unwrap();
        let ratio = &lin.coeff(m) / c;
        if lin != x.scale(&ratio) {
            return Err(ConformalError::NotEigen);
        }
        ratio.as_rational().ok_or(ConformalError::NotEigen)? / Rational::from_integer(2.into())
    };
    let high = lp.even.0.iter().skip(2).all(|s| s.is_zero()) && lp.chi.0.iter().skip(1).all(|s| s.is_zero());
    Ok((delta, high))
}

/// m_α = j_α.
pub fn default_m(cx: &Complex) -> Vec<Rational> {
    (0..cx.m()).map(|a| cx.graded.j(a).clone()).collect()
}

/// Closed form k·sdim/(k+h∨) + sdim/2 + 12Σ(−1)^{p(α)}m_α − 3 sdim(n) − 3(k+h∨)(H|H).
///
/// The last term is the λ²χ part of [∂H̄_Λ ∂H̄]; with (E|F) = 1 it is −6(k+h∨).
pub fn w_charge(cx: &Complex, m: &[Rational]) -> Result<RatFunc, ConformalError> {
    let l = &cx.lie;
    let kt = kac_todorov_charge(l)?;
    let par: Vec<u8> = (0..cx.m()).map(|a| cx.p_alpha(a)).collect();
    let ferm = fermion_charge(&par, m);
    let hh = rf(&l.form(&l.osp.h, &l.osp.h));
    let shift = &(&cx.kappa * &hh) * &RatFunc::from_int(3);
    Ok(&(&kt + &ferm) - &shift)
}

/// The same sum with the last term replaced by −(2/3)(k+h∨), for comparison.
pub fn w_charge_stated(cx: &Complex, m: &[Rational]) -> Result<RatFunc, ConformalError> {
    let kt = kac_todorov_charge(&cx.lie)?;
    let par: Vec<u8> = (0..cx.m()).map(|a| cx.p_alpha(a)).collect();
    let ferm = fermion_charge(&par, m);
    Ok(&(&kt + &ferm) - &(&cx.kappa * &RatFunc::from_ratio(2, 3)))
}

/// G = ω + τ + ∂H̄ in the ambient model, without checks. Only m = j gives a closed G.
pub fn w_state(cx: &Complex, m: &[Rational]) -> Result<State, ConformalError> {
    let amb = cx.ambient.as_ref().ok_or(ConformalError::NoAmbient)?;
    let alg = &amb.space.alg;
    let l = &cx.lie;
    let n = l.dim();
    let nm = cx.m();
    let omega = kac_todorov(alg, l, &cx.kappa);
    let pairs: Vec<_> = (0..nm)
        .map(|a| {
            let p = cx.p_alpha(a);
            let up = State::atom(Atom::new(n + a, p == 0, 0, 0));
            let lo = State::atom(Atom::new(n + nm + a, p == 1, 0, 0));
            (up, lo, p, m[a].clone())
        })
        .collect();
    let tau = fermion_vector(alg, &pairs);
    Ok(&(&omega + &tau) + &alg.apply_partial(&current(l, &l.osp.h)))
}

/// G = ω + τ + ∂H̄ with its checks: closure, superconformal shape and the block weights.
pub fn w_vector(cx: &Complex, m: &[Rational]) -> Result<SuperconformalReport, ConformalError> {
    let amb = cx.ambient.as_ref().ok_or(ConformalError::NoAmbient)?;
    let alg = &amb.space.alg;
    let g = w_state(cx, m)?;
    let closed = amb.space.differential(&g).is_zero();
    if !closed {
        return Err(ConformalError::NotClosed);
    }
    let c = superconformal_charge(alg, &g)?;
    let expected = w_charge(cx, m)?;
    let mut weight_table = BTreeMap::new();
    let mut primary_flags = BTreeMap::new();
    let mut anomalies = BTreeMap::new();
    for (i, j) in amb.blocks.iter().enumerate() {
        let name = cx.blocks.alg.generators()[i].name.clone();
        let (d, p) = conformal_weight(alg, &g, j)?;
        let lp = alg.lambda_bracket(&g, j);
        anomalies.insert(name.clone(), lp.central_coeff(1, 1));
        weight_table.insert(name.clone(), d);
        primary_flags.insert(name, p);
    }
    Ok(SuperconformalReport {
        vector: g,
        central_charge: c,
        expected_charge: expected,
        weight_table,
        primary_flags,
        anomalies,
        closed,
    })
}
