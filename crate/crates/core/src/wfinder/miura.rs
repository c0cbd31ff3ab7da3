use super::{FreeField, KernelResult, WfError};
use crate::brst::Complex;
use num_traits::Signed;

use crate::scalars::{rat, Matrix, RatFunc};
use crate::vacalc::{state_text, Atom, Monomial, State};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MiuraReport {
    pub checked: usize,
    /// "<root>: <state>" for every kernel vector with a nonzero residue.
    pub obstructions: Vec<String>,
}

impl MiuraReport {
    pub fn passed(&self) -> bool {
        self.obstructions.is_empty()
    }
}

/// b̄_h ↦ J_h/ν: a π̂ state as a state of the grade-zero currents in the block algebra.
fn to_block(ff: &FreeField, cx: &Complex, x: &State) -> State {
    let alg = &cx.blocks.alg;
    let inv = RatFunc::one() / RatFunc::nu();
    let mut out = State::zero();
    for (mono, c) in x.terms() {
        let factors: Vec<State> = mono
            .atoms()
            .iter()
            .map(|a| {
                let g = cx.j_index(ff.lie.cartan[a.gen as usize]).expect("cartan is grade zero");
                State::atom(Atom::new(g, true, a.d, a.p))
            })
            .collect();
        out.add_scaled(&alg.product(&factors), &(c * &inv.pow(mono.len() as u32)));
    }
    out
}

fn rank(states: &[State]) -> usize {
    let mut monos: Vec<Monomial> = states.iter().flat_map(|s| s.terms().map(|(m, _)| m.clone())).collect();
    monos.sort();
    monos.dedup();
    if monos.is_empty() {
        return 0;
    }
    Matrix::from_rows(states.iter().map(|s| monos.iter().map(|m| s.coeff(m)).collect()).collect()).rank()
}

/// φ^α_(0|0) applied to the block image of `x`, reduced modulo the d_st-image of :X J_{u^α}:
/// with X a grade-zero current polynomial. Returns the residue when it is nonzero.
/// `root` is the basis index of u_α.
pub fn e1_residue(ff: &FreeField, cx: &Complex, x: &State, root: usize) -> Result<Option<State>, WfError> {
    let alg = &cx.blocks.alg;
    let al = cx.graded.u_plus.iter().position(|&u| u == root).expect("positive root vector");
    let r = alg.nth_product(&cx.phi(al), &to_block(ff, cx, x), 0, 0);
    if r.is_zero() {
        return Ok(None);
    }
    // d_st anticommutes with D, so D^k of the relation lies in the image as well. The relation
    // has weight 1 and φ_(0|0) preserves weight, so X has weight Δ − 1 − k/2.
    let mut rel = cx.blocks.d_st.apply(alg, &cx.block_j(&cx.graded.u_dual[al])?);
    let mut wx = ff.to_fock(x).max_weight() - rat(1, 1);
    let mut span = Vec::new();
    while !wx.is_negative() {
        for m in ff.basis(&wx)?.monomials {
            let xm = to_block(ff, cx, &State::monomial(m, RatFunc::one()));
            let y = alg.normal_product(&xm, &rel);
            if !y.is_zero() {
                span.push(y);
            }
        }
        rel = alg.apply_d(&rel);
        wx -= rat(1, 2);
    }
    let base = rank(&span);
    span.push(r.clone());
    Ok(if rank(&span) == base { None } else { Some(r) })
}

/// Every kernel vector, read through the Miura map, is closed in the E₁ model.
pub fn miura_cross_check(ff: &FreeField, cx: &Complex, results: &[KernelResult]) -> Result<MiuraReport, WfError> {
    let mut rep = MiuraReport::default();
    for res in results {
        for k in &res.kernel {
            for &u in &ff.roots {
                rep.checked += 1;
                if let Some(r) = e1_residue(ff, cx, k, u)? {
                    rep.obstructions.push(format!("{}: {}", ff.lie.name_of(u), state_text(&cx.blocks.alg, &r)));
                }
            }
        }
    }
    Ok(rep)
}
