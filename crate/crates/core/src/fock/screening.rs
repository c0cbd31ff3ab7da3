use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{combo_action, mode_action, sign, FockError, FockState, HMode, Heisenberg, Kind};
use crate::liesuper::{coroot, LieSuperData};
use crate::scalars::{RatFunc, Rational};

/// ∫ e^{−(1/ν)∫α(Z)} dZ : π̂ → π̂_{−α/ν} for a root α.
#[derive(Clone, Debug)]
pub struct ScreeningOp {
    pub root: String,
    /// h_α in the coordinates of the Heisenberg basis, (h_α|h) = α(h).
    pub h_alpha: Vec<Rational>,
    /// (α|α)
    pub norm: Rational,
    /// Parity of s_{−α/ν}, which is p(u_α) + 1.
    pub odd: bool,
    /// Replaces B(Z)_+ by −B(Z)_+. Fault injection only.
    pub flip_b_plus: bool,
}

type ZSeries = BTreeMap<i64, FockState>;

fn add_at(z: &mut ZSeries, p: i64, s: &FockState, c: &RatFunc) {
    if s.is_zero() || c.is_zero() {
        return;
    }
    let e = z.entry(p).or_insert_with(|| s.zero_like());
    e.add_scaled(s, c);
    if e.is_zero() {
        z.remove(&p);
    }
}

fn add_series(acc: &mut ZSeries, x: &ZSeries, c: &RatFunc) {
    for (p, s) in x {
        add_at(acc, *p, s, c);
    }
}

impl ScreeningOp {
    pub fn new(root: impl Into<String>, h: &Heisenberg, h_alpha: Vec<Rational>, odd: bool) -> Self {
        let norm = h.pair(&h_alpha, &h_alpha);
        ScreeningOp { root: root.into(), h_alpha, norm, odd, flip_b_plus: false }
    }

    /// The operator for the root of the basis element `u` of `l`, on the cartan Heisenberg algebra.
    pub fn for_root(l: &LieSuperData, h: &Heisenberg, u: usize) -> Self {
        let full = coroot(l, &l.roots[&u]);
        let coords = l.cartan.iter().map(|&c| full[c].clone()).collect();
        Self::new(l.name_of(u), h, coords, l.parity(u) == 0)
    }

    fn inv_nu() -> RatFunc {
        RatFunc::one() / RatFunc::nu()
    }

    /// Highest weight −α/ν of the target, on the Heisenberg basis.
    pub fn target_hw(&self, h: &Heisenberg) -> Vec<RatFunc> {
        (0..h.rank())
            .map(|i| {
                let mut e = vec![Rational::zero(); h.rank()];
                e[i] = Rational::one();
                -(&Self::inv_nu() * &RatFunc::from_rational(h.pair(&self.h_alpha, &e)))
            })
            .collect()
    }

    pub fn target_label(&self) -> String {
        format!("-{}/v", self.root)
    }

    fn alpha_mode(&self, h: &Heisenberg, kind: Kind, n: i64, s: &FockState) -> FockState {
        combo_action(h, kind, &self.h_alpha, n, s)
    }

    /// exp(B(Z)_-), B(Z)_- = (1/ν) Σ_{k>0} z^{−k}/k α_(k|0)
    fn exp_b_minus(&self, h: &Heisenberg, x: &ZSeries, order: usize) -> ZSeries {
        let mut out = x.clone();
        let mut term = x.clone();
        for r in 1..=order {
            let mut next = ZSeries::new();
            for (p, s) in &term {
                for k in 1..=order as i64 {
                    let c = &Self::inv_nu() * &RatFunc::from_ratio(1, k * r as i64);
                    add_at(&mut next, p - k, &self.alpha_mode(h, Kind::Db, k, s), &c);
                }
            }
            if next.is_empty() {
                break;
            }
            add_series(&mut out, &next, &RatFunc::one());
            term = next;
        }
        out
    }

    /// exp(B(Z)_+), B(Z)_+ = (1/ν) Σ_{k<0} z^{−k}/k α_(k|0), keeping powers ≤ `cap`.
    fn exp_b_plus(&self, h: &Heisenberg, x: &ZSeries, order: usize, cap: i64) -> ZSeries {
        let flip = if self.flip_b_plus { -RatFunc::one() } else { RatFunc::one() };
        let mut out = x.clone();
        let mut term = x.clone();
        for r in 1..=order {
            let mut next = ZSeries::new();
            for (p, s) in &term {
                for k in 1..=order as i64 {
                    if p + k > cap {
                        break;
                    }
                    let c = &(&Self::inv_nu() * &RatFunc::from_ratio(-1, k * r as i64)) * &flip;
                    add_at(&mut next, p + k, &self.alpha_mode(h, Kind::Db, -k, s), &c);
                }
            }
            if next.is_empty() {
                break;
            }
            add_series(&mut out, &next, &RatFunc::one());
            term = next;
        }
        out
    }

    /// A(Z)_- without θ: −(1/ν) Σ_{k≥0} z^{−k−1} α_(k|1)
    fn a_minus(&self, h: &Heisenberg, x: &ZSeries, order: usize) -> ZSeries {
        let mut out = ZSeries::new();
        for (p, s) in x {
            for k in 0..=order as i64 {
                add_at(&mut out, p - k - 1, &self.alpha_mode(h, Kind::B, k, s), &-Self::inv_nu());
            }
        }
        out
    }

    /// A(Z)_+ without θ: −(1/ν) Σ_{k<0} z^{−k−1} α_(k|1), keeping powers ≤ `cap`.
    fn a_plus(&self, h: &Heisenberg, x: &ZSeries, order: usize, cap: i64) -> ZSeries {
        let mut out = ZSeries::new();
        for (p, s) in x {
            for k in 1..=order as i64 {
                if p + k - 1 > cap {
                    break;
                }
                add_at(&mut out, p + k - 1, &self.alpha_mode(h, Kind::B, -k, s), &-Self::inv_nu());
            }
        }
        out
    }

    /// s_{−α/ν} applied to a vacuum-module state: modes pass through with the Koszul sign.
    fn shift(&self, h: &Heisenberg, m: &FockState) -> FockState {
        let mut out = FockState::highest(self.target_hw(h), self.odd, self.target_label()).zero_like();
        for (mono, c) in m.terms() {
            let odd_modes = mono.iter().filter(|a| a.odd()).count() % 2 == 1;
            out.add_term(mono.clone(), &(c * &sign(self.odd && odd_modes)));
        }
        out
    }

    /// Y_{n|i}(m): the coefficient of Z^{n|i} = z^n θ^i in e^{−(1/ν)∫α(Z)} m, θ moved to the left.
    /// The exponentials and mode sums are cut at `order`. `m` must lie in the vacuum module.
    pub fn coefficient(&self, h: &Heisenberg, m: &FockState, n: i64, theta: bool, order: usize) -> FockState {
        let mut start = ZSeries::new();
        if !m.is_zero() {
            start.insert(0, m.clone());
        }
        let picked = if !theta {
            let e = self.exp_b_plus(h, &self.exp_b_minus(h, &start, order), order, n);
            e.get(&n).cloned()
        } else {
            let e = self.exp_b_minus(h, &start, order);
            let left = self.a_plus(h, &self.exp_b_plus(h, &e, order, n), order, n);
            let am = self.a_minus(h, &start, order);
            let right = self.exp_b_plus(h, &self.exp_b_minus(h, &am, order), order, n);
            let mut tot = ZSeries::new();
            add_series(&mut tot, &left, &RatFunc::one());
            add_series(&mut tot, &right, &RatFunc::one());
            tot.get(&n).map(|s| s.scale(&sign(self.odd)))
        };
        match picked {
            Some(s) => self.shift(h, &s),
            None => self.shift(h, &m.zero_like()),
        }
    }

    /// Expansion order that is exact for Y_{n|i} on states of weight at most `w`.
    pub fn order_bound(w: &Rational, n: i64) -> usize {
        let out = w + Rational::from_integer(n.into()) + Rational::one();
        let top = if out > *w { out } else { w.clone() };
        let t: i64 = top.ceil().to_integer().try_into().unwrap_or(0);
        t.max(0) as usize + 1
    }

    fn coefficient_auto(&self, h: &Heisenberg, m: &FockState, n: i64, theta: bool) -> FockState {
        self.coefficient(h, m, n, theta, Self::order_bound(&m.max_weight(), n))
    }

    /// The super-residue Y_{−1|1}(m), checked for stability under raising the expansion order.
    pub fn apply(&self, h: &Heisenberg, m: &FockState) -> Result<FockState, FockError> {
        if !m.is_vacuum_module() {
            return Err(FockError::NotVacuumModule);
        }
        if m.is_zero() {
            return Ok(self.shift(h, m));
        }
        let w = m.weight().ok_or(FockError::Inhomogeneous)?;
        let low = w.ceil().to_integer().try_into().unwrap_or(0usize) + 1;
        let a = self.coefficient(h, m, -1, true, low);
        let b = self.coefficient(h, m, -1, true, low + 2);
        if a != b {
            return Err(FockError::TruncationUnstable { low, high: low + 2 });
        }
        Ok(a)
    }
}

#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub checked: usize,
    /// One line per failed identity, naming the mode pair and the state.
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Mode-level checks of the exponential superfield on all vacuum-module states of weight ≤ depth:
/// the commutators with Db̄_i(m), b̄_i(m) for |m| ≤ depth, and the two components of
/// (∂_θ + θ∂_z)Y = −(1/ν):α(Z)Y:.
pub fn verify_screening_identities(op: &ScreeningOp, h: &Heisenberg, depth: usize) -> IdentityReport {
    let mut rep = IdentityReport::default();
    let d = depth as i64;
    let inv = ScreeningOp::inv_nu();
    let mut basis = Vec::new();
    for twice in 0..=2 * depth {
        let w = Rational::new((twice as i64).into(), 2.into());
        for mono in super::fock_basis(h, &w) {
            basis.push(FockState::vacuum(h.rank()).monomial_like(mono, RatFunc::one()));
        }
    }
    let y = |m: &FockState, n: i64, t: bool| op.coefficient_auto(h, m, n, t);
    let name = |x: &FockState| x.text(h);
    let fail = |rep: &mut IdentityReport, what: String, lhs: &FockState, rhs: &FockState| {
        rep.checked += 1;
        if lhs != rhs {
            rep.failures.push(what);
        }
    };
    let ps = sign(op.odd);
    for x in &basis {
        for n in -d - 1..=d {
            for i in 0..h.rank() {
                let mut e = vec![Rational::zero(); h.rank()];
                e[i] = Rational::one();
                let ab = RatFunc::from_rational(h.pair(&op.h_alpha, &e));
                for m in -d..=d {
                    let db = HMode::db(i, m);
                    let b = HMode::b(i, m);
                    for t in [false, true] {
                        // [Db̄_i(m), Y_{n|t}] = −(1/ν)(α|v_i) Y_{n−m|t}
                        let lhs = mode_action(h, db, &y(x, n, t)).sub(&y(&mode_action(h, db, x), n, t));
                        let rhs = y(x, n - m, t).scale(&-(&inv * &ab));
                        let tag = format!("[{}, Y_({}|{})] on {}", db.text(h), n, t as u8, name(x));
                        fail(&mut rep, tag, &lhs, &rhs);
                    }
                    // [b̄_i(m), Y_{n|0}] = 0
                    let mut lhs = mode_action(h, b, &y(x, n, false));
                    lhs.add_scaled(&y(&mode_action(h, b, x), n, false), &-&ps);
                    let tag = format!("[{}, Y_({}|0)] on {}", b.text(h), n, name(x));
                    fail(&mut rep, tag, &lhs, &lhs.zero_like());
                    // [b̄_i(m), Y_{n|1}] = −(1/ν)(α|v_i) Y_{n−m|0}
                    let mut lhs = mode_action(h, b, &y(x, n, true));
                    lhs.add_scaled(&y(&mode_action(h, b, x), n, true), &ps);
                    let rhs = y(x, n - m, false).scale(&-(&inv * &ab));
                    let tag = format!("[{}, Y_({}|1)] on {}", b.text(h), n, name(x));
                    fail(&mut rep, tag, &lhs, &rhs);
                }
            }
            let w: i64 = x.max_weight().ceil().to_integer().try_into().unwrap_or(0);
            let lo = -(n.abs() + w + 3);
            // θ^0 part: Y_{n|1} = −(1/ν)(Σ_{k<0} α_(k|1) Y_{n+k+1|0} + (−1)^{p(s)} Σ_{k≥0} Y_{n+k+1|0} α_(k|1))
            let mut rhs = y(x, n, true).zero_like();
            for k in lo..0 {
                rhs.add_scaled(&op.alpha_mode(h, Kind::B, k, &y(x, n + k + 1, false)), &-&inv);
            }
            for k in 0..=w {
                rhs.add_scaled(&y(&op.alpha_mode(h, Kind::B, k, x), n + k + 1, false), &-(&inv * &ps));
            }
            fail(&mut rep, format!("theta^0 part at z^{} on {}", n, name(x)), &y(x, n, true), &rhs);
            // θ^1 part: n Y_{n|0} = −(1/ν)(Σ_{k<0} α_(k|0) Y_{n+k|0} + Σ_{k≥0} Y_{n+k|0} α_(k|0)
            //                      − Σ_{k<0} α_(k|1) Y_{n+k|1} + (−1)^{p(s)} Σ_{k≥0} Y_{n+k|1} α_(k|1))
            let lhs = y(x, n, false).scale(&RatFunc::from_int(n));
            let mut rhs = lhs.zero_like();
            for k in lo..0 {
                rhs.add_scaled(&op.alpha_mode(h, Kind::Db, k, &y(x, n + k, false)), &-&inv);
                rhs.add_scaled(&op.alpha_mode(h, Kind::B, k, &y(x, n + k, true)), &inv);
            }
            for k in 0..=w {
                rhs.add_scaled(&y(&op.alpha_mode(h, Kind::Db, k, x), n + k, false), &-&inv);
                rhs.add_scaled(&y(&op.alpha_mode(h, Kind::B, k, x), n + k, true), &-(&inv * &ps));
            }
            fail(&mut rep, format!("theta^1 part at z^{} on {}", n, name(x)), &lhs, &rhs);
        }
    }
    // vacuum axiom: Y_{0|0}|0⟩ = |−α/ν⟩
    let vac = FockState::vacuum(h.rank());
    let hw = FockState::highest(op.target_hw(h), op.odd, op.target_label());
    fail(&mut rep, "Y_(0|0) on |0>".into(), &y(&vac, 0, false), &hw);
    rep
}
