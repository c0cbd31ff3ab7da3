//! SUSY Heisenberg algebra on Fock modules, and screening operators as super-residues of
//! the exponential superfield.

mod screening;
#[cfg(test)]
mod tests;

pub use screening::{verify_screening_identities, IdentityReport, ScreeningOp};

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::liesuper::LieSuperData;
use crate::scalars::{rat, RatFunc, Rational};
use crate::vacalc::{coeff_parts, heisenberg, join_terms, Algebra, Atom, Mode, State};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("screening output changed between expansion orders {low} and {high}")]
    TruncationUnstable { low: usize, high: usize },
    #[error("state is not weight-homogeneous")]
    Inhomogeneous,
    #[error("screening operators act on the vacuum module only")]
    NotVacuumModule,
    #[error("state does not lie in the Heisenberg algebra")]
    NotHeisenberg,
}

/// The abelian algebra 𝔞 with its symmetric form, on a chosen basis.
#[derive(Clone, Debug)]
pub struct Heisenberg {
    pub names: Vec<String>,
    pub gram: Vec<Vec<Rational>>,
}

impl Heisenberg {
    pub fn new(names: Vec<String>, gram: Vec<Vec<Rational>>) -> Self {
        Heisenberg { names, gram }
    }

    /// The cartan subalgebra of `l` with the restricted invariant form.
    pub fn of_cartan(l: &LieSuperData) -> Self {
        let c = &l.cartan;
        let names = c.iter().map(|&i| l.name_of(i).to_string()).collect();
        let gram = c.iter().map(|&i| c.iter().map(|&j| l.form_basis(i, j).clone()).collect()).collect();
        Heisenberg { names, gram }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// π^𝔞 as a SUSY vertex algebra: odd b̄_i with [b̄_i Λ b̄_j] = (v_i|v_j)χ.
    pub fn algebra(&self) -> Algebra {
        let g: Vec<Vec<RatFunc>> =
            self.gram.iter().map(|r| r.iter().map(|c| RatFunc::from_rational(c.clone())).collect()).collect();
        heisenberg(self.names.clone(), &g, Mode::Quantum)
    }

    /// (x|y) for vectors in basis coordinates.
    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                s += a * b * &self.gram[i][j];
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Db̄_i(n), even.
    Db,
    /// b̄_i(n), odd.
    B,
}

/// A mode Db̄_i(n) or b̄_i(n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HMode {
    pub kind: Kind,
    pub i: usize,
    pub n: i64,
}

impl HMode {
    pub fn b(i: usize, n: i64) -> Self {
        HMode { kind: Kind::B, i, n }
    }

    pub fn db(i: usize, n: i64) -> Self {
        HMode { kind: Kind::Db, i, n }
    }

    pub fn odd(&self) -> bool {
        self.kind == Kind::B
    }

    pub fn is_creation(&self) -> bool {
        self.n < 0
    }

    /// Weight added by a creation mode: n for Db̄(−n), n − 1/2 for b̄(−n).
    pub fn weight(&self) -> Rational {
        let w = Rational::from_integer((-self.n).into());
        match self.kind {
            Kind::Db => w,
            Kind::B => w - rat(1, 2),
        }
    }

    pub fn text(&self, h: &Heisenberg) -> String {
        let k = match self.kind {
            Kind::Db => "Db",
            Kind::B => "b",
        };
        format!("{}[{}]({})", k, h.names[self.i], self.n)
    }
}

/// Super-commutator of two modes, a multiple of 1.
pub fn mode_bracket(h: &Heisenberg, x: HMode, y: HMode) -> Rational {
    match (x.kind, y.kind) {
        (Kind::Db, Kind::Db) if x.n + y.n == 0 => Rational::from_integer(x.n.into()) * &h.gram[x.i][y.i],
        (Kind::B, Kind::B) if x.n + y.n == -1 => h.gram[x.i][y.i].clone(),
        _ => Rational::zero(),
    }
}

fn sign(odd: bool) -> RatFunc {
    if odd {
        -RatFunc::one()
    } else {
        RatFunc::one()
    }
}

/// An element of a Fock module: creation monomials applied to |β⟩.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    /// β(v_i) on the basis of 𝔞.
    pub hw: Vec<RatFunc>,
    pub hw_odd: bool,
    /// Printed name of the highest weight vector.
    pub label: String,
    terms: BTreeMap<Vec<HMode>, RatFunc>,
}

impl FockState {
    pub fn highest(hw: Vec<RatFunc>, hw_odd: bool, label: impl Into<String>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), RatFunc::one());
        FockState { hw, hw_odd, label: label.into(), terms }
    }

    pub fn vacuum(rank: usize) -> Self {
        Self::highest(vec![RatFunc::zero(); rank], false, "0")
    }

    /// The zero vector of the same module.
    pub fn zero_like(&self) -> Self {
        FockState { hw: self.hw.clone(), hw_odd: self.hw_odd, label: self.label.clone(), terms: BTreeMap::new() }
    }

    /// `mono|β⟩` in the module of `self`; `mono` must be canonical.
    pub fn monomial_like(&self, mono: Vec<HMode>, c: RatFunc) -> Self {
        let mut s = self.zero_like();
        s.add_term(mono, &c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_vacuum_module(&self) -> bool {
        self.hw.iter().all(|c| c.is_zero()) && !self.hw_odd
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<HMode>, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &[HMode]) -> RatFunc {
        self.terms.get(mono).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn add_term(&mut self, mono: Vec<HMode>, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockState, c: &RatFunc) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), &(v * c));
        }
    }

    pub fn scale(&self, c: &RatFunc) -> FockState {
        let mut s = self.zero_like();
        s.add_scaled(self, c);
        s
    }

    pub fn sub(&self, other: &FockState) -> FockState {
        let mut s = self.clone();
        s.add_scaled(other, &-RatFunc::one());
        s
    }

    /// Mode weight (highest weight vector counted as 0), if homogeneous.
    pub fn weight(&self) -> Option<Rational> {
        let mut w = None;
        for m in self.terms.keys() {
            let x: Rational = m.iter().map(|a| a.weight()).sum();
            match &w {
                None => w = Some(x),
                Some(y) if *y != x => return None,
                _ => {}
            }
        }
        Some(w.unwrap_or_else(Rational::zero))
    }

    /// Largest mode weight among the terms.
    pub fn max_weight(&self) -> Rational {
        self.terms.keys().map(|m| m.iter().map(|a| a.weight()).sum()).max().unwrap_or_else(Rational::zero)
    }

    pub fn parity(&self) -> Option<u8> {
        let mut p = None;
        for m in self.terms.keys() {
            let x = (self.hw_odd as usize + m.iter().filter(|a| a.odd()).count()) % 2;
            match p {
                None => p = Some(x as u8),
                Some(y) if y as usize != x => return None,
                _ => {}
            }
        }
        p.or(Some(self.hw_odd as u8))
    }

    pub fn text(&self, h: &Heisenberg) -> String {
        let hw = format!("|{}>", self.label);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut body: Vec<String> = m.iter().map(|a| a.text(h)).collect();
                body.push(hw.clone());
                let mt = body.join(" ");
                let (neg, ct) = coeff_parts(c);
                (neg, ct.map_or(mt.clone(), |ct| format!("{} {}", ct, mt)))
            })
            .collect();
        join_terms(terms)
    }
}

/// x · m for a single mode x.
pub fn mode_action(h: &Heisenberg, x: HMode, m: &FockState) -> FockState {
    let mut out = m.zero_like();
    for (mono, c) in &m.terms {
        if x.is_creation() {
            if x.odd() && mono.contains(&x) {
                continue;
            }
            let pos = mono.partition_point(|a| *a < x);
            let passed = mono[..pos].iter().filter(|a| a.odd()).count();
            let mut nm = mono.clone();
            nm.insert(pos, x);
            out.add_term(nm, &(c * &sign(x.odd() && passed % 2 == 1)));
            continue;
        }
        let mut passed = 0usize;
        for (j, a) in mono.iter().enumerate() {
            let br = mode_bracket(h, x, *a);
            if !br.is_zero() {
                let mut nm = mono.clone();
                nm.remove(j);
                let s = sign(x.odd() && passed % 2 == 1);
                out.add_term(nm, &(&(c * &s) * &RatFunc::from_rational(br)));
            }
            if a.odd() {
                passed += 1;
            }
        }
        if x.kind == Kind::Db && x.n == 0 {
            out.add_term(mono.clone(), &(c * &m.hw[x.i]));
        }
    }
    out
}

/// Σ_i coeffs_i · (kind)_i(n) applied to m.
pub fn combo_action(h: &Heisenberg, kind: Kind, coeffs: &[Rational], n: i64, m: &FockState) -> FockState {
    let mut out = m.zero_like();
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            out.add_scaled(&mode_action(h, HMode { kind, i, n }, m), &RatFunc::from_rational(c.clone()));
        }
    }
    out
}

fn factorial(p: u16) -> Rational {
    (1..=p as i64).fold(Rational::one(), |a, k| a * Rational::from_integer(k.into()))
}

/// The creation mode of a Heisenberg atom ∂^p x or ∂^p Dx, with the factor p!.
fn atom_mode(a: &Atom) -> (HMode, Rational) {
    let n = -(a.p as i64) - 1;
    let kind = if a.d == 1 { Kind::Db } else { Kind::B };
    (HMode { kind, i: a.gen as usize, n }, factorial(a.p))
}

/// Image of a state of π^𝔞 (as built by [`Heisenberg::algebra`]) in the vacuum module.
pub fn fock_from_state(h: &Heisenberg, s: &State) -> FockState {
    let mut out = FockState::vacuum(h.rank());
    out.terms.clear();
    for (mono, c) in s.terms() {
        let mut v = FockState::vacuum(h.rank());
        let mut scale = Rational::one();
        for a in mono.atoms().iter().rev() {
            let (x, f) = atom_mode(a);
            v = mode_action(h, x, &v);
            scale *= f;
        }
        out.add_scaled(&v, &(c * &RatFunc::from_rational(scale)));
    }
    out
}

/// Inverse of [`fock_from_state`] on the vacuum module.
pub fn state_from_fock(h: &Heisenberg, alg: &Algebra, f: &FockState) -> Result<State, FockError> {
    if !f.is_vacuum_module() {
        return Err(FockError::NotVacuumModule);
    }
    let mut out = State::zero();
    for (mono, c) in &f.terms {
        let mut v = State::vacuum();
        let mut scale = Rational::one();
        for x in mono.iter().rev() {
            if !x.is_creation() || x.i >= h.rank() {
                return Err(FockError::NotHeisenberg);
            }
            let p = (-x.n - 1) as u16;
            let d = (x.kind == Kind::Db) as u8;
            v = alg.normal_product(&State::atom(Atom::new(x.i, true, d, p)), &v);
            scale /= factorial(p);
        }
        out.add_scaled(&v, &(c * &RatFunc::from_rational(scale)));
    }
    Ok(out)
}

/// All creation monomials of mode weight exactly `w`, in canonical order.
pub fn fock_basis(h: &Heisenberg, w: &Rational) -> Vec<Vec<HMode>> {
    let mut modes = Vec::new();
    let top = w.ceil().to_integer();
    let top: i64 = top.try_into().unwrap_or(0);
    for i in 0..h.rank() {
        for n in 1..=top + 1 {
            modes.push(HMode::db(i, -n));
            modes.push(HMode::b(i, -n));
        }
    }
    modes.sort();
    modes.retain(|m| m.weight() <= *w);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(modes: &[HMode], start: usize, left: &Rational, cur: &mut Vec<HMode>, out: &mut Vec<Vec<HMode>>) {
        if left.is_zero() {
            out.push(cur.clone());
            return;
        }
        for k in start..modes.len() {
            let m = modes[k];
            let wm = m.weight();
            if wm > *left {
                continue;
            }
            cur.push(m);
            // even modes may repeat, odd ones may not
            let next = if m.odd() { k + 1 } else { k };
            go(modes, next, &(left - &wm), cur, out);
            cur.pop();
        }
    }
    go(&modes, 0, w, &mut cur, &mut out);
    out
}
