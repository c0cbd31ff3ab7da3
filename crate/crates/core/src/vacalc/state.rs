use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::scalars::{RatFunc, Rational};

/// `∂^p D^d x` for a generator x. Field order gives the monomial order:
/// generator index, then ∂-power, then the D flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub gen: u16,
    pub p: u16,
    pub d: u8,
    /// Parity of the atom (generator parity plus d); determined by `gen` and `d`.
    pub odd: bool,
}

impl Atom {
    pub fn new(gen: usize, gen_odd: bool, d: u8, p: u16) -> Atom {
        Atom { gen: gen as u16, p, d, odd: gen_odd ^ (d == 1) }
    }

    /// Index of the underlying ordinary-vertex-algebra generator (x or Dx).
    pub fn va_index(&self) -> usize {
        2 * self.gen as usize + self.d as usize
    }

    pub fn partial(self) -> Atom {
        Atom { p: self.p + 1, ..self }
    }

    /// D(∂^p x) = ∂^p Dx and D(∂^p Dx) = ∂^{p+1} x.
    pub fn apply_d(self) -> Atom {
        if self.d == 0 {
            Atom { d: 1, odd: !self.odd, ..self }
        } else {
            Atom { d: 0, p: self.p + 1, odd: !self.odd, ..self }
        }
    }

    pub fn parity(&self) -> u8 {
        self.odd as u8
    }
}

/// Right-nested normally ordered product of atoms; empty is the vacuum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<Atom>);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(vec![a])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn parity(&self) -> u8 {
        self.0.iter().filter(|a| a.odd).count() as u8 % 2
    }

    /// Canonical means nondecreasing with no repeated odd atom.
    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1] || (w[0] == w[1] && !w[0].odd))
    }

    pub fn rest(&self) -> Monomial {
        Monomial(self.0[1..].to_vec())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Finite linear combination of canonical monomials over Q(v).
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct State {
    terms: BTreeMap<Monomial, RatFunc>,
}

impl State {
    pub fn zero() -> Self {
        State { terms: BTreeMap::new() }
    }

    pub fn vacuum() -> Self {
        State::monomial(Monomial::vacuum(), RatFunc::one())
    }

    pub fn constant(c: RatFunc) -> Self {
        State::monomial(Monomial::vacuum(), c)
    }

    pub fn monomial(m: Monomial, c: RatFunc) -> Self {
        let mut s = State::zero();
        s.add_term(m, &c);
        s
    }

    pub fn atom(a: Atom) -> Self {
        State::monomial(Monomial::atom(a), RatFunc::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RatFunc)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, RatFunc)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> RatFunc {
        self.terms.get(m).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// self += c * other
    pub fn add_scaled(&mut self, other: &State, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (m, a) in &other.terms {
            if unit {
                self.add_term(m.clone(), a);
            } else {
                self.add_term(m.clone(), &(a * c));
            }
        }
    }

    pub fn scale(&self, c: &RatFunc) -> State {
        if c.is_zero() {
            return State::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        State { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn scale_q(&self, c: &Rational) -> State {
        self.scale(&RatFunc::from_rational(c.clone()))
    }

    /// The vacuum coefficient.
    pub fn constant_part(&self) -> RatFunc {
        self.coeff(&Monomial::vacuum())
    }

    pub fn without_constant(&self) -> State {
        let mut s = self.clone();
        s.terms.remove(&Monomial::vacuum());
        s
    }

    /// Parity if homogeneous; `None` for zero or mixed states.
    pub fn parity(&self) -> Option<u8> {
        let mut p = None;
        for m in self.terms.keys() {
            let q = m.parity();
            match p {
                None => p = Some(q),
                Some(r) if r != q => return None,
                _ => {}
            }
        }
        p
    }

    pub fn map_coeffs<F: FnMut(&RatFunc) -> RatFunc>(&self, mut f: F) -> State {
        let mut s = State::zero();
        for (m, c) in &self.terms {
            s.add_term(m.clone(), &f(c));
        }
        s
    }

    /// Largest monomial length present.
    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }
}

impl<'a> Add<&'a State> for &'a State {
    type Output = State;
    fn add(self, rhs: &State) -> State {
        let mut s = self.clone();
        s.add_scaled(rhs, &RatFunc::one());
        s
    }
}

impl<'a> Sub<&'a State> for &'a State {
    type Output = State;
    fn sub(self, rhs: &State) -> State {
        let mut s = self.clone();
        s.add_scaled(rhs, &-RatFunc::one());
        s
    }
}

impl Neg for &State {
    type Output = State;
    fn neg(self) -> State {
        self.scale(&-RatFunc::one())
    }
}

impl Add for State {
    type Output = State;
    fn add(self, rhs: State) -> State {
        &self + &rhs
    }
}

impl Sub for State {
    type Output = State;
    fn sub(self, rhs: State) -> State {
        &self - &rhs
    }
}

/// Polynomial in λ with State coefficients; index n holds the coefficient of λ^n (no factorials).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LPoly(pub Vec<State>);

impl LPoly {
    pub fn zero() -> Self {
        LPoly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|s| s.is_zero())
    }

    pub fn coeff(&self, n: usize) -> State {
        self.0.get(n).cloned().unwrap_or_default()
    }

    pub fn add_at(&mut self, n: usize, s: &State, c: &RatFunc) {
        if s.is_zero() || c.is_zero() {
            return;
        }
        if self.0.len() <= n {
            self.0.resize(n + 1, State::zero());
        }
        self.0[n].add_scaled(s, c);
    }

    pub fn add_scaled(&mut self, other: &LPoly, c: &RatFunc) {
        for (n, s) in other.0.iter().enumerate() {
            self.add_at(n, s, c);
        }
    }

    pub fn trimmed(mut self) -> LPoly {
        while self.0.last().is_some_and(|s| s.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|s| !s.is_zero())
    }

    pub fn scale(&self, c: &RatFunc) -> LPoly {
        LPoly(self.0.iter().map(|s| s.scale(c)).collect()).trimmed()
    }

    pub fn map<F: FnMut(&State) -> State>(&self, f: F) -> LPoly {
        LPoly(self.0.iter().map(f).collect()).trimmed()
    }
}
