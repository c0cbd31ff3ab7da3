use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;

use super::state::{Atom, LPoly, Monomial, State};
use super::{LambdaPoly, Mode, VaError};
use crate::scalars::{RatFunc, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Affine(usize),
    FermionUpper(usize),
    FermionLower(usize),
    Heisenberg(usize),
    Abstract,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: u8,
    pub origin: Origin,
}

impl Generator {
    pub fn new(name: impl Into<String>, parity: u8, origin: Origin) -> Self {
        Generator { name: name.into(), parity, origin }
    }
}

#[derive(Default)]
struct Caches {
    insert: Mutex<HashMap<(Atom, Monomial), State>>,
    nprod: Mutex<HashMap<(Monomial, Monomial), State>>,
    bracket: Mutex<HashMap<(Monomial, Monomial), LPoly>>,
    partial: Mutex<HashMap<Monomial, State>>,
    d: Mutex<HashMap<Monomial, State>>,
}

/// A free SUSY vertex algebra given by generators and the Λ-brackets between them.
///
/// Internally everything runs in the ordinary vertex algebra on {x, Dx}: atoms carry a D flag,
/// and the table holds the λ-bracket of every ordered pair of such generators.
pub struct Algebra {
    gens: Vec<Generator>,
    mode: Mode,
    /// Row-major over VA generator pairs (2 per SUSY generator).
    table: Vec<LPoly>,
    caches: Caches,
}

fn sign(odd: bool) -> RatFunc {
    if odd {
        -RatFunc::one()
    } else {
        RatFunc::one()
    }
}

fn fact(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

fn binom(n: usize, k: usize) -> BigInt {
    fact(n) / (fact(k) * fact(n - k))
}

pub(crate) fn q(n: BigInt, d: BigInt) -> RatFunc {
    RatFunc::from_rational(Rational::new(n, d))
}

/// ∂ on a state of monomial length at most one.
pub(crate) fn partial_linear(s: &State) -> State {
    let mut out = State::zero();
    for (m, c) in s.terms() {
        match m.atoms() {
            [] => {}
            [a] => out.add_term(Monomial::atom(a.partial()), c),
            _ => panic!("partial_linear on a product"),
        }
    }
    out
}

/// D on a state of monomial length at most one.
pub(crate) fn d_linear(s: &State) -> State {
    let mut out = State::zero();
    for (m, c) in s.terms() {
        match m.atoms() {
            [] => {}
            [a] => out.add_term(Monomial::atom(a.apply_d()), c),
            _ => panic!("d_linear on a product"),
        }
    }
    out
}

/// The VA skew-symmetry image -(-1)^{p(a)p(b)} T(-λ-∂) of a table entry.
pub(crate) fn skew_linear(t: &LPoly, odd_pair: bool) -> LPoly {
    let mut out = LPoly::zero();
    let s = -sign(odd_pair);
    for (n, sn) in t.0.iter().enumerate() {
        let mut d = sn.clone();
        for r in 0..=n {
            let c = q(binom(n, r), BigInt::one()) * sign(n % 2 == 1) * &s;
            out.add_at(n - r, &d, &c);
            d = partial_linear(&d);
        }
    }
    out.trimmed()
}

impl Algebra {
    /// Builds the algebra from Λ-brackets of generator pairs. Each entry is
    /// `[x_Λ y] = even(λ) + χ odd(λ)` with linear coefficient states. Pairs given in one order
    /// are extended by skew-symmetry; the whole table is then checked for consistency.
    pub fn new(gens: Vec<Generator>, entries: Vec<(usize, usize, LambdaPoly)>, mode: Mode) -> Result<Algebra, VaError> {
        let g2 = 2 * gens.len();
        let mut table: Vec<Option<LPoly>> = vec![None; g2 * g2];
        for (x, y, lp) in &entries {
            let (x, y) = (*x, *y);
            for s in lp.even.0.iter().chain(lp.chi.0.iter()) {
                if s.max_len() > 1 {
                    return Err(VaError::NonLinearTable { x: gens[x].name.clone(), y: gens[y].name.clone() });
                }
            }
            let px = gens[x].parity == 1;
            let pxy = (gens[x].parity + gens[y].parity) % 2;
            let even_ok = lp.even.0.iter().all(|s| s.is_zero() || s.parity() == Some(1 - pxy));
            let chi_ok = lp.chi.0.iter().all(|s| s.is_zero() || s.parity() == Some(pxy));
            if !even_ok || !chi_ok {
                return Err(VaError::ParityViolation { x: gens[x].name.clone(), y: gens[y].name.clone() });
            }
            let odd = &lp.chi;
            let even = &lp.even;
            // [x_λ y] = O, [Dx_λ y] = E, [x_λ Dy] = ±(D O - E), [Dx_λ Dy] = ∓(D E + λ O)
            let x_dy = {
                let mut t = LPoly(odd.0.iter().map(d_linear).collect());
                t.add_scaled(even, &-RatFunc::one());
                t.scale(&sign(px))
            };
            let dx_dy = {
                let mut t = LPoly(even.0.iter().map(d_linear).collect());
                for (n, s) in odd.0.iter().enumerate() {
                    t.add_at(n + 1, s, &RatFunc::one());
                }
                t.scale(&sign(!px))
            };
            let vals = [
                (2 * x, 2 * y, odd.clone().trimmed()),
                (2 * x + 1, 2 * y, even.clone().trimmed()),
                (2 * x, 2 * y + 1, x_dy),
                (2 * x + 1, 2 * y + 1, dx_dy),
            ];
            for (i, j, v) in vals {
                if let Some(prev) = &table[i * g2 + j] {
                    if *prev != v {
                        return Err(VaError::SkewSymmetryViolation { x: gens[x].name.clone(), y: gens[y].name.clone() });
                    }
                }
                table[i * g2 + j] = Some(v);
            }
        }
        let va_odd = |i: usize| (gens[i / 2].parity == 1) ^ (i % 2 == 1);
        for i in 0..g2 {
            for j in 0..g2 {
                if table[i * g2 + j].is_none() {
                    if let Some(t) = &table[j * g2 + i] {
                        let s = skew_linear(t, va_odd(i) && va_odd(j));
                        table[i * g2 + j] = Some(s);
                    }
                }
            }
        }
        let table: Vec<LPoly> = table.into_iter().map(|t| t.unwrap_or_default()).collect();
        for i in 0..g2 {
            for j in i..g2 {
                let want = skew_linear(&table[i * g2 + j], va_odd(i) && va_odd(j));
                if table[j * g2 + i] != want {
                    return Err(VaError::SkewSymmetryViolation {
                        x: gens[i / 2].name.clone(),
                        y: gens[j / 2].name.clone(),
                    });
                }
            }
        }
        Ok(Algebra { gens, mode, table, caches: Caches::default() })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_classical(&self) -> bool {
        self.mode == Mode::Classical
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn gen_atom(&self, g: usize) -> Atom {
        Atom::new(g, self.gens[g].parity == 1, 0, 0)
    }

    pub fn gen(&self, g: usize) -> State {
        State::atom(self.gen_atom(g))
    }

    pub fn gen_by_name(&self, name: &str) -> Result<State, VaError> {
        self.gen_index(name)
            .map(|g| self.gen(g))
            .ok_or_else(|| VaError::UnknownGenerator(name.to_string()))
    }

    fn entry(&self, i: usize, j: usize) -> &LPoly {
        &self.table[i * 2 * self.gens.len() + j]
    }

    /// [∂^p x_λ ∂^q y] = (-λ)^p (λ+∂)^q [x_λ y]
    fn atom_bracket(&self, a: Atom, b: Atom) -> LPoly {
        let mut t = self.entry(a.va_index(), b.va_index()).clone();
        for _ in 0..b.p {
            let mut next = LPoly::zero();
            for (n, s) in t.0.iter().enumerate() {
                next.add_at(n + 1, s, &RatFunc::one());
                next.add_at(n, &partial_linear(s), &RatFunc::one());
            }
            t = next;
        }
        if a.p > 0 {
            let sh = a.p as usize;
            let s = sign(a.p % 2 == 1);
            let mut v = vec![State::zero(); sh];
            v.extend(t.0.into_iter().map(|x| x.scale(&s)));
            t = LPoly(v);
        }
        t.trimmed()
    }

    // ---- normal ordering ----

    /// :a M: for a canonical monomial M.
    fn insert(&self, a: Atom, m: &Monomial) -> State {
        let Some(&b) = m.atoms().first() else {
            return State::atom(a);
        };
        if a < b || (a == b && !a.odd) {
            let mut v = Vec::with_capacity(m.len() + 1);
            v.push(a);
            v.extend_from_slice(m.atoms());
            return State::monomial(Monomial(v), RatFunc::one());
        }
        if self.is_classical() {
            return self.insert_classical(a, m);
        }
        let key = (a, m.clone());
        if let Some(s) = self.caches.insert.lock().unwrap().get(&key) {
            return s.clone();
        }
        let rest = m.rest();
        let mut out = State::zero();
        if a == b {
            // odd a: :a:aR:: = ::aa:R: and 2:aa: = sum_j (-1)^j ∂^{j+1}(a_(j)a)/(j+1)!
            let t = self.atom_bracket(a, a);
            for (j, sj) in t.0.iter().enumerate() {
                let mut d = sj.clone();
                for _ in 0..=j {
                    d = partial_linear(&d);
                }
                let c = q(sign_int(j), BigInt::from(2 * (j + 1)));
                out.add_scaled(&self.nprod_state_mono(&d, &rest), &c);
            }
        } else {
            // a > b: swap past b, plus the quasi-commutativity correction
            let s = sign(a.odd && b.odd);
            let inner = self.insert(a, &rest);
            for (mm, c) in inner.terms() {
                out.add_scaled(&self.insert(b, mm), &(c * &s));
            }
            let t = self.atom_bracket(a, b);
            for (j, sj) in t.0.iter().enumerate() {
                let mut d = sj.clone();
                for _ in 0..=j {
                    d = partial_linear(&d);
                }
                let c = q(sign_int(j), BigInt::from(j + 1));
                out.add_scaled(&self.nprod_state_mono(&d, &rest), &c);
            }
        }
        self.caches.insert.lock().unwrap().insert(key, out.clone());
        out
    }

    fn insert_classical(&self, a: Atom, m: &Monomial) -> State {
        let atoms = m.atoms();
        let pos = atoms.partition_point(|x| *x < a);
        if a.odd && atoms.get(pos) == Some(&a) {
            return State::zero();
        }
        let passed = atoms[..pos].iter().filter(|x| x.odd).count() % 2 == 1;
        let mut v = atoms.to_vec();
        v.insert(pos, a);
        State::monomial(Monomial(v), sign(a.odd && passed))
    }

    fn insert_state(&self, a: Atom, s: &State) -> State {
        let mut out = State::zero();
        for (m, c) in s.terms() {
            out.add_scaled(&self.insert(a, m), c);
        }
        out
    }

    /// Normal orders a product of atoms given in arbitrary order, right-nested.
    pub(crate) fn from_atoms(&self, atoms: &[Atom]) -> State {
        let mut acc = State::vacuum();
        for &a in atoms.iter().rev() {
            acc = self.insert_state(a, &acc);
        }
        acc
    }

    fn nprod_mono(&self, x: &Monomial, y: &Monomial) -> State {
        if x.is_empty() {
            return State::monomial(y.clone(), RatFunc::one());
        }
        if y.is_empty() {
            return State::monomial(x.clone(), RatFunc::one());
        }
        if x.len() == 1 {
            return self.insert(x.atoms()[0], y);
        }
        let key = (x.clone(), y.clone());
        if let Some(s) = self.caches.nprod.lock().unwrap().get(&key) {
            return s.clone();
        }
        let a = x.atoms()[0];
        let rest = x.rest();
        let mut out = self.insert_state(a, &self.nprod_mono(&rest, y));
        if !self.is_classical() {
            // ::aA':Y: = :a:A'Y:: + :(∫_0^∂ a)[A'_λ Y]: + ±:(∫_0^∂ A')[a_λ Y]:
            let b1 = self.bracket_mono(&rest, y);
            let mut da = a;
            for (n, xn) in b1.0.iter().enumerate() {
                da = da.partial();
                if xn.is_zero() {
                    continue;
                }
                out.add_scaled(&self.insert_state(da, xn), &q(BigInt::one(), BigInt::from(n + 1)));
            }
            let s = sign(a.odd && rest.parity() == 1);
            let b2 = self.bracket_mono(&Monomial::atom(a), y);
            let mut drest = State::monomial(rest.clone(), RatFunc::one());
            for (n, zn) in b2.0.iter().enumerate() {
                drest = self.apply_partial(&drest);
                if zn.is_zero() {
                    continue;
                }
                let c = &s * &q(BigInt::one(), BigInt::from(n + 1));
                out.add_scaled(&self.normal_product(&drest, zn), &c);
            }
        }
        self.caches.nprod.lock().unwrap().insert(key, out.clone());
        out
    }

    fn nprod_state_mono(&self, s: &State, y: &Monomial) -> State {
        let mut out = State::zero();
        for (m, c) in s.terms() {
            out.add_scaled(&self.nprod_mono(m, y), c);
        }
        out
    }

    /// :AB:
    pub fn normal_product(&self, a: &State, b: &State) -> State {
        let mut out = State::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                out.add_scaled(&self.nprod_mono(ma, mb), &(ca * cb));
            }
        }
        out
    }

    /// Right-nested product :s1 :s2 ... sn::.
    pub fn product(&self, factors: &[State]) -> State {
        let mut acc = State::vacuum();
        for f in factors.iter().rev() {
            acc = self.normal_product(f, &acc);
        }
        acc
    }

    // ---- derivations ----

    fn partial_mono(&self, m: &Monomial) -> State {
        if m.is_empty() {
            return State::zero();
        }
        if m.len() == 1 {
            return State::atom(m.atoms()[0].partial());
        }
        if let Some(s) = self.caches.partial.lock().unwrap().get(m) {
            return s.clone();
        }
        let mut out = State::zero();
        for i in 0..m.len() {
            let mut v = m.atoms().to_vec();
            v[i] = v[i].partial();
            out.add_scaled(&self.from_atoms(&v), &RatFunc::one());
        }
        self.caches.partial.lock().unwrap().insert(m.clone(), out.clone());
        out
    }

    pub fn apply_partial(&self, s: &State) -> State {
        let mut out = State::zero();
        for (m, c) in s.terms() {
            out.add_scaled(&self.partial_mono(m), c);
        }
        out
    }

    fn d_mono(&self, m: &Monomial) -> State {
        if m.len() == 1 {
            return State::atom(m.atoms()[0].apply_d());
        }
        if let Some(s) = self.caches.d.lock().unwrap().get(m) {
            return s.clone();
        }
        let mut out = State::zero();
        let mut before_odd = false;
        for i in 0..m.len() {
            let mut v = m.atoms().to_vec();
            v[i] = v[i].apply_d();
            out.add_scaled(&self.from_atoms(&v), &sign(before_odd));
            before_odd ^= m.atoms()[i].odd;
        }
        self.caches.d.lock().unwrap().insert(m.clone(), out.clone());
        out
    }

    /// The odd derivation D.
    pub fn apply_d(&self, s: &State) -> State {
        let mut out = State::zero();
        for (m, c) in s.terms() {
            out.add_scaled(&self.d_mono(m), c);
        }
        out
    }

    // ---- brackets ----

    fn bracket_mono(&self, x: &Monomial, y: &Monomial) -> LPoly {
        if x.is_empty() || y.is_empty() {
            return LPoly::zero();
        }
        if x.len() == 1 && y.len() == 1 {
            return self.atom_bracket(x.atoms()[0], y.atoms()[0]);
        }
        let key = (x.clone(), y.clone());
        if let Some(s) = self.caches.bracket.lock().unwrap().get(&key) {
            return s.clone();
        }
        let out = if x.len() == 1 {
            self.left_wick(x.atoms()[0], y)
        } else {
            self.right_wick(x, y)
        };
        self.caches.bracket.lock().unwrap().insert(key, out.clone());
        out
    }

    /// [a_λ :bR:] = :[a_λ b]R: + ±:b[a_λ R]: + ∫_0^λ [[a_λ b]_μ R] dμ
    fn left_wick(&self, a: Atom, y: &Monomial) -> LPoly {
        let b = y.atoms()[0];
        let rest = y.rest();
        let mut out = LPoly::zero();
        let t = self.atom_bracket(a, b);
        for (j, wj) in t.0.iter().enumerate() {
            if wj.is_zero() {
                continue;
            }
            out.add_at(j, &self.nprod_state_mono(wj, &rest), &RatFunc::one());
            if !self.is_classical() {
                let inner = self.va_bracket(wj, &State::monomial(rest.clone(), RatFunc::one()));
                for (m, v) in inner.0.iter().enumerate() {
                    out.add_at(j + m + 1, v, &q(BigInt::one(), BigInt::from(m + 1)));
                }
            }
        }
        let s = sign(a.odd && b.odd);
        let br = self.bracket_mono(&Monomial::atom(a), &rest);
        for (n, un) in br.0.iter().enumerate() {
            out.add_at(n, &self.insert_state(b, un), &s);
        }
        out.trimmed()
    }

    /// [:aA':_λ Y] = :(e^{∂∂_λ}a)[A'_λ Y]: + ±:(e^{∂∂_λ}A')[a_λ Y]: + ±∫_0^λ [A'_μ[a_{λ-μ}Y]] dμ
    fn right_wick(&self, x: &Monomial, y: &Monomial) -> LPoly {
        let a = x.atoms()[0];
        let rest = x.rest();
        let rest_state = State::monomial(rest.clone(), RatFunc::one());
        let s = sign(a.odd && rest.parity() == 1);
        let mut out = LPoly::zero();
        let b1 = self.bracket_mono(&rest, y);
        for (n, xn) in b1.0.iter().enumerate() {
            if xn.is_zero() {
                continue;
            }
            let mut da = a;
            for k in 0..=n {
                if k > 0 {
                    da = da.partial();
                }
                out.add_at(n - k, &self.insert_state(da, xn), &q(binom(n, k), BigInt::one()));
            }
        }
        let b2 = self.bracket_mono(&Monomial::atom(a), y);
        for (n, zn) in b2.0.iter().enumerate() {
            if zn.is_zero() {
                continue;
            }
            let mut dr = rest_state.clone();
            for k in 0..=n {
                if k > 0 {
                    dr = self.apply_partial(&dr);
                }
                let c = &s * &q(binom(n, k), BigInt::one());
                out.add_at(n - k, &self.normal_product(&dr, zn), &c);
            }
            if !self.is_classical() {
                let inner = self.va_bracket(&rest_state, zn);
                for (m, v) in inner.0.iter().enumerate() {
                    // ∫_0^λ (λ-μ)^n μ^m dμ = λ^{n+m+1} n! m! / (n+m+1)!
                    let c = &s * &q(fact(n) * fact(m), fact(n + m + 1));
                    out.add_at(n + m + 1, v, &c);
                }
            }
        }
        out.trimmed()
    }

    /// [A_λ B]
    pub fn va_bracket(&self, a: &State, b: &State) -> LPoly {
        let mut out = LPoly::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let t = self.bracket_mono(ma, mb);
                out.add_scaled(&t, &(ca * cb));
            }
        }
        out.trimmed()
    }

    /// [A_Λ B] = [DA_λ B] + χ[A_λ B]
    pub fn lambda_bracket(&self, a: &State, b: &State) -> LambdaPoly {
        LambdaPoly { even: self.va_bracket(&self.apply_d(a), b), chi: self.va_bracket(a, b) }
    }

    /// A_(n|i)B: i = 1 is the ordinary n-th product, i = 0 is (DA)_(n)B.
    pub fn nth_product(&self, a: &State, b: &State, n: usize, i: u8) -> State {
        let lp = if i == 1 { self.va_bracket(a, b) } else { self.va_bracket(&self.apply_d(a), b) };
        lp.coeff(n).scale(&q(fact(n), BigInt::one()))
    }

    /// Drops all memoized values.
    pub fn clear_caches(&self) {
        self.caches.insert.lock().unwrap().clear();
        self.caches.nprod.lock().unwrap().clear();
        self.caches.bracket.lock().unwrap().clear();
        self.caches.partial.lock().unwrap().clear();
        self.caches.d.lock().unwrap().clear();
    }

    pub fn parity_of_monomial(m: &Monomial) -> u8 {
        m.parity()
    }
}

fn sign_int(j: usize) -> BigInt {
    if j % 2 == 1 {
        BigInt::from(-1)
    } else {
        BigInt::one()
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    fact(n)
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    binom(n, k)
}
