use std::collections::HashSet;

use super::engine::{Algebra, Generator, Origin};
use super::lambda::LambdaPoly;
use super::state::{Atom, Monomial, State};
use super::{Mode, VaError};
use crate::liesuper::LieSuperData;
use crate::scalars::{Matrix, RatFunc};

/// Generators plus Λ-brackets of generator pairs, before the algebra is built.
#[derive(Clone, Debug, Default)]
pub struct Presentation {
    pub gens: Vec<Generator>,
    pub entries: Vec<(usize, usize, LambdaPoly)>,
}

fn shift_state(s: &State, off: usize) -> State {
    let mut out = State::zero();
    for (m, c) in s.terms() {
        let atoms = m.atoms().iter().map(|a| Atom { gen: a.gen + off as u16, ..*a }).collect();
        out.add_term(Monomial(atoms), c);
    }
    out
}

impl Presentation {
    /// Tensor product: the generators of `other` are appended and commute with ours.
    pub fn merge(mut self, other: Presentation) -> Presentation {
        let off = self.gens.len();
        self.gens.extend(other.gens);
        for (x, y, lp) in other.entries {
            self.entries.push((x + off, y + off, lp.map_states(|s| shift_state(s, off))));
        }
        self
    }

    pub fn build(self, mode: Mode) -> Result<Algebra, VaError> {
        free_susy_algebra(self.gens, self.entries, mode)
    }

    pub fn gen(&self, i: usize) -> State {
        State::atom(Atom::new(i, self.gens[i].parity == 1, 0, 0))
    }

    pub fn dgen(&self, i: usize) -> State {
        State::atom(Atom::new(i, self.gens[i].parity == 1, 1, 0))
    }

    pub fn affine(l: &LieSuperData, kappa: &RatFunc) -> Presentation {
        let n = l.dim();
        let gens: Vec<Generator> = (0..n)
            .map(|i| Generator::new(l.name_of(i), 1 - l.parity(i), Origin::Affine(i)))
            .collect();
        let mut p = Presentation { gens, entries: Vec::new() };
        for a in 0..n {
            for b in 0..n {
                let mut ev = State::zero();
                for (k, c) in l.bracket_basis(a, b) {
                    ev.add_scaled(&p.gen(*k), &RatFunc::from_rational(c.clone()));
                }
                let pa = l.parity(a);
                let pb = l.parity(b);
                if pa * (pb + 1) % 2 == 1 {
                    ev = -&ev;
                }
                let form = l.form_basis(a, b);
                let chi = State::constant(kappa * &RatFunc::from_rational(form.clone()));
                let lp = LambdaPoly::from_terms(vec![(0, false, ev), (0, true, chi)]);
                if !lp.is_zero() {
                    p.entries.push((a, b, lp));
                }
            }
        }
        p
    }

    /// `upper[i]` paired with `lower[j]` by the constant `pairing[i][j]`.
    pub fn fermions(
        upper: Vec<(String, u8, Origin)>,
        lower: Vec<(String, u8, Origin)>,
        pairing: &[Vec<RatFunc>],
    ) -> Result<Presentation, VaError> {
        let n = upper.len();
        if lower.len() != n || pairing.len() != n || pairing.iter().any(|r| r.len() != n) {
            return Err(VaError::DegenerateForm);
        }
        if Matrix::from_rows(pairing.to_vec()).rank() != n {
            return Err(VaError::DegenerateForm);
        }
        let mut gens = Vec::new();
        for (name, par, o) in upper.into_iter().chain(lower) {
            gens.push(Generator::new(name, par, o));
        }
        let mut entries = Vec::new();
        for (i, row) in pairing.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, n + j, LambdaPoly::from_terms(vec![(0, false, State::constant(c.clone()))])));
                }
            }
        }
        Ok(Presentation { gens, entries })
    }

    /// Odd generators with [b_i Λ b_j] = gram[i][j] χ.
    pub fn heisenberg(names: Vec<String>, gram: &[Vec<RatFunc>]) -> Presentation {
        let gens: Vec<Generator> = names
            .into_iter()
            .enumerate()
            .map(|(i, s)| Generator::new(s, 1, Origin::Heisenberg(i)))
            .collect();
        let mut entries = Vec::new();
        for (i, row) in gram.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, LambdaPoly::from_terms(vec![(0, true, State::constant(c.clone()))])));
                }
            }
        }
        Presentation { gens, entries }
    }
}

pub fn free_susy_algebra(
    gens: Vec<Generator>,
    table: Vec<(usize, usize, LambdaPoly)>,
    mode: Mode,
) -> Result<Algebra, VaError> {
    let mut seen = HashSet::new();
    for g in &gens {
        if !seen.insert(g.name.clone()) {
            return Err(VaError::DuplicateName(g.name.clone()));
        }
    }
    Algebra::new(gens, table, mode)
}

/// [G_Λ G] = (2∂ + 3λ + χD)G + (λ²χ/3)c
pub fn neveu_schwarz(c: &RatFunc, mode: Mode) -> Algebra {
    let g = Atom::new(0, true, 0, 0);
    let lp = LambdaPoly::from_terms(vec![
        (0, false, State::atom(g.partial()).scale(&RatFunc::from_int(2))),
        (1, false, State::atom(g).scale(&RatFunc::from_int(3))),
        (0, true, State::atom(g.apply_d())),
        (2, true, State::constant(c * &RatFunc::from_ratio(1, 3))),
    ]);
    free_susy_algebra(vec![Generator::new("G", 1, Origin::Abstract)], vec![(0, 0, lp)], mode)
        .expect("Neveu-Schwarz table is skew-symmetric")
}

/// One odd generator ψ with [ψ_Λ ψ] = χ, so that [ψ_λ ψ] = 1.
pub fn neutral_fermion(mode: Mode) -> Algebra {
    heisenberg(vec!["psi".into()], &[vec![RatFunc::one()]], mode)
}

/// [ā_Λ b̄] = (-1)^{p(a)(p(b)+1)} [a,b]‾ + χ κ (a|b). κ stands for k + h∨.
pub fn susy_affine(l: &LieSuperData, kappa: &RatFunc, mode: Mode) -> Algebra {
    Presentation::affine(l, kappa).build(mode).expect("affine table is skew-symmetric")
}

/// Charged fermions: `upper[i]` and `lower[j]` paired by `pairing[i][j]`.
pub fn susy_fermion(
    upper: Vec<(String, u8)>,
    lower: Vec<(String, u8)>,
    pairing: &[Vec<RatFunc>],
    mode: Mode,
) -> Result<Algebra, VaError> {
    let up = upper.into_iter().enumerate().map(|(i, (s, p))| (s, p, Origin::FermionUpper(i))).collect();
    let lo = lower.into_iter().enumerate().map(|(i, (s, p))| (s, p, Origin::FermionLower(i))).collect();
    Presentation::fermions(up, lo, pairing)?.build(mode)
}

pub fn heisenberg(names: Vec<String>, gram: &[Vec<RatFunc>], mode: Mode) -> Algebra {
    Presentation::heisenberg(names, gram).build(mode).expect("Heisenberg table is skew-symmetric")
}
