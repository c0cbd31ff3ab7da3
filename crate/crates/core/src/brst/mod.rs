//! The SUSY BRST complex: building blocks, the differential d = d_st + d_f, charge and
//! weight gradings and the Miura projection.
//!
//! Two models are kept side by side. `blocks` is the subalgebra generated by the J_a
//! (a of nonpositive grade) and the φ^α, presented by its closed-form Λ-brackets; the
//! differential acts on it as an odd derivation fixed by its values on generators.
//! `ambient` (quantum only) is the full tensor product of currents and charged fermions,
//! where d_(0|0) is computed honestly from the element d and the closed forms are checked.

mod derivation;
mod structure;
#[cfg(test)]
mod tests;

pub use derivation::OddDerivation;
pub use structure::{Mismatch, StructureReport};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::liesuper::{grade, Elem, GradedBases, LieError, LieSuperData};
use crate::scalars::{RatFunc, Rational};
use crate::vacalc::{
    Algebra, Atom, Generator, LambdaPoly, Mode, Monomial, Origin, Presentation, State, VaError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BrstError {
    #[error("d_(0|0)^2 does not vanish on {witness}")]
    DifferentialNotSquareZero { witness: String },
    #[error("{0} has a component of positive grade")]
    PositiveGradePart(String),
    #[error("state is not homogeneous for the grading")]
    Inhomogeneous,
    #[error("state involves {0}, which is not a current block")]
    NotInBlockSubalgebra(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Va(#[from] VaError),
}

/// Knobs for building a complex. `cubic_scale` multiplies the fermionic cubic term of d_st;
/// anything other than 1 breaks d^2 = 0 and exists for fault injection.
#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub mode: Mode,
    pub with_ambient: bool,
    pub cubic_scale: Rational,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { mode: Mode::Quantum, with_ambient: true, cubic_scale: Rational::one() }
    }
}

/// An algebra together with d, d_st and d_f as odd derivations.
pub struct Space {
    pub alg: Algebra,
    pub d: OddDerivation,
    pub d_st: OddDerivation,
    pub d_f: OddDerivation,
}

impl Space {
    fn new(alg: Algebra, st: Vec<State>, f: Vec<State>) -> Space {
        let full = st.iter().zip(&f).map(|(a, b)| a + b).collect();
        Space { alg, d: OddDerivation::new(full), d_st: OddDerivation::new(st), d_f: OddDerivation::new(f) }
    }

    fn set_images(&mut self, st: Vec<State>, f: Vec<State>) {
        self.d = OddDerivation::new(st.iter().zip(&f).map(|(a, b)| a + b).collect());
        self.d_st = OddDerivation::new(st);
        self.d_f = OddDerivation::new(f);
    }

    pub fn differential(&self, x: &State) -> State {
        self.d.apply(&self.alg, x)
    }

    /// d(d(g)) = 0 for every generator g.
    pub fn check_square_zero(&self) -> Result<(), BrstError> {
        for g in 0..self.alg.generators().len() {
            let x = self.alg.gen(g);
            if !self.differential(&self.differential(&x)).is_zero() {
                return Err(BrstError::DifferentialNotSquareZero { witness: self.alg.generators()[g].name.clone() });
            }
        }
        Ok(())
    }
}

/// Currents ⊗ charged fermions, with the elements d_st, d_f and the images of the blocks.
pub struct Ambient {
    pub space: Space,
    pub d_st: State,
    pub d_f: State,
    /// J_a for each entry of `Complex::low`.
    pub blocks: Vec<State>,
}

pub struct Complex {
    pub lie: LieSuperData,
    pub graded: GradedBases,
    pub mode: Mode,
    /// k + h∨ in quantum mode (ν²), 1 in classical mode.
    pub kappa: RatFunc,
    /// Basis indices of grade ≤ 0, in basis order; J_{low[i]} is block generator i.
    pub low: Vec<usize>,
    pub blocks: Space,
    pub ambient: Option<Ambient>,
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

fn gen_state(i: usize, odd: bool) -> State {
    State::atom(Atom::new(i, odd, 0, 0))
}

/// Quantum complex at generic level k = ν² − h∨, with the ambient model.
pub fn build_complex(l: &LieSuperData) -> Result<Complex, BrstError> {
    build_complex_with(l, &BuildOptions::default())
}

/// Classical complex: Poisson brackets with central term (D+χ)(a|b), blocks only.
pub fn classical_complex(l: &LieSuperData) -> Result<Complex, BrstError> {
    build_complex_with(l, &BuildOptions { mode: Mode::Classical, with_ambient: false, ..Default::default() })
}

pub fn build_complex_with(l: &LieSuperData, opts: &BuildOptions) -> Result<Complex, BrstError> {
    let graded = grade(l)?;
    let low: Vec<usize> = (0..l.dim()).filter(|&i| !graded.grading[i].is_positive()).collect();
    let kappa = match opts.mode {
        Mode::Quantum => RatFunc::nu().pow(2),
        Mode::Classical => RatFunc::one(),
    };
    let mut cx = Complex {
        lie: l.clone(),
        graded,
        mode: opts.mode,
        kappa,
        low,
        blocks: Space::new(Algebra::new(vec![], vec![], opts.mode)?, vec![], vec![]),
        ambient: None,
    };
    cx.blocks = Space::new(cx.block_presentation().build(opts.mode)?, vec![], vec![]);
    let n = cx.low.len() + cx.m();
    let mut st = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    for g in 0..n {
        st.push(cx.closed_d_st(g, &opts.cubic_scale).term(0, 0));
        f.push(cx.closed_d_f(g).term(0, 0));
    }
    cx.blocks.set_images(st, f);
    cx.blocks.check_square_zero()?;
    if opts.with_ambient && opts.mode == Mode::Quantum {
        let amb = cx.build_ambient(&opts.cubic_scale)?;
        amb.space.check_square_zero()?;
        cx.ambient = Some(amb);
    }
    Ok(cx)
}

impl Complex {
    /// Number of positive root vectors |I₊|.
    pub fn m(&self) -> usize {
        self.graded.u_plus.len()
    }

    /// p(α) = p(u_α).
    pub fn p_alpha(&self, a: usize) -> u8 {
        self.lie.parity(self.graded.u_plus[a])
    }

    fn u(&self, a: usize) -> Elem {
        self.lie.basis_elem(self.graded.u_plus[a])
    }

    fn u_dual(&self, a: usize) -> &Elem {
        &self.graded.u_dual[a]
    }

    /// Block generator index of J_{basis i}.
    pub fn j_index(&self, basis: usize) -> Option<usize> {
        self.low.iter().position(|&b| b == basis)
    }

    /// Block generator index of φ^α.
    pub fn phi_index(&self, a: usize) -> usize {
        self.low.len() + a
    }

    pub fn phi(&self, a: usize) -> State {
        gen_state(self.phi_index(a), self.p_alpha(a) == 0)
    }

    /// J_x in the block algebra for x of grade ≤ 0.
    pub fn block_j(&self, x: &Elem) -> Result<State, BrstError> {
        let mut s = State::zero();
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let g = self.j_index(i).ok_or_else(|| BrstError::PositiveGradePart(self.lie.elem_text(x)))?;
            s.add_scaled(&gen_state(g, self.lie.parity(i) == 0), &rf(c));
        }
        Ok(s)
    }

    fn pi_low(&self, x: &Elem) -> Elem {
        x.iter()
            .enumerate()
            .map(|(i, c)| if self.graded.grading[i].is_positive() { Rational::zero() } else { c.clone() })
            .collect()
    }

    fn block_presentation(&self) -> Presentation {
        let l = &self.lie;
        let mut gens = Vec::new();
        for &b in &self.low {
            gens.push(Generator::new(format!("J_{}", l.name_of(b)), 1 - l.parity(b), Origin::Affine(b)));
        }
        for a in 0..self.m() {
            let name = format!("Phi^{}", l.name_of(self.graded.u_plus[a]));
            gens.push(Generator::new(name, 1 - self.p_alpha(a), Origin::FermionUpper(a)));
        }
        let mut entries = Vec::new();
        for (ia, &a) in self.low.iter().enumerate() {
            for (ib, &b) in self.low.iter().enumerate() {
                let lp = self.closed_jj(a, b);
                if !lp.is_zero() {
                    entries.push((ia, ib, lp));
                }
            }
        }
        for al in 0..self.m() {
            for (ib, &b) in self.low.iter().enumerate() {
                let lp = self.closed_phi_j(al, b);
                if !lp.is_zero() {
                    entries.push((self.phi_index(al), ib, lp));
                }
            }
        }
        Presentation { gens, entries }
    }

    /// [J_a Λ J_b] = (−1)^{p(a)(p(b)+1)} J_[a,b] + κ(D+χ)(a|b)
    pub fn closed_jj(&self, a: usize, b: usize) -> LambdaPoly {
        let l = &self.lie;
        let br = l.bracket(&l.basis_elem(a), &l.basis_elem(b));
        let s = sgn(l.parity(a) * (l.parity(b) + 1) % 2 == 1);
        let ev = self.block_j(&br).expect("g≤0 is a subalgebra").scale(&s);
        let chi = State::constant(&self.kappa * &rf(l.form_basis(a, b)));
        LambdaPoly::from_terms(vec![(0, false, ev), (0, true, chi)])
    }

    /// [φ^α Λ J_a] = Σ_β (−1)^{p(α)+1} ([a,u^α]|u_β) φ^β
    pub fn closed_phi_j(&self, al: usize, a: usize) -> LambdaPoly {
        let l = &self.lie;
        let x = l.bracket(&l.basis_elem(a), self.u_dual(al));
        let s = sgn(self.p_alpha(al) == 0);
        let mut ev = State::zero();
        for be in 0..self.m() {
            let c = l.form(&x, &self.u(be));
            if !c.is_zero() {
                ev.add_scaled(&self.phi(be), &(&s * &rf(&c)));
            }
        }
        LambdaPoly::from_terms(vec![(0, false, ev)])
    }

    /// Closed form of [d_st Λ g] for a block generator g.
    pub fn closed_d_st(&self, g: usize, cubic_scale: &Rational) -> LambdaPoly {
        let l = &self.lie;
        let alg_free = |x: &State, y: &State| self.blocks.alg.normal_product(x, y);
        if g < self.low.len() {
            let a = self.low[g];
            let ae = l.basis_elem(a);
            let pa = l.parity(a);
            let mut ev = State::zero();
            let mut chi = State::zero();
            for be in 0..self.m() {
                let pb = self.p_alpha(be);
                let x = self.pi_low(&l.bracket(&self.u(be), &ae));
                if x.iter().any(|c| !c.is_zero()) {
                    let j = self.block_j(&x).unwrap();
                    ev.add_scaled(&alg_free(&self.phi(be), &j), &sgn((pa + 1) * pb % 2 == 1));
                }
                let c = l.form(&self.u(be), &ae);
                if !c.is_zero() {
                    let k = -(&(&sgn(pb == 1) * &self.kappa) * &rf(&c));
                    ev.add_scaled(&State::atom(Atom::new(self.phi_index(be), pb == 0, 1, 0)), &k);
                    chi.add_scaled(&self.phi(be), &k);
                }
            }
            LambdaPoly::from_terms(vec![(0, false, ev), (0, true, chi)])
        } else {
            let al = g - self.low.len();
            let pal = self.p_alpha(al);
            let half = rf(&(cubic_scale / Rational::from_integer(2.into())));
            let mut ev = State::zero();
            for be in 0..self.m() {
                let x = l.bracket(&self.u(be), self.u_dual(al));
                let s = sgn((pal + 1) * self.p_alpha(be) % 2 == 1);
                for ga in 0..self.m() {
                    let c = l.form(&x, &self.u(ga));
                    if !c.is_zero() {
                        let t = alg_free(&self.phi(be), &self.phi(ga));
                        ev.add_scaled(&t, &(&(&s * &half) * &rf(&c)));
                    }
                }
            }
            LambdaPoly::from_terms(vec![(0, false, ev)])
        }
    }

    /// Closed form of [d_f Λ g] for a block generator g.
    pub fn closed_d_f(&self, g: usize) -> LambdaPoly {
        if g >= self.low.len() {
            return LambdaPoly::zero();
        }
        let l = &self.lie;
        let a = self.low[g];
        let ae = l.basis_elem(a);
        let mut ev = State::zero();
        for be in 0..self.m() {
            let c = l.form(&l.osp.f, &l.bracket(&self.u(be), &ae));
            if !c.is_zero() {
                let s = sgn((l.parity(a) + 1) * self.p_alpha(be) % 2 == 1);
                ev.add_scaled(&self.phi(be), &(&s * &rf(&c)));
            }
        }
        LambdaPoly::from_terms(vec![(0, false, ev)])
    }

    fn fermion_presentation(&self) -> Result<Presentation, BrstError> {
        let l = &self.lie;
        let m = self.m();
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for a in 0..m {
            let name = l.name_of(self.graded.u_plus[a]);
            upper.push((format!("Phi^{}", name), 1 - self.p_alpha(a), Origin::FermionUpper(a)));
            lower.push((format!("phi_{}", name), self.p_alpha(a), Origin::FermionLower(a)));
        }
        let pairing: Vec<Vec<RatFunc>> =
            (0..m).map(|i| (0..m).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect()).collect();
        Ok(Presentation::fermions(upper, lower, &pairing)?)
    }

    /// The charged fermions F(Ā) on their own, φ^α before φ_α.
    pub fn fermion_algebra(&self) -> Result<Algebra, BrstError> {
        Ok(self.fermion_presentation()?.build(self.mode)?)
    }

    fn build_ambient(&self, cubic_scale: &Rational) -> Result<Ambient, BrstError> {
        let l = &self.lie;
        let n = l.dim();
        let m = self.m();
        let pres = Presentation::affine(l, &self.kappa).merge(self.fermion_presentation()?);
        let alg = pres.build(Mode::Quantum)?;
        let cur = |i: usize| gen_state(i, l.parity(i) == 0);
        let up = |a: usize| gen_state(n + a, self.p_alpha(a) == 0);
        let lo = |a: usize| gen_state(n + m + a, self.p_alpha(a) == 1);
        // φ_x for x in n
        let lo_elem = |x: &Elem| {
            let mut s = State::zero();
            for (a, &b) in self.graded.u_plus.iter().enumerate() {
                if !x[b].is_zero() {
                    s.add_scaled(&lo(a), &rf(&x[b]));
                }
            }
            s
        };
        let mut d_st = State::zero();
        let half = rf(&(cubic_scale / Rational::from_integer(2.into())));
        for a in 0..m {
            d_st = &d_st + &alg.normal_product(&cur(self.graded.u_plus[a]), &up(a));
            for b in 0..m {
                let x = l.bracket(&self.u(a), &self.u(b));
                if x.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let s = sgn(self.p_alpha(a) * (self.p_alpha(b) + 1) % 2 == 1);
                let t = alg.product(&[lo_elem(&x), up(b), up(a)]);
                d_st.add_scaled(&t, &(&s * &half));
            }
        }
        let mut d_f = State::zero();
        for a in 0..m {
            let c = l.form(&l.osp.f, &self.u(a));
            if !c.is_zero() {
                d_f.add_scaled(&up(a), &-rf(&c));
            }
        }
        let mut blocks = Vec::new();
        for &a in &self.low {
            let ae = l.basis_elem(a);
            let mut j = cur(a);
            for be in 0..m {
                let x = l.bracket(&self.u(be), &ae);
                let s = sgn((l.parity(a) + 1) * (self.p_alpha(be) + 1) % 2 == 1);
                for ga in 0..m {
                    let c = l.form(self.u_dual(ga), &x);
                    if !c.is_zero() {
                        j.add_scaled(&alg.normal_product(&up(be), &lo(ga)), &(&s * &rf(&c)));
                    }
                }
            }
            blocks.push(j);
        }
        let dd_st = alg.apply_d(&d_st);
        let dd_f = alg.apply_d(&d_f);
        let ng = alg.generators().len();
        let mut st = Vec::with_capacity(ng);
        let mut f = Vec::with_capacity(ng);
        for g in 0..ng {
            st.push(alg.va_bracket(&dd_st, &alg.gen(g)).coeff(0));
            f.push(alg.va_bracket(&dd_f, &alg.gen(g)).coeff(0));
        }
        Ok(Ambient { space: Space::new(alg, st, f), d_st, d_f, blocks })
    }

    /// Image of a block state in the ambient algebra.
    pub fn embed(&self, x: &State) -> Option<State> {
        let amb = self.ambient.as_ref()?;
        let alg = &amb.space.alg;
        let n = self.lie.dim();
        let image = |a: &Atom| {
            let g = a.gen as usize;
            let mut s = if g < self.low.len() {
                amb.blocks[g].clone()
            } else {
                let al = g - self.low.len();
                gen_state(n + al, self.p_alpha(al) == 0)
            };
            if a.d == 1 {
                s = alg.apply_d(&s);
            }
            for _ in 0..a.p {
                s = alg.apply_partial(&s);
            }
            s
        };
        let mut out = State::zero();
        for (mono, c) in x.terms() {
            let factors: Vec<State> = mono.atoms().iter().map(image).collect();
            out.add_scaled(&alg.product(&factors), c);
        }
        Some(out)
    }

    pub fn embed_lambda(&self, lp: &LambdaPoly) -> Option<LambdaPoly> {
        self.ambient.as_ref()?;
        Some(lp.map_states(|s| self.embed(s).unwrap()))
    }

    /// d_(0|0) on a block state.
    pub fn differential(&self, x: &State) -> State {
        self.blocks.differential(x)
    }

    /// Charge of a monomial-homogeneous state of `alg` (either model): φ^α counts 1, φ_α counts −1.
    pub fn charge_of(&self, alg: &Algebra, x: &State) -> Result<i64, BrstError> {
        self.grading_of(alg, x, |o| match o {
            Origin::FermionUpper(_) => 1,
            Origin::FermionLower(_) => -1,
            _ => 0,
        })
    }

    /// Weight: −2j_a for currents and blocks, 2j_α for φ^α, −2j_α for φ_α.
    pub fn weight_of(&self, alg: &Algebra, x: &State) -> Result<i64, BrstError> {
        let two = |r: &Rational| (r * Rational::from_integer(2.into())).to_integer().try_into().unwrap_or(0i64);
        self.grading_of(alg, x, |o| match o {
            Origin::Affine(i) => -two(&self.graded.grading[*i]),
            Origin::FermionUpper(a) => two(self.graded.j(*a)),
            Origin::FermionLower(a) => -two(self.graded.j(*a)),
            _ => 0,
        })
    }

    fn grading_of<F: Fn(&Origin) -> i64>(&self, alg: &Algebra, x: &State, f: F) -> Result<i64, BrstError> {
        let mut val = None;
        for (mono, _) in x.terms() {
            let v: i64 = mono.atoms().iter().map(|a| f(&alg.generators()[a.gen as usize].origin)).sum();
            match val {
                None => val = Some(v),
                Some(w) if w != v => return Err(BrstError::Inhomogeneous),
                _ => {}
            }
        }
        val.ok_or(BrstError::Inhomogeneous)
    }

    /// Projection of a charge-0 block state onto the grade-0 currents.
    pub fn miura(&self, x: &State) -> Result<State, BrstError> {
        let mut out = State::zero();
        'terms: for (mono, c) in x.terms() {
            for a in mono.atoms() {
                let g = a.gen as usize;
                if g >= self.low.len() {
                    return Err(BrstError::NotInBlockSubalgebra(self.blocks.alg.generators()[g].name.clone()));
                }
                if !self.graded.grading[self.low[g]].is_zero() {
                    continue 'terms;
                }
            }
            out.add_term(mono.clone(), c);
        }
        Ok(out)
    }

    /// Names of the grade-0 block generators (the image of the Miura map).
    pub fn grade_zero_blocks(&self) -> Vec<usize> {
        (0..self.low.len()).filter(|&g| self.graded.grading[self.low[g]].is_zero()).collect()
    }

    pub fn monomial_is_block(&self, m: &Monomial) -> bool {
        m.atoms().iter().all(|a| (a.gen as usize) < self.low.len())
    }
}
