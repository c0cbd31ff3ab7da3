use std::collections::HashMap;
use std::sync::Mutex;

use crate::scalars::RatFunc;
use crate::vacalc::{Algebra, Monomial, State};

/// An odd derivation commuting with ∂ and anticommuting with D, given by its generator images.
pub struct OddDerivation {
    images: Vec<State>,
    cache: Mutex<HashMap<Monomial, State>>,
}

impl OddDerivation {
    pub fn new(images: Vec<State>) -> Self {
        OddDerivation { images, cache: Mutex::new(HashMap::new()) }
    }

    pub fn image(&self, g: usize) -> &State {
        &self.images[g]
    }

    pub fn apply(&self, alg: &Algebra, x: &State) -> State {
        let mut out = State::zero();
        for (m, c) in x.terms() {
            out.add_scaled(&self.apply_mono(alg, m), c);
        }
        out
    }

    fn apply_mono(&self, alg: &Algebra, m: &Monomial) -> State {
        if m.is_empty() {
            return State::zero();
        }
        if let Some(s) = self.cache.lock().unwrap().get(m) {
            return s.clone();
        }
        let a = m.atoms()[0];
        let out = if m.len() == 1 {
            let mut s = self.images[a.gen as usize].clone();
            if a.d == 1 {
                s = -&alg.apply_d(&s);
            }
            for _ in 0..a.p {
                s = alg.apply_partial(&s);
            }
            s
        } else {
            // d:aR: = :(da)R: + (−1)^{p(a)} :a(dR):
            let rest = m.rest();
            let head = State::atom(a);
            let mut s = alg.normal_product(&self.apply_mono(alg, &Monomial::atom(a)), &State::monomial(rest.clone(), RatFunc::one()));
            let sign = if a.odd { -RatFunc::one() } else { RatFunc::one() };
            s.add_scaled(&alg.normal_product(&head, &self.apply_mono(alg, &rest)), &sign);
            s
        };
        self.cache.lock().unwrap().insert(m.clone(), out.clone());
        out
    }
}
