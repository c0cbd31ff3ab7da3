use super::state::{LPoly, Monomial, State};
use super::factorial;
use crate::scalars::{RatFunc, Rational};

/// `even(λ) + χ chi(λ)`. Entries store plain λ-coefficients; the n-th products carry the n!.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LambdaPoly {
    pub even: LPoly,
    pub chi: LPoly,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly::default()
    }

    pub fn new(even: LPoly, chi: LPoly) -> Self {
        LambdaPoly { even: even.trimmed(), chi: chi.trimmed() }
    }

    /// Builds from (λ-power, has χ, coefficient) triples.
    pub fn from_terms(terms: Vec<(usize, bool, State)>) -> Self {
        let mut lp = LambdaPoly::zero();
        for (n, x, s) in terms {
            lp.part_mut(x).add_at(n, &s, &RatFunc::one());
        }
        lp.trim()
    }

    fn trim(self) -> Self {
        LambdaPoly::new(self.even, self.chi)
    }

    fn part_mut(&mut self, chi: bool) -> &mut LPoly {
        if chi {
            &mut self.chi
        } else {
            &mut self.even
        }
    }

    pub fn part(&self, chi: bool) -> &LPoly {
        if chi {
            &self.chi
        } else {
            &self.even
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.chi.is_zero()
    }

    /// Plain coefficient of λ^n (χ^i).
    pub fn term(&self, n: usize, i: u8) -> State {
        self.part(i == 1).coeff(n)
    }

    /// A_(n|i)B.
    pub fn coeff(&self, n: usize, i: u8) -> State {
        self.term(n, i).scale_q(&Rational::from_integer(factorial(n)))
    }

    pub fn add_scaled(&mut self, other: &LambdaPoly, c: &RatFunc) {
        self.even.add_scaled(&other.even, c);
        self.chi.add_scaled(&other.chi, c);
        self.even = std::mem::take(&mut self.even).trimmed();
        self.chi = std::mem::take(&mut self.chi).trimmed();
    }

    pub fn scale(&self, c: &RatFunc) -> LambdaPoly {
        LambdaPoly::new(self.even.scale(c), self.chi.scale(c))
    }

    pub fn sub(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut r = self.clone();
        r.add_scaled(other, &-RatFunc::one());
        r
    }

    pub fn map_states<F: FnMut(&State) -> State>(&self, mut f: F) -> LambdaPoly {
        LambdaPoly::new(self.even.map(&mut f), self.chi.map(&mut f))
    }

    pub fn map_coeffs<F: FnMut(&RatFunc) -> RatFunc>(&self, mut f: F) -> LambdaPoly {
        self.map_states(|s| s.map_coeffs(&mut f))
    }

    /// Vacuum-proportional part.
    pub fn central(&self) -> LambdaPoly {
        self.map_states(|s| State::constant(s.constant_part()))
    }

    pub fn noncentral(&self) -> LambdaPoly {
        self.map_states(|s| s.without_constant())
    }

    /// All (n, χ, coefficient) with nonzero coefficient, χ = 0 first, then by λ-power.
    pub fn entries(&self) -> Vec<(usize, bool, &State)> {
        let mut out = Vec::new();
        for chi in [false, true] {
            for (n, s) in self.part(chi).0.iter().enumerate() {
                if !s.is_zero() {
                    out.push((n, chi, s));
                }
            }
        }
        out
    }

    /// Scalar coefficient of λ^n χ^i on the vacuum.
    pub fn central_coeff(&self, n: usize, i: u8) -> RatFunc {
        self.term(n, i).coeff(&Monomial::vacuum())
    }

    pub fn degree(&self) -> Option<usize> {
        match (self.even.degree(), self.chi.degree()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0).max(b.unwrap_or(0))),
        }
    }
}
