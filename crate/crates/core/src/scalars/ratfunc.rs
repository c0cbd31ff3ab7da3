use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{fmt_int_poly, int_term_count, Poly};
use super::{Rational, ScalarError};

/// Element of Q(v). Numerator and denominator are coprime and the denominator is monic,
/// so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        RatFunc::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(c: Rational) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// The formal parameter v.
    pub fn nu() -> Self {
        RatFunc::from_poly(Poly::var())
    }

    /// Builds num/den and brings it to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(RatFunc::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g), den.div_exact(&g))
            }
        };
        let l = den.lead();
        if l.is_one() {
            RatFunc { num, den }
        } else {
            let inv = l.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a rational constant, if it does not depend on v.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_one() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFunc, ScalarError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc, ScalarError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        let mut acc = RatFunc::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Specialize v to a rational value.
    pub fn evaluate(&self, at: &Rational) -> Result<Rational, ScalarError> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(ScalarError::Pole { at: at.clone() });
        }
        Ok(self.num.eval(at) / d)
    }

    /// Substitute v -> v0 but keep the result in Q(v) (a constant).
    pub fn specialize(&self, at: &Rational) -> Result<RatFunc, ScalarError> {
        self.evaluate(at).map(RatFunc::from_rational)
    }

    /// Canonical text: integer coefficients, "v" for the parameter, e.g. "(2*v^2+3)/(v-1)".
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let (cn, pn) = self.num.primitive_integer();
        let (cd, pd) = self.den.primitive_integer();
        let r = cn / cd;
        let top: Vec<BigInt> = pn.iter().map(|c| c * r.numer()).collect();
        let bottom: Vec<BigInt> = pd.iter().map(|c| c * r.denom()).collect();
        let top_s = fmt_int_poly(&top);
        if bottom.len() == 1 && bottom[0].is_one() {
            return top_s;
        }
        let bottom_s = fmt_int_poly(&bottom);
        let top_s = if int_term_count(&top) > 1 { format!("({})", top_s) } else { top_s };
        if !bottom_s.contains(['*', '+', '-']) {
            format!("{}/{}", top_s, bottom_s)
        } else {
            format!("{}/({})", top_s, bottom_s)
        }
    }

    /// True when the text form needs parentheses to act as a factor.
    pub fn is_compound(&self) -> bool {
        let t = self.to_text();
        t.contains('/') || t[1..].contains(['+', '-'])
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::from_int(n)
    }
}

impl From<Rational> for RatFunc {
    fn from(c: Rational) -> Self {
        RatFunc::from_rational(c)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RatFunc { num, den: Poly::one() };
            }
            return RatFunc::normalized(num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let (b1, d1) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (self.den.div_exact(&g), rhs.den.div_exact(&g))
        };
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        let den = &self.den * &d1;
        RatFunc::normalized(num, den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc { num: &self.num * &rhs.num, den: Poly::one() };
        }
        if let Some(c) = self.as_rational() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_rational() {
            return self.scale(&c);
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.div_exact(&g1), rhs.den.div_exact(&g1))
        };
        let (c, b) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        let num = &a * &c;
        let den = &b * &d;
        // coprime by construction; only the leading coefficient needs fixing
        let l = den.lead();
        if l.is_one() {
            RatFunc { num, den }
        } else {
            let inv = l.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use `checked_div` for fallible division.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero in Q(v)")
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl AddAssign<&RatFunc> for RatFunc {
    fn add_assign(&mut self, rhs: &RatFunc) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&RatFunc> for RatFunc {
    fn sub_assign(&mut self, rhs: &RatFunc) {
        *self = &*self - rhs;
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}
