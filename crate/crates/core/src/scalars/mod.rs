//! Exact arithmetic over Q and Q(v), and kernels of matrices over Q(v).
//!
//! `v` is the formal square root of `k + h^vee`; all level dependence is carried by it.

mod matrix;
mod parse;
mod poly;
mod ratfunc;

pub use matrix::Matrix;
pub use parse::parse_ratfunc;
pub use poly::Poly;
pub use ratfunc::RatFunc;

use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at v = {at}")]
    Pole { at: Rational },
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Normal form of num/den.
pub fn normalize(num: Poly, den: Poly) -> Result<RatFunc, ScalarError> {
    RatFunc::new(num, den)
}

pub fn evaluate(r: &RatFunc, at: &Rational) -> Result<Rational, ScalarError> {
    r.evaluate(at)
}

pub fn kernel_basis(m: &Matrix) -> Vec<Vec<RatFunc>> {
    m.kernel_basis()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Parses "3", "-1/2" into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().ok()?;
    let d: num_bigint::BigInt = d.parse().ok()?;
    if d == 0.into() {
        return None;
    }
    Some(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    /// Independent gcd: subresultant pseudo-remainder sequence over Z[v].
    fn subresultant_gcd(a: &[i64], b: &[i64]) -> Poly {
        fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
            while v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
            v
        }
        fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
            let mut r = a.to_vec();
            let db = b.len() - 1;
            let lb = b[db].clone();
            let mut steps = a.len() as i64 - b.len() as i64 + 1;
            while r.len() >= b.len() && !r.is_empty() {
                let lr = r.last().unwrap().clone();
                let shift = r.len() - b.len();
                let mut nr: Vec<BigInt> = r.iter().map(|c| c * &lb).collect();
                for (j, bc) in b.iter().enumerate() {
                    nr[shift + j] -= &lr * bc;
                }
                r = trim(nr);
                steps -= 1;
            }
            while steps > 0 {
                r = r.iter().map(|c| c * &lb).collect();
                steps -= 1;
            }
            r
        }
        let mut f: Vec<BigInt> = trim(a.iter().map(|&x| x.into()).collect());
        let mut g: Vec<BigInt> = trim(b.iter().map(|&x| x.into()).collect());
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
        }
        if g.is_empty() {
            return Poly::from_coeffs(f.into_iter().map(Rational::from_integer).collect()).monic();
        }
        let mut gg = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = (f.len() - g.len()) as u32;
            let r = prem(&f, &g);
            if r.is_empty() {
                break;
            }
            if r.len() == 1 {
                return Poly::one();
            }
            f = g;
            let denom = &gg * h.pow(delta);
            g = r.iter().map(|c| c / &denom).collect();
            gg = f.last().unwrap().clone();
            h = if delta == 0 {
                h
            } else {
                gg.pow(delta) / h.pow(delta - 1)
            };
        }
        Poly::from_coeffs(g.into_iter().map(Rational::from_integer).collect()).monic()
    }

    #[test]
    fn normalize_examples() {
        let r = normalize(p(&[0, 3, 2]), p(&[0, 1])).unwrap();
        assert_eq!(r.to_text(), "2*v+3");
        let r = normalize(Poly::zero(), p(&[-1, 1])).unwrap();
        assert!(r.is_zero());
        assert!(r.denom().is_one());
        let r = normalize(p(&[-1, 0, 1]), p(&[-2, 2])).unwrap();
        assert_eq!(r.to_text(), "(v+1)/2");
        assert_eq!(r.denom(), &Poly::one());
        assert_eq!(normalize(p(&[1]), Poly::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn normalize_agrees_with_subresultant_oracle() {
        let a = [-1i64, 0, 1];
        let b = [-2i64, 2];
        assert_eq!(subresultant_gcd(&a, &b), p(&[-1, 1]));
        let a = [6i64, -5, -2, 1];
        let b = [-6i64, 1, 1];
        let g = subresultant_gcd(&a, &b);
        assert_eq!(g, p(&a).gcd(&p(&b)));
    }

    #[test]
    fn evaluate_examples() {
        let inv_nu = RatFunc::one() / RatFunc::nu();
        assert_eq!(evaluate(&inv_nu, &rat(2, 1)).unwrap(), rat(1, 2));
        let k = RatFunc::nu() * RatFunc::nu() - RatFunc::from_ratio(3, 2);
        assert_eq!(evaluate(&k, &rat(2, 1)).unwrap(), rat(5, 2));
        let pole = RatFunc::one() / (RatFunc::nu() - RatFunc::one());
        assert_eq!(evaluate(&pole, &rat(1, 1)), Err(ScalarError::Pole { at: rat(1, 1) }));
    }

    /// Rank over Q by the largest nonvanishing minor.
    fn minor_rank(m: &[Vec<Rational>]) -> usize {
        fn det(m: &[Vec<Rational>]) -> Rational {
            let n = m.len();
            if n == 1 {
                return m[0][0].clone();
            }
            let mut acc = Rational::zero();
            for j in 0..n {
                let sub: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let t = &m[0][j] * det(&sub);
                if j % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let (r, c) = (m.len(), m[0].len());
        for k in (1..=r.min(c)).rev() {
            for rows in subsets(r, k) {
                for cols in subsets(c, k) {
                    let sub: Vec<Vec<Rational>> =
                        rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
                    if !det(&sub).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rank3_kernel_against_minor_oracle() {
        // 4x6 of rank 3: rows 0..2 random-ish in v, row 3 = row0 + v*row1
        let nu = RatFunc::nu();
        let r0: Vec<RatFunc> = [1, 2, 0, -1, 3, 1].iter().map(|&x| RatFunc::from_int(x) * &nu).collect();
        let r1: Vec<RatFunc> = [0, 1, 1, 2, -1, 4].iter().map(|&x| RatFunc::from_int(x) + &nu).collect();
        let r2: Vec<RatFunc> = [2, 0, 1, 1, 1, -3].iter().map(|&x| RatFunc::from_int(x)).collect();
        let r3: Vec<RatFunc> = r0.iter().zip(&r1).map(|(a, b)| a + &(b * &nu)).collect();
        let m = Matrix::from_rows(vec![r0, r1, r2, r3]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 3);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let spec = m.evaluate(&rat(7, 3)).unwrap();
        let q: Vec<Vec<Rational>> = (0..4)
            .map(|i| spec.row(i).iter().map(|e| e.as_rational().unwrap()).collect())
            .collect();
        assert_eq!(minor_rank(&q), 3);
        assert_eq!(m.rank() + k.len(), 6);
    }

    fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
        (
            prop::collection::vec(-4i64..5, 0..4),
            prop::collection::vec(-4i64..5, 0..3),
        )
            .prop_map(|(n, d)| {
                let mut d = d;
                d.push(1);
                RatFunc::new(p(&n), p(&d)).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_ratfunc(), b in arb_ratfunc(), c in arb_ratfunc()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn evaluate_is_multiplicative(a in arb_ratfunc(), b in arb_ratfunc(), x in -20i64..20, y in 1i64..7) {
            let at = rat(x, y);
            if let (Ok(ea), Ok(eb)) = (a.evaluate(&at), b.evaluate(&at)) {
                prop_assert_eq!((&a * &b).evaluate(&at).unwrap(), ea * eb);
            }
        }

        #[test]
        fn kernel_rank_nullity(entries in prop::collection::vec(-2i64..3, 12), lin in -2i64..3) {
            let mut rows: Vec<Vec<RatFunc>> = entries
                .chunks(4)
                .map(|r| r.iter().map(|&x| RatFunc::from_int(x) + RatFunc::from_int(lin) * RatFunc::nu()).collect())
                .collect();
            let dep: Vec<RatFunc> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a - b).collect();
            rows.push(dep);
            let m = Matrix::from_rows(rows);
            let k = m.kernel_basis();
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
            prop_assert_eq!(m.rank() + k.len(), 4);
        }

        #[test]
        fn text_round_trip(a in arb_ratfunc()) {
            prop_assert_eq!(parse_ratfunc(&a.to_text()).unwrap(), a);
        }
    }
}
