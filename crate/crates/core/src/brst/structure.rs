use super::Complex;
use crate::scalars::Rational;
use crate::vacalc::{lambda_text, LambdaPoly, State};

#[derive(Clone, Debug)]
pub struct Mismatch {
    pub identity: String,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, Default)]
pub struct StructureReport {
    pub checked: usize,
    /// Every identity checked, in order.
    pub identities: Vec<String>,
    pub mismatches: Vec<Mismatch>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl Complex {
    /// Engine brackets in the ambient model against the closed forms carried by the blocks:
    /// [J Λ J], [φ Λ J], [φ Λ φ], [d_st Λ ·] and [d_f Λ ·] on every block generator.
    /// Returns `None` without an ambient model.
    pub fn verify_structure(&self) -> Option<StructureReport> {
        let amb = self.ambient.as_ref()?;
        let alg = &amb.space.alg;
        let names: Vec<String> = self.blocks.alg.generators().iter().map(|g| g.name.clone()).collect();
        let ng = names.len();
        let img: Vec<State> = (0..ng).map(|g| self.embed(&self.blocks.alg.gen(g)).unwrap()).collect();
        let mut rep = StructureReport::default();
        let mut check = |identity: String, computed: LambdaPoly, closed: &LambdaPoly| {
            let expected = self.embed_lambda(closed).unwrap();
            rep.checked += 1;
            rep.identities.push(identity.clone());
            if computed != expected {
                rep.mismatches.push(Mismatch {
                    identity,
                    expected: lambda_text(alg, &expected),
                    computed: lambda_text(alg, &computed),
                });
            }
        };
        let nj = self.low.len();
        for x in 0..ng {
            for y in 0..ng {
                // [J Λ φ] follows from [φ Λ J] by skew-symmetry and is not listed separately
                if x < nj && y >= nj {
                    continue;
                }
                let closed = self.blocks.alg.lambda_bracket(&self.blocks.alg.gen(x), &self.blocks.alg.gen(y));
                let computed = alg.lambda_bracket(&img[x], &img[y]);
                check(format!("[{} L {}]", names[x], names[y]), computed, &closed);
            }
        }
        let one = Rational::from_integer(1.into());
        for g in 0..ng {
            let computed = alg.lambda_bracket(&amb.d_st, &img[g]);
            check(format!("[d_st L {}]", names[g]), computed, &self.closed_d_st(g, &one));
            let computed = alg.lambda_bracket(&amb.d_f, &img[g]);
            check(format!("[d_f L {}]", names[g]), computed, &self.closed_d_f(g));
        }
        Some(rep)
    }
}
