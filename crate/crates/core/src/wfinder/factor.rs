use std::fmt::Write as _;

use num_traits::{One, Zero};

use super::{perp_state, FreeField, WfError};
use crate::fock::{fock_basis, Heisenberg};
use crate::liesuper::LieSuperData;
use crate::scalars::{rat, Matrix, RatFunc, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    /// Simple root vectors of the block, in diagram order.
    pub roots: Vec<String>,
    /// The small algebra whose principal W-algebra the block's joint kernel is.
    pub factor: String,
    /// dim of the common perpendicular space of the block roots in 𝔥.
    pub perp_rank: usize,
    /// Number of perpendicular Heisenberg states (weight ≤ 3/2) that were screened.
    pub perp_states: usize,
    /// Whether every block screening killed all of them.
    pub perp_killed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    pub algebra: String,
    /// Simple roots in diagram order, with `*` marking nonisotropic ones.
    pub chain: Vec<String>,
    pub blocks: Vec<Block>,
}

impl FactorizationReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "factorization {}", self.algebra).unwrap();
        writeln!(s, "simple roots: {}", self.chain.join(" - ")).unwrap();
        for b in &self.blocks {
            writeln!(
                s,
                "block {}: W({}) | perp rank {} | perp states {} | killed {}",
                b.roots.join(","),
                b.factor,
                b.perp_rank,
                b.perp_states,
                if b.perp_killed { "yes" } else { "no" }
            )
            .unwrap();
        }
        s
    }

    pub fn passed(&self) -> bool {
        self.blocks.iter().all(|b| b.perp_killed)
    }
}

fn nonzero(x: &Rational) -> bool {
    !x.is_zero()
}

/// Orders the simple roots along the Dynkin diagram: a path, possibly ending in a triangle.
/// A nonisotropic node is put last.
fn diagram_order(adj: &[Vec<bool>], iso: &[bool]) -> Option<(Vec<usize>, bool)> {
    let n = adj.len();
    let deg: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| adj[i][j]).count()).collect();
    let tri: Vec<usize> = (0..n)
        .filter(|&i| deg[i] >= 2 && (0..n).any(|j| (0..n).any(|k| j < k && adj[i][j] && adj[i][k] && adj[j][k])))
        .collect();
    if n == 1 {
        return Some((vec![0], false));
    }
    let ends: Vec<usize> = (0..n).filter(|&i| deg[i] == 1).collect();
    let start = if tri.is_empty() {
        if ends.len() != 2 || deg.iter().any(|&d| d > 2) {
            return None;
        }
        // the nonisotropic end goes last
        if !iso[ends[0]] {
            ends[1]
        } else {
            ends[0]
        }
    } else {
        if tri.len() != 3 || ends.len() > 1 {
            return None;
        }
        match ends.first() {
            Some(&e) => e,
            None => {
                // a bare triangle
                return Some((tri, true));
            }
        }
    };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next: Vec<usize> = (0..n).filter(|&j| adj[cur][j] && j != prev && !order.contains(&j)).collect();
        if next.is_empty() {
            break;
        }
        if next.len() == 1 {
            prev = cur;
            cur = next[0];
            order.push(cur);
            continue;
        }
        // entering the triangle: its two far nodes close the diagram
        if next.len() == 2 && adj[next[0]][next[1]] {
            order.extend(next);
            break;
        }
        return None;
    }
    if order.len() != n {
        return None;
    }
    Some((order, !tri.is_empty()))
}

fn perp_basis(h: &Heisenberg, alphas: &[&Vec<Rational>]) -> Vec<Vec<Rational>> {
    let r = h.rank();
    if alphas.is_empty() {
        return (0..r).map(|i| (0..r).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    }
    let rows: Vec<Vec<RatFunc>> = alphas
        .iter()
        .map(|a| {
            (0..r)
                .map(|j| {
                    let mut e = vec![Rational::zero(); r];
                    e[j] = Rational::one();
                    RatFunc::from_rational(h.pair(a, &e))
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows)
        .kernel_basis()
        .into_iter()
        .map(|v| v.iter().map(|c| c.as_rational().expect("rational form")).collect())
        .collect()
}

/// Diagram order of the roots and the blocks of the pairing, each with its factor name.
/// `adj` is the nonzero-pairing relation and `iso` marks isotropic roots.
pub(crate) fn group_roots(adj: &[Vec<bool>], iso: &[bool]) -> Result<(Vec<usize>, Vec<(Vec<usize>, &'static str)>), WfError> {
    let n = adj.len();
    let (order, triangle) = diagram_order(adj, iso)
        .ok_or_else(|| WfError::NotPrincipalOddSystem("diagram is neither a path nor a path with a triangle".into()))?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut rest: &[usize] = &order;
    let tail = if triangle && n % 2 == 1 { 3 } else if n % 2 == 1 { 1 } else { 0 };
    while rest.len() > tail {
        groups.push(rest[..2].to_vec());
        rest = &rest[2..];
    }
    if !rest.is_empty() {
        groups.push(rest.to_vec());
    }
    let mut out = Vec::new();
    for g in groups {
        let factor = match g.len() {
            1 if !iso[g[0]] => "osp(1|2)",
            2 if iso[g[0]] && iso[g[1]] => "osp(2|2)",
            2 if iso[g[0]] => "osp(3|2)",
            3 if g.iter().all(|&i| iso[i]) => "osp(4|2)",
            _ => return Err(WfError::NotPrincipalOddSystem("roots do not pair up".into())),
        };
        out.push((g, factor));
    }
    Ok((order, out))
}

/// Splits the simple roots of a principal all-odd system into the blocks of the diagram
/// pairing, and checks that each block's screenings kill its perpendicular Heisenberg algebra
/// at weights ≤ 3/2.
pub fn factorization_report(l: &LieSuperData) -> Result<FactorizationReport, WfError> {
    let ff = FreeField::new(l).map_err(|e| WfError::NotPrincipalOddSystem(e.to_string()))?;
    let n = ff.roots.len();
    if n != ff.heis.rank() {
        return Err(WfError::NotPrincipalOddSystem(format!("{} simple roots for rank {}", n, ff.heis.rank())));
    }
    if let Some(&u) = ff.roots.iter().find(|&&u| l.parity(u) == 0) {
        return Err(WfError::NotPrincipalOddSystem(format!("{} is even", l.name_of(u))));
    }
    let h = &ff.heis;
    let ops = &ff.screenings;
    let adj: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| i != j && nonzero(&h.pair(&ops[i].h_alpha, &ops[j].h_alpha))).collect()).collect();
    let iso: Vec<bool> = ops.iter().map(|o| o.norm.is_zero()).collect();
    let (order, groups) = group_roots(&adj, &iso)?;
    let mut blocks = Vec::new();
    for (g, factor) in &groups {
        let alphas: Vec<&Vec<Rational>> = g.iter().map(|&i| &ops[i].h_alpha).collect();
        let dirs = perp_basis(h, &alphas);
        let aux = Heisenberg::new(
            (0..dirs.len()).map(|i| format!("p{}", i)).collect(),
            dirs.iter().map(|x| dirs.iter().map(|y| h.pair(x, y)).collect()).collect(),
        );
        let mut count = 0;
        let mut killed = true;
        for t in 0..=3 {
            for mono in fock_basis(&aux, &rat(t, 2)) {
                let st = perp_state(h, &dirs, &mono);
                count += 1;
                for &i in g {
                    if !ops[i].apply(h, &st)?.is_zero() {
                        killed = false;
                    }
                }
            }
        }
        blocks.push(Block {
            roots: g.iter().map(|&i| ops[i].root.clone()).collect(),
            factor: factor.to_string(),
            perp_rank: dirs.len(),
            perp_states: count,
            perp_killed: killed,
        });
    }
    let chain = order.iter().map(|&i| format!("{}{}", ops[i].root, if iso[i] { "" } else { "*" })).collect();
    Ok(FactorizationReport { algebra: l.name.clone(), chain, blocks })
}
