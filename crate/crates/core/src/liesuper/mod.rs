//! Finite basic Lie superalgebras with a distinguished osp(1|2) subalgebra, and the
//! gradings, dual bases and root data derived from them.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalars::{rat, Matrix, RatFunc, Rational};

/// Coordinates with respect to the basis.
pub type Elem = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Antisymmetry { x: String, y: String },
    ParityMismatch { x: String, y: String },
    Jacobi { x: String, y: String, z: String },
    FormNotEven { x: String, y: String },
    FormNotSupersymmetric { x: String, y: String },
    FormNotInvariant { x: String, y: String, z: String },
    FormDegenerate,
    BadNormalization { what: String },
    OspRelation { what: String },
    Cartan { what: String },
    NotRootVector { x: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { x, y } => write!(f, "super-antisymmetry fails for ({}, {})", x, y),
            Violation::ParityMismatch { x, y } => write!(f, "[{}, {}] has the wrong parity", x, y),
            Violation::Jacobi { x, y, z } => write!(f, "JacobiViolation at ({}, {}, {})", x, y, z),
            Violation::FormNotEven { x, y } => write!(f, "form pairs {} and {} of different parity", x, y),
            Violation::FormNotSupersymmetric { x, y } => write!(f, "form not supersymmetric on ({}, {})", x, y),
            Violation::FormNotInvariant { x, y, z } => write!(f, "FormNotInvariant at ({}, {}, {})", x, y, z),
            Violation::FormDegenerate => write!(f, "form is degenerate"),
            Violation::BadNormalization { what } => write!(f, "BadNormalization: {}", what),
            Violation::OspRelation { what } => write!(f, "osp(1|2) relation fails: {}", what),
            Violation::Cartan { what } => write!(f, "cartan subalgebra: {}", what),
            Violation::NotRootVector { x } => write!(f, "{} is not an ad-cartan eigenvector", x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid algebra data:\n{}", .0.iter().map(|v| format!("  {}", v)).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Violation>),
    #[error("H is not diagonal on basis element {0}")]
    NonDiagonal(String),
    #[error("Casimir does not act as a scalar")]
    CasimirNotScalar,
    #[error("unknown algebra '{0}'")]
    UnknownAlgebra(String),
    #[error("io error: {0}")]
    Io(String),
}

impl LieError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            LieError::Invalid(v) => v,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quintuple {
    pub e_big: Elem,
    pub e: Elem,
    pub h: Elem,
    pub f: Elem,
    pub f_big: Elem,
}

#[derive(Debug, Clone)]
pub struct LieSuperData {
    pub name: String,
    names: Vec<String>,
    parity: Vec<u8>,
    /// Sparse structure constants, row-major over ordered basis pairs.
    table: Vec<Vec<(usize, Rational)>>,
    form: Vec<Rational>,
    pub osp: Quintuple,
    pub cartan: Vec<usize>,
    /// Weight (eigenvalues on the cartan basis) of each non-cartan basis element.
    pub roots: BTreeMap<usize, Vec<Rational>>,
}

pub const BUNDLED: [&str; 4] = ["osp12", "sl21", "sl32", "osp32"];

fn bundled_text(name: &str) -> Option<&'static str> {
    match name {
        "osp12" => Some(include_str!("../../data/osp12.alg")),
        "sl21" => Some(include_str!("../../data/sl21.alg")),
        "sl32" => Some(include_str!("../../data/sl32.alg")),
        "osp32" => Some(include_str!("../../data/osp32.alg")),
        _ => None,
    }
}

/// Environment variable naming a directory of `.alg` files that shadows the bundled data.
pub const DATA_DIR_ENV: &str = "SUSYW_DATA_DIR";

/// Loads a bundled algebra by short name, or an `.alg` file by path.
pub fn load_named(name: &str) -> Result<LieSuperData, LieError> {
    if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
        let p = PathBuf::from(dir).join(format!("{}.alg", name));
        if p.exists() {
            let text = std::fs::read_to_string(&p).map_err(|e| LieError::Io(e.to_string()))?;
            return load_algebra(&text, name);
        }
    }
    if let Some(text) = bundled_text(name) {
        return load_algebra(text, name);
    }
    let p = PathBuf::from(name);
    if p.exists() {
        let text = std::fs::read_to_string(&p).map_err(|e| LieError::Io(e.to_string()))?;
        let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or(name).to_string();
        return load_algebra(&text, &stem);
    }
    Err(LieError::UnknownAlgebra(name.to_string()))
}

pub fn load_algebra(text: &str, name: &str) -> Result<LieSuperData, LieError> {
    let raw = parse::parse_document(text)?;
    let n = raw.names.len();
    let mut violations = Vec::new();
    let mut table: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n * n];
    let mut given = vec![false; n * n];
    for (x, y, _, comb) in &raw.brackets {
        let (x, y) = (*x, *y);
        let sign = sgn(raw.parity[x] * raw.parity[y]);
        let mirrored: Vec<(usize, Rational)> = comb.iter().map(|(k, c)| (*k, -(c * &sign))).collect();
        if given[y * n + x] && !same_comb(&table[y * n + x], &mirrored) {
            violations.push(Violation::Antisymmetry { x: raw.names[x].clone(), y: raw.names[y].clone() });
        }
        if given[x * n + y] && !same_comb(&table[x * n + y], comb) {
            violations.push(Violation::Antisymmetry { x: raw.names[x].clone(), y: raw.names[y].clone() });
        }
        table[x * n + y] = comb.clone();
        table[y * n + x] = mirrored;
        given[x * n + y] = true;
        given[y * n + x] = true;
    }
    let mut form = vec![Rational::zero(); n * n];
    let mut form_given = vec![false; n * n];
    for (x, y, _, v) in &raw.form {
        let (x, y) = (*x, *y);
        let mirrored = v * sgn(raw.parity[x] * raw.parity[y]);
        if form_given[y * n + x] && form[y * n + x] != mirrored {
            violations.push(Violation::FormNotSupersymmetric { x: raw.names[x].clone(), y: raw.names[y].clone() });
        }
        form[x * n + y] = v.clone();
        form[y * n + x] = mirrored;
        form_given[x * n + y] = true;
        form_given[y * n + x] = true;
    }
    let dense = |comb: &Vec<(usize, Rational)>| {
        let mut v = vec![Rational::zero(); n];
        for (k, c) in comb {
            v[*k] += c;
        }
        v
    };
    let osp = Quintuple {
        e_big: dense(&raw.osp["E"]),
        e: dense(&raw.osp["e"]),
        h: dense(&raw.osp["H"]),
        f: dense(&raw.osp["f"]),
        f_big: dense(&raw.osp["F"]),
    };
    let mut l = LieSuperData {
        name: name.to_string(),
        names: raw.names,
        parity: raw.parity,
        table,
        form,
        osp,
        cartan: raw.cartan,
        roots: BTreeMap::new(),
    };
    l.validate(&mut violations);
    if violations.is_empty() {
        l.roots = l.compute_roots(&mut violations);
    }
    if violations.is_empty() {
        Ok(l)
    } else {
        Err(LieError::Invalid(violations))
    }
}

fn sgn(e: u8) -> Rational {
    if e % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn same_comb(a: &[(usize, Rational)], b: &[(usize, Rational)]) -> bool {
    let mut x: Vec<_> = a.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
    let mut y: Vec<_> = b.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
    x.sort();
    y.sort();
    x == y
}

impl LieSuperData {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name_of(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parity[i]
    }

    /// Superdimension: even count minus odd count.
    pub fn sdim(&self) -> i64 {
        self.parity.iter().map(|&p| if p == 0 { 1 } else { -1 }).sum()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i * self.dim() + j]
    }

    pub fn form_basis(&self, i: usize, j: usize) -> &Rational {
        &self.form[i * self.dim() + j]
    }

    pub fn basis_elem(&self, i: usize) -> Elem {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }

    pub fn bracket(&self, x: &Elem, y: &Elem) -> Elem {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.bracket_basis(i, j) {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    pub fn form(&self, x: &Elem, y: &Elem) -> Rational {
        let mut acc = Rational::zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    acc += a * b * self.form_basis(i, j);
                }
            }
        }
        acc
    }

    /// Parity of a homogeneous element; `None` for zero or inhomogeneous input.
    pub fn parity_of(&self, x: &Elem) -> Option<u8> {
        let mut p = None;
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match p {
                None => p = Some(self.parity[i]),
                Some(q) if q != self.parity[i] => return None,
                _ => {}
            }
        }
        p
    }

    /// Human-readable linear combination, e.g. "E12 + E23".
    pub fn elem_text(&self, x: &Elem) -> String {
        let mut s = String::new();
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !a.is_one() {
                s.push_str(&format!("{} ", a));
            }
            s.push_str(&self.names[i]);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    fn validate(&self, out: &mut Vec<Violation>) {
        let n = self.dim();
        let nm = |i: usize| self.names[i].clone();
        for i in 0..n {
            for j in 0..n {
                for (k, _) in self.bracket_basis(i, j) {
                    if self.parity[*k] != (self.parity[i] + self.parity[j]) % 2 {
                        out.push(Violation::ParityMismatch { x: nm(i), y: nm(j) });
                    }
                }
            }
        }
        // [x,[y,z]] = [[x,y],z] + (-1)^{p(x)p(y)} [y,[x,z]]
        for x in 0..n {
            for y in 0..n {
                let xy = self.bracket_basis(x, y);
                for z in 0..n {
                    let mut acc = vec![Rational::zero(); n];
                    for (k, c) in self.bracket_basis(y, z) {
                        for (m, d) in self.bracket_basis(x, *k) {
                            acc[*m] += c * d;
                        }
                    }
                    for (k, c) in xy {
                        for (m, d) in self.bracket_basis(*k, z) {
                            acc[*m] -= c * d;
                        }
                    }
                    let s = sgn(self.parity[x] * self.parity[y]);
                    for (k, c) in self.bracket_basis(x, z) {
                        for (m, d) in self.bracket_basis(y, *k) {
                            acc[*m] -= &s * c * d;
                        }
                    }
                    if acc.iter().any(|c| !c.is_zero()) {
                        out.push(Violation::Jacobi { x: nm(x), y: nm(y), z: nm(z) });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.form_basis(i, j).is_zero() && self.parity[i] != self.parity[j] {
                    out.push(Violation::FormNotEven { x: nm(i), y: nm(j) });
                }
            }
        }
        // ([x,y]|z) = (x|[y,z])
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut l = Rational::zero();
                    for (k, c) in self.bracket_basis(x, y) {
                        l += c * self.form_basis(*k, z);
                    }
                    let mut r = Rational::zero();
                    for (k, c) in self.bracket_basis(y, z) {
                        r += c * self.form_basis(x, *k);
                    }
                    if l != r {
                        out.push(Violation::FormNotInvariant { x: nm(x), y: nm(y), z: nm(z) });
                    }
                }
            }
        }
        let gram = Matrix::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| RatFunc::from_rational(self.form_basis(i, j).clone())).collect())
                .collect(),
        );
        if gram.rank() < n {
            out.push(Violation::FormDegenerate);
        }
        let q = &self.osp;
        let expect_par = [("E", &q.e_big, 0u8), ("e", &q.e, 1), ("H", &q.h, 0), ("f", &q.f, 1), ("F", &q.f_big, 0)];
        for (slot, x, p) in expect_par {
            if self.parity_of(x) != Some(p) {
                out.push(Violation::OspRelation { what: format!("{} has the wrong parity", slot) });
            }
        }
        let scaled = |x: &Elem, c: i64| x.iter().map(|a| a * rat(c, 1)).collect::<Elem>();
        let rels: [(&str, Elem, Elem); 8] = [
            ("[H,E] = 2E", self.bracket(&q.h, &q.e_big), scaled(&q.e_big, 2)),
            ("[H,e] = e", self.bracket(&q.h, &q.e), q.e.clone()),
            ("[H,f] = -f", self.bracket(&q.h, &q.f), scaled(&q.f, -1)),
            ("[H,F] = -2F", self.bracket(&q.h, &q.f_big), scaled(&q.f_big, -2)),
            ("[e,e] = 2E", self.bracket(&q.e, &q.e), scaled(&q.e_big, 2)),
            ("[f,f] = -2F", self.bracket(&q.f, &q.f), scaled(&q.f_big, -2)),
            ("[e,f] = H", self.bracket(&q.e, &q.f), q.h.clone()),
            ("[E,F] = H", self.bracket(&q.e_big, &q.f_big), q.h.clone()),
        ];
        for (what, l, r) in rels {
            if l != r {
                out.push(Violation::OspRelation { what: what.to_string() });
            }
        }
        let ef = self.form(&q.e_big, &q.f_big);
        if !ef.is_one() {
            out.push(Violation::BadNormalization { what: format!("(E|F) = {}, expected 1", ef) });
        }
        for &c in &self.cartan {
            if self.parity[c] != 0 {
                out.push(Violation::Cartan { what: format!("{} is odd", nm(c)) });
            }
            for &d in &self.cartan {
                if !self.bracket_basis(c, d).is_empty() {
                    out.push(Violation::Cartan { what: format!("[{}, {}] != 0", nm(c), nm(d)) });
                }
            }
        }
        let in_cartan = q
            .h
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.cartan.contains(&i));
        if !in_cartan {
            out.push(Violation::Cartan { what: "H does not lie in the cartan subalgebra".into() });
        }
    }

    fn compute_roots(&self, out: &mut Vec<Violation>) -> BTreeMap<usize, Vec<Rational>> {
        let mut roots = BTreeMap::new();
        for i in 0..self.dim() {
            if self.cartan.contains(&i) {
                continue;
            }
            let mut w = Vec::new();
            let mut ok = true;
            for &h in &self.cartan {
                let br = self.bracket_basis(h, i);
                match br {
                    [] => w.push(Rational::zero()),
                    [(k, c)] if *k == i => w.push(c.clone()),
                    _ => ok = false,
                }
            }
            if ok {
                roots.insert(i, w);
            } else {
                out.push(Violation::NotRootVector { x: self.names[i].clone() });
            }
        }
        roots
    }

    /// Supertrace of ad(x) ad(y).
    pub fn killing(&self, x: &Elem, y: &Elem) -> Rational {
        let mut acc = Rational::zero();
        for b in 0..self.dim() {
            let v = self.bracket(x, &self.bracket(y, &self.basis_elem(b)));
            acc += &v[b] * sgn(self.parity[b]);
        }
        acc
    }

    /// Dual basis: v^i with (v^i | v_j) = delta_ij.
    pub fn dual_basis(&self) -> Vec<Elem> {
        let n = self.dim();
        // (v^i | v_j) = sum_k c_ik (v_k | v_j); so C * G = I with G_kj = (v_k|v_j)
        let g = Matrix::from_rows(
            (0..n)
                .map(|k| (0..n).map(|j| RatFunc::from_rational(self.form_basis(k, j).clone())).collect())
                .collect(),
        );
        let inv = invert(&g);
        (0..n)
            .map(|i| (0..n).map(|k| inv.get(i, k).as_rational().unwrap()).collect())
            .collect()
    }
}

/// Inverse via kernels of [A | -e_i]; used only for small rational matrices.
fn invert(g: &Matrix) -> Matrix {
    let n = g.rows();
    // Solve C G = I row by row: c G = e_i  <=>  G^T c^T = e_i.
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        let mut rows = Vec::new();
        for r in 0..n {
            let mut row: Vec<RatFunc> = (0..n).map(|c| g.get(c, r).clone()).collect();
            row.push(if r == i { -RatFunc::one() } else { RatFunc::zero() });
            rows.push(row);
        }
        let ker = Matrix::from_rows(rows).kernel_basis();
        let v = ker
            .into_iter()
            .find(|v| !v[n].is_zero())
            .expect("singular form matrix");
        let s = v[n].inv().unwrap();
        for k in 0..n {
            out.set(i, k, &v[k] * &s);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct GradedBases {
    /// ad(H/2)-eigenvalue of each basis element.
    pub grading: Vec<Rational>,
    /// Basis indices of the positive-grade root vectors, in basis order.
    pub u_plus: Vec<usize>,
    /// u^alpha with (u^alpha | u_beta) = delta.
    pub u_dual: Vec<Elem>,
}

impl GradedBases {
    pub fn grade_of(&self, i: usize) -> &Rational {
        &self.grading[i]
    }

    /// Grade j_alpha of the alpha-th positive root vector.
    pub fn j(&self, alpha: usize) -> &Rational {
        &self.grading[self.u_plus[alpha]]
    }
}

pub fn grade(l: &LieSuperData) -> Result<GradedBases, LieError> {
    let n = l.dim();
    let half = rat(1, 2);
    let mut grading = Vec::with_capacity(n);
    for i in 0..n {
        let v = l.bracket(&l.osp.h, &l.basis_elem(i));
        let mut g = Rational::zero();
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k != i {
                return Err(LieError::NonDiagonal(l.names[i].clone()));
            }
            g = c * &half;
        }
        grading.push(g);
    }
    let u_plus: Vec<usize> = (0..n).filter(|&i| grading[i].is_positive()).collect();
    let u_minus: Vec<usize> = (0..n).filter(|&i| grading[i].is_negative()).collect();
    // u^alpha = sum_g c_g b_g over negative-grade elements, with sum_g c_g (b_g|u_beta) = delta
    let m = u_plus.len();
    let mut u_dual = Vec::with_capacity(m);
    for a in 0..m {
        let mut rows = Vec::new();
        for (b, &ub) in u_plus.iter().enumerate() {
            let mut row: Vec<RatFunc> =
                u_minus.iter().map(|&g| RatFunc::from_rational(l.form_basis(g, ub).clone())).collect();
            row.push(if a == b { -RatFunc::one() } else { RatFunc::zero() });
            rows.push(row);
        }
        let ker = Matrix::from_rows(rows).kernel_basis();
        let v = ker
            .into_iter()
            .find(|v| !v[u_minus.len()].is_zero())
            .ok_or_else(|| LieError::Invalid(vec![Violation::FormDegenerate]))?;
        let s = v[u_minus.len()].inv().unwrap();
        let mut e = vec![Rational::zero(); n];
        for (t, &g) in u_minus.iter().enumerate() {
            e[g] = (&v[t] * &s).as_rational().unwrap();
        }
        u_dual.push(e);
    }
    Ok(GradedBases { grading, u_plus, u_dual })
}

/// h^vee from the Killing form, cross-checked against the Casimir action.
pub fn dual_coxeter(l: &LieSuperData) -> Result<Rational, LieError> {
    let n = l.dim();
    let mut ratio: Option<Rational> = None;
    for i in 0..n {
        for j in 0..n {
            let k = l.killing(&l.basis_elem(i), &l.basis_elem(j));
            let f = l.form_basis(i, j);
            if f.is_zero() {
                if !k.is_zero() {
                    return Err(LieError::CasimirNotScalar);
                }
                continue;
            }
            let r = k / f / rat(2, 1);
            match &ratio {
                None => ratio = Some(r),
                Some(q) if *q != r => return Err(LieError::CasimirNotScalar),
                _ => {}
            }
        }
    }
    let hv = ratio.unwrap_or_else(Rational::zero);
    // Casimir sum_i [v_i, [v^i, x]] acts as 2 h^vee
    let dual = l.dual_basis();
    for x in 0..n {
        let xe = l.basis_elem(x);
        let mut acc = vec![Rational::zero(); n];
        for i in 0..n {
            let v = l.bracket(&l.basis_elem(i), &l.bracket(&dual[i], &xe));
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b;
            }
        }
        let expect: Elem = xe.iter().map(|c| c * &hv * rat(2, 1)).collect();
        if acc != expect {
            return Err(LieError::CasimirNotScalar);
        }
    }
    Ok(hv)
}

#[derive(Debug, Clone)]
pub struct RootCombinatorics {
    /// Positions into `GradedBases::u_plus`.
    pub i_plus: Vec<usize>,
    pub i0: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    /// Roots of g_0 (weights of grade-zero non-cartan basis elements).
    pub phi0: Vec<Vec<Rational>>,
}

pub fn root_combinatorics(l: &LieSuperData, g: &GradedBases) -> RootCombinatorics {
    let m = g.u_plus.len();
    let i_plus: Vec<usize> = (0..m).collect();
    let ub = |a: usize| l.basis_elem(g.u_plus[a]);
    let i0: Vec<usize> = (0..m)
        .filter(|&a| {
            (0..m).all(|b| (0..m).all(|c| l.form(&g.u_dual[a], &l.bracket(&ub(b), &ub(c))).is_zero()))
        })
        .collect();
    let g0: Vec<usize> = (0..l.dim()).filter(|&i| g.grading[i].is_zero()).collect();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &a in &i0 {
        for &b in &i0 {
            let linked = g0
                .iter()
                .any(|&z| !l.form(&l.basis_elem(z), &l.bracket(&g.u_dual[a], &ub(b))).is_zero());
            if linked {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &a in &i0 {
        let r = find(&mut parent, a);
        classes.entry(r).or_default().push(a);
    }
    let phi0 = g0.iter().filter_map(|i| l.roots.get(i).cloned()).collect();
    RootCombinatorics { i_plus, i0, classes: classes.into_values().collect(), phi0 }
}

/// Conformal-weight census of ker(ad f): weight 1/2 - j for each kernel direction of grade j.
pub fn ker_ad_f_census(l: &LieSuperData, g: &GradedBases) -> BTreeMap<Rational, usize> {
    let mut grades: Vec<Rational> = g.grading.clone();
    grades.sort();
    grades.dedup();
    let mut census = BTreeMap::new();
    for j in grades {
        let idx: Vec<usize> = (0..l.dim()).filter(|&i| g.grading[i] == j).collect();
        let n = l.dim();
        // columns: basis elements of grade j; rows: coordinates of [f, x]
        let mut rows = vec![Vec::with_capacity(idx.len()); n];
        for &i in &idx {
            let v = l.bracket(&l.osp.f, &l.basis_elem(i));
            for (r, c) in v.into_iter().enumerate() {
                rows[r].push(RatFunc::from_rational(c));
            }
        }
        let dim = Matrix::from_rows(rows).kernel_basis().len();
        if dim > 0 {
            census.insert(rat(1, 2) - j, dim);
        }
    }
    census
}

/// h_alpha in the cartan subalgebra with (h_alpha | h) = alpha(h), for a weight given on the cartan basis.
pub fn coroot(l: &LieSuperData, weight: &[Rational]) -> Elem {
    let c = &l.cartan;
    let r = c.len();
    // sum_j x_j (h_j|h_i) = weight_i
    let mut rows = Vec::new();
    for i in 0..r {
        let mut row: Vec<RatFunc> =
            (0..r).map(|j| RatFunc::from_rational(l.form_basis(c[j], c[i]).clone())).collect();
        row.push(-RatFunc::from_rational(weight[i].clone()));
        rows.push(row);
    }
    let ker = Matrix::from_rows(rows).kernel_basis();
    let v = ker.into_iter().find(|v| !v[r].is_zero()).expect("degenerate cartan form");
    let s = v[r].inv().unwrap();
    let mut e = vec![Rational::zero(); l.dim()];
    for j in 0..r {
        e[c[j]] = (&v[j] * &s).as_rational().unwrap();
    }
    e
}
