//! Symplectic spaces and nondegenerate symmetric bilinear forms over `F_q`.
//!
//! A [`SymmetricForm`] is diagonalized and Witt-decomposed once at
//! construction. The hyperbolic pairs found there double as the isotropy
//! certificate and as the input to [`SymmetricForm::reduce`].

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{FieldCtx, FqElem};
use crate::linalg;

/// Environment variable fixing the seed of the randomized isotropic search.
pub const SEED_ENV: &str = "OSC_SEED";

fn seed() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.parse().ok()).unwrap_or(0x05c1_11a7)
}

/// Symplectic space `F_q^{2N}` with basis `e₁⁺…e_N⁺, e₁⁻…e_N⁻` and Gram matrix `[[0, I], [−I, 0]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    field: Arc<FieldCtx>,
    half: usize,
}

impl SymplecticSpace {
    pub fn new(field: Arc<FieldCtx>, half: usize) -> Self {
        SymplecticSpace { field, half }
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    /// `N`.
    pub fn half_dim(&self) -> usize {
        self.half
    }

    pub fn dim(&self) -> usize {
        2 * self.half
    }

    pub fn form(&self, u: &[FqElem], v: &[FqElem]) -> FqElem {
        let f = &self.field;
        let n = self.half;
        (0..n).fold(f.zero(), |acc, i| {
            let t = f.sub(f.mul(u[i], v[n + i]), f.mul(u[n + i], v[i]));
            f.add(acc, t)
        })
    }

    pub fn gram(&self) -> Vec<FqElem> {
        let f = &self.field;
        let d = self.dim();
        let mut g = vec![f.zero(); d * d];
        for i in 0..self.half {
            g[i * d + self.half + i] = f.one();
            g[(self.half + i) * d + i] = f.neg(f.one());
        }
        g
    }

    /// `V[−k]`: the symplectic space of dimension `2N − 2k`.
    pub fn reduce(&self, k: usize) -> Result<Self> {
        if k > self.half {
            return Err(Error::RangeExceeded { what: "k", value: k, max: self.half });
        }
        Ok(SymplecticSpace::new(self.field.clone(), self.half - k))
    }
}

/// Type of a nondegenerate symmetric form: odd dimension, or even dimension
/// with Witt index `m` (plus) or `m − 1` (minus).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormType {
    Odd,
    Plus,
    Minus,
}

impl fmt::Display for FormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormType::Odd => "odd",
            FormType::Plus => "plus",
            FormType::Minus => "minus",
        })
    }
}

impl std::str::FromStr for FormType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd" => Ok(FormType::Odd),
            "plus" => Ok(FormType::Plus),
            "minus" => Ok(FormType::Minus),
            _ => Err(Error::Parse(format!("unknown form type {s:?}"))),
        }
    }
}

/// Nondegenerate symmetric bilinear form on `F_q^n`.
#[derive(Clone, Debug)]
pub struct SymmetricForm {
    field: Arc<FieldCtx>,
    n: usize,
    gram: Vec<FqElem>,
    diag: Vec<FqElem>,
    /// Columns are the diagonalizing basis: `Pᵀ·gram·P = diag`.
    change: Vec<FqElem>,
    pairs: Vec<(Vec<FqElem>, Vec<FqElem>)>,
    aniso: Vec<Vec<FqElem>>,
}

impl PartialEq for SymmetricForm {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.gram == other.gram
    }
}

impl SymmetricForm {
    /// Builds a form from a row-major Gram matrix.
    pub fn new(field: Arc<FieldCtx>, n: usize, gram: Vec<FqElem>) -> Result<Self> {
        if gram.len() != n * n {
            return Err(Error::Invalid(format!("gram matrix must have {} entries", n * n)));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i * n + j] != gram[j * n + i] {
                    return Err(Error::Invalid("gram matrix is not symmetric".into()));
                }
            }
        }
        if n > 0 && linalg::det(&field, &gram, n).is_zero() {
            return Err(Error::Degenerate);
        }
        let mut form =
            SymmetricForm { field, n, gram, diag: Vec::new(), change: Vec::new(), pairs: Vec::new(), aniso: Vec::new() };
        let (diag, change) = form.compute_diagonalization();
        form.diag = diag;
        form.change = change;
        let (pairs, aniso) = form.witt_decomposition();
        form.pairs = pairs;
        form.aniso = aniso;
        Ok(form)
    }

    /// The standard form of the given type and dimension: `diag(1,…,1,δ)` for
    /// odd `n` (`δ = 1` unless `nonsquare_last`), `hyperbolic^m` for plus and
    /// `hyperbolic^{m−1} ⊕ diag(1, −δ)` with `δ` a nonsquare for minus.
    pub fn standard(field: Arc<FieldCtx>, kind: FormType, n: usize, nonsquare_last: bool) -> Result<Self> {
        let f = field.clone();
        let mut g = vec![f.zero(); n * n];
        match kind {
            FormType::Odd => {
                if n % 2 == 0 {
                    return Err(Error::Invalid(format!("odd form needs odd dimension, got {n}")));
                }
                for i in 0..n {
                    g[i * n + i] = f.one();
                }
                if nonsquare_last {
                    g[n * n - 1] = f.nonsquare();
                }
            }
            FormType::Plus | FormType::Minus => {
                if n % 2 == 1 {
                    return Err(Error::Invalid(format!("{kind} form needs even dimension, got {n}")));
                }
                if kind == FormType::Minus && n == 0 {
                    return Err(Error::Invalid("minus form needs dimension at least 2".into()));
                }
                let hyper = if kind == FormType::Plus { n / 2 } else { n / 2 - 1 };
                for h in 0..hyper {
                    g[(2 * h) * n + 2 * h + 1] = f.one();
                    g[(2 * h + 1) * n + 2 * h] = f.one();
                }
                if kind == FormType::Minus {
                    let d = n - 2;
                    g[d * n + d] = f.one();
                    g[(d + 1) * n + d + 1] = f.neg(f.nonsquare());
                }
            }
        }
        SymmetricForm::new(field, n, g)
    }

    /// Parses `odd:n`, `odd:n:ns`, `plus:n`, `minus:n`, or a JSON Gram matrix
    /// such as `[[1,0],[0,-1]]` (entries are encodings; negatives are read mod `p`).
    pub fn parse(field: Arc<FieldCtx>, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.starts_with('[') {
            let rows: Vec<Vec<i64>> =
                serde_json::from_str(spec).map_err(|e| Error::Parse(format!("gram matrix {spec:?}: {e}")))?;
            let n = rows.len();
            let mut g = Vec::with_capacity(n * n);
            for row in &rows {
                if row.len() != n {
                    return Err(Error::Parse("gram matrix must be square".into()));
                }
                for &x in row {
                    g.push(if x < 0 { field.from_int(x) } else { field.elem(x as u32)? });
                }
            }
            return SymmetricForm::new(field, n, g);
        }
        let parts: Vec<&str> = spec.split(':').collect();
        let (kind, n, ns) = match parts.as_slice() {
            [k, n] => (k.parse::<FormType>()?, n, false),
            [k, n, "ns"] => (k.parse::<FormType>()?, n, true),
            _ => return Err(Error::Parse(format!("form spec {spec:?}"))),
        };
        let n: usize = n.parse().map_err(|_| Error::Parse(format!("form dimension in {spec:?}")))?;
        SymmetricForm::standard(field, kind, n, ns)
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &[FqElem] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> FqElem {
        self.gram[i * self.n + j]
    }

    pub fn bilinear(&self, u: &[FqElem], v: &[FqElem]) -> FqElem {
        let f = &self.field;
        let mut acc = f.zero();
        for i in 0..self.n {
            if u[i].is_zero() {
                continue;
            }
            let mut row = f.zero();
            for j in 0..self.n {
                row = f.add(row, f.mul(self.gram[i * self.n + j], v[j]));
            }
            acc = f.add(acc, f.mul(u[i], row));
        }
        acc
    }

    /// `B(u, u)`.
    pub fn quad(&self, u: &[FqElem]) -> FqElem {
        self.bilinear(u, u)
    }

    pub fn det(&self) -> FqElem {
        if self.n == 0 {
            self.field.one()
        } else {
            linalg::det(&self.field, &self.gram, self.n)
        }
    }

    /// `disc(B) = ε_q(det B)`.
    pub fn disc(&self) -> i8 {
        self.field.quad_char(self.det())
    }

    /// Diagonal entries after congruence.
    pub fn diagonal(&self) -> &[FqElem] {
        &self.diag
    }

    /// Change of basis `P` (row-major, columns are the new basis) with `Pᵀ·B·P` diagonal.
    pub fn change_of_basis(&self) -> &[FqElem] {
        &self.change
    }

    /// `(diagonal entries, P)`.
    pub fn diagonalize(&self) -> (Vec<FqElem>, Vec<FqElem>) {
        (self.diag.clone(), self.change.clone())
    }

    /// Witt index `h_W`.
    pub fn witt_index(&self) -> usize {
        self.pairs.len()
    }

    pub fn aniso_dim(&self) -> usize {
        self.aniso.len()
    }

    pub fn form_type(&self) -> FormType {
        if self.n % 2 == 1 {
            FormType::Odd
        } else if self.pairs.len() == self.n / 2 {
            FormType::Plus
        } else {
            FormType::Minus
        }
    }

    /// Hyperbolic pairs `(e, f)` with `B(e,e) = B(f,f) = 0`, `B(e,f) = 1`,
    /// mutually orthogonal.
    pub fn hyperbolic_pairs(&self) -> &[(Vec<FqElem>, Vec<FqElem>)] {
        &self.pairs
    }

    /// Basis of the anisotropic kernel left after removing all hyperbolic planes.
    pub fn anisotropic_basis(&self) -> &[Vec<FqElem>] {
        &self.aniso
    }

    /// `W[−k]`: the form left after removing `k` hyperbolic planes.
    pub fn reduce(&self, k: usize) -> Result<SymmetricForm> {
        let h = self.witt_index();
        if k > h {
            return Err(Error::RangeExceeded { what: "k", value: k, max: h });
        }
        if k == 0 {
            return Ok(self.clone());
        }
        let mut basis: Vec<&Vec<FqElem>> = Vec::new();
        for (e, f) in &self.pairs[k..] {
            basis.push(e);
            basis.push(f);
        }
        basis.extend(self.aniso.iter());
        let d = basis.len();
        let mut g = Vec::with_capacity(d * d);
        for u in &basis {
            for v in &basis {
                g.push(self.bilinear(u, v));
            }
        }
        SymmetricForm::new(self.field.clone(), d, g)
    }

    /// Reflection `w − 2B(w,λ)/B(λ,λ)·λ`.
    pub fn reflect(&self, lambda: &[FqElem], w: &[FqElem]) -> Result<Vec<FqElem>> {
        let f = &self.field;
        let ll = self.quad(lambda);
        if ll.is_zero() {
            return Err(Error::IsotropicInput);
        }
        let c = f.div(f.add(self.bilinear(w, lambda), self.bilinear(w, lambda)), ll)?;
        Ok(w.iter().zip(lambda).map(|(&x, &l)| f.sub(x, f.mul(c, l))).collect())
    }

    /// Matrix of the reflection across `λ^⊥` acting on column vectors.
    pub fn reflection_matrix(&self, lambda: &[FqElem]) -> Result<Vec<FqElem>> {
        let n = self.n;
        let mut m = vec![self.field.zero(); n * n];
        for j in 0..n {
            let mut e = vec![self.field.zero(); n];
            e[j] = self.field.one();
            let r = self.reflect(lambda, &e)?;
            for i in 0..n {
                m[i * n + j] = r[i];
            }
        }
        Ok(m)
    }

    fn compute_diagonalization(&self) -> (Vec<FqElem>, Vec<FqElem>) {
        let f = &self.field;
        let n = self.n;
        let mut basis: Vec<Vec<FqElem>> = (0..n)
            .map(|i| {
                let mut e = vec![f.zero(); n];
                e[i] = f.one();
                e
            })
            .collect();
        for i in 0..n {
            if self.quad(&basis[i]).is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !self.quad(&basis[j]).is_zero()) {
                    basis.swap(i, j);
                } else {
                    let j = (i + 1..n)
                        .find(|&j| !self.bilinear(&basis[i], &basis[j]).is_zero())
                        .expect("nondegenerate form");
                    let sum: Vec<FqElem> = basis[i].iter().zip(&basis[j]).map(|(&a, &b)| f.add(a, b)).collect();
                    basis[i] = sum;
                }
            }
            let bi = basis[i].clone();
            let qi = self.quad(&bi);
            for j in i + 1..n {
                let c = f.div(self.bilinear(&basis[j], &bi), qi).expect("nonzero");
                if c.is_zero() {
                    continue;
                }
                for (x, &y) in basis[j].iter_mut().zip(&bi) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let diag = basis.iter().map(|b| self.quad(b)).collect();
        let mut change = vec![f.zero(); n * n];
        for (j, b) in basis.iter().enumerate() {
            for i in 0..n {
                change[i * n + j] = b[i];
            }
        }
        (diag, change)
    }

    fn combine(&self, basis: &[Vec<FqElem>], coords: &[FqElem]) -> Vec<FqElem> {
        let f = &self.field;
        let mut x = vec![f.zero(); self.n];
        for (b, &c) in basis.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            for (xi, &bi) in x.iter_mut().zip(b) {
                *xi = f.add(*xi, f.mul(c, bi));
            }
        }
        x
    }

    /// A nonzero isotropic vector in the span of `basis`, if any.
    fn find_isotropic(&self, basis: &[Vec<FqElem>], rng: &mut ChaCha8Rng) -> Option<Vec<FqElem>> {
        let f = &self.field;
        let d = basis.len();
        let q = f.q() as u64;
        if d <= 3 {
            let total = q.pow(d as u32);
            return (1..total).find_map(|idx| {
                let x = self.combine(basis, &linalg::decode(f, idx, d));
                self.quad(&x).is_zero().then_some(x)
            });
        }
        loop {
            let coords: Vec<FqElem> = (0..d).map(|_| FqElem(rng.gen_range(0..f.q()))).collect();
            if coords.iter().all(|c| c.is_zero()) {
                continue;
            }
            let x = self.combine(basis, &coords);
            if self.quad(&x).is_zero() {
                return Some(x);
            }
        }
    }

    fn witt_decomposition(&self) -> (Vec<(Vec<FqElem>, Vec<FqElem>)>, Vec<Vec<FqElem>>) {
        let f = &self.field;
        let mut rng = ChaCha8Rng::seed_from_u64(seed());
        let mut basis: Vec<Vec<FqElem>> = (0..self.n)
            .map(|i| {
                let mut e = vec![f.zero(); self.n];
                e[i] = f.one();
                e
            })
            .collect();
        let mut pairs = Vec::new();
        while basis.len() >= 2 {
            let Some(x) = self.find_isotropic(&basis, &mut rng) else {
                break;
            };
            let y = basis.iter().find(|b| !self.bilinear(&x, b).is_zero()).expect("nondegenerate on the span").clone();
            let inv = f.inv(self.bilinear(&x, &y)).expect("nonzero");
            let y: Vec<FqElem> = y.iter().map(|&v| f.mul(v, inv)).collect();
            let c = f.half(self.quad(&y));
            let e2: Vec<FqElem> = y.iter().zip(&x).map(|(&a, &b)| f.sub(a, f.mul(c, b))).collect();
            // complement of span{x, e2} inside span(basis)
            let d = basis.len();
            let mut m = Vec::with_capacity(2 * d);
            for t in [&x, &e2] {
                for b in &basis {
                    m.push(self.bilinear(b, t));
                }
            }
            let ker = linalg::kernel(f, &m, 2, d);
            basis = ker.iter().map(|c| self.combine(&basis, c)).collect();
            pairs.push((x, e2));
        }
        (pairs, basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    fn form(p: u64, rows: &[&[i64]]) -> SymmetricForm {
        let f = make_field(p, 1).unwrap();
        let n = rows.len();
        let g = rows.iter().flat_map(|r| r.iter().map(|&x| f.from_int(x))).collect();
        SymmetricForm::new(f, n, g).unwrap()
    }

    fn check_diag(b: &SymmetricForm) {
        let f = b.field();
        let n = b.dim();
        let (d, p) = b.diagonalize();
        let pt = linalg::transpose(&p, n, n);
        let m = linalg::mat_mul(f, &linalg::mat_mul(f, &pt, b.gram(), n, n, n), &p, n, n, n);
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { d[i] } else { f.zero() };
                assert_eq!(m[i * n + j], expect);
            }
            assert!(!d[i].is_zero());
        }
        let dp = linalg::det(f, &p, n);
        assert!(!dp.is_zero());
        let dd = d.iter().fold(f.one(), |a, &x| f.mul(a, x));
        assert_eq!(f.quad_char(dd), b.disc());
    }

    fn check_pairs(b: &SymmetricForm) {
        let f = b.field();
        for (e, g) in b.hyperbolic_pairs() {
            assert!(b.quad(e).is_zero());
            assert!(b.quad(g).is_zero());
            assert_eq!(b.bilinear(e, g), f.one());
        }
        assert_eq!(2 * b.witt_index() + b.aniso_dim(), b.dim());
        assert!(b.aniso_dim() <= 2);
    }

    #[test]
    fn identity_is_already_diagonal() {
        let b = form(5, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let (d, p) = b.diagonalize();
        assert_eq!(d, vec![FqElem::ONE; 3]);
        assert_eq!(p, linalg::identity(b.field(), 3));
    }

    #[test]
    fn hyperbolic_plane_over_f3() {
        let b = form(3, &[&[0, 1], &[1, 0]]);
        let f = b.field().clone();
        assert_eq!(b.diagonal(), &[f.from_int(2), f.from_int(1)]);
        assert_eq!(b.disc(), -1);
        check_diag(&b);
    }

    #[test]
    fn witt_examples() {
        let b = form(3, &[&[1, 0], &[0, -1]]);
        assert_eq!(b.witt_index(), 1);
        assert_eq!(b.form_type(), FormType::Plus);
        let b = form(3, &[&[1, 0], &[0, 1]]);
        assert_eq!(b.witt_index(), 0);
        assert_eq!(b.form_type(), FormType::Minus);
        for q in [3u64, 5, 7] {
            let b = SymmetricForm::parse(make_field(q, 1).unwrap(), "odd:3:ns").unwrap();
            assert_eq!(b.witt_index(), 1);
        }
    }

    #[test]
    fn standard_forms_have_expected_types() {
        for (p, l) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let f = make_field(p, l).unwrap();
            for n in 0..=6 {
                let kinds: &[FormType] =
                    if n % 2 == 1 { &[FormType::Odd] } else if n == 0 { &[FormType::Plus] } else { &[FormType::Plus, FormType::Minus] };
                for &k in kinds {
                    let b = SymmetricForm::standard(f.clone(), k, n, false).unwrap();
                    assert_eq!(b.form_type(), k, "q={} n={n}", f.q());
                    check_pairs(&b);
                    check_diag(&b);
                }
            }
        }
    }

    #[test]
    fn reductions() {
        let f = make_field(3, 1).unwrap();
        let b = SymmetricForm::standard(f.clone(), FormType::Odd, 5, false).unwrap();
        assert_eq!(b.reduce(0).unwrap(), b);
        let r = b.reduce(2).unwrap();
        assert_eq!(r.dim(), 1);
        assert_eq!(r.witt_index(), 0);
        // removing two hyperbolic planes multiplies det by (−1)²
        assert_eq!(r.disc(), b.disc());
        let plus = SymmetricForm::standard(f.clone(), FormType::Plus, 4, false).unwrap();
        assert_eq!(plus.reduce(2).unwrap().dim(), 0);
        assert!(matches!(plus.reduce(3), Err(Error::RangeExceeded { .. })));
        let minus = SymmetricForm::standard(f, FormType::Minus, 6, false).unwrap();
        assert_eq!(minus.reduce(1).unwrap().form_type(), FormType::Minus);
    }

    #[test]
    fn rejects_degenerate_and_bad_specs() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(SymmetricForm::parse(f.clone(), "[[1,1],[1,1]]").unwrap_err(), Error::Degenerate);
        assert!(SymmetricForm::parse(f.clone(), "odd:2").is_err());
        assert!(SymmetricForm::parse(f.clone(), "weird:2").is_err());
        assert!(SymmetricForm::parse(f, "[[1,2],[0,1]]").is_err());
    }

    #[test]
    fn symplectic_form_is_alternating() {
        let f = make_field(5, 1).unwrap();
        let v = SymplecticSpace::new(f.clone(), 2);
        for a in 0..625u64 {
            let u = linalg::decode(&f, a, 4);
            assert!(v.form(&u, &u).is_zero());
            let w = linalg::decode(&f, (a * 7 + 3) % 625, 4);
            assert_eq!(v.form(&u, &w), f.neg(v.form(&w, &u)));
        }
        assert!(!linalg::det(&f, &v.gram(), 4).is_zero());
        assert_eq!(v.reduce(1).unwrap().dim(), 2);
    }
}
