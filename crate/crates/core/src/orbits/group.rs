//! Matrix groups by breadth-first closure, and Burnside counts over them.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::{OrbitProblem, Side};
use crate::error::{Error, Result};
use crate::fields::{FieldCtx, FqElem};
use crate::forms::{FormType, SymmetricForm, SymplecticSpace};
use crate::linalg;
use crate::qcomb::ClassicalGroup;

/// Largest group order a closure may reach.
pub const GROUP_LIMIT: usize = 1_000_000;
/// Largest `|G|·|points|` for the point-iterating Burnside count.
pub const POINT_LIMIT: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Sp,
    Oplus,
    Ominus,
    Oodd,
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Ok(GroupKind::Sp),
            "oplus" => Ok(GroupKind::Oplus),
            "ominus" => Ok(GroupKind::Ominus),
            "oodd" => Ok(GroupKind::Oodd),
            _ => Err(Error::Parse(format!("unknown group kind {s:?}"))),
        }
    }
}

/// A group of `degree × degree` matrices over `F_q` given by generators.
/// Elements are stored as flat rows of field indices.
pub struct MatrixGroup {
    field: Arc<FieldCtx>,
    degree: usize,
    classical: ClassicalGroup,
    invariant: Vec<FqElem>,
    generators: Vec<Vec<FqElem>>,
    elements: OnceLock<std::result::Result<Arc<Vec<u8>>, Error>>,
}

impl fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixGroup({} over F_{}, {} generators)", self.classical, self.field.q(), self.generators.len())
    }
}

/// `Sp_{2N}`, `O^+_{2m}`, `O^-_{2m}` or `O_{2m+1}` over the given field;
/// `size` is `N` or `m`.
pub fn build_group(kind: GroupKind, field: Arc<FieldCtx>, size: usize) -> Result<MatrixGroup> {
    let (ft, n) = match kind {
        GroupKind::Sp => return MatrixGroup::symplectic(&SymplecticSpace::new(field, size)),
        GroupKind::Oplus => (FormType::Plus, 2 * size),
        GroupKind::Ominus => (FormType::Minus, 2 * size),
        GroupKind::Oodd => (FormType::Odd, 2 * size + 1),
    };
    MatrixGroup::orthogonal(&SymmetricForm::standard(field, ft, n, false)?)
}

impl MatrixGroup {
    fn check_field(field: &FieldCtx) -> Result<()> {
        if field.q() > 256 {
            return Err(Error::SizeLimit(format!("matrix groups over F_{} are not stored", field.q())));
        }
        Ok(())
    }

    /// Generated by the transvections `x ↦ x + a·S(x,v)·v` with `v` a nonzero
    /// 0/1 vector and `a ∈ {1, nonsquare}`.
    pub fn symplectic(space: &SymplecticSpace) -> Result<Self> {
        let f = space.field().clone();
        Self::check_field(&f)?;
        let dim = space.dim();
        let mut generators = Vec::new();
        for mask in 1u64..(1 << dim) {
            let v: Vec<FqElem> = (0..dim).map(|i| if mask >> i & 1 == 1 { f.one() } else { f.zero() }).collect();
            for a in [f.one(), f.nonsquare()] {
                let mut t = linalg::identity(&f, dim);
                for j in 0..dim {
                    let mut e = vec![f.zero(); dim];
                    e[j] = f.one();
                    let s = f.mul(a, space.form(&e, &v));
                    for i in 0..dim {
                        t[i * dim + j] = f.add(t[i * dim + j], f.mul(s, v[i]));
                    }
                }
                generators.push(t);
            }
        }
        Ok(MatrixGroup {
            field: f,
            degree: dim,
            classical: ClassicalGroup::Sp(space.half_dim()),
            invariant: space.gram(),
            generators,
            elements: OnceLock::new(),
        })
    }

    /// Generated by the reflections along all anisotropic lines.
    pub fn orthogonal(form: &SymmetricForm) -> Result<Self> {
        let f = form.field().clone();
        Self::check_field(&f)?;
        let n = form.dim();
        let mut generators = Vec::new();
        for x in 1..(f.q() as u64).pow(n as u32) {
            let v = linalg::decode(&f, x, n);
            let lead = v.iter().rev().find(|c| !c.is_zero()).copied();
            if lead == Some(f.one()) && !form.quad(&v).is_zero() {
                generators.push(form.reflection_matrix(&v)?);
            }
        }
        Ok(MatrixGroup {
            field: f,
            degree: n,
            classical: ClassicalGroup::of_form(form),
            invariant: form.gram().to_vec(),
            generators,
            elements: OnceLock::new(),
        })
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn classical(&self) -> ClassicalGroup {
        self.classical
    }

    pub fn generators(&self) -> &[Vec<FqElem>] {
        &self.generators
    }

    /// True if every generator `g` satisfies `gᵀ·G·g = G` for the invariant Gram matrix `G`.
    pub fn preserves_form(&self) -> bool {
        let (f, d) = (&self.field, self.degree);
        self.generators.iter().all(|g| {
            let gt = linalg::transpose(g, d, d);
            let lhs = linalg::mat_mul(f, &linalg::mat_mul(f, &gt, &self.invariant, d, d, d), g, d, d, d);
            lhs == self.invariant
        })
    }

    /// Closure order predicted by the group-order formula.
    pub fn expected_order(&self) -> Result<num_bigint::BigInt> {
        self.classical.order_at(self.field.q() as u64)
    }

    /// All elements, computed on first use by breadth-first closure.
    pub fn elements(&self) -> Result<Arc<Vec<u8>>> {
        self.elements.get_or_init(|| self.closure().map(Arc::new)).clone()
    }

    pub fn order(&self) -> Result<usize> {
        let dd = (self.degree * self.degree).max(1);
        Ok(if self.degree == 0 { 1 } else { self.elements()?.len() / dd })
    }

    fn closure(&self) -> Result<Vec<u8>> {
        if self.expected_order()? > GROUP_LIMIT.into() {
            return Err(Error::SizeLimit(format!("|{}| exceeds {GROUP_LIMIT} elements", self.classical)));
        }
        let d = self.degree;
        let q = self.field.q() as usize;
        let f = &self.field;
        let add: Vec<u8> = (0..q * q).map(|i| f.add(FqElem((i / q) as u32), FqElem((i % q) as u32)).0 as u8).collect();
        let mul: Vec<u8> = (0..q * q).map(|i| f.mul(FqElem((i / q) as u32), FqElem((i % q) as u32)).0 as u8).collect();
        let gens: Vec<Vec<u8>> = self.generators.iter().map(|g| g.iter().map(|x| x.0 as u8).collect()).collect();
        let id: Vec<u8> = linalg::identity(f, d).iter().map(|x| x.0 as u8).collect();
        let mut seen: HashSet<Vec<u8>> = HashSet::from([id.clone()]);
        let mut flat = id;
        let mut head = 0;
        let dd = d * d;
        let mut y = vec![0u8; dd];
        while head * dd < flat.len() && dd > 0 {
            for g in &gens {
                let x = &flat[head * dd..(head + 1) * dd];
                for r in 0..d {
                    for c in 0..d {
                        let mut acc = 0u8;
                        for k in 0..d {
                            let m = mul[x[r * d + k] as usize * q + g[k * d + c] as usize];
                            acc = add[acc as usize * q + m as usize];
                        }
                        y[r * d + c] = acc;
                    }
                }
                if !seen.contains(&y) {
                    if seen.len() >= GROUP_LIMIT {
                        return Err(Error::SizeLimit(format!("closure of {} exceeds {GROUP_LIMIT} elements", self.classical)));
                    }
                    seen.insert(y.clone());
                    flat.extend_from_slice(&y);
                }
            }
            head += 1;
        }
        Ok(flat)
    }

    fn element(&self, flat: &[u8], i: usize) -> Vec<FqElem> {
        let dd = self.degree * self.degree;
        flat[i * dd..(i + 1) * dd].iter().map(|&x| FqElem(x as u32)).collect()
    }

    /// `dim ker(g − I)` for the `i`-th element.
    fn fixed_dim(&self, flat: &[u8], i: usize) -> usize {
        let f = &self.field;
        let d = self.degree;
        let mut m = self.element(flat, i);
        for k in 0..d {
            m[k * d + k] = f.sub(m[k * d + k], f.one());
        }
        d - linalg::rank(f, &m, d, d)
    }
}

fn exact_average(total: u128, order: usize) -> Result<u128> {
    if total % order as u128 != 0 {
        return Err(Error::Invalid(format!("Burnside sum {total} is not divisible by |G| = {order}")));
    }
    Ok(total / order as u128)
}

/// Orbits of `G` on `len`-tuples of vectors, by Burnside's lemma with
/// `|Fix(g)| = q^{len·dim ker(g − I)}`.
pub fn burnside_count(group: &MatrixGroup, len: usize) -> Result<u128> {
    let order = group.order()?;
    if group.degree == 0 {
        return Ok(1);
    }
    let flat = group.elements()?;
    let q = group.field.q() as u128;
    let dims: Vec<usize> = (0..order).into_par_iter().map(|i| group.fixed_dim(&flat, i)).collect();
    let mut total = 0u128;
    for k in dims {
        let term = q
            .checked_pow((k * len) as u32)
            .and_then(|t| total.checked_add(t))
            .ok_or_else(|| Error::SizeLimit("Burnside sum overflows u128".into()))?;
        total = term;
    }
    exact_average(total, order)
}

/// Burnside count that streams over every point of the tuple space and tests
/// `g·x = x` directly. Guarded by `|G|·|points| ≤ 10⁸`.
pub fn burnside_count_points(group: &MatrixGroup, len: usize) -> Result<u128> {
    let order = group.order()?;
    let f = &group.field;
    let d = group.degree;
    let vecs = (f.q() as u64).pow(d as u32);
    let points = (vecs as u128).checked_pow(len as u32);
    if points.and_then(|p| p.checked_mul(order as u128)).map_or(true, |w| w > POINT_LIMIT) {
        return Err(Error::SizeLimit(format!("|G|·|points| for |G| = {order}, {vecs}^{len} points")));
    }
    let points = points.unwrap_or(1) as u64;
    if d == 0 {
        return Ok(1);
    }
    let flat = group.elements()?;
    let total: u128 = (0..order)
        .into_par_iter()
        .map(|i| {
            let g = group.element(&flat, i);
            let fixed: Vec<bool> = (0..vecs)
                .map(|x| {
                    let v = linalg::decode(f, x, d);
                    linalg::mat_mul(f, &g, &v, d, d, 1) == v
                })
                .collect();
            (0..points)
                .filter(|&t| {
                    let mut t = t;
                    (0..len).all(|_| {
                        let ok = fixed[(t % vecs) as usize];
                        t /= vecs;
                        ok
                    })
                })
                .count() as u128
        })
        .sum();
    exact_average(total, order)
}

impl OrbitProblem {
    /// The acting group as a matrix group.
    pub fn group(&self) -> Result<MatrixGroup> {
        match self.side {
            Side::Sp => MatrixGroup::symplectic(&SymplecticSpace::new(self.field().clone(), self.half)),
            Side::O => MatrixGroup::orthogonal(&self.form),
        }
    }
}
