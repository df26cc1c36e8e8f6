//! Orbits of `Sp(V)` on `V^{⊕n}` and of `O(W,B)` on `W^{⊕2N}`.
//!
//! A tuple of vectors is described by the reduced row echelon matrix of its
//! linear relations together with the Gram matrix of a basis of its span.
//! By Witt's extension theorem two tuples lie in one orbit exactly when
//! their descriptors agree, so the orbit count is the number of descriptors
//! that are realized by some tuple.

mod counters;
mod group;

pub use counters::{counter_registry, find_counter, OrbitCounter};
pub use group::{burnside_count, burnside_count_points, build_group, GroupKind, MatrixGroup, GROUP_LIMIT, POINT_LIMIT};

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{FieldCtx, FqElem};
use crate::forms::{SymmetricForm, SymplecticSpace};
use crate::linalg;
use crate::qcomb::gaussian_binomial;

/// Largest number of Gram matrices enumerated for one rank.
pub const GRAM_LIMIT: u64 = 10_000_000;

/// Which group of the dual pair acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `Sp(V)` acting on `n`-tuples in `V`.
    Sp,
    /// `O(W,B)` acting on `2N`-tuples in `W`.
    O,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Sp => "sp",
            Side::O => "o",
        })
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Ok(Side::Sp),
            "o" => Ok(Side::O),
            _ => Err(Error::Parse(format!("side must be sp or o, got {s:?}"))),
        }
    }
}

impl Side {
    /// Number of Gram scalars attached to a rank-`d` descriptor.
    pub fn gram_len(self, d: usize) -> usize {
        match self {
            Side::Sp => d * d.saturating_sub(1) / 2,
            Side::O => d * (d + 1) / 2,
        }
    }
}

/// One orbit problem: the dual pair `(Sp_{2N}, O(W,B))` and the acting side.
#[derive(Clone, Debug)]
pub struct OrbitProblem {
    pub side: Side,
    pub half: usize,
    pub form: SymmetricForm,
}

impl OrbitProblem {
    pub fn new(side: Side, field: Arc<FieldCtx>, half: usize, form: SymmetricForm) -> Result<Self> {
        if form.field() != &field {
            return Err(Error::SpaceMismatch);
        }
        Ok(OrbitProblem { side, half, form })
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        self.form.field()
    }

    /// Length of the tuples acted on: `n` or `2N`.
    pub fn tuple_len(&self) -> usize {
        match self.side {
            Side::Sp => self.form.dim(),
            Side::O => 2 * self.half,
        }
    }

    /// Dimension of the space the tuple entries live in: `2N` or `n`.
    pub fn ambient_dim(&self) -> usize {
        match self.side {
            Side::Sp => 2 * self.half,
            Side::O => self.form.dim(),
        }
    }

    /// Whether the problem is in the stable range of its side.
    pub fn stable(&self) -> bool {
        match self.side {
            Side::Sp => self.form.dim() <= self.half,
            Side::O => 2 * self.half <= self.form.witt_index(),
        }
    }

    /// Value of the invariant form on the ambient space.
    fn pairing(&self, u: &[FqElem], v: &[FqElem]) -> FqElem {
        match self.side {
            Side::Sp => SymplecticSpace::new(self.field().clone(), self.half).form(u, v),
            Side::O => self.form.bilinear(u, v),
        }
    }
}

/// Orbit descriptor: an RREF relation matrix `M` (`d × tuple_len`, row
/// major) and the Gram data of a basis of the span, `a_{i<j}` for the
/// symplectic side and `a_{i≤j}` for the orthogonal side, in row order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitDescriptor {
    pub d: usize,
    pub matrix: Vec<FqElem>,
    pub gram: Vec<FqElem>,
}

/// All `d × len` matrices in reduced row echelon form with `d` nonzero
/// rows, ordered by pivot set and then by free entries.
pub fn rref_matrices(field: &FieldCtx, d: usize, len: usize) -> Vec<Vec<FqElem>> {
    let mut out = Vec::new();
    for pivots in combinations(len, d) {
        let mut free = Vec::new();
        for (i, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..len {
                if !pivots.contains(&c) {
                    free.push(i * len + c);
                }
            }
        }
        let q = field.q() as u64;
        for x in 0..q.pow(free.len() as u32) {
            let vals = linalg::decode(field, x, free.len());
            let mut m = vec![field.zero(); d * len];
            for (i, &pc) in pivots.iter().enumerate() {
                m[i * len + pc] = field.one();
            }
            for (&pos, &v) in free.iter().zip(&vals) {
                m[pos] = v;
            }
            out.push(m);
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every descriptor for tuples of length `tuple_len`, ordered by rank, then
/// matrix, then Gram data.
pub fn enumerate_descriptors(side: Side, field: Arc<FieldCtx>, tuple_len: usize) -> impl Iterator<Item = OrbitDescriptor> {
    (0..=tuple_len).flat_map(move |d| {
        let f = field.clone();
        let g = side.gram_len(d);
        let grams = (f.q() as u64).pow(g as u32);
        rref_matrices(&f, d, tuple_len).into_iter().flat_map(move |m| {
            let f = f.clone();
            (0..grams).map(move |x| OrbitDescriptor { d, matrix: m.clone(), gram: linalg::decode(&f, x, g) })
        })
    })
}

/// `Σ_d (len choose d)_q·q^{g(d)}` with `g(d)` the number of Gram scalars.
pub fn descriptor_count(side: Side, q: u64, tuple_len: usize) -> Result<u128> {
    (0..=tuple_len).try_fold(0u128, |acc, d| {
        let b = gaussian_binomial(tuple_len as i64, d as i64)?.eval_u64(q);
        let b: u128 = b.try_into().map_err(|_| Error::SizeLimit("descriptor count overflows u128".into()))?;
        let g = (q as u128).checked_pow(side.gram_len(d) as u32);
        g.and_then(|g| b.checked_mul(g))
            .and_then(|t| acc.checked_add(t))
            .ok_or_else(|| Error::SizeLimit("descriptor count overflows u128".into()))
    })
}

/// Full `d × d` Gram matrix from the packed descriptor data.
pub fn gram_matrix(side: Side, field: &FieldCtx, d: usize, data: &[FqElem]) -> Vec<FqElem> {
    let mut g = vec![field.zero(); d * d];
    let mut it = data.iter();
    for i in 0..d {
        let start = if side == Side::Sp { i + 1 } else { i };
        for j in start..d {
            let a = *it.next().expect("gram data length matches side");
            g[i * d + j] = a;
            g[j * d + i] = if side == Side::Sp { field.neg(a) } else { a };
        }
    }
    g
}

/// The symplectic non-emptiness test: an alternating Gram matrix is
/// realized by independent vectors of `F_q^{2N}` iff `2N ≥ d + dim rad`.
pub fn sp_gram_realizable(field: &FieldCtx, half: usize, d: usize, gram: &[FqElem]) -> bool {
    let rad = d - linalg::rank(field, gram, d, d);
    2 * half >= d + rad
}

/// Searches for independent `u₁…u_d` in the ambient space with the given Gram
/// matrix. Any two partial solutions with the same Gram matrix are related by
/// an isometry (Witt), so one greedy pass over the space decides existence.
pub fn gram_realizable_by_search(problem: &OrbitProblem, d: usize, gram: &[FqElem]) -> Result<bool> {
    let f = problem.field();
    let dim = problem.ambient_dim();
    let size = (f.q() as u64).checked_pow(dim as u32).filter(|&s| s <= GRAM_LIMIT * 10);
    let size = size.ok_or_else(|| Error::SizeLimit(format!("search over F_q^{dim}")))?;
    let mut chosen: Vec<Vec<FqElem>> = Vec::with_capacity(d);
    for k in 0..d {
        let found = (0..size).map(|x| linalg::decode(f, x, dim)).find(|u| {
            if problem.pairing(u, u) != gram[k * d + k] {
                return false;
            }
            if chosen.iter().enumerate().any(|(i, c)| problem.pairing(c, u) != gram[i * d + k]) {
                return false;
            }
            let mut rows: Vec<FqElem> = chosen.iter().flatten().copied().collect();
            rows.extend_from_slice(u);
            linalg::rank(f, &rows, k + 1, dim) == k + 1
        });
        match found {
            Some(u) => chosen.push(u),
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// Whether the descriptor describes at least one tuple.
pub fn descriptor_nonempty(problem: &OrbitProblem, desc: &OrbitDescriptor) -> Result<bool> {
    let f = problem.field();
    let g = gram_matrix(problem.side, f, desc.d, &desc.gram);
    match problem.side {
        Side::Sp => Ok(sp_gram_realizable(f, problem.half, desc.d, &g)),
        Side::O => gram_realizable_by_search(problem, desc.d, &g),
    }
}

/// Number of realizable Gram matrices of rank `d`.
fn realizable_grams(problem: &OrbitProblem, d: usize) -> Result<u128> {
    let f = problem.field();
    let g = problem.side.gram_len(d);
    let total = (f.q() as u64)
        .checked_pow(g as u32)
        .filter(|&t| t <= GRAM_LIMIT)
        .ok_or_else(|| Error::SizeLimit(format!("q^{g} Gram matrices of size {d}")))?;
    if d > problem.ambient_dim() {
        return Ok(0);
    }
    let mut count = 0u128;
    // congruent Gram matrices are realized together (u ↦ u·P), so the search runs once per class
    let mut classes: HashMap<(usize, i8), bool> = HashMap::new();
    for x in 0..total {
        let m = gram_matrix(problem.side, f, d, &linalg::decode(f, x, g));
        let ok = match problem.side {
            Side::Sp => sp_gram_realizable(f, problem.half, d, &m),
            Side::O => match classes.entry(congruence_class(f, d, &m)) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => *e.insert(gram_realizable_by_search(problem, d, &m)?),
            },
        };
        count += ok as u128;
    }
    Ok(count)
}

/// Rank and discriminant (±1) of the nondegenerate part of a symmetric matrix.
pub fn congruence_class(f: &FieldCtx, d: usize, gram: &[FqElem]) -> (usize, i8) {
    let mut m = gram.to_vec();
    let mut rank = 0;
    let mut disc = 1i8;
    let mut live: Vec<usize> = (0..d).collect();
    while let Some(pos) = live.iter().position(|&i| !m[i * d + i].is_zero()).or_else(|| {
        // no nonzero diagonal: fold a partner j into i so that m[i][i] = 2·m[i][j]
        let (i, j) = live.iter().flat_map(|&i| live.iter().map(move |&j| (i, j))).find(|&(i, j)| !m[i * d + j].is_zero())?;
        for k in 0..d {
            m[i * d + k] = f.add(m[i * d + k], m[j * d + k]);
        }
        for k in 0..d {
            m[k * d + i] = f.add(m[k * d + i], m[k * d + j]);
        }
        live.iter().position(|&x| x == i)
    }) {
        let i = live.swap_remove(pos);
        let a = m[i * d + i];
        disc *= f.quad_char(a);
        rank += 1;
        let inv = f.inv(a).expect("nonzero pivot");
        for &r in &live {
            let c = f.mul(m[r * d + i], inv);
            for &k in &live {
                let t = f.mul(c, m[i * d + k]);
                m[r * d + k] = f.sub(m[r * d + k], t);
            }
            m[r * d + i] = f.zero();
        }
    }
    (rank, disc)
}

/// Number of orbits, counted as realizable descriptors. The relation
/// matrix is free, so each rank contributes `(len choose d)_q` times the
/// number of realizable Gram matrices.
pub fn census(problem: &OrbitProblem) -> Result<u128> {
    let q = problem.field().q() as u64;
    let len = problem.tuple_len();
    let mut total = 0u128;
    for d in 0..=len {
        let grams = realizable_grams(problem, d)?;
        if grams == 0 {
            continue;
        }
        let b: u128 = gaussian_binomial(len as i64, d as i64)?
            .eval_u64(q)
            .try_into()
            .map_err(|_| Error::SizeLimit("orbit count overflows u128".into()))?;
        total += b * grams;
    }
    Ok(total)
}

/// Closed form in the stable ranges: `2(q+1)…(q^{n−1}+1)` on the symplectic
/// side and `(q+1)(q²+1)…(q^{2N}+1)` on the orthogonal side.
pub fn stable_orbit_count(problem: &OrbitProblem) -> Result<u128> {
    if !problem.stable() {
        return Err(Error::NotInStableRange(format!(
            "{} side with N={}, n={}, h_W={}",
            problem.side,
            problem.half,
            problem.form.dim(),
            problem.form.witt_index()
        )));
    }
    let q = problem.field().q() as u128;
    let qs = |k: usize| (1..=k).map(|j| q.pow(j as u32) + 1).product::<u128>();
    Ok(match problem.side {
        Side::Sp if problem.form.dim() == 0 => 1,
        Side::Sp => 2 * qs(problem.form.dim() - 1),
        Side::O => qs(2 * problem.half),
    })
}

/// Dimension of the fixed subalgebra `ℂ(V⊗W)^G`, i.e. the number of orbits.
pub fn group_fixed_subalgebra_dim(problem: &OrbitProblem) -> Result<u128> {
    census(problem)
}
