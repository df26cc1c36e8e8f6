//! Concrete operators on the Schrödinger model `ℂ(Λ₋ ⊗ W)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{StarContext, StarElement};
use crate::error::{Error, Result};
use crate::fields::{FieldCtx, FqElem};
use crate::linalg;
use crate::scalars::{conv_acc, is_zero_slice, scaled_blocks_equal, CycInt, CycScalar};

/// Largest `dim²·p` for which a dense model matrix is materialized.
pub const DENSE_LIMIT: u64 = 1 << 26;

/// Square matrix `scale · C` with `C` over `Z[ζ_p]`; column `c` is the image
/// of the basis vector `c`.
#[derive(Clone)]
pub struct ModelOperator {
    p: u32,
    q: u64,
    dim: usize,
    scale: CycScalar,
    entries: Vec<i64>,
}

impl fmt::Debug for ModelOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModelOperator(dim={}, scale={})", self.dim, self.scale)
    }
}

/// Hashable normal form of an operator whose scale is a rational multiple of
/// a power of `s`: the value is `num/den · s^odd · C` with `C` primitive and
/// its first nonzero coordinate positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OperatorKey {
    odd: bool,
    num: BigInt,
    den: BigInt,
    entries: Vec<i64>,
}

impl ModelOperator {
    pub fn zero(p: u32, q: u64, dim: usize) -> Self {
        ModelOperator { p, q, dim, scale: CycScalar::one(p, q), entries: vec![0; dim * dim * p as usize] }
    }

    pub fn identity(p: u32, q: u64, dim: usize) -> Self {
        let mut m = Self::zero(p, q, dim);
        for i in 0..dim {
            m.entries[(i * dim + i) * p as usize] = 1;
        }
        m
    }

    /// Permutation operator `(c) ↦ (images[c])`.
    pub fn permutation(p: u32, q: u64, images: &[usize]) -> Self {
        let dim = images.len();
        let mut m = Self::zero(p, q, dim);
        for (c, &r) in images.iter().enumerate() {
            m.entries[(r * dim + c) * p as usize] = 1;
        }
        m
    }

    /// Identity operator of the same shape.
    pub fn identity_like(&self) -> Self {
        Self::identity(self.p, self.q, self.dim)
    }

    fn for_field(f: &FieldCtx, dim: usize) -> Result<Self> {
        let p = f.p();
        if (dim as u64).pow(2) * p as u64 > DENSE_LIMIT {
            return Err(Error::SizeLimit(format!("dense model matrix of dimension {dim}")));
        }
        Ok(Self::zero(p, f.q() as u64, dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self) -> &CycScalar {
        &self.scale
    }

    fn pu(&self) -> usize {
        self.p as usize
    }

    /// Raw `Z[ζ_p]` block at `(row, col)` (before `scale`).
    pub fn block(&self, row: usize, col: usize) -> &[i64] {
        let p = self.pu();
        let o = (row * self.dim + col) * p;
        &self.entries[o..o + p]
    }

    fn block_mut(&mut self, row: usize, col: usize) -> &mut [i64] {
        let p = self.pu();
        let o = (row * self.dim + col) * p;
        &mut self.entries[o..o + p]
    }

    /// Adds `coef·ζ^shift` to the raw block at `(row, col)`.
    fn add_rotated(&mut self, row: usize, col: usize, coef: &[i64], shift: u32) {
        let p = self.pu();
        let b = self.block_mut(row, col);
        for (k, &c) in coef.iter().enumerate() {
            if c != 0 {
                b[(k + shift as usize) % p] += c;
            }
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> CycScalar {
        self.scale.mul_cycint(&CycInt::from_coeffs(self.block(row, col).to_vec()))
    }

    /// Image of the basis vector `col` as `(row, coefficient)` pairs.
    pub fn column(&self, col: usize) -> Vec<(usize, CycScalar)> {
        (0..self.dim)
            .filter(|&r| !is_zero_slice(self.block(r, col)))
            .map(|r| (r, self.entry(r, col)))
            .collect()
    }

    pub fn scaled(&self, s: &CycScalar) -> Self {
        ModelOperator { scale: &self.scale * s, ..self.clone() }
    }

    pub fn mul(&self, other: &ModelOperator) -> Result<ModelOperator> {
        if self.dim != other.dim || self.p != other.p || self.q != other.q {
            return Err(Error::SpaceMismatch);
        }
        let (d, p) = (self.dim, self.pu());
        let rows: Vec<Vec<usize>> =
            (0..d).map(|k| (0..d).filter(|&c| !is_zero_slice(other.block(k, c))).collect()).collect();
        let mut out = vec![0i64; d * d * p];
        for r in 0..d {
            for (k, cols) in rows.iter().enumerate() {
                let a = self.block(r, k);
                if is_zero_slice(a) {
                    continue;
                }
                for &c in cols {
                    let o = (r * d + c) * p;
                    conv_acc(&mut out[o..o + p], a, other.block(k, c), 0);
                }
            }
        }
        let mut m = ModelOperator { p: self.p, q: self.q, dim: d, scale: &self.scale * &other.scale, entries: out };
        m.normalize();
        Ok(m)
    }

    pub fn trace(&self) -> CycScalar {
        let p = self.pu();
        let mut acc = vec![0i64; p];
        for i in 0..self.dim {
            for (a, b) in acc.iter_mut().zip(self.block(i, i)) {
                *a += b;
            }
        }
        self.scale.mul_cycint(&CycInt::from_coeffs(acc))
    }

    /// Canonical coordinates for every block, with the integer content moved into the scale.
    pub fn normalize(&mut self) {
        let p = self.pu();
        let mut g = BigInt::zero();
        for b in self.entries.chunks_mut(p) {
            let top = b[p - 1];
            if top != 0 {
                for x in b.iter_mut() {
                    *x -= top;
                }
            }
            for &x in b.iter() {
                if x != 0 {
                    g = g.gcd(&BigInt::from(x));
                }
            }
        }
        if let Some(gi) = g.to_i64().filter(|&v| v > 1) {
            for x in self.entries.iter_mut() {
                *x /= gi;
            }
            self.scale = self.scale.scale_rational(&BigRational::from_integer(g));
        }
    }

    /// Hash key for group-closure searches. Fails unless the scale is a
    /// rational multiple of `1` or of `s`.
    pub fn key(&self) -> Result<OperatorKey> {
        let mut m = self.clone();
        m.normalize();
        let (odd, r) = if let Some(r) = m.scale.as_rational() {
            (false, r)
        } else {
            let s = CycScalar::sqrt_q(m.p, m.q);
            let t = m.scale.div(&s)?;
            let r = t.as_rational().ok_or_else(|| Error::Invalid("scale is not a rational power of s".into()))?;
            (true, r)
        };
        let mut r = r;
        if let Some(first) = m.entries.iter().find(|&&x| x != 0) {
            if *first < 0 {
                for x in m.entries.iter_mut() {
                    *x = -*x;
                }
                r = -r;
            }
        } else {
            r = BigRational::zero();
        }
        Ok(OperatorKey { odd, num: r.numer().clone(), den: r.denom().clone(), entries: m.entries })
    }

    /// `c` with `self = c · other`, if it exists.
    pub fn ratio_to(&self, other: &ModelOperator) -> Option<CycScalar> {
        let p = self.pu();
        let pos = other.entries.chunks(p).position(|b| !is_zero_slice(b))?;
        let (r, c) = (pos / self.dim, pos % self.dim);
        let num = self.entry(r, c);
        let den = other.entry(r, c);
        let ratio = num.div(&den).ok()?;
        (other.scaled(&ratio) == *self).then_some(ratio)
    }

    /// Rank of the coefficient matrix over `F_P` for a prime `P ≡ 1 (mod p)`,
    /// with `ζ` sent to a primitive `p`-th root of unity. A full rank here
    /// certifies invertibility over `Q(ζ_p)`; in general it is a lower bound.
    pub fn rank_mod_prime(&self) -> usize {
        rank_mod_prime(self).0
    }

    /// Column-stochastic style check used by permutation operators: true if
    /// every column has exactly one nonzero block.
    pub fn is_monomial(&self) -> bool {
        (0..self.dim).all(|c| (0..self.dim).filter(|&r| !is_zero_slice(self.block(r, c))).count() == 1)
    }
}

impl PartialEq for ModelOperator {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.p == other.p
            && scaled_blocks_equal(self.pu(), &self.scale, &self.entries, &other.scale, &other.entries)
    }
}

fn is_prime_u64(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `(rank, P)` of the operator's coefficient matrix reduced modulo `P`.
pub fn rank_mod_prime(op: &ModelOperator) -> (usize, u64) {
    let p = op.p as u64;
    let prime = (1..).map(|k| 1_000_000 / p * p + k * p + 1).find(|&c| is_prime_u64(c)).unwrap();
    let root = (2..prime).map(|g| pow_mod(g, (prime - 1) / p, prime)).find(|&r| r != 1).unwrap();
    let powers: Vec<u64> = (0..p).map(|k| pow_mod(root, k, prime)).collect();
    let d = op.dim;
    let mut m: Vec<u64> = (0..d * d)
        .map(|i| {
            let b = &op.entries[i * op.pu()..(i + 1) * op.pu()];
            b.iter().zip(&powers).fold(0u64, |acc, (&c, &w)| {
                let c = c.rem_euclid(prime as i64) as u64;
                (acc + c * w) % prime
            })
        })
        .collect();
    let mut rank = 0;
    for c in 0..d {
        let Some(pr) = (rank..d).find(|&r| m[r * d + c] != 0) else {
            continue;
        };
        for j in 0..d {
            m.swap(pr * d + j, rank * d + j);
        }
        let inv = pow_mod(m[rank * d + c], prime - 2, prime);
        for r in 0..d {
            if r == rank || m[r * d + c] == 0 {
                continue;
            }
            let factor = m[r * d + c] * inv % prime;
            for j in 0..d {
                let t = factor * m[rank * d + j] % prime;
                m[r * d + j] = (m[r * d + j] + prime - t) % prime;
            }
        }
        rank += 1;
    }
    (rank, prime)
}

impl StarElement {
    /// The model operator of this element.
    pub fn to_model(&self) -> Result<ModelOperator> {
        let ctx = self.ctx();
        let f = ctx.field();
        let t = ctx.tables()?;
        let md = ctx.model_dim();
        let mut m = ModelOperator::for_field(f, md as usize)?;
        let p = f.p();
        let (idx, coef) = self.raw_parts();
        for (i, &v) in idx.iter().enumerate() {
            let c = &coef[i * p as usize..(i + 1) * p as usize];
            let vp = v % md;
            let vm = v - vp;
            let e0 = t.beta(vp, vm);
            for x in 0..md {
                let xv = x * md;
                let e = (2 * t.beta(vp, xv) + e0) % p;
                let row = t.add(vm, xv) / md;
                m.add_rotated(row as usize, x as usize, c, e);
            }
        }
        m.scale = self.scale().clone();
        m.normalize();
        Ok(m)
    }

    /// Matrix-free image of one model basis vector.
    pub fn apply_to_basis(&self, x: u64) -> Result<Vec<(u64, CycScalar)>> {
        let ctx = self.ctx();
        let f = ctx.field();
        let t = ctx.tables()?;
        let md = ctx.model_dim();
        if x >= md {
            return Err(Error::OutOfRange(format!("model basis index {x} ≥ {md}")));
        }
        let p = f.p() as usize;
        let mut acc: std::collections::BTreeMap<u64, Vec<i64>> = Default::default();
        let (idx, coef) = self.raw_parts();
        for (i, &v) in idx.iter().enumerate() {
            let vp = v % md;
            let vm = v - vp;
            let e = (2 * t.beta(vp, x * md) + t.beta(vp, vm)) as usize % p;
            let row = t.add(vm, x * md) / md;
            let slot = acc.entry(row).or_insert_with(|| vec![0; p]);
            for (k, &c) in coef[i * p..(i + 1) * p].iter().enumerate() {
                slot[(k + e) % p] += c;
            }
        }
        Ok(acc
            .into_iter()
            .filter(|(_, b)| !is_zero_slice(b))
            .map(|(r, b)| (r, self.scale().mul_cycint(&CycInt::from_coeffs(b))))
            .collect())
    }
}

fn require_plane(ctx: &StarContext) -> Result<()> {
    if ctx.half() != 1 {
        return Err(Error::Invalid("oscillator operators are defined for dim V = 2".into()));
    }
    Ok(())
}

fn psi_exp(ctx: &StarContext, x: FqElem) -> u32 {
    let f = ctx.field();
    f.trace_to_prime(f.mul(ctx.char_param(), x))
}

fn model_vectors(ctx: &StarContext) -> Vec<Vec<FqElem>> {
    let f = ctx.field();
    (0..ctx.model_dim()).map(|u| linalg::decode(f, u, ctx.n())).collect()
}

/// `(u) ↦ (t·u)`, the action of `diag(t, 1/t)`.
pub fn oscillator_dilation(ctx: &StarContext, t: FqElem) -> Result<ModelOperator> {
    require_plane(ctx)?;
    if t.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let f = ctx.field();
    let mut m = ModelOperator::for_field(f, ctx.model_dim() as usize)?;
    for (u, vec) in model_vectors(ctx).iter().enumerate() {
        let tu: Vec<FqElem> = vec.iter().map(|&x| f.mul(t, x)).collect();
        *m.block_mut(linalg::encode(f, &tu) as usize, u).first_mut().unwrap() = 1;
    }
    Ok(m)
}

/// `(u) ↦ q^{−n/2} Σ_w ψ(−B(u, w))·(w)`, the action of `[[0, 1], [−1, 0]]`.
pub fn oscillator_fourier(ctx: &StarContext) -> Result<ModelOperator> {
    require_plane(ctx)?;
    let f = ctx.field();
    let mut m = ModelOperator::for_field(f, ctx.model_dim() as usize)?;
    let vecs = model_vectors(ctx);
    let one = [1i64];
    for (u, uv) in vecs.iter().enumerate() {
        for (w, wv) in vecs.iter().enumerate() {
            let e = psi_exp(ctx, f.neg(ctx.form().bilinear(uv, wv)));
            m.add_rotated(w, u, &one, e);
        }
    }
    m.scale = CycScalar::sqrt_q_pow(f.p(), f.q() as u64, -(ctx.n() as i64));
    Ok(m)
}

/// `(u) ↦ ψ(t·B(u,u)/2)·(u)`, the action of `[[1, 0], [t, 1]]`.
pub fn oscillator_shear(ctx: &StarContext, t: FqElem) -> Result<ModelOperator> {
    require_plane(ctx)?;
    let f = ctx.field();
    let mut m = ModelOperator::for_field(f, ctx.model_dim() as usize)?;
    for (u, uv) in model_vectors(ctx).iter().enumerate() {
        let e = psi_exp(ctx, f.half(f.mul(t, ctx.form().quad(uv))));
        m.add_rotated(u, u, &[1], e);
    }
    Ok(m)
}

/// Oscillator action of `[[a, b], [c, d]] ∈ SL₂(F_q)` assembled from the
/// three basic operators by a Bruhat decomposition.
pub fn sl2_action(ctx: &StarContext, m: [FqElem; 4]) -> Result<ModelOperator> {
    let f = ctx.field();
    let [a, b, c, d] = m;
    if f.sub(f.mul(a, d), f.mul(b, c)) != f.one() {
        return Err(Error::Invalid("matrix is not in SL2".into()));
    }
    if b.is_zero() {
        // [[a, 0], [c, 1/a]] = L(c/a)·D(a)
        oscillator_shear(ctx, f.div(c, a)?)?.mul(&oscillator_dilation(ctx, a)?)
    } else {
        // L(d/b)·F·D(1/b)·L(a/b)
        let binv = f.inv(b)?;
        oscillator_shear(ctx, f.mul(d, binv))?
            .mul(&oscillator_fourier(ctx)?)?
            .mul(&oscillator_dilation(ctx, binv)?)?
            .mul(&oscillator_shear(ctx, f.mul(a, binv))?)
    }
}

/// Action of the Heisenberg element `(v, c)` on the model basis vector `x`:
/// `ψ_a(c + ½𝐒(v₊, x))·(v₋ + x)`. Returns `(exponent of ζ, image index)`.
pub fn heisenberg_act(ctx: &StarContext, v: u64, c: FqElem, x: u64) -> Result<(u32, u64)> {
    let t = ctx.tables()?;
    let md = ctx.model_dim();
    let vp = v % md;
    let vm = v - vp;
    let p = ctx.field().p();
    let e = (psi_exp(ctx, c) + t.beta(vp, x * md)) % p;
    Ok((e, t.add(vm, x * md) / md))
}

/// The product under which [`heisenberg_act`] composes:
/// `(v, c)·(v', c') = (v + v', c + c' + ½𝐒(v₊, v'₋))`.
pub fn heisenberg_product(ctx: &StarContext, a: (u64, FqElem), b: (u64, FqElem)) -> Result<(u64, FqElem)> {
    let f = ctx.field();
    let t = ctx.tables()?;
    let md = ctx.model_dim();
    let ap = ctx.decode(a.0 % md);
    let bm = ctx.decode(b.0 - b.0 % md);
    let c = f.add(f.add(a.1, b.1), f.half(ctx.form_value(&ap, &bm)));
    Ok((t.add(a.0, b.0), c))
}
