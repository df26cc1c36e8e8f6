//! Sparse elements of `ℂ𝐕` and the ⋆-product.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{StarContext, ACCUMULATOR_LIMIT};
use crate::error::{Error, Result};
use crate::fields::make_field;
use crate::forms::{SymmetricForm, SymplecticSpace};
use crate::scalars::{conv_acc, is_zero_slice, parse_scalar, scaled_blocks_equal, CycInt, CycScalar};

/// One term of an element: an encoded vector and its exact coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub vec: u64,
    pub coeff: CycScalar,
}

/// `scale · Σ c_v·(v)` with `c_v ∈ Z[ζ_p]`, sorted by `v`, no zero `c_v`.
#[derive(Clone)]
pub struct StarElement {
    ctx: Arc<StarContext>,
    scale: CycScalar,
    idx: Vec<u64>,
    coef: Vec<i64>,
}

impl fmt::Debug for StarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StarElement({:?}, scale={}, {} terms)", self.ctx, self.scale, self.idx.len())
    }
}

/// Subtracts the most frequent coordinate so the representative is sparse.
fn sparsify(block: &mut [i64]) {
    let mut best = (0usize, 0i64);
    for &x in block.iter() {
        let count = block.iter().filter(|&&y| y == x).count();
        if count > best.0 || (count == best.0 && x == 0) {
            best = (count, x);
        }
    }
    if best.1 != 0 {
        for x in block.iter_mut() {
            *x -= best.1;
        }
    }
}

#[derive(Clone, Copy)]
struct Mono {
    lo: u32,
    hi: u32,
    k: u32,
    c: i64,
}

impl StarElement {
    fn p(&self) -> usize {
        self.ctx.field().p() as usize
    }

    /// Builds an element from `(vector, Z[ζ_p] coefficient)` pairs; repeated
    /// vectors are summed and zero coefficients dropped.
    pub fn from_cyc_terms(
        ctx: &Arc<StarContext>,
        scale: CycScalar,
        terms: impl IntoIterator<Item = (u64, Vec<i64>)>,
    ) -> Result<Self> {
        let p = ctx.field().p() as usize;
        let size = ctx.size();
        let mut acc: HashMap<u64, Vec<i64>> = HashMap::new();
        for (v, c) in terms {
            if v >= size {
                return Err(Error::OutOfRange(format!("vector index {v} outside a space of size {size}")));
            }
            if c.len() != p {
                return Err(Error::Invalid(format!("coefficient needs {p} coordinates")));
            }
            let slot = acc.entry(v).or_insert_with(|| vec![0; p]);
            for (s, x) in slot.iter_mut().zip(&c) {
                *s += x;
            }
        }
        let mut keys: Vec<u64> = acc.keys().copied().filter(|k| !is_zero_slice(&acc[k])).collect();
        keys.sort_unstable();
        let mut coef = Vec::with_capacity(keys.len() * p);
        for k in &keys {
            let mut b = acc.remove(k).unwrap();
            sparsify(&mut b);
            coef.extend(b);
        }
        Ok(StarElement { ctx: ctx.clone(), scale, idx: keys, coef })
    }

    /// `scale · Σ ζ^{e_v}·(v)`.
    pub fn from_exponents(
        ctx: &Arc<StarContext>,
        scale: CycScalar,
        terms: impl IntoIterator<Item = (u64, u32)>,
    ) -> Result<Self> {
        let p = ctx.field().p();
        Self::from_cyc_terms(ctx, scale, terms.into_iter().map(|(v, e)| (v, CycInt::monomial(p, e, 1).c)))
    }

    /// Builds from arbitrary exact coefficients. All coefficients must share
    /// their `s`-type: either all without `s` part or all pure multiples of `s`.
    pub fn from_scalar_terms(ctx: &Arc<StarContext>, terms: Vec<(u64, CycScalar)>) -> Result<Self> {
        let f = ctx.field();
        let (p, q) = (f.p(), f.q() as u64);
        let all_base = terms.iter().all(|(_, c)| c.is_base());
        let all_root = terms.iter().all(|(_, c)| c.base().iter().all(Zero::is_zero));
        let s_inv = CycScalar::sqrt_q(p, q).inv()?;
        let unit_part = |c: &CycScalar| if all_base { c.clone() } else { c * &s_inv };
        if !all_base && !all_root {
            return Err(Error::Invalid("coefficients mix s-parts and base parts".into()));
        }
        let mut den = BigInt::one();
        for (_, c) in &terms {
            let (d, _, _) = unit_part(c).clear_denominators();
            den = num_integer::Integer::lcm(&den, &d);
        }
        let dr = BigRational::from_integer(den.clone());
        let mut ints = Vec::with_capacity(terms.len());
        for (v, c) in &terms {
            let z = unit_part(c).scale_rational(&dr).to_cycint().ok_or_else(|| Error::SizeLimit("coefficient overflow".into()))?;
            ints.push((*v, z.c));
        }
        let mut scale = CycScalar::from_rational(p, q, dr.recip());
        if !all_base {
            scale = &scale * &CycScalar::sqrt_q(p, q);
        }
        Self::from_cyc_terms(ctx, scale, ints)
    }

    pub fn zero(ctx: &Arc<StarContext>) -> Self {
        let f = ctx.field();
        StarElement { ctx: ctx.clone(), scale: CycScalar::one_for(f), idx: Vec::new(), coef: Vec::new() }
    }

    /// The basis element `(v)`.
    pub fn basis(ctx: &Arc<StarContext>, v: u64) -> Result<Self> {
        Self::from_exponents(ctx, CycScalar::one_for(ctx.field()), [(v, 0)])
    }

    /// The unit `(0)`.
    pub fn unit(ctx: &Arc<StarContext>) -> Self {
        Self::basis(ctx, 0).expect("zero vector is in range")
    }

    pub fn ctx(&self) -> &Arc<StarContext> {
        &self.ctx
    }

    pub fn scale(&self) -> &CycScalar {
        &self.scale
    }

    /// Number of stored terms (the support size).
    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn support(&self) -> &[u64] {
        &self.idx
    }

    /// Raw `Z[ζ_p]` coefficient block of the `i`-th stored term (before `scale`).
    pub fn raw_coeff(&self, i: usize) -> &[i64] {
        let p = self.p();
        &self.coef[i * p..(i + 1) * p]
    }

    /// Exact coefficient of `(v)`.
    pub fn coeff(&self, v: u64) -> CycScalar {
        match self.idx.binary_search(&v) {
            Ok(i) => self.scale.mul_cycint(&CycInt::from_coeffs(self.raw_coeff(i).to_vec())),
            Err(_) => CycScalar::zero_for(self.ctx.field()),
        }
    }

    pub fn terms(&self) -> Vec<Term> {
        self.idx.iter().map(|&v| Term { vec: v, coeff: self.coeff(v) }).collect()
    }

    /// Multiplies by a scalar.
    pub fn scaled(&self, s: &CycScalar) -> Self {
        StarElement { ctx: self.ctx.clone(), scale: &self.scale * s, idx: self.idx.clone(), coef: self.coef.clone() }
    }

    /// Rewrites the element so that its scale is `scale` (coefficients must stay integral).
    fn rescaled_coeffs(&self, factor: &CycInt) -> Vec<(u64, Vec<i64>)> {
        let p = self.p();
        self.idx
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut out = vec![0; p];
                conv_acc(&mut out, &self.coef[i * p..(i + 1) * p], &factor.c, 0);
                (v, out)
            })
            .collect()
    }

    /// Multiplies every coefficient by a `Z[ζ_p]` value, keeping the scale.
    pub fn mul_cycint(&self, c: &CycInt) -> Self {
        let terms = self.rescaled_coeffs(c);
        Self::from_cyc_terms(&self.ctx, self.scale.clone(), terms).expect("indices already validated")
    }

    pub fn add(&self, other: &StarElement) -> Result<Self> {
        if !self.ctx.same_space(&other.ctx) {
            return Err(Error::SpaceMismatch);
        }
        let p = self.ctx.field().p();
        let one = CycInt::from_int(p, 1);
        if self.scale == other.scale {
            let terms = self.rescaled_coeffs(&one).into_iter().chain(other.rescaled_coeffs(&one));
            return Self::from_cyc_terms(&self.ctx, self.scale.clone(), terms);
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let r = other.scale.div(&self.scale)?;
        if let Some(ri) = r.to_cycint() {
            let terms = self.rescaled_coeffs(&one).into_iter().chain(other.rescaled_coeffs(&ri));
            return Self::from_cyc_terms(&self.ctx, self.scale.clone(), terms);
        }
        if let Some(ri) = r.inv().ok().and_then(|x| x.to_cycint()) {
            let terms = self.rescaled_coeffs(&ri).into_iter().chain(other.rescaled_coeffs(&one));
            return Self::from_cyc_terms(&self.ctx, other.scale.clone(), terms);
        }
        if !r.is_base() {
            return Err(Error::Invalid("cannot add elements whose scales differ by an s-multiple".into()));
        }
        let (d, num, _) = r.clear_denominators();
        let to_i64 = |x: &BigInt| x.to_i64().ok_or_else(|| Error::SizeLimit("coefficient overflow".into()));
        let mut c: Vec<i64> = num.iter().map(to_i64).collect::<Result<_>>()?;
        c.push(0);
        let di = to_i64(&d)?;
        let terms = self
            .rescaled_coeffs(&CycInt::from_int(p, di))
            .into_iter()
            .chain(other.rescaled_coeffs(&CycInt::from_coeffs(c)));
        let scale = self.scale.scale_rational(&BigRational::from_integer(d).recip());
        Self::from_cyc_terms(&self.ctx, scale, terms)
    }

    pub fn neg(&self) -> Self {
        StarElement { ctx: self.ctx.clone(), scale: -&self.scale, idx: self.idx.clone(), coef: self.coef.clone() }
    }

    pub fn sub(&self, other: &StarElement) -> Result<Self> {
        self.add(&other.neg())
    }

    fn monomials(&self, p_lo: u64) -> Vec<Mono> {
        let p = self.p();
        let mut out = Vec::with_capacity(self.idx.len());
        for (i, &v) in self.idx.iter().enumerate() {
            for (k, &c) in self.coef[i * p..(i + 1) * p].iter().enumerate() {
                if c != 0 {
                    out.push(Mono { lo: (v % p_lo) as u32, hi: (v / p_lo) as u32, k: k as u32, c });
                }
            }
        }
        out
    }

    /// `self ⋆ other`.
    pub fn star(&self, other: &StarElement) -> Result<StarElement> {
        if !self.ctx.same_space(&other.ctx) {
            return Err(Error::SpaceMismatch);
        }
        let ctx = &self.ctx;
        let t = ctx.tables()?;
        let p = t.p as usize;
        let size = ctx.size();
        if size.saturating_mul(p as u64) > ACCUMULATOR_LIMIT {
            return Err(Error::SizeLimit(format!("star product accumulator for |V| = {size}")));
        }
        let scale = &self.scale * &other.scale;
        if self.is_empty() || other.is_empty() {
            return Ok(StarElement { ctx: ctx.clone(), scale, idx: Vec::new(), coef: Vec::new() });
        }
        let a = self.monomials(t.p_lo);
        let b = other.monomials(t.p_lo);
        // The outer loop runs over the shorter list; β is antisymmetric, so a
        // swapped orientation just negates the exponent rows.
        let (outer, inner, flipped) = if a.len() <= b.len() { (a, b, false) } else { (b, a, true) };
        let pl = t.p_lo as usize;
        let ph = t.p_hi as usize;
        let modp: Vec<u32> = (0..8 * p as u32).map(|x| x % p as u32).collect();
        let two_p = 2 * p as u32;
        let mut buf = vec![0i64; size as usize * p];
        let mut e_lo = vec![0u32; pl];
        let mut e_hi = vec![0u32; ph];
        for o in &outer {
            let (ol, oh) = (o.lo as usize, o.hi as usize);
            let ll = &t.ll[ol * pl..(ol + 1) * pl];
            let hl = &t.hl[oh * pl..(oh + 1) * pl];
            for (x, e) in e_lo.iter_mut().enumerate() {
                let s = ll[x] as u32 + hl[x] as u32;
                *e = if flipped { two_p - s } else { s };
            }
            let lh = &t.lh[ol * ph..(ol + 1) * ph];
            let hh = &t.hh[oh * ph..(oh + 1) * ph];
            for (y, e) in e_hi.iter_mut().enumerate() {
                let s = lh[y] as u32 + hh[y] as u32;
                *e = if flipped { two_p - s } else { s };
            }
            let add_lo = &t.add_lo[ol * pl..(ol + 1) * pl];
            let add_hi = &t.add_hi[oh * ph..(oh + 1) * ph];
            for m in &inner {
                let w = add_lo[m.lo as usize] as usize + pl * add_hi[m.hi as usize] as usize;
                let e = modp[(e_lo[m.lo as usize] + e_hi[m.hi as usize] + o.k + m.k) as usize] as usize;
                buf[w * p + e] += o.c * m.c;
            }
        }
        let mut idx = Vec::new();
        let mut coef = Vec::new();
        for (w, block) in buf.chunks_mut(p).enumerate() {
            if !is_zero_slice(block) {
                sparsify(block);
                idx.push(w as u64);
                coef.extend_from_slice(block);
            }
        }
        Ok(StarElement { ctx: ctx.clone(), scale, idx, coef })
    }

    /// `tr(x) = c_0 · q^{Nn}`.
    pub fn trace(&self) -> CycScalar {
        let d = BigRational::from_integer(BigInt::from(self.ctx.model_dim()));
        self.coeff(0).scale_rational(&d)
    }

    /// True when every coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.idx.is_empty() || self.scale.is_zero()
    }

    /// JSON form `{"space": …, "char": a, "terms": [{"vec": [...], "coeff": "..."}]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .into_iter()
            .map(|t| {
                let vec: Vec<u32> = self.ctx.decode(t.vec).iter().map(|x| x.index()).collect();
                json!({"vec": vec, "coeff": t.coeff.to_string()})
            })
            .collect();
        json!({"space": space_json(&self.ctx), "char": self.ctx.char_param().index(), "terms": terms})
    }

    /// Inverse of [`StarElement::to_json`]; builds a fresh context from the space description.
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("star element JSON: {m}"));
        let space = value.get("space").ok_or_else(|| bad("missing space"))?;
        let get_u = |k: &str| space.get(k).and_then(Value::as_u64).ok_or_else(|| bad(k));
        let f = make_field(get_u("p")?, get_u("ell")? as u32)?;
        let half = get_u("N")? as usize;
        let gram: Vec<Vec<i64>> = serde_json::from_value(space.get("form").cloned().ok_or_else(|| bad("form"))?)
            .map_err(|e| bad(&e.to_string()))?;
        let form = SymmetricForm::parse(f.clone(), &serde_json::to_string(&gram).unwrap())?;
        let a = value.get("char").and_then(Value::as_u64).unwrap_or(1) as u32;
        let ctx = StarContext::tensor(SymplecticSpace::new(f.clone(), half), form, f.elem(a)?)?;
        let mut terms = Vec::new();
        for t in value.get("terms").and_then(Value::as_array).ok_or_else(|| bad("terms"))? {
            let v: Vec<u32> =
                serde_json::from_value(t.get("vec").cloned().ok_or_else(|| bad("vec"))?).map_err(|e| bad(&e.to_string()))?;
            let v = v.into_iter().map(|x| f.elem(x)).collect::<Result<Vec<_>>>()?;
            let c = t.get("coeff").and_then(Value::as_str).ok_or_else(|| bad("coeff"))?;
            terms.push((ctx.encode(&v)?, parse_scalar(f.p(), f.q() as u64, c)?));
        }
        Self::from_scalar_terms(&ctx, terms)
    }

    pub(crate) fn raw_parts(&self) -> (&[u64], &[i64]) {
        (&self.idx, &self.coef)
    }
}

pub(crate) fn space_json(ctx: &StarContext) -> Value {
    let f = ctx.field();
    let n = ctx.n();
    let gram: Vec<Vec<u32>> =
        (0..n).map(|i| (0..n).map(|j| ctx.form().entry(i, j).index()).collect()).collect();
    json!({"p": f.p(), "ell": f.ell(), "q": f.q(), "N": ctx.half(), "n": n, "form": gram})
}

impl PartialEq for StarElement {
    fn eq(&self, other: &Self) -> bool {
        if !self.ctx.same_space(&other.ctx) {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.idx == other.idx && scaled_blocks_equal(self.p(), &self.scale, &self.coef, &other.scale, &other.coef)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    fn plane(q: u64) -> Arc<StarContext> {
        let f = make_field(q, 1).unwrap();
        StarContext::symplectic(SymplecticSpace::new(f.clone(), 1), f.one()).unwrap()
    }

    #[test]
    fn unit_and_inverse_vectors() {
        let ctx = plane(3);
        let unit = StarElement::unit(&ctx);
        for v in 0..9 {
            let b = StarElement::basis(&ctx, v).unwrap();
            assert_eq!(b.star(&unit).unwrap(), b);
            assert_eq!(unit.star(&b).unwrap(), b);
            let neg = StarElement::basis(&ctx, ctx.tables().unwrap().neg(v)).unwrap();
            assert_eq!(b.star(&neg).unwrap(), unit);
        }
    }

    #[test]
    fn plus_times_minus_over_f3() {
        // (e⁺) ⋆ (e⁻) = ψ(½)·(e⁺ + e⁻) = ζ²·(e⁺ + e⁻)
        let ctx = plane(3);
        let ep = StarElement::basis(&ctx, 1).unwrap();
        let em = StarElement::basis(&ctx, 3).unwrap();
        let prod = ep.star(&em).unwrap();
        assert_eq!(prod.support(), &[4]);
        assert_eq!(prod.coeff(4), CycScalar::zeta_pow(3, 3, 2));
    }

    #[test]
    fn json_roundtrip() {
        let ctx = plane(5);
        let x = StarElement::from_exponents(&ctx, CycScalar::from_int(5, 5, 3), [(1, 2), (7, 0), (7, 1)]).unwrap();
        let back = StarElement::from_json(&x.to_json()).unwrap();
        assert_eq!(back.to_json(), x.to_json());
        assert!(back.ctx().same_space(&ctx));
        assert_eq!(back, StarElement { ctx: back.ctx.clone(), ..x.clone() });
    }

    #[test]
    fn addition_with_different_scales() {
        let ctx = plane(3);
        let half = CycScalar::from_rational(3, 3, BigRational::new(1.into(), 2.into()));
        let x = StarElement::basis(&ctx, 1).unwrap().scaled(&half);
        let y = StarElement::basis(&ctx, 1).unwrap().scaled(&CycScalar::from_rational(3, 3, BigRational::new(1.into(), 3.into())));
        let s = x.add(&y).unwrap();
        assert_eq!(s.coeff(1), CycScalar::from_rational(3, 3, BigRational::new(5.into(), 6.into())));
        assert!(x.sub(&x).unwrap().is_zero());
    }
}
