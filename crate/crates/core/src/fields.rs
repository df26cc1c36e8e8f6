//! Finite fields `F_q = F_p[x]/(f)` for odd `q = p^ell`.
//!
//! Elements are stored as their canonical integer encoding: the coefficients
//! `c_0, …, c_{ell-1}` of the power basis packed base `p`, so `c_0 + c_1 p + …`.
//! The encoding is stable across runs because the modulus is always the
//! smallest monic irreducible polynomial (compared by the same packing).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order for which full addition/multiplication tables are built.
const TABLE_LIMIT: u32 = 1024;
/// Largest field order accepted at all.
const ORDER_LIMIT: u64 = 1 << 20;

/// An element of `F_q`, identified with its canonical encoding in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    /// Canonical integer encoding.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({})", self.0)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

/// Field context. Immutable after construction; share it through an `Arc`.
pub struct FieldCtx {
    p: u32,
    ell: u32,
    q: u32,
    /// Monic modulus, coefficients low to high, length `ell + 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
    norm: Vec<u32>,
    quad: Vec<i8>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("ell", &self.ell)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ell == other.ell && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds `F_{p^ell}` with the lexicographically smallest monic irreducible modulus.
pub fn make_field(p: u64, ell: u32) -> Result<Arc<FieldCtx>> {
    FieldCtx::new(p, ell).map(Arc::new)
}

/// `F_q` for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<Arc<FieldCtx>> {
    let p = (2..=q).find(|d| q % d == 0).ok_or(Error::NonPrime(q))?;
    let mut rest = q;
    let mut ell = 0;
    while rest % p == 0 {
        rest /= p;
        ell += 1;
    }
    if rest != 1 {
        return Err(Error::Invalid(format!("{q} is not a prime power")));
    }
    make_field(p, ell)
}

// ---- polynomial helpers over F_p (coefficient vectors, low to high) ----

fn poly_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let dm = m.len() - 1;
    let p64 = p as u64;
    while r.len() > dm {
        let lead = r.pop().unwrap() % p64;
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dm;
        for (i, &mc) in m[..dm].iter().enumerate() {
            let sub = lead * mc as u64 % p64;
            r[shift + i] = (r[shift + i] + p64 - sub) % p64;
        }
    }
    let mut out: Vec<u32> = r.into_iter().map(|x| (x % p64) as u32).collect();
    if out.is_empty() {
        out.push(0);
    }
    out
}

fn monic_of_degree(deg: usize, index: u64, p: u32) -> Vec<u32> {
    let mut c = Vec::with_capacity(deg + 1);
    let mut x = index;
    for _ in 0..deg {
        c.push((x % p as u64) as u32);
        x /= p as u64;
    }
    c.push(1);
    c
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let g = monic_of_degree(d, idx, p);
            let mut r = poly_rem_monic(f, &g, p);
            poly_trim(&mut r);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    fn new(p: u64, ell: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if ell == 0 {
            return Err(Error::OutOfRange("extension degree must be at least 1".into()));
        }
        let q64 = p
            .checked_pow(ell)
            .filter(|&q| q <= ORDER_LIMIT)
            .ok_or_else(|| Error::SizeLimit(format!("field order {p}^{ell} is too large")))?;
        let p = p as u32;
        let q = q64 as u32;
        let modulus = if ell == 1 {
            vec![0, 1]
        } else {
            let count = (p as u64).pow(ell);
            (0..count)
                .map(|i| monic_of_degree(ell as usize, i, p))
                .find(|f| is_irreducible(f, p))
                .expect("irreducible polynomials exist in every degree")
        };
        let mut ctx = FieldCtx {
            p,
            ell,
            q,
            modulus,
            tables: None,
            neg: Vec::new(),
            inv: Vec::new(),
            trace: Vec::new(),
            norm: Vec::new(),
            quad: Vec::new(),
        };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = ctx.add_slow(a, b);
                    mul[(a * q + b) as usize] = ctx.mul_slow(a, b);
                }
            }
            ctx.tables = Some(Tables { add, mul });
        }
        ctx.neg = (0..q).map(|a| ctx.neg_slow(a)).collect();
        ctx.inv = (0..q)
            .map(|a| if a == 0 { 0 } else { ctx.pow_raw(a, q as u64 - 2) })
            .collect();
        ctx.trace = (0..q).map(|a| ctx.trace_slow(a)).collect();
        let norm_exp = (q as u64 - 1) / (p as u64 - 1);
        ctx.norm = (0..q).map(|a| ctx.pow_raw(a, norm_exp)).collect();
        let half = (q as u64 - 1) / 2;
        ctx.quad = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else if ctx.pow_raw(a, half) == 1 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, coefficients from the constant term upwards.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    /// Element with the given canonical encoding.
    pub fn elem(&self, index: u32) -> Result<FqElem> {
        if index < self.q {
            Ok(FqElem(index))
        } else {
            Err(Error::OutOfRange(format!("{index} is not an element of F_{}", self.q)))
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    /// Nonzero elements in encoding order.
    pub fn units(&self) -> impl Iterator<Item = FqElem> {
        (1..self.q).map(FqElem)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem> {
        if coeffs.len() > self.ell as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::OutOfRange(format!("{coeffs:?} is not a coefficient vector")));
        }
        Ok(FqElem(self.pack(coeffs)))
    }

    /// Coefficients in the power basis, length `ell`.
    pub fn coeffs(&self, a: FqElem) -> Vec<u32> {
        self.unpack(a.0)
    }

    fn pack(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn unpack(&self, mut x: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.ell as usize);
        for _ in 0..self.ell {
            c.push(x % self.p);
            x /= self.p;
        }
        c
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (ca, cb) = (self.unpack(a), self.unpack(b));
        let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.pack(&s)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let c: Vec<u32> = self.unpack(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.pack(&c)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (ca, cb) = (self.unpack(a), self.unpack(b));
        let mut prod = vec![0u32; 2 * self.ell as usize - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let mut r = poly_rem_monic(&prod, &self.modulus, self.p);
        r.resize(self.ell as usize, 0);
        self.pack(&r)
    }

    fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(FqElem(acc), FqElem(base)).0;
            }
            base = self.mul(FqElem(base), FqElem(base)).0;
            e >>= 1;
        }
        acc
    }

    fn trace_slow(&self, a: u32) -> u32 {
        // a + a^p + ... + a^{p^{ell-1}} lies in the prime field.
        let mut acc = 0u32;
        let mut x = a;
        for _ in 0..self.ell {
            acc = self.add(FqElem(acc), FqElem(x)).0;
            x = self.pow_raw(x, self.p as u64);
        }
        debug_assert!(acc < self.p);
        acc
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => FqElem(t.add[(a.0 * self.q + b.0) as usize]),
            None => FqElem(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => FqElem(t.mul[(a.0 * self.q + b.0) as usize]),
            None => FqElem(self.mul_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FqElem(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        FqElem(self.pow_raw(a.0, e))
    }

    /// `a / 2`; always defined since `q` is odd.
    pub fn half(&self, a: FqElem) -> FqElem {
        let two_inv = FqElem(self.inv[self.from_int(2).0 as usize]);
        self.mul(a, two_inv)
    }

    /// `Tr_{F_q/F_p}(a)` as a residue in `[0, p)`.
    #[inline]
    pub fn trace_to_prime(&self, a: FqElem) -> u32 {
        self.trace[a.0 as usize]
    }

    /// `N_{F_q/F_p}(a)` as a residue in `[0, p)`.
    pub fn norm_to_prime(&self, a: FqElem) -> u32 {
        self.norm[a.0 as usize]
    }

    /// Quadratic character `ε_q`, extended by `ε_q(0) = 0`.
    #[inline]
    pub fn quad_char(&self, a: FqElem) -> i8 {
        self.quad[a.0 as usize]
    }

    /// Quadratic character of the prime field applied to a residue.
    pub fn quad_char_prime(&self, r: u32) -> i8 {
        let r = r % self.p;
        if r == 0 {
            return 0;
        }
        let mut acc = 1u64;
        let mut base = r as u64;
        let mut e = (self.p as u64 - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            e >>= 1;
        }
        if acc == 1 {
            1
        } else {
            -1
        }
    }

    /// Smallest nonsquare in encoding order.
    pub fn nonsquare(&self) -> FqElem {
        self.units()
            .find(|&a| self.quad_char(a) == -1)
            .expect("odd-order fields have nonsquares")
    }

    /// A generator of the multiplicative group (smallest by encoding).
    pub fn primitive_element(&self) -> FqElem {
        let order = self.q as u64 - 1;
        let mut factors = Vec::new();
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        self.units()
            .find(|&g| factors.iter().all(|&f| self.pow(g, order / f) != self.one()))
            .expect("multiplicative group is cyclic")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<Arc<FieldCtx>> {
        [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (3, 4)]
            .iter()
            .map(|&(p, l)| make_field(p, l).unwrap())
            .collect()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NonPrime(4));
        assert_eq!(make_field(2, 3).unwrap_err(), Error::EvenCharacteristic);
        assert!(make_field(3, 0).is_err());
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        // exhaustive root search: x^2+1 has no root mod 3, and no smaller monic quadratic is irreducible
        for c0 in 0..3u32 {
            let has_root = (0..3u32).any(|x| (x * x + c0) % 3 == 0);
            if c0 == 0 {
                assert!(has_root);
            }
        }
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let f25 = make_field(5, 2).unwrap();
        assert_eq!(f25.modulus(), &[2, 0, 1]);
    }

    #[test]
    fn encoding_roundtrip() {
        for f in all_fields() {
            for a in f.elements() {
                let c = f.coeffs(a);
                assert_eq!(c.len(), f.ell() as usize);
                assert_eq!(f.from_coeffs(&c).unwrap(), a);
            }
        }
    }

    #[test]
    fn exhaustive_inverses() {
        for f in all_fields().into_iter().filter(|f| f.q() <= 81) {
            for a in f.units() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            assert_eq!(f.inv(f.zero()), Err(Error::DivisionByZero));
        }
    }

    #[test]
    fn trace_is_prime_valued_and_linear() {
        for f in all_fields().into_iter().filter(|f| f.q() <= 81) {
            for a in f.elements() {
                assert!(f.trace_to_prime(a) < f.p());
                for b in f.elements() {
                    let lhs = f.trace_to_prime(f.add(a, b));
                    let rhs = (f.trace_to_prime(a) + f.trace_to_prime(b)) % f.p();
                    assert_eq!(lhs, rhs);
                }
                // F_p-homogeneity
                for c in 0..f.p() {
                    let ca = f.mul(f.from_int(c as i64), a);
                    assert_eq!(f.trace_to_prime(ca), c * f.trace_to_prime(a) % f.p());
                }
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.trace_to_prime(FqElem(2)), 2);
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.trace_to_prime(f9.one()), 2);
    }

    #[test]
    fn quad_char_examples() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.quad_char(FqElem(1)), 1);
        assert_eq!(f3.quad_char(FqElem(2)), -1);
        assert_eq!(f3.quad_char(FqElem(0)), 0);
        let f9 = make_field(3, 2).unwrap();
        let g = f9.primitive_element();
        assert_eq!(f9.quad_char(g), -1);
    }

    #[test]
    fn quad_char_is_multiplicative_and_factors_through_norm() {
        for f in all_fields().into_iter().filter(|f| f.q() <= 81) {
            // squares computed independently
            let squares: std::collections::HashSet<FqElem> =
                f.units().map(|x| f.mul(x, x)).collect();
            for a in f.units() {
                let expect = if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(f.quad_char(a), expect);
                assert_eq!(f.quad_char_prime(f.norm_to_prime(a)), f.quad_char(a));
                for b in f.units() {
                    assert_eq!(f.quad_char(f.mul(a, b)), f.quad_char(a) * f.quad_char(b));
                }
            }
        }
    }

    #[test]
    fn half_examples() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.half(FqElem(1)), FqElem(2));
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.half(FqElem(1)), FqElem(3));
        assert_eq!(f5.half(FqElem(0)), FqElem(0));
    }

    #[test]
    fn untabled_field_agrees_with_polynomial_arithmetic() {
        // q = 2187 > TABLE_LIMIT exercises the slow path
        let f = make_field(3, 7).unwrap();
        assert!(f.tables.is_none());
        let a = FqElem(1234);
        let b = FqElem(777);
        let ab = f.mul(a, b);
        assert_eq!(f.mul(ab, f.inv(b).unwrap()), a);
        assert_eq!(f.sub(f.add(a, b), b), a);
    }
}
