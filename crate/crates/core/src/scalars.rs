//! Exact scalars: the cyclotomic field `Q(ζ_p)` extended by a formal square
//! root `s` of `q`, i.e. the quadratic algebra `Q(ζ_p)[s]/(s² − q)`.
//!
//! Two types live here. [`CycScalar`] is the canonical, arbitrary precision
//! scalar. [`CycInt`] is a machine-integer element of `Z[ζ_p]` kept modulo
//! `x^p − 1` (not yet reduced by the cyclotomic polynomial); it is the
//! coefficient type of star elements and model operators, where millions of
//! additions of roots of unity must stay cheap.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fields::{FieldCtx, FqElem};

// ---------------------------------------------------------------------------
// CycInt
// ---------------------------------------------------------------------------

/// Element of `Z[ζ_p]` as `Σ c_k ζ^k`, `k < p`, representative modulo `x^p − 1`.
#[derive(Clone, Debug)]
pub struct CycInt {
    pub(crate) c: Vec<i64>,
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        CycInt { c: vec![0; p as usize] }
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        let mut z = Self::zero(p);
        z.c[0] = n;
        z
    }

    /// `coef · ζ^k`.
    pub fn monomial(p: u32, k: u32, coef: i64) -> Self {
        let mut z = Self::zero(p);
        z.c[(k % p) as usize] = coef;
        z
    }

    pub fn from_coeffs(c: Vec<i64>) -> Self {
        assert!(c.len() >= 2, "cyclotomic order must be at least 2");
        CycInt { c }
    }

    pub fn p(&self) -> u32 {
        self.c.len() as u32
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    /// Zero in `Z[ζ_p]` means all coefficients equal (`1 + ζ + … + ζ^{p−1} = 0`).
    pub fn is_zero(&self) -> bool {
        is_zero_slice(&self.c)
    }

    /// Coordinates in the basis `1, ζ, …, ζ^{p−2}`.
    pub fn canonical(&self) -> Vec<i64> {
        canonical_slice(&self.c)
    }

    pub fn mul(&self, other: &CycInt) -> CycInt {
        let p = self.c.len();
        assert_eq!(p, other.c.len(), "mismatched cyclotomic orders");
        let mut out = vec![0i64; p];
        conv_acc(&mut out, &self.c, &other.c, 0);
        CycInt { c: out }
    }

    pub fn scale(&self, n: i64) -> CycInt {
        CycInt { c: self.c.iter().map(|x| x * n).collect() }
    }

    pub fn to_scalar(&self, q: u64) -> CycScalar {
        CycScalar::from_cycint(self, q)
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        self.c.len() == other.c.len()
            && self.c.iter().zip(&other.c).map(|(a, b)| a - b).collect::<Vec<_>>().windows(2).all(|w| w[0] == w[1])
    }
}

impl Eq for CycInt {}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        CycInt { c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        CycInt { c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect() }
    }
}

pub(crate) fn is_zero_slice(c: &[i64]) -> bool {
    c.windows(2).all(|w| w[0] == w[1])
}

pub(crate) fn canonical_slice(c: &[i64]) -> Vec<i64> {
    let top = c[c.len() - 1];
    c[..c.len() - 1].iter().map(|x| x - top).collect()
}

/// `out += a ⊛ b · ζ^shift` (cyclic convolution modulo `x^p − 1`).
#[inline]
pub(crate) fn conv_acc(out: &mut [i64], a: &[i64], b: &[i64], shift: usize) {
    let p = out.len();
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                let mut k = i + j + shift;
                while k >= p {
                    k -= p;
                }
                out[k] += x * y;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// CycScalar
// ---------------------------------------------------------------------------

/// Exact element `base + root·s` of `Q(ζ_p)[s]/(s² − q)`.
///
/// Both parts are coordinate vectors of length `p − 1` in the basis
/// `1, ζ, …, ζ^{p−2}`; every operation returns the canonical form, so derived
/// equality is exact equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycScalar {
    p: u32,
    q: u64,
    base: Vec<BigRational>,
    root: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Multiply two canonical coordinate vectors of `Q(ζ_p)`.
fn cyc_mul(p: usize, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut full = vec![BigRational::zero(); p];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let k = (i + j) % p;
            full[k] += x * y;
        }
    }
    reduce_full(full)
}

/// Reduce a length-`p` vector (mod `x^p − 1`) to canonical length `p − 1`.
fn reduce_full(mut full: Vec<BigRational>) -> Vec<BigRational> {
    let top = full.pop().unwrap();
    if !top.is_zero() {
        for x in full.iter_mut() {
            *x -= &top;
        }
    }
    full
}

fn vec_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vec_scale(a: &[BigRational], r: &BigRational) -> Vec<BigRational> {
    a.iter().map(|x| x * r).collect()
}

fn vec_is_zero(a: &[BigRational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Apply the Galois automorphism `ζ ↦ ζ^k` to a canonical vector.
fn vec_galois(p: usize, a: &[BigRational], k: usize) -> Vec<BigRational> {
    let mut full = vec![BigRational::zero(); p];
    for (i, x) in a.iter().enumerate() {
        full[(i * k) % p] += x;
    }
    reduce_full(full)
}

/// Inverse in the field `Q(ζ_p)` via the product of the nontrivial conjugates.
fn field_inv(p: usize, a: &[BigRational]) -> Result<Vec<BigRational>> {
    if vec_is_zero(a) {
        return Err(Error::DivisionByZero);
    }
    let mut conj_prod = {
        let mut one = vec![BigRational::zero(); p - 1];
        one[0] = BigRational::one();
        one
    };
    for k in 2..p {
        conj_prod = cyc_mul(p, &conj_prod, &vec_galois(p, a, k));
    }
    let norm = cyc_mul(p, &conj_prod, a);
    // the norm is rational
    debug_assert!(norm[1..].iter().all(Zero::is_zero));
    let n = norm[0].clone();
    Ok(vec_scale(&conj_prod, &n.recip()))
}

impl CycScalar {
    pub fn zero(p: u32, q: u64) -> Self {
        let n = p as usize - 1;
        CycScalar { p, q, base: vec![BigRational::zero(); n], root: vec![BigRational::zero(); n] }
    }

    pub fn one(p: u32, q: u64) -> Self {
        Self::from_rational(p, q, BigRational::one())
    }

    pub fn from_int(p: u32, q: u64, n: i64) -> Self {
        Self::from_rational(p, q, rat(n))
    }

    pub fn from_rational(p: u32, q: u64, r: BigRational) -> Self {
        let mut z = Self::zero(p, q);
        z.base[0] = r;
        z
    }

    /// `ζ^k`.
    pub fn zeta_pow(p: u32, q: u64, k: u32) -> Self {
        let mut full = vec![BigRational::zero(); p as usize];
        full[(k % p) as usize] = BigRational::one();
        CycScalar { p, q, base: reduce_full(full), root: vec![BigRational::zero(); p as usize - 1] }
    }

    /// The formal square root `s` of `q`.
    pub fn sqrt_q(p: u32, q: u64) -> Self {
        let mut z = Self::zero(p, q);
        z.root[0] = BigRational::one();
        z
    }

    /// Scalars attached to a field: `p` and `q` taken from the context.
    pub fn zero_for(ctx: &FieldCtx) -> Self {
        Self::zero(ctx.p(), ctx.q() as u64)
    }

    pub fn one_for(ctx: &FieldCtx) -> Self {
        Self::one(ctx.p(), ctx.q() as u64)
    }

    pub fn from_cycint(c: &CycInt, q: u64) -> Self {
        let p = c.p();
        let full: Vec<BigRational> = c.c.iter().map(|&x| rat(x)).collect();
        CycScalar { p, q, base: reduce_full(full), root: vec![BigRational::zero(); p as usize - 1] }
    }

    /// Build from canonical coordinates.
    pub fn from_parts(p: u32, q: u64, base: Vec<BigRational>, root: Vec<BigRational>) -> Result<Self> {
        let n = p as usize - 1;
        if base.len() != n || root.len() != n {
            return Err(Error::Invalid(format!("expected {n} coordinates per part")));
        }
        Ok(CycScalar { p, q, base, root })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn base(&self) -> &[BigRational] {
        &self.base
    }

    pub fn root_part(&self) -> &[BigRational] {
        &self.root
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.base) && vec_is_zero(&self.root)
    }

    /// True when the element lies in `Q(ζ_p)` (no `s` component).
    pub fn is_base(&self) -> bool {
        vec_is_zero(&self.root)
    }

    /// Rational value if the element is a rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.is_base() && self.base[1..].iter().all(Zero::is_zero)).then(|| self.base[0].clone())
    }

    fn check(&self, other: &Self) {
        assert!(
            self.p == other.p && self.q == other.q,
            "scalars from different algebras: (p={}, q={}) vs (p={}, q={})",
            self.p,
            self.q,
            other.p,
            other.q
        );
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        CycScalar { p: self.p, q: self.q, base: vec_scale(&self.base, r), root: vec_scale(&self.root, r) }
    }

    /// Multiply by `q^{-k}`.
    pub fn div_by_power_of_q(&self, k: u32) -> Self {
        let d = BigRational::from_integer(BigInt::from(self.q).pow(k));
        self.scale_rational(&d.recip())
    }

    /// Complex conjugation: `ζ ↦ ζ^{-1}`, `s ↦ s`.
    pub fn conj(&self) -> Self {
        self.galois(self.p - 1)
    }

    /// Galois action `ζ ↦ ζ^k` on both parts (`s` fixed).
    pub fn galois(&self, k: u32) -> Self {
        let p = self.p as usize;
        let k = (k % self.p) as usize;
        assert!(k != 0, "ζ ↦ 1 is not an automorphism");
        CycScalar { p: self.p, q: self.q, base: vec_galois(p, &self.base, k), root: vec_galois(p, &self.root, k) }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p as usize;
        if self.is_base() {
            return Ok(CycScalar { p: self.p, q: self.q, base: field_inv(p, &self.base)?, root: self.root.clone() });
        }
        // (b + c s)^{-1} = (b − c s) / (b² − q c²)
        let qr = rat(self.q as i64);
        let b2 = cyc_mul(p, &self.base, &self.base);
        let c2 = cyc_mul(p, &self.root, &self.root);
        let d = vec_sub(&b2, &vec_scale(&c2, &qr));
        if vec_is_zero(&d) {
            return Err(Error::NonInvertible);
        }
        let di = field_inv(p, &d)?;
        let base = cyc_mul(p, &self.base, &di);
        let root = cyc_mul(p, &self.root, &di).into_iter().map(|x| -x).collect();
        Ok(CycScalar { p: self.p, q: self.q, base, root })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.p, self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `s^k` for any integer `k` (`s^{-1} = s/q`).
    pub fn sqrt_q_pow(p: u32, q: u64, k: i64) -> Self {
        let half = BigRational::from_integer(BigInt::from(q).pow((k.unsigned_abs() / 2) as u32));
        let rational = if k >= 0 { half } else { half.recip() };
        let mut z = Self::zero(p, q);
        if k.rem_euclid(2) == 0 {
            z.base[0] = rational;
        } else if k > 0 {
            z.root[0] = rational;
        } else {
            // s^{-(2j+1)} = s / q^{j+1}
            z.root[0] = rational / BigRational::from_integer(BigInt::from(q));
        }
        z
    }

    /// Multiply by a `Z[ζ_p]` element.
    pub fn mul_cycint(&self, c: &CycInt) -> Self {
        self * &CycScalar::from_cycint(c, self.q)
    }

    /// Clear denominators: returns `(d, base·d, root·d)` with integer
    /// coordinates and `d > 0` minimal.
    pub fn clear_denominators(&self) -> (BigInt, Vec<BigInt>, Vec<BigInt>) {
        let d = self
            .base
            .iter()
            .chain(&self.root)
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let dr = BigRational::from_integer(d.clone());
        let to_int = |v: &[BigRational]| v.iter().map(|x| (x * &dr).to_integer()).collect();
        (d.clone(), to_int(&self.base), to_int(&self.root))
    }

    /// Floating-point value of the base part at `ζ = e^{2πi/p}`, `s = √q`.
    /// Debug aid only.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        let sq = (self.q as f64).sqrt();
        for (part, factor) in [(&self.base, 1.0), (&self.root, sq)] {
            for (k, x) in part.iter().enumerate() {
                let v = x.to_f64().unwrap_or(f64::NAN) * factor;
                let ang = 2.0 * std::f64::consts::PI * k as f64 / self.p as f64;
                re += v * ang.cos();
                im += v * ang.sin();
            }
        }
        (re, im)
    }
}

impl Add for &CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        self.check(rhs);
        CycScalar { p: self.p, q: self.q, base: vec_add(&self.base, &rhs.base), root: vec_add(&self.root, &rhs.root) }
    }
}

impl Sub for &CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        self.check(rhs);
        CycScalar { p: self.p, q: self.q, base: vec_sub(&self.base, &rhs.base), root: vec_sub(&self.root, &rhs.root) }
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            p: self.p,
            q: self.q,
            base: self.base.iter().map(|x| -x).collect(),
            root: self.root.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        self.check(rhs);
        let p = self.p as usize;
        let qr = rat(self.q as i64);
        // (a + b s)(c + d s) = (ac + q bd) + (ad + bc) s
        let ac = cyc_mul(p, &self.base, &rhs.base);
        let base = if vec_is_zero(&self.root) || vec_is_zero(&rhs.root) {
            ac
        } else {
            vec_add(&ac, &vec_scale(&cyc_mul(p, &self.root, &rhs.root), &qr))
        };
        let root = vec_add(&cyc_mul(p, &self.base, &rhs.root), &cyc_mul(p, &self.root, &rhs.base));
        CycScalar { p: self.p, q: self.q, base, root }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

fn render_part(v: &[BigRational]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| match k {
            0 => x.to_string(),
            1 => format!("{x}*z"),
            _ => format!("{x}*z^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Canonical rendering `a0 + a1*z + a2*z^2 [+ (b0 + b1*z)*s]`; zero
/// coordinates are omitted, `0` is rendered as `0`.
impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base_zero = vec_is_zero(&self.base);
        let root_zero = vec_is_zero(&self.root);
        match (base_zero, root_zero) {
            (_, true) => write!(f, "{}", render_part(&self.base)),
            (true, false) => write!(f, "({})*s", render_part(&self.root)),
            (false, false) => write!(f, "{} + ({})*s", render_part(&self.base), render_part(&self.root)),
        }
    }
}

/// Parser for the canonical rendering; needs `p` and `q` from context.
pub fn parse_scalar(p: u32, q: u64, text: &str) -> Result<CycScalar> {
    let err = |m: &str| Error::Parse(format!("{m} in scalar {text:?}"));
    let text = text.trim();
    let (base_txt, root_txt) = match text.find('(') {
        Some(open) => {
            let close = text.rfind(")*s").ok_or_else(|| err("unterminated root part"))?;
            if close + 3 != text.len() {
                return Err(err("trailing characters"));
            }
            let before = text[..open].trim_end();
            let before = before.strip_suffix('+').map(str::trim_end).unwrap_or(before);
            (before, Some(&text[open + 1..close]))
        }
        None => (text, None),
    };
    let parse_part = |t: &str| -> Result<Vec<BigRational>> {
        let mut v = vec![BigRational::zero(); p as usize - 1];
        let t = t.trim();
        if t.is_empty() || t == "0" {
            return Ok(v);
        }
        for term in t.split(" + ") {
            let term = term.trim();
            let (coef, k) = match term.split_once("*z") {
                None => (term, 0usize),
                Some((c, rest)) => {
                    let k = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse().ok())
                            .ok_or_else(|| err("bad exponent"))?
                    };
                    (c, k)
                }
            };
            if k >= p as usize - 1 {
                return Err(err("exponent out of canonical range"));
            }
            let c = BigRational::from_str(coef).map_err(|_| err("bad coefficient"))?;
            v[k] += c;
        }
        Ok(v)
    };
    let base = if base_txt.is_empty() { vec![BigRational::zero(); p as usize - 1] } else { parse_part(base_txt)? };
    let root = match root_txt {
        Some(t) => parse_part(t)?,
        None => vec![BigRational::zero(); p as usize - 1],
    };
    CycScalar::from_parts(p, q, base, root)
}

/// `ψ_a(x) = ζ^{Tr(a·x)}`.
pub fn psi(ctx: &FieldCtx, a: FqElem, x: FqElem) -> Result<CycScalar> {
    if a.is_zero() {
        return Err(Error::TrivialCharacter);
    }
    Ok(CycScalar::zeta_pow(ctx.p(), ctx.q() as u64, ctx.trace_to_prime(ctx.mul(a, x))))
}

/// Exponent `k` with `ψ_a(x) = ζ^k`.
#[inline]
pub fn psi_exp(ctx: &FieldCtx, a: FqElem, x: FqElem) -> u32 {
    ctx.trace_to_prime(ctx.mul(a, x))
}

/// Quadratic Gauss sum `Σ_x ψ(c·x²)` by direct summation, as an element of `Z[ζ_p]`.
pub fn gauss_sum_int(ctx: &FieldCtx, c: FqElem) -> CycInt {
    let mut acc = CycInt::zero(ctx.p());
    for x in ctx.elements() {
        let e = psi_exp(ctx, ctx.one(), ctx.mul(c, ctx.mul(x, x)));
        acc.c[e as usize] += 1;
    }
    acc
}

/// Quadratic Gauss sum `Σ_x ψ(c·x²)`.
pub fn gauss_sum(ctx: &FieldCtx, c: FqElem) -> CycScalar {
    gauss_sum_int(ctx, c).to_scalar(ctx.q() as u64)
}

impl CycScalar {
    /// Rational part of an integer, used in tests and reports.
    pub fn is_integer(&self) -> bool {
        self.as_rational().map(|r| r.is_integer()).unwrap_or(false)
    }

    /// The element as a `Z[ζ_p]` value, if it has no `s` part and integral coordinates.
    pub fn to_cycint(&self) -> Option<CycInt> {
        if !self.is_base() {
            return None;
        }
        let mut c = Vec::with_capacity(self.p as usize);
        for x in &self.base {
            if !x.is_integer() {
                return None;
            }
            c.push(x.to_integer().to_i64()?);
        }
        c.push(0);
        Some(CycInt { c })
    }

    /// Absolute value of the rational content, for diagnostics.
    pub fn max_abs_coeff(&self) -> BigRational {
        self.base
            .iter()
            .chain(&self.root)
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// `base` and `root` of a scalar with denominators cleared: `(d, base·d, root·d)`
/// as length-`p` vectors of `i128`, if everything fits comfortably.
fn cleared_i128(s: &CycScalar) -> Option<(i128, Vec<i128>, Vec<i128>)> {
    let (d, b, r) = s.clear_denominators();
    let small = |x: &BigInt| x.to_i128().filter(|v| v.unsigned_abs() < 1 << 60);
    let conv = |v: &[BigInt]| -> Option<Vec<i128>> {
        let mut out: Vec<i128> = v.iter().map(small).collect::<Option<_>>()?;
        out.push(0);
        Some(out)
    };
    Some((small(&d)?, conv(&b)?, conv(&r)?))
}

fn conv_i128(s: &[i128], x: &[i64]) -> Vec<i128> {
    let p = x.len();
    let mut out = vec![0i128; p];
    for (i, &a) in s.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in x.iter().enumerate() {
            if b != 0 {
                out[(i + j) % p] += a * b as i128;
            }
        }
    }
    out
}

/// Exact test of `sa·a_i = sb·b_i` for aligned blocks of length `p` holding
/// `Z[ζ_p]` elements.
pub(crate) fn scaled_blocks_equal(p: usize, sa: &CycScalar, a: &[i64], sb: &CycScalar, b: &[i64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if sa == sb {
        return a.chunks(p).zip(b.chunks(p)).all(|(x, y)| {
            let d = x[0] - y[0];
            x.iter().zip(y).all(|(u, v)| u - v == d)
        });
    }
    match (cleared_i128(sa), cleared_i128(sb)) {
        (Some((da, a0, a1)), Some((db, b0, b1))) => a.chunks(p).zip(b.chunks(p)).all(|(x, y)| {
            [(&a0, &b0), (&a1, &b1)].iter().all(|(sx, sy)| {
                let l = conv_i128(sx, x);
                let r = conv_i128(sy, y);
                let d0 = l[0] * db - r[0] * da;
                l.iter().zip(&r).all(|(u, v)| u * db - v * da == d0)
            })
        }),
        _ => a.chunks(p).zip(b.chunks(p)).all(|(x, y)| {
            let q = sa.q();
            sa.mul_cycint(&CycInt { c: x.to_vec() }) == sb.mul_cycint(&CycInt { c: y.to_vec() }) && sb.q() == q
        }),
    }
}
