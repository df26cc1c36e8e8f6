//! Distinguished ⋆-elements: reflections `f_λ`, isotropic idempotents, the
//! `SL₂` generators `g_t, α_t, β, γ_s`, and the Gauss constants `K(c)`.
//!
//! Every normalized generator has a `*_raw` companion: the same sum with
//! coefficient scale 1. Identities are checked primarily in that
//! cleared-denominator form, where both sides live in `Z[ζ_p]`.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::FqElem;
use crate::linalg;
use crate::scalars::{gauss_sum, CycInt, CycScalar};
use crate::star::{oscillator_dilation, sl2_action, ModelOperator, StarContext, StarElement};

/// `K(c) = Σ_{u∈W} ψ_a(c·B(u,u))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussConstant {
    pub c: FqElem,
    pub value: CycInt,
}

impl GaussConstant {
    pub fn scalar(&self, q: u64) -> CycScalar {
        self.value.to_scalar(q)
    }
}

fn psi_exp(ctx: &StarContext, x: FqElem) -> u32 {
    let f = ctx.field();
    f.trace_to_prime(f.mul(ctx.char_param(), x))
}

fn w_vectors(ctx: &StarContext) -> Vec<Vec<FqElem>> {
    let f = ctx.field();
    let q = f.q() as u64;
    (0..q.pow(ctx.n() as u32)).map(|u| linalg::decode(f, u, ctx.n())).collect()
}

fn require_plane(ctx: &StarContext) -> Result<()> {
    if ctx.half() != 1 {
        return Err(Error::Invalid("SL2 generators are defined for dim V = 2".into()));
    }
    Ok(())
}

fn q_of(ctx: &StarContext) -> u64 {
    ctx.field().q() as u64
}

/// Direct summation of `K(c)`.
pub fn k_constant(ctx: &StarContext, c: FqElem) -> GaussConstant {
    let p = ctx.field().p();
    let mut acc = CycInt::zero(p);
    for u in w_vectors(ctx) {
        let e = psi_exp(ctx, ctx.field().mul(c, ctx.form().quad(&u)));
        acc.c[e as usize] += 1;
    }
    GaussConstant { c, value: acc }
}

/// `ε_q(a·c)^n · disc(B) · G(1)^n` for `c ≠ 0`, and `q^n` for `c = 0`,
/// where `G(1) = Σ_x ψ(x²)`.
pub fn k_closed_form(ctx: &StarContext, c: FqElem) -> CycScalar {
    let f = ctx.field();
    let n = ctx.n() as i64;
    let q = q_of(ctx);
    if c.is_zero() {
        return CycScalar::from_int(f.p(), q, q.pow(n as u32) as i64);
    }
    let sign = (f.quad_char(f.mul(ctx.char_param(), c)) as i64).pow(n as u32) * ctx.form().disc() as i64;
    let g = gauss_sum(f, f.one());
    &CycScalar::from_int(f.p(), q, sign) * &g.pow(n).expect("nonnegative power")
}

/// Encodes `(v ⊗ λ)` for `v ∈ F_q^{2N}`: row `i` of the matrix is `v_i·λ`.
fn tensor_index(ctx: &StarContext, v: &[FqElem], lambda: &[FqElem]) -> u64 {
    let f = ctx.field();
    let mut m = Vec::with_capacity(ctx.dim());
    for &vi in v {
        for &l in lambda {
            m.push(f.mul(vi, l));
        }
    }
    linalg::encode(f, &m)
}

/// `f_λ = Σ_{v∈V} v⊗λ`.
pub fn f_lambda(ctx: &Arc<StarContext>, lambda: &[FqElem]) -> Result<StarElement> {
    let f = ctx.field();
    if lambda.len() != ctx.n() {
        return Err(Error::Invalid(format!("λ must have {} entries", ctx.n())));
    }
    if lambda.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let vdim = 2 * ctx.half();
    let total = (f.q() as u64).pow(vdim as u32);
    let terms = (0..total).map(|i| (tensor_index(ctx, &linalg::decode(f, i, vdim), lambda), 0u32));
    StarElement::from_exponents(ctx, CycScalar::one_for(f), terms)
}

/// The geometric reflection across `λ^⊥` on `Λ₋ ⊗ W`: every row `u_i ↦ r_λ(u_i)`.
pub fn reflection_operator(ctx: &StarContext, lambda: &[FqElem]) -> Result<ModelOperator> {
    let f = ctx.field();
    let n = ctx.n();
    let md = ctx.model_dim();
    let mut images = Vec::with_capacity(md as usize);
    for x in 0..md {
        let rows = linalg::decode(f, x, ctx.half() * n);
        let mut out = Vec::with_capacity(rows.len());
        for r in rows.chunks(n) {
            out.extend(ctx.form().reflect(lambda, r)?);
        }
        images.push(linalg::encode(f, &out) as usize);
    }
    Ok(ModelOperator::permutation(f.p(), q_of(ctx), &images))
}

fn q_power(ctx: &StarContext, k: i64) -> CycScalar {
    CycScalar::sqrt_q_pow(ctx.field().p(), q_of(ctx), 2 * k)
}

/// `f_λ / q^N` (a reflection for anisotropic `λ`).
pub fn reflection_element(ctx: &Arc<StarContext>, lambda: &[FqElem]) -> Result<StarElement> {
    if ctx.form().quad(lambda).is_zero() {
        return Err(Error::IsotropicInput);
    }
    Ok(f_lambda(ctx, lambda)?.scaled(&q_power(ctx, -(ctx.half() as i64))))
}

/// `(f_{λ₁} ⋆ … ⋆ f_{λ_k}) / q^{2Nk}` for independent `λ_i` spanning an isotropic subspace.
pub fn isotropic_idempotent(ctx: &Arc<StarContext>, lambdas: &[Vec<FqElem>]) -> Result<StarElement> {
    let f = ctx.field();
    let n = ctx.n();
    for a in lambdas {
        for b in lambdas {
            if !ctx.form().bilinear(a, b).is_zero() {
                return Err(Error::NotIsotropic);
            }
        }
    }
    let flat: Vec<FqElem> = lambdas.iter().flatten().copied().collect();
    if flat.len() != lambdas.len() * n || linalg::rank(f, &flat, lambdas.len(), n) < lambdas.len() {
        return Err(Error::NotIndependent);
    }
    let scale = q_power(ctx, -2 * ctx.half() as i64);
    let mut acc = StarElement::unit(ctx);
    for l in lambdas {
        acc = acc.star(&f_lambda(ctx, l)?.scaled(&scale))?;
    }
    Ok(acc)
}

/// Outcome of one word in [`reflection_subgroup_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct WordCheck {
    pub word: Vec<usize>,
    pub pass: bool,
}

/// Checks that `r_λ ↦ f_λ/q^N` is multiplicative on random words of length
/// at most 4 in the given anisotropic vectors.
pub fn reflection_subgroup_check(
    ctx: &Arc<StarContext>,
    sample: &[Vec<FqElem>],
    words: usize,
    seed: u64,
) -> Result<Vec<WordCheck>> {
    let elems = sample.iter().map(|l| reflection_element(ctx, l)).collect::<Result<Vec<_>>>()?;
    let ops = sample.iter().map(|l| reflection_operator(ctx, l)).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(words);
    for _ in 0..words {
        let len = rng.gen_range(1..=4);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..sample.len())).collect();
        let mut x = StarElement::unit(ctx);
        let mut m = StarElement::unit(ctx).to_model()?;
        for &i in &word {
            x = x.star(&elems[i])?;
            m = m.mul(&ops[i])?;
        }
        out.push(WordCheck { pass: x.to_model()? == m, word });
    }
    Ok(out)
}

fn plane_terms(
    ctx: &StarContext,
    mut coeff_and_vec: impl FnMut(&[FqElem], &[FqElem]) -> Option<(FqElem, Vec<FqElem>, Vec<FqElem>)>,
    pairs: bool,
) -> Result<Vec<(u64, u32)>> {
    let ws = w_vectors(ctx);
    let mut out = Vec::new();
    let zero = vec![ctx.field().zero(); ctx.n()];
    for y in &ws {
        if pairs {
            for z in &ws {
                if let Some((c, plus, minus)) = coeff_and_vec(y, z) {
                    out.push((ctx.encode_parts(&plus, &minus)?, psi_exp(ctx, c)));
                }
            }
        } else if let Some((c, plus, minus)) = coeff_and_vec(y, &zero) {
            out.push((ctx.encode_parts(&plus, &minus)?, psi_exp(ctx, c)));
        }
    }
    Ok(out)
}

/// `Σ_z ψ(t·B(z,z)/2)·(z, tz)`.
pub fn g_t_raw(ctx: &Arc<StarContext>, t: FqElem) -> Result<StarElement> {
    require_plane(ctx)?;
    if t.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let f = ctx.field().clone();
    let terms = plane_terms(
        ctx,
        |z, _| {
            let tz: Vec<FqElem> = z.iter().map(|&x| f.mul(t, x)).collect();
            Some((f.half(f.mul(t, ctx.form().quad(z))), z.to_vec(), tz))
        },
        false,
    )?;
    StarElement::from_exponents(ctx, CycScalar::one_for(&f), terms)
}

/// `g_t = q^{−n/2} Σ_z ψ(t·B(z,z)/2)·(z, tz)`, acting as `[[0, t], [−1/t, 2]]`.
pub fn g_t(ctx: &Arc<StarContext>, t: FqElem) -> Result<StarElement> {
    let f = ctx.field();
    Ok(g_t_raw(ctx, t)?.scaled(&CycScalar::sqrt_q_pow(f.p(), q_of(ctx), -(ctx.n() as i64))))
}

/// The matrix `[[0, t], [−1/t, 2]]` realized by `g_t`.
pub fn g_t_matrix(ctx: &StarContext, t: FqElem) -> Result<[FqElem; 4]> {
    let f = ctx.field();
    Ok([f.zero(), t, f.neg(f.inv(t)?), f.from_int(2)])
}

/// `Σ_{y⁺,y⁻} ψ(−(t+1)/(2(t−1))·B(y⁺,y⁻))·(y⁺, y⁻)`.
pub fn alpha_t_raw(ctx: &Arc<StarContext>, t: FqElem) -> Result<StarElement> {
    require_plane(ctx)?;
    let f = ctx.field().clone();
    if t.is_zero() || t == f.one() {
        return Err(Error::DegenerateParameter(format!("α_t needs t ∉ {{0, 1}}, got {}", t)));
    }
    let c = f.neg(f.div(f.add(t, f.one()), f.add(f.sub(t, f.one()), f.sub(t, f.one())))?);
    let terms = plane_terms(ctx, |yp, ym| Some((f.mul(c, ctx.form().bilinear(yp, ym)), yp.to_vec(), ym.to_vec())), true)?;
    StarElement::from_exponents(ctx, CycScalar::one_for(&f), terms)
}

/// `α_t = q^{−n}·(raw sum)`, acting as `diag(t, 1/t)`.
pub fn alpha_t(ctx: &Arc<StarContext>, t: FqElem) -> Result<StarElement> {
    Ok(alpha_t_raw(ctx, t)?.scaled(&q_power(ctx, -(ctx.n() as i64))))
}

/// `Σ_{y⁺,y⁻} ψ(¼(B(y⁺,y⁺) + B(y⁻,y⁻)))·(y⁺, y⁻)`.
pub fn beta_raw(ctx: &Arc<StarContext>) -> Result<StarElement> {
    require_plane(ctx)?;
    let f = ctx.field().clone();
    let quarter = f.half(f.half(f.one()));
    let terms = plane_terms(
        ctx,
        |yp, ym| Some((f.mul(quarter, f.add(ctx.form().quad(yp), ctx.form().quad(ym))), yp.to_vec(), ym.to_vec())),
        true,
    )?;
    StarElement::from_exponents(ctx, CycScalar::one_for(&f), terms)
}

/// `β = (raw sum) / (K(1)·q^{n/2})`, acting as `[[0, 1], [−1, 0]]`.
pub fn beta(ctx: &Arc<StarContext>) -> Result<StarElement> {
    let f = ctx.field();
    let k1 = k_constant(ctx, f.one()).scalar(q_of(ctx));
    let norm = &k1 * &CycScalar::sqrt_q_pow(f.p(), q_of(ctx), ctx.n() as i64);
    Ok(beta_raw(ctx)?.scaled(&norm.inv()?))
}

/// `Σ_z ψ(−B(z,z)/(2s))·(z, 0)`.
pub fn gamma_s_raw(ctx: &Arc<StarContext>, s: FqElem) -> Result<StarElement> {
    require_plane(ctx)?;
    let f = ctx.field().clone();
    if s.is_zero() {
        return Err(Error::DegenerateParameter("γ_s needs s ≠ 0".into()));
    }
    let c = gamma_const(ctx, s)?;
    let terms = plane_terms(ctx, |z, zero| Some((f.mul(c, ctx.form().quad(z)), z.to_vec(), zero.to_vec())), false)?;
    StarElement::from_exponents(ctx, CycScalar::one_for(&f), terms)
}

/// `−1/(2s)`.
fn gamma_const(ctx: &StarContext, s: FqElem) -> Result<FqElem> {
    let f = ctx.field();
    Ok(f.neg(f.inv(f.add(s, s))?))
}

/// `γ_s = (raw sum) / K(−1/(2s))`, acting as `[[1, 0], [s, 1]]`.
pub fn gamma_s(ctx: &Arc<StarContext>, s: FqElem) -> Result<StarElement> {
    if s.is_zero() {
        return Err(Error::DegenerateParameter("γ_s needs s ≠ 0".into()));
    }
    let k = k_constant(ctx, gamma_const(ctx, s)?).scalar(q_of(ctx));
    Ok(gamma_s_raw(ctx, s)?.scaled(&k.inv()?))
}

/// Outcome of the appendix identity at one `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct AppendixCheck {
    pub t: FqElem,
    /// `K(1)·K(−t/4)·(g̃_t ⋆ α̃_t) = q^n·(γ̃_{2/t} ⋆ β̃)` on raw sums.
    pub cleared: bool,
    /// `g_t ⋆ α_t = γ_{2/t} ⋆ β` with all normalizations.
    pub normalized: bool,
    /// `q^n·K(−(t−1)) = K(−t/(t−1))·K(−t)·K(1)`.
    pub constants: bool,
    pub support: usize,
}

/// Checks `g_t ⋆ α_t = γ_{2/t} ⋆ β` in cleared and normalized form, and the
/// accompanying identity between Gauss constants.
pub fn appendix_check(ctx: &Arc<StarContext>, t: FqElem) -> Result<AppendixCheck> {
    let f = ctx.field().clone();
    let q = q_of(ctx);
    if t.is_zero() || t == f.one() {
        return Err(Error::DegenerateParameter(format!("appendix identity needs t ∉ {{0, 1}}, got {t}")));
    }
    let s = f.div(f.from_int(2), t)?;
    let k = |c: FqElem| k_constant(ctx, c).value;
    let quarter_t = f.neg(f.mul(t, f.half(f.half(f.one()))));
    let lhs_raw = g_t_raw(ctx, t)?.star(&alpha_t_raw(ctx, t)?)?;
    let rhs_raw = gamma_s_raw(ctx, s)?.star(&beta_raw(ctx)?)?;
    let lhs = lhs_raw.mul_cycint(&k(f.one()).mul(&k(quarter_t)));
    let qn = CycInt::from_int(f.p(), q.pow(ctx.n() as u32) as i64);
    let rhs = rhs_raw.mul_cycint(&qn);
    let cleared = lhs == rhs;

    let lhs_scale = CycScalar::sqrt_q_pow(f.p(), q, -3 * ctx.n() as i64);
    let rhs_scale = (&(&k(f.one()).to_scalar(q) * &k(quarter_t).to_scalar(q))
        * &CycScalar::sqrt_q_pow(f.p(), q, ctx.n() as i64))
        .inv()?;
    let normalized = lhs_raw.scaled(&lhs_scale) == rhs_raw.scaled(&rhs_scale);

    let tm1 = f.sub(t, f.one());
    let left = qn.mul(&k(f.neg(tm1)));
    let right = k(f.neg(f.div(t, tm1)?)).mul(&k(f.neg(t))).mul(&k(f.one()));
    Ok(AppendixCheck { t, cleared, normalized, constants: left == right, support: lhs_raw.len() })
}

/// Order of the group generated by the model operators of all `g_t`,
/// computed by breadth-first closure. Fails with `SizeLimit` past `limit`.
pub fn sl2_closure_order(ctx: &Arc<StarContext>, limit: usize) -> Result<usize> {
    let f = ctx.field();
    let gens = f.units().map(|t| g_t(ctx, t)?.to_model()).collect::<Result<Vec<_>>>()?;
    closure_order(&gens, limit)
}

/// Breadth-first closure of a set of invertible operators.
pub fn closure_order(gens: &[ModelOperator], limit: usize) -> Result<usize> {
    let Some(first) = gens.first() else {
        return Ok(1);
    };
    let id = first.mul(&first.clone())?.identity_like();
    let mut seen = HashSet::new();
    seen.insert(id.key()?);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g)?;
            if seen.insert(y.key()?) {
                if seen.len() > limit {
                    return Err(Error::SizeLimit(format!("group closure exceeds {limit} elements")));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len())
}

/// Scalar `c` with `to_model(g_t ⋆ g_u) = c · ω(M_t M_u)`, where `ω` is the
/// Bruhat-assembled action; `None` if the two are not proportional.
pub fn g_product_ratio(ctx: &Arc<StarContext>, t: FqElem, u: FqElem) -> Result<Option<CycScalar>> {
    let f = ctx.field();
    let lhs = g_t(ctx, t)?.star(&g_t(ctx, u)?)?.to_model()?;
    let [a, b, c, d] = g_t_matrix(ctx, t)?;
    let [e, g, h, k] = g_t_matrix(ctx, u)?;
    let m = [
        f.add(f.mul(a, e), f.mul(b, h)),
        f.add(f.mul(a, g), f.mul(b, k)),
        f.add(f.mul(c, e), f.mul(d, h)),
        f.add(f.mul(c, g), f.mul(d, k)),
    ];
    Ok(lhs.ratio_to(&sl2_action(ctx, m)?))
}

/// True when `to_model(α_t)` is exactly the dilation `(u) ↦ (t·u)`.
pub fn alpha_matches(ctx: &Arc<StarContext>, t: FqElem) -> Result<bool> {
    Ok(alpha_t(ctx, t)?.to_model()? == oscillator_dilation(ctx, t)?)
}
