//! Element and vector specs for the command line, and random elements.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{field_of_order, FieldCtx, FqElem};
use crate::forms::{SymmetricForm, SymplecticSpace};
use crate::generators;
use crate::linalg;
use crate::scalars::CycScalar;
use crate::star::{StarContext, StarElement};

/// `V ⊗ W` over `F_q` with `dim V = 2N`, `W` given by a form spec and character `ψ_a`.
pub fn context(q: u64, half: usize, form: &str, a: i64) -> Result<Arc<StarContext>> {
    let f = field_of_order(q)?;
    let w = SymmetricForm::parse(f.clone(), form)?;
    let a = parse_elem(&f, &a.to_string())?;
    StarContext::tensor(SymplecticSpace::new(f, half), w, a)
}

/// A field element given by its index, or a negative integer read mod `p`.
fn parse_elem(f: &FieldCtx, s: &str) -> Result<FqElem> {
    let x: i64 = s.trim().parse().map_err(|_| Error::Parse(format!("field element {s:?}")))?;
    if x < 0 {
        Ok(f.from_int(x))
    } else {
        f.elem(x as u32)
    }
}

fn parse_vec(f: &FieldCtx, s: &str) -> Result<Vec<FqElem>> {
    s.split(',').map(|x| parse_elem(f, x)).collect()
}

/// Parses `unit`, `basis:IDX`, `f:λ`, `reflection:λ`, `idempotent:λ₁;λ₂`,
/// `g:t`, `alpha:t`, `beta` or `gamma:s`, with `λ` a comma-separated vector.
pub fn parse_element(ctx: &Arc<StarContext>, spec: &str) -> Result<StarElement> {
    let f = ctx.field().clone();
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a.trim())),
        None => (spec.trim(), None),
    };
    let need = |a: Option<&'_ str>| -> Result<String> {
        a.map(str::to_string).ok_or_else(|| Error::Parse(format!("element {head:?} needs an argument")))
    };
    match head {
        "unit" => Ok(StarElement::unit(ctx)),
        "basis" => {
            let v: u64 = need(arg)?.parse::<u64>().map_err(|_| Error::Parse(format!("vector index in {spec:?}")))?;
            StarElement::basis(ctx, v)
        }
        "f" => generators::f_lambda(ctx, &parse_vec(&f, &need(arg)?)?),
        "reflection" => generators::reflection_element(ctx, &parse_vec(&f, &need(arg)?)?),
        "idempotent" => {
            let ls = need(arg)?.split(';').map(|l| parse_vec(&f, l)).collect::<Result<Vec<_>>>()?;
            generators::isotropic_idempotent(ctx, &ls)
        }
        "g" => generators::g_t(ctx, parse_elem(&f, &need(arg)?)?),
        "alpha" => generators::alpha_t(ctx, parse_elem(&f, &need(arg)?)?),
        "beta" => generators::beta(ctx),
        "gamma" => generators::gamma_s(ctx, parse_elem(&f, &need(arg)?)?),
        _ => Err(Error::Parse(format!("unknown element {head:?}"))),
    }
}

/// A model basis vector: `#IDX` or the `N·n` entries of a matrix in `Λ₋ ⊗ W`.
pub fn parse_model_vector(ctx: &StarContext, spec: &str) -> Result<u64> {
    let md = ctx.model_dim();
    let idx = if let Some(i) = spec.strip_prefix('#') {
        i.trim().parse().map_err(|_| Error::Parse(format!("vector index {spec:?}")))?
    } else {
        let v = parse_vec(ctx.field(), spec)?;
        let len = ctx.half() * ctx.n();
        if v.len() != len {
            return Err(Error::Parse(format!("model vector needs {len} entries, got {}", v.len())));
        }
        linalg::encode(ctx.field(), &v)
    };
    if idx >= md {
        return Err(Error::OutOfRange(format!("model basis index {idx} ≥ {md}")));
    }
    Ok(idx)
}

/// Random element with at most `max_terms` terms and small `Z[ζ_p]` coefficients.
pub fn random_element<R: Rng>(ctx: &Arc<StarContext>, rng: &mut R, max_terms: usize) -> Result<StarElement> {
    let p = ctx.field().p() as usize;
    let size = ctx.size();
    loop {
        let k = rng.gen_range(1..=max_terms);
        let terms: Vec<(u64, Vec<i64>)> =
            (0..k).map(|_| (rng.gen_range(0..size), (0..p).map(|_| rng.gen_range(-2..=2)).collect())).collect();
        let x = StarElement::from_cyc_terms(ctx, CycScalar::one_for(ctx.field()), terms)?;
        if !x.is_empty() {
            return Ok(x);
        }
    }
}
