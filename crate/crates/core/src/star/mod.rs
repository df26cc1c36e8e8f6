//! The ⋆-algebra `(ℂ𝐕, ⋆)` on a tensor space `𝐕 = V ⊗ W` and its Schrödinger model.
//!
//! A vector of `𝐕` is a `2N × n` matrix over `F_q` (rows: the basis
//! `e₁⁺…e_N⁺, e₁⁻…e_N⁻` of `V`, columns: the basis of `W`), flattened row
//! major and encoded as an integer base `q`. The plus rows therefore occupy
//! the low digits: `index = plus + q^{Nn}·minus`. A plain symplectic space is
//! the case `n = 1`, `B = [1]`.
//!
//! The form is `𝐒(X, Y) = Σ_i B(X_i⁺, Y_i⁻) − B(X_i⁻, Y_i⁺)`, and
//! `(u) ⋆ (v) = ψ_a(½𝐒(u, v))·(u + v)`.
//!
//! The model action is `(v)(x) = ψ_a(𝐒(v₊, x) + ½𝐒(v₊, v₋))·(v₋ + x)` for
//! `x ∈ Λ₋ ⊗ W`. The printed formula this follows writes the output vector as
//! `v₊ + x`; only `v₋ + x` turns `to_model` into an algebra homomorphism, and
//! the homomorphism tests pin this choice. The trace of `(0)` is the model
//! dimension `q^{Nn} = |𝐕|^{1/2}`, not `|𝐕|`; this is what makes
//! `tr(f_λ/q^{2N}) = 1` for isotropic `λ`.

mod element;
mod model;
mod tables;

pub use element::{StarElement, Term};
pub use model::{
    heisenberg_act, heisenberg_product, oscillator_dilation, oscillator_fourier, oscillator_shear, rank_mod_prime,
    sl2_action, ModelOperator, OperatorKey,
};

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fields::{FieldCtx, FqElem};
use crate::forms::{SymmetricForm, SymplecticSpace};
use crate::linalg;
use tables::Tables;

/// Largest `|𝐕|·p` for which a dense product accumulator is allocated.
pub const ACCUMULATOR_LIMIT: u64 = 1 << 25;
/// Largest square of a half-digit table side.
pub const TABLE_LIMIT: u64 = 1 << 24;

/// The tensor space `V ⊗ W` with its symplectic form, together with the
/// character parameter `a`. Shared by every element living on it.
pub struct StarContext {
    field: Arc<FieldCtx>,
    space: SymplecticSpace,
    form: SymmetricForm,
    a: FqElem,
    tables: OnceLock<std::result::Result<Arc<Tables>, String>>,
}

impl fmt::Debug for StarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StarContext(q={}, N={}, n={}, a={})", self.field.q(), self.half(), self.n(), self.a)
    }
}

impl PartialEq for StarContext {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.space == other.space
            && self.form.gram() == other.form.gram()
            && self.a == other.a
    }
}

impl StarContext {
    /// `V ⊗ W` with character `ψ_a`.
    pub fn tensor(space: SymplecticSpace, form: SymmetricForm, a: FqElem) -> Result<Arc<Self>> {
        if space.field() != form.field() {
            return Err(Error::SpaceMismatch);
        }
        if a.is_zero() {
            return Err(Error::TrivialCharacter);
        }
        let field = space.field().clone();
        let digits = 2 * space.half_dim() * form.dim() * field.ell() as usize;
        if (field.p() as f64).powi(digits as i32) * field.p() as f64 > u64::MAX as f64 / 4.0 {
            return Err(Error::SizeLimit(format!("tensor space with {digits} F_p digits")));
        }
        Ok(Arc::new(StarContext { field, space, form, a, tables: OnceLock::new() }))
    }

    /// A plain symplectic space `V` (the case `W = F_q`, `B = [1]`).
    pub fn symplectic(space: SymplecticSpace, a: FqElem) -> Result<Arc<Self>> {
        let f = space.field().clone();
        let form = SymmetricForm::new(f.clone(), 1, vec![f.one()])?;
        Self::tensor(space, form, a)
    }

    /// Same space with character `ψ_b`.
    pub fn with_char(&self, b: FqElem) -> Result<Arc<Self>> {
        Self::tensor(self.space.clone(), self.form.clone(), b)
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn form(&self) -> &SymmetricForm {
        &self.form
    }

    pub fn char_param(&self) -> FqElem {
        self.a
    }

    /// `N`, half the dimension of `V`.
    pub fn half(&self) -> usize {
        self.space.half_dim()
    }

    /// `n = dim W`.
    pub fn n(&self) -> usize {
        self.form.dim()
    }

    /// `dim_{F_q} 𝐕 = 2Nn`.
    pub fn dim(&self) -> usize {
        2 * self.half() * self.n()
    }

    /// `|𝐕|`.
    pub fn size(&self) -> u64 {
        (self.field.q() as u64).pow(self.dim() as u32)
    }

    /// `q^{Nn}`: the size of `Λ₋ ⊗ W`, i.e. `dim ω[𝐕]`.
    pub fn model_dim(&self) -> u64 {
        (self.field.q() as u64).pow((self.half() * self.n()) as u32)
    }

    pub fn encode(&self, v: &[FqElem]) -> Result<u64> {
        if v.len() != self.dim() {
            return Err(Error::Invalid(format!("vector of length {} in a space of dimension {}", v.len(), self.dim())));
        }
        Ok(linalg::encode(&self.field, v))
    }

    pub fn decode(&self, idx: u64) -> Vec<FqElem> {
        linalg::decode(&self.field, idx, self.dim())
    }

    /// Encodes the pair `(v₊, v₋)` of `N × n` blocks.
    pub fn encode_parts(&self, plus: &[FqElem], minus: &[FqElem]) -> Result<u64> {
        let h = self.half() * self.n();
        if plus.len() != h || minus.len() != h {
            return Err(Error::Invalid(format!("blocks must have {h} entries")));
        }
        Ok(linalg::encode(&self.field, plus) + self.model_dim() * linalg::encode(&self.field, minus))
    }

    /// `𝐒(u, v)` computed from decoded vectors.
    pub fn form_value(&self, u: &[FqElem], v: &[FqElem]) -> FqElem {
        let f = &self.field;
        let (nh, n) = (self.half(), self.n());
        let mut acc = f.zero();
        for i in 0..nh {
            let up = &u[i * n..(i + 1) * n];
            let um = &u[(nh + i) * n..(nh + i + 1) * n];
            let vp = &v[i * n..(i + 1) * n];
            let vm = &v[(nh + i) * n..(nh + i + 1) * n];
            acc = f.add(acc, f.sub(self.form.bilinear(up, vm), self.form.bilinear(um, vp)));
        }
        acc
    }

    pub(crate) fn tables(&self) -> Result<Arc<Tables>> {
        self.tables
            .get_or_init(|| Tables::build(self).map(Arc::new))
            .clone()
            .map_err(Error::SizeLimit)
    }

    /// `Tr(a·½𝐒(u, v))`, the exponent of `ψ_a(½𝐒(u,v))`.
    pub fn half_form_exp(&self, u: u64, v: u64) -> Result<u32> {
        Ok(self.tables()?.beta(u, v))
    }

    /// Encoded `u + v`.
    pub fn add_vectors(&self, u: u64, v: u64) -> Result<u64> {
        Ok(self.tables()?.add(u, v))
    }

    /// Encoded `−v`.
    pub fn neg_vector(&self, v: u64) -> Result<u64> {
        Ok(self.tables()?.neg(v))
    }

    pub(crate) fn same_space(&self, other: &StarContext) -> bool {
        std::ptr::eq(self, other) || self == other
    }
}
