//! The q-identities behind the dimension count of the stable-range decomposition.

use num_bigint::BigInt;

use super::{ClassicalGroup, IntPolynomial};
use crate::error::{Error, Result};
use crate::fields::FieldCtx;
use crate::forms::SymmetricForm;
use crate::orbits::{self, OrbitProblem, Side};
use std::sync::Arc;

/// `(a choose b)_q`, computed by exact division.
pub fn gaussian_binomial(a: i64, b: i64) -> Result<IntPolynomial> {
    if b < 0 || b > a {
        return Err(Error::OutOfRange(format!("({a} choose {b})_q needs 0 ≤ b ≤ a")));
    }
    let (a, b) = (a as usize, b as usize);
    let num: IntPolynomial = (a - b + 1..=a).map(IntPolynomial::q_pow_minus_one).product();
    let den: IntPolynomial = (1..=b).map(IntPolynomial::q_pow_minus_one).product();
    num.div_exact(&den)
}

fn binomial_or_zero(a: i64, b: i64) -> IntPolynomial {
    gaussian_binomial(a, b).unwrap_or_default()
}

fn qs(lo: i64, hi: i64) -> IntPolynomial {
    (lo.max(0)..=hi).map(|j| IntPolynomial::big_q(j as usize)).product()
}

fn minus_ones(lo: i64, hi: i64) -> IntPolynomial {
    (lo..=hi).map(|i| if i <= 0 { IntPolynomial::zero() } else { IntPolynomial::q_pow_minus_one(i as usize) }).product()
}

/// Both sides of
/// `Q_{r+p}…Q_{b+p} = Σ_{a=0}^{p} q^{a(b+a−1)}·(r−b+1 choose a)_q·∏_{i=p−a+1}^{p}(q^i−1)·∏_{j=b+a}^{r} Q_j`.
pub fn lemma_sides(p: i64, r: i64, b: i64) -> Result<(IntPolynomial, IntPolynomial)> {
    if !(r > b && b >= 0 && p >= 0) {
        return Err(Error::OutOfRange(format!("lemma needs r > b ≥ 0 and p ≥ 0, got p={p} r={r} b={b}")));
    }
    let lhs = qs(b + p, r + p);
    let rhs = (0..=p)
        .map(|a| {
            let e = (a * (b + a - 1)) as usize;
            let t = &IntPolynomial::q_pow(e) * &binomial_or_zero(r - b + 1, a);
            &(&t * &minus_ones(p - a + 1, p)) * &qs(b + a, r)
        })
        .sum();
    Ok((lhs, rhs))
}

pub fn lemma_identity_check(p: i64, r: i64, b: i64) -> Result<bool> {
    let (l, r) = lemma_sides(p, r, b)?;
    Ok(l == r)
}

/// `Σ q^{ℓ₁+…+ℓ_a}` over `lo ≤ ℓ₁ ≤ … ≤ ℓ_a = k`.
fn multiset_sum(a: i64, lo: i64, k: i64) -> IntPolynomial {
    fn go(slots: i64, lo: i64, k: i64, acc: usize, out: &mut IntPolynomial) {
        if slots == 0 {
            *out = &*out + &IntPolynomial::q_pow(acc + k as usize);
            return;
        }
        for l in lo..=k {
            go(slots - 1, l, k, acc + l as usize, out);
        }
    }
    let mut out = IntPolynomial::zero();
    if lo <= k {
        go(a - 1, lo, k, 0, &mut out);
    }
    out
}

/// Both sides of the tranche identity
/// `q^k(q^p−1)·∏_{j=k+1}^{r}Q_j·∏_{j'=b}^{k−1}Q_{j'+p}
///  = Σ_{a=1}^{k−b+1} (Σ_{a+b−1≤ℓ₁≤…≤ℓ_a=k} q^{ℓ₁+…+ℓ_a})·∏_{i=p−a+1}^{p}(q^i−1)·∏_{j=b+a}^{r}Q_j`.
pub fn tranche_sides(k: i64, p: i64, b: i64, r: i64) -> Result<(IntPolynomial, IntPolynomial)> {
    if !(b >= 0 && b <= k && k <= r && p >= 0) {
        return Err(Error::OutOfRange(format!("tranche needs 0 ≤ b ≤ k ≤ r and p ≥ 0, got k={k} p={p} b={b} r={r}")));
    }
    let lhs = &(&(&IntPolynomial::q_pow(k as usize) * &minus_ones(p, p)) * &qs(k + 1, r)) * &qs(b + p, k - 1 + p);
    let rhs = (1..=k - b + 1)
        .map(|a| &(&multiset_sum(a, a + b - 1, k) * &minus_ones(p - a + 1, p)) * &qs(b + a, r))
        .sum();
    Ok((lhs, rhs))
}

/// `Sp_{2N}` acting on `V`, paired with the orthogonal group of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualPair {
    pub half: usize,
    pub w: ClassicalGroup,
}

impl DualPair {
    pub fn new(half: usize, w: ClassicalGroup) -> Result<Self> {
        if matches!(w, ClassicalGroup::Sp(_)) {
            return Err(Error::Invalid("W must carry an orthogonal group".into()));
        }
        Ok(DualPair { half, w })
    }

    pub fn n(&self) -> usize {
        self.w.natural_dim()
    }

    /// `n ≤ N`.
    pub fn sp_stable(&self) -> bool {
        self.n() <= self.half
    }

    /// `2N ≤ h_W`.
    pub fn o_stable(&self) -> bool {
        2 * self.half <= self.w.witt_index()
    }

    pub fn stable(&self, side: Side) -> bool {
        match side {
            Side::Sp => self.sp_stable(),
            Side::O => self.o_stable(),
        }
    }

    fn require_stable(&self, side: Side) -> Result<()> {
        if self.stable(side) {
            Ok(())
        } else {
            Err(Error::NotInStableRange(format!("{side} side with N={}, W={}", self.half, self.w)))
        }
    }

    /// Largest admissible shift `ℓ`: `h_W` on the symplectic side, `N` on the orthogonal one.
    pub fn max_shift(&self, side: Side) -> usize {
        match side {
            Side::Sp => self.w.witt_index(),
            Side::O => self.half,
        }
    }
}

/// Two sides of a dimension identity.
#[derive(Clone, Debug, PartialEq)]
pub struct HomIdentity {
    pub side: Side,
    pub ell: usize,
    /// Orbit-count product.
    pub lhs: IntPolynomial,
    /// Sum over parabolic quotients.
    pub rhs: IntPolynomial,
}

impl HomIdentity {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The shifted dimension identity. Symplectic side:
/// `2Q₁…Q_{n−ℓ−1} = Σ_k |O(W[−ℓ])/P_k|·|O(W)/P_{k+ℓ}|·|O(W[−k−ℓ])|`;
/// orthogonal side: `Q₁…Q_{2N−ℓ} = Σ_k |Sp(V[−ℓ])/P_k|·|Sp(V)/P_{k+ℓ}|·|Sp(V[−k−ℓ])|`.
pub fn hom_dimension_identity(side: Side, pair: &DualPair, ell: usize) -> Result<HomIdentity> {
    pair.require_stable(side)?;
    let max = pair.max_shift(side);
    if ell > max {
        return Err(Error::RangeExceeded { what: "ℓ", value: ell, max });
    }
    let g = match side {
        Side::Sp => pair.w,
        Side::O => ClassicalGroup::Sp(pair.half),
    };
    let lhs = match side {
        // The product formula counts tuples of n ≥ 1 vectors; the empty tuple has one orbit.
        Side::Sp if pair.n() == 0 => IntPolynomial::one(),
        Side::Sp => &IntPolynomial::constant(2) * &qs(1, pair.n() as i64 - ell as i64 - 1),
        Side::O => qs(1, 2 * pair.half as i64 - ell as i64),
    };
    let shifted = g.reduce(ell)?;
    let rhs = (0..=max - ell)
        .map(|k| {
            Ok(&(&shifted.parabolic_index(k)? * &g.parabolic_index(k + ell)?) * &g.reduce(k + ell)?.order()?)
        })
        .sum::<Result<IntPolynomial>>()?;
    Ok(HomIdentity { side, ell, lhs, rhs })
}

/// `Σ_k |G/P_k|²·|G_k|`: the dimension of the matrix-algebra sum in the
/// stable-range decomposition.
pub fn decomposition_dimension(side: Side, pair: &DualPair) -> Result<IntPolynomial> {
    Ok(hom_dimension_identity(side, pair, 0)?.rhs)
}

/// The orthogonal-side identity at `N` against the symplectic-side one for
/// `W` odd of dimension `2N+1`: returns `(2·lhs_O, lhs_Sp, 2·rhs_O, rhs_Sp)`.
pub fn halving_sides(half: usize, ell: usize) -> Result<[IntPolynomial; 4]> {
    let o = hom_dimension_identity(Side::O, &DualPair::new(half, ClassicalGroup::Oplus(2 * half))?, ell)?;
    let sp = hom_dimension_identity(Side::Sp, &DualPair::new(2 * half + 1, ClassicalGroup::Oodd(half))?, ell)?;
    let two = IntPolynomial::constant(2);
    Ok([&two * &o.lhs, sp.lhs, &two * &o.rhs, sp.rhs])
}

/// Orbit census of the fixed algebra against the decomposition dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremCheck {
    pub census: BigInt,
    pub formula: BigInt,
}

impl TheoremCheck {
    pub fn pass(&self) -> bool {
        self.census == self.formula
    }
}

/// Compares the number of orbits (computed from descriptors over the actual
/// field) with `Σ_k |G/P_k|²·|G_k|` evaluated at `q`.
pub fn theorem_dimension_check(side: Side, field: &Arc<FieldCtx>, half: usize, form: &SymmetricForm) -> Result<TheoremCheck> {
    let pair = DualPair::new(half, ClassicalGroup::of_form(form))?;
    pair.require_stable(side)?;
    let problem = OrbitProblem::new(side, field.clone(), half, form.clone())?;
    let census = BigInt::from(orbits::census(&problem)?);
    let formula = decomposition_dimension(side, &pair)?.eval_u64(field.q() as u64);
    Ok(TheoremCheck { census, formula })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(gaussian_binomial(5, 0).unwrap(), IntPolynomial::one());
        assert_eq!(gaussian_binomial(2, 1).unwrap(), IntPolynomial::from_i64s(&[1, 1]));
        assert!(gaussian_binomial(2, 3).is_err());
        assert!(gaussian_binomial(2, -1).is_err());
        for a in 0..=8 {
            for b in 0..=a {
                let g = gaussian_binomial(a, b).unwrap();
                assert_eq!(g, gaussian_binomial(a, a - b).unwrap());
                assert_eq!(g.degree(), Some((b * (a - b)) as usize));
            }
        }
    }

    #[test]
    fn lemma_small() {
        let (l, r) = lemma_sides(1, 1, 0).unwrap();
        assert_eq!(l, &IntPolynomial::big_q(1) * &IntPolynomial::big_q(2));
        assert_eq!(l, r);
        assert!(lemma_sides(1, 1, 1).is_err());
        let (l, r) = lemma_sides(0, 4, 2).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn tranche_small() {
        let (l, r) = tranche_sides(2, 2, 0, 3).unwrap();
        assert_eq!(l, r);
        assert!(tranche_sides(3, 1, 0, 2).is_err());
    }

    #[test]
    fn prop31_examples() {
        let pair = DualPair::new(3, ClassicalGroup::Oodd(1)).unwrap();
        let h = hom_dimension_identity(Side::Sp, &pair, 1).unwrap();
        assert_eq!(h.lhs.eval_u64(3), BigInt::from(8));
        assert!(h.pass());
        let pair = DualPair::new(1, ClassicalGroup::Oodd(2)).unwrap();
        let h = hom_dimension_identity(Side::O, &pair, 0).unwrap();
        assert_eq!(h.rhs.eval_u64(3), BigInt::from(40));
        assert!(matches!(
            hom_dimension_identity(Side::Sp, &DualPair::new(1, ClassicalGroup::Oplus(1)).unwrap(), 0),
            Err(Error::NotInStableRange(_))
        ));
    }
}
