//! Orders of finite symplectic and orthogonal groups and their parabolic quotients.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{gaussian_binomial, IntPolynomial};
use crate::error::{Error, Result};
use crate::forms::{FormType, SymmetricForm};

/// A classical group by type and size: `Sp(N)` is `Sp_{2N}`, `Oodd(m)` is
/// `O_{2m+1}`, `Oplus(m)` and `Ominus(m)` are `O^±_{2m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalGroup {
    Sp(usize),
    Oodd(usize),
    Oplus(usize),
    Ominus(usize),
}

impl ClassicalGroup {
    /// The isometry group of a form of the given type and dimension.
    pub fn orthogonal(kind: FormType, n: usize) -> Result<Self> {
        match kind {
            FormType::Odd if n % 2 == 1 => Ok(ClassicalGroup::Oodd(n / 2)),
            FormType::Plus if n % 2 == 0 => Ok(ClassicalGroup::Oplus(n / 2)),
            FormType::Minus if n % 2 == 0 && n >= 2 => Ok(ClassicalGroup::Ominus(n / 2)),
            _ => Err(Error::OutOfRange(format!("no {kind} form of dimension {n}"))),
        }
    }

    pub fn of_form(form: &SymmetricForm) -> Self {
        Self::orthogonal(form.form_type(), form.dim()).expect("form type matches its dimension")
    }

    /// Dimension of the natural module.
    pub fn natural_dim(&self) -> usize {
        match *self {
            ClassicalGroup::Sp(n) => 2 * n,
            ClassicalGroup::Oodd(m) => 2 * m + 1,
            ClassicalGroup::Oplus(m) | ClassicalGroup::Ominus(m) => 2 * m,
        }
    }

    /// Largest `k` with a `k`-dimensional isotropic subspace (`N` or `h_W`).
    pub fn witt_index(&self) -> usize {
        match *self {
            ClassicalGroup::Sp(n) => n,
            ClassicalGroup::Oodd(m) | ClassicalGroup::Oplus(m) => m,
            ClassicalGroup::Ominus(m) => m - 1,
        }
    }

    /// The group of the form with `k` hyperbolic planes removed.
    pub fn reduce(&self, k: usize) -> Result<Self> {
        let h = self.witt_index();
        if k > h {
            return Err(Error::RangeExceeded { what: "k", value: k, max: h });
        }
        Ok(match *self {
            ClassicalGroup::Sp(n) => ClassicalGroup::Sp(n - k),
            ClassicalGroup::Oodd(m) => ClassicalGroup::Oodd(m - k),
            ClassicalGroup::Oplus(m) => ClassicalGroup::Oplus(m - k),
            ClassicalGroup::Ominus(m) => ClassicalGroup::Ominus(m - k),
        })
    }

    fn check(&self) -> Result<()> {
        if *self == ClassicalGroup::Ominus(0) {
            return Err(Error::OutOfRange("O^-_0 does not exist".into()));
        }
        Ok(())
    }

    pub fn order(&self) -> Result<IntPolynomial> {
        self.check()?;
        let even_product = |m: usize| IntPolynomial::product(&(1..=m).map(|i| IntPolynomial::q_pow_minus_one(2 * i)).collect::<Vec<_>>());
        Ok(match *self {
            ClassicalGroup::Sp(n) => &IntPolynomial::q_pow(n * n) * &even_product(n),
            ClassicalGroup::Oodd(m) => &IntPolynomial::monomial(2, m * m) * &even_product(m),
            ClassicalGroup::Oplus(0) => IntPolynomial::one(),
            ClassicalGroup::Oplus(m) => {
                &(&IntPolynomial::monomial(2, m * (m - 1)) * &IntPolynomial::q_pow_minus_one(m)) * &even_product(m - 1)
            }
            ClassicalGroup::Ominus(m) => {
                &(&IntPolynomial::monomial(2, m * (m - 1)) * &IntPolynomial::big_q(m)) * &even_product(m - 1)
            }
        })
    }

    pub fn order_at(&self, q: u64) -> Result<BigInt> {
        Ok(self.order()?.eval_u64(q))
    }

    /// Number of isotropic lines of the natural module; for `Sp_{2N}` the
    /// count of the quadric of `O_{2N+1}`, which has the same parabolic quotients.
    pub fn quadric_points(&self) -> Result<IntPolynomial> {
        self.check()?;
        let n = match *self {
            ClassicalGroup::Sp(n) => 2 * n + 1,
            _ => self.natural_dim(),
        };
        if n == 0 {
            return Ok(IntPolynomial::zero());
        }
        let base = IntPolynomial::q_pow_minus_one(n - 1).div_exact(&IntPolynomial::q_pow_minus_one(1))?;
        Ok(match *self {
            ClassicalGroup::Oplus(m) => &base + &IntPolynomial::q_pow(m - 1),
            ClassicalGroup::Ominus(m) => &base - &IntPolynomial::q_pow(m - 1),
            _ => base,
        })
    }

    /// `|G/P_k|`, the number of `k`-dimensional isotropic subspaces, from the
    /// quadric-point recursion.
    pub fn parabolic_index(&self, k: usize) -> Result<IntPolynomial> {
        let h = self.witt_index();
        if k > h {
            return Err(Error::RangeExceeded { what: "k", value: k, max: h });
        }
        let num = (0..k).map(|l| self.reduce(l)?.quadric_points()).collect::<Result<Vec<_>>>()?;
        let den: Vec<IntPolynomial> = (1..k).map(projective_points).collect();
        IntPolynomial::product(&num).div_exact(&IntPolynomial::product(&den))
    }

    /// The simplified products for `|G/P_k|`: `(m choose k)_q·Q_{m−k+1}…Q_m`
    /// (odd and symplectic), `(m choose k)_q·Q_{m−k}…Q_{m−1}` (plus) and
    /// `(m−1 choose k)_q·Q_{m−k+1}…Q_m` (minus).
    pub fn parabolic_index_closed(&self, k: usize) -> Result<IntPolynomial> {
        let h = self.witt_index();
        if k > h {
            return Err(Error::RangeExceeded { what: "k", value: k, max: h });
        }
        let qs = |lo: usize, hi: usize| (lo..=hi).map(IntPolynomial::big_q).product::<IntPolynomial>();
        let (m, k) = (self.natural_dim() / 2, k);
        Ok(match *self {
            ClassicalGroup::Sp(_) | ClassicalGroup::Oodd(_) => &gaussian_binomial(m as i64, k as i64)? * &qs(m + 1 - k, m),
            ClassicalGroup::Oplus(_) if k == 0 => IntPolynomial::one(),
            ClassicalGroup::Oplus(_) => &gaussian_binomial(m as i64, k as i64)? * &qs(m - k, m - 1),
            ClassicalGroup::Ominus(_) => &gaussian_binomial(m as i64 - 1, k as i64)? * &qs(m + 1 - k, m),
        })
    }
}

/// `|ℙ^k(F_q)| = (q^{k+1} − 1)/(q − 1)`.
pub fn projective_points(k: usize) -> IntPolynomial {
    (0..=k).map(IntPolynomial::q_pow).sum()
}

impl fmt::Display for ClassicalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClassicalGroup::Sp(n) => write!(f, "sp:{n}"),
            ClassicalGroup::Oodd(m) => write!(f, "oodd:{m}"),
            ClassicalGroup::Oplus(m) => write!(f, "oplus:{m}"),
            ClassicalGroup::Ominus(m) => write!(f, "ominus:{m}"),
        }
    }
}

impl FromStr for ClassicalGroup {
    type Err = Error;
    /// `sp:N`, `oodd:m`, `oplus:m` or `ominus:m`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, size) = s.split_once(':').ok_or_else(|| Error::Parse(format!("group spec {s:?}")))?;
        let size: usize = size.parse().map_err(|_| Error::Parse(format!("group size in {s:?}")))?;
        let g = match kind.to_ascii_lowercase().as_str() {
            "sp" => ClassicalGroup::Sp(size),
            "oodd" => ClassicalGroup::Oodd(size),
            "oplus" => ClassicalGroup::Oplus(size),
            "ominus" => ClassicalGroup::Ominus(size),
            _ => return Err(Error::Parse(format!("unknown group kind {kind:?}"))),
        };
        g.check()?;
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at3(p: &IntPolynomial) -> i64 {
        p.eval_u64(3).try_into().unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(at3(&ClassicalGroup::Sp(1).order().unwrap()), 24);
        assert_eq!(at3(&ClassicalGroup::Oplus(2).order().unwrap()), 1152);
        assert_eq!(at3(&ClassicalGroup::Oodd(1).order().unwrap()), 48);
        assert_eq!(at3(&ClassicalGroup::Ominus(1).order().unwrap()), 8);
        assert_eq!(at3(&ClassicalGroup::Oplus(0).order().unwrap()), 1);
        assert!(ClassicalGroup::Ominus(0).order().is_err());
        for n in 0..5 {
            assert_eq!(ClassicalGroup::Oodd(n).order().unwrap(), &ClassicalGroup::Sp(n).order().unwrap() * &IntPolynomial::constant(2));
        }
    }

    #[test]
    fn quadric_and_parabolic() {
        assert_eq!(at3(&ClassicalGroup::Oodd(1).parabolic_index(1).unwrap()), 4);
        assert_eq!(at3(&ClassicalGroup::Oplus(1).parabolic_index(1).unwrap()), 2);
        assert_eq!(at3(&ClassicalGroup::Ominus(1).quadric_points().unwrap()), 0);
        assert!(matches!(ClassicalGroup::Ominus(1).parabolic_index(1), Err(Error::RangeExceeded { .. })));
        assert_eq!(at3(&ClassicalGroup::Sp(1).parabolic_index(1).unwrap()), 4);
        assert_eq!(at3(&ClassicalGroup::Sp(2).parabolic_index(2).unwrap()), 40);
        for m in 0..6 {
            for g in [ClassicalGroup::Sp(m), ClassicalGroup::Oodd(m), ClassicalGroup::Oplus(m), ClassicalGroup::Ominus(m + 1)] {
                for k in 0..=g.witt_index() {
                    assert_eq!(g.parabolic_index(k).unwrap(), g.parabolic_index_closed(k).unwrap(), "{g} k={k}");
                }
            }
        }
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["sp:2", "oodd:1", "oplus:0", "ominus:3"] {
            assert_eq!(s.parse::<ClassicalGroup>().unwrap().to_string(), s);
        }
        assert!("ominus:0".parse::<ClassicalGroup>().is_err());
        assert!("gl:2".parse::<ClassicalGroup>().is_err());
    }
}
