//! Named identities evaluated over parameter grids.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use super::{halving_sides, hom_dimension_identity, lemma_sides, theorem_dimension_check, tranche_sides, ClassicalGroup, DualPair};
use crate::error::{Error, Result};
use crate::fields::field_of_order;
use crate::forms::{FormType, SymmetricForm};
use crate::grid::Grid;
use crate::orbits::Side;

/// One evaluated parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRow {
    pub params: Map<String, Value>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

pub trait Identity: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Rows for every valid point of the grid, in a fixed order.
    fn rows(&self, grid: &Grid) -> Result<Vec<IdentityRow>>;
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn row(params: Map<String, Value>, lhs: impl ToString, rhs: impl ToString, pass: bool) -> IdentityRow {
    IdentityRow { params, lhs: lhs.to_string(), rhs: rhs.to_string(), pass }
}

/// Form specs of dimension `n` allowed by the grid's `type` clause.
fn form_specs(grid: &Grid, n: usize, with_ns: bool) -> Result<Vec<String>> {
    let types = grid.strings("type", &["odd", "odd:ns", "plus", "minus"])?;
    let mut out = Vec::new();
    for t in types {
        let ok = match t.as_str() {
            "odd" => n % 2 == 1,
            "odd:ns" => with_ns && n % 2 == 1,
            "plus" => n % 2 == 0,
            "minus" => n % 2 == 0 && n >= 2,
            _ => return Err(Error::Parse(format!("unknown form type {t:?}"))),
        };
        if ok {
            out.push(match t.split_once(':') {
                Some((k, ns)) => format!("{k}:{n}:{ns}"),
                None => format!("{t}:{n}"),
            });
        }
    }
    Ok(out)
}

fn group_of_spec(spec: &str) -> Result<ClassicalGroup> {
    let mut parts = spec.split(':');
    let kind: FormType = parts.next().unwrap_or_default().parse()?;
    let n: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| Error::Parse(spec.to_string()))?;
    ClassicalGroup::orthogonal(kind, n)
}

fn sides(grid: &Grid) -> Result<Vec<Side>> {
    grid.strings("side", &["sp", "o"])?.iter().map(|s| s.parse()).collect()
}

fn usizes(grid: &Grid, name: &str, lo: i64, hi: i64) -> Result<Vec<usize>> {
    Ok(grid.ints(name, lo, hi)?.into_iter().filter(|&x| x >= 0).map(|x| x as usize).collect())
}

/// Stable `(side, N, W)` points of the grid.
fn stable_points(grid: &Grid, with_ns: bool) -> Result<Vec<(Side, usize, String)>> {
    let mut out = Vec::new();
    for side in sides(grid)? {
        for half in usizes(grid, "N", 0, 3)? {
            for n in usizes(grid, "n", 0, 6)? {
                for spec in form_specs(grid, n, with_ns)? {
                    let pair = DualPair::new(half, group_of_spec(&spec)?)?;
                    if pair.stable(side) {
                        out.push((side, half, spec));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `q` values of the grid, `3` and `5` by default.
fn q_values(grid: &Grid) -> Result<Vec<i64>> {
    if grid.names().any(|n| n == "q") {
        grid.ints("q", 3, 5)
    } else {
        Ok(vec![3, 5])
    }
}

fn par_rows<T: Sync>(points: &[T], f: impl Fn(&T) -> Result<IdentityRow> + Sync + Send) -> Result<Vec<IdentityRow>> {
    points.par_iter().map(f).collect()
}

struct Lemma;
struct Tranche;
struct Prop31;
struct Cor32;
struct Halving;
struct Thm1;

impl Identity for Lemma {
    fn name(&self) -> &'static str {
        "lemma32"
    }
    fn description(&self) -> &'static str {
        "Q_{r+p}…Q_{b+p} as a sum over a of q-binomial corrections"
    }
    fn rows(&self, grid: &Grid) -> Result<Vec<IdentityRow>> {
        let mut pts = Vec::new();
        for p in grid.ints("p", 0, 5)? {
            for r in grid.ints("r", 1, 7)? {
                for b in grid.ints("b", 0, 6)? {
                    if r > b && b >= 0 && p >= 0 {
                        pts.push((p, r, b));
                    }
                }
            }
        }
        par_rows(&pts, |&(p, r, b)| {
            let (l, rh) = lemma_sides(p, r, b)?;
            Ok(row(params(&[("p", json!(p)), ("r", json!(r)), ("b", json!(b))]), &l, &rh, l == rh))
        })
    }
}

impl Identity for Tranche {
    fn name(&self) -> &'static str {
        "tranche"
    }
    fn description(&self) -> &'static str {
        "one tranche q^k(q^p−1)∏Q_j∏Q_{j'+p} as a multiset sum"
    }
    fn rows(&self, grid: &Grid) -> Result<Vec<IdentityRow>> {
        let mut pts = Vec::new();
        for k in grid.ints("k", 0, 5)? {
            for p in grid.ints("p", 0, 5)? {
                for b in grid.ints("b", 0, 5)? {
                    for r in grid.ints("r", 0, 5)? {
                        if 0 <= b && b <= k && k <= r && p >= 0 {
                            pts.push((k, p, b, r));
                        }
                    }
                }
            }
        }
        par_rows(&pts, |&(k, p, b, r)| {
            let (l, rh) = tranche_sides(k, p, b, r)?;
            let ps = params(&[("k", json!(k)), ("p", json!(p)), ("b", json!(b)), ("r", json!(r))]);
            Ok(row(ps, &l, &rh, l == rh))
        })
    }
}

impl Identity for Prop31 {
    fn name(&self) -> &'static str {
        "prop31"
    }
    fn description(&self) -> &'static str {
        "shifted Hom dimensions: orbit product = sum over parabolic quotients"
    }
    fn rows(&self, grid: &Grid) -> Result<Vec<IdentityRow>> {
        let mut pts = Vec::new();
        for q in q_values(grid)? {
            for (side, half, spec) in stable_points(grid, false)? {
                let pair = DualPair::new(half, group_of_spec(&spec)?)?;
                for ell in usizes(grid, "ell", 0, pair.max_shift(side) as i64)? {
                    if ell <= pair.max_shift(side) {
                        pts.push((q as u64, side, half, spec.clone(), ell));
                    }
                }
            }
        }
        par_rows(&pts, |(q, side, half, spec, ell)| {
            let pair = DualPair::new(*half, group_of_spec(spec)?)?;
            let h = hom_dimension_identity(*side, &pair, *ell)?;
            let (l, r) = (h.lhs.eval_u64(*q), h.rhs.eval_u64(*q));
            let ps = params(&[
                ("side", json!(side.to_string())),
                ("q", json!(q)),
                ("N", json!(half)),
                ("W", json!(spec)),
                ("ell", json!(ell)),
            ]);
            Ok(row(ps, &l, &r, h.pass() && l == r))
        })
    }
}

impl Identity for Cor32 {
    fn name(&self) -> &'static str {
        "cor32"
    }
    fn description(&self) -> &'static str {
        "unshifted case: orbit product = Σ_k |G/P_k|²·|G_k| as polynomials"
    }
    fn rows(&self, grid: &Grid) -> Result<Vec<IdentityRow>> {
        let pts = stable_points(grid, false)?;
        par_rows(&pts, |(side, half, spec)| {
            let pair = DualPair::new(*half, group_of_spec(spec)?)?;
            let h = hom_dimension_identity(*side, &pair, 0)?;
            let ps = params(&[("side", json!(side.to_string())), ("N", json!(half)), ("W", json!(spec))]);
            Ok(row(ps, &h.lhs, &h.rhs, h.pass()))
        })
    }
}

impl Identity for Halving {
    fn name(&self) -> &'static str {
        "halving"
    }
    fn description(&self) -> &'static str {
        "orthogonal-side identity at N is half the symplectic-side one at n = 2N+1"
    }
    fn rows(&self, grid: &Grid) -> Result<Vec<IdentityRow>> {
        let mut pts = Vec::new();
        for half in usizes(grid, "N", 0, 3)? {
            for ell in usizes(grid, "ell", 0, half as i64)? {
                if ell <= half {
                    pts.push((half, ell));
                }
            }
        }
        par_rows(&pts, |&(half, ell)| {
            let [ol, sl, or, sr] = halving_sides(half, ell)?;
            let pass = ol == sl && or == sr;
            Ok(row(params(&[("N", json!(half)), ("ell", json!(ell))]), format!("2·({or})"), &sr, pass))
        })
    }
}

impl Identity for Thm1 {
    fn name(&self) -> &'static str {
        "thm1"
    }
    fn description(&self) -> &'static str {
        "orbit census of the fixed algebra = Σ_k |G/P_k|²·|G_k| at q"
    }
    fn rows(&self, grid: &Grid) -> Result<Vec<IdentityRow>> {
        let mut pts = Vec::new();
        for q in q_values(grid)? {
            for (side, half, spec) in stable_points(grid, true)? {
                pts.push((q as u64, side, half, spec));
            }
        }
        par_rows(&pts, |(q, side, half, spec)| {
            let f = field_of_order(*q)?;
            let form = SymmetricForm::parse(f.clone(), spec)?;
            let t = theorem_dimension_check(*side, &f, *half, &form)?;
            let ps = params(&[("side", json!(side.to_string())), ("q", json!(q)), ("N", json!(half)), ("W", json!(spec))]);
            Ok(row(ps, &t.census, &t.formula, t.pass()))
        })
    }
}

pub fn identity_registry() -> Vec<Box<dyn Identity>> {
    vec![Box::new(Lemma), Box::new(Tranche), Box::new(Prop31), Box::new(Cor32), Box::new(Halving), Box::new(Thm1)]
}

pub fn find_identity(name: &str) -> Result<Box<dyn Identity>> {
    identity_registry()
        .into_iter()
        .find(|i| i.name() == name)
        .ok_or_else(|| Error::Parse(format!("unknown identity {name:?}")))
}
