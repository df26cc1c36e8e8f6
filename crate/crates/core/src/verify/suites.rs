use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::{context, params, random_element, Check, Suite, SuiteConfig};
use crate::error::Result;
use crate::fields::{field_of_order, FieldCtx, FqElem};
use crate::forms::SymmetricForm;
use crate::generators::{
    alpha_t, appendix_check, beta, g_product_ratio, g_t, g_t_matrix, gamma_s, isotropic_idempotent,
    k_closed_form, k_constant, reflection_element, reflection_operator, reflection_subgroup_check, sl2_closure_order,
};
use crate::grid::Grid;
use crate::linalg;
use crate::orbits::{
    build_group, burnside_count, census, descriptor_count, rref_matrices, stable_orbit_count, GroupKind, OrbitProblem, Side,
};
use crate::qcomb::identity_registry;
use crate::scalars::{gauss_sum, gauss_sum_int, CycScalar};
use crate::star::{
    heisenberg_act, heisenberg_product, oscillator_dilation, oscillator_fourier, oscillator_shear, sl2_action, ModelOperator,
    StarContext, StarElement,
};

/// True when the grid does not constrain `name` or admits `v`.
fn allows(grid: &Grid, name: &str, v: i64) -> Result<bool> {
    if !grid.names().any(|n| n == name) {
        return Ok(true);
    }
    Ok(grid.ints(name, v, v)?.contains(&v))
}

fn allows_str(grid: &Grid, name: &str, v: &str) -> Result<bool> {
    Ok(grid.strings(name, &[v])?.iter().any(|s| s == v))
}

fn form_dim(spec: &str) -> i64 {
    spec.split(':').nth(1).and_then(|x| x.parse().ok()).unwrap_or(0)
}

fn form_kind(spec: &str) -> &str {
    spec.split(':').next().unwrap_or_default()
}

/// Keeps the `(q, N, form)` points admitted by the grid's `q`, `N`, `n` and `type` clauses.
fn filter_points(grid: &Grid, pts: Vec<(u64, usize, &'static str)>) -> Result<Vec<(u64, usize, &'static str)>> {
    let mut out = Vec::new();
    for (q, half, spec) in pts {
        if allows(grid, "q", q as i64)?
            && allows(grid, "N", half as i64)?
            && allows(grid, "n", form_dim(spec))?
            && allows_str(grid, "type", form_kind(spec))?
        {
            out.push((q, half, spec));
        }
    }
    Ok(out)
}

fn run_points<T: Sync>(pts: &[T], f: impl Fn(usize, &T) -> Result<Vec<Check>> + Sync + Send) -> Result<Vec<Check>> {
    let nested: Vec<Vec<Check>> = pts.par_iter().enumerate().map(|(i, p)| f(i, p)).collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

fn point_params(q: u64, half: usize, spec: &str) -> Map<String, Value> {
    params(&[("q", json!(q)), ("N", json!(half)), ("W", json!(spec))])
}

fn with(mut m: Map<String, Value>, k: &str, v: Value) -> Map<String, Value> {
    m.insert(k.into(), v);
    m
}

fn tally(ok: usize, total: usize, unit: &str) -> String {
    format!("{ok}/{total} {unit}")
}

fn q_pow(ctx: &StarContext, e: u32) -> CycScalar {
    let f = ctx.field();
    CycScalar::from_int(f.p(), f.q() as u64, (f.q() as i64).pow(e))
}

/// First column where two model operators differ.
fn first_bad_column(a: &ModelOperator, b: &ModelOperator) -> Option<usize> {
    (0..a.dim()).find(|&c| a.column(c) != b.column(c))
}

fn column_check(suite: &str, name: &str, ps: Map<String, Value>, got: &ModelOperator, want: &ModelOperator) -> Check {
    match first_bad_column(got, want) {
        None => Check::new(suite, name, ps, true, format!("{} columns", got.dim())),
        Some(c) => {
            let detail = match got.ratio_to(want) {
                Some(r) => format!("column {c} differs; operators proportional with ratio {r}"),
                None => format!("column {c} differs"),
            };
            Check::new(suite, name, ps, false, detail)
        }
    }
}

fn nonzero_vectors(f: &FieldCtx, n: usize) -> impl Iterator<Item = Vec<FqElem>> + '_ {
    (1..(f.q() as u64).pow(n as u32)).map(move |i| linalg::decode(f, i, n))
}

pub struct StarSuite;

impl StarSuite {
    fn point(q: u64, half: usize, spec: &str, pairs: usize, seed: u64) -> Result<Vec<Check>> {
        const S: &str = "star";
        let ctx = context(q, half, spec, 1)?;
        let ps = point_params(q, half, spec);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();

        let mut ok = 0;
        for _ in 0..pairs {
            let a = random_element(&ctx, &mut rng, 6)?;
            let b = random_element(&ctx, &mut rng, 6)?;
            if a.star(&b)?.to_model()? == a.to_model()?.mul(&b.to_model()?)? {
                ok += 1;
            }
        }
        out.push(Check::new(S, "homomorphism", ps.clone(), ok == pairs, tally(ok, pairs, "pairs")));

        let triples = pairs.min(20);
        let mut assoc = 0;
        let mut unit = 0;
        let mut trace = 0;
        let one = StarElement::unit(&ctx);
        for _ in 0..triples {
            let a = random_element(&ctx, &mut rng, 4)?;
            let b = random_element(&ctx, &mut rng, 4)?;
            let c = random_element(&ctx, &mut rng, 4)?;
            assoc += usize::from(a.star(&b)?.star(&c)? == a.star(&b.star(&c)?)?);
            unit += usize::from(one.star(&a)? == a && a.star(&one)? == a);
            trace += usize::from(a.trace() == a.to_model()?.trace());
        }
        out.push(Check::new(S, "associativity", ps.clone(), assoc == triples, tally(assoc, triples, "triples")));
        out.push(Check::new(S, "unit", ps.clone(), unit == triples && one.to_model()? == one.to_model()?.identity_like(), tally(unit, triples, "samples")));
        out.push(Check::new(S, "trace-agrees-with-model", ps.clone(), trace == triples, tally(trace, triples, "samples")));
        let t0 = one.trace();
        let want = q_pow(&ctx, (half * ctx.n()) as u32);
        out.push(Check::new(S, "trace-of-unit", ps.clone(), t0 == want, format!("tr (0) = {t0}")));

        // translations by Λ₋ permute the model basis: x ↦ v₋ + x
        let md = ctx.model_dim();
        let mut perm = 0;
        for k in 0..md {
            let v = k * md;
            let op = StarElement::basis(&ctx, v)?.to_model()?;
            let good = (0..md).all(|x| {
                let want = ctx.add_vectors(v, x * md).map(|s| s / md).unwrap_or(u64::MAX) as usize;
                op.column(x as usize) == vec![(want, CycScalar::one_for(ctx.field()))]
            });
            perm += usize::from(good);
        }
        out.push(Check::new(S, "translations-permute", ps.clone(), perm == md as usize, tally(perm, md as usize, "vectors")));

        if half == 1 {
            out.push(Self::duality(&ctx, ps.clone())?);
            if q == 3 && ctx.n() == 1 {
                out.push(Self::heisenberg(&ctx, ps)?);
            }
        }
        Ok(out)
    }

    /// `tr ω_a(g)·tr ω_{−a}(g) = q^{n·dim ker(g−1)}` for every `g ∈ SL₂(F_q)`.
    fn duality(ctx: &Arc<StarContext>, ps: Map<String, Value>) -> Result<Check> {
        let f = ctx.field();
        let dual = ctx.with_char(f.neg(ctx.char_param()))?;
        let mut total = 0;
        let mut ok = 0;
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    for d in f.elements() {
                        if f.sub(f.mul(a, d), f.mul(b, c)) != f.one() {
                            continue;
                        }
                        total += 1;
                        let m = [a, b, c, d];
                        let lhs = &sl2_action(ctx, m)?.trace() * &sl2_action(&dual, m)?.trace();
                        let g1 = [f.sub(a, f.one()), b, c, f.sub(d, f.one())];
                        let fixed = 2 - linalg::rank(f, &g1, 2, 2);
                        ok += usize::from(lhs == q_pow(ctx, (ctx.n() * fixed) as u32));
                    }
                }
            }
        }
        Ok(Check::new("star", "character-duality", ps, ok == total, tally(ok, total, "elements of SL2")))
    }

    /// Exhaustive composition law of the Heisenberg action.
    fn heisenberg(ctx: &Arc<StarContext>, ps: Map<String, Value>) -> Result<Check> {
        let f = ctx.field();
        let p = f.p();
        let mut total = 0;
        let mut ok = 0;
        for v in 0..ctx.size() {
            for c in f.elements() {
                for w in 0..ctx.size() {
                    for d in f.elements() {
                        let (prod, e) = heisenberg_product(ctx, (v, c), (w, d))?;
                        for x in 0..ctx.model_dim() {
                            let (e1, y) = heisenberg_act(ctx, w, d, x)?;
                            let (e2, z) = heisenberg_act(ctx, v, c, y)?;
                            let (e3, z3) = heisenberg_act(ctx, prod, e, x)?;
                            total += 1;
                            ok += usize::from(z == z3 && (e1 + e2) % p == e3);
                        }
                    }
                }
            }
        }
        Ok(Check::new("star", "heisenberg-composition", ps, ok == total, tally(ok, total, "triples")))
    }
}

impl Suite for StarSuite {
    fn name(&self) -> &'static str {
        "star"
    }
    fn description(&self) -> &'static str {
        "⋆-product vs composition of model operators, traces, Heisenberg action"
    }
    fn run(&self, config: &SuiteConfig) -> Result<Vec<Check>> {
        let pairs = config.grid.ints("pairs", 100, 100)?.into_iter().max().unwrap_or(100).max(1) as usize;
        let mut pts = Vec::new();
        for q in config.q_values(&[3, 5]) {
            for (half, spec) in [(1, "odd:1"), (1, "plus:2"), (1, "minus:2"), (2, "odd:1")] {
                pts.push((q, half, spec));
            }
        }
        let pts = filter_points(&config.grid, pts)?;
        run_points(&pts, |i, &(q, half, spec)| Self::point(q, half, spec, pairs, config.seed.wrapping_add(i as u64)))
    }
}

pub struct GeneratorsSuite;

impl GeneratorsSuite {
    fn reflections(q: u64, spec: &str, seed: u64) -> Result<Vec<Check>> {
        const S: &str = "generators";
        let ctx = context(q, 1, spec, 1)?;
        let f = ctx.field().clone();
        let ps = point_params(q, 1, spec);
        let one = StarElement::unit(&ctx);
        let mut total = 0;
        let (mut square, mut action) = (0, 0);
        let mut sample = Vec::new();
        for l in nonzero_vectors(&f, ctx.n()) {
            if ctx.form().quad(&l).is_zero() {
                continue;
            }
            total += 1;
            let r = reflection_element(&ctx, &l)?;
            square += usize::from(r.star(&r)? == one);
            action += usize::from(r.to_model()? == reflection_operator(&ctx, &l)?);
            if sample.len() < 4 {
                sample.push(l);
            }
        }
        let mut out = vec![
            Check::new(S, "reflection-square", ps.clone(), square == total, tally(square, total, "anisotropic λ")),
            Check::new(S, "reflection-action", ps.clone(), action == total, tally(action, total, "anisotropic λ")),
        ];
        if !sample.is_empty() {
            let words = reflection_subgroup_check(&ctx, &sample, 20, seed)?;
            let ok = words.iter().filter(|w| w.pass).count();
            out.push(Check::new(S, "reflection-words", ps, ok == words.len(), tally(ok, words.len(), "words")));
        }
        Ok(out)
    }

    /// Isotropic subspaces of dimension `k` in RREF.
    fn isotropic_bases(ctx: &StarContext, k: usize) -> Vec<Vec<Vec<FqElem>>> {
        let f = ctx.field();
        let n = ctx.n();
        rref_matrices(f, k, n)
            .into_iter()
            .map(|m| m.chunks(n).map(<[FqElem]>::to_vec).collect::<Vec<_>>())
            .filter(|rows| rows.iter().all(|a| rows.iter().all(|b| ctx.form().bilinear(a, b).is_zero())))
            .collect()
    }

    fn idempotents(q: u64, spec: &str) -> Result<Vec<Check>> {
        const S: &str = "generators";
        let ctx = context(q, 1, spec, 1)?;
        let half = ctx.half();
        let mut out = Vec::new();
        for k in 1..=2usize.min(ctx.form().witt_index()) {
            let ps = with(point_params(q, half, spec), "k", json!(k));
            let bases = Self::isotropic_bases(&ctx, k);
            let want = q_pow(&ctx, (half * (ctx.n() - 2 * k)) as u32);
            let (mut idem, mut comm, mut trace) = (0, 0, 0);
            for rows in &bases {
                let e = isotropic_idempotent(&ctx, rows)?;
                idem += usize::from(e.star(&e)? == e);
                trace += usize::from(e.to_model()?.trace() == want);
                let singles = rows.iter().map(|l| isotropic_idempotent(&ctx, std::slice::from_ref(l))).collect::<Result<Vec<_>>>()?;
                let commutes = singles.iter().all(|a| singles.iter().all(|b| a.star(b).ok() == b.star(a).ok()));
                comm += usize::from(commutes);
            }
            let n = bases.len();
            out.push(Check::new(S, "idempotent", ps.clone(), idem == n, tally(idem, n, "subspaces")));
            out.push(Check::new(S, "idempotents-commute", ps.clone(), comm == n, tally(comm, n, "subspaces")));
            out.push(Check::new(S, "idempotent-trace", ps, trace == n, format!("{} with trace {want}", tally(trace, n, "subspaces"))));
        }
        Ok(out)
    }

    fn sl2(q: u64, spec: &str) -> Result<Vec<Check>> {
        const S: &str = "generators";
        let ctx = context(q, 1, spec, 1)?;
        let f = ctx.field().clone();
        let ps = point_params(q, 1, spec);
        let mut out = Vec::new();
        for t in f.units() {
            let pt = with(ps.clone(), "t", json!(t.to_string()));
            if t != f.one() {
                out.push(column_check(S, "alpha-dilation", pt.clone(), &alpha_t(&ctx, t)?.to_model()?, &oscillator_dilation(&ctx, t)?));
            }
            out.push(column_check(S, "gamma-shear", pt.clone(), &gamma_s(&ctx, t)?.to_model()?, &oscillator_shear(&ctx, t)?));
            out.push(column_check(S, "g-matrix", pt, &g_t(&ctx, t)?.to_model()?, &sl2_action(&ctx, g_t_matrix(&ctx, t)?)?));
        }
        out.push(column_check(S, "beta-fourier", ps.clone(), &beta(&ctx)?.to_model()?, &oscillator_fourier(&ctx)?));

        let units: Vec<FqElem> = f.units().collect();
        let mut proportional = 0;
        let mut ratios = std::collections::BTreeSet::new();
        for &t in &units {
            for &u in &units {
                if let Some(r) = g_product_ratio(&ctx, t, u)? {
                    proportional += 1;
                    ratios.insert(r.to_string());
                }
            }
        }
        let total = units.len() * units.len();
        let detail = format!("{}; ratios {}", tally(proportional, total, "pairs"), ratios.into_iter().collect::<Vec<_>>().join(" | "));
        out.push(Check::new(S, "g-products-projective", ps.clone(), proportional == total, detail));

        let order = sl2_closure_order(&ctx, 100_000)?;
        let want = (q * (q * q - 1)) as usize;
        if spec == "plus:2" {
            out.push(Check::new(S, "sl2-closure", ps, order == want, format!("order {order}, |SL2| = {want}")));
        } else {
            out.push(Check::info(S, "sl2-closure", ps, format!("order {order}, |SL2| = {want}")));
        }
        Ok(out)
    }

    fn gauss(q: u64) -> Result<Check> {
        let f = field_of_order(q)?;
        let g = gauss_sum(&f, f.one());
        let want = CycScalar::from_int(f.p(), q, f.quad_char(f.neg(f.one())) as i64 * q as i64);
        let sq = &g * &g;
        Ok(Check::new("generators", "gauss-square", params(&[("q", json!(q))]), sq == want, format!("G(1)² = {sq}")))
    }

    /// `G_{p^ℓ}(1) = −(−G_p(1))^ℓ`, compared in `Z[ζ_p]`.
    fn hasse_davenport(p: u64, ell: u32) -> Result<Check> {
        let base = field_of_order(p)?;
        let ext = field_of_order(p.pow(ell))?;
        let minus_g = gauss_sum_int(&base, base.one()).scale(-1);
        let mut want = minus_g.clone();
        for _ in 1..ell {
            want = want.mul(&minus_g);
        }
        let want = want.scale(-1);
        let lifted = gauss_sum_int(&ext, ext.one());
        let ps = params(&[("p", json!(p)), ("ell", json!(ell))]);
        Ok(Check::new("generators", "hasse-davenport", ps, want.canonical() == lifted.canonical(), format!("{:?}", lifted.canonical())))
    }

    fn k_constants(q: u64, spec: &str) -> Result<Check> {
        let ctx = context(q, 1, spec, 1)?;
        let f = ctx.field();
        let total = f.q() as usize;
        let ok = f.elements().filter(|&c| k_constant(&ctx, c).scalar(q) == k_closed_form(&ctx, c)).count();
        Ok(Check::new("generators", "k-closed-form", params(&[("q", json!(q)), ("W", json!(spec))]), ok == total, tally(ok, total, "c")))
    }
}

const REFLECTION_FORMS: [&str; 6] = ["odd:1", "odd:1:ns", "plus:2", "minus:2", "odd:3", "odd:3:ns"];
const IDEMPOTENT_FORMS: [&str; 7] = ["plus:2", "odd:3", "odd:3:ns", "plus:4", "minus:4", "odd:5", "odd:5:ns"];
const SL2_FORMS: [&str; 4] = ["odd:1", "plus:2", "minus:2", "odd:3"];
const K_FORMS: [&str; 5] = ["odd:1", "odd:1:ns", "plus:2", "minus:2", "odd:3"];

enum GenTask {
    Reflection(u64, &'static str),
    Idempotent(u64, &'static str),
    Sl2(u64, &'static str),
    Gauss(u64),
    HasseDavenport(u64, u32),
    K(u64, &'static str),
}

impl Suite for GeneratorsSuite {
    fn name(&self) -> &'static str {
        "generators"
    }
    fn description(&self) -> &'static str {
        "reflections, isotropic idempotents, SL2 generators, Gauss sums and K(c)"
    }
    fn run(&self, config: &SuiteConfig) -> Result<Vec<Check>> {
        let grid = &config.grid;
        let parts = grid.strings("part", &["reflection", "idempotent", "sl2", "gauss"])?;
        let want = |p: &str| parts.iter().any(|x| x == p);
        let mut tasks = Vec::new();
        let pts = |qs: &[u64], forms: &[&'static str]| -> Result<Vec<(u64, usize, &'static str)>> {
            let qs = config.q_values(qs);
            filter_points(grid, qs.iter().flat_map(|&q| forms.iter().map(move |&s| (q, 1, s))).collect())
        };
        if want("reflection") {
            tasks.extend(pts(&[3], &REFLECTION_FORMS)?.into_iter().map(|(q, _, s)| GenTask::Reflection(q, s)));
        }
        if want("idempotent") {
            tasks.extend(pts(&[3], &IDEMPOTENT_FORMS)?.into_iter().map(|(q, _, s)| GenTask::Idempotent(q, s)));
        }
        if want("sl2") {
            let sl2 = pts(&[3, 5], &SL2_FORMS)?;
            // odd:3 over F_5 has a 125-dimensional model and is left to explicit grids
            let explicit = config.qs.is_some() || grid.names().any(|n| n == "q");
            tasks.extend(sl2.into_iter().filter(|&(q, _, s)| explicit || q == 3 || s != "odd:3").map(|(q, _, s)| GenTask::Sl2(q, s)));
        }
        if want("gauss") {
            for q in config.q_values(&[3, 5, 7, 9, 11, 13, 25, 27]) {
                if allows(grid, "q", q as i64)? {
                    tasks.push(GenTask::Gauss(q));
                }
            }
            tasks.extend([(3, 2), (5, 2)].map(|(p, l)| GenTask::HasseDavenport(p, l)));
            tasks.extend(pts(&[3, 5, 7, 9], &K_FORMS)?.into_iter().map(|(q, _, s)| GenTask::K(q, s)));
        }
        run_points(&tasks, |i, t| match *t {
            GenTask::Reflection(q, s) => Self::reflections(q, s, config.seed.wrapping_add(i as u64)),
            GenTask::Idempotent(q, s) => Self::idempotents(q, s),
            GenTask::Sl2(q, s) => Self::sl2(q, s),
            GenTask::Gauss(q) => Ok(vec![Self::gauss(q)?]),
            GenTask::HasseDavenport(p, l) => Ok(vec![Self::hasse_davenport(p, l)?]),
            GenTask::K(q, s) => Ok(vec![Self::k_constants(q, s)?]),
        })
    }
}

pub struct AppendixSuite;

impl Suite for AppendixSuite {
    fn name(&self) -> &'static str {
        "appendix"
    }
    fn description(&self) -> &'static str {
        "g_t ⋆ α_t = γ_{2/t} ⋆ β and the accompanying Gauss-constant identity"
    }
    fn run(&self, config: &SuiteConfig) -> Result<Vec<Check>> {
        let mut pts = Vec::new();
        for q in config.q_values(&[3, 5, 7, 9]) {
            for spec in ["odd:1", "plus:2", "minus:2", "odd:3"] {
                pts.push((q, 1, spec));
            }
        }
        let pts = filter_points(&config.grid, pts)?;
        let mut tasks = Vec::new();
        for (q, _, spec) in pts {
            let f = field_of_order(q)?;
            for t in f.units().filter(|&t| t != f.one()) {
                if allows(&config.grid, "t", t.index() as i64)? {
                    tasks.push((q, spec, t.index()));
                }
            }
        }
        run_points(&tasks, |_, &(q, spec, t)| {
            let ctx = context(q, 1, spec, 1)?;
            let t = ctx.field().elem(t)?;
            let c = appendix_check(&ctx, t)?;
            let ps = with(point_params(q, 1, spec), "t", json!(t.to_string()));
            let detail = format!("support {}", c.support);
            Ok(vec![
                Check::new("appendix", "cleared", ps.clone(), c.cleared, detail.clone()),
                Check::new("appendix", "normalized", ps.clone(), c.normalized, detail),
                Check::new("appendix", "constants", ps, c.constants, ""),
            ])
        })
    }
}

pub struct OrbitsSuite;

/// Cases for the three-way orbit count.
const ORBIT_CASES: [(Side, u64, usize, &str); 8] = [
    (Side::Sp, 3, 1, "odd:1"),
    (Side::Sp, 3, 2, "odd:1"),
    (Side::Sp, 3, 2, "plus:2"),
    (Side::Sp, 3, 2, "minus:2"),
    (Side::Sp, 5, 1, "odd:1"),
    (Side::O, 3, 1, "plus:4"),
    (Side::O, 3, 1, "odd:5"),
    (Side::Sp, 3, 1, "plus:2"),
];

const GROUP_CASES: [(GroupKind, u64, usize); 6] = [
    (GroupKind::Sp, 3, 1),
    (GroupKind::Sp, 5, 1),
    (GroupKind::Oodd, 3, 1),
    (GroupKind::Oplus, 3, 1),
    (GroupKind::Ominus, 3, 1),
    (GroupKind::Oplus, 3, 2),
];

enum OrbitTask {
    Count(Side, u64, usize, &'static str),
    Order(GroupKind, u64, usize),
}

impl OrbitsSuite {
    fn count(side: Side, q: u64, half: usize, spec: &str) -> Result<Check> {
        let f = field_of_order(q)?;
        let problem = OrbitProblem::new(side, f.clone(), half, SymmetricForm::parse(f, spec)?)?;
        let ps = with(point_params(q, half, spec), "side", json!(side.to_string()));
        let raw = descriptor_count(side, q, problem.tuple_len())?;
        let realizable = census(&problem)?;
        let burnside = burnside_count(&problem.group()?, problem.tuple_len())?;
        if problem.stable() {
            let closed = stable_orbit_count(&problem)?;
            let pass = raw == realizable && realizable == closed && closed == burnside;
            let detail = format!("descriptors {raw}, closed form {closed}, burnside {burnside}");
            Ok(Check::new("orbits", "three-way", ps, pass, detail))
        } else {
            let detail = format!("unstable: realizable {realizable}, burnside {burnside}, all descriptors {raw}");
            Ok(Check::new("orbits", "census-vs-burnside", ps, realizable == burnside, detail))
        }
    }

    fn order(kind: GroupKind, q: u64, size: usize) -> Result<Check> {
        let g = build_group(kind, field_of_order(q)?, size)?;
        let order = g.order()?;
        let want = g.expected_order()?;
        let ps = params(&[("group", json!(g.classical().to_string())), ("q", json!(q))]);
        let pass = want == order.into() && g.preserves_form();
        Ok(Check::new("orbits", "group-order", ps, pass, format!("closure {order}, formula {want}")))
    }
}

impl Suite for OrbitsSuite {
    fn name(&self) -> &'static str {
        "orbits"
    }
    fn description(&self) -> &'static str {
        "descriptor census vs closed form vs Burnside, and group orders"
    }
    fn run(&self, config: &SuiteConfig) -> Result<Vec<Check>> {
        let grid = &config.grid;
        let parts = grid.strings("part", &["counts", "groups"])?;
        let mut tasks = Vec::new();
        if parts.iter().any(|p| p == "counts") {
            for (side, q, half, spec) in ORBIT_CASES {
                let q_ok = config.qs.as_ref().is_none_or(|qs| qs.contains(&q));
                if q_ok && allows_str(grid, "side", &side.to_string())? && !filter_points(grid, vec![(q, half, spec)])?.is_empty() {
                    tasks.push(OrbitTask::Count(side, q, half, spec));
                }
            }
        }
        if parts.iter().any(|p| p == "groups") {
            for (kind, q, size) in GROUP_CASES {
                let q_ok = config.qs.as_ref().is_none_or(|qs| qs.contains(&q));
                if q_ok && allows(grid, "q", q as i64)? {
                    tasks.push(OrbitTask::Order(kind, q, size));
                }
            }
        }
        run_points(&tasks, |_, t| match *t {
            OrbitTask::Count(side, q, half, spec) => Ok(vec![Self::count(side, q, half, spec)?]),
            OrbitTask::Order(kind, q, size) => Ok(vec![Self::order(kind, q, size)?]),
        })
    }
}

pub struct IdentitiesSuite;

impl Suite for IdentitiesSuite {
    fn name(&self) -> &'static str {
        "identities"
    }
    fn description(&self) -> &'static str {
        "q-binomial and dimension identities over their default grids"
    }
    fn run(&self, config: &SuiteConfig) -> Result<Vec<Check>> {
        let mut grid = config.grid.clone();
        if let Some(qs) = &config.qs {
            grid = grid.with_default("q", &qs.iter().map(u64::to_string).collect::<Vec<_>>());
        }
        let names = grid.strings("identity", &[])?;
        let mut out = Vec::new();
        for id in identity_registry() {
            if !names.is_empty() && !names.iter().any(|n| n == id.name()) {
                continue;
            }
            for row in id.rows(&grid)? {
                let detail = format!("{} = {}", row.lhs, row.rhs);
                out.push(Check::new("identities", id.name(), row.params, row.pass, detail));
            }
        }
        Ok(out)
    }
}

