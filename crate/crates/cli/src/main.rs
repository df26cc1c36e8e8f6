use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use oscillator_core::error::{Error, Result};
use oscillator_core::fields::field_of_order;
use oscillator_core::forms::{SymmetricForm, SEED_ENV};
use oscillator_core::grid::Grid;
use oscillator_core::generators::{k_closed_form, k_constant};
use oscillator_core::linalg;
use oscillator_core::orbits::{
    burnside_count, burnside_count_points, census, descriptor_count, stable_orbit_count, OrbitProblem, Side,
};
use oscillator_core::qcomb::{find_identity, theorem_dimension_check};
use oscillator_core::scalars::{gauss_sum, CycScalar};
use oscillator_core::verify::{self, find_suites, Check, Report, SuiteConfig};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SIZE: u8 = 3;

#[derive(Parser)]
#[command(name = "osc", version, about = "Exact checks for the finite-field oscillator representation")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// JSON file with named grids: {"grids": {"name": "p<=3,r<=5"}}; use as --grid @name.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(clap::Args)]
struct SpaceArgs {
    /// Field size.
    #[arg(long)]
    q: u64,
    /// Half the dimension of V.
    #[arg(long = "N", default_value_t = 1)]
    half: usize,
    /// Dimension of W; the form defaults to odd:n or plus:n.
    #[arg(long = "n")]
    n: Option<usize>,
    /// Form on W: odd:n, odd:n:ns, plus:n, minus:n or a JSON Gram matrix.
    #[arg(long)]
    form: Option<String>,
}

impl SpaceArgs {
    fn form_spec(&self) -> Result<String> {
        match (&self.form, self.n) {
            (Some(f), _) => Ok(f.clone()),
            (None, Some(n)) if n % 2 == 1 => Ok(format!("odd:{n}")),
            (None, Some(n)) => Ok(format!("plus:{n}")),
            (None, None) => Err(Error::Parse("give --n or --form".into())),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run named verification suites.
    Verify {
        /// all, star, generators, appendix, orbits or identities.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Comma-separated field sizes replacing the suite defaults.
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<u64>>,
        /// Grid clauses such as "n<=2,type=plus|minus", or @name from --config.
        #[arg(long)]
        grid: Option<String>,
        /// Seed for random elements; defaults to $OSC_SEED or 0.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Count orbits of tuples under the classical group.
    Orbits {
        #[arg(long)]
        side: Side,
        #[command(flatten)]
        space: SpaceArgs,
        /// Also count by Burnside over the generated group.
        #[arg(long)]
        oracle: bool,
        /// Also run the point-by-point Burnside count.
        #[arg(long)]
        points: bool,
    },
    /// Evaluate a q-identity over a grid.
    Identity {
        #[arg(long)]
        name: String,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Quadratic Gauss sums G(c) = Σ ψ(c·x²), or K(c) = Σ_w ψ(c·B(w,w)) given --n or --form.
    Gauss {
        #[arg(long)]
        q: u64,
        #[arg(long = "n")]
        n: Option<usize>,
        #[arg(long)]
        form: Option<String>,
        /// Field element index; every c (every unit for G) when omitted.
        #[arg(long)]
        c: Option<u32>,
        #[arg(long = "char", default_value_t = 1, allow_hyphen_values = true)]
        char_param: i64,
    },
    /// Apply the model operator of an element to a model basis vector.
    Act {
        /// unit, basis:IDX, f:λ, reflection:λ, idempotent:λ;μ, g:t, alpha:t, beta or gamma:s.
        #[arg(long)]
        element: String,
        /// #IDX or the comma-separated entries of a matrix in Λ₋ ⊗ W.
        #[arg(long)]
        vector: String,
        #[command(flatten)]
        space: SpaceArgs,
        /// Additive character parameter a of ψ_a.
        #[arg(long = "char", default_value_t = 1, allow_hyphen_values = true)]
        char_param: i64,
    },
    /// Dimension of the fixed subalgebra against the decomposition formula.
    Enddim {
        #[arg(long)]
        side: Side,
        #[command(flatten)]
        space: SpaceArgs,
    },
}

/// Rows of key/value output for the non-suite subcommands.
struct Table {
    rows: Vec<Map<String, Value>>,
    pass: bool,
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let body = json!({ "schema": verify::SCHEMA, "pass": self.pass, "rows": self.rows });
                format!("{}\n", serde_json::to_string_pretty(&body).expect("serializable"))
            }
            Format::Csv => {
                let mut keys: Vec<&String> = Vec::new();
                for r in &self.rows {
                    for k in r.keys() {
                        if !keys.contains(&k) {
                            keys.push(k);
                        }
                    }
                }
                let mut out = keys.iter().map(|k| csv_field(k)).collect::<Vec<_>>().join(",") + "\n";
                for r in &self.rows {
                    let cells: Vec<String> = keys.iter().map(|k| csv_field(&plain(r.get(*k).unwrap_or(&Value::Null)))).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Text => {
                let mut out = String::new();
                for r in &self.rows {
                    let line: Vec<String> = r.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
                    out.push_str(&line.join(" "));
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.to_json()).expect("serializable")),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    }
}

fn resolve_grid(spec: Option<&str>, config: Option<&PathBuf>) -> Result<Grid> {
    let Some(spec) = spec else {
        return Ok(Grid::default());
    };
    let Some(name) = spec.strip_prefix('@') else {
        return spec.parse();
    };
    let path = config.ok_or_else(|| Error::Parse(format!("grid @{name} needs --config")))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let json: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let grids = json.get("grids").unwrap_or(&json);
    grids
        .get(name)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse(format!("no grid named {name:?} in {}", path.display())))?
        .parse()
}

fn seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.parse().map_err(|_| Error::Parse(format!("{SEED_ENV}={v:?} is not an integer"))),
        Err(_) => Ok(0),
    }
}

fn problem(side: Side, space: &SpaceArgs) -> Result<(OrbitProblem, String)> {
    let f = field_of_order(space.q)?;
    let spec = space.form_spec()?;
    let form = SymmetricForm::parse(f.clone(), &spec)?;
    Ok((OrbitProblem::new(side, f, space.half, form)?, spec))
}

fn space_row(side: Side, space: &SpaceArgs, spec: &str) -> Map<String, Value> {
    verify::params(&[("side", json!(side.to_string())), ("q", json!(space.q)), ("N", json!(space.half)), ("W", json!(spec))])
}

/// Output and whether every assertion passed.
fn run(cli: &Cli) -> Result<(String, bool)> {
    let format = cli.format;
    match &cli.cmd {
        Cmd::Verify { suite, q, grid, seed: s } => {
            let config = SuiteConfig { qs: q.clone(), grid: resolve_grid(grid.as_deref(), cli.config.as_ref())?, seed: seed(*s)? };
            let report = Report::run(&find_suites(suite)?, &config)?;
            Ok((render_report(&report, format), report.all_pass()))
        }
        Cmd::Identity { name, grid } => {
            let id = find_identity(name)?;
            let grid = resolve_grid(grid.as_deref(), cli.config.as_ref())?;
            let checks = id
                .rows(&grid)?
                .into_iter()
                .map(|r| {
                    let detail = format!("{} = {}", r.lhs, r.rhs);
                    Check::new("identity", id.name(), r.params, r.pass, detail)
                })
                .collect();
            let report = Report { checks };
            Ok((render_report(&report, format), report.all_pass()))
        }
        Cmd::Orbits { side, space, oracle, points } => {
            let (p, spec) = problem(*side, space)?;
            let mut row = space_row(*side, space, &spec);
            let realizable = census(&p)?;
            let mut counts = vec![realizable];
            row.insert("stable".into(), json!(p.stable()));
            row.insert("descriptor_count".into(), json!(realizable as u64));
            row.insert("all_descriptors".into(), json!(descriptor_count(*side, space.q, p.tuple_len())? as u64));
            if p.stable() {
                let c = stable_orbit_count(&p)?;
                counts.push(c);
                row.insert("closed_form".into(), json!(c as u64));
            }
            if *oracle || *points {
                let g = p.group()?;
                if *oracle {
                    let b = burnside_count(&g, p.tuple_len())?;
                    counts.push(b);
                    row.insert("burnside".into(), json!(b as u64));
                }
                if *points {
                    let b = burnside_count_points(&g, p.tuple_len())?;
                    counts.push(b);
                    row.insert("burnside_points".into(), json!(b as u64));
                }
            }
            let pass = counts.iter().all(|&c| c == realizable);
            row.insert("agree".into(), json!(pass));
            Ok((Table { rows: vec![row], pass }.render(format), pass))
        }
        Cmd::Gauss { q, n, form, c, char_param } if n.is_some() || form.is_some() => {
            let space = SpaceArgs { q: *q, half: 1, n: *n, form: form.clone() };
            let spec = space.form_spec()?;
            let ctx = verify::context(*q, 1, &spec, *char_param)?;
            let f = ctx.field();
            let cs = match c {
                Some(c) => vec![f.elem(*c)?],
                None => f.elements().collect(),
            };
            let mut rows = Vec::new();
            let mut pass = true;
            for c in cs {
                let k = k_constant(&ctx, c).scalar(*q);
                let closed = k_closed_form(&ctx, c);
                let ok = k == closed;
                pass &= ok;
                let (re, im) = k.to_complex();
                rows.push(verify::params(&[
                    ("q", json!(q)),
                    ("W", json!(spec)),
                    ("c", json!(c.to_string())),
                    ("K", json!(k.to_string())),
                    ("closed_form", json!(closed.to_string())),
                    ("numeric", json!(format!("{re:.6}{im:+.6}i"))),
                    ("pass", json!(ok)),
                ]));
            }
            Ok((Table { rows, pass }.render(format), pass))
        }
        Cmd::Gauss { q, c, .. } => {
            let f = field_of_order(*q)?;
            let cs = match c {
                Some(c) => vec![f.elem(*c)?],
                None => f.units().collect(),
            };
            let eps = f.quad_char(f.neg(f.one())) as i64;
            let mut rows = Vec::new();
            let mut pass = true;
            for c in cs {
                let g = gauss_sum(&f, c);
                let sq = &g * &g;
                let ok = sq == CycScalar::from_int(f.p(), *q, eps * *q as i64);
                pass &= ok;
                let (re, im) = g.to_complex();
                rows.push(verify::params(&[
                    ("q", json!(q)),
                    ("c", json!(c.to_string())),
                    ("gauss_sum", json!(g.to_string())),
                    ("numeric", json!(format!("{re:.6}{im:+.6}i"))),
                    ("square", json!(sq.to_string())),
                    ("expected_square", json!(eps * *q as i64)),
                    ("pass", json!(ok)),
                ]));
            }
            Ok((Table { rows, pass }.render(format), pass))
        }
        Cmd::Act { element, vector, space, char_param } => {
            let ctx = verify::context(space.q, space.half, &space.form_spec()?, *char_param)?;
            let x = verify::parse_element(&ctx, element)?;
            let v = verify::parse_model_vector(&ctx, vector)?;
            let width = ctx.half() * ctx.n();
            let show = |i: u64| linalg::decode(ctx.field(), i, width).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
            let rows = x
                .apply_to_basis(v)?
                .into_iter()
                .map(|(i, c)| {
                    verify::params(&[("input", json!(v)), ("index", json!(i)), ("vector", json!(show(i))), ("coeff", json!(c.to_string()))])
                })
                .collect();
            Ok((Table { rows, pass: true }.render(format), true))
        }
        Cmd::Enddim { side, space } => {
            let (p, spec) = problem(*side, space)?;
            let mut row = space_row(*side, space, &spec);
            let mut pass = true;
            if p.stable() {
                let t = theorem_dimension_check(*side, p.field(), space.half, &p.form)?;
                pass = t.pass();
                row.insert("census".into(), json!(t.census.to_string()));
                row.insert("formula".into(), json!(t.formula.to_string()));
            } else {
                row.insert("census".into(), json!(census(&p)?.to_string()));
                row.insert("formula".into(), Value::Null);
            }
            row.insert("stable".into(), json!(p.stable()));
            row.insert("pass".into(), json!(pass));
            Ok((Table { rows: vec![row], pass }.render(format), pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, pass)) => {
            print!("{out}");
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("osc: {e}");
            let code = if matches!(e, Error::SizeLimit(_)) { EXIT_SIZE } else { EXIT_USAGE };
            ExitCode::from(code)
        }
    }
}
