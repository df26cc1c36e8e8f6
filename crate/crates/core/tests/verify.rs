use oscillator_core::grid::Grid;
use oscillator_core::verify::{
    context, find_suites, parse_element, parse_model_vector, random_element, suite_registry, Report, SuiteConfig, SCHEMA,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(qs: Option<Vec<u64>>, grid: &str, seed: u64) -> SuiteConfig {
    SuiteConfig { qs, grid: grid.parse().unwrap(), seed }
}

fn run(suite: &str, c: &SuiteConfig) -> Report {
    Report::run(&find_suites(suite).unwrap(), c).unwrap()
}

#[test]
fn registry_names_are_unique() {
    let names: Vec<_> = suite_registry().iter().map(|s| s.name()).collect();
    assert_eq!(names, ["star", "generators", "appendix", "orbits", "identities"]);
    assert_eq!(find_suites("all").unwrap().len(), names.len());
    assert!(find_suites("bogus").is_err());
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let c = config(Some(vec![3]), "pairs=5", 11);
    let reference = run("star", &c).to_json();
    for k in [1, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(k).build().unwrap();
        let r = pool.install(|| run("star", &c));
        assert_eq!(r.to_json(), reference, "{k} threads");
    }
}

#[test]
fn seed_changes_samples_but_not_verdicts() {
    let a = run("star", &config(Some(vec![3]), "pairs=5", 1));
    let b = run("star", &config(Some(vec![3]), "pairs=5", 1));
    let c = run("star", &config(Some(vec![3]), "pairs=5", 2));
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.all_pass() && c.all_pass());
    assert_eq!(a.checks.len(), c.checks.len());
}

#[test]
fn json_report_shape() {
    let r = run("identities", &config(None, "identity=halving", 0));
    let v = r.to_json();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["passed"], r.checks.len());
    assert_eq!(v["failed"], 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), r.checks.len());
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    let text = r.to_text();
    assert!(text.ends_with(&format!("{} checks, 0 failed\n", r.checks.len())));
    let csv = r.to_csv();
    assert_eq!(csv.lines().count(), r.checks.len() + 1);
}

#[test]
fn grid_filters_select_points() {
    let all = run("appendix", &config(Some(vec![3]), "", 0));
    let odd = run("appendix", &config(Some(vec![3]), "type=odd,n<=1", 0));
    assert!(odd.checks.len() < all.checks.len());
    assert!(odd.checks.iter().all(|c| c.params["W"] == "odd:1"));
    let q5 = run("appendix", &config(None, "q=5,n=2,type=plus", 0));
    assert!(q5.checks.iter().all(|c| c.params["q"] == 5 && c.params["W"] == "plus:2"));
    assert_eq!(q5.checks.len(), 3 * 3);
}

#[test]
fn orbit_parts() {
    let groups = run("orbits", &config(None, "part=groups", 0));
    assert!(groups.checks.iter().all(|c| c.name == "group-order"));
    assert!(groups.all_pass());
}

#[test]
fn bad_grids_are_rejected() {
    assert!("n".parse::<Grid>().is_err());
    assert!("n<=x".parse::<Grid>().is_err());
    assert!("type=odd,type<3".parse::<Grid>().is_err());
}

#[test]
fn element_specs() {
    let ctx = context(3, 1, "odd:1", 1).unwrap();
    let unit = parse_element(&ctx, "unit").unwrap();
    let beta = parse_element(&ctx, "beta").unwrap();
    assert_eq!(unit.star(&beta).unwrap(), beta);
    assert_eq!(parse_element(&ctx, "basis:4").unwrap().support(), &[4]);
    let r = parse_element(&ctx, "reflection:1").unwrap();
    assert_eq!(r.star(&r).unwrap().to_model().unwrap(), unit.to_model().unwrap());
    assert_eq!(parse_element(&ctx, "g:-1").unwrap(), parse_element(&ctx, "g:2").unwrap());
    for bad in ["alpha:1", "gamma:0", "g", "nope", "basis:x", "f:0"] {
        assert!(parse_element(&ctx, bad).is_err(), "{bad}");
    }

    let ctx = context(3, 1, "plus:2", 1).unwrap();
    assert_eq!(parse_model_vector(&ctx, "#8").unwrap(), 8);
    assert_eq!(parse_model_vector(&ctx, "0,0").unwrap(), 0);
    assert!(parse_model_vector(&ctx, "#9").is_err());
    assert!(parse_model_vector(&ctx, "1").is_err());
}

#[test]
fn random_elements_are_reproducible() {
    let ctx = context(5, 1, "odd:1", 2).unwrap();
    let a = random_element(&ctx, &mut ChaCha8Rng::seed_from_u64(9), 6).unwrap();
    let b = random_element(&ctx, &mut ChaCha8Rng::seed_from_u64(9), 6).unwrap();
    assert_eq!(a, b);
    assert!(!a.is_empty() && a.len() <= 6);
}
