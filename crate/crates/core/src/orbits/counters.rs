//! Interchangeable orbit-counting strategies, selected by name.

use super::{burnside_count, burnside_count_points, census, stable_orbit_count, OrbitProblem};
use crate::error::{Error, Result};

pub trait OrbitCounter: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn count(&self, problem: &OrbitProblem) -> Result<u128>;
}

struct Descriptors;
struct ClosedForm;
struct Burnside;
struct BurnsidePoints;

impl OrbitCounter for Descriptors {
    fn name(&self) -> &'static str {
        "descriptors"
    }
    fn description(&self) -> &'static str {
        "realizable (RREF, Gram) descriptors"
    }
    fn count(&self, problem: &OrbitProblem) -> Result<u128> {
        census(problem)
    }
}

impl OrbitCounter for ClosedForm {
    fn name(&self) -> &'static str {
        "closed-form"
    }
    fn description(&self) -> &'static str {
        "stable-range product formula"
    }
    fn count(&self, problem: &OrbitProblem) -> Result<u128> {
        stable_orbit_count(problem)
    }
}

impl OrbitCounter for Burnside {
    fn name(&self) -> &'static str {
        "burnside"
    }
    fn description(&self) -> &'static str {
        "Burnside average over the generated group, fixed points from kernels"
    }
    fn count(&self, problem: &OrbitProblem) -> Result<u128> {
        burnside_count(&problem.group()?, problem.tuple_len())
    }
}

impl OrbitCounter for BurnsidePoints {
    fn name(&self) -> &'static str {
        "burnside-points"
    }
    fn description(&self) -> &'static str {
        "Burnside average with fixed points counted point by point"
    }
    fn count(&self, problem: &OrbitProblem) -> Result<u128> {
        burnside_count_points(&problem.group()?, problem.tuple_len())
    }
}

pub fn counter_registry() -> Vec<Box<dyn OrbitCounter>> {
    vec![Box::new(Descriptors), Box::new(ClosedForm), Box::new(Burnside), Box::new(BurnsidePoints)]
}

pub fn find_counter(name: &str) -> Result<Box<dyn OrbitCounter>> {
    counter_registry()
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| Error::Parse(format!("unknown orbit counter {name:?}")))
}
