//! Parameter grids such as `p<=3,r<=5` or `q=3|5,n=1..4`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Clause {
    Range { lo: Option<i64>, hi: Option<i64> },
    Set(Vec<String>),
}

/// Per-variable restrictions; variables without a clause keep the caller's default.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grid {
    clauses: BTreeMap<String, Clause>,
}

fn int(s: &str, clause: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("expected an integer in grid clause {clause:?}")))
}

impl Grid {
    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.clauses.keys().map(String::as_str)
    }

    /// Integer values of `name`; bounds given in the grid replace the defaults.
    pub fn ints(&self, name: &str, lo: i64, hi: i64) -> Result<Vec<i64>> {
        match self.clauses.get(name) {
            None => Ok((lo..=hi).collect()),
            Some(Clause::Range { lo: l, hi: h }) => Ok((l.unwrap_or(lo)..=h.unwrap_or(hi)).collect()),
            Some(Clause::Set(vals)) => vals.iter().map(|v| int(v, name)).collect(),
        }
    }

    /// String values of `name`.
    pub fn strings(&self, name: &str, default: &[&str]) -> Result<Vec<String>> {
        match self.clauses.get(name) {
            None => Ok(default.iter().map(|s| s.to_string()).collect()),
            Some(Clause::Set(vals)) => Ok(vals.clone()),
            Some(Clause::Range { .. }) => Err(Error::Parse(format!("{name} takes a list of values, not a range"))),
        }
    }

    /// Adds `name=v` unless the grid already constrains `name`.
    pub fn with_default(mut self, name: &str, values: &[String]) -> Self {
        self.clauses.entry(name.to_string()).or_insert_with(|| Clause::Set(values.to_vec()));
        self
    }
}

impl FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut grid = Grid::default();
        for clause in s.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let ops = ["<=", ">=", "<", ">", "="];
            let (pos, op) = ops
                .iter()
                .filter_map(|op| clause.find(op).map(|p| (p, *op)))
                .min_by_key(|&(p, op)| (p, std::cmp::Reverse(op.len())))
                .ok_or_else(|| Error::Parse(format!("grid clause {clause:?} has no comparison")))?;
            let name = clause[..pos].trim().to_string();
            let rhs = clause[pos + op.len()..].trim();
            if name.is_empty() || rhs.is_empty() {
                return Err(Error::Parse(format!("grid clause {clause:?}")));
            }
            let new = match op {
                "<=" => Clause::Range { lo: None, hi: Some(int(rhs, clause)?) },
                "<" => Clause::Range { lo: None, hi: Some(int(rhs, clause)? - 1) },
                ">=" => Clause::Range { lo: Some(int(rhs, clause)?), hi: None },
                ">" => Clause::Range { lo: Some(int(rhs, clause)? + 1), hi: None },
                _ => match rhs.split_once("..") {
                    Some((a, b)) => Clause::Range { lo: Some(int(a, clause)?), hi: Some(int(b, clause)?) },
                    None => Clause::Set(rhs.split('|').map(|v| v.trim().to_string()).collect()),
                },
            };
            let merged = match (grid.clauses.remove(&name), new) {
                (None, c) => c,
                (Some(Clause::Range { lo: l1, hi: h1 }), Clause::Range { lo: l2, hi: h2 }) => {
                    Clause::Range { lo: l2.or(l1), hi: h2.or(h1) }
                }
                _ => return Err(Error::Parse(format!("conflicting clauses for {name}"))),
            };
            grid.clauses.insert(name, merged);
        }
        Ok(grid)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|(k, c)| match c {
                Clause::Set(v) => format!("{k}={}", v.join("|")),
                Clause::Range { lo: Some(l), hi: Some(h) } => format!("{k}={l}..{h}"),
                Clause::Range { lo: Some(l), hi: None } => format!("{k}>={l}"),
                Clause::Range { lo: None, hi: Some(h) } => format!("{k}<={h}"),
                Clause::Range { lo: None, hi: None } => String::new(),
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_clauses() {
        let g: Grid = "p<=3, r<5,q=3|5,n=1..4,b>=1".parse().unwrap();
        assert_eq!(g.ints("p", 0, 9).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(g.ints("r", 1, 9).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(g.ints("q", 3, 13).unwrap(), vec![3, 5]);
        assert_eq!(g.ints("n", 0, 9).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(g.ints("b", 0, 2).unwrap(), vec![1, 2]);
        assert_eq!(g.ints("k", 0, 2).unwrap(), vec![0, 1, 2]);
        assert_eq!(g.to_string(), "b>=1,n=1..4,p<=3,q=3|5,r<=4");
        let g: Grid = "p>=1,p<=2".parse().unwrap();
        assert_eq!(g.ints("p", 0, 9).unwrap(), vec![1, 2]);
    }

    #[test]
    fn rejects_garbage() {
        assert!("p".parse::<Grid>().is_err());
        assert!("p<=x".parse::<Grid>().is_err());
        assert!("p=1,p<=2".parse::<Grid>().is_err());
        assert!("".parse::<Grid>().unwrap().is_empty());
    }
}
