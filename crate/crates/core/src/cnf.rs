//! Clause database and the tableau variable catalog.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("variable {var} exceeds declared count {nvars}")]
    VariableOutOfRange { var: u32, nvars: u32 },
    #[error("variable 0 is not a valid literal")]
    ZeroVariable,
    #[error("assignment covers {got} variables, formula has {expected}")]
    PartialAssignment { got: usize, expected: u32 },
    #[error("coordinate {0} is outside the tableau")]
    CoordinateOutOfRange(Coord),
    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),
}

/// A possibly negated propositional variable. Variables are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: u32,
    negated: bool,
}

impl Literal {
    pub fn new(var: u32, negated: bool) -> Literal {
        assert!(var >= 1, "variables are numbered from 1");
        Literal { var, negated }
    }

    pub fn pos(var: u32) -> Literal {
        Literal::new(var, false)
    }

    pub fn neg(var: u32) -> Literal {
        Literal::new(var, true)
    }

    /// From a signed DIMACS integer.
    pub fn from_dimacs(n: i64) -> Result<Literal, CnfError> {
        if n == 0 {
            return Err(CnfError::ZeroVariable);
        }
        let var = u32::try_from(n.unsigned_abs()).map_err(|_| CnfError::VariableOutOfRange {
            var: u32::MAX,
            nvars: u32::MAX,
        })?;
        Ok(Literal::new(var, n < 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn negate(self) -> Literal {
        Literal {
            negated: !self.negated,
            ..self
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals. Repeated literals are merged on construction,
/// keeping first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause(Vec<Literal>);

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Clause {
        let mut out: Vec<Literal> = Vec::new();
        for l in lits {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Clause(out)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.0.len() == 1
    }

    pub fn max_var(&self) -> u32 {
        self.0.iter().map(|l| l.var).max().unwrap_or(0)
    }
}

impl<const N: usize> From<[i64; N]> for Clause {
    fn from(lits: [i64; N]) -> Clause {
        Clause::new(lits.into_iter().map(|n| Literal::from_dimacs(n).unwrap()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfInstance {
    nvars: u32,
    clauses: Vec<Clause>,
}

impl CnfInstance {
    pub fn new(nvars: u32, clauses: Vec<Clause>) -> Result<CnfInstance, CnfError> {
        for c in &clauses {
            let var = c.max_var();
            if var > nvars {
                return Err(CnfError::VariableOutOfRange { var, nvars });
            }
        }
        Ok(CnfInstance { nvars, clauses })
    }

    pub fn nvars(&self) -> u32 {
        self.nvars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn without_clauses(&self, range: std::ops::Range<usize>) -> CnfInstance {
        let clauses = self
            .clauses
            .iter()
            .enumerate()
            .filter(|(i, _)| !range.contains(i))
            .map(|(_, c)| c.clone())
            .collect();
        CnfInstance {
            nvars: self.nvars,
            clauses,
        }
    }
}

/// A total truth assignment over variables `1..=nvars`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn all_false(nvars: u32) -> Assignment {
        Assignment(vec![false; nvars as usize])
    }

    pub fn from_values(values: Vec<bool>) -> Assignment {
        Assignment(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self, var: u32) -> bool {
        self.0[var as usize - 1]
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.0[var as usize - 1] = value;
    }

    pub fn satisfies(&self, lit: Literal) -> bool {
        self.value(lit.var) != lit.negated
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    /// Signed literals, one per variable, in variable order.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &v)| Literal::new(i as u32 + 1, !v))
    }
}

/// True iff every clause has a true literal. Linear in the formula size.
pub fn evaluate(f: &CnfInstance, a: &Assignment) -> Result<bool, CnfError> {
    if a.len() != f.nvars as usize {
        return Err(CnfError::PartialAssignment {
            got: a.len(),
            expected: f.nvars,
        });
    }
    Ok(f.clauses
        .iter()
        .all(|c| c.literals().iter().any(|&l| a.satisfies(l))))
}

/// A tableau coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    /// At time `i` the machine is in state `k`.
    Q { i: u32, k: u32 },
    /// At time `i` the head scans cell `j`.
    H { i: u32, j: i64 },
    /// At time `i` cell `j` holds symbol `k`.
    S { i: u32, j: i64, k: u32 },
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Coord::Q { i, k } => write!(f, "Q[{i},{k}]"),
            Coord::H { i, j } => write!(f, "H[{i},{j}]"),
            Coord::S { i, j, k } => write!(f, "S[{i},{j},{k}]"),
        }
    }
}

/// Bijection between tableau coordinates and variable numbers.
///
/// Time ranges over `0..=p`, cells over `-p..=p+1`, states over `0..=r` and
/// symbols over `0..=v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarCatalog {
    p: u32,
    r: u32,
    v: u32,
    coords: Vec<Coord>,
    index: HashMap<Coord, u32>,
}

/// `(p+1)(r+1) + (p+1)(2p+2) + (p+1)(2p+2)(v+1)`.
pub fn catalog_size(p: u32, r: u32, v: u32) -> u64 {
    let (p, r, v) = (p as u64, r as u64, v as u64);
    (p + 1) * (r + 1) + (p + 1) * (2 * p + 2) + (p + 1) * (2 * p + 2) * (v + 1)
}

/// Canonical numbering: every Q, then every H, then every S, each in
/// lexicographic coordinate order, numbered from 1.
pub fn build_catalog(p: u32, r: u32, v: u32) -> VarCatalog {
    let lo = -(p as i64);
    let hi = p as i64 + 1;
    let mut coords = Vec::with_capacity(catalog_size(p, r, v) as usize);
    for i in 0..=p {
        coords.extend((0..=r).map(|k| Coord::Q { i, k }));
    }
    for i in 0..=p {
        coords.extend((lo..=hi).map(|j| Coord::H { i, j }));
    }
    for i in 0..=p {
        for j in lo..=hi {
            coords.extend((0..=v).map(|k| Coord::S { i, j, k }));
        }
    }
    VarCatalog::from_coords(p, r, v, coords).expect("canonical catalog is well formed")
}

impl VarCatalog {
    /// Catalog whose variable `n` is `coords[n - 1]`. The coordinates must
    /// be distinct and within the declared ranges.
    pub fn from_coords(p: u32, r: u32, v: u32, coords: Vec<Coord>) -> Result<VarCatalog, CnfError> {
        let mut index = HashMap::with_capacity(coords.len());
        let cat_bounds = (p, r, v);
        for (n, &c) in coords.iter().enumerate() {
            if !in_range(cat_bounds, c) {
                return Err(CnfError::CoordinateOutOfRange(c));
            }
            if index.insert(c, n as u32 + 1).is_some() {
                return Err(CnfError::InvalidCatalog(format!("duplicate coordinate {c}")));
            }
        }
        Ok(VarCatalog {
            p,
            r,
            v,
            coords,
            index,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn cells(&self) -> std::ops::RangeInclusive<i64> {
        -(self.p as i64)..=self.p as i64 + 1
    }

    pub fn lookup(&self, c: Coord) -> Result<u32, CnfError> {
        self.index
            .get(&c)
            .copied()
            .ok_or(CnfError::CoordinateOutOfRange(c))
    }

    pub fn reverse_lookup(&self, var: u32) -> Option<Coord> {
        var.checked_sub(1)
            .and_then(|n| self.coords.get(n as usize))
            .copied()
    }

    pub(crate) fn q(&self, i: u32, k: u32) -> u32 {
        self.index[&Coord::Q { i, k }]
    }

    pub(crate) fn h(&self, i: u32, j: i64) -> u32 {
        self.index[&Coord::H { i, j }]
    }

    pub(crate) fn s(&self, i: u32, j: i64, k: u32) -> u32 {
        self.index[&Coord::S { i, j, k }]
    }
}

fn in_range((p, r, v): (u32, u32, u32), c: Coord) -> bool {
    let cell_ok = |j: i64| j >= -(p as i64) && j <= p as i64 + 1;
    match c {
        Coord::Q { i, k } => i <= p && k <= r,
        Coord::H { i, j } => i <= p && cell_ok(j),
        Coord::S { i, j, k } => i <= p && cell_ok(j) && k <= v,
    }
}
