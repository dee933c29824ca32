//! DPLL with two-watched-literal unit propagation and chronological
//! backtracking, plus a truth-table oracle for small formulas.
//!
//! Branching always picks the lowest-numbered unassigned variable and tries
//! `false` first, so results are a deterministic function of the formula.

use thiserror::Error;

use crate::cnf::{evaluate, Assignment, CnfInstance, Literal};

/// Largest formula the truth-table scan accepts.
pub const BRUTE_FORCE_MAX_VARS: u32 = 24;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("brute force is limited to {max} variables, formula has {nvars}")]
    TooManyVariables { nvars: u32, max: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat { model: Assignment, stats: Stats },
    Unsat { stats: Stats },
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat { .. })
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            SolveResult::Sat { model, .. } => Some(model),
            SolveResult::Unsat { .. } => None,
        }
    }

    pub fn stats(&self) -> Stats {
        match self {
            SolveResult::Sat { stats, .. } | SolveResult::Unsat { stats } => *stats,
        }
    }
}

/// NP certificate check: every clause holds a true literal.
pub fn check_model(f: &CnfInstance, a: &Assignment) -> bool {
    evaluate(f, a).unwrap_or(false)
}

pub fn solve(f: &CnfInstance) -> SolveResult {
    Solver::new(f).solve()
}

/// Exhaustive scan of all `2^nvars` assignments in increasing binary order,
/// variable 1 being the least significant bit.
pub fn brute_force(f: &CnfInstance) -> Result<SolveResult, SolveError> {
    if f.nvars() > BRUTE_FORCE_MAX_VARS {
        return Err(SolveError::TooManyVariables {
            nvars: f.nvars(),
            max: BRUTE_FORCE_MAX_VARS,
        });
    }
    let n = f.nvars();
    let stats = Stats::default();
    for row in 0u32..(1u32 << n) {
        let a = Assignment::from_values((0..n).map(|b| (row >> b) & 1 == 1).collect());
        if check_model(f, &a) {
            return Ok(SolveResult::Sat { model: a, stats });
        }
    }
    Ok(SolveResult::Unsat { stats })
}

// Literal code: 2 * (var - 1) + negated.
fn code(l: Literal) -> usize {
    2 * (l.var() as usize - 1) + l.is_negated() as usize
}

fn var_of(code: usize) -> usize {
    code >> 1
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Value {
    Unassigned,
    True,
    False,
}

struct Level {
    trail_start: usize,
    flipped: bool,
}

struct Solver {
    nvars: usize,
    clauses: Vec<Vec<usize>>,
    units: Vec<usize>,
    has_empty: bool,
    // watches[lit] lists clauses currently watching `lit`
    watches: Vec<Vec<usize>>,
    values: Vec<Value>,
    trail: Vec<usize>,
    qhead: usize,
    levels: Vec<Level>,
    next_var_hint: usize,
    stats: Stats,
}

impl Solver {
    fn new(f: &CnfInstance) -> Solver {
        let nvars = f.nvars() as usize;
        let mut s = Solver {
            nvars,
            clauses: Vec::new(),
            units: Vec::new(),
            has_empty: false,
            watches: vec![Vec::new(); 2 * nvars],
            values: vec![Value::Unassigned; nvars],
            trail: Vec::with_capacity(nvars),
            qhead: 0,
            levels: Vec::new(),
            next_var_hint: 0,
            stats: Stats::default(),
        };
        for c in f.clauses() {
            let lits: Vec<usize> = c.literals().iter().map(|&l| code(l)).collect();
            match lits.len() {
                0 => s.has_empty = true,
                1 => s.units.push(lits[0]),
                _ => {
                    let idx = s.clauses.len();
                    s.watches[lits[0]].push(idx);
                    s.watches[lits[1]].push(idx);
                    s.clauses.push(lits);
                }
            }
        }
        s
    }

    fn lit_value(&self, lit: usize) -> Value {
        match self.values[var_of(lit)] {
            Value::Unassigned => Value::Unassigned,
            Value::True if lit & 1 == 0 => Value::True,
            Value::False if lit & 1 == 1 => Value::True,
            _ => Value::False,
        }
    }

    /// Makes `lit` true. Returns false if it is already false.
    fn enqueue(&mut self, lit: usize) -> bool {
        match self.lit_value(lit) {
            Value::True => true,
            Value::False => false,
            Value::Unassigned => {
                self.values[var_of(lit)] = if lit & 1 == 0 {
                    Value::True
                } else {
                    Value::False
                };
                self.trail.push(lit);
                true
            }
        }
    }

    /// Propagates to fixpoint. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead] ^ 1;
            self.qhead += 1;
            let mut watchers = std::mem::take(&mut self.watches[falsified]);
            let mut keep = 0;
            let mut conflict = false;
            let mut idx = 0;
            while idx < watchers.len() {
                let ci = watchers[idx];
                idx += 1;
                if conflict {
                    watchers[keep] = ci;
                    keep += 1;
                    continue;
                }
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let other = clause[0];
                // position 1 now holds the falsified watch
                let other_val = match self.values[var_of(other)] {
                    Value::Unassigned => Value::Unassigned,
                    Value::True if other & 1 == 0 => Value::True,
                    Value::False if other & 1 == 1 => Value::True,
                    _ => Value::False,
                };
                if other_val == Value::True {
                    watchers[keep] = ci;
                    keep += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let cand = clause[k];
                    let unfalse = match self.values[var_of(cand)] {
                        Value::Unassigned => true,
                        Value::True => cand & 1 == 0,
                        Value::False => cand & 1 == 1,
                    };
                    if unfalse {
                        clause.swap(1, k);
                        self.watches[cand].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                watchers[keep] = ci;
                keep += 1;
                if other_val == Value::False {
                    conflict = true;
                } else {
                    self.stats.propagations += 1;
                    self.enqueue(other);
                }
            }
            watchers.truncate(keep);
            // watches[falsified] may have gained entries only via other lits
            debug_assert!(self.watches[falsified].is_empty());
            self.watches[falsified] = watchers;
            if conflict {
                return false;
            }
        }
        true
    }

    #[cfg(debug_assertions)]
    fn assert_fixpoint(&self) {
        if self.clauses.len() > 20_000 {
            return;
        }
        for c in &self.clauses {
            let mut unassigned = 0;
            let mut satisfied = false;
            for &l in c {
                match self.lit_value(l) {
                    Value::True => satisfied = true,
                    Value::Unassigned => unassigned += 1,
                    Value::False => {}
                }
            }
            assert!(
                satisfied || unassigned >= 2,
                "propagation left a unit or falsified clause"
            );
        }
    }

    fn backtrack_to(&mut self, trail_len: usize) {
        for &lit in &self.trail[trail_len..] {
            let var = var_of(lit);
            self.values[var] = Value::Unassigned;
            self.next_var_hint = self.next_var_hint.min(var);
        }
        self.trail.truncate(trail_len);
        self.qhead = trail_len;
    }

    fn pick_branch_var(&mut self) -> Option<usize> {
        while self.next_var_hint < self.nvars {
            if self.values[self.next_var_hint] == Value::Unassigned {
                return Some(self.next_var_hint);
            }
            self.next_var_hint += 1;
        }
        None
    }

    fn solve(mut self) -> SolveResult {
        if self.has_empty {
            return SolveResult::Unsat { stats: self.stats };
        }
        let units = std::mem::take(&mut self.units);
        for lit in units {
            if !self.enqueue(lit) {
                self.stats.conflicts += 1;
                return SolveResult::Unsat { stats: self.stats };
            }
        }
        loop {
            if !self.propagate() {
                self.stats.conflicts += 1;
                // undo decisions until one still has an untried polarity
                loop {
                    let Some(level) = self.levels.pop() else {
                        return SolveResult::Unsat { stats: self.stats };
                    };
                    let decided = self.trail[level.trail_start];
                    self.backtrack_to(level.trail_start);
                    if !level.flipped {
                        self.levels.push(Level {
                            trail_start: self.trail.len(),
                            flipped: true,
                        });
                        self.enqueue(decided ^ 1);
                        break;
                    }
                }
                continue;
            }
            #[cfg(debug_assertions)]
            self.assert_fixpoint();
            let Some(var) = self.pick_branch_var() else {
                let model = Assignment::from_values(
                    self.values.iter().map(|&v| v == Value::True).collect(),
                );
                return SolveResult::Sat {
                    model,
                    stats: self.stats,
                };
            };
            self.stats.decisions += 1;
            self.levels.push(Level {
                trail_start: self.trail.len(),
                flipped: false,
            });
            self.enqueue(2 * var + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Clause;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn cnf(nvars: u32, clauses: Vec<Clause>) -> CnfInstance {
        CnfInstance::new(nvars, clauses).unwrap()
    }

    #[test]
    fn vacuous_formula_has_all_false_model() {
        let f = cnf(3, vec![]);
        let r = solve(&f);
        assert_eq!(r.model(), Some(&Assignment::all_false(3)));
    }

    #[test]
    fn complementary_units_are_unsat() {
        let f = cnf(1, vec![Clause::from([1]), Clause::from([-1])]);
        assert!(!solve(&f).is_sat());
        assert!(!brute_force(&f).unwrap().is_sat());
    }

    #[test]
    fn empty_clause_is_unsat() {
        let f = cnf(2, vec![Clause::from([1, 2]), Clause::new([])]);
        assert!(!solve(&f).is_sat());
        assert!(!brute_force(&f).unwrap().is_sat());
    }

    #[test]
    fn brute_force_small_cases() {
        let f = cnf(2, vec![Clause::from([1, 2])]);
        let r = brute_force(&f).unwrap();
        assert!(check_model(&f, r.model().unwrap()));
        // two pigeons, one hole: p1, p2, not both
        let php = cnf(
            2,
            vec![Clause::from([1]), Clause::from([2]), Clause::from([-1, -2])],
        );
        assert!(!brute_force(&php).unwrap().is_sat());
        assert!(!solve(&php).is_sat());
    }

    #[test]
    fn brute_force_guard() {
        let f = cnf(25, vec![]);
        assert_eq!(
            brute_force(&f),
            Err(SolveError::TooManyVariables { nvars: 25, max: 24 })
        );
    }

    #[test]
    fn default_polarity_is_false() {
        let f = cnf(3, vec![Clause::from([1, 2, 3])]);
        let m = solve(&f).model().unwrap().clone();
        assert_eq!(m.values(), &[false, false, true]);
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // var(p, h) = 2p + h + 1
        let v = |p: i64, h: i64| 2 * p + h + 1;
        let mut clauses = Vec::new();
        for p in 0..3 {
            clauses.push(Clause::from([v(p, 0), v(p, 1)]));
        }
        for h in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    clauses.push(Clause::from([-v(a, h), -v(b, h)]));
                }
            }
        }
        let f = cnf(6, clauses);
        let r = solve(&f);
        assert!(!r.is_sat());
        assert!(r.stats().conflicts > 0);
    }

    #[test]
    fn agrees_with_brute_force_on_random_formulas() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..200 {
            let nvars = rng.gen_range(1..=10);
            let nclauses = rng.gen_range(0..=5 * nvars as usize);
            let clauses = (0..nclauses)
                .map(|_| {
                    let width = rng.gen_range(1..=4);
                    Clause::new(
                        (0..width)
                            .map(|_| Literal::new(rng.gen_range(1..=nvars), rng.gen_bool(0.5))),
                    )
                })
                .collect();
            let f = cnf(nvars, clauses);
            let fast = solve(&f);
            let slow = brute_force(&f).unwrap();
            assert_eq!(fast.is_sat(), slow.is_sat());
            if let Some(m) = fast.model() {
                assert!(check_model(&f, m));
            }
        }
    }

    #[test]
    fn solve_is_deterministic() {
        let mut rng = StdRng::seed_from_u64(11);
        let clauses: Vec<Clause> = (0..40)
            .map(|_| Clause::new((0..3).map(|_| Literal::new(rng.gen_range(1..=12), rng.gen_bool(0.5)))))
            .collect();
        let f = cnf(12, clauses);
        assert_eq!(solve(&f), solve(&f));
    }
}
