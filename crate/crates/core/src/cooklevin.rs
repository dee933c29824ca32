//! Compiler from a time-bounded Turing machine run to CNF, with the decoder
//! and independent verifier that map satisfying assignments back to
//! accepting computations.
//!
//! The formula is the conjunction of seven clause groups, emitted in a
//! fixed order:
//!
//! | group | constraint |
//! |-------|------------|
//! | G1    | exactly one state per time step |
//! | G2    | exactly one head position per time step |
//! | G3    | exactly one symbol per cell per time step |
//! | G4    | the initial configuration |
//! | G5    | the accepting state at the final time step |
//! | G6a   | cells away from the head keep their symbol |
//! | G6b   | the scanned cell, state and head follow the transition relation |
//!
//! Halting states get a synthesized self-loop in G6b so an accepting run
//! shorter than the bound stays accepting. A nondeterministic entry with
//! `c` choices guards the disjunction of `c` successor triples; it is
//! written in CNF by distribution, which takes `3^c` clauses and no extra
//! variables. A combination with no legal successor (undefined transition,
//! or every choice would move the head off the tableau) gets one blocking
//! clause.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::cnf::{build_catalog, evaluate, Assignment, Clause, CnfInstance, Coord, Literal, VarCatalog};
use crate::machine::{step, Configuration, Machine, MachineError, StateId, Symbol};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("time bound must be at least 1")]
    InvalidBound,
    #[error("input of length {len} does not fit the time bound {p}")]
    InputTooLong { len: usize, p: u32 },
    #[error(transparent)]
    AlphabetMismatch(#[from] MachineError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("assignment does not satisfy the formula")]
    NotAModel,
    #[error("row {time}: {what} is not uniquely determined ({count} candidates)")]
    MultiplicityViolation {
        time: u32,
        what: String,
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    G1,
    G2,
    G3,
    G4,
    G5,
    G6a,
    G6b,
}

impl Group {
    pub const ALL: [Group; 7] = [
        Group::G1,
        Group::G2,
        Group::G3,
        Group::G4,
        Group::G5,
        Group::G6a,
        Group::G6b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::G1 => "G1",
            Group::G2 => "G2",
            Group::G3 => "G3",
            Group::G4 => "G4",
            Group::G5 => "G5",
            Group::G6a => "G6a",
            Group::G6b => "G6b",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything produced by [`reduce`]. `machine` is the canonically
/// re-indexed machine (initial = 0, accept = 1, reject = 2) that the
/// catalog's state indices refer to.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub formula: CnfInstance,
    pub catalog: VarCatalog,
    /// Clause index range of each group, in emission order.
    pub groups: Vec<(Group, Range<usize>)>,
    pub machine: Machine,
    pub input: Vec<Symbol>,
    pub p: u32,
}

impl ReductionOutput {
    pub fn group_count(&self, g: Group) -> usize {
        self.groups
            .iter()
            .find(|(name, _)| *name == g)
            .map(|(_, r)| r.len())
            .unwrap_or(0)
    }

    /// `c group <name> clauses <a>..<b>` lines with 1-based inclusive
    /// clause numbers.
    pub fn group_comments(&self) -> Vec<String> {
        self.groups
            .iter()
            .map(|(g, r)| format!("group {} clauses {}..{}", g, r.start + 1, r.end))
            .collect()
    }
}

pub fn reduce(m: &Machine, input: &[Symbol], p: u32) -> Result<ReductionOutput, ReduceError> {
    if p < 1 {
        return Err(ReduceError::InvalidBound);
    }
    if input.len() > p as usize {
        return Err(ReduceError::InputTooLong {
            len: input.len(),
            p,
        });
    }
    m.check_input(input)?;
    let machine = m.canonical();
    let r = machine.states().len() as u32 - 1;
    let v = machine.tape_alphabet().len() as u32 - 1;
    let catalog = build_catalog(p, r, v);

    let emitted: [(Group, Vec<Clause>); 7] = [
        (Group::G1, emit_g1(&catalog)),
        (Group::G2, emit_g2(&catalog)),
        (Group::G3, emit_g3(&catalog)),
        (Group::G4, emit_g4(&catalog, input)),
        (Group::G5, emit_g5(&catalog)),
        (Group::G6a, emit_g6a(&catalog)),
        (Group::G6b, emit_g6b(&catalog, &machine)),
    ];
    let mut clauses = Vec::new();
    let mut groups = Vec::new();
    for (g, cs) in emitted {
        let start = clauses.len();
        clauses.extend(cs);
        groups.push((g, start..clauses.len()));
    }
    let formula = CnfInstance::new(catalog.len() as u32, clauses)
        .expect("emitted literals come from the catalog");
    Ok(ReductionOutput {
        formula,
        catalog,
        groups,
        machine,
        input: input.to_vec(),
        p,
    })
}

fn exactly_one(vars: &[u32], out: &mut Vec<Clause>) {
    out.push(Clause::new(vars.iter().map(|&x| Literal::pos(x))));
    for (a, &x) in vars.iter().enumerate() {
        for &y in &vars[a + 1..] {
            out.push(Clause::new([Literal::neg(x), Literal::neg(y)]));
        }
    }
}

/// Exactly one state per time step.
pub fn emit_g1(cat: &VarCatalog) -> Vec<Clause> {
    let mut out = Vec::new();
    for i in 0..=cat.p() {
        let vars: Vec<u32> = (0..=cat.r()).map(|k| cat.q(i, k)).collect();
        exactly_one(&vars, &mut out);
    }
    out
}

/// Exactly one head position per time step.
pub fn emit_g2(cat: &VarCatalog) -> Vec<Clause> {
    let mut out = Vec::new();
    for i in 0..=cat.p() {
        let vars: Vec<u32> = cat.cells().map(|j| cat.h(i, j)).collect();
        exactly_one(&vars, &mut out);
    }
    out
}

/// Exactly one symbol per cell per time step.
pub fn emit_g3(cat: &VarCatalog) -> Vec<Clause> {
    let mut out = Vec::new();
    for i in 0..=cat.p() {
        for j in cat.cells() {
            let vars: Vec<u32> = (0..=cat.v()).map(|k| cat.s(i, j, k)).collect();
            exactly_one(&vars, &mut out);
        }
    }
    out
}

/// Initial configuration: state 0, head on cell 1, input in cells `1..=n`,
/// every other cell blank (cell 0 included).
pub fn emit_g4(cat: &VarCatalog, input: &[Symbol]) -> Vec<Clause> {
    let unit = |x| Clause::new([Literal::pos(x)]);
    let mut out = vec![unit(cat.q(0, 0)), unit(cat.h(0, 1))];
    for j in cat.cells() {
        let k = if j >= 1 && (j as usize) <= input.len() {
            input[j as usize - 1].0 as u32
        } else {
            0
        };
        out.push(unit(cat.s(0, j, k)));
    }
    out
}

/// The accepting state (index 1) at the final time step.
pub fn emit_g5(cat: &VarCatalog) -> Vec<Clause> {
    vec![Clause::new([Literal::pos(cat.q(cat.p(), 1))])]
}

/// A cell not under the head keeps its symbol.
pub fn emit_g6a(cat: &VarCatalog) -> Vec<Clause> {
    let mut out = Vec::new();
    for i in 0..cat.p() {
        for j in cat.cells() {
            for l in 0..=cat.v() {
                out.push(Clause::new([
                    Literal::neg(cat.s(i, j, l)),
                    Literal::pos(cat.h(i, j)),
                    Literal::pos(cat.s(i + 1, j, l)),
                ]));
            }
        }
    }
    out
}

/// The scanned cell, state and head position evolve by the transition
/// relation. `m` must be canonically indexed.
pub fn emit_g6b(cat: &VarCatalog, m: &Machine) -> Vec<Clause> {
    let mut out = Vec::new();
    let cells = cat.cells();
    for i in 0..cat.p() {
        for j in cells.clone() {
            for k in 0..=cat.r() {
                for l in 0..=cat.v() {
                    let guard = [
                        Literal::neg(cat.h(i, j)),
                        Literal::neg(cat.q(i, k)),
                        Literal::neg(cat.s(i, j, l)),
                    ];
                    let successors: Vec<[Literal; 3]> = successor_triples(m, k, l)
                        .into_iter()
                        .filter(|&(_, _, delta)| cells.contains(&(j + delta)))
                        .map(|(k2, l2, delta)| {
                            [
                                Literal::pos(cat.h(i + 1, j + delta)),
                                Literal::pos(cat.q(i + 1, k2)),
                                Literal::pos(cat.s(i + 1, j, l2)),
                            ]
                        })
                        .collect();
                    if successors.is_empty() {
                        out.push(Clause::new(guard));
                        continue;
                    }
                    distribute(&guard, &successors, &mut out);
                }
            }
        }
    }
    out
}

/// `(next state, written symbol, head delta)` choices for state `k` reading
/// `l`, with the halting self-loop synthesized.
fn successor_triples(m: &Machine, k: u32, l: u32) -> Vec<(u32, u32, i64)> {
    let state = StateId(k as usize);
    if m.is_halting(state) {
        return vec![(k, l, 0)];
    }
    m.actions(state, Symbol(l as usize))
        .unwrap_or(&[])
        .iter()
        .map(|a| (a.next.0 as u32, a.write.0 as u32, a.movement.delta()))
        .collect()
}

/// CNF of `guard -> OR_c (h_c AND q_c AND s_c)`: one clause per way of
/// picking one conjunct from every choice.
fn distribute(guard: &[Literal; 3], successors: &[[Literal; 3]], out: &mut Vec<Clause>) {
    let mut picks = vec![0usize; successors.len()];
    loop {
        let lits = guard
            .iter()
            .copied()
            .chain(picks.iter().zip(successors).map(|(&p, triple)| triple[p]));
        out.push(Clause::new(lits));
        // odometer increment, last position fastest
        let mut pos = picks.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            picks[pos] += 1;
            if picks[pos] < 3 {
                break;
            }
            picks[pos] = 0;
        }
    }
}

/// One row of a decoded tableau. `tape[j + p]` holds cell `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub state: StateId,
    pub head: i64,
    pub tape: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    pub p: u32,
    pub rows: Vec<Row>,
}

impl Tableau {
    pub fn configuration(&self, i: usize) -> Configuration {
        let row = &self.rows[i];
        let mut c = Configuration::new(row.state, row.head);
        c.time = i as u64;
        let lo = -(self.p as i64);
        for (offset, &s) in row.tape.iter().enumerate() {
            c.write(lo + offset as i64, s);
        }
        c
    }

    /// Tableau rows for a computation of `p + 1` configurations.
    pub fn from_trace(p: u32, trace: &[Configuration]) -> Tableau {
        let lo = -(p as i64);
        let hi = p as i64 + 1;
        let rows = trace
            .iter()
            .map(|c| Row {
                state: c.state,
                head: c.head,
                tape: (lo..=hi).map(|j| c.read(j)).collect(),
            })
            .collect();
        Tableau { p, rows }
    }
}

/// Reads the tableau off a model; the exactly-one groups make every entry
/// unique.
pub fn decode(a: &Assignment, out: &ReductionOutput) -> Result<Tableau, DecodeError> {
    if !evaluate(&out.formula, a).unwrap_or(false) {
        return Err(DecodeError::NotAModel);
    }
    let cat = &out.catalog;
    let unique = |time: u32, what: String, hits: Vec<u32>| -> Result<u32, DecodeError> {
        if hits.len() == 1 {
            Ok(hits[0])
        } else {
            Err(DecodeError::MultiplicityViolation {
                time,
                what,
                count: hits.len(),
            })
        }
    };
    let mut rows = Vec::with_capacity(out.p as usize + 1);
    for i in 0..=out.p {
        let states = (0..=cat.r()).filter(|&k| a.value(cat.q(i, k))).collect();
        let state = unique(i, "state".into(), states)?;
        let heads: Vec<u32> = cat
            .cells()
            .filter(|&j| a.value(cat.h(i, j)))
            .map(|j| (j + out.p as i64) as u32)
            .collect();
        let head = unique(i, "head".into(), heads)? as i64 - out.p as i64;
        let mut tape = Vec::with_capacity(2 * out.p as usize + 2);
        for j in cat.cells() {
            let syms = (0..=cat.v()).filter(|&k| a.value(cat.s(i, j, k))).collect();
            tape.push(Symbol(unique(i, format!("cell {j}"), syms)? as usize));
        }
        rows.push(Row {
            state: StateId(state as usize),
            head,
            tape,
        });
    }
    Ok(Tableau { p: out.p, rows })
}

/// The assignment that sets exactly the coordinates of `t` true.
pub fn encode_tableau(t: &Tableau, out: &ReductionOutput) -> Assignment {
    let cat = &out.catalog;
    let mut a = Assignment::all_false(cat.len() as u32);
    let lo = -(t.p as i64);
    for (i, row) in t.rows.iter().enumerate() {
        let i = i as u32;
        a.set(cat.q(i, row.state.0 as u32), true);
        a.set(cat.h(i, row.head), true);
        for (offset, s) in row.tape.iter().enumerate() {
            a.set(cat.s(i, lo + offset as i64, s.0 as u32), true);
        }
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableauDefect {
    WrongShape,
    BadInitialRow,
    IllegalStep { time: usize },
    FinalNotAccepting,
}

impl fmt::Display for TableauDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableauDefect::WrongShape => f.write_str("wrong-shape"),
            TableauDefect::BadInitialRow => f.write_str("bad-initial-row"),
            TableauDefect::IllegalStep { time } => write!(f, "illegal-step at time {time}"),
            TableauDefect::FinalNotAccepting => f.write_str("final-not-accepting"),
        }
    }
}

/// Semantic check of a tableau against the simulator: initial row, every
/// row-to-row transition, acceptance at the last row. `m` must be indexed
/// the same way as the tableau (the machine stored in the reduction output).
pub fn verify_tableau(t: &Tableau, m: &Machine, input: &[Symbol]) -> Result<(), TableauDefect> {
    let width = 2 * t.p as usize + 2;
    if t.rows.len() != t.p as usize + 1 || t.rows.iter().any(|r| r.tape.len() != width) {
        return Err(TableauDefect::WrongShape);
    }
    let lo = -(t.p as i64);
    let hi = t.p as i64 + 1;
    if t.rows.iter().any(|r| r.head < lo || r.head > hi) {
        return Err(TableauDefect::WrongShape);
    }
    if !t.configuration(0).same_snapshot(&Configuration::initial(m, input)) {
        return Err(TableauDefect::BadInitialRow);
    }
    for i in 0..t.p as usize {
        let here = t.configuration(i);
        let next = t.configuration(i + 1);
        let legal = step(m, &here)
            .map(|succ| succ.iter().any(|c| c.same_snapshot(&next)))
            .unwrap_or(false);
        if !legal {
            return Err(TableauDefect::IllegalStep { time: i });
        }
    }
    if t.rows[t.p as usize].state != m.accept() {
        return Err(TableauDefect::FinalNotAccepting);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub variables: u64,
    pub clauses: u64,
    pub groups: Vec<(Group, u64)>,
    /// `|U| * |C|`.
    pub length: u128,
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variables {}", self.variables)?;
        writeln!(f, "clauses {}", self.clauses)?;
        for (g, n) in &self.groups {
            writeln!(f, "  {:<4}{}", g.name(), n)?;
        }
        write!(f, "length {}", self.length)
    }
}

pub fn report_counts(out: &ReductionOutput) -> SizeReport {
    let variables = out.formula.nvars() as u64;
    let clauses = out.formula.len() as u64;
    SizeReport {
        variables,
        clauses,
        groups: out
            .groups
            .iter()
            .map(|(g, r)| (*g, r.len() as u64))
            .collect(),
        length: variables as u128 * clauses as u128,
    }
}

/// Variable number of `c` in the output's catalog.
pub fn var(out: &ReductionOutput, c: Coord) -> u32 {
    out.catalog.lookup(c).expect("coordinate inside the tableau")
}
