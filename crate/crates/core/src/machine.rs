//! Turing machine model and the reference simulator.
//!
//! A [`Machine`] stores its transition relation in combined form (print and
//! move in one step). Halting states never carry stored transitions; the
//! simulator treats them as self-loops that only advance time.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

/// Index into the tape alphabet. Index 0 is always the blank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub usize);

impl Symbol {
    pub const BLANK: Symbol = Symbol(0);

    pub fn is_blank(self) -> bool {
        self.0 == 0
    }
}

/// Index into the state list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

/// Head displacement of one transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }

    pub fn from_delta(delta: i64) -> Option<Move> {
        match delta {
            -1 => Some(Move::Left),
            0 => Some(Move::Stay),
            1 => Some(Move::Right),
            _ => None,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Stay => 'S',
            Move::Right => 'R',
        }
    }
}

/// Right-hand side of a transition: next state, written symbol, head move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub next: StateId,
    pub write: Symbol,
    pub movement: Move,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("no transition defined for state `{state}` reading `{symbol}`")]
    UndefinedTransition { state: String, symbol: String },
    #[error("machine is nondeterministic: state `{state}` reading `{symbol}` has {choices} choices")]
    Nondeterministic {
        state: String,
        symbol: String,
        choices: usize,
    },
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("symbol `{0}` is not in the input alphabet")]
    AlphabetMismatch(String),
}

/// A (possibly nondeterministic) single-tape Turing machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    tape_alphabet: Vec<String>,
    input_alphabet: Vec<Symbol>,
    states: Vec<String>,
    initial: StateId,
    accept: StateId,
    reject: StateId,
    transitions: BTreeMap<(StateId, Symbol), Vec<Action>>,
}

impl Machine {
    /// Validates and assembles a machine. `tape_alphabet[0]` is the blank.
    pub fn new(
        tape_alphabet: Vec<String>,
        input_alphabet: Vec<Symbol>,
        states: Vec<String>,
        initial: StateId,
        accept: StateId,
        reject: StateId,
        transitions: BTreeMap<(StateId, Symbol), Vec<Action>>,
    ) -> Result<Machine, MachineError> {
        let invalid = |msg: String| Err(MachineError::Invalid(msg));
        if tape_alphabet.is_empty() {
            return invalid("tape alphabet is empty".into());
        }
        if states.is_empty() {
            return invalid("no states".into());
        }
        if has_duplicates(&tape_alphabet) {
            return invalid("duplicate tape symbol".into());
        }
        if has_duplicates(&states) {
            return invalid("duplicate state".into());
        }
        for id in [initial, accept, reject] {
            if id.0 >= states.len() {
                return invalid(format!("state index {} out of range", id.0));
            }
        }
        if accept == reject {
            return invalid("accept and reject states coincide".into());
        }
        if initial == accept || initial == reject {
            return invalid("initial state must not be a halting state".into());
        }
        let mut seen = BTreeSet::new();
        for &s in &input_alphabet {
            if s.is_blank() {
                return invalid("blank symbol in input alphabet".into());
            }
            if s.0 >= tape_alphabet.len() {
                return invalid(format!("input symbol index {} out of range", s.0));
            }
            if !seen.insert(s) {
                return invalid("duplicate input symbol".into());
            }
        }
        for (&(state, read), actions) in &transitions {
            if state.0 >= states.len() || read.0 >= tape_alphabet.len() {
                return invalid("transition references unknown state or symbol".into());
            }
            if state == accept || state == reject {
                return invalid(format!("halting state `{}` has transitions", states[state.0]));
            }
            if actions.is_empty() {
                return invalid("empty transition set".into());
            }
            let mut uniq = HashSet::new();
            for a in actions {
                if a.next.0 >= states.len() || a.write.0 >= tape_alphabet.len() {
                    return invalid("transition targets unknown state or symbol".into());
                }
                if !uniq.insert(*a) {
                    return invalid("duplicate transition".into());
                }
            }
        }
        Ok(Machine {
            tape_alphabet,
            input_alphabet,
            states,
            initial,
            accept,
            reject,
            transitions,
        })
    }

    pub fn tape_alphabet(&self) -> &[String] {
        &self.tape_alphabet
    }

    pub fn input_alphabet(&self) -> &[Symbol] {
        &self.input_alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn accept(&self) -> StateId {
        self.accept
    }

    pub fn reject(&self) -> StateId {
        self.reject
    }

    pub fn transitions(&self) -> &BTreeMap<(StateId, Symbol), Vec<Action>> {
        &self.transitions
    }

    pub fn actions(&self, state: StateId, read: Symbol) -> Option<&[Action]> {
        self.transitions.get(&(state, read)).map(Vec::as_slice)
    }

    pub fn is_halting(&self, state: StateId) -> bool {
        state == self.accept || state == self.reject
    }

    pub fn is_deterministic(&self) -> bool {
        self.transitions.values().all(|a| a.len() == 1)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.tape_alphabet[s.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn symbol_by_name(&self, name: &str) -> Option<Symbol> {
        self.tape_alphabet.iter().position(|s| s == name).map(Symbol)
    }

    /// Parses an input word. Whitespace-separated tokens when the text
    /// contains whitespace, otherwise one symbol per character.
    pub fn parse_input(&self, text: &str) -> Result<Vec<Symbol>, MachineError> {
        let tokens: Vec<String> = if text.chars().any(char::is_whitespace) {
            text.split_whitespace().map(str::to_owned).collect()
        } else {
            text.chars().map(String::from).collect()
        };
        tokens
            .iter()
            .map(|t| {
                self.symbol_by_name(t)
                    .filter(|s| self.input_alphabet.contains(s))
                    .ok_or_else(|| MachineError::AlphabetMismatch(t.clone()))
            })
            .collect()
    }

    pub fn check_input(&self, input: &[Symbol]) -> Result<(), MachineError> {
        for s in input {
            if !self.input_alphabet.contains(s) {
                let name = self
                    .tape_alphabet
                    .get(s.0)
                    .cloned()
                    .unwrap_or_else(|| format!("#{}", s.0));
                return Err(MachineError::AlphabetMismatch(name));
            }
        }
        Ok(())
    }

    pub fn format_word(&self, input: &[Symbol]) -> String {
        let names: Vec<&str> = input.iter().map(|&s| self.symbol_name(s)).collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(" ")
        }
    }

    /// Re-indexes states so that initial = 0, accept = 1, reject = 2, the
    /// remaining states keeping their relative order.
    pub fn canonical(&self) -> Machine {
        let mut order = vec![self.initial, self.accept, self.reject];
        order.extend(
            (0..self.states.len())
                .map(StateId)
                .filter(|s| ![self.initial, self.accept, self.reject].contains(s)),
        );
        let mut remap = vec![StateId(0); self.states.len()];
        for (new, old) in order.iter().enumerate() {
            remap[old.0] = StateId(new);
        }
        let states = order.iter().map(|s| self.states[s.0].clone()).collect();
        let transitions = self
            .transitions
            .iter()
            .map(|(&(s, a), acts)| {
                let acts = acts
                    .iter()
                    .map(|act| Action {
                        next: remap[act.next.0],
                        ..*act
                    })
                    .collect();
                ((remap[s.0], a), acts)
            })
            .collect();
        Machine {
            tape_alphabet: self.tape_alphabet.clone(),
            input_alphabet: self.input_alphabet.clone(),
            states,
            initial: StateId(0),
            accept: StateId(1),
            reject: StateId(2),
            transitions,
        }
    }

    /// True when every transition either prints in place or moves without
    /// changing the scanned symbol.
    pub fn is_split(&self) -> bool {
        self.transitions.iter().all(|(&(_, read), acts)| {
            acts.iter()
                .all(|a| a.movement == Move::Stay || a.write == read)
        })
    }
}

fn has_duplicates(names: &[String]) -> bool {
    let mut seen = HashSet::new();
    names.iter().any(|n| !seen.insert(n))
}

/// One instantaneous description. The tape map never stores blanks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    tape: BTreeMap<i64, Symbol>,
    pub head: i64,
    pub state: StateId,
    pub time: u64,
}

impl Configuration {
    pub fn new(state: StateId, head: i64) -> Configuration {
        Configuration {
            tape: BTreeMap::new(),
            head,
            state,
            time: 0,
        }
    }

    /// Initial configuration: input in cells `1..=n`, head on cell 1.
    pub fn initial(m: &Machine, input: &[Symbol]) -> Configuration {
        let mut c = Configuration::new(m.initial(), 1);
        for (offset, &s) in input.iter().enumerate() {
            c.write(offset as i64 + 1, s);
        }
        c
    }

    pub fn read(&self, cell: i64) -> Symbol {
        self.tape.get(&cell).copied().unwrap_or(Symbol::BLANK)
    }

    pub fn write(&mut self, cell: i64, s: Symbol) {
        if s.is_blank() {
            self.tape.remove(&cell);
        } else {
            self.tape.insert(cell, s);
        }
    }

    pub fn scanned(&self) -> Symbol {
        self.read(self.head)
    }

    pub fn tape(&self) -> &BTreeMap<i64, Symbol> {
        &self.tape
    }

    /// Smallest and largest cell covering the stored tape and the head.
    pub fn window(&self) -> (i64, i64) {
        let lo = self.tape.keys().next().copied().unwrap_or(self.head);
        let hi = self.tape.keys().next_back().copied().unwrap_or(self.head);
        (lo.min(self.head), hi.max(self.head))
    }

    /// Same machine snapshot, ignoring the time stamp.
    pub fn same_snapshot(&self, other: &Configuration) -> bool {
        self.state == other.state && self.head == other.head && self.tape == other.tape
    }

    fn key(&self) -> (StateId, i64, BTreeMap<i64, Symbol>) {
        (self.state, self.head, self.tape.clone())
    }

    fn apply(&self, a: &Action) -> Configuration {
        let mut next = self.clone();
        next.write(self.head, a.write);
        next.head += a.movement.delta();
        next.state = a.next;
        next.time += 1;
        next
    }
}

/// Every configuration reachable in one step. Halting states loop on themselves.
pub fn step(m: &Machine, c: &Configuration) -> Result<Vec<Configuration>, MachineError> {
    if m.is_halting(c.state) {
        let mut next = c.clone();
        next.time += 1;
        return Ok(vec![next]);
    }
    let read = c.scanned();
    let actions = m
        .actions(c.state, read)
        .ok_or_else(|| MachineError::UndefinedTransition {
            state: m.state_name(c.state).to_owned(),
            symbol: m.symbol_name(read).to_owned(),
        })?;
    Ok(actions.iter().map(|a| c.apply(a)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected,
    Timeout,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accepted => "accepted",
            Verdict::Rejected => "rejected",
            Verdict::Timeout => "timeout",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub verdict: Verdict,
    pub trace: Vec<Configuration>,
    pub leftmost_visited: i64,
}

impl RunResult {
    pub fn last(&self) -> &Configuration {
        self.trace.last().expect("trace is never empty")
    }
}

/// Runs a deterministic machine for at most `max_steps` steps, stopping at
/// the first halting state.
pub fn run(m: &Machine, input: &[Symbol], max_steps: u64) -> Result<RunResult, MachineError> {
    run_from(m, Configuration::initial(m, input), max_steps)
}

/// [`run`] starting from an arbitrary configuration; `max_steps` bounds the
/// configuration's time stamp.
pub fn run_from(
    m: &Machine,
    start: Configuration,
    max_steps: u64,
) -> Result<RunResult, MachineError> {
    let mut current = start;
    let mut leftmost = current.head;
    let mut trace = vec![current.clone()];
    let verdict = loop {
        if current.state == m.accept() {
            break Verdict::Accepted;
        }
        if current.state == m.reject() {
            break Verdict::Rejected;
        }
        if current.time >= max_steps {
            break Verdict::Timeout;
        }
        let mut next = step(m, &current)?;
        if next.len() > 1 {
            return Err(MachineError::Nondeterministic {
                state: m.state_name(current.state).to_owned(),
                symbol: m.symbol_name(current.scanned()).to_owned(),
                choices: next.len(),
            });
        }
        current = next.pop().expect("step yields at least one successor");
        leftmost = leftmost.min(current.head);
        trace.push(current.clone());
    };
    Ok(RunResult {
        verdict,
        trace,
        leftmost_visited: leftmost,
    })
}

/// Exhaustive breadth-first search over every computation branch of at most
/// `p` steps. Branches whose head leaves `[-p, p+1]` or that get stuck are
/// pruned.
pub fn accepts_within(m: &Machine, input: &[Symbol], p: u64) -> bool {
    accepting_branch(m, input, p).is_some()
}

/// Like [`accepts_within`] but returns one accepting computation, padded with
/// halting self-loops to exactly `p + 1` configurations.
pub fn accepting_branch(m: &Machine, input: &[Symbol], p: u64) -> Option<Vec<Configuration>> {
    let lo = -(p as i64);
    let hi = p as i64 + 1;
    let start = Configuration::initial(m, input);
    if start.head < lo || start.head > hi {
        return None;
    }
    // Each layer keeps one parent pointer per distinct snapshot.
    let mut layers: Vec<Vec<(Configuration, usize)>> = vec![vec![(start, usize::MAX)]];
    for t in 0..=p {
        let layer = &layers[t as usize];
        if let Some(idx) = layer.iter().position(|(c, _)| c.state == m.accept()) {
            let mut path = Vec::new();
            let mut cursor = (t as usize, idx);
            loop {
                let (c, parent) = &layers[cursor.0][cursor.1];
                path.push(c.clone());
                if cursor.0 == 0 {
                    break;
                }
                cursor = (cursor.0 - 1, *parent);
            }
            path.reverse();
            while (path.len() as u64) <= p {
                let mut next = path.last().unwrap().clone();
                next.time += 1;
                path.push(next);
            }
            return Some(path);
        }
        if t == p {
            break;
        }
        let mut seen = HashSet::new();
        let mut next_layer = Vec::new();
        for (idx, (c, _)) in layer.iter().enumerate() {
            if c.state == m.reject() {
                continue;
            }
            let Ok(succ) = step(m, c) else { continue };
            for n in succ {
                if n.head < lo || n.head > hi {
                    continue;
                }
                if seen.insert(n.key()) {
                    next_layer.push((n, idx));
                }
            }
        }
        if next_layer.is_empty() {
            return None;
        }
        layers.push(next_layer);
    }
    None
}

/// Rewrites every combined print-and-move transition into a print followed
/// by a pure move through one fresh intermediate state.
pub fn split_instructions(m: &Machine) -> Machine {
    let mut states = m.states.clone();
    let mut transitions: BTreeMap<(StateId, Symbol), Vec<Action>> = BTreeMap::new();
    let mut fresh_counter = 0usize;
    for (&(state, read), actions) in &m.transitions {
        for a in actions {
            if a.movement == Move::Stay || a.write == read {
                transitions.entry((state, read)).or_default().push(*a);
                continue;
            }
            let fresh = loop {
                let name = format!("{}_{}", m.states[state.0], fresh_counter);
                fresh_counter += 1;
                if !states.contains(&name) {
                    break name;
                }
            };
            states.push(fresh);
            let mid = StateId(states.len() - 1);
            transitions.entry((state, read)).or_default().push(Action {
                next: mid,
                write: a.write,
                movement: Move::Stay,
            });
            transitions.entry((mid, a.write)).or_default().push(Action {
                next: a.next,
                write: a.write,
                movement: a.movement,
            });
        }
    }
    Machine {
        tape_alphabet: m.tape_alphabet.clone(),
        input_alphabet: m.input_alphabet.clone(),
        states,
        initial: m.initial,
        accept: m.accept,
        reject: m.reject,
        transitions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn m1() -> Machine {
        corpus::m1()
    }

    fn sym(m: &Machine, name: &str) -> Symbol {
        m.symbol_by_name(name).unwrap()
    }

    #[test]
    fn halting_configuration_self_loops() {
        let m = m1();
        let mut c = Configuration::new(m.accept(), 4);
        c.write(4, sym(&m, "1"));
        let next = step(&m, &c).unwrap();
        assert_eq!(next.len(), 1);
        assert!(next[0].same_snapshot(&c));
        assert_eq!(next[0].time, c.time + 1);
    }

    #[test]
    fn single_transition_step() {
        let m = m1();
        let one = sym(&m, "1");
        let c = Configuration::initial(&m, &[one]);
        let next = step(&m, &c).unwrap();
        assert_eq!(next.len(), 1);
        assert_eq!(next[0].head, 2);
        assert_eq!(next[0].state, m.accept());
        assert_eq!(next[0].read(1), one);
    }

    #[test]
    fn nondeterministic_step_yields_every_choice() {
        let m = corpus::palindrome();
        let a = sym(&m, "a");
        let ra = m.state_by_name("ra").unwrap();
        let mut c = Configuration::new(ra, 2);
        c.write(2, a);
        assert_eq!(step(&m, &c).unwrap().len(), 2);
    }

    #[test]
    fn undefined_transition_is_an_error() {
        let m = corpus::stuck();
        let q1 = m.state_by_name("q1").unwrap();
        let c = Configuration::new(q1, 2);
        assert!(matches!(
            step(&m, &c),
            Err(MachineError::UndefinedTransition { .. })
        ));
    }

    #[test]
    fn run_m1() {
        let m = m1();
        let one = m.parse_input("1").unwrap();
        let r = run(&m, &one, 5).unwrap();
        assert_eq!(r.verdict, Verdict::Accepted);
        assert_eq!(r.last().time, 1);
        assert_eq!(r.leftmost_visited, 1);
        assert_eq!(r.trace.len(), 2);

        let zero = m.parse_input("0").unwrap();
        let r = run(&m, &zero, 5).unwrap();
        assert_eq!(r.verdict, Verdict::Rejected);
        assert_eq!(r.last().time, 1);

        let r = run(&m, &[], 0).unwrap();
        assert_eq!(r.verdict, Verdict::Timeout);
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn run_rejects_nondeterminism() {
        let m = corpus::palindrome();
        let input = m.parse_input("aa").unwrap();
        assert!(matches!(
            run(&m, &input, 20),
            Err(MachineError::Nondeterministic { choices: 2, .. })
        ));
    }

    #[test]
    fn accepts_within_m1() {
        let m = m1();
        assert!(accepts_within(&m, &m.parse_input("1").unwrap(), 2));
        assert!(!accepts_within(&m, &m.parse_input("0").unwrap(), 2));
    }

    #[test]
    fn accepting_branch_is_padded_to_p() {
        let m = m1();
        let path = accepting_branch(&m, &m.parse_input("1").unwrap(), 4).unwrap();
        assert_eq!(path.len(), 5);
        for (t, c) in path.iter().enumerate() {
            assert_eq!(c.time, t as u64);
        }
    }

    #[test]
    fn blank_writes_are_not_stored() {
        let m = m1();
        let mut c = Configuration::initial(&m, &m.parse_input("1").unwrap());
        c.write(1, Symbol::BLANK);
        assert!(c.tape().is_empty());
    }

    #[test]
    fn split_is_identity_on_split_machines() {
        let m = m1();
        assert!(m.is_split());
        assert_eq!(split_instructions(&m), m);
        let parity = corpus::parity();
        assert_eq!(split_instructions(&parity), parity);
    }

    #[test]
    fn split_single_combined_transition() {
        let mut t = BTreeMap::new();
        t.insert(
            (StateId(0), Symbol(1)),
            vec![Action {
                next: StateId(3),
                write: Symbol(2),
                movement: Move::Right,
            }],
        );
        t.insert(
            (StateId(3), Symbol(0)),
            vec![Action {
                next: StateId(1),
                write: Symbol(0),
                movement: Move::Stay,
            }],
        );
        let m = Machine::new(
            vec!["_".into(), "a".into(), "b".into()],
            vec![Symbol(1), Symbol(2)],
            vec!["q0".into(), "qY".into(), "qN".into(), "q1".into()],
            StateId(0),
            StateId(1),
            StateId(2),
            t,
        )
        .unwrap();
        assert!(!m.is_split());
        let s = split_instructions(&m);
        assert!(s.is_split());
        assert_eq!(s.states().len(), 5);
        let mid = StateId(4);
        assert_eq!(
            s.actions(StateId(0), Symbol(1)).unwrap(),
            &[Action {
                next: mid,
                write: Symbol(2),
                movement: Move::Stay
            }]
        );
        assert_eq!(
            s.actions(mid, Symbol(2)).unwrap(),
            &[Action {
                next: StateId(3),
                write: Symbol(2),
                movement: Move::Right
            }]
        );
        // same language over words up to length 4
        for word in corpus::all_words(m.input_alphabet(), 4) {
            let p = word.len() as u64 + 4;
            assert_eq!(
                accepts_within(&m, &word, p),
                accepts_within(&s, &word, 2 * p),
                "{word:?}"
            );
        }
    }

    #[test]
    fn canonical_reindexes_roles() {
        let parity = corpus::parity();
        let c = parity.canonical();
        assert_eq!(c.state_name(StateId(0)), "q1");
        assert_eq!(c.state_name(StateId(1)), "q0");
        assert_eq!(c.state_name(StateId(2)), "qR");
        assert_eq!(c.transitions().len(), parity.transitions().len());
    }

    #[test]
    fn parse_input_tokenizes() {
        let m = m1();
        assert_eq!(m.parse_input("10").unwrap(), vec![Symbol(1), Symbol(2)]);
        assert_eq!(m.parse_input("1 0").unwrap(), vec![Symbol(1), Symbol(2)]);
        assert!(matches!(
            m.parse_input("12"),
            Err(MachineError::AlphabetMismatch(_))
        ));
        // blank is a tape symbol but not an input symbol
        assert!(m.parse_input("_").is_err());
    }
}
