//! Associative calculus of a Turing machine.
//!
//! [`build_calculus`] turns a split-form machine into a finitely presented
//! semigroup whose generators are the tape digits, the states and a
//! terminator `v`. Relations, per instruction:
//!
//! * print `q a -> q' b`: `q a == q' b`
//! * left move `q a -> q' L`: `d q a == q' d a` for every digit `d`
//! * right move `q a -> q' R`: `q a == a q'`
//! * blank padding: `a0 v == v`
//!
//! A configuration is encoded as its tape left of the head, the state, the
//! scanned digit, the tape right of the head without trailing blanks, and
//! `v`. Machine steps become rewrite steps, so word equivalence is only
//! semi-decidable: [`equivalent_within`] either returns a derivation that
//! [`verify_derivation`] can recheck, or reports that nothing was found
//! within its bounds.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::machine::{step, Configuration, Machine, Move, StateId, Symbol};

/// Name of the terminator generator.
pub const TERMINATOR: &str = "v";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CalculusError {
    #[error("machine is not in split form")]
    MachineNotSplit,
    #[error("name `{0}` cannot be used as a generator")]
    BadGeneratorName(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("words are non-empty")]
    EmptyWord,
    #[error("the head moves left of the word's first cell at step {step}")]
    LeftExtension { step: usize },
    #[error("trace is not a run of the machine at step {step}")]
    TraceInvalid { step: usize },
    #[error("word number overflow")]
    NumberOverflow,
    #[error("0 is not the number of any word")]
    ZeroNumber,
    #[error("presentation has no terminator `v`")]
    NoTerminator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Digit,
    State,
    Terminator,
}

impl GeneratorKind {
    /// `v` is the terminator, names starting with `q` are states, anything
    /// else is a digit.
    pub fn of_name(name: &str) -> GeneratorKind {
        if name == TERMINATOR {
            GeneratorKind::Terminator
        } else if name.starts_with('q') {
            GeneratorKind::State
        } else {
            GeneratorKind::Digit
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub kind: GeneratorKind,
}

/// Index into a presentation's generator list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(pub usize);

/// A non-empty sequence of generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Gen>);

impl Word {
    pub fn new(gens: Vec<Gen>) -> Result<Word, CalculusError> {
        if gens.is_empty() {
            return Err(CalculusError::EmptyWord);
        }
        Ok(Word(gens))
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    fn occurs_at(&self, pattern: &Word, at: usize) -> bool {
        self.0.get(at..at + pattern.len()) == Some(pattern.gens())
    }

    fn replace(&self, at: usize, old_len: usize, with: &Word) -> Word {
        let mut out = Vec::with_capacity(self.len() - old_len + with.len());
        out.extend_from_slice(&self.0[..at]);
        out.extend_from_slice(&with.0);
        out.extend_from_slice(&self.0[at + old_len..]);
        Word(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationTag {
    Print,
    /// Left move, instantiated for the digit with this generator index.
    LeftMove(Gen),
    RightMove,
    BlankPadding,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
    pub tag: RelationTag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<Generator>,
    relations: Vec<Relation>,
}

impl Presentation {
    /// Generators' kinds come from their names (see [`GeneratorKind::of_name`]).
    pub fn new(names: Vec<String>, relations: Vec<(Word, Word)>) -> Result<Presentation, CalculusError> {
        let mut generators: Vec<Generator> = Vec::with_capacity(names.len());
        for name in names {
            if name.is_empty()
                || name.chars().any(char::is_whitespace)
                || matches!(name.as_str(), "==" | "->" | "=>")
                || generators.iter().any(|g| g.name == name)
            {
                return Err(CalculusError::BadGeneratorName(name));
            }
            let kind = GeneratorKind::of_name(&name);
            generators.push(Generator { name, kind });
        }
        let mut p = Presentation {
            generators,
            relations: Vec::new(),
        };
        for (lhs, rhs) in relations {
            for g in lhs.gens().iter().chain(rhs.gens()) {
                if g.0 >= p.generators.len() {
                    return Err(CalculusError::UnknownGenerator(format!("#{}", g.0)));
                }
            }
            let tag = p.classify(&lhs, &rhs);
            p.relations.push(Relation { lhs, rhs, tag });
        }
        Ok(p)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn gen_by_name(&self, name: &str) -> Option<Gen> {
        self.generators.iter().position(|g| g.name == name).map(Gen)
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.generators[g.0].name
    }

    pub fn kind(&self, g: Gen) -> GeneratorKind {
        self.generators[g.0].kind
    }

    pub fn terminator(&self) -> Result<Gen, CalculusError> {
        self.gen_by_name(TERMINATOR).ok_or(CalculusError::NoTerminator)
    }

    /// First digit generator, the blank of the underlying machine.
    pub fn blank_digit(&self) -> Option<Gen> {
        self.generators
            .iter()
            .position(|g| g.kind == GeneratorKind::Digit)
            .map(Gen)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, CalculusError> {
        let gens = text
            .split_whitespace()
            .map(|t| {
                self.gen_by_name(t)
                    .ok_or_else(|| CalculusError::UnknownGenerator(t.to_owned()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(gens)
    }

    pub fn format_word(&self, w: &Word) -> String {
        let names: Vec<&str> = w.gens().iter().map(|&g| self.name(g)).collect();
        names.join(" ")
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a Presentation, &'a Word);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.format_word(self.1))
            }
        }
        Show(self, w)
    }

    /// Recovers the instruction schema a relation was built from.
    fn classify(&self, lhs: &Word, rhs: &Word) -> RelationTag {
        use GeneratorKind::*;
        let kinds = |w: &Word| -> Vec<GeneratorKind> { w.gens().iter().map(|&g| self.kind(g)).collect() };
        let (l, r) = (lhs.gens(), rhs.gens());
        match (kinds(lhs).as_slice(), kinds(rhs).as_slice()) {
            ([Digit, Terminator], [Terminator]) if Some(l[0]) == self.blank_digit() && l[1] == r[0] => {
                RelationTag::BlankPadding
            }
            ([State, Digit], [State, Digit]) => RelationTag::Print,
            ([State, Digit], [Digit, State]) if l[1] == r[0] => RelationTag::RightMove,
            ([Digit, State, Digit], [State, Digit, Digit]) if l[0] == r[1] && l[2] == r[2] => {
                RelationTag::LeftMove(l[0])
            }
            _ => RelationTag::Other,
        }
    }
}

/// Maps machine states and symbols to generators of its calculus.
fn state_gen(p: &Presentation, m: &Machine, s: StateId) -> Gen {
    p.gen_by_name(m.state_name(s)).expect("calculus contains every state")
}

fn digit_gen(p: &Presentation, m: &Machine, s: Symbol) -> Gen {
    p.gen_by_name(m.symbol_name(s)).expect("calculus contains every symbol")
}

pub fn build_calculus(m: &Machine) -> Result<Presentation, CalculusError> {
    if !m.is_split() {
        return Err(CalculusError::MachineNotSplit);
    }
    for name in m.tape_alphabet() {
        if GeneratorKind::of_name(name) != GeneratorKind::Digit {
            return Err(CalculusError::BadGeneratorName(name.clone()));
        }
    }
    for name in m.states() {
        if GeneratorKind::of_name(name) != GeneratorKind::State {
            return Err(CalculusError::BadGeneratorName(name.clone()));
        }
    }
    let digits = m.tape_alphabet().len();
    let names: Vec<String> = m
        .tape_alphabet()
        .iter()
        .chain(m.states())
        .cloned()
        .chain(std::iter::once(TERMINATOR.to_owned()))
        .collect();
    let term = Gen(names.len() - 1);
    let d = |s: Symbol| Gen(s.0);
    let q = |s: StateId| Gen(digits + s.0);
    let w = |gens: &[Gen]| Word(gens.to_vec());
    let mut relations = Vec::new();
    for (&(state, read), actions) in m.transitions() {
        for a in actions {
            match a.movement {
                Move::Stay => {
                    relations.push((w(&[q(state), d(read)]), w(&[q(a.next), d(a.write)])));
                }
                Move::Right => {
                    relations.push((w(&[q(state), d(read)]), w(&[d(read), q(a.next)])));
                }
                Move::Left => {
                    for k in 0..digits {
                        let dk = Gen(k);
                        relations.push((
                            w(&[dk, q(state), d(read)]),
                            w(&[q(a.next), dk, d(read)]),
                        ));
                    }
                }
            }
        }
    }
    relations.push((w(&[d(Symbol::BLANK), term]), w(&[term])));
    Presentation::new(names, relations)
}

/// Encodes a configuration as `left q scanned right v`. The word starts at
/// cell 1 or at the leftmost non-blank cell or the head, whichever is
/// smallest; trailing blanks right of the head are dropped.
pub fn encode_configuration(
    c: &Configuration,
    m: &Machine,
    p: &Presentation,
) -> Result<Word, CalculusError> {
    encode_from(c, c.window().0.min(1), m, p)
}

fn encode_from(
    c: &Configuration,
    origin: i64,
    m: &Machine,
    p: &Presentation,
) -> Result<Word, CalculusError> {
    let last_nonblank = c.tape().keys().next_back().copied().unwrap_or(c.head);
    let mut gens = Vec::new();
    for cell in origin..c.head {
        gens.push(digit_gen(p, m, c.read(cell)));
    }
    gens.push(state_gen(p, m, c.state));
    gens.push(digit_gen(p, m, c.scanned()));
    for cell in c.head + 1..=last_nonblank {
        gens.push(digit_gen(p, m, c.read(cell)));
    }
    gens.push(p.terminator()?);
    Word::new(gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::LeftToRight => "L2R",
            Direction::RightToLeft => "R2L",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteStep {
    pub relation: usize,
    pub direction: Direction,
    /// 0-based index of the replaced occurrence in the previous word.
    pub position: usize,
    pub result: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub start: Word,
    pub steps: Vec<RewriteStep>,
}

impl Derivation {
    pub fn end(&self) -> &Word {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.start)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn sides(rel: &Relation, dir: Direction) -> (&Word, &Word) {
    match dir {
        Direction::LeftToRight => (&rel.lhs, &rel.rhs),
        Direction::RightToLeft => (&rel.rhs, &rel.lhs),
    }
}

/// Applies one relation at one position, if the cited side occurs there.
pub fn apply(w: &Word, p: &Presentation, relation: usize, dir: Direction, at: usize) -> Option<Word> {
    let rel = p.relations.get(relation)?;
    let (from, to) = sides(rel, dir);
    w.occurs_at(from, at).then(|| w.replace(at, from.len(), to))
}

/// Every single-relation rewrite of `w`, in relation order, left-to-right
/// before right-to-left, positions ascending.
pub fn neighbors(w: &Word, p: &Presentation) -> Vec<RewriteStep> {
    let mut out = Vec::new();
    for (idx, rel) in p.relations.iter().enumerate() {
        for dir in [Direction::LeftToRight, Direction::RightToLeft] {
            let (from, to) = sides(rel, dir);
            if from.len() > w.len() {
                continue;
            }
            for at in 0..=w.len() - from.len() {
                if w.occurs_at(from, at) {
                    out.push(RewriteStep {
                        relation: idx,
                        direction: dir,
                        position: at,
                        result: w.replace(at, from.len(), to),
                    });
                }
            }
        }
    }
    out
}

pub fn verify_derivation(d: &Derivation, p: &Presentation) -> bool {
    let mut current = &d.start;
    for s in &d.steps {
        match apply(current, p, s.relation, s.direction, s.position) {
            Some(next) if next == s.result => current = &s.result,
            _ => return false,
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_len: usize,
    pub max_visited: usize,
}

impl Bounds {
    pub const DEFAULT_MAX_VISITED: usize = 1_000_000;

    /// Word length cap of the longer word plus 4.
    pub fn for_words(a: &Word, b: &Word) -> Bounds {
        Bounds {
            max_len: a.len().max(b.len()) + 4,
            max_visited: Bounds::DEFAULT_MAX_VISITED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Equivalent(Derivation),
    NotFoundWithinBounds { visited: usize },
}

impl EquivalenceVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceVerdict::Equivalent(_))
    }

    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            EquivalenceVerdict::Equivalent(d) => Some(d),
            EquivalenceVerdict::NotFoundWithinBounds { .. } => None,
        }
    }
}

struct Search {
    words: Vec<Word>,
    parent: Vec<Option<(usize, RewriteStep)>>,
    seen: HashMap<Word, usize>,
}

impl Search {
    fn derivation_to(&self, mut idx: usize) -> Derivation {
        let mut steps = Vec::new();
        while let Some((prev, step)) = &self.parent[idx] {
            steps.push(step.clone());
            idx = *prev;
        }
        steps.reverse();
        Derivation {
            start: self.words[0].clone(),
            steps,
        }
    }
}

/// Breadth-first search over words of length at most `max_len`, visiting at
/// most `max_visited` distinct words. Shortest derivations are found first.
fn bfs(
    start: &Word,
    p: &Presentation,
    bounds: Bounds,
    mut stop: impl FnMut(&Word) -> bool,
) -> (Search, Option<usize>) {
    let mut s = Search {
        words: vec![start.clone()],
        parent: vec![None],
        seen: HashMap::from([(start.clone(), 0)]),
    };
    if stop(start) {
        return (s, Some(0));
    }
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        let current = s.words[idx].clone();
        for step in neighbors(&current, p) {
            if step.result.len() > bounds.max_len || s.seen.contains_key(&step.result) {
                continue;
            }
            if s.words.len() >= bounds.max_visited {
                return (s, None);
            }
            let n = s.words.len();
            s.seen.insert(step.result.clone(), n);
            s.words.push(step.result.clone());
            let hit = stop(&step.result);
            s.parent.push(Some((idx, step)));
            if hit {
                return (s, Some(n));
            }
            queue.push_back(n);
        }
    }
    (s, None)
}

pub fn equivalent_within(w1: &Word, w2: &Word, p: &Presentation, bounds: Bounds) -> EquivalenceVerdict {
    let (search, hit) = bfs(w1, p, bounds, |w| w == w2);
    match hit {
        Some(idx) => EquivalenceVerdict::Equivalent(search.derivation_to(idx)),
        None => EquivalenceVerdict::NotFoundWithinBounds {
            visited: search.words.len(),
        },
    }
}

/// All words reachable from `w` within the bounds, in discovery order.
pub fn reachable_within(w: &Word, p: &Presentation, bounds: Bounds) -> Vec<Word> {
    bfs(w, p, bounds, |_| false).0.words
}

/// Turns a simulator trace of a split-form machine into a derivation between
/// the encoded endpoints. Each machine step is one instruction relation,
/// preceded by a right-to-left padding step when a right move needs a blank
/// materialized at the word's end, or followed by a left-to-right padding
/// step when a left move leaves a trailing blank. Halting self-loops in the
/// trace produce no rewrite.
pub fn compile_derivation(
    m: &Machine,
    trace: &[Configuration],
    p: &Presentation,
) -> Result<Derivation, CalculusError> {
    if !m.is_split() {
        return Err(CalculusError::MachineNotSplit);
    }
    let first = trace.first().ok_or(CalculusError::TraceInvalid { step: 0 })?;
    let origin = first.window().0.min(1);
    let term = p.terminator()?;
    let blank = digit_gen(p, m, Symbol::BLANK);
    let padding = p
        .relations
        .iter()
        .position(|r| r.tag == RelationTag::BlankPadding)
        .ok_or(CalculusError::NoTerminator)?;

    let start = encode_from(first, origin, m, p)?;
    let mut word = start.clone();
    let mut steps = Vec::new();
    let mut push = |word: &mut Word, relation: usize, direction: Direction, position: usize| {
        let next = apply(word, p, relation, direction, position)
            .expect("compiled step matches its relation");
        steps.push(RewriteStep {
            relation,
            direction,
            position,
            result: next.clone(),
        });
        *word = next;
    };

    for (t, pair) in trace.windows(2).enumerate() {
        let (here, next) = (&pair[0], &pair[1]);
        let legal = step(m, here)
            .map(|succ| succ.iter().any(|c| c.same_snapshot(next)))
            .unwrap_or(false);
        if !legal || next.time != here.time + 1 {
            return Err(CalculusError::TraceInvalid { step: t });
        }
        if m.is_halting(here.state) {
            continue;
        }
        if next.head < origin {
            return Err(CalculusError::LeftExtension { step: t });
        }
        let read = here.scanned();
        let action = m
            .actions(here.state, read)
            .and_then(|acts| {
                acts.iter().copied().find(|a| {
                    a.next == next.state
                        && here.head + a.movement.delta() == next.head
                        && a.write == next.read(here.head)
                })
            })
            .ok_or(CalculusError::TraceInvalid { step: t })?;
        // position of the state generator in the current word
        let at = (here.head - origin) as usize;
        let q = state_gen(p, m, here.state);
        let q_next = state_gen(p, m, action.next);
        let a = digit_gen(p, m, read);
        let find = |lhs: &[Gen], rhs: &[Gen]| {
            p.relations
                .iter()
                .position(|r| r.lhs.gens() == lhs && r.rhs.gens() == rhs)
                .ok_or(CalculusError::TraceInvalid { step: t })
        };
        match action.movement {
            Move::Stay => {
                let b = digit_gen(p, m, action.write);
                let rel = find(&[q, a], &[q_next, b])?;
                push(&mut word, rel, Direction::LeftToRight, at);
            }
            Move::Right => {
                if word.gens()[at + 2] == term {
                    push(&mut word, padding, Direction::RightToLeft, at + 2);
                }
                let rel = find(&[q, a], &[a, q_next])?;
                push(&mut word, rel, Direction::LeftToRight, at);
            }
            Move::Left => {
                let dk = word.gens()[at - 1];
                let rel = find(&[dk, q, a], &[q_next, dk, a])?;
                push(&mut word, rel, Direction::LeftToRight, at - 1);
                if a == blank && word.gens()[at + 2] == term {
                    push(&mut word, padding, Direction::LeftToRight, at + 1);
                }
            }
        }
        if word != encode_from(next, origin, m, p)? {
            return Err(CalculusError::TraceInvalid { step: t });
        }
    }
    Ok(Derivation { start, steps })
}

/// Bijective base-K numeral of `w`, generators coded `1..=K` in presentation
/// order, most significant token first.
pub fn word_number(w: &Word, p: &Presentation) -> Result<u128, CalculusError> {
    let k = p.generators.len() as u128;
    w.gens().iter().try_fold(0u128, |n, g| {
        n.checked_mul(k)
            .and_then(|n| n.checked_add(g.0 as u128 + 1))
            .ok_or(CalculusError::NumberOverflow)
    })
}

pub fn word_of_number(mut n: u128, p: &Presentation) -> Result<Word, CalculusError> {
    if n == 0 {
        return Err(CalculusError::ZeroNumber);
    }
    let k = p.generators.len() as u128;
    let mut gens = Vec::new();
    while n > 0 {
        n -= 1;
        gens.push(Gen((n % k) as usize));
        n /= k;
    }
    gens.reverse();
    Word::new(gens)
}

/// `q1 0 1^x v` over the demo machine's names.
pub fn input_word(x: usize, p: &Presentation) -> Result<Word, CalculusError> {
    word_from_names(p, ["q1", "0"].into_iter().chain(std::iter::repeat_n("1", x)).chain([TERMINATOR]))
}

/// `q0 0 1^i v`.
pub fn output_word(i: usize, p: &Presentation) -> Result<Word, CalculusError> {
    word_from_names(p, ["q0", "0"].into_iter().chain(std::iter::repeat_n("1", i)).chain([TERMINATOR]))
}

fn word_from_names<'a>(p: &Presentation, names: impl IntoIterator<Item = &'a str>) -> Result<Word, CalculusError> {
    let gens = names
        .into_iter()
        .map(|n| p.gen_by_name(n).ok_or_else(|| CalculusError::UnknownGenerator(n.to_owned())))
        .collect::<Result<Vec<_>, _>>()?;
    Word::new(gens)
}

/// Alphabetic number of `q1 0 1^x v`.
pub fn phi(x: usize, p: &Presentation) -> Result<u128, CalculusError> {
    word_number(&input_word(x, p)?, p)
}

/// Bounded test of whether word number `n` is equivalent to `q0 0 1^i v`.
pub fn in_p(n: u128, i: usize, p: &Presentation, bounds: Bounds) -> Result<EquivalenceVerdict, CalculusError> {
    let w = word_of_number(n, p)?;
    let target = output_word(i, p)?;
    Ok(equivalent_within(&w, &target, p, bounds))
}

/// Bounded search for `a v == q0 v`. For a configuration word `a` (no
/// terminator) a hit proves `v` is a left-division witness.
pub fn divides_q0v(a: &Word, p: &Presentation, bounds: Bounds) -> Result<EquivalenceVerdict, CalculusError> {
    let term = p.terminator()?;
    let with_v = a.concat(&Word(vec![term]));
    let target = word_from_names(p, ["q0", TERMINATOR])?;
    Ok(equivalent_within(&with_v, &target, p, bounds))
}

/// Starting configuration `q1 0 1^x` of the demo machine: head on cell 1
/// (a blank), ones in cells `2..=x+1`.
pub fn demo_start(m: &Machine, x: usize) -> Configuration {
    let start = m.state_by_name("q1").unwrap_or(m.initial());
    let mut c = Configuration::new(start, 1);
    if let Some(one) = m.symbol_by_name("1") {
        for cell in 2..=x as i64 + 1 {
            c.write(cell, one);
        }
    }
    c
}
