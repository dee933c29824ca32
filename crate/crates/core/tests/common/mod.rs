//! Seeded random generators shared by the integration test targets.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use tmreduce::cnf::{build_catalog, Assignment, Clause, CnfInstance, Literal, VarCatalog};
use tmreduce::machine::{Action, Machine, Move, StateId, Symbol};
use tmreduce::postmarkov::{neighbors, Derivation, Gen, Presentation, Word};

/// Random machine with 3..=6 states and 2..=4 tape symbols; roughly a third
/// of the defined entries carry a second choice.
pub fn random_machine(rng: &mut StdRng) -> Machine {
    let nstates = rng.gen_range(3..=6);
    let nsyms = rng.gen_range(2..=4);
    let tape: Vec<String> = std::iter::once("_".to_owned())
        .chain((1..nsyms).map(|i| format!("s{i}")))
        .collect();
    let states: Vec<String> = (0..nstates).map(|i| format!("q{i}")).collect();
    let input: Vec<Symbol> = (1..nsyms).filter(|_| rng.gen_bool(0.8)).map(Symbol).collect();
    let mut trans = BTreeMap::new();
    // state 0 initial, 1 accept, 2 reject
    for q in (0..nstates).filter(|&q| q != 1 && q != 2) {
        for s in 0..nsyms {
            if rng.gen_bool(0.2) {
                continue;
            }
            let mut acts: Vec<Action> = Vec::new();
            for _ in 0..rng.gen_range(1..=2) {
                let a = Action {
                    next: StateId(rng.gen_range(0..nstates)),
                    write: Symbol(rng.gen_range(0..nsyms)),
                    movement: [Move::Left, Move::Stay, Move::Right][rng.gen_range(0..3)],
                };
                if !acts.contains(&a) {
                    acts.push(a);
                }
            }
            trans.insert((StateId(q), Symbol(s)), acts);
        }
    }
    Machine::new(tape, input, states, StateId(0), StateId(1), StateId(2), trans).unwrap()
}

/// Clauses of `width` distinct variables with random signs.
pub fn random_kcnf(rng: &mut StdRng, nvars: u32, nclauses: usize, width: usize) -> CnfInstance {
    let vars: Vec<u32> = (1..=nvars).collect();
    let clauses = (0..nclauses)
        .map(|_| {
            let picked: Vec<u32> = vars.choose_multiple(rng, width.min(vars.len())).copied().collect();
            Clause::new(picked.into_iter().map(|v| Literal::new(v, rng.gen_bool(0.5))))
        })
        .collect();
    CnfInstance::new(nvars, clauses).unwrap()
}

/// Ragged clauses, with repeated variables and the occasional empty clause.
pub fn random_cnf(rng: &mut StdRng) -> CnfInstance {
    let nvars = rng.gen_range(0..=30);
    let nclauses = rng.gen_range(0..=40);
    let clauses = (0..nclauses)
        .map(|_| {
            if nvars == 0 {
                return Clause::new([]);
            }
            let len = rng.gen_range(0..=6);
            Clause::new((0..len).map(|_| Literal::new(rng.gen_range(1..=nvars), rng.gen_bool(0.5))))
        })
        .collect();
    CnfInstance::new(nvars, clauses).unwrap()
}

/// Complete catalog for random small bounds, numbered in shuffled order.
pub fn random_catalog(rng: &mut StdRng) -> VarCatalog {
    let (p, r, v) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=3));
    let mut coords = build_catalog(p, r, v).coords().to_vec();
    if rng.gen_bool(0.5) {
        coords.shuffle(rng);
    }
    VarCatalog::from_coords(p, r, v, coords).unwrap()
}

pub fn random_assignment(rng: &mut StdRng) -> Option<Assignment> {
    if rng.gen_bool(0.2) {
        return None;
    }
    let n = rng.gen_range(0..=50);
    Some(Assignment::from_values((0..n).map(|_| rng.gen_bool(0.5)).collect()))
}

pub fn random_word(rng: &mut StdRng, ngens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    Word::new((0..len).map(|_| Gen(rng.gen_range(0..ngens))).collect()).unwrap()
}

/// Random generators (digits, states, the terminator) and random relations.
pub fn random_presentation(rng: &mut StdRng) -> Presentation {
    let mut names: Vec<String> = (0..rng.gen_range(1..=3)).map(|i| format!("a{i}")).collect();
    names.extend((0..rng.gen_range(1..=3)).map(|i| format!("q{i}")));
    names.push("v".to_owned());
    names.shuffle(rng);
    let n = names.len();
    let rels = (0..rng.gen_range(0..=6))
        .map(|_| (random_word(rng, n, 3), random_word(rng, n, 3)))
        .collect();
    Presentation::new(names, rels).unwrap()
}

/// A random walk of up to 8 rewrites from a random word.
pub fn random_derivation(rng: &mut StdRng, p: &Presentation) -> Derivation {
    let start = random_word(rng, p.generators().len(), 6);
    let mut steps = Vec::new();
    let mut current = start.clone();
    for _ in 0..rng.gen_range(0..=8) {
        let options = neighbors(&current, p);
        let Some(step) = options.choose(rng) else {
            break;
        };
        current = step.result.clone();
        steps.push(step.clone());
    }
    Derivation { start, steps }
}
