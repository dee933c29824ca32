//! Small machines used by tests, the acceptance suite and the CLI demos.

use crate::formats::parse_machine;
use crate::machine::{Machine, Symbol};

fn load(text: &str) -> Machine {
    parse_machine(text).expect("corpus machine parses")
}

/// Accepts exactly the words starting with `1`.
pub fn m1() -> Machine {
    load(include_str!("../corpus/m1.tm"))
}

/// Accepts unary words of even length.
pub fn unary_parity() -> Machine {
    load(include_str!("../corpus/unary_parity.tm"))
}

/// Nondeterministic palindrome recognizer over `{a, b}`.
pub fn palindrome() -> Machine {
    load(include_str!("../corpus/palindrome.tm"))
}

/// Gets stuck on inputs starting with `1`.
pub fn stuck() -> Machine {
    load(include_str!("../corpus/stuck.tm"))
}

/// Rejects everything in one step.
pub fn rejecter() -> Machine {
    load(include_str!("../corpus/rejecter.tm"))
}

/// Split-form machine computing `x mod 2` on unary input.
pub fn parity() -> Machine {
    load(include_str!("../corpus/parity.tm"))
}

/// The machines used to exercise the tableau reduction.
pub fn cook_levin_corpus() -> Vec<Machine> {
    vec![m1(), unary_parity(), palindrome(), stuck(), rejecter()]
}

pub fn all() -> Vec<Machine> {
    let mut v = cook_levin_corpus();
    v.push(parity());
    v
}

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn all_words(alphabet: &[Symbol], max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Symbol>| {
                alphabet.iter().map(move |&s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
