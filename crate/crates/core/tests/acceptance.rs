//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tmreduce::cnf::CnfInstance;
use tmreduce::cooklevin::{decode, reduce, verify_tableau, Group, ReductionOutput};
use tmreduce::corpus;
use tmreduce::dpll::{brute_force, check_model, solve};
use tmreduce::formats::*;
use tmreduce::machine::{accepts_within, run_from, Machine, Move, StateId, Symbol, Verdict};
use tmreduce::postmarkov::{
    build_calculus, compile_derivation, demo_start, divides_q0v, equivalent_within, in_p, input_word, output_word,
    phi, reachable_within, verify_derivation, Bounds, Presentation, Word,
};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Criteria 1 and 2 share the grid.
fn reduction_grid() -> (Outcome, Outcome) {
    let start = Instant::now();
    let (mut cases, mut agree, mut sat, mut decoded) = (0, 0, 0, 0);
    let mut first_disagreement = None;
    let mut first_decode_failure = None;
    for m in corpus::cook_levin_corpus() {
        for w in corpus::all_words(m.input_alphabet(), 4) {
            let n = w.len() as u32;
            for p in n.max(1)..=n + 6 {
                cases += 1;
                let out = reduce(&m, &w, p).expect("reduce");
                let verdict = solve(&out.formula);
                let expected = accepts_within(&m, &w, p as u64);
                if verdict.is_sat() == expected {
                    agree += 1;
                } else if first_disagreement.is_none() {
                    first_disagreement = Some(format!("{} on {:?} p={p}", m.state_name(m.initial()), m.format_word(&w)));
                }
                if let Some(model) = verdict.model() {
                    sat += 1;
                    match decode(model, &out).map(|t| verify_tableau(&t, &out.machine, &out.input)) {
                        Ok(Ok(())) => decoded += 1,
                        other => {
                            first_decode_failure.get_or_insert(format!("p={p}: {other:?}"));
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let c1 = if agree == cases && elapsed < Duration::from_secs(60) {
        Ok(format!("{agree}/{cases} verdicts agree with accepts_within in {:.2?}", elapsed))
    } else {
        Err(format!("{agree}/{cases} agree in {:.2?}; first disagreement: {first_disagreement:?}", elapsed))
    };
    let c2 = if decoded == sat && sat > 0 {
        Ok(format!("{decoded}/{sat} models decode to verified tableaux"))
    } else {
        Err(format!("{decoded}/{sat} verified; first failure: {first_decode_failure:?}"))
    };
    (c1, c2)
}

/// G6b count from the transition table: one clause per guarded combination
/// without an in-range successor, `3^c` for `c` in-range successors.
fn g6b_expected(m: &Machine, p: u64) -> u64 {
    let w = |c: u64| if c == 0 { 1 } else { 3u64.pow(c as u32) };
    let mut per_step = 0;
    for k in 0..m.states().len() {
        let state = StateId(k);
        for l in 0..m.tape_alphabet().len() {
            let acts = m.actions(state, Symbol(l)).unwrap_or(&[]);
            let (c, left, right) = if m.is_halting(state) {
                (1, 0, 0)
            } else {
                (
                    acts.len() as u64,
                    acts.iter().filter(|a| a.movement == Move::Left).count() as u64,
                    acts.iter().filter(|a| a.movement == Move::Right).count() as u64,
                )
            };
            // interior cells, then the leftmost and rightmost cell
            per_step += 2 * p * w(c) + w(c - left) + w(c - right);
        }
    }
    p * per_step
}

fn size_formulas() -> Outcome {
    let mut checked = 0;
    for m in corpus::cook_levin_corpus() {
        let input: Vec<Symbol> = m.input_alphabet().iter().take(1).copied().collect();
        for p in [1u32, 2, 4, 8] {
            let out = reduce(&m, &input, p).map_err(|e| e.to_string())?;
            let (pp, r, v) = (p as u64, m.states().len() as u64 - 1, m.tape_alphabet().len() as u64 - 1);
            let cells = 2 * pp + 2;
            let u = (pp + 1) * (r + 1) + (pp + 1) * cells + (pp + 1) * cells * (v + 1);
            check(out.formula.nvars() as u64 == u, format!("|U| at p={p}: {} != {u}", out.formula.nvars()))?;
            let expected = [
                (Group::G1, (pp + 1) * (1 + c2(r + 1))),
                (Group::G2, (pp + 1) * (1 + c2(cells))),
                (Group::G3, (pp + 1) * cells * (1 + c2(v + 1))),
                (Group::G4, 2 + cells),
                (Group::G5, 1),
                (Group::G6a, pp * cells * (v + 1)),
                (Group::G6b, g6b_expected(&m, pp)),
            ];
            for (g, want) in expected {
                let got = out.group_count(g) as u64;
                check(got == want, format!("{} at p={p}: {got} != {want}", g.name()))?;
            }
            let total: u64 = expected.iter().map(|e| e.1).sum();
            check(out.formula.len() as u64 == total, "groups do not cover the formula")?;
            checked += 1;
        }
    }
    Ok(format!("|U| and all seven group counts exact for {checked} (machine, p) pairs"))
}

fn length_trend() -> Outcome {
    let m = corpus::m1();
    let x = m.parse_input("1").unwrap();
    let mut ratios = Vec::new();
    let mut clause_ratios = Vec::new();
    for p in [4u32, 8, 16] {
        let out: ReductionOutput = reduce(&m, &x, p).map_err(|e| e.to_string())?;
        let len = out.formula.nvars() as f64 * out.formula.len() as f64;
        ratios.push(len / (p as f64).powi(4));
        clause_ratios.push(out.formula.len() as f64 / (p as f64).powi(2));
    }
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let report = format!(
        "|U||C|/p^4 = {:.1}, {:.1}, {:.1} (spread {:.2}); |C|/p^2 = {:.1}, {:.1}, {:.1} (reported only)",
        ratios[0],
        ratios[1],
        ratios[2],
        max / min,
        clause_ratios[0],
        clause_ratios[1],
        clause_ratios[2]
    );
    if max / min <= 2.0 {
        Ok(report)
    } else {
        Err(report)
    }
}

fn solver_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xacce_0005);
    let start = Instant::now();
    let mut sats = 0;
    for case in 0..500 {
        let nvars = rng.gen_range(3..=16u32);
        let ratio: f64 = rng.gen_range(3.0..=5.0);
        let f: CnfInstance = common::random_kcnf(&mut rng, nvars, (ratio * nvars as f64).round() as usize, 3);
        let got = solve(&f);
        let want = brute_force(&f).map_err(|e| e.to_string())?;
        check(got.is_sat() == want.is_sat(), format!("case {case}: verdicts differ"))?;
        if let Some(model) = got.model() {
            check(check_model(&f, model), format!("case {case}: model fails"))?;
            sats += 1;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(30), format!("took {elapsed:.2?}"))?;
    Ok(format!("500/500 agree ({sats} SAT) in {elapsed:.2?}"))
}

fn bounds(x: usize) -> Bounds {
    Bounds {
        max_len: x + 6,
        max_visited: 1_000_000,
    }
}

fn parity() -> (Machine, Presentation) {
    let m = corpus::parity();
    let p = build_calculus(&m).unwrap();
    (m, p)
}

fn correspondence() -> Outcome {
    let (m, p) = parity();
    let mut slowest = Duration::ZERO;
    for x in 0..=6 {
        let start = Instant::now();
        let r = run_from(&m, demo_start(&m, x), 10_000).map_err(|e| e.to_string())?;
        check(r.verdict == Verdict::Accepted, format!("x={x}: run did not halt in q0"))?;
        let d = compile_derivation(&m, &r.trace, &p).map_err(|e| format!("x={x}: {e}"))?;
        check(verify_derivation(&d, &p), format!("x={x}: compiled derivation rejected"))?;
        let from = input_word(x, &p).unwrap();
        let to = output_word(x % 2, &p).unwrap();
        check(d.start == from, format!("x={x}: derivation starts elsewhere"))?;
        let verdict = equivalent_within(&from, &to, &p, bounds(x));
        let proof = verdict.derivation().ok_or(format!("x={x}: equivalence not found"))?;
        check(verify_derivation(proof, &p), format!("x={x}: search derivation rejected"))?;
        let t = start.elapsed();
        check(t < Duration::from_secs(10), format!("x={x}: took {t:.2?}"))?;
        slowest = slowest.max(t);
    }
    Ok(format!("x = 0..6 derived, verified and found; slowest x took {slowest:.2?}"))
}

fn left_divisibility() -> Outcome {
    let (_, p) = parity();
    let mut report = Vec::new();
    for x in 0..=6 {
        let full = input_word(x, &p).unwrap();
        let a = Word::new(full.gens()[..full.len() - 1].to_vec()).unwrap();
        let verdict = divides_q0v(&a, &p, bounds(x)).map_err(|e| e.to_string())?;
        if x % 2 == 0 {
            let d = verdict.derivation().ok_or(format!("x={x}: expected equivalent"))?;
            check(verify_derivation(d, &p), format!("x={x}: derivation rejected"))?;
            report.push(format!("{x}:eq"));
        } else {
            check(!verdict.is_equivalent(), format!("x={x}: expected not-found"))?;
            report.push(format!("{x}:nf"));
        }
    }
    Ok(format!("divides_q0v(q1 0 1^x) {}", report.join(" ")))
}

fn phi_instances() -> Outcome {
    let (_, p) = parity();
    let mut hits = 0;
    for x in 0..=6 {
        let n = phi(x, &p).map_err(|e| e.to_string())?;
        for i in 0..=1 {
            let verdict = in_p(n, i, &p, bounds(x)).map_err(|e| e.to_string())?;
            check(verdict.is_equivalent() == (x % 2 == i), format!("x={x}, i={i}: wrong verdict"))?;
            if let Some(d) = verdict.derivation() {
                check(verify_derivation(d, &p), format!("x={x}, i={i}: derivation rejected"))?;
                hits += 1;
            }
        }
    }
    Ok(format!("14/14 in_P verdicts match x mod 2 ({hits} equivalent)"))
}

fn bounded_exhaustion() -> Outcome {
    let p = parse_presentation("generators: a0 a1 v\nrel: a0 v == v\n").map_err(|e| e.to_string())?;
    let v = p.parse_word("v").unwrap();
    let b = Bounds {
        max_len: 3,
        max_visited: 1_000_000,
    };
    let mut got: Vec<String> = reachable_within(&v, &p, b).iter().map(|w| p.format_word(w)).collect();
    got.sort();
    check(got == ["a0 a0 v", "a0 v", "v"], format!("reachable set {got:?}"))?;
    let target = p.parse_word("a1 v").unwrap();
    check(!equivalent_within(&v, &target, &p, b).is_equivalent(), "v ~ a1 v reported")?;
    Ok("reachable(v) = {v, a0 v, a0 a0 v}; v vs a1 v not found within bounds".into())
}

fn round_trips() -> Outcome {
    let mut count = 0;
    for m in corpus::all() {
        check(parse_machine(&emit_machine(&m)).as_ref() == Ok(&m), "corpus machine")?;
        count += 1;
    }
    for m in corpus::cook_levin_corpus() {
        let out = reduce(&m, &[], 2).unwrap();
        check(parse_dimacs(&emit_dimacs(&out.formula)).as_ref() == Ok(&out.formula), "corpus dimacs")?;
        check(parse_varmap(&emit_varmap(&out.catalog)).as_ref() == Ok(&out.catalog), "corpus varmap")?;
        let model = solve(&out.formula).model().cloned();
        check(parse_solution(&emit_solution(model.as_ref())) == Ok(model), "corpus solution")?;
        count += 4;
    }
    let (m, pres) = parity();
    check(parse_presentation(&emit_presentation(&pres)).as_ref() == Ok(&pres), "parity presentation")?;
    for x in 0..=6 {
        let r = run_from(&m, demo_start(&m, x), 10_000).unwrap();
        let d = compile_derivation(&m, &r.trace, &pres).unwrap();
        check(parse_derivation(&emit_derivation(&d, &pres), &pres).as_ref() == Ok(&d), "parity derivation")?;
    }
    count += 8;

    let mut rng = StdRng::seed_from_u64(0xacce_0010);
    for i in 0..100 {
        let m = common::random_machine(&mut rng);
        check(parse_machine(&emit_machine(&m)).as_ref() == Ok(&m), format!("random machine {i}"))?;
        let f = common::random_cnf(&mut rng);
        check(parse_dimacs(&emit_dimacs(&f)).as_ref() == Ok(&f), format!("random dimacs {i}"))?;
        let cat = common::random_catalog(&mut rng);
        check(parse_varmap(&emit_varmap(&cat)).as_ref() == Ok(&cat), format!("random varmap {i}"))?;
        let a = common::random_assignment(&mut rng);
        check(parse_solution(&emit_solution(a.as_ref())) == Ok(a), format!("random solution {i}"))?;
        let p = common::random_presentation(&mut rng);
        check(parse_presentation(&emit_presentation(&p)).as_ref() == Ok(&p), format!("random presentation {i}"))?;
        let d = common::random_derivation(&mut rng, &p);
        check(parse_derivation(&emit_derivation(&d, &p), &p).as_ref() == Ok(&d), format!("random derivation {i}"))?;
        count += 6;
    }
    Ok(format!("{count} round trips (corpus plus 100 random per format) are identities"))
}

fn main() {
    let (c1, c2) = reduction_grid();
    let results: Vec<(&str, Outcome)> = vec![
        ("reduction soundness and completeness", c1),
        ("model decoding", c2),
        ("size formulas", size_formulas()),
        ("encoding-length trend", length_trend()),
        ("solver oracle equivalence", solver_oracle()),
        ("calculus correspondence", correspondence()),
        ("left divisibility by q0 v", left_divisibility()),
        ("phi / P instances", phi_instances()),
        ("bounded exhaustion", bounded_exhaustion()),
        ("format round trips", round_trips()),
    ];
    let mut failed = 0;
    for (n, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
