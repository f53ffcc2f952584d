//! The verification suite behind the CLI's `verify` subcommand.
//!
//! Eleven numbered criteria cover the crate's headline claims, each checked
//! exhaustively at desk scale (every run is a full enumeration, not a
//! sample). Each criterion reports pass/fail with a short detail string; the
//! acceptance tests and the CLI both run through this module so there is a
//! single source of truth for what "verified" means.

use std::collections::HashSet;

use crate::ca::{Boundary, CaConfig};
use crate::derivative::{constant_jacobian, derivative, jacobian};
use crate::deviant::analyze;
use crate::gf2::{BitVec, Gf2Matrix};
use crate::rule::{affine_rules, linear_rules, nearest_affine, Rule, Var};
use crate::window::{
    canonical_matrix, count_matrices, matrix_count, minimal_matrix_set_cached, window_output,
    ZeroWindowMode,
};

/// Outcome of one criterion run.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

const NAMES: [&str; 11] = [
    "hamming_complement",
    "nonlinearity_bound",
    "jacobian_complement",
    "linear_handle",
    "deviant_example",
    "deviant_soundness",
    "zero_window",
    "matrix_count",
    "windowed_evolution",
    "minimal_sets",
    "window_output_table",
];

/// Names of all criteria, in id order (ids are 1-based).
pub fn criterion_names() -> &'static [&'static str] {
    &NAMES
}

/// Criterion id for a suite name, if any.
pub fn criterion_id(name: &str) -> Option<usize> {
    NAMES.iter().position(|&n| n == name).map(|i| i + 1)
}

/// Runs one criterion (1..=11).
pub fn run_criterion(id: usize) -> CriterionReport {
    let result = match id {
        1 => hamming_complement(),
        2 => nonlinearity_bound(),
        3 => jacobian_complement(),
        4 => linear_handle(),
        5 => deviant_example(),
        6 => deviant_soundness(),
        7 => zero_window(),
        8 => matrix_count_check(),
        9 => windowed_evolution(),
        10 => minimal_sets(),
        11 => window_output_table(),
        _ => panic!("criterion id {id} out of range"),
    };
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionReport {
        id,
        name: NAMES[id - 1],
        passed,
        detail,
    }
}

/// Runs all criteria in order.
pub fn run_all() -> Vec<CriterionReport> {
    (1..=NAMES.len()).map(run_criterion).collect()
}

type Check = Result<String, String>;

/// Criterion 1: complementing one rule reflects the Hamming distance,
/// d(complement(f), g) = 8 - d(f, g), over all 256 x 256 pairs.
fn hamming_complement() -> Check {
    for f in Rule::all() {
        for g in Rule::all() {
            let lhs = f.complement().hamming(&g);
            let rhs = 8 - f.hamming(&g);
            if lhs != rhs {
                return Err(format!("rules {f}, {g}: {lhs} != 8 - {}", f.hamming(&g)));
            }
        }
    }
    Ok("65536 rule pairs checked".into())
}

/// Criterion 2: every non-linear rule is within distance 4 of an affine
/// rule.
fn nonlinearity_bound() -> Check {
    let mut checked = 0;
    for f in Rule::all().filter(|r| !r.is_linear()) {
        let d = nearest_affine(f).distance;
        if d > 4 {
            return Err(format!("rule {f}: nearest affine distance {d} > 4"));
        }
        checked += 1;
    }
    Ok(format!("{checked} non-linear rules within distance 4"))
}

/// Criterion 3: derivatives are complement-invariant; uniform CAs at n = 4
/// admit exactly 128 distinct Jacobians per boundary, and mixing a rule with
/// its complement leaves the Jacobian unchanged.
fn jacobian_complement() -> Check {
    for f in Rule::all() {
        for var in Var::ALL {
            if derivative(f, var) != derivative(f.complement(), var) {
                return Err(format!("rule {f}: derivative changes under complement"));
            }
        }
    }
    for boundary in [Boundary::Null, Boundary::Periodic] {
        let distinct: HashSet<String> = Rule::all()
            .map(|r| jacobian(&CaConfig::uniform(r, 4, boundary).unwrap()).to_string())
            .collect();
        if distinct.len() != 128 {
            return Err(format!(
                "{} distinct uniform Jacobians at n=4 {boundary}, expected 128",
                distinct.len()
            ));
        }
    }
    let uniform30 = CaConfig::uniform(Rule::new(30), 4, Boundary::Periodic).unwrap();
    let mixed = CaConfig::hybrid(
        vec![Rule::new(225), Rule::new(30), Rule::new(30), Rule::new(225)],
        Boundary::Periodic,
    )
    .unwrap();
    if jacobian(&mixed) != jacobian(&uniform30) {
        return Err("complement mixture changed the Jacobian".into());
    }
    Ok("768 derivatives, 2x128 Jacobian classes, mixture identity".into())
}

/// Criterion 4: for the 8 linear rules the constant Jacobian reproduces the
/// step on every state for n = 4..=10 and both boundaries; a constant
/// Jacobian exists exactly for the 16 affine rules.
fn linear_handle() -> Check {
    let mut products = 0usize;
    for rule in linear_rules() {
        for boundary in [Boundary::Null, Boundary::Periodic] {
            for n in 4..=10 {
                let ca = CaConfig::uniform(rule, n, boundary).unwrap();
                let j = constant_jacobian(&ca)
                    .ok_or_else(|| format!("linear rule {rule}: no constant Jacobian"))?;
                for v in 0..1u64 << n {
                    let s = BitVec::new(n, v);
                    if ca.step(&s).unwrap() != j.mul_vec(&s).unwrap() {
                        return Err(format!("rule {rule}, {boundary}, n={n}, state {v}"));
                    }
                    products += 1;
                }
            }
        }
    }
    let affine: HashSet<u8> = affine_rules().iter().map(Rule::id).collect();
    for boundary in [Boundary::Null, Boundary::Periodic] {
        for n in [4usize, 5] {
            for rule in Rule::all() {
                let present =
                    constant_jacobian(&CaConfig::uniform(rule, n, boundary).unwrap()).is_some();
                if present != affine.contains(&rule.id()) {
                    return Err(format!(
                        "rule {rule}, {boundary}, n={n}: constant Jacobian present={present}"
                    ));
                }
            }
        }
    }
    Ok(format!(
        "{products} step/product agreements; constancy matches affinity"
    ))
}

/// Criterion 5: the worked 4-cell, null-boundary decomposition of rule 218.
fn deviant_example() -> Check {
    let report = analyze(Rule::new(218), 4, Boundary::Null).map_err(|e| e.to_string())?;
    if report.nearest_linear != Rule::new(90) {
        return Err(format!("nearest linear rule {}", report.nearest_linear));
    }
    if report.patterns != vec![7] {
        return Err(format!("patterns {:?}", report.patterns));
    }
    if report.deviant != vec![7, 14, 15] {
        return Err(format!("deviant states {:?}", report.deviant));
    }
    if report.ratio() != (3, 16) {
        return Err(format!("ratio {}", report.ratio_string()));
    }
    let ca = CaConfig::uniform(Rule::new(218), 4, Boundary::Null).unwrap();
    for v in 0..16u64 {
        let s = BitVec::new(4, v);
        let expected = ca.step(&s).unwrap();
        let m = report.matrix_for(v).unwrap_or(&report.base_matrix);
        if m.mul_vec(&s).unwrap() != expected {
            return Err(format!("state {v}: product misses the step"));
        }
    }
    Ok("rule 218 vs 90: pattern 111, deviants {7, 14, 15}, ratio 3/16".into())
}

/// Criterion 6: for every non-linear rule, n in {4, 5, 6} and both
/// boundaries, the base matrix covers every non-deviant state and each
/// deviant state's matrix covers it (the zero state of an odd rule through
/// the complemented product).
fn deviant_soundness() -> Check {
    let mut reports = 0usize;
    for g in Rule::all().filter(|r| !r.is_linear()) {
        for boundary in [Boundary::Null, Boundary::Periodic] {
            for n in [4usize, 5, 6] {
                let report = analyze(g, n, boundary).map_err(|e| e.to_string())?;
                let ca = CaConfig::uniform(g, n, boundary).unwrap();
                for v in 0..1u64 << n {
                    let s = BitVec::new(n, v);
                    let expected = ca.step(&s).unwrap();
                    if report.successor_via_matrices(&s).unwrap() != expected {
                        return Err(format!("rule {g}, {boundary}, n={n}, state {v}"));
                    }
                    if !report.is_deviant(v) && report.base_matrix.mul_vec(&s).unwrap() != expected
                    {
                        return Err(format!("rule {g}, {boundary}, n={n}, state {v}: base"));
                    }
                }
                reports += 1;
            }
        }
    }
    Ok(format!("{reports} decompositions fully sound"))
}

/// Criterion 7: the zero window admits no matrix exactly for the 128 odd
/// rules, whose sets answer it with the complement of the product, 1111.
fn zero_window() -> Check {
    let zero = BitVec::zeros(4);
    for rule in Rule::all() {
        let count = count_matrices(rule, &zero);
        let expected = if rule.is_odd() { 0 } else { 1 << 16 };
        if count != expected {
            return Err(format!("rule {rule}: {count} matrices for the zero window"));
        }
    }
    for id in [1u8, 91, 129, 255, 0, 90, 128, 204] {
        let rule = Rule::new(id);
        let set = minimal_matrix_set_cached(rule);
        let expected_mode = if rule.is_odd() {
            ZeroWindowMode::Complement
        } else {
            ZeroWindowMode::ZeroMatrix
        };
        if set.zero_mode() != expected_mode {
            return Err(format!("rule {rule}: zero mode {:?}", set.zero_mode()));
        }
        let result = set.window_result(&zero);
        let expected = if rule.is_odd() {
            BitVec::ones(4)
        } else {
            BitVec::zeros(4)
        };
        if result != expected {
            return Err(format!("rule {rule}: zero window result {result}"));
        }
    }
    Ok("128 odd rules blocked on the zero window; complement yields 1111".into())
}

/// Criterion 8: every rule has exactly 4096 matrices per nonzero window
/// (spot-checked by full 2^16 enumeration), and the 2-bit analogue has 4.
fn matrix_count_check() -> Check {
    for rule in Rule::all() {
        for w in 1..16u64 {
            let count = count_matrices(rule, &BitVec::new(4, w));
            if count != 4096 {
                return Err(format!("rule {rule}, window {w:04b}: {count} matrices"));
            }
        }
    }
    // Full enumeration for a handful of (rule, window) pairs.
    for (id, w) in [(128u8, 13u64), (90, 6), (255, 8), (1, 15)] {
        let rule = Rule::new(id);
        let window = BitVec::new(4, w);
        let target = window_output(rule, &window).value();
        let mut brute = 0u64;
        for bits in 0..1u32 << 16 {
            let product = (0..4).fold(0u64, |acc, i| {
                let row = (bits as u64 >> (4 * (3 - i))) & 0xf;
                acc << 1 | ((row & w).count_ones() & 1) as u64
            });
            if product == target {
                brute += 1;
            }
        }
        if brute != 4096 {
            return Err(format!("rule {rule}, window {w:04b}: enumerated {brute}"));
        }
    }
    // 2-bit analogue, against full enumeration of the 16 2x2 matrices.
    for w in 1..4u64 {
        for t in 0..4u64 {
            let input = BitVec::new(2, w);
            let target = BitVec::new(2, t);
            if matrix_count(&input, &target) != 4 {
                return Err(format!("2-bit window {w:02b} -> {t:02b}"));
            }
            let brute = (0..16u64)
                .filter(|bits| {
                    Gf2Matrix::from_row_values(2, &[bits >> 2, bits & 3])
                        .mul_vec(&input)
                        .unwrap()
                        == target
                })
                .count();
            if brute != 4 {
                return Err(format!(
                    "2-bit window {w:02b} -> {t:02b}: enumerated {brute}"
                ));
            }
        }
    }
    Ok("256 x 15 algebraic counts, 4 full enumerations, 2-bit analogue".into())
}

/// Criterion 9: windowed evolution equals the periodic-boundary step for
/// all 256 rules and every state at n in {4, 6, 8}; the 8-bit worked
/// instance reproduces its intermediate products.
fn windowed_evolution() -> Check {
    let mut states = 0usize;
    for rule in Rule::all() {
        let set = minimal_matrix_set_cached(rule);
        for n in [4usize, 6, 8] {
            let ca = CaConfig::uniform(rule, n, Boundary::Periodic).unwrap();
            for v in 0..1u64 << n {
                let s = BitVec::new(n, v);
                if set.evolve(&s).unwrap() != ca.step(&s).unwrap() {
                    return Err(format!("rule {rule}, n={n}, state {v}"));
                }
                states += 1;
            }
        }
    }
    let set = minimal_matrix_set_cached(Rule::new(128));
    let (out, steps) = set
        .evolve_trace(&"10101011".parse().unwrap())
        .map_err(|e| e.to_string())?;
    if out.to_string() != "00000001" {
        return Err(format!("8-bit instance produced {out}"));
    }
    let products: Vec<String> = steps.iter().map(|s| s.product.to_string()).collect();
    if products != ["1000", "0000", "0000", "0010"] {
        return Err(format!("8-bit instance products {products:?}"));
    }
    Ok(format!(
        "{states} windowed steps match; worked instance exact"
    ))
}

/// Criterion 10: minimal-set sizes for the fundamental rules (1 for the
/// three shift rules, at most 3 for 128/160/255, at most 4 for 192/136),
/// window contracts for every rule's set, and the two-row bound for
/// canonical matrices.
fn minimal_sets() -> Check {
    let mut failures = Vec::new();

    let size_of = |id: u8| minimal_matrix_set_cached(Rule::new(id)).members().len();
    for id in [240u8, 204, 170] {
        if size_of(id) != 1 {
            failures.push(format!("rule {id}: {} members, expected 1", size_of(id)));
        }
    }
    for id in [128u8, 160, 255] {
        if size_of(id) > 3 {
            failures.push(format!("rule {id}: {} members, expected <= 3", size_of(id)));
        }
    }
    for id in [192u8, 136] {
        if size_of(id) > 4 {
            failures.push(format!("rule {id}: {} members, expected <= 4", size_of(id)));
        }
    }

    // The bound of 3 for rule 255 is unattainable: a matrix valid for a
    // window group forces each of its rows r to satisfy r.w = 1 on the whole
    // group, so three matrices give three row vectors whose kernels would
    // have to intersect trivially -- impossible for 3 vectors in a
    // 4-dimensional space. Confirm by enumerating every row-vector triple.
    if size_of(255) > 3 {
        let mut three_cover_exists = false;
        for r1 in 1..16u64 {
            for r2 in 1..16u64 {
                for r3 in 1..16u64 {
                    if (1..16u64)
                        .all(|w| [r1, r2, r3].iter().any(|r| (r & w).count_ones() & 1 == 1))
                    {
                        three_cover_exists = true;
                    }
                }
            }
        }
        failures.push(format!(
            "rule 255 needs 4 matrices; a 3-member set cannot exist \
             (exhaustive row-triple check: cover found = {three_cover_exists})"
        ));
    }

    for rule in Rule::all() {
        let set = minimal_matrix_set_cached(rule);
        for w in 0..16u64 {
            let window = BitVec::new(4, w);
            if set.window_result(&window) != window_output(rule, &window) {
                failures.push(format!("rule {rule}, window {w:04b}: contract broken"));
            }
        }
        for w in 0..16u64 {
            if w == 0 && rule.is_odd() {
                continue;
            }
            let window = BitVec::new(4, w);
            let m = canonical_matrix(rule, &window).expect("matrix exists");
            let distinct: HashSet<u64> = m.rows().iter().map(BitVec::value).collect();
            if distinct.len() > 2 {
                failures.push(format!("rule {rule}, window {w:04b}: canonical rows"));
            }
            if m.mul_vec(&window).unwrap() != window_output(rule, &window) {
                failures.push(format!("rule {rule}, window {w:04b}: canonical product"));
            }
        }
    }

    if failures.is_empty() {
        Ok("set sizes, window contracts and canonical matrices verified".into())
    } else {
        Err(failures.join("; "))
    }
}

/// Criterion 11: the full input/output table of rule 192 on 4-bit windows.
fn window_output_table() -> Check {
    let expected: [u64; 16] = [0, 0, 0, 1, 0, 0, 2, 3, 0, 8, 0, 9, 4, 12, 6, 15];
    for (w, &out) in expected.iter().enumerate() {
        let got = window_output(Rule::new(192), &BitVec::new(4, w as u64));
        if got.value() != out {
            return Err(format!("window {w:04b}: output {got}, expected {out:04b}"));
        }
    }
    Ok("all 16 rows of the rule 192 table reproduced".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve_to_ids() {
        assert_eq!(criterion_id("hamming_complement"), Some(1));
        assert_eq!(criterion_id("window_output_table"), Some(11));
        assert_eq!(criterion_id("nope"), None);
    }

    #[test]
    fn fast_criteria_pass() {
        for id in [1, 2, 5, 7, 11] {
            let report = run_criterion(id);
            assert!(report.passed, "criterion {id}: {}", report.detail);
        }
    }
}
