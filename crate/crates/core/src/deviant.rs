//! Deviant-state decomposition of a non-linear rule's dynamics.
//!
//! Relative to its nearest linear rule `f`, a non-linear rule `g` disagrees
//! only on a handful of 3-bit neighborhoods (the *mismatch patterns*). A
//! state is *deviant* when some cell reads one of those patterns; everywhere
//! else the constant matrix of `f` already maps the state to its successor
//! under `g`. Each deviant state `u` gets its own matrix, obtained from the
//! base matrix by repairing exactly the rows whose parity against `u` is
//! wrong, so the whole transition function of `g` is captured by the base
//! matrix plus one matrix per deviant state.

use serde_json::{json, Map, Value};

use crate::ca::{Boundary, CaConfig};
use crate::derivative::constant_jacobian;
use crate::gf2::{BitVec, Gf2Matrix};
use crate::rule::{nearest_linear, Rule};
use crate::{Error, MAX_ENUM_CELLS};

/// Neighborhood values (0..=7) on which the truth tables of `g` and `f`
/// differ, ascending. The count equals the Hamming distance.
pub fn mismatch_patterns(g: Rule, f: Rule) -> Vec<u8> {
    (0..8)
        .filter(|&v| g.truth_bit(v) != f.truth_bit(v))
        .collect()
}

/// States (as decimals) in which at least one cell's neighborhood is a
/// mismatch pattern of `g` versus `f`, ascending.
pub fn deviant_states(g: Rule, f: Rule, n: usize, boundary: Boundary) -> Result<Vec<u64>, Error> {
    if n > MAX_ENUM_CELLS {
        return Err(Error::StateSpaceTooLarge(n));
    }
    let patterns = mismatch_patterns(g, f);
    let probe = CaConfig::uniform(g, n, boundary)?;
    let mut out = Vec::new();
    for v in 0..1u64 << n {
        let s = BitVec::new(n, v);
        if (0..n).any(|i| patterns.contains(&probe.neighborhood(&s, i))) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Successor of `u` under uniform `g`, computed from the uniform-`f` step by
/// flipping the output bit of every cell whose neighborhood in `u` is a
/// mismatch pattern.
pub fn corrected_successor(
    u: &BitVec,
    g: Rule,
    f: Rule,
    boundary: Boundary,
) -> Result<BitVec, Error> {
    let n = u.len();
    let patterns = mismatch_patterns(g, f);
    let ca_f = CaConfig::uniform(f, n, boundary)?;
    let mut v = ca_f.step(u)?;
    for i in 0..n {
        if patterns.contains(&ca_f.neighborhood(u, i)) {
            v = v.flipped(i);
        }
    }
    Ok(v)
}

/// A matrix `M` equal to `base` except on the rows whose product parity with
/// `u` misses `v_target`; each such row is repaired by flipping its entry in
/// the first column where `u` has a 1, so `M * u = v_target`.
///
/// Fails with [`Error::NoMatrix`] when `u` is the zero vector and `v_target`
/// is not: every matrix maps zero to zero.
pub fn deviant_matrix(base: &Gf2Matrix, u: &BitVec, v_target: &BitVec) -> Result<Gf2Matrix, Error> {
    let n = base.n();
    if u.len() != n || v_target.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: if u.len() != n {
                u.len()
            } else {
                v_target.len()
            },
        });
    }
    if u.is_zero() {
        return if v_target.is_zero() {
            Ok(base.clone())
        } else {
            Err(Error::NoMatrix)
        };
    }
    let pivot = (0..n).find(|&j| u.get(j)).expect("u is nonzero");
    let mut m = base.clone();
    for i in 0..n {
        if m.row(i).dot(u) != v_target.get(i) {
            m = m.with_row(i, m.row(i).flipped(pivot));
        }
    }
    Ok(m)
}

/// Full decomposition of uniform `g` on `n` cells relative to its nearest
/// linear rule.
#[derive(Clone, Debug)]
pub struct DeviantReport {
    /// The rule being decomposed.
    pub rule: Rule,
    /// Chosen nearest linear rule (smallest number among the witnesses).
    pub nearest_linear: Rule,
    /// Every linear rule attaining the minimum distance.
    pub nearest_linear_witnesses: Vec<Rule>,
    /// Mismatch patterns, ascending neighborhood values.
    pub patterns: Vec<u8>,
    pub n: usize,
    pub boundary: Boundary,
    /// Deviant states, ascending decimals.
    pub deviant: Vec<u64>,
    /// Constant matrix of the nearest linear rule; maps every non-deviant
    /// state to its successor under `rule`.
    pub base_matrix: Gf2Matrix,
    /// One repaired matrix per nonzero deviant state, ascending by state.
    pub matrices: Vec<(u64, Gf2Matrix)>,
    /// For an odd rule the zero state is always deviant (its neighborhoods
    /// all read 000, where an odd rule disagrees with every linear rule) and
    /// no matrix can map the zero vector to its all-one successor; the
    /// successor is the complement of the matrix product instead.
    pub zero_state_complement: bool,
}

impl DeviantReport {
    /// Number of deviant states over the number of states, unreduced.
    pub fn ratio(&self) -> (u64, u64) {
        (self.deviant.len() as u64, 1 << self.n)
    }

    pub fn ratio_string(&self) -> String {
        let (k, total) = self.ratio();
        format!("{k}/{total}")
    }

    pub fn matrix_for(&self, state: u64) -> Option<&Gf2Matrix> {
        self.matrices
            .binary_search_by_key(&state, |(u, _)| *u)
            .ok()
            .map(|i| &self.matrices[i].1)
    }

    pub fn is_deviant(&self, state: u64) -> bool {
        self.deviant.binary_search(&state).is_ok()
    }

    /// Successor of `s` computed through the report's matrices: the base
    /// matrix on non-deviant states, the repaired matrix on deviant states,
    /// and the complemented product on the zero state of an odd rule.
    /// Always equals the direct step of the rule.
    pub fn successor_via_matrices(&self, s: &BitVec) -> Result<BitVec, Error> {
        if s.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: s.len(),
            });
        }
        if s.is_zero() && self.zero_state_complement {
            let product = self.base_matrix.mul_vec(s)?;
            return Ok(product.xor(&BitVec::ones(self.n)));
        }
        match self.matrix_for(s.value()) {
            Some(m) => m.mul_vec(s),
            None => self.base_matrix.mul_vec(s),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut matrices = Map::new();
        for (u, m) in &self.matrices {
            matrices.insert(u.to_string(), Value::String(m.to_string()));
        }
        json!({
            "rule": self.rule.id(),
            "nearest_linear": self.nearest_linear.id(),
            "nearest_linear_witnesses":
                self.nearest_linear_witnesses.iter().map(|r| r.id()).collect::<Vec<_>>(),
            "patterns": self.patterns.iter().map(|p| format!("{p:03b}")).collect::<Vec<_>>(),
            "boundary": self.boundary.to_string(),
            "n": self.n,
            "deviant": self.deviant,
            "ratio": self.ratio_string(),
            "base_matrix": self.base_matrix.to_string(),
            "matrices": matrices,
            "zero_state_complement": self.zero_state_complement,
        })
    }
}

/// Builds the [`DeviantReport`] of uniform `g` on `n` cells.
///
/// For a linear `g` the report is trivial: no patterns, no deviant states,
/// and the base matrix alone covers every state.
pub fn analyze(g: Rule, n: usize, boundary: Boundary) -> Result<DeviantReport, Error> {
    let nearest = nearest_linear(g);
    let f = nearest.smallest();
    let patterns = mismatch_patterns(g, f);
    let deviant = deviant_states(g, f, n, boundary)?;

    let ca_f = CaConfig::uniform(f, n, boundary)?;
    let base_matrix = constant_jacobian(&ca_f).expect("linear rules have a constant Jacobian");

    let ca_g = CaConfig::uniform(g, n, boundary)?;
    let matrices = deviant
        .iter()
        .filter(|&&v| v != 0)
        .map(|&v| {
            let u = BitVec::new(n, v);
            let target = ca_g.step(&u)?;
            Ok((v, deviant_matrix(&base_matrix, &u, &target)?))
        })
        .collect::<Result<Vec<_>, Error>>()?;

    Ok(DeviantReport {
        rule: g,
        nearest_linear: f,
        nearest_linear_witnesses: nearest.witnesses,
        patterns,
        n,
        boundary,
        zero_state_complement: deviant.first() == Some(&0),
        deviant,
        base_matrix,
        matrices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn r(id: u8) -> Rule {
        Rule::new(id)
    }

    #[test]
    fn rules_218_and_90_differ_only_on_111() {
        assert_eq!(mismatch_patterns(r(218), r(90)), vec![7]);
        assert!(mismatch_patterns(r(90), r(90)).is_empty());
    }

    #[test]
    fn patterns_come_from_the_truth_table_xor() {
        // 30 xor 150 has bits 3 and 7 set.
        assert_eq!(mismatch_patterns(r(30), r(150)), vec![3, 7]);
        for g in Rule::all() {
            for f in [r(0), r(90), r(204)] {
                assert_eq!(mismatch_patterns(g, f).len() as u32, g.hamming(&f));
            }
        }
    }

    #[test]
    fn deviant_states_of_218_null_boundary() {
        let d = deviant_states(r(218), r(90), 4, Boundary::Null).unwrap();
        assert_eq!(d, vec![7, 14, 15]);
    }

    #[test]
    fn deviant_states_of_218_periodic_boundary() {
        let d = deviant_states(r(218), r(90), 4, Boundary::Periodic).unwrap();
        assert_eq!(d, vec![7, 11, 13, 14, 15]);
    }

    #[test]
    fn no_patterns_means_no_deviant_states() {
        assert!(deviant_states(r(90), r(90), 5, Boundary::Periodic)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn doubling_tree_matches_the_scan_for_pattern_111() {
        // Alternative enumeration for null boundaries when the single
        // pattern has no zero bit: seed with the pattern value and repeatedly
        // append a free bit on the right (children 2p and 2p+1).
        let n = 4;
        let mut tree = Vec::new();
        let mut frontier = vec![7u64];
        while let Some(p) = frontier.pop() {
            if p >= 1 << n {
                continue;
            }
            tree.push(p);
            frontier.push(2 * p);
            frontier.push(2 * p + 1);
        }
        tree.sort_unstable();
        let scan = deviant_states(r(218), r(90), n, Boundary::Null).unwrap();
        assert_eq!(tree, scan);
    }

    #[test]
    fn corrected_successor_flips_the_mismatched_cells() {
        let nb = Boundary::Null;
        assert_eq!(
            corrected_successor(&bv("0111"), r(218), r(90), nb).unwrap(),
            bv("1111")
        );
        assert_eq!(
            corrected_successor(&bv("1110"), r(218), r(90), nb).unwrap(),
            bv("1111")
        );
        // Non-deviant states keep the nearest-linear successor.
        let ca90 = CaConfig::uniform(r(90), 4, nb).unwrap();
        assert_eq!(
            corrected_successor(&bv("0101"), r(218), r(90), nb).unwrap(),
            ca90.step(&bv("0101")).unwrap()
        );
    }

    #[test]
    fn corrected_successor_equals_the_direct_step_everywhere() {
        for boundary in [Boundary::Null, Boundary::Periodic] {
            let ca218 = CaConfig::uniform(r(218), 4, boundary).unwrap();
            for v in 0..16 {
                let u = BitVec::new(4, v);
                assert_eq!(
                    corrected_successor(&u, r(218), r(90), boundary).unwrap(),
                    ca218.step(&u).unwrap()
                );
            }
        }
    }

    #[test]
    fn repairing_one_row_fixes_the_product() {
        let base: Gf2Matrix = "0100\n1010\n0101\n0010".parse().unwrap();
        let m = deviant_matrix(&base, &bv("0111"), &bv("1111")).unwrap();
        let expected: Gf2Matrix = "0100\n1010\n0001\n0010".parse().unwrap();
        assert_eq!(m, expected);
        assert_eq!(m.mul_vec(&bv("0111")).unwrap(), bv("1111"));
    }

    #[test]
    fn matching_target_leaves_the_base_unchanged() {
        let base: Gf2Matrix = "0100\n1010\n0101\n0010".parse().unwrap();
        let u = bv("0101");
        let target = base.mul_vec(&u).unwrap();
        assert_eq!(deviant_matrix(&base, &u, &target).unwrap(), base);
    }

    #[test]
    fn zero_state_with_nonzero_target_has_no_matrix() {
        let base = Gf2Matrix::zero(4);
        assert_eq!(
            deviant_matrix(&base, &bv("0000"), &bv("0001")),
            Err(Error::NoMatrix)
        );
        assert_eq!(
            deviant_matrix(&base, &bv("0000"), &bv("0000")).unwrap(),
            base
        );
    }

    #[test]
    fn report_for_218_null_boundary() {
        let report = analyze(r(218), 4, Boundary::Null).unwrap();
        assert_eq!(report.nearest_linear, r(90));
        assert_eq!(report.patterns, vec![7]);
        assert_eq!(report.deviant, vec![7, 14, 15]);
        assert_eq!(report.ratio_string(), "3/16");

        let ca = CaConfig::uniform(r(218), 4, Boundary::Null).unwrap();
        for v in 0..16u64 {
            let s = BitVec::new(4, v);
            let expected = ca.step(&s).unwrap();
            match report.matrix_for(v) {
                Some(m) => assert_eq!(m.mul_vec(&s).unwrap(), expected),
                None => assert_eq!(report.base_matrix.mul_vec(&s).unwrap(), expected),
            }
        }
    }

    #[test]
    fn report_for_218_periodic_boundary() {
        let report = analyze(r(218), 4, Boundary::Periodic).unwrap();
        assert_eq!(report.deviant.len(), 5);
        assert_eq!(report.ratio_string(), "5/16");
    }

    #[test]
    fn odd_rules_handle_the_zero_state_by_complement() {
        // An odd rule disagrees with every linear rule on the 000
        // neighborhood, so the zero state is deviant but has no matrix of
        // its own (nothing maps the zero vector to the all-one successor).
        let report = analyze(r(1), 4, Boundary::Null).unwrap();
        assert!(report.zero_state_complement);
        assert!(report.is_deviant(0));
        assert!(report.matrix_for(0).is_none());
        assert_eq!(
            report.successor_via_matrices(&bv("0000")).unwrap(),
            bv("1111")
        );

        let ca = CaConfig::uniform(r(1), 4, Boundary::Null).unwrap();
        for v in 0..16u64 {
            let s = BitVec::new(4, v);
            assert_eq!(
                report.successor_via_matrices(&s).unwrap(),
                ca.step(&s).unwrap()
            );
        }
        assert_eq!(report.to_json()["zero_state_complement"], true);
        assert!(report.to_json()["matrices"].get("0").is_none());
    }

    #[test]
    fn even_rules_never_flag_the_zero_state() {
        let report = analyze(r(218), 4, Boundary::Null).unwrap();
        assert!(!report.zero_state_complement);
        for v in 0..16u64 {
            let s = BitVec::new(4, v);
            let ca = CaConfig::uniform(r(218), 4, Boundary::Null).unwrap();
            assert_eq!(
                report.successor_via_matrices(&s).unwrap(),
                ca.step(&s).unwrap()
            );
        }
    }

    #[test]
    fn linear_rule_reports_trivially() {
        let report = analyze(r(90), 4, Boundary::Null).unwrap();
        assert_eq!(report.nearest_linear, r(90));
        assert!(report.patterns.is_empty());
        assert!(report.deviant.is_empty());
        assert_eq!(report.ratio(), (0, 16));
    }

    #[test]
    fn json_report_has_the_documented_shape() {
        let report = analyze(r(218), 4, Boundary::Null).unwrap();
        let v = report.to_json();
        assert_eq!(v["rule"], 218);
        assert_eq!(v["nearest_linear"], 90);
        assert_eq!(v["patterns"], json!(["111"]));
        assert_eq!(v["boundary"], "nb");
        assert_eq!(v["n"], 4);
        assert_eq!(v["deviant"], json!([7, 14, 15]));
        assert_eq!(v["ratio"], "3/16");
        assert_eq!(v["matrices"]["7"], "0100\n1010\n0001\n0010");
    }

    #[test]
    fn ratio_is_zero_exactly_for_linear_rules() {
        for g in Rule::all() {
            for boundary in [Boundary::Null, Boundary::Periodic] {
                let report = analyze(g, 4, boundary).unwrap();
                assert_eq!(report.ratio().0 == 0, g.is_linear(), "rule {g}, {boundary}");
            }
        }
    }

    #[test]
    fn deviant_count_is_monotone_in_n_for_periodic_boundaries() {
        // Growing the ring cannot lose a pattern occurrence, except for the
        // all-zero pattern whose occurrences an extra 1 can break up.
        for g in Rule::all().filter(|g| !g.is_linear()) {
            let f = nearest_linear(g).smallest();
            let patterns = mismatch_patterns(g, f);
            if patterns == vec![0] {
                continue;
            }
            let mut prev = 0usize;
            for n in 4..=10 {
                let count = deviant_states(g, f, n, Boundary::Periodic).unwrap().len();
                assert!(count >= prev, "rule {g}, n {n}: {count} < {prev}");
                prev = count;
            }
        }
    }
}
