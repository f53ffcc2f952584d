//! Cellular automaton definition and evolution.
//!
//! A configuration assigns one 3-variable rule to each of `n >= 3` cells and
//! fixes the boundary handling: null boundaries read a permanent 0 outside
//! the array, periodic boundaries wrap around. [`CaConfig::step`] applies
//! the global map once; [`CaConfig::build_std`] materializes the full
//! state-transition diagram (the functional graph on all 2^n states) along
//! with predecessor, cycle and garden-of-Eden data.

use std::fmt;

use serde_json::{json, Value};

use crate::gf2::BitVec;
use crate::rule::Rule;
use crate::{Error, MAX_ENUM_CELLS};

/// Boundary handling for the outermost cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Out-of-range neighbors read as 0.
    Null,
    /// The array wraps around cyclically.
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Null => "nb",
            Boundary::Periodic => "pb",
        })
    }
}

/// A one-dimensional binary CA: one rule per cell plus a boundary condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaConfig {
    rules: Vec<Rule>,
    boundary: Boundary,
}

impl CaConfig {
    /// A CA applying the same rule at every cell.
    pub fn uniform(rule: Rule, n: usize, boundary: Boundary) -> Result<Self, Error> {
        Self::hybrid(vec![rule; n], boundary)
    }

    /// A CA with per-cell rules.
    pub fn hybrid(rules: Vec<Rule>, boundary: Boundary) -> Result<Self, Error> {
        if rules.len() < 3 {
            return Err(Error::TooFewCells(rules.len()));
        }
        if rules.len() > 64 {
            return Err(Error::InvalidLength(rules.len()));
        }
        Ok(Self { rules, boundary })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least 3 cells by construction
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule_at(&self, i: usize) -> Rule {
        self.rules[i]
    }

    pub fn is_uniform(&self) -> bool {
        self.rules.windows(2).all(|w| w[0] == w[1])
    }

    /// Neighborhood value `4*left + 2*self + right` of cell `i` in state `s`,
    /// honoring the boundary condition.
    pub fn neighborhood(&self, s: &BitVec, i: usize) -> u8 {
        let n = self.len();
        let (left, right) = match self.boundary {
            Boundary::Null => (
                if i == 0 { false } else { s.get(i - 1) },
                if i + 1 == n { false } else { s.get(i + 1) },
            ),
            Boundary::Periodic => (s.get((i + n - 1) % n), s.get((i + 1) % n)),
        };
        (left as u8) << 2 | (s.get(i) as u8) << 1 | right as u8
    }

    /// Applies the global map once.
    pub fn step(&self, s: &BitVec) -> Result<BitVec, Error> {
        if s.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: s.len(),
            });
        }
        let bits: Vec<bool> = (0..self.len())
            .map(|i| self.rules[i].truth_bit(self.neighborhood(s, i)))
            .collect();
        Ok(BitVec::from_bits(&bits))
    }

    /// Builds the full state-transition diagram over all 2^n states.
    pub fn build_std(&self) -> Result<StdGraph, Error> {
        let n = self.len();
        if n > MAX_ENUM_CELLS {
            return Err(Error::StateSpaceTooLarge(n));
        }
        let size = 1usize << n;
        let mut successor = Vec::with_capacity(size);
        for v in 0..size as u64 {
            let next = self.step(&BitVec::new(n, v))?;
            successor.push(next.value() as u32);
        }
        Ok(StdGraph::from_successors(n, self.boundary, successor))
    }
}

/// The functional graph sending each of the 2^n states to its successor.
#[derive(Clone, Debug)]
pub struct StdGraph {
    n: usize,
    boundary: Boundary,
    successor: Vec<u32>,
    // Predecessor lists in compressed form: the predecessors of state v are
    // pred_data[pred_offsets[v]..pred_offsets[v + 1]].
    pred_offsets: Vec<u32>,
    pred_data: Vec<u32>,
    cycles: Vec<Vec<u64>>,
    garden_of_eden: Vec<u64>,
}

impl StdGraph {
    fn from_successors(n: usize, boundary: Boundary, successor: Vec<u32>) -> Self {
        let size = successor.len();

        // Counting sort of edges by target gives the predecessor lists.
        let mut pred_offsets = vec![0u32; size + 1];
        for &t in &successor {
            pred_offsets[t as usize + 1] += 1;
        }
        for i in 0..size {
            pred_offsets[i + 1] += pred_offsets[i];
        }
        let mut cursor = pred_offsets.clone();
        let mut pred_data = vec![0u32; size];
        for (u, &t) in successor.iter().enumerate() {
            pred_data[cursor[t as usize] as usize] = u as u32;
            cursor[t as usize] += 1;
        }

        let garden_of_eden: Vec<u64> = (0..size)
            .filter(|&v| pred_offsets[v] == pred_offsets[v + 1])
            .map(|v| v as u64)
            .collect();

        // Peel nodes of in-degree 0 repeatedly; whatever survives lies on a
        // cycle (every node has out-degree 1).
        let mut live_in: Vec<u32> = (0..size)
            .map(|v| pred_offsets[v + 1] - pred_offsets[v])
            .collect();
        let mut queue: Vec<u32> = garden_of_eden.iter().map(|&v| v as u32).collect();
        while let Some(u) = queue.pop() {
            let t = successor[u as usize];
            live_in[t as usize] -= 1;
            if live_in[t as usize] == 0 {
                queue.push(t);
            }
        }

        let mut cycles = Vec::new();
        let mut seen = vec![false; size];
        for v in 0..size {
            if live_in[v] == 0 || seen[v] {
                continue;
            }
            // v is the smallest unseen node of its cycle.
            let mut cycle = Vec::new();
            let mut u = v as u32;
            while !seen[u as usize] {
                seen[u as usize] = true;
                cycle.push(u as u64);
                u = successor[u as usize];
            }
            cycles.push(cycle);
        }

        Self {
            n,
            boundary,
            successor,
            pred_offsets,
            pred_data,
            cycles,
            garden_of_eden,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn state_count(&self) -> usize {
        self.successor.len()
    }

    pub fn successor_of(&self, state: u64) -> u64 {
        self.successor[state as usize] as u64
    }

    pub fn predecessors(&self, state: u64) -> &[u32] {
        let v = state as usize;
        &self.pred_data[self.pred_offsets[v] as usize..self.pred_offsets[v + 1] as usize]
    }

    /// Cycles in discovery order; each starts at its smallest state.
    pub fn cycles(&self) -> &[Vec<u64>] {
        &self.cycles
    }

    /// States with no predecessor.
    pub fn garden_of_eden(&self) -> &[u64] {
        &self.garden_of_eden
    }

    pub fn stats(&self) -> StdStats {
        let mut cycle_lengths: Vec<usize> = self.cycles.iter().map(Vec::len).collect();
        cycle_lengths.sort_unstable();
        let max_in_degree = (0..self.state_count())
            .map(|v| (self.pred_offsets[v + 1] - self.pred_offsets[v]) as usize)
            .max()
            .unwrap_or(0);
        StdStats {
            cycle_count: self.cycles.len(),
            cycle_lengths,
            garden_of_eden_count: self.garden_of_eden.len(),
            max_in_degree,
        }
    }

    /// Graphviz rendering with decimal state labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph std {\n");
        for (u, &v) in self.successor.iter().enumerate() {
            out.push_str(&format!("  {u} -> {v};\n"));
        }
        out.push('}');
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "boundary": self.boundary.to_string(),
            "successor": self.successor,
            "cycles": self.cycles,
            "garden_of_eden": self.garden_of_eden,
        })
    }
}

/// Summary statistics of a state-transition diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StdStats {
    pub cycle_count: usize,
    /// Ascending.
    pub cycle_lengths: Vec<usize>,
    pub garden_of_eden_count: usize,
    pub max_in_degree: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn uniform(rule: u8, n: usize, boundary: Boundary) -> CaConfig {
        CaConfig::uniform(Rule::new(rule), n, boundary).unwrap()
    }

    #[test]
    fn rejects_fewer_than_three_cells() {
        assert_eq!(
            CaConfig::uniform(Rule::new(90), 2, Boundary::Null),
            Err(Error::TooFewCells(2))
        );
    }

    #[test]
    fn step_of_rule_128_on_periodic_8_cells() {
        let ca = uniform(128, 8, Boundary::Periodic);
        assert_eq!(ca.step(&bv("10101011")).unwrap(), bv("00000001"));
    }

    #[test]
    fn rule_170_copies_the_right_neighbor() {
        let ca = uniform(170, 4, Boundary::Null);
        assert_eq!(ca.step(&bv("1011")).unwrap(), bv("0110"));
    }

    #[test]
    fn steps_of_rules_218_and_90_on_0111() {
        let nb = Boundary::Null;
        assert_eq!(uniform(218, 4, nb).step(&bv("0111")).unwrap(), bv("1111"));
        assert_eq!(uniform(90, 4, nb).step(&bv("0111")).unwrap(), bv("1101"));
    }

    #[test]
    fn hybrid_step_applies_per_cell_rules() {
        let ca = CaConfig::hybrid(
            vec![Rule::new(103), Rule::new(234), Rule::new(90), Rule::new(0)],
            Boundary::Null,
        )
        .unwrap();
        assert!(!ca.is_uniform());
        assert_eq!(ca.step(&bv("1011")).unwrap(), bv("1110"));
    }

    #[test]
    fn step_rejects_wrong_length() {
        let ca = uniform(90, 4, Boundary::Null);
        assert!(matches!(
            ca.step(&bv("101")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn constant_zero_rule_collapses_everything() {
        let g = uniform(0, 4, Boundary::Null).build_std().unwrap();
        assert!((0..16).all(|v| g.successor_of(v) == 0));
        let stats = g.stats();
        assert_eq!(stats.cycle_count, 1);
        assert_eq!(stats.cycle_lengths, vec![1]);
        assert_eq!(stats.garden_of_eden_count, 15);
        assert_eq!(stats.max_in_degree, 16);
    }

    #[test]
    fn identity_rule_gives_sixteen_fixed_points() {
        let g = uniform(204, 4, Boundary::Periodic).build_std().unwrap();
        let stats = g.stats();
        assert_eq!(stats.cycle_count, 16);
        assert!(stats.cycle_lengths.iter().all(|&l| l == 1));
        assert_eq!(stats.garden_of_eden_count, 0);
    }

    #[test]
    fn rule_170_null_boundary_sends_11_to_6() {
        let g = uniform(170, 4, Boundary::Null).build_std().unwrap();
        assert_eq!(g.successor_of(11), 6);
    }

    #[test]
    fn rule_90_null_boundary_4_cells_is_a_permutation() {
        let g = uniform(90, 4, Boundary::Null).build_std().unwrap();
        let stats = g.stats();
        assert_eq!(stats.garden_of_eden_count, 0);
        assert_eq!(stats.max_in_degree, 1);
        assert_eq!(stats.cycle_count, 4);
        assert_eq!(stats.cycle_lengths, vec![1, 3, 6, 6]);
    }

    #[test]
    fn every_node_has_one_out_edge_and_in_degrees_sum() {
        let g = uniform(30, 5, Boundary::Periodic).build_std().unwrap();
        let total: usize = (0..32).map(|v| g.predecessors(v).len()).sum();
        assert_eq!(total, 32);
        for v in 0..32 {
            for &p in g.predecessors(v) {
                assert_eq!(g.successor_of(p as u64), v);
            }
        }
    }

    #[test]
    fn affine_step_image_size_is_two_to_the_jacobian_rank() {
        for rule in crate::rule::affine_rules() {
            for boundary in [Boundary::Null, Boundary::Periodic] {
                for n in [4usize, 5] {
                    let ca = CaConfig::uniform(rule, n, boundary).unwrap();
                    let j = crate::derivative::constant_jacobian(&ca).unwrap();
                    let images: std::collections::HashSet<u64> = (0..1u64 << n)
                        .map(|v| ca.step(&BitVec::new(n, v)).unwrap().value())
                        .collect();
                    assert_eq!(
                        images.len(),
                        1 << j.rank(),
                        "rule {rule}, {boundary}, n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn std_rejects_oversized_state_space() {
        assert!(matches!(
            uniform(90, 21, Boundary::Null).build_std(),
            Err(Error::StateSpaceTooLarge(21))
        ));
    }

    #[test]
    fn dot_export_lists_every_edge() {
        let g = uniform(170, 4, Boundary::Null).build_std().unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph std {"));
        assert!(dot.contains("  11 -> 6;"));
        assert!(dot.trim_end().ends_with('}'));
        assert_eq!(dot.matches("->").count(), 16);
    }

    #[test]
    fn json_export_has_the_documented_fields() {
        let g = uniform(170, 4, Boundary::Null).build_std().unwrap();
        let v = g.to_json();
        assert_eq!(v["n"], 4);
        assert_eq!(v["boundary"], "nb");
        assert_eq!(v["successor"].as_array().unwrap().len(), 16);
        assert_eq!(v["successor"][11], 6);
        assert!(v["cycles"].is_array());
        assert!(v["garden_of_eden"].is_array());
    }
}
