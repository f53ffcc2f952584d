//! Per-window transformation matrices and windowed evolution.
//!
//! Every 4-bit block (*window*) of a state can be evolved by one 4x4 GF(2)
//! matrix: for a nonzero window there are always 2^(16-4) = 4096 valid
//! matrices, while the zero window admits every matrix for an even rule and
//! none at all for an odd rule (nothing maps 0 to 1111); odd rules handle
//! the zero window by complementing the product instead. A
//! [`WindowMatrixSet`] is a smallest set of matrices covering all 15 nonzero
//! windows of a rule, found by an exact partition search. Feeding each
//! window of a state through its assigned matrix and keeping the middle two
//! product bits reproduces one periodic-boundary step of the full CA in
//! linear time: the kept cells' true neighborhoods lie inside their window,
//! so the window's wrap-around only corrupts the discarded padding bits.

use std::sync::OnceLock;

use crate::ca::{Boundary, CaConfig};
use crate::gf2::{BitVec, Gf2Matrix};
use crate::rule::Rule;
use crate::Error;

/// The rules whose ANF is a single monomial, in the order
/// xyz, xy, xz, x, yz, y, z, 1. Every rule is a XOR-combination of these.
pub fn fundamental_rules() -> [Rule; 8] {
    [128, 192, 160, 240, 136, 204, 170, 255].map(Rule::new)
}

/// One periodic-boundary step of the 4-bit block `w` under the uniform rule.
pub fn window_output(rule: Rule, w: &BitVec) -> BitVec {
    assert_eq!(w.len(), 4, "windows are 4-bit blocks");
    CaConfig::uniform(rule, 4, Boundary::Periodic)
        .expect("4 cells is valid")
        .step(w)
        .expect("lengths match")
}

/// Number of square matrices `A` over GF(2) with `A * input = target`.
///
/// Each row is constrained independently: a nonzero input leaves half of the
/// 2^n candidate rows per row, the zero input leaves all of them when the
/// target bit is 0 and none when it is 1. Lengths above 8 are not supported
/// (the count would overflow anything reasonable).
pub fn matrix_count(input: &BitVec, target: &BitVec) -> u128 {
    let n = input.len();
    assert_eq!(n, target.len(), "input and target lengths differ");
    assert!(n <= 8, "matrix counting is limited to lengths up to 8");
    let mut total: u128 = 1;
    for i in 0..n {
        total *= if !input.is_zero() {
            1u128 << (n - 1)
        } else if target.get(i) {
            0
        } else {
            1u128 << n
        };
    }
    total
}

/// Number of 4x4 matrices mapping the window `w` to its evolution under
/// `rule`: 4096 for nonzero `w`; for the zero window, 2^16 when the rule is
/// even and 0 when it is odd.
pub fn count_matrices(rule: Rule, w: &BitVec) -> u64 {
    matrix_count(w, &window_output(rule, w)) as u64
}

/// A valid window matrix with at most two distinct rows: the zero row for
/// output bits 0 and, for output bits 1, the unit row at the first set
/// column of `w`.
pub fn canonical_matrix(rule: Rule, w: &BitVec) -> Result<Gf2Matrix, Error> {
    assert_eq!(w.len(), 4, "windows are 4-bit blocks");
    let out = window_output(rule, w);
    if w.is_zero() {
        return if out.is_zero() {
            Ok(Gf2Matrix::zero(4))
        } else {
            Err(Error::NoMatrix)
        };
    }
    let pivot = (0..4).find(|&j| w.get(j)).expect("w is nonzero");
    let unit = BitVec::zeros(4).with_bit(pivot, true);
    let rows = (0..4)
        .map(|i| if out.get(i) { unit } else { BitVec::zeros(4) })
        .collect();
    Ok(Gf2Matrix::from_rows(rows).expect("square by construction"))
}

/// How a [`WindowMatrixSet`] treats the zero window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroWindowMode {
    /// Even rule: the output is 0000, which any matrix produces.
    ZeroMatrix,
    /// Odd rule: no matrix exists; the product of any matrix with the zero
    /// window is complemented instead, yielding 1111.
    Complement,
}

/// A minimal set of 4x4 matrices covering all 15 nonzero windows of a rule,
/// with a per-window assignment.
#[derive(Clone, Debug)]
pub struct WindowMatrixSet {
    rule: Rule,
    members: Vec<Gf2Matrix>,
    /// `assignment[w]` is the member index valid for window value `w`;
    /// `None` only at index 0 under [`ZeroWindowMode::Complement`].
    assignment: [Option<usize>; 16],
    zero_mode: ZeroWindowMode,
}

impl WindowMatrixSet {
    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn members(&self) -> &[Gf2Matrix] {
        &self.members
    }

    pub fn zero_mode(&self) -> ZeroWindowMode {
        self.zero_mode
    }

    /// Member index assigned to a window value (0..=15).
    pub fn assignment(&self, w: u64) -> Option<usize> {
        self.assignment[w as usize]
    }

    pub fn member_for(&self, w: &BitVec) -> Option<&Gf2Matrix> {
        assert_eq!(w.len(), 4, "windows are 4-bit blocks");
        self.assignment[w.value() as usize].map(|i| &self.members[i])
    }

    /// The 4-bit output the set produces for a window, including the
    /// complement handling of the zero window for odd rules.
    pub fn window_result(&self, w: &BitVec) -> BitVec {
        match self.member_for(w) {
            Some(m) => m.mul_vec(w).expect("lengths match"),
            None => BitVec::ones(4), // complement of (any matrix) * 0
        }
    }

    /// One periodic-boundary step of `s` via per-window matrix products.
    pub fn evolve(&self, s: &BitVec) -> Result<BitVec, Error> {
        Ok(self.evolve_trace(s)?.0)
    }

    /// Like [`WindowMatrixSet::evolve`], also returning the per-window
    /// products.
    pub fn evolve_trace(&self, s: &BitVec) -> Result<(BitVec, Vec<WindowStep>), Error> {
        let n = s.len();
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::WindowedLength(n));
        }
        let mut bits = vec![false; n];
        let mut steps = Vec::with_capacity(n / 2);
        for i in 1..=n / 2 {
            // Window i covers cells 2i-2 .. 2i+1 (1-based) with cyclic wrap,
            // i.e. one padding cell on each side of output cells 2i-1, 2i.
            let pos = [(2 * i + n - 3) % n, 2 * i - 2, 2 * i - 1, (2 * i) % n];
            let window =
                BitVec::from_bits(&[s.get(pos[0]), s.get(pos[1]), s.get(pos[2]), s.get(pos[3])]);
            let member = self.assignment[window.value() as usize];
            let product = self.window_result(&window);
            bits[2 * i - 2] = product.get(1);
            bits[2 * i - 1] = product.get(2);
            steps.push(WindowStep {
                cells: [2 * i - 2, 2 * i - 1],
                window,
                product,
                member,
            });
        }
        Ok((BitVec::from_bits(&bits), steps))
    }
}

/// One window of an [`WindowMatrixSet::evolve_trace`] run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowStep {
    /// Output cell positions (0-based, leftmost first).
    pub cells: [usize; 2],
    pub window: BitVec,
    pub product: BitVec,
    /// Member index used; `None` for the complement-handled zero window.
    pub member: Option<usize>,
}

/// One periodic-boundary step of `s` under `rule` via the windowed
/// algorithm. Uses the cached minimal matrix set of the rule.
pub fn evolve_windowed(rule: Rule, s: &BitVec) -> Result<BitVec, Error> {
    minimal_matrix_set_cached(rule).evolve(s)
}

/// Cached equivalent of [`minimal_matrix_set`]; the set of a rule is
/// computed once per process.
pub fn minimal_matrix_set_cached(rule: Rule) -> &'static WindowMatrixSet {
    static CACHE: OnceLock<[OnceLock<WindowMatrixSet>; 256]> = OnceLock::new();
    let cache = CACHE.get_or_init(|| std::array::from_fn(|_| OnceLock::new()));
    cache[rule.id() as usize].get_or_init(|| minimal_matrix_set(rule))
}

// The search below works on bitmask representations: windows 1..=15 map to
// bits 0..=14 of a 15-bit set, and for each window and matrix row the 16
// candidate row vectors form a 16-bit mask. A window group can share one
// matrix exactly when, for every row, the intersection of the candidate
// masks over the group is nonempty; the four row masks of a group are kept
// packed in one u64.

const FULL: usize = (1 << 15) - 1;

fn lane(lanes: u64, i: usize) -> u16 {
    (lanes >> (16 * i)) as u16
}

fn lanes_feasible(lanes: u64) -> bool {
    (0..4).all(|i| lane(lanes, i) != 0)
}

/// Row value of the identity matrix for row `i`, as a 4-bit decimal.
fn identity_row(i: usize) -> u16 {
    1 << (3 - i)
}

/// Preferred matrix realizable from packed candidate masks: the zero matrix
/// if possible, else the identity, else the per-row smallest rows (which
/// concatenate to the lexicographically smallest bit string).
fn choose_matrix(lanes: u64) -> (u8, [u8; 4]) {
    if (0..4).all(|i| lane(lanes, i) & 1 != 0) {
        return (0, [0; 4]);
    }
    if (0..4).all(|i| lane(lanes, i) & (1 << identity_row(i)) != 0) {
        return (1, std::array::from_fn(|i| identity_row(i) as u8));
    }
    (
        2,
        std::array::from_fn(|i| lane(lanes, i).trailing_zeros() as u8),
    )
}

/// Computes a smallest-cardinality set of matrices covering all 15 nonzero
/// windows of `rule`, together with a window-to-member assignment.
///
/// Feasibility of a window group reduces to per-row candidate-mask
/// intersections; a subset dynamic program over the 2^15 window sets then
/// yields an exactly minimal partition. Ties are broken toward the zero
/// matrix, then the identity, then the lexicographically smallest rows, so
/// the output is reproducible.
pub fn minimal_matrix_set(rule: Rule) -> WindowMatrixSet {
    let outs: [u64; 16] =
        std::array::from_fn(|w| window_output(rule, &BitVec::new(4, w as u64)).value());

    // packed[w]: per row, the 16-bit mask of row vectors r with
    // parity(r AND w) equal to the row's output bit.
    let mut packed = [0u64; 16];
    for (w, lanes) in packed.iter_mut().enumerate().skip(1) {
        for i in 0..4 {
            let target = outs[w] >> (3 - i) & 1 == 1;
            let mut mask: u16 = 0;
            for r in 0..16u64 {
                if (((r & w as u64).count_ones() & 1) == 1) == target {
                    mask |= 1 << r;
                }
            }
            *lanes |= (mask as u64) << (16 * i);
        }
    }

    // Candidate-mask intersection for every subset of the 15 windows.
    let mut lanes_for = vec![0u64; FULL + 1];
    lanes_for[0] = u64::MAX;
    for t in 1..=FULL {
        let low = t & t.wrapping_neg();
        lanes_for[t] = lanes_for[t ^ low] & packed[low.trailing_zeros() as usize + 1];
    }

    // dp[t]: minimum number of groups partitioning window set t. Every
    // singleton is feasible, so the minimum always exists.
    let mut dp = vec![u8::MAX; FULL + 1];
    dp[0] = 0;
    for t in 1..=FULL {
        let low = t & t.wrapping_neg();
        let rest = t ^ low;
        let mut best = u8::MAX;
        let mut s = rest;
        loop {
            let group = s | low;
            if lanes_feasible(lanes_for[group]) {
                best = best.min(dp[t ^ group].saturating_add(1));
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & rest;
        }
        dp[t] = best;
    }

    // Peel off groups; each step takes the group that keeps the partition
    // minimal and owns the best matrix under the tie-break order.
    type GroupKey = (u8, [u8; 4], u32, usize);
    let mut chosen: Vec<(usize, (u8, [u8; 4]))> = Vec::new();
    let mut cur = FULL;
    while cur != 0 {
        let low = cur & cur.wrapping_neg();
        let rest = cur ^ low;
        let mut best: Option<(GroupKey, usize)> = None;
        let mut s = rest;
        loop {
            let group = s | low;
            if lanes_feasible(lanes_for[group]) && dp[cur ^ group] + 1 == dp[cur] {
                let (class, rows) = choose_matrix(lanes_for[group]);
                let key = (class, rows, 15 - group.count_ones(), group);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, group));
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & rest;
        }
        let (_, group) = best.expect("dp guarantees a consistent group");
        chosen.push((group, choose_matrix(lanes_for[group])));
        cur ^= group;
    }

    chosen.sort_by_key(|&(_, key)| key);
    let members: Vec<Gf2Matrix> = chosen
        .iter()
        .map(|&(_, (_, rows))| Gf2Matrix::from_row_values(4, &rows.map(u64::from)))
        .collect();

    let mut assignment = [None; 16];
    for (idx, &(group, _)) in chosen.iter().enumerate() {
        for (w, slot) in assignment.iter_mut().enumerate().skip(1) {
            if group >> (w - 1) & 1 == 1 {
                *slot = Some(idx);
            }
        }
    }
    let zero_mode = if rule.is_odd() {
        ZeroWindowMode::Complement
    } else {
        assignment[0] = Some(0);
        ZeroWindowMode::ZeroMatrix
    };

    WindowMatrixSet {
        rule,
        members,
        assignment,
        zero_mode,
    }
}
