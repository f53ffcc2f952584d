//! The algebra of 3-variable Boolean rules under Wolfram numbering.
//!
//! A rule is an 8-bit truth table: bit `v` of the Wolfram number is the
//! output on neighborhood value `v = 4x + 2y + z`, where `x` is the left
//! neighbor, `y` the cell itself and `z` the right neighbor. The algebraic
//! normal form (ANF) is the unique XOR-of-monomials representation obtained
//! from the truth table by the mod-2 Moebius transform; a rule is *linear*
//! when its ANF uses only the monomials x, y, z, and *affine* when it may
//! additionally use the constant 1.

use std::fmt;

/// The three neighborhood variables of an elementary rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    /// Left neighbor.
    X,
    /// The cell itself.
    Y,
    /// Right neighbor.
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    /// Bit of the neighborhood value carrying this variable.
    pub fn mask(self) -> u8 {
        match self {
            Var::X => 4,
            Var::Y => 2,
            Var::Z => 1,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        })
    }
}

/// Monomial masks in the order used for rendering ANF strings: degree
/// first, then x before y before z.
const MONOMIAL_ORDER: [u8; 8] = [0, 4, 2, 1, 6, 5, 3, 7];

fn monomial_name(mask: u8) -> &'static str {
    match mask {
        0 => "1",
        1 => "z",
        2 => "y",
        3 => "yz",
        4 => "x",
        5 => "xz",
        6 => "xy",
        7 => "xyz",
        _ => unreachable!(),
    }
}

/// Mod-2 Moebius transform over the 3-cube; its own inverse.
fn moebius(mut table: u8) -> u8 {
    for k in [1u8, 2, 4] {
        let mut next = table;
        for v in 0..8u8 {
            if v & k != 0 && (table >> (v ^ k)) & 1 == 1 {
                next ^= 1 << v;
            }
        }
        table = next;
    }
    table
}

/// A 3-variable Boolean rule identified by its Wolfram number.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    id: u8,
}

impl Rule {
    pub fn new(id: u8) -> Self {
        Self { id }
    }

    /// The Wolfram number.
    pub fn id(&self) -> u8 {
        self.id
    }

    /// Truth-table output for neighborhood value `v` (0..=7).
    pub fn truth_bit(&self, v: u8) -> bool {
        assert!(v < 8, "neighborhood value {v} out of range");
        (self.id >> v) & 1 == 1
    }

    /// Output on the neighborhood (left, self, right).
    pub fn eval(&self, x: bool, y: bool, z: bool) -> bool {
        self.truth_bit((x as u8) << 2 | (y as u8) << 1 | z as u8)
    }

    /// ANF coefficients as a monomial bitmask: bit `m` is set when the
    /// monomial with variable set `m` appears.
    pub fn anf_mask(&self) -> u8 {
        moebius(self.id)
    }

    /// Monomial masks present in the ANF, in rendering order.
    pub fn anf_terms(&self) -> Vec<u8> {
        let mask = self.anf_mask();
        MONOMIAL_ORDER
            .iter()
            .copied()
            .filter(|&m| mask >> m & 1 == 1)
            .collect()
    }

    /// ANF degree: size of the largest monomial (0 for constants).
    pub fn degree(&self) -> u32 {
        (0..8)
            .filter(|&m| self.anf_mask() >> m & 1 == 1)
            .map(|m: u8| m.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// XOR-of-monomials rendering, e.g. `x⊕y⊕z`; the zero rule prints `0`.
    pub fn anf_string(&self) -> String {
        let terms = self.anf_terms();
        if terms.is_empty() {
            return "0".to_string();
        }
        terms
            .iter()
            .map(|&m| monomial_name(m))
            .collect::<Vec<_>>()
            .join("\u{2295}")
    }

    /// Truth table as an 8-character string, output for input 111 first.
    pub fn table_string(&self) -> String {
        format!("{:08b}", self.id)
    }

    /// The rule with every truth-table bit flipped; its number is 255 - id.
    pub fn complement(&self) -> Self {
        Self { id: !self.id }
    }

    /// An odd rule outputs 1 on the all-zero neighborhood (equivalently its
    /// ANF has the constant term).
    pub fn is_odd(&self) -> bool {
        self.id & 1 == 1
    }

    /// Number of truth-table positions where the two rules differ.
    pub fn hamming(&self, other: &Rule) -> u32 {
        (self.id ^ other.id).count_ones()
    }

    /// Number of ones in the truth table; equals the distance to rule 0.
    pub fn weight(&self) -> u32 {
        self.id.count_ones()
    }

    /// ANF degree at most 1 with no constant term.
    pub fn is_linear(&self) -> bool {
        self.anf_mask() & !0b0001_0110 == 0
    }

    /// ANF degree at most 1 (constant term allowed).
    pub fn is_affine(&self) -> bool {
        self.anf_mask() & !0b0001_0111 == 0
    }

    pub fn all() -> impl Iterator<Item = Rule> {
        (0u16..256).map(|id| Rule::new(id as u8))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rule({})", self.id)
    }
}

/// The 8 linear rules (ANF a subset of {x, y, z}), ascending by number.
pub fn linear_rules() -> Vec<Rule> {
    Rule::all().filter(Rule::is_linear).collect()
}

/// The 16 affine rules (the linear rules and their complements).
pub fn affine_rules() -> Vec<Rule> {
    Rule::all().filter(Rule::is_affine).collect()
}

/// Minimum distance to a reference set, with every rule attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nearest {
    pub distance: u32,
    pub witnesses: Vec<Rule>,
}

impl Nearest {
    /// The witness with the smallest Wolfram number.
    pub fn smallest(&self) -> Rule {
        self.witnesses[0]
    }
}

fn nearest_in(f: Rule, set: &[Rule]) -> Nearest {
    let distance = set.iter().map(|a| f.hamming(a)).min().expect("empty set");
    let witnesses = set
        .iter()
        .copied()
        .filter(|a| f.hamming(a) == distance)
        .collect();
    Nearest {
        distance,
        witnesses,
    }
}

/// Nearest rule among the 8 linear rules.
pub fn nearest_linear(f: Rule) -> Nearest {
    nearest_in(f, &linear_rules())
}

/// Nearest rule among the 16 affine rules; the distance is the degree of
/// non-linearity of `f`.
pub fn nearest_affine(f: Rule) -> Nearest {
    nearest_in(f, &affine_rules())
}

/// Partition of all 256 rules by distance from a reference rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistancePartition {
    pub reference: Rule,
    /// `classes[m]` holds the rules at distance `m`, ascending by number.
    pub classes: Vec<Vec<Rule>>,
}

impl DistancePartition {
    pub fn class_of(&self, r: Rule) -> usize {
        self.reference.hamming(&r) as usize
    }
}

/// Splits all 256 rules into the 9 classes at distance 0..=8 from `g`.
pub fn distance_partition(g: Rule) -> DistancePartition {
    let mut classes = vec![Vec::new(); 9];
    for r in Rule::all() {
        classes[g.hamming(&r) as usize].push(r);
    }
    DistancePartition {
        reference: g,
        classes,
    }
}
