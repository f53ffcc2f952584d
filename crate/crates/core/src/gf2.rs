//! Minimal linear algebra over GF(2) = {0, 1}.
//!
//! Vectors are fixed-length bit strings stored in a single machine word
//! (lengths 1..=64), so position 0 is the leftmost, most significant bit and
//! the decimal view of a vector is just its stored word. Matrices are dense
//! square collections of row vectors acting on column vectors by mod-2
//! matrix-vector product. Everything here is an immutable value; all
//! operations are pure functions.

use std::fmt;
use std::str::FromStr;

use crate::Error;

/// A fixed-length bit vector over GF(2).
///
/// Position 0 is the leftmost (most significant) bit: the decimal view of a
/// vector of length `n` is `sum bits[i] * 2^(n-1-i)`, so `1011` reads as 11.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    value: u64,
}

impl BitVec {
    /// Builds a vector of `len` bits from its decimal view.
    ///
    /// Panics if `len` is outside 1..=64 or `value` does not fit in `len`
    /// bits.
    pub fn new(len: usize, value: u64) -> Self {
        assert!((1..=64).contains(&len), "bit length {len} out of range");
        if len < 64 {
            assert!(
                value >> len == 0,
                "value {value} does not fit in {len} bits"
            );
        }
        Self { len, value }
    }

    /// The all-zero vector.
    pub fn zeros(len: usize) -> Self {
        Self::new(len, 0)
    }

    /// The all-one vector.
    pub fn ones(len: usize) -> Self {
        let value = if len == 64 { u64::MAX } else { (1 << len) - 1 };
        Self::new(len, value)
    }

    /// Builds a vector from bits given leftmost first.
    pub fn from_bits(bits: &[bool]) -> Self {
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Self::new(bits.len(), value)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    /// Decimal view of the whole vector.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Bit at `pos`, counting from the left (0 = most significant).
    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len, "bit position {pos} out of range");
        (self.value >> (self.len - 1 - pos)) & 1 == 1
    }

    /// Copy of the vector with the bit at `pos` replaced.
    pub fn with_bit(&self, pos: usize, bit: bool) -> Self {
        assert!(pos < self.len, "bit position {pos} out of range");
        let mask = 1 << (self.len - 1 - pos);
        let value = if bit {
            self.value | mask
        } else {
            self.value & !mask
        };
        Self {
            len: self.len,
            value,
        }
    }

    /// Copy of the vector with the bit at `pos` flipped.
    pub fn flipped(&self, pos: usize) -> Self {
        self.with_bit(pos, !self.get(pos))
    }

    /// Bitwise XOR; both vectors must have the same length.
    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        Self {
            len: self.len,
            value: self.value ^ other.value,
        }
    }

    /// Mod-2 inner product: the parity of the bitwise AND.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        (self.value & other.value).count_ones() & 1 == 1
    }

    /// Number of set bits.
    pub fn weight(&self) -> u32 {
        self.value.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Bits leftmost first.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.len)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.is_empty() || s.len() > 64 {
            return Err(Error::InvalidLength(s.len()));
        }
        let mut value = 0u64;
        for c in s.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::InvalidBitString(s.to_string())),
                };
        }
        Ok(Self {
            len: s.len(),
            value,
        })
    }
}

/// A dense square binary matrix stored as row vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: Vec<BitVec>,
}

impl Gf2Matrix {
    /// Builds a matrix from its rows; all rows must have length equal to the
    /// row count.
    pub fn from_rows(rows: Vec<BitVec>) -> Result<Self, Error> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Ok(Self { rows })
    }

    /// Builds an n x n matrix from the decimal views of its rows.
    pub fn from_row_values(n: usize, values: &[u64]) -> Self {
        assert_eq!(values.len(), n);
        Self {
            rows: values.iter().map(|&v| BitVec::new(n, v)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            rows: vec![BitVec::zeros(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitVec::zeros(n).with_bit(i, true)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.weight() == 1 && r.get(i))
    }

    /// Copy of the matrix with row `i` replaced.
    pub fn with_row(&self, i: usize, row: BitVec) -> Self {
        assert_eq!(row.len(), self.n());
        let mut rows = self.rows.clone();
        rows[i] = row;
        Self { rows }
    }

    /// Mod-2 matrix-vector product: bit `i` of the result is the parity of
    /// the bitwise AND of row `i` with `x`.
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec, Error> {
        if x.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        let bits: Vec<bool> = self.rows.iter().map(|row| row.dot(x)).collect();
        Ok(BitVec::from_bits(&bits))
    }

    /// GF(2) row rank; the nullity is `n - rank`.
    pub fn rank(&self) -> usize {
        gf2_rank(self.rows.iter().map(|r| r.value()))
    }
}

impl fmt::Display for Gf2Matrix {
    /// Matrix text format: one row per line, characters '0'/'1'.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{row}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Gf2Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let rows = s
            .lines()
            .map(BitVec::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(rows)
    }
}

fn gf2_rank(values: impl IntoIterator<Item = u64>) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in values {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

/// One linear constraint on a candidate matrix row: the mod-2 inner product
/// of the row with `input` must equal `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowConstraint {
    pub input: BitVec,
    pub target: bool,
}

impl RowConstraint {
    pub fn new(input: BitVec, target: bool) -> Self {
        Self { input, target }
    }
}

/// Solution set of a [`solve_row`] system.
///
/// `count` is always exact. For lengths up to 8 `rows` holds every solution
/// in ascending order; for longer rows it holds a single canonical solution
/// (free variables set to zero). An inconsistent system has `count == 0` and
/// no rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSolutions {
    pub count: u128,
    pub rows: Vec<BitVec>,
}

impl RowSolutions {
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

/// Threshold below which [`solve_row`] materializes the full solution set.
pub const FULL_ENUMERATION_LEN: usize = 8;

/// Finds every length-`len` row `r` with `parity(r AND c.input) = c.target`
/// for all constraints `c`, by Gaussian elimination.
///
/// Panics if a constraint input has a length other than `len`.
pub fn solve_row(len: usize, constraints: &[RowConstraint]) -> RowSolutions {
    assert!((1..=64).contains(&len), "row length {len} out of range");
    for c in constraints {
        assert_eq!(c.input.len(), len, "constraint length mismatch");
    }

    // Reduced row echelon form over (coefficient mask, rhs) pairs. The
    // pivot of each retained equation is its highest set coefficient bit.
    let mut pivots: Vec<(u64, u64, bool)> = Vec::new(); // (pivot bit, mask, rhs)
    for c in constraints {
        let mut mask = c.input.value();
        let mut rhs = c.target;
        for &(p, m, r) in &pivots {
            if mask & p != 0 {
                mask ^= m;
                rhs ^= r;
            }
        }
        if mask == 0 {
            if rhs {
                return RowSolutions {
                    count: 0,
                    rows: Vec::new(),
                };
            }
            continue;
        }
        let pivot = 1 << (63 - mask.leading_zeros());
        for (_, m, r) in pivots.iter_mut() {
            if *m & pivot != 0 {
                *m ^= mask;
                *r ^= rhs;
            }
        }
        pivots.push((pivot, mask, rhs));
    }

    let rank = pivots.len();
    let count = 1u128 << (len - rank);

    // Particular solution: free variables zero, pivot variables forced by
    // their (fully reduced) equations.
    let particular: u64 = pivots
        .iter()
        .filter(|&&(_, _, r)| r)
        .map(|&(p, _, _)| p)
        .fold(0, |acc, p| acc | p);

    let all_bits = if len == 64 { u64::MAX } else { (1 << len) - 1 };
    let pivot_mask: u64 = pivots.iter().fold(0, |acc, &(p, _, _)| acc | p);
    let free_mask = all_bits & !pivot_mask;

    let rows = if len <= FULL_ENUMERATION_LEN {
        // Span the null space over the free bits.
        let free_bits: Vec<u64> = (0..len as u32)
            .map(|i| 1u64 << i)
            .filter(|b| free_mask & b != 0)
            .collect();
        let mut out = Vec::with_capacity(count as usize);
        for combo in 0u64..(1 << free_bits.len()) {
            let mut v = 0u64;
            for (i, &fb) in free_bits.iter().enumerate() {
                if combo >> i & 1 == 1 {
                    v |= fb;
                }
            }
            // Pivot variables follow from the free assignment.
            let mut row = v;
            for &(p, m, r) in &pivots {
                let forced = r ^ ((m & !p & v).count_ones() & 1 == 1);
                if forced {
                    row |= p;
                }
            }
            out.push(BitVec::new(len, row));
        }
        out.sort();
        out
    } else {
        vec![BitVec::new(len, particular)]
    };

    RowSolutions { count, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn mat(rows: &[&str]) -> Gf2Matrix {
        Gf2Matrix::from_rows(rows.iter().map(|r| bv(r)).collect()).unwrap()
    }

    /// Brute-force oracle: keep the rows with the right parity against every
    /// constraint, scanning all 2^len candidates.
    fn enumerate_rows(len: usize, constraints: &[RowConstraint]) -> Vec<BitVec> {
        (0..1u64 << len)
            .map(|v| BitVec::new(len, v))
            .filter(|r| constraints.iter().all(|c| r.dot(&c.input) == c.target))
            .collect()
    }

    #[test]
    fn decimal_view_is_msb_first() {
        let v = bv("1011");
        assert_eq!(v.value(), 11);
        assert_eq!(v.len(), 4);
        assert!(v.get(0));
        assert!(!v.get(1));
        assert_eq!(v.to_string(), "1011");
    }

    #[test]
    fn bit_edits_round_trip() {
        let v = bv("0110");
        assert_eq!(v.flipped(0).to_string(), "1110");
        assert_eq!(v.with_bit(3, true).to_string(), "0111");
        assert_eq!(v.flipped(2).flipped(2), v);
    }

    #[test]
    fn rejects_malformed_bit_strings() {
        assert!(matches!(
            "10a1".parse::<BitVec>(),
            Err(Error::InvalidBitString(_))
        ));
        assert!(matches!("".parse::<BitVec>(), Err(Error::InvalidLength(0))));
    }

    #[test]
    fn worked_product_from_window_illustration() {
        let m = mat(&["1101", "1110", "0111", "1011"]);
        assert_eq!(m.mul_vec(&bv("1101")).unwrap(), bv("1000"));
    }

    #[test]
    fn identity_and_zero_products() {
        let id = Gf2Matrix::identity(4);
        for v in 0..16 {
            let x = BitVec::new(4, v);
            assert_eq!(id.mul_vec(&x).unwrap(), x);
        }
        assert_eq!(Gf2Matrix::zero(4).mul_vec(&bv("1111")).unwrap(), bv("0000"));
    }

    #[test]
    fn product_rejects_length_mismatch() {
        let m = Gf2Matrix::identity(4);
        assert_eq!(
            m.mul_vec(&bv("101")),
            Err(Error::LengthMismatch {
                expected: 4,
                got: 3
            })
        );
    }

    #[test]
    fn matrix_text_format_round_trips() {
        let text = "1101\n1110\n0111\n1011";
        let m: Gf2Matrix = text.parse().unwrap();
        assert_eq!(m.to_string(), text);
        assert!("110\n1110\n0111\n1011".parse::<Gf2Matrix>().is_err());
    }

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(Gf2Matrix::identity(4).rank(), 4);
        assert_eq!(Gf2Matrix::zero(4).rank(), 0);
        assert_eq!(mat(&["1100", "0011", "1111", "0000"]).rank(), 2);
    }

    #[test]
    fn rank_matches_image_count() {
        // Image size of x -> Mx is 2^rank; count it directly.
        let m = mat(&["0100", "1010", "0101", "0010"]);
        let images: std::collections::HashSet<u64> = (0..16)
            .map(|v| m.mul_vec(&BitVec::new(4, v)).unwrap().value())
            .collect();
        assert_eq!(1 << m.rank(), images.len());
    }

    #[test]
    fn solve_single_constraint() {
        let sols = solve_row(4, &[RowConstraint::new(bv("0111"), true)]);
        assert_eq!(sols.count, 8);
        assert!(sols.rows.contains(&bv("0001")));
        assert_eq!(
            sols.rows,
            enumerate_rows(4, &[RowConstraint::new(bv("0111"), true)])
        );
    }

    #[test]
    fn solve_two_constraints_pins_leading_bits() {
        let cs = [
            RowConstraint::new(bv("1000"), false),
            RowConstraint::new(bv("0100"), true),
        ];
        let sols = solve_row(4, &cs);
        assert_eq!(sols.count, 4);
        for r in &sols.rows {
            assert!(!r.get(0));
            assert!(r.get(1));
        }
        assert_eq!(sols.rows, enumerate_rows(4, &cs));
    }

    #[test]
    fn zero_input_with_odd_target_is_inconsistent() {
        let sols = solve_row(4, &[RowConstraint::new(bv("0000"), true)]);
        assert!(sols.is_empty());
        assert!(sols.rows.is_empty());
    }

    #[test]
    fn long_rows_return_canonical_solution_and_count() {
        let input = BitVec::new(16, 0b1010_0000_0000_0001);
        let sols = solve_row(16, &[RowConstraint::new(input, true)]);
        assert_eq!(sols.count, 1 << 15);
        assert_eq!(sols.rows.len(), 1);
        assert!(sols.rows[0].dot(&input));
    }

    proptest! {
        #[test]
        fn product_is_linear(rows in proptest::collection::vec(0u64..256, 8),
                             x in 0u64..256, y in 0u64..256) {
            let m = Gf2Matrix::from_row_values(8, &rows);
            let xv = BitVec::new(8, x);
            let yv = BitVec::new(8, y);
            let lhs = m.mul_vec(&xv.xor(&yv)).unwrap();
            let rhs = m.mul_vec(&xv).unwrap().xor(&m.mul_vec(&yv).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn solver_count_matches_enumeration(len in 1usize..=4,
                                            raw in proptest::collection::vec((0u64..16, any::<bool>()), 0..4)) {
            let cs: Vec<RowConstraint> = raw
                .into_iter()
                .map(|(v, t)| RowConstraint::new(BitVec::new(len, v & ((1 << len) - 1)), t))
                .collect();
            let sols = solve_row(len, &cs);
            let oracle = enumerate_rows(len, &cs);
            prop_assert_eq!(sols.count as usize, oracle.len());
            prop_assert_eq!(sols.rows, oracle);
        }

        #[test]
        fn image_count_is_two_to_the_rank(rows in proptest::collection::vec(0u64..64, 6)) {
            let m = Gf2Matrix::from_row_values(6, &rows);
            let images: std::collections::HashSet<u64> = (0..64)
                .map(|v| m.mul_vec(&BitVec::new(6, v)).unwrap().value())
                .collect();
            prop_assert_eq!(images.len(), 1 << m.rank());
        }
    }
}
