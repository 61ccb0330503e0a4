//! Linear systems over GF(2) with bit-packed rows.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A bit vector of fixed length, packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut row = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                row.set(i, true);
            }
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitRow) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// One equation `coefficients · x = constant`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gf2Equation {
    pub coefficients: BitRow,
    pub constant: bool,
}

/// A system of linear equations over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2System {
    num_variables: usize,
    rows: Vec<Gf2Equation>,
}

impl Gf2System {
    pub fn new(num_variables: usize) -> Self {
        Gf2System {
            num_variables,
            rows: Vec::new(),
        }
    }

    /// The system `0 = 1`, which has no solutions.
    pub fn inconsistent(num_variables: usize) -> Self {
        let mut s = Self::new(num_variables);
        s.push(BitRow::zeros(num_variables), true);
        s
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn rows(&self) -> &[Gf2Equation] {
        &self.rows
    }

    pub fn push(&mut self, coefficients: BitRow, constant: bool) {
        assert_eq!(coefficients.len(), self.num_variables, "row length must match num_variables");
        self.rows.push(Gf2Equation {
            coefficients,
            constant,
        });
    }

    /// Adds `x_{v_1} ⊕ ... ⊕ x_{v_m} = constant`. Repeated variables cancel.
    pub fn push_sparse(&mut self, variables: &[usize], constant: bool) {
        let mut row = BitRow::zeros(self.num_variables);
        for &v in variables {
            row.flip(v);
        }
        self.push(row, constant);
    }

    pub fn extend(&mut self, other: Gf2System) {
        assert_eq!(other.num_variables, self.num_variables);
        self.rows.extend(other.rows);
    }

    pub fn is_satisfied_by(&self, x: &BitRow) -> bool {
        self.rows.iter().all(|r| r.coefficients.dot(x) == r.constant)
    }

    /// Gaussian elimination. Returns `None` if inconsistent, else the rank.
    pub fn rank(&self) -> Option<usize> {
        let mut pivots: Vec<(usize, Gf2Equation)> = Vec::new();
        for row in &self.rows {
            let mut r = row.clone();
            for (col, p) in &pivots {
                if r.coefficients.get(*col) {
                    r.coefficients.xor_assign(&p.coefficients);
                    r.constant ^= p.constant;
                }
            }
            match r.coefficients.first_one() {
                Some(col) => {
                    // Keep earlier pivot rows reduced in the new column too.
                    for (_, p) in pivots.iter_mut() {
                        if p.coefficients.get(col) {
                            p.coefficients.xor_assign(&r.coefficients);
                            p.constant ^= r.constant;
                        }
                    }
                    pivots.push((col, r));
                }
                None if r.constant => return None,
                None => {}
            }
        }
        Some(pivots.len())
    }

    /// `0` if inconsistent, else `2^(n - rank)`.
    pub fn count_solutions(&self) -> BigUint {
        match self.rank() {
            None => BigUint::zero(),
            Some(rank) => BigUint::one() << (self.num_variables - rank),
        }
    }
}

/// Row-reduces `vectors` and returns a basis of their span.
pub fn span_basis(vectors: impl IntoIterator<Item = BitRow>) -> Vec<BitRow> {
    reduced_basis(vectors).into_iter().map(|(_, b)| b).collect()
}

/// Fully reduced echelon basis as `(pivot column, row)` pairs: each pivot
/// column is set in exactly one row.
pub fn reduced_basis(vectors: impl IntoIterator<Item = BitRow>) -> Vec<(usize, BitRow)> {
    let mut basis: Vec<(usize, BitRow)> = Vec::new();
    for v in vectors {
        let mut r = v;
        for (col, b) in &basis {
            if r.get(*col) {
                r.xor_assign(b);
            }
        }
        if let Some(col) = r.first_one() {
            for (_, b) in basis.iter_mut() {
                if b.get(col) {
                    b.xor_assign(&r);
                }
            }
            basis.push((col, r));
        }
    }
    basis
}

/// Basis of `{a : a·v = 0 for all v in span(vectors)}` in dimension `len`.
pub fn orthogonal_complement(len: usize, vectors: impl IntoIterator<Item = BitRow>) -> Vec<BitRow> {
    let basis = reduced_basis(vectors);
    (0..len)
        .filter(|c| basis.iter().all(|(p, _)| p != c))
        .map(|free| {
            let mut a = BitRow::zeros(len);
            a.set(free, true);
            for (p, b) in &basis {
                if b.get(free) {
                    a.set(*p, true);
                }
            }
            a
        })
        .collect()
}
