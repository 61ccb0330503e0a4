//! Weight functions over `[q]^k` and their underlying relations.
//!
//! A tuple `(x_1, ..., x_k)` is stored at table index `Σ x_i·q^(k-i)`, with
//! `x_1` the most significant digit. Everything else in the crate goes through
//! [`WeightFunction::lookup`] or the index helpers defined here.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_weight, Rational};

/// A function `f: [q]^k -> Q+` stored as a dense table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightFunction {
    arity: usize,
    q: usize,
    table: Vec<Rational>,
}

/// Number of tuples in `[q]^k`, or `None` on overflow.
pub fn table_size(q: usize, arity: usize) -> Option<usize> {
    q.checked_pow(u32::try_from(arity).ok()?)
}

/// Table index of `tuple` under the big-endian convention. No range checks.
pub fn encode_tuple(q: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * q + x)
}

/// Inverse of [`encode_tuple`].
pub fn decode_tuple(q: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut tuple = vec![0; arity];
    for slot in tuple.iter_mut().rev() {
        *slot = index % q;
        index /= q;
    }
    tuple
}

/// Boolean shortcut: the value of position `i` (0-based) in the tuple at `index`.
#[inline]
pub fn bit(arity: usize, index: usize, i: usize) -> usize {
    (index >> (arity - 1 - i)) & 1
}

impl WeightFunction {
    pub fn new(arity: usize, q: usize, table: Vec<Rational>) -> Result<Self> {
        if q < 2 {
            return Err(Error::DomainSize(q));
        }
        let expected = table_size(q, arity).ok_or_else(|| {
            Error::Unsupported(format!("table of arity {arity} over [{q}] is too large"))
        })?;
        if table.len() != expected {
            return Err(Error::TableLength {
                expected,
                actual: table.len(),
            });
        }
        if let Some(v) = table.iter().find(|v| v.is_negative()) {
            return Err(Error::NegativeWeight(v.to_string()));
        }
        Ok(WeightFunction { arity, q, table })
    }

    /// Boolean function from a table.
    pub fn boolean(arity: usize, table: Vec<Rational>) -> Result<Self> {
        Self::new(arity, 2, table)
    }

    /// Boolean function from integer entries, for tests and docs.
    pub fn from_ints(arity: usize, table: &[i64]) -> Result<Self> {
        Self::new(arity, 2, table.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    /// Parses table entries written as `"num/den"` or integer strings.
    pub fn parse(arity: usize, q: usize, table: &[impl AsRef<str>]) -> Result<Self> {
        let table = table
            .iter()
            .map(|s| parse_weight(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(arity, q, table)
    }

    /// Tabulates `value` over every tuple of `[q]^arity`.
    pub fn from_fn(arity: usize, q: usize, mut value: impl FnMut(&[usize]) -> Rational) -> Result<Self> {
        let size = table_size(q, arity)
            .ok_or_else(|| Error::Unsupported(format!("arity {arity} too large")))?;
        let table = (0..size)
            .map(|idx| value(&decode_tuple(q, arity, idx)))
            .collect();
        Self::new(arity, q, table)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain_size(&self) -> usize {
        self.q
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn is_boolean(&self) -> bool {
        self.q == 2
    }

    /// `f(x)`, checking arity and domain.
    pub fn lookup(&self, x: &[usize]) -> Result<&Rational> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                actual: x.len(),
            });
        }
        if let Some(&value) = x.iter().find(|&&v| v >= self.q) {
            return Err(Error::DomainValue { value, q: self.q });
        }
        Ok(&self.table[encode_tuple(self.q, x)])
    }

    /// Value at a table index (see the module docs for the encoding).
    pub fn at(&self, index: usize) -> &Rational {
        &self.table[index]
    }

    pub fn tuple(&self, index: usize) -> Vec<usize> {
        decode_tuple(self.q, self.arity, index)
    }

    pub fn is_identically_zero(&self) -> bool {
        self.table.iter().all(Zero::is_zero)
    }

    /// The underlying relation `{x : f(x) != 0}`.
    pub fn support(&self) -> Relation {
        Relation {
            arity: self.arity,
            q: self.q,
            tuples: (0..self.table.len())
                .filter(|&i| !self.table[i].is_zero())
                .collect(),
        }
    }

    /// Distinct nonzero values in table order of first appearance.
    pub fn nonzero_values(&self) -> Vec<&Rational> {
        let mut seen: Vec<&Rational> = Vec::new();
        for v in &self.table {
            if !v.is_zero() && !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        Self::new(self.arity, self.q, self.table.iter().map(|v| v * factor).collect())
    }

    /// Pointwise sum with a function of the same shape.
    pub fn pointwise_add(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity || self.q != other.q {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                actual: other.arity,
            });
        }
        let table = self.table.iter().zip(&other.table).map(|(a, b)| a + b).collect();
        Self::new(self.arity, self.q, table)
    }

    /// Boolean complement `f(x̄)` of every tuple.
    pub fn complemented(&self) -> Self {
        let mask = self.table.len() - 1;
        WeightFunction {
            arity: self.arity,
            q: self.q,
            table: (0..self.table.len()).map(|i| self.table[i ^ mask].clone()).collect(),
        }
    }

    /// True if `f(π(x_1),...,π(x_k)) = f(x)` for every permutation `π` of `[q]`.
    pub fn is_domain_symmetric(&self) -> bool {
        // Transpositions of adjacent elements generate the symmetric group.
        (0..self.q - 1).all(|a| {
            let swap = |v: usize| match v {
                v if v == a => a + 1,
                v if v == a + 1 => a,
                v => v,
            };
            (0..self.table.len()).all(|idx| {
                let image: Vec<usize> = self.tuple(idx).into_iter().map(swap).collect();
                self.table[idx] == self.table[encode_tuple(self.q, &image)]
            })
        })
    }
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.table.iter().map(|v| v.to_string()).collect();
        write!(f, "f[k={}, q={}]({})", self.arity, self.q, entries.join(","))
    }
}

/// A set of tuples over `[q]^k`, stored as table indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    q: usize,
    tuples: BTreeSet<usize>,
}

impl Relation {
    pub fn new(arity: usize, q: usize, tuples: impl IntoIterator<Item = usize>) -> Result<Self> {
        let size = table_size(q, arity).ok_or_else(|| Error::Unsupported("arity too large".into()))?;
        let tuples: BTreeSet<usize> = tuples.into_iter().collect();
        if let Some(&bad) = tuples.iter().find(|&&t| t >= size) {
            return Err(Error::DomainValue { value: bad, q: size });
        }
        Ok(Relation { arity, q, tuples })
    }

    /// Boolean relation from explicit tuples.
    pub fn from_tuples(arity: usize, tuples: &[&[usize]]) -> Result<Self> {
        let mut indices = Vec::with_capacity(tuples.len());
        for t in tuples {
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    actual: t.len(),
                });
            }
            if let Some(&value) = t.iter().find(|&&v| v >= 2) {
                return Err(Error::DomainValue { value, q: 2 });
            }
            indices.push(encode_tuple(2, t));
        }
        Self::new(arity, 2, indices)
    }

    pub fn complete(arity: usize, q: usize) -> Result<Self> {
        let size = table_size(q, arity).ok_or_else(|| Error::Unsupported("arity too large".into()))?;
        Self::new(arity, q, 0..size)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain_size(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.tuples.contains(&index)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.tuples.iter().copied()
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.tuples.iter().map(|&i| decode_tuple(self.q, self.arity, i))
    }

    /// The 0/1 indicator function of the relation.
    pub fn indicator(&self) -> WeightFunction {
        let size = table_size(self.q, self.arity).expect("validated at construction");
        WeightFunction {
            arity: self.arity,
            q: self.q,
            table: (0..size)
                .map(|i| if self.contains(i) { Rational::one() } else { Rational::zero() })
                .collect(),
        }
    }
}

/// The functions the paper names, plus `U_w` and the `q`-ary all-distinct relation.
pub mod library {
    use super::*;
    use crate::rational::parse_weight;

    /// `δ_c`: 1 at `c`, 0 elsewhere.
    pub fn delta(q: usize, c: usize) -> WeightFunction {
        indicator_fn(1, q, |x| x[0] == c)
    }

    /// `χ=` on `[q]`.
    pub fn equality(q: usize) -> WeightFunction {
        indicator_fn(2, q, |x| x[0] == x[1])
    }

    /// `χ≠` on `[q]`.
    pub fn disequality(q: usize) -> WeightFunction {
        indicator_fn(2, q, |x| x[0] != x[1])
    }

    /// `⊕_k`: 1 iff an odd number of arguments are 1.
    pub fn parity(k: usize) -> WeightFunction {
        indicator_fn(k, 2, |x| x.iter().sum::<usize>() % 2 == 1)
    }

    /// `¬⊕_k = 1 - ⊕_k`.
    pub fn not_parity(k: usize) -> WeightFunction {
        indicator_fn(k, 2, |x| x.iter().sum::<usize>() % 2 == 0)
    }

    /// `U_w`: maps 0 to 1 and 1 to `w`.
    pub fn unary_weight(w: Rational) -> WeightFunction {
        WeightFunction::boolean(1, vec![Rational::one(), w]).expect("non-negative weight required")
    }

    /// Arity-0 constant.
    pub fn constant(q: usize, w: Rational) -> WeightFunction {
        WeightFunction::new(0, q, vec![w]).expect("non-negative weight required")
    }

    /// Arity-`q` relation that holds iff the arguments are pairwise distinct.
    pub fn all_distinct(q: usize) -> WeightFunction {
        indicator_fn(q, q, |x| {
            let mut seen = vec![false; q];
            x.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        })
    }

    fn indicator_fn(arity: usize, q: usize, pred: impl Fn(&[usize]) -> bool) -> WeightFunction {
        WeightFunction::from_fn(arity, q, |x| {
            if pred(x) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .expect("library tables are well-formed")
    }

    /// Resolves a built-in name: `delta<c>`, `eq`, `neq`, `xor<k>`, `nxor<k>`,
    /// `alldiff`, `unary:<w>`, `const:<w>`.
    pub fn builtin(name: &str, q: usize) -> Result<WeightFunction> {
        let unknown = || Error::UnknownFunction(name.to_string());
        if let Some(w) = name.strip_prefix("unary:") {
            if q != 2 {
                return Err(Error::Unsupported("unary:<w> is Boolean only".into()));
            }
            return Ok(unary_weight(parse_weight(w)?));
        }
        if let Some(w) = name.strip_prefix("const:") {
            return Ok(constant(q, parse_weight(w)?));
        }
        let boolean_only = |f: WeightFunction| {
            if q == 2 {
                Ok(f)
            } else {
                Err(Error::Unsupported(format!("`{name}` is Boolean only")))
            }
        };
        match name {
            "eq" => Ok(equality(q)),
            "neq" => Ok(disequality(q)),
            "alldiff" => Ok(all_distinct(q)),
            _ => {
                if let Some(c) = name.strip_prefix("delta") {
                    let c: usize = c.parse().map_err(|_| unknown())?;
                    if c >= q {
                        return Err(Error::DomainValue { value: c, q });
                    }
                    Ok(delta(q, c))
                } else if let Some(k) = name.strip_prefix("nxor") {
                    boolean_only(not_parity(k.parse().map_err(|_| unknown())?))
                } else if let Some(k) = name.strip_prefix("xor") {
                    boolean_only(parity(k.parse().map_err(|_| unknown())?))
                } else {
                    Err(unknown())
                }
            }
        }
    }
}
