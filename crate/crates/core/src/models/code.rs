use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf2::{span_basis, BitRow};
use crate::oracle::Budget;
use crate::rational::{format_rational, from_biguint, Rational};

use super::graph::Graph;
use super::hom::{eval_graph_hom, TargetMatrix};

/// An `r × C` generator matrix over GF(2) of full row rank `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    columns: usize,
    rows: Vec<BitRow>,
}

impl GeneratorMatrix {
    pub fn new(columns: usize, rows: Vec<BitRow>) -> Result<Self> {
        if let Some(i) = rows.iter().position(|r| r.len() != columns) {
            return Err(Error::Matrix(format!("row {i} has length {}, expected {columns}", rows[i].len())));
        }
        let r = span_basis(rows.iter().cloned()).len();
        if r != rows.len() {
            return Err(Error::Matrix(format!(
                "generator matrix has {} rows but rank {r} over GF(2)",
                rows.len()
            )));
        }
        Ok(Self { columns, rows })
    }

    pub fn from_bits(rows: &[&[u8]]) -> Result<Self> {
        let columns = rows.first().map_or(0, |r| r.len());
        Self::new(
            columns,
            rows.iter()
                .map(|r| BitRow::from_bits(&r.iter().map(|&b| b == 1).collect::<Vec<_>>()))
                .collect(),
        )
    }

    /// Parses a JSON array of 0/1 rows or whitespace-separated 0/1 text rows.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<Vec<u8>> = if text.trim_start().starts_with('[') {
            serde_json::from_str(text).map_err(|e| Error::Matrix(e.to_string()))?
        } else {
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| {
                    l.split_whitespace()
                        .map(|t| t.parse::<u8>().map_err(|_| Error::Matrix(format!("bad bit `{t}`"))))
                        .collect()
                })
                .collect::<Result<_>>()?
        };
        if let Some(b) = rows.iter().flatten().find(|&&b| b > 1) {
            return Err(Error::Matrix(format!("entry {b} is not a bit")));
        }
        let columns = rows.first().map_or(0, Vec::len);
        let bits: Vec<BitRow> = rows
            .iter()
            .map(|r| BitRow::from_bits(&r.iter().map(|&b| b == 1).collect::<Vec<_>>()))
            .collect();
        Self::new(columns, bits)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Array((0..self.columns).map(|j| json!(u8::from(r.get(j)))).collect()))
                .collect(),
        )
    }

    /// Number of codewords of each Hamming weight `0..=C`, walking the row
    /// span in Gray-code order.
    pub fn weight_distribution(&self, budget: &Budget) -> Result<Vec<BigUint>> {
        budget.admit(2, self.rank())?;
        let mut counts = vec![BigUint::zero(); self.columns + 1];
        let mut word = BitRow::zeros(self.columns);
        counts[0] += 1u32;
        for step in 1u128..1 << self.rank() {
            word.xor_assign(&self.rows[step.trailing_zeros() as usize]);
            counts[word.ones().count()] += 1u32;
        }
        Ok(counts)
    }
}

/// `W_A(λ) = Σ_{c ∈ Υ} λ^{‖c‖}` over the row space `Υ` of `A`.
pub fn weight_enumerator(a: &GeneratorMatrix, lambda: &Rational, budget: &Budget) -> Result<Rational> {
    let mut z = Rational::zero();
    let mut power = Rational::one();
    for count in a.weight_distribution(budget)? {
        z += &power * from_biguint(count);
        power *= lambda;
    }
    Ok(z)
}

/// The vertex-edge incidence matrix of a connected graph with the last
/// vertex's row removed; its rank is `n - 1` because `G` has a spanning tree.
pub fn incidence_code(g: &Graph) -> Result<GeneratorMatrix> {
    if !g.is_connected() {
        return Err(Error::Precondition("incidence code needs a connected graph".into()));
    }
    let m = g.edges().len();
    let rows = (0..g.num_vertices().saturating_sub(1))
        .map(|v| {
            let mut row = BitRow::zeros(m);
            for (j, &(a, b)) in g.edges().iter().enumerate() {
                if a == v || b == v {
                    row.set(j, true);
                }
            }
            row
        })
        .collect();
    GeneratorMatrix::new(m, rows)
}

/// Both sides of `W_A(λ) = ½ Z_H(G)` for the Ising matrix `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCheck {
    pub w: Rational,
    pub z: Rational,
    pub holds: bool,
}

impl CutCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "weight_enumerator": format_rational(&self.w),
            "z_ising": format_rational(&self.z),
            "holds": self.holds,
        })
    }
}

/// Computes `W_A(λ)` from the incidence code and `Z_H(G)` through the #CSP
/// encoding, independently, and compares `2·W` with `Z`.
pub fn verify_cut_identity(g: &Graph, lambda: &Rational, budget: &Budget) -> Result<CutCheck> {
    let w = weight_enumerator(&incidence_code(g)?, lambda, budget)?;
    let z = eval_graph_hom(&TargetMatrix::ising(lambda), g, budget)?;
    let holds = &w + &w == z;
    Ok(CutCheck { w, z, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn small_codes() {
        let b = Budget::default();
        let l = int(2);
        assert_eq!(weight_enumerator(&GeneratorMatrix::from_bits(&[&[1, 1]]).unwrap(), &l, &b).unwrap(), int(5));
        assert_eq!(weight_enumerator(&GeneratorMatrix::from_bits(&[&[1]]).unwrap(), &l, &b).unwrap(), int(3));
        let id = GeneratorMatrix::from_bits(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(weight_enumerator(&id, &l, &b).unwrap(), int(9));
        assert!(GeneratorMatrix::from_bits(&[&[1, 1], &[1, 1]]).is_err());
    }

    #[test]
    fn incidence_codes() {
        assert_eq!(incidence_code(&Graph::path(2)).unwrap(), GeneratorMatrix::from_bits(&[&[1]]).unwrap());
        let p3 = incidence_code(&Graph::path(3)).unwrap();
        assert_eq!(p3, GeneratorMatrix::from_bits(&[&[1, 0], &[1, 1]]).unwrap());
        let tri = incidence_code(&Graph::complete(3)).unwrap();
        assert_eq!((tri.rank(), tri.columns()), (2, 3));
        assert!(incidence_code(&Graph::new(3, vec![(0, 1)]).unwrap()).is_err());
    }

    #[test]
    fn cut_identity_examples() {
        let b = Budget::default();
        let edge = verify_cut_identity(&Graph::path(2), &int(2), &b).unwrap();
        assert_eq!((edge.w.clone(), edge.z.clone(), edge.holds), (int(3), int(6), true));
        let tri = verify_cut_identity(&Graph::complete(3), &int(2), &b).unwrap();
        assert_eq!((tri.w.clone(), tri.z.clone(), tri.holds), (int(13), int(26), true));
        let one = verify_cut_identity(&Graph::complete(4), &int(1), &b).unwrap();
        assert_eq!(one.w, int(8));
        assert!(verify_cut_identity(&Graph::cycle(5).unwrap(), &ratio(1, 2), &b).unwrap().holds);
        assert!(verify_cut_identity(&Graph::path(1), &int(3), &b).unwrap().holds);
    }

    #[test]
    fn parses_generator_text_and_json() {
        let a = GeneratorMatrix::parse("1 0 1\n0 1 1\n").unwrap();
        let b = GeneratorMatrix::parse("[[1,0,1],[0,1,1]]").unwrap();
        assert_eq!(a, b);
        assert!(GeneratorMatrix::parse("1 2\n").is_err());
    }
}
