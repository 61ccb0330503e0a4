use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::eval::AutoEvaluator;
use crate::function::WeightFunction;
use crate::instance::Instance;
use crate::linalg::rank;
use crate::oracle::Budget;
use crate::rational::{format_rational, parse_weight, Rational};

use super::graph::Graph;

/// A symmetric `q × q` matrix of non-negative rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetMatrix {
    rows: Vec<Vec<Rational>>,
}

impl TargetMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let q = rows.len();
        if q == 0 {
            return Err(Error::Matrix("matrix is empty".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != q {
                return Err(Error::Matrix(format!("row {i} has {} entries, expected {q}", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if v < &Rational::zero() {
                    return Err(Error::Matrix(format!("entry ({i}, {j}) is negative")));
                }
                if rows[j][i] != *v {
                    return Err(Error::Matrix(format!("entries ({i}, {j}) and ({j}, {i}) differ")));
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    /// `[[1, λ], [λ, 1]]`.
    pub fn ising(lambda: &Rational) -> Self {
        let one = Rational::one();
        Self {
            rows: vec![vec![one.clone(), lambda.clone()], vec![lambda.clone(), one]],
        }
    }

    /// Parses a JSON array of rows (numbers or rational strings) or
    /// whitespace-separated text rows.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = if text.trim_start().starts_with('[') {
            let raw: Vec<Vec<Value>> = serde_json::from_str(text).map_err(|e| Error::Matrix(e.to_string()))?;
            raw.iter()
                .map(|row| {
                    row.iter()
                        .map(|v| match v {
                            Value::String(s) => parse_weight(s),
                            Value::Number(n) => parse_weight(&n.to_string()),
                            other => Err(Error::Matrix(format!("unexpected entry {other}"))),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| l.split_whitespace().map(parse_weight).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(rows)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    /// `H` viewed as the binary function `h(i, j) = H_ij` on `[q]`.
    pub fn as_function(&self) -> WeightFunction {
        WeightFunction::from_fn(2, self.size(), |x| self.rows[x[0]][x[1]].clone()).expect("square, non-negative")
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Array(r.iter().map(|v| Value::String(format_rational(v))).collect()))
                .collect(),
        )
    }
}

/// The #CSP instance with one constraint `h(x_u, x_v)` per edge.
pub fn hom_instance(h: &TargetMatrix, g: &Graph) -> Instance {
    let mut inst = Instance::new(h.size().max(2), g.num_vertices()).expect("domain size checked");
    if h.size() < 2 {
        // A 1×1 target has a single colour; embed it in [2] with colour 1 unused.
        let w = h.get(0, 0).clone();
        let f = WeightFunction::from_fn(2, 2, |x| if x == [0, 0] { w.clone() } else { Rational::zero() })
            .expect("non-negative");
        inst.define("h", f).expect("fresh catalog");
        inst.define("delta0", crate::function::library::delta(2, 0)).expect("fresh catalog");
        for v in 0..g.num_vertices() {
            inst.constrain("delta0", &[v]).expect("in range");
        }
    } else {
        inst.define("h", h.as_function()).expect("fresh catalog");
    }
    for &(u, v) in g.edges() {
        inst.constrain("h", &[u, v]).expect("in range");
    }
    inst
}

/// `Z_H(G) = Σ_σ ∏_{uv ∈ E} H_{σ(u)σ(v)}`, via the #CSP encoding.
pub fn eval_graph_hom(h: &TargetMatrix, g: &Graph, budget: &Budget) -> Result<Rational> {
    let evaluator = AutoEvaluator {
        budget: *budget,
        force_oracle: false,
    };
    Ok(evaluator.run(&hom_instance(h, g))?.z)
}

/// `Z_H(G)` for the Ising matrix by direct enumeration of spin vectors,
/// independent of the instance encoding.
pub fn ising_direct(g: &Graph, lambda: &Rational, budget: &Budget) -> Result<Rational> {
    budget.admit(2, g.num_vertices())?;
    let n = g.num_vertices();
    let mut counts = vec![0u64; g.edges().len() + 1];
    for s in 0u64..1 << n {
        let cut = g
            .edges()
            .iter()
            .filter(|&&(u, v)| (s >> u ^ s >> v) & 1 == 1)
            .count();
        counts[cut] += 1;
    }
    let mut z = Rational::zero();
    let mut power = Rational::one();
    for c in counts {
        z += &power * Rational::from_integer(c.into());
        power *= lambda;
    }
    Ok(z)
}

/// One connected component of the support graph of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomComponent {
    pub vertices: Vec<usize>,
    pub bipartite: bool,
    pub rank: usize,
    pub tractable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomVerdict {
    pub tractable: bool,
    pub components: Vec<HomComponent>,
}

impl HomVerdict {
    pub fn as_str(&self) -> &'static str {
        if self.tractable {
            "TRACTABLE"
        } else {
            "HARD"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.as_str(),
            "components": self.components.iter().map(|c| json!({
                "vertices": c.vertices,
                "bipartite": c.bipartite,
                "rank": c.rank,
                "tractable": c.tractable,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Tractability of `Eval(H)`: a connected non-bipartite component needs rank
/// at most 1, a connected bipartite one rank at most 2.
///
/// The support graph has an edge `ij` iff `H_ij > 0`; a vertex with an
/// all-zero row is absent, and a positive diagonal entry is a loop (so the
/// component is not bipartite).
pub fn bulatov_grohe_classify(h: &TargetMatrix) -> HomVerdict {
    let q = h.size();
    let present: Vec<bool> = (0..q).map(|i| h.rows[i].iter().any(|v| !v.is_zero())).collect();
    let mut colour: Vec<Option<usize>> = vec![None; q];
    let mut components = Vec::new();
    for start in 0..q {
        if !present[start] || colour[start].is_some() {
            continue;
        }
        let mut vertices = vec![start];
        let mut bipartite = true;
        colour[start] = Some(0);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let cu = colour[u].expect("visited");
            for v in 0..q {
                if h.rows[u][v].is_zero() {
                    continue;
                }
                match colour[v] {
                    None => {
                        colour[v] = Some(1 - cu);
                        vertices.push(v);
                        stack.push(v);
                    }
                    Some(cv) if cv == cu => bipartite = false,
                    Some(_) => {}
                }
            }
        }
        vertices.sort_unstable();
        let sub: Vec<Vec<Rational>> = vertices
            .iter()
            .map(|&i| vertices.iter().map(|&j| h.rows[i][j].clone()).collect())
            .collect();
        let r = rank(&sub);
        let tractable = r <= if bipartite { 2 } else { 1 };
        components.push(HomComponent {
            vertices,
            bipartite,
            rank: r,
            tractable,
        });
    }
    HomVerdict {
        tractable: components.iter().all(|c| c.tractable),
        components,
    }
}

/// `Z_H(G)` for rank-1 `H` in closed form: with `H_kk > 0`,
/// `H_ij = H_ik H_jk / H_kk`, so `Z = H_kk^{-|E|} ∏_v Σ_i H_ik^{deg v}`.
pub fn rank_one_closed_form(h: &TargetMatrix, g: &Graph) -> Result<Rational> {
    let q = h.size();
    match rank(h.rows()) {
        0 => {
            return Ok(if g.edges().is_empty() {
                Rational::from_integer(q.into()).pow(g.num_vertices() as i32)
            } else {
                Rational::zero()
            })
        }
        1 => {}
        r => return Err(Error::Precondition(format!("closed form needs rank 1, H has rank {r}"))),
    }
    let k = (0..q)
        .find(|&k| !h.get(k, k).is_zero())
        .ok_or_else(|| Error::Internal("rank-1 symmetric matrix with zero diagonal".into()))?;
    let mut z = Rational::one() / h.get(k, k).pow(g.edges().len() as i32);
    for v in 0..g.num_vertices() {
        let d = g.degree(v) as i32;
        z *= (0..q).map(|i| h.get(i, k).pow(d)).sum::<Rational>();
    }
    Ok(z)
}
