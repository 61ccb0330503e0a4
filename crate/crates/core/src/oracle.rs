//! Brute-force evaluation of the partition function.
//!
//! This is the reference every fast path and reduction is checked against, so
//! it stays deliberately simple: enumerate `[q]^n`, multiply, add. Tables are
//! scaled to integers first (one common denominator per function) so the inner
//! loop multiplies machine integers and only falls back to big integers on
//! overflow.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::encode_tuple;
use crate::instance::Instance;
use crate::rational::{common_denominator, from_biguint, Rational};

/// Upper bound on the number of assignments the oracle will enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_states: u128,
}

impl Budget {
    pub const DEFAULT_STATES: u128 = 1 << 30;

    pub fn new(max_states: u128) -> Self {
        Budget { max_states }
    }

    pub fn unlimited() -> Self {
        Budget { max_states: u128::MAX }
    }

    /// Checks that `q^free` states fit.
    pub fn admit(&self, q: usize, free: usize) -> Result<u128> {
        let states = (q as u128).checked_pow(free as u32);
        match states {
            Some(s) if s <= self.max_states => Ok(s),
            _ => Err(Error::BudgetExceeded {
                states: format!("{q}^{free}"),
                budget: self.max_states,
            }),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_STATES)
    }
}

/// `w(σ) = ∏_C f_C(σ restricted to s_C)`; the empty product is 1.
pub fn weight(instance: &Instance, assignment: &[usize]) -> Result<Rational> {
    if assignment.len() != instance.num_variables() {
        return Err(Error::ArityMismatch {
            expected: instance.num_variables(),
            actual: assignment.len(),
        });
    }
    let mut w = Rational::one();
    let mut args = Vec::new();
    for (f, scope) in instance.resolved() {
        args.clear();
        args.extend(scope.iter().map(|&v| assignment[v]));
        w *= f.lookup(&args)?;
        if w.is_zero() {
            break;
        }
    }
    Ok(w)
}

/// `Z(I)`: the sum of `w(σ)` over all `σ: V -> [q]`.
pub fn brute_force_z(instance: &Instance, budget: &Budget) -> Result<Rational> {
    enumerate(instance, &vec![None; instance.num_variables()], budget, |_| true)
}

/// `Z(I | σ(u_1)=c_1, ..., σ(u_k)=c_k)`.
pub fn conditioned_z(instance: &Instance, pins: &[(usize, usize)], budget: &Budget) -> Result<Rational> {
    let mut fixed = vec![None; instance.num_variables()];
    for &(v, c) in pins {
        if v >= instance.num_variables() {
            return Err(Error::Constraint {
                index: v,
                message: "pinned variable out of range".into(),
            });
        }
        if c >= instance.domain_size() {
            return Err(Error::DomainValue {
                value: c,
                q: instance.domain_size(),
            });
        }
        if fixed[v].replace(c).is_some() {
            return Err(Error::ConflictingPins(v));
        }
    }
    enumerate(instance, &fixed, budget, |_| true)
}

/// Sum of `w(σ)` over assignments accepted by `filter`.
pub fn filtered_z(
    instance: &Instance,
    budget: &Budget,
    filter: impl Fn(&[usize]) -> bool + Sync,
) -> Result<Rational> {
    enumerate(instance, &vec![None; instance.num_variables()], budget, filter)
}

struct ScaledTable {
    small: Vec<Option<u64>>,
    big: Vec<BigUint>,
}

fn enumerate(
    instance: &Instance,
    fixed: &[Option<usize>],
    budget: &Budget,
    filter: impl Fn(&[usize]) -> bool + Sync,
) -> Result<Rational> {
    let q = instance.domain_size();
    let free: Vec<usize> = (0..fixed.len()).filter(|&v| fixed[v].is_none()).collect();
    let states = budget.admit(q, free.len())?;

    let mut denominator = BigUint::one();
    let mut tables: Vec<ScaledTable> = Vec::new();
    let mut index_of = indexmap::IndexMap::new();
    for (name, f) in instance.functions() {
        let d = common_denominator(f.table());
        let big: Vec<BigUint> = f
            .table()
            .iter()
            .map(|v| (v * Rational::from_integer(d.clone())).to_integer().to_biguint().expect("non-negative"))
            .collect();
        let small = big.iter().map(ToPrimitive::to_u64).collect();
        index_of.insert(name.clone(), (tables.len(), d.to_biguint().expect("positive")));
        tables.push(ScaledTable { small, big });
    }
    let constraints: Vec<(usize, &[usize])> = instance
        .constraints()
        .iter()
        .map(|c| {
            let (t, d) = &index_of[&c.function];
            denominator *= d;
            (*t, c.scope.as_slice())
        })
        .collect();

    let chunk = 1u128 << 12;
    let chunks = states.div_ceil(chunk);
    let total: BigUint = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * chunk;
            let end = (start + chunk).min(states);
            let mut sigma: Vec<usize> = fixed.iter().map(|c| c.unwrap_or(0)).collect();
            // Odometer over the free variables, last free variable fastest.
            let mut rest = start;
            for &v in free.iter().rev() {
                sigma[v] = (rest % q as u128) as usize;
                rest /= q as u128;
            }
            let mut acc = Accumulator::default();
            let mut args = Vec::new();
            for _ in start..end {
                if filter(&sigma) {
                    acc.add_product(&tables, &constraints, &sigma, q, &mut args);
                }
                for &v in free.iter().rev() {
                    sigma[v] += 1;
                    if sigma[v] < q {
                        break;
                    }
                    sigma[v] = 0;
                }
            }
            acc.finish()
        })
        .reduce(BigUint::zero, |a, b| a + b);
    Ok(from_biguint(total) / from_biguint(denominator))
}

#[derive(Default)]
struct Accumulator {
    small: u128,
    big: BigUint,
}

impl Accumulator {
    fn add_product(
        &mut self,
        tables: &[ScaledTable],
        constraints: &[(usize, &[usize])],
        sigma: &[usize],
        q: usize,
        args: &mut Vec<usize>,
    ) {
        let mut small: u128 = 1;
        let mut big: Option<BigUint> = None;
        for &(t, scope) in constraints {
            args.clear();
            args.extend(scope.iter().map(|&v| sigma[v]));
            let idx = encode_tuple(q, args);
            let table = &tables[t];
            if let Some(b) = big.as_mut() {
                *b *= &table.big[idx];
                if b.is_zero() {
                    return;
                }
                continue;
            }
            match table.small[idx] {
                Some(0) => return,
                Some(v) => match small.checked_mul(v as u128) {
                    Some(p) => small = p,
                    None => big = Some(BigUint::from(small) * v),
                },
                None => big = Some(BigUint::from(small) * &table.big[idx]),
            }
        }
        match big {
            Some(b) => self.big += b,
            None => match self.small.checked_add(small) {
                Some(s) => self.small = s,
                None => {
                    self.big += self.small;
                    self.small = small;
                }
            },
        }
    }

    fn finish(self) -> BigUint {
        self.big + self.small
    }
}
