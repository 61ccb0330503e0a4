use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::function::library::{all_distinct, delta};
use crate::instance::{Constraint, Instance};
use crate::rational::Rational;

use super::fresh_name;

/// Largest `q` whose partition lattice is enumerated (Bell(6) = 203).
pub const MAX_LATTICE_Q: usize = 6;

/// A set partition of `{0, …, q-1}`, stored canonically: each block sorted,
/// blocks ordered by their least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionOfQ {
    blocks: Vec<Vec<usize>>,
}

impl PartitionOfQ {
    pub fn new(q: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; q];
        let mut blocks: Vec<Vec<usize>> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        for block in &mut blocks {
            block.sort_unstable();
            for &x in block.iter() {
                if x >= q || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Precondition(format!("not a partition of [{q}]")));
                }
            }
        }
        if seen.contains(&false) {
            return Err(Error::Precondition(format!("blocks do not cover [{q}]")));
        }
        blocks.sort();
        Ok(Self { blocks })
    }

    /// From a restricted growth string: element `i` lies in block `labels[i]`.
    fn from_labels(labels: &[usize]) -> Self {
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in labels.iter().enumerate() {
            blocks[b].push(i);
        }
        Self { blocks }
    }

    /// `0̲`, all singletons.
    pub fn finest(q: usize) -> Self {
        Self {
            blocks: (0..q).map(|i| vec![i]).collect(),
        }
    }

    /// The single-block partition.
    pub fn coarsest(q: usize) -> Self {
        Self {
            blocks: if q == 0 { Vec::new() } else { vec![(0..q).collect()] },
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `self ≤ other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        self.blocks
            .iter()
            .all(|b| other.blocks.iter().any(|o| b.iter().all(|x| o.contains(x))))
    }
}

impl fmt::Display for PartitionOfQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{{{}}}", parts.join("|"))
    }
}

fn check_lattice_q(q: usize) -> Result<()> {
    if q == 0 || q > MAX_LATTICE_Q {
        return Err(Error::Unsupported(format!(
            "partition lattices are enumerated for 1 ≤ q ≤ {MAX_LATTICE_Q}, got {q}"
        )));
    }
    Ok(())
}

/// All partitions of `[q]`, finest first; more blocks always come earlier, so
/// the order is a linear extension of `≤` reversed from the top.
pub fn partitions(q: usize) -> Result<Vec<PartitionOfQ>> {
    check_lattice_q(q)?;
    let mut out = Vec::new();
    let mut labels = vec![0usize; q];
    grow(&mut labels, 1, 0, &mut out);
    out.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn grow(labels: &mut [usize], i: usize, max: usize, out: &mut Vec<PartitionOfQ>) {
    if i == labels.len() {
        out.push(PartitionOfQ::from_labels(labels));
        return;
    }
    for b in 0..=max + 1 {
        labels[i] = b;
        grow(labels, i + 1, max.max(b), out);
    }
}

/// The Möbius function of the partition lattice, indexed like [`partitions`].
#[derive(Debug, Clone)]
pub struct MobiusTable {
    pub q: usize,
    pub entries: Vec<(PartitionOfQ, i64)>,
}

impl MobiusTable {
    pub fn get(&self, p: &PartitionOfQ) -> Option<i64> {
        self.entries.iter().find(|(e, _)| e == p).map(|(_, m)| *m)
    }

    pub fn top(&self) -> i64 {
        self.get(&PartitionOfQ::coarsest(self.q)).expect("lattice contains its top")
    }
}

/// `μ(0̲) = 1` and `μ(θ) = -Σ_{η < θ} μ(η)`.
pub fn mobius_table(q: usize) -> Result<MobiusTable> {
    let all = partitions(q)?;
    let mut entries: Vec<(PartitionOfQ, i64)> = Vec::with_capacity(all.len());
    for theta in all {
        let mu = if entries.is_empty() {
            1
        } else {
            -entries
                .iter()
                .filter(|(eta, _)| eta.refines(&theta))
                .map(|(_, m)| m)
                .sum::<i64>()
        };
        entries.push((theta, mu));
    }
    Ok(MobiusTable { q, entries })
}

/// An instance plus one extra all-distinct constraint on `q` variables.
#[derive(Debug, Clone)]
pub struct DisequalityInstance {
    /// The instance without the all-distinct constraint.
    pub base: Instance,
    /// `t_0, …, t_{q-1}`.
    pub distinct: Vec<usize>,
}

impl DisequalityInstance {
    pub fn new(base: Instance, distinct: Vec<usize>) -> Result<Self> {
        let q = base.domain_size();
        if distinct.len() != q {
            return Err(Error::Precondition(format!(
                "the disequality constraint needs {q} variables, got {}",
                distinct.len()
            )));
        }
        for (i, &v) in distinct.iter().enumerate() {
            if v >= base.num_variables() {
                return Err(Error::Precondition(format!("variable {v} out of range")));
            }
            if distinct[..i].contains(&v) {
                return Err(Error::Precondition("disequality variables must be distinct".into()));
            }
        }
        Ok(Self { base, distinct })
    }

    /// Splits off the all-distinct constraint: the one at `index` if given,
    /// else the unique constraint whose table is the arity-`q` all-distinct
    /// relation.
    pub fn from_instance(instance: &Instance, index: Option<usize>) -> Result<Self> {
        let target = all_distinct(instance.domain_size());
        let index = match index {
            Some(i) => {
                let c = instance
                    .constraints()
                    .get(i)
                    .ok_or_else(|| Error::Precondition(format!("no constraint {i}")))?;
                if instance.function(&c.function)? != &target {
                    return Err(Error::Precondition(format!(
                        "constraint {i} does not apply the all-distinct relation"
                    )));
                }
                i
            }
            None => {
                let hits: Vec<usize> = instance
                    .constraints()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| instance.functions()[&c.function] == target)
                    .map(|(i, _)| i)
                    .collect();
                match hits.as_slice() {
                    [i] => *i,
                    [] => return Err(Error::Precondition("no all-distinct constraint".into())),
                    _ => {
                        return Err(Error::Unsupported(
                            "more than one all-distinct constraint; name the one to use".into(),
                        ))
                    }
                }
            }
        };
        let distinct = instance.constraints()[index].scope.clone();
        let constraints = instance
            .constraints()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, c)| c.clone())
            .collect();
        let mut base = Instance::from_parts(
            instance.domain_size(),
            instance.num_variables(),
            instance.functions().clone(),
            constraints,
        )?;
        base.prune_catalog();
        Self::new(base, distinct)
    }

    /// The instance with the all-distinct constraint restored.
    pub fn to_instance(&self) -> Result<Instance> {
        let mut out = self.base.clone();
        let name = fresh_name(&out, "alldiff");
        out.define(name.clone(), all_distinct(out.domain_size()))?;
        out.constrain(&name, &self.distinct)?;
        Ok(out)
    }

    /// `I_η`: the all-distinct constraint dropped and the `t` variables in
    /// each block of `η` merged into the block's first member.
    pub fn merged(&self, eta: &PartitionOfQ) -> Result<Instance> {
        let n = self.base.num_variables();
        let mut target: Vec<usize> = (0..n).collect();
        for block in eta.blocks() {
            let rep = self.distinct[block[0]];
            for &j in &block[1..] {
                target[self.distinct[j]] = rep;
            }
        }
        let mut compact = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if target[v] == v {
                compact[v] = next;
                next += 1;
            }
        }
        self.base.relabel(next, |v| compact[target[v]])
    }
}

/// One summand `μ(η)·Z(I_η)`.
#[derive(Debug, Clone)]
pub struct MobiusTerm {
    pub partition: PartitionOfQ,
    pub mu: i64,
    pub z: Rational,
}

#[derive(Debug, Clone)]
pub struct MobiusTrace {
    pub z: Rational,
    pub terms: Vec<MobiusTerm>,
}

/// `Z(I) = Σ_η μ(η)·Z(I_η)` over all partitions `η` of `[q]`.
///
/// `Z(I_η)` sums the weight of every assignment whose `t`-values are
/// constant on the blocks of `η`; Möbius inversion keeps only those with
/// pairwise distinct `t`-values.
pub fn mobius_pinning_reduce(instance: &DisequalityInstance, evaluator: &dyn Evaluator) -> Result<MobiusTrace> {
    let table = mobius_table(instance.base.domain_size())?;
    let mut z = Rational::zero();
    let mut terms = Vec::with_capacity(table.entries.len());
    for (eta, mu) in table.entries {
        let merged = instance.merged(&eta)?;
        let value = evaluator.evaluate(&merged)?;
        z += &value * Rational::from_integer(mu.into());
        terms.push(MobiusTerm {
            partition: eta,
            mu,
            z: value,
        });
    }
    Ok(MobiusTrace { z, terms })
}

/// Result of [`symmetric_pinning_reduce_q`].
#[derive(Debug, Clone)]
pub struct SymmetricPinning {
    pub z: Rational,
    /// `I'` with the pinned classes merged into `t_0, …, t_{q-1}`; absent when
    /// no reduction was needed.
    pub lifted: Option<DisequalityInstance>,
    pub trace: Option<MobiusTrace>,
}

/// Computes `Z(I)` for `I` over `F ∪ {δ_c}` with `F` invariant under every
/// permutation of `[q]`.
///
/// Variables pinned to `c` are merged into a fresh `t_c` and an all-distinct
/// constraint is put on `t_0, …, t_{q-1}`. Each injective choice of `t`-values
/// contributes `Z(I)` by symmetry, so `Z(I') = q!·Z(I)`.
pub fn symmetric_pinning_reduce_q(instance: &Instance, evaluator: &dyn Evaluator) -> Result<SymmetricPinning> {
    let q = instance.domain_size();
    let deltas: Vec<_> = (0..q).map(|c| delta(q, c)).collect();
    let pin_of = |name: &str| deltas.iter().position(|d| &instance.functions()[name] == d);

    for name in instance.used_functions() {
        if pin_of(name).is_none() && !instance.functions()[name].is_domain_symmetric() {
            return Err(Error::Unsupported(format!(
                "`{name}` is not invariant under domain permutations"
            )));
        }
    }

    let n = instance.num_variables();
    let mut pinned: Vec<Option<usize>> = vec![None; n];
    let mut any_pin = false;
    for c in instance.constraints() {
        if let Some(value) = pin_of(&c.function) {
            any_pin = true;
            let v = c.scope[0];
            match pinned[v] {
                Some(other) if other != value => {
                    return Ok(SymmetricPinning {
                        z: Rational::zero(),
                        lifted: None,
                        trace: None,
                    })
                }
                _ => pinned[v] = Some(value),
            }
        }
    }
    if !any_pin {
        return Ok(SymmetricPinning {
            z: evaluator.evaluate(instance)?,
            lifted: None,
            trace: None,
        });
    }
    check_lattice_q(q)?;

    let mut index = vec![0; n];
    let mut next = 0;
    for v in 0..n {
        if pinned[v].is_none() {
            index[v] = next;
            next += 1;
        }
    }
    let t: Vec<usize> = (next..next + q).collect();
    for v in 0..n {
        if let Some(c) = pinned[v] {
            index[v] = t[c];
        }
    }
    let constraints: Vec<Constraint> = instance
        .constraints()
        .iter()
        .filter(|c| pin_of(&c.function).is_none())
        .map(|c| Constraint::new(c.function.clone(), c.scope.iter().map(|&v| index[v]).collect()))
        .collect();
    let mut base = Instance::from_parts(q, next + q, instance.functions().clone(), constraints)?;
    base.prune_catalog();
    let lifted = DisequalityInstance::new(base, t)?;
    let trace = mobius_pinning_reduce(&lifted, evaluator)?;
    let factorial: u64 = (1..=q as u64).product();
    Ok(SymmetricPinning {
        z: &trace.z / Rational::from_integer(factorial.into()),
        lifted: Some(lifted),
        trace: Some(trace),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::Oracle;
    use crate::function::library::disequality;
    use crate::oracle::{brute_force_z, filtered_z, Budget};
    use crate::rational::int;

    #[test]
    fn bell_numbers() {
        let sizes: Vec<usize> = (1..=6).map(|q| partitions(q).unwrap().len()).collect();
        assert_eq!(sizes, vec![1, 2, 5, 15, 52, 203]);
        assert!(partitions(7).is_err());
    }

    #[test]
    fn mobius_small_lattices() {
        let m2 = mobius_table(2).unwrap();
        assert_eq!(m2.get(&PartitionOfQ::finest(2)), Some(1));
        assert_eq!(m2.top(), -1);
        let m3 = mobius_table(3).unwrap();
        let pairs: Vec<i64> = m3.entries.iter().filter(|(p, _)| p.num_blocks() == 2).map(|e| e.1).collect();
        assert_eq!(pairs, vec![-1, -1, -1]);
        assert_eq!(m3.top(), 2);
        let tops: Vec<i64> = (1..=6).map(|q| mobius_table(q).unwrap().top()).collect();
        assert_eq!(tops, vec![1, -1, 2, -6, 24, -120]);
    }

    #[test]
    fn mobius_sums_vanish_above_bottom() {
        let m = mobius_table(4).unwrap();
        for (theta, _) in &m.entries[1..] {
            let s: i64 = m.entries.iter().filter(|(e, _)| e.refines(theta)).map(|e| e.1).sum();
            assert_eq!(s, 0, "{theta}");
        }
    }

    #[test]
    fn lone_disequality_counts_permutations() {
        for (q, expected) in [(2, 2), (3, 6)] {
            let base = Instance::new(q, q).unwrap();
            let d = DisequalityInstance::new(base, (0..q).collect()).unwrap();
            let trace = mobius_pinning_reduce(&d, &Oracle::default()).unwrap();
            assert_eq!(trace.z, int(expected));
        }
    }

    #[test]
    fn forced_equality_gives_zero() {
        let mut base = Instance::new(3, 4).unwrap();
        base.define("eq", crate::function::library::equality(3)).unwrap();
        base.constrain("eq", &[0, 1]).unwrap();
        let d = DisequalityInstance::new(base.clone(), vec![0, 1, 2]).unwrap();
        let z = mobius_pinning_reduce(&d, &Oracle::default()).unwrap().z;
        assert_eq!(z, int(0));
        let direct = filtered_z(&base, &Budget::default(), |s| s[0] != s[1] && s[1] != s[2] && s[0] != s[2]).unwrap();
        assert_eq!(z, direct);
    }

    #[test]
    fn from_instance_round_trip() {
        let mut inst = Instance::new(3, 4).unwrap();
        inst.define("alldiff", all_distinct(3)).unwrap();
        inst.define("neq", disequality(3)).unwrap();
        inst.constrain("neq", &[2, 3]).unwrap();
        inst.constrain("alldiff", &[0, 1, 2]).unwrap();
        let d = DisequalityInstance::from_instance(&inst, None).unwrap();
        assert_eq!(d.distinct, vec![0, 1, 2]);
        assert_eq!(d.base.constraints().len(), 1);
        let z = mobius_pinning_reduce(&d, &Oracle::default()).unwrap().z;
        assert_eq!(z, brute_force_z(&inst, &Budget::default()).unwrap());
    }

    #[test]
    fn symmetric_pinning_boolean_and_ternary() {
        let mut b = Instance::boolean(2);
        b.define("d0", delta(2, 0)).unwrap();
        b.define("neq", disequality(2)).unwrap();
        b.constrain("d0", &[0]).unwrap();
        b.constrain("neq", &[0, 1]).unwrap();
        assert_eq!(symmetric_pinning_reduce_q(&b, &Oracle::default()).unwrap().z, int(1));

        let mut t = Instance::new(3, 2).unwrap();
        t.define("d2", delta(3, 2)).unwrap();
        t.define("neq", disequality(3)).unwrap();
        t.constrain("d2", &[0]).unwrap();
        t.constrain("neq", &[0, 1]).unwrap();
        let out = symmetric_pinning_reduce_q(&t, &Oracle::default()).unwrap();
        assert_eq!(out.z, int(2));
        assert_eq!(out.trace.unwrap().terms.len(), 5);
    }

    #[test]
    fn symmetric_pinning_rejects_asymmetric_family() {
        let mut t = Instance::new(3, 1).unwrap();
        t.define("d0", delta(3, 0)).unwrap();
        t.define("f", crate::WeightFunction::from_fn(1, 3, |x| int(x[0] as i64 + 1)).unwrap()).unwrap();
        t.constrain("d0", &[0]).unwrap();
        t.constrain("f", &[0]).unwrap();
        assert!(matches!(symmetric_pinning_reduce_q(&t, &Oracle::default()), Err(Error::Unsupported(_))));
    }
}
