use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::function::library::delta;
use crate::instance::Instance;
use crate::rational::Rational;

/// Which branch of the Boolean pinning reduction ran.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PinningPath {
    /// Some variable carries both `δ_0` and `δ_1`.
    Contradiction,
    /// No `δ` constraints; the evaluator was called on the input directly.
    Unpinned,
    /// Every function is invariant under global bit flip.
    Symmetric,
    /// Used `f(x) > f(x̄)` to separate the two mixed assignments of `t_0, t_1`.
    Asymmetric { function: String, tuple: Vec<usize> },
}

/// Result of [`pinning_reduce_boolean`] with the instances it evaluated.
#[derive(Debug, Clone)]
pub struct BooleanPinning {
    pub z: Rational,
    pub path: PinningPath,
    /// `(label, instance, Z)` for every evaluator call, in call order.
    pub calls: Vec<(String, Instance, Rational)>,
}

/// Computes `Z(I)` for `I` over `F ∪ {δ_0, δ_1}` using only evaluator calls on
/// instances over `F`.
///
/// Variables pinned to 0 are merged into a fresh `t_0`, those pinned to 1
/// into `t_1` (instance `I'`), or all into a single `t` (instance `I''`).
/// `Z(I') - Z(I'')` counts the two mixed assignments of `(t_0, t_1)`; a
/// flip-symmetric family makes them equal, otherwise one extra constraint
/// `f(t_{x_1}, ..., t_{x_k})` with `f(x) > f(x̄)` gives a second independent
/// equation.
pub fn pinning_reduce_boolean(instance: &Instance, evaluator: &dyn Evaluator) -> Result<BooleanPinning> {
    if instance.domain_size() != 2 {
        return Err(Error::Unsupported("Boolean pinning needs q = 2".into()));
    }
    let d0 = delta(2, 0);
    let d1 = delta(2, 1);
    let pin_value = |name: &str| {
        let f = &instance.functions()[name];
        if *f == d0 {
            Some(0)
        } else if *f == d1 {
            Some(1)
        } else {
            None
        }
    };

    let n = instance.num_variables();
    let mut pinned: Vec<[bool; 2]> = vec![[false; 2]; n];
    let mut any_pin = false;
    for c in instance.constraints() {
        if let Some(b) = pin_value(&c.function) {
            pinned[c.scope[0]][b] = true;
            any_pin = true;
        }
    }
    let mut calls = Vec::new();
    if !any_pin {
        let z = evaluator.evaluate(instance)?;
        calls.push(("I".to_string(), instance.clone(), z.clone()));
        return Ok(BooleanPinning {
            z,
            path: PinningPath::Unpinned,
            calls,
        });
    }
    if pinned.iter().any(|p| p[0] && p[1]) {
        return Ok(BooleanPinning {
            z: Rational::from_integer(0.into()),
            path: PinningPath::Contradiction,
            calls,
        });
    }

    // Family F: the catalog minus the two pinning functions, in catalog order.
    let mut base = instance.filter_constraints(|c| pin_value(&c.function).is_none());
    base.prune_catalog();
    let family: Vec<(String, crate::WeightFunction)> =
        base.functions().iter().map(|(k, v)| (k.clone(), v.clone())).collect();

    // V_2 keeps its relative order, then t_0, t_1 (or the single t).
    let mut index = vec![0; n];
    let mut free = 0;
    for v in 0..n {
        if !pinned[v][0] && !pinned[v][1] {
            index[v] = free;
            free += 1;
        }
    }
    let (t0, t1) = (free, free + 1);
    let split = base.relabel(free + 2, |v| match pinned[v] {
        [true, _] => t0,
        [_, true] => t1,
        _ => index[v],
    })?;
    let merged = base.relabel(free + 1, |v| match pinned[v] {
        [false, false] => index[v],
        _ => free,
    })?;

    let mut eval = |label: &str, inst: Instance| -> Result<Rational> {
        let z = evaluator.evaluate(&inst)?;
        calls.push((label.to_string(), inst, z.clone()));
        Ok(z)
    };
    let z_split = eval("I'", split.clone())?;
    let z_merged = eval("I''", merged.clone())?;
    let mixed = z_split - z_merged;

    let witness = family.iter().find_map(|(name, f)| {
        let mask = f.len() - 1;
        (0..f.len())
            .find(|&x| f.at(x) > f.at(x ^ mask))
            .map(|x| (name.clone(), f.clone(), x))
    });
    let Some((name, f, x)) = witness else {
        return Ok(BooleanPinning {
            z: mixed / Rational::from_integer(2.into()),
            path: PinningPath::Symmetric,
            calls,
        });
    };

    let tuple = f.tuple(x);
    let mut split_x = split.clone();
    split_x.constrain(&name, &tuple.iter().map(|&b| if b == 0 { t0 } else { t1 }).collect::<Vec<_>>())?;
    let mut merged_x = merged.clone();
    merged_x.constrain(&name, &vec![free; f.arity()])?;
    let z_split_x = eval("I'_x", split_x)?;
    let z_merged_x = eval("I''_x", merged_x)?;

    // mixed   = A + B
    // mixed_x = A·f(x) + B·f(x̄)
    let fx = f.at(x);
    let fxbar = f.at(x ^ (f.len() - 1));
    let mixed_x = z_split_x - z_merged_x;
    let z = (mixed_x - fxbar * &mixed) / (fx - fxbar);
    Ok(BooleanPinning {
        z,
        path: PinningPath::Asymmetric { function: name, tuple },
        calls,
    })
}
