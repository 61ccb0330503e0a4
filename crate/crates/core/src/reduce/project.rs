use crate::error::{Error, Result};
use crate::function::{encode_tuple, table_size, WeightFunction};
use crate::instance::{Constraint, Instance};
use crate::rational::Rational;

fn check_position(f: &WeightFunction, i: usize) -> Result<()> {
    if i >= f.arity() {
        return Err(Error::Precondition(format!(
            "position {i} out of range for arity {}",
            f.arity()
        )));
    }
    Ok(())
}

/// `g(x) = Σ f(x')` over all `x'` agreeing with `x` on the positions in `keep`.
///
/// `keep` lists 0-based positions in increasing order; the result has arity
/// `keep.len()` with coordinates in that order.
pub fn project(f: &WeightFunction, keep: &[usize]) -> Result<WeightFunction> {
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("projection indices must be strictly increasing".into()));
    }
    if let Some(&i) = keep.last() {
        check_position(f, i)?;
    }
    let q = f.domain_size();
    let size = table_size(q, keep.len()).expect("smaller than the source table");
    let mut table = vec![Rational::from_integer(0.into()); size];
    let mut sub = Vec::with_capacity(keep.len());
    for idx in 0..f.len() {
        let x = f.tuple(idx);
        sub.clear();
        sub.extend(keep.iter().map(|&i| x[i]));
        table[encode_tuple(q, &sub)] += f.at(idx);
    }
    WeightFunction::new(keep.len(), q, table)
}

/// `f^{i=α}`: position `i` fixed to `value`.
pub fn pin_coordinate(f: &WeightFunction, i: usize, value: usize) -> Result<WeightFunction> {
    check_position(f, i)?;
    if value >= f.domain_size() {
        return Err(Error::DomainValue {
            value,
            q: f.domain_size(),
        });
    }
    WeightFunction::from_fn(f.arity() - 1, f.domain_size(), |y| {
        let mut x = y.to_vec();
        x.insert(i, value);
        f.at(encode_tuple(f.domain_size(), &x)).clone()
    })
}

/// `f^{i=*}`: the projection onto every position except `i`.
pub fn project_out(f: &WeightFunction, i: usize) -> Result<WeightFunction> {
    check_position(f, i)?;
    let keep: Vec<usize> = (0..f.arity()).filter(|&j| j != i).collect();
    project(f, &keep)
}

/// `f'(..) = f(..)` with position `drop` forced equal to position `keep`,
/// removing `drop`. This is what repeating a variable in a scope realizes.
pub fn identify_positions(f: &WeightFunction, keep: usize, drop: usize) -> Result<WeightFunction> {
    check_position(f, keep)?;
    check_position(f, drop)?;
    if keep == drop {
        return Err(Error::Precondition("identified positions must differ".into()));
    }
    let q = f.domain_size();
    WeightFunction::from_fn(f.arity() - 1, q, |y| {
        let mut x = y.to_vec();
        let source = if keep < drop { keep } else { keep - 1 };
        x.insert(drop, y[source]);
        f.at(encode_tuple(q, &x)).clone()
    })
}

/// Rewrites every `g` constraint through `expand` (which may add variables),
/// swapping `g` for the functions `expand` introduces.
fn rewrite(
    instance: &Instance,
    g_name: &str,
    added: &[(&str, &WeightFunction)],
    mut expand: impl FnMut(&[usize], &mut usize) -> Vec<Constraint>,
) -> Result<Instance> {
    instance.function(g_name)?;
    let mut n = instance.num_variables();
    let mut constraints = Vec::new();
    for c in instance.constraints() {
        if c.function == g_name {
            constraints.extend(expand(&c.scope, &mut n));
        } else {
            constraints.push(c.clone());
        }
    }
    let mut functions = instance.functions().clone();
    functions.shift_remove(g_name);
    for &(name, f) in added {
        if let Some(existing) = functions.get(name) {
            if existing != f {
                return Err(Error::Precondition(format!(
                    "catalog already has a different function named `{name}`"
                )));
            }
        }
        functions.insert(name.to_string(), f.clone());
    }
    Instance::from_parts(instance.domain_size(), n, functions, constraints)
}

/// Replaces each `g` constraint by an `f` constraint whose `keep` positions
/// carry the original scope and whose other positions get fresh variables.
/// Requires `g = project(f, keep)`; then `Z` is unchanged.
pub fn simulate_projection_instance(
    instance: &Instance,
    g_name: &str,
    f_name: &str,
    f: &WeightFunction,
    keep: &[usize],
) -> Result<Instance> {
    let g = instance.function(g_name)?;
    if &project(f, keep)? != g {
        return Err(Error::Precondition(format!(
            "`{g_name}` is not the projection of `{f_name}` onto {keep:?}"
        )));
    }
    let k = f.arity();
    rewrite(instance, g_name, &[(f_name, f)], |scope, n| {
        let mut full = Vec::with_capacity(k);
        let mut it = scope.iter();
        for i in 0..k {
            if keep.contains(&i) {
                full.push(*it.next().expect("scope length equals |keep|"));
            } else {
                full.push(*n);
                *n += 1;
            }
        }
        vec![Constraint::new(f_name, full)]
    })
}

/// Replaces each `g = f^{i=α}` constraint by `f` on the scope with a fresh
/// variable at position `i`, pinned by `δ_α`. `Z` is unchanged.
pub fn simulate_pinned_instance(
    instance: &Instance,
    g_name: &str,
    f_name: &str,
    f: &WeightFunction,
    position: usize,
    value: usize,
) -> Result<Instance> {
    let g = instance.function(g_name)?;
    if &pin_coordinate(f, position, value)? != g {
        return Err(Error::Precondition(format!(
            "`{g_name}` is not `{f_name}` with position {position} pinned to {value}"
        )));
    }
    let delta = crate::function::library::delta(f.domain_size(), value);
    let delta_name = format!("delta{value}");
    rewrite(
        instance,
        g_name,
        &[(f_name, f), (&delta_name, &delta)],
        |scope, n| {
            let fresh = *n;
            *n += 1;
            let mut full = scope.to_vec();
            full.insert(position, fresh);
            vec![
                Constraint::new(f_name, full),
                Constraint::new(delta_name.clone(), vec![fresh]),
            ]
        },
    )
}
