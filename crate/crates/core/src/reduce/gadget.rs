use num_traits::Zero;

use crate::classify::insert_bit;
use crate::error::{Error, Result};
use crate::function::WeightFunction;
use crate::instance::Instance;
use crate::models::{Graph, TargetMatrix};
use crate::rational::Rational;

/// `A' = A Aᵀ` where `A_{b,y} = f(y with position i set to b)`.
///
/// `det A' ≥ 0` by Cauchy–Schwarz, with equality exactly when the two
/// slices of `f` along `i` are proportional.
pub fn gram_matrix(f: &WeightFunction, i: usize) -> Result<TargetMatrix> {
    if !f.is_boolean() {
        return Err(Error::Unsupported("the Gram gadget is Boolean only".into()));
    }
    let k = f.arity();
    if i >= k {
        return Err(Error::Precondition(format!("position {i} out of range for arity {k}")));
    }
    let mut m = [[Rational::zero(), Rational::zero()], [Rational::zero(), Rational::zero()]];
    for y in 0..1usize << (k - 1) {
        let a = [f.at(insert_bit(k, y, i, 0)), f.at(insert_bit(k, y, i, 1))];
        for b in 0..2 {
            for c in 0..2 {
                m[b][c] += a[b] * a[c];
            }
        }
    }
    TargetMatrix::new(m.iter().map(|r| r.to_vec()).collect())
}

/// The instance `Y` over `{f}` with `Z(Y) = Z_{A'}(G)`: a variable per vertex,
/// `k - 1` shared variables per edge `uv`, and the constraints
/// `f(x_u, x_e…)`, `f(x_v, x_e…)` with the vertex variable at position `i`.
pub fn gram_instance(f: &WeightFunction, i: usize, g: &Graph) -> Result<Instance> {
    let k = f.arity();
    if i >= k {
        return Err(Error::Precondition(format!("position {i} out of range for arity {k}")));
    }
    let mut inst = Instance::boolean(g.num_vertices());
    inst.define("f", f.clone())?;
    for &(u, v) in g.edges() {
        let shared: Vec<usize> = (1..k).map(|_| inst.add_variable()).collect();
        for x in [u, v] {
            let mut scope = shared.clone();
            scope.insert(i, x);
            inst.constrain("f", &scope)?;
        }
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::product_like;
    use crate::linalg::determinant;
    use crate::models::eval_graph_hom;
    use crate::oracle::{brute_force_z, Budget};
    use crate::rational::int;

    #[test]
    fn gram_of_product_is_singular() {
        let f = WeightFunction::from_ints(2, &[1, 3, 2, 6]).unwrap();
        let g = gram_matrix(&f, 0).unwrap();
        assert_eq!(g.rows(), &[vec![int(10), int(20)], vec![int(20), int(40)]]);
        assert_eq!(determinant(g.rows()), int(0));
    }

    #[test]
    fn determinant_detects_proportional_slices() {
        let f = WeightFunction::from_ints(3, &[1, 1, 1, 2, 3, 1, 2, 2]).unwrap();
        let pl = product_like(&f).unwrap();
        for i in 0..3 {
            let det = determinant(gram_matrix(&f, i).unwrap().rows());
            assert_eq!(det.is_zero(), pl.lambdas[i].is_some(), "position {i}");
        }
    }

    #[test]
    fn gadget_partition_function_is_eval_of_gram() {
        let f = WeightFunction::from_ints(2, &[1, 1, 1, 2]).unwrap();
        let h = gram_matrix(&f, 0).unwrap();
        for g in [Graph::path(3), Graph::complete(3), Graph::cycle(4).unwrap()] {
            let y = gram_instance(&f, 0, &g).unwrap();
            assert_eq!(
                brute_force_z(&y, &Budget::default()).unwrap(),
                eval_graph_hom(&h, &g, &Budget::default()).unwrap()
            );
        }
        let f3 = WeightFunction::from_ints(3, &[1, 2, 0, 1, 3, 1, 1, 1]).unwrap();
        let y = gram_instance(&f3, 1, &Graph::complete(3)).unwrap();
        assert_eq!(
            brute_force_z(&y, &Budget::default()).unwrap(),
            eval_graph_hom(&gram_matrix(&f3, 1).unwrap(), &Graph::complete(3), &Budget::default()).unwrap()
        );
    }
}
