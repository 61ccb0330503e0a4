use num_traits::{One, Zero};

use crate::classify::product_type;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::Rational;

use super::refuse;

/// Union-find where each node stores its parity relative to its parent.
/// Equal variables have parity 0, complementary ones parity 1.
#[derive(Debug, Clone)]
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<u8>,
    rank: Vec<u8>,
    /// Set on the root of a class that contains an odd cycle.
    contradictory: Vec<bool>,
}

impl ParityUnionFind {
    fn new(len: usize) -> Self {
        ParityUnionFind {
            parent: (0..len).collect(),
            parity: vec![0; len],
            rank: vec![0; len],
            contradictory: vec![false; len],
        }
    }

    /// Returns `(root, parity of x relative to root)` and compresses the path.
    fn find(&mut self, x: usize) -> (usize, u8) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // Walk back from the node nearest the root, accumulating parity.
        let mut acc = 0;
        for &node in path.iter().rev() {
            acc ^= self.parity[node];
            self.parity[node] = acc;
            self.parent[node] = root;
        }
        (root, if x == root { 0 } else { self.parity[x] })
    }

    /// Records `x ⊕ y = relation`.
    fn union(&mut self, x: usize, y: usize, relation: u8) {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            if px ^ py != relation {
                self.contradictory[rx] = true;
            }
            return;
        }
        let (child, root) = if self.rank[rx] < self.rank[ry] { (rx, ry) } else { (ry, rx) };
        if self.rank[rx] == self.rank[ry] {
            self.rank[root] += 1;
        }
        self.parent[child] = root;
        self.parity[child] = px ^ py ^ relation;
        let bad = self.contradictory[child];
        self.contradictory[root] |= bad;
    }
}

/// Weights of one class: `alpha` when its root takes 0, `beta` when it takes 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassWeights {
    pub root: usize,
    pub members: Vec<(usize, u8)>,
    pub alpha: Rational,
    pub beta: Rational,
}

/// The variables of a product-type instance split into independent classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecomposition {
    pub classes: Vec<ClassWeights>,
    pub global_scale: Rational,
}

impl ClassDecomposition {
    /// `global_scale · ∏ (α_c + β_c)`.
    pub fn partition_function(&self) -> Rational {
        if self.global_scale.is_zero() {
            return Rational::zero();
        }
        let mut z = self.global_scale.clone();
        for c in &self.classes {
            z *= &c.alpha + &c.beta;
            if z.is_zero() {
                break;
            }
        }
        z
    }
}

/// Builds the equality/disequality classes of a product-type instance and the
/// per-class weights.
pub fn class_decomposition(instance: &Instance) -> Result<ClassDecomposition> {
    if instance.domain_size() != 2 {
        return Err(Error::Unsupported("product-type evaluation needs q = 2".into()));
    }
    let n = instance.num_variables();
    let mut witnesses = indexmap::IndexMap::new();
    for name in instance.used_functions() {
        let w = product_type(&instance.functions()[name])?.ok_or_else(|| refuse(name, "of product type"))?;
        witnesses.insert(name, w);
    }

    let mut global_scale = Rational::one();
    // Accumulated unary weight per variable, `None` meaning (1, 1).
    let mut unary: Vec<Option<[Rational; 2]>> = vec![None; n];
    let attach = |unary: &mut Vec<Option<[Rational; 2]>>, v: usize, w: [&Rational; 2]| {
        let slot = unary[v].get_or_insert_with(|| [Rational::one(), Rational::one()]);
        slot[0] *= w[0];
        slot[1] *= w[1];
    };
    let zero = Rational::zero();
    let one = Rational::one();
    let mut uf = ParityUnionFind::new(n);

    for c in instance.constraints() {
        let w = &witnesses[c.function.as_str()];
        global_scale *= &w.scale;
        if global_scale.is_zero() {
            return Ok(ClassDecomposition {
                classes: Vec::new(),
                global_scale,
            });
        }
        for &(i, value) in &w.constant_columns {
            let pin = if value == 0 { [&one, &zero] } else { [&zero, &one] };
            attach(&mut unary, c.scope[i], pin);
        }
        for class in &w.classes {
            let rep = c.scope[class.representative];
            for &(j, comp) in &class.members {
                uf.union(rep, c.scope[j], comp as u8);
            }
            attach(&mut unary, rep, [&class.weights[0], &class.weights[1]]);
        }
    }

    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<ClassWeights> = Vec::new();
    for v in 0..n {
        let (root, parity) = uf.find(v);
        if class_of[root] == usize::MAX {
            class_of[root] = classes.len();
            classes.push(ClassWeights {
                root,
                members: Vec::new(),
                alpha: Rational::one(),
                beta: Rational::one(),
            });
        }
        let class = &mut classes[class_of[root]];
        class.members.push((v, parity));
        if let Some(w) = &unary[v] {
            // Root at 0 puts v at `parity`; root at 1 puts v at `1 - parity`.
            class.alpha *= &w[parity as usize];
            class.beta *= &w[1 - parity as usize];
        }
    }
    for class in classes.iter_mut() {
        if uf.contradictory[class.root] {
            class.alpha = Rational::zero();
            class.beta = Rational::zero();
        }
    }
    Ok(ClassDecomposition {
        classes,
        global_scale,
    })
}

/// `Z(I)` for an instance whose functions are all of product type.
pub fn eval_product_type(instance: &Instance) -> Result<Rational> {
    Ok(class_decomposition(instance)?.partition_function())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::library::*;
    use crate::rational::int;

    #[test]
    fn unary_on_disequality_pair() {
        let mut inst = Instance::boolean(2);
        inst.define("neq", disequality(2)).unwrap().define("u2", unary_weight(int(2))).unwrap();
        inst.constrain("neq", &[0, 1]).unwrap().constrain("u2", &[0]).unwrap();
        assert_eq!(eval_product_type(&inst).unwrap(), int(3));
    }

    #[test]
    fn odd_disequality_triangle_is_zero() {
        let mut inst = Instance::boolean(3);
        inst.define("neq", disequality(2)).unwrap();
        for s in [[0, 1], [1, 2], [0, 2]] {
            inst.constrain("neq", &s).unwrap();
        }
        let d = class_decomposition(&inst).unwrap();
        assert_eq!(d.classes.len(), 1);
        assert_eq!(d.partition_function(), int(0));
    }

    #[test]
    fn free_variable_contributes_two() {
        assert_eq!(eval_product_type(&Instance::boolean(1)).unwrap(), int(2));
        assert_eq!(eval_product_type(&Instance::boolean(0)).unwrap(), int(1));
    }

    #[test]
    fn self_disequality_annihilates() {
        let mut inst = Instance::boolean(1);
        inst.define("neq", disequality(2)).unwrap();
        inst.constrain("neq", &[0, 0]).unwrap();
        assert_eq!(eval_product_type(&inst).unwrap(), int(0));
    }

    #[test]
    fn refuses_non_product_type() {
        let mut inst = Instance::boolean(3);
        inst.define("xor3", parity(3)).unwrap();
        inst.constrain("xor3", &[0, 1, 2]).unwrap();
        assert!(matches!(eval_product_type(&inst), Err(Error::Precondition(_))));
    }

    #[test]
    fn long_chain_is_fast() {
        let n = 10_000;
        let mut inst = Instance::boolean(n);
        inst.define("neq", disequality(2)).unwrap().define("u", unary_weight(int(3))).unwrap();
        for v in 0..n - 1 {
            inst.constrain("neq", &[v, v + 1]).unwrap();
        }
        inst.constrain("u", &[0]).unwrap();
        // Alternating chain: root value decides everything; U_3 on v0.
        assert_eq!(eval_product_type(&inst).unwrap(), int(4));
    }
}
