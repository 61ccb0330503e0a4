use num_bigint::BigUint;
use num_traits::One;

use crate::classify::{is_affine_relation, is_pure_affine, tuple_bits};
use crate::error::{Error, Result};
use crate::function::Relation;
use crate::gf2::{orthogonal_complement, Gf2System};
use crate::instance::Instance;
use crate::rational::{from_biguint, Rational};

use super::refuse;

/// A linear system whose solution set is exactly `relation`.
///
/// With `x⁰` the first tuple, the equations are `a·x = a·x⁰` for `a` ranging
/// over a basis of the orthogonal complement of `span{x ⊕ x⁰ : x ∈ R}`. The
/// empty relation gives the canonical inconsistent system `0 = 1`.
pub fn affine_system_of(relation: &Relation) -> Result<Gf2System> {
    let k = relation.arity();
    if relation.domain_size() != 2 {
        return Err(Error::Unsupported("affine systems need q = 2".into()));
    }
    if !is_affine_relation(relation)? {
        return Err(Error::Precondition("relation is not affine".into()));
    }
    let mut rows = relation.indices();
    let Some(x0) = rows.next() else {
        return Ok(Gf2System::inconsistent(k));
    };
    let base = tuple_bits(k, x0);
    let mut system = Gf2System::new(k);
    for a in orthogonal_complement(k, rows.map(|x| tuple_bits(k, x ^ x0))) {
        let constant = a.dot(&base);
        system.push(a, constant);
    }
    Ok(system)
}

pub fn count_gf2_solutions(system: &Gf2System) -> BigUint {
    system.count_solutions()
}

/// `Z(I) = ∏_f w_f^{k_f} · #solutions`, for instances whose functions are all
/// pure affine.
pub fn eval_pure_affine(instance: &Instance) -> Result<Rational> {
    if instance.domain_size() != 2 {
        return Err(Error::Unsupported("pure-affine evaluation needs q = 2".into()));
    }
    let n = instance.num_variables();
    let mut local = indexmap::IndexMap::new();
    for name in instance.used_functions() {
        let f = &instance.functions()[name];
        if !is_pure_affine(f)? {
            return Err(refuse(name, "pure affine"));
        }
        let w = f.nonzero_values()[0].clone();
        local.insert(name, (w, affine_system_of(&f.support())?));
    }

    let mut scale = Rational::one();
    let mut system = Gf2System::new(n);
    for c in instance.constraints() {
        let (w, equations) = &local[c.function.as_str()];
        scale *= w;
        for eq in equations.rows() {
            let vars: Vec<usize> = eq.coefficients.ones().map(|i| c.scope[i]).collect();
            system.push_sparse(&vars, eq.constant);
        }
    }
    Ok(scale * from_biguint(system.count_solutions()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::library::*;
    use crate::gf2::BitRow;
    use crate::rational::int;

    fn solutions(system: &Gf2System) -> Vec<usize> {
        let k = system.num_variables();
        (0..1usize << k)
            .filter(|&x| system.is_satisfied_by(&tuple_bits(k, x)))
            .collect()
    }

    #[test]
    fn system_examples() {
        let s = affine_system_of(&parity(3).support()).unwrap();
        assert_eq!(s.rows().len(), 1);
        assert_eq!(s.rows()[0].coefficients, BitRow::from_bits(&[true, true, true]));
        assert!(s.rows()[0].constant);

        let s = affine_system_of(&equality(2).support()).unwrap();
        assert_eq!(s.rows().len(), 1);
        assert_eq!(s.rows()[0].coefficients, BitRow::from_bits(&[true, true]));
        assert!(!s.rows()[0].constant);

        assert!(affine_system_of(&Relation::complete(2, 2).unwrap()).unwrap().rows().is_empty());
        assert_eq!(count_gf2_solutions(&affine_system_of(&Relation::new(2, 2, []).unwrap()).unwrap()), BigUint::from(0u32));

        let r = Relation::from_tuples(2, &[&[0, 1], &[1, 0], &[1, 1]]).unwrap();
        assert!(matches!(affine_system_of(&r), Err(Error::Precondition(_))));
    }

    #[test]
    fn system_round_trips_every_affine_relation_of_arity_four() {
        for mask in 0u32..1 << 16 {
            let r = Relation::new(4, 2, (0..16).filter(|i| mask >> i & 1 == 1)).unwrap();
            if !is_affine_relation(&r).unwrap() {
                continue;
            }
            let s = affine_system_of(&r).unwrap();
            assert_eq!(solutions(&s), r.indices().collect::<Vec<_>>(), "mask {mask:#x}");
        }
    }

    #[test]
    fn eval_examples() {
        let mut inst = Instance::boolean(3);
        inst.define("xor3", parity(3)).unwrap();
        inst.constrain("xor3", &[0, 1, 2]).unwrap();
        assert_eq!(eval_pure_affine(&inst).unwrap(), int(4));

        let mut inst = Instance::boolean(3);
        inst.define("x", parity(3).scaled(&int(3)).unwrap()).unwrap();
        inst.constrain("x", &[0, 1, 2]).unwrap().constrain("x", &[0, 1, 2]).unwrap();
        assert_eq!(eval_pure_affine(&inst).unwrap(), int(36));

        let mut inst = Instance::boolean(2);
        inst.define("xor3", parity(3)).unwrap();
        inst.constrain("xor3", &[0, 0, 1]).unwrap();
        assert_eq!(eval_pure_affine(&inst).unwrap(), int(2));
    }

    #[test]
    fn refuses_weighted_functions() {
        let mut inst = Instance::boolean(1);
        inst.define("u", unary_weight(int(2))).unwrap();
        inst.constrain("u", &[0]).unwrap();
        assert!(matches!(eval_pure_affine(&inst), Err(Error::Precondition(_))));
    }
}
