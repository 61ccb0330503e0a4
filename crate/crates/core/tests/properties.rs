use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use wcsp::classify::{is_product_type, product_type};
use wcsp::eval::{AutoEvaluator, Evaluator};
use wcsp::gen::{self, random_function, random_product_type, Profile};
use wcsp::models::{eval_graph_hom, ising_direct, Graph, TargetMatrix};
use wcsp::oracle::{brute_force_z, conditioned_z, Budget};
use wcsp::rational::{int, ratio};
use wcsp::reduce::{pin_coordinate, project, project_out};
use wcsp::{Instance, Rational, WeightFunction};

fn values() -> Vec<Rational> {
    vec![int(0), int(1), int(2), ratio(1, 3)]
}

fn profile() -> impl Strategy<Value = Profile> {
    prop::sample::select(Profile::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_bit_exact(p in profile(), n in 1usize..8, m in 0usize..10, seed: u64) {
        let inst = gen::generate(p, n, m, seed).unwrap();
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn auto_evaluator_matches_oracle(p in profile(), n in 1usize..9, m in 0usize..12, seed: u64) {
        let inst = gen::generate(p, n, m, seed).unwrap();
        let fast = AutoEvaluator::default().evaluate(&inst).unwrap();
        prop_assert_eq!(fast, brute_force_z(&inst, &Budget::default()).unwrap());
    }

    #[test]
    fn projecting_out_sums_the_pins(k in 1usize..5, seed: u64) {
        let mut rng = gen::rng(seed);
        let f = random_function(k, 2, &values(), &mut rng);
        let i = rng.gen_range(0..k);
        let summed = pin_coordinate(&f, i, 0).unwrap().pointwise_add(&pin_coordinate(&f, i, 1).unwrap()).unwrap();
        prop_assert_eq!(project_out(&f, i).unwrap(), summed.clone());
        let keep: Vec<usize> = (0..k).filter(|&j| j != i).collect();
        prop_assert_eq!(project(&f, &keep).unwrap(), summed);
    }

    #[test]
    fn conditioning_partitions_z(p in profile(), n in 1usize..7, m in 0usize..8, seed: u64) {
        let inst = gen::generate(p, n, m, seed).unwrap();
        let b = Budget::default();
        let q = inst.domain_size();
        let parts: Rational = (0..q).map(|c| conditioned_z(&inst, &[(0, c)], &b).unwrap()).sum();
        prop_assert_eq!(parts, brute_force_z(&inst, &b).unwrap());
    }

    #[test]
    fn product_type_is_closed_under_pinning(k in 1usize..5, seed: u64) {
        let mut rng = gen::rng(seed);
        let f = random_product_type(k, &mut rng);
        let w = product_type(&f).unwrap().expect("generated product type");
        prop_assert_eq!(w.reconstruct(), f.clone());
        let i = rng.gen_range(0..k);
        prop_assert!(is_product_type(&pin_coordinate(&f, i, rng.gen_range(0..2)).unwrap()).unwrap());
    }

    #[test]
    fn hom_count_is_relabel_invariant(n in 1usize..7, seed: u64) {
        let mut rng = gen::rng(seed);
        let g = Graph::random_connected(n, 0.4, &mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let h = TargetMatrix::from_ints(&[&[1, 2, 0], &[2, 0, 1], &[0, 1, 3]]).unwrap();
        let b = Budget::default();
        prop_assert_eq!(
            eval_graph_hom(&h, &g, &b).unwrap(),
            eval_graph_hom(&h, &g.relabel(&perm).unwrap(), &b).unwrap()
        );
    }

    #[test]
    fn ising_encoding_matches_cut_count(n in 1usize..8, num in 0i64..5, den in 1i64..4, seed: u64) {
        let mut rng = gen::rng(seed);
        let g = Graph::random_connected(n, 0.5, &mut rng);
        let lambda = ratio(num, den);
        let b = Budget::default();
        prop_assert_eq!(
            eval_graph_hom(&TargetMatrix::ising(&lambda), &g, &b).unwrap(),
            ising_direct(&g, &lambda, &b).unwrap()
        );
    }

    #[test]
    fn scaling_a_function_scales_z(seed: u64, n in 1usize..6) {
        let mut rng = gen::rng(seed);
        let f = random_function(2, 2, &values(), &mut rng);
        let mut a = Instance::boolean(n);
        a.define("f", f.clone()).unwrap();
        let mut uses = 0;
        for _ in 0..rng.gen_range(1..5) {
            a.constrain("f", &[rng.gen_range(0..n), rng.gen_range(0..n)]).unwrap();
            uses += 1;
        }
        let scaled = Instance::from_parts(
            2,
            n,
            [("f".to_string(), f.scaled(&int(3)).unwrap())].into_iter().collect(),
            a.constraints().to_vec(),
        ).unwrap();
        let b = Budget::default();
        prop_assert_eq!(
            brute_force_z(&scaled, &b).unwrap(),
            brute_force_z(&a, &b).unwrap() * int(3).pow(uses)
        );
    }
}

#[test]
fn zero_table_is_product_type_not_pure_affine() {
    let zero = WeightFunction::from_ints(2, &[0, 0, 0, 0]).unwrap();
    assert!(is_product_type(&zero).unwrap());
    assert!(!wcsp::classify::is_pure_affine(&zero).unwrap());
}
