use pkernel::base_field::RationalFunction;
use pkernel::campaign::{check_ann_instance, random_ann_instance, random_entry, AnnCase};
use pkernel::differential::{
    ann_bruteforce, d_of_element, subspace_equal, transversal_wedges, wedge_of_differentials, DifferentialForm,
};
use pkernel::exec::ExecMode;
use pkernel::p_linear::{p_basis_of, p_independent};
use pkernel::random::{instance_rng, random_element, random_monomial, PolyShape};
use proptest::prelude::*;
use rand::Rng;

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5])
}

const SHAPE: PolyShape = PolyShape {
    max_terms: 2,
    max_exp: 3,
};

/// A random 1-form `sum_i a_i db_i`.
fn random_one_form(rng: &mut impl Rng, p: u32, m: usize) -> DifferentialForm {
    (0..2).fold(DifferentialForm::zero(p, m, 1), |acc, _| {
        let a = random_element(rng, p, m, SHAPE);
        let b = random_element(rng, p, m, SHAPE);
        acc.add(&d_of_element(&b).scale(&a))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exterior_derivative_identities(p in prime(), m in 2usize..=3, seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let w = random_one_form(&mut rng, p, m);
        let f = random_element(&mut rng, p, m, SHAPE);
        prop_assert!(w.d().d().is_zero());
        prop_assert!(w.wedge(&w).is_zero());
        let lhs = w.scale(&f).d();
        let rhs = d_of_element(&f).wedge(&w).add(&w.d().scale(&f));
        prop_assert_eq!(lhs, rhs);
        let v = random_one_form(&mut rng, p, m);
        let minus = RationalFunction::constant(p, m, -1);
        prop_assert_eq!(w.wedge(&v), v.wedge(&w).scale(&minus));
    }

    #[test]
    fn independence_matches_wedge(p in prime(), m in 1usize..=3, size in 1usize..=3, seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let s: Vec<RationalFunction> = (0..size).map(|_| random_entry(&mut rng, p, m)).collect();
        prop_assert_eq!(p_independent(&s), !wedge_of_differentials(&s, p, m).is_zero());
    }

    #[test]
    fn adjoining_a_variable_keeps_forms_nonzero(p in prime(), m in 1usize..=3, seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let w = random_one_form(&mut rng, p, m);
        prop_assert_eq!(w.is_zero(), w.extend_vars(m + 1).is_zero());
    }

    #[test]
    fn annihilator_independent_of_chosen_p_basis(p in prime(), m in 2usize..=3, seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let sets: Vec<Vec<RationalFunction>> = (0..2)
            .map(|_| (0..2).map(|_| random_entry(&mut rng, p, m)).collect())
            .collect();
        let bases: Vec<Vec<RationalFunction>> = sets.iter().map(|s| p_basis_of(s).basis).collect();
        prop_assume!(bases.iter().all(|b| !b.is_empty()));
        // b -> u^p b + v^p spans the same F^p-algebra
        let moved: Vec<Vec<RationalFunction>> = bases
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| {
                        let u = random_monomial(&mut rng, p, m, 2).frobenius();
                        let v = random_monomial(&mut rng, p, m, 2).frobenius();
                        &(&u * x) + &v
                    })
                    .collect()
            })
            .collect();
        let n = rng.gen_range(1..=m);
        let a = ann_bruteforce(&transversal_wedges(&bases, p, m), n, p, m);
        let b = ann_bruteforce(&transversal_wedges(&moved, p, m), n, p, m);
        prop_assert!(subspace_equal(&a, &b).unwrap());
    }

    #[test]
    fn closed_annihilators_match_brute_force(case_ix in 0usize..3, p in prime(), seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let inst = random_ann_instance(AnnCase::ALL[case_ix], p, &mut rng);
        let verdict = check_ann_instance(&inst, ExecMode::Sequential);
        prop_assert!(verdict.is_ok(), "{}: {:?}", inst.describe(), verdict);
    }
}
