use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use u2split_core::forms::{
    anisotropic_part, equivalence_witness, form_equivalent, witt_decompose, witt_equivalent,
    witt_index, witt_index_closed_form, BilForm,
};
use u2split_core::isopair::{isometric, wall_data, Eps};
use u2split_core::linal::{
    invariant_factors, jordan_numbers, rational_canonical_form, similarity_transform,
};
use u2split_core::{sample, FieldCtx, Matrix, Poly};

fn ctx(q: u64) -> FieldCtx {
    FieldCtx::prime(q).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn charpoly_degree_sum(f: &[Poly]) -> usize {
    f.iter().map(Poly::deg).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn invariant_factors_form_a_chain(q in prop_oneof![Just(3u64), Just(5)], n in 1usize..7, seed in any::<u64>()) {
        let k = ctx(q);
        let a = sample::matrix(&mut rng(seed), k, n, n);
        let f = invariant_factors(&a).unwrap();
        prop_assert_eq!(charpoly_degree_sum(&f), n);
        for w in f.windows(2) {
            prop_assert!(w[0].divides(&w[1]));
        }
        let last = f.last().unwrap();
        prop_assert!(a.eval_poly(last).is_zero());
        prop_assert_eq!(jordan_numbers(&a).unwrap().dimension(), n);
    }

    #[test]
    fn similarity_is_detected_and_witnessed(q in prop_oneof![Just(3u64), Just(5)], n in 1usize..6, seed in any::<u64>()) {
        let k = ctx(q);
        let mut r = rng(seed);
        let a = sample::matrix(&mut r, k, n, n);
        let g = sample::invertible(&mut r, k, n);
        let b = &(&g * &a) * &g.inverse().unwrap();
        prop_assert_eq!(invariant_factors(&a).unwrap(), invariant_factors(&b).unwrap());
        let h = similarity_transform(&a, &b).unwrap();
        prop_assert_eq!(&h * &a, &b * &h);
        let rcf = rational_canonical_form(&a).unwrap();
        prop_assert_eq!(invariant_factors(&rcf).unwrap(), invariant_factors(&a).unwrap());
    }

    #[test]
    fn pullbacks_are_equivalent(q in prop_oneof![Just(3u64), Just(5), Just(7)], n in 1usize..6, seed in any::<u64>()) {
        let k = ctx(q);
        let mut r = rng(seed);
        let b = sample::regular_form(&mut r, k, Eps::Plus, n);
        let c = b.pullback(&sample::invertible(&mut r, k, n));
        prop_assert!(form_equivalent(&b, &c).unwrap());
        let p = equivalence_witness(&b, &c).unwrap().unwrap();
        prop_assert_eq!(c.pullback(&p).gram().clone(), b.gram().clone());
        prop_assert_eq!(witt_index(&b).unwrap(), witt_index_closed_form(&b).unwrap());
    }

    #[test]
    fn witt_decomposition_is_consistent(q in prop_oneof![Just(3u64), Just(5), Just(7)], n in 1usize..7, seed in any::<u64>()) {
        let k = ctx(q);
        let b = sample::regular_form(&mut rng(seed), k, Eps::Plus, n);
        let w = witt_decompose(&b).unwrap();
        let an = anisotropic_part(&b).unwrap();
        prop_assert!(an.dim() <= 2);
        prop_assert_eq!(an.dim() + 2 * witt_index(&b).unwrap(), n);
        prop_assert_eq!(w.anisotropic.dim(), an.dim());
        // b is Witt-equivalent to its anisotropic part, and b + (-b) is hyperbolic
        prop_assert!(witt_equivalent(&b, &an).unwrap());
        let zero = BilForm::zero(k, b.kind());
        prop_assert!(witt_equivalent(&b.orth_sum(&b.neg()).unwrap(), &zero).unwrap());
    }

    #[test]
    fn wall_invariants_are_basis_free(q in prop_oneof![Just(3u64), Just(5)], half in 1usize..4, plus in any::<bool>(), seed in any::<u64>()) {
        let k = ctx(q);
        let mut r = rng(seed);
        let (eps, n) = if plus { (Eps::Plus, 2 * half) } else { (Eps::Minus, 2 * half) };
        let b = sample::regular_form(&mut r, k, eps, n);
        let (p, _) = sample::splittable_pair(&mut r, &b).unwrap();
        let moved = p.change_basis(&sample::invertible(&mut r, k, n)).unwrap();
        prop_assert!(isometric(&p, &moved).unwrap());
        let (w1, w2) = (wall_data(&p).unwrap(), wall_data(&moved).unwrap());
        prop_assert_eq!(&w1.jordan, &w2.jordan);
        for (key, f) in &w1.quad {
            prop_assert!(form_equivalent(f, &w2.quad(key.0, key.1)).unwrap());
        }
        let total: usize = w1.jordan.iter().map(|(p, r, m)| p.deg() * r * m).sum();
        prop_assert_eq!(total, n);
    }
}

#[test]
fn identity_is_similar_only_to_itself() {
    let k = ctx(3);
    let i = Matrix::identity(k, 3);
    let j = Matrix::from_i64(k, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
    assert!(similarity_transform(&i, &j).is_err());
}
