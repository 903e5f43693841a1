use nctori::exactmat::{int, rat, skew_congruence_factor, standard_symplectic};
use nctori::grassmann::{intertwiner, projective_act, subset_of, theta_hat};
use nctori::group::{membership, mu, nu, random_unimodular, random_word, rho, sigma};
use nctori::heisenberg::{build_embedding, T32Mode};
use nctori::ktheory::{
    det3, induced_k_action, morita_trace_check, sub_pfaffians, trace_pairing, wedge_square_i64,
    KLatticeElement, Parity,
};
use nctori::torus_rep::{build_rep, u_elem, PhasePermMatrix, RationalTheta};
use nctori::{GroupElement, RatMatrix, Rational, SkewMatrix};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn skew_from(n: usize, nums: &[(i64, i64)]) -> SkewMatrix {
    let up: Vec<Rational> = nums
        .iter()
        .take(n * (n - 1) / 2)
        .map(|&(p, q)| rat(p, q))
        .collect();
    SkewMatrix::from_upper(n, &up).unwrap()
}

fn rational_skew(n: usize) -> impl Strategy<Value = SkewMatrix> {
    prop::collection::vec((-9i64..=9, 1i64..=9), n * (n - 1) / 2)
        .prop_map(move |v| skew_from(n, &v))
}

fn int_skew(n: usize, bound: i64) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-bound..=bound, n * (n - 1) / 2).prop_map(move |v| {
        let up: Vec<Rational> = v.into_iter().map(int).collect();
        SkewMatrix::from_upper(n, &up).unwrap().into_inner()
    })
}

fn int_matrix(n: usize, bound: i64) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-bound..=bound, n * n)
        .prop_map(move |v| RatMatrix::from_ints(n, n, &v))
}

fn unimodular(n: usize, seed: u64) -> RatMatrix {
    random_unimodular(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn word_element(n: usize, seed: u64, max_len: usize) -> GroupElement {
    random_word(&mut ChaCha8Rng::seed_from_u64(seed), n, max_len)
        .evaluate(n)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pfaffian_squares_to_determinant(theta in (1usize..=3).prop_flat_map(|h| rational_skew(2 * h))) {
        let pf = theta.pfaffian().unwrap();
        prop_assert_eq!(&pf * &pf, theta.inner().determinant().unwrap());
    }

    #[test]
    fn pfaffian_congruence(theta in rational_skew(4), r in int_matrix(4, 3)) {
        let moved = SkewMatrix::new(&(&r.transpose() * theta.inner()) * &r).unwrap();
        prop_assert_eq!(
            moved.pfaffian().unwrap(),
            r.determinant().unwrap() * theta.pfaffian().unwrap()
        );
    }

    #[test]
    fn inverse_is_two_sided(a in int_matrix(4, 5)) {
        match a.invert() {
            Ok(inv) => {
                prop_assert!((&a * &inv).is_identity());
                prop_assert!((&inv * &a).is_identity());
            }
            Err(_) => prop_assert!(a.determinant().unwrap().is_zero()),
        }
    }

    #[test]
    fn congruence_factor(theta in rational_skew(4)) {
        prop_assume!(!theta.pfaffian().unwrap().is_zero());
        let t = skew_congruence_factor(&theta).unwrap();
        prop_assert_eq!(&(&t.transpose() * &standard_symplectic(2)) * &t, -theta.inner());
    }

    #[test]
    fn generators_are_special(n in 2usize..=4, s1 in any::<u64>(), nm in int_skew(4, 3)) {
        let nm = nm.block(0, 0, n, n);
        for g in [rho(&unimodular(n, s1)).unwrap(), nu(&nm).unwrap(), mu(&nm).unwrap(), sigma(2, n).unwrap()] {
            let rep = membership(g.matrix()).unwrap();
            prop_assert!(rep.in_so_nn_z, "{:?}", rep);
        }
    }

    #[test]
    fn generator_homomorphisms(s1 in any::<u64>(), s2 in any::<u64>(), n1 in int_skew(3, 3), n2 in int_skew(3, 3)) {
        let (r1, r2) = (unimodular(3, s1), unimodular(3, s2));
        prop_assert_eq!(rho(&(&r1 * &r2)).unwrap(), rho(&r1).unwrap().compose(&rho(&r2).unwrap()).unwrap());
        let sum = &n1 + &n2;
        prop_assert_eq!(nu(&sum).unwrap(), nu(&n1).unwrap().compose(&nu(&n2).unwrap()).unwrap());
        prop_assert_eq!(mu(&sum).unwrap(), mu(&n1).unwrap().compose(&mu(&n2).unwrap()).unwrap());
    }

    #[test]
    fn sigma_conjugates_nu_to_mu(n in 2usize..=4, v in -3i64..=3) {
        let mut nm = RatMatrix::zeros(n, n);
        nm[(0, 1)] = int(v);
        nm[(1, 0)] = int(-v);
        let s = sigma(2, n).unwrap();
        let conj = s.compose(&nu(&nm).unwrap()).unwrap().compose(&s.inverse()).unwrap();
        prop_assert_eq!(conj, mu(&nm).unwrap());
    }

    #[test]
    fn action_law(theta in rational_skew(3), s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = word_element(3, s1, 3);
        let h = word_element(3, s2, 3);
        let gh = g.compose(&h).unwrap();
        if let (Ok(ht), Ok(ght)) = (h.act(&theta), gh.act(&theta)) {
            if let Ok(g_ht) = g.act(&ht) {
                prop_assert_eq!(g_ht, ght);
            }
        }
    }

    #[test]
    fn embedding_identities(theta in rational_skew(5), upper in any::<bool>()) {
        prop_assume!(!theta.leading_block(2).pfaffian().unwrap().is_zero());
        let mode = if upper { T32Mode::Upper } else { T32Mode::Half };
        let e = build_embedding(&theta, 1, mode).unwrap();
        prop_assert_eq!(&(&e.t.transpose() * &e.j) * &e.t, -theta.inner());
        prop_assert_eq!(&(&e.s.transpose() * &e.j) * &e.s, e.sigma_theta.inner().clone());
        prop_assert_eq!(e.sigma_theta, sigma(2, 5).unwrap().act(&theta).unwrap());
    }

    #[test]
    fn theta_hat_coefficients_are_sub_pfaffians(theta in (2usize..=6).prop_flat_map(rational_skew)) {
        let h = theta_hat(&theta);
        for (mask, pf) in sub_pfaffians(&theta) {
            prop_assert_eq!(h.coeff(mask), &pf);
        }
        for mask in 0..1usize << theta.n() {
            if mask.count_ones() % 2 == 1 {
                prop_assert!(h.coeff(mask).is_zero());
            }
        }
    }

    #[test]
    fn trace_pairing_matches_coefficients(theta in rational_skew(4), coords in prop::collection::vec(-5i64..=5, 8)) {
        let even: Vec<usize> = (0..16usize).filter(|m| m.count_ones() % 2 == 0).collect();
        let terms: Vec<_> = even.iter().zip(&coords).map(|(&m, &c)| (m, c.into())).collect();
        let x = KLatticeElement::from_terms(4, Parity::Even, &terms).unwrap();
        let expected: Rational = even
            .iter()
            .zip(&coords)
            .map(|(&m, &c)| {
                let idx: Vec<usize> = subset_of(m).into_iter().map(|s| s - 1).collect();
                theta.restrict(&idx).pfaffian().unwrap() * int(c)
            })
            .sum();
        prop_assert_eq!(trace_pairing(&theta, &x).unwrap(), expected);
    }

    #[test]
    fn wedge_square_determinant(a in prop::array::uniform3(prop::array::uniform3(-5i64..=5))) {
        let d = det3(&a);
        prop_assert_eq!(det3(&wedge_square_i64(&a)), d * d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn projective_action_matches_action(theta in rational_skew(3), seed in any::<u64>()) {
        let g = word_element(3, seed, 3);
        let it = intertwiner(&g).unwrap();
        prop_assert_eq!(it.kernel_dim, 1);
        match g.act(&theta) {
            Ok(expected) => prop_assert_eq!(projective_act(&g, &theta).unwrap().theta_prime, expected),
            Err(_) => prop_assert!(projective_act(&g, &theta).is_err()),
        }
    }

    #[test]
    fn k_action_is_projective_homomorphism(s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = word_element(3, s1, 3);
        let h = word_element(3, s2, 3);
        let kg = induced_k_action(&g).unwrap().matrix;
        let kh = induced_k_action(&h).unwrap().matrix;
        let kgh = induced_k_action(&g.compose(&h).unwrap()).unwrap().matrix;
        let prod = &kg * &kh;
        prop_assert!(prod == kgh || prod == -&kgh);
    }

    #[test]
    fn trace_ratio_composes(theta in rational_skew(3), s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = word_element(3, s1, 2);
        let h = word_element(3, s2, 2);
        let gh = g.compose(&h).unwrap();
        if let (Ok(first), Ok(total)) = (morita_trace_check(&theta, &h), morita_trace_check(&theta, &gh)) {
            if let Ok(second) = morita_trace_check(&first.theta_prime, &g) {
                prop_assert_eq!(first.c * second.c, total.c);
            }
        }
    }

    #[test]
    fn trace_range_fixed_by_unimodular_part(theta in rational_skew(3), seed in any::<u64>(), nm in int_skew(3, 2)) {
        for g in [rho(&unimodular(3, seed)).unwrap(), nu(&nm).unwrap()] {
            prop_assert!(morita_trace_check(&theta, &g).unwrap().c.is_one());
        }
    }

    #[test]
    fn phase_perm_closure_and_cocycle(
        q in 1i64..=6,
        up in prop::collection::vec(-3i64..=3, 3),
        x in prop::collection::vec(-4i64..=4, 3),
        y in prop::collection::vec(-4i64..=4, 3),
    ) {
        let p = SkewMatrix::from_upper(3, &up.iter().map(|&v| int(v)).collect::<Vec<_>>()).unwrap();
        let rep = build_rep(&RationalTheta::new(p.inner(), q).unwrap()).unwrap();
        let (ux, uy) = (u_elem(&rep, &x).unwrap(), u_elem(&rep, &y).unwrap());
        let prod = ux.compose(&uy);
        let inv = ux.inverse();
        for m in [&prod, &inv] {
            prop_assert!(PhasePermMatrix::new(m.perm().to_vec(), m.phase_exp().to_vec(), m.modulus()).is_ok());
        }
        prop_assert!(ux.compose(&inv).is_identity());
        let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        prop_assert_eq!(prod.scalar_ratio(&u_elem(&rep, &sum).unwrap()), Some(rep.gamma_exp(&x, &y)));
    }
}
