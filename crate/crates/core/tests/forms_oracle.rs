//! Closed-form operations on forms against the antisymmetric-tensor oracle.

use curvop::forms::{hodge_star_matrix, Factor};
use curvop::multiindex::enumerate_indices;
use curvop::oracle::{anti_gen, canonical_coefficients, form_component_tensor, holo_gen, wedge_pairing_top, AltTensor};
use curvop::verify::random_form;
use curvop::{BundleForm, Fiber, FormSpace, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spaces(max_n: usize, max_r: usize) -> Vec<FormSpace> {
    let mut v = Vec::new();
    for n in 1..=max_n {
        for r in 1..=max_r {
            for p in 0..=n {
                for q in 0..=n {
                    v.push(FormSpace::new(n, r, p, q, Fiber::Bundle).unwrap());
                }
            }
        }
    }
    v
}

fn i_pow(k: usize) -> C64 {
    [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][k % 4]
}

#[test]
fn star_satisfies_defining_identity() {
    // u ∧ ∗v = ⟨u, v⟩ dV with dV = ω^n / n! = i^{n²} dz_N ∧ dz̄_N
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for space in spaces(3, 2) {
        let n = space.n();
        for _ in 0..3 {
            let u = random_form(&mut rng, space);
            let v = random_form(&mut rng, space);
            let lhs = wedge_pairing_top(&u, &v.hodge_star()).unwrap();
            let rhs = u.inner_product(&v).unwrap() * i_pow(n * n);
            assert!((lhs - rhs).norm() < 1e-12, "{space}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn top_form_matches_power_of_kahler_form() {
    for n in 1..=3usize {
        let omega = curvop::oracle::kahler_form(n);
        let mut power = AltTensor::monomial(&[], C64::new(1.0, 0.0));
        for _ in 0..n {
            power = power.wedge(&omega);
        }
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let top: Vec<usize> = (1..=n).map(holo_gen).chain((1..=n).map(|k| anti_gen(n, k))).collect();
        let dv = power.get(&top) / fact;
        assert!((dv - i_pow(n * n)).norm() < 1e-12, "n={n}: {dv}");
    }
}

#[test]
fn star_matrix_is_unitary() {
    for space in spaces(3, 2) {
        let s = hodge_star_matrix(&space);
        let d = space.dim();
        let e = &s.adjoint() * &s - curvop::CMatrix::identity(d, d);
        assert!(e.iter().all(|z| z.norm() < 1e-14), "{space}");
    }
}

#[test]
fn interior_product_matches_tensor_contraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for space in spaces(3, 2) {
        let (n, p, q) = (space.n(), space.p(), space.q());
        let u = random_form(&mut rng, space);
        for s in 1..=n {
            for factor in [Factor::Holomorphic, Factor::Antiholomorphic] {
                let got = u.interior_product(s, factor).unwrap();
                let (gen, tp, tq) = match factor {
                    Factor::Holomorphic => (holo_gen(s), p.wrapping_sub(1), q),
                    Factor::Antiholomorphic => (anti_gen(n, s), p, q.wrapping_sub(1)),
                };
                match got {
                    None => assert!(tp > n || tq > n, "{space} s={s}"),
                    Some(w) => {
                        for lambda in 1..=space.rank() {
                            let t = form_component_tensor(&u, lambda).contract(gen);
                            let expect = canonical_coefficients(&t, n, tp, tq);
                            let actual: Vec<C64> = w
                                .coeffs()
                                .iter()
                                .skip(lambda - 1)
                                .step_by(space.rank())
                                .copied()
                                .collect();
                            for (a, b) in actual.iter().zip(&expect) {
                                assert!((a - b).norm() < 1e-14, "{space} s={s} {factor:?}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn epsilon_matches_generator_reordering() {
    // dz_s ∧ dz_{I∖s} = ε(s, I) dz_I for s ∈ I
    for n in 1..=5 {
        for d in 1..=n {
            for idx in enumerate_indices(n, d).unwrap() {
                let gens: Vec<usize> = idx.entries().iter().map(|&j| holo_gen(j)).collect();
                let full = AltTensor::monomial(&gens, C64::new(1.0, 0.0));
                for s in 1..=n {
                    let e = idx.epsilon(s).unwrap();
                    let Some(rest) = idx.without(s) else {
                        assert_eq!(e, 0);
                        continue;
                    };
                    let rest_gens: Vec<usize> = rest.entries().iter().map(|&j| holo_gen(j)).collect();
                    let prod = AltTensor::monomial(&[holo_gen(s)], C64::new(1.0, 0.0))
                        .wedge(&AltTensor::monomial(&rest_gens, C64::new(1.0, 0.0)));
                    assert_eq!(prod.get(&gens), full.get(&gens) * f64::from(e), "{idx} s={s}");
                }
            }
        }
    }
}

#[test]
fn lefschetz_matches_wedge_with_kahler_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for space in spaces(3, 1) {
        let (n, p, q) = (space.n(), space.p(), space.q());
        let u = random_form(&mut rng, space);
        let Some(lu) = u.lefschetz() else {
            assert!(p == n || q == n);
            continue;
        };
        let t = curvop::oracle::kahler_form(n).wedge(&form_component_tensor(&u, 1));
        let expect = canonical_coefficients(&t, n, p + 1, q + 1);
        for (a, b) in lu.coeffs().iter().zip(&expect) {
            assert!((a - b).norm() < 1e-13, "{space}");
        }
    }
}

fn form_strategy() -> impl Strategy<Value = (BundleForm, BundleForm, C64)> {
    (1usize..=3, 1usize..=2)
        .prop_flat_map(|(n, r)| (Just(n), Just(r), 0..=n, 0..=n))
        .prop_flat_map(|(n, r, p, q)| {
            let space = FormSpace::new(n, r, p, q, Fiber::Bundle).unwrap();
            let d = space.dim();
            let coeffs = proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d);
            (Just(space), coeffs.clone(), coeffs, (-2.0f64..2.0, -2.0f64..2.0))
        })
        .prop_map(|(space, a, b, (zr, zi))| {
            let mk = |v: Vec<(f64, f64)>| {
                BundleForm::from_coeffs(space, v.into_iter().map(|(x, y)| C64::new(x, y)).collect()).unwrap()
            };
            (mk(a), mk(b), C64::new(zr, zi))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_is_conjugate_linear((u, v, z) in form_strategy()) {
        let lhs = u.scaled(z).checked_add(&v).unwrap().hodge_star();
        let rhs = u.hodge_star().scaled(z.conj()).checked_add(&v.hodge_star()).unwrap();
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn tilde_is_isometric_and_involutive_up_to_sign((u, v, _z) in form_strategy()) {
        let (ut, vt) = (u.tilde_map(), v.tilde_map());
        let a = u.inner_product(&v).unwrap();
        let b = ut.inner_product(&vt).unwrap();
        prop_assert!((a - b).norm() < 1e-12);
        let back = ut.tilde_map();
        let ratio: Vec<C64> = back.coeffs().iter().zip(u.coeffs()).filter(|(_, y)| y.norm() > 1e-3).map(|(x, y)| x / y).collect();
        for w in ratio.windows(2) {
            prop_assert!((w[0] - w[1]).norm() < 1e-9);
        }
    }

    #[test]
    fn lambda_is_adjoint_of_lefschetz((u, v, _z) in form_strategy()) {
        // ⟨Λu, w⟩ = ⟨u, Lw⟩ with w of bidegree (p-1, q-1)
        let space = *u.space();
        if let (Some(lu), Some(below)) = (u.lambda_closed_form(), space.with_bidegree(space.p().wrapping_sub(1), space.q().wrapping_sub(1))) {
            let src = v.coeffs();
            let coeffs = (0..below.dim()).map(|i| src[i % src.len()] * (1.0 + i as f64).sqrt()).collect();
            let w = BundleForm::from_coeffs(below, coeffs).unwrap();
            let lhs = lu.inner_product(&w).unwrap();
            let rhs = u.inner_product(&w.lefschetz().unwrap()).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
