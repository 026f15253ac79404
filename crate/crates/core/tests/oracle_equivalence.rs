use curvop::cli::generators::{random_tensor, RandomMode};
use curvop::curvature::{operator_matrix, quadratic_form_complex};
use curvop::oracle::WedgeOracle;
use curvop::{BundleForm, Fiber, FormSpace, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_form_matches_wedge_oracle() {
    for n in 1..=3 {
        let oracle = WedgeOracle::new(n);
        for r in 1..=2 {
            for seed in 0..5 {
                let c = random_tensor(n, r, seed, RandomMode::Hermitian);
                for p in 0..=n {
                    for q in 0..=n {
                        let a = operator_matrix(&c, p, q).unwrap().matrix;
                        let b = oracle.commutator_matrix(&c, p, q).unwrap();
                        let res = (&a - &b).camax();
                        assert!(res <= 1e-10 * (1.0 + c.max_abs()), "n={n} r={r} ({p},{q}) res={res}");
                    }
                }
            }
        }
    }
}

#[test]
fn quadratic_form_matches_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=3 {
        for r in 1..=2 {
            let c = random_tensor(n, r, 11, RandomMode::Hermitian);
            for p in 0..=n {
                for q in 0..=n {
                    let space = FormSpace::new(n, r, p, q, Fiber::Bundle).unwrap();
                    let a = operator_matrix(&c, p, q).unwrap().matrix;
                    for _ in 0..10 {
                        let coeffs: Vec<C64> = (0..space.dim())
                            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                            .collect();
                        let u = BundleForm::from_coeffs(space, coeffs.clone()).unwrap();
                        let v = nalgebra::DVector::from_vec(coeffs);
                        let expect = v.dotc(&(&a * &v));
                        let got = quadratic_form_complex(&c, &u).unwrap();
                        assert!((got - expect).norm() <= 1e-10 * (1.0 + expect.norm()), "n={n} r={r} ({p},{q}) {got} vs {expect}");
                    }
                }
            }
        }
    }
}
