//! Example and random curvature tensors.
//!
//! Random tensors are drawn from `ChaCha8Rng::seed_from_u64(seed)` with
//! `rand_distr::StandardNormal`, consuming samples in a fixed order, so a seed
//! reproduces the same tensor on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{CMatrix, CurvatureTensor, C64};

/// Distribution of [`random_tensor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RandomMode {
    /// Independent standard normal real and imaginary parts, then Hermitian part.
    Hermitian,
    /// `c_{jkλμ} = (V V†)_{(jλ),(kμ)}` for a standard normal complex `(nr)×(nr)` matrix `V`.
    GramPsd,
}

/// Curvature of the Fubini–Study metric on `T_{P^n}` at the center of normal
/// coordinates: `c_{jkλμ} = δ_{jk} δ_{λμ} + δ_{jμ} δ_{kλ}` (rank `r = n`).
pub fn fubini_study_tensor(n: usize) -> CurvatureTensor {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    CurvatureTensor::from_fn(n, n, |j, k, l, m| C64::new(d(j, k) * d(l, m) + d(j, m) * d(k, l), 0.0))
}

fn normal_complex(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Deterministic random tensor.
///
/// Sample order: `Hermitian` fills `(j, k, λ, μ)` row-major, real part before
/// imaginary; `GramPsd` fills `V` row-major the same way.
pub fn random_tensor(n: usize, r: usize, seed: u64, mode: RandomMode) -> CurvatureTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        RandomMode::Hermitian => {
            let mut raw = Vec::with_capacity(n * n * r * r);
            for _ in 0..n * n * r * r {
                raw.push(normal_complex(&mut rng));
            }
            let idx = |j: usize, k: usize, l: usize, m: usize| (((j - 1) * n + k - 1) * r + l - 1) * r + m - 1;
            CurvatureTensor::from_fn(n, r, |j, k, l, m| {
                (raw[idx(j, k, l, m)] + raw[idx(k, j, m, l)].conj()) * 0.5
            })
        }
        RandomMode::GramPsd => {
            let d = n * r;
            let mut entries = Vec::with_capacity(d * d);
            for _ in 0..d * d {
                entries.push(normal_complex(&mut rng));
            }
            let v = CMatrix::from_row_slice(d, d, &entries);
            let g = &v * v.adjoint();
            CurvatureTensor::from_fn(n, r, |j, k, l, m| g[((j - 1) * r + l - 1, (k - 1) * r + m - 1)])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fubini_study_n1() {
        let c = fubini_study_tensor(1);
        assert_eq!(c.get(1, 1, 1, 1), C64::new(2.0, 0.0));
    }

    #[test]
    fn random_is_deterministic_and_hermitian() {
        for mode in [RandomMode::Hermitian, RandomMode::GramPsd] {
            let a = random_tensor(3, 2, 42, mode);
            let b = random_tensor(3, 2, 42, mode);
            assert_eq!(a, b);
            assert_ne!(a, random_tensor(3, 2, 43, mode));
        }
        let h = random_tensor(3, 2, 5, RandomMode::Hermitian);
        assert_eq!(h.symmetry_defect().0, 0.0);
        let g = random_tensor(2, 3, 5, RandomMode::GramPsd);
        assert!(g.symmetry_defect().0 < 1e-14);
    }
}
