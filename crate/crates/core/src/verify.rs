//! Seeded property suite comparing independent routes through the algebra.
//!
//! Every property is deterministic in `(n, r, trials, seed)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cli::generators::{random_tensor, RandomMode};
use crate::curvature::{apply_operator, nakano_matrix, operator_matrix, operator_matrix_on, quadratic_form_complex};
use crate::forms::{hodge_star_matrix, lambda_closed_form_matrix, lefschetz_closed_form_matrix};
use crate::oracle::WedgeOracle;
use crate::positivity::{
    classify, hermitian_spectrum, negated_spectrum, spectral_gap, star_intertwining_residual, theorem_chain_report,
    PositivityClass,
};
use crate::{BundleForm, CMatrix, CurvatureTensor, Fiber, FormSpace, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub r: usize,
    /// Random tensors per property.
    pub trials: usize,
    /// Random forms per tensor and bidegree, where a property samples forms.
    pub samples: usize,
    pub seed: u64,
    /// Classification tolerance for the chain and closure properties.
    pub tol: f64,
}

impl SuiteConfig {
    pub fn new(n: usize, r: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            r,
            trials,
            samples: 4,
            seed,
            tol: crate::positivity::DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    /// Largest normalized residual seen.
    pub worst: f64,
    pub threshold: f64,
    pub cases: usize,
    pub detail: String,
}

impl PropertyResult {
    fn new(name: &str, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: true,
            worst: 0.0,
            threshold,
            cases: 0,
            detail: String::new(),
        }
    }

    fn record(&mut self, value: f64, context: impl FnOnce() -> String) {
        self.cases += 1;
        if value > self.worst || value.is_nan() {
            self.worst = value;
            if value.is_nan() || value > self.threshold {
                self.passed = false;
                self.detail = context();
            }
        }
    }

    fn fail(&mut self, value: f64, detail: String) {
        self.cases += 1;
        self.passed = false;
        self.worst = self.worst.max(value);
        self.detail = detail;
    }

    /// Combines results of the same property over several cells.
    pub fn merge(&mut self, other: &Self) {
        self.cases += other.cases;
        if other.worst > self.worst {
            self.worst = other.worst;
        }
        if !other.passed && self.passed {
            self.detail = other.detail.clone();
        }
        self.passed &= other.passed;
    }
}

/// Seed of the `t`-th tensor of a stream.
pub fn trial_seed(seed: u64, stream: u64, t: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(t as u64)
}

fn form_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, stream, usize::MAX >> 1))
}

/// Form with independent uniform `[-1, 1)` real and imaginary parts.
pub fn random_form(rng: &mut impl Rng, space: FormSpace) -> BundleForm {
    let coeffs = (0..space.dim())
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    BundleForm::from_coeffs(space, coeffs).expect("length matches")
}

fn bidegrees(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(move |p| (0..=n).map(move |q| (p, q)))
}

fn max_abs(m: &CMatrix) -> f64 {
    if m.is_empty() {
        0.0
    } else {
        m.camax()
    }
}

fn tensors(cfg: &SuiteConfig, stream: u64, mode: RandomMode) -> impl Iterator<Item = (usize, CurvatureTensor)> + '_ {
    (0..cfg.trials).map(move |t| (t, random_tensor(cfg.n, cfg.r, trial_seed(cfg.seed, stream, t), mode)))
}

/// Closed-form `A^{p,q}` against the wedge-product commutator; residual scaled by `1 + max|c|`.
pub fn oracle_equivalence(cfg: &SuiteConfig, threshold: f64) -> Result<PropertyResult> {
    let mut res = PropertyResult::new("oracle_equivalence", threshold);
    let oracle = WedgeOracle::new(cfg.n);
    for (t, c) in tensors(cfg, 1, RandomMode::Hermitian) {
        for (p, q) in bidegrees(cfg.n) {
            let a = operator_matrix(&c, p, q)?.matrix;
            let b = oracle.commutator_matrix(&c, p, q)?;
            let v = max_abs(&(a - b)) / (1.0 + c.max_abs());
            res.record(v, || format!("trial {t}, (p,q) = ({p},{q})"));
        }
    }
    Ok(res)
}

/// Direct slot-pair quadratic form against `⟨A u, u⟩`, on a fresh tensor per sample.
/// Relative real error and absolute imaginary part are checked separately.
pub fn quadratic_form_cross_check(cfg: &SuiteConfig, threshold: f64, imag_threshold: f64) -> Result<PropertyResult> {
    let mut res = PropertyResult::new("quadratic_form", threshold);
    let mut rng = form_rng(cfg.seed, 2);
    for (p, q) in bidegrees(cfg.n) {
        let space = FormSpace::new(cfg.n, cfg.r, p, q, Fiber::Bundle)?;
        for t in 0..cfg.trials {
            let c = random_tensor(cfg.n, cfg.r, trial_seed(cfg.seed, 2, t), RandomMode::Hermitian);
            let u = random_form(&mut rng, space);
            let direct = quadratic_form_complex(&c, &u)?;
            let via = apply_operator(&c, &u)?.inner_product(&u)?;
            let rel = (direct.re - via.re).abs() / (1.0 + via.re.abs());
            res.record(rel, || format!("({p},{q}) trial {t}: {direct} vs {via}"));
            if direct.im.abs() > imag_threshold {
                res.fail(direct.im.abs(), format!("({p},{q}) trial {t}: imaginary part {:e}", direct.im));
            }
        }
    }
    Ok(res)
}

/// `spec A^{n-q,n-p} = -spec A^{p,q}` and `⟨A^{p,q}u,u⟩ = -⟨A^{n-q,n-p}ũ,ũ⟩`.
pub fn spectral_negation(cfg: &SuiteConfig, spectral_tol: f64, form_tol: f64) -> Result<PropertyResult> {
    let mut res = PropertyResult::new("spectral_negation", spectral_tol);
    let mut rng = form_rng(cfg.seed, 3);
    let n = cfg.n;
    for (t, c) in tensors(cfg, 3, RandomMode::Hermitian) {
        for (p, q) in bidegrees(n) {
            let a = hermitian_spectrum(&operator_matrix(&c, p, q)?.matrix)?;
            let b = hermitian_spectrum(&operator_matrix(&c, n - q, n - p)?.matrix)?;
            let gap = spectral_gap(&a, &negated_spectrum(&b));
            res.record(gap, || format!("trial {t}, (p,q) = ({p},{q}): spectral gap"));
            let space = FormSpace::new(n, cfg.r, p, q, Fiber::Bundle)?;
            for _ in 0..cfg.samples {
                let u = random_form(&mut rng, space);
                let lhs = apply_operator(&c, &u)?.inner_product(&u)?.re;
                let ut = u.tilde_map();
                let rhs = -apply_operator(&c, &ut)?.inner_product(&ut)?.re;
                let rel = (lhs - rhs).abs() / (1.0 + lhs.abs());
                if rel > form_tol {
                    res.fail(rel, format!("trial {t}, (p,q) = ({p},{q}): {lhs} vs {rhs}"));
                }
            }
        }
    }
    Ok(res)
}

/// `S·conj(A^{p,q}) = A^{n-p,n-q}_{E*}·S`, equal spectra, and the inverse pairing
/// `⟨A^{-1}u,u⟩ = ⟨B^{-1}∗u,∗u⟩` wherever `min |eig| > 1e-6`, relative to `‖A^{-1}‖·|u|²`.
pub fn star_duality(cfg: &SuiteConfig, matrix_tol: f64, spectral_tol: f64, inverse_tol: f64) -> Result<PropertyResult> {
    let mut res = PropertyResult::new("star_duality", matrix_tol);
    let mut rng = form_rng(cfg.seed, 4);
    let n = cfg.n;
    let mut inverse_cases = 0usize;
    for (t, c) in tensors(cfg, 4, RandomMode::Hermitian) {
        let dual = c.dual();
        for (p, q) in bidegrees(n) {
            let r = star_intertwining_residual(&c, p, q)?;
            res.record(r, || format!("trial {t}, (p,q) = ({p},{q}): intertwining"));
            let space = FormSpace::new(n, cfg.r, p, q, Fiber::Bundle)?;
            let target = FormSpace::new(n, cfg.r, n - p, n - q, Fiber::Dual)?;
            let a = operator_matrix_on(&c, &space)?.matrix;
            let b = operator_matrix_on(&dual, &target)?.matrix;
            let sa = hermitian_spectrum(&a)?;
            let sb = hermitian_spectrum(&b)?;
            let gap = spectral_gap(&sa, &sb);
            if gap > spectral_tol {
                res.fail(gap, format!("trial {t}, (p,q) = ({p},{q}): spectral gap {gap:e}"));
            }
            if sa.iter().all(|x| x.abs() > 1e-6) {
                inverse_cases += 1;
                let ai = a.clone().try_inverse().expect("nonsingular");
                let bi = b.clone().try_inverse().expect("nonsingular");
                let s = hodge_star_matrix(&space);
                // ‖A^{-1}‖ in the spectral norm
                let inv_norm = sa.iter().fold(0.0_f64, |m, x| m.max(1.0 / x.abs()));
                for _ in 0..cfg.samples {
                    let u = random_form(&mut rng, space);
                    let v = nalgebra::DVector::from_column_slice(u.coeffs());
                    let sv = &s * v.map(|z| z.conj());
                    let lhs = v.dotc(&(&ai * &v)).re;
                    let rhs = sv.dotc(&(&bi * &sv)).re;
                    let scale = v.norm_squared() * inv_norm;
                    let rel = (lhs - rhs).abs() / scale;
                    if rel > inverse_tol {
                        res.fail(rel, format!("trial {t}, (p,q) = ({p},{q}): inverse pairing {lhs} vs {rhs}"));
                    }
                }
            }
        }
    }
    res.detail = if res.passed {
        format!("{inverse_cases} invertible cells checked for the inverse pairing")
    } else {
        res.detail
    };
    Ok(res)
}

/// `∗_{E*} ∘ ∗_E = (-1)^{p+q}` on every bidegree; depends only on `n` and `r`.
pub fn star_involution(n: usize, r: usize, threshold: f64) -> Result<PropertyResult> {
    let mut res = PropertyResult::new("star_involution", threshold);
    for (p, q) in bidegrees(n) {
        let space = FormSpace::new(n, r, p, q, Fiber::Bundle)?;
        let back = FormSpace::new(n, r, n - p, n - q, Fiber::Dual)?;
        let s1 = hodge_star_matrix(&space);
        let s2 = hodge_star_matrix(&back);
        let sign = if (p + q) % 2 == 0 { 1.0 } else { -1.0 };
        let id = CMatrix::identity(space.dim(), space.dim()) * C64::new(sign, 0.0);
        let m = s2 * s1.map(|z| z.conj()) - id;
        res.record(max_abs(&m), || format!("(p,q) = ({p},{q})"));
    }
    Ok(res)
}

/// `A^{n,1}` equals the Nakano matrix entrywise.
pub fn nakano_identification(cfg: &SuiteConfig, threshold: f64) -> Result<PropertyResult> {
    let mut res = PropertyResult::new("nakano_identification", threshold);
    for (t, c) in tensors(cfg, 6, RandomMode::Hermitian) {
        let a = operator_matrix(&c, cfg.n, 1)?.matrix;
        let v = max_abs(&(a - nakano_matrix(&c)));
        res.record(v, || format!("trial {t}"));
    }
    Ok(res)
}

/// The five-member chain agrees with the Nakano class; gaps up to `10·tol` are tolerated.
pub fn chain_consistency(cfg: &SuiteConfig) -> Result<PropertyResult> {
    let mut res = PropertyResult::new("chain_consistency", 10.0 * cfg.tol);
    for (t, c) in tensors(cfg, 7, RandomMode::Hermitian) {
        let report = theorem_chain_report(&c, cfg.tol)?;
        let worst_gap = report.chain.iter().fold(0.0_f64, |a, m| a.max(m.gap));
        res.cases += 1;
        res.worst = res.worst.max(worst_gap);
        if let Some(v) = report.violations.first() {
            res.fail(v.witness, format!("trial {t}: {} ({}), gap {:e}", v.label, v.detail, v.witness));
        }
    }
    Ok(res)
}

/// Closed-form Λ against the adjoint of closed-form `L` and the oracle Λ, and
/// `[L, Λ] = (p + q - n)` on scalar forms.
pub fn lambda_consistency(n: usize, r: usize, threshold: f64) -> Result<PropertyResult> {
    let mut res = PropertyResult::new("lambda_consistency", threshold);
    let oracle = WedgeOracle::new(n);
    for (p, q) in bidegrees(n) {
        let space = FormSpace::new(n, r, p, q, Fiber::Bundle)?;
        if let Some(lam) = lambda_closed_form_matrix(&space) {
            let below = space.with_bidegree(p - 1, q - 1).expect("p, q >= 1");
            let l = lefschetz_closed_form_matrix(&below).expect("p, q <= n");
            res.record(max_abs(&(&lam - l.adjoint())), || format!("(p,q) = ({p},{q}): Λ vs L†"));
            let o = oracle.lambda_matrix(r, p as isize, q as isize).matrix;
            res.record(max_abs(&(&lam - o)), || format!("(p,q) = ({p},{q}): Λ vs oracle"));
        }
        let scalar = FormSpace::new(n, 1, p, q, Fiber::Bundle)?;
        let d = scalar.dim();
        let down_up = match lambda_closed_form_matrix(&scalar) {
            Some(lam) => {
                let below = scalar.with_bidegree(p - 1, q - 1).expect("p, q >= 1");
                lefschetz_closed_form_matrix(&below).expect("p, q <= n") * lam
            }
            None => CMatrix::zeros(d, d),
        };
        let up_down = match lefschetz_closed_form_matrix(&scalar) {
            Some(l) => {
                let above = scalar.with_bidegree(p + 1, q + 1).expect("p, q < n");
                lambda_closed_form_matrix(&above).expect("p, q >= 1") * l
            }
            None => CMatrix::zeros(d, d),
        };
        let k = p as f64 + q as f64 - n as f64;
        let m = down_up - up_down - CMatrix::identity(d, d) * C64::new(k, 0.0);
        res.record(max_abs(&m), || format!("(p,q) = ({p},{q}): [L,Λ]"));
    }
    Ok(res)
}

/// Gram tensors `V V†` are Nakano positive or semi-positive.
pub fn gram_closure(cfg: &SuiteConfig) -> Result<PropertyResult> {
    let mut res = PropertyResult::new("gram_closure", cfg.tol);
    for (t, c) in tensors(cfg, 10, RandomMode::GramPsd) {
        let spec = hermitian_spectrum(&nakano_matrix(&c))?;
        let class = classify(&spec, cfg.tol);
        res.cases += 1;
        let scale = spec.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
        res.worst = res.worst.max((-spec[0] / scale).max(0.0));
        if !matches!(class, PositivityClass::Positive | PositivityClass::SemiPositive) {
            res.fail(-spec[0], format!("trial {t}: class {class}, min eig {:e}", spec[0]));
        }
    }
    Ok(res)
}

/// Every property at the default thresholds.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<PropertyResult>> {
    Ok(vec![
        oracle_equivalence(cfg, 1e-10)?,
        quadratic_form_cross_check(cfg, 1e-10, 1e-12)?,
        spectral_negation(cfg, 1e-9, 1e-10)?,
        star_duality(cfg, 1e-10, 1e-9, 1e-8)?,
        star_involution(cfg.n, cfg.r, 1e-12)?,
        nakano_identification(cfg, 1e-13)?,
        chain_consistency(cfg)?,
        lambda_consistency(cfg.n, cfg.r, 1e-12)?,
        gram_closure(cfg)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_small() {
        for n in 1..=2 {
            for r in 1..=2 {
                let cfg = SuiteConfig::new(n, r, 3, 7);
                for p in run_suite(&cfg).unwrap() {
                    assert!(p.passed, "n={n} r={r}: {p:?}");
                    assert!(p.cases > 0);
                }
            }
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let cfg = SuiteConfig::new(2, 2, 2, 11);
        assert_eq!(run_suite(&cfg).unwrap(), run_suite(&cfg).unwrap());
    }

    #[test]
    fn failing_residual_is_reported() {
        let mut p = PropertyResult::new("x", 1e-3);
        p.record(1e-4, || "ok".into());
        assert!(p.passed);
        p.record(1.0, || "bad case".into());
        assert!(!p.passed);
        assert_eq!(p.detail, "bad case");
        assert_eq!(p.worst, 1.0);
        p.record(f64::NAN, || "nan".into());
        assert!(!p.passed);
    }
}
