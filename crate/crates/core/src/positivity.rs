//! Spectral classification of curvature operators, and the duality chain
//! relating Nakano positivity of `E` to the operators on `E`- and `E*`-valued forms.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curvature::{nakano_matrix, operator_matrix, operator_matrix_on};
use crate::forms::{hodge_star_matrix, tilde_matrix};
use crate::{CMatrix, CurvatureTensor, Error, Fiber, FormSpace, Result, C64};

/// Default eigenvalue tolerance, relative to `max(1, max|λ|)`.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Allowed Hermitian defect of a matrix handed to [`hermitian_spectrum`], relative to `1 + max|a|`.
pub const HERMITIAN_MATRIX_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityClass {
    Positive,
    SemiPositive,
    Negative,
    SemiNegative,
    Indefinite,
    Zero,
}

impl PositivityClass {
    /// Class of `-A` given the class of `A`.
    pub fn negated(self) -> Self {
        match self {
            Self::Positive => Self::Negative,
            Self::SemiPositive => Self::SemiNegative,
            Self::Negative => Self::Positive,
            Self::SemiNegative => Self::SemiPositive,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Positive => "positive",
            Self::SemiPositive => "semi_positive",
            Self::Negative => "negative",
            Self::SemiNegative => "semi_negative",
            Self::Indefinite => "indefinite",
            Self::Zero => "zero",
        }
    }
}

impl fmt::Display for PositivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub label: String,
    pub spectrum: Vec<f64>,
    pub class: PositivityClass,
    pub tol: f64,
}

impl PositivityReport {
    pub fn from_matrix(label: impl Into<String>, m: &CMatrix, tol: f64) -> Result<Self> {
        let spectrum = hermitian_spectrum(m)?;
        let class = classify(&spectrum, tol);
        Ok(Self {
            label: label.into(),
            spectrum,
            class,
            tol,
        })
    }
}

/// Largest entry of `A - A†`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    (m - m.adjoint()).camax()
}

/// Ascending eigenvalues of a Hermitian matrix.
///
/// Fails if the defect exceeds [`HERMITIAN_MATRIX_TOL`]`·(1 + max|a|)`;
/// otherwise the Hermitian part is diagonalized.
pub fn hermitian_spectrum(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Invalid(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let defect = hermitian_defect(m);
    let bound = HERMITIAN_MATRIX_TOL * (1.0 + m.camax());
    if defect > bound {
        return Err(Error::NonHermitianMatrix { defect, bound });
    }
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Sign class of a real spectrum; thresholds scale with `max(1, max|λ|)`.
/// An empty spectrum is `Zero`.
pub fn classify(spectrum: &[f64], tol: f64) -> PositivityClass {
    let scale = spectrum.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
    let t = tol * scale;
    let min = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
    let max = spectrum.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if spectrum.iter().all(|x| x.abs() <= t) {
        PositivityClass::Zero
    } else if min > t {
        PositivityClass::Positive
    } else if max < -t {
        PositivityClass::Negative
    } else if min >= -t {
        PositivityClass::SemiPositive
    } else if max <= t {
        PositivityClass::SemiNegative
    } else {
        PositivityClass::Indefinite
    }
}

/// Nakano class of `E`.
pub fn nakano_class(c: &CurvatureTensor, tol: f64) -> Result<PositivityReport> {
    c.validate(crate::curvature::DEFAULT_SYMMETRY_TOL, Default::default())?;
    PositivityReport::from_matrix("nakano(E)", &nakano_matrix(c), tol)
}

/// Dual Nakano class of `E`: the negation of the Nakano class of `E*` with the
/// curvature `c*` of the dual metric.
pub fn dual_nakano_class(c: &CurvatureTensor, tol: f64) -> Result<PositivityReport> {
    c.validate(crate::curvature::DEFAULT_SYMMETRY_TOL, Default::default())?;
    let spec = hermitian_spectrum(&nakano_matrix(&c.dual()))?;
    let class = classify(&spec, tol).negated();
    let mut spectrum: Vec<f64> = spec.iter().map(|x| -x).collect();
    spectrum.sort_by(f64::total_cmp);
    Ok(PositivityReport {
        label: "dual_nakano(E) = -nakano(E*)".into(),
        spectrum,
        class,
        tol,
    })
}

/// Result of [`griffiths_min`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GriffithsEstimate {
    pub value: f64,
    pub xi: Vec<C64>,
    pub s: Vec<C64>,
}

fn griffiths_value(c: &CurvatureTensor, xi: &[C64], s: &[C64]) -> f64 {
    let (n, r) = (c.n(), c.rank());
    let mut acc = C64::new(0.0, 0.0);
    for j in 1..=n {
        for k in 1..=n {
            for l in 1..=r {
                for m in 1..=r {
                    acc += c.get(j, k, l, m) * xi[j - 1] * xi[k - 1].conj() * s[l - 1] * s[m - 1].conj();
                }
            }
        }
    }
    acc.re
}

fn lowest_eigvec(m: &CMatrix) -> Vec<C64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    eig.eigenvectors.column(idx).iter().copied().collect()
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..d)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        let mut e = vec![C64::new(0.0, 0.0); d];
        e[0] = C64::new(1.0, 0.0);
        return e;
    }
    v.into_iter().map(|z| z / norm).collect()
}

/// Heuristic minimum of `θ(ξ⊗s, ξ⊗s)` over unit `ξ ∈ C^n`, `s ∈ C^r`.
///
/// Alternating minimization from `restarts` random starts of `iters` sweeps
/// each; every sweep solves exactly for one factor with the other fixed.
/// The result is an upper bound on the true minimum and may miss it.
pub fn griffiths_min(c: &CurvatureTensor, restarts: usize, iters: usize, seed: u64) -> GriffithsEstimate {
    let (n, r) = (c.n(), c.rank());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<GriffithsEstimate> = None;
    for _ in 0..restarts.max(1) {
        let mut xi = random_unit(&mut rng, n);
        let mut s = random_unit(&mut rng, r);
        for _ in 0..iters {
            // with s fixed: θ = Σ_{jk} C_{jk} ξ_j conj(ξ_k) = ⟨Cᵀ ξ, ξ⟩
            let cs = CMatrix::from_fn(n, n, |a, b| {
                let (j, k) = (b + 1, a + 1);
                let mut z = C64::new(0.0, 0.0);
                for l in 1..=r {
                    for m in 1..=r {
                        z += c.get(j, k, l, m) * s[l - 1] * s[m - 1].conj();
                    }
                }
                z
            });
            xi = lowest_eigvec(&cs);
            let cx = CMatrix::from_fn(r, r, |a, b| {
                let (l, m) = (b + 1, a + 1);
                let mut z = C64::new(0.0, 0.0);
                for j in 1..=n {
                    for k in 1..=n {
                        z += c.get(j, k, l, m) * xi[j - 1] * xi[k - 1].conj();
                    }
                }
                z
            });
            s = lowest_eigvec(&cx);
        }
        let value = griffiths_value(c, &xi, &s);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(GriffithsEstimate { value, xi, s });
        }
    }
    best.expect("at least one restart")
}

/// Largest entry of `S·conj(A^{p,q}) - A^{n-p,n-q}_{E*}·S`, where `∗u = S·conj(u)`.
pub fn star_intertwining_residual(c: &CurvatureTensor, p: usize, q: usize) -> Result<f64> {
    let n = c.n();
    let space = FormSpace::new(n, c.rank(), p, q, Fiber::Bundle)?;
    let target = FormSpace::new(n, c.rank(), n - p, n - q, Fiber::Dual)?;
    let a = operator_matrix_on(c, &space)?.matrix;
    let b = operator_matrix_on(&c.dual(), &target)?.matrix;
    let s = hodge_star_matrix(&space);
    let lhs = &s * a.map(|z| z.conj());
    let rhs = &b * &s;
    Ok(if lhs.is_empty() { 0.0 } else { (lhs - rhs).camax() })
}

/// Largest entry of `A^{p,q} + T† A^{n-q,n-p} T`, where `T` is the tilde map.
pub fn tilde_residual(c: &CurvatureTensor, p: usize, q: usize) -> Result<f64> {
    let n = c.n();
    let space = FormSpace::new(n, c.rank(), p, q, Fiber::Bundle)?;
    let a = operator_matrix(c, p, q)?.matrix;
    let b = operator_matrix(c, n - q, n - p)?.matrix;
    let t = tilde_matrix(&space);
    let m = a + t.adjoint() * b * t;
    Ok(if m.is_empty() { 0.0 } else { m.camax() })
}

/// Largest gap between two ascending spectra of equal length.
pub fn spectral_gap(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Spectrum negated and re-sorted ascending.
pub fn negated_spectrum(a: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = a.iter().map(|x| -x).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Spectra and residuals for one bidegree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BidegreeEntry {
    pub bidegree: (usize, usize),
    /// Spectrum of `A^{p,q}` on `E`.
    pub spectrum: Vec<f64>,
    pub class: PositivityClass,
    /// `max |spec A^{p,q} + spec A^{n-q,n-p}|` after sorting.
    pub negation_gap: f64,
    /// `max |spec A^{p,q} - spec A^{n-p,n-q}_{E*}|` after sorting.
    pub star_gap: f64,
    pub tilde_residual: f64,
    pub star_residual: f64,
}

/// One member of the duality chain and how it compares with Nakano positivity of `E`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainMember {
    pub label: String,
    pub class: PositivityClass,
    /// Class it must have given the Nakano class of `E`; negated for `A^{n-1,0}` and `A^{1,n}_{E*}`.
    pub expected: PositivityClass,
    /// Spectral distance between this member's class and the one implied by Nakano.
    pub gap: f64,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub label: String,
    pub detail: String,
    /// Eigenvalue or residual that breaks the statement.
    pub witness: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub n: usize,
    pub rank: usize,
    pub tol: f64,
    pub nakano: PositivityReport,
    pub dual_nakano: PositivityReport,
    pub bidegrees: Vec<BidegreeEntry>,
    pub chain: Vec<ChainMember>,
    pub violations: Vec<Violation>,
    /// Global statements that would follow if the pointwise classes held everywhere.
    pub inferences: Vec<String>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Distance from a spectrum to the set of spectra with class `target`,
/// measured on the extreme eigenvalue that decides membership.
fn class_gap(spectrum: &[f64], target: PositivityClass) -> f64 {
    if spectrum.is_empty() {
        return 0.0;
    }
    let min = spectrum[0];
    let max = spectrum[spectrum.len() - 1];
    match target {
        PositivityClass::Positive | PositivityClass::SemiPositive => (-min).max(0.0),
        PositivityClass::Negative | PositivityClass::SemiNegative => max.max(0.0),
        PositivityClass::Zero => min.abs().max(max.abs()),
        PositivityClass::Indefinite => 0.0,
    }
}

/// Same-sign comparison that ignores the strict/semi split when the deciding
/// eigenvalue sits within `slack` of zero.
fn compatible(actual: PositivityClass, expected: PositivityClass, gap: f64, slack: f64) -> bool {
    actual == expected || gap <= slack
}

/// Full duality report: per-bidegree spectra, the chain
/// `nakano(E) ~ A^{n,1} ~ A^{0,n-1}_{E*} ~ -A^{n-1,0} ~ -A^{1,n}_{E*}`
/// (the last two carry the negated class),
/// and any violated identity. Classes that disagree count as a violation only
/// when the spectral gap exceeds `10·tol·scale`.
pub fn theorem_chain_report(c: &CurvatureTensor, tol: f64) -> Result<ChainReport> {
    let c = c.validate(crate::curvature::DEFAULT_SYMMETRY_TOL, Default::default())?;
    let (n, r) = (c.n(), c.rank());
    let dual = c.dual();
    let nakano = nakano_class(&c, tol)?;
    let dual_nakano = dual_nakano_class(&c, tol)?;
    let mut violations = Vec::new();
    let mut bidegrees = Vec::new();
    let mut spectra = std::collections::HashMap::new();
    let mut dual_spectra = std::collections::HashMap::new();
    for p in 0..=n {
        for q in 0..=n {
            let a = operator_matrix(&c, p, q)?.matrix;
            spectra.insert((p, q), hermitian_spectrum(&a)?);
            let space = FormSpace::new(n, r, p, q, Fiber::Dual)?;
            let b = operator_matrix_on(&dual, &space)?.matrix;
            dual_spectra.insert((p, q), hermitian_spectrum(&b)?);
        }
    }
    let scale_of = |s: &[f64]| s.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
    for p in 0..=n {
        for q in 0..=n {
            let spec = spectra[&(p, q)].clone();
            let scale = scale_of(&spec);
            let negation_gap = spectral_gap(&spec, &negated_spectrum(&spectra[&(n - q, n - p)]));
            let star_gap = spectral_gap(&spec, &dual_spectra[&(n - p, n - q)]);
            let tilde_res = tilde_residual(&c, p, q)?;
            let star_res = star_intertwining_residual(&c, p, q)?;
            if negation_gap > 10.0 * tol * scale {
                violations.push(Violation {
                    label: format!("A^{{{p},{q}}} vs -A^{{{},{}}}", n - q, n - p),
                    detail: "spectra are not negatives of each other".into(),
                    witness: negation_gap,
                });
            }
            if star_gap > 10.0 * tol * scale {
                violations.push(Violation {
                    label: format!("A^{{{p},{q}}} vs A^{{{},{}}}_E*", n - p, n - q),
                    detail: "spectra differ".into(),
                    witness: star_gap,
                });
            }
            bidegrees.push(BidegreeEntry {
                bidegree: (p, q),
                class: classify(&spec, tol),
                spectrum: spec,
                negation_gap,
                star_gap,
                tilde_residual: tilde_res,
                star_residual: star_res,
            });
        }
    }

    let base = nakano.class;
    let members: Vec<(String, Vec<f64>, PositivityClass)> = vec![
        (format!("A^{{{n},1}}"), spectra[&(n, 1)].clone(), base),
        (format!("A^{{0,{}}}_E*", n - 1), dual_spectra[&(0, n - 1)].clone(), base),
        (format!("A^{{{},0}}", n - 1), spectra[&(n - 1, 0)].clone(), base.negated()),
        (format!("A^{{1,{n}}}_E*"), dual_spectra[&(1, n)].clone(), base.negated()),
    ];
    let mut chain = vec![ChainMember {
        label: "nakano(E)".into(),
        class: base,
        expected: base,
        gap: 0.0,
        consistent: true,
    }];
    for (label, spec, expected) in members {
        let class = classify(&spec, tol);
        let scale = scale_of(&spec).max(scale_of(&nakano.spectrum));
        let flipped = expected != base;
        // the member's own distance from `expected`, and Nakano's from the class the member implies
        let gap = if class == expected {
            0.0
        } else {
            let implied = if flipped { class.negated() } else { class };
            class_gap(&spec, expected).max(class_gap(&nakano.spectrum, implied))
        };
        let consistent = compatible(class, expected, gap, 10.0 * tol * scale);
        if !consistent {
            violations.push(Violation {
                label: label.clone(),
                detail: format!("class {class}, expected {expected} from nakano(E) = {base}"),
                witness: gap,
            });
        }
        chain.push(ChainMember {
            label,
            class,
            expected,
            gap,
            consistent,
        });
    }

    let nonneg = |c: PositivityClass| {
        matches!(c, PositivityClass::Positive | PositivityClass::SemiPositive | PositivityClass::Zero)
    };
    let mut inferences = Vec::new();
    for q in 1..=n {
        if nonneg(classify(&spectra[&(n, q)], tol)) {
            inferences.push(format!(
                "A^{{{n},{q}}} >= 0 here; if this holds at every point, E satisfies the ({n},{q})-L2-estimate condition (inferred, not computed)"
            ));
        }
    }
    for p in 1..n {
        if nonneg(classify(&spectra[&(p, n)], tol)) {
            inferences.push(format!(
                "A^{{{p},{n}}} >= 0 here; if this holds at every point, E satisfies the ({p},{n})-L2-estimate condition (inferred, not computed)"
            ));
        }
    }
    if matches!(base, PositivityClass::SemiNegative | PositivityClass::Negative | PositivityClass::Zero) {
        inferences.push(format!(
            "E is Nakano semi-negative here; if this holds at every point, E* satisfies the (1,{n})-L2-estimate condition (inferred, not computed)"
        ));
    }

    Ok(ChainReport {
        n,
        rank: r,
        tol,
        nakano,
        dual_nakano,
        bidegrees,
        chain,
        violations,
        inferences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::generators::{fubini_study_tensor, random_tensor, RandomMode};

    /// Characteristic-polynomial oracle: Newton sums of the claimed spectrum
    /// must equal `tr(A^k)`.
    fn assert_power_traces(m: &CMatrix, spectrum: &[f64]) {
        let mut power = CMatrix::identity(m.nrows(), m.ncols());
        for k in 1..=m.nrows() {
            power = &power * m;
            let tr = power.trace();
            let sum: f64 = spectrum.iter().map(|x| x.powi(k as i32)).sum();
            let scale = 1.0 + sum.abs();
            assert!((tr.re - sum).abs() < 1e-9 * scale, "k={k}: {} vs {sum}", tr.re);
            assert!(tr.im.abs() < 1e-9 * scale);
        }
    }

    fn fs_nakano(n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n * (n - 1) / 2];
        v.extend(std::iter::repeat_n(2.0, n * (n + 1) / 2));
        v
    }

    #[test]
    fn fubini_study_spectra_match_trace_oracle() {
        for n in 1..=3 {
            let c = fubini_study_tensor(n);
            let m = nakano_matrix(&c);
            let spec = hermitian_spectrum(&m).unwrap();
            assert!(spectral_gap(&spec, &fs_nakano(n)) < 1e-12);
            assert_power_traces(&m, &fs_nakano(n));
            let d = nakano_matrix(&c.dual());
            let mut expect = vec![-(n as f64) - 1.0];
            expect.extend(std::iter::repeat_n(-1.0, n * n - 1));
            assert!(spectral_gap(&hermitian_spectrum(&d).unwrap(), &expect) < 1e-12);
            assert_power_traces(&d, &expect);
        }
    }

    #[test]
    fn fubini_study_classes() {
        let c = fubini_study_tensor(2);
        assert_eq!(nakano_class(&c, DEFAULT_TOL).unwrap().class, PositivityClass::SemiPositive);
        assert_eq!(dual_nakano_class(&c, DEFAULT_TOL).unwrap().class, PositivityClass::Positive);
        let c1 = fubini_study_tensor(1);
        assert_eq!(nakano_class(&c1, DEFAULT_TOL).unwrap().class, PositivityClass::Positive);
    }

    #[test]
    fn classify_examples() {
        use PositivityClass::*;
        assert_eq!(classify(&[1.0, 2.0], 1e-9), Positive);
        assert_eq!(classify(&[0.0, 2.0], 1e-9), SemiPositive);
        assert_eq!(classify(&[-1e-12, 2.0], 1e-9), SemiPositive);
        assert_eq!(classify(&[-2.0, -1.0], 1e-9), Negative);
        assert_eq!(classify(&[-2.0, 0.0], 1e-9), SemiNegative);
        assert_eq!(classify(&[-1.0, 1.0], 1e-9), Indefinite);
        assert_eq!(classify(&[0.0, 1e-12], 1e-9), Zero);
        assert_eq!(classify(&[], 1e-9), Zero);
        // threshold scales with the largest eigenvalue
        assert_eq!(classify(&[-1e-4, 1e6], 1e-9), SemiPositive);
        assert_eq!(classify(&[-1e-2, 1e6], 1e-9), Indefinite);
        for c in [Positive, SemiPositive, Negative, SemiNegative, Indefinite, Zero] {
            assert_eq!(c.negated().negated(), c);
        }
        assert_eq!(SemiPositive.to_string(), "semi_positive");
    }

    #[test]
    fn spectrum_rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(hermitian_spectrum(&m), Err(Error::NonHermitianMatrix { .. })));
    }

    #[test]
    fn griffiths_examples() {
        let c1 = CurvatureTensor::from_fn(1, 1, |_, _, _, _| C64::new(-3.5, 0.0));
        assert!((griffiths_min(&c1, 2, 5, 0).value + 3.5).abs() < 1e-12);
        for n in 2..=3 {
            let g = griffiths_min(&fubini_study_tensor(n), 8, 30, 1);
            assert!((g.value - 1.0).abs() < 1e-6, "n={n}: {}", g.value);
            let xi2: f64 = g.xi.iter().map(|z| z.norm_sqr()).sum();
            assert!((xi2 - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn griffiths_finds_single_negative_slot() {
        let c = CurvatureTensor::from_fn(2, 2, |j, k, l, m| {
            if j == k && l == m {
                C64::new(if (j, l) == (2, 1) { -1.0 } else { 1.0 }, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let g = griffiths_min(&c, 4, 20, 9);
        assert!(g.value <= -1.0 + 1e-12, "{}", g.value);
    }

    #[test]
    fn chain_report_line_bundle_and_zero() {
        let c = CurvatureTensor::from_fn(1, 1, |_, _, _, _| C64::new(2.0, 0.0));
        let report = theorem_chain_report(&c, DEFAULT_TOL).unwrap();
        assert!(report.passed());
        let spec = |p, q| report.bidegrees.iter().find(|e| e.bidegree == (p, q)).unwrap().spectrum.clone();
        assert_eq!(spec(1, 1), vec![2.0]);
        assert_eq!(spec(0, 0), vec![-2.0]);
        let classes: Vec<_> = report.chain.iter().map(|m| m.class).collect();
        use PositivityClass::{Negative, Positive};
        assert_eq!(classes, vec![Positive, Positive, Positive, Negative, Negative]);

        let z = theorem_chain_report(&CurvatureTensor::zeros(2, 2), DEFAULT_TOL).unwrap();
        assert!(z.passed());
        assert!(z.chain.iter().all(|m| m.class == PositivityClass::Zero));
        assert_eq!(z.dual_nakano.class, PositivityClass::Zero);
    }

    #[test]
    fn dual_nakano_line_bundle() {
        let c = CurvatureTensor::from_fn(1, 1, |_, _, _, _| C64::new(-3.0, 0.0));
        assert_eq!(dual_nakano_class(&c, DEFAULT_TOL).unwrap().class, PositivityClass::Negative);
        let fs = crate::cli::generators::fubini_study_tensor(2).dual();
        assert_eq!(nakano_class(&fs, DEFAULT_TOL).unwrap().class, PositivityClass::Negative);
    }

    #[test]
    fn griffiths_bounded_below_by_nakano_min() {
        for seed in 0..10 {
            let c = random_tensor(2, 2, seed, RandomMode::Hermitian);
            let nak = hermitian_spectrum(&nakano_matrix(&c)).unwrap()[0];
            let g = griffiths_min(&c, 4, 20, seed);
            assert!(g.value >= nak - 1e-10);
            let direct = griffiths_value(&c, &g.xi, &g.s);
            assert!((direct - g.value).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_report_on_fubini_study() {
        for n in 2..=3 {
            let report = theorem_chain_report(&fubini_study_tensor(n), DEFAULT_TOL).unwrap();
            assert!(report.passed(), "{:?}", report.violations);
            assert_eq!(report.chain.len(), 5);
            for e in &report.bidegrees {
                assert!(e.tilde_residual < 1e-10 && e.star_residual < 1e-10);
            }
        }
    }

    #[test]
    fn chain_report_on_random_tensors() {
        for seed in 0..5 {
            let c = random_tensor(2, 2, seed, RandomMode::Hermitian);
            let report = theorem_chain_report(&c, DEFAULT_TOL).unwrap();
            assert!(report.passed(), "{:?}", report.violations);
        }
    }
}
