//! Brute-force reconstruction of the curvature operator as the literal
//! commutator `iΘ ∧ Λ_ω(·) − Λ_ω(iΘ ∧ ·)`.
//!
//! Forms are expanded into fully antisymmetric coefficient tensors over all
//! ordered tuples of the `2n` generators `dz_1, …, dz_n, dz̄_1, …, dz̄_n`, and
//! wedge products are computed by explicit shuffle summation with permutation
//! parities counted from scratch. Nothing here uses the `ε(s, I)` bookkeeping of
//! [`crate::multiindex`], so the closed forms can be checked against it.
//!
//! Convention: the monomial `g_{t_1} ∧ … ∧ g_{t_k}` is the tensor taking value
//! `sgn(π)` on `π(t)` and zero elsewhere. With this normalisation the wedge of
//! two monomials is the monomial of the concatenated tuple.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use itertools::Itertools;

use crate::curvature::CurvatureTensor;
use crate::forms::BundleForm;
use crate::{CMatrix, Error, Result, C64};

/// Parity of a permutation of `0..len`, from its cycle decomposition.
fn permutation_parity(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = perm[at];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of the permutation that reorders `from` into `to` (same multiset, distinct entries).
#[cfg(test)]
fn reorder_sign(from: &[usize], to: &[usize]) -> i32 {
    let perm: Vec<usize> = from
        .iter()
        .map(|x| to.iter().position(|y| y == x).expect("same entries"))
        .collect();
    permutation_parity(&perm)
}

/// Fully antisymmetric tensor of a fixed degree, stored on every ordered tuple
/// of distinct generators where it is non-zero.
#[derive(Clone, Debug, Default)]
pub struct AltTensor {
    degree: usize,
    entries: HashMap<Vec<usize>, C64>,
}

impl AltTensor {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            entries: HashMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `coeff · g_{gens[0]} ∧ g_{gens[1]} ∧ …`; zero if a generator repeats.
    pub fn monomial(gens: &[usize], coeff: C64) -> Self {
        let mut out = Self::zero(gens.len());
        out.add_monomial(gens, coeff);
        out
    }

    pub fn add_monomial(&mut self, gens: &[usize], coeff: C64) {
        assert_eq!(gens.len(), self.degree);
        if gens.iter().collect::<BTreeSet<_>>().len() != gens.len() {
            return;
        }
        for perm in (0..gens.len()).permutations(gens.len()) {
            let tuple: Vec<usize> = perm.iter().map(|&i| gens[i]).collect();
            let value = coeff * f64::from(permutation_parity(&perm));
            *self.entries.entry(tuple).or_default() += value;
        }
    }

    pub fn get(&self, tuple: &[usize]) -> C64 {
        self.entries.get(tuple).copied().unwrap_or_default()
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.degree, other.degree);
        for (k, v) in &other.entries {
            *self.entries.entry(k.clone()).or_default() += v;
        }
    }

    pub fn scaled(&self, a: C64) -> Self {
        Self {
            degree: self.degree,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v * a)).collect(),
        }
    }

    /// `(α ∧ β)(t) = Σ_{(a,b)-shuffles σ} sgn(σ) α(t_A) β(t_B)`, evaluated on every
    /// ordered tuple over the union of supports.
    pub fn wedge(&self, other: &Self) -> Self {
        let (a, b) = (self.degree, other.degree);
        let mut out = Self::zero(a + b);
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in self.entries.keys() {
            for t in other.entries.keys() {
                if s.iter().any(|x| t.contains(x)) {
                    continue;
                }
                let mut set: Vec<usize> = s.iter().chain(t).copied().collect();
                set.sort_unstable();
                sets.insert(set);
            }
        }
        for set in sets {
            for tuple in set.iter().copied().permutations(a + b) {
                let mut value = C64::default();
                for front in (0..a + b).combinations(a) {
                    let back: Vec<usize> = (0..a + b).filter(|i| !front.contains(i)).collect();
                    let lhs: Vec<usize> = front.iter().map(|&i| tuple[i]).collect();
                    let rhs: Vec<usize> = back.iter().map(|&i| tuple[i]).collect();
                    let x = self.get(&lhs);
                    let y = other.get(&rhs);
                    if x == C64::default() || y == C64::default() {
                        continue;
                    }
                    let shuffle: Vec<usize> = front.iter().chain(&back).copied().collect();
                    value += x * y * f64::from(permutation_parity(&shuffle));
                }
                if value != C64::default() {
                    out.entries.insert(tuple, value);
                }
            }
        }
        out
    }

    /// Interior product with the dual vector of generator `g`: `(ι T)(t) = T(g, t)`.
    pub fn contract(&self, g: usize) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (k, v) in &self.entries {
            if k[0] == g {
                out.entries.insert(k[1..].to_vec(), *v);
            }
        }
        out
    }
}

/// Generator index of `dz_j` (1-based `j`).
pub fn holo_gen(j: usize) -> usize {
    j - 1
}

/// Generator index of `dz̄_k` in dimension `n` (1-based `k`).
pub fn anti_gen(n: usize, k: usize) -> usize {
    n + k - 1
}

/// Canonical `(J, K)` pairs of bidegree `(p, q)`, lexicographic, from `itertools`.
fn scalar_basis(n: usize, p: usize, q: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let holo: Vec<Vec<usize>> = (1..=n).combinations(p).collect();
    let anti: Vec<Vec<usize>> = (1..=n).combinations(q).collect();
    holo.iter()
        .cartesian_product(anti.iter())
        .map(|(j, k)| (j.clone(), k.clone()))
        .collect()
}

fn canonical_tuple(n: usize, holo: &[usize], anti: &[usize]) -> Vec<usize> {
    holo.iter()
        .map(|&j| holo_gen(j))
        .chain(anti.iter().map(|&k| anti_gen(n, k)))
        .collect()
}

/// Antisymmetric tensor of the `λ`-th fiber component of `u` (λ 1-based).
pub fn form_component_tensor(u: &BundleForm, lambda: usize) -> AltTensor {
    let sp = u.space();
    let (n, r) = (sp.n(), sp.rank());
    let mut out = AltTensor::zero(sp.p() + sp.q());
    for (pos, (holo, anti)) in scalar_basis(n, sp.p(), sp.q()).into_iter().enumerate() {
        let c = u.coeffs()[pos * r + lambda - 1];
        if c != C64::default() {
            out.add_monomial(&canonical_tuple(n, &holo, &anti), c);
        }
    }
    out
}

/// Coefficients of `t` on the canonical `(p, q)` basis, read at increasing tuples.
pub fn canonical_coefficients(t: &AltTensor, n: usize, p: usize, q: usize) -> Vec<C64> {
    assert_eq!(t.degree(), p + q);
    scalar_basis(n, p, q)
        .into_iter()
        .map(|(holo, anti)| t.get(&canonical_tuple(n, &holo, &anti)))
        .collect()
}

/// `ω = i Σ dz_j ∧ dz̄_j`.
pub fn kahler_form(n: usize) -> AltTensor {
    let mut w = AltTensor::zero(2);
    for j in 1..=n {
        w.add_monomial(&[holo_gen(j), anti_gen(n, j)], C64::new(0.0, 1.0));
    }
    w
}

/// Linear map between canonical bases of two bidegrees (possibly trivial ones).
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeMap {
    pub source: (isize, isize),
    pub target: (isize, isize),
    pub matrix: CMatrix,
}

impl DegreeMap {
    /// `other ∘ self`.
    pub fn then(&self, other: &DegreeMap) -> Result<DegreeMap> {
        if self.target != other.source {
            return Err(Error::SpaceMismatch(format!(
                "cannot compose {:?}→{:?} with {:?}→{:?}",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(DegreeMap {
            source: self.source,
            target: other.target,
            matrix: &other.matrix * &self.matrix,
        })
    }
}

fn bidegree_dim(n: usize, (p, q): (isize, isize)) -> usize {
    let ok = |d: isize| d >= 0 && d as usize <= n;
    if ok(p) && ok(q) {
        scalar_basis(n, p as usize, q as usize).len()
    } else {
        0
    }
}

/// Scalar maps for one source bidegree `(p, q)` into `(p+1, q+1)`.
struct ScalarCell {
    /// `u ↦ ω ∧ u`.
    lefschetz: CMatrix,
    /// `u ↦ i dz_j ∧ dz̄_k ∧ u`, indexed `(j-1)·n + (k-1)`.
    curvature_wedges: Vec<CMatrix>,
}

/// Memoised brute-force maps for a fixed base dimension `n`.
///
/// `iΘ ∧ ·` is linear in the coefficients, so the wedge with each elementary
/// `i dz_j ∧ dz̄_k` is expanded once per bidegree and then combined with the
/// fiber blocks of any tensor.
pub struct WedgeOracle {
    n: usize,
    cells: Vec<OnceLock<ScalarCell>>,
}

impl WedgeOracle {
    pub fn new(n: usize) -> Self {
        assert!(n > 0);
        Self {
            n,
            cells: (0..(n + 1) * (n + 1)).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn cell(&self, p: usize, q: usize) -> &ScalarCell {
        let n = self.n;
        self.cells[p * (n + 1) + q].get_or_init(|| {
            let src = scalar_basis(n, p, q);
            let tgt_dim = bidegree_dim(n, (p as isize + 1, q as isize + 1));
            let omega = kahler_form(n);
            let mut lefschetz = CMatrix::zeros(tgt_dim, src.len());
            let mut curvature_wedges = vec![CMatrix::zeros(tgt_dim, src.len()); n * n];
            if tgt_dim > 0 {
                for (col, (holo, anti)) in src.iter().enumerate() {
                    let basis = AltTensor::monomial(&canonical_tuple(n, holo, anti), C64::new(1.0, 0.0));
                    let lw = canonical_coefficients(&omega.wedge(&basis), n, p + 1, q + 1);
                    lefschetz.column_mut(col).iter_mut().zip(lw).for_each(|(d, s)| *d = s);
                    for j in 1..=n {
                        for k in 1..=n {
                            let theta = AltTensor::monomial(&[holo_gen(j), anti_gen(n, k)], C64::new(0.0, 1.0));
                            let w = canonical_coefficients(&theta.wedge(&basis), n, p + 1, q + 1);
                            curvature_wedges[(j - 1) * n + (k - 1)]
                                .column_mut(col)
                                .iter_mut()
                                .zip(w)
                                .for_each(|(d, s)| *d = s);
                        }
                    }
                }
            }
            ScalarCell {
                lefschetz,
                curvature_wedges,
            }
        })
    }

    fn in_range(&self, p: isize, q: isize) -> bool {
        p >= 0 && q >= 0 && p as usize <= self.n && q as usize <= self.n
    }

    fn zero_map(&self, r: usize, source: (isize, isize), target: (isize, isize)) -> DegreeMap {
        DegreeMap {
            source,
            target,
            matrix: CMatrix::zeros(bidegree_dim(self.n, target) * r, bidegree_dim(self.n, source) * r),
        }
    }

    /// Matrix of `L = ω ∧ ·` from `(p, q)` to `(p+1, q+1)` with rank-`r` fiber.
    pub fn lefschetz_matrix(&self, r: usize, p: isize, q: isize) -> DegreeMap {
        let target = (p + 1, q + 1);
        if !self.in_range(p, q) || !self.in_range(p + 1, q + 1) {
            return self.zero_map(r, (p, q), target);
        }
        let scalar = &self.cell(p as usize, q as usize).lefschetz;
        DegreeMap {
            source: (p, q),
            target,
            matrix: scalar.kronecker(&CMatrix::identity(r, r)),
        }
    }

    /// Matrix of `Λ_ω` from `(p, q)` to `(p-1, q-1)`: the conjugate transpose of `L`.
    pub fn lambda_matrix(&self, r: usize, p: isize, q: isize) -> DegreeMap {
        let l = self.lefschetz_matrix(r, p - 1, q - 1);
        DegreeMap {
            source: (p, q),
            target: (p - 1, q - 1),
            matrix: l.matrix.adjoint(),
        }
    }

    /// Matrix of `u ↦ iΘ ∧ u` from `(p, q)` to `(p+1, q+1)`, including the fiber
    /// action `e_λ ↦ Σ_μ c_{jkλμ} e_μ`.
    pub fn theta_wedge_matrix(&self, c: &CurvatureTensor, p: isize, q: isize) -> DegreeMap {
        assert_eq!(c.n(), self.n);
        let r = c.rank();
        let target = (p + 1, q + 1);
        if !self.in_range(p, q) || !self.in_range(p + 1, q + 1) {
            return self.zero_map(r, (p, q), target);
        }
        let cell = self.cell(p as usize, q as usize);
        let n = self.n;
        let mut m = CMatrix::zeros(bidegree_dim(n, target) * r, bidegree_dim(n, (p, q)) * r);
        for j in 1..=n {
            for k in 1..=n {
                let block = CMatrix::from_fn(r, r, |mu, lam| c.get(j, k, lam + 1, mu + 1));
                if block.camax() == 0.0 {
                    continue;
                }
                m += cell.curvature_wedges[(j - 1) * n + (k - 1)].kronecker(&block);
            }
        }
        DegreeMap {
            source: (p, q),
            target,
            matrix: m,
        }
    }

    /// `[iΘ, Λ_ω] = (iΘ ∧ ·) ∘ Λ_ω − Λ_ω ∘ (iΘ ∧ ·)` on `(p, q)`.
    pub fn commutator_matrix(&self, c: &CurvatureTensor, p: usize, q: usize) -> Result<CMatrix> {
        if p > self.n || q > self.n {
            return Err(Error::DegreeTooLarge { degree: p.max(q), n: self.n });
        }
        let r = c.rank();
        let (p, q) = (p as isize, q as isize);
        let down_up = self
            .lambda_matrix(r, p, q)
            .then(&self.theta_wedge_matrix(c, p - 1, q - 1))?;
        let up_down = self
            .theta_wedge_matrix(c, p, q)
            .then(&self.lambda_matrix(r, p + 1, q + 1))?;
        Ok(down_up.matrix - up_down.matrix)
    }
}

/// One-shot [`WedgeOracle::lefschetz_matrix`].
pub fn lefschetz_matrix(n: usize, r: usize, p: usize, q: usize) -> DegreeMap {
    WedgeOracle::new(n).lefschetz_matrix(r, p as isize, q as isize)
}

/// One-shot [`WedgeOracle::lambda_matrix`].
pub fn lambda_matrix(n: usize, r: usize, p: usize, q: usize) -> DegreeMap {
    WedgeOracle::new(n).lambda_matrix(r, p as isize, q as isize)
}

/// One-shot [`WedgeOracle::theta_wedge_matrix`].
pub fn theta_wedge_matrix(c: &CurvatureTensor, p: usize, q: usize) -> DegreeMap {
    WedgeOracle::new(c.n()).theta_wedge_matrix(c, p as isize, q as isize)
}

/// One-shot [`WedgeOracle::commutator_matrix`].
pub fn commutator_matrix(c: &CurvatureTensor, p: usize, q: usize) -> Result<CMatrix> {
    WedgeOracle::new(c.n()).commutator_matrix(c, p, q)
}

/// Top-degree pairing `u ∧ w`, contracting `E` against `E*` fiberwise, as the
/// coefficient of `dz_N ∧ dz̄_N`.
pub fn wedge_pairing_top(u: &BundleForm, w: &BundleForm) -> Result<C64> {
    let (su, sw) = (u.space(), w.space());
    let n = su.n();
    if sw.n() != n || su.rank() != sw.rank() || su.p() + sw.p() != n || su.q() + sw.q() != n {
        return Err(Error::SpaceMismatch(format!("cannot pair {su} with {sw}")));
    }
    let mut total = AltTensor::zero(2 * n);
    for lambda in 1..=su.rank() {
        let a = form_component_tensor(u, lambda);
        let b = form_component_tensor(w, lambda);
        total.add_assign(&a.wedge(&b));
    }
    let top: Vec<usize> = (1..=n).map(holo_gen).chain((1..=n).map(|k| anti_gen(n, k))).collect();
    Ok(total.get(&top))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{Fiber, FormSpace};

    const I: C64 = C64::new(0.0, 1.0);

    fn scalar_tensor(n: usize, value: f64) -> CurvatureTensor {
        CurvatureTensor::from_fn(n, 1, |j, k, _, _| {
            C64::new(if j == k { value } else { 0.0 }, 0.0)
        })
    }

    #[test]
    fn parity_counts_cycles() {
        assert_eq!(permutation_parity(&[0, 1, 2]), 1);
        assert_eq!(permutation_parity(&[1, 0, 2]), -1);
        assert_eq!(permutation_parity(&[1, 2, 0]), 1);
        assert_eq!(permutation_parity(&[3, 2, 1, 0]), 1);
        assert_eq!(reorder_sign(&[2, 1], &[1, 2]), -1);
    }

    #[test]
    fn monomials_antisymmetric_and_wedge_concatenates() {
        let a = AltTensor::monomial(&[0], C64::new(1.0, 0.0));
        let b = AltTensor::monomial(&[1], C64::new(1.0, 0.0));
        let ab = a.wedge(&b);
        assert_eq!(ab.get(&[0, 1]), C64::new(1.0, 0.0));
        assert_eq!(ab.get(&[1, 0]), C64::new(-1.0, 0.0));
        let ba = b.wedge(&a);
        assert_eq!(ba.get(&[0, 1]), C64::new(-1.0, 0.0));
        assert_eq!(a.wedge(&a).entries.len(), 0);
        let abc = ab.wedge(&AltTensor::monomial(&[2], C64::new(1.0, 0.0)));
        let direct = AltTensor::monomial(&[0, 1, 2], C64::new(1.0, 0.0));
        for (k, v) in &direct.entries {
            assert_eq!(abc.get(k), *v);
        }
        assert_eq!(abc.entries.len(), 6);
    }

    #[test]
    fn lefschetz_examples() {
        let l = lefschetz_matrix(1, 1, 0, 0);
        assert_eq!(l.matrix, CMatrix::from_element(1, 1, I));
        assert_eq!(lefschetz_matrix(1, 1, 1, 1).matrix.len(), 0);
        let l2 = lefschetz_matrix(2, 1, 0, 0);
        assert_eq!(l2.matrix.shape(), (4, 1));
        let expect = [I, C64::default(), C64::default(), I];
        for (a, b) in l2.matrix.iter().zip(expect) {
            assert_eq!(*a, b);
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_matrix(1, 1, 1, 1).matrix, CMatrix::from_element(1, 1, -I));
        assert_eq!(lambda_matrix(2, 1, 0, 1).matrix.camax(), 0.0);
        assert_eq!(lambda_matrix(2, 1, 0, 1).matrix.nrows(), 0);
    }

    #[test]
    fn theta_wedge_examples() {
        let c = scalar_tensor(1, 2.0);
        let m = theta_wedge_matrix(&c, 0, 0);
        assert_eq!(m.matrix, CMatrix::from_element(1, 1, C64::new(0.0, 2.0)));
        assert_eq!(theta_wedge_matrix(&CurvatureTensor::zeros(2, 2), 1, 0).matrix.camax(), 0.0);
        assert_eq!(theta_wedge_matrix(&c, 1, 1).matrix.len(), 0);
    }

    #[test]
    fn commutator_examples() {
        let c = scalar_tensor(1, 2.0);
        assert_eq!(commutator_matrix(&c, 1, 1).unwrap(), CMatrix::from_element(1, 1, C64::new(2.0, 0.0)));
        assert_eq!(commutator_matrix(&c, 1, 0).unwrap(), CMatrix::from_element(1, 1, C64::default()));
        assert_eq!(commutator_matrix(&c, 0, 0).unwrap(), CMatrix::from_element(1, 1, C64::new(-2.0, 0.0)));
        assert_eq!(commutator_matrix(&CurvatureTensor::zeros(2, 2), 1, 1).unwrap().camax(), 0.0);
    }

    #[test]
    fn composition_checks_bidegrees() {
        let o = WedgeOracle::new(2);
        let l = o.lefschetz_matrix(1, 0, 0);
        assert!(l.then(&o.lefschetz_matrix(1, 0, 0)).is_err());
        assert!(l.then(&o.lambda_matrix(1, 1, 1)).is_ok());
    }

    #[test]
    fn kahler_commutation_on_scalars() {
        // [L, Λ] = (p + q - n) id
        for n in 1..=3 {
            let o = WedgeOracle::new(n);
            for p in 0..=n as isize {
                for q in 0..=n as isize {
                    let lam_then_l = o.lambda_matrix(1, p, q).then(&o.lefschetz_matrix(1, p - 1, q - 1)).unwrap();
                    let l_then_lam = o.lefschetz_matrix(1, p, q).then(&o.lambda_matrix(1, p + 1, q + 1)).unwrap();
                    let comm = lam_then_l.matrix - l_then_lam.matrix;
                    let d = comm.nrows();
                    let expect = CMatrix::identity(d, d) * C64::new((p + q - n as isize) as f64, 0.0);
                    assert!((comm - expect).camax() < 1e-12, "n={n} ({p},{q})");
                }
            }
        }
    }

    #[test]
    fn tensor_roundtrip_through_canonical_coefficients() {
        let sp = FormSpace::new(3, 2, 1, 2, Fiber::Bundle).unwrap();
        let coeffs: Vec<C64> = (0..sp.dim()).map(|k| C64::new(k as f64, -1.0)).collect();
        let u = BundleForm::from_coeffs(sp, coeffs.clone()).unwrap();
        for lambda in 1..=2 {
            let t = form_component_tensor(&u, lambda);
            let back = canonical_coefficients(&t, 3, 1, 2);
            let expect: Vec<C64> = coeffs.iter().skip(lambda - 1).step_by(2).copied().collect();
            assert_eq!(back, expect);
        }
    }

    #[test]
    fn contraction_of_monomial() {
        // ι_{g0} (g1 ∧ g0) = -g1
        let t = AltTensor::monomial(&[1, 0], C64::new(1.0, 0.0));
        let c = t.contract(0);
        assert_eq!(c.get(&[1]), C64::new(-1.0, 0.0));
    }
}
