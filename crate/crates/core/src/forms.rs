//! Bundle-valued `(p,q)`-forms at a point.
//!
//! The canonical basis `{dz_J ∧ dz̄_K ⊗ e_λ}` of `Λ^{p,q} T* ⊗ E` is orthonormal,
//! ordered lexicographically in `(J, K, λ)` with `λ` fastest. The Kähler form is
//! `ω = i Σ dz_j ∧ dz̄_j` and the volume form `dV = i^{n²} dz_N ∧ dz̄_N = ω^n / n!`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::multiindex::{binomial, enumerate_indices, MultiIndex};
use crate::{CMatrix, Error, Result, C64};

/// Whether coefficients are sections of `E` or of `E*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fiber {
    Bundle,
    Dual,
}

impl Fiber {
    pub fn flipped(self) -> Self {
        match self {
            Fiber::Bundle => Fiber::Dual,
            Fiber::Dual => Fiber::Bundle,
        }
    }
}

impl fmt::Display for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fiber::Bundle => write!(f, "E"),
            Fiber::Dual => write!(f, "E*"),
        }
    }
}

/// Which factor an interior product contracts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `∂/∂z_s`, acting on `dz_J`.
    Holomorphic,
    /// `∂/∂z̄_s`, acting on `dz̄_K` after passing the `p` holomorphic factors.
    Antiholomorphic,
}

/// The fiber `Λ^{p,q} T*_x ⊗ E_x` (or `⊗ E*_x`) together with its canonical basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormSpace {
    n: usize,
    r: usize,
    p: usize,
    q: usize,
    fiber: Fiber,
}

/// One canonical basis element `dz_J ∧ dz̄_K ⊗ e_λ` (λ is 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub holo: MultiIndex,
    pub anti: MultiIndex,
    pub fiber: usize,
}

impl FormSpace {
    pub fn new(n: usize, r: usize, p: usize, q: usize, fiber: Fiber) -> Result<Self> {
        if n == 0 || r == 0 {
            return Err(Error::Invalid(format!(
                "dimension and rank must be positive (n = {n}, r = {r})"
            )));
        }
        if p > n || q > n {
            return Err(Error::DegreeTooLarge { degree: p.max(q), n });
        }
        Ok(Self { n, r, p, q, fiber })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn fiber(&self) -> Fiber {
        self.fiber
    }

    pub fn dim(&self) -> usize {
        binomial(self.n, self.p) * binomial(self.n, self.q) * self.r
    }

    /// Same `n`, `r` and fiber, different bidegree; `None` when outside `[0, n]²`.
    pub fn with_bidegree(&self, p: usize, q: usize) -> Option<Self> {
        (p <= self.n && q <= self.n).then_some(Self { p, q, ..*self })
    }

    pub fn with_fiber(&self, fiber: Fiber) -> Self {
        Self { fiber, ..*self }
    }

    /// Position of `dz_J ∧ dz̄_K ⊗ e_λ` in the canonical order.
    pub fn slot_index(&self, holo: &MultiIndex, anti: &MultiIndex, lambda: usize) -> usize {
        debug_assert_eq!(holo.degree(), self.p);
        debug_assert_eq!(anti.degree(), self.q);
        debug_assert!(lambda >= 1 && lambda <= self.r);
        let nk = binomial(self.n, self.q);
        (holo.lex_rank() * nk + anti.lex_rank()) * self.r + (lambda - 1)
    }

    /// Canonical basis in order.
    pub fn slots(&self) -> Vec<Slot> {
        let holo = enumerate_indices(self.n, self.p).expect("p <= n");
        let anti = enumerate_indices(self.n, self.q).expect("q <= n");
        let mut out = Vec::with_capacity(self.dim());
        for j in &holo {
            for k in &anti {
                for lambda in 1..=self.r {
                    out.push(Slot {
                        holo: j.clone(),
                        anti: k.clone(),
                        fiber: lambda,
                    });
                }
            }
        }
        out
    }

    /// Matrix whose column `a` holds the coefficients of `f(basis_a)` in `target`.
    pub fn matrix_of<F>(&self, target: &FormSpace, mut f: F) -> CMatrix
    where
        F: FnMut(&BundleForm) -> BundleForm,
    {
        let mut m = CMatrix::zeros(target.dim(), self.dim());
        for a in 0..self.dim() {
            let image = f(&BundleForm::basis(*self, a));
            debug_assert_eq!(image.space(), target);
            m.column_mut(a)
                .iter_mut()
                .zip(image.coeffs())
                .for_each(|(dst, src)| *dst = *src);
        }
        m
    }
}

impl fmt::Display for FormSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Λ^{{{},{}}} ⊗ {} (n = {}, r = {})",
            self.p, self.q, self.fiber, self.n, self.r
        )
    }
}

/// An element of `Λ^{p,q} T*_x ⊗ E_x`, stored densely in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleForm {
    space: FormSpace,
    coeffs: Vec<C64>,
}

/// `i^{n²}`: `1` for even `n`, `i` for odd `n`.
fn i_pow_n_squared(n: usize) -> C64 {
    if n.is_multiple_of(2) {
        C64::new(1.0, 0.0)
    } else {
        C64::new(0.0, 1.0)
    }
}

fn parity(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `C_{J,K} = i^{n²} (-1)^{q(n-p)} sgn(J,J^C) sgn(K,K^C)`.
pub fn star_constant(n: usize, holo: &MultiIndex, anti: &MultiIndex) -> C64 {
    let p = holo.degree();
    let q = anti.degree();
    let sign = parity(q * (n - p)) * f64::from(holo.sgn_complement() * anti.sgn_complement());
    i_pow_n_squared(n) * sign
}

impl BundleForm {
    pub fn zeros(space: FormSpace) -> Self {
        Self {
            space,
            coeffs: vec![C64::new(0.0, 0.0); space.dim()],
        }
    }

    /// The `a`-th canonical basis form.
    pub fn basis(space: FormSpace, a: usize) -> Self {
        let mut out = Self::zeros(space);
        out.coeffs[a] = C64::new(1.0, 0.0);
        out
    }

    pub fn from_coeffs(space: FormSpace, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::SpaceMismatch(format!(
                "{} coefficients given for {space} of dimension {}",
                coeffs.len(),
                space.dim()
            )));
        }
        Ok(Self { space, coeffs })
    }

    /// A single monomial `value · dz_J ∧ dz̄_K ⊗ e_λ`.
    pub fn monomial(
        space: FormSpace,
        holo: &MultiIndex,
        anti: &MultiIndex,
        lambda: usize,
        value: C64,
    ) -> Result<Self> {
        let mut out = Self::zeros(space);
        out.set(holo, anti, lambda, value)?;
        Ok(out)
    }

    pub fn space(&self) -> &FormSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    fn check_slot(&self, holo: &MultiIndex, anti: &MultiIndex, lambda: usize) -> Result<()> {
        let s = &self.space;
        if holo.dim() != s.n || anti.dim() != s.n || holo.degree() != s.p || anti.degree() != s.q
        {
            return Err(Error::SpaceMismatch(format!(
                "slot ({holo}, {anti}) does not belong to {s}"
            )));
        }
        if lambda == 0 || lambda > s.r {
            return Err(Error::IndexOutOfRange {
                index: lambda,
                n: s.r,
            });
        }
        Ok(())
    }

    pub fn get(&self, holo: &MultiIndex, anti: &MultiIndex, lambda: usize) -> Result<C64> {
        self.check_slot(holo, anti, lambda)?;
        Ok(self.coeffs[self.space.slot_index(holo, anti, lambda)])
    }

    pub fn set(&mut self, holo: &MultiIndex, anti: &MultiIndex, lambda: usize, value: C64) -> Result<()> {
        self.check_slot(holo, anti, lambda)?;
        let idx = self.space.slot_index(holo, anti, lambda);
        self.coeffs[idx] = value;
        Ok(())
    }

    fn add_at(&mut self, holo: &MultiIndex, anti: &MultiIndex, lambda: usize, value: C64) {
        let idx = self.space.slot_index(holo, anti, lambda);
        self.coeffs[idx] += value;
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(format!(
                "{} vs {}",
                self.space, other.space
            )));
        }
        Ok(())
    }

    /// `⟨u, v⟩ = Σ u_slot · conj(v_slot)`.
    pub fn inner_product(&self, other: &Self) -> Result<C64> {
        self.same_space(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self {
            space: self.space,
            coeffs,
        })
    }

    pub fn scaled(&self, a: C64) -> Self {
        Self {
            space: self.space,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    fn nonzero_slots(&self) -> impl Iterator<Item = (Slot, C64)> + '_ {
        self.space
            .slots()
            .into_iter()
            .zip(self.coeffs.iter().copied())
            .filter(|(_, c)| *c != C64::new(0.0, 0.0))
    }

    /// `∂/∂z_s ⌟ u` or `∂/∂z̄_s ⌟ u`. `None` when the contracted degree is 0
    /// (the target space is trivial, so the result is zero).
    pub fn interior_product(&self, s: usize, factor: Factor) -> Result<Option<Self>> {
        let sp = self.space;
        if s == 0 || s > sp.n {
            return Err(Error::IndexOutOfRange { index: s, n: sp.n });
        }
        let target = match factor {
            Factor::Holomorphic if sp.p > 0 => sp.with_bidegree(sp.p - 1, sp.q),
            Factor::Antiholomorphic if sp.q > 0 => sp.with_bidegree(sp.p, sp.q - 1),
            _ => None,
        };
        let Some(target) = target else {
            return Ok(None);
        };
        let mut out = Self::zeros(target);
        for (slot, c) in self.nonzero_slots() {
            match factor {
                Factor::Holomorphic => {
                    if let Some(rest) = slot.holo.without(s) {
                        let e = f64::from(slot.holo.epsilon_unchecked(s));
                        out.add_at(&rest, &slot.anti, slot.fiber, c * e);
                    }
                }
                Factor::Antiholomorphic => {
                    if let Some(rest) = slot.anti.without(s) {
                        let e = parity(sp.p) * f64::from(slot.anti.epsilon_unchecked(s));
                        out.add_at(&slot.holo, &rest, slot.fiber, c * e);
                    }
                }
            }
        }
        Ok(Some(out))
    }

    /// `L u = ω ∧ u`. `None` when `p + 1 > n` or `q + 1 > n`.
    pub fn lefschetz(&self) -> Option<Self> {
        let sp = self.space;
        let target = sp.with_bidegree(sp.p + 1, sp.q + 1)?;
        let mut out = Self::zeros(target);
        // ω ∧ dz_J ∧ dz̄_K = i (-1)^p Σ_j (dz_j ∧ dz_J) ∧ (dz̄_j ∧ dz̄_K)
        let prefactor = C64::new(0.0, parity(sp.p));
        for (slot, c) in self.nonzero_slots() {
            for j in 1..=sp.n {
                let (Some((jj, sj)), Some((kk, sk))) =
                    (slot.holo.wedge_front(j), slot.anti.wedge_front(j))
                else {
                    continue;
                };
                out.add_at(&jj, &kk, slot.fiber, c * prefactor * f64::from(sj * sk));
            }
        }
        Some(out)
    }

    /// `Λ_ω u = i (-1)^p Σ_s u_{J,K,λ} (∂/∂z_s ⌟ dz_J) ∧ (∂/∂z̄_s ⌟ dz̄_K) ⊗ e_λ`.
    /// `None` when `p = 0` or `q = 0`.
    pub fn lambda_closed_form(&self) -> Option<Self> {
        let sp = self.space;
        if sp.p == 0 || sp.q == 0 {
            return None;
        }
        let target = sp.with_bidegree(sp.p - 1, sp.q - 1)?;
        let mut out = Self::zeros(target);
        let prefactor = C64::new(0.0, parity(sp.p));
        for (slot, c) in self.nonzero_slots() {
            for &s in slot.holo.entries() {
                let Some(k_rest) = slot.anti.without(s) else {
                    continue;
                };
                let j_rest = slot.holo.without(s).expect("s ∈ J");
                let sign = slot.holo.epsilon_unchecked(s) * slot.anti.epsilon_unchecked(s);
                out.add_at(&j_rest, &k_rest, slot.fiber, c * prefactor * f64::from(sign));
            }
        }
        Some(out)
    }

    /// Conjugate-linear Hodge star `Λ^{p,q} ⊗ E → Λ^{n-p,n-q} ⊗ E*`:
    /// slot `(J^C, K^C, λ)` receives `conj(u_{J,K,λ}) · C_{J,K}`.
    pub fn hodge_star(&self) -> Self {
        let sp = self.space;
        let target = FormSpace {
            p: sp.n - sp.p,
            q: sp.n - sp.q,
            fiber: sp.fiber.flipped(),
            ..sp
        };
        let mut out = Self::zeros(target);
        for (slot, c) in self.nonzero_slots() {
            let k = star_constant(sp.n, &slot.holo, &slot.anti);
            out.add_at(
                &slot.holo.complement(),
                &slot.anti.complement(),
                slot.fiber,
                c.conj() * k,
            );
        }
        out
    }

    /// Inverse of [`hodge_star`](Self::hodge_star): `(-1)^{p+q} ∗`, where `(p,q)`
    /// is the bidegree before starring, i.e. `(n - p', n - q')` of `self`.
    pub fn star_inverse(&self) -> Self {
        let sp = self.space;
        let original = (sp.n - sp.p) + (sp.n - sp.q);
        self.hodge_star().scaled(C64::new(parity(original), 0.0))
    }

    /// `ũ = Σ α(J) α(K) u_{J,K,λ} dz_{K^C} ∧ dz̄_{J^C} ⊗ e_λ`, bidegree `(n-q, n-p)`.
    pub fn tilde_map(&self) -> Self {
        let sp = self.space;
        let target = FormSpace {
            p: sp.n - sp.q,
            q: sp.n - sp.p,
            ..sp
        };
        let mut out = Self::zeros(target);
        for (slot, c) in self.nonzero_slots() {
            let sign = slot.holo.alpha() * slot.anti.alpha();
            out.add_at(
                &slot.anti.complement(),
                &slot.holo.complement(),
                slot.fiber,
                c * f64::from(sign),
            );
        }
        out
    }
}

/// Matrix `S` of the Hodge star on `space`, so that `∗u = S · conj(u)`.
pub fn hodge_star_matrix(space: &FormSpace) -> CMatrix {
    let target = FormSpace {
        p: space.n - space.p,
        q: space.n - space.q,
        fiber: space.fiber.flipped(),
        ..*space
    };
    // ∗ of a real basis vector is S·e_a
    space.matrix_of(&target, |b| b.hodge_star())
}

/// Matrix `T` of the tilde map on `space` (a signed permutation).
pub fn tilde_matrix(space: &FormSpace) -> CMatrix {
    let target = FormSpace {
        p: space.n - space.q,
        q: space.n - space.p,
        ..*space
    };
    space.matrix_of(&target, |b| b.tilde_map())
}

/// Matrix of [`BundleForm::lambda_closed_form`] on `space`; `None` if `p = 0` or `q = 0`.
pub fn lambda_closed_form_matrix(space: &FormSpace) -> Option<CMatrix> {
    let target = space.with_bidegree(space.p.checked_sub(1)?, space.q.checked_sub(1)?)?;
    Some(space.matrix_of(&target, |b| {
        b.lambda_closed_form().expect("p, q >= 1")
    }))
}

/// Matrix of [`BundleForm::lefschetz`] on `space`; `None` on degree overflow.
pub fn lefschetz_closed_form_matrix(space: &FormSpace) -> Option<CMatrix> {
    let target = space.with_bidegree(space.p + 1, space.q + 1)?;
    Some(space.matrix_of(&target, |b| b.lefschetz().expect("p, q < n")))
}
