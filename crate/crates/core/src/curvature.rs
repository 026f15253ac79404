//! Curvature tensors at a point and the closed-form curvature operator
//! `A^{p,q} = [iΘ, Λ_ω]` on bundle-valued `(p,q)`-forms.

use crate::forms::{BundleForm, Fiber, FormSpace};
use crate::multiindex::{enumerate_indices, MultiIndex};
use crate::{CMatrix, Error, Result, C64};

/// Relative Hermitian-symmetry tolerance used when an operation needs a valid tensor.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-12;

/// How [`CurvatureTensor::validate`] treats a symmetry defect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SymmetryMode {
    /// Reject tensors whose defect exceeds the tolerance.
    #[default]
    Strict,
    /// Replace the tensor by its Hermitian part first.
    Symmetrize,
}

/// Coefficients `c_{jkλμ}` of `iΘ = i Σ c_{jkλμ} dz_j ∧ dz̄_k ⊗ e*_λ ⊗ e_μ`.
///
/// Hermitian symmetry means `conj(c_{jkλμ}) = c_{kjμλ}`. Indices are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    r: usize,
    data: Vec<C64>,
}

impl CurvatureTensor {
    pub fn zeros(n: usize, r: usize) -> Self {
        assert!(n > 0 && r > 0, "dimension and rank must be positive");
        Self {
            n,
            r,
            data: vec![C64::new(0.0, 0.0); n * n * r * r],
        }
    }

    /// Builds `c_{jkλμ} = f(j, k, λ, μ)` (1-based arguments).
    pub fn from_fn<F>(n: usize, r: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize, usize, usize) -> C64,
    {
        let mut out = Self::zeros(n, r);
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=r {
                    for m in 1..=r {
                        let idx = out.offset(j, k, l, m);
                        out.data[idx] = f(j, k, l, m);
                    }
                }
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    #[inline]
    fn offset(&self, j: usize, k: usize, l: usize, m: usize) -> usize {
        (((j - 1) * self.n + (k - 1)) * self.r + (l - 1)) * self.r + (m - 1)
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize, l: usize, m: usize) -> C64 {
        self.data[self.offset(j, k, l, m)]
    }

    pub fn set(&mut self, j: usize, k: usize, l: usize, m: usize, value: C64) -> Result<()> {
        for (idx, bound) in [(j, self.n), (k, self.n), (l, self.r), (m, self.r)] {
            if idx == 0 || idx > bound {
                return Err(Error::IndexOutOfRange { index: idx, n: bound });
            }
        }
        let o = self.offset(j, k, l, m);
        self.data[o] = value;
        Ok(())
    }

    /// `max |c_{jkλμ}|`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `|conj(c_{jkλμ}) - c_{kjμλ}|` and where it occurs.
    pub fn symmetry_defect(&self) -> (f64, (usize, usize, usize, usize)) {
        let mut worst = (0.0, (1, 1, 1, 1));
        for j in 1..=self.n {
            for k in 1..=self.n {
                for l in 1..=self.r {
                    for m in 1..=self.r {
                        let d = (self.get(j, k, l, m).conj() - self.get(k, j, m, l)).norm();
                        if d > worst.0 {
                            worst = (d, (j, k, l, m));
                        }
                    }
                }
            }
        }
        worst
    }

    /// `(c + c^†) / 2` with `c^†_{jkλμ} = conj(c_{kjμλ})`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.n, self.r, |j, k, l, m| {
            (self.get(j, k, l, m) + self.get(k, j, m, l).conj()) * 0.5
        })
    }

    /// Accepts the tensor if its symmetry defect is at most `tol · (1 + max|c|)`.
    pub fn validate(&self, tol: f64, mode: SymmetryMode) -> Result<Self> {
        let candidate = match mode {
            SymmetryMode::Strict => self.clone(),
            SymmetryMode::Symmetrize => self.hermitian_part(),
        };
        let (defect, at) = candidate.symmetry_defect();
        let bound = tol * (1.0 + candidate.max_abs());
        if defect > bound {
            return Err(Error::NotHermitian { defect, at, bound });
        }
        Ok(candidate)
    }

    fn check_hermitian(&self) -> Result<()> {
        self.validate(DEFAULT_SYMMETRY_TOL, SymmetryMode::Strict).map(|_| ())
    }

    /// Curvature of the dual bundle: `c*_{jkλμ} = -c_{jkμλ}`.
    pub fn dual(&self) -> Self {
        Self::from_fn(self.n, self.r, |j, k, l, m| -self.get(j, k, m, l))
    }

    /// Fiber endomorphism `(C_{jk})_{μλ} = c_{jkλμ}`, mapping `e_λ ↦ Σ_μ c_{jkλμ} e_μ`.
    pub fn fiber_block(&self, j: usize, k: usize) -> CMatrix {
        CMatrix::from_fn(self.r, self.r, |m, l| self.get(j, k, l + 1, m + 1))
    }

    fn check_space(&self, space: &FormSpace) -> Result<()> {
        if space.n() != self.n || space.rank() != self.r {
            return Err(Error::SpaceMismatch(format!(
                "tensor has n = {}, r = {} but form lives in {space}",
                self.n, self.r
            )));
        }
        Ok(())
    }
}

/// Free-function form of [`CurvatureTensor::dual`].
pub fn dual_tensor(c: &CurvatureTensor) -> CurvatureTensor {
    c.dual()
}

/// Matrix of a curvature operator on the canonical basis of `space`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub space: FormSpace,
    pub matrix: CMatrix,
}

impl OperatorMatrix {
    pub fn bidegree(&self) -> (usize, usize) {
        self.space.bidegree()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |M_{ab} - conj(M_{ba})|`.
    pub fn hermitian_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }
}

/// Diagonal coefficient `(Σ_{j∈J} + Σ_{j∈K} - Σ_{j=1..n}) c_{jjλμ}`.
fn diagonal_weight(c: &CurvatureTensor, holo: &MultiIndex, anti: &MultiIndex, l: usize, m: usize) -> C64 {
    let in_j: C64 = holo.entries().iter().map(|&j| c.get(j, j, l, m)).sum();
    let in_k: C64 = anti.entries().iter().map(|&j| c.get(j, j, l, m)).sum();
    let all: C64 = (1..=c.n).map(|j| c.get(j, j, l, m)).sum();
    in_j + in_k - all
}

/// `[iΘ, Λ_ω] u` in closed form.
///
/// Three groups contribute: the diagonal weight on the same slot, the exchange
/// `dz̄_j → dz̄_k` inside `K` and the exchange `dz_k → dz_j` inside `J`.
/// For forms with values in `E*`, pass [`CurvatureTensor::dual`].
pub fn apply_operator(c: &CurvatureTensor, u: &BundleForm) -> Result<BundleForm> {
    let space = *u.space();
    c.check_space(&space)?;
    let n = c.n;
    let r = c.r;
    let coeffs = u.coeffs();
    let mut out = vec![C64::new(0.0, 0.0); space.dim()];
    for slot in space.slots() {
        let x = coeffs[space.slot_index(&slot.holo, &slot.anti, slot.fiber)];
        if x == C64::new(0.0, 0.0) {
            continue;
        }
        let l = slot.fiber;
        for m in 1..=r {
            let w = diagonal_weight(c, &slot.holo, &slot.anti, l, m);
            out[space.slot_index(&slot.holo, &slot.anti, m)] += w * x;
        }
        // dz_J ∧ dz̄_k ∧ dz̄_{K∖j}, j ∈ K, k ∉ K
        for &j in slot.anti.entries() {
            let e_j = f64::from(slot.anti.epsilon_unchecked(j));
            let rest = slot.anti.without(j).expect("j ∈ K");
            for k in (1..=n).filter(|k| !slot.anti.contains(*k)) {
                let (new_anti, e_k) = rest.wedge_front(k).expect("k ∉ K∖j");
                let sign = e_j * f64::from(e_k);
                for m in 1..=r {
                    out[space.slot_index(&slot.holo, &new_anti, m)] += c.get(j, k, l, m) * x * sign;
                }
            }
        }
        // dz_j ∧ dz_{J∖k} ∧ dz̄_K, k ∈ J, j ∉ J
        for &k in slot.holo.entries() {
            let e_k = f64::from(slot.holo.epsilon_unchecked(k));
            let rest = slot.holo.without(k).expect("k ∈ J");
            for j in (1..=n).filter(|j| !slot.holo.contains(*j)) {
                let (new_holo, e_j) = rest.wedge_front(j).expect("j ∉ J∖k");
                let sign = e_k * f64::from(e_j);
                for m in 1..=r {
                    out[space.slot_index(&new_holo, &slot.anti, m)] += c.get(j, k, l, m) * x * sign;
                }
            }
        }
    }
    BundleForm::from_coeffs(space, out)
}

/// `⟨[iΘ, Λ_ω] u, u⟩` evaluated directly as a sum over slot pairs, without
/// going through [`apply_operator`]. The imaginary part is returned unchanged
/// so callers can check that it vanishes.
pub fn quadratic_form_complex(c: &CurvatureTensor, u: &BundleForm) -> Result<C64> {
    let space = *u.space();
    c.check_space(&space)?;
    let (n, r) = (c.n, c.r);
    let holo = enumerate_indices(n, space.p())?;
    let anti = enumerate_indices(n, space.q())?;
    let coef = |j: &MultiIndex, k: &MultiIndex, l: usize| u.coeffs()[space.slot_index(j, k, l)];
    let mut total = C64::new(0.0, 0.0);

    // Σ (Σ_{j∈J} + Σ_{j∈K} - Σ_j) c_{jjλμ} u_{J,K,λ} conj(u_{J,K,μ})
    for jj in &holo {
        for kk in &anti {
            for l in 1..=r {
                for m in 1..=r {
                    total += diagonal_weight(c, jj, kk, l, m) * coef(jj, kk, l) * coef(jj, kk, m).conj();
                }
            }
        }
    }

    // Σ_{j≠k, K∖j = M∖k} c_{jkλμ} u_{J,K,λ} conj(u_{J,M,μ}) ε(j,K) ε(k,M)
    for jj in &holo {
        for kk in &anti {
            for mm in &anti {
                for j in 1..=n {
                    for k in (1..=n).filter(|&k| k != j) {
                        let sign = kk.epsilon_unchecked(j) * mm.epsilon_unchecked(k);
                        if sign == 0 || kk.without(j) != mm.without(k) {
                            continue;
                        }
                        for l in 1..=r {
                            for m in 1..=r {
                                total += c.get(j, k, l, m)
                                    * coef(jj, kk, l)
                                    * coef(jj, mm, m).conj()
                                    * f64::from(sign);
                            }
                        }
                    }
                }
            }
        }
    }

    // Σ_{j≠k, L∖k = J∖j} c_{jkλμ} u_{L,K,λ} conj(u_{J,K,μ}) ε(k,L) ε(j,J)
    for ll in &holo {
        for jj in &holo {
            for kk in &anti {
                for j in 1..=n {
                    for k in (1..=n).filter(|&k| k != j) {
                        let sign = ll.epsilon_unchecked(k) * jj.epsilon_unchecked(j);
                        if sign == 0 || ll.without(k) != jj.without(j) {
                            continue;
                        }
                        for l in 1..=r {
                            for m in 1..=r {
                                total += c.get(j, k, l, m)
                                    * coef(ll, kk, l)
                                    * coef(jj, kk, m).conj()
                                    * f64::from(sign);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Real part of [`quadratic_form_complex`].
pub fn quadratic_form(c: &CurvatureTensor, u: &BundleForm) -> Result<f64> {
    quadratic_form_complex(c, u).map(|z| z.re)
}

/// `A^{p,q}` on `Λ^{p,q} ⊗ E`, column by column.
pub fn operator_matrix(c: &CurvatureTensor, p: usize, q: usize) -> Result<OperatorMatrix> {
    let space = FormSpace::new(c.n, c.r, p, q, Fiber::Bundle)?;
    operator_matrix_on(c, &space)
}

/// `A^{p,q}` on an explicit space (use the dual tensor for `E*`-valued spaces).
pub fn operator_matrix_on(c: &CurvatureTensor, space: &FormSpace) -> Result<OperatorMatrix> {
    c.check_hermitian()?;
    c.check_space(space)?;
    let matrix = space.matrix_of(space, |b| apply_operator(c, b).expect("space checked"));
    Ok(OperatorMatrix {
        space: *space,
        matrix,
    })
}

/// Matrix of the Hermitian form `θ(u,u) = Σ c_{jkλμ} u_{jλ} conj(u_{kμ})` on `T_X ⊗ E`,
/// as an operator: `θ(u,u) = ⟨N u, u⟩`, i.e. `N[(k,μ),(j,λ)] = c_{jkλμ}`.
///
/// Basis order is `(j, λ)` with `λ` fastest.
pub fn nakano_matrix(c: &CurvatureTensor) -> CMatrix {
    let r = c.r;
    CMatrix::from_fn(c.n * r, c.n * r, |row, col| {
        let (k, m) = (row / r + 1, row % r + 1);
        let (j, l) = (col / r + 1, col % r + 1);
        c.get(j, k, l, m)
    })
}
