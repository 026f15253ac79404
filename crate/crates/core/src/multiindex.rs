//! Ordered multi-indices and the sign bookkeeping of the exterior algebra.
//!
//! A [`MultiIndex`] `I = {i_1 < … < i_p} ⊂ {1, …, n}` labels the monomial
//! `dz_I = dz_{i_1} ∧ … ∧ dz_{i_p}`. Entries are 1-based.

use std::fmt;

use crate::{Error, Result};

/// Strictly increasing subset of `{1, …, n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    n: usize,
    entries: Vec<usize>,
}

impl MultiIndex {
    pub fn new(n: usize, entries: Vec<usize>) -> Result<Self> {
        if entries.len() > n {
            return Err(Error::DegreeTooLarge {
                degree: entries.len(),
                n,
            });
        }
        for &e in &entries {
            if e == 0 || e > n {
                return Err(Error::IndexOutOfRange { index: e, n });
            }
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing { entries, n });
        }
        Ok(Self { n, entries })
    }

    /// The degree-0 index `{}`.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            entries: Vec::new(),
        }
    }

    /// `N = {1, …, n}`.
    pub fn full(n: usize) -> Self {
        Self {
            n,
            entries: (1..=n).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn contains(&self, s: usize) -> bool {
        self.entries.binary_search(&s).is_ok()
    }

    fn check_coordinate(&self, s: usize) -> Result<()> {
        if s == 0 || s > self.n {
            Err(Error::IndexOutOfRange { index: s, n: self.n })
        } else {
            Ok(())
        }
    }

    /// `ε(s, I)`: the sign in `∂/∂z_s ⌟ dz_I = ε(s, I) dz_{I∖s}`.
    ///
    /// Zero when `s ∉ I`, otherwise `(-1)^{k-1}` where `s` is the k-th smallest entry.
    pub fn epsilon(&self, s: usize) -> Result<i32> {
        self.check_coordinate(s)?;
        Ok(self.epsilon_unchecked(s))
    }

    pub(crate) fn epsilon_unchecked(&self, s: usize) -> i32 {
        match self.entries.binary_search(&s) {
            Ok(pos) if pos % 2 == 0 => 1,
            Ok(_) => -1,
            Err(_) => 0,
        }
    }

    /// `I^C`, increasing.
    pub fn complement(&self) -> Self {
        let entries = (1..=self.n).filter(|s| !self.contains(*s)).collect();
        Self { n: self.n, entries }
    }

    /// `sgn(I, I^C)`: signature of the permutation `(1, …, n) → (I, I^C)`.
    ///
    /// The k-th entry of `I` jumps over the `i_k - k` complement entries below it.
    pub fn sgn_complement(&self) -> i32 {
        let jumps: usize = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, &i)| i - (k + 1))
            .sum();
        if jumps.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `α(I) = sgn(I, I^C) · (-1)^{|I|}`.
    pub fn alpha(&self) -> i32 {
        let parity = if self.degree().is_multiple_of(2) { 1 } else { -1 };
        self.sgn_complement() * parity
    }

    /// `I ∖ {s}`, or `None` if `s ∉ I`.
    pub fn without(&self, s: usize) -> Option<Self> {
        let pos = self.entries.binary_search(&s).ok()?;
        let mut entries = self.entries.clone();
        entries.remove(pos);
        Some(Self { n: self.n, entries })
    }

    /// `I ∪ {s}`, or `None` if `s ∈ I` (or out of range).
    pub fn with(&self, s: usize) -> Option<Self> {
        if s == 0 || s > self.n {
            return None;
        }
        let pos = self.entries.binary_search(&s).err()?;
        let mut entries = self.entries.clone();
        entries.insert(pos, s);
        Some(Self { n: self.n, entries })
    }

    /// `dz_s ∧ dz_I = sign · dz_{I∪s}`; `None` when `s ∈ I`.
    pub fn wedge_front(&self, s: usize) -> Option<(Self, i32)> {
        let joined = self.with(s)?;
        let sign = joined.epsilon_unchecked(s);
        Some((joined, sign))
    }

    /// Position of `I` in the lexicographic enumeration of degree-`|I|` indices.
    pub fn lex_rank(&self) -> usize {
        let n = self.n;
        let d = self.degree();
        let tail: usize = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, &i)| binomial(n - i, d - k))
            .sum();
        binomial(n, d) - 1 - tail
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All degree-`d` multi-indices of `{1, …, n}` in lexicographic order.
pub fn enumerate_indices(n: usize, d: usize) -> Result<Vec<MultiIndex>> {
    if d > n {
        return Err(Error::DegreeTooLarge { degree: d, n });
    }
    let mut out = Vec::with_capacity(binomial(n, d));
    let mut current: Vec<usize> = (1..=d).collect();
    loop {
        out.push(MultiIndex {
            n,
            entries: current.clone(),
        });
        // advance the rightmost entry that still has room
        let Some(pos) = (0..d).rev().find(|&i| current[i] < n - (d - 1 - i)) else {
            break;
        };
        current[pos] += 1;
        for i in pos + 1..d {
            current[i] = current[i - 1] + 1;
        }
    }
    Ok(out)
}
