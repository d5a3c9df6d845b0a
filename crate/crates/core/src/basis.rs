//! Mixed-radix many-body basis indexing with parity grading.
//!
//! Basis states are digit strings (k₀, …, k_{n−1}) with kᵢ < dᵢ; site 0 is
//! the slowest-varying digit, so strides decrease with the site index.

use nalgebra::DVector;

/// Parity quantum number under the global phase flip (−1)^Σkᵢ.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn from_sign(sign: i32) -> Option<Parity> {
        match sign {
            1 => Some(Parity::Even),
            -1 => Some(Parity::Odd),
            _ => None,
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Even => write!(f, "+1"),
            Parity::Odd => write!(f, "-1"),
        }
    }
}

/// Tensor-product index space of a list of local dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSpace {
    local_dims: Vec<usize>,
    strides: Vec<usize>,
    total_dim: usize,
}

impl HilbertSpace {
    /// Build the space; panics if a local dimension is < 2 or the total
    /// dimension overflows usize.
    pub fn new(local_dims: Vec<usize>) -> Self {
        assert!(!local_dims.is_empty(), "empty site list");
        assert!(local_dims.iter().all(|&d| d >= 2), "local dimension < 2");
        let mut strides = vec![0usize; local_dims.len()];
        let mut acc = 1usize;
        for i in (0..local_dims.len()).rev() {
            strides[i] = acc;
            acc = acc.checked_mul(local_dims[i]).expect("dimension overflow");
        }
        Self { local_dims, strides, total_dim: acc }
    }

    pub fn n_sites(&self) -> usize {
        self.local_dims.len()
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Flat index of a digit string.
    pub fn encode(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.local_dims.len());
        let mut idx = 0;
        for ((&k, &st), &d) in digits.iter().zip(&self.strides).zip(&self.local_dims) {
            debug_assert!(k < d);
            idx += k * st;
        }
        idx
    }

    /// Digit string of a flat index.
    pub fn decode(&self, index: usize) -> Vec<usize> {
        debug_assert!(index < self.total_dim);
        self.strides
            .iter()
            .zip(&self.local_dims)
            .map(|(&st, &d)| index / st % d)
            .collect()
    }

    /// Digit of `index` at one site.
    pub fn digit(&self, index: usize, site: usize) -> usize {
        index / self.strides[site] % self.local_dims[site]
    }

    /// Parity sign (−1)^Σkᵢ of a flat index.
    pub fn parity_of(&self, index: usize) -> i32 {
        let mut sum = 0usize;
        for (st, d) in self.strides.iter().zip(&self.local_dims) {
            sum += index / st % d;
        }
        if sum.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Sorted basis indices belonging to one parity sector. The two sectors
    /// partition the basis.
    pub fn sector(&self, parity: Parity) -> Vec<usize> {
        let want = parity.sign();
        (0..self.total_dim).filter(|&x| self.parity_of(x) == want).collect()
    }

    /// Iterate digit strings in index order without re-decoding.
    pub fn iter_digits(&self) -> DigitIter<'_> {
        DigitIter { space: self, digits: vec![0; self.local_dims.len()], exhausted: false }
    }
}

/// Mixed-radix odometer over all digit strings.
pub struct DigitIter<'a> {
    space: &'a HilbertSpace,
    digits: Vec<usize>,
    exhausted: bool,
}

impl Iterator for DigitIter<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.exhausted {
            return None;
        }
        let out = self.digits.clone();
        // increment fastest (last) digit with carries toward site 0
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.exhausted = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.space.local_dims[i] {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// Tensor product of local state vectors, site 0 slowest.
pub fn tensor_product_state(locals: &[DVector<f64>]) -> Vec<f64> {
    let mut out = vec![1.0f64];
    for v in locals {
        let mut next = Vec::with_capacity(out.len() * v.len());
        for &a in &out {
            for &b in v.iter() {
                next.push(a * b);
            }
        }
        out = next;
    }
    out
}

/// Sign-weighted parity expectation ⟨ψ|P|ψ⟩ of a (not necessarily definite
/// parity) state.
pub fn parity_expectation(space: &HilbertSpace, psi: &[f64]) -> f64 {
    psi.iter()
        .enumerate()
        .map(|(x, &a)| space.parity_of(x) as f64 * a * a)
        .sum()
}
