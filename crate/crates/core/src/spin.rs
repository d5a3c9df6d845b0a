//! Local spin-s operators, coherent states and y-axis rotations.
//!
//! Spins are labelled by the integer 2s so that half-integer values stay
//! exact. The local basis is |k⟩, k = 0..2s, with sᶻ|k⟩ = (k−s)|k⟩, i.e.
//! |0⟩ is the minimum-weight state.

use nalgebra::{Complex, DMatrix, DVector};

/// A spin quantum number stored as 2s.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinValue {
    twice_s: u32,
}

impl SpinValue {
    /// Spin from 2s. Returns `None` for 2s = 0 (dimension < 2).
    pub fn from_twice(twice_s: u32) -> Option<Self> {
        (twice_s >= 1).then_some(Self { twice_s })
    }

    /// Spin-1/2.
    pub const HALF: SpinValue = SpinValue { twice_s: 1 };
    /// Spin-1.
    pub const ONE: SpinValue = SpinValue { twice_s: 2 };

    pub fn twice(self) -> u32 {
        self.twice_s
    }

    /// The spin value s as a float.
    pub fn s(self) -> f64 {
        self.twice_s as f64 / 2.0
    }

    /// Local Hilbert-space dimension d = 2s + 1.
    pub fn dim(self) -> usize {
        self.twice_s as usize + 1
    }

    /// Ladder coefficient √((k+1)(2s−k)) for s⁺|k⟩ = c|k+1⟩.
    pub fn raise_coeff(self, k: usize) -> f64 {
        debug_assert!(k + 1 < self.dim());
        (((k + 1) as f64) * ((self.twice_s as usize - k) as f64)).sqrt()
    }

    /// Ladder coefficient for s⁻|k⟩ = c|k−1⟩; equals `raise_coeff(k−1)`.
    pub fn lower_coeff(self, k: usize) -> f64 {
        debug_assert!(k >= 1 && k < self.dim());
        self.raise_coeff(k - 1)
    }

    /// sᶻ eigenvalue of |k⟩, i.e. k − s.
    pub fn sz_value(self, k: usize) -> f64 {
        k as f64 - self.s()
    }
}

/// The local operator matrices of one spin. Everything except sʸ is real in
/// this basis; sʸ is purely imaginary and exposed through [`SpinOperators::sy`].
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub sz: DMatrix<f64>,
    pub splus: DMatrix<f64>,
    pub sminus: DMatrix<f64>,
    pub sx: DMatrix<f64>,
}

/// Build sᶻ, s± and sˣ for one spin.
pub fn spin_operators(s: SpinValue) -> SpinOperators {
    let d = s.dim();
    let sz = DMatrix::from_diagonal(&DVector::from_fn(d, |k, _| s.sz_value(k)));
    let mut splus = DMatrix::zeros(d, d);
    for k in 0..d - 1 {
        splus[(k + 1, k)] = s.raise_coeff(k);
    }
    let sminus = splus.transpose();
    let sx = (&splus + &sminus) * 0.5;
    SpinOperators { sz, splus, sminus, sx }
}

impl SpinOperators {
    /// sʸ = (s⁺ − s⁻)/(2i), the only complex operator of the set.
    pub fn sy(&self) -> DMatrix<Complex<f64>> {
        let d = self.sz.nrows();
        DMatrix::from_fn(d, d, |r, c| {
            Complex::new(0.0, -(self.splus[(r, c)] - self.sminus[(r, c)]) / 2.0)
        })
    }

    /// The real antisymmetric generator A = (s⁺ − s⁻)/2, so that
    /// exp(iθ sʸ) = exp(θ A).
    pub fn y_generator(&self) -> DMatrix<f64> {
        (&self.splus - &self.sminus) * 0.5
    }
}

/// Rotation exp(iθ sʸ) as a real orthogonal d×d matrix.
///
/// Column 0 is the coherent state [`coherent_local`]`(s, θ)`.
pub fn rotation_y(s: SpinValue, theta: f64) -> DMatrix<f64> {
    let a = spin_operators(s).y_generator() * theta;
    a.exp()
}

/// Spin coherent state exp(iθ sʸ)|0⟩ with components
/// √(C(2s,k)) cos^{2s−k}(θ/2) sin^k(θ/2).
pub fn coherent_local(s: SpinValue, theta: f64) -> DVector<f64> {
    let n = s.twice() as usize;
    let (c, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    DVector::from_fn(n + 1, |k, _| {
        binomial(n, k).sqrt() * c.powi((n - k) as i32) * sn.powi(k as i32)
    })
}

/// Binomial coefficient as f64; exact for the operand ranges used here.
fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Global phase-flip sign (−1)^Σkᵢ of one basis digit string.
pub fn parity_sign(digits: &[usize]) -> i32 {
    if digits.iter().sum::<usize>() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::Complex;

    #[test]
    fn half_spin_operators() {
        let ops = spin_operators(SpinValue::HALF);
        assert_abs_diff_eq!(ops.sz[(0, 0)], -0.5);
        assert_abs_diff_eq!(ops.sz[(1, 1)], 0.5);
        assert_abs_diff_eq!(ops.splus[(1, 0)], 1.0);
        assert_abs_diff_eq!(ops.splus[(0, 1)], 0.0);
    }

    #[test]
    fn spin_one_ladder() {
        let ops = spin_operators(SpinValue::ONE);
        assert_abs_diff_eq!(ops.sz[(0, 0)], -1.0);
        assert_abs_diff_eq!(ops.sz[(1, 1)], 0.0);
        assert_abs_diff_eq!(ops.sz[(2, 2)], 1.0);
        assert_abs_diff_eq!(ops.splus[(1, 0)], 2.0f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(ops.splus[(2, 1)], 2.0f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn casimir_three_halves() {
        // sx² + sy² + sz² = s(s+1) I, checked by direct matrix arithmetic.
        let s = SpinValue::from_twice(3).unwrap();
        let ops = spin_operators(s);
        let sy = ops.sy();
        let sx = ops.sx.map(|x| Complex::new(x, 0.0));
        let sz = ops.sz.map(|x| Complex::new(x, 0.0));
        let casimir = &sx * &sx + &sy * &sy + &sz * &sz;
        for r in 0..4 {
            for c in 0..4 {
                let expect = if r == c { 15.0 / 4.0 } else { 0.0 };
                assert_abs_diff_eq!(casimir[(r, c)].re, expect, epsilon = 1e-12);
                assert_abs_diff_eq!(casimir[(r, c)].im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn angular_momentum_algebra() {
        // [sx, sy] = i sz (and cyclic) up to s = 5/2.
        for twice_s in 1..=5 {
            let ops = spin_operators(SpinValue::from_twice(twice_s).unwrap());
            let sx = ops.sx.map(|x| Complex::new(x, 0.0));
            let sz = ops.sz.map(|x| Complex::new(x, 0.0));
            let sy = ops.sy();
            let comm_xy = &sx * &sy - &sy * &sx;
            let comm_yz = &sy * &sz - &sz * &sy;
            let comm_zx = &sz * &sx - &sx * &sz;
            let i = Complex::new(0.0, 1.0);
            assert!((&comm_xy - &sz * i).norm() < 1e-12, "2s={twice_s}");
            assert!((&comm_yz - &sx * i).norm() < 1e-12, "2s={twice_s}");
            assert!((&comm_zx - &sy * i).norm() < 1e-12, "2s={twice_s}");
        }
    }

    #[test]
    fn rotation_identity_at_zero() {
        let r = rotation_y(SpinValue::ONE, 0.0);
        assert!((r - DMatrix::<f64>::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn rotation_half_spin_pi() {
        // exp(iπ sʸ) for s=1/2, by hand: [[0, −1], [1, 0]].
        let r = rotation_y(SpinValue::HALF, std::f64::consts::PI);
        assert_abs_diff_eq!(r[(0, 0)], 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r[(1, 0)], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r[(0, 1)], -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r[(1, 1)], 0.0, epsilon = 1e-13);
        let det = r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)];
        assert_abs_diff_eq!(det, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn rotation_one_parameter_group() {
        for (twice_s, t1, t2) in [(1u32, 0.3, 1.1), (2, -0.7, 2.2), (4, 1.9, -2.5)] {
            let s = SpinValue::from_twice(twice_s).unwrap();
            let lhs = rotation_y(s, t1) * rotation_y(s, t2);
            let rhs = rotation_y(s, t1 + t2);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn rotation_is_orthogonal_and_matches_coherent_column() {
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            // xorshift; enough for test parameter sampling
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let twice_s = 1 + (next() * 5.0) as u32;
            let s = SpinValue::from_twice(twice_s).unwrap();
            let theta = (next() - 0.5) * 2.0 * std::f64::consts::PI;
            let r = rotation_y(s, theta);
            let gram = &r * r.transpose();
            assert!(
                (gram - DMatrix::<f64>::identity(s.dim(), s.dim())).norm() < 1e-12,
                "R Rᵀ ≠ I for 2s={twice_s}, θ={theta}"
            );
            let col0 = r.column(0).into_owned();
            let coh = coherent_local(s, theta);
            assert!((col0 - coh).norm() < 1e-12);
        }
    }

    #[test]
    fn coherent_special_values() {
        let v = coherent_local(SpinValue::ONE, 0.0);
        assert_abs_diff_eq!(v[0], 1.0);
        assert_abs_diff_eq!(v[1], 0.0);
        assert_abs_diff_eq!(v[2], 0.0);

        let v = coherent_local(SpinValue::HALF, std::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(v[0], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);

        // direct evaluation for s=1, θ=π/2: (1/2, 1/√2, 1/2)
        let v = coherent_local(SpinValue::ONE, std::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(v[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(v[2], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn coherent_is_normalized() {
        for twice_s in [1u32, 2, 3, 7] {
            let s = SpinValue::from_twice(twice_s).unwrap();
            for theta in [-2.9, -0.4, 0.0, 0.7, 1.57, 3.1] {
                let v = coherent_local(s, theta);
                assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn parity_signs() {
        assert_eq!(parity_sign(&[0, 0, 0]), 1);
        assert_eq!(parity_sign(&[1]), -1);
        assert_eq!(parity_sign(&[1, 2, 0]), -1);
        assert_eq!(parity_sign(&[2, 2]), 1);
    }
}
