//! 2×2 complex matrices acting on spinors.

use std::ops::Mul;

use crate::C64;

/// A 2×2 complex matrix, row-major. Named for its role: every walk coin,
/// basis change and field coupling is one of these and is unitary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2(pub [[C64; 2]; 2]);

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

impl Unitary2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Unitary2([[a, b], [c, d]])
    }

    pub const fn identity() -> Self {
        Unitary2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn zero() -> Self {
        Unitary2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn sigma1() -> Self {
        Unitary2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn sigma2() -> Self {
        Unitary2([[ZERO, -I], [I, ZERO]])
    }

    pub fn sigma3() -> Self {
        Unitary2([[ONE, ZERO], [ZERO, -ONE]])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Unitary2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Unitary2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        Unitary2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        (*self * *other).sub(&(*other * *self))
    }

    #[inline]
    pub fn apply(&self, minus: C64, plus: C64) -> (C64, C64) {
        let m = &self.0;
        (
            m[0][0] * minus + m[0][1] * plus,
            m[1][0] * minus + m[1][1] * plus,
        )
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        let (a, b) = (&self.0, &rhs.0);
        Unitary2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (s1, s2, s3) = (Unitary2::sigma1(), Unitary2::sigma2(), Unitary2::sigma3());
        // σ1σ2 = iσ3
        assert!((s1 * s2).max_abs_diff(&s3.scale(I)) < 1e-15);
        assert!(s1.commutator(&s2).max_abs_diff(&s3.scale(2.0 * I)) < 1e-15);
        for s in [s1, s2, s3] {
            assert!(s.is_unitary(1e-15));
            assert!((s * s).max_abs_diff(&Unitary2::identity()) < 1e-15);
        }
    }

    #[test]
    fn dagger_of_product() {
        let a = Unitary2::new(
            C64::new(1.0, 2.0),
            C64::new(0.5, -1.0),
            C64::new(3.0, 0.0),
            C64::new(-1.0, 1.0),
        );
        let b = Unitary2::sigma2();
        assert!((a * b).dagger().max_abs_diff(&(b.dagger() * a.dagger())) < 1e-15);
    }
}
