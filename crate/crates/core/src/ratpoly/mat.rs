use std::fmt;

use num_traits::{One, Zero};

use super::rat::{format_rat, Rat};

/// Exact 2×2 rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[Rat; 2]; 2]);

impl Mat2 {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Self::new(Rat::one(), Rat::zero(), Rat::zero(), Rat::one())
    }

    pub fn zero() -> Self {
        Self::new(Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn diag(a: Rat, d: Rat) -> Self {
        Self::new(a, Rat::zero(), Rat::zero(), d)
    }

    pub fn get(&self, row: usize, col: usize) -> &Rat {
        &self.0[row][col]
    }

    pub fn trace(&self) -> Rat {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn det(&self) -> Rat {
        &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0]
    }

    /// Classical adjugate, `adj(M)·M = det(M)·I`.
    pub fn adjugate(&self) -> Self {
        let [[a, b], [c, d]] = &self.0;
        Self::new(d.clone(), -b.clone(), -c.clone(), a.clone())
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let adj = self.adjugate();
        Some(adj.scale(&(Rat::one() / det)))
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = &self.0;
        Self::new(a.clone(), c.clone(), b.clone(), d.clone())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let [[a, b], [c, d]] = &self.0;
        Self::new(a * k, b * k, c * k, d * k)
    }

    pub fn mul(&self, rhs: &Mat2) -> Self {
        let m = &self.0;
        let n = &rhs.0;
        let e = |i: usize, j: usize| &m[i][0] * &n[0][j] + &m[i][1] * &n[1][j];
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn mul_vec(&self, v: &[Rat; 2]) -> [Rat; 2] {
        let m = &self.0;
        [&m[0][0] * &v[0] + &m[0][1] * &v[1], &m[1][0] * &v[0] + &m[1][1] * &v[1]]
    }

    pub fn is_diagonal(&self) -> bool {
        self.0[0][1].is_zero() && self.0[1][0].is_zero()
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        let f = super::rat::to_f64;
        [
            [f(&self.0[0][0]), f(&self.0[0][1])],
            [f(&self.0[1][0]), f(&self.0[1][1])],
        ]
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            format_rat(&self.0[0][0]),
            format_rat(&self.0[0][1]),
            format_rat(&self.0[1][0]),
            format_rat(&self.0[1][1])
        )
    }
}
