//! Fixed-capacity state vectors for systems with at most three equations.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

/// Conserved variables of one state: `u` for Burgers, `(rho, rho u)` for
/// isentropic Euler, `(rho, rho u, rho E)` for full Euler.
#[derive(Clone, Copy, PartialEq)]
pub struct StateVector {
    len: usize,
    data: [f64; MAX_DIM],
}

impl StateVector {
    pub fn new(components: &[f64]) -> Self {
        assert!(
            !components.is_empty() && components.len() <= MAX_DIM,
            "state dimension must be in 1..={MAX_DIM}"
        );
        let mut data = [0.0; MAX_DIM];
        data[..components.len()].copy_from_slice(components);
        Self {
            len: components.len(),
            data,
        }
    }

    pub fn try_new(components: &[f64]) -> Result<Self> {
        if components.is_empty() || components.len() > MAX_DIM {
            return Err(Error::InvalidState(format!(
                "dimension {} not in 1..={MAX_DIM}",
                components.len()
            )));
        }
        let s = Self::new(components);
        s.check_finite()?;
        Ok(s)
    }

    pub fn scalar(u: f64) -> Self {
        Self::new(&[u])
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(&vec![0.0; dim])
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize) -> f64) -> Self {
        let mut s = Self::zeros(dim);
        for i in 0..dim {
            s.data[i] = f(i);
        }
        s
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data[..self.len]
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|v| v.is_finite())
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidState(format!("non-finite components {self:?}")))
        }
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.len, other.len);
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| a * b)
            .sum()
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(self.len, |i| f(self.data[i]))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

impl Index<usize> for StateVector {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl IndexMut<usize> for StateVector {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        let len = self.len;
        &mut self.data[..len][i]
    }
}

impl Add for StateVector {
    type Output = Self;
    #[inline]
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for StateVector {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..self.len {
            self.data[i] += rhs.data[i];
        }
    }
}

impl Sub for StateVector {
    type Output = Self;
    #[inline]
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for StateVector {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..self.len {
            self.data[i] -= rhs.data[i];
        }
    }
}

impl Mul<f64> for StateVector {
    type Output = Self;
    #[inline]
    fn mul(mut self, k: f64) -> Self {
        for i in 0..self.len {
            self.data[i] *= k;
        }
        self
    }
}

impl Mul<StateVector> for f64 {
    type Output = StateVector;
    #[inline]
    fn mul(self, s: StateVector) -> StateVector {
        s * self
    }
}

impl Neg for StateVector {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_slice().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(deserializer)?;
        StateVector::try_new(&v).map_err(serde::de::Error::custom)
    }
}
