//! Class functions on GL_n(q), stored as one value per class in the order
//! of [`enumerate_classes`](crate::matspace::enumerate_classes).

use num_complex::Complex64;

use crate::matspace::GroupClasses;

#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction<T> {
    pub q: u32,
    pub n: usize,
    pub values: Vec<T>,
}

impl<T: Copy> ClassFunction<T> {
    pub fn new(q: u32, n: usize, values: Vec<T>) -> Self {
        ClassFunction { q, n, values }
    }

    pub fn map<U>(&self, f: impl Fn(T) -> U) -> ClassFunction<U> {
        ClassFunction { q: self.q, n: self.n, values: self.values.iter().map(|&v| f(v)).collect() }
    }
}

impl ClassFunction<i128> {
    pub fn to_complex(&self) -> ClassFunction<Complex64> {
        self.map(|v| Complex64::new(v as f64, 0.0))
    }

    pub fn pointwise_mul(&self, other: &Self) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        ClassFunction { q: self.q, n: self.n, values }
    }
}

impl ClassFunction<Complex64> {
    pub fn constant(q: u32, n: usize, len: usize, c: Complex64) -> Self {
        ClassFunction { q, n, values: vec![c; len] }
    }

    pub fn zero(q: u32, n: usize, len: usize) -> Self {
        Self::constant(q, n, len, Complex64::new(0.0, 0.0))
    }

    pub fn add_scaled(&mut self, other: &Self, c: Complex64) {
        debug_assert_eq!(self.values.len(), other.values.len());
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// `max_c |self(c) - other(c)|`
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest distance from an exact integer-valued function.
    pub fn max_diff_exact(&self, other: &ClassFunction<i128>) -> f64 {
        self.max_diff(&other.to_complex())
    }
}

/// `<a, b> = (1/|G|) sum_g a(g) conj(b(g)) = sum_c a(c) conj(b(c)) / |C(g_c)|`
pub fn inner_product(a: &[Complex64], b: &[Complex64], classes: &GroupClasses) -> Complex64 {
    a.iter()
        .zip(b)
        .zip(&classes.centralizers)
        .map(|((x, y), &z)| x * y.conj() / z as f64)
        .sum()
}

/// `E[f] = <f, 1>`
pub fn expectation(a: &[Complex64], classes: &GroupClasses) -> Complex64 {
    a.iter().zip(&classes.centralizers).map(|(x, &z)| x / z as f64).sum()
}
