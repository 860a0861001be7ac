//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::numerics::rational::{to_f64, Rational};

/// Exponent multi-index.
pub type Exponent = Vec<u32>;

/// Multivariate polynomial in `dim` variables. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(dim, vec![0; dim], c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    /// The coordinate function `x_i`.
    pub fn variable(dim: usize, i: usize) -> Self {
        assert!(i < dim, "variable index {i} out of range for dim {dim}");
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(dim, e, Rational::one())
    }

    pub fn monomial(dim: usize, exponent: Exponent, coeff: Rational) -> Self {
        assert_eq!(exponent.len(), dim, "exponent length must equal dim");
        let mut p = Self::zero(dim);
        if !coeff.is_zero() {
            p.terms.insert(exponent, coeff);
        }
        p
    }

    /// `Σ coeffs[i]·x_i + constant`.
    pub fn affine(coeffs: &[Rational], constant: Rational) -> Self {
        let dim = coeffs.len();
        let mut p = Self::constant(dim, constant);
        for (i, c) in coeffs.iter().enumerate() {
            p = p + Self::variable(dim, i).scale(c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &[u32]) -> Rational {
        self.terms
            .get(exponent)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, exponent: Exponent, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.dim);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| {
                    acc * num_traits::pow(xi.clone(), k as usize)
                })
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Substitutes `x_i ↦ x_i − shift_i`, i.e. returns `x ↦ f(x − shift)`.
    pub fn translate(&self, shift: &[Rational]) -> Self {
        assert_eq!(shift.len(), self.dim);
        let shifted: Vec<Polynomial> = (0..self.dim)
            .map(|i| Self::variable(self.dim, i) - Self::constant(self.dim, shift[i].clone()))
            .collect();
        self.compose(&shifted)
    }

    /// Substitutes `x_i ↦ images[i]`; the result lives in the images' ring.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.dim);
        let target = images.first().map_or(0, Polynomial::dim);
        let mut powers: Vec<Vec<Polynomial>> =
            images.iter().map(|p| vec![Self::one(p.dim)]).collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            out = out + term;
        }
        out
    }

    pub fn partial_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c * Rational::from_integer(e[i].into()));
        }
        out
    }

    pub fn to_float(&self) -> FloatPolynomial {
        FloatPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|&k| k as i32).collect(), to_f64(c)))
                .collect(),
        }
    }
}

/// `f64` snapshot of a [`Polynomial`] for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct FloatPolynomial {
    terms: Vec<(Vec<i32>, f64)>,
}

impl FloatPolynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, xi)| acc * xi.powi(k)))
            .sum()
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim);
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.clone() + rhs.clone()
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self + (-rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.clone() - rhs.clone()
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim);
        let mut out = Polynomial::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    _ => write!(f, "·x{}^{p}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}
