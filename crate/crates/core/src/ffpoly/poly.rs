//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;

use super::field::Field;
use crate::error::{Error, Result};

/// Largest polynomial degree accepted at API boundaries.
pub const MAX_DEGREE: usize = 64;

/// Polynomial with coefficients constant term first. The coefficient vector
/// never carries trailing zeros, so the zero polynomial has no coefficients.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<u32>) -> Result<Poly> {
        if let Some(&c) = coeffs.iter().find(|&&c| !field.is_element(c)) {
            return Err(Error::InvalidInput(format!(
                "coefficient {c} is not an element of {field}"
            )));
        }
        trim(&mut coeffs);
        Ok(Poly { field, coeffs })
    }

    pub(crate) fn from_raw(field: Field, mut coeffs: Vec<u32>) -> Poly {
        trim(&mut coeffs);
        Poly { field, coeffs }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: &Field, c: u32) -> Poly {
        Poly::from_raw(field.clone(), vec![c])
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn x(field: &Field) -> Poly {
        Poly::from_raw(field.clone(), vec![0, 1])
    }

    /// `x - a`
    pub fn linear(field: &Field, a: u32) -> Poly {
        Poly::from_raw(field.clone(), vec![field.neg(a), 1])
    }

    /// Parses the comma-separated, constant-term-first text encoding.
    pub fn parse(field: &Field, s: &str) -> Result<Poly> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid coefficient '{t}' in '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::bound("polynomial degree", coeffs.len() - 1, MAX_DEGREE));
        }
        Poly::new(field.clone(), coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_x(&self) -> bool {
        self.coeffs == [0, 1]
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(0)
    }

    pub(crate) fn require_monic(&self) -> Result<()> {
        if self.is_zero() || self.deg() == 0 {
            return Err(Error::ConstantPolynomial);
        }
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        if self.deg() > MAX_DEGREE {
            return Err(Error::bound("polynomial degree", self.deg(), MAX_DEGREE));
        }
        Ok(())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading());
        self.scale(inv)
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = &self.field;
        Poly::from_raw(f.clone(), self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_raw(
            f.clone(),
            (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_raw(
            f.clone(),
            (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_raw(f.clone(), out)
    }

    /// Quotient and remainder. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let dd = divisor.deg();
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let inv_lead = f.inv(divisor.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; self.coeffs.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, inv_lead);
            quot[top - dd] = factor;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(factor, d));
            }
        }
        rem.truncate(dd);
        (Poly::from_raw(f.clone(), quot), Poly::from_raw(f.clone(), rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(other).rem(modulus)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(modulus);
        let base = self.rem(modulus);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, modulus);
            if e.bit(i) {
                acc = acc.mul_mod(&base, modulus);
            }
        }
        acc
    }

    pub fn pow_mod_u128(&self, e: u128, modulus: &Poly) -> Poly {
        self.pow_mod(&BigUint::from(e), modulus)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::from_raw(
            f.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn eval(&self, a: u32) -> u32 {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, a), c))
    }

    /// `f(x^m)`.
    pub fn substitute_power(&self, m: usize) -> Poly {
        assert!(m >= 1, "substitute_power requires m >= 1");
        let mut out = vec![0u32; self.deg() * m + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * m] = c;
        }
        Poly::from_raw(self.field.clone(), out)
    }

    /// Monic reciprocal `f*(x) = f(0)^{-1} x^d f(1/x)`.
    pub fn reciprocal(&self) -> Result<Poly> {
        if self.constant_term() == 0 {
            return Err(Error::ZeroConstantTerm);
        }
        let f = &self.field;
        let inv = f.inv(self.constant_term());
        Ok(Poly::from_raw(
            f.clone(),
            self.coeffs.iter().rev().map(|&c| f.mul(inv, c)).collect(),
        ))
    }

    /// Monic conjugate-reciprocal over `F_{q^2}`:
    /// `f~(t) = conj(f(0))^{-1} t^d conj(f)(1/t)`, with `conj(a) = a^q`.
    pub fn conj_reciprocal(&self) -> Result<Poly> {
        let f = &self.field;
        if f.base_order().is_none() {
            return Err(Error::NotSquareOrder(f.order() as u64));
        }
        if self.constant_term() == 0 {
            return Err(Error::ZeroConstantTerm);
        }
        let inv = f.inv(f.conj(self.constant_term())?);
        let coeffs = self
            .coeffs
            .iter()
            .rev()
            .map(|&c| Ok(f.mul(inv, f.conj(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_raw(f.clone(), coeffs))
    }

    /// Human-readable rendering such as `x^2 + 2x + 2`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        terms.join(" + ")
    }
}

fn trim(coeffs: &mut Vec<u32>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.coeffs.hash(state);
    }
}

/// Degree first, then coefficients lexicographically with the constant
/// term compared first.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
            .then_with(|| {
                (self.field.characteristic(), self.field.degree())
                    .cmp(&(other.field.characteristic(), other.field.degree()))
            })
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Comma-separated coefficients, constant term first.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) over {:?}", self.pretty(), self.field)
    }
}
