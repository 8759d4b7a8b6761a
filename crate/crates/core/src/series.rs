//! Window-truncated formal Laurent series in `z` and polynomials in `x`,
//! both over exact rationals.
//!
//! A [`LaurentSeries`] carries an explicit window `[lo, hi)`: coefficients
//! below `lo` are exactly zero (the support bound of a Laurent series),
//! coefficients at orders `>= hi` are unknown (truncated away). Every
//! operation computes the largest window on which its result is exact, so
//! "up to truncation" is a checkable contract rather than a convention.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parse a rational from "p/q" or "p".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let mk = |e: &str| Error::BadInput(format!("bad rational '{e}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| mk(s))?;
            let q: BigInt = q.trim().parse().map_err(|_| mk(s))?;
            if q.is_zero() {
                return Err(mk(s));
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.trim().parse().map_err(|_| mk(s))?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// Format a rational as "p/q", or "p" when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratq(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Generalized binomial coefficient C(n, i) = n(n-1)...(n-i+1)/i! for any
/// integer n (possibly negative) and i >= 0. Always an integer.
pub fn binomial(n: i64, i: u32) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..i as i64 {
        num *= BigInt::from(n - k);
        den *= BigInt::from(k + 1);
    }
    BigRational::new(num, den)
}

/// A formal Laurent series in z with window `[lo, hi)`.
///
/// Stored coefficients are nonzero and satisfy `lo <= order < hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i64, Rational>,
    lo: i64,
    hi: i64,
}

impl LaurentSeries {
    /// The zero series on `[lo, hi)`.
    pub fn zero(lo: i64, hi: i64) -> Self {
        LaurentSeries { coeffs: BTreeMap::new(), lo, hi }
    }

    /// Build from (order, coefficient) pairs; zero coefficients are dropped.
    /// Orders outside `[lo, hi)` are an error.
    pub fn from_terms<I>(lo: i64, hi: i64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            if c.is_zero() {
                continue;
            }
            if k < lo || k >= hi {
                return Err(Error::GeneratorOutsideWindow(k));
            }
            let entry = coeffs.entry(k).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(&k);
            }
        }
        Ok(LaurentSeries { coeffs, lo, hi })
    }

    /// c * z^k with the given window.
    pub fn monomial(k: i64, c: Rational, lo: i64, hi: i64) -> Result<Self> {
        Self::from_terms(lo, hi, [(k, c)])
    }

    pub fn window_lo(&self) -> i64 {
        self.lo
    }

    pub fn window_hi(&self) -> i64 {
        self.hi
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of z^k. Zero below the window (support bound), error at or
    /// above `hi` where the series is unknown.
    pub fn coeff(&self, k: i64) -> Result<Rational> {
        if k >= self.hi {
            return Err(Error::ResidueOutsideWindow);
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero))
    }

    /// Lowest order with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Restrict the window to `[lo, hi)`. Coefficients with order below the
    /// new `lo` are an error (shrinking the support bound would lie about
    /// support); orders at or above the new `hi` are dropped.
    pub fn restricted(&self, lo: i64, hi: i64) -> Result<Self> {
        if let Some(v) = self.valuation() {
            if v < lo {
                return Err(Error::GeneratorOutsideWindow(v));
            }
        }
        let hi = hi.min(self.hi);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| **k < hi)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        Ok(LaurentSeries { coeffs, lo, hi })
    }

    /// Widen the support bound downward (always sound: coefficients below the
    /// old `lo` are known to be zero).
    pub fn with_lo(&self, lo: i64) -> Self {
        let mut s = self.clone();
        s.lo = lo.min(s.lo);
        s
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect();
        LaurentSeries { coeffs, lo: self.lo, hi: self.hi }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return LaurentSeries::zero(self.lo, self.hi);
        }
        let coeffs = self.coeffs.iter().map(|(k, c)| (*k, c * s)).collect();
        LaurentSeries { coeffs, lo: self.lo, hi: self.hi }
    }

    /// Sum; exact on `[min(lo), min(hi))`.
    pub fn add(&self, other: &Self) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = self.hi.min(other.hi);
        let mut coeffs = self.coeffs.clone();
        coeffs.retain(|k, _| *k < hi);
        for (k, c) in &other.coeffs {
            if *k >= hi {
                continue;
            }
            let entry = coeffs.entry(*k).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(k);
            }
        }
        LaurentSeries { coeffs, lo, hi }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiply by z^k (window shifts with the support).
    pub fn shift(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(m, c)| (*m + k, c.clone())).collect();
        LaurentSeries { coeffs, lo: self.lo + k, hi: self.hi + k }
    }

    /// Exact convolution. The result window is
    /// `[a.lo + b.lo, min(a.lo + b.hi, b.lo + a.hi))`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let lo = self.lo + other.lo;
        let hi = (self.lo + other.hi).min(other.lo + self.hi);
        if hi <= lo {
            return Err(Error::WindowUnderflow);
        }
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let k = ka + kb;
                if k >= hi {
                    continue;
                }
                let entry = coeffs.entry(k).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(LaurentSeries { coeffs, lo, hi })
    }

    /// Multiplicative inverse up to truncation. Requires a nonzero leading
    /// coefficient; the result window is `[-v, -v + (hi - v))` where `v` is
    /// the valuation, so that `a * a^-1 = 1` on a nonempty window.
    pub fn invert(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::NotInvertible)?;
        let c0 = self.coeffs[&v].clone();
        let prec = self.hi - v; // relative precision, >= 1
        if prec <= 0 {
            return Err(Error::WindowUnderflow);
        }
        // unit part u_k = coeff at order v + k; invert the unit, then shift.
        let mut inv: Vec<Rational> = Vec::with_capacity(prec as usize);
        inv.push(c0.recip());
        for k in 1..prec {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let a = self.coeffs.get(&(v + j)).cloned().unwrap_or_else(Rational::zero);
                if a.is_zero() {
                    continue;
                }
                acc += a * &inv[(k - j) as usize];
            }
            inv.push(-acc / &c0);
        }
        let terms = inv
            .into_iter()
            .enumerate()
            .map(|(k, c)| (-v + k as i64, c));
        LaurentSeries::from_terms(-v, -v + prec, terms)
    }

    /// Coefficient of z^-1. Errors when order -1 is in the truncated region.
    pub fn residue(&self) -> Result<Rational> {
        self.coeff(-1)
    }

    /// Compare coefficients on the intersection of the known regions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let hi = self.hi.min(other.hi);
        for k in self.coeffs.keys().chain(other.coeffs.keys()) {
            if *k >= hi {
                continue;
            }
            let a = self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
            if a != b {
                return false;
            }
        }
        true
    }

    pub fn to_json(&self) -> Value {
        let coeffs: serde_json::Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(k, c)| (k.to_string(), Value::String(format_rational(c))))
            .collect();
        json!({ "lo": self.lo, "hi": self.hi, "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::BadInput(format!("series: {m}"));
        let lo = v.get("lo").and_then(Value::as_i64).ok_or_else(|| bad("missing lo"))?;
        let hi = v.get("hi").and_then(Value::as_i64).ok_or_else(|| bad("missing hi"))?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing coeffs"))?;
        let mut terms = Vec::new();
        for (k, c) in coeffs {
            let k: i64 = k.parse().map_err(|_| bad("bad order key"))?;
            let c = c.as_str().ok_or_else(|| bad("coefficient must be a string"))?;
            terms.push((k, parse_rational(c)?));
        }
        LaurentSeries::from_terms(lo, hi, terms)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 + O(z^{})", self.hi);
        }
        let mut first = true;
        for (k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match *k {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*z", format_rational(c))?,
                _ => write!(f, "{}*z^{}", format_rational(c), k)?,
            }
        }
        write!(f, " + O(z^{})", self.hi)
    }
}

/// A polynomial in x over the rationals, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct XPoly {
    coeffs: Vec<Rational>,
}

impl XPoly {
    pub fn zero() -> Self {
        XPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = XPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn one() -> Self {
        XPoly::constant(Rational::one())
    }

    pub fn x() -> Self {
        XPoly { coeffs: vec![Rational::zero(), Rational::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = XPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, d: usize) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|d| self.coeff(d) + other.coeff(d)).collect();
        XPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        XPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return XPoly::zero();
        }
        XPoly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Product truncated to degree <= cap.
    pub fn mul_trunc(&self, other: &Self, cap: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return XPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i > cap {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > cap {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        XPoly::from_coeffs(coeffs)
    }

    /// d/dx.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return XPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, c)| c * rat(d as i64))
            .collect();
        XPoly::from_coeffs(coeffs)
    }

    /// i-th derivative evaluated at x = 0, i.e. i! * coeff(i).
    pub fn derivative_at_zero(&self, i: u32) -> Rational {
        let mut fact = BigInt::one();
        for k in 2..=i as i64 {
            fact *= BigInt::from(k);
        }
        self.coeff(i as usize) * BigRational::from_integer(fact)
    }

    pub fn eval0(&self) -> Rational {
        self.coeff(0)
    }

    /// Substitute x -> -x.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| if d % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        XPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*x", format_rational(c))?,
                _ => write!(f, "{}*x^{}", format_rational(c), d)?,
            }
        }
        Ok(())
    }
}

/// A vector of n Laurent series sharing one window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorLaurent {
    components: Vec<LaurentSeries>,
}

impl VectorLaurent {
    pub fn new(components: Vec<LaurentSeries>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::SizeMismatch("empty vector".into()));
        }
        let lo = components[0].window_lo();
        let hi = components[0].window_hi();
        if components.iter().any(|c| c.window_lo() != lo || c.window_hi() != hi) {
            return Err(Error::SizeMismatch("components must share one window".into()));
        }
        Ok(VectorLaurent { components })
    }

    pub fn zero(n: usize, lo: i64, hi: i64) -> Self {
        VectorLaurent { components: vec![LaurentSeries::zero(lo, hi); n] }
    }

    /// c * e^i z^k (components are 0-indexed here).
    pub fn monomial(n: usize, comp: usize, k: i64, c: Rational, lo: i64, hi: i64) -> Result<Self> {
        let mut v = VectorLaurent::zero(n, lo, hi);
        v.components[comp] = LaurentSeries::monomial(k, c, lo, hi)?;
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, i: usize) -> &LaurentSeries {
        &self.components[i]
    }

    pub fn components(&self) -> &[LaurentSeries] {
        &self.components
    }

    pub fn window_lo(&self) -> i64 {
        self.components[0].window_lo()
    }

    pub fn window_hi(&self) -> i64 {
        self.components[0].window_hi()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(LaurentSeries::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch("vector lengths differ".into()));
        }
        VectorLaurent::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        VectorLaurent { components: self.components.iter().map(LaurentSeries::neg).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        VectorLaurent { components: self.components.iter().map(|c| c.scale(s)).collect() }
    }

    /// Componentwise product with a diagonal symbol.
    pub fn mul_diag(&self, diag: &VectorLaurent) -> Result<Self> {
        if self.len() != diag.len() {
            return Err(Error::SizeMismatch("vector lengths differ".into()));
        }
        let comps: Result<Vec<_>> = self
            .components
            .iter()
            .zip(diag.components())
            .map(|(a, b)| a.mul(b))
            .collect();
        VectorLaurent::new(comps?)
    }

    pub fn restricted(&self, lo: i64, hi: i64) -> Result<Self> {
        let comps: Result<Vec<_>> =
            self.components.iter().map(|c| c.restricted(lo, hi)).collect();
        VectorLaurent::new(comps?)
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self
                .components
                .iter()
                .zip(other.components())
                .all(|(a, b)| a.agrees_with(b))
    }

    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                Value::Object(
                    c.iter()
                        .map(|(k, v)| (k.to_string(), Value::String(format_rational(v))))
                        .collect(),
                )
            })
            .collect();
        json!({ "lo": self.window_lo(), "hi": self.window_hi(), "components": comps })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::BadInput(format!("vector: {m}"));
        let lo = v.get("lo").and_then(Value::as_i64).ok_or_else(|| bad("missing lo"))?;
        let hi = v.get("hi").and_then(Value::as_i64).ok_or_else(|| bad("missing hi"))?;
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing components"))?;
        let mut components = Vec::new();
        for c in comps {
            let obj = c.as_object().ok_or_else(|| bad("component must be an object"))?;
            let mut terms = Vec::new();
            for (k, val) in obj {
                let k: i64 = k.parse().map_err(|_| bad("bad order key"))?;
                let s = val.as_str().ok_or_else(|| bad("coefficient must be a string"))?;
                terms.push((k, parse_rational(s)?));
            }
            components.push(LaurentSeries::from_terms(lo, hi, terms)?);
        }
        VectorLaurent::new(components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(lo: i64, hi: i64, terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_terms(lo, hi, terms.iter().map(|(k, c)| (*k, rat(*c)))).unwrap()
    }

    #[test]
    fn mul_polynomial_identity() {
        // (1+z)(1-z) = 1 - z^2
        let a = series(0, 8, &[(0, 1), (1, 1)]);
        let b = series(0, 8, &[(0, 1), (1, -1)]);
        let p = a.mul(&b).unwrap();
        assert!(p.agrees_with(&series(0, 8, &[(0, 1), (2, -1)])));
    }

    #[test]
    fn mul_exponent_addition() {
        let a = series(-1, 4, &[(-1, 1)]);
        let b = series(1, 4, &[(1, 1)]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.coeff(0).unwrap(), rat(1));
        assert_eq!(p.window_lo(), 0);
    }

    #[test]
    fn invert_geometric_series() {
        // (1-z)^-1 = 1 + z + z^2 + ...
        let a = series(0, 6, &[(0, 1), (1, -1)]);
        let inv = a.invert().unwrap();
        for k in 0..6 {
            assert_eq!(inv.coeff(k).unwrap(), rat(1));
        }
        let prod = a.mul(&inv).unwrap();
        assert!(prod.agrees_with(&series(0, 6, &[(0, 1)])));
    }

    #[test]
    fn invert_monomial_and_scalar() {
        let z = series(1, 5, &[(1, 1)]);
        assert_eq!(z.invert().unwrap().coeff(-1).unwrap(), rat(1));
        let two = series(0, 5, &[(0, 2)]);
        assert_eq!(two.invert().unwrap().coeff(0).unwrap(), ratq(1, 2));
    }

    #[test]
    fn invert_zero_fails() {
        assert_eq!(LaurentSeries::zero(0, 4).invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn residue_examples() {
        let a = series(-1, 2, &[(-1, 1), (0, 3), (1, 1)]);
        assert_eq!(a.residue().unwrap(), rat(1));
        let one = series(-2, 2, &[(0, 1)]);
        assert_eq!(one.residue().unwrap(), rat(0));
        let b = series(-1, 2, &[(-1, 5)]);
        assert_eq!(b.residue().unwrap(), rat(5));
        // a window entirely below -1 has truncated the residue away
        let c = series(-5, -2, &[(-5, 1)]);
        assert_eq!(c.residue(), Err(Error::ResidueOutsideWindow));
    }

    #[test]
    fn window_underflow() {
        // any two nonempty windows give a nonempty product window; only an
        // empty factor window can underflow
        let a = series(-4, -1, &[(-4, 1)]);
        let b = series(-4, -1, &[(-4, 1)]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.window_lo(), -8);
        assert_eq!(p.window_hi(), -5);
        assert_eq!(a.mul(&LaurentSeries::zero(0, 0)), Err(Error::WindowUnderflow));
    }

    #[test]
    fn ring_laws_within_windows() {
        // associativity and distributivity, checked coefficientwise
        let a = series(-2, 6, &[(-2, 3), (0, 1), (3, -2)]);
        let b = series(-1, 5, &[(-1, 2), (2, 5)]);
        let c = series(0, 7, &[(0, 1), (1, -1), (4, 7)]);
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        assert!(ab_c.agrees_with(&a_bc));
        let lhs = a.mul(&b.add(&c)).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap());
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn xpoly_derivative_and_reflect() {
        // p = 1 + 2x + 3x^2
        let p = XPoly::from_coeffs(vec![rat(1), rat(2), rat(3)]);
        assert_eq!(p.derivative(), XPoly::from_coeffs(vec![rat(2), rat(6)]));
        assert_eq!(p.reflect(), XPoly::from_coeffs(vec![rat(1), rat(-2), rat(3)]));
        assert_eq!(p.derivative_at_zero(2), rat(6));
    }

    #[test]
    fn generalized_binomial() {
        assert_eq!(binomial(3, 2), rat(3));
        assert_eq!(binomial(-1, 1), rat(-1));
        assert_eq!(binomial(-1, 2), rat(1));
        assert_eq!(binomial(-2, 3), rat(-4));
        assert_eq!(binomial(4, 0), rat(1));
        assert_eq!(binomial(2, 5), rat(0));
    }

    #[test]
    fn json_round_trip() {
        let a = series(-2, 4, &[(-2, 3), (1, -7)]);
        let v = a.to_json();
        let b = LaurentSeries::from_json(&v).unwrap();
        assert_eq!(a, b);
        assert_eq!(v, b.to_json());
    }
}
