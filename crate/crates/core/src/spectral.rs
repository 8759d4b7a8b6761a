//! The Hitchin map as commutative algebra: characteristic coefficients of
//! Higgs matrices over a Laurent-polynomial coefficient ring, the Serre-dual
//! and Sp symmetries of characteristic data, weighted scaling, Sylvester
//! resultants locating ramification, Hensel splitting into eigenbranches
//! (the local model of an unramified spectral cover), and the integer
//! numerology of the associated moduli dimensions.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::Signed;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::series::{format_rational, parse_rational, rat, ratq, Rational};

/// A Laurent polynomial in one indeterminate w over the rationals: the
/// affine local model of functions on the base curve.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        LaurentPoly { terms }
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Rational::one())
    }

    pub fn w() -> Self {
        LaurentPoly::monomial(1, Rational::one())
    }

    pub fn monomial(deg: i64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(deg, c);
        }
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, deg: i64) -> Rational {
        self.terms.get(&deg).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (d, c) in &other.terms {
            let v = terms.entry(*d).or_insert_with(Rational::zero);
            *v += c;
            if v.is_zero() {
                terms.remove(d);
            }
        }
        LaurentPoly { terms }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(d, c)| (*d, -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(d, c)| (*d, c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i64, Rational> = BTreeMap::new();
        for (da, ca) in &self.terms {
            for (db, cb) in &other.terms {
                let v = terms.entry(da + db).or_insert_with(Rational::zero);
                *v += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, at: &Rational) -> Result<Rational> {
        let mut out = Rational::zero();
        for (d, c) in &self.terms {
            if *d < 0 && at.is_zero() {
                return Err(Error::BadInput("pole at evaluation point".into()));
            }
            let mut p = Rational::one();
            for _ in 0..d.unsigned_abs() {
                p *= at;
            }
            if *d < 0 {
                p = p.recip();
            }
            out += c * &p;
        }
        Ok(out)
    }

    /// Drop all terms of degree >= prec (series truncation mod w^prec).
    pub fn truncate(&self, prec: i64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(d, _)| **d < prec)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
        }
    }

    /// Inverse of a power series with a unit constant term, mod w^prec.
    pub fn invert_series(&self, prec: i64) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() || self.valuation().is_none_or(|v| v < 0) {
            return Err(Error::NotInvertible);
        }
        let mut inv = LaurentPoly::constant(c0.clone().recip());
        // Newton: inv <- inv·(2 - self·inv)
        let two = LaurentPoly::constant(rat(2));
        let mut p = 1;
        while p < prec {
            p *= 2;
            let t = two.sub(&self.mul(&inv).truncate(p));
            inv = inv.mul(&t).truncate(p);
        }
        Ok(inv.truncate(prec))
    }

    /// Square root of a power series with constant term 1, mod w^prec.
    pub fn sqrt_series(&self, prec: i64) -> Result<Self> {
        if self.coeff(0) != Rational::one() || self.valuation().is_none_or(|v| v < 0) {
            return Err(Error::BadInput("series square root needs constant term 1".into()));
        }
        let mut r = LaurentPoly::one();
        let half = ratq(1, 2);
        let mut p = 1;
        while p < prec {
            p *= 2;
            // Newton: r <- (r + self/r)/2
            let t = r.add(&self.mul(&r.invert_series(p)?).truncate(p));
            r = t.scale(&half).truncate(p);
        }
        Ok(r.truncate(prec))
    }

    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .terms
            .iter()
            .map(|(d, c)| (d.to_string(), Value::String(format_rational(c))))
            .collect();
        Value::Object(map)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::BadInput("laurent polynomial must be an object".into()))?;
        let mut terms = BTreeMap::new();
        for (k, val) in obj {
            let d: i64 =
                k.trim().parse().map_err(|_| Error::BadInput(format!("bad w-degree '{k}'")))?;
            let c = parse_rational(
                val.as_str()
                    .ok_or_else(|| Error::BadInput("coefficient must be a string".into()))?,
            )?;
            if !c.is_zero() {
                terms.insert(d, c);
            }
        }
        Ok(LaurentPoly { terms })
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*w", format_rational(c))?,
                _ => write!(f, "{}*w^{}", format_rational(c), d)?,
            }
        }
        Ok(())
    }
}

/// A square matrix of coefficient-ring elements: the matrix data of a Higgs
/// field in the affine local model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiggsMatrix {
    n: usize,
    entries: Vec<Vec<LaurentPoly>>,
}

impl HiggsMatrix {
    pub fn zero(n: usize) -> Self {
        HiggsMatrix { n, entries: vec![vec![LaurentPoly::zero(); n]; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i][j] = p;
    }

    pub fn scale(&self, s: &Rational) -> Self {
        HiggsMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.scale(s)).collect())
                .collect(),
        }
    }

    pub fn neg_transpose(&self) -> Self {
        let mut out = HiggsMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i][j] = self.entries[j][i].neg();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut out = HiggsMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = LaurentPoly::zero();
                for k in 0..self.n {
                    acc = acc.add(&self.entries[i][k].mul(&other.entries[k][j]));
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for i in 0..self.n {
            acc = acc.add(&self.entries[i][i]);
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "entries": self
                .entries
                .iter()
                .map(|row| Value::Array(row.iter().map(LaurentPoly::to_json).collect()))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::BadInput(format!("higgs matrix: {m}"));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))? as usize;
        let rows = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing entries"))?;
        if rows.len() != n {
            return Err(bad("wrong row count"));
        }
        let mut out = HiggsMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| bad("row must be an array"))?;
            if row.len() != n {
                return Err(bad("wrong column count"));
            }
            for (j, e) in row.iter().enumerate() {
                out.entries[i][j] = LaurentPoly::from_json(e)?;
            }
        }
        Ok(out)
    }
}

/// A point of the Hitchin base: the characteristic coefficients (s1,…,sn)
/// with det(x - Φ) = x^n + s1·x^(n-1) + … + sn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitchinPoint {
    pub s: Vec<LaurentPoly>,
}

impl HitchinPoint {
    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// Characteristic polynomial coefficients in ascending x-degree:
    /// [sn, …, s1, 1].
    pub fn char_poly(&self) -> Vec<LaurentPoly> {
        let mut coeffs: Vec<LaurentPoly> = self.s.iter().rev().cloned().collect();
        coeffs.push(LaurentPoly::one());
        coeffs
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "s": self.s.iter().map(LaurentPoly::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::BadInput(format!("hitchin point: {m}"));
        let s = v.get("s").and_then(Value::as_array).ok_or_else(|| bad("missing s"))?;
        let s: Result<Vec<LaurentPoly>> = s.iter().map(LaurentPoly::from_json).collect();
        let s = s?;
        if let Some(n) = v.get("n").and_then(Value::as_u64) {
            if n as usize != s.len() {
                return Err(bad("n does not match s length"));
            }
        }
        Ok(HitchinPoint { s })
    }
}

/// Characteristic coefficients by the Faddeev–LeVerrier recursion:
/// M0 = I, c_k = -tr(Φ·M_(k-1))/k, M_k = Φ·M_(k-1) + c_k·I; s_k = c_k.
pub fn hitchin_map(phi: &HiggsMatrix) -> HitchinPoint {
    let n = phi.n;
    let mut m = HiggsMatrix::zero(n);
    for i in 0..n {
        m.entries[i][i] = LaurentPoly::one();
    }
    let mut s = Vec::with_capacity(n);
    for k in 1..=n as i64 {
        let pm = phi.matmul(&m);
        let c = pm.trace().scale(&(-Rational::one() / rat(k)));
        m = pm;
        for i in 0..n {
            m.entries[i][i] = m.entries[i][i].add(&c);
        }
        s.push(c);
    }
    HitchinPoint { s }
}

/// Independent oracle: det(x - Φ) by cofactor expansion over the polynomial
/// ring in x. Returns coefficients in ascending x-degree (length n+1).
pub fn char_poly_oracle(phi: &HiggsMatrix) -> Vec<LaurentPoly> {
    // entries of x·I - Φ as polynomials in x with Laurent coefficients
    let n = phi.n;
    let mut mat: Vec<Vec<Vec<LaurentPoly>>> = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut e = vec![phi.entries[i][j].neg()];
            if i == j {
                e.push(LaurentPoly::one());
            }
            mat[i][j] = e;
        }
    }
    fn xp_add(a: &[LaurentPoly], b: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let len = a.len().max(b.len());
        (0..len)
            .map(|k| {
                let za = a.get(k).cloned().unwrap_or_else(LaurentPoly::zero);
                let zb = b.get(k).cloned().unwrap_or_else(LaurentPoly::zero);
                za.add(&zb)
            })
            .collect()
    }
    fn xp_mul(a: &[LaurentPoly], b: &[LaurentPoly]) -> Vec<LaurentPoly> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![LaurentPoly::zero(); a.len() + b.len() - 1];
        for (i, ca) in a.iter().enumerate() {
            for (j, cb) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&ca.mul(cb));
            }
        }
        out
    }
    fn det(mat: &[Vec<Vec<LaurentPoly>>]) -> Vec<LaurentPoly> {
        let n = mat.len();
        if n == 1 {
            return mat[0][0].clone();
        }
        let mut acc: Vec<LaurentPoly> = Vec::new();
        for r in 0..n {
            let minor: Vec<Vec<Vec<LaurentPoly>>> = mat
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != r)
                .map(|(_, row)| row[1..].to_vec())
                .collect();
            let mut term = xp_mul(&mat[r][0], &det(&minor));
            if r % 2 == 1 {
                term = term.iter().map(LaurentPoly::neg).collect();
            }
            acc = xp_add(&acc, &term);
        }
        acc
    }
    let mut coeffs = det(&mat);
    coeffs.resize(n + 1, LaurentPoly::zero());
    coeffs
}

/// The weighted scaling action: s_i picks up λ^i.
pub fn weighted_scale(lambda: &Rational, s: &HitchinPoint) -> HitchinPoint {
    let mut pow = Rational::one();
    HitchinPoint {
        s: s.s
            .iter()
            .map(|si| {
                pow *= lambda;
                si.scale(&pow)
            })
            .collect(),
    }
}

/// The Serre-dual characteristic data: s_i picks up (-1)^i; an involution.
pub fn serre_dual_point(s: &HitchinPoint) -> HitchinPoint {
    HitchinPoint {
        s: s.s
            .iter()
            .enumerate()
            .map(|(k, si)| if k % 2 == 0 { si.neg() } else { si.clone() })
            .collect(),
    }
}

/// Membership in the Sp fixed locus s = s*: all odd-index coefficients
/// vanish. Requires even n.
pub fn sp_membership(s: &HitchinPoint) -> Result<bool> {
    if s.n() % 2 != 0 {
        return Err(Error::InvalidParameter("Sp membership needs even n".into()));
    }
    Ok(s.s.iter().step_by(2).all(LaurentPoly::is_zero))
}

/// Determinant of the Sylvester matrix of p = x^n + s1·x^(n-1) + … + sn and
/// its x-derivative, rows ordered leading-coefficient-first. Its zero locus
/// models the branch points of the spectral cover.
pub fn ramification_resultant(s: &HitchinPoint) -> LaurentPoly {
    let n = s.n();
    if n == 0 {
        return LaurentPoly::one();
    }
    // p coefficients, leading first: [1, s1, …, sn]
    let mut p = vec![LaurentPoly::one()];
    p.extend(s.s.iter().cloned());
    // p' coefficients, leading first: [n, (n-1)s1, …, s_(n-1)]
    let dp: Vec<LaurentPoly> =
        (0..n).map(|k| p[k].scale(&rat((n - k) as i64))).collect();
    let size = 2 * n - 1;
    let mut syl = vec![vec![LaurentPoly::zero(); size]; size];
    for r in 0..n - 1 {
        for (k, c) in p.iter().enumerate() {
            syl[r][r + k] = c.clone();
        }
    }
    for r in 0..n {
        for (k, c) in dp.iter().enumerate() {
            syl[n - 1 + r][r + k] = c.clone();
        }
    }
    det_laurent(&syl)
}

/// Determinant over the coefficient ring by cofactor expansion along the
/// first column (matrices here are at most (2n-1)-square for small n).
fn det_laurent(mat: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = mat.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = LaurentPoly::zero();
    for r in 0..n {
        if mat[r][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPoly>> = mat
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let mut term = mat[r][0].mul(&det_laurent(&minor));
        if r % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term);
    }
    acc
}

/// Exact rational square root, if one exists.
fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().clone();
    let den = r.denom().clone();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &sn * &sn == num && &sd * &sd == den {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// All positive divisors of a nonzero integer, by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    loop {
        let dd = &d * &d;
        if dd > n {
            break;
        }
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// All rational roots of a polynomial given in ascending-degree rational
/// coefficients, with multiplicity, via the rational root theorem after
/// clearing denominators.
fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let deg = match coeffs.iter().rposition(|c| !c.is_zero()) {
        Some(d) => d,
        None => return Vec::new(),
    };
    let mut p: Vec<Rational> = coeffs[..=deg].to_vec();
    let mut roots = Vec::new();
    loop {
        let deg = p.len() - 1;
        if deg == 0 {
            break;
        }
        // strip zero roots
        if p[0].is_zero() {
            roots.push(Rational::zero());
            p.remove(0);
            continue;
        }
        if deg == 1 {
            roots.push(-&p[0] / &p[1]);
            break;
        }
        if deg == 2 {
            // quadratic formula over the rationals
            let disc = &p[1] * &p[1] - rat(4) * &p[0] * &p[2];
            let Some(sq) = rational_sqrt(&disc) else { break };
            let two_a = rat(2) * &p[2];
            roots.push((-&p[1] + &sq) / &two_a);
            roots.push((-&p[1] - &sq) / &two_a);
            break;
        }
        // clear denominators to an integer polynomial
        let mut lcm = BigInt::one();
        for c in &p {
            lcm = num::integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = p.iter().map(|c| c.numer() * &lcm / c.denom()).collect();
        let mut found = None;
        'search: for pn in divisors(&ints[0]) {
            for qd in divisors(ints.last().unwrap()) {
                for sign in [1, -1] {
                    let cand = Rational::new(&pn * BigInt::from(sign), qd.clone());
                    let mut v = Rational::zero();
                    for c in p.iter().rev() {
                        v = v * &cand + c;
                    }
                    if v.is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        let Some(root) = found else { break };
        // deflate: p = (x - root)·q
        let mut q = vec![Rational::zero(); deg];
        let mut carry = Rational::zero();
        for k in (0..deg).rev() {
            carry = &p[k + 1] + &carry * &root;
            q[k] = carry.clone();
        }
        roots.push(root);
        p = q;
    }
    roots
}

/// Split the characteristic polynomial into eigenbranches over the power
/// series ring: returns a1(z), …, an(z) mod z^prec with
/// ∏(x - a_i(z)) ≡ x^n + s1·x^(n-1) + … + sn, lifted by Newton iteration
/// from distinct rational roots at z = 0.
pub fn hensel_split(s: &HitchinPoint, prec: i64) -> Result<Vec<LaurentPoly>> {
    let n = s.n();
    if prec < 1 {
        return Err(Error::InvalidParameter("precision must be >= 1".into()));
    }
    for si in &s.s {
        if si.valuation().is_some_and(|v| v < 0) {
            return Err(Error::BadInput("characteristic data has a pole at z = 0".into()));
        }
    }
    // ascending-degree coefficients, and their values at z = 0
    let p: Vec<LaurentPoly> = s.char_poly();
    let p0: Vec<Rational> = p.iter().map(|c| c.coeff(0)).collect();
    // derivative at z = 0, for the ramification check
    let dp0: Vec<Rational> =
        (1..=n).map(|k| &p0[k] * rat(k as i64)).collect();
    if !poly_gcd_is_constant(&p0, &dp0) {
        return Err(Error::Ramified);
    }
    let mut roots = rational_roots(&p0);
    if roots.len() != n {
        return Err(Error::IrrationalBranch);
    }
    roots.sort();
    // Newton lift each branch: a <- a - p(a)/p'(a) mod z^k, doubling k
    let dp: Vec<LaurentPoly> =
        (1..=n).map(|k| p[k].scale(&rat(k as i64))).collect();
    let eval = |coeffs: &[LaurentPoly], a: &LaurentPoly, prec: i64| -> LaurentPoly {
        let mut v = LaurentPoly::zero();
        for c in coeffs.iter().rev() {
            v = v.mul(a).truncate(prec).add(c);
        }
        v.truncate(prec)
    };
    let mut branches = Vec::with_capacity(n);
    for r in roots {
        let mut a = LaurentPoly::constant(r);
        let mut k = 1;
        while k < prec {
            k = (k * 2).min(prec);
            let num = eval(&p, &a, k);
            let den = eval(&dp, &a, k);
            a = a.sub(&num.mul(&den.invert_series(k)?).truncate(k));
        }
        branches.push(a.truncate(prec));
    }
    Ok(branches)
}

/// For n = 2 with an irrational splitting: complete the square and adjoin
/// one square root. Returns (rational part, radical part, radicand d) with
/// branches (rational part) ± sqrt(d)·(radical part) mod z^prec, where
/// d = (s1/2)^2 - s2 evaluated at z = 0.
pub fn hensel_split_adjoined(
    s: &HitchinPoint,
    prec: i64,
) -> Result<(LaurentPoly, LaurentPoly, Rational)> {
    if s.n() != 2 {
        return Err(Error::InvalidParameter("square-root adjunction needs n = 2".into()));
    }
    for si in &s.s {
        if si.valuation().is_some_and(|v| v < 0) {
            return Err(Error::BadInput("characteristic data has a pole at z = 0".into()));
        }
    }
    let half = ratq(1, 2);
    let mid = s.s[0].scale(&half).neg();
    let quarter = ratq(1, 4);
    let u = s.s[0].mul(&s.s[0]).scale(&quarter).sub(&s.s[1]);
    let d = u.coeff(0);
    if d.is_zero() {
        return Err(Error::Ramified);
    }
    let radical = u.scale(&d.clone().recip()).sqrt_series(prec)?;
    Ok((mid.truncate(prec), radical, d))
}

/// True when gcd(p, q) over the rationals is a nonzero constant.
fn poly_gcd_is_constant(p: &[Rational], q: &[Rational]) -> bool {
    fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }
    let mut a = trim(p.to_vec());
    let mut b = trim(q.to_vec());
    while !b.is_empty() {
        // a mod b
        while a.len() >= b.len() && !a.is_empty() {
            let f = a.last().unwrap() / b.last().unwrap();
            let shift = a.len() - b.len();
            for (k, c) in b.iter().enumerate() {
                let t = c * &f;
                a[shift + k] -= t;
            }
            a = trim(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() == 1
}

/// The integer invariants attached to (n, g, d) and optionally m with
/// n = 2m: moduli dimensions, spectral-curve genera, covering degree, and
/// the Serre-dual degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Numerology {
    pub n: i64,
    pub g: i64,
    pub d: i64,
    pub m: Option<i64>,
    pub dim_vgl: i64,
    pub genus_cs: i64,
    pub delta: BigInt,
    pub deg_le: i64,
    pub serre_dual_degree: i64,
    pub serre_dual_le_degree: i64,
    pub dim_vsl: i64,
    pub genus_cs_prime: Option<i64>,
    pub dim_vsp: Option<i64>,
}

pub fn numerology(n: i64, g: i64, d: i64, m: Option<i64>) -> Result<Numerology> {
    if g < 2 {
        return Err(Error::InvalidParameter("genus must be >= 2".into()));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("rank must be >= 1".into()));
    }
    if let Some(m) = m {
        if 2 * m != n {
            return Err(Error::InvalidParameter("Sp numerology needs n = 2m".into()));
        }
    }
    let gm1 = g - 1;
    let mut delta = BigInt::one();
    for i in 1..=n {
        let e = (2 * i - 1) * gm1;
        delta *= BigInt::from(i).pow(e as u32);
    }
    Ok(Numerology {
        n,
        g,
        d,
        m,
        dim_vgl: n * n * gm1 + 1,
        genus_cs: n * n * gm1 + 1,
        delta,
        deg_le: d + n * (n - 1) * gm1,
        serre_dual_degree: -d + 2 * n * gm1,
        serre_dual_le_degree: -d + (n * n + n) * gm1,
        dim_vsl: (n * n - 1) * gm1,
        genus_cs_prime: m.map(|m| m * (2 * m - 1) * gm1 + 1),
        dim_vsp: m.map(|m| m * (2 * m + 1) * gm1),
    })
}

impl Numerology {
    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("n".into(), json!(self.n));
        obj.insert("g".into(), json!(self.g));
        obj.insert("d".into(), json!(self.d));
        obj.insert("dim_VGL".into(), json!(self.dim_vgl));
        obj.insert("genus_Cs".into(), json!(self.genus_cs));
        obj.insert("delta".into(), Value::String(self.delta.to_string()));
        obj.insert("deg_LE".into(), json!(self.deg_le));
        obj.insert("serre_dual_degree".into(), json!(self.serre_dual_degree));
        obj.insert("serre_dual_LE_degree".into(), json!(self.serre_dual_le_degree));
        obj.insert("dim_VSL".into(), json!(self.dim_vsl));
        if let Some(m) = self.m {
            obj.insert("m".into(), json!(m));
        }
        if let Some(v) = self.genus_cs_prime {
            obj.insert("genus_Cs_prime".into(), json!(v));
        }
        if let Some(v) = self.dim_vsp {
            obj.insert("dim_VSp".into(), json!(v));
        }
        Value::Object(obj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i64) -> LaurentPoly {
        LaurentPoly::constant(rat(v))
    }

    fn point(s: Vec<LaurentPoly>) -> HitchinPoint {
        HitchinPoint { s }
    }

    #[test]
    fn hitchin_map_examples() {
        // diag(a, b) with a = 2, b = w
        let mut phi = HiggsMatrix::zero(2);
        phi.set(0, 0, c(2));
        phi.set(1, 1, LaurentPoly::w());
        let s = hitchin_map(&phi);
        assert_eq!(s.s[0], c(-2).sub(&LaurentPoly::w()));
        assert_eq!(s.s[1], LaurentPoly::w().scale(&rat(2)));
        // [[0,1],[w,0]] -> (0, -w)
        let mut phi = HiggsMatrix::zero(2);
        phi.set(0, 1, c(1));
        phi.set(1, 0, LaurentPoly::w());
        let s = hitchin_map(&phi);
        assert_eq!(s.s[0], LaurentPoly::zero());
        assert_eq!(s.s[1], LaurentPoly::w().neg());
        // zero matrix
        let s = hitchin_map(&HiggsMatrix::zero(3));
        assert!(s.s.iter().all(LaurentPoly::is_zero));
    }

    #[test]
    fn hitchin_map_matches_oracle() {
        let mut phi = HiggsMatrix::zero(3);
        phi.set(0, 0, LaurentPoly::w());
        phi.set(0, 1, c(1));
        phi.set(0, 2, LaurentPoly::monomial(-1, rat(3)));
        phi.set(1, 0, c(-2));
        phi.set(1, 2, LaurentPoly::w());
        phi.set(2, 1, c(5));
        phi.set(2, 2, LaurentPoly::monomial(2, rat(1)));
        let s = hitchin_map(&phi);
        let oracle = char_poly_oracle(&phi);
        // oracle ascending: coefficient of x^(n-i) must equal s_i
        for (i, si) in s.s.iter().enumerate() {
            assert_eq!(si, &oracle[3 - 1 - i]);
        }
        assert_eq!(oracle[3], LaurentPoly::one());
    }

    #[test]
    fn weighted_scale_and_duality() {
        let s = point(vec![LaurentPoly::zero(), LaurentPoly::w().neg()]);
        let t = weighted_scale(&rat(2), &s);
        assert_eq!(t.s[1], LaurentPoly::w().scale(&rat(-4)));
        let mut phi = HiggsMatrix::zero(2);
        phi.set(0, 1, c(1));
        phi.set(1, 0, LaurentPoly::w());
        phi.set(0, 0, c(3));
        assert_eq!(
            hitchin_map(&phi.neg_transpose()),
            serre_dual_point(&hitchin_map(&phi))
        );
        // involution
        let s2 = point(vec![c(1), c(2), c(3)]);
        assert_eq!(serre_dual_point(&serre_dual_point(&s2)), s2);
    }

    #[test]
    fn sp_membership_examples() {
        assert!(sp_membership(&point(vec![LaurentPoly::zero(), c(7)])).unwrap());
        assert!(!sp_membership(&point(vec![c(1), c(7)])).unwrap());
        assert!(sp_membership(&point(vec![
            LaurentPoly::zero(),
            c(2),
            LaurentPoly::zero(),
            LaurentPoly::w(),
        ]))
        .unwrap());
        assert!(matches!(
            sp_membership(&point(vec![c(1), c(2), c(3)])),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn resultant_examples() {
        let s = point(vec![LaurentPoly::zero(), c(5)]);
        assert_eq!(ramification_resultant(&s), c(20));
        let s = point(vec![c(3), c(5)]);
        assert_eq!(ramification_resultant(&s), c(4 * 5 - 9));
        let s = point(vec![LaurentPoly::zero(), LaurentPoly::w().neg()]);
        assert_eq!(ramification_resultant(&s), LaurentPoly::w().scale(&rat(-4)));
        // weighted degree n(n-1) for weighted-homogeneous input
        let s = point(vec![
            LaurentPoly::monomial(1, rat(2)),
            LaurentPoly::monomial(2, rat(-1)),
            LaurentPoly::monomial(3, rat(3)),
        ]);
        let r = ramification_resultant(&s);
        assert_eq!(r.valuation(), Some(6));
        assert_eq!(r.degree(), Some(6));
    }

    #[test]
    fn hensel_examples() {
        // s = (0, -(1+z)^2): branches ±(1+z)
        let one_plus = LaurentPoly::one().add(&LaurentPoly::w());
        let s = point(vec![LaurentPoly::zero(), one_plus.mul(&one_plus).neg()]);
        let b = hensel_split(&s, 10).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.contains(&one_plus) && b.contains(&one_plus.neg()));
        // s = (0, -(1+z)): branches ±(1 + z/2 - z^2/8 + …)
        let s = point(vec![LaurentPoly::zero(), one_plus.neg()]);
        let b = hensel_split(&s, 4).unwrap();
        let plus = b.iter().find(|a| a.coeff(0) == rat(1)).unwrap();
        assert_eq!(plus.coeff(1), ratq(1, 2));
        assert_eq!(plus.coeff(2), ratq(-1, 8));
        assert_eq!(plus.coeff(3), ratq(1, 16));
        // product reconstructs the characteristic polynomial mod z^N
        let prod = b[0].mul(&b[1]).truncate(4);
        assert_eq!(prod, one_plus.neg().truncate(4));
        // ramified at z = 0
        let s = point(vec![LaurentPoly::zero(), LaurentPoly::w().neg()]);
        assert_eq!(hensel_split(&s, 5), Err(Error::Ramified));
        // irrational splitting
        let s = point(vec![LaurentPoly::zero(), c(-2)]);
        assert_eq!(hensel_split(&s, 5), Err(Error::IrrationalBranch));
    }

    #[test]
    fn hensel_cubic_with_rational_roots() {
        // roots 1, -2, 1/3 at z = 0, perturbed: p = ∏ (x - r_i(1+z)) has
        // branches exactly r_i(1+z)
        let one_plus = LaurentPoly::one().add(&LaurentPoly::w());
        let roots = [rat(1), rat(-2), ratq(1, 3)];
        // expand symmetric functions
        let e1 = &roots[0] + &roots[1] + &roots[2];
        let e2 = &roots[0] * &roots[1] + &roots[0] * &roots[2] + &roots[1] * &roots[2];
        let e3 = &roots[0] * &roots[1] * &roots[2];
        let u = &one_plus;
        let u2 = u.mul(u);
        let u3 = u2.mul(u);
        let s = point(vec![u.scale(&-e1), u2.scale(&e2), u3.scale(&-e3)]);
        let b = hensel_split(&s, 8).unwrap();
        for r in roots {
            assert!(b.contains(&one_plus.scale(&r)));
        }
    }

    #[test]
    fn hensel_adjoined_sqrt() {
        // x^2 = 2(1+z): branches ±sqrt(2)·(1 + z/2 - …)
        let one_plus = LaurentPoly::one().add(&LaurentPoly::w());
        let s = point(vec![LaurentPoly::zero(), one_plus.scale(&rat(-2))]);
        let (mid, radical, d) = hensel_split_adjoined(&s, 4).unwrap();
        assert!(mid.is_zero());
        assert_eq!(d, rat(2));
        assert_eq!(radical.coeff(0), rat(1));
        assert_eq!(radical.coeff(1), ratq(1, 2));
        // check radical^2·d = 1 - s2 ... i.e. radical^2 = (1+z)
        assert_eq!(radical.mul(&radical).truncate(4), one_plus.truncate(4));
        // ramified case still detected
        let s = point(vec![LaurentPoly::zero(), LaurentPoly::w()]);
        assert_eq!(hensel_split_adjoined(&s, 4).unwrap_err(), Error::Ramified);
    }

    #[test]
    fn numerology_examples() {
        let r = numerology(2, 2, 2, None).unwrap();
        assert_eq!(r.dim_vgl, 5);
        assert_eq!(r.genus_cs, 5);
        assert_eq!(r.delta, BigInt::from(8));
        assert_eq!(r.deg_le, 4);
        assert_eq!(r.serre_dual_degree, 2);
        assert_eq!(r.dim_vsl, 3);
        let r = numerology(3, 2, 0, None).unwrap();
        assert_eq!(r.delta, BigInt::from(1944));
        let r = numerology(2, 2, 0, Some(1)).unwrap();
        assert_eq!(r.genus_cs_prime, Some(2));
        assert_eq!(r.dim_vsp, Some(3));
        assert!(numerology(2, 1, 0, None).is_err());
        assert!(numerology(3, 2, 0, Some(1)).is_err());
        // degree involution: serre dual of the serre dual degree is d
        let r = numerology(3, 3, 5, None).unwrap();
        let r2 = numerology(3, 3, r.serre_dual_degree, None).unwrap();
        assert_eq!(r2.serre_dual_degree, 5);
    }

    #[test]
    fn laurent_poly_json_round_trip() {
        let p = LaurentPoly::monomial(-2, ratq(3, 7)).add(&LaurentPoly::w()).add(&c(5));
        let p2 = LaurentPoly::from_json(&p.to_json()).unwrap();
        assert_eq!(p, p2);
        let mut phi = HiggsMatrix::zero(2);
        phi.set(0, 1, p);
        let phi2 = HiggsMatrix::from_json(&phi.to_json()).unwrap();
        assert_eq!(phi, phi2);
        let s = point(vec![c(1), LaurentPoly::w()]);
        let s2 = HitchinPoint::from_json(&s.to_json()).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn rational_roots_finder() {
        // (x-2)(x+3)(2x-1) = 2x^3 + x^2 - 13x + 6
        let p = vec![rat(6), rat(-13), rat(1), rat(2)];
        let mut r = rational_roots(&p);
        r.sort();
        assert_eq!(r, vec![rat(-3), ratq(1, 2), rat(2)]);
        // x^2 - 2 has no rational roots
        assert!(rational_roots(&[rat(-2), rat(0), rat(1)]).is_empty());
    }
}
