//! Matrix pseudo-differential operators over `Q[x]` with exact composition,
//! the twisted adjoint `P* = sum ∂^l a_l(-x)` (with block transposition in the
//! matrix case), the projection onto the quotient by the left ideal generated
//! by `x`, the induced module action on vectors of Laurent series, and the
//! residue pairing.
//!
//! Operators are stored left-normalized as `sum a_l(x) ∂^l`. Two composition
//! rules do all the work:
//!
//!   ∂^n · a(x) = sum_i C(n,i) a^(i)(x) ∂^(n-i)
//!   a(x) · ∂^n = sum_i (-1)^i C(n,i) ∂^(n-i) · a^(i)(x)
//!
//! with generalized binomials for negative n. Since all coefficients are
//! polynomials, the sums terminate and every composition is exact down to the
//! tracked truncation floor.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::series::{
    binomial, format_rational, parse_rational, LaurentSeries, Rational, VectorLaurent, XPoly,
};

/// Exactness floor of an operator: `Exact` means every order is known (the
/// operator has finitely many terms and nothing was truncated), `At(f)` means
/// orders below `f` have been dropped and are unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Floor {
    Exact,
    At(i64),
}

impl Floor {
    fn max(self, other: Floor) -> Floor {
        match (self, other) {
            (Floor::Exact, f) | (f, Floor::Exact) => f,
            (Floor::At(a), Floor::At(b)) => Floor::At(a.max(b)),
        }
    }

    fn allows(self, order: i64) -> bool {
        match self {
            Floor::Exact => true,
            Floor::At(f) => order >= f,
        }
    }
}

/// A square matrix with polynomial entries, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMat {
    n: usize,
    entries: Vec<XPoly>,
}

impl PolyMat {
    pub fn zero(n: usize) -> Self {
        PolyMat { n, entries: vec![XPoly::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = PolyMat::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = XPoly::one();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &XPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: XPoly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(XPoly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        PolyMat { n: self.n, entries }
    }

    pub fn neg(&self) -> Self {
        PolyMat { n: self.n, entries: self.entries.iter().map(XPoly::neg).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        PolyMat { n: self.n, entries: self.entries.iter().map(|e| e.scale(s)).collect() }
    }

    pub fn map(&self, f: impl Fn(&XPoly) -> XPoly) -> Self {
        PolyMat { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut m = PolyMat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(j, i).clone());
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self, x_cap: usize) -> Self {
        let n = self.n;
        let mut m = PolyMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul_trunc(b, x_cap);
                    m.set(i, j, m.get(i, j).add(&prod));
                }
            }
        }
        m
    }

    fn derivative(&self) -> Self {
        self.map(XPoly::derivative)
    }
}

/// A matrix pseudo-differential operator `sum_l a_l(x) ∂^l`.
#[derive(Clone, Debug)]
pub struct MatrixPdo {
    n: usize,
    x_cap: usize,
    floor: Floor,
    terms: BTreeMap<i64, PolyMat>,
}

impl MatrixPdo {
    pub fn zero(n: usize, x_cap: usize) -> Self {
        MatrixPdo { n, x_cap, floor: Floor::Exact, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize, x_cap: usize) -> Self {
        let mut p = MatrixPdo::zero(n, x_cap);
        p.terms.insert(0, PolyMat::identity(n));
        p
    }

    /// `I_n ∂^k`.
    pub fn dpow(n: usize, x_cap: usize, k: i64) -> Self {
        let mut p = MatrixPdo::zero(n, x_cap);
        p.terms.insert(k, PolyMat::identity(n));
        p
    }

    /// `x I_n`.
    pub fn x_identity(n: usize, x_cap: usize) -> Self {
        let mut p = MatrixPdo::zero(n, x_cap);
        let mut m = PolyMat::zero(n);
        for i in 0..n {
            m.set(i, i, XPoly::x());
        }
        p.terms.insert(0, m);
        p
    }

    /// Scalar (n = 1) operator `a(x) ∂^k`.
    pub fn scalar_term(x_cap: usize, k: i64, a: XPoly) -> Self {
        let mut p = MatrixPdo::zero(1, x_cap);
        if !a.is_zero() {
            let mut m = PolyMat::zero(1);
            m.set(0, 0, a);
            p.terms.insert(k, m);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_cap(&self) -> usize {
        self.x_cap
    }

    pub fn floor(&self) -> Floor {
        self.floor
    }

    /// Widen the x-truncation cap (sound: stored polynomials are exact).
    pub fn with_x_cap(mut self, cap: usize) -> Self {
        self.x_cap = self.x_cap.max(cap);
        self
    }

    pub fn with_floor(mut self, floor: Floor) -> Self {
        self.floor = self.floor.max(floor);
        self.drop_below_floor();
        self
    }

    pub fn order_hi(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn order_lo_stored(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest order at which the operator could be nonzero, counting the
    /// unknown region below the floor. `None` means exactly zero.
    fn pot_hi(&self) -> Option<i64> {
        match (self.order_hi(), self.floor) {
            (Some(h), Floor::At(f)) => Some(h.max(f - 1)),
            (Some(h), Floor::Exact) => Some(h),
            (None, Floor::At(f)) => Some(f - 1),
            (None, Floor::Exact) => None,
        }
    }

    pub fn term(&self, order: i64) -> Option<&PolyMat> {
        self.terms.get(&order)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &PolyMat)> {
        self.terms.iter().map(|(k, m)| (*k, m))
    }

    /// Add `mat ∂^order` into the operator.
    pub fn add_term(&mut self, order: i64, mat: PolyMat) {
        assert_eq!(mat.n(), self.n);
        if !self.floor.allows(order) {
            return;
        }
        let entry = self.terms.entry(order).or_insert_with(|| PolyMat::zero(self.n));
        *entry = entry.add(&mat);
        if entry.is_zero() {
            self.terms.remove(&order);
        }
    }

    fn drop_below_floor(&mut self) {
        if let Floor::At(f) = self.floor {
            self.terms.retain(|k, _| *k >= f);
        }
        self.terms.retain(|_, m| !m.is_zero());
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch("operator sizes differ".into()));
        }
        let mut out = MatrixPdo {
            n: self.n,
            x_cap: self.x_cap.min(other.x_cap),
            floor: self.floor.max(other.floor),
            terms: self.terms.clone(),
        };
        for (k, m) in &other.terms {
            out.add_term(*k, m.clone());
        }
        out.drop_below_floor();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MatrixPdo {
            n: self.n,
            x_cap: self.x_cap,
            floor: self.floor,
            terms: self.terms.iter().map(|(k, m)| (*k, m.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return MatrixPdo { n: self.n, x_cap: self.x_cap, floor: self.floor, terms: BTreeMap::new() };
        }
        MatrixPdo {
            n: self.n,
            x_cap: self.x_cap,
            floor: self.floor,
            terms: self.terms.iter().map(|(k, m)| (*k, m.scale(s))).collect(),
        }
    }

    /// Exact composition in the ring of pseudo-differential operators.
    ///
    /// The result floor records down to which order the product is certified:
    /// unknown terms of one factor can pollute orders up to `floor - 1 + hi`
    /// of the other.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch("operator sizes differ".into()));
        }
        let x_cap = self.x_cap.min(other.x_cap);
        let mut floor = Floor::Exact;
        if let (Floor::At(f), Some(h)) = (self.floor, other.pot_hi()) {
            floor = floor.max(Floor::At(f + h));
        }
        if let (Floor::At(g), Some(h)) = (other.floor, self.pot_hi()) {
            floor = floor.max(Floor::At(g + h));
        }
        let mut out = MatrixPdo { n: self.n, x_cap, floor, terms: BTreeMap::new() };
        for (&l, a) in &self.terms {
            for (&m, b) in &other.terms {
                // ∂^l · b(x) = sum_i C(l,i) b^(i)(x) ∂^(l-i)
                let mut deriv = b.clone();
                let mut i: u32 = 0;
                loop {
                    if deriv.is_zero() {
                        break;
                    }
                    let c = binomial(l, i);
                    if !c.is_zero() {
                        let order = l + m - i as i64;
                        if out.floor.allows(order) {
                            let prod = a.matmul(&deriv, x_cap).scale(&c);
                            out.add_term(order, prod);
                        }
                    }
                    deriv = deriv.derivative();
                    i += 1;
                }
            }
        }
        out.drop_below_floor();
        Ok(out)
    }

    /// The adjoint `P* = sum_l ∂^l a_l(-x)` with block transposition:
    /// entry (i,j) of the result is the scalar adjoint of entry (j,i),
    /// renormalized to the canonical `a(x) ∂^l` form.
    pub fn adjoint(&self) -> Self {
        let mut out =
            MatrixPdo { n: self.n, x_cap: self.x_cap, floor: self.floor, terms: BTreeMap::new() };
        for (&l, a) in &self.terms {
            // ∂^l · b(x) with b = a(-x)^T, expanded by the first formula.
            let mut deriv = a.transpose().map(XPoly::reflect);
            let mut i: u32 = 0;
            loop {
                if deriv.is_zero() {
                    break;
                }
                let c = binomial(l, i);
                if !c.is_zero() {
                    out.add_term(l - i as i64, deriv.scale(&c));
                }
                deriv = deriv.derivative();
                i += 1;
            }
        }
        out.drop_below_floor();
        out
    }

    /// Projection onto the quotient by the left ideal generated by x, as an
    /// n x n matrix of symbols in z (the identification `z = ∂^-1`):
    ///
    ///   rho(sum a_m(x) ∂^m) = sum_m sum_i (-1)^i C(m+i,i) a_(m+i)^(i)(0) ∂^m
    ///
    /// with ∂^m recorded at z-order -m. All entries share one window.
    pub fn rho(&self) -> RhoSymbol {
        // known ∂-orders: [m_min, m_max]
        let m_max = self.pot_hi().unwrap_or(0);
        let m_min = match (self.floor, self.order_lo_stored()) {
            (Floor::At(f), _) => f,
            (Floor::Exact, Some(lo)) => lo - self.x_cap as i64,
            (Floor::Exact, None) => 0,
        };
        let m_min = m_min.min(m_max);
        let z_lo = -m_max;
        let z_hi = -m_min + 1;
        let mut entries: Vec<Vec<Vec<(i64, Rational)>>> =
            vec![vec![Vec::new(); self.n]; self.n];
        for (&l, a) in &self.terms {
            // term a(x) ∂^l contributes a^(i)(0) with sign at ∂-order l - i
            let mut deriv = a.clone();
            let mut i: u32 = 0;
            loop {
                if deriv.is_zero() {
                    break;
                }
                let m = l - i as i64;
                if m >= m_min {
                    let c = binomial(m + i as i64, i).scale_sign(i);
                    for r in 0..self.n {
                        for s in 0..self.n {
                            let v = deriv.get(r, s).eval0();
                            if !v.is_zero() {
                                entries[r][s].push((-m, &v * &c));
                            }
                        }
                    }
                }
                deriv = deriv.derivative();
                i += 1;
            }
        }
        let mat = entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|terms| {
                        LaurentSeries::from_terms(z_lo, z_hi, terms)
                            .expect("rho terms stay inside the window")
                    })
                    .collect()
            })
            .collect();
        RhoSymbol { n: self.n, entries: mat }
    }

    /// Module action on `C((z))^n` through `f(z) -> f(∂^-1) ∂^-1`:
    /// `P·f = rho(P ∘ f(∂^-1) ∂^-1)` read back along the same identification.
    pub fn act(&self, f: &VectorLaurent) -> Result<VectorLaurent> {
        if f.len() != self.n {
            return Err(Error::SizeMismatch("vector length != operator size".into()));
        }
        // embed f as the first column of an operator: z^k -> ∂^(-k-1)
        let mut fop = MatrixPdo::zero(self.n, self.x_cap);
        fop.floor = Floor::At(-f.window_hi());
        for (r, comp) in f.components().iter().enumerate() {
            for (k, c) in comp.iter() {
                let mut m = PolyMat::zero(self.n);
                m.set(r, 0, XPoly::constant(c.clone()));
                fop.add_term(-k - 1, m);
            }
        }
        let composed = self.compose(&fop)?;
        let sym = composed.rho();
        // read back: ∂^m -> z^(-m-1), i.e. shift the z-symbol by -1
        let comps: Vec<LaurentSeries> =
            (0..self.n).map(|r| sym.entries[r][0].shift(-1)).collect();
        let v = VectorLaurent::new(comps)?;
        if v.window_hi() <= v.window_lo() {
            return Err(Error::WindowUnderflow);
        }
        Ok(v)
    }

    /// Split into (differential part, integral part): orders >= 0 and < 0.
    pub fn split(&self) -> (Self, Self) {
        let mut plus = MatrixPdo {
            n: self.n,
            x_cap: self.x_cap,
            floor: match self.floor {
                Floor::At(f) if f > 0 => Floor::At(f),
                _ => Floor::Exact,
            },
            terms: BTreeMap::new(),
        };
        let mut minus =
            MatrixPdo { n: self.n, x_cap: self.x_cap, floor: self.floor, terms: BTreeMap::new() };
        for (&k, m) in &self.terms {
            if k >= 0 {
                plus.terms.insert(k, m.clone());
            } else {
                minus.terms.insert(k, m.clone());
            }
        }
        (plus, minus)
    }

    /// True when the operator is `I + (orders <= -1)`.
    pub fn is_monic_order_zero(&self) -> bool {
        match self.order_hi() {
            None => false,
            Some(h) if h > 0 => false,
            Some(_) => self.terms.get(&0).is_some_and(|m| *m == PolyMat::identity(self.n)),
        }
    }

    /// Inverse of a monic order-0 operator, truncated at `floor`, by the
    /// Neumann series of the strictly negative part.
    pub fn invert_monic(&self, floor: i64) -> Result<Self> {
        if !self.is_monic_order_zero() {
            return Err(Error::NotMonic);
        }
        let floor = match self.floor {
            Floor::Exact => Floor::At(floor),
            Floor::At(f) => Floor::At(floor.max(f)),
        };
        let mut neg = self.clone();
        neg.terms.remove(&0);
        if neg.terms.is_empty() && self.floor == Floor::Exact {
            return Ok(MatrixPdo::identity(self.n, self.x_cap));
        }
        let neg = neg.neg().with_floor(floor);
        let mut out = MatrixPdo::identity(self.n, self.x_cap).with_floor(floor);
        let mut power = MatrixPdo::identity(self.n, self.x_cap);
        loop {
            power = power.compose(&neg)?.with_floor(floor);
            if power.terms.is_empty() {
                break;
            }
            out = out.add(&power)?;
        }
        Ok(out)
    }

    /// Compare stored terms on the region where both operators are certified.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        let floor = self.floor.max(other.floor);
        let keys: std::collections::BTreeSet<i64> =
            self.terms.keys().chain(other.terms.keys()).copied().collect();
        for k in keys {
            if !floor.allows(k) {
                continue;
            }
            let zero = PolyMat::zero(self.n);
            let a = self.terms.get(&k).unwrap_or(&zero);
            let b = other.terms.get(&k).unwrap_or(&zero);
            if a != b {
                return false;
            }
        }
        true
    }

    /// True when every certified term vanishes.
    pub fn is_zero_to_floor(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let order_lo = match self.floor {
            Floor::At(f) => f,
            Floor::Exact => self.order_lo_stored().unwrap_or(0).min(0),
        };
        let terms: serde_json::Map<String, Value> = self
            .terms
            .iter()
            .map(|(k, m)| {
                let rows: Vec<Value> = (0..self.n)
                    .map(|i| {
                        let row: Vec<Value> = (0..self.n)
                            .map(|j| {
                                let coeffs: Vec<Value> = m
                                    .get(i, j)
                                    .coeffs()
                                    .iter()
                                    .map(|c| Value::String(format_rational(c)))
                                    .collect();
                                Value::Array(coeffs)
                            })
                            .collect();
                        Value::Array(row)
                    })
                    .collect();
                (k.to_string(), Value::Array(rows))
            })
            .collect();
        json!({ "n": self.n, "x_cap": self.x_cap, "order_lo": order_lo, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::BadInput(format!("pdo: {m}"));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))? as usize;
        let x_cap =
            v.get("x_cap").and_then(Value::as_u64).ok_or_else(|| bad("missing x_cap"))? as usize;
        let order_lo =
            v.get("order_lo").and_then(Value::as_i64).ok_or_else(|| bad("missing order_lo"))?;
        let terms =
            v.get("terms").and_then(Value::as_object).ok_or_else(|| bad("missing terms"))?;
        let mut out = MatrixPdo::zero(n, x_cap);
        out.floor = Floor::At(order_lo);
        for (k, rows) in terms {
            let order: i64 = k.parse().map_err(|_| bad("bad order key"))?;
            let rows = rows.as_array().ok_or_else(|| bad("term must be an array"))?;
            if rows.len() != n {
                return Err(bad("row count != n"));
            }
            let mut mat = PolyMat::zero(n);
            for (i, row) in rows.iter().enumerate() {
                let row = row.as_array().ok_or_else(|| bad("row must be an array"))?;
                if row.len() != n {
                    return Err(bad("column count != n"));
                }
                for (j, entry) in row.iter().enumerate() {
                    let entry = entry.as_array().ok_or_else(|| bad("entry must be an array"))?;
                    if entry.len() > x_cap + 1 {
                        return Err(bad("entry degree exceeds x_cap"));
                    }
                    let coeffs: Result<Vec<Rational>> = entry
                        .iter()
                        .map(|c| {
                            c.as_str()
                                .ok_or_else(|| bad("coefficient must be a string"))
                                .and_then(parse_rational)
                        })
                        .collect();
                    mat.set(i, j, XPoly::from_coeffs(coeffs?));
                }
            }
            out.add_term(order, mat);
        }
        out.drop_below_floor();
        Ok(out)
    }
}

impl fmt::Display for MatrixPdo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for (k, m) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if self.n == 1 {
                write!(f, "({})", m.get(0, 0))?;
            } else {
                write!(f, "[")?;
                for i in 0..self.n {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    for j in 0..self.n {
                        if j > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{}", m.get(i, j))?;
                    }
                }
                write!(f, "]")?;
            }
            match k {
                0 => {}
                1 => write!(f, "*D")?,
                _ => write!(f, "*D^{}", k)?,
            }
        }
        if let Floor::At(fl) = self.floor {
            write!(f, " + O(D^{})", fl - 1)?;
        }
        Ok(())
    }
}

/// The matrix of z-symbols produced by [`MatrixPdo::rho`]; all entries share
/// one window, with z-order `-m` standing for `∂^m`.
#[derive(Clone, Debug)]
pub struct RhoSymbol {
    pub n: usize,
    pub entries: Vec<Vec<LaurentSeries>>,
}

/// The residue pairing `<f, g> = sum_i res(f_i g_i)`.
pub fn pairing(f: &VectorLaurent, g: &VectorLaurent) -> Result<Rational> {
    if f.len() != g.len() {
        return Err(Error::SizeMismatch("vector lengths differ".into()));
    }
    let mut acc = Rational::zero();
    for (a, b) in f.components().iter().zip(g.components()) {
        acc += a.mul(b)?.residue()?;
    }
    Ok(acc)
}

/// The 2m x 2m constant involution matrix with identity blocks on the
/// antidiagonal.
pub fn involution_matrix(m: usize, x_cap: usize) -> MatrixPdo {
    let n = 2 * m;
    let mut mat = PolyMat::zero(n);
    for i in 0..m {
        mat.set(i, m + i, XPoly::one());
        mat.set(m + i, i, XPoly::one());
    }
    let mut p = MatrixPdo::zero(n, x_cap);
    p.add_term(0, mat);
    p
}

trait ScaleSign {
    fn scale_sign(self, i: u32) -> Rational;
}

impl ScaleSign for Rational {
    fn scale_sign(self, i: u32) -> Rational {
        if i % 2 == 1 {
            -self
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn d(k: i64) -> MatrixPdo {
        MatrixPdo::dpow(1, 6, k)
    }

    fn x_op() -> MatrixPdo {
        MatrixPdo::x_identity(1, 6)
    }

    fn scalar(k: i64, coeffs: &[i64]) -> MatrixPdo {
        MatrixPdo::scalar_term(6, k, XPoly::from_coeffs(coeffs.iter().map(|c| rat(*c)).collect()))
    }

    #[test]
    fn compose_leibniz() {
        // ∂ ∘ x = x∂ + 1
        let got = d(1).compose(&x_op()).unwrap();
        let want = scalar(1, &[0, 1]).add(&scalar(0, &[1])).unwrap();
        assert!(got.agrees_with(&want));
    }

    #[test]
    fn compose_x_after_dsquare() {
        // x ∘ ∂^2 is already canonical: x∂^2; and it equals ∂^2 x - 2∂
        let got = x_op().compose(&d(2)).unwrap();
        assert!(got.agrees_with(&scalar(2, &[0, 1])));
        let dd_x = d(2).compose(&x_op()).unwrap();
        let alt = dd_x.sub(&scalar(1, &[2])).unwrap();
        assert!(got.agrees_with(&alt));
    }

    #[test]
    fn compose_negative_order() {
        // ∂^-1 ∘ x = x ∂^-1 - ∂^-2
        let got = d(-1).compose(&x_op()).unwrap();
        let want = scalar(-1, &[0, 1]).add(&scalar(-2, &[-1])).unwrap();
        assert!(got.agrees_with(&want));
        assert_eq!(got.floor(), Floor::Exact);
    }

    #[test]
    fn adjoint_examples() {
        // ∂* = ∂ (constant coefficient)
        assert!(d(1).adjoint().agrees_with(&d(1)));
        // (x∂)* = -x∂ - 1
        let xd = scalar(1, &[0, 1]);
        let want = scalar(1, &[0, -1]).add(&scalar(0, &[-1])).unwrap();
        assert!(xd.adjoint().agrees_with(&want));
    }

    #[test]
    fn adjoint_antihomomorphism() {
        // (PQ)* = Q* P* with P = ∂, Q = x
        let pq = d(1).compose(&x_op()).unwrap();
        let lhs = pq.adjoint();
        let rhs = x_op().adjoint().compose(&d(1).adjoint()).unwrap();
        assert!(lhs.agrees_with(&rhs));
        // and it lands on -x∂
        assert!(lhs.agrees_with(&scalar(1, &[0, -1])));
    }

    #[test]
    fn adjoint_involution() {
        let p = scalar(2, &[1, 2]).add(&scalar(-1, &[0, 0, 3])).unwrap();
        assert!(p.adjoint().adjoint().agrees_with(&p));
    }

    #[test]
    fn rho_examples() {
        // rho(x∂) = -1 (z-order 0)
        let xd = scalar(1, &[0, 1]);
        let sym = xd.rho();
        assert_eq!(sym.entries[0][0].coeff(0).unwrap(), rat(-1));
        assert!(sym.entries[0][0]
            .iter()
            .all(|(k, _)| k == 0));
        // rho(∂^k) = ∂^k
        let sym = d(3).rho();
        assert_eq!(sym.entries[0][0].coeff(-3).unwrap(), rat(1));
        // rho(x) = 0
        assert!(x_op().rho().entries[0][0].is_zero());
    }

    #[test]
    fn act_examples() {
        // ∂ · z^n = z^(n-1)
        let f = VectorLaurent::monomial(1, 0, 3, rat(1), 3, 8).unwrap();
        let out = d(1).act(&f).unwrap();
        assert_eq!(out.component(0).coeff(2).unwrap(), rat(1));
        assert!(out.component(0).iter().all(|(k, _)| k == 2));
        // x · z^n = (n+1) z^(n+1)
        let out = x_op().act(&f).unwrap();
        assert_eq!(out.component(0).coeff(4).unwrap(), rat(4));
        // c·I acts as the scalar c
        let c = MatrixPdo::identity(1, 6).scale(&rat(7));
        let g = VectorLaurent::monomial(1, 0, -2, rat(3), -2, 5).unwrap();
        let out = c.act(&g).unwrap();
        assert_eq!(out.component(0).coeff(-2).unwrap(), rat(21));
    }

    #[test]
    fn act_is_module_action() {
        // (PQ)·f = P·(Q·f)
        let p = scalar(1, &[0, 1]).add(&scalar(-1, &[2])).unwrap();
        let q = scalar(2, &[1]).add(&scalar(0, &[0, 0, 1])).unwrap();
        let f = VectorLaurent::new(vec![LaurentSeries::from_terms(
            -3,
            9,
            [(-3, rat(2)), (0, rat(1)), (4, rat(-5))],
        )
        .unwrap()])
        .unwrap();
        let lhs = p.compose(&q).unwrap().act(&f).unwrap();
        let rhs = p.act(&q.act(&f).unwrap()).unwrap();
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn split_examples() {
        // ∂ + u + v∂^-1 -> (∂ + u, v∂^-1)
        let p = d(1)
            .add(&scalar(0, &[5]))
            .unwrap()
            .add(&scalar(-1, &[0, 2]))
            .unwrap();
        let (plus, minus) = p.split();
        assert!(plus.agrees_with(&d(1).add(&scalar(0, &[5])).unwrap()));
        assert!(minus.agrees_with(&scalar(-1, &[0, 2])));
        let (plus, minus) = d(-2).split();
        assert!(plus.is_zero_to_floor());
        assert!(minus.agrees_with(&d(-2)));
        let (plus, minus) = d(3).split();
        assert!(plus.agrees_with(&d(3)));
        assert!(minus.is_zero_to_floor());
    }

    #[test]
    fn invert_monic_examples() {
        // I^-1 = I, and it stays exact
        let i = MatrixPdo::identity(2, 4);
        let inv = i.invert_monic(-6).unwrap();
        assert!(inv.agrees_with(&i));
        assert_eq!(inv.floor(), Floor::Exact);
        // (1 + c∂^-1)^-1 = 1 - c∂^-1 + c^2∂^-2 - ...
        let s = MatrixPdo::identity(1, 4).add(&scalar(-1, &[3])).unwrap();
        let inv = s.invert_monic(-4).unwrap();
        let prod = s.compose(&inv).unwrap();
        assert!(prod.agrees_with(&MatrixPdo::identity(1, 4)));
        assert_eq!(inv.term(-2).unwrap().get(0, 0), &XPoly::constant(rat(9)));
        // noncommutative case: compose back to I both ways
        let s = MatrixPdo::identity(1, 4)
            .add(&MatrixPdo::scalar_term(4, -1, XPoly::x()))
            .unwrap();
        let inv = s.invert_monic(-5).unwrap();
        assert!(s.compose(&inv).unwrap().agrees_with(&MatrixPdo::identity(1, 4)));
        assert!(inv.compose(&s).unwrap().agrees_with(&MatrixPdo::identity(1, 4)));
    }

    #[test]
    fn invert_non_monic_fails() {
        assert_eq!(d(1).invert_monic(-3).unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn pairing_examples() {
        // f = z^-1 e^1, g = e^1 (n = 2)
        let f = VectorLaurent::monomial(2, 0, -1, rat(1), -2, 3).unwrap();
        let g = VectorLaurent::monomial(2, 0, 0, rat(1), -2, 3).unwrap();
        assert_eq!(pairing(&f, &g).unwrap(), rat(1));
        // monomial orthogonality
        for a in -2..2 {
            for b in -2..2 {
                let f = VectorLaurent::monomial(1, 0, a, rat(1), -3, 4).unwrap();
                let g = VectorLaurent::monomial(1, 0, b, rat(1), -3, 4).unwrap();
                let want = if a + b == -1 { rat(1) } else { rat(0) };
                assert_eq!(pairing(&f, &g).unwrap(), want);
            }
        }
    }

    #[test]
    fn adjoint_formula_instance() {
        // f = 1, g = z^-1, P = x∂: <f, P·g> = -1 = <P*·f, g>
        let f = VectorLaurent::monomial(1, 0, 0, rat(1), -4, 5).unwrap();
        let g = VectorLaurent::monomial(1, 0, -1, rat(1), -4, 5).unwrap();
        let p = scalar(1, &[0, 1]);
        let lhs = pairing(&f, &p.act(&g).unwrap()).unwrap();
        let rhs = pairing(&p.adjoint().act(&f).unwrap(), &g).unwrap();
        assert_eq!(lhs, rat(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn involution_matrix_is_involutive() {
        let a = involution_matrix(2, 4);
        let sq = a.compose(&a).unwrap();
        assert!(sq.agrees_with(&MatrixPdo::identity(4, 4)));
        assert!(a.adjoint().agrees_with(&a));
    }

    #[test]
    fn json_round_trip() {
        let p = scalar(1, &[0, 1])
            .add(&scalar(-2, &[3, 0, 7]))
            .unwrap()
            .with_floor(Floor::At(-4));
        let v = p.to_json();
        let q = MatrixPdo::from_json(&v).unwrap();
        assert!(p.agrees_with(&q));
        assert_eq!(v, q.to_json());
    }
}
