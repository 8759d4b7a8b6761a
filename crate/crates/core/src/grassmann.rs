//! Finite-window model of the Sato Grassmannian.
//!
//! A point is "eventually standard": it equals the standard subspace
//! `span{e^i z^-j : j > M}` below the window, and inside the window `[-M, N)`
//! it is the span of an echelonized generator list. Everything — Fredholm
//! data, the orthogonal complement under the residue pairing, the big-cell
//! correspondence with monic dressing operators, gauge-quotient equality, and
//! KP tangent representatives — reduces to exact linear algebra over the
//! rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, SolveOutcome};
use crate::pdo::MatrixPdo;
use crate::series::{
    binomial, LaurentSeries, Rational, VectorLaurent, XPoly,
};

/// Working representation of a vector of Laurent series with unbounded
/// support: one sparse coefficient map per component.
type Terms = Vec<BTreeMap<i64, Rational>>;

fn terms_of(v: &VectorLaurent) -> Terms {
    v.components()
        .iter()
        .map(|c| c.iter().map(|(k, r)| (k, r.clone())).collect())
        .collect()
}

fn terms_sub_scaled(dst: &mut Terms, src: &Terms, f: &Rational) {
    for (d, s) in dst.iter_mut().zip(src) {
        for (k, c) in s {
            let entry = d.entry(*k).or_insert_with(Rational::zero);
            *entry -= c * f;
            if entry.is_zero() {
                d.remove(k);
            }
        }
    }
}

/// Componentwise product of `v` with a diagonal series, exact on the full
/// support (both factors are finite).
fn terms_mul_diag(v: &Terms, diag: &[LaurentSeries]) -> Terms {
    v.iter()
        .zip(diag)
        .map(|(comp, d)| {
            let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
            for (k, c) in comp {
                for (j, e) in d.iter() {
                    let entry = out.entry(k + j).or_insert_with(Rational::zero);
                    *entry += c * e;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        })
        .collect()
}

fn terms_is_zero(v: &Terms) -> bool {
    v.iter().all(BTreeMap::is_empty)
}

/// A point of the finite-window Grassmannian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannPoint {
    n: usize,
    /// Pole-window depth M: the window covers orders `[-M, N)`.
    m_depth: i64,
    /// Positive-window height N.
    n_height: i64,
    /// Echelonized generators: monic at pairwise-distinct leading (lowest
    /// order, component) positions, fully reduced against each other.
    generators: Vec<VectorLaurent>,
}

/// Kernel and cokernel of the projection onto the standard subspace, plus the
/// Fredholm index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FredholmData {
    pub kernel_basis: Vec<VectorLaurent>,
    /// Residue classes represented by the unoccupied monomials e^i z^k,
    /// k in [-M, -1].
    pub cokernel_basis: Vec<VectorLaurent>,
    pub index: i64,
}

impl GrassmannPoint {
    /// Echelonize raw generators into a canonical point. Raw generators must
    /// be supported in `[-M, N)`; linearly dependent ones are reduced away.
    pub fn make_point(
        n: usize,
        m_depth: i64,
        n_height: i64,
        raw_generators: &[VectorLaurent],
    ) -> Result<Self> {
        if n == 0 || m_depth < 0 || n_height < 0 || m_depth + n_height == 0 {
            return Err(Error::InvalidParameter("need n >= 1 and M + N >= 1".into()));
        }
        let width = (m_depth + n_height) as usize;
        let mut rows = Vec::new();
        for g in raw_generators {
            if g.len() != n {
                return Err(Error::SizeMismatch("generator length != n".into()));
            }
            let mut row = vec![Rational::zero(); n * width];
            for (comp, series) in g.components().iter().enumerate() {
                for (k, c) in series.iter() {
                    if k < -m_depth || k >= n_height {
                        return Err(Error::GeneratorOutsideWindow(k));
                    }
                    row[((k + m_depth) as usize) * n + comp] = c.clone();
                }
            }
            rows.push(row);
        }
        let ech = linalg::rref(rows);
        let generators = ech
            .rows
            .iter()
            .map(|row| Self::row_to_vector(n, m_depth, n_height, row))
            .collect::<Result<Vec<_>>>()?;
        Ok(GrassmannPoint { n, m_depth, n_height, generators })
    }

    /// The standard point with its in-window monomial generators made
    /// explicit: e^i z^-j for 1 <= j <= M.
    pub fn standard(n: usize, m_depth: i64, n_height: i64) -> Result<Self> {
        let mut gens = Vec::new();
        for j in 1..=m_depth {
            for i in 0..n {
                gens.push(VectorLaurent::monomial(
                    n,
                    i,
                    -j,
                    Rational::one(),
                    -m_depth,
                    n_height,
                )?);
            }
        }
        Self::make_point(n, m_depth, n_height, &gens)
    }

    fn row_to_vector(
        n: usize,
        m_depth: i64,
        n_height: i64,
        row: &[Rational],
    ) -> Result<VectorLaurent> {
        let comps: Result<Vec<LaurentSeries>> = (0..n)
            .map(|comp| {
                let terms = row
                    .iter()
                    .enumerate()
                    .filter(|(s, c)| s % n == comp && !c.is_zero())
                    .map(|(s, c)| ((s / n) as i64 - m_depth, c.clone()));
                LaurentSeries::from_terms(-m_depth, n_height, terms)
            })
            .collect();
        VectorLaurent::new(comps?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_depth(&self) -> i64 {
        self.m_depth
    }

    pub fn n_height(&self) -> i64 {
        self.n_height
    }

    pub fn generators(&self) -> &[VectorLaurent] {
        &self.generators
    }

    /// Leading (lowest order, component) position of a generator.
    fn pivot(g: &VectorLaurent) -> (i64, usize) {
        let mut best: Option<(i64, usize)> = None;
        for (comp, series) in g.components().iter().enumerate() {
            if let Some(v) = series.valuation() {
                if best.map_or(true, |b| (v, comp) < b) {
                    best = Some((v, comp));
                }
            }
        }
        best.expect("echelon generators are nonzero")
    }

    /// Kernel/cokernel of the projection to the standard negative-order
    /// subspace, and the index #generators - n*M.
    pub fn fredholm_data(&self) -> FredholmData {
        let mut kernel_basis = Vec::new();
        let mut occupied = std::collections::BTreeSet::new();
        for g in &self.generators {
            let (k, comp) = Self::pivot(g);
            if k >= 0 {
                kernel_basis.push(g.clone());
            } else {
                occupied.insert((k, comp));
            }
        }
        let mut cokernel_basis = Vec::new();
        for k in -self.m_depth..0 {
            for comp in 0..self.n {
                if !occupied.contains(&(k, comp)) {
                    cokernel_basis.push(
                        VectorLaurent::monomial(
                            self.n,
                            comp,
                            k,
                            Rational::one(),
                            -self.m_depth,
                            self.n_height,
                        )
                        .expect("monomial inside window"),
                    );
                }
            }
        }
        let index = kernel_basis.len() as i64 - cokernel_basis.len() as i64;
        FredholmData { kernel_basis, cokernel_basis, index }
    }

    /// Orthogonal complement under the residue pairing, in the dual window
    /// `[-N, M)`. The deep standard parts pair to zero automatically, so the
    /// complement is the nullspace of the in-window pairing matrix.
    pub fn perp(&self) -> Result<Self> {
        let width = (self.m_depth + self.n_height) as usize;
        let ncols = self.n * width;
        // column s = (k' + N) * n + i stands for the monomial e^i z^k'
        let rows: Vec<Vec<Rational>> = self
            .generators
            .iter()
            .map(|g| {
                (0..ncols)
                    .map(|s| {
                        let kp = (s / self.n) as i64 - self.n_height;
                        let i = s % self.n;
                        // <e^i z^k', w> = coefficient of w_i at -1-k'
                        g.component(i)
                            .coeff(-1 - kp)
                            .expect("dual pairing order is inside the window")
                    })
                    .collect()
            })
            .collect();
        let null = linalg::nullspace(&rows, ncols);
        let gens: Result<Vec<VectorLaurent>> = null
            .iter()
            .map(|v| Self::row_to_vector(self.n, self.n_height, self.m_depth, v))
            .collect();
        Self::make_point(self.n, self.n_height, self.m_depth, &gens?)
    }

    /// Reduce a working vector modulo the modeled subspace: coefficients
    /// below -M lie in the standard deep part and are dropped; in-window
    /// coefficients are reduced against the echelon generators. When
    /// `keep_high` is false, orders >= N (outside the window's knowledge) are
    /// dropped as well.
    fn reduce_terms(&self, v: &mut Terms, keep_high: bool) {
        for comp in v.iter_mut() {
            comp.retain(|k, _| *k >= -self.m_depth);
            if !keep_high {
                comp.retain(|k, _| *k < self.n_height);
            }
        }
        for g in &self.generators {
            let (k, comp) = Self::pivot(g);
            if let Some(f) = v[comp].get(&k).cloned() {
                let gt = terms_of(g);
                terms_sub_scaled(v, &gt, &f);
            }
        }
    }

    /// Membership of an exact vector in the modeled subspace, judged inside
    /// the window (orders >= N are beyond the model's knowledge).
    pub fn contains(&self, v: &VectorLaurent) -> bool {
        let mut t = terms_of(v);
        self.reduce_terms(&mut t, false);
        terms_is_zero(&t)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "M": self.m_depth,
            "N": self.n_height,
            "generators": self.generators.iter().map(VectorLaurent::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::BadInput(format!("grassmann: {m}"));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))? as usize;
        let m_depth = v.get("M").and_then(Value::as_i64).ok_or_else(|| bad("missing M"))?;
        let n_height = v.get("N").and_then(Value::as_i64).ok_or_else(|| bad("missing N"))?;
        let gens = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing generators"))?;
        let gens: Result<Vec<VectorLaurent>> =
            gens.iter().map(VectorLaurent::from_json).collect();
        Self::make_point(n, m_depth, n_height, &gens?)
    }
}

/// The big-cell correspondence, forward direction: the point
/// `S^-1 · span{e^i z^-j : j >= 1}` in the window `[-M, N)`.
pub fn from_dressing(s: &MatrixPdo, m_depth: i64, n_height: i64) -> Result<GrassmannPoint> {
    if !s.is_monic_order_zero() {
        return Err(Error::NotMonic);
    }
    let n = s.n();
    // raise the x-degree cap so the inverse is exact everywhere it can touch
    // window orders: a degree-d coefficient at ∂^-k moves z-orders by k + d
    let s_wide = s.clone().with_x_cap((n_height + m_depth) as usize);
    let s_inv = s_wide.invert_monic(-(n_height + m_depth + 1))?;
    let mut gens = Vec::new();
    for j in 1..=m_depth {
        for i in 0..n {
            let f = VectorLaurent::monomial(n, i, -j, Rational::one(), -m_depth, n_height + 1)?;
            let img = s_inv.act(&f)?;
            if img.window_hi() < n_height {
                return Err(Error::FloorInsufficient(
                    "window too small for the dressing image".into(),
                ));
            }
            gens.push(img.restricted(-m_depth, n_height)?);
        }
    }
    GrassmannPoint::make_point(n, m_depth, n_height, &gens)
}

/// The big-cell correspondence, inverse direction: recover the monic
/// operator `S = I + sum_{k=1..K} A_k(x) ∂^-k` (K = -order_lo) from the
/// requirement that S maps every generator into the standard subspace.
///
/// Writing the action of `a(x) ∂^-k` on z^m coefficientwise, the condition
/// "coefficient of z^t of S·w vanishes for 0 <= t < N" becomes, per output
/// component, an exact linear system in the Taylor data A_k^(i)(0).
pub fn to_dressing(w: &GrassmannPoint, order_lo: i64, x_cap: usize) -> Result<MatrixPdo> {
    let fd = w.fredholm_data();
    if !fd.kernel_basis.is_empty() || !fd.cokernel_basis.is_empty() {
        return Err(Error::BigCellViolation);
    }
    let n = w.n();
    let kk = (-order_lo) as usize;
    if order_lo >= 0 {
        return Err(Error::InvalidParameter("order_lo must be negative".into()));
    }
    let nunk = kk * (x_cap + 1) * n;
    let unk = |k: usize, i: usize, c: usize| (k - 1) * (x_cap + 1) * n + i * n + c;
    // one independent system per output component r
    let mut taylor: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for r in 0..n {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for g in w.generators() {
            for t in 0..w.n_height() {
                let mut row = vec![Rational::zero(); nunk];
                for k in 1..=kk {
                    for i in 0..=x_cap {
                        let m = t - k as i64 - i as i64;
                        if m < -w.m_depth() {
                            continue;
                        }
                        let b = binomial(t, i as u32);
                        if b.is_zero() {
                            continue;
                        }
                        for c in 0..n {
                            let wc = g.component(c).coeff(m).expect("inside window");
                            if !wc.is_zero() {
                                row[unk(k, i, c)] = &b * &wc;
                            }
                        }
                    }
                }
                rows.push(row);
                rhs.push(-g.component(r).coeff(t).expect("inside window"));
            }
        }
        match linalg::solve(&rows, &rhs) {
            SolveOutcome::Inconsistent => return Err(Error::BigCellViolation),
            SolveOutcome::Unique(u) | SolveOutcome::Underdetermined(u) => taylor.push(u),
        }
    }
    let mut s = MatrixPdo::identity(n, x_cap);
    for k in 1..=kk {
        let mut mat = crate::pdo::PolyMat::zero(n);
        for r in 0..n {
            for c in 0..n {
                let mut coeffs = Vec::with_capacity(x_cap + 1);
                let mut fact = Rational::one();
                for i in 0..=x_cap {
                    if i > 0 {
                        fact *= crate::series::rat(i as i64);
                    }
                    coeffs.push(&taylor[r][unk(k, i, c)] / &fact);
                }
                mat.set(r, c, XPoly::from_coeffs(coeffs));
            }
        }
        s.add_term(-(k as i64), mat);
    }
    Ok(s.with_floor(crate::pdo::Floor::At(order_lo)))
}

/// A diagonal gauge element: component series in nonnegative orders with a
/// shared constant term, normalized here to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaElement {
    diag: Vec<LaurentSeries>,
}

impl GammaElement {
    pub fn new(diag: Vec<LaurentSeries>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::SizeMismatch("empty gamma".into()));
        }
        for d in &diag {
            if d.valuation().is_some_and(|v| v < 0) {
                return Err(Error::InvalidParameter("gamma has negative orders".into()));
            }
            if d.coeff(0).map_or(true, |c| !c.is_one()) {
                return Err(Error::InvalidParameter("gamma constant term must be 1".into()));
            }
        }
        Ok(GammaElement { diag })
    }

    pub fn identity(n: usize, hi: i64) -> Self {
        let one = LaurentSeries::from_terms(0, hi, [(0, Rational::one())]).unwrap();
        GammaElement { diag: vec![one; n] }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[LaurentSeries] {
        &self.diag
    }

    pub fn is_identity(&self) -> bool {
        self.diag.iter().all(|d| d.iter().all(|(k, _)| k == 0))
    }

    /// Componentwise inverse, to the same window.
    pub fn invert(&self) -> Result<Self> {
        let diag: Result<Vec<LaurentSeries>> =
            self.diag.iter().map(LaurentSeries::invert).collect();
        Ok(GammaElement { diag: diag? })
    }

    pub fn to_json(&self) -> Value {
        json!({ "diag": self.diag.iter().map(LaurentSeries::to_json).collect::<Vec<_>>() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .get("diag")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadInput("gamma: missing diag".into()))?;
        let diag: Result<Vec<LaurentSeries>> = arr.iter().map(LaurentSeries::from_json).collect();
        Self::new(diag?)
    }
}

/// Decide equality in the gauge quotient: find a diagonal gauge element with
/// γ·W1 = W2 (judged inside the shared window), or return None.
pub fn quotient_equal(
    w1: &GrassmannPoint,
    w2: &GrassmannPoint,
    gamma_cap: i64,
) -> Result<Option<GammaElement>> {
    if w1.n() != w2.n() || w1.m_depth() != w2.m_depth() || w1.n_height() != w2.n_height() {
        return Err(Error::SizeMismatch("points must share n and windows".into()));
    }
    let n = w1.n();
    let f1 = w1.fredholm_data();
    let f2 = w2.fredholm_data();
    if f1.kernel_basis.len() != f2.kernel_basis.len()
        || f1.cokernel_basis.len() != f2.cokernel_basis.len()
    {
        return Ok(None);
    }
    let kk = gamma_cap.max(1);
    let nunk = n * kk as usize;
    let unk = |i: usize, k: i64| i * kk as usize + (k - 1) as usize;
    let width = ((w1.m_depth() + w1.n_height()) as usize) * n;
    let slot = |k: i64, comp: usize| ((k + w1.m_depth()) as usize) * n + comp;
    // residual of γ·w modulo W2 is affine-linear in γ's coefficients
    let mut rhs: Vec<Rational> = Vec::new();
    let dense = |t: &Terms| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); width];
        for (comp, c) in t.iter().enumerate() {
            for (k, v) in c {
                out[slot(*k, comp)] = v.clone();
            }
        }
        out
    };
    let mut eq_rows: Vec<Vec<Rational>> = Vec::new();
    for g in w1.generators() {
        // constant part: residual of w itself
        let mut base = terms_of(g);
        w2.reduce_terms(&mut base, false);
        let base = dense(&base);
        // linear part: residual of e_ii z^k · w
        let mut cols = Vec::with_capacity(nunk);
        for i in 0..n {
            for k in 1..=kk {
                let mut shifted: Terms = vec![BTreeMap::new(); n];
                for (ord, c) in g.component(i).iter() {
                    shifted[i].insert(ord + k, c.clone());
                }
                w2.reduce_terms(&mut shifted, false);
                cols.push(dense(&shifted));
            }
        }
        for s in 0..width {
            let row: Vec<Rational> = (0..nunk).map(|u| cols[u][s].clone()).collect();
            eq_rows.push(row);
            rhs.push(-base[s].clone());
        }
    }
    let sol = match linalg::solve(&eq_rows, &rhs) {
        SolveOutcome::Inconsistent => return Ok(None),
        SolveOutcome::Unique(u) | SolveOutcome::Underdetermined(u) => u,
    };
    let diag: Result<Vec<LaurentSeries>> = (0..n)
        .map(|i| {
            let terms = std::iter::once((0, Rational::one()))
                .chain((1..=kk).map(|k| (k, sol[unk(i, k)].clone())));
            LaurentSeries::from_terms(0, kk + 1, terms)
        })
        .collect();
    let gamma = GammaElement::new(diag?)?;
    // verify the reverse inclusion with γ^-1 (surjectivity onto W2)
    let ginv = gamma.invert()?;
    for g in w2.generators() {
        let mut t = terms_mul_diag(&terms_of(g), ginv.diag());
        w1.reduce_terms(&mut t, false);
        if !terms_is_zero(&t) {
            return Ok(None);
        }
    }
    Ok(Some(gamma))
}

/// Representative of the KP flow direction `w -> a·w` in the quotient of
/// `C((z))^n / W` by the infinitesimal diagonal gauge action: one remainder
/// per generator, jointly reduced against the gauge directions.
pub fn kp_tangent(a: &VectorLaurent, w: &GrassmannPoint) -> Result<Vec<VectorLaurent>> {
    let n = w.n();
    if a.len() != n {
        return Err(Error::SizeMismatch("flow symbol length != n".into()));
    }
    let gens = w.generators();
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let kk = w.m_depth() + w.n_height();
    // generators are known only through order N-1, so a·w is certified only
    // through order min_valuation(a) + N - 1; everything above is truncation
    // junk and must not enter the representative
    let Some(shift_min) = a.components().iter().filter_map(LaurentSeries::valuation).min()
    else {
        return Ok(vec![VectorLaurent::zero(n, -w.m_depth(), w.n_height()); gens.len()]);
    };
    let hi = shift_min + w.n_height();
    if hi <= -w.m_depth() {
        return Err(Error::WindowUnderflow);
    }
    let cut = |t: &mut Terms| {
        for comp in t.iter_mut() {
            comp.retain(|k, _| *k < hi);
        }
    };
    // residual of a·w modulo W for each generator
    let target: Vec<Terms> = gens
        .iter()
        .map(|g| {
            let mut t = terms_mul_diag(&terms_of(g), a.components());
            w.reduce_terms(&mut t, true);
            cut(&mut t);
            t
        })
        .collect();
    // gauge directions e_ii z^k applied to every generator, reduced mod W
    let mut directions: Vec<Vec<Terms>> = Vec::new();
    for i in 0..n {
        for k in 1..=kk {
            let dir: Vec<Terms> = gens
                .iter()
                .map(|g| {
                    let mut t: Terms = vec![BTreeMap::new(); n];
                    for (ord, c) in g.component(i).iter() {
                        t[i].insert(ord + k, c.clone());
                    }
                    w.reduce_terms(&mut t, true);
                    cut(&mut t);
                    t
                })
                .collect();
            directions.push(dir);
        }
    }
    let width = ((w.m_depth() + hi) as usize) * n;
    let dense = |ts: &[Terms]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); width * gens.len()];
        for (gi, t) in ts.iter().enumerate() {
            for (comp, c) in t.iter().enumerate() {
                for (k, v) in c {
                    out[gi * width + ((k + w.m_depth()) as usize) * n + comp] = v.clone();
                }
            }
        }
        out
    };
    let dir_rows: Vec<Vec<Rational>> = directions.iter().map(|d| dense(d)).collect();
    let ech = linalg::rref(dir_rows);
    let mut vec_target = dense(&target);
    linalg::reduce_mod_rowspan(&ech, &mut vec_target);
    // unpack the canonical representative
    let mut out = Vec::with_capacity(gens.len());
    for gi in 0..gens.len() {
        let comps: Result<Vec<LaurentSeries>> = (0..n)
            .map(|comp| {
                let terms = (0..(w.m_depth() + hi)).filter_map(|idx| {
                    let c = &vec_target[gi * width + idx as usize * n + comp];
                    if c.is_zero() {
                        None
                    } else {
                        Some((idx - w.m_depth(), c.clone()))
                    }
                });
                LaurentSeries::from_terms(-w.m_depth(), hi, terms)
            })
            .collect();
        out.push(VectorLaurent::new(comps?)?);
    }
    Ok(out)
}

/// Exact residue-pairing orthogonality check between two generator families.
pub fn orthogonal(w: &GrassmannPoint, wp: &GrassmannPoint) -> Result<bool> {
    for g in w.generators() {
        for f in wp.generators() {
            let mut acc = Rational::zero();
            for (a, b) in g.components().iter().zip(f.components()) {
                for (ka, ca) in a.iter() {
                    for (kb, cb) in b.iter() {
                        if ka + kb == -1 {
                            acc += ca * cb;
                        }
                    }
                }
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn v1(m: i64, n: i64, terms: &[(i64, i64)]) -> VectorLaurent {
        VectorLaurent::new(vec![LaurentSeries::from_terms(
            -m,
            n,
            terms.iter().map(|(k, c)| (*k, rat(*c))),
        )
        .unwrap()])
        .unwrap()
    }

    #[test]
    fn make_point_standard_cases() {
        let w = GrassmannPoint::make_point(1, 0, 3, &[]).unwrap();
        assert!(w.generators().is_empty());
        let fd = w.fredholm_data();
        assert!(fd.kernel_basis.is_empty());
        assert!(fd.cokernel_basis.is_empty());
        assert_eq!(fd.index, 0);
        // explicit-generator representation of the standard point
        let s = GrassmannPoint::standard(2, 2, 2).unwrap();
        assert_eq!(s.generators().len(), 4);
        assert_eq!(s.fredholm_data().index, 0);
    }

    #[test]
    fn fredholm_shifted_point() {
        // W = span{1} + deep: kernel {1}, cokernel {z^-1}, index 0
        let w = GrassmannPoint::make_point(1, 1, 2, &[v1(1, 2, &[(0, 1)])]).unwrap();
        let fd = w.fredholm_data();
        assert_eq!(fd.kernel_basis.len(), 1);
        assert_eq!(fd.cokernel_basis.len(), 1);
        assert_eq!(fd.index, 0);
        // W = span{z^-2} + deep from j > 2: kernel none, cokernel {z^-1}
        let w = GrassmannPoint::make_point(1, 2, 1, &[v1(2, 1, &[(-2, 1)])]).unwrap();
        let fd = w.fredholm_data();
        assert!(fd.kernel_basis.is_empty());
        assert_eq!(fd.cokernel_basis.len(), 1);
        assert_eq!(fd.cokernel_basis[0].component(0).valuation(), Some(-1));
        assert_eq!(fd.index, -1);
    }

    #[test]
    fn perp_standard_and_shifted() {
        // standard point is self-perpendicular
        let w = GrassmannPoint::make_point(1, 0, 3, &[]).unwrap();
        let p = w.perp().unwrap();
        assert_eq!(p, GrassmannPoint::standard(1, 3, 0).unwrap());
        assert_eq!(p.perp().unwrap(), w);
        // index negates through perp
        let w = GrassmannPoint::make_point(1, 2, 1, &[v1(2, 1, &[(-2, 1)])]).unwrap();
        let p = w.perp().unwrap();
        assert_eq!(p.fredholm_data().index, 1);
        assert_eq!(p.generators().len(), 2);
        assert_eq!(p.perp().unwrap(), w);
        // self-orthogonal example: W = span{1} + deep (M = N = 1)
        let w = GrassmannPoint::make_point(1, 1, 1, &[v1(1, 1, &[(0, 1)])]).unwrap();
        assert_eq!(w.perp().unwrap(), w);
    }

    #[test]
    fn perp_orthogonality_certificate() {
        let w = GrassmannPoint::make_point(
            2,
            2,
            2,
            &[
                VectorLaurent::new(vec![
                    LaurentSeries::from_terms(-2, 2, [(-2, rat(1)), (1, rat(3))]).unwrap(),
                    LaurentSeries::from_terms(-2, 2, [(0, rat(2))]).unwrap(),
                ])
                .unwrap(),
                VectorLaurent::new(vec![
                    LaurentSeries::from_terms(-2, 2, [(-1, rat(5))]).unwrap(),
                    LaurentSeries::from_terms(-2, 2, [(-1, rat(1)), (0, rat(7))]).unwrap(),
                ])
                .unwrap(),
            ],
        )
        .unwrap();
        let p = w.perp().unwrap();
        assert!(orthogonal(&w, &p).unwrap());
        assert_eq!(p.perp().unwrap(), w);
        let (fw, fp) = (w.fredholm_data(), p.fredholm_data());
        assert_eq!(fw.kernel_basis.len(), fp.cokernel_basis.len());
        assert_eq!(fw.cokernel_basis.len(), fp.kernel_basis.len());
        assert_eq!(fw.index, -fp.index);
    }

    #[test]
    fn dressing_identity_and_scalar() {
        let s = MatrixPdo::identity(1, 3);
        let w = from_dressing(&s, 2, 2).unwrap();
        assert_eq!(w, GrassmannPoint::standard(1, 2, 2).unwrap());
        // S = 1 + 2∂^-1: generators z^-j/(1+2z)
        let s = s
            .add(&MatrixPdo::scalar_term(3, -1, XPoly::constant(rat(2))))
            .unwrap();
        let w = from_dressing(&s, 2, 3).unwrap();
        // z^-1 (1 - 2z + 4z^2 - 8z^3 ...) appears among the generators
        let g = &w.generators()[0];
        assert_eq!(g.component(0).coeff(-2).unwrap(), rat(1));
        let h = &w.generators()[1];
        assert_eq!(h.component(0).coeff(-1).unwrap(), rat(1));
        assert_eq!(h.component(0).coeff(0).unwrap(), rat(-2));
        assert_eq!(h.component(0).coeff(1).unwrap(), rat(4));
        assert_eq!(h.component(0).coeff(2).unwrap(), rat(-8));
        assert_eq!(w.fredholm_data().index, 0);
    }

    #[test]
    fn dressing_round_trip() {
        // x-independent seed
        let s = MatrixPdo::identity(1, 2)
            .add(&MatrixPdo::scalar_term(2, -1, XPoly::constant(rat(2))))
            .unwrap();
        let w = from_dressing(&s, 2, 6).unwrap();
        let s2 = to_dressing(&w, -3, 2).unwrap();
        assert!(s2.agrees_with(&s));
        // x-dependent seed
        let s = MatrixPdo::identity(1, 2)
            .add(&MatrixPdo::scalar_term(2, -1, XPoly::x()))
            .unwrap()
            .add(&MatrixPdo::scalar_term(2, -2, XPoly::constant(rat(1))))
            .unwrap();
        let w = from_dressing(&s, 2, 7).unwrap();
        let s2 = to_dressing(&w, -3, 2).unwrap();
        assert!(s2.agrees_with(&s));
        // and forward again: the truncated operator reproduces the point on
        // any window its floor supports (depth 3 dressing -> height <= 2)
        let w2 = from_dressing(&s2, 2, 2).unwrap();
        assert_eq!(from_dressing(&s, 2, 2).unwrap(), w2);
    }

    #[test]
    fn to_dressing_standard_and_errors() {
        let w = GrassmannPoint::standard(2, 2, 5).unwrap();
        let s = to_dressing(&w, -2, 1).unwrap();
        assert!(s.agrees_with(&MatrixPdo::identity(2, 1)));
        // nonempty kernel -> not in the big cell
        let w = GrassmannPoint::make_point(1, 1, 2, &[v1(1, 2, &[(0, 1)])]).unwrap();
        assert_eq!(to_dressing(&w, -2, 1).unwrap_err(), Error::BigCellViolation);
    }

    #[test]
    fn bigcell_duality_scalar() {
        // perp(from_dressing(S)) = from_dressing((S*)^-1) with swapped windows
        let s = MatrixPdo::identity(1, 3)
            .add(&MatrixPdo::scalar_term(3, -1, XPoly::constant(rat(2))))
            .unwrap();
        let w = from_dressing(&s, 2, 3).unwrap();
        let dual = s.adjoint().invert_monic(-8).unwrap();
        let wd = from_dressing(&dual, 3, 2).unwrap();
        assert_eq!(w.perp().unwrap(), wd);
        assert!(orthogonal(&w, &wd).unwrap());
    }

    #[test]
    fn quotient_equal_examples() {
        let n_height = 2;
        let w_std = GrassmannPoint::standard(1, 2, n_height).unwrap();
        let g = quotient_equal(&w_std, &w_std, 3).unwrap().unwrap();
        assert!(g.is_identity());
        // W2 = (1+z)·W_std
        let gens: Vec<VectorLaurent> = (1..=2)
            .map(|j| v1(2, n_height, &[(-j, 1), (-j + 1, 1)]))
            .collect();
        let w2 = GrassmannPoint::make_point(1, 2, n_height, &gens).unwrap();
        let g = quotient_equal(&w_std, &w2, 3).unwrap().unwrap();
        assert_eq!(g.diag()[0].coeff(1).unwrap(), rat(1));
        // different Fredholm data -> not equal in the quotient
        let w3 = GrassmannPoint::make_point(
            1,
            2,
            n_height,
            &[v1(2, n_height, &[(-2, 1)]), v1(2, n_height, &[(0, 1)])],
        )
        .unwrap();
        assert!(quotient_equal(&w_std, &w3, 3).unwrap().is_none());
    }

    #[test]
    fn kp_tangent_standard_fixed() {
        let w = GrassmannPoint::standard(2, 2, 2).unwrap();
        // total first flow: a = z^-1 in both components
        let a = VectorLaurent::new(vec![
            LaurentSeries::monomial(-1, rat(1), -1, 1).unwrap(),
            LaurentSeries::monomial(-1, rat(1), -1, 1).unwrap(),
        ])
        .unwrap();
        let t = kp_tangent(&a, &w).unwrap();
        assert!(t.iter().all(VectorLaurent::is_zero));
        // single-component diagonal monomial
        let a = VectorLaurent::new(vec![
            LaurentSeries::monomial(-1, rat(1), -1, 1).unwrap(),
            LaurentSeries::zero(-1, 1),
        ])
        .unwrap();
        let t = kp_tangent(&a, &w).unwrap();
        assert!(t.iter().all(VectorLaurent::is_zero));
    }

    #[test]
    fn kp_tangent_scalar_dressing_point() {
        // W = (1+cz)^-1 W_std comes from an x-independent dressing operator,
        // so every KP flow fixes it: z^-1·W is contained in W and the
        // representative vanishes identically.
        let s = MatrixPdo::identity(1, 2)
            .add(&MatrixPdo::scalar_term(2, -1, XPoly::constant(rat(3))))
            .unwrap();
        let w = from_dressing(&s, 2, 4).unwrap();
        let a = VectorLaurent::new(vec![LaurentSeries::monomial(-1, rat(1), -1, 1).unwrap()])
            .unwrap();
        let t = kp_tangent(&a, &w).unwrap();
        assert!(t.iter().all(VectorLaurent::is_zero));
    }

    #[test]
    fn json_round_trip() {
        let w = GrassmannPoint::make_point(
            2,
            1,
            2,
            &[VectorLaurent::new(vec![
                LaurentSeries::from_terms(-1, 2, [(-1, rat(1)), (1, rat(2))]).unwrap(),
                LaurentSeries::from_terms(-1, 2, [(0, rat(5))]).unwrap(),
            ])
            .unwrap()],
        )
        .unwrap();
        let v = w.to_json();
        let w2 = GrassmannPoint::from_json(&v).unwrap();
        assert_eq!(w, w2);
    }
}
