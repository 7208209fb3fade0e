//! Exact arithmetic in `S = F_p[x,y]/(x²y)`.
//!
//! Every element has a unique normal form supported on the monomials
//! `x^i` (i ≥ 0), `y^j` (j ≥ 1) and `x·y^j` (j ≥ 1); anything divisible by
//! `x²y` is zero. The ring is graded by total degree, which the rest of the
//! crate relies on.
//!
//! [`LocElem`] models elements `a·(x+y)^{-k}` of the total quotient ring
//! (where `u = x/(x+y)`, `e = u²`, `z = x²/(x+y)` and
//! `n_k = xy/(x+y)^k` live), and [`QuotientRingModel`] models small
//! finite-dimensional quotients such as `S/(x+y)S`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{Matrix, Subspace};

/// A monomial `x^x · y^y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mono {
    pub x: u32,
    pub y: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { x: 0, y: 0 };
    pub const X: Mono = Mono { x: 1, y: 0 };
    pub const Y: Mono = Mono { x: 0, y: 1 };

    pub fn new(x: u32, y: u32) -> Self {
        Mono { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }

    /// False iff the monomial is divisible by `x²y`.
    pub fn is_normal(self) -> bool {
        !(self.x >= 2 && self.y >= 1)
    }

    /// Product, or `None` when it vanishes in `S`.
    pub fn mul(self, other: Mono) -> Option<Mono> {
        let m = Mono::new(self.x + other.x, self.y + other.y);
        m.is_normal().then_some(m)
    }

    /// Pure powers of one variable (including 1).
    pub fn is_pure(self) -> bool {
        self.x == 0 || self.y == 0
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(other.x.cmp(&self.x))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (0, 0) => write!(f, "1"),
            (a, 0) => write!(f, "{}", pow_str("x", a)),
            (0, b) => write!(f, "{}", pow_str("y", b)),
            (a, b) => write!(f, "{}*{}", pow_str("x", a), pow_str("y", b)),
        }
    }
}

pub(crate) fn pow_str(v: &str, e: u32) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

/// Normal-form monomials of total degree `d`, in monomial order.
pub fn monomials_of_degree(d: u32) -> Vec<Mono> {
    match d {
        0 => vec![Mono::ONE],
        1 => vec![Mono::X, Mono::Y],
        _ => vec![Mono::new(d, 0), Mono::new(1, d - 1), Mono::new(0, d)],
    }
}

/// All normal-form monomials of total degree `< d`, ordered by degree and
/// then by decreasing `x`-exponent. For `d ≥ 2` there are `3d − 3` of them.
pub fn basis_upto(d: u32) -> Vec<Mono> {
    (0..d).flat_map(monomials_of_degree).collect()
}

/// An element of `S` in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SElem {
    f: Fp,
    terms: BTreeMap<Mono, u32>,
}

impl SElem {
    pub fn zero(f: Fp) -> Self {
        SElem {
            f,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(f: Fp) -> Self {
        SElem::mono(f, 1, Mono::ONE)
    }

    pub fn x(f: Fp) -> Self {
        SElem::mono(f, 1, Mono::X)
    }

    pub fn y(f: Fp) -> Self {
        SElem::mono(f, 1, Mono::Y)
    }

    /// `c · m`, reduced.
    pub fn mono(f: Fp, c: u32, m: Mono) -> Self {
        let mut e = SElem::zero(f);
        e.add_term(c, m);
        e
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    /// Adds `c · m`, dropping it if `m` is divisible by `x²y`.
    pub fn add_term(&mut self, c: u32, m: Mono) {
        if c == 0 || !m.is_normal() {
            return;
        }
        let f = self.f;
        let entry = self.terms.entry(m).or_insert(0);
        *entry = f.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mono, u32)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coeff(&self, m: Mono) -> u32 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree of a stored term.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    /// The homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> SElem {
        SElem {
            f: self.f,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(&m, &c)| (m, c))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add(&self, other: &SElem) -> SElem {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(c, m);
        }
        out
    }

    pub fn neg(&self) -> SElem {
        let f = self.f;
        SElem {
            f,
            terms: self.terms.iter().map(|(&m, &c)| (m, f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &SElem) -> SElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> SElem {
        let mut out = SElem::zero(self.f);
        for (m, d) in self.terms() {
            out.add_term(self.f.mul(c, d), m);
        }
        out
    }

    pub fn mul(&self, other: &SElem) -> SElem {
        let f = self.f;
        let mut out = SElem::zero(f);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                if let Some(m) = m1.mul(m2) {
                    out.add_term(f.mul(c1, c2), m);
                }
            }
        }
        out
    }

    pub fn mul_mono(&self, m: Mono) -> SElem {
        let mut out = SElem::zero(self.f);
        for (m1, c) in self.terms() {
            if let Some(p) = m1.mul(m) {
                out.add_term(c, p);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> SElem {
        let mut acc = SElem::one(self.f);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `x + y`, the nonzerodivisor inverted in the total quotient ring.
    pub fn x_plus_y(f: Fp) -> SElem {
        SElem::x(f).add(&SElem::y(f))
    }

    /// Coordinates of the degree-`d` component in `monomials_of_degree(d)`.
    pub fn coords(&self, d: u32) -> Vec<u32> {
        monomials_of_degree(d)
            .into_iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    pub fn from_coords(f: Fp, d: u32, coords: &[u32]) -> SElem {
        let mut out = SElem::zero(f);
        for (m, &c) in monomials_of_degree(d).into_iter().zip(coords) {
            out.add_term(c, m);
        }
        out
    }

    /// Exact division by `(x+y)`, if it divides.
    pub fn div_x_plus_y(&self) -> Option<SElem> {
        let f = self.f;
        let mut out = SElem::zero(f);
        let Some(top) = self.max_degree() else {
            return Some(out);
        };
        for d in 0..=top {
            let comp = self.component(d);
            if comp.is_zero() {
                continue;
            }
            if d == 0 {
                return None;
            }
            let map = mult_matrix(&SElem::x_plus_y(f), d - 1);
            let c = map.solve(&comp.coords(d))?;
            out = out.add(&SElem::from_coords(f, d - 1, &c));
        }
        Some(out)
    }

    /// Canonical text form `c*x^i*y^j + ...` in monomial order.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = self.f;
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let s = f.to_signed(c);
            let (sign, mag) = if s < 0 { ("-", -s) } else { ("+", s) };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if m == Mono::ONE {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{mag}*{m}"));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms()
            .map(|(m, c)| serde_json::json!({"xi": m.x, "yj": m.y, "c": c}))
            .collect();
        serde_json::json!({ "terms": terms })
    }

    pub fn from_json(f: Fp, v: &serde_json::Value) -> Result<SElem> {
        let terms = v
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::Parse("missing \"terms\" array".into()))?;
        let mut out = SElem::zero(f);
        for t in terms {
            let get = |k: &str| {
                t.get(k)
                    .and_then(|v| v.as_i64())
                    .ok_or_else(|| Error::Parse(format!("term without integer \"{k}\"")))
            };
            let (xi, yj, c) = (get("xi")?, get("yj")?, get("c")?);
            if xi < 0 || yj < 0 {
                return Err(Error::Parse("negative exponent".into()));
            }
            out.add_term(f.from_i64(c), Mono::new(xi as u32, yj as u32));
        }
        Ok(out)
    }
}

impl fmt::Display for SElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

/// Matrix of multiplication by `s` (homogeneous of degree `e`) from `S_d` to
/// `S_{d+e}` in the monomial bases.
pub fn mult_matrix(s: &SElem, d: u32) -> Matrix {
    let f = s.field();
    let src = monomials_of_degree(d);
    let e = s.min_degree().unwrap_or(0);
    let dst = monomials_of_degree(d + e);
    let cols: Vec<Vec<u32>> = src
        .iter()
        .map(|&m| {
            let prod = s.mul_mono(m);
            dst.iter().map(|&t| prod.coeff(t)).collect()
        })
        .collect();
    Matrix::from_cols(f, dst.len(), &cols)
}

/// Parses a polynomial expression in `x`, `y` and reduces it to normal form.
///
/// Grammar: sums and differences of products of factors; a factor is an
/// integer, `x`, `y`, or a parenthesized expression, optionally raised to a
/// nonnegative integer power with `^`. Division is allowed only by integer
/// constants that are invertible mod `p`.
pub fn nf(f: Fp, expr: &str) -> Result<SElem> {
    let mut p = PolyParser {
        f,
        chars: expr.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!(
            "unexpected '{}' at offset {} in \"{expr}\"",
            p.chars[p.pos], p.pos
        )));
    }
    Ok(e)
}

struct PolyParser {
    f: Fp,
    chars: Vec<char>,
    pos: usize,
}

impl PolyParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<SElem> {
        let mut acc = SElem::zero(self.f);
        let mut sign = 1;
        if let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            if c == '-' {
                sign = -1;
            }
        }
        loop {
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some('-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SElem> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.integer()?;
                    let r = self.f.from_i64(d);
                    if r == 0 {
                        return Err(Error::NotInvertible(d, self.f.p()));
                    }
                    acc = acc.scale(self.f.inv(r));
                }
                Some('x' | 'y' | '(') => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<SElem> {
        let base = match self.peek() {
            Some('x') => {
                self.pos += 1;
                SElem::x(self.f)
            }
            Some('y') => {
                self.pos += 1;
                SElem::y(self.f)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                self.pos += 1;
                e
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                SElem::one(self.f).scale(self.f.from_i64(n))
            }
            Some(c) => return Err(Error::Parse(format!("unexpected '{c}'"))),
            None => return Err(Error::Parse("unexpected end of expression".into())),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            if e < 0 {
                return Err(Error::Parse("negative exponent".into()));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected integer at offset {start}")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>()
            .map_err(|_| Error::Parse(format!("integer '{s}' out of range")))
    }
}

/// Outcome of a zero test performed at a finite depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Zero,
    NonZero,
    /// The depth bound is below the degrees where cancellation happens.
    Indeterminate,
}

/// An element `numerator · (x+y)^{-denom_power}` of the total quotient
/// ring, with identities asserted only up to total degree `depth_bound`.
///
/// `span` records the highest degree touched while forming the numerator,
/// so that a zero numerator produced by cancellation above the depth bound
/// is reported as undecided.
#[derive(Debug, Clone)]
pub struct LocElem {
    numerator: SElem,
    denom_power: u32,
    depth_bound: u32,
    span: u32,
}

impl LocElem {
    pub fn new(numerator: SElem, denom_power: u32, depth_bound: u32) -> Self {
        let span = numerator.max_degree().unwrap_or(0);
        LocElem {
            numerator,
            denom_power,
            depth_bound,
            span,
        }
    }

    pub fn from_s(a: SElem, depth_bound: u32) -> Self {
        LocElem::new(a, 0, depth_bound)
    }

    pub fn numerator(&self) -> &SElem {
        &self.numerator
    }

    pub fn denom_power(&self) -> u32 {
        self.denom_power
    }

    pub fn depth_bound(&self) -> u32 {
        self.depth_bound
    }

    fn field(&self) -> Fp {
        self.numerator.field()
    }

    /// `u = x(x+y)^{-1}`.
    pub fn u(f: Fp, depth: u32) -> Self {
        LocElem::new(SElem::x(f), 1, depth)
    }

    /// `e = u² = x²(x+y)^{-2}`, an idempotent.
    pub fn e(f: Fp, depth: u32) -> Self {
        LocElem::new(SElem::x(f).pow(2), 2, depth)
    }

    /// `z = x²(x+y)^{-1}`, generating the least proper overring.
    pub fn z(f: Fp, depth: u32) -> Self {
        LocElem::new(SElem::x(f).pow(2), 1, depth)
    }

    /// `n_k = xy(x+y)^{-k}`.
    pub fn n(f: Fp, k: u32, depth: u32) -> Self {
        LocElem::new(SElem::x(f).mul(&SElem::y(f)), k, depth)
    }

    fn lift(&self, extra: u32) -> (SElem, u32) {
        let f = self.field();
        let factor = SElem::x_plus_y(f).pow(extra);
        (self.numerator.mul(&factor), self.span + extra)
    }

    pub fn add(&self, other: &LocElem) -> LocElem {
        let k = self.denom_power.max(other.denom_power);
        let (a, sa) = self.lift(k - self.denom_power);
        let (b, sb) = other.lift(k - other.denom_power);
        LocElem {
            numerator: a.add(&b),
            denom_power: k,
            depth_bound: self.depth_bound.min(other.depth_bound),
            span: sa.max(sb),
        }
    }

    pub fn neg(&self) -> LocElem {
        LocElem {
            numerator: self.numerator.neg(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &LocElem) -> LocElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LocElem) -> LocElem {
        LocElem {
            numerator: self.numerator.mul(&other.numerator),
            denom_power: self.denom_power + other.denom_power,
            depth_bound: self.depth_bound.min(other.depth_bound),
            span: self.span + other.span,
        }
    }

    pub fn scale_s(&self, s: &SElem) -> LocElem {
        self.mul(&LocElem::from_s(s.clone(), self.depth_bound))
    }

    /// Cancels common factors of `(x+y)` between numerator and denominator.
    pub fn reduce(&self) -> LocElem {
        let mut out = self.clone();
        while out.denom_power > 0 && !out.numerator.is_zero() {
            match out.numerator.div_x_plus_y() {
                Some(q) => {
                    out.numerator = q;
                    out.denom_power -= 1;
                }
                None => break,
            }
        }
        if out.numerator.is_zero() {
            out.denom_power = 0;
        }
        out
    }

    /// Decides whether the element vanishes, honouring the depth bound.
    pub fn zero_test(&self) -> Decision {
        if let Some(d) = self.numerator.min_degree() {
            if d <= self.depth_bound {
                return Decision::NonZero;
            }
            return Decision::Indeterminate;
        }
        if self.span > self.depth_bound {
            Decision::Indeterminate
        } else {
            Decision::Zero
        }
    }
}

/// `Ok(true)` iff `a` vanishes; an undecidable comparison is an error.
pub fn loc_is_zero(a: &LocElem) -> Result<bool> {
    match a.zero_test() {
        Decision::Zero => Ok(true),
        Decision::NonZero => Ok(false),
        Decision::Indeterminate => Err(Error::Indeterminate(format!(
            "depth bound {} too small to decide a term of degree {}",
            a.depth_bound, a.span
        ))),
    }
}

/// Cross-multiplied equality test for two localized elements.
pub fn loc_eq(a: &LocElem, b: &LocElem) -> Result<bool> {
    loc_is_zero(&a.sub(b))
}

/// A finite-dimensional commutative algebra with a monomial basis and the
/// action tables of its radical generators.
#[derive(Debug, Clone)]
pub struct QuotientRingModel {
    pub name: String,
    pub variables: Vec<String>,
    /// Basis labels.
    pub basis: Vec<String>,
    /// For each variable, its multiplication matrix on the basis.
    pub actions: Vec<Matrix>,
    f: Fp,
}

impl QuotientRingModel {
    /// `F_p[vars] / (relations)` for homogeneous relations, each given as a
    /// list of `(coefficient, exponent vector)`. The quotient must vanish in
    /// some degree `≤ 24`.
    pub fn presented(
        f: Fp,
        name: &str,
        variables: &[&str],
        relations: &[Vec<(i64, Vec<u32>)>],
    ) -> Result<Self> {
        let n = variables.len();
        let rel_degree = |r: &Vec<(i64, Vec<u32>)>| -> Result<u32> {
            let degs: Vec<u32> = r.iter().map(|(_, e)| e.iter().sum()).collect();
            match degs.first() {
                Some(&d) if degs.iter().all(|&e| e == d) => Ok(d),
                _ => Err(Error::Parse("relations must be nonzero and homogeneous".into())),
            }
        };
        let mut pieces: Vec<(Vec<Vec<u32>>, Subspace)> = Vec::new();
        let mut top = None;
        for d in 0..=24u32 {
            let monos = exponent_vectors(n, d);
            let mut rows = Vec::new();
            for r in relations {
                let e = rel_degree(r)?;
                if e > d {
                    continue;
                }
                for m in exponent_vectors(n, d - e) {
                    let mut row = vec![0u32; monos.len()];
                    for (c, ex) in r {
                        let prod: Vec<u32> = ex.iter().zip(&m).map(|(a, b)| a + b).collect();
                        let idx = monos.iter().position(|v| *v == prod).unwrap();
                        row[idx] = f.add(row[idx], f.from_i64(*c));
                    }
                    rows.push(row);
                }
            }
            let ideal = Subspace::span(f, monos.len(), rows);
            if ideal.dim() == monos.len() {
                top = Some(d);
                break;
            }
            pieces.push((monos, ideal));
        }
        if top.is_none() {
            return Err(Error::NotFiniteDimensional(name.to_string()));
        }
        // basis: monomials that are not ideal pivots, degree by degree
        let mut basis_monos: Vec<Vec<u32>> = Vec::new();
        let mut offsets = Vec::new();
        for (monos, ideal) in &pieces {
            offsets.push(basis_monos.len());
            for (i, m) in monos.iter().enumerate() {
                let mut probe = vec![0u32; monos.len()];
                probe[i] = 1;
                // keep monomials independent modulo the ideal and the ones already kept
                let kept: Vec<Vec<u32>> = basis_monos
                    .iter()
                    .filter(|b| b.iter().sum::<u32>() == m.iter().sum::<u32>())
                    .map(|b| {
                        let j = monos.iter().position(|v| v == b).unwrap();
                        let mut u = vec![0u32; monos.len()];
                        u[j] = 1;
                        u
                    })
                    .collect();
                let span = ideal.sum(&Subspace::span(f, monos.len(), kept));
                if !span.contains(&probe) {
                    basis_monos.push(m.clone());
                }
            }
        }
        let dim = basis_monos.len();
        let coords = |v: &[u32]| -> Vec<u32> {
            // express monomial v in the basis modulo the ideal
            let d: u32 = v.iter().sum();
            let mut out = vec![0u32; dim];
            if d as usize >= pieces.len() {
                return out;
            }
            let (monos, ideal) = &pieces[d as usize];
            let local: Vec<usize> = (0..dim)
                .filter(|&b| basis_monos[b].iter().sum::<u32>() == d)
                .collect();
            let mut target = vec![0u32; monos.len()];
            target[monos.iter().position(|m| m.as_slice() == v).unwrap()] = 1;
            let target = ideal.reduce(&target);
            let cols: Vec<Vec<u32>> = local
                .iter()
                .map(|&b| {
                    let mut u = vec![0u32; monos.len()];
                    u[monos.iter().position(|m| *m == basis_monos[b]).unwrap()] = 1;
                    ideal.reduce(&u)
                })
                .collect();
            let sol = Matrix::from_cols(f, monos.len(), &cols)
                .solve(&target)
                .expect("basis spans the quotient");
            for (k, &b) in local.iter().enumerate() {
                out[b] = sol[k];
            }
            out
        };
        let actions = (0..n)
            .map(|var| {
                let cols: Vec<Vec<u32>> = basis_monos
                    .iter()
                    .map(|b| {
                        let mut prod = b.clone();
                        prod[var] += 1;
                        coords(&prod)
                    })
                    .collect();
                Matrix::from_cols(f, dim, &cols)
            })
            .collect();
        let labels = basis_monos
            .iter()
            .map(|e| monomial_label(variables, e))
            .collect();
        Ok(QuotientRingModel {
            name: name.to_string(),
            variables: variables.iter().map(|s| s.to_string()).collect(),
            basis: labels,
            actions,
            f,
        })
    }

    /// Model of `S/(x+y)S`, computed directly from the graded pieces of `S`.
    pub fn s_mod_x_plus_y(f: Fp) -> Self {
        let xy = SElem::x_plus_y(f);
        let mut basis: Vec<(u32, Vec<u32>, Subspace)> = Vec::new();
        let mut labels = Vec::new();
        for d in 0..8u32 {
            let dim = monomials_of_degree(d).len();
            let image = if d == 0 {
                Subspace::zero(f, dim)
            } else {
                Subspace::full(f, monomials_of_degree(d - 1).len()).image(&mult_matrix(&xy, d - 1))
            };
            if image.dim() == dim {
                break;
            }
            for (i, m) in monomials_of_degree(d).into_iter().enumerate() {
                let already: Vec<Vec<u32>> = basis
                    .iter()
                    .filter(|(e, _, _)| *e == d)
                    .map(|(_, v, _)| v.clone())
                    .collect();
                let mut probe = vec![0u32; dim];
                probe[i] = 1;
                if !image.sum(&Subspace::span(f, dim, already)).contains(&probe) {
                    basis.push((d, probe, image.clone()));
                    labels.push(m.to_string());
                }
            }
        }
        let total = basis.len();
        let action = |var: &SElem| -> Matrix {
            let cols: Vec<Vec<u32>> = basis
                .iter()
                .map(|(d, v, _)| {
                    let elem = SElem::from_coords(f, *d, v).mul(var);
                    let target_deg = d + 1;
                    let mut out = vec![0u32; total];
                    let locals: Vec<usize> =
                        (0..total).filter(|&b| basis[b].0 == target_deg).collect();
                    if locals.is_empty() {
                        return out;
                    }
                    let image = &basis[locals[0]].2;
                    let dim = monomials_of_degree(target_deg).len();
                    let target = image.reduce(&elem.coords(target_deg));
                    let cols: Vec<Vec<u32>> =
                        locals.iter().map(|&b| image.reduce(&basis[b].1)).collect();
                    let sol = Matrix::from_cols(f, dim, &cols)
                        .solve(&target)
                        .expect("basis spans the quotient");
                    for (k, &b) in locals.iter().enumerate() {
                        out[b] = sol[k];
                    }
                    out
                })
                .collect();
            Matrix::from_cols(f, total, &cols)
        };
        QuotientRingModel {
            name: "S/(x+y)S".into(),
            variables: vec!["x".into(), "y".into()],
            basis: labels,
            actions: vec![action(&SElem::x(f)), action(&SElem::y(f))],
            f,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the common kernel of all radical generators.
    pub fn socle_dim(&self) -> usize {
        socle_dim(self)
    }
}

/// Socle dimension: `dim {v : v·g = 0 for every radical generator g}`.
pub fn socle_dim(q: &QuotientRingModel) -> usize {
    let n = q.dim();
    if q.actions.is_empty() {
        return n;
    }
    let stacked = q
        .actions
        .iter()
        .skip(1)
        .fold(q.actions[0].clone(), |acc, m| acc.vstack(m));
    stacked.kernel().len()
}

fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponent_vectors(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn monomial_label(vars: &[&str], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| pow_str(v, k))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl QuotientRingModel {
    pub fn field(&self) -> Fp {
        self.f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn nf_examples() {
        let f = f5();
        assert!(nf(f, "x^2*y").unwrap().is_zero());
        assert_eq!(nf(f, "x*y^3").unwrap().to_canonical_string(), "x*y^3");
        assert_eq!(
            nf(f, "(x+y)^2").unwrap().to_canonical_string(),
            "x^2 + 2*x*y + y^2"
        );
        assert!(nf(f, "x/5").is_err());
        assert!(nf(f, "x + ").is_err());
        assert_eq!(nf(f, "3*x/3").unwrap(), SElem::x(f));
    }

    #[test]
    fn basis_counts() {
        assert_eq!(basis_upto(2).len(), 3);
        let b3: Vec<String> = basis_upto(3).iter().map(|m| m.to_string()).collect();
        assert_eq!(b3, ["1", "x", "y", "x^2", "x*y", "y^2"]);
        for d in 2..30 {
            assert_eq!(basis_upto(d).len() as u32, 3 * d - 3);
        }
    }

    #[test]
    fn localized_identities() {
        let f = f5();
        for depth in 5..9 {
            let u = LocElem::u(f, depth);
            let e = LocElem::e(f, depth);
            assert!(loc_eq(&u.mul(&u), &u.mul(&u).mul(&u)).unwrap());
            assert!(loc_eq(&e.mul(&e), &e).unwrap());
            assert!(loc_eq(&e, &u.mul(&u)).unwrap());
            let ye = e.scale_s(&SElem::y(f));
            assert!(loc_is_zero(&ye).unwrap());
            let one = LocElem::from_s(SElem::one(f), depth);
            let rhs = LocElem::new(nf(f, "y*(2*x+y)").unwrap(), 2, depth);
            assert!(loc_eq(&one.sub(&e), &rhs).unwrap());
        }
    }

    #[test]
    fn shallow_depth_is_indeterminate() {
        let f = f5();
        let e = LocElem::e(f, 3);
        assert!(matches!(
            loc_is_zero(&e.mul(&e).sub(&e)),
            Err(Error::Indeterminate(_))
        ));
        assert!(!loc_is_zero(&LocElem::u(f, 3)).unwrap());
    }

    #[test]
    fn reduce_cancels() {
        let f = f5();
        // xy^2 / (x+y) = xy
        let a = LocElem::new(nf(f, "x*y^2").unwrap(), 1, 6).reduce();
        assert_eq!(a.denom_power(), 0);
        assert_eq!(a.numerator(), &nf(f, "x*y").unwrap());
    }

    #[test]
    fn socle_dimensions() {
        let f = f5();
        let cubic = QuotientRingModel::presented(f, "F[x]/(x^3)", &["x"], &[vec![(1, vec![3])]])
            .unwrap();
        assert_eq!(cubic.dim(), 3);
        assert_eq!(cubic.socle_dim(), 1);
        let einf = QuotientRingModel::presented(
            f,
            "F[x,z]/(z^2,zx,x^2)",
            &["x", "z"],
            &[
                vec![(1, vec![0, 2])],
                vec![(1, vec![1, 1])],
                vec![(1, vec![2, 0])],
            ],
        )
        .unwrap();
        assert_eq!(einf.dim(), 3);
        assert_eq!(einf.socle_dim(), 2);
        let residue = QuotientRingModel::presented(
            f,
            "F",
            &["x", "y"],
            &[vec![(1, vec![1, 0])], vec![(1, vec![0, 1])]],
        )
        .unwrap();
        assert_eq!(residue.socle_dim(), 1);
        let direct = QuotientRingModel::s_mod_x_plus_y(f);
        assert_eq!(direct.dim(), 3);
        assert_eq!(direct.socle_dim(), 1);
    }

    #[test]
    fn binomial_presentation() {
        // F[x,z]/(z^2 - x^2, zx - x^2, x^3): same shape as the E-infinity fibre with x − z killed by the radical
        let f = f5();
        let q = QuotientRingModel::presented(
            f,
            "binomial",
            &["x", "z"],
            &[
                vec![(1, vec![0, 2]), (-1, vec![2, 0])],
                vec![(1, vec![1, 1]), (-1, vec![2, 0])],
                vec![(1, vec![3, 0])],
            ],
        )
        .unwrap();
        assert_eq!(q.dim(), 4);
        // x² and x − z
        assert_eq!(q.socle_dim(), 2);
    }

    fn arb_selem() -> impl Strategy<Value = Vec<(u32, u32, u32)>> {
        proptest::collection::vec((0u32..5, 0u32..4, 0u32..4), 0..6)
    }

    fn build(f: Fp, terms: &[(u32, u32, u32)]) -> SElem {
        let mut e = SElem::zero(f);
        for &(c, x, y) in terms {
            e.add_term(c, Mono::new(x, y));
        }
        e
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_selem(), b in arb_selem(), c in arb_selem()) {
            let f = f5();
            let (a, b, c) = (build(f, &a), build(f, &b), build(f, &c));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            let reparsed = nf(f, &a.to_canonical_string()).unwrap();
            prop_assert_eq!(reparsed, a.clone());
            let json = SElem::from_json(f, &a.to_json()).unwrap();
            prop_assert_eq!(json, a);
        }

        #[test]
        fn x_plus_y_is_a_nonzerodivisor(d in 1u32..12) {
            let f = f5();
            let m = mult_matrix(&SElem::x_plus_y(f), d - 1);
            prop_assert_eq!(m.rank(), monomials_of_degree(d - 1).len());
        }

        #[test]
        fn loc_difference_symmetry(a in arb_selem(), b in arb_selem(), k in 0u32..3, l in 0u32..3) {
            let f = f5();
            let p = LocElem::new(build(f, &a), k, 16);
            let q = LocElem::new(build(f, &b), l, 16);
            let ab = loc_is_zero(&p.sub(&q)).ok();
            let ba = loc_is_zero(&q.sub(&p)).ok();
            prop_assert_eq!(ab, ba);
        }
    }
}
