//! Graded finitely presented `S`-modules.
//!
//! A module is given by generators with degrees and homogeneous relations in
//! the free module `⊕ S(−d_i)`. Its degree-`d` piece is the quotient of the
//! span of the words `g_i·μ` (`deg μ = d − d_i`) by the relations multiplied
//! up to degree `d`. The pieces are finite dimensional, so every question
//! about a single degree is exact linear algebra. Pieces are computed on
//! demand and cached.
//!
//! Of the spanning words of a piece, a subset of *nodes* is kept as a basis.
//! Pure monomials are preferred to mixed ones, later generators to earlier
//! ones; for the catalog presentations this keeps the nodes on the `x`- and
//! `y`-threads of the generators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde_json::json;

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{is_zero_vec, Matrix, Subspace};
use crate::ring::{monomials_of_degree, Mono, SElem};

/// A generator label with its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gen {
    pub label: String,
    pub degree: i32,
}

/// An element of the free module, one ring coefficient per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeElem(pub Vec<SElem>);

impl FreeElem {
    pub fn zero(f: Fp, n: usize) -> Self {
        FreeElem(vec![SElem::zero(f); n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(SElem::is_zero)
    }
}

/// A spanning word `g·μ` of a graded piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    pub gen: usize,
    pub mono: Mono,
}

/// One graded piece `M_d`.
#[derive(Debug)]
pub struct Piece {
    pub degree: i32,
    /// Spanning words, least preferred first.
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    relations: Subspace,
    /// Indices into `words` of the kept basis words, in display order.
    nodes: Vec<usize>,
}

impl Piece {
    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Word> + '_ {
        self.nodes.iter().map(|&i| self.words[i])
    }

    pub fn node(&self, i: usize) -> Word {
        self.words[self.nodes[i]]
    }

    pub fn num_words(&self) -> usize {
        self.words.len()
    }

    /// Node coordinates of a word vector.
    pub fn reduce(&self, word_vec: &[u32]) -> Vec<u32> {
        let w = self.relations.reduce(word_vec);
        self.nodes.iter().map(|&i| w[i]).collect()
    }

    pub fn word_index(&self, w: Word) -> Option<usize> {
        self.index.get(&w).copied()
    }

    /// Node coordinates of a single word (zero if it is not a spanning word).
    pub fn word_coords(&self, w: Word) -> Vec<u32> {
        match self.word_index(w) {
            Some(i) => {
                let mut v = vec![0; self.words.len()];
                v[i] = 1;
                self.reduce(&v)
            }
            None => vec![0; self.dim()],
        }
    }
}

/// A homogeneous-by-parts element: node coordinates per degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Elem {
    parts: BTreeMap<i32, Vec<u32>>,
}

impl Elem {
    pub fn zero() -> Self {
        Elem::default()
    }

    pub fn homogeneous(d: i32, coords: Vec<u32>) -> Self {
        let mut e = Elem::zero();
        if !is_zero_vec(&coords) {
            e.parts.insert(d, coords);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (i32, &Vec<u32>)> {
        self.parts.iter().map(|(&d, v)| (d, v))
    }

    pub fn part(&self, d: i32) -> Option<&Vec<u32>> {
        self.parts.get(&d)
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.parts.keys().copied().collect()
    }

    /// The degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<i32> {
        if self.parts.len() == 1 {
            self.parts.keys().next().copied()
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parts.len() <= 1
    }

    pub fn add(&self, f: Fp, other: &Elem) -> Elem {
        let mut out = self.clone();
        for (d, v) in other.parts() {
            out.add_part(f, d, v);
        }
        out
    }

    pub fn add_part(&mut self, f: Fp, d: i32, v: &[u32]) {
        let entry = self.parts.entry(d).or_insert_with(|| vec![0; v.len()]);
        for (a, &b) in entry.iter_mut().zip(v) {
            *a = f.add(*a, b);
        }
        if is_zero_vec(entry) {
            self.parts.remove(&d);
        }
    }

    pub fn scale(&self, f: Fp, c: u32) -> Elem {
        let mut out = Elem::zero();
        for (d, v) in self.parts() {
            let w: Vec<u32> = v.iter().map(|&a| f.mul(a, c)).collect();
            if !is_zero_vec(&w) {
                out.parts.insert(d, w);
            }
        }
        out
    }

    pub fn neg(&self, f: Fp) -> Elem {
        self.scale(f, f.neg(1))
    }

    pub fn sub(&self, f: Fp, other: &Elem) -> Elem {
        self.add(f, &other.neg(f))
    }

    /// The same coordinates in a twist `M(t)` of the module.
    pub fn shifted(&self, t: i32) -> Elem {
        Elem {
            parts: self.parts.iter().map(|(&d, v)| (d + t, v.clone())).collect(),
        }
    }

    pub fn component(&self, d: i32) -> Elem {
        match self.parts.get(&d) {
            Some(v) => Elem::homogeneous(d, v.clone()),
            None => Elem::zero(),
        }
    }
}

/// A graded finitely presented module over `S`.
pub struct GradedModule {
    name: String,
    f: Fp,
    gens: Vec<Gen>,
    relations: Vec<FreeElem>,
    relation_degrees: Vec<i32>,
    cache: RwLock<HashMap<i32, Arc<Piece>>>,
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedModule")
            .field("name", &self.name)
            .field("gens", &self.gens)
            .field("relations", &self.relation_strings())
            .finish()
    }
}

impl Clone for GradedModule {
    fn clone(&self) -> Self {
        GradedModule {
            name: self.name.clone(),
            f: self.f,
            gens: self.gens.clone(),
            relations: self.relations.clone(),
            relation_degrees: self.relation_degrees.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl GradedModule {
    /// Builds a module, checking that every relation is homogeneous with
    /// respect to the generator degrees.
    pub fn new(f: Fp, name: &str, gens: Vec<Gen>, relations: Vec<FreeElem>) -> Result<Self> {
        let mut kept = Vec::new();
        let mut degrees = Vec::new();
        for r in relations {
            if r.0.len() != gens.len() {
                return Err(Error::InvalidParameter(format!(
                    "relation has {} components for {} generators",
                    r.0.len(),
                    gens.len()
                )));
            }
            let mut deg = None;
            for (c, g) in r.0.iter().zip(&gens) {
                if c.is_zero() {
                    continue;
                }
                if !c.is_homogeneous() {
                    return Err(Error::InvalidParameter(format!(
                        "relation coefficient {c} is not homogeneous"
                    )));
                }
                let e = g.degree + c.min_degree().unwrap() as i32;
                match deg {
                    None => deg = Some(e),
                    Some(d) if d == e => {}
                    Some(_) => {
                        return Err(Error::InvalidParameter(format!(
                            "relation in {name} is not homogeneous"
                        )))
                    }
                }
            }
            if let Some(d) = deg {
                kept.push(r);
                degrees.push(d);
            }
        }
        Ok(GradedModule {
            name: name.to_string(),
            f,
            gens,
            relations: kept,
            relation_degrees: degrees,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn free(f: Fp, name: &str, gens: Vec<Gen>) -> Self {
        GradedModule::new(f, name, gens, Vec::new()).expect("no relations")
    }

    /// Helper for presentations given as strings, e.g. `"m*x - n*y^2"`.
    pub fn from_strings(f: Fp, name: &str, gens: &[(&str, i32)], relations: &[&str]) -> Result<Self> {
        let gens: Vec<Gen> = gens
            .iter()
            .map(|(l, d)| Gen {
                label: l.to_string(),
                degree: *d,
            })
            .collect();
        let labels: Vec<&str> = gens.iter().map(|g| g.label.as_str()).collect();
        let rels = relations
            .iter()
            .map(|r| parse_free(f, &labels, r))
            .collect::<Result<Vec<_>>>()?;
        GradedModule::new(f, name, gens, rels)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: &str) -> GradedModule {
        let mut m = self.clone();
        m.name = name.to_string();
        m
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn relations(&self) -> &[FreeElem] {
        &self.relations
    }

    pub fn relation_degrees(&self) -> &[i32] {
        &self.relation_degrees
    }

    pub fn min_gen_degree(&self) -> Option<i32> {
        self.gens.iter().map(|g| g.degree).min()
    }

    pub fn max_gen_degree(&self) -> Option<i32> {
        self.gens.iter().map(|g| g.degree).max()
    }

    /// Highest degree of a generator or relation: above it, every piece is
    /// obtained from the previous one by free shifts.
    pub fn presentation_degree(&self) -> i32 {
        self.relation_degrees
            .iter()
            .copied()
            .chain(self.gens.iter().map(|g| g.degree))
            .max()
            .unwrap_or(0)
    }

    pub fn piece(&self, d: i32) -> Arc<Piece> {
        if let Some(p) = self.cache.read().unwrap().get(&d) {
            return p.clone();
        }
        let p = Arc::new(self.compute_piece(d));
        self.cache.write().unwrap().insert(d, p.clone());
        p
    }

    fn compute_piece(&self, d: i32) -> Piece {
        let f = self.f;
        let mut words = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            if d >= g.degree {
                for m in monomials_of_degree((d - g.degree) as u32) {
                    words.push(Word { gen: i, mono: m });
                }
            }
        }
        // least preferred first, so that echelon pivots land on them
        words.sort_by_key(|w| (w.mono.is_pure(), w.gen, std::cmp::Reverse(w.mono)));
        let index: HashMap<Word, usize> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let mut rows = Vec::new();
        for (r, &e) in self.relations.iter().zip(&self.relation_degrees) {
            if e > d {
                continue;
            }
            for mu in monomials_of_degree((d - e) as u32) {
                let mut row = vec![0u32; words.len()];
                for (gen, c) in r.0.iter().enumerate() {
                    for (m, a) in c.terms() {
                        if let Some(prod) = m.mul(mu) {
                            let j = index[&Word { gen, mono: prod }];
                            row[j] = f.add(row[j], a);
                        }
                    }
                }
                rows.push(row);
            }
        }
        let relations = Subspace::span(f, words.len(), rows);
        let pivots: Vec<bool> = {
            let mut v = vec![false; words.len()];
            for b in relations.basis() {
                if let Some(p) = b.iter().position(|&c| c != 0) {
                    v[p] = true;
                }
            }
            v
        };
        let mut nodes: Vec<usize> = (0..words.len()).filter(|&i| !pivots[i]).collect();
        nodes.sort_by_key(|&i| (words[i].gen, words[i].mono));
        Piece {
            degree: d,
            words,
            index,
            relations,
            nodes,
        }
    }

    pub fn dim(&self, d: i32) -> usize {
        self.piece(d).dim()
    }

    /// Dimensions of the pieces in degrees `lo..=hi`.
    pub fn hilbert(&self, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi).map(|d| self.dim(d)).collect()
    }

    pub fn node_labels(&self, d: i32) -> Vec<String> {
        let p = self.piece(d);
        p.nodes().map(|w| self.word_label(w)).collect()
    }

    pub fn word_label(&self, w: Word) -> String {
        let g = &self.gens[w.gen].label;
        if g == "1" {
            w.mono.to_string()
        } else if w.mono == Mono::ONE {
            g.clone()
        } else {
            format!("{g}*{}", w.mono)
        }
    }

    /// Multiplies homogeneous coordinates in degree `d` by a monomial.
    pub fn act(&self, d: i32, v: &[u32], mu: Mono) -> Vec<u32> {
        let f = self.f;
        let src = self.piece(d);
        let e = d + mu.degree() as i32;
        let dst = self.piece(e);
        let mut word_vec = vec![0u32; dst.num_words()];
        for (k, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let w = src.node(k);
            if let Some(m) = w.mono.mul(mu) {
                let j = dst.word_index(Word { gen: w.gen, mono: m }).unwrap();
                word_vec[j] = f.add(word_vec[j], c);
            }
        }
        dst.reduce(&word_vec)
    }

    /// Matrix of multiplication by a monomial from `M_d` to `M_{d+deg μ}`.
    pub fn act_matrix(&self, d: i32, mu: Mono) -> Matrix {
        let n = self.dim(d);
        let rows = self.dim(d + mu.degree() as i32);
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|k| {
                let mut v = vec![0; n];
                v[k] = 1;
                self.act(d, &v, mu)
            })
            .collect();
        Matrix::from_cols(self.f, rows, &cols)
    }

    pub fn x_matrix(&self, d: i32) -> Matrix {
        self.act_matrix(d, Mono::X)
    }

    pub fn y_matrix(&self, d: i32) -> Matrix {
        self.act_matrix(d, Mono::Y)
    }

    /// Multiplies an element by a ring element.
    pub fn mul_s(&self, e: &Elem, s: &SElem) -> Elem {
        let f = self.f;
        let mut out = Elem::zero();
        for (d, v) in e.parts() {
            for (m, c) in s.terms() {
                let w = self.act(d, v, m);
                let w: Vec<u32> = w.iter().map(|&a| f.mul(a, c)).collect();
                out.add_part(f, d + m.degree() as i32, &w);
            }
        }
        out
    }

    pub fn mul_mono(&self, e: &Elem, m: Mono) -> Elem {
        let mut out = Elem::zero();
        for (d, v) in e.parts() {
            out.add_part(self.f, d + m.degree() as i32, &self.act(d, v, m));
        }
        out
    }

    pub fn gen_elem(&self, i: usize) -> Elem {
        self.word_elem(Word {
            gen: i,
            mono: Mono::ONE,
        })
    }

    pub fn word_elem(&self, w: Word) -> Elem {
        let d = self.gens[w.gen].degree + w.mono.degree() as i32;
        Elem::homogeneous(d, self.piece(d).word_coords(w))
    }

    /// Image of a free-module element in the module.
    pub fn eval_free(&self, r: &FreeElem) -> Elem {
        let f = self.f;
        let mut out = Elem::zero();
        for (gen, c) in r.0.iter().enumerate() {
            for (m, a) in c.terms() {
                out = out.add(f, &self.word_elem(Word { gen, mono: m }).scale(f, a));
            }
        }
        out
    }

    /// A free-module lift of node coordinates in degree `d`.
    pub fn lift(&self, d: i32, v: &[u32]) -> FreeElem {
        let p = self.piece(d);
        let mut out = FreeElem::zero(self.f, self.gens.len());
        for (k, &c) in v.iter().enumerate() {
            let w = p.node(k);
            out.0[w.gen].add_term(c, w.mono);
        }
        out
    }

    pub fn lift_elem(&self, e: &Elem) -> FreeElem {
        let mut out = FreeElem::zero(self.f, self.gens.len());
        for (d, v) in e.parts() {
            let l = self.lift(d, v);
            for (a, b) in out.0.iter_mut().zip(l.0) {
                *a = a.add(&b);
            }
        }
        out
    }

    /// Basis of the socle `{v ∈ M_d : vx = vy = 0}`.
    pub fn socle(&self, d: i32) -> Vec<Vec<u32>> {
        if self.dim(d) == 0 {
            return Vec::new();
        }
        self.x_matrix(d).vstack(&self.y_matrix(d)).kernel()
    }

    /// Socle vectors in all degrees up to `cap`.
    pub fn socle_upto(&self, cap: i32) -> Vec<(i32, Vec<u32>)> {
        let Some(lo) = self.min_gen_degree() else {
            return Vec::new();
        };
        (lo..=cap)
            .flat_map(|d| self.socle(d).into_iter().map(move |v| (d, v)))
            .collect()
    }

    /// Degree window large enough to contain any socle of this module.
    pub fn default_cap(&self) -> i32 {
        self.presentation_degree() + 4
    }

    pub fn is_cm(&self) -> bool {
        self.socle_upto(self.default_cap()).is_empty()
    }

    pub fn with_relations(&self, name: &str, extra: Vec<FreeElem>) -> Result<GradedModule> {
        let mut rels = self.relations.clone();
        rels.extend(extra);
        GradedModule::new(self.f, name, self.gens.clone(), rels)
    }

    /// The twist with every generator degree raised by `t`.
    pub fn shifted(&self, t: i32) -> GradedModule {
        if t == 0 {
            return self.clone();
        }
        let gens = self
            .gens
            .iter()
            .map(|g| Gen {
                label: g.label.clone(),
                degree: g.degree + t,
            })
            .collect();
        let name = if t > 0 {
            format!("{}(+{t})", self.name)
        } else {
            format!("{}({t})", self.name)
        };
        GradedModule::new(self.f, &name, gens, self.relations.clone()).expect("shift keeps homogeneity")
    }

    /// Direct sum; clashing labels get a numeric suffix.
    pub fn direct_sum(parts: &[&GradedModule]) -> GradedModule {
        let f = parts.first().map(|m| m.f).unwrap_or_default();
        let mut gens: Vec<Gen> = Vec::new();
        let mut rels = Vec::new();
        let total: usize = parts.iter().map(|m| m.gens.len()).sum();
        let mut offset = 0;
        for (idx, m) in parts.iter().enumerate() {
            for g in &m.gens {
                let mut label = g.label.clone();
                if gens.iter().any(|h| h.label == label) || (label == "1" && parts.len() > 1) {
                    label = format!("{}.{}", g.label, idx + 1);
                }
                gens.push(Gen {
                    label,
                    degree: g.degree,
                });
            }
            for r in &m.relations {
                let mut big = FreeElem::zero(f, total);
                for (i, c) in r.0.iter().enumerate() {
                    big.0[offset + i] = c.clone();
                }
                rels.push(big);
            }
            offset += m.gens.len();
        }
        let name = parts.iter().map(|m| m.name.as_str()).collect::<Vec<_>>().join("⊕");
        GradedModule::new(f, &name, gens, rels).expect("summands are homogeneous")
    }

    /// Generator offsets of the summands of a direct sum built from modules
    /// with these generator counts.
    pub fn summand_offsets(counts: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(counts.len());
        let mut acc = 0;
        for c in counts {
            out.push(acc);
            acc += c;
        }
        out
    }

    /// Iterated socle quotient: adds socle vectors as relations until none
    /// remain up to the degree cap. Returns the reduced module and the
    /// number of rounds.
    pub fn cm_reduce(&self, name: &str) -> (GradedModule, usize) {
        let mut cur = self.renamed(name);
        let mut rounds = 0;
        loop {
            let cap = self.default_cap().max(cur.default_cap());
            let soc = cur.socle_upto(cap);
            if soc.is_empty() {
                return (cur, rounds);
            }
            rounds += 1;
            let extra = soc.iter().map(|(d, v)| cur.lift(*d, v)).collect();
            cur = cur.with_relations(name, extra).expect("lifted socle is homogeneous");
        }
    }

    /// Truncation to the nodes whose monomial part has degree at most `t`.
    pub fn truncate(&self, t: u32) -> MatrixModule {
        let mut labels = Vec::new();
        let mut pos: HashMap<(i32, usize), usize> = HashMap::new();
        let lo = self.min_gen_degree().unwrap_or(0);
        let hi = self.max_gen_degree().unwrap_or(0) + t as i32 + 1;
        for d in lo..=hi {
            let p = self.piece(d);
            for (k, w) in p.nodes().enumerate() {
                if w.mono.degree() <= t {
                    pos.insert((d, k), labels.len());
                    labels.push(self.word_label(w));
                }
            }
        }
        let n = labels.len();
        let mut x = Matrix::zeros(self.f, n, n);
        let mut y = Matrix::zeros(self.f, n, n);
        let mut boundary = vec![false; n];
        for (&(d, k), &col) in &pos {
            let mut unit = vec![0; self.dim(d)];
            unit[k] = 1;
            for (mat, mu) in [(&mut x, Mono::X), (&mut y, Mono::Y)] {
                let img = self.act(d, &unit, mu);
                for (j, &c) in img.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    match pos.get(&(d + 1, j)) {
                        Some(&row) => mat.set(row, col, c),
                        None => boundary[col] = true,
                    }
                }
            }
        }
        MatrixModule {
            depth: t,
            labels,
            x,
            y,
            boundary,
        }
    }

    /// Parses an element such as `"m*x^2 - 2*n*y"`; for a single generator
    /// labelled `1` the generator may be omitted (`"x^2"`).
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let labels: Vec<&str> = self.gens.iter().map(|g| g.label.as_str()).collect();
        let r = parse_free(self.f, &labels, s)?;
        Ok(self.eval_free(&r))
    }

    pub fn format_elem(&self, e: &Elem) -> String {
        let f = self.f;
        let mut out = String::new();
        for (d, v) in e.parts() {
            let p = self.piece(d);
            for (k, &c) in v.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let s = f.to_signed(c);
                let (neg, mag) = (s < 0, s.unsigned_abs());
                if out.is_empty() {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                let label = self.word_label(p.node(k));
                if mag == 1 {
                    out.push_str(&label);
                } else if label == "1" {
                    out.push_str(&mag.to_string());
                } else {
                    out.push_str(&format!("{mag}*{label}"));
                }
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }

    pub fn format_free(&self, r: &FreeElem) -> String {
        let f = self.f;
        let mut terms: Vec<(Mono, usize, u32)> = Vec::new();
        for (gen, c) in r.0.iter().enumerate() {
            for (m, a) in c.terms() {
                terms.push((m, gen, a));
            }
        }
        terms.sort_by_key(|&(m, g, _)| (g, m));
        let mut out = String::new();
        for (m, gen, a) in terms {
            let s = f.to_signed(a);
            let (neg, mag) = (s < 0, s.unsigned_abs());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let label = self.word_label(Word { gen, mono: m });
            if mag == 1 {
                out.push_str(&label);
            } else {
                out.push_str(&format!("{mag}*{label}"));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| self.format_free(r)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "name": self.name,
            "generators": self.gens.iter().map(|g| g.label.clone()).collect::<Vec<_>>(),
            "degrees": self.gens.iter().map(|g| g.degree).collect::<Vec<_>>(),
            "relations": self.relation_strings(),
        })
    }

    /// Reads a presentation written by [`GradedModule::to_json`]. The name
    /// may instead be given as `family` and `k`, as in catalog files.
    pub fn from_json(f: Fp, v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("module JSON: {what}"));
        let strings = |key: &str| -> Result<Vec<String>> {
            v.get(key)
                .and_then(|a| a.as_array())
                .ok_or_else(|| bad(&format!("missing array {key:?}")))?
                .iter()
                .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad(&format!("{key} must hold strings"))))
                .collect()
        };
        let name = match (v.get("name").and_then(|n| n.as_str()), v.get("family").and_then(|n| n.as_str())) {
            (Some(n), _) => n.to_string(),
            (None, Some(fam)) => match v.get("k").and_then(|k| k.as_u64()) {
                Some(k) if k > 0 => format!("{fam}_{k}"),
                _ => fam.to_string(),
            },
            _ => return Err(bad("missing \"name\" or \"family\"")),
        };
        let gens = strings("generators")?;
        let degrees: Vec<i32> = v
            .get("degrees")
            .and_then(|a| a.as_array())
            .ok_or_else(|| bad("missing array \"degrees\""))?
            .iter()
            .map(|d| d.as_i64().map(|d| d as i32).ok_or_else(|| bad("degrees must be integers")))
            .collect::<Result<_>>()?;
        if degrees.len() != gens.len() {
            return Err(bad("one degree per generator"));
        }
        let relations = strings("relations")?;
        let gen_refs: Vec<(&str, i32)> = gens.iter().map(String::as_str).zip(degrees).collect();
        let rel_refs: Vec<&str> = relations.iter().map(String::as_str).collect();
        GradedModule::from_strings(f, &name, &gen_refs, &rel_refs)
    }

    /// Presentation of the submodule of `ambient` generated by the given
    /// homogeneous elements, with syzygies collected up to degree `bound`.
    pub fn image_presentation(
        ambient: &GradedModule,
        name: &str,
        gens: &[(String, Elem)],
        bound: i32,
    ) -> Result<GradedModule> {
        let f = ambient.f;
        let mut gen_list = Vec::new();
        for (label, e) in gens {
            let d = e.degree().ok_or_else(|| {
                Error::InvalidParameter(format!("generator {label} is zero or not homogeneous"))
            })?;
            gen_list.push(Gen {
                label: label.clone(),
                degree: d,
            });
        }
        let mut cur = GradedModule::free(f, name, gen_list.clone());
        let Some(lo) = cur.min_gen_degree() else {
            return Ok(cur);
        };
        for d in lo..=bound {
            let p = cur.piece(d);
            if p.dim() == 0 {
                continue;
            }
            let cols: Vec<Vec<u32>> = p
                .nodes()
                .map(|w| {
                    let img = ambient.mul_mono(&gens[w.gen].1, w.mono);
                    img.part(d).cloned().unwrap_or_else(|| vec![0; ambient.dim(d)])
                })
                .collect();
            let map = Matrix::from_cols(f, ambient.dim(d), &cols);
            let ker = map.kernel();
            if ker.is_empty() {
                continue;
            }
            let extra = ker.iter().map(|v| cur.lift(d, v)).collect();
            cur = cur.with_relations(name, extra)?;
        }
        Ok(cur)
    }
}

/// A finite matrix model: the nodes of bounded depth with the `x` and `y`
/// actions; `boundary` marks nodes whose images leave the window.
#[derive(Debug, Clone)]
pub struct MatrixModule {
    pub depth: u32,
    pub labels: Vec<String>,
    pub x: Matrix,
    pub y: Matrix,
    pub boundary: Vec<bool>,
}

impl MatrixModule {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// `XY = YX` and `X²Y = 0`, checked on columns of interior nodes whose
    /// images stay inside the window.
    pub fn check_commutation(&self) -> bool {
        let xy = self.x.mul(&self.y);
        let yx = self.y.mul(&self.x);
        let xxy = self.x.mul(&xy);
        let deep = |c: usize| {
            // columns reached only through interior nodes
            !self.boundary[c]
                && (0..self.dim()).all(|r| {
                    (self.x.get(r, c) == 0 && self.y.get(r, c) == 0) || !self.boundary[r]
                })
        };
        (0..self.dim()).filter(|&c| deep(c)).all(|c| {
            (0..self.dim()).all(|r| xy.get(r, c) == yx.get(r, c) && xxy.get(r, c) == 0)
        })
    }
}

/// Parses a free-module expression over the given generator labels.
///
/// Grammar: signed terms; a term is a product (`*` optional) of integers,
/// `x`, `y`, generator labels and parenthesised polynomials in `x`, `y`,
/// with `^` powers on `x`, `y` and parentheses. Each term carries at most
/// one generator; with a single generator `1` it may be omitted.
pub fn parse_free(f: Fp, labels: &[&str], s: &str) -> Result<FreeElem> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut sorted: Vec<(usize, Vec<char>)> = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| **l != "1")
        .map(|(i, l)| (i, l.chars().collect()))
        .collect();
    sorted.sort_by_key(|(_, l)| std::cmp::Reverse(l.len()));
    let implicit = if labels.len() == 1 && labels[0] == "1" {
        Some(0)
    } else {
        None
    };
    let mut out = FreeElem::zero(f, labels.len());
    let mut pos = 0;
    if chars.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    loop {
        let mut sign = 1i64;
        while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        }
        // one term
        let mut coeff = SElem::one(f).scale(f.from_i64(sign));
        let mut gen: Option<usize> = None;
        let start = pos;
        loop {
            if pos < chars.len() && chars[pos] == '*' && pos > start {
                pos += 1;
            }
            if pos >= chars.len() || chars[pos] == '+' || chars[pos] == '-' {
                break;
            }
            if let Some((i, l)) = sorted
                .iter()
                .find(|(_, l)| chars[pos..].starts_with(l))
            {
                if gen.is_some() {
                    return Err(Error::Parse(format!("two generators in one term of \"{s}\"")));
                }
                gen = Some(*i);
                pos += l.len();
                continue;
            }
            // a ring factor: read up to the next '*', sign at depth 0, or generator
            let fstart = pos;
            let mut depth = 0;
            while pos < chars.len() {
                let c = chars[pos];
                if depth == 0 && (c == '*' || c == '+' || c == '-') {
                    break;
                }
                if depth == 0 && pos > fstart && sorted.iter().any(|(_, l)| chars[pos..].starts_with(l)) {
                    break;
                }
                if c == '(' {
                    depth += 1;
                }
                if c == ')' {
                    depth -= 1;
                }
                pos += 1;
            }
            if fstart == pos {
                return Err(Error::Parse(format!("unexpected character in \"{s}\"")));
            }
            let text: String = chars[fstart..pos].iter().collect();
            coeff = coeff.mul(&crate::ring::nf(f, &text)?);
        }
        let g = gen.or(implicit).ok_or_else(|| {
            Error::Parse(format!("term without generator in \"{s}\""))
        })?;
        out.0[g] = out.0[g].add(&coeff);
        if pos >= chars.len() {
            break;
        }
    }
    Ok(out)
}

/// Labels a monomial multiple of a generator for display.
pub fn word_string(label: &str, m: Mono) -> String {
    match (label, m) {
        ("1", _) => m.to_string(),
        (_, Mono::ONE) => label.to_string(),
        _ => format!("{label}*{m}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    fn s_module(f: Fp) -> GradedModule {
        GradedModule::from_strings(f, "S", &[("1", 0)], &[]).unwrap()
    }

    #[test]
    fn free_module_dims() {
        let s = s_module(f5());
        assert_eq!(s.hilbert(0, 4), vec![1, 2, 3, 3, 3]);
        assert_eq!(s.truncate(5).dim(), 15);
        assert!(s.is_cm());
    }

    #[test]
    fn m2_presentation() {
        let f = f5();
        let m = GradedModule::from_strings(f, "M_2", &[("m", 3), ("n", 2)], &["m*x - n*y^2", "n*x"]).unwrap();
        assert_eq!(m.relation_strings(), vec!["m*x - n*y^2", "n*x"]);
        // two y-threads
        assert_eq!(m.hilbert(2, 8), vec![1, 2, 2, 2, 2, 2, 2]);
        assert_eq!(m.truncate(4).dim(), 10);
        let mx = m.parse_elem("m*x").unwrap();
        assert_eq!(m.format_elem(&mx), "n*y^2");
        assert!(m.parse_elem("m*x^2").unwrap().is_zero());
        assert!(m.is_cm());
        assert!(m.truncate(6).check_commutation());
    }

    #[test]
    fn residue_field_reduces_to_zero() {
        let f = f5();
        let k = GradedModule::from_strings(f, "k", &[("1", 0)], &["x", "y"]).unwrap();
        assert_eq!(k.socle(0).len(), 1);
        let (r, rounds) = k.cm_reduce("k'");
        assert_eq!(rounds, 1);
        assert_eq!(r.hilbert(0, 3), vec![0, 0, 0, 0]);
    }

    #[test]
    fn s_mod_x_has_no_socle() {
        let f = f5();
        let q = GradedModule::from_strings(f, "S/x", &[("1", 0)], &["x"]).unwrap();
        assert!(q.is_cm());
        assert_eq!(q.hilbert(0, 4), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn image_of_ideal() {
        let f = f5();
        let s = s_module(f);
        let gens = vec![
            ("m".to_string(), s.parse_elem("y^3").unwrap()),
            ("n".to_string(), s.parse_elem("x*y").unwrap()),
        ];
        let p = GradedModule::image_presentation(&s, "I", &gens, 8).unwrap();
        // (y^3, xy) ≅ M_2: relations mx = n y^2 and nx = 0
        assert_eq!(p.hilbert(2, 7), vec![1, 2, 2, 2, 2, 2]);
        assert!(p.parse_elem("m*x - n*y^2").unwrap().is_zero());
        assert!(p.parse_elem("n*x").unwrap().is_zero());
    }

    #[test]
    fn direct_sum_labels() {
        let f = f5();
        let m = GradedModule::from_strings(f, "M_1", &[("m", 2), ("n", 2)], &["m*x - n*y", "n*x"]).unwrap();
        let mm = GradedModule::direct_sum(&[&m, &m]);
        let labels: Vec<_> = mm.gens().iter().map(|g| g.label.clone()).collect();
        assert_eq!(labels, ["m", "n", "m.2", "n.2"]);
        assert_eq!(mm.dim(5), 2 * m.dim(5));
        let e = mm.parse_elem("m.2*y + n").unwrap();
        assert_eq!(mm.format_elem(&e), "n + m.2*y");
    }

    #[test]
    fn parse_errors() {
        let f = f5();
        let m = GradedModule::from_strings(f, "M_1", &[("m", 2), ("n", 2)], &["m*x - n*y", "n*x"]).unwrap();
        assert!(m.parse_elem("x*y").is_err());
        assert!(m.parse_elem("m*n").is_err());
        assert!(GradedModule::from_strings(f, "bad", &[("m", 0), ("n", 0)], &["m*x - n"]).is_err());
    }
}
