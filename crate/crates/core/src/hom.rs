//! Homomorphisms between graded modules.
//!
//! A morphism is stored by the images of the generators. Because every
//! relation is homogeneous, a map is well defined iff each of its
//! homogeneous components is, and the degree-`s` maps `M → N` form the
//! nullspace of a finite linear system: the generator images lie in
//! `N_{d_i+s}` and every relation must evaluate to zero. All Hom
//! computations are therefore exact; no truncation is involved.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::catalog::{make, FamilyId};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{is_zero_vec, Matrix, Subspace};
use crate::module::{Elem, FreeElem, Gen, GradedModule};
use crate::ring::{Mono, SElem};

/// A module map given by generator images.
#[derive(Clone)]
pub struct Morphism {
    pub src: Arc<GradedModule>,
    pub dst: Arc<GradedModule>,
    pub images: Vec<Elem>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .src
            .gens()
            .iter()
            .zip(&self.images)
            .map(|(g, e)| format!("{} ↦ {}", g.label, self.dst.format_elem(e)))
            .collect();
        write!(f, "{} → {}: {}", self.src.name(), self.dst.name(), parts.join(", "))
    }
}

impl Morphism {
    /// Builds a morphism and verifies that every relation of the source maps
    /// to zero.
    pub fn new(src: Arc<GradedModule>, dst: Arc<GradedModule>, images: Vec<Elem>) -> Result<Self> {
        if images.len() != src.num_gens() {
            return Err(Error::InvalidParameter(format!(
                "{} images for {} generators",
                images.len(),
                src.num_gens()
            )));
        }
        let m = Morphism { src, dst, images };
        if let Some(r) = m.failing_relation() {
            return Err(Error::NoMorphism(format!(
                "relation {} of {} does not map to zero in {}",
                m.src.format_free(&r),
                m.src.name(),
                m.dst.name()
            )));
        }
        Ok(m)
    }

    /// Builds a morphism from image expressions keyed by generator label;
    /// unlisted generators map to zero.
    pub fn from_strings(
        src: Arc<GradedModule>,
        dst: Arc<GradedModule>,
        images: &[(&str, &str)],
    ) -> Result<Self> {
        let mut imgs = vec![Elem::zero(); src.num_gens()];
        for (label, expr) in images {
            let i = src
                .gens()
                .iter()
                .position(|g| g.label == *label)
                .ok_or_else(|| Error::Parse(format!("{} has no generator {label}", src.name())))?;
            imgs[i] = dst.parse_elem(expr)?;
        }
        Morphism::new(src, dst, imgs)
    }

    pub fn zero(src: Arc<GradedModule>, dst: Arc<GradedModule>) -> Self {
        let n = src.num_gens();
        Morphism {
            src,
            dst,
            images: vec![Elem::zero(); n],
        }
    }

    pub fn identity(m: Arc<GradedModule>) -> Self {
        let images = (0..m.num_gens()).map(|i| m.gen_elem(i)).collect();
        Morphism {
            src: m.clone(),
            dst: m,
            images,
        }
    }

    fn field(&self) -> Fp {
        self.src.field()
    }

    fn failing_relation(&self) -> Option<FreeElem> {
        self.src
            .relations()
            .iter()
            .find(|r| !self.apply_free(r).is_zero())
            .cloned()
    }

    pub fn is_well_defined(&self) -> bool {
        self.failing_relation().is_none()
    }

    /// Image of a free-module element written in the source generators.
    pub fn apply_free(&self, r: &FreeElem) -> Elem {
        let f = self.field();
        let mut acc = Elem::zero();
        for (g, c) in r.0.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(f, &self.dst.mul_s(&self.images[g], c));
            }
        }
        acc
    }

    pub fn apply(&self, e: &Elem) -> Elem {
        self.apply_free(&self.src.lift_elem(e))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Morphism) -> Result<Morphism> {
        if !same_module(&self.dst, &g.src) {
            return Err(Error::InvalidParameter(format!(
                "cannot compose {} → {} with {} → {}",
                self.src.name(),
                self.dst.name(),
                g.src.name(),
                g.dst.name()
            )));
        }
        let images = self.images.iter().map(|e| g.apply(e)).collect();
        Ok(Morphism {
            src: self.src.clone(),
            dst: g.dst.clone(),
            images,
        })
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        let f = self.field();
        Morphism {
            src: self.src.clone(),
            dst: self.dst.clone(),
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| a.add(f, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Morphism {
        let f = self.field();
        Morphism {
            src: self.src.clone(),
            dst: self.dst.clone(),
            images: self.images.iter().map(|e| e.scale(f, c)).collect(),
        }
    }

    pub fn neg(&self) -> Morphism {
        self.scale(self.field().neg(1))
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Elem::is_zero)
    }

    /// Degree shifts of the homogeneous components.
    pub fn shifts(&self) -> BTreeSet<i32> {
        self.src
            .gens()
            .iter()
            .zip(&self.images)
            .flat_map(|(g, e)| e.degrees().into_iter().map(move |d| d - g.degree))
            .collect()
    }

    /// The degree-`s` component.
    pub fn component(&self, s: i32) -> Morphism {
        Morphism {
            src: self.src.clone(),
            dst: self.dst.clone(),
            images: self
                .src
                .gens()
                .iter()
                .zip(&self.images)
                .map(|(g, e)| e.component(g.degree + s))
                .collect(),
        }
    }

    /// Matrix of the degree-`s` component from `M_d` to `N_{d+s}`.
    pub fn matrix(&self, d: i32, s: i32) -> Matrix {
        let f = self.field();
        let comp = self.component(s);
        let n = self.src.dim(d);
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|k| {
                let mut v = vec![0; n];
                v[k] = 1;
                let img = comp.apply(&Elem::homogeneous(d, v));
                img.part(d + s).cloned().unwrap_or_else(|| vec![0; self.dst.dim(d + s)])
            })
            .collect();
        Matrix::from_cols(f, self.dst.dim(d + s), &cols)
    }

    pub fn images_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .src
            .gens()
            .iter()
            .zip(&self.images)
            .map(|(g, e)| (g.label.clone(), json!(self.dst.format_elem(e))))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "source": self.src.name(),
            "target": self.dst.name(),
            "images": self.images_json(),
        })
    }

    /// Equality of the generator images (same source and target assumed).
    pub fn same_as(&self, other: &Morphism) -> bool {
        self.images == other.images
    }
}

/// Modules are compared by presentation.
pub fn same_module(a: &GradedModule, b: &GradedModule) -> bool {
    a.gens() == b.gens() && a.relations() == b.relations()
}

/// Basis of the degree-`s` homomorphisms `M → N`.
pub fn hom_basis(m: &Arc<GradedModule>, n: &Arc<GradedModule>, s: i32) -> Vec<Morphism> {
    let f = m.field();
    let blocks: Vec<(i32, usize)> = m
        .gens()
        .iter()
        .map(|g| (g.degree + s, n.dim(g.degree + s)))
        .collect();
    let unknowns: usize = blocks.iter().map(|b| b.1).sum();
    if unknowns == 0 {
        return Vec::new();
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (r, &e) in m.relations().iter().zip(m.relation_degrees()) {
        let target = n.dim(e + s);
        if target == 0 {
            continue;
        }
        let mut block_rows = vec![vec![0u32; unknowns]; target];
        let mut offset = 0;
        for (gi, &(d, size)) in blocks.iter().enumerate() {
            for (mu, c) in r.0[gi].terms() {
                let mat = n.act_matrix(d, mu);
                for row in 0..target {
                    for col in 0..size {
                        let v = f.mul(c, mat.get(row, col));
                        block_rows[row][offset + col] = f.add(block_rows[row][offset + col], v);
                    }
                }
            }
            offset += size;
        }
        rows.extend(block_rows);
    }
    let kernel = if rows.is_empty() {
        (0..unknowns).map(|i| crate::linalg::unit(unknowns, i)).collect()
    } else {
        Matrix::from_rows(f, unknowns, &rows).kernel()
    };
    kernel
        .into_iter()
        .map(|v| {
            let mut images = Vec::new();
            let mut offset = 0;
            for &(d, size) in &blocks {
                images.push(Elem::homogeneous(d, v[offset..offset + size].to_vec()));
                offset += size;
            }
            Morphism {
                src: m.clone(),
                dst: n.clone(),
                images,
            }
        })
        .collect()
}

/// A finite window of `Hom(M, N)`: all degree shifts for which the
/// generator images sit at most `t` degrees above the lowest generator of
/// `N`.
#[derive(Debug, Clone)]
pub struct HomWindow {
    pub shifts: Vec<(i32, Vec<Morphism>)>,
    pub depth: u32,
}

impl HomWindow {
    pub fn dim(&self) -> usize {
        self.shifts.iter().map(|(_, b)| b.len()).sum()
    }

    pub fn basis(&self) -> impl Iterator<Item = &Morphism> {
        self.shifts.iter().flat_map(|(_, b)| b.iter())
    }

    /// Number of basis maps per shift, for reports.
    pub fn graded_dims(&self) -> Vec<(i32, usize)> {
        self.shifts.iter().map(|(s, b)| (*s, b.len())).collect()
    }
}

pub fn hom_window(m: &Arc<GradedModule>, n: &Arc<GradedModule>, t: u32) -> HomWindow {
    let (Some(m_lo), Some(m_hi), Some(n_lo)) = (m.min_gen_degree(), m.max_gen_degree(), n.min_gen_degree())
    else {
        return HomWindow {
            shifts: Vec::new(),
            depth: t,
        };
    };
    let s_lo = n_lo - m_hi;
    let s_hi = n_lo + t as i32 - m_lo;
    let shifts = (s_lo..=s_hi)
        .map(|s| (s, hom_basis(m, n, s)))
        .filter(|(_, b)| !b.is_empty())
        .collect();
    HomWindow { shifts, depth: t }
}

/// Shifts `s` for which a map sending `point` to `target` could exist.
fn candidate_shifts(point: &Elem, target: &Elem) -> BTreeSet<i32> {
    let mut out = BTreeSet::new();
    for a in point.degrees() {
        for e in target.degrees() {
            out.insert(e - a);
        }
    }
    out
}

/// Solves for a morphism `f: M → N` with `f(point) = target`.
pub fn pointed_morphism(
    m: &Arc<GradedModule>,
    point: &Elem,
    n: &Arc<GradedModule>,
    target: &Elem,
) -> Option<Morphism> {
    let f = m.field();
    if target.is_zero() {
        return Some(Morphism::zero(m.clone(), n.clone()));
    }
    if point.is_zero() {
        return None;
    }
    let shifts = candidate_shifts(point, target);
    let mut basis: Vec<Morphism> = Vec::new();
    for &s in &shifts {
        basis.extend(hom_basis(m, n, s));
    }
    if basis.is_empty() {
        return None;
    }
    // coordinates of f(point) in every degree it can reach
    let mut degrees: BTreeSet<i32> = target.degrees().into_iter().collect();
    for a in point.degrees() {
        for &s in &shifts {
            degrees.insert(a + s);
        }
    }
    let layout: Vec<(i32, usize)> = degrees.iter().map(|&d| (d, n.dim(d))).collect();
    let flatten = |e: &Elem| -> Vec<u32> {
        layout
            .iter()
            .flat_map(|&(d, size)| e.part(d).cloned().unwrap_or_else(|| vec![0; size]))
            .collect()
    };
    let rows: usize = layout.iter().map(|l| l.1).sum();
    let cols: Vec<Vec<u32>> = basis.iter().map(|phi| flatten(&phi.apply(point))).collect();
    let sol = Matrix::from_cols(f, rows, &cols).solve(&flatten(target))?;
    let mut out = Morphism::zero(m.clone(), n.clone());
    for (c, phi) in sol.iter().zip(&basis) {
        if *c != 0 {
            out = out.add(&phi.scale(*c));
        }
    }
    Some(out)
}

pub fn pointed_exists(m: &Arc<GradedModule>, point: &Elem, n: &Arc<GradedModule>, target: &Elem) -> bool {
    pointed_morphism(m, point, n, target).is_some()
}

/// The subspace `{f(point) : f ∈ Hom(M, N)}` in degree `e`, for a
/// homogeneous point.
pub fn evaluation_space(
    m: &Arc<GradedModule>,
    point: &Elem,
    n: &Arc<GradedModule>,
    e: i32,
) -> Subspace {
    let f = m.field();
    let dim = n.dim(e);
    let Some(a) = point.degree() else {
        return Subspace::zero(f, dim);
    };
    let vecs = hom_basis(m, n, e - a).into_iter().filter_map(|phi| {
        let img = phi.apply(point);
        img.part(e).cloned()
    });
    Subspace::span(f, dim, vecs)
}

/// Searches for a degree-preserving isomorphism `A → B`, returning it with
/// its inverse. Both composites are checked on generators.
pub fn find_iso(
    a: &Arc<GradedModule>,
    b: &Arc<GradedModule>,
    seed: u64,
) -> Option<(Morphism, Morphism)> {
    let f = a.field();
    let fwd = hom_basis(a, b, 0);
    let back = hom_basis(b, a, 0);
    if fwd.is_empty() || back.is_empty() {
        return if a.num_gens() == 0 && b.num_gens() == 0 {
            Some((Morphism::zero(a.clone(), b.clone()), Morphism::zero(b.clone(), a.clone())))
        } else {
            None
        };
    }
    let try_phi = |phi: &Morphism| -> Option<Morphism> {
        // ψ with ψ(φ(g)) = g for every generator g of A
        let targets: Vec<Elem> = (0..a.num_gens()).map(|i| a.gen_elem(i)).collect();
        let layout: Vec<(i32, usize)> = a.gens().iter().map(|g| (g.degree, a.dim(g.degree))).collect();
        let flatten = |es: &[Elem]| -> Vec<u32> {
            es.iter()
                .zip(&layout)
                .flat_map(|(e, &(d, size))| e.part(d).cloned().unwrap_or_else(|| vec![0; size]))
                .collect()
        };
        let rows: usize = layout.iter().map(|l| l.1).sum();
        let cols: Vec<Vec<u32>> = back
            .iter()
            .map(|psi| {
                let comp: Vec<Elem> = phi.images.iter().map(|e| psi.apply(e)).collect();
                flatten(&comp)
            })
            .collect();
        let sol = Matrix::from_cols(f, rows, &cols).solve(&flatten(&targets))?;
        let mut psi = Morphism::zero(b.clone(), a.clone());
        for (c, p) in sol.iter().zip(&back) {
            if *c != 0 {
                psi = psi.add(&p.scale(*c));
            }
        }
        let round = psi.then(phi).ok()?;
        if round.same_as(&Morphism::identity(b.clone())) {
            Some(psi)
        } else {
            None
        }
    };
    let combine = |coef: &[u32]| -> Morphism {
        let mut phi = Morphism::zero(a.clone(), b.clone());
        for (c, p) in coef.iter().zip(&fwd) {
            if *c != 0 {
                phi = phi.add(&p.scale(*c));
            }
        }
        phi
    };
    let p = f.p() as u64;
    let n = fwd.len() as u32;
    if p.checked_pow(n).is_some_and(|c| c <= 4096) {
        let total = p.pow(n);
        for idx in 1..total {
            let mut rest = idx;
            let coef: Vec<u32> = (0..n)
                .map(|_| {
                    let c = (rest % p) as u32;
                    rest /= p;
                    c
                })
                .collect();
            let phi = combine(&coef);
            if let Some(psi) = try_phi(&phi) {
                return Some((phi, psi));
            }
        }
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..400 {
            let coef: Vec<u32> = (0..n).map(|_| rng.gen_range(0..f.p())).collect();
            let phi = combine(&coef);
            if let Some(psi) = try_phi(&phi) {
                return Some((phi, psi));
            }
        }
        None
    }
}

/// The dual `Hom(M, S)` with a presentation and its catalog match.
#[derive(Debug, Clone)]
pub struct Dual {
    pub source: FamilyId,
    pub presentation: GradedModule,
    pub matched: FamilyId,
    /// Shift `σ` with `Hom(M,S) ≅ matched(σ)`.
    pub shift: i32,
    pub checked_to: i32,
}

/// Computes `Hom(M, S)` as a submodule of `⊕ S(d_i)` and identifies it with
/// a catalog member by an explicit two-sided isomorphism.
pub fn dual(f: Fp, id: FamilyId, k_max: u32, seed: u64) -> Result<Dual> {
    let m = Arc::new(make(f, id));
    let s = Arc::new(make(f, FamilyId::s()));
    let ambient = GradedModule::free(
        f,
        "S^r",
        m.gens()
            .iter()
            .map(|g| Gen {
                label: format!("e_{}", g.label),
                degree: -g.degree,
            })
            .collect(),
    );
    let to_ambient = |phi: &Morphism| -> Elem {
        let coeffs = phi
            .images
            .iter()
            .map(|e| s.lift_elem(e).0.into_iter().next().unwrap_or_else(|| SElem::zero(f)))
            .collect();
        ambient.eval_free(&FreeElem(coeffs))
    };
    let s_lo = -m.max_gen_degree().unwrap_or(0);
    let span = m.presentation_degree() - m.min_gen_degree().unwrap_or(0) + 3;
    let mut gens: Vec<(String, Elem)> = Vec::new();
    let mut prev: Vec<Elem> = Vec::new();
    for deg in s_lo..=s_lo + span {
        let cur: Vec<Elem> = hom_basis(&m, &s, deg).iter().map(to_ambient).collect();
        let dim = ambient.dim(deg);
        let lower = Subspace::span(
            f,
            dim,
            prev.iter()
                .flat_map(|e| [ambient.mul_mono(e, Mono::X), ambient.mul_mono(e, Mono::Y)])
                .chain(gens.iter().filter(|(_, e)| e.degree() == Some(deg)).map(|(_, e)| e.clone()))
                .filter_map(|e| e.part(deg).cloned()),
        );
        let mut acc = lower;
        for e in &cur {
            let v = e.part(deg).cloned().unwrap_or_else(|| vec![0; dim]);
            if !acc.contains(&v) {
                acc = acc.sum(&Subspace::span(f, dim, [v]));
                gens.push((format!("g{}", gens.len() + 1), e.clone()));
            }
        }
        prev = cur;
    }
    let bound = s_lo + span + 4;
    let pres = GradedModule::image_presentation(&ambient, &format!("Hom({id},S)"), &gens, bound)?;
    let candidates = FamilyId::window(k_max.max(id.k));
    let (matched, shift) = identify(f, &pres, &candidates, bound, seed)
        .ok_or_else(|| Error::Verification(format!("no catalog module matches Hom({id}, S)")))?;
    Ok(Dual {
        source: id,
        presentation: pres,
        matched,
        shift,
        checked_to: bound,
    })
}

/// Finds a catalog module `C` and shift `σ` with `module ≅ C(σ)`, aligning
/// the lowest nonzero degrees, comparing Hilbert functions up to `bound` and
/// confirming with an explicit two-sided isomorphism.
pub fn identify(
    f: Fp,
    module: &GradedModule,
    candidates: &[FamilyId],
    bound: i32,
    seed: u64,
) -> Option<(FamilyId, i32)> {
    let lo_gen = module.min_gen_degree()?;
    let lo = (lo_gen..=bound).find(|&d| module.dim(d) > 0)?;
    let target = Arc::new(module.clone());
    for &cand in candidates {
        let c = make(f, cand);
        let sigma = lo - c.min_gen_degree().unwrap();
        let shifted = Arc::new(c.shifted(sigma));
        if shifted.hilbert(lo, bound) != module.hilbert(lo, bound) {
            continue;
        }
        if find_iso(&shifted, &target, seed).is_some() {
            return Some((cand, sigma));
        }
    }
    None
}

/// Outcome of the randomized decomposition search.
#[derive(Debug, Clone, Serialize)]
pub struct IndecVerdict {
    pub module: String,
    pub decomposed: bool,
    pub trials: usize,
    pub seed: u64,
    /// Dimension of the image of the endomorphism ring on `M/𝔪M`.
    pub top_algebra_dim: usize,
    /// A verified nontrivial idempotent, as generator images.
    pub idempotent: Option<serde_json::Value>,
}

/// Randomized Fitting test on the image of `End(M)` in `End(M/𝔪M)`.
///
/// The kernel of `End(M) → End(M/𝔪M)` lies in the radical, so `M` is
/// indecomposable iff that image is a local algebra. Each trial draws a
/// random element `a` and checks, for every scalar `λ`, that `a − λ` is
/// either nilpotent or invertible on the top.
pub fn is_indecomposable(m: &Arc<GradedModule>, trials: usize, seed: u64) -> IndecVerdict {
    let f = m.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // top pieces
    let degrees: BTreeSet<i32> = m.gens().iter().map(|g| g.degree).collect();
    let mut tops: Vec<(i32, Subspace, Vec<usize>)> = Vec::new();
    for &d in &degrees {
        let dim = m.dim(d);
        let lower = Subspace::span(
            f,
            dim,
            [Mono::X, Mono::Y].iter().flat_map(|&mu| {
                let src = m.dim(d - 1);
                let mat = m.act_matrix(d - 1, mu);
                (0..src).map(move |c| mat.col(c))
            }),
        );
        let pivots: BTreeSet<usize> = lower
            .basis()
            .iter()
            .filter_map(|r| r.iter().position(|&c| c != 0))
            .collect();
        let free: Vec<usize> = (0..dim).filter(|i| !pivots.contains(i)).collect();
        if !free.is_empty() {
            tops.push((d, lower, free));
        }
    }
    let top_dim: usize = tops.iter().map(|t| t.2.len()).sum();
    let offsets: Vec<usize> = {
        let mut acc = 0;
        tops.iter()
            .map(|t| {
                let o = acc;
                acc += t.2.len();
                o
            })
            .collect()
    };
    let shifts: BTreeSet<i32> = tops
        .iter()
        .flat_map(|a| tops.iter().map(move |b| b.0 - a.0))
        .collect();
    let mut algebra: Vec<Matrix> = Vec::new();
    let mut degree0: Vec<Morphism> = Vec::new();
    for &s in &shifts {
        for phi in hom_basis(m, m, s) {
            let mut mat = Matrix::zeros(f, top_dim, top_dim);
            for (ti, (d, _, free)) in tops.iter().enumerate() {
                for (j, &col) in free.iter().enumerate() {
                    let mut v = vec![0; m.dim(*d)];
                    v[col] = 1;
                    let img = phi.apply(&Elem::homogeneous(*d, v));
                    if let Some((tj, (e, lower, free2))) =
                        tops.iter().enumerate().find(|(_, t)| t.0 == d + s)
                    {
                        if let Some(w) = img.part(*e) {
                            let red = lower.reduce(w);
                            for (i, &r) in free2.iter().enumerate() {
                                mat.set(offsets[tj] + i, offsets[ti] + j, red[r]);
                            }
                        }
                    }
                }
            }
            if s == 0 {
                degree0.push(phi);
            }
            algebra.push(mat);
        }
    }
    let alg_dim = Subspace::span(
        f,
        top_dim * top_dim,
        algebra.iter().map(|a| {
            (0..top_dim)
                .flat_map(|r| (0..top_dim).map(move |c| (r, c)))
                .map(|(r, c)| a.get(r, c))
                .collect::<Vec<u32>>()
        }),
    )
    .dim();
    let nontrivial_fitting = |a: &Matrix| -> bool {
        f.elements().any(|lambda| {
            let b = a.add(&Matrix::identity(f, top_dim).scale(f.neg(lambda)));
            let r = b.pow(top_dim as u32).rank();
            r > 0 && r < top_dim
        })
    };
    let mut decomposed = false;
    for _ in 0..trials {
        let mut a = Matrix::zeros(f, top_dim, top_dim);
        for g in &algebra {
            a = a.add(&g.scale(rng.gen_range(0..f.p())));
        }
        if nontrivial_fitting(&a) {
            decomposed = true;
            break;
        }
    }
    let idempotent = if decomposed {
        (0..trials.max(20)).find_map(|_| {
            let mut phi = Morphism::zero(m.clone(), m.clone());
            for b in &degree0 {
                phi = phi.add(&b.scale(rng.gen_range(0..f.p())));
            }
            fitting_idempotent(m, &phi)
        })
    } else {
        None
    };
    IndecVerdict {
        module: m.name().to_string(),
        decomposed,
        trials,
        seed,
        top_algebra_dim: alg_dim,
        idempotent: idempotent.map(|e| e.images_json()),
    }
}

/// A nontrivial idempotent from the Fitting decomposition of `φ − λ` on
/// the pieces of the generators, if one exists and verifies.
fn fitting_idempotent(m: &Arc<GradedModule>, phi: &Morphism) -> Option<Morphism> {
    let f = m.field();
    let hi = m.presentation_degree() + 2;
    let lo = m.min_gen_degree()?;
    let power = (lo..=hi).map(|d| m.dim(d)).max().unwrap_or(1) as u32;
    for lambda in f.elements() {
        let shifted = phi.sub(&Morphism::identity(m.clone()).scale(lambda));
        let mut images = Vec::new();
        for (i, g) in m.gens().iter().enumerate() {
            let d = g.degree;
            let b = shifted.matrix(d, 0).pow(power);
            let dim = m.dim(d);
            let im: Vec<Vec<u32>> = Subspace::span(f, dim, (0..dim).map(|c| b.col(c))).basis().to_vec();
            let ker = b.kernel();
            if im.len() + ker.len() != dim {
                return None;
            }
            let basis = Matrix::from_cols(f, dim, &im.iter().chain(&ker).cloned().collect::<Vec<_>>());
            let inv = basis.inverse()?;
            let mut proj = Matrix::zeros(f, dim, dim);
            for j in 0..im.len() {
                proj.set(j, j, 1);
            }
            let e = basis.mul(&proj).mul(&inv);
            let gen = m.gen_elem(i);
            let v = gen.part(d).cloned().unwrap_or_else(|| vec![0; dim]);
            images.push(Elem::homogeneous(d, e.mul_vec(&v)));
        }
        let e = Morphism {
            src: m.clone(),
            dst: m.clone(),
            images,
        };
        if e.is_zero() || e.same_as(&Morphism::identity(m.clone())) || !e.is_well_defined() {
            continue;
        }
        if e.then(&e).ok()?.same_as(&e) {
            return Some(e);
        }
    }
    None
}

/// Result of the endomorphism chain check on `N_k`.
#[derive(Debug, Clone, Serialize)]
pub struct EndoChainReport {
    pub k: u32,
    pub nilpotent_endo_ok: bool,
    /// `m ↦ my − n, n ↦ mx`, exactly as written.
    pub literal_endo_ok: bool,
    /// `m ↦ my^k − n, n ↦ mx`, valid for every k.
    pub general_endo_ok: bool,
    /// Elements of the chain and whether each inclusion is strict.
    pub chain: Vec<String>,
    pub strict: Vec<bool>,
    pub window: i32,
}

/// Checks the two generating endomorphisms of `N_k` and the strictly
/// descending chain `V·mx² ⊃ V·nx² ⊃ V·mx³ ⊃ …`, `V = End(N_k)`, inside
/// degrees up to `window`.
pub fn endo_chain_check(f: Fp, k: u32, length: usize) -> Result<EndoChainReport> {
    let n = Arc::new(make(f, FamilyId::n(k)));
    let nil = Morphism::from_strings(n.clone(), n.clone(), &[("m", "n")]);
    let literal = Morphism::from_strings(n.clone(), n.clone(), &[("m", "m*y - n"), ("n", "m*x")]);
    let general = Morphism::from_strings(
        n.clone(),
        n.clone(),
        &[("m", &format!("m*y^{k} - n")), ("n", "m*x")],
    );
    let mut chain = Vec::new();
    let mut points = Vec::new();
    for j in 0..length {
        let e = 2 + (j / 2) as u32;
        let label = if j % 2 == 0 { "m" } else { "n" };
        let s = format!("{label}*x^{e}");
        points.push(n.parse_elem(&s)?);
        chain.push(s);
    }
    let top = points.iter().filter_map(Elem::degree).max().unwrap_or(0);
    let window = top + 2 * k as i32 + 4;
    let spaces: Vec<Vec<Subspace>> = points
        .iter()
        .map(|p| (0..=window).map(|e| evaluation_space(&n, p, &n, e)).collect())
        .collect();
    let mut strict = Vec::new();
    for w in spaces.windows(2) {
        let contained = w[0].iter().zip(&w[1]).all(|(a, b)| a.contains_space(b));
        let bigger = w[0].iter().zip(&w[1]).any(|(a, b)| a.dim() > b.dim());
        strict.push(contained && bigger);
    }
    Ok(EndoChainReport {
        k,
        nilpotent_endo_ok: nil.is_ok(),
        literal_endo_ok: literal.is_ok(),
        general_endo_ok: general.is_ok(),
        chain,
        strict,
        window,
    })
}

/// Generator-image vectors are linearly independent (basis sanity check).
pub fn independent(basis: &[Morphism]) -> bool {
    let Some(first) = basis.first() else {
        return true;
    };
    let f = first.src.field();
    let flat: Vec<Vec<u32>> = basis
        .iter()
        .map(|phi| {
            phi.images
                .iter()
                .zip(phi.src.gens())
                .flat_map(|(e, g)| {
                    let degs: Vec<i32> = phi.shifts().into_iter().map(|s| g.degree + s).collect();
                    degs.into_iter()
                        .flat_map(|d| e.part(d).cloned().unwrap_or_else(|| vec![0; phi.dst.dim(d)]))
                        .collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();
    let width = flat.iter().map(Vec::len).max().unwrap_or(0);
    if flat.iter().any(|v| v.len() != width) {
        return true;
    }
    let rank = Subspace::span(f, width, flat.iter().filter(|v| !is_zero_vec(v)).cloned()).dim();
    rank == basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Family;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    fn module(id: FamilyId) -> Arc<GradedModule> {
        Arc::new(make(f5(), id))
    }

    #[test]
    fn hom_from_s_is_the_module() {
        let s = module(FamilyId::s());
        for id in [FamilyId::m(2), FamilyId::x(1), FamilyId::plain(Family::C)] {
            let n = module(id);
            for d in 0..8 {
                assert_eq!(hom_basis(&s, &n, d).len(), n.dim(d), "{id} degree {d}");
            }
        }
    }

    #[test]
    fn hom_a_to_c_vanishes() {
        let a = module(FamilyId::plain(Family::A));
        let c = module(FamilyId::plain(Family::C));
        assert_eq!(hom_window(&a, &c, 12).dim(), 0);
    }

    #[test]
    fn d_to_c_multiplication_by_y() {
        let d = module(FamilyId::plain(Family::D));
        let c = module(FamilyId::plain(Family::C));
        let phi = Morphism::from_strings(d, c, &[("d", "c")]).unwrap();
        assert!(!phi.is_zero());
    }

    #[test]
    fn pointed_examples() {
        let s = module(FamilyId::s());
        let x = s.parse_elem("x").unwrap();
        let x2 = s.parse_elem("x^2").unwrap();
        assert!(pointed_exists(&s, &x, &s, &x2));
        assert!(!pointed_exists(&s, &x2, &s, &x));
        let x1 = module(FamilyId::x(1));
        assert!(pointed_exists(&s, &x2, &x1, &x1.parse_elem("m*x^2").unwrap()));
    }

    #[test]
    fn invalid_morphism_is_rejected() {
        let m = module(FamilyId::m(1));
        let s = module(FamilyId::s());
        assert!(Morphism::from_strings(m.clone(), s.clone(), &[("m", "y^2"), ("n", "x*y")]).is_ok());
        assert!(Morphism::from_strings(m, s, &[("m", "y^2"), ("n", "x")]).is_err());
    }

    #[test]
    fn iso_with_itself() {
        let x = module(FamilyId::x(2));
        let (phi, psi) = find_iso(&x, &x, 1).unwrap();
        assert!(phi.then(&psi).unwrap().same_as(&Morphism::identity(x.clone())));
        let y = module(FamilyId::y(2));
        assert!(find_iso(&x, &y, 1).is_none());
    }

    #[test]
    fn planted_decomposition() {
        let m = make(f5(), FamilyId::m(1));
        let mm = Arc::new(GradedModule::direct_sum(&[&m, &m]));
        let v = is_indecomposable(&mm, 20, 7);
        assert!(v.decomposed);
        assert!(v.idempotent.is_some());
        let x1 = module(FamilyId::x(1));
        assert!(!is_indecomposable(&x1, 20, 7).decomposed);
    }

    #[test]
    fn endo_chain() {
        let r = endo_chain_check(f5(), 1, 5).unwrap();
        assert!(r.nilpotent_endo_ok && r.literal_endo_ok && r.general_endo_ok);
        assert!(r.strict.iter().all(|&b| b), "{r:?}");
        let r2 = endo_chain_check(f5(), 2, 5).unwrap();
        assert!(!r2.literal_endo_ok);
        assert!(r2.general_endo_ok);
        assert!(r2.strict.iter().all(|&b| b), "{r2:?}");
    }
}
