//! The quilt: the AR quiver with its limit boundary, the gluing squares,
//! the revolution map `S → S` and radical powers of the category.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::ar::{all_edges, ar_sequence, edge, stage_maps, y_coray, SeqId};
use crate::catalog::{Family, FamilyId, PointId};
use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::hom::Morphism;
use crate::linalg::Subspace;
use crate::module::{Elem, GradedModule};
use crate::ring::Mono;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    /// An irreducible map between finitely generated modules.
    Irreducible,
    /// An irreducible map touching a limit point.
    Limit,
    /// A ray (or coray) converging to a boundary point.
    Ray,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuiltEdge {
    pub label: String,
    pub source: PointId,
    pub target: PointId,
    pub kind: EdgeKind,
}

/// Two boundary edges identified when the strip is closed up.
#[derive(Debug, Clone, Serialize)]
pub struct Gluing {
    pub top: (PointId, PointId),
    pub bottom: (PointId, PointId),
    /// The vertical maps of the commuting square between them.
    pub via: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuiltGraph {
    pub k_max: u32,
    pub nodes: Vec<PointId>,
    pub edges: Vec<QuiltEdge>,
    pub gluing: Vec<Gluing>,
}

impl QuiltGraph {
    pub fn has_edge(&self, source: PointId, target: PointId) -> bool {
        self.edges.iter().any(|e| e.source == source && e.target == target)
    }

    /// Edges between finitely generated modules.
    pub fn finite_edges(&self) -> BTreeSet<(FamilyId, FamilyId)> {
        self.edges
            .iter()
            .filter_map(|e| match (e.source, e.target) {
                (PointId::Catalog(a), PointId::Catalog(b)) => Some((a, b)),
                _ => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kmax": self.k_max,
            "nodes": self.nodes.iter().map(|p| p.key()).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| serde_json::json!({
                "label": e.label,
                "source": e.source.key(),
                "target": e.target.key(),
                "kind": e.kind,
            })).collect::<Vec<_>>(),
            "gluing": self.gluing.iter().map(|g| serde_json::json!({
                "top": [g.top.0.key(), g.top.1.key()],
                "bottom": [g.bottom.0.key(), g.bottom.1.key()],
                "via": g.via,
            })).collect::<Vec<_>>(),
        })
    }

    /// Graphviz rendering; glued edge pairs share a colour.
    pub fn to_dot(&self) -> String {
        let colours = ["red", "blue", "darkgreen", "purple"];
        let glue_colour = |s: PointId, t: PointId| {
            self.gluing.iter().enumerate().find_map(|(i, g)| {
                (g.top == (s, t) || g.bottom == (s, t)).then(|| colours[i % colours.len()])
            })
        };
        let mut out = String::from("digraph quilt {\n  rankdir=BT;\n");
        for n in &self.nodes {
            let shape = if n.is_limit() { "doublecircle" } else { "ellipse" };
            let _ = writeln!(out, "  \"{}\" [label=\"{n}\", shape={shape}];", n.key());
        }
        for e in &self.edges {
            let mut attrs = vec![format!("label=\"{}\"", e.label)];
            match e.kind {
                EdgeKind::Ray => attrs.push("style=dashed".into()),
                EdgeKind::Limit => attrs.push("style=bold".into()),
                EdgeKind::Irreducible => {}
            }
            if let Some(c) = glue_colour(e.source, e.target) {
                attrs.push(format!("color={c}"));
            }
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [{}];", e.source.key(), e.target.key(), attrs.join(", "));
        }
        out.push_str("}\n");
        out
    }
}

/// The AR quiver of the window `k ≤ k_max` with the limit points attached.
pub fn build_quilt(ctx: &Ctx, k_max: u32) -> Result<QuiltGraph> {
    if k_max < 2 {
        return Err(Error::InvalidParameter("the quilt needs k_max ≥ 2".into()));
    }
    let cat = PointId::Catalog;
    let c = cat(FamilyId::plain(Family::C));
    let d = cat(FamilyId::plain(Family::D));
    let mut nodes: Vec<PointId> = FamilyId::window(k_max).into_iter().map(cat).collect();
    nodes.extend(PointId::limits());
    let mut edges: Vec<QuiltEdge> = all_edges(ctx, k_max)
        .into_iter()
        .map(|e| QuiltEdge {
            label: e.label,
            source: cat(e.source),
            target: cat(e.target),
            kind: EdgeKind::Irreducible,
        })
        .collect();
    let mut add = |label: &str, source: PointId, target: PointId, kind: EdgeKind| {
        edges.push(QuiltEdge {
            label: label.into(),
            source,
            target,
            kind,
        })
    };
    use PointId::*;
    add("⊂", RTilde, NTilde, EdgeKind::Limit);
    add("y", NTilde, RTilde, EdgeKind::Limit);
    add("x", RTilde, c, EdgeKind::Limit);
    add("x", NTilde, d, EdgeKind::Limit);
    add("ray", cat(FamilyId::m(k_max)), RTilde, EdgeKind::Ray);
    add("ray", cat(FamilyId::n(k_max)), NTilde, EdgeKind::Ray);
    add("ray", d, Gy, EdgeKind::Ray);
    add("coray", Gy, RTilde, EdgeKind::Ray);
    add("ray", NTilde, QR, EdgeKind::Ray);
    for top in [
        cat(FamilyId::plain(Family::A)),
        cat(FamilyId::y(k_max)),
        cat(FamilyId::x(k_max)),
        NTilde,
    ] {
        add("ray", top, Gx, EdgeKind::Ray);
    }
    let gluing = vec![
        Gluing {
            top: (RTilde, NTilde),
            bottom: (c, d),
            via: "x",
        },
        Gluing {
            top: (NTilde, RTilde),
            bottom: (d, c),
            via: "x",
        },
    ];
    Ok(QuiltGraph {
        k_max,
        nodes,
        edges,
        gluing,
    })
}

/// Compares the finite part of the quilt with the arrows of the almost
/// split sequences inside the window; `C ⇄ D` belong to the infinitely
/// generated sequences and are listed separately.
#[derive(Debug, Clone, Serialize)]
pub struct QuiverConsistency {
    pub quilt_only: Vec<String>,
    pub sequences_only: Vec<String>,
}

impl QuiverConsistency {
    pub fn ok(&self) -> bool {
        self.quilt_only.is_empty() && self.sequences_only.is_empty()
    }
}

pub fn quiver_consistency(ctx: &Ctx, quilt: &QuiltGraph) -> Result<QuiverConsistency> {
    let c = FamilyId::plain(Family::C);
    let d = FamilyId::plain(Family::D);
    let mut from_sequences: BTreeSet<(FamilyId, FamilyId)> = [(c, d), (d, c)].into();
    for id in SeqId::window(quilt.k_max) {
        let ar = ar_sequence(ctx, id)?;
        for (name, _) in &ar.seq.summands {
            let mid: FamilyId = name.parse()?;
            from_sequences.insert((id.left_end(), mid));
            from_sequences.insert((mid, id.right_end()));
        }
    }
    let in_quilt = quilt.finite_edges();
    let show = |(a, b): &(FamilyId, FamilyId)| format!("{a} → {b}");
    Ok(QuiverConsistency {
        quilt_only: in_quilt.difference(&from_sequences).map(show).collect(),
        sequences_only: from_sequences.difference(&in_quilt).map(show).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SquareReport {
    pub stage: u32,
    /// `R̃ ⊂ Ñ → D` against `R̃ → C ⊂ D`.
    pub inclusion_square: bool,
    /// `Ñ → R̃ → C` against `Ñ → D → C`.
    pub y_square: bool,
    /// Every map of both squares is well defined and nonzero.
    pub maps_ok: bool,
}

impl SquareReport {
    pub fn ok(&self) -> bool {
        self.inclusion_square && self.y_square && self.maps_ok
    }
}

/// Stage-`K` versions of the two gluing squares, compared as morphisms and
/// on every generator.
pub fn verify_squares(ctx: &Ctx, k: u32) -> Result<SquareReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("stage must be ≥ 1".into()));
    }
    let m = stage_maps(ctx, k)?;
    let agree = |a: &Morphism, b: &Morphism| {
        a.same_as(b) && (0..a.src.num_gens()).all(|i| {
            let g = a.src.gen_elem(i);
            a.apply(&g) == b.apply(&g)
        })
    };
    let sq1 = agree(&m.iota1.then(&m.pi1p)?, &m.pi1.then(&m.iota1p)?);
    let sq2 = agree(&m.iota2.then(&m.pi1)?, &m.pi1p_next.then(&m.iota2p)?);
    let maps = [&m.iota1, &m.pi1, &m.pi1p, &m.iota1p, &m.iota2, &m.pi1p_next, &m.iota2p];
    Ok(SquareReport {
        stage: k,
        inclusion_square: sq1,
        y_square: sq2,
        maps_ok: maps.iter().all(|f| f.is_well_defined() && !f.is_zero()),
    })
}

/// `D → Y_j`, `d ↦ n`: the element `x` seen in every module of the coray.
fn d_into_coray(ctx: &Ctx, j: u32) -> Result<Morphism> {
    Morphism::from_strings(ctx.module(FamilyId::plain(Family::D)), ctx.module(FamilyId::y(j)), &[("d", "n")])
}

/// The path `S → X_1 → N_1 → X_2 → … → X_K`, sending `1` to `m`.
pub fn ray_to_stage(ctx: &Ctx, k: u32) -> Result<Morphism> {
    let mut comp = edge(ctx, 12, 0)?.remove(0).morphism;
    for j in 1..k {
        comp = comp.then(&edge(ctx, 5, j)?.remove(0).morphism)?;
        comp = comp.then(&edge(ctx, 8, j)?.remove(0).morphism)?;
    }
    Ok(comp)
}

/// One revolution around the strip at stage `K`: up the ray to `X_K`
/// (standing in for `Ñ`), across to `D` by `x`, into the coray at `Y_{K+1}`
/// and back down to `S`. The number of irreducible maps on the path is
/// `2K − 1` before leaving the first component.
pub fn revolution(ctx: &Ctx, k: u32) -> Result<Morphism> {
    if k == 0 {
        return Err(Error::InvalidParameter("stage must be ≥ 1".into()));
    }
    let up = ray_to_stage(ctx, k)?;
    let across = stage_maps(ctx, k)?.pi1p;
    up.then(&across)?
        .then(&d_into_coray(ctx, k + 1)?)?
        .then(&y_coray(ctx, k)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct RevolutionReport {
    pub stage: u32,
    /// Image of `1`.
    pub image: String,
    pub is_x: bool,
    /// The maps `D → Y_j` commute with the coray up to `Y_{K+1}`.
    pub coray_compatible: bool,
    /// Same map as the revolution at the next stage.
    pub stable: bool,
    /// `f^{j+1}(1) = x^{j+1} ≠ 0` for `j ≤ powers`.
    pub powers_nonzero: bool,
    pub powers: u32,
    pub note: &'static str,
}

impl RevolutionReport {
    pub fn ok(&self) -> bool {
        self.is_x && self.coray_compatible && self.stable && self.powers_nonzero
    }
}

pub fn revolution_report(ctx: &Ctx, k: u32, powers: u32) -> Result<RevolutionReport> {
    let s = ctx.module(FamilyId::s());
    let f = revolution(ctx, k)?;
    let one = s.gen_elem(0);
    let img = f.apply(&one);
    let x = s.parse_elem("x")?;
    let mut coray_compatible = true;
    for j in 1..=k {
        let step = edge(ctx, 2, j + 1)?.remove(0).morphism.then(&edge(ctx, 7, j)?.remove(0).morphism)?;
        coray_compatible &= d_into_coray(ctx, j + 1)?.then(&step)?.same_as(&d_into_coray(ctx, j)?);
    }
    let stable = f.same_as(&revolution(ctx, k + 1)?);
    let mut power = f.clone();
    let mut powers_nonzero = true;
    for j in 0..=powers {
        let want = s.mul_mono(&one, Mono::new(j + 1, 0));
        let got = power.apply(&one);
        powers_nonzero &= !got.is_zero() && got == want;
        power = power.then(&f)?;
    }
    Ok(RevolutionReport {
        stage: k,
        image: s.format_elem(&img),
        is_x: img == x,
        coray_compatible,
        stable,
        powers_nonzero,
        powers,
        note: "the crossing point D is a choice; other crossings need not close the loop",
    })
}

/// Coordinates of a homogeneous map: generator images, concatenated.
fn flatten(phi: &Morphism, s: i32) -> Vec<u32> {
    phi.src
        .gens()
        .iter()
        .zip(&phi.images)
        .flat_map(|(g, e)| {
            let d = g.degree + s;
            e.part(d).cloned().unwrap_or_else(|| vec![0; phi.dst.dim(d)])
        })
        .collect()
}

fn ambient(m: &GradedModule, n: &GradedModule, s: i32) -> usize {
    m.gens().iter().map(|g| n.dim(g.degree + s)).sum()
}

/// Reduces a family of homogeneous maps of one shift to a basis.
fn span_basis(m: &Arc<GradedModule>, n: &Arc<GradedModule>, s: i32, maps: Vec<Morphism>) -> Vec<Morphism> {
    let f = m.field();
    let mut space = Subspace::zero(f, ambient(m, n, s));
    let mut out = Vec::new();
    for phi in maps {
        let v = flatten(&phi, s);
        if !space.contains(&v) {
            space = space.sum(&Subspace::span(f, v.len(), [v]));
            out.push(phi);
        }
    }
    out
}

type Graded = BTreeMap<i32, Vec<Morphism>>;

/// Radical powers `rad^n(M, N)` for `n ≤ n_max`, restricted to maps of
/// degree `≤ t` and to intermediate modules with index `≤ k_max`.
///
/// `rad^n(M, −)` is spanned by `h ∘ p` where `p` is a composite of `n`
/// irreducible edges and `h` is arbitrary: the irreducible maps out of a
/// module make up its left almost split map.
#[derive(Debug, Clone)]
pub struct RadicalWindow {
    pub source: FamilyId,
    pub target: FamilyId,
    pub k_max: u32,
    pub t: u32,
    /// `levels[n]` is a graded basis of `rad^n`; `levels[0]` is all of `Hom`.
    pub levels: Vec<Graded>,
}

impl RadicalWindow {
    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn graded_dims(&self, n: usize) -> Vec<(i32, usize)> {
        self.levels[n].iter().map(|(&s, b)| (s, b.len())).filter(|p| p.1 > 0).collect()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.levels[n].values().map(Vec::len).sum()
    }

    /// Whether a homogeneous map lies in `rad^n`.
    pub fn contains(&self, n: usize, phi: &Morphism) -> bool {
        let Some(&s) = phi.shifts().iter().next() else {
            return true;
        };
        let basis = self.levels[n].get(&s).map(Vec::as_slice).unwrap_or(&[]);
        let f = phi.src.field();
        let v = flatten(phi, s);
        Subspace::span(f, v.len(), basis.iter().map(|b| flatten(b, s))).contains(&v)
    }

    /// `rad^{n+1} ⊆ rad^n` for every tested `n`.
    pub fn descending(&self) -> bool {
        (1..self.levels.len()).all(|n| {
            self.levels[n]
                .values()
                .flatten()
                .all(|phi| self.contains(n - 1, phi))
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "source": self.source.to_string(),
            "target": self.target.to_string(),
            "kmax": self.k_max,
            "depth": self.t,
            "dims": (0..self.levels.len()).map(|n| self.graded_dims(n)).collect::<Vec<_>>(),
        })
    }
}

fn shift_floor(ctx: &Ctx, src: FamilyId, dst: FamilyId) -> i32 {
    let a = ctx.module(src).max_gen_degree().unwrap_or(0);
    let b = ctx.module(dst).min_gen_degree().unwrap_or(0);
    b - a
}

/// Composites of `n` irreducible edges out of `src`, for `n ≤ n_max`.
fn paths(ctx: &Ctx, src: FamilyId, n_max: usize, k_max: u32, t: u32) -> Vec<BTreeMap<FamilyId, Graded>> {
    let edges = all_edges(ctx, k_max);
    let mut layer: BTreeMap<FamilyId, Graded> = BTreeMap::new();
    layer
        .entry(src)
        .or_default()
        .insert(0, vec![Morphism::identity(ctx.module(src))]);
    let mut out = vec![layer.clone()];
    for _ in 0..n_max {
        let mut raw: BTreeMap<FamilyId, BTreeMap<i32, Vec<Morphism>>> = BTreeMap::new();
        for e in &edges {
            let Some(here) = layer.get(&e.source) else { continue };
            for (&s, basis) in here {
                let s2 = s + e.shift();
                if s2 > t as i32 {
                    continue;
                }
                for p in basis {
                    let q = p.then(&e.morphism).expect("composable");
                    if !q.is_zero() {
                        raw.entry(e.target).or_default().entry(s2).or_default().push(q);
                    }
                }
            }
        }
        layer = raw
            .into_iter()
            .map(|(w, graded)| {
                let m = ctx.module(src);
                let wm = ctx.module(w);
                let reduced = graded
                    .into_iter()
                    .map(|(s, maps)| (s, span_basis(&m, &wm, s, maps)))
                    .collect();
                (w, reduced)
            })
            .collect();
        out.push(layer.clone());
    }
    out
}

pub fn rad_power(ctx: &Ctx, src: FamilyId, dst: FamilyId, n_max: usize, k_max: u32, t: u32) -> RadicalWindow {
    let m = ctx.module(src);
    let n = ctx.module(dst);
    let layers = paths(ctx, src, n_max, k_max, t);
    let levels: Vec<Graded> = layers
        .par_iter()
        .map(|layer| {
            let mut raw: BTreeMap<i32, Vec<Morphism>> = BTreeMap::new();
            for (&w, graded) in layer {
                for (&s1, basis) in graded {
                    for s2 in shift_floor(ctx, w, dst)..=(t as i32 - s1) {
                        let homs = ctx.hom(w, dst, s2);
                        for p in basis {
                            for h in homs.iter() {
                                let q = p.then(h).expect("composable");
                                if !q.is_zero() {
                                    raw.entry(s1 + s2).or_default().push(q);
                                }
                            }
                        }
                    }
                }
            }
            raw.into_iter()
                .map(|(s, maps)| (s, span_basis(&m, &n, s, maps)))
                .filter(|(_, b)| !b.is_empty())
                .collect()
        })
        .collect();
    RadicalWindow {
        source: src,
        target: dst,
        k_max,
        t,
        levels,
    }
}

/// Multiplication by a monomial on `S`, as a map of shift `deg μ`.
pub fn s_mult(ctx: &Ctx, mu: Mono) -> Morphism {
    let s = ctx.module(FamilyId::s());
    let img = s.mul_mono(&s.gen_elem(0), mu);
    Morphism::new(s.clone(), s, vec![img]).expect("S is free")
}

/// Least `j ≤ t` with `y^j ∈ rad^n(S, S)`; `None` when no such power fits
/// in the window.
pub fn image_depth(ctx: &Ctx, rad: &RadicalWindow, n: usize) -> Option<u32> {
    (0..=rad.t).find(|&j| rad.contains(n, &s_mult(ctx, Mono::new(0, j))))
}

#[derive(Debug, Clone, Serialize)]
pub struct DivisibilityReport {
    pub module: String,
    pub depth: u32,
    /// `dims[j]` = dimension of `x^j·M` in degrees `≤ t`.
    pub dims: Vec<usize>,
    pub non_increasing: bool,
    pub vanishes: bool,
    /// The power of `x` killing the module, if any (`x²` on `B`, `M_k`).
    pub killed_by: Option<u32>,
}

impl DivisibilityReport {
    pub fn ok(&self) -> bool {
        self.non_increasing && self.vanishes
    }
}

/// Dimensions of the `x^j`-divisible elements in the window, `j ≤ J`.
pub fn divisibility_vanishing_check(ctx: &Ctx, id: FamilyId, j_max: u32, t: u32) -> Result<DivisibilityReport> {
    if j_max > t + 1 {
        return Err(Error::InvalidParameter("J must be at most t + 1".into()));
    }
    let m = ctx.module(id);
    let f = m.field();
    let lo = m.min_gen_degree().unwrap_or(0);
    let dims: Vec<usize> = (0..=j_max)
        .map(|j| {
            (lo..=t as i32)
                .map(|d| {
                    let mut space = Subspace::full(f, m.dim(d - j as i32));
                    let mut deg = d - j as i32;
                    for _ in 0..j {
                        space = space.image(&m.x_matrix(deg));
                        deg += 1;
                    }
                    space.dim()
                })
                .sum()
        })
        .collect();
    let killed_by = (1..=3u32).find(|&j| {
        (0..m.num_gens()).all(|i| m.mul_mono(&m.gen_elem(i), Mono::new(j, 0)).is_zero())
    });
    Ok(DivisibilityReport {
        module: id.to_string(),
        depth: t,
        non_increasing: dims.windows(2).all(|w| w[1] <= w[0]),
        vanishes: dims.last() == Some(&0),
        killed_by,
        dims,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct NilIndexReport {
    pub k_max: u32,
    pub n_max: usize,
    pub depth: u32,
    pub revolutions: Vec<RevolutionReport>,
    /// `x ∈ rad^n(S, S)` for each `n ≤ n_max`.
    pub x_in_rad: Vec<bool>,
    /// Largest `n` for which the window can witness `x ∈ rad^n`: a
    /// revolution through `X_K` has `2K` irreducible steps.
    pub reach: usize,
    /// `g(n)`: least `j` with `y^j ∈ rad^n(S, S)`.
    pub image_depth: Vec<Option<u32>>,
    pub depth_non_decreasing: bool,
    pub depth_grows: bool,
    /// Window dimensions of `rad^n(S, S)`.
    pub dims: Vec<usize>,
    pub descending: bool,
    pub divisibility: Vec<DivisibilityReport>,
    pub lower_bound: Verdict,
    pub upper_bound: Verdict,
    pub note: &'static str,
}

impl NilIndexReport {
    pub fn ok(&self) -> bool {
        self.lower_bound == Verdict::Consistent && self.upper_bound == Verdict::Consistent
    }
}

fn verdict(facts: &[bool]) -> Verdict {
    if facts.is_empty() {
        Verdict::Indeterminate
    } else if facts.iter().all(|&b| b) {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    }
}

/// Finite evidence for the radical of the category having index `ω·2`:
/// the revolution `x` sits in every tested power and its powers are
/// nonzero; `x`-divisible elements vanish in every catalog module.
pub fn nil_index_report(ctx: &Ctx, k_max: u32, n_max: usize, t: u32) -> Result<NilIndexReport> {
    let s = FamilyId::s();
    let revolutions = (1..=k_max)
        .map(|k| revolution_report(ctx, k, 5))
        .collect::<Result<Vec<_>>>()?;
    let rad = rad_power(ctx, s, s, n_max, k_max, t);
    let x = s_mult(ctx, Mono::new(1, 0));
    let x_in_rad: Vec<bool> = (1..=n_max).map(|n| rad.contains(n, &x)).collect();
    let image_depth: Vec<Option<u32>> = (1..=n_max).map(|n| image_depth(ctx, &rad, n)).collect();
    let known: Vec<u32> = image_depth.iter().flatten().copied().collect();
    let depth_non_decreasing = known.len() == image_depth.len() && known.windows(2).all(|w| w[0] <= w[1]);
    let depth_grows = known.len() >= 2 && known.last() > known.first();
    let divisibility = FamilyId::window(k_max)
        .into_iter()
        .map(|id| divisibility_vanishing_check(ctx, id, t + 1, t))
        .collect::<Result<Vec<_>>>()?;
    let reach = 2 * k_max as usize;
    let mut lower: Vec<bool> = revolutions.iter().map(RevolutionReport::ok).collect();
    lower.extend(x_in_rad.iter().take(reach));
    let mut upper: Vec<bool> = divisibility.iter().map(DivisibilityReport::ok).collect();
    if !upper.is_empty() {
        upper.push(depth_non_decreasing && depth_grows);
    }
    Ok(NilIndexReport {
        k_max,
        n_max,
        depth: t,
        dims: (0..=n_max).map(|n| rad.dim(n)).collect(),
        descending: rad.descending(),
        revolutions,
        x_in_rad,
        reach,
        image_depth,
        depth_non_decreasing,
        depth_grows,
        divisibility,
        lower_bound: verdict(&lower),
        upper_bound: verdict(&upper),
        note: "finite-window evidence only; the transfinite index is not derived here",
    })
}

/// Elements of `S` hit by `rad^n(S, S)` in degree `d`, for display.
pub fn rad_image_in_degree(rad: &RadicalWindow, n: usize, d: i32) -> Vec<Elem> {
    rad.levels[n]
        .get(&d)
        .map(|b| b.iter().map(|phi| phi.images[0].clone()).collect())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    fn ctx() -> Ctx {
        Ctx::new(Fp::new(5).unwrap())
    }

    #[test]
    fn squares_commute() {
        let c = ctx();
        for k in 1..=3 {
            assert!(verify_squares(&c, k).unwrap().ok(), "stage {k}");
        }
    }

    #[test]
    fn revolution_is_x() {
        let c = ctx();
        let r = revolution_report(&c, 2, 3).unwrap();
        assert_eq!(r.image, "x");
        assert!(r.ok());
    }

    #[test]
    fn first_radical_is_maximal_ideal() {
        let c = ctx();
        let s = FamilyId::s();
        let rad = rad_power(&c, s, s, 1, 3, 4);
        // Hom(S, S) in degrees ≤ 4 has dimension 1 + 2 + 3 + 3 + 3.
        assert_eq!(rad.dim(0), 12);
        assert_eq!(rad.dim(1), 11);
        assert!(!rad.contains(1, &s_mult(&c, Mono::new(0, 0))));
    }

    #[test]
    fn m_k_is_killed_by_x_squared() {
        let c = ctx();
        let r = divisibility_vanishing_check(&c, FamilyId::m(2), 4, 6).unwrap();
        assert_eq!(r.killed_by, Some(2));
        assert_eq!(&r.dims[2..], &[0, 0, 0]);
    }
}
