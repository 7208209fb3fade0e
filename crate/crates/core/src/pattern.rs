//! CM-formulae as pointed modules, the pattern of a pointed module and the
//! lattice of sums generated by a pattern window.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{Family, FamilyId};
use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::hom::pointed_exists;
use crate::linalg::Subspace;
use crate::module::{Elem, FreeElem, GradedModule};

/// A pointed module `(M, m)`, standing for the CM-formula it freely
/// realizes. A zero point is the bottom formula `v = 0`.
#[derive(Debug, Clone)]
pub struct PointedModule {
    pub module: Arc<GradedModule>,
    pub point: Elem,
    pub label: String,
}

impl fmt::Display for PointedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl PointedModule {
    pub fn new(module: Arc<GradedModule>, point: Elem) -> Self {
        let label = format!("({}, {})", module.name(), module.format_elem(&point));
        PointedModule { module, point, label }
    }

    /// A catalog module with a point given as an expression in its
    /// generators, e.g. `("X_1", "m*x^2")`.
    pub fn catalog(ctx: &Ctx, id: FamilyId, expr: &str) -> Result<Self> {
        let module = ctx.module(id);
        let point = module.parse_elem(expr)?;
        Ok(PointedModule::new(module, point))
    }

    /// Parses `"(X_1, m*x^2)"` or `"X_1, m*x^2"`.
    pub fn parse(ctx: &Ctx, s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (id, expr) = t
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected (MODULE, ELEMENT), got {s:?}")))?;
        let id: FamilyId = id.trim().parse()?;
        PointedModule::catalog(ctx, id, expr.trim())
    }

    pub fn bottom(ctx: &Ctx) -> Self {
        let module = ctx.module(FamilyId::s());
        PointedModule {
            module,
            point: Elem::zero(),
            label: "0".into(),
        }
    }

    pub fn is_bottom(&self) -> bool {
        self.point.is_zero()
    }

    pub fn degree(&self) -> Option<i32> {
        self.point.degree()
    }

    /// `self ≤ other` in the lattice of formulae: a pointed morphism
    /// `other → self` exists.
    pub fn leq(&self, other: &PointedModule) -> bool {
        if self.is_bottom() {
            return true;
        }
        if other.is_bottom() {
            return false;
        }
        pointed_exists(&other.module, &other.point, &self.module, &self.point)
    }

    pub fn equivalent(&self, other: &PointedModule) -> bool {
        self.leq(other) && other.leq(self)
    }

    /// Copy with the module regraded so that the point sits in degree `d`.
    pub fn aligned(&self, d: i32) -> PointedModule {
        match self.degree() {
            Some(e) if e != d => {
                let module = Arc::new(self.module.shifted(d - e));
                PointedModule {
                    point: self.point.shifted(d - e),
                    module,
                    label: self.label.clone(),
                }
            }
            _ => self.clone(),
        }
    }
}

/// Sum of formulae: the point `(a, b)` of `A ⊕ B`.
pub fn psum(a: &PointedModule, b: &PointedModule) -> Result<PointedModule> {
    if b.is_bottom() {
        return Ok(a.clone());
    }
    if a.is_bottom() {
        return Ok(b.clone());
    }
    let d = a
        .degree()
        .ok_or_else(|| Error::InvalidParameter(format!("{a} has an inhomogeneous point")))?;
    let b = b.aligned(d);
    if !b.point.is_homogeneous() {
        return Err(Error::InvalidParameter(format!("{b} has an inhomogeneous point")));
    }
    let sum = Arc::new(GradedModule::direct_sum(&[&a.module, &b.module]));
    let point = inject_pair(&sum, &a.module, &b.module, &a.point, &b.point);
    Ok(PointedModule {
        module: sum,
        point,
        label: format!("{} + {}", a.label, b.label),
    })
}

fn inject_pair(sum: &GradedModule, a: &GradedModule, b: &GradedModule, pa: &Elem, pb: &Elem) -> Elem {
    let mut big = FreeElem::zero(sum.field(), sum.num_gens());
    for (i, c) in a.lift_elem(pa).0.into_iter().enumerate() {
        big.0[i] = c;
    }
    for (i, c) in b.lift_elem(pb).0.into_iter().enumerate() {
        big.0[a.num_gens() + i] = c;
    }
    sum.eval_free(&big)
}

/// Conjunction: the pushout of `(S, 1) → (A, a)` and `(S, 1) → (B, b)`,
/// reduced to its largest CM quotient.
pub fn pconj(a: &PointedModule, b: &PointedModule) -> Result<PointedModule> {
    if a.is_bottom() {
        return Ok(a.clone());
    }
    if b.is_bottom() {
        return Ok(b.clone());
    }
    let f = a.module.field();
    let d = a
        .degree()
        .ok_or_else(|| Error::InvalidParameter(format!("{a} has an inhomogeneous point")))?;
    let b = b.aligned(d);
    let sum = GradedModule::direct_sum(&[&a.module, &b.module]);
    let glue = inject_pair(&sum, &a.module, &b.module, &a.point, &b.point.neg(f));
    let glued = sum.with_relations("pushout", vec![sum.lift_elem(&glue)])?;
    let (reduced, _) = glued.cm_reduce(&format!("{} ∧ {}", a.label, b.label));
    let pa = inject_pair(&sum, &a.module, &b.module, &a.point, &Elem::zero());
    let point = reduced.eval_free(&sum.lift_elem(&pa));
    let label = format!("{} ∧ {}", a.label, b.label);
    Ok(PointedModule {
        module: Arc::new(reduced),
        point,
        label,
    })
}

/// A candidate node of a pattern: a catalog module with a homogeneous point.
#[derive(Debug, Clone, Serialize)]
pub struct PatternNode {
    pub module: FamilyId,
    pub degree: i32,
    #[serde(skip)]
    pub point: Elem,
    pub label: String,
}

/// The pattern window of a seed: equivalence classes of pointed catalog
/// modules reachable from the seed, ordered by pointed morphisms.
#[derive(Debug, Clone)]
pub struct Pattern {
    pub seed: PointedModule,
    pub k_max: u32,
    pub depth: u32,
    /// All candidate pointed modules found.
    pub candidates: Vec<PatternNode>,
    /// Candidate indices per class; the first entry is the representative.
    pub classes: Vec<Vec<usize>>,
    /// `below[i][j]`: class `j ≤` class `i`.
    pub below: Vec<Vec<bool>>,
    /// Hasse diagram as `(upper, lower)` class pairs.
    pub covers: Vec<(usize, usize)>,
    /// Class of the seed.
    pub top: usize,
    class_of: Vec<usize>,
    ev: Arc<EvalCache>,
}

/// Evaluation spaces `{f(point) : f: M → N}` in a fixed target degree.
#[derive(Debug, Default)]
struct EvalCache {
    spaces: RwLock<HashMap<(usize, FamilyId, i32), Arc<Subspace>>>,
}

fn eval_space(ctx: &Ctx, src: FamilyId, point: &Elem, dst: FamilyId, e: i32) -> Subspace {
    let f = ctx.field();
    let n = ctx.module(dst);
    let dim = n.dim(e);
    let Some(a) = point.degree() else {
        return Subspace::zero(f, dim);
    };
    let basis = ctx.hom(src, dst, e - a);
    let vecs = basis.iter().filter_map(|phi| phi.apply(point).part(e).cloned());
    Subspace::span(f, dim, vecs)
}

impl Pattern {
    fn ev(&self, ctx: &Ctx, i: usize, dst: FamilyId, e: i32) -> Arc<Subspace> {
        let key = (i, dst, e);
        if let Some(s) = self.ev.spaces.read().unwrap().get(&key) {
            return s.clone();
        }
        let c = &self.candidates[i];
        let s = Arc::new(eval_space(ctx, c.module, &c.point, dst, e));
        self.ev.spaces.write().unwrap().insert(key, s.clone());
        s
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn rep(&self, class: usize) -> &PatternNode {
        &self.candidates[self.classes[class][0]]
    }

    pub fn label(&self, class: usize) -> &str {
        &self.rep(class).label
    }

    pub fn pointed(&self, ctx: &Ctx, class: usize) -> PointedModule {
        let n = self.rep(class);
        let module = ctx.module(n.module);
        PointedModule {
            module,
            point: n.point.clone(),
            label: n.label.clone(),
        }
    }

    /// Class containing the pointed catalog module `(id, expr)`, if it is
    /// in the window.
    pub fn find(&self, ctx: &Ctx, id: FamilyId, expr: &str) -> Option<usize> {
        let m = ctx.module(id);
        let point = m.parse_elem(expr).ok()?;
        let d = point.degree()?;
        let v = point.part(d)?;
        self.candidates
            .iter()
            .position(|c| c.module == id && c.degree == d && crate::linalg::normalize(m.field(), c.point.part(d).unwrap().clone()) == crate::linalg::normalize(m.field(), v.clone()))
            .map(|i| self.class_of[i])
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b][a]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.below[b][a]
    }

    /// Classes below `c` (inclusive).
    pub fn down(&self, c: usize) -> BTreeSet<usize> {
        (0..self.len()).filter(|&j| self.below[c][j]).collect()
    }

    /// Whether the formula `Σ_{j∈sum} ψ_j` lies above class `c`, decided by
    /// evaluation spaces: `n_c ∈ Σ_j {f(n_j)}`.
    pub fn below_sum(&self, ctx: &Ctx, c: usize, sum: &[usize]) -> bool {
        let f = ctx.field();
        let node = self.rep(c);
        let target = node.point.part(node.degree).unwrap();
        let mut acc = Subspace::zero(f, target.len());
        for &j in sum {
            let i = self.classes[j][0];
            acc = acc.sum(&self.ev(ctx, i, node.module, node.degree));
        }
        acc.contains(target)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "seed": self.seed.label,
            "k_max": self.k_max,
            "depth": self.depth,
            "nodes": (0..self.len()).map(|c| {
                let n = self.rep(c);
                serde_json::json!({
                    "label": n.label,
                    "module": n.module.to_string(),
                    "point": n.label.split_once(", ").map(|x| x.1.trim_end_matches(')')).unwrap_or(""),
                    "members": self.classes[c].len(),
                })
            }).collect::<Vec<_>>(),
            "covers": self.covers,
            "top": self.top,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph pattern {\n  rankdir=TB;\n  node [shape=plaintext];\n");
        for c in 0..self.len() {
            s.push_str(&format!("  n{c} [label=\"{}\"];\n", self.label(c)));
        }
        for (u, l) in &self.covers {
            s.push_str(&format!("  n{u} -> n{l} [arrowhead=none];\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Enumerates the pattern of `seed` over catalog modules with index at most
/// `k_max`, in degrees up to `depth` above the seed point.
pub fn pattern(ctx: &Ctx, seed_id: FamilyId, seed_expr: &str, k_max: u32, depth: u32, cap: usize) -> Result<Pattern> {
    let seed = PointedModule::catalog(ctx, seed_id, seed_expr)?;
    let a = seed
        .degree()
        .ok_or_else(|| Error::InvalidParameter("seed point must be nonzero and homogeneous".into()))?;
    let window = FamilyId::window(k_max);
    let mut candidates = Vec::new();
    let mut total = 0usize;
    for &id in &window {
        let n = ctx.module(id);
        let lo = n.min_gen_degree().unwrap_or(0);
        for e in lo..=a + depth as i32 {
            let space = eval_space(ctx, seed_id, &seed.point, id, e);
            let pts = space.projective_points(cap.saturating_sub(total)).ok_or_else(|| {
                Error::TooLarge(format!("more than {cap} pattern candidates"))
            })?;
            total += pts.len();
            for v in pts {
                let point = Elem::homogeneous(e, v);
                let label = format!("({id}, {})", n.format_elem(&point));
                candidates.push(PatternNode {
                    module: id,
                    degree: e,
                    point,
                    label,
                });
            }
        }
    }
    // the seed itself, so that the top class is present
    if !candidates.iter().any(|c| c.module == seed_id && c.point == seed.point) {
        candidates.push(PatternNode {
            module: seed_id,
            degree: a,
            point: seed.point.clone(),
            label: format!("({seed_id}, {})", seed.module.format_elem(&seed.point)),
        });
    }
    let seed_idx = candidates
        .iter()
        .position(|c| c.module == seed_id && c.point == seed.point)
        .unwrap();
    let mut pat = Pattern {
        seed,
        k_max,
        depth,
        candidates,
        classes: Vec::new(),
        below: Vec::new(),
        covers: Vec::new(),
        top: 0,
        class_of: Vec::new(),
        ev: Arc::new(EvalCache::default()),
    };
    let n = pat.candidates.len();
    // below[i][j] for candidates: j ≤ i
    let rows: Vec<Vec<bool>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return true;
                    }
                    let c = &pat.candidates[j];
                    pat.ev(ctx, i, c.module, c.degree).contains(c.point.part(c.degree).unwrap())
                })
                .collect()
        })
        .collect();
    // classes by mutual ≤
    let mut class_of = vec![usize::MAX; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&pat.candidates[i], &pat.candidates[j]);
        (a.module, a.degree, a.label.len(), &a.label).cmp(&(b.module, b.degree, b.label.len(), &b.label))
    });
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        if class_of[i] != usize::MAX {
            continue;
        }
        let cls: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&j| class_of[j] == usize::MAX && rows[i][j] && rows[j][i])
            .collect();
        for &j in &cls {
            class_of[j] = classes.len();
        }
        classes.push(cls);
    }
    let m = classes.len();
    let below: Vec<Vec<bool>> = (0..m)
        .map(|a| (0..m).map(|b| rows[classes[a][0]][classes[b][0]]).collect())
        .collect();
    let mut covers = Vec::new();
    for u in 0..m {
        for l in 0..m {
            if u == l || !below[u][l] {
                continue;
            }
            let between = (0..m).any(|w| w != u && w != l && below[u][w] && below[w][l]);
            if !between {
                covers.push((u, l));
            }
        }
    }
    pat.top = class_of[seed_idx];
    pat.classes = classes;
    pat.below = below;
    pat.covers = covers;
    pat.class_of = class_of;
    Ok(pat)
}

/// A formula of the interval window: a finite sum of pattern classes,
/// stored as the down-set it generates.
pub type Downset = BTreeSet<usize>;

/// The lattice of finite sums of pattern classes, with sums identified by
/// the classes they lie above.
#[derive(Debug, Clone)]
pub struct IntervalWindow {
    pub pattern: Pattern,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalReport {
    pub classes: usize,
    /// Pairs `(φ, ψ₁ + ψ₂)` checked against the trivial-reason rule.
    pub sum_pairs_checked: usize,
    pub sum_rule_failures: Vec<String>,
    pub distributive_triples: usize,
    pub distributive: bool,
    pub conjunction_pairs: usize,
    pub conjunction_failures: Vec<String>,
}

impl IntervalReport {
    pub fn ok(&self) -> bool {
        self.sum_rule_failures.is_empty() && self.distributive && self.conjunction_failures.is_empty()
    }
}

impl IntervalWindow {
    pub fn new(pattern: Pattern) -> Self {
        IntervalWindow { pattern }
    }

    /// Down-set generated by a sum of classes.
    pub fn sum(&self, parts: &[usize]) -> Downset {
        parts.iter().flat_map(|&c| self.pattern.down(c)).collect()
    }

    pub fn join(a: &Downset, b: &Downset) -> Downset {
        a.union(b).copied().collect()
    }

    pub fn meet(a: &Downset, b: &Downset) -> Downset {
        a.intersection(b).copied().collect()
    }

    /// Length of the interval `[lo, hi]` (both down-sets, `lo ⊆ hi`).
    pub fn length(lo: &Downset, hi: &Downset) -> usize {
        hi.difference(lo).count()
    }

    /// The down-set of the evaluated sum `Σ parts`: the classes that the
    /// actual direct-sum pointed module lies above.
    pub fn evaluated_sum(&self, ctx: &Ctx, parts: &[usize]) -> Downset {
        (0..self.pattern.len())
            .filter(|&c| self.pattern.below_sum(ctx, c, parts))
            .collect()
    }

    /// Checks the trivial-reason rule on every class against every pair of
    /// incomparable classes, distributivity on random triples of two-term
    /// sums, and that conjunction agrees with intersection on a sample of
    /// class pairs.
    pub fn verify(&self, ctx: &Ctx, triples: usize, conj_pairs: usize, seed: u64) -> IntervalReport {
        let p = &self.pattern;
        let m = p.len();
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .filter(|&(a, b)| !p.leq(a, b) && !p.leq(b, a))
            .collect();
        let failures: Vec<String> = pairs
            .par_iter()
            .flat_map_iter(|&(a, b)| {
                (0..m).filter_map(move |c| {
                    let real = p.below_sum(ctx, c, &[a, b]);
                    let trivial = p.leq(c, a) || p.leq(c, b);
                    (real != trivial).then(|| format!("{} vs {} + {}", p.label(c), p.label(a), p.label(b)))
                })
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut distributive = true;
        let pick = |rng: &mut ChaCha8Rng| -> Downset {
            let a = rng.gen_range(0..m);
            let b = rng.gen_range(0..m);
            self.sum(&[a, b])
        };
        for _ in 0..triples {
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let lhs = Self::meet(&a, &Self::join(&b, &c));
            let rhs = Self::join(&Self::meet(&a, &b), &Self::meet(&a, &c));
            distributive &= lhs == rhs;
        }
        let mut conj_failures = Vec::new();
        let mut checked = 0;
        for _ in 0..conj_pairs.min(m * m) {
            let a = rng.gen_range(0..m);
            let b = rng.gen_range(0..m);
            let Ok(c) = pconj(&p.pointed(ctx, a), &p.pointed(ctx, b)) else {
                conj_failures.push(format!("{} ∧ {}: pushout failed", p.label(a), p.label(b)));
                continue;
            };
            checked += 1;
            let expected = Self::meet(&p.down(a), &p.down(b));
            let real: Downset = (0..m).filter(|&x| p.pointed(ctx, x).leq(&c)).collect();
            if real != expected {
                conj_failures.push(format!("{} ∧ {}", p.label(a), p.label(b)));
            }
        }
        IntervalReport {
            classes: m,
            sum_pairs_checked: pairs.len() * m,
            sum_rule_failures: failures,
            distributive_triples: triples,
            distributive,
            conjunction_pairs: checked,
            conjunction_failures: conj_failures,
        }
    }
}

/// Whether a family is one of the modules over `S/(x²)`.
pub fn over_r(id: FamilyId) -> bool {
    matches!(id.family, Family::B | Family::C | Family::M)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    fn ctx() -> Ctx {
        Ctx::new(Fp::new(5).unwrap())
    }

    #[test]
    fn divisibility_order() {
        let c = ctx();
        let x = PointedModule::catalog(&c, FamilyId::s(), "x").unwrap();
        let x2 = PointedModule::catalog(&c, FamilyId::s(), "x^2").unwrap();
        assert!(x2.leq(&x));
        assert!(!x.leq(&x2));
    }

    #[test]
    fn sum_and_conjunction_basics() {
        let c = ctx();
        let a = PointedModule::catalog(&c, FamilyId::x(1), "m*x^2").unwrap();
        let top = PointedModule::catalog(&c, FamilyId::s(), "1").unwrap();
        assert!(pconj(&a, &top).unwrap().equivalent(&a));
        assert!(pconj(&a, &a).unwrap().equivalent(&a));
        assert!(psum(&a, &PointedModule::bottom(&c)).unwrap().equivalent(&a));
        let b = PointedModule::catalog(&c, FamilyId::n(1), "m*x^2").unwrap();
        let s = psum(&a, &b).unwrap();
        assert!(a.leq(&s) && b.leq(&s));
    }
}
