//! Run configuration, check reports and the runner behind `verify-all`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ar::{
    almost_split_check, all_edges, ar_sequence, composite_is_inclusion, coray_limit_check, infinite_ar_check,
    InfiniteSeq, SeqId,
};
use crate::catalog::{killed_by_x2, realize, Family, FamilyId, PointId};
use crate::cb::{cb_table, classify_cuts, dimension_report, open_set_report, window_collapse, Interval, Pair};
use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::facts::{vx_zero_facts, x_square_facts, Fact};
use crate::field::Fp;
use crate::hom::{dual, is_indecomposable};
use crate::module::GradedModule;
use crate::pattern::{pattern, IntervalWindow};
use crate::quilt::{build_quilt, divisibility_vanishing_check, nil_index_report, DivisibilityReport, quiver_consistency, revolution_report, verify_squares};
use crate::ring::{loc_eq, loc_is_zero, nf, LocElem, QuotientRingModel, SElem};

/// Parameters shared by every check.
#[derive(Debug, Clone, Serialize)]
pub struct Config {
    pub prime: u32,
    pub k_max: u32,
    pub depth: u32,
    pub n_max: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            prime: 5,
            k_max: 5,
            depth: 18,
            n_max: 10,
            seed: 0,
        }
    }
}

impl Config {
    /// Validates the parameters; `depth` defaults to `2·k_max + 8`.
    pub fn new(prime: u32, k_max: u32, depth: Option<u32>, n_max: usize, seed: u64) -> Result<Self> {
        Fp::new(prime)?;
        if k_max < 2 {
            return Err(Error::InvalidParameter("k_max must be at least 2".into()));
        }
        let depth = depth.unwrap_or(2 * k_max + 8);
        if depth < 2 * k_max + 4 {
            return Err(Error::InvalidParameter(format!(
                "depth {depth} is below 2·k_max + 4 = {}",
                2 * k_max + 4
            )));
        }
        Ok(Config {
            prime,
            k_max,
            depth,
            n_max,
            seed,
        })
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.prime).expect("validated")
    }

    pub fn ctx(&self) -> Ctx {
        Ctx::new(self.field())
    }

    /// Window used by the pattern and collapse checks.
    pub fn pattern_k(&self) -> u32 {
        self.k_max.min(4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

/// Whether a report speaks about the computed window only, or attaches
/// symbolic data (order types, transfinite indices) on top of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    WindowVerified,
    Symbolic,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub scope: Scope,
    /// The fact being checked.
    pub anchor: String,
    /// Largest degree (or stage) the certificate covers.
    pub depth: u32,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Report {
    fn new(check: &str, anchor: &str, depth: u32, scope: Scope, failures: Vec<String>, details: Value) -> Self {
        let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
        Report {
            check: check.into(),
            status,
            scope,
            anchor: anchor.into(),
            depth,
            details,
            counterexample: (!failures.is_empty()).then(|| failures.join("; ")),
        }
    }

    fn from_error(check: &str, anchor: &str, depth: u32, e: Error) -> Self {
        let status = match e {
            Error::Indeterminate(_) => Status::Indeterminate,
            _ => Status::Fail,
        };
        Report {
            check: check.into(),
            status,
            scope: Scope::WindowVerified,
            anchor: anchor.into(),
            depth,
            details: Value::Null,
            counterexample: Some(e.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One line per report, for terminals.
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Indeterminate => "INDET",
        };
        let mut s = format!("{tag:5} {:24} {}", self.check, self.anchor);
        if let Some(c) = &self.counterexample {
            s.push_str(&format!("\n      counterexample: {c}"));
        }
        s
    }
}

/// Exit code for a batch of reports: 0 when nothing failed and something
/// passed, 3 when every report is indeterminate, 1 otherwise.
pub fn exit_code(reports: &[Report]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else if !reports.is_empty() && reports.iter().all(|r| r.status == Status::Indeterminate) {
        3
    } else {
        0
    }
}

fn facts_failures(facts: &[Fact]) -> Vec<String> {
    facts
        .iter()
        .filter(|f| !f.holds)
        .map(|f| format!("{}: {}", f.name, f.detail))
        .collect()
}

type Check = fn(&Ctx, &Config) -> Result<Report>;

/// Every check, keyed by id.
pub fn checks() -> Vec<(&'static str, &'static str, Check)> {
    vec![
        ("ring.identities", "x²y = 0, u² = u³, e² = e, ey = 0, 1 − e = y(2x+y)/(x+y)²", ring_identities),
        ("ring.socles", "S/(x+y)S has a simple socle, S′/(x+y)S′ a 2-dimensional one", ring_socles),
        ("catalog.integrity", "catalog presentations are CM and embed in S or S²", catalog_integrity),
        ("catalog.indecomposable", "catalog modules have local endomorphism rings", catalog_indecomposable),
        ("quiver.edges", "the fifteen irreducible maps and their composites", quiver_edges),
        ("quiver.sequences", "almost split sequences of the eight families", quiver_sequences),
        ("quiver.duality", "Hom(−, S) swaps X_k and Y_k and fixes the rest", quiver_duality),
        ("quiver.infinite", "the two infinitely generated almost split sequences", quiver_infinite),
        ("lattice.x-square", "pattern of (S, x²) and its distributive interval", lattice_x_square),
        ("lattice.vx-zero", "pattern of (C, c) below vx = 0", lattice_vx_zero),
        ("cb.collapse", "collapsing finite-length intervals of both pattern windows", cb_collapse),
        ("cb.dimension", "m-dimension of both intervals, total 2", cb_dimension),
        ("cb.table", "Cantor–Bendixson ranks and isolating pairs", cb_table_check),
        ("cb.open-set", "vx = 0 / v = 0 contains every modelled point except A and G_x", cb_open_set),
        ("cb.cuts", "cuts of the (S, x²) window", cb_cuts),
        ("quilt.graph", "quilt = AR quiver plus limit boundary", quilt_graph),
        ("quilt.squares", "the two gluing squares commute", quilt_squares),
        ("quilt.revolution", "one revolution around the strip is multiplication by x", quilt_revolution),
        ("radical.divisibility", "elements divisible by every power of x vanish in each catalog module", radical_divisibility),
        ("radical.nil-index", "radical powers of the category are consistent with index ω·2", radical_nil_index),
    ]
}

/// Runs one check by id.
pub fn run_check(ctx: &Ctx, config: &Config, id: &str) -> Option<Report> {
    checks().into_iter().find(|c| c.0 == id).map(|(id, anchor, f)| {
        f(ctx, config).unwrap_or_else(|e| Report::from_error(id, anchor, config.depth, e))
    })
}

/// Runs every check concurrently; reports come back sorted by check id.
pub fn verify_all(config: &Config) -> Vec<Report> {
    let ctx = config.ctx();
    let list = checks();
    let mut out: Vec<Report> = list
        .par_iter()
        .map(|(id, anchor, f)| f(&ctx, config).unwrap_or_else(|e| Report::from_error(id, anchor, config.depth, e)))
        .collect();
    out.sort_by(|a, b| a.check.cmp(&b.check));
    out
}

fn ring_identities(ctx: &Ctx, c: &Config) -> Result<Report> {
    let f = ctx.field();
    let mut fails = Vec::new();
    let x = SElem::x(f);
    let y = SElem::y(f);
    if !x.mul(&x).mul(&y).is_zero() {
        fails.push("x²y ≠ 0".into());
    }
    for depth in 5..=c.depth {
        let u = LocElem::u(f, depth);
        let e = LocElem::e(f, depth);
        let one = LocElem::from_s(SElem::one(f), depth);
        let rhs = LocElem::new(nf(f, "y*(2*x+y)")?, 2, depth);
        let checks = [
            ("u² = u³", loc_eq(&u.mul(&u), &u.mul(&u).mul(&u))?),
            ("e² = e", loc_eq(&e.mul(&e), &e)?),
            ("ey = 0", loc_is_zero(&e.scale_s(&y))?),
            ("1 − e = y(2x+y)/(x+y)²", loc_eq(&one.sub(&e), &rhs)?),
        ];
        for (name, ok) in checks {
            if !ok {
                fails.push(format!("{name} at depth {depth}"));
            }
        }
    }
    Ok(Report::new(
        "ring.identities",
        "x²y = 0, u² = u³, e² = e, ey = 0, 1 − e = y(2x+y)/(x+y)²",
        c.depth,
        Scope::WindowVerified,
        fails,
        json!({ "depths": [5, c.depth] }),
    ))
}

/// `F[x, z]/(z², zx, x²)`, the fibre of the overring at `x + y`.
pub fn overring_fibre(f: Fp) -> Result<QuotientRingModel> {
    QuotientRingModel::presented(
        f,
        "F[x,z]/(z^2,zx,x^2)",
        &["x", "z"],
        &[vec![(1, vec![0, 2])], vec![(1, vec![1, 1])], vec![(1, vec![2, 0])]],
    )
}

fn ring_socles(ctx: &Ctx, c: &Config) -> Result<Report> {
    let f = ctx.field();
    let fibre = QuotientRingModel::s_mod_x_plus_y(f);
    let over = overring_fibre(f)?;
    let mut fails = Vec::new();
    if fibre.socle_dim() != 1 {
        fails.push(format!("S/(x+y)S socle has dimension {}", fibre.socle_dim()));
    }
    if over.socle_dim() != 2 {
        fails.push(format!("S′/(x+y)S′ socle has dimension {}", over.socle_dim()));
    }
    Ok(Report::new(
        "ring.socles",
        "S/(x+y)S has a simple socle, S′/(x+y)S′ a 2-dimensional one",
        c.depth,
        Scope::WindowVerified,
        fails,
        json!({ "S/(x+y)S": fibre.socle_dim(), "S'/(x+y)S'": over.socle_dim() }),
    ))
}

fn catalog_integrity(ctx: &Ctx, c: &Config) -> Result<Report> {
    let f = ctx.field();
    let ids = FamilyId::window(c.k_max);
    let fails: Vec<String> = ids
        .par_iter()
        .flat_map_iter(|&id| {
            let m = ctx.module(id);
            let mut out = Vec::new();
            if !m.is_cm() {
                out.push(format!("{id} has nonzero socle"));
            }
            let over_r = matches!(id.family, Family::B | Family::C | Family::M);
            if over_r && !killed_by_x2(&m) {
                out.push(format!("x² does not kill {id}"));
            }
            if id.family == Family::C && !m.mul_mono(&m.gen_elem(0), crate::ring::Mono::new(1, 0)).is_zero() {
                out.push("x does not kill C".into());
            }
            if let Err(e) = realize(f, id, c.depth) {
                out.push(format!("{id}: {e}"));
            }
            out
        })
        .collect();
    Ok(Report::new(
        "catalog.integrity",
        "catalog presentations are CM and embed in S or S²",
        c.depth,
        Scope::WindowVerified,
        fails,
        json!({ "modules": ids.len(), "kmax": c.k_max }),
    ))
}

fn catalog_indecomposable(ctx: &Ctx, c: &Config) -> Result<Report> {
    let trials = 20;
    let ids = FamilyId::window(c.k_max.min(5));
    let mut fails: Vec<String> = ids
        .par_iter()
        .filter_map(|&id| {
            let v = is_indecomposable(&ctx.module(id), trials, c.seed);
            v.decomposed.then(|| format!("{id} decomposed"))
        })
        .collect();
    let m1 = ctx.module(FamilyId::m(1));
    let planted = Arc::new(GradedModule::direct_sum(&[&m1, &m1]));
    let v = is_indecomposable(&planted, trials, c.seed);
    if !v.decomposed {
        fails.push("M_1 ⊕ M_1 was not decomposed".into());
    }
    Ok(Report::new(
        "catalog.indecomposable",
        "catalog modules have local endomorphism rings",
        c.k_max.min(5),
        Scope::WindowVerified,
        fails,
        json!({ "modules": ids.len(), "trials": trials, "seed": c.seed, "planted_idempotent": v.idempotent }),
    ))
}

fn quiver_edges(ctx: &Ctx, c: &Config) -> Result<Report> {
    let edges = all_edges(ctx, c.k_max);
    let mut fails: Vec<String> = edges
        .iter()
        .filter(|e| !e.morphism.is_well_defined() || e.morphism.is_zero())
        .map(|e| format!("edge {} {} → {}", e.label, e.source, e.target))
        .collect();
    let labels: std::collections::BTreeSet<&str> = edges.iter().map(|e| e.label.as_str()).collect();
    if labels.len() != 16 {
        fails.push(format!("{} distinct edge labels", labels.len()));
    }
    for k in 1..c.k_max {
        if !composite_is_inclusion(ctx, Family::Y, k)? {
            fails.push(format!("Y_{} → N_{k} → Y_{k} is not the inclusion", k + 1));
        }
        if !composite_is_inclusion(ctx, Family::M, k)? {
            fails.push(format!("M_{} → X_{} → M_{k} is not the inclusion", k + 1, k + 1));
        }
    }
    let coray = coray_limit_check(ctx, Family::Y, c.k_max, c.k_max + 4)?;
    if !(coray.frontier_ok && coray.stable_ok) {
        fails.push("the Y coray does not stabilise at xS".into());
    }
    Ok(Report::new(
        "quiver.edges",
        "the fifteen irreducible maps and their composites",
        c.k_max + 4,
        Scope::WindowVerified,
        fails,
        json!({ "edges": edges.len(), "coray_image": coray.image_generators }),
    ))
}

fn quiver_sequences(ctx: &Ctx, c: &Config) -> Result<Report> {
    let k = c.k_max.min(5);
    let depth = 6;
    let ids = SeqId::window(k);
    let results: Vec<Result<Vec<String>>> = ids
        .par_iter()
        .map(|&id| {
            let ar = ar_sequence(ctx, id)?;
            let mut out = Vec::new();
            if !ar.seq.composite_zero() {
                out.push(format!("{id}: composite is nonzero"));
            }
            if !ar.seq.exactness(depth).ok() {
                out.push(format!("{id}: not exact"));
            }
            let split = almost_split_check(ctx, &ar, k, depth);
            if !split.ok() {
                out.push(format!("{id}: {} of {} maps factor", split.factored, split.tested));
            }
            if id.left_end() == FamilyId::s() || id.right_end() == FamilyId::s() {
                out.push(format!("{id} has S as an end"));
            }
            Ok(out)
        })
        .collect();
    let mut fails = Vec::new();
    for r in results {
        fails.extend(r?);
    }
    Ok(Report::new(
        "quiver.sequences",
        "almost split sequences of the eight families",
        depth,
        Scope::WindowVerified,
        fails,
        json!({ "sequences": ids.len(), "kmax": k }),
    ))
}

/// The expected dual of a catalog module.
pub fn expected_dual(id: FamilyId) -> FamilyId {
    match id.family {
        Family::X => FamilyId::y(id.k),
        Family::Y => FamilyId::x(id.k),
        _ => id,
    }
}

fn quiver_duality(ctx: &Ctx, c: &Config) -> Result<Report> {
    let k = c.k_max.min(4);
    let f = ctx.field();
    let results: Vec<Result<(FamilyId, FamilyId)>> = FamilyId::window(k)
        .par_iter()
        .map(|&id| dual(f, id, k, c.seed).map(|d| (id, d.matched)))
        .collect();
    let mut table = serde_json::Map::new();
    let mut fails = Vec::new();
    for r in results {
        let (id, got) = r?;
        if got != expected_dual(id) {
            fails.push(format!("dual of {id} is {got}"));
        }
        table.insert(id.to_string(), Value::String(got.to_string()));
    }
    Ok(Report::new(
        "quiver.duality",
        "Hom(−, S) swaps X_k and Y_k and fixes the rest",
        k,
        Scope::WindowVerified,
        fails,
        Value::Object(table),
    ))
}

fn quiver_infinite(ctx: &Ctx, c: &Config) -> Result<Report> {
    let stages = c.k_max.min(5);
    let mut fails = Vec::new();
    let mut evaluations = Vec::new();
    for k in 1..=stages {
        for which in [InfiniteSeq::EndsInD, InfiniteSeq::EndsInC] {
            let r = infinite_ar_check(ctx, which, k, c.depth)?;
            if !r.ok() {
                fails.push(format!("{which} at stage {k}"));
            }
            if k == 1 {
                evaluations.push(r.evaluation.clone());
            }
        }
    }
    Ok(Report::new(
        "quiver.infinite",
        "the two infinitely generated almost split sequences",
        c.depth,
        Scope::WindowVerified,
        fails,
        json!({ "stages": stages, "evaluations": evaluations }),
    ))
}

fn lattice_x_square(ctx: &Ctx, c: &Config) -> Result<Report> {
    let k = c.pattern_k();
    let p = pattern(ctx, FamilyId::s(), "x^2", k, 3 * k, 1 << 20)?;
    let facts = x_square_facts(ctx, &p)?;
    let mut fails = facts_failures(&facts);
    let window = IntervalWindow::new(p.clone());
    let rep = window.verify(ctx, 400, 12, c.seed);
    if !rep.ok() {
        fails.push(format!(
            "interval: {} sum-rule failures, distributive {}",
            rep.sum_rule_failures.len(),
            rep.distributive
        ));
    }
    Ok(Report::new(
        "lattice.x-square",
        "pattern of (S, x²) and its distributive interval",
        3 * k,
        Scope::WindowVerified,
        fails,
        json!({ "classes": p.len(), "facts": facts, "interval": rep }),
    ))
}

fn lattice_vx_zero(ctx: &Ctx, c: &Config) -> Result<Report> {
    let k = c.pattern_k();
    let p = pattern(ctx, FamilyId::plain(Family::C), "c", k, 3 * k, 1 << 20)?;
    let facts = vx_zero_facts(ctx, &p)?;
    Ok(Report::new(
        "lattice.vx-zero",
        "pattern of (C, c) below vx = 0",
        3 * k,
        Scope::WindowVerified,
        facts_failures(&facts),
        json!({ "classes": p.len(), "facts": facts }),
    ))
}

fn collapse_windows(ctx: &Ctx, c: &Config) -> Result<Vec<(crate::cb::CollapseWindow, Vec<String>)>> {
    let k = c.pattern_k();
    Interval::all()
        .into_iter()
        .map(|iv| {
            let w = window_collapse(ctx, iv, k, 4 * k)?;
            let next = window_collapse(ctx, iv, k + 1, 4 * k + 2)?;
            let drift = w.agrees_with(ctx, &next);
            Ok((w, drift))
        })
        .collect()
}

fn cb_collapse(ctx: &Ctx, c: &Config) -> Result<Report> {
    let windows = collapse_windows(ctx, c)?;
    let mut fails = Vec::new();
    let mut details = serde_json::Map::new();
    for (w, drift) in &windows {
        for i in &w.issues {
            fails.push(format!("{}: {i}", w.interval.name()));
        }
        for d in drift {
            fails.push(format!("{}: unstable: {d}", w.interval.name()));
        }
        details.insert(w.interval.name().into(), w.to_json());
    }
    Ok(Report::new(
        "cb.collapse",
        "collapsing finite-length intervals of both pattern windows",
        4 * c.pattern_k(),
        Scope::WindowVerified,
        fails,
        Value::Object(details),
    ))
}

fn cb_dimension(ctx: &Ctx, c: &Config) -> Result<Report> {
    let windows = collapse_windows(ctx, c)?;
    let refs: Vec<&crate::cb::CollapseWindow> = windows.iter().map(|p| &p.0).collect();
    let rep = dimension_report(&refs);
    let mut fails = Vec::new();
    for d in &rep.intervals {
        if !d.window_consistent {
            fails.push(format!("{} disagrees with its chain", d.interval));
        }
    }
    let vx = rep.intervals.iter().find(|d| d.interval == Interval::VxZero.name());
    if vx.map(|d| d.second.to_string()) != Some("3".into()) {
        fails.push("second derivative of the vx = 0 chain is not a 3-element chain".into());
    }
    if rep.total != 2 {
        fails.push(format!("total m-dimension {}", rep.total));
    }
    Ok(Report::new(
        "cb.dimension",
        "m-dimension of both intervals, total 2",
        4 * c.pattern_k(),
        Scope::Symbolic,
        fails,
        serde_json::to_value(&rep).unwrap_or(Value::Null),
    ))
}

/// Window `(K, depth)` for the rank table. Isolating pairs of the
/// finitely generated points need `K ≥ 3` regardless of `k_max`.
pub fn cb_window(c: &Config) -> (u32, u32) {
    let k = (c.pattern_k() - 1).max(3);
    (k, 10.max(2 * k + 4))
}

fn cb_table_check(ctx: &Ctx, c: &Config) -> Result<Report> {
    let (k, depth) = cb_window(c);
    let table = cb_table(ctx, k, depth)?;
    let mut fails: Vec<String> = table
        .entries
        .iter()
        .filter(|e| !e.ok())
        .map(|e| format!("{} ({}): {}", e.point, e.pair, e.issues.join(", ")))
        .collect();
    let expect = |pt: PointId| match pt {
        PointId::Catalog(id) if matches!(id.family, Family::C | Family::D) => 1,
        PointId::Catalog(_) => 0,
        PointId::NTilde | PointId::RTilde => 1,
        _ => 2,
    };
    for e in &table.entries {
        if e.level != expect(e.id) {
            fails.push(format!("{} has rank {}", e.point, e.level));
        }
    }
    for pt in [PointId::NTilde, PointId::RTilde] {
        if table.entry(pt).and_then(|e| e.neg_isolated) != Some(true) {
            fails.push(format!("{pt} is not neg-isolated"));
        }
    }
    Ok(Report::new(
        "cb.table",
        "Cantor–Bendixson ranks and isolating pairs",
        depth,
        Scope::WindowVerified,
        fails,
        table.to_json(),
    ))
}

fn cb_open_set(ctx: &Ctx, c: &Config) -> Result<Report> {
    let (k, _) = cb_window(c);
    let stage = k + 2;
    let rows = open_set_report(ctx, &Pair::x_torsion(), k, stage)?;
    let excluded: Vec<String> = rows.iter().filter(|r| !r.1).map(|r| r.0.key()).collect();
    let mut fails = Vec::new();
    if excluded != ["A", "G_x"] {
        fails.push(format!("excluded points: {excluded:?}"));
    }
    Ok(Report::new(
        "cb.open-set",
        "vx = 0 / v = 0 contains every modelled point except A and G_x",
        stage,
        Scope::WindowVerified,
        fails,
        json!({ "excluded": excluded, "points": rows.len() }),
    ))
}

fn cb_cuts(ctx: &Ctx, c: &Config) -> Result<Report> {
    let k = c.pattern_k();
    let p = pattern(ctx, FamilyId::s(), "x^2", k, 3 * k, 1 << 20)?;
    let cuts = classify_cuts(ctx, &p)?;
    let mut fails: Vec<String> = cuts
        .accepted
        .iter()
        .filter(|cut| !cut.accepted())
        .map(|cut| format!("{} is not accepted", cut.kind))
        .collect();
    let has = |name: &str| cuts.accepted.iter().any(|cut| cut.kind.to_string() == name);
    for name in ["p_1", "q"] {
        if !has(name) {
            fails.push(format!("cut {name} missing"));
        }
    }
    Ok(Report::new(
        "cb.cuts",
        "cuts of the (S, x²) window",
        3 * k,
        Scope::WindowVerified,
        fails,
        json!({
            "accepted": cuts.accepted.iter().map(|cut| cut.kind.to_string()).collect::<Vec<_>>(),
            "rejected": cuts.rejected.len(),
        }),
    ))
}

fn quilt_graph(ctx: &Ctx, c: &Config) -> Result<Report> {
    let q = build_quilt(ctx, c.k_max)?;
    let cons = quiver_consistency(ctx, &q)?;
    let mut fails: Vec<String> = cons
        .quilt_only
        .iter()
        .map(|e| format!("{e} is in no sequence"))
        .chain(cons.sequences_only.iter().map(|e| format!("{e} is missing from the quilt")))
        .collect();
    use PointId::*;
    let cat = |id| Catalog(id);
    let want = [
        (cat(FamilyId::m(c.k_max)), RTilde),
        (RTilde, NTilde),
        (NTilde, RTilde),
        (RTilde, cat(FamilyId::plain(Family::C))),
        (NTilde, cat(FamilyId::plain(Family::D))),
        (cat(FamilyId::plain(Family::C)), cat(FamilyId::plain(Family::D))),
    ];
    for (s, t) in want {
        if !q.has_edge(s, t) {
            fails.push(format!("edge {s} → {t} missing"));
        }
    }
    Ok(Report::new(
        "quilt.graph",
        "quilt = AR quiver plus limit boundary",
        c.k_max,
        Scope::WindowVerified,
        fails,
        json!({ "nodes": q.nodes.len(), "edges": q.edges.len() }),
    ))
}

fn quilt_squares(ctx: &Ctx, c: &Config) -> Result<Report> {
    let stages = c.k_max.min(4);
    let mut fails = Vec::new();
    for k in 1..=stages {
        let r = verify_squares(ctx, k)?;
        if !r.ok() {
            fails.push(format!("stage {k}: {r:?}"));
        }
    }
    Ok(Report::new(
        "quilt.squares",
        "the two gluing squares commute",
        stages,
        Scope::WindowVerified,
        fails,
        json!({ "stages": stages }),
    ))
}

fn quilt_revolution(ctx: &Ctx, c: &Config) -> Result<Report> {
    let stages = c.k_max.min(4);
    let mut fails = Vec::new();
    let mut images = Vec::new();
    for k in 1..=stages {
        let r = revolution_report(ctx, k, 5)?;
        if !r.ok() {
            fails.push(format!("stage {k}: {r:?}"));
        }
        images.push(r.image);
    }
    Ok(Report::new(
        "quilt.revolution",
        "one revolution around the strip is multiplication by x",
        stages,
        Scope::WindowVerified,
        fails,
        json!({ "images": images }),
    ))
}

/// Window needed for `x ∈ rad^n` to be witnessed for every `n ≤ n_max`.
pub fn radical_k(c: &Config) -> u32 {
    c.k_max.max((c.n_max as u32).div_ceil(2))
}

fn radical_nil_index(ctx: &Ctx, c: &Config) -> Result<Report> {
    let k = radical_k(c);
    let t = c.depth.max(2 * k + 8);
    let r = nil_index_report(ctx, k, c.n_max, t)?;
    let mut fails = Vec::new();
    if !r.ok() {
        fails.push(format!("lower bound {:?}, upper bound {:?}", r.lower_bound, r.upper_bound));
    }
    if !r.descending {
        fails.push("radical powers are not nested".into());
    }
    if r.lower_bound == crate::quilt::Verdict::Indeterminate {
        return Err(Error::Indeterminate("empty radical window".into()));
    }
    Ok(Report::new(
        "radical.nil-index",
        "radical powers of the category are consistent with index ω·2",
        t,
        Scope::Symbolic,
        fails,
        serde_json::to_value(&r).unwrap_or(Value::Null),
    ))
}

fn radical_divisibility(ctx: &Ctx, c: &Config) -> Result<Report> {
    let t = c.depth;
    let reports: Vec<Result<DivisibilityReport>> = FamilyId::window(c.k_max)
        .par_iter()
        .map(|&id| divisibility_vanishing_check(ctx, id, t + 1, t))
        .collect();
    let reports: Vec<DivisibilityReport> = reports.into_iter().collect::<Result<_>>()?;
    let fails = reports
        .iter()
        .filter(|r| !r.ok())
        .map(|r| format!("x^j·{} does not shrink to 0: {:?}", r.module, r.dims))
        .collect();
    Ok(Report::new(
        "radical.divisibility",
        "elements divisible by every power of x vanish in each catalog module",
        t,
        Scope::WindowVerified,
        fails,
        serde_json::to_value(&reports).unwrap_or(Value::Null),
    ))
}

/// Markdown table of reports.
pub fn reports_markdown(reports: &[Report]) -> String {
    let mut out = String::from("| check | status | scope | depth | anchor |\n|---|---|---|---|---|\n");
    for r in reports {
        let status = serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        let scope = serde_json::to_value(r.scope).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        out.push_str(&format!("| {} | {status} | {scope} | {} | {} |\n", r.check, r.depth, r.anchor));
    }
    out
}
