//! Named structural facts about the two pattern windows: covers, largest
//! formulas below a node, inserted sums and the descending chain inside
//! `[0, vx = 0]`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::{Family, FamilyId};
use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::hom::evaluation_space;
use crate::linalg::Subspace;
use crate::module::GradedModule;
use crate::pattern::{psum, IntervalWindow, Pattern, PointedModule};

#[derive(Debug, Clone, Serialize)]
pub struct Fact {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Fact {
    fn new(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Fact {
            name: name.into(),
            holds,
            detail: detail.into(),
        }
    }
}

fn class(ctx: &Ctx, p: &Pattern, id: FamilyId, expr: &str) -> Result<usize> {
    p.find(ctx, id, expr)
        .ok_or_else(|| Error::InvalidParameter(format!("({id}, {expr}) is not in the window")))
}

/// Whether `upper` covers `lower` in the pattern.
pub fn is_cover(p: &Pattern, upper: usize, lower: usize) -> bool {
    p.lt(lower, upper) && !(0..p.len()).any(|c| p.lt(lower, c) && p.lt(c, upper))
}

/// The maximal classes strictly below `c`.
pub fn maximal_below(p: &Pattern, c: usize) -> Vec<usize> {
    let below: Vec<usize> = (0..p.len()).filter(|&j| p.lt(j, c)).collect();
    below
        .iter()
        .copied()
        .filter(|&j| !below.iter().any(|&k| p.lt(j, k)))
        .collect()
}

/// `lo < mid < hi` strictly, as formulas.
pub fn strictly_between(lo: &PointedModule, mid: &PointedModule, hi: &PointedModule) -> bool {
    lo.leq(mid) && mid.leq(hi) && !mid.leq(lo) && !hi.leq(mid)
}

fn labels(p: &Pattern, set: &BTreeSet<usize>) -> String {
    set.iter().map(|&c| p.label(c).to_string()).collect::<Vec<_>>().join(", ")
}

/// Facts about the pattern of `(S, x²)`: the cover by `(X_1, m x²)`, the
/// largest formula below it, and the sums `(A, x^{k+1}) + (S, x^k)` sitting
/// just under `(Y_1, n x^{k−1})` for `3 ≤ k ≤ k_max + 1`. Here `x^{k+1} ∈ A`
/// is `a·x^{k−1}`.
pub fn x_square_facts(ctx: &Ctx, p: &Pattern) -> Result<Vec<Fact>> {
    let top = class(ctx, p, FamilyId::s(), "x^2")?;
    let x1 = class(ctx, p, FamilyId::x(1), "m*x^2")?;
    let n1 = class(ctx, p, FamilyId::n(1), "m*x^2")?;
    let mut out = vec![Fact::new(
        "(S, x^2) covers (X_1, m*x^2)",
        top == p.top && is_cover(p, top, x1),
        format!("top class {}", p.label(top)),
    )];
    let max = maximal_below(p, x1);
    out.push(Fact::new(
        "(N_1, m*x^2) is the largest formula strictly below (X_1, m*x^2)",
        max == [n1],
        format!("maximal classes below: {}", labels(p, &max.iter().copied().collect())),
    ));
    let window = IntervalWindow::new(p.clone());
    for k in 3..=p.k_max + 1 {
        let a = PointedModule::catalog(ctx, FamilyId::plain(Family::A), &format!("a*x^{}", k - 1))?;
        let s = PointedModule::catalog(ctx, FamilyId::s(), &format!("x^{k}"))?;
        let y_expr = format!("n*x^{}", k - 1);
        let y = PointedModule::catalog(ctx, FamilyId::y(1), &y_expr)?;
        let sum = psum(&a, &s)?;
        let between = strictly_between(&a, &sum, &y) && strictly_between(&s, &sum, &y);
        let parts = [
            class(ctx, p, FamilyId::plain(Family::A), &format!("a*x^{}", k - 1))?,
            class(ctx, p, FamilyId::s(), &format!("x^{k}"))?,
        ];
        let yc = class(ctx, p, FamilyId::y(1), &y_expr)?;
        let gap: BTreeSet<usize> = p.down(yc).difference(&window.evaluated_sum(ctx, &parts)).copied().collect();
        out.push(Fact::new(
            format!("{sum} lies just below (Y_1, {y_expr})"),
            between && gap == BTreeSet::from([yc]),
            format!("strictly between: {between}; classes above the sum: {}", labels(p, &gap)),
        ));
    }
    Ok(out)
}

/// `{f(point) : f: (M, point) → N} = ker(x)` on every window module and
/// degree `≤ t`: the pointed module freely realizes `vx = 0`.
pub fn realizes_vx_zero(ctx: &Ctx, pm: &PointedModule, k_max: u32, t: u32) -> bool {
    let f = ctx.field();
    FamilyId::window(k_max).into_iter().all(|id| {
        let n = ctx.module(id);
        let lo = n.min_gen_degree().unwrap_or(0);
        (lo..=t as i32).all(|d| {
            let ev = evaluation_space(&pm.module, &pm.point, &n, d);
            let ker = Subspace::span(f, n.dim(d), n.x_matrix(d).kernel());
            ev == ker
        })
    })
}

/// Facts about the pattern of `(C, c)`, the element `xy ∈ C`.
pub fn vx_zero_facts(ctx: &Ctx, p: &Pattern) -> Result<Vec<Fact>> {
    let f = ctx.field();
    let top = class(ctx, p, FamilyId::plain(Family::C), "c")?;
    let quotient = Arc::new(GradedModule::from_strings(f, "S/xS", &[("e", 2)], &["e*x"])?);
    let free = PointedModule::new(quotient.clone(), quotient.gen_elem(0));
    let seed = p.pointed(ctx, top);
    let mut out = vec![Fact::new(
        "(C, c) freely realizes vx = 0",
        top == p.top && seed.equivalent(&free) && realizes_vx_zero(ctx, &seed, p.k_max, p.depth),
        "equivalent to (S/xS, 1) and evaluates to ker x on every window module",
    )];

    let x1 = class(ctx, p, FamilyId::x(1), "n")?;
    let n1 = class(ctx, p, FamilyId::n(1), "n*y")?;
    let b = class(ctx, p, FamilyId::plain(Family::B), "b*x")?;
    let gap: BTreeSet<usize> = p.down(x1).difference(&p.down(n1)).copied().collect();
    let sum = psum(
        &PointedModule::catalog(ctx, FamilyId::plain(Family::B), "b*x")?,
        &PointedModule::catalog(ctx, FamilyId::n(1), "n*y")?,
    )?;
    let between = strictly_between(&p.pointed(ctx, n1), &sum, &p.pointed(ctx, x1));
    out.push(Fact::new(
        "[(N_1, n*y), (X_1, n)] has length 2",
        gap == BTreeSet::from([x1, b]) && between,
        format!("classes above (N_1, n*y): {}; {sum} strictly between: {between}", labels(p, &gap)),
    ));

    let lo = PointedModule::catalog(ctx, FamilyId::plain(Family::B), "b*x")?;
    let hi = PointedModule::catalog(ctx, FamilyId::x(1), "n")?;
    let chain: Vec<PointedModule> = (1..p.k_max)
        .map(|k| psum(&lo, &PointedModule::catalog(ctx, FamilyId::x(k + 1), &format!("n*y^{k}"))?))
        .collect::<Result<_>>()?;
    let inside = chain.iter().all(|c| strictly_between(&lo, c, &hi));
    let descending = chain.windows(2).all(|w| w[1].leq(&w[0]) && !w[0].leq(&w[1]));
    out.push(Fact::new(
        "(B, b*x) + (X_{k+1}, n*y^k) descends strictly inside [(B, b*x), (X_1, n)]",
        inside && descending && chain.len() >= 2,
        format!("{} terms; inside: {inside}; strictly descending: {descending}", chain.len()),
    ));
    Ok(out)
}
