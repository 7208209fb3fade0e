//! The indecomposable finitely generated CM modules and the stage models of
//! the infinitely generated points.
//!
//! | family | generators (degree) | relations |
//! |--------|---------------------|-----------|
//! | `S`    | `1` (0)             | none |
//! | `A`    | `a` (2)             | `a·y` |
//! | `B`    | `b` (1)             | `b·x²` |
//! | `C`    | `c` (2)             | `c·x` |
//! | `D`    | `d` (1)             | `d·xy` |
//! | `M_k`  | `m` (k+1), `n` (2)  | `mx − ny^k`, `nx` |
//! | `Y_k`  | `m` (k), `n` (1)    | `mx − ny^k`, `nxy` |
//! | `X_k`  | `m` (k), `n` (2)    | `mxy − ny^k`, `nx` |
//! | `N_k`  | `m` (k), `n` (1)    | `mxy − ny^{k+1}`, `nxy` |
//!
//! Degrees are chosen so that each module is isomorphic, as a graded
//! module, to its realization as an ideal of `S` or a submodule of `S²`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::module::{Elem, Gen, GradedModule};
use crate::ring::Mono;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    S,
    A,
    B,
    C,
    D,
    M,
    Y,
    X,
    N,
}

impl Family {
    pub fn is_parameterized(self) -> bool {
        matches!(self, Family::M | Family::Y | Family::X | Family::N)
    }

    pub fn letter(self) -> &'static str {
        match self {
            Family::S => "S",
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::M => "M",
            Family::Y => "Y",
            Family::X => "X",
            Family::N => "N",
        }
    }
}

/// A catalog member: a family letter and, for `M`, `Y`, `X`, `N`, an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyId {
    pub family: Family,
    pub k: u32,
}

impl FamilyId {
    pub fn new(family: Family, k: u32) -> Result<Self> {
        if family.is_parameterized() && k == 0 {
            return Err(Error::InvalidParameter(format!(
                "{} needs an index k ≥ 1",
                family.letter()
            )));
        }
        let k = if family.is_parameterized() { k } else { 0 };
        Ok(FamilyId { family, k })
    }

    pub fn plain(family: Family) -> Self {
        FamilyId { family, k: 0 }
    }

    pub fn s() -> Self {
        FamilyId::plain(Family::S)
    }

    pub fn m(k: u32) -> Self {
        FamilyId::new(Family::M, k).expect("k ≥ 1")
    }

    pub fn y(k: u32) -> Self {
        FamilyId::new(Family::Y, k).expect("k ≥ 1")
    }

    pub fn x(k: u32) -> Self {
        FamilyId::new(Family::X, k).expect("k ≥ 1")
    }

    pub fn n(k: u32) -> Self {
        FamilyId::new(Family::N, k).expect("k ≥ 1")
    }

    /// All catalog members with index at most `k_max`, in a fixed order.
    pub fn window(k_max: u32) -> Vec<FamilyId> {
        let mut out: Vec<FamilyId> = [Family::S, Family::A, Family::B, Family::C, Family::D]
            .into_iter()
            .map(FamilyId::plain)
            .collect();
        for fam in [Family::M, Family::Y, Family::X, Family::N] {
            for k in 1..=k_max {
                out.push(FamilyId { family: fam, k });
            }
        }
        out
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.is_parameterized() {
            write!(f, "{}_{}", self.family.letter(), self.k)
        } else {
            f.write_str(self.family.letter())
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::Parse("empty module name".into()))?;
        let family = match letter {
            'S' => Family::S,
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'M' => Family::M,
            'Y' => Family::Y,
            'X' => Family::X,
            'N' => Family::N,
            _ => return Err(Error::UnknownModule(s.to_string())),
        };
        let rest: String = chars.collect();
        let rest = rest.trim_start_matches('_');
        if family.is_parameterized() {
            let k: u32 = rest
                .parse()
                .map_err(|_| Error::UnknownModule(s.to_string()))?;
            FamilyId::new(family, k)
        } else if rest.is_empty() {
            Ok(FamilyId::plain(family))
        } else {
            Err(Error::UnknownModule(s.to_string()))
        }
    }
}

/// Builds the presentation of a catalog module.
pub fn make(f: Fp, id: FamilyId) -> GradedModule {
    let name = id.to_string();
    let k = id.k as i32;
    let build = |gens: &[(&str, i32)], rels: &[String]| {
        let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
        GradedModule::from_strings(f, &name, gens, &rels).expect("catalog presentations are homogeneous")
    };
    match id.family {
        Family::S => build(&[("1", 0)], &[]),
        Family::A => build(&[("a", 2)], &["a*y".into()]),
        Family::B => build(&[("b", 1)], &["b*x^2".into()]),
        Family::C => build(&[("c", 2)], &["c*x".into()]),
        Family::D => build(&[("d", 1)], &["d*x*y".into()]),
        Family::M => build(
            &[("m", k + 1), ("n", 2)],
            &[format!("m*x - n*y^{k}"), "n*x".into()],
        ),
        Family::Y => build(
            &[("m", k), ("n", 1)],
            &[format!("m*x - n*y^{k}"), "n*x*y".into()],
        ),
        Family::X => build(
            &[("m", k), ("n", 2)],
            &[format!("m*x*y - n*y^{k}"), "n*x".into()],
        ),
        Family::N => build(
            &[("m", k), ("n", 1)],
            &[format!("m*x*y - n*y^{}", k + 1), "n*x*y".into()],
        ),
    }
}

/// Generator images of the standard realization, as expressions in the
/// free module `S^r` whose generators `e1, e2` have the listed degrees.
pub fn realization_data(id: FamilyId) -> (Vec<(&'static str, i32)>, Vec<String>) {
    let k = id.k;
    match id.family {
        Family::S => (vec![("1", 0)], vec!["1".into()]),
        Family::A => (vec![("1", 0)], vec!["x^2".into()]),
        Family::B => (vec![("1", 0)], vec!["y".into()]),
        Family::C => (vec![("1", 0)], vec!["x*y".into()]),
        Family::D => (vec![("1", 0)], vec!["x".into()]),
        Family::M => (vec![("1", 0)], vec![format!("y^{}", k + 1), "x*y".into()]),
        Family::Y => (vec![("1", 0)], vec![format!("y^{k}"), "x".into()]),
        Family::X => (
            vec![("e1", 0), ("e2", k as i32 - 1)],
            vec![format!("y^{k}*e1 + x*e2"), "x*y*e1".into()],
        ),
        Family::N => (
            vec![("e1", 0), ("e2", k as i32 - 1)],
            vec![format!("y^{k}*e1 + x*e2"), "x*e1".into()],
        ),
    }
}

/// A verified embedding of a catalog module into a free module.
#[derive(Debug, Clone)]
pub struct Realization {
    pub id: FamilyId,
    pub ambient: GradedModule,
    pub images: Vec<Elem>,
    /// The submodule spanned by the images, presented by its own syzygies.
    pub image: GradedModule,
    /// Highest degree in which injectivity was checked.
    pub checked_to: i32,
}

impl Realization {
    pub fn image_strings(&self) -> Vec<String> {
        self.images.iter().map(|e| self.ambient.format_elem(e)).collect()
    }
}

/// Catalog file entry: the presentation plus the basis of each degree up
/// to `depth` above the lowest generator.
pub fn entry_json(f: Fp, id: FamilyId, depth: u32) -> serde_json::Value {
    let m = make(f, id);
    let mut v = m.to_json();
    let lo = m.min_gen_degree().unwrap_or(0);
    let threads: Vec<serde_json::Value> = (lo..=lo + depth as i32)
        .map(|d| serde_json::json!({ "degree": d, "basis": m.node_labels(d) }))
        .collect();
    v["family"] = serde_json::Value::String(id.family.letter().into());
    v["k"] = serde_json::json!(id.k);
    v["threads"] = serde_json::Value::Array(threads);
    v
}

/// Realizes a catalog module and certifies the isomorphism onto its image:
/// the generator correspondence is well defined in both directions, and
/// the map is injective on every piece up to `depth` above the generators.
pub fn realize(f: Fp, id: FamilyId, depth: u32) -> Result<Realization> {
    let module = make(f, id);
    let (amb_gens, imgs) = realization_data(id);
    let ambient = GradedModule::free(
        f,
        if amb_gens.len() == 1 { "S" } else { "S²" },
        amb_gens
            .iter()
            .map(|(l, d)| Gen {
                label: l.to_string(),
                degree: *d,
            })
            .collect(),
    );
    let images = imgs
        .iter()
        .map(|s| ambient.parse_elem(s))
        .collect::<Result<Vec<_>>>()?;
    embed_certificate(&module, &ambient, &images, depth).map(|(image, checked_to)| Realization {
        id,
        ambient,
        images,
        image,
        checked_to,
    })
}

/// Certifies that `gens ↦ images` embeds `module` in `ambient`.
pub fn embed_certificate(
    module: &GradedModule,
    ambient: &GradedModule,
    images: &[Elem],
    depth: u32,
) -> Result<(GradedModule, i32)> {
    let f = module.field();
    let bound = module.presentation_degree() + depth as i32;
    for (i, r) in module.relations().iter().enumerate() {
        let mut acc = Elem::zero();
        for (g, c) in r.0.iter().enumerate() {
            acc = acc.add(f, &ambient.mul_s(&images[g], c));
        }
        if !acc.is_zero() {
            return Err(Error::Verification(format!(
                "relation {} of {} does not vanish on the realization",
                module.relation_strings()[i],
                module.name()
            )));
        }
    }
    let labelled: Vec<(String, Elem)> = module
        .gens()
        .iter()
        .zip(images)
        .map(|(g, e)| (g.label.clone(), e.clone()))
        .collect();
    let image = GradedModule::image_presentation(ambient, &format!("im {}", module.name()), &labelled, bound)?;
    for r in image.relations() {
        if !module.eval_free(r).is_zero() {
            return Err(Error::Verification(format!(
                "syzygy {} of the image fails in {}",
                image.format_free(r),
                module.name()
            )));
        }
    }
    let lo = module.min_gen_degree().unwrap_or(0);
    for d in lo..=bound {
        if image.dim(d) != module.dim(d) {
            return Err(Error::Verification(format!(
                "dimension mismatch in degree {d} for {}",
                module.name()
            )));
        }
    }
    Ok((image, bound))
}

/// Points of the CM part of the Ziegler spectrum that the engine models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointId {
    Catalog(FamilyId),
    /// The direct limit along the `X`/`N` ray.
    NTilde,
    /// The direct limit along the `M` ray.
    RTilde,
    QR,
    Gx,
    Gy,
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointId::Catalog(id) => write!(f, "{id}"),
            PointId::NTilde => f.write_str("Ñ"),
            PointId::RTilde => f.write_str("R̃"),
            PointId::QR => f.write_str("Q_R"),
            PointId::Gx => f.write_str("G_x"),
            PointId::Gy => f.write_str("G_y"),
        }
    }
}

impl PointId {
    pub fn is_limit(self) -> bool {
        !matches!(self, PointId::Catalog(_))
    }

    pub fn limits() -> [PointId; 5] {
        [
            PointId::RTilde,
            PointId::NTilde,
            PointId::QR,
            PointId::Gy,
            PointId::Gx,
        ]
    }

    /// Machine-friendly key used in JSON and tables.
    pub fn key(self) -> String {
        match self {
            PointId::Catalog(id) => id.to_string(),
            PointId::NTilde => "Ntilde".into(),
            PointId::RTilde => "Rtilde".into(),
            PointId::QR => "Q_R".into(),
            PointId::Gx => "G_x".into(),
            PointId::Gy => "G_y".into(),
        }
    }
}

/// A finite stage of a point: a catalog module, the submodule standing for
/// the point's elements, and a designated element of that submodule.
#[derive(Debug, Clone)]
pub struct Stage {
    pub point: PointId,
    pub stage: u32,
    pub module: GradedModule,
    pub catalog: FamilyId,
    /// Generators of the submodule approximating the point. For catalog
    /// points these are the module generators.
    pub deep: Vec<Elem>,
    pub designated: Option<Elem>,
}

/// The stage-`K` model of a point.
///
/// `Ñ` lives in `X_K` and `R̃` in `M_K`; their elements are the image of the
/// first stage along the ray, generated by `m` and `n·y^(K-1)`. The
/// designated elements are `m·x²` (the element `x²` of `Ñ`) and `n·y^(K-1)`
/// (the element `xy` of `R̃`). `G_x`, `G_y` and `Q_R` live in `A`, `C` and
/// `B`, with elements divisible by `x^K`, `y^K` and `y^K`; the designated
/// elements are `a·x^K`, `c·y^K` and `b·x·y^K`.
pub fn limit_stage(f: Fp, point: PointId, k: u32) -> Result<Stage> {
    if k == 0 {
        return Err(Error::InvalidParameter("stage index must be ≥ 1".into()));
    }
    let (catalog, deep, designated): (FamilyId, Vec<(&str, Mono)>, Option<(&str, Mono)>) = match point {
        PointId::Catalog(id) => (id, Vec::new(), None),
        PointId::NTilde => (
            FamilyId::x(k),
            vec![("m", Mono::new(0, 0)), ("n", Mono::new(0, k - 1))],
            Some(("m", Mono::new(2, 0))),
        ),
        PointId::RTilde => (
            FamilyId::m(k),
            vec![("m", Mono::new(0, 0)), ("n", Mono::new(0, k - 1))],
            Some(("n", Mono::new(0, k - 1))),
        ),
        PointId::Gx => (FamilyId::plain(Family::A), vec![("a", Mono::new(k, 0))], Some(("a", Mono::new(k, 0)))),
        PointId::Gy => (FamilyId::plain(Family::C), vec![("c", Mono::new(0, k))], Some(("c", Mono::new(0, k)))),
        PointId::QR => (FamilyId::plain(Family::B), vec![("b", Mono::new(0, k))], Some(("b", Mono::new(1, k)))),
    };
    let module = make(f, catalog);
    let word = |(g, m): (&str, Mono)| {
        let gen = module.gens().iter().position(|h| h.label == g).expect("known generator");
        module.word_elem(crate::module::Word { gen, mono: m })
    };
    let deep = if deep.is_empty() {
        (0..module.num_gens()).map(|i| module.gen_elem(i)).collect()
    } else {
        deep.into_iter().map(word).collect()
    };
    let designated = designated.map(word);
    Ok(Stage {
        point,
        stage: k,
        module,
        catalog,
        deep,
        designated,
    })
}

/// True iff `x²` annihilates the module (the modules over `S/(x²)`).
pub fn killed_by_x2(m: &GradedModule) -> bool {
    (0..m.num_gens()).all(|i| m.mul_mono(&m.gen_elem(i), Mono::new(2, 0)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for id in FamilyId::window(3) {
            assert_eq!(id.to_string().parse::<FamilyId>().unwrap(), id);
        }
        assert!("M_0".parse::<FamilyId>().is_err());
        assert!("Q".parse::<FamilyId>().is_err());
        assert_eq!("X1".parse::<FamilyId>().unwrap(), FamilyId::x(1));
    }

    #[test]
    fn presentations() {
        let f = f5();
        assert_eq!(make(f, FamilyId::m(2)).relation_strings(), ["m*x - n*y^2", "n*x"]);
        assert_eq!(make(f, FamilyId::x(1)).relation_strings(), ["m*x*y - n*y", "n*x"]);
    }

    #[test]
    fn element_evaluation() {
        let f = f5();
        let m = make(f, FamilyId::m(3));
        assert_eq!(m.format_elem(&m.parse_elem("m*x").unwrap()), "n*y^3");
        let n = make(f, FamilyId::n(2));
        assert!(n.parse_elem("n*x*y").unwrap().is_zero());
        let y = make(f, FamilyId::y(2));
        assert!(!y.parse_elem("n*x").unwrap().is_zero());
    }

    #[test]
    fn all_realizations_certify() {
        let f = f5();
        for id in FamilyId::window(4) {
            let r = realize(f, id, 6).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert_eq!(r.images.len(), make(f, id).num_gens());
        }
    }

    #[test]
    fn y1_is_the_maximal_ideal() {
        let r = realize(f5(), FamilyId::y(1), 6).unwrap();
        assert_eq!(r.image_strings(), ["y", "x"]);
    }

    #[test]
    fn annihilators() {
        let f = f5();
        for id in [FamilyId::m(1), FamilyId::m(4), FamilyId::plain(Family::B), FamilyId::plain(Family::C)] {
            assert!(killed_by_x2(&make(f, id)), "{id}");
        }
        for id in [FamilyId::s(), FamilyId::y(2), FamilyId::x(1), FamilyId::n(1), FamilyId::plain(Family::D)] {
            assert!(!killed_by_x2(&make(f, id)), "{id}");
        }
    }
}
