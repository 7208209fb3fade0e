//! Properties of morphisms and pointed modules over the catalog.

use std::sync::Arc;

use dinfty::catalog::{Family, FamilyId};
use dinfty::context::Ctx;
use dinfty::hom::{hom_window, pointed_morphism, Morphism};
use dinfty::module::GradedModule;
use dinfty::pattern::{psum, PointedModule};
use dinfty::Fp;
use proptest::prelude::*;

fn ctx() -> Ctx {
    Ctx::new(Fp::new(5).unwrap())
}

fn arb_id() -> impl Strategy<Value = FamilyId> {
    prop_oneof![
        Just(FamilyId::s()),
        Just(FamilyId::plain(Family::A)),
        Just(FamilyId::plain(Family::B)),
        Just(FamilyId::plain(Family::C)),
        Just(FamilyId::plain(Family::D)),
        (1u32..4).prop_map(FamilyId::m),
        (1u32..4).prop_map(FamilyId::y),
        (1u32..4).prop_map(FamilyId::x),
        (1u32..4).prop_map(FamilyId::n),
    ]
}

/// A random combination of Hom basis maps.
fn combo(basis: &[Morphism], src: &Arc<GradedModule>, dst: &Arc<GradedModule>, coeffs: &[u32]) -> Morphism {
    basis
        .iter()
        .zip(coeffs.iter().cycle())
        .fold(Morphism::zero(src.clone(), dst.clone()), |acc, (phi, &c)| acc.add(&phi.scale(c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hom_basis_maps_are_module_maps(a in arb_id(), b in arb_id()) {
        let c = ctx();
        let (m, n) = (c.module(a), c.module(b));
        let w = hom_window(&m, &n, 6);
        for phi in w.basis() {
            prop_assert!(phi.is_well_defined());
            prop_assert!(!phi.is_zero());
        }
    }

    #[test]
    fn composition_is_associative_and_bilinear(
        a in arb_id(), b in arb_id(), d in arb_id(),
        coeffs in proptest::collection::vec(0u32..5, 1..6),
    ) {
        let c = ctx();
        let (ma, mb, md) = (c.module(a), c.module(b), c.module(d));
        let ab: Vec<Morphism> = hom_window(&ma, &mb, 4).basis().cloned().collect();
        let bd: Vec<Morphism> = hom_window(&mb, &md, 4).basis().cloned().collect();
        prop_assume!(!ab.is_empty() && !bd.is_empty());
        let f = combo(&ab, &ma, &mb, &coeffs);
        let g = combo(&bd, &mb, &md, &coeffs);
        let g2 = combo(&bd, &mb, &md, &coeffs.iter().rev().copied().collect::<Vec<_>>());
        let id_b = Morphism::identity(mb.clone());
        prop_assert!(f.then(&id_b).unwrap().same_as(&f));
        let lhs = f.then(&g.add(&g2)).unwrap();
        let rhs = f.then(&g).unwrap().add(&f.then(&g2).unwrap());
        prop_assert!(lhs.same_as(&rhs));
        prop_assert!(f.then(&g).unwrap().is_well_defined());
    }

    #[test]
    fn pointed_order_is_a_preorder(i in 0u32..4, j in 0u32..4, k in 0u32..4) {
        let c = ctx();
        let pts = [
            PointedModule::catalog(&c, FamilyId::s(), &format!("x^{}", i + 1)).unwrap(),
            PointedModule::catalog(&c, FamilyId::y(1), &format!("n*x^{j}")).unwrap(),
            PointedModule::catalog(&c, FamilyId::x(1), &format!("m*x^{}", k + 1)).unwrap(),
        ];
        for p in &pts {
            prop_assert!(p.leq(p));
        }
        for p in &pts {
            for q in &pts {
                for r in &pts {
                    if p.leq(q) && q.leq(r) {
                        prop_assert!(p.leq(r));
                    }
                }
            }
        }
    }

    #[test]
    fn sums_are_upper_bounds(i in 1u32..4, j in 1u32..4) {
        let c = ctx();
        let a = PointedModule::catalog(&c, FamilyId::plain(Family::A), &format!("a*x^{i}")).unwrap();
        let s = PointedModule::catalog(&c, FamilyId::s(), &format!("x^{j}")).unwrap();
        let sum = psum(&a, &s).unwrap();
        prop_assert!(a.leq(&sum));
        prop_assert!(s.leq(&sum));
    }
}

#[test]
fn multiplication_by_x_is_a_pointed_map() {
    let c = ctx();
    let s = c.module(FamilyId::s());
    let x = s.parse_elem("x").unwrap();
    let x2 = s.parse_elem("x^2").unwrap();
    let phi = pointed_morphism(&s, &x, &s, &x2).expect("1 ↦ x");
    assert_eq!(phi.apply(&s.parse_elem("1").unwrap()), x);
    assert!(pointed_morphism(&s, &x2, &s, &x).is_none());
}
