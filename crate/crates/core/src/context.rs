//! Shared cache of catalog modules and graded Hom spaces.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::catalog::{make, FamilyId};
use crate::field::Fp;
use crate::hom::{hom_basis, Morphism};
use crate::module::GradedModule;

type HomKey = (FamilyId, FamilyId, i32);

/// Owns one copy of each catalog module so that graded pieces and Hom
/// spaces are computed once per run.
#[derive(Debug)]
pub struct Ctx {
    f: Fp,
    modules: RwLock<HashMap<FamilyId, Arc<GradedModule>>>,
    homs: RwLock<HashMap<HomKey, Arc<Vec<Morphism>>>>,
}

impl Ctx {
    pub fn new(f: Fp) -> Self {
        Ctx {
            f,
            modules: RwLock::new(HashMap::new()),
            homs: RwLock::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn module(&self, id: FamilyId) -> Arc<GradedModule> {
        if let Some(m) = self.modules.read().unwrap().get(&id) {
            return m.clone();
        }
        let m = Arc::new(make(self.f, id));
        self.modules
            .write()
            .unwrap()
            .entry(id)
            .or_insert(m)
            .clone()
    }

    /// Basis of the degree-`s` homomorphisms between catalog modules.
    pub fn hom(&self, src: FamilyId, dst: FamilyId, s: i32) -> Arc<Vec<Morphism>> {
        let key = (src, dst, s);
        if let Some(h) = self.homs.read().unwrap().get(&key) {
            return h.clone();
        }
        let basis = Arc::new(hom_basis(&self.module(src), &self.module(dst), s));
        self.homs
            .write()
            .unwrap()
            .entry(key)
            .or_insert(basis)
            .clone()
    }
}
