//! Validated finite category presentations and degree functions.
//!
//! A category is stored with interned indices: objects sorted by id,
//! morphisms sorted by `(src, tgt, id)`. That order is the canonical
//! traversal order used by every algorithm in the crate, so all outputs are
//! deterministic. The composition table is explicit and total on composable
//! pairs; [`validate`] rejects presentations instead of completing them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Index of an object in canonical (id-sorted) order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Obj(pub usize);

/// Index of a morphism in canonical `(src, tgt, id)` order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mor(pub usize);

/// A finite category: objects, morphisms, identities, and a total
/// composition table over composable pairs. Immutable after construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinCategory {
    object_ids: Vec<String>,
    mor_ids: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    identity: Vec<Mor>,
    is_id: Vec<bool>,
    /// comp[g.0 * n_mor + f.0] = g∘f when tgt(f) = src(g), else None.
    comp: Vec<Option<Mor>>,
    /// hom[x.0 * n_obj + y.0] = morphisms x→y in canonical order.
    hom: Vec<Vec<Mor>>,
}

impl FinCategory {
    pub fn n_objects(&self) -> usize {
        self.object_ids.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.mor_ids.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> {
        (0..self.n_objects()).map(Obj)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Mor> {
        (0..self.n_morphisms()).map(Mor)
    }

    pub fn object_id(&self, x: Obj) -> &str {
        &self.object_ids[x.0]
    }

    pub fn mor_id(&self, f: Mor) -> &str {
        &self.mor_ids[f.0]
    }

    pub fn src(&self, f: Mor) -> Obj {
        self.src[f.0]
    }

    pub fn tgt(&self, f: Mor) -> Obj {
        self.tgt[f.0]
    }

    pub fn identity(&self, x: Obj) -> Mor {
        self.identity[x.0]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.is_id[f.0]
    }

    /// g∘f, defined exactly when `tgt(f) = src(g)`.
    pub fn compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.comp[g.0 * self.n_morphisms() + f.0]
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &[Mor] {
        &self.hom[x.0 * self.n_objects() + y.0]
    }

    pub fn object_by_id(&self, id: &str) -> Result<Obj, Error> {
        self.object_ids
            .binary_search_by(|o| o.as_str().cmp(id))
            .map(Obj)
            .map_err(|_| Error::UnknownObject(id.to_owned()))
    }

    pub fn mor_by_id(&self, id: &str) -> Result<Mor, Error> {
        self.mor_ids
            .iter()
            .position(|m| m == id)
            .map(Mor)
            .ok_or_else(|| Error::UnknownMorphism(id.to_owned()))
    }

    /// Two-sided inverse of `f`, if any.
    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        let (x, y) = (self.src(f), self.tgt(f));
        self.hom(y, x).iter().copied().find(|&g| {
            self.compose(g, f) == Some(self.identity(x))
                && self.compose(f, g) == Some(self.identity(y))
        })
    }

    pub fn is_isomorphism(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }
}

/// A finite category together with a natural-number degree on each object.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreedCategory {
    base: FinCategory,
    degree: Vec<u32>,
}

impl DegreedCategory {
    /// Pair an already-validated category with a degree vector. Used by the
    /// enumerator to cross one composition table with many degree functions.
    pub(crate) fn from_parts(base: FinCategory, degree: Vec<u32>) -> Self {
        assert_eq!(base.n_objects(), degree.len());
        DegreedCategory { base, degree }
    }

    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn degree(&self, x: Obj) -> u32 {
        self.degree[x.0]
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.degree.iter().copied().max()
    }

    /// Degree of the intermediate object of a composable pair, i.e. of
    /// `tgt(first)`.
    pub fn mid_degree(&self, first: Mor) -> u32 {
        self.degree(self.base.tgt(first))
    }
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

/// The single wire format consumed by every CLI command. Unknown fields are
/// rejected.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCategory {
    pub objects: Vec<RawObject>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: BTreeMap<String, String>,
    /// Triples `[g, f, composite]` meaning g∘f = composite.
    pub composition: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawObject {
    pub id: String,
    pub degree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMorphism {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// One violation found by [`validate`]. Validation reports every violation it
/// can locate, not just the first.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateId {
        id: String,
    },
    DanglingReference {
        context: String,
        id: String,
    },
    MissingIdentity {
        object: String,
    },
    IdentityEndpointMismatch {
        object: String,
        morphism: String,
    },
    NonTotalComposition {
        g: String,
        f: String,
    },
    SpuriousComposition {
        g: String,
        f: String,
    },
    DuplicateComposition {
        g: String,
        f: String,
    },
    CompositeEndpointMismatch {
        g: String,
        f: String,
        composite: String,
    },
    UnitLawViolation {
        identity: String,
        f: String,
        got: String,
    },
    AssociativityViolation {
        h: String,
        g: String,
        f: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId { id } => write!(w, "duplicate id `{id}`"),
            Violation::DanglingReference { context, id } => {
                write!(w, "{context} refers to unknown id `{id}`")
            }
            Violation::MissingIdentity { object } => {
                write!(w, "object `{object}` has no identity morphism")
            }
            Violation::IdentityEndpointMismatch { object, morphism } => write!(
                w,
                "identity `{morphism}` of object `{object}` does not have src = tgt = `{object}`"
            ),
            Violation::NonTotalComposition { g, f } => {
                write!(w, "composable pair (`{g}`, `{f}`) has no composite entry")
            }
            Violation::SpuriousComposition { g, f } => {
                write!(
                    w,
                    "composition entry for non-composable pair (`{g}`, `{f}`)"
                )
            }
            Violation::DuplicateComposition { g, f } => {
                write!(w, "pair (`{g}`, `{f}`) has more than one composition entry")
            }
            Violation::CompositeEndpointMismatch { g, f, composite } => write!(
                w,
                "composite `{composite}` of (`{g}`, `{f}`) has wrong source or target"
            ),
            Violation::UnitLawViolation { identity, f, got } => write!(
                w,
                "unit law fails: composing `{f}` with identity `{identity}` gives `{got}`"
            ),
            Violation::AssociativityViolation { h, g, f } => {
                write!(w, "associativity fails on the triple (`{h}`, `{g}`, `{f}`)")
            }
        }
    }
}

/// Validate a raw presentation into a [`DegreedCategory`], or report every
/// violation found. Identifiers are re-sorted into canonical order; the
/// input order carries no meaning.
pub fn validate(raw: &RawCategory) -> Result<DegreedCategory, Error> {
    let mut violations = Vec::new();

    // Structural pass: ids must be unique and references resolvable.
    let mut object_ids: Vec<String> = raw.objects.iter().map(|o| o.id.clone()).collect();
    object_ids.sort();
    for pair in object_ids.windows(2) {
        if pair[0] == pair[1] {
            violations.push(Violation::DuplicateId {
                id: pair[0].clone(),
            });
        }
    }
    let mut mor_id_sorted: Vec<&str> = raw.morphisms.iter().map(|m| m.id.as_str()).collect();
    mor_id_sorted.sort();
    for pair in mor_id_sorted.windows(2) {
        if pair[0] == pair[1] {
            violations.push(Violation::DuplicateId {
                id: pair[0].to_owned(),
            });
        }
    }

    let obj_lookup = |id: &str| object_ids.binary_search_by(|o| o.as_str().cmp(id)).ok();
    for m in &raw.morphisms {
        for (side, oid) in [("src", &m.src), ("tgt", &m.tgt)] {
            if obj_lookup(oid).is_none() {
                violations.push(Violation::DanglingReference {
                    context: format!("morphism `{}` {side}", m.id),
                    id: oid.clone(),
                });
            }
        }
    }
    let mor_exists = |id: &str| raw.morphisms.iter().any(|m| m.id == id);
    for (oid, mid) in &raw.identities {
        if obj_lookup(oid).is_none() {
            violations.push(Violation::DanglingReference {
                context: "identities key".to_owned(),
                id: oid.clone(),
            });
        }
        if !mor_exists(mid) {
            violations.push(Violation::DanglingReference {
                context: format!("identity of `{oid}`"),
                id: mid.clone(),
            });
        }
    }
    for (g, f, c) in &raw.composition {
        for id in [g, f, c] {
            if !mor_exists(id) {
                violations.push(Violation::DanglingReference {
                    context: "composition entry".to_owned(),
                    id: id.clone(),
                });
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidCategory(violations));
    }

    // Canonical interning: objects by id, morphisms by (src, tgt, id).
    let n_obj = object_ids.len();
    let mut mor_order: Vec<&RawMorphism> = raw.morphisms.iter().collect();
    mor_order.sort_by_key(|m| (m.src.clone(), m.tgt.clone(), m.id.clone()));
    let n_mor = mor_order.len();
    let mor_ids: Vec<String> = mor_order.iter().map(|m| m.id.clone()).collect();
    let src: Vec<Obj> = mor_order
        .iter()
        .map(|m| Obj(obj_lookup(&m.src).unwrap()))
        .collect();
    let tgt: Vec<Obj> = mor_order
        .iter()
        .map(|m| Obj(obj_lookup(&m.tgt).unwrap()))
        .collect();
    let mor_lookup = |id: &str| mor_ids.iter().position(|m| m == id).map(Mor);

    // Identities.
    let mut identity = vec![None; n_obj];
    for (oid, mid) in &raw.identities {
        let x = Obj(obj_lookup(oid).unwrap());
        let m = mor_lookup(mid).unwrap();
        if src[m.0] != x || tgt[m.0] != x {
            violations.push(Violation::IdentityEndpointMismatch {
                object: oid.clone(),
                morphism: mid.clone(),
            });
        } else {
            identity[x.0] = Some(m);
        }
    }
    for (i, slot) in identity.iter().enumerate() {
        if slot.is_none() {
            violations.push(Violation::MissingIdentity {
                object: object_ids[i].clone(),
            });
        }
    }

    // Composition table.
    let mut comp: Vec<Option<Mor>> = vec![None; n_mor * n_mor];
    for (gid, fid, cid) in &raw.composition {
        let g = mor_lookup(gid).unwrap();
        let f = mor_lookup(fid).unwrap();
        let c = mor_lookup(cid).unwrap();
        if tgt[f.0] != src[g.0] {
            violations.push(Violation::SpuriousComposition {
                g: gid.clone(),
                f: fid.clone(),
            });
            continue;
        }
        let slot = &mut comp[g.0 * n_mor + f.0];
        if slot.is_some() {
            violations.push(Violation::DuplicateComposition {
                g: gid.clone(),
                f: fid.clone(),
            });
            continue;
        }
        if src[c.0] != src[f.0] || tgt[c.0] != tgt[g.0] {
            violations.push(Violation::CompositeEndpointMismatch {
                g: gid.clone(),
                f: fid.clone(),
                composite: cid.clone(),
            });
            continue;
        }
        *slot = Some(c);
    }
    let mut total = true;
    for g in 0..n_mor {
        for f in 0..n_mor {
            if tgt[f] == src[g] && comp[g * n_mor + f].is_none() {
                violations.push(Violation::NonTotalComposition {
                    g: mor_ids[g].clone(),
                    f: mor_ids[f].clone(),
                });
                total = false;
            }
        }
    }

    // Law checks need a total table and all identities present.
    if total && identity.iter().all(|i| i.is_some()) {
        let at = |g: Mor, f: Mor| comp[g.0 * n_mor + f.0];
        for f in (0..n_mor).map(Mor) {
            let il = identity[tgt[f.0].0].unwrap();
            let ir = identity[src[f.0].0].unwrap();
            if let Some(got) = at(il, f) {
                if got != f {
                    violations.push(Violation::UnitLawViolation {
                        identity: mor_ids[il.0].clone(),
                        f: mor_ids[f.0].clone(),
                        got: mor_ids[got.0].clone(),
                    });
                }
            }
            if let Some(got) = at(f, ir) {
                if got != f {
                    violations.push(Violation::UnitLawViolation {
                        identity: mor_ids[ir.0].clone(),
                        f: mor_ids[f.0].clone(),
                        got: mor_ids[got.0].clone(),
                    });
                }
            }
        }
        for h in (0..n_mor).map(Mor) {
            for g in (0..n_mor).map(Mor) {
                if tgt[g.0] != src[h.0] {
                    continue;
                }
                for f in (0..n_mor).map(Mor) {
                    if tgt[f.0] != src[g.0] {
                        continue;
                    }
                    let left = at(h, at(g, f).unwrap());
                    let right = at(at(h, g).unwrap(), f);
                    if left != right {
                        violations.push(Violation::AssociativityViolation {
                            h: mor_ids[h.0].clone(),
                            g: mor_ids[g.0].clone(),
                            f: mor_ids[f.0].clone(),
                        });
                    }
                }
            }
        }
    }

    if !violations.is_empty() {
        return Err(Error::InvalidCategory(violations));
    }

    let identity: Vec<Mor> = identity.into_iter().map(Option::unwrap).collect();
    let mut is_id = vec![false; n_mor];
    for &m in &identity {
        is_id[m.0] = true;
    }
    let mut hom = vec![Vec::new(); n_obj * n_obj];
    for f in (0..n_mor).map(Mor) {
        hom[src[f.0].0 * n_obj + tgt[f.0].0].push(f);
    }

    let mut degree_by_id: BTreeMap<&str, u32> = BTreeMap::new();
    for o in &raw.objects {
        degree_by_id.insert(&o.id, o.degree);
    }
    let degree: Vec<u32> = object_ids
        .iter()
        .map(|id| degree_by_id[id.as_str()])
        .collect();

    Ok(DegreedCategory {
        base: FinCategory {
            object_ids,
            mor_ids,
            src,
            tgt,
            identity,
            is_id,
            comp,
            hom,
        },
        degree,
    })
}

/// Serialize back into the wire format, in canonical order.
pub fn to_raw(cat: &DegreedCategory) -> RawCategory {
    let base = cat.base();
    let objects = base
        .objects()
        .map(|x| RawObject {
            id: base.object_id(x).to_owned(),
            degree: cat.degree(x),
        })
        .collect();
    let morphisms = base
        .morphisms()
        .map(|f| RawMorphism {
            id: base.mor_id(f).to_owned(),
            src: base.object_id(base.src(f)).to_owned(),
            tgt: base.object_id(base.tgt(f)).to_owned(),
        })
        .collect();
    let identities = base
        .objects()
        .map(|x| {
            (
                base.object_id(x).to_owned(),
                base.mor_id(base.identity(x)).to_owned(),
            )
        })
        .collect();
    let mut composition = Vec::new();
    for g in base.morphisms() {
        for f in base.morphisms() {
            if let Some(c) = base.compose(g, f) {
                composition.push((
                    base.mor_id(g).to_owned(),
                    base.mor_id(f).to_owned(),
                    base.mor_id(c).to_owned(),
                ));
            }
        }
    }
    RawCategory {
        objects,
        morphisms,
        identities,
        composition,
    }
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

/// Programmatic construction of a presentation. Identity morphisms are named
/// `id_<object>` and their compositions are filled in automatically; only
/// composites of non-identity pairs must be declared. The result goes through
/// [`validate`] like any other presentation.
#[derive(Default)]
pub struct CatBuilder {
    objects: Vec<RawObject>,
    morphisms: Vec<RawMorphism>,
    composites: Vec<(String, String, String)>,
}

impl CatBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, id: &str, degree: u32) -> Self {
        self.objects.push(RawObject {
            id: id.to_owned(),
            degree,
        });
        self
    }

    pub fn morphism(mut self, id: &str, src: &str, tgt: &str) -> Self {
        self.morphisms.push(RawMorphism {
            id: id.to_owned(),
            src: src.to_owned(),
            tgt: tgt.to_owned(),
        });
        self
    }

    pub fn composite(mut self, g: &str, f: &str, gf: &str) -> Self {
        self.composites
            .push((g.to_owned(), f.to_owned(), gf.to_owned()));
        self
    }

    pub fn build(self) -> Result<DegreedCategory, Error> {
        let mut morphisms = self.morphisms;
        let mut identities = BTreeMap::new();
        for o in &self.objects {
            let id = format!("id_{}", o.id);
            morphisms.push(RawMorphism {
                id: id.clone(),
                src: o.id.clone(),
                tgt: o.id.clone(),
            });
            identities.insert(o.id.clone(), id);
        }
        let mut composition = self.composites;
        for f in &morphisms {
            let il = identities.get(&f.tgt).cloned().unwrap_or_default();
            let ir = identities.get(&f.src).cloned().unwrap_or_default();
            composition.push((il, f.id.clone(), f.id.clone()));
            if f.src != f.tgt || !identities.values().any(|v| v == &f.id) {
                composition.push((f.id.clone(), ir, f.id.clone()));
            }
        }
        composition.sort();
        composition.dedup();
        validate(&RawCategory {
            objects: self.objects,
            morphisms,
            identities,
            composition,
        })
    }
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

fn assemble(
    objects: Vec<(String, u32)>,
    morphisms: Vec<(String, String, String)>,
    identities: Vec<(String, String)>,
    composition: Vec<(String, String, String)>,
) -> DegreedCategory {
    let raw = RawCategory {
        objects: objects
            .into_iter()
            .map(|(id, degree)| RawObject { id, degree })
            .collect(),
        morphisms: morphisms
            .into_iter()
            .map(|(id, src, tgt)| RawMorphism { id, src, tgt })
            .collect(),
        identities: identities.into_iter().collect(),
        composition,
    };
    validate(&raw).expect("internally constructed category must validate")
}

/// Opposite of a bare category; see [`opposite`] for the degreed version.
pub fn opposite_fin(base: &FinCategory) -> FinCategory {
    let degree = vec![0; base.n_objects()];
    opposite(&DegreedCategory {
        base: base.clone(),
        degree,
    })
    .base
}

/// The opposite category: sources and targets swapped, composition reversed,
/// identical identifiers and degrees. An involution on the nose.
pub fn opposite(cat: &DegreedCategory) -> DegreedCategory {
    let base = cat.base();
    let objects = base
        .objects()
        .map(|x| (base.object_id(x).to_owned(), cat.degree(x)))
        .collect();
    let morphisms = base
        .morphisms()
        .map(|f| {
            (
                base.mor_id(f).to_owned(),
                base.object_id(base.tgt(f)).to_owned(),
                base.object_id(base.src(f)).to_owned(),
            )
        })
        .collect();
    let identities = base
        .objects()
        .map(|x| {
            (
                base.object_id(x).to_owned(),
                base.mor_id(base.identity(x)).to_owned(),
            )
        })
        .collect();
    let mut composition = Vec::new();
    for g in base.morphisms() {
        for f in base.morphisms() {
            if let Some(c) = base.compose(g, f) {
                composition.push((
                    base.mor_id(f).to_owned(),
                    base.mor_id(g).to_owned(),
                    base.mor_id(c).to_owned(),
                ));
            }
        }
    }
    assemble(objects, morphisms, identities, composition)
}

/// Full subcategory on the objects of degree strictly below `max_degree`.
pub fn full_subcategory(cat: &DegreedCategory, max_degree: u32) -> DegreedCategory {
    let base = cat.base();
    let keep_obj: Vec<bool> = base.objects().map(|x| cat.degree(x) < max_degree).collect();
    let keep_mor = |f: Mor| keep_obj[base.src(f).0] && keep_obj[base.tgt(f).0];
    let objects = base
        .objects()
        .filter(|&x| keep_obj[x.0])
        .map(|x| (base.object_id(x).to_owned(), cat.degree(x)))
        .collect();
    let morphisms = base
        .morphisms()
        .filter(|&f| keep_mor(f))
        .map(|f| {
            (
                base.mor_id(f).to_owned(),
                base.object_id(base.src(f)).to_owned(),
                base.object_id(base.tgt(f)).to_owned(),
            )
        })
        .collect();
    let identities = base
        .objects()
        .filter(|&x| keep_obj[x.0])
        .map(|x| {
            (
                base.object_id(x).to_owned(),
                base.mor_id(base.identity(x)).to_owned(),
            )
        })
        .collect();
    let mut composition = Vec::new();
    for g in base.morphisms().filter(|&g| keep_mor(g)) {
        for f in base.morphisms().filter(|&f| keep_mor(f)) {
            if let Some(c) = base.compose(g, f) {
                composition.push((
                    base.mor_id(g).to_owned(),
                    base.mor_id(f).to_owned(),
                    base.mor_id(c).to_owned(),
                ));
            }
        }
    }
    assemble(objects, morphisms, identities, composition)
}

/// Non-full subcategory on a subset of objects and morphisms. The caller must
/// pass a set closed under identities and composition; this re-validates.
pub fn subcategory_on(
    cat: &DegreedCategory,
    objs: &[Obj],
    mors: &[Mor],
) -> Result<DegreedCategory, Error> {
    let base = cat.base();
    let objects = objs
        .iter()
        .map(|&x| (base.object_id(x).to_owned(), cat.degree(x)))
        .collect();
    let morphisms = mors
        .iter()
        .map(|&f| {
            (
                base.mor_id(f).to_owned(),
                base.object_id(base.src(f)).to_owned(),
                base.object_id(base.tgt(f)).to_owned(),
            )
        })
        .collect();
    let identities = objs
        .iter()
        .map(|&x| {
            (
                base.object_id(x).to_owned(),
                base.mor_id(base.identity(x)).to_owned(),
            )
        })
        .collect::<Vec<_>>();
    let mut composition = Vec::new();
    for &g in mors {
        for &f in mors {
            if let Some(c) = base.compose(g, f) {
                if mors.contains(&c) {
                    composition.push((
                        base.mor_id(g).to_owned(),
                        base.mor_id(f).to_owned(),
                        base.mor_id(c).to_owned(),
                    ));
                }
            }
        }
    }
    let raw = RawCategory {
        objects: {
            let objects: Vec<(String, u32)> = objects;
            objects
                .into_iter()
                .map(|(id, degree)| RawObject { id, degree })
                .collect()
        },
        morphisms: {
            let morphisms: Vec<(String, String, String)> = morphisms;
            morphisms
                .into_iter()
                .map(|(id, src, tgt)| RawMorphism { id, src, tgt })
                .collect()
        },
        identities: identities.into_iter().collect(),
        composition,
    };
    validate(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terminal() -> DegreedCategory {
        CatBuilder::new().object("pt", 0).build().unwrap()
    }

    fn iso_pair() -> DegreedCategory {
        CatBuilder::new()
            .object("o0", 0)
            .object("o1", 1)
            .morphism("f", "o0", "o1")
            .morphism("g", "o1", "o0")
            .composite("g", "f", "id_o0")
            .composite("f", "g", "id_o1")
            .composite("f", "g", "id_o1") // duplicates collapse in the builder
            .build()
            .unwrap()
    }

    #[test]
    fn terminal_is_valid() {
        let cat = terminal();
        assert_eq!(cat.base().n_objects(), 1);
        assert_eq!(cat.base().n_morphisms(), 1);
    }

    #[test]
    fn iso_pair_is_valid_and_has_inverses() {
        let cat = iso_pair();
        let f = cat.base().mor_by_id("f").unwrap();
        assert!(cat.base().is_isomorphism(f));
    }

    #[test]
    fn omitted_composite_is_reported() {
        let mut raw = to_raw(&iso_pair());
        raw.composition.retain(|(g, f, _)| !(g == "g" && f == "f"));
        match validate(&raw) {
            Err(Error::InvalidCategory(vs)) => {
                assert!(vs.iter().any(|v| matches!(
                    v,
                    Violation::NonTotalComposition { g, f } if g == "g" && f == "f"
                )));
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn broken_unit_law_is_reported() {
        // One object, two endos: make id∘e = id instead of e.
        let raw = RawCategory {
            objects: vec![RawObject {
                id: "x".into(),
                degree: 0,
            }],
            morphisms: vec![
                RawMorphism {
                    id: "i".into(),
                    src: "x".into(),
                    tgt: "x".into(),
                },
                RawMorphism {
                    id: "e".into(),
                    src: "x".into(),
                    tgt: "x".into(),
                },
            ],
            identities: [("x".to_string(), "i".to_string())].into_iter().collect(),
            composition: vec![
                ("i".into(), "i".into(), "i".into()),
                ("i".into(), "e".into(), "i".into()),
                ("e".into(), "i".into(), "e".into()),
                ("e".into(), "e".into(), "e".into()),
            ],
        };
        match validate(&raw) {
            Err(Error::InvalidCategory(vs)) => {
                assert!(vs
                    .iter()
                    .any(|v| matches!(v, Violation::UnitLawViolation { .. })));
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn opposite_is_involution() {
        let cat = iso_pair();
        assert_eq!(opposite(&opposite(&cat)), cat);
        let t = terminal();
        assert_eq!(opposite(&t), t);
    }

    #[test]
    fn full_subcategory_composes() {
        let cat = iso_pair();
        let sub1 = full_subcategory(&cat, 1);
        assert_eq!(sub1.base().n_objects(), 1);
        assert_eq!(full_subcategory(&cat, 0).base().n_objects(), 0);
        // restriction tower: (<2 then <1) = (<1)
        let sub21 = full_subcategory(&full_subcategory(&cat, 2), 1);
        assert_eq!(sub21, sub1);
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"objects":[],"morphisms":[],"identities":{},"composition":[],"extra":1}"#;
        assert!(serde_json::from_str::<RawCategory>(text).is_err());
    }
}
