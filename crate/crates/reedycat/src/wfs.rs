//! The (injection, surjection) weak factorization structure on finite sets
//! and the Reedy/c-Reedy structures it induces on finite-set diagram
//! categories: map classification by relative latching/matching maps,
//! inductive factorization, the projective left-class check, and an
//! exhaustive lifting solver.

use crate::classify::{
    check_bistratified, check_discrete_strata, retract_decomposition, stratum_category,
    DecompositionResult,
};
use crate::diagrams::{
    latching_object, matching_object, DiagramMap, Latching, SetDiagram, DEFAULT_MAX_SEARCH,
};
use crate::dset::DisjointSets;
use crate::factorization::basic_classes;
use crate::fincat::{DegreedCategory, FinCategory, Mor, Obj};
use crate::Error;

/// Membership of a map in the two classes of a weak factorization structure.
/// A map may be in both (an isomorphism, for instance) or in neither.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MapClass {
    pub is_l: bool,
    pub is_r: bool,
}

/// A function between finite sets with named elements.
#[derive(Clone, PartialEq, Debug)]
pub struct FinFn {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub map: Vec<usize>,
}

impl FinFn {
    pub fn new(source: Vec<String>, target: Vec<String>, map: Vec<usize>) -> FinFn {
        assert_eq!(source.len(), map.len());
        assert!(map.iter().all(|&v| v < target.len() || source.is_empty()));
        FinFn {
            source,
            target,
            map,
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &v in &self.map {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &v in &self.map {
            seen[v] = true;
        }
        seen.iter().all(|&b| b)
    }
}

/// In the base structure on finite sets, the left class is the injections
/// and the right class the surjections.
pub fn base_classify(f: &FinFn) -> MapClass {
    MapClass {
        is_l: f.is_injective(),
        is_r: f.is_surjective(),
    }
}

/// Mapping-cylinder factorization X → X ⊔ Y → Y: the coproduct inclusion
/// (injective) followed by `f` on the X part and the identity on the Y part
/// (surjective). Elements are provenance-tagged.
pub fn base_factorize(f: &FinFn) -> (FinFn, FinFn) {
    let mut cylinder: Vec<String> = Vec::new();
    for s in &f.source {
        cylinder.push(format!("x.{s}"));
    }
    for t in &f.target {
        cylinder.push(format!("y.{t}"));
    }
    let inj = FinFn::new(
        f.source.clone(),
        cylinder.clone(),
        (0..f.source.len()).collect(),
    );
    let mut surj_map: Vec<usize> = f.map.clone();
    surj_map.extend(0..f.target.len());
    let surj = FinFn::new(cylinder, f.target.clone(), surj_map);
    (inj, surj)
}

// ---------------------------------------------------------------------------
// Relative matching and latching maps
// ---------------------------------------------------------------------------

/// The relative maps of a diagram map, returned for inspection.
#[derive(Clone, Debug)]
pub struct RelativeMaps {
    /// Per object: the map A_x → M_x A ×_{M_x B} B_x.
    pub matching: Vec<FinFn>,
    /// Per object: the map L_x B ⊔_{L_x A} A_x → B_x.
    pub latching: Vec<FinFn>,
}

/// The relative matching map of `m` at `x`.
fn relative_matching(
    cat: &DegreedCategory,
    m: &DiagramMap,
    x: Obj,
    cap: u64,
) -> Result<FinFn, Error> {
    let base = cat.base();
    let ma = matching_object(cat, x, m.source(), cap)?;
    let mb = matching_object(cat, x, m.target(), cap)?;
    let push_family = |fam: &[usize]| -> usize {
        let image: Vec<usize> = ma
            .index
            .iter()
            .zip(fam)
            .map(|(&f, &a)| m.at(base.tgt(f), a))
            .collect();
        mb.families
            .iter()
            .position(|g| *g == image)
            .expect("image family is compatible")
    };
    let induced_b = |b: usize| -> usize {
        let fam: Vec<usize> = mb.index.iter().map(|&f| m.target().apply(f, b)).collect();
        mb.families
            .iter()
            .position(|g| *g == fam)
            .expect("restriction family is compatible")
    };
    // Pullback M_x A ×_{M_x B} B_x.
    let mut pb_tokens = Vec::new();
    let mut pb_items = Vec::new();
    for (i, tok) in ma.tokens.iter().enumerate() {
        for b in 0..m.target().set(x).len() {
            if push_family(&ma.families[i]) == induced_b(b) {
                pb_items.push((i, b));
                pb_tokens.push(format!("({tok},{})", m.target().set(x)[b]));
            }
        }
    }
    let map: Vec<usize> = (0..m.source().set(x).len())
        .map(|a| {
            let fam: Vec<usize> = ma.index.iter().map(|&f| m.source().apply(f, a)).collect();
            let i = ma
                .families
                .iter()
                .position(|g| *g == fam)
                .expect("value family is compatible");
            let b = m.at(x, a);
            pb_items
                .iter()
                .position(|&it| it == (i, b))
                .expect("image lies in the pullback")
        })
        .collect();
    Ok(FinFn::new(m.source().set(x).to_vec(), pb_tokens, map))
}

/// Data of a latching pushout L_x B ⊔_{L_x A} A_x.
struct LatchPushout {
    tokens: Vec<String>,
    /// class of each L_x B class.
    from_lb: Vec<usize>,
    /// class of each A_x element.
    from_a: Vec<usize>,
    n_classes: usize,
}

fn latch_pushout(
    cat: &DegreedCategory,
    m: &DiagramMap,
    x: Obj,
    la: &Latching,
    lb: &Latching,
) -> LatchPushout {
    let base = cat.base();
    let n_a = m.source().set(x).len();
    let mut sets = DisjointSets::new(lb.n_classes + n_a);
    // Identify the two images of every L_x A class.
    for cl in 0..la.n_classes {
        let (i, a) = la.items[la.reps[cl]];
        let f = la.index[i];
        let z = base.src(f);
        // L_x A → L_x B by the components of m; L_x A → A_x by evaluation.
        let in_lb = lb.class_of_item(i, m.at(z, a));
        let in_a = m.source().apply(f, a);
        sets.union(in_lb, lb.n_classes + in_a);
        // All items of the class must land consistently; union them too.
        for (idx, &(j, b)) in la.items.iter().enumerate() {
            if la.class_of[idx] != cl {
                continue;
            }
            let g = la.index[j];
            sets.union(in_lb, lb.class_of_item(j, m.at(base.src(g), b)));
            sets.union(lb.n_classes + in_a, lb.n_classes + m.source().apply(g, b));
        }
    }
    let (class_of, n_classes) = sets.class_numbers();
    let from_lb = class_of[..lb.n_classes].to_vec();
    let from_a = class_of[lb.n_classes..].to_vec();
    let mut tokens = vec![String::new(); n_classes];
    for cl in (0..n_classes).rev() {
        // Least representative: prefer the first item in (L_x B, A_x) order.
        let rep = class_of.iter().position(|&c| c == cl).unwrap();
        tokens[cl] = if rep < lb.n_classes {
            format!("b.{}", lb.tokens[rep])
        } else {
            format!("a.{}", m.source().set(x)[rep - lb.n_classes])
        };
    }
    LatchPushout {
        tokens,
        from_lb,
        from_a,
        n_classes,
    }
}

/// The relative latching map of `m` at `x`.
fn relative_latching(cat: &DegreedCategory, m: &DiagramMap, x: Obj) -> Result<FinFn, Error> {
    let la = latching_object(cat, x, m.source())?;
    let lb = latching_object(cat, x, m.target())?;
    let po = latch_pushout(cat, m, x, &la, &lb);
    let mut map = vec![usize::MAX; po.n_classes];
    for cl in 0..lb.n_classes {
        let (i, b) = lb.items[lb.reps[cl]];
        map[po.from_lb[cl]] = m.target().apply(lb.index[i], b);
    }
    for a in 0..m.source().set(x).len() {
        let v = m.at(x, a);
        let slot = &mut map[po.from_a[a]];
        if *slot == usize::MAX {
            *slot = v;
        }
    }
    Ok(FinFn::new(po.tokens, m.target().set(x).to_vec(), map))
}

/// Classify a diagram map in the Reedy structure over a bistratified
/// category with discrete strata: right iff every relative matching map is
/// surjective, left iff every relative latching map is injective.
pub fn reedy_classify_map(
    cat: &DegreedCategory,
    m: &DiagramMap,
) -> Result<(MapClass, RelativeMaps), Error> {
    if !check_bistratified(cat).holds || !check_discrete_strata(cat).holds {
        return Err(Error::NotDiscreteBistratified(
            "the Reedy structure needs a bistratified category with discrete strata".to_owned(),
        ));
    }
    reedy_classify_map_unchecked(cat, m)
}

fn reedy_classify_map_unchecked(
    cat: &DegreedCategory,
    m: &DiagramMap,
) -> Result<(MapClass, RelativeMaps), Error> {
    if *m.shape() != *cat.base() {
        return Err(Error::NotFunctorial(
            "map does not live on the given category".to_owned(),
        ));
    }
    let mut matching = Vec::new();
    let mut latching = Vec::new();
    let mut is_l = true;
    let mut is_r = true;
    for x in cat.base().objects() {
        let rm = relative_matching(cat, m, x, DEFAULT_MAX_SEARCH)?;
        let rl = relative_latching(cat, m, x)?;
        is_r &= rm.is_surjective();
        is_l &= rl.is_injective();
        matching.push(rm);
        latching.push(rl);
    }
    Ok((MapClass { is_l, is_r }, RelativeMaps { matching, latching }))
}

// ---------------------------------------------------------------------------
// Projective left maps and the c-Reedy classification
// ---------------------------------------------------------------------------

/// Outcome of [`projective_l_check`].
#[derive(Clone, Debug)]
pub enum ProjectiveCheck {
    /// Complemented injection with decomposable complement.
    Ok,
    NotInjective {
        object: String,
    },
    /// The objectwise complement is not closed under the shape's action.
    NotComplemented {
        morphism: String,
    },
    /// The complement functor has a component with no cone.
    NotDecomposable {
        component: Vec<(String, String)>,
    },
}

/// Is `m` a projective left map over its shape: an objectwise injection whose
/// complement is a subfunctor decomposing as a coproduct of retracts of
/// representables?
pub fn projective_l_check(shape: &FinCategory, m: &DiagramMap) -> (bool, ProjectiveCheck) {
    assert_eq!(m.shape(), shape, "map must live on the given shape");
    for x in shape.objects() {
        let mut seen = vec![false; m.target().set(x).len()];
        for &v in m.component(x) {
            if seen[v] {
                return (
                    false,
                    ProjectiveCheck::NotInjective {
                        object: shape.object_id(x).to_owned(),
                    },
                );
            }
            seen[v] = true;
        }
    }
    // Complement sets and closure under the action.
    let in_image: Vec<Vec<bool>> = shape
        .objects()
        .map(|x| {
            let mut flags = vec![false; m.target().set(x).len()];
            for &v in m.component(x) {
                flags[v] = true;
            }
            flags
        })
        .collect();
    for f in shape.morphisms() {
        let (x, y) = (shape.src(f), shape.tgt(f));
        for (b, &covered) in in_image[x.0].iter().enumerate() {
            if !covered && in_image[y.0][m.target().apply(f, b)] {
                return (
                    false,
                    ProjectiveCheck::NotComplemented {
                        morphism: shape.mor_id(f).to_owned(),
                    },
                );
            }
        }
    }
    // The complement functor.
    let comp_elems: Vec<Vec<usize>> = in_image
        .iter()
        .map(|flags| {
            flags
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let sets: Vec<Vec<String>> = shape
        .objects()
        .map(|x| {
            comp_elems[x.0]
                .iter()
                .map(|&i| m.target().set(x)[i].clone())
                .collect()
        })
        .collect();
    let maps: Vec<Vec<usize>> = shape
        .morphisms()
        .map(|f| {
            let (x, y) = (shape.src(f), shape.tgt(f));
            comp_elems[x.0]
                .iter()
                .map(|&i| {
                    let v = m.target().apply(f, i);
                    comp_elems[y.0].iter().position(|&j| j == v).unwrap()
                })
                .collect()
        })
        .collect();
    let complement =
        SetDiagram::new(shape.clone(), sets, maps).expect("complement subfunctor is functorial");
    match retract_decomposition(&complement) {
        DecompositionResult::Success(_) => (true, ProjectiveCheck::Ok),
        DecompositionResult::Failure { component } => (
            false,
            ProjectiveCheck::NotDecomposable {
                component: component
                    .into_iter()
                    .map(|e| {
                        (
                            shape.object_id(e.object).to_owned(),
                            complement.set(e.object)[e.elem].clone(),
                        )
                    })
                    .collect(),
            },
        ),
    }
}

/// Classify a diagram map in the c-Reedy structure over any bistratified
/// category: right iff objectwise relative-matching surjectivity, left iff
/// the relative latching map into each stratum diagram is a projective left
/// map over that stratum.
pub fn creedy_classify_map(cat: &DegreedCategory, m: &DiagramMap) -> Result<MapClass, Error> {
    if !check_bistratified(cat).holds {
        return Err(Error::NotBistratified(
            "the c-Reedy structure needs a bistratified category".to_owned(),
        ));
    }
    if *m.shape() != *cat.base() {
        return Err(Error::NotFunctorial(
            "map does not live on the given category".to_owned(),
        ));
    }
    let base = cat.base();
    let mut is_r = true;
    for x in base.objects() {
        let rm = relative_matching(cat, m, x, DEFAULT_MAX_SEARCH)?;
        is_r &= rm.is_surjective();
    }
    let mut is_l = true;
    let mut degrees: Vec<u32> = base.objects().map(|x| cat.degree(x)).collect();
    degrees.sort();
    degrees.dedup();
    let classes = basic_classes(cat);
    for &delta in &degrees {
        let (stratum, obj_back, _) = stratum_category(cat, &classes, delta);
        // Latching pushouts per stratum object, with the stratum action.
        let la: Vec<Latching> = obj_back
            .iter()
            .map(|&x| latching_object(cat, x, m.source()))
            .collect::<Result<_, _>>()?;
        let lb: Vec<Latching> = obj_back
            .iter()
            .map(|&x| latching_object(cat, x, m.target()))
            .collect::<Result<_, _>>()?;
        let pushouts: Vec<LatchPushout> = obj_back
            .iter()
            .enumerate()
            .map(|(i, &x)| latch_pushout(cat, m, x, &la[i], &lb[i]))
            .collect();
        let source_sets: Vec<Vec<String>> = pushouts.iter().map(|p| p.tokens.clone()).collect();
        // Action of a stratum morphism ℓ: x → x' on the pushout.
        let source_maps: Vec<Vec<usize>> = stratum
            .morphisms()
            .map(|sm| {
                let ell = base.mor_by_id(stratum.mor_id(sm)).unwrap();
                let (sx, sy) = (stratum.src(sm), stratum.tgt(sm));
                let (x, _y) = (obj_back[sx.0], obj_back[sy.0]);
                (0..pushouts[sx.0].n_classes)
                    .map(|cl| {
                        // Map a representative of the class.
                        if let Some(lb_cl) =
                            (0..lb[sx.0].n_classes).find(|&c| pushouts[sx.0].from_lb[c] == cl)
                        {
                            let (i, b) = lb[sx.0].items[lb[sx.0].reps[lb_cl]];
                            let f = lb[sx.0].index[i];
                            let lf = base.compose(ell, f).unwrap();
                            let j = lb[sy.0].index.iter().position(|&g| g == lf).unwrap();
                            pushouts[sy.0].from_lb[lb[sy.0].class_of_item(j, b)]
                        } else {
                            let a = (0..m.source().set(x).len())
                                .find(|&a| pushouts[sx.0].from_a[a] == cl)
                                .expect("class has a representative");
                            pushouts[sy.0].from_a[m.source().apply(ell, a)]
                        }
                    })
                    .collect()
            })
            .collect();
        let source = SetDiagram::new(stratum.clone(), source_sets, source_maps)?;
        let target_sets: Vec<Vec<String>> = obj_back
            .iter()
            .map(|&x| m.target().set(x).to_vec())
            .collect();
        let target_maps: Vec<Vec<usize>> = stratum
            .morphisms()
            .map(|sm| {
                let ell = base.mor_by_id(stratum.mor_id(sm)).unwrap();
                m.target().map(ell).to_vec()
            })
            .collect();
        let target = SetDiagram::new(stratum.clone(), target_sets, target_maps)?;
        let components: Vec<Vec<usize>> = obj_back
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let po = &pushouts[i];
                let mut map = vec![usize::MAX; po.n_classes];
                for cl in 0..lb[i].n_classes {
                    let (j, b) = lb[i].items[lb[i].reps[cl]];
                    map[po.from_lb[cl]] = m.target().apply(lb[i].index[j], b);
                }
                for a in 0..m.source().set(x).len() {
                    let slot = &mut map[po.from_a[a]];
                    if *slot == usize::MAX {
                        *slot = m.at(x, a);
                    }
                }
                map
            })
            .collect();
        let rel = DiagramMap::new(source, target, components)?;
        let (ok, _) = projective_l_check(&stratum, &rel);
        is_l &= ok;
    }
    Ok(MapClass { is_l, is_r })
}

// ---------------------------------------------------------------------------
// Inductive factorization
// ---------------------------------------------------------------------------

/// Factor a diagram map as a Reedy left map followed by a Reedy right map,
/// by induction on degree: at each object, push out the latching corner,
/// pull back the matching corner, and interpolate with the mapping-cylinder
/// factorization of finite sets.
pub fn reedy_factorize_map(
    cat: &DegreedCategory,
    m: &DiagramMap,
) -> Result<(DiagramMap, DiagramMap), Error> {
    if !check_bistratified(cat).holds || !check_discrete_strata(cat).holds {
        return Err(Error::NotDiscreteBistratified(
            "the Reedy factorization needs a bistratified category with discrete strata".to_owned(),
        ));
    }
    if *m.shape() != *cat.base() {
        return Err(Error::NotFunctorial(
            "map does not live on the given category".to_owned(),
        ));
    }
    let base = cat.base();
    let n_obj = base.n_objects();
    let n_mor = base.n_morphisms();
    let a = m.source();
    let b = m.target();

    let mut e_sets: Vec<Option<Vec<String>>> = vec![None; n_obj];
    let mut e_maps: Vec<Option<Vec<usize>>> = vec![None; n_mor];
    let mut lcomp: Vec<Option<Vec<usize>>> = vec![None; n_obj];
    let mut rcomp: Vec<Option<Vec<usize>>> = vec![None; n_obj];

    let mut degrees: Vec<u32> = base.objects().map(|x| cat.degree(x)).collect();
    degrees.sort();
    degrees.dedup();

    for &group_degree in &degrees {
        let group: Vec<Obj> = base
            .objects()
            .filter(|&x| cat.degree(x) == group_degree)
            .collect();
        for &x in &group {
            let delta = cat.degree(x);
            // Latching of the partial middle diagram at x, inlined over the
            // already-built data.
            let lat_index: Vec<Mor> = base
                .morphisms()
                .filter(|&f| base.tgt(f) == x && cat.degree(base.src(f)) < delta)
                .collect();
            let lat_pos = |f: Mor| lat_index.iter().position(|&g| g == f).unwrap();
            let mut items = Vec::new();
            let mut offsets = Vec::new();
            for &f in &lat_index {
                offsets.push(items.len());
                let z = base.src(f);
                for e in 0..e_sets[z.0].as_ref().unwrap().len() {
                    items.push((lat_pos(f), e));
                }
            }
            let flat = |i: usize, e: usize| offsets[i] + e;
            let mut le_sets = DisjointSets::new(items.len());
            for (i, &f) in lat_index.iter().enumerate() {
                for k in base.morphisms() {
                    if base.tgt(k) != base.src(f) || cat.degree(base.src(k)) >= delta {
                        continue;
                    }
                    let fk = base.compose(f, k).unwrap();
                    let j = lat_pos(fk);
                    for e in 0..e_sets[base.src(k).0].as_ref().unwrap().len() {
                        le_sets.union(flat(j, e), flat(i, e_maps[k.0].as_ref().unwrap()[e]));
                    }
                }
            }
            let (le_class_of, le_n) = le_sets.class_numbers();
            let le_reps: Vec<usize> = (0..le_n)
                .map(|cl| le_class_of.iter().position(|&c| c == cl).unwrap())
                .collect();

            // Matching families of the partial middle diagram at x.
            let mat_index: Vec<Mor> = base
                .morphisms()
                .filter(|&f| base.src(f) == x && cat.degree(base.tgt(f)) < delta)
                .collect();
            let mat_pos = |f: Mor| mat_index.iter().position(|&g| g == f).unwrap();
            let me_families = {
                let mut families: Vec<Vec<usize>> = vec![Vec::new()];
                for (i, &f) in mat_index.iter().enumerate() {
                    let z = base.tgt(f);
                    let size = e_sets[z.0].as_ref().unwrap().len();
                    let mut next = Vec::new();
                    'fam: for fam in &families {
                        'val: for v in 0..size {
                            // Constraints against already-placed components.
                            for (j, &g) in mat_index.iter().enumerate().take(i) {
                                for k in base.morphisms() {
                                    if cat.degree(base.tgt(k)) >= delta {
                                        continue;
                                    }
                                    if base.src(k) == base.tgt(g)
                                        && base.compose(k, g) == Some(f)
                                        && e_maps[k.0].as_ref().unwrap()[fam[j]] != v
                                    {
                                        continue 'val;
                                    }
                                    if base.src(k) == base.tgt(f)
                                        && base.compose(k, f) == Some(g)
                                        && e_maps[k.0].as_ref().unwrap()[v] != fam[j]
                                    {
                                        continue 'val;
                                    }
                                }
                            }
                            // Endo-constraints on the new component itself.
                            for k in base.morphisms() {
                                if base.src(k) == base.tgt(f)
                                    && base.compose(k, f) == Some(f)
                                    && e_maps[k.0].as_ref().unwrap()[v] != v
                                {
                                    continue 'val;
                                }
                            }
                            let mut extended = fam.clone();
                            extended.push(v);
                            next.push(extended);
                        }
                        if size == 0 && !mat_index.is_empty() {
                            continue 'fam;
                        }
                    }
                    families = next;
                }
                families
            };
            let me_tokens: Vec<String> = me_families
                .iter()
                .map(|fam| {
                    let parts: Vec<String> = mat_index
                        .iter()
                        .zip(fam)
                        .map(|(&f, &e)| e_sets[base.tgt(f).0].as_ref().unwrap()[e].clone())
                        .collect();
                    format!("[{}]", parts.join(","))
                })
                .collect();

            // Matching of B at x (full diagram) and the pullback corner.
            let mb = matching_object(cat, x, b, DEFAULT_MAX_SEARCH)?;
            debug_assert_eq!(mb.index, mat_index);
            let me_to_mb = |fam: &[usize]| -> usize {
                let image: Vec<usize> = mat_index
                    .iter()
                    .zip(fam)
                    .map(|(&f, &e)| rcomp[base.tgt(f).0].as_ref().unwrap()[e])
                    .collect();
                mb.families
                    .iter()
                    .position(|g| *g == image)
                    .expect("middle family maps into M_x B")
            };
            let b_to_mb = |bx: usize| -> usize {
                let fam: Vec<usize> = mat_index.iter().map(|&f| b.apply(f, bx)).collect();
                mb.families
                    .iter()
                    .position(|g| *g == fam)
                    .expect("restriction family lies in M_x B")
            };
            let mut q_items: Vec<(usize, usize)> = Vec::new();
            let mut q_tokens: Vec<String> = Vec::new();
            for (i, tok) in me_tokens.iter().enumerate() {
                for bx in 0..b.set(x).len() {
                    if me_to_mb(&me_families[i]) == b_to_mb(bx) {
                        q_items.push((i, bx));
                        q_tokens.push(format!("({tok},{})", b.set(x)[bx]));
                    }
                }
            }
            let q_pos = |i: usize, bx: usize| q_items.iter().position(|&it| it == (i, bx)).unwrap();

            // Pushout corner P = L_x E ⊔_{L_x A} A_x.
            let la = latching_object(cat, x, a)?;
            debug_assert_eq!(la.index, lat_index);
            let mut p_sets = DisjointSets::new(le_n + a.set(x).len());
            for cl in 0..la.n_classes {
                let members: Vec<usize> = (0..la.items.len())
                    .filter(|&idx| la.class_of[idx] == cl)
                    .collect();
                let first = members[0];
                let (i0, a0) = la.items[first];
                let le0 =
                    le_class_of[flat(i0, lcomp[base.src(lat_index[i0]).0].as_ref().unwrap()[a0])];
                let ax0 = a.apply(lat_index[i0], a0);
                p_sets.union(le0, le_n + ax0);
                for &idx in &members[1..] {
                    let (i, aa) = la.items[idx];
                    let le =
                        le_class_of[flat(i, lcomp[base.src(lat_index[i]).0].as_ref().unwrap()[aa])];
                    p_sets.union(le0, le);
                    p_sets.union(le_n + ax0, le_n + a.apply(lat_index[i], aa));
                }
            }
            let (p_class_of, p_n) = p_sets.class_numbers();
            let p_tokens: Vec<String> = (0..p_n)
                .map(|cl| {
                    let rep = p_class_of.iter().position(|&c| c == cl).unwrap();
                    if rep < le_n {
                        let (i, e) = items[le_reps[rep]];
                        format!(
                            "e.{}.{}",
                            base.mor_id(lat_index[i]),
                            e_sets[base.src(lat_index[i]).0].as_ref().unwrap()[e]
                        )
                    } else {
                        format!("a.{}", a.set(x)[rep - le_n])
                    }
                })
                .collect();

            // The corner map P → Q.
            let p_to_q: Vec<usize> = (0..p_n)
                .map(|cl| {
                    let rep = p_class_of.iter().position(|&c| c == cl).unwrap();
                    if rep < le_n {
                        let (i, e) = items[le_reps[rep]];
                        let f = lat_index[i];
                        let z = base.src(f);
                        // Matching family: g ↦ E(g∘f)(e); B component: B(f)(r(e)).
                        let fam: Vec<usize> = mat_index
                            .iter()
                            .map(|&g| {
                                let gf = base.compose(g, f).unwrap();
                                e_maps[gf.0].as_ref().unwrap()[e]
                            })
                            .collect();
                        let mi = me_families
                            .iter()
                            .position(|h| *h == fam)
                            .expect("latching image family is compatible");
                        let bx = b.apply(f, rcomp[z.0].as_ref().unwrap()[e]);
                        q_pos(mi, bx)
                    } else {
                        let ax = rep - le_n;
                        let fam: Vec<usize> = mat_index
                            .iter()
                            .map(|&g| {
                                let z = base.tgt(g);
                                lcomp[z.0].as_ref().unwrap()[a.apply(g, ax)]
                            })
                            .collect();
                        let mi = me_families
                            .iter()
                            .position(|h| *h == fam)
                            .expect("value image family is compatible");
                        q_pos(mi, m.at(x, ax))
                    }
                })
                .collect();

            // Interpolate with the cylinder.
            let corner = FinFn::new(p_tokens.clone(), q_tokens.clone(), p_to_q.clone());
            let (inj, surj) = base_factorize(&corner);
            let e_x_tokens = inj.target.clone();
            let e_x_size = e_x_tokens.len();
            e_sets[x.0] = Some(e_x_tokens);
            e_maps[base.identity(x).0] = Some((0..e_x_size).collect());

            lcomp[x.0] = Some(
                (0..a.set(x).len())
                    .map(|ax| inj.map[p_class_of[le_n + ax]])
                    .collect(),
            );
            rcomp[x.0] = Some(
                (0..p_n + q_items.len())
                    .map(|ex| {
                        let q = surj.map[ex];
                        q_items[q].1
                    })
                    .collect(),
            );
            // Morphisms into x from below: through the pushout and the cylinder.
            for &f in &lat_index {
                let z = base.src(f);
                let i = lat_pos(f);
                e_maps[f.0] = Some(
                    (0..e_sets[z.0].as_ref().unwrap().len())
                        .map(|e| inj.map[p_class_of[le_class_of[flat(i, e)]]])
                        .collect(),
                );
            }
            // Morphisms out of x to below: through the cylinder and the pullback.
            for &g in &mat_index {
                let gi = mat_pos(g);
                e_maps[g.0] = Some(
                    (0..p_n + q_items.len())
                        .map(|ex| {
                            let q = surj.map[ex];
                            me_families[q_items[q].0][gi]
                        })
                        .collect(),
                );
            }
        }

        // Level morphisms at this degree: all nonidentity ones are non-basic
        // (discrete strata), so they factor through strictly lower degree; the
        // choice of factorization does not matter because the category is
        // bistratified.
        for f in base.morphisms() {
            if e_maps[f.0].is_some()
                || cat.degree(base.src(f)) != group_degree
                || cat.degree(base.tgt(f)) != group_degree
            {
                continue;
            }
            let facts = crate::factorization::fundamental_factorizations(cat, f);
            let fact = facts.first().ok_or_else(|| {
                Error::InternalInvariantBroken(format!(
                    "level morphism `{}` admits no fundamental factorization",
                    base.mor_id(f)
                ))
            })?;
            let first = e_maps[fact.first.0]
                .as_ref()
                .expect("lower factor already built")
                .clone();
            let second = e_maps[fact.second.0]
                .as_ref()
                .expect("upper factor already built")
                .clone();
            e_maps[f.0] = Some(first.iter().map(|&v| second[v]).collect());
        }
    }

    let middle = SetDiagram::new(
        base.clone(),
        e_sets.into_iter().map(Option::unwrap).collect(),
        e_maps.into_iter().map(Option::unwrap).collect(),
    )?;
    let ell = DiagramMap::new(
        a.clone(),
        middle.clone(),
        lcomp.into_iter().map(Option::unwrap).collect(),
    )?;
    let arr = DiagramMap::new(
        middle,
        b.clone(),
        rcomp.into_iter().map(Option::unwrap).collect(),
    )?;
    // The factorization must compose back to m and have the asserted classes.
    for x in base.objects() {
        for aa in 0..a.set(x).len() {
            assert_eq!(
                arr.at(x, ell.at(x, aa)),
                m.at(x, aa),
                "factorization does not compose back to the input"
            );
        }
    }
    let (lc, _) = reedy_classify_map_unchecked(cat, &ell)?;
    let (rc, _) = reedy_classify_map_unchecked(cat, &arr)?;
    assert!(lc.is_l, "left factor must be a Reedy left map");
    assert!(rc.is_r, "right factor must be a Reedy right map");
    Ok((ell, arr))
}

// ---------------------------------------------------------------------------
// Lifting
// ---------------------------------------------------------------------------

/// A commuting square from `left` to `right`, with `top` on sources and
/// `bottom` on targets.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub left: DiagramMap,
    pub right: DiagramMap,
    /// Components source(left) → source(right).
    pub top: Vec<Vec<usize>>,
    /// Components target(left) → target(right).
    pub bottom: Vec<Vec<usize>>,
}

impl LiftingProblem {
    pub fn new(
        left: DiagramMap,
        right: DiagramMap,
        top: Vec<Vec<usize>>,
        bottom: Vec<Vec<usize>>,
    ) -> Result<Self, Error> {
        let bad = |msg: &str| Err(Error::NotFunctorial(msg.to_owned()));
        if left.shape() != right.shape() {
            return bad("left and right maps live on different shapes");
        }
        // top and bottom must be natural and the square must commute.
        let top_map = DiagramMap::new(left.source().clone(), right.source().clone(), top)?;
        let bottom_map = DiagramMap::new(left.target().clone(), right.target().clone(), bottom)?;
        for x in left.shape().objects() {
            for a in 0..left.source().set(x).len() {
                if right.at(x, top_map.at(x, a)) != bottom_map.at(x, left.at(x, a)) {
                    return bad("the lifting square does not commute");
                }
            }
        }
        Ok(LiftingProblem {
            left,
            right,
            top: top_map.component_table(),
            bottom: bottom_map.component_table(),
        })
    }
}

impl DiagramMap {
    fn component_table(&self) -> Vec<Vec<usize>> {
        self.shape()
            .objects()
            .map(|x| self.component(x).to_vec())
            .collect()
    }
}

/// Exhaustive search for a natural diagonal filler making both triangles
/// commute; returns the first one in canonical order, or None.
pub fn solve_lifting(p: &LiftingProblem, cap: u64) -> Result<Option<DiagramMap>, Error> {
    let shape = p.left.shape().clone();
    let b = p.left.target();
    let xdiag = p.right.source();
    // Slots: (object, element of B(x)).
    let mut slots: Vec<(Obj, usize)> = Vec::new();
    for x in shape.objects() {
        for e in 0..b.set(x).len() {
            slots.push((x, e));
        }
    }
    let slot_of = |x: Obj, e: usize| slots.iter().position(|&s| s == (x, e)).unwrap();
    // Forced values from the top triangle: d(ℓ(a)) = top(a).
    let mut forced: Vec<Option<usize>> = vec![None; slots.len()];
    for x in shape.objects() {
        for a in 0..p.left.source().set(x).len() {
            let slot = slot_of(x, p.left.at(x, a));
            let want = p.top[x.0][a];
            match forced[slot] {
                None => forced[slot] = Some(want),
                Some(prev) if prev == want => {}
                Some(_) => return Ok(None),
            }
        }
    }
    // Candidates constrained by the bottom triangle: r(d(e)) = bottom(e).
    let candidates: Vec<Vec<usize>> = slots
        .iter()
        .map(|&(x, e)| match forced[slot_of(x, e)] {
            Some(v) if p.right.at(x, v) == p.bottom[x.0][e] => vec![v],
            Some(_) => vec![],
            None => (0..xdiag.set(x).len())
                .filter(|&v| p.right.at(x, v) == p.bottom[x.0][e])
                .collect(),
        })
        .collect();
    // Naturality constraints: d_y(B(k)(e)) = X(k)(d_x(e)).
    let mut constraints: Vec<(usize, usize, Mor)> = Vec::new();
    for k in shape.morphisms() {
        let (x, y) = (shape.src(k), shape.tgt(k));
        for e in 0..b.set(x).len() {
            constraints.push((slot_of(x, e), slot_of(y, b.apply(k, e)), k));
        }
    }

    let mut assignment: Vec<Option<usize>> = vec![None; slots.len()];
    let mut steps = 0u64;
    fn recurse(
        depth: usize,
        slots: &[(Obj, usize)],
        candidates: &[Vec<usize>],
        constraints: &[(usize, usize, Mor)],
        xdiag: &SetDiagram,
        assignment: &mut Vec<Option<usize>>,
        steps: &mut u64,
        cap: u64,
    ) -> Result<bool, Error> {
        if depth == slots.len() {
            return Ok(true);
        }
        'vals: for &v in &candidates[depth] {
            *steps += 1;
            if *steps > cap {
                return Err(Error::SizeGuardExceeded {
                    cap,
                    context: "lifting search".to_owned(),
                });
            }
            assignment[depth] = Some(v);
            for &(i, j, k) in constraints {
                if i > depth || j > depth {
                    continue;
                }
                if let (Some(a), Some(bv)) = (assignment[i], assignment[j]) {
                    if xdiag.apply(k, a) != bv {
                        continue 'vals;
                    }
                }
            }
            if recurse(
                depth + 1,
                slots,
                candidates,
                constraints,
                xdiag,
                assignment,
                steps,
                cap,
            )? {
                return Ok(true);
            }
        }
        assignment[depth] = None;
        Ok(false)
    }
    let found = recurse(
        0,
        &slots,
        &candidates,
        &constraints,
        xdiag,
        &mut assignment,
        &mut steps,
        cap,
    )?;
    if !found {
        return Ok(None);
    }
    let mut table: Vec<Vec<usize>> = shape.objects().map(|_| Vec::new()).collect();
    for (n, &(x, _)) in slots.iter().enumerate() {
        table[x.0].push(assignment[n].unwrap());
    }
    Ok(Some(DiagramMap::new(b.clone(), xdiag.clone(), table)?))
}

/// Lifting for plain finite functions, modelled as diagrams over the
/// terminal category.
pub fn solve_lifting_functions(
    left: &FinFn,
    right: &FinFn,
    top: &[usize],
    bottom: &[usize],
) -> Result<Option<Vec<usize>>, Error> {
    let shape = crate::fincat::CatBuilder::new()
        .object("pt", 0)
        .build()
        .expect("terminal category")
        .base()
        .clone();
    let diag = |set: &[String]| {
        SetDiagram::new(
            shape.clone(),
            vec![set.to_vec()],
            vec![(0..set.len()).collect()],
        )
        .expect("diagram on the point")
    };
    let lmap = DiagramMap::new(
        diag(&left.source),
        diag(&left.target),
        vec![left.map.clone()],
    )?;
    let rmap = DiagramMap::new(
        diag(&right.source),
        diag(&right.target),
        vec![right.map.clone()],
    )?;
    let problem = LiftingProblem::new(lmap, rmap, vec![top.to_vec()], vec![bottom.to_vec()])?;
    Ok(solve_lifting(&problem, DEFAULT_MAX_SEARCH)?.map(|d| d.component(Obj(0)).to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self};

    fn entry(name: &str) -> DegreedCategory {
        corpus::builtin(name).unwrap().category
    }

    fn ff(src: &[&str], tgt: &[&str], map: &[usize]) -> FinFn {
        FinFn::new(
            src.iter().map(|s| s.to_string()).collect(),
            tgt.iter().map(|s| s.to_string()).collect(),
            map.to_vec(),
        )
    }

    #[test]
    fn base_classes() {
        let id2 = ff(&["0", "1"], &["0", "1"], &[0, 1]);
        let c = base_classify(&id2);
        assert!(c.is_l && c.is_r);
        let collapse = ff(&["0", "1"], &["*"], &[0, 0]);
        let c = base_classify(&collapse);
        assert!(!c.is_l && c.is_r);
        let include = ff(&["0"], &["0", "1"], &[0]);
        let c = base_classify(&include);
        assert!(c.is_l && !c.is_r);
    }

    #[test]
    fn base_factorization_classes() {
        for f in [
            ff(&["0", "1"], &["*"], &[0, 0]),
            ff(&["0"], &["0", "1"], &[1]),
            ff(&[], &["y"], &[]),
        ] {
            let (inj, surj) = base_factorize(&f);
            assert!(base_classify(&inj).is_l);
            assert!(base_classify(&surj).is_r);
            assert_eq!(inj.map.len(), f.source.len());
            for (i, &v) in f.map.iter().enumerate() {
                assert_eq!(surj.map[inj.map[i]], v, "composite must equal f");
            }
        }
    }

    #[test]
    fn lifting_plain_functions() {
        // ∅ → {*} against {0,1} ↠ {*}: fillers exist.
        let left = ff(&[], &["*"], &[]);
        let right = ff(&["0", "1"], &["*"], &[0, 0]);
        let filler = solve_lifting_functions(&left, &right, &[], &[0]).unwrap();
        assert_eq!(filler, Some(vec![0]));
        // The fold {*}⊔{*} → {*} is not injective: the square separating the
        // two collapsed points has no filler even against a surjection.
        let left = ff(&["a", "b"], &["*"], &[0, 0]);
        let right = ff(&["0", "1"], &["*"], &[0, 0]);
        let filler = solve_lifting_functions(&left, &right, &[0, 1], &[0]).unwrap();
        assert_eq!(filler, None);
    }

    fn diagram_by(
        cat: &DegreedCategory,
        sets: &[(&str, &[&str])],
        maps: &[(&str, &[usize])],
    ) -> SetDiagram {
        let base = cat.base();
        let mut set_table = vec![Vec::new(); base.n_objects()];
        for (id, elems) in sets {
            let x = base.object_by_id(id).unwrap();
            set_table[x.0] = elems.iter().map(|s| s.to_string()).collect();
        }
        let mut map_table: Vec<Vec<usize>> = base
            .morphisms()
            .map(|f| {
                if base.is_identity(f) {
                    (0..set_table[base.src(f).0].len()).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        for (id, values) in maps {
            let f = base.mor_by_id(id).unwrap();
            map_table[f.0] = values.to_vec();
        }
        SetDiagram::new(base.clone(), set_table, map_table).unwrap()
    }

    #[test]
    fn identity_map_is_both() {
        let cat = entry("parallel_pair");
        let x = diagram_by(
            &cat,
            &[("x", &["p", "q"]), ("y", &["0", "1"])],
            &[("f", &[0, 1]), ("g", &[1, 1])],
        );
        let id = DiagramMap::identity(x);
        let (class, _) = reedy_classify_map(&cat, &id).unwrap();
        assert!(class.is_l && class.is_r);
        let c = creedy_classify_map(&cat, &id).unwrap();
        assert!(c.is_l && c.is_r);
    }

    #[test]
    fn classify_rejects_bad_strata() {
        let cat = entry("c_reedy_square");
        let x = SetDiagram::constant_singleton(cat.base().clone());
        let id = DiagramMap::identity(x);
        assert!(matches!(
            reedy_classify_map(&cat, &id),
            Err(Error::NotDiscreteBistratified(_))
        ));
        // But the c-structure accepts it.
        let c = creedy_classify_map(&cat, &id).unwrap();
        assert!(c.is_l && c.is_r);
        let iso = entry("iso_pair");
        let y = SetDiagram::constant_singleton(iso.base().clone());
        assert!(matches!(
            creedy_classify_map(&iso, &DiagramMap::identity(y)),
            Err(Error::NotBistratified(_))
        ));
    }

    #[test]
    fn projective_check_on_group_actions() {
        // Over the one-object two-element group: ∅ → free orbit is
        // projective-left; ∅ → trivial orbit is not.
        let z2 = entry("orbit_Z2_degH");
        let classes = basic_classes(&z2);
        let (stratum, _, _) = stratum_category(&z2, &classes, 1);
        let empty = SetDiagram::new(stratum.clone(), vec![vec![]], vec![vec![], vec![]]).unwrap();
        let free = SetDiagram::new(
            stratum.clone(),
            vec![vec!["e".into(), "s".into()]],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let incl = DiagramMap::new(empty.clone(), free, vec![vec![]]).unwrap();
        let (ok, _) = projective_l_check(&stratum, &incl);
        assert!(ok);
        let trivial = SetDiagram::new(
            stratum.clone(),
            vec![vec!["pt".into()]],
            vec![vec![0], vec![0]],
        )
        .unwrap();
        let incl = DiagramMap::new(empty, trivial, vec![vec![]]).unwrap();
        let (ok, check) = projective_l_check(&stratum, &incl);
        assert!(!ok);
        assert!(matches!(check, ProjectiveCheck::NotDecomposable { .. }));
    }

    #[test]
    fn factorize_parallel_pair_map() {
        let cat = entry("parallel_pair");
        let a = diagram_by(
            &cat,
            &[("x", &["p", "q"]), ("y", &["0", "1"])],
            &[("f", &[0, 1]), ("g", &[1, 1])],
        );
        let b = diagram_by(
            &cat,
            &[("x", &["s"]), ("y", &["z"])],
            &[("f", &[0]), ("g", &[0])],
        );
        let m = DiagramMap::new(a, b, vec![vec![0, 0], vec![0, 0]]).unwrap();
        let (ell, arr) = reedy_factorize_map(&cat, &m).unwrap();
        let (lc, _) = reedy_classify_map(&cat, &ell).unwrap();
        let (rc, _) = reedy_classify_map(&cat, &arr).unwrap();
        assert!(lc.is_l);
        assert!(rc.is_r);
        for x in cat.base().objects() {
            for e in 0..m.source().set(x).len() {
                assert_eq!(arr.at(x, ell.at(x, e)), m.at(x, e));
            }
        }
    }

    #[test]
    fn discrete_strata_agree_between_structures() {
        // When strata are discrete the c-classification coincides with the
        // s-classification.
        let cat = entry("almost_reedy_square");
        let a = diagram_by(
            &cat,
            &[
                ("a", &["s"]),
                ("b", &["0", "1"]),
                ("c", &["0", "1"]),
                ("d", &["0", "1"]),
            ],
            &[
                ("ab", &[0]),
                ("ac", &[0]),
                ("ad", &[0]),
                ("bd", &[0, 1]),
                ("cd", &[0, 1]),
            ],
        );
        let b = SetDiagram::constant_singleton(cat.base().clone());
        let m = DiagramMap::new(
            a,
            b,
            cat.base()
                .objects()
                .map(|x| vec![0; if cat.base().object_id(x) == "a" { 1 } else { 2 }])
                .collect(),
        )
        .unwrap();
        let (s_class, _) = reedy_classify_map(&cat, &m).unwrap();
        let c_class = creedy_classify_map(&cat, &m).unwrap();
        assert_eq!(s_class.is_l, c_class.is_l);
        assert_eq!(s_class.is_r, c_class.is_r);
    }
}
