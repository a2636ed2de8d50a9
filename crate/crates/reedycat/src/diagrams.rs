//! Finite-set-valued diagrams and the constructions the stratification
//! theory performs on them: weighted limits and colimits, latching and
//! matching objects, profunctor collages, the recognition principle, and the
//! bigluing split/merge equivalence.
//!
//! Constructed sets carry provenance-tagged canonical element tokens, and all
//! quotients pick least representatives, so every construction is
//! reproducible bit for bit.

use std::collections::BTreeMap;

use crate::dset::DisjointSets;
use crate::factorization::{basic_classes, boundary_hom, factorization_components, BoundaryHom};
use crate::fincat::{opposite_fin, DegreedCategory, FinCategory, Mor, Obj};
use crate::profunctor::Profunctor;
use crate::Error;

pub const DEFAULT_MAX_SEARCH: u64 = 1_000_000;

// ---------------------------------------------------------------------------
// Diagrams and their maps
// ---------------------------------------------------------------------------

/// A functor from a finite category to finite sets, as explicit tables.
#[derive(Clone, PartialEq, Debug)]
pub struct SetDiagram {
    shape: FinCategory,
    sets: Vec<Vec<String>>,
    maps: Vec<Vec<usize>>,
}

impl SetDiagram {
    pub fn new(
        shape: FinCategory,
        sets: Vec<Vec<String>>,
        maps: Vec<Vec<usize>>,
    ) -> Result<Self, Error> {
        let bad = |msg: String| Err(Error::NotAFunctor(msg));
        if sets.len() != shape.n_objects() || maps.len() != shape.n_morphisms() {
            return bad("diagram tables do not match the shape".to_owned());
        }
        for f in shape.morphisms() {
            let table = &maps[f.0];
            if table.len() != sets[shape.src(f).0].len()
                || table.iter().any(|&v| v >= sets[shape.tgt(f).0].len())
            {
                return bad(format!(
                    "value of `{}` is not a function between the assigned sets",
                    shape.mor_id(f)
                ));
            }
        }
        for x in shape.objects() {
            let id = shape.identity(x);
            if maps[id.0].iter().enumerate().any(|(i, &v)| v != i) {
                return bad(format!(
                    "identity of `{}` does not act as the identity function",
                    shape.object_id(x)
                ));
            }
        }
        for g in shape.morphisms() {
            for f in shape.morphisms() {
                let Some(gf) = shape.compose(g, f) else {
                    continue;
                };
                for i in 0..sets[shape.src(f).0].len() {
                    if maps[g.0][maps[f.0][i]] != maps[gf.0][i] {
                        return bad(format!(
                            "functoriality fails on (`{}`, `{}`)",
                            shape.mor_id(g),
                            shape.mor_id(f)
                        ));
                    }
                }
            }
        }
        Ok(SetDiagram { shape, sets, maps })
    }

    pub fn shape(&self) -> &FinCategory {
        &self.shape
    }

    pub fn set(&self, x: Obj) -> &[String] {
        &self.sets[x.0]
    }

    pub fn map(&self, f: Mor) -> &[usize] {
        &self.maps[f.0]
    }

    pub fn apply(&self, f: Mor, elem: usize) -> usize {
        self.maps[f.0][elem]
    }

    /// The constant singleton diagram on a shape.
    pub fn constant_singleton(shape: FinCategory) -> SetDiagram {
        let sets = vec![vec!["*".to_owned()]; shape.n_objects()];
        let maps = vec![vec![0]; shape.n_morphisms()];
        SetDiagram::new(shape, sets, maps).expect("constant diagram is functorial")
    }
}

/// A natural transformation between two diagrams on one shape.
#[derive(Clone, PartialEq, Debug)]
pub struct DiagramMap {
    source: SetDiagram,
    target: SetDiagram,
    components: Vec<Vec<usize>>,
}

impl DiagramMap {
    pub fn new(
        source: SetDiagram,
        target: SetDiagram,
        components: Vec<Vec<usize>>,
    ) -> Result<Self, Error> {
        let bad = |msg: String| Err(Error::NotFunctorial(msg));
        if source.shape != target.shape {
            return bad("source and target do not share a shape".to_owned());
        }
        let shape = &source.shape;
        if components.len() != shape.n_objects() {
            return bad("one component per object is required".to_owned());
        }
        for x in shape.objects() {
            let comp = &components[x.0];
            if comp.len() != source.set(x).len() || comp.iter().any(|&v| v >= target.set(x).len()) {
                return bad(format!(
                    "component at `{}` is not a function",
                    shape.object_id(x)
                ));
            }
        }
        for f in shape.morphisms() {
            let (x, y) = (shape.src(f), shape.tgt(f));
            for a in 0..source.set(x).len() {
                if components[y.0][source.apply(f, a)] != target.apply(f, components[x.0][a]) {
                    return bad(format!(
                        "naturality square of `{}` does not commute",
                        shape.mor_id(f)
                    ));
                }
            }
        }
        Ok(DiagramMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(diagram: SetDiagram) -> DiagramMap {
        let components = diagram
            .sets
            .iter()
            .map(|s| (0..s.len()).collect())
            .collect();
        DiagramMap::new(diagram.clone(), diagram, components).expect("identity map is natural")
    }

    pub fn shape(&self) -> &FinCategory {
        self.source.shape()
    }

    pub fn source(&self) -> &SetDiagram {
        &self.source
    }

    pub fn target(&self) -> &SetDiagram {
        &self.target
    }

    pub fn component(&self, x: Obj) -> &[usize] {
        &self.components[x.0]
    }

    pub fn at(&self, x: Obj, elem: usize) -> usize {
        self.components[x.0][elem]
    }
}

// ---------------------------------------------------------------------------
// Weighted limits and colimits
// ---------------------------------------------------------------------------

/// A natural family: for every object `c` and weight element `w ∈ W(c)`, an
/// element of `X(c)`, natural in `c`.
pub type Family = Vec<Vec<usize>>;

/// The set of natural transformations W ⇒ X, by backtracking over the slots
/// `(c, w)` in canonical order with incremental naturality checks. The guard
/// caps the number of candidate extensions visited.
pub fn weighted_limit(
    weight: &SetDiagram,
    diagram: &SetDiagram,
    cap: u64,
) -> Result<Vec<Family>, Error> {
    if weight.shape != diagram.shape {
        return Err(Error::NotAFunctor(
            "weight and diagram must share a shape".to_owned(),
        ));
    }
    let shape = weight.shape();
    let mut slots: Vec<(Obj, usize)> = Vec::new();
    for c in shape.objects() {
        for i in 0..weight.set(c).len() {
            slots.push((c, i));
        }
    }
    let slot_index: BTreeMap<(usize, usize), usize> = slots
        .iter()
        .enumerate()
        .map(|(n, &(c, i))| ((c.0, i), n))
        .collect();
    // Naturality constraints: X(k)(family[c][i]) = family[c'][W(k)(i)].
    struct Constraint {
        from: usize,
        to: usize,
        via: Mor,
    }
    let mut constraints = Vec::new();
    for k in shape.morphisms() {
        let (c, c2) = (shape.src(k), shape.tgt(k));
        for i in 0..weight.set(c).len() {
            constraints.push(Constraint {
                from: slot_index[&(c.0, i)],
                to: slot_index[&(c2.0, weight.apply(k, i))],
                via: k,
            });
        }
    }
    let mut by_slot: Vec<Vec<usize>> = vec![Vec::new(); slots.len()];
    for (n, c) in constraints.iter().enumerate() {
        by_slot[c.from].push(n);
        by_slot[c.to].push(n);
    }

    let mut families = Vec::new();
    let mut assignment: Vec<Option<usize>> = vec![None; slots.len()];
    let mut steps: u64 = 0;
    fn recurse(
        depth: usize,
        slots: &[(Obj, usize)],
        diagram: &SetDiagram,
        constraints: &[Constraint],
        by_slot: &[Vec<usize>],
        assignment: &mut Vec<Option<usize>>,
        families: &mut Vec<Family>,
        steps: &mut u64,
        cap: u64,
    ) -> Result<(), Error> {
        if depth == slots.len() {
            let mut family: Family = vec![Vec::new(); diagram.shape().n_objects()];
            for (n, &(c, _)) in slots.iter().enumerate() {
                family[c.0].push(assignment[n].unwrap());
            }
            families.push(family);
            return Ok(());
        }
        let (c, _) = slots[depth];
        'vals: for v in 0..diagram.set(c).len() {
            *steps += 1;
            if *steps > cap {
                return Err(Error::SizeGuardExceeded {
                    cap,
                    context: "weighted limit enumeration".to_owned(),
                });
            }
            assignment[depth] = Some(v);
            for &ci in &by_slot[depth] {
                let con = &constraints[ci];
                if let (Some(a), Some(b)) = (assignment[con.from], assignment[con.to]) {
                    if con.from <= depth && con.to <= depth && diagram.apply(con.via, a) != b {
                        continue 'vals;
                    }
                }
            }
            recurse(
                depth + 1,
                slots,
                diagram,
                constraints,
                by_slot,
                assignment,
                families,
                steps,
                cap,
            )?;
        }
        assignment[depth] = None;
        Ok(())
    }
    recurse(
        0,
        &slots,
        diagram,
        &constraints,
        &by_slot,
        &mut assignment,
        &mut families,
        &mut steps,
        cap,
    )?;
    Ok(families)
}

/// A quotient of a tagged disjoint union, as produced by coends and latching
/// objects. Classes are numbered by first appearance; each class carries the
/// least item as representative and a provenance token derived from it.
#[derive(Clone, PartialEq, Debug)]
pub struct Quotient {
    /// (object, weight element, diagram element), in canonical order.
    pub items: Vec<(Obj, usize, usize)>,
    pub class_of: Vec<usize>,
    pub n_classes: usize,
    pub reps: Vec<usize>,
    pub tokens: Vec<String>,
}

/// The coend of a weight on the opposite shape against a diagram:
/// ⨆_c U(c)×X(c) modulo (u·k, a) ~ (u, k·a), by union-find.
pub fn weighted_colimit(coweight: &SetDiagram, diagram: &SetDiagram) -> Result<Quotient, Error> {
    let shape = diagram.shape();
    if *coweight.shape() != opposite_fin(shape) {
        return Err(Error::NotAFunctor(
            "colimit weight must live on the opposite shape".to_owned(),
        ));
    }
    let op = coweight.shape();
    let mut items = Vec::new();
    let mut offset: Vec<usize> = Vec::new();
    for c in shape.objects() {
        offset.push(items.len());
        for u in 0..coweight.set(c).len() {
            for a in 0..diagram.set(c).len() {
                items.push((c, u, a));
            }
        }
    }
    let flat = |c: Obj, u: usize, a: usize| offset[c.0] + u * diagram.set(c).len() + a;
    let mut sets = DisjointSets::new(items.len());
    for k in shape.morphisms() {
        let (c, c2) = (shape.src(k), shape.tgt(k));
        let k_op = op.mor_by_id(shape.mor_id(k)).expect("same morphism ids");
        for u2 in 0..coweight.set(c2).len() {
            let uk = coweight.apply(k_op, u2);
            for a in 0..diagram.set(c).len() {
                sets.union(flat(c, uk, a), flat(c2, u2, diagram.apply(k, a)));
            }
        }
    }
    let (class_of, n_classes) = sets.class_numbers();
    let mut reps = vec![usize::MAX; n_classes];
    for (i, &cl) in class_of.iter().enumerate() {
        if reps[cl] == usize::MAX {
            reps[cl] = i;
        }
    }
    let tokens = reps
        .iter()
        .map(|&r| {
            let (c, u, a) = items[r];
            format!(
                "<{}|{}|{}>",
                shape.object_id(c),
                coweight.set(c)[u],
                diagram.set(c)[a]
            )
        })
        .collect();
    Ok(Quotient {
        items,
        class_of,
        n_classes,
        reps,
        tokens,
    })
}

impl Quotient {
    pub fn class_of_item(&self, c: Obj, u: usize, a: usize) -> usize {
        let idx = self
            .items
            .iter()
            .position(|&it| it == (c, u, a))
            .expect("item present in the quotient");
        self.class_of[idx]
    }
}

/// The representable weight hom(c, −) on a shape.
pub fn representable_weight(shape: &FinCategory, c: Obj) -> SetDiagram {
    let sets: Vec<Vec<String>> = shape
        .objects()
        .map(|y| {
            shape
                .hom(c, y)
                .iter()
                .map(|&m| shape.mor_id(m).to_owned())
                .collect()
        })
        .collect();
    let maps: Vec<Vec<usize>> = shape
        .morphisms()
        .map(|k| {
            let (y, y2) = (shape.src(k), shape.tgt(k));
            shape
                .hom(c, y)
                .iter()
                .map(|&m| {
                    let km = shape.compose(k, m).unwrap();
                    shape.hom(c, y2).iter().position(|&t| t == km).unwrap()
                })
                .collect()
        })
        .collect();
    SetDiagram::new(shape.clone(), sets, maps).expect("representable weight is functorial")
}

/// The co-representable weight hom(−, c), as a diagram on the opposite shape.
pub fn representable_coweight(shape: &FinCategory, c: Obj) -> SetDiagram {
    let op = opposite_fin(shape);
    let c_op = op.object_by_id(shape.object_id(c)).unwrap();
    representable_weight(&op, c_op)
}

// ---------------------------------------------------------------------------
// Matching and latching objects
// ---------------------------------------------------------------------------

/// A matching object: the set of compatible families over the morphisms from
/// `x` to strictly lower degree. The family components are the cone
/// projections.
#[derive(Clone, PartialEq, Debug)]
pub struct Matching {
    /// Morphisms x→z with deg(z) < deg(x), in canonical order.
    pub index: Vec<Mor>,
    /// Each family assigns an element of X(tgt f) to every index entry.
    pub families: Vec<Vec<usize>>,
    pub tokens: Vec<String>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    /// Cone projection at index entry `i`.
    pub fn project(&self, family: usize, i: usize) -> usize {
        self.families[family][i]
    }

    /// The family induced by an element of X(x), i.e. the canonical map
    /// X(x) → M_x X.
    pub fn induced_family(
        &self,
        cat: &DegreedCategory,
        diagram: &SetDiagram,
        elem: usize,
    ) -> Option<usize> {
        let family: Vec<usize> = self.index.iter().map(|&f| diagram.apply(f, elem)).collect();
        self.families.iter().position(|fam| {
            self.index.len() == family.len() && *fam == family && {
                let _ = cat;
                true
            }
        })
    }
}

/// The matching object of `diagram` at `x`: computed conically over the
/// slice of strictly-lower-degree morphisms, then re-computed as the
/// boundary-weighted limit and asserted equal.
pub fn matching_object(
    cat: &DegreedCategory,
    x: Obj,
    diagram: &SetDiagram,
    cap: u64,
) -> Result<Matching, Error> {
    let base = cat.base();
    if *diagram.shape() != *base {
        return Err(Error::NotAFunctor(
            "diagram does not live on the given category".to_owned(),
        ));
    }
    let delta = cat.degree(x);
    let index: Vec<Mor> = base
        .morphisms()
        .filter(|&f| base.src(f) == x && cat.degree(base.tgt(f)) < delta)
        .collect();
    let position = |m: Mor| index.iter().position(|&f| f == m).unwrap();

    // Compatibility constraints: family[k∘f] = X(k)(family[f]).
    let mut constraints: Vec<(usize, usize, Mor)> = Vec::new();
    for (i, &f) in index.iter().enumerate() {
        for k in base.morphisms() {
            if base.src(k) != base.tgt(f) || cat.degree(base.tgt(k)) >= delta {
                continue;
            }
            let kf = base.compose(k, f).unwrap();
            constraints.push((i, position(kf), k));
        }
    }
    let mut families = Vec::new();
    let mut assignment: Vec<Option<usize>> = vec![None; index.len()];
    let mut steps = 0u64;
    enumerate_families(
        0,
        &index,
        diagram,
        base,
        &constraints,
        &mut assignment,
        &mut families,
        &mut steps,
        cap,
        "matching object enumeration",
    )?;

    let tokens = families
        .iter()
        .map(|fam| {
            let parts: Vec<String> = index
                .iter()
                .zip(fam)
                .map(|(&f, &a)| diagram.set(base.tgt(f))[a].clone())
                .collect();
            format!("[{}]", parts.join(","))
        })
        .collect();
    let matching = Matching {
        index,
        families,
        tokens,
    };

    // Cross-check against the boundary-weighted limit.
    let (weight, boundaries) = boundary_weight(cat, x, delta);
    let weighted = weighted_limit(&weight, diagram, cap)?;
    let mut via_weight: Vec<Vec<usize>> = weighted
        .iter()
        .map(|family| {
            matching
                .index
                .iter()
                .map(|&f| {
                    let y = base.tgt(f);
                    let pair = crate::factorization::Factorization {
                        first: f,
                        second: base.identity(y),
                    };
                    let b = &boundaries[y.0];
                    let item = b.pairs.iter().position(|p| *p == pair).unwrap();
                    family[y.0][b.class_of[item]]
                })
                .collect()
        })
        .collect();
    via_weight.sort();
    let mut conical = matching.families.clone();
    conical.sort();
    assert_eq!(
        via_weight, conical,
        "matching object disagrees with its boundary-weighted form"
    );

    Ok(matching)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_families(
    depth: usize,
    index: &[Mor],
    diagram: &SetDiagram,
    base: &FinCategory,
    constraints: &[(usize, usize, Mor)],
    assignment: &mut Vec<Option<usize>>,
    families: &mut Vec<Vec<usize>>,
    steps: &mut u64,
    cap: u64,
    context: &str,
) -> Result<(), Error> {
    if depth == index.len() {
        families.push(assignment.iter().map(|a| a.unwrap()).collect());
        return Ok(());
    }
    let f = index[depth];
    'vals: for v in 0..diagram.set(base.tgt(f)).len() {
        *steps += 1;
        if *steps > cap {
            return Err(Error::SizeGuardExceeded {
                cap,
                context: context.to_owned(),
            });
        }
        assignment[depth] = Some(v);
        for &(i, j, k) in constraints {
            if i > depth || j > depth {
                continue;
            }
            if let (Some(a), Some(b)) = (assignment[i], assignment[j]) {
                if diagram.apply(k, a) != b {
                    continue 'vals;
                }
            }
        }
        enumerate_families(
            depth + 1,
            index,
            diagram,
            base,
            constraints,
            assignment,
            families,
            steps,
            cap,
            context,
        )?;
    }
    assignment[depth] = None;
    Ok(())
}

/// The boundary weight ∂_δ(x, −) materialized as a diagram on the base
/// shape, together with the per-object boundary homs that index it.
fn boundary_weight(cat: &DegreedCategory, x: Obj, delta: u32) -> (SetDiagram, Vec<BoundaryHom>) {
    let base = cat.base();
    let boundaries: Vec<BoundaryHom> = base
        .objects()
        .map(|y| boundary_hom(cat, x, y, delta))
        .collect();
    let sets: Vec<Vec<String>> = boundaries
        .iter()
        .map(|b| (0..b.n_classes).map(|i| format!("b{i}")).collect())
        .collect();
    let maps: Vec<Vec<usize>> = base
        .morphisms()
        .map(|k| {
            let (y, y2) = (base.src(k), base.tgt(k));
            let (by, by2) = (&boundaries[y.0], &boundaries[y2.0]);
            (0..by.n_classes)
                .map(|cl| {
                    let rep = by.pairs[by
                        .class_of
                        .iter()
                        .position(|&c| c == cl)
                        .expect("class is inhabited")];
                    let mapped = crate::factorization::Factorization {
                        first: rep.first,
                        second: base.compose(k, rep.second).unwrap(),
                    };
                    let idx = by2
                        .pairs
                        .iter()
                        .position(|p| *p == mapped)
                        .expect("post-composed pair stays below the bound");
                    by2.class_of[idx]
                })
                .collect()
        })
        .collect();
    let weight = SetDiagram::new(base.clone(), sets, maps).expect("boundary weight is functorial");
    (weight, boundaries)
}

/// A latching object: the quotient of all pairs (f: z→x, a ∈ X(z)) with
/// deg(z) < deg(x) by the naturality relation. The item-to-class map is the
/// cocone.
#[derive(Clone, PartialEq, Debug)]
pub struct Latching {
    /// Morphisms z→x with deg(z) < deg(x), in canonical order.
    pub index: Vec<Mor>,
    /// (index position, element of X(src f)).
    pub items: Vec<(usize, usize)>,
    pub class_of: Vec<usize>,
    pub n_classes: usize,
    pub reps: Vec<usize>,
    pub tokens: Vec<String>,
}

impl Latching {
    pub fn class_of_item(&self, index_pos: usize, elem: usize) -> usize {
        let idx = self
            .items
            .iter()
            .position(|&it| it == (index_pos, elem))
            .expect("latching item exists");
        self.class_of[idx]
    }

    /// The canonical map L_x X → X(x) sending a class to the value of its
    /// representative.
    pub fn to_value(&self, cat: &DegreedCategory, diagram: &SetDiagram, class: usize) -> usize {
        let (i, a) = self.items[self.reps[class]];
        let _ = cat;
        diagram.apply(self.index[i], a)
    }
}

pub fn latching_object(
    cat: &DegreedCategory,
    x: Obj,
    diagram: &SetDiagram,
) -> Result<Latching, Error> {
    let base = cat.base();
    if *diagram.shape() != *base {
        return Err(Error::NotAFunctor(
            "diagram does not live on the given category".to_owned(),
        ));
    }
    let delta = cat.degree(x);
    let index: Vec<Mor> = base
        .morphisms()
        .filter(|&f| base.tgt(f) == x && cat.degree(base.src(f)) < delta)
        .collect();
    let position = |m: Mor| index.iter().position(|&f| f == m).unwrap();
    let mut items = Vec::new();
    let mut offset = Vec::new();
    for (i, &f) in index.iter().enumerate() {
        offset.push(items.len());
        for a in 0..diagram.set(base.src(f)).len() {
            items.push((i, a));
        }
    }
    let flat = |i: usize, a: usize| offset[i] + a;
    let mut sets = DisjointSets::new(items.len());
    // (f∘k, a) ~ (f, X(k)(a)) for k into the source of f from lower degree.
    for (i, &f) in index.iter().enumerate() {
        for k in base.morphisms() {
            if base.tgt(k) != base.src(f) || cat.degree(base.src(k)) >= delta {
                continue;
            }
            let fk = base.compose(f, k).unwrap();
            let j = position(fk);
            for a in 0..diagram.set(base.src(k)).len() {
                sets.union(flat(j, a), flat(i, diagram.apply(k, a)));
            }
        }
    }
    let (class_of, n_classes) = sets.class_numbers();
    let mut reps = vec![usize::MAX; n_classes];
    for (idx, &cl) in class_of.iter().enumerate() {
        if reps[cl] == usize::MAX {
            reps[cl] = idx;
        }
    }
    let tokens = reps
        .iter()
        .map(|&r| {
            let (i, a) = items[r];
            format!(
                "L<{}|{}>",
                base.mor_id(index[i]),
                diagram.set(base.src(index[i]))[a]
            )
        })
        .collect();
    let latching = Latching {
        index,
        items,
        class_of,
        n_classes,
        reps,
        tokens,
    };

    // Cross-check: the boundary-coweighted colimit computes the same
    // partition of the same tagged items.
    let coweight = boundary_coweight(cat, x, delta);
    let coend = weighted_colimit(&coweight.0, diagram)?;
    assert_eq!(
        coend.n_classes, latching.n_classes,
        "latching object disagrees with its boundary-weighted form"
    );
    let mut seen = vec![usize::MAX; latching.n_classes];
    for (idx, &(i, a)) in latching.items.iter().enumerate() {
        let f = latching.index[i];
        let z = base.src(f);
        let b = &coweight.1[z.0];
        let pair = crate::factorization::Factorization {
            first: base.identity(z),
            second: f,
        };
        let item = b.pairs.iter().position(|p| *p == pair).unwrap();
        let coend_class = coend.class_of_item(z, b.class_of[item], a);
        let mine = latching.class_of[idx];
        if seen[mine] == usize::MAX {
            seen[mine] = coend_class;
        }
        assert_eq!(
            seen[mine], coend_class,
            "latching class split by the boundary-weighted form"
        );
    }

    Ok(latching)
}

/// The boundary coweight ∂_δ(−, x) as a diagram on the opposite shape.
fn boundary_coweight(cat: &DegreedCategory, x: Obj, delta: u32) -> (SetDiagram, Vec<BoundaryHom>) {
    let base = cat.base();
    let op = opposite_fin(base);
    let boundaries: Vec<BoundaryHom> = base
        .objects()
        .map(|y| boundary_hom(cat, y, x, delta))
        .collect();
    let sets: Vec<Vec<String>> = boundaries
        .iter()
        .map(|b| (0..b.n_classes).map(|i| format!("b{i}")).collect())
        .collect();
    let maps: Vec<Vec<usize>> = op
        .morphisms()
        .map(|k_op| {
            // k_op: y → y' in the opposite shape is k: y' → y in the base.
            let k = base.mor_by_id(op.mor_id(k_op)).unwrap();
            let (y, y2) = (base.tgt(k), base.src(k));
            let (by, by2) = (&boundaries[y.0], &boundaries[y2.0]);
            (0..by.n_classes)
                .map(|cl| {
                    let rep = by.pairs[by
                        .class_of
                        .iter()
                        .position(|&c| c == cl)
                        .expect("class is inhabited")];
                    let mapped = crate::factorization::Factorization {
                        first: base.compose(rep.first, k).unwrap(),
                        second: rep.second,
                    };
                    let idx = by2
                        .pairs
                        .iter()
                        .position(|p| *p == mapped)
                        .expect("pre-composed pair stays below the bound");
                    by2.class_of[idx]
                })
                .collect()
        })
        .collect();
    let weight = SetDiagram::new(op, sets, maps).expect("boundary coweight is functorial");
    (weight, boundaries)
}

/// The limit of a diagram over the graph of nonidentity down-morphisms out
/// of `x` (vertices) and down-triangles (edges). On a Reedy category this is
/// the matching object; on a merely almost-Reedy one it can differ.
pub fn graph_limit(
    cat: &DegreedCategory,
    x: Obj,
    diagram: &SetDiagram,
) -> Result<Vec<Vec<usize>>, Error> {
    let base = cat.base();
    if *diagram.shape() != *base {
        return Err(Error::NotAFunctor(
            "diagram does not live on the given category".to_owned(),
        ));
    }
    let classes = basic_classes(cat);
    let index: Vec<Mor> = base
        .morphisms()
        .filter(|&g| base.src(g) == x && classes.down[g.0] && !base.is_identity(g))
        .collect();
    let mut constraints: Vec<(usize, usize, Mor)> = Vec::new();
    for (i, &g) in index.iter().enumerate() {
        for k in base.morphisms() {
            if !classes.down[k.0] || base.src(k) != base.tgt(g) {
                continue;
            }
            let kg = base.compose(k, g).unwrap();
            if let Some(j) = index.iter().position(|&h| h == kg) {
                constraints.push((i, j, k));
            }
        }
    }
    let mut families = Vec::new();
    let mut assignment = vec![None; index.len()];
    let mut steps = 0u64;
    enumerate_families(
        0,
        &index,
        diagram,
        base,
        &constraints,
        &mut assignment,
        &mut families,
        &mut steps,
        u64::MAX,
        "graph limit enumeration",
    )?;
    Ok(families)
}

// ---------------------------------------------------------------------------
// Abstract bigluing data and collages
// ---------------------------------------------------------------------------

/// A pair of profunctors with a composition action: the unit of the collage
/// construction. `u` runs from the new stratum `d` into `c` (sets U(c, d)),
/// `w` runs the other way (sets W(d, c)), and `alpha` interprets a w-after-u
/// pair as a morphism of `c`.
#[derive(Clone, PartialEq, Debug)]
pub struct AbstractBigluingData {
    pub c: DegreedCategory,
    pub d: FinCategory,
    /// Profunctor with source D, target C: entries U(c, d).
    pub u: Profunctor,
    /// Profunctor with source C, target D: entries W(d, c).
    pub w: Profunctor,
    /// alpha[d][c_from][c_to][w_elem][u_elem]: the composite morphism
    /// c_from → c_to of w ∈ W(d, c_to) after u ∈ U(c_from, d).
    pub alpha: Vec<Vec<Vec<Vec<Vec<Mor>>>>>,
}

impl AbstractBigluingData {
    pub fn new(
        c: DegreedCategory,
        d: FinCategory,
        u: Profunctor,
        w: Profunctor,
        alpha: Vec<Vec<Vec<Vec<Vec<Mor>>>>>,
    ) -> Result<Self, Error> {
        let abd = AbstractBigluingData { c, d, u, w, alpha };
        abd.validate()?;
        Ok(abd)
    }

    pub fn alpha_at(&self, d: Obj, c_from: Obj, c_to: Obj, w_elem: usize, u_elem: usize) -> Mor {
        self.alpha[d.0][c_from.0][c_to.0][w_elem][u_elem]
    }

    fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::InvalidBigluingData(msg));
        let cb = self.c.base();
        if self.u.source() != &self.d || self.u.target() != cb {
            return bad("u must be a profunctor from the new stratum to the base".to_owned());
        }
        if self.w.source() != cb || self.w.target() != &self.d {
            return bad("w must be a profunctor from the base to the new stratum".to_owned());
        }
        // Shape and typing of alpha.
        if self.alpha.len() != self.d.n_objects() {
            return bad("alpha must be indexed by the stratum objects".to_owned());
        }
        for d in self.d.objects() {
            let at_d = &self.alpha[d.0];
            if at_d.len() != cb.n_objects() || at_d.iter().any(|row| row.len() != cb.n_objects()) {
                return bad("alpha must be indexed by pairs of base objects".to_owned());
            }
            for c_from in cb.objects() {
                for c_to in cb.objects() {
                    let table = &at_d[c_from.0][c_to.0];
                    let (nw, nu) = (self.w.set(d, c_to).len(), self.u.set(c_from, d).len());
                    if table.len() != nw || table.iter().any(|row| row.len() != nu) {
                        return bad(format!(
                            "alpha at ({}, {}, {}) has the wrong shape",
                            self.d.object_id(d),
                            cb.object_id(c_from),
                            cb.object_id(c_to)
                        ));
                    }
                    for row in table {
                        for &m in row {
                            if cb.src(m) != c_from || cb.tgt(m) != c_to {
                                return bad(format!(
                                    "alpha value `{}` has the wrong endpoints",
                                    cb.mor_id(m)
                                ));
                            }
                        }
                    }
                }
            }
        }
        // Balance over the stratum: alpha(w·l, u0) = alpha(w, l·u0).
        for l in self.d.morphisms() {
            let (d0, d1) = (self.d.src(l), self.d.tgt(l));
            for c_from in cb.objects() {
                for c_to in cb.objects() {
                    for w_elem in 0..self.w.set(d1, c_to).len() {
                        let wl = self.w.act_target(l, c_to, w_elem);
                        for u0 in 0..self.u.set(c_from, d0).len() {
                            let lu = self.u.act_source(l, c_from, u0);
                            if self.alpha_at(d0, c_from, c_to, wl, u0)
                                != self.alpha_at(d1, c_from, c_to, w_elem, lu)
                            {
                                return bad(format!(
                                    "alpha is not balanced over `{}`",
                                    self.d.mor_id(l)
                                ));
                            }
                        }
                    }
                }
            }
        }
        // Naturality in the base: pre- and post-composition.
        for d in self.d.objects() {
            for k in cb.morphisms() {
                let (c0, c1) = (cb.src(k), cb.tgt(k));
                // Precomposition: alpha(w, u·k) = alpha(w, u) ∘ k.
                for c_to in cb.objects() {
                    for w_elem in 0..self.w.set(d, c_to).len() {
                        for u_elem in 0..self.u.set(c1, d).len() {
                            let uk = self.u.act_target(k, d, u_elem);
                            let lhs = self.alpha_at(d, c0, c_to, w_elem, uk);
                            let rhs = cb
                                .compose(self.alpha_at(d, c1, c_to, w_elem, u_elem), k)
                                .unwrap();
                            if lhs != rhs {
                                return bad(format!(
                                    "alpha is not natural under precomposition by `{}`",
                                    cb.mor_id(k)
                                ));
                            }
                        }
                    }
                }
                // Postcomposition: alpha(k·w, u) = k ∘ alpha(w, u).
                for c_from in cb.objects() {
                    for w_elem in 0..self.w.set(d, c0).len() {
                        let kw = self.w.act_source(k, d, w_elem);
                        for u_elem in 0..self.u.set(c_from, d).len() {
                            let lhs = self.alpha_at(d, c_from, c1, kw, u_elem);
                            let rhs = cb
                                .compose(k, self.alpha_at(d, c_from, c0, w_elem, u_elem))
                                .unwrap();
                            if lhs != rhs {
                                return bad(format!(
                                    "alpha is not natural under postcomposition by `{}`",
                                    cb.mor_id(k)
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Where each collage morphism comes from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MorProvenance {
    FromC(String),
    FromD(String),
    FromU {
        c: String,
        d: String,
        elem: String,
    },
    FromW {
        d: String,
        c: String,
        elem: String,
    },
    /// Tensor class, named by its least representative (c, u element, w
    /// element).
    Tensor {
        c: String,
        u_elem: String,
        w_elem: String,
    },
}

/// The collage category of abstract bigluing data, with provenance metadata
/// for every morphism.
#[derive(Clone, Debug)]
pub struct Collage {
    pub category: DegreedCategory,
    pub c_objects: Vec<String>,
    pub d_objects: Vec<String>,
    pub provenance: BTreeMap<String, MorProvenance>,
}

pub fn collage(abd: &AbstractBigluingData) -> Result<Collage, Error> {
    let cb = abd.c.base();
    let db = &abd.d;
    let bad = |msg: String| Err(Error::InvalidBigluingData(msg));

    // Object and morphism identifier pools must stay disjoint.
    let mut object_rows: Vec<(String, u32)> = Vec::new();
    let new_degree = abd.c.max_degree().map_or(0, |d| d + 1);
    for c in cb.objects() {
        object_rows.push((cb.object_id(c).to_owned(), abd.c.degree(c)));
    }
    for d in db.objects() {
        object_rows.push((db.object_id(d).to_owned(), new_degree));
    }
    {
        let mut ids: Vec<&str> = object_rows.iter().map(|(id, _)| id.as_str()).collect();
        ids.sort();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return bad("object identifiers of the base and the stratum collide".to_owned());
        }
    }

    #[derive(Clone, PartialEq, Eq, Debug)]
    enum Part {
        C(Mor),
        D(Mor),
        U { c: Obj, d: Obj, elem: usize },
        W { d: Obj, c: Obj, elem: usize },
        T { d: Obj, d2: Obj, class: usize },
    }

    // Tensor classes per stratum pair: items (c, u ∈ U(c, d2), w ∈ W(d, c)).
    struct Tensor {
        items: Vec<(Obj, usize, usize)>,
        class_of: Vec<usize>,
        n_classes: usize,
        reps: Vec<usize>,
    }
    let mut tensors: BTreeMap<(usize, usize), Tensor> = BTreeMap::new();
    for d in db.objects() {
        for d2 in db.objects() {
            let mut items = Vec::new();
            for c in cb.objects() {
                for u in 0..abd.u.set(c, d2).len() {
                    for w in 0..abd.w.set(d, c).len() {
                        items.push((c, u, w));
                    }
                }
            }
            let mut sets = DisjointSets::new(items.len());
            let at = |items: &[(Obj, usize, usize)], key: (Obj, usize, usize)| {
                items.iter().position(|&it| it == key).unwrap()
            };
            // (u*·k, w) ~ (u*, k·w) for k: c → c*.
            for k in cb.morphisms() {
                let (c, cstar) = (cb.src(k), cb.tgt(k));
                for ustar in 0..abd.u.set(cstar, d2).len() {
                    let uk = abd.u.act_target(k, d2, ustar);
                    for w in 0..abd.w.set(d, c).len() {
                        let kw = abd.w.act_source(k, d, w);
                        sets.union(at(&items, (c, uk, w)), at(&items, (cstar, ustar, kw)));
                    }
                }
            }
            let (class_of, n_classes) = sets.class_numbers();
            let mut reps = vec![usize::MAX; n_classes];
            for (i, &cl) in class_of.iter().enumerate() {
                if reps[cl] == usize::MAX {
                    reps[cl] = i;
                }
            }
            tensors.insert(
                (d.0, d2.0),
                Tensor {
                    items,
                    class_of,
                    n_classes,
                    reps,
                },
            );
        }
    }

    // Names for every morphism of the collage.
    let mut parts: Vec<Part> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut provenance: BTreeMap<String, MorProvenance> = BTreeMap::new();
    for m in cb.morphisms() {
        parts.push(Part::C(m));
        names.push(cb.mor_id(m).to_owned());
        provenance.insert(
            cb.mor_id(m).to_owned(),
            MorProvenance::FromC(cb.mor_id(m).to_owned()),
        );
    }
    for m in db.morphisms() {
        parts.push(Part::D(m));
        names.push(db.mor_id(m).to_owned());
        provenance.insert(
            db.mor_id(m).to_owned(),
            MorProvenance::FromD(db.mor_id(m).to_owned()),
        );
    }
    for c in cb.objects() {
        for d in db.objects() {
            for (elem, tok) in abd.u.set(c, d).iter().enumerate() {
                let name = format!("u({},{},{})", cb.object_id(c), db.object_id(d), tok);
                parts.push(Part::U { c, d, elem });
                names.push(name.clone());
                provenance.insert(
                    name,
                    MorProvenance::FromU {
                        c: cb.object_id(c).to_owned(),
                        d: db.object_id(d).to_owned(),
                        elem: tok.clone(),
                    },
                );
            }
        }
    }
    for d in db.objects() {
        for c in cb.objects() {
            for (elem, tok) in abd.w.set(d, c).iter().enumerate() {
                let name = format!("w({},{},{})", db.object_id(d), cb.object_id(c), tok);
                parts.push(Part::W { d, c, elem });
                names.push(name.clone());
                provenance.insert(
                    name,
                    MorProvenance::FromW {
                        d: db.object_id(d).to_owned(),
                        c: cb.object_id(c).to_owned(),
                        elem: tok.clone(),
                    },
                );
            }
        }
    }
    for ((d, d2), tensor) in &tensors {
        for class in 0..tensor.n_classes {
            let (c, u, w) = tensor.items[tensor.reps[class]];
            let name = format!(
                "t({},{},{},{},{})",
                db.object_id(Obj(*d)),
                db.object_id(Obj(*d2)),
                cb.object_id(c),
                abd.u.set(c, Obj(*d2))[u],
                abd.w.set(Obj(*d), c)[w],
            );
            parts.push(Part::T {
                d: Obj(*d),
                d2: Obj(*d2),
                class,
            });
            names.push(name.clone());
            provenance.insert(
                name,
                MorProvenance::Tensor {
                    c: cb.object_id(c).to_owned(),
                    u_elem: abd.u.set(c, Obj(*d2))[u].clone(),
                    w_elem: abd.w.set(Obj(*d), c)[w].clone(),
                },
            );
        }
    }
    {
        let mut sorted = names.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return bad("morphism identifiers collide in the collage".to_owned());
        }
    }

    let endpoints = |p: &Part| -> (String, String) {
        match *p {
            Part::C(m) => (
                cb.object_id(cb.src(m)).to_owned(),
                cb.object_id(cb.tgt(m)).to_owned(),
            ),
            Part::D(m) => (
                db.object_id(db.src(m)).to_owned(),
                db.object_id(db.tgt(m)).to_owned(),
            ),
            Part::U { c, d, .. } => (cb.object_id(c).to_owned(), db.object_id(d).to_owned()),
            Part::W { d, c, .. } => (db.object_id(d).to_owned(), cb.object_id(c).to_owned()),
            Part::T { d, d2, .. } => (db.object_id(d).to_owned(), db.object_id(d2).to_owned()),
        }
    };

    let name_of = |p: &Part| -> String {
        let idx = parts.iter().position(|q| q == p).unwrap();
        names[idx].clone()
    };
    let tensor_class = |d: Obj, d2: Obj, c: Obj, u: usize, w: usize| -> Part {
        let tensor = &tensors[&(d.0, d2.0)];
        let idx = tensor.items.iter().position(|&it| it == (c, u, w)).unwrap();
        Part::T {
            d,
            d2,
            class: tensor.class_of[idx],
        }
    };

    // Composition by case analysis on the parts.
    let compose_parts = |g: &Part, f: &Part| -> Part {
        match (g, f) {
            (Part::C(g), Part::C(f)) => Part::C(cb.compose(*g, *f).unwrap()),
            (Part::D(g), Part::D(f)) => Part::D(db.compose(*g, *f).unwrap()),
            // u ∘ k for k in the base.
            (Part::U { c: _, d, elem }, Part::C(k)) => Part::U {
                c: cb.src(*k),
                d: *d,
                elem: abd.u.act_target(*k, *d, *elem),
            },
            // l ∘ u for l in the stratum.
            (Part::D(l), Part::U { c, d: _, elem }) => Part::U {
                c: *c,
                d: db.tgt(*l),
                elem: abd.u.act_source(*l, *c, *elem),
            },
            // t ∘ u: u' · alpha(w', u).
            (Part::T { d: _, d2, class }, Part::U { c, d, elem }) => {
                let tensor = &tensors[&(d.0, d2.0)];
                let (ct, ut, wt) = tensor.items[tensor.reps[*class]];
                let a = abd.alpha_at(*d, *c, ct, wt, *elem);
                Part::U {
                    c: *c,
                    d: *d2,
                    elem: comp_act_u(abd, *d2, ct, ut, a),
                }
            }
            // w ∘ l for l in the stratum.
            (Part::W { d: _, c, elem }, Part::D(l)) => Part::W {
                d: db.src(*l),
                c: *c,
                elem: abd.w.act_target(*l, *c, *elem),
            },
            // k ∘ w for k in the base.
            (Part::C(k), Part::W { d, c: _, elem }) => Part::W {
                d: *d,
                c: cb.tgt(*k),
                elem: abd.w.act_source(*k, *d, *elem),
            },
            // w ∘ u: the alpha composite in the base.
            (Part::W { d, c: c2, elem: w }, Part::U { c, d: _, elem: u }) => {
                Part::C(abd.alpha_at(*d, *c, *c2, *w, *u))
            }
            // u ∘ w: a tensor class.
            (Part::U { c, d: d2, elem: u }, Part::W { d, c: _, elem: w }) => {
                tensor_class(*d, *d2, *c, *u, *w)
            }
            // w ∘ t: act on the w side through alpha.
            (
                Part::W {
                    d: _,
                    c: c2,
                    elem: w,
                },
                Part::T { d, d2, class },
            ) => {
                let tensor = &tensors[&(d.0, d2.0)];
                let (ct, ut, wt) = tensor.items[tensor.reps[*class]];
                let a = abd.alpha_at(*d2, ct, *c2, *w, ut);
                Part::W {
                    d: *d,
                    c: *c2,
                    elem: comp_act_w(abd, *d, ct, wt, a),
                }
            }
            // l ∘ t and t ∘ l: act on the representative.
            (Part::D(l), Part::T { d, d2, class }) => {
                let tensor = &tensors[&(d.0, d2.0)];
                let (c, u, w) = tensor.items[tensor.reps[*class]];
                tensor_class(*d, db.tgt(*l), c, abd.u.act_source(*l, c, u), w)
            }
            (Part::T { d: _, d2, class }, Part::D(l)) => {
                let d2_ = *d2;
                let tensor = &tensors[&(db.tgt(*l).0, d2_.0)];
                let (c, u, w) = tensor.items[tensor.reps[*class]];
                tensor_class(db.src(*l), d2_, c, u, abd.w.act_target(*l, c, w))
            }
            // t ∘ t: contract through alpha.
            (
                Part::T {
                    d: _,
                    d2: d_out,
                    class: c2,
                },
                Part::T {
                    d: d_in,
                    d2: d_mid,
                    class: c1,
                },
            ) => {
                let t2 = &tensors[&(d_mid.0, d_out.0)];
                let (cb2, u2, w2) = t2.items[t2.reps[*c2]];
                let t1 = &tensors[&(d_in.0, d_mid.0)];
                let (cb1, u1, w1) = t1.items[t1.reps[*c1]];
                let a = abd.alpha_at(*d_mid, cb1, cb2, w2, u1);
                tensor_class(*d_in, *d_out, cb1, comp_act_u(abd, *d_out, cb2, u2, a), w1)
            }
            _ => unreachable!("non-composable parts"),
        }
    };

    // Assemble the presentation.
    let mut morphisms = Vec::new();
    let mut identities = BTreeMap::new();
    for (p, name) in parts.iter().zip(&names) {
        let (src, tgt) = endpoints(p);
        morphisms.push(crate::fincat::RawMorphism {
            id: name.clone(),
            src,
            tgt,
        });
    }
    for c in cb.objects() {
        identities.insert(
            cb.object_id(c).to_owned(),
            cb.mor_id(cb.identity(c)).to_owned(),
        );
    }
    for d in db.objects() {
        identities.insert(
            db.object_id(d).to_owned(),
            db.mor_id(db.identity(d)).to_owned(),
        );
    }
    let mut composition = Vec::new();
    for (gp, gname) in parts.iter().zip(&names) {
        for (fp, fname) in parts.iter().zip(&names) {
            let (fs, ft) = endpoints(fp);
            let (gs, _) = endpoints(gp);
            let _ = fs;
            if ft != gs {
                continue;
            }
            let c = compose_parts(gp, fp);
            composition.push((gname.clone(), fname.clone(), name_of(&c)));
        }
    }
    let raw = crate::fincat::RawCategory {
        objects: object_rows
            .into_iter()
            .map(|(id, degree)| crate::fincat::RawObject { id, degree })
            .collect(),
        morphisms,
        identities,
        composition,
    };
    let category = crate::fincat::validate(&raw)
        .map_err(|e| Error::InvalidBigluingData(format!("collage failed validation: {e}")))?;
    Ok(Collage {
        category,
        c_objects: cb.objects().map(|c| cb.object_id(c).to_owned()).collect(),
        d_objects: db.objects().map(|d| db.object_id(d).to_owned()).collect(),
        provenance,
    })
}

/// Right action of a base morphism on a u element: u · a for a: c → c'.
fn comp_act_u(abd: &AbstractBigluingData, d: Obj, c_from: Obj, u: usize, a: Mor) -> usize {
    let _ = c_from;
    abd.u.act_target(a, d, u)
}

/// Left action of a base morphism on a w element: a · w.
fn comp_act_w(abd: &AbstractBigluingData, d: Obj, c_from: Obj, w: usize, a: Mor) -> usize {
    let _ = c_from;
    abd.w.act_source(a, d, w)
}

/// Split a category at a degree and, if the recognition condition holds,
/// recover abstract bigluing data whose collage is isomorphic to it over the
/// identity on objects.
pub fn recognize_collage(
    e: &DegreedCategory,
    split_degree: u32,
) -> Result<AbstractBigluingData, Error> {
    let base = e.base();
    let c_cat = crate::fincat::full_subcategory(e, split_degree);
    let d_objs: Vec<Obj> = base
        .objects()
        .filter(|&x| e.degree(x) >= split_degree)
        .collect();
    let is_d_obj = |x: Obj| e.degree(x) >= split_degree;

    // Candidate stratum morphisms: those between stratum objects that do not
    // factor through the low part.
    let factors_through_c = |f: Mor| {
        crate::factorization::factorizations_of(e, f)
            .iter()
            .any(|fact| e.degree(base.tgt(fact.first)) < split_degree)
    };
    let mut candidates = Vec::new();
    for f in base.morphisms() {
        if is_d_obj(base.src(f)) && is_d_obj(base.tgt(f)) && !factors_through_c(f) {
            candidates.push(f);
        }
    }
    for &x in &d_objs {
        if !candidates.contains(&base.identity(x)) {
            return Err(Error::NotACollage(format!(
                "identity of `{}` factors through the low part",
                base.object_id(x)
            )));
        }
    }
    for &g in &candidates {
        for &f in &candidates {
            if let Some(gf) = base.compose(g, f) {
                if !candidates.contains(&gf) {
                    return Err(Error::NotACollage(format!(
                        "stratum candidates are not closed under composition: `{}` ∘ `{}`",
                        base.mor_id(g),
                        base.mor_id(f)
                    )));
                }
            }
        }
    }
    // Condition (*): morphisms between stratum objects that do factor through
    // the low part have connected categories of such factorizations.
    for f in base.morphisms() {
        if !is_d_obj(base.src(f)) || !is_d_obj(base.tgt(f)) || candidates.contains(&f) {
            continue;
        }
        let comps = factorization_components(e, f, split_degree);
        if comps.n_components != 1 {
            return Err(Error::NotACollage(format!(
                "factorizations of `{}` through the low part form {} components",
                base.mor_id(f),
                comps.n_components
            )));
        }
    }

    let d_cat = crate::fincat::subcategory_on(e, &d_objs, &candidates)?;
    let db = d_cat.base().clone();
    let cb = c_cat.base();
    let obj_in_e = |id: &str| base.object_by_id(id).unwrap();
    let mor_in_e = |id: &str| base.mor_by_id(id).unwrap();

    // U(c, d) = E(c, d); W(d, c) = E(d, c), with actions by composition.
    let hom_tokens = |x: Obj, y: Obj| -> Vec<String> {
        base.hom(x, y)
            .iter()
            .map(|&m| base.mor_id(m).to_owned())
            .collect()
    };
    let u_elements: Vec<Vec<Vec<String>>> = cb
        .objects()
        .map(|c| {
            db.objects()
                .map(|d| hom_tokens(obj_in_e(cb.object_id(c)), obj_in_e(db.object_id(d))))
                .collect()
        })
        .collect();
    // Left action of U: stratum morphisms postcompose.
    let u_left: Vec<Vec<Vec<usize>>> = db
        .morphisms()
        .map(|l| {
            let le = mor_in_e(db.mor_id(l));
            cb.objects()
                .map(|c| {
                    let ce = obj_in_e(cb.object_id(c));
                    base.hom(ce, base.src(le))
                        .iter()
                        .map(|&m| {
                            let lm = base.compose(le, m).unwrap();
                            base.hom(ce, base.tgt(le))
                                .iter()
                                .position(|&t| t == lm)
                                .unwrap()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    // Right action of U: base morphisms precompose.
    let u_right: Vec<Vec<Vec<usize>>> = cb
        .morphisms()
        .map(|k| {
            let ke = mor_in_e(cb.mor_id(k));
            db.objects()
                .map(|d| {
                    let de = obj_in_e(db.object_id(d));
                    base.hom(base.tgt(ke), de)
                        .iter()
                        .map(|&m| {
                            let mk = base.compose(m, ke).unwrap();
                            base.hom(base.src(ke), de)
                                .iter()
                                .position(|&t| t == mk)
                                .unwrap()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let u = Profunctor::new(db.clone(), cb.clone(), u_elements, u_left, u_right)?;

    let w_elements: Vec<Vec<Vec<String>>> = db
        .objects()
        .map(|d| {
            cb.objects()
                .map(|c| hom_tokens(obj_in_e(db.object_id(d)), obj_in_e(cb.object_id(c))))
                .collect()
        })
        .collect();
    // Left action of W: base morphisms postcompose.
    let w_left: Vec<Vec<Vec<usize>>> = cb
        .morphisms()
        .map(|k| {
            let ke = mor_in_e(cb.mor_id(k));
            db.objects()
                .map(|d| {
                    let de = obj_in_e(db.object_id(d));
                    base.hom(de, base.src(ke))
                        .iter()
                        .map(|&m| {
                            let km = base.compose(ke, m).unwrap();
                            base.hom(de, base.tgt(ke))
                                .iter()
                                .position(|&t| t == km)
                                .unwrap()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    // Right action of W: stratum morphisms precompose.
    let w_right: Vec<Vec<Vec<usize>>> = db
        .morphisms()
        .map(|l| {
            let le = mor_in_e(db.mor_id(l));
            cb.objects()
                .map(|c| {
                    let ce = obj_in_e(cb.object_id(c));
                    base.hom(base.tgt(le), ce)
                        .iter()
                        .map(|&m| {
                            let ml = base.compose(m, le).unwrap();
                            base.hom(base.src(le), ce)
                                .iter()
                                .position(|&t| t == ml)
                                .unwrap()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let w = Profunctor::new(cb.clone(), db.clone(), w_elements, w_left, w_right)?;

    // Alpha is composition in E.
    let alpha: Vec<Vec<Vec<Vec<Vec<Mor>>>>> = db
        .objects()
        .map(|d| {
            let de = obj_in_e(db.object_id(d));
            cb.objects()
                .map(|c_from| {
                    let cfe = obj_in_e(cb.object_id(c_from));
                    cb.objects()
                        .map(|c_to| {
                            let cte = obj_in_e(cb.object_id(c_to));
                            base.hom(de, cte)
                                .iter()
                                .map(|&wm| {
                                    base.hom(cfe, de)
                                        .iter()
                                        .map(|&um| {
                                            let comp = base.compose(wm, um).unwrap();
                                            cb.mor_by_id(base.mor_id(comp)).unwrap()
                                        })
                                        .collect()
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    AbstractBigluingData::new(c_cat, db, u, w, alpha)
}

// ---------------------------------------------------------------------------
// Bigluing split and merge
// ---------------------------------------------------------------------------

/// The concrete bigluing presentation of a diagram on a collage: its
/// restrictions to the base and the stratum, with the comparison maps through
/// the weighted colimit and limit.
#[derive(Clone, PartialEq, Debug)]
pub struct BigluingDiagram {
    pub m: SetDiagram,
    pub n: SetDiagram,
    /// phi[d]: coend classes of (U ⊗ M)(d) → N(d).
    pub phi: Vec<Vec<usize>>,
    /// gamma[d][b][c] = assignments W(d, c) → M(c) for each b ∈ N(d).
    pub gamma: Vec<Vec<Vec<Vec<usize>>>>,
}

/// The coend (U ⊗ M)(d), reusing the weighted colimit over the base.
fn u_coend(abd: &AbstractBigluingData, m: &SetDiagram, d: Obj) -> Result<Quotient, Error> {
    let cb = abd.c.base();
    let op = opposite_fin(cb);
    let sets: Vec<Vec<String>> = cb.objects().map(|c| abd.u.set(c, d).to_vec()).collect();
    let maps: Vec<Vec<usize>> = op
        .morphisms()
        .map(|k_op| {
            let k = cb.mor_by_id(op.mor_id(k_op)).unwrap();
            // k: c → c' in the base acts U(c', d) → U(c, d).
            (0..abd.u.set(cb.tgt(k), d).len())
                .map(|u| abd.u.act_target(k, d, u))
                .collect()
        })
        .collect();
    let coweight = SetDiagram::new(op, sets, maps)?;
    weighted_colimit(&coweight, m)
}

/// Restrict a diagram on the collage to the base and the stratum and compute
/// the comparison maps. The composite `gamma ∘ phi` is asserted equal to the
/// canonical map induced by alpha.
pub fn biglue_split(
    coll: &Collage,
    abd: &AbstractBigluingData,
    x: &SetDiagram,
) -> Result<BigluingDiagram, Error> {
    let eb = coll.category.base();
    if *x.shape() != *eb {
        return Err(Error::NotAFunctor(
            "diagram does not live on the collage".to_owned(),
        ));
    }
    let cb = abd.c.base();
    let db = &abd.d;
    let e_obj = |id: &str| eb.object_by_id(id).unwrap();
    let e_mor = |id: &str| eb.mor_by_id(id).unwrap();

    // Restriction to the base.
    let m = SetDiagram::new(
        cb.clone(),
        cb.objects()
            .map(|c| x.set(e_obj(cb.object_id(c))).to_vec())
            .collect(),
        cb.morphisms()
            .map(|k| x.map(e_mor(cb.mor_id(k))).to_vec())
            .collect(),
    )?;
    // Restriction to the stratum.
    let n = SetDiagram::new(
        db.clone(),
        db.objects()
            .map(|d| x.set(e_obj(db.object_id(d))).to_vec())
            .collect(),
        db.morphisms()
            .map(|l| x.map(e_mor(db.mor_id(l))).to_vec())
            .collect(),
    )?;

    let u_mor_in_e = |c: Obj, d: Obj, elem: usize| {
        e_mor(&format!(
            "u({},{},{})",
            cb.object_id(c),
            db.object_id(d),
            abd.u.set(c, d)[elem]
        ))
    };
    let w_mor_in_e = |d: Obj, c: Obj, elem: usize| {
        e_mor(&format!(
            "w({},{},{})",
            db.object_id(d),
            cb.object_id(c),
            abd.w.set(d, c)[elem]
        ))
    };

    let mut phi = Vec::new();
    let mut gamma = Vec::new();
    for d in db.objects() {
        let coend = u_coend(abd, &m, d)?;
        let mut phi_d = vec![usize::MAX; coend.n_classes];
        for (idx, &(c, u, a)) in coend.items.iter().enumerate() {
            let value = x.apply(u_mor_in_e(c, d, u), a);
            let slot = &mut phi_d[coend.class_of[idx]];
            if *slot == usize::MAX {
                *slot = value;
            } else if *slot != value {
                return Err(Error::InternalInvariantBroken(
                    "diagram does not descend to the coend".to_owned(),
                ));
            }
        }
        phi.push(phi_d);

        let gamma_d: Vec<Vec<Vec<usize>>> = (0..n.set(d).len())
            .map(|b| {
                cb.objects()
                    .map(|c| {
                        (0..abd.w.set(d, c).len())
                            .map(|w| x.apply(w_mor_in_e(d, c, w), b))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        gamma.push(gamma_d);
    }
    let out = BigluingDiagram { m, n, phi, gamma };
    // gamma ∘ phi must be the canonical alpha-induced comparison.
    if let Err(e) = check_factorization(abd, &out) {
        return Err(Error::InternalInvariantBroken(format!(
            "split violated the canonical factorization: {e}"
        )));
    }
    Ok(out)
}

/// Check that `gamma ∘ phi` equals the canonical map induced by alpha.
fn check_factorization(abd: &AbstractBigluingData, bd: &BigluingDiagram) -> Result<(), Error> {
    let cb = abd.c.base();
    for d in abd.d.objects() {
        let coend = u_coend(abd, &bd.m, d)?;
        for (idx, &(c, u, a)) in coend.items.iter().enumerate() {
            let b = bd.phi[d.0][coend.class_of[idx]];
            for c2 in cb.objects() {
                for w in 0..abd.w.set(d, c2).len() {
                    let via_gamma = bd.gamma[d.0][b][c2.0][w];
                    let via_alpha = bd.m.apply(abd.alpha_at(d, c, c2, w, u), a);
                    if via_gamma != via_alpha {
                        return Err(Error::FactorizationMismatch(format!(
                            "at stratum object `{}`, base pair ({}, w #{w})",
                            abd.d.object_id(d),
                            cb.object_id(c2)
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Rebuild a diagram on the collage from its bigluing presentation. Fails
/// with `FactorizationMismatch` when `gamma ∘ phi` is not the canonical map.
pub fn biglue_merge(
    coll: &Collage,
    abd: &AbstractBigluingData,
    bd: &BigluingDiagram,
) -> Result<SetDiagram, Error> {
    let cb = abd.c.base();
    let db = &abd.d;
    if *bd.m.shape() != *cb || *bd.n.shape() != *db {
        return Err(Error::NotFunctorial(
            "bigluing components do not live on the expected shapes".to_owned(),
        ));
    }
    // Naturality of phi in the stratum.
    let coends: Vec<Quotient> = db
        .objects()
        .map(|d| u_coend(abd, &bd.m, d))
        .collect::<Result<_, _>>()?;
    for l in db.morphisms() {
        let (d, d2) = (db.src(l), db.tgt(l));
        if bd.phi[d.0].len() != coends[d.0].n_classes {
            return Err(Error::NotFunctorial("phi has the wrong shape".to_owned()));
        }
        for (idx, &(c, u, a)) in coends[d.0].items.iter().enumerate() {
            let lhs = bd.n.apply(l, bd.phi[d.0][coends[d.0].class_of[idx]]);
            let moved = coends[d2.0].class_of_item(c, abd.u.act_source(l, c, u), a);
            let rhs = bd.phi[d2.0][moved];
            if lhs != rhs {
                return Err(Error::NotFunctorial(format!(
                    "phi is not natural at `{}`",
                    db.mor_id(l)
                )));
            }
        }
    }
    // Naturality of gamma in the stratum.
    for l in db.morphisms() {
        let (d, d2) = (db.src(l), db.tgt(l));
        for b in 0..bd.n.set(d).len() {
            let lb = bd.n.apply(l, b);
            for c in cb.objects() {
                for w2 in 0..abd.w.set(d2, c).len() {
                    let pulled = abd.w.act_target(l, c, w2);
                    if bd.gamma[d2.0][lb][c.0][w2] != bd.gamma[d.0][b][c.0][pulled] {
                        return Err(Error::NotFunctorial(format!(
                            "gamma is not natural at `{}`",
                            db.mor_id(l)
                        )));
                    }
                }
            }
        }
    }
    // Naturality of gamma in the base: gamma(b)(k·w) = M(k)(gamma(b)(w)).
    for d in db.objects() {
        for b in 0..bd.n.set(d).len() {
            for k in cb.morphisms() {
                let (c, c2) = (cb.src(k), cb.tgt(k));
                for w in 0..abd.w.set(d, c).len() {
                    let kw = abd.w.act_source(k, d, w);
                    if bd.gamma[d.0][b][c2.0][kw] != bd.m.apply(k, bd.gamma[d.0][b][c.0][w]) {
                        return Err(Error::NotFunctorial(format!(
                            "gamma is not natural at base morphism `{}`",
                            cb.mor_id(k)
                        )));
                    }
                }
            }
        }
    }
    check_factorization(abd, bd)?;

    // Assemble the diagram on the collage.
    let eb = coll.category.base();
    let sets: Vec<Vec<String>> = eb
        .objects()
        .map(|x| {
            let id = eb.object_id(x);
            if let Ok(c) = cb.object_by_id(id) {
                bd.m.set(c).to_vec()
            } else {
                bd.n.set(db.object_by_id(id).unwrap()).to_vec()
            }
        })
        .collect();
    let maps: Vec<Vec<usize>> = eb
        .morphisms()
        .map(|f| {
            let prov = &coll.provenance[eb.mor_id(f)];
            match prov {
                MorProvenance::FromC(id) => bd.m.map(cb.mor_by_id(id).unwrap()).to_vec(),
                MorProvenance::FromD(id) => bd.n.map(db.mor_by_id(id).unwrap()).to_vec(),
                MorProvenance::FromU { c, d, elem } => {
                    let c = cb.object_by_id(c).unwrap();
                    let d = db.object_by_id(d).unwrap();
                    let u = abd.u.set(c, d).iter().position(|t| t == elem).unwrap();
                    (0..bd.m.set(c).len())
                        .map(|a| bd.phi[d.0][coends[d.0].class_of_item(c, u, a)])
                        .collect()
                }
                MorProvenance::FromW { d, c, elem } => {
                    let c = cb.object_by_id(c).unwrap();
                    let d = db.object_by_id(d).unwrap();
                    let w = abd.w.set(d, c).iter().position(|t| t == elem).unwrap();
                    (0..bd.n.set(d).len())
                        .map(|b| bd.gamma[d.0][b][c.0][w])
                        .collect()
                }
                MorProvenance::Tensor { c, u_elem, w_elem } => {
                    let d = db.object_by_id(eb.object_id(eb.src(f))).unwrap();
                    let d2 = db.object_by_id(eb.object_id(eb.tgt(f))).unwrap();
                    let c = cb.object_by_id(c).unwrap();
                    let u = abd.u.set(c, d2).iter().position(|t| t == u_elem).unwrap();
                    let w = abd.w.set(d, c).iter().position(|t| t == w_elem).unwrap();
                    (0..bd.n.set(d).len())
                        .map(|b| {
                            let mid = bd.gamma[d.0][b][c.0][w];
                            bd.phi[d2.0][coends[d2.0].class_of_item(c, u, mid)]
                        })
                        .collect()
                }
            }
        })
        .collect();
    SetDiagram::new(eb.clone(), sets, maps)
}

// ---------------------------------------------------------------------------
// Powerset dualization
// ---------------------------------------------------------------------------

/// The contravariant finite powerset of a diagram, as a diagram on the
/// opposite shape: objects go to subset lattices, morphisms to preimages.
/// This is how anything about colimits of finite sets becomes a statement
/// about limits, and vice versa.
pub fn powerset_diagram(x: &SetDiagram) -> SetDiagram {
    let shape = x.shape();
    let op = opposite_fin(shape);
    let subset_token = |c: Obj, mask: usize| {
        let members: Vec<&str> = x
            .set(c)
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, t)| t.as_str())
            .collect();
        format!("{{{}}}", members.join(","))
    };
    let sets: Vec<Vec<String>> = shape
        .objects()
        .map(|c| {
            (0..(1usize << x.set(c).len()))
                .map(|mask| subset_token(c, mask))
                .collect()
        })
        .collect();
    let maps: Vec<Vec<usize>> = op
        .morphisms()
        .map(|k_op| {
            let k = shape.mor_by_id(op.mor_id(k_op)).unwrap();
            let (c, c2) = (shape.src(k), shape.tgt(k));
            // Preimage along X(k): P(X(c')) → P(X(c)).
            (0..(1usize << x.set(c2).len()))
                .map(|mask| {
                    let mut pre = 0usize;
                    for a in 0..x.set(c).len() {
                        if mask & (1 << x.apply(k, a)) != 0 {
                            pre |= 1 << a;
                        }
                    }
                    pre
                })
                .collect()
        })
        .collect();
    SetDiagram::new(op, sets, maps).expect("powerset diagram is functorial")
}

/// The powerset dual of a diagram map: preimage components between the
/// powerset diagrams over the opposite shape, running the other way.
pub fn powerset_dual_map(m: &DiagramMap) -> DiagramMap {
    let p_src = powerset_diagram(m.target());
    let p_tgt = powerset_diagram(m.source());
    let shape = m.shape();
    let components: Vec<Vec<usize>> = shape
        .objects()
        .map(|c| {
            (0..(1usize << m.target().set(c).len()))
                .map(|mask| {
                    let mut pre = 0usize;
                    for a in 0..m.source().set(c).len() {
                        if mask & (1 << m.at(c, a)) != 0 {
                            pre |= 1 << a;
                        }
                    }
                    pre
                })
                .collect()
        })
        .collect();
    DiagramMap::new(p_src, p_tgt, components).expect("preimages are natural")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self, obj};
    use crate::fincat::CatBuilder;

    fn entry(name: &str) -> DegreedCategory {
        corpus::builtin(name).unwrap().category
    }

    /// Build a diagram by object id for the sets and morphism id for the
    /// non-identity maps; identities are filled in automatically.
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
    fn weighted_limit_is_product_on_discrete_shapes() {
        let cat = CatBuilder::new()
            .object("p", 0)
            .object("q", 0)
            .build()
            .unwrap();
        let w = SetDiagram::constant_singleton(cat.base().clone());
        let x = diagram_by(&cat, &[("p", &["a", "b"]), ("q", &["0", "1", "2"])], &[]);
        let families = weighted_limit(&w, &x, DEFAULT_MAX_SEARCH).unwrap();
        assert_eq!(families.len(), 6);
    }

    #[test]
    fn yoneda_and_coyoneda() {
        for name in ["rezk_poset", "almost_reedy_square", "delta_le_2"] {
            let cat = entry(name);
            let base = cat.base();
            // Some nontrivial diagram: the representable at each object.
            for c in base.objects() {
                let x = representable_weight(base, c);
                for c2 in base.objects() {
                    let w = representable_weight(base, c2);
                    let families = weighted_limit(&w, &x, DEFAULT_MAX_SEARCH).unwrap();
                    // Yoneda: natural transformations hom(c2,−) ⇒ X biject
                    // with X(c2).
                    assert_eq!(
                        families.len(),
                        x.set(c2).len(),
                        "Yoneda fails at {name}/{}/{}",
                        base.object_id(c),
                        base.object_id(c2)
                    );
                    let u = representable_coweight(base, c2);
                    let q = weighted_colimit(&u, &x).unwrap();
                    assert_eq!(
                        q.n_classes,
                        x.set(c2).len(),
                        "co-Yoneda fails at {name}/{}/{}",
                        base.object_id(c),
                        base.object_id(c2)
                    );
                }
            }
        }
    }

    #[test]
    fn matching_parallel_pair() {
        let cat = entry("parallel_pair");
        let x = diagram_by(
            &cat,
            &[("x", &["x0"]), ("y", &["0", "1"])],
            &[("f", &[0]), ("g", &[0])],
        );
        let m = matching_object(&cat, obj(&cat, "x"), &x, DEFAULT_MAX_SEARCH).unwrap();
        assert_eq!(m.len(), 4);
        // Degree-zero object: singleton.
        let m0 = matching_object(&cat, obj(&cat, "y"), &x, DEFAULT_MAX_SEARCH).unwrap();
        assert_eq!(m0.len(), 1);
        assert!(m0.index.is_empty());
    }

    /// X_b = X_c = X_d = {0,1} with identity legs into X_d.
    fn square_pullback_diagram(cat: &DegreedCategory) -> SetDiagram {
        diagram_by(
            cat,
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
        )
    }

    #[test]
    fn matching_square_pullback() {
        let cat = entry("almost_reedy_square");
        let x = square_pullback_diagram(&cat);
        let m = matching_object(&cat, obj(&cat, "a"), &x, DEFAULT_MAX_SEARCH).unwrap();
        assert_eq!(m.len(), 2);
        let g = graph_limit(&cat, obj(&cat, "a"), &x).unwrap();
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn latching_basics() {
        let cat = entry("almost_reedy_square");
        let x = square_pullback_diagram(&cat);
        // Degree-zero object: empty latching.
        let l = latching_object(&cat, obj(&cat, "c"), &x).unwrap();
        assert_eq!(l.n_classes, 0);
        // At d (degree 1): only cd arrives from lower degree.
        let l = latching_object(&cat, obj(&cat, "d"), &x).unwrap();
        assert_eq!(l.n_classes, 2);
    }

    #[test]
    fn latching_matches_opposite_matching_via_powersets() {
        let cat = entry("almost_reedy_square");
        let x = diagram_by(
            &cat,
            &[
                ("a", &["s"]),
                ("b", &["0", "1"]),
                ("c", &["0", "1"]),
                ("d", &["0", "1"]),
            ],
            &[
                ("ab", &[1]),
                ("ac", &[0]),
                ("ad", &[1]),
                ("bd", &[0, 1]),
                ("cd", &[1, 0]),
            ],
        );
        let op = crate::fincat::opposite(&cat);
        let px = powerset_diagram(&x);
        for x_obj in cat.base().objects() {
            let l = latching_object(&cat, x_obj, &x).unwrap();
            let x_op = op.base().object_by_id(cat.base().object_id(x_obj)).unwrap();
            let m = matching_object(&op, x_op, &px, DEFAULT_MAX_SEARCH).unwrap();
            assert_eq!(
                1usize << l.n_classes,
                m.len(),
                "powerset duality fails at {}",
                cat.base().object_id(x_obj)
            );
        }
    }

    fn idempotent_abd() -> AbstractBigluingData {
        let c = CatBuilder::new().object("c", 0).build().unwrap();
        let d = CatBuilder::new()
            .object("d", 0)
            .build()
            .unwrap()
            .base()
            .clone();
        let u = Profunctor::new(
            d.clone(),
            c.base().clone(),
            vec![vec![vec!["u0".to_owned()]]],
            vec![vec![vec![0]]],
            vec![vec![vec![0]]],
        )
        .unwrap();
        let w = Profunctor::new(
            c.base().clone(),
            d.clone(),
            vec![vec![vec!["w0".to_owned()]]],
            vec![vec![vec![0]]],
            vec![vec![vec![0]]],
        )
        .unwrap();
        let idc = c.base().identity(Obj(0));
        let alpha = vec![vec![vec![vec![vec![idc]]]]];
        AbstractBigluingData::new(c, d, u, w, alpha).unwrap()
    }

    #[test]
    fn collage_idempotent_example() {
        let abd = idempotent_abd();
        let coll = collage(&abd).unwrap();
        let base = coll.category.base();
        assert_eq!(base.n_objects(), 2);
        let d = base.object_by_id("d").unwrap();
        // hom(d, d) = {id_d, the idempotent u∘w}.
        assert_eq!(base.hom(d, d).len(), 2);
        let t = base
            .hom(d, d)
            .iter()
            .copied()
            .find(|&m| !base.is_identity(m))
            .unwrap();
        assert_eq!(base.compose(t, t), Some(t), "u∘w must be idempotent");
        assert_eq!(coll.category.degree(d), 1);
    }

    #[test]
    fn collage_of_empty_base() {
        let c = crate::fincat::validate(&crate::fincat::RawCategory {
            objects: vec![],
            morphisms: vec![],
            identities: Default::default(),
            composition: vec![],
        })
        .unwrap();
        let d = CatBuilder::new()
            .object("d", 5)
            .build()
            .unwrap()
            .base()
            .clone();
        // U: source D, target C (no objects): no element rows, one source
        // morphism with no per-target tables, no target morphisms.
        let u = Profunctor::new(d.clone(), c.base().clone(), vec![], vec![vec![]], vec![]).unwrap();
        // W: source C, target D: one empty element row.
        let w = Profunctor::new(
            c.base().clone(),
            d.clone(),
            vec![vec![]],
            vec![],
            vec![vec![]],
        )
        .unwrap();
        let abd = AbstractBigluingData::new(c, d, u, w, vec![vec![]]).unwrap();
        let coll = collage(&abd).unwrap();
        assert_eq!(coll.category.base().n_objects(), 1);
        assert_eq!(coll.category.degree(Obj(0)), 0);
    }

    #[test]
    fn recognize_iso_pair_fails() {
        let cat = entry("iso_pair");
        match recognize_collage(&cat, 1) {
            Err(Error::NotACollage(msg)) => {
                assert!(msg.contains("o1"), "unexpected message: {msg}");
            }
            other => panic!("expected NotACollage, got {other:?}"),
        }
    }

    #[test]
    fn recognize_collage_roundtrip_idempotent() {
        let abd = idempotent_abd();
        let coll = collage(&abd).unwrap();
        let abd2 = recognize_collage(&coll.category, 1).unwrap();
        let coll2 = collage(&abd2).unwrap();
        // Identity on objects; hom-sets biject.
        let (e, e2) = (coll.category.base(), coll2.category.base());
        assert_eq!(e.n_objects(), e2.n_objects());
        assert_eq!(e.n_morphisms(), e2.n_morphisms());
        for x in e.objects() {
            for y in e.objects() {
                assert_eq!(e.hom(x, y).len(), e2.hom(x, y).len());
            }
        }
    }

    #[test]
    fn split_merge_roundtrip() {
        let abd = idempotent_abd();
        let coll = collage(&abd).unwrap();
        let eb = coll.category.base();
        // X(c) = {0,1}, X(d) = {0,1}, u and w act as the identity.
        let sets: Vec<Vec<String>> = eb
            .objects()
            .map(|_| vec!["0".to_owned(), "1".to_owned()])
            .collect();
        let maps: Vec<Vec<usize>> = eb.morphisms().map(|_| vec![0, 1]).collect();
        let x = SetDiagram::new(eb.clone(), sets, maps).unwrap();
        let bd = biglue_split(&coll, &abd, &x).unwrap();
        let back = biglue_merge(&coll, &abd, &bd).unwrap();
        assert_eq!(back, x);
        let bd2 = biglue_split(&coll, &abd, &back).unwrap();
        assert_eq!(bd2, bd);
    }

    #[test]
    fn merge_rejects_corrupted_factorization() {
        let abd = idempotent_abd();
        let coll = collage(&abd).unwrap();
        let eb = coll.category.base();
        let sets: Vec<Vec<String>> = eb
            .objects()
            .map(|_| vec!["0".to_owned(), "1".to_owned()])
            .collect();
        let maps: Vec<Vec<usize>> = eb.morphisms().map(|_| vec![0, 1]).collect();
        let x = SetDiagram::new(eb.clone(), sets, maps).unwrap();
        let mut bd = biglue_split(&coll, &abd, &x).unwrap();
        // Corrupt gamma: swap the values it assigns.
        for per_b in &mut bd.gamma[0] {
            for per_c in per_b.iter_mut() {
                for v in per_c.iter_mut() {
                    *v = 1 - *v;
                }
            }
        }
        match biglue_merge(&coll, &abd, &bd) {
            Err(Error::FactorizationMismatch(_)) | Err(Error::NotFunctorial(_)) => {}
            other => panic!("expected a mismatch, got {other:?}"),
        }
    }
}
