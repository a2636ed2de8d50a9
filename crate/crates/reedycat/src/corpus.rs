//! The example registry and the exhaustive small-category enumerator that
//! feed every property suite.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagrams::{DiagramMap, SetDiagram};
use crate::fincat::{
    validate, CatBuilder, DegreedCategory, FinCategory, Mor, Obj, RawCategory, RawMorphism,
    RawObject,
};
use crate::Error;

/// A named category with the structure-class verdicts that are pinned for it,
/// and a short note on where it comes from.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub category: DegreedCategory,
    /// Partial expected classification, class name → verdict.
    pub expected: Vec<(&'static str, bool)>,
    pub provenance: &'static str,
}

pub const BUILTIN_NAMES: &[&str] = &[
    "terminal",
    "parallel_pair",
    "iso_pair",
    "almost_reedy_square",
    "c_reedy_square",
    "rezk_poset",
    "delta_le_2",
    "orbit_Z2_degH",
    "orbit_Z2_degI",
    "orbit_Z2_op_degH",
];

pub fn builtin(name: &str) -> Result<CorpusEntry, Error> {
    let entry = match name {
        "terminal" => CorpusEntry {
            name: "terminal",
            category: CatBuilder::new().object("pt", 0).build()?,
            expected: vec![("inverse", true), ("reedy", true), ("g_reedy", true)],
            provenance: "one object, one identity",
        },
        "parallel_pair" => CorpusEntry {
            name: "parallel_pair",
            category: CatBuilder::new()
                .object("x", 1)
                .object("y", 0)
                .morphism("f", "x", "y")
                .morphism("g", "x", "y")
                .build()?,
            expected: vec![("inverse", true), ("stratified", true), ("reedy", true)],
            provenance: "two parallel arrows dropping one degree; an inverse category",
        },
        "iso_pair" => CorpusEntry {
            name: "iso_pair",
            category: CatBuilder::new()
                .object("o0", 0)
                .object("o1", 1)
                .morphism("f", "o0", "o1")
                .morphism("g", "o1", "o0")
                .composite("g", "f", "id_o0")
                .composite("f", "g", "id_o1")
                .build()?,
            expected: vec![
                ("bistratified", false),
                ("almost_reedy", false),
                ("reedy", false),
                ("almost_g_reedy", false),
                ("g_reedy", false),
                ("almost_c_reedy", false),
                ("c_reedy", false),
            ],
            provenance: "a single nonidentity isomorphism across two degrees; \
                         functorially-Reedy with the evident classes but not bistratified",
        },
        "almost_reedy_square" => CorpusEntry {
            name: "almost_reedy_square",
            category: CatBuilder::new()
                .object("a", 3)
                .object("b", 2)
                .object("c", 0)
                .object("d", 1)
                .morphism("ab", "a", "b")
                .morphism("bd", "b", "d")
                .morphism("ac", "a", "c")
                .morphism("cd", "c", "d")
                .morphism("ad", "a", "d")
                .composite("bd", "ab", "ad")
                .composite("cd", "ac", "ad")
                .build()?,
            expected: vec![
                ("bistratified", true),
                ("discrete_strata", true),
                ("almost_reedy", true),
                ("reedy", false),
                ("almost_c_reedy", true),
                ("c_reedy", false),
            ],
            provenance: "commutative square, degrees 3/2/1/0: almost-Reedy but the basic \
                         lowering arrows compose to the non-basic diagonal",
        },
        "c_reedy_square" => CorpusEntry {
            name: "c_reedy_square",
            category: CatBuilder::new()
                .object("a", 1)
                .object("b", 1)
                .object("c", 0)
                .object("d", 2)
                .morphism("ab", "a", "b")
                .morphism("bd", "b", "d")
                .morphism("ac", "a", "c")
                .morphism("cd", "c", "d")
                .morphism("ad", "a", "d")
                .composite("bd", "ab", "ad")
                .composite("cd", "ac", "ad")
                .build()?,
            expected: vec![
                ("bistratified", true),
                ("discrete_strata", false),
                ("almost_reedy", false),
                ("almost_c_reedy", true),
                ("c_reedy", false),
            ],
            provenance: "commutative square, degrees 2/1/1/0: almost c-Reedy with two Reedy \
                         factorizations of the diagonal not related by any zigzag",
        },
        "rezk_poset" => CorpusEntry {
            name: "rezk_poset",
            category: CatBuilder::new()
                .object("o0", 0)
                .object("o1", 1)
                .object("o2", 2)
                .morphism("m10", "o1", "o0")
                .morphism("m02", "o0", "o2")
                .morphism("m12", "o1", "o2")
                .composite("m02", "m10", "m12")
                .build()?,
            expected: vec![
                ("bistratified", true),
                ("almost_reedy", true),
                ("reedy", true),
            ],
            provenance: "the poset 1 ≤ 0 ≤ 2 with degrees 1/0/2; Reedy, and the seed of the \
                         enlarged-class functorial-factorization example",
        },
        "delta_le_2" => CorpusEntry {
            name: "delta_le_2",
            category: delta_le_2()?,
            expected: vec![("reedy", true), ("almost_reedy", true)],
            provenance: "monotone maps between the chains [0], [1], [2], degree = dimension",
        },
        "orbit_Z2_degH" => CorpusEntry {
            name: "orbit_Z2_degH",
            category: CatBuilder::new()
                .object("Ge", 1)
                .object("GG", 2)
                .morphism("sigma", "Ge", "Ge")
                .morphism("p", "Ge", "GG")
                .composite("sigma", "sigma", "id_Ge")
                .composite("p", "sigma", "p")
                .build()?,
            expected: vec![
                ("groupoidal_strata", true),
                ("discrete_strata", false),
                ("almost_g_reedy", true),
                ("g_reedy", true),
                ("c_reedy", true),
                ("almost_reedy", false),
            ],
            provenance: "orbit category of the two-element group, degree = subgroup order; \
                         every morphism raises degree and the strata are groups",
        },
        "orbit_Z2_degI" => CorpusEntry {
            name: "orbit_Z2_degI",
            category: CatBuilder::new()
                .object("Ge", 2)
                .object("GG", 1)
                .morphism("sigma", "Ge", "Ge")
                .morphism("p", "Ge", "GG")
                .composite("sigma", "sigma", "id_Ge")
                .composite("p", "sigma", "p")
                .build()?,
            expected: vec![
                ("groupoidal_strata", true),
                ("almost_g_reedy", true),
                ("g_reedy", true),
            ],
            provenance: "orbit category of the two-element group, degree = orbit size; the \
                         degree-lowering structure whose freeness condition holds",
        },
        "orbit_Z2_op_degH" => CorpusEntry {
            name: "orbit_Z2_op_degH",
            category: CatBuilder::new()
                .object("Ge", 1)
                .object("GG", 2)
                .morphism("sigma", "Ge", "Ge")
                .morphism("p", "GG", "Ge")
                .composite("sigma", "sigma", "id_Ge")
                .composite("sigma", "p", "p")
                .build()?,
            expected: vec![
                ("groupoidal_strata", true),
                ("bistratified", true),
                ("almost_g_reedy", false),
                ("almost_c_reedy", false),
            ],
            provenance: "opposite orbit category with degree = subgroup order; the nontrivial \
                         automorphism fixes the degree-lowering projection, so freeness fails",
        },
        _ => return Err(Error::UnknownEntry(name.to_owned())),
    };
    Ok(entry)
}

/// The full simplex category truncated at dimension 2: all weakly monotone
/// maps between the chains of sizes 1, 2, 3.
fn delta_le_2() -> Result<DegreedCategory, Error> {
    fn monotone_maps(m: usize, n: usize) -> Vec<Vec<usize>> {
        // All weakly increasing (m+1)-tuples with values in 0..=n.
        let mut out = Vec::new();
        let mut cur = vec![0usize; m + 1];
        loop {
            if cur.windows(2).all(|w| w[0] <= w[1]) {
                out.push(cur.clone());
            }
            // odometer
            let mut i = m + 1;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < n {
                    cur[i] += 1;
                    for j in i + 1..=m {
                        cur[j] = 0;
                    }
                    break;
                }
            }
        }
    }

    let obj_id = |n: usize| format!("d{n}");
    let mor_name = |m: usize, n: usize, values: &[usize]| {
        let is_identity = m == n && values.iter().enumerate().all(|(i, &v)| v == i);
        if is_identity {
            format!("id_d{m}")
        } else {
            let digits: String = values.iter().map(|v| v.to_string()).collect();
            format!("f{m}{n}_{digits}")
        }
    };

    let mut objects = Vec::new();
    let mut morphisms = Vec::new();
    let mut identities = std::collections::BTreeMap::new();
    let mut composition = Vec::new();
    let mut table: Vec<(usize, usize, Vec<usize>, String)> = Vec::new();
    for n in 0..=2usize {
        objects.push(RawObject {
            id: obj_id(n),
            degree: n as u32,
        });
        identities.insert(obj_id(n), format!("id_d{n}"));
    }
    for m in 0..=2usize {
        for n in 0..=2usize {
            for values in monotone_maps(m, n) {
                let id = mor_name(m, n, &values);
                morphisms.push(RawMorphism {
                    id: id.clone(),
                    src: obj_id(m),
                    tgt: obj_id(n),
                });
                table.push((m, n, values, id));
            }
        }
    }
    for (fm, fn_, fv, fid) in &table {
        for (gm, gn, gv, gid) in &table {
            if gm != fn_ {
                continue;
            }
            let composed: Vec<usize> = fv.iter().map(|&i| gv[i]).collect();
            let cid = mor_name(*fm, *gn, &composed);
            composition.push((gid.clone(), fid.clone(), cid));
        }
    }
    validate(&RawCategory {
        objects,
        morphisms,
        identities,
        composition,
    })
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of small categories
// ---------------------------------------------------------------------------

pub const MAX_OBJECTS: usize = 3;
pub const MAX_MORPHISMS: usize = 7;

/// Deterministic stream of every valid nonempty category with at most the
/// given numbers of objects and morphisms, crossed with every degree
/// assignment drawing values from `0..max_objects`. Identifiers are fixed
/// (`x0`, `x1`, ... and `m0`, `m1`, ...; the first `n` morphisms are the
/// identities), and no deduplication up to renaming is performed:
/// presentations that differ only by which identifier plays which role are
/// all emitted.
pub fn enumerate_small(
    max_objects: usize,
    max_morphisms: usize,
) -> Result<SmallCategoryStream, Error> {
    if max_objects > MAX_OBJECTS || max_morphisms > MAX_MORPHISMS {
        return Err(Error::BoundsExceeded {
            objects: max_objects,
            morphisms: max_morphisms,
        });
    }
    Ok(SmallCategoryStream {
        max_objects,
        max_morphisms,
        n: 1,
        m: 1,
        assignment: 0,
        buffer: VecDeque::new(),
        done: max_objects == 0,
    })
}

pub struct SmallCategoryStream {
    max_objects: usize,
    max_morphisms: usize,
    n: usize,
    m: usize,
    /// Index into the (n²)^k source/target assignments for the current (n, m).
    assignment: u64,
    buffer: VecDeque<DegreedCategory>,
    done: bool,
}

impl Iterator for SmallCategoryStream {
    type Item = DegreedCategory;

    fn next(&mut self) -> Option<DegreedCategory> {
        loop {
            if let Some(cat) = self.buffer.pop_front() {
                return Some(cat);
            }
            if self.done {
                return None;
            }
            self.fill_buffer();
        }
    }
}

impl SmallCategoryStream {
    fn fill_buffer(&mut self) {
        let n = self.n;
        let k = self.m.saturating_sub(n);
        let n_assignments = (n * n).pow(k as u32) as u64;
        if self.m > self.max_morphisms || self.m < n {
            self.advance_nm();
            return;
        }
        if self.assignment >= n_assignments {
            self.advance_nm();
            return;
        }

        // Decode the (src, tgt) pairs of the k non-identity morphisms.
        let mut code = self.assignment;
        self.assignment += 1;
        let mut src = vec![0usize; self.m];
        let mut tgt = vec![0usize; self.m];
        for i in 0..n {
            src[i] = i;
            tgt[i] = i;
        }
        for i in n..self.m {
            let pair = (code % (n * n) as u64) as usize;
            code /= (n * n) as u64;
            src[i] = pair / n;
            tgt[i] = pair % n;
        }
        for base in enumerate_tables(n, self.m, &src, &tgt) {
            for degree in degree_assignments(n, self.max_objects as u32) {
                self.buffer
                    .push_back(DegreedCategory::from_parts(base.clone(), degree));
            }
        }
    }

    fn advance_nm(&mut self) {
        self.assignment = 0;
        self.m += 1;
        if self.m > self.max_morphisms {
            self.n += 1;
            self.m = self.n;
            if self.n > self.max_objects {
                self.done = true;
            }
        }
    }
}

/// All degree vectors over `n` objects with values in `0..max_value`, in
/// lexicographic order.
fn degree_assignments(n: usize, max_value: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    loop {
        out.push(cur.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 < max_value {
                cur[i] += 1;
                for v in cur.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// Backtracking over composition tables for a fixed source/target assignment,
/// with unit entries forced and associativity checked as soon as all three
/// products of a triple are known.
fn enumerate_tables(n: usize, m: usize, src: &[usize], tgt: &[usize]) -> Vec<FinCategory> {
    // Composable pairs that still need a choice: both factors non-identity.
    let mut table = vec![usize::MAX; m * m];
    for g in 0..m {
        for f in 0..m {
            if tgt[f] != src[g] {
                continue;
            }
            if g < n {
                table[g * m + f] = f; // id ∘ f = f
            } else if f < n {
                table[g * m + f] = g; // g ∘ id = g
            }
        }
    }
    let free_pairs: Vec<(usize, usize)> = (n..m)
        .flat_map(|g| (n..m).map(move |f| (g, f)))
        .filter(|&(g, f)| tgt[f] == src[g])
        .collect();
    // Candidate composites per free pair, by type.
    let candidates: Vec<Vec<usize>> = free_pairs
        .iter()
        .map(|&(g, f)| {
            (0..m)
                .filter(|&c| src[c] == src[f] && tgt[c] == tgt[g])
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    fn assoc_ok(table: &[usize], m: usize, src: &[usize], tgt: &[usize]) -> bool {
        for h in 0..m {
            for g in 0..m {
                if tgt[g] != src[h] {
                    continue;
                }
                let hg = table[h * m + g];
                for f in 0..m {
                    if tgt[f] != src[g] {
                        continue;
                    }
                    let gf = table[g * m + f];
                    if gf == usize::MAX || hg == usize::MAX {
                        continue;
                    }
                    let left = table[h * m + gf];
                    let right = table[hg * m + f];
                    if left != usize::MAX && right != usize::MAX && left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn recurse(
        depth: usize,
        free_pairs: &[(usize, usize)],
        candidates: &[Vec<usize>],
        table: &mut [usize],
        n: usize,
        m: usize,
        src: &[usize],
        tgt: &[usize],
        out: &mut Vec<FinCategory>,
    ) {
        if depth == free_pairs.len() {
            out.push(build_category(n, m, src, tgt, table));
            return;
        }
        let (g, f) = free_pairs[depth];
        for &c in &candidates[depth] {
            table[g * m + f] = c;
            if assoc_ok(table, m, src, tgt) {
                recurse(
                    depth + 1,
                    free_pairs,
                    candidates,
                    table,
                    n,
                    m,
                    src,
                    tgt,
                    out,
                );
            }
        }
        table[g * m + f] = usize::MAX;
    }

    recurse(
        0,
        &free_pairs,
        &candidates,
        &mut table,
        n,
        m,
        src,
        tgt,
        &mut out,
    );
    out
}

fn build_category(
    n: usize,
    m: usize,
    src: &[usize],
    tgt: &[usize],
    table: &[usize],
) -> FinCategory {
    let obj_id = |i: usize| format!("x{i}");
    let mor_id = |i: usize| format!("m{i}");
    let raw = RawCategory {
        objects: (0..n)
            .map(|i| RawObject {
                id: obj_id(i),
                degree: 0,
            })
            .collect(),
        morphisms: (0..m)
            .map(|i| RawMorphism {
                id: mor_id(i),
                src: obj_id(src[i]),
                tgt: obj_id(tgt[i]),
            })
            .collect(),
        identities: (0..n).map(|i| (obj_id(i), mor_id(i))).collect(),
        composition: (0..m)
            .flat_map(|g| (0..m).map(move |f| (g, f)))
            .filter(|&(g, f)| tgt[f] == src[g])
            .map(|(g, f)| (mor_id(g), mor_id(f), mor_id(table[g * m + f])))
            .collect(),
    };
    validate(&raw)
        .expect("enumerated table must validate")
        .base()
        .clone()
}

// ---------------------------------------------------------------------------
// Seeded random diagrams
// ---------------------------------------------------------------------------

/// A seeded random set diagram on a category, with set sizes at most
/// `max_size`. Sizes and maps are drawn uniformly; maps are repaired to
/// functoriality by propagating composition constraints to a fixpoint, and
/// the draw is rejected and retried when repair fails. Falls back to the
/// constant singleton diagram, which is always functorial, if every retry
/// fails.
pub fn seeded_diagram(cat: &DegreedCategory, seed: u64, max_size: usize) -> SetDiagram {
    let base = cat.base();
    for attempt in 0..64u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(attempt));
        let sizes: Vec<usize> = base.objects().map(|_| rng.gen_range(0..=max_size)).collect();
        // A morphism from a nonempty set into an empty one is unrealizable.
        if base
            .morphisms()
            .any(|f| sizes[base.src(f).0] > 0 && sizes[base.tgt(f).0] == 0)
        {
            continue;
        }
        let sets: Vec<Vec<String>> = base
            .objects()
            .map(|x| (0..sizes[x.0]).map(|i| format!("e{i}")).collect())
            .collect();
        let mut maps: Vec<Vec<usize>> = base
            .morphisms()
            .map(|f| {
                if base.is_identity(f) {
                    (0..sizes[base.src(f).0]).collect()
                } else {
                    (0..sizes[base.src(f).0])
                        .map(|_| rng.gen_range(0..sizes[base.tgt(f).0].max(1)))
                        .collect()
                }
            })
            .collect();
        // Repair: overwrite composites until a fixpoint or the iteration cap.
        let mut stable = false;
        for _ in 0..64 {
            let mut changed = false;
            for g in base.morphisms() {
                for f in base.morphisms() {
                    let Some(gf) = base.compose(g, f) else { continue };
                    let via: Vec<usize> = maps[f.0].iter().map(|&v| maps[g.0][v]).collect();
                    if maps[gf.0] != via {
                        maps[gf.0] = via;
                        changed = true;
                    }
                }
            }
            if !changed {
                stable = true;
                break;
            }
        }
        if !stable {
            continue;
        }
        if let Ok(diagram) = SetDiagram::new(base.clone(), sets, maps) {
            return diagram;
        }
    }
    SetDiagram::constant_singleton(base.clone())
}

/// A seeded random natural transformation between two seeded diagrams over
/// `cat`, found by randomized backtracking. Falls back to an identity map
/// when no transformation between the drawn diagrams exists.
pub fn seeded_diagram_map(cat: &DegreedCategory, seed: u64, max_size: usize) -> DiagramMap {
    let base = cat.base();
    for attempt in 0..64u64 {
        let s = seed.wrapping_mul(0x517c_c1b7).wrapping_add(attempt);
        let source = seeded_diagram(cat, s.wrapping_mul(2), max_size);
        let target = seeded_diagram(cat, s.wrapping_mul(2).wrapping_add(1), max_size);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        if let Some(components) = random_natural(base, &source, &target, &mut rng) {
            return DiagramMap::new(source, target, components).expect("searched map is natural");
        }
    }
    let diagram = seeded_diagram(cat, seed, max_size);
    DiagramMap::identity(diagram)
}

/// Randomized backtracking over the components of a natural transformation.
fn random_natural(
    base: &FinCategory,
    source: &SetDiagram,
    target: &SetDiagram,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<usize>>> {
    let mut slots: Vec<(Obj, usize)> = Vec::new();
    for x in base.objects() {
        for a in 0..source.set(x).len() {
            slots.push((x, a));
        }
    }
    let slot_of = |x: Obj, a: usize| slots.iter().position(|&s| s == (x, a)).unwrap();
    let mut constraints: Vec<(usize, usize, Mor)> = Vec::new();
    for f in base.morphisms() {
        let x = base.src(f);
        for a in 0..source.set(x).len() {
            constraints.push((slot_of(x, a), slot_of(base.tgt(f), source.apply(f, a)), f));
        }
    }
    fn go(
        depth: usize,
        slots: &[(Obj, usize)],
        target: &SetDiagram,
        constraints: &[(usize, usize, Mor)],
        assignment: &mut Vec<Option<usize>>,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        if depth == slots.len() {
            return true;
        }
        let (x, _) = slots[depth];
        let mut values: Vec<usize> = (0..target.set(x).len()).collect();
        // Randomize the branch order only; the search stays exhaustive.
        for i in (1..values.len()).rev() {
            values.swap(i, rng.gen_range(0..=i));
        }
        'vals: for v in values {
            assignment[depth] = Some(v);
            for &(i, j, f) in constraints {
                if i > depth || j > depth {
                    continue;
                }
                if let (Some(a), Some(b)) = (assignment[i], assignment[j]) {
                    if target.apply(f, a) != b {
                        continue 'vals;
                    }
                }
            }
            if go(depth + 1, slots, target, constraints, assignment, rng) {
                return true;
            }
        }
        assignment[depth] = None;
        false
    }
    let mut assignment = vec![None; slots.len()];
    if !go(0, &slots, target, &constraints, &mut assignment, rng) {
        return None;
    }
    let mut table: Vec<Vec<usize>> = base.objects().map(|_| Vec::new()).collect();
    for (n, &(x, _)) in slots.iter().enumerate() {
        table[x.0].push(assignment[n].unwrap());
    }
    Some(table)
}

// ---------------------------------------------------------------------------
// Helpers used by the suites
// ---------------------------------------------------------------------------

/// The nonidentity-morphism provenance mapping for tests that need to talk
/// about `x0`/`m3` style enumerator output.
pub fn describe(cat: &DegreedCategory) -> String {
    let base = cat.base();
    let mors: Vec<String> = base
        .morphisms()
        .filter(|&f| !base.is_identity(f))
        .map(|f| {
            format!(
                "{}:{}->{}",
                base.mor_id(f),
                base.object_id(base.src(f)),
                base.object_id(base.tgt(f))
            )
        })
        .collect();
    let degs: Vec<String> = base
        .objects()
        .map(|x| format!("{}^{}", base.object_id(x), cat.degree(x)))
        .collect();
    format!("[{}; {}]", degs.join(","), mors.join(","))
}

pub fn obj(cat: &DegreedCategory, id: &str) -> Obj {
    cat.base().object_by_id(id).unwrap()
}

pub fn mor(cat: &DegreedCategory, id: &str) -> Mor {
    cat.base().mor_by_id(id).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_NAMES {
            let entry = builtin(name).unwrap();
            assert_eq!(entry.name, *name);
        }
        assert!(matches!(builtin("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn delta_hom_sizes() {
        let cat = builtin("delta_le_2").unwrap().category;
        let base = cat.base();
        let sizes: Vec<Vec<usize>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        base.hom(
                            base.object_by_id(&format!("d{i}")).unwrap(),
                            base.object_by_id(&format!("d{j}")).unwrap(),
                        )
                        .len()
                    })
                    .collect()
            })
            .collect();
        assert_eq!(sizes, vec![vec![1, 2, 3], vec![1, 3, 6], vec![1, 4, 10]]);
    }

    #[test]
    fn delta_transposes_under_opposite() {
        let cat = builtin("delta_le_2").unwrap().category;
        let op = crate::fincat::opposite(&cat);
        for i in 0..3 {
            for j in 0..3 {
                let x = format!("d{i}");
                let y = format!("d{j}");
                assert_eq!(
                    cat.base().hom(obj(&cat, &x), obj(&cat, &y)).len(),
                    op.base().hom(obj(&op, &y), obj(&op, &x)).len()
                );
            }
        }
    }

    #[test]
    fn delta_truncates_to_delta_le_1() {
        let cat = builtin("delta_le_2").unwrap().category;
        let sub = crate::fincat::full_subcategory(&cat, 2);
        assert_eq!(sub.base().n_objects(), 2);
        let sizes: Vec<usize> = [("d0", "d0"), ("d0", "d1"), ("d1", "d0"), ("d1", "d1")]
            .iter()
            .map(|(x, y)| sub.base().hom(obj(&sub, x), obj(&sub, y)).len())
            .collect();
        assert_eq!(sizes, vec![1, 2, 1, 3]);
    }

    #[test]
    fn enumerate_tiny_bounds() {
        // (1,1): exactly the terminal category, with degree zero.
        let cats: Vec<_> = enumerate_small(1, 1).unwrap().collect();
        assert_eq!(cats.len(), 1);
        assert_eq!(cats[0].base().n_morphisms(), 1);
        assert_eq!(cats[0].degree(Obj(0)), 0);

        // (1,2): the two monoids of order 2, each with one degree assignment.
        let cats: Vec<_> = enumerate_small(1, 2).unwrap().collect();
        let two_mor: Vec<_> = cats
            .iter()
            .filter(|c| c.base().n_morphisms() == 2)
            .collect();
        assert_eq!(two_mor.len(), 2);
        assert_eq!(cats.len(), 3); // terminal plus the two monoids
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a: Vec<String> = enumerate_small(2, 4)
            .unwrap()
            .map(|c| serde_json::to_string(&crate::fincat::to_raw(&c)).unwrap())
            .collect();
        let b: Vec<String> = enumerate_small(2, 4)
            .unwrap()
            .map(|c| serde_json::to_string(&crate::fincat::to_raw(&c)).unwrap())
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn seeded_diagrams_are_functorial_and_reproducible() {
        for name in ["parallel_pair", "almost_reedy_square", "delta_le_2"] {
            let cat = builtin(name).unwrap().category;
            for seed in 0..10 {
                let d1 = seeded_diagram(&cat, seed, 3);
                let d2 = seeded_diagram(&cat, seed, 3);
                assert_eq!(d1, d2, "same seed must reproduce the diagram");
                let m1 = seeded_diagram_map(&cat, seed, 3);
                let m2 = seeded_diagram_map(&cat, seed, 3);
                assert_eq!(m1, m2);
            }
        }
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(matches!(
            enumerate_small(4, 7),
            Err(Error::BoundsExceeded { .. })
        ));
        assert!(matches!(
            enumerate_small(3, 8),
            Err(Error::BoundsExceeded { .. })
        ));
    }
}
