//! Set-valued profunctors between finite categories, stored as explicit
//! element tables with explicit action tables.

use crate::fincat::{FinCategory, Mor, Obj};
use crate::Error;

/// A profunctor H from `source` to `target`: a set H(t, s) for every pair of
/// a target object `t` and source object `s`, a covariant action of source
/// morphisms, and a contravariant action of target morphisms. The two actions
/// must commute (the bimodule law); [`Profunctor::new`] checks everything
/// exhaustively.
#[derive(Clone, PartialEq, Debug)]
pub struct Profunctor {
    source: FinCategory,
    target: FinCategory,
    /// elements[t][s] = tokens of H(t, s).
    elements: Vec<Vec<Vec<String>>>,
    /// left[k][t]: H(t, src k) → H(t, tgt k) for a source morphism k.
    left: Vec<Vec<Vec<usize>>>,
    /// right[l][s]: H(tgt l, s) → H(src l, s) for a target morphism l.
    right: Vec<Vec<Vec<usize>>>,
}

impl Profunctor {
    pub fn new(
        source: FinCategory,
        target: FinCategory,
        elements: Vec<Vec<Vec<String>>>,
        left: Vec<Vec<Vec<usize>>>,
        right: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, Error> {
        let p = Profunctor {
            source,
            target,
            elements,
            left,
            right,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn source(&self) -> &FinCategory {
        &self.source
    }

    pub fn target(&self) -> &FinCategory {
        &self.target
    }

    pub fn set(&self, t: Obj, s: Obj) -> &[String] {
        &self.elements[t.0][s.0]
    }

    /// Action of the source morphism `k`: H(t, src k) → H(t, tgt k).
    pub fn act_source(&self, k: Mor, t: Obj, elem: usize) -> usize {
        self.left[k.0][t.0][elem]
    }

    /// Action of the target morphism `l`: H(tgt l, s) → H(src l, s).
    pub fn act_target(&self, l: Mor, s: Obj, elem: usize) -> usize {
        self.right[l.0][s.0][elem]
    }

    fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::NotAFunctor(msg));
        let (nt, ns) = (self.target.n_objects(), self.source.n_objects());
        if self.elements.len() != nt || self.elements.iter().any(|row| row.len() != ns) {
            return bad("profunctor element table has the wrong shape".to_owned());
        }
        if self.left.len() != self.source.n_morphisms()
            || self.right.len() != self.target.n_morphisms()
        {
            return bad("profunctor action table has the wrong shape".to_owned());
        }
        // Shapes and ranges of the action tables.
        for k in self.source.morphisms() {
            for t in self.target.objects() {
                let table = &self.left[k.0][t.0];
                let (a, b) = (self.source.src(k), self.source.tgt(k));
                if table.len() != self.elements[t.0][a.0].len()
                    || table.iter().any(|&v| v >= self.elements[t.0][b.0].len())
                {
                    return bad(format!(
                        "source action of `{}` at `{}` is not a function",
                        self.source.mor_id(k),
                        self.target.object_id(t)
                    ));
                }
            }
        }
        for l in self.target.morphisms() {
            for s in self.source.objects() {
                let table = &self.right[l.0][s.0];
                let (a, b) = (self.target.src(l), self.target.tgt(l));
                if table.len() != self.elements[b.0][s.0].len()
                    || table.iter().any(|&v| v >= self.elements[a.0][s.0].len())
                {
                    return bad(format!(
                        "target action of `{}` at `{}` is not a function",
                        self.target.mor_id(l),
                        self.source.object_id(s)
                    ));
                }
            }
        }
        // Functoriality of the source action.
        for s in self.source.objects() {
            let id = self.source.identity(s);
            for t in self.target.objects() {
                for (i, &v) in self.left[id.0][t.0].iter().enumerate() {
                    if v != i {
                        return bad(format!(
                            "source identity at `{}` does not act as identity",
                            self.source.object_id(s)
                        ));
                    }
                }
            }
        }
        for g in self.source.morphisms() {
            for f in self.source.morphisms() {
                let Some(gf) = self.source.compose(g, f) else {
                    continue;
                };
                for t in self.target.objects() {
                    for i in 0..self.elements[t.0][self.source.src(f).0].len() {
                        let via = self.left[g.0][t.0][self.left[f.0][t.0][i]];
                        if via != self.left[gf.0][t.0][i] {
                            return bad(format!(
                                "source action is not functorial on (`{}`, `{}`)",
                                self.source.mor_id(g),
                                self.source.mor_id(f)
                            ));
                        }
                    }
                }
            }
        }
        // Functoriality of the target action (contravariant).
        for t in self.target.objects() {
            let id = self.target.identity(t);
            for s in self.source.objects() {
                for (i, &v) in self.right[id.0][s.0].iter().enumerate() {
                    if v != i {
                        return bad(format!(
                            "target identity at `{}` does not act as identity",
                            self.target.object_id(t)
                        ));
                    }
                }
            }
        }
        for g in self.target.morphisms() {
            for f in self.target.morphisms() {
                let Some(gf) = self.target.compose(g, f) else {
                    continue;
                };
                // h·(g∘f) = (h·g)·f
                for s in self.source.objects() {
                    for i in 0..self.elements[self.target.tgt(g).0][s.0].len() {
                        let via = self.right[f.0][s.0][self.right[g.0][s.0][i]];
                        if via != self.right[gf.0][s.0][i] {
                            return bad(format!(
                                "target action is not functorial on (`{}`, `{}`)",
                                self.target.mor_id(g),
                                self.target.mor_id(f)
                            ));
                        }
                    }
                }
            }
        }
        // Bimodule law: the two actions commute.
        for k in self.source.morphisms() {
            for l in self.target.morphisms() {
                let s0 = self.source.src(k);
                let t1 = self.target.tgt(l);
                for i in 0..self.elements[t1.0][s0.0].len() {
                    let a = self.right[l.0][self.source.tgt(k).0][self.left[k.0][t1.0][i]];
                    let b = self.left[k.0][self.target.src(l).0][self.right[l.0][s0.0][i]];
                    if a != b {
                        return bad(format!(
                            "actions of `{}` and `{}` do not commute",
                            self.source.mor_id(k),
                            self.target.mor_id(l)
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}
