//! Command-line front door: every operation of the library bound to the JSON
//! file formats, with stable human-readable and machine-readable output.
//!
//! Exit codes: 0 = computed and all asserted properties hold; 1 = computed
//! but the queried property is false; 2 = invalid input; 3 = size guard
//! exceeded. All diagnostics go to stderr.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::classify::{self, FunctorialFactorization};
use crate::corpus;
use crate::diagrams::{
    collage, latching_object, matching_object, recognize_collage, AbstractBigluingData,
    DiagramMap, SetDiagram,
};
use crate::factorization::{self, FactorMode, Factorization};
use crate::fincat::{self, DegreedCategory, FinCategory, Mor, RawCategory};
use crate::profunctor::Profunctor;
use crate::wfs::{self, LiftingProblem};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FALSE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_SIZE_GUARD: i32 = 3;

#[derive(Parser)]
#[command(
    name = "reedycat",
    about = "Decide Reedy-like structure classes of finite degreed categories and compute the \
             associated factorizations, boundary, latching and matching objects, collages, and \
             the induced weak factorization structure on finite-set diagrams",
    version
)]
pub struct Cli {
    /// Emit machine-readable JSON instead of a human summary.
    #[arg(long, global = true)]
    json: bool,

    /// Cap on backtracking searches (weighted limits, lifting).
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_search: u64,

    /// Seed for the corpus diagram generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a category file, reporting every violation found.
    Validate { category: PathBuf },
    /// Run every structure-class check and report verdicts with witnesses.
    Classify {
        category: PathBuf,
        /// The class whose verdict drives the exit code.
        #[arg(long, default_value = "reedy")]
        class: String,
    },
    /// Compute the canonical (down, up) factorization of a morphism.
    Factor {
        category: PathBuf,
        #[arg(long)]
        morphism: String,
        /// s = strict (almost-Reedy), c = level stopping (almost-c-Reedy).
        #[arg(long, default_value = "s")]
        mode: String,
    },
    /// Compute a boundary hom-set ∂_δ(x, y).
    Boundary {
        category: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        degree: u32,
    },
    /// Compute the matching object of a diagram at an object.
    Matching {
        category: PathBuf,
        diagram: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Compute the latching object of a diagram at an object.
    Latching {
        category: PathBuf,
        diagram: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Build the collage category of abstract bigluing data.
    Collage { data: PathBuf },
    /// Split a category at a degree and recover abstract bigluing data.
    Recognize {
        category: PathBuf,
        #[arg(long)]
        split_degree: u32,
    },
    /// Classify a diagram map in the induced Reedy or c-Reedy structure.
    WfsClassify {
        category: PathBuf,
        map: PathBuf,
        /// s = Reedy over discrete strata, c = c-Reedy over any strata.
        #[arg(long, default_value = "s")]
        structure: String,
    },
    /// Factor a diagram map as a left map followed by a right map.
    WfsFactor { category: PathBuf, map: PathBuf },
    /// Search for a diagonal filler in a lifting problem.
    Lift { problem: PathBuf },
    /// Reduce a functorially-Reedy structure to a Reedy full subcategory.
    FsReduce { category: PathBuf, structure: PathBuf },
    /// Work with the builtin example corpus.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// List the builtin entries.
    List,
    /// Emit an entry in the category file format.
    Emit { name: String },
}

/// Run the command line; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::SizeGuardExceeded { .. } => EXIT_SIZE_GUARD,
        Error::NotAlmostReedy(_)
        | Error::NotACollage(_)
        | Error::NotBistratified(_)
        | Error::NotDiscreteBistratified(_)
        | Error::NotFsReedy(_)
        | Error::FactorizationMismatch(_) => EXIT_PROPERTY_FALSE,
        _ => EXIT_INVALID_INPUT,
    }
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Lib(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) | CliError::Parse(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

fn cli_exit(e: &CliError) -> i32 {
    match e {
        CliError::Io(_) | CliError::Parse(_) => EXIT_INVALID_INPUT,
        CliError::Lib(err) => exit_code_for(err),
    }
}

fn dispatch(cli: &Cli) -> Result<i32, Error> {
    match run_command(cli) {
        Ok(code) => Ok(code),
        Err(CliError::Lib(e)) => Err(e),
        Err(other) => {
            eprintln!("error: {other}");
            Ok(cli_exit(&other))
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("cannot parse {}: {e}", path.display())))
}

fn load_category(path: &PathBuf) -> Result<DegreedCategory, CliError> {
    let raw: RawCategory = read_json(path)?;
    fincat::validate(&raw).map_err(CliError::Lib)
}

fn run_command(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Validate { category } => {
            let cat = load_category(category)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "valid": true,
                        "objects": cat.base().n_objects(),
                        "morphisms": cat.base().n_morphisms(),
                    })
                );
            } else {
                println!(
                    "valid: {} objects, {} morphisms",
                    cat.base().n_objects(),
                    cat.base().n_morphisms()
                );
            }
            Ok(EXIT_OK)
        }
        Command::Classify { category, class } => {
            let cat = load_category(category)?;
            if !classify::CLASS_NAMES.contains(&class.as_str()) {
                return Err(CliError::Parse(format!(
                    "unknown class `{class}`; expected one of {:?}",
                    classify::CLASS_NAMES
                )));
            }
            let report = classify::classify(&cat);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
            } else {
                for (name, v) in &report.verdicts {
                    let mark = if v.holds { "yes" } else { "no " };
                    match &v.witness {
                        Some(w) => println!("{name:>18}: {mark}  (witness: {w:?})"),
                        None => println!("{name:>18}: {mark}"),
                    }
                }
            }
            Ok(if report.holds(class) {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FALSE
            })
        }
        Command::Factor {
            category,
            morphism,
            mode,
        } => {
            let cat = load_category(category)?;
            let f = cat.base().mor_by_id(morphism).map_err(CliError::Lib)?;
            let mode = match mode.as_str() {
                "s" => FactorMode::Strict,
                "c" => FactorMode::Level,
                other => {
                    return Err(CliError::Parse(format!(
                        "unknown mode `{other}`; expected `s` or `c`"
                    )))
                }
            };
            let fact = factorization::reedy_factor(&cat, f, mode)?;
            print_factorization(cli.json, &cat, &fact);
            Ok(EXIT_OK)
        }
        Command::Boundary {
            category,
            source,
            target,
            degree,
        } => {
            let cat = load_category(category)?;
            let x = cat.base().object_by_id(source).map_err(CliError::Lib)?;
            let y = cat.base().object_by_id(target).map_err(CliError::Lib)?;
            let bh = factorization::boundary_hom(&cat, x, y, *degree);
            let base = cat.base();
            if cli.json {
                let classes: Vec<serde_json::Value> = (0..bh.n_classes)
                    .map(|cl| {
                        let members: Vec<serde_json::Value> = bh
                            .pairs
                            .iter()
                            .zip(&bh.class_of)
                            .filter(|(_, &c)| c == cl)
                            .map(|(p, _)| {
                                serde_json::json!([base.mor_id(p.first), base.mor_id(p.second)])
                            })
                            .collect();
                        serde_json::json!({
                            "composite": base.mor_id(bh.to_hom[cl]),
                            "pairs": members,
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({ "classes": classes }))
                        .unwrap()
                );
            } else {
                println!("{} classes", bh.n_classes);
                for cl in 0..bh.n_classes {
                    let members: Vec<String> = bh
                        .pairs
                        .iter()
                        .zip(&bh.class_of)
                        .filter(|(_, &c)| c == cl)
                        .map(|(p, _)| {
                            format!("({},{})", base.mor_id(p.first), base.mor_id(p.second))
                        })
                        .collect();
                    println!("  -> {}: {}", base.mor_id(bh.to_hom[cl]), members.join(" "));
                }
            }
            Ok(EXIT_OK)
        }
        Command::Matching {
            category,
            diagram,
            object,
        } => {
            let cat = load_category(category)?;
            let x = cat.base().object_by_id(object).map_err(CliError::Lib)?;
            let raw: RawDiagram = read_json(diagram)?;
            let diag = raw.resolve(&cat)?;
            let m = matching_object(&cat, x, &diag, cli.max_search)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "size": m.len(),
                        "index": m.index.iter().map(|&f| cat.base().mor_id(f)).collect::<Vec<_>>(),
                        "elements": m.tokens,
                    })
                );
            } else {
                println!("matching object at {object}: {} elements", m.len());
                for t in &m.tokens {
                    println!("  {t}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::Latching {
            category,
            diagram,
            object,
        } => {
            let cat = load_category(category)?;
            let x = cat.base().object_by_id(object).map_err(CliError::Lib)?;
            let raw: RawDiagram = read_json(diagram)?;
            let diag = raw.resolve(&cat)?;
            let l = latching_object(&cat, x, &diag)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "size": l.n_classes, "elements": l.tokens })
                );
            } else {
                println!("latching object at {object}: {} elements", l.n_classes);
                for t in &l.tokens {
                    println!("  {t}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::Collage { data } => {
            let raw: RawAbd = read_json(data)?;
            let abd = raw.resolve()?;
            let coll = collage(&abd)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&fincat::to_raw(&coll.category)).unwrap()
            );
            Ok(EXIT_OK)
        }
        Command::Recognize {
            category,
            split_degree,
        } => {
            let cat = load_category(category)?;
            let abd = recognize_collage(&cat, *split_degree)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&RawAbd::from_abd(&abd)).unwrap()
            );
            Ok(EXIT_OK)
        }
        Command::WfsClassify {
            category,
            map,
            structure,
        } => {
            let cat = load_category(category)?;
            let raw: RawDiagramMap = read_json(map)?;
            let m = raw.resolve(&cat)?;
            let class = match structure.as_str() {
                "s" => wfs::reedy_classify_map(&cat, &m)?.0,
                "c" => wfs::creedy_classify_map(&cat, &m)?,
                other => {
                    return Err(CliError::Parse(format!(
                        "unknown structure `{other}`; expected `s` or `c`"
                    )))
                }
            };
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "is_l": class.is_l, "is_r": class.is_r })
                );
            } else {
                println!("left: {}, right: {}", class.is_l, class.is_r);
            }
            Ok(EXIT_OK)
        }
        Command::WfsFactor { category, map } => {
            let cat = load_category(category)?;
            let raw: RawDiagramMap = read_json(map)?;
            let m = raw.resolve(&cat)?;
            let (ell, arr) = wfs::reedy_factorize_map(&cat, &m)?;
            let out = serde_json::json!({
                "middle": RawDiagram::from_diagram(arr.source()),
                "left_components": components_json(&ell),
                "right_components": components_json(&arr),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(EXIT_OK)
        }
        Command::Lift { problem } => {
            let raw: RawLift = read_json(problem)?;
            let p = raw.resolve()?;
            match wfs::solve_lifting(&p, cli.max_search)? {
                Some(filler) => {
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::json!({ "filler": components_json(&filler) })
                        );
                    } else {
                        println!("filler found");
                    }
                    Ok(EXIT_OK)
                }
                None => {
                    if cli.json {
                        println!("{}", serde_json::json!({ "filler": null }));
                    } else {
                        println!("no filler");
                    }
                    Ok(EXIT_PROPERTY_FALSE)
                }
            }
        }
        Command::FsReduce {
            category,
            structure,
        } => {
            let cat = load_category(category)?;
            let raw: RawFf = read_json(structure)?;
            let ff = raw.resolve(&cat)?;
            let red = classify::fs_reduce(&cat, &ff)?;
            let base = cat.base();
            if cli.json {
                let replacements: Vec<serde_json::Value> = red
                    .replacements
                    .iter()
                    .map(|(x, z, g, h)| {
                        serde_json::json!({
                            "object": base.object_id(*x),
                            "replacement": base.object_id(*z),
                            "to": base.mor_id(*g),
                            "from": base.mor_id(*h),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "retained": red.retained.iter().map(|&x| base.object_id(x)).collect::<Vec<_>>(),
                        "replacements": replacements,
                        "supplied_classes_reedy": red.supplied_classes_reedy.holds,
                        "canonical_classes_reedy": red.canonical_classes_reedy.holds,
                    }))
                    .unwrap()
                );
            } else {
                let retained: Vec<&str> =
                    red.retained.iter().map(|&x| base.object_id(x)).collect();
                println!("retained objects: {}", retained.join(", "));
                for (x, z, g, h) in &red.replacements {
                    println!(
                        "  {} ~ {} via ({}, {})",
                        base.object_id(*x),
                        base.object_id(*z),
                        base.mor_id(*g),
                        base.mor_id(*h)
                    );
                }
                println!(
                    "supplied classes Reedy: {}; canonical classes Reedy: {}",
                    red.supplied_classes_reedy.holds, red.canonical_classes_reedy.holds
                );
            }
            Ok(if red.canonical_classes_reedy.holds {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FALSE
            })
        }
        Command::Corpus { command } => match command {
            CorpusCommand::List => {
                for name in corpus::BUILTIN_NAMES {
                    println!("{name}");
                }
                Ok(EXIT_OK)
            }
            CorpusCommand::Emit { name } => {
                let entry = corpus::builtin(name)?;
                println!(
                    "{}",
                    serde_json::to_string_pretty(&fincat::to_raw(&entry.category)).unwrap()
                );
                Ok(EXIT_OK)
            }
        },
    }
}

fn print_factorization(json: bool, cat: &DegreedCategory, fact: &Factorization) {
    let base = cat.base();
    if json {
        println!(
            "{}",
            serde_json::json!({
                "down": base.mor_id(fact.first),
                "up": base.mor_id(fact.second),
                "mid": base.object_id(base.tgt(fact.first)),
            })
        );
    } else {
        println!(
            "({}, {}) through {}",
            base.mor_id(fact.first),
            base.mor_id(fact.second),
            base.object_id(base.tgt(fact.first))
        );
    }
}

fn components_json(m: &DiagramMap) -> serde_json::Value {
    let shape = m.shape();
    let mut out = serde_json::Map::new();
    for x in shape.objects() {
        let mut comp = serde_json::Map::new();
        for (a, &v) in m.component(x).iter().enumerate() {
            comp.insert(
                m.source().set(x)[a].clone(),
                serde_json::Value::String(m.target().set(x)[v].clone()),
            );
        }
        out.insert(shape.object_id(x).to_owned(), serde_json::Value::Object(comp));
    }
    serde_json::Value::Object(out)
}

// ---------------------------------------------------------------------------
// File formats beyond the category format
// ---------------------------------------------------------------------------

/// Shape reference inside diagram files: inline category or a file path.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShapeRef {
    File { file: String },
    Inline(RawCategory),
}

impl ShapeRef {
    fn resolve(&self) -> Result<DegreedCategory, CliError> {
        match self {
            ShapeRef::Inline(raw) => fincat::validate(raw).map_err(CliError::Lib),
            ShapeRef::File { file } => load_category(&PathBuf::from(file)),
        }
    }
}

/// Diagram file: a shape plus per-object element lists and per-morphism
/// element mappings. Identity morphisms may be omitted.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDiagram {
    pub shape: ShapeRef,
    pub sets: BTreeMap<String, Vec<String>>,
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

fn build_diagram(
    base: &FinCategory,
    sets: &BTreeMap<String, Vec<String>>,
    maps: &BTreeMap<String, BTreeMap<String, String>>,
) -> Result<SetDiagram, CliError> {
    for key in sets.keys() {
        base.object_by_id(key).map_err(CliError::Lib)?;
    }
    for key in maps.keys() {
        base.mor_by_id(key).map_err(CliError::Lib)?;
    }
    let set_table: Vec<Vec<String>> = base
        .objects()
        .map(|x| sets.get(base.object_id(x)).cloned().unwrap_or_default())
        .collect();
    let elem_index = |x: crate::fincat::Obj, tok: &str| -> Result<usize, CliError> {
        set_table[x.0]
            .iter()
            .position(|t| t == tok)
            .ok_or_else(|| {
                CliError::Parse(format!(
                    "element `{tok}` is not in the set at `{}`",
                    base.object_id(x)
                ))
            })
    };
    let mut map_table: Vec<Vec<usize>> = Vec::new();
    for f in base.morphisms() {
        let (x, y) = (base.src(f), base.tgt(f));
        let table = match maps.get(base.mor_id(f)) {
            Some(entries) => {
                let mut t = Vec::new();
                for tok in &set_table[x.0] {
                    let target_tok = entries.get(tok).ok_or_else(|| {
                        CliError::Parse(format!(
                            "map `{}` is missing a value for element `{tok}`",
                            base.mor_id(f)
                        ))
                    })?;
                    t.push(elem_index(y, target_tok)?);
                }
                t
            }
            None if base.is_identity(f) => (0..set_table[x.0].len()).collect(),
            None if set_table[x.0].is_empty() => Vec::new(),
            None => {
                return Err(CliError::Parse(format!(
                    "no mapping given for morphism `{}`",
                    base.mor_id(f)
                )))
            }
        };
        map_table.push(table);
    }
    SetDiagram::new(base.clone(), set_table, map_table).map_err(CliError::Lib)
}

impl RawDiagram {
    pub fn resolve(&self, expected: &DegreedCategory) -> Result<SetDiagram, CliError> {
        let shape_cat = self.shape.resolve()?;
        if shape_cat.base() != expected.base() {
            return Err(CliError::Parse(
                "diagram shape does not match the given category".to_owned(),
            ));
        }
        build_diagram(expected.base(), &self.sets, &self.maps)
    }

    pub fn from_diagram(d: &SetDiagram) -> serde_json::Value {
        let shape = d.shape();
        let mut sets = serde_json::Map::new();
        for x in shape.objects() {
            sets.insert(
                shape.object_id(x).to_owned(),
                serde_json::json!(d.set(x)),
            );
        }
        let mut maps = serde_json::Map::new();
        for f in shape.morphisms() {
            if shape.is_identity(f) {
                continue;
            }
            let x = shape.src(f);
            let y = shape.tgt(f);
            let mut entries = serde_json::Map::new();
            for (a, tok) in d.set(x).iter().enumerate() {
                entries.insert(
                    tok.clone(),
                    serde_json::Value::String(d.set(y)[d.apply(f, a)].clone()),
                );
            }
            maps.insert(shape.mor_id(f).to_owned(), serde_json::Value::Object(entries));
        }
        serde_json::json!({ "sets": sets, "maps": maps })
    }
}

/// One side of a diagram map, without repeating the shape.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDiagramData {
    pub sets: BTreeMap<String, Vec<String>>,
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

/// Diagram-map file: the diagram format extended with a target diagram and
/// per-object `components`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDiagramMap {
    pub shape: ShapeRef,
    pub source: RawDiagramData,
    pub target: RawDiagramData,
    pub components: BTreeMap<String, BTreeMap<String, String>>,
}

impl RawDiagramMap {
    pub fn resolve(&self, expected: &DegreedCategory) -> Result<DiagramMap, CliError> {
        let shape_cat = self.shape.resolve()?;
        if shape_cat.base() != expected.base() {
            return Err(CliError::Parse(
                "diagram-map shape does not match the given category".to_owned(),
            ));
        }
        let base = expected.base();
        let source = build_diagram(base, &self.source.sets, &self.source.maps)?;
        let target = build_diagram(base, &self.target.sets, &self.target.maps)?;
        let mut components = Vec::new();
        for x in base.objects() {
            let entries = self.components.get(base.object_id(x));
            let mut comp = Vec::new();
            for tok in source.set(x) {
                let target_tok = entries.and_then(|e| e.get(tok)).ok_or_else(|| {
                    CliError::Parse(format!(
                        "component at `{}` is missing a value for `{tok}`",
                        base.object_id(x)
                    ))
                })?;
                let idx = target.set(x).iter().position(|t| t == target_tok).ok_or_else(|| {
                    CliError::Parse(format!(
                        "component value `{target_tok}` is not in the target set at `{}`",
                        base.object_id(x)
                    ))
                })?;
                comp.push(idx);
            }
            components.push(comp);
        }
        DiagramMap::new(source, target, components).map_err(CliError::Lib)
    }
}

/// Profunctor block inside the abstract-bigluing-data format.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawProfunctor {
    /// elements[target object][source object] = element tokens.
    pub elements: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    /// left[source morphism][target object] = element mapping.
    #[serde(default)]
    pub left: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
    /// right[target morphism][source object] = element mapping.
    #[serde(default)]
    pub right: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

impl RawProfunctor {
    fn resolve(&self, source: &FinCategory, target: &FinCategory) -> Result<Profunctor, CliError> {
        let elements: Vec<Vec<Vec<String>>> = target
            .objects()
            .map(|t| {
                source
                    .objects()
                    .map(|s| {
                        self.elements
                            .get(target.object_id(t))
                            .and_then(|row| row.get(source.object_id(s)))
                            .cloned()
                            .unwrap_or_default()
                    })
                    .collect()
            })
            .collect();
        let lookup = |t: usize, s: usize, tok: &str| -> Result<usize, CliError> {
            elements[t][s].iter().position(|e| e == tok).ok_or_else(|| {
                CliError::Parse(format!("profunctor element `{tok}` not found"))
            })
        };
        let mut left = Vec::new();
        for k in source.morphisms() {
            let (a, b) = (source.src(k), source.tgt(k));
            let mut per_target = Vec::new();
            for t in target.objects() {
                let entries = self
                    .left
                    .get(source.mor_id(k))
                    .and_then(|row| row.get(target.object_id(t)));
                let mut table = Vec::new();
                for tok in &elements[t.0][a.0] {
                    let out = match entries.and_then(|e| e.get(tok)) {
                        Some(v) => lookup(t.0, b.0, v)?,
                        None if source.is_identity(k) => lookup(t.0, a.0, tok)?,
                        None => {
                            return Err(CliError::Parse(format!(
                                "left action of `{}` is missing `{tok}`",
                                source.mor_id(k)
                            )))
                        }
                    };
                    table.push(out);
                }
                per_target.push(table);
            }
            left.push(per_target);
        }
        let mut right = Vec::new();
        for l in target.morphisms() {
            let (a, b) = (target.src(l), target.tgt(l));
            let mut per_source = Vec::new();
            for s in source.objects() {
                let entries = self
                    .right
                    .get(target.mor_id(l))
                    .and_then(|row| row.get(source.object_id(s)));
                let mut table = Vec::new();
                for tok in &elements[b.0][s.0] {
                    let out = match entries.and_then(|e| e.get(tok)) {
                        Some(v) => lookup(a.0, s.0, v)?,
                        None if target.is_identity(l) => lookup(b.0, s.0, tok)?,
                        None => {
                            return Err(CliError::Parse(format!(
                                "right action of `{}` is missing `{tok}`",
                                target.mor_id(l)
                            )))
                        }
                    };
                    table.push(out);
                }
                per_source.push(table);
            }
            right.push(per_source);
        }
        Profunctor::new(source.clone(), target.clone(), elements, left, right)
            .map_err(CliError::Lib)
    }

    fn from_profunctor(p: &Profunctor) -> RawProfunctor {
        let (source, target) = (p.source(), p.target());
        let mut elements = BTreeMap::new();
        for t in target.objects() {
            let mut row = BTreeMap::new();
            for s in source.objects() {
                row.insert(source.object_id(s).to_owned(), p.set(t, s).to_vec());
            }
            elements.insert(target.object_id(t).to_owned(), row);
        }
        let mut left = BTreeMap::new();
        for k in source.morphisms() {
            if source.is_identity(k) {
                continue;
            }
            let mut per_target = BTreeMap::new();
            for t in target.objects() {
                let mut table = BTreeMap::new();
                for (i, tok) in p.set(t, source.src(k)).iter().enumerate() {
                    table.insert(
                        tok.clone(),
                        p.set(t, source.tgt(k))[p.act_source(k, t, i)].clone(),
                    );
                }
                per_target.insert(target.object_id(t).to_owned(), table);
            }
            left.insert(source.mor_id(k).to_owned(), per_target);
        }
        let mut right = BTreeMap::new();
        for l in target.morphisms() {
            if target.is_identity(l) {
                continue;
            }
            let mut per_source = BTreeMap::new();
            for s in source.objects() {
                let mut table = BTreeMap::new();
                for (i, tok) in p.set(target.tgt(l), s).iter().enumerate() {
                    table.insert(
                        tok.clone(),
                        p.set(target.src(l), s)[p.act_target(l, s, i)].clone(),
                    );
                }
                per_source.insert(source.object_id(s).to_owned(), table);
            }
            right.insert(target.mor_id(l).to_owned(), per_source);
        }
        RawProfunctor {
            elements,
            left,
            right,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAlphaEntry {
    pub d: String,
    pub c_src: String,
    pub c_tgt: String,
    pub w: String,
    pub u: String,
    pub mor: String,
}

/// Abstract-bigluing-data file. The degrees in `d` are ignored; the collage
/// assigns the new stratum's degree itself.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAbd {
    pub c: RawCategory,
    pub d: RawCategory,
    pub u: RawProfunctor,
    pub w: RawProfunctor,
    pub alpha: Vec<RawAlphaEntry>,
}

impl RawAbd {
    pub fn resolve(&self) -> Result<AbstractBigluingData, CliError> {
        let c = fincat::validate(&self.c).map_err(CliError::Lib)?;
        let d = fincat::validate(&self.d).map_err(CliError::Lib)?.base().clone();
        let u = self.u.resolve(&d, c.base())?;
        let w = self.w.resolve(c.base(), &d)?;
        let cb = c.base();
        let mut alpha: Vec<Vec<Vec<Vec<Vec<Mor>>>>> = d
            .objects()
            .map(|dd| {
                cb.objects()
                    .map(|cf| {
                        cb.objects()
                            .map(|ct| {
                                vec![
                                    vec![Mor(usize::MAX); u.set(cf, dd).len()];
                                    w.set(dd, ct).len()
                                ]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        for entry in &self.alpha {
            let dd = d.object_by_id(&entry.d).map_err(CliError::Lib)?;
            let cf = cb.object_by_id(&entry.c_src).map_err(CliError::Lib)?;
            let ct = cb.object_by_id(&entry.c_tgt).map_err(CliError::Lib)?;
            let wi = w
                .set(dd, ct)
                .iter()
                .position(|t| t == &entry.w)
                .ok_or_else(|| CliError::Parse(format!("alpha entry: unknown w `{}`", entry.w)))?;
            let ui = u
                .set(cf, dd)
                .iter()
                .position(|t| t == &entry.u)
                .ok_or_else(|| CliError::Parse(format!("alpha entry: unknown u `{}`", entry.u)))?;
            alpha[dd.0][cf.0][ct.0][wi][ui] = cb.mor_by_id(&entry.mor).map_err(CliError::Lib)?;
        }
        for (dd, per_d) in alpha.iter().enumerate() {
            for per_cf in per_d {
                for per_ct in per_cf {
                    for row in per_ct {
                        if row.iter().any(|m| m.0 == usize::MAX) {
                            return Err(CliError::Parse(format!(
                                "alpha is not total at stratum object `{}`",
                                d.object_id(crate::fincat::Obj(dd))
                            )));
                        }
                    }
                }
            }
        }
        AbstractBigluingData::new(c, d, u, w, alpha).map_err(CliError::Lib)
    }

    pub fn from_abd(abd: &AbstractBigluingData) -> RawAbd {
        let cb = abd.c.base();
        let mut alpha = Vec::new();
        for dd in abd.d.objects() {
            for cf in cb.objects() {
                for ct in cb.objects() {
                    for (wi, wt) in abd.w.set(dd, ct).iter().enumerate() {
                        for (ui, ut) in abd.u.set(cf, dd).iter().enumerate() {
                            alpha.push(RawAlphaEntry {
                                d: abd.d.object_id(dd).to_owned(),
                                c_src: cb.object_id(cf).to_owned(),
                                c_tgt: cb.object_id(ct).to_owned(),
                                w: wt.clone(),
                                u: ut.clone(),
                                mor: cb.mor_id(abd.alpha_at(dd, cf, ct, wi, ui)).to_owned(),
                            });
                        }
                    }
                }
            }
        }
        // The stratum category re-enters the wire format with zero degrees.
        let d_raw = {
            let degreed = DegreedCategory::from_parts(
                abd.d.clone(),
                vec![0; abd.d.n_objects()],
            );
            fincat::to_raw(&degreed)
        };
        RawAbd {
            c: fincat::to_raw(&abd.c),
            d: d_raw,
            u: RawProfunctor::from_profunctor(&abd.u),
            w: RawProfunctor::from_profunctor(&abd.w),
            alpha,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSplit {
    pub down: String,
    pub up: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConnector {
    pub from: String,
    pub to: String,
    pub left: String,
    pub right: String,
    pub mid: String,
}

/// Functorial-factorization file. When `connectors` is omitted they are
/// derived as the first valid choice per square and then validated.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFf {
    pub up: Vec<String>,
    pub down: Vec<String>,
    pub split: BTreeMap<String, RawSplit>,
    #[serde(default)]
    pub connectors: Option<Vec<RawConnector>>,
}

impl RawFf {
    pub fn resolve(&self, cat: &DegreedCategory) -> Result<FunctorialFactorization, CliError> {
        let base = cat.base();
        let mut up: Vec<Mor> = Vec::new();
        for id in &self.up {
            up.push(base.mor_by_id(id).map_err(CliError::Lib)?);
        }
        let mut down: Vec<Mor> = Vec::new();
        for id in &self.down {
            down.push(base.mor_by_id(id).map_err(CliError::Lib)?);
        }
        // Identities belong to both classes implicitly.
        for x in base.objects() {
            let id = base.identity(x);
            if !up.contains(&id) {
                up.push(id);
            }
            if !down.contains(&id) {
                down.push(id);
            }
        }
        let mut split = Vec::new();
        for f in base.morphisms() {
            let entry = match self.split.get(base.mor_id(f)) {
                Some(e) => Factorization {
                    first: base.mor_by_id(&e.down).map_err(CliError::Lib)?,
                    second: base.mor_by_id(&e.up).map_err(CliError::Lib)?,
                },
                None if base.is_identity(f) => Factorization { first: f, second: f },
                None => {
                    return Err(CliError::Parse(format!(
                        "no splitting given for morphism `{}`",
                        base.mor_id(f)
                    )))
                }
            };
            split.push((f, entry));
        }
        let mut ff =
            FunctorialFactorization::derive(cat, &up, &down, split).map_err(CliError::Lib)?;
        if let Some(connectors) = &self.connectors {
            ff.connectors.clear();
            for c in connectors {
                let key = (
                    base.mor_by_id(&c.from).map_err(CliError::Lib)?,
                    base.mor_by_id(&c.to).map_err(CliError::Lib)?,
                    base.mor_by_id(&c.left).map_err(CliError::Lib)?,
                    base.mor_by_id(&c.right).map_err(CliError::Lib)?,
                );
                ff.connectors
                    .insert(key, base.mor_by_id(&c.mid).map_err(CliError::Lib)?);
            }
        }
        classify::validate_ff(cat, &ff).map_err(CliError::Lib)?;
        Ok(ff)
    }
}

/// Lifting-problem file: two diagram maps over one shape with the square's
/// top and bottom components.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLift {
    pub left: RawDiagramMap,
    pub right: RawDiagramMap,
    pub top: BTreeMap<String, BTreeMap<String, String>>,
    pub bottom: BTreeMap<String, BTreeMap<String, String>>,
}

impl RawLift {
    pub fn resolve(&self) -> Result<LiftingProblem, CliError> {
        let shape_cat = self.left.shape.resolve()?;
        let left = self.left.resolve(&shape_cat)?;
        let right = self.right.resolve(&shape_cat)?;
        let base = shape_cat.base();
        let comp = |table: &BTreeMap<String, BTreeMap<String, String>>,
                    from: &SetDiagram,
                    to: &SetDiagram|
         -> Result<Vec<Vec<usize>>, CliError> {
            let mut out = Vec::new();
            for x in base.objects() {
                let entries = table.get(base.object_id(x));
                let mut comp = Vec::new();
                for tok in from.set(x) {
                    let v = entries.and_then(|e| e.get(tok)).ok_or_else(|| {
                        CliError::Parse(format!(
                            "square component at `{}` is missing `{tok}`",
                            base.object_id(x)
                        ))
                    })?;
                    let idx = to.set(x).iter().position(|t| t == v).ok_or_else(|| {
                        CliError::Parse(format!("unknown element `{v}` in square component"))
                    })?;
                    comp.push(idx);
                }
                out.push(comp);
            }
            Ok(out)
        };
        let top = comp(&self.top, left.source(), right.source())?;
        let bottom = comp(&self.bottom, left.target(), right.target())?;
        LiftingProblem::new(left, right, top, bottom).map_err(CliError::Lib)
    }
}
