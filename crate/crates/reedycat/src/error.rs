use thiserror::Error;

use crate::fincat::Violation;

/// Library-wide error type. Parse/IO failures belong to the CLI layer and are
/// not represented here.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid category presentation:\n{}", format_violations(.0))]
    InvalidCategory(Vec<Violation>),

    #[error("unknown object id `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism id `{0}`")]
    UnknownMorphism(String),

    #[error("unknown corpus entry `{0}`")]
    UnknownEntry(String),

    #[error("enumeration bounds exceeded: requested ({objects}, {morphisms}), caps are (3, 7)")]
    BoundsExceeded { objects: usize, morphisms: usize },

    #[error("category is not almost-Reedy in the requested mode: {0}")]
    NotAlmostReedy(String),

    #[error("category is not bistratified: {0}")]
    NotBistratified(String),

    #[error("category is not bistratified with discrete strata: {0}")]
    NotDiscreteBistratified(String),

    #[error("search size guard exceeded (cap {cap}): {context}")]
    SizeGuardExceeded { cap: u64, context: String },

    #[error("not a functor: {0}")]
    NotAFunctor(String),

    #[error("not a natural transformation: {0}")]
    NotFunctorial(String),

    #[error("invalid bigluing data: {0}")]
    InvalidBigluingData(String),

    #[error("not a collage at the requested split: {0}")]
    NotACollage(String),

    #[error("gamma after phi disagrees with the canonical comparison map: {0}")]
    FactorizationMismatch(String),

    #[error("invalid functorial factorization: {0}")]
    NotFsReedy(String),

    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
}

fn format_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}
