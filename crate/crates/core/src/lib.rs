//! Poset Ramsey numbers `R(P, Q_n)` at desk scale.
//!
//! The crate builds finite posets and blue/red colorings of Boolean
//! lattices, searches for induced copies, runs the chain lemma and the
//! subdivided-diamond pipeline with checkable certificates, and decides
//! small arrow relations exactly.
//!
//! ```
//! use poset_ramsey::{parse_poset_expression, exact_ramsey};
//!
//! let v = parse_poset_expression("K(1,2)").unwrap().construct().unwrap();
//! assert_eq!(exact_ramsey(&v, 1, 6).unwrap(), 3);
//! ```

pub mod bounds;
pub mod chain_lemma;
pub mod dpll;
pub mod embed;
pub mod error;
pub mod expr;
pub mod lattice;
pub mod permutations;
pub mod poset;
pub mod ramsey;
pub mod sd;

pub use bounds::{glue_bound, ramsey_bounds, sperner_alpha, table1, walzer_union_bound, BoundReport, Provenance};
pub use chain_lemma::{chain_or_cube, run_chain_lemma, verify_certificate, ChainLemmaResult, YChainCertificate};
pub use embed::{enumerate_copies, find_embedding, find_monochromatic_copy, CopySet, Embedding};
pub use error::{Error, Result};
pub use expr::{parse_poset_expression, NamedPoset, PosetExpression};
pub use lattice::{
    layered_coloring, thm4_witness, thm5_witness, verify_witness, Color, ColoredLattice, LayerSpec,
    SubsetCode,
};
pub use permutations::{
    count_proper, decode_restriction, encode_restriction, is_r_proper, is_t_close, proper_restriction,
    Permutation, ProperRestriction, RestrictionEncoding,
};
pub use poset::{Poset, PosetParameters};
pub use ramsey::{decide_arrow, exact_ramsey, export_cnf, ArrowInstance, SearchOptions, SearchOutcome};
pub use sd::{extract_sd, sd_search, verify_counting_estimate, CountingParameters, Estimate, SdSearchResult, SdWitness};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/posets.md")]
    mod posets {}
    #[doc = include_str!("../../../book/src/colorings.md")]
    mod colorings {}
    #[doc = include_str!("../../../book/src/embeddings.md")]
    mod embeddings {}
    #[doc = include_str!("../../../book/src/chain-lemma.md")]
    mod chain_lemma {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/subdivided-diamonds.md")]
    mod subdivided_diamonds {}
    #[doc = include_str!("../../../book/src/ramsey-search.md")]
    mod ramsey_search {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
}
