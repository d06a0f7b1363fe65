//! Compact Lie group data, torus embeddings, and the shared-torus search.

mod embedding;
mod group;
mod torusmap;
mod weyl;

pub use embedding::{
    check_inclusion_possible, embed_recipe, embedding_from_map, standard_embedding, Embedding,
    EmbeddingKind,
};
pub use group::{
    make_group, make_group_bounded, parse_label, Exceptional, Factor, GroupDatum, Mode, WeylBlock,
    WeylType, DEFAULT_MAX_RANK,
};
pub use torusmap::{compose, same_column_space, substitute_linear, IntMatrix, TorusMap};
pub use weyl::{
    verify_weyl_witness, weyl_orbit_search, weyl_orbit_search_capped, WeylElement,
    DEFAULT_WEYL_RANK_CAP,
};
