//! Context-window word similarity and threshold clustering.
//!
//! The pipeline turns raw text into an interned [`Corpus`], aggregates each
//! word's preceding and following context words over a fixed window size
//! `n`, scores word pairs by the ratio of matched context tokens to combined
//! context size (at most 1/2), and groups pairs whose score strictly
//! exceeds a rational threshold on both sides into connected-component
//! clusters. Candidate pairs come from inverted context indexes rather than
//! the full vocabulary cross product; an all-pairs reference path exists for
//! checking that shortcut.
//!
//! Scores and thresholds are exact integer rationals end to end. Every
//! artifact (corpus dump, index dump, cluster and report files) renders
//! byte-identically for identical inputs, independent of thread count.

pub mod clustering;
pub mod context;
pub mod corpus;
pub mod error;
pub mod report;
pub mod similarity;
pub mod threshold;
mod union_find;

pub use clustering::{
    cluster_stats, compare_models, compare_models_with, form_clusters, naive_similar_pairs,
    naive_similar_pairs_with, similar_pairs, similar_pairs_with, ClusterSet, ModelRecord,
    ModelReport, PairingOptions,
};
pub use context::{
    build_context_index, following_context, preceding_context, ContextIndex, ContextList,
};
pub use corpus::{
    normalize, segment_sentences, tokenize, BuildOptions, Corpus, Sentence, Vocabulary, WordId,
};
pub use error::{Error, Result};
pub use similarity::{
    candidate_pairs, candidate_pairs_filtered, match_count, pair_scores, side_similarity,
    ScoredPair, SideScore,
};
pub use threshold::Threshold;
