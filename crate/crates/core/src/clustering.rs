//! Threshold clustering: keep the pairs whose preceding and following
//! similarities both strictly exceed the threshold, then group them as
//! connected components of the pair graph.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::context::{build_context_index, ContextIndex};
use crate::corpus::{Corpus, Vocabulary, WordId};
use crate::error::Result;
use crate::similarity::{
    candidate_pairs_filtered, match_count, side_similarity, ScoredPair, SideScore,
};
use crate::threshold::Threshold;
use crate::union_find::UnionFind;

/// Knobs applied before pairing.
#[derive(Debug, Clone)]
pub struct PairingOptions {
    /// Words occurring fewer times than this never enter a pair. The default
    /// of 1 disables the filter.
    pub min_frequency: u64,
    /// Candidate-generation ceiling on context-word spread; see
    /// [`candidate_pairs_filtered`]. Never affects scoring.
    pub max_context_df: Option<usize>,
}

impl Default for PairingOptions {
    fn default() -> Self {
        PairingOptions {
            min_frequency: 1,
            max_context_df: None,
        }
    }
}

fn eligibility_mask(corpus: &Corpus, min_frequency: u64) -> Option<Vec<bool>> {
    if min_frequency <= 1 {
        return None;
    }
    Some(
        (0..corpus.vocabulary().len())
            .map(|w| {
                corpus
                    .word_frequency(WordId::new(w as u32))
                    .expect("dense id")
                    >= min_frequency
            })
            .collect(),
    )
}

fn score_candidates(
    index: &ContextIndex,
    candidates: &[(WordId, WordId)],
    threshold: Threshold,
) -> Vec<ScoredPair> {
    let mut pairs: Vec<ScoredPair> = candidates
        .par_iter()
        .filter_map(|&(a, b)| {
            let pre_a = &index.preceding_lists()[a.index()];
            let pre_b = &index.preceding_lists()[b.index()];
            // The match can never beat the smaller total; reject on totals
            // alone before paying for a merge.
            let best = pre_a.total().min(pre_b.total());
            let denom = pre_a.total() + pre_b.total();
            if !threshold.exceeded_by(best, denom) {
                return None;
            }
            let preceding = SideScore::new(match_count(pre_a, pre_b), denom);
            if !preceding.exceeds(threshold) {
                return None;
            }

            let fol_a = &index.following_lists()[a.index()];
            let fol_b = &index.following_lists()[b.index()];
            let best = fol_a.total().min(fol_b.total());
            let denom = fol_a.total() + fol_b.total();
            if !threshold.exceeded_by(best, denom) {
                return None;
            }
            let following = SideScore::new(match_count(fol_a, fol_b), denom);
            if !following.exceeds(threshold) {
                return None;
            }
            Some(ScoredPair::new(a, b, preceding, following))
        })
        .collect();
    // Parallel collection order is schedule-dependent; canonicalize.
    pairs.sort_unstable_by_key(ScoredPair::key);
    pairs
}

/// All pairs whose similarity strictly exceeds `threshold` on both sides, in
/// ascending `(a, b)` order. Candidates come from the inverted indexes; the
/// scores come from the full context lists.
pub fn similar_pairs(index: &ContextIndex, threshold: Threshold) -> Vec<ScoredPair> {
    let candidates = candidate_pairs_filtered(index, None, None);
    score_candidates(index, &candidates, threshold)
}

/// [`similar_pairs`] with pre-pairing filters. The index must have been
/// built from `corpus`.
pub fn similar_pairs_with(
    index: &ContextIndex,
    corpus: &Corpus,
    threshold: Threshold,
    options: &PairingOptions,
) -> Result<Vec<ScoredPair>> {
    index.verify_corpus(corpus)?;
    let mask = eligibility_mask(corpus, options.min_frequency);
    let candidates = candidate_pairs_filtered(index, mask.as_deref(), options.max_context_df);
    Ok(score_candidates(index, &candidates, threshold))
}

/// Reference pipeline: scores the full vocabulary cross product with no
/// candidate generation at all. Quadratic and deliberately plain; useful as
/// an independent check of the indexed path.
pub fn naive_similar_pairs(index: &ContextIndex, threshold: Threshold) -> Vec<ScoredPair> {
    naive_with_mask(index, threshold, None)
}

/// [`naive_similar_pairs`] with the same minimum-frequency filter the
/// indexed path applies. The index must have been built from `corpus`.
pub fn naive_similar_pairs_with(
    index: &ContextIndex,
    corpus: &Corpus,
    threshold: Threshold,
    min_frequency: u64,
) -> Result<Vec<ScoredPair>> {
    index.verify_corpus(corpus)?;
    let mask = eligibility_mask(corpus, min_frequency);
    Ok(naive_with_mask(index, threshold, mask.as_deref()))
}

fn naive_with_mask(
    index: &ContextIndex,
    threshold: Threshold,
    eligible: Option<&[bool]>,
) -> Vec<ScoredPair> {
    let vocab_len = index.vocab_len();
    let is_eligible = |w: usize| eligible.is_none_or(|mask| mask[w]);
    let mut pairs = Vec::new();
    for a in 0..vocab_len {
        if !is_eligible(a) {
            continue;
        }
        for b in a + 1..vocab_len {
            if !is_eligible(b) {
                continue;
            }
            let preceding =
                side_similarity(&index.preceding_lists()[a], &index.preceding_lists()[b]);
            let following =
                side_similarity(&index.following_lists()[a], &index.following_lists()[b]);
            if preceding.exceeds(threshold) && following.exceeds(threshold) {
                pairs.push(ScoredPair::new(
                    WordId::new(a as u32),
                    WordId::new(b as u32),
                    preceding,
                    following,
                ));
            }
        }
    }
    pairs
}

/// A partition of the paired subset of the vocabulary. Clusters hold at
/// least two words each; words inside a cluster are sorted by their string
/// form and clusters are sorted by their first word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSet {
    n: usize,
    threshold: Threshold,
    clusters: Vec<Vec<WordId>>,
    edge_count: usize,
}

impl ClusterSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    pub fn clusters(&self) -> &[Vec<WordId>] {
        &self.clusters
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }
}

/// Group the above-threshold pairs into connected components. Unpaired
/// words are omitted. `pairs` must be canonical, deduplicated, and refer to
/// ids of `vocabulary`.
pub fn form_clusters(
    pairs: &[ScoredPair],
    n: usize,
    threshold: Threshold,
    vocabulary: &Vocabulary,
) -> ClusterSet {
    let vocab_len = vocabulary.len();
    let mut uf = UnionFind::new(vocab_len);
    let mut paired = vec![false; vocab_len];
    for pair in pairs {
        uf.union(pair.a().get(), pair.b().get());
        paired[pair.a().index()] = true;
        paired[pair.b().index()] = true;
    }

    let mut members: Vec<Vec<WordId>> = vec![Vec::new(); vocab_len];
    for w in 0..vocab_len as u32 {
        if paired[w as usize] {
            members[uf.find(w) as usize].push(WordId::new(w));
        }
    }

    let word_of = |id: &WordId| vocabulary.word(*id).expect("cluster ids resolve");
    let mut clusters: Vec<Vec<WordId>> = members.into_iter().filter(|m| !m.is_empty()).collect();
    for cluster in &mut clusters {
        cluster.sort_by(|a, b| word_of(a).cmp(word_of(b)));
    }
    clusters.sort_by(|a, b| word_of(&a[0]).cmp(word_of(&b[0])));

    ClusterSet {
        n,
        threshold,
        clusters,
        edge_count: pairs.len(),
    }
}

/// Summary numbers for one window size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelRecord {
    pub n: usize,
    pub threshold: Threshold,
    pub clusters: usize,
    pub edges: usize,
    pub clustered_words: usize,
    pub max_cluster_size: usize,
    /// Cluster size to number of clusters of that size.
    pub histogram: BTreeMap<usize, usize>,
}

/// Per-n records for a cross-model comparison, ordered by n.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelReport {
    pub records: Vec<ModelRecord>,
}

/// Count clusters, edges and sizes of a cluster set.
pub fn cluster_stats(set: &ClusterSet) -> ModelRecord {
    let mut histogram = BTreeMap::new();
    let mut clustered_words = 0;
    let mut max_cluster_size = 0;
    for cluster in set.clusters() {
        *histogram.entry(cluster.len()).or_insert(0) += 1;
        clustered_words += cluster.len();
        max_cluster_size = max_cluster_size.max(cluster.len());
    }
    ModelRecord {
        n: set.n(),
        threshold: set.threshold(),
        clusters: set.clusters().len(),
        edges: set.edge_count(),
        clustered_words,
        max_cluster_size,
        histogram,
    }
}

/// Build an index per window size, cluster each, and report one record per
/// n in ascending order. Duplicate window sizes collapse.
pub fn compare_models(corpus: &Corpus, ns: &[usize], threshold: Threshold) -> Result<ModelReport> {
    compare_models_with(corpus, ns, threshold, &PairingOptions::default())
}

pub fn compare_models_with(
    corpus: &Corpus,
    ns: &[usize],
    threshold: Threshold,
    options: &PairingOptions,
) -> Result<ModelReport> {
    let mut sizes: Vec<usize> = ns.to_vec();
    sizes.sort_unstable();
    sizes.dedup();

    let mut records = Vec::with_capacity(sizes.len());
    for n in sizes {
        let index = build_context_index(corpus, n)?;
        let pairs = similar_pairs_with(&index, corpus, threshold, options)?;
        let set = form_clusters(&pairs, n, threshold, corpus.vocabulary());
        records.push(cluster_stats(&set));
    }
    Ok(ModelReport { records })
}
