//! Property tests over randomized corpora, thresholds and graphs. The
//! indexed pipeline is checked against brute-force recounts and the
//! all-pairs reference path throughout.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use proptest::prelude::*;

use wordclust_core::{
    build_context_index, candidate_pairs, following_context, form_clusters, naive_similar_pairs,
    pair_scores, preceding_context, side_similarity, similar_pairs, BuildOptions, ContextIndex,
    Corpus, ScoredPair, SideScore, Threshold, Vocabulary, WordId,
};

/// Random sentences over a bounded vocabulary, rendered as danda-terminated
/// text. At most `max_sentences * 11` tokens.
fn corpus_text(max_vocab: usize, max_sentences: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::collection::vec(0..max_vocab, 1..12), 0..max_sentences).prop_map(
        |sentences| {
            sentences
                .iter()
                .map(|sentence| {
                    sentence
                        .iter()
                        .map(|w| format!("w{w:02}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect::<Vec<_>>()
                .join("\u{0964} ")
        },
    )
}

fn build(text: &str) -> Corpus {
    Corpus::build(&[text], &BuildOptions::default())
}

fn all_thresholds() -> Vec<Threshold> {
    vec![
        Threshold::parse("0.05").unwrap(),
        Threshold::parse("0.20").unwrap(),
        Threshold::parse("0.33").unwrap(),
        Threshold::new(1, 5).unwrap(),
    ]
}

proptest! {
    #[test]
    fn corpus_build_is_deterministic_and_conservative(text in corpus_text(50, 40)) {
        let first = build(&text);
        let second = build(&text);
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(first.dump(), second.dump());

        let vocab_len = first.vocabulary().len();
        let total: u64 = (0..vocab_len)
            .map(|w| first.word_frequency(WordId::new(w as u32)).unwrap())
            .sum();
        prop_assert_eq!(total, first.token_count());

        for word in first.vocabulary().words() {
            prop_assert!(!word.is_empty());
            prop_assert!(!word.chars().any(char::is_whitespace));
        }

        let reloaded = Corpus::parse_dump(&first.dump()).unwrap();
        prop_assert_eq!(first, reloaded);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn context_index_matches_brute_force(text in corpus_text(30, 30), n in 1usize..6) {
        let corpus = build(&text);
        let index = build_context_index(&corpus, n).unwrap();
        let vocab_len = corpus.vocabulary().len();

        // Recount multisets through the single-window operations.
        let mut pre: Vec<HashMap<WordId, u32>> = vec![HashMap::new(); vocab_len];
        let mut fol: Vec<HashMap<WordId, u32>> = vec![HashMap::new(); vocab_len];
        // Recount totals independently from the min() arithmetic.
        let mut pre_totals = vec![0u64; vocab_len];
        let mut fol_totals = vec![0u64; vocab_len];
        for sentence in corpus.sentences() {
            let len = sentence.len();
            for (position, &word) in sentence.tokens().iter().enumerate() {
                for ctx in preceding_context(sentence, position, n).unwrap() {
                    *pre[word.index()].entry(ctx).or_insert(0) += 1;
                }
                for ctx in following_context(sentence, position, n).unwrap() {
                    *fol[word.index()].entry(ctx).or_insert(0) += 1;
                }
                pre_totals[word.index()] += position.min(n) as u64;
                fol_totals[word.index()] += (len - 1 - position).min(n) as u64;
            }
        }

        for w in 0..vocab_len {
            let id = WordId::new(w as u32);
            let frequency = corpus.word_frequency(id).unwrap();
            for (list, counts, totals) in [
                (index.preceding_of(id).unwrap(), &pre[w], pre_totals[w]),
                (index.following_of(id).unwrap(), &fol[w], fol_totals[w]),
            ] {
                prop_assert_eq!(list.total(), totals);
                prop_assert_eq!(list.distinct(), counts.len());
                for (ctx, count) in list.iter() {
                    prop_assert_eq!(count, counts[&ctx]);
                }
                prop_assert!(list.total() <= n as u64 * frequency);
            }
        }

        // Adjacency is counted once on each side.
        let pre_sum: u64 = (0..vocab_len)
            .map(|w| index.preceding_of(WordId::new(w as u32)).unwrap().total())
            .sum();
        let fol_sum: u64 = (0..vocab_len)
            .map(|w| index.following_of(WordId::new(w as u32)).unwrap().total())
            .sum();
        prop_assert_eq!(pre_sum, fol_sum);

        // Side symmetry: u precedes w as often as w follows u.
        for w in 0..vocab_len {
            let id = WordId::new(w as u32);
            for (u, count) in index.preceding_of(id).unwrap().iter() {
                prop_assert_eq!(index.following_of(u).unwrap().count(id), count);
            }
        }

        // Identical inputs give identical dump bytes, and the dump parses
        // back to the same index.
        prop_assert_eq!(index.dump(), build_context_index(&corpus, n).unwrap().dump());
        let reloaded = ContextIndex::parse_dump(&index.dump()).unwrap();
        prop_assert_eq!(index, reloaded);
    }
}

#[test]
fn sentence_boundaries_confine_windows() {
    // Sentinels live in the neighbouring sentences; even a window wider
    // than every sentence must never leak them into the middle one.
    let corpus = build("left left sentinelone\u{0964} middle words here\u{0964} sentineltwo right");
    let index = build_context_index(&corpus, 5).unwrap();
    let sentinel_one = corpus.vocabulary().id("sentinelone").unwrap();
    let sentinel_two = corpus.vocabulary().id("sentineltwo").unwrap();
    for word in ["middle", "words", "here"] {
        let id = corpus.vocabulary().id(word).unwrap();
        for sentinel in [sentinel_one, sentinel_two] {
            assert_eq!(index.preceding_of(id).unwrap().count(sentinel), 0);
            assert_eq!(index.following_of(id).unwrap().count(sentinel), 0);
        }
    }
    // Within its own sentence the sentinel is ordinary context.
    let right = corpus.vocabulary().id("right").unwrap();
    assert_eq!(index.preceding_of(right).unwrap().count(sentinel_two), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn scores_are_symmetric_and_bounded(text in corpus_text(30, 25), n in 1usize..6) {
        let corpus = build(&text);
        let index = build_context_index(&corpus, n).unwrap();
        let vocab_len = corpus.vocabulary().len();

        for a in 0..vocab_len {
            let a = WordId::new(a as u32);
            // Self-similarity of a nonempty list is exactly one half.
            let own = index.preceding_of(a).unwrap();
            let self_score = side_similarity(own, own);
            if own.is_empty() {
                prop_assert_eq!(self_score.value(), 0.0);
            } else {
                prop_assert_eq!(self_score.value(), 0.5);
            }

            for b in (a.index() + 1)..vocab_len {
                let b = WordId::new(b as u32);
                let forward = pair_scores(&index, a, b).unwrap();
                let backward = pair_scores(&index, b, a).unwrap();
                prop_assert_eq!(forward, backward);

                for (side, x, y) in [
                    (forward.preceding(), index.preceding_of(a).unwrap(), index.preceding_of(b).unwrap()),
                    (forward.following(), index.following_of(a).unwrap(), index.following_of(b).unwrap()),
                ] {
                    // Range: 2 * matched <= denom, so value <= 1/2.
                    prop_assert!(2 * side.matched() <= side.denom());
                    prop_assert!(side.value() <= 0.5);
                    // Maximum value exactly when the multisets are equal and
                    // nonempty; zero exactly when nothing matches.
                    let at_max = side.denom() > 0 && 2 * side.matched() == side.denom();
                    prop_assert_eq!(at_max, x == y && !x.is_empty());
                    prop_assert_eq!(side.value() == 0.0, side.matched() == 0);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn candidates_are_exactly_the_positive_pairs(text in corpus_text(50, 40), n in 1usize..6) {
        let corpus = build(&text);
        let index = build_context_index(&corpus, n).unwrap();
        let candidates: BTreeSet<(WordId, WordId)> = candidate_pairs(&index).into_iter().collect();

        let mut expected = BTreeSet::new();
        let vocab_len = corpus.vocabulary().len();
        for a in 0..vocab_len {
            for b in (a + 1)..vocab_len {
                let a = WordId::new(a as u32);
                let b = WordId::new(b as u32);
                let pair = pair_scores(&index, a, b).unwrap();
                if pair.preceding().matched() > 0 && pair.following().matched() > 0 {
                    expected.insert((a, b));
                }
            }
        }
        prop_assert_eq!(candidates, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn indexed_pipeline_equals_reference(text in corpus_text(50, 40), n in 1usize..6) {
        let corpus = build(&text);
        let index = build_context_index(&corpus, n).unwrap();
        for threshold in all_thresholds() {
            let fast = similar_pairs(&index, threshold);
            let naive = naive_similar_pairs(&index, threshold);
            prop_assert_eq!(fast, naive);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn raising_the_threshold_only_removes_pairs(text in corpus_text(40, 30), n in 1usize..6) {
        let corpus = build(&text);
        let index = build_context_index(&corpus, n).unwrap();
        let mut thresholds = all_thresholds();
        thresholds.sort_by(|a, b| {
            (u64::from(a.numerator()) * u64::from(b.denominator()))
                .cmp(&(u64::from(b.numerator()) * u64::from(a.denominator())))
        });
        let mut previous: Option<BTreeSet<(WordId, WordId)>> = None;
        for threshold in thresholds {
            let keys: BTreeSet<(WordId, WordId)> =
                similar_pairs(&index, threshold).iter().map(ScoredPair::key).collect();
            if let Some(ref lower) = previous {
                prop_assert!(keys.is_subset(lower), "tighter threshold admitted new pairs");
            }
            previous = Some(keys);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn clusters_partition_the_paired_words(text in corpus_text(40, 30), n in 1usize..6) {
        let corpus = build(&text);
        let index = build_context_index(&corpus, n).unwrap();
        let threshold = Threshold::new(1, 5).unwrap();
        let pairs = similar_pairs(&index, threshold);
        let set = form_clusters(&pairs, n, threshold, corpus.vocabulary());

        let mut seen = BTreeSet::new();
        for cluster in set.clusters() {
            prop_assert!(cluster.len() >= 2);
            for &word in cluster {
                prop_assert!(seen.insert(word), "word in two clusters");
            }
        }
        let incident: BTreeSet<WordId> = pairs
            .iter()
            .flat_map(|p| [p.a(), p.b()])
            .collect();
        prop_assert_eq!(seen, incident);

        // No above-threshold pair may span two clusters.
        let mut cluster_of = HashMap::new();
        for (i, cluster) in set.clusters().iter().enumerate() {
            for &word in cluster {
                cluster_of.insert(word, i);
            }
        }
        for pair in &pairs {
            prop_assert_eq!(cluster_of[&pair.a()], cluster_of[&pair.b()]);
        }
    }
}

/// Transitive-closure reference: repeated sweeps over the edge list until
/// component labels stop changing.
fn closure_components(node_count: u32, edges: &[(u32, u32)]) -> BTreeSet<Vec<u32>> {
    let mut label: Vec<u32> = (0..node_count).collect();
    loop {
        let mut changed = false;
        for &(a, b) in edges {
            let low = label[a as usize].min(label[b as usize]);
            if label[a as usize] != low {
                label[a as usize] = low;
                changed = true;
            }
            if label[b as usize] != low {
                label[b as usize] = low;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut incident = vec![false; node_count as usize];
    for &(a, b) in edges {
        incident[a as usize] = true;
        incident[b as usize] = true;
    }
    let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for node in 0..node_count {
        if incident[node as usize] {
            groups.entry(label[node as usize]).or_default().push(node);
        }
    }
    groups.into_values().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]
    #[test]
    fn components_match_transitive_closure(
        raw_edges in prop::collection::vec((0u32..200, 0u32..200), 0..300)
    ) {
        let mut vocabulary = Vocabulary::new();
        for i in 0..200 {
            vocabulary.intern(&format!("w{i:03}"));
        }
        let mut edges: Vec<(u32, u32)> = raw_edges
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        edges.dedup();

        let score = SideScore::new(1, 3);
        let pairs: Vec<ScoredPair> = edges
            .iter()
            .map(|&(a, b)| ScoredPair::new(WordId::new(a), WordId::new(b), score, score))
            .collect();
        let threshold = Threshold::new(1, 5).unwrap();
        let set = form_clusters(&pairs, 3, threshold, &vocabulary);

        // Zero-padded words make string order equal id order, so clusters
        // can be compared directly against the numeric reference.
        let got: BTreeSet<Vec<u32>> = set
            .clusters()
            .iter()
            .map(|c| c.iter().map(|w| w.get()).collect())
            .collect();
        prop_assert_eq!(got, closure_components(200, &edges));
    }
}

#[test]
fn exact_threshold_score_is_excluded() {
    // pre(x) = {p:1}, pre(y) = {p:1, q:3}: the preceding score of (x, y) is
    // exactly 1/5 while the following score is 1/2. At a threshold of 1/5
    // the pair must stay out; just below, it gets in.
    let corpus = build("p x z\u{0964} p y z\u{0964} q y\u{0964} q y\u{0964} q y");
    let index = build_context_index(&corpus, 1).unwrap();
    let x = corpus.vocabulary().id("x").unwrap();
    let y = corpus.vocabulary().id("y").unwrap();

    let pair = pair_scores(&index, x, y).unwrap();
    assert_eq!(
        (pair.preceding().matched(), pair.preceding().denom()),
        (1, 5)
    );
    assert_eq!(
        (pair.following().matched(), pair.following().denom()),
        (1, 2)
    );

    let at = Threshold::new(1, 5).unwrap();
    let below = Threshold::parse("0.19").unwrap();
    let key = if x < y { (x, y) } else { (y, x) };

    let at_keys: Vec<_> = similar_pairs(&index, at)
        .iter()
        .map(ScoredPair::key)
        .collect();
    assert!(
        !at_keys.contains(&key),
        "score equal to threshold must be excluded"
    );
    assert!(!pair.preceding().exceeds(at));

    let below_keys: Vec<_> = similar_pairs(&index, below)
        .iter()
        .map(ScoredPair::key)
        .collect();
    assert!(below_keys.contains(&key));
}
