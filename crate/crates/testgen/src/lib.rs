//! Deterministic synthetic-corpus generation for tests and benchmarks.
//!
//! Everything here is a pure function of the seed and the configuration.
//! Sampling uses integer weights only, so generated text is byte-identical
//! across platforms and Rust versions.

/// SplitMix64 generator (Steele, Lea & Flood). Small state, good enough for
/// fixture generation, and trivially reproducible.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound`. `bound` must be nonzero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be nonzero");
        self.next_u64() % bound
    }
}

/// Shape of a synthetic corpus.
#[derive(Debug, Clone)]
pub struct SynthConfig {
    /// Number of distinct words in the pool.
    pub vocab: usize,
    /// Number of sentences to emit.
    pub sentences: usize,
    /// Minimum words per sentence (inclusive).
    pub min_words: usize,
    /// Maximum words per sentence (inclusive).
    pub max_words: usize,
    /// Harmonic (rank-weighted) word distribution instead of uniform.
    pub zipf: bool,
}

impl SynthConfig {
    pub fn small(vocab: usize, sentences: usize) -> Self {
        Self {
            vocab,
            sentences,
            min_words: 1,
            max_words: 10,
            zipf: false,
        }
    }
}

/// Word at `rank` in the pool. Zero-padded so lexicographic order equals
/// rank order, which keeps cluster canonicalization easy to reason about in
/// assertions.
pub fn word(rank: usize) -> String {
    format!("w{rank:05}")
}

/// Generate corpus text: sentences of pool words, terminated alternately by
/// the danda and the ASCII full stop, eight sentences per line.
pub fn synth_text(seed: u64, cfg: &SynthConfig) -> String {
    assert!(cfg.vocab > 0, "vocab must be nonzero");
    assert!(
        cfg.min_words >= 1 && cfg.min_words <= cfg.max_words,
        "invalid sentence length range"
    );

    // Integer rank weights: harmonic when zipf, flat otherwise.
    let weights: Vec<u64> = (0..cfg.vocab)
        .map(|r| {
            if cfg.zipf {
                1_000_000 / (r as u64 + 1)
            } else {
                1
            }
        })
        .collect();
    let cumulative: Vec<u64> = weights
        .iter()
        .scan(0u64, |acc, w| {
            *acc += w.max(&1);
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().expect("nonempty vocab");

    let mut rng = SplitMix64::new(seed);
    let mut out = String::new();
    let span = (cfg.max_words - cfg.min_words + 1) as u64;
    for i in 0..cfg.sentences {
        let len = cfg.min_words + rng.next_below(span) as usize;
        for j in 0..len {
            if j > 0 {
                out.push(' ');
            }
            let pick = rng.next_below(total);
            let rank = cumulative.partition_point(|&c| c <= pick);
            out.push_str(&word(rank));
        }
        out.push(if i % 2 == 0 { '\u{0964}' } else { '.' });
        out.push(if i % 8 == 7 { '\n' } else { ' ' });
    }
    out
}

/// Approximate token count of a config (for sizing fixtures in tests).
pub fn expected_tokens(cfg: &SynthConfig) -> usize {
    cfg.sentences * (cfg.min_words + cfg.max_words) / 2
}
