//! Per-word context aggregation: for a fixed window size `n`, the multiset
//! of the up-to-`n` words immediately before (and after) every occurrence of
//! a word, windows truncated at sentence boundaries.

use std::fmt::Write as _;

use crate::corpus::{Corpus, Sentence, WordId};
use crate::error::{Error, Result};

/// Aggregated context multiset of one word on one side. Entries are sorted
/// by word id and carry positive counts; `total` is the multiset size and is
/// the word's contribution to similarity denominators.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContextList {
    entries: Vec<(WordId, u32)>,
    total: u64,
}

impl ContextList {
    fn from_sorted(entries: Vec<(WordId, u32)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        let total = entries.iter().map(|&(_, c)| u64::from(c)).sum();
        ContextList { entries, total }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct context words.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn count(&self, word: WordId) -> u32 {
        match self.entries.binary_search_by_key(&word, |&(w, _)| w) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (WordId, u32)> + '_ {
        self.entries.iter().copied()
    }
}

/// The up-to-`n` words immediately before `position`, within the sentence
/// only, in surface (left-to-right) order.
pub fn preceding_context(sentence: &Sentence, position: usize, n: usize) -> Result<Vec<WordId>> {
    let len = sentence.len();
    if position >= len {
        return Err(Error::PositionOutOfRange { position, len });
    }
    let start = position.saturating_sub(n);
    Ok(sentence.tokens()[start..position].to_vec())
}

/// The up-to-`n` words immediately after `position`, within the sentence
/// only, in surface order.
pub fn following_context(sentence: &Sentence, position: usize, n: usize) -> Result<Vec<WordId>> {
    let len = sentence.len();
    if position >= len {
        return Err(Error::PositionOutOfRange { position, len });
    }
    let end = (position + 1).saturating_add(n).min(len);
    Ok(sentence.tokens()[position + 1..end].to_vec())
}

/// Both-side context index for a whole corpus at window size `n`. Immutable
/// once built; every vocabulary word has an entry on each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextIndex {
    n: usize,
    preceding: Vec<ContextList>,
    following: Vec<ContextList>,
    corpus_digest: u64,
}

/// Sort, then collapse runs of equal (word, context) pairs into per-word
/// sorted count lists covering ids `0..vocab_len`.
fn freeze_side(mut pairs: Vec<(u32, u32)>, vocab_len: usize) -> Vec<ContextList> {
    pairs.sort_unstable();
    let mut lists: Vec<ContextList> = vec![ContextList::default(); vocab_len];
    let mut i = 0;
    while i < pairs.len() {
        let word = pairs[i].0;
        let mut entries = Vec::new();
        while i < pairs.len() && pairs[i].0 == word {
            let ctx = pairs[i].1;
            let mut count = 0u32;
            while i < pairs.len() && pairs[i].0 == word && pairs[i].1 == ctx {
                count += 1;
                i += 1;
            }
            entries.push((WordId::new(ctx), count));
        }
        lists[word as usize] = ContextList::from_sorted(entries);
    }
    lists
}

/// Build the context index for `corpus` at window size `n`.
pub fn build_context_index(corpus: &Corpus, n: usize) -> Result<ContextIndex> {
    if n == 0 {
        return Err(Error::InvalidParameter("window size n must be >= 1".into()));
    }
    let vocab_len = corpus.vocabulary().len();
    let mut pre_pairs: Vec<(u32, u32)> = Vec::new();
    let mut fol_pairs: Vec<(u32, u32)> = Vec::new();

    for sentence in corpus.sentences() {
        let tokens = sentence.tokens();
        let len = tokens.len();
        for (position, &word) in tokens.iter().enumerate() {
            let start = position.saturating_sub(n);
            for &ctx in &tokens[start..position] {
                pre_pairs.push((word.get(), ctx.get()));
            }
            let end = (position + 1).saturating_add(n).min(len);
            for &ctx in &tokens[position + 1..end] {
                fol_pairs.push((word.get(), ctx.get()));
            }
        }
    }

    Ok(ContextIndex {
        n,
        preceding: freeze_side(pre_pairs, vocab_len),
        following: freeze_side(fol_pairs, vocab_len),
        corpus_digest: corpus.source_digest(),
    })
}

impl ContextIndex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vocab_len(&self) -> usize {
        self.preceding.len()
    }

    pub fn corpus_digest(&self) -> u64 {
        self.corpus_digest
    }

    pub fn preceding_of(&self, word: WordId) -> Result<&ContextList> {
        self.preceding
            .get(word.index())
            .ok_or(Error::UnknownWord(word))
    }

    pub fn following_of(&self, word: WordId) -> Result<&ContextList> {
        self.following
            .get(word.index())
            .ok_or(Error::UnknownWord(word))
    }

    pub fn preceding_lists(&self) -> &[ContextList] {
        &self.preceding
    }

    pub fn following_lists(&self) -> &[ContextList] {
        &self.following
    }

    /// Error out unless this index was built from `corpus`.
    pub fn verify_corpus(&self, corpus: &Corpus) -> Result<()> {
        if self.corpus_digest != corpus.source_digest()
            || self.vocab_len() != corpus.vocabulary().len()
        {
            return Err(Error::DigestMismatch {
                expected: format!("{:016x}", self.corpus_digest),
                found: format!("{:016x}", corpus.source_digest()),
            });
        }
        Ok(())
    }

    /// Render the line-oriented dump: a header, then a `P` and an `F` line
    /// per word with `ctx:count` entries sorted by context id. Empty lists
    /// keep the prefix with no entries.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "CTXIDX v1 n={} vocab={} digest={:016x}",
            self.n,
            self.vocab_len(),
            self.corpus_digest
        );
        for word in 0..self.vocab_len() {
            for (prefix, side) in [("P", &self.preceding), ("F", &self.following)] {
                out.push_str(prefix);
                out.push('\t');
                let _ = write!(out, "{word}");
                out.push('\t');
                for (i, (ctx, count)) in side[word].iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    let _ = write!(out, "{}:{}", ctx.get(), count);
                }
                out.push('\n');
            }
        }
        out
    }

    /// Parse a dump produced by [`ContextIndex::dump`].
    pub fn parse_dump(text: &str) -> Result<ContextIndex> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty dump"))?;

        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 5 || fields[0] != "CTXIDX" {
            return Err(Error::parse(
                1,
                "expected header `CTXIDX v1 n=<n> vocab=<V> digest=<digest>`",
            ));
        }
        if fields[1] != "v1" {
            return Err(Error::parse(
                1,
                format!("unsupported version {}", fields[1]),
            ));
        }
        let n: usize = fields[2]
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::parse(1, "bad n field"))?;
        if n == 0 {
            return Err(Error::parse(1, "window size n must be >= 1"));
        }
        let vocab_len: usize = fields[3]
            .strip_prefix("vocab=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::parse(1, "bad vocab field"))?;
        let corpus_digest = fields[4]
            .strip_prefix("digest=")
            .and_then(|v| u64::from_str_radix(v, 16).ok())
            .ok_or_else(|| Error::parse(1, "bad digest field"))?;

        let mut preceding = Vec::with_capacity(vocab_len);
        let mut following = Vec::with_capacity(vocab_len);
        for word in 0..vocab_len {
            for (prefix, side) in [("P", &mut preceding), ("F", &mut following)] {
                let (idx, line) = lines
                    .next()
                    .ok_or_else(|| Error::parse(2 * word + 2, "unexpected end of dump"))?;
                let lineno = idx + 1;
                let mut parts = line.splitn(3, '\t');
                let tag = parts.next().unwrap_or_default();
                let id = parts.next().unwrap_or_default();
                let entries = parts
                    .next()
                    .ok_or_else(|| Error::parse(lineno, "expected three tab-separated fields"))?;
                if tag != prefix {
                    return Err(Error::parse(
                        lineno,
                        format!("expected {prefix} line, got {tag:?}"),
                    ));
                }
                if id.parse::<usize>() != Ok(word) {
                    return Err(Error::parse(
                        lineno,
                        format!("expected word id {word}, got {id:?}"),
                    ));
                }
                let mut list = Vec::new();
                if !entries.is_empty() {
                    for entry in entries.split(' ') {
                        let (ctx, count) = entry
                            .split_once(':')
                            .ok_or_else(|| Error::parse(lineno, format!("bad entry {entry:?}")))?;
                        let ctx: u32 = ctx
                            .parse()
                            .map_err(|_| Error::parse(lineno, format!("bad context id {ctx:?}")))?;
                        let count: u32 = count
                            .parse()
                            .map_err(|_| Error::parse(lineno, format!("bad count {count:?}")))?;
                        if ctx as usize >= vocab_len {
                            return Err(Error::parse(
                                lineno,
                                format!("context id {ctx} out of range"),
                            ));
                        }
                        if count == 0 {
                            return Err(Error::parse(lineno, "zero count"));
                        }
                        if let Some(&(last, _)) = list.last() {
                            if WordId::new(ctx) <= last {
                                return Err(Error::parse(
                                    lineno,
                                    "context ids must be strictly ascending",
                                ));
                            }
                        }
                        list.push((WordId::new(ctx), count));
                    }
                }
                side.push(ContextList::from_sorted(list));
            }
        }
        if let Some((idx, _)) = lines.next() {
            return Err(Error::parse(idx + 1, "trailing data after index"));
        }

        Ok(ContextIndex {
            n,
            preceding,
            following,
            corpus_digest,
        })
    }
}
