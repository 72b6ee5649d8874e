//! Pairwise context similarity: the match ratio between two words' context
//! multisets on one side, and inverted-index candidate generation that
//! avoids scoring the full vocabulary cross product.

use crate::context::{ContextIndex, ContextList};
use crate::corpus::WordId;
use crate::error::{Error, Result};
use crate::threshold::Threshold;

/// Render `num/den` as a decimal with 4 places, rounding half up in integer
/// arithmetic. `den == 0` renders as zero.
pub fn decimal4(num: u64, den: u64) -> String {
    if den == 0 {
        return "0.0000".to_string();
    }
    let scaled = u128::from(num) * 10_000;
    let q = scaled / u128::from(den);
    let r = scaled % u128::from(den);
    let rounded = q + u128::from(2 * r >= u128::from(den));
    format!("{}.{:04}", rounded / 10_000, rounded % 10_000)
}

/// One side of a pair similarity, kept as exact integers. The value is
/// `matched / denom` where `denom` is the sum of the two list totals; it is
/// zero when both lists are empty and never exceeds 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideScore {
    matched: u64,
    denom: u64,
}

impl SideScore {
    pub fn new(matched: u64, denom: u64) -> Self {
        SideScore { matched, denom }
    }

    pub fn matched(&self) -> u64 {
        self.matched
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn value(&self) -> f64 {
        if self.denom == 0 {
            0.0
        } else {
            self.matched as f64 / self.denom as f64
        }
    }

    /// Strict comparison against a threshold, in integer arithmetic.
    pub fn exceeds(&self, threshold: Threshold) -> bool {
        threshold.exceeded_by(self.matched, self.denom)
    }

    /// Display rendering at 4 decimal places.
    pub fn display_value(&self) -> String {
        if self.denom == 0 {
            "0.0000".to_string()
        } else {
            decimal4(self.matched, self.denom)
        }
    }
}

/// Number of matched context tokens between two multisets: the sum over all
/// words of the smaller of the two counts.
pub fn match_count(x: &ContextList, y: &ContextList) -> u64 {
    let mut xs = x.iter().peekable();
    let mut ys = y.iter().peekable();
    let mut matched = 0u64;
    while let (Some(&(xw, xc)), Some(&(yw, yc))) = (xs.peek(), ys.peek()) {
        match xw.cmp(&yw) {
            std::cmp::Ordering::Less => {
                xs.next();
            }
            std::cmp::Ordering::Greater => {
                ys.next();
            }
            std::cmp::Ordering::Equal => {
                matched += u64::from(xc.min(yc));
                xs.next();
                ys.next();
            }
        }
    }
    matched
}

/// Similarity of two context lists: matched tokens over the sum of the two
/// list sizes.
pub fn side_similarity(x: &ContextList, y: &ContextList) -> SideScore {
    SideScore {
        matched: match_count(x, y),
        denom: x.total() + y.total(),
    }
}

/// An unordered word pair with its preceding-side and following-side
/// similarity. Stored with `a < b`; the scores are symmetric in the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoredPair {
    a: WordId,
    b: WordId,
    preceding: SideScore,
    following: SideScore,
}

impl ScoredPair {
    /// Canonicalize `(a, b)` ordering. The two words must be distinct.
    pub fn new(a: WordId, b: WordId, preceding: SideScore, following: SideScore) -> Self {
        debug_assert_ne!(a, b, "a scored pair needs two distinct words");
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        ScoredPair {
            a,
            b,
            preceding,
            following,
        }
    }

    pub fn a(&self) -> WordId {
        self.a
    }

    pub fn b(&self) -> WordId {
        self.b
    }

    pub fn preceding(&self) -> SideScore {
        self.preceding
    }

    pub fn following(&self) -> SideScore {
        self.following
    }

    pub fn key(&self) -> (WordId, WordId) {
        (self.a, self.b)
    }
}

/// Score one pair of distinct words on both sides.
pub fn pair_scores(index: &ContextIndex, a: WordId, b: WordId) -> Result<ScoredPair> {
    if a == b {
        return Err(Error::IdenticalPair(a));
    }
    let preceding = side_similarity(index.preceding_of(a)?, index.preceding_of(b)?);
    let following = side_similarity(index.following_of(a)?, index.following_of(b)?);
    Ok(ScoredPair::new(a, b, preceding, following))
}

/// Inverted index for one side: context word id to the ascending list of
/// words whose context contains it.
fn invert(lists: &[ContextList]) -> Vec<Vec<u32>> {
    let mut inverted: Vec<Vec<u32>> = vec![Vec::new(); lists.len()];
    for (word, list) in lists.iter().enumerate() {
        for (ctx, _) in list.iter() {
            inverted[ctx.index()].push(word as u32);
        }
    }
    inverted
}

/// Every unordered pair whose preceding multisets share at least one word
/// and whose following multisets share at least one word, each pair exactly
/// once in ascending `(a, b)` order. These are exactly the pairs with both
/// side scores positive.
pub fn candidate_pairs(index: &ContextIndex) -> Vec<(WordId, WordId)> {
    candidate_pairs_filtered(index, None, None)
}

/// [`candidate_pairs`] with an optional word eligibility mask and an
/// optional ceiling on context-word spread: context words contained in the
/// contexts of more than `max_context_df` distinct words are skipped during
/// generation (a recall/runtime trade-off; scoring always uses full lists).
pub fn candidate_pairs_filtered(
    index: &ContextIndex,
    eligible: Option<&[bool]>,
    max_context_df: Option<usize>,
) -> Vec<(WordId, WordId)> {
    let vocab_len = index.vocab_len();
    assert!(vocab_len < u32::MAX as usize, "vocabulary too large");
    if let Some(mask) = eligible {
        assert_eq!(mask.len(), vocab_len, "eligibility mask length mismatch");
    }
    let is_eligible = |w: u32| eligible.is_none_or(|mask| mask[w as usize]);
    let within_ceiling =
        |list: &Vec<u32>| max_context_df.is_none_or(|ceiling| list.len() <= ceiling);

    let inverted_pre = invert(index.preceding_lists());
    let inverted_fol = invert(index.following_lists());

    // Stamp arrays instead of per-word hash sets: a pair survives when its
    // second word is stamped by both sides for the current first word.
    let mut pre_stamp = vec![u32::MAX; vocab_len];
    let mut fol_stamp = vec![u32::MAX; vocab_len];
    let mut pairs: Vec<(WordId, WordId)> = Vec::new();
    let mut found: Vec<u32> = Vec::new();

    for a in 0..vocab_len as u32 {
        if !is_eligible(a) {
            continue;
        }
        let pre_list = &index.preceding_lists()[a as usize];
        let fol_list = &index.following_lists()[a as usize];
        if pre_list.is_empty() || fol_list.is_empty() {
            continue;
        }

        for (ctx, _) in pre_list.iter() {
            let sharers = &inverted_pre[ctx.index()];
            if !within_ceiling(sharers) {
                continue;
            }
            let from = sharers.partition_point(|&b| b <= a);
            for &b in &sharers[from..] {
                if is_eligible(b) {
                    pre_stamp[b as usize] = a;
                }
            }
        }

        found.clear();
        for (ctx, _) in fol_list.iter() {
            let sharers = &inverted_fol[ctx.index()];
            if !within_ceiling(sharers) {
                continue;
            }
            let from = sharers.partition_point(|&b| b <= a);
            for &b in &sharers[from..] {
                if pre_stamp[b as usize] == a && fol_stamp[b as usize] != a && is_eligible(b) {
                    fol_stamp[b as usize] = a;
                    found.push(b);
                }
            }
        }
        found.sort_unstable();
        pairs.extend(found.iter().map(|&b| (WordId::new(a), WordId::new(b))));
    }
    pairs
}
