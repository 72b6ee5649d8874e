//! Text ingestion: normalization, sentence segmentation, tokenization and
//! interning into a deterministic, immutable [`Corpus`].

use std::collections::HashMap;
use std::fmt;

use unicode_normalization::UnicodeNormalization;
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::error::{Error, Result};

/// Dense identifier of a vocabulary word. Ids cover `0..vocabulary_len()`
/// and are assigned in first-occurrence order over the normalized input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordId(u32);

impl WordId {
    pub fn new(raw: u32) -> Self {
        WordId(raw)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for WordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One sentence as a sequence of word ids, in surface order. Punctuation is
/// never a token and tokens are never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<WordId>,
}

impl Sentence {
    pub fn new(tokens: Vec<WordId>) -> Self {
        Sentence { tokens }
    }

    pub fn tokens(&self) -> &[WordId] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Bijective mapping between word strings and dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    ids: HashMap<String, WordId>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Id for `word`, interning it if unseen. Ids are handed out densely in
    /// call order.
    pub fn intern(&mut self, word: &str) -> WordId {
        if let Some(&id) = self.ids.get(word) {
            return id;
        }
        let id = WordId(self.words.len() as u32);
        self.words.push(word.to_string());
        self.ids.insert(word.to_string(), id);
        id
    }

    pub fn id(&self, word: &str) -> Option<WordId> {
        self.ids.get(word).copied()
    }

    pub fn word(&self, id: WordId) -> Result<&str> {
        self.words
            .get(id.index())
            .map(String::as_str)
            .ok_or(Error::UnknownWord(id))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// Knobs for corpus construction.
#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Lowercase ASCII letters during normalization. Off by default: Bangla
    /// has no case and folding is a corpus-dependent choice.
    pub fold_ascii: bool,
}

/// Canonical composition plus optional ASCII folding. Applied before any
/// segmentation so that composed and decomposed renderings of the same word
/// intern to one id.
pub fn normalize(text: &str, options: &BuildOptions) -> String {
    let composed: String = text.nfc().collect();
    if options.fold_ascii {
        composed
            .chars()
            .map(|c| {
                if c.is_ascii_uppercase() {
                    c.to_ascii_lowercase()
                } else {
                    c
                }
            })
            .collect()
    } else {
        composed
    }
}

/// Sentence terminators: danda, double danda and the Latin set.
fn is_terminator(c: char) -> bool {
    matches!(c, '\u{0964}' | '\u{0965}' | '.' | '?' | '!')
}

/// Maximal runs of lines that are not entirely whitespace. A blank line acts
/// as a paragraph break; a lone newline does not.
fn paragraphs(text: &str) -> Vec<&str> {
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    let mut end = 0;
    let mut pos = 0;
    for line in text.split_inclusive('\n') {
        let line_start = pos;
        pos += line.len();
        if line.trim().is_empty() {
            if let Some(s) = start.take() {
                spans.push(&text[s..end]);
            }
        } else {
            if start.is_none() {
                start = Some(line_start);
            }
            end = pos;
        }
    }
    if let Some(s) = start {
        spans.push(&text[s..end]);
    }
    spans
}

/// Split `text` into raw sentence strings. Terminators are consumed, empty
/// segments are dropped, and trailing text without a terminator forms a
/// final sentence.
pub fn segment_sentences(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for paragraph in paragraphs(text) {
        for segment in paragraph.split(is_terminator) {
            let segment = segment.trim();
            if !segment.is_empty() {
                out.push(segment);
            }
        }
    }
    out
}

fn is_stripped(c: char) -> bool {
    matches!(
        c.general_category_group(),
        GeneralCategoryGroup::Punctuation | GeneralCategoryGroup::Symbol
    )
}

/// Split a raw sentence into word tokens: Unicode whitespace separates
/// tokens, then leading and trailing punctuation and symbol characters are
/// stripped. Interior punctuation (hyphens and the like) is kept. Tokens that
/// strip to nothing are dropped.
pub fn tokenize(sentence: &str) -> Vec<&str> {
    sentence
        .split_whitespace()
        .map(|token| token.trim_matches(is_stripped))
        .filter(|token| !token.is_empty())
        .collect()
}

/// FNV-1a, 64-bit. Used as a stable content digest binding dumps to their
/// source; not cryptographic.
fn fnv1a64(state: u64, bytes: &[u8]) -> u64 {
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = state;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(PRIME);
    }
    hash
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;

/// An interned, immutable corpus: sentences of word ids plus the vocabulary
/// that resolves them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Sentence>,
    vocabulary: Vocabulary,
    token_count: u64,
    source_digest: u64,
    frequencies: Vec<u64>,
}

impl Corpus {
    /// Build from already-decoded documents, in document order.
    pub fn build<S: AsRef<str>>(documents: &[S], options: &BuildOptions) -> Corpus {
        let mut vocabulary = Vocabulary::new();
        let mut sentences = Vec::new();
        let mut frequencies: Vec<u64> = Vec::new();
        let mut token_count = 0u64;
        // Digest over the normalized documents joined by a single newline.
        let mut digest = FNV_OFFSET;

        for (i, doc) in documents.iter().enumerate() {
            let normalized = normalize(doc.as_ref(), options);
            if i > 0 {
                digest = fnv1a64(digest, b"\n");
            }
            digest = fnv1a64(digest, normalized.as_bytes());

            for raw in segment_sentences(&normalized) {
                let words = tokenize(raw);
                if words.is_empty() {
                    continue;
                }
                let tokens: Vec<WordId> = words
                    .iter()
                    .map(|w| {
                        let id = vocabulary.intern(w);
                        if id.index() == frequencies.len() {
                            frequencies.push(0);
                        }
                        frequencies[id.index()] += 1;
                        id
                    })
                    .collect();
                token_count += tokens.len() as u64;
                sentences.push(Sentence::new(tokens));
            }
        }

        Corpus {
            sentences,
            vocabulary,
            token_count,
            source_digest: digest,
            frequencies,
        }
    }

    /// Build from raw bytes, reporting the first invalid UTF-8 byte with its
    /// document index and offset.
    pub fn build_from_bytes<B: AsRef<[u8]>>(
        documents: &[B],
        options: &BuildOptions,
    ) -> Result<Corpus> {
        let mut decoded = Vec::with_capacity(documents.len());
        for (doc, bytes) in documents.iter().enumerate() {
            let text = std::str::from_utf8(bytes.as_ref()).map_err(|e| Error::InvalidEncoding {
                doc,
                offset: e.valid_up_to(),
            })?;
            decoded.push(text);
        }
        Ok(Corpus::build(&decoded, options))
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn token_count(&self) -> u64 {
        self.token_count
    }

    pub fn source_digest(&self) -> u64 {
        self.source_digest
    }

    /// Total occurrences of `word` across all sentences.
    pub fn word_frequency(&self, word: WordId) -> Result<u64> {
        self.frequencies
            .get(word.index())
            .copied()
            .ok_or(Error::UnknownWord(word))
    }

    /// Render the line-oriented dump. LF endings, bit-exact across platforms.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "CORPUS v1 {} {} {:016x}\n",
            self.vocabulary.len(),
            self.token_count,
            self.source_digest
        ));
        for (i, word) in self.vocabulary.words().enumerate() {
            out.push_str(&format!("{i}\t{word}\n"));
        }
        for sentence in &self.sentences {
            out.push('S');
            out.push('\t');
            for (i, id) in sentence.tokens().iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(&id.get().to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parse a dump produced by [`Corpus::dump`].
    pub fn parse_dump(text: &str) -> Result<Corpus> {
        let mut lines = text.lines().enumerate();

        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty dump"))?;
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 5 || fields[0] != "CORPUS" {
            return Err(Error::parse(
                1,
                "expected header `CORPUS v1 <vocab> <tokens> <digest>`",
            ));
        }
        if fields[1] != "v1" {
            return Err(Error::parse(
                1,
                format!("unsupported version {}", fields[1]),
            ));
        }
        let vocab_len: usize = fields[2]
            .parse()
            .map_err(|_| Error::parse(1, "bad vocabulary size"))?;
        let token_count: u64 = fields[3]
            .parse()
            .map_err(|_| Error::parse(1, "bad token count"))?;
        let source_digest =
            u64::from_str_radix(fields[4], 16).map_err(|_| Error::parse(1, "bad digest"))?;

        let mut vocabulary = Vocabulary::new();
        for expected in 0..vocab_len {
            let (idx, line) = lines
                .next()
                .ok_or_else(|| Error::parse(expected + 2, "unexpected end of vocabulary"))?;
            let lineno = idx + 1;
            let (id_str, word) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(lineno, "expected `<id>\\t<word>`"))?;
            let id: usize = id_str
                .parse()
                .map_err(|_| Error::parse(lineno, "bad word id"))?;
            if id != expected {
                return Err(Error::parse(
                    lineno,
                    format!("expected id {expected}, got {id}"),
                ));
            }
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(Error::parse(
                    lineno,
                    "words must be nonempty and whitespace-free",
                ));
            }
            if vocabulary.id(word).is_some() {
                return Err(Error::parse(lineno, format!("duplicate word {word:?}")));
            }
            vocabulary.intern(word);
        }

        let mut sentences = Vec::new();
        let mut frequencies = vec![0u64; vocab_len];
        let mut seen_tokens = 0u64;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let ids = line
                .strip_prefix("S\t")
                .ok_or_else(|| Error::parse(lineno, "expected `S\\t<ids>`"))?;
            let mut tokens = Vec::new();
            for part in ids.split(' ') {
                if part.is_empty() {
                    return Err(Error::parse(lineno, "empty id field"));
                }
                let raw: u32 = part
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad word id {part:?}")))?;
                if raw as usize >= vocab_len {
                    return Err(Error::parse(lineno, format!("word id {raw} out of range")));
                }
                frequencies[raw as usize] += 1;
                tokens.push(WordId(raw));
            }
            seen_tokens += tokens.len() as u64;
            sentences.push(Sentence::new(tokens));
        }

        if seen_tokens != token_count {
            return Err(Error::parse(
                1,
                format!("header claims {token_count} tokens, found {seen_tokens}"),
            ));
        }

        Ok(Corpus {
            sentences,
            vocabulary,
            token_count,
            source_digest,
            frequencies,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segments_on_danda() {
        let text = "ভোরে সূর্য উঠার আগে। আগে খাওয়া শেষ করি।";
        assert_eq!(
            segment_sentences(text),
            vec!["ভোরে সূর্য উঠার আগে", "আগে খাওয়া শেষ করি"]
        );
    }

    #[test]
    fn empty_input_has_no_sentences() {
        assert!(segment_sentences("").is_empty());
    }

    #[test]
    fn trailing_text_without_terminator_is_a_sentence() {
        assert_eq!(segment_sentences("abc"), vec!["abc"]);
    }

    #[test]
    fn blank_line_is_a_paragraph_break() {
        assert_eq!(segment_sentences("a b\n\nc d"), vec!["a b", "c d"]);
        // A lone newline is plain whitespace, not a break.
        assert_eq!(segment_sentences("a b\nc d"), vec!["a b\nc d"]);
    }

    #[test]
    fn mixed_terminators() {
        assert_eq!(segment_sentences("x? y! z॥ w"), vec!["x", "y", "z", "w"]);
    }

    #[test]
    fn tokenize_splits_on_whitespace() {
        assert_eq!(tokenize("মা বাবার দেখাশুনা করা"), vec!["মা", "বাবার", "দেখাশুনা", "করা"]);
    }

    #[test]
    fn tokenize_whitespace_only_is_empty() {
        assert!(tokenize("   ").is_empty());
    }

    #[test]
    fn tokenize_strips_danda() {
        assert_eq!(tokenize("আগে।"), vec!["আগে"]);
    }

    #[test]
    fn tokenize_strips_edge_punctuation_keeps_interior() {
        assert_eq!(tokenize("\"well-known\", (yes)"), vec!["well-known", "yes"]);
        assert!(tokenize("!!! $$$").is_empty());
    }

    #[test]
    fn tokenize_keeps_digits() {
        assert_eq!(tokenize("১২৩ 456"), vec!["১২৩", "456"]);
    }

    #[test]
    fn nfc_merges_composed_and_decomposed() {
        // U+09DC equals U+09A1 U+09BC after NFC.
        let composed = "\u{09DC}";
        let decomposed = "\u{09A1}\u{09BC}";
        let options = BuildOptions::default();
        assert_eq!(
            normalize(composed, &options),
            normalize(decomposed, &options)
        );
        let corpus = Corpus::build(&[format!("{composed} {decomposed}")], &options);
        assert_eq!(corpus.vocabulary().len(), 1);
    }

    #[test]
    fn ascii_folding_is_opt_in() {
        let plain = Corpus::build(&["Ab ab."], &BuildOptions::default());
        assert_eq!(plain.vocabulary().len(), 2);
        let folded = Corpus::build(&["Ab ab."], &BuildOptions { fold_ascii: true });
        assert_eq!(folded.vocabulary().len(), 1);
    }

    #[test]
    fn first_occurrence_interning() {
        let corpus = Corpus::build(&["a b. a c."], &BuildOptions::default());
        let v = corpus.vocabulary();
        assert_eq!(v.id("a"), Some(WordId(0)));
        assert_eq!(v.id("b"), Some(WordId(1)));
        assert_eq!(v.id("c"), Some(WordId(2)));
    }

    #[test]
    fn empty_document_list() {
        let corpus = Corpus::build(&[] as &[&str], &BuildOptions::default());
        assert_eq!(corpus.sentences().len(), 0);
        assert_eq!(corpus.token_count(), 0);
    }

    #[test]
    fn word_frequency_counts_occurrences() {
        let corpus = Corpus::build(&["a a a."], &BuildOptions::default());
        let a = corpus.vocabulary().id("a").unwrap();
        assert_eq!(corpus.word_frequency(a).unwrap(), 3);
    }

    #[test]
    fn word_frequency_rejects_unknown_id() {
        let corpus = Corpus::build(&[] as &[&str], &BuildOptions::default());
        assert!(matches!(
            corpus.word_frequency(WordId(0)),
            Err(Error::UnknownWord(_))
        ));
    }

    #[test]
    fn invalid_utf8_names_document_and_offset() {
        let good = b"ok".to_vec();
        let bad = vec![b'a', 0xff, b'b'];
        let err = Corpus::build_from_bytes(&[good, bad], &BuildOptions::default()).unwrap_err();
        match err {
            Error::InvalidEncoding { doc, offset } => {
                assert_eq!(doc, 1);
                assert_eq!(offset, 1);
            }
            other => panic!("expected encoding error, got {other:?}"),
        }
    }

    #[test]
    fn dump_round_trips() {
        let corpus = Corpus::build(
            &["ভোরে সূর্য উঠার আগে। আগে খাওয়া শেষ করি।", "x y\n\nz."],
            &BuildOptions::default(),
        );
        let reloaded = Corpus::parse_dump(&corpus.dump()).unwrap();
        assert_eq!(corpus, reloaded);
    }

    #[test]
    fn truncated_dump_is_a_parse_error() {
        let corpus = Corpus::build(&["a b c."], &BuildOptions::default());
        let dump = corpus.dump();
        let truncated = &dump[..dump.len() - 4];
        assert!(matches!(
            Corpus::parse_dump(truncated),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn dump_token_count_is_validated() {
        let corpus = Corpus::build(&["a b."], &BuildOptions::default());
        let tampered = corpus.dump().replace("CORPUS v1 2 2", "CORPUS v1 2 3");
        assert!(matches!(
            Corpus::parse_dump(&tampered),
            Err(Error::Parse { .. })
        ));
    }
}
