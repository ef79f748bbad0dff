//! Corpus data model and file I/O.
//!
//! A corpus is an ordered list of aligned segment pairs. On disk it is JSONL
//! (one object per line) or TSV with the fixed column order
//! `id, source_text, target_text, talk_id, split` (trailing columns
//! optional). All text is NFC- and whitespace-normalized on load; files are
//! UTF-8 with LF line endings.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text;

/// Corpus split membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Split::Train => write!(f, "train"),
            Split::Dev => write!(f, "dev"),
            Split::Test => write!(f, "test"),
        }
    }
}

impl std::str::FromStr for Split {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "dev" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            other => Err(Error::invalid(format!(
                "invalid split {other:?}, expected train|dev|test"
            ))),
        }
    }
}

/// Reference to a span of source speech. No audio is ever decoded; the
/// duration plus frame hop are enough to segment speech into fixed-frame
/// units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeechRef {
    pub audio_path: String,
    pub offset_ms: u64,
    pub duration_ms: u64,
    pub frame_hop_ms: f64,
}

impl SpeechRef {
    /// Total feature frames covered: ceil(duration_ms / frame_hop_ms).
    pub fn frame_count(&self) -> u64 {
        (self.duration_ms as f64 / self.frame_hop_ms).ceil() as u64
    }

    pub fn validate(&self) -> Result<()> {
        if self.duration_ms == 0 {
            return Err(Error::invalid("speech duration_ms must be positive"));
        }
        if !(self.frame_hop_ms > 0.0) {
            return Err(Error::invalid("speech frame_hop_ms must be positive"));
        }
        Ok(())
    }
}

/// One aligned source/target sentence pair, the atom of every corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentPair {
    pub id: String,
    pub talk_id: String,
    pub split: Split,
    pub source_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speech: Option<SpeechRef>,
}

impl SegmentPair {
    /// Normalize text fields in place (NFC + whitespace collapsing) and check
    /// the per-pair invariants.
    fn normalize_and_check(&mut self) -> Result<()> {
        self.source_text = text::normalize(&self.source_text);
        if let Some(t) = &self.target_text {
            self.target_text = Some(text::normalize(t));
        }
        if self.source_text.is_empty() {
            return Err(Error::invalid(format!(
                "pair {:?} has empty source_text after normalization",
                self.id
            )));
        }
        if let Some(sp) = &self.speech {
            sp.validate()?;
        }
        Ok(())
    }
}

/// An ordered corpus of segment pairs with unique ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub name: String,
    pub pairs: Vec<SegmentPair>,
}

impl Corpus {
    /// Build a corpus, normalizing every pair and rejecting duplicate ids.
    /// `line` in the duplicate error is the 1-based position of the second
    /// occurrence.
    pub fn from_pairs(name: impl Into<String>, pairs: Vec<SegmentPair>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut pairs = pairs;
        for (i, pair) in pairs.iter_mut().enumerate() {
            pair.normalize_and_check()?;
            if !seen.insert(pair.id.clone()) {
                return Err(Error::DuplicateId { id: pair.id.clone(), line: i + 1 });
            }
        }
        Ok(Corpus { name: name.into(), pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&SegmentPair> {
        self.pairs.iter().find(|p| p.id == id)
    }
}

/// On-disk corpus formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Tsv,
}

impl CorpusFormat {
    /// Infer from the file extension; defaults to JSONL.
    pub fn from_path(path: &Path) -> CorpusFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv") | Some("tab") => CorpusFormat::Tsv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

impl std::str::FromStr for CorpusFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "tsv" => Ok(CorpusFormat::Tsv),
            other => Err(Error::Config(format!("unknown corpus format {other:?}"))),
        }
    }
}

/// Load a corpus from disk, preserving input order.
pub fn load_corpus(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("corpus")
        .to_string();

    let mut pairs = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut pair = match format {
            CorpusFormat::Jsonl => serde_json::from_str::<SegmentPair>(&line)
                .map_err(|e| Error::parse(path, lineno, e.to_string()))?,
            CorpusFormat::Tsv => parse_tsv_pair(&line)
                .map_err(|e| Error::parse(path, lineno, e.to_string()))?,
        };
        pair.normalize_and_check()
            .map_err(|e| Error::parse(path, lineno, e.to_string()))?;
        if !seen.insert(pair.id.clone()) {
            return Err(Error::DuplicateId { id: pair.id, line: lineno });
        }
        pairs.push(pair);
    }
    Ok(Corpus { name, pairs })
}

/// TSV columns: id, source_text, target_text, talk_id, split. Only the first
/// two are required; an empty target column means "absent"; a missing split
/// defaults to train. Values must not contain tabs (there is no escaping).
fn parse_tsv_pair(line: &str) -> Result<SegmentPair> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() < 2 {
        return Err(Error::invalid("expected at least 2 tab-separated columns (id, source_text)"));
    }
    if cols.len() > 5 {
        return Err(Error::invalid(format!("expected at most 5 columns, got {}", cols.len())));
    }
    let id = cols[0].trim();
    if id.is_empty() {
        return Err(Error::invalid("missing required field: id"));
    }
    let target = cols.get(2).map(|s| s.trim()).filter(|s| !s.is_empty());
    let split = match cols.get(4).map(|s| s.trim()).filter(|s| !s.is_empty()) {
        Some(s) => s.parse::<Split>()?,
        None => Split::Train,
    };
    Ok(SegmentPair {
        id: id.to_string(),
        talk_id: cols.get(3).map(|s| s.trim()).unwrap_or("").to_string(),
        split,
        source_text: cols[1].to_string(),
        target_text: target.map(|s| s.to_string()),
        speech: None,
    })
}

/// Save a corpus as JSONL, one pair per line in corpus order.
pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for pair in &corpus.pairs {
        let line = serde_json::to_string(pair)
            .map_err(|e| Error::invalid(format!("serialize pair {:?}: {e}", pair.id)))?;
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Violation severity. `passed` means no ERROR-severity violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Error,
    Warning,
}

/// Violation codes emitted by record validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolationCode {
    #[serde(rename = "CHUNKS_NOT_PARTITION")]
    ChunksNotPartition,
    #[serde(rename = "LENGTH_MISMATCH")]
    LengthMismatch,
    #[serde(rename = "EMPTY_CHUNK_TRANSLATION")]
    EmptyChunkTranslation,
    #[serde(rename = "ORDER_BROKEN")]
    OrderBroken,
    #[serde(rename = "EXCESS_CONNECTOR")]
    ExcessConnector,
    #[serde(rename = "MALFORMED_RESPONSE")]
    MalformedResponse,
}

impl fmt::Display for ViolationCode {
    fmt_display_via_serde!();
}

/// A single validation finding on one record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chunk_index: Option<usize>,
    pub message: String,
    pub severity: Severity,
}

impl Violation {
    pub fn error(code: ViolationCode, chunk_index: Option<usize>, message: impl Into<String>) -> Self {
        Violation { code, chunk_index, message: message.into(), severity: Severity::Error }
    }
}

/// Validation outcome attached to a record. Advisory only: records are
/// flagged, never mutated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        let passed = !violations.iter().any(|v| v.severity == Severity::Error);
        ValidationReport { violations, passed }
    }

    pub fn passing() -> Self {
        ValidationReport { violations: Vec::new(), passed: true }
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

/// One converted sentence: the three-step output (chunks, per-chunk
/// translations, connected final text) plus validation and cost bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SIRecord {
    pub source_id: String,
    pub model_id: String,
    pub chunks: Vec<String>,
    pub chunk_translations: Vec<String>,
    pub final_text: String,
    pub cost_usd: f64,
    pub validation: ValidationReport,
    #[serde(default)]
    pub raw_response: String,
}

/// Save records as JSONL, one per line, preserving order.
pub fn save_records(records: &[SIRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for rec in records {
        let line = serde_json::to_string(rec)
            .map_err(|e| Error::invalid(format!("serialize record {:?}: {e}", rec.source_id)))?;
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Load records from JSONL, preserving file order.
pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<SIRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SIRecord = serde_json::from_str(&line)
            .map_err(|e| Error::parse(path, idx + 1, e.to_string()))?;
        records.push(rec);
    }
    Ok(records)
}

/// Per-split pair counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: usize,
    pub dev: usize,
    pub test: usize,
}

/// Corpus-level bookkeeping over whitespace tokens of the source side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_pairs: usize,
    pub n_tokens_source: usize,
    pub mean_source_len: f64,
    pub split_counts: SplitCounts,
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut counts = SplitCounts::default();
    let mut n_tokens = 0usize;
    for pair in &corpus.pairs {
        n_tokens += text::token_count(&pair.source_text);
        match pair.split {
            Split::Train => counts.train += 1,
            Split::Dev => counts.dev += 1,
            Split::Test => counts.test += 1,
        }
    }
    let n_pairs = corpus.pairs.len();
    CorpusStats {
        n_pairs,
        n_tokens_source: n_tokens,
        mean_source_len: if n_pairs == 0 { 0.0 } else { n_tokens as f64 / n_pairs as f64 },
        split_counts: counts,
    }
}

/// Implements Display through the serde rename, so codes print exactly as
/// they serialize.
macro_rules! fmt_display_via_serde {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let s = serde_json::to_string(self).map_err(|_| fmt::Error)?;
            write!(f, "{}", s.trim_matches('"'))
        }
    };
}
use fmt_display_via_serde;
