//! The system vocabulary and the membership functions learned for user words.
//!
//! Identifiers and surfaces compare case-insensitively but keep the casing they
//! were first given for display. Everything iterates in insertion order.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

use crate::decision::{decision_coefficient, final_decision, CandidateScore, DecisionResult};
use crate::error::{Error, Result};
use crate::trapezoid::{Rating, Trapezoid};

/// Schema tag written into every lexicon document.
pub const FORMAT_VERSION: &str = "fuzzylex-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TermKind {
    #[serde(alias = "object")]
    Object,
    #[serde(alias = "goal")]
    Goal,
}

impl TermKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TermKind::Object => "Object",
            TermKind::Goal => "Goal",
        }
    }
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TermKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("object") {
            Ok(TermKind::Object)
        } else if s.eq_ignore_ascii_case("goal") {
            Ok(TermKind::Goal)
        } else {
            Err(Error::domain(format!(
                "unknown term kind {s:?} (expected Object or Goal)"
            )))
        }
    }
}

fn fold(s: &str) -> String {
    s.to_lowercase()
}

/// Objects, goals and which goals may be applied on which objects.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Vocabulary {
    // folded key -> display identifier
    objects: IndexMap<String, String>,
    goals: IndexMap<String, String>,
    // (goal key, object key)
    applicability: IndexSet<(String, String)>,
}

/// Plain serialized form of a [`Vocabulary`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VocabularyDocument {
    pub objects: Vec<String>,
    pub goals: Vec<String>,
    /// `[goal, object]` pairs.
    pub applicability: Vec<(String, String)>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a vocabulary in one go. Duplicates, empty identifiers and pairs
    /// naming unknown terms are all domain errors.
    pub fn from_document(doc: &VocabularyDocument) -> Result<Self> {
        let mut vocab = Vocabulary::new();
        for (kind, ids) in [(TermKind::Object, &doc.objects), (TermKind::Goal, &doc.goals)] {
            for id in ids {
                vocab.add_term(kind, id).map_err(|e| match e {
                    Error::Conflict(m) => Error::Domain(m),
                    other => other,
                })?;
            }
        }
        for (goal, object) in &doc.applicability {
            vocab
                .set_applicable(goal, object)
                .map_err(|e| Error::Domain(e.to_string()))?;
        }
        Ok(vocab)
    }

    pub fn to_document(&self) -> VocabularyDocument {
        VocabularyDocument {
            objects: self.objects.values().cloned().collect(),
            goals: self.goals.values().cloned().collect(),
            applicability: self
                .applicability()
                .map(|(g, o)| (g.to_owned(), o.to_owned()))
                .collect(),
        }
    }

    fn table(&self, kind: TermKind) -> &IndexMap<String, String> {
        match kind {
            TermKind::Object => &self.objects,
            TermKind::Goal => &self.goals,
        }
    }

    pub fn add_term(&mut self, kind: TermKind, identifier: &str) -> Result<()> {
        let identifier = identifier.trim();
        if identifier.is_empty() {
            return Err(Error::domain(format!("empty {kind} identifier")));
        }
        let table = match kind {
            TermKind::Object => &mut self.objects,
            TermKind::Goal => &mut self.goals,
        };
        let key = fold(identifier);
        if let Some(existing) = table.get(&key) {
            return Err(Error::Conflict(format!("{kind} {existing:?} already exists")));
        }
        table.insert(key, identifier.to_owned());
        Ok(())
    }

    /// Marks `goal` as applicable on `object`. Idempotent.
    pub fn set_applicable(&mut self, goal: &str, object: &str) -> Result<()> {
        let goal_key = self.key_of(TermKind::Goal, goal)?;
        let object_key = self.key_of(TermKind::Object, object)?;
        self.applicability.insert((goal_key, object_key));
        Ok(())
    }

    fn key_of(&self, kind: TermKind, identifier: &str) -> Result<String> {
        let key = fold(identifier.trim());
        if self.table(kind).contains_key(&key) {
            Ok(key)
        } else {
            Err(Error::not_found(format!("{kind} {identifier:?}")))
        }
    }

    /// Canonical spelling of a term, if it exists.
    pub fn resolve(&self, kind: TermKind, identifier: &str) -> Option<&str> {
        self.table(kind).get(&fold(identifier.trim())).map(String::as_str)
    }

    pub fn contains(&self, kind: TermKind, identifier: &str) -> bool {
        self.resolve(kind, identifier).is_some()
    }

    pub fn terms(&self, kind: TermKind) -> impl Iterator<Item = &str> {
        self.table(kind).values().map(String::as_str)
    }

    /// `(goal, object)` pairs in display spelling.
    pub fn applicability(&self) -> impl Iterator<Item = (&str, &str)> {
        self.applicability
            .iter()
            .map(|(g, o)| (self.goals[g].as_str(), self.objects[o].as_str()))
    }

    /// Goals applicable on a known object, or objects a known goal applies to.
    pub fn candidates_for(&self, known_term: &str, known_kind: TermKind) -> Result<Vec<String>> {
        let key = self.key_of(known_kind, known_term)?;
        let found = self.applicability.iter().filter_map(|(g, o)| match known_kind {
            TermKind::Object if *o == key => Some(self.goals[g].clone()),
            TermKind::Goal if *g == key => Some(self.objects[o].clone()),
            _ => None,
        });
        Ok(found.collect())
    }
}

/// What has been learned about one user word.
#[derive(Debug, Clone, PartialEq)]
pub struct UserWordEntry {
    surface: String,
    kind: TermKind,
    // canonical candidate identifier -> function
    functions: IndexMap<String, Trapezoid>,
}

impl UserWordEntry {
    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &Trapezoid)> {
        self.functions.iter().map(|(c, t)| (c.as_str(), t))
    }

    pub fn function(&self, candidate: &str) -> Option<&Trapezoid> {
        self.lookup(candidate).map(|(_, t)| t)
    }

    /// Function for a candidate spelled in any case, with its canonical spelling.
    pub fn lookup(&self, candidate: &str) -> Option<(&str, &Trapezoid)> {
        let key = fold(candidate.trim());
        self.functions
            .iter()
            .find(|(c, _)| fold(c) == key)
            .map(|(c, t)| (c.as_str(), t))
    }

    /// Decision coefficient of every candidate, in learning order.
    pub fn scores(&self) -> Vec<CandidateScore> {
        self.functions
            .iter()
            .map(|(c, t)| CandidateScore::new(c.clone(), decision_coefficient(t)))
            .collect()
    }

    pub fn decide(&self) -> Result<DecisionResult> {
        if self.functions.is_empty() {
            return Err(Error::Internal(format!(
                "entry {:?} has no membership functions",
                self.surface
            )));
        }
        final_decision(self.scores())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    vocabulary: Vocabulary,
    entries: IndexMap<(TermKind, String), UserWordEntry>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vocabulary(vocabulary: Vocabulary) -> Self {
        Lexicon {
            vocabulary,
            entries: IndexMap::new(),
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn add_term(&mut self, kind: TermKind, identifier: &str) -> Result<()> {
        self.vocabulary.add_term(kind, identifier)
    }

    pub fn set_applicable(&mut self, goal: &str, object: &str) -> Result<()> {
        self.vocabulary.set_applicable(goal, object)
    }

    pub fn candidates_for(&self, known_term: &str, known_kind: TermKind) -> Result<Vec<String>> {
        self.vocabulary.candidates_for(known_term, known_kind)
    }

    /// Swaps in a new vocabulary. Fails with a conflict, leaving the lexicon
    /// untouched, if any learned function refers to a term the new vocabulary
    /// lacks. Candidate keys take the new vocabulary's spelling.
    pub fn replace_vocabulary(&mut self, vocabulary: Vocabulary) -> Result<()> {
        let mut entries = self.entries.clone();
        for entry in entries.values_mut() {
            let mut renamed = IndexMap::with_capacity(entry.functions.len());
            for (candidate, t) in &entry.functions {
                let Some(canonical) = vocabulary.resolve(entry.kind, candidate) else {
                    return Err(Error::Conflict(format!(
                        "{} {candidate:?} still has learned functions (user word {:?})",
                        entry.kind, entry.surface
                    )));
                };
                renamed.insert(canonical.to_owned(), *t);
            }
            entry.functions = renamed;
        }
        self.vocabulary = vocabulary;
        self.entries = entries;
        Ok(())
    }

    pub fn entry(&self, surface: &str, kind: TermKind) -> Option<&UserWordEntry> {
        self.entries.get(&(kind, fold(surface.trim())))
    }

    pub fn entries(&self) -> impl Iterator<Item = &UserWordEntry> {
        self.entries.values()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Builds the function for `(surface, candidate)` from the first rating and
    /// adjusts it with every later one. Returns the stored result.
    pub fn record_rating(&mut self, surface: &str, kind: TermKind, candidate: &str, theta: f64) -> Result<Trapezoid> {
        let theta = Rating::new(theta)?;
        let surface = surface.trim();
        if surface.is_empty() {
            return Err(Error::domain("empty user word"));
        }
        let candidate = self
            .vocabulary
            .resolve(kind, candidate)
            .ok_or_else(|| Error::not_found(format!("{kind} {candidate:?}")))?
            .to_owned();

        let entry = self
            .entries
            .entry((kind, fold(surface)))
            .or_insert_with(|| UserWordEntry {
                surface: surface.to_owned(),
                kind,
                functions: IndexMap::new(),
            });
        let updated = match entry.functions.get(&candidate) {
            Some(existing) => existing.adjust(theta),
            None => Trapezoid::construct(theta),
        };
        entry.functions.insert(candidate, updated);
        Ok(updated)
    }

    /// Scores every candidate learned for a word and picks the best.
    pub fn interpret(&self, surface: &str, kind: TermKind) -> Result<DecisionResult> {
        self.entry(surface, kind)
            .ok_or_else(|| Error::not_found(format!("no learned {kind} named {surface:?}")))?
            .decide()
    }

    pub fn to_json(&self) -> String {
        let doc = LexiconFile {
            version: FORMAT_VERSION.to_owned(),
            vocabulary: self.vocabulary.to_document(),
            entries: self
                .entries
                .values()
                .map(|e| EntryRecord {
                    surface: e.surface.clone(),
                    kind: e.kind,
                    functions: e
                        .functions
                        .iter()
                        .map(|(c, t)| FunctionRecord {
                            candidate: c.clone(),
                            trapezoid: *t,
                        })
                        .collect(),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("lexicon documents always serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct VersionProbe {
            version: Option<String>,
        }

        let probe: VersionProbe = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        match probe.version {
            Some(v) if v == FORMAT_VERSION => {}
            Some(v) => {
                return Err(Error::UnsupportedVersion {
                    found: v,
                    expected: FORMAT_VERSION.to_owned(),
                })
            }
            None => return Err(Error::Parse("missing field `version`".into())),
        }

        let mut de = serde_json::Deserializer::from_str(text);
        let doc: LexiconFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            Error::Parse(format!("{path}: {}", e.into_inner()))
        })?;

        let vocabulary =
            Vocabulary::from_document(&doc.vocabulary).map_err(|e| Error::Parse(format!("vocabulary: {e}")))?;
        let mut entries = IndexMap::new();
        for (i, record) in doc.entries.into_iter().enumerate() {
            let surface = record.surface.trim().to_owned();
            if surface.is_empty() {
                return Err(Error::Parse(format!("entries[{i}].surface: empty user word")));
            }
            if record.functions.is_empty() {
                return Err(Error::Parse(format!(
                    "entries[{i}].functions: entry {surface:?} has no functions"
                )));
            }
            let mut functions = IndexMap::new();
            for (j, f) in record.functions.into_iter().enumerate() {
                let canonical = vocabulary.resolve(record.kind, &f.candidate).ok_or_else(|| {
                    Error::Parse(format!(
                        "entries[{i}].functions[{j}].candidate: {} {:?} is not in the vocabulary",
                        record.kind, f.candidate
                    ))
                })?;
                if functions.insert(canonical.to_owned(), f.trapezoid).is_some() {
                    return Err(Error::Parse(format!(
                        "entries[{i}].functions[{j}].candidate: duplicate candidate {:?}",
                        f.candidate
                    )));
                }
            }
            let key = (record.kind, fold(&surface));
            if entries.contains_key(&key) {
                return Err(Error::Parse(format!(
                    "entries[{i}]: duplicate entry for {} {surface:?}",
                    record.kind
                )));
            }
            entries.insert(
                key,
                UserWordEntry {
                    surface,
                    kind: record.kind,
                    functions,
                },
            );
        }
        Ok(Lexicon { vocabulary, entries })
    }

    /// Writes the lexicon through a temporary file renamed into place.
    pub fn save(&self, destination: &Path) -> Result<()> {
        let dir = match destination.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(self.to_json().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(destination).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    pub fn load(source: &Path) -> Result<Self> {
        let text = fs::read_to_string(source)?;
        Self::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct LexiconFile {
    version: String,
    vocabulary: VocabularyDocument,
    entries: Vec<EntryRecord>,
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    surface: String,
    kind: TermKind,
    functions: Vec<FunctionRecord>,
}

#[derive(Serialize, Deserialize)]
struct FunctionRecord {
    candidate: String,
    #[serde(flatten)]
    trapezoid: Trapezoid,
}
