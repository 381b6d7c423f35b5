//! BRAT standoff annotations: parsing, writing and conversion of entity-level
//! gold annotations into note-level labels.
//!
//! Entity lines look like `T3\tsocial_isolation_loneliness 10 16\tlonely`,
//! attribute lines like `A1\tNegation T3` or `A2\tTemporality T3 Past`.
//! Offsets are character offsets into the note text. Discontinuous entities
//! (`10 16;20 25`) keep their fragments and expose the covering span.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{list_note_files, Note, Preprocessor};
use crate::error::{read_to_string, BratError};
use crate::labels::{derive_document_labels, DocumentLabels};
use crate::taxonomy::{CoarseCategory, FineCategory};
use crate::text::{CharIndex, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Temporality {
    Present,
    Past,
    #[default]
    Unspecified,
}

/// Where a mention came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Gold,
    Rbs,
    Llm,
}

/// One span-level SS/SI mention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMention {
    pub id: String,
    pub category: FineCategory,
    /// Covering span of all fragments.
    pub span: Span,
    /// More than one entry only for discontinuous annotations.
    pub fragments: Vec<Span>,
    /// Note text under `span`.
    pub surface: String,
    pub temporality: Temporality,
    pub negated: bool,
    pub no_context: bool,
    pub source: Source,
}

impl EntityMention {
    pub fn new(id: impl Into<String>, category: FineCategory, span: Span, surface: impl Into<String>, source: Source) -> Self {
        Self {
            id: id.into(),
            category,
            span,
            fragments: vec![span],
            surface: surface.into(),
            temporality: Temporality::Unspecified,
            negated: false,
            no_context: false,
            source,
        }
    }

    pub fn is_discontinuous(&self) -> bool {
        self.fragments.len() > 1
    }

    /// Whether this mention takes part in document labels: not tagged
    /// `no_context`, not probable, and not a negated loneliness mention.
    pub fn is_effective(&self) -> bool {
        !self.no_context
            && !self.category.is_probable()
            && !(self.negated && self.category == FineCategory::Loneliness)
    }
}

/// Maps BRAT tag names onto fine categories.
#[derive(Debug, Clone)]
pub struct TagMap {
    map: HashMap<String, FineCategory>,
}

impl Default for TagMap {
    /// Canonical category names plus the `social_isolation_*` /
    /// `social_support_*` names used in the annotation configuration.
    fn default() -> Self {
        use FineCategory::*;
        let mut map = HashMap::new();
        for c in FineCategory::MAIN
            .into_iter()
            .chain([Probable(CoarseCategory::SS), Probable(CoarseCategory::SI)])
        {
            map.insert(c.name().to_string(), c);
        }
        let brat_names = [
            ("social_isolation_loneliness", Loneliness),
            ("social_isolation_no_social_network", NoSocialNetwork),
            ("social_isolation_no_emotional_support", NoEmotionalSupport),
            ("social_isolation_no_instrumental_support", NoInstrumentalSupport),
            ("social_isolation_general", SiGeneral),
            ("social_isolation_probable", Probable(CoarseCategory::SI)),
            ("social_support_social_network", SocialNetwork),
            ("social_support_emotional_support", EmotionalSupport),
            ("social_support_instrumental_support", InstrumentalSupport),
            ("social_support_general", SsGeneral),
            ("social_support_probable", Probable(CoarseCategory::SS)),
        ];
        for (name, c) in brat_names {
            map.insert(name.to_string(), c);
        }
        Self { map }
    }
}

impl TagMap {
    /// Parses `tag<TAB>category` lines on top of the default map.
    pub fn parse(content: &str) -> Result<Self, BratError> {
        let mut tags = Self::default();
        for (i, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (tag, cat) = line.split_once('\t').ok_or_else(|| BratError::TagMap {
                line: i + 1,
                reason: "expected `tag<TAB>category`".into(),
            })?;
            let category = cat.parse::<FineCategory>().map_err(|e| BratError::TagMap {
                line: i + 1,
                reason: e.to_string(),
            })?;
            tags.map.insert(tag.trim().to_lowercase(), category);
        }
        Ok(tags)
    }

    pub fn load(path: &Path) -> Result<Self, BratError> {
        Self::parse(&read_to_string(path)?)
    }

    pub fn get(&self, tag: &str) -> Option<FineCategory> {
        self.map
            .get(tag)
            .or_else(|| self.map.get(&tag.to_lowercase()))
            .copied()
    }
}

/// Mentions from one `.ann` file plus non-fatal findings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedStandoff {
    pub mentions: Vec<EntityMention>,
    pub warnings: Vec<String>,
}

fn normalize_surface(s: &str) -> String {
    s.chars()
        .map(|c| if matches!(c, '\n' | '\r' | '\t') { ' ' } else { c })
        .collect()
}

fn parse_fragments(spec: &str) -> Option<Vec<Span>> {
    spec.split(';')
        .map(|frag| {
            let mut it = frag.split_whitespace();
            let start = it.next()?.parse().ok()?;
            let end = it.next()?.parse().ok()?;
            (it.next().is_none() && start <= end).then(|| Span::new(start, end))
        })
        .collect()
}

enum Attribute {
    Negation,
    Temporality,
    NoContext,
}

fn attribute_kind(name: &str) -> Option<Attribute> {
    let key: String = name
        .chars()
        .filter(|c| *c != '_' && *c != '-')
        .flat_map(char::to_lowercase)
        .collect();
    match key.as_str() {
        "negation" | "negated" => Some(Attribute::Negation),
        "temporality" | "temporal" => Some(Attribute::Temporality),
        "nocontext" => Some(Attribute::NoContext),
        _ => None,
    }
}

/// Parses a `.ann` file against its note.
///
/// Surfaces are checked against the template-blanked text first and the raw
/// text second, since annotators may have tagged template text as
/// `no_context`.
pub fn parse_standoff(ann_text: &str, note: &Note, tags: &TagMap) -> Result<ParsedStandoff, BratError> {
    let clean = CharIndex::new(&note.clean_text);
    let raw = CharIndex::new(&note.raw_text);
    let mut out = ParsedStandoff::default();
    let mut by_id: HashMap<String, usize> = HashMap::new();
    let mut skipped: HashSet<String> = HashSet::new();
    let mut attribute_lines = Vec::new();

    for (i, line) in ann_text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let malformed = || BratError::Malformed {
            line: line_no,
            content: line.to_string(),
        };
        match line.chars().next() {
            Some('T') => {
                let mut parts = line.splitn(3, '\t');
                let id = parts.next().ok_or_else(malformed)?;
                let body = parts.next().ok_or_else(malformed)?;
                let annotated = parts.next().unwrap_or("");
                let (tag, offsets) = body.split_once(' ').ok_or_else(malformed)?;
                let fragments = parse_fragments(offsets).ok_or_else(malformed)?;
                let Some(category) = tags.get(tag) else {
                    out.warnings.push(format!("line {line_no}: unknown tag {tag:?} on {id}, entity skipped"));
                    skipped.insert(id.to_string());
                    continue;
                };
                let span = Span::covering(&fragments).ok_or_else(malformed)?;
                if span.end > clean.len() {
                    return Err(BratError::OffsetOutOfBounds {
                        id: id.to_string(),
                        start: span.start,
                        end: span.end,
                        len: clean.len(),
                    });
                }
                let joined = |idx: &CharIndex| {
                    fragments
                        .iter()
                        .map(|f| idx.slice(*f).unwrap_or_default())
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let expected = normalize_surface(annotated);
                let surface = if normalize_surface(&joined(&clean)) == expected {
                    clean.slice(span)
                } else if normalize_surface(&joined(&raw)) == expected {
                    raw.slice(span)
                } else {
                    return Err(BratError::SurfaceMismatch {
                        id: id.to_string(),
                        annotated: annotated.to_string(),
                        text: joined(&raw),
                    });
                };
                let mut mention = EntityMention::new(id, category, span, surface.unwrap_or_default(), Source::Gold);
                mention.fragments = fragments;
                by_id.insert(id.to_string(), out.mentions.len());
                out.mentions.push(mention);
            }
            Some('A') | Some('M') => attribute_lines.push((line_no, line)),
            Some('#') => {}
            _ => out
                .warnings
                .push(format!("line {line_no}: unsupported annotation line ignored")),
        }
    }

    for (line_no, line) in attribute_lines {
        let malformed = || BratError::Malformed {
            line: line_no,
            content: line.to_string(),
        };
        let (attr_id, body) = line.split_once('\t').ok_or_else(malformed)?;
        let mut fields = body.split_whitespace();
        let name = fields.next().ok_or_else(malformed)?;
        let target = fields.next().ok_or_else(malformed)?;
        let value = fields.next();
        if skipped.contains(target) {
            continue;
        }
        let idx = *by_id.get(target).ok_or_else(|| BratError::MissingEntity {
            attribute: attr_id.to_string(),
            entity: target.to_string(),
        })?;
        let mention = &mut out.mentions[idx];
        let flag = || !matches!(value.map(str::to_lowercase).as_deref(), Some("no" | "false" | "0"));
        match attribute_kind(name) {
            Some(Attribute::Negation) => {
                let negated = flag();
                if negated && mention.category != FineCategory::Loneliness {
                    return Err(BratError::NegationNotAllowed {
                        id: mention.id.clone(),
                        category: mention.category.to_string(),
                    });
                }
                mention.negated = negated;
            }
            Some(Attribute::NoContext) => mention.no_context = flag(),
            Some(Attribute::Temporality) => {
                mention.temporality = match value.map(str::to_lowercase).as_deref() {
                    Some("present") => Temporality::Present,
                    Some("past") => Temporality::Past,
                    _ => {
                        return Err(BratError::BadTemporality {
                            attribute: attr_id.to_string(),
                            value: value.unwrap_or_default().to_string(),
                        })
                    }
                }
            }
            None => out
                .warnings
                .push(format!("line {line_no}: unknown attribute {name:?} ignored")),
        }
    }
    Ok(out)
}

/// Serializes mentions as standoff text, renumbering ids `T1..Tn` in order.
/// Tags are written with the canonical category names.
pub fn write_standoff(mentions: &[EntityMention]) -> String {
    let mut out = String::new();
    let mut attr = 0;
    for (i, m) in mentions.iter().enumerate() {
        let tid = format!("T{}", i + 1);
        let offsets: Vec<String> = m.fragments.iter().map(|f| format!("{} {}", f.start, f.end)).collect();
        let surface = if m.is_discontinuous() {
            // fragment texts joined by single spaces, as BRAT writes them
            let chars: Vec<char> = m.surface.chars().collect();
            m.fragments
                .iter()
                .map(|f| chars[f.start - m.span.start..f.end - m.span.start].iter().collect::<String>())
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            m.surface.clone()
        };
        let _ = writeln!(out, "{tid}\t{} {}\t{}", m.category.name(), offsets.join(";"), normalize_surface(&surface));
        let mut push_attr = |body: String| {
            attr += 1;
            let _ = writeln!(out, "A{attr}\t{body}");
        };
        if m.negated {
            push_attr(format!("Negation {tid}"));
        }
        if m.no_context {
            push_attr(format!("NoContext {tid}"));
        }
        match m.temporality {
            Temporality::Present => push_attr(format!("Temporality {tid} Present")),
            Temporality::Past => push_attr(format!("Temporality {tid} Past")),
            Temporality::Unspecified => {}
        }
    }
    out
}

/// Note-level labels from gold mentions, keeping only effective mentions
/// (see [`EntityMention::is_effective`]).
pub fn gold_document_labels(mentions: &[EntityMention]) -> DocumentLabels {
    derive_document_labels(mentions.iter().filter(|m| m.is_effective()).map(|m| m.category))
}

/// A note with its gold annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldDocument {
    pub note: Note,
    pub mentions: Vec<EntityMention>,
    pub doc_labels: DocumentLabels,
}

/// Loads every `X.txt`/`X.ann` pair from a directory, sorted by filename.
/// A `.txt` without an `.ann` is read as an unannotated note.
pub fn load_gold_dir(dir: &Path, pre: &Preprocessor, tags: &TagMap) -> Result<(Vec<GoldDocument>, Vec<String>), BratError> {
    let mut docs = Vec::new();
    let mut warnings = Vec::new();
    for txt in list_note_files(dir)? {
        let note = Note::from_file(&txt, pre)?;
        let ann_path = txt.with_extension("ann");
        let parsed = if ann_path.exists() {
            let ann = read_to_string(&ann_path)?;
            parse_standoff(&ann, &note, tags).map_err(|e| BratError::InFile {
                path: ann_path.clone(),
                source: Box::new(e),
            })?
        } else {
            ParsedStandoff {
                warnings: vec!["no .ann file, treated as unannotated".into()],
                ..Default::default()
            }
        };
        warnings.extend(parsed.warnings.into_iter().map(|w| format!("{}: {w}", ann_path.display())));
        let doc_labels = gold_document_labels(&parsed.mentions);
        docs.push(GoldDocument {
            note,
            mentions: parsed.mentions,
            doc_labels,
        });
    }
    Ok((docs, warnings))
}
