//! Rule-based extraction: lexicon phrase matching over note tokens with
//! exclusion phrases and loneliness-only negation.

use std::collections::{BTreeMap, HashMap};

use crate::brat::{EntityMention, Source};
use crate::corpus::Note;
use crate::labels::{derive_document_labels, DocumentLabels};
use crate::lexicon::{Lexicon, Phrase};
use crate::taxonomy::FineCategory;
use crate::text::{CharIndex, Span};
use crate::tokenize::{tokenize, Token};

pub const DEFAULT_NEGATION_CUES: &[&str] = &[
    "no", "not", "denies", "denied", "deny", "denying", "never", "without", "negative for", "none",
    "absence of",
];

#[derive(Debug, Clone, PartialEq)]
pub struct MatchConfig {
    pub negation_cues: Vec<Phrase>,
    /// Maximum distance in tokens from the start of a cue to the start of
    /// the loneliness match it negates.
    pub negation_window: usize,
    pub case_fold: bool,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            negation_cues: DEFAULT_NEGATION_CUES.iter().filter_map(|c| Phrase::new(c)).collect(),
            negation_window: 5,
            case_fold: true,
        }
    }
}

impl MatchConfig {
    pub fn with_cues<I, S>(mut self, cues: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.negation_cues = cues.into_iter().filter_map(|c| Phrase::new(c.as_ref())).collect();
        self
    }

    pub fn validate(&self, lex: &Lexicon) -> Result<(), String> {
        if self.negation_window == 0 {
            return Err("negation window must be at least 1".into());
        }
        if self.negation_cues.is_empty() && !lex.phrases(FineCategory::Loneliness).is_empty() {
            return Err("negation cue list is empty but the loneliness lexicon is not".into());
        }
        Ok(())
    }
}

#[derive(Debug, Default, Clone)]
struct TrieNode<V> {
    children: HashMap<String, usize>,
    values: Vec<V>,
}

/// Token-sequence trie; a phrase may carry several values.
#[derive(Debug, Clone)]
struct PhraseTrie<V> {
    nodes: Vec<TrieNode<V>>,
}

impl<V: Clone + PartialEq> PhraseTrie<V> {
    fn new() -> Self {
        Self {
            nodes: vec![TrieNode {
                children: HashMap::new(),
                values: Vec::new(),
            }],
        }
    }

    fn insert(&mut self, tokens: &[String], value: V) {
        let mut node = 0;
        for tok in tokens {
            node = match self.nodes[node].children.get(tok) {
                Some(&n) => n,
                None => {
                    let n = self.nodes.len();
                    self.nodes.push(TrieNode {
                        children: HashMap::new(),
                        values: Vec::new(),
                    });
                    self.nodes[node].children.insert(tok.clone(), n);
                    n
                }
            };
        }
        if !self.nodes[node].values.contains(&value) {
            self.nodes[node].values.push(value);
        }
    }

    /// Calls `f(end, value)` for every phrase starting at token `start`,
    /// in increasing end order.
    fn walk(&self, tokens: &[Token], start: usize, mut f: impl FnMut(usize, &V)) {
        let mut node = 0;
        for (j, tok) in tokens.iter().enumerate().skip(start) {
            match self.nodes[node].children.get(&tok.text) {
                Some(&n) => node = n,
                None => return,
            }
            for v in &self.nodes[node].values {
                f(j + 1, v);
            }
        }
    }
}

/// Lexicon and configuration compiled for repeated matching.
#[derive(Debug, Clone)]
pub struct RuleMatcher {
    inclusion: PhraseTrie<FineCategory>,
    exclusion: PhraseTrie<()>,
    cues: PhraseTrie<()>,
    config: MatchConfig,
}

impl RuleMatcher {
    pub fn new(lex: &Lexicon, config: &MatchConfig) -> Self {
        let mut inclusion = PhraseTrie::new();
        for (category, phrases) in &lex.inclusion {
            for p in phrases {
                inclusion.insert(&p.tokens, *category);
            }
        }
        let mut exclusion = PhraseTrie::new();
        for p in &lex.exclusion {
            exclusion.insert(&p.tokens, ());
        }
        let mut cues = PhraseTrie::new();
        for p in &config.negation_cues {
            cues.insert(&p.tokens, ());
        }
        Self {
            inclusion,
            exclusion,
            cues,
            config: config.clone(),
        }
    }

    /// Mentions ordered by start offset, then category name, then end.
    pub fn match_note(&self, note: &Note) -> Vec<EntityMention> {
        let tokens = tokenize(&note.clean_text, self.config.case_fold);
        let n = tokens.len();

        // furthest exclusion end among exclusion matches starting at or before i
        let mut excl_reach = vec![0usize; n];
        let mut reach = 0;
        for i in 0..n {
            self.exclusion.walk(&tokens, i, |end, _| reach = reach.max(end));
            excl_reach[i] = reach;
        }

        let mut cue_starts: Vec<usize> = Vec::new();
        let mut cue_ends: Vec<usize> = Vec::new();
        for i in 0..n {
            self.cues.walk(&tokens, i, |end, _| {
                cue_starts.push(i);
                cue_ends.push(end);
            });
        }

        let index = CharIndex::new(&note.clean_text);
        let mut found: Vec<(usize, usize, FineCategory)> = Vec::new();
        for i in 0..n {
            let mut longest: BTreeMap<FineCategory, usize> = BTreeMap::new();
            self.inclusion.walk(&tokens, i, |end, cat| {
                longest.insert(*cat, end);
            });
            for (cat, end) in longest {
                if excl_reach[i] >= end {
                    continue;
                }
                found.push((i, end, cat));
            }
        }

        let mut mentions: Vec<EntityMention> = found
            .into_iter()
            .map(|(start, end, category)| {
                let span = Span::new(tokens[start].span.start, tokens[end - 1].span.end);
                let surface = index.slice(span).unwrap_or_default();
                let mut m = EntityMention::new("", category, span, surface, Source::Rbs);
                if category == FineCategory::Loneliness {
                    m.negated = self.is_negated(note, &tokens, start, &cue_starts, &cue_ends);
                }
                m
            })
            .collect();
        mentions.sort_by(|a, b| {
            (a.span.start, a.category.name(), a.span.end).cmp(&(b.span.start, b.category.name(), b.span.end))
        });
        for (i, m) in mentions.iter_mut().enumerate() {
            m.id = format!("T{}", i + 1);
        }
        mentions
    }

    fn is_negated(&self, note: &Note, tokens: &[Token], start: usize, cue_starts: &[usize], cue_ends: &[usize]) -> bool {
        let sentence = note.sentence_at(tokens[start].span.start);
        let earliest = start.saturating_sub(self.config.negation_window);
        cue_starts.iter().zip(cue_ends).any(|(&cs, &ce)| {
            cs >= earliest && ce <= start && note.sentence_at(tokens[cs].span.start) == sentence
        })
    }

    pub fn document_labels(&self, note: &Note) -> DocumentLabels {
        labels_from_mentions(&self.match_note(note))
    }
}

fn labels_from_mentions(mentions: &[EntityMention]) -> DocumentLabels {
    derive_document_labels(mentions.iter().filter(|m| m.is_effective()).map(|m| m.category))
}

/// Matches one note. Use [`RuleMatcher`] directly when matching many notes.
pub fn match_note(note: &Note, lex: &Lexicon, cfg: &MatchConfig) -> Vec<EntityMention> {
    RuleMatcher::new(lex, cfg).match_note(note)
}

/// Matches, drops negated loneliness mentions and aggregates.
pub fn rbs_document_labels(note: &Note, lex: &Lexicon, cfg: &MatchConfig) -> DocumentLabels {
    labels_from_mentions(&match_note(note, lex, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Preprocessor;
    use crate::taxonomy::CoarseCategory;
    use chrono::NaiveDate;
    use std::collections::BTreeSet;

    fn note(text: &str) -> Note {
        Note::build("p", "n", NaiveDate::from_ymd_opt(2000, 1, 1).unwrap(), text, &Preprocessor::default()).unwrap()
    }

    fn lex(inclusion: &str, exclusion: &str) -> Lexicon {
        Lexicon::parse(inclusion, exclusion).unwrap().0
    }

    #[test]
    fn feelings_of_loneliness() {
        let l = lex("loneliness\tfeelings of loneliness\n", "");
        let ms = match_note(&note("Pt continues to express feelings of loneliness."), &l, &MatchConfig::default());
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].category, FineCategory::Loneliness);
        assert_eq!(ms[0].surface, "feelings of loneliness");
        assert!(!ms[0].negated);
        assert_eq!(ms[0].source, Source::Rbs);
    }

    #[test]
    fn denial_negates_loneliness() {
        let l = lex("loneliness\tloneliness\n", "");
        let cfg = MatchConfig::default().with_cues(["denies"]);
        let ms = match_note(&note("He denies suffering from loneliness."), &l, &cfg);
        assert_eq!(ms.len(), 1);
        assert!(ms[0].negated);
        assert!(rbs_document_labels(&note("He denies suffering from loneliness."), &l, &cfg).none);
    }

    #[test]
    fn exclusion_suppresses_contained_match() {
        let l = lex("social_network\tno family\n", "no family history\n");
        assert!(match_note(&note("no family history of depression"), &l, &MatchConfig::default()).is_empty());
        assert_eq!(match_note(&note("no family around"), &l, &MatchConfig::default()).len(), 1);
    }

    #[test]
    fn negation_scope() {
        let l = lex("loneliness\tlonely\n", "");
        let cfg = MatchConfig::default();
        // cue in previous sentence
        assert!(!match_note(&note("No. Feels lonely."), &l, &cfg)[0].negated);
        // cue too far away
        assert!(!match_note(&note("Not one two three four five lonely."), &l, &cfg)[0].negated);
        assert!(match_note(&note("Not one two three four lonely."), &l, &cfg)[0].negated);
        // cue after the match does not count
        assert!(!match_note(&note("Lonely, not sad."), &l, &cfg)[0].negated);
    }

    #[test]
    fn negation_only_for_loneliness() {
        let l = lex("social_network\tfriends\n", "");
        let ms = match_note(&note("Has no friends."), &l, &MatchConfig::default());
        assert!(!ms[0].negated);
    }

    #[test]
    fn longest_match_per_category_and_multi_category() {
        let l = lex("ss_general\tsocial support\nss_general\tsocial support network\nsocial_network\tsocial support network\n", "");
        let ms = match_note(&note("Good social support network."), &l, &MatchConfig::default());
        let got: Vec<_> = ms.iter().map(|m| (m.category, m.surface.as_str())).collect();
        assert_eq!(
            got,
            [(FineCategory::SocialNetwork, "social support network"), (FineCategory::SsGeneral, "social support network")]
        );
    }

    #[test]
    fn case_folding_and_templates() {
        let l = lex("instrumental_support\thome health aide\nsocial_network\tgoes to church\n", "");
        let n = note("Has a Home Health Aide. He goes to church weekly.");
        let labels = rbs_document_labels(&n, &l, &MatchConfig::default());
        assert_eq!(labels.fine, BTreeSet::from([FineCategory::InstrumentalSupport, FineCategory::SocialNetwork]));
        assert_eq!(labels.coarse, BTreeSet::from([CoarseCategory::SS]));

        let cfg = MatchConfig { case_fold: false, ..MatchConfig::default() };
        assert_eq!(match_note(&n, &l, &cfg).len(), 1);
    }

    #[test]
    fn single_loneliness_gives_si() {
        let l = lex("loneliness\tlonely\n", "");
        let labels = rbs_document_labels(&note("Feels lonely."), &l, &MatchConfig::default());
        assert_eq!(labels.coarse, BTreeSet::from([CoarseCategory::SI]));
    }

    #[test]
    fn empty_text() {
        let l = lex("loneliness\tlonely\n", "");
        assert!(match_note(&note(""), &l, &MatchConfig::default()).is_empty());
    }

    #[test]
    fn config_validation() {
        let l = lex("loneliness\tlonely\n", "");
        assert!(MatchConfig::default().validate(&l).is_ok());
        assert!(MatchConfig { negation_window: 0, ..MatchConfig::default() }.validate(&l).is_err());
        assert!(MatchConfig::default().with_cues(Vec::<&str>::new()).validate(&l).is_err());
    }
}
