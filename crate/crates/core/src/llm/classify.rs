use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::backend::AnswerBackend;
use super::prompt::{build_prompt, Answer, ChoiceAnswer};
use super::slice::{slice_note, Chunk};
use crate::corpus::Note;
use crate::error::{BackendError, LlmError};
use crate::labels::{derive_document_labels, DocumentLabels};
use crate::taxonomy::FineCategory;

/// A (category, chunk) request that produced no usable answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestFailure {
    pub category: FineCategory,
    pub chunk_index: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoteClassification {
    pub labels: DocumentLabels,
    /// Sorted by category, then chunk.
    pub answers: Vec<ChoiceAnswer>,
    pub failures: Vec<RequestFailure>,
    pub chunks: usize,
}

impl NoteClassification {
    /// Labels are partial when any request failed.
    pub fn incomplete(&self) -> bool {
        !self.failures.is_empty()
    }
}

/// Any-chunk-yes aggregation: a category is present when at least one chunk
/// answered `yes`.
pub fn aggregate_answers<'a, I>(answers: I) -> DocumentLabels
where
    I: IntoIterator<Item = &'a ChoiceAnswer>,
{
    derive_document_labels(answers.into_iter().filter(|a| a.answer == Answer::Yes).map(|a| a.category))
}

/// Asks every category about every chunk of the note, at most
/// `max_concurrency` requests in flight.
pub fn classify_note<B: AnswerBackend + ?Sized>(
    note: &Note,
    categories: &BTreeSet<FineCategory>,
    backend: &B,
    token_budget: usize,
    max_concurrency: usize,
) -> Result<NoteClassification, LlmError> {
    if let Some(c) = categories.iter().find(|c| c.is_probable()) {
        return Err(LlmError::UnsupportedCategory(c.to_string()));
    }
    let chunks: Vec<Chunk> = slice_note(note, token_budget)?;
    let mut jobs = Vec::with_capacity(categories.len() * chunks.len());
    for &category in categories {
        for chunk in &chunks {
            jobs.push(build_prompt(category, &chunk.text)?.with_origin(&note.note_id, chunk.index));
        }
    }

    let results: Vec<Mutex<Option<Result<String, BackendError>>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = max_concurrency.max(1).min(jobs.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let outcome = backend.answer(job.category, &job.request());
                *results[i].lock().expect("result slot poisoned") = Some(outcome);
            });
        }
    });

    let mut answers = Vec::new();
    let mut failures = Vec::new();
    for (job, slot) in jobs.iter().zip(results) {
        let outcome = slot.into_inner().expect("result slot poisoned").expect("every job ran");
        let failure = |error: String| RequestFailure {
            category: job.category,
            chunk_index: job.chunk_index,
            error,
        };
        match outcome {
            Ok(raw) => match raw.parse::<Answer>() {
                Ok(answer) => answers.push(ChoiceAnswer {
                    category: job.category,
                    chunk_index: job.chunk_index,
                    answer,
                    raw,
                }),
                Err(e) => failures.push(failure(e.to_string())),
            },
            Err(e) => failures.push(failure(e.to_string())),
        }
    }
    Ok(NoteClassification {
        labels: aggregate_answers(&answers),
        answers,
        failures,
        chunks: chunks.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Preprocessor;
    use crate::llm::backend::{ScriptRule, ScriptedBackend};
    use crate::llm::prompt::AnswerRequest;
    use crate::llm::slice::DEFAULT_TOKEN_BUDGET;
    use crate::taxonomy::CoarseCategory;
    use chrono::NaiveDate;

    fn note(text: &str) -> Note {
        Note::build("p", "n1", NaiveDate::from_ymd_opt(2000, 1, 1).unwrap(), text, &Preprocessor::default()).unwrap()
    }

    #[test]
    fn yes_sets_category() {
        let stub = ScriptedBackend::new(vec![ScriptRule {
            question: "feelings of loneliness".into(),
            context: "loneliness".into(),
            answer: "yes".into(),
        }]);
        let cats = BTreeSet::from([FineCategory::Loneliness]);
        let out = classify_note(&note("Pt continues to express feelings of loneliness."), &cats, &stub, DEFAULT_TOKEN_BUDGET, 2).unwrap();
        assert!(out.labels.has_fine(FineCategory::Loneliness));
        assert_eq!(out.labels.coarse, BTreeSet::from([CoarseCategory::SI]));
        assert!(!out.incomplete());
    }

    #[test]
    fn no_and_not_relevant_never_count() {
        let stub = ScriptedBackend::new(vec![ScriptRule {
            question: "loneliness".into(),
            context: "".into(),
            answer: "no.".into(),
        }]);
        let cats: BTreeSet<_> = FineCategory::MAIN.into_iter().collect();
        let out = classify_note(&note("He denies suffering from loneliness."), &cats, &stub, DEFAULT_TOKEN_BUDGET, 4).unwrap();
        assert!(out.labels.none);
        assert_eq!(out.answers.len(), 9);
    }

    struct Broken;
    impl AnswerBackend for Broken {
        fn answer(&self, c: FineCategory, _: &AnswerRequest) -> Result<String, BackendError> {
            match c {
                FineCategory::Loneliness => Err(BackendError::Retryable("timeout".into())),
                FineCategory::SocialNetwork => Ok("perhaps".into()),
                _ => Ok("yes".into()),
            }
        }
    }

    #[test]
    fn failures_mark_incomplete() {
        let cats = BTreeSet::from([FineCategory::Loneliness, FineCategory::SocialNetwork, FineCategory::SsGeneral]);
        let out = classify_note(&note("Text."), &cats, &Broken, DEFAULT_TOKEN_BUDGET, 1).unwrap();
        assert!(out.incomplete());
        assert_eq!(out.failures.len(), 2);
        assert!(out.failures.iter().any(|f| f.error.contains("perhaps")));
        assert_eq!(out.labels.fine, BTreeSet::from([FineCategory::SsGeneral]));
    }

    #[test]
    fn probable_is_rejected() {
        let cats = BTreeSet::from([FineCategory::Probable(CoarseCategory::SS)]);
        assert!(classify_note(&note("x"), &cats, &Broken, DEFAULT_TOKEN_BUDGET, 1).is_err());
    }
}
