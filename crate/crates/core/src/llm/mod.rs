//! Prompt-based classification: one yes/no/not-relevant question per
//! category and note chunk, aggregated to note labels.

mod backend;
mod classify;
mod finetune;
mod prompt;
mod slice;

pub use backend::{
    AnswerBackend, HttpBackend, InferenceEndpoint, Retrying, RetryPolicy, ScriptRule, ScriptedBackend,
    STUB_DEFAULT_ANSWER,
};
pub use classify::{aggregate_answers, classify_note, NoteClassification, RequestFailure};
pub use finetune::{emit_finetune_dataset, AnswerCounts, CuratedExample, FinetuneDataset, FinetuneRecord};
pub use prompt::{
    build_prompt, question, serialize_request, wrap_context, Answer, AnswerRequest, AnswerResponse, ChoiceAnswer,
    PromptInstance, CHOICES, INSTRUCTION,
};
pub use slice::{scaffold_tokens, slice_note, whitespace_tokens, Chunk, DEFAULT_TOKEN_BUDGET};
