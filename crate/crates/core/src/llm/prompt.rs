use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::LlmError;
use crate::taxonomy::FineCategory;

pub const INSTRUCTION: &str = "Read what the Clinician wrote about the patient in the Context and answer the Question by choosing from the provided Choices.";

pub const CHOICES: [&str; 3] = ["yes", "no", "not relevant"];

/// Wraps a note chunk the way every prompt context is presented.
pub fn wrap_context(chunk: &str) -> String {
    format!("The Clinician wrote: \"{chunk}\"")
}

/// The per-category question, `None` for probable categories.
pub fn question(category: FineCategory) -> Option<&'static str> {
    use FineCategory::*;
    Some(match category {
        Loneliness => "In the clinician's opinion, does or did the patient experience feelings of loneliness?",
        NoSocialNetwork => "In the clinician's opinion, does or did the patient lack a social network?",
        NoEmotionalSupport => "In the clinician's opinion, does or did the patient lack emotional support?",
        NoInstrumentalSupport => "In the clinician's opinion, does or did the patient lack access to instrumental support?",
        SiGeneral => "In the clinician's opinion, does or did the patient have social isolation; however, there is not enough information to classify the type of social isolation as specifically lack of instrumental support, lack of emotional support, lack of social network, or loneliness?",
        SocialNetwork => "In the clinician's opinion, does or did the patient have a social network?",
        EmotionalSupport => "In the clinician's opinion, does or did the patient have adequate emotional support?",
        InstrumentalSupport => "In the clinician's opinion, does or did the patient have access to instrumental support?",
        SsGeneral => "In the clinician's opinion, does or did the patient have social support; however, there is not enough information to classify the type of social support as specifically instrumental support, emotional support, or social network?",
        Probable(_) => return None,
    })
}

/// Request body of `POST /v1/answer`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerRequest {
    pub instruction: String,
    pub context: String,
    pub question: String,
    pub choices: [String; 3],
}

/// Response body of `POST /v1/answer`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerResponse {
    pub answer: String,
}

/// One question about one chunk of one note.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptInstance {
    pub category: FineCategory,
    pub instruction: String,
    /// Already wrapped with [`wrap_context`].
    pub context: String,
    pub question: String,
    pub choices: [String; 3],
    pub note_id: String,
    pub chunk_index: usize,
}

impl PromptInstance {
    pub fn with_origin(mut self, note_id: impl Into<String>, chunk_index: usize) -> Self {
        self.note_id = note_id.into();
        self.chunk_index = chunk_index;
        self
    }

    pub fn request(&self) -> AnswerRequest {
        AnswerRequest {
            instruction: self.instruction.clone(),
            context: self.context.clone(),
            question: self.question.clone(),
            choices: self.choices.clone(),
        }
    }

    /// Canonical text form: instruction, context, question and choices, one
    /// labelled section per line.
    pub fn serialize(&self) -> String {
        serialize_request(&self.request())
    }
}

pub fn serialize_request(req: &AnswerRequest) -> String {
    format!(
        "Instruction: {}\nContext: {}\nQuestion: {}\nChoices: {}",
        req.instruction,
        req.context,
        req.question,
        req.choices.join("; ")
    )
}

pub fn build_prompt(category: FineCategory, chunk: &str) -> Result<PromptInstance, LlmError> {
    let question = question(category).ok_or_else(|| LlmError::UnsupportedCategory(category.to_string()))?;
    Ok(PromptInstance {
        category,
        instruction: INSTRUCTION.to_string(),
        context: wrap_context(chunk),
        question: question.to_string(),
        choices: CHOICES.map(String::from),
        note_id: String::new(),
        chunk_index: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
    NotRelevant,
}

impl Answer {
    pub const ALL: [Answer; 3] = [Answer::Yes, Answer::No, Answer::NotRelevant];

    pub fn choice(self) -> &'static str {
        match self {
            Answer::Yes => CHOICES[0],
            Answer::No => CHOICES[1],
            Answer::NotRelevant => CHOICES[2],
        }
    }

    /// Fine-tuning target string, written as in the worked prompt examples
    /// (`no.` carries its period).
    pub fn target(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no.",
            Answer::NotRelevant => "not relevant",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.choice())
    }
}

impl FromStr for Answer {
    type Err = LlmError;

    /// Exact match after trimming, lowercasing and stripping trailing
    /// periods.
    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let norm = raw.trim().to_lowercase();
        let norm = norm.trim_end_matches('.').trim_end();
        Answer::ALL
            .into_iter()
            .find(|a| a.choice() == norm)
            .ok_or_else(|| LlmError::UnmappableAnswer(raw.to_string()))
    }
}

/// A parsed answer for one category on one chunk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceAnswer {
    pub category: FineCategory,
    pub chunk_index: usize,
    pub answer: Answer,
    pub raw: String,
}
