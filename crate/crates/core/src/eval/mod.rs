//! Note-level scoring against gold labels.

mod icd;
mod kappa;
mod metrics;
mod report;

pub use icd::{icd_comparison, IcdCodeSet, IcdComparison, DEFAULT_SI_CODES, OPTIONAL_FAMILY_CODES};
pub use kappa::{agreement_report, cohens_kappa, AgreementReport, LabelKappa, LevelAgreement};
pub use metrics::{score_binary, Confusion, Prf};
pub use report::{macro_report, CategoryRow, EvalReport, LabelKey, Level};
