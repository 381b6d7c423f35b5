//! Note-level labels and the fine-to-coarse aggregation rule.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::taxonomy::{CoarseCategory, FineCategory};

/// Categories present in one note.
///
/// SS is assigned when at least one SS-side fine category is present, SI
/// when at least one SI-side fine category is present; `none` is set when
/// neither is. Construct through [`derive_document_labels`] so these hold.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DocumentLabels {
    pub fine: BTreeSet<FineCategory>,
    pub coarse: BTreeSet<CoarseCategory>,
    pub none: bool,
}

impl DocumentLabels {
    pub fn has_fine(&self, category: FineCategory) -> bool {
        self.fine.contains(&category)
    }

    pub fn has_coarse(&self, category: CoarseCategory) -> bool {
        self.coarse.contains(&category)
    }

    /// True when the three fields are mutually consistent.
    pub fn is_consistent(&self) -> bool {
        *self == derive_document_labels(self.fine.iter().copied())
    }
}

/// Aggregates a multiset of fine mentions into note-level labels.
///
/// Multiplicity is discarded and probable mentions are ignored.
pub fn derive_document_labels<I>(mentions: I) -> DocumentLabels
where
    I: IntoIterator<Item = FineCategory>,
{
    let fine: BTreeSet<FineCategory> = mentions.into_iter().filter(|c| !c.is_probable()).collect();
    let coarse: BTreeSet<CoarseCategory> = fine.iter().map(|c| c.side()).collect();
    DocumentLabels {
        none: fine.is_empty(),
        fine,
        coarse,
    }
}
