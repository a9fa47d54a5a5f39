//! Word, class and document representations.

mod document;
mod expand;
mod similarity;
mod vocab;

pub use document::{document_reps, softmax, DocRep};
pub use expand::{expand_class, expand_classes, ClassRep};
pub use similarity::{cosine, dot, norm};
pub(crate) use similarity::cosine_unchecked;
pub use vocab::{build_vocabulary, EntryOrigin, StaticWordRep, VocabEntry, Vocabulary};
