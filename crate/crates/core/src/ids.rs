//! Dense integer handles assigned at ingestion time.

use std::fmt;

macro_rules! dense_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }

            #[inline]
            pub(crate) fn from_index(i: usize) -> Self {
                Self(u32::try_from(i).expect("identifier space exhausted"))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

dense_id!(
    /// Position of a paper in [`Corpus::papers`](crate::corpus::Corpus::papers).
    PaperIdx
);
dense_id!(
    /// Interned normalized author key.
    AuthorId
);
dense_id!(
    /// Interned normalized institution key.
    InstId
);
dense_id!(
    /// Interned journal identifier.
    JournalId
);
