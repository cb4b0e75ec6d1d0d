pub mod bridge;
pub mod error;
pub mod exact;
pub mod field;
pub mod forms;
pub mod numeric;
pub mod places;
pub mod search;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/index.md")]
    mod index {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/places.md")]
    mod places {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/resultants.md")]
    mod resultants {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
