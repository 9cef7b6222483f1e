//! Exact arithmetic for monodromy zeta functions of hypersurface
//! singularities resolved inside quotient spaces.
//!
//! The crate works with diagonal cyclic quotients `X(d; A)`, germs on them,
//! and embedded resolutions built from weighted blow-ups.  From the strata of
//! a resolution it computes the zeta function of monodromy `Z(t)`, the
//! characteristic polynomial `Delta(t)`, Milnor numbers, Euler
//! characteristics of the Milnor fiber and Lefschetz numbers of monodromy
//! iterates, all over the rationals with no floating point anywhere.

pub mod cli;
pub mod error;
pub mod qspace;
pub mod resolve;
pub mod strata;
pub mod zeta;

pub use error::{Error, Result};

/// Compiles every code block of the guide in `book/` as a doc-test, so the
/// chapters cannot drift from the source.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quotient-spaces.md")]
    mod quotient_spaces {}
    #[doc = include_str!("../../../book/src/germs.md")]
    mod germs {}
    #[doc = include_str!("../../../book/src/cyclotomic-products.md")]
    mod cyclotomic_products {}
    #[doc = include_str!("../../../book/src/strata.md")]
    mod strata {}
    #[doc = include_str!("../../../book/src/pipelines.md")]
    mod pipelines {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
