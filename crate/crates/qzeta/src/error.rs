use crate::qspace::Rat;

/// Errors shared by every module of the crate.
///
/// All computations are exact, so an error always means the input is outside
/// the supported domain (or too large to enumerate), never a numerical issue.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A group enumeration would exceed the configured element bound.
    #[error("enumeration bound exceeded: group needs more than {bound} elements")]
    EnumerationBound { bound: u64 },

    /// Mixed Z-form and Delta-form products in one operation.
    #[error("convention mismatch: cannot combine a {lhs}-form product with a {rhs}-form product")]
    ConventionMismatch { lhs: &'static str, rhs: &'static str },

    /// An operation that needs integer exponents met a fractional one.
    #[error("non-integer exponent: t^{0} (operation requires integer exponents)")]
    NonIntegerExponent(Rat),

    /// Expansion of a formal product left a nonzero remainder.
    #[error("not a polynomial: division by (t^{m} - 1) leaves a nonzero remainder")]
    NotAPolynomial { m: i64 },

    /// Monomials of a germ carry different characters under the group action.
    ///
    /// The zero set of such a germ may still be invariant (so it can define a
    /// curve on the quotient) even though no power of the germ itself is a
    /// well-defined function.
    #[error("not semi-invariant: monomial weights {first} and {second} differ; \
             the zero set may still be invariant, but no power of the germ is a function")]
    NotSemiInvariant { first: String, second: String },

    /// Domain validation failure (bad parameters, unsupported shapes, ...).
    #[error("{0}")]
    Validation(String),

    /// Text input that does not match the expected grammar.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
