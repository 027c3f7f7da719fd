use thiserror::Error;

/// Crate-wide error type. Every failure carries enough structure to be
/// reported as a machine-readable record by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mixed radix: left base {left} vs right base {right}")]
    MixedRadix { left: u32, right: u32 },

    #[error("underflow: cannot subtract {delta}*base^{pos} (base {base})")]
    Underflow { base: u32, delta: u64, pos: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("digit budget exceeded: need {needed} digits, budget {budget}")]
    DigitBudget { needed: usize, budget: usize },

    #[error("invalid input for {op}: {reason}")]
    Input { op: &'static str, reason: String },

    #[error("64-bit overflow while computing {field}")]
    Overflow { field: &'static str },

    #[error("search budget exhausted in {what} after {budget} candidates")]
    SearchBudget { what: &'static str, budget: u64 },

    #[error("no prime q \u{2261} {residue} (mod {modulus}) found in ({lower}, {upper}]")]
    MissingWindowPrime {
        modulus: u64,
        residue: u64,
        lower: u64,
        upper: u64,
    },

    #[error("residue {r} is in the excluded set for this parameter family")]
    ExcludedResidue { r: u64 },

    #[error("verification invariant `{invariant}` failed: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Input {
            op,
            reason: reason.into(),
        }
    }

    pub fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            invariant,
            detail: detail.into(),
        }
    }

    /// True for errors caused by bad caller input rather than a failed
    /// mathematical check. The CLI maps these to exit code 2.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Input { .. } | Error::MixedRadix { .. } | Error::DivisionByZero
        )
    }
}
