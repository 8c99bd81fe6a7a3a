use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument `{0}` is declared more than once")]
    DuplicateArgument(String),

    #[error("attack references unknown argument `{0}`")]
    UnknownArgumentInAttack(String),

    #[error("argument `{argument}`: may threshold exceeds must threshold on the {scale} scale")]
    MayExceedsMust {
        argument: String,
        scale: &'static str,
    },

    #[error("invalid argument identifier {0:?}")]
    InvalidIdentifier(String),

    #[error("labellings are defined on different domains")]
    DomainMismatch,

    #[error("operation needs at least one labelling")]
    EmptyInput,

    #[error("fractions out of order: may fraction exceeds must fraction")]
    FractionOrderViolation,

    #[error("fraction {0} is outside [0, 1]")]
    FractionOutOfRange(String),

    #[error("labelling is undefined on attacker `{attacker}` of `{argument}`")]
    UndefinedAttackerLabel { argument: String, attacker: String },

    #[error("labelling is undefined on argument `{0}`")]
    UndefinedArgumentLabel(String),

    #[error("no maximally proper labelling exists for a non-empty framework")]
    NoMaximallyProper,

    #[error("fixpoint iteration did not converge within {steps} steps")]
    NonConvergent { steps: u64 },

    #[error("frozen labelling is undefined on external attacker `{0}`")]
    FrozenLabelMissing(String),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("edge probability {0} is not in [0, 1]")]
    InvalidProbability(String),

    #[error("semantics `{0}` cannot be requested here")]
    Unsupported(String),

    #[error("instance has {args} arguments, above the exhaustive bound of {bound}")]
    InstanceTooLarge { args: usize, bound: usize },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateArgument(_) => "duplicate-argument",
            Error::UnknownArgumentInAttack(_) => "unknown-argument-in-attack",
            Error::MayExceedsMust { .. } => "may-exceeds-must",
            Error::InvalidIdentifier(_) => "invalid-identifier",
            Error::DomainMismatch => "domain-mismatch",
            Error::EmptyInput => "empty-input",
            Error::FractionOrderViolation => "fraction-order-violation",
            Error::FractionOutOfRange(_) => "fraction-out-of-range",
            Error::UndefinedAttackerLabel { .. } => "undefined-attacker-label",
            Error::UndefinedArgumentLabel(_) => "undefined-argument-label",
            Error::NoMaximallyProper => "no-maximally-proper",
            Error::NonConvergent { .. } => "non-convergent",
            Error::FrozenLabelMissing(_) => "frozen-label-missing",
            Error::Syntax { .. } => "syntax",
            Error::InvalidProbability(_) => "invalid-probability",
            Error::Unsupported(_) => "unsupported",
            Error::InstanceTooLarge { .. } => "instance-too-large",
        }
    }

    /// True for failures of the solving step itself, as opposed to bad input.
    pub fn is_semantic(&self) -> bool {
        matches!(
            self,
            Error::NoMaximallyProper | Error::NonConvergent { .. } | Error::InstanceTooLarge { .. }
        )
    }

    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            message: message.into(),
        }
    }
}
