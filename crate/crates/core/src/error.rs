use alloc::string::String;

/// Failure categories shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Shapes, subsystem lists or indices do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An input violates the mathematical contract of the operation
    /// (non-Hermitian observable, incomplete family, unnormalized state, ...).
    #[error("contract violation: {0}")]
    Contract(String),
    /// A selective outcome whose Born probability is too small to condition on.
    #[error("impossible outcome: probability {0:e} is below 1e-12")]
    ImpossibleOutcome(f64),
    /// The input is legal in principle but outside what this crate handles.
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// An exact simulation would exceed the dense-size cap.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
