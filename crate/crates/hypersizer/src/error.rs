//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide error type.
///
/// `InvalidConfig`, `Io`, and `Parse` indicate problems with the user's
/// input (bad config file, bad flag value) and map to CLI exit code 2;
/// everything else is an evaluation failure and maps to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of its legal range, or a required
    /// field is missing for the requested computation.
    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: String, reason: String },

    /// A config file could not be read.
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A config file could not be parsed.
    #[error("cannot parse {path}: {reason}")]
    Parse { path: String, reason: String },

    /// The combination of operation and technology is not defined
    /// (for example, a guided-media packing formula applied to an
    /// open-space technology).
    #[error("unsupported composition: {0}")]
    UnsupportedComposition(String),

    /// A root solver found no sign change over the requested bracket.
    #[error(
        "no crossing in [{lo}, {hi}]: difference is {f_lo:.6e} at the lower \
         bound and {f_hi:.6e} at the upper bound"
    )]
    NoCrossing { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// An evaluation produced a non-finite intermediate value.
    #[error("non-finite result in {context}")]
    NonFinite { context: String },
}

impl Error {
    /// Shorthand constructor for `InvalidConfig`.
    pub fn invalid(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig { field: field.to_string(), reason: reason.into() }
    }

    /// Prefix the field name of an `InvalidConfig` with a section name,
    /// e.g. `saturation_load` -> `traffic.saturation_load`. Other
    /// variants pass through unchanged.
    pub fn in_section(self, section: &str) -> Self {
        match self {
            Error::InvalidConfig { field, reason } => Error::InvalidConfig {
                field: format!("{section}.{field}"),
                reason,
            },
            other => other,
        }
    }

    /// The process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig { .. } | Error::Io { .. } | Error::Parse { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns the value if finite, otherwise a `NonFinite` error naming the
/// computation that produced it.
pub(crate) fn ensure_finite(value: f64, context: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { context: context.to_string() })
    }
}
