use thiserror::Error;

/// Errors produced by the lattice model and its numerical operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fell outside its admissible domain.
    #[error("parameter `{name}` = {value} outside domain {domain}")]
    Domain {
        name: &'static str,
        value: String,
        domain: &'static str,
    },

    /// An exhaustive enumeration was requested above the configured bound.
    #[error("enumeration of {requested} configurations exceeds bound {bound}")]
    EnumerationBound { requested: String, bound: String },

    /// A spatially varying potential was passed where a uniform one is required.
    #[error("operation requires a uniform four-potential")]
    NonUniformPotential,

    /// A signal analysis found nothing to measure.
    #[error("no significant spectral peak (amplitude below {threshold})")]
    NoPeak { threshold: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(name: &'static str, value: impl std::fmt::Display, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value: value.to_string(),
            domain,
        }
    }
}
