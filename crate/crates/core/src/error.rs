use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid degree profile: {0}")]
    InvalidProfile(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("exhaustive walk search with k·n = {kn} exceeds the bound {bound}")]
    SearchTooLarge { kn: u32, bound: u32 },

    #[error("not a k-tour: {0}")]
    NotATour(String),

    #[error("invalid departure sequences: {0}")]
    InvalidDepartures(String),

    #[error("invalid plane tree encoding: {0}")]
    InvalidTree(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
