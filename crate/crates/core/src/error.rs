use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("point (w={w}, z={z}) lies outside the diamond |w|+|z| <= 1/sqrt(2)")]
    OutsideDiamond { w: f64, z: f64 },

    #[error("radius solve failed to bracket at (w={w}, z={z})")]
    RadiusBracket { w: f64, z: f64 },

    #[error("invalid radius model: {0}")]
    InvalidModel(String),

    #[error("support band is unbounded at w={w}: 1 - sqrt(2)*eps*p(w) <= 0")]
    UnboundedBand { w: f64 },

    #[error("support band not available: {0}")]
    UnsupportedBand(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("quadrature did not converge after {levels} refinement levels")]
    NonConvergence { levels: usize },

    #[error("model rejected by validation: {0}")]
    Validation(String),

    #[error("malformed radius JSON: {0}")]
    Json(String),
}
