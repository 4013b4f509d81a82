use thiserror::Error;

/// Errors raised by the pricing and optimization math.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} = {value} is outside its domain ({domain})")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("invalid pool: {0}")]
    InvalidPool(String),
    #[error("invalid failure model: {0}")]
    InvalidFailureModel(String),
    #[error("invalid arbitrage parameters: {0}")]
    InvalidParams(String),
    #[error("trade size {q} is more than 1e12 times reserve {reserve}; payout would lose precision")]
    PrecisionLoss { q: f64, reserve: f64 },
}

impl ModelError {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        ModelError::Domain { name, value, domain }
    }
}

/// A configuration problem located by a dotted field path, e.g. `bots[1].n_chunks`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Prefix the path with an enclosing field name.
    pub fn within(self, parent: &str) -> Self {
        let path = if self.path.is_empty() {
            parent.to_string()
        } else if self.path.starts_with('[') {
            format!("{parent}{}", self.path)
        } else {
            format!("{parent}.{}", self.path)
        };
        Self { path, ..self }
    }
}

/// Parse a JSON document, reporting the failing field path on error.
pub fn from_json_with_path<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let path = if path == "." { String::new() } else { path };
        ConfigError::new(path, err.into_inner().to_string())
    })
}
