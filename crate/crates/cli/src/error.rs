use serde_json::{json, Value};
use thiserror::Error;
use volog_core::fpn::FpnError;
use volog_core::graph::GraphError;
use volog_core::heights::HeightError;
use volog_core::loglaurent::LaurentError;
use volog_core::padic::PadicError;
use volog_core::volog::VologError;
use volog_core::ErrorKind;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, unreadable files, or JSON that does not fit the schema.
    #[error("{0}")]
    Parse(String),
    #[error("{message}")]
    Module { kind: ErrorKind, code: String, message: String, details: Option<Value> },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        CliError::Parse(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Module { kind: ErrorKind::Precondition, .. } => 3,
            CliError::Module { kind: ErrorKind::Overflow, .. } => 4,
        }
    }

    pub fn with_details(mut self, value: Value) -> Self {
        if let CliError::Module { details, .. } = &mut self {
            *details = Some(value);
        }
        self
    }

    pub fn to_json(&self) -> Value {
        let (kind, code, details) = match self {
            CliError::Parse(_) => ("parse", "parse".to_string(), None),
            CliError::Io(_) => ("parse", "io".to_string(), None),
            CliError::Module { kind, code, details, .. } => {
                let kind = match kind {
                    ErrorKind::Precondition => "precondition",
                    ErrorKind::Overflow => "overflow",
                };
                (kind, code.clone(), details.clone())
            }
        };
        let mut err = json!({ "kind": kind, "code": code, "message": self.to_string(), "exit_code": self.exit_code() });
        if let Some(d) = details {
            err["details"] = d;
        }
        json!({ "error": err })
    }
}

/// `MultiEdge { .. }` → `multi_edge`.
fn variant_code(debug: &str) -> String {
    let name: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
    let mut out = String::new();
    for (i, c) in name.chars().enumerate() {
        if c.is_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.extend(c.to_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

fn module(kind: ErrorKind, debug: String, message: String) -> CliError {
    CliError::Module { kind, code: variant_code(&debug), message, details: None }
}

impl From<PadicError> for CliError {
    fn from(e: PadicError) -> Self {
        module(e.kind(), format!("{e:?}"), e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        module(ErrorKind::Precondition, format!("{e:?}"), e.to_string())
    }
}

impl From<LaurentError> for CliError {
    fn from(e: LaurentError) -> Self {
        module(e.kind(), format!("{e:?}"), e.to_string())
    }
}

impl From<VologError> for CliError {
    fn from(e: VologError) -> Self {
        match e {
            VologError::Graph(g) => g.into(),
            VologError::Scalar(p) => p.into(),
            other => module(other.kind(), format!("{other:?}"), other.to_string()),
        }
    }
}

impl From<HeightError> for CliError {
    fn from(e: HeightError) -> Self {
        match e {
            HeightError::Graph(g) => g.into(),
            other => module(ErrorKind::Precondition, format!("{other:?}"), other.to_string()),
        }
    }
}

impl From<FpnError> for CliError {
    fn from(e: FpnError) -> Self {
        match e {
            FpnError::Scalar(p) => p.into(),
            FpnError::Invalid(ref v) => module(ErrorKind::Precondition, format!("{v:?}"), e.to_string()),
            other => module(ErrorKind::Precondition, format!("{other:?}"), other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_snake_case_variant_names() {
        assert_eq!(variant_code("MultiEdge { first: \"a\" }"), "multi_edge");
        assert_eq!(variant_code("Singular"), "singular");
        assert_eq!(variant_code("NotPrime(4)"), "not_prime");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::parse("x").exit_code(), 2);
        assert_eq!(CliError::from(PadicError::LogOfZero).exit_code(), 3);
        assert_eq!(CliError::from(PadicError::PrecisionTooLarge { prime: 2, digits: 80 }).exit_code(), 4);
    }
}
