use std::process::ExitCode;

use num_bigint::BigInt;
use robust_crt::CrtError;
use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { kind: &'static str, message: String },
}

impl CliError {
    pub fn emit(self) -> ExitCode {
        let (doc, code) = match self {
            CliError::Usage(message) => {
                eprintln!("usage error: {message}");
                (json!({ "error": "usage", "message": message }), 3)
            }
            CliError::Domain { kind, message } => {
                eprintln!("error: {message}");
                (json!({ "error": kind, "message": message }), 2)
            }
        };
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        ExitCode::from(code)
    }
}

impl From<CrtError> for CliError {
    fn from(e: CrtError) -> Self {
        let message = e.to_string();
        let kind = match e {
            CrtError::Inconsistent { .. } => "inconsistent",
            CrtError::DegenerateStats => "degenerate_stats",
            CrtError::NonExactQuotient { .. } => "non_exact_quotient",
            CrtError::RemainderOutOfRange { .. } => "remainder_out_of_range",
            CrtError::Invariant(_) => "invariant",
            CrtError::NotCoprime { .. }
            | CrtError::NonPositiveModulus { .. }
            | CrtError::EmptyModuli
            | CrtError::LengthMismatch { .. }
            | CrtError::OutOfRange
            | CrtError::ZeroDenominator
            | CrtError::InvalidParams(_) => return CliError::Usage(message),
        };
        CliError::Domain { kind, message }
    }
}

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn opt_ints(xs: Option<&Vec<BigInt>>) -> Value {
    xs.map_or(Value::Null, |v| ints(v))
}

pub fn opt_int(x: Option<&BigInt>) -> Value {
    x.map_or(Value::Null, int)
}
