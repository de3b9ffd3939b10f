use netspace_core::NetspaceError;
use serde_json::json;

/// An error reported as one JSON line on stderr, with the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { kind: "usage".into(), message: message.into(), code: 2 }
    }

    pub fn emit(&self) {
        eprintln!("{}", json!({ "error": self.message, "kind": self.kind }));
    }
}

impl From<NetspaceError> for CliError {
    fn from(e: NetspaceError) -> Self {
        let code = match e {
            NetspaceError::InternalConsistency(_) => 1,
            _ => 2,
        };
        CliError { kind: e.kind().into(), message: e.to_string(), code }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        NetspaceError::from(e).into()
    }
}
