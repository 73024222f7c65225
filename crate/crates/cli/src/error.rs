use std::fmt;

/// Marks an error caused by bad input (flags, config, parameters) rather
/// than by a failed computation. `main` maps it to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Library errors raised while setting up a run are input problems.
pub fn setup(err: slqc::Error) -> anyhow::Error {
    usage(err.to_string())
}

pub fn is_usage(err: &anyhow::Error) -> bool {
    err.chain().any(|e| e.is::<UsageError>())
}
