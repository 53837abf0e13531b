//! Library surface of the `beztraj` binary: config parsing, file
//! schemas, and command implementations, exposed for integration tests.

pub mod commands;
pub mod config;
pub mod schema;

/// CLI failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        Self { message, code: 2 }
    }

    pub fn config(message: String) -> Self {
        Self { message, code: 2 }
    }

    pub fn schema(message: String) -> Self {
        Self { message, code: 2 }
    }

    pub fn io(message: String) -> Self {
        Self { message, code: 2 }
    }
}

