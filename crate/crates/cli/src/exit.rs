//! Exit codes: 0 ok, 2 input schema error, 3 usage or selection error,
//! 4 golden diff failure. Anything else exits 1.

use std::fmt;

pub const SCHEMA: u8 = 2;
pub const USAGE: u8 = 3;
pub const GOLDEN: u8 = 4;

#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

pub fn usage(message: impl Into<String>) -> Exit {
    Exit {
        code: USAGE,
        message: message.into(),
    }
}

pub fn schema(message: impl Into<String>) -> Exit {
    Exit {
        code: SCHEMA,
        message: message.into(),
    }
}

pub fn golden(message: impl Into<String>) -> Exit {
    Exit {
        code: GOLDEN,
        message: message.into(),
    }
}

/// Exit code for an error chain; the first [`Exit`] found wins.
pub fn code_of(err: &anyhow::Error) -> u8 {
    err.chain()
        .find_map(|e| e.downcast_ref::<Exit>())
        .map_or(1, |e| e.code)
}
