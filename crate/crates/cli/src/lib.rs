//! Library side of the `relqh` command: argument parsing helpers, the
//! published-table reproduction, and the verification suites.

pub mod parse;
pub mod suites;
pub mod tables;

use relqh_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Invalid(_) | Error::Parse(_) | Error::Precondition(_) => EXIT_INVALID,
        Error::Unsupported(_) => EXIT_UNSUPPORTED,
        Error::Conflict { .. } | Error::Internal(_) | Error::Io(_) => EXIT_VERIFY_FAILED,
    }
}
