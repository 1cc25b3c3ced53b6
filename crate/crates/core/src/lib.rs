pub mod collection;
pub mod contraction;
pub mod error;
pub mod globset;
pub mod interleave;
pub mod operad;
pub mod oracle;
pub mod pasting;
pub mod report;
pub mod state;
pub mod verify;
