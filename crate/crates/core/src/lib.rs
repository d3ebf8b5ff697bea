//! Matrix representations of free, surface and book-of-I-bundles groups,
//! proximality classification of their exterior powers, and certificates
//! that a representation is not a limit of Anosov representations.

pub mod ball;
pub mod certify;
pub mod linalg;
pub mod obstruct;
pub mod reps;
pub mod reproduce;
pub mod words;
