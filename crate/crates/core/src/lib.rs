//! Learning the meaning of unknown query words from user-supplied possibility
//! degrees.
//!
//! Each (user word, system term) pair owns a trapezoidal membership function
//! `[gamma, alpha, beta, delta]`. The first rating builds it, later ratings move
//! one side of it by a running average, and candidates are ranked by the
//! decision coefficient `(alpha + 3 beta) / 4`.

pub mod decision;
pub mod dialogue;
mod error;
pub mod lexicon;
pub mod trapezoid;

pub use decision::{decision_coefficient, final_decision, CandidateScore, DecisionResult};
pub use dialogue::{
    parse_query, rewrite, start_session, submit_ratings, Interpretation, Policy, Query, Session, SessionId,
    SessionState,
};
pub use error::{Error, Result};
pub use lexicon::{Lexicon, TermKind, UserWordEntry, Vocabulary, VocabularyDocument, FORMAT_VERSION};
pub use trapezoid::{Rating, Side, Trapezoid};
