//! Wire types.

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use fuzzylex_core::{DecisionResult, Error, Lexicon, Session, SessionState, TermKind, Trapezoid, UserWordEntry};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    ParseError,
    NotFound,
    Conflict,
    DomainError,
    StateError,
    InternalError,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub code: ErrorCode,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            status: status.as_u16(),
            code,
            message: message.into(),
        }
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, ErrorCode::NotFound, message)
    }

    pub fn unprocessable(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, ErrorCode::DomainError, message)
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let message = err.to_string();
        let (status, code) = match err {
            Error::Parse(_) | Error::UnsupportedVersion { .. } => (StatusCode::BAD_REQUEST, ErrorCode::ParseError),
            Error::NotFound(_) => (StatusCode::NOT_FOUND, ErrorCode::NotFound),
            Error::Conflict(_) => (StatusCode::CONFLICT, ErrorCode::Conflict),
            Error::Domain(_) => (StatusCode::UNPROCESSABLE_ENTITY, ErrorCode::DomainError),
            Error::State(_) => (StatusCode::CONFLICT, ErrorCode::StateError),
            Error::Internal(_) | Error::Io(_) => (StatusCode::INTERNAL_SERVER_ERROR, ErrorCode::InternalError),
        };
        ApiError::new(status, code, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

#[derive(Debug, Deserialize)]
pub struct QueryRequest {
    pub text: String,
}

#[derive(Debug, Deserialize)]
pub struct RatingsRequest {
    pub ratings: HashMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionStatus {
    Resolved,
    NeedsRatings,
    Decided,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UnknownWord {
    pub surface: String,
    pub kind: TermKind,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionResponse {
    pub session_id: String,
    pub status: SessionStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unknown: Option<UnknownWord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<DecisionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rewritten: Option<String>,
    /// Word still unknown after this decision; resubmit `rewritten` to elicit it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pending_unknown: Option<TermKind>,
}

impl SessionResponse {
    /// `decision` carries a below-threshold decision that kept the session asking.
    pub fn from_session(session: &Session, decision: Option<DecisionResult>) -> Self {
        let mut out = SessionResponse {
            session_id: session.id.to_string(),
            status: SessionStatus::Resolved,
            unknown: None,
            candidates: None,
            decision,
            rewritten: fuzzylex_core::rewrite(session).ok(),
            pending_unknown: session.pending_unknown(),
        };
        match &session.state {
            SessionState::Resolved { .. } => {}
            SessionState::NeedsElicitation {
                unknown,
                kind,
                candidates,
            } => {
                out.status = SessionStatus::NeedsRatings;
                out.unknown = Some(UnknownWord {
                    surface: unknown.clone(),
                    kind: *kind,
                });
                out.candidates = Some(candidates.clone());
            }
            SessionState::Decided { decision, .. } => {
                out.status = SessionStatus::Decided;
                out.decision = Some(decision.clone());
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionView {
    pub candidate: String,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub left_count: u64,
    pub right_count: u64,
    pub coefficient: f64,
}

impl FunctionView {
    pub fn new(candidate: &str, t: &Trapezoid) -> Self {
        FunctionView {
            candidate: candidate.to_owned(),
            gamma: t.gamma(),
            alpha: t.alpha(),
            beta: t.beta(),
            delta: t.delta(),
            left_count: t.left_count(),
            right_count: t.right_count(),
            coefficient: fuzzylex_core::decision_coefficient(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryView {
    pub surface: String,
    pub kind: TermKind,
    pub functions: Vec<FunctionView>,
    pub decision: DecisionResult,
}

impl EntryView {
    pub fn new(entry: &UserWordEntry) -> Result<Self, Error> {
        Ok(EntryView {
            surface: entry.surface().to_owned(),
            kind: entry.kind(),
            functions: entry.functions().map(|(c, t)| FunctionView::new(c, t)).collect(),
            decision: entry.decide()?,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LexiconView {
    pub version: String,
    pub vocabulary: fuzzylex_core::VocabularyDocument,
    pub entries: Vec<EntryView>,
}

impl LexiconView {
    pub fn new(lex: &Lexicon) -> Result<Self, Error> {
        Ok(LexiconView {
            version: fuzzylex_core::FORMAT_VERSION.to_owned(),
            vocabulary: lex.vocabulary().to_document(),
            entries: lex.entries().map(EntryView::new).collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub mu: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CurveView {
    pub surface: String,
    pub kind: TermKind,
    pub function: FunctionView,
    pub samples: usize,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VocabularySummary {
    pub objects: usize,
    pub goals: usize,
    pub applicability: usize,
}
