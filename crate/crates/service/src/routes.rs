use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post, put};
use axum::{Json, Router};
use fuzzylex_core::{
    parse_query, start_session, submit_ratings, SessionId, SessionState, TermKind, Vocabulary, VocabularyDocument,
};
use serde::Deserialize;
use tower_http::services::ServeDir;

use crate::api::{
    ApiError, CurvePoint, CurveView, EntryView, ErrorCode, FunctionView, LexiconView, QueryRequest, RatingsRequest,
    SessionResponse, VocabularySummary,
};
use crate::AppState;

type ApiResult<T> = Result<Json<T>, ApiError>;

const DEFAULT_SAMPLES: usize = 101;

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/api/query", post(post_query))
        .route("/api/sessions/{id}/ratings", post(post_ratings))
        .route("/api/lexicon", get(get_lexicon))
        .route("/api/lexicon/{kind}/{surface}", get(get_entry))
        .route("/api/lexicon/{kind}/{surface}/{candidate}/curve", get(get_curve))
        .route("/api/vocabulary", put(put_vocabulary));
    let app = match &state.config().ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.with_state(state)
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    payload
        .map(|Json(v)| v)
        .map_err(|e| ApiError::unprocessable(e.body_text()))
}

fn kind_param(kind: &str) -> Result<TermKind, ApiError> {
    kind.parse()
        .map_err(|_| ApiError::not_found(format!("no term kind {kind:?}")))
}

async fn post_query(
    State(state): State<AppState>,
    payload: Result<Json<QueryRequest>, JsonRejection>,
) -> ApiResult<SessionResponse> {
    let request = body(payload)?;
    let query = parse_query(&request.text)?;
    let lexicon = state.lexicon();
    let session = start_session(&lexicon, query, &state.config().policy)?;
    let response = SessionResponse::from_session(&session, None);
    state.store_session(session);
    Ok(Json(response))
}

async fn post_ratings(
    State(state): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<RatingsRequest>, JsonRejection>,
) -> ApiResult<SessionResponse> {
    let id = SessionId::from(id);
    let _writer = state.exclusive().await;
    let session = state
        .session(&id)
        .ok_or_else(|| ApiError::not_found(format!("no session {id}")))?;
    if !matches!(session.state, SessionState::NeedsElicitation { .. }) {
        return Err(fuzzylex_core::Error::State(format!("session {id} is not awaiting ratings")).into());
    }
    let request = body(payload)?;
    // the map order is arbitrary; submit_ratings folds in candidate order
    let ratings: Vec<(String, f64)> = request.ratings.into_iter().collect();

    let mut lexicon = (*state.lexicon()).clone();
    let next = submit_ratings(&mut lexicon, &session, &ratings, &state.config().policy)?;
    let pending_decision = match &next.state {
        SessionState::NeedsElicitation { unknown, kind, .. } => lexicon.interpret(unknown, *kind).ok(),
        _ => None,
    };
    state.publish(lexicon)?;
    let response = SessionResponse::from_session(&next, pending_decision);
    state.store_session(next);
    Ok(Json(response))
}

async fn get_lexicon(State(state): State<AppState>) -> ApiResult<LexiconView> {
    Ok(Json(LexiconView::new(&state.lexicon())?))
}

async fn get_entry(
    State(state): State<AppState>,
    Path((kind, surface)): Path<(String, String)>,
) -> ApiResult<EntryView> {
    let kind = kind_param(&kind)?;
    let lexicon = state.lexicon();
    let entry = lexicon
        .entry(&surface, kind)
        .ok_or_else(|| ApiError::not_found(format!("no learned {kind} named {surface:?}")))?;
    Ok(Json(EntryView::new(entry)?))
}

#[derive(Debug, Deserialize)]
struct CurveParams {
    samples: Option<i64>,
}

async fn get_curve(
    State(state): State<AppState>,
    Path((kind, surface, candidate)): Path<(String, String, String)>,
    params: Result<Query<CurveParams>, QueryRejection>,
) -> ApiResult<CurveView> {
    let kind = kind_param(&kind)?;
    let bad_samples = |msg: String| ApiError::new(StatusCode::BAD_REQUEST, ErrorCode::DomainError, msg);
    let Query(params) = params.map_err(|e| bad_samples(e.body_text()))?;
    let samples = match params.samples {
        None => DEFAULT_SAMPLES,
        Some(n) if n >= 2 => n as usize,
        Some(n) => return Err(bad_samples(format!("need at least 2 samples, got {n}"))),
    };

    let lexicon = state.lexicon();
    let entry = lexicon
        .entry(&surface, kind)
        .ok_or_else(|| ApiError::not_found(format!("no learned {kind} named {surface:?}")))?;
    let (canonical, t) = entry
        .lookup(&candidate)
        .ok_or_else(|| ApiError::not_found(format!("{surface:?} has no function for {candidate:?}")))?;
    let points = t.sample(samples).map_err(|e| bad_samples(e.to_string()))?;
    Ok(Json(CurveView {
        surface: entry.surface().to_owned(),
        kind,
        function: FunctionView::new(canonical, t),
        samples,
        points: points.into_iter().map(|(x, mu)| CurvePoint { x, mu }).collect(),
    }))
}

async fn put_vocabulary(
    State(state): State<AppState>,
    payload: Result<Json<VocabularyDocument>, JsonRejection>,
) -> ApiResult<VocabularySummary> {
    let doc = body(payload)?;
    let vocabulary = Vocabulary::from_document(&doc)?;
    let summary = VocabularySummary {
        objects: doc.objects.len(),
        goals: doc.goals.len(),
        applicability: vocabulary.applicability().count(),
    };
    state.mutate(|lex| lex.replace_vocabulary(vocabulary)).await?;
    Ok(Json(summary))
}
