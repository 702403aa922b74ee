//! HTTP/JSON sessions for building a hierarchy one judgment at a time.
//!
//! | method | path | body |
//! |---|---|---|
//! | POST | `/sessions` | `{"model": <hierarchy>}` or `{"goal", "criteria", "alternatives"}` |
//! | GET | `/sessions/{id}` | |
//! | DELETE | `/sessions/{id}` | |
//! | PUT | `/sessions/{id}/judgment` | `{"matrix", "i", "j", "value"}` |
//! | GET | `/sessions/{id}/report` | |
//! | POST | `/sessions/{id}/whatif` | an action |
//! | POST | `/sessions/{id}/commit-whatif` | an action |
//!
//! `matrix` is `"criteria"` or a criterion label; `i` and `j` are labels
//! or 1-based positions; a `null` value clears the cell. Every response
//! about a session carries its revision as the `ETag`. Mutations honour
//! `If-Match` and answer 409 when it names an older revision.

pub mod draft;
pub mod error;
pub mod session;
pub mod store;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use ahp_core::hierarchy::{Action, Selector};
use ahp_core::io::HierarchyDoc;
use ahp_core::{Cell, ReversalWeights, WhatIfReport};
use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::sync::{Mutex, RwLock};
use tower_http::cors::{Any, CorsLayer};

use crate::draft::DraftModel;
use crate::error::ApiError;
use crate::session::Session;
use crate::store::Store;

/// `None` once the session has been deleted.
type Slot = Arc<Mutex<Option<Session>>>;

pub struct AppState {
    sessions: RwLock<HashMap<String, Slot>>,
    store: Option<Store>,
    nu: Option<ReversalWeights>,
}

impl AppState {
    /// In-memory only.
    pub fn ephemeral() -> Arc<Self> {
        Arc::new(AppState {
            sessions: RwLock::default(),
            store: None,
            nu: None,
        })
    }

    /// Loads every session found in `dir` and persists changes there.
    pub fn persistent(dir: impl Into<PathBuf>) -> std::io::Result<Arc<Self>> {
        let store = Store::open(dir)?;
        let sessions = store
            .load_all()?
            .into_iter()
            .map(|s| (s.id.clone(), Arc::new(Mutex::new(Some(s)))))
            .collect();
        Ok(Arc::new(AppState {
            sessions: RwLock::new(sessions),
            store: Some(store),
            nu: None,
        }))
    }

    /// Overrides the reversal mixing weights used in reports.
    pub fn with_reversal_weights(self: Arc<Self>, nu: Option<ReversalWeights>) -> Arc<Self> {
        let inner = Arc::try_unwrap(self).unwrap_or_else(|_| panic!("state already shared"));
        Arc::new(AppState { nu, ..inner })
    }

    async fn slot(&self, id: &str) -> Result<Slot, ApiError> {
        self.sessions
            .read()
            .await
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(id))
    }

    fn persist(&self, session: &Session) -> Result<(), ApiError> {
        match &self.store {
            Some(store) => store
                .save(session)
                .map_err(|e| ApiError::internal(format!("saving session: {e}"))),
            None => Ok(()),
        }
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods(Any)
        .allow_headers(Any)
        .expose_headers([header::ETAG, header::LOCATION]);
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show).delete(remove))
        .route("/sessions/{id}/judgment", put(judgment))
        .route("/sessions/{id}/report", get(report))
        .route("/sessions/{id}/whatif", post(what_if))
        .route("/sessions/{id}/commit-whatif", post(commit))
        .layer(cors)
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}

fn etag(revision: u64) -> [(header::HeaderName, HeaderValue); 1] {
    [(
        header::ETAG,
        HeaderValue::from_str(&format!("\"{revision}\"")).expect("digits"),
    )]
}

/// `None` when absent or `*`.
fn if_match(headers: &HeaderMap) -> Result<Option<u64>, ApiError> {
    let Some(raw) = headers.get(header::IF_MATCH) else {
        return Ok(None);
    };
    let text = raw
        .to_str()
        .map_err(|_| ApiError::bad_request("If-Match is not text"))?
        .trim();
    if text == "*" {
        return Ok(None);
    }
    let bare = text.trim_start_matches("W/").trim_matches('"');
    bare.parse()
        .map(Some)
        .map_err(|_| ApiError::bad_request(format!("If-Match must name a revision, got {text:?}")))
}

fn check_revision(headers: &HeaderMap, session: &Session) -> Result<(), ApiError> {
    match if_match(headers)? {
        Some(expected) if expected != session.revision => Err(ApiError::conflict(expected, session.revision)),
        _ => Ok(()),
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    pub model: Option<HierarchyDoc>,
    pub goal: Option<String>,
    pub criteria: Option<Vec<String>>,
    pub alternatives: Option<Vec<String>>,
}

async fn create(State(state): State<Arc<AppState>>, body: Option<Json<CreateSession>>) -> Result<Response, ApiError> {
    let body = body.map(|Json(b)| b).unwrap_or_default();
    let model = match body {
        CreateSession {
            model: Some(doc),
            goal: None,
            criteria: None,
            alternatives: None,
        } => DraftModel::from_model(&doc.into_model()?)?,
        CreateSession {
            model: None,
            goal,
            criteria: Some(c),
            alternatives: Some(a),
        } => DraftModel::empty(goal.unwrap_or_default(), c, a)?,
        _ => {
            return Err(ApiError::unprocessable(
                "bad_seed",
                "send either {\"model\": ...} or {\"goal\", \"criteria\", \"alternatives\"}",
            ))
        }
    };
    let session = Session::new(uuid::Uuid::new_v4().simple().to_string(), model);
    state.persist(&session)?;
    let view = session.view();
    let location = HeaderValue::from_str(&format!("/sessions/{}", session.id)).expect("hex id");
    state
        .sessions
        .write()
        .await
        .insert(session.id.clone(), Arc::new(Mutex::new(Some(session))));
    Ok((
        StatusCode::CREATED,
        etag(view.revision),
        [(header::LOCATION, location)],
        Json(view),
    )
        .into_response())
}

async fn show(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let slot = state.slot(&id).await?;
    let guard = slot.lock().await;
    let session = guard.as_ref().ok_or_else(|| ApiError::not_found(&id))?;
    Ok((etag(session.revision), Json(session.view())).into_response())
}

async fn remove(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    headers: HeaderMap,
) -> Result<Response, ApiError> {
    let slot = state.slot(&id).await?;
    let mut guard = slot.lock().await;
    let session = guard.as_ref().ok_or_else(|| ApiError::not_found(&id))?;
    check_revision(&headers, session)?;
    if let Some(store) = &state.store {
        store
            .remove(&id)
            .map_err(|e| ApiError::internal(format!("removing session: {e}")))?;
    }
    *guard = None;
    state.sessions.write().await.remove(&id);
    Ok(StatusCode::NO_CONTENT.into_response())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Judgment {
    pub matrix: String,
    pub i: Selector,
    pub j: Selector,
    pub value: Option<Cell>,
}

async fn judgment(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    headers: HeaderMap,
    Json(body): Json<Judgment>,
) -> Result<Response, ApiError> {
    let slot = state.slot(&id).await?;
    let mut guard = slot.lock().await;
    let session = guard.as_mut().ok_or_else(|| ApiError::not_found(&id))?;
    check_revision(&headers, session)?;
    let mut next = session.clone();
    next.model.set_judgment(&body.matrix, &body.i, &body.j, body.value)?;
    next.bump();
    state.persist(&next)?;
    *session = next;
    Ok((etag(session.revision), Json(session.view())).into_response())
}

async fn report(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let slot = state.slot(&id).await?;
    let guard = slot.lock().await;
    let session = guard.as_ref().ok_or_else(|| ApiError::not_found(&id))?;
    let report = session.report(state.nu.as_ref())?;
    Ok((etag(session.revision), Json(report)).into_response())
}

#[derive(Debug, Serialize)]
pub struct WhatIfResponse {
    pub revision: u64,
    #[serde(flatten)]
    pub report: WhatIfReport,
}

async fn what_if(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(action): Json<Action>,
) -> Result<Response, ApiError> {
    let slot = state.slot(&id).await?;
    let guard = slot.lock().await;
    let session = guard.as_ref().ok_or_else(|| ApiError::not_found(&id))?;
    let report = session.what_if(&action)?;
    Ok((
        etag(session.revision),
        Json(WhatIfResponse {
            revision: session.revision,
            report,
        }),
    )
        .into_response())
}

async fn commit(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    headers: HeaderMap,
    Json(action): Json<Action>,
) -> Result<Response, ApiError> {
    let slot = state.slot(&id).await?;
    let mut guard = slot.lock().await;
    let session = guard.as_mut().ok_or_else(|| ApiError::not_found(&id))?;
    check_revision(&headers, session)?;
    let mut next = session.clone();
    let report = next.commit(&action)?;
    state.persist(&next)?;
    *session = next;
    Ok((
        etag(session.revision),
        Json(WhatIfResponse {
            revision: session.revision,
            report,
        }),
    )
        .into_response())
}
