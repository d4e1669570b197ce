//! HTTP scene service: an in-memory store of scenes behind a JSON API.
//!
//! Each scene sits behind its own mutex, so updates to one scene serialize
//! while different scenes proceed independently. Evaluation runs on a
//! snapshot taken under the lock.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, put};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::{Mutex, RwLock};
use tower_http::services::ServeDir;
use trapgeom::scene::{evaluate, Backend, Scene, SceneError};

#[derive(Clone, Default)]
pub struct AppState {
    scenes: Arc<RwLock<HashMap<String, Arc<Mutex<Scene>>>>>,
}

impl AppState {
    pub async fn insert(&self, id: String, scene: Scene) {
        self.scenes.write().await.insert(id, Arc::new(Mutex::new(scene)));
    }

    async fn entry(&self, id: &str) -> Option<Arc<Mutex<Scene>>> {
        self.scenes.read().await.get(id).cloned()
    }

    pub async fn len(&self) -> usize {
        self.scenes.read().await.len()
    }

    pub async fn is_empty(&self) -> bool {
        self.len().await == 0
    }

    /// Loads every `*.json` scene in `dir`, keyed by file stem. Files that
    /// are not scenes are skipped and reported.
    pub async fn load_dir(&self, dir: &Path) -> std::io::Result<Vec<(String, SceneError)>> {
        let mut skipped = Vec::new();
        let mut entries: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        entries.sort();
        for path in entries {
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let text = std::fs::read_to_string(&path)?;
            match Scene::from_json_str(&text) {
                Ok(scene) => self.insert(stem.to_string(), scene).await,
                Err(e) => skipped.push((path.display().to_string(), e)),
            }
        }
        Ok(skipped)
    }
}

#[derive(Debug)]
pub enum ApiError {
    NotFound(String),
    BadRequest(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, message) = match self {
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
        };
        (status, Json(json!({ "error": message }))).into_response()
    }
}

impl From<SceneError> for ApiError {
    fn from(e: SceneError) -> Self {
        match e {
            SceneError::UnknownId(_) => ApiError::NotFound(e.to_string()),
            _ => ApiError::BadRequest(e.to_string()),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
pub struct BackendQuery {
    backend: Option<String>,
}

impl BackendQuery {
    fn backend(&self) -> Result<Backend, ApiError> {
        match &self.backend {
            None => Ok(Backend::Float),
            Some(b) => b.parse().map_err(ApiError::BadRequest),
        }
    }
}

/// The API under `/api`, plus static files from `static_dir` when given.
pub fn router(state: AppState, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/scenes", axum::routing::post(create_scene))
        .route("/api/scenes/{id}", get(get_scene).delete(delete_scene))
        .route("/api/scenes/{id}/objects/{oid}", put(move_object))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

async fn evaluate_blocking(scene: Scene, backend: Backend) -> Value {
    tokio::task::spawn_blocking(move || evaluate(&scene, backend).to_json())
        .await
        .expect("evaluation does not panic")
}

async fn create_scene(State(state): State<AppState>, body: String) -> Result<(StatusCode, Json<Value>), ApiError> {
    let scene = Scene::from_json_str(&body)?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    state.insert(id.clone(), scene).await;
    Ok((StatusCode::CREATED, Json(json!({ "id": id }))))
}

fn unknown_scene(id: &str) -> ApiError {
    ApiError::NotFound(format!("unknown scene '{id}'"))
}

/// `{"id", "scene", "result"}` for the current state of the scene.
async fn get_scene(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<BackendQuery>,
) -> Result<Json<Value>, ApiError> {
    let backend = q.backend()?;
    let entry = state.entry(&id).await.ok_or_else(|| unknown_scene(&id))?;
    let snapshot = entry.lock().await.clone();
    let scene_json = snapshot.to_json();
    let result = evaluate_blocking(snapshot, backend).await;
    Ok(Json(json!({ "id": id, "scene": scene_json, "result": result })))
}

/// Moves a free object and returns the full evaluation of the updated scene.
async fn move_object(
    State(state): State<AppState>,
    UrlPath((id, oid)): UrlPath<(String, String)>,
    Query(q): Query<BackendQuery>,
    body: String,
) -> Result<Json<Value>, ApiError> {
    let backend = q.backend()?;
    let value: Value =
        serde_json::from_str(&body).map_err(|e| ApiError::BadRequest(format!("invalid JSON: {e}")))?;
    let entry = state.entry(&id).await.ok_or_else(|| unknown_scene(&id))?;
    let snapshot = {
        let mut scene = entry.lock().await;
        let mut next = scene.clone();
        next.set_free_object(&oid, &value)?;
        *scene = next.clone();
        next
    };
    Ok(Json(evaluate_blocking(snapshot, backend).await))
}

async fn delete_scene(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<StatusCode, ApiError> {
    match state.scenes.write().await.remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(unknown_scene(&id)),
    }
}
