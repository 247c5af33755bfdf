//! HTTP JSON API for playing games against the engine.

use std::collections::{HashMap, VecDeque};
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use anyhow::{Context, Result};
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use posfo::graphs::directed::encode_digraph;
use posfo::klang::long_pair;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::format::{AlphabetSpec, GraphSpec, SCHEMA_VERSION};
use crate::session::{Board, BoardSpec, GameSession, Hint, Kind, MoveError, Role, WireMove};

/// Longest game a session may be created with.
const MAX_ROUNDS: usize = 64;

/// A named arena with a default round budget.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub kind: Kind,
    pub rounds: usize,
    pub arena: BoardSpec,
}

/// The presets every server offers.
pub fn builtin_presets() -> Vec<Preset> {
    let mut out = Vec::new();
    for n in 1..=3 {
        let (u, v) = long_pair(n);
        out.push(Preset {
            name: format!("lemma44-n{n}"),
            kind: Kind::Word,
            rounds: n as usize,
            arena: BoardSpec::Word { u: u.names(), v: v.names(), alphabet: Some(AlphabetSpec::of(u.alphabet())) },
        });
    }
    out.push(Preset {
        name: "int-game-n1".into(),
        kind: Kind::Integer,
        rounds: 4,
        arena: BoardSpec::Integer { n: 1, u: "1 1 0".into(), v: "(1,0) (1,0)".into(), mirrored: false },
    });
    let (u, v) = long_pair(1);
    let (gu, gv) = (encode_digraph(&u).expect("encodable"), encode_digraph(&v).expect("encodable"));
    out.push(Preset {
        name: "graph-lemma513-n1".into(),
        kind: Kind::Graph,
        rounds: 1,
        arena: BoardSpec::Graph { left: GraphSpec::of(&gu), right: GraphSpec::of(&gv) },
    });
    out
}

/// Reads every `*.json` preset in `dir`.
pub fn load_presets(dir: &Path) -> Result<Vec<Preset>> {
    let mut out = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .with_context(|| format!("{}: cannot list presets", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let preset: Preset = crate::format::read_json(&path)?;
        Board::from_spec(preset.kind, &preset.arena).with_context(|| path.display().to_string())?;
        out.push(preset);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub solver_cap: usize,
    /// Sessions kept before the oldest is evicted.
    pub session_cap: usize,
    pub hint_timeout: Duration,
    pub presets: Vec<Preset>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            solver_cap: posfo::games::DEFAULT_ROUND_CAP,
            session_cap: 256,
            hint_timeout: Duration::from_secs(5),
            presets: builtin_presets(),
        }
    }
}

#[derive(Default)]
struct Sessions {
    map: HashMap<String, Arc<Mutex<GameSession>>>,
    order: VecDeque<String>,
}

pub struct AppState {
    config: ServerConfig,
    sessions: Mutex<Sessions>,
}

impl AppState {
    pub fn new(config: ServerConfig) -> Arc<AppState> {
        Arc::new(AppState { config, sessions: Mutex::new(Sessions::default()) })
    }

    fn insert(&self, session: GameSession) {
        let mut s = self.sessions.lock().expect("session table");
        while s.map.len() >= self.config.session_cap.max(1) {
            let Some(old) = s.order.pop_front() else { break };
            s.map.remove(&old);
        }
        s.order.push_back(session.id.clone());
        s.map.insert(session.id.clone(), Arc::new(Mutex::new(session)));
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<GameSession>>, ApiError> {
        let s = self.sessions.lock().expect("session table");
        s.map.get(id).cloned().ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown session `{id}`")))
    }
}

struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, msg: impl Into<String>) -> ApiError {
        ApiError { status, body: json!({ "v": SCHEMA_VERSION, "error": msg.into() }) }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, e.body_text())
    }
}

#[derive(Deserialize)]
struct CreateRequest {
    kind: Option<Kind>,
    preset: Option<String>,
    arena: Option<BoardSpec>,
    rounds: Option<usize>,
    human_side: Role,
}

async fn presets(State(app): State<Arc<AppState>>) -> Json<Value> {
    Json(json!({ "v": SCHEMA_VERSION, "presets": app.config.presets }))
}

async fn create(
    State(app): State<Arc<AppState>>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let Json(req) = body?;
    let bad = |msg: String| ApiError::new(StatusCode::BAD_REQUEST, msg);
    let (kind, spec, default_rounds) = match (&req.preset, &req.arena) {
        (Some(name), None) => {
            let p = app.config.presets.iter().find(|p| &p.name == name).ok_or_else(|| bad(format!("unknown preset `{name}`")))?;
            (p.kind, p.arena.clone(), Some(p.rounds))
        }
        (None, Some(arena)) => (req.kind.ok_or_else(|| bad("`kind` is required with `arena`".into()))?, arena.clone(), None),
        _ => return Err(bad("give exactly one of `preset` and `arena`".into())),
    };
    let rounds = req.rounds.or(default_rounds).ok_or_else(|| bad("`rounds` is required".into()))?;
    if rounds > MAX_ROUNDS {
        return Err(bad(format!("at most {MAX_ROUNDS} rounds")));
    }
    let board = Board::from_spec(kind, &spec).map_err(|e| bad(format!("{e:#}")))?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let cap = app.config.solver_cap;
    let session = tokio::task::spawn_blocking(move || GameSession::new(id, board, req.human_side, rounds, cap))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    let body = json!({ "v": SCHEMA_VERSION, "id": session.id, "state": session.to_json() });
    app.insert(session);
    Ok((StatusCode::CREATED, Json(body)))
}

async fn state(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Json<Value>, ApiError> {
    let session = app.get(&id)?;
    let s = session.lock().expect("session");
    Ok(Json(s.to_json()))
}

async fn play(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<WireMove>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(mv) = body?;
    let session = app.get(&id)?;
    let cap = app.config.solver_cap;
    let result = tokio::task::spawn_blocking(move || {
        let mut s = session.lock().expect("session");
        let outcome = s.play(&mv, cap);
        (outcome, s.to_json())
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    let response = match result {
        (Err(e @ MoveError::UnknownStructure(_)), _) => return Err(ApiError::new(StatusCode::BAD_REQUEST, e.to_string())),
        (Err(e), state) => {
            let body = json!({ "v": SCHEMA_VERSION, "state": state, "legal": false, "error": e.to_string() });
            (StatusCode::CONFLICT, Json(body)).into_response()
        }
        (Ok(out), state) => match out.violation {
            Some(v) => {
                let body = json!({
                    "v": SCHEMA_VERSION,
                    "state": state,
                    "legal": false,
                    "violation": v.name(),
                    "error": format!("{} clause violated", v.name()),
                });
                (StatusCode::CONFLICT, Json(body)).into_response()
            }
            None => {
                let body = json!({ "v": SCHEMA_VERSION, "state": state, "legal": true, "engine_reply": out.engine_reply });
                Json(body).into_response()
            }
        },
    };
    Ok(response)
}

async fn hint(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Json<Value>, ApiError> {
    let session = app.get(&id)?.lock().expect("session").clone();
    let cap = app.config.solver_cap;
    let task = tokio::task::spawn_blocking(move || session.hint(cap));
    let hint = match tokio::time::timeout(app.config.hint_timeout, task).await {
        Ok(Ok(h)) => h,
        Ok(Err(e)) => return Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())),
        Err(_) => Hint::Unknown,
    };
    let (kind, mv) = match hint {
        Hint::Move(mv) => ("move", Some(mv)),
        Hint::NoSavingMove => ("no_saving_move", None),
        Hint::Unknown => ("unknown", None),
        Hint::None => ("not_your_turn", None),
    };
    Ok(Json(json!({ "v": SCHEMA_VERSION, "hint": kind, "move": mv })))
}

fn is_local(origin: &HeaderValue) -> bool {
    let Ok(origin) = origin.to_str() else { return false };
    let host = origin.split_once("://").map_or(origin, |(_, rest)| rest);
    let host = host.rsplit_once(':').map_or(host, |(h, port)| if port.chars().all(|c| c.is_ascii_digit()) { h } else { host });
    matches!(host, "localhost" | "127.0.0.1" | "[::1]")
}

pub fn router(app: Arc<AppState>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::predicate(|origin, _| is_local(origin)))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/presets", get(presets))
        .route("/api/games", post(create))
        .route("/api/games/{id}", get(state))
        .route("/api/games/{id}/move", post(play))
        .route("/api/games/{id}/hint", get(hint))
        .layer(cors)
        .with_state(app)
}

/// Serves the API on `127.0.0.1:port` until the process is stopped.
pub fn serve(port: u16, config: ServerConfig) -> Result<()> {
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(("127.0.0.1", port))
            .await
            .with_context(|| format!("cannot bind port {port}"))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(AppState::new(config))).await?;
        Ok(())
    })
}
