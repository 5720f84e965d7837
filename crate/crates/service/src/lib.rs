//! HTTP tuning service: upload a frame, steer the two adjustment
//! registers, and fetch previews and skin masks.
//!
//! Routes:
//!
//! | method | path                        | body / result                         |
//! |--------|-----------------------------|---------------------------------------|
//! | POST   | `/api/image`                | PNG or PPM bytes → `{id,width,height}` |
//! | GET    | `/api/image/{id}/preview`   | adjusted frame as PNG                 |
//! | GET    | `/api/image/{id}/mask`      | skin mask as PNG (white = skin)       |
//! | GET    | `/api/registers`            | register view                         |
//! | PUT    | `/api/registers`            | register update → register view       |
//! | GET    | `/api/health`               | `{"status":"ok"}`                     |
//!
//! Previews accept one-shot overrides in the query string, spelled like a
//! PUT body (`?i_percent=-18` or `?i_range_q15=-5898`); they never touch
//! the stored registers. The registers a preview used are echoed in the
//! `x-skinforge-registers` header as `i,q`.

pub mod registers;
pub mod state;

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::{json, Value};
use skinforge_core::imageio::{self, ImageFormat};
use skinforge_core::pipeline::{detect_oracle, process_oracle, PipelineConfig};
use skinforge_core::{AdjustRegisters, Frame};
use tower_http::services::ServeDir;

pub use registers::{RegisterUpdate, RegisterView, Scalar};
pub use state::{SessionState, Snapshot, DEFAULT_MAX_IMAGES, DEFAULT_MAX_UPLOAD_BYTES};

pub const REGISTERS_HEADER: &str = "x-skinforge-registers";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub max_upload_bytes: usize,
    /// Served from `/` when set.
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            max_upload_bytes: DEFAULT_MAX_UPLOAD_BYTES,
            static_dir: None,
        }
    }
}

pub fn router(state: Arc<SessionState>, cfg: &ServiceConfig) -> Router {
    let api = Router::new()
        .route(
            "/api/image",
            post(upload).layer(DefaultBodyLimit::max(cfg.max_upload_bytes)),
        )
        .route("/api/image/{id}/preview", get(preview))
        .route("/api/image/{id}/mask", get(mask))
        .route("/api/registers", get(get_registers).put(put_registers))
        .route("/api/health", get(health))
        .with_state(state);
    match &cfg.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }

    fn unknown_image(id: &str) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            message: format!("no image with id {id:?}"),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(e.to_string()))
}

#[derive(Debug, Serialize)]
struct Uploaded {
    id: String,
    width: usize,
    height: usize,
}

async fn upload(State(state): State<Arc<SessionState>>, body: Bytes) -> ApiResult<Json<Uploaded>> {
    if body.is_empty() {
        return Err(ApiError::bad_request("empty body"));
    }
    let frame = blocking(move || imageio::decode(&body))
        .await?
        .map_err(|e| ApiError::bad_request(e.to_string()))?;
    let (width, height) = frame.dims();
    let id = state.insert(frame);
    log::info!("stored image {id} ({width}x{height})");
    Ok(Json(Uploaded { id, width, height }))
}

fn lookup(state: &SessionState, id: &str) -> ApiResult<Arc<Frame>> {
    state.image(id).ok_or_else(|| ApiError::unknown_image(id))
}

fn png(bytes: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "image/png")], bytes).into_response()
}

async fn preview(
    State(state): State<Arc<SessionState>>,
    Path(id): Path<String>,
    Query(query): Query<Vec<(String, String)>>,
) -> ApiResult<Response> {
    let snap = state.snapshot();
    let overrides = RegisterUpdate::parse(
        query.iter().map(|(k, v)| (k.as_str(), Scalar::from_text(v))),
    )
    .map_err(ApiError::bad_request)?;
    let regs = overrides.apply(snap.regs);
    let frame = lookup(&state, &id)?;
    let bytes = blocking(move || render_preview(&frame, snap.model, regs)).await?;
    let mut res = png(bytes);
    let echo = format!("{},{}", regs.i_range_q15, regs.q_range_q15);
    res.headers_mut()
        .insert(REGISTERS_HEADER, HeaderValue::from_str(&echo).expect("ascii"));
    Ok(res)
}

/// PNG of `frame` adjusted with `regs`.
pub fn render_preview(
    frame: &Frame,
    model: skinforge_core::SkinModelParams,
    regs: AdjustRegisters,
) -> Vec<u8> {
    let cfg = PipelineConfig {
        emit_mask: false,
        ..PipelineConfig::default().with_model(model).with_regs(regs)
    };
    imageio::encode_frame(&process_oracle(frame, &cfg).adjusted, ImageFormat::Png)
}

async fn mask(
    State(state): State<Arc<SessionState>>,
    Path(id): Path<String>,
) -> ApiResult<Response> {
    let snap = state.snapshot();
    let frame = lookup(&state, &id)?;
    let bytes = blocking(move || {
        let cfg = PipelineConfig::default().with_model(snap.model);
        imageio::encode_mask(&detect_oracle(&frame, &cfg), ImageFormat::Png)
    })
    .await?;
    Ok(png(bytes))
}

async fn get_registers(State(state): State<Arc<SessionState>>) -> Json<RegisterView> {
    Json(state.registers().into())
}

async fn put_registers(
    State(state): State<Arc<SessionState>>,
    body: Bytes,
) -> ApiResult<Json<RegisterView>> {
    let value: Value = serde_json::from_slice(&body)
        .map_err(|e| ApiError::bad_request(format!("invalid JSON: {e}")))?;
    let update = RegisterUpdate::parse_json(&value).map_err(ApiError::bad_request)?;
    let regs = state.update_registers(update);
    log::info!(
        "registers now i={} q={} ({})",
        regs.i_range_q15,
        regs.q_range_q15,
        regs.direction()
    );
    Ok(Json(regs.into()))
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}
