//! Stateless HTTP/JSON facade over the catalog and analysis modules.
//!
//! | method | path            | body                                          |
//! |--------|-----------------|-----------------------------------------------|
//! | GET    | `/api/health`   |                                               |
//! | GET    | `/api/presets`  |                                               |
//! | POST   | `/api/analyze`  | configuration document                        |
//! | POST   | `/api/curve`    | `{config, f_range, samples, scale}`           |
//! | POST   | `/api/sweep`    | `{config, knob, values}`                      |
//! | POST   | `/api/compare`  | `{configs, f_range, samples, scale}`          |
//! | POST   | `/api/plot`     | same as `/api/compare`, answers with SVG      |
//!
//! Every JSON response is an object carrying `model_version` and `request_echo`.
//! Validation failures answer 400 with the offending field path; configurations
//! that cannot climb answer 422 with their thrust-to-weight ratio.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderMap, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::analysis::{
    analyze, compare, roofline_series, sweep, Knob, KnobValue, Scale, UavConfiguration,
};
use crate::catalog::config::resolve;
use crate::catalog::{ConfigDocument, PresetStore};
use crate::error::Error;
use crate::report;
use crate::units::Hertz;
use crate::MODEL_VERSION;

pub const DEFAULT_ADDR: &str = "127.0.0.1";
pub const DEFAULT_PORT: u16 = 8045;

const DEFAULT_SAMPLES: usize = 200;

struct AppState {
    store: PresetStore,
    presets_body: Bytes,
    presets_etag: HeaderValue,
}

/// Builds the router. `cors_origins` lists allowed browser origins; `*` allows any.
pub fn router(store: PresetStore, cors_origins: &[String]) -> Router {
    let listing = envelope(
        Value::Null,
        "presets",
        report::to_value(&store.to_document()),
    );
    let presets_body = Bytes::from(serde_json::to_vec(&listing).expect("listing serializes"));
    let digest = Sha256::digest(&presets_body);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let presets_etag =
        HeaderValue::from_str(&format!("\"{hex}\"")).expect("hex digests are valid header values");
    let state = Arc::new(AppState {
        store,
        presets_body,
        presets_etag,
    });

    let app = Router::new()
        .route("/api/health", get(health))
        .route("/api/presets", get(presets))
        .route("/api/analyze", post(analyze_handler))
        .route("/api/curve", post(curve_handler))
        .route("/api/sweep", post(sweep_handler))
        .route("/api/compare", post(compare_handler))
        .route("/api/plot", post(plot_handler))
        .with_state(state);

    if cors_origins.is_empty() {
        return app;
    }
    let allow = if cors_origins.iter().any(|o| o == "*") {
        AllowOrigin::any()
    } else {
        AllowOrigin::list(
            cors_origins
                .iter()
                .filter_map(|o| HeaderValue::from_str(o).ok())
                .collect::<Vec<_>>(),
        )
    };
    app.layer(
        CorsLayer::new()
            .allow_origin(allow)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([header::CONTENT_TYPE, header::IF_NONE_MATCH])
            .expose_headers([header::ETAG]),
    )
}

/// Binds and serves until the process is stopped.
pub async fn serve(
    addr: SocketAddr,
    store: PresetStore,
    cors_origins: &[String],
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!(
        "skyline service listening on http://{}",
        listener.local_addr()?
    );
    axum::serve(listener, router(store, cors_origins)).await
}

fn envelope(echo: Value, key: &str, payload: Value) -> Value {
    let mut m = Map::new();
    m.insert("model_version".into(), Value::from(MODEL_VERSION));
    m.insert("request_echo".into(), echo);
    m.insert(key.into(), payload);
    Value::Object(m)
}

fn json_response(status: StatusCode, body: &Value) -> Response {
    let bytes = serde_json::to_vec(body).expect("JSON values serialize");
    (status, [(header::CONTENT_TYPE, "application/json")], bytes).into_response()
}

/// Error answer: status code plus a JSON envelope.
struct ApiError {
    status: StatusCode,
    echo: Value,
    error: Value,
}

impl ApiError {
    fn bad_request(echo: Value, path: impl Into<String>, message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            echo,
            error: json!({"kind": "validation", "path": path.into(), "message": message.into()}),
        }
    }

    fn from_model(echo: Value, prefix: &str, e: &Error) -> Self {
        match e {
            Error::CannotClimb {
                thrust_to_weight,
                strategy,
            } => ApiError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                echo,
                error: report::to_value(&json!({
                    "kind": "cannot_climb",
                    "message": e.to_string(),
                    "thrust_to_weight": thrust_to_weight,
                    "strategy": strategy,
                })),
            },
            _ => {
                let path = match e.path() {
                    Some(p) if prefix.is_empty() => p.to_string(),
                    Some(p) => format!("{prefix}.{p}"),
                    None => prefix.to_string(),
                };
                ApiError::bad_request(echo, path, e.to_string())
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.status, &envelope(self.echo, "error", self.error))
    }
}

/// Parses a JSON body into `T`, naming the failing field on error.
fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<(T, Value), ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Err(ApiError::bad_request(
            Value::Null,
            ".",
            "request body is empty",
        ));
    }
    let raw: Value = serde_json::from_slice(body)
        .map_err(|e| ApiError::bad_request(Value::Null, ".", format!("malformed JSON: {e}")))?;
    let echo = report::to_value(&raw);
    let parsed = serde_path_to_error::deserialize(raw).map_err(|e| {
        let path = e.path().to_string();
        ApiError::bad_request(echo.clone(), path, e.into_inner().to_string())
    })?;
    Ok((parsed, echo))
}

fn resolve_at(
    doc: &ConfigDocument,
    store: &PresetStore,
    echo: &Value,
    prefix: &str,
) -> Result<UavConfiguration, ApiError> {
    resolve(doc, store).map_err(|e| ApiError::from_model(echo.clone(), prefix, &e))
}

async fn health() -> Response {
    json_response(StatusCode::OK, &json!({"status": "ok"}))
}

async fn presets(State(state): State<Arc<AppState>>, headers: HeaderMap) -> Response {
    let etag = state.presets_etag.clone();
    if headers.get(header::IF_NONE_MATCH) == Some(&etag) {
        return (StatusCode::NOT_MODIFIED, [(header::ETAG, etag)]).into_response();
    }
    (
        StatusCode::OK,
        [
            (
                header::CONTENT_TYPE,
                HeaderValue::from_static("application/json"),
            ),
            (header::ETAG, etag),
        ],
        state.presets_body.clone(),
    )
        .into_response()
}

async fn analyze_handler(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let (doc, echo): (ConfigDocument, _) = parse_body(&body)?;
    let cfg = resolve_at(&doc, &state.store, &echo, "")?;
    let analysis = analyze(&cfg).map_err(|e| ApiError::from_model(echo.clone(), "", &e))?;
    Ok(json_response(
        StatusCode::OK,
        &envelope(echo, "analysis", report::to_value(&analysis)),
    ))
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveRequest {
    config: ConfigDocument,
    f_range: (f64, f64),
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default)]
    scale: Scale,
}

async fn curve_handler(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let (req, echo): (CurveRequest, _) = parse_body(&body)?;
    let cfg = resolve_at(&req.config, &state.store, &echo, "config")?;
    let series = roofline_series(
        &cfg,
        (Hertz(req.f_range.0), Hertz(req.f_range.1)),
        req.samples,
        req.scale,
    )
    .map_err(|e| ApiError::from_model(echo.clone(), "", &e))?;
    Ok(json_response(
        StatusCode::OK,
        &envelope(echo, "series", report::to_value(&series)),
    ))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepRequest {
    config: ConfigDocument,
    knob: String,
    values: Vec<KnobValue>,
}

async fn sweep_handler(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let (req, echo): (SweepRequest, _) = parse_body(&body)?;
    let knob: Knob = req
        .knob
        .parse()
        .map_err(|e: Error| ApiError::bad_request(echo.clone(), "knob", e.to_string()))?;
    let cfg = resolve_at(&req.config, &state.store, &echo, "config")?;
    let points = sweep(&cfg, knob, &req.values, &state.store);
    Ok(json_response(
        StatusCode::OK,
        &envelope(echo, "points", report::to_value(&points)),
    ))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompareRequest {
    configs: Vec<ConfigDocument>,
    f_range: (f64, f64),
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default)]
    scale: Scale,
}

fn run_compare(
    state: &AppState,
    body: &Bytes,
) -> Result<(crate::analysis::Comparison, Value), ApiError> {
    let (req, echo): (CompareRequest, _) = parse_body(body)?;
    let configs = req
        .configs
        .iter()
        .enumerate()
        .map(|(i, doc)| resolve_at(doc, &state.store, &echo, &format!("configs[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let cmp = compare(
        &configs,
        (Hertz(req.f_range.0), Hertz(req.f_range.1)),
        req.samples,
        req.scale,
    )
    .map_err(|e| ApiError::from_model(echo.clone(), "", &e))?;
    Ok((cmp, echo))
}

async fn compare_handler(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let (cmp, echo) = run_compare(&state, &body)?;
    Ok(json_response(
        StatusCode::OK,
        &envelope(echo, "comparison", report::to_value(&cmp)),
    ))
}

async fn plot_handler(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let (cmp, _) = run_compare(&state, &body)?;
    Ok((
        StatusCode::OK,
        [(header::CONTENT_TYPE, "image/svg+xml")],
        crate::svg::render_comparison(&cmp),
    )
        .into_response())
}
