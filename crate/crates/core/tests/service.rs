use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use skyline_core::catalog::builtin_presets;
use skyline_core::service::router;

fn app() -> Router {
    router(builtin_presets(), &[])
}

async fn send(app: Router, req: Request<Body>) -> (StatusCode, axum::http::HeaderMap, Vec<u8>) {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let bytes = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    (status, headers, bytes)
}

async fn post(path: &str, body: impl Into<Body>) -> (StatusCode, Value) {
    let req = Request::post(path)
        .header(header::CONTENT_TYPE, "application/json")
        .body(body.into())
        .unwrap();
    let (status, _, bytes) = send(app(), req).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn pelican(algorithm: &str) -> Value {
    json!({
        "uav": {"name": "AscTec Pelican"},
        "compute": {"name": "Nvidia TX2"},
        "algorithm": {"name": algorithm},
        "sensor": {"name": "RGB-D-60"}
    })
}

#[tokio::test]
async fn health() {
    let (status, _, body) = send(
        app(),
        Request::get("/api/health").body(Body::empty()).unwrap(),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        serde_json::from_slice::<Value>(&body).unwrap(),
        json!({"status": "ok"})
    );
}

#[tokio::test]
async fn presets_listing_is_stable() {
    let get = || Request::get("/api/presets").body(Body::empty()).unwrap();
    let (s1, h1, b1) = send(app(), get()).await;
    let (_, h2, b2) = send(app(), get()).await;
    assert_eq!(s1, StatusCode::OK);
    assert_eq!(b1, b2);
    let etag = h1.get(header::ETAG).unwrap().clone();
    assert_eq!(Some(&etag), h2.get(header::ETAG));

    let v: Value = serde_json::from_slice(&b1).unwrap();
    assert!(v["model_version"].is_string());
    assert!(v["request_echo"].is_null());
    let platforms = v["presets"]["platforms"].as_array().unwrap();
    assert!(platforms.iter().any(|p| p["name"] == "Intel NCS"
        && p["board_mass_g"] == 47.0
        && p["provenance"].is_string()));
    let algorithms = v["presets"]["algorithms"].as_array().unwrap();
    assert!(algorithms.iter().any(|a| a["algorithm"] == "DroNet"
        && a["platform"] == "Nvidia TX2"
        && a["throughput_hz"] == 178.0));

    let conditional = Request::get("/api/presets")
        .header(header::IF_NONE_MATCH, etag)
        .body(Body::empty())
        .unwrap();
    let (status, _, body) = send(app(), conditional).await;
    assert_eq!(status, StatusCode::NOT_MODIFIED);
    assert!(body.is_empty());
}

#[tokio::test]
async fn analyze_pelican_dronet() {
    let body = pelican("DroNet");
    let (status, v) = post("/api/analyze", body.to_string()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["request_echo"], body);
    assert_eq!(v["analysis"]["bound"]["kind"], "PhysicsBound");
    let gap = v["analysis"]["gap"]["ratio"].as_f64().unwrap();
    assert!((gap - 4.14).abs() < 0.01, "{gap}");
    assert_eq!(v["analysis"]["gap"]["direction"], "over_provisioned");
}

#[tokio::test]
async fn analyze_validation_errors_are_400_with_path() {
    let (status, v) = post("/api/analyze", "").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["kind"], "validation");

    let (status, v) = post("/api/analyze", "{not json").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error"]["message"]
        .as_str()
        .unwrap()
        .contains("malformed"));

    let (status, v) = post(
        "/api/analyze",
        json!({"uav": {"name": "AscTec Pelican", "rotor_count": "four"}}).to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["path"], "uav.rotor_count");

    let (status, v) = post(
        "/api/analyze",
        json!({"uav": {"name": "AscTec Pelican"}, "colour": 1}).to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error"]["message"].as_str().unwrap().contains("colour"));

    let (status, v) = post(
        "/api/analyze",
        json!({"uav": {"name": "custom", "base_mass_g": 900, "rotor_count": 4, "control_rate_hz": 100}}).to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["path"], "uav.rotor_pull_gf");
}

#[tokio::test]
async fn cannot_climb_is_422_with_ratio() {
    let body =
        json!({"uav": {"name": "UAV-B"}, "model": {"acceleration_strategy": "vertical_headroom"}});
    let (status, v) = post("/api/analyze", body.to_string()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["kind"], "cannot_climb");
    let ratio = v["error"]["thrust_to_weight"].as_f64().unwrap();
    assert!(ratio < 1.0 && ratio > 0.9);
    assert_eq!(v["request_echo"], body);
}

#[tokio::test]
async fn curve_endpoint() {
    let synthetic = json!({
        "uav": {"name": "synthetic", "base_mass_g": 1000, "rotor_count": 4, "rotor_pull_gf": 500, "control_rate_hz": 1000},
        "sensor": {"name": "s", "framerate_hz": 60, "range_m": 10, "mass_g": 0},
        "compute": {"name": "c", "tdp_w": 0, "board_mass_g": 0},
        "algorithm": {"name": "a", "throughput_hz": 1},
        "model": {"a_max_mps2": 50}
    });
    let (status, v) = post(
        "/api/curve",
        json!({"config": synthetic, "f_range": [0.2, 10000], "samples": 200}).to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let curve = v["series"]["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 200);
    assert!((curve[0]["v_safe_mps"].as_f64().unwrap() - 1.992).abs() < 1e-3);
    assert!((curve[199]["v_safe_mps"].as_f64().unwrap() - 31.62).abs() < 5e-3);
    let vs: Vec<f64> = curve
        .iter()
        .map(|p| p["v_safe_mps"].as_f64().unwrap())
        .collect();
    assert!(vs.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(v["series"]["ceilings"].as_array().unwrap().len(), 3);

    let (status, v) = post(
        "/api/curve",
        json!({"config": synthetic, "f_range": [1, 2], "samples": 2, "scale": "linear"})
            .to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let f: Vec<f64> = v["series"]["curve"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["f_action_hz"].as_f64().unwrap())
        .collect();
    assert_eq!(f, vec![1.0, 2.0]);

    let (status, v) = post(
        "/api/curve",
        json!({"config": synthetic, "f_range": [10, 1]}).to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["path"], "f_range");

    let (status, v) = post(
        "/api/curve",
        json!({"config": {"uav": {"name": "nope"}}, "f_range": [1, 10]}).to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["path"], "config.uav.name");
}

#[tokio::test]
async fn sweep_embeds_point_errors() {
    let (status, v) = post(
        "/api/sweep",
        json!({"config": {"uav": {"name": "UAV-A"}}, "knob": "payload_weight_g", "values": [590, 640, 690, 800]}).to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 4);
    let vs: Vec<f64> = points[..3]
        .iter()
        .map(|p| p["analysis"]["v_safe_mps"].as_f64().unwrap())
        .collect();
    assert!(vs.windows(2).all(|w| w[1] < w[0]));
    assert!(points[3]["error"]["thrust_to_weight"].as_f64().unwrap() < 1.0);

    let (status, v) = post(
        "/api/sweep",
        json!({"config": {"uav": {"name": "DJI Spark"}, "compute": {"name": "Nvidia AGX"}}, "knob": "compute_tdp_w", "values": [30, 15]}).to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let v30 = v["points"][0]["analysis"]["v_safe_mps"].as_f64().unwrap();
    let v15 = v["points"][1]["analysis"]["v_safe_mps"].as_f64().unwrap();
    assert!(v15 > v30);

    let (status, v) = post(
        "/api/sweep",
        json!({"config": {"uav": {"name": "UAV-A"}}, "knob": "compute_tdp_w", "values": []})
            .to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["points"], json!([]));

    let (status, v) = post(
        "/api/sweep",
        json!({"config": {"uav": {"name": "UAV-A"}}, "knob": "wingspan", "values": [1]})
            .to_string(),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["path"], "knob");
}

#[tokio::test]
async fn compare_and_plot() {
    let spark = |c: &str| json!({"uav": {"name": "DJI Spark"}, "compute": {"name": c}, "algorithm": {"name": "DroNet"}});
    let body = json!({"configs": [spark("Intel NCS"), spark("Nvidia AGX")], "f_range": [1, 1000], "samples": 40});
    let (status, v) = post("/api/compare", body.to_string()).await;
    assert_eq!(status, StatusCode::OK);
    let series = v["comparison"]["series"].as_array().unwrap();
    let ncs = series[0]["curve"].as_array().unwrap();
    let agx = series[1]["curve"].as_array().unwrap();
    for (a, b) in ncs.iter().zip(agx) {
        assert_eq!(a["f_action_hz"], b["f_action_hz"]);
        assert!(a["v_safe_mps"].as_f64() > b["v_safe_mps"].as_f64());
    }

    let req = Request::post("/api/plot")
        .body(Body::from(body.to_string()))
        .unwrap();
    let (status, headers, svg) = send(app(), req).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(headers[header::CONTENT_TYPE], "image/svg+xml");
    assert!(String::from_utf8(svg).unwrap().contains("Intel NCS"));
}

#[tokio::test]
async fn json_numbers_have_at_most_twelve_significant_digits() {
    let req = Request::post("/api/analyze")
        .body(Body::from(pelican("SPA-package-delivery").to_string()))
        .unwrap();
    let (_, _, bytes) = send(app(), req).await;
    fn walk(v: &Value) {
        match v {
            Value::Number(n) => {
                let digits: String = n
                    .to_string()
                    .chars()
                    .take_while(|c| *c != 'e')
                    .filter(char::is_ascii_digit)
                    .collect();
                assert!(
                    digits.trim_start_matches('0').trim_end_matches('0').len() <= 12,
                    "{n}"
                );
            }
            Value::Array(a) => a.iter().for_each(walk),
            Value::Object(o) => o.values().for_each(walk),
            _ => {}
        }
    }
    walk(&serde_json::from_slice(&bytes).unwrap());
}

#[tokio::test]
async fn concurrent_identical_requests_are_byte_identical() {
    let app = app();
    let body = pelican("DroNet").to_string();
    let tasks: Vec<_> = (0..32)
        .map(|_| {
            let app = app.clone();
            let body = body.clone();
            tokio::spawn(async move {
                let req = Request::post("/api/analyze")
                    .body(Body::from(body))
                    .unwrap();
                send(app, req).await.2
            })
        })
        .collect();
    let mut bodies = Vec::new();
    for t in tasks {
        bodies.push(t.await.unwrap());
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}

#[tokio::test]
async fn cors_is_opt_in() {
    let preflight = || {
        Request::options("/api/analyze")
            .header(header::ORIGIN, "http://localhost:5173")
            .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
            .body(Body::empty())
            .unwrap()
    };
    let with = router(builtin_presets(), &["http://localhost:5173".to_string()]);
    let (_, headers, _) = send(with, preflight()).await;
    assert_eq!(
        headers[header::ACCESS_CONTROL_ALLOW_ORIGIN],
        "http://localhost:5173"
    );
    let (_, headers, _) = send(app(), preflight()).await;
    assert!(headers.get(header::ACCESS_CONTROL_ALLOW_ORIGIN).is_none());
}

#[tokio::test]
async fn serves_over_tcp() {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, app()).await.unwrap() });
    let buf = tokio::task::spawn_blocking(move || {
        use std::io::{Read, Write};
        let mut stream = std::net::TcpStream::connect(addr).unwrap();
        stream
            .write_all(b"GET /api/health HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n")
            .unwrap();
        let mut buf = String::new();
        stream.read_to_string(&mut buf).unwrap();
        buf
    })
    .await
    .unwrap();
    assert!(buf.starts_with("HTTP/1.1 200"));
    assert!(buf.ends_with(r#"{"status":"ok"}"#));
}
