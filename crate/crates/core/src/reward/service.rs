//! Stateless HTTP front end for the reward functions.
//!
//! * `POST /reward` `{"items": [{"label", "strength", "delta"?}]}` →
//!   `{"rewards": [..]}`
//! * `POST /advantages` `{"rewards": [..]}` → `{"advantages": [..]}`
//! * `POST /verdict` `{"qbaf": ..}` → strength report
//! * `GET /healthz`

use std::future::Future;
use std::net::SocketAddr;

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::net::TcpListener;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::qbaf::Qbaf;
use crate::semantics::{evaluate, StrengthReport};

use super::{group_advantages_with, reward, AdvantageMode, RewardSpec, DEFAULT_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ServiceConfig {
    /// Used for items that carry no `delta`.
    pub default_spec: RewardSpec,
    pub advantage_mode: AdvantageMode,
    pub eps: f64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            default_spec: RewardSpec::default(),
            advantage_mode: AdvantageMode::Normalized,
            eps: DEFAULT_EPS,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewardItem {
    pub label: Label,
    pub strength: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewardRequest {
    pub items: Vec<RewardItem>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RewardResponse {
    pub rewards: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdvantageRequest {
    pub rewards: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AdvantageResponse {
    pub advantages: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictRequest {
    pub qbaf: Qbaf,
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

fn unprocessable(e: impl std::fmt::Display) -> ApiError {
    ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
}

/// Scores a batch. Fails as a whole on the first invalid item.
pub fn score_batch(items: &[RewardItem], default_spec: RewardSpec) -> Result<Vec<f64>> {
    items
        .iter()
        .enumerate()
        .map(|(i, it)| {
            let spec = match it.delta {
                Some(d) => RewardSpec::new(d),
                None => Ok(default_spec),
            };
            spec.and_then(|s| reward(it.label, it.strength, s))
                .map_err(|e| Error::InvalidInput(format!("item {i}: {e}")))
        })
        .collect()
}

async fn reward_handler(
    State(cfg): State<ServiceConfig>,
    Json(req): Json<RewardRequest>,
) -> std::result::Result<Json<RewardResponse>, ApiError> {
    let rewards = score_batch(&req.items, cfg.default_spec).map_err(unprocessable)?;
    Ok(Json(RewardResponse { rewards }))
}

async fn advantages_handler(
    State(cfg): State<ServiceConfig>,
    Json(req): Json<AdvantageRequest>,
) -> std::result::Result<Json<AdvantageResponse>, ApiError> {
    let advantages =
        group_advantages_with(&req.rewards, cfg.advantage_mode, cfg.eps).map_err(unprocessable)?;
    Ok(Json(AdvantageResponse { advantages }))
}

async fn verdict_handler(
    Json(req): Json<VerdictRequest>,
) -> std::result::Result<Json<StrengthReport>, ApiError> {
    evaluate(&req.qbaf).map(Json).map_err(unprocessable)
}

async fn healthz() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

pub fn router(cfg: ServiceConfig) -> Router {
    Router::new()
        .route("/reward", post(reward_handler))
        .route("/advantages", post(advantages_handler))
        .route("/verdict", post(verdict_handler))
        .route("/healthz", get(healthz))
        .with_state(cfg)
}

/// Binds the listening socket, turning "address in use" into a readable
/// configuration error.
pub async fn bind(addr: SocketAddr) -> Result<TcpListener> {
    TcpListener::bind(addr).await.map_err(|e| {
        if e.kind() == std::io::ErrorKind::AddrInUse {
            Error::Config(format!("cannot listen on {addr}: the port is already in use"))
        } else {
            Error::Config(format!("cannot listen on {addr}: {e}"))
        }
    })
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    cfg: ServiceConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<()> {
    axum::serve(listener, router(cfg))
        .with_graceful_shutdown(shutdown)
        .await?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_uses_item_delta() {
        let items = vec![
            RewardItem {
                label: Label::True,
                strength: 0.95,
                delta: Some(0.0),
            },
            RewardItem {
                label: Label::True,
                strength: 0.95,
                delta: None,
            },
        ];
        let r = score_batch(&items, RewardSpec::default()).unwrap();
        assert!(r[0] < 100.0);
        assert_eq!(r[1], 100.0);
    }

    #[test]
    fn batch_reports_bad_item() {
        let items = vec![RewardItem {
            label: Label::False,
            strength: 2.0,
            delta: None,
        }];
        let msg = score_batch(&items, RewardSpec::default()).unwrap_err().to_string();
        assert!(msg.contains("item 0"), "{msg}");
    }
}
