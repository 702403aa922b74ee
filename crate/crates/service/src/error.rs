use ahp_core::Cell;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::{json, Value};

/// An error response: status plus a JSON body with a machine-readable
/// `error` code.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: json!({ "error": code, "message": message.into() }),
        }
    }

    pub fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("no session {id:?}"))
    }

    pub fn unprocessable(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, code, message)
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }

    pub fn conflict(expected: u64, current: u64) -> Self {
        ApiError {
            status: StatusCode::CONFLICT,
            body: json!({
                "error": "revision_conflict",
                "message": format!("If-Match names revision {expected}, session is at {current}"),
                "current_revision": current,
            }),
        }
    }

    /// `a_ij * a_ji > 1`. Carries the product and the mirror repair
    /// `a_ij <- 1/a_ji, a_ji <- 1/a_ij`.
    pub fn product_bound(
        matrix: &str,
        labels: &[String],
        i: usize,
        j: usize,
        a_ij: Cell,
        a_ji: Cell,
        theta: Cell,
    ) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            body: json!({
                "error": "product_bound",
                "message": format!(
                    "a_ij * a_ji = {} exceeds 1 for ({}, {}) in {matrix}",
                    theta.to_text(), labels[i], labels[j]
                ),
                "matrix": matrix,
                "i": i + 1,
                "j": j + 1,
                "row": labels[i],
                "col": labels[j],
                "a_ij": a_ij,
                "a_ji": a_ji,
                "theta": theta.value(),
                "theta_exact": theta.to_text(),
                "suggestion": {
                    "a_ij": a_ji.recip(),
                    "a_ji": a_ij.recip(),
                    "theta": theta.recip().value(),
                    "theta_exact": theta.recip().to_text(),
                },
            }),
        }
    }
}

impl From<ahp_core::Error> for ApiError {
    fn from(e: ahp_core::Error) -> Self {
        let mut err = ApiError::unprocessable("invalid", e.to_string());
        if let ahp_core::Error::Inadmissible(report) = &e {
            err.body["violations"] = serde_json::to_value(&report.violations).unwrap_or(Value::Null);
        }
        err
    }
}

impl From<ahp_core::io::IoError> for ApiError {
    fn from(e: ahp_core::io::IoError) -> Self {
        match e {
            ahp_core::io::IoError::Invalid(inner) => inner.into(),
            other => ApiError::unprocessable("invalid", other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}
