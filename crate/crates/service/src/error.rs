use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use narrative_core::render::SCHEMA_VERSION;
use narrative_core::PatternError;
use serde::Serialize;
use serde_json::{json, Value};

/// Structured error body: `{schema_version, error: {code, message, detail}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub detail: Value,
}

#[derive(Serialize)]
struct Body<'a> {
    schema_version: u32,
    error: Inner<'a>,
}

#[derive(Serialize)]
struct Inner<'a> {
    code: &'a str,
    message: &'a str,
    detail: &'a Value,
}

impl ApiError {
    pub fn invalid_parameter(name: &str, value: &str, reason: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code: "INVALID_PARAMETER",
            message: format!("parameter {name}: {}", reason.into()),
            detail: json!({ "parameter": name, "value": value }),
        }
    }

    pub fn not_found() -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            code: "NOT_FOUND",
            message: "no such endpoint".into(),
            detail: Value::Null,
        }
    }

    pub fn method_not_allowed() -> Self {
        ApiError {
            status: StatusCode::METHOD_NOT_ALLOWED,
            code: "METHOD_NOT_ALLOWED",
            message: "only GET is supported".into(),
            detail: Value::Null,
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            code: "INTERNAL",
            message: message.into(),
            detail: Value::Null,
        }
    }
}

impl From<PatternError> for ApiError {
    fn from(e: PatternError) -> Self {
        let message = e.to_string();
        let code = e.code();
        let (status, detail) = match &e {
            PatternError::NoKeywords => (StatusCode::BAD_REQUEST, Value::Null),
            PatternError::EmptyKeyword => {
                (StatusCode::BAD_REQUEST, json!({ "parameter": "keywords" }))
            }
            PatternError::InvalidTopK => (StatusCode::BAD_REQUEST, json!({ "parameter": "top_k" })),
            PatternError::UntranslatableKeyword {
                keyword,
                suggestions,
            } => (
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({ "keyword": keyword, "suggestions": suggestions }),
            ),
            PatternError::InvalidDateRange { from, to } => {
                (StatusCode::BAD_REQUEST, json!({ "from": from, "to": to }))
            }
            PatternError::UnknownEdge(k) => (
                StatusCode::NOT_FOUND,
                json!({ "subject": k.subject, "predicate": k.predicate, "object": k.object }),
            ),
            PatternError::Mismatch(_) => (StatusCode::INTERNAL_SERVER_ERROR, Value::Null),
        };
        ApiError {
            status,
            code,
            message,
            detail,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Body {
            schema_version: SCHEMA_VERSION,
            error: Inner {
                code: self.code,
                message: &self.message,
                detail: &self.detail,
            },
        };
        (self.status, Json(body)).into_response()
    }
}
