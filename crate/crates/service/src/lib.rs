//! Read-only HTTP API over a loaded [`SearchContext`].
//!
//! | Endpoint | Answer |
//! |---|---|
//! | `GET /suggest?q=&limit=` | autocomplete suggestions (limit defaults to 10) |
//! | `GET /pattern?keywords=a\|b&top_k=&sources=&classes=&from=&to=` | the narrative pattern |
//! | `GET /edge_docs?subject=&predicate=&object=&keywords=...` | documents supporting one edge |
//! | `GET /documents?keywords=...&offset=&count=` | retrieved documents, newest first |
//! | `GET /meta` | entity type colors, sources, classes, corpus size |
//!
//! Keywords, sources and classes are `|`-separated. Every response body is
//! JSON carrying `schema_version`; failures use
//! `{"schema_version":1,"error":{"code":..,"message":..,"detail":..}}`.

mod error;
mod params;

use std::collections::HashMap;
use std::future::Future;
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::Method;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use chrono::NaiveDate;
use narrative_core::render::{round6, PatternView, SCHEMA_VERSION};
use narrative_core::{DocumentMeta, EntityType, SearchContext, Suggestion};
use serde::Serialize;
use tokio::net::TcpListener;
use tower_http::cors::{Any, CorsLayer};

pub use error::ApiError;
use params::Params;

pub const DEFAULT_SUGGEST_LIMIT: usize = 10;
pub const DEFAULT_PAGE_SIZE: usize = 20;

type AppState = Arc<SearchContext>;
type Raw = Query<HashMap<String, String>>;

pub fn router(ctx: Arc<SearchContext>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET]);
    Router::new()
        .route("/suggest", get(suggest))
        .route("/pattern", get(pattern))
        .route("/edge_docs", get(edge_docs))
        .route("/documents", get(documents))
        .route("/meta", get(meta))
        .fallback(|| async { ApiError::not_found() })
        .method_not_allowed_fallback(|| async { ApiError::method_not_allowed() })
        .layer(cors)
        .with_state(ctx)
}

/// Serves until `shutdown` resolves, then drains in-flight requests.
pub async fn serve(
    listener: TcpListener,
    ctx: Arc<SearchContext>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    if let Ok(addr) = listener.local_addr() {
        tracing::info!(%addr, documents = ctx.store().len(), "listening");
    }
    axum::serve(listener, router(ctx))
        .with_graceful_shutdown(shutdown)
        .await
}

/// Runs CPU-bound query work off the async workers.
async fn blocking<T: Send + 'static>(
    ctx: AppState,
    f: impl FnOnce(&SearchContext) -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(move || f(&ctx))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?
}

#[derive(Serialize)]
struct SuggestResponse {
    schema_version: u32,
    suggestions: Vec<Suggestion>,
}

async fn suggest(
    State(ctx): State<AppState>,
    Query(raw): Raw,
) -> Result<Json<SuggestResponse>, ApiError> {
    let p = Params(raw);
    let limit = p.usize_or("limit", DEFAULT_SUGGEST_LIMIT)?;
    Ok(Json(SuggestResponse {
        schema_version: SCHEMA_VERSION,
        suggestions: ctx.vocabulary().suggest(p.text("q"), limit),
    }))
}

async fn pattern(State(ctx): State<AppState>, Query(raw): Raw) -> Result<Response, ApiError> {
    let q = Params(raw).query()?;
    blocking(ctx, move |ctx| {
        let p = ctx.mine_pattern(&q)?;
        Ok(Json(PatternView::new(&p)).into_response())
    })
    .await
}

#[derive(Serialize)]
struct DocView<'a> {
    source: &'a str,
    doc_id: &'a str,
    title: &'a str,
    publication_date: Option<NaiveDate>,
    classes: &'a [String],
}

impl<'a> From<&'a DocumentMeta> for DocView<'a> {
    fn from(m: &'a DocumentMeta) -> Self {
        DocView {
            source: &m.source,
            doc_id: &m.doc_id,
            title: &m.title,
            publication_date: m.publication_date,
            classes: &m.classes,
        }
    }
}

#[derive(Serialize)]
struct ScoredDoc<'a> {
    #[serde(flatten)]
    doc: DocView<'a>,
    score: f64,
}

#[derive(Serialize)]
struct EdgeView<'a> {
    subject: &'a str,
    predicate: &'a str,
    object: &'a str,
}

#[derive(Serialize)]
struct EdgeDocsResponse<'a> {
    schema_version: u32,
    edge: EdgeView<'a>,
    documents: Vec<ScoredDoc<'a>>,
}

async fn edge_docs(State(ctx): State<AppState>, Query(raw): Raw) -> Result<Response, ApiError> {
    let p = Params(raw);
    let edge = p.edge()?;
    let q = p.query()?;
    blocking(ctx, move |ctx| {
        let hits = ctx.edge_documents(&edge, &q)?;
        let edge = narrative_core::EdgeKey::new(&edge.subject, &edge.predicate, &edge.object);
        let body = EdgeDocsResponse {
            schema_version: SCHEMA_VERSION,
            edge: EdgeView {
                subject: &edge.subject,
                predicate: &edge.predicate,
                object: &edge.object,
            },
            documents: hits
                .iter()
                .map(|&(ord, score)| ScoredDoc {
                    doc: ctx.meta(ord).into(),
                    score: round6(score),
                })
                .collect(),
        };
        Ok(Json(body).into_response())
    })
    .await
}

#[derive(Serialize)]
struct DocumentsResponse<'a> {
    schema_version: u32,
    total: usize,
    offset: usize,
    count: usize,
    documents: Vec<DocView<'a>>,
}

async fn documents(State(ctx): State<AppState>, Query(raw): Raw) -> Result<Response, ApiError> {
    let p = Params(raw);
    let q = p.query()?;
    let offset = p.usize_or("offset", 0)?;
    let count = p.usize_or("count", DEFAULT_PAGE_SIZE)?;
    blocking(ctx, move |ctx| {
        let all = ctx.result_documents(&q)?;
        let page: Vec<DocView> = all
            .iter()
            .skip(offset)
            .take(count)
            .map(|&o| ctx.meta(o).into())
            .collect();
        Ok(Json(DocumentsResponse {
            schema_version: SCHEMA_VERSION,
            total: all.len(),
            offset,
            count: page.len(),
            documents: page,
        })
        .into_response())
    })
    .await
}

#[derive(Serialize)]
struct TypeColor {
    #[serde(rename = "type")]
    entity_type: EntityType,
    color: &'static str,
}

#[derive(Serialize)]
struct MetaResponse<'a> {
    schema_version: u32,
    types: Vec<TypeColor>,
    sources: Vec<&'a str>,
    classes: Vec<&'a str>,
    total_docs: usize,
    entities: usize,
    edges: usize,
}

async fn meta(State(ctx): State<AppState>) -> Response {
    let index = ctx.index();
    Json(MetaResponse {
        schema_version: SCHEMA_VERSION,
        types: EntityType::ALL
            .iter()
            .map(|&t| TypeColor {
                entity_type: t,
                color: t.color(),
            })
            .collect(),
        sources: index.sources().into_iter().collect(),
        classes: index.classes().into_iter().collect(),
        total_docs: index.total_docs(),
        entities: ctx.vocabulary().len(),
        edges: index.edge_count(),
    })
    .into_response()
}
