use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use narrative_core::{
    build_index, ingest_corpus, ingest_documents, load_vocabulary, CorpusStore, IngestConfig,
    SearchContext,
};
use narrative_service::router;
use serde_json::Value;
use tower::ServiceExt;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/t3")
        .join(name)
}

fn context() -> Arc<SearchContext> {
    let vocab = load_vocabulary(fixture("vocab.jsonl")).unwrap();
    let store = ingest_corpus(fixture("corpus.jsonl"), &vocab, &IngestConfig::default()).unwrap();
    let index = build_index(&store);
    Arc::new(SearchContext::new(vocab, index, store).unwrap())
}

async fn call(ctx: &Arc<SearchContext>, method: &str, uri: &str) -> (StatusCode, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .body(Body::empty())
        .unwrap();
    let resp = router(ctx.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = axum::body::to_bytes(resp.into_body(), usize::MAX)
        .await
        .unwrap();
    (status, bytes.to_vec())
}

async fn get(ctx: &Arc<SearchContext>, uri: &str) -> (StatusCode, Value) {
    let (status, bytes) = call(ctx, "GET", uri).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn assert_error(status: StatusCode, body: &Value, want_status: u16, code: &str) {
    assert_eq!(status.as_u16(), want_status, "{body}");
    assert_eq!(body["schema_version"], 1);
    assert_eq!(body["error"]["code"], code, "{body}");
    assert!(body["error"]["message"]
        .as_str()
        .is_some_and(|m| !m.is_empty()));
}

#[tokio::test]
async fn suggest() {
    let ctx = context();
    let (s, body) = get(&ctx, "/suggest?q=diabetes%20melli").await;
    assert_eq!(s, StatusCode::OK);
    let list = body["suggestions"].as_array().unwrap();
    assert_eq!(list.len(), 3);
    assert_eq!(list[0]["synonym"], "diabetes mellitus");
    assert_eq!(list[0]["entity_id"], "MESH:D003920");
    assert_eq!(list[0]["entity_type"], "Disease");

    let (_, body) = get(&ctx, "/suggest?q=").await;
    assert_eq!(body["suggestions"].as_array().unwrap().len(), 0);
    let (_, body) = get(&ctx, "/suggest").await;
    assert_eq!(body["suggestions"].as_array().unwrap().len(), 0);
    let (_, body) = get(&ctx, "/suggest?q=diabetes%20melli&limit=1").await;
    assert_eq!(body["suggestions"].as_array().unwrap().len(), 1);

    let (s, body) = get(&ctx, "/suggest?q=dia&limit=many").await;
    assert_error(s, &body, 400, "INVALID_PARAMETER");
}

#[tokio::test]
async fn pattern() {
    let ctx = context();
    let (s, body) = get(&ctx, "/pattern?keywords=metformin%7Cdiabetes").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body["schema_version"], 1);
    assert_eq!(body["retrieved_doc_count"], 2);
    let searched: Vec<&str> = body["searched_entities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let edges = body["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 6);
    for e in edges {
        let (a, b) = (
            e["subject"].as_str().unwrap(),
            e["object"].as_str().unwrap(),
        );
        assert!(searched.contains(&a) || searched.contains(&b));
    }
    assert_eq!(edges[0]["subject"], "MESH:D003924");
    assert_eq!(edges[0]["object"], "MESH:D008687");
    assert_eq!(edges[0]["fscore"], 0.107664);
    assert_eq!(edges[0]["supporting_doc_count"], 2);
    let rectangles = body["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|n| n["is_searched"] == true)
        .count();
    assert_eq!(rectangles, 4);
}

#[tokio::test]
async fn pattern_errors() {
    let ctx = context();
    let (s, body) = get(&ctx, "/pattern?keywords=").await;
    assert_error(s, &body, 400, "NO_KEYWORDS");
    let (s, body) = get(&ctx, "/pattern").await;
    assert_error(s, &body, 400, "NO_KEYWORDS");

    let (s, body) = get(&ctx, "/pattern?keywords=xyzzy").await;
    assert_error(s, &body, 422, "UNTRANSLATABLE_KEYWORD");
    assert_eq!(body["error"]["detail"]["keyword"], "xyzzy");

    let (s, body) = get(&ctx, "/pattern?keywords=metformin%7Cmetforminx").await;
    assert_error(s, &body, 422, "UNTRANSLATABLE_KEYWORD");
    assert_eq!(
        body["error"]["detail"]["suggestions"][0]["synonym"],
        "metformin"
    );

    let (s, body) = get(
        &ctx,
        "/pattern?keywords=insulin&from=2021-01-01&to=2020-01-01",
    )
    .await;
    assert_error(s, &body, 400, "INVALID_DATE_RANGE");
    let (s, body) = get(&ctx, "/pattern?keywords=insulin&from=yesterday").await;
    assert_error(s, &body, 400, "INVALID_PARAMETER");
    let (s, body) = get(&ctx, "/pattern?keywords=insulin&top_k=0").await;
    assert_error(s, &body, 400, "INVALID_PARAMETER");
}

#[tokio::test]
async fn pattern_top_k_is_monotone() {
    let ctx = context();
    let mut previous: Vec<(String, String)> = Vec::new();
    for k in 1..=6 {
        let (_, body) = get(
            &ctx,
            &format!("/pattern?keywords=insulin%7Cpatients&top_k={k}"),
        )
        .await;
        let now: Vec<(String, String)> = body["edges"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| {
                (
                    e["subject"].as_str().unwrap().to_owned(),
                    e["object"].as_str().unwrap().to_owned(),
                )
            })
            .collect();
        assert!(previous.iter().all(|e| now.contains(e)), "k={k}");
        previous = now;
    }
}

#[tokio::test]
async fn pattern_filters() {
    let ctx = context();
    let (_, body) = get(
        &ctx,
        "/pattern?keywords=insulin&classes=Clinical%20Study%7CReview",
    )
    .await;
    assert_eq!(body["retrieved_doc_count"], 1);
    let (_, body) = get(&ctx, "/pattern?keywords=insulin&sources=PMC").await;
    assert_eq!(body["retrieved_doc_count"], 0);
    let (_, body) = get(
        &ctx,
        "/pattern?keywords=insulin&from=2020-01-10&to=2020-01-10",
    )
    .await;
    assert_eq!(body["retrieved_doc_count"], 1);
}

#[tokio::test]
async fn edge_docs() {
    let ctx = context();
    let uri = "/edge_docs?subject=MESH:D008687&predicate=associated&object=MESH:D003924&keywords=metformin%7Cdiabetes";
    let (s, bytes) = call(&ctx, "GET", uri).await;
    assert_eq!(s, StatusCode::OK);
    let body: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(body["edge"]["subject"], "MESH:D003924");
    let docs = body["documents"].as_array().unwrap();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0]["doc_id"], "1001");
    assert_eq!(docs[0]["title"], "Metformin in diabetes mellitus type 2.");
    assert_eq!(docs[0]["publication_date"], "2021-03-15");
    assert_eq!(docs[0]["score"], 0.073303);
    assert_eq!(docs[1]["doc_id"], "1002");
    assert_eq!(docs[1]["score"], 0.034361);

    let (_, again) = call(&ctx, "GET", uri).await;
    assert_eq!(bytes, again);

    let (s, body) = get(
        &ctx,
        "/edge_docs?subject=MESH:D008687&predicate=associated&object=GENE:0000&keywords=metformin",
    )
    .await;
    assert_error(s, &body, 404, "UNKNOWN_EDGE");
    assert_eq!(body["error"]["detail"]["object"], "MESH:D008687");

    let (s, body) = get(&ctx, "/edge_docs?subject=MESH:D008687&keywords=metformin").await;
    assert_error(s, &body, 400, "INVALID_PARAMETER");
}

#[tokio::test]
async fn documents() {
    let ctx = context();
    let (s, body) = get(&ctx, "/documents?keywords=metformin%7Cdiabetes").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body["total"], 2);
    let ids: Vec<&str> = body["documents"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["doc_id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["1001", "1002"]);

    let (_, body) = get(&ctx, "/documents?keywords=metformin%7Cdiabetes&offset=5").await;
    assert_eq!(body["documents"].as_array().unwrap().len(), 0);
    assert_eq!(body["total"], 2);
    let (_, body) = get(&ctx, "/documents?keywords=metformin%7Cdiabetes&count=1").await;
    let docs = body["documents"].as_array().unwrap();
    assert_eq!(docs.len(), 1);
    assert_eq!(docs[0]["doc_id"], "1001");

    let (s, body) = get(&ctx, "/documents?keywords=").await;
    assert_error(s, &body, 400, "NO_KEYWORDS");
}

#[tokio::test]
async fn meta() {
    let ctx = context();
    let (s, body) = get(&ctx, "/meta").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body["total_docs"], 3);
    assert_eq!(body["sources"], serde_json::json!(["PubMed"]));
    assert_eq!(
        body["classes"],
        serde_json::json!(["Clinical Study", "Pharmaceutical Technology"])
    );
    let types = body["types"].as_array().unwrap();
    assert_eq!(types.len(), 8);
    let drug = types.iter().find(|t| t["type"] == "Drug").unwrap();
    assert_eq!(drug["color"], "#d7191c");

    let vocab = load_vocabulary(fixture("vocab.jsonl")).unwrap();
    let store: CorpusStore =
        ingest_documents(Vec::new(), &vocab, &IngestConfig::default()).unwrap();
    let empty = Arc::new(SearchContext::new(vocab, build_index(&store), store).unwrap());
    let (s, body) = get(&empty, "/meta").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body["total_docs"], 0);
}

#[tokio::test]
async fn unknown_routes_and_methods() {
    let ctx = context();
    let (s, body) = get(&ctx, "/nope").await;
    assert_error(s, &body, 404, "NOT_FOUND");
    let (s, bytes) = call(&ctx, "POST", "/pattern?keywords=metformin").await;
    let body: Value = serde_json::from_slice(&bytes).unwrap();
    assert_error(s, &body, 405, "METHOD_NOT_ALLOWED");
}

#[tokio::test]
async fn cors_is_enabled() {
    let ctx = context();
    let req = Request::builder()
        .uri("/meta")
        .header(header::ORIGIN, "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let resp = router(ctx).oneshot(req).await.unwrap();
    assert_eq!(resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");
}
