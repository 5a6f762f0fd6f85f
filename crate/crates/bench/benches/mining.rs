use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use narrative_bench::{corpus, most_frequent, workload};
use narrative_core::{build_index, ingest_documents, IngestConfig, PatternQuery};

fn bench(c: &mut Criterion) {
    let (vocab, docs) = corpus(10_000, 5_000);
    c.bench_function("ingest_10k", |b| {
        b.iter(|| ingest_documents(docs.clone(), &vocab, &IngestConfig::default()).unwrap())
    });
    let store = ingest_documents(docs, &vocab, &IngestConfig::default()).unwrap();
    c.bench_function("build_index_10k", |b| {
        b.iter(|| build_index(black_box(&store)))
    });

    let w = workload(50_000, 10_000, 20);
    c.bench_function("mine_pattern_typical_20_queries", |b| {
        b.iter(|| {
            for [x, y] in &w.queries {
                black_box(
                    w.ctx
                        .mine_pattern(&PatternQuery::new([x.as_str(), y.as_str()]))
                        .unwrap(),
                );
            }
        })
    });
    let head = most_frequent(&w.ctx, 2);
    let q = PatternQuery::new([head[0].as_str(), head[1].as_str()]);
    c.bench_function("mine_pattern_head_pair", |b| {
        b.iter(|| w.ctx.mine_pattern(black_box(&q)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench
}
criterion_main!(benches);
