use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use narrative_core::render::{pattern_to_json, pattern_to_text};
use narrative_core::{
    build_index, ingest_corpus, load_index, load_vocabulary, save_index, CorpusStore, IngestConfig,
    PatternError, PatternQuery, SearchContext, DEFAULT_TOP_K,
};

#[derive(Parser)]
#[command(
    name = "narrative",
    version,
    about = "Entity-centric narrative pattern search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Link and extract a JSONL corpus into a document-graph store.
    Ingest {
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value_t = narrative_core::ingestion::DEFAULT_COOCCURRENCE_CONFIDENCE)]
        cooc_confidence: f64,
    },
    /// Build the inverted index of a store.
    Index {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        index: PathBuf,
    },
    /// Mine a narrative pattern for the given keywords.
    Query {
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOP_K, value_parser = parse_top_k)]
        top_k: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        keywords: Vec<String>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Graph,
}

fn parse_top_k(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err("must be an integer of at least 1".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match e.downcast_ref::<PatternError>() {
                Some(pe) => report_pattern_error(pe),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::FAILURE
        }
    }
}

fn report_pattern_error(e: &PatternError) {
    eprintln!("error[{}]: {e}", e.code());
    if let PatternError::UntranslatableKeyword { suggestions, .. } = e {
        if !suggestions.is_empty() {
            eprintln!("did you mean:");
            for s in suggestions {
                eprintln!("  {}  ({}, {})", s.synonym, s.entity_id, s.entity_type);
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest {
            vocab,
            corpus,
            store,
            cooc_confidence,
        } => {
            let config = IngestConfig {
                cooccurrence_confidence: cooc_confidence,
            };
            config.validate()?;
            let vocab = load_vocabulary(&vocab)?;
            let docs = ingest_corpus(&corpus, &vocab, &config)?;
            docs.save(&store)?;
            println!(
                "{} documents, {} statements",
                docs.len(),
                docs.total_statement_extractions()
            );
        }
        Command::Index { store, index } => {
            let docs = CorpusStore::load(&store)?;
            let ix = build_index(&docs);
            save_index(&ix, &index)?;
            println!(
                "{} documents, {} entities, {} edges",
                ix.total_docs(),
                ix.entity_ids().len(),
                ix.edge_count()
            );
        }
        Command::Query {
            vocab,
            index,
            store,
            top_k,
            format,
            keywords,
        } => {
            let ctx = load_context(&vocab, &index, &store)?;
            let p = ctx.mine_pattern(&PatternQuery::new(keywords).with_top_k(top_k))?;
            match format {
                Format::Text => print!("{}", pattern_to_text(&p, ctx.vocabulary())),
                Format::Graph => println!("{}", pattern_to_json(&p)),
            }
        }
        Command::Serve {
            vocab,
            index,
            store,
            host,
            port,
        } => {
            tracing_subscriber::fmt()
                .with_writer(std::io::stderr)
                .init();
            let ctx = Arc::new(load_context(&vocab, &index, &store)?);
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .or_else(|_| {
                    std::net::ToSocketAddrs::to_socket_addrs(&(host.as_str(), port))
                        .ok()
                        .and_then(|mut it| it.next())
                        .ok_or(())
                })
                .map_err(|_| anyhow::anyhow!("cannot resolve host {host}"))?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr)
                    .await
                    .with_context(|| format!("cannot bind {addr}"))?;
                println!("listening on http://{}", listener.local_addr()?);
                let shutdown = async {
                    let _ = tokio::signal::ctrl_c().await;
                };
                narrative_service::serve(listener, ctx, shutdown).await?;
                Ok::<_, anyhow::Error>(())
            })?;
        }
    }
    Ok(())
}

fn load_context(vocab: &Path, index: &Path, store: &Path) -> Result<SearchContext> {
    let vocab = load_vocabulary(vocab)?;
    let index = load_index(index)?;
    let store = CorpusStore::load(store)?;
    Ok(SearchContext::new(vocab, index, store)?)
}
