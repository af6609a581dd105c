//! Command-line front end. Results go to stdout as canonical JSON; failures
//! go to stderr as an error document and set the exit status.

use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::Value;

use intermodal_core::{Network, ProfileFamily};

use crate::error::{ApiError, ErrorKind};
use crate::render::canonical;
use crate::server::{self, Service};

#[derive(Debug, Parser)]
#[command(name = "intermodal", version, about = "Intermodal route planner")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan route alternatives for a request file.
    Route {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        request: PathBuf,
        /// Profile family used when the request does not carry one.
        #[arg(long)]
        profiles: Option<PathBuf>,
    },
    /// Plan the three motorhome options for a request file.
    Motorhome {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        request: PathBuf,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        #[arg(long)]
        profiles: Option<PathBuf>,
    },
    /// Load a graph and print a summary.
    Validate {
        #[arg(long)]
        graph: PathBuf,
    },
}

fn family(path: Option<&Path>) -> Result<ProfileFamily, ApiError> {
    match path {
        Some(p) => crate::load_family(p),
        None => Ok(ProfileFamily::default()),
    }
}

fn read_request(path: &Path) -> Result<String, ApiError> {
    std::fs::read_to_string(path).map_err(|e| ApiError::new(ErrorKind::Io, format!("{}: {e}", path.display())))
}

fn execute(command: Command) -> Result<Option<Value>, ApiError> {
    match command {
        Command::Route {
            graph,
            request,
            profiles,
        } => {
            let graph = crate::load_graph(&graph)?;
            let family = family(profiles.as_deref())?;
            let text = read_request(&request)?;
            crate::plan_route(Network::new(&graph), &text, &family).map(Some)
        }
        Command::Motorhome { graph, request } => {
            let graph = crate::load_graph(&graph)?;
            let text = read_request(&request)?;
            crate::plan_motorhome(Network::new(&graph), &text).map(Some)
        }
        Command::Validate { graph } => {
            let graph = crate::load_graph(&graph)?;
            Ok(Some(crate::graph_summary(&graph)))
        }
        Command::Serve { graph, bind, profiles } => {
            let service = Service::new(crate::load_graph(&graph)?, family(profiles.as_deref())?);
            let runtime = tokio::runtime::Runtime::new().map_err(|e| ApiError::new(ErrorKind::Io, e.to_string()))?;
            runtime
                .block_on(server::serve(service, bind))
                .map_err(|e| ApiError::new(ErrorKind::Io, format!("{bind}: {e}")))?;
            Ok(None)
        }
    }
}

/// Runs the tool and returns its exit status.
pub fn run(cli: Cli) -> i32 {
    match execute(cli.command) {
        Ok(value) => {
            if let Some(value) = value {
                let mut out = std::io::stdout().lock();
                if out.write_all(canonical(&value).as_bytes()).is_err() {
                    return ErrorKind::Io.exit_code();
                }
            }
            0
        }
        Err(e) => {
            eprint!("{}", canonical(&serde_json::json!({ "error": e.to_json() })));
            e.kind.exit_code()
        }
    }
}
