use std::fs;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use skinforge_core::SkinModelParams;
use skinforge_tuner::{router, ServiceConfig, SessionState, DEFAULT_MAX_IMAGES, DEFAULT_MAX_UPLOAD_BYTES};

/// Interactive skin-tone tuning service.
#[derive(Parser, Debug)]
#[command(name = "skinforge-tuner", version)]
struct Args {
    #[arg(long, env = "SKINFORGE_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    /// Directory of UI assets served from `/`.
    #[arg(long)]
    static_dir: Option<PathBuf>,
    /// Skin model in key=value form.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Images kept in memory before the least recently used is dropped.
    #[arg(long, default_value_t = DEFAULT_MAX_IMAGES)]
    max_images: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_UPLOAD_BYTES)]
    max_upload_bytes: usize,
}

fn load_model(path: Option<&PathBuf>) -> Result<SkinModelParams, String> {
    let Some(path) = path else {
        return Ok(SkinModelParams::default());
    };
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    SkinModelParams::from_kv(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[tokio::main]
async fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SKINFORGE_LOG", "info"))
        .init();
    let args = Args::parse();
    let model = match load_model(args.config.as_ref()) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("skinforge-tuner: {e}");
            return ExitCode::from(2);
        }
    };
    let state = Arc::new(SessionState::new(model, args.max_images));
    let cfg = ServiceConfig {
        max_upload_bytes: args.max_upload_bytes,
        static_dir: args.static_dir,
    };
    let addr = SocketAddr::new(args.host, args.port);
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("skinforge-tuner: cannot bind {addr}: {e}");
            return ExitCode::from(2);
        }
    };
    log::info!("listening on http://{addr}");
    let served = axum::serve(listener, router(state, &cfg))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await;
    match served {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("skinforge-tuner: {e}");
            ExitCode::from(2)
        }
    }
}
