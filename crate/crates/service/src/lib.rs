//! HTTP/JSON service for the word-learning dialogue.
//!
//! Reads are served from an immutable lexicon snapshot. Every mutation goes
//! through one writer lock: it copies the snapshot, applies the change,
//! persists the file and only then publishes the new snapshot.

pub mod api;
mod routes;

use std::collections::HashMap;
use std::future::Future;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use fuzzylex_core::{Lexicon, Policy, Session, SessionId};
use tokio::net::TcpListener;

pub use routes::router;

pub const DEFAULT_LISTEN: &str = "127.0.0.1:8714";
pub const DEFAULT_SESSION_TTL: Duration = Duration::from_secs(3600);

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Lexicon file. `None` keeps everything in memory.
    pub lexicon_path: Option<PathBuf>,
    /// Directory of static UI files served for non-API paths.
    pub ui_dir: Option<PathBuf>,
    pub policy: Policy,
    pub session_ttl: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            lexicon_path: None,
            ui_dir: None,
            policy: Policy::default(),
            session_ttl: DEFAULT_SESSION_TTL,
        }
    }
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    config: ServiceConfig,
    snapshot: RwLock<Arc<Lexicon>>,
    writer: tokio::sync::Mutex<()>,
    sessions: Mutex<HashMap<SessionId, (Session, Instant)>>,
}

impl AppState {
    /// Loads the configured lexicon file, or starts empty when it does not exist yet.
    pub fn open(config: ServiceConfig) -> fuzzylex_core::Result<Self> {
        let lexicon = match &config.lexicon_path {
            Some(path) if path.exists() => Lexicon::load(path)?,
            _ => Lexicon::new(),
        };
        Ok(Self::with_lexicon(lexicon, config))
    }

    pub fn with_lexicon(lexicon: Lexicon, config: ServiceConfig) -> Self {
        AppState {
            inner: Arc::new(Inner {
                config,
                snapshot: RwLock::new(Arc::new(lexicon)),
                writer: tokio::sync::Mutex::new(()),
                sessions: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.inner.config
    }

    pub fn lexicon(&self) -> Arc<Lexicon> {
        self.inner.snapshot.read().expect("snapshot lock poisoned").clone()
    }

    /// Runs `mutate` on a private copy of the lexicon; on success the copy is
    /// persisted and published. Mutations are serialized.
    pub(crate) async fn mutate<T>(
        &self,
        mutate: impl FnOnce(&mut Lexicon) -> fuzzylex_core::Result<T>,
    ) -> fuzzylex_core::Result<T> {
        let _guard = self.inner.writer.lock().await;
        let mut next = (*self.lexicon()).clone();
        let out = mutate(&mut next)?;
        if let Some(path) = &self.inner.config.lexicon_path {
            next.save(path)?;
        }
        *self.inner.snapshot.write().expect("snapshot lock poisoned") = Arc::new(next);
        Ok(out)
    }

    /// Holds the writer lock while `f` runs, so session checks and lexicon
    /// updates cannot interleave with other mutations.
    pub(crate) async fn exclusive(&self) -> tokio::sync::MutexGuard<'_, ()> {
        self.inner.writer.lock().await
    }

    pub(crate) fn publish(&self, lexicon: Lexicon) -> fuzzylex_core::Result<()> {
        if let Some(path) = &self.inner.config.lexicon_path {
            lexicon.save(path)?;
        }
        *self.inner.snapshot.write().expect("snapshot lock poisoned") = Arc::new(lexicon);
        Ok(())
    }

    pub async fn persist(&self) -> fuzzylex_core::Result<()> {
        let _guard = self.inner.writer.lock().await;
        match &self.inner.config.lexicon_path {
            Some(path) => self.lexicon().save(path),
            None => Ok(()),
        }
    }

    pub(crate) fn store_session(&self, session: Session) {
        let mut sessions = self.inner.sessions.lock().expect("session lock poisoned");
        let ttl = self.inner.config.session_ttl;
        sessions.retain(|_, (_, touched)| touched.elapsed() < ttl);
        sessions.insert(session.id.clone(), (session, Instant::now()));
    }

    pub(crate) fn session(&self, id: &SessionId) -> Option<Session> {
        let sessions = self.inner.sessions.lock().expect("session lock poisoned");
        sessions
            .get(id)
            .filter(|(_, touched)| touched.elapsed() < self.inner.config.session_ttl)
            .map(|(s, _)| s.clone())
    }
}

/// Serves until `shutdown` resolves, then writes the lexicon one last time.
pub async fn serve(
    listener: TcpListener,
    state: AppState,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "serving");
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(shutdown)
        .await?;
    state.persist().await.map_err(std::io::Error::other)
}
