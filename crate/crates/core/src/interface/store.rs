use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use super::session::Session;
use super::InterfaceError;

/// One JSON file per session under a data directory.
///
/// Writes go to a temporary file in the same directory and are renamed into
/// place. Mutations take a per-session lock; a second writer gets
/// [`InterfaceError::Conflict`] instead of waiting.
#[derive(Debug, Clone)]
pub struct SessionStore {
    dir: PathBuf,
    locks: Arc<Mutex<HashSet<String>>>,
}

/// Held while a session is being mutated.
#[derive(Debug)]
pub struct SessionLock {
    id: String,
    locks: Arc<Mutex<HashSet<String>>>,
}

impl Drop for SessionLock {
    fn drop(&mut self) {
        self.locks.lock().unwrap().remove(&self.id);
    }
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-')
}

impl SessionStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, InterfaceError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| InterfaceError::Storage(format!("{}: {e}", dir.display())))?;
        tempfile::NamedTempFile::new_in(&dir)
            .map_err(|e| InterfaceError::Storage(format!("{} is not writable: {e}", dir.display())))?;
        Ok(Self { dir, locks: Arc::new(Mutex::new(HashSet::new())) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }

    pub fn new_id(&self) -> String {
        uuid::Uuid::new_v4().simple().to_string()
    }

    pub fn try_lock(&self, id: &str) -> Result<SessionLock, InterfaceError> {
        let mut held = self.locks.lock().unwrap();
        if !held.insert(id.to_string()) {
            return Err(InterfaceError::Conflict(format!("session {id} is being modified")));
        }
        Ok(SessionLock { id: id.to_string(), locks: self.locks.clone() })
    }

    /// Retries [`Self::try_lock`] until `patience` runs out.
    pub fn lock_within(&self, id: &str, patience: Duration) -> Result<SessionLock, InterfaceError> {
        let deadline = Instant::now() + patience;
        loop {
            match self.try_lock(id) {
                Err(InterfaceError::Conflict(_)) if Instant::now() < deadline => std::thread::sleep(Duration::from_millis(5)),
                other => return other,
            }
        }
    }

    pub fn load(&self, id: &str) -> Result<Session, InterfaceError> {
        if !valid_id(id) {
            return Err(InterfaceError::SessionNotFound(id.to_string()));
        }
        let bytes = match std::fs::read(self.path(id)) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(InterfaceError::SessionNotFound(id.to_string()))
            }
            Err(e) => return Err(InterfaceError::Storage(e.to_string())),
        };
        serde_json::from_slice(&bytes).map_err(|e| InterfaceError::Storage(format!("session {id}: {e}")))
    }

    /// Writes the session atomically. The caller must hold its lock.
    pub fn save(&self, session: &Session, _lock: &SessionLock) -> Result<(), InterfaceError> {
        if !valid_id(&session.id) {
            return Err(InterfaceError::Storage(format!("bad session id {:?}", session.id)));
        }
        let storage = |e: std::io::Error| InterfaceError::Storage(e.to_string());
        let bytes = serde_json::to_vec_pretty(session).map_err(|e| InterfaceError::Storage(e.to_string()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(storage)?;
        tmp.write_all(&bytes).map_err(storage)?;
        tmp.as_file().sync_all().map_err(storage)?;
        tmp.persist(self.path(&session.id)).map_err(|e| storage(e.error))?;
        Ok(())
    }

    pub fn exists(&self, id: &str) -> bool {
        valid_id(id) && self.path(id).exists()
    }
}
