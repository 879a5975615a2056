use std::collections::{HashMap, VecDeque};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{request_digest, ChatProvider, ChatRequest, LlmError};

/// One line of a fixture file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub digest: String,
    pub model: String,
    pub reply: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureHit {
    pub digest: String,
    /// 0-based occurrence of this digest that was served.
    pub occurrence: usize,
}

pub fn read_fixtures(path: &Path) -> Result<Vec<FixtureRecord>, LlmError> {
    let file = File::open(path).map_err(|e| LlmError::Fixture(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| LlmError::Fixture(format!("{}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: FixtureRecord = serde_json::from_str(&line)
            .map_err(|e| LlmError::Fixture(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

/// Serves recorded replies by request digest.
///
/// A digest recorded several times (identical prompts sent by repeated
/// attempts) is served in file order, one record per request; once its
/// records are used up the request is a `FIXTURE_MISS`.
pub struct ReplayProvider {
    queues: Mutex<HashMap<String, (usize, VecDeque<String>)>>,
    hits: Mutex<Vec<FixtureHit>>,
}

impl ReplayProvider {
    pub fn new(records: Vec<FixtureRecord>) -> Self {
        let mut queues: HashMap<String, (usize, VecDeque<String>)> = HashMap::new();
        for r in records {
            queues.entry(r.digest).or_default().1.push_back(r.reply);
        }
        ReplayProvider { queues: Mutex::new(queues), hits: Mutex::new(Vec::new()) }
    }

    pub fn from_file(path: &Path) -> Result<Self, LlmError> {
        Ok(ReplayProvider::new(read_fixtures(path)?))
    }

    pub fn hits(&self) -> Vec<FixtureHit> {
        self.hits.lock().unwrap().clone()
    }
}

impl ChatProvider for ReplayProvider {
    fn complete(&self, req: &ChatRequest<'_>) -> Result<String, LlmError> {
        let digest = request_digest(req);
        let mut queues = self.queues.lock().unwrap();
        match queues.get_mut(&digest) {
            Some((served, q)) if !q.is_empty() => {
                let reply = q.pop_front().unwrap();
                self.hits.lock().unwrap().push(FixtureHit { digest, occurrence: *served });
                *served += 1;
                Ok(reply)
            }
            _ => Err(LlmError::FixtureMiss(digest)),
        }
    }
}

/// Forwards to an inner provider and appends every successful exchange to a
/// fixture file. Appends are serialized, so concurrent sessions may share one
/// recorder.
pub struct RecordProvider<P> {
    inner: P,
    path: PathBuf,
    file: Mutex<File>,
}

impl<P: ChatProvider> RecordProvider<P> {
    /// Opens `path` for appending (creating it if needed).
    pub fn new(inner: P, path: impl Into<PathBuf>) -> Result<Self, LlmError> {
        let path = path.into();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| LlmError::Fixture(format!("{}: {e}", path.display())))?;
        Ok(RecordProvider { inner, path, file: Mutex::new(file) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl<P: ChatProvider> ChatProvider for RecordProvider<P> {
    fn complete(&self, req: &ChatRequest<'_>) -> Result<String, LlmError> {
        let reply = self.inner.complete(req)?;
        let rec = FixtureRecord { digest: request_digest(req), model: req.params.model.clone(), reply: reply.clone() };
        let mut line = serde_json::to_string(&rec).expect("record serializes");
        line.push('\n');
        let mut file = self.file.lock().unwrap();
        file.write_all(line.as_bytes()).map_err(|e| LlmError::Fixture(format!("{}: {e}", self.path.display())))?;
        file.flush().map_err(|e| LlmError::Fixture(format!("{}: {e}", self.path.display())))?;
        Ok(reply)
    }
}
