//! Append-only JSON-lines log of publish/unpublish events.
//!
//! A crash can leave a partially written final line; replay drops it and
//! truncates the file back to the last complete event.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use mobidesc_core::codec::WireDocument;
use mobidesc_core::{Slot, Timestamp};
use serde::{Deserialize, Serialize};

use crate::store::{PublishRequest, ServiceRecord};

#[derive(Debug, thiserror::Error)]
pub enum JournalError {
    #[error("journal {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("journal {path} line {line}: {reason}")]
    Corrupt { path: PathBuf, line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct JournalRecord {
    pub service_id: String,
    pub service_name: String,
    pub service_uri: String,
    pub provider_endpoint: String,
    pub functional: String,
    #[serde(default)]
    pub static_docs: BTreeMap<Slot, String>,
    pub publish_instant: Timestamp,
}

impl JournalRecord {
    pub fn to_request(&self) -> PublishRequest {
        PublishRequest {
            service_name: self.service_name.clone(),
            service_uri: self.service_uri.clone(),
            provider_endpoint: self.provider_endpoint.clone(),
            functional: WireDocument::from_bytes(self.functional.as_bytes()),
            static_docs: self
                .static_docs
                .iter()
                .map(|(s, x)| (*s, WireDocument::from_bytes(x.as_bytes())))
                .collect(),
        }
    }
}

fn text(wire: &WireDocument) -> String {
    String::from_utf8_lossy(wire.as_bytes()).into_owned()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "camelCase")]
pub enum Event {
    Publish(JournalRecord),
    #[serde(rename_all = "camelCase")]
    Unpublish {
        service_id: String,
    },
}

impl Event {
    pub fn publish(r: &ServiceRecord) -> Self {
        Event::Publish(JournalRecord {
            service_id: r.service_id.clone(),
            service_name: r.service_name.clone(),
            service_uri: r.service_uri.clone(),
            provider_endpoint: r.provider_endpoint.clone(),
            functional: text(&r.functional),
            static_docs: r.static_docs.iter().map(|(s, w)| (*s, text(w))).collect(),
            publish_instant: r.publish_instant,
        })
    }
}

pub struct Journal {
    path: PathBuf,
    file: File,
}

impl Journal {
    /// Opens the journal, returning it with the events it already holds.
    pub fn open(path: &Path) -> Result<(Self, Vec<Event>), JournalError> {
        let io_err = |source| JournalError::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(path)
            .map_err(io_err)?;
        let mut events = Vec::new();
        let mut good_len = 0u64;
        let mut reader = BufReader::new(&file);
        let mut line = String::new();
        let mut number = 0;
        loop {
            line.clear();
            let n = reader.read_line(&mut line).map_err(io_err)?;
            if n == 0 {
                break;
            }
            number += 1;
            if !line.ends_with('\n') {
                // Torn tail from an interrupted append.
                break;
            }
            if !line.trim().is_empty() {
                let event = serde_json::from_str::<Event>(line.trim_end()).map_err(|e| JournalError::Corrupt {
                    path: path.to_path_buf(),
                    line: number,
                    reason: e.to_string(),
                })?;
                events.push(event);
            }
            good_len += n as u64;
        }
        drop(reader);
        if file.metadata().map_err(io_err)?.len() != good_len {
            file.set_len(good_len).map_err(io_err)?;
            file.seek(SeekFrom::End(0)).map_err(io_err)?;
        }
        Ok((
            Self {
                path: path.to_path_buf(),
                file,
            },
            events,
        ))
    }

    pub fn append(&mut self, event: &Event) -> Result<(), JournalError> {
        let mut line = serde_json::to_string(event).expect("events serialize");
        line.push('\n');
        self.file
            .write_all(line.as_bytes())
            .and_then(|_| self.file.sync_data())
            .map_err(|source| JournalError::Io {
                path: self.path.clone(),
                source,
            })
    }
}
