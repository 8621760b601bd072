//! JSON-lines persistence: a header line with the configuration, then one
//! line per completed unit of work. Files are append-only and resumable.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SearchConfig;
use crate::automaton::{Dfa, DfaJson};
use crate::error::{Error, Result};
use crate::sync::Method;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    MaxResetThreshold,
    RandomResetThreshold,
    PairDiameter,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: u32,
    pub experiment: Experiment,
    pub config: SearchConfig,
}

/// An automaton with its reset threshold and a shortest reset word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub dfa: DfaJson,
    pub rt: usize,
    pub witness: Vec<String>,
}

impl SearchRecord {
    /// The witness resets the automaton and has length `rt`.
    pub fn verify(&self) -> Result<()> {
        let d = Dfa::from_json(&self.dfa)?;
        let names: Vec<&str> = self.witness.iter().map(String::as_str).collect();
        let w = d.parse_word(&names)?;
        if w.len() != self.rt || !d.is_reset_word(&w)? {
            return Err(Error::Invariant(format!(
                "record witness does not reset in {} letters",
                self.rt
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Line {
    Header(Header),
    /// Exhaustive search over one `(t-class, first permutation)` chunk.
    Chunk {
        class: usize,
        p1: usize,
        candidates: u64,
        best: Option<SearchRecord>,
    },
    Trial {
        trial: u64,
        dfa: DfaJson,
        rt: Option<usize>,
        method: Method,
    },
    PairTrial {
        trial: u64,
        letters: [Vec<usize>; 2],
        diameter: Option<usize>,
    },
    /// Exhaustive pair sweep: first permutation of the given cycle type,
    /// second one from a block of lexicographic ranks.
    PairChunk {
        cycle_type: Vec<usize>,
        block: usize,
        candidates: u64,
        histogram: Vec<u64>,
        best: Option<PairBest>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairBest {
    pub diameter: usize,
    pub letters: [Vec<usize>; 2],
}

/// Read every complete line of a results file. An unparsable final line
/// (an interrupted write) is dropped; anything else unparsable is an error.
pub fn read_lines(path: &Path) -> Result<Vec<Line>> {
    let reader = BufReader::new(File::open(path)?);
    let raw: Vec<String> = reader.lines().collect::<std::io::Result<_>>()?;
    let mut out = Vec::with_capacity(raw.len());
    for (i, l) in raw.iter().enumerate() {
        match serde_json::from_str::<Line>(l) {
            Ok(line) => out.push(line),
            Err(_) if i + 1 == raw.len() => break,
            Err(e) => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })
            }
        }
    }
    Ok(out)
}

pub fn read_header(lines: &[Line]) -> Result<&Header> {
    match lines.first() {
        Some(Line::Header(h)) => {
            if h.format != FORMAT_VERSION {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("unsupported format version {}", h.format),
                });
            }
            Ok(h)
        }
        _ => Err(Error::Parse {
            line: 1,
            msg: "missing header record".into(),
        }),
    }
}

pub struct Sink {
    out: BufWriter<File>,
}

impl Sink {
    /// Open `path` for `header`: a fresh file gets the header; an existing
    /// one must carry the same header and its completed lines are returned
    /// so the caller can skip them.
    pub fn open(path: &Path, header: &Header) -> Result<(Self, Vec<Line>)> {
        let existing = if path.exists() && std::fs::metadata(path)?.len() > 0 {
            read_lines(path)?
        } else {
            Vec::new()
        };
        if existing.is_empty() {
            let mut sink = Sink {
                out: BufWriter::new(File::create(path)?),
            };
            sink.write(&Line::Header(header.clone()))?;
            return Ok((sink, Vec::new()));
        }
        if read_header(&existing)? != header {
            return Err(Error::Precondition(format!(
                "{} was written with a different configuration",
                path.display()
            )));
        }
        // rewrite to drop a torn final line, then append
        let mut sink = Sink {
            out: BufWriter::new(File::create(path)?),
        };
        for l in &existing {
            sink.write(l)?;
        }
        sink.flush()?;
        let sink = Sink {
            out: BufWriter::new(OpenOptions::new().append(true).open(path)?),
        };
        Ok((sink, existing[1..].to_vec()))
    }

    pub fn write(&mut self, line: &Line) -> Result<()> {
        serde_json::to_writer(&mut self.out, line)?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}
