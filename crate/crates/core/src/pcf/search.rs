//! Exhaustive search over the integer quadratic family with `a`, `d` even.
//!
//! Tuples are enumerated lexicographically in `(a, b, c, d)` and processed
//! in fixed-size chunks. Within a chunk the tuples are classified in
//! parallel and collected in order, so results do not depend on the thread
//! count. After each chunk the checkpoint receives the chunk's survivors
//! followed by a cursor line.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::pcf::certify::{classify, Budgets, Verdict};
use crate::pcf::conjugacy::{conjugacy_dedupe, ConjugacyClass, Quad};
use crate::polymap::PolyMap;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub bound: i64,
    pub budgets: Budgets,
    pub threads: usize,
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many tuples in this run (rounded up to a chunk).
    pub stop_after: Option<u64>,
    pub chunk_size: usize,
}

impl SearchConfig {
    pub fn new(bound: i64) -> SearchConfig {
        SearchConfig {
            bound,
            budgets: Budgets::default(),
            threads: 1,
            checkpoint: None,
            stop_after: None,
            chunk_size: 512,
        }
    }
}

/// A tuple that was not shown to be non-PCF.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Survivor {
    pub tuple: Quad,
    pub verdict: String,
    /// Orbit depth for PCF tuples, steps spent for unknown ones.
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub bound: i64,
    pub total: u64,
    pub processed: u64,
    pub complete: bool,
    pub not_pcf: u64,
    /// Non-PCF counts keyed by witness place.
    pub not_pcf_by_place: BTreeMap<String, u64>,
    pub survivors: Vec<Survivor>,
    pub classes: Vec<ConjugacyClass>,
}

impl SearchReport {
    pub fn pcf(&self) -> impl Iterator<Item = &Survivor> {
        self.survivors.iter().filter(|s| s.verdict == "PCF_PROVEN")
    }

    pub fn unknown(&self) -> impl Iterator<Item = &Survivor> {
        self.survivors.iter().filter(|s| s.verdict == "UNKNOWN")
    }

    pub fn representative_of(&self, t: &Quad) -> Option<Quad> {
        self.classes.iter().find(|c| c.members.contains(t)).map(|c| c.representative)
    }
}

/// Lexicographic enumeration of the box.
#[derive(Clone, Copy, Debug)]
pub struct Enumeration {
    bound: i64,
    even: i64,
    all: i64,
}

impl Enumeration {
    pub fn new(bound: i64) -> Enumeration {
        Enumeration { bound, even: bound / 2 * 2 + 1, all: 2 * bound + 1 }
    }

    pub fn len(&self) -> u64 {
        (self.even * self.even * self.all * self.all) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tuple(&self, mut k: u64) -> Quad {
        let radices = [self.even, self.all, self.all, self.even];
        let mut digits = [0i64; 4];
        for i in (0..4).rev() {
            digits[i] = (k % radices[i] as u64) as i64;
            k /= radices[i] as u64;
        }
        let top = self.bound / 2 * 2;
        [-top + 2 * digits[0], -self.bound + digits[1], -self.bound + digits[2], -top + 2 * digits[3]]
    }

    pub fn index(&self, t: &Quad) -> Option<u64> {
        let top = self.bound / 2 * 2;
        let digits = [(t[0] + top) / 2, t[1] + self.bound, t[2] + self.bound, (t[3] + top) / 2];
        let radices = [self.even, self.all, self.all, self.even];
        if t[0] % 2 != 0 || t[3] % 2 != 0 || digits.iter().zip(&radices).any(|(d, r)| *d < 0 || d >= r) {
            return None;
        }
        Some(digits.iter().zip(&radices).fold(0u64, |acc, (d, r)| acc * *r as u64 + *d as u64))
    }
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct ConfigRecord {
    #[serde(rename = "box")]
    bound: i64,
    max_steps: usize,
    precision: u32,
}

#[derive(Serialize, Deserialize)]
struct CursorRecord {
    cursor: Quad,
    processed: u64,
    not_pcf: u64,
    by_place: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
struct SurvivorRecord {
    survivor: Quad,
    verdict: String,
    witness: Value,
}

struct State {
    next: u64,
    not_pcf: u64,
    by_place: BTreeMap<String, u64>,
    survivors: Vec<Survivor>,
}

/// Replays a checkpoint. Also returns the byte length of its intact prefix,
/// which excludes a torn final line.
fn load_checkpoint(path: &PathBuf, cfg: &ConfigRecord, en: &Enumeration) -> Result<Option<(State, usize)>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    if text.trim().is_empty() {
        return Ok(None);
    }
    let mut state = State { next: 0, not_pcf: 0, by_place: BTreeMap::new(), survivors: Vec::new() };
    let mut pending = Vec::new();
    let mut intact = 0;
    let mut lines = text.split_inclusive('\n').peekable();
    while let Some(line) = lines.next() {
        let last = lines.peek().is_none();
        if line.trim().is_empty() {
            intact += line.len();
            continue;
        }
        let v: Value = match serde_json::from_str(line) {
            Ok(v) => v,
            // a run killed mid-write leaves a torn final line
            Err(_) if last => break,
            Err(e) => return Err(e.into()),
        };
        if let Some(c) = v.get("config") {
            let c: ConfigRecord = serde_json::from_value(c.clone())?;
            if &c != cfg {
                return Err(Error::InvalidInput(format!("checkpoint was written for {c:?}, not {cfg:?}")));
            }
        } else if v.get("cursor").is_some() {
            let c: CursorRecord = serde_json::from_value(v)?;
            let idx = en.index(&c.cursor).ok_or_else(|| Error::Parse("cursor outside the box".into()))?;
            state.next = idx + 1;
            state.not_pcf = c.not_pcf;
            state.by_place = c.by_place;
            state.survivors.append(&mut pending);
        } else if v.get("survivor").is_some() {
            let s: SurvivorRecord = serde_json::from_value(v)?;
            let step = s.witness.get("step").and_then(Value::as_u64).unwrap_or(0) as usize;
            pending.push(Survivor { tuple: s.survivor, verdict: s.verdict, step });
        } else {
            return Err(Error::Parse(format!("unrecognized checkpoint line: {line}")));
        }
        intact += line.len();
    }
    Ok(Some((state, intact)))
}

fn text_ends_with_newline(path: &PathBuf) -> Result<bool> {
    use std::io::{Read, Seek, SeekFrom};
    let mut f = File::open(path)?;
    if f.metadata()?.len() == 0 {
        return Ok(true);
    }
    f.seek(SeekFrom::End(-1))?;
    let mut b = [0u8; 1];
    f.read_exact(&mut b)?;
    Ok(b[0] == b'\n')
}

fn write_line<T: Serialize>(out: &mut File, v: &T) -> Result<()> {
    let s = serde_json::to_string(v)?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn classify_tuple(t: Quad, b: Budgets) -> Result<Verdict> {
    Ok(classify(&PolyMap::quad(t), b)?.verdict)
}

pub fn search_box(cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.bound < 0 {
        return Err(Error::InvalidInput("box bound must be non-negative".into()));
    }
    let en = Enumeration::new(cfg.bound);
    let total = en.len();
    let conf = ConfigRecord { bound: cfg.bound, max_steps: cfg.budgets.max_steps, precision: cfg.budgets.precision };
    let mut state = State { next: 0, not_pcf: 0, by_place: BTreeMap::new(), survivors: Vec::new() };
    let mut out = None;
    if let Some(path) = &cfg.checkpoint {
        let loaded = load_checkpoint(path, &conf, &en)?;
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        if let Some((s, intact)) = loaded {
            state = s;
            f.set_len(intact as u64)?;
            if !text_ends_with_newline(path)? {
                writeln!(f)?;
            }
        } else {
            write_line(&mut f, &serde_json::json!({ "config": conf }))?;
        }
        out = Some(f);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let chunk = cfg.chunk_size.max(1) as u64;
    let mut done_this_run = 0u64;
    while state.next < total {
        if cfg.stop_after.is_some_and(|s| done_this_run >= s) {
            break;
        }
        let end = (state.next + chunk).min(total);
        let results: Vec<(Quad, Result<Verdict>)> = pool.install(|| {
            (state.next..end)
                .into_par_iter()
                .map(|k| {
                    let t = en.tuple(k);
                    (t, classify_tuple(t, cfg.budgets))
                })
                .collect()
        });
        let mut chunk_survivors = Vec::new();
        for (t, r) in results {
            match r? {
                Verdict::NotPcfProven { place, .. } => {
                    state.not_pcf += 1;
                    *state.by_place.entry(place.to_string()).or_insert(0) += 1;
                }
                Verdict::PcfProven { m } => chunk_survivors.push(Survivor { tuple: t, verdict: "PCF_PROVEN".into(), step: m }),
                Verdict::Unknown { steps } => {
                    chunk_survivors.push(Survivor { tuple: t, verdict: "UNKNOWN".into(), step: steps })
                }
            }
        }
        if let Some(f) = out.as_mut() {
            for s in &chunk_survivors {
                let rec = SurvivorRecord {
                    survivor: s.tuple,
                    verdict: s.verdict.clone(),
                    witness: serde_json::json!({ "step": s.step }),
                };
                write_line(f, &rec)?;
            }
            let rec = CursorRecord {
                cursor: en.tuple(end - 1),
                processed: end,
                not_pcf: state.not_pcf,
                by_place: state.by_place.clone(),
            };
            write_line(f, &rec)?;
            f.flush()?;
        }
        state.survivors.extend(chunk_survivors);
        done_this_run += end - state.next;
        state.next = end;
    }
    state.survivors.sort();
    let pcf: Vec<Quad> = state.survivors.iter().filter(|s| s.verdict == "PCF_PROVEN").map(|s| s.tuple).collect();
    Ok(SearchReport {
        bound: cfg.bound,
        total,
        processed: state.next,
        complete: state.next == total,
        not_pcf: state.not_pcf,
        not_pcf_by_place: state.by_place,
        survivors: state.survivors,
        classes: conjugacy_dedupe(&pcf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_lexicographic() {
        let en = Enumeration::new(2);
        assert_eq!(en.len(), 225);
        let all: Vec<Quad> = (0..en.len()).map(|k| en.tuple(k)).collect();
        assert_eq!(all[0], [-2, -2, -2, -2]);
        assert_eq!(all[1], [-2, -2, -2, 0]);
        assert_eq!(*all.last().unwrap(), [2, 2, 2, 2]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (k, t) in all.iter().enumerate() {
            assert_eq!(en.index(t), Some(k as u64));
        }
        assert_eq!(en.index(&[1, 0, 0, 0]), None);
        assert_eq!(Enumeration::new(3).tuple(0), [-2, -3, -3, -2]);
        assert_eq!(Enumeration::new(0).len(), 1);
    }

    #[test]
    fn power_map_box() {
        let r = search_box(&SearchConfig::new(0)).unwrap();
        assert!(r.complete);
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].representative, [0, 0, 0, 0]);
    }
}
