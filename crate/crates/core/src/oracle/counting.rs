use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::families::SetFunction;
use crate::setcore::{GroundSize, Subset};
use crate::value::ExactValue;

/// Value-oracle handle that counts every evaluation.
pub struct CountingOracle<'a> {
    func: &'a dyn SetFunction,
    calls: u64,
    log: Option<Vec<(Subset, ExactValue)>>,
}

impl<'a> CountingOracle<'a> {
    pub fn new(func: &'a dyn SetFunction) -> Self {
        CountingOracle {
            func,
            calls: 0,
            log: None,
        }
    }

    /// Same as [`CountingOracle::new`], but records every `(S, value)` answer.
    pub fn with_log(func: &'a dyn SetFunction) -> Self {
        CountingOracle {
            func,
            calls: 0,
            log: Some(Vec::new()),
        }
    }

    pub fn ground(&self) -> GroundSize {
        self.func.ground()
    }

    pub fn query(&mut self, s: Subset) -> ExactValue {
        self.calls += 1;
        let v = self.func.value(s);
        if let Some(log) = self.log.as_mut() {
            log.push((s, v.clone()));
        }
        v
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    pub fn log(&self) -> Option<&[(Subset, ExactValue)]> {
        self.log.as_deref()
    }
}

/// `f(S) / g(S)`; both oracles are charged one query each.
pub fn ratio(s: Subset, f: &mut CountingOracle, g: &mut CountingOracle) -> Result<ExactValue> {
    let fv = f.query(s);
    let gv = g.query(s);
    fv.checked_div(&gv).ok_or(Error::UndefinedRatio(s))
}

/// One `h`-evaluation as seen by the algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranscriptEntry {
    pub set: Subset,
    pub f: ExactValue,
    pub g: ExactValue,
}

/// A numerator/denominator oracle pair plus an optional transcript.
///
/// This is the only handle optimizers receive. Query counts add up the
/// calls on both sides, so one `h`-evaluation costs two queries.
pub struct RatioOracle<'a> {
    f: CountingOracle<'a>,
    g: CountingOracle<'a>,
    transcript: Option<Vec<TranscriptEntry>>,
}

impl<'a> RatioOracle<'a> {
    pub fn new(f: &'a dyn SetFunction, g: &'a dyn SetFunction) -> Result<Self> {
        if f.ground() != g.ground() {
            return Err(Error::Parameter(format!(
                "numerator and denominator live on ground sets of size {} and {}",
                f.ground(),
                g.ground()
            )));
        }
        Ok(RatioOracle {
            f: CountingOracle::new(f),
            g: CountingOracle::new(g),
            transcript: None,
        })
    }

    /// Same as [`RatioOracle::new`] with transcript recording switched on.
    pub fn recording(f: &'a dyn SetFunction, g: &'a dyn SetFunction) -> Result<Self> {
        let mut o = Self::new(f, g)?;
        o.transcript = Some(Vec::new());
        Ok(o)
    }

    pub fn ground(&self) -> GroundSize {
        self.f.ground()
    }

    /// Total value queries so far (numerator plus denominator).
    pub fn queries(&self) -> u64 {
        self.f.calls() + self.g.calls()
    }

    pub fn ratio(&mut self, s: Subset) -> Result<ExactValue> {
        let fv = self.f.query(s);
        let gv = self.g.query(s);
        let h = fv.checked_div(&gv).ok_or(Error::UndefinedRatio(s));
        if let Some(t) = self.transcript.as_mut() {
            t.push(TranscriptEntry { set: s, f: fv, g: gv });
        }
        h
    }

    pub fn transcript(&self) -> Option<&[TranscriptEntry]> {
        self.transcript.as_deref()
    }

    pub fn take_transcript(&mut self) -> Vec<TranscriptEntry> {
        self.transcript.take().unwrap_or_default()
    }
}
