//! CSV and JSON writers. Every CSV starts with a schema comment line.

use std::fs;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use gldpc::bounds::{C1Choice, FiniteLengthCurve};
use gldpc::ensemble::EnsembleParams;
use gldpc::experiment::{SimulationSummary, TrialRecord};

use crate::Failure;

pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub struct Csv {
    comments: String,
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(kind: &str, header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("write to memory");
        Csv {
            comments: format!("# gldpc-csv v{CSV_SCHEMA_VERSION} {kind}\n"),
            writer,
        }
    }

    pub fn comment(&mut self, text: &str) {
        self.comments.push_str("# ");
        self.comments.push_str(text);
        self.comments.push('\n');
    }

    pub fn row(&mut self, fields: &[String]) {
        self.writer.write_record(fields).expect("write to memory");
    }

    pub fn finish(self) -> Result<String, Failure> {
        let body = self
            .writer
            .into_inner()
            .map_err(|e| Failure::Io(e.to_string()))?;
        let body = String::from_utf8(body).map_err(|e| Failure::Io(e.to_string()))?;
        Ok(self.comments + &body)
    }
}

/// Shortest round-trip form in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Io(e.to_string()))
}

pub fn json_line<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| Failure::Io(e.to_string()))
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
pub struct FiniteLengthOutput<'a> {
    pub c: usize,
    pub d: usize,
    pub t: usize,
    pub c1: usize,
    pub c1_policy: C1Choice,
    pub curve: &'a FiniteLengthCurve,
}

#[derive(Serialize)]
pub struct SimulationOutput<'a> {
    pub params: &'a EnsembleParams,
    pub master_seed: u64,
    pub summary: &'a SimulationSummary,
    pub records: &'a [TrialRecord],
}
