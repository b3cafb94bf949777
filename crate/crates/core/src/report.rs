//! Flat report rows and their CSV / JSON renderings.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

pub const TOOL: &str = "fqpoints";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One measured or computed quantity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Row {
    /// `count`, `truth`, `bound`, `threshold`, `fiber`, `audit`, `section`,
    /// `eta`, `valueset`, `chi`, ...
    pub section: String,
    pub instance: String,
    pub field: String,
    /// Formula or check name.
    pub name: String,
    /// Exact inputs, `key=value` separated by spaces.
    pub inputs: String,
    /// `hard`, `soft`, or empty for plain measurements.
    pub class: String,
    pub measured: String,
    pub relation: String,
    pub bound: String,
    pub verdict: String,
    pub note: String,
}

impl Row {
    pub fn new(section: &str, instance: &str, field: &str, name: &str) -> Row {
        Row {
            section: section.into(),
            instance: instance.into(),
            field: field.into(),
            name: name.into(),
            ..Row::default()
        }
    }

    pub fn inputs(mut self, s: impl Into<String>) -> Row {
        self.inputs = s.into();
        self
    }

    pub fn measured(mut self, s: impl ToString) -> Row {
        self.measured = s.to_string();
        self
    }

    pub fn against(mut self, class: &str, relation: &str, bound: impl ToString, verdict: &str) -> Row {
        self.class = class.into();
        self.relation = relation.into();
        self.bound = bound.to_string();
        self.verdict = verdict.into();
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Row {
        self.note = s.into();
        self
    }

    pub fn is_hard_violation(&self) -> bool {
        self.class == "hard" && self.verdict == "violated"
    }
}

/// Settings that determine the numbers in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub budget: u64,
    pub ext_level: u32,
}

impl Header {
    pub fn new(command: &str, seed: u64, budget: u64, ext_level: u32) -> Header {
        Header {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            seed,
            budget,
            ext_level,
        }
    }
}

/// Execution details that never affect the numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunMeta {
    #[serde(flatten)]
    pub header: Header,
    pub workers: usize,
    pub parallel: bool,
    pub format: String,
    pub rows: usize,
    pub hard_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    #[serde(flatten)]
    pub header: Header,
    pub rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

const HEADER_COLUMNS: [&str; 6] = ["tool", "version", "command", "seed", "budget", "ext_level"];
const ROW_COLUMNS: [&str; 11] = [
    "section", "instance", "field", "name", "inputs", "class", "measured", "relation", "bound", "verdict", "note",
];

impl Report {
    pub fn new(header: Header) -> Report {
        Report { header, rows: Vec::new() }
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = Row>) {
        self.rows.extend(rows);
    }

    pub fn hard_violations(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.is_hard_violation())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Input(format!("csv: {e}"));
        w.write_record(HEADER_COLUMNS.iter().chain(ROW_COLUMNS.iter())).map_err(io)?;
        let h = &self.header;
        let seed = h.seed.to_string();
        let budget = h.budget.to_string();
        let level = h.ext_level.to_string();
        for r in &self.rows {
            w.write_record([
                h.tool.as_str(),
                &h.version,
                &h.command,
                &seed,
                &budget,
                &level,
                &r.section,
                &r.instance,
                &r.field,
                &r.name,
                &r.inputs,
                &r.class,
                &r.measured,
                &r.relation,
                &r.bound,
                &r.verdict,
                &r.note,
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Input(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }

    /// Write `report.{csv,json}` and `run.json` into `dir`.
    pub fn write(&self, dir: &Path, format: Format, workers: usize, parallel: bool) -> Result<PathBuf> {
        let io = |e: std::io::Error| Error::Input(format!("{}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        let path = dir.join(format!("report.{}", format.extension()));
        fs::write(&path, self.render(format)?).map_err(io)?;
        let meta = RunMeta {
            header: self.header.clone(),
            workers,
            parallel,
            format: format.extension().into(),
            rows: self.rows.len(),
            hard_violations: self.hard_violations().count(),
        };
        let meta_json = serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n";
        fs::write(dir.join("run.json"), meta_json).map_err(io)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(Header::new("count", 7, 100, 2));
        r.extend([
            Row::new("count", "cone", "3", "total").measured(13),
            Row::new("bound", "cone", "3", "deligne")
                .measured(4)
                .against("hard", "<=", "2*sqrt(5)", "holds")
                .note("a, \"quoted\" note"),
        ]);
        r
    }

    #[test]
    fn csv_and_json_share_fields() {
        let r = sample();
        let csv = r.to_csv().unwrap();
        let mut rd = csv::Reader::from_reader(csv.as_bytes());
        let headers: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(headers.len(), 17);
        let recs: Vec<csv::StringRecord> = rd.records().map(|x| x.unwrap()).collect();
        assert_eq!(recs.len(), 2);
        assert_eq!(&recs[1][16], "a, \"quoted\" note");
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["seed"], 7);
        assert_eq!(json["rows"][1]["bound"], "2*sqrt(5)");
        for h in &headers[..6] {
            assert!(json.get(h).is_some(), "{h}");
        }
        for h in &headers[6..] {
            assert!(json["rows"][0].get(h).is_some(), "{h}");
        }
    }

    #[test]
    fn violations() {
        let mut r = sample();
        assert_eq!(r.hard_violations().count(), 0);
        r.rows[1].verdict = "violated".into();
        assert_eq!(r.hard_violations().count(), 1);
        r.rows[1].class = "soft".into();
        assert_eq!(r.hard_violations().count(), 0);
    }

    #[test]
    fn writes_files() {
        let dir = std::env::temp_dir().join(format!("fqpoints-report-{}", std::process::id()));
        let p = sample().write(&dir, Format::Json, 3, true).unwrap();
        assert!(p.ends_with("report.json"));
        let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("run.json")).unwrap()).unwrap();
        assert_eq!(meta["workers"], 3);
        fs::remove_dir_all(&dir).unwrap();
    }
}
