use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::sweep::RunRecord;
use super::HarnessError;

pub const CSV_HEADER: [&str; 11] = [
    "preset",
    "method",
    "gamma_avg_db",
    "N",
    "M",
    "gamma_th_db",
    "value",
    "ci_halfwidth",
    "terms_used",
    "err_estimate",
    "seed",
];

/// One CSV line. Reals carry 17 significant digits; inapplicable fields are
/// empty. The `preset` column holds `<run name>/<curve id>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub preset: String,
    pub method: String,
    pub gamma_avg_db: String,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
    pub gamma_th_db: String,
    pub value: String,
    pub ci_halfwidth: String,
    pub terms_used: String,
    pub err_estimate: String,
    pub seed: String,
}

fn real(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

fn plain<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv_rows(record: &RunRecord) -> Vec<CsvRow> {
    record
        .rows
        .iter()
        .map(|r| CsvRow {
            preset: format!("{}/{}", record.name(), r.curve),
            method: r.method.to_string(),
            gamma_avg_db: real(Some(r.gamma_avg_db)),
            n: r.n_antennas,
            m: r.n_relays,
            gamma_th_db: real(r.gamma_th_db),
            value: real(r.value),
            ci_halfwidth: real(r.ci_halfwidth),
            terms_used: plain(r.terms_used),
            err_estimate: real(r.err_estimate),
            seed: plain(r.seed),
        })
        .collect()
}

pub fn write_csv<W: Write>(record: &RunRecord, out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in csv_rows(record) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(HarnessError::Fatal(format!("unexpected CSV header {header:?}")));
    }
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

pub fn write_json<W: Write>(record: &RunRecord, out: W) -> Result<(), HarnessError> {
    serde_json::to_writer_pretty(out, record).map_err(|e| HarnessError::Fatal(e.to_string()))
}

pub fn read_json<R: Read>(input: R) -> Result<RunRecord, HarnessError> {
    serde_json::from_reader(input).map_err(|e| HarnessError::Fatal(e.to_string()))
}

/// Writes `<name>.csv` and `<name>.json` into `dir`, returning both paths.
pub fn write_outputs(record: &RunRecord, dir: &Path) -> Result<(PathBuf, PathBuf), HarnessError> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{}.csv", record.name()));
    let json_path = dir.join(format!("{}.json", record.name()));
    write_csv(record, std::io::BufWriter::new(std::fs::File::create(&csv_path)?))?;
    let mut json = std::io::BufWriter::new(std::fs::File::create(&json_path)?);
    write_json(record, &mut json)?;
    json.write_all(b"\n")?;
    json.flush()?;
    Ok((csv_path, json_path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::Method;
    use crate::harness::config::{Overrides, Preset, SweepSpec, SweepVariable};
    use crate::harness::run_sweep;

    fn record() -> RunRecord {
        let mut cfg = Preset::Fig6.config();
        cfg.methods = vec![Method::Closed, Method::Series, Method::MonteCarlo];
        cfg.sweep = Some(SweepSpec { variable: SweepVariable::GammaAvgDb, start_db: 0.0, stop_db: 30.0, step_db: 10.0 });
        cfg.monte_carlo.as_mut().unwrap().trials = 10_000;
        run_sweep(&cfg.resolve(&Overrides::default()).unwrap()).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let rec = record();
        let mut buf = Vec::new();
        write_json(&rec, &mut buf).unwrap();
        assert_eq!(read_json(buf.as_slice()).unwrap(), rec);
    }

    #[test]
    fn csv_header_and_values_match_json() {
        let rec = record();
        let mut buf = Vec::new();
        write_csv(&rec, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        let rows = read_csv(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), rec.rows.len());
        let parse = |s: &str| (!s.is_empty()).then(|| s.parse::<f64>().unwrap());
        for (c, r) in rows.iter().zip(&rec.rows) {
            assert_eq!(c.preset, format!("fig6/{}", r.curve));
            assert_eq!(parse(&c.gamma_avg_db), Some(r.gamma_avg_db));
            assert_eq!(parse(&c.value), r.value);
            assert_eq!(parse(&c.ci_halfwidth), r.ci_halfwidth);
            assert_eq!(parse(&c.err_estimate), r.err_estimate);
            assert_eq!(c.seed.is_empty(), r.seed.is_none());
        }
        assert!(rows.iter().any(|c| c.value.is_empty()), "low-SNR series points are reported empty");
    }

    #[test]
    fn rejects_foreign_csv() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn writes_both_files() {
        let dir = tempfile::tempdir().unwrap();
        let (csv_path, json_path) = write_outputs(&record(), dir.path()).unwrap();
        assert!(csv_path.ends_with("fig6.csv") && json_path.ends_with("fig6.json"));
        let back = read_json(std::fs::File::open(json_path).unwrap()).unwrap();
        assert_eq!(back.rows.len(), read_csv(std::fs::File::open(csv_path).unwrap()).unwrap().len());
    }
}
