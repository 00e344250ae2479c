use std::io;
use std::path::Path;

use csv::{QuoteStyle, Terminator, WriterBuilder};
use thiserror::Error;

use super::{result_value, ReportBundle, RESULT_LINES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineFormat {
    /// One CSV file per table.
    Csv,
    /// A single JSON document.
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: &'static str,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot encode CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot encode JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

fn csv_file(
    name: &'static str,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<OutputFile, ReportError> {
    let mut w = WriterBuilder::new()
        .quote_style(QuoteStyle::NonNumeric)
        .terminator(Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(OutputFile { name, bytes })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn emit_csv(b: &ReportBundle) -> Result<Vec<OutputFile>, ReportError> {
    let table1 = csv_file(
        "table1.csv",
        &[
            "jurisdiction_id",
            "name_en",
            "method",
            "population",
            "tax_admin_cost_eur",
            "ministry_share",
            "ministry_share_pct",
            "per_capita_eur",
            "per_capita_display",
            "source_document",
            "source_page",
            "reconstructed",
        ],
        b.table1
            .iter()
            .map(|r| {
                vec![
                    r.jurisdiction_id.clone(),
                    r.name_en.clone(),
                    r.method.code().to_owned(),
                    r.population.to_string(),
                    r.tax_admin_cost.to_plain_string(),
                    r.ministry_share.to_exact_string(),
                    r.ministry_share_pct.clone(),
                    r.per_capita.to_exact_string(),
                    r.per_capita_display.clone(),
                    r.source.document_id.clone(),
                    r.source.page.to_string(),
                    r.reconstructed.to_string(),
                ]
            })
            .chain([vec![
                "total".to_owned(),
                "Total Cat1".to_owned(),
                String::new(),
                String::new(),
                b.cat1_total.to_plain_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]]),
    )?;
    let table2 = csv_file(
        "table2.csv",
        &["key", "description", "value", "display", "grade", "source", "derived"],
        b.table2.iter().map(|r| {
            vec![
                r.key.clone(),
                r.description.clone(),
                r.value.to_exact_string(),
                r.display.clone(),
                opt(r.grade.map(|g| g.code())),
                opt(r.source.as_deref()),
                r.derived.to_string(),
            ]
        }),
    )?;
    let results = csv_file(
        "results.csv",
        &["key", "label", "value", "display"],
        RESULT_LINES.iter().map(|(key, label)| {
            vec![
                key.to_string(),
                label.to_string(),
                result_value(&b.results.values, key).to_exact_string(),
                b.results.rendered(key).to_owned(),
            ]
        }),
    )?;
    let provenance = csv_file(
        "provenance.csv",
        &["document_id", "year", "used_by"],
        b.provenance.iter().map(|p| {
            vec![p.document_id.clone(), opt(p.year), p.used_by.join(";")]
        }),
    )?;
    Ok(vec![table1, table2, results, provenance])
}

/// Encodes the bundle. The bytes depend only on the bundle.
pub fn emit_machine(bundle: &ReportBundle, format: MachineFormat) -> Result<Vec<OutputFile>, ReportError> {
    match format {
        MachineFormat::Csv => emit_csv(bundle),
        MachineFormat::Structured => {
            let mut bytes = serde_json::to_vec_pretty(bundle)?;
            bytes.push(b'\n');
            Ok(vec![OutputFile {
                name: "report.json",
                bytes,
            }])
        }
    }
}

/// Reads a structured report back.
pub fn parse_structured(bytes: &[u8]) -> Result<ReportBundle, serde_json::Error> {
    serde_json::from_slice(bytes)
}

/// Writes each file into `dir`, which must exist.
pub fn write_outputs(dir: &Path, files: &[OutputFile]) -> Result<(), ReportError> {
    for file in files {
        let path = dir.join(file.name);
        std::fs::write(&path, &file.bytes).map_err(|source| ReportError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}
