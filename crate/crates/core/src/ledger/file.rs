use std::collections::HashMap;

use crate::error::DomainError;
use crate::numfmt::{parse_locale_number, Locale};

use super::{
    apply_scale, AggregationMethod, BudgetPosition, Classification, JurisdictionLedger, LoadError,
    ScaleUnit, SourcePage, SourceRef, Violation,
};

pub const LEDGER_HEADER: [&str; 12] = [
    "jurisdiction_id",
    "jurisdiction_name",
    "population",
    "method",
    "position_code",
    "name_original",
    "name_en",
    "classification",
    "quoted_value",
    "scale",
    "source_doc",
    "source_page",
];

struct Row {
    line: u64,
    jurisdiction_id: String,
    jurisdiction_name: String,
    population: u64,
    method: AggregationMethod,
    position: BudgetPosition,
}

/// Reads the ledger CSV. Consecutive rows sharing a jurisdiction id form
/// one ledger; row-level problems come back as violations.
pub fn read_ledger(text: &str) -> Result<(Vec<JurisdictionLedger>, Vec<Violation>), LoadError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());

    let mut violations = Vec::new();
    let header = reader.headers()?.clone();
    if header.iter().ne(LEDGER_HEADER.iter().copied()) {
        violations.push(
            Violation::new(
                "bad-header",
                format!("header must be exactly `{}`", LEDGER_HEADER.join(",")),
            )
            .at_line(1),
        );
        return Ok((Vec::new(), violations));
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != LEDGER_HEADER.len() {
            violations.push(
                Violation::new(
                    "wrong-field-count",
                    format!("expected {} fields, found {}", LEDGER_HEADER.len(), record.len()),
                )
                .at_line(line),
            );
            continue;
        }
        let field = |i: usize| record.get(i).unwrap_or("").trim();
        match parse_row(line, &field) {
            Ok(row) => rows.push(row),
            Err(v) => violations.extend(v),
        }
    }

    Ok((group_rows(rows, &mut violations), violations))
}

fn parse_row<'a>(line: u64, field: &dyn Fn(usize) -> &'a str) -> Result<Row, Vec<Violation>> {
    let jurisdiction_id = field(0).to_owned();
    let code = field(4).to_owned();
    let mut problems = Vec::new();
    let mut flag = |rule: &str, msg: String| {
        problems.push(
            Violation::new(rule, msg)
                .in_jurisdiction(&jurisdiction_id)
                .at_position(&code)
                .at_line(line),
        );
    };

    if jurisdiction_id.is_empty() {
        flag("missing-field", "jurisdiction_id is empty".into());
    }
    if code.is_empty() {
        flag("missing-field", "position_code is empty".into());
    }
    let population = field(2).parse::<u64>().ok();
    if population.is_none() {
        flag("invalid-population", format!("population {:?} is not a whole number", field(2)));
    }
    let method = field(3).parse::<AggregationMethod>().ok();
    if method.is_none() {
        flag("unknown-method", format!("method {:?} is not subtractive, additive or allocative", field(3)));
    }
    let classification = field(7).parse::<Classification>().ok();
    if classification.is_none() {
        flag("unknown-classification", format!("classification {:?} is not recognised", field(7)));
    }
    let scale = field(9).parse::<ScaleUnit>().ok();
    if scale.is_none() {
        flag("unknown-scale", format!("scale {:?} is not eur or keur", field(9)));
    }
    let page = match field(11) {
        "" => Some(SourcePage::Unspecified),
        "derived" => Some(SourcePage::Derived),
        p => p.parse::<u32>().ok().filter(|&n| n > 0).map(SourcePage::Page),
    };
    if page.is_none() {
        flag("invalid-source-page", format!("source_page {:?} is not a positive integer or \"derived\"", field(11)));
    }

    let quoted = field(8).to_owned();
    let parsed = match parse_locale_number(&quoted, Locale::German) {
        Ok(v) => Some(v),
        Err(e) => {
            flag("malformed-value", e.to_string());
            None
        }
    };
    let amount = match (parsed, scale) {
        (Some(v), Some(s)) => match apply_scale(&v, s) {
            Ok(m) => Some(m),
            Err(DomainError::SubCent { value }) => {
                flag("sub-cent-precision", format!("{value} does not resolve to whole cents"));
                None
            }
            Err(e) => {
                flag("malformed-value", e.to_string());
                None
            }
        },
        _ => None,
    };

    match (population, method, classification, scale, page, parsed, amount) {
        (Some(population), Some(method), Some(classification), Some(scale), Some(page), Some(parsed), Some(amount))
            if problems.is_empty() =>
        {
            Ok(Row {
                line,
                jurisdiction_id: jurisdiction_id.clone(),
                jurisdiction_name: field(1).to_owned(),
                population,
                method,
                position: BudgetPosition {
                    code,
                    name_original: field(5).to_owned(),
                    name_en: field(6).to_owned(),
                    quoted_value: quoted,
                    scale,
                    absent: parsed.absent,
                    amount,
                    classification,
                    source: SourceRef::new(field(10), page),
                },
            })
        }
        _ => Err(problems),
    }
}

fn group_rows(rows: Vec<Row>, violations: &mut Vec<Violation>) -> Vec<JurisdictionLedger> {
    let mut ledgers: Vec<JurisdictionLedger> = Vec::new();
    let mut first_line: HashMap<usize, u64> = HashMap::new();

    for row in rows {
        let continues_block = ledgers
            .last()
            .is_some_and(|l| l.id == row.jurisdiction_id);
        if continues_block {
            let idx = ledgers.len() - 1;
            let ledger = &mut ledgers[idx];
            if ledger.name_en != row.jurisdiction_name
                || ledger.population != row.population
                || ledger.method != row.method
            {
                violations.push(
                    Violation::new(
                        "inconsistent-jurisdiction",
                        format!(
                            "name, population or method differs from the block's first row (line {})",
                            first_line[&idx]
                        ),
                    )
                    .in_jurisdiction(&row.jurisdiction_id)
                    .at_position(&row.position.code)
                    .at_line(row.line),
                );
            }
            ledger.positions.push(row.position);
        } else {
            first_line.insert(ledgers.len(), row.line);
            ledgers.push(JurisdictionLedger {
                id: row.jurisdiction_id,
                name_en: row.jurisdiction_name,
                population: row.population,
                source: row.position.source.clone(),
                positions: vec![row.position],
                method: row.method,
            });
        }
    }

    // The jurisdiction's own citation is the ministry-total row where there is one.
    for ledger in &mut ledgers {
        let total = ledger
            .positions_of(Classification::MinistryTotal)
            .next()
            .map(|p| p.source.clone());
        if let Some(source) = total {
            ledger.source = source;
        }
    }
    ledgers
}
