use std::fmt::Write;

use crate::numfmt::{localize_plain, Locale};

use super::{ReportBundle, RESULT_LINES};

const RECONSTRUCTED_MARK: &str = " *";

fn pad_left(s: &str, width: usize) -> String {
    format!("{s:>width$}")
}

fn pad_right(s: &str, width: usize) -> String {
    format!("{s:<width$}")
}

/// Human-readable report with fixed-width columns. Numbers follow `locale`;
/// the headline ratio is the final line.
pub fn render_text(bundle: &ReportBundle, locale: Locale) -> String {
    let num = |plain: &str| localize_plain(plain, locale);
    let mut out = String::new();

    out.push_str("Table 1: Government's tax administrative cost by jurisdiction\n\n");
    let name_width = bundle
        .table1
        .iter()
        .map(|r| r.name_en.chars().count() + RECONSTRUCTED_MARK.len())
        .chain([13])
        .max()
        .unwrap_or(13);
    let widths = [8, name_width, 12, 12, 20, 9, 10];
    let header = [
        pad_right("ID", widths[0]),
        pad_right("Jurisdiction", widths[1]),
        pad_right("Method", widths[2]),
        pad_left("Population", widths[3]),
        pad_left("Cost (€)", widths[4]),
        pad_left("Share", widths[5]),
        pad_left("€/citizen", widths[6]),
        "Source".to_owned(),
    ];
    writeln!(out, "{}", header.join("  ").trim_end()).unwrap();
    for row in &bundle.table1 {
        let mut name = row.name_en.clone();
        if row.reconstructed {
            name.push_str(RECONSTRUCTED_MARK);
        }
        let source = match row.source.page.to_string() {
            page if page.is_empty() => row.source.document_id.clone(),
            page => format!("{}, {page}", row.source.document_id),
        };
        let cells = [
            pad_right(&row.jurisdiction_id, widths[0]),
            pad_right(&name, widths[1]),
            pad_right(row.method.code(), widths[2]),
            pad_left(&num(&row.population.to_string()), widths[3]),
            pad_left(&num(&row.tax_admin_cost.to_plain_string()), widths[4]),
            pad_left(&format!("{}%", num(&row.ministry_share_pct)), widths[5]),
            pad_left(&num(&row.per_capita_display), widths[6]),
            source,
        ];
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
    }
    let lead: usize = widths[..4].iter().sum::<usize>() + 3 * 2;
    writeln!(
        out,
        "{}  {}",
        pad_right("Total Cat1", lead),
        pad_left(&num(&bundle.cat1_total.to_plain_string()), widths[4])
    )
    .unwrap();
    if bundle.table1.iter().any(|r| r.reconstructed) {
        out.push_str("*  reconstructed from other figures, not transcribed from a source\n");
    }

    out.push_str("\nTable 2: Calculations for Cat2 and Cat3\n\n");
    let desc_width = bundle
        .table2
        .iter()
        .map(|r| r.description.chars().count())
        .chain([11])
        .max()
        .unwrap_or(11);
    writeln!(
        out,
        "{}  {}  Grade  Source",
        pad_right("Description", desc_width),
        pad_left("Value", 18)
    )
    .unwrap();
    for row in &bundle.table2 {
        let grade = match (row.grade, row.derived) {
            (Some(g), _) => g.code(),
            (None, true) => "calc",
            (None, false) => "",
        };
        let line = format!(
            "{}  {}  {}  {}",
            pad_right(&row.description, desc_width),
            pad_left(&num(&row.display), 18),
            pad_right(grade, 5),
            row.source.as_deref().unwrap_or("")
        );
        writeln!(out, "{}", line.trim_end()).unwrap();
    }

    out.push_str("\nResults\n\n");
    for (key, label) in RESULT_LINES {
        let shown = num(bundle.results.rendered(key));
        if key.starts_with("ratio_") {
            writeln!(out, "{label}: {shown}%").unwrap();
        } else {
            writeln!(out, "{label}: {shown}€").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::tests::bundle;

    #[test]
    fn headline_is_last_line() {
        let text = render_text(&bundle(), Locale::English);
        assert!(text.trim_end().ends_with(": 20.23%"), "{text}");
        assert!(text.contains("including taxes administered by municipalities: 20.20%"));
    }

    #[test]
    fn german_locale() {
        let text = render_text(&bundle(), Locale::German);
        assert!(text.contains("5.647.691.878,02"));
        assert!(text.trim_end().ends_with(": 20,23%"));
        assert!(text.contains("1,082846"));
    }

    #[test]
    fn reconstructed_rows_are_marked() {
        let text = render_text(&bundle(), Locale::English);
        let bremen = text.lines().find(|l| l.starts_with("hb ")).unwrap();
        assert!(bremen.contains("Bremen *"), "{bremen}");
        assert!(text.contains("*  reconstructed"));
    }
}
