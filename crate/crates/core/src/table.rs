//! Plain-text and CSV rendering for report tables.
//!
//! Output is byte-stable: column widths depend only on cell contents and
//! numbers are formatted by the callers with fixed precision.

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Align {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub align: Vec<Align>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(title: S, headers: &[&str]) -> Self {
        Self {
            title: title.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            align: vec![Align::Left; headers.len()],
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Right-align the given column indices (numeric columns).
    pub fn right(mut self, cols: &[usize]) -> Self {
        for &c in cols {
            self.align[c] = Align::Right;
        }
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.headers.len(), "row width mismatch in {}", self.title);
        self.rows.push(row);
    }

    pub fn note<S: Into<String>>(&mut self, note: S) {
        self.notes.push(note.into());
    }

    fn widths(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                w[i] = w[i].max(cell.chars().count());
            }
        }
        w
    }

    fn line(&self, cells: &[String], widths: &[usize]) -> String {
        let mut out = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            let pad = widths[i] - cell.chars().count();
            match self.align[i] {
                Align::Left => {
                    out.push_str(cell);
                    out.extend(std::iter::repeat_n(' ', pad));
                }
                Align::Right => {
                    out.extend(std::iter::repeat_n(' ', pad));
                    out.push_str(cell);
                }
            }
        }
        out.truncate(out.trim_end().len());
        out
    }

    pub fn to_text(&self) -> String {
        let widths = self.widths();
        let total = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
        let rule = "-".repeat(total);
        let mut out = String::new();
        out.push_str(&self.title);
        out.push('\n');
        out.push_str(&rule);
        out.push('\n');
        out.push_str(&self.line(&self.headers, &widths));
        out.push('\n');
        out.push_str(&rule);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&self.line(row, &widths));
            out.push('\n');
        }
        out.push_str(&rule);
        out.push('\n');
        for n in &self.notes {
            out.push_str(n);
            out.push('\n');
        }
        out
    }

    /// RFC 4180 CSV: header row then data rows, CRLF-free (`\n` terminators).
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory csv write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory csv write");
        }
        let bytes = w.into_inner().expect("in-memory csv flush");
        String::from_utf8(bytes).expect("csv output is utf-8")
    }
}

/// Fixed one-decimal formatting used for bandwidths.
pub fn fmt1(v: f64) -> String {
    format!("{v:.1}")
}

/// Fixed three-decimal formatting used for latencies.
pub fn fmt3(v: f64) -> String {
    format!("{v:.3}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_alignment_and_csv_quoting() {
        let mut t = Table::new("Demo", &["Name", "Value"]).right(&[1]);
        t.push(vec!["a, b".into(), "1.0".into()]);
        t.push(vec!["long name".into(), "22.4".into()]);
        t.note("note line");
        let text = t.to_text();
        assert_eq!(
            text,
            "Demo\n----------------\nName       Value\n----------------\na, b         1.0\nlong name   22.4\n----------------\nnote line\n"
        );
        assert_eq!(t.to_csv(), "Name,Value\n\"a, b\",1.0\nlong name,22.4\n");
    }
}
