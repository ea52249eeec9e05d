use ndschaos::{Error, Result};

/// A finished artifact: `# key=value` parameter lines, then one CSV table.
#[derive(Debug, Default)]
pub struct Report {
    params: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.param("command", command);
        r
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        // keep each parameter on a single line
        let v = value.to_string().replace(['\n', '\r'], " ");
        self.params.push((key.to_string(), v));
    }

    pub fn columns<S: ToString>(&mut self, cols: &[S]) {
        self.columns = cols.iter().map(ToString::to_string).collect();
    }

    pub fn row(&mut self, fields: Vec<String>) {
        debug_assert_eq!(fields.len(), self.columns.len());
        self.rows.push(fields);
    }

    pub fn render(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for (k, v) in &self.params {
            out.extend_from_slice(format!("# {k}={v}\n").as_bytes());
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| Error::Parameter(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner().map_err(|e| Error::Parameter(format!("csv: {e}")))
    }
}

pub fn flag_cells(flags: &[ndschaos::Flag]) -> Vec<String> {
    flags.iter().map(|f| f.as_str().to_string()).collect()
}
