use serde_json::Value;

/// One output record, rendered either as a text line or a JSON line.
#[derive(Debug, Clone)]
pub struct Record {
    pub text: String,
    pub json: Value,
}

/// Everything a command prints, plus whether its checks passed.
#[derive(Debug, Clone)]
pub struct Report {
    pub records: Vec<Record>,
    pub warnings: Vec<String>,
    pub ok: bool,
}

impl Report {
    pub fn new() -> Report {
        Report {
            records: Vec::new(),
            warnings: Vec::new(),
            ok: true,
        }
    }

    pub fn push(&mut self, text: impl Into<String>, json: Value) {
        self.records.push(Record { text: text.into(), json });
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn fail(&mut self) {
        self.ok = false;
    }

    pub fn render(&self, json: bool) -> String {
        let mut out = String::new();
        for r in &self.records {
            if json {
                out.push_str(&r.json.to_string());
            } else {
                out.push_str(&r.text);
            }
            out.push('\n');
        }
        out
    }
}

impl Default for Report {
    fn default() -> Self {
        Report::new()
    }
}
