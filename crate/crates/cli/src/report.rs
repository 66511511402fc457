use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 3,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

/// One reported quantity. `passed` is set when something was compared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Item {
    pub label: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub items: Vec<Item>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            status: Status::Pass,
            items: Vec::new(),
            error: None,
        }
    }

    pub fn error(command: impl Into<String>, message: String) -> Self {
        Report {
            command: command.into(),
            status: Status::Error,
            items: Vec::new(),
            error: Some(message),
        }
    }

    pub fn value(&mut self, label: impl Into<String>, value: impl fmt::Display) -> &mut Self {
        self.items.push(Item {
            label: label.into(),
            value: value.to_string(),
            citation: None,
            expected: None,
            passed: None,
        });
        self
    }

    pub fn cited(&mut self, label: impl Into<String>, value: impl fmt::Display, citation: impl Into<String>) -> &mut Self {
        self.value(label, value);
        self.items.last_mut().expect("just pushed").citation = Some(citation.into());
        self
    }

    /// Records a value together with what it should equal.
    pub fn expect(&mut self, label: impl Into<String>, got: impl fmt::Display, want: impl fmt::Display) -> &mut Self {
        let (got, want) = (got.to_string(), want.to_string());
        let passed = got == want;
        self.items.push(Item {
            label: label.into(),
            value: got,
            citation: None,
            expected: Some(want),
            passed: Some(passed),
        });
        self.settle();
        self
    }

    pub fn check(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) -> &mut Self {
        self.items.push(Item {
            label: label.into(),
            value: detail.into(),
            citation: None,
            expected: None,
            passed: Some(passed),
        });
        self.settle();
        self
    }

    fn settle(&mut self) {
        if self.status != Status::Error {
            let all = self.items.iter().all(|i| i.passed != Some(false));
            self.status = if all { Status::Pass } else { Status::Fail };
        }
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_else(|e| format!("{{\"status\":\"ERROR\",\"error\":\"{e}\"}}"))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        for i in &self.items {
            match i.passed {
                Some(p) => write!(f, "{} {}: {}", if p { "PASS" } else { "FAIL" }, i.label, i.value)?,
                None => write!(f, "{} = {}", i.label, i.value)?,
            }
            if let Some(e) = &i.expected {
                write!(f, " (expected {e})")?;
            }
            if let Some(c) = &i.citation {
                write!(f, "  [{c}]")?;
            }
            writeln!(f)?;
        }
        if let Some(e) = &self.error {
            writeln!(f, "ERROR: {e}")?;
        }
        write!(f, "status: {}", self.status)
    }
}
