//! Line-oriented `report v1` serialization.
//!
//! ```text
//! report v1
//! kind sweep-surjunctive
//! total_rules 256
//! witness violation 17
//! config v1
//! alphabet 2
//! 0 1 1
//! end
//! ```
//!
//! Keys are single tokens; values run to the end of the line. Witness
//! bodies are embedded object texts terminated by `end`.

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub body: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
    witnesses: Vec<Witness>,
}

impl Report {
    pub fn new(kind: &str) -> Self {
        let mut r = Report::default();
        r.push("kind", kind);
        r
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        assert!(
            !key.is_empty() && !key.contains(char::is_whitespace) && key != "witness",
            "invalid report key `{key}`"
        );
        let value = value.to_string();
        assert!(!value.contains('\n'), "report values are single-line");
        self.entries.push((key.to_string(), value));
        self
    }

    pub fn witness(&mut self, label: impl Into<String>, body: impl Into<String>) -> &mut Self {
        let mut body = body.into();
        if !body.ends_with('\n') {
            body.push('\n');
        }
        self.witnesses.push(Witness {
            label: label.into(),
            body,
        });
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn witnesses(&self) -> &[Witness] {
        &self.witnesses
    }

    /// First value stored under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn kind(&self) -> &str {
        self.get("kind").unwrap_or("")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("report v1\n");
        for (k, v) in &self.entries {
            if v.is_empty() {
                out.push_str(&format!("{k}\n"));
            } else {
                out.push_str(&format!("{k} {v}\n"));
            }
        }
        for w in &self.witnesses {
            if w.label.is_empty() {
                out.push_str("witness\n");
            } else {
                out.push_str(&format!("witness {}\n", w.label));
            }
            out.push_str(&w.body);
            out.push_str("end\n");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.by_ref().find(|(_, l)| !l.trim().is_empty()) {
            Some((_, l)) if l.trim() == "report v1" => {}
            Some((idx, l)) => {
                return Err(Error::parse(idx + 1, format!("expected `report v1`, found `{}`", l.trim())))
            }
            None => return Err(Error::parse(0, "empty report")),
        }
        let mut report = Report::default();
        while let Some((idx, raw)) = lines.next() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k, v.trim()),
                None => (line, ""),
            };
            if key == "witness" {
                let mut body = String::new();
                let mut closed = false;
                for (_, l) in lines.by_ref() {
                    if l.trim() == "end" {
                        closed = true;
                        break;
                    }
                    body.push_str(l.trim_end_matches('\r'));
                    body.push('\n');
                }
                if !closed {
                    return Err(Error::parse(idx + 1, "unterminated witness block"));
                }
                report.witnesses.push(Witness {
                    label: value.to_string(),
                    body,
                });
            } else if !report.witnesses.is_empty() {
                return Err(Error::parse(idx + 1, "key after witness blocks"));
            } else {
                report.entries.push((key.to_string(), value.to_string()));
            }
        }
        Ok(report)
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}
