//! Small helpers shared by the line-oriented text formats.

use crate::error::{Error, Result};

pub(crate) struct LineReader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> LineReader<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        LineReader {
            lines: text.lines().enumerate(),
        }
    }

    /// Next non-blank line with its 1-based number.
    pub(crate) fn next_line(&mut self) -> Result<(usize, &'a str)> {
        for (idx, line) in self.lines.by_ref() {
            let line = line.trim_end_matches('\r');
            if !line.trim().is_empty() {
                return Ok((idx + 1, line.trim()));
            }
        }
        Err(Error::parse(0, "unexpected end of input"))
    }

    pub(crate) fn expect(&mut self, exact: &str) -> Result<usize> {
        let (no, line) = self.next_line()?;
        if line != exact {
            return Err(Error::parse(no, format!("expected `{exact}`, found `{line}`")));
        }
        Ok(no)
    }

    /// Reads a `key rest...` line and returns the trimmed rest.
    pub(crate) fn keyed(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (no, line) = self.next_line()?;
        let rest = strip_key(line, key)
            .ok_or_else(|| Error::parse(no, format!("expected `{key} ...`, found `{line}`")))?;
        Ok((no, rest))
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        match self.next_line() {
            Ok((no, line)) => Err(Error::parse(no, format!("trailing content `{line}`"))),
            Err(_) => Ok(()),
        }
    }
}

pub(crate) fn strip_key<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(key)?;
    if rest.is_empty() {
        Some(rest)
    } else if rest.starts_with(char::is_whitespace) {
        Some(rest.trim())
    } else {
        None
    }
}

pub(crate) fn parse_num<T: std::str::FromStr>(line: usize, token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid number `{token}`")))
}

pub(crate) fn parse_nums<T: std::str::FromStr>(line: usize, text: &str) -> Result<Vec<T>> {
    text.split_whitespace().map(|t| parse_num(line, t)).collect()
}

pub(crate) fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
