//! Matrix files: `#` comment lines, a header `m d`, then `m` rows of `d` integers.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Whitespace-separated tokens of one line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn int_token(line: usize, (column, tok): (usize, &str)) -> Result<i64, ParseError> {
    tok.parse().map_err(|_| ParseError { line, column, message: format!("expected an integer, found `{tok}`") })
}

/// Returns the matrix as rows.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let (hline, header) = lines.next().ok_or(ParseError { line: 1, column: 1, message: "missing header `m d`".into() })?;
    let toks = tokens(header);
    if toks.len() != 2 {
        let column = toks.get(2).map_or(header.len() + 1, |t| t.0);
        return Err(ParseError { line: hline, column, message: "header must be `m d`".into() });
    }
    let m = int_token(hline, toks[0])?;
    let d = int_token(hline, toks[1])?;
    if m < 1 || d < 1 {
        return Err(ParseError { line: hline, column: 1, message: "m and d must be positive".into() });
    }
    let (m, d) = (m as usize, d as usize);

    let mut rows = Vec::with_capacity(m);
    let mut last = hline;
    for (n, line) in lines {
        last = n;
        if rows.len() == m {
            let column = tokens(line)[0].0;
            return Err(ParseError { line: n, column, message: format!("expected {m} rows, found more") });
        }
        let toks = tokens(line);
        if toks.len() != d {
            let column = toks.get(d).map_or(line.len() + 1, |t| t.0);
            return Err(ParseError { line: n, column, message: format!("expected {d} entries, found {}", toks.len()) });
        }
        rows.push(toks.into_iter().map(|t| int_token(n, t)).collect::<Result<Vec<_>, _>>()?);
    }
    if rows.len() < m {
        return Err(ParseError { line: last + 1, column: 1, message: format!("expected {m} rows, found {}", rows.len()) });
    }
    Ok(rows)
}
