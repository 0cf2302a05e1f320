//! Plain-text metric files.
//!
//! The first non-blank line lists the coordinate names separated by commas.
//! Every following line is `i j expression` and sets the upper-triangle
//! component `g_ij` (0-based, `i ≤ j`); missing components are zero. Lines
//! starting with `#` are ignored.

use feflab::sym::parse;
use feflab::tensor::MetricChart;

use crate::CliError;

pub fn parse_metric(text: &str) -> Result<MetricChart, CliError> {
    let mut lines =
        text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or_else(|| CliError::Parse("empty metric file".into()))?;
    let coords: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    if coords.iter().any(|c| c.is_empty() || !c.chars().all(|ch| ch.is_alphanumeric() || ch == '_')) {
        return Err(CliError::Parse(format!("bad coordinate list `{header}`")));
    }
    let d = coords.len();
    let mut entries = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (line, l) in lines {
        let mut parts = l.splitn(3, char::is_whitespace);
        let mut index = |what: &str| -> Result<usize, CliError> {
            let tok = parts.next().unwrap_or("");
            tok.parse::<usize>()
                .ok()
                .filter(|&v| v < d)
                .ok_or_else(|| CliError::Parse(format!("line {line}: bad {what} index `{tok}`")))
        };
        let (i, j) = (index("row")?, index("column")?);
        if i > j {
            return Err(CliError::Parse(format!("line {line}: ({i}, {j}) is below the diagonal")));
        }
        if !seen.insert((i, j)) {
            return Err(CliError::Parse(format!("line {line}: component ({i}, {j}) given twice")));
        }
        let src = parts.next().map(str::trim).unwrap_or("");
        if src.is_empty() {
            return Err(CliError::Parse(format!("line {line}: missing expression")));
        }
        let e = parse(src).map_err(|e| CliError::Parse(format!("line {line}: {e}")))?;
        if let Some(v) = e.free_vars().into_iter().find(|v| !coords.contains(v)) {
            return Err(CliError::Parse(format!("line {line}: `{v}` is not a coordinate")));
        }
        entries.push((i, j, e));
    }
    Ok(MetricChart::from_upper(coords, entries)?)
}
