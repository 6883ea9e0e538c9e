//! Reading generator files and building the ring they live in.

use std::path::Path;
use std::sync::Arc;

use freeloop_core::{MonomialOrder, Polynomial, Ring, VarContext};

use crate::error::CliError;

/// Nonblank lines with `#` comments removed; `;` also separates entries.
pub fn read_entries(path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(split_entries(&text))
}

pub fn split_entries(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(';'))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

/// Identifiers in order of first appearance.
pub fn infer_vars<S: AsRef<str>>(texts: &[S]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for t in texts {
        let mut chars = t.as_ref().char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if c.is_ascii_digit() {
                while chars.peek().is_some_and(|(_, c)| c.is_ascii_digit()) {
                    chars.next();
                }
                continue;
            }
            if !(c.is_ascii_alphabetic() || c == '_') {
                continue;
            }
            let mut end = i + c.len_utf8();
            while let Some(&(j, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let name = &t.as_ref()[i..end];
            if !out.iter().any(|v| v == name) {
                out.push(name.to_string());
            }
        }
    }
    out
}

/// Ring over `--vars` (comma separated, largest first) or the inferred
/// variables, ordered by `--order` when given and lex otherwise.
pub fn build_ring<S: AsRef<str>>(vars: Option<&str>, order: Option<&str>, texts: &[S]) -> Result<Arc<Ring>, CliError> {
    let names: Vec<String> = match vars {
        Some(v) => v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => infer_vars(texts),
    };
    if names.is_empty() {
        return Err(CliError::Usage("no variables: pass --vars or use at least one variable".into()));
    }
    let ctx = VarContext::new(&names)?;
    let order = match order {
        Some(spec) => MonomialOrder::parse(&ctx, spec)?,
        None => MonomialOrder::lex_natural(names.len()),
    };
    Ok(Ring::new(ctx, order)?)
}

pub fn parse_all<S: AsRef<str>>(ring: &Arc<Ring>, texts: &[S]) -> Result<Vec<Polynomial>, CliError> {
    texts.iter().map(|t| ring.parse(t.as_ref()).map_err(CliError::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_and_vars() {
        let e = split_entries("x1^2 + 3*y  # first\n\n z*x1; 2*y\n");
        assert_eq!(e, vec!["x1^2 + 3*y", "z*x1", "2*y"]);
        assert_eq!(infer_vars(&e), vec!["x1", "y", "z"]);
        assert_eq!(infer_vars(&["12*ab2^3 - _t"]), vec!["ab2", "_t"]);
    }

    #[test]
    fn ring_from_flags() {
        let r = build_ring(Some("a, b"), Some("lex:b>a"), &["a"]).unwrap();
        assert_eq!(r.order().describe(r.ctx()), "lex:b>a");
        let r = build_ring(None, None, &["y + x"]).unwrap();
        assert_eq!(r.ctx().names(), ["y", "x"]);
        assert!(build_ring(None, None, &["3"]).is_err());
        assert!(build_ring(Some("a,b"), Some("lex:a"), &["a"]).is_err());
    }
}
