//! Everything written to stderr.

use std::io::IsTerminal;
use std::path::Path;

use rlml_core::textio::ParseError;
use rlml_core::validate::{Diagnostic, Severity};

use crate::Exit;

/// Colour only when stderr is a terminal and `RLML_NO_COLOR` is unset.
fn color() -> bool {
    std::env::var_os("RLML_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

fn paint(text: &str, code: &str) -> String {
    if color() {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

pub fn diagnostics(list: &[Diagnostic]) {
    for d in list {
        let line = d.to_string();
        let (level, rest) = line.split_once(' ').unwrap_or((&line, ""));
        let code = match d.severity {
            Severity::Error => "1;31",
            Severity::Warning => "1;33",
        };
        eprintln!("{} {rest}", paint(level, code));
    }
}

/// `path:line:col: message`, then the offending line with a caret.
pub fn parse_error(path: &Path, source: &str, e: &ParseError) {
    eprintln!("{}: {}: {e}", paint("error", "1;31"), path.display());
    if let Some(text) = source.lines().nth(e.span.line.saturating_sub(1)) {
        let pad: String = text
            .chars()
            .take(e.span.column.saturating_sub(1))
            .map(|c| if c == '\t' { '\t' } else { ' ' })
            .collect();
        eprintln!("  {text}");
        eprintln!("  {pad}{}", "^".repeat(e.span.length.max(1)));
    }
}

/// Print `message` as an error and hand back `exit` for `?`.
pub fn fail(exit: Exit, message: impl std::fmt::Display) -> Exit {
    eprintln!("{}: {message}", paint("error", "1;31"));
    exit
}
