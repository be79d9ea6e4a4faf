/// Splits a model reply into individual clues.
///
/// Accepts numbered lists (`1.`, `1)`, `(1)`, `1-`), bullets (`-`, `*`, `•`)
/// and plain newline-separated lines. When any line carries a marker, the
/// unmarked lines are treated as preamble or commentary and dropped.
pub fn parse_clue_list(reply: &str) -> Vec<String> {
    let lines: Vec<(bool, String)> = reply
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let (marked, rest) = strip_marker(l);
            (marked, clean(rest))
        })
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let any_marked = lines.iter().any(|(m, _)| *m);
    lines
        .into_iter()
        .filter(|(m, _)| *m || !any_marked)
        .map(|(_, l)| l)
        .collect()
}

fn strip_marker(line: &str) -> (bool, &str) {
    for bullet in ['-', '*', '•', '–'] {
        if let Some(rest) = line.strip_prefix(bullet) {
            if rest.starts_with(char::is_whitespace) {
                return (true, rest);
            }
        }
    }
    let inner = line.strip_prefix('(').unwrap_or(line);
    let digits = inner.len() - inner.trim_start_matches(|c: char| c.is_ascii_digit()).len();
    if digits > 0 && digits <= 3 {
        let rest = &inner[digits..];
        for sep in [".", ")", "-", ":"] {
            if let Some(after) = rest.strip_prefix(sep) {
                return (true, after);
            }
        }
    }
    (false, line)
}

fn clean(s: &str) -> String {
    let t = s.trim();
    let t = t.trim_start_matches("**").trim_end_matches("**").trim();
    let quoted = [('"', '"'), ('“', '”'), ('«', '»'), ('\'', '\'')]
        .iter()
        .find(|(a, b)| t.len() > 1 && t.starts_with(*a) && t.ends_with(*b));
    match quoted {
        Some((a, b)) => t[a.len_utf8()..t.len() - b.len_utf8()].trim().to_string(),
        None => t.to_string(),
    }
}
