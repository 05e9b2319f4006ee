/// Non-blank, non-comment lines with their 1-based line numbers. Accepts LF
/// or CRLF endings.
pub(crate) fn data_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim_end_matches('\r').trim();
        (!line.is_empty() && !line.starts_with('#')).then_some((i + 1, line))
    })
}
