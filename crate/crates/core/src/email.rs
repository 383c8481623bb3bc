//! Raw email ingestion: single RFC-822 style messages and "From "-separated
//! mailbox archives.
//!
//! Parsing is best-effort. Spam is frequently malformed on purpose, so the
//! only hard failure is input with neither a header/body separator nor a
//! single header-shaped line.

use base64::Engine;

use crate::{Error, Result};

/// Multipart bodies nested deeper than this are kept as opaque text.
pub const MAX_MULTIPART_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BodyPart {
    /// Lowercased media type, e.g. `text/html`.
    pub content_type: String,
    pub charset: String,
    pub decoded_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EmailMessage {
    pub headers: Vec<Header>,
    pub subject: String,
    pub body_parts: Vec<BodyPart>,
    /// In-order concatenation of every part's decoded text.
    pub raw_body: String,
}

impl EmailMessage {
    /// Value of the first header whose name matches case-insensitively.
    pub fn header_value(&self, name: &str) -> Option<&str> {
        self.header_values(name).next()
    }

    pub fn header_values<'a, 'n>(&'a self, name: &'n str) -> impl Iterator<Item = &'a str> + use<'a, 'n> {
        self.headers
            .iter()
            .filter(move |h| h.name.eq_ignore_ascii_case(name))
            .map(|h| h.value.as_str())
    }

    /// Lowercased media type of the top-level Content-Type header, if any.
    pub fn top_level_media_type(&self) -> Option<String> {
        self.header_value("content-type")
            .map(|v| ContentType::parse(v).media_type)
    }
}

/// Free-function form of [`EmailMessage::header_value`].
pub fn header_value<'a>(msg: &'a EmailMessage, name: &str) -> Option<&'a str> {
    msg.header_value(name)
}

/// Parse one message.
pub fn parse_eml(raw: &[u8]) -> Result<EmailMessage> {
    let normalized = normalize_newlines(raw);
    let split = split_headers(&normalized);
    let blank_line = split.had_separator || normalized.starts_with(b"\n") || normalized.windows(2).any(|w| w == b"\n\n");
    if split.headers.is_empty() && !blank_line && !any_header_line(&normalized) {
        return Err(Error::MalformedMessage);
    }

    let mut body_parts = Vec::new();
    collect_parts(&split.headers, split.body, 0, &mut body_parts);
    let raw_body = body_parts.iter().map(|p| p.decoded_text.as_str()).collect();
    let subject = split
        .headers
        .iter()
        .find(|h| h.name.eq_ignore_ascii_case("subject"))
        .map(|h| decode_encoded_words(&h.value))
        .unwrap_or_default();

    Ok(EmailMessage {
        headers: split.headers,
        subject,
        body_parts,
        raw_body,
    })
}

/// Split a mailbox archive on lines beginning with `From ` and parse each
/// segment. A segment that cannot be parsed as a message is kept as a
/// header-less message whose body is the segment text.
pub fn parse_mbox(raw: &[u8]) -> Vec<EmailMessage> {
    let normalized = normalize_newlines(raw);
    let mut segments: Vec<Vec<u8>> = Vec::new();
    let mut current: Option<Vec<u8>> = None;
    let mut preamble: Vec<u8> = Vec::new();

    for line in lines_with_endings(&normalized) {
        if line.starts_with(b"From ") {
            if let Some(seg) = current.take() {
                segments.push(seg);
            }
            current = Some(Vec::new());
            continue;
        }
        let target = match current.as_mut() {
            Some(seg) => seg,
            None => &mut preamble,
        };
        target.extend_from_slice(unescape_from_line(line));
    }
    if let Some(seg) = current.take() {
        segments.push(seg);
    }
    if preamble.iter().any(|b| !b.is_ascii_whitespace()) {
        segments.insert(0, preamble);
    }

    segments
        .into_iter()
        .map(|seg| {
            parse_eml(&seg).unwrap_or_else(|_| {
                let text = String::from_utf8_lossy(&seg).into_owned();
                EmailMessage {
                    headers: Vec::new(),
                    subject: String::new(),
                    body_parts: vec![BodyPart {
                        content_type: "text/plain".to_string(),
                        charset: "us-ascii".to_string(),
                        decoded_text: text.clone(),
                    }],
                    raw_body: text,
                }
            })
        })
        .collect()
}

/// mboxrd quoting: `>From ` (with any number of `>`) loses one `>`.
fn unescape_from_line(line: &[u8]) -> &[u8] {
    let quotes = line.iter().take_while(|&&b| b == b'>').count();
    if quotes > 0 && line[quotes..].starts_with(b"From ") {
        &line[1..]
    } else {
        line
    }
}

fn normalize_newlines(raw: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        if raw[i] == b'\r' {
            out.push(b'\n');
            if raw.get(i + 1) == Some(&b'\n') {
                i += 1;
            }
        } else {
            out.push(raw[i]);
        }
        i += 1;
    }
    out
}

fn lines_with_endings(buf: &[u8]) -> impl Iterator<Item = &[u8]> {
    buf.split_inclusive(|&b| b == b'\n')
}

fn strip_newline(line: &[u8]) -> &[u8] {
    line.strip_suffix(b"\n").unwrap_or(line)
}

/// `name: value` where name is printable ASCII without spaces or colons.
fn header_name(line: &[u8]) -> Option<&[u8]> {
    let colon = line.iter().position(|&b| b == b':')?;
    let name = &line[..colon];
    if name.is_empty() || !name.iter().all(|&b| (33..=126).contains(&b) && b != b':') {
        return None;
    }
    Some(name)
}

fn any_header_line(buf: &[u8]) -> bool {
    lines_with_endings(buf).any(|l| header_name(strip_newline(l)).is_some())
}

struct HeaderSplit<'a> {
    headers: Vec<Header>,
    body: &'a [u8],
    had_separator: bool,
}

fn split_headers(buf: &[u8]) -> HeaderSplit<'_> {
    let mut headers: Vec<Header> = Vec::new();
    let mut offset = 0;
    let mut had_separator = false;

    for line in lines_with_endings(buf) {
        let content = strip_newline(line);
        if content.is_empty() {
            had_separator = true;
            offset += line.len();
            break;
        }
        if matches!(content[0], b' ' | b'\t') && !headers.is_empty() {
            let cont = String::from_utf8_lossy(content);
            let cont = cont.trim();
            if !cont.is_empty() {
                let last = headers.last_mut().expect("checked non-empty");
                if !last.value.is_empty() {
                    last.value.push(' ');
                }
                last.value.push_str(cont);
            }
            offset += line.len();
            continue;
        }
        match header_name(content) {
            Some(name) => {
                let value = &content[name.len() + 1..];
                headers.push(Header {
                    name: String::from_utf8_lossy(name).into_owned(),
                    value: String::from_utf8_lossy(value).trim().to_string(),
                });
                offset += line.len();
            }
            // First non-header line starts the body.
            None => break,
        }
    }

    HeaderSplit {
        headers,
        body: &buf[offset..],
        had_separator,
    }
}

#[derive(Debug, Clone)]
struct ContentType {
    media_type: String,
    params: Vec<(String, String)>,
}

impl ContentType {
    fn plain() -> Self {
        ContentType {
            media_type: "text/plain".to_string(),
            params: Vec::new(),
        }
    }

    fn parse(value: &str) -> Self {
        let mut pieces = split_params(value).into_iter();
        let media_type = pieces
            .next()
            .map(|m| m.trim().to_ascii_lowercase())
            .filter(|m| !m.is_empty())
            .unwrap_or_else(|| "text/plain".to_string());
        let params = pieces
            .filter_map(|p| {
                let (k, v) = p.split_once('=')?;
                let v = v.trim();
                let v = v
                    .strip_prefix('"')
                    .and_then(|s| s.strip_suffix('"'))
                    .unwrap_or(v);
                Some((k.trim().to_ascii_lowercase(), v.to_string()))
            })
            .collect();
        ContentType { media_type, params }
    }

    fn param(&self, name: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }
}

/// Split on `;` outside double quotes.
fn split_params(value: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for c in value.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                cur.push(c);
            }
            ';' if !quoted => out.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out
}

fn find_header<'a>(headers: &'a [Header], name: &str) -> Option<&'a str> {
    headers
        .iter()
        .find(|h| h.name.eq_ignore_ascii_case(name))
        .map(|h| h.value.as_str())
}

fn collect_parts(headers: &[Header], body: &[u8], depth: usize, out: &mut Vec<BodyPart>) {
    let ctype = find_header(headers, "content-type")
        .map(ContentType::parse)
        .unwrap_or_else(ContentType::plain);

    if ctype.media_type.starts_with("multipart/") && depth < MAX_MULTIPART_DEPTH {
        if let Some(boundary) = ctype.param("boundary").filter(|b| !b.is_empty()) {
            let sections = split_multipart(body, boundary);
            if let Some(sections) = sections {
                for section in sections {
                    let split = split_headers(section);
                    collect_parts(&split.headers, split.body, depth + 1, out);
                }
                return;
            }
        }
    }

    let encoding = find_header(headers, "content-transfer-encoding")
        .map(|e| e.trim().to_ascii_lowercase())
        .unwrap_or_default();
    let charset = ctype
        .param("charset")
        .map(|c| c.to_ascii_lowercase())
        .unwrap_or_else(|| "us-ascii".to_string());
    let textual = ctype.media_type.starts_with("text/")
        || ctype.media_type.starts_with("message/")
        || ctype.media_type.starts_with("multipart/");
    let decoded_text = if textual {
        let bytes = decode_transfer(body, &encoding);
        String::from_utf8_lossy(&bytes).into_owned()
    } else {
        String::new()
    };
    out.push(BodyPart {
        content_type: ctype.media_type,
        charset,
        decoded_text,
    });
}

/// Sections between `--boundary` delimiter lines, or `None` when the
/// boundary never appears. Preamble and epilogue are dropped.
fn split_multipart<'a>(body: &'a [u8], boundary: &str) -> Option<Vec<&'a [u8]>> {
    let delim = format!("--{boundary}");
    let delim = delim.as_bytes();
    let mut sections = Vec::new();
    let mut start: Option<usize> = None;
    let mut offset = 0;
    let mut seen = false;

    for line in lines_with_endings(body) {
        let content = strip_newline(line);
        let trimmed = trim_ascii_end(content);
        if trimmed.starts_with(delim) {
            let rest = &trimmed[delim.len()..];
            let closing = rest == b"--";
            if rest.is_empty() || closing {
                seen = true;
                if let Some(s) = start.take() {
                    sections.push(&body[s..offset]);
                }
                offset += line.len();
                if closing {
                    return Some(sections);
                }
                start = Some(offset);
                continue;
            }
        }
        offset += line.len();
    }
    if let Some(s) = start {
        sections.push(&body[s..]);
    }
    seen.then_some(sections)
}

fn trim_ascii_end(b: &[u8]) -> &[u8] {
    let end = b
        .iter()
        .rposition(|c| !matches!(c, b' ' | b'\t'))
        .map_or(0, |p| p + 1);
    &b[..end]
}

fn decode_transfer(body: &[u8], encoding: &str) -> Vec<u8> {
    match encoding {
        "quoted-printable" => decode_quoted_printable(body),
        "base64" => decode_base64_lenient(body),
        _ => body.to_vec(),
    }
}

fn hex_value(b: u8) -> Option<u8> {
    match b {
        b'0'..=b'9' => Some(b - b'0'),
        b'a'..=b'f' => Some(b - b'a' + 10),
        b'A'..=b'F' => Some(b - b'A' + 10),
        _ => None,
    }
}

/// Tolerant quoted-printable decoding: soft breaks removed, malformed
/// escapes passed through.
pub fn decode_quoted_printable(input: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(input.len());
    let mut i = 0;
    while i < input.len() {
        let b = input[i];
        if b != b'=' {
            out.push(b);
            i += 1;
            continue;
        }
        // Soft line break, allowing trailing whitespace before the newline.
        let mut j = i + 1;
        while j < input.len() && matches!(input[j], b' ' | b'\t') {
            j += 1;
        }
        if j < input.len() && input[j] == b'\n' {
            i = j + 1;
            continue;
        }
        if j == input.len() {
            i = j;
            continue;
        }
        match (
            input.get(i + 1).copied().and_then(hex_value),
            input.get(i + 2).copied().and_then(hex_value),
        ) {
            (Some(hi), Some(lo)) => {
                out.push(hi << 4 | lo);
                i += 3;
            }
            _ => {
                out.push(b);
                i += 1;
            }
        }
    }
    out
}

/// Base64 ignoring non-alphabet bytes and tolerating missing padding.
/// Input that still fails to decode is passed through.
pub fn decode_base64_lenient(input: &[u8]) -> Vec<u8> {
    let mut clean: Vec<u8> = input
        .iter()
        .copied()
        .filter(|b| b.is_ascii_alphanumeric() || *b == b'+' || *b == b'/')
        .collect();
    // A single dangling sextet cannot encode a byte.
    if clean.len() % 4 == 1 {
        clean.pop();
    }
    base64::engine::general_purpose::STANDARD_NO_PAD
        .decode(&clean)
        .unwrap_or_else(|_| input.to_vec())
}

/// RFC 2047 encoded words (`=?charset?B|Q?text?=`). Charsets are not
/// transcoded; decoded bytes are read as UTF-8.
fn decode_encoded_words(value: &str) -> String {
    let mut out = String::new();
    let mut rest = value;
    let mut last_was_word = false;
    while let Some(start) = rest.find("=?") {
        let (before, tail) = rest.split_at(start);
        let Some((decoded, consumed)) = decode_one_word(tail) else {
            out.push_str(before);
            out.push_str("=?");
            rest = &tail[2..];
            last_was_word = false;
            continue;
        };
        // Whitespace between adjacent encoded words is dropped.
        if !(last_was_word && before.chars().all(char::is_whitespace)) {
            out.push_str(before);
        }
        out.push_str(&decoded);
        rest = &tail[consumed..];
        last_was_word = true;
    }
    out.push_str(rest);
    out
}

fn decode_one_word(s: &str) -> Option<(String, usize)> {
    let body = s.strip_prefix("=?")?;
    let q1 = body.find('?')?;
    let enc = body.get(q1 + 1..q1 + 2)?;
    if body.get(q1 + 2..q1 + 3)? != "?" {
        return None;
    }
    let text_start = q1 + 3;
    let text_len = body[text_start..].find("?=")?;
    let text = &body[text_start..text_start + text_len];
    let bytes = match enc {
        "B" | "b" => decode_base64_lenient(text.as_bytes()),
        "Q" | "q" => decode_quoted_printable(text.replace('_', " ").as_bytes()),
        _ => return None,
    };
    Some((
        String::from_utf8_lossy(&bytes).into_owned(),
        2 + text_start + text_len + 2,
    ))
}
