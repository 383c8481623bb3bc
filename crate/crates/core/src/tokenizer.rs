//! Whitespace tokens, alphabetic words and a visible-text approximation of
//! HTML bodies.

/// Whitespace for token boundaries: space, tab, LF, CR, form feed and
/// vertical tab. Unicode spaces (including NBSP) are token characters.
pub fn is_token_whitespace(c: char) -> bool {
    matches!(c, ' ' | '\t' | '\n' | '\r' | '\x0C' | '\x0B')
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    /// Number of characters scanned.
    pub source_length: usize,
}

impl TokenStream {
    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub fn tokenize(text: &str) -> TokenStream {
    TokenStream {
        tokens: text
            .split(is_token_whitespace)
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect(),
        source_length: text.chars().count(),
    }
}

/// A-Z, a-z and the ASCII apostrophe only, with at least one letter.
pub fn is_alphabetic_word(token: &str) -> bool {
    token.chars().all(|c| c.is_ascii_alphabetic() || c == '\'')
        && token.chars().any(|c| c.is_ascii_alphabetic())
}

pub fn alphabetic_words(ts: &TokenStream) -> Vec<&str> {
    ts.iter().filter(|t| is_alphabetic_word(t)).collect()
}

/// Remove comments and tags, drop `<script>`/`<style>` contents, then
/// decode a small set of entities.
///
/// A `<` only opens a tag when followed by a letter, `/`, `!` or `?`;
/// anything else is text. Unterminated tags and comments run to the end
/// of input.
pub fn strip_html(text: &str) -> String {
    decode_entities(&remove_markup(text))
}

fn remove_markup(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    let mut text_start = 0;

    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        if bytes[i..].starts_with(b"<!--") {
            out.push_str(&text[text_start..i]);
            i = find_from(bytes, i + 4, b"-->").map_or(bytes.len(), |p| p + 3);
            text_start = i;
            continue;
        }
        let opens_tag = bytes
            .get(i + 1)
            .is_some_and(|&b| b.is_ascii_alphabetic() || matches!(b, b'/' | b'!' | b'?'));
        if !opens_tag {
            i += 1;
            continue;
        }
        out.push_str(&text[text_start..i]);
        let end = tag_end(bytes, i + 1);
        let name = tag_name(&bytes[i + 1..end.unwrap_or(bytes.len())]);
        i = end.map_or(bytes.len(), |p| p + 1);
        let self_closing = end.is_some_and(|p| p > 0 && bytes[p - 1] == b'/');
        if !self_closing && (name == "script" || name == "style") {
            i = skip_raw_text(bytes, i, &name);
        }
        text_start = i;
    }
    out.push_str(&text[text_start.min(text.len())..]);
    out
}

/// Index of the `>` closing a tag whose body starts at `from`, honouring
/// quoted attribute values.
pub(crate) fn tag_end(bytes: &[u8], from: usize) -> Option<usize> {
    let mut quote: Option<u8> = None;
    for (off, &b) in bytes[from..].iter().enumerate() {
        match quote {
            Some(q) if b == q => quote = None,
            Some(_) => {}
            None if b == b'"' || b == b'\'' => quote = Some(b),
            None if b == b'>' => return Some(from + off),
            None => {}
        }
    }
    None
}

fn tag_name(inner: &[u8]) -> String {
    inner
        .iter()
        .take_while(|b| b.is_ascii_alphanumeric())
        .map(|b| b.to_ascii_lowercase() as char)
        .collect()
}

/// Position just past `</name ...>`, or end of input.
fn skip_raw_text(bytes: &[u8], from: usize, name: &str) -> usize {
    let closing = format!("</{name}");
    let mut i = from;
    while let Some(p) = find_from_ci(bytes, i, closing.as_bytes()) {
        let after = p + closing.len();
        let boundary = bytes
            .get(after)
            .is_none_or(|b| !b.is_ascii_alphanumeric());
        if boundary {
            return tag_end(bytes, after).map_or(bytes.len(), |e| e + 1);
        }
        i = after;
    }
    bytes.len()
}

pub(crate) fn find_from(hay: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    if from > hay.len() {
        return None;
    }
    hay[from..]
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|p| p + from)
}

pub(crate) fn find_from_ci(hay: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    if from > hay.len() {
        return None;
    }
    hay[from..]
        .windows(needle.len())
        .position(|w| w.eq_ignore_ascii_case(needle))
        .map(|p| p + from)
}

/// `&amp; &lt; &gt; &quot; &apos; &nbsp;` plus `&#NNN;` and `&#xHH;`.
/// Unknown or malformed entities are left as written.
pub fn decode_entities(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp..];
        match decode_entity(tail) {
            Some((c, len)) => {
                out.push(c);
                rest = &tail[len..];
            }
            None => {
                out.push('&');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn decode_entity(s: &str) -> Option<(char, usize)> {
    let semi = s.find(';')?;
    let body = &s[1..semi];
    if body.is_empty() || body.len() > 10 {
        return None;
    }
    let c = match body {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => '\u{A0}',
        _ => {
            let num = body.strip_prefix('#')?;
            let code = match num.strip_prefix(['x', 'X']) {
                Some(hex) => u32::from_str_radix(hex, 16).ok()?,
                None => num.parse::<u32>().ok()?,
            };
            char::from_u32(code)?
        }
    };
    Some((c, semi + 1))
}
