//! Lexical scan of HTML tags for the markup-level body features.
//!
//! No DOM is built. Comments, `<script>` contents and `<style>` contents
//! are not scanned for tags; `<style>` contents are reported as CSS text.
//! A tag without a closing `>` is never reported.

use crate::tokenizer::{find_from, find_from_ci, tag_end};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attr {
    pub name: String,
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tag {
    pub name: String,
    pub closing: bool,
    pub attrs: Vec<Attr>,
}

impl Tag {
    pub fn attr(&self, name: &str) -> Option<&Attr> {
        self.attrs.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Tag(Tag),
    /// Text content of a `<style>` element.
    StyleText(String),
}

pub fn scan(html: &str) -> Vec<Event> {
    let bytes = html.as_bytes();
    let mut events = Vec::new();
    let mut i = 0;

    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        if bytes[i..].starts_with(b"<!--") {
            match find_from(bytes, i + 4, b"-->") {
                Some(p) => i = p + 3,
                None => break,
            }
            continue;
        }
        let opens = bytes
            .get(i + 1)
            .is_some_and(|&b| b.is_ascii_alphabetic() || matches!(b, b'/' | b'!' | b'?'));
        if !opens {
            i += 1;
            continue;
        }
        let Some(end) = tag_end(bytes, i + 1) else {
            break;
        };
        let tag = parse_tag(&html[i + 1..end]);
        i = end + 1;

        let raw_text = !tag.closing
            && !html[..end].ends_with('/')
            && (tag.name == "script" || tag.name == "style");
        if raw_text {
            let close = format!("</{}", tag.name);
            let (content_end, resume) = raw_text_end(bytes, i, close.as_bytes());
            if tag.name == "style" {
                events.push(Event::Tag(tag));
                events.push(Event::StyleText(html[i..content_end].to_string()));
            } else {
                events.push(Event::Tag(tag));
            }
            i = resume;
            continue;
        }
        events.push(Event::Tag(tag));
    }
    events
}

/// (end of raw text, resume position after the closing tag).
fn raw_text_end(bytes: &[u8], from: usize, close: &[u8]) -> (usize, usize) {
    let mut search = from;
    while let Some(p) = find_from_ci(bytes, search, close) {
        let after = p + close.len();
        if bytes.get(after).is_none_or(|b| !b.is_ascii_alphanumeric()) {
            let resume = tag_end(bytes, after).map_or(bytes.len(), |e| e + 1);
            return (p, resume);
        }
        search = after;
    }
    (bytes.len(), bytes.len())
}

fn parse_tag(inner: &str) -> Tag {
    let (closing, rest) = match inner.strip_prefix('/') {
        Some(r) => (true, r),
        None => (false, inner),
    };
    let name_len = rest
        .bytes()
        .take_while(|b| b.is_ascii_alphanumeric())
        .count();
    let name = rest[..name_len].to_ascii_lowercase();
    Tag {
        name,
        closing,
        attrs: parse_attrs(&rest[name_len..]),
    }
}

fn parse_attrs(s: &str) -> Vec<Attr> {
    let b = s.as_bytes();
    let mut attrs = Vec::new();
    let mut i = 0;
    let is_sep = |c: u8| c.is_ascii_whitespace() || c == b'/';

    while i < b.len() {
        while i < b.len() && is_sep(b[i]) {
            i += 1;
        }
        let start = i;
        while i < b.len() && !is_sep(b[i]) && b[i] != b'=' {
            i += 1;
        }
        if start == i {
            if i < b.len() {
                // Stray '=' without a name.
                i += 1;
            }
            continue;
        }
        let name = s[start..i].to_ascii_lowercase();
        let mut j = i;
        while j < b.len() && b[j].is_ascii_whitespace() {
            j += 1;
        }
        if j < b.len() && b[j] == b'=' {
            j += 1;
            while j < b.len() && b[j].is_ascii_whitespace() {
                j += 1;
            }
            let (value, next) = read_value(s, j);
            attrs.push(Attr {
                name,
                value: Some(value),
            });
            i = next;
        } else {
            attrs.push(Attr { name, value: None });
        }
    }
    attrs
}

fn read_value(s: &str, at: usize) -> (String, usize) {
    let b = s.as_bytes();
    match b.get(at) {
        Some(&q) if q == b'"' || q == b'\'' => {
            let end = b[at + 1..]
                .iter()
                .position(|&c| c == q)
                .map_or(b.len(), |p| at + 1 + p);
            (s[at + 1..end].to_string(), (end + 1).min(b.len()))
        }
        Some(_) => {
            let end = b[at..]
                .iter()
                .position(|c| c.is_ascii_whitespace())
                .map_or(b.len(), |p| at + p);
            (s[at..end].to_string(), end)
        }
        None => (String::new(), at),
    }
}

/// Values of the `color`/`background-color` declarations in CSS text.
pub fn css_color_declarations(css: &str) -> impl Iterator<Item = &str> {
    css.split([';', '{', '}']).filter_map(|decl| {
        let (prop, value) = decl.split_once(':')?;
        let prop = prop.trim().to_ascii_lowercase();
        (prop == "color" || prop == "background-color").then_some(value)
    })
}

pub const HTML_COLOR_ATTRS: [&str; 6] = ["color", "bgcolor", "text", "link", "vlink", "alink"];

/// Every color declaration value: CSS in style attributes and style
/// elements, plus the legacy HTML color attributes.
pub fn color_values(events: &[Event]) -> Vec<String> {
    let mut out = Vec::new();
    for ev in events {
        match ev {
            Event::Tag(tag) if !tag.closing => {
                for attr in &tag.attrs {
                    let Some(v) = &attr.value else { continue };
                    if attr.name == "style" {
                        out.extend(css_color_declarations(v).map(str::to_string));
                    } else if HTML_COLOR_ATTRS.contains(&attr.name.as_str()) {
                        out.push(v.clone());
                    }
                }
            }
            Event::StyleText(css) => out.extend(css_color_declarations(css).map(str::to_string)),
            Event::Tag(_) => {}
        }
    }
    out
}

pub fn is_white(value: &str) -> bool {
    let mut v: String = value
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '"' && *c != '\'')
        .collect::<String>()
        .to_ascii_lowercase();
    if let Some(stripped) = v.strip_suffix("!important") {
        v = stripped.to_string();
    }
    matches!(v.as_str(), "white" | "#fff" | "#ffffff" | "rgb(255,255,255)")
}
