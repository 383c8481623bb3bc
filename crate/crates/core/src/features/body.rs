use super::markup::{self, Event};
use super::word_proportions;
use crate::email::EmailMessage;
use crate::tokenizer::strip_html;

/// f9..f21. Word proportions use the HTML-stripped body; markup features
/// use the decoded body with tags intact.
pub fn extract_body_features(msg: &EmailMessage) -> [f64; 13] {
    body_features(&msg.raw_body)
}

pub(crate) fn body_features(raw: &str) -> [f64; 13] {
    let [no_vowel, rare_letters, long_words] = word_proportions(&strip_html(raw));
    let lower = raw.to_ascii_lowercase();
    let events = markup::scan(raw);
    let colors = markup::color_values(&events);
    let hrefs = href_values(raw, &lower);

    let flag = |b: bool| f64::from(u8::from(b));
    [
        no_vowel,
        rare_letters,
        long_words,
        flag(raw.contains("From:") && raw.contains("To:")),
        raw.matches("<!--").count() as f64,
        hrefs.len() as f64,
        clickable_images(&events) as f64,
        flag(colors.iter().any(|c| markup::is_white(c))),
        hrefs
            .iter()
            .filter(|v| v.chars().any(|c| c.is_ascii_digit() || matches!(c, '&' | '%' | '@')))
            .count() as f64,
        colors.len() as f64,
        flag(uses_javascript(&lower, &events)),
        flag(uses_css(&lower, &events)),
        flag(lower.contains("<table")),
    ]
}

/// The value following every case-insensitive `href=`: up to the matching
/// quote when quoted, otherwise up to whitespace or `>`.
fn href_values<'a>(raw: &'a str, lower: &str) -> Vec<&'a str> {
    lower
        .match_indices("href=")
        .map(|(pos, m)| {
            let start = pos + m.len();
            let rest = &raw[start..];
            match rest.chars().next() {
                Some(q @ ('"' | '\'')) => {
                    let inner = &rest[1..];
                    inner.find(q).map_or(inner, |e| &inner[..e])
                }
                _ => {
                    let end = rest
                        .find(|c: char| c.is_ascii_whitespace() || c == '>')
                        .unwrap_or(rest.len());
                    &rest[..end]
                }
            }
        })
        .collect()
}

fn clickable_images(events: &[Event]) -> usize {
    let mut in_anchor = false;
    let mut count = 0;
    for ev in events {
        let Event::Tag(tag) = ev else { continue };
        match (tag.name.as_str(), tag.closing) {
            ("a", false) => in_anchor = true,
            ("a", true) => in_anchor = false,
            ("img", false) if in_anchor => count += 1,
            _ => {}
        }
    }
    count
}

fn is_event_handler(name: &str) -> bool {
    name.len() > 2 && name.starts_with("on") && name[2..].bytes().all(|b| b.is_ascii_alphabetic())
}

fn uses_javascript(lower: &str, events: &[Event]) -> bool {
    lower.contains("<script")
        || lower.contains("javascript:")
        || events.iter().any(|ev| match ev {
            Event::Tag(tag) => tag
                .attrs
                .iter()
                .any(|a| a.value.is_some() && is_event_handler(&a.name)),
            Event::StyleText(_) => false,
        })
}

fn uses_css(lower: &str, events: &[Event]) -> bool {
    lower.contains("<style")
        || events.iter().any(|ev| match ev {
            Event::Tag(tag) => {
                tag.attrs.iter().any(|a| a.name == "style" && a.value.is_some())
                    || (tag.name == "link"
                        && !tag.closing
                        && tag.attr("rel").and_then(|a| a.value.as_deref()).is_some_and(|v| {
                            v.to_ascii_lowercase().contains("stylesheet")
                        }))
            }
            Event::StyleText(_) => false,
        })
}
