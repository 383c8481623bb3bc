#![allow(dead_code)]
//! Hand-built messages with an independent regex feature scanner and
//! frozen expected vectors.

use base64::Engine as _;
use regex::Regex;
use spamkit_core::{extract, parse_eml, FEATURE_COUNT};

#[derive(Clone, Copy)]
pub enum Cte {
    Plain,
    Qp,
    B64,
}

pub struct Case {
    pub name: &'static str,
    pub subject: &'static str,
    pub headers: &'static [&'static str],
    pub html: bool,
    pub cte: Cte,
    pub body: &'static str,
}

const fn case(name: &'static str, subject: &'static str, body: &'static str) -> Case {
    Case { name, subject, headers: &[], html: false, cte: Cte::Plain, body }
}

const fn html(name: &'static str, subject: &'static str, body: &'static str) -> Case {
    Case { name, subject, headers: &[], html: true, cte: Cte::Plain, body }
}

const VIAGRA: &str =
    "GET<!-- banana -->V<!-- 45-->I<!-- wumpus -->A<!-- dskfj -->G <!-- adf -->R<!-- free -->A";

pub fn cases() -> Vec<Case> {
    vec![
        case("empty", "", ""),
        case("plain_note", "Lunch on friday", "Hi Bob,\nare we still on for lunch?\nAlice\n"),
        case("repeat_bang", "Act now!!!", "hello"),
        case("repeat_letters", "Sooo good", "hello"),
        case("repeat_spaces_only", "a   b", "hello"),
        case("shouting", "FREE CASH NOW", "hello"),
        case("shouting_mixed", "FREE cash NOW!! A", "hello"),
        case("long_token", "internationalization party", "hello"),
        case("long_url_token", "see www.example-offers.example today", "hello"),
        case("rare_letters", "Jazz quiz tonight", "hello"),
        case("rare_single", "Xmas kit", "hello"),
        case("no_vowels", "Thx frm my gym", "hello"),
        case("inner_non_letter", "V1agra c-a-s-h e-mail", "hello"),
        case("trailing_punct_only", "CASH!!! now?", "hello"),
        case("apostrophes", "don't won't 'quoted'", "hello"),
        case("re_prefix", "Re: RE: Fwd: notes", "hello"),
        Case { headers: &["X-Priority: 1"], ..case("priority_high", "Hi", "x") },
        Case { headers: &["X-Priority: 3 (Normal)"], ..case("priority_normal", "Hi", "x") },
        Case { headers: &["Importance: high"], ..case("importance_high", "Hi", "x") },
        Case { headers: &["Priority: normal", "Importance: Normal"], ..case("priority_words_normal", "Hi", "x") },
        Case { headers: &["Priority: urgent"], ..case("priority_urgent", "Hi", "x") },
        html("html_minimal", "Hello", "<html><body><p>hello there</p></body></html>"),
        case("forwarded_headers", "Fwd: plan", "see below\nFrom: Carol <c@example.org>\nTo: dave@example.com\n\nbody"),
        case("from_only", "note", "From: a@example.org only"),
        case("lowercase_from_to", "note", "from: a\nto: b"),
        html("comment_split", "GET IT", VIAGRA),
        html("comment_plain", "x", "<p>a <!-- one --> b <!-- two -->c</p>"),
        html("hrefs", "links", "<a href=\"http://a.example/x\">a</a> <a HREF='http://b.example/p?q=1&r=2'>b</a> <a href=http://c.example/>c</a>"),
        html("noisy_hrefs", "links", "<a href=\"mailto:x@y.example\">m</a><a href=\"http://h.example/%7Efoo\">p</a><a href=\"http://plain.example/\">q</a>"),
        html("clickable_images", "pics", "<a href=\"http://x.example/\"><img src=\"a.gif\"><IMG SRC=b.gif></a><img src=\"c.gif\">"),
        html("image_no_anchor", "pics", "<p><img src=\"a.gif\"></p><a href=\"http://x.example/\">t</a>"),
        html("invisible_font", "buy", "<font color=\"#FFFFFF\">hidden words here</font> visible"),
        html("invisible_css", "buy", "<span style=\"font-size:1px; color: white\">hidden</span>"),
        html("invisible_rgb", "buy", "<div style=\"color:rgb(255, 255, 255)\">x</div>"),
        html("bgcolor_white", "news", "<body bgcolor=\"#ffffff\" text=\"#000000\" link=blue vlink=purple>hi</body>"),
        html("color_burst", "colors", "<font color=red>a</font><font color=\"#00ff00\">b</font><b style=\"background-color:#ff0;color:#00f\">c</b>"),
        html("style_element", "css", "<style>p { color: red } a:hover{color:#fff} td{border-color:red}</style><p>x</p>"),
        html("script_tag", "js", "<script type=\"text/javascript\">document.write('x')</script><p>hi</p>"),
        html("js_href", "js", "<a href=\"javascript:void(0)\">x</a>"),
        html("onload", "js", "<body onLoad=\"go()\"><p>x</p></body>"),
        html("link_stylesheet", "css", "<link rel=\"stylesheet\" href=\"s.css\"><p>x</p>"),
        html("table", "layout", "<TABLE width=600><tr><td>cell</td></tr></table>"),
        case("fake_text", "hello", "xkzqjwrtpl bcdfghjklmnpqrstvwxz normal words strength rhythms"),
        case("long_words", "hello", "antidisestablishmentarianism counterrevolutionaries short"),
        case("only_numbers", "123", "123 456 $$$"),
        html("entities", "amp", "<p>fish &amp; chips &lt;b&gt; &#74;&#65;&#90;&#90;</p>"),
        html("kitchen_sink", "WIN BIG!!!",
            "<html><head><style>body{background-color:#FFFFFF}</style></head><body onload=\"x()\">\
<table><tr><td><a href=\"http://1.2.3.4/c?a=1&b=2\"><img src=x.gif></a>\
<font color=white>qqq zzz</font> FR<!-- x -->EE</td></tr></table></body></html>"),
        Case { cte: Cte::Qp, ..html("qp_html", "Special offer", "<p style=\"color:#ff0000\">Big =\nsavings</p><a href=\"http://x.example/a=1\">go</a>") },
        Case { cte: Cte::B64, ..html("base64_html", "Special offer", "<table><tr><td><font color=\"#FFF\">secret</font></td></tr></table>") },
        Case { cte: Cte::B64, ..case("base64_plain", "Quarterly report", "From: boss\nTo: team\nPlease review.") },
    ]
}

fn qp_encode(text: &str) -> String {
    let mut out = String::new();
    for b in text.bytes() {
        match b {
            b'\n' => out.push('\n'),
            b'=' => out.push_str("=3D"),
            33..=126 | b' ' => out.push(b as char),
            _ => out.push_str(&format!("={b:02X}")),
        }
    }
    out
}

pub fn build(c: &Case) -> Vec<u8> {
    let mut s = String::from("From: sender@example.org\nTo: rcpt@example.com\n");
    s.push_str(&format!("Subject: {}\n", c.subject));
    for h in c.headers {
        s.push_str(h);
        s.push('\n');
    }
    let ct = if c.html { "text/html" } else { "text/plain" };
    s.push_str(&format!("Content-Type: {ct}; charset=us-ascii\n"));
    let body = match c.cte {
        Cte::Plain => c.body.to_string(),
        Cte::Qp => {
            s.push_str("Content-Transfer-Encoding: quoted-printable\n");
            qp_encode(c.body)
        }
        Cte::B64 => {
            s.push_str("Content-Transfer-Encoding: base64\n");
            base64::engine::general_purpose::STANDARD.encode(c.body)
        }
    };
    s.push('\n');
    s.push_str(&body);
    s.into_bytes()
}

/// Reference scanner over the plain subject, header list and decoded body.
pub struct Oracle {
    token: Regex,
    word: Regex,
    shouted: Regex,
    rare2: Regex,
    inner: Regex,
    comment: Regex,
    script: Regex,
    style_el: Regex,
    tag: Regex,
    href: Regex,
    href_val: Regex,
    anchor: Regex,
    img: Regex,
    html_color: Regex,
    style_attr: Regex,
    css_color: Regex,
    handler: Regex,
    css_link: Regex,
}

impl Oracle {
    pub fn new() -> Self {
        let r = |p: &str| Regex::new(p).unwrap();
        Oracle {
            token: r(r"[^ \t\n\r\x0C\x0B]+"),
            word: r(r"^[A-Za-z']*[A-Za-z][A-Za-z']*$"),
            shouted: r(r"^[^a-z]*[A-Z][^a-z]*$"),
            rare2: r(r"(?i)[jkqxz].*[jkqxz]"),
            inner: r(r"[^A-Za-z'].*[A-Za-z']"),
            comment: r(r"(?s)<!--.*?(-->|\z)"),
            script: r(r"(?is)<script\b.*?(</script\s*>|\z)"),
            style_el: r(r"(?is)<style\b[^>]*>(.*?)(</style\s*>|\z)"),
            tag: r(r"<[A-Za-z/!?][^>]*>"),
            href: r(r"(?i)href="),
            href_val: r(r#"(?i)href=(?:"([^"]*)"?|'([^']*)'?|([^\s>]*))"#),
            anchor: r(r"(?is)<a\b[^>]*>(.*?)(</a\s*>|\z)"),
            img: r(r"(?i)<img\b"),
            html_color: r(r#"(?i)\s(?:color|bgcolor|text|link|vlink|alink)\s*=\s*("[^"]*"|'[^']*'|[^\s>]+)"#),
            style_attr: r(r#"(?i)\sstyle\s*=\s*("[^"]*"|'[^']*'|[^\s>]+)"#),
            css_color: r(r"(?i)(?:^|[;{}])\s*(?:background-)?color\s*:([^;{}]*)"),
            handler: r(r"(?i)\son[a-z]+\s*="),
            css_link: r(r#"(?i)<link\b[^>]*\brel\s*=\s*["']?[^"'>]*stylesheet"#),
        }
    }

    fn strip(&self, html: &str) -> String {
        let s = self.comment.replace_all(html, "");
        let s = self.script.replace_all(&s, "");
        let s = self.style_el.replace_all(&s, "");
        let s = self.tag.replace_all(&s, "");
        let mut s = s
            .replace("&lt;", "<")
            .replace("&gt;", ">")
            .replace("&quot;", "\"")
            .replace("&apos;", "'")
            .replace("&nbsp;", "\u{a0}");
        let numeric = Regex::new(r"&#([0-9]+);").unwrap();
        s = numeric
            .replace_all(&s, |c: &regex::Captures| char::from_u32(c[1].parse().unwrap()).unwrap().to_string())
            .into_owned();
        s.replace("&amp;", "&")
    }

    fn colors(&self, body: &str) -> Vec<String> {
        let mut out = Vec::new();
        let unquote = |v: &str| v.trim_matches(|c| c == '"' || c == '\'').to_string();
        let uncommented = self.comment.replace_all(body, "");
        let visible = self.script.replace_all(&uncommented, "");
        for t in self.tag.find_iter(&visible) {
            let t = t.as_str();
            if t.starts_with("</") {
                continue;
            }
            for c in self.html_color.captures_iter(t) {
                out.push(unquote(&c[1]));
            }
            for c in self.style_attr.captures_iter(t) {
                for d in self.css_color.captures_iter(&unquote(&c[1])) {
                    out.push(d[1].to_string());
                }
            }
        }
        for c in self.style_el.captures_iter(&visible) {
            for d in self.css_color.captures_iter(&c[1]) {
                out.push(d[1].to_string());
            }
        }
        out
    }

    pub fn features(&self, c: &Case) -> [f64; FEATURE_COUNT] {
        let mut f = [0.0; FEATURE_COUNT + 1];
        let toks: Vec<&str> = self.token.find_iter(c.subject).map(|m| m.as_str()).collect();
        let chars: Vec<char> = c.subject.chars().collect();
        f[1] = chars.windows(3).any(|w| w[0] == w[1] && w[1] == w[2] && !w[0].is_whitespace()) as u8 as f64;
        let count = |p: &dyn Fn(&str) -> bool| toks.iter().filter(|t| p(t)).count() as f64;
        let vowel = |t: &str| t.chars().any(|ch| "aeiouAEIOU".contains(ch));
        f[2] = count(&|t| t.len() >= 2 && self.shouted.is_match(t));
        f[3] = count(&|t| t.chars().count() >= 15);
        f[4] = count(&|t| self.rare2.is_match(t));
        f[5] = count(&|t| self.word.is_match(t) && t.len() >= 2 && !vowel(t));
        f[6] = count(&|t| self.inner.is_match(t));

        let normal = ["normal", "medium", "3", "3 (normal)", "none"];
        f[7] = c.headers.iter().any(|h| {
            let (name, value) = h.split_once(':').unwrap();
            let v = value.trim().to_lowercase();
            ["x-priority", "priority", "importance"].contains(&name.to_lowercase().as_str()) && !normal.contains(&v.as_str())
        }) as u8 as f64;
        f[8] = c.html as u8 as f64;

        let body = c.body;
        let stripped = self.strip(body);
        let words: Vec<&str> = self.token.find_iter(&stripped).map(|m| m.as_str()).filter(|t| self.word.is_match(t)).collect();
        if !words.is_empty() {
            let n = words.len() as f64;
            f[9] = words.iter().filter(|w| w.len() >= 7 && !vowel(w)).count() as f64 / n;
            f[10] = words.iter().filter(|w| self.rare2.is_match(w)).count() as f64 / n;
            f[11] = words.iter().filter(|w| w.len() >= 15).count() as f64 / n;
        }
        f[12] = (body.contains("From:") && body.contains("To:")) as u8 as f64;
        f[13] = body.matches("<!--").count() as f64;
        f[14] = self.href.find_iter(body).count() as f64;
        let scannable = self.script.replace_all(&self.comment.replace_all(body, ""), "").into_owned();
        f[15] = self.anchor.captures_iter(&scannable).map(|c| self.img.find_iter(&c[1]).count()).sum::<usize>() as f64;
        let colors = self.colors(body);
        let white = |v: &str| {
            let v: String = v.chars().filter(|c| !c.is_whitespace() && *c != '"' && *c != '\'').collect::<String>().to_lowercase();
            let v = v.trim_end_matches("!important");
            ["white", "#fff", "#ffffff", "rgb(255,255,255)"].contains(&v)
        };
        f[16] = colors.iter().any(|v| white(v)) as u8 as f64;
        f[17] = self
            .href_val
            .captures_iter(body)
            .filter(|c| {
                let v = c.get(1).or(c.get(2)).or(c.get(3)).map_or("", |m| m.as_str());
                v.chars().any(|ch| ch.is_ascii_digit() || "&%@".contains(ch))
            })
            .count() as f64;
        f[18] = colors.len() as f64;
        let lower = body.to_lowercase();
        let in_tags = |re: &Regex| self.tag.find_iter(&scannable).any(|t| re.is_match(t.as_str()));
        f[19] = (lower.contains("<script") || lower.contains("javascript:") || in_tags(&self.handler)) as u8 as f64;
        f[20] = (lower.contains("<style") || in_tags(&self.style_attr) || self.css_link.is_match(body)) as u8 as f64;
        f[21] = lower.contains("<table") as u8 as f64;
        f[1..].try_into().unwrap()
    }
}

#[rustfmt::skip]
pub const EXPECTED: &[(&str, [f64; FEATURE_COUNT])] = &[
    ("empty", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("plain_note", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("repeat_bang", [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("repeat_letters", [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("repeat_spaces_only", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("shouting", [0.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("shouting_mixed", [0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("long_token", [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("long_url_token", [1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("rare_letters", [0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("rare_single", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("no_vowels", [0.0, 0.0, 0.0, 0.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("inner_non_letter", [0.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("trailing_punct_only", [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("apostrophes", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("re_prefix", [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("priority_high", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("priority_normal", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("importance_high", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("priority_words_normal", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("priority_urgent", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("html_minimal", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("forwarded_headers", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("from_only", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("lowercase_from_to", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("comment_split", [0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 6.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("comment_plain", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("hrefs", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]),
    ("noisy_hrefs", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0]),
    ("clickable_images", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("image_no_anchor", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("invisible_font", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0]),
    ("invisible_css", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]),
    ("invisible_rgb", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]),
    ("bgcolor_white", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 4.0, 0.0, 0.0, 0.0]),
    ("color_burst", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0, 0.0, 1.0, 0.0]),
    ("style_element", [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 2.0, 0.0, 1.0, 0.0]),
    ("script_tag", [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]),
    ("js_href", [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0]),
    ("onload", [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]),
    ("link_stylesheet", [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]),
    ("table", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
    ("fake_text", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.3333333333333333, 0.16666666666666666, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("long_words", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.6666666666666666, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("only_numbers", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("entities", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.3333333333333333, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("kitchen_sink", [1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.6666666666666666, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0]),
    ("qp_html", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0]),
    ("base64_html", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0]),
    ("base64_plain", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
];

pub fn extracted(c: &Case) -> [f64; FEATURE_COUNT] {
    extract(&parse_eml(&build(c)).unwrap()).values
}

/// Check every case against the oracle and the frozen table; returns the
/// number of cases or the first disagreement.
pub fn run_suite() -> Result<usize, String> {
    let oracle = Oracle::new();
    let cs = cases();
    if EXPECTED.len() != cs.len() {
        return Err(format!("{} cases but {} frozen vectors", cs.len(), EXPECTED.len()));
    }
    for (c, (name, expected)) in cs.iter().zip(EXPECTED) {
        let got = extracted(c);
        if c.name != *name || got != oracle.features(c) || got != *expected {
            return Err(format!("case {} disagrees: {got:?}", c.name));
        }
    }
    Ok(cs.len())
}
