//! Seeded synthetic spam/ham corpus.
//!
//! Spam messages are built from a keyword pitch and decorated with
//! obfuscation tricks, each applied independently with the probability in
//! [`GenSpec::trick_mix`]. Ham messages are plain-text notes written from a
//! fixed word list; with the probabilities in [`GenSpec::ham_mix`] a ham
//! message is instead an HTML newsletter (`color_burst`), carries a
//! forwarded header block, or raises its priority. Both classes draw their
//! subjects from the same pool so that subject-line features stay weak.
//!
//! Generation is a pure function of the spec: no clock, no hostnames, and
//! a single ChaCha stream consumed in message order.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use base64::Engine as _;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifiers::Label;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trick {
    CommentSplit,
    InvisibleInk,
    HtmlNumbers,
    PriorityBoost,
    HtmlBody,
    NoisyLinks,
    ColorBurst,
    ScriptUse,
    TableLayout,
    FakeText,
}

impl Trick {
    pub const ALL: [Trick; 10] = [
        Trick::CommentSplit,
        Trick::InvisibleInk,
        Trick::HtmlNumbers,
        Trick::PriorityBoost,
        Trick::HtmlBody,
        Trick::NoisyLinks,
        Trick::ColorBurst,
        Trick::ScriptUse,
        Trick::TableLayout,
        Trick::FakeText,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Trick::CommentSplit => "comment_split",
            Trick::InvisibleInk => "invisible_ink",
            Trick::HtmlNumbers => "html_numbers",
            Trick::PriorityBoost => "priority_boost",
            Trick::HtmlBody => "html_body",
            Trick::NoisyLinks => "noisy_links",
            Trick::ColorBurst => "color_burst",
            Trick::ScriptUse => "script_use",
            Trick::TableLayout => "table_layout",
            Trick::FakeText => "fake_text",
        }
    }

    /// Spam-side default probability.
    pub fn default_spam_probability(self) -> f64 {
        match self {
            Trick::CommentSplit => 0.45,
            Trick::InvisibleInk => 0.35,
            Trick::HtmlNumbers => 0.3,
            Trick::PriorityBoost => 0.4,
            Trick::HtmlBody => 0.95,
            Trick::NoisyLinks => 0.6,
            Trick::ColorBurst => 0.55,
            Trick::ScriptUse => 0.3,
            Trick::TableLayout => 0.5,
            Trick::FakeText => 0.4,
        }
    }
}

impl fmt::Display for Trick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Trick {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Trick::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidSpec(format!("unknown trick `{s}`")))
    }
}

/// Ham-side variation, independent of the spam tricks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamMix {
    /// HTML newsletter with color declarations.
    pub color_burst: f64,
    /// Forwarded message with a quoted `From:`/`To:` block.
    pub forwarded: f64,
    /// Raised `Importance`/`X-Priority` header.
    pub priority: f64,
}

impl Default for HamMix {
    fn default() -> Self {
        HamMix {
            color_burst: 0.10,
            forwarded: 0.25,
            priority: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n_total: usize,
    pub spam_ratio: f64,
    pub seed: u64,
    pub trick_mix: BTreeMap<Trick, f64>,
    pub ham_mix: HamMix,
}

impl GenSpec {
    pub fn new(n_total: usize, spam_ratio: f64, seed: u64) -> Self {
        GenSpec {
            n_total,
            spam_ratio,
            seed,
            trick_mix: Trick::ALL.iter().map(|&t| (t, t.default_spam_probability())).collect(),
            ham_mix: HamMix::default(),
        }
    }

    pub fn probability(&self, trick: Trick) -> f64 {
        self.trick_mix.get(&trick).copied().unwrap_or(0.0)
    }

    /// `(spam, ham)` message counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let spam = ((self.n_total as f64) * self.spam_ratio).round() as usize;
        let spam = spam.clamp(1, self.n_total.saturating_sub(1).max(1));
        (spam, self.n_total - spam)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_total < 2 {
            return Err(Error::InvalidSpec(format!("n_total must be at least 2, got {}", self.n_total)));
        }
        if !(self.spam_ratio > 0.0 && self.spam_ratio < 1.0) {
            return Err(Error::InvalidSpec(format!("spam ratio must lie in (0, 1), got {}", self.spam_ratio)));
        }
        let ham = [
            ("ham color_burst", self.ham_mix.color_burst),
            ("ham forwarded", self.ham_mix.forwarded),
            ("ham priority", self.ham_mix.priority),
        ];
        let spam = self.trick_mix.iter().map(|(t, &p)| (t.as_str(), p));
        for (name, p) in spam.chain(ham) {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidSpec(format!("probability for {name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedMessage {
    pub id: String,
    pub label: Label,
    /// Tricks applied; empty for ham.
    pub tricks: Vec<Trick>,
    pub bytes: Vec<u8>,
}

impl GeneratedMessage {
    /// Path relative to the corpus root.
    pub fn relative_path(&self) -> String {
        format!("{}/{}.eml", self.label, self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub id: String,
    pub path: String,
    pub label: Label,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
}

impl Manifest {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,path,label\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.id, r.path, r.label));
        }
        out
    }
}

/// Generate the corpus in memory: spam first, then ham.
pub fn generate_messages(spec: &GenSpec) -> Result<Vec<GeneratedMessage>> {
    spec.validate()?;
    let (n_spam, n_ham) = spec.class_counts();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.n_total);
    for i in 1..=n_spam {
        let id = format!("spam-{i:04}");
        let (bytes, tricks) = spam_message(&mut rng, spec, &id);
        out.push(GeneratedMessage { id, label: Label::Spam, tricks, bytes });
    }
    for i in 1..=n_ham {
        let id = format!("ham-{i:04}");
        let bytes = ham_message(&mut rng, &spec.ham_mix, &id);
        out.push(GeneratedMessage { id, label: Label::Ham, tricks: Vec::new(), bytes });
    }
    Ok(out)
}

/// Write `out/spam/*.eml`, `out/ham/*.eml` and `out/manifest.csv`. The
/// manifest lists files in path order.
pub fn generate(spec: &GenSpec, out: &Path) -> Result<Manifest> {
    let messages = generate_messages(spec)?;
    for dir in ["spam", "ham"] {
        fs::create_dir_all(out.join(dir))?;
    }
    let mut rows = Vec::with_capacity(messages.len());
    for m in &messages {
        let rel = m.relative_path();
        fs::write(out.join(PathBuf::from(&rel)), &m.bytes)?;
        rows.push(ManifestRow { id: m.id.clone(), path: rel, label: m.label });
    }
    rows.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = Manifest { rows };
    fs::write(out.join("manifest.csv"), manifest.to_csv())?;
    Ok(manifest)
}

const COMMON_WORDS: &str = "the of and to in is that for it as was with on be at by this had not are \
but from or have an they which one you were her all she there would their we him been has when who will \
more no if out so said what up its about into than them can only other new some could time these two may \
then do first any now such like our over man me even most made after also did many before must through \
back years where much your way well down should because each just those people how too little state good \
very make world still own see men work long get here between both life being under never day same another \
know while last might us great old year off come since against go came right used take three states himself \
few house use during without again place around however home small found thought went say part once general \
high upon school every does got united left number course war until always away something fact though water \
less public put think almost hand enough far took head yet government system better set told nothing night \
end why called didn't eyes find going look asked later knew point next program city business give group toward \
young days let room president side social present given several order national possible rather second face \
per among form important often things looked early white case john become large big need four within felt \
along children saw best church ever least power development light thing seemed family interest want members \
mind country area others done turned although open problem meeting report budget schedule project team draft \
review office agenda minutes lunch thanks question update notes weekend attached friday monday tuesday \
thursday wednesday morning afternoon conference travel plan proposal summary";

const PITCH_WORDS: &str = "free cash offer limited exclusive discount cheap save money price deal order \
today now instant approval guaranteed winner prize bonus credit loan mortgage rates lowest online pharmacy \
pills meds weight loss amazing results click here unsubscribe special promotion buy best quality satisfaction \
risk act fast urgent investment income earn extra home opportunity selected congratulations claim reward";

const KEYWORDS: [&str; 14] = [
    "VIAGRA", "CASH", "FREE", "MORTGAGE", "PHARMACY", "CIALIS", "WINNER", "LOAN", "CREDIT", "PRIZE",
    "BONUS", "DISCOUNT", "VALIUM", "ROLEX",
];

const FIRST_NAMES: [&str; 16] = [
    "alice", "bob", "carol", "dave", "erin", "frank", "grace", "heidi", "ivan", "judy", "mallory",
    "nina", "oscar", "peggy", "rupert", "sybil",
];

const MONTHS: [&str; 12] = ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"];

fn words(list: &'static str) -> Vec<&'static str> {
    list.split_whitespace().collect()
}

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items.choose(rng).copied().unwrap_or("")
}

fn sentence<R: Rng>(rng: &mut R, vocab: &[&str], min: usize, max: usize) -> String {
    let n = rng.gen_range(min..=max);
    let mut s: Vec<String> = (0..n).map(|_| pick(rng, vocab).to_string()).collect();
    if let Some(first) = s.first_mut() {
        *first = capitalize(first);
    }
    format!("{}.", s.join(" "))
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Nonsense word heavy in consonants and rare letters.
fn gibberish<R: Rng>(rng: &mut R) -> String {
    const LETTERS: &[u8] = b"bcdfghjklmnpqrstvwxzqxzjk";
    const VOWELS: &[u8] = b"aeiou";
    let len = rng.gen_range(6..=18);
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.12) {
                VOWELS[rng.gen_range(0..VOWELS.len())] as char
            } else {
                LETTERS[rng.gen_range(0..LETTERS.len())] as char
            }
        })
        .collect()
}

struct Headers {
    lines: Vec<String>,
}

impl Headers {
    fn new<R: Rng>(rng: &mut R, id: &str, from_domain: &str, subject: &str) -> Headers {
        let sender = pick(rng, &FIRST_NAMES);
        let receiver = pick(rng, &FIRST_NAMES);
        let date = format!(
            "{:02} {} 2008 {:02}:{:02}:{:02} +0000",
            rng.gen_range(1..=28),
            MONTHS[rng.gen_range(0..12)],
            rng.gen_range(0..24),
            rng.gen_range(0..60),
            rng.gen_range(0..60)
        );
        Headers {
            lines: vec![
                format!("From: {} <{sender}@{from_domain}>", capitalize(sender)),
                format!("To: {receiver}@example.com"),
                format!("Subject: {subject}"),
                format!("Date: {date}"),
                format!("Message-ID: <{id}@corpus.example>"),
                "MIME-Version: 1.0".to_string(),
            ],
        }
    }

    fn push(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn finish(self, body: &str) -> Vec<u8> {
        let mut s = self.lines.join("\n");
        s.push_str("\n\n");
        s.push_str(body);
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s.into_bytes()
    }
}

/// Per-class subject-trick probability; the same pool serves both classes.
fn subject<R: Rng>(rng: &mut R, label: Label) -> String {
    let common = words(COMMON_WORDS);
    let pitch = words(PITCH_WORDS);
    let p = match label {
        Label::Spam => 0.2,
        Label::Ham => 0.1,
    };
    let vocab_pitch = match label {
        Label::Spam => 0.5,
        Label::Ham => 0.15,
    };
    let n = rng.gen_range(2..=6);
    let mut toks: Vec<String> = (0..n)
        .map(|_| {
            if rng.gen_bool(vocab_pitch) {
                pick(rng, &pitch).to_string()
            } else {
                pick(rng, &common).to_string()
            }
        })
        .collect();
    toks[0] = capitalize(&toks[0]);
    if rng.gen_bool(p) {
        let k = rng.gen_range(0..toks.len());
        toks[k] = toks[k].to_uppercase();
    }
    if rng.gen_bool(p) {
        let k = rng.gen_range(0..toks.len());
        toks[k] = ["ASAP", "FYI", "PLS", "THX", "MTG", "XMAS"][rng.gen_range(0..6)].to_string();
    }
    if rng.gen_bool(p) {
        toks.push(["jazz", "quiz", "kickoff", "jukebox", "zucchini", "jackpot"][rng.gen_range(0..6)].to_string());
    }
    if rng.gen_bool(p) {
        let k = rng.gen_range(0..toks.len());
        toks[k] = ["fr33", "c-a-s-h", "v1agra", "2nd-round", "q&a", "e-mail"][rng.gen_range(0..6)].to_string();
    }
    if rng.gen_bool(p) {
        toks.push(["recommendations", "internationalization", "www.deals-online.example", "administrative"][rng.gen_range(0..4)].to_string());
    }
    let mut s = toks.join(" ");
    if rng.gen_bool(p) {
        s.push_str(["!!!", "???", " $$$", "..."][rng.gen_range(0..4)]);
    }
    if rng.gen_bool(match label {
        Label::Spam => 0.1,
        Label::Ham => 0.3,
    }) {
        s = format!("Re: {s}");
    }
    s
}

fn comment_split<R: Rng>(rng: &mut R, word: &str) -> String {
    let filler = words(COMMON_WORDS);
    let chars: Vec<char> = word.chars().collect();
    let mut out = String::new();
    for (i, c) in chars.iter().enumerate() {
        out.push(*c);
        if i + 1 < chars.len() && rng.gen_bool(0.6) {
            out.push_str(&format!("<!-- {} -->", pick(rng, &filler)));
        }
    }
    if !out.contains("<!--") {
        let mid = chars.len() / 2;
        out = format!(
            "{}<!-- {} -->{}",
            chars[..mid].iter().collect::<String>(),
            pick(rng, &filler),
            chars[mid..].iter().collect::<String>()
        );
    }
    out
}

fn html_numbers(word: &str) -> String {
    word.chars().map(|c| format!("&#{};", c as u32)).collect()
}

const COLORS: [&str; 8] = ["#ff0000", "red", "#0000ff", "blue", "#ffcc00", "green", "#990099", "orange"];

fn colored<R: Rng>(rng: &mut R, text: &str) -> String {
    let color = pick(rng, &COLORS);
    match rng.gen_range(0..3) {
        0 => format!("<font color=\"{color}\">{text}</font>"),
        1 => format!("<span style=\"color: {color}\">{text}</span>"),
        _ => format!("<b style=\"background-color:{color}\">{text}</b>"),
    }
}

fn noisy_href<R: Rng>(rng: &mut R) -> String {
    let host = format!("www.{}{}.example", pick(rng, &["deals", "meds", "promo", "win"]), rng.gen_range(1..999));
    match rng.gen_range(0..3) {
        0 => format!("http://{host}/c.php?id={}&ref={}", rng.gen_range(1000..99999), gibberish(rng)),
        1 => format!("http://{host}/%7E{}/index.html", gibberish(rng)),
        _ => format!("http://{}.{}.{}.{}/offer", rng.gen_range(10..250), rng.gen_range(0..250), rng.gen_range(0..250), rng.gen_range(1..250)),
    }
}

fn spam_message<R: Rng>(rng: &mut R, spec: &GenSpec, id: &str) -> (Vec<u8>, Vec<Trick>) {
    let mut tricks: Vec<Trick> = Trick::ALL.into_iter().filter(|&t| rng.gen_bool(spec.probability(t))).collect();
    let pitch = words(PITCH_WORDS);
    let subject = subject(rng, Label::Spam);
    let domain = format!("{}{}.example", pick(rng, &["promo", "mailer", "offers", "bulk"]), rng.gen_range(1..500));
    let mut headers = Headers::new(rng, id, &domain, &subject);
    if tricks.contains(&Trick::PriorityBoost) {
        headers.push(["X-Priority: 1", "X-Priority: 1 (Highest)", "Importance: High"][rng.gen_range(0..3)]);
    }
    let has = |t: Trick, tricks: &[Trick]| tricks.contains(&t);

    let keywords: Vec<&str> = (0..rng.gen_range(2..=4)).map(|_| pick(rng, &KEYWORDS)).collect();
    if !has(Trick::HtmlBody, &tricks) {
        // Markup-free spam; tricks that need HTML are dropped.
        tricks.retain(|t| matches!(t, Trick::PriorityBoost | Trick::FakeText));
        let mut body = String::new();
        for k in &keywords {
            body.push_str(&format!("{} {k}!\n", sentence(rng, &pitch, 5, 12)));
        }
        body.push_str(&format!("Visit http://www.{}.example/ now.\n", pick(rng, &["offers", "deals"])));
        if has(Trick::FakeText, &tricks) {
            let junk: Vec<String> = (0..rng.gen_range(8..30)).map(|_| gibberish(rng)).collect();
            body.push_str(&format!("\n{}\n", junk.join(" ")));
        }
        headers.push("Content-Type: text/plain; charset=us-ascii");
        headers.push("Content-Transfer-Encoding: 7bit");
        return (headers.finish(&body), tricks);
    }

    let mut paragraphs = Vec::new();
    for k in &keywords {
        let word = if has(Trick::CommentSplit, &tricks) && rng.gen_bool(0.7) {
            comment_split(rng, k)
        } else if has(Trick::HtmlNumbers, &tricks) && rng.gen_bool(0.6) {
            html_numbers(k)
        } else {
            k.to_string()
        };
        let mut text = format!("{} {word}!", sentence(rng, &pitch, 4, 12));
        if has(Trick::ColorBurst, &tricks) {
            text = colored(rng, &text);
        }
        paragraphs.push(format!("<p>{text}</p>"));
    }
    if has(Trick::CommentSplit, &tricks) && !paragraphs.iter().any(|p| p.contains("<!--")) {
        let k = pick(rng, &KEYWORDS);
        paragraphs.push(format!("<p>{}</p>", comment_split(rng, k)));
    }
    if has(Trick::ColorBurst, &tricks) {
        for _ in 0..rng.gen_range(1..=5) {
            let t = sentence(rng, &pitch, 2, 5);
            paragraphs.push(format!("<p>{}</p>", colored(rng, &t)));
        }
    }
    if has(Trick::NoisyLinks, &tricks) {
        for _ in 0..rng.gen_range(1..=4) {
            let href = noisy_href(rng);
            if rng.gen_bool(0.5) {
                paragraphs.push(format!("<a href=\"{href}\"><img src=\"http://img{}.example/b.gif\" border=0></a>", rng.gen_range(1..99)));
            } else {
                paragraphs.push(format!("<a href=\"{href}\">{}</a>", sentence(rng, &pitch, 2, 4)));
            }
        }
    } else if rng.gen_bool(0.5) {
        paragraphs.push("<a href=\"http://shop.example.com/offer\">Order now</a>".to_string());
    }
    if has(Trick::FakeText, &tricks) {
        let junk: Vec<String> = (0..rng.gen_range(8..30)).map(|_| gibberish(rng)).collect();
        paragraphs.push(format!("<p>{}</p>", junk.join(" ")));
    }
    if has(Trick::InvisibleInk, &tricks) {
        let common = words(COMMON_WORDS);
        let hidden = sentence(rng, &common, 10, 30);
        paragraphs.push(match rng.gen_range(0..3) {
            0 => format!("<font color=\"#FFFFFF\">{hidden}</font>"),
            1 => format!("<span style=\"color:#ffffff\">{hidden}</span>"),
            _ => format!("<div style=\"color: white; font-size: 1px\">{hidden}</div>"),
        });
    }
    paragraphs.shuffle(rng);
    if rng.gen_bool(0.1) {
        paragraphs.push(format!("<p>From: {0}@example.com To: {0}@example.com</p>", pick(rng, &FIRST_NAMES)));
    }

    let mut html = String::from("<html>\n<head>");
    if has(Trick::ColorBurst, &tricks) && rng.gen_bool(0.5) {
        html.push_str(&format!("<style>p {{ color: {}; }} a {{ color: {} }}</style>", pick(rng, &COLORS), pick(rng, &COLORS)));
    }
    if has(Trick::ScriptUse, &tricks) && rng.gen_bool(0.6) {
        html.push_str("<script type=\"text/javascript\">window.open('http://popup.example/');</script>");
    }
    html.push_str("</head>\n");
    html.push_str(if has(Trick::ScriptUse, &tricks) { "<body onload=\"track()\">\n" } else { "<body>\n" });
    let inner = paragraphs.join("\n");
    if has(Trick::TableLayout, &tricks) {
        html.push_str(&format!("<table width=\"600\" border=\"0\"><tr><td>\n{inner}\n</td></tr></table>\n"));
    } else {
        html.push_str(&format!("{inner}\n"));
    }
    html.push_str("</body>\n</html>\n");

    let body = if rng.gen_bool(0.3) {
        let text: String = keywords.iter().map(|k| format!("{} {k}\n", sentence(rng, &pitch, 4, 10))).collect();
        let boundary = format!("----=_Part_{}", rng.gen_range(100000..999999));
        headers.push(format!("Content-Type: multipart/alternative; boundary=\"{boundary}\""));
        format!(
            "This is a multi-part message in MIME format.\n\n--{boundary}\nContent-Type: text/plain; charset=us-ascii\n\n{text}\n--{boundary}\n{}\n--{boundary}--\n",
            encoded_html_part(rng, &html).join("\n")
        )
    } else {
        let part = encoded_html_part(rng, &html);
        for h in &part[..2] {
            headers.push(h.clone());
        }
        part[3].clone()
    };
    (headers.finish(&body), tricks)
}

/// `[content-type, transfer-encoding, "", body]`.
fn encoded_html_part<R: Rng>(rng: &mut R, html: &str) -> Vec<String> {
    let (cte, body) = match rng.gen_range(0..10) {
        0..=2 => ("quoted-printable", encode_quoted_printable(html)),
        3 | 4 => ("base64", encode_base64_lines(html)),
        _ => ("7bit", html.to_string()),
    };
    vec![
        "Content-Type: text/html; charset=us-ascii".to_string(),
        format!("Content-Transfer-Encoding: {cte}"),
        String::new(),
        body,
    ]
}

/// Quoted-printable with soft breaks at 76 columns.
pub fn encode_quoted_printable(text: &str) -> String {
    let mut out = String::new();
    for (n, line) in text.split('\n').enumerate() {
        if n > 0 {
            out.push('\n');
        }
        let mut col = 0;
        let bytes = line.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            let last = i + 1 == bytes.len();
            let piece = if (b == b' ' || b == b'\t') && last || b == b'=' || !(32..=126).contains(&b) && b != b'\t' {
                format!("={b:02X}")
            } else {
                (b as char).to_string()
            };
            if col + piece.len() > 75 {
                out.push_str("=\n");
                col = 0;
            }
            col += piece.len();
            out.push_str(&piece);
        }
    }
    out
}

fn encode_base64_lines(text: &str) -> String {
    let enc = base64::engine::general_purpose::STANDARD.encode(text.as_bytes());
    let lines: Vec<&str> = enc.as_bytes().chunks(76).map(|c| std::str::from_utf8(c).unwrap_or("")).collect();
    lines.join("\n")
}

fn ham_message<R: Rng>(rng: &mut R, mix: &HamMix, id: &str) -> Vec<u8> {
    let common = words(COMMON_WORDS);
    let subject = subject(rng, Label::Ham);
    let domain = pick(rng, &["example.org", "example.net", "mail.example.edu", "corp.example.com"]);
    let mut headers = Headers::new(rng, id, domain, &subject);
    if rng.gen_bool(mix.priority) {
        headers.push(["Importance: High", "X-Priority: 2"][rng.gen_range(0..2)]);
    } else if rng.gen_bool(0.2) {
        headers.push("X-Priority: 3 (Normal)");
    }

    let newsletter = rng.gen_bool(mix.color_burst);
    let forwarded = rng.gen_bool(mix.forwarded);
    let name = capitalize(pick(rng, &FIRST_NAMES));
    let mut paras: Vec<String> = (0..rng.gen_range(1..=4)).map(|_| {
        (0..rng.gen_range(1..=4)).map(|_| sentence(rng, &common, 5, 16)).collect::<Vec<_>>().join(" ")
    }).collect();
    if rng.gen_bool(0.2) {
        paras.push(format!("Details are at http://intranet.example.org/{}", pick(rng, &common)));
    }

    if newsletter {
        let mut html = String::from("<html><body");
        if rng.gen_bool(0.3) {
            html.push_str(" bgcolor=\"#ffffff\"");
        }
        html.push_str(">\n");
        let use_table = rng.gen_bool(0.4);
        if use_table {
            html.push_str("<table cellpadding=\"4\"><tr><td>\n");
        }
        html.push_str(&format!("<h2 style=\"color: #333366\">{}</h2>\n", sentence(rng, &common, 3, 6)));
        for p in &paras {
            if rng.gen_bool(0.3) {
                html.push_str(&format!("<p><font color=\"#444444\">{p}</font></p>\n"));
            } else {
                html.push_str(&format!("<p>{p}</p>\n"));
            }
        }
        html.push_str(&format!(
            "<p><a href=\"http://news.example.org/{}\">Read more</a></p>\n",
            pick(rng, &common)
        ));
        if use_table {
            html.push_str("</td></tr></table>\n");
        }
        html.push_str("</body></html>\n");
        if rng.gen_bool(0.5) {
            let boundary = format!("=_news_{}", rng.gen_range(1000..9999));
            headers.push(format!("Content-Type: multipart/alternative; boundary=\"{boundary}\""));
            let text = paras.join("\n\n");
            let body = format!(
                "--{boundary}\nContent-Type: text/plain; charset=us-ascii\n\n{text}\n\n--{boundary}\nContent-Type: text/html; charset=us-ascii\n\n{html}\n--{boundary}--\n"
            );
            return headers.finish(&body);
        }
        headers.push("Content-Type: text/html; charset=us-ascii");
        return headers.finish(&html);
    }

    let mut body = format!("Hi {name},\n\n{}\n", paras.join("\n\n"));
    if forwarded {
        let (a, b) = (pick(rng, &FIRST_NAMES), pick(rng, &FIRST_NAMES));
        body.push_str(&format!(
            "\n---------- Forwarded message ----------\nFrom: {} <{a}@example.org>\nTo: {b}@example.com\nSubject: {}\n\n{}\n",
            capitalize(a),
            sentence(rng, &common, 2, 5),
            sentence(rng, &common, 6, 14)
        ));
    }
    body.push_str(&format!("\nThanks,\n{}\n", capitalize(pick(rng, &FIRST_NAMES))));
    headers.push("Content-Type: text/plain; charset=us-ascii");
    if rng.gen_bool(0.1) {
        headers.push("Content-Transfer-Encoding: quoted-printable");
        return headers.finish(&encode_quoted_printable(&body));
    }
    headers.finish(&body)
}
