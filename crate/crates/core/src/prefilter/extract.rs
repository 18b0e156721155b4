//! Error-tolerant main-content extraction.
//!
//! A single forward scan over the markup: boilerplate subtrees are skipped
//! wholesale, every block-level element starts a new output line, and lines
//! dominated by link text are dropped.

/// Elements whose whole subtree is never main content.
const EXCLUDED: &[&str] = &[
    "script", "style", "nav", "header", "footer", "aside", "form", "head", "noscript", "template", "svg", "iframe",
    "menu", "button", "select",
];

/// Elements whose content is raw text up to the matching end tag.
const RAW_TEXT: &[&str] = &["script", "style", "textarea", "xmp", "noscript", "template"];

const VOID: &[&str] = &[
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source", "track", "wbr",
];

const BLOCK: &[&str] = &[
    "address",
    "article",
    "blockquote",
    "body",
    "caption",
    "dd",
    "details",
    "dialog",
    "div",
    "dl",
    "dt",
    "fieldset",
    "figcaption",
    "figure",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "hr",
    "html",
    "li",
    "main",
    "ol",
    "p",
    "pre",
    "section",
    "summary",
    "table",
    "tbody",
    "td",
    "tfoot",
    "th",
    "thead",
    "tr",
    "ul",
    "br",
];

/// class/id tokens that mark a boilerplate container.
const BOILERPLATE_TOKENS: &[&str] = &[
    "ad",
    "ads",
    "advert",
    "advertisement",
    "banner",
    "breadcrumb",
    "breadcrumbs",
    "comment",
    "comments",
    "cookie",
    "copyright",
    "footer",
    "header",
    "menu",
    "modal",
    "nav",
    "navbar",
    "navigation",
    "popup",
    "related",
    "share",
    "sidebar",
    "social",
    "sponsor",
    "subscribe",
];

const BOILERPLATE_ROLES: &[&str] = &["banner", "complementary", "contentinfo", "menu", "navigation", "search"];

/// Lines whose text is mostly inside `<a>` are treated as navigation.
const MAX_LINK_DENSITY: f64 = 0.5;

pub fn extract_main_text(html: &str) -> String {
    let mut ex = Extractor::default();
    ex.run(html);
    ex.flush();
    ex.lines.join("\n")
}

#[derive(Default)]
struct Extractor {
    lines: Vec<String>,
    stack: Vec<(String, bool)>,
    excluded_depth: usize,
    link_depth: usize,
    line: String,
    link_chars: usize,
}

impl Extractor {
    fn run(&mut self, html: &str) {
        let bytes = html.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let Some(off) = html[i..].find('<') else {
                self.text(&html[i..]);
                break;
            };
            self.text(&html[i..i + off]);
            i += off;
            let rest = &html[i..];
            if let Some(comment) = rest.strip_prefix("<!--") {
                i += comment.find("-->").map_or(rest.len(), |p| p + 7);
            } else if rest.starts_with("<!") || rest.starts_with("<?") {
                i += rest.find('>').map_or(rest.len(), |p| p + 1);
            } else if let Some(tag) = parse_tag(rest) {
                i += tag.len;
                if tag.closing {
                    self.close(&tag.name);
                } else {
                    self.open(&tag);
                    if !tag.self_closing && RAW_TEXT.contains(&tag.name.as_str()) {
                        let skip = find_end_tag(&html[i..], &tag.name);
                        if !self.excluded() && !EXCLUDED.contains(&tag.name.as_str()) {
                            self.text(&html[i..i + skip.0]);
                        }
                        i += skip.1;
                        self.close(&tag.name);
                    }
                }
            } else {
                self.text("<");
                i += 1;
            }
        }
    }

    fn excluded(&self) -> bool {
        self.excluded_depth > 0
    }

    fn open(&mut self, tag: &Tag) {
        let name = tag.name.as_str();
        if BLOCK.contains(&name) {
            self.flush();
        }
        if VOID.contains(&name) || tag.self_closing {
            return;
        }
        let excluded = EXCLUDED.contains(&name) || tag.boilerplate;
        if excluded {
            self.excluded_depth += 1;
        }
        if name == "a" {
            self.link_depth += 1;
        }
        self.stack.push((tag.name.clone(), excluded));
    }

    fn close(&mut self, name: &str) {
        let Some(pos) = self.stack.iter().rposition(|(n, _)| n == name) else {
            return;
        };
        for (n, excluded) in self.stack.drain(pos..) {
            if excluded {
                self.excluded_depth -= 1;
            }
            if n == "a" {
                self.link_depth -= 1;
            }
        }
        if BLOCK.contains(&name) {
            self.flush();
        }
    }

    fn text(&mut self, raw: &str) {
        if self.excluded() || raw.is_empty() {
            return;
        }
        let decoded = decode_entities(raw);
        let before = self.line.chars().count();
        for c in decoded.chars() {
            if c.is_whitespace() {
                if !self.line.is_empty() && !self.line.ends_with(' ') {
                    self.line.push(' ');
                }
            } else {
                self.line.push(c);
            }
        }
        if self.link_depth > 0 {
            self.link_chars += self.line.chars().count() - before;
        }
    }

    fn flush(&mut self) {
        let line = std::mem::take(&mut self.line);
        let link_chars = std::mem::take(&mut self.link_chars);
        let line = line.trim();
        if line.is_empty() {
            return;
        }
        let total = line.chars().filter(|c| !c.is_whitespace()).count().max(1);
        if link_chars as f64 / total as f64 > MAX_LINK_DENSITY {
            return;
        }
        self.lines.push(line.to_string());
    }
}

struct Tag {
    name: String,
    closing: bool,
    self_closing: bool,
    boilerplate: bool,
    len: usize,
}

/// Parses a tag at the start of `s` (which begins with `<`). Returns `None`
/// when the `<` does not start a tag and should be read as text.
fn parse_tag(s: &str) -> Option<Tag> {
    let bytes = s.as_bytes();
    let mut i = 1;
    let closing = bytes.get(1) == Some(&b'/');
    if closing {
        i += 1;
    }
    if !bytes.get(i)?.is_ascii_alphabetic() {
        return None;
    }
    let name_start = i;
    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'-' || bytes[i] == b':') {
        i += 1;
    }
    let name = s[name_start..i].to_ascii_lowercase();

    // Attributes run to the first '>' outside quotes.
    let attr_start = i;
    let mut quote = None;
    while i < bytes.len() {
        match (quote, bytes[i]) {
            (None, b'>') => break,
            (None, q @ (b'"' | b'\'')) => quote = Some(q),
            (Some(q), c) if c == q => quote = None,
            _ => {}
        }
        i += 1;
    }
    let attrs = &s[attr_start..i];
    let len = (i + 1).min(s.len());
    let self_closing = attrs.trim_end().ends_with('/');
    Some(Tag {
        boilerplate: !closing && is_boilerplate(attrs),
        name,
        closing,
        self_closing,
        len,
    })
}

fn is_boilerplate(attrs: &str) -> bool {
    if attrs.trim().is_empty() {
        return false;
    }
    let lowered = attrs.to_ascii_lowercase();
    if lowered.split_whitespace().any(|a| a == "hidden" || a == "hidden/")
        || lowered.replace(' ', "").contains("display:none")
    {
        return true;
    }
    for (key, value) in attributes(&lowered) {
        match key {
            "class" | "id" => {
                if value
                    .split(|c: char| c.is_whitespace() || c == '-' || c == '_')
                    .any(|tok| BOILERPLATE_TOKENS.contains(&tok))
                {
                    return true;
                }
            }
            "role" if BOILERPLATE_ROLES.contains(&value.trim()) => return true,
            _ => {}
        }
    }
    false
}

/// Yields `(name, value)` pairs from a lowercase attribute string.
fn attributes(s: &str) -> Vec<(&str, &str)> {
    let mut out = Vec::new();
    let mut rest = s;
    while let Some(eq) = rest.find('=') {
        let key = rest[..eq].split_whitespace().last().unwrap_or("");
        let after = rest[eq + 1..].trim_start();
        let (value, remaining) = match after.chars().next() {
            Some(q @ ('"' | '\'')) => match after[1..].find(q) {
                Some(end) => (&after[1..1 + end], &after[end + 2..]),
                None => (&after[1..], ""),
            },
            _ => {
                let end = after.find(char::is_whitespace).unwrap_or(after.len());
                (&after[..end], &after[end..])
            }
        };
        out.push((key, value));
        rest = remaining;
    }
    out
}

/// Returns (content length, bytes to skip including the end tag).
fn find_end_tag(s: &str, name: &str) -> (usize, usize) {
    let lowered = s.to_ascii_lowercase();
    let needle = format!("</{name}");
    match lowered.find(&needle) {
        Some(pos) => {
            let close = lowered[pos..].find('>').map_or(s.len(), |p| pos + p + 1);
            (pos, close)
        }
        None => (s.len(), s.len()),
    }
}

fn decode_entities(s: &str) -> std::borrow::Cow<'_, str> {
    if !s.contains('&') {
        return s.into();
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        rest = &rest[amp..];
        let semi = rest.char_indices().take(12).find(|&(_, c)| c == ';').map(|(i, _)| i);
        let decoded = semi.and_then(|end| decode_entity(&rest[1..end]).map(|c| (c, end + 1)));
        match decoded {
            Some((c, used)) => {
                out.push(c);
                rest = &rest[used..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out.into()
}

fn decode_entity(name: &str) -> Option<char> {
    if let Some(num) = name.strip_prefix('#') {
        let cp = match num.strip_prefix(['x', 'X']) {
            Some(hex) => u32::from_str_radix(hex, 16).ok()?,
            None => num.parse().ok()?,
        };
        return char::from_u32(cp).filter(|&c| c != '\0');
    }
    Some(match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => ' ',
        "middot" => '·',
        "hellip" => '…',
        "mdash" => '—',
        "ndash" => '–',
        "copy" => '©',
        "reg" => '®',
        "ldquo" => '“',
        "rdquo" => '”',
        "lsquo" => '‘',
        "rsquo" => '’',
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_paragraph() {
        assert_eq!(
            extract_main_text("<html><body><p>你好世界</p></body></html>"),
            "你好世界"
        );
    }

    #[test]
    fn empty_input() {
        assert_eq!(extract_main_text(""), "");
    }

    #[test]
    fn excludes_nav_and_footer() {
        let html = "<html><body><nav>menu</nav><p>正文</p><footer>版權</footer></body></html>";
        assert_eq!(extract_main_text(html), "正文");
    }

    #[test]
    fn excludes_every_listed_tag_and_comments() {
        let html = "<head><title>標題</title><style>p{color:red}</style></head><body>\
            <script>var a = '<p>x</p>';</script><header>頁首</header><aside>側欄</aside>\
            <form><p>表單</p></form><!-- <p>註解</p> --><p>保留這段</p></body>";
        assert_eq!(extract_main_text(html), "保留這段");
    }

    #[test]
    fn one_line_per_block_and_whitespace_collapsed() {
        let html = "<div><h1>標題  一</h1><p>第一段\n\t文字</p><ul><li>甲</li><li>乙</li></ul></div>";
        assert_eq!(extract_main_text(html), "標題 一\n第一段 文字\n甲\n乙");
    }

    #[test]
    fn inline_elements_do_not_split_lines() {
        let html = "<p>這是<b>粗體</b>與<em>強調</em>的<a href=x>一個連結</a>句子。</p>";
        assert_eq!(extract_main_text(html), "這是粗體與強調的一個連結句子。");
    }

    #[test]
    fn link_dominated_lines_are_dropped() {
        let html = "<div><a href=1>首頁</a> | <a href=2>新聞</a></div><p>內文內容在這裡。</p>";
        assert_eq!(extract_main_text(html), "內文內容在這裡。");
    }

    #[test]
    fn boilerplate_attributes_drop_subtree() {
        let html = "<div class=\"site-nav\"><p>選單</p></div><div id=main><p>文章</p></div>\
            <div role=\"contentinfo\">聯絡</div><div class='cookie-banner'>同意</div>";
        assert_eq!(extract_main_text(html), "文章");
    }

    #[test]
    fn entities_and_stray_angle_brackets() {
        assert_eq!(
            extract_main_text("<p>a &lt; b &amp;&amp; c &#x4E2D;&#25991; &bogus;</p>"),
            "a < b && c 中文 &bogus;"
        );
        assert_eq!(extract_main_text("<p>1 < 2 和 3 > 2</p>"), "1 < 2 和 3 > 2");
    }

    #[test]
    fn malformed_markup_is_tolerated() {
        assert_eq!(extract_main_text("<p>未關閉<div>區塊</span></p"), "未關閉\n區塊");
        assert_eq!(extract_main_text("<p>文字<!-- 未結束註解"), "文字");
        assert_eq!(extract_main_text("<script>never closed"), "");
        assert_eq!(extract_main_text("<p title='a>b'>引號</p>"), "引號");
    }

    #[test]
    fn nothing_but_boilerplate() {
        assert_eq!(extract_main_text("<nav><p>只有選單</p></nav>"), "");
    }

    proptest! {
        #[test]
        fn rewrapping_output_is_stable(
            paras in prop::collection::vec("[a-z中文字句 。，]{1,20}", 0..6)
        ) {
            let html: String = paras.iter().map(|p| format!("<p>{p}</p>")).collect();
            let once = extract_main_text(&html);
            let rewrapped: String = once.lines().map(|l| format!("<p>{l}</p>")).collect();
            prop_assert_eq!(extract_main_text(&rewrapped), once);
        }
    }
}
