//! A small tag/text lexer sufficient for table markup.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Lexeme<'a> {
    Open {
        name: String,
        attrs: Vec<(String, String)>,
        self_closing: bool,
        offset: usize,
    },
    Close {
        name: String,
        offset: usize,
    },
    Text(&'a str),
}

/// Splits markup into tags and text runs. Comments, doctypes and processing
/// instructions are dropped. A `<` that does not start a tag is kept as text.
pub(crate) fn lex(input: &str) -> Vec<Lexeme<'_>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut text_start = 0;
    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        let rest = &input[i..];
        let skip_to = if rest.starts_with("<!--") {
            Some(rest.find("-->").map_or(input.len(), |e| i + e + 3))
        } else if rest.starts_with("<!") || rest.starts_with("<?") {
            Some(rest.find('>').map_or(input.len(), |e| i + e + 1))
        } else {
            None
        };
        if let Some(end) = skip_to {
            if text_start < i {
                out.push(Lexeme::Text(&input[text_start..i]));
            }
            i = end;
            text_start = i;
            continue;
        }
        let closing = rest.starts_with("</");
        let name_start = i + if closing { 2 } else { 1 };
        let starts_name = bytes.get(name_start).is_some_and(|b| b.is_ascii_alphabetic());
        if !starts_name {
            i += 1;
            continue;
        }
        let Some(end) = find_tag_end(bytes, name_start) else {
            // Unterminated tag: treat the remainder as text.
            break;
        };
        if text_start < i {
            out.push(Lexeme::Text(&input[text_start..i]));
        }
        let inner = &input[name_start..end];
        let name_len = inner
            .find(|c: char| c.is_whitespace() || c == '/' || c == '>')
            .unwrap_or(inner.len());
        let name = inner[..name_len].to_ascii_lowercase();
        if closing {
            out.push(Lexeme::Close { name, offset: i });
        } else {
            let attr_text = &inner[name_len..];
            let self_closing = attr_text.trim_end().ends_with('/');
            out.push(Lexeme::Open {
                name,
                attrs: parse_attrs(attr_text),
                self_closing,
                offset: i,
            });
        }
        i = end + 1;
        text_start = i;
    }
    if text_start < input.len() {
        out.push(Lexeme::Text(&input[text_start..]));
    }
    out
}

/// Index of the `>` closing the tag, honouring quoted attribute values.
fn find_tag_end(bytes: &[u8], from: usize) -> Option<usize> {
    let mut quote: Option<u8> = None;
    for (k, &b) in bytes.iter().enumerate().skip(from) {
        match quote {
            Some(q) if b == q => quote = None,
            Some(_) => {}
            None if b == b'"' || b == b'\'' => quote = Some(b),
            None if b == b'>' => return Some(k),
            None => {}
        }
    }
    None
}

fn parse_attrs(text: &str) -> Vec<(String, String)> {
    let mut attrs = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        while i < chars.len() && (chars[i].is_whitespace() || chars[i] == '/') {
            i += 1;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '=' && chars[i] != '/' {
            i += 1;
        }
        if start == i {
            i += 1;
            continue;
        }
        let name: String = chars[start..i].iter().collect::<String>().to_ascii_lowercase();
        while i < chars.len() && chars[i].is_whitespace() {
            i += 1;
        }
        let mut value = String::new();
        if i < chars.len() && chars[i] == '=' {
            i += 1;
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            if i < chars.len() && (chars[i] == '"' || chars[i] == '\'') {
                let q = chars[i];
                i += 1;
                let vstart = i;
                while i < chars.len() && chars[i] != q {
                    i += 1;
                }
                value = chars[vstart..i].iter().collect();
                i += 1;
            } else {
                let vstart = i;
                while i < chars.len() && !chars[i].is_whitespace() {
                    i += 1;
                }
                value = chars[vstart..i].iter().collect();
            }
        }
        attrs.push((name, value));
    }
    attrs
}

/// Decodes the named entities common in table annotations plus numeric
/// references. Unknown entities are left as written.
pub(crate) fn decode_entities(text: &str) -> String {
    if !text.contains('&') {
        return text.to_string();
    }
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(pos) = rest.find('&') {
        out.push_str(&rest[..pos]);
        rest = &rest[pos..];
        let Some(semi) = rest[..rest.len().min(12)].find(';') else {
            out.push('&');
            rest = &rest[1..];
            continue;
        };
        let entity = &rest[1..semi];
        let decoded = match entity {
            "amp" => Some('&'),
            "lt" => Some('<'),
            "gt" => Some('>'),
            "quot" => Some('"'),
            "apos" | "#39" => Some('\''),
            "nbsp" => Some('\u{a0}'),
            _ if entity.starts_with("#x") || entity.starts_with("#X") => {
                u32::from_str_radix(&entity[2..], 16).ok().and_then(char::from_u32)
            }
            _ if entity.starts_with('#') => entity[1..].parse().ok().and_then(char::from_u32),
            _ => None,
        };
        match decoded {
            Some(c) => {
                out.push(c);
                rest = &rest[semi + 1..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

pub(crate) fn escape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_tags_and_attributes() {
        let lx = lex(r#"<TD rowspan="2" colspan=3>a &amp; b</td><br/>"#);
        assert_eq!(lx.len(), 4);
        match &lx[0] {
            Lexeme::Open { name, attrs, .. } => {
                assert_eq!(name, "td");
                assert_eq!(attrs, &vec![("rowspan".into(), "2".into()), ("colspan".into(), "3".into())]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(lx[1], Lexeme::Text("a &amp; b"));
        assert!(matches!(&lx[2], Lexeme::Close { name, .. } if name == "td"));
        assert!(matches!(&lx[3], Lexeme::Open { self_closing: true, .. }));
    }

    #[test]
    fn skips_comments_and_keeps_stray_angles() {
        let lx = lex("a<!-- <td> -->b < c");
        assert_eq!(lx, vec![Lexeme::Text("a"), Lexeme::Text("b < c")]);
    }

    #[test]
    fn quoted_angle_in_attribute() {
        let lx = lex(r#"<td title="a>b">x</td>"#);
        assert!(matches!(&lx[0], Lexeme::Open { attrs, .. } if attrs[0].1 == "a>b"));
    }

    #[test]
    fn entities_round_trip() {
        assert_eq!(decode_entities("a &lt;b&gt; &#65;&#x42; &bogus; &"), "a <b> AB &bogus; &");
        let raw = "x < y & z > w";
        assert_eq!(decode_entities(&escape_text(raw)), raw);
    }
}
