use std::collections::HashMap;

use crate::{Arrow, Quiver, QuiverError};

struct Cursor<'a> {
    chars: &'a [char],
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, message: impl Into<String>) -> QuiverError {
        QuiverError::SyntaxError {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, token: &str) -> Result<(), QuiverError> {
        self.skip_ws();
        for c in token.chars() {
            if self.peek() != Some(c) {
                return Err(self.error(format!("expected `{token}`")));
            }
            self.pos += 1;
        }
        Ok(())
    }

    /// A name and its starting column.
    fn name(&mut self) -> Result<(String, usize), QuiverError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected a name"));
        }
        Ok((self.chars[start..self.pos].iter().collect(), start + 1))
    }
}

/// Parses the quiver text format:
///
/// ```text
/// vertices: 1 2
/// arrows: a: 1 -> 2, b: 2 -> 1
/// ```
///
/// Blank lines and lines starting with `#` are ignored; `arrows:` may repeat.
pub fn parse_quiver(text: &str) -> Result<Quiver, QuiverError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut arrow_names: HashMap<String, usize> = HashMap::new();

    for (k, raw) in text.lines().enumerate() {
        let chars: Vec<char> = raw.chars().collect();
        let mut cur = Cursor {
            chars: &chars,
            pos: 0,
            line: k + 1,
        };
        cur.skip_ws();
        if cur.at_end() || cur.peek() == Some('#') {
            continue;
        }
        let (keyword, _) = cur.name()?;
        cur.expect(":")?;
        match keyword.as_str() {
            "vertices" => loop {
                cur.skip_ws();
                if cur.at_end() {
                    break;
                }
                let (name, _) = cur.name()?;
                if index.contains_key(&name) || arrow_names.contains_key(&name) {
                    return Err(QuiverError::DuplicateName(name));
                }
                index.insert(name.clone(), vertices.len());
                vertices.push(name);
            },
            "arrows" => {
                cur.skip_ws();
                if cur.at_end() {
                    continue;
                }
                loop {
                    let (name, _) = cur.name()?;
                    cur.expect(":")?;
                    let (src, src_col) = cur.name()?;
                    cur.expect("->")?;
                    let (tgt, tgt_col) = cur.name()?;
                    if arrow_names.contains_key(&name) || index.contains_key(&name) {
                        return Err(QuiverError::DuplicateName(name));
                    }
                    let lookup = |v: &str, col: usize| {
                        index.get(v).copied().ok_or_else(|| QuiverError::UnknownVertex {
                            name: v.to_string(),
                            line: k + 1,
                            column: col,
                        })
                    };
                    let arrow = Arrow {
                        source: lookup(&src, src_col)?,
                        target: lookup(&tgt, tgt_col)?,
                        name: name.clone(),
                    };
                    arrow_names.insert(name, arrows.len());
                    arrows.push(arrow);
                    cur.skip_ws();
                    match cur.peek() {
                        None => break,
                        Some(',') => cur.pos += 1,
                        Some(_) => return Err(cur.error("expected `,` or end of line")),
                    }
                }
            }
            other => {
                return Err(QuiverError::SyntaxError {
                    line: k + 1,
                    column: 1,
                    message: format!("unknown section `{other}`"),
                })
            }
        }
    }
    Ok(Quiver { vertices, arrows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let r1 = parse_quiver("vertices: v\narrows: a: v -> v").unwrap();
        assert_eq!((r1.vertex_count(), r1.arrow_count()), (1, 1));
        let c2 = parse_quiver("vertices: 1 2\narrows: a: 1 -> 2, b: 2 -> 1").unwrap();
        assert_eq!(c2.arrow(1).source, 1);
        assert_eq!(c2.arrow(1).target, 0);
    }

    #[test]
    fn multiple_arrow_lines_and_comments() {
        let q = parse_quiver("# rose\nvertices: v\n\narrows: a: v -> v\narrows: b: v->v\n").unwrap();
        assert_eq!(q.arrow_count(), 2);
        assert_eq!(q.serialize(), "vertices: v\narrows: a: v -> v, b: v -> v\n");
    }

    #[test]
    fn unknown_vertex() {
        let err = parse_quiver("arrows: a: 1 -> 2").unwrap_err();
        assert_eq!(
            err,
            QuiverError::UnknownVertex {
                name: "1".into(),
                line: 1,
                column: 12
            }
        );
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = parse_quiver("vertices: v\narrows: a v -> v").unwrap_err();
        assert_eq!(
            err,
            QuiverError::SyntaxError {
                line: 2,
                column: 11,
                message: "expected `:`".into()
            }
        );
        assert!(matches!(
            parse_quiver("vertexes: v"),
            Err(QuiverError::SyntaxError { line: 1, .. })
        ));
        assert!(matches!(
            parse_quiver("vertices: v\narrows: a: v -> v b: v -> v"),
            Err(QuiverError::SyntaxError { line: 2, .. })
        ));
    }

    #[test]
    fn duplicates() {
        assert_eq!(
            parse_quiver("vertices: v v").unwrap_err(),
            QuiverError::DuplicateName("v".into())
        );
        assert_eq!(
            parse_quiver("vertices: v\narrows: a: v -> v, a: v -> v").unwrap_err(),
            QuiverError::DuplicateName("a".into())
        );
    }
}
