//! The hierarchy text format.
//!
//! ```text
//! # comment
//! class NAME [: PARENT ...] { ATTR = VALUE ... }
//! object NAME { ATTR = VALUE ... }
//! ```
//!
//! Tokens are separated by whitespace; `{`, `}`, `:` and `=` are also
//! recognised when glued to a neighbouring token. `?` is only accepted as
//! a value inside object blocks.

use std::collections::{BTreeSet, HashSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::features::{Attribute, Feature, FeatureSet, ObjectSpec, Value, UNKNOWN};
use crate::hierarchy::{ClassDecl, Hierarchy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectDecl {
    pub name: String,
    pub features: FeatureSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyDocument {
    pub hierarchy: Hierarchy,
    pub objects: Vec<ObjectDecl>,
}

impl HierarchyDocument {
    pub fn object(&self, name: &str) -> Option<&ObjectDecl> {
        self.objects.iter().find(|o| o.name == name)
    }

    /// The complete object over the hierarchy's attributes plus its own.
    pub fn object_spec(&self, name: &str) -> Option<ObjectSpec> {
        let decl = self.object(name)?;
        let universe: BTreeSet<Attribute> = self
            .hierarchy
            .attributes()
            .chain(decl.features.attributes())
            .cloned()
            .collect();
        Some(
            ObjectSpec::complete(&decl.name, decl.features.clone(), universe)
                .expect("universe includes object"),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Open,
    Close,
    Colon,
    Equals,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "{w:?}"),
            Tok::Open => f.write_str("\"{\""),
            Tok::Close => f.write_str("\"}\""),
            Tok::Colon => f.write_str("\":\""),
            Tok::Equals => f.write_str("\"=\""),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Spanned> {
    let mut out = Vec::new();
    for (l, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut word: Option<(usize, String)> = None;
        let flush = |word: &mut Option<(usize, String)>, out: &mut Vec<Spanned>| {
            if let Some((column, w)) = word.take() {
                out.push(Spanned {
                    tok: Tok::Word(w),
                    line: l + 1,
                    column,
                });
            }
        };
        for (c, ch) in line.chars().enumerate() {
            let punct = match ch {
                '{' => Some(Tok::Open),
                '}' => Some(Tok::Close),
                ':' => Some(Tok::Colon),
                '=' => Some(Tok::Equals),
                _ => None,
            };
            if let Some(tok) = punct {
                flush(&mut word, &mut out);
                out.push(Spanned {
                    tok,
                    line: l + 1,
                    column: c + 1,
                });
            } else if ch.is_whitespace() {
                flush(&mut word, &mut out);
            } else {
                word.get_or_insert_with(|| (c + 1, String::new()))
                    .1
                    .push(ch);
            }
        }
        flush(&mut word, &mut out);
    }
    out
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err_at(&self, at: &Spanned, message: impl Into<String>) -> ParseError {
        ParseError {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn eof(&self, expected: &str) -> ParseError {
        ParseError {
            line: self.end.0,
            column: self.end.1,
            message: format!("unexpected end of input, expected {expected}"),
        }
    }

    fn next(&mut self, expected: &str) -> Result<Spanned, ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.eof(expected))?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn word(&mut self, expected: &str) -> Result<(String, Spanned), ParseError> {
        let t = self.next(expected)?;
        match &t.tok {
            Tok::Word(w) if w == UNKNOWN => {
                Err(self.err_at(&t, format!("\"?\" cannot be used as {expected}")))
            }
            Tok::Word(w) => Ok((w.clone(), t)),
            other => Err(self.err_at(&t, format!("expected {expected}, found {other}"))),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, ParseError> {
        let t = self.next(&tok.to_string())?;
        if t.tok == tok {
            Ok(t)
        } else {
            Err(self.err_at(&t, format!("expected {tok}, found {}", t.tok)))
        }
    }

    /// `{ (ATTR = VALUE)* }` with the opening brace already consumed.
    fn features(&mut self, allow_unknown: bool, block: &str) -> Result<FeatureSet, ParseError> {
        let mut set = FeatureSet::new();
        loop {
            let t = self.next("an attribute or \"}\"")?;
            let attr_name = match &t.tok {
                Tok::Close => return Ok(set),
                Tok::Word(w) if w != UNKNOWN => w.clone(),
                other => {
                    return Err(self.err_at(
                        &t,
                        format!("expected an attribute or \"}}\", found {other}"),
                    ))
                }
            };
            let attribute =
                Attribute::new(attr_name).map_err(|e| self.err_at(&t, e.to_string()))?;
            self.expect(Tok::Equals)?;
            let vt = self.next("a value")?;
            let value = match &vt.tok {
                Tok::Word(w) if w == UNKNOWN && !allow_unknown => {
                    return Err(self.err_at(
                        &vt,
                        format!("\"?\" is only allowed in object blocks, not in {block}"),
                    ));
                }
                Tok::Word(w) => Value::parse(w).map_err(|e| self.err_at(&vt, e.to_string()))?,
                other => return Err(self.err_at(&vt, format!("expected a value, found {other}"))),
            };
            if set.contains_attribute(&attribute) {
                return Err(self.err_at(&t, format!("duplicate attribute {attribute} in {block}")));
            }
            set.insert(Feature::new(attribute, value))
                .expect("attribute is new");
        }
    }
}

pub fn parse(text: &str) -> Result<HierarchyDocument, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let end = (
        lines.len().max(1),
        lines.last().map_or(0, |l| l.chars().count()) + 1,
    );
    let mut p = Parser {
        toks: tokenize(text),
        pos: 0,
        end,
    };
    let mut classes: Vec<ClassDecl> = Vec::new();
    let mut class_names = HashSet::new();
    let mut objects: Vec<ObjectDecl> = Vec::new();
    let mut object_names = HashSet::new();

    while let Some(t) = p.peek().cloned() {
        p.pos += 1;
        match &t.tok {
            Tok::Word(k) if k == "class" => {
                let (name, at) = p.word("a class name")?;
                if !class_names.insert(name.clone()) {
                    return Err(p.err_at(&at, format!("duplicate class name {name}")));
                }
                let mut parents = Vec::new();
                let t = p.next("\":\" or \"{\"")?;
                match &t.tok {
                    Tok::Open => {}
                    Tok::Colon => loop {
                        let t = p.next("a parent name or \"{\"")?;
                        match &t.tok {
                            Tok::Open => break,
                            Tok::Word(w) if w != UNKNOWN => parents.push(w.clone()),
                            other => {
                                return Err(p.err_at(
                                    &t,
                                    format!("expected a parent name or \"{{\", found {other}"),
                                ))
                            }
                        }
                    },
                    other => {
                        return Err(p.err_at(&t, format!("expected \":\" or \"{{\", found {other}")))
                    }
                }
                let local = p.features(false, &format!("class {name}"))?;
                classes.push(ClassDecl {
                    name,
                    parents,
                    local,
                });
            }
            Tok::Word(k) if k == "object" => {
                let (name, at) = p.word("an object name")?;
                if !object_names.insert(name.clone()) {
                    return Err(p.err_at(&at, format!("duplicate object name {name}")));
                }
                p.expect(Tok::Open)?;
                let features = p.features(true, &format!("object {name}"))?;
                objects.push(ObjectDecl { name, features });
            }
            Tok::Word(k) => {
                return Err(p.err_at(
                    &t,
                    format!("unknown keyword {k:?}, expected \"class\" or \"object\""),
                ))
            }
            other => {
                return Err(p.err_at(
                    &t,
                    format!("expected \"class\" or \"object\", found {other}"),
                ))
            }
        }
    }

    let hierarchy = Hierarchy::new(classes).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })?;
    Ok(HierarchyDocument { hierarchy, objects })
}

fn write_block(out: &mut String, head: &str, features: &FeatureSet) {
    let _ = writeln!(out, "{head} {{");
    for (a, v) in features.iter() {
        let _ = writeln!(out, "  {a} = {v}");
    }
    out.push_str("}\n");
}

/// Canonical rendering: classes in declaration order, then objects; one
/// feature per line with two-space indentation; blank line between blocks.
pub fn render(doc: &HierarchyDocument) -> String {
    let mut out = String::new();
    let mut first = true;
    let mut sep = |out: &mut String| {
        if !std::mem::take(&mut first) {
            out.push('\n');
        }
    };
    for c in doc.hierarchy.classes() {
        sep(&mut out);
        let head = if c.parents.is_empty() {
            format!("class {}", c.name)
        } else {
            format!("class {} : {}", c.name, c.parents.join(" "))
        };
        write_block(&mut out, &head, &c.local);
    }
    for o in &doc.objects {
        sep(&mut out);
        write_block(&mut out, &format!("object {}", o.name), &o.features);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_class_one_feature() {
        let doc = parse("class A { a1 = v1 }").unwrap();
        assert_eq!(doc.hierarchy.len(), 1);
        assert_eq!(doc.hierarchy.classes()[0].local.len(), 1);
    }

    #[test]
    fn glued_punctuation_and_comments() {
        let doc = parse("class B:A{x=1} # trailing\nclass A {}\nobject o { x = ? y = 2 }").unwrap();
        assert_eq!(doc.hierarchy.get("B").unwrap().parents, ["A"]);
        let o = doc.object("o").unwrap();
        assert_eq!(
            o.features.get(&Attribute::new("x").unwrap()),
            Some(&Value::Unknown)
        );
        let spec = doc.object_spec("o").unwrap();
        assert_eq!(spec.known_count(), 1);
    }

    #[test]
    fn duplicate_attribute_points_at_second_occurrence() {
        let err = parse("class X { p = 1 p = 2 }").unwrap_err();
        assert_eq!((err.line, err.column), (1, 17));
        assert!(err.message.contains("duplicate attribute p"));
    }

    #[test]
    fn diagnostics() {
        let cases = [
            ("klass A {}", (1, 1), "unknown keyword"),
            ("class A {}\nclass A {}", (2, 7), "duplicate class name A"),
            ("class A { x = ? }", (1, 15), "only allowed in object"),
            ("class A { x = }", (1, 15), "expected a value"),
            ("class A { x = 1", (1, 16), "unexpected end of input"),
            ("object o {}\nobject o {}", (2, 8), "duplicate object name"),
            ("class ? {}", (1, 7), "\"?\" cannot be used"),
        ];
        for (text, pos, needle) in cases {
            let err = parse(text).unwrap_err();
            assert_eq!((err.line, err.column), pos, "{text:?}: {err}");
            assert!(err.message.contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn canonical_rendering() {
        let doc = parse("class B : A { y = 2 x = 1 }\nclass A { }\nobject o { z = ? }").unwrap();
        assert_eq!(
            render(&doc),
            "class B : A {\n  x = 1\n  y = 2\n}\n\nclass A {\n}\n\nobject o {\n  z = ?\n}\n"
        );
    }

    fn arb_doc() -> impl Strategy<Value = String> {
        let feat = (
            "[a-e][a-z/]{0,3}",
            prop_oneof!["[a-z0-9+-]{1,3}", Just("?".to_string())],
        );
        let class = (
            proptest::collection::vec(feat.clone(), 0..4),
            proptest::collection::vec(0..6usize, 0..3),
        );
        (
            proptest::collection::vec(class, 0..6),
            proptest::collection::vec(proptest::collection::vec(feat, 0..4), 0..3),
        )
            .prop_map(|(classes, objects)| {
                let mut text = String::new();
                for (i, (feats, parents)) in classes.iter().enumerate() {
                    let parents: Vec<String> = parents.iter().map(|p| format!("K{p}")).collect();
                    text.push_str(&format!("class K{i} : {} {{", parents.join(" ")));
                    let mut seen = HashSet::new();
                    for (a, v) in feats {
                        if v != "?" && seen.insert(a.clone()) {
                            text.push_str(&format!(" {a} = {v}"));
                        }
                    }
                    text.push_str(" }\n");
                }
                for (i, feats) in objects.iter().enumerate() {
                    text.push_str(&format!("object o{i} {{"));
                    let mut seen = HashSet::new();
                    for (a, v) in feats {
                        if seen.insert(a.clone()) {
                            text.push_str(&format!(" {a} = {v}"));
                        }
                    }
                    text.push_str(" }\n");
                }
                text
            })
    }

    proptest! {
        #[test]
        fn parse_render_parse_is_fixed_point(text in arb_doc()) {
            let doc = parse(&text).unwrap();
            let rendered = render(&doc);
            let again = parse(&rendered).unwrap();
            prop_assert_eq!(&again, &doc);
            prop_assert_eq!(render(&again), rendered);
        }
    }
}
