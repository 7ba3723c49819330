//! Text descriptors: a finite, single-line description of any stream built
//! from the constructions and combinators in this crate.
//!
//! ```text
//! node        := kind "{" params "}"
//!              | combinator "(" node ("," node)* ["," params] ")"
//! kind        := lazy | hierarchical | rekey | sponge | xor-multi | composite
//! combinator  := xor | slice | transform
//! params      := key "=" value ("," key "=" value)*
//! ```
//!
//! Seeds are lowercase hex, integers are canonical decimal, hash names are
//! those of [`HashSpec`]. The canonical form lists params in lexicographic
//! key order and spells out every parameter, including defaults.
//!
//! Composite params are the parameters of its four parts, prefixed with
//! `hier.`, `rekey.`, `sponge.` and `xor.`. A xor-multi hash set is written
//! `sha256+sha512+...` in set order.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{AlgebraError, ByteTransform, Slice, Transform, Xor};
use crate::constructions::{
    Composite, Hierarchical, Lazy, Rekeying, SpecError, Sponge, XorMulti, DEFAULT_CAPACITY_BITS,
    DEFAULT_CHUNK_SIZE, DEFAULT_EPOCH_SIZE, DEFAULT_RATE_BITS, DEFAULT_REKEY_INTERVAL,
};
use crate::digest::ExtendedDigest;
use crate::hash_backend::HashSpec;

/// A parsed, validated descriptor. Evaluating it is the same as evaluating
/// the stream it describes.
#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor {
    Lazy(Lazy),
    Hierarchical(Hierarchical),
    Rekey(Rekeying),
    Sponge(Sponge),
    XorMulti(XorMulti),
    Composite(Composite),
    Xor(Xor<Box<Descriptor>, Box<Descriptor>>),
    Slice(Slice<Box<Descriptor>>),
    Transform(Transform<Box<Descriptor>>),
}

impl ExtendedDigest for Descriptor {
    fn get(&self, index: u64) -> u8 {
        match self {
            Descriptor::Lazy(d) => d.get(index),
            Descriptor::Hierarchical(d) => d.get(index),
            Descriptor::Rekey(d) => d.get(index),
            Descriptor::Sponge(d) => d.get(index),
            Descriptor::XorMulti(d) => d.get(index),
            Descriptor::Composite(d) => d.get(index),
            Descriptor::Xor(d) => d.get(index),
            Descriptor::Slice(d) => d.get(index),
            Descriptor::Transform(d) => d.get(index),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("transform with an anonymous function has no descriptor form")]
    AnonymousTransform,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("trailing input")]
    TrailingInput,
    #[error("unknown construction or combinator `{0}`")]
    UnknownKind(String),
    #[error("`{kind}` has no parameter `{key}`")]
    UnknownParam { kind: String, key: String },
    #[error("parameter `{0}` given twice")]
    DuplicateParam(String),
    #[error("`{kind}` requires parameter `{key}`")]
    MissingParam { kind: String, key: String },
    #[error("`{0}` takes {1} sub-descriptor(s)")]
    Arity(String, usize),
    #[error("invalid hex digit `{0}`")]
    BadHexDigit(char),
    #[error("hex string has odd length")]
    OddHexLength,
    #[error("unknown hash `{0}`")]
    UnknownHash(String),
    #[error("`{0}` is not a canonical decimal integer in range")]
    BadInteger(String),
    #[error("unknown transform `{0}` (expected `not` or `add:<0-255>`)")]
    BadTransform(String),
    #[error("invalid construction: {0}")]
    Spec(#[from] SpecError),
    #[error("invalid combinator: {0}")]
    Algebra(#[from] AlgebraError),
}

impl Descriptor {
    /// Canonical single-line text.
    pub fn serialize(&self) -> Result<String, SerializeError> {
        let mut out = String::new();
        self.write(&mut out)?;
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut p = Parser { src: text, pos: 0 };
        let raw = p.node()?;
        if p.pos != text.len() {
            return Err(p.err(ParseErrorKind::TrailingInput));
        }
        build(&raw)
    }

    fn write(&self, out: &mut String) -> Result<(), SerializeError> {
        match self {
            Descriptor::Lazy(d) => write_kind(out, "lazy", lazy_params(d)),
            Descriptor::Hierarchical(d) => write_kind(out, "hierarchical", hier_params(d)),
            Descriptor::Rekey(d) => write_kind(out, "rekey", rekey_params(d)),
            Descriptor::Sponge(d) => write_kind(out, "sponge", sponge_params(d)),
            Descriptor::XorMulti(d) => write_kind(out, "xor-multi", xor_multi_params(d)),
            Descriptor::Composite(c) => {
                let mut params = Vec::new();
                let mut prefixed = |prefix: &str, ps: Vec<(String, String)>| {
                    params.extend(ps.into_iter().map(|(k, v)| (format!("{prefix}.{k}"), v)));
                };
                prefixed("hier", hier_params(&c.hierarchical));
                prefixed("rekey", rekey_params(&c.rekey));
                prefixed("sponge", sponge_params(&c.sponge));
                prefixed("xor", xor_multi_params(&c.xor));
                write_kind(out, "composite", params);
            }
            Descriptor::Xor(x) => {
                out.push_str("xor(");
                x.left.write(out)?;
                out.push(',');
                x.right.write(out)?;
                out.push(')');
            }
            Descriptor::Slice(s) => {
                out.push_str("slice(");
                s.inner().write(out)?;
                out.push_str(&format!(",start={},step={})", s.start(), s.step()));
            }
            Descriptor::Transform(t) => {
                let name = t.f.name().ok_or(SerializeError::AnonymousTransform)?;
                out.push_str("transform(");
                t.inner.write(out)?;
                out.push_str(&format!(",op={name})"));
            }
        }
        Ok(())
    }

    pub fn xor(a: Descriptor, b: Descriptor) -> Self {
        Descriptor::Xor(Xor {
            left: Box::new(a),
            right: Box::new(b),
        })
    }

    pub fn slice(d: Descriptor, start: u64, step: u64) -> Result<Self, AlgebraError> {
        Slice::new(Box::new(d), start, step).map(Descriptor::Slice)
    }

    pub fn transform(d: Descriptor, f: ByteTransform) -> Self {
        Descriptor::Transform(Transform {
            inner: Box::new(d),
            f,
        })
    }
}

impl FromStr for Descriptor {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Descriptor::parse(s)
    }
}

impl fmt::Display for Descriptor {
    /// Canonical text, or a placeholder when the tree holds an anonymous
    /// transform.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.serialize() {
            Ok(s) => f.write_str(&s),
            Err(_) => f.write_str("<non-serializable descriptor>"),
        }
    }
}

fn write_kind(out: &mut String, kind: &str, mut params: Vec<(String, String)>) {
    params.sort();
    out.push_str(kind);
    out.push('{');
    for (i, (k, v)) in params.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(k);
        out.push('=');
        out.push_str(v);
    }
    out.push('}');
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn lazy_params(d: &Lazy) -> Vec<(String, String)> {
    vec![kv("hash", d.hash_spec()), kv("seed", hex::encode(d.seed()))]
}

fn hier_params(d: &Hierarchical) -> Vec<(String, String)> {
    vec![
        kv("chunk_size", d.chunk_size()),
        kv("epoch_size", d.epoch_size()),
        kv("hash", d.hash_spec()),
        kv("seed", hex::encode(d.master_seed())),
    ]
}

fn rekey_params(d: &Rekeying) -> Vec<(String, String)> {
    vec![
        kv("hash", d.hash_spec()),
        kv("interval", d.interval()),
        kv("seed", hex::encode(d.seed())),
    ]
}

fn sponge_params(d: &Sponge) -> Vec<(String, String)> {
    vec![
        kv("capacity", d.capacity_bits()),
        kv("hash", d.hash_spec()),
        kv("rate", d.rate_bits()),
        kv("seed", hex::encode(d.seed())),
    ]
}

fn xor_multi_params(d: &XorMulti) -> Vec<(String, String)> {
    let hashes: Vec<String> = d.hashes().iter().map(HashSpec::name).collect();
    vec![
        kv("hashes", hashes.join("+")),
        kv("seed", hex::encode(d.seed())),
    ]
}

// ---------------------------------------------------------------------------
// Syntax

#[derive(Debug)]
struct Word<'a> {
    text: &'a str,
    pos: usize,
}

#[derive(Debug)]
struct RawParam<'a> {
    key: Word<'a>,
    value: Word<'a>,
}

#[derive(Debug)]
enum Shape {
    Braces,
    Parens,
}

#[derive(Debug)]
struct RawNode<'a> {
    name: Word<'a>,
    shape: Shape,
    children: Vec<RawNode<'a>>,
    params: Vec<RawParam<'a>>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '{' | '}' | '(' | ')' | ',' | '=')
}

impl<'a> Parser<'a> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(c) => self.err(ParseErrorKind::UnexpectedChar(c)),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn word(&mut self) -> Result<Word<'a>, ParseError> {
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !is_word_char(c))
            .unwrap_or(self.src.len() - start);
        if len == 0 {
            return Err(self.unexpected());
        }
        self.pos += len;
        Ok(Word {
            text: &self.src[start..start + len],
            pos: start,
        })
    }

    fn param(&mut self) -> Result<RawParam<'a>, ParseError> {
        let key = self.word()?;
        self.expect('=')?;
        let value = self.word()?;
        Ok(RawParam { key, value })
    }

    fn node(&mut self) -> Result<RawNode<'a>, ParseError> {
        let name = self.word()?;
        match self.peek() {
            Some('{') => {
                self.pos += 1;
                let mut params = Vec::new();
                if self.peek() != Some('}') {
                    params.push(self.param()?);
                    while self.peek() == Some(',') {
                        self.pos += 1;
                        params.push(self.param()?);
                    }
                }
                self.expect('}')?;
                Ok(RawNode {
                    name,
                    shape: Shape::Braces,
                    children: Vec::new(),
                    params,
                })
            }
            Some('(') => {
                self.pos += 1;
                let mut children = vec![self.node()?];
                let mut params = Vec::new();
                while self.peek() == Some(',') {
                    self.pos += 1;
                    if params.is_empty() && !self.at_param() {
                        children.push(self.node()?);
                    } else {
                        params.push(self.param()?);
                    }
                }
                self.expect(')')?;
                Ok(RawNode {
                    name,
                    shape: Shape::Parens,
                    children,
                    params,
                })
            }
            _ => Err(self.unexpected()),
        }
    }

    // A param is a word followed by '='; a node is a word followed by '{' or '('.
    fn at_param(&self) -> bool {
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !is_word_char(c)).unwrap_or(rest.len());
        rest[len..].starts_with('=')
    }
}

// ---------------------------------------------------------------------------
// Semantics

struct Params<'r, 'a> {
    kind: &'a str,
    kind_pos: usize,
    params: &'r [RawParam<'a>],
    used: HashSet<String>,
}

impl<'r, 'a> Params<'r, 'a> {
    fn new(node: &'r RawNode<'a>) -> Result<Self, ParseError> {
        let mut seen = HashSet::new();
        for p in &node.params {
            if !seen.insert(p.key.text) {
                return Err(ParseError {
                    offset: p.key.pos,
                    kind: ParseErrorKind::DuplicateParam(p.key.text.to_string()),
                });
            }
        }
        Ok(Params {
            kind: node.name.text,
            kind_pos: node.name.pos,
            params: &node.params,
            used: HashSet::new(),
        })
    }

    fn optional(&mut self, key: &str) -> Option<&'r Word<'a>> {
        let found = self.params.iter().find(|p| p.key.text == key)?;
        self.used.insert(key.to_string());
        Some(&found.value)
    }

    fn required(&mut self, key: &str) -> Result<&'r Word<'a>, ParseError> {
        self.optional(key).ok_or_else(|| ParseError {
            offset: self.kind_pos,
            kind: ParseErrorKind::MissingParam {
                kind: self.kind.to_string(),
                key: key.to_string(),
            },
        })
    }

    fn finish(self) -> Result<(), ParseError> {
        match self.params.iter().find(|p| !self.used.contains(p.key.text)) {
            Some(p) => Err(ParseError {
                offset: p.key.pos,
                kind: ParseErrorKind::UnknownParam {
                    kind: self.kind.to_string(),
                    key: p.key.text.to_string(),
                },
            }),
            None => Ok(()),
        }
    }

    fn seed(&mut self, key: &str) -> Result<Vec<u8>, ParseError> {
        parse_hex(self.required(key)?)
    }

    fn hash(&mut self, key: &str) -> Result<HashSpec, ParseError> {
        parse_hash(self.required(key)?)
    }

    fn int<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, ParseError> {
        self.optional(key).map_or(Ok(default), parse_int)
    }

    fn spec<T>(&self, r: Result<T, SpecError>) -> Result<T, ParseError> {
        r.map_err(|e| ParseError {
            offset: self.kind_pos,
            kind: e.into(),
        })
    }
}

fn parse_hex(w: &Word<'_>) -> Result<Vec<u8>, ParseError> {
    if let Some((i, c)) = w
        .text
        .char_indices()
        .find(|(_, c)| !matches!(c, '0'..='9' | 'a'..='f'))
    {
        return Err(ParseError {
            offset: w.pos + i,
            kind: ParseErrorKind::BadHexDigit(c),
        });
    }
    if !w.text.len().is_multiple_of(2) {
        return Err(ParseError {
            offset: w.pos + w.text.len(),
            kind: ParseErrorKind::OddHexLength,
        });
    }
    Ok(hex::decode(w.text).expect("validated hex"))
}

fn parse_hash(w: &Word<'_>) -> Result<HashSpec, ParseError> {
    w.text.parse().map_err(|_| ParseError {
        offset: w.pos,
        kind: ParseErrorKind::UnknownHash(w.text.to_string()),
    })
}

fn parse_int<T: FromStr>(w: &Word<'_>) -> Result<T, ParseError> {
    let t = w.text;
    let canonical =
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) && (t == "0" || !t.starts_with('0'));
    match t.parse() {
        Ok(v) if canonical => Ok(v),
        _ => Err(ParseError {
            offset: w.pos,
            kind: ParseErrorKind::BadInteger(t.to_string()),
        }),
    }
}

fn parse_transform(w: &Word<'_>) -> Result<ByteTransform, ParseError> {
    let bad = || ParseError {
        offset: w.pos,
        kind: ParseErrorKind::BadTransform(w.text.to_string()),
    };
    if w.text == "not" {
        return Ok(ByteTransform::Not);
    }
    let k = w.text.strip_prefix("add:").ok_or_else(bad)?;
    let k = Word {
        text: k,
        pos: w.pos + 4,
    };
    parse_int::<u8>(&k)
        .map(ByteTransform::Add)
        .map_err(|_| bad())
}

fn prefixed(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn build_hier(p: &mut Params<'_, '_>, prefix: &str) -> Result<Hierarchical, ParseError> {
    let key = |k: &str| prefixed(prefix, k);
    let seed = p.seed(&key("seed"))?;
    let hash = p.hash(&key("hash"))?;
    let epoch = p.int(&key("epoch_size"), DEFAULT_EPOCH_SIZE)?;
    let chunk = p.int(&key("chunk_size"), DEFAULT_CHUNK_SIZE)?;
    p.spec(Hierarchical::with_sizes(seed, hash, epoch, chunk))
}

fn build_rekey(p: &mut Params<'_, '_>, prefix: &str) -> Result<Rekeying, ParseError> {
    let key = |k: &str| prefixed(prefix, k);
    let seed = p.seed(&key("seed"))?;
    let hash = p.hash(&key("hash"))?;
    let interval = p.int(&key("interval"), DEFAULT_REKEY_INTERVAL)?;
    p.spec(Rekeying::with_interval(seed, hash, interval))
}

fn build_sponge(p: &mut Params<'_, '_>, prefix: &str) -> Result<Sponge, ParseError> {
    let key = |k: &str| prefixed(prefix, k);
    let seed = p.seed(&key("seed"))?;
    let hash = p.hash(&key("hash"))?;
    let rate = p.int(&key("rate"), DEFAULT_RATE_BITS)?;
    let capacity = p.int(&key("capacity"), DEFAULT_CAPACITY_BITS)?;
    p.spec(Sponge::with_widths(seed, hash, rate, capacity))
}

fn build_xor_multi(p: &mut Params<'_, '_>, prefix: &str) -> Result<XorMulti, ParseError> {
    let key = |k: &str| prefixed(prefix, k);
    let seed = p.seed(&key("seed"))?;
    let list = p.required(&key("hashes"))?;
    let mut hashes = Vec::new();
    let mut offset = list.pos;
    for name in list.text.split('+') {
        hashes.push(parse_hash(&Word {
            text: name,
            pos: offset,
        })?);
        offset += name.len() + 1;
    }
    p.spec(XorMulti::new(seed, hashes))
}

fn build(node: &RawNode<'_>) -> Result<Descriptor, ParseError> {
    let kind = node.name.text;
    let unknown = || ParseError {
        offset: node.name.pos,
        kind: ParseErrorKind::UnknownKind(kind.to_string()),
    };
    let arity = |n: usize| {
        if node.children.len() == n {
            Ok(())
        } else {
            Err(ParseError {
                offset: node.name.pos,
                kind: ParseErrorKind::Arity(kind.to_string(), n),
            })
        }
    };
    let mut p = Params::new(node)?;
    let d = match node.shape {
        Shape::Braces => match kind {
            "lazy" => {
                let seed = p.seed("seed")?;
                let hash = p.hash("hash")?;
                Descriptor::Lazy(p.spec(Lazy::new(seed, hash))?)
            }
            "hierarchical" => Descriptor::Hierarchical(build_hier(&mut p, "")?),
            "rekey" => Descriptor::Rekey(build_rekey(&mut p, "")?),
            "sponge" => Descriptor::Sponge(build_sponge(&mut p, "")?),
            "xor-multi" => Descriptor::XorMulti(build_xor_multi(&mut p, "")?),
            "composite" => {
                let hierarchical = build_hier(&mut p, "hier")?;
                let rekey = build_rekey(&mut p, "rekey")?;
                let sponge = build_sponge(&mut p, "sponge")?;
                let xor = build_xor_multi(&mut p, "xor")?;
                Descriptor::Composite(Composite::new(xor, rekey, hierarchical, sponge))
            }
            _ => return Err(unknown()),
        },
        Shape::Parens => match kind {
            "xor" => {
                arity(2)?;
                Descriptor::xor(build(&node.children[0])?, build(&node.children[1])?)
            }
            "slice" => {
                arity(1)?;
                let inner = build(&node.children[0])?;
                let start = parse_int(p.required("start")?)?;
                let step_word = p.required("step")?;
                let step = parse_int(step_word)?;
                Descriptor::slice(inner, start, step).map_err(|e| ParseError {
                    offset: step_word.pos,
                    kind: e.into(),
                })?
            }
            "transform" => {
                arity(1)?;
                let inner = build(&node.children[0])?;
                let f = parse_transform(p.required("op")?)?;
                Descriptor::transform(inner, f)
            }
            _ => return Err(unknown()),
        },
    };
    p.finish()?;
    Ok(d)
}
