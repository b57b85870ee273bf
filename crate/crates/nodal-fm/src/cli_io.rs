//! Text formats: descriptor strings, module JSON, Graphviz output.
//!
//! Descriptor grammar (whitespace is ignored everywhere):
//!
//! ```text
//! B[d=(1,-1);m=1;l=5]        band sheaf
//! S[d=(-1,0,1)]              string sheaf
//! P[l=2/3;len=2]             O/m^len at a smooth point
//! Mq[(2,2)(3,4);m=1;l=-1/2]  band module at the node
//! Nq[2(3,2)1]  Nq[0()0]      string module at the node
//! ```

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::labels::{Arrow, BandLabel, Diagram, EdgeMap, ModuleLabel, StringLabel};
use crate::linalg::{Matrix, Q};
use crate::module::{FiniteLengthModule, ModuleError};
use crate::sheaf::{BandDesc, SheafDesc, StringDesc, TorsionDesc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Sheaf(SheafDesc),
    Torsion(TorsionDesc),
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Sheaf(s) => s.fmt(f),
            Descriptor::Torsion(t) => t.fmt(f),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("at byte {offset}: {message}")]
    Semantic { offset: usize, message: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::Semantic { offset, .. } => *offset,
        }
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn fail<T>(&mut self, expected: &str) -> Result<T, ParseError> {
        self.skip_ws();
        Err(ParseError::Syntax { offset: self.pos, expected: expected.to_owned() })
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        let mut probe = self.pos;
        for want in tok.chars() {
            while let Some(c) = self.src[probe..].chars().next() {
                if !c.is_whitespace() {
                    break;
                }
                probe += c.len_utf8();
            }
            match self.src[probe..].chars().next() {
                Some(c) if c == want => probe += c.len_utf8(),
                _ => return false,
            }
        }
        self.pos = probe;
        true
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.fail(&format!("`{tok}`"))
        }
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let len = self.src[self.pos..].bytes().take_while(u8::is_ascii_digit).count();
        let out = &self.src[self.pos..self.pos + len];
        self.pos += len;
        (len > 0).then(|| out.to_owned())
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat("-");
        if !neg {
            self.eat("+");
        }
        match self.digits() {
            Some(d) => {
                let v: BigInt = d.parse().expect("decimal digits");
                Ok(if neg { -v } else { v })
            }
            None => self.fail("an integer"),
        }
    }

    fn small_int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let v = self.integer()?;
        i64::try_from(v).map_err(|_| ParseError::Semantic { offset: at, message: "integer out of range".into() })
    }

    fn natural(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let v = self.small_int()?;
        usize::try_from(v).map_err(|_| ParseError::Semantic { offset: at, message: "expected a nonnegative integer".into() })
    }

    fn scalar(&mut self) -> Result<Q, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let num = self.integer()?;
        if self.eat("/") {
            let den = self.integer()?;
            if den.is_zero() {
                return Err(ParseError::Semantic { offset: at, message: "zero denominator".into() });
            }
            Ok(Q::new(num, den))
        } else {
            Ok(Q::from_integer(num))
        }
    }

    fn offset(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn nonzero_scalar(&mut self) -> Result<Q, ParseError> {
        let at = self.offset();
        let v = self.scalar()?;
        if v.is_zero() {
            return Err(ParseError::Semantic { offset: at, message: "lambda must be nonzero".into() });
        }
        Ok(v)
    }

    fn multiplicity(&mut self) -> Result<usize, ParseError> {
        let at = self.offset();
        let v = self.natural()?;
        if v == 0 {
            return Err(ParseError::Semantic { offset: at, message: "must be at least 1".into() });
        }
        Ok(v)
    }

    fn int_list(&mut self) -> Result<Vec<i64>, ParseError> {
        self.expect("(")?;
        let mut out = vec![self.small_int()?];
        while self.eat(",") {
            out.push(self.small_int()?);
        }
        self.expect(")")?;
        Ok(out)
    }

    fn pair(&mut self) -> Result<(usize, usize), ParseError> {
        self.expect("(")?;
        let a = self.natural()?;
        self.expect(",")?;
        let b = self.natural()?;
        self.expect(")")?;
        Ok((a, b))
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }
}

fn semantic(offset: usize, e: impl fmt::Display) -> ParseError {
    ParseError::Semantic { offset, message: e.to_string() }
}

pub fn parse(text: &str) -> Result<Descriptor, ParseError> {
    let mut c = Cursor { src: text, pos: 0 };
    c.skip_ws();
    let start = c.pos;
    let out = if c.eat("Mq[") {
        let q_at = c.offset();
        let mut q = vec![c.pair()?];
        while c.peek() == Some('(') {
            q.push(c.pair()?);
        }
        c.expect(";")?;
        c.expect("m=")?;
        let m = c.multiplicity()?;
        c.expect(";")?;
        c.expect("l=")?;
        let l = c.nonzero_scalar()?;
        c.expect("]")?;
        Descriptor::Torsion(TorsionDesc::SingularBand(BandLabel::new(q, m, l).map_err(|e| semantic(q_at, e))?))
    } else if c.eat("Nq[") {
        let n0 = c.natural()?;
        c.expect("(")?;
        let mut pairs = Vec::new();
        if !c.eat(")") {
            let a = c.natural()?;
            c.expect(",")?;
            let b = c.natural()?;
            c.expect(")")?;
            pairs.push((a, b));
            while c.peek() == Some('(') {
                pairs.push(c.pair()?);
            }
        }
        let tail = c.natural()?;
        c.expect("]")?;
        Descriptor::Torsion(TorsionDesc::SingularString(StringLabel::new(n0, pairs, tail).map_err(|e| semantic(start, e))?))
    } else if c.eat("B[") {
        c.expect("d=")?;
        let d_at = c.offset();
        let d = c.int_list()?;
        c.expect(";")?;
        c.expect("m=")?;
        let m = c.multiplicity()?;
        c.expect(";")?;
        c.expect("l=")?;
        let l = c.nonzero_scalar()?;
        c.expect("]")?;
        Descriptor::Sheaf(SheafDesc::Band(BandDesc::new(d, m, l).map_err(|e| semantic(d_at, e))?))
    } else if c.eat("S[") {
        c.expect("d=")?;
        let d = c.int_list()?;
        c.expect("]")?;
        Descriptor::Sheaf(SheafDesc::String(StringDesc::new(d).map_err(|e| semantic(start, e))?))
    } else if c.eat("P[") {
        c.expect("l=")?;
        let l = c.nonzero_scalar()?;
        c.expect(";")?;
        c.expect("len=")?;
        let len = c.multiplicity()?;
        c.expect("]")?;
        Descriptor::Torsion(TorsionDesc::smooth_point(l, len).map_err(|e| semantic(start, e))?)
    } else {
        return c.fail("one of `B[`, `S[`, `P[`, `Mq[`, `Nq[`");
    };
    if !c.at_end() {
        return c.fail("end of input");
    }
    Ok(out)
}

pub fn parse_sheaf(text: &str) -> Result<SheafDesc, ParseError> {
    match parse(text)? {
        Descriptor::Sheaf(s) => Ok(s),
        Descriptor::Torsion(_) => Err(ParseError::Syntax { offset: 0, expected: "a sheaf descriptor `B[..]` or `S[..]`".into() }),
    }
}

pub fn parse_torsion(text: &str) -> Result<TorsionDesc, ParseError> {
    match parse(text)? {
        Descriptor::Torsion(t) => Ok(t),
        Descriptor::Sheaf(_) => Err(ParseError::Syntax { offset: 0, expected: "a torsion descriptor `Mq[..]`, `Nq[..]` or `P[..]`".into() }),
    }
}

/// Parses `p/q` or an integer.
pub fn parse_scalar(text: &str) -> Result<Q, ParseError> {
    let mut c = Cursor { src: text, pos: 0 };
    let v = c.scalar()?;
    if !c.at_end() {
        return c.fail("end of input");
    }
    Ok(v)
}

/// Serialized form of a finite length module over `k[[x,y]]/(xy)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub field: String,
    pub dim: usize,
    #[serde(rename = "X")]
    pub x: Vec<Vec<String>>,
    #[serde(rename = "Y")]
    pub y: Vec<Vec<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("field {0:?} is not supported; only \"Q\" is")]
    Field(String),
    #[error("{which} must be {dim} x {dim}")]
    Shape { which: &'static str, dim: usize },
    #[error("entry {0:?} is not a rational number")]
    Scalar(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

impl ModuleJson {
    pub fn from_module(m: &FiniteLengthModule) -> Self {
        let rows = |a: &Matrix| (0..a.rows()).map(|i| a.row(i).iter().map(Q::to_string).collect()).collect();
        ModuleJson { field: "Q".into(), dim: m.dim(), x: rows(m.x()), y: rows(m.y()) }
    }

    pub fn to_module(&self) -> Result<FiniteLengthModule, JsonError> {
        if self.field != "Q" {
            return Err(JsonError::Field(self.field.clone()));
        }
        let mat = |rows: &[Vec<String>], which: &'static str| -> Result<Matrix, JsonError> {
            if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                return Err(JsonError::Shape { which, dim: self.dim });
            }
            let mut out = Matrix::zeros(self.dim, self.dim);
            for (i, r) in rows.iter().enumerate() {
                for (j, s) in r.iter().enumerate() {
                    out[(i, j)] = parse_scalar(s).map_err(|_| JsonError::Scalar(s.clone()))?;
                }
            }
            Ok(out)
        };
        Ok(FiniteLengthModule::new(mat(&self.x, "X")?, mat(&self.y, "Y")?)?)
    }
}

pub fn module_to_json(m: &FiniteLengthModule) -> String {
    serde_json::to_string_pretty(&ModuleJson::from_module(m)).expect("plain data serializes")
}

pub fn module_from_json(text: &str) -> Result<FiniteLengthModule, JsonError> {
    serde_json::from_str::<ModuleJson>(text)?.to_module()
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("{0} is supported at a smooth point and has no diagram")]
pub struct NoDiagram(pub String);

/// Graphviz text for the diagram of a module at the node.
pub fn emit_dot(t: &TorsionDesc) -> Result<String, NoDiagram> {
    let label = t.label().ok_or_else(|| NoDiagram(t.to_string()))?;
    let diagram = match &label {
        ModuleLabel::Band(b) => Diagram::of_band(&b.canonical()),
        ModuleLabel::String(_) => Diagram::of_label(&label),
    };
    Ok(diagram_dot(&diagram, &label.to_string()))
}

pub fn diagram_dot(d: &Diagram, title: &str) -> String {
    let mut s = String::new();
    writeln!(s, "digraph module {{").unwrap();
    writeln!(s, "  label=\"{}\";", title.replace('"', "'")).unwrap();
    writeln!(s, "  node [shape=plaintext];").unwrap();
    let space = if d.block == 1 { "k".to_owned() } else { format!("k^{}", d.block) };
    for (i, name) in d.vertices.iter().enumerate() {
        writeln!(s, "  v{i} [label=\"{space}\", tooltip=\"{name}\"];").unwrap();
    }
    let m = d.block;
    let lambda = d.lambda.as_ref().map(Q::to_string).unwrap_or_default();
    for e in &d.edges {
        let letter = match e.arrow {
            Arrow::X => "x",
            Arrow::Y => "y",
        };
        let map = match e.map {
            EdgeMap::Identity => format!("I_{m}"),
            EdgeMap::NegIdentity => format!("-I_{m}"),
            EdgeMap::NegJordanInverse => format!("-J_{m}({lambda})^-1"),
        };
        let text = if d.lambda.is_some() { format!("{letter} {map}") } else { letter.to_owned() };
        writeln!(s, "  v{} -> v{} [label=\"{text}\"];", e.from, e.to).unwrap();
    }
    s.push_str("}\n");
    s
}
