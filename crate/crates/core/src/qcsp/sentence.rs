//! Prenex sentences over the edge relation.
//!
//! Text grammar: `A x E y : edge(x,y) eq(x,y) in(y,{0,2})`. Prefix tokens
//! `A <name>` / `E <name>`, a colon, then whitespace-separated atoms. `#`
//! starts a comment. Domain vertices may be written `2` or `v2`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::QcspError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantifier {
    #[serde(rename = "A")]
    Forall,
    #[serde(rename = "E")]
    Exists,
}

impl Quantifier {
    pub fn symbol(self) -> &'static str {
        match self {
            Quantifier::Forall => "A",
            Quantifier::Exists => "E",
        }
    }
}

/// Atoms refer to variables by prefix position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Edge(usize, usize),
    Eq(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcspSentence {
    prefix: Vec<(Quantifier, String)>,
    atoms: Vec<Atom>,
    /// Variable -> sorted allowed vertices. Acts as a conjunct `x in D`.
    domains: BTreeMap<usize, Vec<usize>>,
}

impl QcspSentence {
    pub fn new(
        prefix: Vec<(Quantifier, String)>,
        atoms: Vec<Atom>,
        domains: BTreeMap<usize, Vec<usize>>,
    ) -> Result<Self, QcspError> {
        let mut seen = std::collections::HashSet::new();
        for (_, name) in &prefix {
            if !seen.insert(name.as_str()) {
                return Err(QcspError::DuplicateVariable(name.clone()));
            }
        }
        let k = prefix.len();
        let bad = |i: usize| QcspError::Undeclared {
            name: format!("#{i}"),
            line: 0,
            column: 0,
        };
        for atom in &atoms {
            let (a, b) = atom.vars();
            if a >= k {
                return Err(bad(a));
            }
            if b >= k {
                return Err(bad(b));
            }
        }
        let mut clean = BTreeMap::new();
        for (v, mut d) in domains {
            if v >= k {
                return Err(bad(v));
            }
            d.sort_unstable();
            d.dedup();
            clean.insert(v, d);
        }
        Ok(QcspSentence {
            prefix,
            atoms,
            domains: clean,
        })
    }

    /// Builds a sentence with generated names `x0, x1, ...`.
    pub fn from_indices(quantifiers: &[Quantifier], atoms: Vec<Atom>) -> Self {
        let prefix = quantifiers
            .iter()
            .enumerate()
            .map(|(i, &q)| (q, format!("x{i}")))
            .collect();
        QcspSentence::new(prefix, atoms, BTreeMap::new()).expect("generated sentence")
    }

    pub fn prefix(&self) -> &[(Quantifier, String)] {
        &self.prefix
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn domains(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.domains
    }

    pub fn var_count(&self) -> usize {
        self.prefix.len()
    }

    pub fn quantifier(&self, v: usize) -> Quantifier {
        self.prefix[v].0
    }

    pub fn name(&self, v: usize) -> &str {
        &self.prefix[v].1
    }

    pub fn universal_count(&self) -> usize {
        self.prefix.iter().filter(|(q, _)| *q == Quantifier::Forall).count()
    }

    pub fn has_equality(&self) -> bool {
        self.atoms.iter().any(|a| matches!(a, Atom::Eq(..)))
    }

    /// Adds (intersects) a domain restriction.
    pub fn restrict(&mut self, v: usize, allowed: &[usize]) {
        let mut d: Vec<usize> = allowed.to_vec();
        d.sort_unstable();
        d.dedup();
        match self.domains.get_mut(&v) {
            Some(old) => old.retain(|x| d.contains(x)),
            None => {
                self.domains.insert(v, d);
            }
        }
    }

    /// Flips the quantifier of variable `v`.
    pub fn with_quantifier(&self, v: usize, q: Quantifier) -> Self {
        let mut s = self.clone();
        s.prefix[v].0 = q;
        s
    }

    /// Drops all equality atoms (only sound on one-vertex templates).
    pub fn without_equalities(&self) -> Self {
        let mut s = self.clone();
        s.atoms.retain(|a| matches!(a, Atom::Edge(..)));
        s
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Atom {
    pub fn vars(&self) -> (usize, usize) {
        match *self {
            Atom::Edge(a, b) | Atom::Eq(a, b) => (a, b),
        }
    }
}

impl fmt::Display for QcspSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .prefix
            .iter()
            .map(|(q, name)| format!("{} {}", q.symbol(), name))
            .collect();
        parts.push(":".into());
        for atom in &self.atoms {
            parts.push(match *atom {
                Atom::Edge(a, b) => format!("edge({},{})", self.name(a), self.name(b)),
                Atom::Eq(a, b) => format!("eq({},{})", self.name(a), self.name(b)),
            });
        }
        for (&v, d) in &self.domains {
            let list: Vec<String> = d.iter().map(usize::to_string).collect();
            parts.push(format!("in({},{{{}}})", self.name(v), list.join(",")));
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Number(usize),
    Punct(char),
}

struct Lexer {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(text: &str) -> Result<Lexer, QcspError> {
    let mut tokens = Vec::new();
    let mut end = (1, 1);
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (lno, col) = (li + 1, i + 1);
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push((Token::Ident(chars[start..i].iter().collect()), lno, col));
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let value = s.parse().map_err(|_| QcspError::Parse {
                    line: lno,
                    column: col,
                    message: format!("number `{s}` too large"),
                })?;
                tokens.push((Token::Number(value), lno, col));
            } else if "(),{}:".contains(c) {
                tokens.push((Token::Punct(c), lno, col));
                i += 1;
            } else {
                return Err(QcspError::Parse {
                    line: lno,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
        end = (li + 1, chars.len() + 1);
    }
    Ok(Lexer {
        tokens,
        pos: 0,
        end,
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> QcspError {
        let (line, column) = self.here();
        QcspError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_punct(&mut self, c: char) -> Result<(), QcspError> {
        match self.peek() {
            Some(Token::Punct(p)) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected `{c}`"))),
        }
    }

    fn ident(&mut self) -> Result<String, QcspError> {
        match self.peek() {
            Some(Token::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a variable name")),
        }
    }

    fn vertex(&mut self) -> Result<usize, QcspError> {
        let err = self.error("expected a vertex (`3` or `v3`)");
        match self.next() {
            Some(Token::Number(n)) => Ok(n),
            Some(Token::Ident(s)) => s
                .strip_prefix('v')
                .and_then(|d| d.parse().ok())
                .ok_or(err),
            _ => Err(err),
        }
    }
}

pub fn parse_sentence(text: &str) -> Result<QcspSentence, QcspError> {
    let mut lx = lex(text)?;
    let mut prefix: Vec<(Quantifier, String)> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    loop {
        match lx.peek() {
            Some(Token::Punct(':')) => {
                lx.pos += 1;
                break;
            }
            Some(Token::Ident(q)) if q == "A" || q == "E" => {
                let q = if q == "A" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                lx.pos += 1;
                let name = lx.ident()?;
                if index.insert(name.clone(), prefix.len()).is_some() {
                    return Err(QcspError::DuplicateVariable(name));
                }
                prefix.push((q, name));
            }
            _ => return Err(lx.error("expected `A <name>`, `E <name>` or `:`")),
        }
    }
    let mut atoms = Vec::new();
    let mut domains: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let lookup = |lx: &mut Lexer, index: &BTreeMap<String, usize>| -> Result<usize, QcspError> {
        let (line, column) = lx.here();
        let name = lx.ident()?;
        index.get(&name).copied().ok_or(QcspError::Undeclared { name, line, column })
    };
    while lx.peek().is_some() {
        let kind = lx.ident()?;
        lx.expect_punct('(')?;
        match kind.as_str() {
            "edge" | "eq" => {
                let a = lookup(&mut lx, &index)?;
                lx.expect_punct(',')?;
                let b = lookup(&mut lx, &index)?;
                atoms.push(if kind == "edge" {
                    Atom::Edge(a, b)
                } else {
                    Atom::Eq(a, b)
                });
            }
            "in" => {
                let a = lookup(&mut lx, &index)?;
                lx.expect_punct(',')?;
                lx.expect_punct('{')?;
                let mut set = Vec::new();
                if lx.peek() != Some(&Token::Punct('}')) {
                    set.push(lx.vertex()?);
                    while lx.peek() == Some(&Token::Punct(',')) {
                        lx.pos += 1;
                        set.push(lx.vertex()?);
                    }
                }
                lx.expect_punct('}')?;
                set.sort_unstable();
                set.dedup();
                match domains.get_mut(&a) {
                    Some(old) => old.retain(|x| set.contains(x)),
                    None => {
                        domains.insert(a, set);
                    }
                }
            }
            other => {
                lx.pos -= 2;
                return Err(lx.error(format!("unknown atom `{other}`")));
            }
        }
        lx.expect_punct(')')?;
    }
    QcspSentence::new(prefix, atoms, domains)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum AtomJson {
    Edge(String, String),
    Eq(String, String),
    In(String, Vec<usize>),
}

#[derive(Debug, Serialize, Deserialize)]
struct SentenceJson {
    prefix: Vec<(Quantifier, String)>,
    atoms: Vec<AtomJson>,
}

impl QcspSentence {
    pub fn to_json(&self) -> String {
        let mut atoms: Vec<AtomJson> = self
            .atoms
            .iter()
            .map(|atom| match *atom {
                Atom::Edge(a, b) => AtomJson::Edge(self.name(a).into(), self.name(b).into()),
                Atom::Eq(a, b) => AtomJson::Eq(self.name(a).into(), self.name(b).into()),
            })
            .collect();
        for (&v, d) in &self.domains {
            atoms.push(AtomJson::In(self.name(v).into(), d.clone()));
        }
        serde_json::to_string(&SentenceJson {
            prefix: self.prefix.clone(),
            atoms,
        })
        .expect("sentence json")
    }

    pub fn from_json(text: &str) -> Result<Self, QcspError> {
        let raw: SentenceJson = serde_json::from_str(text).map_err(|e| QcspError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let index: BTreeMap<&str, usize> = raw
            .prefix
            .iter()
            .enumerate()
            .map(|(i, (_, n))| (n.as_str(), i))
            .collect();
        let find = |name: &str| {
            index.get(name).copied().ok_or(QcspError::Undeclared {
                name: name.into(),
                line: 0,
                column: 0,
            })
        };
        let mut atoms = Vec::new();
        let mut domains: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for atom in &raw.atoms {
            match atom {
                AtomJson::Edge(a, b) => atoms.push(Atom::Edge(find(a)?, find(b)?)),
                AtomJson::Eq(a, b) => atoms.push(Atom::Eq(find(a)?, find(b)?)),
                AtomJson::In(a, d) => {
                    let v = find(a)?;
                    match domains.get_mut(&v) {
                        Some(old) => old.retain(|x| d.contains(x)),
                        None => {
                            domains.insert(v, d.clone());
                        }
                    }
                }
            }
        }
        QcspSentence::new(raw.prefix, atoms, domains)
    }

    /// JSON if the text starts with `{`, the text grammar otherwise.
    pub fn parse_any(text: &str) -> Result<Self, QcspError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            parse_sentence(text)
        }
    }
}

/// Outcome of removing equality atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eliminated {
    Sentence(QcspSentence),
    /// Some equality forces a universal variable to equal an earlier one;
    /// false on every template with at least two vertices.
    ConstantFalse,
}

/// Removes equality atoms by substituting the later (existential) variable
/// with the earlier one. Substituted variables leave the prefix.
pub fn eliminate_equality(s: &QcspSentence) -> Eliminated {
    let k = s.var_count();
    // rep[v]: variable currently standing for v.
    let mut rep: Vec<usize> = (0..k).collect();
    fn find(rep: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while rep[r] != r {
            r = rep[r];
        }
        rep[v] = r;
        r
    }
    for atom in s.atoms() {
        if let Atom::Eq(a, b) = *atom {
            let (ra, rb) = (find(&mut rep, a), find(&mut rep, b));
            if ra == rb {
                continue;
            }
            let (outer, inner) = if ra < rb { (ra, rb) } else { (rb, ra) };
            if s.quantifier(inner) == Quantifier::Forall {
                return Eliminated::ConstantFalse;
            }
            rep[inner] = outer;
        }
    }
    let roots: Vec<usize> = (0..k).map(|v| find(&mut rep, v)).collect();
    let kept: Vec<usize> = (0..k).filter(|&v| roots[v] == v).collect();
    let mut new_index = vec![usize::MAX; k];
    for (i, &v) in kept.iter().enumerate() {
        new_index[v] = i;
    }
    let at = |v: usize| new_index[roots[v]];
    let prefix = kept.iter().map(|&v| s.prefix[v].clone()).collect();
    let atoms = s
        .atoms()
        .iter()
        .filter_map(|atom| match *atom {
            Atom::Edge(a, b) => Some(Atom::Edge(at(a), at(b))),
            Atom::Eq(..) => None,
        })
        .collect();
    let mut out = QcspSentence::new(prefix, atoms, BTreeMap::new()).expect("reindexed sentence");
    for (&v, d) in s.domains() {
        out.restrict(at(v), d);
    }
    Eliminated::Sentence(out)
}
