//! Formula syntax: AST, parser, printer and structural measures.
//!
//! Derived operators are elaborated while parsing, so the AST only has the
//! ten core constructors. The printer re-sugars `true`, `ls2` and `-*` but
//! always prints something that parses back to the identical tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::ParseError;

/// A variable name. `nil` is an ordinary variable that the models treat
/// specially.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Var {
        Var(Arc::from(name))
    }

    pub fn nil() -> Var {
        Var::new(NIL)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_nil(&self) -> bool {
        &*self.0 == NIL
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var::new(s)
    }
}

pub const NIL: &str = "nil";

const RESERVED: [&str; 4] = ["emp", "true", "ls", "ls2"];

/// Checks the user-level identifier syntax `[A-Za-z][A-Za-z0-9_']*` and
/// rejects reserved words.
pub fn is_valid_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') && !RESERVED.contains(&s)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Emp,
    Eq(Var, Var),
    Neq(Var, Var),
    PointsTo(Var, Var),
    Ls(Var, Var),
    Sep(Box<Formula>, Box<Formula>),
    Septract(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn eq(x: impl Into<Var>, y: impl Into<Var>) -> Formula {
        Eq(x.into(), y.into())
    }

    pub fn neq(x: impl Into<Var>, y: impl Into<Var>) -> Formula {
        Neq(x.into(), y.into())
    }

    pub fn pto(x: impl Into<Var>, y: impl Into<Var>) -> Formula {
        PointsTo(x.into(), y.into())
    }

    pub fn ls(x: impl Into<Var>, y: impl Into<Var>) -> Formula {
        Ls(x.into(), y.into())
    }

    /// `ls(x,y) && !(x -> y)`
    pub fn ls2(x: impl Into<Var>, y: impl Into<Var>) -> Formula {
        let (x, y) = (x.into(), y.into());
        Formula::and(Ls(x.clone(), y.clone()), Formula::not(PointsTo(x, y)))
    }

    pub fn sep(a: Formula, b: Formula) -> Formula {
        Sep(Box::new(a), Box::new(b))
    }

    pub fn septract(a: Formula, b: Formula) -> Formula {
        Septract(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Not(Box::new(a))
    }

    /// `emp || !emp`
    pub fn tt() -> Formula {
        Formula::or(Emp, Formula::not(Emp))
    }

    /// `!(a -o !b)`
    pub fn wand(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::septract(a, Formula::not(b)))
    }

    /// `!((x -> nil) -o true)`: x is allocated (or aliases nil).
    pub fn alloc(x: impl Into<Var>) -> Formula {
        Formula::not(Formula::septract(Formula::pto(x, Var::nil()), Formula::tt()))
    }

    /// Unsatisfiable marker that stays inside the core grammar.
    pub fn ff() -> Formula {
        Formula::and(Emp, Formula::not(Emp))
    }

    /// Left-nested separating conjunction; `emp` for an empty list.
    pub fn sep_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::sep).unwrap_or(Emp)
    }

    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or_else(Formula::tt)
    }

    /// Disjunction; the unsatisfiable marker for an empty list.
    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::or).unwrap_or_else(Formula::ff)
    }

    /// The maximal `*`-spine, flattened left to right.
    pub fn sep_conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            if let Sep(a, b) = f {
                walk(a, out);
                walk(b, out);
            } else {
                out.push(f);
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Emp | Eq(..) | Neq(..) | PointsTo(..) | Ls(..))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Emp => {}
            Eq(x, y) | Neq(x, y) | PointsTo(x, y) | Ls(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Sep(a, b) | Septract(a, b) | And(a, b) | Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Not(a) => a.collect_vars(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Emp | Eq(..) | Neq(..) | PointsTo(..) | Ls(..) => 1,
            Sep(a, b) | Septract(a, b) | And(a, b) | Or(a, b) => a.size() + b.size() + 1,
            Not(a) => a.size() + 1,
        }
    }

    /// Chunk size: how many garbage chunks the formula can tell apart.
    pub fn csize(&self) -> u32 {
        match self {
            Emp | Eq(..) | Neq(..) | PointsTo(..) | Ls(..) => 1,
            Sep(a, b) => a.csize() + b.csize(),
            Septract(_, b) => b.csize(),
            And(a, b) | Or(a, b) => a.csize().max(b.csize()),
            Not(a) => a.csize(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Not(_) => false,
            Sep(a, b) | Septract(a, b) | And(a, b) | Or(a, b) => a.is_positive() && b.is_positive(),
            _ => true,
        }
    }

    /// Simultaneous renaming of free variables.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Formula {
        let r = |v: &Var| map.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            Emp => Emp,
            Eq(x, y) => Eq(r(x), r(y)),
            Neq(x, y) => Neq(r(x), r(y)),
            PointsTo(x, y) => PointsTo(r(x), r(y)),
            Ls(x, y) => Ls(r(x), r(y)),
            Sep(a, b) => Formula::sep(a.rename(map), b.rename(map)),
            Septract(a, b) => Formula::septract(a.rename(map), b.rename(map)),
            And(a, b) => Formula::and(a.rename(map), b.rename(map)),
            Or(a, b) => Formula::or(a.rename(map), b.rename(map)),
            Not(a) => Formula::not(a.rename(map)),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let f = p.disj()?;
    match p.peek() {
        Tok::End => Ok(f),
        _ => Err(p.error("unexpected trailing input")),
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Formula, ParseError> {
        parse(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Eq,
    Neq,
    Arrow,
    Bang,
    Star,
    Sept,
    Wand,
    AndAnd,
    OrOr,
    End,
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match two.as_str() {
            "!=" => (Tok::Neq, 2),
            "->" => (Tok::Arrow, 2),
            "-o" => (Tok::Sept, 2),
            "-*" => (Tok::Wand, 2),
            "&&" => (Tok::AndAnd, 2),
            "||" => (Tok::OrOr, 2),
            _ => match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '=' => (Tok::Eq, 1),
                '!' => (Tok::Bang, 1),
                '*' => (Tok::Star, 1),
                c if c.is_ascii_alphabetic() => {
                    let mut j = i;
                    while j < chars.len()
                        && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                    {
                        j += 1;
                    }
                    (Tok::Ident(chars[i..j].iter().collect()), j - i)
                }
                other => {
                    return Err(ParseError::new(l0, c0, format!("unexpected character '{other}'")))
                }
            },
        };
        out.push(Spanned { tok, line: l0, col: c0 });
        i += len;
        col += len;
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: &str) -> ParseError {
        let s = &self.tokens[self.pos];
        ParseError::new(s.line, s.col, msg.to_string())
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conj()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.magic()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            f = Formula::and(f, self.magic()?);
        }
        Ok(f)
    }

    // -o and -* are right-associative and share a level.
    fn magic(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.star()?;
        match self.peek() {
            Tok::Sept => {
                self.bump();
                Ok(Formula::septract(lhs, self.magic()?))
            }
            Tok::Wand => {
                self.bump();
                Ok(Formula::wand(lhs, self.magic()?))
            }
            _ => Ok(lhs),
        }
    }

    fn star(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            f = Formula::sep(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.disj()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "emp" => {
                    self.bump();
                    Ok(Emp)
                }
                "true" => {
                    self.bump();
                    Ok(Formula::tt())
                }
                "ls" | "ls2" if *self.peek2() == Tok::LParen => {
                    self.bump();
                    self.bump();
                    let x = self.var()?;
                    self.expect(Tok::Comma, "','")?;
                    let y = self.var()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(if name == "ls" { Ls(x, y) } else { Formula::ls2(x, y) })
                }
                _ => {
                    let x = self.var()?;
                    let op = self.bump();
                    let y = match op {
                        Tok::Eq | Tok::Neq | Tok::Arrow => self.var()?,
                        _ => {
                            self.pos -= 1;
                            return Err(self.error("expected '=', '!=' or '->' after variable"));
                        }
                    };
                    Ok(match op {
                        Tok::Eq => Eq(x, y),
                        Tok::Neq => Neq(x, y),
                        _ => PointsTo(x, y),
                    })
                }
            },
            Tok::End => Err(self.error("unexpected end of input")),
            _ => Err(self.error("expected a formula")),
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                if RESERVED.contains(&name.as_str()) {
                    return Err(self.error(&format!("reserved word '{name}' used as a variable")));
                }
                self.bump();
                Ok(Var::new(&name))
            }
            _ => Err(self.error("expected a variable")),
        }
    }
}

// Printing levels, loosest first.
const P_OR: u8 = 0;
const P_AND: u8 = 1;
const P_MAGIC: u8 = 2;
const P_STAR: u8 = 3;
const P_ATOM: u8 = 5;

enum View<'a> {
    True,
    Ls2(&'a Var, &'a Var),
    Wand(&'a Formula, &'a Formula),
    Core,
}

fn view(f: &Formula) -> View<'_> {
    match f {
        Or(a, b) if **a == Emp && **b == Formula::not(Emp) => View::True,
        And(a, b) => match (&**a, &**b) {
            (Ls(x, y), Not(n)) if **n == PointsTo(x.clone(), y.clone()) => View::Ls2(x, y),
            _ => View::Core,
        },
        Not(inner) => match &**inner {
            Septract(a, b) => match &**b {
                Not(c) => View::Wand(a, c),
                _ => View::Core,
            },
            _ => View::Core,
        },
        _ => View::Core,
    }
}

fn level(f: &Formula) -> u8 {
    match view(f) {
        View::True | View::Ls2(..) => P_ATOM,
        View::Wand(..) => P_MAGIC,
        View::Core => match f {
            Or(..) => P_OR,
            And(..) => P_AND,
            Septract(..) => P_MAGIC,
            Sep(..) => P_STAR,
            Not(..) => P_ATOM,
            _ => P_ATOM,
        },
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        write!(out, "(")?;
        write_f(f, out)?;
        return write!(out, ")");
    }
    write_f(f, out)
}

fn write_f(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match view(f) {
        View::True => return write!(out, "true"),
        View::Ls2(x, y) => return write!(out, "ls2({x}, {y})"),
        View::Wand(a, b) => {
            write_at(a, P_STAR, out)?;
            write!(out, " -* ")?;
            return write_at(b, P_MAGIC, out);
        }
        View::Core => {}
    }
    match f {
        Emp => write!(out, "emp"),
        Eq(x, y) => write!(out, "{x} = {y}"),
        Neq(x, y) => write!(out, "{x} != {y}"),
        PointsTo(x, y) => write!(out, "{x} -> {y}"),
        Ls(x, y) => write!(out, "ls({x}, {y})"),
        Sep(a, b) => {
            write_at(a, P_STAR, out)?;
            write!(out, " * ")?;
            write_at(b, P_STAR + 1, out)
        }
        Septract(a, b) => {
            write_at(a, P_STAR, out)?;
            write!(out, " -o ")?;
            write_at(b, P_MAGIC, out)
        }
        And(a, b) => {
            write_at(a, P_AND, out)?;
            write!(out, " && ")?;
            write_at(b, P_AND + 1, out)
        }
        Or(a, b) => {
            write_at(a, P_OR, out)?;
            write!(out, " || ")?;
            write_at(b, P_OR + 1, out)
        }
        Not(a) => {
            write!(out, "!")?;
            // `!x = y` parses fine but reads badly
            if matches!(**a, Eq(..) | Neq(..) | PointsTo(..)) {
                write!(out, "(")?;
                write_f(a, out)?;
                write!(out, ")")
            } else {
                write_at(a, P_ATOM, out)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_f(self, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_f(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn parses_atoms_and_precedence() {
        assert_eq!(p("x -> y * ls(y, nil)"), Formula::sep(Formula::pto("x", "y"), Formula::ls("y", "nil")));
        assert_eq!(p("emp && !emp"), Formula::and(Emp, Formula::not(Emp)));
        assert_eq!(
            p("a -> b * c -> d -o emp"),
            Formula::septract(Formula::sep(Formula::pto("a", "b"), Formula::pto("c", "d")), Emp)
        );
        // right-assoc
        assert_eq!(p("emp -o emp -o emp"), Formula::septract(Emp, Formula::septract(Emp, Emp)));
        assert_eq!(p("emp || emp && emp"), Formula::or(Emp, Formula::and(Emp, Emp)));
    }

    #[test]
    fn elaborates_sugar() {
        assert_eq!(p("true"), Formula::or(Emp, Formula::not(Emp)));
        assert_eq!(p("ls2(x, y)"), Formula::and(Formula::ls("x", "y"), Formula::not(Formula::pto("x", "y"))));
        assert_eq!(p("emp -* x = y"), Formula::not(Formula::septract(Emp, Formula::not(Formula::eq("x", "y")))));
        assert_eq!(
            p("(x -> nil || emp) -o x -> nil * true"),
            Formula::septract(
                Formula::or(Formula::pto("x", "nil"), Emp),
                Formula::sep(Formula::pto("x", "nil"), Formula::tt())
            )
        );
    }

    #[test]
    fn reports_errors_with_position() {
        let e = parse("x -> ").unwrap_err();
        assert_eq!((e.line, e.col), (1, 6));
        let e = parse("emp *\n  ls(emp, x)").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("reserved"));
        assert!(parse("x -> y)").is_err());
        assert!(parse("x $ y").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn measures() {
        assert_eq!(p("x = y").size(), 1);
        assert_eq!(p("emp * emp").size(), 3);
        assert_eq!(p("!(x -> y)").size(), 2);
        assert_eq!(p("x -> y * ((b -> c) -o ls(a, c))").csize(), 2);
        assert_eq!(p("!!emp").csize(), 1);
        assert_eq!(p("(emp * emp) || (emp * emp * emp)").csize(), 3);
        assert!(p("ls(x, nil) * ls(a, nil)").is_positive());
        assert!(p("x -> y -o emp").is_positive());
        assert!(!p("true").is_positive());
        assert!(Emp.free_vars().is_empty());
        let fv: Vec<String> = p("ls(x, y) * x -> z").free_vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(fv, ["x", "y", "z"]);
    }

    #[test]
    fn printer_round_trips() {
        for s in [
            "x -> y * ls(y, nil)",
            "!(x = y) * emp",
            "(emp || x != y) * ls2(a, b)",
            "x -> z -o ls(x, nil) * ls(a, nil) * x != nil",
            "(emp -o emp) -o emp",
            "emp -* emp -* x -> y",
            "!(emp -o !emp) * emp",
            "!!emp && (true || emp)",
            "(emp && emp) && emp",
            "emp && (emp && emp)",
            "emp * (emp * emp)",
        ] {
            let f = p(s);
            let printed = f.to_string();
            assert_eq!(p(&printed), f, "{s} printed as {printed}");
        }
    }

    #[test]
    fn var_names() {
        assert!(is_valid_var_name("x'"));
        assert!(is_valid_var_name("a_1"));
        assert!(!is_valid_var_name("1a"));
        assert!(!is_valid_var_name("emp"));
        assert!(!is_valid_var_name("x#1"));
        assert!(is_valid_var_name("nil"));
    }
}
