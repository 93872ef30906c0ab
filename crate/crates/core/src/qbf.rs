//! Closed QBF in negation normal form, its evaluator, and the reduction to
//! satisfiability.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{is_valid_var_name, Formula, Var};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Qbf {
    Var(String),
    NegVar(String),
    And(Box<Qbf>, Box<Qbf>),
    Or(Box<Qbf>, Box<Qbf>),
    Exists(String, Box<Qbf>),
    Forall(String, Box<Qbf>),
}

impl Qbf {
    /// Bound variables in binding order.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        fn rec(q: &Qbf, out: &mut Vec<String>) {
            match q {
                Qbf::Var(_) | Qbf::NegVar(_) => {}
                Qbf::And(a, b) | Qbf::Or(a, b) => {
                    rec(a, out);
                    rec(b, out);
                }
                Qbf::Exists(x, f) | Qbf::Forall(x, f) => {
                    out.push(x.clone());
                    rec(f, out);
                }
            }
        }
        rec(self, &mut out);
        out
    }

    /// Closed, every variable bound once, names usable as SSL variables.
    pub fn validate(&self) -> Result<()> {
        fn rec(q: &Qbf, bound: &mut Vec<String>, all: &mut BTreeSet<String>) -> Result<()> {
            match q {
                Qbf::Var(x) | Qbf::NegVar(x) => {
                    if !bound.contains(x) {
                        return Err(Error::Qbf(format!("free variable {x}")));
                    }
                }
                Qbf::And(a, b) | Qbf::Or(a, b) => {
                    rec(a, bound, all)?;
                    rec(b, bound, all)?;
                }
                Qbf::Exists(x, f) | Qbf::Forall(x, f) => {
                    if !is_valid_var_name(x) || x == "nil" {
                        return Err(Error::Qbf(format!("bad variable name {x:?}")));
                    }
                    if !all.insert(x.clone()) {
                        return Err(Error::Qbf(format!("variable {x} bound twice")));
                    }
                    bound.push(x.clone());
                    rec(f, bound, all)?;
                    bound.pop();
                }
            }
            Ok(())
        }
        rec(self, &mut Vec::new(), &mut BTreeSet::new())
    }

    pub fn parse(text: &str) -> Result<Qbf> {
        let toks = tokenize(text);
        let mut pos = 0;
        let q = parse_expr(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(Error::Qbf(format!("trailing input after token {pos}")));
        }
        q.validate()?;
        Ok(q)
    }
}

impl fmt::Display for Qbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Qbf::Var(x) => write!(f, "{x}"),
            Qbf::NegVar(x) => write!(f, "(not {x})"),
            Qbf::And(a, b) => write!(f, "(and {a} {b})"),
            Qbf::Or(a, b) => write!(f, "(or {a} {b})"),
            Qbf::Exists(x, b) => write!(f, "(exists {x} {b})"),
            Qbf::Forall(x, b) => write!(f, "(forall {x} {b})"),
        }
    }
}

fn tokenize(text: &str) -> Vec<String> {
    text.replace('(', " ( ").replace(')', " ) ").split_whitespace().map(str::to_string).collect()
}

fn parse_expr(toks: &[String], pos: &mut usize) -> Result<Qbf> {
    let tok = toks.get(*pos).ok_or_else(|| Error::Qbf("unexpected end of input".into()))?;
    *pos += 1;
    if tok != "(" {
        if tok == ")" {
            return Err(Error::Qbf("unexpected ')'".into()));
        }
        return Ok(Qbf::Var(tok.clone()));
    }
    let head = toks.get(*pos).ok_or_else(|| Error::Qbf("unexpected end of input".into()))?.clone();
    *pos += 1;
    let q = match head.as_str() {
        "not" => match parse_expr(toks, pos)? {
            Qbf::Var(x) => Qbf::NegVar(x),
            _ => return Err(Error::Qbf("not in negation normal form: 'not' applied to a non-variable".into())),
        },
        "and" | "or" => {
            let mut args = Vec::new();
            while toks.get(*pos).map(String::as_str) != Some(")") {
                args.push(parse_expr(toks, pos)?);
            }
            if args.len() < 2 {
                return Err(Error::Qbf(format!("'{head}' needs at least two arguments")));
            }
            let mut it = args.into_iter().rev();
            let last = it.next().unwrap();
            it.fold(last, |acc, a| {
                if head == "and" {
                    Qbf::And(Box::new(a), Box::new(acc))
                } else {
                    Qbf::Or(Box::new(a), Box::new(acc))
                }
            })
        }
        "exists" | "forall" => {
            let x = toks.get(*pos).ok_or_else(|| Error::Qbf("missing bound variable".into()))?.clone();
            *pos += 1;
            let body = Box::new(parse_expr(toks, pos)?);
            if head == "exists" {
                Qbf::Exists(x, body)
            } else {
                Qbf::Forall(x, body)
            }
        }
        other => return Err(Error::Qbf(format!("unknown operator {other:?}"))),
    };
    if toks.get(*pos).map(String::as_str) != Some(")") {
        return Err(Error::Qbf("expected ')'".into()));
    }
    *pos += 1;
    Ok(q)
}

pub fn qbf_eval(q: &Qbf) -> bool {
    fn rec(q: &Qbf, env: &mut BTreeMap<String, bool>) -> bool {
        match q {
            Qbf::Var(x) => env[x],
            Qbf::NegVar(x) => !env[x],
            Qbf::And(a, b) => rec(a, env) && rec(b, env),
            Qbf::Or(a, b) => rec(a, env) || rec(b, env),
            Qbf::Exists(x, f) | Qbf::Forall(x, f) => {
                let mut vals = [false, true].into_iter().map(|v| {
                    let old = env.insert(x.clone(), v);
                    let r = rec(f, env);
                    match old {
                        Some(o) => env.insert(x.clone(), o),
                        None => env.remove(x),
                    };
                    r
                });
                if matches!(q, Qbf::Exists(..)) {
                    vals.any(|r| r)
                } else {
                    vals.all(|r| r)
                }
            }
        }
    }
    rec(q, &mut BTreeMap::new())
}

fn aux(q: &Qbf) -> Formula {
    let alloc = |x: &str| Formula::sep(Formula::pto(x, Var::nil()), Formula::tt());
    let choice = |x: &str| Formula::or(Formula::pto(x, Var::nil()), Formula::Emp);
    match q {
        Qbf::Var(x) => alloc(x),
        Qbf::NegVar(x) => Formula::not(alloc(x)),
        Qbf::And(a, b) => Formula::and(aux(a), aux(b)),
        Qbf::Or(a, b) => Formula::or(aux(a), aux(b)),
        Qbf::Exists(x, f) => Formula::septract(choice(x), aux(f)),
        Qbf::Forall(x, f) => Formula::wand(choice(x), aux(f)),
    }
}

/// `emp && (pairwise distinct, all different from nil) && aux(q)`; its
/// satisfiability coincides with the truth of `q`.
pub fn qbf_translate(q: &Qbf) -> Result<Formula> {
    q.validate()?;
    let vs = q.vars();
    let mut parts = vec![Formula::Emp];
    for (i, x) in vs.iter().enumerate() {
        parts.push(Formula::neq(x.as_str(), Var::nil()));
        for y in &vs[i + 1..] {
            parts.push(Formula::neq(x.as_str(), y.as_str()));
        }
    }
    parts.push(aux(q));
    Ok(Formula::and_all(parts))
}
