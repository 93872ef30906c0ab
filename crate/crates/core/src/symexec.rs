//! A small heap language: concrete semantics, forward symbolic execution
//! with the frame and materialization rules, and verification conditions
//! for annotated programs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::decide::{entails, SolverConfig, Verdict};
use crate::error::{Error, Result};
use crate::formula::{parse, Formula, Var};
use crate::model::{Loc, Model};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Stmt {
    /// `x.next := y`
    AssignNext(Var, Var),
    /// `x := y.next`, x and y distinct
    ReadNext(Var, Var),
    Free(Var),
    Malloc(Var),
    /// `x := y`
    Copy(Var, Var),
    /// `assume(x = y)` when the flag is true, `assume(x != y)` otherwise
    Assume(Var, Var, bool),
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::AssignNext(x, y) => write!(f, "{x}.next := {y}"),
            Stmt::ReadNext(x, y) => write!(f, "{x} := {y}.next"),
            Stmt::Free(x) => write!(f, "free({x})"),
            Stmt::Malloc(x) => write!(f, "malloc({x})"),
            Stmt::Copy(x, y) => write!(f, "{x} := {y}"),
            Stmt::Assume(x, y, true) => write!(f, "assume({x} = {y})"),
            Stmt::Assume(x, y, false) => write!(f, "assume({x} != {y})"),
        }
    }
}

/// The variable introduced by `malloc` for the target of the new cell.
pub fn malloc_var() -> Var {
    Var::new("m")
}

impl Stmt {
    pub fn parse(text: &str) -> Result<Stmt> {
        let t = text.trim().trim_end_matches(';').trim();
        let bad = || Error::Program(format!("cannot parse statement {t:?}"));
        let var = |s: &str| -> Result<Var> {
            let s = s.trim();
            if crate::formula::is_valid_var_name(s) || s == "nil" {
                Ok(Var::new(s))
            } else {
                Err(Error::Program(format!("bad variable name {s:?} in {t:?}")))
            }
        };
        let call = |name: &str| t.strip_prefix(name).and_then(|r| r.trim().strip_prefix('(')).and_then(|r| r.strip_suffix(')'));
        let stmt = if let Some(arg) = call("free") {
            Stmt::Free(var(arg)?)
        } else if let Some(arg) = call("malloc") {
            Stmt::Malloc(var(arg)?)
        } else if let Some(arg) = call("assume") {
            if let Some((a, b)) = arg.split_once("!=") {
                Stmt::Assume(var(a)?, var(b)?, false)
            } else if let Some((a, b)) = arg.split_once('=') {
                Stmt::Assume(var(a)?, var(b)?, true)
            } else {
                return Err(bad());
            }
        } else if let Some((lhs, rhs)) = t.split_once(":=") {
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            if let Some(x) = lhs.strip_suffix(".next") {
                Stmt::AssignNext(var(x)?, var(rhs)?)
            } else if let Some(y) = rhs.strip_suffix(".next") {
                let (x, y) = (var(lhs)?, var(y)?);
                if x == y {
                    return Err(Error::Program(format!(
                        "{t:?}: `x := x.next` is not a statement; write `y := {x}.next; {x} := y` with a new variable y"
                    )));
                }
                Stmt::ReadNext(x, y)
            } else {
                Stmt::Copy(var(lhs)?, var(rhs)?)
            }
        } else {
            return Err(bad());
        };
        if stmt.vars().contains(&malloc_var()) {
            return Err(Error::Program(format!("{t:?}: the variable m is reserved for malloc")));
        }
        Ok(stmt)
    }

    pub fn vars(&self) -> Vec<Var> {
        match self {
            Stmt::AssignNext(x, y) | Stmt::ReadNext(x, y) | Stmt::Copy(x, y) | Stmt::Assume(x, y, _) => {
                vec![x.clone(), y.clone()]
            }
            Stmt::Free(x) | Stmt::Malloc(x) => vec![x.clone()],
        }
    }

    pub fn modvars(&self) -> Vec<Var> {
        match self {
            Stmt::Malloc(x) => vec![x.clone(), malloc_var()],
            Stmt::ReadNext(x, _) | Stmt::Copy(x, _) => vec![x.clone()],
            _ => vec![],
        }
    }
}

/// Local proof rule of a statement: `(pre, post, modvars)`. The pointer
/// target in points-to preconditions is the logical variable `z`.
pub fn local_rule(c: &Stmt) -> (Formula, Formula, Vec<Var>) {
    let z = Var::new("z");
    let (pre, post) = match c {
        Stmt::AssignNext(x, y) => (Formula::pto(x.clone(), z), Formula::pto(x.clone(), y.clone())),
        Stmt::Free(x) => (Formula::pto(x.clone(), z), Formula::Emp),
        Stmt::Malloc(x) => (Formula::Emp, Formula::pto(x.clone(), malloc_var())),
        Stmt::Copy(x, y) => (Formula::Emp, Formula::eq(x.clone(), y.clone())),
        Stmt::ReadNext(x, y) => (
            Formula::pto(y.clone(), z.clone()),
            Formula::sep(Formula::pto(y.clone(), z.clone()), Formula::eq(x.clone(), z)),
        ),
        Stmt::Assume(x, y, eq) => {
            let f = if *eq { Formula::eq(x.clone(), y.clone()) } else { Formula::neq(x.clone(), y.clone()) };
            (Formula::Emp, f)
        }
    };
    (pre, post, c.modvars())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StepResult {
    Next(Model),
    /// The error transition (dereference of an unallocated location).
    Fault(String),
    /// A failed `assume`: no transition.
    Blocked,
}

/// Location and target chosen by `malloc`; unset fields default to the
/// first location above everything in use, and to nil's location.
#[derive(Clone, Copy, Debug, Default)]
pub struct MallocChoice {
    pub location: Option<Loc>,
    pub target: Option<Loc>,
}

pub fn concrete_step(m: &Model, c: &Stmt, choice: MallocChoice) -> Result<StepResult> {
    for v in c.vars() {
        if !m.stack.contains_key(&v) {
            return Err(Error::UnboundVar(v.to_string()));
        }
    }
    let s = |v: &Var| m.stack[v];
    let fault = |x: &Var| Ok(StepResult::Fault(format!("{x} is not allocated")));
    let mut next = m.clone();
    match c {
        Stmt::AssignNext(x, y) => {
            if !m.heap.contains_key(&s(x)) {
                return fault(x);
            }
            next.heap.insert(s(x), s(y));
        }
        Stmt::ReadNext(x, y) => match m.heap.get(&s(y)) {
            Some(&t) => {
                next.stack.insert(x.clone(), t);
            }
            None => return fault(y),
        },
        Stmt::Free(x) => {
            if next.heap.remove(&s(x)).is_none() {
                return fault(x);
            }
        }
        Stmt::Malloc(x) => {
            let nil = m.nil_loc();
            let top = m.stack.values().chain(m.heap.keys()).chain(m.heap.values()).max().copied().unwrap_or(0);
            let l = choice.location.unwrap_or(top + 1);
            if l == nil || m.heap.contains_key(&l) {
                return Err(Error::Precondition(format!("malloc location {l} is nil or allocated")));
            }
            let k = choice.target.unwrap_or(nil);
            next.stack.insert(x.clone(), l);
            next.stack.insert(malloc_var(), k);
            next.heap.insert(l, k);
        }
        Stmt::Copy(x, y) => {
            next.stack.insert(x.clone(), s(y));
        }
        Stmt::Assume(x, y, eq) => {
            if (s(x) == s(y)) != *eq {
                return Ok(StepResult::Blocked);
            }
        }
    }
    Ok(StepResult::Next(next))
}

/// Runs a statement sequence; `None` when an `assume` blocks.
pub fn run(m: &Model, body: &[Stmt]) -> Result<Option<std::result::Result<Model, String>>> {
    let mut cur = m.clone();
    for c in body {
        match concrete_step(&cur, c, MallocChoice::default())? {
            StepResult::Next(n) => cur = n,
            StepResult::Fault(e) => return Ok(Some(Err(e))),
            StepResult::Blocked => return Ok(None),
        }
    }
    Ok(Some(Ok(cur)))
}

/// A symbolic state: the `*`-spine of the current formula.
#[derive(Clone, Debug)]
pub struct SymState {
    pub conjuncts: Vec<Formula>,
    pub fresh_counter: u32,
    pub introduced: BTreeSet<Var>,
}

impl SymState {
    pub fn new(pre: &Formula) -> SymState {
        SymState {
            conjuncts: pre.sep_conjuncts().into_iter().cloned().collect(),
            fresh_counter: 0,
            introduced: BTreeSet::new(),
        }
    }

    pub fn formula(&self) -> Formula {
        Formula::sep_all(self.conjuncts.iter().filter(|c| **c != Formula::Emp).cloned())
    }

    fn fresh(&mut self, base: &Var) -> Var {
        self.fresh_counter += 1;
        let v = Var::new(&format!("{}#{}", base.as_str().split('#').next().unwrap(), self.fresh_counter));
        self.introduced.insert(v.clone());
        v
    }

    fn find_pto(&self, x: &Var) -> Option<usize> {
        self.conjuncts.iter().position(|c| matches!(c, Formula::PointsTo(p, _) if p == x))
    }

    /// Renames the variables in `vars` that occur in the conjuncts selected
    /// by `in_frame` to fresh copies.
    fn rename_frame(&mut self, vars: &[Var], in_frame: impl Fn(usize) -> bool) {
        let mut map = BTreeMap::new();
        for v in vars {
            let occurs = self.conjuncts.iter().enumerate().any(|(i, c)| in_frame(i) && c.free_vars().contains(v));
            if occurs {
                let fresh = self.fresh(v);
                map.insert(v.clone(), fresh);
            }
        }
        if map.is_empty() {
            return;
        }
        for (i, c) in self.conjuncts.iter_mut().enumerate() {
            if in_frame(i) {
                *c = c.rename(&map);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceStep {
    /// The statement, or `None` for a materialization step.
    pub stmt: Option<Stmt>,
    pub state: Formula,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.stmt {
            Some(c) => write!(f, "{c}\n  {{{}}}", self.state),
            None => write!(f, "-- materialization\n  {{{}}}", self.state),
        }
    }
}

/// Rewrites the state to `((x -> z) -o Q) * x -> z` with `z` fresh, after
/// checking that `Q` forces `x` to be allocated. `alloc(nil)` holds
/// vacuously, so `x != nil` is checked as well.
pub fn materialize(state: &mut SymState, x: &Var, cfg: &SolverConfig) -> Result<()> {
    let q = state.formula();
    let mut vars = q.free_vars();
    vars.insert(x.clone());
    let non_nil = Formula::sep(Formula::neq(x.clone(), Var::nil()), Formula::tt());
    let v = entails(&q, &Formula::and(Formula::alloc(x.clone()), non_nil), &vars, cfg)?;
    if !v.is_positive() {
        return Err(Error::Verification(format!("{x} possibly unallocated in {{{q}}}")));
    }
    let z = state.fresh(&Var::new("z"));
    let pto = Formula::pto(x.clone(), z);
    state.conjuncts = vec![Formula::septract(pto.clone(), q), pto];
    Ok(())
}

/// Applies one statement by the frame rule, materializing first when its
/// local precondition is a points-to that does not occur on the spine.
pub fn step(state: &mut SymState, c: &Stmt, cfg: &SolverConfig, trace: &mut Vec<TraceStep>) -> Result<()> {
    let footprint = match c {
        Stmt::AssignNext(x, _) | Stmt::Free(x) => Some(x.clone()),
        Stmt::ReadNext(_, y) => Some(y.clone()),
        _ => None,
    };
    if let Some(p) = &footprint {
        if state.find_pto(p).is_none() {
            materialize(state, p, cfg)?;
            trace.push(TraceStep { stmt: None, state: state.formula() });
        }
    }
    match c {
        Stmt::AssignNext(x, y) => {
            let i = state.find_pto(x).unwrap();
            state.conjuncts[i] = Formula::pto(x.clone(), y.clone());
        }
        Stmt::Free(x) => {
            let i = state.find_pto(x).unwrap();
            state.conjuncts.remove(i);
        }
        Stmt::ReadNext(x, y) => {
            let i = state.find_pto(y).unwrap();
            let target_is_x = matches!(&state.conjuncts[i], Formula::PointsTo(_, t) if t == x);
            state.rename_frame(std::slice::from_ref(x), |j| j != i || target_is_x);
            let t = match &state.conjuncts[i] {
                Formula::PointsTo(_, t) => t.clone(),
                _ => unreachable!(),
            };
            state.conjuncts.insert(i + 1, Formula::eq(x.clone(), t));
        }
        Stmt::Malloc(x) => {
            state.rename_frame(&c.modvars(), |_| true);
            state.conjuncts.push(Formula::pto(x.clone(), malloc_var()));
        }
        Stmt::Copy(x, y) => {
            if x != y {
                state.rename_frame(std::slice::from_ref(x), |_| true);
                state.conjuncts.push(Formula::eq(x.clone(), y.clone()));
            }
        }
        Stmt::Assume(x, y, eq) => {
            state.conjuncts.push(if *eq { Formula::eq(x.clone(), y.clone()) } else { Formula::neq(x.clone(), y.clone()) });
        }
    }
    trace.push(TraceStep { stmt: Some(c.clone()), state: state.formula() });
    Ok(())
}

pub fn exec_symbolic(pre: &Formula, body: &[Stmt], cfg: &SolverConfig) -> Result<(SymState, Vec<TraceStep>)> {
    let mut state = SymState::new(pre);
    let mut trace = Vec::new();
    for c in body {
        step(&mut state, c, cfg, &mut trace)?;
    }
    Ok((state, trace))
}

#[derive(Clone, Debug)]
pub struct Triple {
    pub name: String,
    pub pre: Formula,
    pub body: Vec<Stmt>,
    pub post: Formula,
}

#[derive(Clone, Debug)]
pub struct Discharge {
    pub verdict: Verdict,
    pub trace: Vec<TraceStep>,
    pub final_state: Formula,
}

/// Solver settings for verification conditions: the variable set is
/// restricted to the free variables of the two sides, which may exceed the
/// interactive default.
pub fn vc_config() -> SolverConfig {
    SolverConfig { max_vars: 14, ..Default::default() }
}

pub fn discharge(t: &Triple, cfg: &SolverConfig) -> Result<Discharge> {
    for (what, f) in [("precondition", &t.pre), ("postcondition", &t.post)] {
        if !f.is_positive() {
            return Err(Error::Verification(format!("{what} of {} is not positive: {f}", t.name)));
        }
    }
    let (state, trace) = exec_symbolic(&t.pre, &t.body, cfg)?;
    if let Some(v) = t.post.free_vars().intersection(&state.introduced).next() {
        return Err(Error::Verification(format!("postcondition mentions the fresh variable {v}")));
    }
    let q = state.formula();
    let vars: BTreeSet<Var> = q.free_vars().union(&t.post.free_vars()).cloned().collect();
    let verdict = entails(&q, &t.post, &vars, cfg)?;
    Ok(Discharge { verdict, trace, final_state: q })
}

#[derive(Clone, Debug)]
pub enum Item {
    Stmt(Stmt),
    While { cond: (Var, Var, bool), invariant: Formula, body: Vec<Item> },
}

#[derive(Clone, Debug)]
pub struct AnnotatedProgram {
    pub pre: Formula,
    pub post: Formula,
    pub body: Vec<Item>,
}

/// Splits off `keyword { text }` from a line.
fn annotation<'a>(line: &'a str, keyword: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(keyword)?.trim_start();
    rest.strip_prefix('{')?.trim_end().strip_suffix('}')
}

impl AnnotatedProgram {
    pub fn parse(text: &str) -> Result<AnnotatedProgram> {
        let err = |n: usize, m: String| Error::Program(format!("line {}: {m}", n + 1));
        let mut pre = None;
        let mut post = None;
        // stack of open bodies; loops carry their header
        let mut stack: Vec<(Vec<Item>, Option<((Var, Var, bool), Option<Formula>)>)> = vec![(Vec::new(), None)];
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split("//").next().unwrap().split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let formula = |s: &str| parse(s).map_err(|e| err(n, format!("{e}")));
            if let Some(f) = annotation(line, "pre") {
                pre = Some(formula(f)?);
            } else if let Some(f) = annotation(line, "post") {
                post = Some(formula(f)?);
            } else if let Some(f) = annotation(line, "invariant") {
                let (body, header) = stack.last_mut().unwrap();
                match header {
                    Some((_, inv @ None)) if body.is_empty() => *inv = Some(formula(f)?),
                    _ => return Err(err(n, "an invariant must be the first line of a loop body".into())),
                }
            } else if let Some(rest) = line.strip_prefix("while") {
                let cond = rest
                    .trim()
                    .strip_suffix('{')
                    .and_then(|c| c.trim().strip_prefix('('))
                    .and_then(|c| c.trim().strip_suffix(')'))
                    .ok_or_else(|| err(n, "expected `while (x != y) {`".into()))?;
                let guard = match Stmt::parse(&format!("assume({cond})")).map_err(|e| err(n, e.to_string()))? {
                    Stmt::Assume(x, y, eq) => (x, y, eq),
                    _ => unreachable!(),
                };
                stack.push((Vec::new(), Some((guard, None))));
            } else if line == "}" {
                let (body, header) = stack.pop().unwrap();
                let (cond, inv) = header.ok_or_else(|| err(n, "unmatched `}`".into()))?;
                let invariant = inv.ok_or_else(|| err(n, "loop without invariant".into()))?;
                stack.last_mut().unwrap().0.push(Item::While { cond, invariant, body });
            } else {
                for part in line.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                    let s = Stmt::parse(part).map_err(|e| err(n, e.to_string()))?;
                    stack.last_mut().unwrap().0.push(Item::Stmt(s));
                }
            }
        }
        if stack.len() != 1 {
            return Err(Error::Program("unterminated loop".into()));
        }
        let body = stack.pop().unwrap().0;
        Ok(AnnotatedProgram {
            pre: pre.ok_or_else(|| Error::Program("missing `pre { ... }`".into()))?,
            post: post.ok_or_else(|| Error::Program("missing `post { ... }`".into()))?,
            body,
        })
    }
}

/// Verification conditions: one triple per straight-line segment between
/// annotations (loop entry, loop body, loop exit / end of program).
pub fn vcgen(p: &AnnotatedProgram) -> Vec<Triple> {
    let mut out = Vec::new();
    gen_seq("", &p.pre, Vec::new(), &p.body, &p.post, &mut out);
    out
}

fn gen_seq(prefix: &str, pre: &Formula, mut pending: Vec<Stmt>, items: &[Item], post: &Formula, out: &mut Vec<Triple>) {
    let mut cur = pre.clone();
    let mut loops = 0;
    for item in items {
        match item {
            Item::Stmt(s) => pending.push(s.clone()),
            Item::While { cond: (x, y, eq), invariant, body } => {
                loops += 1;
                let name = format!("{prefix}loop{loops}");
                out.push(Triple {
                    name: format!("{name}-entry"),
                    pre: cur.clone(),
                    body: std::mem::take(&mut pending),
                    post: invariant.clone(),
                });
                let guard = Stmt::Assume(x.clone(), y.clone(), *eq);
                let inner = format!("{name}-");
                let before = out.len();
                gen_seq(&inner, invariant, vec![guard], body, invariant, out);
                if let Some(last) = out[before..].last_mut() {
                    if last.name == format!("{inner}exit") {
                        last.name = format!("{name}-inductive");
                    }
                }
                cur = invariant.clone();
                pending = vec![Stmt::Assume(x.clone(), y.clone(), !*eq)];
            }
        }
    }
    out.push(Triple { name: format!("{prefix}exit"), pre: cur, body: pending, post: post.clone() });
}

#[derive(Clone, Debug)]
pub struct VcResult {
    pub triple: Triple,
    pub outcome: std::result::Result<Discharge, String>,
}

impl VcResult {
    pub fn valid(&self) -> bool {
        matches!(&self.outcome, Ok(d) if d.verdict.is_positive())
    }
}

pub fn verify(p: &AnnotatedProgram, cfg: &SolverConfig) -> Vec<VcResult> {
    vcgen(p)
        .into_iter()
        .map(|t| {
            let outcome = discharge(&t, cfg).map_err(|e| e.to_string());
            VcResult { triple: t, outcome }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Var {
        Var::new(s)
    }

    #[test]
    fn statements_parse() {
        assert_eq!(Stmt::parse("x.next := y;").unwrap(), Stmt::AssignNext(v("x"), v("y")));
        assert_eq!(Stmt::parse("b := x.next").unwrap(), Stmt::ReadNext(v("b"), v("x")));
        assert_eq!(Stmt::parse("a := nil").unwrap(), Stmt::Copy(v("a"), v("nil")));
        assert_eq!(Stmt::parse("assume(x != nil)").unwrap(), Stmt::Assume(v("x"), v("nil"), false));
        assert_eq!(Stmt::parse("malloc(s)").unwrap(), Stmt::Malloc(v("s")));
        let e = Stmt::parse("x := x.next").unwrap_err().to_string();
        assert!(e.contains("y := x.next"), "{e}");
        assert!(Stmt::parse("m := x").is_err());
    }

    #[test]
    fn concrete_semantics() {
        let m = Model::from_pairs(&[("x", 1), ("y", 2), ("nil", 0)], &[(1, 2)]).unwrap();
        match concrete_step(&m, &Stmt::Free(v("x")), MallocChoice::default()).unwrap() {
            StepResult::Next(n) => assert!(n.heap.is_empty()),
            r => panic!("{r:?}"),
        }
        let e = Model::from_pairs(&[("x", 1), ("y", 2), ("nil", 0)], &[]).unwrap();
        assert!(matches!(
            concrete_step(&e, &Stmt::AssignNext(v("x"), v("y")), MallocChoice::default()).unwrap(),
            StepResult::Fault(_)
        ));
        assert_eq!(
            concrete_step(&e, &Stmt::Assume(v("x"), v("y"), true), MallocChoice::default()).unwrap(),
            StepResult::Blocked
        );
        match concrete_step(&e, &Stmt::Malloc(v("x")), MallocChoice::default()).unwrap() {
            StepResult::Next(n) => {
                assert_eq!(n.heap.get(&n.stack[&v("x")]), Some(&n.stack[&v("m")]));
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn local_rules() {
        let (pre, post, mv) = local_rule(&Stmt::Free(v("x")));
        assert_eq!((pre.to_string(), post, mv), ("x -> z".to_string(), Formula::Emp, vec![]));
        let (pre, post, mv) = local_rule(&Stmt::Copy(v("x"), v("y")));
        assert_eq!((pre, post, mv), (Formula::Emp, Formula::eq("x", "y"), vec![v("x")]));
        assert_eq!(local_rule(&Stmt::Malloc(v("x"))).2, vec![v("x"), v("m")]);
    }

    #[test]
    fn materialization_requires_allocation() {
        let cfg = SolverConfig::default();
        let mut s = SymState::new(&Formula::Emp);
        assert!(matches!(materialize(&mut s, &v("x"), &cfg), Err(Error::Verification(_))));
        let mut s = SymState::new(&parse("ls(x, nil) * x != nil").unwrap());
        materialize(&mut s, &v("x"), &cfg).unwrap();
        assert_eq!(s.formula().to_string(), "(x -> z#1 -o ls(x, nil) * x != nil) * x -> z#1");
    }

    #[test]
    fn vc_shapes() {
        let p = AnnotatedProgram::parse("pre { x -> nil }\nfree(x)\npost { emp }\n").unwrap();
        let ts = vcgen(&p);
        assert_eq!(ts.len(), 1);
        assert!(verify(&p, &SolverConfig::default())[0].valid());
        let bad = AnnotatedProgram::parse("pre { emp }\nfree(x)\npost { emp }\n").unwrap();
        let r = &verify(&bad, &SolverConfig::default())[0];
        assert!(matches!(&r.outcome, Err(e) if e.contains("unallocated")));
    }
}
