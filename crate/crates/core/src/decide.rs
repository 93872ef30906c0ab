//! Satisfiability, entailment and model checking via abstract memory states.
//!
//! [`abst`] computes the abstraction set of a formula bottom-up with an
//! explicit universe for negation. The solver entry points use [`Engine`],
//! which enumerates abstraction sets only where that needs no universe and
//! answers everything else by membership queries on single AMS.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::rc::Rc;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::ams::{
    abstract_lists, compose, enumerate_universe, induced_core, lift_one, realize_core, subtract,
    universe_cores, AbstractionSet, Ams, AmsCore, EdgeLabel, Shape, MAX_UNIVERSE_CLASSES,
};
use crate::error::{Error, Result};
use crate::formula::{Formula, Var};
use crate::model::Model;
use crate::oracle::{self, Mode, OracleConfig};

/// Which garbage bound the septraction case uses for its left operand.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SeptractBound {
    /// Left operand lifted to max(csize left, csize right).
    #[default]
    Lifted,
    /// Left operand at its own csize, as in the published algorithm.
    Paper,
}

/// Abstraction set of `f` over `shape`, bounded by `csize(f)`.
pub fn abst(shape: &Arc<Shape>, f: &Formula, force: bool) -> Result<AbstractionSet> {
    abst_with(shape, f, force, SeptractBound::Lifted)
}

pub fn abst_with(shape: &Arc<Shape>, f: &Formula, force: bool, bound: SeptractBound) -> Result<AbstractionSet> {
    check_vars(shape, f)?;
    let mut memo = HashMap::new();
    abst_rec(shape, f, force, bound, &mut memo)
}

fn check_vars(shape: &Shape, f: &Formula) -> Result<()> {
    for v in f.free_vars() {
        if shape.class_of(&v).is_none() {
            return Err(Error::UnboundVar(v.to_string()));
        }
    }
    Ok(())
}

fn set_of(shape: &Arc<Shape>, bound: u32, elems: impl IntoIterator<Item = AmsCore>) -> AbstractionSet {
    AbstractionSet { shape: shape.clone(), bound, elems: elems.into_iter().collect() }
}

fn abst_rec(
    shape: &Arc<Shape>,
    f: &Formula,
    force: bool,
    bound: SeptractBound,
    memo: &mut HashMap<Formula, AbstractionSet>,
) -> Result<AbstractionSet> {
    if let Some(r) = memo.get(f) {
        return Ok(r.clone());
    }
    let n = shape.len();
    let c = f.csize();
    let r = match f {
        Formula::Emp | Formula::Eq(..) | Formula::Neq(..) | Formula::PointsTo(..) | Formula::Ls(..) => {
            set_of(shape, c, atom_set(shape, f))
        }
        Formula::Sep(a, b) => {
            let sa = abst_rec(shape, a, force, bound, memo)?.lift(c)?;
            let sb = abst_rec(shape, b, force, bound, memo)?.lift(c)?;
            let mut out = BTreeSet::new();
            for x in &sa.elems {
                for y in &sb.elems {
                    if let Some(z) = compose(x, y) {
                        if z.garbage <= c {
                            out.insert(z);
                        }
                    }
                }
            }
            set_of(shape, c, out)
        }
        Formula::Septract(a, b) => {
            let (ca, cb) = (a.csize(), b.csize());
            let g = match bound {
                SeptractBound::Lifted => ca.max(cb),
                SeptractBound::Paper => ca,
            };
            let sa = abst_rec(shape, a, force, bound, memo)?.lift(g)?;
            let sb = abst_rec(shape, b, force, bound, memo)?.lift(cb + ca.max(g))?;
            let mut out = BTreeSet::new();
            for x in &sb.elems {
                for y in &sa.elems {
                    if let Some(z) = subtract(x, y) {
                        if z.garbage <= c {
                            out.insert(z);
                        }
                    }
                }
            }
            set_of(shape, c, out)
        }
        Formula::And(a, b) => {
            let sa = abst_rec(shape, a, force, bound, memo)?.lift(c)?;
            let sb = abst_rec(shape, b, force, bound, memo)?.lift(c)?;
            set_of(shape, c, sa.elems.intersection(&sb.elems).cloned())
        }
        Formula::Or(a, b) => {
            let sa = abst_rec(shape, a, force, bound, memo)?.lift(c)?;
            let sb = abst_rec(shape, b, force, bound, memo)?.lift(c)?;
            set_of(shape, c, sa.elems.union(&sb.elems).cloned())
        }
        Formula::Not(a) => {
            let sa = abst_rec(shape, a, force, bound, memo)?;
            let u = enumerate_universe(shape, c, force)?;
            set_of(shape, c, u.elems.difference(&sa.elems).cloned())
        }
    };
    debug_assert!(r.elems.iter().all(|a| a.garbage <= c && a.validate(n).is_ok()));
    memo.insert(f.clone(), r.clone());
    Ok(r)
}

fn empty_if(n: usize, cond: bool) -> Vec<AmsCore> {
    if cond {
        vec![AmsCore::empty(n)]
    } else {
        vec![]
    }
}

fn atom_set(shape: &Shape, f: &Formula) -> Vec<AmsCore> {
    let n = shape.len();
    let cls = |v: &Var| shape.class_of(v).unwrap();
    match f {
        Formula::Emp => empty_if(n, true),
        Formula::Eq(x, y) => empty_if(n, cls(x) == cls(y)),
        Formula::Neq(x, y) => empty_if(n, cls(x) != cls(y)),
        Formula::PointsTo(x, y) => {
            if cls(x) == 0 {
                return vec![];
            }
            let mut a = AmsCore::empty(n);
            a.edges[cls(x)] = Some((cls(y) as u8, EdgeLabel::Exactly1));
            vec![a]
        }
        Formula::Ls(x, y) => abstract_lists(shape, x, y),
        _ => unreachable!(),
    }
}

fn clamp(a: &AmsCore, c: u32) -> AmsCore {
    if a.garbage > c {
        a.with_garbage(c)
    } else {
        a.clone()
    }
}

type Id = usize;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Node {
    Atom(Formula),
    Sep(Id, Id),
    Septract(Id, Id),
    And(Id, Id),
    Or(Id, Id),
    Not(Id),
}

/// Hash-consed formula DAG shared by all shapes of one query.
#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    csize: Vec<u32>,
    enumerable: Vec<bool>,
    positive: Vec<bool>,
    factors: Vec<Vec<Id>>,
    index: HashMap<Node, Id>,
}

impl Arena {
    fn add(&mut self, f: &Formula) -> Id {
        let node = match f {
            Formula::Sep(a, b) => Node::Sep(self.add(a), self.add(b)),
            Formula::Septract(a, b) => Node::Septract(self.add(a), self.add(b)),
            Formula::And(a, b) => Node::And(self.add(a), self.add(b)),
            Formula::Or(a, b) => Node::Or(self.add(a), self.add(b)),
            Formula::Not(a) => Node::Not(self.add(a)),
            atom => Node::Atom(atom.clone()),
        };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        let (cs, en, pos, fac) = match &node {
            Node::Atom(_) => (1, true, true, vec![id]),
            Node::Sep(a, b) => {
                let mut fac = self.factors[*a].clone();
                fac.extend(&self.factors[*b]);
                (
                    self.csize[*a] + self.csize[*b],
                    self.enumerable[*a] && self.enumerable[*b],
                    self.positive[*a] && self.positive[*b],
                    fac,
                )
            }
            Node::Septract(a, b) => (self.csize[*b], self.enumerable[*b], self.positive[*a] && self.positive[*b], vec![id]),
            Node::And(a, b) => (
                self.csize[*a].max(self.csize[*b]),
                self.enumerable[*a] || self.enumerable[*b],
                self.positive[*a] && self.positive[*b],
                vec![id],
            ),
            Node::Or(a, b) => (
                self.csize[*a].max(self.csize[*b]),
                self.enumerable[*a] && self.enumerable[*b],
                self.positive[*a] && self.positive[*b],
                vec![id],
            ),
            Node::Not(a) => (self.csize[*a], false, false, vec![id]),
        };
        // a single-factor chain is the node itself
        let fac = if matches!(node, Node::Sep(..)) { fac } else { vec![id] };
        self.nodes.push(node.clone());
        self.csize.push(cs);
        self.enumerable.push(en);
        self.positive.push(pos);
        self.factors.push(fac);
        self.index.insert(node, id);
        id
    }
}

/// Per-shape evaluator over an [`Arena`].
struct Engine<'a> {
    arena: &'a Arena,
    shape: Arc<Shape>,
    n: usize,
    force: bool,
    max_classes: usize,
    enum_memo: HashMap<Id, Rc<Vec<AmsCore>>>,
    member_memo: HashMap<(Id, AmsCore), bool>,
    universe: Option<Rc<Vec<AmsCore>>>,
}

impl<'a> Engine<'a> {
    fn new(arena: &'a Arena, shape: Arc<Shape>, cfg: &SolverConfig) -> Self {
        let n = shape.len();
        Engine {
            arena,
            shape,
            n,
            force: cfg.force,
            max_classes: cfg.max_universe_classes,
            enum_memo: HashMap::new(),
            member_memo: HashMap::new(),
            universe: None,
        }
    }

    fn guard(&self) -> Result<()> {
        if self.n > self.max_classes && !self.force {
            return Err(Error::UniverseTooLarge { got: self.n, limit: self.max_classes });
        }
        Ok(())
    }

    /// Garbage-free universe cores (edges and groups only).
    fn universe(&mut self) -> Result<Rc<Vec<AmsCore>>> {
        self.guard()?;
        if self.universe.is_none() {
            self.universe = Some(Rc::new(universe_cores(self.n)));
        }
        Ok(self.universe.clone().unwrap())
    }

    fn cs(&self, id: Id) -> u32 {
        self.arena.csize[id]
    }

    /// The abstraction set of an enumerable node, bounded by its csize.
    fn enumerate(&mut self, id: Id) -> Result<Rc<Vec<AmsCore>>> {
        if let Some(r) = self.enum_memo.get(&id) {
            return Ok(r.clone());
        }
        debug_assert!(self.arena.enumerable[id]);
        let c = self.cs(id);
        let out: Vec<AmsCore> = match &self.arena.nodes[id] {
            Node::Atom(f) => atom_set(&self.shape, f),
            Node::Sep(..) => self.enumerate_chain(id)?,
            Node::Septract(a, b) => {
                let (a, b) = (*a, *b);
                let (ca, cb) = (self.cs(a), self.cs(b));
                let g = ca.max(cb);
                let eb = self.enumerate(b)?;
                let mut out = HashSet::new();
                if self.arena.enumerable[a] {
                    let ea = self.enumerate(a)?;
                    let la: Vec<AmsCore> = ea.iter().flat_map(|x| lift_one(x, ca, g)).collect();
                    for x in eb.iter().flat_map(|x| lift_one(x, cb, cb + g)) {
                        for y in &la {
                            if let Some(z) = subtract(&x, y) {
                                if z.garbage <= c {
                                    out.insert(z);
                                }
                            }
                        }
                    }
                } else {
                    for x in eb.iter().flat_map(|x| lift_one(x, cb, cb + g)) {
                        for y in sub_cores(&x, g) {
                            let z = subtract(&x, &y).unwrap();
                            if z.garbage <= c && self.member(a, &y)? {
                                out.insert(z);
                            }
                        }
                    }
                }
                out.into_iter().collect()
            }
            Node::And(a, b) => {
                let (a, b) = (*a, *b);
                let (e, other) = if self.arena.enumerable[a] { (a, b) } else { (b, a) };
                let ce = self.cs(e);
                let xs = self.enumerate(e)?;
                let mut out = Vec::new();
                for x in xs.iter().flat_map(|x| lift_one(x, ce, c)) {
                    if self.member(other, &x)? {
                        out.push(x);
                    }
                }
                out
            }
            Node::Or(a, b) => {
                let (a, b) = (*a, *b);
                let mut out = HashSet::new();
                for s in [a, b] {
                    let cs = self.cs(s);
                    for x in self.enumerate(s)?.iter() {
                        out.extend(lift_one(x, cs, c));
                    }
                }
                out.into_iter().collect()
            }
            Node::Not(_) => unreachable!(),
        };
        let mut out = out;
        out.sort();
        out.dedup();
        let r = Rc::new(out);
        self.enum_memo.insert(id, r.clone());
        Ok(r)
    }

    /// Depth-first composition over the factors of a `*`-chain, pruning on
    /// allocation clashes. List segments are generated against the nodes
    /// already allocated.
    fn enumerate_chain(&mut self, id: Id) -> Result<Vec<AmsCore>> {
        let c = self.cs(id);
        let mut fixed: Vec<(Rc<Vec<AmsCore>>, u32)> = Vec::new();
        let mut lists: Vec<(usize, usize)> = Vec::new();
        for &f in &self.arena.factors[id] {
            match &self.arena.nodes[f] {
                Node::Atom(Formula::Ls(x, y)) => {
                    lists.push((self.shape.class_of(x).unwrap(), self.shape.class_of(y).unwrap()))
                }
                _ => {
                    let e = self.enumerate(f)?;
                    if e.is_empty() {
                        return Ok(vec![]);
                    }
                    fixed.push((e, self.cs(f)));
                }
            }
        }
        fixed.sort_by_key(|(e, _)| e.len());
        let mut out = HashSet::new();
        let start = AmsCore::empty(self.n);
        self.chain_dfs(&fixed, &lists, 0, start, 0, false, c, &mut out);
        Ok(out.into_iter().collect())
    }

    #[allow(clippy::too_many_arguments)]
    fn chain_dfs(
        &self,
        fixed: &[(Rc<Vec<AmsCore>>, u32)],
        lists: &[(usize, usize)],
        i: usize,
        acc: AmsCore,
        garbage: u32,
        open: bool,
        c: u32,
        out: &mut HashSet<AmsCore>,
    ) {
        if i < fixed.len() {
            let (set, ci) = &fixed[i];
            let mask = acc.alloc_mask();
            for x in set.iter() {
                if x.alloc_mask() & mask != 0 {
                    continue;
                }
                let next = compose(&acc, &x.with_garbage(0)).unwrap();
                self.chain_dfs(fixed, lists, i + 1, next, garbage + x.garbage, open || x.garbage == *ci, c, out);
            }
            return;
        }
        let j = i - fixed.len();
        if j < lists.len() {
            let (sx, sy) = lists[j];
            if sx == sy {
                self.chain_dfs(fixed, lists, i + 1, acc.clone(), garbage, open, c, out);
            }
            let mut acc = acc;
            let mut mask = acc.alloc_mask();
            self.list_paths(sx, sy, &mut acc, &mut mask, &mut |a: &AmsCore| {
                self.chain_dfs(fixed, lists, i + 1, a.clone(), garbage, open, c, out);
            });
            return;
        }
        if open {
            for g in garbage..=c {
                out.insert(acc.with_garbage(g));
            }
        } else {
            out.insert(acc.with_garbage(garbage));
        }
    }

    /// Non-empty abstract list paths from `cur` to `target` over nodes not
    /// in `mask`, added to `acc`.
    fn list_paths(&self, cur: usize, target: usize, acc: &mut AmsCore, mask: &mut u32, visit: &mut dyn FnMut(&AmsCore)) {
        if cur == 0 || *mask >> cur & 1 == 1 {
            return;
        }
        *mask |= 1 << cur;
        for t in 0..self.n {
            for label in [EdgeLabel::Exactly1, EdgeLabel::AtLeast2] {
                acc.edges[cur] = Some((t as u8, label));
                if t == target {
                    visit(acc);
                }
                if *mask >> t & 1 == 0 {
                    self.list_paths(t, target, acc, mask, visit);
                }
            }
        }
        acc.edges[cur] = None;
        *mask &= !(1 << cur);
    }

    /// Whether an AMS (garbage clamped to the node's csize) belongs to the
    /// node's abstraction.
    fn member(&mut self, id: Id, a: &AmsCore) -> Result<bool> {
        let c = self.cs(id);
        let a = clamp(a, c);
        if let Some(&r) = self.member_memo.get(&(id, a.clone())) {
            return Ok(r);
        }
        let r = match &self.arena.nodes[id] {
            Node::Atom(f) => self.atom_member(f, &a),
            Node::Not(x) => !self.member(*x, &a)?,
            Node::And(x, y) => {
                let (x, y) = (*x, *y);
                self.member(x, &a)? && self.member(y, &a)?
            }
            Node::Or(x, y) => {
                let (x, y) = (*x, *y);
                self.member(x, &a)? || self.member(y, &a)?
            }
            Node::Sep(x, y) => {
                let (x, y) = (*x, *y);
                self.sep_member(x, y, &a)?
            }
            Node::Septract(x, y) => {
                let (x, y) = (*x, *y);
                self.septract_member(x, y, &a)?
            }
        };
        self.member_memo.insert((id, a), r);
        Ok(r)
    }

    fn atom_member(&self, f: &Formula, a: &AmsCore) -> bool {
        let cls = |v: &Var| self.shape.class_of(v).unwrap();
        let empty = a.edge_count() == 0 && a.is_garbage_free();
        match f {
            Formula::Emp => empty,
            Formula::Eq(x, y) => empty && cls(x) == cls(y),
            Formula::Neq(x, y) => empty && cls(x) != cls(y),
            Formula::PointsTo(x, y) => {
                a.is_garbage_free()
                    && a.edge_count() == 1
                    && a.edges[cls(x)] == Some((cls(y) as u8, EdgeLabel::Exactly1))
            }
            Formula::Ls(x, y) => {
                if !a.is_garbage_free() {
                    return false;
                }
                let mut seen = 0u32;
                let mut cur = cls(x);
                while let Some((t, _)) = a.edges[cur] {
                    if seen >> cur & 1 == 1 {
                        break;
                    }
                    seen |= 1 << cur;
                    cur = t as usize;
                }
                seen.count_ones() as usize == a.edge_count() && cur == cls(y)
            }
            _ => unreachable!(),
        }
    }

    fn sep_member(&mut self, x: Id, y: Id, a: &AmsCore) -> Result<bool> {
        let (cx, cy) = (self.cs(x), self.cs(y));
        // a small enumerable side drives the split
        for (p, q, cp) in [(x, y, cx), (y, x, cy)] {
            if self.arena.enumerable[p] {
                let ep = self.enumerate(p)?;
                if ep.len() <= 64 {
                    for part in ep.iter() {
                        let lo = part.garbage;
                        let hi = if lo == cp { a.garbage } else { lo };
                        for g in lo..=hi.max(lo) {
                            if let Some(rest) = subtract(a, &part.with_garbage(g)) {
                                if self.member(q, &rest)? {
                                    return Ok(true);
                                }
                            }
                        }
                    }
                    return Ok(false);
                }
            }
        }
        for part in sub_cores(a, a.garbage) {
            let rest = subtract(a, &part).unwrap();
            if self.member(x, &part)? && self.member(y, &rest)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn septract_member(&mut self, x: Id, y: Id, a: &AmsCore) -> Result<bool> {
        let (cx, cy) = (self.cs(x), self.cs(y));
        let g = cx.max(cy);
        if self.arena.enumerable[x] {
            let ex = self.enumerate(x)?;
            for w in ex.iter().flat_map(|w| lift_one(w, cx, g)) {
                if let Some(whole) = compose(a, &w) {
                    if self.member(y, &whole)? {
                        return Ok(true);
                    }
                }
            }
            return Ok(false);
        }
        if self.arena.enumerable[y] {
            let ey = self.enumerate(y)?;
            for whole in ey.iter().flat_map(|w| lift_one(w, cy, cy + g)) {
                if let Some(w) = subtract(&whole, a) {
                    if w.garbage <= g && self.member(x, &w)? {
                        return Ok(true);
                    }
                }
            }
            return Ok(false);
        }
        let mask = a.alloc_mask();
        let u = self.universe()?;
        for base in u.iter() {
            if base.alloc_mask() & mask != 0 {
                continue;
            }
            for k in 0..=g {
                let w = base.with_garbage(k);
                let whole = compose(a, &w).unwrap();
                if self.member(x, &w)? && self.member(y, &whole)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Members of the node's abstraction: enumeration when possible,
    /// otherwise a filtered universe. Stops at the first hit when `first`.
    fn solutions(&mut self, id: Id, first: bool) -> Result<Vec<AmsCore>> {
        if self.arena.enumerable[id] {
            return Ok(self.enumerate(id)?.to_vec());
        }
        let c = self.cs(id);
        let u = self.universe()?;
        let mut out = Vec::new();
        for base in u.iter() {
            for k in 0..=c {
                let a = base.with_garbage(k);
                if self.member(id, &a)? {
                    out.push(a);
                    if first {
                        return Ok(out);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Every AMS `p` with `subtract(a, p)` defined and `p.garbage <= g`.
fn sub_cores(a: &AmsCore, g: u32) -> Vec<AmsCore> {
    let edges: Vec<usize> = (0..a.edges.len()).filter(|i| a.edges[*i].is_some()).collect();
    let k = edges.len() + a.negalloc.len();
    let mut out = Vec::new();
    for mask in 0u64..(1 << k) {
        let mut p = AmsCore::empty(a.edges.len());
        for (j, &i) in edges.iter().enumerate() {
            if mask >> j & 1 == 1 {
                p.edges[i] = a.edges[i];
            }
        }
        for (j, grp) in a.negalloc.iter().enumerate() {
            if mask >> (edges.len() + j) & 1 == 1 {
                p.negalloc.push(*grp);
            }
        }
        for gg in 0..=a.garbage.min(g) {
            out.push(p.with_garbage(gg));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Maximum number of non-nil variables.
    pub max_vars: usize,
    /// Largest shape for which a full universe may be enumerated.
    pub max_universe_classes: usize,
    pub force: bool,
    /// Re-check witnesses with the concrete oracle.
    pub check_witness: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_vars: 6, max_universe_classes: MAX_UNIVERSE_CLASSES, force: false, check_witness: true }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Sat,
    Unsat,
    Valid,
    Invalid,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::Valid => "VALID",
            Status::Invalid => "INVALID",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    /// Satisfying model or countermodel.
    pub witness: Option<Model>,
    pub witness_ams: Option<Ams>,
    /// Oracle verdict on the witness, when it was checked.
    pub witness_verified: Option<bool>,
}

impl Verdict {
    pub fn is_positive(&self) -> bool {
        matches!(self.status, Status::Sat | Status::Valid)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "status": self.status.as_str() });
        if let Some(m) = &self.witness {
            v["witness"] = m.to_json();
        }
        if let Some(a) = &self.witness_ams {
            v["ams"] = a.to_json();
        }
        if let Some(ok) = self.witness_verified {
            v["witness_verified"] = json!(ok);
        }
        v
    }
}

fn var_set(f: &Formula, vars: &BTreeSet<Var>, cfg: &SolverConfig) -> Result<BTreeSet<Var>> {
    let mut all: BTreeSet<Var> = vars.clone();
    for v in f.free_vars() {
        if !all.contains(&v) && !v.is_nil() {
            return Err(Error::UnboundVar(v.to_string()));
        }
    }
    all.insert(Var::nil());
    let k = all.len() - 1;
    if k > cfg.max_vars && !cfg.force {
        return Err(Error::TooManyVars { got: k, limit: cfg.max_vars });
    }
    Ok(all)
}

/// Equalities and disequalities forced by conjuncts reachable through `*`
/// and `&&`, plus variables forced to be allocated.
fn forced(f: &Formula, eqs: &mut Vec<(Var, Var)>, neqs: &mut Vec<(Var, Var)>) {
    match f {
        Formula::Eq(x, y) => eqs.push((x.clone(), y.clone())),
        Formula::Neq(x, y) => neqs.push((x.clone(), y.clone())),
        Formula::PointsTo(x, _) => neqs.push((x.clone(), Var::nil())),
        Formula::Sep(a, b) | Formula::And(a, b) => {
            forced(a, eqs, neqs);
            forced(b, eqs, neqs);
        }
        _ => {}
    }
}

/// Shapes over `vars` consistent with the forced (dis)equalities of `f`.
pub fn candidate_shapes(f: &Formula, vars: &BTreeSet<Var>) -> Vec<Arc<Shape>> {
    let (mut eqs, mut neqs) = (Vec::new(), Vec::new());
    forced(f, &mut eqs, &mut neqs);
    let vs: Vec<Var> = vars.iter().cloned().collect();
    let pos: BTreeMap<&Var, usize> = vs.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..vs.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for (x, y) in &eqs {
        let (a, b) = (find(&mut parent, pos[x]), find(&mut parent, pos[y]));
        parent[a] = b;
    }
    let mut units: BTreeMap<usize, Vec<Var>> = BTreeMap::new();
    for i in 0..vs.len() {
        let r = find(&mut parent, i);
        units.entry(r).or_default().push(vs[i].clone());
    }
    let unit_of: BTreeMap<Var, usize> =
        units.values().enumerate().flat_map(|(u, c)| c.iter().map(move |v| (v.clone(), u))).collect();
    let unit_list: Vec<Vec<Var>> = units.into_values().collect();
    let neq_units: Vec<(usize, usize)> = neqs.iter().map(|(x, y)| (unit_of[x], unit_of[y])).collect();
    if neq_units.iter().any(|(a, b)| a == b) {
        return vec![];
    }
    let ids: Vec<Var> = (0..unit_list.len()).map(|i| Var::new(&format!("u{i}"))).collect();
    let mut out = Vec::new();
    for p in crate::oracle::set_partitions(&ids) {
        let mut block_of = vec![0usize; unit_list.len()];
        for (b, blk) in p.iter().enumerate() {
            for u in blk {
                block_of[u.as_str()[1..].parse::<usize>().unwrap()] = b;
            }
        }
        if neq_units.iter().any(|(a, b)| block_of[*a] == block_of[*b]) {
            continue;
        }
        let classes: Vec<Vec<Var>> = p
            .iter()
            .map(|blk| blk.iter().flat_map(|u| unit_list[u.as_str()[1..].parse::<usize>().unwrap()].clone()).collect())
            .collect();
        out.push(Arc::new(Shape::new(classes).unwrap()));
    }
    out
}

fn witness_for(shape: &Arc<Shape>, a: AmsCore, f: &Formula, cfg: &SolverConfig) -> (Model, Ams, Option<bool>) {
    let m = realize_core(shape, &a);
    let verified = if cfg.check_witness {
        let ocfg = OracleConfig { force: true, ..Default::default() };
        oracle::holds_with(&m, f, Mode::Strong, &ocfg).ok()
    } else {
        None
    };
    (m, Ams { shape: shape.clone(), core: a }, verified)
}

/// Satisfiability of `f` over stacks with domain `vars` (plus nil).
pub fn sat(f: &Formula, vars: &BTreeSet<Var>, cfg: &SolverConfig) -> Result<Verdict> {
    let all = var_set(f, vars, cfg)?;
    let mut arena = Arena::default();
    let root = arena.add(f);
    for shape in candidate_shapes(f, &all) {
        let mut eng = Engine::new(&arena, shape.clone(), cfg);
        if let Some(a) = eng.solutions(root, true)?.into_iter().next() {
            let (m, ams, verified) = witness_for(&shape, a, f, cfg);
            return Ok(Verdict { status: Status::Sat, witness: Some(m), witness_ams: Some(ams), witness_verified: verified });
        }
    }
    Ok(Verdict { status: Status::Unsat, witness: None, witness_ams: None, witness_verified: None })
}

pub fn entails(lhs: &Formula, rhs: &Formula, vars: &BTreeSet<Var>, cfg: &SolverConfig) -> Result<Verdict> {
    let q = Formula::and(lhs.clone(), Formula::not(rhs.clone()));
    let v = sat(&q, vars, cfg)?;
    Ok(match v.status {
        Status::Sat => Verdict { status: Status::Invalid, ..v },
        _ => Verdict { status: Status::Valid, ..v },
    })
}

/// Both directions of entailment.
pub fn equivalent(a: &Formula, b: &Formula, vars: &BTreeSet<Var>, cfg: &SolverConfig) -> Result<bool> {
    Ok(entails(a, b, vars, cfg)?.status == Status::Valid && entails(b, a, vars, cfg)?.status == Status::Valid)
}

/// `m |= f` decided through the induced AMS.
pub fn model_check(m: &Model, f: &Formula) -> Result<bool> {
    model_check_with(m, f, &SolverConfig { force: true, ..Default::default() })
}

pub fn model_check_with(m: &Model, f: &Formula, cfg: &SolverConfig) -> Result<bool> {
    for v in f.free_vars() {
        if !m.stack.contains_key(&v) {
            return Err(Error::UnboundVar(v.to_string()));
        }
    }
    let shape = Arc::new(Shape::of_stack(&m.stack));
    let a = induced_core(&shape, m);
    let mut arena = Arena::default();
    let root = arena.add(f);
    let mut eng = Engine::new(&arena, shape, cfg);
    eng.member(root, &a)
}

/// The abstraction set of `f` over `shape` computed by the lazy engine.
pub fn abstraction(shape: &Arc<Shape>, f: &Formula, cfg: &SolverConfig) -> Result<AbstractionSet> {
    check_vars(shape, f)?;
    let mut arena = Arena::default();
    let root = arena.add(f);
    let mut eng = Engine::new(&arena, shape.clone(), cfg);
    let elems = eng.solutions(root, false)?;
    Ok(set_of(shape, f.csize(), elems))
}

/// All `(shape, abstraction)` pairs of `f` over `vars`, skipping shapes with
/// an empty abstraction.
pub fn abstractions(f: &Formula, vars: &BTreeSet<Var>, cfg: &SolverConfig) -> Result<Vec<AbstractionSet>> {
    let all = var_set(f, vars, cfg)?;
    let mut out = Vec::new();
    let mut arena = Arena::default();
    let root = arena.add(f);
    for shape in candidate_shapes(f, &all) {
        let mut eng = Engine::new(&arena, shape.clone(), cfg);
        let elems = eng.solutions(root, false)?;
        if !elems.is_empty() {
            out.push(set_of(&shape, f.csize(), elems));
        }
    }
    Ok(out)
}
