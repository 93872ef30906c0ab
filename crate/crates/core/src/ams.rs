//! Abstract memory states over a fixed stack shape.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formula::Var;
use crate::model::{chunks, Heap, Loc, Model, Polarity, Stack};

/// A partition of a variable set into stack classes. Class 0 holds nil; the
/// others are ordered by their least member.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    classes: Vec<Vec<Var>>,
    index: BTreeMap<Var, usize>,
}

impl Shape {
    pub fn new(partition: Vec<Vec<Var>>) -> Result<Shape> {
        let nil = Var::nil();
        let mut classes: Vec<Vec<Var>> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut has_nil = false;
        for mut c in partition {
            if c.is_empty() {
                return Err(Error::InvalidAms("empty stack class".into()));
            }
            c.sort();
            c.dedup();
            for v in &c {
                if !seen.insert(v.clone()) {
                    return Err(Error::InvalidAms(format!("variable {v} in two classes")));
                }
            }
            has_nil |= c.contains(&nil);
            classes.push(c);
        }
        if !has_nil {
            classes.push(vec![nil.clone()]);
        }
        if classes.len() > 32 {
            return Err(Error::InvalidAms("more than 32 stack classes".into()));
        }
        classes.sort_by(|a, b| (!a.contains(&nil), &a[0]).cmp(&(!b.contains(&nil), &b[0])));
        let mut index = BTreeMap::new();
        for (i, c) in classes.iter().enumerate() {
            for v in c {
                index.insert(v.clone(), i);
            }
        }
        Ok(Shape { classes, index })
    }

    pub fn of_stack(s: &Stack) -> Shape {
        let mut by_loc: BTreeMap<Loc, Vec<Var>> = BTreeMap::new();
        for (v, l) in s {
            by_loc.entry(*l).or_default().push(v.clone());
        }
        Shape::new(by_loc.into_values().collect()).expect("stack classes form a partition")
    }

    /// Every shape over `vars` (nil added).
    pub fn all(vars: &BTreeSet<Var>) -> Vec<Shape> {
        let mut vs: Vec<Var> = vars.iter().filter(|v| !v.is_nil()).cloned().collect();
        vs.insert(0, Var::nil());
        crate::oracle::set_partitions(&vs).into_iter().map(|p| Shape::new(p).unwrap()).collect()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn classes(&self) -> &[Vec<Var>] {
        &self.classes
    }

    pub fn class_of(&self, v: &Var) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.index.keys()
    }

    /// Largest member of a class under the variable order.
    pub fn max_var(&self, i: usize) -> &Var {
        self.classes[i].last().unwrap()
    }

    /// The canonical stack: class i at location i.
    pub fn stack(&self) -> Stack {
        self.index.iter().map(|(v, i)| (v.clone(), *i as Loc)).collect()
    }

    fn node_json(&self, i: usize) -> Value {
        json!(self.classes[i].iter().map(|v| v.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self
            .classes
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", cs.join(" "))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum EdgeLabel {
    Exactly1,
    AtLeast2,
}

impl EdgeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::Exactly1 => "=1",
            EdgeLabel::AtLeast2 => ">=2",
        }
    }
}

/// The shape-relative part of an AMS: edges indexed by class, allocation
/// groups of negative chunks as class bitmasks (sorted), and the garbage
/// count.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AmsCore {
    pub edges: Vec<Option<(u8, EdgeLabel)>>,
    pub negalloc: Vec<u32>,
    pub garbage: u32,
}

impl AmsCore {
    pub fn empty(n: usize) -> AmsCore {
        AmsCore { edges: vec![None; n], negalloc: Vec::new(), garbage: 0 }
    }

    pub fn alloc_mask(&self) -> u32 {
        let mut m = self.negalloc.iter().fold(0, |a, b| a | b);
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_some() {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_garbage_free(&self) -> bool {
        self.negalloc.is_empty() && self.garbage == 0
    }

    pub fn with_garbage(&self, garbage: u32) -> AmsCore {
        AmsCore { garbage, ..self.clone() }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidAms(m.to_string()));
        if self.edges.len() != n {
            return bad("edge vector does not match the number of nodes");
        }
        if self.edges[0].is_some() {
            return bad("the nil node has an outgoing edge");
        }
        for (t, _) in self.edges.iter().flatten() {
            if *t as usize >= n {
                return bad("edge target out of range");
            }
        }
        let mut edge_mask = 0u32;
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_some() {
                edge_mask |= 1 << i;
            }
        }
        let mut seen = 0u32;
        for &g in &self.negalloc {
            if g == 0 {
                return bad("empty negative-allocation group");
            }
            if g & 1 != 0 {
                return bad("the nil node is in a negative-allocation group");
            }
            if g >> n != 0 {
                return bad("negative-allocation group out of range");
            }
            if g & seen != 0 || g & edge_mask != 0 {
                return bad("negative-allocation groups overlap");
            }
            seen |= g;
        }
        if self.negalloc.windows(2).any(|w| w[0] >= w[1]) {
            return bad("negative-allocation groups not in canonical order");
        }
        Ok(())
    }
}

/// Composition; `None` unless the allocated nodes are disjoint.
pub fn compose(a: &AmsCore, b: &AmsCore) -> Option<AmsCore> {
    if a.alloc_mask() & b.alloc_mask() != 0 {
        return None;
    }
    let edges = a.edges.iter().zip(&b.edges).map(|(x, y)| x.or(*y)).collect();
    let mut negalloc: Vec<u32> = a.negalloc.iter().chain(&b.negalloc).copied().collect();
    negalloc.sort_unstable();
    Some(AmsCore { edges, negalloc, garbage: a.garbage + b.garbage })
}

/// The unique `c` with `compose(c, part) = whole`, if any.
pub fn subtract(whole: &AmsCore, part: &AmsCore) -> Option<AmsCore> {
    if part.garbage > whole.garbage {
        return None;
    }
    let mut edges = whole.edges.clone();
    for (i, e) in part.edges.iter().enumerate() {
        if let Some(e) = e {
            if whole.edges[i] != Some(*e) {
                return None;
            }
            edges[i] = None;
        }
    }
    let mut negalloc = whole.negalloc.clone();
    for g in &part.negalloc {
        let pos = negalloc.iter().position(|x| x == g)?;
        negalloc.remove(pos);
    }
    Some(AmsCore { edges, negalloc, garbage: whole.garbage - part.garbage })
}

/// Bound-lifting of a single AMS from `m` to `n`.
pub fn lift_one(a: &AmsCore, m: u32, n: u32) -> Vec<AmsCore> {
    if a.garbage < m {
        vec![a.clone()]
    } else {
        (m..=n).map(|g| a.with_garbage(g)).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ams {
    pub shape: Arc<Shape>,
    pub core: AmsCore,
}

impl Ams {
    pub fn new(shape: Arc<Shape>, core: AmsCore) -> Result<Ams> {
        core.validate(shape.len())?;
        Ok(Ams { shape, core })
    }

    pub fn size(&self) -> usize {
        self.shape.len() + self.core.garbage as usize
    }

    pub fn alloc(&self) -> BTreeSet<usize> {
        let m = self.core.alloc_mask();
        (0..self.shape.len()).filter(|i| m >> i & 1 == 1).collect()
    }

    pub fn to_json(&self) -> Value {
        let sh = &self.shape;
        let nodes: Vec<Value> = (0..sh.len()).map(|i| sh.node_json(i)).collect();
        let edges: Vec<Value> = self
            .core
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|(t, l)| json!([sh.node_json(i), sh.node_json(t as usize), l.as_str()])))
            .collect();
        let negalloc: Vec<Value> = self
            .core
            .negalloc
            .iter()
            .map(|g| json!((0..sh.len()).filter(|i| g >> i & 1 == 1).map(|i| sh.node_json(i)).collect::<Vec<_>>()))
            .collect();
        json!({ "nodes": nodes, "edges": edges, "negalloc": negalloc, "garbage": self.core.garbage })
    }

    pub fn from_json(v: &Value) -> Result<Ams> {
        let bad = |m: &str| Error::InvalidAms(m.to_string());
        let node = |v: &Value| -> Result<Vec<Var>> {
            v.as_array()
                .ok_or_else(|| bad("a node must be an array of variable names"))?
                .iter()
                .map(|x| x.as_str().map(Var::new).ok_or_else(|| bad("variable names must be strings")))
                .collect()
        };
        let nodes = v.get("nodes").and_then(Value::as_array).ok_or_else(|| bad("missing \"nodes\""))?;
        let partition = nodes.iter().map(node).collect::<Result<Vec<_>>>()?;
        if !partition.iter().any(|c| c.contains(&Var::nil())) {
            return Err(bad("no node contains nil"));
        }
        let shape = Arc::new(Shape::new(partition)?);
        let lookup = |v: &Value| -> Result<usize> {
            let vs = node(v)?;
            let i = vs.first().and_then(|x| shape.class_of(x)).ok_or_else(|| bad("unknown node"))?;
            let mut sorted = vs.clone();
            sorted.sort();
            if sorted != shape.classes()[i] {
                return Err(bad("edge endpoint is not a node"));
            }
            Ok(i)
        };
        let mut core = AmsCore::empty(shape.len());
        for e in v.get("edges").and_then(Value::as_array).ok_or_else(|| bad("missing \"edges\""))? {
            let e = e.as_array().filter(|e| e.len() == 3).ok_or_else(|| bad("edges are [src, dst, label]"))?;
            let (s, t) = (lookup(&e[0])?, lookup(&e[1])?);
            let label = match e[2].as_str() {
                Some("=1") => EdgeLabel::Exactly1,
                Some(">=2") => EdgeLabel::AtLeast2,
                _ => return Err(bad("edge label must be \"=1\" or \">=2\"")),
            };
            if core.edges[s].is_some() {
                return Err(bad("two edges from one node"));
            }
            core.edges[s] = Some((t as u8, label));
        }
        for g in v.get("negalloc").and_then(Value::as_array).ok_or_else(|| bad("missing \"negalloc\""))? {
            let mut mask = 0u32;
            for n in g.as_array().ok_or_else(|| bad("negalloc entries are arrays of nodes"))? {
                mask |= 1 << lookup(n)?;
            }
            core.negalloc.push(mask);
        }
        core.negalloc.sort_unstable();
        core.garbage = v
            .get("garbage")
            .and_then(Value::as_u64)
            .and_then(|g| u32::try_from(g).ok())
            .ok_or_else(|| bad("missing \"garbage\""))?;
        Ams::new(shape, core)
    }
}

impl fmt::Debug for Ams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// A set of AMS over one shape whose garbage counts are at most `bound`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbstractionSet {
    pub shape: Arc<Shape>,
    pub bound: u32,
    pub elems: BTreeSet<AmsCore>,
}

impl AbstractionSet {
    pub fn empty(shape: Arc<Shape>, bound: u32) -> Self {
        AbstractionSet { shape, bound, elems: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, a: &AmsCore) -> bool {
        self.elems.contains(a)
    }

    /// Bound-lifting from the set's bound `m` to `n`.
    pub fn lift(&self, n: u32) -> Result<AbstractionSet> {
        let m = self.bound;
        if m > n {
            return Err(Error::Precondition(format!("cannot lift from {m} down to {n}")));
        }
        let elems = self.elems.iter().flat_map(|a| lift_one(a, m, n)).collect();
        Ok(AbstractionSet { shape: self.shape.clone(), bound: n, elems })
    }

    pub fn iter(&self) -> impl Iterator<Item = Ams> + '_ {
        self.elems.iter().map(|c| Ams { shape: self.shape.clone(), core: c.clone() })
    }
}

/// `{A in universe | exists a1 in s1. A + a1 in s2}`.
pub fn sept_sets(s1: &AbstractionSet, s2: &AbstractionSet, universe: &AbstractionSet) -> AbstractionSet {
    let mut out = AbstractionSet::empty(universe.shape.clone(), universe.bound);
    for a2 in &s2.elems {
        for a1 in &s1.elems {
            if let Some(a) = subtract(a2, a1) {
                if universe.contains(&a) {
                    out.elems.insert(a);
                }
            }
        }
    }
    out
}

pub fn induced_ams(m: &Model) -> Ams {
    let shape = Arc::new(Shape::of_stack(&m.stack));
    let core = induced_core(&shape, m);
    Ams { shape, core }
}

/// The induced AMS of a model whose stack has the given shape.
pub fn induced_core(shape: &Shape, m: &Model) -> AmsCore {
    let mut class_at: BTreeMap<Loc, usize> = BTreeMap::new();
    for (v, l) in &m.stack {
        class_at.insert(*l, shape.class_of(v).expect("stack variable in shape"));
    }
    let mut core = AmsCore::empty(shape.len());
    let mut negative = 0u32;
    for c in chunks(m) {
        match c.polarity {
            Polarity::Positive => {
                let (x, y) = match c.witness.as_ref().unwrap() {
                    crate::formula::Formula::PointsTo(x, y) | crate::formula::Formula::Ls(x, y) => (x, y),
                    _ => unreachable!(),
                };
                let label = if c.heap.len() == 1 { EdgeLabel::Exactly1 } else { EdgeLabel::AtLeast2 };
                let (s, t) = (shape.class_of(x).unwrap(), shape.class_of(y).unwrap());
                core.edges[s] = Some((t as u8, label));
            }
            Polarity::Negative => {
                negative += 1;
                let mut g = 0u32;
                for l in c.heap.keys() {
                    if let Some(&i) = class_at.get(l) {
                        g |= 1 << i;
                    }
                }
                if g != 0 {
                    core.negalloc.push(g);
                }
            }
        }
    }
    core.negalloc.sort_unstable();
    core.garbage = negative - core.negalloc.len() as u32;
    core
}

/// Tunable parts of a realization: path lengths of `>=2` edges, tail
/// lengths behind the shared sink of each negative-allocation group (and
/// whether the tail closes into a cycle), cycle lengths of garbage chunks,
/// and the first fresh location.
#[derive(Clone, Debug, Default)]
pub struct RealizeOptions {
    pub path_len: Vec<u32>,
    pub sink_tail: Vec<(u32, bool)>,
    pub garbage_len: Vec<u32>,
    pub first_fresh: Option<Loc>,
}

/// A model inducing `a`: `=1` edges become a pointer, `>=2` edges two
/// pointers through a middle location, each negative-allocation group points
/// into one shared sink, and every garbage chunk is a self-loop. Class i sits
/// at location i, middles at n+i, sinks at 2n+j, garbage at 3n+j.
pub fn realize(a: &Ams) -> Model {
    realize_core(&a.shape, &a.core)
}

pub fn realize_core(shape: &Shape, a: &AmsCore) -> Model {
    let n = shape.len() as Loc;
    let mut heap = Heap::new();
    for (i, e) in a.edges.iter().enumerate() {
        if let Some((t, l)) = e {
            let i = i as Loc;
            match l {
                EdgeLabel::Exactly1 => {
                    heap.insert(i, *t as Loc);
                }
                EdgeLabel::AtLeast2 => {
                    heap.insert(i, n + i);
                    heap.insert(n + i, *t as Loc);
                }
            }
        }
    }
    for (j, g) in a.negalloc.iter().enumerate() {
        for i in 0..n {
            if g >> i & 1 == 1 {
                heap.insert(i, 2 * n + j as Loc);
            }
        }
    }
    for j in 0..a.garbage {
        heap.insert(3 * n + j, 3 * n + j);
    }
    Model { stack: shape.stack(), heap }
}

/// A realization with longer paths, tails and cycles as given by `opts`
/// (missing entries use the minimal construction).
pub fn realize_with(shape: &Shape, a: &AmsCore, opts: &RealizeOptions) -> Model {
    let n = shape.len() as Loc;
    let mut next = opts.first_fresh.unwrap_or(n).max(n);
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut heap = Heap::new();
    let mut k = 0;
    for (i, e) in a.edges.iter().enumerate() {
        if let Some((t, l)) = e {
            let i = i as Loc;
            match l {
                EdgeLabel::Exactly1 => {
                    heap.insert(i, *t as Loc);
                }
                EdgeLabel::AtLeast2 => {
                    let len = opts.path_len.get(k).copied().unwrap_or(2).max(2);
                    k += 1;
                    let mut cur = i;
                    for _ in 0..len - 1 {
                        let mid = fresh();
                        heap.insert(cur, mid);
                        cur = mid;
                    }
                    heap.insert(cur, *t as Loc);
                }
            }
        }
    }
    for (j, g) in a.negalloc.iter().enumerate() {
        let (tail, cyclic) = opts.sink_tail.get(j).copied().unwrap_or((1, false));
        let tail = tail.max(1);
        let cells: Vec<Loc> = (0..tail).map(|_| fresh()).collect();
        for i in 0..n {
            if g >> i & 1 == 1 {
                heap.insert(i, cells[0]);
            }
        }
        for w in cells.windows(2) {
            heap.insert(w[0], w[1]);
        }
        if cyclic {
            heap.insert(*cells.last().unwrap(), cells[0]);
        }
    }
    for j in 0..a.garbage as usize {
        let len = opts.garbage_len.get(j).copied().unwrap_or(1).max(1);
        let cells: Vec<Loc> = (0..len).map(|_| fresh()).collect();
        for (x, c) in cells.iter().enumerate() {
            heap.insert(*c, cells[(x + 1) % cells.len()]);
        }
    }
    Model { stack: shape.stack(), heap }
}

pub const MAX_UNIVERSE_CLASSES: usize = 7;

/// Every valid AMS over `shape` with garbage at most `k`.
pub fn enumerate_universe(shape: &Arc<Shape>, k: u32, force: bool) -> Result<AbstractionSet> {
    let n = shape.len();
    if n > MAX_UNIVERSE_CLASSES && !force {
        return Err(Error::UniverseTooLarge { got: n, limit: MAX_UNIVERSE_CLASSES });
    }
    let mut out = AbstractionSet::empty(shape.clone(), k);
    for base in universe_cores(n) {
        for g in 0..=k {
            out.elems.insert(base.with_garbage(g));
        }
    }
    Ok(out)
}

/// Garbage-free-count universe: every choice of edges and groups.
pub fn universe_cores(n: usize) -> Vec<AmsCore> {
    // per non-nil node: 0 unallocated, 1 + 2t + l edge, 1 + 2n + j group j
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    fn rec(i: usize, n: usize, groups: usize, choice: &mut Vec<usize>, out: &mut Vec<AmsCore>) {
        if i == n {
            let mut core = AmsCore::empty(n);
            let mut masks = vec![0u32; groups];
            for (v, &c) in choice.iter().enumerate().skip(1) {
                if c == 0 {
                    continue;
                }
                let c = c - 1;
                if c < 2 * n {
                    let label = if c % 2 == 0 { EdgeLabel::Exactly1 } else { EdgeLabel::AtLeast2 };
                    core.edges[v] = Some(((c / 2) as u8, label));
                } else {
                    masks[c - 2 * n] |= 1 << v;
                }
            }
            masks.sort_unstable();
            core.negalloc = masks;
            out.push(core);
            return;
        }
        for c in 0..=(2 * n + groups + 1) {
            let new_groups = if c == 2 * n + groups + 1 { groups + 1 } else { groups };
            choice[i] = c;
            rec(i + 1, n, new_groups, choice, out);
        }
    }
    rec(1, n, 0, &mut choice, &mut out);
    out
}

/// The abstract lists from `x` to `y`: garbage-free AMS whose edges form a
/// path v1 -> ... -> vn with x in v1 and y in vn, the nodes v1..v(n-1)
/// pairwise distinct (vn may close the path into a lasso).
pub fn abstract_lists(shape: &Shape, x: &Var, y: &Var) -> Vec<AmsCore> {
    let (sx, sy) = match (shape.class_of(x), shape.class_of(y)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Vec::new(),
    };
    let n = shape.len();
    let mut out = Vec::new();
    if sx == sy {
        out.push(AmsCore::empty(n));
    }
    let mut core = AmsCore::empty(n);
    fn rec(cur: usize, target: usize, n: usize, core: &mut AmsCore, out: &mut Vec<AmsCore>) {
        if cur == 0 {
            return;
        }
        for t in 0..n {
            for label in [EdgeLabel::Exactly1, EdgeLabel::AtLeast2] {
                core.edges[cur] = Some((t as u8, label));
                if t == target {
                    out.push(core.clone());
                }
                if core.edges[t].is_none() && t != cur {
                    rec(t, target, n, core, out);
                }
                core.edges[cur] = None;
            }
        }
    }
    rec(sx, sy, n, &mut core, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Splits the heap of `m` into parts inducing `a1` and `a2`, if their
/// composition is the induced AMS of `m`.
pub fn decompose(m: &Model, a1: &AmsCore, a2: &AmsCore) -> Option<(Heap, Heap)> {
    let shape = Shape::of_stack(&m.stack);
    let whole = induced_core(&shape, m);
    if compose(a1, a2).as_ref() != Some(&whole) {
        return None;
    }
    let mut class_at: BTreeMap<Loc, usize> = BTreeMap::new();
    for (v, l) in &m.stack {
        class_at.insert(*l, shape.class_of(v).unwrap());
    }
    let (mut h1, mut h2) = (Heap::new(), Heap::new());
    let mut garbage1 = a1.garbage;
    for c in chunks(m) {
        let allocated: u32 =
            c.heap.keys().filter_map(|l| class_at.get(l)).fold(0, |acc, i| acc | 1 << i);
        let to_first = if allocated == 0 {
            if garbage1 > 0 {
                garbage1 -= 1;
                true
            } else {
                false
            }
        } else {
            a1.alloc_mask() & allocated != 0
        };
        if to_first {
            h1.extend(c.heap);
        } else {
            h2.extend(c.heap);
        }
    }
    Some((h1, h2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;

    fn v(s: &str) -> Var {
        Var::new(s)
    }

    fn example2() -> Model {
        Model::from_pairs(
            &[("x", 1), ("y", 3), ("u", 5), ("z", 3), ("w", 7), ("v", 9), ("nil", 0)],
            &[(1, 2), (2, 3), (3, 8), (4, 6), (5, 6), (6, 3), (7, 6), (9, 9), (10, 11), (11, 10)],
        )
        .unwrap()
    }

    #[test]
    fn example2_induced() {
        let a = induced_ams(&example2());
        let expected = serde_json::json!({
            "nodes": [["nil"], ["u"], ["v"], ["w"], ["x"], ["y", "z"]],
            "edges": [[["v"], ["v"], "=1"], [["x"], ["y", "z"], ">=2"]],
            "negalloc": [[["u"], ["w"]], [["y", "z"]]],
            "garbage": 1
        });
        assert_eq!(a.to_json(), expected);
        assert_eq!(Ams::from_json(&expected).unwrap(), a);
        assert_eq!(induced_ams(&realize(&a)), a);
    }

    #[test]
    fn empty_and_pointer() {
        let e = Model::from_pairs(&[("x", 1), ("nil", 0)], &[]).unwrap();
        assert_eq!(induced_ams(&e).core, AmsCore::empty(2));
        let p = Model::from_pairs(&[("x", 1), ("y", 2), ("nil", 0)], &[(1, 2)]).unwrap();
        let a = induced_ams(&p);
        assert_eq!(a.core.edges[1], Some((2, EdgeLabel::Exactly1)));
        assert!(a.core.is_garbage_free());
    }

    #[test]
    fn compose_and_subtract() {
        let mut a = AmsCore::empty(3);
        a.edges[1] = Some((2, EdgeLabel::Exactly1));
        let unit = AmsCore::empty(3);
        assert_eq!(compose(&a, &unit), Some(a.clone()));
        assert_eq!(compose(&a, &a), None);
        let mut b = AmsCore::empty(3);
        b.negalloc = vec![0b100];
        b.garbage = 2;
        let ab = compose(&a, &b).unwrap();
        assert_eq!(subtract(&ab, &a), Some(b.clone()));
        assert_eq!(subtract(&ab, &b), Some(a.clone()));
        assert_eq!(subtract(&a, &b), None);
    }

    #[test]
    fn lifting() {
        let s = Arc::new(Shape::new(vec![vec![Var::nil()]]).unwrap());
        let mut set = AbstractionSet::empty(s.clone(), 1);
        set.elems.insert(AmsCore::empty(1));
        assert_eq!(set.lift(3).unwrap().len(), 1);
        set.elems.insert(AmsCore::empty(1).with_garbage(1));
        let l = set.lift(2).unwrap();
        let gs: Vec<u32> = l.elems.iter().map(|a| a.garbage).collect();
        assert_eq!(gs, vec![0, 1, 2]);
        assert_eq!(set.lift(1).unwrap(), set);
        assert!(set.lift(0).is_err());
    }

    #[test]
    fn universe_counts() {
        let s1 = Arc::new(Shape::new(vec![vec![Var::nil()]]).unwrap());
        assert_eq!(enumerate_universe(&s1, 0, false).unwrap().len(), 1);
        // one non-nil node: unallocated, 2 targets x 2 labels, or its own group
        let s2 = Arc::new(Shape::new(vec![vec![Var::nil()], vec![v("x")]]).unwrap());
        assert_eq!(enumerate_universe(&s2, 0, false).unwrap().len(), 1 + 4 + 1);
        assert_eq!(enumerate_universe(&s2, 2, false).unwrap().len(), 18);
        for a in enumerate_universe(&s2, 1, false).unwrap().elems {
            a.validate(2).unwrap();
        }
    }

    #[test]
    fn abstract_list_count() {
        let s = Shape::new(vec![vec![Var::nil()], vec![v("x")], vec![v("y")]]).unwrap();
        // x -> y (2 labels), and x -> y followed by a y -> y lasso (4)
        assert_eq!(abstract_lists(&s, &v("x"), &v("y")).len(), 6);
        let t = Shape::new(vec![vec![Var::nil()], vec![v("x"), v("y")]]).unwrap();
        assert!(abstract_lists(&t, &v("x"), &v("y")).contains(&AmsCore::empty(2)));
    }
}
