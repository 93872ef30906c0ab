//! Explicit stack-heap models, the two heap unions, isomorphism and chunk
//! decomposition.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::formula::{is_valid_var_name, Formula, Var};

pub type Loc = u32;
pub type Stack = BTreeMap<Var, Loc>;
pub type Heap = BTreeMap<Loc, Loc>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Model {
    pub stack: Stack,
    pub heap: Heap,
}

impl Model {
    /// Builds a model, checking that `nil` is mapped and not allocated.
    pub fn new(stack: Stack, heap: Heap) -> Result<Model> {
        let nil = stack
            .get(&Var::nil())
            .ok_or_else(|| Error::InvalidModel("stack does not map nil".into()))?;
        if heap.contains_key(nil) {
            return Err(Error::InvalidModel(format!("nil location {nil} is allocated")));
        }
        Ok(Model { stack, heap })
    }

    pub fn from_pairs(stack: &[(&str, Loc)], heap: &[(Loc, Loc)]) -> Result<Model> {
        Model::new(
            stack.iter().map(|(v, l)| (Var::new(v), *l)).collect(),
            heap.iter().copied().collect(),
        )
    }

    pub fn nil_loc(&self) -> Loc {
        self.stack[&Var::nil()]
    }

    pub fn img(&self) -> BTreeSet<Loc> {
        img(&self.stack)
    }

    pub fn with_heap(&self, heap: Heap) -> Model {
        Model { stack: self.stack.clone(), heap }
    }

    pub fn to_json(&self) -> Value {
        let stack: Map<String, Value> = self.stack.iter().map(|(v, l)| (v.to_string(), json!(l))).collect();
        let heap: Map<String, Value> = self.heap.iter().map(|(a, b)| (a.to_string(), json!(b))).collect();
        json!({ "stack": stack, "heap": heap })
    }

    pub fn from_json(v: &Value) -> Result<Model> {
        let bad = |m: &str| Error::InvalidModel(m.to_string());
        let stack_obj = v.get("stack").and_then(Value::as_object).ok_or_else(|| bad("missing \"stack\" object"))?;
        let heap_obj = v.get("heap").and_then(Value::as_object).ok_or_else(|| bad("missing \"heap\" object"))?;
        let mut stack = Stack::new();
        for (k, l) in stack_obj {
            if !is_valid_var_name(k) && !k.contains('#') {
                return Err(bad(&format!("bad variable name {k:?}")));
            }
            let l = l.as_u64().ok_or_else(|| bad("stack values must be locations"))?;
            stack.insert(Var::new(k), loc_of(l)?);
        }
        let mut heap = Heap::new();
        for (k, l) in heap_obj {
            let src: u64 = k.parse().map_err(|_| bad(&format!("bad heap key {k:?}")))?;
            let l = l.as_u64().ok_or_else(|| bad("heap values must be locations"))?;
            heap.insert(loc_of(src)?, loc_of(l)?);
        }
        Model::new(stack, heap)
    }
}

fn loc_of(v: u64) -> Result<Loc> {
    Loc::try_from(v).map_err(|_| Error::InvalidModel(format!("location {v} out of range")))
}

pub fn img(s: &Stack) -> BTreeSet<Loc> {
    s.values().copied().collect()
}

pub fn locs(h: &Heap) -> BTreeSet<Loc> {
    h.iter().flat_map(|(a, b)| [*a, *b]).collect()
}

/// Disjoint union; `None` when the domains overlap.
pub fn std_union(h1: &Heap, h2: &Heap) -> Option<Heap> {
    if h1.keys().any(|k| h2.contains_key(k)) {
        return None;
    }
    let mut h = h1.clone();
    h.extend(h2.iter().map(|(a, b)| (*a, *b)));
    Some(h)
}

/// Disjoint union that may only share locations labelled by the stack.
pub fn strong_union(s: &Stack, h1: &Heap, h2: &Heap) -> Option<Heap> {
    let labelled = img(s);
    let l2 = locs(h2);
    if locs(h1).iter().any(|l| l2.contains(l) && !labelled.contains(l)) {
        return None;
    }
    std_union(h1, h2)
}

/// Canonical representative of a model's isomorphism class: labelled
/// locations are numbered by the least variable naming them (nil's first),
/// the rest by a colour refinement followed by a search over ties.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalModel {
    pub stack: Vec<(Var, Loc)>,
    pub heap: Vec<(Loc, Loc)>,
}

impl CanonicalModel {
    pub fn to_model(&self) -> Model {
        Model { stack: self.stack.iter().cloned().collect(), heap: self.heap.iter().copied().collect() }
    }
}

pub fn canonical(m: &Model) -> CanonicalModel {
    let mut labelled: BTreeMap<Loc, Var> = BTreeMap::new();
    for (v, l) in &m.stack {
        labelled.entry(*l).and_modify(|w| if v < w { *w = v.clone() }).or_insert_with(|| v.clone());
    }
    let nil = m.nil_loc();
    let mut order: Vec<Loc> = labelled.keys().copied().filter(|l| *l != nil).collect();
    order.sort_by(|a, b| labelled[a].cmp(&labelled[b]));
    order.insert(0, nil);
    let mut id: HashMap<Loc, Loc> = order.iter().enumerate().map(|(i, l)| (*l, i as Loc)).collect();
    let k = order.len() as Loc;

    let unl: Vec<Loc> = locs(&m.heap).into_iter().filter(|l| !labelled.contains_key(l)).collect();
    if unl.is_empty() {
        return encode(m, &id);
    }

    // colour refinement on unlabelled locations
    let mut preds: HashMap<Loc, Vec<Loc>> = HashMap::new();
    for (a, b) in &m.heap {
        preds.entry(*b).or_default().push(*a);
    }
    let mut colour: HashMap<Loc, u64> = HashMap::new();
    for (l, i) in &id {
        colour.insert(*l, *i as u64);
    }
    let base = k as u64;
    for l in &unl {
        colour.insert(*l, base);
    }
    let mut classes = 1usize;
    loop {
        let mut sigs: Vec<(Loc, (Option<u64>, Vec<u64>, u64))> = unl
            .iter()
            .map(|l| {
                let succ = m.heap.get(l).map(|t| colour[t]);
                let mut ps: Vec<u64> = preds.get(l).map(|v| v.iter().map(|p| colour[p]).collect()).unwrap_or_default();
                ps.sort_unstable();
                (*l, (succ, ps, colour[l]))
            })
            .collect();
        let mut distinct: Vec<_> = sigs.iter().map(|(_, s)| s.clone()).collect();
        distinct.sort();
        distinct.dedup();
        for (l, s) in sigs.drain(..) {
            let c = distinct.binary_search(&s).unwrap() as u64;
            colour.insert(l, base + c);
        }
        if distinct.len() == classes {
            break;
        }
        classes = distinct.len();
    }

    let mut groups: BTreeMap<u64, Vec<Loc>> = BTreeMap::new();
    for l in &unl {
        groups.entry(colour[l]).or_default().push(*l);
    }
    let groups: Vec<Vec<Loc>> = groups.into_values().collect();
    let mut best: Option<CanonicalModel> = None;
    let mut current: Vec<Loc> = Vec::new();
    search_ties(&groups, 0, &mut current, &mut |perm: &[Loc]| {
        for (i, l) in perm.iter().enumerate() {
            id.insert(*l, k + i as Loc);
        }
        let enc = encode(m, &id);
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc);
        }
    });
    best.unwrap()
}

fn search_ties(groups: &[Vec<Loc>], g: usize, current: &mut Vec<Loc>, visit: &mut dyn FnMut(&[Loc])) {
    if g == groups.len() {
        visit(current);
        return;
    }
    let mut items = groups[g].clone();
    permute(&mut items, 0, &mut |p: &[Loc]| {
        let len = current.len();
        current.extend_from_slice(p);
        search_ties(groups, g + 1, current, visit);
        current.truncate(len);
    });
}

fn permute(items: &mut Vec<Loc>, i: usize, visit: &mut dyn FnMut(&[Loc])) {
    if i == items.len() {
        visit(items);
        return;
    }
    for j in i..items.len() {
        items.swap(i, j);
        permute(items, i + 1, visit);
        items.swap(i, j);
    }
}

fn encode(m: &Model, id: &HashMap<Loc, Loc>) -> CanonicalModel {
    let stack = m.stack.iter().map(|(v, l)| (v.clone(), id[l])).collect();
    let mut heap: Vec<(Loc, Loc)> = m.heap.iter().map(|(a, b)| (id[a], id[b])).collect();
    heap.sort_unstable();
    CanonicalModel { stack, heap }
}

pub fn isomorphic(m1: &Model, m2: &Model) -> bool {
    m1.stack.len() == m2.stack.len() && m1.heap.len() == m2.heap.len() && canonical(m1) == canonical(m2)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chunk {
    pub heap: Heap,
    pub polarity: Polarity,
    /// `x -> y` or `ls(x, y)` satisfied by a positive chunk.
    pub witness: Option<Formula>,
}

/// Splits the heap into its chunks: pointers sharing a location outside the
/// stack image belong to the same chunk.
pub fn chunks(m: &Model) -> Vec<Chunk> {
    let labelled = m.img();
    let ptrs: Vec<(Loc, Loc)> = m.heap.iter().map(|(a, b)| (*a, *b)).collect();
    let mut parent: Vec<usize> = (0..ptrs.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut i = i;
        while p[i] != r {
            let next = p[i];
            p[i] = r;
            i = next;
        }
        r
    }
    let mut owner: HashMap<Loc, usize> = HashMap::new();
    for (i, (a, b)) in ptrs.iter().enumerate() {
        for l in [a, b] {
            if labelled.contains(l) {
                continue;
            }
            match owner.get(l) {
                Some(&j) => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
                None => {
                    owner.insert(*l, i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Heap> = BTreeMap::new();
    for (i, (a, b)) in ptrs.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().insert(*a, *b);
    }
    let mut out: Vec<Chunk> = groups.into_values().map(|h| classify(&m.stack, h)).collect();
    out.sort_by_key(|c| *c.heap.keys().next().unwrap());
    out
}

fn classify(stack: &Stack, heap: Heap) -> Chunk {
    for x in stack.keys() {
        for y in stack.keys() {
            for atom in [Formula::pto(x.clone(), y.clone()), Formula::ls(x.clone(), y.clone())] {
                if crate::oracle::atom_holds(stack, &heap, &atom) {
                    return Chunk { heap, polarity: Polarity::Positive, witness: Some(atom) };
                }
            }
        }
    }
    Chunk { heap, polarity: Polarity::Negative, witness: None }
}
