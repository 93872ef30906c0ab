//! Brute-force model checker for the weak and strong semantics, plus a
//! small-model generator. This is the ground truth the decision procedure is
//! tested against.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::formula::{Formula, Var};
use crate::model::{canonical, img, locs, Heap, Loc, Model, Stack};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Mode {
    Weak,
    Strong,
}

/// How candidate extension heaps for `-o` are produced.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum ExtensionStrategy {
    /// One minimal realization per abstract extension (strong mode only;
    /// weak mode falls back to `Exhaustive`).
    #[default]
    Realizations,
    /// Every heap within the budget, up to renaming of fresh locations.
    Exhaustive,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExtensionBudget {
    pub fresh_locations: u32,
    pub max_pointers: u32,
}

#[derive(Clone, Debug, Default)]
pub struct OracleConfig {
    pub strategy: ExtensionStrategy,
    /// Overrides the per-query default budget of the exhaustive strategy.
    pub budget: Option<ExtensionBudget>,
    /// Skip the heap-size guard.
    pub force: bool,
}

pub const MAX_ORACLE_HEAP: usize = 8;

pub fn holds(m: &Model, f: &Formula, mode: Mode) -> Result<bool> {
    holds_with(m, f, mode, &OracleConfig::default())
}

pub fn holds_with(m: &Model, f: &Formula, mode: Mode, cfg: &OracleConfig) -> Result<bool> {
    for v in f.free_vars() {
        if !m.stack.contains_key(&v) {
            return Err(Error::UnboundVar(v.to_string()));
        }
    }
    if m.heap.len() > MAX_ORACLE_HEAP && !cfg.force {
        return Err(Error::HeapTooLarge { got: m.heap.len(), limit: MAX_ORACLE_HEAP });
    }
    let mut ev = Eval::new(&m.stack, mode, cfg);
    let h: Vec<(Loc, Loc)> = m.heap.iter().map(|(a, b)| (*a, *b)).collect();
    Ok(ev.holds(&h, f))
}

/// Truth of an atomic formula (`emp`, `=`, `!=`, `->`, `ls`).
pub fn atom_holds(s: &Stack, h: &Heap, atom: &Formula) -> bool {
    match atom {
        Formula::Emp => h.is_empty(),
        Formula::Eq(x, y) => h.is_empty() && s[x] == s[y],
        Formula::Neq(x, y) => h.is_empty() && s[x] != s[y],
        Formula::PointsTo(x, y) => h.len() == 1 && h.get(&s[x]) == Some(&s[y]),
        Formula::Ls(x, y) => ls_holds(s[x], s[y], h),
        _ => panic!("atom_holds on a non-atomic formula"),
    }
}

/// `ls(x, y)`: a path l0 -> l1 -> ... -> ln covering the heap, with pairwise
/// distinct sources l0..l(n-1); the final target may revisit any of them.
fn ls_holds(from: Loc, to: Loc, h: &Heap) -> bool {
    if h.is_empty() {
        return from == to;
    }
    let mut seen = HashSet::new();
    let mut l = from;
    while let Some(&next) = h.get(&l) {
        if !seen.insert(l) {
            break;
        }
        l = next;
    }
    seen.len() == h.len() && l == to
}

type PtrVec = Vec<(Loc, Loc)>;

struct Eval<'a> {
    s: &'a Stack,
    labelled: BTreeSet<Loc>,
    nil: Loc,
    mode: Mode,
    cfg: &'a OracleConfig,
    memo: HashMap<(usize, PtrVec), bool>,
}

fn to_heap(h: &[(Loc, Loc)]) -> Heap {
    h.iter().copied().collect()
}

fn sorted(mut v: PtrVec) -> PtrVec {
    v.sort_unstable();
    v
}

impl<'a> Eval<'a> {
    fn new(s: &'a Stack, mode: Mode, cfg: &'a OracleConfig) -> Self {
        Eval { s, labelled: img(s), nil: s[&Var::nil()], mode, cfg, memo: HashMap::new() }
    }

    fn union_ok(&self, h1: &[(Loc, Loc)], h2: &[(Loc, Loc)]) -> bool {
        if h1.iter().any(|(a, _)| h2.iter().any(|(b, _)| a == b)) {
            return false;
        }
        match self.mode {
            Mode::Weak => true,
            Mode::Strong => {
                let l1: HashSet<Loc> = h1.iter().flat_map(|(a, b)| [*a, *b]).collect();
                h2.iter().flat_map(|(a, b)| [*a, *b]).all(|l| !l1.contains(&l) || self.labelled.contains(&l))
            }
        }
    }

    fn holds(&mut self, h: &[(Loc, Loc)], f: &Formula) -> bool {
        if f.is_atom() {
            return atom_holds(self.s, &to_heap(h), f);
        }
        let key = (f as *const Formula as usize, h.to_vec());
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = match f {
            Formula::Not(a) => !self.holds(h, a),
            Formula::And(a, b) => self.holds(h, a) && self.holds(h, b),
            Formula::Or(a, b) => self.holds(h, a) || self.holds(h, b),
            Formula::Sep(a, b) => self.sep(h, a, b),
            Formula::Septract(a, b) => self.septract(h, a, b),
            _ => unreachable!(),
        };
        self.memo.insert(key, r);
        r
    }

    fn sep(&mut self, h: &[(Loc, Loc)], a: &Formula, b: &Formula) -> bool {
        let n = h.len();
        for mask in 0u32..(1 << n) {
            let (mut h1, mut h2) = (Vec::new(), Vec::new());
            for (i, p) in h.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    h1.push(*p)
                } else {
                    h2.push(*p)
                }
            }
            if self.mode == Mode::Strong && !self.union_ok(&h1, &h2) {
                continue;
            }
            if self.holds(&h1, a) && self.holds(&h2, b) {
                return true;
            }
        }
        false
    }

    fn septract(&mut self, h: &[(Loc, Loc)], a: &Formula, b: &Formula) -> bool {
        let g = a.csize().max(b.csize());
        let exts = match (self.mode, self.cfg.strategy) {
            (Mode::Strong, ExtensionStrategy::Realizations) => self.realization_extensions(h, g),
            (Mode::Weak, _) if a.is_positive() && self.cfg.budget.is_none() => {
                let budget = self.default_budget(h, g);
                self.weak_models(h, a, budget)
            }
            _ => {
                let budget = self.cfg.budget.unwrap_or_else(|| self.default_budget(h, g));
                self.exhaustive_extensions(h, budget)
            }
        };
        for h1 in exts {
            if !self.union_ok(h, &h1) {
                continue;
            }
            if !self.holds(&h1, a) {
                continue;
            }
            let whole = sorted(h.iter().chain(h1.iter()).copied().collect());
            if self.holds(&whole, b) {
                return true;
            }
        }
        false
    }

    fn free_labelled(&self, h: &[(Loc, Loc)]) -> Vec<Loc> {
        self.labelled.iter().copied().filter(|l| *l != self.nil && !h.iter().any(|(a, _)| a == l)).collect()
    }

    fn default_budget(&self, h: &[(Loc, Loc)], g: u32) -> ExtensionBudget {
        let free = self.free_labelled(h).len() as u32;
        let extra = match self.mode {
            Mode::Strong => 0,
            Mode::Weak => {
                let dangling: BTreeSet<Loc> = h
                    .iter()
                    .flat_map(|(a, b)| [*a, *b])
                    .filter(|l| !self.labelled.contains(l) && !h.iter().any(|(s, _)| s == l))
                    .collect();
                dangling.len() as u32
            }
        };
        ExtensionBudget { fresh_locations: free + g, max_pointers: 2 * free + g + extra }
    }

    fn first_fresh(&self, h: &[(Loc, Loc)]) -> Loc {
        let top = h.iter().flat_map(|(a, b)| [*a, *b]).chain(self.labelled.iter().copied()).max().unwrap_or(0);
        top + 1
    }

    /// For every abstract extension compatible with `h`, one realization
    /// over fresh unlabelled locations.
    fn realization_extensions(&self, h: &[(Loc, Loc)], g: u32) -> Vec<PtrVec> {
        let free = self.free_labelled(h);
        let targets: Vec<Loc> = self.labelled.iter().copied().collect();
        let base = self.first_fresh(h);
        let mut out = Vec::new();
        // choice per free location: 0 none, 1..=T direct, T+1..=2T via middle, 2T+1+k sink k
        let t = targets.len();
        let mut choice = vec![0usize; free.len()];
        loop {
            // sink indices must be in restricted-growth order
            let mut max_sink: Option<usize> = None;
            let mut valid = true;
            for &c in &choice {
                if c > 2 * t {
                    let k = c - 2 * t - 1;
                    let limit = max_sink.map_or(0, |m| m + 1);
                    if k > limit {
                        valid = false;
                        break;
                    }
                    max_sink = Some(max_sink.map_or(k, |m| m.max(k)));
                }
            }
            if valid {
                let mut next = base;
                let mut ptrs = Vec::new();
                let sinks = max_sink.map_or(0, |m| m + 1);
                let sink0 = next;
                next += sinks as Loc;
                for (i, &c) in choice.iter().enumerate() {
                    let l = free[i];
                    if c == 0 {
                        continue;
                    } else if c <= t {
                        ptrs.push((l, targets[c - 1]));
                    } else if c <= 2 * t {
                        ptrs.push((l, next));
                        ptrs.push((next, targets[c - t - 1]));
                        next += 1;
                    } else {
                        ptrs.push((l, sink0 + (c - 2 * t - 1) as Loc));
                    }
                }
                for k in 0..=g {
                    let mut hk = ptrs.clone();
                    for j in 0..k {
                        hk.push((next + j, next + j));
                    }
                    out.push(sorted(hk));
                }
            }
            // advance the mixed-radix counter
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return out;
                }
                choice[i] += 1;
                if choice[i] <= 2 * t + free.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// All heaps of at most `max_pointers` pointers whose locations come from
    /// the allowed pool, fresh locations being used in order of first
    /// occurrence.
    fn exhaustive_extensions(&self, h: &[(Loc, Loc)], budget: ExtensionBudget) -> Vec<PtrVec> {
        let base = self.first_fresh(h);
        let mut fixed: BTreeSet<Loc> = self.labelled.clone();
        if self.mode == Mode::Weak {
            fixed.extend(h.iter().flat_map(|(a, b)| [*a, *b]));
        }
        let fixed: Vec<Loc> = fixed.into_iter().collect();
        let dom: HashSet<Loc> = h.iter().map(|(a, _)| *a).collect();
        let sources: Vec<Loc> = fixed
            .iter()
            .copied()
            .chain((0..budget.fresh_locations).map(|i| base + i))
            .filter(|l| *l != self.nil && !dom.contains(l))
            .collect();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.ext_dfs(&sources, 0, &fixed, base, budget, 0, &mut cur, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn ext_dfs(
        &self,
        sources: &[Loc],
        i: usize,
        fixed: &[Loc],
        base: Loc,
        budget: ExtensionBudget,
        used_fresh: u32,
        cur: &mut PtrVec,
        out: &mut Vec<PtrVec>,
    ) {
        if i == sources.len() || cur.len() as u32 == budget.max_pointers {
            out.push(sorted(cur.clone()));
            return;
        }
        let src = sources[i];
        // skip this source
        self.ext_dfs(sources, i + 1, fixed, base, budget, used_fresh, cur, out);
        let mut used = used_fresh;
        if src >= base {
            let idx = src - base;
            if idx > used {
                return;
            }
            if idx == used {
                used += 1;
            }
        }
        let fresh_targets = (used + 1).min(budget.fresh_locations);
        for tgt in fixed.iter().copied().chain((0..fresh_targets).map(|j| base + j)) {
            let mut u = used;
            if tgt >= base && tgt - base == u {
                u += 1;
            }
            cur.push((src, tgt));
            self.ext_dfs(sources, i + 1, fixed, base, budget, u, cur, out);
            cur.pop();
        }
    }

    /// Weak-mode extensions for a positive left operand: its models over
    /// the labelled locations, the locations of `h`, and fresh ones. Fresh
    /// locations are interchangeable, so models are produced only up to
    /// renaming them.
    fn weak_models(&mut self, h: &[(Loc, Loc)], a: &Formula, budget: ExtensionBudget) -> Vec<PtrVec> {
        let base = self.first_fresh(h);
        let mut fixed: BTreeSet<Loc> = self.labelled.clone();
        fixed.extend(h.iter().flat_map(|(a, b)| [*a, *b]));
        let pool = Pool {
            fixed: fixed.into_iter().collect(),
            fresh: (0..budget.fresh_locations).map(|i| base + i).collect(),
        };
        let max_len = budget.max_pointers as usize + 1;
        self.positive_models(a, &pool, max_len).into_iter().collect()
    }

    fn positive_models(&mut self, f: &Formula, pool: &Pool, max_len: usize) -> BTreeSet<PtrVec> {
        let s = self.s;
        let mut out = BTreeSet::new();
        match f {
            Formula::Emp => {
                out.insert(vec![]);
            }
            Formula::Eq(x, y) => {
                if s[x] == s[y] {
                    out.insert(vec![]);
                }
            }
            Formula::Neq(x, y) => {
                if s[x] != s[y] {
                    out.insert(vec![]);
                }
            }
            Formula::PointsTo(x, y) => {
                if s[x] != self.nil {
                    out.insert(vec![(s[x], s[y])]);
                }
            }
            Formula::Ls(x, y) => {
                let (from, to) = (s[x], s[y]);
                if from == to {
                    out.insert(vec![]);
                }
                let mut path = vec![from];
                self.paths(&mut path, 0, to, pool, max_len, &mut out);
            }
            Formula::Sep(a, b) => {
                let ma = self.positive_models(a, pool, max_len);
                let mb = self.positive_models(b, pool, max_len);
                for x in &ma {
                    let used: Vec<Loc> = pool.fresh_in(x);
                    for y in &mb {
                        for y in pool.renamings(y, &used) {
                            if self.union_ok(x, &y) {
                                out.insert(pool.normalize(x.iter().chain(y.iter()).copied().collect()));
                            }
                        }
                    }
                }
            }
            Formula::Or(a, b) => {
                out = self.positive_models(a, pool, max_len);
                out.extend(self.positive_models(b, pool, max_len));
            }
            Formula::And(a, b) => {
                for x in self.positive_models(a, pool, max_len) {
                    if self.holds(&x, b) {
                        out.insert(x);
                    }
                }
            }
            Formula::Septract(a, b) => {
                for whole in self.positive_models(b, pool, max_len) {
                    let n = whole.len();
                    for mask in 0u32..(1 << n) {
                        let (mut h1, mut rest) = (Vec::new(), Vec::new());
                        for (i, p) in whole.iter().enumerate() {
                            if mask >> i & 1 == 1 {
                                h1.push(*p)
                            } else {
                                rest.push(*p)
                            }
                        }
                        if self.union_ok(&rest, &h1) && self.holds(&h1, a) {
                            out.insert(pool.normalize(rest));
                        }
                    }
                }
            }
            Formula::Not(_) => unreachable!("positive formula"),
        }
        out
    }

    /// Simple paths from the end of `path` to `to`. Fresh locations are
    /// taken in increasing order; `used` counts those already on the path.
    fn paths(
        &self,
        path: &mut Vec<Loc>,
        used: usize,
        to: Loc,
        pool: &Pool,
        max_len: usize,
        out: &mut BTreeSet<PtrVec>,
    ) {
        if path.len() > max_len {
            return;
        }
        let last = *path.last().unwrap();
        if last == self.nil || path[..path.len() - 1].contains(&last) {
            return;
        }
        let next_fresh = pool.fresh.get(used).copied();
        for next in pool.fixed.iter().copied().chain(next_fresh) {
            path.push(next);
            if next == to {
                out.insert(sorted(path.windows(2).map(|w| (w[0], w[1])).collect()));
            }
            if !path[..path.len() - 1].contains(&next) {
                let u = used + usize::from(Some(next) == next_fresh);
                self.paths(path, u, to, pool, max_len, out);
            }
            path.pop();
        }
    }
}

/// Locations available to weak-mode extensions.
struct Pool {
    fixed: Vec<Loc>,
    fresh: Vec<Loc>,
}

impl Pool {
    fn is_fresh(&self, l: Loc) -> bool {
        self.fresh.binary_search(&l).is_ok()
    }

    fn fresh_in(&self, h: &[(Loc, Loc)]) -> Vec<Loc> {
        let set: BTreeSet<Loc> = h.iter().flat_map(|(a, b)| [*a, *b]).filter(|l| self.is_fresh(*l)).collect();
        set.into_iter().collect()
    }

    /// Renumbers fresh locations by first occurrence.
    fn normalize(&self, h: PtrVec) -> PtrVec {
        let h = sorted(h);
        let mut map: HashMap<Loc, Loc> = HashMap::new();
        let mut rename = |l: Loc| {
            if !self.is_fresh(l) {
                return l;
            }
            let k = map.len();
            *map.entry(l).or_insert_with(|| self.fresh[k])
        };
        let out: PtrVec = h.iter().map(|(a, b)| (rename(*a), rename(*b))).collect();
        sorted(out)
    }

    /// The ways of placing the fresh locations of `h` next to a heap using
    /// the fresh locations `taken`: each goes to a distinct member of
    /// `taken` or to the next unused one.
    fn renamings(&self, h: &[(Loc, Loc)], taken: &[Loc]) -> Vec<PtrVec> {
        let mine = self.fresh_in(h);
        let mut out = Vec::new();
        let mut img = Vec::new();
        self.place(&mine, taken, &mut img, h, &mut out);
        out
    }

    fn place(&self, mine: &[Loc], taken: &[Loc], img: &mut Vec<Loc>, h: &[(Loc, Loc)], out: &mut Vec<PtrVec>) {
        if img.len() == mine.len() {
            let map: HashMap<Loc, Loc> = mine.iter().copied().zip(img.iter().copied()).collect();
            let r = |l: Loc| map.get(&l).copied().unwrap_or(l);
            out.push(h.iter().map(|(a, b)| (r(*a), r(*b))).collect());
            return;
        }
        let fresh_used = img.iter().filter(|l| !taken.contains(l)).count();
        let new = self.fresh.iter().copied().filter(|l| !taken.contains(l)).nth(fresh_used);
        let choices: Vec<Loc> = taken.iter().copied().filter(|l| !img.contains(l)).chain(new).collect();
        for l in choices {
            img.push(l);
            self.place(mine, taken, img, h, out);
            img.pop();
        }
    }
}

/// All set partitions of `vars`, in restricted-growth order.
pub fn set_partitions(vars: &[Var]) -> Vec<Vec<Vec<Var>>> {
    let mut out = Vec::new();
    let mut rg = vec![0usize; vars.len()];
    fn rec(i: usize, max: usize, rg: &mut Vec<usize>, vars: &[Var], out: &mut Vec<Vec<Vec<Var>>>) {
        if i == vars.len() {
            let blocks = if vars.is_empty() { 0 } else { max + 1 };
            let mut p = vec![Vec::new(); blocks];
            for (j, v) in vars.iter().enumerate() {
                p[rg[j]].push(v.clone());
            }
            out.push(p);
            return;
        }
        let limit = if i == 0 { 0 } else { max + 1 };
        for b in 0..=limit {
            rg[i] = b;
            rec(i + 1, max.max(b), rg, vars, out);
        }
    }
    rec(0, 0, &mut rg, vars, &mut out);
    out
}

/// Stack placing the class containing nil at 0 and the others at 1, 2, ...
/// in the given order.
pub fn stack_of_partition(partition: &[Vec<Var>]) -> Stack {
    let nil = Var::nil();
    let mut stack = Stack::new();
    let mut next = 1;
    for class in partition {
        let l = if class.contains(&nil) {
            0
        } else {
            next += 1;
            next - 1
        };
        for v in class {
            stack.insert(v.clone(), l);
        }
    }
    stack.entry(nil).or_insert_with(|| {
        // nil missing from the partition: give it its own class
        0
    });
    stack
}

/// One model per isomorphism class with at most `max_heap` pointers over a
/// universe of `|partition| + 2 * max_heap` locations.
pub fn enumerate_models(partition: &[Vec<Var>], max_heap: usize) -> Vec<Model> {
    let stack = stack_of_partition(partition);
    let k = img(&stack).len() as Loc;
    let universe = k + 2 * max_heap as Loc;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut cur: PtrVec = Vec::new();
    gen_heaps(universe, max_heap, 1, k, &mut cur, &mut |h| {
        let m = Model { stack: stack.clone(), heap: to_heap(h) };
        if seen.insert(canonical(&m)) {
            out.push(m);
        }
    });
    out
}

/// Sources are visited in increasing order; an unlabelled location may only
/// be used once every smaller unlabelled location has been.
fn gen_heaps(
    universe: Loc,
    max_heap: usize,
    src: Loc,
    next_unused: Loc,
    cur: &mut PtrVec,
    visit: &mut dyn FnMut(&[(Loc, Loc)]),
) {
    if src >= universe || src > next_unused || cur.len() == max_heap {
        visit(cur);
        return;
    }
    gen_heaps(universe, max_heap, src + 1, next_unused, cur, visit);
    let used = if src == next_unused { next_unused + 1 } else { next_unused };
    let top = (used + 1).min(universe);
    for tgt in 0..top {
        let u = if tgt == used { used + 1 } else { used };
        cur.push((src, tgt));
        gen_heaps(universe, max_heap, src + 1, u, cur, visit);
        cur.pop();
    }
}

/// All models of `f` over every stack shape of `vars` (plus nil) with at
/// most `max_heap` pointers, up to isomorphism.
pub fn oracle_models(f: &Formula, vars: &[Var], max_heap: usize, mode: Mode) -> Result<Vec<Model>> {
    let mut all: Vec<Var> = vars.iter().filter(|v| !v.is_nil()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    all.insert(0, Var::nil());
    let mut out = Vec::new();
    for p in set_partitions(&all) {
        for m in enumerate_models(&p, max_heap) {
            if holds(&m, f, mode)? {
                out.push(m);
            }
        }
    }
    Ok(out)
}

pub fn dangling(h: &Heap) -> BTreeSet<Loc> {
    locs(h).into_iter().filter(|l| !h.contains_key(l)).collect()
}
