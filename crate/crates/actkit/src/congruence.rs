//! Act congruences: generation from pair sets by worklist fixpoint,
//! rewrite-sequence certificates, annihilator congruences on the base
//! monoid, principal-subact intersections with witness data, and full
//! enumeration of the congruence lattice of a finite act.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::act::FiniteAct;
use crate::monoid::{right_congruence_closure, FiniteMonoid, MonoidCongruence};

/// A congruence on a finite act: an action-compatible partition, stored as
/// a representative vector with the minimum index of each class as the
/// canonical representative. Remembers the generating pair set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActCongruence {
    carrier: usize,
    repr: Vec<usize>,
    generators: Vec<(usize, usize)>,
}

impl ActCongruence {
    #[inline]
    pub fn repr(&self, e: usize) -> usize {
        self.repr[e]
    }

    pub fn repr_vec(&self) -> &[usize] {
        &self.repr
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.repr[a] == self.repr[b]
    }

    pub fn generators(&self) -> &[(usize, usize)] {
        &self.generators
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; self.carrier];
        for e in 0..self.carrier {
            let r = self.repr[e];
            if index[r] == usize::MAX {
                index[r] = out.len();
                out.push(Vec::new());
            }
            out[index[r]].push(e);
        }
        out
    }

    pub fn class_count(&self) -> usize {
        let mut seen = vec![false; self.carrier];
        let mut n = 0;
        for e in 0..self.carrier {
            if !seen[self.repr[e]] {
                seen[self.repr[e]] = true;
                n += 1;
            }
        }
        n
    }

    /// The class of `e`, ascending.
    pub fn class_of(&self, e: usize) -> Vec<usize> {
        let r = self.repr[e];
        (0..self.carrier).filter(|&x| self.repr[x] == r).collect()
    }
}

#[derive(Default)]
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Unions the classes of a and b; returns false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    /// Representative vector with minimum index per class.
    fn min_repr(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut min_of_root = vec![usize::MAX; n];
        for e in 0..n {
            let r = self.find(e);
            if min_of_root[r] == usize::MAX {
                min_of_root[r] = e; // ascending scan: first member is minimum
            }
        }
        (0..n).map(|e| min_of_root[self.find(e)]).collect()
    }
}

/// The least act congruence containing the pair set `h`: union each pair,
/// then whenever classes merge, merge their images under every generator of
/// the base monoid, to a fixpoint.
pub fn close(a: &FiniteAct, h: &[(usize, usize)]) -> ActCongruence {
    close_seeded(a, &((0..a.size()).collect::<Vec<_>>()), h)
}

/// Closure starting from an existing partition (given as any repr vector)
/// plus extra pairs. Used by the lattice enumerator.
pub fn close_seeded(a: &FiniteAct, seed_repr: &[usize], extra: &[(usize, usize)]) -> ActCongruence {
    let n = a.size();
    let gens = a.base().generating_set();
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(usize, usize)> = Vec::new();
    for e in 0..n {
        if seed_repr[e] != e {
            work.push((seed_repr[e], e));
        }
    }
    work.extend_from_slice(extra);
    while let Some((x, y)) = work.pop() {
        if uf.union(x, y) {
            for &g in &gens {
                work.push((a.act(x, g), a.act(y, g)));
            }
        }
    }
    ActCongruence {
        carrier: n,
        repr: uf.min_repr(),
        generators: extra.to_vec(),
    }
}

/// One rewrite chain certifying that two elements are joined by the
/// congruence generated by a pair set H: start = c₁·t₁, each dᵢ·tᵢ equals
/// the next cᵢ₊₁·tᵢ₊₁, the last dₙ·tₙ is the end, and every (cᵢ, dᵢ) lies
/// in H up to orientation. An empty chain certifies start = end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HSequence {
    pub start: usize,
    pub end: usize,
    /// (cᵢ, dᵢ, tᵢ) triples.
    pub steps: Vec<(usize, usize, usize)>,
}

impl HSequence {
    /// Checks every defining equation in the act.
    pub fn validate(&self, a: &FiniteAct, h: &[(usize, usize)]) -> bool {
        if self.steps.is_empty() {
            return self.start == self.end;
        }
        let oriented = |c: usize, d: usize| {
            h.iter().any(|&(x, y)| (x, y) == (c, d) || (y, x) == (c, d))
        };
        let mut current = self.start;
        for &(c, d, t) in &self.steps {
            if !oriented(c, d) || a.act(c, t) != current {
                return false;
            }
            current = a.act(d, t);
        }
        current == self.end
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Breadth-first reconstruction of a shortest rewrite chain joining `from`
/// to `to` under the congruence generated by `h`; None if unrelated.
/// Neighbors are explored in deterministic (pair, orientation, t) order.
pub fn certify(a: &FiniteAct, h: &[(usize, usize)], from: usize, to: usize) -> Option<HSequence> {
    if from == to {
        return Some(HSequence {
            start: from,
            end: to,
            steps: Vec::new(),
        });
    }
    let m = a.base().size();
    // oriented pair list: both directions of every generator
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(h.len() * 2);
    for &(c, d) in h {
        pairs.push((c, d));
        if c != d {
            pairs.push((d, c));
        }
    }
    let mut pred: HashMap<usize, (usize, (usize, usize, usize))> = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(from);
    let mut seen = vec![false; a.size()];
    seen[from] = true;
    while let Some(e) = queue.pop_front() {
        for &(c, d) in &pairs {
            for t in 0..m {
                if a.act(c, t) == e {
                    let f = a.act(d, t);
                    if !seen[f] {
                        seen[f] = true;
                        pred.insert(f, (e, (c, d, t)));
                        if f == to {
                            let mut steps = Vec::new();
                            let mut cur = to;
                            while cur != from {
                                let (prev, step) = pred[&cur];
                                steps.push(step);
                                cur = prev;
                            }
                            steps.reverse();
                            return Some(HSequence {
                                start: from,
                                end: to,
                                steps,
                            });
                        }
                        queue.push_back(f);
                    }
                }
            }
        }
    }
    None
}

/// The annihilator right congruence of an act element: all pairs (u, v)
/// of monoid elements with e·u = e·v, returned together with a reduced
/// generating set. Reduction is a greedy lexicographic sweep dropping any
/// pair whose removal leaves the right-congruence closure unchanged.
pub fn annihilator(a: &FiniteAct, e: usize) -> MonoidCongruence {
    let s = a.base();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for u in 0..s.size() {
        for v in (u + 1)..s.size() {
            if a.act(e, u) == a.act(e, v) {
                pairs.push((u, v));
            }
        }
    }
    let full = right_congruence_closure(s, &pairs);
    let mut kept = pairs.clone();
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if right_congruence_closure(s, &trial) == full {
            kept = trial;
        } else {
            i += 1;
        }
    }
    let cong = MonoidCongruence::generated_right(s, &kept);
    debug_assert_eq!(cong.repr_vec(), &full[..]);
    cong
}

/// The intersection of two principal subacts e₁S ∩ e₂S: the element set, a
/// minimal generating set under action reachability, and for each generator
/// k a witness pair (u, v) with e₁·u = e₂·v = k (least such, scanning u
/// then v ascending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalIntersection {
    pub elements: Vec<usize>,
    pub generators: Vec<(usize, (usize, usize))>,
}

pub fn principal_intersection(a: &FiniteAct, e1: usize, e2: usize) -> PrincipalIntersection {
    let s = a.base();
    let orbit1 = a.orbit_closure(&[e1]);
    let orbit2 = a.orbit_closure(&[e2]);
    let elements: Vec<usize> = orbit1.intersection(&orbit2).copied().collect();
    // minimal generators under reachability (k ≤ j iff k ∈ jS): drop k when
    // it is strictly dominated by another element, or mutually reachable
    // with a smaller already-kept generator; elements scanned ascending
    let reaches = |j: usize, k: usize| (0..s.size()).any(|t| a.act(j, t) == k);
    let mut gens: Vec<usize> = Vec::new();
    for &k in &elements {
        let dominated = elements
            .iter()
            .any(|&j| j != k && reaches(j, k) && !reaches(k, j));
        let mutual_smaller = gens.iter().any(|&j| reaches(j, k) && reaches(k, j));
        if !dominated && !mutual_smaller {
            gens.push(k);
        }
    }
    let mut generators = Vec::with_capacity(gens.len());
    for &k in &gens {
        let mut witness = None;
        'outer: for u in 0..s.size() {
            if a.act(e1, u) == k {
                for v in 0..s.size() {
                    if a.act(e2, v) == k {
                        witness = Some((u, v));
                        break 'outer;
                    }
                }
            }
        }
        generators.push((k, witness.expect("generator lies in both orbits")));
    }
    PrincipalIntersection {
        elements,
        generators,
    }
}

/// All congruences of a finite act: breadth-first walk of the congruence
/// lattice upward from the identity partition, adding one unrelated pair at
/// a time and closing. Representative vectors are returned sorted.
pub fn enumerate_congruences(a: &FiniteAct) -> Vec<Vec<usize>> {
    let n = a.size();
    let identity: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(identity.clone());
    let mut queue = VecDeque::new();
    queue.push_back(identity);
    while let Some(repr) = queue.pop_front() {
        for x in 0..n {
            for y in (x + 1)..n {
                if repr[x] != repr[y] {
                    let bigger = close_seeded(a, &repr, &[(x, y)]);
                    if seen.insert(bigger.repr_vec().to_vec()) {
                        queue.push_back(bigger.repr_vec().to_vec());
                    }
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort();
    out
}

/// Naive oracle for `close`: represent the relation as a boolean matrix and
/// repeatedly symmetrize, transitivize and act-saturate until stable.
/// Quadratic-space; for cross-checking only.
pub fn close_naive(a: &FiniteAct, h: &[(usize, usize)]) -> Vec<usize> {
    let n = a.size();
    let m = a.base().size();
    let mut rel = vec![false; n * n];
    for i in 0..n {
        rel[i * n + i] = true;
    }
    for &(x, y) in h {
        rel[x * n + y] = true;
        rel[y * n + x] = true;
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if rel[x * n + y] {
                    if !rel[y * n + x] {
                        rel[y * n + x] = true;
                        changed = true;
                    }
                    for z in 0..n {
                        if rel[y * n + z] && !rel[x * n + z] {
                            rel[x * n + z] = true;
                            changed = true;
                        }
                    }
                    for s in 0..m {
                        let (xs, ys) = (a.act(x, s), a.act(y, s));
                        if !rel[xs * n + ys] {
                            rel[xs * n + ys] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n)
        .map(|x| (0..n).find(|&y| rel[x * n + y]).unwrap())
        .collect()
}

/// Restriction of an act congruence on a disjoint union to the first block
/// (size `cut`): the induced partition of 0..cut.
pub fn restrict_prefix(c: &ActCongruence, cut: usize) -> Vec<usize> {
    let mut min_of: HashMap<usize, usize> = HashMap::new();
    let mut out = vec![0; cut];
    for e in 0..cut {
        let r = c.repr(e);
        let entry = min_of.entry(r).or_insert(e);
        out[e] = *entry;
    }
    out
}

/// Convenience: the right congruence generated on the base monoid viewed as
/// an act over itself.
pub fn close_on_monoid(s: &std::sync::Arc<FiniteMonoid>, h: &[(usize, usize)]) -> ActCongruence {
    let a = FiniteAct::monoid_as_act(std::sync::Arc::clone(s));
    close(&a, h)
}
