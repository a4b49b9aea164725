//! Finite monoids as dense multiplication tables, plus the constructions
//! used throughout the crate: monogenic monoids, direct products, quotients
//! by two-sided congruences, and the Fountain family built from a finite
//! abelian group.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoidError {
    #[error("table entry out of range at row {row}, col {col}: {value} (size {size})")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        size: usize,
    },
    #[error("identity index {identity} out of range (size {size})")]
    IdentityOutOfRange { identity: usize, size: usize },
    #[error("element {identity} is not an identity: fails on {witness}")]
    NoIdentity { identity: usize, witness: usize },
    #[error("not associative at triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("not a right congruence: {a} ~ {b} but {a}·{s} is not related to {b}·{s}")]
    NotRightCompatible { a: usize, b: usize, s: usize },
    #[error("not a two-sided congruence: {a} ~ {b} but {s}·{a} is not related to {s}·{b}")]
    NotTwoSidedCongruence { a: usize, b: usize, s: usize },
    #[error("classes do not partition 0..{size}")]
    BadPartition { size: usize },
    #[error("element {elt} has no inverse")]
    NotAGroup { elt: usize },
    #[error("not abelian: {a}·{b} differs from {b}·{a}")]
    NotAbelian { a: usize, b: usize },
    #[error("projection undefined on collapsed layer element {elt}")]
    UndefinedOnCollapsedLayer { elt: usize },
}

/// A finite monoid on the element set `0..size`, multiplication given by a
/// row-major Cayley table. Immutable after construction; both monoid axioms
/// are checked exhaustively by every constructor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    size: usize,
    identity: usize,
    table: Vec<usize>,
}

impl FiniteMonoid {
    pub fn from_table(
        size: usize,
        identity: usize,
        table: Vec<usize>,
    ) -> Result<Self, MonoidError> {
        assert!(size > 0, "a monoid has at least one element");
        assert_eq!(table.len(), size * size, "table must be size×size");
        if identity >= size {
            return Err(MonoidError::IdentityOutOfRange { identity, size });
        }
        for i in 0..size {
            for j in 0..size {
                let v = table[i * size + j];
                if v >= size {
                    return Err(MonoidError::EntryOutOfRange {
                        row: i,
                        col: j,
                        value: v,
                        size,
                    });
                }
            }
        }
        let m = FiniteMonoid {
            size,
            identity,
            table,
        };
        for i in 0..size {
            if m.mul(identity, i) != i || m.mul(i, identity) != i {
                return Err(MonoidError::NoIdentity {
                    identity,
                    witness: i,
                });
            }
        }
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    if m.mul(m.mul(i, j), k) != m.mul(i, m.mul(j, k)) {
                        return Err(MonoidError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn trivial() -> Self {
        FiniteMonoid {
            size: 1,
            identity: 0,
            table: vec![0],
        }
    }

    /// Monogenic monoid {1, α, …, α^(index+period−1)} with
    /// α^(index+period) = α^index. Element i is αⁱ.
    pub fn cyclic(index: usize, period: usize) -> Self {
        assert!(index >= 1 && period >= 1);
        let size = index + period;
        let fold = |k: usize| {
            if k < size {
                k
            } else {
                index + (k - index) % period
            }
        };
        let mut table = vec![0; size * size];
        for i in 0..size {
            for j in 0..size {
                table[i * size + j] = fold(i + j);
            }
        }
        FiniteMonoid {
            size,
            identity: 0,
            table,
        }
    }

    /// The cyclic group Z_n with element i = iᵗʰ power of the generator.
    pub fn cyclic_group(n: usize) -> Self {
        assert!(n >= 1);
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = (i + j) % n;
            }
        }
        FiniteMonoid {
            size: n,
            identity: 0,
            table,
        }
    }

    /// Componentwise product; element index is i·|other| + j.
    pub fn direct_product(&self, other: &FiniteMonoid) -> FiniteMonoid {
        let size = self.size * other.size;
        let mut table = vec![0; size * size];
        for a1 in 0..self.size {
            for a2 in 0..other.size {
                for b1 in 0..self.size {
                    for b2 in 0..other.size {
                        let i = a1 * other.size + a2;
                        let j = b1 * other.size + b2;
                        table[i * size + j] =
                            self.mul(a1, b1) * other.size + other.mul(a2, b2);
                    }
                }
            }
        }
        FiniteMonoid {
            size,
            identity: self.identity * other.size + other.identity,
            table,
        }
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.size + j]
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.size
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size)
            .all(|i| (0..self.size).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    pub fn is_group(&self) -> bool {
        self.elements().all(|a| {
            self.elements()
                .any(|x| self.mul(a, x) == self.identity && self.mul(x, a) == self.identity)
        })
    }

    /// A small generating set, greedily extended until closure covers the
    /// monoid. Deterministic: candidates tried in index order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.submonoid_closure(&gens);
        for g in 0..self.size {
            if span.len() == self.size {
                break;
            }
            if !span.contains(&g) {
                gens.push(g);
                span = self.submonoid_closure(&gens);
            }
        }
        gens
    }

    pub fn submonoid_closure(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        seen.insert(self.identity);
        let mut work: Vec<usize> = vec![self.identity];
        while let Some(a) = work.pop() {
            for &g in gens {
                for prod in [self.mul(a, g), self.mul(g, a)] {
                    if seen.insert(prod) {
                        work.push(prod);
                    }
                }
            }
        }
        seen
    }

    /// The principal right ideal sS = {s·t : t ∈ S}, sorted.
    pub fn right_ideal(&self, s: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.elements().map(|t| self.mul(s, t)).collect();
        set.into_iter().collect()
    }

    /// All right ideals (non-empty, closed under right multiplication):
    /// the union closure of the principal right ideals.
    pub fn all_right_ideals(&self) -> Vec<Vec<usize>> {
        let principals: BTreeSet<Vec<usize>> =
            self.elements().map(|s| self.right_ideal(s)).collect();
        let mut ideals: BTreeSet<Vec<usize>> = principals.clone();
        let mut work: Vec<Vec<usize>> = ideals.iter().cloned().collect();
        while let Some(i) = work.pop() {
            for p in &principals {
                let u: BTreeSet<usize> =
                    i.iter().chain(p.iter()).copied().collect();
                let u: Vec<usize> = u.into_iter().collect();
                if ideals.insert(u.clone()) {
                    work.push(u);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = ideals.into_iter().collect();
        out.sort_by_key(|i| (i.len(), i.clone()));
        out
    }

    /// True iff s·u = s·v implies u = v.
    pub fn is_left_cancellable(&self, s: usize) -> bool {
        let mut seen = vec![false; self.size];
        for u in 0..self.size {
            let p = self.mul(s, u);
            if seen[p] {
                return false;
            }
            seen[p] = true;
        }
        true
    }

    /// Searches for left cancellable s, t with sS ∩ tS = ∅; such a pair
    /// certifies that every finitely generated act embeds into a monogenic
    /// one. The scan is exhaustive with no theory shortcut.
    pub fn fem_check(&self) -> Option<(usize, usize)> {
        let cancellable: Vec<usize> = self
            .elements()
            .filter(|&s| self.is_left_cancellable(s))
            .collect();
        for &s in &cancellable {
            let si: BTreeSet<usize> = self.right_ideal(s).into_iter().collect();
            for &t in &cancellable {
                let ti = self.right_ideal(t);
                if ti.iter().all(|x| !si.contains(x)) {
                    return Some((s, t));
                }
            }
        }
        None
    }

    /// Isomorphism by relabeling search, intended for size ≤ 8.
    pub fn is_isomorphic(&self, other: &FiniteMonoid) -> bool {
        if self.size != other.size {
            return false;
        }
        if self.size > 8 {
            return self.fingerprint() == other.fingerprint();
        }
        let others: Vec<usize> = (0..self.size).filter(|&i| i != self.identity).collect();
        let targets: Vec<usize> = (0..self.size)
            .filter(|&i| i != other.identity)
            .collect();
        let mut map = vec![usize::MAX; self.size];
        map[self.identity] = other.identity;
        permute_search(self, other, &others, &targets, &mut map, 0)
    }

    /// Invariant tuple used instead of full isomorphism search at larger sizes.
    pub fn fingerprint(&self) -> (usize, usize, bool, Vec<usize>) {
        let idempotents = self.elements().filter(|&e| self.mul(e, e) == e).count();
        let mut ideal_sizes: Vec<usize> = self
            .all_right_ideals()
            .into_iter()
            .map(|i| i.len())
            .collect();
        ideal_sizes.sort_unstable();
        (self.size, idempotents, self.is_commutative(), ideal_sizes)
    }
}

fn permute_search(
    a: &FiniteMonoid,
    b: &FiniteMonoid,
    src: &[usize],
    targets: &[usize],
    map: &mut Vec<usize>,
    depth: usize,
) -> bool {
    if depth == src.len() {
        return (0..a.size()).all(|i| {
            (0..a.size()).all(|j| map[a.mul(i, j)] == b.mul(map[i], map[j]))
        });
    }
    let x = src[depth];
    for &y in targets {
        if map.iter().any(|&m| m == y) {
            continue;
        }
        map[x] = y;
        // prune against already-mapped products
        let consistent = (0..a.size()).all(|i| {
            if map[i] == usize::MAX {
                return true;
            }
            let p1 = a.mul(x, i);
            let p2 = a.mul(i, x);
            (map[p1] == usize::MAX || map[p1] == b.mul(y, map[i]))
                && (map[p2] == usize::MAX || map[p2] == b.mul(map[i], y))
        });
        if consistent && permute_search(a, b, src, targets, map, depth + 1) {
            return true;
        }
        map[x] = usize::MAX;
    }
    false
}

/// A congruence on a finite monoid, stored as a representative vector with
/// the minimum index of each class as canonical representative. Always at
/// least right compatible; `two_sided` records whether left compatibility
/// holds as well.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidCongruence {
    base_size: usize,
    repr: Vec<usize>,
    two_sided: bool,
    generators: Vec<(usize, usize)>,
}

impl MonoidCongruence {
    /// Builds from an explicit partition, validating right compatibility.
    pub fn from_classes(
        m: &FiniteMonoid,
        classes: &[Vec<usize>],
    ) -> Result<Self, MonoidError> {
        let size = m.size();
        let mut repr = vec![usize::MAX; size];
        for class in classes {
            let min = *class.iter().min().ok_or(MonoidError::BadPartition { size })?;
            for &e in class {
                if e >= size || repr[e] != usize::MAX {
                    return Err(MonoidError::BadPartition { size });
                }
                repr[e] = min;
            }
        }
        if repr.iter().any(|&r| r == usize::MAX) {
            return Err(MonoidError::BadPartition { size });
        }
        for a in 0..size {
            for b in 0..size {
                if repr[a] == repr[b] {
                    for s in 0..size {
                        if repr[m.mul(a, s)] != repr[m.mul(b, s)] {
                            return Err(MonoidError::NotRightCompatible { a, b, s });
                        }
                    }
                }
            }
        }
        let two_sided = is_left_compatible(m, &repr);
        Ok(MonoidCongruence {
            base_size: size,
            repr,
            two_sided,
            generators: Vec::new(),
        })
    }

    /// The right congruence generated by `pairs`: union each pair, then
    /// saturate under right multiplication to a fixpoint.
    pub fn generated_right(m: &FiniteMonoid, pairs: &[(usize, usize)]) -> Self {
        let repr = right_congruence_closure(m, pairs);
        let two_sided = is_left_compatible(m, &repr);
        MonoidCongruence {
            base_size: m.size(),
            repr,
            two_sided,
            generators: pairs.to_vec(),
        }
    }

    pub fn from_repr(m: &FiniteMonoid, repr: Vec<usize>) -> Result<Self, MonoidError> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut index: Vec<Option<usize>> = vec![None; m.size()];
        for e in 0..m.size() {
            let r = repr[e];
            match index[r] {
                Some(i) => classes[i].push(e),
                None => {
                    index[r] = Some(classes.len());
                    classes.push(vec![e]);
                }
            }
        }
        Self::from_classes(m, &classes)
    }

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

    pub fn is_two_sided(&self) -> bool {
        self.two_sided
    }

    pub fn generators(&self) -> &[(usize, usize)] {
        &self.generators
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; self.base_size];
        for e in 0..self.base_size {
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
        self.classes().len()
    }
}

pub(crate) fn right_congruence_closure(
    m: &FiniteMonoid,
    pairs: &[(usize, usize)],
) -> Vec<usize> {
    let size = m.size();
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut work: Vec<(usize, usize)> = pairs.to_vec();
    while let Some((a, b)) = work.pop() {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra == rb {
            continue;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
        for s in 0..size {
            work.push((m.mul(ra, s), m.mul(rb, s)));
        }
    }
    // canonicalize to minimum index per class
    let mut repr = vec![usize::MAX; size];
    let mut min_of_root = vec![usize::MAX; size];
    for e in 0..size {
        let r = find(&mut parent, e);
        if min_of_root[r] == usize::MAX {
            min_of_root[r] = e;
        }
    }
    for e in 0..size {
        let r = find(&mut parent, e);
        repr[e] = min_of_root[r];
    }
    repr
}

fn is_left_compatible(m: &FiniteMonoid, repr: &[usize]) -> bool {
    for a in 0..m.size() {
        for b in 0..m.size() {
            if repr[a] == repr[b] {
                for s in 0..m.size() {
                    if repr[m.mul(s, a)] != repr[m.mul(s, b)] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Quotient by a two-sided congruence; returns the quotient monoid and the
/// index projection. Class indices are ordered by minimum member.
pub fn quotient_monoid(
    m: &FiniteMonoid,
    cong: &MonoidCongruence,
) -> Result<(FiniteMonoid, Vec<usize>), MonoidError> {
    if !cong.is_two_sided() {
        // name a witness
        for a in 0..m.size() {
            for b in 0..m.size() {
                if cong.related(a, b) {
                    for s in 0..m.size() {
                        if !cong.related(m.mul(s, a), m.mul(s, b)) {
                            return Err(MonoidError::NotTwoSidedCongruence { a, b, s });
                        }
                    }
                }
            }
        }
        unreachable!("two_sided flag inconsistent with scan");
    }
    let mut class_index = vec![usize::MAX; m.size()];
    let mut reps: Vec<usize> = Vec::new();
    for e in 0..m.size() {
        let r = cong.repr(e);
        if class_index[r] == usize::MAX {
            class_index[r] = reps.len();
            reps.push(r);
        }
    }
    let q = reps.len();
    let mut table = vec![0; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * q + j] = class_index[cong.repr(m.mul(a, b))];
        }
    }
    let identity = class_index[cong.repr(m.identity())];
    let qm = FiniteMonoid::from_table(q, identity, table)?;
    let projection = (0..m.size()).map(|e| class_index[cong.repr(e)]).collect();
    Ok((qm, projection))
}

/// Label of an element of a Fountain monoid: three layers of group elements
/// αᵏg for k ∈ {0,1,2}, then the collapsed α³ class and the zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FountainElement {
    /// αˡᵃʸᵉʳ·g where `g` indexes the underlying group.
    Layered { layer: u8, g: usize },
    AlphaCubed,
    Zero,
}

/// The quotient of G × {1,α,α²,α³,α⁴=0} collapsing each of the α³ and α⁴
/// layers to a point, together with the labeling of its elements.
#[derive(Debug, Clone)]
pub struct FountainDescriptor {
    group: Arc<FiniteMonoid>,
    monoid: Arc<FiniteMonoid>,
    labels: Vec<FountainElement>,
}

impl FountainDescriptor {
    pub fn group(&self) -> &Arc<FiniteMonoid> {
        &self.group
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        &self.monoid
    }

    pub fn labels(&self) -> &[FountainElement] {
        &self.labels
    }

    /// Index of αˡᵃʸᵉʳ·g.
    pub fn layered(&self, layer: u8, g: usize) -> usize {
        self.labels
            .iter()
            .position(|&l| l == FountainElement::Layered { layer, g })
            .expect("layer in 0..3 and g in group range")
    }

    pub fn alpha(&self) -> usize {
        self.layered(1, self.group.identity())
    }

    pub fn alpha_cubed(&self) -> usize {
        self.labels
            .iter()
            .position(|&l| l == FountainElement::AlphaCubed)
            .unwrap()
    }

    pub fn zero(&self) -> usize {
        self.labels
            .iter()
            .position(|&l| l == FountainElement::Zero)
            .unwrap()
    }

    /// The pair (βψ, βφ) = (layer, group part) of β = αⁱg, defined away from
    /// the collapsed ideal {α³, 0}.
    pub fn psi_phi(&self, beta: usize) -> Result<(u8, usize), MonoidError> {
        match self.labels[beta] {
            FountainElement::Layered { layer, g } => Ok((layer, g)),
            _ => Err(MonoidError::UndefinedOnCollapsedLayer { elt: beta }),
        }
    }

    /// Index of a group element g viewed inside the monoid (layer 0).
    pub fn group_elt(&self, g: usize) -> usize {
        self.layered(0, g)
    }
}

/// Builds the Fountain monoid over a finite abelian group G: the quotient of
/// P = G × N₅ by the relation collapsing the k ∈ {3,4} layers. Validates that
/// G is an abelian group and that the collapse is a two-sided congruence.
pub fn fountain_monoid(g: &FiniteMonoid) -> Result<FountainDescriptor, MonoidError> {
    for a in g.elements() {
        if !g
            .elements()
            .any(|x| g.mul(a, x) == g.identity() && g.mul(x, a) == g.identity())
        {
            return Err(MonoidError::NotAGroup { elt: a });
        }
    }
    for a in g.elements() {
        for b in g.elements() {
            if g.mul(a, b) != g.mul(b, a) {
                return Err(MonoidError::NotAbelian { a, b });
            }
        }
    }
    let n5 = FiniteMonoid::cyclic(4, 1);
    let p = g.direct_product(&n5);
    // classes of ∼: singletons on layers 0..=2, the whole layer for k ∈ {3,4}
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for gi in g.elements() {
        for k in 0..3 {
            classes.push(vec![gi * 5 + k]);
        }
    }
    for k in 3..5 {
        classes.push(g.elements().map(|gi| gi * 5 + k).collect());
    }
    let cong = MonoidCongruence::from_classes(&p, &classes)?;
    if !cong.is_two_sided() {
        return quotient_monoid(&p, &cong).map(|_| unreachable!());
    }
    let (s, proj) = quotient_monoid(&p, &cong)?;
    debug_assert_eq!(s.size(), 3 * g.size() + 2);
    let mut labels = vec![FountainElement::Zero; s.size()];
    for gi in g.elements() {
        for k in 0..3u8 {
            labels[proj[gi * 5 + k as usize]] = FountainElement::Layered { layer: k, g: gi };
        }
    }
    labels[proj[3]] = FountainElement::AlphaCubed;
    labels[proj[4]] = FountainElement::Zero;
    Ok(FountainDescriptor {
        group: Arc::new(g.clone()),
        monoid: Arc::new(s),
        labels,
    })
}

/// All monoids of order ≤ `max_order` up to isomorphism, identity fixed at
/// index 0. Exhaustive table fill; dedup by canonical relabeling.
pub fn small_monoid_catalog(max_order: usize) -> Vec<FiniteMonoid> {
    assert!(max_order <= 4, "catalog generator is desk-scale only");
    let mut out = Vec::new();
    for m in 1..=max_order {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        enumerate_tables(m, &mut |table| {
            let canon = canonical_table(m, table);
            if seen.insert(canon) {
                out.push(
                    FiniteMonoid::from_table(m, 0, table.to_vec())
                        .expect("enumerated table is a monoid"),
                );
            }
        });
    }
    out
}

fn enumerate_tables(m: usize, emit: &mut dyn FnMut(&[usize])) {
    let mut table = vec![0; m * m];
    for i in 0..m {
        table[i] = i; // row of identity 0
        table[i * m] = i; // column of identity 0
    }
    let free: Vec<usize> = (1..m)
        .flat_map(|i| (1..m).map(move |j| i * m + j))
        .collect();
    fill(m, &mut table, &free, 0, emit);
}

fn fill(m: usize, table: &mut Vec<usize>, free: &[usize], pos: usize, emit: &mut dyn FnMut(&[usize])) {
    if pos == free.len() {
        if is_associative(m, table) {
            emit(table);
        }
        return;
    }
    for v in 0..m {
        table[free[pos]] = v;
        fill(m, table, free, pos + 1, emit);
    }
}

fn is_associative(m: usize, t: &[usize]) -> bool {
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if t[t[i * m + j] * m + k] != t[i * m + t[j * m + k]] {
                    return false;
                }
            }
        }
    }
    true
}

fn canonical_table(m: usize, table: &[usize]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut perm: Vec<usize> = (0..m).collect();
    permutations_fixing_zero(&mut perm, 1, &mut |p| {
        let mut relabeled = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                relabeled[p[i] * m + p[j]] = p[table[i * m + j]];
            }
        }
        if best.as_ref().map_or(true, |b| relabeled < *b) {
            best = Some(relabeled);
        }
    });
    best.unwrap()
}

fn permutations_fixing_zero(perm: &mut Vec<usize>, k: usize, emit: &mut dyn FnMut(&[usize])) {
    if k == perm.len() {
        emit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations_fixing_zero(perm, k + 1, emit);
        perm.swap(k, i);
    }
    if perm.len() == 1 {
        emit(perm);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n5() -> FiniteMonoid {
        FiniteMonoid::cyclic(4, 1)
    }

    #[test]
    fn trivial_monoid_from_table() {
        let m = FiniteMonoid::from_table(1, 0, vec![0]).unwrap();
        assert_eq!(m.size(), 1);
    }

    #[test]
    fn n5_table_matches_min_rule() {
        let m = n5();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(m.mul(i, j), (i + j).min(4));
            }
        }
        let built = FiniteMonoid::from_table(5, 0, m.table().to_vec()).unwrap();
        assert_eq!(built, m);
    }

    #[test]
    fn non_associative_rejected() {
        // 2-element table with 1·1 = 1 but identity laws forced: make a
        // genuinely non-associative 3-element table instead
        let t = vec![0, 1, 2, 1, 0, 0, 2, 0, 1];
        let err = FiniteMonoid::from_table(3, 0, t).unwrap_err();
        assert!(matches!(err, MonoidError::NotAssociative { .. }));
    }

    #[test]
    fn cyclic_small_cases() {
        let m = FiniteMonoid::cyclic(1, 1);
        assert_eq!(m.size(), 2);
        assert_eq!(m.mul(1, 1), 1); // α² = α, a zero
        let m = FiniteMonoid::cyclic(2, 2);
        assert_eq!(m.size(), 4);
        assert_eq!(m.mul(2, 2), 2); // α⁴ = α²
        assert_eq!(m.mul(3, 3), 2); // α⁶ = α²·α⁴ = α²·α² -> index 2+... α⁶ ↦ 2 + (6−2)%2 = 2
    }

    #[test]
    fn direct_product_klein_four() {
        let z2 = FiniteMonoid::cyclic_group(2);
        let k4 = z2.direct_product(&z2);
        assert!(k4.is_group());
        assert!(k4.is_commutative());
        assert_eq!(k4.size(), 4);
        for e in k4.elements() {
            assert_eq!(k4.mul(e, e), k4.identity());
        }
    }

    #[test]
    fn trivial_product_isomorphic() {
        let m = n5();
        let p = FiniteMonoid::trivial().direct_product(&m);
        assert!(p.is_isomorphic(&m));
    }

    #[test]
    fn quotient_by_identity_and_all() {
        let m = n5();
        let id_classes: Vec<Vec<usize>> = (0..5).map(|i| vec![i]).collect();
        let c = MonoidCongruence::from_classes(&m, &id_classes).unwrap();
        let (q, _) = quotient_monoid(&m, &c).unwrap();
        assert!(q.is_isomorphic(&m));

        let all = MonoidCongruence::from_classes(&m, &[(0..5).collect()]).unwrap();
        let (q, _) = quotient_monoid(&m, &all).unwrap();
        assert_eq!(q.size(), 1);
    }

    #[test]
    fn fountain_sizes() {
        for (g, expect) in [
            (FiniteMonoid::trivial(), 5),
            (FiniteMonoid::cyclic_group(2), 8),
            (FiniteMonoid::cyclic_group(3), 11),
        ] {
            let fd = fountain_monoid(&g).unwrap();
            assert_eq!(fd.monoid().size(), 3 * g.size() + 2);
            assert_eq!(fd.monoid().size(), expect);
        }
    }

    #[test]
    fn fountain_over_trivial_group_is_n5() {
        let fd = fountain_monoid(&FiniteMonoid::trivial()).unwrap();
        assert!(fd.monoid().is_isomorphic(&n5()));
    }

    #[test]
    fn fountain_rejects_non_groups() {
        assert!(matches!(
            fountain_monoid(&n5()),
            Err(MonoidError::NotAGroup { .. })
        ));
    }

    #[test]
    fn fountain_zero_is_two_sided_zero() {
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        let s = fd.monoid();
        let z = fd.zero();
        for i in s.elements() {
            assert_eq!(s.mul(z, i), z);
            assert_eq!(s.mul(i, z), z);
        }
    }

    #[test]
    fn psi_phi_values() {
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        assert_eq!(fd.psi_phi(fd.monoid().identity()).unwrap(), (0, 0));
        let alpha_g = fd.layered(1, 1);
        assert_eq!(fd.psi_phi(alpha_g).unwrap(), (1, 1));
        assert!(matches!(
            fd.psi_phi(fd.alpha_cubed()),
            Err(MonoidError::UndefinedOnCollapsedLayer { .. })
        ));
        assert!(fd.psi_phi(fd.zero()).is_err());
    }

    #[test]
    fn psi_phi_morphism_away_from_collapsed_ideal() {
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(3)).unwrap();
        let s = fd.monoid();
        let g = fd.group();
        for b in s.elements() {
            for c in s.elements() {
                let p = s.mul(b, c);
                if let (Ok((i, gi)), Ok((j, gj)), Ok((k, gk))) =
                    (fd.psi_phi(b), fd.psi_phi(c), fd.psi_phi(p))
                {
                    assert_eq!(k, i + j);
                    assert_eq!(gk, g.mul(gi, gj));
                }
            }
        }
    }

    #[test]
    fn right_ideals_of_fountain_z2() {
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        let s = fd.monoid();
        assert_eq!(
            s.right_ideal(fd.alpha_cubed()),
            {
                let mut v = vec![fd.alpha_cubed(), fd.zero()];
                v.sort_unstable();
                v
            }
        );
        assert_eq!(s.right_ideal(s.identity()).len(), s.size());
    }

    #[test]
    fn right_ideal_of_alpha2_in_n5() {
        let m = n5();
        assert_eq!(m.right_ideal(2), vec![2, 3, 4]);
    }

    #[test]
    fn left_cancellable_scan() {
        let m = n5();
        assert!(m.is_left_cancellable(0));
        assert!(!m.is_left_cancellable(1)); // α·α³ = α·α⁴ = 0
        let z3 = FiniteMonoid::cyclic_group(3);
        for e in z3.elements() {
            assert!(z3.is_left_cancellable(e));
        }
    }

    #[test]
    fn fem_check_examples() {
        assert_eq!(FiniteMonoid::trivial().fem_check(), None);
        assert_eq!(n5().fem_check(), None);
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        assert_eq!(fd.monoid().fem_check(), None);
    }

    #[test]
    fn catalog_counts_match_known_values() {
        assert_eq!(small_monoid_catalog(1).len(), 1);
        assert_eq!(small_monoid_catalog(2).len(), 1 + 2);
        assert_eq!(small_monoid_catalog(3).len(), 1 + 2 + 7);
        assert_eq!(small_monoid_catalog(4).len(), 1 + 2 + 7 + 35);
    }

    #[test]
    fn fountain_ideal_chain() {
        for g in [
            FiniteMonoid::trivial(),
            FiniteMonoid::cyclic_group(2),
            FiniteMonoid::cyclic_group(3),
        ] {
            let fd = fountain_monoid(&g).unwrap();
            let ideals = fd.monoid().all_right_ideals();
            assert_eq!(ideals.len(), 5);
            for w in ideals.windows(2) {
                assert!(w[0].iter().all(|e| w[1].contains(e)), "chain by inclusion");
            }
        }
    }

    #[test]
    fn generated_right_congruence_closure() {
        let m = n5();
        // 1 ~ 0 forces s ~ 0 for every s
        let c = MonoidCongruence::generated_right(&m, &[(0, 4)]);
        assert_eq!(c.class_count(), 1);
        let c = MonoidCongruence::generated_right(&m, &[(1, 2)]);
        // α~α² forces α²~α³~0
        assert!(c.related(1, 2) && c.related(2, 3) && c.related(3, 4));
        assert!(!c.related(0, 1));
    }
}
