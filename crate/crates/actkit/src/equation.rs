//! Equation systems over a finite act: the three equation forms, the
//! canonical congruences and quotient acts attached to a system,
//! consistency with rewrite certificates, solution search, and the
//! retraction/lifting characterizations of solvability.

use std::sync::Arc;

use thiserror::Error;

use crate::act::{
    disjoint_union, find_retraction, quotient_act, subact_generated, ActMorphism, FiniteAct,
    FreeAct,
};
use crate::congruence::{certify, close, ActCongruence, HSequence};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EqError {
    #[error("variable index {var} out of range ({count} variables)")]
    VarOutOfRange { var: usize, count: usize },
    #[error("monoid element {elt} out of range")]
    MonoidEltOutOfRange { elt: usize },
    #[error("constant index {elt} out of range for the act")]
    ConstantOutOfRange { elt: usize },
    #[error("two-variable equation uses the same variable {var} on both sides")]
    DegenerateTwoVariable { var: usize },
    #[error("system is inconsistent")]
    InconsistentSystem,
    #[error("assignment does not solve the system (fails equation {index})")]
    NotASolution { index: usize },
}

/// One equation over an act, in exactly one of the three forms:
/// `xs = yt` with distinct variables, `xs = xt` on a single variable, or
/// `xs = a` with a constant from the act. Stored pre-oriented: two-variable
/// equations keep the smaller variable on the left, single-variable
/// equations keep s ≤ t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Equation {
    VV { x: usize, s: usize, y: usize, t: usize },
    VSameV { x: usize, s: usize, t: usize },
    VC { x: usize, s: usize, a: usize },
}

impl Equation {
    pub fn vv(x: usize, s: usize, y: usize, t: usize) -> Self {
        assert_ne!(x, y, "two-variable equation needs distinct variables");
        if x <= y {
            Equation::VV { x, s, y, t }
        } else {
            Equation::VV { x: y, s: t, y: x, t: s }
        }
    }

    pub fn vsame(x: usize, s: usize, t: usize) -> Self {
        if s <= t {
            Equation::VSameV { x, s, t }
        } else {
            Equation::VSameV { x, s: t, t: s }
        }
    }

    pub fn vc(x: usize, s: usize, a: usize) -> Self {
        Equation::VC { x, s, a }
    }

    /// Variables referenced by this equation.
    pub fn vars(&self) -> Vec<usize> {
        match *self {
            Equation::VV { x, y, .. } => vec![x, y],
            Equation::VSameV { x, .. } | Equation::VC { x, .. } => vec![x],
        }
    }

    /// The same equation with variables renamed by a permutation.
    pub fn renamed(&self, perm: &[usize]) -> Equation {
        match *self {
            Equation::VV { x, s, y, t } => Equation::vv(perm[x], s, perm[y], t),
            Equation::VSameV { x, s, t } => Equation::vsame(perm[x], s, t),
            Equation::VC { x, s, a } => Equation::vc(perm[x], s, a),
        }
    }
}

/// A finite equation system over an act, with an ordered variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqSystem {
    act: Arc<FiniteAct>,
    variables: Vec<String>,
    equations: Vec<Equation>,
}

impl EqSystem {
    pub fn new(
        act: Arc<FiniteAct>,
        variables: Vec<String>,
        equations: Vec<Equation>,
    ) -> Result<Self, EqError> {
        let count = variables.len();
        let m = act.base().size();
        for eq in &equations {
            let (vars, ms, constant) = match *eq {
                Equation::VV { x, s, y, t } => {
                    if x == y {
                        return Err(EqError::DegenerateTwoVariable { var: x });
                    }
                    (vec![x, y], vec![s, t], None)
                }
                Equation::VSameV { x, s, t } => (vec![x], vec![s, t], None),
                Equation::VC { x, s, a } => (vec![x], vec![s], Some(a)),
            };
            for v in vars {
                if v >= count {
                    return Err(EqError::VarOutOfRange { var: v, count });
                }
            }
            for e in ms {
                if e >= m {
                    return Err(EqError::MonoidEltOutOfRange { elt: e });
                }
            }
            if let Some(a) = constant {
                if a >= act.size() {
                    return Err(EqError::ConstantOutOfRange { elt: a });
                }
            }
        }
        Ok(EqSystem {
            act,
            variables,
            equations,
        })
    }

    pub fn act(&self) -> &Arc<FiniteAct> {
        &self.act
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn var_count(&self) -> usize {
        self.variables.len()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Variables actually referenced by some equation, ascending.
    pub fn used_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.variables.len()];
        for eq in &self.equations {
            for v in eq.vars() {
                used[v] = true;
            }
        }
        (0..used.len()).filter(|&v| used[v]).collect()
    }

    /// True when the referenced variables form one component of the graph
    /// whose edges are the two-variable equations. Vacuously true when at
    /// most one variable is referenced.
    pub fn is_connected(&self) -> bool {
        let used = self.used_vars();
        if used.len() <= 1 {
            return true;
        }
        let n = self.variables.len();
        let mut adj = vec![Vec::new(); n];
        for eq in &self.equations {
            if let Equation::VV { x, y, .. } = *eq {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
        let mut seen = vec![false; n];
        let mut work = vec![used[0]];
        seen[used[0]] = true;
        while let Some(v) = work.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    work.push(w);
                }
            }
        }
        used.iter().all(|&v| seen[v])
    }

    /// Deterministic normal form: sort equations, rename variables in
    /// first-use order of the sorted list, sort again.
    pub fn normalized(&self) -> EqSystem {
        let mut eqs = self.equations.clone();
        eqs.sort();
        eqs.dedup();
        let n = self.variables.len();
        let mut perm = vec![usize::MAX; n];
        let mut next = 0;
        for eq in &eqs {
            for v in eq.vars() {
                if perm[v] == usize::MAX {
                    perm[v] = next;
                    next += 1;
                }
            }
        }
        for v in 0..n {
            if perm[v] == usize::MAX {
                perm[v] = next;
                next += 1;
            }
        }
        let mut renamed: Vec<Equation> = eqs.iter().map(|e| e.renamed(&perm)).collect();
        renamed.sort();
        let mut variables = vec![String::new(); n];
        for v in 0..n {
            variables[perm[v]] = self.variables[v].clone();
        }
        EqSystem {
            act: Arc::clone(&self.act),
            variables,
            equations: renamed,
        }
    }

    /// The same system with variables renamed by a permutation.
    pub fn renamed(&self, perm: &[usize]) -> EqSystem {
        let mut variables = vec![String::new(); self.variables.len()];
        for v in 0..self.variables.len() {
            variables[perm[v]] = self.variables[v].clone();
        }
        let mut eqs: Vec<Equation> = self.equations.iter().map(|e| e.renamed(perm)).collect();
        eqs.sort();
        EqSystem {
            act: Arc::clone(&self.act),
            variables,
            equations: eqs,
        }
    }
}

/// Checks one assignment (target indices per variable) against every
/// equation; used as the independent soundness evaluator. `a_embedding`
/// maps act indices into the target.
pub fn assignment_satisfies(
    sys: &EqSystem,
    target: &FiniteAct,
    a_embedding: &[usize],
    assign: &[usize],
) -> Result<(), EqError> {
    for (index, eq) in sys.equations().iter().enumerate() {
        let holds = match *eq {
            Equation::VV { x, s, y, t } => target.act(assign[x], s) == target.act(assign[y], t),
            Equation::VSameV { x, s, t } => target.act(assign[x], s) == target.act(assign[x], t),
            Equation::VC { x, s, a } => target.act(assign[x], s) == a_embedding[a],
        };
        if !holds {
            return Err(EqError::NotASolution { index });
        }
    }
    Ok(())
}

/// Backtracking solution search in a target act containing a marked copy of
/// the system's act (`a_embedding`: act index → target index). Candidates
/// per variable are pre-filtered by the constant equations; variables are
/// assigned in index order with targets tried ascending, so the result is
/// the lexicographically least solution.
pub fn solve_in(sys: &EqSystem, target: &FiniteAct, a_embedding: &[usize]) -> Option<Vec<usize>> {
    let k = sys.var_count();
    let mut candidates: Vec<Vec<usize>> = vec![(0..target.size()).collect(); k];
    for eq in sys.equations() {
        match *eq {
            Equation::VC { x, s, a } => {
                candidates[x].retain(|&b| target.act(b, s) == a_embedding[a]);
            }
            Equation::VSameV { x, s, t } => {
                candidates[x].retain(|&b| target.act(b, s) == target.act(b, t));
            }
            Equation::VV { .. } => {}
        }
    }
    let mut assign = vec![usize::MAX; k];
    fn go(
        sys: &EqSystem,
        target: &FiniteAct,
        candidates: &[Vec<usize>],
        assign: &mut [usize],
        var: usize,
    ) -> bool {
        if var == assign.len() {
            return true;
        }
        'next: for &b in &candidates[var] {
            assign[var] = b;
            for eq in sys.equations() {
                if let Equation::VV { x, s, y, t } = *eq {
                    if x <= var && y <= var && assign[x] != usize::MAX && assign[y] != usize::MAX
                    {
                        if target.act(assign[x], s) != target.act(assign[y], t) {
                            continue 'next;
                        }
                    }
                }
            }
            if go(sys, target, candidates, assign, var + 1) {
                return true;
            }
        }
        assign[var] = usize::MAX;
        false
    }
    if go(sys, target, &candidates, &mut assign, 0) {
        debug_assert!(assignment_satisfies(sys, target, a_embedding, &assign).is_ok());
        Some(assign)
    } else {
        None
    }
}

/// Identity embedding for solving a system inside its own act.
pub fn identity_embedding(a: &FiniteAct) -> Vec<usize> {
    (0..a.size()).collect()
}

/// Everything canonically attached to a system Σ over A: the free act on
/// its variables, the congruence on the free act generated by the
/// variable-only equations, the congruence on A ⊔ F generated by all
/// equations, the two quotient acts, the constant-orbit subact of the free
/// quotient, and the consistency verdict with a rewrite certificate on
/// failure.
#[derive(Debug, Clone)]
pub struct SigmaComplex {
    system: EqSystem,
    free: FreeAct,
    /// A ⊔ F with the two inclusions.
    union: FiniteAct,
    inc_a: Vec<usize>,
    inc_f: Vec<usize>,
    /// Variable-only equation pairs inside F.
    h_pairs: Vec<(usize, usize)>,
    /// Constant equation pairs inside A ⊔ F.
    k_pairs: Vec<(usize, usize)>,
    /// All generating pairs of κ inside A ⊔ F (H mapped in, plus K).
    kappa_pairs: Vec<(usize, usize)>,
    rho: ActCongruence,
    kappa: ActCongruence,
    /// A(Σ) = (A ⊔ F)/κ with its projection.
    a_sigma: FiniteAct,
    a_proj: Vec<usize>,
    /// C(Σ) = F/ρ with its projection.
    c_sigma: FiniteAct,
    c_proj: Vec<usize>,
    /// B(Σ): the union of constant-equation orbits, as a subact of C(Σ).
    b_act: FiniteAct,
    b_inclusion: Vec<usize>,
    consistent: bool,
    certificate: Option<HSequence>,
}

impl SigmaComplex {
    pub fn build(system: EqSystem) -> SigmaComplex {
        let act = Arc::clone(system.act());
        let s = act.base();
        let free = FreeAct::new(Arc::clone(s), system.variables().to_vec());
        let (union, inc_a, inc_f) = disjoint_union(&act, free.act()).expect("same base");
        let mut h_pairs = Vec::new();
        let mut k_pairs = Vec::new();
        for eq in system.equations() {
            match *eq {
                Equation::VV { x, s: es, y, t } => {
                    h_pairs.push((free.pair(x, es), free.pair(y, t)));
                }
                Equation::VSameV { x, s: es, t } => {
                    h_pairs.push((free.pair(x, es), free.pair(x, t)));
                }
                Equation::VC { x, s: es, a } => {
                    k_pairs.push((inc_f[free.pair(x, es)], inc_a[a]));
                }
            }
        }
        let rho = close(free.act(), &h_pairs);
        let mut kappa_pairs: Vec<(usize, usize)> = h_pairs
            .iter()
            .map(|&(p, q)| (inc_f[p], inc_f[q]))
            .collect();
        kappa_pairs.extend_from_slice(&k_pairs);
        let kappa = close(&union, &kappa_pairs);
        let (a_sigma, a_proj) =
            quotient_act(&union, kappa.repr_vec()).expect("closure is a congruence");
        let (c_sigma, c_proj) =
            quotient_act(free.act(), rho.repr_vec()).expect("closure is a congruence");
        let b_roots: Vec<usize> = system
            .equations()
            .iter()
            .filter_map(|eq| match *eq {
                Equation::VC { x, s: es, .. } => Some(c_proj[free.pair(x, es)]),
                _ => None,
            })
            .collect();
        let (b_act, b_inclusion) = subact_generated(&c_sigma, &b_roots);

        // consistency: no two distinct constants of A may be κ-identified
        let mut offending = None;
        'scan: for a1 in 0..act.size() {
            for a2 in (a1 + 1)..act.size() {
                if kappa.related(inc_a[a1], inc_a[a2]) {
                    offending = Some((a1, a2));
                    break 'scan;
                }
            }
        }
        let certificate = offending.map(|(a1, a2)| {
            certify(&union, &kappa_pairs, inc_a[a1], inc_a[a2])
                .expect("related pair must certify")
        });
        SigmaComplex {
            consistent: offending.is_none(),
            certificate,
            system,
            free,
            union,
            inc_a,
            inc_f,
            h_pairs,
            k_pairs,
            kappa_pairs,
            rho,
            kappa,
            a_sigma,
            a_proj,
            c_sigma,
            c_proj,
            b_act,
            b_inclusion,
        }
    }

    pub fn system(&self) -> &EqSystem {
        &self.system
    }

    pub fn free(&self) -> &FreeAct {
        &self.free
    }

    pub fn union_act(&self) -> &FiniteAct {
        &self.union
    }

    pub fn rho(&self) -> &ActCongruence {
        &self.rho
    }

    pub fn kappa(&self) -> &ActCongruence {
        &self.kappa
    }

    pub fn kappa_pairs(&self) -> &[(usize, usize)] {
        &self.kappa_pairs
    }

    pub fn h_pairs(&self) -> &[(usize, usize)] {
        &self.h_pairs
    }

    pub fn k_pairs(&self) -> &[(usize, usize)] {
        &self.k_pairs
    }

    pub fn a_sigma(&self) -> &FiniteAct {
        &self.a_sigma
    }

    pub fn c_sigma(&self) -> &FiniteAct {
        &self.c_sigma
    }

    pub fn c_proj(&self) -> &[usize] {
        &self.c_proj
    }

    /// B(Σ) together with its inclusion into C(Σ).
    pub fn b_sigma(&self) -> (&FiniteAct, &[usize]) {
        (&self.b_act, &self.b_inclusion)
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    /// On inconsistency: a rewrite chain joining two distinct constants.
    pub fn certificate(&self) -> Option<&HSequence> {
        self.certificate.as_ref()
    }

    /// The natural map A → A(Σ).
    pub fn nu(&self) -> Vec<usize> {
        (0..self.system.act().size())
            .map(|a| self.a_proj[self.inc_a[a]])
            .collect()
    }

    /// Image of a free-act element in A(Σ).
    pub fn free_in_a_sigma(&self, f: usize) -> usize {
        self.a_proj[self.inc_f[f]]
    }

    /// The canonical tuple ([x])ₓ in A(Σ).
    pub fn canonical_tuple(&self) -> Vec<usize> {
        (0..self.system.var_count())
            .map(|x| self.free_in_a_sigma(self.free.insertion(x)))
            .collect()
    }

    /// Checks mechanically that the canonical tuple satisfies every
    /// equation inside A(Σ), with constants mapped through ν.
    pub fn canonical_tuple_satisfies(&self) -> bool {
        let nu = self.nu();
        let tuple = self.canonical_tuple();
        assignment_satisfies(&self.system, &self.a_sigma, &nu, &tuple).is_ok()
    }

    /// Independent consistency route: the constant-assignment map on the
    /// free quotient is single-valued. Computed from ρ alone — for every
    /// two constant equations xs = a, zu = b and all v, w in S, if
    /// (x, sv) and (z, uw) are ρ-related then av = bw must hold in A.
    pub fn theta_well_defined(&self) -> bool {
        let act = self.system.act();
        let s = act.base();
        let vcs: Vec<(usize, usize, usize)> = self
            .system
            .equations()
            .iter()
            .filter_map(|eq| match *eq {
                Equation::VC { x, s: es, a } => Some((x, es, a)),
                _ => None,
            })
            .collect();
        for &(x, xs, a) in &vcs {
            for &(z, zu, b) in &vcs {
                for v in 0..s.size() {
                    for w in 0..s.size() {
                        let f1 = self.free.pair(x, s.mul(xs, v));
                        let f2 = self.free.pair(z, s.mul(zu, w));
                        if self.rho.related(f1, f2) && act.act(a, v) != act.act(b, w) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The morphism B(Σ) → A sending [xs]·v to a·v for each constant
    /// equation xs = a. Only defined on consistent systems.
    pub fn theta(&self) -> Result<ActMorphism, EqError> {
        if !self.consistent {
            return Err(EqError::InconsistentSystem);
        }
        let act = self.system.act();
        let s = act.base();
        let mut map = vec![usize::MAX; self.b_act.size()];
        for (bi, &ci) in self.b_inclusion.iter().enumerate() {
            'search: for eq in self.system.equations() {
                if let Equation::VC { x, s: es, a } = *eq {
                    for v in 0..s.size() {
                        let f = self.free.pair(x, s.mul(es, v));
                        if self.c_proj[f] == ci {
                            map[bi] = act.act(a, v);
                            break 'search;
                        }
                    }
                }
            }
            debug_assert_ne!(map[bi], usize::MAX, "B(Σ) element must carry a constant");
        }
        ActMorphism::verified(&self.b_act, act, map).map_err(|_| EqError::InconsistentSystem)
    }

    /// The marked copy of A inside A(Σ) (only an embedding when consistent).
    pub fn a_embedded_in_a_sigma(&self) -> Vec<usize> {
        self.nu()
    }

    /// Solvability in A ⟺ A is a retract of A(Σ); both sides are computed
    /// independently and their agreement asserted.
    pub fn check_retract_criterion(&self) -> Result<bool, EqError> {
        if !self.consistent {
            return Err(EqError::InconsistentSystem);
        }
        let act = self.system.act();
        let retract = find_retraction(&self.a_sigma, &self.nu()).is_some();
        let solvable = solve_in(&self.system, act, &identity_embedding(act)).is_some();
        assert_eq!(
            retract, solvable,
            "retraction presence must match solvability"
        );
        Ok(retract)
    }

    /// A morphism C(Σ) → A extending θ, built from a solution in A;
    /// present iff the system solves in A.
    pub fn lift_theta(&self) -> Result<Option<ActMorphism>, EqError> {
        if !self.consistent {
            return Err(EqError::InconsistentSystem);
        }
        let act = self.system.act();
        let s = act.base();
        let solution = match solve_in(&self.system, act, &identity_embedding(act)) {
            Some(sol) => sol,
            None => return Ok(None),
        };
        let mut map = vec![usize::MAX; self.c_sigma.size()];
        for x in 0..self.system.var_count() {
            for ms in 0..s.size() {
                let c = self.c_proj[self.free.pair(x, ms)];
                let image = act.act(solution[x], ms);
                if map[c] == usize::MAX {
                    map[c] = image;
                } else {
                    debug_assert_eq!(map[c], image, "solution must respect ρ");
                }
            }
        }
        let psi_bar = ActMorphism::verified(&self.c_sigma, act, map)
            .expect("solution-induced map is a morphism");
        // the lift restricts to θ on B(Σ)
        let theta = self.theta()?;
        for (bi, &ci) in self.b_inclusion.iter().enumerate() {
            assert_eq!(psi_bar.apply(ci), theta.apply(bi), "lift must extend θ");
        }
        Ok(Some(psi_bar))
    }
}

/// Turns a solution of Σ in A into the retraction A ⊔ F → A collapsing each
/// variable orbit onto its solution's orbit; the system's equations land in
/// the kernel.
pub fn solution_to_retraction(
    complex: &SigmaComplex,
    assignment: &[usize],
) -> Result<ActMorphism, EqError> {
    let act = complex.system.act();
    let s = act.base();
    assignment_satisfies(
        &complex.system,
        act,
        &identity_embedding(act),
        assignment,
    )?;
    let mut map = vec![usize::MAX; complex.union.size()];
    for a in 0..act.size() {
        map[complex.inc_a[a]] = a;
    }
    for x in 0..complex.system.var_count() {
        for ms in 0..s.size() {
            map[complex.inc_f[complex.free.pair(x, ms)]] = act.act(assignment[x], ms);
        }
    }
    let r = ActMorphism::verified(&complex.union, act, map)
        .expect("solution-induced collapse is a morphism");
    // kernel contains every equation pair
    for &(p, q) in complex.kappa_pairs() {
        debug_assert_eq!(r.apply(p), r.apply(q));
    }
    Ok(r)
}
