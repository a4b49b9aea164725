//! Variable elimination for consistent systems over almost pure acts:
//! build a one-variable companion system whose solution substitutes away a
//! chosen variable while keeping the residual system consistent. Also the
//! Fountain-family reductions: the constant-normal-form system Σ′, the
//! forbidden-pattern diagnostics, and the layered-copy relations used in
//! the case analysis.

use std::sync::Arc;

use thiserror::Error;

use crate::act::{FiniteAct, FreeAct};
use crate::congruence::{annihilator, principal_intersection, ActCongruence, close};
use crate::equation::{
    assignment_satisfies, identity_embedding, solve_in, EqSystem, Equation, SigmaComplex,
};
use crate::monoid::{right_congruence_closure, FiniteMonoid, FountainDescriptor, FountainElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElimError {
    #[error("input system is inconsistent")]
    InconsistentInput,
    #[error("variable {var} carries no constant equation")]
    NoConstantEquationOnX { var: usize },
    #[error("one-variable companion system for variable {var} has no solution in the act")]
    AlmostPurityViolated { var: usize },
    #[error("operation requires a Fountain-family base monoid")]
    WrongMonoidFamily,
}

/// The annihilator generating set attached to one two-variable equation
/// x·s = y·t: pairs (u, v) generating {(u, v) : xsu and xsv fall together}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRecord {
    pub s: usize,
    pub generators: Vec<(usize, usize)>,
}

/// Intersection witnesses for a two-variable equation x·s = y·t against a
/// constant equation z·u = d: for each generator of [xs]S ∩ [zu]S, the
/// generator (as an element of the free quotient) and the pair of monoid
/// elements reaching it from [xs] and [zu].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRecord {
    pub s: usize,
    pub z: usize,
    pub u: usize,
    pub d: usize,
    pub witnesses: Vec<(usize, usize, usize)>,
}

/// Intersection witnesses for two two-variable equations x·s = y·t and
/// x·u = z·v sharing the eliminated variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LRecord {
    pub s: usize,
    pub u: usize,
    pub witnesses: Vec<(usize, usize, usize)>,
}

/// One elimination step: the companion one-variable system, the value
/// chosen for the eliminated variable, the residual system on the
/// remaining variables, and all witness data that went into the companion.
#[derive(Debug, Clone)]
pub struct EliminationStep {
    /// Index of the eliminated variable in the input system.
    pub var: usize,
    pub var_name: String,
    /// The one-variable companion system over the same act.
    pub pi: EqSystem,
    /// Its chosen (least-index) solution in the act.
    pub chosen: usize,
    /// The residual system on the remaining variables, in original order
    /// with the eliminated variable removed.
    pub residual: EqSystem,
    pub h_records: Vec<HRecord>,
    pub k_records: Vec<KRecord>,
    pub l_records: Vec<LRecord>,
}

/// Two-variable equations as seen from one side: x·s = other·t.
fn vv_from(sys: &EqSystem, var: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for eq in sys.equations() {
        if let Equation::VV { x, s, y, t } = *eq {
            if x == var {
                out.push((s, y, t));
            } else if y == var {
                out.push((t, x, s));
            }
        }
    }
    out
}

fn vc_on(sys: &EqSystem, var: usize) -> Vec<(usize, usize)> {
    sys.equations()
        .iter()
        .filter_map(|eq| match *eq {
            Equation::VC { x, s, a } if x == var => Some((s, a)),
            _ => None,
        })
        .collect()
}

/// Eliminates `var` from a consistent system carrying at least one constant
/// equation on `var`. Builds the companion system from the equations
/// mentioning only `var`, the annihilator saturations of its two-variable
/// equations, and the principal-intersection witnesses against constant
/// equations on other variables and against its other two-variable
/// equations; solves the companion in the act (least index) and substitutes.
pub fn eliminate_variable(sys: &EqSystem, var: usize) -> Result<EliminationStep, ElimError> {
    let act = Arc::clone(sys.act());
    let s_mon = act.base();
    let complex = SigmaComplex::build(sys.clone());
    if !complex.is_consistent() {
        return Err(ElimError::InconsistentInput);
    }
    if vc_on(sys, var).is_empty() {
        return Err(ElimError::NoConstantEquationOnX { var });
    }
    let free = complex.free();
    let c_sigma = complex.c_sigma();
    let c_proj = complex.c_proj();

    let mut pi_eqs: Vec<Equation> = Vec::new();
    // equations mentioning only `var`, re-indexed to the single variable 0
    for eq in sys.equations() {
        match *eq {
            Equation::VSameV { x, s, t } if x == var => {
                pi_eqs.push(Equation::vsame(0, s, t));
            }
            Equation::VC { x, s, a } if x == var => {
                pi_eqs.push(Equation::vc(0, s, a));
            }
            _ => {}
        }
    }

    let vvs = vv_from(sys, var);
    let vcs_other: Vec<(usize, usize, usize)> = sys
        .equations()
        .iter()
        .filter_map(|eq| match *eq {
            Equation::VC { x, s, a } if x != var => Some((x, s, a)),
            _ => None,
        })
        .collect();

    // annihilator saturation: xsu = xsv for generators (u, v) of the
    // annihilator of [xs]
    let mut h_records = Vec::new();
    for &(s, _, _) in &vvs {
        let ann = annihilator(c_sigma, c_proj[free.pair(var, s)]);
        for &(u, v) in ann.generators() {
            pi_eqs.push(Equation::vsame(0, s_mon.mul(s, u), s_mon.mul(s, v)));
        }
        h_records.push(HRecord {
            s,
            generators: ann.generators().to_vec(),
        });
    }

    // constant transfer: for xs = yt and zu = d with the orbits of [xs] and
    // [zu] meeting, each intersection generator k gives x(s·k_xs) = d·k_zu
    let mut k_records = Vec::new();
    for &(s, _, _) in &vvs {
        for &(z, u, d) in &vcs_other {
            let pi_data = principal_intersection(
                c_sigma,
                c_proj[free.pair(var, s)],
                c_proj[free.pair(z, u)],
            );
            let mut witnesses = Vec::new();
            for &(k, (k_xs, k_zu)) in &pi_data.generators {
                pi_eqs.push(Equation::vc(0, s_mon.mul(s, k_xs), act.act(d, k_zu)));
                witnesses.push((k, k_xs, k_zu));
            }
            if !witnesses.is_empty() {
                k_records.push(KRecord {
                    s,
                    z,
                    u,
                    d,
                    witnesses,
                });
            }
        }
    }

    // pairwise coupling of the variable's own two-variable equations:
    // xs = yt, xu = zv with meeting orbits give x(s·l_xs) = x(u·l_xu)
    let mut l_records = Vec::new();
    for i in 0..vvs.len() {
        for j in i..vvs.len() {
            let (s, _, _) = vvs[i];
            let (u, _, _) = vvs[j];
            let pi_data = principal_intersection(
                c_sigma,
                c_proj[free.pair(var, s)],
                c_proj[free.pair(var, u)],
            );
            let mut witnesses = Vec::new();
            for &(l, (l_xs, l_xu)) in &pi_data.generators {
                pi_eqs.push(Equation::vsame(0, s_mon.mul(s, l_xs), s_mon.mul(u, l_xu)));
                witnesses.push((l, l_xs, l_xu));
            }
            if !witnesses.is_empty() {
                l_records.push(LRecord { s, u, witnesses });
            }
        }
    }

    pi_eqs.sort();
    pi_eqs.dedup();
    let pi = EqSystem::new(
        Arc::clone(&act),
        vec![sys.variables()[var].clone()],
        pi_eqs,
    )
    .expect("companion equations are in range");
    let chosen = match solve_in(&pi, &act, &identity_embedding(&act)) {
        Some(sol) => sol[0],
        None => return Err(ElimError::AlmostPurityViolated { var }),
    };

    // residual: drop every equation mentioning `var`; each xs = yt becomes
    // the constant equation y·t = chosen·s
    let new_index = |old: usize| if old < var { old } else { old - 1 };
    let mut res_eqs: Vec<Equation> = Vec::new();
    for eq in sys.equations() {
        match *eq {
            Equation::VV { x, s, y, t } => {
                if x != var && y != var {
                    res_eqs.push(Equation::vv(new_index(x), s, new_index(y), t));
                }
            }
            Equation::VSameV { x, s, t } => {
                if x != var {
                    res_eqs.push(Equation::vsame(new_index(x), s, t));
                }
            }
            Equation::VC { x, s, a } => {
                if x != var {
                    res_eqs.push(Equation::vc(new_index(x), s, a));
                }
            }
        }
    }
    for &(s, y, t) in &vvs {
        res_eqs.push(Equation::vc(new_index(y), t, act.act(chosen, s)));
    }
    res_eqs.sort();
    res_eqs.dedup();
    let mut res_vars = sys.variables().to_vec();
    let var_name = res_vars.remove(var);
    let residual =
        EqSystem::new(Arc::clone(&act), res_vars, res_eqs).expect("residual equations in range");

    Ok(EliminationStep {
        var,
        var_name,
        pi,
        chosen,
        residual,
        h_records,
        k_records,
        l_records,
    })
}

/// Solves a consistent system in its own act by repeated variable
/// elimination. Always eliminates the variable that carries a constant
/// equation and has the lexicographically least name; once no constant
/// equations remain, all remaining variables are sent to a global left
/// zero. Returns the verified assignment, or an error naming the stage
/// that failed (which flags a non-almost-pure act).
pub fn solve_by_elimination(sys: &EqSystem) -> Result<(Vec<usize>, Vec<EliminationStep>), ElimError> {
    let act = Arc::clone(sys.act());
    if !SigmaComplex::build(sys.clone()).is_consistent() {
        return Err(ElimError::InconsistentInput);
    }
    let mut current = sys.clone();
    // positions of current variables in the original list
    let mut positions: Vec<usize> = (0..sys.var_count()).collect();
    let mut assignment = vec![usize::MAX; sys.var_count()];
    let mut steps = Vec::new();
    loop {
        let with_constant: Option<usize> = (0..current.var_count())
            .filter(|&v| !vc_on(&current, v).is_empty())
            .min_by_key(|&v| (current.variables()[v].clone(), v));
        match with_constant {
            Some(v) => {
                let step = eliminate_variable(&current, v)?;
                assignment[positions[v]] = step.chosen;
                positions.remove(v);
                current = step.residual.clone();
                steps.push(step);
            }
            None => {
                if !positions.is_empty() {
                    let all_s: Vec<usize> = (0..act.base().size()).collect();
                    let zero = act
                        .has_local_left_zeros(&all_s)
                        .ok_or(ElimError::AlmostPurityViolated {
                            var: positions[0],
                        })?;
                    for &p in &positions {
                        assignment[p] = zero;
                    }
                }
                break;
            }
        }
    }
    assignment_satisfies(sys, &act, &identity_embedding(&act), &assignment)
        .expect("elimination must return a genuine solution");
    Ok((assignment, steps))
}

/// The constant part of a system over a Fountain monoid, read off a
/// solution in an extension: per variable, the ideal of monoid elements
/// pushing the solution value into the act, its canonical generator (a
/// power of the nilpotent generator), and the corresponding act constant.
#[derive(Debug, Clone)]
pub struct FountainReduction {
    /// K(x̄) per variable, sorted; empty when the orbit misses the act.
    pub k_ideals: Vec<Vec<usize>>,
    /// τ(x): the ideal's generator, for variables with non-empty ideal.
    pub tau: Vec<Option<usize>>,
    /// a(x) = x̄·τ(x) as an act element.
    pub a_of: Vec<Option<usize>>,
    /// Σ′ = the constant-free equations plus x·τ(x) = a(x) per variable.
    pub sigma_prime: EqSystem,
}

/// Builds Σ′ from a solution of the system in an extension `b` (with the
/// act embedded via `a_emb`), and verifies — by full assignment scan — that
/// every solution of Σ′ in the act solves the original system.
pub fn fountain_sigma_prime(
    sys: &EqSystem,
    fd: &FountainDescriptor,
    b: &FiniteAct,
    a_emb: &[usize],
    solution: &[usize],
) -> Result<FountainReduction, ElimError> {
    let act = Arc::clone(sys.act());
    if **act.base() != **fd.monoid() {
        return Err(ElimError::WrongMonoidFamily);
    }
    let s_mon = fd.monoid();
    assignment_satisfies(sys, b, a_emb, solution).expect("supplied assignment must solve Σ in B");
    let mut in_a = vec![usize::MAX; b.size()];
    for (ai, &bi) in a_emb.iter().enumerate() {
        in_a[bi] = ai;
    }
    // the ideal chain generators, largest first: 1, α, α², α³, 0
    let chain: Vec<usize> = vec![
        s_mon.identity(),
        fd.alpha(),
        fd.layered(2, fd.group().identity()),
        fd.alpha_cubed(),
        fd.zero(),
    ];
    let mut k_ideals = Vec::new();
    let mut tau = Vec::new();
    let mut a_of = Vec::new();
    for x in 0..sys.var_count() {
        let k: Vec<usize> = (0..s_mon.size())
            .filter(|&g| in_a[b.act(solution[x], g)] != usize::MAX)
            .collect();
        if k.is_empty() {
            tau.push(None);
            a_of.push(None);
        } else {
            let gen = chain
                .iter()
                .copied()
                .find(|&t| {
                    let ideal = s_mon.right_ideal(t);
                    ideal == k
                })
                .expect("K(x̄) must be one of the chain ideals");
            tau.push(Some(gen));
            a_of.push(Some(in_a[b.act(solution[x], gen)]));
        }
        k_ideals.push(k);
    }
    let mut eqs: Vec<Equation> = sys
        .equations()
        .iter()
        .filter(|eq| !matches!(eq, Equation::VC { .. }))
        .copied()
        .collect();
    for x in 0..sys.var_count() {
        if let (Some(t), Some(a)) = (tau[x], a_of[x]) {
            eqs.push(Equation::vc(x, t, a));
        }
    }
    eqs.sort();
    eqs.dedup();
    let sigma_prime = EqSystem::new(Arc::clone(&act), sys.variables().to_vec(), eqs)
        .expect("Σ′ equations in range");

    // verified guarantee: every act-solution of Σ′ solves Σ
    let n = sys.var_count();
    let total = act.size().checked_pow(n as u32).expect("desk scale");
    assert!(total <= 1_000_000, "assignment scan is desk-scale only");
    let id = identity_embedding(&act);
    let mut assign = vec![0usize; n];
    for code in 0..total {
        let mut c = code;
        for slot in assign.iter_mut() {
            *slot = c % act.size();
            c /= act.size();
        }
        if assignment_satisfies(&sigma_prime, &act, &id, &assign).is_ok() {
            assert!(
                assignment_satisfies(sys, &act, &id, &assign).is_ok(),
                "Σ′ solution must solve Σ"
            );
        }
    }
    Ok(FountainReduction {
        k_ideals,
        tau,
        a_of,
        sigma_prime,
    })
}

/// Diagnostic scan for the relation patterns that cannot occur around a
/// variable x with x·α³ constant and that constant not fixed by zero:
/// family one is x·α²g ~ y·αh, x·α³ ~ y·α²h, x·α³ ~ y·αh; family two is
/// x·αⁱg ~ y·αⁱ⁺ʲh for i ≤ 3, 1 ≤ j ≤ 4−i (relations in the free-act
/// congruence generated by the variable-only equations).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForbiddenPatternReport {
    /// (y, which ∈ {0,1,2}, g, h) instances of family one.
    pub family_one: Vec<(usize, u8, usize, usize)>,
    /// (y, i, j, g, h) instances of family two.
    pub family_two: Vec<(usize, u8, u8, usize, usize)>,
}

impl ForbiddenPatternReport {
    pub fn is_clear(&self) -> bool {
        self.family_one.is_empty() && self.family_two.is_empty()
    }
}

/// αᵏ·g as a monoid element, for k ∈ 0..=4 (k ≥ 3 collapses the group part).
fn layered_power(fd: &FountainDescriptor, k: u8, g: usize) -> usize {
    match k {
        0..=2 => fd.layered(k, g),
        3 => fd.alpha_cubed(),
        _ => fd.zero(),
    }
}

pub fn forbidden_patterns(
    sys: &EqSystem,
    var: usize,
    fd: &FountainDescriptor,
) -> Result<ForbiddenPatternReport, ElimError> {
    if **sys.act().base() != **fd.monoid() {
        return Err(ElimError::WrongMonoidFamily);
    }
    let complex = SigmaComplex::build(sys.clone());
    let free = complex.free();
    let rho = complex.rho();
    let g_count = fd.group().size();
    let mut report = ForbiddenPatternReport::default();
    for y in 0..sys.var_count() {
        for g in 0..g_count {
            for h in 0..g_count {
                let triples = [
                    (free.pair(var, layered_power(fd, 2, g)), free.pair(y, layered_power(fd, 1, h)), 0u8),
                    (free.pair(var, fd.alpha_cubed()), free.pair(y, layered_power(fd, 2, h)), 1),
                    (free.pair(var, fd.alpha_cubed()), free.pair(y, layered_power(fd, 1, h)), 2),
                ];
                for (f1, f2, which) in triples {
                    if f1 != f2 && rho.related(f1, f2) {
                        report.family_one.push((y, which, g, h));
                    }
                }
                for i in 0u8..=3 {
                    for j in 1u8..=(4 - i) {
                        let f1 = free.pair(var, layered_power(fd, i, g));
                        let f2 = free.pair(y, layered_power(fd, i + j, h));
                        if f1 != f2 && rho.related(f1, f2) {
                            report.family_two.push((y, i, j, g, h));
                        }
                    }
                }
            }
        }
    }
    report.family_one.sort();
    report.family_one.dedup();
    report.family_two.sort();
    report.family_two.dedup();
    Ok(report)
}

/// The layered-copy relations of the Fountain case analysis: three copies
/// of the variable set (a free act on 3·|X| variables, copy c of variable
/// x at index c·|X| + x), the congruence generated by transferring
/// group-coefficient equations into the copies, and reduced generating
/// sets for the group-pair annihilators of a distinguished variable's
/// first and second copies.
#[derive(Debug, Clone)]
pub struct CaseDiagnostics {
    pub free_z: FreeAct,
    /// Closure of the first relation family (group, level-1 and level-2
    /// coefficient transfers).
    pub h_closure: ActCongruence,
    pub w1: Vec<(usize, usize)>,
    pub w2: Vec<(usize, usize)>,
    /// Closure of the second family (adds the mixed level-1/level-2
    /// transfer).
    pub p_closure: ActCongruence,
    pub q1: Vec<(usize, usize)>,
    pub q2: Vec<(usize, usize)>,
}

/// Splits a monoid element into (level, group part) when it is a layered
/// unit; None on the collapsed ideal.
fn level_of(fd: &FountainDescriptor, elt: usize) -> Option<(u8, usize)> {
    match fd.labels()[elt] {
        FountainElement::Layered { layer, g } => Some((layer, g)),
        _ => None,
    }
}

pub fn case_diagnostics(
    sys: &EqSystem,
    var: usize,
    fd: &FountainDescriptor,
) -> Result<CaseDiagnostics, ElimError> {
    if **sys.act().base() != **fd.monoid() {
        return Err(ElimError::WrongMonoidFamily);
    }
    let n = sys.var_count();
    let names: Vec<String> = (0..3)
        .flat_map(|c| {
            sys.variables()
                .iter()
                .map(move |v| format!("{v}^{c}"))
        })
        .collect();
    let free_z = FreeAct::new(Arc::clone(sys.act().base()), names);
    let copy = |c: usize, x: usize| c * n + x;
    let g_elt = |g: usize| fd.layered(0, g);

    let mut h_pairs: Vec<(usize, usize)> = Vec::new();
    let mut p_pairs: Vec<(usize, usize)> = Vec::new();
    for eq in sys.equations() {
        let (x, s, y, t) = match *eq {
            Equation::VV { x, s, y, t } => (x, s, y, t),
            Equation::VSameV { x, s, t } => (x, s, x, t),
            Equation::VC { .. } => continue,
        };
        let (ls, gs) = match level_of(fd, s) {
            Some(v) => v,
            None => continue,
        };
        let (lt, gt) = match level_of(fd, t) {
            Some(v) => v,
            None => continue,
        };
        let (fs, ft) = (g_elt(gs), g_elt(gt));
        match (ls, lt) {
            // yu = yv with group coefficients: transfer into all copies
            (0, 0) if x == y => {
                for c in 0..3 {
                    let pair = (
                        free_z.pair(copy(c, x), fs),
                        free_z.pair(copy(c, y), ft),
                    );
                    h_pairs.push(pair);
                    p_pairs.push(pair);
                }
            }
            // level-1 coefficient equations: copies 1 and 2
            (1, 1) => {
                for c in 1..3 {
                    let pair = (
                        free_z.pair(copy(c, x), fs),
                        free_z.pair(copy(c, y), ft),
                    );
                    h_pairs.push(pair);
                    if c == 1 {
                        p_pairs.push(pair);
                    }
                }
                p_pairs.push((free_z.pair(copy(2, x), fs), free_z.pair(copy(2, y), ft)));
            }
            // level-2 coefficient equations: copy 2 only
            (2, 2) => {
                let pair = (
                    free_z.pair(copy(2, x), fs),
                    free_z.pair(copy(2, y), ft),
                );
                h_pairs.push(pair);
                p_pairs.push(pair);
            }
            // mixed level-1 = level-2: second family only, copy 1 vs copy 2
            (1, 2) => {
                p_pairs.push((free_z.pair(copy(1, x), fs), free_z.pair(copy(2, y), ft)));
            }
            (2, 1) => {
                p_pairs.push((free_z.pair(copy(2, x), fs), free_z.pair(copy(1, y), ft)));
            }
            _ => {}
        }
    }
    let h_closure = close(free_z.act(), &h_pairs);
    let p_closure = close(free_z.act(), &p_pairs);

    let group = fd.group();
    let group_pairs = |closure: &ActCongruence, c: usize| -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for u in 0..group.size() {
            for v in (u + 1)..group.size() {
                let f1 = free_z.pair(copy(c, var), g_elt(u));
                let f2 = free_z.pair(copy(c, var), g_elt(v));
                if closure.related(f1, f2) {
                    pairs.push((u, v));
                }
            }
        }
        reduce_group_pairs(group, &pairs)
    };
    let w1 = group_pairs(&h_closure, 1);
    let w2 = group_pairs(&h_closure, 2);
    let q1 = group_pairs(&p_closure, 1);
    let q2 = group_pairs(&p_closure, 2);
    Ok(CaseDiagnostics {
        free_z,
        h_closure,
        w1,
        w2,
        p_closure,
        q1,
        q2,
    })
}

/// Greedy lexicographic reduction of a generating pair set for a right
/// congruence on the group, mirroring the annihilator reduction.
fn reduce_group_pairs(g: &FiniteMonoid, pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let full = right_congruence_closure(g, pairs);
    let mut kept: Vec<(usize, usize)> = pairs.to_vec();
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if right_congruence_closure(g, &trial) == full {
            kept = trial;
        } else {
            i += 1;
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{fountain_monoid, FiniteMonoid};

    fn n5_self_act() -> Arc<FiniteAct> {
        let s = Arc::new(FiniteMonoid::cyclic(4, 1));
        Arc::new(FiniteAct::monoid_as_act(s))
    }

    fn sys(act: &Arc<FiniteAct>, vars: &[&str], eqs: Vec<Equation>) -> EqSystem {
        EqSystem::new(
            Arc::clone(act),
            vars.iter().map(|v| v.to_string()).collect(),
            eqs,
        )
        .unwrap()
    }

    #[test]
    fn eliminate_single_variable_system() {
        let a = n5_self_act();
        let s = sys(&a, &["x"], vec![Equation::vc(0, 3, 3)]);
        let step = eliminate_variable(&s, 0).unwrap();
        assert_eq!(step.chosen, 0); // x = 1 solves xα³ = α³
        assert_eq!(step.residual.var_count(), 0);
        assert!(step.residual.equations().is_empty());
    }

    #[test]
    fn eliminate_two_variable_example() {
        // xα = yα, yα³ = α³ over N₅-on-itself; eliminate y
        let a = n5_self_act();
        let s = sys(
            &a,
            &["x", "y"],
            vec![Equation::vv(0, 1, 1, 1), Equation::vc(1, 3, 3)],
        );
        let step = eliminate_variable(&s, 1).unwrap();
        // the companion keeps yα³ = α³, whose least solution is 1
        assert_eq!(step.chosen, 0);
        // residual binds x through the substituted constant: xα = 1·α = α
        assert!(step
            .residual
            .equations()
            .contains(&Equation::vc(0, 1, 1)));
        // end-to-end agreement with brute force
        let (assignment, steps) = solve_by_elimination(&s).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(assignment_satisfies(&s, &a, &identity_embedding(&a), &assignment).is_ok());
        assert!(solve_in(&s, &a, &identity_embedding(&a)).is_some());
    }

    #[test]
    fn eliminate_requires_constant_equation() {
        let a = n5_self_act();
        let s = sys(&a, &["x", "y"], vec![Equation::vv(0, 1, 1, 1)]);
        assert!(matches!(
            eliminate_variable(&s, 0),
            Err(ElimError::NoConstantEquationOnX { var: 0 })
        ));
    }

    #[test]
    fn eliminate_rejects_inconsistent_input() {
        let a = n5_self_act();
        let s = sys(&a, &["x"], vec![Equation::vc(0, 3, 0)]);
        assert!(matches!(
            eliminate_variable(&s, 0),
            Err(ElimError::InconsistentInput)
        ));
    }

    #[test]
    fn no_constant_system_solved_by_global_zero() {
        let a = n5_self_act();
        let s = sys(&a, &["x", "y"], vec![Equation::vv(0, 1, 1, 2)]);
        let (assignment, steps) = solve_by_elimination(&s).unwrap();
        assert!(steps.is_empty());
        assert_eq!(assignment, vec![4, 4]); // the zero fixes everything
    }

    #[test]
    fn companion_and_residual_stay_consistent() {
        let a = n5_self_act();
        let s = sys(
            &a,
            &["x", "y"],
            vec![
                Equation::vv(0, 1, 1, 1),
                Equation::vc(0, 3, 3),
                Equation::vc(1, 3, 3),
            ],
        );
        let step = eliminate_variable(&s, 0).unwrap();
        assert!(SigmaComplex::build(step.pi.clone()).is_consistent());
        assert!(SigmaComplex::build(step.residual.clone()).is_consistent());
        // the constant equation on y transfers through the shared orbit
        assert!(!step.k_records.is_empty());
        let (assignment, _) = solve_by_elimination(&s).unwrap();
        assert_eq!(assignment, vec![0, 0]);
    }

    #[test]
    fn fountain_sigma_prime_basic() {
        // Σ = {xα² = a} over Fountain(Z₂) acting on itself, solved in the
        // canonical extension; K([x]) = α²S, τ(x) = α², a(x) = a
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        let act = Arc::new(FiniteAct::monoid_as_act(Arc::clone(fd.monoid())));
        let alpha2 = fd.layered(2, 0);
        let target_const = fd.alpha_cubed();
        let s = sys(&act, &["x"], vec![Equation::vc(0, alpha2, target_const)]);
        let complex = SigmaComplex::build(s.clone());
        assert!(complex.is_consistent());
        let b = complex.a_sigma().clone();
        let emb = complex.a_embedded_in_a_sigma();
        let solution = complex.canonical_tuple();
        let red = fountain_sigma_prime(&s, &fd, &b, &emb, &solution).unwrap();
        assert_eq!(red.tau[0], Some(alpha2));
        assert_eq!(red.a_of[0], Some(target_const));
        assert_eq!(
            red.sigma_prime.equations(),
            &[Equation::vc(0, alpha2, target_const)]
        );
    }

    #[test]
    fn fountain_sigma_prime_solution_inside_act() {
        // supplied solution already in A: K = S, τ = 1
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        let act = Arc::new(FiniteAct::monoid_as_act(Arc::clone(fd.monoid())));
        let s = sys(&act, &["x"], vec![]);
        let emb = identity_embedding(&act);
        let red = fountain_sigma_prime(&s, &fd, &act, &emb, &[0]).unwrap();
        assert_eq!(red.tau[0], Some(fd.monoid().identity()));
        assert_eq!(red.k_ideals[0].len(), fd.monoid().size());
    }

    #[test]
    fn fountain_sigma_prime_wrong_family() {
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        let a = n5_self_act();
        let s = sys(&a, &["x"], vec![]);
        assert!(matches!(
            fountain_sigma_prime(&s, &fd, &a, &identity_embedding(&a), &[0]),
            Err(ElimError::WrongMonoidFamily)
        ));
    }

    #[test]
    fn forbidden_patterns_empty_system() {
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        let act = Arc::new(FiniteAct::monoid_as_act(Arc::clone(fd.monoid())));
        let s = sys(&act, &["x"], vec![]);
        let report = forbidden_patterns(&s, 0, &fd).unwrap();
        assert!(report.is_clear());
    }

    #[test]
    fn forbidden_patterns_present_when_layers_glued() {
        // xα = yα² directly instantiates the second family (i=1, j=1)
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        let act = Arc::new(FiniteAct::monoid_as_act(Arc::clone(fd.monoid())));
        let alpha = fd.alpha();
        let alpha2 = fd.layered(2, 0);
        let s = sys(&act, &["x", "y"], vec![Equation::vv(0, alpha, 1, alpha2)]);
        let report = forbidden_patterns(&s, 0, &fd).unwrap();
        assert!(report
            .family_two
            .iter()
            .any(|&(y, i, j, _, _)| y == 1 && i == 1 && j == 1));
    }

    #[test]
    fn case_diagnostics_shapes() {
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        let act = Arc::new(FiniteAct::monoid_as_act(Arc::clone(fd.monoid())));
        let alpha = fd.alpha();
        let g = fd.layered(0, 1);
        // xα·1 = yα·g and x·g = x·1-style equations feed the relations
        let s = sys(
            &act,
            &["x", "y"],
            vec![
                Equation::vv(0, alpha, 1, fd.layered(1, 1)),
                Equation::vsame(0, fd.monoid().identity(), g),
            ],
        );
        let d = case_diagnostics(&s, 0, &fd).unwrap();
        assert_eq!(d.free_z.act().size(), 6 * fd.monoid().size());
        // the group-coefficient equation x·1 = x·g forces (1, g) into the
        // copy-1 annihilator of x
        assert_eq!(d.w1, vec![(0, 1)]);
        // closures are genuine congruences
        assert!(d.h_closure.class_count() <= d.free_z.act().size());
        assert!(d.q1.len() <= fd.group().size() * fd.group().size());
    }
}
