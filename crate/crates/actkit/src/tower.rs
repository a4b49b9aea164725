//! Canonical pure extension stages: amalgamate the canonical extensions of
//! all maximal consistent bounded-variable systems over an act into a
//! single stage in which every such system solves, iterate the stage
//! construction into a tower, extend morphisms along canonical
//! extensions, and fold retractions back through a built chain.

use std::sync::Arc;

use thiserror::Error;

use crate::act::{amalgamate, find_retraction, ActMorphism, FiniteAct};
use crate::equation::{identity_embedding, solve_in, EqSystem, Equation, SigmaComplex};
use crate::purity::{is_almost_pure, is_n_absolutely_pure, SystemEnumerator};

/// Default bound on the carrier size of any constructed stage.
pub const DEFAULT_SIZE_CAP: usize = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TowerError {
    #[error("stage {stage} would have {size} elements, exceeding the cap of {cap}")]
    SizeCapExceeded {
        stage: usize,
        size: usize,
        cap: usize,
    },
    #[error("system is inconsistent")]
    InconsistentSystem,
    #[error("companion system at build step {stage} has no solution in the base act")]
    PurityPreconditionFailed { stage: usize },
}

/// The maximal consistent systems over an act with at most `n` variables:
/// every connected consistent system using all its variables extends to a
/// member (up to variable renaming), so solving the members covers all of
/// them; disconnected systems solve component-wise.
#[derive(Debug, Clone)]
pub struct SystemCatalog {
    act: Arc<FiniteAct>,
    n: usize,
    systems: Vec<EqSystem>,
}

impl SystemCatalog {
    pub fn act(&self) -> &Arc<FiniteAct> {
        &self.act
    }

    pub fn bound(&self) -> usize {
        self.n
    }

    pub fn systems(&self) -> &[EqSystem] {
        &self.systems
    }
}

/// Enumerates the catalog deterministically: for each variable count up to
/// `n`, the maximal consistent systems, sorted by variable count then by
/// equation list.
pub fn catalog(act: &Arc<FiniteAct>, n: usize) -> SystemCatalog {
    let mut systems = Vec::new();
    for k in 1..=n {
        let enumerator = SystemEnumerator::new(Arc::clone(act.base()), k);
        systems.extend(enumerator.maximal_consistent_systems(act));
    }
    systems.sort_by(|a, b| {
        (a.var_count(), a.equations()).cmp(&(b.var_count(), b.equations()))
    });
    SystemCatalog {
        act: Arc::clone(act),
        n,
        systems,
    }
}

/// One stage of the tower: the amalgamation of the canonical extensions of
/// every catalog system over the previous act.
#[derive(Debug, Clone)]
pub struct ExtensionStage {
    /// 1 for a stage built directly over the base act; higher in a tower.
    pub level: usize,
    /// The variable bound of the catalog used.
    pub bound: usize,
    pub act: Arc<FiniteAct>,
    /// Inclusion of the previous act (the base for level 1) into this stage.
    pub inclusion: Vec<usize>,
    /// The catalog systems that were amalgamated.
    pub systems: Vec<EqSystem>,
    /// Per-system inclusion of its canonical extension into the stage.
    pub system_inclusions: Vec<Vec<usize>>,
}

/// Builds the first stage over `act` with variable bound `n` and verifies,
/// by re-solving, that every catalog system has a solution inside it.
pub fn stage_one(act: &Arc<FiniteAct>, n: usize) -> ExtensionStage {
    let cat = catalog(act, n);
    let mut blocks: Vec<FiniteAct> = Vec::new();
    let mut embeddings: Vec<Vec<usize>> = Vec::new();
    for sys in cat.systems() {
        let complex = SigmaComplex::build(sys.clone());
        assert!(complex.is_consistent(), "catalog systems are consistent");
        embeddings.push(complex.a_embedded_in_a_sigma());
        blocks.push(complex.a_sigma().clone());
    }
    let (glued, system_inclusions) =
        amalgamate(&blocks, act, &embeddings).expect("canonical extensions embed the act");
    let stage_act = Arc::new(glued);
    let inclusion: Vec<usize> = (0..act.size()).collect();
    // every catalog system must solve inside the stage
    for sys in cat.systems() {
        assert!(
            solve_in(sys, &stage_act, &inclusion).is_some(),
            "stage must solve every catalog system"
        );
    }
    ExtensionStage {
        level: 1,
        bound: n,
        act: stage_act,
        inclusion,
        systems: cat.systems,
        system_inclusions,
    }
}

/// Iterates `stage_one` `depth` times; each stage embeds in the next as an
/// index prefix. `cap` bounds the carrier of every stage
/// (`DEFAULT_SIZE_CAP` when None).
pub fn tower(
    act: &Arc<FiniteAct>,
    n: usize,
    depth: usize,
    cap: Option<usize>,
) -> Result<Vec<ExtensionStage>, TowerError> {
    assert!(depth >= 1, "depth must be at least 1");
    let cap = cap.unwrap_or(DEFAULT_SIZE_CAP);
    let mut stages: Vec<ExtensionStage> = Vec::new();
    let mut current = Arc::clone(act);
    for level in 1..=depth {
        let mut stage = stage_one(&current, n);
        stage.level = level;
        if stage.act.size() > cap {
            return Err(TowerError::SizeCapExceeded {
                stage: level,
                size: stage.act.size(),
                cap,
            });
        }
        current = Arc::clone(&stage.act);
        stages.push(stage);
    }
    Ok(stages)
}

/// A morphism extended along canonical extensions: from a morphism
/// θ: B → A and a consistent system Σ over B, the transported system Σ_θ
/// over A (constants pushed through θ) together with the verified
/// morphism θ̄: B(Σ) → A(Σ_θ) fixing variable classes.
#[derive(Debug, Clone)]
pub struct ExtendedMorphism {
    pub sigma_theta: EqSystem,
    pub src_complex: SigmaComplex,
    pub dst_complex: SigmaComplex,
    pub theta_bar: ActMorphism,
}

/// θ: B → A as an index map (`theta[b]` in A). Requires Σ consistent over
/// B; Σ_θ is then consistent over A (asserted after an independent check).
pub fn extend_morphism(
    theta: &[usize],
    target: &Arc<FiniteAct>,
    sigma: &EqSystem,
) -> Result<ExtendedMorphism, TowerError> {
    let source = sigma.act();
    assert_eq!(theta.len(), source.size(), "θ must cover the source act");
    let transported: Vec<Equation> = sigma
        .equations()
        .iter()
        .map(|eq| match *eq {
            Equation::VC { x, s, a } => Equation::vc(x, s, theta[a]),
            other => other,
        })
        .collect();
    let sigma_theta = EqSystem::new(
        Arc::clone(target),
        sigma.variables().to_vec(),
        transported,
    )
    .expect("transported equations stay in range");
    let src_complex = SigmaComplex::build(sigma.clone());
    if !src_complex.is_consistent() {
        return Err(TowerError::InconsistentSystem);
    }
    let dst_complex = SigmaComplex::build(sigma_theta.clone());
    assert!(
        dst_complex.is_consistent(),
        "transport along a morphism preserves consistency"
    );
    let src_nu = src_complex.a_embedded_in_a_sigma();
    let dst_nu = dst_complex.a_embedded_in_a_sigma();
    let mut map = vec![usize::MAX; src_complex.a_sigma().size()];
    for b in 0..source.size() {
        map[src_nu[b]] = dst_nu[theta[b]];
    }
    let m = source.base().size();
    for x in 0..sigma.var_count() {
        for s in 0..m {
            let from = src_complex.free_in_a_sigma(src_complex.free().pair(x, s));
            let to = dst_complex.free_in_a_sigma(dst_complex.free().pair(x, s));
            if map[from] == usize::MAX {
                map[from] = to;
            } else {
                assert_eq!(map[from], to, "θ̄ must be well defined on glued classes");
            }
        }
    }
    let theta_bar = ActMorphism::verified(src_complex.a_sigma(), dst_complex.a_sigma(), map)
        .expect("extended map is action-compatible");
    Ok(ExtendedMorphism {
        sigma_theta,
        src_complex,
        dst_complex,
        theta_bar,
    })
}

/// A chain A₀ ⊆ A₁ ⊆ … where each step adjoins the canonical solution of
/// one consistent system over the previous stage.
#[derive(Debug, Clone)]
pub struct BuildTrace {
    base: Arc<FiniteAct>,
    stages: Vec<Arc<FiniteAct>>,
    complexes: Vec<SigmaComplex>,
    base_embeddings: Vec<Vec<usize>>,
    bound: usize,
}

impl BuildTrace {
    pub fn new(base: Arc<FiniteAct>) -> Self {
        let identity: Vec<usize> = (0..base.size()).collect();
        BuildTrace {
            stages: vec![Arc::clone(&base)],
            base,
            complexes: Vec::new(),
            base_embeddings: vec![identity],
            bound: 0,
        }
    }

    pub fn base(&self) -> &Arc<FiniteAct> {
        &self.base
    }

    pub fn top(&self) -> &Arc<FiniteAct> {
        self.stages.last().expect("trace holds at least the base")
    }

    pub fn stages(&self) -> &[Arc<FiniteAct>] {
        &self.stages
    }

    pub fn systems(&self) -> impl Iterator<Item = &EqSystem> {
        self.complexes.iter().map(|c| c.system())
    }

    /// Largest variable count among the adjoined systems.
    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Embedding of the base act into the top stage.
    pub fn base_embedding(&self) -> &[usize] {
        self.base_embeddings.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.complexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complexes.is_empty()
    }

    /// Adjoins the canonical extension of `sigma`, which must be a
    /// consistent system over the current top stage.
    pub fn extend(&mut self, sigma: EqSystem) -> Result<(), TowerError> {
        assert_eq!(
            **sigma.act(),
            **self.top(),
            "system must live over the current top stage"
        );
        let complex = SigmaComplex::build(sigma);
        if !complex.is_consistent() {
            return Err(TowerError::InconsistentSystem);
        }
        let nu = complex.a_embedded_in_a_sigma();
        let prev = self.base_embedding().to_vec();
        self.base_embeddings.push(prev.iter().map(|&b| nu[b]).collect());
        self.stages.push(Arc::new(complex.a_sigma().clone()));
        self.bound = self.bound.max(complex.system().var_count());
        self.complexes.push(complex);
        Ok(())
    }
}

/// Folds a retraction of the trace's top stage onto its base, step by
/// step: each adjoined system is transported through the retraction built
/// so far, solved in the base, and the solution absorbed into the next
/// retraction. Requires the base to solve every transported system (which
/// holds when it is absolutely pure at the trace's variable bound);
/// otherwise reports the failing step.
pub fn retract_through_build(trace: &BuildTrace) -> Result<ActMorphism, TowerError> {
    let base = trace.base();
    let id = identity_embedding(base);
    let mut retraction: Vec<usize> = (0..base.size()).collect();
    for (step, complex) in trace.complexes.iter().enumerate() {
        let stage = &trace.stages[step];
        let extended = extend_morphism(&retraction, base, complex.system())?;
        let solution = solve_in(&extended.sigma_theta, base, &id)
            .ok_or(TowerError::PurityPreconditionFailed { stage: step })?;
        let nu = complex.a_embedded_in_a_sigma();
        let mut next = vec![usize::MAX; complex.a_sigma().size()];
        for b in 0..stage.size() {
            next[nu[b]] = retraction[b];
        }
        let m = base.base().size();
        for x in 0..complex.system().var_count() {
            for s in 0..m {
                let from = complex.free_in_a_sigma(complex.free().pair(x, s));
                let to = base.act(solution[x], s);
                if next[from] == usize::MAX {
                    next[from] = to;
                } else {
                    assert_eq!(next[from], to, "solution must respect the gluing");
                }
            }
        }
        retraction = next;
    }
    let morphism = ActMorphism::verified(trace.top(), base, retraction)
        .expect("folded retraction is action-compatible");
    for (a, &img) in trace.base_embedding().iter().enumerate() {
        assert_eq!(morphism.apply(img), a, "retraction must fix the base");
    }
    Ok(morphism)
}

/// Finite-shadow report for the purity equivalences: almost purity of the
/// act, the stage-one retraction criterion, two-variable absolute purity
/// of stage one, and whether stage one retracts from the bound-two stage
/// built over it. The infinite-limit conditions are not decided here; the
/// booleans below are their finite truncations only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem57Report {
    pub almost_pure: bool,
    pub base_retracts_from_stage_one: bool,
    pub stage_one_size: usize,
    pub stage_one_two_absolutely_pure: bool,
    pub bound_two_stage_size: usize,
    pub stage_one_retracts_from_bound_two: bool,
}

pub fn theorem57_check(
    act: &Arc<FiniteAct>,
    cap: Option<usize>,
) -> Result<Theorem57Report, TowerError> {
    let cap = cap.unwrap_or(DEFAULT_SIZE_CAP);
    let almost_pure = is_almost_pure(act);
    let s1 = stage_one(act, 1);
    if s1.act.size() > cap {
        return Err(TowerError::SizeCapExceeded {
            stage: 1,
            size: s1.act.size(),
            cap,
        });
    }
    let base_retracts_from_stage_one = find_retraction(&s1.act, &s1.inclusion).is_some();
    let stage_one_two_absolutely_pure = is_n_absolutely_pure(&s1.act, 2).is_ok();
    let s2 = stage_one(&s1.act, 2);
    if s2.act.size() > cap {
        return Err(TowerError::SizeCapExceeded {
            stage: 2,
            size: s2.act.size(),
            cap,
        });
    }
    let stage_one_retracts_from_bound_two = find_retraction(&s2.act, &s2.inclusion).is_some();
    Ok(Theorem57Report {
        almost_pure,
        base_retracts_from_stage_one,
        stage_one_size: s1.act.size(),
        stage_one_two_absolutely_pure,
        bound_two_stage_size: s2.act.size(),
        stage_one_retracts_from_bound_two,
    })
}
