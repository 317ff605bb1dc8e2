use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{DefiniteClause, Literal, Program, Term};
use crate::modes::{
    mode_assignments, CoveragePolicy, LambdaMuSeq, Language, LmPair, Mode, ModeSet, Recall, TypeName, TypeSystem,
    DEFAULT_CAP,
};

use super::engine::{Engine, KnowledgeBase, DEFAULT_BUDGET};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationConfig {
    /// Depth limit `d`.
    pub depth: u32,
    /// Recall for modes declared without one.
    pub default_recall: Recall,
    /// Deduction steps per query.
    pub budget: u64,
    /// Optional bound on new body literals per depth layer.
    pub literal_cap: Option<usize>,
    /// Bound on λμ-sequences explored per clause downstream.
    pub cap: usize,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig {
            depth: 2,
            default_recall: Recall::Unbounded,
            budget: DEFAULT_BUDGET,
            literal_cap: None,
            cap: DEFAULT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaturationError {
    #[error("example is not ground: {0}")]
    NonGround(String),
    #[error("no λμ-sequence orders the saturated clause for {0}")]
    NoWitness(String),
}

/// A depth-limited bottom clause together with a λμ-sequence that shows it
/// belongs to the mode language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottomClause {
    pub clause: DefiniteClause,
    pub witness: LambdaMuSeq,
    /// Saturation layer at which each body literal entered, parallel to
    /// `clause.body`.
    pub layers: Vec<u32>,
    /// False when a query ran out of budget or a literal cap was hit.
    pub complete: bool,
    /// False when some head output-term is never produced by the body; the
    /// witness then only holds under the relaxed coverage policy.
    pub head_outputs_covered: bool,
}

impl BottomClause {
    pub fn policy(&self) -> CoveragePolicy {
        if self.head_outputs_covered {
            CoveragePolicy::Strict
        } else {
            CoveragePolicy::RelaxedHeadOutputs
        }
    }

    /// Mode under which each body literal was derived.
    pub fn body_modes(&self) -> HashMap<&Literal, &Mode> {
        self.witness.pairs()[1..].iter().map(|p| (&p.literal, &p.mode)).collect()
    }
}

impl fmt::Display for BottomClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.clause)
    }
}

/// Background knowledge `B` and modes `M`, ready to saturate examples.
pub struct Saturator {
    kb: Arc<KnowledgeBase>,
    modes: ModeSet,
    config: SaturationConfig,
}

impl Saturator {
    pub fn new(background: &Program, modes: ModeSet, config: SaturationConfig) -> Self {
        Saturator {
            kb: Arc::new(KnowledgeBase::new(background)),
            modes,
            config,
        }
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn config(&self) -> &SaturationConfig {
        &self.config
    }

    /// A deduction engine over `B` alone.
    pub fn engine(&self) -> Engine {
        Engine::new(self.kb.clone()).with_budget(self.config.budget)
    }

    /// Type definitions over `B` plus the body facts of `e`.
    pub fn types_for(&self, e: &DefiniteClause) -> TypeSystem {
        let local = KnowledgeBase::from_clauses(&e.body.iter().cloned().map(DefiniteClause::fact).collect::<Vec<_>>());
        TypeSystem::new(Engine::with_local(self.kb.clone(), local).with_budget(self.config.budget))
    }

    pub fn language<'a>(&'a self, types: &'a TypeSystem) -> Language<'a> {
        Language::new(&self.modes, types, self.config.depth)
    }

    /// `⊥_{B,M,d}(e)`; `Ok(None)` is the empty clause (no modeh matches).
    pub fn saturate(&self, e: &DefiniteClause) -> Result<Option<BottomClause>, SaturationError> {
        let types = self.types_for(e);
        self.saturate_with(e, &types)
    }

    pub fn saturate_with(&self, e: &DefiniteClause, types: &TypeSystem) -> Result<Option<BottomClause>, SaturationError> {
        if !e.is_ground() {
            return Err(SaturationError::NonGround(e.head.to_string()));
        }
        let lang = self.language(types);
        let heads: Vec<Mode> = self
            .modes
            .heads()
            .filter(|m| lang.well_typed(&e.head, m))
            .cloned()
            .collect();
        if heads.is_empty() {
            return Ok(None);
        }

        let mut registry: Vec<(Term, TypeName)> = Vec::new();
        let mut registered: HashSet<(Term, TypeName)> = HashSet::new();
        for h in &heads {
            for (t, ty, _) in h.io_terms(&e.head).inputs {
                if registered.insert((t.clone(), ty.clone())) {
                    registry.push((t, ty));
                }
            }
        }

        let mut body: Vec<Literal> = Vec::new();
        let mut provenance: Vec<(Mode, u32)> = Vec::new();
        let mut in_body: HashSet<Literal> = HashSet::new();
        let mut processed: HashSet<(usize, Vec<Term>)> = HashSet::new();
        let mut complete = true;

        for layer in 1..=self.config.depth {
            let visible = registry.len();
            let mut added = 0usize;
            for (mi, mode) in self.modes.all().iter().enumerate() {
                if mode.is_head() {
                    continue;
                }
                let in_types: Vec<TypeName> = mode
                    .places()
                    .into_iter()
                    .filter(|p| p.role == crate::modes::Role::Input)
                    .map(|p| p.ty)
                    .collect();
                let pools: Vec<Vec<Term>> = in_types
                    .iter()
                    .map(|ty| registry[..visible].iter().filter(|(_, g)| g == ty).map(|(t, _)| t.clone()).collect())
                    .collect();
                if pools.iter().any(Vec::is_empty) {
                    continue;
                }
                let recall = match mode.recall {
                    Recall::Default => self.config.default_recall,
                    r => r,
                };
                let mut choice = vec![0usize; pools.len()];
                loop {
                    let binding: Vec<Term> = choice.iter().zip(&pools).map(|(&c, p)| p[c].clone()).collect();
                    if processed.insert((mi, binding.clone())) {
                        let goal = mode.goal(&binding);
                        let answers = types.engine().borrow_mut().query_lenient(&goal);
                        complete &= answers.complete;
                        let mut admitted = 0u32;
                        for lit in answers.literals {
                            if let Recall::Bounded(n) = recall {
                                if admitted >= n {
                                    break;
                                }
                            }
                            if !lang.well_typed(&lit, mode) {
                                continue;
                            }
                            admitted += 1;
                            let io = mode.io_terms(&lit);
                            if lit != e.head && !in_body.contains(&lit) {
                                if self.config.literal_cap.is_some_and(|cap| added >= cap) {
                                    complete = false;
                                    continue;
                                }
                                added += 1;
                                in_body.insert(lit.clone());
                                body.push(lit);
                                provenance.push((mode.clone(), layer));
                            }
                            for (t, ty, _) in io.outputs {
                                if registered.insert((t.clone(), ty.clone())) {
                                    registry.push((t, ty));
                                }
                            }
                        }
                    }
                    if !next_choice(&mut choice, &pools) {
                        break;
                    }
                }
            }
        }

        let clause = DefiniteClause::new(e.head.clone(), body);
        let layers = provenance.iter().map(|(_, l)| *l).collect();
        let (witness, covered) = self
            .witness(&clause, &heads, &provenance, &lang)
            .ok_or_else(|| SaturationError::NoWitness(e.head.to_string()))?;
        Ok(Some(BottomClause {
            clause,
            witness,
            layers,
            complete,
            head_outputs_covered: covered,
        }))
    }

    fn witness(
        &self,
        clause: &DefiniteClause,
        heads: &[Mode],
        provenance: &[(Mode, u32)],
        lang: &Language<'_>,
    ) -> Option<(LambdaMuSeq, bool)> {
        for (policy, covered) in [(CoveragePolicy::Strict, true), (CoveragePolicy::RelaxedHeadOutputs, false)] {
            let lang = lang.with_policy(policy);
            for h in heads {
                let mut pairs = vec![LmPair::new(clause.head.clone(), h.clone())];
                pairs.extend(
                    clause
                        .body
                        .iter()
                        .zip(provenance)
                        .map(|(l, (m, _))| LmPair::new(l.clone(), m.clone())),
                );
                let seq = LambdaMuSeq(pairs);
                if crate::modes::is_lambda_mu_sequence(clause, &seq, &lang) {
                    return Some((seq, covered));
                }
            }
            if let Some(seq) = mode_assignments(clause, &lang, 1).sequences.into_iter().next() {
                return Some((seq, covered));
            }
        }
        None
    }
}

fn next_choice(choice: &mut [usize], pools: &[Vec<Term>]) -> bool {
    for i in (0..choice.len()).rev() {
        choice[i] += 1;
        if choice[i] < pools[i].len() {
            return true;
        }
        choice[i] = 0;
    }
    false
}
