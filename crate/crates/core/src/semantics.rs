//! Neighbourhood D-models built from an argumentation theory.
//!
//! Worlds are the nonempty subsets of the theory's D-extension, encoded as
//! bitmasks over the sorted extension. Sets of worlds are bitsets indexed by
//! those masks, so intersecting with a generated submodel's domain is a
//! bitwise `and`. Neighbourhoods refer to an interned pool of world sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::argumentation::{ArgId, ArgumentationError, Framework};
use crate::engine::{DExtensionSet, DefeatMode};
use crate::explanation::{is_explanation_in, Explanation};
use crate::model::{ArgumentationTheory, Literal, Violation};

pub const DEFAULT_WORLD_CAP: usize = 20;
const HARD_WORLD_CAP: usize = 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelOptions {
    /// Largest D-extension for which worlds are materialised.
    pub world_cap: usize,
    pub defeat: DefeatMode,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions {
            world_cap: DEFAULT_WORLD_CAP,
            defeat: DefeatMode::Individual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("superiority or dependency graph is cyclic")]
    CyclicSetup,
    #[error("D-extension has {size} literals, above the world cap of {cap}")]
    WorldCapExceeded { size: usize, cap: usize },
    #[error("unknown world")]
    UnknownWorld,
    #[error("argument `{0}` does not belong to this model's theory")]
    ForeignArgument(String),
    #[error("world set is not a subset of the model's worlds")]
    NotASubset,
    #[error("the antecedent fact set is inconsistent: {}", clashes.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", "))]
    InconsistentFPlus { clashes: Vec<Literal> },
    #[error("not an explanation in the source framework")]
    NotAnExplanation,
    #[error("invalid argumentation theory: {0:?}")]
    InvalidTheory(Vec<Violation>),
    #[error(transparent)]
    Argumentation(#[from] ArgumentationError),
}

/// A world, as a bitmask over the model's universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Literal(Literal),
    Not(Box<Formula>),
    Obligation(Literal),
    Permission(Literal),
}

impl Formula {
    /// `OBL lit`, `PERM lit`, `lit`, `-lit`, and `!formula` for negation.
    pub fn parse(text: &str) -> Option<Formula> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix('!') {
            return Formula::parse(rest).map(|f| Formula::Not(Box::new(f)));
        }
        let mut words = text.split_whitespace();
        let head = words.next()?;
        match head {
            "OBL" | "PERM" => {
                let lit = Literal::parse(words.next()?)?;
                if words.next().is_some() {
                    return None;
                }
                Some(if head == "OBL" {
                    Formula::Obligation(lit)
                } else {
                    Formula::Permission(lit)
                })
            }
            _ => {
                if let Some(rest) = text.strip_prefix('-') {
                    let rest = rest.trim_start();
                    if rest.starts_with("OBL ")
                        || rest.starts_with("PERM ")
                        || rest.starts_with('!')
                    {
                        return Formula::parse(rest).map(|f| Formula::Not(Box::new(f)));
                    }
                }
                Literal::parse(text).map(Formula::Literal)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Literal(l) => write!(f, "{l}"),
            Formula::Not(inner) => write!(f, "!{inner}"),
            Formula::Obligation(l) => write!(f, "OBL {l}"),
            Formula::Permission(l) => write!(f, "PERM {l}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NeighborhoodModel {
    theory: ArgumentationTheory,
    universe: Vec<Literal>,
    domain: FixedBitSet,
    pool: Vec<FixedBitSet>,
    neighborhoods: Vec<Vec<usize>>,
}

struct CompiledRule {
    label: String,
    /// `None` when some antecedent lies outside the universe.
    body: Option<u32>,
    head: Literal,
    supportive: bool,
}

fn mask_of(universe: &[Literal], lits: &BTreeSet<Literal>) -> Option<u32> {
    lits.iter().try_fold(0u32, |m, l| {
        universe.binary_search(l).ok().map(|i| m | (1 << i))
    })
}

/// Builds the neighbourhood D-model of `theory`.
///
/// For rule `r_j`, `x S_j y` iff `A(r_j) ⊆ x`, `C(r_j) ∈ y`, and every rule
/// `s` for the complement is inapplicable in `x` or beaten; under
/// [`DefeatMode::Individual`] only `r_j > s` beats `s`, under
/// [`DefeatMode::Team`] any rule (defeaters included) for `C(r_j)` applicable in `x` and
/// superior to `s` does. `N(w)` collects the nonempty unions of the `S_j(w)`
/// over rules with equal conclusions.
pub fn build_d_model(
    theory: &ArgumentationTheory,
    options: ModelOptions,
) -> Result<NeighborhoodModel, SemanticsError> {
    if !theory.is_acyclic_setup() {
        return Err(SemanticsError::CyclicSetup);
    }
    let extension = DExtensionSet::of(theory);
    let cap = options.world_cap.min(HARD_WORLD_CAP);
    if extension.len() > cap {
        return Err(SemanticsError::WorldCapExceeded {
            size: extension.len(),
            cap,
        });
    }
    let universe: Vec<Literal> = extension.literals.into_iter().collect();
    let size = 1usize << universe.len();
    let mut domain = FixedBitSet::with_capacity(size);
    domain.insert_range(1..size);

    let rules: Vec<CompiledRule> = theory
        .rules()
        .map(|r| CompiledRule {
            label: r.label.clone(),
            body: mask_of(&universe, &r.antecedents),
            head: r.consequent.clone(),
            supportive: r.is_supportive(),
        })
        .collect();
    let applicable = |r: &CompiledRule, w: u32| r.body.is_some_and(|b| b & w == b);

    let mut pool = Vec::new();
    let mut class_of: HashMap<&Literal, usize> = HashMap::new();
    for (i, lit) in universe.iter().enumerate() {
        if rules.iter().any(|r| r.supportive && &r.head == lit) {
            let mut set = FixedBitSet::with_capacity(size);
            for m in 1..size {
                if m & (1 << i) != 0 {
                    set.insert(m);
                }
            }
            class_of.insert(lit, pool.len());
            pool.push(set);
        }
    }

    let mut neighborhoods = vec![Vec::new(); size];
    for w in 1..size as u32 {
        let mut active: Vec<usize> = rules
            .iter()
            .filter(|r| r.supportive && applicable(r, w))
            .filter(|r| {
                let opposite = r.head.complement();
                rules.iter().filter(|s| s.head == opposite).all(|s| {
                    !applicable(s, w)
                        || match options.defeat {
                            DefeatMode::Individual => theory.is_superior(&r.label, &s.label),
                            DefeatMode::Team => rules.iter().any(|t| {
                                t.head == r.head
                                    && applicable(t, w)
                                    && theory.is_superior(&t.label, &s.label)
                            }),
                        }
                })
            })
            .filter_map(|r| class_of.get(&r.head).copied())
            .collect();
        active.sort_unstable();
        active.dedup();
        neighborhoods[w as usize] = active;
    }

    Ok(NeighborhoodModel {
        theory: theory.clone(),
        universe,
        domain,
        pool,
        neighborhoods,
    })
}

impl NeighborhoodModel {
    pub fn theory(&self) -> &ArgumentationTheory {
        &self.theory
    }

    /// The D-extension the worlds are drawn from, sorted.
    pub fn universe(&self) -> &[Literal] {
        &self.universe
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> + '_ {
        self.domain.ones().map(|m| World(m as u32))
    }

    pub fn world_count(&self) -> usize {
        self.domain.count_ones(..)
    }

    pub fn domain(&self) -> &FixedBitSet {
        &self.domain
    }

    pub fn contains(&self, w: World) -> bool {
        self.domain.contains(w.0 as usize)
    }

    pub fn world(&self, literals: &[Literal]) -> Option<World> {
        let set: BTreeSet<Literal> = literals.iter().cloned().collect();
        let w = World(mask_of(&self.universe, &set)?);
        self.contains(w).then_some(w)
    }

    /// `E(D)` itself, when it is a world of this model.
    pub fn distinguished_world(&self) -> Option<World> {
        if self.universe.is_empty() {
            return None;
        }
        let w = World(((1u64 << self.universe.len()) - 1) as u32);
        self.contains(w).then_some(w)
    }

    pub fn world_literals(&self, w: World) -> Vec<Literal> {
        self.universe
            .iter()
            .enumerate()
            .filter(|(i, _)| w.0 & (1 << i) != 0)
            .map(|(_, l)| l.clone())
            .collect()
    }

    fn holds_literal(&self, w: World, l: &Literal) -> bool {
        self.universe
            .binary_search(l)
            .is_ok_and(|i| w.0 & (1 << i) != 0)
    }

    /// The members of `N(w)`.
    pub fn neighborhood(&self, w: World) -> impl Iterator<Item = &FixedBitSet> + '_ {
        self.neighborhoods[w.0 as usize]
            .iter()
            .map(|&i| &self.pool[i])
    }

    pub fn in_neighborhood(&self, w: World, set: &FixedBitSet) -> bool {
        self.neighborhood(w).any(|y| y == set)
    }

    /// `||l||`, by membership.
    pub fn literal_truth_set(&self, l: &Literal) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.domain.len());
        if let Ok(i) = self.universe.binary_search(l) {
            for m in self.domain.ones() {
                if m & (1 << i) != 0 {
                    set.insert(m);
                }
            }
        }
        set
    }

    /// `v(p)`: worlds containing the positive literal `p`.
    pub fn valuation(&self, atom: &str) -> FixedBitSet {
        self.literal_truth_set(&Literal::pos(atom))
    }

    pub fn eval(&self, w: World, f: &Formula) -> Result<bool, SemanticsError> {
        if !self.contains(w) {
            return Err(SemanticsError::UnknownWorld);
        }
        Ok(self.eval_at(w, f))
    }

    fn eval_at(&self, w: World, f: &Formula) -> bool {
        match f {
            Formula::Literal(l) => self.holds_literal(w, l),
            Formula::Not(inner) => !self.eval_at(w, inner),
            Formula::Obligation(l) => self.in_neighborhood(w, &self.literal_truth_set(l)),
            Formula::Permission(l) => {
                let mut rest = self.domain.clone();
                rest.difference_with(&self.literal_truth_set(l));
                !self.in_neighborhood(w, &rest)
            }
        }
    }

    pub fn truth_set(&self, f: &Formula) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.domain.len());
        for w in self.worlds() {
            if self.eval_at(w, f) {
                set.insert(w.0 as usize);
            }
        }
        set
    }

    fn check_framework(&self, fw: &Framework) -> Result<(), SemanticsError> {
        if fw.theory() != &self.theory {
            let name = fw
                .arguments()
                .first()
                .map(|a| a.id.clone())
                .unwrap_or_default();
            return Err(SemanticsError::ForeignArgument(name));
        }
        Ok(())
    }

    /// The leveled world-existence condition for an argument: for each
    /// height of its plain subarguments there is one world holding all of
    /// their premises in which each of their conclusions' truth sets is a
    /// neighbourhood. Factual arguments satisfy it vacuously.
    pub fn verify_argument_condition(
        &self,
        fw: &Framework,
        a: ArgId,
    ) -> Result<bool, SemanticsError> {
        self.check_framework(fw)?;
        fn height_of(fw: &Framework, id: ArgId, memo: &mut BTreeMap<ArgId, usize>) -> usize {
            if let Some(&h) = memo.get(&id) {
                return h;
            }
            let children = fw.get(id).direct_subarguments().to_vec();
            let h = children
                .into_iter()
                .map(|c| height_of(fw, c, memo) + 1)
                .max()
                .unwrap_or(0);
            memo.insert(id, h);
            h
        }
        let mut height: BTreeMap<ArgId, usize> = BTreeMap::new();
        for sub in fw.subarguments(a) {
            height_of(fw, sub, &mut height);
        }
        let mut levels: BTreeMap<usize, Vec<ArgId>> = BTreeMap::new();
        for (sub, h) in height {
            if h > 0 {
                levels.entry(h).or_default().push(sub);
            }
        }
        Ok(levels.values().all(|nodes| {
            let targets: Vec<(Vec<Literal>, FixedBitSet)> = nodes
                .iter()
                .map(|&n| {
                    let arg = fw.get(n);
                    let premises = arg
                        .direct_subarguments()
                        .iter()
                        .map(|c| fw.get(*c).conclusion.clone())
                        .collect();
                    (premises, self.literal_truth_set(&arg.conclusion))
                })
                .collect();
            self.worlds().any(|w| {
                targets.iter().all(|(premises, conclusion)| {
                    premises.iter().all(|p| self.holds_literal(w, p))
                        && self.in_neighborhood(w, conclusion)
                })
            })
        }))
    }

    fn explanation_ids(
        &self,
        fw: &Framework,
        e: &Explanation,
    ) -> Result<Vec<ArgId>, SemanticsError> {
        self.check_framework(fw)?;
        e.argument_ids
            .iter()
            .map(|id| {
                fw.lookup(id)
                    .ok_or_else(|| SemanticsError::ForeignArgument(id.clone()))
            })
            .collect()
    }

    pub fn verify_explanation_condition(
        &self,
        fw: &Framework,
        e: &Explanation,
    ) -> Result<bool, SemanticsError> {
        for a in self.explanation_ids(fw, e)? {
            if !self.verify_argument_condition(fw, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction to `worlds`: `N_X(w) = { Y ∩ X : Y ∈ N(w) }`.
    pub fn generated_submodel(
        &self,
        worlds: &FixedBitSet,
    ) -> Result<NeighborhoodModel, SemanticsError> {
        if worlds.len() != self.domain.len() || !worlds.is_subset(&self.domain) {
            return Err(SemanticsError::NotASubset);
        }
        let mut pool: Vec<FixedBitSet> = Vec::new();
        let mut interned: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut neighborhoods = vec![Vec::new(); self.neighborhoods.len()];
        for w in worlds.ones() {
            let mut members: Vec<usize> = self.neighborhoods[w]
                .iter()
                .map(|&i| {
                    let mut y = self.pool[i].clone();
                    y.intersect_with(worlds);
                    *interned.entry(y.clone()).or_insert_with(|| {
                        pool.push(y);
                        pool.len() - 1
                    })
                })
                .collect();
            members.sort_unstable();
            members.dedup();
            neighborhoods[w] = members;
        }
        Ok(NeighborhoodModel {
            theory: self.theory.clone(),
            universe: self.universe.clone(),
            domain: worlds.clone(),
            pool,
            neighborhoods,
        })
    }

    /// Checks `Y ∈ N(w) ⇔ Y ∩ X ∈ N_X(w)` at every retained world for the
    /// sets the modal language can name: every neighbourhood member and
    /// every literal truth set and its complement.
    pub fn certify_generated(&self, sub: &NeighborhoodModel) -> bool {
        let mut family: Vec<FixedBitSet> = self.pool.clone();
        for l in &self.universe {
            for lit in [l.clone(), l.complement()] {
                let set = self.literal_truth_set(&lit);
                let mut rest = self.domain.clone();
                rest.difference_with(&set);
                family.push(set);
                family.push(rest);
            }
        }
        family.push(FixedBitSet::with_capacity(self.domain.len()));
        family.push(self.domain.clone());
        sub.worlds().all(|w| {
            family.iter().all(|y| {
                let mut cut = y.clone();
                cut.intersect_with(&sub.domain);
                self.in_neighborhood(w, y) == sub.in_neighborhood(w, &cut)
            })
        })
    }

    /// Drops every world containing a fact whose factual argument is not in
    /// the explanation.
    pub fn explanation_submodel(
        &self,
        fw: &Framework,
        e: &Explanation,
    ) -> Result<NeighborhoodModel, SemanticsError> {
        self.explanation_ids(fw, e)?;
        let unused: Vec<&Literal> = self
            .theory
            .facts()
            .iter()
            .filter(|f| !e.argument_ids.contains(&f.to_string()))
            .collect();
        let mut keep = self.domain.clone();
        for w in self.worlds() {
            if unused.iter().any(|f| self.holds_literal(w, f)) {
                keep.set(w.0 as usize, false);
            }
        }
        self.generated_submodel(&keep)
    }

    /// The explanation submodel further restricted to worlds built only from
    /// the explanation's own conclusions.
    pub fn explanation_core_submodel(
        &self,
        fw: &Framework,
        e: &Explanation,
    ) -> Result<NeighborhoodModel, SemanticsError> {
        let ids = self.explanation_ids(fw, e)?;
        let conclusions: BTreeSet<Literal> =
            ids.iter().map(|&a| fw.get(a).conclusion.clone()).collect();
        let base = self.explanation_submodel(fw, e)?;
        let mut keep = base.domain.clone();
        for w in base.worlds() {
            if self
                .world_literals(w)
                .iter()
                .any(|l| !conclusions.contains(l))
            {
                keep.set(w.0 as usize, false);
            }
        }
        self.generated_submodel(&keep)
    }

    /// A representation independent of world encoding, for comparing
    /// models built over different universes.
    pub fn canonical(&self) -> CanonicalModel {
        let lits = |set: &FixedBitSet| -> BTreeSet<Vec<Literal>> {
            set.ones()
                .map(|m| self.world_literals(World(m as u32)))
                .collect()
        };
        let worlds = self
            .worlds()
            .map(|w| {
                let n = self.neighborhood(w).map(lits).collect();
                (self.world_literals(w), n)
            })
            .collect();
        let atoms: BTreeSet<&str> = self.universe.iter().map(|l| l.atom()).collect();
        let valuation = atoms
            .into_iter()
            .map(|a| (a.to_string(), lits(&self.valuation(a))))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        CanonicalModel { worlds, valuation }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalModel {
    pub worlds: BTreeMap<Vec<Literal>, BTreeSet<BTreeSet<Vec<Literal>>>>,
    pub valuation: BTreeMap<String, BTreeSet<Vec<Literal>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticStability {
    /// Antecedent literals that no rule concludes, added as facts.
    pub added_facts: BTreeSet<Literal>,
    pub explanation_holds: bool,
    pub submodels_equal: bool,
}

impl SemanticStability {
    pub fn holds(&self) -> bool {
        self.explanation_holds && self.submodels_equal
    }
}

/// Adds every unconcluded antecedent literal as a fact, checks that `e`
/// still explains its target there, and compares the explanation core
/// submodels of both theories.
pub fn semantic_stability_check(
    fw: &Framework,
    e: &Explanation,
    options: ModelOptions,
) -> Result<SemanticStability, SemanticsError> {
    let theory = fw.theory();
    if !is_explanation_in(fw, &fw.justification(), e) {
        return Err(SemanticsError::NotAnExplanation);
    }
    let concluded: BTreeSet<&str> = theory.rules().map(|r| r.consequent.atom()).collect();
    let added: BTreeSet<Literal> = theory
        .rules()
        .flat_map(|r| r.antecedents.iter())
        .filter(|a| !concluded.contains(a.atom()) && !theory.facts().contains(*a))
        .cloned()
        .collect();
    let mut facts = theory.facts().clone();
    facts.extend(added.iter().cloned());
    let clashes: Vec<Literal> = facts
        .iter()
        .filter(|l| l.is_positive() && facts.contains(&l.complement()))
        .cloned()
        .collect();
    if !clashes.is_empty() {
        return Err(SemanticsError::InconsistentFPlus { clashes });
    }
    let plus = ArgumentationTheory::validate(theory.with_facts(facts))
        .map_err(SemanticsError::InvalidTheory)?;
    let fw_plus = Framework::with_mode(&plus, fw.mode())?;
    let explanation_holds = is_explanation_in(&fw_plus, &fw_plus.justification(), e);
    let submodels_equal = if explanation_holds {
        let m = build_d_model(theory, options)?;
        let m_plus = build_d_model(&plus, options)?;
        m.explanation_core_submodel(fw, e)?.canonical()
            == m_plus.explanation_core_submodel(&fw_plus, e)?.canonical()
    } else {
        false
    };
    Ok(SemanticStability {
        added_facts: added,
        explanation_holds,
        submodels_equal,
    })
}
