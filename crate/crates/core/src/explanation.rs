//! Minimal normative explanations and their stability under added facts.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::argumentation::{ArgId, ArgSet, ArgumentationError, Framework, JustificationResult};
use crate::model::{is_consistent, ArgumentationTheory, DefeasibleTheory, Literal};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExplanationMode {
    /// Only the defining conditions: the target argument plus whatever is
    /// needed to make it acceptable.
    Literal,
    /// Also closed under the target's subarguments, with every member's
    /// attackers undercut.
    #[default]
    SupportClosed,
}

impl fmt::Display for ExplanationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExplanationMode::Literal => "literal",
            ExplanationMode::SupportClosed => "support-closed",
        })
    }
}

/// A set of arguments, by canonical id, explaining `target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Explanation {
    pub target: Literal,
    pub argument_ids: BTreeSet<String>,
    pub mode: ExplanationMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplanationError {
    #[error("{{{}}} is not a minimal explanation for `{target}`", ids.join(", "))]
    NotAnExplanation { target: Literal, ids: Vec<String> },
    #[error(transparent)]
    Argumentation(#[from] ArgumentationError),
}

/// Whether `set` meets the explanation conditions for `target`.
fn satisfies(
    fw: &Framework,
    just: &JustificationResult,
    set: &ArgSet,
    target: &Literal,
    mode: ExplanationMode,
) -> bool {
    set.iter().any(|&a| {
        if fw.get(a).conclusion != *target || !just.is_justified(a) || !fw.acceptable(a, set) {
            return false;
        }
        match mode {
            ExplanationMode::Literal => true,
            ExplanationMode::SupportClosed => {
                fw.proper_subarguments(a).is_subset(set)
                    && set.iter().all(|&m| fw.acceptable(m, set))
            }
        }
    })
}

/// Justified arguments that may be needed to make the members of `core`
/// acceptable: subarguments of anything that undercuts one of their
/// attackers. In support-closed mode new members need defending too.
fn relevant_pool(
    fw: &Framework,
    just: &JustificationResult,
    core: &ArgSet,
    mode: ExplanationMode,
) -> ArgSet {
    let mut pool = core.clone();
    let mut todo: Vec<ArgId> = core.iter().copied().collect();
    while let Some(x) = todo.pop() {
        for &attacker in fw.attackers(x) {
            for &sub in fw.proper_subarguments(attacker) {
                for &c in fw.attackers(sub) {
                    for &cand in fw.proper_subarguments(c) {
                        if just.is_justified(cand)
                            && pool.insert(cand)
                            && mode == ExplanationMode::SupportClosed
                        {
                            todo.push(cand);
                        }
                    }
                }
            }
        }
    }
    pool
}

fn combinations(
    items: &[ArgId],
    k: usize,
    start: usize,
    acc: &mut Vec<ArgId>,
    out: &mut dyn FnMut(&[ArgId]),
) {
    if acc.len() == k {
        out(acc);
        return;
    }
    for i in start..items.len() {
        if items.len() - i < k - acc.len() {
            break;
        }
        acc.push(items[i]);
        combinations(items, k, i + 1, acc, out);
        acc.pop();
    }
}

/// All ⊆-minimal explanations for `target`, drawn from justified arguments.
/// Empty iff `target` has no justified argument.
pub fn find_explanations(
    fw: &Framework,
    just: &JustificationResult,
    target: &Literal,
    mode: ExplanationMode,
) -> Vec<Explanation> {
    let mut found: Vec<ArgSet> = Vec::new();
    for a in fw.arguments_for(target).filter(|&a| just.is_justified(a)) {
        let core: ArgSet = match mode {
            ExplanationMode::Literal => ArgSet::from([a]),
            ExplanationMode::SupportClosed => fw.subarguments(a),
        };
        let pool = relevant_pool(fw, just, &core, mode);
        let rest: Vec<ArgId> = pool.difference(&core).copied().collect();
        let mut local: Vec<ArgSet> = Vec::new();
        for k in 0..=rest.len() {
            combinations(&rest, k, 0, &mut Vec::new(), &mut |combo| {
                let mut set = core.clone();
                set.extend(combo.iter().copied());
                if local.iter().any(|f| f.is_subset(&set)) {
                    return;
                }
                if satisfies(fw, just, &set, target, mode) {
                    local.push(set);
                }
            });
        }
        found.extend(local);
    }
    found.sort();
    found.dedup();
    let minimal: Vec<&ArgSet> = found
        .iter()
        .filter(|s| !found.iter().any(|o| o != *s && o.is_subset(s)))
        .collect();
    let mut out: Vec<Explanation> = minimal
        .into_iter()
        .map(|s| Explanation {
            target: target.clone(),
            argument_ids: s.iter().map(|&i| fw.get(i).id.clone()).collect(),
            mode,
        })
        .collect();
    out.sort();
    out
}

/// Convenience wrapper building the framework of `theory` first.
pub fn explain(
    theory: &ArgumentationTheory,
    target: &Literal,
    mode: ExplanationMode,
) -> Result<Vec<Explanation>, ArgumentationError> {
    let fw = Framework::new(theory)?;
    let just = fw.justification();
    Ok(find_explanations(&fw, &just, target, mode))
}

/// Whether `e` is one of the minimal explanations of its target in `fw`,
/// decided without enumerating the others.
pub fn is_explanation_in(fw: &Framework, just: &JustificationResult, e: &Explanation) -> bool {
    let Some(set) = e
        .argument_ids
        .iter()
        .map(|id| fw.lookup(id))
        .collect::<Option<ArgSet>>()
    else {
        return false;
    };
    if !set.iter().all(|&a| just.is_justified(a)) || !satisfies(fw, just, &set, &e.target, e.mode) {
        return false;
    }
    let members: Vec<ArgId> = set.iter().copied().collect();
    if members.len() > 20 {
        let all = find_explanations(fw, just, &e.target, e.mode);
        return all.iter().any(|x| x.argument_ids == e.argument_ids);
    }
    let full = (1u32 << members.len()) - 1;
    (0..full).all(|mask| {
        let subset: ArgSet = members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &a)| a)
            .collect();
        !satisfies(fw, just, &subset, &e.target, e.mode)
    })
}

/// `Lit(R)`: literals that may be added as facts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FactUniverse {
    pub literals: BTreeSet<Literal>,
}

/// `{φ, ~φ}` for every `φ` occurring in some antecedent such that no rule
/// concludes `φ` or `~φ`.
pub fn literal_universe(rules: &DefeasibleTheory) -> FactUniverse {
    let concluded: BTreeSet<&str> = rules.rules().map(|r| r.consequent.atom()).collect();
    let mut literals = BTreeSet::new();
    for r in rules.rules() {
        for a in &r.antecedents {
            if !concluded.contains(a.atom()) {
                literals.insert(a.clone());
                literals.insert(a.complement());
            }
        }
    }
    FactUniverse { literals }
}

/// Every consistent `F'` with `facts ⊆ F' ⊆ universe`, by size and then
/// lexicographically.
pub fn enumerate_fact_supersets(
    facts: &BTreeSet<Literal>,
    universe: &FactUniverse,
) -> impl Iterator<Item = BTreeSet<Literal>> {
    let fixed: BTreeSet<&str> = facts.iter().map(|l| l.atom()).collect();
    let free: BTreeSet<&str> = universe
        .literals
        .iter()
        .map(|l| l.atom())
        .filter(|a| !fixed.contains(a))
        .collect();
    let mut all: Vec<Vec<Literal>> = vec![facts.iter().cloned().collect()];
    for atom in free {
        let options: Vec<Literal> = [Literal::neg(atom), Literal::pos(atom)]
            .into_iter()
            .filter(|l| universe.literals.contains(l))
            .collect();
        let mut next = Vec::with_capacity(all.len() * (options.len() + 1));
        for set in &all {
            next.push(set.clone());
            for o in &options {
                let mut s = set.clone();
                s.push(o.clone());
                next.push(s);
            }
        }
        all = next;
    }
    for s in &mut all {
        s.sort();
    }
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.into_iter().map(|s| s.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub checked_supersets: usize,
    pub counterexample: Option<BTreeSet<Literal>>,
}

/// Decides whether `e` survives every consistent enlargement of the facts
/// within `Lit(R)`. The first failing fact set in enumeration order is
/// reported.
pub fn is_stable(fw: &Framework, e: &Explanation) -> Result<StabilityReport, ExplanationError> {
    let just = fw.justification();
    if !is_explanation_in(fw, &just, e) {
        return Err(ExplanationError::NotAnExplanation {
            target: e.target.clone(),
            ids: e.argument_ids.iter().cloned().collect(),
        });
    }
    let theory = fw.theory();
    let mut universe = literal_universe(theory);
    universe.literals.extend(theory.facts().iter().cloned());
    let mut checked = 0;
    for facts in enumerate_fact_supersets(theory.facts(), &universe) {
        checked += 1;
        if facts == *theory.facts() {
            continue;
        }
        debug_assert!(is_consistent(&facts));
        let holds = match ArgumentationTheory::validate(theory.with_facts(facts.iter().cloned())) {
            Ok(t) => {
                let fw2 = Framework::with_mode(&t, fw.mode())?;
                let just2 = fw2.justification();
                is_explanation_in(&fw2, &just2, e)
            }
            Err(_) => false,
        };
        if !holds {
            return Ok(StabilityReport {
                stable: false,
                checked_supersets: checked,
                counterexample: Some(facts),
            });
        }
    }
    Ok(StabilityReport {
        stable: true,
        checked_supersets: checked,
        counterexample: None,
    })
}
