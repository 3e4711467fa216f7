//! Defeasible proof theory: definite (`±Δ`) and defeasible (`±∂`) tags.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::model::{ArgumentationTheory, DefeasibleTheory, Literal, RuleKind, Violation};

/// How a conflicting rule `s` for `~l` may be overridden.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DefeatMode {
    /// The supporting rule itself must be superior to `s`. This is the
    /// reading under which defeasible provability coincides with argument
    /// justification.
    #[default]
    Individual,
    /// Any applicable rule for `l` superior to `s` will do.
    Team,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub plus_delta: BTreeSet<Literal>,
    pub minus_delta: BTreeSet<Literal>,
    pub plus_partial: BTreeSet<Literal>,
    pub minus_partial: BTreeSet<Literal>,
}

/// Forward chaining over facts and strict rules. `-Δ` is everything in
/// `Lit(D)` without such a derivation.
pub fn compute_definite(theory: &DefeasibleTheory) -> (BTreeSet<Literal>, BTreeSet<Literal>) {
    let mut proved: BTreeSet<Literal> = theory.facts().clone();
    loop {
        let fresh: Vec<Literal> = theory
            .strict_rules()
            .filter(|r| !proved.contains(&r.consequent))
            .filter(|r| r.antecedents.iter().all(|a| proved.contains(a)))
            .map(|r| r.consequent.clone())
            .collect();
        if fresh.is_empty() {
            break;
        }
        proved.extend(fresh);
    }
    let refuted = theory
        .literals()
        .into_iter()
        .filter(|l| !proved.contains(l))
        .collect();
    (proved, refuted)
}

pub fn compute_extension(theory: &DefeasibleTheory) -> Extension {
    compute_extension_with(theory, DefeatMode::Individual)
}

/// Worklist fixpoint: each rule keeps a counter of proved antecedents and a
/// discarded flag, and a literal is re-examined only when the status of a
/// rule for it or its complement changes.
pub fn compute_extension_with(theory: &DefeasibleTheory, mode: DefeatMode) -> Extension {
    let (plus_delta, minus_delta) = compute_definite(theory);
    let rules: Vec<_> = theory.rules().collect();
    let index: HashMap<&str, usize> = rules
        .iter()
        .enumerate()
        .map(|(i, r)| (r.label.as_str(), i))
        .collect();
    let superior: HashSet<(usize, usize)> = theory
        .superiority()
        .iter()
        .filter_map(|(a, b)| Some((*index.get(a.as_str())?, *index.get(b.as_str())?)))
        .collect();

    let mut by_head: HashMap<&Literal, Vec<usize>> = HashMap::new();
    let mut by_body: HashMap<&Literal, Vec<usize>> = HashMap::new();
    for (i, r) in rules.iter().enumerate() {
        by_head.entry(&r.consequent).or_default().push(i);
        for a in &r.antecedents {
            by_body.entry(a).or_default().push(i);
        }
    }

    let literals = theory.literals();
    let mut proved_count = vec![0usize; rules.len()];
    let mut discarded = vec![false; rules.len()];
    let mut plus: BTreeSet<Literal> = BTreeSet::new();
    let mut minus: BTreeSet<Literal> = BTreeSet::new();
    let mut queue: VecDeque<Literal> = literals.iter().cloned().collect();
    let no_rules: Vec<usize> = Vec::new();

    while let Some(l) = queue.pop_front() {
        if !literals.contains(&l) || plus.contains(&l) || minus.contains(&l) {
            continue;
        }
        let neg = l.complement();
        let for_l = by_head.get(&l).unwrap_or(&no_rules);
        let against = by_head.get(&neg).unwrap_or(&no_rules);
        let applicable = |i: usize| proved_count[i] == rules[i].antecedents.len();
        let supportive = |i: &&usize| rules[**i].kind != RuleKind::Defeater;

        let proved = plus_delta.contains(&l)
            || (!plus_delta.contains(&neg)
                && match mode {
                    DefeatMode::Individual => for_l.iter().filter(supportive).any(|&r| {
                        applicable(r)
                            && against
                                .iter()
                                .all(|&s| discarded[s] || superior.contains(&(r, s)))
                    }),
                    DefeatMode::Team => {
                        for_l.iter().filter(supportive).any(|&r| applicable(r))
                            && against.iter().all(|&s| {
                                discarded[s]
                                    || for_l
                                        .iter()
                                        .any(|&t| applicable(t) && superior.contains(&(t, s)))
                            })
                    }
                });
        let refuted = !proved
            && !plus_delta.contains(&l)
            && (plus_delta.contains(&neg)
                || match mode {
                    DefeatMode::Individual => for_l.iter().filter(supportive).all(|&r| {
                        discarded[r]
                            || against
                                .iter()
                                .any(|&s| applicable(s) && !superior.contains(&(r, s)))
                    }),
                    DefeatMode::Team => {
                        for_l.iter().filter(supportive).all(|&r| discarded[r])
                            || against.iter().any(|&s| {
                                applicable(s)
                                    && for_l
                                        .iter()
                                        .all(|&t| discarded[t] || !superior.contains(&(t, s)))
                            })
                    }
                });

        let mut touched = Vec::new();
        if proved {
            for &r in by_body.get(&l).unwrap_or(&no_rules) {
                proved_count[r] += 1;
                if proved_count[r] == rules[r].antecedents.len() {
                    touched.push(r);
                }
            }
            plus.insert(l);
        } else if refuted {
            for &r in by_body.get(&l).unwrap_or(&no_rules) {
                if !discarded[r] {
                    discarded[r] = true;
                    touched.push(r);
                }
            }
            minus.insert(l);
        }
        for r in touched {
            let head = &rules[r].consequent;
            queue.push_back(head.clone());
            queue.push_back(head.complement());
        }
    }

    Extension {
        plus_delta: plus_delta.intersection(&literals).cloned().collect(),
        minus_delta,
        plus_partial: plus,
        minus_partial: minus,
    }
}

/// The literal-level D-extension of an argumentation theory.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DExtensionSet {
    pub literals: BTreeSet<Literal>,
}

impl DExtensionSet {
    /// Justified literals, plus `~φ` for each unjustified `φ ∈ Lit(D)`.
    /// When both `φ` and `~φ` occur and neither is justified the two
    /// clauses would put both in the set; such a pair is left out, which
    /// keeps the set consistent.
    pub fn of(theory: &ArgumentationTheory) -> DExtensionSet {
        let justified = compute_extension(theory).plus_partial;
        let occurring = theory.literals();
        let mut literals = justified.clone();
        for phi in &occurring {
            let neg = phi.complement();
            if !justified.contains(phi) && !occurring.contains(&neg) {
                literals.insert(neg);
            }
        }
        DExtensionSet { literals }
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.literals.contains(l)
    }
}

/// `E_L(D)` for a rule theory `D = (R, >)` (its facts are ignored) and a
/// fact set `L`.
pub fn d_extension(
    rules: &DefeasibleTheory,
    facts: &BTreeSet<Literal>,
) -> Result<DExtensionSet, Vec<Violation>> {
    let theory = ArgumentationTheory::validate(rules.with_facts(facts.iter().cloned()))?;
    Ok(DExtensionSet::of(&theory))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::Rule;

    #[test]
    fn credit_definite_layer_is_the_facts() {
        let (plus, _) = compute_definite(&credit());
        assert_eq!(plus, BTreeSet::from([p("insolvent"), p("creditLicense")]));
    }

    #[test]
    fn strict_chaining() {
        let t = DefeasibleTheory::new(
            [p("p")],
            [Rule::new("r", RuleKind::Strict, [p("p")], p("q"))],
            [],
        )
        .unwrap();
        let (plus, minus) = compute_definite(&t);
        assert!(plus.contains(&p("p")) && plus.contains(&p("q")));
        assert!(minus.is_empty());
        assert!(compute_definite(&DefeasibleTheory::default()).0.is_empty());
    }

    #[test]
    fn credit_extension() {
        let ext = compute_extension(&credit());
        assert_eq!(
            ext.plus_partial,
            BTreeSet::from([
                p("insolvent"),
                p("creditLicense"),
                p("banned"),
                n("creditActivity")
            ])
        );
        for l in [
            p("creditActivity"),
            p("actsOnBehalfPrincipal"),
            p("principalCreditLicense"),
        ] {
            assert!(ext.minus_partial.contains(&l), "{l}");
        }
    }

    #[test]
    fn unopposed_rule_fires() {
        let t =
            DefeasibleTheory::new([p("p")], [Rule::defeasible("r", [p("p")], p("q"))], []).unwrap();
        assert!(compute_extension(&t).plus_partial.contains(&p("q")));
    }

    #[test]
    fn unresolved_conflict_refutes_both() {
        let t = DefeasibleTheory::new(
            [p("a"), p("b")],
            [
                Rule::defeasible("r1", [p("a")], p("c")),
                Rule::defeasible("r2", [p("b")], n("c")),
            ],
            [],
        )
        .unwrap();
        let ext = compute_extension(&t);
        assert!(ext.minus_partial.contains(&p("c")));
        assert!(ext.minus_partial.contains(&n("c")));
    }

    #[test]
    fn defeaters_block_but_never_support() {
        let t = DefeasibleTheory::new(
            [p("a")],
            [
                Rule::defeasible("r", [p("a")], p("c")),
                Rule::new("d", RuleKind::Defeater, [p("a")], n("c")),
            ],
            [],
        )
        .unwrap();
        let ext = compute_extension(&t);
        assert!(ext.minus_partial.contains(&p("c")));
        assert!(ext.minus_partial.contains(&n("c")));
    }

    #[test]
    fn team_defeat_differs_from_individual() {
        // each attacker is beaten by a different supporter
        let t = DefeasibleTheory::new(
            [p("a"), p("b"), p("d"), p("e")],
            [
                Rule::defeasible("r1", [p("a")], p("c")),
                Rule::defeasible("r2", [p("b")], p("c")),
                Rule::defeasible("s1", [p("d")], n("c")),
                Rule::defeasible("s2", [p("e")], n("c")),
            ],
            [("r1", "s1"), ("r2", "s2")].map(|(a, b)| (a.to_string(), b.to_string())),
        )
        .unwrap();
        assert!(compute_extension_with(&t, DefeatMode::Team)
            .plus_partial
            .contains(&p("c")));
        assert!(compute_extension(&t).minus_partial.contains(&p("c")));
    }

    #[test]
    fn credit_d_extension() {
        let t = ArgumentationTheory::validate(credit()).unwrap();
        let e = DExtensionSet::of(&t);
        assert_eq!(
            e.literals,
            BTreeSet::from([
                p("insolvent"),
                p("creditLicense"),
                p("banned"),
                n("creditActivity"),
                n("actsOnBehalfPrincipal"),
                n("principalCreditLicense"),
            ])
        );
    }

    #[test]
    fn small_d_extensions() {
        let empty = DefeasibleTheory::default();
        assert!(d_extension(&empty, &BTreeSet::new()).unwrap().is_empty());
        let rules =
            DefeasibleTheory::new([], [Rule::defeasible("r", [p("p")], p("q"))], []).unwrap();
        let e = d_extension(&rules, &BTreeSet::from([p("p")])).unwrap();
        assert_eq!(e.literals, BTreeSet::from([p("p"), p("q")]));
        assert!(d_extension(&rules, &BTreeSet::from([p("q")])).is_err());
    }

    #[test]
    fn contested_pair_left_out_of_d_extension() {
        let t = ArgumentationTheory::validate(
            DefeasibleTheory::new(
                [p("a"), p("b")],
                [
                    Rule::defeasible("r1", [p("a")], p("c")),
                    Rule::defeasible("r2", [p("b")], n("c")),
                ],
                [],
            )
            .unwrap(),
        )
        .unwrap();
        let e = DExtensionSet::of(&t);
        assert_eq!(e.literals, BTreeSet::from([p("a"), p("b")]));
    }
}
