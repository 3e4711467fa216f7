//! Reference implementations written straight from the definitions, with
//! no indexing or worklists, used as oracles for the optimised code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use dfl_core::argumentation::Framework;
use dfl_core::explanation::{find_explanations, Explanation};
use dfl_core::gen::{random_theory, rng, GenConfig};
use dfl_core::{ArgumentationTheory, DefeasibleTheory, DefeatMode, Literal, Rule, RuleKind};

pub const CREDIT: &str = include_str!("../data/credit.dfl");

pub fn credit() -> ArgumentationTheory {
    ArgumentationTheory::validate(dfl_core::io::parse_theory(CREDIT).unwrap()).unwrap()
}

pub fn lit(s: &str) -> Literal {
    Literal::parse(s).unwrap()
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Tags {
    pub plus_delta: BTreeSet<Literal>,
    pub minus_delta: BTreeSet<Literal>,
    pub plus_partial: BTreeSet<Literal>,
    pub minus_partial: BTreeSet<Literal>,
}

fn all_in(set: &BTreeSet<Literal>, lits: &BTreeSet<Literal>) -> bool {
    lits.iter().all(|a| set.contains(a))
}

fn some_in(set: &BTreeSet<Literal>, lits: &BTreeSet<Literal>) -> bool {
    lits.iter().any(|a| set.contains(a))
}

/// Iterates all four proof conditions together from empty sets until
/// nothing changes, over `Lit(D)` and its complements. The result is
/// restricted to `Lit(D)`.
pub fn naive_tags(t: &DefeasibleTheory, mode: DefeatMode) -> Tags {
    let occurring = t.literals();
    let mut universe = occurring.clone();
    universe.extend(occurring.iter().map(|l| l.complement()));
    let rules: Vec<&Rule> = t.rules().collect();
    let for_lit = |q: &Literal| -> Vec<&Rule> {
        rules
            .iter()
            .copied()
            .filter(|r| r.consequent == *q)
            .collect()
    };
    let sup = |a: &Rule, b: &Rule| t.is_superior(&a.label, &b.label);

    let mut tags = Tags::default();
    loop {
        let mut next = Tags::default();
        for q in &universe {
            let nq = q.complement();
            let strict = || {
                for_lit(q)
                    .into_iter()
                    .filter(|r| r.kind == RuleKind::Strict)
            };
            let supportive = || {
                for_lit(q)
                    .into_iter()
                    .filter(|r| r.kind != RuleKind::Defeater)
            };

            if t.facts().contains(q) || strict().any(|r| all_in(&tags.plus_delta, &r.antecedents)) {
                next.plus_delta.insert(q.clone());
            }
            if !t.facts().contains(q)
                && strict().all(|r| some_in(&tags.minus_delta, &r.antecedents))
            {
                next.minus_delta.insert(q.clone());
            }

            let applicable = |r: &Rule| all_in(&tags.plus_partial, &r.antecedents);
            let discarded = |r: &Rule| some_in(&tags.minus_partial, &r.antecedents);
            let against = for_lit(&nq);
            // team defeat: any applicable rule for q, defeaters included
            let team_beats = |s: &Rule| for_lit(q).into_iter().any(|u| applicable(u) && sup(u, s));
            let plus = tags.plus_delta.contains(q)
                || (tags.minus_delta.contains(&nq)
                    && match mode {
                        DefeatMode::Individual => supportive().any(|r| {
                            applicable(r) && against.iter().all(|s| discarded(s) || sup(r, s))
                        }),
                        DefeatMode::Team => {
                            supportive().any(applicable)
                                && against.iter().all(|s| discarded(s) || team_beats(s))
                        }
                    });
            if plus {
                next.plus_partial.insert(q.clone());
            }

            let minus = tags.minus_delta.contains(q)
                && (tags.plus_delta.contains(&nq)
                    || match mode {
                        DefeatMode::Individual => supportive().all(|r| {
                            discarded(r) || against.iter().any(|s| applicable(s) && !sup(r, s))
                        }),
                        DefeatMode::Team => {
                            supportive().all(discarded)
                                || against.iter().any(|s| {
                                    applicable(s)
                                        && for_lit(q)
                                            .into_iter()
                                            .all(|u| discarded(u) || !sup(u, s))
                                })
                        }
                    });
            if minus {
                next.minus_partial.insert(q.clone());
            }
        }
        if next == tags {
            break;
        }
        tags = next;
    }
    let keep = |s: BTreeSet<Literal>| s.into_iter().filter(|l| occurring.contains(l)).collect();
    Tags {
        plus_delta: keep(tags.plus_delta),
        minus_delta: keep(tags.minus_delta),
        plus_partial: keep(tags.plus_partial),
        minus_partial: keep(tags.minus_partial),
    }
}

/// Seeded corpus of argumentation theories.
pub fn corpus(seed: u64, count: usize, atoms: usize, rules: usize) -> Vec<ArgumentationTheory> {
    let config = GenConfig {
        atoms,
        rules,
        ..GenConfig::default()
    };
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            ArgumentationTheory::validate(random_theory(&config, &mut r))
                .expect("generator emits valid theories")
        })
        .collect()
}

/// Every consistent fact set extending `facts` with literals over the
/// atoms of `pool`, built by assigning each free atom absent/positive/
/// negative.
pub fn naive_supersets(
    facts: &BTreeSet<Literal>,
    pool: &BTreeSet<Literal>,
) -> Vec<BTreeSet<Literal>> {
    let fixed: BTreeSet<&str> = facts.iter().map(|l| l.atom()).collect();
    let free: Vec<&str> = pool
        .iter()
        .map(|l| l.atom())
        .filter(|a| !fixed.contains(a))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = Vec::new();
    for code in 0..3usize.pow(free.len() as u32) {
        let mut set = facts.clone();
        let mut c = code;
        for atom in &free {
            match c % 3 {
                1 => set.insert(Literal::pos(*atom)),
                2 => set.insert(Literal::neg(*atom)),
                _ => true,
            };
            c /= 3;
        }
        out.push(set);
    }
    out
}

/// `Lit(R)` recomputed: both polarities of antecedent atoms no rule
/// concludes.
pub fn naive_rule_literals(t: &DefeasibleTheory) -> BTreeSet<Literal> {
    let heads: BTreeSet<String> = t.rules().map(|r| r.consequent.atom().to_string()).collect();
    t.rules()
        .flat_map(|r| r.antecedents.iter())
        .filter(|a| !heads.contains(a.atom()))
        .flat_map(|a| [Literal::pos(a.atom()), Literal::neg(a.atom())])
        .collect()
}

/// Stability by recomputing every explanation of the target under every
/// enlarged fact set.
pub fn naive_stable(t: &ArgumentationTheory, e: &Explanation) -> bool {
    let mut pool = naive_rule_literals(t);
    pool.extend(t.facts().iter().cloned());
    naive_supersets(t.facts(), &pool).into_iter().all(|facts| {
        let Ok(t2) = ArgumentationTheory::validate(t.with_facts(facts)) else {
            return false;
        };
        let fw = Framework::new(&t2).unwrap();
        find_explanations(&fw, &fw.justification(), &e.target, e.mode).contains(e)
    })
}

/// `N(w)` from the relational definition: for every rule `r_j`, the set
/// `S_j(w)` of worlds `y` with `C(r_j) ∈ y`, provided `A(r_j) ⊆ w` and
/// every applicable rule for the complement is beaten; unions per
/// conclusion; empty unions dropped. Worlds are literal sets.
pub fn naive_neighborhoods(
    t: &ArgumentationTheory,
    worlds: &[BTreeSet<Literal>],
    mode: DefeatMode,
) -> BTreeMap<BTreeSet<Literal>, BTreeSet<BTreeSet<BTreeSet<Literal>>>> {
    let applies = |r: &Rule, w: &BTreeSet<Literal>| r.antecedents.is_subset(w);
    let mut out = BTreeMap::new();
    for x in worlds {
        let mut by_conclusion: BTreeMap<Literal, BTreeSet<BTreeSet<Literal>>> = BTreeMap::new();
        for r in t.rules().filter(|r| r.kind != RuleKind::Defeater) {
            if !applies(r, x) {
                continue;
            }
            let opposed = t
                .rules()
                .filter(|s| s.consequent == r.consequent.complement())
                .all(|s| {
                    !applies(s, x)
                        || match mode {
                            DefeatMode::Individual => t.is_superior(&r.label, &s.label),
                            DefeatMode::Team => t.rules().any(|u| {
                                u.consequent == r.consequent
                                    && applies(u, x)
                                    && t.is_superior(&u.label, &s.label)
                            }),
                        }
                });
            if opposed {
                let s_j: BTreeSet<BTreeSet<Literal>> = worlds
                    .iter()
                    .filter(|y| y.contains(&r.consequent))
                    .cloned()
                    .collect();
                by_conclusion
                    .entry(r.consequent.clone())
                    .or_default()
                    .extend(s_j);
            }
        }
        let n: BTreeSet<_> = by_conclusion
            .into_values()
            .filter(|u| !u.is_empty())
            .collect();
        out.insert(x.clone(), n);
    }
    out
}

/// All nonempty subsets of `universe`.
pub fn naive_worlds(universe: &[Literal]) -> Vec<BTreeSet<Literal>> {
    (1..1usize << universe.len())
        .map(|m| {
            universe
                .iter()
                .enumerate()
                .filter(|(i, _)| m & (1 << i) != 0)
                .map(|(_, l)| l.clone())
                .collect()
        })
        .collect()
}
