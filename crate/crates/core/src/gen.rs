//! Seeded random theories for property tests and benchmarks.
//!
//! Atoms are layered: a rule only draws antecedents from atoms below its
//! consequent's atom, so the dependency graph is acyclic by construction.
//! Superiority pairs only relate rules with complementary consequents and
//! are oriented by a random rank, so they form a DAG.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{DefeasibleTheory, Literal, Rule, RuleKind};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub atoms: usize,
    pub rules: usize,
    pub max_body: usize,
    /// Chance that an atom never used as a consequent becomes a fact.
    pub fact_probability: f64,
    /// Chance that a conflicting rule pair gets a superiority pair.
    pub superiority_probability: f64,
    /// Also emit strict rules and defeaters (not argumentation theories).
    pub mixed_kinds: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            atoms: 6,
            rules: 10,
            max_body: 2,
            fact_probability: 0.6,
            superiority_probability: 0.5,
            mixed_kinds: false,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn atom(i: usize) -> String {
    format!("a{i}")
}

/// A random theory. Without `mixed_kinds` the result always passes
/// argumentation-theory validation.
pub fn random_theory<R: Rng>(config: &GenConfig, rng: &mut R) -> DefeasibleTheory {
    let n = config.atoms.max(2);
    let mut rules = Vec::new();
    for k in 0..config.rules {
        let head = rng.gen_range(1..n);
        let size = rng.gen_range(1..=config.max_body.max(1).min(head));
        let mut below: Vec<usize> = (0..head).collect();
        below.shuffle(rng);
        let body: Vec<Literal> = below[..size]
            .iter()
            .map(|&i| Literal::new(atom(i), rng.gen_bool(0.5)))
            .collect();
        let kind = if config.mixed_kinds {
            match rng.gen_range(0..6) {
                0 => RuleKind::Strict,
                1 => RuleKind::Defeater,
                _ => RuleKind::Defeasible,
            }
        } else {
            RuleKind::Defeasible
        };
        rules.push(Rule::new(
            format!("r{}", k + 1),
            kind,
            body,
            Literal::new(atom(head), rng.gen_bool(0.5)),
        ));
    }

    let heads: Vec<&str> = rules.iter().map(|r| r.consequent.atom()).collect();
    let mut facts = Vec::new();
    for a in (0..n).map(atom).filter(|a| !heads.contains(&a.as_str())) {
        if rng.gen_bool(config.fact_probability) {
            facts.push(Literal::new(a, rng.gen_bool(0.5)));
        }
    }

    let mut rank: Vec<usize> = (0..rules.len()).collect();
    rank.shuffle(rng);
    let mut superiority = Vec::new();
    for i in 0..rules.len() {
        for j in i + 1..rules.len() {
            if rules[i].consequent == rules[j].consequent.complement()
                && rng.gen_bool(config.superiority_probability)
            {
                let (a, b) = if rank[i] < rank[j] { (i, j) } else { (j, i) };
                superiority.push((rules[a].label.clone(), rules[b].label.clone()));
            }
        }
    }
    DefeasibleTheory::new(facts, rules, superiority).expect("labels are distinct")
}

/// `a0` as the only fact and `rI: a(I-1) => aI` for `I` in `1..=length`,
/// and a weaker competitor `cI: a(I-1) => -aI` for every link,
/// so each step exercises the conflict clause.
pub fn rule_chain(length: usize) -> DefeasibleTheory {
    let mut rules = Vec::new();
    let mut superiority = Vec::new();
    for i in 1..=length {
        let body = [Literal::pos(atom(i - 1))];
        rules.push(Rule::defeasible(
            format!("r{i}"),
            body.clone(),
            Literal::pos(atom(i)),
        ));
        rules.push(Rule::defeasible(
            format!("c{i}"),
            body,
            Literal::neg(atom(i)),
        ));
        superiority.push((format!("r{i}"), format!("c{i}")));
    }
    DefeasibleTheory::new([Literal::pos(atom(0))], rules, superiority).expect("labels are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::compute_extension;
    use crate::model::ArgumentationTheory;

    #[test]
    fn same_seed_same_theory() {
        let c = GenConfig::default();
        assert_eq!(
            random_theory(&c, &mut rng(7)),
            random_theory(&c, &mut rng(7))
        );
    }

    #[test]
    fn generated_theories_are_valid_and_acyclic() {
        let c = GenConfig::default();
        let mut r = rng(1);
        for _ in 0..200 {
            let t = random_theory(&c, &mut r);
            assert!(t.is_acyclic_setup());
            assert!(t.rule_count() <= 10 && t.atoms().len() <= 6);
            assert!(ArgumentationTheory::validate(t).is_ok());
        }
    }

    #[test]
    fn chain_proves_every_link() {
        let e = compute_extension(&rule_chain(20));
        assert!((0..=20).all(|i| e.plus_partial.contains(&Literal::pos(atom(i)))));
        assert!(e.minus_partial.contains(&Literal::neg(atom(20))));
    }
}
