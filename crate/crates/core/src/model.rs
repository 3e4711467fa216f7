//! Literals, rules, theories and the atom dependency graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// A signed propositional atom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Literal {
    atom: String,
    positive: bool,
}

impl Literal {
    pub fn new(atom: impl Into<String>, positive: bool) -> Self {
        Literal {
            atom: atom.into(),
            positive,
        }
    }

    pub fn pos(atom: impl Into<String>) -> Self {
        Literal::new(atom, true)
    }

    pub fn neg(atom: impl Into<String>) -> Self {
        Literal::new(atom, false)
    }

    pub fn atom(&self) -> &str {
        &self.atom
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }

    /// Parses `atom` or `-atom`.
    pub fn parse(text: &str) -> Option<Literal> {
        let text = text.trim();
        let (positive, atom) = match text.strip_prefix('-') {
            Some(rest) => (false, rest),
            None => (true, text),
        };
        let mut chars = atom.chars();
        let first = chars.next()?;
        if !first.is_ascii_alphabetic() || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        Some(Literal::new(atom, positive))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "-{}", self.atom)
        }
    }
}

/// True iff no literal appears together with its complement.
pub fn is_consistent<'a>(literals: impl IntoIterator<Item = &'a Literal>) -> bool {
    let set: BTreeSet<&Literal> = literals.into_iter().collect();
    set.iter().all(|l| !set.contains(&l.complement()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Strict,
    Defeasible,
    Defeater,
}

impl RuleKind {
    pub fn arrow(self) -> &'static str {
        match self {
            RuleKind::Strict => "->",
            RuleKind::Defeasible => "=>",
            RuleKind::Defeater => "~>",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Rule {
    pub label: String,
    pub kind: RuleKind,
    pub antecedents: BTreeSet<Literal>,
    pub consequent: Literal,
}

impl Rule {
    pub fn new(
        label: impl Into<String>,
        kind: RuleKind,
        antecedents: impl IntoIterator<Item = Literal>,
        consequent: Literal,
    ) -> Self {
        Rule {
            label: label.into(),
            kind,
            antecedents: antecedents.into_iter().collect(),
            consequent,
        }
    }

    pub fn defeasible(
        label: impl Into<String>,
        antecedents: impl IntoIterator<Item = Literal>,
        consequent: Literal,
    ) -> Self {
        Rule::new(label, RuleKind::Defeasible, antecedents, consequent)
    }

    /// Strict or defeasible: rules that can support a conclusion.
    pub fn is_supportive(&self) -> bool {
        self.kind != RuleKind::Defeater
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.label)?;
        let body: Vec<String> = self.antecedents.iter().map(|l| l.to_string()).collect();
        if !body.is_empty() {
            write!(f, "{} ", body.join(", "))?;
        }
        write!(f, "{} {}", self.kind.arrow(), self.consequent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("duplicate rule label `{0}`")]
    DuplicateLabel(String),
}

/// A defeasible theory `(F, R, >)`. Rules are keyed by their unique label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefeasibleTheory {
    facts: BTreeSet<Literal>,
    rules: BTreeMap<String, Rule>,
    superiority: BTreeSet<(String, String)>,
}

impl DefeasibleTheory {
    pub fn new(
        facts: impl IntoIterator<Item = Literal>,
        rules: impl IntoIterator<Item = Rule>,
        superiority: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, TheoryError> {
        let mut map = BTreeMap::new();
        for rule in rules {
            if map.contains_key(&rule.label) {
                return Err(TheoryError::DuplicateLabel(rule.label));
            }
            map.insert(rule.label.clone(), rule);
        }
        Ok(DefeasibleTheory {
            facts: facts.into_iter().collect(),
            rules: map,
            superiority: superiority.into_iter().collect(),
        })
    }

    pub fn facts(&self) -> &BTreeSet<Literal> {
        &self.facts
    }

    /// Rules in label order.
    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values()
    }

    pub fn rule(&self, label: &str) -> Option<&Rule> {
        self.rules.get(label)
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn superiority(&self) -> &BTreeSet<(String, String)> {
        &self.superiority
    }

    /// `stronger > weaker` as a raw pair.
    pub fn is_superior(&self, stronger: &str, weaker: &str) -> bool {
        self.superiority
            .contains(&(stronger.to_string(), weaker.to_string()))
    }

    /// `R[l]`: all rules concluding `l`.
    pub fn rules_for<'a>(&'a self, l: &'a Literal) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.values().filter(move |r| &r.consequent == l)
    }

    /// `R_s`.
    pub fn strict_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values().filter(|r| r.kind == RuleKind::Strict)
    }

    /// `R_sd`: strict and defeasible rules.
    pub fn supportive_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values().filter(|r| r.is_supportive())
    }

    /// `Lit(D)`: every literal occurring in facts, antecedents or consequents.
    pub fn literals(&self) -> BTreeSet<Literal> {
        let mut out = self.facts.clone();
        for r in self.rules.values() {
            out.extend(r.antecedents.iter().cloned());
            out.insert(r.consequent.clone());
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.literals().into_iter().map(|l| l.atom).collect()
    }

    /// Same rules and superiority, different facts.
    pub fn with_facts(&self, facts: impl IntoIterator<Item = Literal>) -> DefeasibleTheory {
        DefeasibleTheory {
            facts: facts.into_iter().collect(),
            rules: self.rules.clone(),
            superiority: self.superiority.clone(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty() && self.rules.is_empty() && self.superiority.is_empty()
    }

    /// Transitive closure of the superiority relation.
    pub fn superiority_closure(&self) -> BTreeSet<(String, String)> {
        let mut closure = self.superiority.clone();
        loop {
            let mut added = Vec::new();
            for (a, b) in &closure {
                for (c, d) in &closure {
                    if b == c && !closure.contains(&(a.clone(), d.clone())) {
                        added.push((a.clone(), d.clone()));
                    }
                }
            }
            if added.is_empty() {
                return closure;
            }
            closure.extend(added);
        }
    }

    pub fn dependency_graph(&self) -> DependencyGraph {
        let derived: BTreeSet<&str> = self.rules.values().map(|r| r.consequent.atom()).collect();
        let vertices = self.atoms();
        let mut edges = BTreeSet::new();
        for rule in self.rules.values() {
            for a in &rule.antecedents {
                if derived.contains(a.atom()) {
                    edges.insert((a.atom.clone(), rule.consequent.atom.clone()));
                }
            }
        }
        DependencyGraph { vertices, edges }
    }

    /// Both preconditions of the consistency result: the superiority
    /// closure is irreflexive and the dependency graph has no cycle.
    pub fn is_acyclic_setup(&self) -> bool {
        self.superiority_closure().iter().all(|(a, b)| a != b)
            && self.dependency_graph().is_acyclic()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DependencyGraph {
    pub vertices: BTreeSet<String>,
    pub edges: BTreeSet<(String, String)>,
}

impl DependencyGraph {
    pub fn is_acyclic(&self) -> bool {
        let mut indegree: BTreeMap<&str, usize> =
            self.vertices.iter().map(|v| (v.as_str(), 0)).collect();
        for (_, to) in &self.edges {
            *indegree.entry(to.as_str()).or_default() += 1;
        }
        let mut ready: Vec<&str> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(v, _)| *v)
            .collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for (from, to) in &self.edges {
                if from == v {
                    let d = indegree
                        .get_mut(to.as_str())
                        .expect("edge target is a vertex");
                    *d -= 1;
                    if *d == 0 {
                        ready.push(to.as_str());
                    }
                }
            }
        }
        seen == indegree.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    #[error("inconsistent facts: `{fact}` and its complement are both facts")]
    InconsistentFacts { fact: String },
    #[error("fact `{fact}` is concluded (or contradicted) by rule `{rule}`")]
    FactConcludedByRule { fact: String, rule: String },
    #[error("rule `{rule}` is not defeasible")]
    NonDefeasibleRule { rule: String },
    #[error("superiority `{stronger} > {weaker}` references an unknown rule")]
    DanglingSuperiority { stronger: String, weaker: String },
}

/// A defeasible theory that meets the argumentation-theory conditions:
/// defeasible rules only, consistent facts, and no rule concluding a fact
/// or its complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgumentationTheory(DefeasibleTheory);

impl ArgumentationTheory {
    pub fn validate(theory: DefeasibleTheory) -> Result<Self, Vec<Violation>> {
        let mut violations = Vec::new();
        for fact in &theory.facts {
            if fact.positive && theory.facts.contains(&fact.complement()) {
                violations.push(Violation::InconsistentFacts {
                    fact: fact.to_string(),
                });
            }
            for rule in theory.rules.values() {
                if rule.consequent.atom == fact.atom {
                    violations.push(Violation::FactConcludedByRule {
                        fact: fact.to_string(),
                        rule: rule.label.clone(),
                    });
                }
            }
        }
        for rule in theory.rules.values() {
            if rule.kind != RuleKind::Defeasible {
                violations.push(Violation::NonDefeasibleRule {
                    rule: rule.label.clone(),
                });
            }
        }
        for (a, b) in &theory.superiority {
            if !theory.rules.contains_key(a) || !theory.rules.contains_key(b) {
                violations.push(Violation::DanglingSuperiority {
                    stronger: a.clone(),
                    weaker: b.clone(),
                });
            }
        }
        if violations.is_empty() {
            Ok(ArgumentationTheory(theory))
        } else {
            Err(violations)
        }
    }

    pub fn theory(&self) -> &DefeasibleTheory {
        &self.0
    }

    pub fn into_inner(self) -> DefeasibleTheory {
        self.0
    }
}

impl std::ops::Deref for ArgumentationTheory {
    type Target = DefeasibleTheory;

    fn deref(&self) -> &DefeasibleTheory {
        &self.0
    }
}
