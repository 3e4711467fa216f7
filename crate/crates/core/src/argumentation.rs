//! Arguments built from an argumentation theory, the attack relation and
//! the justified/rejected fixpoints.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::engine::compute_extension;
use crate::model::{ArgumentationTheory, Literal};

/// Index of an argument inside its [`Framework`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ArgId(pub usize);

pub type ArgSet = BTreeSet<ArgId>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum ArgumentForm {
    Factual,
    Plain {
        top_rule: String,
        subarguments: Vec<ArgId>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Argument {
    /// Canonical name: a fact's literal for factual arguments,
    /// `rule(child, ...)` for plain ones.
    pub id: String,
    pub conclusion: Literal,
    #[serde(flatten)]
    pub form: ArgumentForm,
}

impl Argument {
    pub fn is_plain(&self) -> bool {
        matches!(self.form, ArgumentForm::Plain { .. })
    }

    pub fn top_rule(&self) -> Option<&str> {
        match &self.form {
            ArgumentForm::Factual => None,
            ArgumentForm::Plain { top_rule, .. } => Some(top_rule),
        }
    }

    pub fn direct_subarguments(&self) -> &[ArgId] {
        match &self.form {
            ArgumentForm::Factual => &[],
            ArgumentForm::Plain { subarguments, .. } => subarguments,
        }
    }
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.conclusion)
    }
}

/// How superiority enters the attack relation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackMode {
    /// `A` attacks `B` unless `TopRule(B) > TopRule(A)`.
    #[default]
    Defeat,
    /// `A` attacks `B` only if `TopRule(A) > TopRule(B)`.
    SuperiorOnly,
    /// Conflicting conclusions suffice.
    IgnoreSuperiority,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArgumentationError {
    #[error("the dependency graph is cyclic; the argument set may be infinite")]
    CyclicDependencies,
}

/// Every argument constructible from `theory`: one factual argument per
/// fact, then plain arguments closed under rule application. A rule with
/// no antecedents yields no argument, since a plain argument is built on
/// at least one subargument.
pub fn build_arguments(theory: &ArgumentationTheory) -> Result<Vec<Argument>, ArgumentationError> {
    if !theory.dependency_graph().is_acyclic() {
        return Err(ArgumentationError::CyclicDependencies);
    }
    let mut args: Vec<Argument> = theory
        .facts()
        .iter()
        .map(|f| Argument {
            id: f.to_string(),
            conclusion: f.clone(),
            form: ArgumentForm::Factual,
        })
        .collect();
    let mut known: HashMap<String, ArgId> = args
        .iter()
        .enumerate()
        .map(|(i, a)| (a.id.clone(), ArgId(i)))
        .collect();

    loop {
        let mut by_conclusion: BTreeMap<&Literal, Vec<ArgId>> = BTreeMap::new();
        for (i, a) in args.iter().enumerate() {
            by_conclusion
                .entry(&a.conclusion)
                .or_default()
                .push(ArgId(i));
        }
        let mut fresh = Vec::new();
        for rule in theory.rules().filter(|r| !r.antecedents.is_empty()) {
            let choices: Option<Vec<&Vec<ArgId>>> = rule
                .antecedents
                .iter()
                .map(|a| by_conclusion.get(a))
                .collect();
            let Some(choices) = choices else { continue };
            for combo in cartesian(&choices) {
                let children: Vec<&str> = combo.iter().map(|c| args[c.0].id.as_str()).collect();
                let id = format!("{}({})", rule.label, children.join(","));
                if known.contains_key(&id) || fresh.iter().any(|a: &Argument| a.id == id) {
                    continue;
                }
                fresh.push(Argument {
                    id,
                    conclusion: rule.consequent.clone(),
                    form: ArgumentForm::Plain {
                        top_rule: rule.label.clone(),
                        subarguments: combo,
                    },
                });
            }
        }
        if fresh.is_empty() {
            return Ok(args);
        }
        for a in fresh {
            known.insert(a.id.clone(), ArgId(args.len()));
            args.push(a);
        }
    }
}

fn cartesian(choices: &[&Vec<ArgId>]) -> Vec<Vec<ArgId>> {
    choices.iter().fold(vec![Vec::new()], |acc, options| {
        acc.iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(*o);
                    v
                })
            })
            .collect()
    })
}

/// Whether `a` attacks the conclusion of `b` under the given superiority
/// reading. In a [`Framework`], `a` attacks `b` when it attacks `b` or any
/// of its proper subarguments.
pub fn attacks(a: &Argument, b: &Argument, theory: &ArgumentationTheory, mode: AttackMode) -> bool {
    let (Some(ra), Some(rb)) = (a.top_rule(), b.top_rule()) else {
        return false;
    };
    if a.conclusion != b.conclusion.complement() {
        return false;
    }
    match mode {
        AttackMode::Defeat => !theory.is_superior(rb, ra),
        AttackMode::SuperiorOnly => theory.is_superior(ra, rb),
        AttackMode::IgnoreSuperiority => true,
    }
}

/// The argumentation framework `(AR, >>)` of a theory.
#[derive(Clone, Debug)]
pub struct Framework {
    theory: ArgumentationTheory,
    mode: AttackMode,
    arguments: Vec<Argument>,
    by_id: HashMap<String, ArgId>,
    attacks: BTreeSet<(ArgId, ArgId)>,
    attackers: Vec<Vec<ArgId>>,
    proper_subs: Vec<ArgSet>,
}

impl Framework {
    pub fn new(theory: &ArgumentationTheory) -> Result<Self, ArgumentationError> {
        Framework::with_mode(theory, AttackMode::Defeat)
    }

    pub fn with_mode(
        theory: &ArgumentationTheory,
        mode: AttackMode,
    ) -> Result<Self, ArgumentationError> {
        let arguments = build_arguments(theory)?;
        let by_id = arguments
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.clone(), ArgId(i)))
            .collect();
        // children always precede parents, so one forward pass suffices
        let mut proper_subs: Vec<ArgSet> = Vec::with_capacity(arguments.len());
        for a in &arguments {
            let mut subs = ArgSet::new();
            for &c in a.direct_subarguments() {
                subs.insert(c);
                subs.extend(proper_subs[c.0].iter().copied());
            }
            proper_subs.push(subs);
        }
        let mut attack_set = BTreeSet::new();
        let mut attackers = vec![Vec::new(); arguments.len()];
        for (i, a) in arguments.iter().enumerate() {
            for (j, b) in arguments.iter().enumerate() {
                let hit = attacks(a, b, theory, mode)
                    || proper_subs[j]
                        .iter()
                        .any(|s| attacks(a, &arguments[s.0], theory, mode));
                if hit {
                    attack_set.insert((ArgId(i), ArgId(j)));
                    attackers[j].push(ArgId(i));
                }
            }
        }
        Ok(Framework {
            theory: theory.clone(),
            mode,
            arguments,
            by_id,
            attacks: attack_set,
            attackers,
            proper_subs,
        })
    }

    pub fn theory(&self) -> &ArgumentationTheory {
        &self.theory
    }

    pub fn mode(&self) -> AttackMode {
        self.mode
    }

    pub fn arguments(&self) -> &[Argument] {
        &self.arguments
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ArgId> {
        (0..self.arguments.len()).map(ArgId)
    }

    pub fn get(&self, id: ArgId) -> &Argument {
        &self.arguments[id.0]
    }

    pub fn lookup(&self, name: &str) -> Option<ArgId> {
        self.by_id.get(name).copied()
    }

    pub fn attacks(&self) -> &BTreeSet<(ArgId, ArgId)> {
        &self.attacks
    }

    pub fn attackers(&self, id: ArgId) -> &[ArgId] {
        &self.attackers[id.0]
    }

    pub fn proper_subarguments(&self, id: ArgId) -> &ArgSet {
        &self.proper_subs[id.0]
    }

    /// `Sub(A)`, including `A` itself.
    pub fn subarguments(&self, id: ArgId) -> ArgSet {
        let mut s = self.proper_subs[id.0].clone();
        s.insert(id);
        s
    }

    /// `Rules(A)`.
    pub fn rules_of(&self, id: ArgId) -> BTreeSet<&str> {
        self.subarguments(id)
            .into_iter()
            .filter_map(|s| self.arguments[s.0].top_rule())
            .collect()
    }

    pub fn arguments_for<'a>(&'a self, l: &'a Literal) -> impl Iterator<Item = ArgId> + 'a {
        self.ids()
            .filter(move |&i| &self.arguments[i.0].conclusion == l)
    }

    /// Every proper subargument of `id` is in `args`.
    pub fn supports(&self, args: &ArgSet, id: ArgId) -> bool {
        self.proper_subs[id.0].is_subset(args)
    }

    /// `args` supports some argument attacking a proper subargument of `id`.
    pub fn undercut(&self, args: &ArgSet, id: ArgId) -> bool {
        self.proper_subs[id.0].iter().any(|&sub| {
            self.attackers[sub.0]
                .iter()
                .any(|&b| self.supports(args, b))
        })
    }

    /// Every attacker of `id` is undercut by `args`.
    pub fn acceptable(&self, id: ArgId, args: &ArgSet) -> bool {
        self.attackers[id.0].iter().all(|&b| self.undercut(args, b))
    }

    pub fn justification(&self) -> JustificationResult {
        let mut justified = ArgSet::new();
        loop {
            let next: ArgSet = self
                .ids()
                .filter(|&a| self.acceptable(a, &justified))
                .collect();
            if next == justified {
                break;
            }
            justified = next;
        }
        let mut rejected = ArgSet::new();
        loop {
            let next: ArgSet = self
                .ids()
                .filter(|&a| {
                    !self.proper_subs[a.0].is_disjoint(&rejected)
                        || self.attackers[a.0]
                            .iter()
                            .any(|&b| self.supports(&justified, b))
                })
                .collect();
            if next == rejected {
                break;
            }
            rejected = next;
        }
        let justified_conclusions = justified
            .iter()
            .map(|a| self.arguments[a.0].conclusion.clone())
            .collect();
        JustificationResult {
            justified,
            rejected,
            justified_conclusions,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct JustificationResult {
    pub justified: ArgSet,
    pub rejected: ArgSet,
    pub justified_conclusions: BTreeSet<Literal>,
}

impl JustificationResult {
    pub fn is_justified(&self, id: ArgId) -> bool {
        self.justified.contains(&id)
    }

    pub fn is_rejected(&self, id: ArgId) -> bool {
        self.rejected.contains(&id)
    }
}

/// Justified conclusions coincide with the `+∂` literals, no `-∂` literal
/// has a justified argument, and a literal whose arguments are all rejected
/// is `-∂`.
pub fn agrees_with_proof_theory(theory: &ArgumentationTheory) -> Result<bool, ArgumentationError> {
    let fw = Framework::new(theory)?;
    let just = fw.justification();
    let ext = compute_extension(theory);
    if just.justified_conclusions != ext.plus_partial {
        return Ok(false);
    }
    let conclusions: BTreeSet<&Literal> = fw.arguments().iter().map(|a| &a.conclusion).collect();
    for l in conclusions {
        let args: Vec<ArgId> = fw.arguments_for(l).collect();
        if ext.minus_partial.contains(l) && args.iter().any(|&a| just.is_justified(a)) {
            return Ok(false);
        }
        if args.iter().all(|&a| just.is_rejected(a)) && !ext.minus_partial.contains(l) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::{DefeasibleTheory, Rule};

    pub fn credit_framework() -> Framework {
        Framework::new(&ArgumentationTheory::validate(credit()).unwrap()).unwrap()
    }

    fn id(fw: &Framework, name: &str) -> ArgId {
        fw.lookup(name)
            .unwrap_or_else(|| panic!("no argument {name}"))
    }

    const A1: &str = "insolvent";
    const A2: &str = "creditLicense";
    const A3: &str = "s5(insolvent)";
    const A4: &str = "s4(s5(insolvent))";
    const A5: &str = "s2(creditLicense)";

    #[test]
    fn credit_arguments() {
        let fw = credit_framework();
        let mut names: Vec<&str> = fw.arguments().iter().map(|a| a.id.as_str()).collect();
        names.sort();
        let mut expected = vec![A1, A2, A3, A4, A5];
        expected.sort();
        assert_eq!(names, expected);
        assert_eq!(fw.get(id(&fw, A4)).conclusion, n("creditActivity"));
        assert_eq!(fw.rules_of(id(&fw, A4)), BTreeSet::from(["s4", "s5"]));
    }

    #[test]
    fn credit_attacks() {
        let fw = credit_framework();
        assert_eq!(fw.attacks(), &BTreeSet::from([(id(&fw, A4), id(&fw, A5))]));
        let t = fw.theory();
        assert!(attacks(
            fw.get(id(&fw, A4)),
            fw.get(id(&fw, A5)),
            t,
            AttackMode::Defeat
        ));
        assert!(!attacks(
            fw.get(id(&fw, A5)),
            fw.get(id(&fw, A4)),
            t,
            AttackMode::Defeat
        ));
        assert!(!attacks(
            fw.get(id(&fw, A1)),
            fw.get(id(&fw, A5)),
            t,
            AttackMode::Defeat
        ));
    }

    #[test]
    fn attack_modes() {
        let t = ArgumentationTheory::validate(credit()).unwrap();
        let ignore = Framework::with_mode(&t, AttackMode::IgnoreSuperiority).unwrap();
        assert_eq!(ignore.attacks().len(), 2);
        let sup = Framework::with_mode(&t, AttackMode::SuperiorOnly).unwrap();
        assert_eq!(sup.attacks().len(), 1);
    }

    #[test]
    fn empty_and_chain_theories() {
        let empty = ArgumentationTheory::validate(DefeasibleTheory::default()).unwrap();
        assert!(build_arguments(&empty).unwrap().is_empty());
        let chain = ArgumentationTheory::validate(
            DefeasibleTheory::new(
                [p("p")],
                [
                    Rule::defeasible("r1", [p("p")], p("q")),
                    Rule::defeasible("r2", [p("q")], p("r")),
                ],
                [],
            )
            .unwrap(),
        )
        .unwrap();
        let args = build_arguments(&chain).unwrap();
        assert_eq!(args.len(), 3);
        assert_eq!(args.iter().filter(|a| a.is_plain()).count(), 2);
    }

    #[test]
    fn cyclic_theories_refused() {
        let t = ArgumentationTheory::validate(
            DefeasibleTheory::new(
                [],
                [
                    Rule::defeasible("r1", [p("a")], p("b")),
                    Rule::defeasible("r2", [p("b")], p("a")),
                ],
                [],
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(
            build_arguments(&t).unwrap_err(),
            ArgumentationError::CyclicDependencies
        );
    }

    #[test]
    fn support_and_undercut() {
        let fw = credit_framework();
        let set = |names: &[&str]| names.iter().map(|n| id(&fw, n)).collect::<ArgSet>();
        assert!(fw.supports(&set(&[A1, A3]), id(&fw, A4)));
        assert!(fw.supports(&ArgSet::new(), id(&fw, A1)));
        assert!(!fw.supports(&ArgSet::new(), id(&fw, A4)));
        assert!(!fw.undercut(&set(&[A1, A2, A3, A4]), id(&fw, A5)));
        assert!(!fw.undercut(&ArgSet::new(), id(&fw, A1)));
        assert!(fw.acceptable(id(&fw, A4), &ArgSet::new()));
        let just = fw.justification();
        assert!(!fw.acceptable(id(&fw, A5), &just.justified));
    }

    #[test]
    fn undercut_through_a_defeated_subargument() {
        // facts a, c; r1: a => b; r2: c => -b with r1 > r2; r3: b => d;
        // r4: c => -d. The b argument is safe from -b, so d and -d are
        // left in an unresolved mutual attack.
        let t = ArgumentationTheory::validate(
            DefeasibleTheory::new(
                [p("a"), p("c")],
                [
                    Rule::defeasible("r1", [p("a")], p("b")),
                    Rule::defeasible("r2", [p("c")], n("b")),
                    Rule::defeasible("r3", [p("b")], p("d")),
                    Rule::defeasible("r4", [p("c")], n("d")),
                ],
                [("r1".to_string(), "r2".to_string())],
            )
            .unwrap(),
        )
        .unwrap();
        let fw = Framework::new(&t).unwrap();
        let d = id(&fw, "r3(r1(a))");
        let not_d = id(&fw, "r4(c)");
        let not_b = id(&fw, "r2(c)");
        let b = id(&fw, "r1(a)");
        let all: ArgSet = fw.ids().collect();
        // -d's only proper subargument is factual
        assert!(!fw.undercut(&all, not_d));
        // d's subargument b is attacked by nothing that survives superiority
        assert!(!fw.undercut(&all, d));
        assert!(fw.attackers(b).is_empty());
        assert_eq!(fw.attackers(not_b), &[b]);
        let just = fw.justification();
        assert!(!just.is_justified(d) && !just.is_justified(not_d));
        assert!(just.is_justified(b));
        assert!(agrees_with_proof_theory(&t).unwrap());
    }

    #[test]
    fn credit_justification() {
        let fw = credit_framework();
        let just = fw.justification();
        let names = |s: &ArgSet| {
            s.iter()
                .map(|a| fw.get(*a).id.clone())
                .collect::<BTreeSet<_>>()
        };
        assert_eq!(
            names(&just.justified),
            [A1, A2, A3, A4].iter().map(|s| s.to_string()).collect()
        );
        assert_eq!(names(&just.rejected), BTreeSet::from([A5.to_string()]));
        assert!(agrees_with_proof_theory(fw.theory()).unwrap());
    }

    #[test]
    fn no_attacks_means_everything_justified() {
        let t = ArgumentationTheory::validate(
            DefeasibleTheory::new([p("p")], [Rule::defeasible("r", [p("p")], p("q"))], []).unwrap(),
        )
        .unwrap();
        let just = Framework::new(&t).unwrap().justification();
        assert_eq!(just.justified.len(), 2);
        assert!(just.rejected.is_empty());
        let single =
            ArgumentationTheory::validate(DefeasibleTheory::new([p("p")], [], []).unwrap())
                .unwrap();
        assert!(agrees_with_proof_theory(&single).unwrap());
    }

    #[test]
    fn mutual_attack_neither_justified() {
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
        let fw = Framework::new(&t).unwrap();
        let (c, not_c) = (id(&fw, "r1(a)"), id(&fw, "r2(b)"));
        assert!(fw.attacks().contains(&(c, not_c)) && fw.attacks().contains(&(not_c, c)));
        let just = fw.justification();
        assert!(!just.is_justified(c) && !just.is_justified(not_c));
        // each is attacked by an argument whose subarguments are justified
        assert!(just.is_rejected(c) && just.is_rejected(not_c));
        let ext = compute_extension(&t);
        assert!(ext.minus_partial.contains(&p("c")) && ext.minus_partial.contains(&n("c")));
        assert!(agrees_with_proof_theory(&t).unwrap());
    }
}
