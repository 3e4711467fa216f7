use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dfl_core::argumentation::{AttackMode, Framework};
use dfl_core::engine::compute_extension_with;
use dfl_core::explanation::{find_explanations, is_stable, Explanation, ExplanationMode};
use dfl_core::gen::{random_theory, rng, GenConfig};
use dfl_core::io;
use dfl_core::semantics::{
    build_d_model, semantic_stability_check, Formula, ModelOptions, DEFAULT_WORLD_CAP,
};
use dfl_core::{ArgumentationTheory, DefeasibleTheory, DefeatMode, Literal};

#[derive(Parser, Debug)]
#[command(
    name = "dfl",
    version,
    about = "Defeasible rule theories: extensions, arguments, explanations and deontic models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Explanation mode.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Closed)]
    mode: ModeArg,
    /// How superiority enters the attack relation.
    #[arg(long, global = true, value_enum, default_value_t = AttackArg::Defeat)]
    attack: AttackArg,
    /// Conflict resolution used by the proof procedure and the D-model.
    #[arg(long, global = true, value_enum, default_value_t = DefeatArg::Individual)]
    defeat: DefeatArg,
    /// Largest D-extension for which a model is built.
    #[arg(long, global = true, default_value_t = DEFAULT_WORLD_CAP)]
    world_cap: usize,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, conflicts_with = "dot")]
    json: bool,
    #[arg(long, global = true)]
    dot: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the argumentation-theory conditions.
    Validate { input: PathBuf },
    /// The four tagged-literal sets.
    Extension { input: PathBuf },
    /// All arguments and the attack relation.
    Arguments { input: PathBuf },
    /// Justified and rejected arguments.
    Justify { input: PathBuf },
    /// Minimal explanations of a literal.
    Explain {
        input: PathBuf,
        #[arg(allow_hyphen_values = true)]
        literal: String,
    },
    /// Stability of the first explanation of a literal under added facts.
    Stable {
        input: PathBuf,
        #[arg(allow_hyphen_values = true)]
        literal: String,
    },
    /// The neighbourhood D-model.
    Model { input: PathBuf },
    /// Evaluate `OBL lit`, `PERM lit`, `lit`, `-lit` or `!formula`.
    Eval {
        input: PathBuf,
        #[arg(allow_hyphen_values = true)]
        formula: String,
        /// Comma-separated literals of the world; defaults to the whole extension.
        #[arg(long, allow_hyphen_values = true)]
        world: Option<String>,
    },
    /// The explanation submodel for the first explanation of a literal.
    Submodel {
        input: PathBuf,
        #[arg(allow_hyphen_values = true)]
        literal: String,
    },
    /// Model-theoretic stability of the first explanation of a literal.
    StableSem {
        input: PathBuf,
        #[arg(allow_hyphen_values = true)]
        literal: String,
    },
    /// Print a random acyclic theory.
    Gen {
        #[arg(long, default_value_t = 6)]
        atoms: usize,
        #[arg(long, default_value_t = 10)]
        rules: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Literal,
    Closed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AttackArg {
    Defeat,
    SuperiorOnly,
    Ignore,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DefeatArg {
    Individual,
    Team,
}

/// A failed run: exit status 1 for semantic refusals, 2 for input errors.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn refusal(message: impl ToString) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

enum Report {
    Text(String),
    Json(Value),
    Dot(String),
}

struct Run<'a> {
    cli: &'a Cli,
}

impl Run<'_> {
    fn attack_mode(&self) -> AttackMode {
        match self.cli.attack {
            AttackArg::Defeat => AttackMode::Defeat,
            AttackArg::SuperiorOnly => AttackMode::SuperiorOnly,
            AttackArg::Ignore => AttackMode::IgnoreSuperiority,
        }
    }

    fn explanation_mode(&self) -> ExplanationMode {
        match self.cli.mode {
            ModeArg::Literal => ExplanationMode::Literal,
            ModeArg::Closed => ExplanationMode::SupportClosed,
        }
    }

    fn model_options(&self) -> ModelOptions {
        ModelOptions {
            world_cap: self.cli.world_cap,
            defeat: match self.cli.defeat {
                DefeatArg::Individual => DefeatMode::Individual,
                DefeatArg::Team => DefeatMode::Team,
            },
        }
    }

    fn render(&self, text: String, json: Value) -> Result<Report, Failure> {
        if self.cli.dot {
            return Err(input_error(
                "--dot is only available for validate, arguments and justify",
            ));
        }
        Ok(if self.cli.json {
            Report::Json(json)
        } else {
            Report::Text(text)
        })
    }

    fn framework(&self, theory: &ArgumentationTheory) -> Result<Framework, Failure> {
        Framework::with_mode(theory, self.attack_mode()).map_err(refusal)
    }

    fn first_explanation(&self, fw: &Framework, literal: &Literal) -> Result<Explanation, Failure> {
        find_explanations(fw, &fw.justification(), literal, self.explanation_mode())
            .into_iter()
            .next()
            .ok_or_else(|| refusal(format!("`{literal}` has no explanation")))
    }

    fn execute(&self) -> Result<Report, Failure> {
        match &self.cli.command {
            Command::Validate { input } => {
                let theory = load(input)?;
                if self.cli.dot {
                    return Ok(Report::Dot(io::dependency_dot(&theory.dependency_graph())));
                }
                let acyclic = theory.is_acyclic_setup();
                ArgumentationTheory::validate(theory).map_err(|violations| {
                    let lines: Vec<String> =
                        violations.iter().map(|v| format!("{v:?}: {v}")).collect();
                    input_error(lines.join("\n"))
                })?;
                self.render(
                    format!("valid\nacyclic: {acyclic}\n"),
                    json!({"valid": true, "acyclic": acyclic}),
                )
            }
            Command::Extension { input } => {
                let theory = load(input)?;
                let e = compute_extension_with(&theory, self.model_options().defeat);
                let mut text = String::new();
                for (tag, set) in [
                    ("+D", &e.plus_delta),
                    ("-D", &e.minus_delta),
                    ("+d", &e.plus_partial),
                    ("-d", &e.minus_partial),
                ] {
                    let _ = writeln!(text, "{tag}: {}", join(set));
                }
                self.render(text, io::extension_json(&e))
            }
            Command::Arguments { input } => {
                let fw = self.framework(&load_valid(input)?)?;
                if self.cli.dot {
                    return Ok(Report::Dot(io::framework_dot(&fw)));
                }
                let mut text = String::new();
                for a in fw.arguments() {
                    let _ = writeln!(text, "{a}");
                }
                for (a, b) in fw.attacks() {
                    let _ = writeln!(text, "{} attacks {}", fw.get(*a).id, fw.get(*b).id);
                }
                self.render(text, io::framework_json(&fw))
            }
            Command::Justify { input } => {
                let fw = self.framework(&load_valid(input)?)?;
                if self.cli.dot {
                    return Ok(Report::Dot(io::framework_dot(&fw)));
                }
                let j = fw.justification();
                let names = |ids: &dfl_core::argumentation::ArgSet| {
                    ids.iter()
                        .map(|i| fw.get(*i).id.clone())
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                let text = format!(
                    "justified: {}\nrejected: {}\nconclusions: {}\n",
                    names(&j.justified),
                    names(&j.rejected),
                    join(&j.justified_conclusions)
                );
                self.render(text, io::justification_json(&fw, &j))
            }
            Command::Explain { input, literal } => {
                let target = parse_literal(literal)?;
                let fw = self.framework(&load_valid(input)?)?;
                let found =
                    find_explanations(&fw, &fw.justification(), &target, self.explanation_mode());
                let mut text = String::new();
                if found.is_empty() {
                    let _ = writeln!(text, "no explanation for {target}");
                }
                for e in &found {
                    let _ = writeln!(
                        text,
                        "{{{}}}",
                        e.argument_ids
                            .iter()
                            .cloned()
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                }
                let json = json!({
                    "target": target.to_string(),
                    "mode": self.explanation_mode(),
                    "explanations": found.iter().map(|e| &e.argument_ids).collect::<Vec<_>>(),
                });
                self.render(text, json)
            }
            Command::Stable { input, literal } => {
                let target = parse_literal(literal)?;
                let fw = self.framework(&load_valid(input)?)?;
                let e = self.first_explanation(&fw, &target)?;
                let report = is_stable(&fw, &e).map_err(refusal)?;
                let mut text = format!(
                    "stable: {}, supersets_checked: {}\n",
                    report.stable, report.checked_supersets
                );
                if let Some(c) = &report.counterexample {
                    let _ = writeln!(text, "counterexample: {{{}}}", join(c));
                }
                let json = json!({
                    "explanation": e.argument_ids,
                    "stable": report.stable,
                    "supersets_checked": report.checked_supersets,
                    "counterexample": report.counterexample.as_ref().map(|c| c.iter().map(|l| l.to_string()).collect::<Vec<_>>()),
                });
                self.render(text, json)
            }
            Command::Model { input } => {
                let m =
                    build_d_model(&load_valid(input)?, self.model_options()).map_err(refusal)?;
                self.render(model_text(&m), io::model_json(&m))
            }
            Command::Eval {
                input,
                formula,
                world,
            } => {
                let f = Formula::parse(formula)
                    .ok_or_else(|| input_error(format!("cannot parse formula `{formula}`")))?;
                let m =
                    build_d_model(&load_valid(input)?, self.model_options()).map_err(refusal)?;
                let w = match world {
                    Some(text) => {
                        let lits = text
                            .split(',')
                            .map(|s| parse_literal(s.trim()))
                            .collect::<Result<Vec<_>, _>>()?;
                        m.world(&lits).ok_or_else(|| {
                            input_error(format!("`{text}` is not a world of the model"))
                        })?
                    }
                    None => m
                        .distinguished_world()
                        .ok_or_else(|| refusal("the model has no worlds"))?,
                };
                let value = m.eval(w, &f).map_err(refusal)?;
                let world_lits: Vec<String> =
                    m.world_literals(w).iter().map(|l| l.to_string()).collect();
                self.render(
                    format!("{value}\n"),
                    json!({"formula": f.to_string(), "world": world_lits, "value": value}),
                )
            }
            Command::Submodel { input, literal } => {
                let target = parse_literal(literal)?;
                let theory = load_valid(input)?;
                let fw = self.framework(&theory)?;
                let e = self.first_explanation(&fw, &target)?;
                let m = build_d_model(&theory, self.model_options()).map_err(refusal)?;
                let sub = m.explanation_submodel(&fw, &e).map_err(refusal)?;
                let certified = m.certify_generated(&sub);
                let text = format!(
                    "explanation: {{{}}}\nworlds: {} of {}\ncertified: {certified}\n",
                    e.argument_ids
                        .iter()
                        .cloned()
                        .collect::<Vec<_>>()
                        .join(", "),
                    sub.world_count(),
                    m.world_count()
                );
                let json = json!({
                    "explanation": e.argument_ids,
                    "certified": certified,
                    "model": io::model_json(&sub),
                });
                self.render(text, json)
            }
            Command::StableSem { input, literal } => {
                let target = parse_literal(literal)?;
                let fw = self.framework(&load_valid(input)?)?;
                let e = self.first_explanation(&fw, &target)?;
                let report =
                    semantic_stability_check(&fw, &e, self.model_options()).map_err(refusal)?;
                let text = format!(
                    "stable: {}\nexplanation_holds: {}\nsubmodels_equal: {}\nadded_facts: {}\n",
                    report.holds(),
                    report.explanation_holds,
                    report.submodels_equal,
                    join(&report.added_facts)
                );
                let json = json!({
                    "explanation": e.argument_ids,
                    "stable": report.holds(),
                    "explanation_holds": report.explanation_holds,
                    "submodels_equal": report.submodels_equal,
                    "added_facts": report.added_facts.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                });
                self.render(text, json)
            }
            Command::Gen { atoms, rules } => {
                let config = GenConfig {
                    atoms: *atoms,
                    rules: *rules,
                    ..GenConfig::default()
                };
                let t = random_theory(&config, &mut rng(self.cli.seed.unwrap_or(0)));
                self.render(io::serialize_theory(&t), io::theory_json(&t))
            }
        }
    }
}

fn join<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> String {
    lits.into_iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn model_text(m: &dfl_core::semantics::NeighborhoodModel) -> String {
    let mut text = format!(
        "universe: {}\nworlds: {}\n",
        join(m.universe()),
        m.world_count()
    );
    if let Some(top) = m.distinguished_world() {
        let _ = writeln!(text, "neighbourhoods at the full world:");
        for y in m.neighborhood(top) {
            let common: Vec<&Literal> = m
                .universe()
                .iter()
                .filter(|l| m.literal_truth_set(l) == *y)
                .collect();
            let _ = writeln!(text, "  ||{}|| ({} worlds)", join(common), y.count_ones(..));
        }
    }
    text
}

fn parse_literal(text: &str) -> Result<Literal, Failure> {
    Literal::parse(text).ok_or_else(|| input_error(format!("`{text}` is not a literal")))
}

fn load(path: &PathBuf) -> Result<DefeasibleTheory, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    io::parse_theory(&text).map_err(|errors| {
        let lines: Vec<String> = errors
            .iter()
            .map(|e| format!("{}:{e}", path.display()))
            .collect();
        input_error(lines.join("\n"))
    })
}

fn load_valid(path: &PathBuf) -> Result<ArgumentationTheory, Failure> {
    ArgumentationTheory::validate(load(path)?).map_err(|violations| {
        let lines: Vec<String> = violations.iter().map(|v| format!("{v:?}: {v}")).collect();
        input_error(lines.join("\n"))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Run { cli: &cli }.execute().and_then(|report| {
        let mut out = match report {
            Report::Text(t) | Report::Dot(t) => t,
            Report::Json(v) => serde_json::to_string_pretty(&v).expect("JSON values serialize"),
        };
        if !out.ends_with('\n') {
            out.push('\n');
        }
        match &cli.output {
            Some(path) => std::fs::write(path, out)
                .map_err(|e| input_error(format!("{}: {e}", path.display()))),
            None => {
                print!("{out}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
