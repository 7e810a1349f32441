//! Batch entry point: check proofs, run search, validate sequents on
//! models, and run the correspondence and corpus suites.
//!
//! Exit codes: 0 on success, 1 on a definite negative (proof rejected,
//! search exhausted, sequent invalid, disagreement found), 2 on usage or
//! parse errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polarity_core::analysis::{
    correspondence_sampled, correspondence_suite, countermodel, CountermodelGoal,
};
use polarity_core::calculus::{
    check_proof, parse_proof, print_proof, Axiom, CalculusConfig, ProofNode,
};
use polarity_core::prover::{prove, SearchLimits, SearchOutcome};
use polarity_core::semantics::{
    describe_assignment, describe_valuation, falsify_labelled, falsify_sequent, parse_model, Ctx,
    LoadOptions,
};
use polarity_core::syntax::{parse_formula_sequent, parse_sequent, Sequent, Sort};

#[derive(Parser)]
#[command(name = "polarity", version, about = "Labelled sequent calculus kernel for modal logic over formal contexts", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ConfigFlags {
    /// Enable the structural rule of this axiom (repeatable). Ids:
    /// box-refl, dia-refl, box-dense, dia-dense, b1, b2, sym-rhd.
    #[arg(long = "axiom", value_name = "ID")]
    axioms: Vec<String>,
    /// Use the calculus for rough formal contexts.
    #[arg(long)]
    rough: bool,
    /// Allow the cut rules in proof scripts.
    #[arg(long)]
    allow_cut: bool,
}

impl ConfigFlags {
    fn to_config(&self) -> Result<CalculusConfig, String> {
        let mut sigma = std::collections::BTreeSet::new();
        for id in &self.axioms {
            match Axiom::from_id(id) {
                Some(a) => {
                    sigma.insert(a);
                }
                None => return Err(format!("unknown axiom id `{id}`")),
            }
        }
        Ok(CalculusConfig {
            sigma,
            rough: self.rough,
            allow_cut: self.allow_cut,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a proof script.
    Check {
        proof_path: PathBuf,
        #[command(flatten)]
        config: ConfigFlags,
    },
    /// Search for a proof of a labelled sequent.
    Prove {
        sequent: String,
        #[command(flatten)]
        config: ConfigFlags,
        /// Maximum search depth (choice points per branch).
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Node budget for the whole search.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Maximum fresh labels per branch.
        #[arg(long, default_value_t = 16)]
        fresh: usize,
        /// Write the found proof script here.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
    /// Evaluate a sequent on a model file.
    Validate {
        model_path: PathBuf,
        sequent: String,
        /// Skip the I-compatibility check when loading the model.
        #[arg(long)]
        no_check_compat: bool,
    },
    /// Print the concept lattice of a model file.
    Lattice {
        model_path: PathBuf,
        #[arg(long)]
        no_check_compat: bool,
    },
    /// Verify the axiom/frame-condition correspondences by enumeration.
    Correspond {
        max_a: usize,
        max_x: usize,
        /// Sample this many random structures at exactly (max_a, max_x)
        /// instead of exhaustive enumeration.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 2025)]
        seed: u64,
        /// Emit the machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Check every proof script listed in a corpus manifest.
    Corpus {
        /// Directory containing proof scripts and `manifest.txt`.
        #[arg(default_value = "corpus")]
        dir: PathBuf,
    },
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_model(path: &Path, no_check_compat: bool) -> Result<Ctx, String> {
    let text = read_file(path)?;
    parse_model(
        &text,
        LoadOptions {
            check_compat: !no_check_compat,
        },
    )
    .map_err(|e| format!("{}: {e}", path.display()))
}

/// ok / rejected for a checked script, with a failure trace.
fn report_check(config: &CalculusConfig, tree: &ProofNode) -> bool {
    let goal = tree.conclusion.clone();
    match check_proof(config, tree, &goal) {
        Ok(()) => {
            println!("ok");
            true
        }
        Err(failure) => {
            println!("{failure}");
            // trace from the root to the failing node
            let mut node = tree;
            println!("  at {} \"{}\"", node.rule.script_name(), node.conclusion);
            for &i in &failure.path {
                node = &node.premises[i];
                println!("  at {} \"{}\"", node.rule.script_name(), node.conclusion);
            }
            false
        }
    }
}

fn cmd_check(proof_path: &Path, config: &ConfigFlags) -> Result<bool, String> {
    let config = config.to_config()?;
    let text = read_file(proof_path)?;
    let tree = parse_proof(&text).map_err(|e| format!("{}: {e}", proof_path.display()))?;
    Ok(report_check(&config, &tree))
}

fn print_countermodel_for(seq: &Sequent) {
    match countermodel(&CountermodelGoal::Labelled(seq.clone()), None, 2, 2) {
        Ok(Some(cm)) => {
            println!("countermodel:");
            print!("{}", cm.render());
        }
        Ok(None) => println!("no countermodel with carriers up to 2x2"),
        Err(e) => println!("countermodel search failed: {e}"),
    }
}

fn cmd_prove(
    sequent: &str,
    config: &ConfigFlags,
    limits: SearchLimits,
    emit: Option<&Path>,
) -> Result<bool, String> {
    let config = config.to_config()?;
    let goal = parse_sequent(sequent).map_err(|e| e.to_string())?;
    match prove(&config, &goal, limits) {
        SearchOutcome::Proved(tree) => {
            println!("proved ({} nodes)", tree.size());
            if let Some(path) = emit {
                std::fs::write(path, print_proof(&tree))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(true)
        }
        SearchOutcome::Exhausted => {
            println!("exhausted: no proof within the search bounds");
            println!("try `polarity validate` on a model, or see the countermodel below");
            print_countermodel_for(&goal);
            Ok(false)
        }
        SearchOutcome::BudgetExceeded => {
            println!("budget exceeded: raise --budget or --depth");
            Ok(false)
        }
    }
}

fn cmd_validate(model_path: &Path, sequent: &str, no_check_compat: bool) -> Result<bool, String> {
    let ctx = load_model(model_path, no_check_compat)?;
    // a plain `phi |- psi` line is a formula sequent; labelled items always
    // carry `:`/`::` or a relation symbol
    if let Ok(seq) = parse_sequent(sequent) {
        return match falsify_labelled(&ctx, &seq) {
            Ok(None) => {
                println!("valid");
                Ok(true)
            }
            Ok(Some((v, asg))) => {
                println!("invalid");
                println!("valuation: {}", describe_valuation(&ctx, &v));
                println!("labels: {}", describe_assignment(&ctx, &asg));
                Ok(false)
            }
            Err(e) => Err(e.to_string()),
        };
    }
    let (f, g) = parse_formula_sequent(sequent).map_err(|e| e.to_string())?;
    match falsify_sequent(&ctx, &f, &g) {
        Ok(None) => {
            println!("valid");
            Ok(true)
        }
        Ok(Some(v)) => {
            println!("invalid");
            println!("valuation: {}", describe_valuation(&ctx, &v));
            Ok(false)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_lattice(model_path: &Path, no_check_compat: bool) -> Result<bool, String> {
    let ctx = load_model(model_path, no_check_compat)?;
    let pol = ctx.polarity();
    let lattice = pol.concepts().map_err(|e| e.to_string())?;
    let mut lines: Vec<String> = lattice
        .concepts()
        .iter()
        .map(|c| {
            format!(
                "({{{}}}, {{{}}})",
                pol.set_to_names(Sort::Object, c.extent).join(" "),
                pol.set_to_names(Sort::Feature, c.intent).join(" ")
            )
        })
        .collect();
    lines.sort();
    for l in &lines {
        println!("{l}");
    }
    println!("{} concepts", lines.len());
    Ok(true)
}

fn cmd_correspond(
    max_a: usize,
    max_x: usize,
    sample: Option<usize>,
    seed: u64,
    json: bool,
) -> Result<bool, String> {
    let report = match sample {
        None => correspondence_suite(max_a, max_x).map_err(|e| e.to_string())?,
        Some(n) => correspondence_sampled(max_a, max_x, n, seed).map_err(|e| e.to_string())?,
    };
    if json {
        println!("{}", report.to_json());
    } else {
        for line in report.lines() {
            println!("{line}");
        }
    }
    let bad = report.total_disagreements();
    if bad == 0 {
        println!("zero disagreements");
        Ok(true)
    } else {
        println!("{bad} disagreements");
        for item in &report.items {
            if let Some(w) = &item.witness {
                println!("witness for item {}:\n{w}", item.item);
                break;
            }
        }
        Ok(false)
    }
}

fn cmd_corpus(dir: &Path) -> Result<bool, String> {
    let manifest_path = dir.join("manifest.txt");
    let manifest = read_file(&manifest_path)?;
    let mut all_ok = true;
    let mut total = 0;
    for line in manifest.lines() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let file = words.next().unwrap().to_string();
        let mut flags = ConfigFlags::default();
        let rest: Vec<&str> = words.collect();
        let mut i = 0;
        while i < rest.len() {
            match rest[i] {
                "--rough" => flags.rough = true,
                "--allow-cut" => flags.allow_cut = true,
                "--axiom" => {
                    i += 1;
                    let id = rest
                        .get(i)
                        .ok_or_else(|| format!("{file}: --axiom needs an id"))?;
                    flags.axioms.push(id.to_string());
                }
                other => return Err(format!("{file}: unknown manifest flag `{other}`")),
            }
            i += 1;
        }
        let config = flags.to_config()?;
        total += 1;
        let text = read_file(&dir.join(&file))?;
        match parse_proof(&text) {
            Ok(tree) => {
                let goal = tree.conclusion.clone();
                match check_proof(&config, &tree, &goal) {
                    Ok(()) => println!("{file}: ok"),
                    Err(failure) => {
                        println!("{file}: {failure}");
                        all_ok = false;
                    }
                }
            }
            Err(e) => {
                println!("{file}: {e}");
                all_ok = false;
            }
        }
    }
    println!(
        "{total} scripts, {}",
        if all_ok { "all ok" } else { "failures present" }
    );
    Ok(all_ok)
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Check { proof_path, config } => cmd_check(&proof_path, &config),
        Command::Prove {
            sequent,
            config,
            depth,
            budget,
            fresh,
            emit,
        } => cmd_prove(
            &sequent,
            &config,
            SearchLimits {
                max_depth: depth,
                max_fresh_labels: fresh,
                node_budget: budget,
            },
            emit.as_deref(),
        ),
        Command::Validate {
            model_path,
            sequent,
            no_check_compat,
        } => cmd_validate(&model_path, &sequent, no_check_compat),
        Command::Lattice {
            model_path,
            no_check_compat,
        } => cmd_lattice(&model_path, no_check_compat),
        Command::Correspond {
            max_a,
            max_x,
            sample,
            seed,
            json,
        } => cmd_correspond(max_a, max_x, sample, seed, json),
        Command::Corpus { dir } => cmd_corpus(&dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
