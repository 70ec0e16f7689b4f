//! `bdsys` explores a generalized Boolean dynamical system from the command
//! line: its inverse semigroup, its tight boundary, the partial free-group
//! action, the two groupoid models, and reconstruction from a finite
//! partial action.
//!
//! Every subcommand prints a check report and exits 0 when all items pass,
//! 1 when a checked claim fails, and 2 when the input itself is unusable.

mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use bdsys_core::action::{act, act_on_openset, check_axioms, ck_check, domain_of, factorization_check};
use bdsys_core::exec::Strategy;
use bdsys_core::gbds::Gbds;
use bdsys_core::groupoid::iso_check;
use bdsys_core::ideal::{check_invariance, homomorphism_check, restrict, Invariance};
use bdsys_core::openset::Cyl;
use bdsys_core::paths::{build_correspondence, tight_to_boundary, BoundaryPath};
use bdsys_core::reconstruct::roundtrip;
use bdsys_core::semigroup::{check_semigroup_laws, tight_filters};
use bdsys_core::CheckReport;

#[derive(Parser)]
#[command(name = "bdsys", version, about = "Combinatorics of generalized Boolean dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Run the check drivers on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the defining laws of a system file.
    Validate { system: PathBuf },
    /// Inverse semigroup laws on elements with words up to a length.
    Semigroup {
        system: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Sample this many triples for associativity instead of all.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tight filters and their translation onto the boundary.
    Tight {
        system: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        max_period: usize,
    },
    /// List boundary paths, or describe the one given by --path.
    Boundary {
        system: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        max_period: usize,
        /// A path spec such as `v:y`, `e:a@y`, or `lasso(;e:a@x)`.
        #[arg(long)]
        path: Option<String>,
    },
    /// The partial free-group action: axioms, or one application via -g.
    Action {
        system: PathBuf,
        /// A free group word such as `a.b^-1`; enables --path and --set.
        #[arg(short = 'g', long = "word")]
        word: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Apply the word to this path.
        #[arg(long)]
        path: Option<String>,
        /// Apply the word to this open set.
        #[arg(long)]
        set: Option<String>,
    },
    /// Covariance relations of the generators and their factorization.
    Ck {
        system: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Isomorphism between the germ groupoid and the shift groupoid.
    Iso {
        system: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 300)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Derive a system from a finite partial action and verify conjugacy.
    Reconstruct {
        action: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Read the boundary action back off and rebuild the system from it.
    Roundtrip { system: PathBuf },
    /// Decide invariance of an open set; restrict to it when invariant.
    Invariant {
        system: PathBuf,
        /// `full`, `empty`, or cylinders like `a:y+:x`.
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::Parallel };
    match run(&cli.command, strategy) {
        Ok(report) => {
            print!("{}", report.render());
            if let Some(path) = &cli.json {
                let json = serde_json::to_string_pretty(&report).expect("reports serialize");
                if let Err(e) = fs::write(path, json) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command, strategy: Strategy) -> Result<CheckReport> {
    match command {
        Command::Validate { system } => {
            let sys = input::load_system_unchecked(system)?;
            print!("{}", render_system(&sys));
            Ok(sys.validate())
        }
        Command::Semigroup { system, max_len, samples, seed } => {
            let sys = input::load_system(system)?;
            Ok(check_semigroup_laws(&sys, *max_len, *samples, *seed, strategy))
        }
        Command::Tight { system, max_len, max_period } => {
            let sys = input::load_system(system)?;
            Ok(tight_report(&sys, *max_len, *max_period))
        }
        Command::Boundary { system, max_len, max_period, path } => {
            let sys = input::load_system(system)?;
            Ok(boundary_report(&sys, *max_len, *max_period, path.as_deref())?)
        }
        Command::Action { system, word, depth, samples, seed, path, set } => {
            let sys = input::load_system(system)?;
            let corr = build_correspondence(&sys);
            match word {
                Some(word) => {
                    apply_report(&sys, &corr, word, path.as_deref(), set.as_deref())
                }
                None if path.is_some() || set.is_some() => {
                    bail!("--path and --set need a word to apply; pass one with -g")
                }
                None => Ok(check_axioms(&corr, *depth, *samples, *seed, strategy)),
            }
        }
        Command::Ck { system, max_len } => {
            let sys = input::load_system(system)?;
            let corr = build_correspondence(&sys);
            let mut report = ck_check(&corr, *max_len);
            report.merge(factorization_check(&corr, *max_len));
            Ok(report)
        }
        Command::Iso { system, depth, samples, seed } => {
            let sys = input::load_system(system)?;
            let corr = build_correspondence(&sys);
            Ok(iso_check(&corr, *depth, *samples, *seed, strategy))
        }
        Command::Reconstruct { action, max_len } => {
            let (action, declared) = input::load_action(action)?;
            Ok(reconstruct_report(&action, &declared, *max_len))
        }
        Command::Roundtrip { system } => {
            let sys = input::load_system(system)?;
            Ok(roundtrip(&sys)?)
        }
        Command::Invariant { system, set, depth } => {
            let sys = input::load_system(system)?;
            let corr = build_correspondence(&sys);
            let set = input::parse_set(&corr, set)?;
            Ok(invariant_report(&sys, &set, *depth))
        }
    }
}

fn render_system(sys: &Gbds) -> String {
    let algebra = sys.algebra();
    let mut out = String::new();
    out.push_str(&format!("atoms: {}\n", algebra.atom_names().join(", ")));
    out.push_str(&format!("labels: {}\n", sys.labels().join(", ")));
    for (l, label) in sys.labels().iter().enumerate() {
        let images: Vec<String> = (0..algebra.atom_count())
            .map(|a| format!("{} ↦ {}", algebra.atom_name(a), sys.atom_image(l, a)))
            .collect();
        out.push_str(&format!("θ_{label}: {}\n", images.join(", ")));
        out.push_str(&format!("ideal of {label}: {}\n", sys.ideal_gen(l)));
    }
    out
}

fn tight_report(sys: &Gbds, max_len: usize, max_period: usize) -> CheckReport {
    let mut report = CheckReport::new(format!(
        "tight filters with words up to {max_len}, periods up to {max_period}"
    ));
    let corr = build_correspondence(sys);
    let tights = tight_filters(sys, max_len, max_period);
    for f in &tights {
        println!("{}", f.describe());
    }
    report.push("tight filters", true, format!("{} found", tights.len()));
    let mut translated = std::collections::BTreeSet::new();
    let mut all_ok = true;
    for f in &tights {
        match tight_to_boundary(sys, f) {
            Ok(p) => {
                translated.insert(p);
            }
            Err(e) => {
                all_ok = false;
                report.fail("translate to the boundary", format!("{}: {e}", f.describe()));
            }
        }
    }
    if all_ok {
        report.push(
            "translate to the boundary",
            translated.len() == tights.len(),
            "translation is injective".to_string(),
        );
    }
    let boundary: std::collections::BTreeSet<BoundaryPath> =
        corr.enumerate_boundary(max_len, max_period).into_iter().collect();
    report.push(
        "translation is onto the boundary",
        translated == boundary,
        format!("{} filters against {} paths", translated.len(), boundary.len()),
    );
    report
}

fn boundary_report(
    sys: &Gbds,
    max_len: usize,
    max_period: usize,
    path: Option<&str>,
) -> Result<CheckReport> {
    let corr = build_correspondence(sys);
    let mut report =
        CheckReport::new(format!("boundary with lengths up to {max_len}, periods up to {max_period}"));
    match path {
        None => {
            let paths = corr.enumerate_boundary(max_len, max_period);
            for p in &paths {
                println!("{}", p.to_spec(sys));
            }
            report.push("enumerate", true, format!("{} paths", paths.len()));
            let singular: Vec<&str> = corr
                .singular_vertices()
                .iter()
                .map(|&v| sys.algebra().atom_name(v))
                .collect();
            report.push("singular vertices", true, singular.join(", "));
        }
        Some(spec) => {
            let p = BoundaryPath::parse(sys, spec)?;
            report.push("parse", true, p.to_spec(sys));
            let range = match p.range_atom(sys) {
                Some(v) => sys.algebra().atom_name(v).to_string(),
                None => "marker (outside every range)".to_string(),
            };
            report.push("range atom", true, range);
            let shifted = match p.shift(sys) {
                Ok(q) => q.to_spec(sys),
                Err(_) => "undefined (no edge to remove)".to_string(),
            };
            report.push("shift", true, shifted);
        }
    }
    Ok(report)
}

fn apply_report(
    sys: &Gbds,
    corr: &bdsys_core::paths::Correspondence,
    word: &str,
    path: Option<&str>,
    set: Option<&str>,
) -> Result<CheckReport> {
    let t = input::parse_free_word(sys, word)?;
    let mut report = CheckReport::new(format!("the partial homeomorphism φ at {}", t.describe(sys)));
    let dom = domain_of(corr, &t.inverse());
    let ran = domain_of(corr, &t);
    report.push("domain", true, dom.describe());
    report.push("range", true, ran.describe());
    if let Some(spec) = path {
        let p = BoundaryPath::parse(sys, spec)?;
        match act(corr, &t, &p) {
            Ok(q) => report.push("apply", true, format!("{} ↦ {}", p.to_spec(sys), q.to_spec(sys))),
            Err(e) => report.fail("apply", format!("{}: {e}", p.to_spec(sys))),
        }
    }
    if let Some(spec) = set {
        let s = input::parse_set(corr, spec)?;
        let cut = s.intersect(&dom);
        if cut != s {
            report.push("clip to the domain", true, cut.describe());
        }
        let moved = act_on_openset(&t, &cut)
            .context("the clipped set should lie inside the domain")?;
        report.push("apply to the set", true, format!("{} ↦ {}", s.describe(), moved.describe()));
    }
    Ok(report)
}

fn reconstruct_report(
    action: &bdsys_core::reconstruct::FinitePartialAction,
    declared: &[input::DeclaredCarriers],
    max_len: usize,
) -> CheckReport {
    let mut report = action.validate(max_len);
    for (g, carriers) in declared.iter().enumerate() {
        let name = &action.generators()[g];
        let mask_of = |names: &[String]| -> u64 {
            names
                .iter()
                .map(|n| action.points().iter().position(|p| p == n).map_or(0, |i| 1 << i))
                .fold(0, |acc, m| acc | m)
        };
        if let Some(v) = &carriers.v {
            report.push(
                format!("declared range of '{name}'"),
                mask_of(v) == action.range_mask(g),
                "matches the maps".to_string(),
            );
        }
        if let Some(v_inv) = &carriers.v_inv {
            report.push(
                format!("declared domain of '{name}'"),
                mask_of(v_inv) == action.domain_mask(g),
                "matches the maps".to_string(),
            );
        }
    }
    let derived = match action.derive_bds() {
        Ok(d) => d,
        Err(e) => {
            report.fail("derive a system", e.to_string());
            return report;
        }
    };
    print!("{}", render_system(&derived));
    match action.verify_conjugacy(&derived) {
        Ok(conj) => report.merge(conj),
        Err(e) => report.fail("conjugacy", e.to_string()),
    }
    report
}

fn invariant_report(sys: &Gbds, set: &bdsys_core::openset::OpenSet, depth: usize) -> CheckReport {
    let mut report = CheckReport::new(format!("invariance up to word length {depth}"));
    report.push("set", true, set.describe());
    match check_invariance(set, depth) {
        Invariance::Invariant(cert) => {
            report.push("invariant", true, format!("under every reduced word up to {depth}"));
            let lazy = restrict(&build_correspondence(sys), &cert);
            report.merge(homomorphism_check(&lazy));
        }
        Invariance::Counterexample { t, piece } => {
            let Cyl { word, atom } = piece;
            report.fail(
                "invariant",
                format!(
                    "φ at {} moves a piece out to N({}, {{{}}})",
                    t.describe(sys),
                    sys.word_string(&word),
                    sys.algebra().atom_name(atom)
                ),
            );
        }
    }
    report
}
