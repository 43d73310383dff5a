//! `passi`: runs the verification suites of `passi-core` from the command line.
//!
//! Exit status is 0 when every checked claim holds, 1 when a claim is not
//! reproduced and 2 for usage or input errors.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use passi_core::chord::double_factorial;
use passi_core::group_ring::{magnus, FreeWord};
use passi_core::johnson::independence_report;
use passi_core::limits::SizeLimit;
use passi_core::mcg::{
    main_lemma_report, orbit_sample, standard_genset, theorem_a_report, validate_endo, Endo, GenSet,
};
use passi_core::symplectic::{chord_rank_report, invariant_basis};
use passi_core::Rational;
use rayon::prelude::*;
use report::Report;
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(
    name = "passi",
    version,
    about = "Exact checks on the Magnus expansion and mapping class group invariants"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    report: Format,
    /// Lift the size guardrail on ambient dimensions.
    #[arg(long, global = true)]
    allow_large: bool,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, env = "PASSI_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct GenusDegree {
    #[arg(long)]
    genus: usize,
    #[arg(long)]
    degree: usize,
}

#[derive(Args)]
struct GenusChords {
    #[arg(long)]
    genus: usize,
    #[arg(long)]
    chords: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of the Sp-invariants of H^{⊗k}.
    Invariants(GenusDegree),
    /// Compares the chord-diagram invariants with the full invariant space.
    ChordBasis(GenusChords),
    /// Independence of δ_φ on the chord invariants.
    DeltaCheck(GenusChords),
    /// Magnus expansion of a word, truncated at a degree.
    Magnus {
        #[command(flatten)]
        at: GenusDegree,
        /// Whitespace-separated letters such as "a1 b1^-1".
        #[arg(long)]
        word: String,
    },
    /// Brute-force fixed space of P_k against the boundary-word prediction.
    TheoremA {
        #[command(flatten)]
        at: GenusDegree,
        /// Generator set file; defaults to the built-in standard set.
        #[arg(long)]
        gens: Option<PathBuf>,
        /// Allow degrees outside k+1 ≤ 2g and report containment only.
        #[arg(long)]
        explore: bool,
    },
    /// Fixed space of the graded block in degrees 2l and 2l+1.
    MainLemma {
        #[command(flatten)]
        at: GenusChords,
        #[arg(long)]
        gens: Option<PathBuf>,
    },
    /// Samples the orbit of a word under a generator set.
    Orbit {
        #[arg(long)]
        word: String,
        /// Generator set file; requires --genus when absent.
        #[arg(long)]
        gens: Option<PathBuf>,
        #[arg(long)]
        genus: Option<usize>,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Checks every generator in a file: automorphism, boundary fixed.
    ValidateGens {
        #[arg(long)]
        gens: PathBuf,
    },
}

type Outcome = Result<Report, String>;

fn limit(allow_large: bool, default: SizeLimit) -> SizeLimit {
    if allow_large {
        SizeLimit::UNBOUNDED
    } else {
        default
    }
}

fn read_gens(p: &Path) -> Result<GenSet, String> {
    let text =
        std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
    GenSet::from_json(&text).map_err(|e| format!("{}: {e}", p.display()))
}

fn load_gens(path: Option<&Path>, genus: usize) -> Result<GenSet, String> {
    let gens = match path {
        Some(p) => read_gens(p)?,
        None => standard_genset(genus).map_err(|e| e.to_string())?,
    };
    if gens.genus() != genus {
        return Err(format!(
            "generator set has genus {}, expected {genus}",
            gens.genus()
        ));
    }
    Ok(gens)
}

fn invariants(at: &GenusDegree, big: bool) -> Outcome {
    let (g, k) = (at.genus, at.degree);
    let dim = invariant_basis::<Rational>(g, k, limit(big, SizeLimit::TENSOR))
        .map_err(|e| e.to_string())?
        .dim();
    let expected = if k % 2 == 1 {
        Some(0)
    } else if k <= 2 * g {
        Some(double_factorial(k as i64 - 1) as usize)
    } else {
        None
    };
    #[derive(Serialize)]
    struct Out {
        genus: usize,
        degree: usize,
        dim: usize,
        expected_dim: Option<usize>,
    }
    let out = Out {
        genus: g,
        degree: k,
        dim,
        expected_dim: expected,
    };
    Ok(Report::new(
        "invariants",
        "invariant-dimension-matches-matchings",
        expected.map(|e| e == dim),
        out,
    ))
}

fn chord_basis(at: &GenusChords, big: bool) -> Outcome {
    let r = chord_rank_report::<Rational>(at.genus, at.chords, limit(big, SizeLimit::TENSOR))
        .map_err(|e| e.to_string())?;
    let ok = if at.chords <= at.genus {
        r.injective && r.surjective
    } else {
        r.surjective
    };
    Ok(Report::new(
        "chord-basis",
        "chord-invariants-span-invariants",
        Some(ok),
        r,
    ))
}

fn delta_check(at: &GenusChords) -> Outcome {
    let r = independence_report::<Rational>(at.genus, at.chords).map_err(|e| e.to_string())?;
    let ok = r.zero_on_c0 && r.independent && r.collisions == 0;
    Ok(Report::new(
        "delta-check",
        "johnson-image-separates-chord-invariants",
        Some(ok),
        r,
    ))
}

fn magnus_cmd(at: &GenusDegree, word: &str) -> Outcome {
    let w = FreeWord::parse(at.genus, word).map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct Out {
        word: FreeWord,
        degree: usize,
        expansion: passi_core::Poly,
    }
    let expansion = magnus::<Rational>(&w, at.degree).untruncated();
    Ok(Report::new(
        "magnus",
        "magnus-expansion",
        None,
        Out {
            word: w,
            degree: at.degree,
            expansion,
        },
    ))
}

fn theorem_a(at: &GenusDegree, gens: Option<&Path>, explore: bool, big: bool) -> Outcome {
    let set = load_gens(gens, at.genus)?;
    let r = theorem_a_report::<Rational>(
        at.genus,
        at.degree,
        &set,
        explore,
        limit(big, SizeLimit::GROUP_RING),
    )
    .map_err(|e| e.to_string())?;
    let verified = r.in_range.then_some(r.equal);
    Ok(Report::new(
        "theorem-a",
        "fixed-space-is-boundary-powers",
        verified,
        r,
    ))
}

fn main_lemma(at: &GenusChords, gens: Option<&Path>, big: bool) -> Outcome {
    let set = load_gens(gens, at.genus)?;
    let r =
        main_lemma_report::<Rational>(at.genus, at.chords, &set, limit(big, SizeLimit::GROUP_RING))
            .map_err(|e| e.to_string())?;
    let ok = r.computed_dim == 1 && r.is_span_of_zeta_power && r.projection_spans_omega_power;
    Ok(Report::new(
        "main-lemma",
        "graded-block-fixed-line",
        Some(ok),
        r,
    ))
}

fn orbit(word: &str, gens: Option<&Path>, genus: Option<usize>, budget: usize) -> Outcome {
    let set = match (gens, genus) {
        (Some(p), None) => read_gens(p)?,
        (p, Some(g)) => load_gens(p, g)?,
        (None, None) => return Err("orbit needs --gens or --genus".into()),
    };
    let w = FreeWord::parse(set.genus(), word).map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct Out {
        word: FreeWord,
        generator_set: String,
        budget: usize,
        #[serde(flatten)]
        sample: passi_core::mcg::OrbitSample,
    }
    let sample = orbit_sample(&w, &set, budget).map_err(|e| e.to_string())?;
    let out = Out {
        word: w,
        generator_set: set.name().to_owned(),
        budget,
        sample,
    };
    Ok(Report::new("orbit", "orbit-growth-sample", None, out))
}

fn validate_gens(path: &Path) -> Outcome {
    #[derive(Deserialize)]
    struct File {
        name: String,
        genus: usize,
        generators: Vec<Endo>,
    }
    #[derive(Serialize)]
    struct Row {
        name: Option<String>,
        automorphism: Option<bool>,
        fixes_zeta: bool,
        torelli: bool,
        valid: bool,
    }
    #[derive(Serialize)]
    struct Out {
        name: String,
        genus: usize,
        generators: Vec<Row>,
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: File = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(e) = file.generators.iter().find(|e| e.genus() != file.genus) {
        return Err(format!(
            "generator of genus {} in a genus-{} set",
            e.genus(),
            file.genus
        ));
    }
    let rows: Vec<Row> = file
        .generators
        .par_iter()
        .map(|e| {
            let v = validate_endo(e, false).map_err(|err| err.to_string())?;
            Ok(Row {
                name: e.name().map(str::to_owned),
                valid: v.automorphism == Some(true) && v.fixes_zeta,
                automorphism: v.automorphism,
                fixes_zeta: v.fixes_zeta,
                torelli: v.torelli,
            })
        })
        .collect::<Result<_, String>>()?;
    let ok = rows.iter().all(|r| r.valid);
    let out = Out {
        name: file.name,
        genus: file.genus,
        generators: rows,
    };
    Ok(Report::new(
        "validate-gens",
        "generators-fix-boundary",
        Some(ok),
        out,
    ))
}

fn run(cli: &Cli) -> Outcome {
    let big = cli.allow_large;
    match &cli.command {
        Command::Invariants(at) => invariants(at, big),
        Command::ChordBasis(at) => chord_basis(at, big),
        Command::DeltaCheck(at) => delta_check(at),
        Command::Magnus { at, word } => magnus_cmd(at, word),
        Command::TheoremA { at, gens, explore } => theorem_a(at, gens.as_deref(), *explore, big),
        Command::MainLemma { at, gens } => main_lemma(at, gens.as_deref(), big),
        Command::Orbit {
            word,
            gens,
            genus,
            budget,
        } => orbit(word, gens.as_deref(), *genus, *budget),
        Command::ValidateGens { gens } => validate_gens(gens),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("passi: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(r) => {
            match cli.report {
                Format::Json => println!("{}", r.to_json()),
                Format::Text => print!("{}", r.to_text()),
            }
            if r.verified == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(msg) => {
            eprintln!("passi: {msg}");
            ExitCode::from(2)
        }
    }
}
