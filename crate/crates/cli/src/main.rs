//! `orq`: build, simulate and check commuting-circuit constructions.

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use orq::bits;
use orq::constructions;
use orq::dist::Distribution;
use orq::postselect;
use orq::statevector;
use orq::weak::{self, OracleSampler, SandwichSpec};
use orq::Circuit;

use manifest::{resolve_out, ManifestBuilder};

#[derive(Parser)]
#[command(
    name = "orq",
    version,
    about = "Commuting-circuit constructions and simulators"
)]
struct Cli {
    /// Cap the number of worker threads (0 = library default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct circuit families and write them as circuit files.
    Build {
        #[command(subcommand)]
        what: BuildCommand,
    },
    /// Exact output distribution from the dense oracle.
    Simulate(SimulateArgs),
    /// Clifford strong simulation by Pauli-string conjugation.
    StrongSim(StrongSimArgs),
    /// Weak sampling of a diagonal sandwich circuit.
    WeakSim(WeakSimArgs),
    /// Verification passes.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Conditional-acceptance statistics through the postselection filter.
    Postselect(PostselectArgs),
    /// Compare two distribution files.
    Compare(CompareArgs),
    /// End-to-end demonstration pipelines.
    Demo {
        #[command(subcommand)]
        what: DemoCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    Commuting,
}

#[derive(Subcommand)]
enum BuildCommand {
    /// OR reduction circuit on `b` inputs.
    OrReduction {
        #[arg(long)]
        b: usize,
        #[arg(long, value_enum, default_value = "plain")]
        variant: VariantArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Depth-3 teleportation compression of a circuit file.
    Compress3 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fold a bookkept circuit's outputs onto logarithmically many qubits.
    En {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// The commuting circuit equivalent to the folded one.
    Conjugate {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replace R(π/4) gates by magic-state gadgets.
    MagicCompile {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Clifford-friendly output folding (plain OR reduction, no inverse).
    EnPrime {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// OR reduction with its middle part in single-layer fan-out form.
    FanoutOr {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Input bits, msb first over the input qubits.
    #[arg(long)]
    x: String,
    /// Qubits to measure (comma separated); defaults to the circuit's
    /// output list.
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<usize>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the distribution as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StrongSimArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    x: String,
    /// Outcome bits for the output qubits (or for --subset when given).
    #[arg(long)]
    y: String,
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<usize>>,
    /// Also print each subset term of the average.
    #[arg(long)]
    audit: bool,
}

#[derive(Args)]
struct WeakSimArgs {
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    d: PathBuf,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    x: String,
    #[arg(long)]
    shots: u64,
    #[arg(long)]
    seed: u64,
    /// Also compute the exact distribution and report the total-variation
    /// distance of the empirical counts against it.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Pairwise commutativity of all gates.
    Commuting {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Per-gate support sizes against a locality bound.
    Locality {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        c: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Oracle,
    WeakSim,
}

#[derive(Args)]
struct PostselectArgs {
    #[arg(long, value_enum)]
    sampler: SamplerArg,
    /// The measured circuit (for `weak-sim`, the F part of the sandwich).
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long)]
    shots: u64,
    #[arg(long)]
    seed: u64,
    /// Compute the acceptance ratio from the exact distribution instead of
    /// sampling (oracle sampler only).
    #[arg(long)]
    exact: bool,
    /// Diagonal part of the sandwich (weak-sim sampler).
    #[arg(long)]
    d: Option<PathBuf>,
    /// Output-ancilla count of the sandwich (weak-sim sampler).
    #[arg(long)]
    l: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    /// Largest acceptable total-variation distance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Small circuit → depth-3 compression → output folding → commuting
    /// conjugation, with all checks.
    Theorem1 {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Manifest target for commands that write no output file.
fn default_manifest_target() -> PathBuf {
    resolve_out(Path::new("orq"))
}

fn read_circuit(path: &Path) -> Result<(Circuit, String)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading circuit file {}", path.display()))?;
    let circuit = orq::format::from_json(&text)?;
    Ok((circuit, text))
}

fn write_circuit(path: &Path, circuit: &Circuit) -> Result<()> {
    let text = orq::format::to_json(circuit)?;
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn role_names(circuit: &Circuit) -> Vec<serde_json::Value> {
    circuit
        .roles()
        .iter()
        .map(|r| match r {
            orq::Role::Input => serde_json::json!("input"),
            orq::Role::Zero => serde_json::json!("zero"),
            orq::Role::Product(s) => serde_json::json!({
                "state": [[s[0].re, s[0].im], [s[1].re, s[1].im]],
            }),
        })
        .collect()
}

fn circuit_details(circuit: &Circuit, origin_map: Option<&[usize]>) -> serde_json::Value {
    let mut value = serde_json::json!({
        "qubits": circuit.n_qubits(),
        "roles": role_names(circuit),
        "outputs": circuit.outputs(),
        "postselect": circuit.postselect(),
    });
    if let Some(map) = origin_map {
        value["origin_map"] = serde_json::json!(map);
    }
    value
}

fn print_distribution(dist: &Distribution) {
    println!(
        "{:<width$}  probability",
        "outcome",
        width = dist.n_bits().max(7)
    );
    for (key, p) in dist.outcome_map() {
        println!("{:<width$}  {}", key, p, width = dist.n_bits().max(7));
    }
}

fn run_build(what: &BuildCommand) -> Result<()> {
    match what {
        BuildCommand::OrReduction { b, variant, out } => {
            let variant = match variant {
                VariantArg::Plain => constructions::OrVariant::Plain,
                VariantArg::Commuting => constructions::OrVariant::Commuting,
            };
            let circuit = constructions::or_reduction(*b, variant);
            let out = resolve_out(out);
            write_circuit(&out, &circuit)?;
            ManifestBuilder::new("build or-reduction")
                .details(circuit_details(&circuit, None))
                .write_beside(&out)?;
            println!("wrote {}", out.display());
        }
        BuildCommand::Compress3 { input, out } => {
            let (circuit, text) = read_circuit(input)?;
            let compressed = constructions::compress_depth3(&circuit)?;
            let out = resolve_out(out);
            write_circuit(&out, &compressed.circuit)?;
            let mut details = circuit_details(&compressed.circuit, Some(&compressed.origin_map));
            details["teleport_qubits"] = serde_json::json!(compressed.teleport_qubits);
            details["depth"] = serde_json::json!(compressed.circuit.depth());
            ManifestBuilder::new("build compress3")
                .input(input, &text)
                .details(details)
                .write_beside(&out)?;
            println!(
                "wrote {} (depth {}, {} teleportation qubits)",
                out.display(),
                compressed.circuit.depth(),
                compressed.teleport_qubits.len()
            );
        }
        BuildCommand::En { a, out } => {
            let (circuit, text) = read_circuit(a)?;
            let folded = constructions::en(&circuit)?;
            let out = resolve_out(out);
            write_circuit(&out, &folded)?;
            ManifestBuilder::new("build en")
                .input(a, &text)
                .details(circuit_details(&folded, None))
                .write_beside(&out)?;
            println!(
                "wrote {} ({} outputs)",
                out.display(),
                folded.outputs().len()
            );
        }
        BuildCommand::Conjugate { a, out } => {
            let (circuit, text) = read_circuit(a)?;
            let commuting = constructions::commuting_equivalent(&circuit)?;
            let out = resolve_out(out);
            write_circuit(&out, &commuting)?;
            ManifestBuilder::new("build conjugate")
                .input(a, &text)
                .details(circuit_details(&commuting, None))
                .write_beside(&out)?;
            println!(
                "wrote {} ({} composite gates)",
                out.display(),
                commuting.gates().len()
            );
        }
        BuildCommand::MagicCompile { input, out } => {
            let (circuit, text) = read_circuit(input)?;
            let compiled = constructions::magic_compile(&circuit)?;
            let out = resolve_out(out);
            write_circuit(&out, &compiled.circuit)?;
            let mut details = circuit_details(&compiled.circuit, None);
            details["gadget_qubits"] = serde_json::json!(compiled.gadget_qubits);
            ManifestBuilder::new("build magic-compile")
                .input(input, &text)
                .details(details)
                .write_beside(&out)?;
            println!(
                "wrote {} ({} gadgets)",
                out.display(),
                compiled.gadget_qubits.len()
            );
        }
        BuildCommand::EnPrime { a, out } => {
            let (circuit, text) = read_circuit(a)?;
            let folded = constructions::en_prime(&circuit)?;
            let out = resolve_out(out);
            write_circuit(&out, &folded)?;
            ManifestBuilder::new("build en-prime")
                .input(a, &text)
                .details(circuit_details(&folded, None))
                .write_beside(&out)?;
            println!(
                "wrote {} ({} outputs)",
                out.display(),
                folded.outputs().len()
            );
        }
        BuildCommand::FanoutOr { b, out } => {
            let circuit = constructions::or_reduction_fanout(*b)?;
            let out = resolve_out(out);
            write_circuit(&out, &circuit)?;
            ManifestBuilder::new("build fanout-or")
                .details(circuit_details(&circuit, None))
                .write_beside(&out)?;
            println!("wrote {} ({} qubits)", out.display(), circuit.n_qubits());
        }
    }
    Ok(())
}

fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let (circuit, text) = read_circuit(&args.input)?;
    let x = bits::parse_bits(&args.x)?;
    let subset = args
        .subset
        .clone()
        .unwrap_or_else(|| circuit.outputs().to_vec());
    let dist = statevector::output_distribution(&circuit, &x, &subset)?;
    if args.json {
        println!("{}", dist.to_json());
    } else {
        print_distribution(&dist);
    }
    let mut manifest = ManifestBuilder::new("simulate");
    manifest.input(&args.input, &text);
    if let Some(out) = &args.out {
        let out = resolve_out(out);
        std::fs::write(&out, dist.to_json())?;
        manifest.write_beside(&out)?;
        eprintln!("wrote {}", out.display());
    } else {
        manifest.write_beside(&default_manifest_target())?;
    }
    Ok(())
}

fn run_strong_sim(args: &StrongSimArgs) -> Result<()> {
    let (circuit, text) = read_circuit(&args.input)?;
    let x = bits::parse_bits(&args.x)?;
    let y = bits::parse_bits(&args.y)?;
    let subset = args
        .subset
        .clone()
        .unwrap_or_else(|| circuit.outputs().to_vec());
    let p = orq::pauli::strong_sim_marginal(&circuit, &x, &subset, &y)?;
    println!("probability {p}");
    if args.audit {
        println!("{:<8}  term", "subset");
        for (mask, term) in orq::pauli::strong_sim_terms(&circuit, &x, &subset, &y)? {
            println!("{:<8}  {}", format!("{mask:b}"), term);
        }
    }
    ManifestBuilder::new("strong-sim")
        .input(&args.input, &text)
        .write_beside(&default_manifest_target())?;
    Ok(())
}

fn run_weak_sim(args: &WeakSimArgs) -> Result<()> {
    let (f, f_text) = read_circuit(&args.f)?;
    let (d, d_text) = read_circuit(&args.d)?;
    let x = bits::parse_bits(&args.x)?;
    let spec = SandwichSpec::new(f, d, args.l)?;
    let sampler = OracleSampler::new(spec.f(), &x)?;
    let counts = weak::weak_sample(&spec, &x, &sampler, args.seed, args.shots)?;
    println!("{:<width$}  count", "outcome", width = args.l.max(7));
    for (key, n) in counts.outcome_map() {
        println!("{:<width$}  {}", key, n, width = args.l.max(7));
    }
    if args.exact {
        let exact = weak::sandwich_exact(&spec, &x)?;
        let tv = counts.empirical()?.total_variation(&exact)?;
        println!("tv-vs-exact {tv}");
    }
    let mut manifest = ManifestBuilder::new("weak-sim");
    manifest
        .seed(args.seed)
        .input(&args.f, &f_text)
        .input(&args.d, &d_text);
    if let Some(out) = &args.out {
        let out = resolve_out(out);
        let doc = serde_json::json!({
            "counts": counts.outcome_map(),
            "qubits": spec.output_ancillas(),
            "shots": args.shots,
        });
        std::fs::write(&out, serde_json::to_string_pretty(&doc)?)?;
        manifest.write_beside(&out)?;
        eprintln!("wrote {}", out.display());
    } else {
        manifest.write_beside(&default_manifest_target())?;
    }
    Ok(())
}

fn run_check(what: &CheckCommand) -> Result<bool> {
    match what {
        CheckCommand::Commuting { input, tol } => {
            let (circuit, text) = read_circuit(input)?;
            let report = orq::analysis::check_pairwise_commuting(&circuit, *tol)?;
            let json = serde_json::json!({
                "check": "commuting",
                "pass": report.pass,
                "pairs": report.pairs_checked,
                "max_residual": report.max_residual,
                "tolerance": report.tolerance,
                "witness": report.witness.map(|w| serde_json::json!({
                    "i": w.i, "j": w.j, "magnitude": w.magnitude,
                })),
            });
            println!("{}", serde_json::to_string_pretty(&json)?);
            ManifestBuilder::new("check commuting")
                .input(input, &text)
                .write_beside(&default_manifest_target())?;
            Ok(report.pass)
        }
        CheckCommand::Locality { input, c } => {
            let (circuit, text) = read_circuit(input)?;
            let report = orq::analysis::check_c_local(&circuit, *c)?;
            let json = serde_json::json!({
                "check": "locality",
                "pass": report.pass,
                "bound": report.bound,
                "sizes": report.sizes,
                "violations": report.violations,
            });
            println!("{}", serde_json::to_string_pretty(&json)?);
            ManifestBuilder::new("check locality")
                .input(input, &text)
                .write_beside(&default_manifest_target())?;
            Ok(report.pass)
        }
    }
}

fn print_acceptance(acceptance: &postselect::Acceptance) {
    match acceptance {
        postselect::Acceptance::Estimate {
            acceptance,
            wilson_low,
            wilson_high,
            post_zero_events,
            shots,
        } => {
            println!("acceptance {acceptance}");
            println!("wilson99 [{wilson_low}, {wilson_high}]");
            println!("post-zero-events {post_zero_events} of {shots}");
        }
        postselect::Acceptance::NoPostselectionMass { shots } => {
            println!("no postselection mass in {shots} shots");
        }
    }
}

fn run_postselect(args: &PostselectArgs) -> Result<()> {
    let (circuit, text) = read_circuit(&args.circuit)?;
    let mut manifest = ManifestBuilder::new("postselect");
    manifest.seed(args.seed).input(&args.circuit, &text);
    let x = bits::parse_bits(&args.x)?;
    match args.sampler {
        SamplerArg::Oracle => {
            let dist = statevector::output_distribution(&circuit, &x, circuit.outputs())?;
            if dist.n_bits() < 2 {
                bail!("postselection needs at least 2 output bits");
            }
            if args.exact {
                match postselect::conditional_acceptance_exact(&dist)? {
                    postselect::ExactAcceptance::Value {
                        acceptance,
                        post_mass,
                    } => {
                        println!("acceptance {acceptance}");
                        println!("post-mass {post_mass}");
                    }
                    postselect::ExactAcceptance::NoPostselectionMass => {
                        println!("no postselection mass");
                    }
                }
            } else {
                let counts = dist.sample(args.seed, args.shots);
                let accepted = counts.counts()[1];
                let post_zero = counts.counts()[0] + counts.counts()[1];
                print_acceptance(&postselect::acceptance_from_counts(
                    accepted, post_zero, args.shots,
                ));
            }
        }
        SamplerArg::WeakSim => {
            let (d_path, l) = match (&args.d, args.l) {
                (Some(d), Some(l)) => (d, l),
                _ => bail!("--sampler weak-sim needs --d FILE and --l N"),
            };
            if args.exact {
                bail!("--exact is only available with --sampler oracle");
            }
            if l < 2 {
                bail!("postselection needs at least 2 output bits (--l >= 2)");
            }
            let (d, _) = read_circuit(d_path)?;
            let spec = SandwichSpec::new(circuit, d, l)?;
            let sampler = OracleSampler::new(spec.f(), &x)?;
            let counts = weak::weak_sample(&spec, &x, &sampler, args.seed, args.shots)?;
            let accepted = counts.counts()[1];
            let post_zero = counts.counts()[0] + counts.counts()[1];
            print_acceptance(&postselect::acceptance_from_counts(
                accepted, post_zero, args.shots,
            ));
        }
    }
    manifest.write_beside(&default_manifest_target())?;
    Ok(())
}

fn run_compare(args: &CompareArgs) -> Result<bool> {
    let a_text = std::fs::read_to_string(&args.a)?;
    let b_text = std::fs::read_to_string(&args.b)?;
    let a = Distribution::from_json(&a_text)?;
    let b = Distribution::from_json(&b_text)?;
    let tv = a.total_variation(&b)?;
    let max = a.max_abs_diff(&b)?;
    println!("tv {tv}");
    println!("max-entry {max}");
    ManifestBuilder::new("compare")
        .input(&args.a, &a_text)
        .input(&args.b, &b_text)
        .write_beside(&default_manifest_target())?;
    Ok(tv <= args.tol)
}

fn run_demo_theorem1(seed: u64) -> Result<bool> {
    let original = constructions::demo_circuit();
    let compressed = constructions::compress_depth3(&original)?;
    let a = constructions::with_output_bookkeeping(&compressed);
    let folded = constructions::en(&a)?;
    let commuting = constructions::commuting_equivalent(&a)?;
    let b_plus_1 = a.postselect().len();
    let m = folded.outputs().len() - 1;

    let mut rows: Vec<(&str, bool, String)> = Vec::new();

    let depth = compressed.circuit.depth();
    rows.push((
        "compression-depth-3",
        depth == 3,
        format!(
            "depth {depth}, {} teleport qubits",
            compressed.teleport_qubits.len()
        ),
    ));

    let report = orq::analysis::check_pairwise_commuting(&commuting, 1e-9)?;
    rows.push((
        "commuting",
        report.pass,
        format!("max residual {:.3e}", report.max_residual),
    ));

    let locality = orq::analysis::check_c_local(&commuting, 5)?;
    rows.push((
        "locality<=5",
        locality.pass,
        format!("max support {}", locality.sizes.iter().max().unwrap_or(&0)),
    ));

    let n_inputs = a.input_qubits().len();
    let mut dist_delta = 0.0f64;
    let mut fold_delta = 0.0f64;
    for xi in 0..1usize << n_inputs {
        let x = bits::bits_of(xi, n_inputs);
        let de = statevector::output_distribution(&folded, &x, folded.outputs())?;
        let dk = statevector::output_distribution(&commuting, &x, commuting.outputs())?;
        dist_delta = dist_delta.max(de.max_abs_diff(&dk)?);
        let da = statevector::output_distribution(&a, &x, a.outputs())?;
        for v in [false, true] {
            let mut ye = vec![false; m];
            ye.push(v);
            let mut ya = vec![false; b_plus_1];
            ya.push(v);
            fold_delta = fold_delta.max((de.prob_of_bits(&ye) - da.prob_of_bits(&ya)).abs());
        }
    }
    rows.push((
        "distribution-match",
        dist_delta <= 1e-9,
        format!("max delta {dist_delta:.3e}"),
    ));
    rows.push((
        "fold-identity",
        fold_delta <= 1e-9,
        format!("max delta {fold_delta:.3e}"),
    ));

    // A seeded spot check through the sampling path.
    let xi = (seed as usize) % (1usize << n_inputs);
    let x = bits::bits_of(xi, n_inputs);
    let dk = statevector::output_distribution(&commuting, &x, commuting.outputs())?;
    let emp = dk.sample(seed, 20_000).empirical()?;
    let tv = emp.total_variation(&dk)?;
    rows.push((
        "seeded-sampling",
        tv <= 0.05,
        format!("tv {tv:.4} on x={}", bits::format_bits(&x)),
    ));

    println!("{:<22} {:<6} detail", "check", "result");
    let mut all = true;
    for (name, pass, detail) in &rows {
        all &= *pass;
        println!(
            "{:<22} {:<6} {}",
            name,
            if *pass { "pass" } else { "FAIL" },
            detail
        );
    }
    ManifestBuilder::new("demo theorem1")
        .seed(seed)
        .write_beside(&default_manifest_target())?;
    Ok(all)
}

fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Build { what } => run_build(what).map(|_| true),
        Command::Simulate(args) => run_simulate(args).map(|_| true),
        Command::StrongSim(args) => run_strong_sim(args).map(|_| true),
        Command::WeakSim(args) => run_weak_sim(args).map(|_| true),
        Command::Check { what } => run_check(what),
        Command::Postselect(args) => run_postselect(args).map(|_| true),
        Command::Compare(args) => run_compare(args),
        Command::Demo {
            what: DemoCommand::Theorem1 { seed },
        } => run_demo_theorem1(*seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        orq::exec::configure_threads(cli.threads);
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
