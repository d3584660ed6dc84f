//! Command-line surface of the foliation toolkit.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use folia::annot::Annotations;
use folia::dual::{dual_tree_dot, dual_tree_hash, unfold};
use folia::error::Error;
use folia::family::DEFAULT_SAMPLES;
use folia::localclass::classify_tree;
use folia::nerve::{build_nerve, nerve_dot, Mode};
use folia::parse::{parse_family, parse_oneform};
use folia::rat::rat;
use folia::reduction::{determinacy_bound, reduce, Config, DicriticalPolicy};
use folia::report::{full_pipeline, tree_to_json};

#[derive(Parser)]
#[command(
    name = "folia",
    about = "Blow-up reduction of plane polynomial 1-forms and the invariants of the induced foliations",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Certified,
    Annotated,
    Nondegenerate,
}

#[derive(Clone, Copy, ValueEnum)]
enum DicriticalArg {
    Abort,
    Mark,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutArg {
    Json,
    Dot,
    Text,
}

#[derive(Args)]
struct CommonOpts {
    /// Assumption mode for holonomy-dependent attributes.
    #[arg(long, value_enum, default_value = "certified")]
    mode: ModeArg,
    /// JSON annotations file (ids as printed by `reduce`).
    #[arg(long)]
    annotations: Option<String>,
    /// Depth of the resonant linearizability probe.
    #[arg(long, default_value_t = 10)]
    probe_depth: usize,
    /// Behavior on a dicritical blow-up.
    #[arg(long, value_enum, default_value = "abort")]
    dicritical: DicriticalArg,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    out: OutArg,
    /// Height guard for the reduction loop.
    #[arg(long, default_value_t = 64)]
    max_height: usize,
    /// Dimension cap for the Milnor stabilization.
    #[arg(long, default_value_t = 256)]
    milnor_cap: usize,
    /// Degree bound of the polynomial certificate searches.
    #[arg(long, default_value_t = 12)]
    search_degree: usize,
}

impl CommonOpts {
    fn config(&self) -> Config {
        Config {
            dicritical: match self.dicritical {
                DicriticalArg::Abort => DicriticalPolicy::Abort,
                DicriticalArg::Mark => DicriticalPolicy::Mark,
            },
            max_height: self.max_height,
            milnor_cap: self.milnor_cap,
            probe_depth: self.probe_depth,
            search_degree: self.search_degree,
        }
    }

    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Certified => Mode::CertifiedOnly,
            ModeArg::Annotated => Mode::Annotated,
            ModeArg::Nondegenerate => Mode::NonDegenerate,
        }
    }

    fn annotations(&self) -> Result<Annotations, Error> {
        match &self.annotations {
            None => Ok(Annotations::empty()),
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                Annotations::from_json(&text)
            }
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce the singularities of a 1-form and print the tree.
    Reduce {
        /// The 1-form, e.g. "2y dy - 3x^2 dx".
        form: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Full invariant report: multiplicities, Milnor number, verdicts,
    /// codimension numbers.
    Invariants {
        form: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Build and print the complete nerve with provenance.
    Nerve {
        form: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Finite-type verdict with witnesses.
    Tff {
        form: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Sampled equisingularity check for a one-parameter family.
    Equising {
        /// The family, e.g. "x dy + y*(y - t) dx".
        family: String,
        /// Comma-separated nonzero rational samples, e.g. "1/8,1/16".
        #[arg(long)]
        samples: Option<String>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Determinacy bound σ(v, h) for pre-reduction jets.
    Bound { v: u64, h: u64 },
}

fn parse_samples(text: &str) -> Result<Vec<num_rational_shim::BigRational>, Error> {
    let mut out = Vec::new();
    for (i, piece) in text.split(',').enumerate() {
        let piece = piece.trim();
        let parts: Vec<&str> = piece.split('/').collect();
        let parse_int = |s: &str| -> Result<i64, Error> {
            s.parse().map_err(|_| Error::Parse {
                line: 1,
                column: i + 1,
                expected: format!("rational sample (found `{}`)", piece),
            })
        };
        let r = match parts.as_slice() {
            [n] => rat(parse_int(n)?, 1),
            [n, d] => rat(parse_int(n)?, parse_int(d)?),
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    column: i + 1,
                    expected: format!("rational sample (found `{}`)", piece),
                })
            }
        };
        out.push(r);
    }
    Ok(out)
}

mod num_rational_shim {
    pub use num_rational::BigRational;
}

fn run() -> Result<i32, Error> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Bound { v, h } => {
            if v < 1 || h < 1 {
                eprintln!("bound: v and h must be positive");
                return Ok(2);
            }
            println!("{}", determinacy_bound(v, h));
            Ok(0)
        }
        Cmd::Reduce { form, opts } => {
            let cfg = opts.config();
            let form = parse_oneform(&form)?;
            let mut tree = reduce(&form, &cfg)?;
            classify_tree(&mut tree, &cfg)?;
            match opts.out {
                OutArg::Json => {
                    let tj = tree_to_json(&tree, true);
                    println!("{}", serde_json::to_string_pretty(&tj)?);
                }
                OutArg::Dot => {
                    print!("{}", dual_tree_dot(&unfold(&tree)));
                }
                OutArg::Text => {
                    let ct = unfold(&tree);
                    println!("height {}", tree.height);
                    if let Some(w) = &tree.saturation {
                        eprintln!("warning: {}", w);
                    }
                    for c in &tree.comps {
                        println!(
                            "D{}: e={}, m={}, m_ideal={}, orbit={}{}",
                            c.id + 1,
                            c.self_int,
                            c.m_omega,
                            c.m_ideal,
                            c.orbit,
                            if c.dicritical { ", dicritical" } else { "" }
                        );
                    }
                    for p in tree.cime_points() {
                        let kind = tree
                            .classifications
                            .get(&p.id)
                            .map(|r| format!("{:?}", r.kind))
                            .unwrap_or_default();
                        println!(
                            "p{} (height {}, orbit {}): {}",
                            p.id, p.height, p.orbit, kind
                        );
                    }
                    println!("dual tree hash {:016x}", dual_tree_hash(&ct));
                }
            }
            Ok(0)
        }
        Cmd::Invariants { form, opts } => {
            let cfg = opts.config();
            let ann = opts.annotations()?;
            let form = parse_oneform(&form)?;
            let (_tree, report, _nerve) = full_pipeline(&form, opts.mode(), &ann, &cfg)?;
            match opts.out {
                OutArg::Json | OutArg::Dot => {
                    println!("{}", serde_json::to_string_pretty(&report)?);
                }
                OutArg::Text => {
                    println!("nu0 = {}", report.nu0);
                    match report.mu0 {
                        Some(m) => println!("mu0 = {}", m),
                        None => println!("mu0 = (cap exceeded)"),
                    }
                    println!("m_omega = {:?}", report.m_omega);
                    println!("m_ideal = {:?}", report.m_ideal);
                    println!(
                        "second kind: {}{}",
                        report.second_kind,
                        if report.second_kind_witnesses.is_empty() {
                            String::new()
                        } else {
                            format!(" (witnesses {:?})", report.second_kind_witnesses)
                        }
                    );
                    println!("semi-hyperbolic: {}", report.semi_hyperbolic);
                    println!("delta_hat = {}", report.delta_hat);
                    if let (Some(s), Some(t)) = (report.sigma_hat, report.tau_hat) {
                        println!("sigma_hat = {}, tau_hat = {}", s, t);
                    }
                    println!(
                        "beta_hat in [{}, {}] (epsilon {})",
                        report
                            .beta_hat
                            .lo
                            .map(|v| v.to_string())
                            .unwrap_or_else(|| "?".into()),
                        report
                            .beta_hat
                            .hi
                            .map(|v| v.to_string())
                            .unwrap_or_else(|| "?".into()),
                        report.beta_hat.epsilon_status
                    );
                    println!("tff: {}", report.tff);
                    println!(
                        "checks: recurrence {}, formula46 {} ({} = {}), cs sums {}, crosscheck {}",
                        report.checks.recurrence_ok,
                        report.checks.formula46_ok,
                        report.checks.formula46_lhs,
                        report.checks.formula46_rhs,
                        report.checks.cs_sums_ok,
                        report.checks.crosscheck_ok
                    );
                }
            }
            Ok(0)
        }
        Cmd::Nerve { form, opts } => {
            let cfg = opts.config();
            let ann = opts.annotations()?;
            let form = parse_oneform(&form)?;
            let mut tree = reduce(&form, &cfg)?;
            classify_tree(&mut tree, &cfg)?;
            let nerve = build_nerve(&tree, opts.mode(), &ann)?;
            match opts.out {
                OutArg::Json => println!("{}", serde_json::to_string_pretty(&nerve)?),
                OutArg::Dot => print!("{}", nerve_dot(&nerve)),
                OutArg::Text => {
                    for v in &nerve.vertices {
                        println!(
                            "{} [{}]: color {:?} ({:?}), weight {:?}",
                            v.backref,
                            match v.vtype {
                                folia::nerve::VType::Type0 => "type 0",
                                folia::nerve::VType::Type1 => "type 1",
                            },
                            v.color.value,
                            v.color.provenance,
                            v.weight.value
                        );
                    }
                    for e in &nerve.edges {
                        println!(
                            "edge {} -- {}: color {:?}, bij ({:?}, {:?})",
                            nerve.vertices[e.v0].backref,
                            nerve.vertices[e.v1].backref,
                            e.color.value,
                            e.bij0.value,
                            e.bij1.value
                        );
                    }
                }
            }
            Ok(0)
        }
        Cmd::Tff { form, opts } => {
            let cfg = opts.config();
            let ann = opts.annotations()?;
            let form = parse_oneform(&form)?;
            let (_tree, report, _nerve) = full_pipeline(&form, opts.mode(), &ann, &cfg)?;
            match opts.out {
                OutArg::Json | OutArg::Dot => {
                    println!("{}", serde_json::to_string_pretty(&report)?);
                }
                OutArg::Text => {
                    println!("tff: {}", report.tff);
                    if let (Some(s), Some(t)) = (report.sigma_hat, report.tau_hat) {
                        println!(
                            "sigma_hat = {}, tau_hat = {}, delta_hat = {}",
                            s, t, report.delta_hat
                        );
                        println!(
                            "beta_hat in [{}, {}] (epsilon {})",
                            report.beta_hat.lo.unwrap_or(0),
                            report.beta_hat.hi.unwrap_or(0),
                            report.beta_hat.epsilon_status
                        );
                    }
                }
            }
            let ok = report.tff.starts_with("finite") || report.tff.starts_with("n/a");
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Equising {
            family,
            samples,
            opts,
        } => {
            let cfg = opts.config();
            let fam = parse_family(&family)?;
            let samples = match samples {
                Some(text) => parse_samples(&text)?,
                None => DEFAULT_SAMPLES.iter().map(|&(n, d)| rat(n, d)).collect(),
            };
            let report = folia::family::equising_sample_check(&fam, &samples, &cfg)?;
            match opts.out {
                OutArg::Json | OutArg::Dot => {
                    println!("{}", serde_json::to_string_pretty(&report)?);
                }
                OutArg::Text => {
                    for (t, v) in &report.samples {
                        println!("t = {}: {}", t, v);
                    }
                    println!(
                        "verdict: {} ({})",
                        if report.equisingular_at_samples {
                            "equisingular at the samples"
                        } else {
                            "fails"
                        },
                        report.disclaimer
                    );
                }
            }
            Ok(if report.equisingular_at_samples { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            let code = match e {
                Error::Parse { .. }
                | Error::Io(_)
                | Error::Json(_)
                | Error::UnknownAnnotationId(_)
                | Error::AnnotationConflict { .. }
                | Error::NotSingular => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
