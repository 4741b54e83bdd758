//! Batch front end: act on points, draw orbit machines, push elements
//! through the conjugation, run the verification suites, classify.
//!
//! Exit codes: 0 success/verified, 1 verification counterexample,
//! 2 usage or precondition error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use vng::classify::{certificate_check, classify};
use vng::conjugation::ConjugationContext;
use vng::dynamics::semiregularity_obstruction;
use vng::elements::TableElement;
use vng::perm::{EnumBudget, Perm, PermGroup, Transversal};
use vng::transducer::{OrbitTransducer, SyncTransducer};
use vng::verify::{commutation_suite, product_closure_suite, transversal_identity_suite};
use vng::words::{EPPoint, Word};

#[derive(Parser)]
#[command(name = "vng", version, about = "Exact computation in the groups V_n(G)")]
struct Cli {
    /// Worker threads for the parallel suites (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply an element file to an eventually periodic point.
    Act {
        /// Element file: row lines "a -> b ; (cycles)" or the JSON form.
        element: PathBuf,
        /// Point "pre(per)", letters 1-based, e.g. "1(2)".
        point: String,
        /// Alphabet size; inferred from the inputs when omitted.
        #[arg(long)]
        degree: Option<u8>,
    },
    /// Build the orbit machine of a semiregular group and a transversal.
    Transducer {
        /// Group by generators, e.g. "<(1 2)(3 4),(1 3)(2 4)>".
        #[arg(long)]
        group: String,
        /// Transversal: comma-separated 1-based letters, one per orbit.
        /// Defaults to the least letter of each orbit.
        #[arg(long = "R")]
        reps: Option<String>,
        /// Start state, a group element like "(1 2)". Defaults to "()".
        #[arg(long)]
        start: Option<String>,
        /// Use the inverse machine.
        #[arg(long)]
        inverse: bool,
        /// Emit DOT.
        #[arg(long)]
        dot: bool,
        /// Emit JSON.
        #[arg(long)]
        json: bool,
        /// Run a 1-based word through the machine and print its image.
        #[arg(long)]
        apply: Option<String>,
        #[arg(long)]
        degree: Option<u8>,
    },
    /// Conjugate an element of V_n(HG) into V_n(G) (or back with --inverse).
    Phi {
        #[arg(long = "H")]
        h: String,
        /// Transversal for H; defaults to the least letter of each orbit.
        #[arg(long = "R")]
        reps: Option<String>,
        #[arg(long = "G")]
        g: String,
        element: PathBuf,
        /// Map from V_n(G) back into V_n(HG).
        #[arg(long)]
        inverse: bool,
        /// Emit the image as JSON instead of an annotated element file.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        degree: Option<u8>,
    },
    /// Run a verification suite; non-clean results exit 1.
    Verify {
        /// Check the machine commutation identities and the transversal
        /// twist exhaustively on all words up to --max-word-len.
        #[arg(long)]
        lemmas: bool,
        /// Audit one conjugation context on random samples.
        #[arg(long)]
        homomorphism: bool,
        /// Produce the finite-orbit obstruction for a non-free group.
        #[arg(long)]
        dynamics: bool,
        /// Degree(s): repeatable for --lemmas, single otherwise.
        #[arg(long = "n")]
        degrees: Vec<u8>,
        #[arg(long, default_value_t = 10)]
        max_word_len: usize,
        /// Group for --dynamics.
        #[arg(long)]
        group: Option<String>,
        #[arg(long = "H")]
        h: Option<String>,
        #[arg(long = "R")]
        reps: Option<String>,
        #[arg(long = "G")]
        g: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest degree the subgroup enumeration will accept.
        #[arg(long, default_value_t = 5)]
        max_degree: u8,
        #[arg(long)]
        json: bool,
    },
    /// Compute the certified isomorphism classes of the V_n(G) at degree n.
    Classify {
        n: u8,
        /// JSON file holding the expected partition as arrays of generator
        /// strings; mismatch exits 1.
        #[arg(long)]
        expect: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 5)]
        max_degree: u8,
    },
}

fn main() -> ExitCode {
    // die quietly when the read end of a pipe closes, like any filter
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: thread count not applied: {e}");
        }
    }
    #[cfg(not(feature = "parallel"))]
    if cli.threads.is_some() {
        eprintln!("warning: sequential build; --threads ignored");
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Largest 1-based letter mentioned in any spec string, as a degree guess.
/// Only digit runs count, so it is reliable for cycle notation and for
/// digit-per-letter words at degree ≤ 9; larger alphabets need --degree.
fn inferred_degree(specs: &[&str], explicit: Option<u8>) -> Result<u8> {
    if let Some(n) = explicit {
        return Ok(n);
    }
    let mut best: u32 = 0;
    for s in specs {
        let mut run: u32 = 0;
        for ch in s.chars().chain(" ".chars()) {
            if let Some(d) = ch.to_digit(10) {
                run = run * 10 + d;
            } else {
                best = best.max(run);
                run = 0;
            }
        }
    }
    if best < 2 {
        bail!("cannot infer the alphabet size; pass --degree");
    }
    u8::try_from(best).context("degree out of range")
}

fn parse_reps(s: &str) -> Result<Vec<u8>> {
    s.split(',')
        .map(|t| {
            let x: u8 = t.trim().parse().with_context(|| format!("bad letter {t:?}"))?;
            if x == 0 {
                bail!("letters are 1-based");
            }
            Ok(x - 1)
        })
        .collect()
}

fn transversal(h: &PermGroup, reps: &Option<String>) -> Result<Transversal> {
    Ok(match reps {
        Some(s) => Transversal::new(h, parse_reps(s)?)?,
        None => Transversal::canonical(h)?,
    })
}

fn format_reps(reps: &[u8]) -> String {
    let inner: Vec<String> = reps.iter().map(|r| (r + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn load_element(path: &PathBuf, degree: Option<u8>, extra: &str) -> Result<TableElement> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(&text).context("element JSON")?;
        return Ok(TableElement::from_json(&v)?);
    }
    // words in element files are digit-per-letter, so the alphabet guess
    // looks at single digits (strip comments first); degree > 9 files
    // need an explicit --degree
    let n = match degree {
        Some(n) => n,
        None => {
            let visible = text.lines().map(|l| l.split('#').next().unwrap_or(""));
            let top = visible
                .chain([extra])
                .flat_map(|l| l.chars())
                .filter_map(|c| c.to_digit(10))
                .max()
                .unwrap_or(0) as u8;
            if top < 2 {
                bail!("cannot infer the alphabet size; pass --degree");
            }
            top
        }
    };
    Ok(TableElement::parse(&text, n)?)
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Act { element, point, degree } => {
            let p = EPPoint::parse(&point)?;
            let e = load_element(&element, degree, &point)?;
            p.validate_degree(e.degree())?;
            println!("{}", e.apply(&p));
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Transducer { group, reps, start, inverse, dot, json, apply, degree } => {
            let joined = reps.clone().unwrap_or_default();
            let n = inferred_degree(&[group.as_str(), joined.as_str()], degree)?;
            let h = PermGroup::parse(&group, n)?;
            let t = transversal(&h, &reps)?;
            let start = match &start {
                Some(s) => Perm::parse(s, n)?,
                None => Perm::identity(n),
            };
            let built = OrbitTransducer::new(&t, &start)?;
            let m = if inverse { built.inverse() } else { built.machine().clone() };
            if let Some(w) = apply {
                let w = Word::parse(&w)?;
                w.validate_degree(n)?;
                println!("{}", m.apply_word(&w).0);
            } else if dot {
                print!("{}", m.to_dot());
            } else if json {
                println!("{}", serde_json::to_string_pretty(&m.to_json())?);
            } else {
                print!("{}", summarize(&m));
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Phi { h, reps, g, element, inverse, json, degree } => {
            let n = inferred_degree(
                &[h.as_str(), g.as_str(), reps.clone().unwrap_or_default().as_str()],
                degree,
            )?;
            let hgrp = PermGroup::parse(&h, n)?;
            let ggrp = PermGroup::parse(&g, n)?;
            let t = transversal(&hgrp, &reps)?;
            let ctx = ConjugationContext::new(&t, &ggrp)?;
            let e = load_element(&element, Some(n), "")?;
            let image = if inverse { ctx.phi_inverse(&e)? } else { ctx.phi(&e)? };
            if json {
                println!("{}", serde_json::to_string_pretty(&image.to_json())?);
            } else {
                println!(
                    "# conjugated through the orbit machine of H={hgrp}, R={}, G={ggrp}",
                    format_reps(t.reps())
                );
                println!("# direction: {}", if inverse { "inverse" } else { "forward" });
                print!("{image}");
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Verify {
            lemmas,
            homomorphism,
            dynamics,
            degrees,
            max_word_len,
            group,
            h,
            reps,
            g,
            samples,
            seed,
            max_degree,
            json,
        } => {
            let budget = EnumBudget { max_degree };
            match (lemmas, homomorphism, dynamics) {
                (true, false, false) => {
                    let ns = if degrees.is_empty() { vec![2, 3] } else { degrees };
                    let com = commutation_suite(&ns, max_word_len, &budget)?;
                    let twist = transversal_identity_suite(&ns, &budget)?;
                    let closure = product_closure_suite(&ns, &budget)?;
                    if json {
                        let enc = |r: &vng::verify::SuiteReport| {
                            serde_json::json!({"checked": r.checked, "failures": r.failures})
                        };
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "commutation": enc(&com),
                                "transversal_twist": enc(&twist),
                                "product_closure": enc(&closure),
                            }))?
                        );
                    } else {
                        println!("commutation identities: {com}");
                        println!("transversal twist:      {twist}");
                        println!("product closure:        {closure}");
                    }
                    let clean = com.is_clean() && twist.is_clean() && closure.is_clean();
                    Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(1) })
                }
                (false, true, false) => {
                    let (Some(h), Some(g)) = (h, g) else {
                        bail!("--homomorphism needs --H and --G");
                    };
                    let n = inferred_degree(
                        &[h.as_str(), g.as_str(), reps.clone().unwrap_or_default().as_str()],
                        None,
                    )?;
                    let hgrp = PermGroup::parse(&h, n)?;
                    let t = transversal(&hgrp, &reps)?;
                    let ctx = ConjugationContext::new(&t, &PermGroup::parse(&g, n)?)?;
                    let report = ctx.verify_homomorphism(samples, seed);
                    if json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "samples": report.samples,
                                "failures": report.failures,
                            }))?
                        );
                    } else {
                        println!("{report}");
                    }
                    Ok(if report.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(1) })
                }
                (false, false, true) => {
                    let Some(spec) = group else {
                        bail!("--dynamics needs --group");
                    };
                    let n = match degrees.as_slice() {
                        [] => inferred_degree(&[spec.as_str()], None)?,
                        [n] => *n,
                        _ => bail!("--dynamics takes a single --n"),
                    };
                    let grp = PermGroup::parse(&spec, n)?;
                    match semiregularity_obstruction(&grp) {
                        Some(w) => {
                            if json {
                                println!("{}", serde_json::to_string_pretty(&w.to_json())?);
                            } else {
                                print!("{w}");
                            }
                        }
                        None => println!("the group acts freely; no finite-orbit obstruction exists"),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                _ => bail!("pick exactly one of --lemmas, --homomorphism, --dynamics"),
            }
        }

        Cmd::Classify { n, expect, json, max_degree } => {
            let budget = EnumBudget { max_degree };
            let report = classify(n, &budget)?;
            for class in &report.classes {
                for edge in &class.edges {
                    if !certificate_check(
                        &edge.certificate,
                        &report.reps[edge.product_class],
                        &report.reps[edge.factor_class],
                    ) {
                        eprintln!("certificate failed re-verification: {}", edge.certificate);
                        return Ok(ExitCode::from(1));
                    }
                }
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report.to_json())?);
            } else {
                print!("{report}");
            }
            if let Some(path) = expect {
                let text = fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let want: Vec<Vec<String>> =
                    serde_json::from_str(&text).context("expected-partition JSON")?;
                if report.matches_expected(&want)? {
                    println!("matches the expected partition");
                } else {
                    println!("DOES NOT match the expected partition");
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn summarize(m: &SyncTransducer) -> String {
    use std::fmt::Write;
    let v = m.to_json();
    let states: Vec<&str> = v["states"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "degree {}, {} states, start {}",
        m.degree(),
        m.state_count(),
        m.start_label()
    );
    for (i, label) in states.iter().enumerate() {
        let _ = write!(out, "{label}:");
        for e in v["delta"].as_array().unwrap() {
            if e["state"].as_u64().unwrap() as usize == i {
                let _ = write!(
                    out,
                    "  {}/{} -> {}",
                    e["in"], e["out"],
                    states[e["next"].as_u64().unwrap() as usize]
                );
            }
        }
        let _ = writeln!(out);
    }
    out
}
