//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when the analysis itself fails or stays
//! unresolved, 2 for bad input.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monogauge::arrangement::{
    builtin_profile, planar_points_auto, profile_from_file, rank2_flats, Arrangement, Family,
    SingularityProfile, G23_H3_ARRANGEMENT,
};
use monogauge::assembly::{analyze_and_assemble, rule};
use monogauge::engine::{analyze_character, divisibility_candidates, CharacterVerdict};
use monogauge::oracle::{build_eval_matrix, certify_vanishing, character_targets};
use monogauge::{par, selftest, Error, Result};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "monogauge",
    version,
    about = "Monodromy eigenvalues of line arrangements"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "MONOGAUGE_THREADS")]
    threads: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the vanishing criterion and assemble the characteristic polynomial.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Confirm every non-excluded character with the evaluation oracle.
        #[arg(long)]
        oracle: bool,
        /// Report a single character instead of the whole h^1.
        #[arg(long)]
        check_k: Option<u64>,
    },
    /// List rank-2 flats of an arrangement by multiplicity.
    Flats {
        #[command(flatten)]
        input: Input,
    },
    /// Rank computations for the evaluation map at each candidate character.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        check_k: Option<u64>,
        /// Write the evaluation matrix for `--check-k` to this path (`-` for stdout).
        #[arg(long, requires = "check_k")]
        dump_matrix: Option<PathBuf>,
    },
    /// Print the characteristic polynomial of h^1; fails when unresolved.
    Charpoly {
        #[command(flatten)]
        input: Input,
    },
    /// Run the acceptance battery.
    Selftest,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FamilyKind {
    /// A(m,m,n)
    Mmn,
    /// A(m,1,n)
    M1n,
    /// G_j
    Exceptional,
}

#[derive(Args, Debug)]
struct Input {
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    j: Option<u64>,
    /// Profile JSON file, or `builtin:G23` / `builtin:G31`.
    #[arg(long, conflicts_with = "arrangement")]
    profile: Option<String>,
    /// Arrangement text file, or `builtin:G23`.
    #[arg(long)]
    arrangement: Option<String>,
    /// Seed for choosing an affine chart.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Input {
    fn family(&self) -> Result<Option<Family>> {
        let need = |v: Option<u64>, name: &str| {
            v.ok_or_else(|| Error::OutOfRange(format!("--{name} is required for this family")))
        };
        Ok(match self.family {
            None => None,
            Some(FamilyKind::Mmn) => Some(Family::Monomial {
                m: need(self.m, "m")?,
                n: need(self.n, "n")?,
            }),
            Some(FamilyKind::M1n) => Some(Family::FullMonomial {
                m: need(self.m, "m")?,
                n: need(self.n, "n")?,
            }),
            Some(FamilyKind::Exceptional) => Some(Family::Exceptional {
                j: need(self.j, "j")?,
            }),
        })
    }

    fn arrangement(&self) -> Result<Option<Arrangement>> {
        match self.arrangement.as_deref() {
            None => Ok(None),
            Some("builtin:G23") => Arrangement::from_text(G23_H3_ARRANGEMENT).map(Some),
            Some(path) => Arrangement::from_file(path).map(Some),
        }
    }

    fn family_of_builtin(&self) -> Option<Family> {
        (self.arrangement.as_deref() == Some("builtin:G23"))
            .then_some(Family::Exceptional { j: 23 })
    }

    fn profile(&self) -> Result<SingularityProfile> {
        let family = self.family()?.or(self.family_of_builtin());
        if let Some(a) = self.arrangement()? {
            let (mut p, _) = planar_points_auto(&a, self.seed)?;
            if let Some(f) = family {
                check_degree(&f, p.curve_degree)?;
                p.label = Some(f.to_string());
                p.family = Some(f);
            }
            return Ok(p);
        }
        if let Some(source) = &self.profile {
            let mut p = if source.starts_with("builtin:") {
                builtin_profile(source)?
            } else {
                profile_from_file(source)?
            };
            if let Some(f) = family {
                check_degree(&f, p.curve_degree)?;
                p.family = Some(f);
            }
            return Ok(p);
        }
        match family {
            Some(f) => f.profile(),
            None => Err(Error::OutOfRange(
                "give one of --family, --profile or --arrangement".into(),
            )),
        }
    }

    fn lines(&self) -> Result<Arrangement> {
        if let Some(a) = self.arrangement()? {
            return Ok(a);
        }
        match self.family()? {
            Some(f) => f.arrangement(),
            None => Err(Error::OutOfRange("give --family or --arrangement".into())),
        }
    }
}

fn check_degree(f: &Family, d: u64) -> Result<()> {
    match f.degree() {
        Some(e) if e != d => Err(Error::OutOfRange(format!(
            "{f} has {e} lines, the input has {d}"
        ))),
        _ => Ok(()),
    }
}

fn print_json(v: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    );
}

fn verdict_line(v: &CharacterVerdict) -> String {
    format!(
        "k = {:>3}  N = {:>4}  sum a = {:>4}  {:?}",
        v.k, v.n, v.sum_a, v.status
    )
}

fn analyze(input: &Input, oracle: bool, check_k: Option<u64>, json_out: bool) -> Result<()> {
    let profile = input.profile()?;
    if let Some(k) = check_k {
        let v = analyze_character(&profile, k, oracle)?;
        if json_out {
            print_json(&serde_json::to_value(&v).expect("verdicts serialize"));
        } else {
            println!("{}", verdict_line(&v));
            for e in &v.evidence {
                println!("  {e}");
            }
        }
        return Ok(());
    }
    let (report, assembly) = analyze_and_assemble(&profile, oracle)?;
    if json_out {
        print_json(&json!({
            "profile": profile.to_json(),
            "report": report.to_json(),
            "assembly": assembly.to_json(),
        }));
        return Ok(());
    }
    let label = profile.label.clone().unwrap_or_else(|| "profile".into());
    println!(
        "{label}: degree {}, {} singular points",
        report.degree,
        profile.point_count()
    );
    for e in &report.entries {
        println!(
            "  {} x {}  local orders {:?}",
            e.count, e.kind, e.eigenvalue_orders
        );
    }
    for v in report
        .verdicts
        .iter()
        .filter(|v| !v.i_k.is_empty() || !v.status.is_excluded())
    {
        println!("{}", verdict_line(v));
    }
    println!("h1 candidates: {:?}", report.h1_candidates);
    for r in &assembly.per_k {
        if report.h1_candidates.contains(&r.k) {
            println!("  k = {} (order {}): {}", r.k, r.order, r.resolution);
        }
    }
    println!("Delta(t) = {}", assembly.to_text());
    if let Some(src) = &assembly.source {
        println!("closed form: {src}");
    }
    Ok(())
}

fn flats(input: &Input, json_out: bool) -> Result<()> {
    let a = input.lines()?;
    let flats = rank2_flats(&a);
    let mut counts = std::collections::BTreeMap::new();
    for f in &flats {
        *counts.entry(f.multiplicity()).or_insert(0u64) += 1;
    }
    if json_out {
        print_json(&json!({
            "lines": a.len(),
            "multiplicities": counts.iter().map(|(m, c)| json!({"multiplicity": m, "count": c})).collect::<Vec<_>>(),
            "flats": flats.iter().map(|f| &f.members).collect::<Vec<_>>(),
        }));
    } else {
        println!("{} lines", a.len());
        for (m, c) in &counts {
            println!("  {c} points of multiplicity {m}");
        }
    }
    Ok(())
}

fn oracle(
    input: &Input,
    check_k: Option<u64>,
    dump: Option<&PathBuf>,
    json_out: bool,
) -> Result<()> {
    let profile = input.profile()?;
    let ks: Vec<u64> = match check_k {
        Some(k) => vec![k],
        None => divisibility_candidates(&profile)?.into_iter().collect(),
    };
    if let (Some(path), Some(k)) = (dump, check_k) {
        let d = profile.curve_degree as i64;
        let n = d - profile.ambient_n as i64 - 1 - k as i64;
        if n < 0 {
            return Err(Error::OutOfRange(format!("N = {n} < 0 for k = {k}")));
        }
        let m = build_eval_matrix(n as u64, &character_targets(&profile, k)?)?;
        if path.as_os_str() == "-" {
            std::io::stdout()
                .write_all(m.dump().as_bytes())
                .map_err(|e| Error::Io(format!("stdout: {e}")))?;
        } else {
            std::fs::write(path, m.dump())
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        }
    }
    let outcomes = par::map_slice(&ks, |&k| certify_vanishing(&profile, k))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    if json_out {
        print_json(&serde_json::to_value(&outcomes).expect("outcomes serialize"));
    } else {
        for o in &outcomes {
            println!(
                "k = {:>3}  N = {:>3}  jets {:>4}  columns {:>4}  rank {:>4}  {}",
                o.k,
                o.n,
                o.target_dim,
                o.columns,
                o.rank.map_or("-".into(), |r| r.to_string()),
                if o.certified {
                    "vanishing certified"
                } else {
                    "not certified"
                }
            );
        }
    }
    Ok(())
}

fn charpoly(input: &Input, json_out: bool) -> Result<()> {
    let family = input.family()?;
    // Exceptional groups without a built-in profile: closed form only.
    if let Some(f @ Family::Exceptional { .. }) = family {
        if input.profile.is_none() && input.arrangement.is_none() && f.profile().is_err() {
            let r = rule(&f)?;
            if json_out {
                print_json(
                    &json!({"family": f.to_string(), "delta": r.answer.to_text(), "source": r.source}),
                );
            } else {
                println!("{}", r.answer.to_text());
            }
            return Ok(());
        }
    }
    let profile = input.profile()?;
    let (_, assembly) = analyze_and_assemble(&profile, false)?;
    if json_out {
        print_json(&assembly.to_json());
    } else {
        println!("{}", assembly.to_text());
    }
    if !assembly.resolved {
        let orders: Vec<String> = assembly
            .placeholders
            .iter()
            .map(|p| p.order.to_string())
            .collect();
        return Err(Error::Unresolved(format!(
            "multiplicities of Phi_e unknown for e in {{{}}}",
            orders.join(", ")
        )));
    }
    Ok(())
}

fn run_selftest(json_out: bool) -> Result<()> {
    let results = selftest::run_all();
    if json_out {
        print_json(&selftest::to_json(&results));
    } else {
        for r in &results {
            println!(
                "criterion {:>2}: {}  {}",
                r.id,
                if r.passed { "PASS" } else { "FAIL" },
                r.name
            );
        }
    }
    match results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.id.to_string())
        .collect::<Vec<_>>()
    {
        f if f.is_empty() => Ok(()),
        f => Err(Error::SoundnessViolation(format!(
            "criteria failed: {}",
            f.join(", ")
        ))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_out = cli.json;
    let outcome = par::install(cli.threads, || match &cli.command {
        Command::Analyze {
            input,
            oracle: o,
            check_k,
        } => analyze(input, *o, *check_k, json_out),
        Command::Flats { input } => flats(input, json_out),
        Command::Oracle {
            input,
            check_k,
            dump_matrix,
        } => oracle(input, *check_k, dump_matrix.as_ref(), json_out),
        Command::Charpoly { input } => charpoly(input, json_out),
        Command::Selftest => run_selftest(json_out),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_analysis_failure() { 1 } else { 2 })
        }
    }
}
