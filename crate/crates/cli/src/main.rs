use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mspectra::adjunction::{j, j_map, q, q_map, quillen_adjunction_smoke, unit};
use mspectra::algebra::basis;
use mspectra::document::{pretty, print_morphism, print_multicomplex, read_morphism, read_multicomplex};
use mspectra::model::{
    acyclic_fibration_crosscheck, fibration_crosscheck, is_fibration, is_weak_equivalence, rlp_failures, rlp_window,
    Certificate, Verdict,
};
use mspectra::random::{Sampler, SamplerConfig};
use mspectra::representables::{generating_sets, zw, Side};
use mspectra::spectral::{classical_pages, page, PageTable};
use mspectra::suite::{envelope, run_suite, SuiteConfig};
use mspectra::{Bidegree, Error, Field, Graded, Morphism, Multicomplex, Window};

#[derive(Parser)]
#[command(name = "mspectra", version, about = "Spectral sequences of N-multicomplexes")]
struct Cli {
    /// Coefficient field: `Q` or `Fp:<p>`. Inputs over another field are rejected.
    #[arg(long, global = true)]
    field: Option<Field>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct Pages {
    /// Model-structure parameter for the first spectral sequence.
    #[arg(short, default_value_t = 0)]
    r: usize,
    /// Model-structure parameter for the second spectral sequence.
    #[arg(short, default_value_t = 0)]
    s: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check the multicomplex relations (or strictness, for a morphism document).
    Validate { file: PathBuf },
    /// Normal-form basis of A_N in one bidegree.
    Basis {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// Window restriction of the representing object ZW_k(p,q).
    Zw {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, allow_hyphen_values = true)]
        window: Window,
    },
    /// Page table of one spectral sequence.
    Pages {
        file: PathBuf,
        #[arg(long, default_value = "first")]
        side: Side,
        #[arg(short)]
        r: usize,
        /// Include representative witness tuples.
        #[arg(long)]
        witnesses: bool,
    },
    /// Is the morphism in E_{r,s}?
    We {
        file: PathBuf,
        #[command(flatten)]
        pages: Pages,
        #[arg(long)]
        certificates: bool,
    },
    /// Is the morphism an (r,s)-fibration?
    Fib {
        file: PathBuf,
        #[command(flatten)]
        pages: Pages,
        #[arg(long)]
        certificates: bool,
    },
    /// Right lifting property against the generating sets over the support window.
    Rlp {
        file: PathBuf,
        #[command(flatten)]
        pages: Pages,
        /// Also decide the classes from pages and compare.
        #[arg(long)]
        crosscheck: bool,
    },
    /// The functors j and q, the unit, and sampled Quillen-adjunction checks.
    Adjoint {
        #[command(subcommand)]
        op: Adjoint,
    },
    /// Compare witness pages with the filtered total complex.
    Oracle {
        /// A multicomplex document; random samples when omitted.
        file: Option<PathBuf>,
        #[arg(long = "max-r", default_value_t = 4)]
        max_r: usize,
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the randomized check matrix.
    Suite {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Adjoint {
    /// j(M) for a bicomplex, or j(f) for a morphism of bicomplexes.
    J { file: PathBuf },
    /// q(L) for a 4-multicomplex, or q(f) for a morphism.
    Q { file: PathBuf },
    /// The unit L -> j q L.
    Unit { file: PathBuf },
    Smoke {
        #[arg(short, default_value_t = 1)]
        r: usize,
        #[arg(short, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit status and text for stdout.
struct Outcome {
    ok: bool,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn is_morphism_document(path: &Path) -> Result<bool, Error> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(v.get("source").is_some())
}

impl Cli {
    fn field(&self) -> Field {
        self.field.unwrap_or(Field::Rational)
    }

    fn check_field(&self, found: Field) -> Result<(), Error> {
        match self.field {
            Some(f) if f != found => Err(Error::FieldMismatch(f.to_string(), found.to_string())),
            _ => Ok(()),
        }
    }

    fn complex(&self, path: &Path) -> Result<Multicomplex, Error> {
        let doc = read_multicomplex(path)?;
        self.check_field(doc.complex.field())?;
        Ok(doc.complex)
    }

    fn morphism(&self, path: &Path) -> Result<Morphism, Error> {
        let f = read_morphism(path)?;
        self.check_field(f.source_complex().field())?;
        Ok(f)
    }

    fn emit(&self, ok: bool, command: &str, human: String, body: Value) -> Outcome {
        let text = match self.format {
            Format::Human => human,
            Format::Json => pretty(&envelope(command, body)),
        };
        Outcome { ok, text }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Validate { file } => validate(cli, file),
        Command::Basis { n, p, q } => {
            let words = basis(*n, Bidegree::new(*p, *q));
            let names: Vec<String> = words.iter().map(|w| w.to_string()).collect();
            let human = names.iter().map(|w| format!("{w}\n")).collect();
            Ok(cli.emit(true, "basis", human, json!({ "N": n, "p": p, "q": q, "basis": names })))
        }
        Command::Zw { n, k, p, q, window } => {
            let m = zw(*n, cli.field(), *k, Bidegree::new(*p, *q));
            let restricted = Multicomplex::from_graded(&m, *window);
            let outside = window.inflate(*n).iter().any(|t| !window.contains(t) && m.rank(t) > 0);
            Ok(Outcome { ok: true, text: print_multicomplex(&restricted, outside) })
        }
        Command::Pages { file, side, r, witnesses } => {
            let a = cli.complex(file)?;
            let t = page(&a, *side, *r)?;
            Ok(pages_output(cli, &t, *witnesses))
        }
        Command::We { file, pages, certificates } => {
            let f = cli.morphism(file)?;
            let v = is_weak_equivalence(&f, pages.r, pages.s)?;
            Ok(verdict_output(cli, "we", "weak equivalence", pages, &v, *certificates))
        }
        Command::Fib { file, pages, certificates } => {
            let f = cli.morphism(file)?;
            let v = is_fibration(&f, pages.r, pages.s)?;
            Ok(verdict_output(cli, "fib", "fibration", pages, &v, *certificates))
        }
        Command::Rlp { file, pages, crosscheck } => rlp(cli, file, pages, *crosscheck),
        Command::Adjoint { op } => adjoint(cli, op),
        Command::Oracle { file, max_r, n, samples, seed } => oracle(cli, file.as_deref(), *max_r, *n, *samples, *seed),
        Command::Suite { samples, seed } => {
            let report = run_suite(&SuiteConfig { seed: *seed, samples: *samples })?;
            let human = report
                .checks
                .iter()
                .map(|c| {
                    let status = if c.passed() { "PASS" } else { "FAIL" };
                    let detail = c.first_failure.as_deref().map(|d| format!("  ({d})")).unwrap_or_default();
                    format!("{status} {:<22} {:>6} cases{detail}\n", c.name, c.cases)
                })
                .collect();
            let body = serde_json::to_value(&report)?;
            Ok(cli.emit(report.passed, "suite", human, body))
        }
    }
}

fn validate(cli: &Cli, file: &Path) -> Result<Outcome, Error> {
    if is_morphism_document(file)? {
        let f = cli.morphism(file)?;
        let mut problems: Vec<String> = Vec::new();
        for (name, c) in [("source", f.source_complex()), ("target", f.target_complex())] {
            problems.extend(c.validate().iter().map(|v| format!("{name}: relation {} fails at {}", v.l, v.at)));
        }
        problems.extend(f.validate().iter().map(|v| format!("d_{} f != f d_{} at {}", v.i, v.i, v.at)));
        let human = if problems.is_empty() { "valid morphism\n".to_string() } else { lines(&problems) };
        return Ok(cli.emit(
            problems.is_empty(),
            "validate",
            human,
            json!({ "valid": problems.is_empty(), "problems": problems }),
        ));
    }
    let a = cli.complex(file)?;
    let problems: Vec<String> = a.validate().iter().map(|v| format!("relation {} fails at {}", v.l, v.at)).collect();
    let human = if problems.is_empty() { "valid\n".to_string() } else { lines(&problems) };
    Ok(cli.emit(problems.is_empty(), "validate", human, json!({ "valid": problems.is_empty(), "problems": problems })))
}

fn lines(items: &[String]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

fn prime(side: Side) -> &'static str {
    match side {
        Side::First => "'",
        Side::Second => "''",
    }
}

fn pages_output(cli: &Cli, t: &PageTable, witnesses: bool) -> Outcome {
    let mut human = format!("{}E_{}\n{:>5} {:>5} {:>5}\n", prime(t.side), t.r, "p", "q", "dim");
    let mut rows = Vec::new();
    for (at, pres) in &t.entries {
        if pres.dim() == 0 {
            continue;
        }
        human.push_str(&format!("{:>5} {:>5} {:>5}\n", at.p, at.q, pres.dim()));
        let mut row = json!({ "p": at.p, "q": at.q, "dim": pres.dim() });
        if witnesses {
            let reps: Vec<Vec<String>> =
                pres.representatives().iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
            for v in &reps {
                human.push_str(&format!("      [{}]\n", v.join(", ")));
            }
            row["witnesses"] = json!(reps);
        }
        rows.push(row);
    }
    cli.emit(true, "pages", human, json!({ "side": t.side, "r": t.r, "rows": rows }))
}

fn certificate_line(c: &Certificate) -> String {
    format!("{}E_{} at ({})", prime(c.side), c.page, c.at)
}

fn verdict_output(cli: &Cli, command: &str, what: &str, p: &Pages, v: &Verdict, certificates: bool) -> Outcome {
    let mut human = format!("{} {what} for (r,s) = ({},{})\n", if v.holds { "is a" } else { "not a" }, p.r, p.s);
    if !v.holds {
        let shown = if certificates { v.certificates.len() } else { 1 };
        for c in v.certificates.iter().take(shown) {
            human.push_str(&format!("  fails on {}\n", certificate_line(c)));
        }
    }
    let mut body = json!({ "r": p.r, "s": p.s, "holds": v.holds });
    if certificates || !v.holds {
        body["certificates"] = json!(v.certificates);
    }
    cli.emit(v.holds, command, human, body)
}

fn rlp(cli: &Cli, file: &Path, p: &Pages, crosscheck: bool) -> Result<Outcome, Error> {
    let f = cli.morphism(file)?;
    if crosscheck {
        let i = acyclic_fibration_crosscheck(&f, p.r, p.s)?;
        let jx = fibration_crosscheck(&f, p.r, p.s)?;
        let ok = i.agree && jx.agree;
        let human = format!(
            "I: lifting {} pages {} ({})\nJ: lifting {} pages {} ({})\n",
            i.by_lifting,
            i.by_pages,
            if i.agree { "agree" } else { "DISAGREE" },
            jx.by_lifting,
            jx.by_pages,
            if jx.agree { "agree" } else { "DISAGREE" },
        );
        return Ok(cli.emit(ok, "rlp", human, json!({ "r": p.r, "s": p.s, "I": i, "J": jx })));
    }
    let sets = match rlp_window(&f, p.r, p.s) {
        Some(w) => generating_sets(f.source_complex().arity(), p.r, p.s, w),
        None => Default::default(),
    };
    let fi: Vec<String> = rlp_failures(&f, &sets.cofibrations).iter().map(|g| g.to_string()).collect();
    let fj: Vec<String> = rlp_failures(&f, &sets.trivial_cofibrations).iter().map(|g| g.to_string()).collect();
    let ok = fi.is_empty() && fj.is_empty();
    let mut human = format!(
        "RLP against I_({r},{s}): {}\nRLP against J_({r},{s}): {}\n",
        fi.is_empty(),
        fj.is_empty(),
        r = p.r,
        s = p.s
    );
    for g in fi.iter().chain(&fj).take(5) {
        human.push_str(&format!("  no lift against {g}\n"));
    }
    let body = json!({
        "r": p.r, "s": p.s,
        "I": { "holds": fi.is_empty(), "failing": fi },
        "J": { "holds": fj.is_empty(), "failing": fj },
    });
    Ok(cli.emit(ok, "rlp", human, body))
}

fn adjoint(cli: &Cli, op: &Adjoint) -> Result<Outcome, Error> {
    let doc = |text: String| Outcome { ok: true, text };
    match op {
        Adjoint::J { file } => Ok(doc(if is_morphism_document(file)? {
            print_morphism(&j_map(&cli.morphism(file)?)?)
        } else {
            print_multicomplex(&j(&cli.complex(file)?)?, false)
        })),
        Adjoint::Q { file } => Ok(doc(if is_morphism_document(file)? {
            print_morphism(&q_map(&cli.morphism(file)?)?)
        } else {
            print_multicomplex(&q(&cli.complex(file)?)?, false)
        })),
        Adjoint::Unit { file } => Ok(doc(print_morphism(&unit(&cli.complex(file)?)?))),
        Adjoint::Smoke { r, s, samples, seed } => {
            let report = quillen_adjunction_smoke(*r, *s, *samples, *seed, cli.field())?;
            let human = format!(
                "surjective f: {} of {} give fibrations j(f)\nf in E_(0,0): {} of {} give j(f) in E_({r},{s})\n",
                report.fibrations_preserved, report.surjective, report.equivalences_preserved, report.equivalences
            );
            let body = serde_json::to_value(&report)?;
            Ok(cli.emit(report.passed(), "adjoint-smoke", human, body))
        }
    }
}

fn oracle(cli: &Cli, file: Option<&Path>, max_r: usize, n: usize, samples: usize, seed: u64) -> Result<Outcome, Error> {
    let inputs: Vec<Multicomplex> = match file {
        Some(f) => vec![cli.complex(f)?],
        None => {
            let mut s = Sampler::new(seed, SamplerConfig::new(n, cli.field()));
            (0..samples).map(|_| s.multicomplex()).collect()
        }
    };
    let mut mismatches = Vec::new();
    for (k, a) in inputs.iter().enumerate() {
        for r in 0..=max_r {
            let w = page(a, Side::First, r)?.dims();
            let c = classical_pages(a, r)?.dims();
            if w != c {
                mismatches.push(json!({ "instance": k, "r": r }));
            }
        }
    }
    let ok = mismatches.is_empty();
    let human = format!(
        "{} instance(s), pages 0..={max_r}: {}\n",
        inputs.len(),
        if ok { "witness and classical pages agree".to_string() } else { format!("{} mismatches", mismatches.len()) }
    );
    Ok(cli.emit(ok, "oracle", human, json!({ "instances": inputs.len(), "max_r": max_r, "mismatches": mismatches })))
}
