use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use borelreg::ass::{irreducible_decomposition, AssReport};
use borelreg::betti::{betti_table, OracleBudget, COEFFICIENTS};
use borelreg::borel::{
    is_borel_type_exchange, is_borel_type_star, is_stable, is_strongly_stable, stability_witness,
};
use borelreg::chain::build_chain;
use borelreg::generate::{generate, instance_rng, GenParams, InstanceKind};
use borelreg::parse::{ideal_to_file_string, ideal_to_json, parse_ideal};
use borelreg::regularity::{check_sum_bound, reg_auto, reg_with_method, AutoOptions, Method};
use borelreg::verify::{properties, replay, run_verify, Outcome, VerifyConfig, VerifyReport};
use borelreg::{Error, MonomialIdeal};

#[derive(Parser)]
#[command(
    name = "borelreg",
    version,
    about = "Borel type ideals, sequential chains and regularity"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summary of an ideal: generators, degree, bound and predicates.
    Info { file: PathBuf },
    /// Decide Borel type; exits 1 with a witness when it fails.
    IsBorel { file: PathBuf },
    /// Decide stability; exits 1 with a witness when it fails.
    IsStable {
        file: PathBuf,
        /// Test strong stability instead.
        #[arg(long)]
        strongly: bool,
    },
    /// The sequential chain and its s-values.
    Chain { file: PathBuf },
    /// Castelnuovo-Mumford regularity.
    Reg {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RegMethod::Auto)]
        method: RegMethod,
        /// With `auto`, also run the Betti oracle when feasible.
        #[arg(long)]
        confirm: bool,
    },
    /// The truncation I_{>=e}.
    Truncate { e: u32, file: PathBuf },
    /// Sum of ideals in the same ring.
    Sum {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Check that reg of the sum is at most the largest part regularity.
        #[arg(long)]
        bound: bool,
    },
    /// Irreducible decomposition and associated primes.
    Ass { file: PathBuf },
    /// Graded Betti numbers from the lcm lattice oracle.
    Betti { file: PathBuf },
    /// Seeded random instances.
    Gen {
        #[arg(long, default_value = "borel_closure")]
        kind: InstanceKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Number of variables, `a..b` or a single value.
        #[arg(long, default_value = "2..4", value_parser = parse_range::<usize>)]
        n: RangeInclusive<usize>,
        /// Generator degrees, `a..b` or a single value.
        #[arg(long, default_value = "1..4", value_parser = parse_range::<u32>)]
        deg: RangeInclusive<u32>,
        /// Write instance-<k>.txt files here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Batch property checks over seeded instances.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value = "2..4", value_parser = parse_range::<usize>)]
        n: RangeInclusive<usize>,
        #[arg(long, default_value = "1..4", value_parser = parse_range::<u32>)]
        deg: RangeInclusive<u32>,
        #[arg(long)]
        kind: Option<InstanceKind>,
        /// Property to run (repeatable); all when absent.
        #[arg(long = "property")]
        properties: Vec<String>,
        /// Re-run one property on dumped instance files.
        #[arg(long, num_args = 1.., requires = "properties")]
        replay: Vec<PathBuf>,
        /// Write failing instances and their replay commands here.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
        /// List the properties and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RegMethod {
    Auto,
    Chain,
    Truncation,
    Oracle,
    Artinian,
    Renumbered,
}

fn parse_range<T>(s: &str) -> Result<RangeInclusive<T>, String>
where
    T: std::str::FromStr + PartialOrd + Copy,
{
    let parse = |t: &str| {
        t.trim()
            .parse::<T>()
            .map_err(|_| format!("not a number: `{t}`"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

type CliResult = Result<u8, Failure>;

enum Failure {
    Lib(Error, Option<PathBuf>),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e, None)
    }
}

fn read_ideal(path: &Path) -> Result<MonomialIdeal, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    parse_ideal(&text).map_err(|e| Failure::Lib(e, Some(path.to_path_buf())))
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialize")
    );
}

fn gens_json(ideal: &MonomialIdeal) -> Value {
    json!(ideal.gen_strings())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
        Err(Failure::Lib(e, path)) => {
            let code = e.exit_code() as u8;
            if cli.json {
                print_json(&error_json(&e));
            }
            match (path, &e) {
                (
                    Some(p),
                    Error::Parse {
                        line,
                        column,
                        message,
                    },
                ) => {
                    eprintln!("error: {}:{line}:{column}: {message}", p.display())
                }
                (Some(p), _) => eprintln!("error: {}: {e}", p.display()),
                (None, _) => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({ "error": e.to_string(), "exit_code": e.exit_code() });
    if let Error::NotBorelType(w) = e {
        v["witness"] = serde_json::to_value(w).expect("witness serializes");
    }
    v
}

fn run(cli: &Cli) -> CliResult {
    let json = cli.json;
    match &cli.command {
        Command::Info { file } => info(&read_ideal(file)?, json),
        Command::IsBorel { file } => is_borel(&read_ideal(file)?, json),
        Command::IsStable { file, strongly } => is_stable_cmd(&read_ideal(file)?, *strongly, json),
        Command::Chain { file } => chain(&read_ideal(file)?, json),
        Command::Reg {
            file,
            method,
            confirm,
        } => reg(&read_ideal(file)?, *method, *confirm, json),
        Command::Truncate { e, file } => {
            let t = read_ideal(file)?.truncate(*e);
            if json {
                print_json(&ideal_to_json(&t));
            } else {
                print!("{}", ideal_to_file_string(&t));
            }
            Ok(0)
        }
        Command::Sum { files, bound } => sum(files, *bound, json),
        Command::Ass { file } => ass(&read_ideal(file)?, json),
        Command::Betti { file } => betti(&read_ideal(file)?, json),
        Command::Gen {
            kind,
            seed,
            count,
            n,
            deg,
            out,
        } => {
            let params = GenParams {
                n_range: n.clone(),
                deg_range: deg.clone(),
            };
            gen(*kind, *seed, *count, &params, out.as_deref(), json)
        }
        Command::Verify {
            seed,
            count,
            n,
            deg,
            kind,
            properties: props,
            replay: files,
            dump_dir,
            list,
        } => {
            if *list {
                return Ok(list_properties(json));
            }
            let budget = OracleBudget::from_env()?;
            if !files.is_empty() {
                return replay_cmd(props, files, &budget, json);
            }
            let config = VerifyConfig {
                seed: *seed,
                count: *count,
                params: GenParams {
                    n_range: n.clone(),
                    deg_range: deg.clone(),
                },
                properties: props.clone(),
                kind: *kind,
                budget,
                ..VerifyConfig::default()
            };
            verify(&config, dump_dir.as_deref(), json)
        }
    }
}

fn info(ideal: &MonomialIdeal, json: bool) -> CliResult {
    let summary = if ideal.is_proper_nonzero() {
        Some((
            is_stable(ideal)?,
            is_strongly_stable(ideal)?,
            is_borel_type_star(ideal)?.verdict,
        ))
    } else {
        None
    };
    if json {
        let mut v = json!({
            "ring": ideal.nvars(),
            "variables": ideal.ring().names(),
            "generators": gens_json(ideal),
            "zero": ideal.is_zero(),
            "improper": ideal.is_improper(),
        });
        if let Some((stable, strongly, borel)) = summary {
            v["degree"] = json!(ideal.degree());
            v["max_var"] = json!(ideal.max_var());
            v["bound"] = json!(ideal.regularity_bound());
            v["artinian"] = json!(ideal.is_artinian());
            v["stable"] = json!(stable);
            v["strongly_stable"] = json!(strongly);
            v["borel_type"] = json!(borel);
        }
        print_json(&v);
        return Ok(0);
    }
    println!("ring:        {} variables", ideal.nvars());
    println!("ideal:       {ideal}");
    println!("generators:  {}", ideal.gens().len());
    if let Some((stable, strongly, borel)) = summary {
        println!("deg(I):      {}", ideal.degree());
        println!("m(I):        x{}", ideal.max_var());
        println!("bound:       {}", ideal.regularity_bound());
        println!("artinian:    {}", ideal.is_artinian());
        println!("stable:      {stable}");
        println!("strongly:    {strongly}");
        println!("borel type:  {borel}");
    }
    Ok(0)
}

fn is_borel(ideal: &MonomialIdeal, json: bool) -> CliResult {
    let star = is_borel_type_star(ideal)?;
    let exchange = is_borel_type_exchange(ideal)?;
    if star.verdict != exchange.verdict {
        return Err(Error::Internal(format!(
            "characterizations disagree on {ideal}: saturation {:?}, exchange {:?}",
            star.witness, exchange.witness
        ))
        .into());
    }
    if json {
        print_json(&json!({
            "borel_type": star.verdict,
            "saturation": star,
            "exchange": exchange,
        }));
    } else if star.verdict {
        println!("{ideal} is of Borel type");
    } else {
        println!("{ideal} is not of Borel type");
        if let Some(w) = &star.witness {
            println!("  saturation witness: {w}");
        }
        if let Some(w) = &exchange.witness {
            println!("  exchange witness:   {w}");
        }
    }
    Ok(if star.verdict { 0 } else { 1 })
}

fn is_stable_cmd(ideal: &MonomialIdeal, strongly: bool, json: bool) -> CliResult {
    if strongly {
        let verdict = is_strongly_stable(ideal)?;
        if json {
            print_json(&json!({ "strongly_stable": verdict }));
        } else {
            println!(
                "{ideal} is {}strongly stable",
                if verdict { "" } else { "not " }
            );
        }
        return Ok(if verdict { 0 } else { 1 });
    }
    let witness = stability_witness(ideal)?;
    if json {
        print_json(&json!({ "stable": witness.is_none(), "witness": witness }));
    } else {
        match &witness {
            None => println!("{ideal} is stable"),
            Some(w) => println!("{ideal} is not stable\n  witness: {w}"),
        }
    }
    Ok(if witness.is_none() { 0 } else { 1 })
}

fn chain(ideal: &MonomialIdeal, json: bool) -> CliResult {
    let chain = build_chain(ideal)?;
    let reg = if chain.borel_type {
        Some(chain.formula_regularity()?)
    } else {
        None
    };
    if json {
        let stages: Vec<Value> = chain
            .stages
            .iter()
            .map(|s| {
                json!({
                    "index": s.index,
                    "n_l": s.n_l,
                    "ideal": gens_json(&s.ideal),
                    "j_sat": gens_json(&s.j_sat),
                    "s": s.s_value,
                })
            })
            .collect();
        print_json(&json!({
            "borel_type": chain.borel_type,
            "length": chain.len(),
            "stages": stages,
            "regularity": reg,
        }));
        return Ok(0);
    }
    println!("{:>3}  {:>4}  {:>6}  ideal / saturation", "l", "n_l", "s");
    for s in &chain.stages {
        let sv = s
            .s_value
            .top()
            .map_or("zero".to_string(), |v| v.to_string());
        println!("{:>3}  {:>4}  {:>6}  I = {}", s.index, s.n_l, sv, s.ideal);
        println!("{:>21}J_sat = {}", "", s.j_sat);
    }
    match reg {
        Some(r) => println!("reg = {r} (chain formula, r = {})", chain.len()),
        None => println!("not of Borel type: the chain formula does not apply"),
    }
    Ok(0)
}

fn reg(ideal: &MonomialIdeal, method: RegMethod, confirm: bool, json: bool) -> CliResult {
    let budget = OracleBudget::from_env()?;
    let report = match method {
        RegMethod::Auto => reg_auto(
            ideal,
            &AutoOptions {
                budget,
                confirm_with_oracle: confirm,
            },
        )?,
        other => {
            let m = match other {
                RegMethod::Chain => Method::Chain,
                RegMethod::Truncation => Method::Truncation,
                RegMethod::Oracle => Method::Oracle,
                RegMethod::Artinian => Method::Artinian,
                RegMethod::Renumbered => Method::Renumbered,
                RegMethod::Auto => unreachable!(),
            };
            reg_with_method(ideal, m, &budget)?
        }
    };
    if json {
        print_json(&serde_json::to_value(&report).expect("report serializes"));
        return Ok(0);
    }
    println!("reg = {}", report.value);
    println!("method: {}", report.method);
    let agreement: Vec<String> = report
        .agreement
        .iter()
        .map(|(m, v)| format!("{m}={v}"))
        .collect();
    println!("agreement: {}", agreement.join(" "));
    println!("bound: {}", report.bound);
    if let Some(k) = report.coefficients {
        println!("coefficients: {k}");
    }
    Ok(0)
}

fn sum(files: &[PathBuf], bound: bool, json: bool) -> CliResult {
    let parts = files
        .iter()
        .map(|f| read_ideal(f))
        .collect::<Result<Vec<_>, _>>()?;
    let n = parts[0].nvars();
    if let Some((file, p)) = files.iter().zip(&parts).find(|(_, p)| p.nvars() != n) {
        return Err(Failure::Lib(
            Error::InvalidRing(format!("{} variables, expected {n}", p.nvars())),
            Some(file.clone()),
        ));
    }
    if bound {
        let report = check_sum_bound(&parts)?;
        if json {
            print_json(&json!({ "holds": report.holds(), "report": report }));
        } else {
            println!("sum: ({})", report.sum.join(", "));
            println!("part regularities: {:?}", report.part_regularities);
            println!("sum borel type: {}", report.sum_borel_type);
            match report.sum_regularity {
                Some(r) => println!(
                    "reg(sum) = {r} <= {}: {}",
                    report.max_part_regularity, report.bound_holds
                ),
                None => println!("reg(sum): not computed"),
            }
            println!(
                "truncation at {}: decomposes {}, stable {}",
                report.max_part_regularity, report.truncation_decomposes, report.truncation_stable
            );
        }
        return Ok(if report.holds() { 0 } else { 1 });
    }
    let total = parts[1..].iter().fold(parts[0].clone(), |a, p| a.sum(p));
    if json {
        print_json(&ideal_to_json(&total));
    } else {
        print!("{}", ideal_to_file_string(&total));
    }
    Ok(0)
}

fn ass(ideal: &MonomialIdeal, json: bool) -> CliResult {
    let comps = irreducible_decomposition(ideal)?;
    let report = AssReport::new(ideal, &comps);
    if json {
        print_json(&serde_json::to_value(&report).expect("report serializes"));
        return Ok(0);
    }
    println!("irreducible components:");
    for c in &report.components {
        println!("  ({})", c.join(", "));
    }
    println!("associated primes:");
    for p in &report.primes {
        println!("  ({})", p.join(", "));
    }
    println!("totally ordered: {}", report.totally_ordered);
    if let Some(r) = &report.renumbering {
        println!("renumbering: {r}");
    }
    Ok(0)
}

fn betti(ideal: &MonomialIdeal, json: bool) -> CliResult {
    let table = betti_table(ideal, &OracleBudget::from_env()?)?;
    if json {
        let graded: Vec<Value> = table
            .graded()
            .iter()
            .map(|((i, j), b)| json!({ "i": i, "j": j, "beta": b }))
            .collect();
        let multigraded: Vec<Value> = table
            .entries
            .iter()
            .map(|((i, a), b)| json!({ "i": i, "multidegree": a.exponents(), "beta": b }))
            .collect();
        print_json(&json!({
            "coefficients": COEFFICIENTS,
            "graded": graded,
            "multigraded": multigraded,
            "regularity": table.regularity(),
            "projective_dimension": table.projective_dimension(),
            "complexes": table.complexes,
        }));
        return Ok(0);
    }
    print!("{}", table.to_macaulay_string());
    if let Some(r) = table.regularity() {
        println!("reg = {r} (over {COEFFICIENTS})");
    }
    Ok(0)
}

fn gen(
    kind: InstanceKind,
    seed: u64,
    count: usize,
    params: &GenParams,
    out: Option<&Path>,
    json: bool,
) -> CliResult {
    params.validate()?;
    let instances = (0..count)
        .map(|k| generate(kind, params, &mut instance_rng(seed, k as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.to_path_buf(), e))?;
        for (k, ideal) in instances.iter().enumerate() {
            let path = dir.join(format!("instance-{k}.txt"));
            fs::write(&path, ideal_to_file_string(ideal))
                .map_err(|e| Failure::Io(path.clone(), e))?;
        }
    }
    if json {
        print_json(&Value::Array(instances.iter().map(ideal_to_json).collect()));
    } else if out.is_none() {
        for (k, ideal) in instances.iter().enumerate() {
            println!("# {kind} seed {seed} instance {k}");
            print!("{}", ideal_to_file_string(ideal));
        }
    }
    Ok(0)
}

fn list_properties(json: bool) -> u8 {
    if json {
        let v: Vec<Value> = properties()
            .iter()
            .map(|p| json!({ "name": p.name, "description": p.description }))
            .collect();
        print_json(&Value::Array(v));
    } else {
        for p in properties() {
            println!("{:<32} {}", p.name, p.description);
        }
    }
    0
}

fn replay_cmd(props: &[String], files: &[PathBuf], budget: &OracleBudget, json: bool) -> CliResult {
    let [property] = props else {
        return Err(Error::Config("--replay takes exactly one --property".into()).into());
    };
    let instance = files
        .iter()
        .map(|f| read_ideal(f))
        .collect::<Result<Vec<_>, _>>()?;
    let outcome = replay(property, &instance, budget)?;
    let (status, detail, code) = match &outcome {
        Outcome::Pass => ("pass", String::new(), 0),
        Outcome::Fail(m) => ("fail", m.clone(), 1),
        Outcome::Skipped(m) => ("skipped", m.clone(), 0),
        Outcome::NotApplicable => ("not_applicable", String::new(), 0),
    };
    if json {
        print_json(&json!({ "property": property, "outcome": status, "detail": detail }));
    } else if detail.is_empty() {
        println!("{property}: {status}");
    } else {
        println!("{property}: {status}: {detail}");
    }
    Ok(code)
}

fn verify(config: &VerifyConfig, dump_dir: Option<&Path>, json: bool) -> CliResult {
    let report = run_verify(config)?;
    if let Some(dir) = dump_dir {
        write_dumps(&report, dir)?;
    }
    if json {
        print_json(&serde_json::to_value(&report).expect("report serializes"));
    } else {
        print_verify(&report);
    }
    Ok(if report.ok() { 0 } else { 1 })
}

fn write_dumps(report: &VerifyReport, dir: &Path) -> Result<(), Failure> {
    for p in &report.properties {
        for f in &p.failures {
            let sub = dir.join(format!("{}-{}", f.property, f.instance));
            fs::create_dir_all(&sub).map_err(|e| Failure::Io(sub.clone(), e))?;
            for (k, text) in f.files.iter().enumerate() {
                let path = sub.join(format!("instance-{k}.txt"));
                fs::write(&path, text).map_err(|e| Failure::Io(path.clone(), e))?;
            }
            let path = sub.join("failure.txt");
            let body = format!(
                "{}\n\nreplay (from this directory):\n  {}\n",
                f.message, f.replay
            );
            fs::write(&path, body).map_err(|e| Failure::Io(path.clone(), e))?;
        }
    }
    Ok(())
}

fn print_verify(report: &VerifyReport) {
    println!(
        "seed {} count {} n {}..{} deg {}..{}",
        report.seed,
        report.count,
        report.n_range.start(),
        report.n_range.end(),
        report.deg_range.start(),
        report.deg_range.end()
    );
    for p in &report.properties {
        let status = if p.failed > 0 {
            "FAIL"
        } else if p.checked < report.count {
            "SHORT"
        } else {
            "PASS"
        };
        println!(
            "{status:<5} {:<32} checked {:>5}  failed {:>3}  skipped {:>3}  n/a {:>4}",
            p.name, p.checked, p.failed, p.skipped, p.not_applicable
        );
        for f in &p.failures {
            println!(
                "      instance {} ({:?}): {}",
                f.instance, f.kind, f.message
            );
            for text in &f.files {
                for line in text.lines() {
                    println!("        | {line}");
                }
            }
            println!("      replay: {}", f.replay);
        }
    }
    println!(
        "{} properties, {} failures{}",
        report.properties.len(),
        report.failed(),
        if report.ok() { "" } else { " (gate not met)" }
    );
}
