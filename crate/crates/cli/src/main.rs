mod render;
mod report;
mod search;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use puremono::cns::{
    cns_from_monogenic, decode, default_step_cap, encode, verify_box, CnsBasis, DigitMode, Element,
};
use puremono::fppoly::{factor, PrimeField};
use puremono::ore::{common_index_divisor_of, ore_split};
use puremono::polygon::{phi_expand, polygon_index, principal_polygon, reduce_phi, residual_polynomial};
use puremono::purefield::{
    analyze, closed_form_polygon, construct_generator, corollary_checks, AnalyzeOptions, Family,
    DEFAULT_SPLIT_BUDGET,
};
use puremono::IntPoly;
use serde::Serialize;
use serde_json::{json, Value};

use report::{Format, Output, Table};
use search::{Criterion, Row};

#[derive(Parser, Debug)]
#[command(name = "puremono", version, about = "Monogenity certificates for pure number fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every randomized algorithm; results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Ceiling on the valuation computed by the stable-nu routine.
    #[arg(long, global = true, default_value_t = puremono::arith::DEFAULT_NU_CAP)]
    nu_cap: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for batch commands; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write reports into this directory instead of stdout.
    #[arg(long, global = true, env = "PUREMONO_OUT")]
    out: Option<PathBuf>,
    /// Add wall-clock timing to the report; it is then no longer reproducible.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide monogenity of Q(m^(1/n)) or report why no criterion applies.
    Analyze(AnalyzeArgs),
    /// Principal polygon of F with respect to phi at p.
    Polygon(PolygonArgs),
    /// Raw prime splitting of F at p.
    Factor(FactorArgs),
    /// Parallel scan over a grid of binomials or generator instances.
    Search(SearchArgs),
    /// Power integral basis certificate for x^n - a^u.
    Generator(GeneratorArgs),
    /// Check one instance of a two-prime parametric family.
    Corollary(CorollaryArgs),
    /// Canonical number system tools.
    #[command(subcommand)]
    Cns(CnsCommand),
}

fn bigint(s: &str) -> Result<BigInt, String> {
    s.trim().parse().map_err(|_| format!("not an integer: {s}"))
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_opt_bigint<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Args, Debug, Serialize)]
struct AnalyzeArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, allow_hyphen_values = true, value_parser = bigint)]
    #[serde(serialize_with = "ser_bigint")]
    m: BigInt,
    /// Largest degree for the prime-splitting fallback.
    #[arg(long, default_value_t = DEFAULT_SPLIT_BUDGET)]
    split_budget: u64,
    /// Largest residue degree scanned by the counting criterion.
    #[arg(long)]
    d_bound: Option<u32>,
}

/// `--poly` or the binomial sugar `--n/--m`.
#[derive(Args, Debug, Serialize)]
struct PolySource {
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["n", "m"])]
    poly: Option<IntPoly>,
    #[arg(long, requires = "m")]
    n: Option<u64>,
    #[arg(long, requires = "n", allow_hyphen_values = true, value_parser = bigint)]
    #[serde(serialize_with = "ser_opt_bigint")]
    m: Option<BigInt>,
}

impl PolySource {
    fn polynomial(&self) -> anyhow::Result<IntPoly> {
        match (&self.poly, self.n, &self.m) {
            (Some(f), _, _) => Ok(f.clone()),
            (None, Some(n), Some(m)) => {
                let n = usize::try_from(n).context("n too large")?;
                Ok(IntPoly::binomial(n, m))
            }
            _ => bail!("give --poly or both --n and --m"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Render {
    Ascii,
    Svg,
}

#[derive(Args, Debug, Serialize)]
struct PolygonArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: PolySource,
    #[arg(long)]
    p: u64,
    /// Monic lift of an irreducible factor of F mod p; every factor when absent.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<IntPoly>,
    #[arg(long, value_enum, default_value_t = Render::Ascii)]
    render: Render,
    /// Also derive the polygon from the binomial closed form and compare.
    #[arg(long, requires = "n")]
    closed_form: bool,
}

#[derive(Args, Debug, Serialize)]
struct FactorArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: PolySource,
    #[arg(long)]
    p: u64,
}

#[derive(Args, Debug, Serialize)]
struct SearchArgs {
    /// Degrees: `27`, `2..200` or `3,5,7`.
    #[arg(long)]
    n: String,
    /// Radicands for the binomial scan.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["a", "u"])]
    m: Option<String>,
    /// Bases for the generator family `x^n - a^u`.
    #[arg(long, allow_hyphen_values = true, requires = "u")]
    a: Option<String>,
    #[arg(long, requires = "a")]
    u: Option<u64>,
    #[arg(long, value_enum, default_value_t = Criterion::Analyze)]
    criterion: Criterion,
    #[arg(long, default_value_t = DEFAULT_SPLIT_BUDGET)]
    split_budget: u64,
    #[arg(long)]
    d_bound: Option<u32>,
}

#[derive(Args, Debug, Serialize)]
struct GeneratorArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, allow_hyphen_values = true, value_parser = bigint)]
    #[serde(serialize_with = "ser_bigint")]
    a: BigInt,
    #[arg(long)]
    u: u64,
}

#[derive(Args, Debug, Serialize)]
struct CorollaryArgs {
    /// 5-7, 3-11 or 5-11.
    #[arg(long)]
    #[serde(serialize_with = "ser_family")]
    family: Family,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    #[arg(long, allow_hyphen_values = true, value_parser = bigint)]
    #[serde(serialize_with = "ser_bigint")]
    m: BigInt,
}

fn ser_family<S: serde::Serializer>(f: &Family, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(f.label())
}

#[derive(Subcommand, Debug)]
enum CnsCommand {
    /// Digit expansion of one element.
    Encode(CnsEncodeArgs),
    /// Element with the given digit string.
    Decode(CnsDecodeArgs),
    /// Encode every element of a coordinate box.
    Verify(CnsVerifyArgs),
    /// Box check for the generator of x^n - a^u in both digit modes.
    Bridge(CnsBridgeArgs),
}

#[derive(Args, Debug, Serialize)]
struct CnsBasisArgs {
    /// Monic minimal polynomial of the base.
    #[arg(long, allow_hyphen_values = true)]
    poly: IntPoly,
    #[arg(long, default_value = "standard")]
    #[serde(serialize_with = "ser_display")]
    digit_mode: DigitMode,
}

fn ser_display<T: std::fmt::Debug, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v:?}").to_lowercase())
}

#[derive(Args, Debug, Serialize)]
struct CnsEncodeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    basis: CnsBasisArgs,
    /// Coordinates, constant term first: `-1,0`.
    #[arg(long, allow_hyphen_values = true)]
    element: String,
    #[arg(long, default_value_t = 10_000)]
    step_cap: u64,
}

#[derive(Args, Debug, Serialize)]
struct CnsDecodeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    basis: CnsBasisArgs,
    /// Digits, least significant first: `1,0,1,1,1`.
    #[arg(long, allow_hyphen_values = true)]
    digits: String,
}

#[derive(Args, Debug, Serialize)]
struct CnsVerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    basis: CnsBasisArgs,
    #[arg(long)]
    radius: u64,
    /// Defaults to a bound derived from the basis and radius.
    #[arg(long)]
    step_cap: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct CnsBridgeArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, allow_hyphen_values = true, value_parser = bigint)]
    #[serde(serialize_with = "ser_bigint")]
    a: BigInt,
    #[arg(long)]
    u: u64,
    #[arg(long, default_value_t = 2)]
    radius: u64,
}

fn config(g: &Global, args: &impl Serialize) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("seed".into(), json!(g.seed));
    map.insert("nu_cap".into(), json!(g.nu_cap));
    if let Value::Object(fields) = serde_json::to_value(args).expect("args serialize") {
        map.extend(fields);
    }
    Value::Object(map)
}

fn options(g: &Global, split_budget: u64, d_bound: Option<u32>) -> AnalyzeOptions {
    AnalyzeOptions {
        seed: g.seed,
        nu_cap: g.nu_cap,
        split_budget,
        max_scan_degree: d_bound,
    }
}

fn key_value_table(v: &Value) -> Table {
    let mut rows = Vec::new();
    if let Value::Object(map) = v {
        for (k, v) in map {
            let s = match v {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            };
            rows.push(vec![k.clone(), s]);
        }
    }
    Table {
        header: vec!["field", "value"],
        rows,
    }
}

fn cmd_analyze(g: &Global, args: &AnalyzeArgs) -> anyhow::Result<Output> {
    let verdict = analyze(args.n, &args.m, &options(g, args.split_budget, args.d_bound))?;
    let row = Row::from_verdict(verdict.clone());
    let mut out = Output::new("analyze", config(g, args), serde_json::to_value(&verdict)?);
    out.text = format!(
        "x^{} - {}: {}\nprovenance: {}\n{}\n",
        args.n, args.m, row.status, verdict.provenance, row.detail
    );
    if let (Some(p), Some(d)) = (row.p, row.d) {
        out.text.push_str(&format!("witness: p = {p}, d = {d}\n"));
    }
    out.table = Table {
        header: search::COLUMNS.to_vec(),
        rows: vec![row.csv_record()],
    };
    Ok(out)
}

fn cmd_polygon(g: &Global, args: &PolygonArgs) -> anyhow::Result<Output> {
    let f = args.source.polynomial()?;
    let p = args.p;
    let field = PrimeField::new(p)?;
    let fbar = f.reduce_mod(field);
    let factors = factor(&fbar, g.seed)?;
    let targets: Vec<(IntPoly, usize)> = match &args.phi {
        Some(phi) => {
            let phibar = reduce_phi(phi, p)?;
            let mult = factors.multiplicity_of(&phibar.monic());
            if mult == 0 {
                bail!("{phi} mod {p} is not a factor of {f} mod {p}");
            }
            vec![(phi.clone(), mult)]
        }
        None => factors.iter().map(|(h, mult)| (IntPoly::lift(h), *mult)).collect(),
    };
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut files = Vec::new();
    for (i, (phi, mult)) in targets.iter().enumerate() {
        let exp = phi_expand(&f, phi)?;
        let poly = principal_polygon(&exp, p)?;
        let deg_phi = phi.degree().unwrap_or(0) as u64;
        let index = polygon_index(&poly, deg_phi);
        let mut residuals = Vec::new();
        for (k, side) in poly.sides.iter().enumerate() {
            let res = residual_polynomial(&exp, side, p)?;
            residuals.push(json!({"side": format!("S{}", k + 1), "residual": res.to_string_var()}));
        }
        let model = poly.render_model();
        let title = format!("principal polygon of {f} at p = {p}, phi = {phi}");
        let drawing = match args.render {
            Render::Ascii => render::ascii(&model, &title),
            Render::Svg => render::svg(&model, &title),
        };
        if args.render == Render::Svg {
            files.push((format!("polygon-{}.svg", i + 1), drawing.clone()));
        }
        let closed = if args.closed_form {
            let (n, m) = (args.source.n.expect("required by clap"), args.source.m.as_ref().expect("required by clap"));
            let cf = closed_form_polygon(n, m, p, phi)?;
            let agrees = cf.polygon().vertices == poly.vertices;
            Some(json!({"data": cf, "hull_matches": agrees}))
        } else {
            None
        };
        for side in &model.sides {
            rows.push(vec![
                phi.to_string(),
                side.label.clone(),
                side.start.x.to_string(),
                side.start.y.to_string(),
                side.end.x.to_string(),
                side.end.y.to_string(),
                side.slope.clone(),
            ]);
        }
        text.push_str(&drawing);
        text.push_str(&format!("multiplicity {mult}, index contribution {index}\n"));
        for r in &residuals {
            text.push_str(&format!("  residual {}: {}\n", r["side"].as_str().unwrap(), r["residual"].as_str().unwrap()));
        }
        if let Some(c) = &closed {
            text.push_str(&format!("  closed form agrees: {}\n", c["hull_matches"]));
        }
        text.push('\n');
        let parts: Vec<String> = exp.parts().iter().map(|a| a.to_string()).collect();
        let mut entry = json!({
            "phi": phi,
            "multiplicity": mult,
            "parts": parts,
            "polygon": poly,
            "index": index,
            "residuals": residuals,
            "render": model,
            "drawing": drawing,
        });
        if let Some(c) = closed {
            entry["closed_form"] = c;
        }
        entries.push(entry);
    }
    let mut out = Output::new(
        "polygon",
        config(g, args),
        json!({"polynomial": f, "p": p, "factors": entries}),
    );
    out.text = text;
    out.table = Table {
        header: vec!["phi", "side", "start_x", "start_y", "end_x", "end_y", "slope"],
        rows,
    };
    out.files = files;
    Ok(out)
}

fn cmd_factor(g: &Global, args: &FactorArgs) -> anyhow::Result<Output> {
    let f = args.source.polynomial()?;
    let split = ore_split(&f, args.p, g.seed)?;
    let witness = if split.exact { common_index_divisor_of(&split)? } else { None };
    let mut text = format!(
        "{f} at p = {}: {} split, index valuation {} {}\n",
        split.p,
        if split.exact { "exact" } else { "partial" },
        if split.index_valuation.exact { "=" } else { ">=" },
        split.index_valuation.value
    );
    let mut rows = Vec::new();
    for s in &split.slots {
        text.push_str(&format!(
            "  phi = {}  e = {}  f = {}  multiplicity {}{}\n",
            s.phi,
            s.e,
            s.f,
            s.multiplicity,
            if s.certain { "" } else { "  (not separable)" }
        ));
        rows.push(vec![
            s.phi.to_string(),
            s.e.to_string(),
            s.f.to_string(),
            s.multiplicity.to_string(),
            s.certain.to_string(),
            s.residual_factor.as_ref().map(|r| r.to_string_var("y")).unwrap_or_default(),
        ]);
    }
    if let Some(w) = &witness {
        text.push_str(&format!(
            "common index divisor {}: {} primes of degree {} > {} irreducibles\n",
            w.p, w.primes, w.d, w.irreducibles
        ));
    }
    let mut out = Output::new(
        "factor",
        config(g, args),
        json!({"polynomial": f, "split": split, "common_index_divisor": witness}),
    );
    out.text = text;
    out.table = Table {
        header: vec!["phi", "e", "f", "multiplicity", "certain", "residual"],
        rows,
    };
    Ok(out)
}

fn cmd_search(g: &Global, args: &SearchArgs) -> anyhow::Result<Output> {
    let ns = search::parse_u64_range(&args.n)?;
    let (rows, skipped) = match (&args.m, &args.a, args.u) {
        (Some(m), None, None) => {
            let ms = search::parse_range(m)?;
            let opts = options(g, args.split_budget, args.d_bound);
            (search::scan_binomials(&ns, &ms, args.criterion, &opts)?, 0)
        }
        (None, Some(a), Some(u)) => search::scan_generators(&ns, &search::parse_range(a)?, u, g.seed)?,
        _ => bail!("give --m, or --a with --u"),
    };
    let mut counts = serde_json::Map::new();
    for r in &rows {
        let c = counts.entry(r.status).or_insert(json!(0));
        *c = json!(c.as_u64().unwrap() + 1);
    }
    let failed = rows.iter().any(Row::is_error);
    let mut text = String::new();
    for r in &rows {
        text.push_str(&format!("{:>6} {:>12}  {:<14} {}\n", r.n, r.m.to_string(), r.status, r.detail));
    }
    text.push_str(&format!("{} rows, {} skipped\n", rows.len(), skipped));
    let table = Table {
        header: search::COLUMNS.to_vec(),
        rows: rows.iter().map(Row::csv_record).collect(),
    };
    let mut out = Output::new(
        "search",
        config(g, args),
        json!({"columns": search::COLUMNS, "counts": counts, "skipped": skipped, "rows": rows}),
    );
    out.text = text;
    out.table = table;
    out.failed = failed;
    Ok(out)
}

fn cmd_generator(g: &Global, args: &GeneratorArgs) -> anyhow::Result<Output> {
    let verdict = construct_generator(args.n, &args.a, args.u, g.seed)?;
    let row = Row::from_verdict(verdict.clone());
    let mut out = Output::new("generator", config(g, args), serde_json::to_value(&verdict)?);
    out.text = format!("x^{} - {}: {}\n{}\n", verdict.n, verdict.m, row.status, row.detail);
    out.table = key_value_table(&out.result);
    Ok(out)
}

fn cmd_corollary(g: &Global, args: &CorollaryArgs) -> anyhow::Result<Output> {
    let report = corollary_checks(args.family, args.r, args.s, &args.m, &options(g, DEFAULT_SPLIT_BUDGET, None))?;
    let mut out = Output::new("corollary", config(g, args), serde_json::to_value(&report)?);
    out.text = format!(
        "family {} r = {} s = {} (n = {}): clauses {:?}, criterion fires: {}, agreement: {}\n",
        report.family.label(),
        report.r,
        report.s,
        report.n,
        report.clauses,
        report.theorem_fires,
        report.agreement
    );
    if let Some(note) = &report.note {
        out.text.push_str(&format!("note: {note}\n"));
    }
    out.table = key_value_table(&out.result);
    Ok(out)
}

fn parse_list(s: &str) -> anyhow::Result<Vec<i64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<i64>().with_context(|| format!("bad entry {t:?}")))
        .collect()
}

fn cmd_cns(g: &Global, cmd: &CnsCommand) -> anyhow::Result<Output> {
    let basis_of = |b: &CnsBasisArgs| CnsBasis::new(b.poly.clone(), b.digit_mode);
    match cmd {
        CnsCommand::Encode(args) => {
            let basis = basis_of(&args.basis)?;
            let coords: Vec<BigInt> = args
                .element
                .split(',')
                .map(|t| bigint(t).map_err(|e| anyhow!(e)))
                .collect::<anyhow::Result<_>>()?;
            if coords.len() != basis.degree() {
                bail!("element needs {} coordinates, got {}", basis.degree(), coords.len());
            }
            let z = Element::new(coords);
            let exp = encode(&basis, &z, args.step_cap)?;
            let mut out = Output::new(
                "cns-encode",
                config(g, args),
                json!({"element": z, "expansion": exp}),
            );
            out.text = if exp.terminated {
                format!("{z} -> {:?}\n", exp.digits)
            } else {
                format!(
                    "{z} does not terminate; cycle witness {}\n",
                    exp.cycle_witness.as_ref().map(|w| w.to_string()).unwrap_or_else(|| "none (step cap)".into())
                )
            };
            out.table = Table {
                header: vec!["position", "digit"],
                rows: exp.digits.iter().enumerate().map(|(i, d)| vec![i.to_string(), d.to_string()]).collect(),
            };
            Ok(out)
        }
        CnsCommand::Decode(args) => {
            let basis = basis_of(&args.basis)?;
            let digits = parse_list(&args.digits)?;
            let z = decode(&basis, &digits)?;
            let mut out = Output::new("cns-decode", config(g, args), json!({"digits": digits, "element": z}));
            out.text = format!("{digits:?} -> {z}\n");
            out.table = Table {
                header: vec!["coordinate", "value"],
                rows: z.coords.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.to_string()]).collect(),
            };
            Ok(out)
        }
        CnsCommand::Verify(args) => {
            let basis = basis_of(&args.basis)?;
            let cap = args.step_cap.unwrap_or_else(|| default_step_cap(&basis, args.radius));
            let report = verify_box(&basis, args.radius, cap)?;
            let mut out = Output::new("cns-verify", config(g, args), serde_json::to_value(&report)?);
            out.text = format!(
                "{}/{} terminated, {} cycles, {} collisions, longest expansion {}\n",
                report.terminated, report.total, report.cycles, report.collisions, report.max_digits
            );
            for w in &report.failures {
                out.text.push_str(&format!("  non-terminating: {w}\n"));
            }
            out.table = key_value_table(&out.result);
            Ok(out)
        }
        CnsCommand::Bridge(args) => {
            let bridge = cns_from_monogenic(args.n, &args.a, args.u, args.radius, g.seed)?;
            let mut out = Output::new("cns-bridge", config(g, args), serde_json::to_value(&bridge)?);
            out.text = format!(
                "base {}: chain criterion {}, standard {}/{}, signed {}/{}\n",
                bridge.basis,
                bridge.kovacs,
                bridge.standard.terminated,
                bridge.standard.total,
                bridge.signed.terminated,
                bridge.signed.total
            );
            for n in &bridge.notes {
                out.text.push_str(&format!("note: {n}\n"));
            }
            out.table = key_value_table(&out.result);
            Ok(out)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if let Some(jobs) = cli.global.jobs {
        if jobs == 0 {
            bail!("--jobs must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let g = &cli.global;
    let start = Instant::now();
    let out = match &cli.command {
        Command::Analyze(a) => cmd_analyze(g, a)?,
        Command::Polygon(a) => cmd_polygon(g, a)?,
        Command::Factor(a) => cmd_factor(g, a)?,
        Command::Search(a) => cmd_search(g, a)?,
        Command::Generator(a) => cmd_generator(g, a)?,
        Command::Corollary(a) => cmd_corollary(g, a)?,
        Command::Cns(c) => cmd_cns(g, c)?,
    };
    let timing = g.timing.then(|| start.elapsed());
    report::emit(&out, g.format, timing, g.out.as_deref())?;
    Ok(!out.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: at least one instance failed; see the error rows");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
