//! `weylsig`: exact sign-signature computations for Weyl groups.
//!
//! Scalar commands (`kostka`, `lr`, `recover`) print the bare value; the
//! structured commands print a JSON envelope with the command echo, crate
//! version and result payload, in deterministic key order. `table` prints
//! byte-stable TSV with `--format tsv`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use weylsig_core::error::Error;
use weylsig_core::exceptional;
use weylsig_core::oracle;
use weylsig_core::partitions::{Composition, Partition};
use weylsig_core::tableaux::CoefficientCache;
use weylsig_core::type_a;
use weylsig_core::type_b::{self, IrrepB, ParabolicB};
use weylsig_core::type_d::{self, IrrepD, ParabolicD};
use weylsig_core::wgraph::{self, CoxeterData, WeylType};

#[derive(Parser)]
#[command(name = "weylsig", version, about = "Sign signatures of Weyl group representations, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for structured results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for table and oracle-check sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Kostka number K_{shape,content}, e.g. `kostka "[2,1]" "(1,1,1)"`.
    Kostka { shape: String, content: String },
    /// Littlewood-Richardson coefficient c^lam_{mu,nu}.
    Lr { lam: String, mu: String, nu: String },
    /// Sign signature of an irreducible: `sig A "[2,1]"`,
    /// `sig B "[1,1]|[1]" [--generalized]`, `sig D "{[2],[1]}"`.
    Sig {
        family: Family,
        label: String,
        /// Use generalized parabolics (type B only).
        #[arg(long)]
        generalized: bool,
    },
    /// Recover the irreducible label from a signature JSON map.
    Recover { family: Family, signature: String },
    /// Decompose a signature JSON map into irreducible multiplicities
    /// (type A, or type B over generalized parabolics).
    Decompose { family: Family, signature: String },
    /// Branch a type B irreducible: `branch B "[1]|[1]" --to bb:1` or
    /// `--to sn`.
    Branch {
        family: Family,
        label: String,
        #[arg(long)]
        to: String,
    },
    /// Golden tables: `table B3`, `table G2-extended`, `table F4-extended`.
    Table { which: String },
    /// Parse an Atlas wcell file and report the cells.
    Wcell {
        file: String,
        #[arg(long = "type")]
        weyl_type: String,
    },
    /// Formula-versus-oracle sweep over every (irrep, parabolic) pair.
    OracleCheck {
        #[arg(long = "type")]
        family: Family,
        #[arg(long = "n")]
        rank: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "UPPER")]
enum Family {
    A,
    B,
    D,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let cache = CoefficientCache::new();
    let cache_file = load_cache(&cache);
    let outcome = run(&cli, &cache);
    if let Some(path) = cache_file {
        save_cache(&cache, &path);
    }
    match outcome {
        Ok(Output::Scalar(s)) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Output::Result(value)) => {
            println!("{}", serde_json::to_string_pretty(&envelope(&argv, value)).expect("serialization"));
            ExitCode::SUCCESS
        }
        Ok(Output::Raw(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::to_string(&json!({
                    "command": argv,
                    "version": env!("CARGO_PKG_VERSION"),
                    "error": e.to_string(),
                }))
                .expect("error serialization")
            );
            ExitCode::FAILURE
        }
    }
}

enum Output {
    Scalar(String),
    Result(Value),
    Raw(String),
}

fn envelope(argv: &[String], result: Value) -> Value {
    json!({
        "command": argv,
        "version": env!("CARGO_PKG_VERSION"),
        "result": result,
    })
}

fn load_cache(cache: &CoefficientCache) -> Option<std::path::PathBuf> {
    let dir = std::env::var_os("WEYLSIG_CACHE_DIR")?;
    let path = std::path::Path::new(&dir).join("coefficients.tsv");
    if let Ok(text) = std::fs::read_to_string(&path) {
        for line in text.lines() {
            if let Some((key, value)) = line.split_once('\t') {
                // A stale or foreign line is skipped, not fatal.
                let _ = cache.import(key, value);
            }
        }
    }
    Some(path)
}

fn save_cache(cache: &CoefficientCache, path: &std::path::Path) {
    if let Some(parent) = path.parent() {
        let _ = std::fs::create_dir_all(parent);
    }
    let mut text = String::new();
    for (key, value) in cache.export() {
        text.push_str(&key);
        text.push('\t');
        text.push_str(&value);
        text.push('\n');
    }
    let _ = std::fs::write(path, text);
}

fn big_to_json(v: &BigInt) -> Value {
    match i64::try_from(v.clone()) {
        Ok(n) => json!(n),
        Err(_) => json!(v.to_string()),
    }
}

fn run(cli: &Cli, cache: &CoefficientCache) -> Result<Output, Error> {
    match &cli.command {
        Command::Kostka { shape, content } => {
            let shape: Partition = shape.parse()?;
            let content: Composition = content.parse()?;
            Ok(Output::Scalar(cache.kostka(&shape, &content).to_string()))
        }
        Command::Lr { lam, mu, nu } => {
            let lam: Partition = lam.parse()?;
            let mu: Partition = mu.parse()?;
            let nu: Partition = nu.parse()?;
            Ok(Output::Scalar(cache.lr(&lam, &mu, &nu).to_string()))
        }
        Command::Sig {
            family,
            label,
            generalized,
        } => sig_command(cache, *family, label, *generalized),
        Command::Recover { family, signature } => recover_command(cache, *family, signature),
        Command::Decompose { family, signature } => decompose_command(cache, *family, signature),
        Command::Branch { family, label, to } => branch_command(cache, *family, label, to),
        Command::Table { which } => table_command(cache, which, cli.format, cli.parallel),
        Command::Wcell { file, weyl_type } => wcell_command(file, weyl_type),
        Command::OracleCheck { family, rank } => {
            oracle_check_command(cache, *family, *rank, cli.parallel)
        }
    }
}

fn sig_command(
    cache: &CoefficientCache,
    family: Family,
    label: &str,
    generalized: bool,
) -> Result<Output, Error> {
    let mut map = Map::new();
    match family {
        Family::A => {
            let lam: Partition = label.parse()?;
            let sig = type_a::sign_signature_a(cache, &lam)?;
            for (p, v) in sig.entries()? {
                map.insert(p.to_composition().to_string(), big_to_json(&v));
            }
        }
        Family::B => {
            let v: IrrepB = label.parse()?;
            let sig = type_b::sign_signature_b(cache, &v, generalized)?;
            for (p, m) in sig.entries(generalized)? {
                map.insert(p.to_string(), big_to_json(&m));
            }
        }
        Family::D => {
            let v: IrrepD = label.parse()?;
            let sig = type_d::sign_signature_d(cache, &v)?;
            for (p, m) in sig.entries()? {
                map.insert(p.to_string(), big_to_json(&m));
            }
        }
    }
    Ok(Output::Result(Value::Object(map)))
}

fn parse_big(v: &Value) -> Result<BigInt, Error> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("bad multiplicity {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::Parse(format!("bad multiplicity {s:?}"))),
        other => Err(Error::Parse(format!("bad multiplicity {other}"))),
    }
}

fn parse_signature_json(text: &str) -> Result<Vec<(String, BigInt)>, Error> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
    let Value::Object(map) = value else {
        return Err(Error::Parse("signature must be a JSON object".into()));
    };
    map.into_iter()
        .map(|(k, v)| Ok((k, parse_big(&v)?)))
        .collect()
}

fn infer_rank(sizes: impl Iterator<Item = u32>) -> Result<u32, Error> {
    let mut rank = None;
    for s in sizes {
        match rank {
            None => rank = Some(s),
            Some(r) if r == s => {}
            Some(r) => {
                return Err(Error::Parse(format!(
                    "signature keys mix ranks {r} and {s}"
                )))
            }
        }
    }
    rank.ok_or(Error::EmptySupport)
}

fn recover_command(
    _cache: &CoefficientCache,
    family: Family,
    signature: &str,
) -> Result<Output, Error> {
    let entries = parse_signature_json(signature)?;
    match family {
        Family::A => {
            let mut map = BTreeMap::new();
            for (k, v) in entries {
                let p: Composition = k.parse()?;
                map.insert(p.sorted(), v);
            }
            let rank = infer_rank(map.keys().map(Partition::size))?;
            let sig = type_a::SignSignatureA::from_map(rank, map)?;
            Ok(Output::Scalar(type_a::recover_a(&sig)?.to_string()))
        }
        Family::B => {
            let mut map = BTreeMap::new();
            for (k, v) in entries {
                let p: ParabolicB = k.parse()?;
                map.insert(p, v);
            }
            let rank = infer_rank(map.keys().map(ParabolicB::rank))?;
            let sig = type_b::SignSignatureB::from_map(rank, map)?;
            Ok(Output::Scalar(type_b::recover_b(&sig)?.to_string()))
        }
        Family::D => {
            let mut map = BTreeMap::new();
            for (k, v) in entries {
                let p: ParabolicD = k.parse()?;
                map.insert(p, v);
            }
            let rank = infer_rank(map.keys().map(ParabolicD::rank))?;
            let sig = type_d::SignSignatureD::from_map(rank, map)?;
            Ok(Output::Scalar(type_d::recover_d(&sig)?.to_string()))
        }
    }
}

fn decompose_command(
    cache: &CoefficientCache,
    family: Family,
    signature: &str,
) -> Result<Output, Error> {
    let entries = parse_signature_json(signature)?;
    let mut out = Map::new();
    match family {
        Family::A => {
            let mut map = BTreeMap::new();
            for (k, v) in entries {
                let p: Composition = k.parse()?;
                map.insert(p.sorted(), v);
            }
            let rank = infer_rank(map.keys().map(Partition::size))?;
            let sig = type_a::SignSignatureA::from_map(rank, map)?;
            for (lam, m) in type_a::decompose_a(cache, &sig)? {
                out.insert(lam.to_string(), big_to_json(&m));
            }
        }
        Family::B => {
            let mut map = BTreeMap::new();
            for (k, v) in entries {
                let p: ParabolicB = k.parse()?;
                map.insert(p, v);
            }
            let rank = infer_rank(map.keys().map(ParabolicB::rank))?;
            let sig = type_b::SignSignatureB::from_map(rank, map)?;
            for (v, m) in type_b::decompose_b(cache, &sig)? {
                out.insert(v.to_string(), big_to_json(&m));
            }
        }
        Family::D => {
            return Err(Error::InvalidLabel(
                "decomposition is available for families A and B".into(),
            ))
        }
    }
    Ok(Output::Result(Value::Object(out)))
}

fn branch_command(
    cache: &CoefficientCache,
    family: Family,
    label: &str,
    to: &str,
) -> Result<Output, Error> {
    if family != Family::B {
        return Err(Error::InvalidLabel(
            "branching is exposed for family B (bb:<k> or sn)".into(),
        ));
    }
    let v: IrrepB = label.parse()?;
    let mut out = Map::new();
    if to == "sn" {
        for (nu, m) in type_b::branch_b_to_sn(cache, &v)? {
            out.insert(nu.to_string(), big_to_json(&m));
        }
    } else if let Some(k) = to.strip_prefix("bb:") {
        let k: u32 = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad block size {k:?}")))?;
        for ((l, r), m) in type_b::branch_b_to_bb(cache, &v, k)? {
            out.insert(format!("{l} * {r}"), big_to_json(&m));
        }
    } else {
        return Err(Error::Parse(format!(
            "--to must be sn or bb:<k>, got {to:?}"
        )));
    }
    Ok(Output::Result(Value::Object(out)))
}

/// Runs `f` over `0..n` with up to `workers` threads, preserving order.
fn ordered_parallel<T: Send>(
    n: usize,
    workers: usize,
    f: impl Fn(usize) -> T + Sync,
) -> Vec<T> {
    if workers <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(n) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let value = f(i);
                results.lock().unwrap()[i] = Some(value);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|v| v.expect("worker filled every slot"))
        .collect()
}

fn table_command(
    cache: &CoefficientCache,
    which: &str,
    format: Format,
    parallel: usize,
) -> Result<Output, Error> {
    let (header, row_labels, rows): (Vec<String>, Vec<String>, Vec<Vec<BigInt>>) = match which {
        "B3" => {
            let parabolics = type_b::enumerate_parabolics_b(3, false)?;
            let mut irreps: Vec<IrrepB> = weylsig_core::partitions::bipartitions_of(3)?
                .into_iter()
                .map(|(lam, mu)| IrrepB::new(lam, mu))
                .collect();
            irreps.sort_by(|a, b| {
                (a.lam.size(), &a.lam, &a.mu).cmp(&(b.lam.size(), &b.lam, &b.mu))
            });
            let rows = ordered_parallel(irreps.len(), parallel, |i| {
                parabolics
                    .iter()
                    .map(|p| type_b::sign_mult_b(cache, &irreps[i], p).expect("rank-matched"))
                    .collect::<Vec<_>>()
            });
            (
                parabolics.iter().map(|p| p.to_string()).collect(),
                irreps.iter().map(|v| v.to_string()).collect(),
                rows,
            )
        }
        "G2-extended" => extended_table(exceptional::build_g2()?, Some(&G2_ORDER), parallel)?,
        "F4-extended" => extended_table(exceptional::build_f4()?, None, parallel)?,
        other => {
            return Err(Error::InvalidLabel(format!(
                "unknown table {other:?}; expected B3, G2-extended or F4-extended"
            )))
        }
    };
    match format {
        Format::Tsv => {
            let mut text = String::from("irrep");
            for h in &header {
                text.push('\t');
                text.push_str(h);
            }
            text.push('\n');
            for (label, row) in row_labels.iter().zip(&rows) {
                text.push_str(label);
                for v in row {
                    text.push('\t');
                    text.push_str(&v.to_string());
                }
                text.push('\n');
            }
            Ok(Output::Raw(text))
        }
        Format::Json => {
            let mut result = Map::new();
            result.insert(
                "columns".into(),
                Value::Array(header.iter().map(|h| json!(h)).collect()),
            );
            let mut obj = Map::new();
            for (label, row) in row_labels.iter().zip(&rows) {
                obj.insert(
                    label.clone(),
                    Value::Array(row.iter().map(big_to_json).collect()),
                );
            }
            result.insert("rows".into(), Value::Object(obj));
            Ok(Output::Result(Value::Object(result)))
        }
    }
}

/// Fixed row and column order for the G2 extended table output.
const G2_ORDER: ([&str; 6], [&str; 6]) = (
    ["0", "A_1", "A^3_1", "G_2", "A_2", "A^3_1+A_1"],
    [
        "phi_{1,6}",
        "phi_{1,3}''",
        "phi_{1,3}'",
        "phi_{1,0}",
        "phi_{2,1}",
        "phi_{2,2}",
    ],
);

fn extended_table(
    rs: exceptional::RootSystem,
    order: Option<&([&str; 6], [&str; 6])>,
    parallel: usize,
) -> Result<(Vec<String>, Vec<String>, Vec<Vec<BigInt>>), Error> {
    let subs = exceptional::enumerate_closed_subsystems(&rs)?;
    let table = exceptional::character_table(&rs)?;
    let (col_idx, row_idx): (Vec<usize>, Vec<usize>) = match order {
        Some((cols, rows_order)) => (
            cols.iter()
                .map(|l| {
                    subs.iter()
                        .position(|s| s.label == *l)
                        .ok_or_else(|| Error::Inconsistent(format!("missing column {l}")))
                })
                .collect::<Result<_, _>>()?,
            rows_order
                .iter()
                .map(|l| {
                    table
                        .iter()
                        .position(|c| c.label == *l)
                        .ok_or_else(|| Error::Inconsistent(format!("missing row {l}")))
                })
                .collect::<Result<_, _>>()?,
        ),
        None => ((0..subs.len()).collect(), (0..table.len()).collect()),
    };
    let rows = ordered_parallel(row_idx.len(), parallel, |i| {
        let sig = exceptional::extended_sign_signature(&rs, &table[row_idx[i]], &subs)
            .expect("signature");
        col_idx.iter().map(|&c| sig[c].clone()).collect::<Vec<_>>()
    });
    Ok((
        col_idx.iter().map(|&c| subs[c].label.clone()).collect(),
        row_idx.iter().map(|&r| table[r].label.clone()).collect(),
        rows,
    ))
}

fn parse_weyl_type(s: &str) -> Result<WeylType, Error> {
    match s {
        "G2" => Ok(WeylType::G2),
        _ => {
            let (family, rank) = s.split_at(1);
            let rank: usize = rank
                .parse()
                .map_err(|_| Error::Parse(format!("bad Weyl type {s:?}")))?;
            match family {
                "A" => Ok(WeylType::A(rank)),
                "B" => Ok(WeylType::B(rank)),
                "D" => Ok(WeylType::D(rank)),
                _ => Err(Error::Parse(format!("bad Weyl type {s:?}"))),
            }
        }
    }
}

fn wcell_command(file: &str, weyl_type: &str) -> Result<Output, Error> {
    let t = parse_weyl_type(weyl_type)?;
    let cox = CoxeterData::of_type(t);
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::Parse(format!("cannot read {file:?}: {e}")))?;
    let parsed = wgraph::parse_wcell(&text)?;
    let mut cells = Vec::new();
    for cell in &parsed.cells {
        let valid = cell.graph.validate(&cox);
        let sig = cell.graph.tau_signature();
        let mut entry = Map::new();
        entry.insert("cell".into(), json!(cell.index));
        entry.insert("size".into(), json!(cell.graph.size()));
        entry.insert("tau_signature".into(), json!(sig.to_string()));
        entry.insert(
            "valid".into(),
            match &valid {
                Ok(()) => json!(true),
                Err(e) => json!(format!("violation: {e}")),
            },
        );
        if valid.is_ok() {
            match t {
                WeylType::G2 => {
                    // Carter's labels for the three special G2 orbits,
                    // keyed by tau-signature.
                    let orbit = match sig.to_string().as_str() {
                        "{{}}" => Some("G_2"),
                        "{{1},{2}}" => Some("G_2(a_1)"),
                        "{{1,2}}" => Some("0"),
                        _ => None,
                    };
                    entry.insert("orbit".into(), json!(orbit));
                }
                _ => {
                    let label = wgraph::identify_special(&cox, &sig)?;
                    entry.insert("label".into(), json!(label.to_string()));
                }
            }
        }
        cells.push(Value::Object(entry));
    }
    let edges: Vec<Value> = parsed
        .induced_edges
        .iter()
        .map(|(from, to)| json!([from, to]))
        .collect();
    let mut result = Map::new();
    result.insert("cells".into(), Value::Array(cells));
    result.insert("induced_edges".into(), Value::Array(edges));
    Ok(Output::Result(Value::Object(result)))
}

fn oracle_check_command(
    cache: &CoefficientCache,
    family: Family,
    rank: u32,
    parallel: usize,
) -> Result<Output, Error> {
    let n = rank as usize;
    let mut lines = Vec::new();
    let mut failures = 0usize;
    match family {
        Family::A => {
            let group = oracle::enumerate_group(oracle::GroupTag::A, n)?;
            let parabolics = type_a::parabolic_order(rank)?;
            let lams = weylsig_core::partitions::partitions_of(rank)?;
            let rows = ordered_parallel(lams.len(), parallel, |i| {
                let lam = &lams[i];
                let module = oracle::build_sn_irrep(lam).expect("within cap");
                let chars = module.character(&group);
                parabolics
                    .iter()
                    .map(|p| {
                        let gens =
                            oracle::parabolic_b_reflections(n, p.parts(), &[]).expect("fits");
                        let lhs = type_a::sign_mult_a(
                            cache,
                            lam,
                            &type_a::ParabolicA::new(p.to_composition()).expect("positive"),
                        )
                        .expect("rank-matched");
                        let rhs =
                            oracle::oracle_sign_mult_chars(&group, &chars, &gens).expect("oracle");
                        lhs == rhs
                    })
                    .collect::<Vec<bool>>()
            });
            for (lam, row) in lams.iter().zip(rows) {
                failures += row.iter().filter(|ok| !**ok).count();
                lines.push(render_row(&lam.to_string(), &row));
            }
        }
        Family::B => {
            let group = oracle::enumerate_group(oracle::GroupTag::B, n)?;
            let parabolics = type_b::enumerate_parabolics_b(rank, true)?;
            let irreps: Vec<IrrepB> = weylsig_core::partitions::bipartitions_of(rank)?
                .into_iter()
                .map(|(lam, mu)| IrrepB::new(lam, mu))
                .collect();
            let rows = ordered_parallel(irreps.len(), parallel, |i| {
                let v = &irreps[i];
                let module = oracle::build_bn_irrep(&v.lam, &v.mu).expect("within cap");
                let chars = module.character(&group);
                parabolics
                    .iter()
                    .map(|p| {
                        let gens = oracle::parabolic_b_reflections(
                            n,
                            p.a_parts().parts(),
                            p.b_parts().parts(),
                        )
                        .expect("fits");
                        let lhs = type_b::sign_mult_b(cache, v, p).expect("rank-matched");
                        let rhs =
                            oracle::oracle_sign_mult_chars(&group, &chars, &gens).expect("oracle");
                        lhs == rhs
                    })
                    .collect::<Vec<bool>>()
            });
            for (v, row) in irreps.iter().zip(rows) {
                failures += row.iter().filter(|ok| !**ok).count();
                lines.push(render_row(&v.to_string(), &row));
            }
        }
        Family::D => {
            let group = oracle::enumerate_group(oracle::GroupTag::D, n)?;
            let parabolics = type_d::enumerate_parabolics_d(rank)?;
            let irreps = type_d::irreps_d(rank)?;
            let rows = ordered_parallel(irreps.len(), parallel, |i| {
                let v = &irreps[i];
                let label = match v {
                    IrrepD::NonSplit(a, b) => {
                        oracle::DnIrrepLabel::NonSplit(a.clone(), b.clone())
                    }
                    IrrepD::Split(l, plus) => oracle::DnIrrepLabel::Split(l.clone(), *plus),
                };
                let module = oracle::build_dn_irrep(&label).expect("within cap");
                let chars = module.character(&group);
                parabolics
                    .iter()
                    .map(|p| {
                        let gens = d_parabolic_gens(n, p).expect("fits");
                        let lhs = type_d::sign_mult_d(cache, v, p).expect("rank-matched");
                        let rhs =
                            oracle::oracle_sign_mult_chars(&group, &chars, &gens).expect("oracle");
                        lhs == rhs
                    })
                    .collect::<Vec<bool>>()
            });
            for (v, row) in irreps.iter().zip(rows) {
                failures += row.iter().filter(|ok| !**ok).count();
                lines.push(render_row(&v.to_string(), &row));
            }
        }
    }
    let mut text = lines.join("\n");
    text.push('\n');
    text.push_str(&format!(
        "{}: {failures} mismatches\n",
        if failures == 0 { "PASS" } else { "FAIL" }
    ));
    if failures == 0 {
        Ok(Output::Raw(text))
    } else {
        print!("{text}");
        Err(Error::Inconsistent(format!(
            "{failures} formula/oracle mismatches"
        )))
    }
}

fn render_row(label: &str, row: &[bool]) -> String {
    let marks: String = row.iter().map(|&ok| if ok { '.' } else { 'X' }).collect();
    format!("{label:<16} {marks}")
}

fn d_parabolic_gens(
    n: usize,
    p: &ParabolicD,
) -> Result<Vec<oracle::SignedPermutation>, Error> {
    match p {
        ParabolicD::Plus(s) => {
            oracle::parabolic_d_reflections(n, oracle::DnParabolicKind::Plus, s.parts(), 0)
        }
        ParabolicD::Minus(s) => {
            oracle::parabolic_d_reflections(n, oracle::DnParabolicKind::Minus, s.parts(), 0)
        }
        ParabolicD::Bar(s, d) => {
            oracle::parabolic_d_reflections(n, oracle::DnParabolicKind::Bar, s.parts(), *d)
        }
    }
}
