use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use p2groups::cayley::{self, AutMethod, CayleyDigraph, GroupKind};
use p2groups::codes::{self, ChainGroup, CyclicCode, Submodule};
use p2groups::normalizers::{normalizer_p, normalizer_p_prime};
use p2groups::perm::{BlockSystem, PermGroup, Permutation};
use p2groups::pgroups::{self, Family};
use p2groups::projective_modules::{all_invariant_modules, FieldTower};
use p2groups::verify::{self, Tier};
use p2groups::wreath_cohom::{self, CrossedHom, QuotientModule, WreathTuple};

#[derive(Parser)]
#[command(name = "p2groups", version, about = "Transitive permutation groups of degree p^2")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// `P_i`, containing the regular cyclic group.
    #[value(name = "P")]
    P,
    /// `P'_i`, containing the regular elementary abelian group.
    #[value(name = "P-prime")]
    PPrime,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::P => Family::Cyclic,
            FamilyArg::PPrime => Family::Elementary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Cyclic,
    Elementary,
}

impl From<KindArg> for GroupKind {
    fn from(k: KindArg) -> GroupKind {
        match k {
            KindArg::Cyclic => GroupKind::Cyclic,
            KindArg::Elementary => GroupKind::Elementary,
        }
    }
}

#[derive(Args)]
struct StandardGroup {
    #[arg(long)]
    p: usize,
    #[arg(long, value_enum, default_value_t = FamilyArg::P)]
    family: FamilyArg,
    #[arg(long)]
    i: usize,
}

#[derive(Args)]
struct Generators {
    /// Number of points.
    #[arg(long)]
    degree: usize,
    /// A generator in cycle notation `(0 1 2)(3 4)` or one-line `[1,2,0,...]`; repeatable.
    #[arg(long = "gen", required = true)]
    gens: Vec<String>,
}

impl Generators {
    fn group(&self) -> anyhow::Result<PermGroup> {
        let gens = self
            .gens
            .iter()
            .map(|s| Permutation::parse(s, self.degree))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PermGroup::new(self.degree, gens)?)
    }
}

#[derive(Args)]
struct CayleyArgs {
    #[arg(long)]
    p: usize,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Connection set as comma-separated point labels `a + b p`.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    set: Vec<usize>,
}

impl CayleyArgs {
    fn digraph(&self) -> p2groups::Result<CayleyDigraph> {
        CayleyDigraph::new(self.p, self.kind.into(), &self.set)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a standard transitive p-subgroup P_i or P'_i.
    Construct(StandardGroup),
    /// Identify a transitive p-subgroup of S_{p^2} and bring it to standard form.
    Recognize {
        #[command(flatten)]
        group: Generators,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The normalizer of P_i or P'_i in S_{p^2}.
    Normalizer(StandardGroup),
    #[command(subcommand)]
    Code(CodeCommand),
    /// Frobenius-stable ideals and the PSL(d, q)-invariant F_r-subspaces they give.
    BardoeSin {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u32,
    },
    #[command(subcommand)]
    Wreath(WreathCommand),
    #[command(subcommand)]
    Cayley(CayleyCommand),
    /// Classify every connection set (p <= 3) or a seeded sample, as JSON lines.
    Catalog {
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Output file; defaults to `$P2GROUPS_OUT_DIR/catalog-p<p>-<kind>.jsonl`, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sample this many random connection sets instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compute automorphism groups by full scans (degree 9 only).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Run the acceptance checks.
    Verify {
        /// Include the exhaustive S_9 scans.
        #[arg(long)]
        slow: bool,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        criterion: Vec<u8>,
    },
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Induced code of the block kernel of P_i or P'_i on the standard blocks.
    Induced(StandardGroup),
    /// Cyclic codes of length p over F_q invariant under the given multipliers.
    Invariant {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        multipliers: Vec<u64>,
    },
    /// Chain of F_q codes of a cyclic code over Z_{q^t}, and the code rebuilt from it.
    Chain {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: u32,
        /// Generator rows, `;`-separated, entries comma-separated.
        #[arg(long)]
        rows: String,
    },
}

#[derive(Subcommand)]
enum WreathCommand {
    /// Build the imprimitive group of a tuple given as JSON.
    Build {
        #[arg(long)]
        input: PathBuf,
    },
    /// Recover a tuple from an imprimitive group with wreath Sylow subgroup.
    Decompose {
        #[command(flatten)]
        group: Generators,
    },
    /// Decide whether two tuples give conjugate groups.
    Equiv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

#[derive(Subcommand)]
enum CayleyCommand {
    /// Automorphism group of a Cayley digraph.
    Aut(CayleyArgs),
    /// Whether the regular representation is normal in the automorphism group.
    Normal(CayleyArgs),
    /// Isomorphism through normalizer coset representatives, checked by exhaustive search.
    Iso {
        #[command(flatten)]
        x: CayleyArgs,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        other: Vec<usize>,
    },
    /// Classification of the automorphism group as a 2-closed group.
    Classify(CayleyArgs),
}

#[derive(Deserialize)]
struct TupleInput {
    p: usize,
    h: Vec<String>,
    l: Vec<String>,
    n: u64,
    #[serde(default)]
    k: Vec<Vec<u64>>,
    /// Values on some generating set of `H`.
    phi: BTreeMap<String, Vec<u64>>,
}

fn read_tuple(path: &PathBuf) -> anyhow::Result<WreathTuple> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let t: TupleInput = serde_json::from_str(&text).context("parsing tuple JSON")?;
    let parse_all = |v: &[String]| -> anyhow::Result<PermGroup> {
        let gens = v.iter().map(|s| Permutation::parse(s, t.p)).collect::<Result<Vec<_>, _>>()?;
        Ok(PermGroup::new(t.p, gens)?)
    };
    let h = parse_all(&t.h)?;
    let l = parse_all(&t.l)?;
    let k = if t.k.is_empty() { Submodule::zero(t.n, t.p) } else { Submodule::new(t.n, t.p, &t.k)? };
    let module = QuotientModule::new(k);
    let pairs = t
        .phi
        .iter()
        .map(|(g, v)| Ok((Permutation::parse(g, t.p)?, v.clone())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let phi = CrossedHom::from_generators(module, &pairs).ok_or_else(|| anyhow!("phi does not extend to a crossed homomorphism"))?;
    let tuple = WreathTuple::new(h, l, phi)?;
    if tuple.context().n() != t.n {
        return Err(anyhow!("n = {} but N(L)/L has order {}", t.n, tuple.context().n()));
    }
    Ok(tuple)
}

fn parse_rows(s: &str) -> anyhow::Result<Vec<Vec<u64>>> {
    s.split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| r.split(',').map(|x| x.trim().parse::<u64>().map_err(Into::into)).collect())
        .collect()
}

fn standard(g: &StandardGroup) -> anyhow::Result<PermGroup> {
    Ok(pgroups::build_p(g.p, g.i, g.family.into())?)
}

fn family_name(g: &StandardGroup) -> &'static str {
    match g.family {
        FamilyArg::P => "P",
        FamilyArg::PPrime => "P-prime",
    }
}

fn run(cli: &Cli) -> anyhow::Result<Value> {
    Ok(match &cli.command {
        Command::Construct(g) => {
            let grp = standard(g)?;
            json!({"p": g.p, "family": family_name(g), "i": g.i, "group": grp})
        }
        Command::Recognize { group, seed } => {
            let g = group.group()?;
            let kind = pgroups::recognize_p_subgroup(&g)?;
            let tests = pgroups::wreath_tests(&g)?;
            let cls = pgroups::classify_transitive(&g, *seed)?;
            json!({"seed": seed, "order": g.order().to_string(), "family": kind.family, "conjugator": kind.conjugator,
                   "wreath_tests": tests, "classification": cls.case})
        }
        Command::Normalizer(g) => {
            let n = match g.family {
                FamilyArg::P => normalizer_p(g.p, g.i)?,
                FamilyArg::PPrime => normalizer_p_prime(g.p, g.i)?,
            };
            json!({"p": g.p, "family": family_name(g), "i": g.i, "normalizer": n})
        }
        Command::Code(CodeCommand::Induced(g)) => {
            let grp = standard(g)?;
            let bs = BlockSystem::standard(g.p);
            let code = codes::induced_code(&grp.block_kernel(&bs)?, &bs)?;
            let cc = CyclicCode::from_module(code)?;
            json!({"p": g.p, "family": family_name(g), "i": g.i, "code": cc.summary()})
        }
        Command::Code(CodeCommand::Invariant { p, q, multipliers }) => {
            let list = codes::invariant_cyclic_codes(*p, *q, multipliers)?;
            let codes: Vec<Value> = list
                .iter()
                .map(|c| json!({"dimension": c.dimension(), "generator": c.generator.to_string()}))
                .collect();
            json!({"p": p, "q": q, "multipliers": multipliers, "count": codes.len(),
                   "expected": codes::expected_invariant_count(*p as u64, *q, multipliers).to_string(), "codes": codes})
        }
        Command::Code(CodeCommand::Chain { q, t, rows }) => {
            let rows = parse_rows(rows)?;
            let len = rows.first().map(Vec::len).ok_or_else(|| anyhow!("no rows given"))?;
            let code = Submodule::new(q.pow(*t), len, &rows)?;
            let chain = codes::chain_of_code(&code)?;
            let rebuilt = codes::code_from_chain(*q, *t, &chain, &ChainGroup::Cyclic)?;
            let chain_json: Vec<Value> = chain.iter().map(|c| json!({"dimension": c.dimension(), "rows": c.rows()})).collect();
            json!({"q": q, "t": t, "length": len, "chain": chain_json, "round_trip": rebuilt == code})
        }
        Command::BardoeSin { q, d } => {
            let tw = FieldTower::new(*q)?;
            let mods = all_invariant_modules(&tw, *d)?;
            let list: Vec<Value> = mods
                .iter()
                .map(|m| json!({"ideal": m.ideal, "dimension": m.dimension}))
                .collect();
            json!({"q": q, "r": tw.r(), "t": tw.t(), "d": d, "count": list.len(), "modules": list})
        }
        Command::Wreath(WreathCommand::Build { input }) => {
            let t = read_tuple(input)?;
            let g = wreath_cohom::build_g(&t)?;
            json!({"tuple": t, "group": g})
        }
        Command::Wreath(WreathCommand::Decompose { group }) => {
            let g = group.group()?;
            let d = wreath_cohom::decompose_g(&g)?;
            json!({"tuple": d.tuple, "relabel": d.relabel})
        }
        Command::Wreath(WreathCommand::Equiv { a, b }) => {
            let w = wreath_cohom::equivalent_tuples(&read_tuple(a)?, &read_tuple(b)?)?;
            json!({"equivalent": w.is_some(), "block_permutation": w})
        }
        Command::Cayley(CayleyCommand::Aut(c)) => {
            let aut = c.digraph()?.automorphisms();
            json!({"p": c.p, "set": c.set, "automorphisms": aut})
        }
        Command::Cayley(CayleyCommand::Normal(c)) => {
            let g = c.digraph()?;
            json!({"p": c.p, "set": c.set, "normal": cayley::is_normal_cayley(&g),
                   "predicate": cayley::nonnormal_case(&g)})
        }
        Command::Cayley(CayleyCommand::Iso { x, other }) => {
            let a = x.digraph()?;
            let b = CayleyDigraph::new(x.p, x.kind.into(), other)?;
            let (da, db) = (a.digraph(), b.digraph());
            let sylow = a.automorphisms().sylow(x.p as u128, None, 0)?;
            let family = pgroups::recognize_p_subgroup(&sylow)?.family;
            let fast = cayley::iso_by_normalizer(&da, &db, family)?;
            let brute = if x.p <= 3 { Some(p2groups::digraph::brute_isomorphism(&da, &db).is_some()) } else { None };
            json!({"p": x.p, "set": x.set, "other": other, "sylow": family, "isomorphism": fast, "exhaustive_agrees": brute.map(|b| b == fast.is_some())})
        }
        Command::Cayley(CayleyCommand::Classify(c)) => {
            let g = c.digraph()?;
            let aut = g.automorphisms();
            let cls = cayley::classify_2closed(&aut, c.kind.into())?;
            json!({"p": c.p, "set": c.set, "order": aut.order().to_string(), "classification": cls})
        }
        Command::Catalog { p, kind, out, sample, seed, exhaustive } => {
            let method = if *exhaustive { AutMethod::Exhaustive } else { AutMethod::Refinement };
            let kind: GroupKind = (*kind).into();
            let recs = cayley::catalog(*p, kind, method, sample.map(|n| (n, *seed)))?;
            let kind_name = serde_json::to_value(kind)?.as_str().unwrap_or_default().to_string();
            let path = out.clone().or_else(|| {
                std::env::var_os("P2GROUPS_OUT_DIR").map(|d| PathBuf::from(d).join(format!("catalog-p{p}-{kind_name}.jsonl")))
            });
            let nonnormal = recs.iter().filter(|r| !r.normal).count();
            match &path {
                Some(path) => {
                    let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    cayley::write_jsonl(&recs, std::io::BufWriter::new(f))?;
                }
                None => {
                    cayley::write_jsonl(&recs, std::io::stdout().lock())?;
                    eprintln!("{}", json!({"p": p, "kind": kind, "seed": seed, "records": recs.len(), "nonnormal": nonnormal}));
                    return Ok(Value::Null);
                }
            }
            json!({"p": p, "kind": kind, "seed": seed, "records": recs.len(), "nonnormal": nonnormal, "out": path})
        }
        Command::Verify { slow, seed, criterion } => {
            let tier = if *slow { Tier::Slow } else { Tier::Fast };
            let ids: Vec<u8> = if criterion.is_empty() { verify::CRITERIA.iter().map(|c| c.0).collect() } else { criterion.clone() };
            let mut reports = Vec::new();
            for id in ids {
                let r = verify::run_criterion(id, tier, *seed)?;
                eprintln!("{r}");
                reports.push(r);
            }
            let passed = reports.iter().filter(|r| r.pass).count();
            json!({"tier": tier, "seed": seed, "passed": passed, "total": reports.len(), "criteria": reports})
        }
    })
}

fn table(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                table(x, &key, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                table(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}\t{s}\n")),
        _ => out.push_str(&format!("{prefix}\t{v}\n")),
    }
}

fn error_json(e: &anyhow::Error) -> Value {
    let kind = match e.downcast_ref::<p2groups::Error>() {
        Some(p2groups::Error::NotPrime(n)) => return json!({"error": "not_prime", "message": format!("p must be prime (got {n})")}),
        Some(p2groups::Error::Invalid(_)) => "invalid",
        Some(p2groups::Error::Unsupported(_)) => "unsupported",
        Some(p2groups::Error::Search(_)) => "search",
        Some(p2groups::Error::Perm(_)) => "permutation",
        Some(p2groups::Error::Code(_)) => "code",
        None => "input",
    };
    json!({"error": kind, "message": format!("{e:#}")})
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(v) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
                Format::Table => {
                    let mut s = String::new();
                    table(&v, "", &mut s);
                    s
                }
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(1)
        }
    }
}
