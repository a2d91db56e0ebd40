use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use lfcc_core::cartan::{self, CartanData, IndexSequence, IntMatrix, OrientationPreset, RankVector};
use lfcc_core::ccrec::{self, Direction};
use lfcc_core::cluster::Seed;
use lfcc_core::hmod::{self, count_lf_submodules, Field, LfModuleRep, ModuleTemplate, PrimeField, Rationals};
use lfcc_core::verify::{self, Report};
use lfcc_core::Exec;

type Res<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "lfcc", version, about = "Cluster characters of locally free modules")]
struct Cli {
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mutate an exchange matrix and its initial seed along a path.
    Mutate {
        /// Exchange matrix, rows separated by ';' and entries by ','.
        #[arg(long, conflicts_with = "cartan")]
        b: Option<String>,
        /// Cartan file; its exchange matrix is used.
        #[arg(long)]
        cartan: Option<PathBuf>,
        /// Mutation directions, 1-based, comma separated.
        #[arg(long, value_delimiter = ',')]
        path: Vec<usize>,
    },
    /// Cluster characters.
    #[command(subcommand)]
    Cc(CcCmd),
    /// Verification sweeps.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Positive roots with an adapted sequence for each.
    Roots(CartanArgs),
    /// Write a module file.
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Apply a sink (+) or source (-) reflection functor to a module file.
    Reflect {
        #[arg(long)]
        module: PathBuf,
        /// Vertex, 1-based.
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        dir: Dir,
    },
    /// Euler characteristic of the locally free quiver Grassmannian.
    Chi {
        #[arg(long)]
        module: PathBuf,
        /// Rank vector, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        r: Vec<i64>,
        /// Print the number of points over F_q instead.
        #[arg(long)]
        q: Option<u64>,
    },
}

#[derive(Subcommand)]
enum CcCmd {
    /// `X_{M(n)}` for the rank-2 data `C = [[2,-b],[-c,2]]`, `D = (c1, c2)`.
    Rank2 {
        #[command(flatten)]
        data: Rank2Args,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        /// Also print the rank vector and F-polynomial.
        #[arg(long)]
        verbose: bool,
    },
    /// The cluster character of an admissible sequence.
    Seq {
        #[command(flatten)]
        cartan: CartanArgs,
        /// 1-based, comma separated.
        #[arg(long, value_delimiter = ',')]
        seq: Vec<usize>,
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Reflection tower against the rank-2 recurrence on `from..to`.
    Rank2 {
        #[command(flatten)]
        data: Rank2Args,
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        /// Exclusive upper end.
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
    },
    /// Positive roots against cluster variables of a Dynkin type.
    Dynkin {
        #[arg(long = "type")]
        kind: char,
        #[arg(long)]
        n: usize,
        /// Cartan file or JSON list of 1-based pairs; default: every preset.
        #[arg(long)]
        orientation: Option<PathBuf>,
    },
    /// Symbolic F-polynomials against point counts over finite fields.
    Oracle,
}

#[derive(Subcommand)]
enum ModuleCmd {
    /// `M(n)` of the rank-2 data over Q.
    Rank2 {
        #[command(flatten)]
        data: Rank2Args,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// The module of an admissible sequence over Q.
    Seq {
        #[command(flatten)]
        cartan: CartanArgs,
        #[arg(long, value_delimiter = ',')]
        seq: Vec<usize>,
    },
}

#[derive(Args, Clone, Copy)]
struct Rank2Args {
    #[arg(long)]
    b: i64,
    #[arg(long)]
    c: i64,
    #[arg(long)]
    c1: i64,
    #[arg(long)]
    c2: i64,
}

#[derive(Args)]
struct CartanArgs {
    /// Cartan file.
    #[arg(long, conflicts_with_all = ["kind", "n"])]
    cartan: Option<PathBuf>,
    /// Dynkin type letter.
    #[arg(long = "type", requires = "n")]
    kind: Option<char>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "ascending")]
    orient: Orient,
}

#[derive(Clone, Copy, ValueEnum)]
enum Orient {
    Ascending,
    Descending,
    Bipartite,
}

impl From<Orient> for OrientationPreset {
    fn from(o: Orient) -> Self {
        match o {
            Orient::Ascending => OrientationPreset::Ascending,
            Orient::Descending => OrientationPreset::Descending,
            Orient::Bipartite => OrientationPreset::Bipartite,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_cartan(args: &CartanArgs) -> Res<CartanData> {
    match (&args.cartan, args.kind, args.n) {
        (Some(path), _, _) => Ok(cartan::cartan_from_json(&read(path)?)?),
        (None, Some(kind), Some(n)) => {
            let c = cartan::dynkin_cartan(kind, n)?;
            let omega = cartan::preset_orientation(&c, args.orient.into());
            Ok(CartanData::with_minimal_symmetrizer(c, omega)?)
        }
        _ => Err("give --cartan FILE or --type X --n k".into()),
    }
}

fn zero_based(v: &[usize], n: usize) -> Res<Vec<usize>> {
    v.iter()
        .map(|&i| {
            if i == 0 || i > n {
                Err(format!("index {i} outside 1..={n}").into())
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

fn parse_matrix(s: &str) -> Res<IntMatrix> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad entry {x:?}: {e}").into()))
                .collect()
        })
        .collect()
}

fn matrix_string(b: &IntMatrix) -> String {
    let rows: Vec<String> = b
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn print_report(r: &Report) -> ExitCode {
    println!("{r}");
    if r.all_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

enum AnyModule {
    Q(LfModuleRep<Rationals>),
    P(LfModuleRep<PrimeField>),
}

fn load_module(path: &Path) -> Res<AnyModule> {
    let v: Value = serde_json::from_str(&read(path)?)?;
    match v.get("field") {
        Some(Value::String(s)) if s == "Q" => Ok(AnyModule::Q(LfModuleRep::from_json_with(Rationals, &v)?)),
        Some(Value::Number(p)) => {
            let p = p.as_u64().ok_or("field must be \"Q\" or a prime")?;
            let f = PrimeField::new(p).ok_or_else(|| format!("{p} is not a prime below 2^31"))?;
            Ok(AnyModule::P(LfModuleRep::from_json_with(f, &v)?))
        }
        _ => Err("field must be \"Q\" or a prime".into()),
    }
}

fn print_module<F: Field>(m: &LfModuleRep<F>) -> Res<()> {
    println!("{}", serde_json::to_string_pretty(&m.to_json()?)?);
    Ok(())
}

fn reflect_and_print<F: Field>(m: &LfModuleRep<F>, k: usize, dir: Direction) -> Res<()> {
    if k == 0 || k > m.cd().n() {
        return Err(format!("vertex {k} outside 1..={}", m.cd().n()).into());
    }
    print_module(&hmod::reflect_module(m, k - 1, dir)?)
}

fn dynkin_orientations(kind: char, n: usize, file: Option<&Path>) -> Res<Vec<CartanData>> {
    let c = cartan::dynkin_cartan(kind, n)?;
    let mut out: Vec<CartanData> = Vec::new();
    match file {
        Some(path) => {
            let v: Value = serde_json::from_str(&read(path)?)?;
            let pairs = v.get("Omega").unwrap_or(&v);
            let pairs: Vec<[usize; 2]> = serde_json::from_value(pairs.clone())?;
            let omega = pairs
                .iter()
                .map(|&[i, j]| Ok((zero_based(&[i], n)?[0], zero_based(&[j], n)?[0])))
                .collect::<Res<Vec<_>>>()?;
            out.push(CartanData::with_minimal_symmetrizer(c, omega)?);
        }
        None => {
            for preset in [OrientationPreset::Ascending, OrientationPreset::Descending, OrientationPreset::Bipartite] {
                let cd = CartanData::with_minimal_symmetrizer(c.clone(), cartan::preset_orientation(&c, preset))?;
                if !out.contains(&cd) {
                    out.push(cd);
                }
            }
        }
    }
    Ok(out)
}

fn omega_string(cd: &CartanData) -> String {
    let pairs: Vec<String> = cd.omega().iter().map(|&(i, j)| format!("({},{})", i + 1, j + 1)).collect();
    format!("Omega={{{}}}", pairs.join(","))
}

fn run(cli: Cli) -> Res<ExitCode> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match cli.cmd {
        Cmd::Mutate { b, cartan, path } => {
            let b = match (b, cartan) {
                (Some(s), None) => parse_matrix(&s)?,
                (None, Some(p)) => cartan::cartan_from_json(&read(&p)?)?.b_matrix().clone(),
                _ => return Err("give --b MATRIX or --cartan FILE".into()),
            };
            let mut seed = Seed::initial(b)?;
            for k in zero_based(&path, seed.b().len())? {
                seed = seed.mutate(k)?;
            }
            println!("B = {}", matrix_string(seed.b()));
            for (i, x) in seed.vars().iter().enumerate() {
                println!("x{} = {x}", i + 1);
            }
        }
        Cmd::Cc(CcCmd::Rank2 { data, n, verbose }) => {
            let sym = ccrec::rank2_symbol(data.b, data.c, data.c1, data.c2, n)?;
            let cc = ccrec::cc_from_f(&sym)?;
            println!("{cc}");
            if verbose {
                print_symbol(&sym);
            }
        }
        Cmd::Cc(CcCmd::Seq { cartan, seq, verbose }) => {
            let cd = load_cartan(&cartan)?;
            let seq = IndexSequence(zero_based(&seq, cd.n())?);
            let sym = ccrec::symbol_of_sequence(&cd, &seq)?;
            println!("{}", ccrec::cc_from_f(&sym)?);
            if verbose {
                print_symbol(&sym);
            }
        }
        Cmd::Verify(VerifyCmd::Rank2 { data, from, to }) => {
            let r = verify::verify_rank2(data.b, data.c, data.c1, data.c2, from, to, exec)?;
            return Ok(print_report(&r));
        }
        Cmd::Verify(VerifyCmd::Dynkin { kind, n, orientation }) => {
            let mut total = Report::default();
            for cd in dynkin_orientations(kind, n, orientation.as_deref())? {
                let mut r = verify::verify_dynkin(&cd, exec)?;
                let tag = omega_string(&cd);
                for c in &mut r.cases {
                    c.id = format!("{tag}:{}", c.id);
                }
                total.extend(r);
            }
            return Ok(print_report(&total));
        }
        Cmd::Verify(VerifyCmd::Oracle) => {
            let r = verify::verify_oracle(&verify::default_oracle_cases()?, exec);
            return Ok(print_report(&r));
        }
        Cmd::Roots(args) => {
            let cd = load_cartan(&args)?;
            for beta in cd.positive_roots()? {
                println!("{beta} {}", cd.find_adapted_sequence(&beta)?);
            }
        }
        Cmd::Module(ModuleCmd::Rank2 { data, n }) => {
            let t = ModuleTemplate::rank2(data.b, data.c, data.c1, data.c2, n)?;
            print_module(&t.over_rationals()?)?;
        }
        Cmd::Module(ModuleCmd::Seq { cartan, seq }) => {
            let cd = load_cartan(&cartan)?;
            let seq = IndexSequence(zero_based(&seq, cd.n())?);
            print_module(&ModuleTemplate::from_sequence(&cd, &seq)?.over_rationals()?)?;
        }
        Cmd::Reflect { module, k, dir } => {
            let dir = match dir {
                Dir::Plus => Direction::Plus,
                Dir::Minus => Direction::Minus,
            };
            match load_module(&module)? {
                AnyModule::Q(m) => reflect_and_print(&m, k, dir)?,
                AnyModule::P(m) => reflect_and_print(&m, k, dir)?,
            }
        }
        Cmd::Chi { module, r, q } => {
            let m = load_module(&module)?;
            let r = RankVector(r);
            match (m, q) {
                (AnyModule::Q(m), None) => {
                    let chi = hmod::euler_char_gr(&ModuleTemplate::Fixed(m), &r, exec)?;
                    println!("{chi}");
                }
                (AnyModule::Q(m), Some(q)) => {
                    let pf = PrimeField::new(q).ok_or_else(|| format!("{q} is not a prime below 2^31"))?;
                    let m = m.reduce_mod(pf).ok_or_else(|| format!("module does not reduce modulo {q}"))?;
                    println!("{}", count_lf_submodules(&m, &r)?.count);
                }
                (AnyModule::P(m), Some(q)) if q == m.field().p() => {
                    println!("{}", count_lf_submodules(&m, &r)?.count);
                }
                (AnyModule::P(m), _) => {
                    return Err(format!(
                        "module is over F_{}; the Euler characteristic needs a module over Q (use --q {} for a point count)",
                        m.field().p(),
                        m.field().p()
                    )
                    .into());
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_symbol(sym: &ccrec::CCSymbol) {
    if let (Some(rank), Some(f)) = (sym.rank(), sym.f_poly()) {
        println!("rank = {rank}");
        println!("F = {f}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
