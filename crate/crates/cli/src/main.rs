//! `northcott`: abelian fields, the local-term series and its windows,
//! split-cyclic constructions and towers, Weil heights, and a verifier for
//! the JSON certificates all of these emit.

mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use northcott_core::certificate::{self, Certificate, Invocation, SubgroupSpec};
use northcott_core::constructions::{
    effective_threshold_check, inert_quadratic_witness, shafarevich_local_params, TowerKind,
};
use northcott_core::heights::IntPolynomial;
use northcott_core::metrics::LocalDatum;
use northcott_core::{Caps, Error, Exec};

const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "northcott", version, about = "Abelian fields, local-term sums, split-cyclic towers and heights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write the certificate here (atomically).
    #[arg(long, global = true, value_name = "PATH")]
    cert: Option<PathBuf>,
    /// Print the canonical certificate instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Run every kernel on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct CapArgs {
    /// Largest integer any sieve or prime search may reach.
    #[arg(long, global = true, default_value_t = Caps::default().sieve)]
    cap_sieve: u64,
    /// Largest character group that may be materialised.
    #[arg(long, global = true, default_value_t = Caps::default().group)]
    cap_group: u64,
    /// Largest number of intermediate fields in a lattice walk.
    #[arg(long, global = true, default_value_t = Caps::default().lattice)]
    cap_lattice: u64,
    /// Largest dimension of a linear system over Z/q.
    #[arg(long, global = true, default_value_t = Caps::default().linear)]
    cap_linear: u64,
    /// Largest number of candidate polynomials in an enumeration.
    #[arg(long, global = true, default_value_t = Caps::default().enumeration)]
    cap_enumeration: u64,
    /// Trial-division bound in factorisations.
    #[arg(long, global = true, default_value_t = Caps::default().factor_trial)]
    cap_factor_trial: u64,
    /// Largest number of interpolation tuples in the factor search.
    #[arg(long, global = true, default_value_t = Caps::default().factor_search)]
    cap_factor_search: u64,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            sieve: self.cap_sieve,
            group: self.cap_group,
            lattice: self.cap_lattice,
            linear: self.cap_linear,
            enumeration: self.cap_enumeration,
            factor_trial: self.cap_factor_trial,
            factor_search: self.cap_factor_search,
        }
    }
}

/// A field Q(ζ_m)^H.
#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long)]
    modulus: u64,
    /// Generators of H ⊆ (Z/m)^*; empty means the full cyclotomic field.
    #[arg(long, value_delimiter = ',')]
    subgroup: Vec<u64>,
}

impl FieldArgs {
    fn spec(&self) -> SubgroupSpec {
        SubgroupSpec { modulus: self.modulus, subgroup: self.subgroup.clone() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Degree, conductor, discriminant and splitting table of a field.
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 50)]
        primes_to: u64,
    },
    /// Σ_{p ≤ X} log p / (e_p(p^{f_p} + 1)).
    Shsum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "X")]
        x: u64,
    },
    /// Half the partial sum: a lower bound for the liminf of heights.
    Bogomolov {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "X")]
        x: u64,
    },
    /// Dyadic window sums a_k against 1/(13[F:Q]).
    Window {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 5)]
        kmin: u32,
        #[arg(long, default_value_t = 18)]
        kmax: u32,
    },
    /// T = Σ log k / k² to a tolerance, or the bound Σ log p/(e(p^f − 1)).
    Fili {
        #[arg(long, conflicts_with = "data")]
        tolerance: Option<f64>,
        /// Local data as p:e:f, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = parse_datum)]
        data: Option<Vec<LocalDatum>>,
    },
    /// Σ_{p ≤ X} log p / (p² + 1).
    Q2bound {
        #[arg(long = "X")]
        x: u64,
    },
    /// Split-cyclic fields and towers.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Infimum of normed relative discriminants over K_{i−1} ⊊ M ⊆ K_i.
    Widmer {
        #[arg(long)]
        modulus: u64,
        /// H for K_i.
        #[arg(long, value_delimiter = ',')]
        subgroup: Vec<u64>,
        /// H for K_{i−1}.
        #[arg(long, value_delimiter = ',')]
        prev_subgroup: Vec<u64>,
        /// H for K₀; the rationals when absent.
        #[arg(long, value_delimiter = ',')]
        base_subgroup: Option<Vec<u64>>,
    },
    /// Mahler measure and Weil height of a root of an integer polynomial.
    Height {
        /// Coefficients, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// All algebraic numbers of degree ≤ dmax and height ≤ bound.
    Enumerate {
        #[arg(long)]
        dmax: usize,
        #[arg(long)]
        bound: f64,
    },
    /// Numbers of positive height ≤ bound and degree ≤ dmax inside a field.
    Scan {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        dmax: usize,
        #[arg(long)]
        bound: f64,
    },
    /// Parameter arithmetic for the constructions.
    Params {
        #[command(subcommand)]
        what: Params,
    },
    /// Re-check a certificate from its field presentations.
    Verify { path: PathBuf },
}

#[derive(Subcommand)]
enum Construct {
    /// Cyclic field of prime-power degree, totally split at the given primes.
    Cyclic {
        #[arg(long, value_delimiter = ',')]
        split: Vec<u64>,
        #[arg(long)]
        degree: u64,
        #[arg(long)]
        totally_real: bool,
        /// Primes never to use as auxiliary primes.
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<u64>,
    },
    /// Tower of cyclic steps.
    Tower {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Cyclic orders of the levels (product towers).
        #[arg(long, value_delimiter = ',')]
        orders: Vec<u64>,
        #[arg(long)]
        depth: usize,
        /// Least prime degree tried (anti-Widmer towers).
        #[arg(long, default_value_t = 3)]
        prime_floor: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Product,
    AntiWidmer,
}

#[derive(Subcommand)]
enum Params {
    /// Whether π(e^{p/(N+1)}, p, 1) ≥ 2(N+1).
    Threshold {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
    },
    /// Least squarefree d with p inert in Q(√d).
    Inert {
        #[arg(long)]
        p: u64,
    },
    /// Local parameters f and e_i of the Shafarevich-type step.
    Local {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        mu: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
}

fn parse_datum(s: &str) -> Result<LocalDatum, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [p, e, f] = parts[..] else {
        return Err(format!("expected p:e:f, got {s:?}"));
    };
    let n = |x: &str| x.parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    LocalDatum::new(n(p)?, n(e)?, n(f)?).map_err(|e| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } => EXIT_LIMIT,
        Error::InternalInconsistency(_) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

/// Writes `text` next to `path` and renames it into place.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(text.as_bytes())?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn invocation(cmd: &Command) -> Option<Invocation> {
    Some(match cmd {
        Command::Field { field, primes_to } => Invocation::Field { field: field.spec(), primes_to: *primes_to },
        Command::Shsum { field, x } => Invocation::Shsum { field: field.spec(), x: *x },
        Command::Bogomolov { field, x } => Invocation::Bogomolov { field: field.spec(), x: *x },
        Command::Window { field, kmin, kmax } => Invocation::Window { field: field.spec(), kmin: *kmin, kmax: *kmax },
        Command::Fili { tolerance, data } => Invocation::Fili {
            tolerance: tolerance.or(if data.is_none() { Some(1e-4) } else { None }),
            data: data.clone(),
        },
        Command::Q2bound { x } => Invocation::Q2bound { x: *x },
        Command::Construct { what: Construct::Cyclic { split, degree, totally_real, exclude } } => {
            Invocation::ConstructCyclic {
                split: split.clone(),
                degree: *degree,
                totally_real: *totally_real,
                exclude: exclude.clone(),
            }
        }
        Command::Construct { what: Construct::Tower { kind, orders, depth, prime_floor } } => {
            Invocation::ConstructTower {
                kind: match kind {
                    KindArg::Product => TowerKind::Product,
                    KindArg::AntiWidmer => TowerKind::AntiWidmer,
                },
                orders: orders.clone(),
                depth: *depth,
                prime_floor: *prime_floor,
            }
        }
        Command::Widmer { modulus, subgroup, prev_subgroup, base_subgroup } => {
            let spec = |h: &Vec<u64>| SubgroupSpec { modulus: *modulus, subgroup: h.clone() };
            Invocation::Widmer {
                next: spec(subgroup),
                prev: spec(prev_subgroup),
                base: base_subgroup.as_ref().map(spec),
            }
        }
        Command::Height { poly, tolerance } => {
            Invocation::Height { polynomial: IntPolynomial::parse(poly).ok()?, tolerance: *tolerance }
        }
        Command::Enumerate { dmax, bound } => Invocation::Enumerate { dmax: *dmax, bound: *bound },
        Command::Scan { field, dmax, bound } => Invocation::Scan { field: field.spec(), dmax: *dmax, bound: *bound },
        Command::Params { .. } | Command::Verify { .. } => return None,
    })
}

fn params(what: &Params, caps: &Caps, json: bool) -> Result<(), Error> {
    let value = match what {
        Params::Threshold { n, p } => {
            let r = effective_threshold_check(*n, *p, caps)?;
            if !json {
                println!("{}", render::threshold(&r));
            }
            serde_json::to_value(r)
        }
        Params::Inert { p } => {
            let d = inert_quadratic_witness(*p, caps)?;
            if !json {
                println!("{p} is inert in Q(sqrt({d}))");
            }
            serde_json::to_value(serde_json::json!({ "p": p.to_string(), "d": d.to_string() }))
        }
        Params::Local { p, mu, h, k, primes } => {
            let r = shafarevich_local_params(*p, *mu, *h, *k, primes, caps)?;
            if !json {
                println!("{}", render::local_params(&r, primes));
            }
            serde_json::to_value(r)
        }
    }
    .expect("parameter reports serialise");
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("values serialise"));
    }
    Ok(())
}

fn verify_file(path: &Path, caps: &Caps, exec: Exec, json: bool) -> u8 {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let cert = match Certificate::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {} is not a certificate: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    match certificate::verify(&cert, caps, exec) {
        Ok(r) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("reports serialise"));
            } else if r.ok() {
                println!("verified: {} certificate, every claim holds", render::kind_name(cert.kind));
            } else {
                for f in &r.failures {
                    println!("FAILED {} {}", f.label, f.detail);
                }
            }
            if r.ok() {
                0
            } else {
                EXIT_VERIFY
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceLimit { .. } => EXIT_LIMIT,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = cli.common.caps.caps();
    let exec = if cli.common.sequential { Exec::Sequential } else { Exec::Parallel };
    let json = cli.common.json;
    match &cli.command {
        Command::Verify { path } => return ExitCode::from(verify_file(path, &caps, exec, json)),
        Command::Params { what } => {
            return match params(what, &caps, json) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code(&e))
                }
            };
        }
        _ => {}
    }
    let Some(inv) = invocation(&cli.command) else {
        eprintln!("error: invalid polynomial");
        return ExitCode::from(EXIT_USAGE);
    };
    let (cert, code) = match certificate::run(&inv, &caps, exec) {
        Ok(c) => (c, 0),
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code != EXIT_VERIFY {
                return ExitCode::from(code);
            }
            (certificate::diagnostic(&inv, &caps, &e), code)
        }
    };
    let text = cert.to_canonical_string();
    if let Some(path) = &cli.common.cert {
        if let Err(e) = write_atomic(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if json {
        print!("{text}");
    } else if code == 0 {
        match render::certificate(&cert) {
            Ok(s) => print!("{s}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_VERIFY);
            }
        }
    }
    ExitCode::from(code)
}
