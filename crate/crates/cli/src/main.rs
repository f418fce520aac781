use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fleetmatch_cli::{
    bench, make_rng, parse_list, sweep, write_bench_csv, write_sweep_csv, MIN_BENCH_BITS,
};
use fleetmatch_core::adversary::{self, AttackReport};
use fleetmatch_core::matchmaking::{self, FleetInterests};
use fleetmatch_core::network::{self, CommGraph};
use fleetmatch_core::paillier::{self, KeyFile, KeyPair};
use fleetmatch_core::{FleetId, InterestSet, Scenario, World};
use num_bigint::BigUint;
use rand_chacha::ChaCha20Rng;

#[derive(Parser)]
#[command(
    name = "fleetmatch",
    version,
    about = "Encrypted match-making experiments for fleet coordination"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for all randomness; OS entropy when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Key file to use instead of generating keys.
    #[arg(long, global = true)]
    keys: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overwrite an existing output file.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair and write the key file.
    Keygen {
        /// Bit length of each prime.
        #[arg(long, default_value_t = 1024)]
        bits: u32,
        /// Use these primes instead of random ones, as `P,Q`.
        #[arg(long)]
        primes: Option<String>,
        /// Write only the public part.
        #[arg(long)]
        public_only: bool,
    },
    /// Query every index of a world against one responder and print a CSV sweep.
    Demo {
        #[arg(long, default_value_t = 10)]
        roads: usize,
        #[arg(long, default_value_t = 24)]
        slots: usize,
        /// Responder's interest indices, comma separated.
        #[arg(long, default_value = "1,6,21,50")]
        interests: String,
        #[arg(long, default_value_t = 128)]
        bits: u32,
    },
    /// Time the two-party exchange across key sizes.
    Bench {
        /// Key sizes, comma separated.
        #[arg(long, default_value = "128,256,512,1024")]
        bits: String,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        #[arg(long, default_value_t = 240)]
        world_size: usize,
        /// Run trials on separate threads.
        #[arg(long)]
        parallel: bool,
    },
    /// Run a multi-fleet session over a communication graph.
    DistDemo {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        enquirer: FleetId,
        #[arg(long)]
        w: usize,
        #[arg(long, default_value_t = 128)]
        bits: u32,
    },
    /// Demonstrate crafted-query attacks.
    Attack(AttackArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackMode {
    Bezout,
    Freevar,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long, value_enum)]
    mode: AttackMode,
    #[arg(long, default_value_t = 128)]
    bits: u32,
    /// Use these primes instead of random ones, as `P,Q`.
    #[arg(long)]
    primes: Option<String>,
    /// Scenario file holding the responder's interests.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Responding fleet within the scenario.
    #[arg(long)]
    fleet: Option<FleetId>,
    #[arg(long, default_value_t = 1)]
    roads: usize,
    #[arg(long, default_value_t = 8)]
    slots: usize,
    /// Responder's interest indices when no scenario is given.
    #[arg(long, default_value = "")]
    interests: String,
    #[arg(long)]
    w1: Option<usize>,
    #[arg(long)]
    w2: Option<usize>,
    /// Crafted coefficients for freevar mode, comma separated.
    #[arg(long)]
    coefficients: Option<String>,
    /// Decryption whose solutions are counted; a live exchange produces it
    /// when omitted.
    #[arg(long)]
    target: Option<u64>,
    /// Number of responding fleets.
    #[arg(long, default_value_t = 1)]
    fleets: usize,
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let common = &cli.common;
    let mut rng = make_rng(common.seed);
    match cli.command {
        Command::Keygen {
            bits,
            primes,
            public_only,
        } => {
            let keys = match primes {
                Some(p) => keys_from_primes(&p)?,
                None => paillier::generate_keys(bits, &mut rng)?,
            };
            let file = if public_only {
                KeyFile::from_public(&keys.public)
            } else {
                KeyFile::from_keypair(&keys)
            };
            emit(common, (file.to_json() + "\n").as_bytes())
        }
        Command::Demo {
            roads,
            slots,
            interests,
            bits,
        } => {
            let world = World::new(roads, slots)?;
            let interests = InterestSet::new(world, parse_list::<usize>(&interests)?)?;
            let keys = load_or_generate(common, bits, &mut rng)?;
            let rows = sweep(&keys, &interests, &mut rng)?;
            let mut out = Vec::new();
            write_sweep_csv(&mut out, &rows)?;
            emit(common, &out)
        }
        Command::Bench {
            bits,
            trials,
            world_size,
            parallel,
        } => {
            let bit_list = parse_list::<u32>(&bits)?;
            ensure!(
                bit_list.iter().all(|&b| b >= MIN_BENCH_BITS),
                "bench key sizes must be at least {MIN_BENCH_BITS} bits"
            );
            let report = bench(&bit_list, trials, world_size, parallel, &mut rng)?;
            let mut out = Vec::new();
            write_bench_csv(&mut out, &report)?;
            emit(common, &out)
        }
        Command::DistDemo {
            graph,
            scenario,
            enquirer,
            w,
            bits,
        } => {
            let g = CommGraph::from_json(&read(&graph)?)
                .with_context(|| format!("parsing graph {}", graph.display()))?;
            if let Some(cut) = g.two_connectivity_witness()? {
                bail!("graph is not 2-connected: removing fleet {cut} disconnects it");
            }
            let scenario = Scenario::from_json(&read(&scenario)?)
                .with_context(|| format!("parsing scenario {}", scenario.display()))?;
            let keys = load_or_generate(common, bits, &mut rng)?;
            let outcome =
                network::run_session_with_keys(&g, enquirer, w, &scenario, &keys, &mut rng)?;
            let summary = serde_json::json!({
                "answer": outcome.answer,
                "enquirer": enquirer,
                "w": w,
                "walk": outcome.walk.vertices(),
                "hops": outcome.transcript.hops.len(),
                "bytes": outcome.transcript.total_bytes(),
            });
            println!("{summary}");
            let lines = outcome.transcript.to_json_lines();
            match &common.out {
                Some(_) => emit(common, lines.as_bytes()),
                None => {
                    print!("{lines}");
                    Ok(())
                }
            }
        }
        Command::Attack(args) => attack(common, args, &mut rng),
    }
}

fn attack(common: &Common, args: AttackArgs, rng: &mut ChaCha20Rng) -> Result<()> {
    let keys = match &args.primes {
        Some(p) => keys_from_primes(p)?,
        None => load_or_generate(common, args.bits, rng)?,
    };
    let (world, interests) = responder(&args)?;
    let json = match args.mode {
        AttackMode::Bezout => {
            let (w1, w2) = match (args.w1, args.w2) {
                (Some(a), Some(b)) => (a, b),
                _ => bail!("bezout mode needs --w1 and --w2"),
            };
            let outcome = adversary::bezout_attack(&keys, world, w1, w2, &interests, rng)?;
            serde_json::to_string(&AttackReport::from_outcome(
                &outcome,
                keys.public.key_bits(),
            ))?
        }
        AttackMode::Freevar => {
            let n = keys.public.modulus();
            let Some(n) = u64::try_from(n).ok().filter(|&n| n <= 64) else {
                bail!(
                    "freevar mode enumerates Z_N^t and needs a toy modulus (N <= 64); \
                     a {}-bit modulus exceeds the enumeration budget of {} tuples",
                    n.bits(),
                    adversary::ENUMERATION_BUDGET
                );
            };
            let coefficients = parse_list::<u64>(
                args.coefficients
                    .as_deref()
                    .context("freevar mode needs --coefficients")?,
            )?;
            let target = match args.target {
                Some(t) => t,
                None => realized_target(&keys, world, &coefficients, &interests, rng)?,
            };
            let report = adversary::free_variable_report(n, &coefficients, target, args.fleets)?;
            serde_json::to_string(&report)?
        }
    };
    emit(common, (json + "\n").as_bytes())
}

/// Decryption of a live response to a query crafted from `coefficients`.
fn realized_target(
    keys: &KeyPair,
    world: World,
    coefficients: &[u64],
    interests: &InterestSet,
    rng: &mut ChaCha20Rng,
) -> Result<u64> {
    ensure!(
        coefficients.len() == world.size(),
        "expected {} coefficients for the world, got {}",
        world.size(),
        coefficients.len()
    );
    let coefficients: Vec<BigUint> = coefficients.iter().map(|&c| c.into()).collect();
    let crafted = adversary::craft_query(&keys.public, &coefficients, rng)?;
    let y = matchmaking::return_response(&keys.public, &crafted.query, interests, rng)?;
    let d = paillier::decrypt(&keys.private, &keys.public, &y.y)?;
    Ok(u64::try_from(d.value())?)
}

fn responder(args: &AttackArgs) -> Result<(World, InterestSet)> {
    match &args.scenario {
        Some(path) => {
            let scenario = Scenario::from_json(&read(path)?)
                .with_context(|| format!("parsing scenario {}", path.display()))?;
            let fleet = match args.fleet {
                Some(f) => f,
                None => match scenario.fleets.as_slice() {
                    [FleetInterests { id, .. }] => *id,
                    _ => bail!("the scenario lists several fleets; pick one with --fleet"),
                },
            };
            Ok((scenario.world()?, scenario.fleet(fleet)?))
        }
        None => {
            let world = World::new(args.roads, args.slots)?;
            let interests = InterestSet::new(world, parse_list::<usize>(&args.interests)?)?;
            Ok((world, interests))
        }
    }
}

fn keys_from_primes(s: &str) -> Result<KeyPair> {
    let primes = parse_list::<BigUint>(s)?;
    let [p, q] = <[BigUint; 2]>::try_from(primes)
        .map_err(|_| anyhow::anyhow!("--primes expects exactly two values, P,Q"))?;
    Ok(KeyPair::from_primes(p, q)?)
}

fn load_or_generate(common: &Common, bits: u32, rng: &mut ChaCha20Rng) -> Result<KeyPair> {
    match &common.keys {
        Some(path) => {
            let file = KeyFile::from_json(&read(path)?)
                .with_context(|| format!("parsing key file {}", path.display()))?;
            ensure!(
                !file.is_public_only(),
                "key file {} holds no private key",
                path.display()
            );
            Ok(file.keypair()?)
        }
        None => Ok(paillier::generate_keys(bits, rng)?),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(common: &Common, bytes: &[u8]) -> Result<()> {
    match &common.out {
        Some(path) => {
            if path.exists() && !common.force {
                bail!("{} exists; pass --force to overwrite", path.display());
            }
            fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            Ok(stdout.flush()?)
        }
    }
}
