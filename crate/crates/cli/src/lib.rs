//! Experiment drivers behind the `fleetmatch` binary.
//!
//! Each subcommand is a plain function here so the experiments can also be
//! run from tests without spawning the binary.

use std::io::Write;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use fleetmatch_core::matchmaking::{self, wire};
use fleetmatch_core::paillier::{self, KeyPair};
use fleetmatch_core::{InterestSet, World};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

/// Version tag written as the first line of every CSV file.
pub const SWEEP_SCHEMA: &str = "# fleetmatch sweep v1";
pub const BENCH_SCHEMA: &str = "# fleetmatch bench v1";

/// Index set used by the benchmark responder, clipped to the world size.
pub const BENCH_INTERESTS: [usize; 4] = [1, 6, 21, 50];

/// Smallest prime size accepted by `bench`.
pub const MIN_BENCH_BITS: u32 = 32;

/// One row of the correctness sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub w: usize,
    pub answered: bool,
}

/// Median cost of one two-party exchange at a given key size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub key_bits: u32,
    pub submit_time_ns: u64,
    pub respond_time_ns: u64,
    pub interpret_time_ns: u64,
    pub query_bytes: u64,
    pub response_bytes: u64,
    pub trials: u32,
}

impl BenchRecord {
    pub fn total_time_ns(&self) -> u64 {
        self.submit_time_ns + self.respond_time_ns + self.interpret_time_ns
    }
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// Log-log slope of end-to-end time against key length.
    pub time_exponent: Option<f64>,
    /// Log-log slope of query size against key length.
    pub bytes_exponent: Option<f64>,
}

/// Seeded generator, or one seeded from OS entropy.
pub fn make_rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

/// Parses a comma-separated list, ignoring blanks.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<T>()
                .with_context(|| format!("invalid list item {p:?}"))
        })
        .collect()
}

/// Queries every index of `world` against one responder.
pub fn sweep<R: Rng + ?Sized>(
    keys: &KeyPair,
    interests: &InterestSet,
    rng: &mut R,
) -> Result<Vec<SweepRecord>> {
    let world = interests.world();
    (1..=world.size())
        .map(|w| {
            let x = matchmaking::submit_query(&keys.public, world, w, rng)?;
            let y = matchmaking::return_response(&keys.public, &x, interests, rng)?;
            let answered = matchmaking::interpret(&keys.private, &keys.public, &y)?;
            Ok(SweepRecord { w, answered })
        })
        .collect()
}

struct TrialTiming {
    submit: Duration,
    respond: Duration,
    interpret: Duration,
    query_bytes: usize,
    response_bytes: usize,
}

fn run_trial<R: Rng + ?Sized>(
    keys: &KeyPair,
    interests: &InterestSet,
    rng: &mut R,
) -> Result<TrialTiming> {
    let pk = &keys.public;
    let world = interests.world();
    let started = Instant::now();
    let x = matchmaking::submit_query(pk, world, 1, rng)?;
    let submit = started.elapsed();
    let query_bytes = wire::encode_query(pk, &x).len();

    let started = Instant::now();
    let y = matchmaking::return_response(pk, &x, interests, rng)?;
    let respond = started.elapsed();
    let response_bytes = wire::encode_response(pk, &y).len();

    let started = Instant::now();
    matchmaking::interpret(&keys.private, pk, &y)?;
    let interpret = started.elapsed();
    Ok(TrialTiming {
        submit,
        respond,
        interpret,
        query_bytes,
        response_bytes,
    })
}

fn median(mut values: Vec<u64>) -> u64 {
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2
    }
}

fn nanos(d: Duration) -> u64 {
    u64::try_from(d.as_nanos()).unwrap_or(u64::MAX).max(1)
}

/// Times the two-party protocol at each key size.
///
/// Per key size one key pair is generated, one warm-up exchange is
/// discarded and `trials` further exchanges are timed; the record holds the
/// medians. With `parallel`, trials run on separate threads, each with a
/// generator seeded from `rng`.
pub fn bench<R: Rng + ?Sized>(
    bit_list: &[u32],
    trials: u32,
    world_size: usize,
    parallel: bool,
    rng: &mut R,
) -> Result<BenchReport> {
    ensure!(trials >= 3, "at least 3 trials are required, got {trials}");
    ensure!(!bit_list.is_empty(), "no key sizes given");
    if let Some(b) = bit_list.iter().find(|&&b| b < MIN_BENCH_BITS) {
        bail!("key size {b} is below the benchmark minimum of {MIN_BENCH_BITS} bits");
    }
    let world = World::new(1, world_size)?;
    let interests = InterestSet::new(
        world,
        BENCH_INTERESTS.into_iter().filter(|&w| w <= world_size),
    )?;

    let mut records = Vec::with_capacity(bit_list.len());
    for &bits in bit_list {
        let keys = paillier::generate_keys(bits, rng)?;
        run_trial(&keys, &interests, rng)?;
        let timings: Vec<TrialTiming> = if parallel {
            let seeds: Vec<u64> = (0..trials).map(|_| rng.next_u64()).collect();
            std::thread::scope(|scope| {
                let handles: Vec<_> = seeds
                    .iter()
                    .map(|&seed| {
                        let (keys, interests) = (&keys, &interests);
                        scope.spawn(move || {
                            run_trial(keys, interests, &mut ChaCha20Rng::seed_from_u64(seed))
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("bench thread panicked"))
                    .collect::<Result<Vec<_>>>()
            })?
        } else {
            (0..trials)
                .map(|_| run_trial(&keys, &interests, rng))
                .collect::<Result<Vec<_>>>()?
        };
        records.push(BenchRecord {
            key_bits: bits,
            submit_time_ns: median(timings.iter().map(|t| nanos(t.submit)).collect()),
            respond_time_ns: median(timings.iter().map(|t| nanos(t.respond)).collect()),
            interpret_time_ns: median(timings.iter().map(|t| nanos(t.interpret)).collect()),
            query_bytes: timings[0].query_bytes as u64,
            response_bytes: timings[0].response_bytes as u64,
            trials,
        });
    }

    let xs: Vec<f64> = records.iter().map(|r| f64::from(r.key_bits)).collect();
    let times: Vec<f64> = records.iter().map(|r| r.total_time_ns() as f64).collect();
    let bytes: Vec<f64> = records.iter().map(|r| r.query_bytes as f64).collect();
    Ok(BenchReport {
        time_exponent: log_log_slope(&xs, &times),
        bytes_exponent: log_log_slope(&xs, &bytes),
        records,
    })
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// distinct x values or a non-positive value.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.iter().chain(ys).any(|&v| v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

fn write_csv<T: Serialize>(out: &mut dyn Write, schema: &str, rows: &[T]) -> Result<()> {
    writeln!(out, "{schema}")?;
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_sweep_csv(out: &mut dyn Write, rows: &[SweepRecord]) -> Result<()> {
    if rows.is_empty() {
        writeln!(out, "{SWEEP_SCHEMA}\nw,answered")?;
        return Ok(());
    }
    write_csv(out, SWEEP_SCHEMA, rows)
}

/// Records followed by `# fit` comment lines with the fitted exponents.
pub fn write_bench_csv(out: &mut dyn Write, report: &BenchReport) -> Result<()> {
    write_csv(out, BENCH_SCHEMA, &report.records)?;
    let fmt = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), |v| format!("{v:.4}"));
    writeln!(out, "# fit time_exponent={}", fmt(report.time_exponent))?;
    writeln!(out, "# fit bytes_exponent={}", fmt(report.bytes_exponent))?;
    Ok(())
}
