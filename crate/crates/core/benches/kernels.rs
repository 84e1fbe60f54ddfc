//! Sequential against rayon for the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use northcott_core::arithmetic::primes_in_range;
use northcott_core::constructions::{find_split_cyclic, SplitCyclicOptions};
use northcott_core::heights::northcott_enumerate;
use northcott_core::linalg::kernel_basis_mod_prime;
use northcott_core::metrics::sh_partial_sum;
use northcott_core::{AbelianField, Caps, Exec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve 10^9..10^9+10^7");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| primes_in_range(1_000_000_000, 1_010_000_000, exec)));
    }
    g.finish();
}

fn splitting_sweep(c: &mut Criterion) {
    let caps = Caps::default();
    let field = AbelianField::from_subgroup(3 * 41, &[], &caps).unwrap();
    let mut g = c.benchmark_group("partial sum, conductor 123, X = 10^6");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| sh_partial_sum(&field, 1_000_000, &caps, exec).unwrap()));
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let caps = Caps::default();
    let mut g = c.benchmark_group("enumerate degree <= 3, height <= 0.6");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| northcott_enumerate(3, 0.6, &caps, exec).unwrap()));
    }
    g.finish();
}

fn elimination(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut g = c.benchmark_group("kernel mod p");
    g.sample_size(10);
    for (n, p) in [(600usize, 5u64), (300, 1009)] {
        let rows: Vec<Vec<u64>> = (0..n - 1).map(|_| (0..n).map(|_| rng.random_range(0..p)).collect()).collect();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, format!("{n}x{n} mod {p}")), &rows, |b, rows| {
                b.iter(|| kernel_basis_mod_prime(rows.clone(), n, p, exec))
            });
        }
    }
    g.finish();
}

fn construction(c: &mut Criterion) {
    let caps = Caps::default();
    let split: Vec<u64> = (2..200).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect();
    let mut g = c.benchmark_group("split-cyclic quintic, primes < 200");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| find_split_cyclic(&split, 5, &SplitCyclicOptions::default(), &caps, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sieve, splitting_sweep, enumeration, elimination, construction);
criterion_main!(benches);
