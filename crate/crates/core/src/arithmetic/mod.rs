//! Exact integer, modular and prime-counting substrate.

mod dlog;
mod factor;
mod modular;
mod primality;
mod sieve;
mod units;

pub use dlog::{discrete_log, dlog_in_cyclic, multiplicative_order};
pub use factor::{divisors, euler_phi, factorize, factorize_with_cap, Factorization};
pub use modular::{crt_pair, gcd, inv_mod, lcm, mul_mod, pow_mod, Montgomery};
pub use primality::{is_prime, next_prime, prev_prime};
pub use sieve::{find_primes_in_ap, primes_in_ap_count, primes_in_range, primes_up_to, APCount, PrimeStream};
pub use units::{least_primitive_root, unit_group, LocalFactor, LocalKind, UnitGroupStructure};
