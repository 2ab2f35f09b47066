//! Small shared utilities.

/// SplitMix64: tiny deterministic RNG for randomized property checks and the
/// CLI's seeded commands. Kept in-crate so identical seeds give identical
/// streams on every platform and toolchain.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `[0, bound)`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

/// Binomial coefficient C(n, k) modulo p via Lucas' theorem.
pub fn binomial_mod_p(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = acc * binomial_small(nd, kd) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn binomial_small(n: u64, k: u64) -> u64 {
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas_matches_pascal() {
        for p in [2u64, 3, 5] {
            let mut row = vec![1u64];
            for n in 0..30u64 {
                for k in 0..=n {
                    assert_eq!(
                        binomial_mod_p(n, k, p),
                        row[k as usize] % p,
                        "C({n},{k}) mod {p}"
                    );
                }
                let mut next = vec![1u64];
                for k in 1..=n as usize {
                    next.push((row[k - 1] + row[k]) % (p * 1_000_003));
                }
                next.push(1);
                row = next.iter().map(|v| v % (p * 1_000_003)).collect();
            }
        }
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
