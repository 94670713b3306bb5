//! Seeded instance generators used by the test suites and the bench CLI.
//! Everything is driven by ChaCha8 so suites are reproducible from a seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;
use crate::knapsack::KnapsackItem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// values uniform in [1, t]
    Uniform,
    /// all values small: uniform in [1, max(2, t/64)]
    Dense,
    /// values clustered just under scale boundaries t / 2^i
    Clustered,
    /// few distinct values, high multiplicity
    DuplicateHeavy,
}

impl Shape {
    pub const ALL: [Shape; 4] = [
        Shape::Uniform,
        Shape::Dense,
        Shape::Clustered,
        Shape::DuplicateHeavy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Uniform => "uniform",
            Shape::Dense => "dense",
            Shape::Clustered => "clustered",
            Shape::DuplicateHeavy => "duplicates",
        }
    }

    pub fn parse(s: &str) -> Option<Shape> {
        Shape::ALL.into_iter().find(|shape| shape.name() == s)
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// n values for target t with the given shape. Values are all in [1, t], so
/// ingest discards nothing.
pub fn gen_values(rng: &mut ChaCha8Rng, shape: Shape, n: usize, t: u64) -> Vec<u64> {
    assert!(t >= 1);
    let mut values = Vec::with_capacity(n);
    match shape {
        Shape::Uniform => {
            for _ in 0..n {
                values.push(rng.gen_range(1..=t));
            }
        }
        Shape::Dense => {
            let u = (t / 64).max(2).min(t);
            for _ in 0..n {
                values.push(rng.gen_range(1..=u));
            }
        }
        Shape::Clustered => {
            let levels = 64 - t.leading_zeros() as u64; // floor(log2 t) + 1
            for _ in 0..n {
                let i = rng.gen_range(0..levels);
                let base = (t >> i).max(1);
                let jitter = rng.gen_range(0..=(base / 8));
                values.push((base - jitter).max(1));
            }
        }
        Shape::DuplicateHeavy => {
            let distinct = rng.gen_range(1..=4usize.min(n.max(1)));
            let pool: Vec<u64> = (0..distinct).map(|_| rng.gen_range(1..=t)).collect();
            for _ in 0..n {
                values.push(pool[rng.gen_range(0..pool.len())]);
            }
        }
    }
    values
}

pub fn gen_instance(rng: &mut ChaCha8Rng, shape: Shape, n: usize, t: u64) -> Instance {
    Instance::ingest(&gen_values(rng, shape, n, t), t).expect("generated values are valid")
}

/// n knapsack items with weights in [1, t] and profits in [1, max_profit].
pub fn gen_knapsack(rng: &mut ChaCha8Rng, n: usize, t: u64, max_profit: u64) -> Vec<KnapsackItem> {
    (0..n)
        .map(|_| KnapsackItem::new(rng.gen_range(1..=t), rng.gen_range(1..=max_profit)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_from_seed() {
        for shape in Shape::ALL {
            let a = gen_values(&mut rng_for(7), shape, 30, 1000);
            let b = gen_values(&mut rng_for(7), shape, 30, 1000);
            assert_eq!(a, b);
            assert!(a.iter().all(|&v| (1..=1000).contains(&v)));
        }
    }

    #[test]
    fn shape_names_round_trip() {
        for shape in Shape::ALL {
            assert_eq!(Shape::parse(shape.name()), Some(shape));
        }
        assert_eq!(Shape::parse("bogus"), None);
    }
}
