//! Writes the bundled contact network `data/contact_graph.tsv` to stdout.
//!
//! People sit in groups (classes, offices) where pairs meet often; everybody
//! also has a handful of occasional contacts elsewhere. Edge weights count
//! meetings, so within-group weights are large and spread out (log-normal)
//! and occasional contacts are small.
//!
//!     cargo run --release -p netbone --example contact_graph > crates/core/data/contact_graph.tsv

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, LogNormal};

const NODES: usize = 1000;
const GROUP: usize = 25;
const WITHIN_PROBABILITY: f64 = 0.3;
const OCCASIONAL_PER_NODE: usize = 4;
const SEED: u64 = 20240611;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let frequent = LogNormal::new(3.0, 1.2).unwrap();
    let occasional = Geometric::new(0.6).unwrap();
    let mut edges: BTreeMap<(usize, usize), u64> = BTreeMap::new();

    for start in (0..NODES).step_by(GROUP) {
        for a in start..start + GROUP {
            for b in a + 1..start + GROUP {
                if rng.random::<f64>() < WITHIN_PROBABILITY {
                    let w: f64 = frequent.sample(&mut rng);
                    let w = w.ceil() as u64;
                    *edges.entry((a, b)).or_default() += w.max(1);
                }
            }
        }
    }
    for a in 0..NODES {
        for _ in 0..OCCASIONAL_PER_NODE {
            let b = rng.random_range(0..NODES);
            if a != b {
                let key = (a.min(b), a.max(b));
                *edges.entry(key).or_default() += 1 + occasional.sample(&mut rng);
            }
        }
    }

    println!("# synthetic contact network: {NODES} people, groups of {GROUP}, seed {SEED}");
    println!("# columns: person person meetings (undirected)");
    for ((a, b), w) in edges {
        println!("{a}\t{b}\t{w}");
    }
}
