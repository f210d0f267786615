#![allow(dead_code)]

use combfilter::Filter;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LABELS: [&str; 3] = ["a", "b", "c"];

/// Small random filter: up to `max_states` states, up to `max_labels` labels,
/// up to three colors, each (state, label) edge present with a random density.
pub fn random_filter(rng: &mut ChaCha8Rng, max_states: usize, max_labels: usize) -> Filter {
    let n = rng.gen_range(1..=max_states);
    let labels = rng.gen_range(1..=max_labels);
    let colors = rng.gen_range(1..=3u32);
    let density: f64 = rng.gen_range(0.4..=1.0);
    let mut b = Filter::builder();
    for q in 0..n {
        b = b.state(format!("s{q}"), rng.gen_range(0..colors));
    }
    for q in 0..n {
        for y in &LABELS[..labels] {
            if rng.gen_bool(density) {
                b = b.edge(format!("s{q}"), *y, format!("s{}", rng.gen_range(0..n)));
            }
        }
    }
    b.build().expect("generated filter is valid")
}

pub fn corpus(seed: u64, count: usize, max_states: usize, max_labels: usize) -> Vec<Filter> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_filter(&mut rng, max_states, max_labels))
        .collect()
}

/// The two-state fixture: A (0, initial) and B (1); A -x-> B, B -x-> A, A -y-> A.
pub fn f_a() -> Filter {
    Filter::builder()
        .state("A", 0)
        .state("B", 1)
        .edge("A", "x", "B")
        .edge("B", "x", "A")
        .edge("A", "y", "A")
        .build()
        .unwrap()
}

/// Single state S (color 0) with x and y self-loops.
pub fn f_b() -> Filter {
    Filter::builder()
        .state("S", 0)
        .edge("S", "x", "S")
        .edge("S", "y", "S")
        .build()
        .unwrap()
}
