use std::time::Instant;

use majperm::{StatPair, Workers};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(11);
    let t = Instant::now();
    let d = Workers::sequential().joint_distribution(n, StatPair::InvImaj).unwrap();
    println!("n={n} total={} in {:?}", d.total(), t.elapsed());
}
