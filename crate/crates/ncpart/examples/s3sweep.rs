//! Large seeded random sweep of the master law over a nonabelian group.

use ncpart::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let lambda = FiniteGroup::from_spec("S3").unwrap();
    let gamma = PointGroup::from_spec("free:1").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let max = 3usize;
    let mut parts = Vec::new();
    for k in 0..=max {
        let mut row = Vec::new();
        for l in 0..=max {
            row.push(TwoRowPartition::enumerate(k, l).unwrap());
        }
        parts.push(row);
    }
    let n = 20000;
    for i in 0..n {
        let (k, l, m) = (
            rng.gen_range(0..=max),
            rng.gen_range(0..=max),
            rng.gen_range(0..=max),
        );
        let p = parts[k][l][rng.gen_range(0..parts[k][l].len())].clone();
        let q = parts[l][m][rng.gen_range(0..parts[l][m].len())].clone();
        let pc = random_coloring(&p, &lambda, &mut rng);
        let qc = random_coloring(&q, &lambda, &mut rng);
        let cp = ColoredPartition::with_identity_gamma(p, pc, lambda.clone(), gamma.clone()).unwrap();
        let cq = ColoredPartition::with_identity_gamma(q, qc, lambda.clone(), gamma.clone()).unwrap();
        if let Err(e) = check_master_law(&cp, &cq) {
            eprintln!("FAIL at sample {i} ({k},{l},{m}): {e}");
            eprintln!("p = {}", json::to_json_compact(&cp));
            eprintln!("q = {}", json::to_json_compact(&cq));
            std::process::exit(1);
        }
    }
    println!("master law holds for {n} random S3 pairs with sizes up to {max}");
}
