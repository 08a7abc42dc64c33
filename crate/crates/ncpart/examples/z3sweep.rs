//! Exhaustive master-law sweep over Z3 with sizes up to 3, caching the
//! operator matrices per colored partition. Distinguishing elements from
//! their inverses makes this the sharpest test of orientation conventions.

use ncpart::*;

fn main() {
    let lambda = FiniteGroup::from_spec("Z3").unwrap();
    let gamma = PointGroup::from_spec("free:1").unwrap();
    let max = 3usize;
    let mut universes: Vec<Vec<Vec<(ColoredPartition, MorphismMatrix)>>> = Vec::new();
    for k in 0..=max {
        let mut row = Vec::new();
        for l in 0..=max {
            let cell: Vec<(ColoredPartition, MorphismMatrix)> =
                enumerate_colored_identity(k, l, &lambda, &gamma)
                    .unwrap()
                    .into_iter()
                    .map(|cp| {
                        let m = to_matrix(&cp).unwrap();
                        (cp, m)
                    })
                    .collect();
            row.push(cell);
        }
        universes.push(row);
    }
    let mut total = 0u64;
    for k in 0..=max {
        for l in 0..=max {
            for m in 0..=max {
                for (p, mp) in &universes[k][l] {
                    for (q, mq) in &universes[l][m] {
                        let brute = mq.compose(mp).unwrap();
                        match compose(p, q).unwrap() {
                            CompositionResult::Zero => {
                                assert!(brute.is_zero(), "zero mismatch at ({k},{l},{m})");
                            }
                            CompositionResult::Nonzero { composed, exponent } => {
                                assert!(composed.check_boundary_condition());
                                assert!(composed.check_gamma_condition());
                                let scalar = Rational64::from_integer(3i64.pow(exponent));
                                let structural = to_matrix(&composed).unwrap().scale(scalar);
                                assert!(
                                    brute.equal(&structural).unwrap(),
                                    "master law fails at ({k},{l},{m}):\np = {}\nq = {}",
                                    json::to_json_compact(p),
                                    json::to_json_compact(q)
                                );
                            }
                        }
                        total += 1;
                    }
                }
                eprint!("\r({k},{l},{m}) cumulative pairs: {total}        ");
            }
        }
    }
    eprintln!();
    println!("master law holds for all {total} Z3 pairs with sizes up to {max}");
}
