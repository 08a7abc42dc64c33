//! Exhaustive master-law sweep over every composable colored pair with
//! k, l, m up to 3 (identity point colors), no sampling.

use ncpart::*;

fn main() {
    let lambda = FiniteGroup::from_spec(&std::env::args().nth(1).unwrap_or("Z2".into())).unwrap();
    let gamma = PointGroup::from_spec("free:1").unwrap();
    let max = 3usize;
    let mut total = 0u64;
    for k in 0..=max {
        for l in 0..=max {
            for m in 0..=max {
                let ps = enumerate_colored_identity(k, l, &lambda, &gamma).unwrap();
                let qs = enumerate_colored_identity(l, m, &lambda, &gamma).unwrap();
                for p in &ps {
                    for q in &qs {
                        if let Err(e) = check_master_law(p, q) {
                            eprintln!("FAIL at ({k},{l},{m}): {e}");
                            eprintln!("p = {}", json::to_json_compact(p));
                            eprintln!("q = {}", json::to_json_compact(q));
                            std::process::exit(1);
                        }
                        total += 1;
                    }
                }
                eprint!("\r({k},{l},{m}) done, {total} pairs");
            }
        }
    }
    eprintln!();
    println!("master law holds for all {total} pairs");
}
