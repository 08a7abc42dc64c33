//! Stress sweep of entrance and frame constancy at middle sizes 5 and 6:
//! every entrance constant and frame constant must match the interval
//! product of every brute-force admissible middle vector.

use ncpart::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let lambda = FiniteGroup::from_spec("Z3").unwrap();
    let gamma = PointGroup::from_spec("free:1").unwrap();
    let order = lambda.order();
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    let mut entrances = 0u64;
    let mut frames = 0u64;
    let mut unsolvable = 0u64;
    for (k, l, m) in [(1usize, 5usize, 1usize), (0, 6, 1), (1, 6, 0), (0, 6, 0), (2, 5, 0)] {
        let ps = TwoRowPartition::enumerate(k, l).unwrap();
        let qs = TwoRowPartition::enumerate(l, m).unwrap();
        for _ in 0..4000 {
            let p0 = ps[rng.gen_range(0..ps.len())].clone();
            let q0 = qs[rng.gen_range(0..qs.len())].clone();
            let pc = random_coloring(&p0, &lambda, &mut rng);
            let qc = random_coloring(&q0, &lambda, &mut rng);
            let p = ColoredPartition::with_identity_gamma(p0, pc, lambda.clone(), gamma.clone()).unwrap();
            let q = ColoredPartition::with_identity_gamma(q0, qc, lambda.clone(), gamma.clone()).unwrap();
            let mut solutions = Vec::new();
            for ridx in 0..order.pow(k as u32) {
                let r: Vec<LambdaElem> = decode_basis(ridx, k, order).into_iter().map(LambdaElem).collect();
                for didx in 0..order.pow(m as u32) {
                    let d: Vec<LambdaElem> = decode_basis(didx, m, order).into_iter().map(LambdaElem).collect();
                    solutions.extend(brute_force_middle_solutions(&p, &q, &r, &d).unwrap());
                }
            }
            let comps = connected_components(p.partition(), q.partition()).unwrap();
            for comp in &comps {
                if comp.middle.is_empty() {
                    continue;
                }
                for e in component_entrances(comp, p.partition(), q.partition()).unwrap() {
                    match entrance_constant(&e, comp, &p, &q) {
                        Ok(h) => {
                            entrances += 1;
                            for s in &solutions {
                                let prod = lambda.ordered_product(&s[e.lo - 1..e.hi]);
                                assert_eq!(prod, h, "entrance product differs");
                            }
                        }
                        Err(ComposeError::UnsolvableSubsystem) => {
                            unsolvable += 1;
                            assert!(solutions.is_empty(), "unsolvable subsystem with admissible solutions");
                        }
                        Err(err) => panic!("unexpected {err}"),
                    }
                }
                if matches!(comp.kind, ComponentKind::UpperHalf | ComponentKind::LowerHalf) {
                    let Some(mid) = admissible_middle(&p, &q).unwrap() else {
                        assert!(solutions.is_empty());
                        continue;
                    };
                    let c = component_constants(&p, &q, comp, &mid).unwrap();
                    let f_c = match c {
                        ComponentConstants::UpperHalf { f_c, .. } => f_c,
                        ComponentConstants::LowerHalf { f_c, .. } => f_c,
                        _ => unreachable!(),
                    };
                    // frame bounds from the component's through blocks
                    let (blocks, idxs, lowerside) = match comp.kind {
                        ComponentKind::UpperHalf => (p.partition().blocks(), &comp.p_blocks, true),
                        _ => (q.partition().blocks(), &comp.q_blocks, false),
                    };
                    let (mut lo, mut hi) = (usize::MAX, 0);
                    for &i in idxs {
                        let b = &blocks[i];
                        if b.is_through() {
                            let (a, z) = if lowerside {
                                (b.min_lower().unwrap(), b.max_lower().unwrap())
                            } else {
                                (b.min_upper().unwrap(), b.max_upper().unwrap())
                            };
                            lo = lo.min(a);
                            hi = hi.max(z);
                        }
                    }
                    frames += 1;
                    for s in &solutions {
                        let prod = lambda.ordered_product(&s[lo - 1..hi]);
                        assert_eq!(prod, f_c, "frame product differs");
                    }
                }
            }
        }
    }
    println!("constancy holds: entrances={entrances} unsolvable={unsolvable} frames={frames}");
}
