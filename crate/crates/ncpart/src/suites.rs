//! Verification suites: closed-form operator fixtures, category axioms at
//! matrix level, and oracle sweeps for the composition and counting laws.
//! Every suite emits line-oriented, machine-parseable case reports.

use std::sync::Arc;

use num_rational::Rational64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::colored::{enumerate_colored_identity, ColoredPartition};
use crate::compose::{
    brute_force_compose, brute_force_middle_solutions, compose, count_middle_solutions,
    delta_of_composite, ComposeError, CompositionResult,
};
use crate::group::{FiniteGroup, GammaElem, LambdaElem, PointGroup};
use crate::matrix::{decode_basis, encode_basis, MorphismMatrix};
use crate::operator::{
    adjoint_partition, cap_k, cup_k, identity_partition, tensor_partitions, to_matrix,
};
use crate::partition::{Block, TwoRowPartition};

#[derive(Debug, Clone)]
pub struct CaseReport {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = format!("# suite={} seed={}\n", self.name, self.seed);
        for c in &self.cases {
            out.push_str(&format!(
                "SUITE case={} status={} detail={}\n",
                c.id,
                if c.pass { "pass" } else { "fail" },
                c.detail
            ));
        }
        out
    }

    fn push(&mut self, id: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.cases.push(CaseReport { id: id.into(), pass, detail: detail.into() });
    }
}

/// A uniformly random boundary-valid coloring: free labels everywhere
/// except the last boundary block, which is solved.
pub fn random_coloring(
    p: &TwoRowPartition,
    lambda: &FiniteGroup,
    rng: &mut impl Rng,
) -> Vec<LambdaElem> {
    let nb = p.num_blocks();
    if nb == 0 {
        return Vec::new();
    }
    let boundary = p.boundary();
    let solved = *boundary.last().unwrap();
    let mut colors: Vec<LambdaElem> = (0..nb)
        .map(|_| LambdaElem(rng.gen_range(0..lambda.order())))
        .collect();
    let prefix: Vec<LambdaElem> = boundary[..boundary.len() - 1].iter().map(|&i| colors[i]).collect();
    colors[solved] = lambda.inv(lambda.ordered_product(&prefix));
    colors
}

fn scalar_pow(lambda: &FiniteGroup, exponent: u32) -> Rational64 {
    Rational64::from_integer((lambda.order() as i64).pow(exponent))
}

/// Master-law check for one pair; returns an error description on failure.
pub fn check_master_law(p: &ColoredPartition, q: &ColoredPartition) -> Result<(), String> {
    let brute = brute_force_compose(p, q).map_err(|e| e.to_string())?;
    match compose(p, q).map_err(|e| e.to_string())? {
        CompositionResult::Zero => {
            if brute.is_zero() {
                Ok(())
            } else {
                Err("engine reports zero but the operator product is nonzero".into())
            }
        }
        CompositionResult::Nonzero { composed, exponent } => {
            if !composed.check_boundary_condition() {
                return Err("composite violates the boundary condition".into());
            }
            if !composed.check_gamma_condition() {
                return Err("composite violates the point-color condition".into());
            }
            let structural = to_matrix(&composed)
                .map_err(|e| e.to_string())?
                .scale(scalar_pow(p.lambda(), exponent));
            if brute.equal(&structural).map_err(|e| e.to_string())? {
                Ok(())
            } else {
                Err(format!("matrices differ (exponent {exponent})"))
            }
        }
    }
}

const PAIR_CAP: usize = 40_000;
const SAMPLE_PAIRS: usize = 500;

/// Composable pairs for one (k, l, m) cell: exhaustive while the universe
/// is small, seeded sampling beyond the cap.
fn pairs_for_cell(
    k: usize,
    l: usize,
    m: usize,
    lambda: &Arc<FiniteGroup>,
    gamma: &Arc<PointGroup>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(ColoredPartition, ColoredPartition)>, ComposeError> {
    let count_universe = |k: usize, l: usize| -> u64 {
        TwoRowPartition::enumerate(k, l)
            .map(|ps| {
                ps.iter()
                    .map(|p| (lambda.order() as u64).pow(p.num_blocks().saturating_sub(1) as u32))
                    .sum()
            })
            .unwrap_or(u64::MAX)
    };
    let total = count_universe(k, l).saturating_mul(count_universe(l, m));
    if total as usize <= PAIR_CAP {
        let ps = enumerate_colored_identity(k, l, lambda, gamma)?;
        let qs = enumerate_colored_identity(l, m, lambda, gamma)?;
        let mut out = Vec::with_capacity(ps.len() * qs.len());
        for p in &ps {
            for q in &qs {
                out.push((p.clone(), q.clone()));
            }
        }
        Ok(out)
    } else {
        let left = TwoRowPartition::enumerate(k, l)?;
        let right = TwoRowPartition::enumerate(l, m)?;
        let idg_up = vec![gamma.identity(); k];
        let idg_mid = vec![gamma.identity(); l];
        let idg_low = vec![gamma.identity(); m];
        let mut out = Vec::with_capacity(SAMPLE_PAIRS);
        for _ in 0..SAMPLE_PAIRS {
            let p = &left[rng.gen_range(0..left.len())];
            let q = &right[rng.gen_range(0..right.len())];
            let pc = random_coloring(p, lambda, rng);
            let qc = random_coloring(q, lambda, rng);
            out.push((
                ColoredPartition::new(
                    p.clone(),
                    pc,
                    idg_up.clone(),
                    idg_mid.clone(),
                    lambda.clone(),
                    gamma.clone(),
                )?,
                ColoredPartition::new(
                    q.clone(),
                    qc,
                    idg_mid.clone(),
                    idg_low.clone(),
                    lambda.clone(),
                    gamma.clone(),
                )?,
            ));
        }
        Ok(out)
    }
}

/// Master composition law sweep over all (k, l, m) up to the bound.
pub fn composition_suite(
    lambda: &Arc<FiniteGroup>,
    max_kl: usize,
    seed: u64,
) -> Result<SuiteReport, ComposeError> {
    let gamma = PointGroup::from_spec("free:1").expect("builtin spec");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport { name: "composition".into(), seed, cases: Vec::new() };
    for k in 0..=max_kl {
        for l in 0..=max_kl {
            for m in 0..=max_kl {
                let pairs = pairs_for_cell(k, l, m, lambda, &gamma, &mut rng)?;
                let mut failures = 0usize;
                let mut first_error = String::new();
                for (p, q) in &pairs {
                    if let Err(e) = check_master_law(p, q) {
                        failures += 1;
                        if first_error.is_empty() {
                            first_error = e;
                        }
                    }
                }
                let detail = if failures == 0 {
                    format!("pairs={}", pairs.len())
                } else {
                    format!("pairs={} failures={failures} first={first_error}", pairs.len())
                };
                report.push(format!("master-law-k{k}l{l}m{m}"), failures == 0, detail);
            }
        }
    }
    Ok(report)
}

/// Solution-count law sweep: the brute-force middle count is 0 or
/// |Λ|^(c-1), positivity agrees with δ of the composite.
pub fn counting_suite(
    lambda: &Arc<FiniteGroup>,
    max_l: usize,
    seed: u64,
) -> Result<SuiteReport, ComposeError> {
    let gamma = PointGroup::from_spec("free:1").expect("builtin spec");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport { name: "counting".into(), seed, cases: Vec::new() };
    let order = lambda.order();
    for l in 0..=max_l {
        for k in 0..=2usize {
            for m in 0..=2usize {
                if order.pow((k + m) as u32) > 256 {
                    continue;
                }
                let pairs = pairs_for_cell(k, l, m, lambda, &gamma, &mut rng)?;
                let mut failures = 0usize;
                let mut checked = 0u64;
                let mut first_error = String::new();
                for (p, q) in &pairs {
                    let zero = compose(p, q)?.is_zero();
                    for ridx in 0..order.pow(k as u32) {
                        let r: Vec<LambdaElem> =
                            decode_basis(ridx, k, order).into_iter().map(LambdaElem).collect();
                        for didx in 0..order.pow(m as u32) {
                            let d: Vec<LambdaElem> =
                                decode_basis(didx, m, order).into_iter().map(LambdaElem).collect();
                            checked += 1;
                            let brute = brute_force_middle_solutions(p, q, &r, &d)?.len() as u64;
                            let fast = count_middle_solutions(p, q, &r, &d)?;
                            if brute != fast {
                                failures += 1;
                                if first_error.is_empty() {
                                    first_error = format!("count {brute} != {fast}");
                                }
                                continue;
                            }
                            if zero {
                                if brute != 0 {
                                    failures += 1;
                                    if first_error.is_empty() {
                                        first_error = "zero composite with solutions".into();
                                    }
                                }
                            } else {
                                let delta = delta_of_composite(p, q, &r, &d)?;
                                if delta != (brute > 0) {
                                    failures += 1;
                                    if first_error.is_empty() {
                                        first_error = "positivity disagrees with composite δ".into();
                                    }
                                }
                            }
                        }
                    }
                }
                let detail = if failures == 0 {
                    format!("pairs={} evaluations={checked}", pairs.len())
                } else {
                    format!("failures={failures} first={first_error}")
                };
                report.push(format!("count-law-k{k}l{l}m{m}"), failures == 0, detail);
            }
        }
    }
    Ok(report)
}

fn sample_gammas(gamma: &Arc<PointGroup>) -> Vec<GammaElem> {
    vec![
        gamma.identity(),
        gamma.parse("a").unwrap(),
        gamma.parse("A").unwrap(),
        gamma.parse("aa").unwrap(),
    ]
}

/// Category axioms at matrix level: associativity of the structural
/// composition against the operator product, the interchange law, adjoint
/// contravariance, and the conjugate (zigzag) equations with scalar one.
pub fn axioms_suite(lambda: &Arc<FiniteGroup>, seed: u64) -> Result<SuiteReport, ComposeError> {
    let gamma = PointGroup::from_spec("free:1").expect("builtin spec");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport { name: "axioms".into(), seed, cases: Vec::new() };

    let max_size = 2usize;
    let mut universes: Vec<Vec<Vec<ColoredPartition>>> = Vec::new();
    for k in 0..=max_size {
        let mut row = Vec::new();
        for l in 0..=max_size {
            row.push(enumerate_colored_identity(k, l, lambda, &gamma)?);
        }
        universes.push(row);
    }
    let pick = |rng: &mut ChaCha8Rng, k: usize, l: usize, u: &Vec<Vec<Vec<ColoredPartition>>>| {
        let cell = &u[k][l];
        cell[rng.gen_range(0..cell.len())].clone()
    };

    // associativity: the structural double composite agrees with the
    // triple operator product through either association order
    let mut assoc_failures = 0usize;
    let trials = 60;
    for _ in 0..trials {
        let (k, l, m, n) = (
            rng.gen_range(0..=max_size),
            rng.gen_range(0..=max_size),
            rng.gen_range(0..=max_size),
            rng.gen_range(0..=max_size),
        );
        let p = pick(&mut rng, k, l, &universes);
        let q = pick(&mut rng, l, m, &universes);
        let r = pick(&mut rng, m, n, &universes);
        let brute = to_matrix(&r)?
            .compose(&to_matrix(&q)?)
            .map_err(ComposeError::from)?
            .compose(&to_matrix(&p)?)
            .map_err(ComposeError::from)?;
        let left = two_step(&p, &q, &r, true)?;
        let right = two_step(&p, &q, &r, false)?;
        let ok = match (&left, &right) {
            (None, None) => brute.is_zero(),
            (Some((part_l, e_l)), Some((part_r, e_r))) => {
                part_l == part_r
                    && e_l == e_r
                    && brute
                        .equal(&to_matrix(part_l)?.scale(scalar_pow(lambda, *e_l)))
                        .map_err(ComposeError::from)?
            }
            _ => false,
        };
        if !ok {
            assoc_failures += 1;
        }
    }
    report.push(
        "associativity",
        assoc_failures == 0,
        format!("trials={trials} failures={assoc_failures}"),
    );

    // interchange: (A ⊗ B) ∘ (C ⊗ D) = (A ∘ C) ⊗ (B ∘ D)
    let mut inter_failures = 0usize;
    for _ in 0..trials {
        let (j, k, l) = (
            rng.gen_range(0..=max_size),
            rng.gen_range(0..=max_size),
            rng.gen_range(0..=max_size),
        );
        let (i, m, n) = (
            rng.gen_range(0..=max_size),
            rng.gen_range(0..=max_size),
            rng.gen_range(0..=max_size),
        );
        let c = pick(&mut rng, j, k, &universes);
        let a = pick(&mut rng, k, l, &universes);
        let d = pick(&mut rng, i, m, &universes);
        let b = pick(&mut rng, m, n, &universes);
        let lhs_p = tensor_partitions(&c, &d)?;
        let lhs_q = tensor_partitions(&a, &b)?;
        let lhs = brute_force_compose(&lhs_p, &lhs_q)?;
        let rhs = brute_force_compose(&c, &a)?.tensor(&brute_force_compose(&d, &b)?);
        if !lhs.equal(&rhs).map_err(ComposeError::from)? {
            inter_failures += 1;
        }
    }
    report.push(
        "interchange",
        inter_failures == 0,
        format!("trials={trials} failures={inter_failures}"),
    );

    // adjoint contravariance: (A ∘ B)* = B* ∘ A*, structurally
    let mut adj_failures = 0usize;
    for _ in 0..trials {
        let (k, l, m) = (
            rng.gen_range(0..=max_size),
            rng.gen_range(0..=max_size),
            rng.gen_range(0..=max_size),
        );
        let b = pick(&mut rng, k, l, &universes);
        let a = pick(&mut rng, l, m, &universes);
        let forward = compose(&b, &a)?;
        let backward = compose(&adjoint_partition(&a), &adjoint_partition(&b))?;
        let ok = match (forward, backward) {
            (CompositionResult::Zero, CompositionResult::Zero) => true,
            (
                CompositionResult::Nonzero { composed: f, exponent: ef },
                CompositionResult::Nonzero { composed: g, exponent: eg },
            ) => ef == eg && adjoint_partition(&f) == g,
            _ => false,
        };
        if !ok {
            adj_failures += 1;
        }
    }
    report.push(
        "adjoint-contravariance",
        adj_failures == 0,
        format!("trials={trials} failures={adj_failures}"),
    );

    // conjugate equations with scalar exactly one
    let gs = sample_gammas(&gamma);
    let mut zig_failures = 0usize;
    let mut zig_trials = 0usize;
    for k in 1..=2usize {
        let tuples: Vec<Vec<GammaElem>> = if k == 1 {
            gs.iter().map(|g| vec![g.clone()]).collect()
        } else {
            let mut v = Vec::new();
            for g1 in &gs {
                for g2 in &gs {
                    v.push(vec![g1.clone(), g2.clone()]);
                }
            }
            v
        };
        for gvec in tuples {
            zig_trials += 2;
            if !zigzag_holds(&gvec, lambda, &gamma)? {
                zig_failures += 1;
            }
        }
    }
    report.push(
        "zigzag",
        zig_failures == 0,
        format!("equations={zig_trials} failures={zig_failures}"),
    );

    Ok(report)
}

fn two_step(
    p: &ColoredPartition,
    q: &ColoredPartition,
    r: &ColoredPartition,
    left_first: bool,
) -> Result<Option<(ColoredPartition, u32)>, ComposeError> {
    if left_first {
        match compose(p, q)? {
            CompositionResult::Zero => Ok(None),
            CompositionResult::Nonzero { composed, exponent } => match compose(&composed, r)? {
                CompositionResult::Zero => Ok(None),
                CompositionResult::Nonzero { composed: total, exponent: e2 } => {
                    Ok(Some((total, exponent + e2)))
                }
            },
        }
    } else {
        match compose(q, r)? {
            CompositionResult::Zero => Ok(None),
            CompositionResult::Nonzero { composed, exponent } => match compose(p, &composed)? {
                CompositionResult::Zero => Ok(None),
                CompositionResult::Nonzero { composed: total, exponent: e2 } => {
                    Ok(Some((total, exponent + e2)))
                }
            },
        }
    }
}

fn rev_inv(gs: &[GammaElem], gamma: &PointGroup) -> Vec<GammaElem> {
    gs.iter().rev().map(|g| gamma.inv(g).unwrap()).collect()
}

/// Both conjugate equations for the object g⃗, each required to produce the
/// identity with structural exponent zero and matrix scalar exactly one.
pub fn zigzag_holds(
    gs: &[GammaElem],
    lambda: &Arc<FiniteGroup>,
    gamma: &Arc<PointGroup>,
) -> Result<bool, ComposeError> {
    let hs = rev_inv(gs, gamma);
    let idg = identity_partition(gs, lambda, gamma);
    let n = lambda.order().pow(gs.len() as u32);
    let id_matrix = MorphismMatrix::identity(n);
    // (id ⊗ cap(h⃗)) ∘ (cup(g⃗) ⊗ id)
    let p1 = tensor_partitions(&cup_k(gs, lambda, gamma), &idg)?;
    let q1 = tensor_partitions(&idg, &cap_k(&hs, lambda, gamma))?;
    // (cap(g⃗) ⊗ id) ∘ (id ⊗ cup(h⃗))
    let p2 = tensor_partitions(&idg, &cup_k(&hs, lambda, gamma))?;
    let q2 = tensor_partitions(&cap_k(gs, lambda, gamma), &idg)?;
    for (p, q) in [(p1, q1), (p2, q2)] {
        match compose(&p, &q)? {
            CompositionResult::Nonzero { composed, exponent } => {
                if exponent != 0 || composed != idg {
                    return Ok(false);
                }
            }
            CompositionResult::Zero => return Ok(false),
        }
        let m = brute_force_compose(&p, &q)?;
        if !m.equal(&id_matrix).map_err(ComposeError::from)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Expected matrix built directly from a closed-form entry rule.
fn matrix_from_rule(
    rows: usize,
    cols: usize,
    rule: impl Fn(usize, usize) -> bool,
) -> MorphismMatrix {
    let mut m = MorphismMatrix::zero(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rule(r, c) {
                m.set(r, c, 1);
            }
        }
    }
    m
}

/// The named basic partitions with their closed-form matrices, checked for
/// membership and bit-exact equality for every label t.
pub fn reconstruction_fixtures(lambda: &Arc<FiniteGroup>) -> Result<SuiteReport, ComposeError> {
    let mut report = SuiteReport { name: "fixtures".into(), seed: 0, cases: Vec::new() };
    let free1 = PointGroup::from_spec("free:1").expect("builtin spec");
    let free2 = PointGroup::from_spec("free:2").expect("builtin spec");
    let order = lambda.order();
    let e = lambda.identity();

    // unit column: one lower singleton, all colors trivial
    {
        let part = TwoRowPartition::new(0, 1, vec![Block::new(vec![], vec![1])])?;
        let cp = ColoredPartition::with_identity_gamma(part, vec![e], lambda.clone(), free1.clone())?;
        let expected = matrix_from_rule(order, 1, |r, _| r == 0);
        let got = to_matrix(&cp)?;
        let pass = cp.is_valid() && got.equal(&expected).map_err(ComposeError::from)?;
        report.push("p1", pass, "unit column e_1");
    }

    // two-block intertwiners p(t): {u1,l1} labelled t, {u2} labelled t^{-1}
    for t in lambda.elements() {
        let part = TwoRowPartition::new(
            2,
            1,
            vec![Block::new(vec![1], vec![1]), Block::new(vec![2], vec![])],
        )?;
        let colors = {
            let blocks = part.blocks();
            let mut cs = vec![e; 2];
            for (i, b) in blocks.iter().enumerate() {
                cs[i] = if b.is_through() { t } else { lambda.inv(t) };
            }
            cs
        };
        let cp = ColoredPartition::with_identity_gamma(part, colors, lambda.clone(), free1.clone())?;
        // the upper-singleton rule forces r2 = t, so e_r ⊗ e_t ↦ e_{rt}
        let expected = matrix_from_rule(order, order * order, |row, col| {
            let rc = decode_basis(col, 2, order);
            rc[1] == t.0 && row == lambda.mul(LambdaElem(rc[0]), t).0
        });
        let got = to_matrix(&cp)?;
        let pass = cp.is_valid() && got.equal(&expected).map_err(ComposeError::from)?;
        report.push(format!("p(t={})", lambda.name(t)), pass, "e_r⊗e_t ↦ e_rt");
    }

    // multiplication intertwiner P: one block on {u1,u2,l1}
    {
        let part = TwoRowPartition::new(2, 1, vec![Block::new(vec![1, 2], vec![1])])?;
        let cp = ColoredPartition::with_identity_gamma(part, vec![e], lambda.clone(), free1.clone())?;
        let expected = matrix_from_rule(order, order * order, |row, col| {
            let rc = decode_basis(col, 2, order);
            row == lambda.mul(LambdaElem(rc[0]), LambdaElem(rc[1])).0
        });
        let got = to_matrix(&cp)?;
        let pass = cp.is_valid() && got.equal(&expected).map_err(ComposeError::from)?;
        report.push("P", pass, "e_r⊗e_s ↦ e_rs");
    }

    // q(t): {u1,u2,l1} labelled t, {l2} labelled t^{-1}, point colors (1,g,g,1)
    let g = free1.parse("a").unwrap();
    for t in lambda.elements() {
        let part = TwoRowPartition::new(
            2,
            2,
            vec![Block::new(vec![1, 2], vec![1]), Block::new(vec![], vec![2])],
        )?;
        let colors = {
            let mut cs = vec![e; 2];
            for (i, b) in part.blocks().iter().enumerate() {
                cs[i] = if b.is_through() { t } else { lambda.inv(t) };
            }
            cs
        };
        let cp = ColoredPartition::new(
            part,
            colors,
            vec![free1.identity(), g.clone()],
            vec![g.clone(), free1.identity()],
            lambda.clone(),
            free1.clone(),
        )?;
        let expected = matrix_from_rule(order * order, order * order, |row, col| {
            let rb = decode_basis(col, 2, order);
            let rbt = lambda.mul(lambda.mul(LambdaElem(rb[0]), LambdaElem(rb[1])), t);
            row == encode_basis(&[rbt.0, lambda.inv(t).0], order)
        });
        let got = to_matrix(&cp)?;
        let pass = cp.is_valid() && got.equal(&expected).map_err(ComposeError::from)?;
        report.push(
            format!("q(t={})", lambda.name(t)),
            pass,
            "e_r⊗e_b ↦ e_rbt⊗e_t^-1",
        );
    }

    // p2: one block on all four points, point colors (1,g,g,1)
    {
        let part = TwoRowPartition::new(2, 2, vec![Block::new(vec![1, 2], vec![1, 2])])?;
        let cp = ColoredPartition::new(
            part,
            vec![e],
            vec![free1.identity(), g.clone()],
            vec![g.clone(), free1.identity()],
            lambda.clone(),
            free1.clone(),
        )?;
        let expected = matrix_from_rule(order * order, order * order, |row, col| {
            let jd = decode_basis(col, 2, order);
            let ik = decode_basis(row, 2, order);
            lambda.mul(LambdaElem(ik[0]), LambdaElem(ik[1]))
                == lambda.mul(LambdaElem(jd[0]), LambdaElem(jd[1]))
        });
        let got = to_matrix(&cp)?;
        let pass = cp.is_valid() && got.equal(&expected).map_err(ComposeError::from)?;
        report.push("p2", pass, "e_j⊗e_d ↦ Σ_{ik=jd} e_i⊗e_k");
    }

    // p3: one block with point colors (g, h, gh) in a rank-2 free group
    {
        let gg = free2.parse("a").unwrap();
        let hh = free2.parse("b").unwrap();
        let gh = free2.parse("ab").unwrap();
        let part = TwoRowPartition::new(2, 1, vec![Block::new(vec![1, 2], vec![1])])?;
        let cp = ColoredPartition::new(
            part,
            vec![e],
            vec![gg, hh],
            vec![gh],
            lambda.clone(),
            free2.clone(),
        )?;
        let expected = matrix_from_rule(order, order * order, |row, col| {
            let rc = decode_basis(col, 2, order);
            row == lambda.mul(LambdaElem(rc[0]), LambdaElem(rc[1])).0
        });
        let got = to_matrix(&cp)?;
        let pass = cp.is_valid() && got.equal(&expected).map_err(ComposeError::from)?;
        report.push("p3", pass, "e_r⊗e_s ↦ e_rs with colors (g,h,gh)");
    }

    // ξ: the cup with point colors (g, g^{-1})
    {
        let cp = crate::operator::cup(&g, lambda, &free1);
        let expected = matrix_from_rule(order * order, 1, |row, _| {
            let rs = decode_basis(row, 2, order);
            LambdaElem(rs[1]) == lambda.inv(LambdaElem(rs[0]))
        });
        let got = to_matrix(&cp)?;
        let pass = cp.is_valid() && got.equal(&expected).map_err(ComposeError::from)?;
        report.push("xi", pass, "T(1) = Σ_r e_r⊗e_r^-1");
    }

    Ok(report)
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Compose(#[from] ComposeError),
}

/// Runs one named suite (or all of them).
pub fn run_suites(
    suite: &str,
    lambda: &Arc<FiniteGroup>,
    max_kl: usize,
    max_l: usize,
    seed: u64,
) -> Result<Vec<SuiteReport>, SuiteError> {
    if !["fixtures", "axioms", "composition", "counting", "all"].contains(&suite) {
        return Err(SuiteError::UnknownSuite(suite.to_string()));
    }
    let mut out = Vec::new();
    if suite == "fixtures" || suite == "all" {
        out.push(reconstruction_fixtures(lambda)?);
    }
    if suite == "axioms" || suite == "all" {
        out.push(axioms_suite(lambda, seed)?);
    }
    if suite == "composition" || suite == "all" {
        out.push(composition_suite(lambda, max_kl, seed)?);
    }
    if suite == "counting" || suite == "all" {
        out.push(counting_suite(lambda, max_l, seed)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_pass_for_z2() {
        let lambda = FiniteGroup::from_spec("Z2").unwrap();
        let report = reconstruction_fixtures(&lambda).unwrap();
        assert!(report.all_pass(), "{}", report.render());
    }

    #[test]
    fn fixtures_pass_for_z3() {
        let lambda = FiniteGroup::from_spec("Z3").unwrap();
        let report = reconstruction_fixtures(&lambda).unwrap();
        assert!(report.all_pass(), "{}", report.render());
    }

    #[test]
    fn axioms_pass_for_z2() {
        let lambda = FiniteGroup::from_spec("Z2").unwrap();
        let report = axioms_suite(&lambda, 7).unwrap();
        assert!(report.all_pass(), "{}", report.render());
    }

    #[test]
    fn axioms_pass_for_z3() {
        let lambda = FiniteGroup::from_spec("Z3").unwrap();
        let report = axioms_suite(&lambda, 11).unwrap();
        assert!(report.all_pass(), "{}", report.render());
    }

    #[test]
    fn unknown_suite_is_rejected() {
        let lambda = FiniteGroup::from_spec("Z2").unwrap();
        assert!(matches!(
            run_suites("bogus", &lambda, 1, 1, 0),
            Err(SuiteError::UnknownSuite(_))
        ));
    }

    #[test]
    fn composition_suite_small() {
        let lambda = FiniteGroup::from_spec("Z2").unwrap();
        let report = composition_suite(&lambda, 1, 1).unwrap();
        assert!(report.all_pass(), "{}", report.render());
    }

    #[test]
    fn counting_suite_small() {
        let lambda = FiniteGroup::from_spec("Z2").unwrap();
        let report = counting_suite(&lambda, 2, 1).unwrap();
        assert!(report.all_pass(), "{}", report.render());
    }

    #[test]
    fn report_rendering_is_line_oriented() {
        let mut r = SuiteReport { name: "demo".into(), seed: 3, cases: Vec::new() };
        r.push("x", true, "ok");
        r.push("y", false, "boom");
        let text = r.render();
        assert!(text.contains("SUITE case=x status=pass detail=ok"));
        assert!(text.contains("SUITE case=y status=fail detail=boom"));
        assert!(!r.all_pass());
    }
}
