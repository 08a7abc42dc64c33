//! Randomized invariants: group laws under arbitrary parenthesization,
//! free-word arithmetic, interval-versus-restricted products, and
//! serialization round trips.

use proptest::prelude::*;

use ncpart::{
    enumerate_colorings, json, ColoredPartition, FiniteGroup, LambdaElem, PointGroup,
    TwoRowPartition,
};

fn finite_group() -> impl Strategy<Value = std::sync::Arc<FiniteGroup>> {
    prop::sample::select(vec!["Z2", "Z3", "Z5", "S3", "S4"])
        .prop_map(|spec| FiniteGroup::from_spec(spec).unwrap())
}

proptest! {
    #[test]
    fn ordered_product_ignores_parenthesization(
        g in finite_group(),
        raw in prop::collection::vec(0usize..24, 0..6),
        split in 0usize..6,
    ) {
        let xs: Vec<LambdaElem> = raw.iter().map(|&i| LambdaElem(i % g.order())).collect();
        let cut = split.min(xs.len());
        let left = g.ordered_product(&xs[..cut]);
        let right = g.ordered_product(&xs[cut..]);
        prop_assert_eq!(g.mul(left, right), g.ordered_product(&xs));
    }

    #[test]
    fn product_inverse_is_reversed_inverses(
        g in finite_group(),
        raw in prop::collection::vec(0usize..24, 0..6),
    ) {
        let xs: Vec<LambdaElem> = raw.iter().map(|&i| LambdaElem(i % g.order())).collect();
        let rev_inv: Vec<LambdaElem> = xs.iter().rev().map(|&x| g.inv(x)).collect();
        prop_assert_eq!(g.inv(g.ordered_product(&xs)), g.ordered_product(&rev_inv));
    }

    #[test]
    fn free_words_reduce_consistently(
        letters in prop::collection::vec(prop::sample::select(vec!["a", "b", "A", "B"]), 0..10),
        more in prop::collection::vec(prop::sample::select(vec!["a", "b", "A", "B"]), 0..10),
    ) {
        let f = PointGroup::from_spec("free:2").unwrap();
        let u = f.parse(&letters.concat()).unwrap();
        let v = f.parse(&more.concat()).unwrap();
        // associativity through reduction and the two-sided inverse law
        let uv = f.mul(&u, &v).unwrap();
        let w = f.parse(&(letters.concat() + &more.concat())).unwrap();
        prop_assert_eq!(&uv, &w);
        let ui = f.inv(&u).unwrap();
        prop_assert!(f.is_identity(&f.mul(&u, &ui).unwrap()));
        prop_assert!(f.is_identity(&f.mul(&ui, &u).unwrap()));
    }

    #[test]
    fn interval_equals_restricted_on_consecutive_sets(
        g in finite_group(),
        raw in prop::collection::vec(0usize..24, 1..7),
        lo in 0usize..6,
        len in 1usize..6,
    ) {
        let xs: Vec<LambdaElem> = raw.iter().map(|&i| LambdaElem(i % g.order())).collect();
        let lo = (lo % xs.len()) + 1;
        let hi = (lo + len - 1).min(xs.len());
        let indices: Vec<usize> = (lo..=hi).collect();
        prop_assert_eq!(
            g.interval_product(&xs, &indices).unwrap(),
            g.restricted_product(&xs, &indices).unwrap()
        );
    }

    #[test]
    fn json_roundtrip_on_random_colored_partitions(
        spec in prop::sample::select(vec!["Z2", "Z3", "S3"]),
        k in 0usize..3,
        l in 0usize..3,
        pick in any::<prop::sample::Index>(),
        colorpick in any::<prop::sample::Index>(),
    ) {
        let lambda = FiniteGroup::from_spec(spec).unwrap();
        let gamma = PointGroup::from_spec("free:1").unwrap();
        let parts = TwoRowPartition::enumerate(k, l).unwrap();
        let p = parts[pick.index(parts.len())].clone();
        let colorings = enumerate_colorings(&p, &lambda);
        let colors = colorings[colorpick.index(colorings.len())].clone();
        let cp = ColoredPartition::with_identity_gamma(p, colors, lambda, gamma).unwrap();
        let back = json::from_json_str(&json::to_json(&cp)).unwrap();
        prop_assert_eq!(&back, &cp);
        let compact = json::from_json_str(&json::to_json_compact(&cp)).unwrap();
        prop_assert_eq!(&compact, &cp);
    }
}
