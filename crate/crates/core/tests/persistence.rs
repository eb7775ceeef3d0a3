use num::{BigInt, Zero};
use ppersist::filtration::{vr_filtration, WeightedPointCloud};
use ppersist::linalg::{FieldSpec, Rational};
use ppersist::persistence::{
    barcode_1d, compare_barcodes, filtration_barcode, find_isomorphism, hom_basis, module_from_filtration,
    rank_invariant, Bar, Barcode, Death, PersistenceModule,
};
use ppersist::poset::FinitePoset;
use proptest::prelude::*;

const Q: FieldSpec = FieldSpec::Rationals;

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn cloud() -> impl Strategy<Value = WeightedPointCloud> {
    (1usize..=3, 2usize..=6).prop_flat_map(|(d, n)| {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, d), n).prop_map(|pts| {
            let points: Vec<Vec<Rational>> = pts.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect();
            let n = points.len();
            WeightedPointCloud::new(points, vec![int(1); n]).unwrap()
        })
    })
}

fn chain(n: usize) -> FinitePoset {
    FinitePoset::labeled_chain((0..n as i64).map(int).collect()).unwrap()
}

fn intervals(n: usize) -> impl Strategy<Value = Vec<(usize, Option<usize>)>> {
    proptest::collection::vec(
        (0..n).prop_flat_map(move |b| (Just(b), prop_oneof![Just(None), (b + 1..=n).prop_map(Some)])),
        0..5,
    )
    .prop_map(move |v| v.into_iter().map(|(b, d)| (b, d.filter(|&d| d < n))).collect())
}

/// Bars of an interval list, read directly.
fn expected_barcode(list: &[(usize, Option<usize>)]) -> Barcode {
    Barcode::new(
        0,
        list.iter()
            .map(|&(b, d)| Bar::new(int(b as i64), d.map_or(Death::Infinite, |d| Death::Finite(int(d as i64)))))
            .collect(),
    )
}

proptest! {
    #[test]
    fn interval_modules_decompose_back(list in intervals(5)) {
        let m = PersistenceModule::from_intervals(chain(5), &list, Q).unwrap();
        prop_assert_eq!(barcode_1d(&m, 0, true).unwrap(), expected_barcode(&list));
        prop_assert!(m.check_path_independence().is_ok());
    }

    #[test]
    fn barcodes_agree_with_ranks(c in cloud(), k in 0usize..=1) {
        let fp = vr_filtration(&c, k + 1, None).unwrap();
        let m = module_from_filtration(&fp, k, Q).unwrap();
        let labels = fp.chain_labels().unwrap();
        let bars = barcode_1d(&m, k, true).unwrap();
        for ((a, b), r) in rank_invariant(&m).ranks {
            prop_assert_eq!(bars.count_containing(&labels[a], &labels[b]), r);
        }
        prop_assert_eq!(filtration_barcode(&fp, k, Q, true).unwrap(), bars.clone());
        prop_assert_eq!(filtration_barcode(&fp, k, FieldSpec::F2, true).unwrap(), bars);
    }

    #[test]
    fn bounded_and_unbounded_barcodes_differ_only_at_the_top(c in cloud()) {
        let fp = vr_filtration(&c, 1, None).unwrap();
        let top = fp.chain_labels().unwrap().last().unwrap().clone();
        let open = filtration_barcode(&fp, 0, Q, true).unwrap();
        let closed = filtration_barcode(&fp, 0, Q, false).unwrap();
        let capped: Vec<Bar> = open
            .bars()
            .iter()
            .filter(|b| !(b.death == Death::Infinite && b.birth == top))
            .map(|b| match b.death {
                Death::Infinite => Bar::finite(b.birth.clone(), top.clone()),
                _ => b.clone(),
            })
            .collect();
        prop_assert_eq!(closed, Barcode::new(0, capped));
    }

    #[test]
    fn bottleneck_is_a_metric(a in intervals(5), b in intervals(5), c in intervals(5)) {
        let (x, y, z) = (expected_barcode(&a), expected_barcode(&b), expected_barcode(&c));
        let d = |p: &Barcode, q: &Barcode| compare_barcodes(p, q).bottleneck;
        prop_assert_eq!(d(&x, &x), Some(Rational::zero()));
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        if let (Some(xy), Some(yz), Some(xz)) = (d(&x, &y), d(&y, &z), d(&x, &z)) {
            prop_assert!(xz <= xy + yz);
        }
        prop_assert_eq!(compare_barcodes(&x, &y).equal, x == y);
    }

    #[test]
    fn isomorphism_search_respects_barcodes(a in intervals(4), b in intervals(4)) {
        let (m, n) = (
            PersistenceModule::from_intervals(chain(4), &a, Q).unwrap(),
            PersistenceModule::from_intervals(chain(4), &b, Q).unwrap(),
        );
        let same = barcode_1d(&m, 0, true).unwrap() == barcode_1d(&n, 0, true).unwrap();
        let iso = find_isomorphism(&m, &n);
        prop_assert_eq!(iso.is_some(), same);
        if let Some(phi) = iso {
            prop_assert!(phi.check(&m, &n).is_ok());
        }
    }

    #[test]
    fn hom_dimension_of_interval_sums(a in intervals(4), b in intervals(4)) {
        // Hom(χ[p,q), χ[r,s)) is one-dimensional iff r <= p < s <= q
        let inf = 99;
        let hom = |&(p, q): &(usize, Option<usize>), &(r, s): &(usize, Option<usize>)| {
            let (q, s) = (q.unwrap_or(inf), s.unwrap_or(inf));
            usize::from(r <= p && p < s && s <= q)
        };
        let expected: usize = a.iter().flat_map(|x| b.iter().map(move |y| hom(x, y))).sum();
        let (m, n) = (
            PersistenceModule::from_intervals(chain(4), &a, Q).unwrap(),
            PersistenceModule::from_intervals(chain(4), &b, Q).unwrap(),
        );
        prop_assert_eq!(hom_basis(&m, &n).unwrap().len(), expected);
    }

    #[test]
    fn sums_and_tensors(a in intervals(4), b in intervals(4)) {
        let (m, n) = (
            PersistenceModule::from_intervals(chain(4), &a, Q).unwrap(),
            PersistenceModule::from_intervals(chain(4), &b, Q).unwrap(),
        );
        let sum = m.direct_sum(&n).unwrap();
        let mut both = a.clone();
        both.extend(&b);
        prop_assert_eq!(barcode_1d(&sum, 0, true).unwrap(), expected_barcode(&both));
        let t = m.tensor_product(&n).unwrap();
        prop_assert!(t.check_path_independence().is_ok());
        for s in 0..4 {
            prop_assert_eq!(t.dim(s), m.dim(s) * n.dim(s));
        }
    }
}
