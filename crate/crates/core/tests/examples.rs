//! Worked examples, each checked against a small independent oracle.

use qsum_core::constructions::{
    bound, construction, katona_upper_family, nonuniform_extremal, rank_extremal, recursion_check, support_star,
    t_intersecting_construction, Anchor, BoundKind, BoundParams, RecursionBranch,
};
use qsum_core::ivp::{
    construct_abc, construct_alpha, f_k, lym_strong, max_system, reduce_parameter, saturate, system_check,
    weighted_sum, AlphaScope, PairSystem, SystemKind,
};
use qsum_core::order::{initial_segment, initial_segment_sets, min_shadow_oracle, shadow, shift, IndexSet};
use qsum_core::search::{certify, m_of_n, max_family, Budget, SearchProblem, Verdict};
use qsum_core::{enumerate_slice, family_check, PredicateSpec, QVec, SliceKind, VecFamily};

fn fam(n: usize, q: u8, rows: &[&[u8]]) -> VecFamily {
    VecFamily::from_entries(n, q, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn v(q: u8, e: &[u8]) -> QVec {
    QVec::new(q, e.to_vec()).unwrap()
}

fn all_vectors(n: usize, q: u8) -> Vec<Vec<u8>> {
    (0..(usize::from(q) + 1).pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let d = (code % (usize::from(q) + 1)) as u8;
                    code /= usize::from(q) + 1;
                    d
                })
                .collect()
        })
        .collect()
}

/// Largest family by trying every subset of the universe.
fn brute_max(universe: &[Vec<u8>], ok: impl Fn(&[u8], &[u8]) -> bool) -> usize {
    let k = universe.len();
    assert!(k <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << k) {
        let idx: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        if idx.len() <= best {
            continue;
        }
        let good = idx
            .iter()
            .enumerate()
            .all(|(a, &i)| idx[a + 1..].iter().all(|&j| ok(&universe[i], &universe[j])));
        if good {
            best = idx.len();
        }
    }
    best
}

fn sum_meets(x: &[u8], y: &[u8], s: u32) -> usize {
    x.iter()
        .zip(y)
        .filter(|(&a, &b)| u32::from(a) + u32::from(b) >= s)
        .count()
}

#[test]
fn family_check_example() {
    let f = fam(2, 2, &[&[1, 2], &[2, 1], &[2, 2]]);
    assert!(family_check(&f, &PredicateSpec::sum(3, 1).unwrap()).holds);
    for a in f.iter() {
        for b in f.iter().filter(|b| *b != a) {
            assert!(sum_meets(a.entries(), b.entries(), 3) >= 1);
        }
    }
}

#[test]
fn rank_slices() {
    let s = enumerate_slice(2, 2, SliceKind::Rank(2)).unwrap();
    let rows: Vec<&[u8]> = s.iter().map(|x| x.entries()).collect();
    assert_eq!(rows, vec![&[2, 0][..], &[1, 1], &[0, 2]]);
    let count = all_vectors(3, 2)
        .iter()
        .filter(|x| x.iter().map(|&e| u32::from(e)).sum::<u32>() == 3)
        .count();
    assert_eq!(count, 7);
    assert_eq!(enumerate_slice(3, 2, SliceKind::Rank(3)).unwrap().len(), count);
}

#[test]
fn colex_order_of_vectors() {
    let slice = enumerate_slice(2, 2, SliceKind::Rank(2)).unwrap();
    let oracle = |a: &[u8], b: &[u8]| a.iter().rev().cmp(b.iter().rev());
    for a in slice.iter() {
        for b in slice.iter() {
            assert_eq!(a.colex_cmp(b).unwrap(), oracle(a.entries(), b.entries()));
        }
    }
    assert!(v(2, &[2, 0]) < v(2, &[1, 1]) && v(2, &[1, 1]) < v(2, &[0, 2]));
}

#[test]
fn shadow_and_segments() {
    let d = shadow(&fam(2, 2, &[&[2, 0], &[1, 1]]), 1).unwrap();
    assert_eq!(d, fam(2, 2, &[&[1, 0], &[0, 1]]));
    assert_eq!(initial_segment(2, 2, 2, 2).unwrap(), fam(2, 2, &[&[2, 0], &[1, 1]]));
    let sets = initial_segment_sets(4, 2, 3).unwrap();
    let expected: Vec<IndexSet> = [[1, 2], [1, 3], [2, 3]]
        .iter()
        .map(|s| IndexSet::new(s.to_vec()).unwrap())
        .collect();
    assert_eq!(sets, expected);
    let vecs = initial_segment(4, 1, 2, 3).unwrap();
    assert_eq!(vecs, fam(4, 1, &[&[1, 1, 0, 0], &[1, 0, 1, 0], &[0, 1, 1, 0]]));
}

#[test]
fn shift_collision_keeps_original() {
    let f = fam(2, 3, &[&[1, 3], &[3, 1]]);
    assert_eq!(shift(&f, 1, 2, false).unwrap(), f);
    let g = fam(2, 3, &[&[3, 2], &[1, 3]]);
    let h = shift(&g, 1, 2, false).unwrap();
    assert_eq!(h, fam(2, 3, &[&[3, 2], &[3, 1]]));
    assert_eq!(sum_meets(&[3, 2], &[1, 3], 4), 2);
    assert_eq!(sum_meets(&[3, 2], &[3, 1], 4), 1);
}

#[test]
fn shadow_oracle_examples() {
    let o = min_shadow_oracle(2, 2, 2, 2, 1_000).unwrap();
    assert_eq!((o.min_size, o.achieved_by_segment), (Some(2), Some(true)));
    let o = min_shadow_oracle(3, 1, 2, 3, 1_000).unwrap();
    assert_eq!(o.min_size, Some(3));
}

#[test]
fn support_star_examples() {
    let f = support_star(3, 2, 4, 1, &Anchor::Index(1)).unwrap();
    assert_eq!(f, fam(3, 2, &[&[2, 0, 0]]));
    let f = support_star(3, 2, 3, 1, &Anchor::Tuple(vec![1])).unwrap();
    assert_eq!(f, fam(3, 2, &[&[1, 0, 0], &[2, 0, 0]]));
    let f = support_star(2, 2, 3, 2, &Anchor::Tuple(vec![1, 2])).unwrap();
    assert_eq!(f, fam(2, 2, &[&[1, 1], &[2, 1], &[2, 2], &[1, 2]]));
}

#[test]
fn t_construction_examples() {
    let t = IndexSet::new(vec![1]).unwrap();
    let f = t_intersecting_construction(4, 2, 4, 2, 1, Some(&t)).unwrap();
    assert_eq!(f.len(), 6);
    let by_definition = all_vectors(4, 2)
        .into_iter()
        .filter(|x| x.iter().filter(|&&e| e > 0).count() == 2 && x[0] >= 2)
        .count();
    assert_eq!(by_definition, 6);
    assert_eq!(t_intersecting_construction(2, 2, 3, 1, 1, None).unwrap().len(), 2);
    assert_eq!(qsum_core::constructions::f_size(1, 2, 3, 1, 1).unwrap(), 2);
}

#[test]
fn recursion_examples() {
    let rc = recursion_check(8, 2, 3, 4, 2).unwrap();
    assert_eq!(rc.branch, RecursionBranch::Wide);
    assert!(rc.agree);
    let rc = recursion_check(8, 2, 3, 3, 1).unwrap();
    assert_eq!(rc.lower_strict, Some(true));
    for t in 1..=3u32 {
        // r = t: C(t, t-1) + (q - floor(s/2))^t
        let rc = recursion_check(t as usize, 2, 3, t, t).unwrap();
        assert_eq!(rc.direct, u128::from(t) + 1);
    }
}

#[test]
fn rank_extremal_examples() {
    let f = rank_extremal(4, 1, 2).unwrap();
    assert_eq!(f.len(), 3);
    assert!(f.iter().all(|x| x.get(4) == 1));
    let f = rank_extremal(2, 3, 2).unwrap();
    assert_eq!(f, fam(2, 3, &[&[0, 2]]));
    assert_eq!(bound(BoundKind::RankUniform, &BoundParams::new(2, 3).r(2)).unwrap(), 1);
    let f = rank_extremal(2, 2, 2).unwrap();
    let formula = bound(BoundKind::RankUniform, &BoundParams::new(2, 2).r(2)).unwrap();
    assert_eq!(f.len() as u128, formula);
    let universe: Vec<Vec<u8>> = all_vectors(2, 2)
        .into_iter()
        .filter(|x| x.iter().sum::<u8>() == 2)
        .collect();
    assert_eq!(brute_max(&universe, |a, b| sum_meets(a, b, 3) >= 1), f.len());
}

#[test]
fn nonuniform_examples() {
    let f = nonuniform_extremal(2, 2, 3, false).unwrap();
    assert_eq!(f.len(), 5);
    assert!(family_check(&f, &PredicateSpec::sum(3, 1).unwrap()).holds);
    let all = all_vectors(3, 1);
    assert_eq!(brute_max(&all, |a, b| sum_meets(a, b, 2) >= 1), 4);
    assert_eq!(nonuniform_extremal(3, 1, 2, false).unwrap().len(), 4);
    assert_eq!(nonuniform_extremal(2, 2, 2, false).unwrap().len(), 7);
    let all = all_vectors(2, 2);
    assert_eq!(brute_max(&all, |a, b| sum_meets(a, b, 2) >= 1), 7);
}

#[test]
fn katona_families() {
    assert_eq!(
        katona_upper_family(2, 2).unwrap(),
        fam(2, 2, &[&[2, 1], &[1, 2], &[2, 2]])
    );
    assert_eq!(katona_upper_family(3, 2).unwrap().len(), 6 + 3 + 1);
}

#[test]
fn bound_examples() {
    assert_eq!(
        bound(BoundKind::SupportUniform, &BoundParams::new(8, 2).s(3).r(2)).unwrap(),
        16
    );
    assert_eq!(bound(BoundKind::RankUniform, &BoundParams::new(5, 1).r(2)).unwrap(), 4);
    assert_eq!(bound(BoundKind::Nonuniform, &BoundParams::new(3, 2)).unwrap(), 14);
    assert_eq!(
        construction(BoundKind::Nonuniform, &BoundParams::new(3, 2))
            .unwrap()
            .len(),
        14
    );
}

#[test]
fn search_matches_brute_force() {
    let all = all_vectors(2, 2);
    let cases = [
        (
            PredicateSpec::sum(3, 1).unwrap(),
            brute_max(&all, |a, b| sum_meets(a, b, 3) >= 1),
        ),
        (
            PredicateSpec::multisum(3, 2).unwrap(),
            brute_max(&all, |a, b| {
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| (u32::from(x) + u32::from(y) + 1).saturating_sub(3))
                    .sum::<u32>()
                    >= 2
            }),
        ),
    ];
    for (p, oracle) in cases {
        let r = max_family(&SearchProblem::new(2, 2, SliceKind::All, p)).unwrap();
        assert_eq!(r.optimum, oracle);
    }
    assert_eq!(brute_max(&all, |a, b| sum_meets(a, b, 3) >= 1), 5);
    let support2: Vec<Vec<u8>> = all_vectors(4, 1)
        .into_iter()
        .filter(|x| x.iter().sum::<u8>() == 2)
        .collect();
    let r = max_family(&SearchProblem::new(
        4,
        1,
        SliceKind::Support(2),
        PredicateSpec::sum(2, 1).unwrap(),
    ))
    .unwrap();
    assert_eq!(r.optimum, brute_max(&support2, |a, b| sum_meets(a, b, 2) >= 1));
    assert_eq!(r.optimum, 3);
}

#[test]
fn certify_examples() {
    let rep = certify(BoundKind::Nonuniform, &BoundParams::new(2, 2), None, 1).unwrap();
    assert_eq!((rep.formula, rep.construction, rep.search.optimum), (5, 5, 5));
    assert_eq!(rep.status, Verdict::Verified);
    let rep = certify(BoundKind::SupportUniform, &BoundParams::new(8, 2).s(3).r(2), None, 1).unwrap();
    assert_eq!((rep.formula, rep.construction, rep.search.optimum), (16, 16, 16));
    assert!(rep.threshold_ok);
}

#[test]
fn m_of_n_examples() {
    let slice: Vec<Vec<u8>> = all_vectors(2, 2)
        .into_iter()
        .filter(|x| x.iter().sum::<u8>() == 3)
        .collect();
    let oracle = brute_max(&slice, |a, b| {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (u32::from(x) + u32::from(y) + 1).saturating_sub(3))
            .sum::<u32>()
            >= 3
    });
    assert_eq!(m_of_n(2, None, 1).unwrap().optimum, oracle);
    assert_eq!(oracle, 1);
    let slice: Vec<Vec<u8>> = all_vectors(3, 2)
        .into_iter()
        .filter(|x| x.iter().sum::<u8>() == 4)
        .collect();
    let oracle = brute_max(&slice, |a, b| {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (u32::from(x) + u32::from(y) + 1).saturating_sub(3))
            .sum::<u32>()
            >= 3
    });
    assert_eq!(m_of_n(3, None, 1).unwrap().optimum, oracle);
}

fn sys(q: u8, s: u32, rows: &[(&[u8], &[u8])]) -> PairSystem {
    PairSystem::new(
        q,
        s,
        SystemKind::Strong,
        rows.iter().map(|(x, y)| (v(q, x), v(q, y))).collect(),
    )
    .unwrap()
}

#[test]
fn pair_system_examples() {
    let abc = construct_abc(2, 2, 1, 3, 2).unwrap();
    assert!(system_check(&abc).valid);
    // all 6*5 ordered cross pairs meet, no pair meets itself
    for (i, a) in abc.pairs().iter().enumerate() {
        assert_eq!(sum_meets(a.x.entries(), a.y.entries(), 3), 0);
        for (j, b) in abc.pairs().iter().enumerate() {
            if i != j {
                assert!(sum_meets(a.x.entries(), b.y.entries(), 3) >= 1);
            }
        }
    }
    assert!(system_check(&sys(2, 3, &[(&[2, 0], &[0, 2]), (&[0, 2], &[2, 0])])).valid);
}

#[test]
fn saturation_and_reduction_examples() {
    let s = saturate(&sys(2, 3, &[(&[2, 0, 1], &[0, 1, 0])])).unwrap();
    assert_eq!(s.pairs()[0].y.entries(), &[0, 2, 1]);
    let input = sys(3, 5, &[(&[3, 0], &[0, 3]), (&[0, 3], &[3, 0])]);
    assert!(system_check(&input).valid);
    let r = reduce_parameter(&input).unwrap();
    assert_eq!((r.q(), r.s()), (2, 3));
    assert_eq!(r.pairs()[0].x.entries(), &[2, 0]);
    assert!(system_check(&r).valid);
}

#[test]
fn abc_and_alpha_sizes() {
    let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    for (a, b, c) in [(2usize, 2usize, 1usize), (1, 1, 0), (1, 3, 1), (2, 4, 0)] {
        let expected = binom((a + b - c) as u64, (b - c) as u64) * binom(a as u64, c as u64);
        assert_eq!(construct_abc(a, b, c, 3, 2).unwrap().len() as u64, expected);
    }
    let s = construct_abc(1, 1, 0, 3, 2).unwrap();
    let rows: Vec<(&[u8], &[u8])> = s.pairs().iter().map(|p| (p.x.entries(), p.y.entries())).collect();
    assert_eq!(rows, vec![(&[2, 0][..], &[0, 2][..]), (&[0, 2], &[2, 0])]);
    assert_eq!(construct_alpha(&[1, 1], 1).unwrap().len(), 2);
    let a = construct_alpha(&[1, 1, 1], 2).unwrap();
    assert_eq!(a.len(), 6);
    assert!(system_check(&a).valid);
}

#[test]
fn fk_by_grid() {
    let fact = |n: u32| (1..=u128::from(n)).product::<u128>();
    for k in 1..=6u32 {
        let mut best = 0;
        for x in 0..=k {
            for y in 0..=k {
                for z in 0..=k - x.max(y) {
                    best = best.max(fact(x + y + z) / (fact(x) * fact(y) * fact(z)));
                }
            }
        }
        assert_eq!(f_k(k).value, best);
    }
    assert_eq!(f_k(2).argmax, (1, 1, 1));
}

#[test]
fn lym_examples() {
    let r = lym_strong(&construct_abc(2, 2, 1, 3, 2).unwrap()).unwrap();
    assert_eq!((r.sum.as_str(), r.bound, r.holds), ("1/1", 2, true));
    let r = lym_strong(&construct_abc(1, 1, 0, 3, 2).unwrap()).unwrap();
    assert_eq!((r.sum_num.as_str(), r.sum_den.as_str(), r.bound), ("1", "1", 1));
}

#[test]
fn weighted_example() {
    let s = saturate(&construct_abc(1, 1, 0, 3, 2).unwrap()).unwrap();
    let r2 = 2f64.sqrt();
    let rep = weighted_sum(&s, &[r2 - 1.0, 3.0 - 2.0 * r2, r2 - 1.0], AlphaScope::PairLocal).unwrap();
    assert!((rep.sum - 0.343_145_750_507_619_8).abs() < 1e-12);
}

#[test]
fn max_system_example() {
    let r = max_system(2, 1, SystemKind::Strong, 3, Budget::default(), 2).unwrap();
    assert_eq!(r.optimum, 2);
    assert!(system_check(r.witness.as_ref().unwrap()).valid);
    assert_eq!(r.k_f_k, Some(2));
}
