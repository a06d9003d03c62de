mod support;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use tango_core::bundlecalc::{
    binomial_poly, chase_sequence, chern_total, chern_twist, chern_weighted_tango,
    line_cohomology, split_cohomology, sym_n_u, tango_v, weighted_tango_chern, ChernPoly,
    CohEntry, ResolvedBundle, SplitBundle,
};

/// `(n, alpha, gamma)` with `n ∈ 3..=8`, `alpha ∈ 0..=2`, `nα < γ ≤ 2(n-1)α + 3`.
fn grid() -> Vec<(usize, i64, i64)> {
    let mut out = Vec::new();
    for n in 3..=8usize {
        for alpha in 0..=2i64 {
            for gamma in (n as i64 * alpha + 1)..=(2 * (n as i64 - 1) * alpha + 3) {
                out.push((n, alpha, gamma));
            }
        }
    }
    out
}

fn exact(v: i128) -> CohEntry {
    CohEntry::Exact(v)
}

#[test]
fn serre_duality_for_lines() {
    for n in 2..=8usize {
        for t in -12..=12i64 {
            let a = line_cohomology(n, t).unwrap();
            let b = line_cohomology(n, -t - n as i64 - 1).unwrap();
            for i in 0..=n {
                assert_eq!(a.h[i], b.h[n - i], "n = {n}, t = {t}, i = {i}");
            }
        }
    }
}

#[test]
fn euler_characteristic_is_the_hilbert_polynomial() {
    for n in 1..=8usize {
        let coeffs = support::hilbert_coeffs(n);
        for t in -15..=15i64 {
            let p = line_cohomology(n, t).unwrap();
            let poly: BigRational = coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| a * BigRational::from_integer(BigInt::from(t).pow(k as u32)))
                .sum();
            assert_eq!(BigRational::from_integer(p.alternating_sum().unwrap().into()), poly);
            assert_eq!(p.chi, binomial_poly(n as i128 + t as i128, n).unwrap());
        }
    }
}

fn split_bundle() -> impl Strategy<Value = SplitBundle> {
    (1usize..8, prop::collection::vec(-6i64..=6, 1..7))
        .prop_map(|(n, t)| SplitBundle::new(n, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chern_inverse(b in split_bundle()) {
        let c = chern_total(&b).unwrap();
        prop_assert_eq!(c.mul(&c.inverse().unwrap()).unwrap(), ChernPoly::one(b.n));
    }

    #[test]
    fn direct_sums_are_multiplicative(a in split_bundle(), t in prop::collection::vec(-6i64..=6, 1..5)) {
        let c = SplitBundle::new(a.n, t).unwrap();
        let b = a.direct_sum(&c).unwrap();
        prop_assert_eq!(chern_total(&b).unwrap(), chern_total(&a).unwrap().mul(&chern_total(&c).unwrap()).unwrap());
        let chased = chase_sequence(Some(&split_cohomology(&a).unwrap()), Some(&split_cohomology(&b).unwrap()), None).unwrap();
        let direct = split_cohomology(&c).unwrap();
        prop_assert_eq!(chased.chi, direct.chi);
        for (got, want) in chased.h.iter().zip(&direct.h) {
            prop_assert!(got.lo() <= want.lo() && want.lo() <= got.hi());
        }
    }

    #[test]
    fn twisting_agrees_with_hrr(b in split_bundle(), t in -5i64..=5) {
        let c = chern_twist(&chern_total(&b).unwrap(), b.rank(), t).unwrap();
        let chi = split_cohomology(&b.twist(t)).unwrap().chi;
        prop_assert_eq!(support::hrr_chi(b.n, b.rank(), &c.coeffs), BigRational::from_integer(chi.into()));
    }
}

#[test]
fn tango_chern_grid() {
    for (n, alpha, gamma) in grid() {
        let data = weighted_tango_chern(n, alpha, gamma).unwrap();
        assert_eq!(data.tango.c(1), 0, "({n}, {alpha}, {gamma})");
        for q in n..=n {
            assert_eq!(data.tango_twisted.c(q), 0);
        }
        // multiplicativity along both sequences
        let euler = chern_total(&SplitBundle::line(n, -gamma))
            .unwrap()
            .mul(&data.quotient)
            .unwrap();
        assert_eq!(euler, chern_total(&sym_n_u(n, alpha)).unwrap());
        let tango = data.quotient_twisted.mul(&data.tango_twisted).unwrap();
        assert_eq!(tango, chern_total(&tango_v(n, alpha)).unwrap());
    }
}

#[test]
fn resolved_chern_matches_pipeline() {
    for (n, alpha, gamma) in grid() {
        let f = ResolvedBundle::weighted_tango(n, alpha, gamma).unwrap();
        assert_eq!(f.rank(), n - 1);
        assert_eq!(f.rank(), (2 * n - 1) - n);
        let c = f.chern().unwrap();
        assert_eq!(c.coeffs[1..n].to_vec(), chern_weighted_tango(n, alpha, gamma).unwrap());
        assert!(c.coeffs[n..].iter().all(|&x| x == 0));
    }
}

#[test]
fn resolution_euler_characteristic_matches_hrr() {
    for (n, alpha, gamma) in grid().into_iter().filter(|&(n, _, _)| n <= 6) {
        let f = ResolvedBundle::weighted_tango(n, alpha, gamma).unwrap();
        let q = ResolvedBundle::weighted_quotient(n, alpha, gamma).unwrap();
        for bundle in [&f, &q] {
            let c = bundle.chern().unwrap();
            for t in -3..=3 {
                let ct = chern_twist(&c, bundle.rank(), t).unwrap();
                let chi = bundle.cohomology(t).unwrap().chi;
                assert_eq!(
                    support::hrr_chi(n, bundle.rank(), &ct.coeffs),
                    BigRational::from_integer(chi.into()),
                    "({n}, {alpha}, {gamma}), t = {t}"
                );
            }
        }
    }
}

#[test]
fn weighted_p4_example() {
    let c = chern_weighted_tango(4, 1, 5).unwrap();
    assert_eq!(c[0], 0);
    let f = ResolvedBundle::weighted_tango(4, 1, 5).unwrap();
    for t in -4..=4 {
        let ct = chern_twist(&f.chern().unwrap(), 3, t).unwrap();
        assert_eq!(
            support::hrr_chi(4, 3, &ct.coeffs),
            BigRational::from_integer(f.cohomology(t).unwrap().chi.into())
        );
    }
    // c(F(5)) = c(𝒱) c(O(-10)) / c(S⁴𝒰(-5)) = 1 + 15h + 89h² + 285h³, then untwisted
    assert_eq!(c, vec![0, 14, 90]);
}

#[test]
fn lemma_vanishing_of_h1() {
    for (n, alpha, gamma) in grid() {
        let v = tango_v(n, alpha);
        let a = split_cohomology(&v.twist(-2 * gamma)).unwrap();
        let b = split_cohomology(&sym_n_u(n, alpha).twist(-gamma).tensor(&v).unwrap()).unwrap();
        assert_eq!(b.h[1], exact(0));
        assert_eq!(a.h[2], exact(0));
        let c = chase_sequence(Some(&a), Some(&b), None).unwrap();
        assert_eq!(c.h[1], exact(0), "({n}, {alpha}, {gamma})");
        assert_eq!(c.chi, b.chi - a.chi);
    }
}

#[test]
fn unstable_range_has_sections() {
    for (n, alpha, gamma) in grid() {
        if gamma <= 2 * (n as i64 - 1) * alpha {
            let h = ResolvedBundle::weighted_tango(n, alpha, gamma)
                .unwrap()
                .cohomology(0)
                .unwrap();
            assert!(h.h[0].lo() > 0, "({n}, {alpha}, {gamma}): {:?}", h.h[0]);
        }
    }
}
