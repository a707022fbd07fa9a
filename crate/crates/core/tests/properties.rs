//! Property suites: ring axioms, homomorphisms, jet-coefficient identities,
//! and the degrevlex comparator against an independent oracle.

use mint_core::gring::{geometric_series, parse_class, partial_geometric, LRational, VirtualDim};
use mint_core::jet::{base_registry, jet_expand, jet_system};
use mint_core::poly::{
    degrevlex_cmp, leading_term_degrevlex, Coeff, Domain, MultiPoly, VarRegistry,
};
use num_bigint::BigInt;
use proptest::prelude::*;

// ---------------------------------------------------------------- gring --

fn arb_lrational() -> impl Strategy<Value = LRational> {
    let terms = prop::collection::vec((0u32..6, -9i64..10), 0..4);
    (1u64..=3, terms.clone(), terms).prop_filter_map("zero denominator", |(gran, num, den)| {
        let lift = |v: Vec<(u32, i64)>| {
            v.into_iter()
                .map(|(e, c)| (e as i64, BigInt::from(c)))
                .collect::<Vec<_>>()
        };
        LRational::from_parts(gran, lift(num), lift(den)).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lrational_ring_axioms(a in arb_lrational(), b in arb_lrational(), c in arb_lrational()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), LRational::zero());
    }

    #[test]
    fn lrational_division_inverts(a in arb_lrational(), b in arb_lrational()) {
        prop_assume!(!b.is_zero());
        let q = a.div(&b).unwrap();
        prop_assert_eq!(q.mul(&b), a);
    }

    #[test]
    fn specialization_is_ring_homomorphism(a in arb_lrational(), b in arb_lrational()) {
        // q must be a perfect N-th power for every granularity up to 3:
        // 64 = 2^6 = 4^3 = 8^2 works for N in {1, 2, 3}.
        let q = BigInt::from(64);
        let sa = a.specialize_q(&q).unwrap();
        let sb = b.specialize_q(&q).unwrap();
        prop_assert_eq!(a.add(&b).specialize_q(&q).unwrap(), &sa + &sb);
        prop_assert_eq!(a.mul(&b).specialize_q(&q).unwrap(), &sa * &sb);
    }

    #[test]
    fn e_specialization_is_ring_homomorphism(a in arb_lrational(), b in arb_lrational()) {
        prop_assume!(a.granularity() == 1 && b.granularity() == 1);
        let ea = a.to_e_rational().unwrap();
        let eb = b.to_e_rational().unwrap();
        prop_assert_eq!(a.add(&b).to_e_rational().unwrap(), ea.add(&eb));
        prop_assert_eq!(a.mul(&b).to_e_rational().unwrap(), ea.mul(&eb));
    }

    #[test]
    fn dimension_multiplicative_and_subadditive(a in arb_lrational(), b in arb_lrational()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let da = a.virtual_dim().finite().unwrap().clone();
        let db = b.virtual_dim().finite().unwrap().clone();
        // multiplicative on this representable subring
        prop_assert_eq!(a.mul(&b).virtual_dim(), VirtualDim::Finite(&da + &db));
        // subadditive with equality when the dimensions differ
        let max = da.clone().max(db.clone());
        match a.add(&b).virtual_dim() {
            VirtualDim::NegInfinity => prop_assert_eq!(&da, &db),
            VirtualDim::Finite(d) => {
                prop_assert!(d <= max);
                if da != db {
                    prop_assert_eq!(d, max);
                }
            }
        }
    }

    #[test]
    fn print_parse_round_trip(a in arb_lrational()) {
        let printed = a.to_string();
        let back = parse_class(&printed).unwrap();
        prop_assert_eq!(a, back);
    }

    #[test]
    fn geometric_series_inverse(k in 1u64..=10) {
        let lhs = LRational::one().sub(&LRational::l_pow_int(-(k as i64)));
        prop_assert!(lhs.mul(&geometric_series(k).unwrap()).is_one());
    }

    #[test]
    fn partial_sum_tail_dimension(k in 1u64..=5, t in 1u64..=50) {
        let diff = partial_geometric(k, t).sub(&geometric_series(k).unwrap());
        prop_assert_eq!(diff.virtual_dim(), VirtualDim::from_int(-((k * t) as i64)));
    }
}

// ----------------------------------------------------------------- poly --

#[derive(Debug, Clone)]
struct RawPoly {
    terms: Vec<(Vec<u32>, i64)>,
}

fn arb_raw_poly(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(0..=max_exp, nvars),
            -9i64..10,
        ),
        0..=max_terms,
    )
    .prop_map(|terms| RawPoly { terms })
}

fn build(raw: &RawPoly, domain: Domain, reg: &mint_core::poly::RegistryRef) -> MultiPoly {
    let mut p = MultiPoly::zero(domain, reg.clone());
    for (exps, c) in &raw.terms {
        let m = MultiPoly::monomial(domain, reg.clone(), exps.clone(), domain.from_i64(*c));
        p = p.add(&m).unwrap();
    }
    p
}

/// Independent degrevlex oracle: grade by total degree, then the monomial
/// whose last nonzero exponent difference is negative wins.
fn degrevlex_oracle(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: i64 = a.iter().map(|&x| x as i64).sum();
    let db: i64 = b.iter().map(|&x| x as i64).sum();
    if da != db {
        return da.cmp(&db);
    }
    let diffs: Vec<i64> = a.iter().zip(b).map(|(&x, &y)| x as i64 - y as i64).collect();
    match diffs.iter().rev().find(|&&d| d != 0) {
        None => std::cmp::Ordering::Equal,
        Some(&d) if d < 0 => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Less,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn poly_ring_axioms_integers(
        ra in arb_raw_poly(3, 4, 5),
        rb in arb_raw_poly(3, 4, 5),
        rc in arb_raw_poly(3, 4, 5),
    ) {
        let reg = VarRegistry::new(vec!["x".into(), "y".into(), "z".into()]).unwrap();
        let d = Domain::Integer;
        let (a, b, c) = (build(&ra, d, &reg), build(&rb, d, &reg), build(&rc, d, &reg));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn poly_ring_axioms_prime_field(
        ra in arb_raw_poly(3, 4, 5),
        rb in arb_raw_poly(3, 4, 5),
        rc in arb_raw_poly(3, 4, 5),
        p in prop::sample::select(vec![2u32, 3, 5]),
    ) {
        let reg = VarRegistry::new(vec!["x".into(), "y".into(), "z".into()]).unwrap();
        let d = Domain::prime_field(p).unwrap();
        let (a, b, c) = (build(&ra, d, &reg), build(&rb, d, &reg), build(&rc, d, &reg));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn eval_is_ring_homomorphism(
        ra in arb_raw_poly(3, 3, 4),
        rb in arb_raw_poly(3, 3, 4),
        point in prop::collection::vec(0u64..5, 3),
        p in prop::sample::select(vec![3u32, 5]),
    ) {
        let reg = VarRegistry::new(vec!["x".into(), "y".into(), "z".into()]).unwrap();
        let d = Domain::prime_field(p).unwrap();
        let point: Vec<u64> = point.into_iter().map(|v| v % p as u64).collect();
        let (a, b) = (build(&ra, d, &reg), build(&rb, d, &reg));
        let (ea, eb) = (a.eval_point(&point).unwrap(), b.eval_point(&point).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().eval_point(&point).unwrap(), (ea + eb) % p as u64);
        prop_assert_eq!(a.mul(&b).unwrap().eval_point(&point).unwrap(), (ea * eb) % p as u64);
    }

    #[test]
    fn derivative_satisfies_leibniz(
        ra in arb_raw_poly(2, 4, 4),
        rb in arb_raw_poly(2, 4, 4),
        var in 0usize..2,
    ) {
        let reg = VarRegistry::new(vec!["x".into(), "y".into()]).unwrap();
        let d = Domain::Integer;
        let (a, b) = (build(&ra, d, &reg), build(&rb, d, &reg));
        let lhs = a.mul(&b).unwrap().derivative(var);
        let rhs = a
            .derivative(var)
            .mul(&b)
            .unwrap()
            .add(&a.mul(&b.derivative(var)).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degrevlex_leading_term_matches_oracle(ra in arb_raw_poly(4, 5, 6)) {
        let reg = VarRegistry::jet(2, 1); // four jet variables
        let d = Domain::Integer;
        let f = build(&ra, d, &reg);
        prop_assume!(!f.is_zero());
        let lt = leading_term_degrevlex(&f).unwrap();
        let (lt_exps, _) = lt.terms().next().unwrap();
        // oracle: maximum over all pairwise comparisons
        for (exps, _) in f.terms() {
            prop_assert_ne!(
                degrevlex_oracle(lt_exps, exps),
                std::cmp::Ordering::Less,
                "oracle found a larger term"
            );
        }
        // and the comparator itself agrees with the oracle pairwise
        let all: Vec<&Vec<u32>> = f.terms().map(|(e, _)| e).collect();
        for x in &all {
            for y in &all {
                prop_assert_eq!(degrevlex_cmp(x, y), degrevlex_oracle(x, y));
            }
        }
    }
}

// ------------------------------------------------------------------ jet --

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jet_coefficients_satisfy_leibniz(
        ra in arb_raw_poly(2, 3, 4),
        rb in arb_raw_poly(2, 3, 4),
        m in 0usize..=4,
    ) {
        let reg = base_registry(2);
        let d = Domain::Integer;
        let (f, g) = (build(&ra, d, &reg), build(&rb, d, &reg));
        let ef = jet_expand(&f, m).unwrap();
        let eg = jet_expand(&g, m).unwrap();
        let efg = jet_expand(&f.mul(&g).unwrap(), m).unwrap();
        for j in 0..=m {
            let jet_reg = efg[j].registry().clone();
            let mut conv = MultiPoly::zero(d, jet_reg);
            for i in 0..=j {
                conv = conv.add(&ef[i].mul(&eg[j - i]).unwrap()).unwrap();
            }
            prop_assert_eq!(&efg[j], &conv, "level {}", j);
        }
    }

    #[test]
    fn jet_expansion_is_linear(
        ra in arb_raw_poly(2, 3, 4),
        rb in arb_raw_poly(2, 3, 4),
        m in 0usize..=4,
    ) {
        let reg = base_registry(2);
        let d = Domain::Integer;
        let (f, g) = (build(&ra, d, &reg), build(&rb, d, &reg));
        let sum = jet_expand(&f.add(&g).unwrap(), m).unwrap();
        let ef = jet_expand(&f, m).unwrap();
        let eg = jet_expand(&g, m).unwrap();
        for j in 0..=m {
            prop_assert_eq!(&sum[j], &ef[j].add(&eg[j]).unwrap());
        }
    }

    #[test]
    fn jet_first_two_closed_forms(ra in arb_raw_poly(2, 3, 4), m in 1usize..=3) {
        let reg = base_registry(2);
        let d = Domain::Integer;
        let f = build(&ra, d, &reg);
        let eqs = jet_expand(&f, m).unwrap();
        let jet_reg = eqs[0].registry().clone();
        prop_assert_eq!(
            &eqs[0],
            &mint_core::jet::lift_to_level_zero(&f, &jet_reg).unwrap()
        );
        let mut f1 = MultiPoly::zero(d, jet_reg.clone());
        for i in 0..2 {
            let di = mint_core::jet::lift_to_level_zero(&f.derivative(i), &jet_reg).unwrap();
            let xi1 = MultiPoly::var(d, jet_reg.clone(), jet_reg.jet_index(i + 1, 1));
            f1 = f1.add(&di.mul(&xi1).unwrap()).unwrap();
        }
        prop_assert_eq!(&eqs[1], &f1);
    }

    #[test]
    fn jet_levels_bound_variables(ra in arb_raw_poly(2, 4, 5), m in 0usize..=4) {
        let reg = base_registry(2);
        let f = build(&ra, Domain::Integer, &reg);
        let eqs = jet_expand(&f, m).unwrap();
        for (j, eq) in eqs.iter().enumerate() {
            prop_assert!(eq.uses_only_first_vars(2 * (j + 1)));
        }
    }

    #[test]
    fn jet_systems_respect_product_blocks(
        ra in arb_raw_poly(2, 3, 3),
        rb in arb_raw_poly(2, 3, 3),
        m in 0usize..=3,
    ) {
        // generators in disjoint blocks: equations never mix the blocks
        let reg4 = base_registry(4);
        let d = Domain::Integer;
        let lift_block = |raw: &RawPoly, offset: usize| {
            let mut p = MultiPoly::zero(d, reg4.clone());
            for (exps, c) in &raw.terms {
                let mut e4 = vec![0u32; 4];
                e4[offset] = exps[0];
                e4[offset + 1] = exps[1];
                let m = MultiPoly::monomial(d, reg4.clone(), e4, d.from_i64(*c));
                p = p.add(&m).unwrap();
            }
            p
        };
        let f = lift_block(&ra, 0);
        let g = lift_block(&rb, 2);
        prop_assume!(!f.is_zero() && !g.is_zero());
        let sys = jet_system(&[f, g], m).unwrap();
        for (gen_idx, per_gen) in sys.equations.iter().enumerate() {
            for eq in per_gen {
                for (exps, _) in eq.terms() {
                    for (idx, &e) in exps.iter().enumerate() {
                        if e > 0 {
                            let base_i = idx % 4;
                            if gen_idx == 0 {
                                prop_assert!(base_i < 2);
                            } else {
                                prop_assert!(base_i >= 2);
                            }
                        }
                    }
                }
            }
        }
    }
}

// ------------------------------------------------- deterministic counts --

#[test]
fn count_constant_polynomials_edge() {
    // 0 = 0 holds everywhere; 1 = 0 nowhere; registry with one variable.
    let reg = base_registry(1);
    let d = Domain::prime_field(3).unwrap();
    let zero = MultiPoly::zero(d, reg.clone());
    let one = MultiPoly::constant(d, reg.clone(), Coeff::Fp(1));
    let q = mint_core::count::CountQuery::new(3, 1, vec![zero]);
    assert_eq!(
        mint_core::count::count_points(&q).unwrap().count,
        BigInt::from(3).to_biguint().unwrap()
    );
    let q = mint_core::count::CountQuery::new(3, 1, vec![one]);
    assert_eq!(
        mint_core::count::count_points(&q).unwrap().count,
        BigInt::from(0).to_biguint().unwrap()
    );
}
