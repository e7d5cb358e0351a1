use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use ratcover::analytic::{Poly, Polydisc, TaylorModel};
use ratcover::explorer::{cover, dimension_descent, resolve, CoverOptions, ScenarioRef};
use ratcover::interpolation::linalg::{normalize_integer, rank};
use ratcover::interpolation::{det_rational, select_hypersurface, Selection};
use ratcover::interval::{exp_enclosure, sin_cos_enclosure};
use ratcover::rational::{enumerate_rationals, height, int, rat, HeightBound, Rational, RationalVector};
use ratcover::weierstrass::{
    certify_weierstrass_polydisc, division_residual, hilbert_samuel, residual_vanishes_through, weierstrass_division,
    CoIdeal, WeierstrassPolynomial,
};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(a, b)| rat(a, b))
}

fn matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(small_rat(), n), n)
}

fn circle_point(t: &Rational) -> RationalVector {
    let one = Rational::one();
    let d = &one + t * t;
    RationalVector::new(vec![(&one - t * t) / &d, (t * int(2)) / d]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swapping_rows_negates_det(m in matrix(4), i in 0usize..4, j in 0usize..4) {
        prop_assume!(i != j);
        let mut s = m.clone();
        s.swap(i, j);
        prop_assert_eq!(det_rational(&s), -det_rational(&m));
    }

    #[test]
    fn det_vanishes_iff_rank_deficient(m in matrix(4), dup in any::<bool>()) {
        let mut m = m;
        if dup {
            m[3] = m[0].iter().zip(&m[1]).map(|(a, b)| a + b).collect();
        }
        prop_assert_eq!(det_rational(&m).is_zero(), rank(&m) < 4);
    }

    #[test]
    fn normalized_vectors_are_primitive(v in prop::collection::vec(small_rat(), 1..7)) {
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let n = normalize_integer(&v);
        let g = n.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        prop_assert!(g.is_one());
        prop_assert!(n.iter().find(|x| !x.is_zero()).unwrap().is_positive());
        let scaled: Vec<Rational> = v.iter().map(|x| x * int(-7)).collect();
        prop_assert_eq!(normalize_integer(&scaled), n);
    }

    #[test]
    fn hilbert_samuel_counts_lattice_points(
        n in 1usize..=3,
        gens in prop::collection::vec(prop::collection::vec(0u32..=4, 3), 1..=4),
        k in 0u32..=10,
    ) {
        let gens: Vec<Vec<u32>> = gens.into_iter().map(|g| g[..n].to_vec()).collect();
        let m = CoIdeal::new(n, gens).unwrap();
        let mut count = 0u128;
        let mut e = vec![0u32; n];
        loop {
            if e.iter().sum::<u32>() <= k && m.contains(&e).unwrap() {
                count += 1;
            }
            let mut i = 0;
            while i < n {
                e[i] += 1;
                if e[i] <= k { break; }
                e[i] = 0;
                i += 1;
            }
            if i == n { break; }
        }
        prop_assert_eq!(hilbert_samuel(&m, k), count);
    }

    #[test]
    fn division_residual_vanishes(
        a in prop::collection::vec(small_rat(), 3),
        g in prop::collection::vec(small_rat(), 12),
    ) {
        let w = Poly::var(2, 1);
        let z = Poly::var(2, 0);
        let mut f = &(&w * &w) + &(&z * &w).scale(&a[0]);
        f = &f + &(&z * &z).scale(&a[1]);
        f = &f + &Poly::constant(2, a[2].clone());
        let mut gp = Poly::zero(2);
        for (i, c) in g.iter().enumerate() {
            gp.add_term(vec![(i % 3) as u32, (i / 3) as u32], c.clone());
        }
        let order = 10;
        let wf = WeierstrassPolynomial::from_poly(&f, vec![int(0)], order, Polydisc::unit(1)).unwrap();
        let gm = TaylorModel::from_poly(&gp, vec![int(0), int(0)], order, Polydisc::unit(2)).unwrap();
        let div = weierstrass_division(&wf, &gm, order).unwrap();
        let res = division_residual(&wf, &gm, &div).unwrap();
        prop_assert!(residual_vanishes_through(&res, order - 2));
    }

    #[test]
    fn selected_conic_annihilates_circle_points(ts in prop::collection::btree_set(-20i64..=20, 6..12)) {
        let pts: Vec<RationalVector> = ts.iter().map(|&t| circle_point(&rat(t, 7))).collect();
        match select_hypersurface(&pts, 2).unwrap() {
            Selection::Hypersurface(h) => {
                prop_assert!(pts.iter().all(|p| h.contains(p)));
                prop_assert_eq!(h.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    vec!["1", "0", "0", "-1", "0", "-1"].into_iter().map(String::from).collect::<Vec<_>>());
            }
            Selection::Independent => prop_assert!(false, "circle points are dependent"),
        }
    }

    #[test]
    fn selection_is_sound(pts in prop::collection::vec((small_rat(), small_rat()), 1..8)) {
        let pts: Vec<RationalVector> = pts.into_iter().map(|(x, y)| RationalVector::new(vec![x, y]).unwrap()).collect();
        if let Selection::Hypersurface(h) = select_hypersurface(&pts, 2).unwrap() {
            prop_assert!(pts.iter().all(|p| h.contains(p)));
        } else {
            prop_assert!(pts.len() >= 6);
        }
    }

    #[test]
    fn exp_enclosures_are_consistent(a in -400i64..=400, b in 1i64..=97) {
        let x = rat(a, b * 20);
        let e = exp_enclosure(&x, 128);
        let f = exp_enclosure(&-&x, 128);
        let prod = &e * &f;
        prop_assert!(prod.contains(&Rational::one()));
        let fx = ratcover::rational::to_f64(&x).exp();
        prop_assert!((e.mid_f64() - fx).abs() <= 1e-12 * fx);
        let (s, c) = sin_cos_enclosure(&x, 128);
        prop_assert!((&(&s * &s) + &(&c * &c)).contains(&Rational::one()));
    }

    #[test]
    fn height_enumeration_is_complete(h in 1u64..=25) {
        let got = enumerate_rationals(HeightBound::new(h).unwrap(), -1.0, 1.0);
        let mut want = Vec::new();
        for b in 1..=h as i64 {
            for a in -(b)..=b {
                let q = rat(a, b);
                if height(&q) <= BigInt::from(h) { want.push(q); }
            }
        }
        want.sort();
        want.dedup();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn winding_counts_roots(roots in prop::collection::btree_set(-8i64..=8, 1..=5)) {
        let w = Poly::var(1, 0);
        let mut p = Poly::constant(1, int(1));
        for &r in &roots {
            p = &p * &(&w - &Poly::constant(1, rat(r, 10)));
        }
        let f = TaylorModel::from_poly(&p, vec![int(0)], 6, Polydisc::unit(1)).unwrap();
        let empty = Polydisc::new(vec![], vec![]).unwrap();
        let c = certify_weierstrass_polydisc(&f, &empty, &Polydisc::unit(1), 1, 256).unwrap();
        prop_assert_eq!(c.degree as usize, roots.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn covers_are_sound_and_partition(which in 0usize..4, h in 2u64..=12, eps in prop::sample::select(vec![0.5, 1.0, 2.0])) {
        let name = ["circle", "parabola", "line", "hyperbola:1/4"][which];
        let ScenarioRef::Single(s) = resolve(name, None).unwrap() else { unreachable!() };
        let r = cover(&s, HeightBound::new(h).unwrap(), eps, 2, &CoverOptions::default()).unwrap();
        for b in &r.boxes {
            let hs = &r.hypersurfaces[b.hypersurface];
            prop_assert!(b.points.iter().all(|&i| hs.contains(&r.points[i])));
        }
        prop_assert!(r.hypersurfaces.len() <= r.boxes.len());
        prop_assert!((r.boxes.len() as u128) <= r.box_budget);
        let d = dimension_descent(&s, &r, 1e-9).unwrap();
        prop_assert_eq!(d.algebraic + d.transcendental, r.points.len());
        prop_assert_eq!(d.transcendental, 0);
    }
}
