use nilform::center::full_center_report;
use nilform::diagrams::{braid_closure, pretzel};
use nilform::exact_algebra::{companion_matrix, q, vec_add, vec_sub, QMatrix, Rational, RationalPoly};
use nilform::knot_pipeline::{
    alexander_divisors, bundled_knot, bundled_names, hk_basis, parse_pd, qk_form, qk_form_with_lift, wirtinger,
    LiftSolver, PDCode,
};
use nilform::mapping_class::{
    compose_twists, curve_count, homology_action, mapping_torus_alexander, mapping_torus_presentation, qf_form,
    signed_twist, symplectic_form, twist_automorphism, TwistWord,
};
use nilform::nilpotent_group::{
    build_tau_lift, nil2_inv, nil2_mul, random_a, tau_apply, wedge, Nil2Element, TauLift,
};
use nilform::quadratic::{compare_forms, proportionality_witness, Verdict, WitnessSearch};

fn poly(s: &str) -> RationalPoly {
    s.parse().unwrap()
}

#[test]
fn bundled_codes_are_braid_closures() {
    let words: [(&str, usize, &[i32]); 8] = [
        ("3_1", 2, &[1, 1, 1]),
        ("4_1", 3, &[1, -2, 1, -2]),
        ("5_1", 2, &[1, 1, 1, 1, 1]),
        ("5_2", 3, &[1, 1, 1, 2, -1, 2]),
        ("6_1", 4, &[1, 1, 2, -1, -3, 2, -3]),
        ("6_2", 3, &[1, 1, 1, -2, 1, -2]),
        ("6_3", 3, &[1, 1, -2, 1, -2, -2]),
        ("8_20", 3, &[1, 1, 1, -2, -1, -1, -1, -2]),
    ];
    for (name, strands, word) in words {
        assert_eq!(bundled_knot(name).unwrap(), braid_closure(strands, word).unwrap(), "{name}");
    }
}

#[test]
fn bundled_alexander_polynomials() {
    let expected = [
        ("3_1", vec!["t^2 - t + 1"]),
        ("4_1", vec!["t^2 - 3*t + 1"]),
        ("5_1", vec!["t^4 - t^3 + t^2 - t + 1"]),
        ("5_2", vec!["t^2 - 3/2*t + 1"]),
        ("6_1", vec!["t^2 - 5/2*t + 1"]),
        ("6_2", vec!["t^4 - 3*t^3 + 3*t^2 - 3*t + 1"]),
        ("6_3", vec!["t^4 - 3*t^3 + 5*t^2 - 3*t + 1"]),
        ("8_20", vec!["t^4 - 2*t^3 + 3*t^2 - 2*t + 1"]),
    ];
    for (name, divs) in expected {
        let d = alexander_divisors(&wirtinger(&bundled_knot(name).unwrap())).unwrap();
        let want: Vec<RationalPoly> = divs.iter().map(|s| poly(s)).collect();
        assert_eq!(d.divisors, want, "{name}");
    }
}

#[test]
fn wirtinger_assertions_hold_on_all_diagrams() {
    let mut pds: Vec<PDCode> = bundled_names().iter().map(|n| bundled_knot(n).unwrap()).collect();
    pds.push(pretzel(&[3, 3, -3]).unwrap());
    pds.push(pretzel(&[9, 3, -3]).unwrap());
    pds.push(pretzel(&[-3, 5, 7]).unwrap());
    for pd in pds {
        let w = wirtinger(&pd);
        let d = alexander_divisors(&w).unwrap();
        let delta = d.divisors.iter().fold(RationalPoly::one(), |acc, f| &acc * f);
        for f in &d.divisors {
            let r = f.reversed();
            assert_eq!(r.scale(&r.lead().recip()), *f);
            assert!(f.eval(&q(1)) != q(0) && f.eval(&q(-1)) != q(0));
        }
        assert_eq!(delta, d.delta);
        // longitude is null-homologous
        let mut total = vec![0i64; w.arc_count];
        for &(g, e) in &w.longitude {
            total[g] += e;
        }
        assert_eq!(total.iter().sum::<i64>(), 0);
    }
}

#[test]
fn trefoil_presentation_shape() {
    let w = wirtinger(&bundled_knot("3_1").unwrap());
    assert_eq!(w.arc_count, 3);
    assert_eq!(w.crossings.len(), 3);
    assert!(w.crossings.iter().all(|c| c.sign == w.crossings[0].sign));
    assert_eq!(w.writhe.abs(), 3);
    let hk = hk_basis(&w, &poly("t^2 - t + 1")).unwrap();
    assert_eq!(hk.dimension(), 2);
}

#[test]
fn lift_independence() {
    for name in ["3_1", "5_2", "5_1", "8_20"] {
        let pd = bundled_knot(name).unwrap();
        let base = qk_form(&pd).unwrap();
        let m = base.module_poly.degree().unwrap();
        for seed in [3, 11, 29] {
            let other = qk_form_with_lift(&pd, Some(&random_a(m, seed))).unwrap();
            assert_eq!(other.grams, base.grams, "{name} seed {seed}");
        }
    }
}

#[test]
fn lift_system_has_full_column_rank() {
    for name in bundled_names() {
        let w = wirtinger(&bundled_knot(&name).unwrap());
        let f = alexander_divisors(&w).unwrap().top().cloned().unwrap();
        let lift = build_tau_lift(&companion_matrix(&f).unwrap(), None).unwrap();
        let solver = LiftSolver::new(&w, &lift).unwrap();
        let a = solver.linear_part();
        assert_eq!(a.rank(), a.cols(), "{name}");
    }
}

#[test]
fn invariant_is_central() {
    for name in ["3_1", "6_2", "8_20"] {
        let w = wirtinger(&bundled_knot(name).unwrap());
        let f = alexander_divisors(&w).unwrap().top().cloned().unwrap();
        let lift = build_tau_lift(&companion_matrix(&f).unwrap(), Some(&random_a(f.degree().unwrap(), 5))).unwrap();
        let hk = hk_basis(&w, &f).unwrap();
        let solver = LiftSolver::new(&w, &lift).unwrap();
        let m = hk.dimension();
        for i in 0..m {
            let v: Vec<Rational> = (0..m).map(|j| q((i as i64 + 2 * j as i64) % 5 - 2)).collect();
            let inv = solver.invariant(&hk.assignment(&v)).unwrap();
            assert_eq!(lift.e().mul_vec(&inv), inv);
        }
    }
}

/// Lifts with free parts `A`, `A'` are conjugate by the central automorphism
/// `(x, α) ↦ (x, α + Dx)` with `DT − ED = A' − A`, so `b' = b + D a` on every
/// arc and the longitude values agree.
#[test]
fn lifts_differ_by_a_central_automorphism() {
    for name in ["3_1", "5_2", "6_3", "8_20"] {
        let w = wirtinger(&bundled_knot(name).unwrap());
        let f = alexander_divisors(&w).unwrap().top().cloned().unwrap();
        let m = f.degree().unwrap();
        let p = m * (m - 1) / 2;
        let t = companion_matrix(&f).unwrap();
        let (l1, l2) = (build_tau_lift(&t, None).unwrap(), build_tau_lift(&t, Some(&random_a(m, 17))).unwrap());
        let delta = l2.a() - l1.a();
        // unknown D[r][c] at index r*m + c
        let mut sys = QMatrix::zeros(p * m, p * m);
        for r in 0..p {
            for c in 0..m {
                let row = r * m + c;
                for k in 0..m {
                    sys[(row, r * m + k)] += &t[(k, c)];
                }
                for k in 0..p {
                    sys[(row, k * m + c)] -= &l1.e()[(r, k)];
                }
            }
        }
        let rhs: Vec<Rational> = (0..p * m).map(|i| delta[(i / m, i % m)].clone()).collect();
        let d = sys.solve_unique(&rhs).unwrap();
        let d = QMatrix::from_rows((0..p).map(|r| d[r * m..(r + 1) * m].to_vec()).collect());
        let hk = hk_basis(&w, &f).unwrap();
        let (s1, s2) = (LiftSolver::new(&w, &l1).unwrap(), LiftSolver::new(&w, &l2).unwrap());
        for i in 0..hk.dimension() {
            let v: Vec<Rational> = (0..hk.dimension()).map(|j| q((i + 2 * j) as i64 % 5 - 2)).collect();
            let fa = hk.assignment(&v);
            let (b1, b2) = (s1.solve(&fa).unwrap(), s2.solve(&fa).unwrap());
            for k in 0..w.arc_count {
                let shift = vec_sub(&d.mul_vec(&fa.values[k]), &d.mul_vec(&fa.values[0]));
                assert_eq!(b2[k], vec_add(&b1[k], &shift), "{name} arc {k}");
            }
            assert_eq!(s1.invariant(&fa).unwrap(), s2.invariant(&fa).unwrap());
        }
    }
}

/// Product law `(g, n)(h, k) = (τ^k(g) h, n + k)`, the opposite of the one
/// used by the pipeline.
fn opposite_mul(u: &(Nil2Element, i64), v: &(Nil2Element, i64), l: &TauLift) -> (Nil2Element, i64) {
    (nil2_mul(&tau_apply(l, &u.0, v.1), &v.0).unwrap(), u.1 + v.1)
}

fn opposite_inv(u: &(Nil2Element, i64), l: &TauLift) -> (Nil2Element, i64) {
    (tau_apply(l, &nil2_inv(&u.0), -u.1), -u.1)
}

/// Closed-form crossing update `x_j^{-1} x_i x_j` for meridian elements:
/// abelian part `t(a_i − a_j) + a_j`, commutator part
/// `η(b_i − b_j) + b_j + η²(a_j ⊓ a_j) + η(λ(−a_j)) + λ(a_i − a_j)`.
fn crossing_formula(l: &TauLift, ai: &[Rational], aj: &[Rational], bi: &[Rational], bj: &[Rational]) -> Nil2Element {
    let e = l.e();
    let d = vec_sub(ai, aj);
    let neg: Vec<Rational> = aj.iter().map(|x| -x).collect();
    let mut c = vec_add(&e.mul_vec(&vec_sub(bi, bj)), bj);
    c = vec_add(&c, &(e * e).mul_vec(&wedge(aj, aj).unwrap()));
    c = vec_add(&c, &e.mul_vec(&l.lambda(&neg)));
    c = vec_add(&c, &l.lambda(&d));
    Nil2Element::new(vec_add(&l.t().mul_vec(&d), aj), c).unwrap()
}

#[test]
fn crossing_formula_oracle() {
    let t = companion_matrix(&poly("t^3 - 2*t^2 + 3*t - 5")).unwrap();
    for seed in [None, Some(4u64), Some(9)] {
        let a = seed.map(|s| random_a(3, s));
        let l = build_tau_lift(&t, a.as_ref()).unwrap();
        let ai = vec![q(1), q(2), q(-1)];
        let aj = vec![q(3), q(-1), q(2)];
        let bi = vec![q(1), q(0), q(4)];
        let bj = vec![q(-2), q(5), q(1)];
        let conj = |ai: &[Rational], aj: &[Rational], bi: &[Rational], bj: &[Rational]| {
            let xi = (Nil2Element::new(ai.to_vec(), bi.to_vec()).unwrap(), 1);
            let xj = (Nil2Element::new(aj.to_vec(), bj.to_vec()).unwrap(), 1);
            opposite_mul(&opposite_mul(&opposite_inv(&xj, &l), &xi, &l), &xj, &l).0
        };
        let z = vec![q(0); 3];
        // abelian part and the dependence on the b-values agree in general
        let full = conj(&ai, &aj, &bi, &bj);
        let formula = crossing_formula(&l, &ai, &aj, &bi, &bj);
        assert_eq!(full.ab, formula.ab);
        let b_part = vec_sub(&full.comm, &conj(&ai, &aj, &z, &z).comm);
        let b_formula = vec_sub(&formula.comm, &crossing_formula(&l, &ai, &aj, &z, &z).comm);
        assert_eq!(b_part, b_formula);
        // the full formula holds when the over-arc has a_j = 0
        assert_eq!(conj(&ai, &z, &bi, &bj), crossing_formula(&l, &ai, &z, &bi, &bj));
    }
}

#[test]
fn trefoil_diagram_independence() {
    let small = qk_form(&bundled_knot("3_1").unwrap()).unwrap();
    // Markov-stabilized closure with four crossings
    let big = qk_form(&braid_closure(3, &[1, 1, 1, 2]).unwrap()).unwrap();
    assert_eq!(big.hk_dimension, 2);
    let s = WitnessSearch::for_dimension(2).with_c(q(1));
    let forward = proportionality_witness(&small.form_set(), &big.form_set(), &s).unwrap();
    let backward = proportionality_witness(&big.form_set(), &small.form_set(), &s).unwrap();
    assert!(forward.is_some() || backward.is_some());
}

#[test]
fn kink_code_is_an_unknot() {
    let r = qk_form(&parse_pd("X(1,1,2,2)").unwrap()).unwrap();
    assert_eq!(r.hk_dimension, 0);
    assert!(r.divisors.is_empty());
}

#[test]
fn twists_are_symplectic_transvections() {
    for genus in 1..=3 {
        let j = symplectic_form(genus);
        for c in 1..=curve_count(genus) {
            let tw = twist_automorphism(genus, c).unwrap();
            assert!(tw.fixes_boundary(), "genus {genus} curve {c}");
            let m = tw.homology();
            assert_eq!(&(&m.transpose() * &j) * &m, j, "genus {genus} curve {c}");
            let inv = signed_twist(genus, c, true).unwrap();
            assert_eq!(tw.compose(&inv).homology(), QMatrix::identity(2 * genus));
        }
    }
}

#[test]
fn mapping_torus_matches_char_poly() {
    let f1 = compose_twists(2, &"2 3 -4 -5 1".parse::<TwistWord>().unwrap()).unwrap();
    let (_, cp) = homology_action(&f1);
    let delta = mapping_torus_alexander(&f1).unwrap();
    assert_eq!(delta, cp);
    let p = mapping_torus_presentation(&f1);
    assert_eq!(p.generators.len(), 5);
    assert_eq!(p.relators.len(), 4);
}

#[test]
fn mapping_class_form_is_conjugation_invariant() {
    let f1 = compose_twists(2, &"2 3 -4 -5 1".parse::<TwistWord>().unwrap()).unwrap();
    let base = qf_form(&f1).unwrap().form_set().summed();
    for c in [1, 2, 4] {
        let g = signed_twist(2, c, false).unwrap();
        let g_inv = signed_twist(2, c, true).unwrap();
        let conj = g.compose(&f1).compose(&g_inv);
        let other = qf_form(&conj).unwrap().form_set().summed();
        let cmp = compare_forms(&base, &other, &WitnessSearch::for_dimension(4)).unwrap();
        assert_eq!(cmp.verdict, Verdict::Equivalent, "conjugated by twist {c}");
    }
}

#[test]
fn degree_four_center_is_canonical() {
    for f in ["t^4 - t^3 + t^2 - t + 1", "t^4 - 3*t^3 + 3*t^2 - 3*t + 1", "t^4 - 3*t^3 + 5*t^2 - 3*t + 1"] {
        let r = full_center_report(&companion_matrix(&poly(f)).unwrap());
        assert_eq!(r.rank, 2);
        assert_eq!(r.formula_rank, Some(2));
        assert_eq!(r.coordinate_basis().len(), 2);
    }
}
