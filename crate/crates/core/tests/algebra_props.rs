mod common;

use std::collections::HashMap;

use common::*;
use nctorus_core::{Complex64, LatticeBox, MultiIndex, ReducedTheta, ThetaMatrix, TorusElement};
use proptest::prelude::*;
use rand::Rng;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[test]
fn associativity_trace_and_antihomomorphism() {
    let mut rng = rng(2024);
    for trial in 0..60 {
        let d = if trial % 2 == 0 { 2 } else { 3 };
        let t = random_theta(&mut rng, d);
        let (nf, ng, nh) = (
            rng.gen_range(0..=2),
            rng.gen_range(0..=2),
            rng.gen_range(0..=2),
        );
        let f = random_element(&mut rng, &t, nf);
        let g = random_element(&mut rng, &t, ng);
        let h = random_element(&mut rng, &t, nh);

        let left = f
            .twisted_convolve(&g)
            .unwrap()
            .twisted_convolve(&h)
            .unwrap();
        let right = f
            .twisted_convolve(&g.twisted_convolve(&h).unwrap())
            .unwrap();
        assert!(left.max_abs_diff(&right).unwrap() <= 1e-10 * scale(&left));

        let fg = f.twisted_convolve(&g).unwrap();
        let gf = g.twisted_convolve(&f).unwrap();
        assert!((fg.trace() - gf.trace()).norm() <= 1e-12 * scale(&fg).max(1.0));

        let lhs = fg.involution();
        let rhs = g.involution().twisted_convolve(&f.involution()).unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * scale(&lhs).max(1.0));
    }
}

#[test]
fn positivity_matches_plancherel() {
    let mut rng = rng(5);
    for _ in 0..30 {
        let t = random_theta(&mut rng, 2);
        let f = random_element(&mut rng, &t, 2);
        let tr = f.involution().twisted_convolve(&f).unwrap().trace();
        let plancherel: f64 = f.coeffs().iter().map(|z| z.norm_sqr()).sum();
        assert!(tr.im.abs() <= 1e-12 * plancherel);
        assert!(tr.re >= 0.0);
        assert!((tr.re - plancherel).abs() <= 1e-12 * plancherel);
        assert!((f.l2_norm() * f.l2_norm() - plancherel).abs() <= 1e-12 * plancherel);
    }
}

#[test]
fn commutation_relation_for_random_theta() {
    let mut rng = rng(77);
    for trial in 0..100 {
        let d = 2 + trial % 3;
        let theta = random_theta_matrix(&mut rng, d);
        let t = theta.reduce();
        let b = lattice(d, 1);
        for k in 0..d {
            for j in 0..d {
                let uk = TorusElement::monomial(t.clone(), &MultiIndex::unit(d, k), b).unwrap();
                let uj = TorusElement::monomial(t.clone(), &MultiIndex::unit(d, j), b).unwrap();
                let lhs = uk.twisted_convolve(&uj).unwrap();
                let phase = Complex64::from_polar(1.0, std::f64::consts::TAU * theta.get(k, j));
                let rhs = uj.twisted_convolve(&uk).unwrap().scaled(phase);
                assert!(
                    lhs.max_abs_diff(&rhs).unwrap() <= 1e-12,
                    "d={d} k={k} j={j}"
                );
            }
        }
    }
}

#[test]
fn monomial_products_pick_up_the_cocycle() {
    let mut rng = rng(9);
    for _ in 0..40 {
        let t = random_theta(&mut rng, 3);
        let b = lattice(3, 2);
        let m = b.point(rng.gen_range(0..b.cardinality()));
        let n = b.point(rng.gen_range(0..b.cardinality()));
        let um = TorusElement::monomial(t.clone(), &m, b).unwrap();
        let un = TorusElement::monomial(t.clone(), &n, b).unwrap();
        let prod = um.twisted_convolve(&un).unwrap();
        let want = t.sigma(&m, &n).unwrap();
        assert!((prod.coeff(&(&m + &n)) - want).norm() <= 1e-15);
        assert!((prod.l2_norm() - 1.0).abs() <= 1e-15);
    }
}

fn plain_convolution(f: &TorusElement, g: &TorusElement) -> HashMap<Vec<i64>, Complex64> {
    let mut out = HashMap::new();
    for (a, fa) in f.lattice().enumerate().iter().zip(f.coeffs()) {
        for (b, gb) in g.lattice().enumerate().iter().zip(g.coeffs()) {
            *out.entry((a + b).entries().to_vec())
                .or_insert(Complex64::new(0.0, 0.0)) += fa * gb;
        }
    }
    out
}

#[test]
fn zero_theta_is_ordinary_convolution() {
    let mut rng = rng(31);
    for d in [2, 3] {
        let t = ThetaMatrix::zero(d).unwrap().reduce();
        let f = random_element(&mut rng, &t, 2);
        let g = random_element(&mut rng, &t, 1);
        let conv = f.twisted_convolve(&g).unwrap();
        let oracle = plain_convolution(&f, &g);
        for p in conv.lattice().enumerate() {
            let want = oracle.get(p.entries()).copied().unwrap_or_default();
            assert!((conv.coeff(&p) - want).norm() <= 1e-13);
        }
    }
}

#[test]
fn involution_examples() {
    let mut rng = rng(12);
    for _ in 0..20 {
        let t = random_theta(&mut rng, 2);
        for n in 0..=2 {
            let b = lattice(2, n);
            for m in b.enumerate() {
                let um = TorusElement::monomial(t.clone(), &m, b).unwrap();
                let p = um.involution().twisted_convolve(&um).unwrap();
                let unit = TorusElement::unit(t.clone());
                assert!(p.max_abs_diff(&unit).unwrap() <= 1e-15);
            }
        }
        let f = random_element(&mut rng, &t, 2);
        assert!(f.involution().involution().max_abs_diff(&f).unwrap() <= 1e-15);
    }
}

#[test]
fn inner_product_two_routes() {
    let mut rng = rng(3);
    for _ in 0..30 {
        let t = random_theta(&mut rng, 2);
        let (nx, ny) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let x = random_element(&mut rng, &t, nx);
        let y = random_element(&mut rng, &t, ny);
        let direct = x.inner_product(&y).unwrap();
        let via_trace = y.involution().twisted_convolve(&x).unwrap().trace();
        assert!((direct - via_trace).norm() <= 1e-12 * (x.l2_norm() * y.l2_norm()).max(1.0));
    }
    let t = random_theta(&mut rng, 2);
    let b = lattice(2, 1);
    for m in b.enumerate() {
        for n in b.enumerate() {
            let um = TorusElement::monomial(t.clone(), &m, b).unwrap();
            let un = TorusElement::monomial(t.clone(), &n, b).unwrap();
            let want = if m == n {
                one()
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert_eq!(um.inner_product(&un).unwrap(), want);
        }
    }
    let z = TorusElement::zero(t, b).unwrap();
    assert_eq!(z.l2_norm(), 0.0);
}

#[test]
fn mult_matrix_reproduces_products() {
    let mut rng = rng(44);
    for n in 1..=3u32 {
        let t = random_theta(&mut rng, 2);
        let x = random_element(&mut rng, &t, 1);
        let eta = random_element(&mut rng, &t, n);
        let b = lattice(2, n);
        let mx = x.mult_matrix(b).unwrap();
        let got = mx.apply(eta.coeffs()).unwrap();
        let want = x.twisted_convolve(&eta).unwrap().resized(b).unwrap();
        for (g, w) in got.iter().zip(want.coeffs()) {
            assert!((g - w).norm() <= 1e-13);
        }
    }
}

#[test]
fn leibniz_rule() {
    let mut rng = rng(8);
    for _ in 0..20 {
        let d = rng.gen_range(2..=3);
        let t = random_theta(&mut rng, d);
        let f = random_element(&mut rng, &t, 2);
        let g = random_element(&mut rng, &t, 1);
        for j in 1..=d {
            let lhs = f
                .twisted_convolve(&g)
                .unwrap()
                .partial_derivative(j)
                .unwrap();
            let rhs = f
                .partial_derivative(j)
                .unwrap()
                .twisted_convolve(&g)
                .unwrap()
                .add(
                    &f.twisted_convolve(&g.partial_derivative(j).unwrap())
                        .unwrap(),
                )
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10 * scale(&lhs).max(1.0));
        }
    }
}

fn element_strategy() -> impl Strategy<Value = (f64, Vec<(f64, f64)>)> {
    (
        -1.0f64..1.0,
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 25),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_property_holds(
        (th, a) in element_strategy(),
        (_, b) in element_strategy(),
    ) {
        let t: ReducedTheta = ThetaMatrix::planar(th).unwrap().reduce();
        let bx = LatticeBox::new(2, 2).unwrap();
        let f = TorusElement::from_coeffs(t.clone(), bx, a.iter().map(|&(r, i)| Complex64::new(r, i)).collect()).unwrap();
        let g = TorusElement::from_coeffs(t, bx, b.iter().map(|&(r, i)| Complex64::new(r, i)).collect()).unwrap();
        let lhs = f.twisted_convolve(&g).unwrap().trace();
        let rhs = g.twisted_convolve(&f).unwrap().trace();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * 25.0);
    }
}
