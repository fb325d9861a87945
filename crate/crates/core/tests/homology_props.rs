use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use surfcob::homology::{
    class_of_cycle, homology_of_complex, smith, smith_normal_form, AbelianGroupPresentation, ChainComplex,
    F2Matrix, IntMatrix, Ring, F2,
};

fn int_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::from_i64_rows(&v.chunks(c).map(<[i64]>::to_vec).collect::<Vec<_>>()).unwrap()
        })
    })
}

fn complex(d1: IntMatrix, d2: IntMatrix) -> ChainComplex {
    ChainComplex::new(Ring::Integers, BTreeMap::from([(1, d1), (2, d2)])).unwrap()
}

fn even_count(g: &AbelianGroupPresentation) -> usize {
    g.even_factor_count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn snf_factorization(a in int_matrix(6, 9)) {
        let (u, d, v) = smith_normal_form(&a);
        prop_assert_eq!(u.mul(&d).unwrap().mul(&v).unwrap(), a.clone());
        prop_assert_eq!(u.determinant().unwrap().abs(), BigInt::one());
        prop_assert_eq!(v.determinant().unwrap().abs(), BigInt::one());
        let (r, c) = d.shape();
        let mut diag = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert!(d[(i, j)].is_zero());
                } else {
                    prop_assert!(!d[(i, j)].is_negative());
                    diag.push(d[(i, j)].clone());
                }
            }
        }
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
    }

    #[test]
    fn snf_over_f2(a in int_matrix(6, 1)) {
        let m: F2Matrix = a.reduce_mod2();
        let s = smith(&m);
        prop_assert_eq!(s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), m.clone());
        prop_assert_eq!(s.u_inv.mul(&m).unwrap().mul(&s.v_inv).unwrap(), s.d.clone());
        let ones = s.diagonal().iter().filter(|&&x| x == F2::ONE).count();
        prop_assert_eq!(ones, s.rank);
    }

    #[test]
    fn euler_characteristic_and_universal_coefficients(d2 in int_matrix(5, 6), c0 in 1usize..4) {
        let c1 = d2.rows();
        let c = complex(IntMatrix::zeros(c0, c1), d2.clone());
        let h: Vec<AbelianGroupPresentation> = (0..=2).map(|n| homology_of_complex(&c, n).unwrap()).collect();
        let chi_chains = c0 as i64 - c1 as i64 + d2.cols() as i64;
        let chi_h = h[0].free_rank() as i64 - h[1].free_rank() as i64 + h[2].free_rank() as i64;
        prop_assert_eq!(chi_chains, chi_h);

        let m = c.mod2();
        for n in 0..=2usize {
            let hf = homology_of_complex(&m, n as i64).unwrap();
            let below = if n == 0 { 0 } else { even_count(&h[n - 1]) };
            prop_assert_eq!(hf.f2_dim().unwrap(), h[n].free_rank() + even_count(&h[n]) + below);
        }
    }

    #[test]
    fn boundaries_have_zero_class(d2 in int_matrix(4, 5), k in 0usize..4, t in -3i64..=3) {
        let c1 = d2.rows();
        let c = complex(IntMatrix::zeros(1, c1), d2.clone());
        let col = k % d2.cols();
        let z: Vec<BigInt> = (0..c1).map(|i| &d2[(i, col)] * BigInt::from(t)).collect();
        prop_assert!(class_of_cycle(&c, &z, 1).unwrap().is_zero());
    }
}

fn rows(v: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64_rows(&v.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn cellular_surfaces() {
    let torus = complex(rows(&[&[0, 0]]), rows(&[&[0], &[0]]));
    assert_eq!(homology_of_complex(&torus, 1).unwrap(), AbelianGroupPresentation::free(2));
    assert_eq!(homology_of_complex(&torus, 2).unwrap(), AbelianGroupPresentation::free(1));

    let klein = complex(rows(&[&[0, 0]]), rows(&[&[0], &[2]]));
    assert_eq!(
        homology_of_complex(&klein, 1).unwrap(),
        AbelianGroupPresentation::from_i64(1, &[2]).unwrap()
    );
    assert!(homology_of_complex(&klein, 2).unwrap().is_trivial());
    assert_eq!(homology_of_complex(&klein.mod2(), 1).unwrap().f2_dim(), Some(2));
    assert_eq!(homology_of_complex(&klein.mod2(), 2).unwrap().f2_dim(), Some(1));

    let rp2 = complex(rows(&[&[0]]), rows(&[&[2]]));
    assert_eq!(
        homology_of_complex(&rp2, 1).unwrap(),
        AbelianGroupPresentation::from_i64(0, &[2]).unwrap()
    );
    let gen = class_of_cycle(&rp2, &[BigInt::one()], 1).unwrap();
    assert!(!gen.is_zero());
    assert!(gen.scale(2).is_zero());
}
