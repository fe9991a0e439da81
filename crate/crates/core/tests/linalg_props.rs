use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rayon::prelude::*;
use weingarten::exact_linalg::{partition_vector, rank};
use weingarten::{
    gram_matrix, reconstruction_operator, solve_inverse, weingarten_matrix, CategoryId, ColoredWord, ExactScalar,
    RationalMatrix,
};

/// Words whose Weingarten matrices differ: one per length for color-blind categories.
fn words(cat: CategoryId, k: usize) -> Vec<ColoredWord> {
    if cat.is_color_sensitive() {
        ColoredWord::all_of_length(k)
    } else {
        vec![ColoredWord::white(k)]
    }
}

fn cases(max_k: usize, ns: std::ops::RangeInclusive<usize>) -> Vec<(CategoryId, ColoredWord, usize)> {
    let mut out = Vec::new();
    for cat in CategoryId::ALL {
        for k in 0..=max_k {
            for word in words(cat, k) {
                for n in ns.clone() {
                    out.push((cat, word.clone(), n));
                }
            }
        }
    }
    out
}

#[test]
fn gram_is_symmetric_with_power_diagonal() {
    cases(6, 1..=8).into_par_iter().for_each(|(cat, word, n)| {
        let g = gram_matrix(cat, &word, n).unwrap();
        assert!(g.entries.is_symmetric());
        for (i, p) in g.index.iter().enumerate() {
            let expected = ExactScalar::from_integer(BigInt::from(n).pow(p.block_count() as u32));
            assert_eq!(*g.entries.get(i, i), expected, "{cat} {word} N={n} {p}");
        }
    });
}

#[test]
fn weingarten_is_a_reflexive_generalized_inverse() {
    cases(6, 2..=8).into_par_iter().for_each(|(cat, word, n)| {
        let w = weingarten_matrix(gram_matrix(cat, &word, n).unwrap()).unwrap();
        let g = &w.gram.entries;
        assert_eq!(w.basis.len(), rank(g), "{cat} {word} N={n}");
        assert_eq!(g.mul(&w.entries).unwrap().mul(g).unwrap(), *g, "GWG {cat} {word} N={n}");
        assert_eq!(w.entries.mul(g).unwrap().mul(&w.entries).unwrap(), w.entries, "WGW {cat} {word} N={n}");
        if n >= word.len() {
            assert!(w.is_full_rank(), "{cat} {word} N={n} should be invertible");
        }
    });
}

/// A rational matrix as integers over one common denominator.
fn scaled(m: &RationalMatrix) -> (Vec<i128>, i128) {
    let mut den = BigInt::from(1);
    for r in 0..m.rows() {
        for x in m.row(r) {
            den = num_integer::Integer::lcm(&den, x.denom());
        }
    }
    let num = (0..m.rows())
        .flat_map(|r| m.row(r).iter())
        .map(|x| (x.numer() * (&den / x.denom())).to_i128().unwrap())
        .collect();
    (num, den.to_i128().unwrap())
}

#[test]
fn reconstruction_is_the_projection_onto_partition_vectors() {
    cases(4, 2..=4).into_par_iter().for_each(|(cat, word, n)| {
        let w = weingarten_matrix(gram_matrix(cat, &word, n).unwrap()).unwrap();
        let p = reconstruction_operator(&w);
        let dim = p.rows();
        assert_eq!(p, p.transpose(), "self-adjoint {cat} {word} N={n}");
        let (num, den) = scaled(&p);
        // (num / den)^2 = num / den  <=>  num · num = den · num
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = 0i128;
                for t in 0..dim {
                    let a = num[i * dim + t];
                    if a != 0 {
                        acc += a * num[t * dim + j];
                    }
                }
                assert_eq!(acc, den * num[i * dim + j], "idempotent {cat} {word} N={n} at ({i},{j})");
            }
        }
        for rho in w.index() {
            let xi = partition_vector(rho, n);
            for i in 0..dim {
                let acc: i128 = (0..dim).map(|t| num[i * dim + t] * i128::from(xi[t])).sum();
                assert_eq!(acc, den * i128::from(xi[i]), "P ξ = ξ for {rho}, {cat} {word} N={n}");
            }
        }
    });
}

#[test]
fn reconstruction_is_zero_without_partitions() {
    let w = weingarten_matrix(gram_matrix(CategoryId::U, &"oo".parse().unwrap(), 3).unwrap()).unwrap();
    let p = reconstruction_operator(&w);
    assert!((0..p.rows()).all(|r| p.row(r).iter().all(Zero::is_zero)));
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..10, n), n))
}

proptest! {
    #[test]
    fn inverse_times_matrix_is_identity(rows in small_matrix()) {
        let m = RationalMatrix::from_i64(&rows);
        let n = m.rows();
        match solve_inverse(&m) {
            Ok(inv) => {
                prop_assert_eq!(m.mul(&inv).unwrap(), RationalMatrix::identity(n));
                prop_assert_eq!(inv.mul(&m).unwrap(), RationalMatrix::identity(n));
            }
            Err(_) => prop_assert!(rank(&m) < n),
        }
    }
}
