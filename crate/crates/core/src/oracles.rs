//! Ground truth that shares no code with the Weingarten engine: exhaustive
//! sums over `S_N`, Monte Carlo Haar sampling for `O_N` and `U_N`, and
//! closed forms / recurrences for partition counts.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::binomial;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::ExactScalar;
use crate::integrator::{IndexSet, MomentQuery};
use crate::partitions::{CategoryId, Color};

/// Largest `N` accepted by the exhaustive `S_N` oracles.
pub const MAX_EXHAUSTIVE_N: usize = 8;

/// Calls `f` with every permutation of `0..n` (as the image list `σ(0..n)`).
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        f(&perm);
        // next permutation in lexicographic order
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

fn check_exhaustive(n: usize) -> Result<()> {
    if n == 0 || n > MAX_EXHAUSTIVE_N {
        return Err(Error::InvalidArgument(format!(
            "exhaustive S_N oracle needs 1 <= N <= {MAX_EXHAUSTIVE_N}, got {n}"
        )));
    }
    Ok(())
}

fn check_range(indices: &[usize], n: usize) -> Result<()> {
    for &index in indices {
        if index == 0 || index > n {
            return Err(Error::IndexOutOfRange { index, bound: n });
        }
    }
    Ok(())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `(1/N!) Σ_σ Π_r u_{i_r j_r}(σ)` where `u(σ)` is the permutation matrix
/// with `u_{ij} = 1` iff `σ(j) = i`.
pub fn sn_exhaustive_moment(n: usize, q: &MomentQuery) -> Result<ExactScalar> {
    check_exhaustive(n)?;
    check_range(&q.rows, n)?;
    check_range(&q.cols, n)?;
    let mut hits = 0u64;
    for_each_permutation(n, |perm| {
        if q.rows.iter().zip(&q.cols).all(|(&i, &j)| perm[j - 1] == i - 1) {
            hits += 1;
        }
    });
    Ok(ExactScalar::new(hits.into(), factorial(n)))
}

/// `(1/N!) Σ_σ Π_r h_{i_r}(σ)` with `h_i = Σ_{b ∈ I} u_{ib}(σ)`.
pub fn sn_exhaustive_space_moment(n: usize, index: &IndexSet, indices: &[usize]) -> Result<ExactScalar> {
    check_exhaustive(n)?;
    check_range(indices, n)?;
    check_range(index.members(), n)?;
    let mut total = 0u64;
    for_each_permutation(n, |perm| {
        let mut term = 1u64;
        for &i in indices {
            let h = index.members().iter().filter(|&&b| perm[b - 1] == i - 1).count() as u64;
            term *= h;
            if term == 0 {
                break;
            }
        }
        total += term;
    });
    Ok(ExactScalar::new(total.into(), factorial(n)))
}

/// Result of a Monte Carlo estimate; `estimate` is the real part of the sample mean.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    pub estimate: f64,
    pub standard_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl SampleReport {
    /// `|estimate - exact| <= z · standard_error`.
    pub fn brackets(&self, exact: f64, z: f64) -> bool {
        (self.estimate - exact).abs() <= z * self.standard_error
    }
}

/// Minimum number of samples accepted by [`haar_mc_moment`].
pub const MIN_SAMPLES: u64 = 10_000;

/// Samples per block; block `b` draws from stream `b` of the seeded generator.
const BLOCK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig { samples, seed }
    }
}

/// i.i.d. standard Gaussian matrix: real for `O`, complex (`E|z|^2 = 1`) otherwise.
pub(crate) fn gaussian_matrix(category: CategoryId, n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    match category {
        CategoryId::O => DMatrix::from_fn(n, n, |_, _| {
            let x: f64 = StandardNormal.sample(rng);
            Complex64::new(x, 0.0)
        }),
        _ => DMatrix::from_fn(n, n, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }),
    }
}

/// `Q` from `Z = QR`, with column `j` multiplied by the phase of `R_jj` so that
/// `R` has a positive diagonal. Only that choice of `Q` is Haar distributed;
/// the correction is applied even though the current backend already
/// returns a positive diagonal.
pub(crate) fn orthonormalize(z: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = z.nrows();
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { Complex64::one() } else { d / d.norm() };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar sample from `O_N` or `U_N` by orthonormalizing a Gaussian matrix.
pub fn haar_sample(category: CategoryId, n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    orthonormalize(gaussian_matrix(category, n, rng))
}

/// Kahan-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

fn check_mc(category: CategoryId, n: usize, queries: &[MomentQuery], cfg: &McConfig) -> Result<()> {
    if !matches!(category, CategoryId::O | CategoryId::U) {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo sampling needs group O or U, got {category}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {}",
            cfg.samples
        )));
    }
    for q in queries {
        check_range(&q.rows, n)?;
        check_range(&q.cols, n)?;
    }
    Ok(())
}

fn monomial(u: &DMatrix<Complex64>, q: &MomentQuery) -> Complex64 {
    let mut v = Complex64::one();
    for ((c, &i), &j) in q.word.colors().iter().zip(&q.rows).zip(&q.cols) {
        let x = u[(i - 1, j - 1)];
        v *= match c {
            Color::White => x,
            Color::Black => x.conj(),
        };
    }
    v
}

/// Estimates every query from one shared stream of Haar samples.
///
/// Results depend only on `(seed, samples)`: blocks have a fixed size, each
/// block seeds its own stream, and block sums are combined in block order.
pub fn haar_mc_batch(
    category: CategoryId,
    n: usize,
    queries: &[MomentQuery],
    cfg: &McConfig,
) -> Result<Vec<SampleReport>> {
    check_mc(category, n, queries, cfg)?;
    let blocks = cfg.samples.div_ceil(BLOCK);
    let partials: Vec<Vec<(Kahan, Kahan)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(b);
            let count = BLOCK.min(cfg.samples - b * BLOCK);
            let mut acc = vec![(Kahan::default(), Kahan::default()); queries.len()];
            for _ in 0..count {
                let u = haar_sample(category, n, &mut rng);
                for (a, q) in acc.iter_mut().zip(queries) {
                    let x = monomial(&u, q).re;
                    a.0.add(x);
                    a.1.add(x * x);
                }
            }
            acc
        })
        .collect();

    let total = cfg.samples as f64;
    Ok((0..queries.len())
        .map(|qi| {
            let (mut s1, mut s2) = (Kahan::default(), Kahan::default());
            for block in &partials {
                s1.add(block[qi].0.sum);
                s2.add(block[qi].1.sum);
            }
            let mean = s1.sum / total;
            let var = ((s2.sum - total * mean * mean) / (total - 1.0)).max(0.0);
            SampleReport {
                estimate: mean,
                standard_error: (var / total).sqrt(),
                samples: cfg.samples,
                seed: cfg.seed,
            }
        })
        .collect())
}

pub fn haar_mc_moment(category: CategoryId, n: usize, q: &MomentQuery, samples: u64, seed: u64) -> Result<SampleReport> {
    let reports = haar_mc_batch(category, n, std::slice::from_ref(q), &McConfig::new(samples, seed))?;
    Ok(reports.into_iter().next().unwrap())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountingOracle {
    /// Bell number `B(k)` via the Bell triangle.
    Bell(usize),
    /// Catalan number `C(m)` via `binom(2m, m) / (m + 1)`.
    Catalan(usize),
    /// `(2m - 1)!!`, the number of pairings of `2m` points.
    DoubleFactorial(usize),
    /// `k`-th moment of Poisson(`t`) via `m_{j+1} = t Σ_i binom(j, i) m_i`.
    PoissonRecurrence { t: ExactScalar, k: usize },
}

impl CountingOracle {
    pub fn evaluate(&self) -> ExactScalar {
        match self {
            CountingOracle::Bell(k) => ExactScalar::from_integer(bell(*k)),
            CountingOracle::Catalan(m) => ExactScalar::from_integer(catalan(*m)),
            CountingOracle::DoubleFactorial(m) => ExactScalar::from_integer(double_factorial(*m)),
            CountingOracle::PoissonRecurrence { t, k } => poisson_moments(t, *k).pop().unwrap(),
        }
    }
}

pub fn counting_oracle(oracle: &CountingOracle) -> ExactScalar {
    oracle.evaluate()
}

pub fn bell(k: usize) -> BigInt {
    let mut row = vec![BigInt::one()];
    for _ in 0..k {
        let mut next = vec![row.last().unwrap().clone()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0].clone()
}

pub fn catalan(m: usize) -> BigInt {
    binomial(BigInt::from(2 * m), BigInt::from(m)) / BigInt::from(m + 1)
}

/// `(2m - 1)!!`; `1` for `m = 0`.
pub fn double_factorial(m: usize) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * (2 * i - 1))
}

/// Poisson(`t`) moments `m_0, ..., m_k`.
pub fn poisson_moments(t: &ExactScalar, k: usize) -> Vec<ExactScalar> {
    let mut m = vec![ExactScalar::one()];
    for j in 0..k {
        let mut s = ExactScalar::zero();
        for (i, mi) in m.iter().enumerate() {
            s += mi * ExactScalar::from_integer(binomial(BigInt::from(j), BigInt::from(i)));
        }
        m.push(t * s);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::ColoredWord;

    fn q(word: &str, rows: &[usize], cols: &[usize]) -> MomentQuery {
        MomentQuery::new(word.parse::<ColoredWord>().unwrap(), rows.to_vec(), cols.to_vec()).unwrap()
    }

    fn r(n: i64, d: i64) -> ExactScalar {
        ExactScalar::new(n.into(), d.into())
    }

    #[test]
    fn permutations_are_enumerated_once() {
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(4, |p| {
            assert!(seen.insert(p.to_vec()));
        });
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn sn_examples() {
        assert_eq!(sn_exhaustive_moment(3, &q("o", &[1], &[1])).unwrap(), r(1, 3));
        assert_eq!(sn_exhaustive_moment(4, &q("oo", &[1, 2], &[1, 2])).unwrap(), r(1, 12));
        assert_eq!(sn_exhaustive_moment(3, &q("o", &[1], &[2])).unwrap(), r(1, 3));
        assert_eq!(sn_exhaustive_moment(3, &q("", &[], &[])).unwrap(), r(1, 1));
        assert!(sn_exhaustive_moment(9, &q("o", &[1], &[1])).is_err());
        assert!(sn_exhaustive_moment(3, &q("o", &[4], &[1])).is_err());
    }

    #[test]
    fn sn_space_examples() {
        let i1 = IndexSet::new(vec![1]).unwrap();
        let all = IndexSet::range(3).unwrap();
        assert_eq!(sn_exhaustive_space_moment(3, &i1, &[1]).unwrap(), r(1, 3));
        assert_eq!(sn_exhaustive_space_moment(3, &all, &[1]).unwrap(), r(1, 1));
        let i12 = IndexSet::range(2).unwrap();
        assert_eq!(sn_exhaustive_space_moment(4, &i12, &[1, 1]).unwrap(), r(1, 2));
    }

    #[test]
    fn counting_examples() {
        assert_eq!(counting_oracle(&CountingOracle::Bell(4)), r(15, 1));
        assert_eq!(counting_oracle(&CountingOracle::Catalan(4)), r(14, 1));
        assert_eq!(counting_oracle(&CountingOracle::DoubleFactorial(3)), r(15, 1));
        assert_eq!(
            counting_oracle(&CountingOracle::PoissonRecurrence { t: r(1, 1), k: 4 }),
            r(15, 1)
        );
        let bells: Vec<BigInt> = (0..8).map(bell).collect();
        assert_eq!(bells, [1, 1, 2, 5, 15, 52, 203, 877].map(BigInt::from));
        // Poisson(t): m_2 = t + t^2
        assert_eq!(poisson_moments(&r(1, 2), 2)[2], r(3, 4));
    }

    #[test]
    fn samples_are_orthogonal_or_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for cat in [CategoryId::O, CategoryId::U] {
            let u = haar_sample(cat, 4, &mut rng);
            let prod = u.adjoint() * &u;
            for i in 0..4 {
                for j in 0..4 {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((prod[(i, j)] - Complex64::new(target, 0.0)).norm() < 1e-12);
                }
            }
            if cat == CategoryId::O {
                assert!(u.iter().all(|x| x.im == 0.0));
            }
        }
    }

    #[test]
    fn batch_is_deterministic_and_matches_single() {
        let queries = [q("oo", &[1, 1], &[1, 1]), q("ob", &[1, 2], &[1, 2])];
        let cfg = McConfig::new(20_000, 3);
        let a = haar_mc_batch(CategoryId::U, 3, &queries, &cfg).unwrap();
        let b = haar_mc_batch(CategoryId::U, 3, &queries, &cfg).unwrap();
        assert_eq!(a, b);
        let single = haar_mc_moment(CategoryId::U, 3, &queries[1], 20_000, 3).unwrap();
        assert_eq!(single, a[1]);
    }

    #[test]
    fn mc_errors() {
        let query = q("oo", &[1, 1], &[1, 1]);
        assert!(haar_mc_moment(CategoryId::OPlus, 3, &query, 20_000, 1).is_err());
        assert!(haar_mc_moment(CategoryId::O, 3, &query, 10, 1).is_err());
        assert!(haar_mc_moment(CategoryId::O, 3, &q("o", &[4], &[1]), 20_000, 1).is_err());
    }

    #[test]
    fn phase_correction_is_required() {
        // Householder factorizations in the LAPACK convention leave R_11 with
        // the phase of -z_11, so their first column is q_11 = -|z_11| / |z_1|.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = 50_000;
        for cat in [CategoryId::O, CategoryId::U] {
            let (mut good, mut raw) = (Kahan::default(), Kahan::default());
            for _ in 0..samples {
                let z = gaussian_matrix(cat, 3, &mut rng);
                let z11 = z[(0, 0)];
                let q = orthonormalize(z.clone());
                let r = q.adjoint() * &z;
                for j in 0..3 {
                    assert!(r[(j, j)].re > 0.0 && r[(j, j)].im.abs() < 1e-9);
                }
                good.add(q[(0, 0)].re);
                raw.add((-q[(0, 0)] * z11.conj() / z11.norm()).re);
            }
            let (good, raw) = (good.sum / samples as f64, raw.sum / samples as f64);
            // sd(u_11) <= 1, so 4 s.e. is below 0.02
            assert!(good.abs() < 0.02, "{cat}: {good}");
            assert!(raw < -0.3, "{cat}: {raw}");
        }
    }
}
