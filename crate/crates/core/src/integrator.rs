//! Haar integrals of colored monomials over easy quantum groups, their
//! products, and affine homogeneous spaces.
//!
//! Space moments are reported for the rescaled coordinates `h_i = √M x_i`,
//! which keeps every value rational; see [`Unscaled`] for the conversion back.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::exact_linalg::{int, pow, ExactScalar, ScaledMatrix, WeingartenCache, WeingartenMatrix};
use crate::partitions::{enumerate_partitions, CategoryId, ColoredWord, SetPartition, UnionFind};
use crate::spaces::SpaceSpec;

/// An easy quantum group: a category together with the matrix size `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub category: CategoryId,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(category: CategoryId, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("group dimension N must be at least 1".into()));
        }
        Ok(GroupSpec { category, n })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.category, self.n)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// `CATEGORY:N`, e.g. `O+:4`.
    fn from_str(s: &str) -> Result<Self> {
        let (cat, n) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected CATEGORY:N, got `{s}`")))?;
        let n = n
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad dimension in `{s}`: {e}")))?;
        GroupSpec::new(cat.parse()?, n)
    }
}

/// `∫ u_{i_1 j_1}^{e_1} ... u_{i_k j_k}^{e_k}` with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentQuery {
    pub word: ColoredWord,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MomentQuery {
    pub fn new(word: ColoredWord, rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        for v in [&rows, &cols] {
            if v.len() != word.len() {
                return Err(Error::LengthMismatch {
                    expected: word.len(),
                    actual: v.len(),
                });
            }
        }
        Ok(MomentQuery { word, rows, cols })
    }

    fn check_bounds(&self, n: usize) -> Result<()> {
        check_indices(self.rows.iter().chain(&self.cols).copied(), n)
    }
}

pub(crate) fn check_indices(indices: impl IntoIterator<Item = usize>, bound: usize) -> Result<()> {
    for index in indices {
        if index == 0 || index > bound {
            return Err(Error::IndexOutOfRange { index, bound });
        }
    }
    Ok(())
}

/// A nonempty, sorted, duplicate-free set of 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::InvalidArgument("index set must be nonempty".into()));
        }
        if members[0] == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                bound: usize::MAX,
            });
        }
        Ok(IndexSet(members))
    }

    /// `{1, ..., m}`.
    pub fn range(m: usize) -> Result<Self> {
        Self::new((1..=m).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    /// `M = |I|`.
    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn max(&self) -> usize {
        *self.0.last().unwrap()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for IndexSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IndexSet::new(parse_index_list(s)?)
    }
}

pub(crate) fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad index `{t}`: {e}")))
        })
        .collect()
}

fn fitting(w: &WeingartenMatrix, indices: &[usize]) -> Vec<usize> {
    w.basis
        .iter()
        .copied()
        .filter(|&b| w.index()[b].fits(indices))
        .collect()
}

/// Weingarten formula: `Σ_{π,σ} δ_π(rows) δ_σ(cols) W(π, σ)`.
pub fn group_moment(cache: &WeingartenCache, group: &GroupSpec, q: &MomentQuery) -> Result<ExactScalar> {
    q.check_bounds(group.n)?;
    let w = cache.get(group.category, &q.word, group.n)?;
    let rows = fitting(&w, &q.rows);
    let cols = fitting(&w, &q.cols);
    let mut total = ExactScalar::zero();
    for &p in &rows {
        for &s in &cols {
            total += w.get(p, s);
        }
    }
    Ok(total)
}

/// Haar integral over `G_1 × ... × G_s` of the monomial whose factor-`r`
/// coordinates are given by `queries[r]`; all queries share one word.
///
/// Evaluated as the sum over partition tuples of products of factor
/// Weingarten entries.
pub fn product_group_moment(
    cache: &WeingartenCache,
    groups: &[GroupSpec],
    queries: &[MomentQuery],
) -> Result<ExactScalar> {
    if groups.len() != queries.len() {
        return Err(Error::LengthMismatch {
            expected: groups.len(),
            actual: queries.len(),
        });
    }
    let Some(first) = queries.first() else {
        return Err(Error::InvalidArgument("product of zero groups".into()));
    };
    if queries.iter().any(|q| q.word != first.word) {
        return Err(Error::WordMismatch);
    }
    let mut pairs: Vec<Vec<ExactScalar>> = Vec::with_capacity(groups.len());
    for (g, q) in groups.iter().zip(queries) {
        q.check_bounds(g.n)?;
        let w = cache.get(g.category, &q.word, g.n)?;
        let rows = fitting(&w, &q.rows);
        let cols = fitting(&w, &q.cols);
        pairs.push(
            rows.iter()
                .flat_map(|&p| cols.iter().map(move |&s| (p, s)))
                .map(|(p, s)| w.get(p, s).clone())
                .collect(),
        );
    }
    let mut total = ExactScalar::zero();
    for_each_tuple(&pairs.iter().map(Vec::len).collect::<Vec<_>>(), |tuple| {
        let mut term = int(1);
        for (r, &t) in tuple.iter().enumerate() {
            term *= &pairs[r][t];
        }
        total += term;
    });
    Ok(total)
}

/// Calls `f` on every tuple of the mixed-radix counter with the given sizes.
pub(crate) fn for_each_tuple(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut tuple = vec![0; sizes.len()];
    loop {
        f(&tuple);
        let mut r = sizes.len();
        loop {
            if r == 0 {
                return;
            }
            r -= 1;
            tuple[r] += 1;
            if tuple[r] < sizes[r] {
                break;
            }
            tuple[r] = 0;
        }
    }
}

/// Rescaled `K_I(σ)`: `M^{|σ|} = Σ_{b ∈ I^k} δ_σ(b)` for every `σ ∈ D(word)`.
pub fn k_vector(category: CategoryId, word: &ColoredWord, m: usize) -> Result<Vec<(SetPartition, ExactScalar)>> {
    if m == 0 {
        return Err(Error::InvalidArgument("index set size M must be at least 1".into()));
    }
    Ok(enumerate_partitions(category, word)
        .into_iter()
        .map(|s| {
            let v = int(pow(m, s.block_count()));
            (s, v)
        })
        .collect())
}

/// Rescaled moment of a space together with the factor needed to undo the rescaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unscaled {
    /// Moment in rescaled coordinates.
    pub coefficient: ExactScalar,
    pub m: usize,
    pub k: usize,
}

impl Unscaled {
    /// `coefficient · M^{-k/2}` rendered as a float; never the source of truth.
    pub fn to_f64(&self) -> f64 {
        let c = self.coefficient.to_f64().unwrap_or(f64::NAN);
        c * (self.m as f64).powf(-(self.k as f64) / 2.0)
    }
}

/// Precomputed `v(π⃗) = Σ_{σ⃗} Π_r W_r(π_r, σ_r) · M^{|σ_1 ∨ ... ∨ σ_s|}` over
/// basis tuples, stored as integers over one common denominator.
#[derive(Debug)]
pub struct SpaceKernel {
    pub(crate) factors: Vec<Arc<WeingartenMatrix>>,
    pub(crate) shape: Vec<usize>,
    pub(crate) num: Vec<BigInt>,
    pub(crate) den: BigInt,
}

impl SpaceKernel {
    fn build(cache: &WeingartenCache, space: &SpaceSpec, word: &ColoredWord) -> Result<Self> {
        let factors = space
            .factors()
            .iter()
            .map(|g| cache.get(g.category, word, g.n))
            .collect::<Result<Vec<_>>>()?;
        let shape: Vec<usize> = factors.iter().map(|w| w.basis.len()).collect();
        let total: usize = shape.iter().product();
        let m = space.m();

        // K(σ⃗) = M^{|σ_1 ∨ ... ∨ σ_s|}
        let mut tensor = Vec::with_capacity(total);
        for_each_tuple(&shape, |tuple| {
            let parts = tuple
                .iter()
                .zip(&factors)
                .map(|(&t, w)| &w.index()[w.basis[t]]);
            let blocks = SetPartition::join_all(parts).map_or(0, |p| p.block_count());
            tensor.push(pow(m, blocks));
        });

        let mut den = BigInt::from(1);
        for (axis, w) in factors.iter().enumerate() {
            let wm = ScaledMatrix::from_rational(&w.entries.restrict(&w.basis));
            tensor = contract_axis(&tensor, &shape, axis, &wm);
            den *= &wm.den;
        }
        Ok(SpaceKernel {
            factors,
            shape,
            num: tensor,
            den,
        })
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    /// Basis partitions of factor `r`, in kernel axis order.
    pub(crate) fn axis_partitions(&self, r: usize) -> impl Iterator<Item = &SetPartition> {
        let w = &self.factors[r];
        w.basis.iter().map(move |&b| &w.index()[b])
    }

    /// `Σ_{π⃗} Π_r weights_r[π_r] · v(π⃗)` for per-axis integer weights.
    pub(crate) fn weighted_sum(&self, weights: &[Vec<BigInt>]) -> ExactScalar {
        let mut acc = BigInt::zero();
        let support: Vec<Vec<usize>> = weights
            .iter()
            .map(|w| (0..w.len()).filter(|&i| !w[i].is_zero()).collect())
            .collect();
        let strides = strides(&self.shape);
        for_each_tuple(&support.iter().map(Vec::len).collect::<Vec<_>>(), |tuple| {
            let mut flat = 0;
            let mut coeff = BigInt::from(1);
            for (r, &t) in tuple.iter().enumerate() {
                let p = support[r][t];
                flat += p * strides[r];
                coeff *= &weights[r][p];
            }
            let v = &self.num[flat];
            if !v.is_zero() {
                acc += coeff * v;
            }
        });
        BigRational::new(acc, self.den.clone())
    }

    /// `Σ_{π⃗} F(π⃗) · v(π⃗)` where `F` depends on the whole tuple.
    pub(crate) fn tuple_sum(&self, mut weight: impl FnMut(&[&SetPartition]) -> BigInt) -> ExactScalar {
        let mut acc = BigInt::zero();
        let mut flat = 0;
        let axes: Vec<Vec<&SetPartition>> =
            (0..self.factors.len()).map(|r| self.axis_partitions(r).collect()).collect();
        let mut parts: Vec<&SetPartition> = Vec::with_capacity(axes.len());
        for_each_tuple(&self.shape, |tuple| {
            let v = &self.num[flat];
            flat += 1;
            if v.is_zero() {
                return;
            }
            parts.clear();
            parts.extend(tuple.iter().enumerate().map(|(r, &t)| axes[r][t]));
            acc += weight(&parts) * v;
        });
        BigRational::new(acc, self.den.clone())
    }
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for r in (0..shape.len().saturating_sub(1)).rev() {
        strides[r] = strides[r + 1] * shape[r + 1];
    }
    strides
}

/// `out[.., p, ..] = Σ_q W[p][q] · t[.., q, ..]` along one axis (integer numerators only).
fn contract_axis(t: &[BigInt], shape: &[usize], axis: usize, w: &ScaledMatrix) -> Vec<BigInt> {
    let strides = strides(shape);
    let stride = strides[axis];
    let size = shape[axis];
    let mut out = vec![BigInt::zero(); t.len()];
    for (flat, value) in t.iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        let q = (flat / stride) % size;
        let base = flat - q * stride;
        for p in 0..size {
            let c = &w.num[p * size + q];
            if !c.is_zero() {
                out[base + p * stride] += c * value;
            }
        }
    }
    out
}

/// A coordinate of a space: one 1-based index per factor.
pub type Coordinate = Vec<usize>;

/// Moment evaluator for one space, memoizing one kernel per colored word.
pub struct SpaceIntegrator<'a> {
    cache: &'a WeingartenCache,
    space: SpaceSpec,
    kernels: RwLock<HashMap<ColoredWord, Arc<SpaceKernel>>>,
}

impl<'a> SpaceIntegrator<'a> {
    pub fn new(cache: &'a WeingartenCache, space: SpaceSpec) -> Self {
        SpaceIntegrator {
            cache,
            space,
            kernels: RwLock::default(),
        }
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn cache(&self) -> &WeingartenCache {
        self.cache
    }

    pub fn kernel(&self, word: &ColoredWord) -> Result<Arc<SpaceKernel>> {
        let key = self.kernel_key(word);
        if let Some(k) = self.kernels.read().get(&key) {
            return Ok(Arc::clone(k));
        }
        let built = Arc::new(SpaceKernel::build(self.cache, &self.space, word)?);
        Ok(Arc::clone(self.kernels.write().entry(key).or_insert(built)))
    }

    fn kernel_key(&self, word: &ColoredWord) -> ColoredWord {
        if self.space.factors().iter().any(|g| g.category.is_color_sensitive()) {
            word.clone()
        } else {
            ColoredWord::white(word.len())
        }
    }

    pub(crate) fn check_coordinates(&self, word: &ColoredWord, indices: &[Coordinate]) -> Result<()> {
        if indices.len() != word.len() {
            return Err(Error::LengthMismatch {
                expected: word.len(),
                actual: indices.len(),
            });
        }
        let ranges = self.space.coordinate_ranges();
        for c in indices {
            if c.len() != ranges.len() {
                return Err(Error::InvalidSpace(format!(
                    "coordinates of this space are {}-tuples, got a {}-tuple",
                    ranges.len(),
                    c.len()
                )));
            }
            for (&i, &bound) in c.iter().zip(&ranges) {
                check_indices([i], bound)?;
            }
        }
        Ok(())
    }

    /// Rescaled moment `∫_X h_{i_1}^{e_1} ... h_{i_k}^{e_k}`.
    pub fn moment(&self, word: &ColoredWord, indices: &[Coordinate]) -> Result<ExactScalar> {
        self.check_coordinates(word, indices)?;
        let kernel = self.kernel(word)?;
        let weights: Vec<Vec<BigInt>> = (0..kernel.factors.len())
            .map(|r| {
                let component: Vec<usize> = indices.iter().map(|c| c[r]).collect();
                kernel
                    .axis_partitions(r)
                    .map(|p| BigInt::from(u8::from(p.fits(&component))))
                    .collect()
            })
            .collect();
        Ok(kernel.weighted_sum(&weights))
    }

    /// Same moment together with the data needed to recover the unscaled value.
    pub fn moment_unscaled(&self, word: &ColoredWord, indices: &[Coordinate]) -> Result<Unscaled> {
        Ok(Unscaled {
            coefficient: self.moment(word, indices)?,
            m: self.space.m(),
            k: word.len(),
        })
    }
}

/// One-shot rescaled space moment; see [`SpaceIntegrator`] for repeated queries.
pub fn space_moment(
    cache: &WeingartenCache,
    space: &SpaceSpec,
    word: &ColoredWord,
    indices: &[Coordinate],
) -> Result<ExactScalar> {
    SpaceIntegrator::new(cache, space.clone()).moment(word, indices)
}

/// Counts tuples `i ∈ [n]^k` with `δ_π(i) = 1` and `δ_ρ(i ++ tail) = 1`, where
/// `π` lives on the first `k` legs of `ρ` and `tail` fixes the remaining legs.
pub(crate) fn count_extensions(pi: &SetPartition, rho: &SetPartition, tail: &[usize], n: usize) -> BigInt {
    let k = pi.ground_size();
    debug_assert_eq!(rho.ground_size(), k + tail.len());
    let mut uf = UnionFind::new(k + tail.len());
    uf.absorb(pi, 0);
    uf.absorb(rho, 0);
    let mut fixed: HashMap<usize, usize> = HashMap::new();
    for (t, &value) in tail.iter().enumerate() {
        let root = uf.find(k + t);
        match fixed.get(&root) {
            Some(&v) if v != value => return BigInt::zero(),
            _ => {
                fixed.insert(root, value);
            }
        }
    }
    let mut free_roots: Vec<usize> = (0..k).map(|leg| uf.find(leg)).filter(|r| !fixed.contains_key(r)).collect();
    free_roots.sort_unstable();
    free_roots.dedup();
    pow(n, free_roots.len())
}
