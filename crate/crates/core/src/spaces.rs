//! Affine homogeneous spaces `X_{G,I}` over products of easy quantum groups.
//!
//! A space is a list of factors plus an index set: an arbitrary subset `I`
//! for a single factor, or a diagonal set `{(c, ..., c) | c ∈ J}` for a
//! product. Its defining relations are
//!
//! ```text
//! Σ_i δ_π(i) x_{i_1}^{e_1} ... x_{i_k}^{e_k} = M^{|π_1 ∨ ... ∨ π_s| - k/2}
//! ```
//!
//! one per colored word and per tuple `π⃗ ∈ D^{(1)}(k) × ... × D^{(s)}(k)`.
//! The relations spanned by rows of the projection `P` add nothing new: `P`
//! is itself a combination of the partition vectors, so they are not
//! generated separately.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_linalg::{int, pow, ExactScalar, WeingartenCache};
use crate::integrator::{count_extensions, for_each_tuple, Coordinate, GroupSpec, IndexSet, SpaceIntegrator};
use crate::partitions::{enumerate_partitions, CategoryId, ColoredWord, SetPartition};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IndexMode {
    /// Arbitrary `I ⊂ {1..N}`; single factor only.
    Subset(IndexSet),
    /// `I = {(c, ..., c) | c ∈ J}` with `J ⊂ {1..min_r N_r}`.
    Diagonal(IndexSet),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    factors: Vec<GroupSpec>,
    mode: IndexMode,
}

impl SpaceSpec {
    pub fn subset(group: GroupSpec, index: IndexSet) -> Result<Self> {
        if index.max() > group.n {
            return Err(Error::InvalidSpace(format!(
                "index set {{{index}}} exceeds N = {}",
                group.n
            )));
        }
        Ok(SpaceSpec {
            factors: vec![group],
            mode: IndexMode::Subset(index),
        })
    }

    pub fn diagonal(factors: Vec<GroupSpec>, j: IndexSet) -> Result<Self> {
        let min_n = factors
            .iter()
            .map(|g| g.n)
            .min()
            .ok_or_else(|| Error::InvalidSpace("a space needs at least one factor".into()))?;
        if j.max() > min_n {
            return Err(Error::InvalidSpace(format!(
                "diagonal set J = {{{j}}} exceeds min N_r = {min_n}"
            )));
        }
        Ok(SpaceSpec {
            factors,
            mode: IndexMode::Diagonal(j),
        })
    }

    pub fn factors(&self) -> &[GroupSpec] {
        &self.factors
    }

    pub fn mode(&self) -> &IndexMode {
        &self.mode
    }

    pub fn index_set(&self) -> &IndexSet {
        match &self.mode {
            IndexMode::Subset(i) | IndexMode::Diagonal(i) => i,
        }
    }

    /// `M = |I|` (equal to `|J|` in diagonal mode).
    pub fn m(&self) -> usize {
        self.index_set().size()
    }

    /// Ambient dimension `N = Π_r N_r`.
    pub fn ambient_dim(&self) -> usize {
        self.factors.iter().map(|g| g.n).product()
    }

    /// Range of each coordinate component: `N_r` for factor `r`.
    pub fn coordinate_ranges(&self) -> Vec<usize> {
        self.factors.iter().map(|g| g.n).collect()
    }

    pub fn min_n(&self) -> usize {
        self.factors.iter().map(|g| g.n).min().unwrap()
    }

    pub fn categories(&self) -> Vec<CategoryId> {
        self.factors.iter().map(|g| g.category).collect()
    }

    /// Every coordinate, factor 1 most significant.
    pub fn coordinates(&self) -> Vec<Coordinate> {
        let ranges = self.coordinate_ranges();
        let mut out = Vec::new();
        for_each_tuple(&ranges, |t| out.push(t.iter().map(|i| i + 1).collect()));
        out
    }

    /// The same space with its factors permuted: factor `r` of the result is `self.factors[perm[r]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let factors = perm.iter().map(|&p| self.factors[p]).collect();
        match &self.mode {
            IndexMode::Subset(_) => Ok(self.clone()),
            IndexMode::Diagonal(j) => SpaceSpec::diagonal(factors, j.clone()),
        }
    }
}

impl fmt::Display for SpaceSpec {
    /// `O+:5/I=1,2` or `O:4xO:2/J=1,2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        let (tag, set) = match &self.mode {
            IndexMode::Subset(i) => ("I", i),
            IndexMode::Diagonal(j) => ("J", j),
        };
        write!(f, "{}/{tag}={set}", factors.join("x"))
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    /// Accepts the canonical text form or a preset such as `column-space:O+:4:2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some((factors, set)) = s.split_once('/') else {
            return s.parse::<Preset>()?.space();
        };
        let factors = factors
            .split('x')
            .map(str::parse::<GroupSpec>)
            .collect::<Result<Vec<_>>>()?;
        let (tag, members) = set
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected I=... or J=... in `{s}`")))?;
        let members: IndexSet = members.parse()?;
        match tag.trim() {
            "I" => {
                if factors.len() != 1 {
                    return Err(Error::InvalidSpace(
                        "an arbitrary index set I needs exactly one factor; use J=... for products".into(),
                    ));
                }
                SpaceSpec::subset(factors[0], members)
            }
            "J" => SpaceSpec::diagonal(factors, members),
            other => Err(Error::Parse(format!("unknown index tag `{other}` (expected I or J)"))),
        }
    }
}

/// Named spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `U_N^+` acting on the free complex sphere, `I = {1}`.
    FreeComplexSphere { n: usize },
    /// `O_N^+` acting on the free real sphere, `I = {1}`.
    FreeRealSphere { n: usize },
    /// `O_N` or `U_N` acting on the classical sphere, `I = {1}`.
    ClassicalSphere { category: CategoryId, n: usize },
    /// `G` as a space over `G × G` with the full diagonal.
    GroupAsSpace { category: CategoryId, n: usize },
    /// First `M` columns of `G_N`, over `G_N × G_M` with `J = {1..M}`.
    ColumnSpace { category: CategoryId, n: usize, m: usize },
}

impl Preset {
    pub const NAMES: [&'static str; 5] = [
        "free-complex-sphere",
        "free-real-sphere",
        "classical-sphere",
        "group-as-space",
        "column-space",
    ];

    /// Builds a preset from its name and textual parameters.
    pub fn new(name: &str, params: &[&str]) -> Result<Self> {
        let dim = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad dimension `{s}`: {e}")))
        };
        let arity = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "preset `{name}` takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name {
            "free-complex-sphere" => {
                arity(1)?;
                Ok(Preset::FreeComplexSphere { n: dim(params[0])? })
            }
            "free-real-sphere" => {
                arity(1)?;
                Ok(Preset::FreeRealSphere { n: dim(params[0])? })
            }
            "classical-sphere" => {
                arity(2)?;
                let category: CategoryId = params[0].parse()?;
                if !matches!(category, CategoryId::O | CategoryId::U) {
                    return Err(Error::InvalidArgument(
                        "classical-sphere takes category O or U".into(),
                    ));
                }
                Ok(Preset::ClassicalSphere {
                    category,
                    n: dim(params[1])?,
                })
            }
            "group-as-space" => {
                arity(2)?;
                Ok(Preset::GroupAsSpace {
                    category: params[0].parse()?,
                    n: dim(params[1])?,
                })
            }
            "column-space" => {
                arity(3)?;
                let (n, m) = (dim(params[1])?, dim(params[2])?);
                if m > n {
                    return Err(Error::InvalidArgument(format!(
                        "column-space needs M <= N, got M = {m} > N = {n}"
                    )));
                }
                Ok(Preset::ColumnSpace {
                    category: params[0].parse()?,
                    n,
                    m,
                })
            }
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub fn space(&self) -> Result<SpaceSpec> {
        let group = GroupSpec::new;
        match *self {
            Preset::FreeComplexSphere { n } => {
                SpaceSpec::subset(group(CategoryId::UPlus, n)?, IndexSet::range(1)?)
            }
            Preset::FreeRealSphere { n } => {
                SpaceSpec::subset(group(CategoryId::OPlus, n)?, IndexSet::range(1)?)
            }
            Preset::ClassicalSphere { category, n } => {
                SpaceSpec::subset(group(category, n)?, IndexSet::range(1)?)
            }
            Preset::GroupAsSpace { category, n } => SpaceSpec::diagonal(
                vec![group(category, n)?, group(category, n)?],
                IndexSet::range(n)?,
            ),
            Preset::ColumnSpace { category, n, m } => SpaceSpec::diagonal(
                vec![group(category, n)?, group(category, m)?],
                IndexSet::range(m)?,
            ),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// `name:param:param...`, e.g. `group-as-space:O:3`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let name = parts.next().unwrap_or_default();
        let params: Vec<&str> = parts.collect();
        Preset::new(name, &params)
    }
}

/// `preset(name, parameters)`.
pub fn preset(name: &str, params: &[&str]) -> Result<SpaceSpec> {
    Preset::new(name, params)?.space()
}

/// `Σ_i δ_π⃗(i) x_i^e = M^{|π_1 ∨ ... ∨ π_s| - k/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub word: ColoredWord,
    /// One partition per factor.
    pub partitions: Vec<SetPartition>,
    /// `|π_1 ∨ ... ∨ π_s|`.
    pub join_blocks: usize,
}

impl Relation {
    pub fn k(&self) -> usize {
        self.word.len()
    }

    /// Right-hand side in rescaled coordinates: `M^{|π_1 ∨ ... ∨ π_s|}`.
    pub fn rhs_rescaled(&self, m: usize) -> ExactScalar {
        int(pow(m, self.join_blocks))
    }

    /// The unscaled exponent `|π_1 ∨ ... ∨ π_s| - k/2`, rendered as a string.
    pub fn exponent_text(&self) -> String {
        let twice = 2 * self.join_blocks as i64 - self.k() as i64;
        if twice % 2 == 0 {
            (twice / 2).to_string()
        } else {
            format!("{twice}/2")
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.partitions.iter().map(|p| format!("[{p}]")).collect();
        write!(f, "{} {} -> M^({})", self.word, parts.join(""), self.exponent_text())
    }
}

/// All relations for colored words of length at most `max_k`.
pub fn relation_set(space: &SpaceSpec, max_k: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for word in ColoredWord::all_up_to(max_k) {
        let lists: Vec<Vec<SetPartition>> = space
            .factors()
            .iter()
            .map(|g| enumerate_partitions(g.category, &word))
            .collect();
        let sizes: Vec<usize> = lists.iter().map(Vec::len).collect();
        for_each_tuple(&sizes, |tuple| {
            let partitions: Vec<SetPartition> = tuple
                .iter()
                .enumerate()
                .map(|(r, &t)| lists[r][t].clone())
                .collect();
            let join_blocks = SetPartition::join_all(&partitions)
                .expect("partitions of one word share a ground size")
                .block_count();
            out.push(Relation {
                word: word.clone(),
                partitions,
                join_blocks,
            });
        });
    }
    out
}

/// A test monomial `h_{j_1}^{f_1} ... h_{j_l}^{f_l}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub word: ColoredWord,
    pub indices: Vec<Coordinate>,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        let idx: Vec<String> = self
            .indices
            .iter()
            .map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(":"))
            .collect();
        write!(f, "{}[{}]", self.word, idx.join(","))
    }
}

/// Every monomial of degree at most `max_degree` in the space's coordinates.
pub fn test_monomials(space: &SpaceSpec, max_degree: usize) -> Vec<Monomial> {
    let coords = space.coordinates();
    let mut out = Vec::new();
    for word in ColoredWord::all_up_to(max_degree) {
        let sizes = vec![coords.len(); word.len()];
        if word.is_empty() {
            out.push(Monomial {
                word,
                indices: Vec::new(),
            });
            continue;
        }
        for_each_tuple(&sizes, |t| {
            out.push(Monomial {
                word: word.clone(),
                indices: t.iter().map(|&i| coords[i].clone()).collect(),
            });
        });
    }
    out
}

/// Outcome of one `(relation, monomial)` check; values are kept only on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub relation: usize,
    pub monomial: usize,
    pub passed: bool,
    /// `∫ (LHS · m)` and `RHS · ∫ m`, present only when they differ.
    pub values: Option<(ExactScalar, ExactScalar)>,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub space: SpaceSpec,
    pub relations: Vec<Relation>,
    pub monomials: Vec<Monomial>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `∫_X (Σ_i δ_π⃗(i) h_i^e) · m` in rescaled coordinates.
pub fn relation_times_monomial(
    integrator: &SpaceIntegrator<'_>,
    relation: &Relation,
    monomial: &Monomial,
) -> Result<ExactScalar> {
    let word = relation.word.concat(&monomial.word);
    integrator.check_coordinates(&monomial.word, &monomial.indices)?;
    let kernel = integrator.kernel(&word)?;
    let space = integrator.space();
    let weights: Vec<Vec<BigInt>> = space
        .factors()
        .iter()
        .enumerate()
        .map(|(r, g)| {
            let tail: Vec<usize> = monomial.indices.iter().map(|c| c[r]).collect();
            kernel
                .axis_partitions(r)
                .map(|rho| count_extensions(&relation.partitions[r], rho, &tail, g.n))
                .collect()
        })
        .collect();
    Ok(kernel.weighted_sum(&weights))
}

/// Checks `∫ (LHS · m) = RHS · ∫ m` exactly for every relation with `k <= max_k`
/// and every monomial `m` of degree at most `test_degree`.
pub fn verify_relations(
    cache: &WeingartenCache,
    space: &SpaceSpec,
    max_k: usize,
    test_degree: usize,
) -> Result<VerificationReport> {
    let integrator = SpaceIntegrator::new(cache, space.clone());
    let relations = relation_set(space, max_k);
    let monomials = test_monomials(space, test_degree);
    let m = space.m();

    let baseline = monomials
        .par_iter()
        .map(|mono| integrator.moment(&mono.word, &mono.indices))
        .collect::<Result<Vec<_>>>()?;

    let checks = relations
        .par_iter()
        .enumerate()
        .map(|(ri, rel)| {
            let rhs_factor = rel.rhs_rescaled(m);
            monomials
                .iter()
                .enumerate()
                .map(|(mi, mono)| {
                    let lhs = relation_times_monomial(&integrator, rel, mono)?;
                    let rhs = &rhs_factor * &baseline[mi];
                    let passed = lhs == rhs;
                    Ok(Check {
                        relation: ri,
                        monomial: mi,
                        passed,
                        values: (!passed).then_some((lhs, rhs)),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    Ok(VerificationReport {
        space: space.clone(),
        relations,
        monomials,
        checks,
    })
}

/// The bare expectation `∫ Σ_i δ_π⃗(i) h_i^e`; equals `M^{|π_1 ∨ ... ∨ π_s|}` on the space.
pub fn relation_expectation(integrator: &SpaceIntegrator<'_>, relation: &Relation) -> Result<ExactScalar> {
    relation_times_monomial(
        integrator,
        relation,
        &Monomial {
            word: ColoredWord::empty(),
            indices: Vec::new(),
        },
    )
}
