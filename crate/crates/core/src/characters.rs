//! Moments of truncated characters `χ_T = Σ_{i ≤ T} x_{i...i}` and the limit
//! laws they converge to.
//!
//! Every value here is for the rescaled variable `√M · χ_T`, exact at finite
//! `N` and asymptotic through `Σ_π t^{|π|}` with `t = TM/N`, `N = Π_r N_r`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{int, pow, ExactScalar, WeingartenCache};
use crate::integrator::{for_each_tuple, SpaceIntegrator};
use crate::partitions::{enumerate_intersection, enumerate_partitions, CategoryId, ColoredWord, SetPartition};
use crate::spaces::SpaceSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterQuery {
    pub space: SpaceSpec,
    /// Truncation rank `T`, `1 <= T <= min_r N_r`.
    pub t: usize,
    pub word: ColoredWord,
}

impl CharacterQuery {
    /// A single-factor space with an arbitrary index set counts as the
    /// one-factor diagonal case: `χ_T = Σ_{i ≤ T} x_i`.
    pub fn new(space: SpaceSpec, t: usize, word: ColoredWord) -> Result<Self> {
        let bound = space.min_n();
        if t == 0 || t > bound {
            return Err(Error::IndexOutOfRange { index: t, bound });
        }
        Ok(CharacterQuery { space, t, word })
    }

    /// `t = TM / N` with `N = Π_r N_r`.
    pub fn limit_parameter(&self) -> ExactScalar {
        ExactScalar::new(
            BigInt::from(self.t * self.space.m()),
            BigInt::from(self.space.ambient_dim()),
        )
    }
}

/// `Σ_{π⃗, σ⃗} T^{|π_1 ∨ ... ∨ π_s|} M^{|σ_1 ∨ ... ∨ σ_s|} Π_r W_r(π_r, σ_r)`.
pub fn char_moment_exact(cache: &WeingartenCache, q: &CharacterQuery) -> Result<ExactScalar> {
    let integrator = SpaceIntegrator::new(cache, q.space.clone());
    char_moment_with(&integrator, q.t, &q.word)
}

fn char_moment_with(integrator: &SpaceIntegrator<'_>, t: usize, word: &ColoredWord) -> Result<ExactScalar> {
    let kernel = integrator.kernel(word)?;
    Ok(kernel.tuple_sum(|parts| {
        let blocks = SetPartition::join_all(parts.iter().copied()).map_or(0, |p| p.block_count());
        pow(t, blocks)
    }))
}

/// The same moment by summing space moments over all diagonal index tuples;
/// `T^k` evaluations, meant as a cross-check.
pub fn char_moment_direct(cache: &WeingartenCache, q: &CharacterQuery) -> Result<ExactScalar> {
    let integrator = SpaceIntegrator::new(cache, q.space.clone());
    let s = q.space.factors().len();
    let mut total = ExactScalar::zero();
    let mut err = None;
    for_each_tuple(&vec![q.t; q.word.len()], |c| {
        if err.is_some() {
            return;
        }
        let coords: Vec<Vec<usize>> = c.iter().map(|&i| vec![i + 1; s]).collect();
        match integrator.moment(&q.word, &coords) {
            Ok(v) => total += v,
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None if q.word.is_empty() => Ok(int(1)),
        None => Ok(total),
    }
}

/// `Σ_{π ∈ D_1(k) ∩ ... ∩ D_s(k)} t^{|π|}`.
pub fn char_moment_asymptotic(categories: &[CategoryId], word: &ColoredWord, t: &ExactScalar) -> Result<ExactScalar> {
    let parts = enumerate_intersection(categories, word)?;
    Ok(block_sum(&parts, t))
}

fn block_sum(parts: &[SetPartition], t: &ExactScalar) -> ExactScalar {
    let max = parts.iter().map(SetPartition::block_count).max().unwrap_or(0);
    let mut powers = vec![int(1)];
    for b in 1..=max {
        let next = &powers[b - 1] * t;
        powers.push(next);
    }
    parts.iter().fold(ExactScalar::zero(), |acc, p| acc + &powers[p.block_count()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitKind {
    Poisson,
    FreePoisson,
    Gaussian,
    Semicircle,
    ClassicalMatching,
    FreeMatching,
}

impl LimitKind {
    pub const ALL: [LimitKind; 6] = [
        LimitKind::Poisson,
        LimitKind::FreePoisson,
        LimitKind::Gaussian,
        LimitKind::Semicircle,
        LimitKind::ClassicalMatching,
        LimitKind::FreeMatching,
    ];

    pub fn category(self) -> CategoryId {
        match self {
            LimitKind::Poisson => CategoryId::S,
            LimitKind::FreePoisson => CategoryId::SPlus,
            LimitKind::Gaussian => CategoryId::O,
            LimitKind::Semicircle => CategoryId::OPlus,
            LimitKind::ClassicalMatching => CategoryId::U,
            LimitKind::FreeMatching => CategoryId::UPlus,
        }
    }

    pub fn from_category(category: CategoryId) -> Self {
        match category {
            CategoryId::S => LimitKind::Poisson,
            CategoryId::SPlus => LimitKind::FreePoisson,
            CategoryId::O => LimitKind::Gaussian,
            CategoryId::OPlus => LimitKind::Semicircle,
            CategoryId::U => LimitKind::ClassicalMatching,
            CategoryId::UPlus => LimitKind::FreeMatching,
        }
    }

    /// Word of length `k` the moments are taken on: alternating for matching laws.
    pub fn word(self, k: usize) -> ColoredWord {
        if self.category().is_color_sensitive() {
            ColoredWord::alternating(k)
        } else {
            ColoredWord::white(k)
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LimitKind::Poisson => "poisson",
            LimitKind::FreePoisson => "free-poisson",
            LimitKind::Gaussian => "gaussian",
            LimitKind::Semicircle => "semicircle",
            LimitKind::ClassicalMatching => "classical-matching",
            LimitKind::FreeMatching => "free-matching",
        }
    }
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LimitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LimitKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown limit law `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitLaw {
    pub kind: LimitKind,
    pub t: ExactScalar,
}

impl LimitLaw {
    pub fn new(kind: LimitKind, t: ExactScalar) -> Result<Self> {
        check_positive(&t)?;
        Ok(LimitLaw { kind, t })
    }
}

fn check_positive(t: &ExactScalar) -> Result<()> {
    if t.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("parameter t must be positive, got {t}")))
    }
}

/// Parses `"3"`, `"1/2"` or `"-2/4"` into a reduced rational.
pub fn parse_scalar(s: &str) -> Result<ExactScalar> {
    s.trim()
        .parse::<ExactScalar>()
        .map_err(|e| Error::Parse(format!("bad rational `{s}`: {e}")))
}

/// `m_1, ..., m_{max_k}` with `m_k = Σ_{π ∈ D(k)} t^{|π|}`.
pub fn limit_law_moments(law: &LimitLaw, max_k: usize) -> Vec<ExactScalar> {
    let category = law.kind.category();
    (1..=max_k)
        .map(|k| block_sum(&enumerate_partitions(category, &law.kind.word(k)), &law.t))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BpRow {
    pub k: usize,
    pub classical: ExactScalar,
    pub free: ExactScalar,
}

/// Classical moment over `D(k)` next to the free one over `D(k) ∩ NC`.
pub fn bp_compare(classical: CategoryId, t: &ExactScalar, max_k: usize) -> Result<Vec<BpRow>> {
    if classical.is_free() {
        return Err(Error::InvalidArgument(format!(
            "bp-compare takes a classical category (S, O or U), got {classical}"
        )));
    }
    check_positive(t)?;
    let c = limit_law_moments(&LimitLaw::new(LimitKind::from_category(classical), t.clone())?, max_k);
    let f = limit_law_moments(
        &LimitLaw::new(LimitKind::from_category(classical.free_version()), t.clone())?,
        max_k,
    );
    Ok(c.into_iter()
        .zip(f)
        .enumerate()
        .map(|(i, (classical, free))| BpRow { k: i + 1, classical, free })
        .collect())
}

/// How `T` is chosen for each member of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TRule {
    /// `T = min_r N_r`.
    Full,
    Fixed(usize),
    /// `T = min_r N_r · num / den`, which must be a positive integer.
    Fraction(usize, usize),
}

impl TRule {
    pub fn resolve(self, space: &SpaceSpec) -> Result<usize> {
        let n = space.min_n();
        match self {
            TRule::Full => Ok(n),
            TRule::Fixed(t) => Ok(t),
            TRule::Fraction(num, den) => {
                if den == 0 || !(n * num).is_multiple_of(den) {
                    return Err(Error::InvalidArgument(format!(
                        "T = {n}*{num}/{den} is not an integer"
                    )));
                }
                Ok(n * num / den)
            }
        }
    }
}

impl fmt::Display for TRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TRule::Full => f.write_str("N"),
            TRule::Fixed(t) => write!(f, "{t}"),
            TRule::Fraction(a, b) => write!(f, "N*{a}/{b}"),
        }
    }
}

impl FromStr for TRule {
    type Err = Error;

    /// `N`, a number, or `N*a/b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad T rule `{s}` (expected N, an integer, or N*a/b)"));
        if s == "N" {
            return Ok(TRule::Full);
        }
        if let Some(frac) = s.strip_prefix("N*") {
            let (a, b) = frac.split_once('/').ok_or_else(bad)?;
            return Ok(TRule::Fraction(
                a.parse().map_err(|_| bad())?,
                b.parse().map_err(|_| bad())?,
            ));
        }
        s.parse().map(TRule::Fixed).map_err(|_| bad())
    }
}

/// A family of spaces indexed by `N`, written as a space text with `{N}` placeholders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceFamily {
    template: String,
}

impl SpaceFamily {
    pub fn new(template: impl Into<String>) -> Result<Self> {
        let template = template.into();
        if !template.contains("{N}") {
            return Err(Error::InvalidArgument(format!(
                "family template `{template}` has no {{N}} placeholder"
            )));
        }
        Ok(SpaceFamily { template })
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    pub fn member(&self, n: usize) -> Result<SpaceSpec> {
        self.template.replace("{N}", &n.to_string()).parse()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub n: usize,
    pub space: SpaceSpec,
    pub t: usize,
    pub exact: ExactScalar,
    pub asymptotic: ExactScalar,
    /// `exact - asymptotic`.
    pub difference: ExactScalar,
}

/// Exact against asymptotic moments along a family; `t = TM/N` must stay fixed.
pub fn convergence_profile(
    cache: &WeingartenCache,
    family: &SpaceFamily,
    ns: &[usize],
    word: &ColoredWord,
    rule: TRule,
) -> Result<Vec<ProfileRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    let mut limit: Option<(ExactScalar, ExactScalar)> = None;
    for &n in ns {
        let space = family.member(n)?;
        let t = rule.resolve(&space)?;
        let q = CharacterQuery::new(space.clone(), t, word.clone())?;
        let param = q.limit_parameter();
        let asymptotic = match &limit {
            Some((p, a)) if *p == param => a.clone(),
            Some((p, _)) => {
                return Err(Error::InvalidArgument(format!(
                    "T rule {rule} gives t = {param} at N = {n} but t = {p} earlier; t must be constant"
                )))
            }
            None => {
                let a = char_moment_asymptotic(&space.categories(), word, &param)?;
                limit = Some((param, a.clone()));
                a
            }
        };
        let exact = char_moment_exact(cache, &q)?;
        rows.push(ProfileRow {
            n,
            space,
            t,
            difference: &exact - &asymptotic,
            exact,
            asymptotic,
        });
    }
    Ok(rows)
}

/// True when `|difference|` strictly decreases along the rows.
pub fn differences_shrink(rows: &[ProfileRow]) -> bool {
    rows.windows(2).all(|w| w[1].difference.abs() < w[0].difference.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ColoredWord {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::new(n.into(), d.into())
    }

    fn query(space: &str, t: usize, word: &str) -> CharacterQuery {
        CharacterQuery::new(space.parse().unwrap(), t, w(word)).unwrap()
    }

    #[test]
    fn exact_examples() {
        let cache = WeingartenCache::new();
        for n in 2..6 {
            let sphere = format!("free-real-sphere:{n}");
            assert_eq!(char_moment_exact(&cache, &query(&sphere, n, "oo")).unwrap(), int(1));
            assert_eq!(char_moment_exact(&cache, &query(&sphere, n, "")).unwrap(), int(1));
            let fourth = char_moment_exact(&cache, &query(&sphere, n, "oooo")).unwrap();
            assert_eq!(fourth, q(2 * n as i64, n as i64 + 1));

            let sn = format!("group-as-space:S:{n}");
            assert_eq!(char_moment_exact(&cache, &query(&sn, n, "o")).unwrap(), int(1));
            assert_eq!(char_moment_exact(&cache, &query(&sn, n, "oo")).unwrap(), int(2));
        }
    }

    #[test]
    fn exact_matches_direct_sum() {
        let cache = WeingartenCache::new();
        for (space, t, word) in [
            ("O+:3/I=1,2", 2, "ooo"),
            ("U:3/I=1", 3, "obob"),
            ("U+:3/I=2", 2, "oobb"),
            ("S:3xO:2/J=1,2", 2, "oo"),
        ] {
            let qq = query(space, t, word);
            assert_eq!(
                char_moment_exact(&cache, &qq).unwrap(),
                char_moment_direct(&cache, &qq).unwrap(),
                "{space} {word}"
            );
        }
    }

    #[test]
    fn query_bounds() {
        let space: SpaceSpec = "O:3xO:2/J=1".parse().unwrap();
        assert!(CharacterQuery::new(space.clone(), 3, w("oo")).is_err());
        assert!(CharacterQuery::new(space.clone(), 0, w("oo")).is_err());
        assert_eq!(
            CharacterQuery::new(space, 2, w("oo")).unwrap().limit_parameter(),
            q(1, 3)
        );
    }

    #[test]
    fn asymptotic_examples() {
        let one = int(1);
        assert_eq!(char_moment_asymptotic(&[CategoryId::OPlus], &w("oooo"), &one).unwrap(), int(2));
        assert_eq!(char_moment_asymptotic(&[CategoryId::S], &w("oooo"), &one).unwrap(), int(15));
        assert_eq!(
            char_moment_asymptotic(&[CategoryId::O, CategoryId::OPlus], &w("oooooo"), &one).unwrap(),
            int(5)
        );
        assert_eq!(
            char_moment_asymptotic(&[CategoryId::S], &w("oo"), &q(1, 2)).unwrap(),
            q(3, 4)
        );
    }

    #[test]
    fn limit_law_examples() {
        let m = |kind, k| limit_law_moments(&LimitLaw::new(kind, int(1)).unwrap(), k);
        let ints = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert_eq!(m(LimitKind::Poisson, 6), ints(&[1, 2, 5, 15, 52, 203]));
        assert_eq!(m(LimitKind::FreePoisson, 6), ints(&[1, 2, 5, 14, 42, 132]));
        assert_eq!(m(LimitKind::Gaussian, 6), ints(&[0, 1, 0, 3, 0, 15]));
        assert_eq!(m(LimitKind::Semicircle, 6), ints(&[0, 1, 0, 2, 0, 5]));
        assert_eq!(m(LimitKind::ClassicalMatching, 6), ints(&[0, 1, 0, 2, 0, 6]));
        assert_eq!(m(LimitKind::FreeMatching, 6), ints(&[0, 1, 0, 2, 0, 5]));
        assert!(LimitLaw::new(LimitKind::Poisson, int(0)).is_err());
    }

    #[test]
    fn bp_examples() {
        let rows = bp_compare(CategoryId::S, &int(1), 4).unwrap();
        let got: Vec<(usize, ExactScalar, ExactScalar)> =
            rows.into_iter().map(|r| (r.k, r.classical, r.free)).collect();
        assert_eq!(
            got,
            vec![
                (1, int(1), int(1)),
                (2, int(2), int(2)),
                (3, int(5), int(5)),
                (4, int(15), int(14))
            ]
        );
        let rows = bp_compare(CategoryId::O, &int(1), 4).unwrap();
        assert_eq!((rows[1].classical.clone(), rows[1].free.clone()), (int(1), int(1)));
        assert_eq!((rows[3].classical.clone(), rows[3].free.clone()), (int(3), int(2)));
        assert!(rows[0].classical.is_zero() && rows[2].free.is_zero());
        for c in [CategoryId::S, CategoryId::O, CategoryId::U] {
            let r = &bp_compare(c, &q(2, 3), 1).unwrap()[0];
            assert_eq!(r.classical, r.free);
        }
        assert!(bp_compare(CategoryId::SPlus, &int(1), 3).is_err());
    }

    #[test]
    fn profile_examples() {
        let cache = WeingartenCache::new();
        let family = SpaceFamily::new("free-real-sphere:{N}").unwrap();
        let rows = convergence_profile(&cache, &family, &[8, 16, 32], &w("oooo"), TRule::Full).unwrap();
        assert!(rows.iter().all(|r| r.asymptotic == int(2)));
        assert!(differences_shrink(&rows));

        let rows = convergence_profile(&cache, &family, &[4, 8], &w("oo"), TRule::Full).unwrap();
        assert!(rows.iter().all(|r| r.difference.is_zero()));

        let family = SpaceFamily::new("group-as-space:S:{N}").unwrap();
        let rows = convergence_profile(&cache, &family, &[2, 3, 4], &w("oo"), TRule::Full).unwrap();
        assert!(rows.iter().all(|r| r.exact == int(2) && r.asymptotic == int(2)));

        assert!(convergence_profile(&cache, &SpaceFamily::new("free-real-sphere:{N}").unwrap(), &[4, 8], &w("oo"), TRule::Fixed(2)).is_err());
        assert!(SpaceFamily::new("free-real-sphere:4").is_err());
    }

    #[test]
    fn t_rule_text() {
        for s in ["N", "3", "N*1/2"] {
            assert_eq!(s.parse::<TRule>().unwrap().to_string(), s);
        }
        let space: SpaceSpec = "O:6/I=1".parse().unwrap();
        assert_eq!(TRule::Fraction(1, 2).resolve(&space).unwrap(), 3);
        assert!(TRule::Fraction(1, 4).resolve(&space).is_err());
        assert!("M".parse::<TRule>().is_err());
    }
}
