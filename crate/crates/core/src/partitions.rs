//! Colored set partitions and the six easy categories.
//!
//! A partition of `{1, ..., k}` is stored as its restricted-growth string:
//! leg `i` carries the label of its block, labels are assigned in order of
//! first appearance starting at 0. Sorting restricted-growth strings
//! lexicographically gives the canonical order used everywhere downstream
//! (Gram matrix indices, greedy basis selection, JSON output).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Leg color: white is an unconjugated coordinate, black a conjugated one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn symbol(self) -> char {
        match self {
            Color::White => 'o',
            Color::Black => 'b',
        }
    }

    pub fn conjugate(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

/// A sequence of colors `e_1 ... e_k`; the empty word is allowed.
///
/// Text form uses `o` for white and `b` for black, e.g. `oobb`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredWord(Vec<Color>);

impl ColoredWord {
    pub fn new(colors: Vec<Color>) -> Self {
        ColoredWord(colors)
    }

    pub fn empty() -> Self {
        ColoredWord(Vec::new())
    }

    /// The all-white word of length `k`.
    pub fn white(k: usize) -> Self {
        ColoredWord(vec![Color::White; k])
    }

    /// `o b o b ...` of length `k`.
    pub fn alternating(k: usize) -> Self {
        ColoredWord(
            (0..k)
                .map(|i| if i % 2 == 0 { Color::White } else { Color::Black })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn concat(&self, other: &ColoredWord) -> ColoredWord {
        let mut colors = self.0.clone();
        colors.extend_from_slice(&other.0);
        ColoredWord(colors)
    }

    /// Every colored word of length exactly `k`, in lexicographic order (white < black).
    pub fn all_of_length(k: usize) -> Vec<ColoredWord> {
        (0..1usize << k)
            .map(|mask| {
                ColoredWord(
                    (0..k)
                        .map(|i| {
                            if mask >> (k - 1 - i) & 1 == 1 {
                                Color::Black
                            } else {
                                Color::White
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }

    /// Every colored word of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> Vec<ColoredWord> {
        (0..=max_len).flat_map(ColoredWord::all_of_length).collect()
    }
}

impl fmt::Display for ColoredWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{}", c.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for ColoredWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                'o' | '∘' => Ok(Color::White),
                'b' | '•' => Ok(Color::Black),
                other => Err(Error::Parse(format!(
                    "invalid color `{other}` in word `{s}` (expected `o` or `b`)"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ColoredWord)
    }
}

/// A partition of the legs `{0, ..., k-1}` stored as a restricted-growth string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgs: Vec<u8>,
    blocks: usize,
}

impl SetPartition {
    /// Builds a partition from a restricted-growth string, validating the growth condition.
    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self> {
        let mut next = 0u8;
        for (leg, &label) in rgs.iter().enumerate() {
            if label > next {
                return Err(Error::Parse(format!(
                    "not a restricted-growth string: label {label} at leg {leg} before {next}"
                )));
            }
            if label == next {
                next = next
                    .checked_add(1)
                    .ok_or_else(|| Error::InvalidArgument("too many blocks".into()))?;
            }
        }
        Ok(SetPartition {
            rgs,
            blocks: next as usize,
        })
    }

    /// Canonical partition whose blocks are the level sets of `labels`.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut seen: Vec<&T> = Vec::new();
        let rgs = labels
            .iter()
            .map(|l| match seen.iter().position(|s| *s == l) {
                Some(p) => p as u8,
                None => {
                    seen.push(l);
                    (seen.len() - 1) as u8
                }
            })
            .collect();
        SetPartition {
            rgs,
            blocks: seen.len(),
        }
    }

    /// Builds a partition of `k` legs from 0-based blocks.
    pub fn from_blocks(k: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut owner = vec![usize::MAX; k];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Parse("empty block".into()));
            }
            for &leg in block {
                if leg >= k {
                    return Err(Error::IndexOutOfRange {
                        index: leg + 1,
                        bound: k,
                    });
                }
                if owner[leg] != usize::MAX {
                    return Err(Error::Parse(format!("leg {} appears twice", leg + 1)));
                }
                owner[leg] = b;
            }
        }
        if let Some(leg) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::Parse(format!("leg {} is not covered", leg + 1)));
        }
        Ok(Self::from_labels(&owner))
    }

    /// The partition into singletons; unit for [`SetPartition::join`].
    pub fn discrete(k: usize) -> Self {
        SetPartition {
            rgs: (0..k).map(|i| i as u8).collect(),
            blocks: k,
        }
    }

    pub fn one_block(k: usize) -> Self {
        SetPartition {
            rgs: vec![0; k],
            blocks: usize::from(k > 0),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.rgs.len()
    }

    /// Number of blocks `|π|`.
    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    /// Block label of each leg.
    pub fn label(&self, leg: usize) -> usize {
        self.rgs[leg] as usize
    }

    /// Blocks as sorted lists of 0-based legs, ordered by minimum element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (leg, &b) in self.rgs.iter().enumerate() {
            out[b as usize].push(leg);
        }
        out
    }

    fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.blocks];
        for &b in &self.rgs {
            sizes[b as usize] += 1;
        }
        sizes
    }

    pub fn is_pairing(&self) -> bool {
        self.block_sizes().iter().all(|&s| s == 2)
    }

    /// Stack scan: an open block must be on top of the stack whenever it is revisited.
    pub fn is_noncrossing(&self) -> bool {
        let sizes = self.block_sizes();
        let mut remaining = sizes.clone();
        let mut stack: Vec<u8> = Vec::new();
        for &b in &self.rgs {
            let bi = b as usize;
            let first = remaining[bi] == sizes[bi];
            if !first && stack.last() != Some(&b) {
                return false;
            }
            remaining[bi] -= 1;
            let last = remaining[bi] == 0;
            match (first, last) {
                (true, false) => stack.push(b),
                (false, true) => {
                    stack.pop();
                }
                _ => {}
            }
        }
        true
    }

    /// True when every pair joins one white leg and one black leg.
    fn is_matching_pairing(&self, word: &ColoredWord) -> bool {
        self.is_pairing()
            && self.blocks().iter().all(|block| {
                word.colors()[block[0]] != word.colors()[block[1]]
            })
    }

    /// `δ_π(i)`: whether the index tuple is constant on every block.
    pub fn delta(&self, indices: &[usize]) -> Result<bool> {
        if indices.len() != self.rgs.len() {
            return Err(Error::LengthMismatch {
                expected: self.rgs.len(),
                actual: indices.len(),
            });
        }
        Ok(self.fits(indices))
    }

    /// Unchecked variant of [`SetPartition::delta`] for hot loops.
    pub(crate) fn fits(&self, indices: &[usize]) -> bool {
        debug_assert_eq!(indices.len(), self.rgs.len());
        let mut value: [usize; 32] = [usize::MAX; 32];
        if self.blocks > value.len() {
            let mut value = vec![usize::MAX; self.blocks];
            return self.fits_with(indices, &mut value);
        }
        self.fits_with(indices, &mut value[..self.blocks])
    }

    fn fits_with(&self, indices: &[usize], value: &mut [usize]) -> bool {
        for (&b, &i) in self.rgs.iter().zip(indices) {
            let slot = &mut value[b as usize];
            if *slot == usize::MAX {
                *slot = i;
            } else if *slot != i {
                return false;
            }
        }
        true
    }

    /// The finest partition coarser than both: connected components of the union of blocks.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        if self.ground_size() != other.ground_size() {
            return Err(Error::GroundSizeMismatch {
                left: self.ground_size(),
                right: other.ground_size(),
            });
        }
        let mut uf = UnionFind::new(self.ground_size());
        uf.absorb(self, 0);
        uf.absorb(other, 0);
        Ok(uf.partition())
    }

    /// Join of a nonempty family of partitions on the same legs.
    pub fn join_all<'a, I>(parts: I) -> Result<SetPartition>
    where
        I: IntoIterator<Item = &'a SetPartition>,
    {
        let mut iter = parts.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidArgument("join of an empty family".into()))?;
        let mut uf = UnionFind::new(first.ground_size());
        uf.absorb(first, 0);
        for p in iter {
            if p.ground_size() != first.ground_size() {
                return Err(Error::GroundSizeMismatch {
                    left: first.ground_size(),
                    right: p.ground_size(),
                });
            }
            uf.absorb(p, 0);
        }
        Ok(uf.partition())
    }
}

impl fmt::Display for SetPartition {
    /// `12|34`; legs are 1-based and separated by commas inside a block once `k > 9`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.ground_size() > 9;
        let blocks = self.blocks();
        for (bi, block) in blocks.iter().enumerate() {
            if bi > 0 {
                f.write_str("|")?;
            }
            for (j, leg) in block.iter().enumerate() {
                if wide && j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", leg + 1)?;
            }
        }
        Ok(())
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Accepts `12|34` and the comma form `1,10|2,...`. A comma-free string that
    /// is not a valid one-digit-per-leg partition is read as one leg per block.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SetPartition::discrete(0));
        }
        if s.contains(',') {
            return parse_blocks(s, |part| part.split(',').map(parse_leg).collect());
        }
        parse_blocks(s, |part| {
            part.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad leg `{c}` in `{s}`")))
                })
                .collect()
        })
        .or_else(|e| parse_blocks(s, |part| Ok(vec![parse_leg(part)?])).map_err(|_| e))
    }
}

fn parse_leg(t: &str) -> Result<usize> {
    t.trim()
        .parse::<usize>()
        .map_err(|e| Error::Parse(format!("bad leg `{t}`: {e}")))
}

fn parse_blocks(s: &str, legs_of: impl Fn(&str) -> Result<Vec<usize>>) -> Result<SetPartition> {
    let mut blocks = Vec::new();
    for part in s.split('|') {
        let legs = legs_of(part)?;
        if legs.contains(&0) {
            return Err(Error::Parse("legs are numbered from 1".into()));
        }
        blocks.push(legs.into_iter().map(|l| l - 1).collect::<Vec<_>>());
    }
    let k = blocks.iter().map(Vec::len).sum();
    SetPartition::from_blocks(k, &blocks)
}

/// Union-find over legs; used by joins and by index-counting routines.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so components keep a canonical representative
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Merges the blocks of `p`, whose legs sit at `offset..offset + k`.
    pub(crate) fn absorb(&mut self, p: &SetPartition, offset: usize) {
        let mut first: [usize; 64] = [usize::MAX; 64];
        for (leg, &b) in p.rgs.iter().enumerate() {
            let b = b as usize;
            if b < first.len() {
                if first[b] == usize::MAX {
                    first[b] = leg;
                } else {
                    self.union(offset + first[b], offset + leg);
                }
            } else {
                // blocks beyond 64 only arise for very long words
                let head = p.rgs.iter().position(|&x| x as usize == b).unwrap();
                self.union(offset + head, offset + leg);
            }
        }
    }

    pub(crate) fn partition(&mut self) -> SetPartition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|i| self.find(i)).collect();
        SetPartition::from_labels(&roots)
    }
}

/// The six easy categories of partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CategoryId {
    /// All partitions.
    S,
    /// All pairings.
    O,
    /// Matching pairings.
    U,
    /// Noncrossing partitions.
    SPlus,
    /// Noncrossing pairings.
    OPlus,
    /// Noncrossing matching pairings.
    UPlus,
}

impl CategoryId {
    pub const ALL: [CategoryId; 6] = [
        CategoryId::S,
        CategoryId::O,
        CategoryId::U,
        CategoryId::SPlus,
        CategoryId::OPlus,
        CategoryId::UPlus,
    ];

    pub fn is_free(self) -> bool {
        matches!(self, CategoryId::SPlus | CategoryId::OPlus | CategoryId::UPlus)
    }

    pub fn is_pairing(self) -> bool {
        !matches!(self, CategoryId::S | CategoryId::SPlus)
    }

    /// Only the unitary-type categories look at leg colors.
    pub fn is_color_sensitive(self) -> bool {
        matches!(self, CategoryId::U | CategoryId::UPlus)
    }

    pub fn free_version(self) -> CategoryId {
        match self {
            CategoryId::S | CategoryId::SPlus => CategoryId::SPlus,
            CategoryId::O | CategoryId::OPlus => CategoryId::OPlus,
            CategoryId::U | CategoryId::UPlus => CategoryId::UPlus,
        }
    }

    pub fn classical_version(self) -> CategoryId {
        match self {
            CategoryId::S | CategoryId::SPlus => CategoryId::S,
            CategoryId::O | CategoryId::OPlus => CategoryId::O,
            CategoryId::U | CategoryId::UPlus => CategoryId::U,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CategoryId::S => "S",
            CategoryId::O => "O",
            CategoryId::U => "U",
            CategoryId::SPlus => "S+",
            CategoryId::OPlus => "O+",
            CategoryId::UPlus => "U+",
        }
    }

    /// The word actually seen by the category: color-blind categories forget colors.
    pub fn effective_word(self, word: &ColoredWord) -> ColoredWord {
        if self.is_color_sensitive() {
            word.clone()
        } else {
            ColoredWord::white(word.len())
        }
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CategoryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "S" => Ok(CategoryId::S),
            "O" => Ok(CategoryId::O),
            "U" => Ok(CategoryId::U),
            "S+" => Ok(CategoryId::SPlus),
            "O+" => Ok(CategoryId::OPlus),
            "U+" => Ok(CategoryId::UPlus),
            other => Err(Error::Parse(format!(
                "unknown category `{other}` (expected S, O, U, S+, O+ or U+)"
            ))),
        }
    }
}

/// Membership of `π` in `D(word)` for the category.
pub fn is_member(category: CategoryId, word: &ColoredWord, p: &SetPartition) -> Result<bool> {
    if p.ground_size() != word.len() {
        return Err(Error::LengthMismatch {
            expected: word.len(),
            actual: p.ground_size(),
        });
    }
    let shape_ok = match category.classical_version() {
        CategoryId::S => true,
        CategoryId::O => p.is_pairing(),
        _ => p.is_matching_pairing(word),
    };
    Ok(shape_ok && (!category.is_free() || p.is_noncrossing()))
}

/// All members of `D(word)`, in lexicographic order of restricted-growth strings.
///
/// Generated by a pruned depth-first search over restricted-growth strings,
/// independently of [`is_member`].
pub fn enumerate_partitions(category: CategoryId, word: &ColoredWord) -> Vec<SetPartition> {
    let k = word.len();
    let mut search = Search {
        colors: word.colors(),
        pairing: category.is_pairing(),
        matching: category.is_color_sensitive(),
        noncrossing: category.is_free(),
        rgs: Vec::with_capacity(k),
        members: Vec::new(),
        out: Vec::new(),
    };
    search.descend();
    search.out
}

struct Search<'a> {
    colors: &'a [Color],
    pairing: bool,
    matching: bool,
    noncrossing: bool,
    rgs: Vec<u8>,
    members: Vec<Vec<usize>>,
    out: Vec<SetPartition>,
}

impl Search<'_> {
    fn descend(&mut self) {
        let leg = self.rgs.len();
        let k = self.colors.len();
        if self.pairing {
            let open = self.members.iter().filter(|m| m.len() == 1).count();
            if open > k - leg {
                return;
            }
        }
        if leg == k {
            self.out.push(SetPartition {
                rgs: self.rgs.clone(),
                blocks: self.members.len(),
            });
            return;
        }
        for b in 0..=self.members.len() {
            if b < self.members.len() && !self.may_join(b, leg) {
                continue;
            }
            if b == self.members.len() {
                self.members.push(vec![leg]);
            } else {
                self.members[b].push(leg);
            }
            self.rgs.push(b as u8);
            self.descend();
            self.rgs.pop();
            if self.members[b].len() == 1 {
                self.members.pop();
            } else {
                self.members[b].pop();
            }
        }
    }

    fn may_join(&self, b: usize, leg: usize) -> bool {
        let block = &self.members[b];
        if self.pairing && block.len() >= 2 {
            return false;
        }
        if self.matching && self.colors[block[0]] == self.colors[leg] {
            return false;
        }
        if self.noncrossing {
            // With the prefix noncrossing, a crossing through `leg` needs some
            // x1 < last < x2 < leg with x1, x2 in one other block.
            let last = *block.last().unwrap();
            for (c, other) in self.members.iter().enumerate() {
                if c == b {
                    continue;
                }
                let before = other.iter().any(|&x| x < last);
                let inside = other.iter().any(|&x| x > last && x < leg);
                if before && inside {
                    return false;
                }
            }
        }
        true
    }
}

/// Members of `D^{(1)}(word) ∩ ... ∩ D^{(s)}(word)`, canonical order.
pub fn enumerate_intersection(categories: &[CategoryId], word: &ColoredWord) -> Result<Vec<SetPartition>> {
    let (first, rest) = categories
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty category list".into()))?;
    let mut out = Vec::new();
    for p in enumerate_partitions(*first, word) {
        let mut keep = true;
        for &c in rest {
            if !is_member(c, word, &p)? {
                keep = false;
                break;
            }
        }
        if keep {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ColoredWord {
        s.parse().unwrap()
    }

    fn p(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    fn names(ps: &[SetPartition]) -> Vec<String> {
        ps.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_partitions(CategoryId::S, &w("oooo")).len(), 15);
        assert_eq!(
            names(&enumerate_partitions(CategoryId::OPlus, &w("oooo"))),
            ["12|34", "14|23"]
        );
        assert_eq!(
            names(&enumerate_partitions(CategoryId::U, &w("oobb"))),
            ["13|24", "14|23"]
        );
        assert_eq!(names(&enumerate_partitions(CategoryId::UPlus, &w("oobb"))), ["14|23"]);
    }

    #[test]
    fn empty_word_has_one_partition_everywhere() {
        for c in CategoryId::ALL {
            let ps = enumerate_partitions(c, &ColoredWord::empty());
            assert_eq!(ps.len(), 1);
            assert_eq!(ps[0].block_count(), 0);
        }
    }

    #[test]
    fn odd_pairings_are_empty() {
        for c in [CategoryId::O, CategoryId::OPlus, CategoryId::U, CategoryId::UPlus] {
            assert!(enumerate_partitions(c, &w("ooo")).is_empty());
        }
        assert!(enumerate_partitions(CategoryId::U, &w("oo")).is_empty());
    }

    #[test]
    fn delta_examples() {
        let pi = p("12|34");
        assert!(pi.delta(&[7, 7, 2, 2]).unwrap());
        assert!(!pi.delta(&[7, 2, 2, 2]).unwrap());
        assert!(p("1234").delta(&[5, 5, 5, 5]).unwrap());
        assert!(matches!(
            pi.delta(&[1, 1]),
            Err(Error::LengthMismatch { expected: 4, actual: 2 })
        ));
    }

    #[test]
    fn join_examples() {
        assert_eq!(p("12|34").join(&p("14|23")).unwrap(), p("1234"));
        assert_eq!(p("13|2|4").join(&p("13|2|4")).unwrap(), p("13|2|4"));
        let sigma = p("13|2");
        assert_eq!(SetPartition::discrete(3).join(&sigma).unwrap(), sigma);
        assert!(matches!(
            p("12").join(&p("1|2|3")),
            Err(Error::GroundSizeMismatch { .. })
        ));
    }

    #[test]
    fn block_counts() {
        assert_eq!(p("12|34").block_count(), 2);
        assert_eq!(p("1234").block_count(), 1);
        assert_eq!(SetPartition::discrete(5).block_count(), 5);
    }

    #[test]
    fn membership_examples() {
        assert!(is_member(CategoryId::O, &w("oooo"), &p("13|24")).unwrap());
        assert!(!is_member(CategoryId::OPlus, &w("oooo"), &p("13|24")).unwrap());
        assert!(!is_member(CategoryId::U, &w("oooo"), &p("12|34")).unwrap());
        assert!(is_member(CategoryId::U, &w("obob"), &p("12|34")).unwrap());
        assert!(is_member(CategoryId::S, &w("ooo"), &p("1|23")).unwrap());
        assert!(is_member(CategoryId::S, &w("oo"), &p("1|2|3")).is_err());
    }

    #[test]
    fn noncrossing_scan() {
        assert!(p("14|23").is_noncrossing());
        assert!(!p("13|24").is_noncrossing());
        assert!(p("1|2|3|4").is_noncrossing());
        assert!(!p("135|24").is_noncrossing());
        assert!(p("15|234").is_noncrossing());
        assert!(!p("14|25|36").is_noncrossing());
    }

    #[test]
    fn text_round_trip() {
        for s in ["12|34", "1|2|3", "1234", "14|23", ""] {
            assert_eq!(p(s).to_string(), s);
        }
        let wide = SetPartition::one_block(10);
        assert_eq!(wide.to_string(), "1,2,3,4,5,6,7,8,9,10");
        assert_eq!(wide.to_string().parse::<SetPartition>().unwrap(), wide);
        assert!("12|23".parse::<SetPartition>().is_err());
        assert!("12|4".parse::<SetPartition>().is_err());
        assert_eq!(w("obbo").to_string(), "obbo");
        assert!("oxo".parse::<ColoredWord>().is_err());
    }

    #[test]
    fn rgs_validation() {
        assert!(SetPartition::from_rgs(vec![0, 1, 0, 2]).is_ok());
        assert!(SetPartition::from_rgs(vec![1, 0]).is_err());
        assert!(SetPartition::from_rgs(vec![0, 2]).is_err());
    }

    #[test]
    fn intersection_of_classical_and_free_pairings() {
        let word = w("oooooo");
        let both = enumerate_intersection(&[CategoryId::O, CategoryId::OPlus], &word).unwrap();
        assert_eq!(both, enumerate_partitions(CategoryId::OPlus, &word));
    }
}
