//! Irreducible root systems and their Weyl groups.
//!
//! Roots are integer vectors in a standard ambient lattice (F₄, E₆, E₇ and
//! E₈ use doubled coordinates so that every root is integral). The full root
//! set is generated as the orbit of the simple roots under the simple
//! reflections. Weyl group orders come from the invariant degrees and class
//! counts from the classical formulas or a table; [`enumerate_weyl_group`]
//! recomputes both by brute force for groups of moderate size.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

/// Default cap on `|W|` for brute-force enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("invalid root system type {0:?}")]
    InvalidType(String),
    #[error("|W({ty})| = {order} exceeds the enumeration cap {cap}; use the tabulated constants")]
    CapExceeded { ty: RootSystemType, order: BigUint, cap: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// An irreducible reduced root system type such as `A2` or `E8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSystemType {
    family: Family,
    rank: usize,
}

impl RootSystemType {
    pub fn new(family: Family, rank: usize) -> Result<Self, WeylError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        // beyond rank 64 nothing here is usable, and the vectors get silly
        if !ok || rank > 64 {
            return Err(WeylError::InvalidType(format!("{family:?}{rank}")));
        }
        Ok(RootSystemType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Degrees of the basic invariants; their product is `|W|`.
    pub fn degrees(&self) -> Vec<u64> {
        let n = self.rank as u64;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|i| 2 * i).collect(),
            Family::D => {
                let mut d: Vec<u64> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            Family::E => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Family::F => vec![2, 6, 8, 12],
            Family::G => vec![2, 6],
        }
    }

    pub fn weyl_order(&self) -> BigUint {
        self.degrees().iter().map(|&d| BigUint::from(d)).product()
    }

    /// Number of conjugacy classes of the Weyl group.
    pub fn class_count(&self) -> u64 {
        let n = self.rank;
        match self.family {
            Family::A => partition_counts(n + 1)[n + 1],
            Family::B | Family::C => {
                let p = partition_counts(n);
                (0..=n).map(|a| p[a] * p[n - a]).sum()
            }
            Family::D => {
                // signed cycle types with an even number of negative cycles;
                // those with no negative cycles and only even cycles split in two
                let p = partition_counts(n);
                let even = partitions_with_even_part_count(n);
                let pairs: u64 = (0..=n).map(|a| p[a] * even[n - a]).sum();
                pairs + if n % 2 == 0 { p[n / 2] } else { 0 }
            }
            Family::E => match n {
                6 => 25,
                7 => 60,
                _ => 112,
            },
            Family::F => 25,
            Family::G => 6,
        }
    }

    fn simple_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let unit = |dim: usize, i: usize, scale: i64| {
            let mut v = vec![0; dim];
            v[i] = scale;
            v
        };
        let diff = |dim: usize, i: usize, j: usize, scale: i64| {
            let mut v = vec![0; dim];
            v[i] = scale;
            v[j] = -scale;
            v
        };
        match self.family {
            Family::A => (0..n).map(|i| diff(n + 1, i, i + 1, 1)).collect(),
            Family::B | Family::C | Family::D => {
                let mut s: Vec<Vec<i64>> = (0..n - 1).map(|i| diff(n, i, i + 1, 1)).collect();
                s.push(match self.family {
                    Family::B => unit(n, n - 1, 1),
                    Family::C => unit(n, n - 1, 2),
                    _ => {
                        let mut v = vec![0; n];
                        v[n - 2] = 1;
                        v[n - 1] = 1;
                        v
                    }
                });
                s
            }
            Family::G => vec![vec![1, -1, 0], vec![-2, 1, 1]],
            Family::F => vec![
                vec![0, 2, -2, 0],
                vec![0, 0, 2, -2],
                vec![0, 0, 0, 2],
                vec![1, -1, -1, -1],
            ],
            Family::E => {
                let mut s = vec![vec![1, -1, -1, -1, -1, -1, -1, 1], {
                    let mut v = vec![0; 8];
                    v[0] = 2;
                    v[1] = 2;
                    v
                }];
                s.extend((0..6).map(|i| diff(8, i + 1, i, 2)));
                s.truncate(n);
                s
            }
        }
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for RootSystemType {
    type Err = WeylError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || WeylError::InvalidType(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(err()),
        };
        let rank: usize = chars.as_str().trim_start_matches('_').parse().map_err(|_| err())?;
        Self::new(family, rank).map_err(|_| err())
    }
}

impl Serialize for RootSystemType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `p(0), …, p(n)`.
pub fn partition_counts(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            p[total] += p[total - part];
        }
    }
    p
}

/// Number of partitions of `0..=n` into an even number of parts.
fn partitions_with_even_part_count(n: usize) -> Vec<u64> {
    // [total][parity of part count]
    let mut t = vec![[0u64; 2]; n + 1];
    t[0][0] = 1;
    for part in 1..=n {
        for total in part..=n {
            let prev = t[total - part];
            t[total][0] += prev[1];
            t[total][1] += prev[0];
        }
    }
    t.iter().map(|x| x[0]).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn reflect(v: &[i64], alpha: &[i64]) -> Vec<i64> {
    let k = 2 * dot(v, alpha) / dot(alpha, alpha);
    v.iter().zip(alpha).map(|(x, a)| x - k * a).collect()
}

/// A root system realized in integer coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct RootSystemData {
    #[serde(rename = "type")]
    pub ty: RootSystemType,
    pub d: usize,
    pub roots: Vec<Vec<i64>>,
    /// Indices into `roots`.
    pub simple_roots: Vec<usize>,
    #[serde(serialize_with = "crate::bounds::biguint_str")]
    pub w: BigUint,
    pub c: u64,
    pub degrees: Vec<u64>,
}

impl RootSystemData {
    /// Permutation of root indices induced by the `i`-th simple reflection.
    pub fn simple_reflection(&self, i: usize) -> Vec<u16> {
        let index: HashMap<&[i64], usize> =
            self.roots.iter().enumerate().map(|(k, r)| (r.as_slice(), k)).collect();
        let alpha = &self.roots[self.simple_roots[i]];
        self.roots
            .iter()
            .map(|r| index[reflect(r, alpha).as_slice()] as u16)
            .collect()
    }

    /// Whether a permutation of the roots preserves all pairwise inner
    /// products.
    pub fn preserves_inner_products(&self, perm: &[u16]) -> bool {
        self.roots.iter().enumerate().all(|(i, ri)| {
            self.roots.iter().enumerate().all(|(j, rj)| {
                dot(ri, rj) == dot(&self.roots[perm[i] as usize], &self.roots[perm[j] as usize])
            })
        })
    }
}

pub fn build_root_system(ty: RootSystemType) -> RootSystemData {
    let simple = ty.simple_roots();
    let mut roots: Vec<Vec<i64>> = simple.clone();
    let mut seen: HashMap<Vec<i64>, usize> =
        roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    let mut next = 0;
    while next < roots.len() {
        for alpha in &simple {
            let image = reflect(&roots[next], alpha);
            if !seen.contains_key(&image) {
                seen.insert(image.clone(), roots.len());
                roots.push(image);
            }
        }
        next += 1;
    }
    RootSystemData {
        ty,
        d: ty.rank(),
        simple_roots: (0..simple.len()).collect(),
        roots,
        w: ty.weyl_order(),
        c: ty.class_count(),
        degrees: ty.degrees(),
    }
}

/// A Weyl group enumerated as permutations of the root indices.
#[derive(Debug, Clone)]
pub struct EnumeratedWeylGroup {
    pub elements: Vec<Vec<u16>>,
    /// Conjugacy class index of each element; classes are numbered by their
    /// minimal element index.
    pub class_of: Vec<u32>,
    pub class_count: usize,
}

impl EnumeratedWeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

fn compose(a: &[u16], b: &[u16]) -> Vec<u16> {
    b.iter().map(|&j| a[j as usize]).collect()
}

/// Closure of the simple reflections, with conjugacy classes computed as
/// orbits under conjugation by the generators.
pub fn enumerate_weyl_group(ty: RootSystemType, cap: u64) -> Result<EnumeratedWeylGroup, WeylError> {
    let order = ty.weyl_order();
    if order > BigUint::from(cap) {
        return Err(WeylError::CapExceeded { ty, order, cap });
    }
    let data = build_root_system(ty);
    let gens: Vec<Vec<u16>> = (0..data.d).map(|i| data.simple_reflection(i)).collect();

    let identity: Vec<u16> = (0..data.roots.len() as u16).collect();
    let mut index: HashMap<Vec<u16>, u32> = HashMap::new();
    index.insert(identity.clone(), 0);
    let mut elements = vec![identity];
    // neighbours[k][g] = index of elements[k]·s_g
    let mut next = 0;
    while next < elements.len() {
        for g in &gens {
            let prod = compose(&elements[next], g);
            if !index.contains_key(&prod) {
                index.insert(prod.clone(), elements.len() as u32);
                elements.push(prod);
            }
        }
        next += 1;
    }

    const UNSEEN: u32 = u32::MAX;
    let mut class_of = vec![UNSEEN; elements.len()];
    let mut class_count = 0usize;
    for seed in 0..elements.len() {
        if class_of[seed] != UNSEEN {
            continue;
        }
        let id = class_count as u32;
        class_count += 1;
        class_of[seed] = id;
        let mut stack = vec![seed];
        while let Some(k) = stack.pop() {
            for g in &gens {
                let conj = compose(g, &compose(&elements[k], g));
                let j = index[&conj] as usize;
                if class_of[j] == UNSEEN {
                    class_of[j] = id;
                    stack.push(j);
                }
            }
        }
    }
    Ok(EnumeratedWeylGroup {
        elements,
        class_of,
        class_count,
    })
}

/// Rank `d`, Weyl order `w`, class count `c`, and `t = w`, the degree over
/// `M` of the splitting field of a generic maximal torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupConstants {
    #[serde(rename = "type")]
    pub ty: RootSystemType,
    pub d: usize,
    #[serde(serialize_with = "crate::bounds::biguint_str")]
    pub w: BigUint,
    pub c: u64,
    #[serde(serialize_with = "crate::bounds::biguint_str")]
    pub t: BigUint,
    pub degrees: Vec<u64>,
}

impl GroupConstants {
    pub fn t_u64(&self) -> Option<u64> {
        self.t.to_u64()
    }
}

pub fn constants_for_group(ty: RootSystemType) -> GroupConstants {
    let w = ty.weyl_order();
    GroupConstants {
        ty,
        d: ty.rank(),
        t: w.clone(),
        w,
        c: ty.class_count(),
        degrees: ty.degrees(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> RootSystemType {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_validate() {
        assert_eq!(ty("A1").to_string(), "A1");
        assert_eq!(ty("e8").rank(), 8);
        assert_eq!(ty("D_4").family(), Family::D);
        for bad in ["G3", "B1", "C1", "D3", "E5", "E9", "F3", "A0", "X2", "", "A"] {
            assert!(bad.parse::<RootSystemType>().is_err(), "{bad}");
        }
    }

    #[test]
    fn root_counts_match_reflection_counts() {
        for s in ["A1", "A4", "B3", "C4", "D5", "G2", "F4", "E6", "E7", "E8"] {
            let t = ty(s);
            let data = build_root_system(t);
            let reflections: u64 = t.degrees().iter().map(|d| d - 1).sum();
            assert_eq!(data.roots.len() as u64, 2 * reflections, "{s}");
        }
        assert_eq!(build_root_system(ty("A3")).roots.len(), 12);
        assert_eq!(build_root_system(ty("E8")).roots.len(), 240);
    }

    #[test]
    fn constants_examples() {
        let a2 = build_root_system(ty("A2"));
        assert_eq!((a2.d, a2.w.clone(), a2.c), (2, BigUint::from(6u32), 3));
        let g2 = build_root_system(ty("G2"));
        assert_eq!((g2.d, g2.w.clone(), g2.c), (2, BigUint::from(12u32), 6));
        let e8 = build_root_system(ty("E8"));
        assert_eq!((e8.d, e8.w.clone(), e8.c), (8, BigUint::from(696_729_600u64), 112));
        assert_eq!(ty("E7").weyl_order(), BigUint::from(2_903_040u64));
        assert_eq!(ty("E7").class_count(), 60);
    }

    #[test]
    fn constants_for_group_examples() {
        let c = constants_for_group(ty("A1"));
        assert_eq!((c.d, c.w.to_u64(), c.c, c.t_u64()), (1, Some(2), 2, Some(2)));
        let c = constants_for_group(ty("D4"));
        assert_eq!((c.d, c.w.to_u64(), c.c, c.t_u64()), (4, Some(192), 13, Some(192)));
        let c = constants_for_group(ty("B2"));
        assert_eq!((c.d, c.w.to_u64(), c.c, c.t_u64()), (2, Some(8), 5, Some(8)));
    }

    #[test]
    fn enumeration_examples() {
        let b3 = enumerate_weyl_group(ty("B3"), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!((b3.order(), b3.class_count), (48, 10));
        let a1 = enumerate_weyl_group(ty("A1"), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!((a1.order(), a1.class_count), (2, 2));
        let f4 = enumerate_weyl_group(ty("F4"), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!((f4.order(), f4.class_count), (1152, 25));
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_weyl_group(ty("E7"), DEFAULT_ENUMERATION_CAP),
            Err(WeylError::CapExceeded { .. })
        ));
        assert!(enumerate_weyl_group(ty("A3"), 23).is_err());
        assert!(enumerate_weyl_group(ty("A3"), 24).is_ok());
    }

    #[test]
    fn type_a_classes_are_partitions() {
        let p = partition_counts(7);
        for n in 1..=6 {
            let t = RootSystemType::new(Family::A, n).unwrap();
            let g = enumerate_weyl_group(t, DEFAULT_ENUMERATION_CAP).unwrap();
            assert_eq!(g.class_count as u64, p[n + 1], "A{n}");
        }
    }

    #[test]
    fn elements_are_isometries() {
        for s in ["A3", "B3", "C3", "G2", "F4"] {
            let data = build_root_system(ty(s));
            let g = enumerate_weyl_group(ty(s), DEFAULT_ENUMERATION_CAP).unwrap();
            for perm in &g.elements {
                let mut sorted = perm.clone();
                sorted.sort_unstable();
                assert!(sorted.iter().enumerate().all(|(i, &j)| i == j as usize));
                assert!(data.preserves_inner_products(perm), "{s}");
            }
        }
    }

    #[test]
    fn class_labels_are_canonical() {
        let g = enumerate_weyl_group(ty("B2"), DEFAULT_ENUMERATION_CAP).unwrap();
        // first occurrence of each class id is increasing
        let mut next = 0;
        for &c in &g.class_of {
            assert!(c <= next);
            if c == next {
                next += 1;
            }
        }
        assert_eq!(next as usize, g.class_count);
        assert_eq!(g.class_of[0], 0);
    }

    #[test]
    fn even_part_partitions() {
        assert_eq!(partitions_with_even_part_count(4), vec![1, 0, 1, 1, 3]);
    }
}
