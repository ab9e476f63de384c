//! Integer partitions stored in multiplicity form `1^{m_1} 2^{m_2} ...`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest weight accepted by [`partitions_of`].
pub const MAX_PARTITION_WEIGHT: u32 = 64;

/// A partition as `(part, multiplicity)` pairs with strictly increasing parts
/// and positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<(u32, u32)>,
}

impl Partition {
    pub fn empty() -> Partition {
        Partition::default()
    }

    /// Builds from `(part, multiplicity)` pairs in any order; equal parts merge
    /// and zero multiplicities are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Partition> {
        let mut parts: Vec<(u32, u32)> = Vec::new();
        for (a, m) in pairs {
            if a == 0 {
                return Err(Error::InvalidInput("partition parts must be positive".into()));
            }
            if m > 0 {
                parts.push((a, m));
            }
        }
        parts.sort_unstable();
        parts.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        Ok(Partition { parts })
    }

    /// Builds from a list of parts, e.g. `[2, 1, 1]`.
    pub fn from_parts(parts: &[u32]) -> Result<Partition> {
        Partition::from_pairs(parts.iter().map(|&a| (a, 1)))
    }

    /// `(part, multiplicity)` pairs, parts increasing.
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().map(|&(a, m)| a * m).sum()
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        self.parts
            .iter()
            .find(|&&(a, _)| a == part)
            .map_or(0, |&(_, m)| m)
    }

    pub fn max_part(&self) -> u32 {
        self.parts.last().map_or(0, |&(a, _)| a)
    }

    /// Number of parts counted with multiplicity.
    pub fn length(&self) -> u32 {
        self.parts.iter().map(|&(_, m)| m).sum()
    }

    /// `ℓ(λ)`: the number of distinct part sizes.
    pub fn distinct_part_count(&self) -> usize {
        self.parts.len()
    }

    /// Parts in decreasing order, with repetition.
    pub fn to_parts_desc(&self) -> Vec<u32> {
        self.parts
            .iter()
            .rev()
            .flat_map(|&(a, m)| std::iter::repeat(a).take(m as usize))
            .collect()
    }

    /// Conjugate partition `λ'` as a decreasing part list.
    pub fn conjugate_parts(&self) -> Vec<u32> {
        (1..=self.max_part())
            .map(|i| {
                self.parts
                    .iter()
                    .filter(|&&(a, _)| a >= i)
                    .map(|&(_, m)| m)
                    .sum()
            })
            .collect()
    }

    /// Halves every multiplicity; fails if any multiplicity is odd.
    pub fn halve_multiplicities(&self) -> Result<Partition> {
        if let Some(&(a, m)) = self.parts.iter().find(|&&(_, m)| m % 2 == 1) {
            return Err(Error::InvalidInput(format!(
                "part {a} has odd multiplicity {m}"
            )));
        }
        Ok(Partition {
            parts: self.parts.iter().map(|&(a, m)| (a, m / 2)).collect(),
        })
    }

    pub fn double_multiplicities(&self) -> Partition {
        Partition {
            parts: self.parts.iter().map(|&(a, m)| (a, 2 * m)).collect(),
        }
    }

    pub fn all_multiplicities_even(&self) -> bool {
        self.parts.iter().all(|&(_, m)| m % 2 == 0)
    }

    /// Adds multiplicities part by part.
    pub fn merge(&self, other: &Partition) -> Partition {
        Partition::from_pairs(self.parts.iter().chain(&other.parts).copied())
            .expect("parts already positive")
    }

    /// Centralizer exponent of one polynomial block of degree `d`:
    /// `d·(2 Σ_{u<v} a_u m_u m_v + Σ_j (a_j − 1) m_j²)` with parts `a` in
    /// increasing order.
    pub fn gamma_exponent(&self, d: u64) -> Result<u64> {
        if self.is_empty() {
            return Err(Error::InvalidInput("gamma of the empty partition".into()));
        }
        let mut cross = 0u64;
        for (u, &(a_u, m_u)) in self.parts.iter().enumerate() {
            for &(_, m_v) in &self.parts[u + 1..] {
                cross += a_u as u64 * m_u as u64 * m_v as u64;
            }
        }
        let diag: u64 = self
            .parts
            .iter()
            .map(|&(a, m)| (a as u64 - 1) * (m as u64).pow(2))
            .sum();
        Ok(d * (2 * cross + diag))
    }

    /// The same exponent via the conjugate partition:
    /// `d·(Σ_i (λ'_i)² − Σ_j m_j²)`.
    pub fn gamma_exponent_conjugate(&self, d: u64) -> Result<u64> {
        if self.is_empty() {
            return Err(Error::InvalidInput("gamma of the empty partition".into()));
        }
        let conj: u64 = self.conjugate_parts().iter().map(|&c| (c as u64).pow(2)).sum();
        let mults: u64 = self.parts.iter().map(|&(_, m)| (m as u64).pow(2)).sum();
        Ok(d * (conj - mults))
    }

    /// Multiplicity vector `(m_1, ..., m_w)` for the weight `w`.
    pub fn multiplicity_vector(&self) -> Vec<u32> {
        (1..=self.weight()).map(|a| self.multiplicity(a)).collect()
    }
}

/// All partitions of `n`, ordered lexicographically by multiplicity vector
/// `(m_1, m_2, ..., m_n)`.
pub fn partitions_of(n: u32) -> Result<Vec<Partition>> {
    if n > MAX_PARTITION_WEIGHT {
        return Err(Error::bound("partition weight", n, MAX_PARTITION_WEIGHT));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    build(n, n, &mut current, &mut out);
    let mut keyed: Vec<(Vec<u32>, Partition)> = out
        .into_iter()
        .map(|parts| {
            let p = Partition::from_parts(&parts).expect("positive parts");
            let mut key = vec![0u32; n as usize];
            for &(a, m) in p.pairs() {
                key[a as usize - 1] = m;
            }
            (key, p)
        })
        .collect();
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, p)| p).collect())
}

fn build(rest: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rest == 0 {
        out.push(current.clone());
        return;
    }
    for a in (1..=max.min(rest)).rev() {
        current.push(a);
        build(rest - a, a, current, out);
        current.pop();
    }
}

/// `"1^2+3^4"`; parts with multiplicity one may omit the exponent on input.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.parts.iter().map(|(a, m)| format!("{a}^{m}")).collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let bad = |t: &str| Error::Parse(format!("invalid partition term '{t}' in '{s}'"));
        let pairs = s
            .split('+')
            .map(|term| {
                let term = term.trim();
                let (a, m) = term.split_once('^').unwrap_or((term, "1"));
                let a: u32 = a.trim().parse().map_err(|_| bad(term))?;
                let m: u32 = m.trim().parse().map_err(|_| bad(term))?;
                if a == 0 || m == 0 {
                    return Err(bad(term));
                }
                Ok((a, m))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::from_pairs(pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_of(0).unwrap(), vec![Partition::empty()]);
        assert_eq!(partitions_of(4).unwrap().len(), 5);
        assert_eq!(partitions_of(7).unwrap().len(), 15);
        assert!(partitions_of(65).unwrap_err().is_resource_bound());
    }

    #[test]
    fn partitions_are_ordered_by_multiplicity_vector() {
        let ps = partitions_of(3).unwrap();
        let rendered: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        // vectors (0,0,1) < (1,1,0) < (3,0,0)
        assert_eq!(rendered, vec!["3^1", "1^1+2^1", "1^3"]);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(part("2").gamma_exponent(1).unwrap(), 1);
        assert_eq!(part("1+2").gamma_exponent(1).unwrap(), 3);
        assert_eq!(part("1^2").gamma_exponent(1).unwrap(), 0);
        assert!(Partition::empty().gamma_exponent(1).is_err());
    }

    #[test]
    fn distinct_parts_and_halving() {
        assert_eq!(part("1^2").distinct_part_count(), 1);
        assert_eq!(part("1+2^2+5").distinct_part_count(), 3);
        assert_eq!(Partition::empty().distinct_part_count(), 0);
        assert_eq!(part("1^2").halve_multiplicities().unwrap(), part("1"));
        assert_eq!(part("1^2+3^4").halve_multiplicities().unwrap(), part("1+3^2"));
        assert!(part("2^3").halve_multiplicities().is_err());
    }

    #[test]
    fn text_format() {
        assert_eq!(part("1^2+3^4").to_string(), "1^2+3^4");
        assert_eq!(part("3^4+1^2"), part("1^2+3^4"));
        assert!("1^0".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
    }

    #[test]
    fn gamma_forms_agree_exhaustively() {
        for n in 1..=12 {
            for p in partitions_of(n).unwrap() {
                assert_eq!(
                    p.gamma_exponent(1).unwrap(),
                    p.gamma_exponent_conjugate(1).unwrap(),
                    "{p}"
                );
            }
        }
    }

    #[test]
    fn gamma_scales_with_degree() {
        for n in 1..=8 {
            for p in partitions_of(n).unwrap() {
                let g1 = p.gamma_exponent(1).unwrap();
                for d in 1..=4 {
                    assert_eq!(p.gamma_exponent(d).unwrap(), d * g1);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn halve_then_double_is_identity(pairs in prop::collection::vec((1u32..10, 1u32..6), 1..5)) {
            let p = Partition::from_pairs(pairs).unwrap();
            if let Ok(h) = p.halve_multiplicities() {
                prop_assert_eq!(h.double_multiplicities(), p.clone());
            }
            prop_assert_eq!(p.double_multiplicities().halve_multiplicities().unwrap(), p);
        }

        #[test]
        fn text_round_trip(pairs in prop::collection::vec((1u32..20, 1u32..6), 0..6)) {
            let p = Partition::from_pairs(pairs).unwrap();
            prop_assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
        }
    }
}
