//! Descriptors for the moduli of prequantum structures: `Ext(π₁^ab, P)` and
//! the character group `Hom(π₁^ab, R/P)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::group::PeriodGroup;

/// `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_m` with `1 < d_1 | d_2 | …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    /// Normalizes arbitrary cyclic orders into invariant factors, dropping
    /// trivial factors `Z/1`.
    pub fn new(free_rank: usize, cyclic: &[u64]) -> Self {
        AbelianInvariants { free_rank, torsion: invariant_factors(cyclic) }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

/// Direct sum of finite cyclic groups, listed as invariant factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelian {
    pub invariant_factors: Vec<u64>,
}

impl FiniteAbelian {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for FiniteAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// `Hom(π₁^ab, T)`: `torus_copies` copies of `T = R/P` plus a finite part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterGroup {
    pub torus_copies: usize,
    pub finite: FiniteAbelian,
}

impl fmt::Display for CharacterGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.torus_copies {
            0 => {}
            1 => parts.push("T_ω".to_string()),
            r => parts.push(format!("T_ω^{r}")),
        }
        if !self.finite.is_trivial() {
            parts.push(self.finite.to_string());
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

/// `Ext(Z^r ⊕ ⊕ Z/d_i, P)` with `P ≅ Z^k`: the free part contributes
/// nothing and each torsion factor contributes `(Z/d_i)^k`.
pub fn moduli_ext(pi1_ab: &AbelianInvariants, periods: &PeriodGroup) -> FiniteAbelian {
    ext_into_free(pi1_ab, periods.rank())
}

pub fn ext_into_free(pi1_ab: &AbelianInvariants, k: usize) -> FiniteAbelian {
    let cyclic: Vec<u64> = pi1_ab.torsion.iter().flat_map(|&d| std::iter::repeat_n(d, k)).collect();
    FiniteAbelian { invariant_factors: invariant_factors(&cyclic) }
}

/// `Hom(Z^r ⊕ ⊕ Z/d_i, R/P)`: one torus per free generator, and the
/// `d`-torsion of `R/P`, which is `(1/d)P / P ≅ (Z/d)^k` for `P ≅ Z^k`.
pub fn characters_h1(pi1_ab: &AbelianInvariants, periods: &PeriodGroup) -> CharacterGroup {
    CharacterGroup { torus_copies: pi1_ab.free_rank, finite: ext_into_free(pi1_ab, periods.rank()) }
}

/// Invariant factors of `⊕ Z/c_i` via prime-power regrouping.
pub fn invariant_factors(cyclic: &[u64]) -> Vec<u64> {
    use std::collections::BTreeMap;
    // prime -> exponents of each primary component
    let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &c in cyclic {
        let mut n = c;
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                primary.entry(p).or_default().push(e);
            }
            p += 1;
        }
        if n > 1 {
            primary.entry(n).or_default().push(1);
        }
    }
    let len = primary.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (p, mut exps) in primary {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, e) in exps.into_iter().enumerate() {
            // Largest exponents go to the last factor so that d_1 | d_2 | …
            out[len - 1 - slot] *= p.pow(e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factor_normalization() {
        assert_eq!(invariant_factors(&[2, 3]), vec![6]);
        assert_eq!(invariant_factors(&[2, 2]), vec![2, 2]);
        assert_eq!(invariant_factors(&[4, 6]), vec![2, 12]);
        assert_eq!(invariant_factors(&[1]), Vec::<u64>::new());
        assert!(invariant_factors(&[]).is_empty());
    }

    #[test]
    fn display() {
        assert_eq!(AbelianInvariants::new(2, &[2]).to_string(), "Z^2 ⊕ Z/2");
        assert_eq!(AbelianInvariants::free(0).to_string(), "0");
        let h = CharacterGroup { torus_copies: 1, finite: FiniteAbelian { invariant_factors: vec![] } };
        assert_eq!(h.to_string(), "T_ω");
    }
}
