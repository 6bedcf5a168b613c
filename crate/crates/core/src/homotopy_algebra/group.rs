use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::periods::lattice::smith_invariants;
use crate::periods::AbelianInvariants;

use super::word::{Letter, Word};

/// How elements of the presented group are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupKind {
    /// `Z^rank`; elements are exponent vectors.
    FreeAbelian { rank: usize },
    /// Free group; elements are freely reduced words.
    Free { rank: usize },
    /// Fundamental group of the closed orientable surface of genus `g ≥ 2`
    /// with generators `a₁, b₁, …, a_g, b_g`; elements are Dehn-reduced words.
    Surface { genus: usize },
}

/// A group element in the normal form of its [`GroupKind`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupElement {
    Abelian(Vec<i64>),
    Word(Word),
}

/// `⟨S | R⟩` together with a normal-form procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    generators: Vec<String>,
    relations: Vec<Word>,
    kind: GroupKind,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relations: Vec<Word>, kind: GroupKind) -> Result<Self> {
        let expected = match kind {
            GroupKind::FreeAbelian { rank } | GroupKind::Free { rank } => rank,
            GroupKind::Surface { genus } => {
                if genus < 2 {
                    return Err(Error::Invalid(
                        "surface groups need genus ≥ 2 (use free abelian rank 2 for the torus)".into(),
                    ));
                }
                2 * genus
            }
        };
        if generators.len() != expected {
            return Err(Error::Invalid(format!("{kind:?} needs {expected} generators, got {}", generators.len())));
        }
        let relators = match kind {
            GroupKind::Surface { genus } => cyclic_relators(genus),
            _ => Vec::new(),
        };
        let p = Presentation { generators, relations, kind, relators };
        for r in &p.relations {
            if r.letters().iter().any(|l| l.generator >= expected) {
                return Err(Error::InvalidWord("relation uses an undeclared generator".into()));
            }
            if !p.is_identity(&p.element(r)) {
                return Err(Error::NotARelation(r.display(&p.generators).to_string()));
            }
        }
        Ok(p)
    }

    /// `Z^rank` with the commutator relations `[g_i, g_j]`.
    pub fn free_abelian(names: &[&str]) -> Self {
        let gens: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let mut rels = Vec::new();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                rels.push(Word::commutator(&Word::letter(i, false), &Word::letter(j, false)));
            }
        }
        Presentation::new(gens, rels, GroupKind::FreeAbelian { rank: names.len() }).expect("valid")
    }

    pub fn free(names: &[&str]) -> Self {
        Presentation::new(
            names.iter().map(|s| s.to_string()).collect(),
            Vec::new(),
            GroupKind::Free { rank: names.len() },
        )
        .expect("valid")
    }

    /// `⟨a₁, b₁, …, a_g, b_g | [a₁,b₁]⋯[a_g,b_g]⟩`.
    pub fn surface(genus: usize) -> Result<Self> {
        let mut gens = Vec::new();
        for i in 1..=genus {
            gens.push(format!("a{i}"));
            gens.push(format!("b{i}"));
        }
        Presentation::new(gens, vec![surface_relator(genus)], GroupKind::Surface { genus })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.generators)
    }

    pub fn show(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }

    pub fn show_element(&self, g: &GroupElement) -> String {
        self.show(&self.normal_word(g))
    }

    pub fn identity(&self) -> GroupElement {
        match self.kind {
            GroupKind::FreeAbelian { rank } => GroupElement::Abelian(vec![0; rank]),
            _ => GroupElement::Word(Word::empty()),
        }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        self.element(&Word::letter(i, false))
    }

    /// The normal form of the image of `w`.
    pub fn element(&self, w: &Word) -> GroupElement {
        match self.kind {
            GroupKind::FreeAbelian { rank } => GroupElement::Abelian(w.exponent_sums(rank)),
            GroupKind::Free { .. } => GroupElement::Word(w.free_reduce()),
            GroupKind::Surface { genus } => GroupElement::Word(self.dehn_reduce(w, genus)),
        }
    }

    /// A word representing `g`; for abelian groups `g₁^{v₁} g₂^{v₂} ⋯`.
    pub fn normal_word(&self, g: &GroupElement) -> Word {
        match g {
            GroupElement::Abelian(v) => {
                let mut w = Word::empty();
                for (i, &n) in v.iter().enumerate() {
                    w = w.concat(&Word::power(i, n));
                }
                w
            }
            GroupElement::Word(w) => w.clone(),
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (a, b) {
            (GroupElement::Abelian(x), GroupElement::Abelian(y)) => {
                GroupElement::Abelian(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            _ => self.element(&self.normal_word(a).concat(&self.normal_word(b))),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        match a {
            GroupElement::Abelian(x) => GroupElement::Abelian(x.iter().map(|p| -p).collect()),
            GroupElement::Word(w) => self.element(&w.inverse()),
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        match g {
            GroupElement::Abelian(v) => v.iter().all(|&x| x == 0),
            GroupElement::Word(w) => w.is_empty(),
        }
    }

    /// Equality in the group (the word problem).
    pub fn equal(&self, a: &GroupElement, b: &GroupElement) -> bool {
        match self.kind {
            GroupKind::Surface { .. } => self.is_identity(&self.mul(&self.inv(a), b)),
            _ => a == b,
        }
    }

    /// Invariant factors of `π^ab = Z^S / ⟨exponent sums of R⟩`.
    pub fn abelianization(&self) -> AbelianInvariants {
        let n = self.rank();
        let rows: Vec<Vec<BigInt>> =
            self.relations.iter().map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect()).collect();
        let inv = if rows.is_empty() { Vec::new() } else { smith_invariants(&rows) };
        let torsion: Vec<u64> = inv.iter().filter(|d| !d.is_one()).map(|d| d.to_u64().expect("small")).collect();
        AbelianInvariants::new(n - inv.len(), &torsion)
    }

    /// Dehn's algorithm: replace any piece longer than half of a cyclic
    /// conjugate of the relator (or its inverse) by the inverse of the
    /// complementary piece, then free-reduce, until nothing applies. For the
    /// standard surface relator with `g ≥ 2` the result is empty exactly when
    /// the word is trivial in the group.
    fn dehn_reduce(&self, w: &Word, genus: usize) -> Word {
        let half = 2 * genus;
        let mut cur = w.free_reduce();
        'outer: loop {
            let l = cur.letters();
            for i in 0..l.len() {
                for r in &self.relators {
                    let rl = r.letters();
                    let k = l[i..].iter().zip(rl).take_while(|(a, b)| a == b).count();
                    if k > half {
                        let replacement: Vec<Letter> = rl[k..].iter().rev().map(|x| x.inv()).collect();
                        let mut next = l[..i].to_vec();
                        next.extend(replacement);
                        next.extend_from_slice(&l[i + k..]);
                        cur = Word(next).free_reduce();
                        continue 'outer;
                    }
                }
            }
            return cur;
        }
    }
}

/// `[a₁,b₁]⋯[a_g,b_g]` over generators `2i, 2i+1`.
pub fn surface_relator(genus: usize) -> Word {
    let mut w = Word::empty();
    for i in 0..genus {
        w = w.concat(&Word::commutator(&Word::letter(2 * i, false), &Word::letter(2 * i + 1, false)));
    }
    w
}

fn cyclic_relators(genus: usize) -> Vec<Word> {
    let r = surface_relator(genus);
    let mut out = Vec::new();
    for base in [r.clone(), r.inverse()] {
        let l = base.letters();
        for k in 0..l.len() {
            let mut v = l[k..].to_vec();
            v.extend_from_slice(&l[..k]);
            out.push(Word(v));
        }
    }
    out
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|r| self.show(r)).collect();
        write!(f, "⟨{} | {}⟩", self.generators.join(", "), rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_normal_forms() {
        let p = Presentation::free_abelian(&["A", "B"]);
        let w = p.parse_word("A B A^-1 B^-1").unwrap();
        assert!(p.is_identity(&p.element(&w)));
        assert_eq!(p.element(&p.parse_word("B A A").unwrap()), GroupElement::Abelian(vec![2, 1]));
        assert_eq!(p.abelianization(), AbelianInvariants::free(2));
    }

    #[test]
    fn free_group_does_not_commute() {
        let p = Presentation::free(&["a", "b"]);
        let ab = p.element(&p.parse_word("a b").unwrap());
        let ba = p.element(&p.parse_word("b a").unwrap());
        assert_ne!(ab, ba);
        assert!(!p.equal(&ab, &ba));
    }

    #[test]
    fn surface_word_problem() {
        let p = Presentation::surface(2).unwrap();
        let r = p.parse_word("[a1,b1][a2,b2]").unwrap();
        assert!(p.is_identity(&p.element(&r)));
        // Cyclic conjugates and inverses of the relator are trivial too.
        let c = p.parse_word("b1^-1 [a2,b2] a1 b1 a1^-1").unwrap();
        assert!(p.is_identity(&p.element(&c)));
        assert!(p.is_identity(&p.element(&r.inverse())));
        // A single commutator is not.
        let k = p.parse_word("[a1,b1]").unwrap();
        assert!(!p.is_identity(&p.element(&k)));
        // [a1,b1] = ([a2,b2])^-1 in the group.
        let x = p.element(&k);
        let y = p.element(&p.parse_word("[a2,b2]^-1").unwrap());
        assert!(p.equal(&x, &y));
        assert_eq!(p.abelianization(), AbelianInvariants::free(4));
    }

    #[test]
    fn bad_relations_are_rejected() {
        let gens = vec!["a".to_string(), "b".to_string()];
        let err = Presentation::new(gens, vec![Word::letter(0, false)], GroupKind::Free { rank: 2 });
        assert!(matches!(err, Err(Error::NotARelation(_))));
    }

    #[test]
    fn abelianization_with_torsion() {
        let gens = vec!["a".to_string(), "b".to_string()];
        let p = Presentation::new(
            gens,
            vec![Word::commutator(&Word::letter(0, false), &Word::letter(1, false))],
            GroupKind::FreeAbelian { rank: 2 },
        )
        .unwrap();
        assert_eq!(p.abelianization(), AbelianInvariants::free(2));
    }
}
