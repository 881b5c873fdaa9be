//! Symmetric group machinery: permutations, reduced words, inversions,
//! pairs of disjoint inversions and the sign function epsilon.
//!
//! Conventions. A permutation `w` maps strand positions (0-based) at the
//! bottom of a diagram to positions at the top. A reduced word
//! `(i_1, ..., i_r)` is kept in *reading order*: `w = s_{i_1} ∘ ... ∘ s_{i_r}`
//! as composition of functions, so the rightmost letter acts first. Drawn as
//! a diagram read bottom-to-top, the rightmost letter is the lowest crossing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of {0, .., n-1}, stored by images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u8).collect(),
        }
    }

    /// Builds from images; returns None if not a bijection.
    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if (v as usize) >= n || seen[v as usize] {
                return None;
            }
            seen[v as usize] = true;
        }
        Some(Perm { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, p: usize) -> usize {
        self.images[p] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.n()];
        for (p, &v) in self.images.iter().enumerate() {
            inv[v as usize] = p as u8;
        }
        Perm { images: inv }
    }

    /// Function composition: (self ∘ other)(p) = self(other(p)).
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n());
        Perm {
            images: (0..self.n())
                .map(|p| self.images[other.images[p] as usize])
                .collect(),
        }
    }

    /// s_i ∘ self: swaps the values i, i+1.
    pub fn mul_gen_left(&self, i: usize) -> Perm {
        let mut images = self.images.clone();
        for v in images.iter_mut() {
            if *v as usize == i {
                *v = i as u8 + 1;
            } else if *v as usize == i + 1 {
                *v = i as u8;
            }
        }
        Perm { images }
    }

    /// self ∘ s_i: swaps the entries at positions i, i+1.
    pub fn mul_gen_right(&self, i: usize) -> Perm {
        let mut images = self.images.clone();
        images.swap(i, i + 1);
        Perm { images }
    }

    /// Number of inversions, equal to the length of any reduced word.
    pub fn length(&self) -> usize {
        let mut count = 0;
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                if self.images[a] > self.images[b] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Inversions (a, b), a < b, w(a) > w(b), in lex order.
    pub fn inversions(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                if self.images[a] > self.images[b] {
                    out.push((a as u8, b as u8));
                }
            }
        }
        out
    }

    /// Generators i with l(s_i w) = l(w) - 1.
    pub fn left_descents(&self) -> Vec<usize> {
        let inv = self.inverse();
        (0..self.n().saturating_sub(1))
            .filter(|&i| inv.images[i] > inv.images[i + 1])
            .collect()
    }

    /// Whether l(s_i w) = l(w) + 1.
    pub fn left_gen_raises(&self, i: usize) -> bool {
        let inv = self.inverse();
        inv.images[i] < inv.images[i + 1]
    }

    /// The longest element of S_n.
    pub fn longest(n: usize) -> Perm {
        Perm {
            images: (0..n as u8).rev().collect(),
        }
    }

    /// Lexicographically smallest reduced word, in reading order.
    ///
    /// Greedy on the first letter: the set of possible first letters of a
    /// reduced word is exactly the set of left descents, and the tail of a
    /// lex-min word is the lex-min word of the shortened permutation.
    pub fn canonical_word(&self) -> Vec<u8> {
        let mut w = self.clone();
        let mut out = Vec::with_capacity(w.length());
        loop {
            match w.left_descents().first().copied() {
                None => break,
                Some(i) => {
                    out.push(i as u8);
                    w = w.mul_gen_left(i);
                }
            }
        }
        out
    }

    /// All reduced words in reading order (DFS over left descents).
    pub fn all_reduced_words(&self) -> Vec<Vec<u8>> {
        fn go(w: &Perm, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            let descents = w.left_descents();
            if descents.is_empty() {
                out.push(prefix.clone());
                return;
            }
            for i in descents {
                prefix.push(i as u8);
                go(&w.mul_gen_left(i), prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // one-line notation, 1-based
        write!(f, "[")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

/// Permutation of a word in reading order: s_{i_1} ∘ ... ∘ s_{i_r} on n strands.
pub fn perm_of_word(word: &[u8], n: usize) -> Perm {
    let mut w = Perm::identity(n);
    for &i in word.iter().rev() {
        w = w.mul_gen_left(i as usize);
    }
    w
}

/// Checks that a word is reduced on n strands.
pub fn is_reduced(word: &[u8], n: usize) -> bool {
    perm_of_word(word, n).length() == word.len()
}

/// A reduced word for a permutation, in reading order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedWord {
    pub letters: Vec<u8>,
    pub n: usize,
}

impl ReducedWord {
    pub fn new(letters: Vec<u8>, n: usize) -> Result<Self> {
        let perm = perm_of_word(&letters, n);
        if perm.length() != letters.len() {
            return Err(Error::NonReducedWord {
                len: letters.len(),
                inversions: perm.length(),
            });
        }
        Ok(ReducedWord { letters, n })
    }

    pub fn perm(&self) -> Perm {
        perm_of_word(&self.letters, self.n)
    }
}

/// For each letter of a word (reading order), the inversion (a, b) of the
/// bottom strands crossed at that letter.
///
/// The letter at index t acts on top of the suffix after it, so the strands
/// it crosses are the preimages of (i_t, i_t + 1) under that suffix.
pub fn letter_inversions(word: &[u8], n: usize) -> Vec<(u8, u8)> {
    let mut out = vec![(0u8, 0u8); word.len()];
    let mut suffix = Perm::identity(n);
    for t in (0..word.len()).rev() {
        let i = word[t] as usize;
        let inv = suffix.inverse();
        let a = inv.apply(i) as u8;
        let b = inv.apply(i + 1) as u8;
        out[t] = (a.min(b), a.max(b));
        suffix = suffix.mul_gen_left(i);
    }
    out
}

/// Pairs of disjoint inversions of w: quadruples (j1, j2, k1, k2) where
/// (j1, j2) and (k1, k2) are inversions, j1 < k1, and all four are distinct.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InversionPairSet {
    pub pairs: Vec<(u8, u8, u8, u8)>,
}

pub fn pdi(w: &Perm) -> InversionPairSet {
    let invs = w.inversions();
    let mut pairs = Vec::new();
    for (idx, &(j1, j2)) in invs.iter().enumerate() {
        for &(k1, k2) in &invs[idx + 1..] {
            // inversions are lex sorted, so j1 <= k1 here
            if j1 == k1 || j1 == k2 || j2 == k1 || j2 == k2 {
                continue;
            }
            if j1 < k1 {
                pairs.push((j1, j2, k1, k2));
            } else {
                pairs.push((k1, k2, j1, j2));
            }
        }
    }
    pairs.sort_unstable();
    InversionPairSet { pairs }
}

/// The sign epsilon(w') of a reduced word, the product over all pairs of
/// disjoint inversions x = (j1, j2, k1, k2) of +1 when the (j1, j2)-crossing
/// lies below (to the right of, in reading order) the (k1, k2)-crossing,
/// and -1 otherwise.
pub fn epsilon_sign(word: &ReducedWord) -> i64 {
    let labels = letter_inversions(&word.letters, word.n);
    let w = word.perm();
    let mut sign = 1i64;
    for &(j1, j2, k1, k2) in &pdi(&w).pairs {
        let tj = labels.iter().position(|&x| x == (j1, j2)).unwrap();
        let tk = labels.iter().position(|&x| x == (k1, k2)).unwrap();
        // right of = later in reading order = below in the diagram
        if tj < tk {
            sign = -sign;
        }
    }
    sign
}

/// epsilon of the canonical word of w.
pub fn epsilon_canonical(w: &Perm) -> i64 {
    let word = ReducedWord::new(w.canonical_word(), w.n()).unwrap();
    epsilon_sign(&word)
}

/// The sign relating sigma_{s_i w} = eps * sigma_i sigma_w,
/// defined when l(s_i w) = l(w) + 1.
pub fn epsilon_step(w: &Perm, i: usize) -> i64 {
    debug_assert!(w.left_gen_raises(i));
    let mut word = vec![i as u8];
    word.extend(w.canonical_word());
    let rw = ReducedWord::new(word, w.n()).unwrap();
    epsilon_sign(&rw) * epsilon_canonical(w)
}

/// All permutations of S_n in a deterministic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    fn go(remaining: &mut Vec<u8>, prefix: &mut Vec<u8>, out: &mut Vec<Perm>) {
        if remaining.is_empty() {
            out.push(Perm {
                images: prefix.clone(),
            });
            return;
        }
        for k in 0..remaining.len() {
            let v = remaining.remove(k);
            prefix.push(v);
            go(remaining, prefix, out);
            prefix.pop();
            remaining.insert(k, v);
        }
    }
    let mut out = Vec::new();
    go(
        &mut (0..n as u8).collect(),
        &mut Vec::with_capacity(n),
        &mut out,
    );
    out
}

/// One elementary rewriting move on a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordMove {
    /// Swap distant letters at indices (k, k+1).
    Comm(usize),
    /// Replace (a, b, a) at indices (k, k+1, k+2) by (b, a, b), |a-b| = 1.
    Braid(usize),
}

pub fn apply_move(word: &mut Vec<u8>, mv: WordMove) {
    match mv {
        WordMove::Comm(k) => word.swap(k, k + 1),
        WordMove::Braid(k) => {
            let (a, b) = (word[k], word[k + 1]);
            word[k] = b;
            word[k + 1] = a;
            word[k + 2] = b;
        }
    }
}

fn neighbors(word: &[u8]) -> Vec<(WordMove, Vec<u8>)> {
    let mut out = Vec::new();
    for k in 0..word.len().saturating_sub(1) {
        if word[k].abs_diff(word[k + 1]) >= 2 {
            let mut w = word.to_vec();
            let mv = WordMove::Comm(k);
            apply_move(&mut w, mv);
            out.push((mv, w));
        }
    }
    for k in 0..word.len().saturating_sub(2) {
        if word[k] == word[k + 2] && word[k].abs_diff(word[k + 1]) == 1 {
            let mut w = word.to_vec();
            let mv = WordMove::Braid(k);
            apply_move(&mut w, mv);
            out.push((mv, w));
        }
    }
    out
}

/// A sequence of elementary moves turning `from` into `to`; both must be
/// reduced words of the same permutation (Matsumoto's theorem guarantees a
/// path exists). Breadth-first search.
pub fn move_path(from: &[u8], to: &[u8]) -> Vec<WordMove> {
    use std::collections::{HashMap, VecDeque};
    if from == to {
        return Vec::new();
    }
    let mut prev: HashMap<Vec<u8>, (Vec<u8>, WordMove)> = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(from.to_vec());
    while let Some(cur) = queue.pop_front() {
        for (mv, next) in neighbors(&cur) {
            if next.as_slice() == from || prev.contains_key(&next) {
                continue;
            }
            prev.insert(next.clone(), (cur.clone(), mv));
            if next.as_slice() == to {
                // reconstruct
                let mut path = Vec::new();
                let mut node = next;
                while node.as_slice() != from {
                    let (p, mv) = prev.remove(&node).unwrap();
                    path.push(mv);
                    node = p;
                }
                path.reverse();
                return path;
            }
            queue.push_back(next);
        }
    }
    panic!("no move path between reduced words {:?} and {:?}", from, to);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_perm_ops() {
        let w = Perm::longest(3);
        assert_eq!(w.length(), 3);
        assert_eq!(w.canonical_word(), vec![0, 1, 0]);
        assert!(Perm::identity(4).canonical_word().is_empty());
        // s_2 in S_3 (1-based) = generator index 1 (0-based)
        let s2 = Perm::identity(3).mul_gen_left(1);
        assert_eq!(s2.canonical_word(), vec![1]);
    }

    #[test]
    fn word_perm_convention() {
        // w = s_1 s_2 (reading order) acts as s_1 ∘ s_2 on positions
        let w = perm_of_word(&[0, 1], 3);
        // s_2 first: (0,2,1); then s_1 swaps values 0,1: 0->1, 2->2, 1->0
        assert_eq!(w, Perm::from_images(vec![1, 2, 0]).unwrap());
    }

    #[test]
    fn pdi_examples() {
        // s_1 in S_2: no room for four letters
        let s1 = Perm::identity(2).mul_gen_left(0);
        assert!(pdi(&s1).pairs.is_empty());
        // longest of S_3: still fewer than 4 letters
        assert!(pdi(&Perm::longest(3)).pairs.is_empty());
        // s_1 s_3 in S_4: inversions (0,1) and (2,3); one disjoint pair
        let w = perm_of_word(&[0, 2], 4);
        assert_eq!(pdi(&w).pairs, vec![(0, 1, 2, 3)]);
    }

    #[test]
    fn epsilon_examples() {
        // (1,2,1) in S_3: empty PDI, empty product
        let w = ReducedWord::new(vec![0, 1, 0], 3).unwrap();
        assert_eq!(epsilon_sign(&w), 1);
        // (1,3) in S_4: the (1,2)-crossing is written left of the (3,4)-crossing
        let w = ReducedWord::new(vec![0, 2], 4).unwrap();
        assert_eq!(epsilon_sign(&w), -1);
        // opposite order
        let w = ReducedWord::new(vec![2, 0], 4).unwrap();
        assert_eq!(epsilon_sign(&w), 1);
    }

    #[test]
    fn non_reduced_rejected() {
        assert!(ReducedWord::new(vec![0, 0], 3).is_err());
        assert!(ReducedWord::new(vec![0, 1, 0, 1], 3).is_err());
    }

    #[test]
    fn epsilon_move_behaviour() {
        // one distant commutation flips epsilon; one braid move preserves it
        for n in 2..=5usize {
            for w in all_perms(n) {
                for word in w.all_reduced_words() {
                    let e = epsilon_sign(&ReducedWord::new(word.clone(), n).unwrap());
                    for (mv, next) in neighbors(&word) {
                        let e2 = epsilon_sign(&ReducedWord::new(next, n).unwrap());
                        match mv {
                            WordMove::Comm(_) => assert_eq!(e2, -e),
                            WordMove::Braid(_) => assert_eq!(e2, e),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pdi_size_word_independent() {
        for n in 2..=5usize {
            for w in all_perms(n) {
                let expected = pdi(&w).pairs.len();
                for word in w.all_reduced_words() {
                    let labels = letter_inversions(&word, n);
                    let mut count = 0;
                    for a in 0..labels.len() {
                        for b in a + 1..labels.len() {
                            let (j1, j2) = labels[a];
                            let (k1, k2) = labels[b];
                            if j1 != k1 && j1 != k2 && j2 != k1 && j2 != k2 {
                                count += 1;
                            }
                        }
                    }
                    assert_eq!(count, expected);
                }
            }
        }
    }

    #[test]
    fn move_path_connects_words() {
        for n in 2..=4usize {
            for w in all_perms(n) {
                let words = w.all_reduced_words();
                let canon = w.canonical_word();
                for word in &words {
                    let path = move_path(word, &canon);
                    let mut cur = word.clone();
                    for mv in path {
                        apply_move(&mut cur, mv);
                    }
                    assert_eq!(cur, canon);
                }
            }
        }
    }

    #[test]
    fn all_perms_counts() {
        for n in 0..=5usize {
            assert_eq!(all_perms(n).len(), (1..=n).product::<usize>().max(1));
        }
    }
}
