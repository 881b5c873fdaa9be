//! The polynomial representation used as the independent correctness oracle.
//!
//! The representation space splits into blocks Pol(i, w) indexed by a
//! sequence i and a permutation w of the fermionic strands; each block is a
//! polynomial ring in one variable per bosonic strand. Generators act by
//! the five rules: dots multiply by their variable, bosonic-bosonic
//! crossings act by divided differences, the two mixed crossings transport
//! variables between blocks (one of them also multiplying by the crossed
//! variable), and fermionic-fermionic crossings shift w with a sign and
//! kill blocks where the length drops. The action is faithful, which is
//! what makes it usable as a complete check of the rewriting engine.

use std::collections::BTreeMap;

use crate::diagram::{DiagramTerm, Element, Seq, StrandKind, Token};
use crate::error::{Error, Result};
use crate::perm::{epsilon_step, Perm};

/// Exact multivariate polynomial in the m dot variables of one block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<u16>, i64>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one(m: usize) -> Self {
        MPoly::monomial(vec![0; m], 1)
    }

    pub fn monomial(exps: Vec<u16>, coeff: i64) -> Self {
        let mut p = MPoly::zero();
        p.add_term(exps, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u16>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(c) => {
                *c = c.checked_add(coeff).expect("coefficient overflow");
                if *c == 0 {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, coeff);
            }
        }
    }

    pub fn add_assign(&mut self, other: &MPoly) {
        for (e, &c) in &other.terms {
            self.add_term(e.clone(), c);
        }
    }

    pub fn scaled(&self, k: i64) -> MPoly {
        let mut out = MPoly::zero();
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c.checked_mul(k).expect("coefficient overflow"));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, i64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
    }

    /// Multiplication by the variable x_k.
    pub fn mul_var(&self, k: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in self.terms() {
            let mut e = e.clone();
            e[k] += 1;
            out.add_term(e, c);
        }
        out
    }

    /// Divided difference in the variables x_k, x_{k+1}:
    /// f maps to (f - s_k f) / (x_k - x_{k+1}).
    pub fn divided_difference(&self, k: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in self.terms() {
            let a = e[k];
            let b = e[k + 1];
            if a == b {
                continue;
            }
            let (lo, hi, sign) = if a > b { (b, a, c) } else { (a, b, -c) };
            for t in lo..hi {
                let mut e2 = e.clone();
                e2[k] = t;
                e2[k + 1] = hi + lo - 1 - t;
                out.add_term(e2, sign);
            }
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.checked_mul(c2).expect("coefficient overflow"));
            }
        }
        out
    }
}

/// Index of one polynomial block: the sequence and the fermionic-strand
/// permutation.
pub type PolKey = (Seq, Perm);

/// A finitely supported family of block polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolVector {
    blocks: BTreeMap<PolKey, MPoly>,
}

impl PolVector {
    pub fn zero() -> Self {
        PolVector::default()
    }

    pub fn from_block(seq: Seq, w: Perm, poly: MPoly) -> Self {
        let mut v = PolVector::zero();
        v.add_block(seq, w, &poly);
        v
    }

    /// The constant 1 in block (seq, w).
    pub fn generator(seq: Seq, w: Perm) -> Self {
        let m = seq.m();
        PolVector::from_block(seq, w, MPoly::one(m))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&PolKey, &MPoly)> {
        self.blocks.iter()
    }

    pub fn add_block(&mut self, seq: Seq, w: Perm, poly: &MPoly) {
        if poly.is_zero() {
            return;
        }
        let key = (seq, w);
        match self.blocks.get_mut(&key) {
            Some(p) => {
                p.add_assign(poly);
                if p.is_zero() {
                    self.blocks.remove(&key);
                }
            }
            None => {
                self.blocks.insert(key, poly.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &PolVector) {
        for ((seq, w), poly) in other.blocks() {
            self.add_block(seq.clone(), w.clone(), poly);
        }
    }

    pub fn scaled(&self, k: i64) -> PolVector {
        let mut out = PolVector::zero();
        for ((seq, w), poly) in self.blocks() {
            out.add_block(seq.clone(), w.clone(), &poly.scaled(k));
        }
        out
    }
}

/// Which of the two mixed crossings multiplies by the crossed variable.
/// The two choices give isomorphic actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MixedRule {
    /// The crossing whose bosonic strand enters at the left of the bottom
    /// multiplies by its variable; the other orientation only transports.
    #[default]
    Standard,
    /// The opposite convention.
    Swapped,
}

fn act_token_blocks(
    cur_seq: &Seq,
    token: Token,
    blocks: &BTreeMap<Perm, MPoly>,
    rule: MixedRule,
) -> Result<(Seq, BTreeMap<Perm, MPoly>)> {
    let mut out: BTreeMap<Perm, MPoly> = BTreeMap::new();
    let push = |out: &mut BTreeMap<Perm, MPoly>, w: Perm, p: MPoly| {
        if p.is_zero() {
            return;
        }
        match out.get_mut(&w) {
            Some(q) => {
                q.add_assign(&p);
                if q.is_zero() {
                    out.remove(&w);
                }
            }
            None => {
                out.insert(w, p);
            }
        }
    };
    match token {
        Token::Dot { position } => {
            if position >= cur_seq.len() {
                return Err(Error::PositionOutOfRange {
                    pos: position,
                    len: cur_seq.len(),
                });
            }
            if cur_seq.kind(position) != StrandKind::Bosonic {
                return Err(Error::DotOnFermionicStrand {
                    pos: position,
                    seq: cur_seq.to_string(),
                });
            }
            let k = cur_seq.bosonic_index(position);
            for (w, p) in blocks {
                push(&mut out, w.clone(), p.mul_var(k));
            }
            Ok((cur_seq.clone(), out))
        }
        Token::Cross { position } => {
            if position + 1 >= cur_seq.len() {
                return Err(Error::PositionOutOfRange {
                    pos: position,
                    len: cur_seq.len(),
                });
            }
            let kinds = (cur_seq.kind(position), cur_seq.kind(position + 1));
            match kinds {
                (StrandKind::Bosonic, StrandKind::Bosonic) => {
                    let k = cur_seq.bosonic_index(position);
                    for (w, p) in blocks {
                        push(&mut out, w.clone(), p.divided_difference(k));
                    }
                    Ok((cur_seq.clone(), out))
                }
                (StrandKind::Fermionic, StrandKind::Fermionic) => {
                    let c = cur_seq.fermionic_index(position);
                    for (w, p) in blocks {
                        if w.left_gen_raises(c) {
                            let sign = epsilon_step(w, c);
                            push(&mut out, w.mul_gen_left(c), p.scaled(sign));
                        }
                    }
                    Ok((cur_seq.clone(), out))
                }
                (a, _) => {
                    // mixed crossing: the sequence changes and variables are
                    // transported; one orientation also multiplies by the
                    // crossed bosonic variable
                    let bos_pos = if a == StrandKind::Bosonic {
                        position
                    } else {
                        position + 1
                    };
                    let k = cur_seq.bosonic_index(bos_pos);
                    let multiplies = match (a, rule) {
                        (StrandKind::Bosonic, MixedRule::Standard) => true,
                        (StrandKind::Fermionic, MixedRule::Standard) => false,
                        (StrandKind::Bosonic, MixedRule::Swapped) => false,
                        (StrandKind::Fermionic, MixedRule::Swapped) => true,
                    };
                    for (w, p) in blocks {
                        let q = if multiplies { p.mul_var(k) } else { p.clone() };
                        push(&mut out, w.clone(), q);
                    }
                    Ok((cur_seq.swap(position), out))
                }
            }
        }
    }
}

/// Action of a single generator diagram (source `seq`, one token) on a
/// vector. Blocks whose sequence differs from `seq` are annihilated.
pub fn act_generator(seq: &Seq, token: Token, v: &PolVector, rule: MixedRule) -> Result<PolVector> {
    act_tokens(seq, &[token], v, rule)
}

/// Action of a generator word (tokens bottom to top) starting at `source`.
pub fn act_tokens(
    source: &Seq,
    tokens: &[Token],
    v: &PolVector,
    rule: MixedRule,
) -> Result<PolVector> {
    let mut cur: BTreeMap<Perm, MPoly> = BTreeMap::new();
    for ((seq, w), poly) in v.blocks() {
        if seq == source {
            cur.insert(w.clone(), poly.clone());
        }
    }
    let mut cur_seq = source.clone();
    for &t in tokens {
        let (next_seq, next) = act_token_blocks(&cur_seq, t, &cur, rule)?;
        cur_seq = next_seq;
        cur = next;
    }
    let mut out = PolVector::zero();
    for (w, p) in cur {
        out.add_block(cur_seq.clone(), w, &p);
    }
    Ok(out)
}

/// Action of one basis diagram.
pub fn act_term(term: &DiagramTerm, v: &PolVector, rule: MixedRule) -> Result<PolVector> {
    act_tokens(term.source(), &term.tokens_bottom_up(), v, rule)
}

/// Linear extension to elements.
pub fn act_element(e: &Element, v: &PolVector, rule: MixedRule) -> Result<PolVector> {
    let mut out = PolVector::zero();
    for (t, c) in e.terms() {
        out.add_assign(&act_term(t, v, rule)?.scaled(c));
    }
    Ok(out)
}

/// All monomial exponent vectors in m variables of total degree <= d.
pub fn monomials_up_to(m: usize, d: u32) -> Vec<Vec<u16>> {
    fn go(k: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[k] = v as u16;
            go(k + 1, left - v, cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; m];
    go(0, d, &mut cur, &mut out);
    out
}

/// Outcome of the separation check for one block of basis diagrams.
#[derive(Debug, Clone)]
pub struct FaithfulnessBlock {
    pub source: Seq,
    pub target: Seq,
    pub terms: usize,
    pub rank: usize,
}

#[derive(Debug, Clone)]
pub struct FaithfulnessReport {
    pub blocks: Vec<FaithfulnessBlock>,
    pub qdeg_cutoff: i64,
    pub deg_cutoff: u32,
}

impl FaithfulnessReport {
    /// All blocks separated: every basis diagram family acts linearly
    /// independently on the truncated representation.
    pub fn conclusive(&self) -> bool {
        self.blocks.iter().all(|b| b.rank == b.terms)
    }

    pub fn total_terms(&self) -> usize {
        self.blocks.iter().map(|b| b.terms).sum()
    }

    pub fn total_rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank).sum()
    }
}

/// Checks that the basis diagrams of every (source, target) block with
/// q-degree at most `qdeg_cutoff` act linearly independently on the
/// representation truncated to input monomial degree `deg_cutoff`.
///
/// Returns the certified ranks; `rank < terms` in some block reads as
/// "inconclusive, raise the cutoff", not as a refutation.
pub fn faithfulness_check(
    n: usize,
    m: usize,
    qdeg_cutoff: i64,
    deg_cutoff: u32,
) -> Result<FaithfulnessReport> {
    let seqs = Seq::enumerate(n, m);
    let perms = crate::perm::all_perms(n);
    let monos = monomials_up_to(m, deg_cutoff);
    let mut blocks = Vec::new();
    for source in &seqs {
        // test vectors shared by every block with this source
        let inputs: Vec<(Perm, Vec<u16>)> = perms
            .iter()
            .flat_map(|w| monos.iter().map(move |e| (w.clone(), e.clone())))
            .collect();
        for target in &seqs {
            let terms = crate::diagram::enumerate_basis(source, target, qdeg_cutoff)?;
            if terms.is_empty() {
                continue;
            }
            // one row per basis term: its action matrix flattened over the
            // chosen inputs
            let mut rows_sparse: Vec<BTreeMap<(usize, PolKey, Vec<u16>), i64>> = Vec::new();
            for t in &terms {
                let mut row: BTreeMap<(usize, PolKey, Vec<u16>), i64> = BTreeMap::new();
                for (idx, (w, e)) in inputs.iter().enumerate() {
                    let v = PolVector::from_block(
                        source.clone(),
                        w.clone(),
                        MPoly::monomial(e.clone(), 1),
                    );
                    let img = act_term(t, &v, MixedRule::Standard)?;
                    for ((s2, w2), poly) in img.blocks() {
                        for (e2, c) in poly.terms() {
                            let key = (idx, (s2.clone(), w2.clone()), e2.clone());
                            *row.entry(key).or_insert(0) += c;
                        }
                    }
                }
                rows_sparse.push(row);
            }
            let mut index: BTreeMap<(usize, PolKey, Vec<u16>), usize> = BTreeMap::new();
            for row in &rows_sparse {
                for k in row.keys() {
                    let next = index.len();
                    index.entry(k.clone()).or_insert(next);
                }
            }
            let ncols = index.len();
            let rows: Vec<Vec<i64>> = rows_sparse
                .iter()
                .map(|row| {
                    let mut dense = vec![0i64; ncols];
                    for (k, &c) in row {
                        dense[index[k]] = c;
                    }
                    dense
                })
                .collect();
            let rank = crate::linalg::rank_int(&rows);
            blocks.push(FaithfulnessBlock {
                source: source.clone(),
                target: target.clone(),
                terms: terms.len(),
                rank,
            });
        }
    }
    Ok(FaithfulnessReport {
        blocks,
        qdeg_cutoff,
        deg_cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::perm_of_word;

    fn seq(s: &str) -> Seq {
        s.parse().unwrap()
    }

    #[test]
    fn dot_multiplies() {
        let s = seq("2");
        let v = PolVector::generator(s.clone(), Perm::identity(0));
        let out = act_generator(&s, Token::Dot { position: 0 }, &v, MixedRule::Standard).unwrap();
        let ((s2, _), p) = out.blocks().next().unwrap();
        assert_eq!(s2, &s);
        assert_eq!(p, &MPoly::monomial(vec![1], 1));
    }

    #[test]
    fn divided_difference_examples() {
        // f = x_1 in two variables: crossing sends it to 1
        let f = MPoly::monomial(vec![1, 0], 1);
        assert_eq!(f.divided_difference(0), MPoly::one(2));
        // symmetric monomial dies
        let g = MPoly::monomial(vec![2, 2], 1);
        assert!(g.divided_difference(0).is_zero());
        // x_2^2 -> -(x_1 + x_2)
        let h = MPoly::monomial(vec![0, 2], 1);
        let mut expected = MPoly::monomial(vec![1, 0], -1);
        expected.add_term(vec![0, 1], -1);
        assert_eq!(h.divided_difference(0), expected);
    }

    #[test]
    fn fermionic_crossing_kills_descents() {
        let s = seq("11");
        let s1 = Perm::identity(2).mul_gen_left(0);
        let v = PolVector::generator(s.clone(), s1);
        let out = act_generator(&s, Token::Cross { position: 0 }, &v, MixedRule::Standard).unwrap();
        assert!(out.is_zero());
        // and raises the identity block with sign +1
        let v = PolVector::generator(s.clone(), Perm::identity(2));
        let out = act_generator(&s, Token::Cross { position: 0 }, &v, MixedRule::Standard).unwrap();
        let ((_, w), _) = out.blocks().next().unwrap();
        assert_eq!(w, &Perm::identity(2).mul_gen_left(0));
    }

    #[test]
    fn idempotent_acts_as_identity_or_zero() {
        let s = seq("12");
        let other = seq("21");
        let v = PolVector::generator(s.clone(), Perm::identity(1));
        let e = Element::idempotent(s.clone());
        assert_eq!(act_element(&e, &v, MixedRule::Standard).unwrap(), v);
        let f = Element::idempotent(other);
        assert!(act_element(&f, &v, MixedRule::Standard).unwrap().is_zero());
    }

    #[test]
    fn e2_word_composes_rules() {
        // the word "dot then crossing" acts as f -> d_1(x_1 f); on f = x_1
        // this gives x_1 + x_2
        let s = seq("22");
        let v = PolVector::from_block(s.clone(), Perm::identity(0), MPoly::monomial(vec![1, 0], 1));
        let tokens = [Token::Dot { position: 0 }, Token::Cross { position: 0 }];
        let out = act_tokens(&s, &tokens, &v, MixedRule::Standard).unwrap();
        let (_, p) = out.blocks().next().unwrap();
        let mut expected = MPoly::monomial(vec![1, 0], 1);
        expected.add_term(vec![0, 1], 1);
        assert_eq!(p, &expected);
    }

    #[test]
    fn mixed_double_crossing_is_dot() {
        for (src, rule) in [
            ("12", MixedRule::Standard),
            ("21", MixedRule::Standard),
            ("12", MixedRule::Swapped),
            ("21", MixedRule::Swapped),
        ] {
            let s = seq(src);
            for e in monomials_up_to(1, 3) {
                let v = PolVector::from_block(s.clone(), Perm::identity(1), MPoly::monomial(e, 1));
                let double = act_tokens(
                    &s,
                    &[Token::Cross { position: 0 }, Token::Cross { position: 0 }],
                    &v,
                    rule,
                )
                .unwrap();
                let pos = if src == "12" { 1 } else { 0 };
                let dot = act_generator(&s, Token::Dot { position: pos }, &v, rule).unwrap();
                assert_eq!(double, dot);
            }
        }
    }

    #[test]
    fn faithfulness_small() {
        let r = faithfulness_check(2, 0, 0, 0).unwrap();
        assert!(r.conclusive());
        assert_eq!(r.total_terms(), 2);
        let r = faithfulness_check(0, 1, 6, 4).unwrap();
        assert!(r.conclusive());
    }

    #[test]
    fn swapped_mixed_rules_validate_the_relations() {
        // interchanging the two mixed-crossing actions still kills every
        // defining relation instance
        use crate::rewrite::{relation5_constant, relation_instances};
        for (n, m) in [(1usize, 1usize), (1, 2), (2, 1)] {
            let perms = crate::perm::all_perms(n);
            let monos = monomials_up_to(m, 4);
            for source in Seq::enumerate(n, m) {
                for inst in relation_instances(&source, relation5_constant()) {
                    for w in &perms {
                        for e in &monos {
                            let v = PolVector::from_block(
                                source.clone(),
                                w.clone(),
                                MPoly::monomial(e.clone(), 1),
                            );
                            let mut acc = PolVector::zero();
                            for (c, tokens) in &inst.combo {
                                let img =
                                    act_tokens(&source, tokens, &v, MixedRule::Swapped).unwrap();
                                acc.add_assign(&img.scaled(*c));
                            }
                            assert!(acc.is_zero(), "relation {} under swapped rules", inst.label);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn faithfulness_mixed_weight() {
        // rank equals the basis count in every block of weight (1, 2)
        let r = faithfulness_check(1, 2, 4, 5).unwrap();
        assert!(r.conclusive(), "blocks: {:?}", r.blocks);
        assert!(r.total_terms() > 0);
    }

    #[test]
    fn perm_word_acts_by_left_multiplication() {
        // the crossing word of u maps block w to block u∘w when lengths add
        let s = seq("111");
        let u = perm_of_word(&[0, 1], 3);
        let tokens: Vec<Token> = u
            .canonical_word()
            .iter()
            .rev()
            .map(|&i| Token::Cross {
                position: i as usize,
            })
            .collect();
        let v = PolVector::generator(s.clone(), Perm::identity(3));
        let out = act_tokens(&s, &tokens, &v, MixedRule::Standard).unwrap();
        let ((_, w), _) = out.blocks().next().unwrap();
        assert_eq!(w, &u);
    }
}
