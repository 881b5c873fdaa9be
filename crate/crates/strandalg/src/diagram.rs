//! Typed strand diagrams: sequences, generator tokens, bidegrees, and the
//! normal-form basis terms spanning the diagram rings.
//!
//! A sequence over {1, 2} records the strand types along a horizontal slice
//! of a diagram: type 1 strands are fermionic (odd, no dots), type 2 strands
//! are bosonic (even, dot-carrying). A basis term is a canonical reduced
//! crossing word applied to a source sequence, with a vector of dot
//! exponents on the bosonic strands at the top boundary.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentInt;
use crate::perm::{all_perms, perm_of_word, Perm};

/// Strand type at one position of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrandKind {
    /// Type 1: odd, carries no dots.
    Fermionic,
    /// Type 2: even, carries dots.
    Bosonic,
}

impl StrandKind {
    pub fn label(self) -> u8 {
        match self {
            StrandKind::Fermionic => 1,
            StrandKind::Bosonic => 2,
        }
    }
}

/// A word in {1, 2}: the types of the strands at one boundary.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Seq {
    strands: Vec<StrandKind>,
}

impl Seq {
    pub fn new(strands: Vec<StrandKind>) -> Self {
        Seq { strands }
    }

    pub fn empty() -> Self {
        Seq::default()
    }

    pub fn len(&self) -> usize {
        self.strands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strands.is_empty()
    }

    pub fn kind(&self, pos: usize) -> StrandKind {
        self.strands[pos]
    }

    pub fn strands(&self) -> &[StrandKind] {
        &self.strands
    }

    /// Number of fermionic strands.
    pub fn n(&self) -> usize {
        self.strands
            .iter()
            .filter(|k| **k == StrandKind::Fermionic)
            .count()
    }

    /// Number of bosonic strands.
    pub fn m(&self) -> usize {
        self.strands.len() - self.n()
    }

    pub fn ambient(&self) -> (usize, usize) {
        (self.n(), self.m())
    }

    /// 0-based index of the bosonic strand at `pos` among all bosonic
    /// strands, counting from the left. Panics if `pos` is fermionic.
    pub fn bosonic_index(&self, pos: usize) -> usize {
        assert_eq!(self.strands[pos], StrandKind::Bosonic);
        self.strands[..pos]
            .iter()
            .filter(|k| **k == StrandKind::Bosonic)
            .count()
    }

    /// 0-based index of the fermionic strand at `pos` among all fermionic
    /// strands. Panics if `pos` is bosonic.
    pub fn fermionic_index(&self, pos: usize) -> usize {
        assert_eq!(self.strands[pos], StrandKind::Fermionic);
        self.strands[..pos]
            .iter()
            .filter(|k| **k == StrandKind::Fermionic)
            .count()
    }

    /// Position of the k-th (0-based) bosonic strand.
    pub fn bosonic_position(&self, k: usize) -> usize {
        self.strands
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == StrandKind::Bosonic)
            .nth(k)
            .expect("bosonic index out of range")
            .0
    }

    /// Sequence at the top of a diagram whose strand map is `w`:
    /// the strand starting at position p ends at position w(p).
    pub fn apply_perm(&self, w: &Perm) -> Seq {
        assert_eq!(self.len(), w.n());
        let mut out = vec![StrandKind::Fermionic; self.len()];
        for (p, &s) in self.strands.iter().enumerate() {
            out[w.apply(p)] = s;
        }
        Seq::new(out)
    }

    /// Swap the entries at positions p, p+1.
    pub fn swap(&self, p: usize) -> Seq {
        let mut s = self.strands.clone();
        s.swap(p, p + 1);
        Seq::new(s)
    }

    /// All sequences with n ones and m twos, in lex order.
    pub fn enumerate(n: usize, m: usize) -> Vec<Seq> {
        fn go(n: usize, m: usize, prefix: &mut Vec<StrandKind>, out: &mut Vec<Seq>) {
            if n == 0 && m == 0 {
                out.push(Seq::new(prefix.clone()));
                return;
            }
            if n > 0 {
                prefix.push(StrandKind::Fermionic);
                go(n - 1, m, prefix, out);
                prefix.pop();
            }
            if m > 0 {
                prefix.push(StrandKind::Bosonic);
                go(n, m - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(n, m, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.strands {
            write!(f, "{}", s.label())?;
        }
        Ok(())
    }
}

impl FromStr for Seq {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut strands = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '1' => strands.push(StrandKind::Fermionic),
                '2' => strands.push(StrandKind::Bosonic),
                other => return Err(format!("invalid strand label '{other}'")),
            }
        }
        Ok(Seq::new(strands))
    }
}

impl From<Seq> for String {
    fn from(s: Seq) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for Seq {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

/// A single generator applied at one height of a diagram. Positions are
/// 0-based indices into the sequence at that height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Token {
    /// Dot on the (bosonic) strand at `position`.
    Dot { position: usize },
    /// Crossing of the strands at `position`, `position + 1`.
    Cross { position: usize },
}

/// Bidegree (cohomological degree, q-degree). Additive under composition;
/// the differential has bidegree (1, 0).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct BiDegree {
    pub coh: i64,
    pub qdeg: i64,
}

impl BiDegree {
    pub fn new(coh: i64, qdeg: i64) -> Self {
        BiDegree { coh, qdeg }
    }
}

impl std::ops::Add for BiDegree {
    type Output = BiDegree;
    fn add(self, rhs: BiDegree) -> BiDegree {
        BiDegree::new(self.coh + rhs.coh, self.qdeg + rhs.qdeg)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.coh, self.qdeg)
    }
}

/// Bidegree of a generator on a given sequence.
///
/// Dots have bidegree (0, 2) and bosonic-bosonic crossings (0, -2),
/// matching the polynomial grading; fermionic-fermionic crossings sit in
/// (-1, 0); mixed crossings in (0, 1), forced by homogeneity of the
/// double-crossing relation.
pub fn generator_bidegree(seq: &Seq, token: Token) -> Result<BiDegree> {
    match token {
        Token::Dot { position } => {
            if position >= seq.len() {
                return Err(Error::PositionOutOfRange {
                    pos: position,
                    len: seq.len(),
                });
            }
            if seq.kind(position) != StrandKind::Bosonic {
                return Err(Error::DotOnFermionicStrand {
                    pos: position,
                    seq: seq.to_string(),
                });
            }
            Ok(BiDegree::new(0, 2))
        }
        Token::Cross { position } => {
            if position + 1 >= seq.len() {
                return Err(Error::PositionOutOfRange {
                    pos: position,
                    len: seq.len(),
                });
            }
            Ok(match (seq.kind(position), seq.kind(position + 1)) {
                (StrandKind::Bosonic, StrandKind::Bosonic) => BiDegree::new(0, -2),
                (StrandKind::Fermionic, StrandKind::Fermionic) => BiDegree::new(-1, 0),
                _ => BiDegree::new(0, 1),
            })
        }
    }
}

/// Crossing counts of the minimal diagram of (source, w), split by type:
/// (fermionic-fermionic, bosonic-bosonic, mixed). These depend only on the
/// permutation, not on the chosen reduced word.
pub fn crossing_counts(source: &Seq, w: &Perm) -> (usize, usize, usize) {
    let mut ff = 0;
    let mut bb = 0;
    let mut mixed = 0;
    for (a, b) in w.inversions() {
        match (source.kind(a as usize), source.kind(b as usize)) {
            (StrandKind::Fermionic, StrandKind::Fermionic) => ff += 1,
            (StrandKind::Bosonic, StrandKind::Bosonic) => bb += 1,
            _ => mixed += 1,
        }
    }
    (ff, bb, mixed)
}

/// A normal-form basis diagram: the canonical reduced crossing word of a
/// permutation applied to a source sequence, with dots at the top of each
/// bosonic strand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagramTerm {
    source: Seq,
    target: Seq,
    /// Canonical reduced word in reading order (top crossing first).
    word: Vec<u8>,
    /// Dot exponents indexed by bosonic strands at the top, left to right.
    dots: Vec<u32>,
}

impl DiagramTerm {
    /// Basis term for (source, w) with the given top dots.
    pub fn new(source: Seq, w: &Perm, dots: Vec<u32>) -> Self {
        assert_eq!(source.len(), w.n());
        assert_eq!(dots.len(), source.m());
        let target = source.apply_perm(w);
        DiagramTerm {
            source,
            target,
            word: w.canonical_word(),
            dots,
        }
    }

    pub fn idempotent(seq: Seq) -> Self {
        let m = seq.m();
        let id = Perm::identity(seq.len());
        DiagramTerm::new(seq, &id, vec![0; m])
    }

    pub fn source(&self) -> &Seq {
        &self.source
    }

    pub fn target(&self) -> &Seq {
        &self.target
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn dots(&self) -> &[u32] {
        &self.dots
    }

    pub fn perm(&self) -> Perm {
        perm_of_word(&self.word, self.source.len())
    }

    pub fn is_idempotent_diagram(&self) -> bool {
        self.word.is_empty() && self.dots.iter().all(|&d| d == 0)
    }

    pub fn total_dots(&self) -> u32 {
        self.dots.iter().sum()
    }

    pub fn bidegree(&self) -> BiDegree {
        let w = self.perm();
        let (ff, bb, mixed) = crossing_counts(&self.source, &w);
        BiDegree::new(
            -(ff as i64),
            2 * self.total_dots() as i64 - 2 * bb as i64 + mixed as i64,
        )
    }

    /// Generator tokens of this diagram, bottom to top: crossings in
    /// reverse reading order, then dots on the top boundary.
    pub fn tokens_bottom_up(&self) -> Vec<Token> {
        let mut out: Vec<Token> = self
            .word
            .iter()
            .rev()
            .map(|&i| Token::Cross {
                position: i as usize,
            })
            .collect();
        for (k, &e) in self.dots.iter().enumerate() {
            let pos = self.target.bosonic_position(k);
            for _ in 0..e {
                out.push(Token::Dot { position: pos });
            }
        }
        out
    }

    pub fn with_dots(&self, dots: Vec<u32>) -> DiagramTerm {
        assert_eq!(dots.len(), self.dots.len());
        DiagramTerm {
            source: self.source.clone(),
            target: self.target.clone(),
            word: self.word.clone(),
            dots,
        }
    }
}

impl PartialOrd for DiagramTerm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DiagramTerm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // source block first, then target sequence, canonical word, dot
        // vector
        (&self.source, &self.target, &self.word, &self.dots).cmp(&(
            &other.source,
            &other.target,
            &other.word,
            &other.dots,
        ))
    }
}

impl fmt::Display for DiagramTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // tokens printed bottom-to-top so the output parses back with the
        // expression language semantics: crossings from the bottom, then
        // the dots at the top
        let mut wrote = false;
        for &i in self.word.iter().rev() {
            if wrote {
                write!(f, " ")?;
            }
            write!(f, "s{}", i + 1)?;
            wrote = true;
        }
        for (k, &e) in self.dots.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if wrote {
                write!(f, " ")?;
            }
            let pos = self.target.bosonic_position(k);
            if e == 1 {
                write!(f, "x{}", pos + 1)?;
            } else {
                write!(f, "x{}^{}", pos + 1, e)?;
            }
            wrote = true;
        }
        if wrote {
            write!(f, " ")?;
        }
        write!(f, "1_{{{}}}", self.source)
    }
}

/// A finite coefficient-weighted combination of basis diagrams with a fixed
/// ambient weight (n, m). Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    ambient: (usize, usize),
    terms: BTreeMap<DiagramTerm, i64>,
}

impl Element {
    pub fn zero(ambient: (usize, usize)) -> Self {
        Element {
            ambient,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(term: DiagramTerm, coeff: i64) -> Self {
        let ambient = term.source().ambient();
        let mut e = Element::zero(ambient);
        e.add_term(term, coeff);
        e
    }

    /// The idempotent 1_i: vertical lines, no dots.
    pub fn idempotent(seq: Seq) -> Self {
        Element::from_term(DiagramTerm::idempotent(seq), 1)
    }

    /// The unit of R(n, m): the sum of the idempotents over all sequences.
    pub fn unit(n: usize, m: usize) -> Self {
        let mut e = Element::zero((n, m));
        for seq in Seq::enumerate(n, m) {
            e.add_term(DiagramTerm::idempotent(seq), 1);
        }
        e
    }

    pub fn ambient(&self) -> (usize, usize) {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiagramTerm, i64)> {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn coeff(&self, term: &DiagramTerm) -> i64 {
        self.terms.get(term).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, term: DiagramTerm, coeff: i64) {
        if coeff == 0 {
            return;
        }
        debug_assert_eq!(term.source().ambient(), self.ambient);
        match self.terms.get_mut(&term) {
            Some(entry) => {
                *entry = entry.checked_add(coeff).expect("coefficient overflow");
                if *entry == 0 {
                    self.terms.remove(&term);
                }
            }
            None => {
                self.terms.insert(term, coeff);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Element) {
        debug_assert_eq!(self.ambient, other.ambient);
        for (t, c) in other.terms() {
            self.add_term(t.clone(), c);
        }
    }

    pub fn scaled(&self, c: i64) -> Element {
        if c == 0 {
            return Element::zero(self.ambient);
        }
        let mut out = Element::zero(self.ambient);
        for (t, k) in self.terms() {
            out.add_term(t.clone(), k.checked_mul(c).expect("coefficient overflow"));
        }
        out
    }

    /// Coefficientwise reduction into {0, .., p-1}, dropping zeros.
    pub fn reduced_mod(&self, p: u64) -> Element {
        let p = p as i64;
        let mut out = Element::zero(self.ambient);
        for (t, c) in self.terms() {
            out.add_term(t.clone(), c.rem_euclid(p));
        }
        out
    }

    /// The bidegree when homogeneous, None otherwise.
    pub fn bidegree(&self) -> Option<BiDegree> {
        let mut it = self.terms.keys();
        let first = it.next()?.bidegree();
        for t in it {
            if t.bidegree() != first {
                return None;
            }
        }
        Some(first)
    }

    /// Split into homogeneous components keyed by (source, target, bidegree).
    pub fn homogeneous_components(&self) -> BTreeMap<(Seq, Seq, BiDegree), Element> {
        let mut out: BTreeMap<(Seq, Seq, BiDegree), Element> = BTreeMap::new();
        for (t, c) in self.terms() {
            let key = (t.source().clone(), t.target().clone(), t.bidegree());
            out.entry(key)
                .or_insert_with(|| Element::zero(self.ambient))
                .add_term(t.clone(), c);
        }
        out
    }
}

impl std::ops::Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl std::ops::Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(&rhs.scaled(-1));
        out
    }
}

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scaled(-1)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (t, c) in self.terms() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if mag != 1 {
                write!(f, "{} ", mag)?;
            }
            write!(f, "{}", t)?;
        }
        Ok(())
    }
}

// --- canonical JSON form ---

#[derive(Serialize, Deserialize)]
struct TermJson {
    seq: String,
    /// 1-based generator indices, reading order.
    word: Vec<u8>,
    dots: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    schema: String,
    ambient: [usize; 2],
    terms: Vec<TermJson>,
}

pub const ELEMENT_SCHEMA: &str = "strandalg.element/1";

impl Element {
    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .terms()
            .map(|(t, c)| TermJson {
                seq: t.source().to_string(),
                word: t.word().iter().map(|&i| i + 1).collect(),
                dots: t.dots().to_vec(),
                coeff: c.to_string(),
            })
            .collect();
        serde_json::to_value(ElementJson {
            schema: ELEMENT_SCHEMA.to_string(),
            ambient: [self.ambient.0, self.ambient.1],
            terms,
        })
        .unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> std::result::Result<Element, String> {
        let ej: ElementJson = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
        if ej.schema != ELEMENT_SCHEMA {
            return Err(format!("unsupported schema {}", ej.schema));
        }
        let mut out = Element::zero((ej.ambient[0], ej.ambient[1]));
        for t in ej.terms {
            let seq: Seq = t.seq.parse()?;
            let word: Vec<u8> = t
                .word
                .iter()
                .map(|&i| i.checked_sub(1).ok_or("word letters are 1-based"))
                .collect::<std::result::Result<_, _>>()?;
            let w = perm_of_word(&word, seq.len());
            if w.canonical_word() != word {
                return Err("term word is not canonical".to_string());
            }
            let coeff: i64 = t.coeff.parse().map_err(|e| format!("{e}"))?;
            out.add_term(DiagramTerm::new(seq, &w, t.dots), coeff);
        }
        Ok(out)
    }
}

/// All basis terms from `source` whose permutation carries `source` to
/// `target`, with total q-degree at most `max_qdeg`, in canonical order.
pub fn enumerate_basis(source: &Seq, target: &Seq, max_qdeg: i64) -> Result<Vec<DiagramTerm>> {
    if source.ambient() != target.ambient() {
        return Err(Error::TypeCountMismatch(
            source.to_string(),
            target.to_string(),
        ));
    }
    let mut out = Vec::new();
    for w in all_perms(source.len()) {
        if &source.apply_perm(&w) != target {
            continue;
        }
        let (_, bb, mixed) = crossing_counts(source, &w);
        let word_qdeg = -2 * (bb as i64) + mixed as i64;
        let budget = max_qdeg - word_qdeg;
        if budget < 0 {
            continue;
        }
        let max_total = (budget / 2) as u32;
        for dots in dot_vectors(source.m(), max_total) {
            out.push(DiagramTerm::new(source.clone(), &w, dots));
        }
    }
    out.sort();
    Ok(out)
}

/// Basis terms of the (source, target) block in one exact bidegree.
pub fn enumerate_basis_bidegree(
    source: &Seq,
    target: &Seq,
    bidegree: BiDegree,
) -> Result<Vec<DiagramTerm>> {
    if source.ambient() != target.ambient() {
        return Err(Error::TypeCountMismatch(
            source.to_string(),
            target.to_string(),
        ));
    }
    let mut out = Vec::new();
    for w in all_perms(source.len()) {
        if &source.apply_perm(&w) != target {
            continue;
        }
        let (ff, bb, mixed) = crossing_counts(source, &w);
        if -(ff as i64) != bidegree.coh {
            continue;
        }
        let dot_deg = bidegree.qdeg + 2 * (bb as i64) - mixed as i64;
        if dot_deg < 0 || dot_deg % 2 != 0 {
            continue;
        }
        let total = (dot_deg / 2) as u32;
        for dots in dot_vectors_exact(source.m(), total) {
            out.push(DiagramTerm::new(source.clone(), &w, dots));
        }
    }
    out.sort();
    Ok(out)
}

/// All dot vectors of length m with sum <= max_total.
fn dot_vectors(m: usize, max_total: u32) -> Vec<Vec<u32>> {
    fn go(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[k] = v;
            go(k + 1, left - v, cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    go(0, max_total, &mut cur, &mut out);
    out
}

/// All dot vectors of length m with sum exactly `total`.
fn dot_vectors_exact(m: usize, total: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    fn go(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k + 1 == cur.len() {
            cur[k] = left;
            out.push(cur.clone());
            cur[k] = 0;
            return;
        }
        for v in 0..=left {
            cur[k] = v;
            go(k + 1, left - v, cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    go(0, total, &mut cur, &mut out);
    out
}

/// Graded dimension of a (source, target) block up to the q-degree cutoff,
/// optionally restricted to one cohomological degree.
pub fn graded_dim(
    source: &Seq,
    target: &Seq,
    max_qdeg: i64,
    coh: Option<i64>,
) -> Result<LaurentInt> {
    let mut out = LaurentInt::zero();
    for t in enumerate_basis(source, target, max_qdeg)? {
        let d = t.bidegree();
        if let Some(c) = coh {
            if d.coh != c {
                continue;
            }
        }
        out.add_term(d.qdeg, 1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Seq {
        s.parse().unwrap()
    }

    #[test]
    fn bidegree_table() {
        assert_eq!(
            generator_bidegree(&seq("22"), Token::Cross { position: 0 }).unwrap(),
            BiDegree::new(0, -2)
        );
        assert_eq!(
            generator_bidegree(&seq("11"), Token::Cross { position: 0 }).unwrap(),
            BiDegree::new(-1, 0)
        );
        assert_eq!(
            generator_bidegree(&seq("12"), Token::Cross { position: 0 }).unwrap(),
            BiDegree::new(0, 1)
        );
        assert_eq!(
            generator_bidegree(&seq("21"), Token::Cross { position: 0 }).unwrap(),
            BiDegree::new(0, 1)
        );
        assert_eq!(
            generator_bidegree(&seq("12"), Token::Dot { position: 1 }).unwrap(),
            BiDegree::new(0, 2)
        );
        assert!(generator_bidegree(&seq("12"), Token::Dot { position: 0 }).is_err());
    }

    #[test]
    fn idempotents() {
        let unit = Element::idempotent(Seq::empty());
        assert_eq!(unit.len(), 1);
        let e = Element::idempotent(seq("12"));
        let t = e.terms().next().unwrap().0;
        assert_eq!(t.bidegree(), BiDegree::new(0, 0));
        assert_eq!(t.target(), &seq("12"));
        let e = Element::idempotent(seq("212"));
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn basis_single_strand() {
        let b = enumerate_basis(&seq("1"), &seq("1"), 100).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].is_idempotent_diagram());
    }

    #[test]
    fn basis_12_block() {
        // only the identity permutation preserves the sequence 12; dots
        // contribute q-degrees 0, 2, 4
        let b = enumerate_basis(&seq("12"), &seq("12"), 4).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(|t| t.word().is_empty()));
        let qdegs: Vec<i64> = b.iter().map(|t| t.bidegree().qdeg).collect();
        assert_eq!(qdegs, vec![0, 2, 4]);
    }

    #[test]
    fn basis_11_block() {
        let b = enumerate_basis(&seq("11"), &seq("11"), 100).unwrap();
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn basis_counts_match_factorial() {
        // ignoring dots, the number of basis diagrams with a fixed source,
        // summed over all targets, is (n+m)!
        for (n, m) in [(2usize, 1usize), (1, 2), (3, 0), (0, 3)] {
            let big = ((n + m) * (n + m)) as i64;
            for source in Seq::enumerate(n, m) {
                let mut count = 0;
                for target in Seq::enumerate(n, m) {
                    count += enumerate_basis(&source, &target, big)
                        .unwrap()
                        .iter()
                        .filter(|t| t.total_dots() == 0)
                        .count();
                }
                assert_eq!(count, (1..=n + m).product::<usize>());
            }
        }
    }

    #[test]
    fn graded_dim_examples() {
        // single strand: the ground ring
        assert_eq!(
            graded_dim(&seq("1"), &seq("1"), 10, None).unwrap(),
            LaurentInt::one()
        );
        // one fermionic, one bosonic strand: dots only
        assert_eq!(
            graded_dim(&seq("12"), &seq("12"), 6, None).unwrap(),
            crate::laurent::geometric_series(2, 6)
        );
        // two bosonic strands: (1 + q^-2) times the square of the dot series
        let dots = crate::laurent::geometric_series(2, 10);
        let factor = LaurentInt::from_coeffs([(0, 1), (-2, 1)]);
        let expected = (&(&dots * &dots) * &factor).truncate(i64::MIN, 4);
        assert_eq!(
            graded_dim(&seq("22"), &seq("22"), 4, None).unwrap(),
            expected
        );
    }

    #[test]
    fn graded_dim_factors_through_dots() {
        // block gdim = (dot-free gdim) * geometric(2)^m, truncation-consistent
        let source = seq("212");
        for target in Seq::enumerate(1, 2) {
            let hi = 8;
            let full = graded_dim(&source, &target, hi, None).unwrap();
            let dotfree: LaurentInt = enumerate_basis(&source, &target, hi)
                .unwrap()
                .iter()
                .filter(|t| t.total_dots() == 0)
                .map(|t| t.bidegree().qdeg)
                .fold(LaurentInt::zero(), |mut acc, q| {
                    acc.add_term(q, 1);
                    acc
                });
            let geo = crate::laurent::geometric_series(2, hi + 8);
            let mut prod = dotfree;
            for _ in 0..source.m() {
                prod = &prod * &geo;
            }
            assert_eq!(full, prod.truncate(i64::MIN, hi));
        }
    }

    #[test]
    fn element_json_round_trip() {
        let s = seq("212");
        let w = perm_of_word(&[1], 3);
        let mut e = Element::zero((1, 2));
        e.add_term(DiagramTerm::new(s.clone(), &w, vec![2, 0]), -3);
        e.add_term(DiagramTerm::idempotent(s), 5);
        let j = e.to_json();
        let back = Element::from_json(&j).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn mismatched_counts_error() {
        assert!(enumerate_basis(&seq("12"), &seq("11"), 4).is_err());
    }

    #[test]
    fn term_ordering_uses_target_first() {
        let s = seq("12");
        let id = DiagramTerm::idempotent(s.clone());
        let cross = DiagramTerm::new(s, &perm_of_word(&[0], 2), vec![0]);
        // target 12 sorts before target 21
        assert!(id < cross);
    }
}
