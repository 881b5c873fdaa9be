//! The normal-form engine: evaluates generator words to elements in the
//! diagram basis and multiplies elements.
//!
//! Strategy: dots are kept at the top throughout (moving a dot past a
//! bosonic-bosonic crossing emits the polynomial side terms of the
//! divided-difference relation), and crossing words are straightened onto
//! the canonical reduced word of their permutation by replaying a path of
//! commutation and braid moves. A commutation of two fermionic crossings
//! flips the sign; a braid move on a bosonic-fermionic-bosonic pattern
//! emits the resolved diagram as a side term. Double crossings square to
//! zero (equal types) or resolve to a dot (mixed). Every side term is
//! strictly shorter, so the recursion terminates.
//!
//! Pure cases short-circuit: with no bosonic strands the sign of a
//! straightening is the ratio of the epsilon signs of the two reduced
//! words, and with no fermionic strands straightening is free.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::OnceLock;

use crate::diagram::{generator_bidegree, BiDegree, DiagramTerm, Element, Seq, StrandKind, Token};
use crate::error::{Error, Result};
use crate::perm::{
    apply_move, epsilon_canonical, epsilon_sign, move_path, Perm, ReducedWord, WordMove,
};
use crate::pol::{self, MPoly, MixedRule, PolVector};

/// A generator word: a source sequence and tokens applied bottom to top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorWord {
    pub source: Seq,
    pub tokens: Vec<Token>,
}

impl GeneratorWord {
    /// Validates every token against the running sequence at its height.
    pub fn new(source: Seq, tokens: Vec<Token>) -> Result<Self> {
        let word = GeneratorWord { source, tokens };
        word.heights()?;
        Ok(word)
    }

    /// The sequence below each token, plus the final (top) sequence.
    pub fn heights(&self) -> Result<Vec<Seq>> {
        let mut out = Vec::with_capacity(self.tokens.len() + 1);
        let mut cur = self.source.clone();
        for &t in &self.tokens {
            out.push(cur.clone());
            generator_bidegree(&cur, t)?;
            if let Token::Cross { position } = t {
                cur = cur.swap(position);
            }
        }
        out.push(cur);
        Ok(out)
    }

    pub fn target(&self) -> Result<Seq> {
        Ok(self.heights()?.pop().unwrap())
    }

    /// Total bidegree of the word.
    pub fn bidegree(&self) -> Result<BiDegree> {
        let heights = self.heights()?;
        let mut total = BiDegree::new(0, 0);
        for (&t, seq) in self.tokens.iter().zip(&heights) {
            total = total + generator_bidegree(seq, t)?;
        }
        Ok(total)
    }
}

/// Whether the pure-ambient shortcuts may be taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Sign formulas for purely fermionic ambients, free straightening for
    /// purely bosonic ones.
    Fast,
    /// Always replay elementary moves; used to cross-check the shortcuts.
    MovesOnly,
}

thread_local! {
    static MEMO: RefCell<HashMap<(Seq, Perm, usize, bool), Element>> = RefCell::new(HashMap::new());
}

/// The coefficient of the resolved term in the bosonic-fermionic-bosonic
/// braid relation, pinned by the polynomial action: the unique value in
/// {+1, -1} for which the relation annihilates the representation.
pub fn relation5_constant() -> i64 {
    static KAPPA: OnceLock<i64> = OnceLock::new();
    *KAPPA.get_or_init(|| {
        let source: Seq = "212".parse().unwrap();
        let w1 = [
            Token::Cross { position: 0 },
            Token::Cross { position: 1 },
            Token::Cross { position: 0 },
        ];
        let w2 = [
            Token::Cross { position: 1 },
            Token::Cross { position: 0 },
            Token::Cross { position: 1 },
        ];
        let id = Perm::identity(1);
        let mut candidates = vec![1i64, -1];
        for exps in pol::monomials_up_to(2, 3) {
            let v = PolVector::from_block(source.clone(), id.clone(), MPoly::monomial(exps, 1));
            let a1 = pol::act_tokens(&source, &w1, &v, MixedRule::Standard).unwrap();
            let a2 = pol::act_tokens(&source, &w2, &v, MixedRule::Standard).unwrap();
            let mut diff = a1;
            diff.add_assign(&a2.scaled(-1));
            candidates.retain(|&k| diff == v.scaled(k));
        }
        assert_eq!(
            candidates.len(),
            1,
            "braid correction coefficient must be pinned uniquely"
        );
        candidates[0]
    })
}

/// Normal form of C_p stacked on the canonical dotless diagram of (source, w).
fn mult_cross(source: &Seq, w: &Perm, p: usize, strategy: Strategy) -> Element {
    let key = (
        source.clone(),
        w.clone(),
        p,
        matches!(strategy, Strategy::Fast),
    );
    if let Some(hit) = MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let out = mult_cross_impl(source, w, p, strategy);
    MEMO.with(|m| m.borrow_mut().insert(key, out.clone()));
    out
}

fn mult_cross_impl(source: &Seq, w: &Perm, p: usize, strategy: Strategy) -> Element {
    let (n, m) = source.ambient();
    let v = w.mul_gen_left(p);
    if w.left_gen_raises(p) {
        if strategy == Strategy::Fast && m == 0 {
            // straightening two reduced fermionic words costs only the
            // ratio of their epsilon signs
            let mut word = vec![p as u8];
            word.extend(w.canonical_word());
            let rw = ReducedWord::new(word, n).unwrap();
            let chi = epsilon_sign(&rw) * epsilon_canonical(&v);
            return Element::from_term(DiagramTerm::new(source.clone(), &v, vec![]), chi);
        }
        if strategy == Strategy::Fast && n == 0 {
            return Element::from_term(DiagramTerm::new(source.clone(), &v, vec![0; m]), 1);
        }
        let mut u: Vec<u8> = w.canonical_word();
        u.reverse();
        u.push(p as u8);
        let mut target: Vec<u8> = v.canonical_word();
        target.reverse();
        if u == target {
            return Element::from_term(DiagramTerm::new(source.clone(), &v, vec![0; m]), 1);
        }
        let path = move_path(&u, &target);
        let (sign, corrections) = replay(source, u, &path, strategy);
        let mut out = corrections;
        out.add_term(DiagramTerm::new(source.clone(), &v, vec![0; m]), sign);
        out
    } else {
        if strategy == Strategy::Fast && (m == 0 || n == 0) {
            // square-zero crossings kill non-reduced pure words
            return Element::zero((n, m));
        }
        // rewrite D(w) so that its top crossing sits at position p, then
        // resolve the double crossing
        let mut start: Vec<u8> = w.canonical_word();
        start.reverse();
        let mut target: Vec<u8> = v.canonical_word();
        target.reverse();
        target.push(p as u8);
        let path = move_path(&start, &target);
        let (sign, corrections) = replay(source, start, &path, strategy);
        let tv = source.apply_perm(&v);
        let mut out = Element::zero((n, m));
        match (tv.kind(p), tv.kind(p + 1)) {
            (StrandKind::Fermionic, StrandKind::Fermionic)
            | (StrandKind::Bosonic, StrandKind::Bosonic) => {}
            (a, _) => {
                let bos_pos = if a == StrandKind::Bosonic { p } else { p + 1 };
                let k = tv.bosonic_index(bos_pos);
                let mut dots = vec![0u32; m];
                dots[k] = 1;
                out.add_term(DiagramTerm::new(source.clone(), &v, dots), sign);
            }
        }
        for (t, c) in corrections.terms() {
            out.add_assign(&apply_cross_to_term(t, p, strategy).scaled(c));
        }
        out
    }
}

/// Replays a move path on a bottom-to-top crossing word, tracking the sign
/// of fermionic commutations and collecting the resolved side terms of
/// bosonic-fermionic-bosonic braid moves.
///
/// Maintains the invariant: [original word] = sign * [current word] + out.
fn replay(
    source: &Seq,
    mut word: Vec<u8>,
    path: &[WordMove],
    strategy: Strategy,
) -> (i64, Element) {
    let (n, m) = source.ambient();
    let kappa = relation5_constant();
    let mut sign = 1i64;
    let mut out = Element::zero((n, m));
    for &mv in path {
        match mv {
            WordMove::Comm(k) => {
                let seq_k = seq_at_height(source, &word, k);
                let a = word[k] as usize;
                let b = word[k + 1] as usize;
                let ff = |s: &Seq, q: usize| {
                    s.kind(q) == StrandKind::Fermionic && s.kind(q + 1) == StrandKind::Fermionic
                };
                let seq_k1 = seq_k.swap(a);
                if ff(&seq_k, a) && ff(&seq_k1, b) {
                    sign = -sign;
                }
            }
            WordMove::Braid(k) => {
                let seq_k = seq_at_height(source, &word, k);
                let a = word[k] as usize;
                let b = word[k + 1] as usize;
                let q = a.min(b);
                let pattern = (seq_k.kind(q), seq_k.kind(q + 1), seq_k.kind(q + 2));
                if pattern
                    == (
                        StrandKind::Bosonic,
                        StrandKind::Fermionic,
                        StrandKind::Bosonic,
                    )
                {
                    let mut deleted = word.clone();
                    deleted.drain(k..k + 3);
                    // word (q, q+1, q) = word (q+1, q, q+1) + kappa * deleted
                    let dir = if a == q { kappa } else { -kappa };
                    let side = straighten_cross(source, &deleted, strategy);
                    out.add_assign(&side.scaled(sign * dir));
                }
            }
        }
        apply_move(&mut word, mv);
    }
    (sign, out)
}

/// Sequence at height k of a crossing word (below the k-th token).
fn seq_at_height(source: &Seq, word: &[u8], k: usize) -> Seq {
    let mut cur = source.clone();
    for &letter in &word[..k] {
        cur = cur.swap(letter as usize);
    }
    cur
}

/// Normal form of an arbitrary bottom-to-top crossing word (no dots).
fn straighten_cross(source: &Seq, word: &[u8], strategy: Strategy) -> Element {
    let mut e = Element::idempotent(source.clone());
    for &letter in word {
        e = apply_cross_to_element(&e, letter as usize, strategy);
    }
    e
}

fn apply_cross_to_element(e: &Element, p: usize, strategy: Strategy) -> Element {
    let mut out = Element::zero(e.ambient());
    for (t, c) in e.terms() {
        out.add_assign(&apply_cross_to_term(t, p, strategy).scaled(c));
    }
    out
}

/// Crossing applied on top of a basis term: slide it under the top dots,
/// then straighten the crossing word.
fn apply_cross_to_term(term: &DiagramTerm, p: usize, strategy: Strategy) -> Element {
    let j = term.target();
    let w = term.perm();
    let mut out = Element::zero(term.source().ambient());
    let mut riders = term.dots().to_vec();
    if j.kind(p) == StrandKind::Bosonic && j.kind(p + 1) == StrandKind::Bosonic {
        // divided-difference slide: the polynomial part keeps the old
        // diagram, the crossing continues under swapped exponents
        let k = j.bosonic_index(p);
        let a = riders[k];
        let b = riders[k + 1];
        if a != b {
            let (lo, hi, coeff) = if a > b { (b, a, 1i64) } else { (a, b, -1i64) };
            for t in lo..hi {
                let mut dots = riders.clone();
                dots[k] = t;
                dots[k + 1] = hi + lo - 1 - t;
                out.add_term(term.with_dots(dots), coeff);
            }
        }
        riders.swap(k, k + 1);
    }
    // mixed and fermionic crossings: the dot exponents ride through,
    // indexed by the unchanged left-to-right order of bosonic strands
    let crossed = mult_cross(term.source(), &w, p, strategy);
    for (t, c) in crossed.terms() {
        let dots: Vec<u32> = t
            .dots()
            .iter()
            .zip(&riders)
            .map(|(&x, &y)| x + y)
            .collect();
        out.add_term(t.with_dots(dots), c);
    }
    out
}

/// One token applied on top of every term of an element.
pub fn apply_token(e: &Element, token: Token, strategy: Strategy) -> Result<Element> {
    let mut out = Element::zero(e.ambient());
    for (t, c) in e.terms() {
        match token {
            Token::Dot { position } => {
                let top = t.target();
                generator_bidegree(top, token)?;
                let k = top.bosonic_index(position);
                let mut dots = t.dots().to_vec();
                dots[k] += 1;
                out.add_term(t.with_dots(dots), c);
            }
            Token::Cross { position } => {
                generator_bidegree(t.target(), token)?;
                out.add_assign(&apply_cross_to_term(t, position, strategy).scaled(c));
            }
        }
    }
    Ok(out)
}

/// Normal form of a generator word with the default strategy.
pub fn normal_form(word: &GeneratorWord) -> Result<Element> {
    normal_form_with(word, Strategy::Fast)
}

/// Normal form with an explicit straightening strategy.
pub fn normal_form_with(word: &GeneratorWord, strategy: Strategy) -> Result<Element> {
    word.heights()?;
    let mut e = Element::idempotent(word.source.clone());
    for &t in &word.tokens {
        e = apply_token(&e, t, strategy)?;
    }
    Ok(e)
}

/// Product of elements; `a * b` stacks `a` above `b`. Term pairs whose
/// inner sequences disagree contribute zero.
pub fn multiply(a: &Element, b: &Element) -> Result<Element> {
    multiply_with(a, b, Strategy::Fast)
}

pub fn multiply_with(a: &Element, b: &Element, strategy: Strategy) -> Result<Element> {
    if a.ambient() != b.ambient() {
        return Err(Error::AmbientMismatch(
            a.ambient().0,
            a.ambient().1,
            b.ambient().0,
            b.ambient().1,
        ));
    }
    let mut out = Element::zero(a.ambient());
    for (ta, ca) in a.terms() {
        for (tb, cb) in b.terms() {
            if ta.source() != tb.target() {
                continue;
            }
            let coeff = ca.checked_mul(cb).expect("coefficient overflow");
            let mut e = Element::from_term(tb.clone(), coeff);
            for token in ta.tokens_bottom_up() {
                e = apply_token(&e, token, strategy)?;
            }
            out.add_assign(&e);
        }
    }
    Ok(out)
}

/// The canonical basis vector sigma_w of the purely fermionic ring:
/// epsilon(w') times the canonical word diagram, independent of the word.
pub fn sigma_w(n: usize, w: &Perm) -> Result<Element> {
    if w.n() != n {
        return Err(Error::AmbientConstraint("matching strand count"));
    }
    let seq = Seq::new(vec![StrandKind::Fermionic; n]);
    Ok(Element::from_term(
        DiagramTerm::new(seq, w, vec![]),
        epsilon_canonical(w),
    ))
}

/// Reflection about the horizontal axis: reverses the token order of every
/// term. Extends the anti-involution x y -> reflect(y) reflect(x).
pub fn reflect(e: &Element) -> Result<Element> {
    let mut out = Element::zero(e.ambient());
    for (t, c) in e.terms() {
        let mut tokens = t.tokens_bottom_up();
        tokens.reverse();
        let word = GeneratorWord::new(t.target().clone(), tokens)?;
        out.add_assign(&normal_form(&word)?.scaled(c));
    }
    Ok(out)
}

/// One defining relation instance: a linear combination of generator words
/// from a common source that must evaluate to zero.
#[derive(Debug, Clone)]
pub struct RelationInstance {
    pub label: String,
    pub source: Seq,
    pub combo: Vec<(i64, Vec<Token>)>,
}

/// All defining relation instances on one source sequence.
///
/// `kappa` is the coefficient of the resolved side term in the
/// bosonic-fermionic-bosonic braid relation (see `relation5_constant`).
pub fn relation_instances(source: &Seq, kappa: i64) -> Vec<RelationInstance> {
    let len = source.len();
    let mut out = Vec::new();
    let cross = |p: usize| Token::Cross { position: p };
    let dot = |p: usize| Token::Dot { position: p };
    let is_f = |p: usize| source.kind(p) == StrandKind::Fermionic;
    let is_b = |p: usize| source.kind(p) == StrandKind::Bosonic;
    // 1) distant crossings commute, except that two fermionic-fermionic
    //    crossings anticommute
    if len >= 2 {
        for p in 0..len - 1 {
            for p2 in p + 2..len - 1 {
                let both_ff = is_f(p) && is_f(p + 1) && is_f(p2) && is_f(p2 + 1);
                let c = if both_ff { 1 } else { -1 };
                out.push(RelationInstance {
                    label: format!("r1:cross{}-cross{}", p + 1, p2 + 1),
                    source: source.clone(),
                    combo: vec![
                        (1, vec![cross(p), cross(p2)]),
                        (c, vec![cross(p2), cross(p)]),
                    ],
                });
            }
        }
    }
    // 2) dots commute with distant crossings and with each other
    for d in 0..len {
        if !is_b(d) {
            continue;
        }
        for p in 0..len.saturating_sub(1) {
            if d == p || d == p + 1 {
                continue;
            }
            out.push(RelationInstance {
                label: format!("r2:dot{}-cross{}", d + 1, p + 1),
                source: source.clone(),
                combo: vec![(1, vec![dot(d), cross(p)]), (-1, vec![cross(p), dot(d)])],
            });
        }
        for d2 in d + 1..len {
            if !is_b(d2) {
                continue;
            }
            out.push(RelationInstance {
                label: format!("r2:dot{}-dot{}", d + 1, d2 + 1),
                source: source.clone(),
                combo: vec![(1, vec![dot(d), dot(d2)]), (-1, vec![dot(d2), dot(d)])],
            });
        }
    }
    // 3) dot through a crossing
    for p in 0..len.saturating_sub(1) {
        match (source.kind(p), source.kind(p + 1)) {
            (StrandKind::Bosonic, StrandKind::Bosonic) => {
                out.push(RelationInstance {
                    label: format!("r3:nilhecke-a@{}", p + 1),
                    source: source.clone(),
                    combo: vec![
                        (1, vec![cross(p), dot(p)]),
                        (-1, vec![dot(p + 1), cross(p)]),
                        (-1, vec![]),
                    ],
                });
                out.push(RelationInstance {
                    label: format!("r3:nilhecke-b@{}", p + 1),
                    source: source.clone(),
                    combo: vec![
                        (1, vec![dot(p), cross(p)]),
                        (-1, vec![cross(p), dot(p + 1)]),
                        (-1, vec![]),
                    ],
                });
            }
            (StrandKind::Fermionic, StrandKind::Bosonic) => {
                out.push(RelationInstance {
                    label: format!("r3:slide@{}", p + 1),
                    source: source.clone(),
                    combo: vec![
                        (1, vec![dot(p + 1), cross(p)]),
                        (-1, vec![cross(p), dot(p)]),
                    ],
                });
            }
            (StrandKind::Bosonic, StrandKind::Fermionic) => {
                out.push(RelationInstance {
                    label: format!("r3:slide@{}", p + 1),
                    source: source.clone(),
                    combo: vec![
                        (1, vec![dot(p), cross(p)]),
                        (-1, vec![cross(p), dot(p + 1)]),
                    ],
                });
            }
            _ => {}
        }
    }
    // 4) double crossings
    for p in 0..len.saturating_sub(1) {
        let combo = match (source.kind(p), source.kind(p + 1)) {
            (StrandKind::Fermionic, StrandKind::Fermionic)
            | (StrandKind::Bosonic, StrandKind::Bosonic) => {
                vec![(1, vec![cross(p), cross(p)])]
            }
            (StrandKind::Fermionic, StrandKind::Bosonic) => {
                vec![(1, vec![cross(p), cross(p)]), (-1, vec![dot(p + 1)])]
            }
            (StrandKind::Bosonic, StrandKind::Fermionic) => {
                vec![(1, vec![cross(p), cross(p)]), (-1, vec![dot(p)])]
            }
        };
        out.push(RelationInstance {
            label: format!("r4:double@{}", p + 1),
            source: source.clone(),
            combo,
        });
    }
    // 5) braid moves; the bosonic-fermionic-bosonic pattern resolves with
    //    an extra term
    for p in 0..len.saturating_sub(2) {
        let w1 = vec![cross(p), cross(p + 1), cross(p)];
        let w2 = vec![cross(p + 1), cross(p), cross(p + 1)];
        let mut combo = vec![(1, w1), (-1, w2)];
        if is_b(p) && is_f(p + 1) && is_b(p + 2) {
            combo.push((-kappa, vec![]));
        }
        out.push(RelationInstance {
            label: format!("r5:braid@{}", p + 1),
            source: source.clone(),
            combo,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_perms, perm_of_word};

    fn seq(s: &str) -> Seq {
        s.parse().unwrap()
    }

    fn word(src: &str, tokens: &[Token]) -> GeneratorWord {
        GeneratorWord::new(seq(src), tokens.to_vec()).unwrap()
    }

    fn cross(p: usize) -> Token {
        Token::Cross { position: p }
    }

    fn dot(p: usize) -> Token {
        Token::Dot { position: p }
    }

    #[test]
    fn squares_vanish() {
        let nf = normal_form(&word("22", &[cross(0), cross(0)])).unwrap();
        assert!(nf.is_zero());
        let nf = normal_form(&word("11", &[cross(0), cross(0)])).unwrap();
        assert!(nf.is_zero());
    }

    #[test]
    fn mixed_double_crossing_gives_dot() {
        let nf = normal_form(&word("12", &[cross(0), cross(0)])).unwrap();
        let expected =
            Element::from_term(DiagramTerm::idempotent(seq("12")).with_dots(vec![1]), 1);
        assert_eq!(nf, expected);
    }

    #[test]
    fn nilhecke_rearrangement() {
        // dot at the bottom right, then a crossing: equals the dotted
        // crossing minus the idempotent
        let nf = normal_form(&word("22", &[dot(1), cross(0)])).unwrap();
        let s1 = Perm::identity(2).mul_gen_left(0);
        let mut expected = Element::from_term(DiagramTerm::new(seq("22"), &s1, vec![1, 0]), 1);
        expected.add_term(DiagramTerm::idempotent(seq("22")), -1);
        assert_eq!(nf, expected);
    }

    #[test]
    fn distant_fermionic_words_anticommute() {
        let a = normal_form(&word("1111", &[cross(0), cross(2)])).unwrap();
        let b = normal_form(&word("1111", &[cross(2), cross(0)])).unwrap();
        assert_eq!(a, b.scaled(-1));
        assert!(!a.is_zero());
    }

    #[test]
    fn braid_difference_is_resolved_term() {
        let kappa = relation5_constant();
        let a = normal_form(&word("212", &[cross(0), cross(1), cross(0)])).unwrap();
        let b = normal_form(&word("212", &[cross(1), cross(0), cross(1)])).unwrap();
        let diff = &a - &b;
        assert_eq!(diff, Element::idempotent(seq("212")).scaled(kappa));
    }

    #[test]
    fn kappa_is_plus_one() {
        assert_eq!(relation5_constant(), 1);
    }

    #[test]
    fn idempotent_on_normal_inputs() {
        // evaluating the token stream of a basis term returns the term
        for src in ["212", "121", "22", "1221"] {
            let s = seq(src);
            for t in crate::diagram::enumerate_basis(&s, &s, 4).unwrap() {
                let w = GeneratorWord::new(s.clone(), t.tokens_bottom_up()).unwrap();
                let nf = normal_form(&w).unwrap();
                assert_eq!(nf, Element::from_term(t.clone(), 1));
            }
        }
    }

    #[test]
    fn orthogonal_idempotents() {
        let a = Element::idempotent(seq("12"));
        let b = Element::idempotent(seq("21"));
        assert_eq!(multiply(&a, &a).unwrap(), a);
        assert!(multiply(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn e2_is_idempotent() {
        let e2 = normal_form(&word("22", &[dot(0), cross(0)])).unwrap();
        let sq = multiply(&e2, &e2).unwrap();
        assert_eq!(sq, e2);
    }

    #[test]
    fn sigma_examples() {
        let id = Perm::identity(2);
        assert_eq!(sigma_w(2, &id).unwrap(), Element::idempotent(seq("11")));
        let s1 = id.mul_gen_left(0);
        let e = sigma_w(2, &s1).unwrap();
        assert_eq!(e.terms().next().unwrap().1, 1);
        // s_1 s_3 has canonical word (1, 3) with epsilon -1
        let w = perm_of_word(&[0, 2], 4);
        let e = sigma_w(4, &w).unwrap();
        assert_eq!(e.terms().next().unwrap().1, -1);
    }

    #[test]
    fn sigma_multiplication_matches_epsilon_bookkeeping() {
        // sigma_i sigma_w = epsilon_step(w, i) sigma_{s_i w} when lengths add
        for n in [3usize, 4] {
            for w in all_perms(n) {
                for i in 0..n - 1 {
                    let si = sigma_w(n, &Perm::identity(n).mul_gen_left(i)).unwrap();
                    let sw = sigma_w(n, &w).unwrap();
                    let prod = multiply(&si, &sw).unwrap();
                    if w.left_gen_raises(i) {
                        let expected = sigma_w(n, &w.mul_gen_left(i))
                            .unwrap()
                            .scaled(crate::perm::epsilon_step(&w, i));
                        assert_eq!(prod, expected);
                    } else {
                        assert!(prod.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn strategies_agree_on_fermionic_products() {
        for n in [3usize, 4] {
            let s = "1".repeat(n);
            for w in all_perms(n) {
                for i in 0..n - 1 {
                    let mut tokens: Vec<Token> = w
                        .canonical_word()
                        .iter()
                        .rev()
                        .map(|&l| cross(l as usize))
                        .collect();
                    tokens.push(cross(i));
                    let gw = word(&s, &tokens);
                    let fast = normal_form_with(&gw, Strategy::Fast).unwrap();
                    let slow = normal_form_with(&gw, Strategy::MovesOnly).unwrap();
                    assert_eq!(fast, slow);
                }
            }
        }
    }

    #[test]
    fn relation_instances_hold_in_normal_form() {
        for src in [
            "22", "11", "12", "21", "212", "121", "221", "122", "222", "111",
        ] {
            let s = seq(src);
            for inst in relation_instances(&s, relation5_constant()) {
                let mut total = Element::zero(s.ambient());
                for (c, tokens) in &inst.combo {
                    let gw = GeneratorWord::new(s.clone(), tokens.clone()).unwrap();
                    total.add_assign(&normal_form(&gw).unwrap().scaled(*c));
                }
                assert!(total.is_zero(), "relation {} failed on {}", inst.label, src);
            }
        }
    }

    #[test]
    fn relation_instances_homogeneous() {
        let mut weights = Vec::new();
        for total in 0..=4usize {
            for n in 0..=total {
                weights.push((n, total - n));
            }
        }
        for (n, m) in weights {
            for s in Seq::enumerate(n, m) {
                for inst in relation_instances(&s, 1) {
                    let degrees: Vec<BiDegree> = inst
                        .combo
                        .iter()
                        .map(|(_, tokens)| {
                            GeneratorWord::new(s.clone(), tokens.clone())
                                .unwrap()
                                .bidegree()
                                .unwrap()
                        })
                        .collect();
                    assert!(
                        degrees.windows(2).all(|p| p[0] == p[1]),
                        "inhomogeneous relation {} on {}",
                        inst.label,
                        s
                    );
                }
            }
        }
    }

    #[test]
    fn oracle_equivalence_small() {
        // Pol action of a word equals the Pol action of its normal form
        use crate::pol::{act_element, act_tokens, monomials_up_to};
        for src in ["212", "121", "122", "21"] {
            let s = seq(src);
            let n = s.n();
            let tokens: Vec<Token> = (0..s.len().saturating_sub(1))
                .map(cross)
                .chain(
                    (0..s.len())
                        .filter(|&p| s.kind(p) == StrandKind::Bosonic)
                        .map(dot),
                )
                .collect();
            for t1 in &tokens {
                for t2 in &tokens {
                    for t3 in &tokens {
                        let Ok(gw) = GeneratorWord::new(s.clone(), vec![*t1, *t2, *t3]) else {
                            continue;
                        };
                        let nf = normal_form(&gw).unwrap();
                        for w in all_perms(n) {
                            for e in monomials_up_to(s.m(), 2) {
                                let v = PolVector::from_block(
                                    s.clone(),
                                    w.clone(),
                                    MPoly::monomial(e, 1),
                                );
                                let direct =
                                    act_tokens(&s, &gw.tokens, &v, MixedRule::Standard).unwrap();
                                let via_nf = act_element(&nf, &v, MixedRule::Standard).unwrap();
                                assert_eq!(direct, via_nf, "word {:?} on {}", gw.tokens, src);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dim_fermionic_ring_is_factorial() {
        // closure of the basis under multiplication stays within the n!
        // canonical diagrams
        for n in 2..=4usize {
            let perms = all_perms(n);
            let mut seen = std::collections::BTreeSet::new();
            for u in &perms {
                for w in &perms {
                    let prod =
                        multiply(&sigma_w(n, u).unwrap(), &sigma_w(n, w).unwrap()).unwrap();
                    for (t, _) in prod.terms() {
                        seen.insert(t.perm());
                    }
                }
            }
            assert_eq!(seen.len(), perms.len());
        }
    }

    #[test]
    fn symmetric_dots_are_central() {
        // the sum of all dots commutes with every basis element (n + m <= 3)
        for (n, m) in [(1usize, 1usize), (0, 2), (1, 2), (2, 1)] {
            let mut esym = Element::zero((n, m));
            for src in Seq::enumerate(n, m) {
                for k in 0..m {
                    let pos = src.bosonic_position(k);
                    let gw = GeneratorWord::new(src.clone(), vec![dot(pos)]).unwrap();
                    esym.add_assign(&normal_form(&gw).unwrap());
                }
            }
            for s in Seq::enumerate(n, m) {
                for t in crate::diagram::enumerate_basis(&s, &s, 3).unwrap() {
                    let b = Element::from_term(t, 1);
                    let left = multiply(&esym, &b).unwrap();
                    let right = multiply(&b, &esym).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn reflection_is_anti_multiplicative() {
        let s = seq("212");
        let terms = crate::diagram::enumerate_basis(&s, &s, 3).unwrap();
        for a in terms.iter().take(4) {
            for b in terms.iter().take(4) {
                let ea = Element::from_term(a.clone(), 1);
                let eb = Element::from_term(b.clone(), 1);
                let lhs = reflect(&multiply(&ea, &eb).unwrap()).unwrap();
                let rhs = multiply(&reflect(&eb).unwrap(), &reflect(&ea).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
