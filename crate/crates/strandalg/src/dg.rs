//! The differential and its linear algebra: block complexes, per-bidegree
//! homology, contraction witnesses and idempotent truncations.
//!
//! The differential resolves fermionic crossings one at a time, with the
//! sign (-1)^(number of fermionic crossings above the resolved one), and is
//! zero on dots, bosonic crossings and mixed crossings. It has bidegree
//! (1, 0), so every (source, target, qdeg) block of the ring is a finite
//! complex of vector spaces indexed by the cohomological degree.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::diagram::{
    enumerate_basis_bidegree, BiDegree, DiagramTerm, Element, Seq, StrandKind, Token,
};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rewrite::{multiply, normal_form, GeneratorWord};

/// Differential of a basis diagram: the signed sum over its fermionic
/// crossings of the diagram with that crossing resolved.
pub fn differential_term(term: &DiagramTerm) -> Result<Element> {
    let source = term.source();
    let btt: Vec<u8> = term.word().iter().rev().copied().collect();
    // locate fermionic crossings and the sequence at each height
    let mut cur = source.clone();
    let mut fermionic_heights = Vec::new();
    for (k, &letter) in btt.iter().enumerate() {
        let p = letter as usize;
        if cur.kind(p) == StrandKind::Fermionic && cur.kind(p + 1) == StrandKind::Fermionic {
            fermionic_heights.push(k);
        }
        cur = cur.swap(p);
    }
    let target = term.target();
    let mut out = Element::zero(source.ambient());
    let total = fermionic_heights.len();
    for (idx, &k) in fermionic_heights.iter().enumerate() {
        // crossings above k in the fermionic list: total - 1 - idx
        let sign = if (total - 1 - idx) % 2 == 0 { 1 } else { -1 };
        let mut tokens: Vec<Token> = Vec::with_capacity(btt.len() - 1 + term.dots().len());
        for (j, &letter) in btt.iter().enumerate() {
            if j != k {
                tokens.push(Token::Cross {
                    position: letter as usize,
                });
            }
        }
        for (b, &e) in term.dots().iter().enumerate() {
            let pos = target.bosonic_position(b);
            for _ in 0..e {
                tokens.push(Token::Dot { position: pos });
            }
        }
        let word = GeneratorWord::new(source.clone(), tokens)?;
        out.add_assign(&normal_form(&word)?.scaled(sign));
    }
    Ok(out)
}

/// Linear extension of the differential.
pub fn differential(e: &Element) -> Result<Element> {
    let mut out = Element::zero(e.ambient());
    for (t, c) in e.terms() {
        out.add_assign(&differential_term(t)?.scaled(c));
    }
    Ok(out)
}

/// One (source, target, qdeg) block of the ring as a finite complex.
#[derive(Debug, Clone)]
pub struct BlockComplex {
    pub source: Seq,
    pub target: Seq,
    pub qdeg: i64,
    /// Ordered basis per cohomological degree.
    pub spaces: BTreeMap<i64, Vec<DiagramTerm>>,
    /// Matrix of d from degree k to k+1; columns indexed by spaces[k].
    pub maps: BTreeMap<i64, Vec<Vec<i64>>>,
}

impl BlockComplex {
    pub fn assemble(source: &Seq, target: &Seq, qdeg: i64) -> Result<BlockComplex> {
        let (ff_max, _, _) = max_crossing_counts(source, target);
        let mut spaces = BTreeMap::new();
        for coh in -(ff_max as i64)..=0 {
            let basis = enumerate_basis_bidegree(source, target, BiDegree::new(coh, qdeg))?;
            if !basis.is_empty() {
                spaces.insert(coh, basis);
            }
        }
        let mut maps = BTreeMap::new();
        for (&coh, basis) in &spaces {
            let empty = Vec::new();
            let next = spaces.get(&(coh + 1)).unwrap_or(&empty);
            let index: BTreeMap<&DiagramTerm, usize> =
                next.iter().enumerate().map(|(i, t)| (t, i)).collect();
            let mut mat = vec![vec![0i64; basis.len()]; next.len()];
            for (c, t) in basis.iter().enumerate() {
                let dt = differential_term(t)?;
                for (t2, coeff) in dt.terms() {
                    let r = *index
                        .get(t2)
                        .expect("differential left the expected bidegree slice");
                    mat[r][c] = coeff;
                }
            }
            maps.insert(coh, mat);
        }
        Ok(BlockComplex {
            source: source.clone(),
            target: target.clone(),
            qdeg,
            spaces,
            maps,
        })
    }

    pub fn dim(&self, coh: i64) -> usize {
        self.spaces.get(&coh).map_or(0, |b| b.len())
    }

    fn rank_of_map(&self, coh: i64, modulus: Option<u64>) -> usize {
        match self.maps.get(&coh) {
            None => 0,
            Some(mat) if mat.is_empty() => 0,
            Some(mat) => match modulus {
                None => linalg::rank_int(mat),
                Some(p) => linalg::rank_mod_p(mat, p),
            },
        }
    }

    /// d ∘ d = 0 on every basis element of this block.
    pub fn verify_d_squared(&self) -> Result<bool> {
        for basis in self.spaces.values() {
            for t in basis {
                let dd = differential(&differential_term(t)?)?;
                if !dd.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Homology dimensions per cohomological degree, over Q (modulus None)
    /// or over F_p.
    pub fn homology(&self, modulus: Option<u64>) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&coh, basis) in &self.spaces {
            let out_rank = self.rank_of_map(coh, modulus);
            let in_rank = self.rank_of_map(coh - 1, modulus);
            let h = basis.len() - out_rank - in_rank;
            if h > 0 {
                out.insert(coh, h);
            }
        }
        out
    }

    /// Invariant factors of the integral differential into degree coh+1.
    pub fn smith_invariants(&self, coh: i64) -> Vec<num_bigint::BigInt> {
        match self.maps.get(&coh) {
            None => Vec::new(),
            Some(mat) if mat.is_empty() => Vec::new(),
            Some(mat) => linalg::smith_diagonal(mat),
        }
    }
}

fn max_crossing_counts(source: &Seq, target: &Seq) -> (usize, usize, usize) {
    let mut ff_max = 0;
    let mut bb_max = 0;
    let mut mm_max = 0;
    for w in crate::perm::all_perms(source.len()) {
        if &source.apply_perm(&w) != target {
            continue;
        }
        let (ff, bb, mm) = crate::diagram::crossing_counts(source, &w);
        ff_max = ff_max.max(ff);
        bb_max = bb_max.max(bb);
        mm_max = mm_max.max(mm);
    }
    (ff_max, bb_max, mm_max)
}

/// Homology dimensions of one block per cohomological degree.
pub fn homology_dim(
    source: &Seq,
    target: &Seq,
    qdeg: i64,
    modulus: Option<u64>,
) -> Result<BTreeMap<i64, usize>> {
    Ok(BlockComplex::assemble(source, target, qdeg)?.homology(modulus))
}

/// A homology report row, JSON-friendly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomologyRow {
    pub source: String,
    pub target: String,
    pub qdeg: i64,
    pub cohdeg: i64,
    pub dim: usize,
}

pub const HOMOLOGY_SCHEMA: &str = "strandalg.homology/1";

/// Homology of all blocks of R(n, m) with |qdeg| up to the cutoff.
pub fn homology_report(
    n: usize,
    m: usize,
    qmax: i64,
    modulus: Option<u64>,
) -> Result<Vec<HomologyRow>> {
    let mut rows = Vec::new();
    for source in Seq::enumerate(n, m) {
        for target in Seq::enumerate(n, m) {
            for qdeg in -qmax..=qmax {
                for (cohdeg, dim) in homology_dim(&source, &target, qdeg, modulus)? {
                    rows.push(HomologyRow {
                        source: source.to_string(),
                        target: target.to_string(),
                        qdeg,
                        cohdeg,
                        dim,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// A rational-coefficient combination of basis diagrams; the carrier for
/// contraction witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness {
    pub terms: Vec<(DiagramTerm, BigRational)>,
}

impl Witness {
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, r)| r.is_integer())
    }

    /// The witness as an integer element, when possible.
    pub fn to_element(&self, ambient: (usize, usize)) -> Option<Element> {
        let mut out = Element::zero(ambient);
        for (t, r) in &self.terms {
            if !r.is_integer() {
                return None;
            }
            let c: i64 = r.to_integer().try_into().ok()?;
            out.add_term(t.clone(), c);
        }
        Some(out)
    }

    /// d applied with rational coefficients, as a coefficient map.
    pub fn differential(&self) -> Result<BTreeMap<DiagramTerm, BigRational>> {
        let mut out: BTreeMap<DiagramTerm, BigRational> = BTreeMap::new();
        for (t, r) in &self.terms {
            for (t2, c) in differential_term(t)?.terms() {
                let add = r * BigRational::from_integer(c.into());
                let entry = out.entry(t2.clone()).or_insert_with(BigRational::zero);
                *entry += add;
                if entry.is_zero() {
                    out.remove(t2);
                }
            }
        }
        Ok(out)
    }
}

/// Outcome of a contraction search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contraction {
    /// y with d(y) equal to the requested idempotent.
    Witness(Witness),
    /// Certified: no solution in the bidegree slice below the target.
    NoContraction,
}

/// Searches the (coh-1, qdeg) slices of the target's blocks for y with
/// d(y) = target. The target must be an idempotent element.
pub fn find_contraction(target: &Element) -> Result<Contraction> {
    find_contraction_in(target, None)
}

/// As `find_contraction`, optionally over F_p.
pub fn find_contraction_in(target: &Element, modulus: Option<u64>) -> Result<Contraction> {
    if multiply(target, target)? != *target {
        return Err(Error::NotIdempotent);
    }
    let mut witness = Witness::default();
    for ((source, tgt, bd), component) in target.homogeneous_components() {
        let below = BiDegree::new(bd.coh - 1, bd.qdeg);
        let candidates = enumerate_basis_bidegree(&source, &tgt, below)?;
        let slice = enumerate_basis_bidegree(&source, &tgt, bd)?;
        let index: BTreeMap<&DiagramTerm, usize> =
            slice.iter().enumerate().map(|(i, t)| (t, i)).collect();
        // rows of the system: one per coordinate of the target slice
        let mut mat = vec![vec![0i64; candidates.len()]; slice.len()];
        for (c, t) in candidates.iter().enumerate() {
            for (t2, coeff) in differential_term(t)?.terms() {
                mat[index[t2]][c] = coeff;
            }
        }
        let mut rhs = vec![0i64; slice.len()];
        for (t, c) in component.terms() {
            rhs[index[t]] = c;
        }
        match modulus {
            None => match linalg::solve_rational(&mat, &rhs) {
                None => return Ok(Contraction::NoContraction),
                Some(x) => {
                    for (t, v) in candidates.iter().zip(x) {
                        if !v.is_zero() {
                            witness.terms.push((t.clone(), v));
                        }
                    }
                }
            },
            Some(p) => match linalg::solve_mod_p(&mat, &rhs, p) {
                None => return Ok(Contraction::NoContraction),
                Some(x) => {
                    for (t, v) in candidates.iter().zip(x) {
                        if v != 0 {
                            witness
                                .terms
                                .push((t.clone(), BigRational::from_integer((v as i64).into())));
                        }
                    }
                }
            },
        }
    }
    Ok(Contraction::Witness(witness))
}

/// Verifies d(witness) = target exactly over Q.
pub fn verify_contraction(witness: &Witness, target: &Element) -> Result<bool> {
    let d = witness.differential()?;
    let mut expected: BTreeMap<DiagramTerm, BigRational> = BTreeMap::new();
    for (t, c) in target.terms() {
        expected.insert(t.clone(), BigRational::from_integer(c.into()));
    }
    Ok(d == expected)
}

// --- witness serialization ---

#[derive(Serialize, Deserialize)]
struct WitnessTermJson {
    seq: String,
    word: Vec<u8>,
    dots: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ContractionJson {
    schema: String,
    target: serde_json::Value,
    witness: Vec<WitnessTermJson>,
}

pub const CONTRACTION_SCHEMA: &str = "strandalg.contraction/1";

pub fn contraction_to_json(target: &Element, witness: &Witness) -> serde_json::Value {
    let terms = witness
        .terms
        .iter()
        .map(|(t, r)| WitnessTermJson {
            seq: t.source().to_string(),
            word: t.word().iter().map(|&i| i + 1).collect(),
            dots: t.dots().to_vec(),
            coeff: r.to_string(),
        })
        .collect();
    serde_json::to_value(ContractionJson {
        schema: CONTRACTION_SCHEMA.to_string(),
        target: target.to_json(),
        witness: terms,
    })
    .unwrap()
}

pub fn contraction_from_json(v: &serde_json::Value) -> std::result::Result<(Element, Witness), String> {
    let cj: ContractionJson = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    if cj.schema != CONTRACTION_SCHEMA {
        return Err(format!("unsupported schema {}", cj.schema));
    }
    let target = Element::from_json(&cj.target)?;
    let mut witness = Witness::default();
    for t in cj.witness {
        let seq: Seq = t.seq.parse()?;
        let word: Vec<u8> = t
            .word
            .iter()
            .map(|&i| i.checked_sub(1).ok_or("word letters are 1-based"))
            .collect::<std::result::Result<_, _>>()?;
        let w = crate::perm::perm_of_word(&word, seq.len());
        let coeff: BigRational = t.coeff.parse().map_err(|e| format!("{e}"))?;
        witness
            .terms
            .push((DiagramTerm::new(seq, &w, t.dots), coeff));
    }
    Ok((target, witness))
}

/// The corner ring e R e of an idempotent e with d(e) = 0, presented by
/// row-reduced coordinate bases of its bidegree slices.
pub struct TruncatedRing {
    e: Element,
    ambient: (usize, usize),
}

/// A basis of one (qdeg, coh) slice of e R e in ambient coordinates.
pub struct SliceBasis {
    /// Ambient basis diagrams spanning the enclosing slice of R.
    pub ambient_terms: Vec<DiagramTerm>,
    /// Row-reduced basis vectors of the corner slice.
    pub rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl SliceBasis {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Coordinates of an ambient vector lying in the span of the rows.
    fn coords(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        let coords: Vec<BigRational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        // check the combination reproduces v
        let mut recon = vec![BigRational::zero(); v.len()];
        for (c, row) in coords.iter().zip(&self.rows) {
            for (r, x) in recon.iter_mut().zip(row) {
                *r += c * x;
            }
        }
        if recon == v { Some(coords) } else { None }
    }
}

impl TruncatedRing {
    /// Requires e idempotent with d(e) = 0.
    pub fn new(e: Element) -> Result<TruncatedRing> {
        if multiply(&e, &e)? != e {
            return Err(Error::NotIdempotent);
        }
        if !differential(&e)?.is_zero() {
            return Err(Error::AmbientConstraint("idempotent with d(e) = 0"));
        }
        let ambient = e.ambient();
        Ok(TruncatedRing { e, ambient })
    }

    pub fn projector(&self) -> &Element {
        &self.e
    }

    pub fn ambient(&self) -> (usize, usize) {
        self.ambient
    }

    /// e x e.
    pub fn project(&self, x: &Element) -> Result<Element> {
        multiply(&self.e, &multiply(x, &self.e)?)
    }

    /// Sequences appearing in the idempotent.
    fn corner_seqs(&self) -> Vec<Seq> {
        let mut out: Vec<Seq> = Vec::new();
        for (t, _) in self.e.terms() {
            if !out.contains(t.source()) {
                out.push(t.source().clone());
            }
            if !out.contains(t.target()) {
                out.push(t.target().clone());
            }
        }
        out
    }

    /// Row-reduced basis of the (qdeg, coh) slice of e R e.
    pub fn slice_basis(&self, qdeg: i64, coh: i64) -> Result<SliceBasis> {
        let seqs = self.corner_seqs();
        let bd = BiDegree::new(coh, qdeg);
        let mut ambient_terms = Vec::new();
        for src in &seqs {
            for tgt in &seqs {
                ambient_terms.extend(enumerate_basis_bidegree(src, tgt, bd)?);
            }
        }
        ambient_terms.sort();
        let index: BTreeMap<&DiagramTerm, usize> = ambient_terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for t in &ambient_terms {
            let projected = self.project(&Element::from_term(t.clone(), 1))?;
            let mut row = vec![0i64; ambient_terms.len()];
            for (t2, c) in projected.terms() {
                row[index[t2]] = c;
            }
            if row.iter().any(|&c| c != 0) {
                rows.push(row);
            }
        }
        let (rref, pivots) = rref_rational(rows);
        Ok(SliceBasis {
            ambient_terms,
            rows: rref,
            pivots,
        })
    }

    /// Dimensions of the corner slices for every cohomological degree at a
    /// fixed q-degree.
    pub fn slice_dims(&self, qdeg: i64) -> Result<BTreeMap<i64, usize>> {
        let max_ff = self.ambient.0 * (self.ambient.0.saturating_sub(1)) / 2;
        let mut out = BTreeMap::new();
        for coh in -(max_ff as i64)..=0 {
            let d = self.slice_basis(qdeg, coh)?.dim();
            if d > 0 {
                out.insert(coh, d);
            }
        }
        Ok(out)
    }

    /// Matrix of the differential from the (qdeg, coh) slice to the
    /// (qdeg, coh+1) slice of the corner ring.
    pub fn d_matrix(&self, qdeg: i64, coh: i64) -> Result<Vec<Vec<BigRational>>> {
        let dom = self.slice_basis(qdeg, coh)?;
        let cod = self.slice_basis(qdeg, coh + 1)?;
        let cod_index: BTreeMap<&DiagramTerm, usize> = cod
            .ambient_terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let mut mat = vec![vec![BigRational::zero(); dom.dim()]; cod.dim()];
        for (col, row_vec) in dom.rows.iter().enumerate() {
            // differential of the basis vector, in ambient coordinates
            let mut img = vec![BigRational::zero(); cod.ambient_terms.len()];
            for (t, coeff) in dom.ambient_terms.iter().zip(row_vec) {
                if coeff.is_zero() {
                    continue;
                }
                for (t2, c) in differential_term(t)?.terms() {
                    let r = *cod_index
                        .get(t2)
                        .expect("differential left the corner slice");
                    img[r] += coeff * BigRational::from_integer(c.into());
                }
            }
            let coords = cod
                .coords(&img)
                .expect("differential image must lie in the corner ring");
            for (r, v) in coords.into_iter().enumerate() {
                mat[r][col] = v;
            }
        }
        Ok(mat)
    }

    /// Homology dimensions of the corner complex at one q-degree.
    pub fn homology(&self, qdeg: i64) -> Result<BTreeMap<i64, usize>> {
        let dims = self.slice_dims(qdeg)?;
        let mut out = BTreeMap::new();
        for (&coh, &dim) in &dims {
            let out_rank = rank_rational_owned(self.d_matrix(qdeg, coh)?);
            let in_rank = rank_rational_owned(self.d_matrix(qdeg, coh - 1)?);
            let h = dim - out_rank - in_rank;
            if h > 0 {
                out.insert(coh, h);
            }
        }
        Ok(out)
    }
}

fn rank_rational_owned(mat: Vec<Vec<BigRational>>) -> usize {
    if mat.is_empty() {
        return 0;
    }
    linalg::rank_rational(mat)
}

/// Reduced row echelon form over Q of an integer matrix; returns the
/// nonzero rows and their pivot columns.
fn rref_rational(rows: Vec<Vec<i64>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut mat: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let nrows = mat.len();
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !mat[r][col].is_zero());
        match pivot {
            None => col += 1,
            Some(pr) => {
                mat.swap(rank, pr);
                let inv = mat[rank][col].recip();
                for c in col..ncols {
                    let v = &mat[rank][c] * &inv;
                    mat[rank][c] = v;
                }
                for r in 0..nrows {
                    if r != rank && !mat[r][col].is_zero() {
                        let f = mat[r][col].clone();
                        for c in col..ncols {
                            let v = &mat[r][c] - &f * &mat[rank][c];
                            mat[r][c] = v;
                        }
                    }
                }
                pivots.push(col);
                rank += 1;
                col += 1;
            }
        }
    }
    mat.truncate(rank);
    (mat, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;
    use crate::rewrite::Strategy;

    fn seq(s: &str) -> Seq {
        s.parse().unwrap()
    }

    #[test]
    fn d_of_single_crossing() {
        // d(sigma_1) = 1 in the two-strand fermionic ring
        let s1 = Perm::identity(2).mul_gen_left(0);
        let t = DiagramTerm::new(seq("11"), &s1, vec![]);
        let d = differential_term(&t).unwrap();
        assert_eq!(d, Element::idempotent(seq("11")));
    }

    #[test]
    fn d_vanishes_on_even_generators() {
        // dots, bosonic crossings, mixed crossings
        let t = DiagramTerm::idempotent(seq("22")).with_dots(vec![1, 0]);
        assert!(differential_term(&t).unwrap().is_zero());
        let s1 = Perm::identity(2).mul_gen_left(0);
        let t = DiagramTerm::new(seq("22"), &s1, vec![0, 0]);
        assert!(differential_term(&t).unwrap().is_zero());
        let t = DiagramTerm::new(seq("12"), &s1, vec![0]);
        assert!(differential_term(&t).unwrap().is_zero());
    }

    #[test]
    fn d_leibniz_on_two_crossings() {
        // d(sigma_1 sigma_2) = sigma_2 - sigma_1
        let w = crate::perm::perm_of_word(&[0, 1], 3);
        let t = DiagramTerm::new(seq("111"), &w, vec![]);
        let d = differential_term(&t).unwrap();
        let s = seq("111");
        let sigma1 = DiagramTerm::new(s.clone(), &Perm::identity(3).mul_gen_left(0), vec![]);
        let sigma2 = DiagramTerm::new(s.clone(), &Perm::identity(3).mul_gen_left(1), vec![]);
        let mut expected = Element::from_term(sigma2, 1);
        expected.add_term(sigma1, -1);
        assert_eq!(d, expected);
    }

    #[test]
    fn d_squared_zero_small() {
        for (n, m) in [(2usize, 0usize), (3, 0), (2, 1), (1, 2)] {
            for source in Seq::enumerate(n, m) {
                for target in Seq::enumerate(n, m) {
                    for qdeg in -4..=4 {
                        let bc = BlockComplex::assemble(&source, &target, qdeg).unwrap();
                        assert!(bc.verify_d_squared().unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn homology_vanishes_for_two_fermions() {
        let s = seq("11");
        let h = homology_dim(&s, &s, 0, None).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn homology_whole_ring_when_no_fermions() {
        // with no fermionic strands the differential is zero
        let s = seq("22");
        let h = homology_dim(&s, &s, -2, None).unwrap();
        assert_eq!(h.get(&0), Some(&1));
    }

    #[test]
    fn homology_single_mixed_block() {
        // one fermionic, one bosonic strand: no fermionic crossings exist,
        // every even q-degree is one-dimensional
        let s = seq("12");
        for q in [0i64, 2, 4] {
            let h = homology_dim(&s, &s, q, None).unwrap();
            assert_eq!(h.get(&0), Some(&1));
        }
        assert!(homology_dim(&s, &s, 1, None).unwrap().is_empty());
    }

    #[test]
    fn contraction_of_two_fermions() {
        let target = Element::idempotent(seq("11"));
        match find_contraction(&target).unwrap() {
            Contraction::Witness(w) => {
                assert!(verify_contraction(&w, &target).unwrap());
                assert_eq!(w.terms.len(), 1);
            }
            Contraction::NoContraction => panic!("expected a witness"),
        }
    }

    #[test]
    fn contraction_of_unit_three_fermions() {
        let target = Element::unit(3, 0);
        match find_contraction(&target).unwrap() {
            Contraction::Witness(w) => {
                assert!(verify_contraction(&w, &target).unwrap());
            }
            Contraction::NoContraction => panic!("expected a witness"),
        }
    }

    #[test]
    fn no_contraction_in_mixed_rank_one_block() {
        let target = Element::idempotent(seq("12"));
        assert_eq!(
            find_contraction(&target).unwrap(),
            Contraction::NoContraction
        );
    }

    #[test]
    fn contraction_json_round_trip() {
        let target = Element::idempotent(seq("11"));
        let Contraction::Witness(w) = find_contraction(&target).unwrap() else {
            panic!()
        };
        let j = contraction_to_json(&target, &w);
        let (t2, w2) = contraction_from_json(&j).unwrap();
        assert_eq!(t2, target);
        assert!(verify_contraction(&w2, &t2).unwrap());
    }

    #[test]
    fn truncation_by_unit_is_whole_ring() {
        let e = Element::unit(1, 1);
        let tr = TruncatedRing::new(e).unwrap();
        // slice (qdeg 0, coh 0) of R(1, 1): four idempotent-like terms?
        // blocks 12->12, 12->21, 21->12, 21->21 at qdeg 0 coh 0: the two
        // idempotents only (mixed crossings have qdeg 1)
        let basis = tr.slice_basis(0, 0).unwrap();
        assert_eq!(basis.dim(), 2);
        let basis = tr.slice_basis(1, 0).unwrap();
        assert_eq!(basis.dim(), 2);
    }

    #[test]
    fn leibniz_smoke() {
        // d(ab) = d(a) b + (-1)^{coh a} a d(b) for a pair of homogeneous
        // elements
        let s = seq("111");
        let a = crate::rewrite::sigma_w(3, &Perm::identity(3).mul_gen_left(0)).unwrap();
        let b = crate::rewrite::sigma_w(3, &Perm::identity(3).mul_gen_left(1)).unwrap();
        let ab = multiply(&a, &b).unwrap();
        let lhs = differential(&ab).unwrap();
        let mut rhs = multiply(&differential(&a).unwrap(), &b).unwrap();
        let coh_a = a.bidegree().unwrap().coh;
        let sign = if coh_a.rem_euclid(2) == 0 { 1 } else { -1 };
        rhs.add_assign(&multiply(&a, &differential(&b).unwrap()).unwrap().scaled(sign));
        assert_eq!(lhs, rhs);
        let _ = Strategy::Fast;
    }
}
