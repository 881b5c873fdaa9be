//! The batch verification battery behind `strandalg verify`.
//!
//! Runs the same checks as the library's acceptance suite, parameterized
//! by size caps, and reports one deterministic line per check.

use serde::Serialize;

use strandalg::diagram::{enumerate_basis, DiagramTerm, Element, Seq, StrandKind, Token};
use strandalg::dg::{self, Contraction};
use strandalg::k0;
use strandalg::perm::{all_perms, epsilon_sign, Perm, ReducedWord};
use strandalg::pol::{self, MixedRule, MPoly, PolVector};
use strandalg::rewrite::{
    multiply, normal_form_with, relation5_constant, relation_instances, sigma_w, GeneratorWord,
    Strategy,
};

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryReport {
    pub schema: &'static str,
    pub n_cap: usize,
    pub m_cap: usize,
    pub qmax: i64,
    pub degmax: u32,
    pub lines: Vec<CheckLine>,
}

impl BatteryReport {
    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.ok).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap()
    }
}

pub fn run_battery(
    n_cap: usize,
    m_cap: usize,
    qmax: i64,
    degmax: u32,
) -> strandalg::Result<BatteryReport> {
    let mut lines = Vec::new();
    let mut push = |name: String, ok: bool| lines.push(CheckLine { name, ok });

    // fermionic dimension by closure
    for n in 1..=n_cap.max(1) {
        let seq = Seq::new(vec![StrandKind::Fermionic; n]);
        let mut count = 0usize;
        let mut all_monomial = true;
        for u in all_perms(n) {
            count += 1;
            for i in 0..n.saturating_sub(1) {
                let si = Element::from_term(
                    DiagramTerm::new(seq.clone(), &Perm::identity(n).mul_gen_left(i), vec![]),
                    1,
                );
                let du = Element::from_term(DiagramTerm::new(seq.clone(), &u, vec![]), 1);
                all_monomial &= multiply(&si, &du)?.len() <= 1;
            }
        }
        let expected: usize = (1..=n).product();
        push(
            format!("dimension of the fermionic ring on {n} strands is {expected}"),
            count == expected && all_monomial,
        );
    }

    // sign well-definedness over all reduced words
    for n in 2..=n_cap.min(4) {
        let seq = Seq::new(vec![StrandKind::Fermionic; n]);
        let mut ok = true;
        for w in all_perms(n) {
            let expected = sigma_w(n, &w)?;
            for word in w.all_reduced_words() {
                let tokens: Vec<Token> = word
                    .iter()
                    .rev()
                    .map(|&l| Token::Cross {
                        position: l as usize,
                    })
                    .collect();
                let gw = GeneratorWord::new(seq.clone(), tokens)?;
                let nf = normal_form_with(&gw, Strategy::MovesOnly)?;
                let eps = epsilon_sign(&ReducedWord::new(word, n).unwrap());
                ok &= nf.scaled(eps) == expected;
            }
        }
        push(format!("signed basis vectors independent of the reduced word (n = {n})"), ok);
    }

    // relation soundness on the polynomial representation
    let kappa = relation5_constant();
    for total in 0..=(n_cap + m_cap).min(4) {
        let mut ok = true;
        let mut count = 0usize;
        for n in 0..=total.min(n_cap) {
            let m = total - n;
            if m > m_cap {
                continue;
            }
            let monos = pol::monomials_up_to(m, degmax);
            let perms = all_perms(n);
            for source in Seq::enumerate(n, m) {
                for inst in relation_instances(&source, kappa) {
                    count += 1;
                    for w in &perms {
                        for e in &monos {
                            let v = PolVector::from_block(
                                source.clone(),
                                w.clone(),
                                MPoly::monomial(e.clone(), 1),
                            );
                            let mut acc = PolVector::zero();
                            for (c, tokens) in &inst.combo {
                                acc.add_assign(
                                    &pol::act_tokens(&source, tokens, &v, MixedRule::Standard)?
                                        .scaled(*c),
                                );
                            }
                            ok &= acc.is_zero();
                        }
                    }
                }
            }
        }
        if count > 0 {
            push(
                format!("{count} relation instances act as zero on the representation (n + m = {total})"),
                ok,
            );
        }
    }

    // dg structure
    {
        let mut ok = true;
        let mut count = 0usize;
        for total in 0..=(n_cap + m_cap).min(4) {
            for n in 0..=total.min(n_cap) {
                let m = total - n;
                if m > m_cap {
                    continue;
                }
                for source in Seq::enumerate(n, m) {
                    for target in Seq::enumerate(n, m) {
                        for t in enumerate_basis(&source, &target, qmax)? {
                            count += 1;
                            ok &= dg::differential(&dg::differential_term(&t)?)?.is_zero();
                        }
                    }
                }
            }
        }
        push(format!("d squared vanishes on {count} basis terms"), ok);
    }

    // contractions in high fermionic weight
    if n_cap >= 3 {
        for m in 0..=m_cap.min(2) {
            let unit = Element::unit(3, m);
            let ok = match dg::find_contraction(&unit)? {
                Contraction::Witness(w) => dg::verify_contraction(&w, &unit)?,
                Contraction::NoContraction => false,
            };
            push(format!("unit of weight (3, {m}) is a boundary"), ok);
        }
    }

    // divided-power idempotents
    for m in 0..=(m_cap as u32 + 2).min(5) {
        let e = k0::e_m(m)?;
        push(
            format!("divided-power idempotent on {m} strands squares to itself"),
            multiply(&e, &e)? == e,
        );
    }

    // decomposition multiplicities
    let rep = k0::verify_u_plus_relations(m_cap.max(2) as u32)?;
    push(
        "square-zero idempotents are contractible".to_string(),
        rep.square_zero.iter().all(|r| r.1),
    );
    push(
        "divided-power products decompose with Gaussian multiplicities".to_string(),
        rep.divided_power.iter().all(|r| r.4),
    );
    push(
        "mixed products decompose into the two canonical projectives".to_string(),
        rep.serre.iter().all(|r| r.4),
    );

    // weight (2, m) collapse
    for m in 1..=m_cap.min(3) as u32 {
        let q = 2 * m as i64 + 2;
        let series = k0::r1_homology_character(m, q)?;
        let oracle = k0::hilbert_sym_mod_product(m, q);
        let dx = dg::differential(&k0::r1_ideal_generator(m)?)?;
        let ok = series == oracle && dx == k0::r1_dot_product(m)?;
        push(
            format!("weight (2, {m}) corner homology matches the symmetric quotient"),
            ok,
        );
    }

    // rank bookkeeping
    {
        let mut ok = true;
        for n in 0..=n_cap.min(3) {
            for m in 0..=m_cap {
                let expected = match (n, m) {
                    (0, _) | (1, 0) => 1,
                    (1, _) => 2,
                    (2, 0) => 0,
                    (2, _) => 1,
                    _ => 0,
                };
                ok &= k0::k0_rank(n, m)? == expected;
            }
        }
        push("weight-space ranks match the integral form".to_string(), ok);
    }

    // characteristic 2
    for n in 1..=n_cap.min(4) {
        push(
            format!("mod-2 fermionic table equals the sign-free table (n = {n})"),
            k0::fermionic_table_matches_nilcoxeter_mod2(n)?,
        );
    }

    Ok(BatteryReport {
        schema: "strandalg.verify/1",
        n_cap,
        m_cap,
        qmax,
        degmax,
        lines,
    })
}
