//! Property tests for the serialization surfaces.

use proptest::prelude::*;

use strandalg::diagram::{DiagramTerm, Element, Seq};
use strandalg::laurent::LaurentInt;

fn arb_laurent() -> impl Strategy<Value = LaurentInt> {
    proptest::collection::vec((-6i64..=6, -9i64..=9), 0..6)
        .prop_map(LaurentInt::from_coeffs)
}

fn arb_element() -> impl Strategy<Value = Element> {
    // weight (1, 2): sequences of one fermionic and two bosonic strands
    let term = (
        proptest::sample::select(vec!["122", "212", "221"]),
        proptest::collection::vec(0u8..=1, 0..3),
        proptest::collection::vec(0u32..=3, 2),
        -4i64..=4,
    );
    proptest::collection::vec(term, 0..5).prop_map(|terms| {
        let mut e = Element::zero((1, 2));
        for (seq_str, word, dots, coeff) in terms {
            let seq: Seq = seq_str.parse().unwrap();
            // interpret the raw letters as a crossing word applied to the
            // permutation one at a time, so the result is always valid
            let mut w = strandalg::Perm::identity(3);
            for &l in &word {
                w = w.mul_gen_left(l as usize);
            }
            e.add_term(DiagramTerm::new(seq, &w, dots), coeff);
        }
        e
    })
}

proptest! {
    #[test]
    fn laurent_display_round_trip(p in arb_laurent()) {
        let s = p.to_string();
        let back: LaurentInt = s.parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn element_json_round_trip(e in arb_element()) {
        let j = e.to_json();
        let back = Element::from_json(&j).unwrap();
        prop_assert_eq!(back, e);
    }
}
