//! Free differential calculus and the boundary matrices of the chain
//! complex of the universal cover of a presentation 2-complex.
//!
//! Derivatives are computed over the integral group ring of the ambient
//! free group; the only quotients ever applied are the augmentation (to
//! integer matrices) and, on request, the coordinatewise projection onto
//! an abelian model.

use num_bigint::BigInt;
use thiserror::Error;

use crate::group_ring::{GroupElem, GroupModel, GroupRingElement, GroupRingMatrix};
use crate::scalar::Int;
use crate::smith::IntMat;
use crate::words::{Presentation, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FoxError {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}

/// The Fox derivative of a reduced word with respect to one generator,
/// as an element of the integral group ring of the free group of the
/// given rank.
///
/// Characterized by d(uv) = du + u dv, d(x_i)/dx_i = 1, and
/// d(x_i^-1)/dx_i = -x_i^-1. A single left-to-right sweep accumulates one
/// term per occurrence of the generator, with the running prefix of the
/// word as the group element; prefixes of a reduced word are already
/// reduced, so no re-reduction happens along the way.
pub fn fox_derivative(
    word: &Word,
    gen: usize,
    rank: usize,
) -> Result<GroupRingElement<Int>, FoxError> {
    if gen >= rank {
        return Err(FoxError::IndexOutOfRange { index: gen, rank });
    }
    let model = GroupModel::free(rank);
    let mut terms: Vec<(GroupElem, Int)> = Vec::new();
    let letters = word.letters();
    for (pos, letter) in letters.iter().enumerate() {
        if letter.gen != gen {
            continue;
        }
        if letter.inverse {
            // -(prefix including this letter)
            let prefix = Word::reduce(letters[..=pos].iter().copied());
            terms.push((GroupElem::Word(prefix), BigInt::from(-1)));
        } else {
            let prefix = Word::reduce(letters[..pos].iter().copied());
            terms.push((GroupElem::Word(prefix), BigInt::from(1)));
        }
    }
    Ok(GroupRingElement::from_terms(model, terms).expect("prefixes are valid model elements"))
}

/// The matrix of Fox derivatives: entry (i, j) = d(r_j)/d(x_i), shape
/// #generators x #relators. Columns of empty relators are zero.
pub fn jacobian(p: &Presentation) -> GroupRingMatrix<Int> {
    let rank = p.gen_count();
    let model = GroupModel::free(rank);
    let mut m = GroupRingMatrix::zero(model, rank, p.relator_count());
    for (j, rel) in p.relators().iter().enumerate() {
        for i in 0..rank {
            let d = fox_derivative(rel, i, rank).expect("index in range by construction");
            m.set(i, j, d);
        }
    }
    m
}

/// The augmentation of the Fox matrix: the integer matrix whose (i, j)
/// entry is the exponent sum of generator i in relator j.
pub fn augmented_jacobian(p: &Presentation) -> IntMat {
    jacobian(p).augmented()
}

/// True iff sum_i d(r)/d(x_i) * (x_i - 1) = r - 1 holds in the free group
/// ring for every column of the given matrix. This is the algebraic
/// witness that the matrix really is the boundary map of the 2-cells.
pub fn jacobian_satisfies_identity(p: &Presentation, d2: &GroupRingMatrix<Int>) -> bool {
    let rank = p.gen_count();
    if d2.rows() != rank || d2.cols() != p.relator_count() {
        return false;
    }
    let model = GroupModel::free(rank);
    let one = GroupRingElement::<Int>::one(model.clone());
    for (j, rel) in p.relators().iter().enumerate() {
        let mut lhs = GroupRingElement::<Int>::zero(model.clone());
        for i in 0..rank {
            let xi = GroupRingElement::group_elem(model.clone(), model.generator(i));
            let factor = xi.checked_sub(&one).expect("same model");
            lhs = lhs + &(d2.get(i, j).clone() * factor);
        }
        let rhs = GroupRingElement::group_elem(model.clone(), GroupElem::Word(rel.clone()))
            .checked_sub(&one)
            .expect("same model");
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Checks the fundamental identity for the presentation's own Fox matrix.
pub fn fundamental_identity_check(p: &Presentation) -> bool {
    jacobian_satisfies_identity(p, &jacobian(p))
}

/// Boundary data of the cellular chain complex of the universal cover:
/// d2 (one column per 2-cell) and d1 (the row of x_i - 1).
#[derive(Debug, Clone)]
pub struct ChainComplexModel {
    pub presentation: Presentation,
    pub d2: GroupRingMatrix<Int>,
    pub d1: GroupRingMatrix<Int>,
}

impl ChainComplexModel {
    pub fn new(presentation: Presentation) -> Self {
        let rank = presentation.gen_count();
        let model = GroupModel::free(rank);
        let d2 = jacobian(&presentation);
        let one = GroupRingElement::<Int>::one(model.clone());
        let mut d1 = GroupRingMatrix::zero(model.clone(), 1, rank);
        for i in 0..rank {
            let xi = GroupRingElement::group_elem(model.clone(), model.generator(i));
            d1.set(0, i, xi.checked_sub(&one).expect("same model"));
        }
        debug_assert!(jacobian_satisfies_identity(&presentation, &d2));
        ChainComplexModel {
            presentation,
            d2,
            d1,
        }
    }

    /// d1 * d2 as a group-ring row; its j-th entry equals r_j - 1, which
    /// augments to zero.
    pub fn composite(&self) -> GroupRingMatrix<Int> {
        self.d1.checked_mul(&self.d2).expect("shapes agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ring::free_word_elem;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    fn word(p: &Presentation, text: &str) -> Word {
        crate::words::WordParser::new(p.generators())
            .parse_word(text)
            .unwrap()
    }

    #[test]
    fn defining_rules() {
        let p = pres("gens: a b\n");
        let a = word(&p, "a");
        // da/da = 1
        let d = fox_derivative(&a, 0, 2).unwrap();
        assert_eq!(d, GroupRingElement::one(GroupModel::free(2)));
        // da^-1/da = -a^-1
        let a_inv = word(&p, "A");
        let d = fox_derivative(&a_inv, 0, 2).unwrap();
        let expected = free_word_elem::<Int>(&GroupModel::free(2), &[(0, -1)]).negate();
        assert_eq!(d, expected);
        // db/da = 0
        let b = word(&p, "b");
        assert!(fox_derivative(&b, 0, 2).unwrap().is_zero());
        // derivative of the empty word is 0
        assert!(fox_derivative(&Word::empty(), 0, 2).unwrap().is_zero());
    }

    #[test]
    fn index_out_of_range_is_an_error() {
        assert_eq!(
            fox_derivative(&Word::empty(), 2, 2),
            Err(FoxError::IndexOutOfRange { index: 2, rank: 2 })
        );
    }

    #[test]
    fn commutator_derivatives() {
        let p = pres("gens: a b\nrel: a b A B\n");
        let r = &p.relators()[0];
        let model = GroupModel::free(2);
        // d/da = 1 - aba^-1
        let da = fox_derivative(r, 0, 2).unwrap();
        let expected_a = GroupRingElement::<Int>::one(model.clone())
            - free_word_elem::<Int>(&model, &[(0, 1), (1, 1), (0, -1)]);
        assert_eq!(da, expected_a);
        // d/db = a - aba^-1b^-1
        let db = fox_derivative(r, 1, 2).unwrap();
        let expected_b = free_word_elem::<Int>(&model, &[(0, 1)])
            - free_word_elem::<Int>(&model, &[(0, 1), (1, 1), (0, -1), (1, -1)]);
        assert_eq!(db, expected_b);
    }

    #[test]
    fn power_relator_column() {
        // d(a^k)/da = 1 + a + ... + a^(k-1)
        let p = pres("gens: a\nrel: a^4\n");
        let j = jacobian(&p);
        let model = GroupModel::free(1);
        let mut expected = GroupRingElement::<Int>::zero(model.clone());
        for k in 0..4i64 {
            let mut spec = Vec::new();
            for _ in 0..k {
                spec.push((0usize, 1i64));
            }
            expected = expected + &free_word_elem::<Int>(&model, &spec);
        }
        assert_eq!(j.get(0, 0), &expected);
        assert!(fundamental_identity_check(&p));
    }

    #[test]
    fn empty_relator_gives_zero_column() {
        let p = pres("gens: a\nrel:\n");
        let j = jacobian(&p);
        assert!(j.get(0, 0).is_zero());
        assert!(fundamental_identity_check(&p));
    }

    #[test]
    fn augmented_jacobian_examples() {
        let torus = pres("gens: a b\nrel: a b A B\n");
        assert_eq!(
            augmented_jacobian(&torus),
            IntMat::from_i64_rows(&[&[0], &[0]])
        );
        let klein = pres("gens: a b\nrel: a b a B\n");
        assert_eq!(
            augmented_jacobian(&klein),
            IntMat::from_i64_rows(&[&[2], &[0]])
        );
    }

    #[test]
    fn corrupted_jacobian_fails_the_identity() {
        let p = pres("gens: a b\nrel: a b A B\n");
        let mut bad = jacobian(&p);
        let model = GroupModel::free(2);
        bad.set(0, 0, GroupRingElement::one(model));
        assert!(!jacobian_satisfies_identity(&p, &bad));
    }

    #[test]
    fn single_letter_relator_identity() {
        // (1)(a - 1) = a - 1
        let p = pres("gens: a\nrel: a\n");
        assert!(fundamental_identity_check(&p));
        let cc = ChainComplexModel::new(p);
        let composite = cc.composite();
        let model = GroupModel::free(1);
        let expected = free_word_elem::<Int>(&model, &[(0, 1)])
            - GroupRingElement::one(model.clone());
        assert_eq!(composite.get(0, 0), &expected);
        assert!(composite.get(0, 0).augment().is_zero());
    }

    fn arb_reduced_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..rank, prop::bool::ANY), 0..=max_len).prop_map(|ls| {
            Word::reduce(
                ls.into_iter()
                    .map(|(g, inv)| crate::words::Letter::new(g, inv)),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn fundamental_identity_random_words(w in arb_reduced_word(3, 12)) {
            let p = Presentation::new(
                vec!["a".into(), "b".into(), "c".into()],
                vec![w],
            ).unwrap();
            prop_assert!(fundamental_identity_check(&p));
        }

        #[test]
        fn augmentation_counts_exponents(w in arb_reduced_word(3, 12)) {
            for i in 0..3 {
                let d = fox_derivative(&w, i, 3).unwrap();
                prop_assert_eq!(d.augment(), BigInt::from(w.exponent_sum(i)));
            }
        }

        #[test]
        fn product_rule(
            u in arb_reduced_word(2, 8),
            v in arb_reduced_word(2, 8),
        ) {
            let model = GroupModel::free(2);
            let uv = u.concat(&v);
            for i in 0..2 {
                let lhs = fox_derivative(&uv, i, 2).unwrap();
                let u_elem = GroupRingElement::<Int>::group_elem(
                    model.clone(),
                    GroupElem::Word(u.clone()),
                );
                let rhs = fox_derivative(&u, i, 2).unwrap()
                    + &(u_elem * fox_derivative(&v, i, 2).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
