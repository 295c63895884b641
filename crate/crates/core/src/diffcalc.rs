//! Covariant differential calculus on the x-space: one-forms `xi`,
//! derivatives `d`, and the derivative action on polynomials in `x`.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::freealg::{GenId, GenTable, NCPoly, Word};
use crate::linalg::{pair_index, ScalarMatrix};
use crate::presentations::{builtin, Presentation};
use crate::report::{CheckItem, CheckReport};
use crate::rewrite::RewriteSystem;
use crate::scalar::{Param, Scalar};

const NAMES: [&str; 9] = ["d1", "d2", "d3", "x1", "x2", "x3", "xi1", "xi2", "xi3"];

fn wz_table() -> GenTable {
    GenTable::new(&NAMES).expect("distinct names")
}

/// Relations of the calculus for the given `R` and x-space.
///
/// `R` must be involutive; its inverse in the `d xi` rule is `R` itself.
pub fn wz_relations(
    r: &ScalarMatrix,
    xspace: &Presentation,
    xispace: &Presentation,
) -> Result<Presentation> {
    if r.rows() != 9 || !r.is_square() {
        return Err(Error::Dimension(format!("R is {}x{}", r.rows(), r.cols())));
    }
    if r.mul(r)? != ScalarMatrix::identity(9) {
        return Err(Error::NotInvolutive);
    }
    let table = Arc::new(wz_table());
    let d = |i: usize| table.id(NAMES[i - 1]);
    let x = |i: usize| table.id(NAMES[i + 2]);
    let xi = |i: usize| table.id(NAMES[i + 5]);
    let lift = |p: &Presentation| -> Vec<NCPoly> {
        p.relations
            .iter()
            .map(|rel| rel.map_gens(|g| NCPoly::gen(table.id(p.table.name(g)))))
            .collect()
    };
    let mut rels = lift(xspace);
    rels.extend(lift(xispace));
    for k in 1..=3 {
        for l in 1..=3 {
            let mut xxi = NCPoly::monomial(Scalar::one(), &[x(k), xi(l)]);
            let mut dxi = NCPoly::monomial(Scalar::one(), &[d(k), xi(l)]);
            let mut dx = NCPoly::monomial(Scalar::one(), &[d(l), x(k)]);
            if k == l {
                dx.add_term(Word::unit(), -Scalar::one());
            }
            for m in 1..=3 {
                for n in 1..=3 {
                    let c = r.get(pair_index(k, l), pair_index(m, n));
                    if !c.is_zero() {
                        xxi.add_term(Word(vec![xi(m), x(n)]), -c);
                    }
                    let c = r.get(pair_index(l, m), pair_index(k, n));
                    if !c.is_zero() {
                        dxi.add_term(Word(vec![xi(n), d(m)]), -c);
                    }
                    let c = r.get(pair_index(k, m), pair_index(l, n));
                    if !c.is_zero() {
                        dx.add_term(Word(vec![x(n), d(m)]), -c);
                    }
                }
            }
            rels.extend([xxi, dxi, dx]);
        }
    }
    let mut params = xspace.params.clone();
    if !params.contains(&Param::U) {
        params.insert(0, Param::U);
    }
    Ok(Presentation::new("wz", table, params, rels))
}

/// The calculus at `q = u^2`.
pub fn wz_presentation(r: &ScalarMatrix) -> Result<Presentation> {
    let xspace = builtin("xspace")?.substitute(&[(Param::Q, Scalar::upow(2))])?;
    wz_relations(r, &xspace, &builtin("xispace")?)
}

#[derive(Clone, Debug)]
pub struct WzCalculus {
    pub presentation: Presentation,
    pub system: RewriteSystem,
}

impl WzCalculus {
    pub fn new(r: &ScalarMatrix) -> Result<Self> {
        Self::from_presentation(wz_presentation(r)?)
    }

    pub fn from_presentation(presentation: Presentation) -> Result<Self> {
        let system = presentation.system()?;
        Ok(WzCalculus {
            presentation,
            system,
        })
    }

    pub fn table(&self) -> &Arc<GenTable> {
        &self.presentation.table
    }

    pub fn d(&self, i: usize) -> GenId {
        self.table().id(NAMES[i - 1])
    }

    pub fn x(&self, i: usize) -> GenId {
        self.table().id(NAMES[i + 2])
    }

    fn is_derivative(&self, g: GenId) -> bool {
        (1..=3).any(|i| self.d(i) == g)
    }

    pub fn parse(&self, text: &str) -> Result<NCPoly> {
        self.presentation.parse_expr(text)
    }

    pub fn render(&self, p: &NCPoly) -> String {
        self.system.render(p)
    }

    /// `d_i p` with every term that still carries a derivative dropped.
    pub fn apply_derivative(&self, i: usize, p: &NCPoly) -> NCPoly {
        let nf = self.system.normal_form(&NCPoly::gen(self.d(i)).mul(p));
        let mut out = NCPoly::zero();
        for (w, c) in nf.terms() {
            if !w.letters().iter().any(|&g| self.is_derivative(g)) {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Pushes `d_i` through `p` and lets the surviving derivatives act on `q`.
    pub fn act_through(&self, i: usize, p: &NCPoly, q: &NCPoly) -> NCPoly {
        let pushed = self.system.normal_form(&NCPoly::gen(self.d(i)).mul(p));
        let mut acc = NCPoly::zero();
        for (w, c) in pushed.terms() {
            let letters = w.letters();
            match letters.last() {
                Some(&g) if self.is_derivative(g) => {
                    let m = (1..=3).find(|&m| self.d(m) == g).expect("derivative letter");
                    let head = NCPoly::term(c.clone(), Word(letters[..letters.len() - 1].to_vec()));
                    acc.add_scaled(&head.mul(&self.apply_derivative(m, q)), &Scalar::one());
                }
                _ => acc.add_scaled(&NCPoly::term(c.clone(), w.clone()).mul(q), &Scalar::one()),
            }
        }
        self.system.normal_form(&acc)
    }

    pub fn random_x_word(&self, rng: &mut impl Rng, max_len: usize) -> Word {
        let len = rng.gen_range(0..=max_len);
        let xs = [self.x(1), self.x(2), self.x(3)];
        Word((0..len).map(|_| *xs.choose(rng).expect("nonempty")).collect())
    }
}

pub fn wz_confluence(calc: &WzCalculus) -> CheckReport {
    let mut rep = calc.system.diamond_check("diffcalc");
    rep.note("no d d relations are given, so no overlap starts with two derivatives");
    rep
}

/// Two-route comparison of the derivative action on random products.
pub fn twisted_leibniz_check(calc: &WzCalculus, seed: u64, samples: usize) -> CheckReport {
    let mut rep = CheckReport::new("twisted-leibniz");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let p = calc.random_x_word(&mut rng, 3);
        let q = calc.random_x_word(&mut rng, 3);
        let i = rng.gen_range(1..=3);
        let start = Instant::now();
        let pq = calc.system.normal_form(&NCPoly::word(p.concat(&q)));
        let direct = calc.apply_derivative(i, &pq);
        let routed = calc.act_through(i, &NCPoly::word(p.clone()), &NCPoly::word(q.clone()));
        let diff = direct.sub(&routed);
        let table = calc.table();
        rep.push(
            CheckItem::from_residual(
                format!("d{i} on ({})*({})", p.render(table), q.render(table)),
                (!diff.is_zero()).then(|| calc.render(&diff)),
            )
            .timed(start),
        );
    }
    rep
}

/// Derivatives act on the quotient: every x-space relation is sent to 0.
pub fn representative_check(calc: &WzCalculus, xspace: &Presentation) -> CheckReport {
    let mut rep = CheckReport::new("representatives");
    for rel in &xspace.relations {
        let lifted = rel.map_gens(|g| NCPoly::gen(calc.table().id(xspace.table.name(g))));
        for i in 1..=3 {
            let mut acc = NCPoly::zero();
            for (w, c) in lifted.terms() {
                acc.add_scaled(&calc.apply_derivative(i, &NCPoly::word(w.clone())), c);
            }
            let r = calc.system.normal_form(&acc);
            rep.push(CheckItem::from_residual(
                format!("d{i} of {}", xspace.render(rel)),
                (!r.is_zero()).then(|| calc.render(&r)),
            ));
        }
    }
    rep
}

/// The ordinary partial derivative of a commuting monomial, as a normal form.
pub fn classical_partial(calc: &WzCalculus, i: usize, w: &Word) -> NCPoly {
    let target = calc.x(i);
    let count = w.letters().iter().filter(|&&g| g == target).count();
    if count == 0 {
        return NCPoly::zero();
    }
    let pos = w.letters().iter().position(|&g| g == target).expect("present");
    let mut rest = w.letters().to_vec();
    rest.remove(pos);
    calc.system
        .normal_form(&NCPoly::term(Scalar::from_int(count as i64), Word(rest)))
}

/// Every x-word up to `max_len`, shortest first.
pub fn x_words(calc: &WzCalculus, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    let mut layer = vec![Word::unit()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 1..=3 {
                next.push(w.concat(&Word::letter(calc.x(i))));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn classical_limit_check(max_len: usize) -> Result<CheckReport> {
    let calc = WzCalculus::from_presentation(
        builtin("wz")?.substitute(&[(Param::U, Scalar::one()), (Param::S, Scalar::zero())])?,
    )?;
    let mut rep = CheckReport::new("classical-derivatives");
    for w in x_words(&calc, max_len) {
        let nf = calc.system.normal_form(&NCPoly::word(w.clone()));
        for i in 1..=3 {
            let got = calc.apply_derivative(i, &nf);
            let want = classical_partial(&calc, i, &w);
            if got != want {
                rep.push(CheckItem::fail(
                    format!("d{i} {}", w.render(calc.table())),
                    format!("got {}, expected {}", calc.render(&got), calc.render(&want)),
                ));
            }
        }
    }
    if rep.items.is_empty() {
        rep.push(CheckItem::pass(format!(
            "partial derivatives agree on all x-words up to length {max_len}"
        )));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{flip_matrix, rhat_builtin};

    #[test]
    fn relation_count() {
        let p = wz_presentation(&rhat_builtin()).unwrap();
        assert_eq!(p.relations.len(), 3 + 6 + 27);
    }

    #[test]
    fn confluent_at_q_u2() {
        let calc = WzCalculus::new(&rhat_builtin()).unwrap();
        assert!(wz_confluence(&calc).passed());
    }

    #[test]
    fn derivative_values() {
        let calc = WzCalculus::new(&rhat_builtin()).unwrap();
        let x1 = calc.parse("x1").unwrap();
        assert_eq!(calc.apply_derivative(1, &x1), NCPoly::one());
        assert!(calc.apply_derivative(1, &NCPoly::one()).is_zero());
        let p = calc.parse("x1 x2").unwrap();
        let p = calc.system.normal_form(&p);
        let r = calc.apply_derivative(1, &p);
        assert_eq!(calc.render(&r), "x2");
    }

    #[test]
    fn flip_gives_undeformed_leibniz() {
        let xspace = builtin("xspace")
            .unwrap()
            .substitute(&[(Param::U, Scalar::one()), (Param::Q, Scalar::one()), (Param::S, Scalar::zero())])
            .unwrap();
        let xispace = builtin("xispace")
            .unwrap()
            .substitute(&[(Param::U, Scalar::one()), (Param::S, Scalar::zero())])
            .unwrap();
        let p = wz_relations(&flip_matrix(), &xspace, &xispace).unwrap();
        let calc = WzCalculus::from_presentation(p).unwrap();
        assert!(wz_confluence(&calc).passed());
        let r = calc.system.normal_form(&calc.parse("d2 x1").unwrap());
        assert_eq!(calc.render(&r), "x1*d2");
    }

    #[test]
    fn non_involutive_rejected() {
        let m = ScalarMatrix::identity(9).scale(&Scalar::from_int(2));
        let xs = builtin("xspace").unwrap();
        assert!(matches!(wz_relations(&m, &xs, &builtin("xispace").unwrap()), Err(Error::NotInvolutive)));
    }
}
