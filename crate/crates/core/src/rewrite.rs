//! Word rewriting modulo a presentation: rule orientation by Gaussian
//! elimination, normal forms, overlap enumeration, diamond checks and
//! bounded completion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::freealg::{GenId, GenTable, MonomialOrder, NCPoly, OrderKey, Word};
use crate::report::{CheckItem, CheckReport};
use crate::scalar::{Param, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: NCPoly,
}

impl RewriteRule {
    /// The relation `lhs - rhs` this rule encodes.
    pub fn relation(&self) -> NCPoly {
        NCPoly::word(self.lhs.clone()).sub(&self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    table: Arc<GenTable>,
    order: MonomialOrder,
    rules: Vec<RewriteRule>,
    by_first: HashMap<GenId, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OverlapKind {
    /// The last `shared` letters of `rule_a` are the first of `rule_b`.
    Chain { shared: usize },
    /// `rule_b`'s lhs sits inside `rule_a`'s at `position`.
    Inclusion { position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub rule_a: usize,
    pub rule_b: usize,
    pub word: Word,
    pub kind: OverlapKind,
}

/// One overlap together with the difference of its two normal forms.
#[derive(Clone, Debug)]
pub struct Ambiguity {
    pub overlap: Overlap,
    pub residual: NCPoly,
}

#[derive(Clone, Debug)]
pub struct CompletionFailure {
    /// Overlaps longer than the bound that were left unresolved.
    pub pending: Vec<Word>,
    /// Nonzero residuals that could not be oriented.
    pub residuals: Vec<NCPoly>,
    pub rendered: Vec<String>,
}

impl fmt::Display for CompletionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "completion did not close")?;
        for r in &self.rendered {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

impl RewriteSystem {
    pub fn empty(table: Arc<GenTable>, order: MonomialOrder) -> Self {
        RewriteSystem {
            table,
            order,
            rules: Vec::new(),
            by_first: HashMap::new(),
        }
    }

    /// Assembles a system from rules that are already oriented and
    /// inter-reduced (e.g. disjoint copies of known systems).
    pub fn from_rules(table: Arc<GenTable>, order: MonomialOrder, rules: Vec<RewriteRule>) -> Self {
        let mut sys = RewriteSystem {
            table,
            order,
            rules,
            by_first: HashMap::new(),
        };
        sys.sort_rules();
        sys
    }

    pub fn table(&self) -> &Arc<GenTable> {
        &self.table
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn relations(&self) -> Vec<NCPoly> {
        self.rules.iter().map(RewriteRule::relation).collect()
    }

    pub fn rule_for(&self, lhs: &Word) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| &r.lhs == lhs)
    }

    fn reindex(&mut self) {
        self.by_first.clear();
        for (i, r) in self.rules.iter().enumerate() {
            self.by_first.entry(r.lhs.0[0]).or_default().push(i);
        }
    }

    /// Adds one relation, keeping the system inter-reduced.
    pub fn add_relation(&mut self, rel: &NCPoly) -> Result<()> {
        let mut pending = vec![rel.clone()];
        while let Some(r) = pending.pop() {
            let r = self.normal_form(&r);
            if r.is_zero() {
                continue;
            }
            let (lead, c) = r.leading_term(&self.order)?;
            if lead.is_empty() {
                return Err(Error::InconsistentPresentation {
                    constant: c.to_string(),
                });
            }
            let inv = c.inv()?;
            let mut rhs = r.scale(&inv).neg();
            rhs.add_term(lead.clone(), Scalar::one());
            let mut kept = Vec::with_capacity(self.rules.len() + 1);
            for old in self.rules.drain(..) {
                if old.lhs.contains(&lead) {
                    pending.push(old.relation());
                } else {
                    kept.push(old);
                }
            }
            kept.push(RewriteRule { lhs: lead, rhs });
            self.rules = kept;
            self.reindex();
            for i in 0..self.rules.len() {
                let nf = self.normal_form(&self.rules[i].rhs);
                self.rules[i].rhs = nf;
            }
        }
        self.sort_rules();
        Ok(())
    }

    fn sort_rules(&mut self) {
        let order = self.order.clone();
        self.rules.sort_by(|a, b| order.cmp(&b.lhs, &a.lhs));
        self.reindex();
    }

    /// Finds the reduction site `(position, rule)` for `w`.
    fn find_redex(&self, w: &Word, strategy: Strategy) -> Option<(usize, usize)> {
        let n = w.len();
        let check = |pos: usize| -> Option<usize> {
            let cands = self.by_first.get(&w.0[pos])?;
            let mut best: Option<usize> = None;
            for &ri in cands {
                let l = &self.rules[ri].lhs.0;
                if pos + l.len() <= n && w.0[pos..pos + l.len()] == l[..] {
                    match best {
                        Some(b) if self.rules[b].lhs.len() >= l.len() => {}
                        _ => best = Some(ri),
                    }
                }
            }
            best
        };
        match strategy {
            Strategy::Leftmost => (0..n).find_map(|p| check(p).map(|r| (p, r))),
            Strategy::Rightmost => (0..n).rev().find_map(|p| check(p).map(|r| (p, r))),
        }
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.find_redex(w, Strategy::Leftmost).is_none()
    }

    pub fn normal_form(&self, p: &NCPoly) -> NCPoly {
        self.normal_form_with(p, Strategy::Leftmost)
    }

    pub fn normal_form_with(&self, p: &NCPoly, strategy: Strategy) -> NCPoly {
        if self.rules.is_empty() {
            return p.clone();
        }
        let mut work: BTreeMap<OrderKey, (Word, Scalar)> = BTreeMap::new();
        let push = |work: &mut BTreeMap<OrderKey, (Word, Scalar)>, w: Word, c: Scalar| {
            let k = self.order.key(&w);
            match work.get_mut(&k) {
                Some(slot) => slot.1 = &slot.1 + &c,
                None => {
                    work.insert(k, (w, c));
                }
            }
        };
        for (w, c) in p.terms() {
            push(&mut work, w.clone(), c.clone());
        }
        let mut out = NCPoly::zero();
        while let Some((_, (w, c))) = work.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.find_redex(&w, strategy) {
                None => out.add_term(w, c),
                Some((pos, ri)) => {
                    let rule = &self.rules[ri];
                    let left = w.slice(0, pos);
                    let right = w.slice(pos + rule.lhs.len(), w.len());
                    for (rw, rc) in rule.rhs.terms() {
                        let nw = left.concat(&rw.concat(&right));
                        push(&mut work, nw, rc * &c);
                    }
                }
            }
        }
        out
    }

    pub fn overlaps(&self) -> Vec<Overlap> {
        let mut out = Vec::new();
        for (ia, a) in self.rules.iter().enumerate() {
            for (ib, b) in self.rules.iter().enumerate() {
                let (la, lb) = (a.lhs.len(), b.lhs.len());
                for k in 1..la.min(lb) {
                    if a.lhs.0[la - k..] == b.lhs.0[..k] {
                        out.push(Overlap {
                            rule_a: ia,
                            rule_b: ib,
                            word: a.lhs.concat(&b.lhs.slice(k, lb)),
                            kind: OverlapKind::Chain { shared: k },
                        });
                    }
                }
                if ia != ib && lb <= la {
                    for pos in 0..=la - lb {
                        if a.lhs.0[pos..pos + lb] == b.lhs.0[..] {
                            out.push(Overlap {
                                rule_a: ia,
                                rule_b: ib,
                                word: a.lhs.clone(),
                                kind: OverlapKind::Inclusion { position: pos },
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// The two one-step reducts of an overlap word.
    pub fn overlap_branches(&self, o: &Overlap) -> (NCPoly, NCPoly) {
        let a = &self.rules[o.rule_a];
        let b = &self.rules[o.rule_b];
        match o.kind {
            OverlapKind::Chain { shared } => {
                let tail = b.lhs.slice(shared, b.lhs.len());
                let head = a.lhs.slice(0, a.lhs.len() - shared);
                (
                    a.rhs.sandwich(&Word::unit(), &tail),
                    b.rhs.sandwich(&head, &Word::unit()),
                )
            }
            OverlapKind::Inclusion { position } => {
                let head = a.lhs.slice(0, position);
                let tail = a.lhs.slice(position + b.lhs.len(), a.lhs.len());
                (a.rhs.clone(), b.rhs.sandwich(&head, &tail))
            }
        }
    }

    pub fn resolve(&self, o: &Overlap) -> NCPoly {
        let (x, y) = self.overlap_branches(o);
        self.normal_form(&x).sub(&self.normal_form(&y))
    }

    /// All overlaps with their residuals, in enumeration order.
    pub fn ambiguities(&self) -> Vec<Ambiguity> {
        self.overlaps()
            .into_iter()
            .map(|o| {
                let residual = self.resolve(&o);
                Ambiguity { overlap: o, residual }
            })
            .collect()
    }

    pub fn is_confluent(&self) -> bool {
        self.overlaps().iter().all(|o| self.resolve(o).is_zero())
    }

    pub fn render(&self, p: &NCPoly) -> String {
        p.render(&self.table, &self.order)
    }

    pub fn render_rule(&self, r: &RewriteRule) -> String {
        format!(
            "{} -> {}",
            r.lhs.render(&self.table),
            self.render(&r.rhs)
        )
    }

    pub fn render_rules(&self) -> String {
        let v: Vec<String> = self.rules.iter().map(|r| self.render_rule(r)).collect();
        v.join("; ")
    }

    pub fn overlap_label(&self, o: &Overlap) -> String {
        format!(
            "overlap {} [{} | {}]",
            o.word.render(&self.table),
            self.rules[o.rule_a].lhs.render(&self.table),
            self.rules[o.rule_b].lhs.render(&self.table)
        )
    }

    pub fn diamond_check(&self, suite: &str) -> CheckReport {
        let mut report = CheckReport::new(suite);
        for o in self.overlaps() {
            let start = Instant::now();
            let r = self.resolve(&o);
            let residual = if r.is_zero() {
                None
            } else {
                Some(self.render(&r))
            };
            report.push(CheckItem::from_residual(self.overlap_label(&o), residual).timed(start));
        }
        report
    }

    /// Rebuilds the same relation span under another precedence.
    pub fn reoriented(&self, order: MonomialOrder) -> Result<RewriteSystem> {
        build_rules(&self.relations(), self.table.clone(), order)
    }

    pub fn substitute(&self, bindings: &[(Param, Scalar)]) -> Result<RewriteSystem> {
        let rels = self
            .relations()
            .iter()
            .map(|r| r.substitute(bindings))
            .collect::<Result<Vec<_>>>()?;
        build_rules(&rels, self.table.clone(), self.order.clone())
    }

    /// Bounded completion: orients nonzero residuals of overlaps no longer
    /// than `max_word_len` until none remain.
    pub fn complete(
        &self,
        max_word_len: usize,
    ) -> std::result::Result<RewriteSystem, CompletionFailure> {
        let mut sys = self.clone();
        loop {
            let mut pending = Vec::new();
            let mut new_rels = Vec::new();
            for o in sys.overlaps() {
                if o.word.len() > max_word_len {
                    pending.push(o.word.clone());
                    continue;
                }
                let r = sys.resolve(&o);
                if !r.is_zero() {
                    new_rels.push(r);
                }
            }
            if new_rels.is_empty() {
                if pending.is_empty() {
                    return Ok(sys);
                }
                let rendered = pending
                    .iter()
                    .map(|w| format!("pending overlap {}", w.render(&sys.table)))
                    .collect();
                return Err(CompletionFailure {
                    pending,
                    residuals: Vec::new(),
                    rendered,
                });
            }
            for r in &new_rels {
                if let Err(e) = sys.add_relation(r) {
                    let rendered = vec![format!("{}: {}", sys.render(r), e)];
                    return Err(CompletionFailure {
                        pending,
                        residuals: vec![r.clone()],
                        rendered,
                    });
                }
            }
        }
    }
}

pub fn build_rules(
    relations: &[NCPoly],
    table: Arc<GenTable>,
    order: MonomialOrder,
) -> Result<RewriteSystem> {
    let mut sys = RewriteSystem::empty(table, order);
    for r in relations {
        sys.add_relation(r)?;
    }
    Ok(sys)
}

/// Mutual reduction test: every relation of each side reduces to zero modulo
/// the other.
pub fn same_span(a: &RewriteSystem, b: &RewriteSystem) -> bool {
    a.relations().iter().all(|r| b.normal_form(r).is_zero())
        && b.relations().iter().all(|r| a.normal_form(r).is_zero())
}

/// True when every coefficient of `p` vanishes after substituting `binding`,
/// i.e. `p` lies in the ideal generated by `param - value` (for the shapes
/// arising here, where coefficients are rational in the parameters).
pub fn vanishes_under(p: &NCPoly, bindings: &[(Param, Scalar)]) -> Result<bool> {
    Ok(p.substitute(bindings)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse_expr;

    fn xsys(q_u2: bool) -> RewriteSystem {
        let t = Arc::new(GenTable::new(&["x1", "x2", "x3"]).unwrap());
        let q = if q_u2 { "u^2" } else { "q" };
        let rels: Vec<NCPoly> = [
            format!("x1 x2 - {q} x2 x1 - s x3 x3"),
            "x1 x3 - u x3 x1".to_string(),
            "x2 x3 - u^(-1) x3 x2".to_string(),
        ]
        .iter()
        .map(|s| parse_expr(s, &t).unwrap())
        .collect();
        build_rules(&rels, t, MonomialOrder::table_order(3)).unwrap()
    }

    #[test]
    fn three_rules_for_xspace() {
        let sys = xsys(false);
        assert_eq!(sys.len(), 3);
        let t = sys.table().clone();
        let nf = sys.normal_form(&parse_expr("x1 x2", &t).unwrap());
        assert_eq!(sys.render(&nf), "q*x2*x1 + s*x3*x3");
    }

    #[test]
    fn empty_system_is_identity() {
        let t = Arc::new(GenTable::new(&["a"]).unwrap());
        let sys = build_rules(&[], t.clone(), MonomialOrder::table_order(1)).unwrap();
        let p = parse_expr("a a + 2", &t).unwrap();
        assert_eq!(sys.normal_form(&p), p);
    }

    #[test]
    fn xspace_overlap_words() {
        let sys = xsys(true);
        let words: Vec<String> = sys
            .overlaps()
            .iter()
            .map(|o| o.word.render(sys.table()))
            .collect();
        assert_eq!(words, vec!["x1*x2*x3"]);
        assert!(sys.diamond_check("x").passed());
    }

    #[test]
    fn xspace_alone_is_confluent_for_any_q() {
        assert!(xsys(false).is_confluent());
    }

    #[test]
    fn residual_ideal_membership() {
        let t = Arc::new(GenTable::new(&["x1"]).unwrap());
        let p = parse_expr("(q - u^2) x1", &t).unwrap();
        assert!(vanishes_under(&p, &[(Param::Q, Scalar::upow(2))]).unwrap());
        assert!(!vanishes_under(&p, &[(Param::Q, Scalar::u())]).unwrap());
    }

    #[test]
    fn inconsistent_constant_is_an_error() {
        let t = Arc::new(GenTable::new(&["a"]).unwrap());
        let rels = vec![parse_expr("a - 1", &t).unwrap(), parse_expr("a - 2", &t).unwrap()];
        let err = build_rules(&rels, t, MonomialOrder::table_order(1)).unwrap_err();
        assert!(matches!(err, Error::InconsistentPresentation { .. }));
    }

    #[test]
    fn redundant_relations_are_eliminated() {
        let t = Arc::new(GenTable::new(&["a", "b"]).unwrap());
        let rels = vec![
            parse_expr("a b - u b a", &t).unwrap(),
            parse_expr("2 a b - 2 u b a", &t).unwrap(),
        ];
        let sys = build_rules(&rels, t, MonomialOrder::table_order(2)).unwrap();
        assert_eq!(sys.len(), 1);
    }

    #[test]
    fn completion_bound_exhaustion_is_reported() {
        let t = Arc::new(GenTable::new(&["x"]).unwrap());
        let rels = vec![parse_expr("x x x - x", &t).unwrap()];
        let sys = build_rules(&rels, t, MonomialOrder::table_order(1)).unwrap();
        let fail = sys.complete(3).unwrap_err();
        assert!(!fail.pending.is_empty());
        assert!(sys.complete(5).is_ok());
    }

    #[test]
    fn completion_is_fixpoint_on_confluent_input() {
        let sys = xsys(true);
        let done = sys.complete(3).unwrap();
        assert_eq!(done.rules(), sys.rules());
    }
}
