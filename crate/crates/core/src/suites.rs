//! Named check suites and their parameter context.

use std::sync::Arc;
use std::time::Instant;

use crate::coaction::{
    ansatz_check, candidate_t_system, comodule_check, derivation_check, derive_group_constraints,
};
use crate::diffcalc::{
    classical_limit_check, representative_check, twisted_leibniz_check, wz_confluence,
    wz_relations, WzCalculus,
};
use crate::error::{Error, Result};
use crate::freealg::{MonomialOrder, NCPoly};
use crate::linalg::{eigenspace_identification_with, involution_check, rhat_builtin, ybe_check, ScalarMatrix};
use crate::presentations::{builtin, Presentation};
use crate::quantumgroup::{
    det_commutation_derive, hopf_check, intertwiner_check, inverse_check, rtt_relations,
    subalgebra_check, QuantumGroup, Shape, Which,
};
use crate::report::{CheckItem, CheckReport};
use crate::rewrite::{build_rules, same_span, vanishes_under, RewriteSystem, Strategy};
use crate::scalar::{Param, Scalar};

pub const SUITES: &[&str] = &[
    "ybe",
    "involution",
    "eigenspaces",
    "confluence",
    "comodule",
    "derive",
    "ansatz",
    "rtt-7",
    "rtt-9",
    "inverse-h8",
    "inverse-h10",
    "det-comm",
    "hopf-h8",
    "hopf-h10",
    "subalgebra",
    "diffcalc",
    "classical",
];

/// Parameter mode for a run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Context {
    /// Keep `q` independent instead of setting `q = u^2`.
    pub generic_q: bool,
    /// User specialization, applied after `q = u^2`.
    pub bindings: Vec<(Param, Scalar)>,
}

impl Context {
    pub fn symbolic() -> Self {
        Context::default()
    }

    pub fn generic() -> Self {
        Context {
            generic_q: true,
            bindings: vec![],
        }
    }

    pub fn with_bindings(mut self, bindings: Vec<(Param, Scalar)>) -> Self {
        self.bindings = bindings;
        self
    }

    /// Bindings for objects that carry `q`.
    pub fn space_bindings(&self) -> Vec<(Param, Scalar)> {
        let mut b = Vec::new();
        if !self.generic_q {
            b.push((Param::Q, Scalar::upow(2)));
        }
        b.extend(self.bindings.iter().cloned());
        b
    }

    pub fn user(&self) -> &[(Param, Scalar)] {
        &self.bindings
    }

    fn stamp(&self, rep: &mut CheckReport) {
        if !self.generic_q {
            rep.bindings.insert("q".into(), "u^2".into());
        }
        for (p, v) in &self.bindings {
            rep.bindings.insert(p.name().into(), v.to_string());
        }
    }

    fn rhat(&self) -> Result<ScalarMatrix> {
        rhat_builtin().substitute(&self.bindings)
    }

    fn xspace(&self) -> Result<Presentation> {
        builtin("xspace_generic_q")?.substitute(&self.space_bindings())
    }

    fn builtin(&self, name: &str) -> Result<Presentation> {
        builtin(name)?.substitute(&self.bindings)
    }
}

/// Parses `u=2,s=3/4`.
pub fn parse_bindings(text: &str) -> Result<Vec<(Param, Scalar)>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Binding(part.to_string()))?;
        let p = Param::from_name(k.trim()).ok_or_else(|| Error::Binding(part.to_string()))?;
        let v = Scalar::parse(v.trim()).map_err(|_| Error::Binding(part.to_string()))?;
        out.push((p, v));
    }
    Ok(out)
}

pub fn run_suite(name: &str, ctx: &Context) -> Result<CheckReport> {
    let mut rep = match name {
        "ybe" => ybe_check(&ctx.rhat()?)?,
        "involution" => involution_check(&ctx.rhat()?)?,
        "eigenspaces" => eigenspaces(ctx)?,
        "confluence" => confluence(ctx)?,
        "comodule" => comodule(ctx)?,
        "derive" => derivation_check(ctx.user())?,
        "ansatz" => ansatz_check(ctx.user())?,
        "rtt-7" => rtt7(ctx)?,
        "rtt-9" => rtt9(ctx)?,
        "inverse-h8" => inverse_check(&QuantumGroup::specialized(Which::H8, ctx.user())?),
        "inverse-h10" => inverse_check(&QuantumGroup::specialized(Which::H10, ctx.user())?),
        "det-comm" => det_comm(ctx)?,
        "hopf-h8" => hopf_check(&QuantumGroup::specialized(Which::H8, ctx.user())?),
        "hopf-h10" => hopf_check(&QuantumGroup::specialized(Which::H10, ctx.user())?),
        "subalgebra" => subalgebra_check(
            &QuantumGroup::specialized(Which::H8, ctx.user())?,
            &QuantumGroup::specialized(Which::H10, ctx.user())?,
        ),
        "diffcalc" => diffcalc(ctx)?,
        "classical" => classical(ctx)?,
        "all" => {
            let mut all = CheckReport::new("all");
            for s in SUITES {
                match run_suite(s, ctx) {
                    Ok(r) => all.absorb(r),
                    Err(e) => all.push(CheckItem::error(*s, e.to_string())),
                }
            }
            all
        }
        _ => {
            return Err(Error::UnknownSuite {
                name: name.to_string(),
                valid: format!("{}, all", SUITES.join(", ")),
            })
        }
    };
    rep.suite = name.to_string();
    ctx.stamp(&mut rep);
    Ok(rep)
}

fn eigenspaces(ctx: &Context) -> Result<CheckReport> {
    eigenspace_identification_with(&ctx.rhat()?, &ctx.xspace()?, &ctx.builtin("xispace")?)
}

/// Residual-ideal item for a generic-`q` run.
fn q_ideal_item(label: &str, residuals: &[NCPoly]) -> Result<CheckItem> {
    let b = [(Param::Q, Scalar::upow(2))];
    let mut bad = 0;
    for r in residuals {
        if !vanishes_under(r, &b)? {
            bad += 1;
        }
    }
    Ok(CheckItem::from_residual(
        format!("{label}: every residual vanishes at q = u^2"),
        (bad > 0).then(|| format!("{bad} residuals survive")),
    ))
}

fn strategy_item(name: &str, sys: &RewriteSystem) -> CheckItem {
    let start = Instant::now();
    let diverging = sys
        .overlaps()
        .into_iter()
        .filter(|o| {
            let w = NCPoly::word(o.word.clone());
            sys.normal_form_with(&w, Strategy::Leftmost) != sys.normal_form_with(&w, Strategy::Rightmost)
        })
        .count();
    CheckItem::from_residual(
        format!("{name}: leftmost and rightmost reduction agree on overlap words"),
        (diverging > 0).then(|| format!("{diverging} overlap words diverge")),
    )
    .timed(start)
}

fn confluence(ctx: &Context) -> Result<CheckReport> {
    let mut rep = CheckReport::new("confluence");
    let mut systems: Vec<(&str, RewriteSystem)> = vec![
        ("xspace", ctx.xspace()?.system()?),
        ("xispace", ctx.builtin("xispace")?.system()?),
    ];
    if ctx.generic_q {
        systems.push(("candidate T", candidate_t_system(ctx.user())?));
    } else {
        systems.push(("TT7", ctx.builtin("TT7")?.system()?));
        systems.push(("TDinv", ctx.builtin("TDinv")?.system()?));
        systems.push(("tt9", rtt_relations(&ctx.rhat()?, Shape::Nine)?.system()?));
    }
    let wz = wz_relations(&ctx.rhat()?, &ctx.xspace()?, &ctx.builtin("xispace")?)?;
    systems.push(("wz", wz.system()?));
    let mut residuals = Vec::new();
    for (name, sys) in &systems {
        let d = sys.diamond_check(name);
        rep.absorb(d);
        if !ctx.generic_q {
            rep.push(strategy_item(name, sys));
        }
        residuals.extend(sys.ambiguities().into_iter().map(|a| a.residual));
    }
    if ctx.generic_q {
        rep.push(q_ideal_item("confluence", &residuals)?);
    }
    Ok(rep)
}

fn comodule(ctx: &Context) -> Result<CheckReport> {
    let mut rep = CheckReport::new("comodule");
    let tt7 = ctx.builtin("TT7")?.system()?;
    let x = ctx.xspace()?;
    let xi = ctx.builtin("xispace")?;
    for space in [&x, &xi] {
        rep.absorb(comodule_check(space, &tt7, Shape::Seven)?);
    }
    if ctx.generic_q {
        let mixed = crate::coaction::MixedAlgebra::new(tt7.table(), tt7.order(), &x.table, &x.order);
        let sys = mixed.system(Some(&tt7), Some(&x.system()?));
        let res = x
            .relations
            .iter()
            .map(|r| Ok(sys.normal_form(&mixed.coact(r, Shape::Seven)?)))
            .collect::<Result<Vec<_>>>()?;
        rep.push(q_ideal_item("comodule", &res)?);
    }
    Ok(rep)
}

fn rtt7(ctx: &Context) -> Result<CheckReport> {
    let mut rep = CheckReport::new("rtt-7");
    let r = ctx.rhat()?;
    let start = Instant::now();
    let rtt = rtt_relations(&r, Shape::Seven)?.system()?;
    let group = if ctx.generic_q {
        candidate_t_system(ctx.user())?
    } else {
        ctx.builtin("TT7")?.system()?
    };
    rep.push(
        CheckItem::from_residual(
            "RTT relations span the group relations",
            (!same_span(&rtt, &group)).then(|| format!("{} vs {} rules", rtt.len(), group.len())),
        )
        .timed(start),
    );
    let d = group.diamond_check("diamond");
    rep.absorb(d);
    rep.absorb(intertwiner_check(&r, &group, Shape::Seven));
    if ctx.generic_q {
        let res: Vec<NCPoly> = group.ambiguities().into_iter().map(|a| a.residual).collect();
        rep.push(q_ideal_item("rtt-7", &res)?);
    }
    Ok(rep)
}

fn rtt9(ctx: &Context) -> Result<CheckReport> {
    let mut rep = CheckReport::new("rtt-9");
    let r = ctx.rhat()?;
    let start = Instant::now();
    let p = rtt_relations(&r, Shape::Nine)?;
    let sys = p.system()?;
    let completed = sys.complete(3);
    rep.push(
        CheckItem::from_residual(
            "completion closes within word length 3",
            match &completed {
                Ok(c) if c.len() == sys.len() => None,
                Ok(c) => Some(format!("completion added {} rules", c.len() - sys.len())),
                Err(f) => Some(f.to_string()),
            },
        )
        .timed(start),
    );
    rep.note(format!("{} independent relations", p.relations.len()));
    rep.absorb(sys.diamond_check("diamond"));
    rep.absorb(intertwiner_check(&r, &sys, Shape::Nine));
    Ok(rep)
}

fn det_comm(ctx: &Context) -> Result<CheckReport> {
    let mut rep = CheckReport::new("det-comm");
    rep.absorb(det_commutation_derive(&QuantumGroup::specialized(Which::H8, ctx.user())?)?);
    rep.absorb(det_commutation_derive(&QuantumGroup::specialized(Which::H10, ctx.user())?)?);
    Ok(rep)
}

fn diffcalc(ctx: &Context) -> Result<CheckReport> {
    let mut rep = CheckReport::new("diffcalc");
    let x = ctx.xspace()?;
    let calc = WzCalculus::from_presentation(wz_relations(&ctx.rhat()?, &x, &ctx.builtin("xispace")?)?)?;
    let conf = wz_confluence(&calc);
    if ctx.generic_q {
        let res: Vec<NCPoly> = calc.system.ambiguities().into_iter().map(|a| a.residual).collect();
        rep.absorb(conf);
        rep.push(q_ideal_item("diffcalc", &res)?);
        return Ok(rep);
    }
    rep.absorb(conf);
    rep.absorb(representative_check(&calc, &x));
    rep.absorb(twisted_leibniz_check(&calc, 7, 40));
    rep.absorb(classical_limit_check(4)?);
    Ok(rep)
}

/// `u = 1` recovers the undeformed relations; the derived group relations
/// agree with the commutative pattern `T11 T22 - T12 T21 = T33^2`.
fn classical(ctx: &Context) -> Result<CheckReport> {
    let mut rep = CheckReport::new("classical");
    let s_bind: Vec<(Param, Scalar)> =
        ctx.user().iter().filter(|(p, _)| *p == Param::S).cloned().collect();
    let mut b = vec![(Param::Q, Scalar::upow(2)), (Param::U, Scalar::one())];
    b.extend(s_bind.iter().cloned());
    let x1 = builtin("xspace")?.substitute(&b)?;
    let classical = builtin("classical_R")?.substitute(&s_bind)?;
    let xs = x1.system()?;
    let cs = classical.system()?;
    let exact = xs.rules() == cs.rules();
    rep.push(CheckItem::from_residual(
        "xspace at u = 1 equals the classical relations",
        (!exact).then(|| format!("{} / {}", xs.render_rules(), cs.render_rules())),
    ));
    let derived = derive_group_constraints(&x1, Shape::Seven)?;
    let table = Arc::new(Shape::Seven.table(false));
    let order = MonomialOrder::table_order(table.len());
    let gens: Vec<NCPoly> = table.ids().map(NCPoly::gen).collect();
    let mut commutators = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            commutators.push(a.mul(b).sub(&b.mul(a)));
        }
    }
    let pattern = crate::freealg::parse_expr("T11 T22 - T12 T21 - T33^2", &table)?;
    let mut with_pattern = commutators.clone();
    with_pattern.push(pattern.clone());
    let classical_sys = build_rules(&with_pattern, table.clone(), order.clone())?;
    let bad: Vec<String> = derived
        .iter()
        .filter(|r| !classical_sys.normal_form(r).is_zero())
        .map(|r| r.render(&table, &order))
        .collect();
    rep.push(CheckItem::from_residual(
        "derived constraints hold under the commutative pattern",
        (!bad.is_empty()).then(|| bad.join("; ")),
    ));
    let mut with_derived = commutators;
    with_derived.extend(derived.iter().cloned());
    let derived_sys = build_rules(&with_derived, table.clone(), order.clone())?;
    let r = derived_sys.normal_form(&pattern);
    rep.push(CheckItem::from_residual(
        "commutative pattern follows from the derived constraints",
        (!r.is_zero()).then(|| r.render(&table, &order)),
    ));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binding_parser() {
        let b = parse_bindings("u=2, s=3/4").unwrap();
        assert_eq!(b[0], (Param::U, Scalar::from_int(2)));
        assert_eq!(b[1], (Param::S, Scalar::from_ratio(3, 4)));
        assert!(parse_bindings("z=1").is_err());
        assert!(parse_bindings("u").is_err());
    }

    #[test]
    fn unknown_suite_lists_names() {
        match run_suite("nope", &Context::symbolic()) {
            Err(Error::UnknownSuite { valid, .. }) => assert!(valid.contains("ybe")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classical_suite_passes() {
        let rep = run_suite("classical", &Context::symbolic()).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }
}
