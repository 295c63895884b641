//! Finitely presented algebras: the built-in catalogue, the text DSL and the
//! `d°` grading.
//!
//! DSL, one statement per line:
//!
//! ```text
//! # comment
//! algebra xspace
//! params u s q
//! generators x1 > x2 > x3
//! degree x1 = 1
//! rel x1 x2 = q x2 x1 + s x3^2
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result, SourceSpan};
use crate::freealg::{parse_expr_at, GenId, GenTable, MonomialOrder, NCPoly, Word};
use crate::rewrite::{build_rules, RewriteSystem};
use crate::scalar::{Param, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub name: String,
    pub table: Arc<GenTable>,
    pub order: MonomialOrder,
    pub params: Vec<Param>,
    pub relations: Vec<NCPoly>,
    pub degree: Option<BTreeMap<GenId, i64>>,
}

pub const BUILTIN_NAMES: &[&str] = &[
    "classical_R",
    "xspace",
    "xspace_generic_q",
    "xispace",
    "TT7",
    "TDinv",
    "tt9",
    "tdinv",
    "tt7_listed",
    "ansatz_xi",
    "ansatz_xi_variant",
    "wz",
];

const CLASSICAL_R: &str = "\
algebra classical_R
params s
generators x1 > x2 > x3
rel x1 x2 - x2 x1 - s x3^2 = 0
rel x1 x3 = x3 x1
rel x2 x3 = x3 x2
";

const XSPACE: &str = "\
algebra xspace
params u s q
generators x1 > x2 > x3
rel x1 x2 - q x2 x1 - s x3^2 = 0
rel x1 x3 - u x3 x1 = 0
rel x2 x3 - u^(-1) x3 x2 = 0
";

const XISPACE: &str = "\
algebra xispace
params u
generators xi1 > xi2 > xi3
rel xi1^2 = 0
rel xi2^2 = 0
rel xi3^2 = 0
rel xi2 xi1 = -u^(-2) xi1 xi2
rel xi1 xi3 = -u xi3 xi1
rel xi2 xi3 = -u^(-1) xi3 xi2
";

const T7_HEADER: &str = "\
params u s
generators T11 > T12 > T13 > T21 > T22 > T23 > T33";

const T7_DEGREES: &str = "\
degree T11 = 0
degree T12 = 2
degree T13 = 1
degree T21 = -2
degree T22 = 0
degree T23 = -1
degree T33 = 0
";

const TT7_RELS: &str = "\
rel T11 T12 = u^(-2) T12 T11
rel T11 T13 = u^(-1) T13 T11
rel T11 T22 = T22 T11
rel T11 T21 = u^2 T21 T11
rel T11 T23 = u T23 T11
rel T11 T33 = T33 T11
rel T12 T13 = u T13 T12
rel T12 T22 = u^2 T22 T12
rel T12 T21 = u^4 T21 T12
rel T12 T23 = u^3 T23 T12
rel T12 T33 = u^2 T33 T12
rel T13 T22 = u T22 T13
rel T13 T21 = u^3 T21 T13
rel T13 T33 = u T33 T13
rel T22 T21 = u^2 T21 T22
rel T22 T23 = u T23 T22
rel T22 T33 = T33 T22
rel T21 T23 = u^(-1) T23 T21
rel T21 T33 = u^(-2) T33 T21
rel T23 T33 = u^(-1) T33 T23
rel T13 T23 - u^2 T23 T13 + s (T11 T22 - u^2 T21 T12 - T33^2) = 0
";

const TDINV_RELS: &str = "\
rel Dinv T11 = T11 Dinv
rel u^(-6) Dinv T12 = T12 Dinv
rel u^(-3) Dinv T13 = T13 Dinv
rel Dinv T22 = T22 Dinv
rel Dinv T21 = u^(-6) T21 Dinv
rel Dinv T23 = u^(-3) T23 Dinv
rel Dinv T33 = T33 Dinv
";

const TT7_LISTED_RELS: &str = "\
rel T11 T33 = T33 T11
rel T21 T33 = u^(-2) T33 T21
rel T12 T33 = u^2 T33 T12
rel T22 T33 = T33 T22
rel T13 T33 = u T33 T13
rel T23 T33 = u^(-1) T33 T23
rel T11 T21 = q T21 T11
rel T12 T22 = q T22 T12
rel u T11 T23 - q T23 T11 = q u T21 T13 - T13 T21
rel T12 T23 - q u T23 T12 = q T22 T13 - u T13 T22
rel T11 T22 - T22 T11 = q T21 T12 - q^(-1) T12 T21
rel (T11 T22 - q T21 T12) s = s T33^2 - T13 T23 + q T23 T13
";

const ANSATZ_XI: &str = "\
algebra ansatz_xi
params k c21 lam lam12 mu mu12
generators xi1 > xi2 > xi3
rel xi1^2 = 0
rel xi2^2 = 0
rel xi3^2 = k xi1 xi2
rel xi2 xi1 = c21 xi1 xi2
rel xi3 xi1 = lam xi1 xi3 + lam12 xi1 xi2
rel xi3 xi2 = mu xi2 xi3 + mu12 xi1 xi2
";

const ANSATZ_XI_VARIANT: &str = "\
algebra ansatz_xi_variant
params c21 lam lam12 mu mu12
generators xi1 > xi2 > xi3
rel xi1^2 = 0
rel xi2^2 = 0
rel xi1 xi2 = 0
rel xi2 xi1 = c21 xi3^2
rel xi3 xi1 = lam xi1 xi3 + lam12 xi3^2
rel xi3 xi2 = mu xi2 xi3 + mu12 xi3^2
";

fn tt7_text() -> String {
    format!("algebra TT7\n{T7_HEADER}\n{T7_DEGREES}{TT7_RELS}")
}

fn tdinv_text() -> String {
    format!(
        "algebra TDinv\nparams u s\ngenerators T11 > T12 > T13 > T21 > T22 > T23 > T33 > Dinv\n{T7_DEGREES}degree Dinv = 0\n{TT7_RELS}{TDINV_RELS}"
    )
}

fn tt7_listed_text() -> String {
    format!(
        "algebra tt7_listed\nparams u s q\ngenerators T11 > T12 > T13 > T21 > T22 > T23 > T33\n{T7_DEGREES}{TT7_LISTED_RELS}"
    )
}

/// Built-in presentation by name.
pub fn builtin(name: &str) -> Result<Presentation> {
    let text = match name {
        "classical_R" => CLASSICAL_R.to_string(),
        "xspace" => XSPACE.to_string(),
        "xspace_generic_q" => XSPACE.replace("algebra xspace", "algebra xspace_generic_q"),
        "xispace" => XISPACE.to_string(),
        "TT7" => tt7_text(),
        "TDinv" => tdinv_text(),
        "tt7_listed" => tt7_listed_text(),
        "ansatz_xi" => ANSATZ_XI.to_string(),
        "ansatz_xi_variant" => ANSATZ_XI_VARIANT.to_string(),
        "tt9" => return crate::quantumgroup::tt9_presentation(),
        "tdinv" => return crate::quantumgroup::tdinv_printed(),
        "wz" => return crate::diffcalc::wz_presentation(&crate::linalg::rhat_builtin()),
        _ => {
            return Err(Error::UnknownBuiltin {
                name: name.to_string(),
                valid: BUILTIN_NAMES.join(", "),
            })
        }
    };
    parse_presentation(&text)
}

/// `d°` of the matrix entry `(i, j)`: the u-weight of row minus column.
pub fn matrix_degree(i: usize, j: usize) -> i64 {
    const W: [i64; 3] = [1, -1, 0];
    W[i - 1] - W[j - 1]
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        table: Arc<GenTable>,
        params: Vec<Param>,
        relations: Vec<NCPoly>,
    ) -> Self {
        let n = table.len();
        Presentation {
            name: name.into(),
            table,
            order: MonomialOrder::table_order(n),
            params,
            relations,
            degree: None,
        }
    }

    pub fn gen(&self, name: &str) -> GenId {
        self.table.id(name)
    }

    pub fn system(&self) -> Result<RewriteSystem> {
        build_rules(&self.relations, self.table.clone(), self.order.clone())
    }

    pub fn parse_expr(&self, text: &str) -> Result<NCPoly> {
        parse_expr_at(text, &self.table, 1, 1)
    }

    pub fn render(&self, p: &NCPoly) -> String {
        p.render(&self.table, &self.order)
    }

    /// Applies parameter bindings to every relation coefficient.
    pub fn substitute(&self, bindings: &[(Param, Scalar)]) -> Result<Presentation> {
        let mut out = self.clone();
        out.relations = self
            .relations
            .iter()
            .map(|r| r.substitute(bindings))
            .collect::<Result<Vec<_>>>()?;
        out.relations.retain(|r| !r.is_zero());
        let bound: BTreeSet<Param> = bindings.iter().map(|(p, _)| *p).collect();
        let mut params: BTreeSet<Param> =
            self.params.iter().copied().filter(|p| !bound.contains(p)).collect();
        for (_, v) in bindings {
            for p in Param::ALL {
                if v.mentions(p) {
                    params.insert(p);
                }
            }
        }
        out.params = params.into_iter().collect();
        Ok(out)
    }

    fn gen_degree(&self, g: GenId) -> Result<i64> {
        let map = self
            .degree
            .as_ref()
            .ok_or_else(|| Error::NoGrading(self.name.clone()))?;
        Ok(map.get(&g).copied().unwrap_or(0))
    }

    pub fn degree_of_word(&self, w: &Word) -> Result<i64> {
        w.letters().iter().map(|&g| self.gen_degree(g)).sum()
    }

    /// Common degree of all terms; errors on mixed degrees.
    pub fn degree_of(&self, p: &NCPoly) -> Result<i64> {
        let degrees = self.degrees_present(p)?;
        match degrees.len() {
            0 => Ok(0),
            1 => Ok(degrees[0]),
            _ => Err(Error::Inhomogeneous { degrees }),
        }
    }

    fn degrees_present(&self, p: &NCPoly) -> Result<Vec<i64>> {
        let mut set = BTreeSet::new();
        for (w, _) in p.terms() {
            set.insert(self.degree_of_word(w)?);
        }
        Ok(set.into_iter().collect())
    }

    /// The presentation in DSL form; reparses to an equal value.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "algebra {}", self.name);
        if !self.params.is_empty() {
            let ps: Vec<&str> = self.params.iter().map(|p| p.name()).collect();
            let _ = writeln!(out, "params {}", ps.join(" "));
        }
        let gens: Vec<&str> = self
            .order
            .precedence()
            .into_iter()
            .map(|g| self.table.name(g))
            .collect();
        let _ = writeln!(out, "generators {}", gens.join(" > "));
        if let Some(deg) = &self.degree {
            for (g, d) in deg {
                let _ = writeln!(out, "degree {} = {}", self.table.name(*g), d);
            }
        }
        for r in &self.relations {
            let _ = writeln!(out, "rel {} = 0", self.render(r));
        }
        out
    }
}

fn parse_err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        span: SourceSpan::new(line, column),
        message: message.into(),
    })
}

/// Parses the presentation DSL.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut name: Option<String> = None;
    let mut params: Option<Vec<Param>> = None;
    let mut table: Option<Arc<GenTable>> = None;
    let mut degree: BTreeMap<GenId, i64> = BTreeMap::new();
    let mut has_degree = false;
    let mut rels: Vec<(NCPoly, SourceSpan)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let (kw, rest) = match trimmed.find(char::is_whitespace) {
            Some(i) => (&trimmed[..i], &trimmed[i..]),
            None => (trimmed, ""),
        };
        let rest_col = indent + kw.len() + 1;
        match kw {
            "algebra" => {
                let n = rest.trim();
                if n.is_empty() {
                    return parse_err(line, rest_col, "missing algebra name");
                }
                name = Some(n.to_string());
            }
            "params" => {
                let mut ps = Vec::new();
                for tok in rest.split_whitespace() {
                    match Param::from_name(tok) {
                        Some(p) => ps.push(p),
                        None => {
                            let col = indent + 1 + trimmed.find(tok).unwrap_or(0);
                            return parse_err(line, col, format!("unknown parameter `{tok}`"));
                        }
                    }
                }
                params = Some(ps);
            }
            "generators" => {
                if table.is_some() {
                    return parse_err(line, indent + 1, "generators declared twice");
                }
                let names: Vec<&str> = rest.split('>').map(str::trim).collect();
                if names.iter().any(|n| n.is_empty()) {
                    return parse_err(line, rest_col, "empty generator name");
                }
                for n in &names {
                    let ok = n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                        && n.chars().all(|c| c.is_alphanumeric() || c == '_');
                    if !ok {
                        let col = indent + 1 + trimmed.find(n).unwrap_or(0);
                        return parse_err(line, col, format!("bad generator name `{n}`"));
                    }
                    if Param::from_name(n).is_some() {
                        let col = indent + 1 + trimmed.find(n).unwrap_or(0);
                        return parse_err(line, col, format!("`{n}` is a parameter name"));
                    }
                }
                let t = GenTable::new(&names).map_err(|e| match e {
                    Error::Parse { message, .. } => Error::Parse {
                        span: SourceSpan::new(line, rest_col),
                        message,
                    },
                    e => e,
                })?;
                table = Some(Arc::new(t));
            }
            "degree" => {
                let t = match &table {
                    Some(t) => t,
                    None => return parse_err(line, indent + 1, "degree before generators"),
                };
                let (g, d) = match rest.split_once('=') {
                    Some(x) => x,
                    None => return parse_err(line, rest_col, "expected `degree <gen> = <int>`"),
                };
                let gname = g.trim();
                let gid = match t.get(gname) {
                    Some(id) => id,
                    None => {
                        return Err(Error::UnknownGenerator {
                            span: SourceSpan::new(line, indent + 1 + trimmed.find(gname).unwrap_or(0)),
                            name: gname.to_string(),
                        })
                    }
                };
                let dv: i64 = match d.trim().parse() {
                    Ok(v) => v,
                    Err(_) => {
                        return parse_err(
                            line,
                            indent + 1 + trimmed.rfind('=').unwrap_or(0) + 1,
                            "degree must be an integer",
                        )
                    }
                };
                degree.insert(gid, dv);
                has_degree = true;
            }
            "rel" => {
                let t = match &table {
                    Some(t) => t.clone(),
                    None => return parse_err(line, indent + 1, "rel before generators"),
                };
                let body = rest;
                let eq = match body.find('=') {
                    Some(i) => i,
                    None => return parse_err(line, rest_col, "expected `=` in relation"),
                };
                let lhs_text = &body[..eq];
                let rhs_text = &body[eq + 1..];
                let lcol = indent + kw.len() + 1;
                let rcol = lcol + lhs_text.chars().count() + 1;
                let lhs = parse_expr_at(lhs_text, &t, line, lcol)?;
                let rhs = parse_expr_at(rhs_text, &t, line, rcol)?;
                rels.push((lhs.sub(&rhs), SourceSpan::new(line, indent + 1)));
            }
            other => {
                return parse_err(line, indent + 1, format!("unknown statement `{other}`"));
            }
        }
    }

    let table = match table {
        Some(t) => t,
        None => return parse_err(1, 1, "missing `generators` line"),
    };
    let params = params.unwrap_or_default();
    for (r, span) in &rels {
        for (_, c) in r.terms() {
            for p in Param::ALL {
                if c.mentions(p) && !params.contains(&p) {
                    return Err(Error::Parse {
                        span: span.clone(),
                        message: format!("undeclared parameter `{}`", p.name()),
                    });
                }
            }
        }
    }
    let n = table.len();
    let pres = Presentation {
        name: name.unwrap_or_else(|| "anonymous".to_string()),
        table,
        order: MonomialOrder::table_order(n),
        params,
        relations: rels.iter().map(|(r, _)| r.clone()).filter(|r| !r.is_zero()).collect(),
        degree: if has_degree { Some(degree) } else { None },
    };
    if pres.degree.is_some() {
        for (r, span) in &rels {
            let degrees = pres.degrees_present(r)?;
            if degrees.len() > 1 {
                return Err(Error::NotHomogeneousAt {
                    span: span.clone(),
                    degrees,
                });
            }
        }
    }
    Ok(pres)
}

pub fn load_presentation_file(path: &std::path::Path) -> Result<Presentation> {
    let text = std::fs::read_to_string(path)?;
    parse_presentation(&text).map_err(|e| match e {
        Error::Parse { span, message } => Error::Parse {
            span: span.in_file(path.display().to_string()),
            message,
        },
        Error::UnknownGenerator { span, name } => Error::UnknownGenerator {
            span: span.in_file(path.display().to_string()),
            name,
        },
        Error::NotHomogeneousAt { span, degrees } => Error::NotHomogeneousAt {
            span: span.in_file(path.display().to_string()),
            degrees,
        },
        e => e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xspace_first_relation() {
        let p = builtin("xspace").unwrap();
        assert_eq!(p.relations.len(), 3);
        assert_eq!(p.render(&p.relations[0]), "x1*x2 - q*x2*x1 - s*x3*x3");
    }

    #[test]
    fn unknown_builtin_lists_names() {
        let err = builtin("nope").unwrap_err().to_string();
        assert!(err.contains("TT7") && err.contains("xspace"));
    }

    #[test]
    fn undeclared_generator_span() {
        let err = parse_presentation("generators x1 > x2\nrel x1 y = 0\n").unwrap_err();
        match err {
            Error::UnknownGenerator { span, name } => {
                assert_eq!(name, "y");
                assert_eq!(span.line, 2);
                assert_eq!(span.column, 8);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn grading_rejects_inhomogeneous_relation() {
        let text = "generators x1 > x2 > x3\ndegree x1 = 1\nrel x1 x2 - x3 = 0\n";
        match parse_presentation(text).unwrap_err() {
            Error::NotHomogeneousAt { span, degrees } => {
                assert_eq!(span.line, 3);
                assert_eq!(degrees, vec![0, 1]);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn tt7_degrees() {
        let p = builtin("TT7").unwrap();
        let d = |s: &str| p.degree_of(&p.parse_expr(s).unwrap()).unwrap();
        assert_eq!(d("T12 T23"), 1);
        assert_eq!(d("T13 T23"), 0);
        assert_eq!(d("T12^2"), 4);
        for r in &p.relations {
            assert!(p.degree_of(r).is_ok());
        }
    }

    #[test]
    fn mixed_degree_error_lists_degrees() {
        let p = builtin("TT7").unwrap();
        match p.degree_of(&p.parse_expr("T12 + T21").unwrap()).unwrap_err() {
            Error::Inhomogeneous { degrees } => assert_eq!(degrees, vec![-2, 2]),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn dsl_round_trip_on_builtins() {
        for name in ["classical_R", "xspace", "xispace", "TT7", "TDinv", "tt7_listed", "ansatz_xi"] {
            let p = builtin(name).unwrap();
            let back = parse_presentation(&p.to_dsl()).unwrap();
            assert_eq!(back, p, "{name}");
        }
    }
}
