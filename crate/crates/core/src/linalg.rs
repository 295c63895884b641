//! Exact linear algebra over [`Scalar`] and the 9×9 braid matrix machinery.

use std::fmt;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::presentations::Presentation;
use crate::report::{CheckItem, CheckReport};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) + &(a * b);
                    m.set(i, j, v);
                }
            }
        }
        Ok(m)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        let mut m = Self::zeros(self.rows * p, self.cols * q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..p {
                    for l in 0..q {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            m.set(i * p + k, j * q + l, a * b);
                        }
                    }
                }
            }
        }
        m
    }

    /// Row echelon form with pivots chosen by fewest terms. Returns the
    /// reduced matrix and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero())
                .min_by_key(|&i| m.get(i, c).weight());
            let p = match best {
                Some(p) => p,
                None => continue,
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let pv = m.get(r, j);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * pv);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f);
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, taken from the pivot columns.
    pub fn column_space(&self) -> Vec<Vec<Scalar>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn substitute(&self, bindings: &[(crate::scalar::Param, Scalar)]) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|x| x.substitute(bindings))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Nonzero entries as `((row, col), value)`.
    pub fn nonzero_entries(&self) -> Vec<((usize, usize), &Scalar)> {
        let mut v = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_zero() {
                    v.push(((i, j), x));
                }
            }
        }
        v
    }

    /// Row-major rendering in the scalar grammar.
    pub fn to_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Position of the pair `(i, j)`, 1-based indices, in the 9-dim product space.
pub fn pair_index(i: usize, j: usize) -> usize {
    3 * (i - 1) + (j - 1)
}

pub fn pair_of(index: usize) -> (usize, usize) {
    (index / 3 + 1, index % 3 + 1)
}

/// The braid matrix, rows and columns in pair order (1,1),(1,2),...,(3,3).
pub fn rhat_builtin() -> ScalarMatrix {
    let mut m = ScalarMatrix::zeros(9, 9);
    let mut put = |a: (usize, usize), b: (usize, usize), v: Scalar| {
        m.set(pair_index(a.0, a.1), pair_index(b.0, b.1), v);
    };
    let u = |e| Scalar::upow(e);
    let s = Scalar::s();
    put((1, 1), (1, 1), Scalar::one());
    put((1, 2), (2, 1), u(2));
    put((1, 2), (3, 3), s.clone());
    put((1, 3), (3, 1), u(1));
    put((2, 1), (1, 2), u(-2));
    put((2, 1), (3, 3), -(&s * &u(-2)));
    put((2, 2), (2, 2), Scalar::one());
    put((2, 3), (3, 2), u(-1));
    put((3, 1), (1, 3), u(-1));
    put((3, 2), (2, 3), u(1));
    put((3, 3), (3, 3), Scalar::one());
    m
}

/// The flip `e_i ⊗ e_j ↦ e_j ⊗ e_i`, the undeformed braid matrix.
pub fn flip_matrix() -> ScalarMatrix {
    let mut m = ScalarMatrix::zeros(9, 9);
    for i in 1..=3 {
        for j in 1..=3 {
            m.set(pair_index(i, j), pair_index(j, i), Scalar::one());
        }
    }
    m
}

fn label_pair(index: usize) -> String {
    let (i, j) = pair_of(index);
    format!("({i},{j})")
}

fn residual_summary(diff: &ScalarMatrix, name: impl Fn(usize) -> String) -> Option<String> {
    let nz = diff.nonzero_entries();
    if nz.is_empty() {
        return None;
    }
    let shown: Vec<String> = nz
        .iter()
        .take(4)
        .map(|((i, j), v)| format!("[{},{}] = {}", name(*i), name(*j), v))
        .collect();
    Some(format!("{} nonzero entries; {}", nz.len(), shown.join("; ")))
}

fn triple_label(index: usize) -> String {
    format!("({},{},{})", index / 9 + 1, (index / 3) % 3 + 1, index % 3 + 1)
}

pub fn ybe_check(r: &ScalarMatrix) -> Result<CheckReport> {
    if r.rows() != 9 || r.cols() != 9 {
        return Err(Error::Dimension(format!(
            "braid matrix must be 9x9, got {}x{}",
            r.rows(),
            r.cols()
        )));
    }
    let start = Instant::now();
    let one = ScalarMatrix::identity(3);
    let a = r.kron(&one);
    let b = one.kron(r);
    let lhs = a.mul(&b)?.mul(&a)?;
    let rhs = b.mul(&a)?.mul(&b)?;
    let diff = lhs.sub(&rhs)?;
    let mut rep = CheckReport::new("ybe");
    rep.push(
        CheckItem::from_residual(
            "(R x 1)(1 x R)(R x 1) = (1 x R)(R x 1)(1 x R), 27x27",
            residual_summary(&diff, triple_label),
        )
        .timed(start),
    );
    Ok(rep)
}

pub fn involution_check(r: &ScalarMatrix) -> Result<CheckReport> {
    if !r.is_square() {
        return Err(Error::Dimension("involution check needs a square matrix".into()));
    }
    let start = Instant::now();
    let diff = r.mul(r)?.sub(&ScalarMatrix::identity(r.rows()))?;
    let mut rep = CheckReport::new("involution");
    let name = |i: usize| {
        if r.rows() == 9 {
            label_pair(i)
        } else {
            (i + 1).to_string()
        }
    };
    rep.push(CheckItem::from_residual("R*R = 1", residual_summary(&diff, name)).timed(start));
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct Eigensplit {
    pub plus: Vec<Vec<Scalar>>,
    pub minus: Vec<Vec<Scalar>>,
}

/// Bases of the ±1 eigenspaces of an involution: column spaces of (1 ± R)/2.
pub fn eigensplit(r: &ScalarMatrix) -> Result<Eigensplit> {
    if !involution_check(r)?.passed() {
        return Err(Error::NotInvolutive);
    }
    let half = Scalar::from_ratio(1, 2);
    let one = ScalarMatrix::identity(r.rows());
    let p_plus = one.add(r)?.scale(&half);
    let p_minus = one.sub(r)?.scale(&half);
    Ok(Eigensplit {
        plus: p_plus.column_space(),
        minus: p_minus.column_space(),
    })
}

/// Coefficient vectors of quadratic relations in three generators, indexed
/// by [`pair_index`].
pub fn relation_vectors(pres: &Presentation) -> Result<Vec<Vec<Scalar>>> {
    if pres.table.len() != 3 {
        return Err(Error::Dimension(format!(
            "{} has {} generators, expected 3",
            pres.name,
            pres.table.len()
        )));
    }
    let mut out = Vec::new();
    for r in &pres.relations {
        let mut v = vec![Scalar::zero(); 9];
        for (w, c) in r.terms() {
            if w.len() != 2 {
                return Err(Error::NotQuadratic(pres.render(r)));
            }
            let (a, b) = (w.letters()[0].index() + 1, w.letters()[1].index() + 1);
            let k = pair_index(a, b);
            v[k] = &v[k] + c;
        }
        out.push(v);
    }
    Ok(out)
}

pub fn span_rank(vectors: &[Vec<Scalar>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    ScalarMatrix::from_columns(dim, vectors).rank()
}

pub fn same_span(a: &[Vec<Scalar>], b: &[Vec<Scalar>], dim: usize) -> bool {
    let ra = span_rank(a, dim);
    let rb = span_rank(b, dim);
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    ra == rb && span_rank(&all, dim) == ra
}

/// Index linearization under which the relation spans were matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Eigenvectors of R as column vectors.
    Lexicographic,
    /// Eigenvectors of the transpose, i.e. row vectors `c` with `c R = ±c`.
    Transposed,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Lexicographic => "lexicographic",
            Convention::Transposed => "transposed",
        })
    }
}

struct Attempt {
    convention: Convention,
    items: Vec<CheckItem>,
    assignment: String,
}

fn attempt(
    convention: Convention,
    r: &ScalarMatrix,
    xs: &[Vec<Scalar>],
    xis: &[Vec<Scalar>],
) -> Result<Attempt> {
    let m = match convention {
        Convention::Lexicographic => r.clone(),
        Convention::Transposed => r.transpose(),
    };
    let mut items = Vec::new();
    let split = eigensplit(&m)?;
    let (dp, dm) = (split.plus.len(), split.minus.len());
    let dims_ok = {
        let mut d = [dp, dm];
        d.sort();
        d == [3, 6]
    };
    items.push(CheckItem::from_residual(
        "eigenspace dimensions {6, 3}",
        (!dims_ok).then(|| format!("dim V+ = {dp}, dim V- = {dm}")),
    ));
    let x_plus = same_span(xs, &split.plus, 9);
    let x_minus = same_span(xs, &split.minus, 9);
    let xi_plus = same_span(xis, &split.plus, 9);
    let xi_minus = same_span(xis, &split.minus, 9);
    let (x_sign, x_ok) = match (x_plus, x_minus) {
        (true, _) => ("+1", true),
        (_, true) => ("-1", true),
        _ => ("none", false),
    };
    let (xi_sign, xi_ok) = match (xi_plus, xi_minus) {
        (true, _) => ("+1", true),
        (_, true) => ("-1", true),
        _ => ("none", false),
    };
    let xr = span_rank(xs, 9);
    let xir = span_rank(xis, 9);
    items.push(CheckItem::from_residual(
        "span(R_xx) is the 3-dim eigenspace",
        (!(x_ok && xr == 3)).then(|| format!("rank {xr}, matches eigenspace: {x_sign}")),
    ));
    items.push(CheckItem::from_residual(
        "span(R_xixi) is the 6-dim eigenspace",
        (!(xi_ok && xir == 6)).then(|| format!("rank {xir}, matches eigenspace: {xi_sign}")),
    ));
    let mut both = xs.to_vec();
    both.extend(xis.iter().cloned());
    let total = span_rank(&both, 9);
    items.push(CheckItem::from_residual(
        "spans complementary (rank 9)",
        (total != 9 || xr + xir != 9).then(|| format!("joint rank {total}")),
    ));
    Ok(Attempt {
        convention,
        items,
        assignment: format!("R_xx <-> {x_sign} eigenspace, R_xixi <-> {xi_sign} eigenspace"),
    })
}

/// Matches the relation spans of the two quantum spaces with the eigenspaces
/// of `r`, trying the lexicographic linearization first and the transposed
/// one second.
pub fn eigenspace_identification_with(
    r: &ScalarMatrix,
    xspace: &Presentation,
    xispace: &Presentation,
) -> Result<CheckReport> {
    let xs = relation_vectors(xspace)?;
    let xis = relation_vectors(xispace)?;
    let mut rep = CheckReport::new("eigenspaces");
    let structural = ybe_check(r)?.passed() && involution_check(r)?.passed();
    let mut tried = Vec::new();
    for conv in [Convention::Lexicographic, Convention::Transposed] {
        let start = Instant::now();
        let a = attempt(conv, r, &xs, &xis)?;
        let ok = structural && a.items.iter().all(|i| i.status == crate::report::Status::Pass);
        if ok {
            for it in a.items {
                rep.push(it.timed(start));
            }
            rep.note(format!("convention: {}", a.convention));
            rep.note(a.assignment);
            for t in tried {
                rep.note(t);
            }
            return Ok(rep);
        }
        tried.push(format!(
            "{} convention rejected: {}",
            a.convention,
            a.items
                .iter()
                .filter_map(|i| i.residual.clone())
                .collect::<Vec<_>>()
                .join("; ")
        ));
        if conv == Convention::Transposed {
            for it in a.items {
                rep.push(it.timed(start));
            }
        }
    }
    for t in tried {
        rep.note(t);
    }
    Ok(rep)
}

pub fn eigenspace_identification() -> Result<CheckReport> {
    let xspace = crate::presentations::builtin("xspace")?
        .substitute(&[(crate::scalar::Param::Q, Scalar::upow(2))])?;
    let xispace = crate::presentations::builtin("xispace")?;
    eigenspace_identification_with(&rhat_builtin(), &xspace, &xispace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhat_entries() {
        let r = rhat_builtin();
        assert!(r.get(pair_index(1, 1), pair_index(1, 1)).is_one());
        assert_eq!(r.get(pair_index(2, 1), pair_index(1, 2)), &Scalar::upow(-2));
        assert_eq!(r.get(pair_index(3, 2), pair_index(2, 3)), &Scalar::u());
        assert_eq!(r.get(pair_index(1, 2), pair_index(3, 3)), &Scalar::s());
    }

    #[test]
    fn rhat_at_classical_point_is_flip() {
        use crate::scalar::Param;
        let r = rhat_builtin()
            .substitute(&[(Param::U, Scalar::one()), (Param::S, Scalar::zero())])
            .unwrap();
        assert_eq!(r, flip_matrix());
    }

    #[test]
    fn identity_passes_structural_checks() {
        let one = ScalarMatrix::identity(9);
        assert!(ybe_check(&one).unwrap().passed());
        assert!(involution_check(&one).unwrap().passed());
        let s = eigensplit(&one).unwrap();
        assert_eq!((s.plus.len(), s.minus.len()), (9, 0));
        let s = eigensplit(&one.scale(&Scalar::from_int(-1))).unwrap();
        assert_eq!((s.plus.len(), s.minus.len()), (0, 9));
    }

    #[test]
    fn diag_u_is_not_an_involution() {
        let mut d = vec![Scalar::one(); 9];
        d[0] = Scalar::u();
        assert!(!involution_check(&ScalarMatrix::diagonal(&d)).unwrap().passed());
        assert!(matches!(eigensplit(&ScalarMatrix::diagonal(&d)), Err(Error::NotInvolutive)));
    }

    #[test]
    fn kernel_annihilates() {
        let mut m = ScalarMatrix::zeros(2, 3);
        m.set(0, 0, Scalar::u());
        m.set(0, 1, Scalar::one());
        m.set(1, 2, Scalar::s());
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn ybe_rejects_wrong_shape() {
        assert!(matches!(ybe_check(&ScalarMatrix::identity(3)), Err(Error::Dimension(_))));
    }
}
