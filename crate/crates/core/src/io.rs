//! Interchange formats: JSON algebra and module files, a text syntax for
//! elements of `A` and `Q(A)`, and persisted truncated bases.
//!
//! Rationals are always strings (`"p"` or `"p/q"`) so nothing is lost in
//! transit. An algebra file looks like
//!
//! ```json
//! {
//!   "name": "KxK",
//!   "dim": 2,
//!   "basis": ["e1", "e2"],
//!   "unit": ["1", "1"],
//!   "mul": [[0, 0, 0, "1"], [1, 1, 1, "1"]],
//!   "bracket": []
//! }
//! ```
//!
//! where `[i, j, k, c]` in `mul` means `v_i v_j` has coefficient `c` on `v_k`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AElement, AlgebraPresentation, Ncpa};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVector};
use crate::module::QuasiPoissonModule;
use crate::quotient::TruncatedQuotient;
use crate::rational::{self, Rational};
use crate::smash::{QAlgebra, QElement, QMonomial};
use crate::uea::UElement;
use crate::words::Word;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    name: String,
    dim: usize,
    basis: Vec<String>,
    unit: Vec<String>,
    #[serde(default)]
    mul: Vec<(usize, usize, usize, String)>,
    #[serde(default)]
    bracket: Vec<(usize, usize, usize, String)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleFile {
    algebra: String,
    dim: usize,
    left: Vec<Vec<(usize, usize, String)>>,
    right: Vec<Vec<(usize, usize, String)>>,
    lie: Vec<Vec<(usize, usize, String)>>,
}

fn syntax(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn check_index(index: usize, dim: usize) -> Result<()> {
    if index >= dim {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    Ok(())
}

fn table_entries(
    what: &str,
    entries: &[(usize, usize, usize, String)],
    n: usize,
) -> Result<BTreeMap<(usize, usize), SparseVector>> {
    let mut seen = BTreeSet::new();
    let mut out: BTreeMap<(usize, usize), SparseVector> = BTreeMap::new();
    for (i, j, k, c) in entries {
        for &x in [i, j, k] {
            check_index(x, n)?;
        }
        if !seen.insert((*i, *j, *k)) {
            return Err(Error::MalformedPresentation(format!(
                "duplicate {what} entry ({i}, {j}, {k})"
            )));
        }
        let c = rational::parse(c)?;
        out.entry((*i, *j))
            .or_insert_with(|| SparseVector::zero(n))
            .set(*k, c);
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Parses an algebra file. Only the shape is checked; run
/// [`Ncpa::validate`] for the axioms.
pub fn parse_algebra(text: &str) -> Result<AlgebraPresentation> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(syntax)?;
    let n = file.dim;
    if file.basis.len() != n {
        return Err(Error::MalformedPresentation(format!(
            "{} basis labels for dimension {n}",
            file.basis.len()
        )));
    }
    if file.unit.len() != n {
        return Err(Error::MalformedPresentation(format!(
            "unit has {} coordinates for dimension {n}",
            file.unit.len()
        )));
    }
    let mut labels = BTreeSet::new();
    for l in &file.basis {
        if l.is_empty() || !labels.insert(l) {
            return Err(Error::MalformedPresentation(format!(
                "basis label {l:?} is empty or repeated"
            )));
        }
    }
    let unit = file
        .unit
        .iter()
        .map(|c| rational::parse(c))
        .collect::<Result<Vec<_>>>()?;
    let p = AlgebraPresentation {
        name: file.name,
        dim: n,
        labels: file.basis,
        unit: SparseVector::from_dense(&unit),
        mul: table_entries("mul", &file.mul, n)?,
        bracket: table_entries("bracket", &file.bracket, n)?,
    };
    p.check_shape()?;
    Ok(p)
}

fn flatten_table(
    table: &BTreeMap<(usize, usize), SparseVector>,
) -> Vec<(usize, usize, usize, String)> {
    let mut out = Vec::new();
    for ((i, j), v) in table {
        for (k, c) in v.iter() {
            out.push((*i, *j, k, rational::format(c)));
        }
    }
    out
}

/// Canonical serialization: sorted entries, reduced rationals, no zeros.
pub fn write_algebra(p: &AlgebraPresentation) -> String {
    let unit: Vec<String> = p.unit.to_dense().iter().map(rational::format).collect();
    let fields = [
        ("name", json_line(&p.name)),
        ("dim", json_line(&p.dim)),
        ("basis", json_line(&p.labels)),
        ("unit", json_line(&unit)),
        ("mul", json_rows(&flatten_table(&p.mul))),
        ("bracket", json_rows(&flatten_table(&p.bracket))),
    ];
    json_object(&fields)
}

fn json_line<T: Serialize + ?Sized>(x: &T) -> String {
    serde_json::to_string(x).expect("serializable")
}

/// A JSON array with one compact row per line.
fn json_rows<T: Serialize>(rows: &[T]) -> String {
    if rows.is_empty() {
        return "[]".into();
    }
    let lines: Vec<String> = rows
        .iter()
        .map(|r| format!("    {}", json_line(r)))
        .collect();
    format!("[\n{}\n  ]", lines.join(",\n"))
}

fn json_object(fields: &[(&str, String)]) -> String {
    let lines: Vec<String> = fields
        .iter()
        .map(|(k, v)| format!("  \"{k}\": {v}"))
        .collect();
    format!("{{\n{}\n}}\n", lines.join(",\n"))
}

fn parse_matrices(
    what: &str,
    lists: &[Vec<(usize, usize, String)>],
    n: usize,
    m: usize,
) -> Result<Vec<Matrix>> {
    if lists.len() != n {
        return Err(Error::ModuleShape(format!(
            "{what} has {} entries, algebra has dimension {n}",
            lists.len()
        )));
    }
    lists
        .iter()
        .map(|entries| {
            let mut a = Matrix::zeros(m, m);
            let mut seen = BTreeSet::new();
            for (r, c, x) in entries {
                check_index(*r, m)?;
                check_index(*c, m)?;
                if !seen.insert((*r, *c)) {
                    return Err(Error::ModuleShape(format!(
                        "duplicate {what} entry ({r}, {c})"
                    )));
                }
                a.set(*r, *c, rational::parse(x)?);
            }
            Ok(a)
        })
        .collect()
}

/// Parses a module file against `alg`. The `algebra` key is informational
/// and must match the algebra's name.
pub fn parse_module(text: &str, alg: &Ncpa) -> Result<QuasiPoissonModule> {
    let file: ModuleFile = serde_json::from_str(text).map_err(syntax)?;
    if file.algebra != alg.name() {
        return Err(Error::ModuleShape(format!(
            "module is over {:?}, algebra is {:?}",
            file.algebra,
            alg.name()
        )));
    }
    let n = alg.dim();
    let m = file.dim;
    QuasiPoissonModule::new(
        alg,
        m,
        parse_matrices("left", &file.left, n, m)?,
        parse_matrices("right", &file.right, n, m)?,
        parse_matrices("lie", &file.lie, n, m)?,
    )
}

pub fn write_module(alg: &Ncpa, m: &QuasiPoissonModule) -> String {
    let list = |mats: &[Matrix]| -> Vec<Vec<(usize, usize, String)>> {
        mats.iter()
            .map(|a| {
                a.triples()
                    .into_iter()
                    .map(|(r, c, x)| (r, c, rational::format(&x)))
                    .collect()
            })
            .collect()
    };
    let fields = [
        ("algebra", json_line(alg.name())),
        ("dim", json_line(&m.dim)),
        ("left", json_rows(&list(&m.left))),
        ("right", json_rows(&list(&m.right))),
        ("lie", json_rows(&list(&m.lie))),
    ];
    json_object(&fields)
}

/// Splits `text` at top-level `+` and `-` into signed terms. Brackets are
/// kept intact, and a sign right after `/`, `*` or another sign belongs to
/// the following number.
fn split_terms(text: &str) -> Result<Vec<(bool, String)>> {
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut depth = 0usize;
    for ch in text.chars() {
        match ch {
            '[' => {
                depth += 1;
                current.push(ch);
            }
            ']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::InvalidArgument(format!("unbalanced ']' in {text:?}")))?;
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                let t = current.trim();
                if t.is_empty() {
                    if ch == '-' {
                        negative = !negative;
                    }
                } else if t.ends_with('*') || t.ends_with('/') {
                    current.push(ch);
                } else {
                    terms.push((negative, t.to_string()));
                    current.clear();
                    negative = ch == '-';
                }
            }
            _ => current.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::InvalidArgument(format!(
            "unbalanced '[' in {text:?}"
        )));
    }
    let t = current.trim();
    if t.is_empty() {
        if !terms.is_empty() || negative {
            return Err(Error::InvalidArgument(format!("dangling sign in {text:?}")));
        }
    } else {
        terms.push((negative, t.to_string()));
    }
    if terms.is_empty() {
        return Err(Error::InvalidArgument("empty element".into()));
    }
    Ok(terms)
}

/// `(coefficient, atom)`; atom is `None` for a bare number.
fn split_coefficient(
    term: &str,
    is_atom: impl Fn(&str) -> bool,
) -> Result<(Rational, Option<&str>)> {
    if is_atom(term) {
        return Ok((Rational::one(), Some(term)));
    }
    if let Some((c, atom)) = term.split_once('*') {
        return Ok((rational::parse(c)?, Some(atom.trim())));
    }
    Ok((rational::parse(term)?, None))
}

/// Coordinates of one basis label, or of the unit for `"1"`.
fn atom_coords(alg: &Ncpa, atom: &str) -> Result<SparseVector> {
    if let Some(i) = alg.label_index(atom) {
        return Ok(SparseVector::unit(alg.dim(), i));
    }
    if atom == "1" {
        return Ok(alg.unit_coords().clone());
    }
    Err(Error::InvalidArgument(format!(
        "unknown basis label {atom:?}; expected one of {:?}",
        alg.labels()
    )))
}

/// Parses `2*e1 - 1/3*e2`, `E12`, `1`, `3/2`, ... A bare number is a
/// multiple of the unit.
pub fn parse_a_element(alg: &Ncpa, text: &str) -> Result<AElement> {
    let mut out = SparseVector::zero(alg.dim());
    for (negative, term) in split_terms(text)? {
        let (mut c, atom) = split_coefficient(&term, |t| alg.label_index(t).is_some())?;
        if negative {
            c = -c;
        }
        let v = match atom {
            Some(a) => atom_coords(alg, a)?,
            None => alg.unit_coords().clone(),
        };
        out.add_scaled(&c, &v);
    }
    Ok(AElement::new(out))
}

pub fn format_a_element(alg: &Ncpa, x: &AElement) -> String {
    format_terms(
        x.coords
            .iter()
            .map(|(i, c)| (c.clone(), alg.labels()[i].clone())),
    )
}

fn format_terms(terms: impl Iterator<Item = (Rational, String)>) -> String {
    let mut out = String::new();
    for (c, atom) in terms {
        let (sign, mag) = if c < Rational::zero() {
            ("-", -c)
        } else {
            ("+", c)
        };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if !mag.is_one() {
            out.push_str(&rational::format(&mag));
            out.push('*');
        }
        out.push_str(&atom);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn parse_q_atom(q: &QAlgebra, atom: &str) -> Result<QElement> {
    let alg = q.algebra();
    let inner = atom
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::InvalidArgument(format!("expected [left;right;u], got {atom:?}")))?;
    let parts: Vec<&str> = inner.split(';').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "expected three ';'-separated fields in {atom:?}"
        )));
    }
    let left = atom_coords(alg, parts[0])?;
    let right = atom_coords(alg, parts[1])?;
    let u = if parts[2].is_empty() || parts[2] == "1" {
        UElement::one()
    } else {
        let letters = parts[2]
            .split(',')
            .map(|l| {
                let l = l.trim();
                alg.label_index(l).ok_or_else(|| {
                    Error::InvalidArgument(format!("unknown basis label {l:?} in {atom:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        q.uea().straighten(&Word(letters))?
    };
    Ok(QElement::tensor(&left, &right, &u))
}

/// Parses combinations of `[left;right;u1,...,ur]` atoms such as
/// `[e1;e2;e1] - 2*[1;1;]`. `left` and `right` are basis labels or `1`;
/// the `U(A)` word is straightened, so any letter order is accepted.
pub fn parse_q_element(q: &QAlgebra, text: &str) -> Result<QElement> {
    let mut out = QElement::zero();
    for (negative, term) in split_terms(text)? {
        let (mut c, atom) = split_coefficient(&term, |t| t.starts_with('['))?;
        if negative {
            c = -c;
        }
        let x = match atom {
            Some(a) => parse_q_atom(q, a)?,
            None => q.identity(),
        };
        out.add_scaled(&c, &x);
    }
    q.check_element(&out)?;
    Ok(out)
}

pub fn format_q_monomial(alg: &Ncpa, m: &QMonomial) -> String {
    let labels = alg.labels();
    let u: Vec<&str> = m.u.indices().iter().map(|&i| labels[i].as_str()).collect();
    format!("[{};{};{}]", labels[m.left], labels[m.right], u.join(","))
}

pub fn format_q_element(alg: &Ncpa, x: &QElement) -> String {
    format_terms(
        x.iter()
            .map(|(m, c)| (c.clone(), format_q_monomial(alg, m))),
    )
}

/// A truncated basis of a quotient of `Q(A)`, as persisted by `env-dim`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BasisFile {
    pub algebra: String,
    pub ideal: String,
    pub degree: usize,
    pub saturation: usize,
    pub stable: bool,
    pub dim: usize,
    pub basis: Vec<String>,
}

impl BasisFile {
    pub fn new(alg: &Ncpa, ideal: &str, tq: &TruncatedQuotient) -> Self {
        BasisFile {
            algebra: alg.name().to_string(),
            ideal: ideal.to_string(),
            degree: tq.degree,
            saturation: tq.saturation,
            stable: tq.stable,
            dim: tq.dim(),
            basis: tq
                .coset_basis()
                .iter()
                .map(|m| format_q_monomial(alg, m))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(syntax)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::{frac, int};

    const KXK: &str = r#"{
  "name": "KxK",
  "dim": 2,
  "basis": ["e1", "e2"],
  "unit": ["1", "1"],
  "mul": [[0, 0, 0, "1"], [1, 1, 1, "1"]],
  "bracket": []
}"#;

    #[test]
    fn minimal_file_parses_and_validates() {
        let p = parse_algebra(KXK).unwrap();
        assert_eq!(p, catalog::kxk_presentation());
        assert!(Ncpa::validate(p).is_ok());
    }

    #[test]
    fn malformed_inputs() {
        let bad = KXK.replace("[1, 1, 1, \"1\"]", "[1, 1, 1, \"1/0\"]");
        assert!(matches!(
            parse_algebra(&bad),
            Err(Error::MalformedRational(_))
        ));
        let bad = KXK.replace("[1, 1, 1, \"1\"]", "[1, 5, 1, \"1\"]");
        assert!(matches!(
            parse_algebra(&bad),
            Err(Error::IndexOutOfRange { index: 5, dim: 2 })
        ));
        let bad = KXK.replace("[1, 1, 1, \"1\"]", "[0, 0, 0, \"2\"]");
        assert!(matches!(
            parse_algebra(&bad),
            Err(Error::MalformedPresentation(_))
        ));
        let bad = KXK.replace("\"dim\": 2,", "\"dim\": 2");
        match parse_algebra(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let bad = KXK.replace("\"unit\": [\"1\", \"1\"]", "\"unit\": [\"1\"]");
        assert!(parse_algebra(&bad).is_err());
    }

    #[test]
    fn unreduced_rationals_are_canonicalized() {
        let text = KXK.replace("[1, 1, 1, \"1\"]", "[1, 1, 1, \"2/2\"]");
        let p = parse_algebra(&text).unwrap();
        assert_eq!(p, catalog::kxk_presentation());
        assert!(write_algebra(&p).contains("\"1\""));
        assert!(!write_algebra(&p).contains("2/2"));
    }

    #[test]
    fn algebra_round_trip() {
        let mut all: Vec<AlgebraPresentation> = catalog::bundled()
            .iter()
            .map(|a| a.presentation().clone())
            .collect();
        all.push(catalog::non_leibniz_presentation());
        all.push(catalog::m2_presentation());
        for p in all {
            let text = write_algebra(&p);
            let back = parse_algebra(&text).unwrap();
            assert_eq!(back, p);
            assert_eq!(write_algebra(&back), text);
        }
    }

    #[test]
    fn module_round_trip() {
        let alg = catalog::m2_standard();
        for m in [
            QuasiPoissonModule::regular(&alg),
            QuasiPoissonModule::tensor_square(&alg),
        ] {
            let text = write_module(&alg, &m);
            let back = parse_module(&text, &alg).unwrap();
            assert_eq!(back, m);
            assert_eq!(write_module(&alg, &back), text);
        }
        let text = write_module(&alg, &QuasiPoissonModule::regular(&alg));
        assert!(parse_module(&text, &catalog::kxk()).is_err());
    }

    #[test]
    fn a_elements() {
        let alg = catalog::kxk();
        let x = parse_a_element(&alg, "2*e1 - 1/3*e2").unwrap();
        assert_eq!(x.coords.to_dense(), vec![int(2), frac(-1, 3)]);
        assert_eq!(format_a_element(&alg, &x), "2*e1 - 1/3*e2");
        let one = parse_a_element(&alg, "1").unwrap();
        assert_eq!(one.coords, *alg.unit_coords());
        let y = parse_a_element(&alg, "-e2 + 3/2").unwrap();
        assert_eq!(y.coords.to_dense(), vec![frac(3, 2), frac(1, 2)]);
        assert!(parse_a_element(&alg, "e3").is_err());
        assert!(parse_a_element(&alg, "").is_err());
        assert!(parse_a_element(&alg, "e1 +").is_err());
        assert_eq!(format_a_element(&alg, &alg.zero()), "0");

        let m2 = catalog::m2_standard();
        let x = parse_a_element(&m2, "E12 + -1*E21").unwrap();
        assert_eq!(format_a_element(&m2, &x), "E12 - E21");
    }

    #[test]
    fn q_elements() {
        let q = QAlgebra::with_cap(catalog::m2_standard(), 4);
        let x = parse_q_element(&q, "[E11;E22;E21,E12] - 2*[1;1;]").unwrap();
        let alg = q.algebra();
        let text = format_q_element(alg, &x);
        assert_eq!(parse_q_element(&q, &text).unwrap(), x);
        // unsorted words are straightened
        let y = parse_q_element(&q, "[E11;E11;E21,E12]").unwrap();
        let z = parse_q_element(&q, "[E11;E11;E12,E21] + [E11;E11;E22] - [E11;E11;E11]").unwrap();
        assert_eq!(y, z);
        assert_eq!(parse_q_element(&q, "1").unwrap(), q.identity());
        assert!(parse_q_element(&q, "[E11;E22]").is_err());
        assert!(parse_q_element(&q, "[E11;E22;E13]").is_err());
        assert!(parse_q_element(&q, "[E11;E22;E12").is_err());
    }

    #[test]
    fn basis_file_round_trip() {
        let q = QAlgebra::with_cap(catalog::kxk(), 4);
        let gens = crate::quotient::poisson_ideal_j(&q);
        let tq = TruncatedQuotient::compute(&q, &gens, 1, 3).unwrap();
        let f = BasisFile::new(q.algebra(), "J", &tq);
        assert_eq!(f.dim, 6);
        assert_eq!(f.basis.len(), 6);
        assert_eq!(BasisFile::parse(&f.to_json()).unwrap(), f);
    }
}
