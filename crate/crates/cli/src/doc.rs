//! JSON documents. Inputs accept integers either as JSON numbers or as
//! strings; every number written out is a string (`"p"` or `"p/q"`).

use std::sync::Arc;

use ks_core::bigfloat::BigFloat;
use ks_core::clifford::{mask_to_subset, CliffordContext, CliffordElement};
use ks_core::galois::{BrauerSetup, GaloisModule};
use ks_core::kuga_satake::{polarization_type, K3Period, PolarizedTorus};
use ks_core::scalar::{format_rational, parse_rational};
use ks_core::{Error, IntMatrix, QuadLattice, Result, Scalar, ScalarMatrix, ScalarMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    pub fn rational(&self) -> Result<BigRational> {
        match self {
            Num::Int(v) => Ok(BigRational::from_integer((*v).into())),
            Num::Str(s) => parse_rational(s),
        }
    }

    pub fn integer(&self) -> Result<BigInt> {
        let r = self.rational()?;
        if !r.is_integer() {
            return Err(Error::Invalid(format!("expected an integer, got {}", format_rational(&r))));
        }
        Ok(r.to_integer())
    }
}

/// A period coordinate: a rational, a pair `[a, b]` for `a + b sqrt(D)`,
/// or a decimal string in float mode.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Entry {
    Plain(Num),
    Pair([Num; 2]),
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Rational,
    Quadratic,
    Float,
}

/// Period in an orthogonal basis with diagonal norms `q`.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct PeriodDoc {
    #[serde(default)]
    pub q: Vec<Num>,
    pub f1: Vec<Entry>,
    pub f2: Vec<Entry>,
    /// Inferred when absent: quadratic if `D` is given, float if
    /// `precision` is, rational otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, rename = "D", alias = "d", skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    /// Bits of precision for float mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    /// Tolerance for float mode, as a rational string.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
}

pub const DEFAULT_FLOAT_PRECISION: u32 = 128;

impl PeriodDoc {
    pub fn mode(&self) -> Mode {
        match (self.mode, self.d, self.precision) {
            (Some(m), _, _) => m,
            (None, Some(_), _) => Mode::Quadratic,
            (None, None, Some(_)) => Mode::Float,
            _ => Mode::Rational,
        }
    }

    fn scalar(&self, e: &Entry) -> Result<Scalar> {
        match (self.mode(), e) {
            (Mode::Rational, Entry::Plain(n)) => Ok(Scalar::from(n.rational()?)),
            (Mode::Quadratic, Entry::Plain(n)) => Ok(Scalar::from(n.rational()?)),
            (Mode::Quadratic, Entry::Pair([a, b])) => {
                let d = self.d.ok_or_else(|| Error::Invalid("quadratic mode needs \"D\"".into()))?;
                Scalar::quadratic(a.rational()?, b.rational()?, d)
            }
            (Mode::Float, Entry::Plain(n)) => {
                let p = self.precision.unwrap_or(DEFAULT_FLOAT_PRECISION);
                let x = match n {
                    Num::Int(v) => BigFloat::from_int(&BigInt::from(*v), p),
                    Num::Str(s) => BigFloat::parse_decimal(s, p)
                        .ok_or_else(|| Error::Invalid(format!("not a decimal number: {s:?}")))?,
                };
                Ok(Scalar::from(x))
            }
            _ => Err(Error::Invalid("pair entries are only allowed in quadratic mode".into())),
        }
    }

    pub fn context(&self, guard: usize) -> Result<Arc<CliffordContext>> {
        let q = self.q.iter().map(|n| n.integer().map(Scalar::from)).collect::<Result<Vec<_>>>()?;
        Ok(CliffordContext::new(q)?.with_guard(guard))
    }

    pub fn period(&self, guard: usize) -> Result<K3Period> {
        self.period_in(&self.context(guard)?)
    }

    /// Period on a given context; a nonempty `q` must match its norms.
    pub fn period_in(&self, ctx: &Arc<CliffordContext>) -> Result<K3Period> {
        if !self.q.is_empty() {
            let q = self.q.iter().map(|n| n.integer().map(Scalar::from)).collect::<Result<Vec<_>>>()?;
            if q != ctx.q() {
                let want: Vec<String> = ctx.q().iter().map(ToString::to_string).collect();
                return Err(Error::Invalid(format!("period norms do not match the lattice, expected q = {want:?}")));
            }
        }
        let f1 = self.f1.iter().map(|e| self.scalar(e)).collect::<Result<Vec<_>>>()?;
        let f2 = self.f2.iter().map(|e| self.scalar(e)).collect::<Result<Vec<_>>>()?;
        match self.mode() {
            Mode::Float => {
                let tol = parse_rational(self.tolerance.as_deref().unwrap_or("1/1000000000000"))?;
                K3Period::with_tolerance(ctx, f1, f2, tol)
            }
            _ => K3Period::new(ctx, f1, f2),
        }
    }

    /// Standard period `f1 = e1`, `f2 = e2` for norms `q`.
    pub fn standard(q: &[i64]) -> Self {
        let unit = |k: usize| (0..q.len()).map(|i| Entry::Plain(Num::Int((i == k) as i64))).collect();
        PeriodDoc {
            q: q.iter().map(|&x| Num::Int(x)).collect(),
            f1: unit(0),
            f2: unit(1),
            mode: None,
            d: None,
            precision: None,
            tolerance: None,
        }
    }
}

pub fn int_matrix(rows: &[Vec<Num>], ncols: usize) -> Result<IntMatrix> {
    let mut out = IntMatrix::empty(ncols);
    for r in rows {
        out.push_row(r.iter().map(Num::integer).collect::<Result<Vec<_>>>()?)?;
    }
    Ok(out)
}

pub fn matrix_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    m.rows_iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

pub fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Inverse of [`PeriodDoc`]'s entry parsing; floats are written with
/// `digits` significant decimals.
pub fn scalar_entry(s: &Scalar, digits: usize) -> Entry {
    match s {
        Scalar::Rational(r) => Entry::Plain(Num::Str(format_rational(r))),
        Scalar::Quadratic(q) => Entry::Pair([Num::Str(format_rational(&q.a)), Num::Str(format_rational(&q.b))]),
        Scalar::Float(x) => Entry::Plain(Num::Str(x.to_decimal_string(digits))),
    }
}

pub fn scalar_matrix_strings(m: &ScalarMatrix) -> Vec<Vec<String>> {
    m.rows_iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct LatticeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub gram: Vec<Vec<Num>>,
}

impl LatticeDoc {
    pub fn lattice(&self) -> Result<QuadLattice> {
        let n = self.rank.unwrap_or(self.gram.len());
        if self.gram.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.gram.len() });
        }
        QuadLattice::new(int_matrix(&self.gram, n)?)
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct TermDoc {
    /// 1-based basis indices.
    pub subset: Vec<usize>,
    pub coeff: Entry,
}

/// `{"q": [...], "D": 2, "terms": [{"subset": [1, 2], "coeff": "1/2"}]}`.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct CliffordDoc {
    pub q: Vec<Num>,
    #[serde(default, rename = "D", alias = "d", skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    pub terms: Vec<TermDoc>,
}

impl CliffordDoc {
    pub fn context(&self, guard: usize) -> Result<Arc<CliffordContext>> {
        let q = self.q.iter().map(|n| n.integer().map(Scalar::from)).collect::<Result<Vec<_>>>()?;
        Ok(CliffordContext::new(q)?.with_guard(guard))
    }

    pub fn element(&self, ctx: &Arc<CliffordContext>) -> Result<CliffordElement> {
        let mut out = CliffordElement::zero(ctx);
        for t in &self.terms {
            let coeff = match (&t.coeff, self.d) {
                (Entry::Plain(n), _) => Scalar::from(n.rational()?),
                (Entry::Pair([a, b]), Some(d)) => Scalar::quadratic(a.rational()?, b.rational()?, d)?,
                (Entry::Pair(_), None) => return Err(Error::Invalid("pair coefficients need \"D\"".into())),
            };
            out = out.add(&CliffordElement::monomial(ctx, &t.subset, coeff)?)?;
        }
        Ok(out)
    }

    pub fn from_element(x: &CliffordElement) -> Self {
        let ctx = x.context();
        let q = ctx.q().iter().map(|s| Num::Str(s.to_string())).collect();
        let d = match x.mode() {
            Ok(ScalarMode::ExactQuadratic(d)) => Some(d),
            _ => None,
        };
        let terms =
            x.terms().map(|(mask, c)| TermDoc { subset: mask_to_subset(mask), coeff: scalar_entry(c, 40) }).collect();
        CliffordDoc { q, d, terms }
    }
}

/// Full torus data, matrices row-major in rational strings.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TorusDoc {
    pub lattice_rank: usize,
    pub complex_dim: usize,
    pub alpha_sign: i8,
    pub verified: bool,
    pub polarization_type: Vec<String>,
    pub complex_structure: Vec<Vec<String>>,
    pub polarization: Vec<Vec<String>>,
}

impl TorusDoc {
    pub fn new(t: &PolarizedTorus) -> Result<Self> {
        Ok(TorusDoc {
            lattice_rank: t.lattice_rank,
            complex_dim: t.complex_dim(),
            alpha_sign: t.alpha_sign,
            verified: t.verified,
            polarization_type: strings(&polarization_type(&t.polarization)?),
            complex_structure: scalar_matrix_strings(&t.complex_structure),
            polarization: matrix_strings(&t.polarization),
        })
    }
}

/// `{"rank": r, "gram": ..., "generators": [...], "pic_basis": [...]}`.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct SetupDoc {
    pub rank: usize,
    pub gram: Vec<Vec<Num>>,
    #[serde(default)]
    pub generators: Vec<Vec<Vec<Num>>>,
    #[serde(default)]
    pub pic_basis: Vec<Vec<Num>>,
}

impl SetupDoc {
    pub fn module(&self, closure_bound: usize) -> Result<GaloisModule> {
        let gram = int_matrix(&self.gram, self.rank)?;
        if gram.nrows() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: gram.nrows() });
        }
        let gens = self.generators.iter().map(|g| int_matrix(g, self.rank)).collect::<Result<Vec<_>>>()?;
        GaloisModule::with_bound(self.rank, gens, Some(gram), closure_bound)
    }

    pub fn setup(&self, closure_bound: usize) -> Result<BrauerSetup> {
        BrauerSetup::new(self.module(closure_bound)?, int_matrix(&self.pic_basis, self.rank)?)
    }

    /// U(-1) with the swap action and Picard lattice spanned by `(1, 1)`.
    pub fn u_swap() -> Self {
        let m = |rows: &[[i64; 2]]| {
            rows.iter().map(|r| r.iter().map(|&x| Num::Int(x)).collect()).collect::<Vec<Vec<Num>>>()
        };
        SetupDoc {
            rank: 2,
            gram: m(&[[0, -1], [-1, 0]]),
            generators: vec![m(&[[0, 1], [1, 0]])],
            pic_basis: m(&[[1, 1]]),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_numbers() {
        let doc: PeriodDoc =
            serde_json::from_str(r#"{"q": [-1, "-1", 1], "f1": [["0", 1], 0, 1], "f2": [0, 1, 0], "D": 2}"#).unwrap();
        let p = doc.period(13).unwrap();
        assert!(p.is_exact());
        assert_eq!(p.f1()[0].to_string(), "0+1*sqrt(2)");
    }

    #[test]
    fn rejects_pairs_outside_quadratic_mode() {
        let doc: PeriodDoc = serde_json::from_str(r#"{"q": [-1, -1], "f1": [[0, 1], 0], "f2": [0, 1]}"#).unwrap();
        assert!(doc.period(13).is_err());
    }

    #[test]
    fn clifford_round_trip() {
        let doc: CliffordDoc = serde_json::from_str(
            r#"{"q": [-1, -1, 2], "D": 5, "terms": [{"subset": [1, 2], "coeff": "1/2"}, {"subset": [2, 3], "coeff": [1, "-3"]}]}"#,
        )
        .unwrap();
        let ctx = doc.context(13).unwrap();
        let x = doc.element(&ctx).unwrap();
        let back = CliffordDoc::from_element(&x);
        assert_eq!(back.element(&back.context(13).unwrap()).unwrap().terms().count(), 2);
        assert_eq!(back.d, Some(5));
    }

    #[test]
    fn setup_round_trip() {
        let s = SetupDoc::u_swap();
        let text = serde_json::to_string(&s).unwrap();
        let back: SetupDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.setup(100).unwrap().delta(), BigInt::from(2));
    }
}
