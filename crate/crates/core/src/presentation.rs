//! Presentations of the base algebra and of trimmed graded double Ore
//! extensions over it, plus the JSON input format.
//!
//! Only trimmed extensions are representable: there is no slot for a
//! derivation or a tail map, and the parser rejects documents that carry one.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::poly::NcPolynomial;
use crate::scalar::{Field, Scalar};
use crate::word::Word;

/// Generator indices: x1, x2 for the base, y1, y2 for the extension step.
pub const X1: u8 = 0;
pub const X2: u8 = 1;
pub const Y1: u8 = 2;
pub const Y2: u8 = 3;

pub const GENERATOR_NAMES: [&str; 4] = ["x1", "x2", "y1", "y2"];

/// A graded algebra given by generators in degree 1 and homogeneous relations.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub names: Vec<String>,
    pub relations: Vec<NcPolynomial>,
    pub field: Field,
}

impl Presentation {
    pub fn n_generators(&self) -> usize {
        self.names.len()
    }
}

/// Base algebra data: x2*x1 = q12 x1*x2 + q11 x1^2, with q12 invertible.
#[derive(Debug, Clone)]
pub struct BaseData {
    q12: Scalar,
    q11: Scalar,
}

impl BaseData {
    pub fn new(q12: Scalar, q11: Scalar) -> Result<BaseData> {
        if q12.is_zero() {
            return Err(Error::ZeroParameter { name: "q12" });
        }
        Ok(BaseData { q12, q11 })
    }

    pub fn q12(&self) -> &Scalar {
        &self.q12
    }

    pub fn q11(&self) -> &Scalar {
        &self.q11
    }

    pub fn field(&self) -> Field {
        self.q12.field()
    }
}

/// Data of a trimmed graded double Ore extension of the base:
/// the y-relation coefficients (p12 invertible) and the multiplication map
/// coefficients `sigma[i][j][s][t]`, all indices zero-based, meaning
/// sigma_{i+1,j+1}(x_{s+1}) has x_{t+1}-coefficient `sigma[i][j][s][t]`.
#[derive(Debug, Clone)]
pub struct DEData {
    base: BaseData,
    p12: Scalar,
    p11: Scalar,
    sigma: [[[[Scalar; 2]; 2]; 2]; 2],
}

impl DEData {
    pub fn new(
        base: BaseData,
        p12: Scalar,
        p11: Scalar,
        sigma: [[[[Scalar; 2]; 2]; 2]; 2],
    ) -> Result<DEData> {
        if p12.is_zero() {
            return Err(Error::ZeroParameter { name: "p12" });
        }
        Ok(DEData {
            base,
            p12,
            p11,
            sigma,
        })
    }

    pub fn base(&self) -> &BaseData {
        &self.base
    }

    pub fn p12(&self) -> &Scalar {
        &self.p12
    }

    pub fn p11(&self) -> &Scalar {
        &self.p11
    }

    pub fn sigma(&self, i: usize, j: usize, s: usize, t: usize) -> &Scalar {
        &self.sigma[i][j][s][t]
    }

    pub fn field(&self) -> Field {
        self.p12.field()
    }
}

/// The one-parameter family at q = -1: base relations with q12 = -1,
/// y-relations with p12 = -1, and the multiplication map determined by alpha.
pub fn family_k(alpha: &Scalar) -> Result<DEData> {
    if alpha.is_zero() {
        return Err(Error::ZeroParameter { name: "alpha" });
    }
    let f = alpha.field();
    let zero = || f.zero();
    let one = || f.one();
    let mut sigma = [
        [
            [[zero(), zero()], [zero(), zero()]],
            [[zero(), zero()], [zero(), zero()]],
        ],
        [
            [[zero(), zero()], [zero(), zero()]],
            [[zero(), zero()], [zero(), zero()]],
        ],
    ];
    // sigma_11: x1 -> x1, x2 -> 0.  sigma_12: x2 -> x2.
    // sigma_21: x2 -> alpha x2.  sigma_22: x1 -> x1, x2 -> 0.
    sigma[0][0][0][0] = one();
    sigma[0][1][1][1] = one();
    sigma[1][0][1][1] = alpha.clone();
    sigma[1][1][0][0] = one();
    let base = BaseData::new(f.from_i64(-1), zero())?;
    DEData::new(base, f.from_i64(-1), zero(), sigma)
}

/// Presentation of the base on x1, x2.
pub fn build_base_algebra(data: &BaseData) -> Presentation {
    let f = data.field();
    // x2*x1 - q12 x1*x2 - q11 x1^2
    let rel = NcPolynomial::from_terms([
        (Word::from_letters(&[X2, X1]), f.one()),
        (Word::from_letters(&[X1, X2]), -data.q12()),
        (Word::from_letters(&[X1, X1]), -data.q11()),
    ]);
    Presentation {
        names: vec!["x1".into(), "x2".into()],
        relations: vec![rel],
        field: f,
    }
}

/// Presentation of the extension on x1, x2, y1, y2: the base relation, the
/// y-relation, and the four mixing relations
/// y_i x_s = sum_t sigma[i][j][s][t] x_t y_j (j summed over both values).
pub fn build_double_extension(data: &DEData) -> Presentation {
    let f = data.field();
    let mut relations = Vec::with_capacity(6);
    relations.extend(build_base_algebra(data.base()).relations);
    // y2*y1 - p12 y1*y2 - p11 y1^2
    relations.push(NcPolynomial::from_terms([
        (Word::from_letters(&[Y2, Y1]), f.one()),
        (Word::from_letters(&[Y1, Y2]), -data.p12()),
        (Word::from_letters(&[Y1, Y1]), -data.p11()),
    ]));
    for i in 0..2 {
        for s in 0..2 {
            let y = Y1 + i as u8;
            let x = X1 + s as u8;
            let mut rel = NcPolynomial::monomial(Word::from_letters(&[y, x]), f.one());
            for j in 0..2 {
                for t in 0..2 {
                    rel.add_assign_term(
                        Word::from_letters(&[X1 + t as u8, Y1 + j as u8]),
                        -data.sigma(i, j, s, t),
                    );
                }
            }
            relations.push(rel);
        }
    }
    Presentation {
        names: GENERATOR_NAMES.iter().map(|s| s.to_string()).collect(),
        relations,
        field: f,
    }
}

/// The multiplication map assembled as a 4x4 matrix over the base generators:
/// row index 2i+s, column index 2j+t holds sigma[i][j][s][t].
#[derive(Debug, Clone)]
pub struct SigmaMatrix {
    pub entries: Vec<Vec<Scalar>>,
    pub det: Scalar,
}

pub fn sigma_matrix(data: &DEData) -> SigmaMatrix {
    let mut entries = vec![vec![data.field().zero(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for s in 0..2 {
                for t in 0..2 {
                    entries[2 * i + s][2 * j + t] = data.sigma(i, j, s, t).clone();
                }
            }
        }
    }
    let det = crate::linalg::determinant(data.field(), &entries);
    SigmaMatrix { entries, det }
}

/// Outcome of testing one candidate adjunction order.
#[derive(Debug, Clone)]
pub enum OreVerdict {
    Eligible,
    /// `witness` names the coefficient that obstructs the order and `value`
    /// is its (nonzero) value.
    Blocked { witness: String, value: Scalar },
}

impl OreVerdict {
    pub fn is_eligible(&self) -> bool {
        matches!(self, OreVerdict::Eligible)
    }
}

/// Whether the two-step extension splits into two iterated single extensions,
/// one verdict per adjunction order, plus the invertibility of the diagonal
/// blocks of the multiplication map (an informational note: blocked verdicts
/// do not depend on it).
#[derive(Debug, Clone)]
pub struct OreCheckReport {
    pub order_y1_then_y2: OreVerdict,
    pub order_y2_then_y1: OreVerdict,
    pub sigma11_invertible: bool,
    pub sigma22_invertible: bool,
}

fn block_witness(data: &DEData, i: usize, j: usize) -> Option<(String, Scalar)> {
    for s in 0..2 {
        for t in 0..2 {
            let a = data.sigma(i, j, s, t);
            if !a.is_zero() {
                return Some((
                    format!("sigma{}{}(x{}) has x{} coefficient", i + 1, j + 1, s + 1, t + 1),
                    a.clone(),
                ));
            }
        }
    }
    None
}

fn diagonal_invertible(data: &DEData, i: usize) -> bool {
    let m = vec![
        vec![data.sigma(i, i, 0, 0).clone(), data.sigma(i, i, 0, 1).clone()],
        vec![data.sigma(i, i, 1, 0).clone(), data.sigma(i, i, 1, 1).clone()],
    ];
    !crate::linalg::determinant(data.field(), &m).is_zero()
}

/// Adjoining y1 first needs sigma_12 = 0; adjoining y2 first needs
/// sigma_21 = 0 and additionally p11 = 0 so that the y-relation can be read
/// as a skew-commutation rule for y1 over the intermediate ring.
pub fn iterated_ore_check(data: &DEData) -> OreCheckReport {
    let order_y1_then_y2 = match block_witness(data, 0, 1) {
        Some((witness, value)) => OreVerdict::Blocked { witness, value },
        None => OreVerdict::Eligible,
    };
    let order_y2_then_y1 = match block_witness(data, 1, 0) {
        Some((witness, value)) => OreVerdict::Blocked { witness, value },
        None => {
            if data.p11().is_zero() {
                OreVerdict::Eligible
            } else {
                OreVerdict::Blocked {
                    witness: "p11".to_string(),
                    value: data.p11().clone(),
                }
            }
        }
    };
    OreCheckReport {
        order_y1_then_y2,
        order_y2_then_y1,
        sigma11_invertible: diagonal_invertible(data, 0),
        sigma22_invertible: diagonal_invertible(data, 1),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawField {
    Name(String),
    Modulus { prime: u64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBase {
    q12: String,
    q11: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawP {
    p12: String,
    p11: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    field: Option<RawField>,
    base: Option<RawBase>,
    #[serde(rename = "P")]
    p: Option<RawP>,
    sigma: Option<Vec<Vec<Vec<Vec<String>>>>>,
    family: Option<String>,
    alpha: Option<String>,
    // Present only to be rejected with a useful message.
    delta: Option<serde_json::Value>,
    tau: Option<serde_json::Value>,
}

fn parse_scalar(field: Field, s: &str, path: String) -> Result<Scalar> {
    field.parse(s).map_err(|e| Error::Parse {
        path,
        message: e.to_string(),
    })
}

/// Parses a JSON input document into DE-data. The document either gives the
/// full data (`base`, `P`, `sigma`) or selects a named family (`family` plus
/// its parameters); `field` defaults to the rationals.
pub fn parse_presentation(doc: &str) -> Result<DEData> {
    let raw: RawInput = serde_json::from_str(doc).map_err(|e| Error::Parse {
        path: "<document>".to_string(),
        message: e.to_string(),
    })?;
    if raw.delta.is_some() {
        return Err(Error::OutOfScope { key: "delta".into() });
    }
    if raw.tau.is_some() {
        return Err(Error::OutOfScope { key: "tau".into() });
    }
    let field = match raw.field {
        None => Field::Rational,
        Some(RawField::Name(s)) if s == "rational" => Field::Rational,
        Some(RawField::Name(s)) => {
            return Err(Error::Parse {
                path: "field".into(),
                message: format!("unknown field `{s}`"),
            })
        }
        Some(RawField::Modulus { prime }) => Field::prime(prime)?,
    };

    if let Some(family) = &raw.family {
        if raw.base.is_some() || raw.p.is_some() || raw.sigma.is_some() {
            return Err(Error::Parse {
                path: "family".into(),
                message: "family shortcut and explicit extension data are mutually exclusive"
                    .into(),
            });
        }
        if family != "K" {
            return Err(Error::Parse {
                path: "family".into(),
                message: format!("unknown family `{family}` (supported: K)"),
            });
        }
        let alpha_str = raw.alpha.as_deref().ok_or_else(|| Error::Parse {
            path: "alpha".into(),
            message: "missing (required by family K)".into(),
        })?;
        let alpha = parse_scalar(field, alpha_str, "alpha".into())?;
        if alpha.is_zero() {
            return Err(Error::Parse {
                path: "alpha".into(),
                message: "must be nonzero".into(),
            });
        }
        return family_k(&alpha);
    }
    if raw.alpha.is_some() {
        return Err(Error::Parse {
            path: "alpha".into(),
            message: "only meaningful together with `family`".into(),
        });
    }

    let missing = |path: &str| Error::Parse {
        path: path.into(),
        message: "missing".into(),
    };
    let rb = raw.base.ok_or_else(|| missing("base"))?;
    let rp = raw.p.ok_or_else(|| missing("P"))?;
    let rs = raw.sigma.ok_or_else(|| missing("sigma"))?;

    let q12 = parse_scalar(field, &rb.q12, "base.q12".into())?;
    if q12.is_zero() {
        return Err(Error::Parse {
            path: "base.q12".into(),
            message: "must be nonzero".into(),
        });
    }
    let q11 = parse_scalar(field, &rb.q11, "base.q11".into())?;
    let p12 = parse_scalar(field, &rp.p12, "P.p12".into())?;
    if p12.is_zero() {
        return Err(Error::Parse {
            path: "P.p12".into(),
            message: "must be nonzero".into(),
        });
    }
    let p11 = parse_scalar(field, &rp.p11, "P.p11".into())?;

    let shape_err = |path: String| Error::Parse {
        path,
        message: "sigma must be a 2x2x2x2 array of scalars".into(),
    };
    if rs.len() != 2 {
        return Err(shape_err("sigma".into()));
    }
    let mut sigma = [
        [
            [[field.zero(), field.zero()], [field.zero(), field.zero()]],
            [[field.zero(), field.zero()], [field.zero(), field.zero()]],
        ],
        [
            [[field.zero(), field.zero()], [field.zero(), field.zero()]],
            [[field.zero(), field.zero()], [field.zero(), field.zero()]],
        ],
    ];
    for (i, level_i) in rs.iter().enumerate() {
        if level_i.len() != 2 {
            return Err(shape_err(format!("sigma[{i}]")));
        }
        for (j, level_j) in level_i.iter().enumerate() {
            if level_j.len() != 2 {
                return Err(shape_err(format!("sigma[{i}][{j}]")));
            }
            for (s, level_s) in level_j.iter().enumerate() {
                if level_s.len() != 2 {
                    return Err(shape_err(format!("sigma[{i}][{j}][{s}]")));
                }
                for (t, entry) in level_s.iter().enumerate() {
                    sigma[i][j][s][t] =
                        parse_scalar(field, entry, format!("sigma[{i}][{j}][{s}][{t}]"))?;
                }
            }
        }
    }

    let base = BaseData::new(q12, q11)?;
    DEData::new(base, p12, p11, sigma)
}
