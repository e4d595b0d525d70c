//! JSON shapes for problem instances and reports.
//!
//! Scalars are `[a, b]` meaning `a + bω`; matrices are row-major arrays of
//! scalars; polynomials are coefficient arrays, lowest degree first.

use clforms::blocks::Descent;
use clforms::orbit::{OrbitReport, PairReport, Point};
use clforms::verify::SuiteResult;
use clforms::witness::WitnessReport;
use clforms::{Decomposition, Error, Field, FormSpace, GroupKind, Matrix, Poly, Result, Scalar, TwistedElement};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

pub type ScalarDto = [i64; 2];
pub type VectorDto = Vec<ScalarDto>;
pub type MatrixDto = Vec<Vec<ScalarDto>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDto {
    pub p: u32,
    pub deg: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpaceDto {
    pub field: FieldDto,
    pub kind: String,
    pub group: String,
    pub gram: MatrixDto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemInstance {
    pub schema_version: u32,
    pub name: String,
    pub space: FormSpaceDto,
    pub operator: MatrixDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<VectorDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<VectorDto>,
}

/// A parsed and validated instance.
pub struct Loaded {
    pub space: FormSpace,
    pub operator: Matrix,
    pub vector: Option<Vec<Scalar>>,
    pub poly: Option<Poly>,
}

pub fn field_dto(k: Field) -> FieldDto {
    FieldDto { p: k.p(), deg: k.deg() }
}

pub fn scalar_dto(x: Scalar) -> ScalarDto {
    let (a, b) = x.coords();
    [a as i64, b as i64]
}

pub fn vector_dto(v: &[Scalar]) -> VectorDto {
    v.iter().map(|&x| scalar_dto(x)).collect()
}

pub fn matrix_dto(m: &Matrix) -> MatrixDto {
    m.to_rows().iter().map(|r| vector_dto(r)).collect()
}

pub fn poly_dto(f: &Poly) -> VectorDto {
    vector_dto(f.coeffs())
}

pub fn space_dto(s: &FormSpace) -> FormSpaceDto {
    FormSpaceDto {
        field: field_dto(s.field()),
        kind: s.kind().name().to_string(),
        group: s.group().name().to_string(),
        gram: matrix_dto(s.gram()),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidForm(msg.into())
}

pub fn parse_field(d: FieldDto) -> Result<Field> {
    Field::new(d.p, d.deg)
}

pub fn parse_scalar(k: Field, [a, b]: ScalarDto) -> Result<Scalar> {
    if k.deg() == 1 && b.rem_euclid(k.p() as i64) != 0 {
        return Err(bad(format!("scalar [{a}, {b}] has an ω-part over a prime field")));
    }
    Ok(k.elem(a, b))
}

pub fn parse_vector(k: Field, v: &[ScalarDto]) -> Result<Vec<Scalar>> {
    v.iter().map(|&x| parse_scalar(k, x)).collect()
}

pub fn parse_matrix(k: Field, m: &MatrixDto) -> Result<Matrix> {
    let cols = m.first().map_or(0, |r| r.len());
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension("matrix rows have different lengths".into()));
    }
    let rows = m.iter().map(|r| parse_vector(k, r)).collect::<Result<Vec<_>>>()?;
    Ok(if rows.is_empty() { Matrix::zeros(k, 0, 0) } else { Matrix::from_rows(k, &rows) })
}

pub fn parse_space(d: &FormSpaceDto) -> Result<FormSpace> {
    let k = parse_field(d.field)?;
    let group: GroupKind = match d.group.as_str() {
        "O" => GroupKind::O,
        "SO" => GroupKind::SO,
        "U" => GroupKind::U,
        "Sp" => GroupKind::Sp,
        g => return Err(bad(format!("unknown group {g:?}"))),
    };
    if group.form_kind().name() != d.kind {
        return Err(bad(format!("group {} needs a {} form, not {:?}", d.group, group.form_kind().name(), d.kind)));
    }
    FormSpace::new(group, parse_matrix(k, &d.gram)?)
}

impl ProblemInstance {
    pub fn new(name: &str, space: &FormSpace, a: &Matrix) -> Self {
        ProblemInstance {
            schema_version: SCHEMA_VERSION,
            name: name.to_string(),
            space: space_dto(space),
            operator: matrix_dto(a),
            vector: None,
            poly: None,
        }
    }

    /// Checks the schema tag, the form, and `A ∈ g(V)`.
    pub fn load(&self) -> Result<Loaded> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(bad(format!("schema version {} (expected {SCHEMA_VERSION})", self.schema_version)));
        }
        let space = parse_space(&self.space)?;
        let k = space.field();
        let operator = parse_matrix(k, &self.operator)?;
        if operator.rows() != space.dim() || operator.cols() != space.dim() {
            return Err(Error::Dimension(format!("operator must be {0}×{0}", space.dim())));
        }
        space.require_lie_algebra(&operator)?;
        let vector = self.vector.as_deref().map(|v| parse_vector(k, v)).transpose()?;
        if vector.as_ref().is_some_and(|v| v.len() != space.dim()) {
            return Err(Error::Dimension("vector length differs from the dimension".into()));
        }
        let poly = self.poly.as_deref().map(|c| parse_vector(k, c).map(|c| Poly::new(k, c))).transpose()?;
        Ok(Loaded { space, operator, vector, poly })
    }

    pub fn digest(&self) -> String {
        digest(self)
    }
}

/// SHA-256 of the canonical JSON encoding.
pub fn digest<T: Serialize>(x: &T) -> String {
    let bytes = serde_json::to_vec(x).expect("serializable");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: u32,
    pub command: String,
    pub instance_digest: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub header: Option<String>,
    pub result: T,
}

#[derive(Serialize)]
pub struct BlockDto {
    pub variant: String,
    pub f: VectorDto,
    pub d: usize,
    pub basis: Vec<VectorDto>,
    pub gram: MatrixDto,
}

#[derive(Serialize)]
pub struct VectorChecks {
    pub in_r: bool,
    pub in_q: bool,
}

#[derive(Serialize)]
pub struct DecompositionDto {
    pub blocks: Vec<BlockDto>,
    pub change_of_basis: MatrixDto,
    /// Membership of the instance's vector, when it has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<VectorChecks>,
}

impl From<&Decomposition> for DecompositionDto {
    fn from(d: &Decomposition) -> Self {
        DecompositionDto {
            blocks: d
                .blocks
                .iter()
                .map(|b| BlockDto {
                    variant: b.variant.name().to_string(),
                    f: poly_dto(&b.f),
                    d: b.d,
                    basis: b.basis.iter().map(|v| vector_dto(v)).collect(),
                    gram: matrix_dto(&b.gram),
                })
                .collect(),
            change_of_basis: matrix_dto(&d.change_of_basis),
            vector: None,
        }
    }
}

#[derive(Serialize)]
pub struct TwistedDto {
    pub matrix: MatrixDto,
    pub delta: i8,
    pub conj: bool,
}

impl From<&TwistedElement> for TwistedDto {
    fn from(t: &TwistedElement) -> Self {
        TwistedDto { matrix: matrix_dto(&t.matrix), delta: t.delta, conj: t.conj }
    }
}

#[derive(Serialize)]
pub struct WitnessDto {
    pub matrix: MatrixDto,
    pub delta: i8,
    pub conj: bool,
    pub det: ScalarDto,
    pub per_block_det: Vec<ScalarDto>,
    pub reverses_operator: bool,
    pub twisting_law: bool,
    pub determinant: bool,
}

impl From<&WitnessReport> for WitnessDto {
    fn from(w: &WitnessReport) -> Self {
        WitnessDto {
            matrix: matrix_dto(&w.element.matrix),
            delta: w.element.delta,
            conj: w.element.conj,
            det: scalar_dto(w.element.det()),
            per_block_det: w.per_block.iter().map(|b| scalar_dto(b.det)).collect(),
            reverses_operator: w.checks.reverses_operator,
            twisting_law: w.checks.twisting_law,
            determinant: w.checks.determinant,
        }
    }
}

#[derive(Serialize)]
pub struct DescentDto {
    pub factor: VectorDto,
    pub ext_field: FieldDto,
    pub tau: ScalarDto,
    pub ext_basis: Vec<VectorDto>,
    pub hermitian: FormSpaceDto,
}

impl From<&Descent> for DescentDto {
    fn from(d: &Descent) -> Self {
        DescentDto {
            factor: poly_dto(&d.factor),
            ext_field: field_dto(d.ext),
            tau: scalar_dto(d.tau),
            ext_basis: d.ext_basis.iter().map(|v| vector_dto(v)).collect(),
            hermitian: space_dto(&d.hermitian),
        }
    }
}

#[derive(Serialize)]
pub struct PointDto {
    pub a: MatrixDto,
    pub v: VectorDto,
}

impl From<&Point> for PointDto {
    fn from(p: &Point) -> Self {
        PointDto { a: matrix_dto(&p.a), v: vector_dto(&p.v) }
    }
}

#[derive(Serialize)]
pub struct OrbitDto {
    pub size: usize,
    pub representative: PointDto,
    pub twisted_stable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TwistedDto>,
}

#[derive(Serialize)]
pub struct OrbitReportDto {
    pub space: String,
    pub points: usize,
    pub group_order: usize,
    pub all_stable: bool,
    pub orbits: Vec<OrbitDto>,
}

impl From<&OrbitReport> for OrbitReportDto {
    fn from(r: &OrbitReport) -> Self {
        OrbitReportDto {
            space: r.space.name().to_string(),
            points: r.points,
            group_order: r.group_order,
            all_stable: r.orbits.iter().all(|o| o.twisted_stable),
            orbits: r
                .orbits
                .iter()
                .map(|o| OrbitDto {
                    size: o.size,
                    representative: (&o.representative).into(),
                    twisted_stable: o.twisted_stable,
                    witness: o.witness.as_ref().map(Into::into),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct PairOrbitDto {
    pub size: usize,
    pub representative: MatrixDto,
    pub sigma_stable: bool,
}

#[derive(Serialize)]
pub struct PairReportDto {
    pub small: FormSpaceDto,
    pub big: FormSpaceDto,
    pub sigma: TwistedDto,
    pub small_order: usize,
    pub big_order: usize,
    pub all_stable: bool,
    pub orbits: Vec<PairOrbitDto>,
}

impl From<&PairReport> for PairReportDto {
    fn from(r: &PairReport) -> Self {
        PairReportDto {
            small: space_dto(&r.small),
            big: space_dto(&r.big),
            sigma: (&r.sigma).into(),
            small_order: r.small_order,
            big_order: r.big_order,
            all_stable: r.all_stable(),
            orbits: r
                .orbits
                .iter()
                .map(|o| PairOrbitDto {
                    size: o.size,
                    representative: matrix_dto(&o.representative),
                    sigma_stable: o.sigma_stable,
                })
                .collect(),
        }
    }
}

/// Suite results with failures ordered by the digest of their input.
pub fn sorted_suite(mut r: SuiteResult) -> SuiteResult {
    r.failures.sort_by_cached_key(|f| digest(&f.input));
    r
}
