//! Randomised and exhaustive property sweeps, shared by the CLI and the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blocks::{block_support_space, classify, BlockVariant};
use crate::canonical::char_poly;
use crate::cayley::{cayley, cayley_inv, has_eigenvalue, sign_available, CayleySign};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{Field, Scalar};
use crate::form::{FormKind, FormSpace, GroupKind};
use crate::identities::{
    block_support, coefficient_identities, in_r, mu, nu, perturbation_verdict, rho, rho_admissible, rho_inverse,
    BracketImage,
};
use crate::matrix::{is_zero_vector, Matrix, Vector};
use crate::orbit::{enumerate_group, Budget};
use crate::poly::Poly;
use crate::sample::{self, Sampler};
use crate::witness::witness_global;

/// Exhaustive sweeps run only up to this many instances.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Perturbation,
    Qr,
    Cayley,
    Delta,
    Rho,
    Coeffs,
    Blocks,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Perturbation, Suite::Qr, Suite::Cayley, Suite::Delta, Suite::Rho, Suite::Coeffs, Suite::Blocks];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Perturbation => "perturbation",
            Suite::Qr => "qr",
            Suite::Cayley => "cayley",
            Suite::Delta => "delta",
            Suite::Rho => "rho",
            Suite::Coeffs => "coeffs",
            Suite::Blocks => "blocks",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

impl Failure {
    fn new(input: impl Into<String>, expected: impl Into<String>, got: impl Into<String>) -> Self {
        Failure { input: input.into(), expected: expected.into(), got: got.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub instances: usize,
    pub failures: Vec<Failure>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn collect(suite: &str, per_instance: Vec<(usize, Vec<Failure>)>) -> Self {
        let instances = per_instance.iter().map(|(c, _)| c).sum();
        let failures = per_instance.into_iter().flat_map(|(_, f)| f).collect();
        SuiteResult { suite: suite.to_string(), instances, failures }
    }

    pub fn merge(mut self, other: SuiteResult) -> SuiteResult {
        self.instances += other.instances;
        self.failures.extend(other.failures);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub field: Field,
    pub group: GroupKind,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl SuiteConfig {
    pub fn space(&self) -> Result<FormSpace> {
        FormSpace::standard(self.group, self.field, self.dim)
    }
}

/// Independent stream per instance, so results do not depend on scheduling.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteResult> {
    match suite {
        Suite::Perturbation => perturbation_suite(cfg),
        Suite::Qr => qr_suite(cfg),
        Suite::Cayley => cayley_suite(cfg, 100),
        Suite::Delta => delta_suite(cfg),
        Suite::Rho => rho_suite(cfg, 100),
        Suite::Coeffs => coeffs_suite(cfg),
        Suite::Blocks => Ok(classification_suite(cfg)?.merge(witness_suite(cfg)?).merge(support_suite(cfg)?)),
    }
    .map(|mut r| {
        r.suite = suite.name().to_string();
        r
    })
}

fn digits(field: Field, mut idx: u64, count: usize) -> Vec<Scalar> {
    let q = field.order();
    (0..count)
        .map(|_| {
            let x = field.from_index(idx % q);
            idx /= q;
            x
        })
        .collect()
}

fn prime_combination(basis: &[Matrix], field: Field, mut idx: u64) -> Matrix {
    let p = field.p() as u64;
    let n = basis.first().map(|b| b.rows()).unwrap_or(0);
    basis.iter().fold(Matrix::zeros(field, n, n), |acc, b| {
        let c = field.int((idx % p) as i64);
        idx /= p;
        &acc + &b.scale(c)
    })
}

/// `(A, v, φ)` over `gl_n`; exhaustive when small enough, else `trials` samples.
pub fn perturbation_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let k = cfg.field;
    let n = cfg.dim;
    let total = k.order().checked_pow((n * n + 2 * n) as u32).unwrap_or(u64::MAX);
    let exhaustive = total <= EXHAUSTIVE_LIMIT;
    let count = if exhaustive { total as usize } else { cfg.trials };
    let results = cfg.exec.map_range(count, |i| {
        let entries = if exhaustive {
            digits(k, i as u64, n * n + 2 * n)
        } else {
            let mut rng = instance_rng(cfg.seed, i as u64);
            (0..n * n + 2 * n).map(|_| sample::scalar(k, &mut rng)).collect()
        };
        let a = Matrix::from_fn(k, n, n, |r, c| entries[r * n + c]);
        let v = &entries[n * n..n * n + n];
        let phi = &entries[n * n + n..];
        let fails = match perturbation_verdict(&a, v, phi) {
            Ok(verdict) if verdict.consistent() => vec![],
            Ok(verdict) => vec![Failure::new(
                format!("A={a:?} v={v:?} phi={phi:?}"),
                "conditions 1, 2 and 4 agree and imply 3",
                format!("{verdict:?}"),
            )],
            Err(e) => vec![Failure::new(format!("A={a:?}"), "verdict", e.to_string())],
        };
        (1, fails)
    });
    Ok(SuiteResult::collect("perturbation", results))
}

/// For `o` the trace identity only gives `<A^k v, v> = 0` for `k ≥ 1`; the
/// `k = 0` term follows when `A` is invertible, which covers every primary
/// characteristic polynomial other than `x^n`.
fn qr_check(space: &FormSpace, a: &Matrix, image: &BracketImage, v: &[Scalar]) -> Result<Option<Failure>> {
    if !image.in_q(v) {
        return Ok(None);
    }
    let n = space.dim();
    if space.kind() == FormKind::Symmetric {
        let mut w = a.mul_vec(v);
        for k in 1..n.max(1) {
            if !space.pair(&w, v).is_zero() {
                return Ok(Some(Failure::new(
                    format!("A={a:?} v={v:?}"),
                    format!("<A^{k}v,v> = 0"),
                    "nonzero",
                )));
            }
            w = a.mul_vec(&w);
        }
        if a.det().is_zero() {
            return Ok(None);
        }
    }
    Ok((!in_r(space, a, v)).then(|| Failure::new(format!("A={a:?} v={v:?}"), "in_Q implies in_R", "not in R")))
}

/// `Q_A ⊆ R_A`, exhaustive over `g × V` when small, plus `trials` random pairs.
pub fn qr_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let space = cfg.space()?;
    let k = space.field();
    let n = space.dim();
    let basis = space.lie_algebra_basis();
    let lie_size = (k.p() as u64).checked_pow(basis.len() as u32).unwrap_or(u64::MAX);
    let v_size = k.order().pow(n as u32);
    let mut results = Vec::new();
    if lie_size.saturating_mul(v_size) <= EXHAUSTIVE_LIMIT {
        results.extend(cfg.exec.map_range(lie_size as usize, |i| {
            let a = prime_combination(&basis, k, i as u64);
            let image = BracketImage::new(&space, &a);
            let mut fails = Vec::new();
            for j in 0..v_size {
                let v = digits(k, j, n);
                match qr_check(&space, &a, &image, &v) {
                    Ok(None) => {}
                    Ok(Some(f)) => fails.push(f),
                    Err(e) => fails.push(Failure::new(format!("A={a:?}"), "check", e.to_string())),
                }
            }
            (v_size as usize, fails)
        }));
    }
    let sampler = Sampler::new(&space)?;
    results.extend(cfg.exec.map_range(cfg.trials, |i| {
        let mut rng = instance_rng(cfg.seed, i as u64);
        let a = sampler.lie(&mut rng);
        let v = sampler.vector(&mut rng);
        let image = BracketImage::new(&space, &a);
        let fails = match qr_check(&space, &a, &image, &v) {
            Ok(f) => f.into_iter().collect(),
            Err(e) => vec![Failure::new(format!("A={a:?}"), "check", e.to_string())],
        };
        (1, fails)
    }));
    Ok(SuiteResult::collect("qr", results))
}

fn signs(space: &FormSpace) -> Vec<CayleySign> {
    [CayleySign::Plus, CayleySign::Minus].into_iter().filter(|&s| sign_available(space, s)).collect()
}

fn avoided_eigenvalue(sign: CayleySign) -> i64 {
    if sign == CayleySign::Plus { 1 } else { -1 }
}

/// Round trips on all of `G_{(±1)}` when enumerable, random `g₀` round trips
/// and equivariance under `equivariance` random twisted elements.
pub fn cayley_suite(cfg: &SuiteConfig, equivariance: usize) -> Result<SuiteResult> {
    let space = cfg.space()?;
    let mut results = Vec::new();
    if let Ok(en) = enumerate_group(&space, &Budget::default(), cfg.exec) {
        results.extend(cfg.exec.map(&en.elements, |g| {
            let mut fails = Vec::new();
            let mut count = 0;
            for sign in signs(&space) {
                if has_eigenvalue(g, avoided_eigenvalue(sign)) {
                    continue;
                }
                count += 1;
                let ok = cayley(&space, g, sign).and_then(|b| {
                    if !space.in_lie_algebra(&b) || has_eigenvalue(&b, 1) || has_eigenvalue(&b, -1) {
                        return Err(Error::Internal("image is not in g₀".into()));
                    }
                    cayley_inv(&space, &b, sign)
                });
                match ok {
                    Ok(h) if &h == g => {}
                    Ok(h) => fails.push(Failure::new(format!("g={g:?} {sign:?}"), format!("{g:?}"), format!("{h:?}"))),
                    Err(e) => fails.push(Failure::new(format!("g={g:?} {sign:?}"), "round trip", e.to_string())),
                }
            }
            (count, fails)
        }));
    }
    let sampler = Sampler::new(&space)?;
    let g0 = |rng: &mut ChaCha8Rng| {
        (0..64)
            .map(|_| sampler.lie(rng))
            .find(|b| !has_eigenvalue(b, 1) && !has_eigenvalue(b, -1))
            .unwrap_or_else(|| Matrix::zeros(space.field(), space.dim(), space.dim()))
    };
    let signs = signs(&space);
    results.extend(cfg.exec.map_range(cfg.trials, |i| {
        let mut rng = instance_rng(cfg.seed, i as u64);
        let b = g0(&mut rng);
        let sign = signs[rng.gen_range(0..signs.len())];
        let fails = match cayley_inv(&space, &b, sign).and_then(|g| {
            if !space.in_group(&g) || has_eigenvalue(&g, avoided_eigenvalue(sign)) {
                return Err(Error::Internal("image is not in the group chart".into()));
            }
            cayley(&space, &g, sign)
        }) {
            Ok(c) if c == b => vec![],
            Ok(c) => vec![Failure::new(format!("B={b:?} {sign:?}"), format!("{b:?}"), format!("{c:?}"))],
            Err(e) => vec![Failure::new(format!("B={b:?} {sign:?}"), "round trip", e.to_string())],
        };
        (1, fails)
    }));
    results.extend(cfg.exec.map_range(equivariance, |i| {
        let mut rng = instance_rng(cfg.seed ^ 0x5eed, i as u64);
        let delta = if rng.gen_bool(0.5) { 1 } else { -1 };
        let x = sampler.twisted(&mut rng, delta);
        let b = g0(&mut rng);
        let sign = signs[rng.gen_range(0..signs.len())];
        let fails = match (cayley_inv(&space, &b, sign), cayley_inv(&space, &x.act_on_algebra(&b), sign)) {
            (Ok(g), Ok(h)) if h == x.act_on_group(&g) => vec![],
            (Ok(g), Ok(h)) => vec![Failure::new(
                format!("x={x:?} B={b:?}"),
                format!("{:?}", x.act_on_group(&g)),
                format!("{h:?}"),
            )],
            (r1, r2) => vec![Failure::new(format!("x={x:?} B={b:?}"), "both defined", format!("{r1:?} / {r2:?}"))],
        };
        (1, fails)
    }));
    Ok(SuiteResult::collect("cayley", results))
}

/// A random pair `(A, v)` with `v ∈ R_A`, preferring `v ≠ 0`.
pub fn sample_in_r(sampler: &Sampler, rng: &mut ChaCha8Rng) -> (Matrix, Vector) {
    let space = sampler.space();
    let a = sampler.lie(rng);
    let v = (0..64)
        .map(|_| sampler.vector(rng))
        .find(|v| !is_zero_vector(v) && in_r(space, &a, v))
        .unwrap_or_else(|| vec![space.field().zero(); space.dim()]);
    (a, v)
}

fn admissible_lambdas(space: &FormSpace) -> Vec<Scalar> {
    let k = space.field();
    match space.kind() {
        FormKind::Hermitian => k.elements().filter(|l| l.conj() == -*l).collect(),
        FormKind::Symplectic => k.elements().collect(),
        FormKind::Symmetric => k.prime_elements().collect(),
    }
}

/// `ch(A)` is unchanged by `ν_λ` (u, sp) or `μ_λ` (o) on `R`, for every `λ`.
pub fn delta_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let space = cfg.space()?;
    let sampler = Sampler::new(&space)?;
    let lambdas = admissible_lambdas(&space);
    let results = cfg.exec.map_range(cfg.trials, |i| {
        let mut rng = instance_rng(cfg.seed, i as u64);
        let (a, v) = sample_in_r(&sampler, &mut rng);
        let before = char_poly(&a).expect("square");
        let mut fails = Vec::new();
        for &l in &lambdas {
            let moved = match space.kind() {
                FormKind::Symmetric => mu(&space, &a, &v, l),
                _ => nu(&space, &a, &v, l),
            };
            match moved {
                Ok((b, _)) if space.in_lie_algebra(&b) && char_poly(&b).expect("square") == before => {}
                Ok((b, _)) => fails.push(Failure::new(
                    format!("A={a:?} v={v:?} lambda={l:?}"),
                    format!("{before:?} in g"),
                    format!("{:?} in g: {}", char_poly(&b).expect("square"), space.in_lie_algebra(&b)),
                )),
                Err(e) => fails.push(Failure::new(format!("A={a:?} lambda={l:?}"), "defined", e.to_string())),
            }
        }
        (1, fails)
    });
    Ok(SuiteResult::collect("delta", results))
}

/// A random `g` with `gcd(g, f) = 1` and `g* ≡ g mod f`.
pub fn admissible_poly(f: &Poly, rng: &mut impl Rng) -> Option<Poly> {
    let k = f.field();
    let n = f.degree().unwrap_or(0).max(1);
    (0..100).find_map(|_| {
        let h = Poly::new(k, (0..n).map(|_| sample::scalar(k, rng)).collect());
        let g = (&h + &h.star()).rem(f);
        g.gcd(f).is_one().then_some(g)
    })
}

/// `ρ_g` inverts through `g⁻¹ mod f` and commutes with `(T, −1)`.
pub fn rho_suite(cfg: &SuiteConfig, polys_per_instance: usize) -> Result<SuiteResult> {
    let space = cfg.space()?;
    let sampler = Sampler::new(&space)?;
    let results = cfg.exec.map_range(cfg.trials, |i| {
        let mut rng = instance_rng(cfg.seed, i as u64);
        let (a, v) = sample_in_r(&sampler, &mut rng);
        let f = char_poly(&a).expect("square");
        let x = sampler.twisted(&mut rng, -1);
        let xa = x.act_on_algebra(&a);
        let xv = x.act_on_vector(&v);
        let mut fails = Vec::new();
        let mut count = 0;
        for _ in 0..polys_per_instance {
            let Some(g) = admissible_poly(&f, &mut rng) else { continue };
            count += 1;
            let input = || format!("A={a:?} v={v:?} g={g:?}");
            let check = (|| -> Result<Option<String>> {
                rho_admissible(&a, &g)?;
                let (_, w) = rho(&a, &v, &g)?;
                let (_, back) = rho(&a, &w, &rho_inverse(&a, &g)?)?;
                if back != v {
                    return Ok(Some(format!("inverse gave {back:?}")));
                }
                let (_, lhs) = rho(&xa, &xv, &g)?;
                let rhs = x.act_on_vector(&w);
                Ok((lhs != rhs).then(|| format!("equivariance: {lhs:?} vs {rhs:?}")))
            })();
            match check {
                Ok(None) => {}
                Ok(Some(got)) => fails.push(Failure::new(input(), "bijective and equivariant", got)),
                Err(e) => fails.push(Failure::new(input(), "admissible", e.to_string())),
            }
        }
        (count, fails)
    });
    Ok(SuiteResult::collect("rho", results))
}

/// The λ-corrected `c₁`, `c₂` formulas, for every `λ`.
pub fn coeffs_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    if cfg.group != GroupKind::Sp {
        return Err(Error::Precondition("the coefficient identities are stated for sp".into()));
    }
    let space = cfg.space()?;
    let sampler = Sampler::new(&space)?;
    let k = space.field();
    let results = cfg.exec.map_range(cfg.trials, |i| {
        let mut rng = instance_rng(cfg.seed, i as u64);
        let a = sampler.lie(&mut rng);
        let v = sampler.vector(&mut rng);
        let fails = k
            .elements()
            .filter_map(|l| match coefficient_identities(&space, &a, &v, l) {
                Ok(r) if r.holds() => None,
                Ok(r) => Some(Failure::new(format!("A={a:?} v={v:?} lambda={l:?}"), "identities", format!("{r:?}"))),
                Err(e) => Some(Failure::new(format!("A={a:?}"), "report", e.to_string())),
            })
            .collect();
        (1, fails)
    });
    Ok(SuiteResult::collect("coeffs", results))
}

/// Random form and operator of the configured kind and dimension.
pub fn sample_instance(cfg: &SuiteConfig, index: u64) -> Result<(FormSpace, Matrix)> {
    let mut rng = instance_rng(cfg.seed, index);
    let space = sample::form_space(cfg.group, cfg.field, cfg.dim, &mut rng)?;
    let a = Sampler::new(&space)?.lie(&mut rng);
    Ok((space, a))
}

/// `classify` output passes every block check and reassembles exactly.
pub fn classification_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let results = cfg.exec.map_range(cfg.trials, |i| {
        let fails = match sample_instance(cfg, i as u64) {
            Err(e) => vec![Failure::new(format!("instance {i}"), "instance", e.to_string())],
            Ok((space, a)) => match classify(&space, &a).and_then(|d| d.verify(&space, &a)) {
                Ok(()) => vec![],
                Err(e) => vec![Failure::new(format!("B={:?} A={a:?}", space.gram()), "valid decomposition", e.to_string())],
            },
        };
        (1, fails)
    });
    Ok(SuiteResult::collect("classify", results))
}

/// `witness_global` emits `(T, −1)` fixing `A`, and `(T, −1)²` lies in the
/// centralizer of `A` in `G`.
pub fn witness_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let results = cfg.exec.map_range(cfg.trials, |i| {
        let fails = match sample_instance(cfg, i as u64) {
            Err(e) => vec![Failure::new(format!("instance {i}"), "instance", e.to_string())],
            Ok((space, a)) => {
                let input = format!("B={:?} A={a:?}", space.gram());
                match witness_global(&space, &a) {
                    Err(e) => vec![Failure::new(input, "witness", e.to_string())],
                    Ok(r) => {
                        let t = &r.element;
                        let sq = t.compose(t);
                        let mut fails = Vec::new();
                        if !(r.checks.all() && t.act_on_algebra(&a) == a && t.delta == -1) {
                            fails.push(Failure::new(input.clone(), "(T,-1).A = A", format!("{:?}", r.checks)));
                        }
                        if !(sq.delta == 1 && !sq.conj && space.in_group(&sq.matrix) && sq.conjugate(&a) == a) {
                            fails.push(Failure::new(input, "(T,-1)^2 in C_A", format!("{sq:?}")));
                        }
                        fails
                    }
                }
            }
        };
        (1, fails)
    });
    Ok(SuiteResult::collect("witness", results))
}

/// Largest `q^dim` of a block checked exhaustively by [`support_suite`].
pub const SUPPORT_LIMIT: u64 = 729;

/// For each block of `A`, every `v` with `v ∈ Q_{A_b}` lies in the block's
/// support subspace. Split blocks are skipped; blocks with more than
/// [`SUPPORT_LIMIT`] vectors are skipped. Returns the number of blocks checked.
pub fn check_block_supports(space: &FormSpace, a: &Matrix) -> Result<(usize, Vec<Failure>)> {
    let dec = classify(space, a)?;
    let mut checked = 0;
    let mut fails = Vec::new();
    for b in dec.blocks.iter().filter(|b| b.variant != BlockVariant::Split) {
        let k = space.field();
        let size = k.order().checked_pow(b.dim() as u32).unwrap_or(u64::MAX);
        if size > SUPPORT_LIMIT {
            continue;
        }
        checked += 1;
        let local = block_support_space(space, b)?;
        let support = block_support(space.group(), b)?;
        let image = BracketImage::new(&local, &b.operator);
        for j in 0..size {
            let v = digits(k, j, b.dim());
            if image.in_q(&v) && !support.contains(&v) {
                fails.push(Failure::new(
                    format!("{} f={:?} d={} A_b={:?} v={v:?}", b.variant, b.f, b.d, b.operator),
                    format!("v in {:?}", support.basis()),
                    "outside the support",
                ));
            }
        }
    }
    Ok((checked, fails))
}

pub fn support_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let results = cfg.exec.map_range(cfg.trials, |i| match sample_instance(cfg, i as u64) {
        Err(e) => (1, vec![Failure::new(format!("instance {i}"), "instance", e.to_string())]),
        Ok((space, a)) => match check_block_supports(&space, &a) {
            Ok(r) => r,
            Err(e) => (1, vec![Failure::new(format!("A={a:?}"), "classify", e.to_string())]),
        },
    });
    Ok(SuiteResult::collect("support", results))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let cfg = SuiteConfig {
            field: Field::prime(3).unwrap(),
            group: GroupKind::Sp,
            dim: 2,
            trials: 20,
            seed: 1,
            exec: Exec::Parallel,
        };
        for s in Suite::ALL {
            let cfg = if s == Suite::Perturbation { SuiteConfig { dim: 1, ..cfg } } else { cfg };
            let r = run_suite(s, &cfg).unwrap();
            assert!(r.passed(), "{}: {:?}", s.name(), r.failures.first());
        }
    }

    #[test]
    fn qr_sp2_is_exhaustive() {
        let cfg = SuiteConfig {
            field: Field::prime(3).unwrap(),
            group: GroupKind::Sp,
            dim: 2,
            trials: 0,
            seed: 0,
            exec: Exec::Sequential,
        };
        let r = qr_suite(&cfg).unwrap();
        assert_eq!(r.instances, 243);
        assert!(r.passed());
    }
}
