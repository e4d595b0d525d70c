//! Brute-force enumeration of small classical groups and their orbits on
//! `g × V`, `G × V` and on `G(W)` under conjugation by `G(V)`.
//!
//! These are finite-field analogues only: a `(G̃, χ)`-equivariant function on
//! a finite set vanishes iff every `G`-orbit is also a `G̃`-orbit.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{Field, Scalar};
use crate::form::{FormKind, FormSpace, GroupKind};
use crate::canonical::local_min_poly;
use crate::matrix::{vec_conj, Matrix, Vector};
use crate::poly::Poly;
use crate::twisted::TwistedElement;

pub const HEADER: &str = "finite-field analogue; not a statement about local fields";

/// Size limits for the brute-force searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Bound on `q^{n²}`, the number of candidate matrices.
    pub max_matrices: u64,
    /// Bound on the number of points whose orbits are computed.
    pub max_points: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_matrices: 5u64.pow(9), max_points: 1 << 20 }
    }
}

#[derive(Clone, Debug)]
pub struct GroupEnumeration {
    pub space: FormSpace,
    /// `G(V)`, sorted.
    pub elements: Vec<Matrix>,
    /// `G̃ ∖ G`: all `(T, −1)`, sorted by matrix.
    pub twisted_coset: Vec<TwistedElement>,
}

impl GroupEnumeration {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

fn all_vectors(k: Field, n: usize) -> Vec<Vector> {
    let q = k.order();
    (0..q.pow(n as u32))
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let x = k.from_index(idx % q);
                    idx /= q;
                    x
                })
                .collect()
        })
        .collect()
}

fn key_of(entries: impl Iterator<Item = Scalar>) -> Vec<u32> {
    entries.map(|x| x.field().index_of(x) as u32).collect()
}

fn matrix_key(m: &Matrix) -> Vec<u32> {
    key_of(m.entries().iter().copied())
}

/// Matrices whose columns `c_i` satisfy `<c_i, c_j> = target(i, j)`.
fn isometries(space: &FormSpace, target: &Matrix, exec: Exec) -> Vec<Matrix> {
    let k = space.field();
    let n = space.dim();
    let vectors = all_vectors(k, n);
    fn extend(space: &FormSpace, target: &Matrix, vectors: &[Vector], cols: &mut Vec<Vector>, out: &mut Vec<Matrix>) {
        let i = cols.len();
        if i == target.rows() {
            out.push(Matrix::from_columns(space.field(), target.rows(), cols));
            return;
        }
        for c in vectors {
            if space.pair(c, c) != target[(i, i)] {
                continue;
            }
            if cols.iter().enumerate().all(|(j, cj)| space.pair(c, cj) == target[(i, j)]) {
                cols.push(c.clone());
                extend(space, target, vectors, cols, out);
                cols.pop();
            }
        }
    }
    if n == 0 {
        return vec![Matrix::identity(k, 0)];
    }
    let firsts: Vec<&Vector> = vectors.iter().filter(|c| space.pair(c, c) == target[(0, 0)]).collect();
    let mut found: Vec<Matrix> = exec
        .map(&firsts, |c| {
            let mut out = Vec::new();
            extend(space, target, &vectors, &mut vec![(*c).clone()], &mut out);
            out
        })
        .into_iter()
        .flatten()
        .filter(|m| !m.det().is_zero())
        .collect();
    found.sort_by_cached_key(matrix_key);
    found
}

pub fn enumerate_group(space: &FormSpace, budget: &Budget, exec: Exec) -> Result<GroupEnumeration> {
    let k = space.field();
    let n = space.dim() as u32;
    let candidates = k.order().checked_pow(n * n).unwrap_or(u64::MAX);
    if candidates > budget.max_matrices {
        return Err(Error::Budget(format!("q^(n^2) = {candidates} exceeds the bound {}", budget.max_matrices)));
    }
    let conj = space.kind() == FormKind::Hermitian;
    let mut elements = isometries(space, space.gram(), exec);
    let mut coset: Vec<TwistedElement> = isometries(space, &space.gram().transpose(), exec)
        .into_iter()
        .map(|matrix| TwistedElement { matrix, delta: -1, conj })
        .collect();
    if space.group() == GroupKind::SO {
        elements.retain(|g| g.det().is_one());
        let target = space.so_det_target(-1);
        coset.retain(|t| t.det() == target);
    }
    Ok(GroupEnumeration { space: space.clone(), elements, twisted_coset: coset })
}

/// Which set the group acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitSpace {
    /// `(A, v) ↦ (gAg⁻¹, gv)`.
    LieTimesV,
    /// `(h, v) ↦ (ghg⁻¹, gv)`.
    GroupTimesV,
}

impl OrbitSpace {
    pub fn name(self) -> &'static str {
        match self {
            OrbitSpace::LieTimesV => "g x V",
            OrbitSpace::GroupTimesV => "G x V",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub a: Matrix,
    pub v: Vector,
}

impl Point {
    fn key(&self) -> Vec<u32> {
        key_of(self.a.entries().iter().chain(self.v.iter()).copied())
    }
}

/// A group element with its inverse cached.
struct Actor {
    m: Matrix,
    inv: Matrix,
    delta: i8,
    conj: bool,
}

impl Actor {
    fn new(t: &TwistedElement) -> Self {
        Actor { m: t.matrix.clone(), inv: t.matrix.inverse().expect("invertible"), delta: t.delta, conj: t.conj }
    }

    fn plain(g: &Matrix) -> Self {
        Actor::new(&TwistedElement { matrix: g.clone(), delta: 1, conj: false })
    }

    fn conjugate(&self, x: &Matrix) -> Matrix {
        let inner = if self.conj { x.conj() } else { x.clone() };
        &(&self.m * &inner) * &self.inv
    }

    fn vector(&self, v: &[Scalar]) -> Vector {
        let w = if self.conj { self.m.mul_vec(&vec_conj(v)) } else { self.m.mul_vec(v) };
        if self.delta == 1 { w } else { w.into_iter().map(|x| -x).collect() }
    }

    fn act(&self, space: OrbitSpace, p: &Point) -> Point {
        let a = match space {
            OrbitSpace::LieTimesV => {
                let c = self.conjugate(&p.a);
                if self.delta == 1 { c } else { -c }
            }
            OrbitSpace::GroupTimesV => {
                if self.delta == 1 {
                    self.conjugate(&p.a)
                } else {
                    self.conjugate(&p.a.inverse().expect("group element"))
                }
            }
        };
        Point { a, v: self.vector(&p.v) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitInfo {
    pub size: usize,
    /// Lexicographically least point of the orbit.
    pub representative: Point,
    pub twisted_stable: bool,
    pub witness: Option<TwistedElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub space: OrbitSpace,
    pub points: usize,
    pub group_order: usize,
    pub orbits: Vec<OrbitInfo>,
    /// Point key to orbit index.
    index: HashMap<Vec<u32>, usize>,
}

impl OrbitReport {
    pub fn orbit_of(&self, p: &Point) -> Option<usize> {
        self.index.get(&p.key()).copied()
    }
}

fn lie_elements(space: &FormSpace) -> Vec<Matrix> {
    let k = space.field();
    let n = space.dim();
    let basis = space.lie_algebra_basis();
    let p = k.p() as u64;
    (0..p.pow(basis.len() as u32))
        .map(|mut idx| {
            basis.iter().fold(Matrix::zeros(k, n, n), |acc, b| {
                let c = k.int((idx % p) as i64);
                idx /= p;
                &acc + &b.scale(c)
            })
        })
        .collect()
}

pub fn orbits(en: &GroupEnumeration, space: OrbitSpace, budget: &Budget, exec: Exec) -> Result<OrbitReport> {
    let s = &en.space;
    let k = s.field();
    let n = s.dim();
    let firsts = match space {
        OrbitSpace::LieTimesV => {
            let dim = s.lie_algebra_basis().len() as u32;
            let size = (k.p() as u64).checked_pow(dim).unwrap_or(u64::MAX);
            if size.saturating_mul(k.order().pow(n as u32)) > budget.max_points {
                return Err(Error::Budget(format!("|g x V| exceeds the bound {}", budget.max_points)));
            }
            lie_elements(s)
        }
        OrbitSpace::GroupTimesV => {
            if (en.order() as u64).saturating_mul(k.order().pow(n as u32)) > budget.max_points {
                return Err(Error::Budget(format!("|G x V| exceeds the bound {}", budget.max_points)));
            }
            en.elements.clone()
        }
    };
    let vectors = all_vectors(k, n);
    let points: Vec<Point> =
        firsts.iter().flat_map(|a| vectors.iter().map(move |v| Point { a: a.clone(), v: v.clone() })).collect();
    let actors: Vec<Actor> = en.elements.iter().map(Actor::plain).collect();
    let reps: Vec<Vec<u32>> = exec.map(&points, |p| {
        actors.iter().map(|g| g.act(space, p).key()).min().expect("group is nonempty")
    });
    let mut by_rep: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for (i, r) in reps.into_iter().enumerate() {
        by_rep.entry(r).or_default().push(i);
    }
    let mut index = HashMap::with_capacity(points.len());
    let mut infos = Vec::with_capacity(by_rep.len());
    for (o, (rep, members)) in by_rep.into_iter().enumerate() {
        let representative = members
            .iter()
            .map(|&i| &points[i])
            .find(|p| p.key() == rep)
            .expect("orbit contains its least point")
            .clone();
        for &i in &members {
            index.insert(points[i].key(), o);
        }
        infos.push(OrbitInfo { size: members.len(), representative, twisted_stable: false, witness: None });
    }
    Ok(OrbitReport { space, points: points.len(), group_order: en.order(), orbits: infos, index })
}

/// Marks each orbit with a twisted element mapping it to itself, if any.
/// Returns whether every orbit is stable.
pub fn check_twisted_stability(report: &mut OrbitReport, en: &GroupEnumeration, exec: Exec) -> bool {
    let actors: Vec<Actor> = en.twisted_coset.iter().map(Actor::new).collect();
    let space = report.space;
    let found: Vec<Option<usize>> = exec.map_range(report.orbits.len(), |o| {
        let rep = &report.orbits[o].representative;
        actors.iter().position(|t| report.index.get(&t.act(space, rep).key()) == Some(&o))
    });
    for (info, w) in report.orbits.iter_mut().zip(found) {
        info.twisted_stable = w.is_some();
        info.witness = w.map(|i| en.twisted_coset[i].clone());
    }
    report.orbits.iter().all(|o| o.twisted_stable)
}

/// A `G`-invariant separating an orbit from its image under the twisted
/// coset: the local minimal polynomial of `v`, when it differs from its
/// transform (`f*` on `g × V`, `f†` on `G × V`). Its presence proves the
/// orbit unstable.
pub fn instability_certificate(space: OrbitSpace, p: &Point) -> Option<Poly> {
    let m = local_min_poly(&p.a, &p.v);
    let image = match space {
        OrbitSpace::LieTimesV => m.star().monic(),
        OrbitSpace::GroupTimesV => m.dagger().monic(),
    };
    (image != m).then_some(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOrbit {
    pub size: usize,
    pub representative: Matrix,
    pub sigma_stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub small: FormSpace,
    pub big: FormSpace,
    pub sigma: TwistedElement,
    pub big_order: usize,
    pub small_order: usize,
    pub orbits: Vec<PairOrbit>,
}

impl PairReport {
    pub fn all_stable(&self) -> bool {
        self.orbits.iter().all(|o| o.sigma_stable)
    }
}

/// `W = V ⊕ <v_{n+1}>` with `<v_{n+1}, v_{n+1}> = −1`.
pub fn ambient_pair_space(small: &FormSpace) -> Result<FormSpace> {
    let k = small.field();
    let gram = Matrix::block_diag(k, &[small.gram().clone(), Matrix::scalar(-k.one(), 1)]);
    FormSpace::new(small.group(), gram)
}

fn embed(g: &Matrix) -> Matrix {
    Matrix::block_diag(g.field(), &[g.clone(), Matrix::identity(g.field(), 1)])
}

/// Checks that `σ(g) = T g⁻¹ T⁻¹` preserves every `G(V)`-conjugacy orbit on `G(W)`.
pub fn check_pair_sigma(small: &FormSpace, budget: &Budget, exec: Exec) -> Result<PairReport> {
    if small.kind() == FormKind::Symplectic {
        return Err(Error::Unsupported("the pair check is for O, SO and U".into()));
    }
    let big = ambient_pair_space(small)?;
    let s_small = small.sigma_builder()?;
    let sigma = TwistedElement { matrix: embed(&s_small.matrix), delta: -1, conj: s_small.conj };
    if !big.in_twisted(&sigma) {
        return Err(Error::Internal("extended sigma does not reverse the form on W".into()));
    }
    let gw = enumerate_group(&big, budget, exec)?;
    let gv = enumerate_group(small, budget, exec)?;
    let actors: Vec<Actor> = gv.elements.iter().map(|g| Actor::plain(&embed(g))).collect();
    let reps: Vec<Vec<u32>> =
        exec.map(&gw.elements, |h| actors.iter().map(|g| matrix_key(&g.conjugate(h))).min().expect("nonempty"));
    let mut by_rep: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for (i, r) in reps.iter().enumerate() {
        by_rep.entry(r.clone()).or_default().push(i);
    }
    let sig = Actor::new(&sigma);
    let orbits = by_rep
        .into_iter()
        .map(|(rep, members)| {
            let representative = members
                .iter()
                .map(|&i| &gw.elements[i])
                .find(|h| matrix_key(h) == rep)
                .expect("orbit contains its least point")
                .clone();
            let image = sig.conjugate(&representative.inverse().expect("group element"));
            let image_rep = actors.iter().map(|g| matrix_key(&g.conjugate(&image))).min().unwrap();
            PairOrbit { size: members.len(), representative, sigma_stable: image_rep == rep }
        })
        .collect();
    Ok(PairReport { small: small.clone(), big, sigma, big_order: gw.order(), small_order: gv.order(), orbits })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn group_orders() {
        let b = Budget::default();
        let o1 = FormSpace::standard(GroupKind::O, f3(), 1).unwrap();
        let en = enumerate_group(&o1, &b, Exec::Sequential).unwrap();
        assert_eq!(en.elements, vec![Matrix::identity(f3(), 1), Matrix::scalar(-f3().one(), 1)]);
        let sp2 = FormSpace::standard(GroupKind::Sp, f3(), 2).unwrap();
        let en = enumerate_group(&sp2, &b, Exec::Parallel).unwrap();
        assert_eq!(en.order(), 24);
        assert_eq!(en.twisted_coset.len(), 24);
        let o3 = FormSpace::standard(GroupKind::O, f3(), 3).unwrap();
        assert_eq!(enumerate_group(&o3, &b, Exec::Parallel).unwrap().order(), 48);
        let o4 = FormSpace::standard(GroupKind::O, Field::prime(5).unwrap(), 4).unwrap();
        assert!(matches!(enumerate_group(&o4, &b, Exec::Parallel), Err(Error::Budget(_))));
    }

    #[test]
    fn small_orbits() {
        let b = Budget::default();
        let o1 = FormSpace::standard(GroupKind::O, f3(), 1).unwrap();
        let en = enumerate_group(&o1, &b, Exec::Sequential).unwrap();
        let mut r = orbits(&en, OrbitSpace::LieTimesV, &b, Exec::Sequential).unwrap();
        assert_eq!(r.orbits.iter().map(|o| o.size).collect::<Vec<_>>(), vec![1, 2]);
        assert!(check_twisted_stability(&mut r, &en, Exec::Sequential));
        let r = orbits(&en, OrbitSpace::GroupTimesV, &b, Exec::Sequential).unwrap();
        assert_eq!((r.points, r.orbits.len()), (6, 4));
    }

    #[test]
    fn split_eigenvector_orbit_is_unstable() {
        let k = f3();
        let b = Budget::default();
        let sp = FormSpace::standard(GroupKind::Sp, k, 2).unwrap();
        let en = enumerate_group(&sp, &b, Exec::Sequential).unwrap();
        let mut r = orbits(&en, OrbitSpace::LieTimesV, &b, Exec::Sequential).unwrap();
        check_twisted_stability(&mut r, &en, Exec::Sequential);
        // A has eigenvalues ±1; any (T, −1) fixing A swaps the eigenlines
        let p = Point { a: Matrix::from_ints(k, &[&[0, 1], &[1, 0]]), v: vec![k.one(), k.one()] };
        let o = &r.orbits[r.orbit_of(&p).unwrap()];
        assert!(!o.twisted_stable);
        assert_eq!(instability_certificate(OrbitSpace::LieTimesV, &p), Some(Poly::from_ints(k, &[-1, 1])));
        assert_eq!(r.orbits.iter().filter(|o| !o.twisted_stable).count(), 2);
    }

    #[test]
    fn pair_o1_in_o2() {
        let o1 = FormSpace::standard(GroupKind::O, f3(), 1).unwrap();
        let r = check_pair_sigma(&o1, &Budget::default(), Exec::Sequential).unwrap();
        assert_eq!(r.big_order, 4);
        assert!(r.all_stable());
    }
}
