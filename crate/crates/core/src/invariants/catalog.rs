use std::fmt;

use crate::actions::{
    check_inv1, check_inv2, group_closure, groupoid_arrows, standard, ActingGroup, CircleAction,
    FiniteGroup,
};
use crate::error::{Error, Result};
use crate::jetcalc::{jet_of_poly, JetField, PointCloud};
use crate::matrix::Matrix;
use crate::pullback::{plan, pullback_multi};
use crate::random;
use crate::scalar::Scalar;
use crate::symbolic::{generic_rank, PolyMap, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest group closed over while building catalog entries.
const MAX_GROUP_ORDER: usize = 48;

/// How the group of a catalog entry is described.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupSpec<S: Scalar> {
    /// Explicit generators of a finite matrix group.
    Finite(Vec<Matrix<S>>),
    Circle(CircleAction),
    /// `S_n` permuting the coordinates of `R^n`.
    Permutation(usize),
    /// `O_n` acting diagonally on `(q, p)` in `R^n x R^n`.
    OrthogonalCotangent(usize),
}

impl<S: Scalar> fmt::Display for GroupSpec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Finite(gens) => write!(f, "finite group with {} generator(s)", gens.len()),
            GroupSpec::Circle(c) => write!(f, "circle with weights {:?} and {} fixed coordinate(s)", c.weights(), c.fixed()),
            GroupSpec::Permutation(n) => write!(f, "S_{n} permuting coordinates"),
            GroupSpec::OrthogonalCotangent(n) => write!(f, "O_{n} cotangent lift"),
        }
    }
}

/// A representation together with a Hilbert basis `rho_1, .., rho_l` of its
/// invariants.
#[derive(Clone, Debug)]
pub struct HilbertEntry<S: Scalar> {
    pub name: String,
    pub group: GroupSpec<S>,
    /// The Hilbert map `rho: R^n -> R^l`.
    pub invariants: PolyMap<S>,
    /// Lie algebra generators (empty for finite groups).
    pub lie_generators: Vec<Matrix<S>>,
    /// The group itself when finite, otherwise a finite subgroup used to
    /// exercise the groupoid condition.
    pub finite: FiniteGroup<S>,
}

impl<S: Scalar> HilbertEntry<S> {
    pub fn dim(&self) -> usize {
        self.invariants.domain_dim()
    }

    /// Number of basic invariants `l`.
    pub fn len(&self) -> usize {
        self.invariants.target_dim()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn acting_finite(&self) -> ActingGroup<S> {
        ActingGroup::Finite(self.finite.clone())
    }
}

fn closure<S: Scalar>(gens: &[crate::actions::OrthogonalElement<S>]) -> FiniteGroup<S> {
    group_closure(gens, 1e-12, MAX_GROUP_ORDER).expect("catalog groups are small")
}

/// Elementary symmetric polynomial `e_k` in `n` variables.
pub fn elementary_symmetric<S: Scalar>(n: usize, k: usize) -> Polynomial<S> {
    let mut out = Polynomial::zero(n);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut exps = vec![0; n];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = (mask >> i) & 1;
        }
        out = out
            .add(&Polynomial::monomial(n, exps.into(), S::one()))
            .expect("same dimension");
    }
    out
}

fn sum_of_products<S: Scalar>(n: usize, a: usize, b: usize) -> Polynomial<S> {
    let dim = 2 * n;
    let mut out = Polynomial::zero(dim);
    for i in 0..n {
        let term = Polynomial::var(dim, a * n + i)
            .mul(&Polynomial::var(dim, b * n + i))
            .expect("same dimension");
        out = out.add(&term).expect("same dimension");
    }
    out
}

fn reflection_entry<S: Scalar>() -> HilbertEntry<S> {
    let gens = standard::sign::<S>(1);
    HilbertEntry {
        name: "Z2 on R".into(),
        group: GroupSpec::Finite(gens.iter().map(|g| g.matrix().clone()).collect()),
        invariants: PolyMap::new(1, vec![Polynomial::var(1, 0).pow(2)]).expect("scalar map"),
        lie_generators: Vec::new(),
        finite: closure(&gens),
    }
}

fn circle_entry<S: Scalar>() -> HilbertEntry<S> {
    let c = CircleAction::planar();
    let r2 = Polynomial::var(2, 0)
        .pow(2)
        .add(&Polynomial::var(2, 1).pow(2))
        .expect("same dimension");
    HilbertEntry {
        name: "S1 on R2".into(),
        lie_generators: vec![c.generator()],
        group: GroupSpec::Circle(c),
        invariants: PolyMap::new(2, vec![r2]).expect("scalar map"),
        finite: closure(&standard::quarter_turn()),
    }
}

fn permutation_entry<S: Scalar>(n: usize) -> HilbertEntry<S> {
    HilbertEntry {
        name: format!("S{n} on R{n}"),
        group: GroupSpec::Permutation(n),
        invariants: PolyMap::new(n, (1..=n).map(|k| elementary_symmetric(n, k)).collect()).expect("same dimension"),
        lie_generators: Vec::new(),
        finite: closure(&standard::permutations(n)),
    }
}

/// Block-diagonal `so(n)` generators `E_ij - E_ji` acting on `(q, p)`.
fn cotangent_lie_generators<S: Scalar>(n: usize) -> Vec<Matrix<S>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut m = Matrix::zeros(2 * n, 2 * n);
            for block in 0..2 {
                m[(block * n + i, block * n + j)] = S::one();
                m[(block * n + j, block * n + i)] = -S::one();
            }
            out.push(m);
        }
    }
    out
}

fn cotangent_entry<S: Scalar>(n: usize) -> HilbertEntry<S> {
    HilbertEntry {
        name: format!("O{n} on T*R{n}"),
        group: GroupSpec::OrthogonalCotangent(n),
        invariants: PolyMap::new(
            2 * n,
            vec![sum_of_products(n, 0, 0), sum_of_products(n, 0, 1), sum_of_products(n, 1, 1)],
        )
        .expect("same dimension"),
        lie_generators: cotangent_lie_generators(n),
        finite: closure(&standard::diagonal(&standard::signed_permutations(n), 2)),
    }
}

/// The shipped Hilbert bases: `Z/2` on `R`, the planar circle, `S_n` for
/// `n = 2, 3, 4` and the `O_n` cotangent lift for `n = 2, 3`.
pub fn catalog<S: Scalar>() -> Vec<HilbertEntry<S>> {
    let mut out = vec![reflection_entry(), circle_entry()];
    out.extend((2..=4).map(permutation_entry));
    out.extend((2..=3).map(cotangent_entry));
    out
}

/// Looks an entry up by name.
pub fn find_entry<S: Scalar>(name: &str) -> Result<HilbertEntry<S>> {
    catalog()
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::Unsupported(format!("no catalog entry named {name:?}")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryReport {
    pub name: String,
    /// Every invariant passed both conditions at every sampled order.
    pub holds: bool,
    pub generic_rank: usize,
    pub invariants: usize,
    pub failures: Vec<String>,
}

/// `base` random points together with `images` random group translates of
/// each, so that the cloud carries non-unit groupoid arrows without the cost
/// of whole orbits.
pub fn sample_orbit_cloud<S: Scalar>(
    rng: &mut impl Rng,
    group: &FiniteGroup<S>,
    base: usize,
    images: usize,
    tol: f64,
) -> Result<PointCloud<S>> {
    let mut points = Vec::new();
    for _ in 0..base {
        let z = random::point::<S>(rng, group.dim());
        for _ in 0..images {
            let g = rng.gen_range(0..group.order());
            points.push(group.element(g).apply(&z)?);
        }
        points.push(z);
    }
    PointCloud::dedup(group.dim(), points, if S::EXACT { 0.0 } else { tol })
}

/// Checks every `rho_i` for groupoid and infinitesimal invariance at jet
/// orders `1..=4` on seeded orbit clouds, and reports the generic rank of
/// the Hilbert map.
pub fn verify_entry<S: Scalar>(entry: &HilbertEntry<S>, seed: u64, tol: f64) -> Result<EntryReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let acting = entry.acting_finite();
    let mut failures = Vec::new();
    for order in 1..=4 {
        let cloud = sample_orbit_cloud(&mut rng, &entry.finite, 2, 3, tol)?;
        let arrows = groupoid_arrows(&acting, &cloud, tol)?;
        for (i, rho) in entry.invariants.components().iter().enumerate() {
            let jet = jet_of_poly(rho, &cloud, order)?;
            let inv1 = check_inv1(&acting, &arrows, &jet, tol)?;
            if let Some(v) = inv1.violations.first() {
                failures.push(format!(
                    "rho{} order {order}: groupoid invariance fails at alpha {} ({} vs {})",
                    i + 1,
                    v.alpha,
                    v.at_source,
                    v.pulled_back
                ));
            }
            let inv2 = check_inv2(&entry.lie_generators, &jet, tol)?;
            if let Some(v) = inv2.violations.first() {
                failures.push(format!(
                    "rho{} order {order}: generator {} leaves {} at alpha {}",
                    i + 1,
                    v.generator + 1,
                    v.value,
                    v.alpha
                ));
            }
        }
    }
    Ok(EntryReport {
        name: entry.name.clone(),
        holds: failures.is_empty(),
        generic_rank: generic_rank(&entry.invariants, 8, seed)?,
        invariants: entry.len(),
        failures,
    })
}

/// `rho^# H` on `Z` to order `m`, certified invariant before it is returned.
///
/// `H` lives on a cloud containing `rho(Z)`. Invariance of the result is a
/// theorem, so a failed certification is reported as an internal error.
pub fn hilbert_pullback<S: Scalar>(
    entry: &HilbertEntry<S>,
    h: &JetField<S>,
    z: &PointCloud<S>,
    m: u32,
    tol: f64,
) -> Result<JetField<S>> {
    let p = plan(entry.invariants.clone(), z, h.cloud(), tol)?;
    let out = pullback_multi(&p, h, m)?;
    let acting = entry.acting_finite();
    let arrows = groupoid_arrows(&acting, z, tol)?;
    let inv1 = check_inv1(&acting, &arrows, &out, tol)?;
    if let Some(v) = inv1.violations.first() {
        return Err(Error::Internal(format!(
            "pullback along {} fails groupoid invariance at alpha {}",
            entry.name, v.alpha
        )));
    }
    if m >= 1 {
        let inv2 = check_inv2(&entry.lie_generators, &out, tol)?;
        if let Some(v) = inv2.violations.first() {
            return Err(Error::Internal(format!(
                "pullback along {} fails infinitesimal invariance at alpha {}",
                entry.name, v.alpha
            )));
        }
    }
    Ok(out)
}
