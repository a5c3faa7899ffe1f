use crate::actions::{check_inv1, group_pullback, groupoid_arrows, ActingGroup, FiniteGroup};
use crate::error::{check_dim, Error, Result};
use crate::jetcalc::{compare_fields, JetField, PointCloud};
use crate::scalar::{format_point, points_near, Scalar};

/// The orbit `G.Z` with, for each orbit point, every `(g, z)` producing it.
#[derive(Clone, Debug)]
pub struct OrbitCloud<S: Scalar> {
    pub cloud: PointCloud<S>,
    /// `provenance[v]` lists `(element index, index into Z)` with `g . z = v`.
    pub provenance: Vec<Vec<(usize, usize)>>,
}

/// Deduplicated orbit of `z` under `group`, enumerated point by point of `z`
/// and element by element of the group (identity first).
pub fn orbit_cloud<S: Scalar>(group: &FiniteGroup<S>, z: &PointCloud<S>, tol: f64) -> Result<OrbitCloud<S>> {
    check_dim(group.dim(), z.dim())?;
    let mut points: Vec<Vec<S>> = Vec::new();
    let mut provenance: Vec<Vec<(usize, usize)>> = Vec::new();
    for (zi, p) in z.points().iter().enumerate() {
        for (gi, g) in group.elements().iter().enumerate() {
            let v = g.apply(p)?;
            match points.iter().position(|q| points_near(&v, q, tol)) {
                Some(k) => provenance[k].push((gi, zi)),
                None => {
                    points.push(v);
                    provenance.push(vec![(gi, zi)]);
                }
            }
        }
    }
    Ok(OrbitCloud {
        cloud: PointCloud::with_tolerance(z.dim(), points, z.tolerance())?,
        provenance,
    })
}

fn witness<S: Scalar>(group: &FiniteGroup<S>, z: &PointCloud<S>, (g, zi): (usize, usize)) -> String {
    let label = group
        .element(g)
        .label()
        .map_or_else(|| format!("#{g}"), str::to_string);
    format!("{label} . {}", format_point(z.point(zi)))
}

/// Invariant extension of a groupoid-invariant jet from `Z` to `G.Z`:
/// `F~(g.z) = (Phi_{g^-1})^# F(z)`.
///
/// Every representation `v = g.z` of an orbit point yields a candidate table;
/// disagreeing candidates raise [`Error::Conflict`]. The groupoid invariance of
/// `F` on `Z` is verified as well, raising [`Error::Inv1Violation`].
pub fn extend_invariant<S: Scalar>(
    group: &FiniteGroup<S>,
    z: &PointCloud<S>,
    f: &JetField<S>,
    tol: f64,
) -> Result<JetField<S>> {
    if f.cloud().points() != z.points() {
        return Err(Error::CloudMismatch);
    }
    let orbit = orbit_cloud(group, z, tol)?;
    let mut tables: Vec<Vec<S>> = Vec::with_capacity(orbit.cloud.len());
    for (v, sources) in orbit.provenance.iter().enumerate() {
        let mut first: Option<(JetField<S>, (usize, usize))> = None;
        for &(g, zi) in sources {
            let single = JetField::from_fn(z.select(&[zi])?, f.order(), |_, a| f.get(zi, a));
            let candidate = group_pullback(&group.element(group.inverse(g)).clone(), &single)?;
            match &first {
                None => first = Some((candidate, (g, zi))),
                Some((reference, w)) => {
                    let candidate = candidate.reindexed(reference.cloud().clone())?;
                    if !compare_fields(reference, &candidate, tol)?.equal {
                        return Err(Error::Conflict {
                            point: format_point(orbit.cloud.point(v)),
                            first: witness(group, z, *w),
                            second: witness(group, z, (g, zi)),
                        });
                    }
                }
            }
        }
        let (jet, _) = first.expect("every orbit point has a source");
        tables.push(jet.table(0).to_vec());
    }

    let acting = ActingGroup::Finite(group.clone());
    let arrows = groupoid_arrows(&acting, z, tol)?;
    let report = check_inv1(&acting, &arrows, f, tol)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Inv1Violation(format!(
            "arrow {} -> {} at alpha {}: {} vs {}",
            v.arrow.source, v.arrow.target, v.alpha, v.at_source, v.pulled_back
        )));
    }

    let result = JetField::from_fn(orbit.cloud, f.order(), |_, _| S::zero());
    let indices = result.indices().to_vec();
    let mut result = result;
    for (p, table) in tables.into_iter().enumerate() {
        for (alpha, value) in indices.iter().zip(table) {
            result.set(p, alpha, value)?;
        }
    }
    Ok(result)
}
