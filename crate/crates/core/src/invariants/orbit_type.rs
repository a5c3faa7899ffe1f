use std::fmt;

use crate::actions::FiniteGroup;
use crate::error::{check_dim, Error, Result};
use crate::scalar::{points_near, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrbitTag {
    /// Isotropy is the whole group.
    Full,
    Intermediate,
    /// Isotropy is trivial.
    Trivial,
}

impl fmt::Display for OrbitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitTag::Full => "full",
            OrbitTag::Intermediate => "intermediate",
            OrbitTag::Trivial => "trivial",
        })
    }
}

/// Orbit type of a point: the conjugacy class of its isotropy group.
///
/// Labels compare by `tag` and `class` only; `witness` records the evidence
/// for the particular point (isotropy elements, or the analytic test used).
#[derive(Clone, Debug)]
pub struct OrbitTypeLabel {
    pub tag: OrbitTag,
    pub class: String,
    pub witness: Vec<String>,
}

impl PartialEq for OrbitTypeLabel {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.class == other.class
    }
}

impl Eq for OrbitTypeLabel {}

impl fmt::Display for OrbitTypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.class, self.tag)
    }
}

/// The isotropy group `G_z` as element indices of `G` plus the subgroup.
#[derive(Clone, Debug)]
pub struct Isotropy<S: Scalar> {
    pub indices: Vec<usize>,
    pub group: FiniteGroup<S>,
}

pub fn isotropy<S: Scalar>(group: &FiniteGroup<S>, z: &[S], tol: f64) -> Result<Isotropy<S>> {
    check_dim(group.dim(), z.len())?;
    let mut indices = Vec::new();
    for (i, g) in group.elements().iter().enumerate() {
        if points_near(&g.apply(z)?, z, tol) {
            indices.push(i);
        }
    }
    let sub = group.subgroup(&indices)?;
    Ok(Isotropy { indices, group: sub })
}

/// Lexicographically least conjugate `g H g^-1`, as sorted indices.
pub fn canonical_conjugate<S: Scalar>(group: &FiniteGroup<S>, subset: &[usize]) -> Vec<usize> {
    (0..group.order())
        .map(|g| group.conjugate(g, subset))
        .min()
        .unwrap_or_default()
}

fn element_name<S: Scalar>(group: &FiniteGroup<S>, i: usize) -> String {
    group
        .element(i)
        .label()
        .map_or_else(|| format!("#{i}"), str::to_string)
}

pub fn orbit_type_label<S: Scalar>(group: &FiniteGroup<S>, z: &[S], tol: f64) -> Result<OrbitTypeLabel> {
    let iso = isotropy(group, z, tol)?;
    let witness = iso.indices.iter().map(|&i| element_name(group, i)).collect();
    let (tag, class) = if iso.indices.len() == group.order() {
        (OrbitTag::Full, "G".to_string())
    } else if iso.indices.len() == 1 {
        (OrbitTag::Trivial, "e".to_string())
    } else {
        let canon = canonical_conjugate(group, &iso.indices);
        let list: Vec<String> = canon.iter().map(|i| i.to_string()).collect();
        (OrbitTag::Intermediate, format!("H{}[{}]", canon.len(), list.join(",")))
    };
    Ok(OrbitTypeLabel { tag, class, witness })
}

/// Orbit type of `(q, p)` under the diagonal `O_n` action: `(G)` at the
/// origin, `(O_{n-1})` when `q` and `p` are parallel (every 2x2 minor of the
/// 2 x n matrix `[q; p]` within `tol` of zero), and otherwise the
/// stabilizer of the plane spanned by `q, p`: `(e)` for `n = 2`, `(O_{n-2})`
/// for larger `n`.
pub fn classify_cotangent<S: Scalar>(n: usize, q: &[S], p: &[S], tol: f64) -> Result<OrbitTypeLabel> {
    if n < 2 {
        return Err(Error::Unsupported(
            "cotangent classification needs n >= 2".into(),
        ));
    }
    check_dim(n, q.len())?;
    check_dim(n, p.len())?;
    if q.iter().chain(p).all(|v| v.near_zero(tol)) {
        return Ok(OrbitTypeLabel {
            tag: OrbitTag::Full,
            class: format!("O{n}"),
            witness: vec!["q = p = 0".into()],
        });
    }
    let mut worst: Option<(usize, usize, S)> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let minor = q[i].clone() * p[j].clone() - q[j].clone() * p[i].clone();
            if !minor.near_zero(tol) {
                let bigger = worst.as_ref().is_none_or(|(_, _, w)| minor.abs() > w.abs());
                if bigger {
                    worst = Some((i, j, minor));
                }
            }
        }
    }
    Ok(match worst {
        None => OrbitTypeLabel {
            tag: OrbitTag::Intermediate,
            class: format!("O{}", n - 1),
            witness: vec!["q || p: every 2x2 minor vanishes".into()],
        },
        Some((i, j, minor)) => {
            let (tag, class) = if n == 2 {
                (OrbitTag::Trivial, "e".to_string())
            } else {
                (OrbitTag::Intermediate, format!("O{}", n - 2))
            };
            OrbitTypeLabel {
                tag,
                class,
                witness: vec![format!("minor ({},{}) = {}", i + 1, j + 1, minor.to_text())],
            }
        }
    })
}
