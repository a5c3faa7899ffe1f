use std::collections::HashMap;


use crate::error::{check_dim, Error, Result};
use crate::jetcalc::{JetField, PointCloud};
use crate::multiindex::MultiIndex;
use crate::scalar::{distance, format_point, pow, Scalar};
use crate::symbolic::{PolyMap, Polynomial};

fn check_order(k: u32, m: u32) -> Result<()> {
    if k > m {
        return Err(Error::OrderMismatch(format!("requested order {k} exceeds jet order {m}")));
    }
    Ok(())
}

/// `J^m f` on `cloud`: `F_alpha(x) = (d^alpha f)(x)`.
pub fn jet_of_poly<S: Scalar>(f: &Polynomial<S>, cloud: &PointCloud<S>, m: u32) -> Result<JetField<S>> {
    check_dim(cloud.dim(), f.dim())?;
    let derivs = MultiIndex::all_up_to(f.dim(), m)
        .into_iter()
        .map(|a| f.diff(&a).map(|d| (a, d)))
        .collect::<Result<HashMap<_, _>>>()?;
    Ok(JetField::from_fn(cloud.clone(), m, |p, a| {
        derivs[a].eval(cloud.point(p)).expect("dimension checked")
    }))
}

/// Leibniz product `(EF)_alpha = sum_{beta <= alpha} binom(alpha, beta) E_beta F_{alpha - beta}`,
/// so that `J(fg) = J(f) J(g)` in the derivative convention.
pub fn jet_mul<S: Scalar>(e: &JetField<S>, f: &JetField<S>) -> Result<JetField<S>> {
    if e.order() != f.order() {
        return Err(Error::OrderMismatch(format!(
            "orders {} and {} differ",
            e.order(),
            f.order()
        )));
    }
    if e.cloud().points() != f.cloud().points() {
        return Err(Error::CloudMismatch);
    }
    let splits: HashMap<&MultiIndex, Vec<(MultiIndex, MultiIndex, S)>> = e
        .indices()
        .iter()
        .map(|alpha| {
            let terms = alpha
                .lower_set()
                .into_iter()
                .map(|beta| {
                    let gamma = alpha.checked_sub(&beta).expect("beta <= alpha");
                    let c = S::from_bigint(&alpha.binomial(&beta).into());
                    (beta, gamma, c)
                })
                .collect();
            (alpha, terms)
        })
        .collect();
    Ok(JetField::from_fn(e.cloud().clone(), e.order(), |p, alpha| {
        splits[alpha].iter().fold(S::zero(), |acc, (beta, gamma, c)| {
            acc + c.clone() * e.get(p, beta) * f.get(p, gamma)
        })
    }))
}

/// `(d^beta F)_alpha = F_{alpha + beta}`, lowering the order by `|beta|`.
pub fn jet_diff<S: Scalar>(f: &JetField<S>, beta: &MultiIndex) -> Result<JetField<S>> {
    check_dim(f.dim(), beta.len())?;
    check_order(beta.norm(), f.order())?;
    Ok(JetField::from_fn(
        f.cloud().clone(),
        f.order() - beta.norm(),
        |p, a| f.get(p, &(a + beta)),
    ))
}

/// Taylor polynomial `T_a^k F(x) = sum_{|alpha| <= k} (x - a)^alpha / alpha! F_alpha(a)`.
pub fn taylor_poly<S: Scalar>(f: &JetField<S>, a: &[S], k: u32) -> Result<Polynomial<S>> {
    check_dim(f.dim(), a.len())?;
    let p = f.cloud().require(a)?;
    check_order(k, f.order())?;
    Ok(taylor_at_index(f, p, k))
}

pub(crate) fn taylor_at_index<S: Scalar>(f: &JetField<S>, p: usize, k: u32) -> Polynomial<S> {
    let n = f.dim();
    let centered = Polynomial::from_terms(
        n,
        MultiIndex::all_up_to(n, k).into_iter().map(|alpha| {
            let c = f.get(p, &alpha) / S::from_bigint(&alpha.factorial().into());
            (alpha, c)
        }),
    )
    .expect("indices have length n");
    let a = f.cloud().point(p);
    let shift = PolyMap::new(
        n,
        (0..n)
            .map(|i| {
                Polynomial::var(n, i)
                    .sub(&Polynomial::constant(n, a[i].clone()))
                    .expect("same dimension")
            })
            .collect(),
    )
    .expect("same dimension");
    centered.compose(&shift).expect("same dimension")
}

/// `R_a^k F = F|_k - J^k(T_a^k F)` over the whole cloud.
pub fn remainder<S: Scalar>(f: &JetField<S>, a: &[S], k: u32) -> Result<JetField<S>> {
    let t = taylor_poly(f, a, k)?;
    f.truncate(k)?.sub(&jet_of_poly(&t, f.cloud(), k)?)
}

/// `(R_x^k F)_alpha(y)` evaluated directly from the coefficients at `x`.
fn remainder_component<S: Scalar>(f: &JetField<S>, x: usize, y: usize, alpha: &MultiIndex, k: u32) -> S {
    let (px, py) = (f.cloud().point(x), f.cloud().point(y));
    let diff: Vec<S> = py.iter().zip(px).map(|(a, b)| a.clone() - b.clone()).collect();
    let mut taylor = S::zero();
    for d in alpha.norm()..=k {
        for delta in MultiIndex::all_of_norm(f.dim(), d - alpha.norm()) {
            let gamma = alpha + &delta;
            let coeff = f.get(x, &gamma);
            if coeff.is_zero() {
                continue;
            }
            let mono = delta
                .exponents()
                .iter()
                .zip(&diff)
                .fold(S::one(), |m, (&e, h)| m * pow(h, e));
            taylor = taylor + coeff * mono / S::from_bigint(&delta.factorial().into());
        }
    }
    f.get(y, alpha) - taylor
}

fn check_subset<S: Scalar>(f: &JetField<S>, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= f.len()) {
        return Err(Error::NotInCloud(format!("#{bad}")));
    }
    Ok(())
}

/// `|F|_{K,k} = max_{x in K, |alpha| <= k} |F_alpha(x)|`; `subset` holds cloud indices.
pub fn seminorm_sup<S: Scalar>(f: &JetField<S>, subset: &[usize], k: u32) -> Result<f64> {
    check_subset(f, subset)?;
    check_order(k, f.order())?;
    let alphas = MultiIndex::all_up_to(f.dim(), k);
    Ok(subset
        .iter()
        .flat_map(|&p| alphas.iter().map(move |a| f.get(p, a).abs().to_f64()))
        .fold(0.0, f64::max))
}

/// Components of the Whitney seminorm `||F||_{K,k} = |F|_{K,k} + ||F||'_{K,k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhitneySeminorm {
    pub sup: f64,
    /// `max_{x != y in K, |alpha| <= k} |(R_x^k F)_alpha(y)| / |x - y|^{k - |alpha|}`
    pub quotient_sup: f64,
    pub total: f64,
    /// `(x, y, alpha)` attaining `quotient_sup`, as cloud indices.
    pub argmax: Option<(usize, usize, MultiIndex)>,
}

/// Whitney seminorm over the cloud indices in `subset`. With fewer than two
/// points the quotient part is defined as zero.
pub fn whitney_seminorm<S: Scalar>(f: &JetField<S>, subset: &[usize], k: u32) -> Result<WhitneySeminorm> {
    let sup = seminorm_sup(f, subset, k)?;
    let alphas = MultiIndex::all_up_to(f.dim(), k);
    let mut quotient_sup = 0.0;
    let mut argmax = None;
    for &x in subset {
        for &y in subset {
            if x == y {
                continue;
            }
            let dist = distance(f.cloud().point(x), f.cloud().point(y));
            for alpha in &alphas {
                let r = remainder_component(f, x, y, alpha, k).abs().to_f64();
                let q = r / dist.powi((k - alpha.norm()) as i32);
                if q > quotient_sup {
                    quotient_sup = q;
                    argmax = Some((x, y, alpha.clone()));
                }
            }
        }
    }
    Ok(WhitneySeminorm {
        sup,
        quotient_sup,
        total: sup + quotient_sup,
        argmax,
    })
}

/// Action of the vector field `sum_i xi_i d_i` on a jet:
/// `xi F = sum_i J^{m-1}(xi_i) d_i F`.
pub fn vf_apply<S: Scalar>(xi: &PolyMap<S>, f: &JetField<S>) -> Result<JetField<S>> {
    let n = f.dim();
    check_dim(n, xi.domain_dim())?;
    check_dim(n, xi.target_dim())?;
    if f.order() == 0 {
        return Err(Error::OrderMismatch(
            "vector fields need a jet of order at least 1".into(),
        ));
    }
    let m = f.order() - 1;
    let mut acc = JetField::zero(f.cloud().clone(), m);
    for (i, coeff) in xi.components().iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let c = jet_of_poly(coeff, f.cloud(), m)?;
        let d = jet_diff(f, &MultiIndex::unit(n, i))?;
        acc = acc.add(&jet_mul(&c, &d)?)?;
    }
    Ok(acc)
}

/// Restriction of `F` to the sub-cloud `target`, matching points within the
/// source cloud's tolerance.
pub fn restrict<S: Scalar>(f: &JetField<S>, target: &PointCloud<S>) -> Result<JetField<S>> {
    check_dim(f.dim(), target.dim())?;
    let idx = target
        .points()
        .iter()
        .map(|q| {
            f.cloud()
                .index_of(q)
                .ok_or_else(|| Error::NotInCloud(format_point(q)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JetField::from_fn(target.clone(), f.order(), |p, a| {
        f.get(idx[p], a)
    }))
}

/// The constant-one jet.
pub fn jet_one<S: Scalar>(cloud: &PointCloud<S>, m: u32) -> JetField<S> {
    JetField::from_fn(cloud.clone(), m, |_, a| {
        if a.is_zero() {
            S::one()
        } else {
            S::zero()
        }
    })
}
