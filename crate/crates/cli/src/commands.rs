use std::fs;

use serde_json::{json, Value};
use whitney_core::actions::{
    average_poly, average_poly_circle, check_inv1, check_inv2, extend_invariant, groupoid_arrows,
    required_nodes, ActingGroup, ArrowElement, CircleAction, FiniteGroup, GroupoidArrow, Inv1Report, Inv2Report,
};
use whitney_core::invariants::{
    catalog, classify_cotangent, find_entry, hilbert_pullback, isotropy, orbit_type_label, verify_entry,
    OrbitTag, OrbitTypeLabel,
};
use whitney_core::jetcalc::{jet_diff, jet_mul, jet_of_poly, remainder, taylor_poly, whitney_seminorm, JetField, PointCloud};
use whitney_core::pullback::{check_commutativity, plan, pullback_comb, pullback_multi};
use whitney_core::symbolic::{generic_rank, Polynomial};
use whitney_core::{Error, MultiIndex, Scalar};

use crate::args::{Command, DemoCommand, HilbertCommand, Method, RunConfig};
use crate::error::{CliError, CliResult};
use crate::formats::{
    format_polymap, matrix_to_json, parse_indices, parse_point, parse_points, parse_polymap, parse_polynomial,
    scalar_to_json, variables_used, GroupDoc, JetDoc, LoadedGroup,
};

struct Ctx<'a> {
    cfg: &'a RunConfig,
}

impl Ctx<'_> {
    fn tol<S: Scalar>(&self) -> f64 {
        if S::EXACT {
            0.0
        } else {
            self.cfg.tol
        }
    }

    fn input(&self, k: usize) -> CliResult<String> {
        let path = self.cfg.inputs.get(k).ok_or_else(|| {
            CliError::Input(format!("this command needs at least {} --in file(s)", k + 1))
        })?;
        fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })
    }

    fn jet<S: Scalar>(&self, k: usize) -> CliResult<JetField<S>> {
        let doc: JetDoc = serde_json::from_str(&self.input(k)?)?;
        Ok(doc.to_field(self.tol::<S>())?)
    }

    fn group<S: Scalar>(&self, k: usize, max_order: usize) -> CliResult<LoadedGroup<S>> {
        let doc: GroupDoc = serde_json::from_str(&self.input(k)?)?;
        Ok(doc.load(self.tol::<S>(), max_order)?)
    }

    fn finite_group<S: Scalar>(&self, k: usize, max_order: usize) -> CliResult<FiniteGroup<S>> {
        match self.group::<S>(k, max_order)?.group {
            ActingGroup::Finite(g) => Ok(g),
            ActingGroup::Circle(_) => Err(Error::Unsupported("this command needs a finite group".into()).into()),
        }
    }

    fn cloud<S: Scalar>(&self, text: &str) -> CliResult<PointCloud<S>> {
        let points = parse_points::<S>(text)?;
        let Some(first) = points.first() else {
            return Err(CliError::Input("at least one point is required".into()));
        };
        let dim = first.len();
        Ok(PointCloud::with_tolerance(dim, points, self.tol::<S>())?)
    }
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn jet_out<S: Scalar>(f: &JetField<S>) -> String {
    let mut s = serde_json::to_string_pretty(&JetDoc::from_field(f)).expect("jet documents serialize");
    s.push('\n');
    s
}

fn point_json<S: Scalar>(p: &[S]) -> Value {
    Value::Array(p.iter().map(scalar_to_json).collect())
}

fn float_json(v: f64) -> Value {
    Value::String(v.to_text())
}

fn alpha_json(a: &MultiIndex) -> Value {
    json!(a.exponents())
}

fn label_json(l: &OrbitTypeLabel) -> Value {
    json!({ "tag": l.tag.to_string(), "class": l.class, "witness": l.witness })
}

fn arrow_json<S: Scalar>(group: &ActingGroup<S>, a: &GroupoidArrow) -> Value {
    let element = match (&a.element, group) {
        (ArrowElement::Finite(g), ActingGroup::Finite(grp)) => json!({
            "index": g,
            "label": grp.element(*g).label().unwrap_or("e"),
        }),
        (ArrowElement::Angle(t), _) => json!({ "angle": float_json(*t) }),
        (ArrowElement::Finite(g), _) => json!({ "index": g }),
    };
    json!({ "element": element, "source": a.source, "target": a.target, "unit": a.is_unit() })
}

fn inv1_json<S: Scalar>(group: &ActingGroup<S>, r: &Inv1Report) -> Value {
    json!({
        "holds": r.holds,
        "arrows_checked": r.arrows_checked,
        "violations": r.violations.iter().map(|v| json!({
            "arrow": arrow_json(group, &v.arrow),
            "alpha": alpha_json(&v.alpha),
            "at_source": v.at_source,
            "pulled_back": v.pulled_back,
        })).collect::<Vec<_>>(),
    })
}

fn inv2_json(r: &Inv2Report) -> Value {
    json!({
        "holds": r.holds,
        "violations": r.violations.iter().map(|v| json!({
            "generator": v.generator,
            "point": v.point,
            "alpha": alpha_json(&v.alpha),
            "value": v.value,
        })).collect::<Vec<_>>(),
    })
}

fn points_dim<S: Scalar>(c: &PointCloud<S>) -> usize {
    c.dim()
}

pub fn run<S: Scalar>(cfg: &RunConfig, command: &Command) -> CliResult<String> {
    let ctx = Ctx { cfg };
    let tol = ctx.tol::<S>();
    Ok(match command {
        Command::Jet { poly, points } => {
            let cloud = ctx.cloud::<S>(points)?;
            let f = parse_polynomial::<S>(poly, points_dim(&cloud))?;
            jet_out(&jet_of_poly(&f, &cloud, cfg.order.unwrap_or(2))?)
        }
        Command::Product => jet_out(&jet_mul(&ctx.jet::<S>(0)?, &ctx.jet::<S>(1)?)?),
        Command::Diff { beta } => {
            let beta = MultiIndex::new(parse_indices(beta)?);
            jet_out(&jet_diff(&ctx.jet::<S>(0)?, &beta)?)
        }
        Command::Taylor { at, k } => {
            let f = ctx.jet::<S>(0)?;
            let k = k.unwrap_or(f.order());
            format!("{}\n", taylor_poly(&f, &parse_point::<S>(at)?, k)?)
        }
        Command::Remainder { at, k } => {
            let f = ctx.jet::<S>(0)?;
            let k = k.unwrap_or(f.order());
            jet_out(&remainder(&f, &parse_point::<S>(at)?, k)?)
        }
        Command::Seminorm { k, subset } => {
            let f = ctx.jet::<S>(0)?;
            let k = k.unwrap_or(f.order());
            let subset: Vec<usize> = match subset {
                Some(s) => parse_indices(s)?.into_iter().map(|i| i as usize).collect(),
                None => (0..f.len()).collect(),
            };
            let w = whitney_seminorm(&f, &subset, k)?;
            pretty(json!({
                "k": k,
                "subset": subset,
                "sup": float_json(w.sup),
                "quotient_sup": float_json(w.quotient_sup),
                "total": float_json(w.total),
                "argmax": w.argmax.map(|(x, y, a)| json!({
                    "x": point_json(f.cloud().point(x)),
                    "y": point_json(f.cloud().point(y)),
                    "alpha": alpha_json(&a),
                })),
            }))
        }
        Command::Pullback { map, points, method } => {
            let f = ctx.jet::<S>(0)?;
            let source = ctx.cloud::<S>(points)?;
            let phi = parse_polymap::<S>(map, source.dim())?;
            let m = cfg.order.unwrap_or(f.order());
            let p = plan(phi, &source, f.cloud(), tol)?;
            jet_out(&match method {
                Method::Multi => pullback_multi(&p, &f, m)?,
                Method::Comb => pullback_comb(&p, &f, m)?,
            })
        }
        Command::CheckComm { poly, map, points } => {
            let source = ctx.cloud::<S>(points)?;
            let phi = parse_polymap::<S>(map, source.dim())?;
            let f = parse_polynomial::<S>(poly, phi.target_dim())?;
            let r = check_commutativity(&f, &phi, &source, cfg.order.unwrap_or(2), tol)?;
            pretty(json!({
                "holds": r.holds,
                "max_deviation": float_json(r.max_deviation),
                "worst": r.worst.map(|(p, a)| json!({ "point": p, "alpha": alpha_json(&a) })),
            }))
        }
        Command::GroupClosure { max_order } => {
            let g = ctx.finite_group::<S>(0, *max_order)?;
            pretty(json!({
                "order": g.order(),
                "abelian": g.is_abelian(),
                "elements": g.elements().iter().enumerate().map(|(i, e)| json!({
                    "index": i,
                    "label": e.label().unwrap_or("e"),
                    "matrix": matrix_to_json(e.matrix()),
                })).collect::<Vec<_>>(),
                "table": g.table(),
            }))
        }
        Command::Arrows { points, max_order } => {
            let g = ctx.group::<S>(0, *max_order)?.group;
            let cloud = ctx.cloud::<S>(points)?;
            let arrows = groupoid_arrows(&g, &cloud, tol)?;
            pretty(json!({
                "count": arrows.len(),
                "arrows": arrows.iter().map(|a| arrow_json(&g, a)).collect::<Vec<_>>(),
            }))
        }
        Command::CheckInv1 { max_order } => {
            let g = ctx.group::<S>(0, *max_order)?.group;
            let f = ctx.jet::<S>(1)?;
            let arrows = groupoid_arrows(&g, f.cloud(), tol)?;
            pretty(inv1_json(&g, &check_inv1(&g, &arrows, &f, tol)?))
        }
        Command::CheckInv2 { max_order } => {
            let lie = ctx.group::<S>(0, *max_order)?.lie;
            let f = ctx.jet::<S>(1)?;
            pretty(inv2_json(&check_inv2(&lie, &f, tol)?))
        }
        Command::Average { poly, nodes, max_order } => {
            let g = ctx.group::<S>(0, *max_order)?.group;
            let f = parse_polynomial::<S>(poly, g.dim())?;
            match g {
                ActingGroup::Finite(g) => format!("{}\n", average_poly(&g, &f)?),
                ActingGroup::Circle(c) => {
                    let n = nodes.unwrap_or_else(|| required_nodes(&c, &f));
                    format!("{}\n", average_poly_circle(&c, &f, n)?)
                }
            }
        }
        Command::Extend { max_order } => {
            let g = ctx.finite_group::<S>(0, *max_order)?;
            let f = ctx.jet::<S>(1)?;
            jet_out(&extend_invariant(&g, f.cloud(), &f, tol)?)
        }
        Command::Hilbert { command } => match command {
            HilbertCommand::List => {
                let mut entries = Vec::new();
                for e in catalog::<S>() {
                    let report = verify_entry(&e, cfg.seed, tol)?;
                    entries.push(json!({
                        "name": e.name,
                        "group": e.group.to_string(),
                        "dimension": e.dim(),
                        "invariants": e.invariants.components().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        "lie_generators": e.lie_generators.len(),
                        "finite_subgroup_order": e.finite.order(),
                        "verified": report.holds,
                        "failures": report.failures,
                        "generic_rank": report.generic_rank,
                    }));
                }
                pretty(Value::Array(entries))
            }
            HilbertCommand::Pullback { entry, points } => {
                let e = find_entry::<S>(entry)?;
                let h = ctx.jet::<S>(0)?;
                let z = ctx.cloud::<S>(points)?;
                jet_out(&hilbert_pullback(&e, &h, &z, cfg.order.unwrap_or(h.order()), tol)?)
            }
        },
        Command::Isotropy { point, max_order } => {
            let g = ctx.finite_group::<S>(0, *max_order)?;
            let z = parse_point::<S>(point)?;
            let iso = isotropy(&g, &z, tol)?;
            pretty(json!({
                "order": iso.indices.len(),
                "elements": iso.indices,
                "label": label_json(&orbit_type_label(&g, &z, tol)?),
            }))
        }
        Command::ClassifyCotangent { n, q, p } => {
            let label = classify_cotangent(*n, &parse_point::<S>(q)?, &parse_point::<S>(p)?, cfg.tol)?;
            pretty(label_json(&label))
        }
        Command::Rank { map, dim, trials } => {
            let dim = match dim {
                Some(d) => *d,
                None => map.split(';').map(variables_used).collect::<Result<Vec<_>, _>>()?.into_iter().max().unwrap_or(0),
            };
            let phi = parse_polymap::<S>(map, dim)?;
            pretty(json!({
                "map": format_polymap(&phi),
                "domain": dim,
                "target": phi.target_dim(),
                "rank": generic_rank(&phi, *trials, cfg.seed)?,
            }))
        }
        Command::Demo { command } => match command {
            DemoCommand::Circle => demo_circle::<S>(tol)?,
            DemoCommand::Cotangent { n } => demo_cotangent::<S>(*n, cfg.tol)?,
        },
    })
}

const CIRCLE_NOTE: &str = "The infinitesimal condition is applied literally: xi F must vanish up to \
order m-1. J2(x1^2 + x2^2) at (0,1) passes although its (2,0) component is 2, so the description of \
invariant jets at (0,1) as those with F_alpha = 0 unless alpha lies in {0} x N is not reproduced by \
this check.";

fn demo_circle<S: Scalar>(tol: f64) -> CliResult<String> {
    let circle = CircleAction::planar();
    let group: ActingGroup<S> = circle.clone().into();
    let z = PointCloud::with_tolerance(2, vec![vec![S::zero(), S::one()]], tol)?;
    let arrows = groupoid_arrows(&group, &z, tol)?;
    let a = circle.generator::<S>();
    let xi_at = a.apply(z.point(0))?;
    let r2 = parse_polynomial::<S>("x1^2 + x2^2", 2)?;
    let y = Polynomial::var(2, 1);
    let mut checks = Vec::new();
    for (name, f) in [("J2(x1^2 + x2^2)", &r2), ("J2(x2)", &y)] {
        let jet = jet_of_poly(f, &z, 2)?;
        let inv1 = check_inv1(&group, &arrows, &jet, tol)?;
        let inv2 = check_inv2(std::slice::from_ref(&a), &jet, tol)?;
        checks.push(json!({
            "jet": name,
            "coefficients": jet.indices().iter().map(|al| json!({
                "alpha": alpha_json(al),
                "value": scalar_to_json(&jet.get(0, al)),
            })).collect::<Vec<_>>(),
            "inv1": inv1.holds,
            "inv2": inv2_json(&inv2),
        }));
    }
    Ok(pretty(json!({
        "action": "circle on R2, weight 1",
        "generator": matrix_to_json(&a),
        "cloud": [point_json(z.point(0))],
        "fundamental_field_at_point": point_json(&xi_at),
        "arrows": arrows.iter().map(|ar| arrow_json(&group, ar)).collect::<Vec<_>>(),
        "only_unit_arrows": arrows.iter().all(|ar| ar.is_unit()),
        "checks": checks,
        "note": CIRCLE_NOTE,
    })))
}

fn demo_cotangent<S: Scalar>(n: usize, tol: f64) -> CliResult<String> {
    let entry = find_entry::<S>(&format!("O{n} on T*R{n}")).ok();
    let unit = |i: usize, scale: i64| -> Vec<S> {
        (0..n).map(|k| if k == i { S::from_i64(scale) } else { S::zero() }).collect()
    };
    let samples = [
        ("origin", vec![S::zero(); n], vec![S::zero(); n]),
        ("parallel", unit(0, 1), unit(0, 2)),
        ("generic", unit(0, 1), unit(1.min(n - 1), 1)),
    ];
    let mut out = Vec::new();
    for (name, q, p) in samples {
        let label = classify_cotangent(n, &q, &p, tol)?;
        let mut item = json!({
            "sample": name,
            "q": point_json(&q),
            "p": point_json(&p),
            "stratum": match label.tag {
                OrbitTag::Full => "V_(G)".to_string(),
                _ => format!("V_({})", label.class),
            },
            "label": label_json(&label),
        });
        if let Some(e) = &entry {
            let qp: Vec<S> = q.iter().chain(&p).cloned().collect();
            item["hilbert_map"] = point_json(&e.invariants.eval(&qp)?);
            item["signed_permutation_isotropy_order"] = json!(isotropy(&e.finite, &qp, tol)?.indices.len());
        }
        out.push(item);
    }
    Ok(pretty(json!({
        "action": format!("O{n} acting diagonally on (q, p) in R{n} x R{n}"),
        "samples": out,
    })))
}
