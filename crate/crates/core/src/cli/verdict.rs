use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use super::input::Instance;
use super::json::{self, Reader};
use super::Command;
use crate::coherence::{
    detect_sure_win, extend_to_probability, represent_functional, separating_measures,
    superhedge_price, CoherenceVerdict, ConeSpec, Extension, NotPositiveWitness, PayoffFn,
    Probability, Representation, SeparatingMeasures, SuperhedgePrice,
};
use crate::concave::{
    coherence_bound, common_extension, eval_generated, restriction_monotonicity, shapley_witness,
    CoherenceBound, CommonExtension, Comparison, GeneratedValue, MonotonicityReport,
    ShapleyOutcome,
};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Rational;
use crate::tail::{
    daniell_check, orderly_diagnostic, riesz_decompose, truncation_limits, two_sided_truncation,
    verify_decomposition, Check, Counterexample, CounterexampleKind, DaniellVerdict, OrderlyReport,
    RieszDecomposition, TruncationLimits, ORDERLY_NOTE,
};

/// Window on which Daniell counterexample families are re-checked.
pub const DANIELL_WINDOW: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Rational,
    pub limits: TruncationLimits,
}

/// The outcome of one command, before serialization.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Verdict {
    SureWin(CoherenceVerdict),
    Price(SuperhedgePrice),
    Separate(SeparatingMeasures),
    Extend(Extension),
    Represent(Representation),
    GammaEval(GeneratedValue),
    CoreWitness(ShapleyOutcome),
    CommonExtension {
        bound: CoherenceBound,
        extension: CommonExtension,
        monotonicity: Option<MonotonicityReport>,
    },
    Riesz {
        decomposition: RieszDecomposition,
        evaluation: Option<Evaluation>,
    },
    Daniell(DaniellVerdict),
    Orderly(OrderlyReport),
}

pub fn solve(instance: &Instance) -> Result<Verdict> {
    Ok(match instance {
        Instance::SureWin(cone) => Verdict::SureWin(detect_sure_win(cone)?),
        Instance::Price(cone, f) => Verdict::Price(superhedge_price(cone, f)?),
        Instance::Separate(cone, enumerate) => {
            Verdict::Separate(separating_measures(cone, *enumerate)?)
        }
        Instance::Extend(a) => Verdict::Extend(extend_to_probability(a)?),
        Instance::Represent(spec, positive) => {
            Verdict::Represent(represent_functional(spec, *positive)?)
        }
        Instance::GammaEval(anchors, f) => Verdict::GammaEval(eval_generated(anchors, f)?),
        Instance::CoreWitness(anchors, subset) => {
            Verdict::CoreWitness(shapley_witness(anchors, subset)?)
        }
        Instance::CommonExtension(problem, pairs) => {
            let bound = coherence_bound(problem)?;
            let extension = common_extension(problem)?;
            if matches!(bound, CoherenceBound::Finite { .. })
                != matches!(extension, CommonExtension::Charge(_))
            {
                return Err(Error::Internal(
                    "coherence bound and common extension disagree".into(),
                ));
            }
            let monotonicity = if pairs.is_empty() {
                None
            } else {
                Some(restriction_monotonicity(problem, pairs)?)
            };
            Verdict::CommonExtension {
                bound,
                extension,
                monotonicity,
            }
        }
        Instance::Riesz(phi, f) => {
            let evaluation = match f {
                Some(f) => Some(Evaluation {
                    value: phi.evaluate(f)?,
                    limits: truncation_limits(phi, f)?,
                }),
                None => None,
            };
            Verdict::Riesz {
                decomposition: riesz_decompose(phi),
                evaluation,
            }
        }
        Instance::Daniell(phi) => Verdict::Daniell(daniell_check(phi)),
        Instance::Orderly {
            h,
            target,
            dominators,
            m,
        } => Verdict::Orderly(orderly_diagnostic(h, target, dominators, m)?),
    })
}

fn probabilities(ps: &[Probability]) -> Value {
    Value::Array(ps.iter().map(|p| json::rats(p.weights())).collect())
}

fn check_json(c: &Check) -> Value {
    json!({ "holds": c.holds, "witness": c.witness })
}

fn comparison_json(c: &Comparison) -> Value {
    json!({
        "lower": c.lower,
        "upper": c.upper,
        "lower_basis": c.lower_basis,
        "upper_basis": c.upper_basis,
        "nonnegative": c.nonnegative,
        "lower_value": json::rat(&c.lower_value),
        "upper_value": json::rat(&c.upper_value),
        "holds": c.holds,
    })
}

/// The verdict payload: a `verdict` tag plus its certificate fields.
pub fn to_json(verdict: &Verdict) -> Map<String, Value> {
    let value = match verdict {
        Verdict::SureWin(CoherenceVerdict::SureWin(lambda)) => {
            json!({ "verdict": "sure_win", "lambda": json::rats(lambda) })
        }
        Verdict::SureWin(CoherenceVerdict::Separating(m)) => {
            json!({ "verdict": "separating", "probability": json::rats(m.weights()) })
        }
        Verdict::Price(SuperhedgePrice::Finite {
            value,
            alpha,
            lambda,
            dual,
        }) => json!({
            "verdict": "finite",
            "value": json::rat(value),
            "primal": { "alpha": json::rat(alpha), "lambda": json::rats(lambda) },
            "dual": json::rats(dual.weights()),
        }),
        Verdict::Price(SuperhedgePrice::MinusInfinity { sure_win }) => {
            json!({ "verdict": "minus_infinity", "value": "-inf", "sure_win": json::rats(sure_win) })
        }
        Verdict::Separate(SeparatingMeasures::Empty { sure_win }) => {
            json!({ "verdict": "empty", "sure_win": json::rats(sure_win) })
        }
        Verdict::Separate(SeparatingMeasures::NonEmpty { sample, vertices }) => {
            let mut v = json!({ "verdict": "nonempty", "sample": json::rats(sample.weights()) });
            if let Some(vs) = vertices {
                v["vertices"] = probabilities(vs);
            }
            v
        }
        Verdict::Extend(Extension::Probability(m)) => {
            json!({ "verdict": "probability", "probability": json::rats(m.weights()) })
        }
        Verdict::Extend(Extension::SureWin(stakes)) => {
            json!({ "verdict": "sure_win", "stakes": json::rats(stakes) })
        }
        Verdict::Represent(Representation::Signed(m)) => {
            json!({ "verdict": "signed", "charge": json::rats(m) })
        }
        Verdict::Represent(Representation::Positive(m)) => {
            json!({ "verdict": "positive", "charge": json::rats(m.weights()) })
        }
        Verdict::Represent(Representation::NotPositive(w)) => json!({
            "verdict": "not_positive",
            "coefficients": json::rats(&w.coefficients),
            "payoff": json::rats(w.payoff.values()),
            "value": json::rat(&w.value),
        }),
        Verdict::GammaEval(GeneratedValue::Finite {
            value,
            decomposition,
            charge,
        }) => json!({
            "verdict": "finite",
            "value": json::rat(value),
            "decomposition": json::rats(decomposition),
            "charge": json::rats(charge),
        }),
        Verdict::GammaEval(GeneratedValue::MinusInfinity { farkas }) => {
            json!({ "verdict": "minus_infinity", "value": "-inf", "farkas": json::rats(farkas) })
        }
        Verdict::GammaEval(GeneratedValue::PlusInfinity { ray }) => {
            json!({ "verdict": "plus_infinity", "value": "+inf", "ray": json::rats(ray) })
        }
        Verdict::CoreWitness(ShapleyOutcome::Witness {
            gamma_c,
            lambda_c,
            hull_weights,
            decomposition,
        }) => json!({
            "verdict": "witness",
            "gamma_c": json::rat(gamma_c),
            "lambda_c": json::rats(lambda_c.weights()),
            "hull_weights": json::rats(hull_weights),
            "decomposition": json::rats(decomposition),
        }),
        Verdict::CoreWitness(ShapleyOutcome::Incoherent { sure_win }) => {
            json!({ "verdict": "incoherent", "sure_win": json::rats(sure_win) })
        }
        Verdict::CommonExtension {
            bound,
            extension,
            monotonicity,
        } => {
            let mut v = match (bound, extension) {
                (
                    CoherenceBound::Finite {
                        bound,
                        coefficients,
                    },
                    CommonExtension::Charge(mu),
                ) => json!({
                    "verdict": "extension",
                    "charge": json::matrix(mu),
                    "bound": { "value": json::rat(bound), "coefficients": json::matrix(coefficients) },
                }),
                (_, CommonExtension::Incoherent { ray })
                | (CoherenceBound::Unbounded { ray }, _) => {
                    json!({ "verdict": "incoherent", "ray": json::matrix(ray) })
                }
            };
            if let Some(report) = monotonicity {
                v["monotonicity"] = json!({
                    "coherent": report.coherent,
                    "comparisons": report.comparisons.iter().map(comparison_json).collect::<Vec<_>>(),
                });
            }
            v
        }
        Verdict::Riesz {
            decomposition,
            evaluation,
        } => {
            let mut v = json!({
                "verdict": "decomposed",
                "phi1": json::rat(&decomposition.phi1),
                "measure": json::measure(&decomposition.m),
                "perp": json::functional(&decomposition.perp),
            });
            if let Some(e) = evaluation {
                v["evaluation"] = json!({
                    "value": json::rat(&e.value),
                    "bounded_part": json::rat(&e.limits.bounded_part),
                    "residual": json::rat(&e.limits.residual),
                    "stabilization_index": e.limits.stabilization_index,
                });
            }
            v
        }
        Verdict::Daniell(DaniellVerdict::Daniell) => json!({ "verdict": "daniell" }),
        Verdict::Daniell(DaniellVerdict::Counterexample(c)) => json!({
            "verdict": "counterexample",
            "kind": kind_name(c.kind),
            "family": c.describe(),
            "start": c.start,
            "limit": json::rat(&c.limit),
        }),
        Verdict::Orderly(report) => json!({
            "verdict": if report.all_checks_hold() { "checks_hold" } else { "checks_fail" },
            "pointwise_domination": report.pointwise_domination.iter().map(check_json).collect::<Vec<_>>(),
            "monotone": report.monotone.iter().map(check_json).collect::<Vec<_>>(),
            "dominator_integrals": json::rats(&report.dominator_integrals),
            "note": report.note,
        }),
    };
    match value {
        Value::Object(map) => map,
        _ => unreachable!("verdict payloads are objects"),
    }
}

fn kind_name(kind: CounterexampleKind) -> &'static str {
    match kind {
        CounterexampleKind::LimitCharge => "limit_charge",
        CounterexampleKind::SlopeCharge => "slope_charge",
    }
}

fn probability(r: &Reader, key: &str) -> Result<Probability, String> {
    Probability::new(r.rats(key)?).map_err(|e| format!("{key}: {e}"))
}

fn checks(r: &Reader, key: &str) -> Result<Vec<Check>, String> {
    r.children(key)?
        .iter()
        .map(|c| {
            Ok(Check {
                holds: c.bool("holds")?,
                witness: c.opt_index("witness")?,
            })
        })
        .collect()
}

fn unknown(tag: &str) -> String {
    format!("unknown verdict {tag:?}")
}

/// Reads a verdict payload back into typed form.
pub fn from_json(command: Command, doc: &Value) -> Result<Verdict, String> {
    let r = Reader::new(doc)?;
    let tag = r.str("verdict")?;
    Ok(match (command, tag) {
        (Command::SureWin, "sure_win") => {
            Verdict::SureWin(CoherenceVerdict::SureWin(r.rats("lambda")?))
        }
        (Command::SureWin, "separating") => Verdict::SureWin(CoherenceVerdict::Separating(
            probability(&r, "probability")?,
        )),
        (Command::Price, "finite") => {
            let primal = r.child("primal")?;
            Verdict::Price(SuperhedgePrice::Finite {
                value: r.rat("value")?,
                alpha: primal.rat("alpha")?,
                lambda: primal.rats("lambda")?,
                dual: probability(&r, "dual")?,
            })
        }
        (Command::Price, "minus_infinity") => {
            if r.str("value")? != "-inf" {
                return Err("value must be \"-inf\"".into());
            }
            Verdict::Price(SuperhedgePrice::MinusInfinity {
                sure_win: r.rats("sure_win")?,
            })
        }
        (Command::Separate, "empty") => Verdict::Separate(SeparatingMeasures::Empty {
            sure_win: r.rats("sure_win")?,
        }),
        (Command::Separate, "nonempty") => {
            let vertices = if r.has("vertices") {
                let rows = r.matrix("vertices")?;
                Some(
                    rows.into_iter()
                        .map(Probability::new)
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| format!("vertices: {e}"))?,
                )
            } else {
                None
            };
            Verdict::Separate(SeparatingMeasures::NonEmpty {
                sample: probability(&r, "sample")?,
                vertices,
            })
        }
        (Command::Extend, "probability") => {
            Verdict::Extend(Extension::Probability(probability(&r, "probability")?))
        }
        (Command::Extend, "sure_win") => Verdict::Extend(Extension::SureWin(r.rats("stakes")?)),
        (Command::Represent, "signed") => {
            Verdict::Represent(Representation::Signed(r.rats("charge")?))
        }
        (Command::Represent, "positive") => {
            Verdict::Represent(Representation::Positive(probability(&r, "charge")?))
        }
        (Command::Represent, "not_positive") => {
            Verdict::Represent(Representation::NotPositive(NotPositiveWitness {
                coefficients: r.rats("coefficients")?,
                payoff: PayoffFn::new(r.rats("payoff")?),
                value: r.rat("value")?,
            }))
        }
        (Command::GammaEval, "finite") => Verdict::GammaEval(GeneratedValue::Finite {
            value: r.rat("value")?,
            decomposition: r.rats("decomposition")?,
            charge: r.rats("charge")?,
        }),
        (Command::GammaEval, "minus_infinity") => {
            Verdict::GammaEval(GeneratedValue::MinusInfinity {
                farkas: r.rats("farkas")?,
            })
        }
        (Command::GammaEval, "plus_infinity") => Verdict::GammaEval(GeneratedValue::PlusInfinity {
            ray: r.rats("ray")?,
        }),
        (Command::CoreWitness, "witness") => Verdict::CoreWitness(ShapleyOutcome::Witness {
            gamma_c: r.rat("gamma_c")?,
            lambda_c: probability(&r, "lambda_c")?,
            hull_weights: r.rats("hull_weights")?,
            decomposition: r.rats("decomposition")?,
        }),
        (Command::CoreWitness, "incoherent") => Verdict::CoreWitness(ShapleyOutcome::Incoherent {
            sure_win: r.rats("sure_win")?,
        }),
        (Command::CommonExtension, "extension" | "incoherent") => {
            let (bound, extension) = if tag == "extension" {
                let b = r.child("bound")?;
                (
                    CoherenceBound::Finite {
                        bound: b.rat("value")?,
                        coefficients: b.matrix("coefficients")?,
                    },
                    CommonExtension::Charge(r.matrix("charge")?),
                )
            } else {
                let ray = r.matrix("ray")?;
                (
                    CoherenceBound::Unbounded { ray: ray.clone() },
                    CommonExtension::Incoherent { ray },
                )
            };
            let monotonicity = if r.has("monotonicity") {
                let m = r.child("monotonicity")?;
                let comparisons = m
                    .children("comparisons")?
                    .iter()
                    .map(|c| {
                        Ok(Comparison {
                            lower: c.index("lower")?,
                            upper: c.index("upper")?,
                            lower_basis: c.index("lower_basis")?,
                            upper_basis: c.index("upper_basis")?,
                            nonnegative: c.bool("nonnegative")?,
                            lower_value: c.rat("lower_value")?,
                            upper_value: c.rat("upper_value")?,
                            holds: c.opt_bool("holds")?,
                        })
                    })
                    .collect::<Result<_, String>>()?;
                Some(MonotonicityReport {
                    coherent: m.bool("coherent")?,
                    comparisons,
                })
            } else {
                None
            };
            Verdict::CommonExtension {
                bound,
                extension,
                monotonicity,
            }
        }
        (Command::Riesz, "decomposed") => {
            let decomposition = RieszDecomposition {
                m: r.measure("measure")?,
                perp: r.functional("perp")?,
                phi1: r.rat("phi1")?,
            };
            let evaluation = if r.has("evaluation") {
                let e = r.child("evaluation")?;
                Some(Evaluation {
                    value: e.rat("value")?,
                    limits: TruncationLimits {
                        bounded_part: e.rat("bounded_part")?,
                        residual: e.rat("residual")?,
                        stabilization_index: e.index("stabilization_index")?,
                    },
                })
            } else {
                None
            };
            Verdict::Riesz {
                decomposition,
                evaluation,
            }
        }
        (Command::Daniell, "daniell") => Verdict::Daniell(DaniellVerdict::Daniell),
        (Command::Daniell, "counterexample") => {
            let kind = match r.str("kind")? {
                "limit_charge" => CounterexampleKind::LimitCharge,
                "slope_charge" => CounterexampleKind::SlopeCharge,
                other => return Err(format!("unknown counterexample kind {other:?}")),
            };
            let c = Counterexample {
                kind,
                start: r.index("start")?,
                limit: r.rat("limit")?,
            };
            if r.str("family")? != c.describe() {
                return Err("family description does not match its kind".into());
            }
            Verdict::Daniell(DaniellVerdict::Counterexample(c))
        }
        (Command::Orderly, "checks_hold" | "checks_fail") => {
            if r.str("note")? != ORDERLY_NOTE {
                return Err("unexpected note".into());
            }
            let report = OrderlyReport {
                pointwise_domination: checks(&r, "pointwise_domination")?,
                monotone: checks(&r, "monotone")?,
                dominator_integrals: r.rats("dominator_integrals")?,
                note: ORDERLY_NOTE,
            };
            if (tag == "checks_hold") != report.all_checks_hold() {
                return Err("verdict tag contradicts the individual checks".into());
            }
            Verdict::Orderly(report)
        }
        (_, tag) => return Err(unknown(tag)),
    })
}

fn ensure(condition: bool, what: &str) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(format!("certificate rejected: {what}"))
    }
}

/// `m` is a vertex of `{ m in simplex : m(g) <= 0 for every generator }`: the
/// active constraints have full rank.
fn is_vertex(cone: &ConeSpec, m: &Probability) -> bool {
    let n = cone.scenario().len();
    let mut active = vec![vec![num_traits::One::one(); n]];
    active.extend(
        cone.generators()
            .iter()
            .filter(|g| m.expect(g).is_zero())
            .map(|g| g.values().to_vec()),
    );
    active.extend((0..n).filter(|&i| m.weights()[i].is_zero()).map(|i| {
        let mut e = vec![Rational::zero(); n];
        e[i] = num_traits::One::one();
        e
    }));
    linalg::rank(&active) == n
}

/// `c` reports the relation `lower <= upper` faithfully, with a genuine first violation as witness.
fn check_is_faithful(
    c: &Check,
    lower: &crate::tail::EventuallyAffine,
    upper: &crate::tail::EventuallyAffine,
) -> bool {
    c.witness == lower.first_exceedance(upper)
        && c.holds == c.witness.is_none()
        && c.witness.is_none_or(|i| lower.at(i) > upper.at(i))
}

/// Re-checks every certificate in `verdict` against the instance by direct evaluation.
pub fn check(instance: &Instance, verdict: &Verdict) -> Result<(), String> {
    match (instance, verdict) {
        (Instance::SureWin(cone), Verdict::SureWin(v)) => {
            ensure(v.verify(cone), "sure-win or separating certificate")
        }
        (Instance::Price(cone, f), Verdict::Price(p)) => {
            ensure(p.verify(cone, f), "superhedge and dual")
        }
        (Instance::Separate(cone, enumerate), Verdict::Separate(s)) => match s {
            SeparatingMeasures::Empty { sure_win } => {
                ensure(cone.is_sure_win(sure_win), "sure win")
            }
            SeparatingMeasures::NonEmpty { sample, vertices } => {
                ensure(cone.separates(sample), "sample does not separate")?;
                ensure(vertices.is_some() == *enumerate, "vertex list presence")?;
                if let Some(vs) = vertices {
                    ensure(!vs.is_empty(), "empty vertex list")?;
                    ensure(
                        vs.windows(2).all(|w| w[0] < w[1]),
                        "vertices not strictly ordered",
                    )?;
                    ensure(
                        vs.iter().all(|v| cone.separates(v) && is_vertex(cone, v)),
                        "vertex certificate",
                    )?;
                }
                Ok(())
            }
        },
        (Instance::Extend(a), Verdict::Extend(e)) => ensure(e.verify(a), "extension or sure win"),
        (Instance::Represent(spec, positive), Verdict::Represent(rep)) => {
            ensure(
                *positive || matches!(rep, Representation::Signed(_)),
                "signed representation expected",
            )?;
            ensure(
                !*positive || !matches!(rep, Representation::Signed(_)),
                "positive verdict expected",
            )?;
            ensure(rep.verify(spec), "representation")
        }
        (Instance::GammaEval(anchors, f), Verdict::GammaEval(g)) => {
            ensure(g.verify(anchors, f), "generated value")
        }
        (Instance::CoreWitness(anchors, subset), Verdict::CoreWitness(outcome)) => {
            let len = anchors.anchors().len();
            ensure(
                !subset.is_empty() && subset.iter().all(|&s| s < len),
                "subset out of range",
            )?;
            if let ShapleyOutcome::Witness { lambda_c, .. } = outcome {
                ensure(
                    lambda_c.len() == anchors.scenario().len(),
                    "core probability length",
                )?;
            }
            ensure(outcome.verify(anchors, subset), "core witness or sure win")
        }
        (
            Instance::CommonExtension(problem, pairs),
            Verdict::CommonExtension {
                bound,
                extension,
                monotonicity,
            },
        ) => {
            ensure(bound.verify(problem), "coherence bound")?;
            ensure(extension.verify(problem), "common extension")?;
            ensure(
                matches!(bound, CoherenceBound::Finite { .. })
                    == matches!(extension, CommonExtension::Charge(_)),
                "bound and extension disagree",
            )?;
            ensure(
                monotonicity.is_some() == !pairs.is_empty(),
                "monotonicity report presence",
            )?;
            if let Some(report) = monotonicity {
                ensure(
                    report.coherent == matches!(extension, CommonExtension::Charge(_)),
                    "coherence flag",
                )?;
                let members = problem.members();
                let mut expected = 0;
                for &(lower, upper) in pairs {
                    let (Some(lo), Some(up)) = (members.get(lower), members.get(upper)) else {
                        return Err("certificate rejected: pair out of range".into());
                    };
                    expected += lo.basis.len();
                    for c in report
                        .comparisons
                        .iter()
                        .filter(|c| c.lower == lower && c.upper == upper)
                    {
                        let (Some(b), Some(u)) =
                            (lo.basis.get(c.lower_basis), up.basis.get(c.upper_basis))
                        else {
                            return Err("certificate rejected: basis index out of range".into());
                        };
                        let nonnegative = b.values().iter().all(|v| *v >= Rational::zero());
                        ensure(
                            b == u
                                && c.nonnegative == nonnegative
                                && c.lower_value == lo.values[c.lower_basis]
                                && c.upper_value == up.values[c.upper_basis]
                                && c.holds == nonnegative.then(|| c.upper_value >= c.lower_value),
                            "comparison",
                        )?;
                    }
                }
                ensure(report.comparisons.len() == expected, "comparison count")?;
            }
            Ok(())
        }
        (
            Instance::Riesz(phi, f),
            Verdict::Riesz {
                decomposition,
                evaluation,
            },
        ) => {
            ensure(verify_decomposition(phi, decomposition), "decomposition")?;
            ensure(evaluation.is_some() == f.is_some(), "evaluation presence")?;
            if let (Some(f), Some(e)) = (f, evaluation) {
                let at = |n: usize| {
                    phi.evaluate(&two_sided_truncation(f, n))
                        .map_err(|err| err.to_string())
                };
                let limits = &e.limits;
                let index = limits.stabilization_index;
                ensure(phi.evaluate(f).as_ref() == Ok(&e.value), "value")?;
                ensure(
                    decomposition.perp.evaluate(f).as_ref() == Ok(&limits.residual),
                    "residual equals perp",
                )?;
                ensure(
                    &limits.bounded_part + &limits.residual == e.value,
                    "bounded part plus residual",
                )?;
                ensure(
                    at(index)? == limits.bounded_part,
                    "value at stabilization index",
                )?;
                ensure(
                    index == 0 || at(index - 1)? != limits.bounded_part,
                    "stabilization index not minimal",
                )?;
                // Past every value seen by the weights and the limit charge nothing changes.
                let mut far = phi
                    .weights()
                    .keys()
                    .map(|&i| f.at(i).abs())
                    .fold(Rational::zero(), |a, b| a.max(b));
                far = far.max(f.offset().abs());
                let far = crate::rational::ceil_to_int(&far);
                let far = num_traits::ToPrimitive::to_usize(&far).ok_or("horizon too large")?;
                ensure(
                    at(index.max(far) + 1)? == limits.bounded_part,
                    "value after stabilization",
                )
            } else {
                Ok(())
            }
        }
        (Instance::Daniell(phi), Verdict::Daniell(d)) => match d {
            DaniellVerdict::Daniell => ensure(
                phi.limit_charge().is_zero() && phi.slope_charge().is_zero(),
                "continuity claim",
            ),
            DaniellVerdict::Counterexample(c) => {
                ensure(c.verify(phi, DANIELL_WINDOW), "counterexample family")
            }
        },
        (
            Instance::Orderly {
                h,
                target,
                dominators,
                m,
            },
            Verdict::Orderly(report),
        ) => {
            ensure(
                report.pointwise_domination.len() == h.len(),
                "domination length",
            )?;
            ensure(
                report.monotone.len() == dominators.len().saturating_sub(1),
                "monotone length",
            )?;
            ensure(
                report.dominator_integrals.len() == dominators.len(),
                "integral length",
            )?;
            for ((hn, d), c) in h.iter().zip(dominators).zip(&report.pointwise_domination) {
                ensure(
                    check_is_faithful(c, &hn.sub(target).abs(), d),
                    "domination check",
                )?;
            }
            for (pair, c) in dominators.windows(2).zip(&report.monotone) {
                ensure(check_is_faithful(c, &pair[1], &pair[0]), "monotone check")?;
            }
            for (d, v) in dominators.iter().zip(&report.dominator_integrals) {
                ensure(m.integrate(d).as_ref() == Ok(v), "dominator integral")?;
            }
            Ok(())
        }
        _ => Err("verdict does not belong to this command".into()),
    }
}
