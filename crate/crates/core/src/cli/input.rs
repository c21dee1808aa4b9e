use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::json::{unwrap_all, weights_from, DomainTag, EaDoc, Rat};
use super::{CliError, Command};
use crate::coherence::{ConeSpec, FunctionalSpec, PartialAssignment, PayoffFn, Scenario};
use crate::concave::{Anchor, AnchorSet, ExtensionProblem};
use crate::tail::{EventuallyAffine, TailFunctional, TailMeasure};
use crate::Result;

fn payoffs(rows: Vec<Vec<Rat>>) -> Vec<PayoffFn> {
    rows.into_iter()
        .map(|r| PayoffFn::new(unwrap_all(r)))
        .collect()
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub states: Vec<String>,
    pub generators: Vec<Vec<Rat>>,
}

impl ConeDoc {
    fn cone(self) -> Result<ConeSpec> {
        ConeSpec::new(Scenario::new(self.states)?, payoffs(self.generators))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub states: Vec<String>,
    pub generators: Vec<Vec<Rat>>,
    pub claim: Vec<Rat>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparateDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub states: Vec<String>,
    pub generators: Vec<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub enumerate: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub event: Vec<String>,
    pub value: Rat,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub states: Vec<String>,
    pub entries: Vec<EntryDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub states: Vec<String>,
    pub basis: Vec<Vec<Rat>>,
    pub values: Vec<Rat>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub positive: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorDoc {
    pub payoff: Vec<Rat>,
    pub value: Rat,
}

fn anchors(states: Vec<String>, docs: Vec<AnchorDoc>, membership_only: bool) -> Result<AnchorSet> {
    let scenario = Scenario::new(states)?;
    let anchors = docs
        .into_iter()
        .map(|a| Anchor::new(PayoffFn::new(unwrap_all(a.payoff)), a.value.0))
        .collect();
    if membership_only {
        AnchorSet::membership_only(scenario, anchors)
    } else {
        AnchorSet::new(scenario, anchors)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub states: Vec<String>,
    pub anchors: Vec<AnchorDoc>,
    pub claim: Vec<Rat>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub membership_only: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoreDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub states: Vec<String>,
    pub anchors: Vec<AnchorDoc>,
    pub subset: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberDoc {
    pub tau: Vec<String>,
    pub basis: Vec<Vec<Rat>>,
    pub values: Vec<Rat>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommonDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub omega: Vec<String>,
    pub base: Vec<String>,
    pub members: Vec<MemberDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalDoc {
    pub domain: DomainTag,
    #[serde(default)]
    pub weights: BTreeMap<usize, Rat>,
    #[serde(default)]
    pub limit_charge: Rat,
    #[serde(default)]
    pub slope_charge: Rat,
}

impl FunctionalDoc {
    fn functional(self) -> Result<TailFunctional> {
        TailFunctional::new(
            self.domain.into(),
            weights_from(self.weights),
            self.limit_charge.0,
            self.slope_charge.0,
        )
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RieszDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub functional: FunctionalDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<EaDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DaniellDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub functional: FunctionalDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    #[serde(default)]
    pub weights: BTreeMap<usize, Rat>,
    #[serde(default)]
    pub limit_charge: Rat,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderlyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u64>,
    pub h: Vec<EaDoc>,
    pub target: EaDoc,
    pub dominators: Vec<EaDoc>,
    pub measure: MeasureDoc,
}

/// A validated instance, ready for the library.
#[derive(Clone, Debug)]
pub enum Instance {
    SureWin(ConeSpec),
    Price(ConeSpec, PayoffFn),
    Separate(ConeSpec, bool),
    Extend(PartialAssignment),
    Represent(FunctionalSpec, bool),
    GammaEval(AnchorSet, PayoffFn),
    CoreWitness(AnchorSet, Vec<usize>),
    CommonExtension(ExtensionProblem, Vec<(usize, usize)>),
    Riesz(TailFunctional, Option<EventuallyAffine>),
    Daniell(TailFunctional),
    Orderly {
        h: Vec<EventuallyAffine>,
        target: EventuallyAffine,
        dominators: Vec<EventuallyAffine>,
        m: TailMeasure,
    },
}

fn typed<T: DeserializeOwned>(value: Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let message = if path == "." {
            e.inner().to_string()
        } else {
            format!("{} at {path}", e.inner())
        };
        CliError::schema(message)
    })
}

/// Parses JSON text and checks the optional version field.
pub fn document(text: &str) -> Result<Value, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::json(e.to_string()))?;
    if let Some(v) = value.get("schema_version") {
        if v.as_u64() != Some(super::SCHEMA_VERSION) {
            return Err(CliError::schema(format!(
                "unsupported schema_version {v}, expected {}",
                super::SCHEMA_VERSION
            )));
        }
    }
    Ok(value)
}

/// The instance document in canonical form: sorted keys, rationals as reduced strings.
pub fn canonical(command: Command, value: Value) -> Result<Value, CliError> {
    fn again<T: DeserializeOwned + Serialize>(value: Value) -> Result<Value, CliError> {
        let doc: T = typed(value)?;
        serde_json::to_value(doc).map_err(|e| CliError::internal(e.to_string()))
    }
    match command {
        Command::SureWin => again::<ConeDoc>(value),
        Command::Price => again::<PriceDoc>(value),
        Command::Separate => again::<SeparateDoc>(value),
        Command::Extend => again::<ExtendDoc>(value),
        Command::Represent => again::<RepresentDoc>(value),
        Command::GammaEval => again::<GammaDoc>(value),
        Command::CoreWitness => again::<CoreDoc>(value),
        Command::CommonExtension => again::<CommonDoc>(value),
        Command::Riesz => again::<RieszDoc>(value),
        Command::Daniell => again::<DaniellDoc>(value),
        Command::Orderly => again::<OrderlyDoc>(value),
    }
}

pub fn instance(command: Command, value: Value) -> Result<Instance, CliError> {
    let built = match command {
        Command::SureWin => typed::<ConeDoc>(value)?.cone().map(Instance::SureWin),
        Command::Price => {
            let d: PriceDoc = typed(value)?;
            let cone = ConeDoc {
                schema_version: None,
                states: d.states,
                generators: d.generators,
            };
            cone.cone().and_then(|c| {
                let claim = PayoffFn::new(unwrap_all(d.claim));
                crate::coherence::check_len("claim", c.scenario().len(), claim.len())?;
                Ok(Instance::Price(c, claim))
            })
        }
        Command::Separate => {
            let d: SeparateDoc = typed(value)?;
            let cone = ConeDoc {
                schema_version: None,
                states: d.states,
                generators: d.generators,
            };
            cone.cone().map(|c| Instance::Separate(c, d.enumerate))
        }
        Command::Extend => {
            let d: ExtendDoc = typed(value)?;
            Scenario::new(d.states)
                .and_then(|s| {
                    PartialAssignment::from_labels(
                        s,
                        d.entries
                            .into_iter()
                            .map(|e| (e.event, e.value.0))
                            .collect(),
                    )
                })
                .map(Instance::Extend)
        }
        Command::Represent => {
            let d: RepresentDoc = typed(value)?;
            Scenario::new(d.states)
                .and_then(|s| FunctionalSpec::new(s, payoffs(d.basis), unwrap_all(d.values)))
                .map(|spec| Instance::Represent(spec, d.positive))
        }
        Command::GammaEval => {
            let d: GammaDoc = typed(value)?;
            anchors(d.states, d.anchors, d.membership_only).and_then(|a| {
                let claim = PayoffFn::new(unwrap_all(d.claim));
                crate::coherence::check_len("claim", a.scenario().len(), claim.len())?;
                Ok(Instance::GammaEval(a, claim))
            })
        }
        Command::CoreWitness => {
            let d: CoreDoc = typed(value)?;
            anchors(d.states, d.anchors, false).map(|a| Instance::CoreWitness(a, d.subset))
        }
        Command::CommonExtension => {
            let d: CommonDoc = typed(value)?;
            Scenario::new(d.omega)
                .and_then(|omega| {
                    let base = Scenario::new(d.base)?;
                    let members = d
                        .members
                        .into_iter()
                        .map(|m| (m.tau, payoffs(m.basis), unwrap_all(m.values)))
                        .collect();
                    ExtensionProblem::from_labels(omega, base, members)
                })
                .map(|p| Instance::CommonExtension(p, d.pairs))
        }
        Command::Riesz => {
            let d: RieszDoc = typed(value)?;
            d.functional
                .functional()
                .map(|phi| Instance::Riesz(phi, d.f.map(Into::into)))
        }
        Command::Daniell => typed::<DaniellDoc>(value)?
            .functional
            .functional()
            .map(Instance::Daniell),
        Command::Orderly => {
            let d: OrderlyDoc = typed(value)?;
            TailMeasure::new(weights_from(d.measure.weights), d.measure.limit_charge.0).map(|m| {
                Instance::Orderly {
                    h: d.h.into_iter().map(Into::into).collect(),
                    target: d.target.into(),
                    dominators: d.dominators.into_iter().map(Into::into).collect(),
                    m,
                }
            })
        }
    };
    built.map_err(CliError::from_library)
}
