use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::rational::{self, Rational};
use crate::tail::{Domain, EventuallyAffine, TailFunctional, TailMeasure, Weights};

/// A rational read from a `"p/q"` string or a JSON integer, written back as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Rational);

impl Default for Rat {
    fn default() -> Self {
        Rat(Rational::zero())
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&rational::format(&self.0))
    }
}

struct RatVisitor;

impl Visitor<'_> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational as a \"p/q\" string or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
        rational::parse(v)
            .map(Rat)
            .ok_or_else(|| E::custom("invalid rational"))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Ok(Rat(rational::int(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        Ok(Rat(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, _: f64) -> Result<Rat, E> {
        Err(E::custom("invalid rational"))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(RatVisitor)
    }
}

pub fn unwrap_all(v: Vec<Rat>) -> Vec<Rational> {
    v.into_iter().map(|r| r.0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainTag {
    #[serde(rename = "EC")]
    Ec,
    #[serde(rename = "EA")]
    Ea,
}

impl From<DomainTag> for Domain {
    fn from(tag: DomainTag) -> Self {
        match tag {
            DomainTag::Ec => Domain::EventuallyConstant,
            DomainTag::Ea => Domain::EventuallyAffine,
        }
    }
}

fn domain_name(domain: Domain) -> &'static str {
    match domain {
        Domain::EventuallyConstant => "EC",
        Domain::EventuallyAffine => "EA",
    }
}

/// `f(i) = prefix[i]` below the prefix length, `slope * i + offset` afterwards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EaDoc {
    #[serde(default)]
    pub prefix: Vec<Rat>,
    #[serde(default)]
    pub slope: Rat,
    #[serde(default)]
    pub offset: Rat,
}

impl From<EaDoc> for EventuallyAffine {
    fn from(doc: EaDoc) -> Self {
        EventuallyAffine::new(unwrap_all(doc.prefix), doc.slope.0, doc.offset.0)
    }
}

pub fn weights_from(map: BTreeMap<usize, Rat>) -> Weights {
    map.into_iter().map(|(i, w)| (i, w.0)).collect()
}

// Writers. Every rational is emitted as its canonical string.

pub fn rat(x: &Rational) -> Value {
    Value::String(rational::format(x))
}

pub fn rats(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rat).collect())
}

pub fn matrix(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| rats(r)).collect())
}

pub fn weights(w: &Weights) -> Value {
    Value::Object(w.iter().map(|(i, v)| (i.to_string(), rat(v))).collect())
}

pub fn measure(m: &TailMeasure) -> Value {
    json!({ "weights": weights(m.weights()), "limit_charge": rat(m.limit_charge()) })
}

pub fn functional(phi: &TailFunctional) -> Value {
    json!({
        "domain": domain_name(phi.domain()),
        "weights": weights(phi.weights()),
        "limit_charge": rat(phi.limit_charge()),
        "slope_charge": rat(phi.slope_charge()),
    })
}

/// Typed access to a JSON object, with errors naming the offending path.
pub struct Reader<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

fn rat_value(v: &Value, path: &str) -> Result<Rational, String> {
    v.as_str()
        .and_then(rational::parse)
        .ok_or_else(|| format!("invalid rational at {path}"))
}

fn rat_list(v: &Value, path: &str) -> Result<Vec<Rational>, String> {
    let items = v
        .as_array()
        .ok_or_else(|| format!("expected an array at {path}"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| rat_value(x, &format!("{path}[{i}]")))
        .collect()
}

impl<'a> Reader<'a> {
    pub fn new(value: &'a Value) -> Result<Self, String> {
        Self::at(value, String::new())
    }

    fn at(value: &'a Value, path: String) -> Result<Self, String> {
        let map = value
            .as_object()
            .ok_or_else(|| format!("expected an object at {}", Self::show(&path)))?;
        Ok(Reader { map, path })
    }

    fn show(path: &str) -> &str {
        if path.is_empty() {
            "the top level"
        } else {
            path
        }
    }

    fn sub(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn get(&self, key: &str) -> Result<&'a Value, String> {
        self.map
            .get(key)
            .ok_or_else(|| format!("missing field {}", self.sub(key)))
    }

    pub fn str(&self, key: &str) -> Result<&'a str, String> {
        self.get(key)?
            .as_str()
            .ok_or_else(|| format!("expected a string at {}", self.sub(key)))
    }

    pub fn bool(&self, key: &str) -> Result<bool, String> {
        self.get(key)?
            .as_bool()
            .ok_or_else(|| format!("expected a boolean at {}", self.sub(key)))
    }

    pub fn index(&self, key: &str) -> Result<usize, String> {
        let v = self.get(key)?;
        v.as_u64()
            .and_then(|n| usize::try_from(n).ok())
            .ok_or_else(|| format!("expected a natural number at {}", self.sub(key)))
    }

    pub fn opt_index(&self, key: &str) -> Result<Option<usize>, String> {
        match self.get(key)? {
            Value::Null => Ok(None),
            _ => self.index(key).map(Some),
        }
    }

    pub fn opt_bool(&self, key: &str) -> Result<Option<bool>, String> {
        match self.get(key)? {
            Value::Null => Ok(None),
            _ => self.bool(key).map(Some),
        }
    }

    pub fn rat(&self, key: &str) -> Result<Rational, String> {
        rat_value(self.get(key)?, &self.sub(key))
    }

    pub fn rats(&self, key: &str) -> Result<Vec<Rational>, String> {
        rat_list(self.get(key)?, &self.sub(key))
    }

    pub fn matrix(&self, key: &str) -> Result<Vec<Vec<Rational>>, String> {
        let path = self.sub(key);
        let rows = self
            .get(key)?
            .as_array()
            .ok_or_else(|| format!("expected an array at {path}"))?;
        rows.iter()
            .enumerate()
            .map(|(i, r)| rat_list(r, &format!("{path}[{i}]")))
            .collect()
    }

    pub fn child(&self, key: &str) -> Result<Reader<'a>, String> {
        Reader::at(self.get(key)?, self.sub(key))
    }

    pub fn children(&self, key: &str) -> Result<Vec<Reader<'a>>, String> {
        let path = self.sub(key);
        let items = self
            .get(key)?
            .as_array()
            .ok_or_else(|| format!("expected an array at {path}"))?;
        items
            .iter()
            .enumerate()
            .map(|(i, v)| Reader::at(v, format!("{path}[{i}]")))
            .collect()
    }

    pub fn weights(&self, key: &str) -> Result<Weights, String> {
        let w = self.child(key)?;
        w.map
            .iter()
            .map(|(k, v)| {
                let path = format!("{}.{k}", w.path);
                let i = k
                    .parse::<usize>()
                    .map_err(|_| format!("invalid index at {path}"))?;
                Ok((i, rat_value(v, &path)?))
            })
            .collect()
    }

    pub fn measure(&self, key: &str) -> Result<TailMeasure, String> {
        let m = self.child(key)?;
        TailMeasure::new(m.weights("weights")?, m.rat("limit_charge")?)
            .map_err(|e| format!("{key}: {e}"))
    }

    pub fn functional(&self, key: &str) -> Result<TailFunctional, String> {
        let f = self.child(key)?;
        let domain = match f.str("domain")? {
            "EC" => Domain::EventuallyConstant,
            "EA" => Domain::EventuallyAffine,
            other => return Err(format!("unknown domain {other:?} at {}", f.sub("domain"))),
        };
        let slope_charge = f.rat("slope_charge")?;
        if domain == Domain::EventuallyConstant && !slope_charge.is_zero() {
            return Err(format!(
                "nonzero slope charge on the EC domain at {}",
                f.path
            ));
        }
        TailFunctional::new(
            domain,
            f.weights("weights")?,
            f.rat("limit_charge")?,
            slope_charge,
        )
        .map_err(|e| format!("{key}: {e}"))
    }
}
