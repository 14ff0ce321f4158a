//! JSON forms of instances and prices. Infinite prices are written `"inf"`.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::instance::{pair_index, CostModel, Instance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonCost {
    Finite(f64),
    Named(String),
}

impl From<f64> for JsonCost {
    fn from(c: f64) -> Self {
        if c.is_infinite() {
            JsonCost::Named("inf".into())
        } else {
            JsonCost::Finite(c)
        }
    }
}

impl JsonCost {
    pub fn value(&self) -> std::result::Result<f64, String> {
        match self {
            JsonCost::Finite(c) => Ok(*c),
            JsonCost::Named(s) if s == "inf" => Ok(f64::INFINITY),
            JsonCost::Named(s) => Err(format!("unknown cost {s:?}")),
        }
    }
}

/// `{n, model, p, seed, order, costs: [[u, v, cost]...]}`; `order[v]` is
/// the true rank of element `v`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceJson {
    pub n: usize,
    pub model: String,
    pub p: Option<f64>,
    pub seed: u64,
    pub order: Vec<usize>,
    pub costs: Vec<(usize, usize, JsonCost)>,
}

impl From<&Instance> for InstanceJson {
    fn from(inst: &Instance) -> Self {
        InstanceJson {
            n: inst.n(),
            model: inst.model().name().to_string(),
            p: inst.model().p(),
            seed: inst.seed(),
            order: inst.ranks(),
            costs: inst.pairs().map(|(u, v, c)| (u, v, JsonCost::from(c))).collect(),
        }
    }
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string(&InstanceJson::from(inst)).expect("instance serializes")
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let raw: InstanceJson = match serde_json::from_str(text) {
        Ok(r) => r,
        Err(e) => return param(format!("malformed instance JSON: {e}")),
    };
    let p = raw.p.unwrap_or(f64::NAN);
    let model = match raw.model.as_str() {
        "uniform" => CostModel::Uniform,
        "boolean" => CostModel::boolean(p)?,
        "unit-inf" => CostModel::unit_infinite(p)?,
        other => return param(format!("unknown model {other:?}")),
    };
    if raw.order.len() != raw.n {
        return param("order length does not match n");
    }
    let mut costs = vec![f64::NAN; raw.n * raw.n.saturating_sub(1) / 2];
    for (u, v, c) in raw.costs {
        if u >= raw.n || v >= raw.n || u == v {
            return param(format!("bad pair ({u}, {v})"));
        }
        costs[pair_index(u, v)] = match c.value() {
            Ok(c) => c,
            Err(e) => return param(e),
        };
    }
    Instance::from_parts(model, raw.order, costs, raw.seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        for model in [
            CostModel::Uniform,
            CostModel::boolean(0.4).unwrap(),
            CostModel::unit_infinite(0.3).unwrap(),
        ] {
            let inst = Instance::generate(7, model, 99).unwrap();
            let text = instance_to_json(&inst);
            assert_eq!(instance_from_json(&text).unwrap(), inst);
        }
    }

    #[test]
    fn missing_pairs_are_rejected() {
        let inst = Instance::generate(3, CostModel::Uniform, 1).unwrap();
        let mut j = InstanceJson::from(&inst);
        j.costs.pop();
        let text = serde_json::to_string(&j).unwrap();
        assert!(instance_from_json(&text).is_err());
    }
}
