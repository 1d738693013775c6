//! JSON graph descriptions, one object per graph:
//!
//! ```text
//! {"type":"cycle","n":8}
//! {"type":"complete","n":8}
//! {"type":"circulant","n":8,"conn":[1,7]}
//! {"type":"circulant","n":2,"conn":[1],"weights":{"1":2.0}}
//! {"type":"hypercube","d":3}
//! {"type":"group","factors":[2,4],"conn":[[1,0],[0,1],[0,3]]}
//! ```
//!
//! `weights` is optional; connection elements without an entry get weight 1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, QwalkError, Result};
use crate::graphs::{
    make_complete, make_cycle, make_hypercube, CirculantSpec, Graph, GroupCirculantSpec,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GraphSpec {
    Cycle { n: usize },
    Complete { n: usize },
    Circulant {
        n: usize,
        conn: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<BTreeMap<String, f64>>,
    },
    Hypercube { d: usize },
    Group { factors: Vec<usize>, conn: Vec<Vec<usize>> },
}

impl GraphSpec {
    /// Syntax errors carry a line and column; well-formed JSON that does
    /// not describe a graph is an invalid argument.
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| QwalkError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        serde_json::from_value(value)
            .map_err(|e| QwalkError::InvalidArgument(format!("invalid graph spec: {e}")))
    }

    pub fn build(&self) -> Result<Graph> {
        Ok(match self {
            GraphSpec::Cycle { n } => make_cycle(*n)?.into(),
            GraphSpec::Complete { n } => make_complete(*n)?.into(),
            GraphSpec::Circulant { n, conn, weights } => circulant(*n, conn, weights.as_ref())?.into(),
            GraphSpec::Hypercube { d } => make_hypercube(*d)?.into(),
            GraphSpec::Group { factors, conn } => {
                GroupCirculantSpec::new(factors.clone(), conn.iter().cloned())?.into()
            }
        })
    }
}

fn circulant(n: usize, conn: &[usize], weights: Option<&BTreeMap<String, f64>>) -> Result<CirculantSpec> {
    let mut w: BTreeMap<usize, f64> = conn.iter().map(|&d| (d, 1.0)).collect();
    for (key, &value) in weights.into_iter().flatten() {
        let d: usize = match key.trim().parse() {
            Ok(d) => d,
            Err(_) => return invalid(format!("weights key {key:?} is not a residue")),
        };
        match w.get_mut(&d) {
            Some(slot) => *slot = value,
            None => return invalid(format!("weights key {d} is not in the connection set")),
        }
    }
    CirculantSpec::weighted(n, w)
}

pub fn load_graph(text: &str) -> Result<Graph> {
    GraphSpec::parse(text)?.build()
}
