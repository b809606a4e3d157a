use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::{FamilyTag, Graph, GraphError, Label};

/// JSON form of a graph. Edges are `(u, v)` with `u < v`, sorted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphEnvelope {
    pub family_tag: FamilyTag,
    pub n: usize,
    pub labels: Vec<Label>,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn to_envelope(&self) -> GraphEnvelope {
        GraphEnvelope {
            family_tag: self.family().clone(),
            n: self.n(),
            labels: self.labels().to_vec(),
            edges: self.edges(),
        }
    }

    pub fn from_envelope(env: &GraphEnvelope) -> Result<Graph, GraphError> {
        if env.labels.len() != env.n {
            return Err(GraphError::Parameter(format!("{} labels for {} vertices", env.labels.len(), env.n)));
        }
        let mut g = Graph::empty(env.labels.clone(), env.family_tag.clone());
        for &(u, v) in &env.edges {
            if u >= env.n || v >= env.n || u == v {
                return Err(GraphError::BadEdge(u, v));
            }
            g.set_edge(u, v);
        }
        g.validate()?;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_envelope()).expect("graph envelopes always serialize")
    }

    pub fn adjacency_text(&self) -> AdjacencyText<'_> {
        AdjacencyText(self)
    }
}

/// One line per vertex: `index: neighbour indices`, ascending.
pub struct AdjacencyText<'a>(pub &'a Graph);

impl fmt::Display for AdjacencyText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.0;
        let mut line = String::new();
        for v in 0..g.n() {
            line.clear();
            write!(line, "{v}:")?;
            for u in g.neighbors(v) {
                write!(line, " {u}")?;
            }
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{make_field, FieldElem};
    use crate::graphs::build_euclidean;
    use crate::qforms::{make_form, FormKind};

    #[test]
    fn envelope_round_trip_is_exact() {
        let form = make_form(make_field(3, 1).unwrap(), FormKind::PlusEven, 2).unwrap();
        let g = build_euclidean(&form, FieldElem(1)).unwrap();
        let json = g.to_json();
        assert_eq!(json, build_euclidean(&form, FieldElem(1)).unwrap().to_json());
        let back: GraphEnvelope = serde_json::from_str(&json).unwrap();
        assert_eq!(Graph::from_envelope(&back).unwrap(), g);
        assert!(json.starts_with(r#"{"family_tag":{"family":"euclidean","q":3,"dim":2,"form":"plus_even","a":1}"#));
    }

    #[test]
    fn adjacency_text_format() {
        let g = Graph::custom(3, &[(0, 1), (1, 2)], "P3").unwrap();
        assert_eq!(g.adjacency_text().to_string(), "0: 1\n1: 0 2\n2: 1\n");
        let isolated = Graph::custom(2, &[], "2K1").unwrap();
        assert_eq!(isolated.adjacency_text().to_string(), "0:\n1:\n");
    }

    #[test]
    fn malformed_envelopes_are_rejected() {
        let env = GraphEnvelope {
            family_tag: FamilyTag::Custom { name: "x".into() },
            n: 2,
            labels: vec![Label::Index(0), Label::Index(1)],
            edges: vec![(0, 2)],
        };
        assert!(Graph::from_envelope(&env).is_err());
    }
}
