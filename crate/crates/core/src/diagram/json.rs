//! Nested term form, e.g. `{"seq": [{"copy": "A"}, {"par": [{"id": ["A"]}, {"delete": "A"}]}]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{par_all, seq_all, Diagram, DiagramError, Term, TypeVector};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum Repr {
    Id(TypeVector),
    Gen {
        name: String,
        dom: TypeVector,
        cod: TypeVector,
    },
    Copy(String),
    Delete(String),
    Compare(String),
    Swap(String, String),
    Seq(Vec<Repr>),
    Par(Vec<Repr>),
}

fn to_repr(d: &Diagram) -> Repr {
    match d.term() {
        Term::Id(ts) => Repr::Id(ts.clone()),
        Term::Gen { name, dom, cod } => Repr::Gen {
            name: name.clone(),
            dom: dom.clone(),
            cod: cod.clone(),
        },
        Term::Copy(a) => Repr::Copy(a.clone()),
        Term::Delete(a) => Repr::Delete(a.clone()),
        Term::Compare(a) => Repr::Compare(a.clone()),
        Term::Swap(a, b) => Repr::Swap(a.clone(), b.clone()),
        Term::Seq(a, b) => Repr::Seq(vec![to_repr(a), to_repr(b)]),
        Term::Par(a, b) => Repr::Par(vec![to_repr(a), to_repr(b)]),
    }
}

fn from_repr(r: Repr) -> Result<Diagram, DiagramError> {
    Ok(match r {
        Repr::Id(ts) => Diagram::id(ts),
        Repr::Gen { name, dom, cod } => Diagram::gen(&name, dom, cod),
        Repr::Copy(a) => Diagram::copy(&a),
        Repr::Delete(a) => Diagram::delete(&a),
        Repr::Compare(a) => Diagram::compare(&a),
        Repr::Swap(a, b) => Diagram::swap(&a, &b),
        Repr::Seq(parts) => seq_all(
            &parts
                .into_iter()
                .map(from_repr)
                .collect::<Result<Vec<_>, _>>()?,
        )?,
        Repr::Par(parts) => par_all(
            &parts
                .into_iter()
                .map(from_repr)
                .collect::<Result<Vec<_>, _>>()?,
        ),
    })
}

pub fn diagram_to_json(d: &Diagram) -> Value {
    serde_json::to_value(to_repr(d)).expect("diagram terms serialize")
}

pub fn diagram_from_json(v: &Value) -> Result<Diagram, DiagramError> {
    let r: Repr =
        serde_json::from_value(v.clone()).map_err(|e| DiagramError::Json(e.to_string()))?;
    from_repr(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_nested_terms() {
        let v = json!({"seq": [{"copy": "A"}, {"par": [{"id": ["A"]}, {"delete": "A"}]}]});
        let d = diagram_from_json(&v).unwrap();
        assert_eq!(d.dom(), ["A"]);
        assert_eq!(d.cod(), ["A"]);
        assert_eq!(diagram_from_json(&diagram_to_json(&d)).unwrap(), d);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(diagram_from_json(&json!({"seq": []})).is_err());
        assert!(diagram_from_json(&json!({"seq": [{"copy": "A"}, {"copy": "A"}]})).is_err());
        assert!(diagram_from_json(&json!({"spin": "A"})).is_err());
        let g = json!({"gen": {"name": "f", "dom": ["A"], "cod": []}});
        assert_eq!(diagram_from_json(&g).unwrap().cod().len(), 0);
        assert_eq!(
            diagram_from_json(&json!({"swap": ["A", "B"]}))
                .unwrap()
                .cod(),
            ["B", "A"]
        );
    }
}
