//! Text formats.
//!
//! JSON: `{"n": 3, "arcs": [[tail, head, multiplicity], ...]}` where the
//! multiplicity is optional (default 1) and repeated slots add up.
//!
//! Edge list: a header line `n m`, then `m` lines `u v`. Repeated lines add
//! multiplicity and `u u` is a loop. Blank lines and `#` comments are skipped.

use serde_json::{json, Value};

use super::{Digraph, DigraphError, Result};

fn parse_err(msg: impl Into<String>) -> DigraphError {
    DigraphError::Parse(msg.into())
}

fn as_index(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| parse_err(format!("{} must be a nonnegative integer, got {}", what, v)))
}

impl Digraph {
    /// Parses either format, choosing JSON when the first non-blank character
    /// is `{`.
    pub fn parse(text: &str) -> Result<Digraph> {
        if text.trim_start().starts_with('{') {
            Self::from_json_str(text)
        } else {
            Self::from_edge_list(text)
        }
    }

    pub fn from_json_str(text: &str) -> Result<Digraph> {
        let v: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {}", e)))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Digraph> {
        let obj = v
            .as_object()
            .ok_or_else(|| parse_err("expected a JSON object with keys \"n\" and \"arcs\""))?;
        if let Some(k) = obj.keys().find(|k| *k != "n" && *k != "arcs") {
            return Err(parse_err(format!("unexpected key {:?}", k)));
        }
        let n = as_index(obj.get("n").ok_or_else(|| parse_err("missing key \"n\""))?, "\"n\"")? as usize;
        let mut d = Digraph::empty(n);
        let arcs = match obj.get("arcs") {
            None => return Ok(d),
            Some(a) => a
                .as_array()
                .ok_or_else(|| parse_err(format!("\"arcs\" must be an array, got {}", a)))?,
        };
        for (i, entry) in arcs.iter().enumerate() {
            let parts = entry
                .as_array()
                .filter(|p| p.len() == 2 || p.len() == 3)
                .ok_or_else(|| parse_err(format!("arcs[{}] = {} is not [tail, head] or [tail, head, multiplicity]", i, entry)))?;
            let t = as_index(&parts[0], &format!("arcs[{}] tail", i))? as usize;
            let h = as_index(&parts[1], &format!("arcs[{}] head", i))? as usize;
            let m = match parts.get(2) {
                Some(m) => as_index(m, &format!("arcs[{}] multiplicity", i))?,
                None => 1,
            };
            if t >= n || h >= n {
                return Err(parse_err(format!("arcs[{}] = {} has an endpoint outside 0..{}", i, entry, n)));
            }
            let total = d.mult(t, h) as u64 + m;
            let total = u32::try_from(total).map_err(|_| parse_err(format!("arcs[{}] multiplicity too large", i)))?;
            d.set_mult(t, h, total);
        }
        Ok(d)
    }

    pub fn from_edge_list(text: &str) -> Result<Digraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| parse_err("empty input"))?;
        let nums = |lineno: usize, l: &str| -> Result<Vec<usize>> {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| parse_err(format!("line {}: bad token {:?}", lineno, tok)))
                })
                .collect()
        };
        let hv = nums(hline, header)?;
        let [n, m] = hv[..] else {
            return Err(parse_err(format!("line {}: header must be \"n m\", got {:?}", hline, header)));
        };
        let mut d = Digraph::empty(n);
        let mut seen = 0;
        for (lineno, l) in lines {
            let v = nums(lineno, l)?;
            let [u, w] = v[..] else {
                return Err(parse_err(format!("line {}: expected \"u v\", got {:?}", lineno, l)));
            };
            if u >= n || w >= n {
                return Err(parse_err(format!("line {}: vertex out of range 0..{} in {:?}", lineno, n, l)));
            }
            d.set_mult(u, w, d.mult(u, w) + 1);
            seen += 1;
        }
        if seen != m {
            return Err(parse_err(format!("header announces {} arcs but {} were given", m, seen)));
        }
        Ok(d)
    }

    /// Canonical JSON: slots in row-major order, always with multiplicity.
    pub fn to_json(&self) -> Value {
        let arcs: Vec<Value> = self
            .arcs()
            .map(|(e, m)| json!([e.tail, e.head, m]))
            .collect();
        json!({ "n": self.n, "arcs": arcs })
    }

    /// Same content as [`Digraph::to_json`], with `n` written first.
    pub fn to_json_string(&self) -> String {
        let arcs: Vec<String> = self
            .arcs()
            .map(|(e, m)| format!("[{},{},{}]", e.tail, e.head, m))
            .collect();
        format!("{{\"n\":{},\"arcs\":[{}]}}", self.n, arcs.join(","))
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.arc_count());
        for (e, m) in self.arcs() {
            for _ in 0..m {
                out.push_str(&format!("{} {}\n", e.tail, e.head));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_examples() {
        let l1 = Digraph::parse(r#"{"n":1,"arcs":[[0,0,1]]}"#).unwrap();
        assert_eq!(l1, Digraph::cycle(1));
        let c2 = Digraph::parse(r#"{"n":2,"arcs":[[0,1,1],[1,0,1]]}"#).unwrap();
        assert_eq!(c2, Digraph::cycle(2));
        assert_eq!(Digraph::parse(r#"{"n":3,"arcs":[]}"#).unwrap(), Digraph::empty(3));
        let summed = Digraph::parse(r#"{"n":2,"arcs":[[0,1],[0,1,2]]}"#).unwrap();
        assert_eq!(summed.mult(0, 1), 3);
    }

    #[test]
    fn json_errors_name_the_problem() {
        let e = Digraph::parse(r#"{"n":2,"arcs":[[0,2]]}"#).unwrap_err();
        assert!(e.to_string().contains("arcs[0]"), "{}", e);
        let e = Digraph::parse(r#"{"n":-1}"#).unwrap_err();
        assert!(e.to_string().contains("\"n\""), "{}", e);
        let e = Digraph::parse(r#"{"n":2,"arcs":[[0,1,"x"]]}"#).unwrap_err();
        assert!(e.to_string().contains("multiplicity"), "{}", e);
        assert!(Digraph::parse(r#"{"n":2,"edges":[]}"#).is_err());
        assert!(Digraph::parse("{").is_err());
    }

    #[test]
    fn edge_list() {
        let d = Digraph::parse("2 3\n0 1\n1 0\n0 1\n").unwrap();
        assert_eq!(d.mult(0, 1), 2);
        assert_eq!(d.mult(1, 0), 1);
        assert_eq!(Digraph::parse("1 1\n0 0").unwrap(), Digraph::cycle(1));
        assert_eq!(Digraph::parse("# empty\n3 0\n").unwrap(), Digraph::empty(3));
        let e = Digraph::parse("2 1\n0 x\n").unwrap_err();
        assert!(e.to_string().contains("line 2") && e.to_string().contains("\"x\""), "{}", e);
        assert!(Digraph::parse("2 2\n0 1\n").is_err());
        assert!(Digraph::parse("2 1\n0 5\n").is_err());
    }

    #[test]
    fn serialization_is_canonical() {
        let d = Digraph::parse(r#"{"n":3,"arcs":[[2,0],[0,1,2],[2,0]]}"#).unwrap();
        assert_eq!(d.to_json_string(), r#"{"n":3,"arcs":[[0,1,2],[2,0,2]]}"#);
        assert_eq!(Digraph::parse(&d.to_json_string()).unwrap(), d);
        assert_eq!(Digraph::parse(&d.to_edge_list()).unwrap(), d);
    }
}
