use serde::{Deserialize, Serialize};

use super::{FinitePoset, PosetError};

/// Interchange form of a poset: keys sorted ascending, covers as index pairs
/// into that sorted list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<Vec<usize>>,
}

impl PosetJson {
    pub fn from_poset(p: &FinitePoset) -> Self {
        let mut order: Vec<usize> = (0..p.len()).collect();
        order.sort_by(|&a, &b| p.key(a).cmp(p.key(b)));
        let mut pos = vec![0usize; p.len()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        let mut covers: Vec<[usize; 2]> =
            p.cover_pairs().into_iter().map(|(a, b)| [pos[a], pos[b]]).collect();
        covers.sort_unstable();
        Self {
            elements: order.iter().map(|&x| p.key(x).to_string()).collect(),
            covers,
            rank: p.rank_function().map(|r| order.iter().map(|&x| r[x]).collect()),
        }
    }

    pub fn to_poset(&self) -> Result<FinitePoset, PosetError> {
        let pairs: Vec<(usize, usize)> = self.covers.iter().map(|c| (c[0], c[1])).collect();
        let p = FinitePoset::from_covers(self.elements.iter().cloned(), &pairs)?;
        match &self.rank {
            Some(r) => p.with_rank(r.clone()),
            None => Ok(p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_sorts_keys_and_round_trips() {
        let p = FinitePoset::from_covers(["z", "a", "m"], &[(1, 2), (2, 0)]).unwrap();
        let j = p.to_json();
        assert_eq!(j.elements, vec!["a", "m", "z"]);
        assert_eq!(j.covers, vec![[0, 1], [1, 2]]);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"elements":["a","m","z"],"covers":[[0,1],[1,2]]}"#);
        let back: PosetJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_poset().unwrap().to_json(), j);
    }
}
