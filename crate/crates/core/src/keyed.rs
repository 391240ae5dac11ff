//! Serde adapter storing a `Vec<T>` as an object keyed by decimal index
//! (`{"0": .., "1": ..}`), the wire shape used by every payload.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<T, S>(items: &[T], serializer: S) -> Result<S::Ok, S::Error>
where
    T: Serialize,
    S: Serializer,
{
    serializer.collect_map(items.iter().enumerate().map(|(i, v)| (i.to_string(), v)))
}

pub fn deserialize<'de, T, D>(deserializer: D) -> Result<Vec<T>, D::Error>
where
    T: Deserialize<'de>,
    D: Deserializer<'de>,
{
    let map = BTreeMap::<String, T>::deserialize(deserializer)?;
    let mut indexed = Vec::with_capacity(map.len());
    for (key, value) in map {
        let idx: usize = key
            .parse()
            .map_err(|_| D::Error::custom(format!("non-integer key `{key}`")))?;
        if key != idx.to_string() {
            return Err(D::Error::custom(format!("non-canonical key `{key}`")));
        }
        indexed.push((idx, value));
    }
    indexed.sort_by_key(|(i, _)| *i);
    for (expected, (idx, _)) in indexed.iter().enumerate() {
        if *idx != expected {
            return Err(D::Error::custom(format!("keys must be 0..{}, missing {expected}", indexed.len())));
        }
    }
    Ok(indexed.into_iter().map(|(_, v)| v).collect())
}
