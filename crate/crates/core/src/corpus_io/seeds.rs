use std::fmt;
use std::fs;
use std::marker::PhantomData;
use std::path::Path;

use indexmap::IndexMap;
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// Ordered map that refuses duplicate keys when deserialized.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UniqueMap<V>(pub IndexMap<String, V>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for UniqueMap<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct MapVisitor<V>(PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for MapVisitor<V> {
            type Value = UniqueMap<V>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a JSON object with unique keys")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut map = IndexMap::new();
                while let Some((key, value)) = access.next_entry::<String, V>()? {
                    if map.contains_key(&key) {
                        return Err(de::Error::custom(format!("duplicate key {key:?}")));
                    }
                    map.insert(key, value);
                }
                Ok(UniqueMap(map))
            }
        }

        deserializer.deserialize_map(MapVisitor(PhantomData))
    }
}

/// One seed word per aspect class and per sentiment polarity.
///
/// Class order is the order of appearance in the file; cluster rows follow it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedConfig {
    pub aspects: UniqueMap<String>,
    pub sentiments: UniqueMap<String>,
}

impl SeedConfig {
    pub fn new<A, S>(aspects: A, sentiments: S) -> Self
    where
        A: IntoIterator<Item = (String, String)>,
        S: IntoIterator<Item = (String, String)>,
    {
        SeedConfig {
            aspects: UniqueMap(aspects.into_iter().collect()),
            sentiments: UniqueMap(sentiments.into_iter().collect()),
        }
    }

    pub fn aspect_classes(&self) -> impl Iterator<Item = &str> {
        self.aspects.0.keys().map(String::as_str)
    }

    pub fn sentiment_classes(&self) -> impl Iterator<Item = &str> {
        self.sentiments.0.keys().map(String::as_str)
    }

    pub fn aspect_seed_words(&self) -> Vec<String> {
        self.aspects.0.values().cloned().collect()
    }

    pub fn sentiment_seed_words(&self) -> Vec<String> {
        self.sentiments.0.values().cloned().collect()
    }

    /// All seed words, aspects first, without duplicates.
    pub fn all_seed_words(&self) -> Vec<String> {
        let mut words: Vec<String> = Vec::new();
        for w in self.aspects.0.values().chain(self.sentiments.0.values()) {
            if !words.contains(w) {
                words.push(w.clone());
            }
        }
        words
    }

    pub fn validate(&self) -> Result<()> {
        for (kind, map) in [("aspect", &self.aspects), ("sentiment", &self.sentiments)] {
            if map.0.is_empty() {
                return Err(Error::InvalidSeeds(format!("no {kind} classes")));
            }
            for (class, word) in &map.0 {
                if class.is_empty() {
                    return Err(Error::InvalidSeeds(format!("empty {kind} class name")));
                }
                if word.is_empty() {
                    return Err(Error::InvalidSeeds(format!(
                        "{kind} class {class:?} has an empty seed word"
                    )));
                }
                if *word != word.to_lowercase() {
                    return Err(Error::InvalidSeeds(format!(
                        "{kind} class {class:?}: seed word {word:?} is not lowercase"
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn parse_seeds(json: &str) -> Result<SeedConfig> {
    let seeds: SeedConfig =
        serde_json::from_str(json).map_err(|e| Error::InvalidSeeds(e.to_string()))?;
    seeds.validate()?;
    Ok(seeds)
}

pub fn read_seeds(path: impl AsRef<Path>) -> Result<SeedConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_seeds(&text)
}

pub fn write_seeds(path: impl AsRef<Path>, seeds: &SeedConfig) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(seeds)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Context-free vector for a word, produced by encoding it in isolation.
///
/// Used to inject seed words that never occur in the corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandaloneVector {
    #[serde(default)]
    pub upos: Option<String>,
    pub vector: Vec<f64>,
}

/// Standalone vectors JSON: `{"word": {"upos": "NOUN", "vector": [..]}, ...}`.
pub type StandaloneVectors = IndexMap<String, StandaloneVector>;

pub fn read_standalone_vectors(path: impl AsRef<Path>) -> Result<StandaloneVectors> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let map: UniqueMap<StandaloneVector> = serde_json::from_str(&text)?;
    let mut out = IndexMap::with_capacity(map.0.len());
    for (word, v) in map.0 {
        if v.vector.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidEmbeddings(format!(
                "standalone vector for {word:?} has non-finite entries"
            )));
        }
        out.insert(word.to_lowercase(), v);
    }
    Ok(out)
}
