//! Scenario files: `{"roads": int, "slots": int, "fleets": [{"id": int, "interests": [int, …]}]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{InterestSet, World};
use crate::{Error, FleetId, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FleetInterests {
    pub id: FleetId,
    pub interests: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub roads: usize,
    pub slots: usize,
    pub fleets: Vec<FleetInterests>,
}

impl Scenario {
    pub fn from_json(s: &str) -> Result<Self> {
        let scenario: Scenario = serde_json::from_str(s)?;
        scenario.interest_sets()?;
        Ok(scenario)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    pub fn world(&self) -> Result<World> {
        World::new(self.roads, self.slots)
    }

    /// Interest sets keyed by fleet id; duplicate ids and out-of-range
    /// indices are rejected.
    pub fn interest_sets(&self) -> Result<BTreeMap<FleetId, InterestSet>> {
        let world = self.world()?;
        let mut sets = BTreeMap::new();
        for fleet in &self.fleets {
            let set = InterestSet::new(world, fleet.interests.iter().copied())?;
            if sets.insert(fleet.id, set).is_some() {
                return Err(Error::Scenario(format!("fleet {} listed twice", fleet.id)));
            }
        }
        Ok(sets)
    }

    pub fn fleet(&self, id: FleetId) -> Result<InterestSet> {
        self.interest_sets()?
            .remove(&id)
            .ok_or(Error::MissingInterests(id))
    }
}
