//! JSON-lines rows describing individual shielded detours.

use percolation_core::detours::ShieldedDetour;
use percolation_core::lattice::Vertex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetourRow {
    pub seed_edge: [[i32; 2]; 2],
    pub epsilon: String,
    pub heading: String,
    #[serde(rename = "P_len")]
    pub detour_len: usize,
    #[serde(rename = "Q_len")]
    pub arc_len: usize,
    pub shield_len: usize,
    pub endpoints: [[i32; 2]; 2],
}

fn xy(v: Vertex) -> [i32; 2] {
    [v.x, v.y]
}

impl DetourRow {
    pub fn of(d: &ShieldedDetour) -> Self {
        let [a, b] = d.seed_edge.endpoints();
        DetourRow {
            seed_edge: [xy(a), xy(b)],
            epsilon: d.epsilon.to_string(),
            heading: format!("{:?}", d.heading),
            detour_len: d.detour_len(),
            arc_len: d.arc_len(),
            shield_len: d.shield.len(),
            endpoints: [xy(d.detour.first()), xy(d.detour.last())],
        }
    }
}
