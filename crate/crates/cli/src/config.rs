//! Game configuration files: a small JSON schema describing the graph,
//! the player parameters, and the externality. Unknown keys are rejected
//! so a typo fails loudly instead of silently taking a default.

use std::path::Path;

use netsec_core::network::Graph;
use netsec_core::total_effort::{Externality, GameSpec, PlayerParams};
use netsec_core::weighting::WeightingSpec;
use serde::Deserialize;

/// Top-level configuration document.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfigFile {
    pub graph: GraphConfig,
    pub players: PlayersConfig,
    pub externality: Externality,
}

/// Either an explicit edge list (optionally with a node count for
/// isolated trailing nodes) or a named generator.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    #[serde(default)]
    pub edge_list: Option<Vec<(usize, usize)>>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub generate: Option<GenerateConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateConfig {
    pub kind: String,
    pub params: GenerateParams,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateParams {
    pub n: usize,
    #[serde(default)]
    pub k: Option<usize>,
}

/// Shared parameters for everyone, or one entry per node.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayersConfig {
    #[serde(default)]
    pub homogeneous: Option<PlayerConfig>,
    #[serde(default)]
    pub per_node: Option<Vec<PlayerConfig>>,
}

/// `L` defaults to 1 so costs can be read directly as cost/loss ratios.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerConfig {
    pub alpha: f64,
    pub c: f64,
    #[serde(rename = "L", default = "default_loss")]
    pub l: f64,
}

fn default_loss() -> f64 {
    1.0
}

impl GameConfigFile {
    /// Reads and parses a configuration file.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Builds the graph described by the `graph` section.
    pub fn build_graph(&self) -> Result<Graph, String> {
        match (&self.graph.edge_list, &self.graph.generate) {
            (Some(edges), None) => {
                Graph::from_edges(self.graph.n, edges).map_err(|e| e.to_string())
            }
            (None, Some(gen)) => {
                if self.graph.n.is_some() {
                    return Err("graph: `n` belongs in `generate.params` here".into());
                }
                let n = gen.params.n;
                let need_k = || {
                    gen.params
                        .k
                        .ok_or_else(|| format!("graph: generator `{}` needs `k`", gen.kind))
                };
                let built = match gen.kind.as_str() {
                    "cycle" => Graph::cycle(n),
                    "path" => Graph::path(n),
                    "star" => Graph::star(n),
                    "complete" => Graph::complete(n),
                    "k_regular" => Graph::k_regular(n, need_k()?),
                    other => return Err(format!("graph: unknown generator `{other}`")),
                };
                if gen.params.k.is_some() && gen.kind != "k_regular" {
                    return Err(format!("graph: generator `{}` takes no `k`", gen.kind));
                }
                built.map_err(|e| e.to_string())
            }
            (Some(_), Some(_)) => Err("graph: give either `edge_list` or `generate`, not both".into()),
            (None, None) => Err("graph: needs `edge_list` or `generate`".into()),
        }
    }

    /// Builds the full game. Weakest-link games must be connected, which
    /// is checked here so the failure reads as a configuration problem.
    pub fn build_game(&self) -> Result<GameSpec, String> {
        let graph = self.build_graph()?;
        if self.externality == Externality::WeakestLink && !graph.is_connected() {
            return Err(
                "weakest-link games need a connected graph; this one is disconnected".into(),
            );
        }
        let players = self.build_players(graph.n())?;
        GameSpec::new(graph, players, self.externality).map_err(|e| e.to_string())
    }

    fn build_players(&self, n: usize) -> Result<Vec<PlayerParams>, String> {
        let to_params = |p: &PlayerConfig| -> Result<PlayerParams, String> {
            let weighting = WeightingSpec::prelec(p.alpha).map_err(|e| e.to_string())?;
            Ok(PlayerParams {
                cost: p.c,
                loss: p.l,
                weighting,
            })
        };
        match (&self.players.homogeneous, &self.players.per_node) {
            (Some(p), None) => Ok(vec![to_params(p)?; n]),
            (None, Some(list)) => {
                if list.len() != n {
                    return Err(format!(
                        "players: per_node lists {} entries for {n} nodes",
                        list.len()
                    ));
                }
                list.iter().map(to_params).collect()
            }
            (Some(_), Some(_)) => {
                Err("players: give either `homogeneous` or `per_node`, not both".into())
            }
            (None, None) => Err("players: needs `homogeneous` or `per_node`".into()),
        }
    }

    /// The homogeneous parameter block, when present.
    pub fn homogeneous(&self) -> Option<&PlayerConfig> {
        self.players.homogeneous.as_ref()
    }
}
