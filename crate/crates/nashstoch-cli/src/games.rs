//! Game and profile sources for the command line.

use anyhow::{anyhow, bail, Context, Result};
use nashstoch::game::{JointStrategy, MixedStrategy, NormalFormGame};
use nashstoch::io;
use nashstoch::rng::CounterRng;
use nashstoch::zoo;
use std::path::Path;

/// Parses a game source: `classic:<name>`, `blotto:n,c,f`, `sym7`,
/// `random:n,m,seed`, or `file:<path>` (.nfg or .game.json).
pub fn load_game(source: &str) -> Result<NormalFormGame> {
    if let Some(name) = source.strip_prefix("classic:") {
        let which = zoo::ClassicGame::parse(name)
            .ok_or_else(|| anyhow!("unknown classic game `{name}`"))?;
        return Ok(zoo::classic(which));
    }
    if let Some(spec) = source.strip_prefix("blotto:") {
        let parts: Vec<usize> = spec
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("blotto spec `{spec}` must be n,c,f"))?;
        if parts.len() != 3 {
            bail!("blotto spec `{spec}` must be n,c,f");
        }
        return Ok(zoo::blotto(parts[0], parts[1], parts[2])?);
    }
    if source == "sym7" {
        return Ok(zoo::expand_symmetric(&zoo::seven_player_symmetric())?);
    }
    if let Some(spec) = source.strip_prefix("random:") {
        let parts: Vec<u64> = spec
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("random spec `{spec}` must be n,m,seed"))?;
        if parts.len() != 3 {
            bail!("random spec `{spec}` must be n,m,seed");
        }
        let counts = vec![parts[1] as usize; parts[0] as usize];
        return Ok(zoo::random_game(&counts, parts[2])?);
    }
    if let Some(path) = source.strip_prefix("file:") {
        return load_game_file(Path::new(path));
    }
    bail!("unknown game source `{source}` (expected classic:, blotto:, sym7, random:, or file:)")
}

pub fn load_game_file(path: &Path) -> Result<NormalFormGame> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read game file {}", path.display()))?;
    let name = path.to_string_lossy();
    let doc = if name.ends_with(".nfg") {
        io::parse_nfg(&text)?
    } else if name.ends_with(".game.json") || name.ends_with(".json") {
        io::parse_json(&text)?
    } else {
        bail!("game files must end in .nfg or .game.json");
    };
    Ok(doc.game)
}

/// Parses a profile source: `uniform`, `random:<seed>`, or
/// `pure:<a1>,<a2>,...`.
pub fn load_profile(source: &str, game: &NormalFormGame) -> Result<JointStrategy> {
    if source == "uniform" {
        return Ok(JointStrategy::uniform(game));
    }
    if let Some(seed) = source.strip_prefix("random:") {
        let seed: u64 = seed
            .trim()
            .parse()
            .with_context(|| format!("random profile seed `{seed}` must be an integer"))?;
        let mut rng = CounterRng::new(seed);
        let strategies = game
            .action_counts()
            .iter()
            .map(|&m| {
                let mut v: Vec<f64> = (0..m).map(|_| rng.next_f64() + 1e-3).collect();
                let sum: f64 = v.iter().sum();
                v.iter_mut().for_each(|p| *p /= sum);
                MixedStrategy::new(v).expect("normalized vector is a strategy")
            })
            .collect();
        return Ok(JointStrategy::new(strategies));
    }
    if let Some(actions) = source.strip_prefix("pure:") {
        let joint: Vec<usize> = actions
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("pure profile `{actions}` must be comma-separated indices"))?;
        if joint.len() != game.num_players() {
            bail!(
                "pure profile has {} actions, game has {} players",
                joint.len(),
                game.num_players()
            );
        }
        for (k, (&a, &m)) in joint.iter().zip(game.action_counts()).enumerate() {
            if a >= m {
                bail!("action {a} out of range for player {k} ({m} actions)");
            }
        }
        return Ok(JointStrategy::pure(game, &joint));
    }
    bail!("unknown profile source `{source}` (expected uniform, random:<seed>, or pure:<a,...>)")
}
