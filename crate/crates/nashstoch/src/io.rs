//! Game interchange: the Gambit NFG payoff format (subset) and a canonical
//! JSON tensor format.
//!
//! NFG payoffs are listed one contingency at a time with the first player's
//! action varying fastest and one payoff per player within a contingency;
//! parsing reorders them into this crate's row-major (last player fastest)
//! tensors. Raw values are preserved alongside a normalized view.

use crate::error::{Error, Result};
use crate::game::{NormalFormGame, PayoffScaling};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocFormat {
    Nfg,
    Json,
}

/// A parsed game plus its provenance: raw payoffs as read, the normalized
/// view, and the affine maps relating them.
#[derive(Debug, Clone)]
pub struct GameDocument {
    pub format: DocFormat,
    /// Normalized view (payoffs in [0, 1]).
    pub game: NormalFormGame,
    /// Payoffs exactly as read, in this crate's tensor layout.
    pub raw_tensors: Vec<Vec<f64>>,
    /// Per-player maps from raw to normalized payoffs.
    pub scalings: Vec<PayoffScaling>,
    /// True when the input payoffs were already in [0, 1] and taken as-is.
    pub input_was_normalized: bool,
    pub title: String,
    pub comment: String,
}

impl GameDocument {
    fn from_raw_tensors(
        format: DocFormat,
        action_counts: Vec<usize>,
        raw_tensors: Vec<Vec<f64>>,
        title: String,
        comment: String,
    ) -> Result<Self> {
        let in_unit_interval = raw_tensors
            .iter()
            .all(|t| t.iter().all(|&v| (0.0..=1.0).contains(&v)));
        let (game, scalings) = if in_unit_interval {
            let g = NormalFormGame::new(action_counts, raw_tensors.clone())?;
            let identity = vec![PayoffScaling { min: 0.0, max: 1.0 }; raw_tensors.len()];
            (g, identity)
        } else {
            NormalFormGame::from_raw(action_counts, raw_tensors.clone())?
        };
        Ok(GameDocument {
            format,
            game,
            raw_tensors,
            scalings,
            input_was_normalized: in_unit_interval,
            title,
            comment,
        })
    }
}

// ---------------------------------------------------------------------------
// NFG payoff format
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Word(String),
    Text(String),
    Number(f64),
    OpenBrace,
    CloseBrace,
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut column = 0usize;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        column += 1;
        match c {
            '\n' => {
                line += 1;
                column = 0;
            }
            c if c.is_whitespace() => {}
            '{' => tokens.push(Spanned {
                token: Token::OpenBrace,
                line,
                column,
            }),
            '}' => tokens.push(Spanned {
                token: Token::CloseBrace,
                line,
                column,
            }),
            '"' => {
                let start = (line, column);
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => {
                            column += 1;
                            break;
                        }
                        Some('\n') => {
                            line += 1;
                            column = 0;
                            s.push('\n');
                        }
                        Some(c) => {
                            column += 1;
                            s.push(c);
                        }
                        None => {
                            return Err(Error::Parse {
                                line: start.0,
                                column: start.1,
                                message: "unterminated string".into(),
                            })
                        }
                    }
                }
                tokens.push(Spanned {
                    token: Token::Text(s),
                    line: start.0,
                    column: start.1,
                });
            }
            c => {
                let start = (line, column);
                let mut word = String::from(c);
                while let Some(&next) = chars.peek() {
                    if next.is_whitespace() || next == '{' || next == '}' || next == '"' {
                        break;
                    }
                    word.push(next);
                    chars.next();
                    column += 1;
                }
                let token = match word.parse::<f64>() {
                    Ok(v) => Token::Number(v),
                    Err(_) => Token::Word(word),
                };
                tokens.push(Spanned {
                    token,
                    line: start.0,
                    column: start.1,
                });
            }
        }
    }
    Ok(tokens)
}

struct TokenCursor {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl TokenCursor {
    fn next(&mut self) -> Option<&Spanned> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let (line, column) = self
            .tokens
            .get(self.pos.saturating_sub(1))
            .map(|s| (s.line, s.column))
            .unwrap_or((1, 1));
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Parses the Gambit NFG payoff format: `NFG 1 R "title" { players } {
/// counts } [comment] payoffs...`.
pub fn parse_nfg(text: &str) -> Result<GameDocument> {
    let tokens = tokenize(text)?;
    let mut cur = TokenCursor { tokens, pos: 0 };

    for expect in ["NFG", "1", "R"] {
        let found = match cur.next() {
            Some(s) => {
                let ok = match &s.token {
                    Token::Word(w) => w == expect,
                    Token::Number(v) => expect == "1" && *v == 1.0,
                    _ => false,
                };
                if ok {
                    continue;
                }
                format!("{:?}", s.token)
            }
            None => "end of input".to_string(),
        };
        return Err(cur.error_here(format!(
            "expected `{expect}` in NFG prologue, found {found}"
        )));
    }

    let title = match cur.next() {
        Some(Spanned {
            token: Token::Text(t),
            ..
        }) => t.clone(),
        _ => return Err(cur.error_here("expected quoted title after prologue")),
    };

    match cur.next() {
        Some(Spanned {
            token: Token::OpenBrace,
            ..
        }) => {}
        _ => return Err(cur.error_here("expected `{` opening the player list")),
    }
    let mut players = Vec::new();
    loop {
        match cur.next() {
            Some(Spanned {
                token: Token::Text(name),
                ..
            }) => players.push(name.clone()),
            Some(Spanned {
                token: Token::CloseBrace,
                ..
            }) => break,
            _ => return Err(cur.error_here("expected quoted player name or `}`")),
        }
    }
    if players.len() < 2 {
        return Err(cur.error_here(format!(
            "NFG games need at least 2 players, found {}",
            players.len()
        )));
    }

    match cur.next() {
        Some(Spanned {
            token: Token::OpenBrace,
            ..
        }) => {}
        _ => return Err(cur.error_here("expected `{` opening the action counts")),
    }
    let mut action_counts: Vec<usize> = Vec::new();
    loop {
        match cur.next() {
            Some(Spanned {
                token: Token::Number(v),
                line,
                column,
            }) => {
                if *v < 1.0 || v.fract() != 0.0 {
                    return Err(Error::Parse {
                        line: *line,
                        column: *column,
                        message: format!("action count must be a positive integer, found {v}"),
                    });
                }
                action_counts.push(*v as usize);
            }
            Some(Spanned {
                token: Token::CloseBrace,
                ..
            }) => break,
            _ => return Err(cur.error_here("expected action count or `}`")),
        }
    }
    if action_counts.len() != players.len() {
        return Err(cur.error_here(format!(
            "found {} action counts for {} players",
            action_counts.len(),
            players.len()
        )));
    }

    // Optional quoted comment between the header and the payoff list.
    let comment = match cur.peek() {
        Some(Spanned {
            token: Token::Text(c),
            ..
        }) => {
            let c = c.clone();
            cur.next();
            c
        }
        _ => String::new(),
    };

    let n = players.len();
    let contingencies: usize = action_counts.iter().product();
    let expected = contingencies * n;
    let mut payoffs = Vec::with_capacity(expected);
    while let Some(s) = cur.next() {
        match &s.token {
            Token::Number(v) => payoffs.push(*v),
            other => {
                return Err(Error::Parse {
                    line: s.line,
                    column: s.column,
                    message: format!("expected payoff number, found {other:?}"),
                })
            }
        }
    }
    if payoffs.len() != expected {
        return Err(cur.error_here(format!(
            "expected {expected} payoffs ({contingencies} contingencies x {n} players), found {}",
            payoffs.len()
        )));
    }

    // Reorder: NFG contingencies vary the first player's action fastest;
    // our tensors are row-major with the last player's action fastest.
    let mut raw_tensors = vec![vec![0.0; contingencies]; n];
    let strides = row_major_strides(&action_counts);
    let mut joint = vec![0usize; n];
    for c in 0..contingencies {
        let flat: usize = joint.iter().zip(&strides).map(|(a, s)| a * s).sum();
        for k in 0..n {
            raw_tensors[k][flat] = payoffs[c * n + k];
        }
        // First player fastest.
        for j in 0..n {
            joint[j] += 1;
            if joint[j] < action_counts[j] {
                break;
            }
            joint[j] = 0;
        }
    }

    let mut doc =
        GameDocument::from_raw_tensors(DocFormat::Nfg, action_counts, raw_tensors, title, comment)?;
    doc.game = doc.game.clone().with_labels(Some(players), None);
    Ok(doc)
}

fn row_major_strides(action_counts: &[usize]) -> Vec<usize> {
    let n = action_counts.len();
    let mut strides = vec![1usize; n];
    for j in (0..n - 1).rev() {
        strides[j] = strides[j + 1] * action_counts[j + 1];
    }
    strides
}

/// Emits the NFG payoff format with the game's normalized payoffs.
pub fn emit_nfg(game: &NormalFormGame, title: &str) -> String {
    let n = game.num_players();
    let names: Vec<String> = match game.player_labels() {
        Some(labels) => labels.to_vec(),
        None => (1..=n).map(|k| format!("Player {k}")).collect(),
    };
    let mut out = String::new();
    out.push_str(&format!("NFG 1 R \"{title}\" {{ "));
    for name in &names {
        out.push_str(&format!("\"{name}\" "));
    }
    out.push_str("} { ");
    for m in game.action_counts() {
        out.push_str(&format!("{m} "));
    }
    out.push_str("}\n\n");

    let contingencies: usize = game.action_counts().iter().product();
    let mut joint = vec![0usize; n];
    let mut payoffs = Vec::with_capacity(contingencies * n);
    for _ in 0..contingencies {
        for k in 0..n {
            payoffs.push(format!("{}", game.payoff(k, &joint)));
        }
        for j in 0..n {
            joint[j] += 1;
            if joint[j] < game.action_counts()[j] {
                break;
            }
            joint[j] = 0;
        }
    }
    out.push_str(&payoffs.join(" "));
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// Canonical JSON format
// ---------------------------------------------------------------------------

/// Emits the canonical JSON schema:
/// `{players, action_counts, tensors, labels, normalized}` with tensors as
/// nested arrays (one per player, nested by action axis).
pub fn emit_json(game: &NormalFormGame) -> String {
    let tensors: Vec<Value> = (0..game.num_players())
        .map(|k| nest_tensor(game.tensor(k), game.action_counts()))
        .collect();
    let labels = match game.player_labels() {
        Some(names) => json!(names),
        None => Value::Null,
    };
    let doc = json!({
        "players": game.num_players(),
        "action_counts": game.action_counts(),
        "tensors": tensors,
        "labels": labels,
        "normalized": true,
    });
    serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
}

fn nest_tensor(flat: &[f64], shape: &[usize]) -> Value {
    if shape.len() == 1 {
        return Value::Array(flat.iter().map(|&v| json!(v)).collect());
    }
    let chunk = flat.len() / shape[0];
    Value::Array(
        (0..shape[0])
            .map(|i| nest_tensor(&flat[i * chunk..(i + 1) * chunk], &shape[1..]))
            .collect(),
    )
}

/// Parses the canonical JSON schema, reporting violations by JSON pointer.
pub fn parse_json(text: &str) -> Result<GameDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| Error::Schema {
        pointer: "".into(),
        message: "document must be a JSON object".into(),
    })?;

    let players = obj
        .get("players")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Schema {
            pointer: "/players".into(),
            message: "expected a positive integer".into(),
        })? as usize;

    let counts_value = obj.get("action_counts").ok_or_else(|| Error::Schema {
        pointer: "/action_counts".into(),
        message: "missing".into(),
    })?;
    let action_counts: Vec<usize> = counts_value
        .as_array()
        .ok_or_else(|| Error::Schema {
            pointer: "/action_counts".into(),
            message: "expected an array".into(),
        })?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_u64().map(|m| m as usize).ok_or_else(|| Error::Schema {
                pointer: format!("/action_counts/{i}"),
                message: "expected a positive integer".into(),
            })
        })
        .collect::<Result<_>>()?;
    if action_counts.len() != players {
        return Err(Error::Schema {
            pointer: "/action_counts".into(),
            message: format!(
                "length {} does not match players = {players}",
                action_counts.len()
            ),
        });
    }

    let normalized = obj
        .get("normalized")
        .and_then(Value::as_bool)
        .ok_or_else(|| Error::Schema {
            pointer: "/normalized".into(),
            message: "expected a boolean".into(),
        })?;

    let tensors_value = obj.get("tensors").ok_or_else(|| Error::Schema {
        pointer: "/tensors".into(),
        message: "missing".into(),
    })?;
    let tensor_list = tensors_value.as_array().ok_or_else(|| Error::Schema {
        pointer: "/tensors".into(),
        message: "expected an array".into(),
    })?;
    if tensor_list.len() != players {
        return Err(Error::Schema {
            pointer: "/tensors".into(),
            message: format!("found {} tensors for {players} players", tensor_list.len()),
        });
    }
    let mut raw_tensors = Vec::with_capacity(players);
    for (k, t) in tensor_list.iter().enumerate() {
        let mut flat = Vec::with_capacity(action_counts.iter().product());
        flatten_tensor(t, &action_counts, &format!("/tensors/{k}"), &mut flat)?;
        raw_tensors.push(flat);
    }

    let labels: Option<Vec<String>> = match obj.get("labels") {
        None | Some(Value::Null) => None,
        Some(Value::Array(names)) => Some(
            names
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.as_str().map(String::from).ok_or_else(|| Error::Schema {
                        pointer: format!("/labels/{i}"),
                        message: "expected a string".into(),
                    })
                })
                .collect::<Result<_>>()?,
        ),
        Some(_) => {
            return Err(Error::Schema {
                pointer: "/labels".into(),
                message: "expected an array of strings or null".into(),
            })
        }
    };

    if normalized {
        for (k, t) in raw_tensors.iter().enumerate() {
            if let Some(pos) = t.iter().position(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::Schema {
                    pointer: format!("/tensors/{k}"),
                    message: format!(
                        "declared normalized but entry {pos} is {} (outside [0, 1])",
                        t[pos]
                    ),
                });
            }
        }
    }

    let mut doc = GameDocument::from_raw_tensors(
        DocFormat::Json,
        action_counts,
        raw_tensors,
        String::new(),
        String::new(),
    )?;
    if labels.is_some() {
        doc.game = doc.game.clone().with_labels(labels, None);
    }
    Ok(doc)
}

fn flatten_tensor(value: &Value, shape: &[usize], pointer: &str, out: &mut Vec<f64>) -> Result<()> {
    let arr = value.as_array().ok_or_else(|| Error::Schema {
        pointer: pointer.into(),
        message: "expected an array".into(),
    })?;
    if arr.len() != shape[0] {
        return Err(Error::Schema {
            pointer: pointer.into(),
            message: format!("expected length {}, found {}", shape[0], arr.len()),
        });
    }
    for (i, v) in arr.iter().enumerate() {
        let child = format!("{pointer}/{i}");
        if shape.len() == 1 {
            let x = v.as_f64().ok_or_else(|| Error::Schema {
                pointer: child.clone(),
                message: "expected a number".into(),
            })?;
            out.push(x);
        } else {
            flatten_tensor(v, &shape[1..], &child, out)?;
        }
    }
    Ok(())
}
