//! Instance files.
//!
//! Two kinds are accepted, both JSON with exact rationals written as
//! integers or `"num/den"` strings:
//!
//! ```json
//! {"kind": "sesg", "alpha": 1, "beta": 1, "gamma": 1,
//!  "users": [{"id": 1, "role": "producer", "capacity": "11/2", "fee": 0}]}
//!
//! {"kind": "table", "n_users": 2,
//!  "values": {"a": 0, "a,1": 0, "a,2": 0, "a,1,2": "7/2"}}
//! ```
//!
//! Table keys list the aggregator `a` and user ids `1..=n_users`. Every
//! coalition containing `a` must be given; coalitions without `a` are worth
//! zero and may not appear.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use super::locate::Positions;
use crate::game::{family, max_players, Coalition, Game};
use crate::rational::Rational;
use crate::sesg::{Role, SesgInstance, SesgUser};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Sesg(SesgInstance),
    Table(Game),
}

impl Instance {
    pub fn game(&self) -> crate::Result<Game> {
        match self {
            Instance::Sesg(inst) => inst.build_game(),
            Instance::Table(game) => Ok(game.clone()),
        }
    }

    pub fn n_users(&self) -> usize {
        match self {
            Instance::Sesg(inst) => inst.n_users(),
            Instance::Table(game) => game.n_users(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Sesg(_) => "sesg",
            Instance::Table(_) => "table",
        }
    }

    /// External id of the user with dense index `i`.
    pub fn user_id(&self, i: usize) -> u32 {
        match self {
            Instance::Sesg(inst) => inst.id_of(i),
            Instance::Table(_) => i as u32 + 1,
        }
    }

    /// Coalition key such as `a,1,3`, using external ids.
    pub fn key(&self, s: Coalition) -> String {
        let mut parts: Vec<String> = Vec::new();
        if s.has_aggregator() {
            parts.push("a".into());
        }
        parts.extend(s.users().map(|i| self.user_id(i).to_string()));
        parts.join(",")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    fn at(line: Option<usize>, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> ParseError {
        let text = e.to_string();
        let message = match text.rfind(" at line ") {
            Some(i) => text[..i].to_string(),
            None => text,
        };
        ParseError::at((e.line() > 0).then_some(e.line()), message)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SesgFile {
    kind: String,
    alpha: Rational,
    beta: Rational,
    gamma: Rational,
    users: Vec<UserEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UserEntry {
    id: u32,
    role: Role,
    capacity: Rational,
    #[serde(default)]
    fee: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    #[allow(dead_code)]
    kind: String,
    n_users: usize,
    values: BTreeMap<String, Rational>,
}

pub fn read_instance(path: &Path) -> Result<Instance, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError::at(None, format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let document: serde_json::Value = serde_json::from_str(text)?;
    let pos = Positions::scan(text)
        .map_err(|d| ParseError::at(Some(d.line), format!("duplicate key \"{}\"", &d.path[1..])))?;
    match document.get("kind").and_then(|k| k.as_str()) {
        Some("sesg") => parse_sesg(text, &pos),
        Some("table") => parse_table(text, &pos),
        Some(other) => Err(ParseError::at(
            pos.line("/kind"),
            format!("unknown kind \"{other}\"; expected \"sesg\" or \"table\""),
        )),
        None => Err(ParseError::at(Some(1), "missing string field \"kind\"")),
    }
}

fn parse_sesg(text: &str, pos: &Positions) -> Result<Instance, ParseError> {
    let file: SesgFile = serde_json::from_str(text)?;
    let gain = file.alpha + file.gamma - file.beta;
    if !file.gamma.is_positive() {
        return Err(ParseError::at(pos.line("/gamma"), format!("gamma must be positive (got {})", file.gamma)));
    }
    if !gain.is_positive() {
        return Err(ParseError::at(
            pos.line("/alpha"),
            format!("alpha + gamma - beta must be positive (got {gain})"),
        ));
    }
    let mut seen = BTreeSet::new();
    for (k, u) in file.users.iter().enumerate() {
        let at = |field: &str| pos.nearest(&format!("/users/{k}/{field}"));
        if u.id == 0 {
            return Err(ParseError::at(at("id"), "user ids must be positive integers"));
        }
        if !seen.insert(u.id) {
            return Err(ParseError::at(at("id"), format!("duplicate user id {}", u.id)));
        }
        if !u.capacity.is_positive() {
            return Err(ParseError::at(
                at("capacity"),
                format!("user {}: capacity must be positive (got {})", u.id, u.capacity),
            ));
        }
        if u.fee.is_negative() {
            return Err(ParseError::at(
                at("fee"),
                format!("user {}: fee must be nonnegative (got {})", u.id, u.fee),
            ));
        }
    }
    let users = file
        .users
        .into_iter()
        .map(|u| SesgUser {
            id: u.id,
            role: u.role,
            capacity: u.capacity,
            fee: u.fee,
        })
        .collect();
    SesgInstance::new(file.alpha, file.beta, file.gamma, users)
        .map(Instance::Sesg)
        .map_err(|e| ParseError::at(pos.line("/users"), e.to_string()))
}

/// Parses a key such as `a,1,3` into a coalition over `n_users` users.
pub fn parse_key(key: &str, n_users: usize) -> Result<Coalition, String> {
    let mut with_aggregator = false;
    let mut users = BTreeSet::new();
    for token in key.split(',').map(str::trim) {
        if token == "a" {
            if with_aggregator {
                return Err(format!("coalition key \"{key}\" repeats \"a\""));
            }
            with_aggregator = true;
            continue;
        }
        let id: usize = token
            .parse()
            .map_err(|_| format!("coalition key \"{key}\": \"{token}\" is neither \"a\" nor a user id"))?;
        if id == 0 || id > n_users {
            return Err(format!("coalition key \"{key}\": user id {id} is outside 1..={n_users}"));
        }
        if !users.insert(id - 1) {
            return Err(format!("coalition key \"{key}\" repeats user {id}"));
        }
    }
    if !with_aggregator {
        return Err(format!(
            "coalition key \"{key}\" lacks the aggregator \"a\"; coalitions without it are worth zero and may not be listed"
        ));
    }
    Coalition::from_users(n_users, users, true).map_err(|e| e.to_string())
}

fn parse_table(text: &str, pos: &Positions) -> Result<Instance, ParseError> {
    let file: TableFile = serde_json::from_str(text)?;
    let n = file.n_users;
    if n == 0 {
        return Err(ParseError::at(pos.line("/n_users"), "n_users must be at least 1"));
    }
    if n + 1 > max_players() {
        return Err(ParseError::at(
            pos.line("/n_users"),
            format!("{} players exceed the enumeration cap of {}", n + 1, max_players()),
        ));
    }
    let mut table = vec![Rational::ZERO; 1usize << n];
    let mut given: BTreeMap<u32, String> = BTreeMap::new();
    for (key, value) in &file.values {
        let line = pos.line(&format!("/values/{key}"));
        let s = parse_key(key, n).map_err(|m| ParseError::at(line, m))?;
        if let Some(previous) = given.insert(s.bits(), key.clone()) {
            return Err(ParseError::at(
                line,
                format!("coalition keys \"{previous}\" and \"{key}\" name the same coalition"),
            ));
        }
        table[s.user_mask() as usize] = *value;
    }
    if let Some(missing) = family::all(n).find(|s| s.has_aggregator() && !given.contains_key(&s.bits())) {
        let keys: Vec<String> = std::iter::once("a".to_string())
            .chain(missing.users().map(|i| (i + 1).to_string()))
            .collect();
        return Err(ParseError::at(
            pos.line("/values"),
            format!("missing coalition value for \"{}\"", keys.join(",")),
        ));
    }
    Game::from_table(n, table)
        .map(Instance::Table)
        .map_err(|e| ParseError::at(pos.line("/values"), e.to_string()))
}

struct OrderedValues<'a>(&'a [(String, Rational)]);

impl Serialize for OrderedValues<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct TableOut<'a> {
    kind: &'static str,
    n_users: usize,
    values: OrderedValues<'a>,
}

/// Pretty JSON accepted by [`parse_instance`], ending with a newline.
pub fn render_instance(instance: &Instance) -> String {
    let mut text = match instance {
        Instance::Sesg(inst) => {
            let file = SesgFile {
                kind: "sesg".into(),
                alpha: inst.alpha(),
                beta: inst.beta(),
                gamma: inst.gamma(),
                users: inst
                    .users()
                    .iter()
                    .map(|u| UserEntry {
                        id: u.id,
                        role: u.role,
                        capacity: u.capacity,
                        fee: u.fee,
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&file)
        }
        Instance::Table(game) => {
            let values: Vec<(String, Rational)> = family::all(game.n_users())
                .filter(|s| s.has_aggregator())
                .map(|s| (instance.key(s), game.value(s)))
                .collect();
            serde_json::to_string_pretty(&TableOut {
                kind: "table",
                n_users: game.n_users(),
                values: OrderedValues(&values),
            })
        }
    }
    .expect("instance serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE2: &str = r#"{
  "kind": "sesg",
  "alpha": 1, "beta": 1, "gamma": 1,
  "users": [
    {"id": 1, "role": "producer", "capacity": 10},
    {"id": 2, "role": "producer", "capacity": "90"},
    {"id": 3, "role": "consumer", "capacity": 86, "fee": "0"},
    {"id": 4, "role": "consumer", "capacity": "14/1"}
  ]
}"#;

    #[test]
    fn parses_sesg_files() {
        let inst = parse_instance(EXAMPLE2).unwrap();
        assert_eq!(inst.n_users(), 4);
        assert_eq!(inst.game().unwrap().grand_value(), Rational::from(100));
    }

    #[test]
    fn accepts_fractional_strings_and_rejects_decimals() {
        let text = EXAMPLE2.replace("\"90\"", "\"11/2\"");
        assert!(parse_instance(&text).is_ok());
        let text = EXAMPLE2.replace("\"90\"", "90.5");
        let err = parse_instance(&text).unwrap_err();
        assert_eq!(err.line, Some(6));
        assert!(err.message.contains("decimal"), "{err}");
        let text = EXAMPLE2.replace("\"90\"", "\"5.5\"");
        assert!(parse_instance(&text).is_err());
    }

    #[test]
    fn validation_errors_point_at_the_offending_line() {
        let err = parse_instance(&EXAMPLE2.replace("\"id\": 2", "\"id\": 1")).unwrap_err();
        assert_eq!(err.line, Some(6));
        assert!(err.message.contains("duplicate user id 1"));
        let err = parse_instance(&EXAMPLE2.replace("86", "-86")).unwrap_err();
        assert_eq!(err.line, Some(7));
        assert!(err.message.contains("capacity must be positive"));
        let err = parse_instance(&EXAMPLE2.replace("\"fee\": \"0\"", "\"fee\": -1")).unwrap_err();
        assert_eq!(err.line, Some(7));
        let err = parse_instance(&EXAMPLE2.replace("\"beta\": 1", "\"beta\": 2")).unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(err.message.contains("alpha + gamma - beta"));
    }

    const TABLE: &str = "{\n\"kind\": \"table\",\n\"n_users\": 2,\n\"values\": {\n\"a\": 0,\n\"a,1\": 0,\n\"a,2\": \"1/2\",\n\"a,1,2\": 3\n}\n}";

    #[test]
    fn parses_tables() {
        let Instance::Table(game) = parse_instance(TABLE).unwrap() else {
            panic!("expected a table");
        };
        assert_eq!(game.grand_value(), Rational::from(3));
        assert_eq!(game.value(game.coalition([1], true).unwrap()), Rational::new(1, 2));
    }

    #[test]
    fn table_errors() {
        let err = parse_instance(&TABLE.replace("\"a,1\": 0,\n", "")).unwrap_err();
        assert!(err.message.contains("missing coalition value"), "{err}");
        assert_eq!(err.line, Some(4));
        let err = parse_instance(&TABLE.replace("\"a,1\"", "\"1\"")).unwrap_err();
        assert!(err.message.contains("lacks the aggregator"));
        assert_eq!(err.line, Some(6));
        let err = parse_instance(&TABLE.replace("\"a,1\"", "\"a\"")).unwrap_err();
        assert!(err.message.contains("duplicate key"));
        assert_eq!(err.line, Some(6));
        let err = parse_instance(&TABLE.replace("\"a,1\"", "\"2,a\"")).unwrap_err();
        assert!(err.message.contains("same coalition"));
        let err = parse_instance(&TABLE.replace("\"a,1\"", "\"a,3\"")).unwrap_err();
        assert!(err.message.contains("outside"));
    }

    #[test]
    fn rendering_round_trips() {
        for text in [EXAMPLE2, TABLE] {
            let inst = parse_instance(text).unwrap();
            let rendered = render_instance(&inst);
            assert_eq!(parse_instance(&rendered).unwrap(), inst);
            assert_eq!(render_instance(&parse_instance(&rendered).unwrap()), rendered);
        }
    }
}
