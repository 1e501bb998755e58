//! Plain-text configuration format.
//!
//! ```text
//! # comments start with '#'
//! [params]
//! alpha_prime = 1
//! p_plus = 1
//! mu = 1.7320508075688772
//! phi = 1                  # optional, default 1
//!
//! [com]                    # optional section
//! x0 = 0 0 0 0 0 0 0 0     # all eight components ...
//! p0[3] = 0.25             # ... or one component, index 1..=8
//!
//! [mode]                   # repeat once per excited mode
//! field = 1                # 1..=8
//! level = 1                # >= 1
//! chirality = right        # right | left
//! amplitude = 1
//! phase = 0                # optional, default 0
//! ```
//!
//! `[params]` and `[com]` may appear at most once. Unknown sections or keys,
//! repeated keys and malformed numbers are errors citing the line number;
//! missing keys cite the line of their section header.

use crate::error::{Error, Result};
use crate::modes::{CenterOfMass, Chirality, FieldConfig, Mode, ModelParams, TRANSVERSE};
use crate::scalar::Scalar;
use std::collections::HashMap;
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Params,
    Com,
    Mode,
}

struct Block {
    section: Section,
    header_line: usize,
    entries: HashMap<String, (usize, String)>,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn split_blocks(text: &str) -> Result<Vec<Block>> {
    let mut blocks: Vec<Block> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line, format!("malformed section header '{content}'")))?
                .trim();
            let section = match name {
                "params" => Section::Params,
                "com" => Section::Com,
                "mode" => Section::Mode,
                other => return Err(err(line, format!("unknown section '[{other}]'"))),
            };
            if section != Section::Mode && blocks.iter().any(|b| b.section == section) {
                return Err(err(line, format!("section '[{name}]' appears twice")));
            }
            blocks.push(Block { section, header_line: line, entries: HashMap::new() });
            continue;
        }
        let (key, value) =
            content.split_once('=').ok_or_else(|| err(line, format!("expected 'key = value', found '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(err(line, "empty key or value"));
        }
        let block = blocks.last_mut().ok_or_else(|| err(line, format!("key '{key}' outside any section")))?;
        if block.entries.insert(key.to_string(), (line, value.to_string())).is_some() {
            return Err(err(line, format!("key '{key}' repeated")));
        }
    }
    Ok(blocks)
}

fn number<T: Scalar>(line: usize, key: &str, value: &str) -> Result<T> {
    let v: f64 = value.parse().map_err(|_| err(line, format!("'{key}': '{value}' is not a number")))?;
    if !v.is_finite() {
        return Err(err(line, format!("'{key}': value must be finite")));
    }
    Ok(T::lit(v))
}

fn integer(line: usize, key: &str, value: &str) -> Result<u32> {
    value.parse().map_err(|_| err(line, format!("'{key}': '{value}' is not a non-negative integer")))
}

fn take<'a>(block: &'a Block, key: &str) -> Result<&'a (usize, String)> {
    block
        .entries
        .get(key)
        .ok_or_else(|| err(block.header_line, format!("section starting here lacks required key '{key}'")))
}

fn check_keys(block: &Block, allowed: impl Fn(&str) -> bool) -> Result<()> {
    let mut keys: Vec<_> = block.entries.iter().collect();
    keys.sort_by_key(|(_, (line, _))| *line);
    for (k, (line, _)) in keys {
        if !allowed(k) {
            return Err(err(*line, format!("unknown key '{k}'")));
        }
    }
    Ok(())
}

fn parse_params_block<T: Scalar>(block: &Block) -> Result<ModelParams<T>> {
    check_keys(block, |k| matches!(k, "alpha_prime" | "p_plus" | "mu" | "phi"))?;
    let get = |k: &str| -> Result<T> {
        let (line, v) = take(block, k)?;
        number(*line, k, v)
    };
    let phi = match block.entries.get("phi") {
        Some((line, v)) => number(*line, "phi", v)?,
        None => T::one(),
    };
    let params = ModelParams { alpha_prime: get("alpha_prime")?, p_plus: get("p_plus")?, mu: get("mu")?, phi };
    params.validate().map_err(|e| err(block.header_line, e.to_string()))?;
    Ok(params)
}

/// Accepts `x0` (eight values) or `x0[I]`.
fn parse_com_block<T: Scalar>(block: &Block) -> Result<CenterOfMass<T>> {
    let mut com = CenterOfMass::zero();
    let mut entries: Vec<_> = block.entries.iter().collect();
    entries.sort_by_key(|(_, (line, _))| *line);
    for (key, (line, value)) in entries {
        let (name, index) = match key.split_once('[') {
            Some((n, rest)) => {
                let idx = rest
                    .strip_suffix(']')
                    .and_then(|s| s.trim().parse::<usize>().ok())
                    .filter(|i| (1..=TRANSVERSE).contains(i))
                    .ok_or_else(|| err(*line, format!("'{key}': index must be in 1..=8")))?;
                (n.trim(), Some(idx))
            }
            None => (key.as_str(), None),
        };
        let target = match name {
            "x0" => &mut com.x0,
            "p0" => &mut com.p0,
            _ => return Err(err(*line, format!("unknown key '{key}'"))),
        };
        match index {
            Some(i) => target[i - 1] = number(*line, key, value)?,
            None => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != TRANSVERSE {
                    return Err(err(*line, format!("'{key}' needs 8 values, found {}", parts.len())));
                }
                for (slot, p) in target.iter_mut().zip(parts) {
                    *slot = number(*line, key, p)?;
                }
            }
        }
    }
    Ok(com)
}

fn parse_mode_block<T: Scalar>(block: &Block) -> Result<Mode<T>> {
    check_keys(block, |k| matches!(k, "field" | "level" | "chirality" | "amplitude" | "phase"))?;
    let (line, v) = take(block, "field")?;
    let field = integer(*line, "field", v)? as usize;
    if !(1..=TRANSVERSE).contains(&field) {
        return Err(err(*line, "'field' must be in 1..=8"));
    }
    let (line, v) = take(block, "level")?;
    let level = integer(*line, "level", v)?;
    if level == 0 {
        return Err(err(*line, "'level' must be >= 1"));
    }
    let (line, v) = take(block, "chirality")?;
    let chirality = match v.to_ascii_lowercase().as_str() {
        "right" => Chirality::Right,
        "left" => Chirality::Left,
        _ => return Err(err(*line, format!("'chirality' must be right or left, found '{v}'"))),
    };
    let (line, v) = take(block, "amplitude")?;
    let amplitude: T = number(*line, "amplitude", v)?;
    if amplitude < T::zero() {
        return Err(err(*line, "'amplitude' must be >= 0"));
    }
    let phase = match block.entries.get("phase") {
        Some((line, v)) => number(*line, "phase", v)?,
        None => T::zero(),
    };
    Ok(Mode { field, level, chirality, amplitude, phase })
}

fn params_block(blocks: &[Block], text: &str) -> Result<usize> {
    blocks
        .iter()
        .position(|b| b.section == Section::Params)
        .ok_or_else(|| err(text.lines().count().max(1), "missing '[params]' section"))
}

/// Parses a full configuration.
pub fn parse_config<T: Scalar>(text: &str) -> Result<FieldConfig<T>> {
    let blocks = split_blocks(text)?;
    let params = parse_params_block(&blocks[params_block(&blocks, text)?])?;
    let mut com = CenterOfMass::zero();
    let mut modes = Vec::new();
    let mut mode_lines = Vec::new();
    for b in &blocks {
        match b.section {
            Section::Params => {}
            Section::Com => com = parse_com_block(b)?,
            Section::Mode => {
                modes.push(parse_mode_block(b)?);
                mode_lines.push(b.header_line);
            }
        }
    }
    for i in 0..modes.len() {
        for j in 0..i {
            let (a, b) = (&modes[i], &modes[j]);
            if a.field == b.field && a.level == b.level && a.chirality == b.chirality {
                return Err(err(
                    mode_lines[i],
                    format!("mode repeats (field, level, chirality) of the mode at line {}", mode_lines[j]),
                ));
            }
        }
    }
    FieldConfig::new(params, modes, com)
}

/// Parses only the `[params]` section; other sections are checked for syntax.
pub fn parse_params<T: Scalar>(text: &str) -> Result<ModelParams<T>> {
    let blocks = split_blocks(text)?;
    parse_params_block(&blocks[params_block(&blocks, text)?])
}

/// Serialises a configuration; [`parse_config`] reads it back exactly for `f64`.
pub fn to_config_string<T: Scalar>(config: &FieldConfig<T>) -> String {
    let p = &config.params;
    let mut s = String::new();
    let _ = writeln!(s, "[params]");
    let _ = writeln!(s, "alpha_prime = {}", p.alpha_prime);
    let _ = writeln!(s, "p_plus = {}", p.p_plus);
    let _ = writeln!(s, "mu = {}", p.mu);
    let _ = writeln!(s, "phi = {}", p.phi);
    let join = |v: &[T; TRANSVERSE]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "\n[com]");
    let _ = writeln!(s, "x0 = {}", join(&config.com.x0));
    let _ = writeln!(s, "p0 = {}", join(&config.com.p0));
    for m in &config.modes {
        let _ = writeln!(s, "\n[mode]");
        let _ = writeln!(s, "field = {}", m.field);
        let _ = writeln!(s, "level = {}", m.level);
        let chir = match m.chirality {
            Chirality::Right => "right",
            Chirality::Left => "left",
        };
        let _ = writeln!(s, "chirality = {chir}");
        let _ = writeln!(s, "amplitude = {}", m.amplitude);
        let _ = writeln!(s, "phase = {}", m.phase);
    }
    s
}
