//! Line-oriented text formats for lattices, groups, homomorphisms and
//! lattice-valued subsets: `[section]` headers, `key = value` lines, `#`
//! comments, continuation lines for long values.

use std::sync::Arc;

use lfgt_core::group::{parse_cycle_text, FiniteGroup, GroupHom, DEFAULT_ORDER_CAP};
use lfgt_core::lattice::Lattice;
use lfgt_core::lsubset::LSubset;

use crate::error::CliError;
use crate::workspace::Workspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Lattice,
    Group,
    LSubset,
    Hom,
}

#[derive(Debug)]
pub struct ParsedFile {
    pub kind: FileKind,
    pub path: String,
    entries: Vec<(String, String, usize)>,
}

impl ParsedFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }

    pub fn line_of(&self, key: &str) -> usize {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, _, l)| *l)
            .unwrap_or(0)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key).ok_or_else(|| CliError::Syntax {
            path: self.path.clone(),
            line: 0,
            msg: format!("missing `{key} = ...`"),
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.get("name")
    }

    fn syntax(&self, line: usize, msg: impl Into<String>) -> CliError {
        CliError::Syntax {
            path: self.path.clone(),
            line,
            msg: msg.into(),
        }
    }
}

pub fn parse_text(path: &str, text: &str) -> Result<ParsedFile, CliError> {
    let mut kind: Option<FileKind> = None;
    let mut entries: Vec<(String, String, usize)> = Vec::new();
    let syntax = |line: usize, msg: String| CliError::Syntax {
        path: path.to_string(),
        line,
        msg,
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(section) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if kind.is_some() {
                return Err(syntax(line_no, "only one section per file".into()));
            }
            kind = Some(match section.trim() {
                "lattice" => FileKind::Lattice,
                "group" => FileKind::Group,
                "lsubset" => FileKind::LSubset,
                "hom" => FileKind::Hom,
                other => return Err(syntax(line_no, format!("unknown section `[{other}]`"))),
            });
            continue;
        }
        if kind.is_none() {
            return Err(syntax(
                line_no,
                "expected a `[section]` header first".into(),
            ));
        }
        if let Some(eq) = line.find('=') {
            let key = line[..eq].trim().to_string();
            let value = line[eq + 1..].trim().to_string();
            if key.is_empty() {
                return Err(syntax(line_no, "empty key".into()));
            }
            if entries.iter().any(|(k, _, _)| *k == key) {
                return Err(syntax(line_no, format!("duplicate key `{key}`")));
            }
            entries.push((key, value, line_no));
        } else {
            // Continuation of the previous value.
            match entries.last_mut() {
                Some((_, value, _)) => {
                    value.push(' ');
                    value.push_str(line);
                }
                None => return Err(syntax(line_no, "expected `key = value`".into())),
            }
        }
    }
    match kind {
        Some(kind) => Ok(ParsedFile {
            kind,
            path: path.to_string(),
            entries,
        }),
        None => Err(syntax(0, "empty file".into())),
    }
}

pub fn lattice_from_file(file: &ParsedFile) -> Result<Lattice, CliError> {
    let elements: Vec<&str> = file.require("elements")?.split_whitespace().collect();
    let covers_text = file.get("covers").unwrap_or("");
    let mut covers: Vec<(&str, &str)> = Vec::new();
    for token in covers_text.split_whitespace() {
        let (lo, hi) = token.split_once('<').ok_or_else(|| {
            file.syntax(
                file.line_of("covers"),
                format!("cover `{token}` is not of the form x<y"),
            )
        })?;
        covers.push((lo, hi));
    }
    Lattice::from_covers(&elements, &covers)
        .map_err(|e| file.syntax(file.line_of("elements"), e.to_string()))
}

pub fn group_from_file(file: &ParsedFile) -> Result<FiniteGroup, CliError> {
    match file.require("kind")? {
        "permutation" => {
            let degree: usize = file.require("degree")?.parse().map_err(|_| {
                file.syntax(file.line_of("degree"), "degree must be a positive integer")
            })?;
            let gen_text = file.get("generators").unwrap_or("");
            let mut generators: Vec<Vec<Vec<usize>>> = Vec::new();
            for part in split_top_level(gen_text) {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let cycles = parse_cycle_text(part)
                    .map_err(|e| file.syntax(file.line_of("generators"), e.to_string()))?;
                generators.push(cycles);
            }
            FiniteGroup::from_permutations(degree, &generators, DEFAULT_ORDER_CAP)
                .map_err(|e| file.syntax(file.line_of("generators"), e.to_string()))
        }
        "table" => {
            let elements: Vec<&str> = file
                .require("elements")?
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            let rows: Vec<Vec<&str>> = file
                .require("table")?
                .split('/')
                .map(|row| {
                    row.split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .collect()
                })
                .collect();
            FiniteGroup::from_table(&elements, &rows)
                .map_err(|e| file.syntax(file.line_of("table"), e.to_string()))
        }
        other => Err(file.syntax(
            file.line_of("kind"),
            format!("kind must be `permutation` or `table`, found `{other}`"),
        )),
    }
}

/// Splits on commas that sit outside parentheses, so cycle products like
/// `(1 2)(3 4)` stay intact.
fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(ch);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut current));
            }
            _ => current.push(ch),
        }
    }
    if !current.trim().is_empty() {
        out.push(current);
    }
    out
}

pub fn lsubset_from_file(
    file: &ParsedFile,
    workspace: &mut Workspace,
) -> Result<LSubset, CliError> {
    let group = workspace.group(file.require("group")?)?;
    let lattice = workspace.lattice(file.require("lattice")?)?;
    let mut assignments: Vec<(usize, usize)> = Vec::new();
    if let Some(map_text) = file.get("map") {
        for entry in split_top_level(map_text) {
            let entry = entry.trim();
            if entry.is_empty() {
                continue;
            }
            let (elt, val) = entry.split_once(':').ok_or_else(|| {
                file.syntax(
                    file.line_of("map"),
                    format!("map entry `{entry}` is not of the form element:value"),
                )
            })?;
            let x = group
                .element(elt.trim())
                .map_err(|e| file.syntax(file.line_of("map"), e.to_string()))?;
            let v = lattice
                .element(val.trim())
                .map_err(|e| file.syntax(file.line_of("map"), e.to_string()))?;
            assignments.push((x, v));
        }
    }
    let default = match file.get("default") {
        Some(v) => lattice
            .element(v)
            .map_err(|e| file.syntax(file.line_of("default"), e.to_string()))?,
        None => {
            let mut covered = vec![false; group.len()];
            for &(x, _) in &assignments {
                covered[x] = true;
            }
            if covered.iter().all(|&c| c) {
                lattice.bottom()
            } else {
                return Err(file.syntax(
                    0,
                    "map does not cover every element and no `default` is given",
                ));
            }
        }
    };
    LSubset::make(group, lattice, &assignments, default)
        .map_err(|e| file.syntax(file.line_of("map"), e.to_string()))
}

pub fn hom_from_file(file: &ParsedFile, workspace: &mut Workspace) -> Result<GroupHom, CliError> {
    let source = workspace.group(file.require("source")?)?;
    let target = workspace.group(file.require("target")?)?;
    let mut map = vec![usize::MAX; source.len()];
    for entry in split_top_level(file.require("map")?) {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let (from, to) = entry.split_once(':').ok_or_else(|| {
            file.syntax(
                file.line_of("map"),
                format!("map entry `{entry}` is not of the form element:element"),
            )
        })?;
        let x = source
            .element(from.trim())
            .map_err(|e| file.syntax(file.line_of("map"), e.to_string()))?;
        let y = target
            .element(to.trim())
            .map_err(|e| file.syntax(file.line_of("map"), e.to_string()))?;
        map[x] = y;
    }
    if map.contains(&usize::MAX) {
        return Err(file.syntax(file.line_of("map"), "map must cover every source element"));
    }
    GroupHom::new(source, target, map).map_err(|e| file.syntax(file.line_of("map"), e.to_string()))
}

pub fn lattice_to_text(name: &str, lattice: &Lattice) -> String {
    let covers: Vec<String> = lattice
        .covers()
        .iter()
        .map(|&(lo, hi)| format!("{}<{}", lattice.name(lo), lattice.name(hi)))
        .collect();
    format!(
        "[lattice]\nname = {name}\nelements = {}\ncovers = {}\n",
        lattice.names().join(" "),
        covers.join(" ")
    )
}

pub fn group_to_text(name: &str, group: &FiniteGroup) -> String {
    let rows: Vec<String> = (0..group.len())
        .map(|i| {
            (0..group.len())
                .map(|j| group.name(group.mul(i, j)).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect();
    format!(
        "[group]\nname = {name}\nkind = table\nelements = {}\ntable = {}\n",
        group.names().join(", "),
        rows.join(" / ")
    )
}

pub fn lsubset_to_text(
    name: &str,
    subset: &LSubset,
    group_name: &str,
    lattice_name: &str,
) -> String {
    let entries: Vec<String> = (0..subset.group().len())
        .map(|x| {
            format!(
                "{}:{}",
                subset.group().name(x),
                subset.lattice().name(subset.value(x))
            )
        })
        .collect();
    format!(
        "[lsubset]\nname = {name}\ngroup = {group_name}\nlattice = {lattice_name}\nmap = {}\n",
        entries.join(", ")
    )
}

pub fn hom_to_text(name: &str, hom: &GroupHom, source_name: &str, target_name: &str) -> String {
    let entries: Vec<String> = (0..hom.source().len())
        .map(|x| {
            format!(
                "{}:{}",
                hom.source().name(x),
                hom.target().name(hom.apply(x))
            )
        })
        .collect();
    format!(
        "[hom]\nname = {name}\nsource = {source_name}\ntarget = {target_name}\nmap = {}\n",
        entries.join(", ")
    )
}

/// Serializes one suite-failure instance as a concatenation of fixture
/// files, ready to be re-parsed.
pub fn instance_to_text(instance: &lfgt_core::verify::Instance) -> String {
    let mut out = String::new();
    out.push_str(&lattice_to_text("L", &instance.lattice));
    out.push('\n');
    out.push_str(&group_to_text("G", &instance.group));
    out.push('\n');
    out.push_str(&lsubset_to_text("mu", &instance.mu, "G", "L"));
    out.push('\n');
    out.push_str(&lsubset_to_text("eta", &instance.eta, "G", "L"));
    if let Some(hom) = &instance.hom {
        out.push('\n');
        out.push_str(&group_to_text("H", hom.target()));
        out.push('\n');
        out.push_str(&hom_to_text("f", hom, "G", "H"));
    }
    out
}

pub fn arc_group_from_file(file: &ParsedFile) -> Result<Arc<FiniteGroup>, CliError> {
    group_from_file(file).map(Arc::new)
}

pub fn arc_lattice_from_file(file: &ParsedFile) -> Result<Arc<Lattice>, CliError> {
    lattice_from_file(file).map(Arc::new)
}
