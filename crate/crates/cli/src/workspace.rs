//! Named store of loaded lattices, groups and homomorphisms. References by
//! name fall back to the builtin catalogs, so fixtures can point at `S(4)`
//! or `example_M` without shipping those definitions.

use std::path::Path;
use std::sync::Arc;

use lfgt_core::group::{builtin_group, FiniteGroup, GroupHom};
use lfgt_core::lattice::{builtin_lattice, Lattice};
use lfgt_core::lsubset::LSubset;

use crate::error::CliError;
use crate::formats::{self, FileKind};

#[derive(Default)]
pub struct Workspace {
    groups: Vec<(String, Arc<FiniteGroup>)>,
    lattices: Vec<(String, Arc<Lattice>)>,
    homs: Vec<(String, GroupHom)>,
}

pub enum Loaded {
    Group(String),
    Lattice(String),
    Hom(String),
}

impl Workspace {
    pub fn new() -> Workspace {
        Workspace::default()
    }

    fn read(path: &str) -> Result<String, CliError> {
        std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })
    }

    fn stem_of(path: &str) -> String {
        Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.to_string())
    }

    /// Loads any fixture file, registering named kinds for later reference.
    pub fn load_path(&mut self, path: &str) -> Result<Loaded, CliError> {
        let text = Self::read(path)?;
        let file = formats::parse_text(path, &text)?;
        self.load_parsed(file)
    }

    fn load_parsed(&mut self, file: formats::ParsedFile) -> Result<Loaded, CliError> {
        let name = file
            .name()
            .map(|s| s.to_string())
            .unwrap_or_else(|| Self::stem_of(&file.path));
        let taken = match file.kind {
            FileKind::Lattice => self.lattices.iter().any(|(n, _)| *n == name),
            FileKind::Group => self.groups.iter().any(|(n, _)| *n == name),
            FileKind::Hom => self.homs.iter().any(|(n, _)| *n == name),
            FileKind::LSubset => false,
        };
        if taken {
            return Err(CliError::Syntax {
                path: file.path,
                line: 0,
                msg: format!("the name `{name}` is already loaded for this kind"),
            });
        }
        match file.kind {
            FileKind::Lattice => {
                let lattice = formats::arc_lattice_from_file(&file)?;
                self.lattices.push((name.clone(), lattice));
                Ok(Loaded::Lattice(name))
            }
            FileKind::Group => {
                let group = formats::arc_group_from_file(&file)?;
                self.groups.push((name.clone(), group));
                Ok(Loaded::Group(name))
            }
            FileKind::Hom => {
                let hom = formats::hom_from_file(&file, self)?;
                self.homs.push((name.clone(), hom));
                Ok(Loaded::Hom(name))
            }
            FileKind::LSubset => Err(CliError::Syntax {
                path: file.path,
                line: 0,
                msg: "subset files are passed to commands directly, not loaded".into(),
            }),
        }
    }

    /// A lattice-valued subset from a file path.
    pub fn subset_from_path(&mut self, path: &str) -> Result<LSubset, CliError> {
        let text = Self::read(path)?;
        let file = formats::parse_text(path, &text)?;
        if file.kind != FileKind::LSubset {
            return Err(CliError::Syntax {
                path: path.to_string(),
                line: 0,
                msg: "expected an `[lsubset]` file".into(),
            });
        }
        formats::lsubset_from_file(&file, self)
    }

    /// A homomorphism by loaded name or from a file path.
    pub fn hom(&mut self, reference: &str) -> Result<GroupHom, CliError> {
        if let Some((_, h)) = self.homs.iter().find(|(n, _)| n == reference) {
            return Ok(h.clone());
        }
        if !Path::new(reference).is_file() {
            return Err(CliError::UnknownReference(reference.to_string()));
        }
        let text = Self::read(reference)?;
        let file = formats::parse_text(reference, &text)?;
        if file.kind != FileKind::Hom {
            return Err(CliError::Syntax {
                path: reference.to_string(),
                line: 0,
                msg: "expected a `[hom]` file".into(),
            });
        }
        match self.load_parsed(file)? {
            Loaded::Hom(name) => self.hom(&name),
            _ => unreachable!("kind was checked above"),
        }
    }

    /// Resolves a group by loaded name, then by builtin catalog key, then by
    /// treating the reference as a file path.
    pub fn group(&mut self, reference: &str) -> Result<Arc<FiniteGroup>, CliError> {
        if let Some((_, g)) = self.groups.iter().find(|(n, _)| n == reference) {
            return Ok(g.clone());
        }
        if let Ok(g) = builtin_group(reference) {
            let arc = Arc::new(g);
            self.groups.push((reference.to_string(), arc.clone()));
            return Ok(arc);
        }
        if Path::new(reference).is_file() {
            if let Loaded::Group(name) = self.load_path(reference)? {
                return self.group(&name);
            }
        }
        Err(CliError::UnknownReference(reference.to_string()))
    }

    /// Same resolution order for lattices.
    pub fn lattice(&mut self, reference: &str) -> Result<Arc<Lattice>, CliError> {
        if let Some((_, l)) = self.lattices.iter().find(|(n, _)| n == reference) {
            return Ok(l.clone());
        }
        if let Ok(l) = builtin_lattice(reference) {
            let arc = Arc::new(l);
            self.lattices.push((reference.to_string(), arc.clone()));
            return Ok(arc);
        }
        if Path::new(reference).is_file() {
            if let Loaded::Lattice(name) = self.load_path(reference)? {
                return self.lattice(&name);
            }
        }
        Err(CliError::UnknownReference(reference.to_string()))
    }
}
