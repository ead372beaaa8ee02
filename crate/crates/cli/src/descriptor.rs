use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use tritower::families::{build, resolve_str, GroupDescriptor, Resolved, Tree, Variant};
use tritower::PcPresentation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeArg {
    #[value(alias = "q")]
    Q,
    #[value(alias = "u")]
    U,
}

impl From<TreeArg> for Tree {
    fn from(t: TreeArg) -> Tree {
        match t {
            TreeArg::Q => Tree::Q,
            TreeArg::U => Tree::U,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Mainline,
    Metabelian,
    Cover,
}

/// Names a group: a relative identifier, family coordinates, or a pc file.
#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    /// Relative identifier such as `F(-#2;1-#1;1)^1[-#2;3]`
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long, value_enum, default_value = "q")]
    pub tree: TreeArg,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Nilpotency class c
    #[arg(long)]
    pub class: Option<u32>,
    /// State n, standing for class 2n+5
    #[arg(long)]
    pub n: Option<u32>,
    /// Relator variant: a tag (primary, second-a, ...) or a type name (E.6, G.16b, ...)
    #[arg(long)]
    pub variant: Option<String>,
    /// Counter i of the metabelian vertex or Schur group
    #[arg(long)]
    pub i: Option<u32>,
    /// Cover parameter ell in {-1, 0, 1}
    #[arg(long, allow_hyphen_values = true)]
    pub ell: Option<i8>,
    /// Coclass r of a mainline vertex
    #[arg(long, default_value_t = 2)]
    pub coclass: u32,
    /// Read a pc presentation instead
    #[arg(long, conflicts_with_all = ["id", "kind"])]
    pub pc_file: Option<PathBuf>,
}

/// A resolved group with the label it is reported under.
pub struct Named {
    pub label: String,
    pub descriptor: Option<GroupDescriptor>,
    pub group: Arc<PcPresentation>,
}

impl GroupArgs {
    fn class(&self) -> Result<u32> {
        match (self.class, self.n) {
            (Some(c), None) => Ok(c),
            (None, Some(n)) => Ok(2 * n + 5),
            (Some(c), Some(n)) if c == 2 * n + 5 => Ok(c),
            (Some(_), Some(_)) => bail!("--class and --n disagree"),
            (None, None) => bail!("give --class or --n"),
        }
    }

    pub fn descriptor(&self) -> Result<GroupDescriptor> {
        let tree = Tree::from(self.tree);
        if let Some(id) = &self.id {
            return match resolve_str(id, tree)? {
                Resolved::Constructible(d) => Ok(d),
                Resolved::Unconstructible(u) => bail!("{id} names {u}, which has no presentation here"),
            };
        }
        let kind = self.kind.ok_or_else(|| anyhow!("give --id, --kind or --pc-file"))?;
        let d = match kind {
            KindArg::Mainline => GroupDescriptor::mainline(tree, self.class()?, self.coclass),
            KindArg::Metabelian => {
                let variant = match (&self.variant, self.i) {
                    (Some(v), None) => {
                        Variant::parse(v, tree).ok_or_else(|| anyhow!("unknown variant {v}"))?
                    }
                    (None, Some(i)) => match i {
                        1 => Variant::Mainline,
                        2 => Variant::Primary,
                        3 => Variant::SecondA,
                        4 => Variant::SecondB,
                        _ => bail!("counter i must be 1..4"),
                    },
                    (None, None) => bail!("give --variant or --i"),
                    (Some(_), Some(_)) => bail!("give only one of --variant and --i"),
                };
                GroupDescriptor::metabelian(tree, self.class()?, variant)
            }
            KindArg::Cover => {
                let ell = match (self.ell, self.i) {
                    (Some(l), None) => l,
                    (None, Some(2)) => 0,
                    (None, Some(3)) => -1,
                    (None, Some(4)) => 1,
                    (None, Some(i)) => bail!("no cover with counter {i}"),
                    (None, None) => bail!("give --ell or --i"),
                    (Some(_), Some(_)) => bail!("give only one of --ell and --i"),
                };
                GroupDescriptor::cover(tree.e(), ell, self.class()?)
            }
        };
        d.validate()?;
        Ok(d)
    }

    pub fn load(&self) -> Result<Named> {
        if let Some(path) = &self.pc_file {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let g = PcPresentation::from_text(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            return Ok(Named {
                label: path.display().to_string(),
                descriptor: None,
                group: Arc::new(g),
            });
        }
        let d = self.descriptor()?;
        Ok(Named {
            label: d.to_string(),
            descriptor: Some(d),
            group: build(&d)?,
        })
    }
}
