use super::{entry, BranchMapper, TransformEntry, TransformId};
use crate::param::Parameter;
use crate::system::Triple;
use crate::{Error, Result};

/// One link of a chain: an entry, the variant to use and the branch to follow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub id: TransformId,
    pub variant: String,
    pub branch: usize,
}

impl Stage {
    pub fn new(id: TransformId, variant: &str, branch: usize) -> Self {
        Stage {
            id,
            variant: variant.to_string(),
            branch,
        }
    }

    /// First listed variant, branch 0.
    pub fn default_for(id: TransformId) -> Self {
        Stage::new(id, entry(id).variants[0].name, 0)
    }
}

/// Several entries applied in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composite {
    stages: Vec<Stage>,
}

/// Chain stages, checking that each target parameter is the next source.
pub fn compose(stages: Vec<Stage>) -> Result<Composite> {
    if stages.is_empty() {
        return Err(Error::InvalidInput("empty composition".into()));
    }
    for s in &stages {
        BranchMapper::new(entry(s.id), &s.variant, s.branch)?;
    }
    for pair in stages.windows(2) {
        let (a, b) = (entry(pair[0].id), entry(pair[1].id));
        if a.target != b.source {
            return Err(Error::ParameterMismatch {
                from: a.id.to_string(),
                to: b.id.to_string(),
                target: a.target.to_string(),
                source_k: b.source.to_string(),
            });
        }
    }
    Ok(Composite { stages })
}

impl Composite {
    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn entries(&self) -> impl Iterator<Item = &'static TransformEntry> + '_ {
        self.stages.iter().map(|s| entry(s.id))
    }

    pub fn source(&self) -> Parameter {
        entry(self.stages[0].id).source
    }

    pub fn target(&self) -> Parameter {
        entry(self.stages[self.stages.len() - 1].id).target
    }

    /// A fresh point mapper with one branch tracker per stage.
    pub fn mapper(&self) -> CompositeMapper {
        CompositeMapper {
            stages: self
                .stages
                .iter()
                .map(|s| {
                    BranchMapper::new(entry(s.id), &s.variant, s.branch)
                        .expect("validated in compose")
                })
                .collect(),
        }
    }
}

/// Threads a point and its derivative through every stage of a [`Composite`].
#[derive(Debug, Clone)]
pub struct CompositeMapper {
    stages: Vec<BranchMapper>,
}

impl CompositeMapper {
    pub fn map(&mut self, x: f64, t: &Triple, dt: &Triple) -> Result<(Triple, Triple)> {
        let mut cur = (*t, *dt);
        for stage in &mut self.stages {
            cur = stage.map(x, &cur.0, &cur.1)?;
        }
        Ok(cur)
    }
}
