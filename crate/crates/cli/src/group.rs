use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use conjugacy::backend::{
    AbelianSubgroup, FiniteTable, FreeAbelian, FreeGroup, GroupBackend, RewritingBackend,
};
use conjugacy::freeprod::{FreeProduct, Order2Reps};
use conjugacy::index2::{KernelBackend, OrientationCharacter};
use conjugacy::klein::{klein_alphabet, KleinBackend};
use conjugacy::pipeline::{Budgets, KleinCoordinates, PipelineContext};
use conjugacy::word::{Presentation, Word};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    Free,
    FreeAbelian,
    FiniteTable,
    Klein,
    Rewriting,
    FreeProduct,
}

fn default_kb_budget() -> usize {
    1000
}

/// On-disk description of a group and the solver behind it.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
    /// Generator name to ±1.
    #[serde(default)]
    pub character: Option<BTreeMap<String, i64>>,
    pub backend: BackendKind,
    /// `finite_table`: `table[i][j]` is the product of elements `i` and `j`.
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    /// `finite_table`: the element each generator stands for.
    #[serde(default)]
    pub gen_images: Option<Vec<usize>>,
    /// `free_product`: one group description per factor.
    #[serde(default)]
    pub factors: Option<Vec<GroupFile>>,
    /// Representatives of the conjugacy classes of involutions.
    #[serde(default)]
    pub order2_reps: Option<Vec<String>>,
    /// Representative of the orientation-reversing coset.
    #[serde(default)]
    pub coset_rep: Option<String>,
    #[serde(default = "default_kb_budget")]
    pub kb_budget: usize,
}

impl GroupFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(path.display().to_string(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Json(path.display().to_string(), e))
    }
}

/// A parsed group file with its solver.
pub struct Group {
    pub file: GroupFile,
    pub presentation: Presentation,
    pub backend: Arc<dyn GroupBackend>,
}

impl Group {
    pub fn new(file: GroupFile, search_budget: usize) -> Result<Self, CliError> {
        let backend = build_backend(&file, search_budget)?;
        let mut relators = file.relators.clone();
        for f in file.factors.iter().flatten() {
            relators.extend(f.relators.iter().cloned());
        }
        let presentation = Presentation::parse(&file.generators, &relators)?;
        if backend.alphabet().names().ne(presentation.alphabet.names()) {
            return Err(CliError::Input(format!(
                "generators {:?} do not match the backend's {:?}",
                file.generators,
                backend.alphabet().names().collect::<Vec<_>>()
            )));
        }
        Ok(Group {
            file,
            presentation,
            backend,
        })
    }

    pub fn parse(&self, text: &str) -> Result<Word, CliError> {
        Ok(self.presentation.alphabet.parse(text)?)
    }

    pub fn format(&self, w: &Word) -> String {
        self.presentation.alphabet.format(w)
    }

    pub fn character(&self) -> Result<Option<OrientationCharacter>, CliError> {
        self.file
            .character
            .as_ref()
            .map(|m| OrientationCharacter::from_map(&self.presentation, m))
            .transpose()
            .map_err(CliError::from)
    }

    pub fn pipeline(
        &self,
        chi: OrientationCharacter,
        budget: usize,
    ) -> Result<PipelineContext, CliError> {
        let klein = self.file.backend == BackendKind::Klein;
        let h: Box<dyn GroupBackend> = if klein {
            Box::new(AbelianSubgroup::with_basis(
                KleinBackend::new(),
                Word::gen(0),
                Word::gen(1),
            ))
        } else {
            Box::new(KernelBackend::new(
                self.backend.clone(),
                chi.clone(),
                budget,
            ))
        };
        let mut b = PipelineContext::builder(
            self.presentation.clone(),
            chi,
            h,
            Box::new(self.backend.clone()),
        )
        .budgets(Budgets {
            enumeration: budget,
            power_search: budget,
        });
        if klein {
            b = b.zz_coordinates(Box::new(KleinCoordinates));
        }
        if let Some(reps) = &self.file.order2_reps {
            let words = reps
                .iter()
                .map(|r| self.parse(r))
                .collect::<Result<Vec<_>, _>>()?;
            b = b.order2_reps(Order2Reps::new(self.backend.as_ref(), words)?);
        }
        if let Some(a1) = &self.file.coset_rep {
            b = b.coset_rep(self.parse(a1)?);
        }
        Ok(b.build()?)
    }
}

fn build_backend(
    file: &GroupFile,
    search_budget: usize,
) -> Result<Arc<dyn GroupBackend>, CliError> {
    let p = Presentation::parse(&file.generators, &file.relators)?;
    let missing =
        |what: &str| CliError::Input(format!("{:?} backend needs \"{what}\"", file.backend));
    Ok(match file.backend {
        BackendKind::Free => Arc::new(FreeGroup::new(p.alphabet)),
        BackendKind::FreeAbelian => Arc::new(FreeAbelian::new(p.alphabet)),
        BackendKind::Klein => {
            if p.alphabet.names().ne(klein_alphabet().names()) {
                return Err(CliError::Input(
                    "klein backend needs generators [\"a\", \"b\", \"t\"]".into(),
                ));
            }
            Arc::new(KleinBackend::new())
        }
        BackendKind::FiniteTable => {
            let table = file.table.clone().ok_or_else(|| missing("table"))?;
            let images = file
                .gen_images
                .clone()
                .ok_or_else(|| missing("gen_images"))?;
            Arc::new(FiniteTable::new(p.alphabet, table, images)?)
        }
        BackendKind::Rewriting => Arc::new(
            RewritingBackend::new(&p, file.kb_budget, search_budget).map_err(|e| {
                CliError::Exhausted(format!("completion stopped after {} rules", e.budget))
            })?,
        ),
        BackendKind::FreeProduct => {
            let factors = file.factors.as_ref().ok_or_else(|| missing("factors"))?;
            let built = factors
                .iter()
                .map(|f| {
                    build_backend(f, search_budget).map(|b| Box::new(b) as Box<dyn GroupBackend>)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Arc::new(FreeProduct::new(built)?)
        }
    })
}
