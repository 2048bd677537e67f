//! Everything computed for one weighted Coxeter group, built in dependency order.

use std::sync::Arc;

use crate::cells::{AsymptoticOptions, AsymptoticTables, CellDecomposition};
use crate::coxeter::{CoxeterDatum, CoxeterError, CoxeterGroup, Elem};
use crate::hecke::{default_kl_strategy, HeckeAlgebra, KlStrategy, KlTable, StructureTable};

#[derive(Clone, Copy)]
pub struct AnalysisOptions {
    pub kl: &'static dyn KlStrategy,
    pub asymptotic: AsymptoticOptions,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { kl: default_kl_strategy(), asymptotic: AsymptoticOptions::default() }
    }
}

impl std::fmt::Debug for AnalysisOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalysisOptions").field("kl", &self.kl.name()).field("asymptotic", &self.asymptotic).finish()
    }
}

/// Precomputed data that can be supplied instead of being recomputed.
#[derive(Debug, Clone, Default)]
pub struct Precomputed {
    pub kl: Option<KlTable>,
    pub a: Option<Vec<u32>>,
    pub distinguished: Option<Vec<(Elem, i64)>>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub group: Arc<CoxeterGroup>,
    pub hecke: Arc<HeckeAlgebra>,
    pub structure: Arc<StructureTable>,
    pub cells: Arc<CellDecomposition>,
    pub tables: Arc<AsymptoticTables>,
}

impl Analysis {
    pub fn new(datum: CoxeterDatum, options: AnalysisOptions) -> Result<Self, CoxeterError> {
        Ok(Self::from_group(Arc::new(CoxeterGroup::new(datum)?), options, Precomputed::default()))
    }

    /// Named type with default options, e.g. `("B3", &[2, 2, 1])`.
    pub fn for_type(name: &str, weights: &[u32]) -> Result<Self, CoxeterError> {
        Self::new(CoxeterDatum::from_type(name, weights.to_vec())?, AnalysisOptions::default())
    }

    pub fn from_group(group: Arc<CoxeterGroup>, options: AnalysisOptions, pre: Precomputed) -> Self {
        let hecke = Arc::new(match pre.kl {
            Some(kl) => HeckeAlgebra::with_kl_table(group.clone(), kl),
            None => HeckeAlgebra::new(group.clone(), options.kl),
        });
        let structure = Arc::new(StructureTable::new(hecke.clone()));
        let cells = Arc::new(CellDecomposition::compute(&structure));
        let tables = Arc::new(match pre.a {
            Some(a) => {
                AsymptoticTables::from_parts(structure.clone(), cells.clone(), options.asymptotic, a, pre.distinguished)
            }
            None => AsymptoticTables::build(structure.clone(), cells.clone(), options.asymptotic),
        });
        Self { group, hecke, structure, cells, tables }
    }
}
