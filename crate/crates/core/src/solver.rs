//! Dispatch from a semantics name and engine to the computing routine.

use crate::adf::{adf_complete, adf_grounded, preferred_from};
use crate::error::{Error, Result};
use crate::framework::Framework;
use crate::scc::bottom_up_maxi_with;
use crate::semantics::{
    exact_with, grounded_of, maximally_proper_with, preferred_of, stable_of, Engine, Search,
    SemanticsName, SemanticsResult,
};

pub const DEFAULT_MAX_BRUTE: usize = 12;

/// The largest framework the exhaustive engine accepts: `MAYMUST_MAX_BRUTE`
/// if set to a number, otherwise [`DEFAULT_MAX_BRUTE`].
pub fn max_brute() -> usize {
    std::env::var("MAYMUST_MAX_BRUTE")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_BRUTE)
}

pub fn ensure_brute_feasible(f: &Framework) -> Result<()> {
    let bound = max_brute();
    if f.len() > bound {
        return Err(Error::InstanceTooLarge {
            args: f.len(),
            bound,
        });
    }
    Ok(())
}

fn maxi_complete(f: &Framework, engine: Engine, search: Search) -> Result<SemanticsResult> {
    match engine {
        Engine::Brute => maximally_proper_with(f, search),
        Engine::Scc => bottom_up_maxi_with(f, search),
    }
}

/// Computes one semantics. The brute engine and the fixpoint scans behind
/// `adf-complete` and `adf-preferred` refuse frameworks above [`max_brute`].
/// The consensus-operator semantics have no SCC variant and always report the
/// brute engine.
pub fn solve(
    f: &Framework,
    name: SemanticsName,
    engine: Engine,
    search: Search,
) -> Result<SemanticsResult> {
    use SemanticsName::*;
    let exhaustive_scan = matches!(name, AdfComplete | AdfPreferred);
    if engine == Engine::Brute || exhaustive_scan {
        ensure_brute_feasible(f)?;
    }
    let mut result = match name {
        Exact => {
            let search = if engine == Engine::Scc {
                Search::Pruned
            } else {
                search
            };
            exact_with(f, search)
        }
        MaxiComplete => maxi_complete(f, engine, search)?,
        MaxiPreferred => preferred_of(&maxi_complete(f, engine, search)?, MaxiPreferred),
        MaxiStable => match maxi_complete(f, engine, search) {
            Ok(c) => stable_of(&c, MaxiStable),
            Err(Error::NoMaximallyProper) => SemanticsResult::new(MaxiStable, engine, Vec::new()),
            Err(e) => return Err(e),
        },
        MaxiGrounded => grounded_of(&maxi_complete(f, engine, search)?, MaxiGrounded)?,
        AdfComplete => return Ok(adf_complete(f)),
        AdfPreferred => return Ok(preferred_from(&adf_complete(f))),
        AdfGrounded => return adf_grounded(f),
        other => {
            return Err(Error::Unsupported(other.as_str().to_string()));
        }
    };
    result.engine = engine;
    Ok(result)
}
