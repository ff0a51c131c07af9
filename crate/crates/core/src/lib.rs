//! Classification of the singular-vertex links of nonnegatively curved
//! integral polyhedral 3-manifolds: spherical cone surfaces arising as
//! ramified covers of the two quotient orbifolds of the sphere by the
//! orientation-preserving symmetries of the cube and of the hexagonal
//! dihedron, together with certified diameter and narrow-point bound
//! machinery for the accompanying packing arguments.

pub mod angles;
pub mod branching;
pub mod classifier;
pub mod cloud;
pub mod covers;
pub mod geometry;
pub mod interval;
pub mod narrow;
pub mod perm;
pub mod table;

/// Execution strategy for the embarrassingly parallel stages. `Parallel`
/// falls back to sequential execution when the `parallel` feature is off.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        Exec::Parallel
    }
}

/// Cap the global worker-thread count for `Exec::Parallel` stages. Must be
/// called before the first parallel stage runs; later calls fail. A no-op
/// without the `parallel` feature.
pub fn set_global_jobs(jobs: usize) -> Result<(), String> {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| e.to_string())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        Ok(())
    }
}

/// Map `f` over `items`, preserving order, with the chosen strategy.
pub(crate) fn exec_map<T, U, F>(exec: Exec, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match exec {
        Exec::Sequential => items.into_iter().map(f).collect(),
        Exec::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().map(f).collect()
            }
        }
    }
}
