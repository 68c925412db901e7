use bisector_core::Executor;
use rayon::prelude::*;

/// Fans work out over the rayon pool. `collect` on an indexed parallel
/// iterator keeps index order, so results match [`bisector_core::Sequential`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Rayon;

impl Executor for Rayon {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).into_par_iter().map(f).collect()
    }
}
