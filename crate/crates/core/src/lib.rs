//! Generation and validation of metamorphic test cases for coupled methods.

pub mod minilang;
pub mod code_model;
pub mod coupling;
pub mod llm;
pub mod generation;
pub mod pipeline;
pub mod skeleton;
pub mod validation;

/// Maps `f` over `items` on up to `workers` scoped threads, keeping order.
/// Threads get a large stack since the interpreter recurses on deep calls.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = workers.max(1).min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                std::thread::Builder::new()
                    .stack_size(64 << 20)
                    .spawn_scoped(s, move || part.iter().map(f).collect::<Vec<R>>())
                    .expect("spawn worker")
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}
