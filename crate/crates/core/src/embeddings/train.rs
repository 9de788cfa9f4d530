use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gradient::{code_sign, negative_term, positive_term};
use super::{EmbeddingModel, HuffmanTree, NegativeTable, TrainingParams, Variant};
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::scalar::{axpy, dot, Real};

/// Row-major matrix whose rows workers read and write without locks.
struct SharedMatrix<T: Real> {
    cells: Vec<T::Cell>,
    dim: usize,
}

impl<T: Real> SharedMatrix<T> {
    fn new(values: Vec<T>, dim: usize) -> Self {
        SharedMatrix {
            cells: values.into_iter().map(T::new_cell).collect(),
            dim,
        }
    }

    fn read_row(&self, row: usize, out: &mut [T]) {
        let cells = &self.cells[row * self.dim..(row + 1) * self.dim];
        for (o, c) in out.iter_mut().zip(cells) {
            *o = T::load(c);
        }
    }

    /// `row += alpha * x`
    fn add_to_row(&self, row: usize, alpha: T, x: &[T]) {
        let cells = &self.cells[row * self.dim..(row + 1) * self.dim];
        for (c, &xi) in cells.iter().zip(x) {
            T::store(c, T::load(c) + alpha * xi);
        }
    }

    fn into_vec(self) -> Vec<T> {
        self.cells.iter().map(T::load).collect()
    }
}

enum Objective {
    Negative(NegativeTable),
    Hierarchical(HuffmanTree),
}

struct Shared<'a, T: Real> {
    input: SharedMatrix<T>,
    output: SharedMatrix<T>,
    objective: Objective,
    params: &'a TrainingParams,
    keep_probability: Vec<f64>,
    /// Tokens processed so far across workers and epochs.
    progress: AtomicUsize,
    total_work: usize,
}

impl<T: Real> Shared<'_, T> {
    fn learning_rate(&self) -> T {
        let done = self.progress.load(Ordering::Relaxed) as f64 / self.total_work.max(1) as f64;
        let p = self.params;
        let lr = p.learning_rate - (p.learning_rate - p.min_learning_rate) * done.min(1.0);
        T::of(lr.max(p.min_learning_rate))
    }
}

struct Worker<T> {
    rng: ChaCha8Rng,
    center: Vec<T>,
    other: Vec<T>,
    center_grad: Vec<T>,
    kept: Vec<usize>,
}

impl<T: Real> Worker<T> {
    fn new(seed: u64, stream: u64, dim: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Worker {
            rng,
            center: vec![T::zero(); dim],
            other: vec![T::zero(); dim],
            center_grad: vec![T::zero(); dim],
            kept: Vec::new(),
        }
    }

    /// One epoch over `sentences`; returns (summed loss, pair count).
    fn epoch(&mut self, shared: &Shared<'_, T>, sentences: &[Vec<usize>]) -> (f64, u64) {
        let window = shared.params.window;
        let mut loss = 0.0;
        let mut pairs = 0u64;
        for sentence in sentences {
            self.kept.clear();
            for &w in sentence {
                let keep = shared.keep_probability[w];
                if keep >= 1.0 || self.rng.gen::<f64>() < keep {
                    self.kept.push(w);
                }
            }
            let lr = shared.learning_rate();
            let kept = std::mem::take(&mut self.kept);
            for (pos, &center) in kept.iter().enumerate() {
                let lo = pos.saturating_sub(window);
                let hi = (pos + window).min(kept.len() - 1);
                for (ctx_pos, &context) in kept.iter().enumerate().take(hi + 1).skip(lo) {
                    if ctx_pos == pos {
                        continue;
                    }
                    let objective = match &shared.objective {
                        Objective::Negative(table) => {
                            self.sgns_step(shared, table, center, context, lr)
                        }
                        Objective::Hierarchical(tree) => {
                            self.sghs_step(shared, tree, center, context, lr)
                        }
                    };
                    loss -= objective.to_f64().unwrap_or(f64::NAN);
                    pairs += 1;
                }
            }
            self.kept = kept;
            shared.progress.fetch_add(sentence.len(), Ordering::Relaxed);
        }
        (loss, pairs)
    }

    fn sgns_step(
        &mut self,
        shared: &Shared<'_, T>,
        table: &NegativeTable,
        center: usize,
        context: usize,
        lr: T,
    ) -> T {
        shared.input.read_row(center, &mut self.center);
        self.center_grad.iter_mut().for_each(|g| *g = T::zero());

        shared.output.read_row(context, &mut self.other);
        let (mut objective, g) = positive_term(dot(&self.center, &self.other));
        axpy(g, &self.other, &mut self.center_grad);
        shared.output.add_to_row(context, lr * g, &self.center);

        for _ in 0..shared.params.negative_samples {
            let negative = table.sample(&mut self.rng);
            if negative == context {
                continue;
            }
            shared.output.read_row(negative, &mut self.other);
            let (obj, g) = negative_term(dot(&self.center, &self.other));
            objective += obj;
            axpy(g, &self.other, &mut self.center_grad);
            shared.output.add_to_row(negative, lr * g, &self.center);
        }
        shared.input.add_to_row(center, lr, &self.center_grad);
        objective
    }

    fn sghs_step(
        &mut self,
        shared: &Shared<'_, T>,
        tree: &HuffmanTree,
        center: usize,
        context: usize,
        lr: T,
    ) -> T {
        shared.input.read_row(center, &mut self.center);
        self.center_grad.iter_mut().for_each(|g| *g = T::zero());
        let mut objective = T::zero();
        for (&node, &bit) in tree.path(context).iter().zip(tree.code(context)) {
            let node = node as usize;
            shared.output.read_row(node, &mut self.other);
            let s = code_sign::<T>(bit);
            let (obj, g) = positive_term(s * dot(&self.center, &self.other));
            objective += obj;
            let g = s * g;
            axpy(g, &self.other, &mut self.center_grad);
            shared.output.add_to_row(node, lr * g, &self.center);
        }
        shared.input.add_to_row(center, lr, &self.center_grad);
        objective
    }
}

/// Trains skip-gram embeddings over `sentences` (lowercased lemma sequences).
///
/// Words outside `vocabulary` are dropped before context windows are formed.
/// With `params.threads == 1` the result depends only on the inputs and
/// `params.rng_seed`. With more threads, workers update shared rows without
/// synchronization and results vary between runs.
pub fn train<T: Real, S: AsRef<str>>(
    sentences: &[Vec<S>],
    vocabulary: &Vocabulary,
    params: &TrainingParams,
    variant: Variant,
) -> Result<EmbeddingModel<T>> {
    if vocabulary.is_empty() {
        return Err(Error::EmptyVocabulary(vocabulary.min_count()));
    }
    params.validate(variant)?;
    let dim = params.dimensionality;
    let n = vocabulary.len();

    let encoded: Vec<Vec<usize>> = sentences
        .iter()
        .map(|s| vocabulary.encode(s.iter().map(AsRef::as_ref)))
        .filter(|s| !s.is_empty())
        .collect();
    let corpus_tokens: usize = encoded.iter().map(Vec::len).sum();

    let mut init_rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let scale = 0.5 / dim as f64;
    let input: Vec<T> = (0..n * dim)
        .map(|_| T::of((init_rng.gen::<f64>() * 2.0 - 1.0) * scale))
        .collect();

    let (objective, output_rows) = match variant {
        Variant::Sgns => {
            let counts: Vec<u64> = vocabulary.counts().iter().map(|&c| c.max(1)).collect();
            (Objective::Negative(NegativeTable::new(&counts)?), n)
        }
        Variant::Sghs => {
            let tree = HuffmanTree::build(vocabulary.counts());
            let rows = tree.internal_nodes();
            (Objective::Hierarchical(tree), rows)
        }
    };

    let keep_probability = keep_probabilities(vocabulary.counts(), params.subsample);
    let shared = Shared {
        input: SharedMatrix::new(input, dim),
        output: SharedMatrix::new(vec![T::zero(); output_rows * dim], dim),
        objective,
        params,
        keep_probability,
        progress: AtomicUsize::new(0),
        total_work: corpus_tokens * params.iterations,
    };

    let threads = params.threads.min(encoded.len().max(1));
    let chunk = encoded.len().div_ceil(threads).max(1);
    let per_worker: Vec<Vec<(f64, u64)>> = if threads == 1 {
        let mut worker = Worker::new(params.rng_seed, 1, dim);
        vec![(0..params.iterations)
            .map(|_| worker.epoch(&shared, &encoded))
            .collect()]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = encoded
                .chunks(chunk)
                .enumerate()
                .map(|(i, part)| {
                    let shared = &shared;
                    scope.spawn(move || {
                        let mut worker = Worker::new(params.rng_seed, i as u64 + 1, dim);
                        (0..params.iterations)
                            .map(|_| worker.epoch(shared, part))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("training worker panicked"))
                .collect()
        })
    };

    let epoch_losses = (0..params.iterations)
        .map(|e| {
            let (loss, pairs) = per_worker
                .iter()
                .map(|w| w[e])
                .fold((0.0, 0u64), |a, b| (a.0 + b.0, a.1 + b.1));
            if pairs == 0 {
                0.0
            } else {
                loss / pairs as f64
            }
        })
        .collect();

    let Shared {
        input,
        output,
        objective,
        ..
    } = shared;
    let huffman = match objective {
        Objective::Hierarchical(tree) => Some(tree),
        Objective::Negative(_) => None,
    };
    Ok(EmbeddingModel {
        vocabulary: vocabulary.clone(),
        dim,
        variant,
        input: input.into_vec(),
        output: output.into_vec(),
        huffman,
        epoch_losses,
    })
}

/// Frequent-word subsampling keep probabilities; all 1 when disabled.
fn keep_probabilities(counts: &[u64], threshold: f64) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    if threshold <= 0.0 || total == 0 {
        return vec![1.0; counts.len()];
    }
    counts
        .iter()
        .map(|&c| {
            let f = c as f64 / total as f64;
            if f == 0.0 {
                1.0
            } else {
                ((f / threshold).sqrt() + 1.0) * threshold / f
            }
        })
        .collect()
}
