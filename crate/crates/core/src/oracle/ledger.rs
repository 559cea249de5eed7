use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

/// Per-phase counters, keyed by the innermost active phase label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseStats {
    pub queries: u64,
    pub batches: u64,
}

/// Point-in-time copy of a ledger. Serializes as
/// `{"queries":..,"rounds":..,"raw_queries":..,"phases":{..}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerSnapshot {
    pub queries: u64,
    pub rounds: u64,
    pub raw_queries: u64,
    #[serde(default)]
    pub phases: BTreeMap<String, PhaseStats>,
}

impl LedgerSnapshot {
    /// Counter differences relative to an earlier snapshot of the same ledger.
    pub fn since(&self, earlier: &LedgerSnapshot) -> LedgerSnapshot {
        let phases = self
            .phases
            .iter()
            .map(|(k, s)| {
                let e = earlier.phases.get(k).copied().unwrap_or_default();
                (
                    k.clone(),
                    PhaseStats {
                        queries: s.queries - e.queries,
                        batches: s.batches - e.batches,
                    },
                )
            })
            .filter(|(_, s)| s.queries > 0 || s.batches > 0)
            .collect();
        LedgerSnapshot {
            queries: self.queries - earlier.queries,
            rounds: self.rounds - earlier.rounds,
            raw_queries: self.raw_queries - earlier.raw_queries,
            phases,
        }
    }
}

#[derive(Default)]
struct Phases {
    stack: Vec<String>,
    stats: BTreeMap<String, PhaseStats>,
}

/// Counts charged queries and measures rounds along the parallel critical path.
///
/// Every batch advances the round clock by one. Inside [`fork_join`](Self::fork_join)
/// each branch starts from the clock value at the fork, and the clock after the
/// join is the latest branch end, so rounds add as a max over branches while
/// queries add as a sum.
#[derive(Default)]
pub struct QueryLedger {
    queries: AtomicU64,
    raw_queries: AtomicU64,
    clock: AtomicU64,
    phases: Mutex<Phases>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one batch: `charged` queries billed, `raw` queries answered.
    /// A batch with nothing billed does not cost a round.
    pub fn record_batch(&self, charged: u64, raw: u64) {
        self.raw_queries.fetch_add(raw, Ordering::Relaxed);
        if charged == 0 {
            return;
        }
        self.queries.fetch_add(charged, Ordering::Relaxed);
        self.clock.fetch_add(1, Ordering::Relaxed);
        let mut phases = self.phases.lock().expect("ledger mutex poisoned");
        if let Some(label) = phases.stack.last().cloned() {
            let s = phases.stats.entry(label).or_default();
            s.queries += charged;
            s.batches += 1;
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn raw_queries(&self) -> u64 {
        self.raw_queries.load(Ordering::Relaxed)
    }

    pub fn rounds(&self) -> u64 {
        self.clock.load(Ordering::Relaxed)
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        let phases = self.phases.lock().expect("ledger mutex poisoned").stats.clone();
        LedgerSnapshot {
            queries: self.queries(),
            rounds: self.rounds(),
            raw_queries: self.raw_queries(),
            phases,
        }
    }

    /// Runs independent branches. Branches execute one after another on the
    /// calling thread; only the round accounting treats them as parallel.
    pub fn fork_join<T, F, I>(&self, branches: I) -> Vec<T>
    where
        F: FnOnce() -> T,
        I: IntoIterator<Item = F>,
    {
        let start = self.rounds();
        let mut end = start;
        let results = branches
            .into_iter()
            .map(|branch| {
                self.clock.store(start, Ordering::Relaxed);
                let out = branch();
                end = end.max(self.rounds());
                out
            })
            .collect();
        self.clock.store(end, Ordering::Relaxed);
        results
    }

    /// Two-branch [`fork_join`](Self::fork_join) for branches of different types.
    pub fn fork_join2<A, B>(&self, left: impl FnOnce() -> A, right: impl FnOnce() -> B) -> (A, B) {
        let start = self.rounds();
        let a = left();
        let left_end = self.rounds();
        self.clock.store(start, Ordering::Relaxed);
        let b = right();
        let end = left_end.max(self.rounds());
        self.clock.store(end, Ordering::Relaxed);
        (a, b)
    }

    /// Attributes queries to `label` until the guard drops.
    pub fn phase(&self, label: &str) -> PhaseGuard<'_> {
        self.phases
            .lock()
            .expect("ledger mutex poisoned")
            .stack
            .push(label.to_owned());
        PhaseGuard { ledger: self }
    }
}

pub struct PhaseGuard<'a> {
    ledger: &'a QueryLedger,
}

impl Drop for PhaseGuard<'_> {
    fn drop(&mut self) {
        if let Ok(mut phases) = self.ledger.phases.lock() {
            phases.stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(ledger: &QueryLedger, rounds: u64, queries: u64) {
        // Spread `queries` over `rounds` batches.
        for i in 0..rounds {
            let q = if i == 0 { queries - (rounds - 1) } else { 1 };
            ledger.record_batch(q, q);
        }
    }

    #[test]
    fn sequential_batches_add() {
        let l = QueryLedger::new();
        l.record_batch(5, 5);
        l.record_batch(5, 5);
        assert_eq!((l.rounds(), l.queries()), (2, 10));
    }

    #[test]
    fn fork_join_takes_max_rounds_and_sum_queries() {
        let l = QueryLedger::new();
        l.record_batch(1, 1);
        l.fork_join([(3u64, 10u64), (5, 6)].map(|(r, q)| {
            let l = &l;
            move || run(l, r, q)
        }));
        assert_eq!(l.rounds(), 1 + 5);
        assert_eq!(l.queries(), 1 + 16);
    }

    #[test]
    fn single_branch_is_inline() {
        let a = QueryLedger::new();
        run(&a, 3, 7);
        let b = QueryLedger::new();
        b.fork_join([|| run(&b, 3, 7)]);
        assert_eq!(a.snapshot(), b.snapshot());
    }

    #[test]
    fn k_single_round_branches_cost_one_round() {
        let l = QueryLedger::new();
        l.fork_join((0..8).map(|_| || l.record_batch(2, 2)));
        assert_eq!((l.rounds(), l.queries()), (1, 16));
    }

    #[test]
    fn nested_fork_join_measures_critical_path() {
        let l = QueryLedger::new();
        let (_, _) = l.fork_join2(
            || {
                l.record_batch(1, 1);
                l.fork_join2(|| run(&l, 2, 2), || run(&l, 4, 4));
            },
            || run(&l, 3, 3),
        );
        assert_eq!(l.rounds(), 5);
        assert_eq!(l.queries(), 10);
    }

    #[test]
    fn phases_attribute_to_innermost_label() {
        let l = QueryLedger::new();
        {
            let _outer = l.phase("outer");
            l.record_batch(2, 2);
            {
                let _inner = l.phase("inner");
                l.record_batch(3, 3);
            }
            l.record_batch(1, 1);
        }
        l.record_batch(4, 4);
        let s = l.snapshot();
        assert_eq!(s.phases["outer"], PhaseStats { queries: 3, batches: 2 });
        assert_eq!(s.phases["inner"], PhaseStats { queries: 3, batches: 1 });
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["queries"], 10);
        assert_eq!(json["rounds"], 4);
        assert_eq!(json["raw_queries"], 10);
    }

    #[test]
    fn snapshot_delta() {
        let l = QueryLedger::new();
        l.record_batch(3, 3);
        let before = l.snapshot();
        l.record_batch(2, 2);
        l.record_batch(0, 4);
        let d = l.snapshot().since(&before);
        assert_eq!((d.queries, d.rounds, d.raw_queries), (2, 1, 6));
    }
}
