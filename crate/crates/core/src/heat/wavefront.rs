//! Actor-based wavefront solver. One actor per interior row; adjacent
//! actors share a boundary token message. Possession of both neighbor
//! tokens (plus an iteration budget) is the firing condition; firing sweeps
//! the actor's row, then returns the left token and forwards the right one,
//! which is exactly the dependency "(t, i-1) and (t-1, i+1) have completed".

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use crate::runtime::{ActorId, Engine, EngineStats, MessageId};

use super::{Field, SharedGrid};

/// Outcome of a wavefront run: row sweeps performed plus the engine's
/// diagnostics counters for the run.
#[derive(Clone, Copy, Debug)]
pub struct WavefrontReport {
    /// Number of row sweeps performed; `(H-2) * t_max` for a correct run.
    pub ops: u64,
    /// Engine counters: deliveries, resends (0 for a correct run), queue
    /// high-water mark.
    pub stats: EngineStats,
}

/// Identities the handlers need but which only exist after every actor and
/// message has been registered; filled exactly once before `run`.
struct Wiring {
    actors: Vec<ActorId>,
    tokens: Vec<MessageId>,
    start: MessageId,
}

/// Solves `t_max` time steps on `field` with an actor per interior row,
/// delivered by `workers` pool threads. The result is bit-identical to
/// [`super::seq_solve`] on the same input.
pub fn wavefront_solve(field: &mut Field, t_max: usize, workers: usize) -> WavefrontReport {
    solve(field, t_max, workers, None)
}

/// Like [`wavefront_solve`], additionally logging each row sweep as a
/// (time-step, row) pair in execution order. An op's dependencies always
/// appear earlier in the log; the test suite replays logs against
/// [`super::dep_ready`].
pub fn wavefront_solve_traced(
    field: &mut Field,
    t_max: usize,
    workers: usize,
) -> (WavefrontReport, Vec<(usize, usize)>) {
    let trace = Arc::new(Mutex::new(Vec::new()));
    let report = solve(field, t_max, workers, Some(trace.clone()));
    let log = std::mem::take(&mut *trace.lock().unwrap());
    (report, log)
}

/// Shared log of (time-step, row) sweeps, present only for traced runs.
type TraceLog = Arc<Mutex<Vec<(usize, usize)>>>;

fn solve(
    field: &mut Field,
    t_max: usize,
    workers: usize,
    trace: Option<TraceLog>,
) -> WavefrontReport {
    let n = field.h() - 2; // one actor per interior row
    let grid = Arc::new(SharedGrid::from_field(field));
    let ops = Arc::new(AtomicU64::new(0));
    let wiring: Arc<OnceLock<Wiring>> = Arc::new(OnceLock::new());

    let mut engine: Engine<()> = Engine::new(workers).expect("wavefront_solve: workers >= 1");
    let actors: Vec<ActorId> = (0..n)
        .map(|id| {
            let grid = Arc::clone(&grid);
            let ops = Arc::clone(&ops);
            let wiring = Arc::clone(&wiring);
            let trace = trace.clone();
            // Per-actor iteration counter; starts at 1 and is incremented
            // after each sweep, so the guard `ts <= t_max` admits exactly
            // `t_max` sweeps.
            let mut ts: usize = 1;
            engine.add_actor(move |eng, _m, me| {
                let w = wiring.get().expect("wiring is set before run");
                let left_ready = id == 0 || eng.access(w.tokens[id - 1], me);
                let right_ready = id == n - 1 || eng.access(w.tokens[id], me);
                if left_ready && right_ready && ts <= t_max {
                    if let Some(log) = &trace {
                        log.lock().unwrap().push((ts, id + 1));
                    }
                    // SAFETY: this actor holds both neighbor tokens, so the
                    // actors for rows id and id+2 cannot fire concurrently;
                    // no other thread touches rows id..=id+2. The delivery
                    // that handed over each token happens-after the
                    // neighbor's latest sweep.
                    unsafe { grid.stencil_op_row(id + 1) };
                    ops.fetch_add(1, Ordering::Relaxed);
                    ts += 1;
                    if id != 0 {
                        eng.send(w.tokens[id - 1], w.actors[id - 1]);
                    }
                    if id != n - 1 {
                        eng.send(w.tokens[id], w.actors[id + 1]);
                    }
                    if n == 1 && ts <= t_max {
                        // Degenerate single-row system: no tokens exist, so
                        // progress is driven by bouncing the start message.
                        eng.send(w.start, w.actors[0]);
                    }
                }
            })
        })
        .collect();

    // Token k sits between rows k+1 and k+2; it starts owned by actor k so
    // that the wavefront can begin at the first row unconditionally while
    // every other actor waits for its left neighbor.
    let tokens: Vec<MessageId> = (0..n.saturating_sub(1))
        .map(|k| engine.add_message_owned((), actors[k]))
        .collect();
    let start = engine.add_message(());
    let first_actor = actors[0];
    wiring
        .set(Wiring {
            actors,
            tokens,
            start,
        })
        .unwrap_or_else(|_| unreachable!("wiring set once"));

    engine.run(&[(start, first_actor)]);

    let stats = engine.stats();
    let w = wiring.get().expect("wiring was set");
    for (k, &token) in w.tokens.iter().enumerate() {
        let owner = engine.owner(token).expect("tokens always have an owner");
        assert!(
            owner.index() == k || owner.index() == k + 1,
            "token {k} must rest with one of its two actors, found {owner:?}"
        );
        assert!(!engine.in_flight(token), "no token in flight at quiescence");
    }

    drop(engine); // drops the handlers and with them their Arc clones
    Arc::try_unwrap(grid)
        .unwrap_or_else(|_| panic!("grid references released with the engine"))
        .into_field(field);
    WavefrontReport {
        ops: ops.load(Ordering::Relaxed),
        stats,
    }
}
