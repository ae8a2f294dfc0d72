//! Minimal shared-memory actor runtime.
//!
//! Messages are *owned variables*, not mailbox copies: `send` transfers
//! ownership of a message to a target actor and enqueues it on the engine's
//! FIFO ready-queue; a pool of workers delivers each message by invoking the
//! owning actor's receive handler. The engine terminates on quiescence: the
//! queue is empty and every worker has gone idle, detected by an
//! active-worker counter with a cascading wake chain.

use std::any::Any;
use std::cell::{Cell, UnsafeCell};
use std::collections::VecDeque;
use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Condvar, Mutex, PoisonError};
use std::thread;

/// Opaque handle to an actor registered with an [`Engine`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ActorId(pub(crate) usize);

impl ActorId {
    /// Registration index of this actor (0-based, in `add_actor` order).
    pub fn index(self) -> usize {
        self.0
    }
}

/// Opaque handle to a message registered with an [`Engine`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MessageId(pub(crate) usize);

impl MessageId {
    /// Registration index of this message (0-based, in `add_message` order).
    pub fn index(self) -> usize {
        self.0
    }
}

/// Errors from engine construction.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    /// The worker pool must contain at least one thread.
    #[error("engine requires at least one worker thread")]
    ZeroWorkers,
}

/// Post-run diagnostics counters. Cumulative across runs; see
/// [`Engine::reset_stats`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    /// Number of receive-handler invocations (deliveries), including ones
    /// whose handler body decided to do nothing.
    pub handler_invocations: u64,
    /// Number of `send` calls rejected because the message was already in
    /// flight. A correct protocol never resends; this makes violations
    /// observable without turning them into hard errors.
    pub resend_events: u64,
    /// High-water mark of the ready-queue length.
    pub max_queue_length: u64,
}

/// Message state packed into one atomic word.
///
/// Bit 63 is the in-flight flag; the low 63 bits hold `owner_index + 1`
/// (0 = no owner yet). Packing both fields lets the access predicate
/// (`owner == a && !in_flight`) be a single load-and-compare, and lets the
/// resend guard be a single compare-and-swap.
const IN_FLIGHT: u64 = 1 << 63;

fn pack(owner: usize, in_flight: bool) -> u64 {
    (owner as u64 + 1) | if in_flight { IN_FLIGHT } else { 0 }
}

fn unpack_owner(state: u64) -> Option<usize> {
    let low = state & !IN_FLIGHT;
    if low == 0 {
        None
    } else {
        Some((low - 1) as usize)
    }
}

struct MessageCell<P> {
    state: AtomicU64,
    /// Re-entrancy guard for `with_payload`: rejects overlapping borrows of
    /// one payload (e.g. nested `with_payload` on the same message).
    borrowed: AtomicBool,
    payload: UnsafeCell<P>,
}

type Handler<P> = Box<dyn FnMut(&Engine<P>, MessageId, ActorId) + Send + 'static>;

struct ActorCell<P> {
    /// The mutex doubles as the actor's exclusive-execution guard: a worker
    /// holds it for the whole handler invocation, so two handler executions
    /// for one actor can never overlap.
    handler: Mutex<Handler<P>>,
}

struct QueueState {
    ready: VecDeque<usize>,
    /// Count of workers not blocked in `wait`. Quiescence is detected when
    /// the last non-waiting worker finds the queue empty.
    active: usize,
    /// Set when a handler panicked; workers drain out instead of delivering.
    aborting: bool,
}

/// The delivery substrate: actor/message arenas, the FIFO ready-queue, and
/// the worker-pool synchronization state.
///
/// Typical lifecycle: register actors and messages, then call [`Engine::run`]
/// with bootstrap sends; `run` blocks until quiescence. The engine may be
/// run again afterwards with a fresh bootstrap.
pub struct Engine<P> {
    actors: Vec<ActorCell<P>>,
    messages: Vec<MessageCell<P>>,
    queue: Mutex<QueueState>,
    wake: Condvar,
    workers: usize,
    handler_invocations: AtomicU64,
    resend_events: AtomicU64,
    max_queue_length: AtomicU64,
    panic_slot: Mutex<Option<Box<dyn Any + Send + 'static>>>,
    poisoned: bool,
}

// SAFETY: the only field that is not `Sync` by construction is the
// `UnsafeCell<P>` payload storage. Payload access is mediated exclusively by
// `with_payload` (gated on the ownership protocol plus a thread-local
// current-actor token, see SOUNDNESS below) and `payload_mut` (which takes
// `&mut self`). Both guarantee that at most one thread can observe a given
// payload at a time and that handoffs are properly synchronized, so sharing
// `&Engine<P>` across threads is sound whenever `P` can be moved between
// threads.
unsafe impl<P: Send> Sync for Engine<P> {}

thread_local! {
    /// (engine address, actor index) of the handler currently executing on
    /// this thread, or `NO_CURRENT` outside any handler.
    static CURRENT: Cell<(usize, usize)> = const { Cell::new(NO_CURRENT) };
}

const NO_CURRENT: (usize, usize) = (0, usize::MAX);

/// Scope guard that marks the running handler's identity in `CURRENT` and
/// restores the previous value on drop (including on unwind).
struct CurrentGuard {
    prev: (usize, usize),
}

impl CurrentGuard {
    fn enter(engine_addr: usize, actor: usize) -> Self {
        let prev = CURRENT.replace((engine_addr, actor));
        CurrentGuard { prev }
    }
}

impl Drop for CurrentGuard {
    fn drop(&mut self) {
        CURRENT.set(self.prev);
    }
}

fn lock<T>(m: &Mutex<T>) -> std::sync::MutexGuard<'_, T> {
    // The runtime never holds its own locks across user code in a way that
    // can poison them meaningfully; recover instead of cascading panics.
    m.lock().unwrap_or_else(PoisonError::into_inner)
}

impl<P: Send> Engine<P> {
    /// Creates an engine with a pool of `workers` delivery threads
    /// (started lazily by [`Engine::run`]).
    pub fn new(workers: usize) -> Result<Self, EngineError> {
        if workers == 0 {
            return Err(EngineError::ZeroWorkers);
        }
        Ok(Engine {
            actors: Vec::new(),
            messages: Vec::new(),
            queue: Mutex::new(QueueState {
                ready: VecDeque::new(),
                active: workers,
                aborting: false,
            }),
            wake: Condvar::new(),
            workers,
            handler_invocations: AtomicU64::new(0),
            resend_events: AtomicU64::new(0),
            max_queue_length: AtomicU64::new(0),
            panic_slot: Mutex::new(None),
            poisoned: false,
        })
    }

    /// Size of the worker pool.
    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Registers an actor with the given receive handler.
    ///
    /// The handler runs under the actor's exclusive-execution guard: for a
    /// given actor, two invocations never overlap in time. Handlers for
    /// distinct actors run concurrently.
    pub fn add_actor(
        &mut self,
        handler: impl FnMut(&Engine<P>, MessageId, ActorId) + Send + 'static,
    ) -> ActorId {
        self.actors.push(ActorCell {
            handler: Mutex::new(Box::new(handler)),
        });
        ActorId(self.actors.len() - 1)
    }

    /// Registers a message with no owner. It becomes owned on first `send`.
    pub fn add_message(&mut self, payload: P) -> MessageId {
        self.push_message(payload, 0)
    }

    /// Registers a message already owned by `owner`, not in flight, as if it
    /// had been sent to and delivered at `owner` before the system started.
    pub fn add_message_owned(&mut self, payload: P, owner: ActorId) -> MessageId {
        assert!(
            owner.0 < self.actors.len(),
            "add_message_owned: unknown actor {owner:?}"
        );
        self.push_message(payload, pack(owner.0, false))
    }

    fn push_message(&mut self, payload: P, state: u64) -> MessageId {
        self.messages.push(MessageCell {
            state: AtomicU64::new(state),
            borrowed: AtomicBool::new(false),
            payload: UnsafeCell::new(payload),
        });
        MessageId(self.messages.len() - 1)
    }

    /// Number of registered messages.
    pub fn message_count(&self) -> usize {
        self.messages.len()
    }

    /// Number of registered actors.
    pub fn actor_count(&self) -> usize {
        self.actors.len()
    }

    fn message(&self, m: MessageId) -> &MessageCell<P> {
        self.messages
            .get(m.0)
            .unwrap_or_else(|| panic!("unknown MessageId {m:?}"))
    }

    /// Transfers ownership of `m` to `target` and enqueues it for delivery.
    ///
    /// If `m` is already in flight the call is a silent no-op (the resend
    /// guard); the rejection is counted in
    /// [`EngineStats::resend_events`]. Legal callers are the bootstrap phase
    /// (before `run` starts workers) and the receive handler of the actor
    /// that currently owns `m` — a contract, enforced only by the guard.
    pub fn send(&self, m: MessageId, target: ActorId) {
        assert!(
            target.0 < self.actors.len(),
            "send: unknown actor {target:?}"
        );
        let cell = self.message(m);
        let mut cur = cell.state.load(Ordering::Acquire);
        loop {
            if cur & IN_FLIGHT != 0 {
                // Resend: an emergency situation in the protocol, absorbed
                // silently but counted for diagnosis.
                self.resend_events.fetch_add(1, Ordering::Relaxed);
                return;
            }
            match cell.state.compare_exchange_weak(
                cur,
                pack(target.0, true),
                Ordering::AcqRel,
                Ordering::Acquire,
            ) {
                Ok(_) => break,
                Err(actual) => cur = actual,
            }
        }
        let mut q = lock(&self.queue);
        q.ready.push_back(m.0);
        let len = q.ready.len() as u64;
        drop(q);
        self.max_queue_length.fetch_max(len, Ordering::Relaxed);
        self.wake.notify_one();
    }

    /// The access predicate: true iff `a` owns `m` and `m` is not in flight.
    /// This is the sole legal gate for touching a message's payload from
    /// handler code. Pure; no state change.
    pub fn access(&self, m: MessageId, a: ActorId) -> bool {
        self.message(m).state.load(Ordering::Acquire) == pack(a.0, false)
    }

    /// Current owner of `m`, if any. Diagnostic; meaningful to race-free
    /// observers (the owning handler, or any thread while the engine is not
    /// running).
    pub fn owner(&self, m: MessageId) -> Option<ActorId> {
        unpack_owner(self.message(m).state.load(Ordering::Acquire)).map(ActorId)
    }

    /// Whether `m` is currently in flight (sent but not yet delivered).
    pub fn in_flight(&self, m: MessageId) -> bool {
        self.message(m).state.load(Ordering::Acquire) & IN_FLIGHT != 0
    }

    /// Grants the calling handler mutable access to `m`'s payload.
    ///
    /// # Panics
    ///
    /// Panics with an access-violation message unless called from inside a
    /// receive handler of this engine whose actor satisfies
    /// [`Engine::access`] for `m`, or if `m`'s payload is already borrowed
    /// by an enclosing `with_payload` call.
    pub fn with_payload<R>(&self, m: MessageId, f: impl FnOnce(&mut P) -> R) -> R {
        let cell = self.message(m);
        let (engine_addr, actor) = CURRENT.get();
        let in_this_engine =
            (engine_addr, actor) != NO_CURRENT && engine_addr == self as *const Self as usize;
        assert!(
            in_this_engine && self.access(m, ActorId(actor)),
            "payload access violation: message {m:?} is not accessible to the current context"
        );
        let was = cell.borrowed.swap(true, Ordering::Acquire);
        assert!(
            !was,
            "payload access violation: message {m:?} payload is already borrowed"
        );
        struct Unborrow<'a>(&'a AtomicBool);
        impl Drop for Unborrow<'_> {
            fn drop(&mut self) {
                self.0.store(false, Ordering::Release);
            }
        }
        let _unborrow = Unborrow(&cell.borrowed);
        // SOUNDNESS: `CURRENT` says this thread is executing actor `actor`'s
        // handler for this engine; the per-actor handler mutex means at most
        // one such thread exists. `access` says `actor` owns `m` and `m` is
        // not in flight, so no other actor can pass this gate, no worker is
        // about to deliver `m`, and `run`'s `&mut self` means no
        // `payload_mut` exists. The `borrowed` flag rejects overlapping
        // borrows from this same handler. Hence this is the only live
        // reference to the payload. Visibility of earlier writes is given by
        // the queue-mutex happens-before chain on delivery.
        let payload = unsafe { &mut *cell.payload.get() };
        f(payload)
    }

    /// Mutable payload access while the engine is not running. Exclusivity
    /// is guaranteed by `&mut self`; the ownership protocol only governs the
    /// concurrent phase inside [`Engine::run`]. Intended for staging inputs
    /// and reading results between runs.
    pub fn payload_mut(&mut self, m: MessageId) -> &mut P {
        assert!(m.0 < self.messages.len(), "unknown MessageId {m:?}");
        self.messages[m.0].payload.get_mut()
    }

    /// Performs the bootstrap sends, starts the worker pool, and blocks
    /// until quiescence (empty queue, all workers idle).
    ///
    /// Messages staged with [`Engine::send`] before this call are delivered
    /// first, then the bootstrap pairs in order. If a handler panics, the
    /// run aborts: remaining deliveries are dropped, workers drain out, and
    /// the panic is re-raised here; the engine is then poisoned and cannot
    /// be run again.
    pub fn run(&mut self, bootstrap: &[(MessageId, ActorId)]) {
        assert!(
            !self.poisoned,
            "engine poisoned by an earlier handler panic; build a fresh engine"
        );
        {
            let mut q = lock(&self.queue);
            q.active = self.workers;
            q.aborting = false;
        }
        for &(m, a) in bootstrap {
            self.send(m, a);
        }
        let this: &Engine<P> = self;
        thread::scope(|scope| {
            for _ in 0..this.workers {
                scope.spawn(move || this.worker_loop());
            }
        });
        if let Some(payload) = lock(&self.panic_slot).take() {
            self.poisoned = true;
            panic::resume_unwind(payload);
        }
        debug_assert!(lock(&self.queue).ready.is_empty());
        debug_assert_eq!(lock(&self.queue).active, 0);
    }

    /// Worker-thread body: pop-deliver loop with quiescence cascade.
    fn worker_loop(&self) {
        loop {
            let msg_index = {
                let mut q = lock(&self.queue);
                loop {
                    if q.aborting {
                        q.active -= 1;
                        return;
                    }
                    if let Some(index) = q.ready.pop_front() {
                        break index;
                    }
                    q.active -= 1;
                    if q.active == 0 {
                        // Quiescence: wake one waiter so it can observe
                        // `active == 0` and exit, cascading the shutdown
                        // through the whole pool.
                        self.wake.notify_one();
                        return;
                    }
                    q = self.wake.wait(q).unwrap_or_else(PoisonError::into_inner);
                    q.active += 1;
                }
            };
            self.deliver(msg_index);
        }
    }

    /// Delivers one message: resolve the owner, take its exclusive-execution
    /// guard, clear the in-flight flag, and invoke the handler.
    fn deliver(&self, msg_index: usize) {
        let cell = &self.messages[msg_index];
        let state = cell.state.load(Ordering::Acquire);
        debug_assert!(state & IN_FLIGHT != 0, "queued message must be in flight");
        let owner = unpack_owner(state).expect("in-flight message must have an owner");
        let actor = &self.actors[owner];

        let mut handler = lock(&actor.handler);
        cell.state.store(pack(owner, false), Ordering::Release);
        self.handler_invocations.fetch_add(1, Ordering::Relaxed);
        let _current = CurrentGuard::enter(self as *const Self as usize, owner);
        let result = panic::catch_unwind(AssertUnwindSafe(|| {
            (*handler)(self, MessageId(msg_index), ActorId(owner))
        }));
        drop(_current);
        drop(handler);

        if let Err(payload) = result {
            let mut slot = lock(&self.panic_slot);
            if slot.is_none() {
                *slot = Some(payload);
            }
            drop(slot);
            let mut q = lock(&self.queue);
            q.aborting = true;
            q.ready.clear();
            drop(q);
            self.wake.notify_all();
        }
    }

    /// Snapshot of the diagnostics counters.
    pub fn stats(&self) -> EngineStats {
        EngineStats {
            handler_invocations: self.handler_invocations.load(Ordering::Relaxed),
            resend_events: self.resend_events.load(Ordering::Relaxed),
            max_queue_length: self.max_queue_length.load(Ordering::Relaxed),
        }
    }

    /// Zeroes the diagnostics counters (they are cumulative across runs).
    pub fn reset_stats(&mut self) {
        self.handler_invocations.store(0, Ordering::Relaxed);
        self.resend_events.store(0, Ordering::Relaxed);
        self.max_queue_length.store(0, Ordering::Relaxed);
    }
}
