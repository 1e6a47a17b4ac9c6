//! Synchronous publish/subscribe channel with priority-ordered delivery.

use std::any::Any;
use std::cell::{Cell, RefCell};
use std::collections::BTreeSet;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, Mutex, TryLockError};

use thiserror::Error;

/// Maximum nesting of `publish` calls made from inside handlers.
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubscriptionId(u64);

impl fmt::Display for SubscriptionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sub#{}", self.0)
    }
}

pub type Payload = Arc<dyn Any + Send + Sync>;

#[derive(Clone)]
pub struct Message {
    pub kind: String,
    pub payload: Payload,
    pub labels: BTreeSet<String>,
    pub origin: String,
}

impl Message {
    pub fn new<T: Any + Send + Sync>(kind: impl Into<String>, payload: T) -> Self {
        Self::shared(kind, Arc::new(payload))
    }

    pub fn shared(kind: impl Into<String>, payload: Payload) -> Self {
        Message { kind: kind.into(), payload, labels: BTreeSet::new(), origin: String::new() }
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.labels.insert(label.into());
        self
    }

    pub fn origin(mut self, origin: impl Into<String>) -> Self {
        self.origin = origin.into();
        self
    }

    pub fn payload<T: Any>(&self) -> Option<&T> {
        self.payload.downcast_ref()
    }
}

impl fmt::Debug for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Message")
            .field("kind", &self.kind)
            .field("labels", &self.labels)
            .field("origin", &self.origin)
            .finish_non_exhaustive()
    }
}

pub type HandlerResult = Result<(), String>;
type Handler = Arc<Mutex<Box<dyn FnMut(&Message, &MessageBus) -> HandlerResult + Send>>>;
pub type Predicate = Arc<dyn Fn(&Message) -> bool + Send + Sync>;

/// Optional delivery conditions. A message passes when it carries every
/// required label and the predicate, if any, accepts it.
#[derive(Clone, Default)]
pub struct Filter {
    pub labels: Option<BTreeSet<String>>,
    pub predicate: Option<Predicate>,
}

impl Filter {
    pub fn labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Filter { labels: Some(labels.into_iter().map(Into::into).collect()), predicate: None }
    }

    pub fn predicate(mut self, p: impl Fn(&Message) -> bool + Send + Sync + 'static) -> Self {
        self.predicate = Some(Arc::new(p));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    LabelMismatch,
    PredicateRejected,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeliveryReport {
    /// Subscriptions whose handler was invoked, in delivery order.
    pub delivered_to: Vec<SubscriptionId>,
    pub skipped: Vec<(SubscriptionId, SkipReason)>,
    pub failures: Vec<(SubscriptionId, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BusError {
    #[error("message kind must not be empty")]
    EmptyKind,
    #[error("publish nested deeper than {MAX_DEPTH}")]
    BusOverflow,
}

#[derive(Clone)]
struct Subscription {
    id: SubscriptionId,
    kind: String,
    priority: i32,
    filter: Filter,
    handler: Handler,
}

#[derive(Default)]
struct State {
    next_id: u64,
    subs: Vec<Subscription>,
}

/// Single-threaded bus. Handlers receive the bus and may publish further
/// messages, which are delivered depth-first before the outer publish
/// continues.
#[derive(Default)]
pub struct MessageBus {
    state: RefCell<State>,
    depth: Cell<usize>,
}

impl MessageBus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn subscribe<F>(&self, kind: &str, priority: i32, handler: F) -> Result<SubscriptionId, BusError>
    where
        F: FnMut(&Message, &MessageBus) -> HandlerResult + Send + 'static,
    {
        self.subscribe_filtered(kind, priority, Filter::default(), handler)
    }

    pub fn subscribe_filtered<F>(
        &self,
        kind: &str,
        priority: i32,
        filter: Filter,
        handler: F,
    ) -> Result<SubscriptionId, BusError>
    where
        F: FnMut(&Message, &MessageBus) -> HandlerResult + Send + 'static,
    {
        if kind.is_empty() {
            return Err(BusError::EmptyKind);
        }
        let mut st = self.state.borrow_mut();
        let id = SubscriptionId(st.next_id);
        st.next_id += 1;
        st.subs.push(Subscription {
            id,
            kind: kind.to_string(),
            priority,
            filter,
            handler: Arc::new(Mutex::new(Box::new(handler))),
        });
        Ok(id)
    }

    pub fn unsubscribe(&self, id: SubscriptionId) -> bool {
        let mut st = self.state.borrow_mut();
        let before = st.subs.len();
        st.subs.retain(|s| s.id != id);
        st.subs.len() != before
    }

    pub fn subscriber_count(&self, kind: &str) -> usize {
        self.state.borrow().subs.iter().filter(|s| s.kind == kind).count()
    }

    pub fn publish(&self, msg: Message) -> Result<DeliveryReport, BusError> {
        if msg.kind.is_empty() {
            return Err(BusError::EmptyKind);
        }
        if self.depth.get() >= MAX_DEPTH {
            return Err(BusError::BusOverflow);
        }
        let mut targets: Vec<Subscription> =
            self.state.borrow().subs.iter().filter(|s| s.kind == msg.kind).cloned().collect();
        // Registration order is id order; the stable sort keeps it for ties.
        targets.sort_by_key(|s| s.priority);

        self.depth.set(self.depth.get() + 1);
        let mut report = DeliveryReport::default();
        for sub in targets {
            if let Some(req) = &sub.filter.labels {
                if !req.is_subset(&msg.labels) {
                    report.skipped.push((sub.id, SkipReason::LabelMismatch));
                    continue;
                }
            }
            if let Some(p) = &sub.filter.predicate {
                if !p(&msg) {
                    report.skipped.push((sub.id, SkipReason::PredicateRejected));
                    continue;
                }
            }
            report.delivered_to.push(sub.id);
            if let Err(e) = self.invoke(&sub, &msg) {
                report.failures.push((sub.id, e));
            }
        }
        self.depth.set(self.depth.get() - 1);
        Ok(report)
    }

    fn invoke(&self, sub: &Subscription, msg: &Message) -> HandlerResult {
        let mut guard = match sub.handler.try_lock() {
            Ok(g) => g,
            Err(TryLockError::Poisoned(p)) => p.into_inner(),
            Err(TryLockError::WouldBlock) => return Err("handler is already running".into()),
        };
        match catch_unwind(AssertUnwindSafe(|| (guard)(msg, self))) {
            Ok(r) => r,
            Err(panic) => Err(panic_text(&*panic)),
        }
    }
}

fn panic_text(p: &(dyn Any + Send)) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        format!("handler panicked: {s}")
    } else if let Some(s) = p.downcast_ref::<String>() {
        format!("handler panicked: {s}")
    } else {
        "handler panicked".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log() -> Arc<Mutex<Vec<String>>> {
        Arc::new(Mutex::new(Vec::new()))
    }

    fn recorder(l: &Arc<Mutex<Vec<String>>>, tag: &str) -> impl FnMut(&Message, &MessageBus) -> HandlerResult + Send {
        let l = l.clone();
        let tag = tag.to_string();
        move |_, _| {
            l.lock().unwrap().push(tag.clone());
            Ok(())
        }
    }

    #[test]
    fn subscribe_then_publish_delivers() {
        let bus = MessageBus::new();
        let l = log();
        let id = bus.subscribe("stage1.finding", 10, recorder(&l, "h")).unwrap();
        let r = bus.publish(Message::new("stage1.finding", ())).unwrap();
        assert_eq!(r.delivered_to, vec![id]);
        assert_eq!(*l.lock().unwrap(), vec!["h"]);
    }

    #[test]
    fn lower_priority_first() {
        let bus = MessageBus::new();
        let l = log();
        let five = bus.subscribe("k", 5, recorder(&l, "5")).unwrap();
        let one = bus.subscribe("k", 1, recorder(&l, "1")).unwrap();
        assert_eq!(bus.publish(Message::new("k", ())).unwrap().delivered_to, vec![one, five]);
        assert_eq!(*l.lock().unwrap(), vec!["1", "5"]);
    }

    #[test]
    fn label_filter_skips() {
        let bus = MessageBus::new();
        let id = bus.subscribe_filtered("k", 0, Filter::labels(["kotlin"]), |_, _| Ok(())).unwrap();
        let r = bus.publish(Message::new("k", ()).label("java")).unwrap();
        assert!(r.delivered_to.is_empty());
        assert_eq!(r.skipped, vec![(id, SkipReason::LabelMismatch)]);
        let r = bus.publish(Message::new("k", ()).label("kotlin")).unwrap();
        assert_eq!(r.delivered_to, vec![id]);
    }

    #[test]
    fn predicate_skips() {
        let bus = MessageBus::new();
        let f = Filter::default().predicate(|m| m.payload::<i32>() == Some(&1));
        let id = bus.subscribe_filtered("k", 0, f, |_, _| Ok(())).unwrap();
        assert_eq!(bus.publish(Message::new("k", 2i32)).unwrap().skipped, vec![(id, SkipReason::PredicateRejected)]);
        assert_eq!(bus.publish(Message::new("k", 1i32)).unwrap().delivered_to, vec![id]);
    }

    #[test]
    fn no_subscribers_and_other_kinds() {
        let bus = MessageBus::new();
        assert_eq!(bus.publish(Message::new("a", ())).unwrap(), DeliveryReport::default());
        bus.subscribe("b", 0, |_, _| Ok(())).unwrap();
        assert_eq!(bus.publish(Message::new("a", ())).unwrap(), DeliveryReport::default());
    }

    #[test]
    fn nested_publish_is_depth_first() {
        let bus = MessageBus::new();
        let l = log();
        let la = l.clone();
        bus.subscribe("a", 0, move |_, bus| {
            la.lock().unwrap().push("a".into());
            bus.publish(Message::new("b", ())).map_err(|e| e.to_string())?;
            la.lock().unwrap().push("a-end".into());
            Ok(())
        })
        .unwrap();
        bus.subscribe("b", 0, recorder(&l, "b")).unwrap();
        bus.subscribe("a", 1, recorder(&l, "a2")).unwrap();
        bus.publish(Message::new("a", ())).unwrap();
        assert_eq!(*l.lock().unwrap(), vec!["a", "b", "a-end", "a2"]);
    }

    #[test]
    fn failures_do_not_stop_delivery() {
        let bus = MessageBus::new();
        let l = log();
        let bad = bus.subscribe("k", 0, |_, _| Err("boom".into())).unwrap();
        let panicky = bus.subscribe("k", 1, |_, _| panic!("kaboom")).unwrap();
        let good = bus.subscribe("k", 2, recorder(&l, "ok")).unwrap();
        let r = bus.publish(Message::new("k", ())).unwrap();
        assert_eq!(r.delivered_to, vec![bad, panicky, good]);
        assert_eq!(r.failures.len(), 2);
        assert_eq!(r.failures[0], (bad, "boom".to_string()));
        assert!(r.failures[1].1.contains("kaboom"));
        assert_eq!(*l.lock().unwrap(), vec!["ok"]);
    }

    #[test]
    fn unsubscribe_twice() {
        let bus = MessageBus::new();
        let id = bus.subscribe("k", 0, |_, _| Ok(())).unwrap();
        assert!(bus.unsubscribe(id));
        assert!(!bus.unsubscribe(id));
        assert!(bus.publish(Message::new("k", ())).unwrap().delivered_to.is_empty());
    }

    #[test]
    fn unsubscribe_during_dispatch_applies_next_time() {
        let bus = MessageBus::new();
        let l = log();
        let target = Arc::new(Mutex::new(None::<SubscriptionId>));
        let t = target.clone();
        bus.subscribe("k", 0, move |_, bus| {
            if let Some(id) = *t.lock().unwrap() {
                bus.unsubscribe(id);
            }
            Ok(())
        })
        .unwrap();
        let victim = bus.subscribe("k", 1, recorder(&l, "v")).unwrap();
        *target.lock().unwrap() = Some(victim);
        let r = bus.publish(Message::new("k", ())).unwrap();
        assert!(r.delivered_to.contains(&victim));
        let r = bus.publish(Message::new("k", ())).unwrap();
        assert!(!r.delivered_to.contains(&victim));
    }

    #[test]
    fn nesting_beyond_limit_overflows() {
        let bus = MessageBus::new();
        let errors = log();
        for level in 0..100usize {
            let e = errors.clone();
            bus.subscribe(&format!("d{level}"), 0, move |_, bus| {
                if let Err(err) = bus.publish(Message::new(format!("d{}", level + 1), ())) {
                    e.lock().unwrap().push(format!("{level}:{err}"));
                }
                Ok(())
            })
            .unwrap();
        }
        bus.publish(Message::new("d0", ())).unwrap();
        let errors = errors.lock().unwrap();
        assert_eq!(errors.len(), 1);
        assert!(errors[0].starts_with(&format!("{}:", MAX_DEPTH - 1)));
    }

    #[test]
    fn handler_publishing_its_own_kind_is_guarded() {
        let bus = MessageBus::new();
        bus.subscribe("r", 0, |_, bus| {
            let inner = bus.publish(Message::new("r", ())).map_err(|e| e.to_string())?;
            assert_eq!(inner.failures.len(), 1);
            Ok(())
        })
        .unwrap();
        assert!(bus.publish(Message::new("r", ())).unwrap().failures.is_empty());
    }
}
