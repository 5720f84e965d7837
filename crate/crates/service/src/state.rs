use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

use lru::LruCache;
use parking_lot::Mutex;
use skinforge_core::{AdjustRegisters, Frame, SkinModelParams};

use crate::registers::RegisterUpdate;

pub const DEFAULT_MAX_IMAGES: usize = 64;
pub const DEFAULT_MAX_UPLOAD_BYTES: usize = 32 * 1024 * 1024;

/// What a request works from: one register pair and the model, read once
/// at request start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub regs: AdjustRegisters,
    pub model: SkinModelParams,
}

/// Uploaded frames plus the single global register pair.
///
/// Both registers live in one atomic word, so a reader sees either the
/// pair before a write or the pair after it, never one of each.
pub struct SessionState {
    images: Mutex<LruCache<String, Arc<Frame>>>,
    regs: AtomicU32,
    model: SkinModelParams,
}

impl SessionState {
    pub fn new(model: SkinModelParams, max_images: usize) -> Self {
        let cap = NonZeroUsize::new(max_images).unwrap_or(NonZeroUsize::MIN);
        SessionState {
            images: Mutex::new(LruCache::new(cap)),
            regs: AtomicU32::new(AdjustRegisters::ZERO.pack()),
            model,
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            regs: self.registers(),
            model: self.model,
        }
    }

    pub fn registers(&self) -> AdjustRegisters {
        AdjustRegisters::unpack(self.regs.load(Ordering::Acquire))
    }

    /// Applies `update` in one atomic step and returns the new pair.
    pub fn update_registers(&self, update: RegisterUpdate) -> AdjustRegisters {
        let prev = self
            .regs
            .fetch_update(Ordering::AcqRel, Ordering::Acquire, |w| {
                Some(update.apply(AdjustRegisters::unpack(w)).pack())
            })
            .expect("closure always returns Some");
        update.apply(AdjustRegisters::unpack(prev))
    }

    /// Stores a frame under a fresh id, evicting the least recently used
    /// one when full.
    pub fn insert(&self, frame: Frame) -> String {
        let id = uuid::Uuid::new_v4().simple().to_string();
        if let Some((old, _)) = self.images.lock().push(id.clone(), Arc::new(frame)) {
            log::debug!("evicted image {old}");
        }
        id
    }

    pub fn image(&self, id: &str) -> Option<Arc<Frame>> {
        self.images.lock().get(id).cloned()
    }

    pub fn image_count(&self) -> usize {
        self.images.lock().len()
    }
}
