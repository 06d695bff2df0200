//! The fast kernel's scratch stays within a few state vectors per worker.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};

use chargemagic::harness::with_threads;
use chargemagic::magic::stabilizer_purity_fast;
use chargemagic::sampler::haar_state;

struct Tracking;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Tracking {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::SeqCst) + layout.size();
            PEAK.fetch_max(now, Ordering::SeqCst);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::SeqCst);
    }
}

#[global_allocator]
static GLOBAL: Tracking = Tracking;

#[test]
fn kernel_scratch_is_linear_in_the_state() {
    let l = 12;
    let state = haar_state(l, 5).unwrap();
    let budget = 3 * (1usize << l) * std::mem::size_of::<num_complex::Complex64>();
    let extra = with_threads(1, || {
        // warm the pool up so its own bookkeeping is not counted
        let _ = stabilizer_purity_fast(&haar_state(2, 0).unwrap(), 2.0);
        let base = CURRENT.load(Ordering::SeqCst);
        PEAK.store(base, Ordering::SeqCst);
        let xi = stabilizer_purity_fast(&state, 2.0).unwrap();
        assert!(xi > 0.0);
        PEAK.load(Ordering::SeqCst) - base
    })
    .unwrap();
    assert!(extra <= budget, "peak extra allocation {extra} bytes > {budget}");
}
