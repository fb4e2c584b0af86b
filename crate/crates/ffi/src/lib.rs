//! C ABI for `monoid-ca`.
//!
//! Every function returns an [`McaStatus`]; results come back through out
//! pointers. Objects are opaque handles released with the matching `_free`
//! function, and strings returned by the library are released with
//! [`mca_string_free`]. After a non-`MCA_STATUS_OK` return,
//! [`mca_last_error`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use monoid_ca::analysis::{self, SweepOptions};
use monoid_ca::monoid::Element;
use monoid_ca::shift::DEFAULT_CONFIG_CAP;
use monoid_ca::{CellularAutomaton, Configuration, Error, FiniteMonoid, MonoidHandle};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    CapExceeded = 5,
    NotInjective = 6,
    Mismatch = 7,
    Unsupported = 8,
    Panic = 9,
}

/// A monoid: finite table or built-in infinite monoid.
pub struct McaMonoid(MonoidHandle);

/// A cellular automaton over some monoid.
pub struct McaCa(CellularAutomaton);

/// A full configuration over a finite monoid.
pub struct McaConfig(Configuration);

/// Injectivity and surjectivity of an automaton over a finite monoid.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct McaCaStatus {
    pub injective: bool,
    pub surjective: bool,
    pub bijective: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> McaStatus {
    match err {
        Error::Parse { .. } => McaStatus::Parse,
        Error::CapExceeded { .. } => McaStatus::CapExceeded,
        Error::NotInjective => McaStatus::NotInjective,
        Error::AlphabetMismatch { .. } | Error::MonoidMismatch(_) | Error::ForeignElement(_) => McaStatus::Mismatch,
        Error::Unsupported(_) => McaStatus::Unsupported,
        _ => McaStatus::InvalidArgument,
    }
}

struct Fail(McaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn guard(f: impl FnOnce() -> Res<()>) -> McaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            McaStatus::Ok
        }
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            McaStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref().ok_or_else(|| Fail(McaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Res<&'a mut T> {
    p.as_mut().ok_or_else(|| Fail(McaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(Fail(McaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(McaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

fn finite(m: &MonoidHandle) -> Res<&FiniteMonoid> {
    m.as_finite()
        .ok_or_else(|| Fail(McaStatus::Unsupported, format!("{m} is not a finite monoid")))
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn mca_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn mca_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Looks up a built-in monoid such as `bicyclic`, `cyclic:4` or `map:2`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out_monoid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_monoid_builtin(name: *const c_char, out_monoid: *mut *mut McaMonoid) -> McaStatus {
    guard(|| {
        let name = text(name, "name")?;
        let slot = out(out_monoid, "out_monoid")?;
        *slot = boxed(McaMonoid(MonoidHandle::builtin(name)?));
        Ok(())
    })
}

/// Parses a finite monoid in the `monoid v1` text format.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out_monoid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_monoid_parse(src: *const c_char, out_monoid: *mut *mut McaMonoid) -> McaStatus {
    guard(|| {
        let src = text(src, "text")?;
        let slot = out(out_monoid, "out_monoid")?;
        *slot = boxed(McaMonoid(FiniteMonoid::from_text(src)?.into()));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mca_monoid_free(m: *mut McaMonoid) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of elements; `MCA_STATUS_UNSUPPORTED` for infinite monoids.
///
/// # Safety
/// `m` must be a live handle and `out_size` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_monoid_size(m: *const McaMonoid, out_size: *mut usize) -> McaStatus {
    guard(|| {
        let m = deref(m, "monoid")?;
        *out(out_size, "out_size")? = finite(&m.0)?.size();
        Ok(())
    })
}

/// Product `a * b` of two elements of a finite monoid.
///
/// # Safety
/// `m` must be a live handle and `out_product` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_monoid_multiply(
    m: *const McaMonoid,
    a: usize,
    b: usize,
    out_product: *mut usize,
) -> McaStatus {
    guard(|| {
        let m = deref(m, "monoid")?;
        *out(out_product, "out_product")? = finite(&m.0)?.multiply(a, b)?;
        Ok(())
    })
}

/// Parses an automaton in the `ca v1` text format over `m`.
///
/// # Safety
/// `m` must be a live handle, `src` a NUL-terminated string and `out_ca` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_ca_parse(m: *const McaMonoid, src: *const c_char, out_ca: *mut *mut McaCa) -> McaStatus {
    guard(|| {
        let m = deref(m, "monoid")?;
        let src = text(src, "text")?;
        let slot = out(out_ca, "out_ca")?;
        *slot = boxed(McaCa(CellularAutomaton::from_text(m.0.clone(), src)?));
        Ok(())
    })
}

/// Automaton from a memory of finite-monoid indices (any order, no
/// duplicates) and a rule table of `alphabet^memory_len` entries indexed with
/// the first memory element most significant.
///
/// # Safety
/// `memory` and `rule` must point to `memory_len` and `rule_len` readable
/// elements respectively.
#[no_mangle]
pub unsafe extern "C" fn mca_ca_new(
    m: *const McaMonoid,
    alphabet: u32,
    memory: *const usize,
    memory_len: usize,
    rule: *const u32,
    rule_len: usize,
    out_ca: *mut *mut McaCa,
) -> McaStatus {
    guard(|| {
        let m = deref(m, "monoid")?;
        finite(&m.0)?;
        let memory = slice(memory, memory_len, "memory")?;
        let rule = slice(rule, rule_len, "rule")?;
        let slot = out(out_ca, "out_ca")?;
        let elems: Vec<Element> = memory.iter().map(|&i| Element::Index(i)).collect();
        let width = elems.len();
        let expected = u32::try_from(width).ok().and_then(|w| (alphabet as u128).checked_pow(w));
        if expected != Some(rule_len as u128) {
            return Err(Fail(
                McaStatus::InvalidArgument,
                format!("rule table needs {alphabet}^{width} entries, got {rule_len}"),
            ));
        }
        let ca = CellularAutomaton::from_fn(m.0.clone(), alphabet, elems, |t| {
            rule[t.iter().fold(0usize, |acc, &s| acc * alphabet as usize + s as usize)]
        })?;
        *slot = boxed(McaCa(ca));
        Ok(())
    })
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Res<&'a [T]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail(McaStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// # Safety
/// `ca` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mca_ca_free(ca: *mut McaCa) {
    if !ca.is_null() {
        drop(Box::from_raw(ca));
    }
}

/// Serializes `ca` in the `ca v1` text format. Free the result with
/// [`mca_string_free`].
///
/// # Safety
/// `ca` must be a live handle and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_ca_to_text(ca: *const McaCa, out_text: *mut *mut c_char) -> McaStatus {
    guard(|| {
        let ca = deref(ca, "ca")?;
        *out(out_text, "out_text")? = c_string(ca.0.to_text());
        Ok(())
    })
}

/// `first ∘ second`: applies `second`, then `first`.
///
/// # Safety
/// Both automata must be live handles and `out_ca` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_ca_compose(first: *const McaCa, second: *const McaCa, out_ca: *mut *mut McaCa) -> McaStatus {
    guard(|| {
        let a = deref(first, "first")?;
        let b = deref(second, "second")?;
        let slot = out(out_ca, "out_ca")?;
        *slot = boxed(McaCa(a.0.compose(&b.0)?));
        Ok(())
    })
}

/// The same automaton re-expressed on its minimal memory set.
///
/// # Safety
/// `ca` must be a live handle and `out_ca` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_ca_minimize(ca: *const McaCa, out_ca: *mut *mut McaCa) -> McaStatus {
    guard(|| {
        let ca = deref(ca, "ca")?;
        let slot = out(out_ca, "out_ca")?;
        *slot = boxed(McaCa(ca.0.minimal_memory()?));
        Ok(())
    })
}

/// Injectivity and surjectivity by scanning every configuration, refusing
/// more than `config_cap` of them (0 selects the default cap).
///
/// # Safety
/// `ca` must be a live handle and `out_status` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_ca_status(ca: *const McaCa, config_cap: u64, out_status: *mut McaCaStatus) -> McaStatus {
    guard(|| {
        let ca = deref(ca, "ca")?;
        let slot = out(out_status, "out_status")?;
        let s = analysis::ca_status(&ca.0, cap_or_default(config_cap))?;
        *slot = McaCaStatus {
            injective: s.injective,
            surjective: s.surjective,
            bijective: s.bijective,
        };
        Ok(())
    })
}

fn cap_or_default(cap: u64) -> u64 {
    if cap == 0 {
        DEFAULT_CONFIG_CAP
    } else {
        cap
    }
}

/// Configuration on the `len` elements of a finite monoid, `symbols[i]`
/// being the value at element `i`.
///
/// # Safety
/// `symbols` must point to `len` readable values and `out_config` be valid.
#[no_mangle]
pub unsafe extern "C" fn mca_config_new(
    alphabet: u32,
    symbols: *const u32,
    len: usize,
    out_config: *mut *mut McaConfig,
) -> McaStatus {
    guard(|| {
        let symbols = slice(symbols, len, "symbols")?;
        let slot = out(out_config, "out_config")?;
        *slot = boxed(McaConfig(Configuration::new(alphabet, symbols.to_vec())?));
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mca_config_free(cfg: *mut McaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Number of cells in the configuration.
///
/// # Safety
/// `cfg` must be a live handle and `out_len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_config_len(cfg: *const McaConfig, out_len: *mut usize) -> McaStatus {
    guard(|| {
        *out(out_len, "out_len")? = deref(cfg, "config")?.0.len();
        Ok(())
    })
}

/// Copies the symbols into `buf`, which must hold at least the
/// configuration's length.
///
/// # Safety
/// `cfg` must be a live handle and `buf` must point to `buf_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn mca_config_symbols(cfg: *const McaConfig, buf: *mut u32, buf_len: usize) -> McaStatus {
    guard(|| {
        let cfg = deref(cfg, "config")?;
        let symbols = cfg.0.symbols();
        if buf_len < symbols.len() {
            return Err(Fail(
                McaStatus::InvalidArgument,
                format!("buffer holds {buf_len} values, need {}", symbols.len()),
            ));
        }
        if !symbols.is_empty() {
            if buf.is_null() {
                return Err(Fail(McaStatus::NullPointer, "buf is null".into()));
            }
            std::slice::from_raw_parts_mut(buf, symbols.len()).copy_from_slice(symbols);
        }
        Ok(())
    })
}

/// `τ(x)` for a configuration over a finite monoid.
///
/// # Safety
/// `ca` and `cfg` must be live handles and `out_config` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mca_ca_apply(ca: *const McaCa, cfg: *const McaConfig, out_config: *mut *mut McaConfig) -> McaStatus {
    guard(|| {
        let ca = deref(ca, "ca")?;
        let cfg = deref(cfg, "config")?;
        let slot = out(out_config, "out_config")?;
        *slot = boxed(McaConfig(ca.0.apply(&cfg.0)?));
        Ok(())
    })
}

/// Checks every rule table over `memory` (all of `M` when `memory` is null)
/// for injective but non-surjective automata. Writes the `report v1` text to
/// `out_report` and the number of violations to `out_violations`. Zero caps
/// and thread counts select the defaults.
///
/// # Safety
/// `m` must be a live handle; `memory` must be null or point to `memory_len`
/// values; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mca_sweep_surjunctive(
    m: *const McaMonoid,
    alphabet: u32,
    memory: *const usize,
    memory_len: usize,
    threads: usize,
    rule_cap: u64,
    out_report: *mut *mut c_char,
    out_violations: *mut u64,
) -> McaStatus {
    guard(|| {
        let m = deref(m, "monoid")?;
        let fm = finite(&m.0)?;
        let memory: Vec<usize> = if memory.is_null() {
            (0..fm.size()).collect()
        } else {
            slice(memory, memory_len, "memory")?.to_vec()
        };
        let report_slot = out(out_report, "out_report")?;
        let count_slot = out(out_violations, "out_violations")?;
        let mut options = SweepOptions {
            threads: (threads > 0).then_some(threads),
            ..SweepOptions::default()
        };
        if rule_cap > 0 {
            options.rule_cap = rule_cap;
        }
        let sweep = analysis::surjunctivity_sweep(fm, alphabet, &memory, &options)?;
        *count_slot = sweep.violations.len() as u64;
        *report_slot = c_string(sweep.to_report().to_text());
        Ok(())
    })
}

/// Runs the bicyclic left-inverse and image-constraint demonstration at the
/// given window depth and writes its `report v1` text. `out_holds` receives
/// whether every certificate checked out.
///
/// # Safety
/// The out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mca_demo_bicyclic(
    alphabet: u32,
    depth: u64,
    out_report: *mut *mut c_char,
    out_holds: *mut bool,
) -> McaStatus {
    guard(|| {
        let report_slot = out(out_report, "out_report")?;
        let holds_slot = out(out_holds, "out_holds")?;
        let demo = analysis::bicyclic_nonsurjectivity_demo(alphabet, depth, DEFAULT_CONFIG_CAP)?;
        *holds_slot = demo.holds();
        *report_slot = c_string(demo.to_report().to_text());
        Ok(())
    })
}
