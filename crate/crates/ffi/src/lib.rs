//! C ABI over `colored_cliques`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_parse`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a `CcStatus`; the message of the last failure on the calling
//! thread is available from `cc_last_error`.

use colored_cliques::analytic::{g_value, r_set, Parity, RMode};
use colored_cliques::counting::{count_valid_colorings, SmallGraph};
use colored_cliques::patterns::ForbiddenFamily;
use colored_cliques::qsolver::{brute_force_q, optimize_alpha, AlphaMode};
use colored_cliques::sweeps::compute_sk;
use colored_cliques::templates::{is_x_free, ColorTemplate};
use colored_cliques::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    BudgetExceeded = 4,
    Parse = 5,
    NotFound = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

/// Weight optimisation method for `cc_optimize_alpha`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CcAlphaMode {
    SupportEnumeration = 0,
    Replicator = 1,
}

/// Opaque forbidden family.
pub struct CcFamily(ForbiddenFamily);

/// Opaque color template.
pub struct CcTemplate(ColorTemplate);

/// Opaque small graph.
pub struct CcGraph(SmallGraph);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CcStatus {
    match e {
        Error::DimensionMismatch(_) => CcStatus::DimensionMismatch,
        Error::InvalidArgument(_) => CcStatus::InvalidArgument,
        Error::BudgetExceeded { .. } => CcStatus::BudgetExceeded,
        Error::Parse(_) => CcStatus::Parse,
        Error::NotFound { .. } => CcStatus::NotFound,
        _ => CcStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CcStatus, String)>) -> CcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CcStatus::Ok,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            CcStatus::Internal
        }
    }
}

fn lib(e: Error) -> (CcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (CcStatus, String) {
    (CcStatus::NullPointer, format!("{name} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (CcStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (CcStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, (CcStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, (CcStatus, String)> {
    p.as_mut().ok_or_else(|| null(name))
}

/// Copies `s` with a terminating NUL into `buf` of `len` bytes.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize) -> Result<(), (CcStatus, String)> {
    if buf.is_null() {
        return Err(null("buf"));
    }
    if s.len() + 1 > len {
        return Err((CcStatus::BufferTooSmall, format!("need {} bytes", s.len() + 1)));
    }
    std::ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Copies the last error message of this thread into `buf`; returns the
/// number of bytes needed including the terminating NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cc_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len() + 1
    })
}

/// Parses a family descriptor such as `dichromatic`, `improper:k=4` or
/// `mono:k=3+rainbow:k=3` over `s` colors.
///
/// # Safety
/// `desc` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_family_parse(desc: *const c_char, s: usize, out: *mut *mut CcFamily) -> CcStatus {
    guard(|| {
        let desc = str_arg(desc, "desc")?;
        let out = out_arg(out, "out")?;
        let fam = ForbiddenFamily::parse(desc, s).map_err(lib)?;
        *out = Box::into_raw(Box::new(CcFamily(fam)));
        Ok(())
    })
}

/// # Safety
/// `fam` must be null or a handle from `cc_family_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_family_free(fam: *mut CcFamily) {
    if !fam.is_null() {
        drop(Box::from_raw(fam));
    }
}

/// Parses a template in the `r=.. s=..` / `i j : c1,c2` text form.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_template_parse(text: *const c_char, out: *mut *mut CcTemplate) -> CcStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let out = out_arg(out, "out")?;
        let t = ColorTemplate::parse(text).map_err(lib)?;
        *out = Box::into_raw(Box::new(CcTemplate(t)));
        Ok(())
    })
}

/// The constant template `[s]` on `r` parts.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_template_full(r: usize, s: usize, out: *mut *mut CcTemplate) -> CcStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let t = ColorTemplate::full(r, s).map_err(lib)?;
        *out = Box::into_raw(Box::new(CcTemplate(t)));
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a live template handle.
#[no_mangle]
pub unsafe extern "C" fn cc_template_free(t: *mut CcTemplate) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of parts, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live template handle.
#[no_mangle]
pub unsafe extern "C" fn cc_template_parts(t: *const CcTemplate) -> usize {
    t.as_ref().map_or(0, |t| t.0.r())
}

/// Whether the template admits no member of the family.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_template_is_free(t: *const CcTemplate, fam: *const CcFamily, out: *mut bool) -> CcStatus {
    guard(|| {
        let t = ref_arg(t, "template")?;
        let fam = ref_arg(fam, "family")?;
        let out = out_arg(out, "out")?;
        if t.0.s() != fam.0.s() {
            return Err((CcStatus::DimensionMismatch, "template and family use different color counts".into()));
        }
        *out = is_x_free(&t.0, &fam.0);
        Ok(())
    })
}

/// Maximises `q(phi, .)`; writes `r` weights to `alpha` (capacity `len`) and the value to `q`.
///
/// # Safety
/// `alpha` must point to `len` writable doubles; `q` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_optimize_alpha(
    t: *const CcTemplate,
    mode: CcAlphaMode,
    alpha: *mut f64,
    len: usize,
    q: *mut f64,
) -> CcStatus {
    guard(|| {
        let t = ref_arg(t, "template")?;
        let q = out_arg(q, "q")?;
        if alpha.is_null() {
            return Err(null("alpha"));
        }
        if len < t.0.r() {
            return Err((CcStatus::BufferTooSmall, format!("need {} weights", t.0.r())));
        }
        let mode = match mode {
            CcAlphaMode::SupportEnumeration => AlphaMode::SupportEnumeration,
            CcAlphaMode::Replicator => AlphaMode::Replicator,
        };
        let res = optimize_alpha(&t.0, mode).map_err(lib)?;
        std::ptr::copy_nonoverlapping(res.alpha.as_slice().as_ptr(), alpha, t.0.r());
        *q = res.q;
        Ok(())
    })
}

/// Parses `K:n`, `turan:r,n` or `bipartite:a,b`.
///
/// # Safety
/// `desc` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_parse(desc: *const c_char, out: *mut *mut CcGraph) -> CcStatus {
    guard(|| {
        let desc = str_arg(desc, "desc")?;
        let out = out_arg(out, "out")?;
        let g = SmallGraph::parse(desc).map_err(lib)?;
        *out = Box::into_raw(Box::new(CcGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_free(g: *mut CcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// `F(G;X)` as a decimal string in `buf`.
///
/// # Safety
/// Handles must be live; `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cc_count_colorings(
    g: *const CcGraph,
    fam: *const CcFamily,
    budget: u64,
    buf: *mut c_char,
    len: usize,
) -> CcStatus {
    guard(|| {
        let g = ref_arg(g, "graph")?;
        let fam = ref_arg(fam, "family")?;
        let res = count_valid_colorings(&g.0, &fam.0, budget as u128).map_err(lib)?;
        write_str(&res.count.to_string(), buf, len)
    })
}

/// `g_s(r)`; 0 for `r <= 1`.
#[no_mangle]
pub extern "C" fn cc_g_value(s: u64, r: u64) -> f64 {
    g_value(s, r)
}

/// `R_2(s)` when `even`, else `R(s)`. Writes up to `cap` winners and their count.
///
/// # Safety
/// `winners` must point to `cap` writable integers; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_r_set(s: u64, even: bool, winners: *mut u64, cap: usize, count: *mut usize) -> CcStatus {
    guard(|| {
        let count = out_arg(count, "count")?;
        if s < 2 {
            return Err((CcStatus::InvalidArgument, "s must be at least 2".into()));
        }
        if winners.is_null() {
            return Err(null("winners"));
        }
        let res = r_set(s, if even { Parity::Even } else { Parity::All }, RMode::Candidates);
        *count = res.winners.len();
        if res.winners.len() > cap {
            return Err((CcStatus::BufferTooSmall, format!("need {} slots", res.winners.len())));
        }
        std::ptr::copy_nonoverlapping(res.winners.as_ptr(), winners, res.winners.len());
        Ok(())
    })
}

/// The improper-clique threshold `s(k)`, scanning `s <= s_cap`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_compute_sk(k: u64, s_cap: u64, exact: bool, out: *mut u64) -> CcStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = compute_sk(k, s_cap, exact).map_err(lib)?.s_k;
        Ok(())
    })
}

/// `Q_t(X)` over `r <= r_max` by exhaustive search; writes the value and the number of optimal templates.
///
/// # Safety
/// `fam` must be live; `q` and `optima` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_brute_force_q(
    fam: *const CcFamily,
    r_max: usize,
    t: usize,
    budget: u64,
    q: *mut f64,
    optima: *mut usize,
) -> CcStatus {
    guard(|| {
        let fam = ref_arg(fam, "family")?;
        let q = out_arg(q, "q")?;
        let optima = out_arg(optima, "optima")?;
        let res = brute_force_q(&fam.0, r_max, t, budget as u128).map_err(lib)?;
        *q = res.q;
        *optima = res.optima.len();
        Ok(())
    })
}
