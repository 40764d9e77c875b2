//! C ABI for the spikecl toolkit.
//!
//! Conventions:
//! - Opaque handles are heap-allocated behind raw pointers with explicit
//!   `_free` functions; a handle must not be used after being freed.
//! - Fallible functions return [`SpikeclStatus`]; on error the message is
//!   stored thread-locally and retrieved with
//!   [`spikecl_last_error_message`].
//! - Returned strings are NUL-terminated, owned by the caller, and must be
//!   released with [`spikecl_string_free`].
//! - All pointer arguments must be valid and non-null unless documented
//!   otherwise; strings must be NUL-terminated UTF-8.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use spikecl::config::RunConfig;
use spikecl::data::{generate_synthetic, load_ucr_tsv, save_ucr_tsv, Dataset, SyntheticKind};
use spikecl::error::Error;
use spikecl::harness::{evaluate_model, run_experiment, train_full_model};
use spikecl::learning::{load_checkpoint, save_checkpoint, OptimizerConfig, SpikingClassifier};
use spikecl::verification::run_all_checks;

/// Status codes mirroring the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpikeclStatus {
    Ok = 0,
    /// Invalid arguments or configuration.
    Usage = 1,
    /// Data could not be read, parsed, or validated.
    DataError = 2,
    /// Numerical failure (non-finite state, failed check).
    NumericalError = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let cstring = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn status_of(err: &Error) -> SpikeclStatus {
    match err.exit_code() {
        1 => SpikeclStatus::Usage,
        2 => SpikeclStatus::DataError,
        _ => SpikeclStatus::NumericalError,
    }
}

fn fail(err: Error) -> SpikeclStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// An opaque dataset handle.
pub struct SpikeclDataset {
    inner: Dataset,
}

/// An opaque trained-model handle (model plus its optimizer settings).
pub struct SpikeclModel {
    model: SpikingClassifier,
    optimizer: OptimizerConfig,
}

unsafe fn cstr_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, SpikeclStatus> {
    if ptr.is_null() {
        set_error(format!("{name} must not be null"));
        return Err(SpikeclStatus::NullPointer);
    }
    match unsafe { CStr::from_ptr(ptr) }.to_str() {
        Ok(s) => Ok(s),
        Err(_) => {
            set_error(format!("{name} must be valid UTF-8"));
            Err(SpikeclStatus::Usage)
        }
    }
}

fn string_out(text: String) -> *mut c_char {
    CString::new(text.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Last error message of the current thread, or null if none. The caller
/// owns the returned string and frees it with `spikecl_string_free`.
#[no_mangle]
pub extern "C" fn spikecl_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|msg| msg.clone().into_raw())
            .unwrap_or(ptr::null_mut())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by a spikecl function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn spikecl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn spikecl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Generate a synthetic dataset. `kind` is "cbf" or "two-class-freq";
/// `n` is the per-class sample count.
///
/// # Safety
/// `kind` must be a valid NUL-terminated string and `out` a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn spikecl_dataset_generate(
    kind: *const c_char,
    n: usize,
    t_len: usize,
    noise: f64,
    seed: u64,
    out: *mut *mut SpikeclDataset,
) -> SpikeclStatus {
    if out.is_null() {
        set_error("out must not be null".into());
        return SpikeclStatus::NullPointer;
    }
    let kind = match unsafe { cstr_arg(kind, "kind") } {
        Ok(k) => k,
        Err(status) => return status,
    };
    let kind = match kind.to_ascii_lowercase().as_str() {
        "cbf" | "cbf-like" => SyntheticKind::cbf_like(noise),
        "two-class-freq" | "freq" => SyntheticKind::two_class_freq(noise),
        other => {
            set_error(format!("unknown synthetic kind `{other}`"));
            return SpikeclStatus::Usage;
        }
    };
    match generate_synthetic(kind, n, t_len, seed) {
        Ok(dataset) => {
            unsafe { *out = Box::into_raw(Box::new(SpikeclDataset { inner: dataset })) };
            SpikeclStatus::Ok
        }
        Err(err) => fail(err),
    }
}

/// Load a UCR-style TSV dataset (label first, tab-separated values).
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spikecl_dataset_load_ucr(
    path: *const c_char,
    out: *mut *mut SpikeclDataset,
) -> SpikeclStatus {
    if out.is_null() {
        set_error("out must not be null".into());
        return SpikeclStatus::NullPointer;
    }
    let path = match unsafe { cstr_arg(path, "path") } {
        Ok(p) => p,
        Err(status) => return status,
    };
    match load_ucr_tsv(Path::new(path)) {
        Ok(dataset) => {
            unsafe { *out = Box::into_raw(Box::new(SpikeclDataset { inner: dataset })) };
            SpikeclStatus::Ok
        }
        Err(err) => fail(err),
    }
}

/// Write a dataset in UCR-style TSV form.
///
/// # Safety
/// `dataset` must be a live handle; `path` a valid string.
#[no_mangle]
pub unsafe extern "C" fn spikecl_dataset_save_ucr(
    dataset: *const SpikeclDataset,
    path: *const c_char,
) -> SpikeclStatus {
    let Some(dataset) = (unsafe { dataset.as_ref() }) else {
        set_error("dataset must not be null".into());
        return SpikeclStatus::NullPointer;
    };
    let path = match unsafe { cstr_arg(path, "path") } {
        Ok(p) => p,
        Err(status) => return status,
    };
    match save_ucr_tsv(&dataset.inner, Path::new(path)) {
        Ok(()) => SpikeclStatus::Ok,
        Err(err) => fail(err),
    }
}

/// Number of samples; 0 for a null handle.
///
/// # Safety
/// `dataset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spikecl_dataset_len(dataset: *const SpikeclDataset) -> usize {
    unsafe { dataset.as_ref() }.map(|d| d.inner.len()).unwrap_or(0)
}

/// Number of classes; 0 for a null handle.
///
/// # Safety
/// `dataset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spikecl_dataset_n_classes(dataset: *const SpikeclDataset) -> usize {
    unsafe { dataset.as_ref() }.map(|d| d.inner.n_classes).unwrap_or(0)
}

/// Release a dataset handle. Null is ignored.
///
/// # Safety
/// `dataset` must not be used after this call.
#[no_mangle]
pub unsafe extern "C" fn spikecl_dataset_free(dataset: *mut SpikeclDataset) {
    if !dataset.is_null() {
        drop(unsafe { Box::from_raw(dataset) });
    }
}

fn parse_config(text: &str) -> Result<RunConfig, Error> {
    RunConfig::from_text(text, &[])
}

/// Train a model on the full dataset under the configuration given in the
/// flat `[section] key = value` text format; empty text uses the defaults.
///
/// # Safety
/// `config_text` must be a valid string (may be empty), `dataset` a live
/// handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spikecl_train(
    config_text: *const c_char,
    dataset: *const SpikeclDataset,
    out: *mut *mut SpikeclModel,
) -> SpikeclStatus {
    if out.is_null() {
        set_error("out must not be null".into());
        return SpikeclStatus::NullPointer;
    }
    let Some(dataset) = (unsafe { dataset.as_ref() }) else {
        set_error("dataset must not be null".into());
        return SpikeclStatus::NullPointer;
    };
    let text = match unsafe { cstr_arg(config_text, "config_text") } {
        Ok(t) => t,
        Err(status) => return status,
    };
    let config = match parse_config(text) {
        Ok(config) => config,
        Err(err) => return fail(err),
    };
    match train_full_model(&dataset.inner, &config) {
        Ok((model, _)) => {
            unsafe {
                *out = Box::into_raw(Box::new(SpikeclModel {
                    model,
                    optimizer: config.optimizer,
                }))
            };
            SpikeclStatus::Ok
        }
        Err(err) => fail(err),
    }
}

/// Run a full cross-validated experiment and return the summary report as
/// a JSON string (freed by the caller).
///
/// # Safety
/// As for [`spikecl_train`]; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spikecl_run_experiment_json(
    config_text: *const c_char,
    dataset: *const SpikeclDataset,
    out_json: *mut *mut c_char,
) -> SpikeclStatus {
    if out_json.is_null() {
        set_error("out_json must not be null".into());
        return SpikeclStatus::NullPointer;
    }
    let Some(dataset) = (unsafe { dataset.as_ref() }) else {
        set_error("dataset must not be null".into());
        return SpikeclStatus::NullPointer;
    };
    let text = match unsafe { cstr_arg(config_text, "config_text") } {
        Ok(t) => t,
        Err(status) => return status,
    };
    let config = match parse_config(text) {
        Ok(config) => config,
        Err(err) => return fail(err),
    };
    match run_experiment(&dataset.inner, &config) {
        Ok(report) => match serde_json::to_string(&report) {
            Ok(json) => {
                unsafe { *out_json = string_out(json) };
                SpikeclStatus::Ok
            }
            Err(err) => {
                set_error(format!("report serialization failed: {err}"));
                SpikeclStatus::NumericalError
            }
        },
        Err(err) => fail(err),
    }
}

/// Evaluate a trained model on a dataset; returns a JSON report with AUC,
/// per-sample losses, and firing statistics.
///
/// # Safety
/// `model` and `dataset` must be live handles; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn spikecl_model_evaluate_json(
    model: *const SpikeclModel,
    dataset: *const SpikeclDataset,
    out_json: *mut *mut c_char,
) -> SpikeclStatus {
    if out_json.is_null() {
        set_error("out_json must not be null".into());
        return SpikeclStatus::NullPointer;
    }
    let Some(model) = (unsafe { model.as_ref() }) else {
        set_error("model must not be null".into());
        return SpikeclStatus::NullPointer;
    };
    let Some(dataset) = (unsafe { dataset.as_ref() }) else {
        set_error("dataset must not be null".into());
        return SpikeclStatus::NullPointer;
    };
    match evaluate_model(&model.model, &dataset.inner, model.optimizer.surrogate_slope) {
        Ok((report, firing, auc)) => {
            let body = serde_json::json!({
                "auc": auc,
                "mean_loss": report.mean_loss(),
                "afp": firing.afp,
                "sparsity_ratio": firing.sparsity_ratio,
                "per_sample_loss": report.per_sample_loss,
                "predicted_class": report.predicted_class,
                "activity": report.activity,
            });
            unsafe { *out_json = string_out(body.to_string()) };
            SpikeclStatus::Ok
        }
        Err(err) => fail(err),
    }
}

/// Save a model checkpoint (bit-exact JSON round trip).
///
/// # Safety
/// `model` must be a live handle; `path` a valid string.
#[no_mangle]
pub unsafe extern "C" fn spikecl_model_save(
    model: *const SpikeclModel,
    path: *const c_char,
) -> SpikeclStatus {
    let Some(model) = (unsafe { model.as_ref() }) else {
        set_error("model must not be null".into());
        return SpikeclStatus::NullPointer;
    };
    let path = match unsafe { cstr_arg(path, "path") } {
        Ok(p) => p,
        Err(status) => return status,
    };
    match save_checkpoint(&model.model, &model.optimizer, Path::new(path)) {
        Ok(()) => SpikeclStatus::Ok,
        Err(err) => fail(err),
    }
}

/// Load a model checkpoint.
///
/// # Safety
/// `path` must be a valid string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spikecl_model_load(
    path: *const c_char,
    out: *mut *mut SpikeclModel,
) -> SpikeclStatus {
    if out.is_null() {
        set_error("out must not be null".into());
        return SpikeclStatus::NullPointer;
    }
    let path = match unsafe { cstr_arg(path, "path") } {
        Ok(p) => p,
        Err(status) => return status,
    };
    match load_checkpoint(Path::new(path)) {
        Ok(checkpoint) => {
            unsafe {
                *out = Box::into_raw(Box::new(SpikeclModel {
                    model: checkpoint.model,
                    optimizer: checkpoint.optimizer,
                }))
            };
            SpikeclStatus::Ok
        }
        Err(err) => fail(err),
    }
}

/// Release a model handle. Null is ignored.
///
/// # Safety
/// `model` must not be used after this call.
#[no_mangle]
pub unsafe extern "C" fn spikecl_model_free(model: *mut SpikeclModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Run the numerical verification suite with the given Monte-Carlo
/// instance count; returns Ok when every check passes.
#[no_mangle]
pub extern "C" fn spikecl_check_theorems(instances: usize) -> SpikeclStatus {
    match run_all_checks(instances.max(1)) {
        Ok(outcomes) => {
            let failures: Vec<&str> = outcomes
                .iter()
                .filter(|o| o.passed == Some(false))
                .map(|o| o.name.as_str())
                .collect();
            if failures.is_empty() {
                SpikeclStatus::Ok
            } else {
                set_error(format!("failed checks: {}", failures.join(", ")));
                SpikeclStatus::NumericalError
            }
        }
        Err(err) => fail(err),
    }
}
