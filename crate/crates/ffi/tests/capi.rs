//! Exercises the C ABI the way a foreign caller would: through the raw
//! extern functions, opaque handles, status codes, and the thread-local
//! error message.

use std::ffi::{CStr, CString};
use std::ptr;

use spikecl_ffi::*;

fn last_error() -> String {
    let ptr = spikecl_last_error_message();
    assert!(!ptr.is_null(), "expected an error message");
    let message = unsafe { CStr::from_ptr(ptr) }.to_string_lossy().into_owned();
    unsafe { spikecl_string_free(ptr) };
    message
}

#[test]
fn dataset_lifecycle_and_errors() {
    let kind = CString::new("cbf").unwrap();
    let mut dataset: *mut SpikeclDataset = ptr::null_mut();
    let status =
        unsafe { spikecl_dataset_generate(kind.as_ptr(), 4, 32, 0.05, 7, &mut dataset) };
    assert_eq!(status, SpikeclStatus::Ok);
    assert_eq!(unsafe { spikecl_dataset_len(dataset) }, 12);
    assert_eq!(unsafe { spikecl_dataset_n_classes(dataset) }, 3);

    // Save, reload, compare counts.
    let dir = std::env::temp_dir().join(format!("spikecl_ffi_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let tsv = CString::new(dir.join("d.tsv").to_str().unwrap()).unwrap();
    assert_eq!(
        unsafe { spikecl_dataset_save_ucr(dataset, tsv.as_ptr()) },
        SpikeclStatus::Ok
    );
    let mut reloaded: *mut SpikeclDataset = ptr::null_mut();
    assert_eq!(
        unsafe { spikecl_dataset_load_ucr(tsv.as_ptr(), &mut reloaded) },
        SpikeclStatus::Ok
    );
    assert_eq!(unsafe { spikecl_dataset_len(reloaded) }, 12);
    unsafe {
        spikecl_dataset_free(reloaded);
        spikecl_dataset_free(dataset);
    }

    // Missing file: data error plus a message naming the path.
    let missing = CString::new("/nonexistent/spikecl.tsv").unwrap();
    let mut bad: *mut SpikeclDataset = ptr::null_mut();
    let status = unsafe { spikecl_dataset_load_ucr(missing.as_ptr(), &mut bad) };
    assert_eq!(status, SpikeclStatus::DataError);
    assert!(bad.is_null());
    assert!(last_error().contains("/nonexistent/spikecl.tsv"));

    // Unknown synthetic kind: usage error.
    let bogus = CString::new("bogus").unwrap();
    let status = unsafe { spikecl_dataset_generate(bogus.as_ptr(), 4, 32, 0.0, 7, &mut bad) };
    assert_eq!(status, SpikeclStatus::Usage);

    // Null pointers are rejected, not dereferenced.
    let status = unsafe { spikecl_dataset_generate(kind.as_ptr(), 4, 32, 0.0, 7, ptr::null_mut()) };
    assert_eq!(status, SpikeclStatus::NullPointer);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn train_evaluate_save_load_round_trip() {
    let kind = CString::new("cbf").unwrap();
    let mut dataset: *mut SpikeclDataset = ptr::null_mut();
    assert_eq!(
        unsafe { spikecl_dataset_generate(kind.as_ptr(), 6, 64, 0.05, 11, &mut dataset) },
        SpikeclStatus::Ok
    );

    let config = CString::new(
        "[optimizer]\nepochs = 2\nbatch = 8\n[run]\nfolds = 1\nseed = 3\n[encoder]\nm = 3\ncluster_size = 8\n[topology]\nhidden = 12\n",
    )
    .unwrap();
    let mut model: *mut SpikeclModel = ptr::null_mut();
    let status = unsafe { spikecl_train(config.as_ptr(), dataset, &mut model) };
    assert_eq!(status, SpikeclStatus::Ok, "{}", last_error());

    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(
        unsafe { spikecl_model_evaluate_json(model, dataset, &mut json) },
        SpikeclStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }.to_string_lossy().into_owned();
    unsafe { spikecl_string_free(json) };
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(parsed["auc"].is_number());
    assert_eq!(parsed["per_sample_loss"].as_array().unwrap().len(), 18);

    // Checkpoint round trip through the C surface.
    let dir = std::env::temp_dir().join(format!("spikecl_ffi_ckpt_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = CString::new(dir.join("model.json").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { spikecl_model_save(model, path.as_ptr()) }, SpikeclStatus::Ok);
    let mut loaded: *mut SpikeclModel = ptr::null_mut();
    assert_eq!(
        unsafe { spikecl_model_load(path.as_ptr(), &mut loaded) },
        SpikeclStatus::Ok
    );
    // Evaluating the reloaded model gives identical numbers.
    let mut json2: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(
        unsafe { spikecl_model_evaluate_json(loaded, dataset, &mut json2) },
        SpikeclStatus::Ok
    );
    let text2 = unsafe { CStr::from_ptr(json2) }.to_string_lossy().into_owned();
    unsafe { spikecl_string_free(json2) };
    assert_eq!(text, text2);

    unsafe {
        spikecl_model_free(loaded);
        spikecl_model_free(model);
        spikecl_dataset_free(dataset);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn experiment_json_reports() {
    let kind = CString::new("two-class-freq").unwrap();
    let mut dataset: *mut SpikeclDataset = ptr::null_mut();
    assert_eq!(
        unsafe { spikecl_dataset_generate(kind.as_ptr(), 6, 32, 0.1, 5, &mut dataset) },
        SpikeclStatus::Ok
    );
    let config = CString::new(
        "[optimizer]\nepochs = 1\nbatch = 8\n[run]\nfolds = 2\neval_every = 1\n[encoder]\nm = 2\ncluster_size = 6\n[topology]\nhidden = 8\n",
    )
    .unwrap();
    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { spikecl_run_experiment_json(config.as_ptr(), dataset, &mut json) };
    assert_eq!(status, SpikeclStatus::Ok, "{}", last_error());
    let text = unsafe { CStr::from_ptr(json) }.to_string_lossy().into_owned();
    unsafe { spikecl_string_free(json) };
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["runs"].as_array().unwrap().len(), 2);
    unsafe { spikecl_dataset_free(dataset) };
}

#[test]
fn verification_suite_via_c_api() {
    assert_eq!(spikecl_check_theorems(50), SpikeclStatus::Ok);
}

#[test]
fn generated_header_exists_with_expected_symbols() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/spikecl.h");
    let text = std::fs::read_to_string(header).expect("cbindgen header missing");
    for symbol in [
        "SpikeclStatus",
        "SpikeclDataset",
        "SpikeclModel",
        "spikecl_train",
        "spikecl_last_error_message",
        "spikecl_string_free",
        "SPIKECL_STATUS_NUMERICAL_ERROR",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}
