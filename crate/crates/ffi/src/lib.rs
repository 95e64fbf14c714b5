//! C ABI over the rule learner.
//!
//! Every fallible call returns a [`LordStatus`]. On failure the message is
//! available from [`lord_last_error`] on the same thread until the next call.
//! Models are opaque handles released with [`lord_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lord::dataset::{load_table, Cell, ColumnKind, LoadOptions, RawTable};
use lord::learner::{train, LearnerConfig, Variant};
use lord::persistence::{load_model, save_model};
use lord::{Error, Model};

/// Result of an API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LordStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Usage = 3,
    Config = 4,
    Parse = 5,
    Data = 6,
    ModelFormat = 7,
    Version = 8,
    Integrity = 9,
    Io = 10,
    Internal = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

/// Learning variant codes accepted by [`lord_train_csv`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LordVariant {
    Lord = 0,
    LordStar = 1,
    Overlord = 2,
}

/// Opaque trained model.
pub struct LordModel {
    inner: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LordStatus {
    match e {
        Error::Usage(_) => LordStatus::Usage,
        Error::Config(_) => LordStatus::Config,
        Error::Parse { .. } | Error::Csv(_) => LordStatus::Parse,
        Error::Data(_) => LordStatus::Data,
        Error::ModelFormat { .. } => LordStatus::ModelFormat,
        Error::Version(_) => LordStatus::Version,
        Error::Integrity(_) => LordStatus::Integrity,
        Error::Io(_) => LordStatus::Io,
        Error::Internal(_) => LordStatus::Internal,
    }
}

struct Failure(LordStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Run `f`, record any failure, and turn panics into [`LordStatus::Panic`].
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> LordStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LordStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside the library".into());
            LordStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(LordStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(LordStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

unsafe fn model_arg<'a>(p: *const LordModel) -> Result<&'a LordModel, Failure> {
    p.as_ref().ok_or_else(|| Failure(LordStatus::NullArgument, "model is null".into()))
}

fn variant_of(code: u32) -> Result<Variant, Failure> {
    match code {
        c if c == LordVariant::Lord as u32 => Ok(Variant::Lord),
        c if c == LordVariant::LordStar as u32 => Ok(Variant::LordStar),
        c if c == LordVariant::Overlord as u32 => Ok(Variant::Overlord),
        c => Err(Failure(LordStatus::Config, format!("unknown variant code {c}"))),
    }
}

fn open(path: &str) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure(LordStatus::Io, format!("cannot open {path}: {e}")))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn lord_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn lord_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Train on a comma-separated file with a header row.
///
/// `class_column` may be null to use the last column. `variant` is a
/// [`LordVariant`] code. `threads` of 0 means one thread. On success `*out`
/// receives a new model.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lord_train_csv(
    path: *const c_char,
    class_column: *const c_char,
    m: f64,
    variant: u32,
    threads: u32,
    out: *mut *mut LordModel,
) -> LordStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(LordStatus::NullArgument, "out is null".into()));
        }
        let path = str_arg(path, "path")?;
        let opts = LoadOptions {
            class_column: opt_str_arg(class_column, "class_column")?.map(str::to_string),
            ..LoadOptions::default()
        };
        let table = load_table(open(path)?, &opts)?;
        let cfg = LearnerConfig {
            m,
            variant: variant_of(variant)?,
            max_rule_length: None,
            worker_count: threads.max(1) as usize,
        };
        let model = train(&table, &cfg)?;
        *out = Box::into_raw(Box::new(LordModel { inner: model }));
        Ok(())
    })
}

/// Load a model file.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lord_model_load(path: *const c_char, out: *mut *mut LordModel) -> LordStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(LordStatus::NullArgument, "out is null".into()));
        }
        let model = load_model(open(str_arg(path, "path")?)?)?;
        *out = Box::into_raw(Box::new(LordModel { inner: model }));
        Ok(())
    })
}

/// Write a model file.
///
/// # Safety
/// `model` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn lord_model_save(model: *const LordModel, path: *const c_char) -> LordStatus {
    guard(|| {
        let model = model_arg(model)?;
        let path = str_arg(path, "path")?;
        let file = File::create(path)
            .map_err(|e| Failure(LordStatus::Io, format!("cannot create {path}: {e}")))?;
        save_model(&model.inner, BufWriter::new(file))?;
        Ok(())
    })
}

/// Number of rules used for classification, default rule included.
///
/// # Safety
/// `model` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lord_model_rule_count(model: *const LordModel, out: *mut usize) -> LordStatus {
    guard(|| {
        let model = model_arg(model)?;
        if out.is_null() {
            return Err(Failure(LordStatus::NullArgument, "out is null".into()));
        }
        *out = model.inner.rule_stats().0;
        Ok(())
    })
}

/// Classify one row given as parallel arrays of column names and values.
/// A null value marks a missing cell; unknown columns are ignored.
///
/// The label is written NUL-terminated into `buf`. `*needed` receives the
/// required size including the terminator; when `buf_len` is smaller the
/// call returns [`LordStatus::BufferTooSmall`] and writes nothing.
///
/// # Safety
/// `names` and `values` must point to `n` entries; `buf` must hold `buf_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn lord_predict_row(
    model: *const LordModel,
    names: *const *const c_char,
    values: *const *const c_char,
    n: usize,
    buf: *mut c_char,
    buf_len: usize,
    needed: *mut usize,
) -> LordStatus {
    guard(|| {
        let model = model_arg(model)?;
        if n > 0 && (names.is_null() || values.is_null()) {
            return Err(Failure(LordStatus::NullArgument, "names or values is null".into()));
        }
        let mut column_names = Vec::with_capacity(n);
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            column_names.push(str_arg(*names.add(i), "column name")?.to_string());
            row.push(match opt_str_arg(*values.add(i), "value")? {
                Some(v) => Cell::Text(v.to_string()),
                None => Cell::Missing,
            });
        }
        let table = RawTable {
            column_kinds: vec![ColumnKind::Categorical; n],
            column_names,
            rows: vec![row],
        };
        let rules = model.inner.predict_table(&table)?;
        let label = model.inner.class_label(rules[0]).as_bytes();
        if !needed.is_null() {
            *needed = label.len() + 1;
        }
        if buf.is_null() || buf_len < label.len() + 1 {
            return Err(Failure(LordStatus::BufferTooSmall, "label buffer too small".into()));
        }
        ptr::copy_nonoverlapping(label.as_ptr().cast(), buf, label.len());
        *buf.add(label.len()) = 0;
        Ok(())
    })
}

/// Release a model. Null is ignored.
///
/// # Safety
/// `model` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lord_model_free(model: *mut LordModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}
