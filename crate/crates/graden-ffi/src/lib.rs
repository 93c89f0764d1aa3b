//! C ABI for the graden entropy toolkit.
//!
//! Conventions: images travel as opaque `GradenImage` handles created and
//! freed through this interface; every fallible call returns a
//! [`GradenStatus`] and writes its result through an out pointer, which is
//! touched only on `GRADEN_STATUS_OK`. Strings returned by this library are
//! static and must not be freed.

use std::ffi::{c_char, CStr};

use graden::baselines::{distren2d, peren2d, sampen2d, DistrEn2dParams, SampEn2dParams};
use graden::graden::{graden_with_histogram, Thresholds, PATTERN_COUNT};
use graden::{generators, transforms, Error, GrayImage};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradenStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A parameter lies outside its documented range.
    InvalidArgument = 2,
    /// Input data contains NaN or infinity.
    NonFinite = 3,
    /// The image or series is too small for the requested operation.
    TooSmall = 4,
    /// Sample entropy is undefined: no window matches at one of the scales.
    Undefined = 5,
    /// Any other failure.
    InternalError = 6,
}

fn status_of(error: &Error) -> GradenStatus {
    match error {
        Error::ParamRange { .. } => GradenStatus::InvalidArgument,
        Error::NonFinite => GradenStatus::NonFinite,
        Error::ImageTooSmall { .. } | Error::SeriesTooShort { .. } => GradenStatus::TooSmall,
        Error::UndefinedEntropy { .. } => GradenStatus::Undefined,
        Error::DataLength { .. } => GradenStatus::InvalidArgument,
        Error::InsufficientData { .. } => GradenStatus::TooSmall,
        _ => GradenStatus::InternalError,
    }
}

/// Opaque grayscale image handle.
pub struct GradenImage {
    inner: GrayImage,
}

/// Builds an image handle from `height * width` row-major doubles.
///
/// On success writes a newly allocated handle to `out`; release it with
/// `graden_image_free`.
///
/// # Safety
/// `data` must point to `height * width` readable doubles and `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graden_image_create(
    data: *const f64,
    height: usize,
    width: usize,
    out: *mut *mut GradenImage,
) -> GradenStatus {
    if data.is_null() || out.is_null() {
        return GradenStatus::NullPointer;
    }
    let len = match height.checked_mul(width) {
        Some(len) if len > 0 => len,
        _ => return GradenStatus::InvalidArgument,
    };
    let slice = std::slice::from_raw_parts(data, len);
    match GrayImage::from_vec(height, width, slice.to_vec()) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(GradenImage { inner }));
            GradenStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Releases an image handle. Null is a no-op.
///
/// # Safety
/// `image` must be a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn graden_image_free(image: *mut GradenImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// Height in pixels, or 0 for a null handle.
///
/// # Safety
/// `image` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn graden_image_height(image: *const GradenImage) -> usize {
    image.as_ref().map_or(0, |i| i.inner.height())
}

/// Width in pixels, or 0 for a null handle.
///
/// # Safety
/// `image` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn graden_image_width(image: *const GradenImage) -> usize {
    image.as_ref().map_or(0, |i| i.inner.width())
}

unsafe fn eval(
    image: *const GradenImage,
    out: *mut f64,
    f: impl FnOnce(&GrayImage) -> Result<f64, Error>,
) -> GradenStatus {
    let Some(image) = image.as_ref() else {
        return GradenStatus::NullPointer;
    };
    if out.is_null() {
        return GradenStatus::NullPointer;
    }
    match f(&image.inner) {
        Ok(value) => {
            *out = value;
            GradenStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Gradient entropy with quantile-level thresholds (`a` in (0.5, 0.75),
/// `b` in (0.75, 1)); defaults in the reference CLI are a = 0.55, b = 0.8.
///
/// # Safety
/// `image` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graden_compute(
    image: *const GradenImage,
    a: f64,
    b: f64,
    out: *mut f64,
) -> GradenStatus {
    eval(image, out, |img| {
        graden::graden(img, &Thresholds::from_quantiles(a, b)?)
    })
}

/// Gradient entropy with raw cut points `0 <= delta < gamma`.
///
/// # Safety
/// `image` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graden_compute_raw(
    image: *const GradenImage,
    delta: f64,
    gamma: f64,
    out: *mut f64,
) -> GradenStatus {
    eval(image, out, |img| {
        graden::graden(img, &Thresholds::from_raw(delta, gamma)?)
    })
}

/// Gradient entropy together with its 125-bin pattern histogram.
///
/// `counts` receives the bin counts in the fixed pattern-index order
/// `(s_h + 2) * 25 + (s_v + 2) * 5 + (s_d + 2)`.
///
/// # Safety
/// `image` must be a live handle, `counts` must point to 125 writable
/// `uint64_t`, and `entropy` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graden_histogram(
    image: *const GradenImage,
    a: f64,
    b: f64,
    counts: *mut u64,
    entropy: *mut f64,
) -> GradenStatus {
    let Some(image) = image.as_ref() else {
        return GradenStatus::NullPointer;
    };
    if counts.is_null() || entropy.is_null() {
        return GradenStatus::NullPointer;
    }
    let thresholds = match Thresholds::from_quantiles(a, b) {
        Ok(t) => t,
        Err(e) => return status_of(&e),
    };
    match graden_with_histogram(&image.inner, &thresholds) {
        Ok((value, histogram)) => {
            let slice = std::slice::from_raw_parts_mut(counts, PATTERN_COUNT);
            slice.copy_from_slice(histogram.counts());
            *entropy = value;
            GradenStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Two-dimensional sample entropy with window side `m` and tolerance `r`
/// (fraction of the image standard deviation).
///
/// # Safety
/// `image` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graden_sampen2d(
    image: *const GradenImage,
    m: usize,
    r: f64,
    out: *mut f64,
) -> GradenStatus {
    eval(image, out, |img| sampen2d(img, &SampEn2dParams { m, r }))
}

/// Two-dimensional distribution entropy with window side `m` and `bins`
/// histogram bins.
///
/// # Safety
/// `image` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graden_distren2d(
    image: *const GradenImage,
    m: usize,
    bins: usize,
    out: *mut f64,
) -> GradenStatus {
    eval(image, out, |img| distren2d(img, &DistrEn2dParams { m, bins }))
}

/// Two-dimensional permutation entropy over 2x2 blocks.
///
/// # Safety
/// `image` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graden_peren2d(
    image: *const GradenImage,
    out: *mut f64,
) -> GradenStatus {
    eval(image, out, |img| peren2d(img))
}

/// Pairwise-Euclidean distance matrix of the delay-embedded series
/// (embedding dimension `embed`, delay 1), returned as a new image handle.
///
/// # Safety
/// `series` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn graden_distance_matrix(
    series: *const f64,
    len: usize,
    embed: usize,
    out: *mut *mut GradenImage,
) -> GradenStatus {
    if series.is_null() || out.is_null() {
        return GradenStatus::NullPointer;
    }
    let slice = std::slice::from_raw_parts(series, len);
    match transforms::distance_matrix(slice, embed) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(GradenImage { inner }));
            GradenStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Seeded colored-noise image with spectral exponent `beta`
/// (0 white, 1 pink, 2 red, -1 blue).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graden_noise_image(
    height: usize,
    width: usize,
    beta: f64,
    seed: u64,
    out: *mut *mut GradenImage,
) -> GradenStatus {
    if out.is_null() {
        return GradenStatus::NullPointer;
    }
    match generators::noise_image(height, width, beta, seed) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(GradenImage { inner }));
            GradenStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Seeded mixed-process image: periodic sine pixels replaced by uniform
/// noise with probability `p`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graden_mix2d(
    height: usize,
    width: usize,
    p: f64,
    seed: u64,
    out: *mut *mut GradenImage,
) -> GradenStatus {
    if out.is_null() {
        return GradenStatus::NullPointer;
    }
    match generators::mix2d(height, width, p, seed) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(GradenImage { inner }));
            GradenStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Logistic-map series `x_{k+1} = a x_k (1 - x_k)`: discards `burn_in`
/// iterations, then writes `n` values to `out`.
///
/// # Safety
/// `out` must point to `n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn graden_logistic_series(
    a: f64,
    x0: f64,
    n: usize,
    burn_in: usize,
    out: *mut f64,
) -> GradenStatus {
    if out.is_null() {
        return GradenStatus::NullPointer;
    }
    match generators::logistic_series(a, x0, n, burn_in) {
        Ok(values) => {
            std::slice::from_raw_parts_mut(out, n).copy_from_slice(&values);
            GradenStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn graden_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => unreachable!(),
    };
    VERSION.as_ptr()
}

/// Human-readable description of a status code (static string).
#[no_mangle]
pub extern "C" fn graden_status_message(status: GradenStatus) -> *const c_char {
    let msg: &CStr = match status {
        GradenStatus::Ok => c"ok",
        GradenStatus::NullPointer => c"null pointer argument",
        GradenStatus::InvalidArgument => c"parameter outside its documented range",
        GradenStatus::NonFinite => c"input contains a non-finite value",
        GradenStatus::TooSmall => c"input too small for the requested operation",
        GradenStatus::Undefined => c"sample entropy undefined: no window matches",
        GradenStatus::InternalError => c"internal error",
    };
    msg.as_ptr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    unsafe fn image_from(data: &[f64], h: usize, w: usize) -> *mut GradenImage {
        let mut handle = ptr::null_mut();
        let status = graden_image_create(data.as_ptr(), h, w, &mut handle);
        assert_eq!(status, GradenStatus::Ok);
        handle
    }

    #[test]
    fn create_compute_free_roundtrip() {
        unsafe {
            let data = vec![7.0; 16];
            let img = image_from(&data, 4, 4);
            assert_eq!(graden_image_height(img), 4);
            assert_eq!(graden_image_width(img), 4);
            let mut value = f64::NAN;
            assert_eq!(graden_compute(img, 0.55, 0.8, &mut value), GradenStatus::Ok);
            assert_eq!(value, 0.0);
            graden_image_free(img);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut value = 0.0;
            assert_eq!(
                graden_compute(ptr::null(), 0.55, 0.8, &mut value),
                GradenStatus::NullPointer
            );
            let data = vec![1.0, 2.0, 3.0, 4.0];
            let img = image_from(&data, 2, 2);
            assert_eq!(
                graden_compute(img, 0.55, 0.8, ptr::null_mut()),
                GradenStatus::NullPointer
            );
            let mut out = ptr::null_mut();
            assert_eq!(
                graden_image_create(ptr::null(), 2, 2, &mut out),
                GradenStatus::NullPointer
            );
            graden_image_free(img);
            graden_image_free(ptr::null_mut());
        }
    }

    #[test]
    fn matches_direct_library_calls() {
        unsafe {
            let reference = generators::noise_image(24, 24, 0.0, 9).unwrap();
            let img = image_from(reference.data(), 24, 24);

            let mut via_ffi = 0.0;
            assert_eq!(graden_compute(img, 0.55, 0.8, &mut via_ffi), GradenStatus::Ok);
            let direct = graden::graden(&reference, &Thresholds::default()).unwrap();
            assert_eq!(via_ffi, direct);

            assert_eq!(graden_peren2d(img, &mut via_ffi), GradenStatus::Ok);
            assert_eq!(via_ffi, peren2d(&reference).unwrap());

            assert_eq!(graden_sampen2d(img, 1, 0.2, &mut via_ffi), GradenStatus::Ok);
            assert_eq!(
                via_ffi,
                sampen2d(&reference, &SampEn2dParams { m: 1, r: 0.2 }).unwrap()
            );

            assert_eq!(graden_distren2d(img, 2, 64, &mut via_ffi), GradenStatus::Ok);
            assert_eq!(
                via_ffi,
                distren2d(&reference, &DistrEn2dParams { m: 2, bins: 64 }).unwrap()
            );

            graden_image_free(img);
        }
    }

    #[test]
    fn invalid_quantiles_report_invalid_argument() {
        unsafe {
            let data = vec![1.0, 2.0, 3.0, 4.0];
            let img = image_from(&data, 2, 2);
            let mut value = 0.0;
            assert_eq!(
                graden_compute(img, 0.8, 0.9, &mut value),
                GradenStatus::InvalidArgument
            );
            assert_eq!(
                graden_compute_raw(img, 0.5, 0.1, &mut value),
                GradenStatus::InvalidArgument
            );
            graden_image_free(img);
        }
    }

    #[test]
    fn undefined_sample_entropy_status() {
        unsafe {
            // 3x3 with m = 2: a single window position, no pairs
            let data: Vec<f64> = (0..9).map(f64::from).collect();
            let img = image_from(&data, 3, 3);
            let mut value = 0.0;
            assert_eq!(
                graden_sampen2d(img, 2, 0.2, &mut value),
                GradenStatus::Undefined
            );
            graden_image_free(img);
        }
    }

    #[test]
    fn non_finite_data_rejected_at_creation() {
        unsafe {
            let data = vec![1.0, f64::NAN, 3.0, 4.0];
            let mut out = ptr::null_mut();
            assert_eq!(
                graden_image_create(data.as_ptr(), 2, 2, &mut out),
                GradenStatus::NonFinite
            );
        }
    }

    #[test]
    fn distance_matrix_and_generators_round_trip() {
        unsafe {
            let series = generators::logistic_series(3.9, 0.3, 60, 0).unwrap();
            let mut img = ptr::null_mut();
            assert_eq!(
                graden_distance_matrix(series.as_ptr(), series.len(), 3, &mut img),
                GradenStatus::Ok
            );
            assert_eq!(graden_image_height(img), 58);
            let mut value = 0.0;
            assert_eq!(graden_compute(img, 0.55, 0.8, &mut value), GradenStatus::Ok);
            let direct = graden::graden(
                &transforms::distance_matrix(&series, 3).unwrap(),
                &Thresholds::default(),
            )
            .unwrap();
            assert_eq!(value, direct);
            graden_image_free(img);

            let mut noise = ptr::null_mut();
            assert_eq!(
                graden_noise_image(10, 12, 1.0, 5, &mut noise),
                GradenStatus::Ok
            );
            assert_eq!(graden_image_width(noise), 12);
            graden_image_free(noise);

            let mut mix = ptr::null_mut();
            assert_eq!(graden_mix2d(8, 8, 0.5, 5, &mut mix), GradenStatus::Ok);
            graden_image_free(mix);

            let mut series_out = vec![0.0; 5];
            assert_eq!(
                graden_logistic_series(2.0, 0.3, 5, 1000, series_out.as_mut_ptr()),
                GradenStatus::Ok
            );
            assert!((series_out[0] - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn histogram_counts_conserve_blocks() {
        unsafe {
            let reference = generators::noise_image(16, 16, 0.0, 3).unwrap();
            let img = image_from(reference.data(), 16, 16);
            let mut counts = vec![0u64; PATTERN_COUNT];
            let mut entropy = 0.0;
            assert_eq!(
                graden_histogram(img, 0.55, 0.8, counts.as_mut_ptr(), &mut entropy),
                GradenStatus::Ok
            );
            assert_eq!(counts.iter().sum::<u64>(), 15 * 15);
            assert!((0.0..=1.0).contains(&entropy));
            graden_image_free(img);
        }
    }

    #[test]
    fn static_strings_exposed() {
        unsafe {
            let version = CStr::from_ptr(graden_version());
            assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
            let msg = CStr::from_ptr(graden_status_message(GradenStatus::Undefined));
            assert!(msg.to_str().unwrap().contains("undefined"));
        }
    }

    #[test]
    fn header_is_generated_with_the_full_surface() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("graden.h");
        let text = std::fs::read_to_string(header).expect("header generated by build script");
        for symbol in [
            "GradenStatus",
            "GradenImage",
            "graden_image_create",
            "graden_compute",
            "graden_compute_raw",
            "graden_histogram",
            "graden_sampen2d",
            "graden_distren2d",
            "graden_peren2d",
            "graden_distance_matrix",
            "graden_noise_image",
            "graden_mix2d",
            "graden_logistic_series",
            "graden_version",
            "graden_status_message",
        ] {
            assert!(text.contains(symbol), "header missing {symbol}");
        }
    }
}
