//! C ABI for the mbhe library (opaque handles, error codes).
