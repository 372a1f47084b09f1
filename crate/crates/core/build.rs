fn main() {
    // LAPACK routines (dpotrf/dpotrs) back the dense SPD solves in the SDP engine.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
