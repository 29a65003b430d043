fn main() {
    // System LAPACK/BLAS (openblas-backed on Debian/Ubuntu via update-alternatives).
    println!("cargo:rustc-link-lib=dylib=lapack");
    println!("cargo:rustc-link-lib=dylib=blas");
}
