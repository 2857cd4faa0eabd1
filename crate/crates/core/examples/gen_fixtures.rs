//! Writes the fixture corpus to `fixtures/` (or the directory given as the
//! first argument).

use std::path::PathBuf;

use vachi::corpus::{a3, bump, fixtures};
use vachi::equivalence::va_to_chiral;
use vachi::format::{chiral_to_json, va_to_json};
use vachi::linear::Vector;

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    std::fs::create_dir_all(&dir).expect("fixture directory");
    let write = |name: &str, text: String| {
        std::fs::write(dir.join(format!("{name}.json")), text).expect("fixture file");
    };
    for (name, va) in fixtures() {
        write(&name, va_to_json(&va));
    }
    // 1_{-1} t = 2t: the D-derivative property still holds, skew-symmetry
    // and Jacobi do not
    write("a3_mutated", va_to_json(&bump(&a3(), (0, -1, 1), 1)));
    let chiral = va_to_chiral(&a3().tensor_with_ox().expect("A3 is over Q")).expect("A3 is a vertex algebra");
    write("a3_chiral", chiral_to_json(&chiral));
    let broken = chiral
        .with_correction((1, 0, -1, 1), &Vector::basis(3, 0))
        .expect("same shape");
    write("a3_chiral_mutated", chiral_to_json(&broken));
}
