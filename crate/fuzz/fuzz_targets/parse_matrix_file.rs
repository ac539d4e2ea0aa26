#![no_main]

use libfuzzer_sys::fuzz_target;

// The parser must never panic, whatever bytes come in; errors are fine.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = polmat_cli::parse_matrix_file(text);
});
