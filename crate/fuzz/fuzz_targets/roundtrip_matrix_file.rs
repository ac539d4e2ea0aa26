#![no_main]

use libfuzzer_sys::fuzz_target;
use polmat_cli::{parse_matrix_file, serialize_matrix};

// Anything the parser accepts must serialize back to a file that parses to
// the identical matrix and shift.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((matrix, shift)) = parse_matrix_file(text) {
        let canonical = serialize_matrix(&matrix, shift.as_ref());
        let (again, shift_again) =
            parse_matrix_file(&canonical).expect("serializer output must re-parse");
        assert_eq!(again, matrix, "round trip changed the matrix");
        assert_eq!(shift_again, shift, "round trip changed the shift");
    }
});
