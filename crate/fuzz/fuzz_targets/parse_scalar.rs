#![no_main]

use cohh::field::FieldSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let fields = [
        FieldSpec::Rationals,
        FieldSpec::prime(2).unwrap(),
        FieldSpec::prime(97).unwrap(),
    ];
    for field in fields {
        if let Ok(v) = field.parse_scalar(text) {
            // The canonical rendering must parse back to the same value.
            let printed = field.format_scalar(&v);
            let again = field.parse_scalar(&printed).expect("canonical form parses");
            assert_eq!(v, again);
        }
    }
});
