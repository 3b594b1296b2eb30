#![no_main]

use levyspec::yspec::YSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(y) = YSpec::parse(s) else { return };
    assert_eq!(YSpec::parse(&y.to_string()).as_ref(), Ok(&y));
    // schedules and rationals may be rejected, but never by panicking
    if let Ok(Some(stream)) = y.stream(2) {
        let _ = stream.prefix(256);
    }
});
