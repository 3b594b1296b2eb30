#![no_main]

use levyspec::symbolic::StreamJson;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(j) = StreamJson::from_json_str(s) else { return };
    if j.prefix_hex.len() > 1 << 16 {
        return;
    }
    if let Ok(stream) = j.to_stream() {
        let n = j.prefix_hex.len();
        let again = StreamJson::from_stream(&stream, n);
        assert_eq!(again.to_stream().map(|t| t.prefix(n)), Ok(stream.prefix(n)));
    }
});
