#[no_mangle]
pub extern "C" fn hisrd_abi_version() -> u32 { 1 }
