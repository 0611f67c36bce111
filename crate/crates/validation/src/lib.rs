//! Reference formulas written from first principles, kept apart from the
//! library under test so acceptance checks never compare it with itself.

/// Peak GB/s for a bus: integer MB/s first, then one division by 1000.
pub fn peak_gbs(bus_bits: u64, data_rate_mts: u64) -> f64 {
    (bus_bits / 8 * data_rate_mts) as f64 / 1000.0
}

/// One burst in ns: BL/2 clock cycles at a clock of MT/s / 2 MHz.
pub fn burst_ns(burst_length: f64, data_rate_mts: f64) -> f64 {
    (burst_length / 2.0) / (data_rate_mts / 2.0) * 1e3
}

/// Mean queueing delay of an M/D/1 queue.
pub fn md1_wait(rho: f64, service: f64) -> f64 {
    rho * service / (2.0 * (1.0 - rho))
}

/// Byte 235 as (sub-channels, ECC bits, primary width); `None` if reserved.
pub fn byte235_fields(b: u8) -> Option<(u32, u32, u32)> {
    let sub_channels = match b >> 5 {
        0 => 1,
        1 => 2,
        2 => 4,
        3 => 8,
        _ => return None,
    };
    let ecc = [Some(0), Some(4), Some(8), None][usize::from((b >> 3) & 0b11)]?;
    let width = match b & 0b111 {
        0 => 8,
        1 => 16,
        2 => 32,
        3 => 64,
        _ => return None,
    };
    Some((sub_channels, ecc, width))
}

/// Data capacity in GB of `dies` DRAM dies of `gbit` each.
pub fn capacity_gb(dies: u32, gbit: u32) -> f64 {
    f64::from(dies * gbit) / 8.0
}
