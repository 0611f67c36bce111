//! SPD "Memory Channel Bus Width" descriptor (byte 235, offset 0xEB).
//!
//! Layout of the byte:
//!
//! | bits | field                               | codes                          |
//! |------|-------------------------------------|--------------------------------|
//! | 7-5  | sub-channels per DIMM               | 000=1 001=2 010=4 011=8        |
//! | 4-3  | bus extension per sub-channel (ECC) | 00=0 01=4 10=8 (provisional)   |
//! | 2-0  | primary bus width per sub-channel   | 000=8 001=16 010=32 011=64     |
//!
//! Every other code is reserved and rejected. Nothing here ever maps a
//! reserved code onto a neighbouring value.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Offset of the bus width descriptor inside an SPD image.
pub const BUS_WIDTH_OFFSET: usize = 0xEB;

/// Shortest image that still addresses [`BUS_WIDTH_OFFSET`].
pub const MIN_IMAGE_LEN: usize = BUS_WIDTH_OFFSET + 1;

const SUB_CHANNEL_SHIFT: u8 = 5;
const EXTENSION_SHIFT: u8 = 3;
const FIELD3_MASK: u8 = 0b111;
const FIELD2_MASK: u8 = 0b11;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubChannelCount {
    One,
    Two,
    Four,
    Eight,
}

impl SubChannelCount {
    pub const ALL: [SubChannelCount; 4] = [Self::One, Self::Two, Self::Four, Self::Eight];

    pub fn count(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Four => 4,
            Self::Eight => 8,
        }
    }

    fn code(self) -> u8 {
        match self {
            Self::One => 0b000,
            Self::Two => 0b001,
            Self::Four => 0b010,
            Self::Eight => 0b011,
        }
    }

    fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.code() == code)
    }

    pub fn from_count(count: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.count() == count)
    }
}

/// ECC bus extension per sub-channel.
///
/// The numeric widths behind the codes are not confirmed against the
/// standard's table; they live only in `code`/`from_code` below so a
/// correction touches one place.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BusExtension {
    None,
    Bits4,
    Bits8,
}

impl BusExtension {
    pub const ALL: [BusExtension; 3] = [Self::None, Self::Bits4, Self::Bits8];

    pub fn bits(self) -> u8 {
        match self {
            Self::None => 0,
            Self::Bits4 => 4,
            Self::Bits8 => 8,
        }
    }

    fn code(self) -> u8 {
        match self {
            Self::None => 0b00,
            Self::Bits4 => 0b01,
            Self::Bits8 => 0b10,
        }
    }

    fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.code() == code)
    }

    pub fn from_bits(bits: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.bits() == bits)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimaryBusWidth {
    W8,
    W16,
    W32,
    W64,
}

impl PrimaryBusWidth {
    pub const ALL: [PrimaryBusWidth; 4] = [Self::W8, Self::W16, Self::W32, Self::W64];

    pub fn bits(self) -> u8 {
        match self {
            Self::W8 => 8,
            Self::W16 => 16,
            Self::W32 => 32,
            Self::W64 => 64,
        }
    }

    fn code(self) -> u8 {
        match self {
            Self::W8 => 0b000,
            Self::W16 => 0b001,
            Self::W32 => 0b010,
            Self::W64 => 0b011,
        }
    }

    fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.code() == code)
    }

    pub fn from_bits(bits: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.bits() == bits)
    }
}

/// Which bit-field of byte 235 an error refers to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpdField {
    SubChannelCount,
    BusExtension,
    PrimaryBusWidth,
}

impl fmt::Display for SpdField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SubChannelCount => "sub-channel count (bits 7-5)",
            Self::BusExtension => "bus extension (bits 4-3)",
            Self::PrimaryBusWidth => "primary bus width (bits 2-0)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpdError {
    #[error("reserved code {code:#05b} in {field}")]
    ReservedCode { field: SpdField, code: u8 },
    #[error("SPD image is {len} bytes; at least {MIN_IMAGE_LEN} are needed to reach offset 0xEB")]
    ImageTooShort { len: usize },
}

/// Decoded content of SPD byte 235.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpdChannelBusWidth {
    pub sub_channels: SubChannelCount,
    pub bus_extension: BusExtension,
    pub primary_width: PrimaryBusWidth,
}

impl SpdChannelBusWidth {
    pub fn new(sub_channels: SubChannelCount, bus_extension: BusExtension, primary_width: PrimaryBusWidth) -> Self {
        Self { sub_channels, bus_extension, primary_width }
    }

    /// A 32-bit single sub-channel module without ECC.
    pub fn single_sub_channel() -> Self {
        Self::new(SubChannelCount::One, BusExtension::None, PrimaryBusWidth::W32)
    }

    /// The standard two sub-channel UDIMM without ECC.
    pub fn standard_dual() -> Self {
        Self::new(SubChannelCount::Two, BusExtension::None, PrimaryBusWidth::W32)
    }

    pub fn primary_width_bits(&self) -> u8 {
        self.primary_width.bits()
    }

    pub fn class(&self) -> ModuleClass {
        classify_module(self)
    }

    pub fn summary(&self) -> DescriptorSummary {
        DescriptorSummary {
            sub_channels: self.sub_channels.count(),
            ecc_bits: self.bus_extension.bits(),
            primary_width_bits: self.primary_width.bits(),
            module_class: self.class(),
        }
    }

    /// Every representable descriptor, in encoding order.
    pub fn all() -> impl Iterator<Item = SpdChannelBusWidth> {
        SubChannelCount::ALL.into_iter().flat_map(|sc| {
            BusExtension::ALL
                .into_iter()
                .flat_map(move |ext| PrimaryBusWidth::ALL.into_iter().map(move |w| Self::new(sc, ext, w)))
        })
    }
}

/// Flat view used for JSON output.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorSummary {
    pub sub_channels: u8,
    pub ecc_bits: u8,
    pub primary_width_bits: u8,
    pub module_class: ModuleClass,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModuleClass {
    StandardDualSC,
    SingleSC,
    MultiSC,
    NonStandardWidth,
}

impl fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::StandardDualSC => "StandardDualSC",
            Self::SingleSC => "SingleSC",
            Self::MultiSC => "MultiSC",
            Self::NonStandardWidth => "NonStandardWidth",
        })
    }
}

pub fn decode_byte235(raw: u8) -> Result<SpdChannelBusWidth, SpdError> {
    let sc_code = (raw >> SUB_CHANNEL_SHIFT) & FIELD3_MASK;
    let ext_code = (raw >> EXTENSION_SHIFT) & FIELD2_MASK;
    let width_code = raw & FIELD3_MASK;

    let sub_channels = SubChannelCount::from_code(sc_code)
        .ok_or(SpdError::ReservedCode { field: SpdField::SubChannelCount, code: sc_code })?;
    let primary_width = PrimaryBusWidth::from_code(width_code)
        .ok_or(SpdError::ReservedCode { field: SpdField::PrimaryBusWidth, code: width_code })?;
    let bus_extension = BusExtension::from_code(ext_code)
        .ok_or(SpdError::ReservedCode { field: SpdField::BusExtension, code: ext_code })?;

    Ok(SpdChannelBusWidth { sub_channels, bus_extension, primary_width })
}

pub fn encode_byte235(desc: &SpdChannelBusWidth) -> u8 {
    (desc.sub_channels.code() << SUB_CHANNEL_SHIFT)
        | (desc.bus_extension.code() << EXTENSION_SHIFT)
        | desc.primary_width.code()
}

/// Module class as a pure function of sub-channel count and primary width.
pub fn classify_module(desc: &SpdChannelBusWidth) -> ModuleClass {
    match (desc.sub_channels, desc.primary_width) {
        (SubChannelCount::One, PrimaryBusWidth::W32) => ModuleClass::SingleSC,
        (SubChannelCount::Two, PrimaryBusWidth::W32) => ModuleClass::StandardDualSC,
        (SubChannelCount::Four | SubChannelCount::Eight, _) => ModuleClass::MultiSC,
        _ => ModuleClass::NonStandardWidth,
    }
}

pub fn extract_byte235(image: &[u8]) -> Result<u8, SpdError> {
    image.get(BUS_WIDTH_OFFSET).copied().ok_or(SpdError::ImageTooShort { len: image.len() })
}

/// A raw SPD EEPROM dump whose length has been checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpdImage(Vec<u8>);

impl SpdImage {
    pub fn new(bytes: Vec<u8>) -> Result<Self, SpdError> {
        if bytes.len() < MIN_IMAGE_LEN {
            return Err(SpdError::ImageTooShort { len: bytes.len() });
        }
        Ok(Self(bytes))
    }

    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn bus_width_byte(&self) -> u8 {
        self.0[BUS_WIDTH_OFFSET]
    }

    pub fn bus_width(&self) -> Result<SpdChannelBusWidth, SpdError> {
        decode_byte235(self.bus_width_byte())
    }
}
