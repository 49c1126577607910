#pragma once

#include "mfp/fingerprint.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mfp {

inline constexpr char kFingerprintMagic[4] = {'M', 'F', 'P', '1'};
inline constexpr std::uint16_t kFormatVersion = 1;

/// Bytes before the first block record.
inline constexpr std::size_t kHeaderSize = 66;

/**
 * Binary fingerprint layout, all integers little-endian, floats as IEEE-754 binary64:
 *
 *     magic "MFP1" | version u16 | p u64 | u u64 | epsilon f64 | delta f64
 *     | k u32 | m u32 | d u32 | master_seed u64 | element_count u64
 *     then m times: pair_seed u64 | bit_seed u64 | valid u8 | ceil(k/8) bytes of bits
 *
 * Row i of a block lives at byte i/8, bit i%8. l_prime and gamma are not stored; they are
 * recomputed from epsilon on load.
 */
std::vector<std::uint8_t> serialize(const Fingerprint &fp);

/// Throws FormatError with kind bad_magic, version_mismatch, truncated or invariant_violation.
Fingerprint deserialize(std::span<const std::uint8_t> bytes);

/// Throw IoError when the file cannot be opened, read or written.
void write_fingerprint_file(const std::string &path, const Fingerprint &fp);
Fingerprint read_fingerprint_file(const std::string &path);

} // namespace mfp
