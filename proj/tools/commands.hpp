#pragma once

#include "mfp/errors.hpp"
#include "mfp/modular.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace mfp::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_data = 2,
    exit_incompatible = 3,
    exit_selftest = 4,
};

/// Malformed or out-of-range input data, reported with its source and line.
class DataError : public Error {
public:
    using Error::Error;
};

/**
 * Runs the `mfp` command line. `args` excludes the program name. Results go to `out`; the JSON
 * run manifest and diagnostics go to `err`. `in` is read when the sketch input is "-" or absent.
 */
int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err);

/// Accepts "m61", "m31" or a decimal prime below 2^63.
FieldParams parse_prime(const std::string &text);

/**
 * Calls `sink` for each item ID in a text stream: one unsigned decimal per line, surrounding
 * whitespace allowed, blank lines and lines starting with '#' skipped. Throws DataError naming
 * `source` and the line number for a malformed line or an ID >= universe. Returns the item count.
 */
std::uint64_t read_items(std::istream &in, const std::string &source, std::uint64_t universe,
                         const std::function<void(ItemId)> &sink);

} // namespace mfp::cli
