#include "mfp/serialization.hpp"

#include "mfp/errors.hpp"
#include "mfp/hash_family.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace mfp {

namespace {

class Writer {
public:
    explicit Writer(std::vector<std::uint8_t> &out) : out_(out) {
    }

    void u8(std::uint8_t v) {
        out_.push_back(v);
    }
    void u16(std::uint16_t v) {
        put(v, 2);
    }
    void u32(std::uint32_t v) {
        put(v, 4);
    }
    void u64(std::uint64_t v) {
        put(v, 8);
    }
    void f64(double v) {
        put(std::bit_cast<std::uint64_t>(v), 8);
    }

private:
    void put(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) {
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }

    std::vector<std::uint8_t> &out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {
    }

    std::uint8_t u8(const char *what) {
        return static_cast<std::uint8_t>(get(1, what));
    }
    std::uint16_t u16(const char *what) {
        return static_cast<std::uint16_t>(get(2, what));
    }
    std::uint32_t u32(const char *what) {
        return static_cast<std::uint32_t>(get(4, what));
    }
    std::uint64_t u64(const char *what) {
        return get(8, what);
    }
    double f64(const char *what) {
        return std::bit_cast<double>(get(8, what));
    }

    std::span<const std::uint8_t> bytes(std::size_t n, const char *what) {
        need(n, what);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::size_t remaining() const noexcept {
        return in_.size() - pos_;
    }

private:
    void need(std::size_t n, const char *what) const {
        if (in_.size() - pos_ < n) {
            throw FormatError(FormatErrorKind::truncated, std::string("fingerprint truncated while reading ") + what);
        }
    }

    std::uint64_t get(int n, const char *what) {
        need(static_cast<std::size_t>(n), what);
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

[[noreturn]] void violation(const std::string &what) {
    throw FormatError(FormatErrorKind::invariant_violation, "invalid fingerprint: " + what);
}

} // namespace

std::vector<std::uint8_t> serialize(const Fingerprint &fp) {
    const SketchConfig &c = fp.config;
    if (fp.blocks.size() != c.m) {
        throw ArgumentError("serialize: fingerprint has " + std::to_string(fp.blocks.size()) + " blocks, expected " +
                            std::to_string(c.m));
    }
    const std::size_t bit_bytes = (static_cast<std::size_t>(c.k) + 7) / 8;
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + c.m * (17 + bit_bytes));
    Writer w(out);
    for (char ch : kFingerprintMagic) {
        w.u8(static_cast<std::uint8_t>(ch));
    }
    w.u16(kFormatVersion);
    w.u64(c.params.prime());
    w.u64(c.params.universe());
    w.f64(c.epsilon);
    w.f64(c.delta);
    w.u32(c.k);
    w.u32(c.m);
    w.u32(c.d);
    w.u64(c.master_seed);
    w.u64(fp.element_count);
    for (const FingerprintBlock &block : fp.blocks) {
        w.u64(block.pair_seed);
        w.u64(block.bit_seed);
        w.u8(block.valid ? 1 : 0);
        for (std::size_t j = 0; j < bit_bytes; ++j) {
            w.u8(static_cast<std::uint8_t>(block.words[j / 8] >> (8 * (j % 8))));
        }
    }
    return out;
}

Fingerprint deserialize(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    auto magic = r.bytes(4, "magic");
    if (std::memcmp(magic.data(), kFingerprintMagic, 4) != 0) {
        throw FormatError(FormatErrorKind::bad_magic, "not a fingerprint file (bad magic)");
    }
    const std::uint16_t version = r.u16("version");
    if (version != kFormatVersion) {
        throw FormatError(FormatErrorKind::version_mismatch,
                          "unsupported fingerprint format version " + std::to_string(version));
    }

    Fingerprint fp;
    SketchConfig &c = fp.config;
    const std::uint64_t p = r.u64("prime");
    const std::uint64_t u = r.u64("universe");
    c.epsilon = r.f64("epsilon");
    c.delta = r.f64("delta");
    c.k = r.u32("k");
    c.m = r.u32("m");
    c.d = r.u32("d");
    c.master_seed = r.u64("master seed");
    fp.element_count = r.u64("element count");

    try {
        c.params = FieldParams(p, u);
        c.l_prime = degree_for_accuracy(c.epsilon).l_prime;
        c.gamma = gamma_for_accuracy(c.epsilon);
        c.validate();
    } catch (const ArgumentError &e) {
        violation(e.what());
    }

    const std::size_t bit_bytes = (static_cast<std::size_t>(c.k) + 7) / 8;
    const std::size_t record = 17 + bit_bytes;
    if (r.remaining() / record < c.m) {
        throw FormatError(FormatErrorKind::truncated, "fingerprint truncated in block section");
    }
    fp.blocks.reserve(c.m);
    for (std::size_t b = 0; b < c.m; ++b) {
        FingerprintBlock block;
        block.pair_seed = r.u64("pair seed");
        block.bit_seed = r.u64("bit seed");
        const std::uint8_t valid = r.u8("valid flag");
        if (valid > 1) {
            violation("block " + std::to_string(b) + " has validity byte " + std::to_string(valid));
        }
        block.valid = valid == 1;
        if (block.pair_seed != block_pair_seed(c, b) || block.bit_seed != block_bit_seed(c, b)) {
            violation("block " + std::to_string(b) + " seeds do not derive from the master seed");
        }
        block.words.assign((static_cast<std::size_t>(c.k) + 63) / 64, 0);
        auto bits = r.bytes(bit_bytes, "block bits");
        for (std::size_t j = 0; j < bit_bytes; ++j) {
            block.words[j / 8] |= static_cast<std::uint64_t>(bits[j]) << (8 * (j % 8));
        }
        if (c.k % 64 != 0 && (block.words.back() >> (c.k % 64)) != 0) {
            violation("block " + std::to_string(b) + " has bits set past row k");
        }
        fp.blocks.push_back(std::move(block));
    }
    if (r.remaining() != 0) {
        violation(std::to_string(r.remaining()) + " trailing bytes after the last block");
    }
    return fp;
}

void write_fingerprint_file(const std::string &path, const Fingerprint &fp) {
    const auto bytes = serialize(fp);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write to " + path + " failed");
    }
}

Fingerprint read_fingerprint_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path + " for reading");
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read from " + path + " failed");
    }
    return deserialize(bytes);
}

} // namespace mfp
