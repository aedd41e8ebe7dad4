#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rps {

using Bytes = std::vector<std::uint8_t>;

inline void append_u32_be(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void append_u64_be(Bytes& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

// Canonical field framing: 4-byte big-endian length, then the raw bytes.
// Length prefixes make concatenated encodings injective regardless of the
// field contents.
inline void append_field(Bytes& out, const std::uint8_t* data, std::size_t len) {
    append_u32_be(out, static_cast<std::uint32_t>(len));
    out.insert(out.end(), data, data + len);
}

inline void append_field(Bytes& out, const Bytes& b) {
    append_field(out, b.data(), b.size());
}

template <std::size_t N>
void append_field(Bytes& out, const std::array<std::uint8_t, N>& a) {
    append_field(out, a.data(), N);
}

inline void append_field(Bytes& out, std::string_view s) {
    append_field(out, reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

inline void append_field_u32(Bytes& out, std::uint32_t v) {
    append_u32_be(out, 4);
    append_u32_be(out, v);
}

inline void append_field_u8(Bytes& out, std::uint8_t v) {
    append_u32_be(out, 1);
    out.push_back(v);
}

inline std::string to_hex(const std::uint8_t* data, std::size_t len) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

inline std::string to_hex(const Bytes& b) {
    return to_hex(b.data(), b.size());
}

template <std::size_t N>
std::string to_hex(const std::array<std::uint8_t, N>& a) {
    return to_hex(a.data(), N);
}

// Cursor over canonically framed fields. Any framing violation sets a sticky
// failure flag instead of throwing; callers check ok() once at the end.
class FieldReader {
public:
    explicit FieldReader(const Bytes& buf) : buf_(&buf) {}

    bool ok() const { return ok_; }
    bool done() const { return ok_ && pos_ == buf_->size(); }

    Bytes field() {
        const std::size_t len = next_len();
        if (!ok_) return {};
        Bytes out(buf_->begin() + static_cast<std::ptrdiff_t>(pos_),
                  buf_->begin() + static_cast<std::ptrdiff_t>(pos_ + len));
        pos_ += len;
        return out;
    }

    std::string field_str() {
        Bytes b = field();
        return std::string(b.begin(), b.end());
    }

    std::uint32_t field_u32() {
        const std::size_t len = next_len();
        if (ok_ && len != 4) ok_ = false;
        if (!ok_) return 0;
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | (*buf_)[pos_ + static_cast<std::size_t>(i)];
        pos_ += 4;
        return v;
    }

    std::uint8_t field_u8() {
        const std::size_t len = next_len();
        if (ok_ && len != 1) ok_ = false;
        if (!ok_) return 0;
        return (*buf_)[pos_++];
    }

    template <std::size_t N>
    std::array<std::uint8_t, N> field_array() {
        std::array<std::uint8_t, N> out{};
        const std::size_t len = next_len();
        if (ok_ && len != N) ok_ = false;
        if (!ok_) return out;
        for (std::size_t i = 0; i < N; ++i) out[i] = (*buf_)[pos_ + i];
        pos_ += N;
        return out;
    }

private:
    std::size_t next_len() {
        if (!ok_ || buf_->size() - pos_ < 4) {
            ok_ = false;
            return 0;
        }
        std::uint32_t len = 0;
        for (int i = 0; i < 4; ++i) len = (len << 8) | (*buf_)[pos_ + static_cast<std::size_t>(i)];
        pos_ += 4;
        if (buf_->size() - pos_ < len) {
            ok_ = false;
            return 0;
        }
        return len;
    }

    const Bytes* buf_;
    std::size_t pos_ = 0;
    bool ok_ = true;
};

}  // namespace rps
