#include "ksl/advice_tape.hpp"

#include <bit>

#include "ksl/error.hpp"

namespace ksl {

int ceil_log2(std::uint64_t choices) {
  if (choices <= 1) return 0;
  return static_cast<int>(std::bit_width(choices - 1));
}

void AdviceTape::write_uint(std::uint64_t value, int width) {
  if (width < 0 || width > 64) throw Error(ErrorCode::kInvalidArgument, "width must lie in [0, 64]");
  if (width < 64 && (value >> width) != 0) {
    throw Error(ErrorCode::kValueTooWide, std::to_string(value) + " does not fit in " + std::to_string(width) + " bits");
  }
  for (int b = width - 1; b >= 0; --b) bits_.push_back(((value >> b) & 1U) != 0);
}

std::uint64_t AdviceTape::read_uint(int width) {
  if (width < 0 || width > 64) throw Error(ErrorCode::kInvalidArgument, "width must lie in [0, 64]");
  if (cursor_ + static_cast<std::size_t>(width) > bits_.size()) {
    throw Error(ErrorCode::kTapeExhausted, "need " + std::to_string(width) + " bits at offset " +
                                               std::to_string(cursor_) + ", tape holds " + std::to_string(bits_.size()));
  }
  std::uint64_t value = 0;
  for (int b = 0; b < width; ++b) value = (value << 1) | (bits_[cursor_++] ? 1U : 0U);
  bits_read_ += static_cast<std::size_t>(width);
  return value;
}

void AdviceTape::rewind() noexcept {
  cursor_ = 0;
  bits_read_ = 0;
}

std::string AdviceTape::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < bits_.size(); i += 8) {
    unsigned byte = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      byte <<= 1;
      if (i + j < bits_.size() && bits_[i + j]) byte |= 1U;
    }
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

AdviceTape AdviceTape::from_hex(const std::string& hex, std::size_t bit_length) {
  if (hex.size() % 2 != 0 || hex.size() * 4 < bit_length || hex.size() * 4 >= bit_length + 16) {
    throw Error(ErrorCode::kCorruptAdvice, "hex length does not match bit length " + std::to_string(bit_length));
  }
  AdviceTape tape;
  for (std::size_t i = 0; i < bit_length; ++i) {
    char c = hex[i / 4];
    int nibble = 0;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
    else throw Error(ErrorCode::kCorruptAdvice, std::string("bad hex digit '") + c + "'");
    tape.bits_.push_back(((nibble >> (3 - i % 4)) & 1) != 0);
  }
  return tape;
}

}  // namespace ksl
