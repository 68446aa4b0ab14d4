#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ksl {

/// Number of bits needed to name one of `choices` alternatives: ceil(log2(choices)),
/// and 0 when there is at most one choice.
int ceil_log2(std::uint64_t choices);

/// Append-only advice tape with a sequential read cursor.
///
/// Integers are fixed-width and big-endian. Width 0 is legal and neither
/// writes nor consumes anything. Reads never pad: running off the end
/// throws TapeExhausted.
class AdviceTape {
 public:
  AdviceTape() = default;

  void write_uint(std::uint64_t value, int width);
  std::uint64_t read_uint(int width);

  std::size_t bits_written() const noexcept { return bits_.size(); }
  std::size_t bits_read() const noexcept { return bits_read_; }
  std::size_t read_cursor() const noexcept { return cursor_; }
  std::size_t remaining() const noexcept { return bits_.size() - cursor_; }
  bool bit(std::size_t i) const { return bits_.at(i); }

  /// Moves the cursor back to the start; bits_read is reset too.
  void rewind() noexcept;

  /// Hex dump, MSB-first packing, final byte zero-padded. Pair with bits_written().
  std::string to_hex() const;
  static AdviceTape from_hex(const std::string& hex, std::size_t bit_length);

  friend bool operator==(const AdviceTape& a, const AdviceTape& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<bool> bits_;
  std::size_t cursor_ = 0;
  std::size_t bits_read_ = 0;
};

}  // namespace ksl
