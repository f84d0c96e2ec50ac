#ifndef CYCPUF_BITVEC_HPP
#define CYCPUF_BITVEC_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cycpuf/errors.hpp"

namespace cycpuf {

/**
 * @brief Fixed-width vector of bits.
 *
 * Bit order is MSB-first everywhere: index 0 is the leftmost character of
 * the string form. from_uint(v, w) places the most significant of the w
 * low bits of v at index 0, so counting v = 0,1,2,... enumerates the
 * strings "00..0", "00..1", ... in natural order.
 */
class BitVec {
      public:
	BitVec() = default;
	explicit BitVec(std::size_t width, int fill = 0) : bits_(width, fill ? 1 : 0) {}

	static BitVec from_string(std::string_view s)
	{
		BitVec v(s.size());
		for (std::size_t i = 0; i < s.size(); ++i) {
			if (s[i] != '0' && s[i] != '1')
				throw UsageError("BitVec::from_string: bad character in \"" + std::string(s) + "\"");
			v.bits_[i] = (s[i] == '1');
		}
		return v;
	}

	static BitVec from_uint(std::uint64_t value, std::size_t width)
	{
		BitVec v(width);
		for (std::size_t i = 0; i < width; ++i)
			v.bits_[i] = (value >> (width - 1 - i)) & 1u;
		return v;
	}

	std::size_t size() const { return bits_.size(); }
	bool empty() const { return bits_.empty(); }

	int operator[](std::size_t i) const { return bits_[i]; }
	int at(std::size_t i) const
	{
		if (i >= bits_.size())
			throw UsageError("BitVec: index out of range");
		return bits_[i];
	}
	void set(std::size_t i, int value) { bits_.at(i) = value ? 1 : 0; }

	std::string to_string() const
	{
		std::string s(bits_.size(), '0');
		for (std::size_t i = 0; i < bits_.size(); ++i)
			s[i] = bits_[i] ? '1' : '0';
		return s;
	}

	BitVec complemented() const
	{
		BitVec v(*this);
		for (auto &b : v.bits_)
			b ^= 1u;
		return v;
	}

	bool operator==(const BitVec &) const = default;

      private:
	std::vector<std::uint8_t> bits_;
};

using Challenge = BitVec;
using ResponseVector = BitVec;

} // namespace cycpuf

#endif
