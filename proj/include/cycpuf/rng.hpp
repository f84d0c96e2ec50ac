#ifndef CYCPUF_RNG_HPP
#define CYCPUF_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cycpuf {

/**
 * @brief Seeded random source with fully specified draw semantics.
 *
 * The generator is std::mt19937_64 (bit-exact per the standard); the
 * real-valued draws are built here from raw 64-bit words instead of the
 * std distributions, whose algorithms are implementation-defined. Every
 * draw consumes a fixed, documented number of words, so seeded runs
 * replay identically across processes and threads.
 */
class Rng {
      public:
	explicit Rng(std::uint64_t seed) : gen_(seed) {}

	std::uint64_t next_u64() { return gen_(); }

	/// Uniform in [0, 1), 53-bit resolution. One word.
	double next_real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

	/// Standard normal via Box-Muller. Exactly two words per draw.
	double next_gaussian()
	{
		double u1 = next_real01();
		double u2 = next_real01();
		double r = std::sqrt(-2.0 * std::log1p(-u1)); // 1-u1 in (0,1], never log(0)
		return r * std::cos(2.0 * std::numbers::pi * u2);
	}

	/// Uniform integer in [0, n). Unbiased by rejection.
	std::uint64_t next_below(std::uint64_t n)
	{
		if (n == 0)
			return 0;
		std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
		std::uint64_t x;
		do {
			x = next_u64();
		} while (x >= limit);
		return x % n;
	}

	static std::uint64_t splitmix64(std::uint64_t x)
	{
		x += 0x9e3779b97f4a7c15ull;
		x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
		x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
		return x ^ (x >> 31);
	}

	/// Derive an independent stream seed from a base seed and an index.
	static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream)
	{
		return splitmix64(seed ^ (splitmix64(stream) + 0x9e3779b97f4a7c15ull));
	}

      private:
	std::mt19937_64 gen_;
};

} // namespace cycpuf

#endif
