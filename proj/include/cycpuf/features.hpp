#ifndef CYCPUF_FEATURES_HPP
#define CYCPUF_FEATURES_HPP

#include <vector>

#include "cycpuf/bitvec.hpp"

namespace cycpuf {

/**
 * @brief Parity (suffix-product) transform of a challenge.
 *
 * phi[i] = prod_{j=i}^{nc-1} (1 - 2*ch[j]) for i in [0, nc), phi[nc] = 1.
 * Entries are +/-1. This is the linearizing feature basis of the additive
 * arbiter delay model; the butterfly model reuses it as its challenge
 * dependence.
 */
inline void parity_features(const Challenge &ch, std::vector<double> &out)
{
	const std::size_t nc = ch.size();
	out.resize(nc + 1);
	out[nc] = 1.0;
	double acc = 1.0;
	for (std::size_t i = nc; i-- > 0;) {
		acc *= (ch[i] ? -1.0 : 1.0);
		out[i] = acc;
	}
}

inline std::vector<double> parity_features(const Challenge &ch)
{
	std::vector<double> out;
	parity_features(ch, out);
	return out;
}

} // namespace cycpuf

#endif
