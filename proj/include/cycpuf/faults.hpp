#ifndef CYCPUF_FAULTS_HPP
#define CYCPUF_FAULTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cycpuf/cyclic.hpp"
#include "cycpuf/puf.hpp"

namespace cycpuf {

/// Behavioral-level signal a fault can attach to.
struct FaultSite {
	enum class Kind { ResponseBit, FeedbackXorOutput, EffectiveChallengeBit };
	Kind kind = Kind::ResponseBit;
	int index = 0;

	bool operator==(const FaultSite &) const = default;
};

enum class FaultKind { StuckAt0, StuckAt1, BitFlip };

std::string to_string(const FaultSite &site);
std::string to_string(FaultKind kind);

struct Fault {
	FaultSite site;
	FaultKind kind;
};

struct FaultSpec {
	std::vector<Fault> faults;

	bool empty() const { return faults.empty(); }
	/// Rejects out-of-range sites and more than one fault per site.
	void validate(const PufInstance &inst, const FeedbackConfig &fb) const;
};

inline int apply_fault(int bit, FaultKind kind)
{
	switch (kind) {
	case FaultKind::StuckAt0:
		return 0;
	case FaultKind::StuckAt1:
		return 1;
	case FaultKind::BitFlip:
		return bit ^ 1;
	}
	return bit;
}

/// Uniform distinct sites with uniform fault kinds, seeded.
FaultSpec sample_fault_spec(const PufInstance &inst, const FeedbackConfig &fb, int count, std::uint64_t seed);

nlohmann::json fault_spec_to_json(const FaultSpec &spec);
FaultSpec fault_spec_from_json(const nlohmann::json &j);

/**
 * @brief A PUF + feedback wiring with injected faults, evaluable like the
 * clean cyclic system.
 *
 * Every cycle each fault overrides its site after the clean value is
 * computed: feedback XOR outputs before they reach the challenge inputs,
 * effective-challenge bits before core evaluation, response bits before
 * they are emitted or fed back.
 */
class FaultyCyclicPuf {
      public:
	FaultyCyclicPuf(PufInstance inst, FeedbackConfig fb, FaultSpec spec);

	const PufInstance &instance() const { return inst_; }
	const FeedbackConfig &feedback() const { return fb_; }
	const FaultSpec &spec() const { return spec_; }

	Trajectory simulate(const Challenge &ext, int cycles, const EnvCondition &env = EnvCondition{},
			    std::optional<std::uint64_t> noise_seed = std::nullopt) const;

      private:
	PufInstance inst_;
	FeedbackConfig fb_;
	FaultSpec spec_;
};

} // namespace cycpuf

#endif
