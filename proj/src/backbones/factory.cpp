#include "gri/backbones/ddpg.hpp"
#include "gri/backbones/dqn.hpp"
#include "gri/backbones/sac.hpp"

namespace gri::backbones {

std::unique_ptr<Learner> make_learner(const std::string& backbone,
                                      const envs::EnvSignature& signature,
                                      const LearnerConfig& config, std::uint64_t seed) {
  if (backbone == "dqn") return std::make_unique<DqnLearner>(signature, config, seed);
  if (backbone == "ddpg") return std::make_unique<DdpgLearner>(signature, config, seed);
  if (backbone == "sac") return std::make_unique<SacLearner>(signature, config, seed);
  throw ValidationError("unknown backbone \"" + backbone + "\" (known: dqn, ddpg, sac)");
}

}  // namespace gri::backbones
