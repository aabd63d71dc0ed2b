#pragma once

#include <memory>
#include <string>
#include <vector>

#include "holdem/agents.hpp"

namespace holdem {

/// Builds an agent from its registry name:
///   archetype:<maniac|gambler|fish|calling_station|rock|weak_tight|fox|ace>
///   observer, ehs, hubot, hubot:nomodel, alwayscall, random, statictight,
///   pokerlang:<file.pkl>, learner:whs, learner:wh, learner:<whs|wh>:<checkpoint.csv>,
///   switch:<name>|<name>|...
/// Throws InvalidInput for unknown names.
std::unique_ptr<Agent> make_agent(const std::string& name);

/// Names accepted without arguments, for usage text.
std::vector<std::string> builtin_agent_names();

}  // namespace holdem
