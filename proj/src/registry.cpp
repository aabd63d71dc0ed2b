#include "holdem/registry.hpp"

#include "holdem/harness.hpp"
#include "holdem/learner.hpp"
#include "holdem/pokerlang.hpp"
#include "holdem/text.hpp"

namespace holdem {

std::unique_ptr<Agent> make_agent(const std::string& name) {
  std::string_view n = name;
  if (n.starts_with("archetype:")) {
    return std::make_unique<ArchetypeAgent>(archetype_spec(n.substr(10)).kind);
  }
  if (n == "observer") return std::make_unique<ObserverAgent>();
  if (n == "ehs") return std::make_unique<EhsThresholdAgent>();
  if (n == "hubot") return std::make_unique<HuBotAgent>();
  if (n == "hubot:nomodel") {
    HuBotConfig config;
    config.reweighting = false;
    return std::make_unique<HuBotAgent>(config);
  }
  if (n == "alwayscall") return std::make_unique<AlwaysCallAgent>();
  if (n == "random") return std::make_unique<RandomAgent>();
  if (n == "statictight") return std::make_unique<StaticTightAgent>();
  if (n.starts_with("pokerlang:")) {
    const std::string path(n.substr(10));
    std::shared_ptr<const pokerlang::Program> program;
    try {
      program = std::make_shared<const pokerlang::Program>(pokerlang::parse_file(path));
    } catch (const pokerlang::ParseError& e) {
      throw InvalidInput(e.diagnostics().front().str(path));
    }
    return std::make_unique<pokerlang::PokerLangAgent>(std::move(program), name);
  }
  if (n.starts_with("learner:")) {
    const std::string_view rest = n.substr(8);
    const auto colon = rest.find(':');
    const std::string_view kind = rest.substr(0, colon);
    LearnerConfig config;
    if (kind == "whs") config.kind = LearnerKind::kWhs;
    else if (kind == "wh") config.kind = LearnerKind::kWh;
    else throw InvalidInput("unknown learner '" + std::string(kind) + "' (expected whs or wh)");
    if (colon == std::string_view::npos) return std::make_unique<LearnerAgent>(config);
    return std::make_unique<LearnerAgent>(config, QTable::load(std::string(rest.substr(colon + 1))));
  }
  if (n.starts_with("switch:")) {
    std::vector<std::unique_ptr<Agent>> parts;
    for (const auto& part : split(n.substr(7), '|')) parts.push_back(make_agent(std::string(trim(part))));
    if (parts.size() < 2) throw InvalidInput("switch: needs at least two strategies");
    return std::make_unique<SwitchingAgent>(std::move(parts), SwitchPolicy{});
  }
  throw InvalidInput("unknown agent '" + name + "'");
}

std::vector<std::string> builtin_agent_names() {
  std::vector<std::string> out;
  for (const auto& spec : archetype_table()) out.push_back("archetype:" + std::string(spec.name));
  for (const char* n : {"observer", "ehs", "hubot", "hubot:nomodel", "alwayscall", "random", "statictight",
                        "learner:whs", "learner:wh"}) {
    out.emplace_back(n);
  }
  return out;
}

}  // namespace holdem
