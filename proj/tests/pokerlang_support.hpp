#pragma once

// Corpus access and a random well-formed program generator for tests.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "holdem/pokerlang.hpp"
#include "holdem/rng.hpp"

namespace holdem::pokerlang::test_support {

inline const std::string kCorpus = std::string(HOLDEM_SOURCE_DIR) + "/tests/data/pokerlang";

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(kCorpus)) {
    if (e.path().extension() == ".pkl") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Random well-formed programs.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  Program program(int max_rules) {
    Program p;
    const int tactics = static_cast<int>(rng_.below(3));
    for (int i = 0; i < tactics; ++i) p.tactics.push_back(tactic(max_rules));
    const int entries = 1 + static_cast<int>(rng_.below(4));
    for (int i = 0; i < entries; ++i) {
      Entry e;
      const int conds = i + 1 == entries && rng_.chance(0.5) ? 0 : 1 + static_cast<int>(rng_.below(3));
      for (int c = 0; c < conds; ++c) e.conditions.push_back(condition(false));
      const auto form = rng_.below(3);
      if (form == 0 || (form == 1 && p.tactics.empty())) {
        e.tactic.form = TacticRef::Form::kPredefined;
        e.tactic.predefined = static_cast<Predefined>(rng_.below(4));
      } else if (form == 1) {
        e.tactic.form = TacticRef::Form::kNamed;
        e.tactic.name = p.tactics[rng_.below(p.tactics.size())].name;
      } else {
        e.tactic.form = TacticRef::Form::kInline;
        e.tactic.definition = tactic(max_rules);
      }
      p.strategy.push_back(std::move(e));
    }
    return p;
  }

  TacticDef tactic(int max_rules) {
    TacticDef d;
    d.name = "t" + std::to_string(next_name_++);
    const int behaviours = 1 + static_cast<int>(rng_.below(3));
    for (int b = 0; b < behaviours; ++b) {
      Behaviour beh;
      beh.value = number(0.01, 10);
      const int rules = static_cast<int>(rng_.below(static_cast<std::uint64_t>(max_rules) + 1));
      for (int r = 0; r < rules; ++r) {
        Rule rule;
        const int conds = static_cast<int>(rng_.below(4));
        for (int c = 0; c < conds; ++c) rule.conditions.push_back(condition(true));
        const int actions = 1 + static_cast<int>(rng_.below(3));
        for (int a = 0; a < actions; ++a) {
          ActionItem item;
          item.kind = static_cast<ActionKind>(rng_.below(kNumActionKinds));
          item.percent = rng_.chance(0.5) ? static_cast<double>(1 + rng_.below(100)) : number(1e-3, 100);
          rule.actions.push_back(item);
        }
        beh.rules.push_back(std::move(rule));
      }
      d.behaviours.push_back(std::move(beh));
    }
    return d;
  }

  Condition condition(bool predictors) {
    Condition c;
    c.term = static_cast<Term>(rng_.below(predictors ? kNumTerms : 5));
    c.op = static_cast<Op>(rng_.below(7));
    const auto& syms = term_symbols(c.term);
    auto value = [&]() {
      Value v;
      if (syms.empty()) {
        v.number = rng_.chance(0.3) ? static_cast<double>(rng_.below(11)) : number(-5, 100);
      } else {
        v.symbolic = true;
        v.symbol = std::string(syms[rng_.below(syms.size())]);
      }
      return v;
    };
    const int n = c.op == Op::kInterval ? 2 : (c.op == Op::kSet ? 1 + static_cast<int>(rng_.below(3)) : 1);
    for (int i = 0; i < n; ++i) c.values.push_back(value());
    if (c.op == Op::kInterval) {
      auto ord = [&](const Value& v) {
        return v.symbolic ? static_cast<double>(std::find(syms.begin(), syms.end(), v.symbol) - syms.begin())
                          : v.number;
      };
      if (ord(c.values[0]) > ord(c.values[1])) std::swap(c.values[0], c.values[1]);
    }
    return c;
  }

 private:
  double number(double lo, double hi) {
    double x = 0;
    do {
      x = lo + (hi - lo) * rng_.uniform();
    } while (!(x > 0) && lo >= 0);
    return x;
  }

  Rng rng_;
  int next_name_ = 0;
};

}  // namespace holdem::pokerlang::test_support
