#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "holdem/pokerlang.hpp"
#include "holdem/text.hpp"

namespace holdem::pokerlang {

namespace {

constexpr std::string_view kTermNames[kNumTerms] = {
    "number_of_players", "stack", "pot_odds", "hand_region", "position_at_table",
    "implied_odds", "opponent_hand", "opponent_in_game", "steal_bet", "image_at_table"};

constexpr std::string_view kActionNames[kNumActionKinds] = {
    "fold", "call", "raise", "steal_the_pot", "semi_bluff", "check_raise_bluff", "squeeze_play",
    "check_call_trap", "check_raise_trap", "post_oak_bluff"};

constexpr std::string_view kPredefinedNames[4] = {"loose_aggressive", "loose_passive",
                                                  "tight_aggressive", "tight_passive"};

constexpr std::string_view kKeywords[] = {"strategy", "when", "always", "use", "tactic",
                                          "behaviour", "rule", "do", "in"};

template <typename E, std::size_t N>
std::optional<E> lookup(const std::string_view (&names)[N], std::string_view text) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == text) return static_cast<E>(i);
  }
  return std::nullopt;
}

template <std::size_t N>
std::string one_of(const std::string_view (&names)[N], std::size_t first = 0, std::size_t last = N) {
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) out += ", ";
    out += names[i];
  }
  return out;
}

bool reserved(std::string_view word) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords) ||
         lookup<Term>(kTermNames, word) || lookup<ActionKind>(kActionNames, word) ||
         lookup<Predefined>(kPredefinedNames, word);
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok : std::uint8_t { kWord, kNumber, kPunct, kEnd };

struct Token {
  Tok type = Tok::kEnd;
  std::string text;
  double number = 0.0;
  Position pos;
};

std::string describe(const Token& t) {
  switch (t.type) {
    case Tok::kEnd: return "end of input";
    case Tok::kNumber: return "number '" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto bump = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') bump(1);
      continue;
    }
    Token t;
    t.pos = {line, col};
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.type = Tok::kWord;
      t.text = std::string(s.substr(i, j - i));
      bump(j - i);
    } else if (is_digit(c) || ((c == '-' || c == '.') && i + 1 < s.size() && (is_digit(s[i + 1]) || s[i + 1] == '.'))) {
      std::size_t j = i + (c == '-' ? 1 : 0);
      while (j < s.size() && (is_digit(s[j]) || s[j] == '.')) ++j;
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && is_digit(s[k])) {
          j = k;
          while (j < s.size() && is_digit(s[j])) ++j;
        }
      }
      t.type = Tok::kNumber;
      t.text = std::string(s.substr(i, j - i));
      auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (ec != std::errc() || end != t.text.data() + t.text.size()) {
        throw ParseError({{t.pos, "malformed number '" + t.text + "'"}});
      }
      bump(j - i);
    } else {
      static constexpr std::string_view kTwo[] = {"<=", ">=", "=="};
      std::string_view two = s.substr(i, 2);
      if (std::find(std::begin(kTwo), std::end(kTwo), two) != std::end(kTwo)) {
        t.text = std::string(two);
      } else if (std::string_view("{}[],<>%").find(c) != std::string_view::npos) {
        t.text = std::string(1, c);
      } else {
        throw ParseError({{t.pos, std::string("unexpected character '") + c + "'"}});
      }
      t.type = Tok::kPunct;
      bump(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program program() {
    Program p;
    bool have_strategy = false;
    while (peek().type != Tok::kEnd) {
      if (is_word("strategy")) {
        if (have_strategy) fail(peek(), "a program holds exactly one strategy block");
        have_strategy = true;
        next();
        expect("{");
        while (!is_punct("}")) p.strategy.push_back(entry());
        if (p.strategy.empty()) fail(peek(), "a strategy needs at least one entry");
        next();
      } else if (is_word("tactic")) {
        p.tactics.push_back(tactic_def());
      } else {
        fail(peek(), "expected 'strategy' or 'tactic', got " + describe(peek()));
      }
    }
    if (!have_strategy) fail(peek(), "missing strategy block");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is_word(std::string_view w) const { return peek().type == Tok::kWord && peek().text == w; }
  bool is_punct(std::string_view p) const { return peek().type == Tok::kPunct && peek().text == p; }

  [[noreturn]] static void fail(const Token& at, const std::string& message) {
    throw ParseError({{at.pos, message}});
  }

  void expect(std::string_view p) {
    if (!is_punct(p)) fail(peek(), "expected '" + std::string(p) + "', got " + describe(peek()));
    next();
  }

  void expect_word(std::string_view w) {
    if (!is_word(w)) fail(peek(), "expected '" + std::string(w) + "', got " + describe(peek()));
    next();
  }

  double number(std::string_view what) {
    if (peek().type != Tok::kNumber) fail(peek(), "expected " + std::string(what) + ", got " + describe(peek()));
    return next().number;
  }

  Entry entry() {
    Entry e;
    e.pos = peek().pos;
    if (is_word("always")) {
      next();
    } else if (is_word("when")) {
      next();
      do {
        e.conditions.push_back(condition(false));
      } while (!is_word("use"));
    } else {
      fail(peek(), "expected 'when' or 'always', got " + describe(peek()));
    }
    expect_word("use");
    e.tactic = tactic_ref();
    return e;
  }

  TacticRef tactic_ref() {
    TacticRef r;
    const Token& t = peek();
    if (t.type != Tok::kWord) fail(t, "expected a tactic, got " + describe(t));
    if (auto p = lookup<Predefined>(kPredefinedNames, t.text)) {
      next();
      r.form = TacticRef::Form::kPredefined;
      r.predefined = *p;
    } else if (t.text == "tactic") {
      r.form = TacticRef::Form::kInline;
      r.definition = tactic_def();
    } else if (!reserved(t.text)) {
      next();
      r.form = TacticRef::Form::kNamed;
      r.name = t.text;
    } else {
      fail(t, "expected a predefined tactic (" + one_of(kPredefinedNames) +
                  "), a tactic name or an inline 'tactic' definition, got " + describe(t));
    }
    return r;
  }

  TacticDef tactic_def() {
    TacticDef d;
    d.pos = peek().pos;
    expect_word("tactic");
    const Token& name = peek();
    if (name.type != Tok::kWord || reserved(name.text)) {
      fail(name, "expected a tactic name, got " + describe(name));
    }
    d.name = next().text;
    expect("{");
    while (!is_punct("}")) d.behaviours.push_back(behaviour());
    next();
    return d;
  }

  Behaviour behaviour() {
    Behaviour b;
    b.pos = peek().pos;
    expect_word("behaviour");
    const Token& at = peek();
    b.value = number("a behaviour value");
    if (!(b.value > 0)) fail(at, "behaviour value must be positive");
    expect("{");
    while (!is_punct("}")) b.rules.push_back(rule());
    next();
    return b;
  }

  Rule rule() {
    Rule r;
    r.pos = peek().pos;
    expect_word("rule");
    expect("{");
    while (!is_word("do")) r.conditions.push_back(condition(true));
    next();
    do {
      r.actions.push_back(action_item());
    } while (!is_punct("}"));
    next();
    return r;
  }

  ActionItem action_item() {
    ActionItem a;
    const Token& t = peek();
    a.pos = t.pos;
    auto kind = t.type == Tok::kWord ? lookup<ActionKind>(kActionNames, t.text) : std::nullopt;
    if (!kind) fail(t, "expected an action (" + one_of(kActionNames) + "), got " + describe(t));
    next();
    a.kind = *kind;
    const Token& at = peek();
    a.percent = number("a percentage");
    expect("%");
    if (!(a.percent > 0 && a.percent <= 100)) fail(at, "percentage must be in (0, 100]");
    return a;
  }

  Condition condition(bool allow_predictors) {
    Condition c;
    const Token& t = peek();
    c.pos = t.pos;
    auto term = t.type == Tok::kWord ? lookup<Term>(kTermNames, t.text) : std::nullopt;
    if (!term) {
      fail(t, allow_predictors
                  ? "expected an evaluator or predictor (" + one_of(kTermNames) + ") or 'do', got " + describe(t)
                  : "expected an evaluator (" + one_of(kTermNames, 0, 5) + ") or 'use', got " + describe(t));
    }
    if (!allow_predictors && is_predictor(*term)) {
      fail(t, "predictor '" + t.text + "' is not allowed in an activation condition; use one of " +
                  one_of(kTermNames, 0, 5));
    }
    next();
    c.term = *term;
    if (is_word("in")) {
      next();
      if (is_punct("[")) {
        next();
        c.op = Op::kInterval;
        c.values.push_back(value(c.term));
        expect(",");
        c.values.push_back(value(c.term));
        expect("]");
        if (ordinal(c.term, c.values[0]) > ordinal(c.term, c.values[1])) {
          fail(t, "interval bounds of '" + t.text + "' are out of order");
        }
      } else if (is_punct("{")) {
        next();
        c.op = Op::kSet;
        c.values.push_back(value(c.term));
        while (is_punct(",")) {
          next();
          c.values.push_back(value(c.term));
        }
        expect("}");
      } else {
        fail(peek(), "expected '[' or '{' after 'in', got " + describe(peek()));
      }
      return c;
    }
    static const std::map<std::string, Op, std::less<>> kOps = {
        {"<", Op::kLt}, {"<=", Op::kLe}, {">", Op::kGt}, {">=", Op::kGe}, {"==", Op::kEq}};
    auto op = peek().type == Tok::kPunct ? kOps.find(peek().text) : kOps.end();
    if (op == kOps.end()) fail(peek(), "expected 'in', '<', '<=', '>', '>=' or '==', got " + describe(peek()));
    next();
    c.op = op->second;
    c.values.push_back(value(c.term));
    return c;
  }

  static double ordinal(Term term, const Value& v) {
    if (!v.symbolic) return v.number;
    const auto& syms = term_symbols(term);
    return static_cast<double>(std::find(syms.begin(), syms.end(), v.symbol) - syms.begin());
  }

  Value value(Term term) {
    const Token& t = peek();
    const auto& syms = term_symbols(term);
    Value v;
    if (syms.empty()) {
      v.number = number("a number for '" + std::string(term_name(term)) + "'");
      return v;
    }
    if (t.type != Tok::kWord || std::find(syms.begin(), syms.end(), t.text) == syms.end()) {
      std::string list;
      for (std::size_t i = 0; i < syms.size(); ++i) list += (i ? ", " : "") + std::string(syms[i]);
      fail(t, "expected a value of '" + std::string(term_name(term)) + "' (" + list + "), got " + describe(t));
    }
    v.symbolic = true;
    v.symbol = next().text;
    return v;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Duplicate and undefined tactic names.
void resolve(const Program& p) {
  std::vector<Diagnostic> diags;
  std::map<std::string, Position> defined;
  auto define = [&](const TacticDef& d) {
    if (auto [it, fresh] = defined.emplace(d.name, d.pos); !fresh) {
      diags.push_back({d.pos, "duplicate tactic name '" + d.name + "' (first defined at line " +
                                  std::to_string(it->second.line) + ")"});
    }
  };
  for (const auto& e : p.strategy) {
    if (e.tactic.form == TacticRef::Form::kInline) define(*e.tactic.definition);
  }
  for (const auto& d : p.tactics) define(d);
  for (const auto& e : p.strategy) {
    if (e.tactic.form == TacticRef::Form::kNamed && !defined.count(e.tactic.name)) {
      diags.push_back({e.pos, "undefined tactic '" + e.tactic.name + "'"});
    }
  }
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::pair(a.pos.line, a.pos.column) < std::pair(b.pos.line, b.pos.column);
  });
  if (!diags.empty()) throw ParseError(std::move(diags));
}

// ---------------------------------------------------------------------------
// Formatter

std::string value_text(const Value& v) { return v.symbolic ? v.symbol : format_double(v.number); }

std::string condition_text(const Condition& c) {
  std::string out(term_name(c.term));
  switch (c.op) {
    case Op::kInterval:
      return out + " in [" + value_text(c.values[0]) + ", " + value_text(c.values[1]) + "]";
    case Op::kSet: {
      out += " in {";
      for (std::size_t i = 0; i < c.values.size(); ++i) out += (i ? ", " : "") + value_text(c.values[i]);
      return out + "}";
    }
    case Op::kLt: return out + " < " + value_text(c.values[0]);
    case Op::kLe: return out + " <= " + value_text(c.values[0]);
    case Op::kGt: return out + " > " + value_text(c.values[0]);
    case Op::kGe: return out + " >= " + value_text(c.values[0]);
    case Op::kEq: return out + " == " + value_text(c.values[0]);
  }
  return out;
}

void format_tactic(std::ostringstream& o, const TacticDef& d, const std::string& indent) {
  o << "tactic " << d.name << " {\n";
  for (const auto& b : d.behaviours) {
    o << indent << "  behaviour " << format_double(b.value) << " {\n";
    for (const auto& r : b.rules) {
      o << indent << "    rule {";
      for (const auto& c : r.conditions) o << ' ' << condition_text(c);
      o << " do";
      for (const auto& a : r.actions) o << ' ' << action_kind_name(a.kind) << ' ' << format_double(a.percent) << '%';
      o << " }\n";
    }
    o << indent << "  }\n";
  }
  o << indent << "}";
}

}  // namespace

std::string Diagnostic::str(std::string_view file) const {
  return std::string(file) + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message;
}

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : InvalidInput(diagnostics.empty() ? std::string("parse error")
                                       : std::to_string(diagnostics[0].pos.line) + ":" +
                                             std::to_string(diagnostics[0].pos.column) + ": " +
                                             diagnostics[0].message),
      diagnostics_(std::move(diagnostics)) {}

std::string_view term_name(Term term) { return kTermNames[static_cast<int>(term)]; }

bool is_predictor(Term term) { return static_cast<int>(term) >= 5; }

const std::vector<std::string_view>& term_symbols(Term term) {
  static const std::vector<std::string_view> kNone;
  static const std::vector<std::string_view> kRegions = {"trash", "weak", "medium", "strong", "monster"};
  static const std::vector<std::string_view> kPositions = {"early", "middle", "late"};
  static const std::vector<std::string_view> kBools = {"false", "true"};
  static const std::vector<std::string_view> kImages = {"passive", "neutral", "aggressive"};
  switch (term) {
    case Term::kHandRegion: return kRegions;
    case Term::kPositionAtTable: return kPositions;
    case Term::kStealBet: return kBools;
    case Term::kImageAtTable: return kImages;
    default: return kNone;
  }
}

std::string_view action_kind_name(ActionKind kind) { return kActionNames[static_cast<int>(kind)]; }

bool is_macro(ActionKind kind) { return static_cast<int>(kind) >= 3; }

std::string_view predefined_name(Predefined tactic) { return kPredefinedNames[static_cast<int>(tactic)]; }

Archetype predefined_archetype(Predefined tactic) {
  switch (tactic) {
    case Predefined::kLooseAggressive: return Archetype::kGambler;
    case Predefined::kLoosePassive: return Archetype::kFish;
    case Predefined::kTightAggressive: return Archetype::kFox;
    case Predefined::kTightPassive: return Archetype::kRock;
  }
  return Archetype::kRock;
}

const TacticDef* Program::find_tactic(std::string_view name) const {
  for (const auto& d : tactics) {
    if (d.name == name) return &d;
  }
  for (const auto& e : strategy) {
    if (e.tactic.form == TacticRef::Form::kInline && e.tactic.definition->name == name) {
      return &*e.tactic.definition;
    }
  }
  return nullptr;
}

Program parse(std::string_view text) {
  Program p = Parser(lex(text)).program();
  resolve(p);
  return p;
}

Program parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string format(const Program& program) {
  std::ostringstream o;
  o << "strategy {\n";
  for (const auto& e : program.strategy) {
    o << "  ";
    if (e.conditions.empty()) {
      o << "always";
    } else {
      o << "when";
      for (const auto& c : e.conditions) o << ' ' << condition_text(c);
    }
    o << " use ";
    switch (e.tactic.form) {
      case TacticRef::Form::kPredefined: o << predefined_name(e.tactic.predefined); break;
      case TacticRef::Form::kNamed: o << e.tactic.name; break;
      case TacticRef::Form::kInline: format_tactic(o, *e.tactic.definition, "  "); break;
    }
    o << '\n';
  }
  o << "}\n";
  for (const auto& d : program.tactics) {
    o << '\n';
    format_tactic(o, d, "");
    o << '\n';
  }
  return o.str();
}

std::vector<Diagnostic> validate(const Program& program) {
  std::vector<Diagnostic> out;
  auto check_tactic = [&](const TacticDef& d) {
    std::size_t rules = 0;
    for (const auto& b : d.behaviours) {
      rules += b.rules.size();
      for (const auto& r : b.rules) {
        double sum = 0;
        for (const auto& a : r.actions) sum += a.percent;
        if (sum > 100.0 + 1e-9) {
          out.push_back({r.pos, "action percentages sum to " + format_double(sum) + "%, over 100%"});
        }
      }
    }
    if (rules == 0) out.push_back({d.pos, "tactic '" + d.name + "' has no rules"});
  };
  std::optional<Position> unconditional;
  for (const auto& e : program.strategy) {
    if (unconditional) {
      out.push_back({e.pos, "unreachable: an earlier entry at line " + std::to_string(unconditional->line) +
                                " is always active"});
    } else if (e.conditions.empty()) {
      unconditional = e.pos;
    }
    if (e.tactic.form == TacticRef::Form::kInline) check_tactic(*e.tactic.definition);
  }
  for (const auto& d : program.tactics) check_tactic(d);
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::pair(a.pos.line, a.pos.column) < std::pair(b.pos.line, b.pos.column);
  });
  return out;
}

}  // namespace holdem::pokerlang
