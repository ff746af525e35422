#include "netglm/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <tuple>

#include "netglm/error.hpp"

namespace netglm {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

bool is_identifier(const std::string& s) {
  if (s.empty() || !ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), ident_char);
}

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Value {
  enum Kind { string, number, ident } kind;
  std::string text;
  double number_value = 0.0;
  std::size_t offset = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const TermRegistry& reg) : s_(text), reg_(reg) {}

  ModelSpec run() {
    ModelSpec spec;
    skip_ws();
    if (pos_ >= s_.size()) fail("empty formula");
    // Optional left-hand side "data ~" or a bare "~".
    {
      std::size_t save = pos_;
      if (ident_start(peek())) {
        read_ident();
        skip_ws();
        if (peek() != '~') pos_ = save;
      }
      if (peek() == '~') {
        ++pos_;
        skip_ws();
      }
    }
    std::vector<std::size_t> starts;
    while (true) {
      skip_ws();
      starts.push_back(pos_);
      spec.terms.push_back(parse_term());
      skip_ws();
      if (pos_ >= s_.size()) break;
      if (peek() != '+') fail("expected '+' between terms");
      ++pos_;
    }
    for (std::size_t a = 0; a < spec.terms.size(); ++a)
      for (std::size_t b = 0; b < a; ++b)
        if (same_term(spec.terms[a], spec.terms[b]))
          throw FormulaError("duplicate term '" + spec.terms[a].label() + "'", starts[a]);
    return spec;
  }

 private:
  static bool same_term(const TermInstance& a, const TermInstance& b) {
    return std::tie(a.name, a.mode, a.covariate, a.decay, a.type) ==
           std::tie(b.name, b.mode, b.covariate, b.decay, b.type);
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  [[noreturn]] void fail(const std::string& msg) const { throw FormulaError(msg, pos_); }
  [[noreturn]] static void fail_at(const std::string& msg, std::size_t at) { throw FormulaError(msg, at); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string read_ident() {
    std::size_t b = pos_;
    if (!ident_start(peek())) fail("expected identifier");
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  Value read_value() {
    skip_ws();
    Value v;
    v.offset = pos_;
    char c = peek();
    if (c == '"' || c == '\'') {
      ++pos_;
      std::size_t b = pos_;
      while (pos_ < s_.size() && s_[pos_] != c) ++pos_;
      if (pos_ >= s_.size()) fail_at("unterminated string", v.offset);
      v.kind = Value::string;
      v.text = std::string(s_.substr(b, pos_ - b));
      ++pos_;
      return v;
    }
    if (ident_start(c)) {
      v.kind = Value::ident;
      v.text = read_ident();
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
      std::size_t b = pos_;
      if (c == '-' || c == '+') ++pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      std::string_view num = s_.substr(b, pos_ - b);
      if (!num.empty() && num[0] == '+') num.remove_prefix(1);
      double d = 0.0;
      auto r = std::from_chars(num.data(), num.data() + num.size(), d);
      if (r.ec != std::errc() || r.ptr != num.data() + num.size()) fail_at("malformed number", b);
      v.kind = Value::number;
      v.number_value = d;
      v.text = std::string(s_.substr(b, pos_ - b));
      return v;
    }
    fail("expected a value (string, number or identifier)");
  }

  TermInstance parse_term() {
    std::size_t at = pos_;
    if (!ident_start(peek())) fail("expected term name");
    TermInstance t;
    t.name = read_ident();
    const TermTraits* tr = reg_.find(t.name);
    if (!tr) fail_at("unknown term '" + t.name + "'", at);
    t.mode = tr->default_mode;
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      skip_ws();
      if (peek() == ')') {
        ++pos_;
      } else {
        while (true) {
          skip_ws();
          std::size_t arg_at = pos_;
          std::string key = read_ident();
          skip_ws();
          if (peek() != '=') fail("expected '=' after argument name");
          ++pos_;
          Value v = read_value();
          apply_arg(t, *tr, key, v, arg_at);
          skip_ws();
          if (peek() == ',') {
            ++pos_;
            continue;
          }
          if (peek() == ')') {
            ++pos_;
            break;
          }
          fail("expected ',' or ')'");
        }
      }
    }
    if (tr->geometric && !t.decay) t.decay = kDefaultDecay;
    if (tr->typed && !t.type) t.type = PathType::otp;
    if (tr->covariate != CovariateKind::none && t.covariate.empty())
      fail_at("term '" + t.name + "' requires a data argument naming a covariate", at);
    return t;
  }

  void apply_arg(TermInstance& t, const TermTraits& tr, const std::string& key, const Value& v, std::size_t at) {
    auto text_value = [&]() {
      if (v.kind == Value::number) fail_at("argument '" + key + "' expects a name, not a number", v.offset);
      return v.text;
    };
    if (key == "mode") {
      if (t.mode_given) fail_at("repeated argument 'mode'", at);
      if (tr.modes.empty()) fail_at("term '" + t.name + "' takes no mode argument", at);
      std::string m = text_value();
      if (m != "global" && m != "local" && m != "alocal") fail_at("invalid mode '" + m + "'", v.offset);
      Mode mode = parse_mode(m);
      if (std::find(tr.modes.begin(), tr.modes.end(), mode) == tr.modes.end())
        fail_at("invalid mode '" + m + "' for term '" + t.name + "'", v.offset);
      t.mode = mode;
      t.mode_given = true;
    } else if (key == "decay") {
      if (t.decay_given) fail_at("repeated argument 'decay'", at);
      if (!tr.geometric) fail_at("term '" + t.name + "' takes no decay argument", at);
      if (v.kind != Value::number) fail_at("decay must be a number", v.offset);
      if (!(v.number_value >= 0.0) || !std::isfinite(v.number_value))
        fail_at("decay must be finite and non-negative", v.offset);
      t.decay = v.number_value;
      t.decay_given = true;
    } else if (key == "type") {
      if (t.type_given) fail_at("repeated argument 'type'", at);
      if (!tr.typed) fail_at("term '" + t.name + "' takes no type argument", at);
      std::string s = text_value();
      if (s != "OTP" && s != "ISP" && s != "OSP" && s != "ITP")
        fail_at("invalid shared-partner type '" + s + "'", v.offset);
      t.type = parse_path_type(s);
      t.type_given = true;
    } else if (key == "data") {
      if (!t.covariate.empty()) fail_at("repeated argument 'data'", at);
      if (tr.covariate == CovariateKind::none) fail_at("term '" + t.name + "' takes no data argument", at);
      std::string s = text_value();
      if (s.empty()) fail_at("empty covariate name", v.offset);
      t.covariate = s;
    } else {
      fail_at("unknown argument '" + key + "' for term '" + t.name + "'", at);
    }
  }

  std::string_view s_;
  const TermRegistry& reg_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string TermInstance::label() const {
  std::vector<std::string> args;
  if (!covariate.empty()) {
    std::string quoted = covariate.find('\'') == std::string::npos ? "'" + covariate + "'" : "\"" + covariate + "\"";
    args.push_back("data = " + (is_identifier(covariate) ? covariate : quoted));
  }
  if (mode_given) args.push_back(std::string("mode = '") + mode_name(mode) + "'");
  if (type_given && type) args.push_back(std::string("type = '") + path_type_name(*type) + "'");
  if (decay_given && decay) args.push_back("decay = " + format_double(*decay));
  if (args.empty()) return name;
  std::string s = name + "(";
  for (std::size_t k = 0; k < args.size(); ++k) s += (k ? ", " : "") + args[k];
  return s + ")";
}

bool ModelSpec::has_degrees() const {
  return std::any_of(terms.begin(), terms.end(), [](const TermInstance& t) { return t.name == "degrees"; });
}

ModelSpec parse_formula(std::string_view text, const TermRegistry& registry) {
  return Parser(text, registry).run();
}

std::string render_formula(const ModelSpec& spec) {
  std::string s;
  for (std::size_t k = 0; k < spec.terms.size(); ++k) s += (k ? " + " : "") + spec.terms[k].label();
  return s;
}

}  // namespace netglm
