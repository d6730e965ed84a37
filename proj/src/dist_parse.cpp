// Copyright 2026 The Coalesce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <cmath>
#include <charconv>
#include <string>

#include "coalesce/dist.hpp"
#include "coalesce/error.hpp"

namespace coalesce {

namespace {

const std::vector<std::string>& DistNames() {
  static const std::vector<std::string> names = {
      "const", "uniform", "exp",   "sexp",  "pareto", "poisson", "geom",
      "sum",   "compound", "shift", "scale", "mix"};
  return names;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  DistSpec Parse() {
    DistSpec d = Dist();
    SkipWs();
    if (pos_ != s_.size()) Fail({"end of input"});
    return d;
  }

 private:
  void SkipWs() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  [[noreturn]] void Fail(std::vector<std::string> expected) {
    std::string what = "parse error at offset " + std::to_string(pos_) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) what += i + 1 == expected.size() ? " or " : ", ";
      what += expected[i];
    }
    throw ParseError(pos_, std::move(expected), what);
  }

  bool Accept(char c) {
    SkipWs();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void Expect(char c) {
    if (!Accept(c)) Fail({std::string("'") + c + "'"});
  }

  bool AtLetter() {
    SkipWs();
    return pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]));
  }

  double Number() {
    SkipWs();
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    const char* p = begin;
    if (p < end && *p == '+') ++p;
    double v = 0;
    auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc() || !std::isfinite(v)) Fail({"number"});
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return v;
  }

  std::int64_t Integer() {
    const std::size_t at = pos_;
    const double v = Number();
    if (v != std::floor(v) || v < 1 || v > 9e15) {
      pos_ = at;
      SkipWs();
      Fail({"positive integer"});
    }
    return static_cast<std::int64_t>(v);
  }

  DistSpec Dist() {
    SkipWs();
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) {
      ++end;
    }
    const std::string name(s_.substr(start, end - start));
    bool known = false;
    for (const auto& n : DistNames()) known = known || n == name;
    if (!known) Fail(DistNames());
    pos_ = end;
    Expect('(');
    try {
      DistSpec d = Body(name);
      Expect(')');
      return d;
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(start, {}, "invalid " + name + " at offset " +
                                      std::to_string(start) + ": " + e.what());
    }
  }

  DistSpec Body(const std::string& name) {
    if (name == "const") return DistSpec::Const(Number());
    if (name == "uniform") {
      const double a = Number();
      Expect(',');
      return DistSpec::Uniform(a, Number());
    }
    if (name == "exp") return DistSpec::Exp(Number());
    if (name == "sexp") return DistSpec::ShiftedExp(Number());
    if (name == "pareto") return DistSpec::Pareto(Number());
    if (name == "poisson") return DistSpec::Poisson(Number());
    if (name == "geom") return DistSpec::Geom(Number());
    if (name == "sum") {
      if (AtLetter()) {
        std::vector<DistSpec> parts{Dist()};
        while (Accept(',')) parts.push_back(Dist());
        return DistSpec::Sum(std::move(parts));
      }
      const std::int64_t k = Integer();
      Expect(',');
      return DistSpec::SumK(k, Dist());
    }
    if (name == "compound") {
      DistSpec count = Dist();
      Expect(',');
      return DistSpec::Compound(std::move(count), Dist());
    }
    if (name == "shift" || name == "scale") {
      const double c = Number();
      Expect(',');
      DistSpec child = Dist();
      return name == "shift" ? DistSpec::Shift(c, std::move(child))
                             : DistSpec::Scale(c, std::move(child));
    }
    std::vector<std::pair<double, DistSpec>> parts;
    do {
      const double w = Number();
      Expect(':');
      parts.emplace_back(w, Dist());
    } while (Accept(','));
    return DistSpec::Mixture(std::move(parts));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

DistSpec ParseDist(std::string_view text) { return Parser(text).Parse(); }

}  // namespace coalesce
