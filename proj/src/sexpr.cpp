#include "lama/sexpr.hpp"

#include "lama/error.hpp"

#include <cctype>

namespace lama {

namespace {

void render(const Sexpr& s, std::string& out) {
  if (s.is_atom) {
    out += s.atom;
    return;
  }
  out += '(';
  for (std::size_t i = 0; i < s.list.size(); ++i) {
    if (i) out += ' ';
    render(s.list[i], out);
  }
  out += ')';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

class Reader {
 public:
  explicit Reader(std::string_view t) : t_(t) {}

  Sexpr read() {
    skip();
    if (i_ >= t_.size()) throw SolverError("unexpected end of solver output");
    if (t_[i_] == ')') throw SolverError("unbalanced ')' in solver output");
    if (t_[i_] == '(') {
      ++i_;
      std::vector<Sexpr> items;
      for (;;) {
        skip();
        if (i_ >= t_.size()) throw SolverError("unterminated list in solver output");
        if (t_[i_] == ')') {
          ++i_;
          return Sexpr::make_list(std::move(items));
        }
        items.push_back(read());
      }
    }
    std::size_t start = i_;
    if (t_[i_] == '"') {
      ++i_;
      while (i_ < t_.size()) {
        if (t_[i_] == '"') {
          if (i_ + 1 < t_.size() && t_[i_ + 1] == '"') {
            i_ += 2;
            continue;
          }
          break;
        }
        ++i_;
      }
      if (i_ >= t_.size()) throw SolverError("unterminated string in solver output");
      ++i_;
    } else if (t_[i_] == '|') {
      ++i_;
      while (i_ < t_.size() && t_[i_] != '|') ++i_;
      if (i_ >= t_.size()) throw SolverError("unterminated symbol in solver output");
      ++i_;
    } else {
      while (i_ < t_.size() && !is_space(t_[i_]) && t_[i_] != '(' && t_[i_] != ')') ++i_;
    }
    return Sexpr(std::string(t_.substr(start, i_ - start)));
  }

  void skip() {
    while (i_ < t_.size()) {
      if (is_space(t_[i_])) {
        ++i_;
      } else if (t_[i_] == ';') {
        while (i_ < t_.size() && t_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  std::size_t pos() const { return i_; }

 private:
  std::string_view t_;
  std::size_t i_ = 0;
};

}  // namespace

std::string Sexpr::str() const {
  std::string out;
  render(*this, out);
  return out;
}

Sexpr app(Sexpr head, std::vector<Sexpr> args) {
  std::vector<Sexpr> items;
  items.reserve(args.size() + 1);
  items.push_back(std::move(head));
  for (auto& a : args) items.push_back(std::move(a));
  return Sexpr::make_list(std::move(items));
}

Sexpr parse_sexpr(std::string_view text) {
  Reader r(text);
  Sexpr s = r.read();
  r.skip();
  if (r.pos() != text.size()) throw SolverError("trailing characters in solver output");
  return s;
}

std::size_t sexpr_end(std::string_view text) {
  constexpr auto npos = std::string_view::npos;
  std::size_t i = 0;
  while (i < text.size() && is_space(text[i])) ++i;
  if (i >= text.size()) return npos;
  auto quoted_end = [&](std::size_t at) -> std::size_t {
    std::size_t j = text.find(text[at], at + 1);
    return j == npos ? npos : j + 1;
  };
  if (text[i] != '(') {
    if (text[i] == '"' || text[i] == '|') return quoted_end(i);
    while (i < text.size() && !is_space(text[i]) && text[i] != '(' && text[i] != ')') ++i;
    return i < text.size() ? i : npos;
  }
  int depth = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '"' || c == '|') {
      i = quoted_end(i);
      if (i == npos) return npos;
      continue;
    }
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '(') ++depth;
    if (c == ')' && --depth == 0) return i + 1;
    ++i;
  }
  return npos;
}

Sexpr mk_and(std::vector<Sexpr> xs) {
  std::vector<Sexpr> kept;
  for (auto& x : xs) {
    if (x.is("true")) continue;
    if (x.is("false")) return Sexpr("false");
    kept.push_back(std::move(x));
  }
  if (kept.empty()) return Sexpr("true");
  if (kept.size() == 1) return kept.front();
  return app("and", std::move(kept));
}

Sexpr mk_or(std::vector<Sexpr> xs) {
  std::vector<Sexpr> kept;
  for (auto& x : xs) {
    if (x.is("false")) continue;
    if (x.is("true")) return Sexpr("true");
    kept.push_back(std::move(x));
  }
  if (kept.empty()) return Sexpr("false");
  if (kept.size() == 1) return kept.front();
  return app("or", std::move(kept));
}

Sexpr mk_not(Sexpr x) {
  if (x.is("true")) return Sexpr("false");
  if (x.is("false")) return Sexpr("true");
  return app("not", {std::move(x)});
}

Sexpr mk_implies(Sexpr a, Sexpr b) {
  if (a.is("true")) return b;
  if (a.is("false") || b.is("true")) return Sexpr("true");
  return app("=>", {std::move(a), std::move(b)});
}

Sexpr mk_eq(Sexpr a, Sexpr b) { return app("=", {std::move(a), std::move(b)}); }

Sexpr mk_ite(Sexpr c, Sexpr t, Sexpr e) {
  if (c.is("true")) return t;
  if (c.is("false")) return e;
  return app("ite", {std::move(c), std::move(t), std::move(e)});
}

}  // namespace lama
