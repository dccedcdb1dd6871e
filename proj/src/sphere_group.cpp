#include "sphmach/sphere_group.hpp"

#include <set>
#include <stdexcept>

namespace sphmach {

SphereGroup::SphereGroup(std::vector<std::string> names,
                         std::vector<std::optional<long>> orders)
    : names_(std::move(names)), orders_(std::move(orders)) {
  if (names_.size() == 1) {
    throw std::invalid_argument("SphereGroup: n = 1 is not allowed");
  }
  if (orders_.empty()) {
    orders_.assign(names_.size(), std::nullopt);
  }
  if (orders_.size() != names_.size()) {
    throw std::invalid_argument("SphereGroup: orders length mismatch");
  }
  std::set<std::string> seen;
  for (auto const& s : names_) {
    if (s.empty() || !seen.insert(s).second) {
      throw std::invalid_argument("SphereGroup: empty or repeated name '" + s +
                                  "'");
    }
  }
}

std::optional<int> SphereGroup::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) {
      return static_cast<int>(i + 1);
    }
  }
  return std::nullopt;
}

void SphereGroup::require_orientable() const {
  for (auto const& o : orders_) {
    if (o.has_value()) {
      throw std::domain_error(
          "SphereGroup: generators of finite order are not supported");
    }
  }
}

Word SphereGroup::generator(int i) const {
  if (i < 1 || i > size()) {
    throw std::out_of_range("SphereGroup: generator index out of range");
  }
  return Word::generator(i);
}

Word SphereGroup::relator() const {
  std::vector<Letter> v;
  for (int i = 1; i <= size(); ++i) {
    v.push_back(i);
  }
  return Word(std::move(v));
}

void SphereGroup::check_word(Word const& w) const {
  if (w.max_generator() > size()) {
    throw std::out_of_range("word uses a generator index beyond " +
                            std::to_string(size()));
  }
}

Word SphereGroup::normal_form(Word const& w) const {
  check_word(w);
  require_orientable();
  int n = size();
  if (n == 0) {
    return Word();
  }
  std::vector<Letter> last;  // (g1...g(n-1))^-1
  for (int i = n - 1; i >= 1; --i) {
    last.push_back(-i);
  }
  Word gn(last);
  Word r;
  for (Letter x : w.letters()) {
    if (x == n) {
      r *= gn;
    } else if (x == -n) {
      r *= gn.inverse();
    } else {
      r *= Word({x});
    }
  }
  return r;
}

std::string SphereGroup::format(Word const& w) const {
  if (w.empty()) {
    return "1";
  }
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k > 0) {
      s += '*';
    }
    Letter x = w[k];
    s += name(x < 0 ? -x : x);
    if (x < 0) {
      s += "^-1";
    }
  }
  return s;
}

std::string SphereGroup::pretty(Word const& w) const {
  int n = size();
  if (n < 2) {
    return format(w);
  }
  // greedy left-to-right replacement of the runs g(n-1)^-1...g1^-1 and
  // g1...g(n-1) by gn and gn^-1
  std::vector<Letter> out;
  std::size_t m = static_cast<std::size_t>(n - 1);
  std::size_t k = 0;
  while (k < w.size()) {
    bool neg = k + m <= w.size();
    bool pos = neg;
    for (std::size_t j = 0; j < m && (neg || pos); ++j) {
      if (k + j >= w.size()) {
        neg = pos = false;
        break;
      }
      neg = neg && w[k + j] == -static_cast<Letter>(m - j);
      pos = pos && w[k + j] == static_cast<Letter>(j + 1);
    }
    if (m >= 2 && neg) {
      out.push_back(n);
      k += m;
    } else if (m >= 2 && pos) {
      out.push_back(-n);
      k += m;
    } else {
      out.push_back(w[k]);
      ++k;
    }
  }
  return format(Word(std::move(out)));
}

ConjClass ConjClass::of(SphereGroup const& G, Word const& w,
                        bool sign_insensitive) {
  ConjClass c;
  c.unsigned_ = sign_insensitive;
  Word core = cyclically_reduce(G.normal_form(w)).core;
  c.rep_ = least_rotation(core);
  if (sign_insensitive) {
    Word inv = least_rotation(core.inverse());
    if (inv < c.rep_) {
      c.rep_ = std::move(inv);
    }
  }
  return c;
}

ConjClass ConjClass::inverse() const {
  ConjClass c;
  c.unsigned_ = unsigned_;
  c.rep_ = unsigned_ ? rep_ : least_rotation(rep_.inverse());
  return c;
}

ConjClass ConjClass::unsigned_class() const {
  ConjClass c;
  c.unsigned_ = true;
  c.rep_ = rep_;
  Word inv = least_rotation(rep_.inverse());
  if (inv < c.rep_) {
    c.rep_ = std::move(inv);
  }
  return c;
}

std::optional<ConjugatorCoset> is_conjugate(Word const& u, Word const& v,
                                            SphereGroup const& G) {
  return free_conjugator(G.normal_form(u), G.normal_form(v));
}

std::optional<Word> simultaneous_conjugator(std::vector<Word> const& us,
                                            std::vector<Word> const& vs,
                                            SphereGroup const& G) {
  if (us.size() != vs.size()) {
    throw std::invalid_argument("simultaneous_conjugator: length mismatch");
  }
  // current solution set: whole group, or rep * <root> (root may be 1)
  bool whole = true;
  Word rep;
  Word root;
  for (std::size_t i = 0; i < us.size(); ++i) {
    Word u = G.normal_form(us[i]);
    Word v = G.normal_form(vs[i]);
    auto c = free_conjugator(u, v);
    if (!c) {
      return std::nullopt;
    }
    if (c->whole_group) {
      continue;
    }
    if (whole) {
      whole = false;
      rep = c->representative;
      root = c->root;
      continue;
    }
    Word x = u.conjugate_by(rep);
    if (root.empty() || root == c->root || root == c->root.inverse()) {
      if (x != v) {
        return std::nullopt;
      }
      continue;
    }
    // at most one power of root works
    long core = static_cast<long>(cyclically_reduce(root).core.size());
    long bound = static_cast<long>(x.size() + v.size()) / core + 2;
    std::optional<long> hit;
    for (long k = 0; k <= bound && !hit; ++k) {
      for (long s : {k, -k}) {
        if (x.conjugate_by(root.pow(s)) == v) {
          hit = s;
          break;
        }
      }
    }
    if (!hit) {
      return std::nullopt;
    }
    rep = rep * root.pow(*hit);
    root = Word();
  }
  return whole ? Word() : rep;
}

std::optional<int> peripheral_index(SphereGroup const& G, ConjClass const& c) {
  for (int i = 1; i <= G.size(); ++i) {
    ConjClass p = ConjClass::of(G, G.generator(i), c.sign_insensitive());
    if (p == c) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace sphmach
