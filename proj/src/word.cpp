#include "sphmach/word.hpp"

#include <algorithm>
#include <stdexcept>

namespace sphmach {

namespace {
void push_reduced(std::vector<Letter>& out, Letter x) {
  if (!out.empty() && out.back() == -x) {
    out.pop_back();
  } else {
    out.push_back(x);
  }
}
}  // namespace

Word::Word(std::vector<Letter> letters) {
  letters_.reserve(letters.size());
  for (Letter x : letters) {
    if (x == 0) {
      throw std::invalid_argument("Word: letter 0 is not a generator");
    }
    push_reduced(letters_, x);
  }
}

Word::Word(std::initializer_list<Letter> letters)
    : Word(std::vector<Letter>(letters)) {}

Word Word::inverse() const {
  Word r;
  r.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    r.letters_.push_back(-*it);
  }
  return r;
}

Word Word::pow(long k) const {
  Word base = k < 0 ? inverse() : *this;
  if (k < 0) {
    k = -k;
  }
  Word r;
  for (long i = 0; i < k; ++i) {
    r *= base;
  }
  return r;
}

Word Word::conjugate_by(Word const& w) const {
  return w.inverse() * *this * w;
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  Word r;
  r.letters_.assign(letters_.begin() + pos, letters_.begin() + pos + len);
  return r;
}

int Word::max_generator() const noexcept {
  int m = 0;
  for (Letter x : letters_) {
    m = std::max(m, x < 0 ? -x : x);
  }
  return m;
}

long Word::exponent_sum(int gen) const noexcept {
  long s = 0;
  for (Letter x : letters_) {
    if (x == gen) {
      ++s;
    } else if (x == -gen) {
      --s;
    }
  }
  return s;
}

Word& Word::operator*=(Word const& other) {
  for (Letter x : other.letters_) {
    push_reduced(letters_, x);
  }
  return *this;
}

std::strong_ordering Word::operator<=>(Word const& other) const {
  if (auto c = letters_.size() <=> other.letters_.size(); c != 0) {
    return c;
  }
  return letters_ <=> other.letters_;
}

std::size_t WordHash::operator()(Word const& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (Letter x : w.letters()) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(x));
    h *= 1099511628211ull;
  }
  return h;
}

Word substitute(Word const& w, std::span<Word const> images) {
  Word r;
  for (Letter x : w.letters()) {
    std::size_t i = static_cast<std::size_t>(x < 0 ? -x : x);
    if (i > images.size()) {
      throw std::out_of_range("substitute: generator index out of range");
    }
    r *= x < 0 ? images[i - 1].inverse() : images[i - 1];
  }
  return r;
}

CyclicReduction cyclically_reduce(Word const& w) {
  std::size_t lo = 0;
  std::size_t hi = w.size();
  while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
    ++lo;
    --hi;
  }
  return {w.subword(lo, hi - lo), w.subword(0, lo)};
}

Word rotate(Word const& w, std::size_t k) {
  if (w.empty()) {
    return w;
  }
  k %= w.size();
  std::vector<Letter> v(w.letters().begin(), w.letters().end());
  std::rotate(v.begin(), v.begin() + k, v.end());
  return Word(std::move(v));
}

Word least_rotation(Word const& w) {
  Word best = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    Word r = rotate(w, k);
    if (r < best) {
      best = std::move(r);
    }
  }
  return best;
}

Word centralizer_root(Word const& w) {
  if (w.empty()) {
    throw std::invalid_argument("centralizer_root: identity has no root");
  }
  auto [core, conj] = cyclically_reduce(w);
  std::size_t n = core.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) {
      continue;
    }
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) {
      periodic = core[i] == core[i - p];
    }
    if (periodic) {
      return conj * core.subword(0, p) * conj.inverse();
    }
  }
  return w;  // unreachable
}

std::optional<ConjugatorCoset> free_conjugator(Word const& u, Word const& v) {
  if (u.empty() || v.empty()) {
    if (u.empty() && v.empty()) {
      return ConjugatorCoset{Word(), Word(), true};
    }
    return std::nullopt;
  }
  auto cu = cyclically_reduce(u);
  auto cv = cyclically_reduce(v);
  if (cu.core.size() != cv.core.size()) {
    return std::nullopt;
  }
  std::size_t n = cu.core.size();
  for (std::size_t k = 0; k < n; ++k) {
    bool match = true;
    for (std::size_t i = 0; i < n && match; ++i) {
      match = cu.core[(i + k) % n] == cv.core[i];
    }
    if (match) {
      Word x = cu.core.subword(0, k);
      Word w0 = cu.conjugator * x * cv.conjugator.inverse();
      return ConjugatorCoset{w0, centralizer_root(v), false};
    }
  }
  return std::nullopt;
}

}  // namespace sphmach
