#include "sphmach/pillowcase.hpp"

#include <stdexcept>

namespace sphmach {

Matrix2 operator*(Matrix2 const& a, Matrix2 const& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

namespace {

// Index-2 subgroup of words of even length, coset representatives 1 and x1.
// Schreier generators: x2/x1, x3/x1 from the even coset and x1*x1, x1*x2,
// x1*x3 from the odd one.
int schreier_index(int parity, int gen) {
  if (parity == 0) {
    return gen == 1 ? -1 : gen - 2;
  }
  return gen + 1;
}

Word schreier_word(int index) {
  if (index < 2) {
    return Word({index + 2, -1});
  }
  return Word({1, index - 1});
}

BigInt abs_sum(Matrix2 const& m) {
  BigInt s = 0;
  for (auto const& x : m) {
    s += abs(x);
  }
  return s;
}

bool is_plus_minus_identity(Matrix2 const& m) {
  return m[1] == 0 && m[2] == 0 && m[0] == m[3] && abs(m[0]) == 1;
}

}  // namespace

TorusCoverHomology::TorusCoverHomology(SphereGroup const& G) : G_(G) {
  if (G.size() != 4) {
    throw std::invalid_argument(
        "TorusCoverHomology: needs a sphere group on four generators");
  }
  // lifts of the squares of the peripheral loops, from both sheets
  std::vector<Vec> rel;
  for (int i = 1; i <= 4; ++i) {
    Word sq = G.generator(i).pow(2);
    rel.push_back(abelianize(sq));
    rel.push_back(abelianize(Word({1}) * sq * Word({-1})));
  }
  // column reduction R*Q = [H | 0], tracking Q and its inverse
  std::array<Vec, kRank> Qi;
  for (int a = 0; a < kRank; ++a) {
    for (int b = 0; b < kRank; ++b) {
      Q_[a][b] = a == b ? 1 : 0;
      Qi[a][b] = a == b ? 1 : 0;
    }
  }
  auto col_sub = [&](int j, int c, BigInt const& q) {
    // column j -= q * column c
    for (auto& r : rel) {
      r[j] -= q * r[c];
    }
    for (auto& r : Q_) {
      r[j] -= q * r[c];
    }
    for (int b = 0; b < kRank; ++b) {
      Qi[c][b] += q * Qi[j][b];
    }
  };
  auto col_swap = [&](int j, int c) {
    for (auto& r : rel) {
      std::swap(r[j], r[c]);
    }
    for (auto& r : Q_) {
      std::swap(r[j], r[c]);
    }
    std::swap(Qi[j], Qi[c]);
  };
  int col = 0;
  for (auto& row : rel) {
    if (col == kRank) {
      break;
    }
    for (;;) {
      int best = -1;
      for (int j = col; j < kRank; ++j) {
        if (row[j] != 0 && (best < 0 || abs(row[j]) < abs(row[best]))) {
          best = j;
        }
      }
      if (best < 0) {
        break;
      }
      if (best != col) {
        col_swap(best, col);
      }
      bool done = true;
      for (int j = col + 1; j < kRank; ++j) {
        if (row[j] != 0) {
          col_sub(j, col, row[j] / row[col]);
          done = done && row[j] == 0;
        }
      }
      if (done) {
        ++col;
        break;
      }
    }
  }
  if (col != 3) {
    throw std::logic_error("TorusCoverHomology: unexpected relation rank");
  }
  // torsion-free quotient iff the 3x3 minors of H have gcd 1
  BigInt g = 0;
  for (std::size_t a = 0; a < rel.size(); ++a) {
    for (std::size_t b = a + 1; b < rel.size(); ++b) {
      for (std::size_t c = b + 1; c < rel.size(); ++c) {
        auto const& x = rel[a];
        auto const& y = rel[b];
        auto const& z = rel[c];
        BigInt det = x[0] * (y[1] * z[2] - y[2] * z[1]) -
                     x[1] * (y[0] * z[2] - y[2] * z[0]) +
                     x[2] * (y[0] * z[1] - y[1] * z[0]);
        g = gcd(g, abs(det));
      }
    }
  }
  if (g != 1) {
    throw std::logic_error("TorusCoverHomology: quotient has torsion");
  }
  for (int j = 0; j < 2; ++j) {
    Word w;
    for (int k = 0; k < kRank; ++k) {
      long e = static_cast<long>(Qi[3 + j][k]);
      w *= schreier_word(k).pow(e);
    }
    lift_[j] = w;
  }
}

TorusCoverHomology::Vec TorusCoverHomology::abelianize(Word const& w) const {
  Vec v{};
  int parity = 0;
  Word nf = G_.normal_form(w);
  for (Letter x : nf.letters()) {
    if (x > 0) {
      int k = schreier_index(parity, x);
      if (k >= 0) {
        v[k] += 1;
      }
      parity ^= 1;
    } else {
      parity ^= 1;
      int k = schreier_index(parity, -x);
      if (k >= 0) {
        v[k] -= 1;
      }
    }
  }
  if (parity != 0) {
    throw std::logic_error("TorusCoverHomology: word not in the cover");
  }
  return v;
}

std::array<BigInt, 2> TorusCoverHomology::project(Vec const& v) const {
  std::array<BigInt, 2> out{0, 0};
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < kRank; ++k) {
      out[j] += v[k] * Q_[k][3 + j];
    }
  }
  return out;
}

Matrix2 TorusCoverHomology::matrix(Automorphism const& f) const {
  auto r0 = project(abelianize(f.apply(lift_[0])));
  auto r1 = project(abelianize(f.apply(lift_[1])));
  return {r0[0], r0[1], r1[0], r1[1]};
}

std::optional<Word> TorusCoverHomology::express(
    Automorphism const& f, std::vector<Automorphism> const& gens,
    std::size_t max_steps) const {
  // peeling gens[x]^e off the left multiplies the matrix by that of its
  // inverse on the right
  std::vector<std::pair<Letter, Matrix2>> moves;
  for (std::size_t x = 0; x < gens.size(); ++x) {
    Letter l = static_cast<Letter>(x + 1);
    moves.emplace_back(l, matrix(inverse(gens[x], G_)));
    moves.emplace_back(-l, matrix(gens[x]));
  }
  Matrix2 m = matrix(f);
  std::vector<Letter> letters;
  // Single moves first; when none shrinks the matrix, look a few letters
  // ahead (needed when the generators are not a free basis of the image).
  constexpr std::size_t kLookahead = 3;
  for (std::size_t step = 0; !is_plus_minus_identity(m); ++step) {
    if (step == max_steps) {
      return std::nullopt;
    }
    BigInt current = abs_sum(m);
    std::optional<std::vector<std::size_t>> best;
    BigInt best_size = current;
    std::vector<std::size_t> path;
    auto search = [&](auto&& self, Matrix2 const& x, std::size_t depth) -> void {
      if (depth == 0) {
        BigInt s = abs_sum(x);
        if (s < best_size) {
          best_size = s;
          best = path;
        }
        return;
      }
      for (std::size_t i = 0; i < moves.size(); ++i) {
        if (!path.empty() && moves[path.back()].first == -moves[i].first) {
          continue;
        }
        path.push_back(i);
        self(self, x * moves[i].second, depth - 1);
        path.pop_back();
      }
    };
    for (std::size_t depth = 1; depth <= kLookahead && !best; ++depth) {
      search(search, m, depth);
    }
    if (!best) {
      return std::nullopt;
    }
    for (std::size_t i : *best) {
      m = m * moves[i].second;
      letters.push_back(moves[i].first);
    }
  }
  Word w(letters);
  Automorphism g = Automorphism::identity(G_);
  for (Letter l : w.letters()) {
    g = compose(g, l > 0 ? gens[l - 1] : inverse(gens[-l - 1], G_));
  }
  if (!outer_equal(g, f, G_)) {
    return std::nullopt;
  }
  return w;
}

}  // namespace sphmach
