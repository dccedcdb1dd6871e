#include "sphmach/multicurve.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sphmach/folding.hpp"

namespace sphmach {

std::string to_string(Rational const& r) {
  if (denominator(r) == 1) {
    return numerator(r).str();
  }
  return numerator(r).str() + "/" + denominator(r).str();
}

// ---------------------------------------------------------------- curves

std::optional<int> Multicurve::find(Word const& w) const {
  ConjClass c = ConjClass::of(group, w, true);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == c) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

Multicurve make_multicurve(SphereGroup const& G, std::vector<Word> const& reps,
                           std::vector<std::string> names) {
  Multicurve C;
  C.group = G;
  if (!names.empty() && names.size() != reps.size()) {
    throw std::invalid_argument("multicurve: one name per curve");
  }
  for (std::size_t i = 0; i < reps.size(); ++i) {
    ConjClass c = ConjClass::of(G, reps[i], true);
    std::string label = names.empty() ? G.format(reps[i]) : names[i];
    if (c.trivial()) {
      throw std::invalid_argument("multicurve: curve " + label +
                                  " is trivial");
    }
    ConjClass signed_class = ConjClass::of(G, reps[i]);
    if (peripheral_index(G, signed_class) ||
        peripheral_index(G, signed_class.inverse())) {
      throw std::invalid_argument("multicurve: curve " + label +
                                  " is peripheral");
    }
    if (std::find(C.classes.begin(), C.classes.end(), c) != C.classes.end()) {
      throw std::invalid_argument("multicurve: curve " + label +
                                  " is repeated");
    }
    C.reps.push_back(G.normal_form(reps[i]));
    C.classes.push_back(c);
    C.names.push_back(label);
  }
  return C;
}

std::vector<std::vector<LiftTag>> classify_lifts(SphereMachine const& M,
                                                 Multicurve const& C,
                                                 Multicurve const& D) {
  if (!(C.group == M.source()) || !(D.group == M.target())) {
    throw std::invalid_argument("classify_lifts: groups do not match");
  }
  SphereGroup const& H = M.target();
  std::vector<std::vector<LiftTag>> out;
  for (auto const& c : C.reps) {
    std::vector<LiftTag> tags;
    for (auto const& l : multiset_of_lifts(M, c)) {
      LiftTag t;
      t.degree = l.degree;
      t.cls = l.cls;
      if (l.cls.trivial()) {
        t.kind = LiftKind::trivial;
      } else if (auto j = D.find(l.cls.representative())) {
        t.kind = LiftKind::curve;
        t.index = *j;
        t.sign = ConjClass::of(H, D.reps[*j]) == l.cls ? 1 : -1;
      } else if (auto p = peripheral_index(H, l.cls)) {
        t.kind = LiftKind::peripheral;
        t.index = *p;
      } else if (auto q = peripheral_index(H, l.cls.inverse())) {
        t.kind = LiftKind::peripheral;
        t.index = *q;
        t.sign = -1;
      }
      tags.push_back(std::move(t));
    }
    out.push_back(std::move(tags));
  }
  return out;
}

// ---------------------------------------------------------------- matrices

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1;
  }
  return m;
}

RationalMatrix RationalMatrix::from_rows(
    std::vector<std::vector<Rational>> const& r) {
  RationalMatrix m(r.size(), r.empty() ? 0 : r[0].size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].size() != m.cols) {
      throw std::invalid_argument("matrix: ragged rows");
    }
    for (std::size_t j = 0; j < m.cols; ++j) {
      m(i, j) = r[i][j];
    }
  }
  return m;
}

RationalMatrix operator*(RationalMatrix const& a, RationalMatrix const& b) {
  if (a.cols != b.rows) {
    throw std::invalid_argument("matrix: dimension mismatch");
  }
  RationalMatrix m(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      if (a(i, k) == 0) {
        continue;
      }
      for (std::size_t j = 0; j < b.cols; ++j) {
        m(i, j) += a(i, k) * b(k, j);
      }
    }
  }
  return m;
}

RationalMatrix operator-(RationalMatrix const& a, RationalMatrix const& b) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw std::invalid_argument("matrix: dimension mismatch");
  }
  RationalMatrix m = a;
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    m.data[i] -= b.data[i];
  }
  return m;
}

std::string format_matrix(RationalMatrix const& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows; ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.cols; ++j) {
      s += (j ? "," : "") + to_string(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

nlohmann::json matrix_json(RationalMatrix const& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols; ++j) {
      row.push_back(to_string(m(i, j)));
    }
    rows.push_back(row);
  }
  return rows;
}

RationalMatrix thurston_matrix(SphereMachine const& M, Multicurve const& C,
                               Multicurve const& D) {
  auto tags = classify_lifts(M, C, D);
  RationalMatrix T(D.size(), C.size());
  for (std::size_t g = 0; g < tags.size(); ++g) {
    for (auto const& t : tags[g]) {
      if (t.kind == LiftKind::curve) {
        T(t.index, g) += Rational(1, static_cast<long>(t.degree));
      }
    }
  }
  return T;
}

// ---------------------------------------------------------------- spectrum

namespace {

using Poly = std::vector<Rational>;  // lowest degree first

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) {
    p.pop_back();
  }
}

Poly derivative(Poly const& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) {
    d.push_back(p[i] * static_cast<long>(i));
  }
  trim(d);
  return d;
}

// quotient and remainder of a by b (b nonzero)
std::pair<Poly, Poly> divide(Poly a, Poly const& b) {
  trim(a);
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t shift = a.size() - b.size();
    Rational c = a.back() / b.back();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[i + shift] -= c * b[i];
    }
    trim(a);
  }
  trim(q);
  return {q, a};
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = divide(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Rational eval(Poly const& p, Rational const& x) {
  Rational r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    r = r * x + *it;
  }
  return r;
}

int sign(Rational const& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

std::vector<Poly> sturm_chain(Poly const& p) {
  std::vector<Poly> chain{p, derivative(p)};
  while (!chain.back().empty()) {
    Poly r = divide(chain[chain.size() - 2], chain.back()).second;
    for (auto& c : r) {
      c = -c;
    }
    if (r.empty()) {
      break;
    }
    chain.push_back(std::move(r));
  }
  if (chain.back().empty()) {
    chain.pop_back();
  }
  return chain;
}

int variations(std::vector<int> const& signs) {
  int v = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) {
      continue;
    }
    if (last != 0 && s != last) {
      ++v;
    }
    last = s;
  }
  return v;
}

int variations_at(std::vector<Poly> const& chain, Rational const& x) {
  std::vector<int> s;
  for (auto const& p : chain) {
    s.push_back(sign(eval(p, x)));
  }
  return variations(s);
}

int variations_at_infinity(std::vector<Poly> const& chain) {
  std::vector<int> s;
  for (auto const& p : chain) {
    s.push_back(sign(p.back()));
  }
  return variations(s);
}

}  // namespace

std::vector<Rational> characteristic_polynomial(RationalMatrix const& A) {
  if (A.rows != A.cols) {
    throw std::invalid_argument("characteristic_polynomial: not square");
  }
  std::size_t n = A.rows;
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  RationalMatrix Mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix next = A * Mk;
    for (std::size_t i = 0; i < n; ++i) {
      next(i, i) += c[n - k + 1];
    }
    Mk = std::move(next);
    RationalMatrix AM = A * Mk;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      tr += AM(i, i);
    }
    c[n - k] = -tr / static_cast<long>(k);
  }
  return c;
}

ObstructionReport is_obstructed(RationalMatrix const& T) {
  if (T.rows != T.cols) {
    throw std::invalid_argument("is_obstructed: matrix is not square");
  }
  for (auto const& x : T.data) {
    if (x < 0) {
      throw std::invalid_argument("is_obstructed: negative entry");
    }
  }
  ObstructionReport r;
  r.charpoly = characteristic_polynomial(T);
  if (T.rows == 0) {
    return r;
  }
  Poly p = r.charpoly;
  Poly g = gcd(p, derivative(p));
  Poly sq = g.size() > 1 ? divide(p, g).first : p;
  auto chain = sturm_chain(sq);
  // roots in (a, inf)
  auto above = [&](Rational const& a) {
    return variations_at(chain, a) - variations_at_infinity(chain);
  };
  r.obstructed = eval(sq, 1) == 0 || above(1) > 0;
  // for a nonnegative matrix the spectral radius is the largest real root
  Rational bound = 1;
  for (std::size_t i = 0; i + 1 < sq.size(); ++i) {
    Rational c = 1 + abs(sq[i] / sq.back());
    bound = std::max(bound, c);
  }
  if (above(0) == 0) {
    return r;  // no positive root, radius 0
  }
  // largest root stays in (lo, hi]
  Rational lo = 0;
  Rational hi = bound;
  for (int it = 0; it < 60; ++it) {
    Rational mid = (lo + hi) / 2;
    if (eval(sq, mid) == 0 && above(mid) == 0) {
      lo = hi = mid;
      break;
    }
    if (above(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.perron_low = static_cast<double>(lo);
  r.perron_high = static_cast<double>(hi);
  return r;
}

// ---------------------------------------------------------------- twists

std::optional<Automorphism> interval_twist(SphereGroup const& G,
                                           Word const& curve) {
  Word w = G.normal_form(curve);
  int n = G.size();
  for (int i = 1; i <= n; ++i) {
    Word prod;
    for (int j = i; j <= n; ++j) {
      prod *= G.generator(j);
      if (j > i && G.normal_form(prod) == w) {
        return dehn_twist(i, j, G);
      }
    }
  }
  return std::nullopt;
}

Automorphism multitwist(std::vector<Automorphism> const& twists,
                        std::vector<long> const& exponents,
                        SphereGroup const& G) {
  Automorphism out = Automorphism::identity(G);
  for (std::size_t j = 0; j < twists.size(); ++j) {
    long e = exponents.at(j);
    Automorphism step = e < 0 ? inverse(twists[j], G) : twists[j];
    for (long k = 0; k < (e < 0 ? -e : e); ++k) {
      out = compose(out, step);
    }
  }
  return out;
}

TwistLiftReport twist_lift_check(MappingClassBiset const& mcb,
                                 RationalMatrix const& T) {
  TwistLiftReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.problems.push_back(std::move(msg));
  };
  if (!mcb.base || T.rows != T.cols || T.cols != mcb.gen_maps.size()) {
    throw std::invalid_argument(
        "twist_lift_check: need one twist per curve and a square matrix");
  }
  SphereGroup const& H = mcb.base->target();
  if (!(mcb.base->source() == H)) {
    throw std::invalid_argument("twist_lift_check: machine is not dynamical");
  }
  for (std::size_t e = 0; e < T.cols; ++e) {
    std::string name = mcb.gen_names[e];
    auto const& tr = mcb.table[e][0];
    if (tr.next != 0) {
      fail("twist " + name + " moves the base machine to another left orbit");
      continue;
    }
    std::vector<long> exps;
    bool integral = true;
    for (std::size_t d = 0; d < T.rows; ++d) {
      if (denominator(T(d, e)) != 1) {
        integral = false;
        break;
      }
      exps.push_back(static_cast<long>(numerator(T(d, e))));
    }
    if (!integral) {
      fail("column " + name + " of the matrix is not integral");
      continue;
    }
    if (!tr.knitting) {
      fail("no knitting recorded for " + name);
      continue;
    }
    if (!outer_equal(*tr.knitting, multitwist(mcb.gen_maps, exps, H), H)) {
      fail("knitting of " + name + " is not the twist vector of its column");
    }
  }
  return rep;
}

// ---------------------------------------------------------------- affine

std::string Affine::str() const {
  std::string s;
  auto term = [&](Rational c, std::string const& name) {
    if (c == 0) {
      return;
    }
    bool neg = c < 0;
    if (neg) {
      c = -c;
    }
    s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    if (name.empty()) {
      s += to_string(c);
    } else {
      s += (c == 1 ? "" : to_string(c) + "*") + name;
    }
  };
  for (auto const& [name, c] : coeffs) {
    term(c, name);
  }
  term(constant, "");
  return s.empty() ? "0" : s;
}

Affine parse_affine(std::string const& text) {
  Affine a;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
  };
  auto bad = [&] {
    return std::invalid_argument("cannot parse affine expression '" + text +
                                 "'");
  };
  bool first = true;
  for (skip(); i < text.size(); skip()) {
    int sgn = 1;
    if (text[i] == '+' || text[i] == '-') {
      sgn = text[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else if (!first) {
      throw bad();
    }
    first = false;
    Rational coef = 1;
    bool have_num = false;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        ++j;
      }
      coef = Rational(boost::multiprecision::cpp_int(text.substr(i, j - i)));
      i = j;
      have_num = true;
      skip();
      if (i < text.size() && text[i] == '/') {
        ++i;
        skip();
        std::size_t k = i;
        while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          ++k;
        }
        if (k == i) {
          throw bad();
        }
        coef /= Rational(boost::multiprecision::cpp_int(text.substr(i, k - i)));
        i = k;
        skip();
      }
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip();
      }
    }
    std::string name;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw bad();
    }
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
      name += text[i++];
    }
    if (name.empty() && !have_num) {
      throw bad();
    }
    if (name.empty()) {
      a.constant += sgn * coef;
    } else {
      a.coeffs[name] += sgn * coef;
      if (a.coeffs[name] == 0) {
        a.coeffs.erase(name);
      }
    }
  }
  if (first) {
    throw bad();
  }
  return a;
}

TwistSolution solve_twist_fixed_point(TwistFixedPointProblem const& p) {
  std::size_t n = p.T.rows;
  if (p.T.cols != n || p.theta.size() != n) {
    throw std::invalid_argument("solve_twist_fixed_point: dimensions differ");
  }
  std::vector<std::string> vnames = p.curve_names;
  if (vnames.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      vnames.push_back(std::to_string(i + 1));
    }
  }
  std::set<std::string> pset;
  for (auto const& t : p.theta) {
    for (auto const& [name, c] : t.coeffs) {
      pset.insert(name);
    }
  }
  std::vector<std::string> params(pset.begin(), pset.end());
  std::size_t m = params.size();
  std::size_t cols = n + m + 1;
  // (I - T) v - theta_linear = theta_constant
  RationalMatrix A = RationalMatrix::identity(n) - p.T;
  std::vector<std::vector<Rational>> R(n, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      R[i][j] = A(i, j);
    }
    for (std::size_t k = 0; k < m; ++k) {
      auto it = p.theta[i].coeffs.find(params[k]);
      if (it != p.theta[i].coeffs.end()) {
        R[i][n + k] = -it->second;
      }
    }
    R[i][cols - 1] = p.theta[i].constant;
  }
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c + 1 < cols && row < n; ++c) {
    std::size_t r = row;
    while (r < n && R[r][c] == 0) {
      ++r;
    }
    if (r == n) {
      continue;
    }
    std::swap(R[r], R[row]);
    Rational inv = 1 / R[row][c];
    for (auto& x : R[row]) {
      x *= inv;
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (s != row && R[s][c] != 0) {
        Rational f = R[s][c];
        for (std::size_t j = 0; j < cols; ++j) {
          R[s][j] -= f * R[row][j];
        }
      }
    }
    pivots.push_back(c);
    ++row;
  }
  TwistSolution sol;
  sol.v.assign(n, std::nullopt);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] < n) {
      is_pivot[pivots[r]] = true;
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (r >= pivots.size()) {
      if (R[r][cols - 1] != 0) {
        sol.consistent = false;
      }
      continue;
    }
    std::size_t c = pivots[r];
    Affine a;
    if (c < n) {
      // v_c = rhs - sum others
      a.constant = R[r][cols - 1];
      for (std::size_t j = c + 1; j < n; ++j) {
        if (R[r][j] != 0) {
          a.coeffs["v_" + vnames[j]] = -R[r][j];
        }
      }
      for (std::size_t k = 0; k < m; ++k) {
        if (R[r][n + k] != 0) {
          a.coeffs[params[k]] = -R[r][n + k];
        }
      }
      sol.v[c] = a;
    } else {
      for (std::size_t k = 0; k < m; ++k) {
        if (R[r][n + k] != 0) {
          a.coeffs[params[k]] = R[r][n + k];
        }
      }
      a.constant = -R[r][cols - 1];
      sol.constraints.push_back(a);
    }
  }
  sol.free_rank = static_cast<std::size_t>(
      std::count(is_pivot.begin(), is_pivot.end(), false));
  return sol;
}

// ---------------------------------------------------------------- splitting

namespace {

Word product_of(std::vector<Boundary> const& b, SphereGroup const& G) {
  Word w;
  for (auto const& x : b) {
    w *= x.word;
  }
  return G.normal_form(w);
}

// reduced words over letters +-1..+-rank of length exactly len
void words_of_length(int rank, std::size_t len, std::vector<Word>& out) {
  std::vector<Letter> cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == len) {
      out.emplace_back(cur);
      return;
    }
    for (int x = 1; x <= rank; ++x) {
      for (Letter l : {static_cast<Letter>(x), static_cast<Letter>(-x)}) {
        if (!cur.empty() && cur.back() == -l) {
          continue;
        }
        cur.push_back(l);
        self(self);
        cur.pop_back();
      }
    }
  };
  rec(rec);
}

struct Placement {
  std::vector<int> P;        // positions (0-based) of the curve side
  std::vector<Word> u;       // conjugators for P, letters of the vertex group
  std::vector<int> Q;        // complement positions
  std::vector<Word> v;
  Word g;                    // product over P, vertex letters
};

class Splitter {
 public:
  Splitter(Multicurve const& C, std::size_t bound) : C_(C), bound_(bound) {
    G_ = C.group;
  }

  SplitResult run() {
    SplitResult res;
    TreeOfGroups T;
    T.group = G_;
    SphereVertex v0;
    for (int i = 1; i <= G_.size(); ++i) {
      v0.boundary.push_back({Boundary::puncture, i, 1, G_.generator(i)});
    }
    T.vertices.push_back(v0);
    T.edges.assign(C_.size(), CurveEdge{});
    std::vector<bool> placed(C_.size(), false);
    std::vector<std::string> why(C_.size(), "not-disjoint");
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t c = 0; c < C_.size(); ++c) {
        if (placed[c]) {
          continue;
        }
        if (place(T, static_cast<int>(c), why[c])) {
          placed[c] = true;
          progress = true;
        }
      }
    }
    for (std::size_t c = 0; c < C_.size(); ++c) {
      if (!placed[c]) {
        res.failure = why[c];
        res.failed_curve = static_cast<int>(c);
        return res;
      }
    }
    res.tree = std::move(T);
    return res;
  }

 private:
  // precedence of failure reasons, most specific last
  static int rank_of(std::string const& r) {
    if (r == "bound-exhausted") {
      return 2;
    }
    if (r == "abelianization-inconsistent") {
      return 1;
    }
    return 0;
  }
  static void note(std::string& why, std::string const& r) {
    if (rank_of(r) > rank_of(why)) {
      why = r;
    }
  }

  bool place(TreeOfGroups& T, int c, std::string& why) {
    for (std::size_t vi = 0; vi < T.vertices.size(); ++vi) {
      auto& V = T.vertices[vi];
      int k = static_cast<int>(V.boundary.size());
      if (k < 4) {
        continue;
      }
      auto x = express_in_vertex(V, C_.reps[c]);
      if (!x) {
        continue;
      }
      SphereGroup HV = vertex_group(k);
      auto P = split_set(*x, k);
      if (!P) {
        note(why, "abelianization-inconsistent");
        continue;
      }
      auto pl = search(HV, *x, *P);
      if (!pl) {
        note(why, "bound-exhausted");
        continue;
      }
      split(T, static_cast<int>(vi), c, *pl);
      return true;
    }
    return false;
  }

  static SphereGroup vertex_group(int k) {
    std::vector<std::string> names;
    for (int i = 1; i <= k; ++i) {
      names.push_back("y" + std::to_string(i));
    }
    return SphereGroup(names);
  }

  // a conjugate of the curve (or its inverse) inside the vertex group,
  // written in the vertex generators y1..y(k-1)
  std::optional<Word> express_in_vertex(SphereVertex const& V,
                                        Word const& curve) const {
    std::vector<Word> gens;
    for (std::size_t i = 0; i + 1 < V.boundary.size(); ++i) {
      gens.push_back(G_.normal_form(V.boundary[i].word));
    }
    SubgroupGraph graph(gens, G_.rank());
    auto paths = graph.vertex_paths();
    Word core = cyclically_reduce(G_.normal_form(curve)).core;
    for (Word const& w : {core, core.inverse()}) {
      for (std::size_t r = 0; r < std::max<std::size_t>(w.size(), 1); ++r) {
        Word rot = rotate(w, r);
        for (auto const& p : paths) {
          if (auto e = graph.express(p * rot * p.inverse())) {
            return e;
          }
        }
      }
    }
    return std::nullopt;
  }

  // positions whose abelianized exponent is the larger of two values
  static std::optional<std::vector<int>> split_set(Word const& x, int k) {
    std::vector<long> e(k, 0);
    for (int i = 1; i < k; ++i) {
      e[i - 1] = x.exponent_sum(i);
    }
    long lo = *std::min_element(e.begin(), e.end());
    long hi = *std::max_element(e.begin(), e.end());
    if (hi - lo != 1) {
      return std::nullopt;
    }
    std::vector<int> P;
    for (int i = 0; i < k; ++i) {
      if (e[i] == hi) {
        P.push_back(i);
      }
    }
    if (P.size() < 2 || static_cast<int>(P.size()) > k - 2) {
      return std::nullopt;
    }
    return P;
  }

  // Enumerate conjugator tuples of total length <= budget, calling f on
  // each; f returns true to stop.
  template <class F>
  static bool tuples(std::size_t slots, std::size_t budget,
                     std::vector<std::vector<Word>> const& by_len, F&& f) {
    std::vector<Word> cur(slots);
    auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> bool {
      if (i == slots) {
        return f(cur, budget - left);
      }
      for (std::size_t l = 0; l <= left; ++l) {
        for (auto const& w : by_len[l]) {
          cur[i] = w;
          if (self(self, i + 1, left - l)) {
            return true;
          }
        }
      }
      return false;
    };
    return rec(rec, 0, budget);
  }

  std::optional<Placement> search(SphereGroup const& HV, Word const& x,
                                  std::vector<int> const& Pset) const {
    int k = HV.size();
    std::vector<std::vector<Word>> by_len(bound_ + 1);
    for (std::size_t l = 0; l <= bound_; ++l) {
      words_of_length(HV.rank(), l, by_len[l]);
    }
    ConjClass target = ConjClass::of(HV, x, true);
    std::set<int> inP(Pset.begin(), Pset.end());
    // orderings of the curve side: start at each block start
    std::vector<std::vector<int>> orders;
    for (int s : Pset) {
      if (inP.count((s + k - 1) % k)) {
        continue;
      }
      std::vector<int> ord;
      for (int j = 0; j < k; ++j) {
        int p = (s + j) % k;
        if (inP.count(p)) {
          ord.push_back(p);
        }
      }
      orders.push_back(ord);
    }
    for (std::size_t L = 0; L <= bound_; ++L) {
      for (auto const& ord : orders) {
        std::vector<int> Q;
        for (int j = 1; j < k; ++j) {
          int p = (ord.back() + j) % k;
          if (!inP.count(p)) {
            Q.push_back(p);
          }
        }
        std::optional<Placement> found;
        tuples(ord.size() - 1, L, by_len,
               [&](std::vector<Word> const& us, std::size_t used) {
                 Word g = HV.generator(ord[0] + 1);
                 for (std::size_t i = 1; i < ord.size(); ++i) {
                   g *= HV.generator(ord[i] + 1).conjugate_by(us[i - 1]);
                 }
                 g = HV.normal_form(g);
                 if (ConjClass::of(HV, g, true) != target) {
                   return false;
                 }
                 Word ginv = g.inverse();
                 return tuples(
                     Q.size(), L - used, by_len,
                     [&](std::vector<Word> const& vs, std::size_t) {
                       Word h;
                       for (std::size_t i = 0; i < Q.size(); ++i) {
                         h *= HV.generator(Q[i] + 1).conjugate_by(vs[i]);
                       }
                       if (HV.normal_form(h) != ginv) {
                         return false;
                       }
                       Placement pl;
                       pl.P = ord;
                       pl.u.push_back(Word());
                       pl.u.insert(pl.u.end(), us.begin(), us.end());
                       pl.Q = Q;
                       pl.v = vs;
                       pl.g = g;
                       found = pl;
                       return true;
                     });
               });
        if (found) {
          return found;
        }
      }
    }
    return std::nullopt;
  }

  void split(TreeOfGroups& T, int vi, int c, Placement const& pl) {
    SphereVertex V = T.vertices[vi];
    std::vector<Word> subs;
    for (auto const& b : V.boundary) {
      subs.push_back(G_.normal_form(b.word));
    }
    auto to_ambient = [&](Word const& w) {
      return G_.normal_form(substitute(w, subs));
    };
    Word g = to_ambient(pl.g);
    SphereVertex A;
    SphereVertex B;
    for (std::size_t i = 0; i < pl.P.size(); ++i) {
      Boundary b = V.boundary[pl.P[i]];
      b.word = G_.normal_form(b.word.conjugate_by(to_ambient(pl.u[i])));
      A.boundary.push_back(b);
    }
    A.boundary.push_back({Boundary::edge, c, -1, g.inverse()});
    B.boundary.push_back({Boundary::edge, c, 1, g});
    for (std::size_t i = 0; i < pl.Q.size(); ++i) {
      Boundary b = V.boundary[pl.Q[i]];
      b.word = G_.normal_form(b.word.conjugate_by(to_ambient(pl.v[i])));
      B.boundary.push_back(b);
    }
    int bi = static_cast<int>(T.vertices.size());
    T.vertices[vi] = A;
    T.vertices.push_back(B);
    for (auto const& b : B.boundary) {
      if (b.kind == Boundary::edge && b.index != c) {
        (b.sign > 0 ? T.edges[b.index].positive : T.edges[b.index].negative) =
            bi;
      }
    }
    T.edges[c].generator = g;
    T.edges[c].positive = bi;
    T.edges[c].negative = vi;
  }

  Multicurve const& C_;
  SphereGroup G_;
  std::size_t bound_;
};

}  // namespace

std::vector<std::string> TreeOfGroups::check(Multicurve const& C) const {
  std::vector<std::string> problems;
  std::vector<int> seen(group.size() + 1, 0);
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    auto const& V = vertices[v];
    if (!product_of(V.boundary, group).empty()) {
      problems.push_back("vertex " + std::to_string(v) +
                         ": boundary product is not trivial");
    }
    for (auto const& b : V.boundary) {
      if (b.kind == Boundary::puncture) {
        ++seen.at(b.index);
        if (!is_conjugate(b.word, group.generator(b.index), group)) {
          problems.push_back("vertex " + std::to_string(v) + ": puncture " +
                             std::to_string(b.index) + " has the wrong class");
        }
      } else {
        auto const& E = edges.at(b.index);
        int at = b.sign > 0 ? E.positive : E.negative;
        Word expect = b.sign > 0 ? E.generator : E.generator.inverse();
        if (at != static_cast<int>(v) || !is_conjugate(b.word, expect, group)) {
          problems.push_back("vertex " + std::to_string(v) + ": side of curve " +
                             std::to_string(b.index) + " is inconsistent");
        }
      }
    }
  }
  for (int i = 1; i <= group.size(); ++i) {
    if (seen[i] != 1) {
      problems.push_back("puncture " + std::to_string(i) + " appears " +
                         std::to_string(seen[i]) + " times");
    }
  }
  if (edges.size() != C.size()) {
    problems.push_back("edge count differs from the multicurve");
  }
  for (std::size_t e = 0; e < edges.size() && e < C.size(); ++e) {
    if (ConjClass::of(group, edges[e].generator, true) != C.classes[e]) {
      problems.push_back("edge " + std::to_string(e) +
                         " does not reproduce its curve");
    }
  }
  if (vertices.size() != edges.size() + 1) {
    problems.push_back("graph is not a tree");
  } else {
    // connectivity through the edges
    std::vector<int> comp(vertices.size());
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](int x) {
      while (comp[x] != x) {
        x = comp[x] = comp[comp[x]];
      }
      return x;
    };
    for (auto const& E : edges) {
      if (E.positive < 0 || E.negative < 0) {
        problems.push_back("edge with a missing end");
        return problems;
      }
      comp[find(E.positive)] = find(E.negative);
    }
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      if (find(static_cast<int>(v)) != find(0)) {
        problems.push_back("graph is not connected");
        break;
      }
    }
  }
  return problems;
}

SplitResult mc_to_gog(Multicurve const& C, std::size_t bound) {
  return Splitter(C, bound).run();
}

nlohmann::json tree_json(TreeOfGroups const& T) {
  using nlohmann::json;
  json doc;
  doc["group"] = T.group.names();
  json vs = json::array();
  for (auto const& V : T.vertices) {
    json bs = json::array();
    for (auto const& b : V.boundary) {
      json e = {{"kind", b.kind == Boundary::puncture ? "puncture" : "curve"},
                {"word", T.group.pretty(T.group.normal_form(b.word))}};
      if (b.kind == Boundary::puncture) {
        e["puncture"] = T.group.name(b.index);
      } else {
        e["curve"] = b.index;
        e["side"] = b.sign;
      }
      bs.push_back(e);
    }
    vs.push_back({{"boundary", bs}});
  }
  doc["sphere_vertices"] = vs;
  json es = json::array();
  for (std::size_t e = 0; e < T.edges.size(); ++e) {
    es.push_back({{"curve", e},
                  {"generator", T.group.pretty(T.edges[e].generator)},
                  {"positive", T.edges[e].positive},
                  {"negative", T.edges[e].negative}});
  }
  doc["curve_vertices"] = es;
  return doc;
}

std::string tree_dot(TreeOfGroups const& T) {
  std::ostringstream o;
  o << "graph tree {\n";
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    o << "  S" << v << " [shape=box,label=\"S" << v << ":";
    for (auto const& b : T.vertices[v].boundary) {
      if (b.kind == Boundary::puncture) {
        o << " " << T.group.name(b.index);
      }
    }
    o << "\"];\n";
  }
  for (std::size_t e = 0; e < T.edges.size(); ++e) {
    o << "  C" << e << " [shape=ellipse,label=\""
      << T.group.pretty(T.edges[e].generator) << "\"];\n";
    o << "  S" << T.edges[e].negative << " -- C" << e << ";\n";
    o << "  C" << e << " -- S" << T.edges[e].positive << ";\n";
  }
  o << "}\n";
  return o.str();
}

// ---------------------------------------------------------------- promotion

Promotion promote_bijection(TreeOfGroups const& from, TreeOfGroups const& to,
                            ClassBijection const& h) {
  Promotion res;
  auto fail = [&](int step, std::string why) {
    res.ok = false;
    res.failed_step = step;
    res.reason = std::move(why);
    res.vertices.clear();
    res.edge_conjugators.clear();
    return res;
  };
  SphereGroup const& G2 = to.group;
  int n = from.group.size();
  std::size_t ne = from.edges.size();
  // 1. curves go to curves
  auto is_bijection = [](std::vector<int> const& f, int lo, int size) {
    std::vector<bool> hit(size, false);
    for (int x : f) {
      if (x < lo || x - lo >= size || hit[x - lo]) {
        return false;
      }
      hit[x - lo] = true;
    }
    return static_cast<int>(f.size()) == size;
  };
  if (to.edges.size() != ne || !is_bijection(h.curve, 0, static_cast<int>(ne))) {
    return fail(1, "the bijection does not restrict to the curves");
  }
  if (G2.size() != n || !is_bijection(h.puncture, 1, n)) {
    return fail(1, "the bijection does not restrict to the punctures");
  }
  // 2. vertices determined by their punctures and curves
  auto signature = [](SphereVertex const& V, auto&& mapP, auto&& mapE) {
    std::vector<std::pair<int, int>> s;
    for (auto const& b : V.boundary) {
      s.emplace_back(b.kind,
                     b.kind == Boundary::puncture ? mapP(b.index) : mapE(b.index));
    }
    std::sort(s.begin(), s.end());
    return s;
  };
  auto idP = [](int i) { return i; };
  std::map<std::vector<std::pair<int, int>>, int> where;
  for (std::size_t w = 0; w < to.vertices.size(); ++w) {
    where[signature(to.vertices[w], idP, idP)] = static_cast<int>(w);
  }
  std::vector<int> vmap(from.vertices.size(), -1);
  std::set<int> used;
  for (std::size_t v = 0; v < from.vertices.size(); ++v) {
    auto s = signature(
        from.vertices[v], [&](int i) { return h.puncture[i - 1]; },
        [&](int e) { return h.curve[e]; });
    auto it = where.find(s);
    if (it == where.end() || !used.insert(it->second).second) {
      return fail(2, "vertex " + std::to_string(v) + " has no image vertex");
    }
    vmap[v] = it->second;
  }
  // orientation of each curve under the tree map
  std::vector<int> flip(ne, 1);
  for (std::size_t e = 0; e < ne; ++e) {
    auto const& E = from.edges[e];
    auto const& F = to.edges[h.curve[e]];
    if (vmap[E.positive] == F.positive && vmap[E.negative] == F.negative) {
      flip[e] = 1;
    } else if (vmap[E.positive] == F.negative &&
               vmap[E.negative] == F.positive) {
      flip[e] = -1;
    } else {
      return fail(2, "curve " + std::to_string(e) + " is not mapped to an edge");
    }
  }
  // 3. peripheral sets vertex by vertex
  std::vector<std::vector<int>> pos(from.vertices.size());
  for (std::size_t v = 0; v < from.vertices.size(); ++v) {
    auto const& V = from.vertices[v];
    auto const& W = to.vertices[vmap[v]];
    if (V.boundary.size() != W.boundary.size()) {
      return fail(3, "vertex " + std::to_string(v) + " changes valence");
    }
    for (auto const& b : V.boundary) {
      int found = -1;
      for (std::size_t q = 0; q < W.boundary.size(); ++q) {
        auto const& c = W.boundary[q];
        bool match =
            c.kind == b.kind &&
            (b.kind == Boundary::puncture
                 ? c.index == h.puncture[b.index - 1]
                 : c.index == h.curve[b.index] && c.sign == b.sign * flip[b.index]);
        if (match) {
          found = static_cast<int>(q);
        }
      }
      if (found < 0) {
        return fail(3, "vertex " + std::to_string(v) +
                           ": peripheral classes do not correspond");
      }
      pos[v].push_back(found);
    }
  }
  // 4. vertex isomorphisms by sorting the target boundary into the order of
  // the source boundary with braid moves
  for (std::size_t v = 0; v < from.vertices.size(); ++v) {
    auto const& W = to.vertices[vmap[v]];
    if (!product_of(W.boundary, G2).empty()) {
      return fail(4, "target vertex boundary product is not trivial");
    }
    std::size_t k = W.boundary.size();
    // key of the target entry at q: the source position mapping to q
    std::vector<int> key(k);
    for (std::size_t p = 0; p < k; ++p) {
      key[pos[v][p]] = static_cast<int>(p);
    }
    std::vector<Word> list;
    for (auto const& c : W.boundary) {
      list.push_back(G2.normal_form(c.word));
    }
    for (std::size_t pass = 0; pass < k; ++pass) {
      for (std::size_t a = 0; a + 1 < k; ++a) {
        if (key[a] > key[a + 1]) {
          Word moved = G2.normal_form(list[a] * list[a + 1] * list[a].inverse());
          list[a + 1] = list[a];
          list[a] = moved;
          std::swap(key[a], key[a + 1]);
        }
      }
    }
    res.vertices.push_back({vmap[v], list});
  }
  // 5. edge intertwiners
  for (std::size_t e = 0; e < ne; ++e) {
    auto const& E = from.edges[e];
    Word target = to.edges[h.curve[e]].generator;
    if (flip[e] < 0) {
      target = target.inverse();
    }
    std::optional<Word> first;
    for (int side : {1, -1}) {
      int v = side > 0 ? E.positive : E.negative;
      auto const& V = from.vertices[v];
      for (std::size_t p = 0; p < V.boundary.size(); ++p) {
        auto const& b = V.boundary[p];
        if (b.kind != Boundary::edge || b.index != static_cast<int>(e) ||
            b.sign != side) {
          continue;
        }
        Word img = res.vertices[v].images[p];
        Word want = side > 0 ? target : target.inverse();
        auto c = is_conjugate(img, want, G2);
        if (!c) {
          return fail(5, "curve " + std::to_string(e) +
                             " has no intertwiner on one side");
        }
        if (!first) {
          first = c->representative;
        }
      }
    }
    res.edge_conjugators.push_back(first.value_or(Word()));
  }
  // 6. every distinguished class goes where h says
  for (std::size_t v = 0; v < from.vertices.size(); ++v) {
    auto const& V = from.vertices[v];
    for (std::size_t p = 0; p < V.boundary.size(); ++p) {
      auto const& b = V.boundary[p];
      Word const& img = res.vertices[v].images[p];
      bool ok;
      if (b.kind == Boundary::puncture) {
        ok = ConjClass::of(G2, img) ==
             ConjClass::of(G2, G2.generator(h.puncture[b.index - 1]));
      } else {
        ok = ConjClass::of(G2, img, true) ==
             ConjClass::of(G2, to.edges[h.curve[b.index]].generator, true);
      }
      if (!ok) {
        return fail(6, "vertex " + std::to_string(v) +
                           ": a distinguished class is not mapped by h");
      }
    }
  }
  res.ok = true;
  return res;
}

}  // namespace sphmach
